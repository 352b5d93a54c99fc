//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) these dispatch to rayon;
//! without it they run the same closures sequentially. All callers reduce
//! with associative, commutative operations or sort afterwards, so the two
//! builds produce identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..len`, preserving index order in the output.
#[cfg(feature = "parallel")]
pub fn map_range<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..len).map(f).collect()
}

/// Map `f` over a slice, preserving order.
#[cfg(feature = "parallel")]
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Fold `0..len` in chunks and combine the partial results with `reduce`.
/// `reduce` must be associative and commutative with `identity` as unit.
#[cfg(feature = "parallel")]
pub fn fold_range<A, Id, F, R>(len: usize, identity: Id, fold: F, reduce: R) -> A
where
    A: Send,
    Id: Fn() -> A + Sync + Send,
    F: Fn(A, usize) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    (0..len)
        .into_par_iter()
        .fold(&identity, &fold)
        .reduce(&identity, &reduce)
}

#[cfg(not(feature = "parallel"))]
pub fn fold_range<A, Id, F, R>(len: usize, identity: Id, fold: F, _reduce: R) -> A
where
    A: Send,
    Id: Fn() -> A + Sync + Send,
    F: Fn(A, usize) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    (0..len).fold(identity(), fold)
}

/// Run `op` on a pool with `jobs` worker threads (0 = library default).
/// In sequential builds `jobs` is ignored.
#[cfg(feature = "parallel")]
pub fn with_jobs<R: Send>(jobs: usize, op: impl FnOnce() -> R + Send) -> R {
    if jobs == 0 {
        return op();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(op),
        Err(_) => op(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_jobs<R: Send>(_jobs: usize, op: impl FnOnce() -> R + Send) -> R {
    op()
}

/// Whether this build dispatches to rayon.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_and_fold_agree_with_iterators() {
        let squares = map_range(100, |i| i * i);
        assert_eq!(squares, (0..100).map(|i| i * i).collect::<Vec<_>>());
        let total = fold_range(1000, || 0u64, |acc, i| acc + i as u64, |a, b| a + b);
        assert_eq!(total, 999 * 1000 / 2);
        let doubled = map_slice(&[1, 2, 3], |x| x * 2);
        assert_eq!(doubled, vec![2, 4, 6]);
    }

    #[test]
    fn job_count_does_not_change_results() {
        let a = with_jobs(1, || fold_range(500, || 1u64, |acc, i| num_integer::lcm(acc, (i % 17 + 1) as u64), num_integer::lcm));
        let b = with_jobs(4, || fold_range(500, || 1u64, |acc, i| num_integer::lcm(acc, (i % 17 + 1) as u64), num_integer::lcm));
        assert_eq!(a, b);
    }
}
