//! `Aut(PSL_3(4))` acting on the 21 points and 21 lines of the projective
//! plane over `GF(4)`. Objects `0..21` are points, `21..42` lines; a line
//! is stored by its normal vector `n`, and contains `x` when `n . x = 0`.

use std::collections::BTreeMap;

use super::field::{make_field, FiniteField};
use super::projective::AutOrderCheck;
use super::SimpleError;
use crate::group::FiniteGroup;
use crate::perm::Permutation;

const SIMPLE_ORDER: u64 = 20160;
const AUT_ORDER: u64 = 241_920;

type Vec3 = [u32; 3];
type Mat3 = [[u32; 3]; 3];

struct Plane {
    k: FiniteField,
    vectors: Vec<Vec3>,
}

impl Plane {
    fn new() -> Self {
        let k = make_field(2, 2, None).expect("GF(4)");
        let mut vectors = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let v = [a, b, c];
                    if v.iter().find(|&&x| x != 0) == Some(&1) {
                        vectors.push(v);
                    }
                }
            }
        }
        Plane { k, vectors }
    }

    fn normalize(&self, v: Vec3) -> Vec3 {
        let lead = *v.iter().find(|&&x| x != 0).expect("nonzero vector");
        let s = self.k.inv(lead).expect("nonzero");
        v.map(|x| self.k.mul(s, x))
    }

    fn index(&self, v: Vec3) -> usize {
        let n = self.normalize(v);
        self.vectors.iter().position(|&w| w == n).expect("normalized vector is listed")
    }

    fn apply(&self, m: &Mat3, v: Vec3) -> Vec3 {
        let k = &self.k;
        let row = |r: &[u32; 3]| (0..3).fold(0, |acc, j| k.add(acc, k.mul(r[j], v[j])));
        [row(&m[0]), row(&m[1]), row(&m[2])]
    }

    fn inverse_transpose(&self, m: &Mat3) -> Mat3 {
        let k = &self.k;
        let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
            k.sub(k.mul(m[r0][c0], m[r1][c1]), k.mul(m[r0][c1], m[r1][c0]))
        };
        // cofactor matrix is adj^T; divided by det gives the inverse transpose
        let mut cof = [[0u32; 3]; 3];
        for (i, row) in cof.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
                let v = minor(rows[0], rows[1], cols[0], cols[1]);
                *entry = if (i + j) % 2 == 0 { v } else { k.neg(v) };
            }
        }
        let det = (0..3).fold(0, |acc, j| k.add(acc, k.mul(m[0][j], cof[0][j])));
        let inv_det = k.inv(det).expect("invertible matrix");
        cof.map(|row| row.map(|x| k.mul(inv_det, x)))
    }

    /// `x -> M sigma^i(x)` on points, the matching map on lines.
    fn collineation(&self, m: &Mat3, frob: u32) -> Permutation {
        let it = self.inverse_transpose(m);
        let n = self.vectors.len();
        let mut images = vec![0u32; 2 * n];
        for (i, &v) in self.vectors.iter().enumerate() {
            let fv = v.map(|x| self.k.frobenius(x, frob));
            images[i] = self.index(self.apply(m, fv)) as u32;
            images[n + i] = (n + self.index(self.apply(&it, fv))) as u32;
        }
        Permutation::from_images_unchecked(images)
    }

    fn duality(&self) -> Permutation {
        let n = self.vectors.len() as u32;
        Permutation::from_images_unchecked((0..2 * n).map(|i| (i + n) % (2 * n)).collect())
    }

    fn transvections(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                for t in [1, self.k.generator()] {
                    let mut m: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
                    m[i][j] = t;
                    out.push(self.collineation(&m, 0));
                }
            }
        }
        out
    }
}

fn build(gens: &[Permutation], expected: u64) -> Result<FiniteGroup, SimpleError> {
    let g = FiniteGroup::from_permutation_generators_capped(42, gens, AUT_ORDER as usize)?;
    if g.order() as u64 != expected {
        return Err(SimpleError::OrderMismatch { expected, found: g.order() as u64 });
    }
    Ok(g)
}

pub fn psl3_4_group() -> Result<FiniteGroup, SimpleError> {
    Ok(build(&Plane::new().transvections(), SIMPLE_ORDER)?.with_label("PSL(3,4)"))
}

/// `PΓL_3(4)` extended by the point-line duality.
pub fn aut_psl3_4_group() -> Result<FiniteGroup, SimpleError> {
    let plane = Plane::new();
    let mut gens = plane.transvections();
    let w = plane.k.generator();
    gens.push(plane.collineation(&[[w, 0, 0], [0, 1, 0], [0, 0, 1]], 0));
    gens.push(plane.collineation(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1));
    gens.push(plane.duality());
    Ok(build(&gens, AUT_ORDER)?.with_label("Aut(PSL(3,4))"))
}

pub fn verify_psl3_4() -> Result<AutOrderCheck, SimpleError> {
    let aut = aut_psl3_4_group()?;
    let mut histogram = BTreeMap::new();
    for o in aut.element_orders() {
        *histogram.entry(o).or_insert(0u64) += 1;
    }
    let violations: Vec<u64> = histogram.keys().copied().filter(|o| !SIMPLE_ORDER.is_multiple_of(*o)).collect();
    Ok(AutOrderCheck {
        case: "psl3_4".into(),
        simple_order: SIMPLE_ORDER,
        aut_order: AUT_ORDER,
        method: "bfs".into(),
        passed: violations.is_empty(),
        histogram,
        violations,
        reproducers: Vec::new(),
    })
}
