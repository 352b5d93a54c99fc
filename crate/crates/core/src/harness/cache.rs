//! Memoized automorphism data.
//!
//! With a cache directory, enumerated automorphism groups are stored as
//! `aut-<hash>.json` holding the generators they were built from, where
//! `<hash>` is [`FiniteGroup::content_hash`]. Rebuilding from those
//! generators reproduces the same numbering, so reports do not depend on
//! whether the cache was warm.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::affine::{frak_f, maffo};
use crate::autgrp::{AutConfig, AutData, AutError, AutomorphismGroup, LinearAutomorphisms};
use crate::group::FiniteGroup;
use crate::perm::Permutation;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "HOLO_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CachedAut {
    order: usize,
    generators: Vec<Vec<u32>>,
}

/// The values of a group the inequality checks compare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSummary {
    pub order: usize,
    pub f_value: BigUint,
    pub mao: u64,
    pub maffo: u64,
}

#[derive(Debug, Default)]
pub struct AutCache {
    dir: Option<PathBuf>,
    profiles: Mutex<HashMap<String, Arc<ProfileSummary>>>,
}

impl AutCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        AutCache { dir, profiles: Mutex::new(HashMap::new()) }
    }

    /// Uses `HOLO_CACHE_DIR` when set and non-empty.
    pub fn from_env() -> Self {
        AutCache::new(std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path_for(&self, group: &FiniteGroup) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("aut-{}.json", group.content_hash())))
    }

    fn read(&self, group: &FiniteGroup, config: &AutConfig) -> Option<AutomorphismGroup> {
        let text = std::fs::read_to_string(self.path_for(group)?).ok()?;
        let cached: CachedAut = serde_json::from_str(&text).ok()?;
        if cached.order != group.order() {
            return None;
        }
        let gens = cached
            .generators
            .into_iter()
            .map(Permutation::from_images)
            .collect::<Result<Vec<_>, _>>()
            .ok()?;
        AutomorphismGroup::from_generators(group, &gens, Some(config)).ok()
    }

    fn write(&self, group: &FiniteGroup, aut: &AutomorphismGroup) {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path_for(group)) else {
            return;
        };
        let cached = CachedAut {
            order: group.order(),
            generators: aut.build_generators().iter().map(|p| p.images().to_vec()).collect(),
        };
        let Ok(text) = serde_json::to_string(&cached) else {
            return;
        };
        // best effort; a failed write only costs a recomputation later
        if std::fs::create_dir_all(dir).is_ok() {
            let tmp = path.with_extension(format!("tmp{}", std::process::id()));
            if std::fs::write(&tmp, text).is_ok() {
                let _ = std::fs::rename(&tmp, &path);
            }
        }
    }

    pub fn aut_data(&self, group: &FiniteGroup, config: &AutConfig) -> Result<AutData, AutError> {
        if let Some(linear) = LinearAutomorphisms::new(group) {
            if linear.order() > BigUint::from(config.max_automorphisms) {
                return Ok(AutData::Linear(linear));
            }
        }
        if let Some(aut) = self.read(group, config) {
            return Ok(AutData::Enumerated(aut));
        }
        let data = AutData::compute(group, config)?;
        if let AutData::Enumerated(aut) = &data {
            self.write(group, aut);
        }
        Ok(data)
    }

    /// Order, F, mao and maffo of a group, memoized by content hash.
    pub fn profile(
        &self,
        group: &FiniteGroup,
        config: &AutConfig,
        class_reps: bool,
    ) -> Result<Arc<ProfileSummary>, AutError> {
        let key = format!("{}:{class_reps}", group.content_hash());
        if let Some(p) = self.profiles.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(p));
        }
        let aut = self.aut_data(group, config)?;
        let reps = aut.representatives(class_reps);
        let summary = Arc::new(ProfileSummary {
            order: group.order(),
            f_value: frak_f(group, &reps).value.to_big(),
            mao: aut.mao(),
            maffo: maffo(group, &reps),
        });
        self.profiles.lock().expect("cache lock").insert(key, Arc::clone(&summary));
        Ok(summary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_group;

    #[test]
    fn disk_round_trip_keeps_numbering() {
        let dir = tempfile::tempdir().unwrap();
        let cache = AutCache::new(Some(dir.path().to_path_buf()));
        let g = builtin_group(&"dihedral:6".parse().unwrap()).unwrap();
        let config = AutConfig::default();
        let cold = cache.aut_data(&g, &config).unwrap();
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        let warm = cache.aut_data(&g, &config).unwrap();
        assert_eq!(cold.representatives(false).as_ref(), warm.representatives(false).as_ref());
        assert_eq!(cold.out_exponent(), warm.out_exponent());
    }

    #[test]
    fn corrupt_entries_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = AutCache::new(Some(dir.path().to_path_buf()));
        let g = builtin_group(&"cyclic:9".parse().unwrap()).unwrap();
        std::fs::write(cache.path_for(&g).unwrap(), "{not json").unwrap();
        assert_eq!(cache.aut_data(&g, &AutConfig::default()).unwrap().order(), BigUint::from(6u32));
    }

    #[test]
    fn profiles_are_memoized() {
        let cache = AutCache::new(None);
        let g = builtin_group(&"symmetric:3".parse().unwrap()).unwrap();
        let a = cache.profile(&g, &AutConfig::default(), false).unwrap();
        let b = cache.profile(&g, &AutConfig::default(), false).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!((a.f_value.clone(), a.mao, a.maffo), (BigUint::from(6u32), 3, 6));
    }
}
