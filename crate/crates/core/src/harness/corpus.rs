//! Corpus manifests: which groups to verify and under which caps.
//!
//! ```toml
//! [caps]
//! max_group_order = 1024
//! max_automorphisms = 1048576
//!
//! [[group]]
//! source = "builtin:dihedral:6"
//!
//! [[group]]
//! source = "tables/q8.ctab"
//! label = "q8-from-table"
//! tier = "slow"
//! ```

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::HarnessError;
use crate::autgrp::{AutConfig, DEFAULT_AUT_GROUP_CAP, DEFAULT_MAX_AUTOMORPHISMS};
use crate::group::{builtin_group, read_ctab, read_pgrp, FamilySpec, FiniteGroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSource {
    Builtin(FamilySpec),
    Ctab(PathBuf),
    Pgrp(PathBuf),
}

impl GroupSource {
    /// `builtin:<family>`, `ctab:<path>`, `pgrp:<path>`, or a path ending
    /// in `.ctab` / `.pgrp`.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let text = text.trim();
        if let Some(spec) = text.strip_prefix("builtin:") {
            return Ok(GroupSource::Builtin(spec.parse()?));
        }
        if let Some(path) = text.strip_prefix("ctab:") {
            return Ok(GroupSource::Ctab(path.into()));
        }
        if let Some(path) = text.strip_prefix("pgrp:") {
            return Ok(GroupSource::Pgrp(path.into()));
        }
        match Path::new(text).extension().and_then(|e| e.to_str()) {
            Some("ctab") => Ok(GroupSource::Ctab(text.into())),
            Some("pgrp") => Ok(GroupSource::Pgrp(text.into())),
            _ => Err(HarnessError::Usage(format!("unrecognized group source `{text}`"))),
        }
    }

    fn resolve(self, base: Option<&Path>) -> Self {
        let join = |p: PathBuf| match base {
            Some(b) if p.is_relative() => b.join(p),
            _ => p,
        };
        match self {
            GroupSource::Ctab(p) => GroupSource::Ctab(join(p)),
            GroupSource::Pgrp(p) => GroupSource::Pgrp(join(p)),
            other => other,
        }
    }

    pub fn default_label(&self) -> String {
        match self {
            GroupSource::Builtin(spec) => spec.to_string(),
            GroupSource::Ctab(p) | GroupSource::Pgrp(p) => {
                p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned())
            }
        }
    }

    pub fn load(&self) -> Result<FiniteGroup, HarnessError> {
        let group = match self {
            GroupSource::Builtin(spec) => builtin_group(spec),
            GroupSource::Ctab(p) => read_ctab(p),
            GroupSource::Pgrp(p) => read_pgrp(p),
        };
        group.map_err(|e| HarnessError::Input(format!("{}: {e}", self.describe())))
    }

    fn describe(&self) -> String {
        match self {
            GroupSource::Builtin(spec) => format!("builtin:{spec}"),
            GroupSource::Ctab(p) => p.display().to_string(),
            GroupSource::Pgrp(p) => p.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    #[default]
    Fast,
    Slow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub label: String,
    pub source: GroupSource,
    pub tier: Tier,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusManifest {
    pub entries: Vec<CorpusEntry>,
    pub caps: AutConfig,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    #[serde(default)]
    caps: RawCaps,
    #[serde(default)]
    group: Vec<RawEntry>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawCaps {
    max_group_order: Option<usize>,
    max_automorphisms: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    source: String,
    label: Option<String>,
    #[serde(default)]
    tier: Tier,
}

impl CorpusManifest {
    pub fn new(entries: Vec<CorpusEntry>, caps: AutConfig) -> Result<Self, HarnessError> {
        if entries.is_empty() {
            return Err(HarnessError::Input("corpus has no entries".into()));
        }
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.label.as_str()) {
                return Err(HarnessError::Input(format!("duplicate label `{}`", e.label)));
            }
        }
        Ok(CorpusManifest { entries, caps })
    }

    /// Fast-tier entries from source strings, labelled by default.
    pub fn from_sources<S: AsRef<str>>(sources: &[S], caps: AutConfig) -> Result<Self, HarnessError> {
        let entries = sources
            .iter()
            .map(|s| {
                let source = GroupSource::parse(s.as_ref())?;
                Ok(CorpusEntry { label: source.default_label(), source, tier: Tier::Fast })
            })
            .collect::<Result<Vec<_>, HarnessError>>()?;
        CorpusManifest::new(entries, caps)
    }

    /// Parses TOML; relative paths are taken relative to `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self, HarnessError> {
        let raw: RawManifest = toml::from_str(text).map_err(|e| HarnessError::Input(format!("manifest: {e}")))?;
        let defaults = AutConfig::default();
        let caps = AutConfig {
            max_group_order: raw.caps.max_group_order.unwrap_or(defaults.max_group_order),
            max_automorphisms: raw.caps.max_automorphisms.unwrap_or(defaults.max_automorphisms),
        };
        let entries = raw
            .group
            .into_iter()
            .map(|e| {
                let source = GroupSource::parse(&e.source)?.resolve(base);
                let label = e.label.unwrap_or_else(|| source.default_label());
                Ok(CorpusEntry { label, source, tier: e.tier })
            })
            .collect::<Result<Vec<_>, HarnessError>>()?;
        CorpusManifest::new(entries, caps)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))?;
        CorpusManifest::parse(&text, path.parent())
    }
}

/// Builtin groups of order at most 64 from the cyclic, dihedral, elementary
/// abelian and quaternion families, symmetric groups up to degree 5,
/// alternating groups up to degree 6, and products of two nontrivial cyclic
/// groups of order at most 8.
pub fn standard_corpus() -> CorpusManifest {
    let mut specs: Vec<FamilySpec> = Vec::new();
    specs.extend((1..=64).map(FamilySpec::Cyclic));
    specs.extend((1..=32).map(FamilySpec::Dihedral));
    for p in [2usize, 3, 5, 7] {
        let mut k = 1u32;
        while p.pow(k) <= 64 {
            specs.push(FamilySpec::ElementaryAbelian { p, k });
            k += 1;
        }
    }
    specs.extend([8, 16, 32].map(FamilySpec::Quaternion));
    specs.extend((1..=5).map(FamilySpec::Symmetric));
    specs.extend((1..=6).map(FamilySpec::Alternating));
    for a in 2..=8 {
        for b in a..=8 {
            specs.push(FamilySpec::Product(vec![FamilySpec::Cyclic(a), FamilySpec::Cyclic(b)]));
        }
    }
    let entries = specs
        .into_iter()
        .map(|spec| CorpusEntry { label: spec.to_string(), source: GroupSource::Builtin(spec), tier: Tier::Fast })
        .collect();
    CorpusManifest::new(entries, AutConfig { max_group_order: DEFAULT_AUT_GROUP_CAP, max_automorphisms: DEFAULT_MAX_AUTOMORPHISMS })
        .expect("standard corpus labels are distinct")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn source_strings() {
        assert_eq!(GroupSource::parse("builtin:cyclic:12").unwrap(), GroupSource::Builtin(FamilySpec::Cyclic(12)));
        assert_eq!(GroupSource::parse("a/b.ctab").unwrap(), GroupSource::Ctab("a/b.ctab".into()));
        assert_eq!(GroupSource::parse("pgrp:x").unwrap(), GroupSource::Pgrp("x".into()));
        assert!(GroupSource::parse("cyclic:12").is_err());
        assert!(GroupSource::parse("builtin:cyclic:x").is_err());
    }

    #[test]
    fn manifest_parsing() {
        let m = CorpusManifest::parse(
            "[caps]\nmax_group_order = 100\n\n[[group]]\nsource = \"builtin:cyclic:4\"\n\n[[group]]\nsource = \"t/q.ctab\"\nlabel = \"q\"\ntier = \"slow\"\n",
            Some(Path::new("/base")),
        )
        .unwrap();
        assert_eq!(m.caps.max_group_order, 100);
        assert_eq!(m.caps.max_automorphisms, DEFAULT_MAX_AUTOMORPHISMS);
        assert_eq!(m.entries[0].label, "cyclic:4");
        assert_eq!(m.entries[1].source, GroupSource::Ctab("/base/t/q.ctab".into()));
        assert_eq!(m.entries[1].tier, Tier::Slow);
        assert!(CorpusManifest::parse("", None).is_err());
        assert!(CorpusManifest::parse("[[group]]\nsource = \"builtin:cyclic:4\"\n[[group]]\nsource = \"builtin:cyclic:4\"\n", None).is_err());
        assert!(CorpusManifest::parse("[[group]]\nsrc = \"x\"\n", None).is_err());
    }

    #[test]
    fn standard_corpus_contents() {
        let c = standard_corpus();
        let labels: HashSet<&str> = c.entries.iter().map(|e| e.label.as_str()).collect();
        for l in ["cyclic:64", "dihedral:32", "elementary_abelian:2:6", "quaternion:32", "symmetric:5", "alternating:6", "cyclic:8*cyclic:8"] {
            assert!(labels.contains(l), "{l}");
        }
        assert_eq!(c.entries.len(), 64 + 32 + 13 + 3 + 5 + 6 + 28);
    }
}
