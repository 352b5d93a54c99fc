//! Text formats.
//!
//! `.ctab`: first line `n`, then `n` rows of `n` whitespace-separated
//! 1-based element numbers; element 1 is the identity.
//!
//! `.pgrp`: `name <string>`, `degree <n>`, one or more `gen <images>`
//! lines with 1-based images, then `end`. Lines starting with `#` are
//! comments.

use std::fmt::Write as _;
use std::path::Path;

use super::{FiniteGroup, GroupError};
use crate::perm::Permutation;

fn parse_err(line: usize, message: impl Into<String>) -> GroupError {
    GroupError::Parse { line, message: message.into() }
}

pub fn parse_ctab(text: &str) -> Result<FiniteGroup, GroupError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first, header) = lines.next().ok_or_else(|| parse_err(1, "missing order line"))?;
    let n: usize = header
        .parse()
        .map_err(|_| parse_err(first, format!("expected element count, found `{header}`")))?;
    if n == 0 {
        return Err(GroupError::Empty);
    }
    let mut table = Vec::with_capacity(n);
    for row in 0..n {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| parse_err(first + row + 1, format!("expected {n} rows, found {row}")))?;
        let entries = line
            .split_whitespace()
            .map(|tok| match tok.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(parse_err(lineno, format!("bad entry `{tok}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        table.push(entries);
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(parse_err(lineno, "trailing data after table"));
    }
    let identity_first = table.iter().enumerate().all(|(g, row)| {
        row.len() == n && table[0].get(g) == Some(&g) && row.first() == Some(&g)
    });
    if !identity_first {
        // let the validator name a structural problem if there is one
        FiniteGroup::from_multiplication_table(&table)?;
        return Err(parse_err(first + 1, "element 1 must be the identity"));
    }
    FiniteGroup::from_multiplication_table(&table)
}

pub fn read_ctab(path: &Path) -> Result<FiniteGroup, GroupError> {
    let text = std::fs::read_to_string(path).map_err(|e| GroupError::Io(format!("{}: {e}", path.display())))?;
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("ctab").to_string();
    Ok(parse_ctab(&text)?.with_label(label))
}

pub fn write_ctab(group: &FiniteGroup) -> String {
    let mut out = format!("{}\n", group.order());
    for a in group.elements() {
        let row: Vec<String> = group.elements().map(|b| (group.mul(a, b) + 1).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgrpFile {
    pub name: String,
    pub degree: usize,
    pub gens: Vec<Permutation>,
}

impl PgrpFile {
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        Ok(FiniteGroup::from_permutation_generators(self.degree, &self.gens)?.with_label(self.name.clone()))
    }
}

pub fn parse_pgrp(text: &str) -> Result<PgrpFile, GroupError> {
    let mut name = None;
    let mut degree = None;
    let mut gens = Vec::new();
    let mut ended = false;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if ended {
            return Err(parse_err(lineno, "content after `end`"));
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "name" => name = Some(rest.to_string()),
            "degree" => {
                degree = Some(rest.parse::<usize>().map_err(|_| parse_err(lineno, format!("bad degree `{rest}`")))?)
            }
            "gen" => {
                let n = degree.ok_or_else(|| parse_err(lineno, "`gen` before `degree`"))?;
                let images = rest
                    .split_whitespace()
                    .map(|tok| match tok.parse::<u32>() {
                        Ok(v) if v >= 1 => Ok(v - 1),
                        _ => Err(parse_err(lineno, format!("bad image `{tok}`"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if images.len() != n {
                    return Err(parse_err(lineno, format!("expected {n} images, found {}", images.len())));
                }
                gens.push(Permutation::from_images(images).map_err(|e| parse_err(lineno, e.to_string()))?);
            }
            "end" => ended = true,
            other => return Err(parse_err(lineno, format!("unknown keyword `{other}`"))),
        }
    }
    if !ended {
        return Err(parse_err(text.lines().count(), "missing `end`"));
    }
    let degree = degree.ok_or_else(|| parse_err(0, "missing `degree`"))?;
    if gens.is_empty() {
        return Err(parse_err(0, "no `gen` lines"));
    }
    Ok(PgrpFile { name: name.unwrap_or_else(|| "unnamed".into()), degree, gens })
}

pub fn read_pgrp(path: &Path) -> Result<FiniteGroup, GroupError> {
    let text = std::fs::read_to_string(path).map_err(|e| GroupError::Io(format!("{}: {e}", path.display())))?;
    parse_pgrp(&text)?.build()
}

pub fn write_pgrp(name: &str, degree: usize, gens: &[Permutation]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name {name}");
    let _ = writeln!(out, "degree {degree}");
    for g in gens {
        let images: Vec<String> = g.images().iter().map(|&i| (i + 1).to_string()).collect();
        let _ = writeln!(out, "gen {}", images.join(" "));
    }
    out.push_str("end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{builtin_group, FamilySpec};

    #[test]
    fn ctab_round_trip() {
        let d4 = builtin_group(&FamilySpec::Dihedral(4)).unwrap();
        let text = write_ctab(&d4);
        let back = parse_ctab(&text).unwrap();
        assert_eq!(back.to_table(), d4.to_table());
    }

    #[test]
    fn ctab_requires_identity_first() {
        let err = parse_ctab("2\n2 1\n1 2\n").unwrap_err();
        assert!(matches!(err, GroupError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn ctab_reports_non_associative_tables() {
        let text = "5\n1 2 3 4 5\n2 1 4 5 3\n3 5 1 2 4\n4 3 5 1 2\n5 4 2 3 1\n";
        assert!(matches!(parse_ctab(text), Err(GroupError::NotAssociative { .. })));
        assert!(matches!(parse_ctab("2\n1 2\n"), Err(GroupError::Parse { .. })));
        assert!(matches!(parse_ctab("2\n1 x\n2 1\n"), Err(GroupError::Parse { line: 2, .. })));
    }

    #[test]
    fn pgrp_round_trip() {
        let text = "# S3\nname s3\ndegree 3\ngen 2 1 3\ngen 2 3 1\nend\n";
        let file = parse_pgrp(text).unwrap();
        assert_eq!(file.name, "s3");
        let g = file.build().unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.label(), "s3");
        assert_eq!(write_pgrp(&file.name, file.degree, &file.gens), text.trim_start_matches("# S3\n"));
    }

    #[test]
    fn pgrp_errors() {
        assert!(parse_pgrp("degree 3\ngen 1 2\nend\n").is_err());
        assert!(parse_pgrp("degree 3\ngen 1 1 2\nend\n").is_err());
        assert!(parse_pgrp("degree 3\ngen 1 2 3\n").is_err());
        assert!(parse_pgrp("degree 3\nfoo\nend\n").is_err());
    }
}
