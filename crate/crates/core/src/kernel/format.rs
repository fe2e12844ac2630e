//! JSON interchange format for atom structures.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::relation::Relation;
use super::structure::{
    pair_count, pair_index, AtomId, AtomStructure, CaAtomStructure, RaAtomStructure, TripleSet,
};
use crate::error::{Error, Result};

/// Name of the rule-defined triple set rebuilt from the identity set alone.
pub const PLACEHOLDER_FORB: &str = "placeholder-Forb";

#[derive(Serialize, Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct RawFile {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    dimension: Option<usize>,
    atoms: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cyl: Option<Vec<Vec<(String, String)>>>,
    /// Equivalence classes per coordinate; an alternative to `cyl`.
    #[serde(rename = "cylClasses", skip_serializing_if = "Option::is_none")]
    cyl_classes: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diag: Option<BTreeMap<String, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    identity: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converse: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    triples: Option<RawTriples>,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<serde_json::Value>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawTriples {
    mode: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    list: Vec<(String, String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<String>,
}

fn lookup(index: &HashMap<&str, AtomId>, name: &str, loc: impl FnOnce() -> String) -> Result<AtomId> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| Error::format(loc(), format!("unknown atom {name:?}")))
}

/// Parse and validate an interchange document.
pub fn load_structure(text: &str) -> Result<AtomStructure> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| {
        Error::format(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    let mut index = HashMap::new();
    for (a, name) in raw.atoms.iter().enumerate() {
        if index.insert(name.as_str(), a as AtomId).is_some() {
            return Err(Error::format(format!("atoms[{a}]"), format!("duplicate atom {name:?}")));
        }
    }
    if raw.atoms.is_empty() {
        return Err(Error::format("atoms", "no atoms"));
    }
    let size = raw.atoms.len();
    let labels = match &raw.labels {
        None => None,
        Some(map) => {
            let mut v = vec![String::new(); size];
            for (k, text) in map {
                let a = lookup(&index, k, || format!("labels[{k:?}]"))?;
                v[a as usize] = text.clone();
            }
            Some(v)
        }
    };
    let s = match raw.kind.as_str() {
        "CA" => {
            let n = raw
                .dimension
                .ok_or_else(|| Error::format("dimension", "missing for kind CA"))?;
            if !(2..=super::structure::MAX_DIMENSION).contains(&n) {
                return Err(Error::format("dimension", format!("unsupported dimension {n}")));
            }
            let cyl: Vec<Relation> = match (&raw.cyl, &raw.cyl_classes) {
                (Some(pairs), None) => {
                    if pairs.len() != n {
                        return Err(Error::format("cyl", format!("expected {n} relations")));
                    }
                    let mut out = Vec::new();
                    for (i, list) in pairs.iter().enumerate() {
                        let mut rows = vec![Vec::new(); size];
                        for (k, (a, b)) in list.iter().enumerate() {
                            let a = lookup(&index, a, || format!("cyl[{i}][{k}][0]"))?;
                            let b = lookup(&index, b, || format!("cyl[{i}][{k}][1]"))?;
                            rows[a as usize].push(b);
                        }
                        let r = Relation::from_rows(rows);
                        if let Some(a) = r.is_reflexive() {
                            return Err(Error::format(
                                format!("cyl[{i}]"),
                                format!("not reflexive at {:?}", raw.atoms[a as usize]),
                            ));
                        }
                        if let Some((a, b)) = r.symmetry_violation() {
                            return Err(Error::format(
                                format!("cyl[{i}]"),
                                format!(
                                    "not symmetric: ({:?}, {:?})",
                                    raw.atoms[a as usize], raw.atoms[b as usize]
                                ),
                            ));
                        }
                        out.push(r);
                    }
                    out
                }
                (None, Some(classes)) => {
                    if classes.len() != n {
                        return Err(Error::format("cylClasses", format!("expected {n} partitions")));
                    }
                    let mut out = Vec::new();
                    for (i, parts) in classes.iter().enumerate() {
                        let mut ids = vec![u64::MAX; size];
                        for (c, class) in parts.iter().enumerate() {
                            for (k, a) in class.iter().enumerate() {
                                let a = lookup(&index, a, || format!("cylClasses[{i}][{c}][{k}]"))?;
                                if ids[a as usize] != u64::MAX {
                                    return Err(Error::format(
                                        format!("cylClasses[{i}][{c}][{k}]"),
                                        "atom in two classes",
                                    ));
                                }
                                ids[a as usize] = c as u64;
                            }
                        }
                        if let Some(a) = ids.iter().position(|&c| c == u64::MAX) {
                            return Err(Error::format(
                                format!("cylClasses[{i}]"),
                                format!("atom {:?} in no class", raw.atoms[a]),
                            ));
                        }
                        out.push(Relation::from_class_ids(&ids));
                    }
                    out
                }
                _ => return Err(Error::format("cyl", "exactly one of cyl/cylClasses required")),
            };
            let mut diag = vec![FixedBitSet::with_capacity(size); pair_count(n)];
            if let Some(map) = &raw.diag {
                for (key, list) in map {
                    let loc = format!("diag[{key:?}]");
                    let (i, j) = key
                        .split_once(',')
                        .and_then(|(i, j)| Some((i.trim().parse::<usize>().ok()?, j.trim().parse::<usize>().ok()?)))
                        .filter(|&(i, j)| i < j && j < n)
                        .ok_or_else(|| Error::format(loc.clone(), "key must be \"i,j\" with i < j < n"))?;
                    for (k, a) in list.iter().enumerate() {
                        let a = lookup(&index, a, || format!("{loc}[{k}]"))?;
                        diag[pair_index(n, i, j)].insert(a as usize);
                    }
                }
            }
            let ca = CaAtomStructure::new(n, raw.atoms.clone(), cyl, diag)
                .map_err(|e| Error::format("structure", e.to_string()))?;
            let ca = match labels {
                Some(l) => ca.with_labels(l)?,
                None => ca,
            };
            AtomStructure::Ca(match raw.provenance {
                Some(p) => ca.with_provenance(p),
                None => ca,
            })
        }
        "RA" => {
            let mut identity = FixedBitSet::with_capacity(size);
            for (k, a) in raw.identity.iter().flatten().enumerate() {
                identity.insert(lookup(&index, a, || format!("identity[{k}]"))? as usize);
            }
            let conv_map = raw
                .converse
                .as_ref()
                .ok_or_else(|| Error::format("converse", "missing for kind RA"))?;
            let mut converse = vec![u32::MAX; size];
            for (k, v) in conv_map {
                let a = lookup(&index, k, || format!("converse[{k:?}]"))?;
                converse[a as usize] = lookup(&index, v, || format!("converse[{k:?}]"))?;
            }
            if let Some(a) = converse.iter().position(|&c| c == u32::MAX) {
                return Err(Error::format(
                    "converse",
                    format!("no converse for {:?}", raw.atoms[a]),
                ));
            }
            let t = raw
                .triples
                .as_ref()
                .ok_or_else(|| Error::format("triples", "missing for kind RA"))?;
            let mut list = Vec::with_capacity(t.list.len());
            for (k, (a, b, c)) in t.list.iter().enumerate() {
                list.push((
                    lookup(&index, a, || format!("triples.list[{k}][0]"))?,
                    lookup(&index, b, || format!("triples.list[{k}][1]"))?,
                    lookup(&index, c, || format!("triples.list[{k}][2]"))?,
                ));
            }
            let triples = match t.mode.as_str() {
                "consistent" => TripleSet::from_list(size, list),
                "forbidden" => {
                    let forbidden = TripleSet::from_list(size, list);
                    TripleSet::from_rule(size, "complement", move |a, b, c| !forbidden.contains(a, b, c))
                }
                "rule" if t.rule.as_deref() == Some(PLACEHOLDER_FORB) => {
                    placeholder_forb(identity.clone())
                }
                "rule" => {
                    return Err(Error::format("triples.rule", "unknown triple rule"));
                }
                other => {
                    return Err(Error::format(
                        "triples.mode",
                        format!("expected consistent|forbidden|rule, got {other:?}"),
                    ))
                }
            };
            let ra = RaAtomStructure::new(raw.atoms.clone(), identity, converse, triples)
                .map_err(|e| Error::format("structure", e.to_string()))?;
            let ra = match labels {
                Some(l) => ra.with_labels(l)?,
                None => ra,
            };
            AtomStructure::Ra(match raw.provenance {
                Some(p) => ra.with_provenance(p),
                None => ra,
            })
        }
        other => {
            return Err(Error::format("kind", format!("expected \"CA\" or \"RA\", got {other:?}")))
        }
    };
    Ok(s)
}

/// Identity law plus full symmetry: a triple containing an identity atom needs the other two
/// equal; every other triple is consistent.
pub fn placeholder_forb(identity: FixedBitSet) -> TripleSet {
    let size = identity.len();
    TripleSet::from_rule(size, PLACEHOLDER_FORB, move |a, b, c| {
        let (ia, ib, ic) = (
            identity.contains(a as usize),
            identity.contains(b as usize),
            identity.contains(c as usize),
        );
        if ia || ib || ic {
            (ia && b == c) || (ib && a == c) || (ic && a == b)
        } else {
            true
        }
    })
}

/// Up to this many atoms the `cyl` field is written as explicit pairs.
pub const PAIR_LIST_LIMIT: usize = 256;

/// Serialize to the interchange format.
pub fn structure_to_json(s: &AtomStructure) -> serde_json::Value {
    let mut raw = RawFile::default();
    match s {
        AtomStructure::Ca(ca) => {
            let n = ca.dimension();
            raw.kind = "CA".into();
            raw.dimension = Some(n);
            raw.atoms = ca.names().to_vec();
            raw.labels = ca.labels().map(|l| {
                ca.names().iter().cloned().zip(l.iter().cloned()).collect()
            });
            let all_eq = (0..n).all(|i| ca.cyl(i).is_equivalence());
            if ca.atom_count() <= PAIR_LIST_LIMIT || !all_eq {
                raw.cyl = Some(
                    (0..n)
                        .map(|i| {
                            ca.cyl(i)
                                .pairs()
                                .map(|(a, b)| (ca.name(a).to_string(), ca.name(b).to_string()))
                                .collect()
                        })
                        .collect(),
                );
            } else {
                raw.cyl_classes = Some(
                    (0..n)
                        .map(|i| {
                            let t = ca.cyl(i);
                            let mut seen = vec![false; t.class_count().unwrap()];
                            let mut out = Vec::new();
                            for a in 0..ca.atom_count() as AtomId {
                                let c = t.class_of(a).unwrap() as usize;
                                if !seen[c] {
                                    seen[c] = true;
                                    out.push(t.row(a).iter().map(|&b| ca.name(b).to_string()).collect());
                                }
                            }
                            out
                        })
                        .collect(),
                );
            }
            let mut diag = BTreeMap::new();
            for i in 0..n {
                for j in i + 1..n {
                    diag.insert(
                        format!("{i},{j}"),
                        ca.diag(i, j).ones().map(|a| ca.name(a as AtomId).to_string()).collect(),
                    );
                }
            }
            raw.diag = Some(diag);
            raw.provenance = ca.provenance().cloned();
        }
        AtomStructure::Ra(ra) => {
            raw.kind = "RA".into();
            raw.atoms = ra.names().to_vec();
            raw.labels = ra.labels().map(|l| {
                ra.names().iter().cloned().zip(l.iter().cloned()).collect()
            });
            raw.identity = Some(ra.identity().ones().map(|a| ra.name(a as AtomId).to_string()).collect());
            raw.converse = Some(
                (0..ra.atom_count() as AtomId)
                    .map(|a| (ra.name(a).to_string(), ra.name(ra.converse(a)).to_string()))
                    .collect(),
            );
            raw.triples = Some(match ra.triples() {
                TripleSet::Rule { name, .. } => RawTriples {
                    mode: "rule".into(),
                    list: Vec::new(),
                    rule: Some(name.clone()),
                },
                TripleSet::Table { .. } => {
                    let size = ra.atom_count() as AtomId;
                    let mut list = Vec::new();
                    for a in 0..size {
                        for b in 0..size {
                            for c in 0..size {
                                if ra.consistent(a, b, c) {
                                    list.push((
                                        ra.name(a).to_string(),
                                        ra.name(b).to_string(),
                                        ra.name(c).to_string(),
                                    ));
                                }
                            }
                        }
                    }
                    RawTriples {
                        mode: "consistent".into(),
                        list,
                        rule: None,
                    }
                }
            });
            raw.provenance = ra.provenance().cloned();
        }
    }
    serde_json::to_value(&raw).expect("interchange document serializes")
}

pub fn structure_to_string(s: &AtomStructure) -> String {
    serde_json::to_string_pretty(&structure_to_json(s)).expect("json value prints")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::structure::powerset_structure;

    #[test]
    fn ca_round_trip() {
        let s = AtomStructure::Ca(powerset_structure(3, 2).unwrap());
        let text = structure_to_string(&s);
        let back = load_structure(&text).unwrap();
        assert_eq!(structure_to_string(&back), text);
    }

    #[test]
    fn syntax_error_has_line() {
        let err = load_structure("{\n \"kind\": \"CA\",\n oops }").unwrap_err();
        match err {
            Error::Format { location, .. } => assert!(location.starts_with("line 3"), "{location}"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn unknown_atom_has_field_path() {
        let text = r#"{"kind":"CA","dimension":2,"atoms":["a"],
            "cyl":[[["a","a"]],[["a","b"]]],"diag":{"0,1":["a"]}}"#;
        match load_structure(text).unwrap_err() {
            Error::Format { location, .. } => assert_eq!(location, "cyl[1][0][1]"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn non_reflexive_rejected() {
        let text = r#"{"kind":"CA","dimension":2,"atoms":["a","b"],
            "cyl":[[["a","a"],["b","b"]],[["a","a"]]],"diag":{}}"#;
        match load_structure(text).unwrap_err() {
            Error::Format { location, message } => {
                assert_eq!(location, "cyl[1]");
                assert!(message.contains("reflexive"));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn ra_forbidden_mode() {
        let text = r#"{"kind":"RA","atoms":["e","a"],"identity":["e"],
            "converse":{"e":"e","a":"a"},
            "triples":{"mode":"forbidden","list":[["e","a","e"]]}}"#;
        let s = load_structure(text).unwrap();
        let ra = s.as_ra().unwrap();
        assert!(!ra.consistent(0, 1, 0));
        assert!(ra.consistent(1, 1, 1));
    }
}
