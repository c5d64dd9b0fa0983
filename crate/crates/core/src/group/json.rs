use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GroupElement, GroupSpec, MultTable, Oracle};
use crate::error::{Error, Result};

/// On-disk form of a [`GroupSpec`].
///
/// `elements` gives the oracle image of each generator: an integer n-tuple
/// for `free_abelian`, `[a, b, c]` for `heisenberg`, `[k, e]` (meaning
/// `a^k b^e`) for `dihedral_infinite` and `[index]` for `finite_table`.
/// When absent, `free_abelian` uses the (integral) c-vectors and the other
/// built-in oracles use their canonical generator names.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GroupFile {
    pub name: String,
    pub generators: Vec<String>,
    #[serde(rename = "F")]
    pub potential: BTreeMap<String, f64>,
    pub rank: usize,
    pub c: BTreeMap<String, Vec<f64>>,
    pub oracle: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<BTreeMap<String, Vec<i64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TableFile {
    pub mult: Vec<Vec<usize>>,
    #[serde(default)]
    pub identity: usize,
}

fn canonical_heisenberg(sym: &str) -> Option<Vec<i64>> {
    Some(match sym {
        "a" => vec![1, 0, 0],
        "a_inv" => vec![-1, 0, 0],
        "b" => vec![0, 1, 0],
        "b_inv" => vec![0, -1, 0],
        "c" => vec![0, 0, 1],
        "c_inv" => vec![0, 0, -1],
        _ => return None,
    })
}

fn canonical_dihedral(sym: &str) -> Option<Vec<i64>> {
    Some(match sym {
        "a" => vec![1, 0],
        "a_inv" => vec![-1, 0],
        "b" => vec![0, 1],
        _ => return None,
    })
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("group file serializes")
    }

    pub fn from_file(f: GroupFile) -> Result<Self> {
        fn lookup<V>(what: &str, map: &BTreeMap<String, V>, s: &str) -> Result<()> {
            if map.contains_key(s) {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!(
                    "missing {what} for generator `{s}`"
                )))
            }
        }
        for key in f.potential.keys().chain(f.c.keys()) {
            if !f.generators.contains(key) {
                return Err(Error::UnknownSymbol(key.clone()));
            }
        }
        let mut potential = Vec::new();
        let mut cvec = Vec::new();
        for s in &f.generators {
            lookup("F", &f.potential, s)?;
            lookup("c", &f.c, s)?;
            potential.push(f.potential[s]);
            cvec.push(f.c[s].clone());
        }
        let oracle = match f.oracle.as_str() {
            "free_abelian" => Oracle::FreeAbelian(f.rank),
            "heisenberg" => Oracle::Heisenberg,
            "dihedral_infinite" => Oracle::DihedralInfinite,
            "finite_table" => {
                let t = f.table.clone().ok_or_else(|| {
                    Error::InvalidSpec("finite_table oracle needs `table`".into())
                })?;
                Oracle::FiniteTable(MultTable {
                    table: t.mult,
                    identity: t.identity,
                })
            }
            "none" => Oracle::None,
            other => return Err(Error::InvalidSpec(format!("unknown oracle `{other}`"))),
        };
        let mut elems = Vec::new();
        if oracle != Oracle::None {
            for (i, s) in f.generators.iter().enumerate() {
                let given = f.elements.as_ref().and_then(|m| m.get(s)).cloned();
                let raw = match (&oracle, given) {
                    (_, Some(v)) => v,
                    (Oracle::FreeAbelian(_), None) => {
                        let c = &cvec[i];
                        if c.iter().any(|x| x.fract() != 0.0) {
                            return Err(Error::InvalidSpec(format!(
                                "free_abelian generator `{s}` needs integral c or an explicit element"
                            )));
                        }
                        c.iter().map(|&x| x as i64).collect()
                    }
                    (Oracle::Heisenberg, None) => canonical_heisenberg(s).ok_or_else(|| {
                        Error::InvalidSpec(format!("no element given for generator `{s}`"))
                    })?,
                    (Oracle::DihedralInfinite, None) => canonical_dihedral(s).ok_or_else(|| {
                        Error::InvalidSpec(format!("no element given for generator `{s}`"))
                    })?,
                    _ => {
                        return Err(Error::InvalidSpec(format!(
                            "no element given for generator `{s}`"
                        )))
                    }
                };
                let bad = || Error::InvalidSpec(format!("malformed element for generator `{s}`"));
                elems.push(match &oracle {
                    Oracle::FreeAbelian(_) => GroupElement::FreeAbelian(raw),
                    Oracle::Heisenberg => match raw[..] {
                        [a, b, c] => GroupElement::Heisenberg { a, b, c },
                        _ => return Err(bad()),
                    },
                    Oracle::DihedralInfinite => match raw[..] {
                        [k, e] if e == 0 || e == 1 => GroupElement::Dihedral {
                            shift: k,
                            flip: e == 1,
                        },
                        _ => return Err(bad()),
                    },
                    Oracle::FiniteTable(_) => match raw[..] {
                        [i] if i >= 0 => GroupElement::Finite(i as usize),
                        _ => return Err(bad()),
                    },
                    Oracle::None => unreachable!(),
                });
            }
        }
        GroupSpec::new(f.name, f.generators, potential, cvec, f.rank, oracle, elems)
    }

    pub fn to_file(&self) -> GroupFile {
        let table = match &self.oracle {
            Oracle::FiniteTable(t) => Some(TableFile {
                mult: t.table.clone(),
                identity: t.identity,
            }),
            _ => None,
        };
        let elements = if self.gen_elements.is_empty() {
            None
        } else {
            Some(
                self.generators
                    .iter()
                    .cloned()
                    .zip(self.gen_elements.iter().map(|e| match e {
                        GroupElement::FreeAbelian(v) => v.clone(),
                        GroupElement::Heisenberg { a, b, c } => vec![*a, *b, *c],
                        GroupElement::Dihedral { shift, flip } => vec![*shift, *flip as i64],
                        GroupElement::Finite(i) => vec![*i as i64],
                    }))
                    .collect(),
            )
        };
        GroupFile {
            name: self.name.clone(),
            generators: self.generators.clone(),
            potential: self
                .generators
                .iter()
                .cloned()
                .zip(self.potential.iter().cloned())
                .collect(),
            rank: self.rank,
            c: self
                .generators
                .iter()
                .cloned()
                .zip(self.cvec.iter().cloned())
                .collect(),
            oracle: self.oracle.name().to_string(),
            table,
            elements,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_survive_json() {
        for name in ["heisenberg", "dihedral_infinite", "zn:3", "cyclic:4"] {
            let spec = GroupSpec::builtin(name).unwrap();
            assert_eq!(GroupSpec::from_json(&spec.to_json()).unwrap(), spec);
        }
    }

    #[test]
    fn minimal_heisenberg_file() {
        let text = r#"{
            "name": "h3", "generators": ["a","a_inv","b","b_inv","c","c_inv"],
            "F": {"a":1,"a_inv":1,"b":1,"b_inv":1,"c":1,"c_inv":1},
            "rank": 2,
            "c": {"a":[1,0],"a_inv":[-1,0],"b":[0,1],"b_inv":[0,-1],"c":[0,0],"c_inv":[0,0]},
            "oracle": "heisenberg"
        }"#;
        let spec = GroupSpec::from_json(text).unwrap();
        let h = GroupSpec::heisenberg();
        assert_eq!(spec.generators(), h.generators());
        assert_eq!(
            spec.endpoint(&spec.parse_word("a,b,a_inv,b_inv").unwrap())
                .unwrap(),
            GroupElement::Heisenberg { a: 0, b: 0, c: 1 }
        );
    }

    #[test]
    fn missing_potential_is_rejected() {
        let text = r#"{"name":"z","generators":["p","m"],"F":{"p":1},"rank":1,
            "c":{"p":[1],"m":[-1]},"oracle":"free_abelian"}"#;
        assert!(matches!(
            GroupSpec::from_json(text),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn finite_table_file() {
        let text = r#"{"name":"z3","generators":["g","h"],"F":{"g":1,"h":2},"rank":0,
            "c":{"g":[],"h":[]},"oracle":"finite_table",
            "table":{"mult":[[0,1,2],[1,2,0],[2,0,1]],"identity":0},
            "elements":{"g":[1],"h":[2]}}"#;
        let spec = GroupSpec::from_json(text).unwrap();
        assert!(spec
            .same_endpoint(
                &spec.parse_word("g,g").unwrap(),
                &spec.parse_word("h").unwrap()
            )
            .unwrap());
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(
            GroupSpec::builtin("zn:0"),
            Err(Error::UnknownGroup(_))
        ));
        assert!(matches!(
            GroupSpec::resolve("no_such_group"),
            Err(Error::UnknownGroup(_))
        ));
    }
}
