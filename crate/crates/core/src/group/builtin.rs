use super::{GroupElement, GroupSpec, MultTable, Oracle};
use crate::error::{Error, Result};

impl GroupSpec {
    /// The discrete Heisenberg group with its six canonical generators
    /// `a, a_inv, b, b_inv, c, c_inv`, `F = 1` and `c'(a, b, c) = (a, b)`.
    pub fn heisenberg() -> Self {
        let gens = ["a", "a_inv", "b", "b_inv", "c", "c_inv"];
        let elems = [
            (1, 0, 0),
            (-1, 0, 0),
            (0, 1, 0),
            (0, -1, 0),
            (0, 0, 1),
            (0, 0, -1),
        ];
        GroupSpec::new(
            "heisenberg",
            gens.iter().map(|s| s.to_string()).collect(),
            vec![1.0; 6],
            elems
                .iter()
                .map(|&(a, b, _)| vec![a as f64, b as f64])
                .collect(),
            2,
            Oracle::Heisenberg,
            elems
                .iter()
                .map(|&(a, b, c)| GroupElement::Heisenberg { a, b, c })
                .collect(),
        )
        .expect("built-in spec is well formed")
    }

    /// The infinite dihedral group on `Y = {a, b}` with `F = 1`; its
    /// abelianization is finite, so the rank is 0.
    pub fn dihedral_infinite() -> Self {
        GroupSpec::new(
            "dihedral_infinite",
            vec!["a".into(), "b".into()],
            vec![1.0, 1.0],
            vec![vec![], vec![]],
            0,
            Oracle::DihedralInfinite,
            vec![
                GroupElement::Dihedral {
                    shift: 1,
                    flip: false,
                },
                GroupElement::Dihedral {
                    shift: 0,
                    flip: true,
                },
            ],
        )
        .expect("built-in spec is well formed")
    }

    /// `Z^n` with generators `e1, e1_inv, ..., en, en_inv`, `F = 1`.
    pub fn free_abelian(n: usize) -> Self {
        let mut gens = Vec::new();
        let mut cvec = Vec::new();
        let mut elems = Vec::new();
        for i in 0..n {
            for (suffix, sign) in [("", 1i64), ("_inv", -1)] {
                gens.push(format!("e{}{suffix}", i + 1));
                let mut v = vec![0i64; n];
                v[i] = sign;
                cvec.push(v.iter().map(|&x| x as f64).collect());
                elems.push(GroupElement::FreeAbelian(v));
            }
        }
        GroupSpec::new(
            format!("zn:{n}"),
            gens,
            vec![1.0; 2 * n],
            cvec,
            n,
            Oracle::FreeAbelian(n),
            elems,
        )
        .expect("built-in spec is well formed")
    }

    /// `Z/m` on `Y = {g, g_inv}` with `F = 1`; rank 0.
    pub fn cyclic(m: usize) -> Self {
        let m = m.max(1);
        let table = (0..m)
            .map(|i| (0..m).map(|j| (i + j) % m).collect())
            .collect();
        GroupSpec::new(
            format!("cyclic:{m}"),
            vec!["g".into(), "g_inv".into()],
            vec![1.0, 1.0],
            vec![vec![], vec![]],
            0,
            Oracle::FiniteTable(MultTable { table, identity: 0 }),
            vec![
                GroupElement::Finite(1 % m),
                GroupElement::Finite((m - 1) % m),
            ],
        )
        .expect("built-in spec is well formed")
    }

    /// Looks up a built-in by name: `heisenberg`, `dihedral_infinite`,
    /// `zn:<n>` or `cyclic:<m>`.
    pub fn builtin(name: &str) -> Result<Self> {
        let parse = |s: &str| {
            s.parse::<usize>()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::UnknownGroup(name.to_string()))
        };
        match name {
            "heisenberg" => Ok(Self::heisenberg()),
            "dihedral_infinite" => Ok(Self::dihedral_infinite()),
            _ => {
                if let Some(n) = name.strip_prefix("zn:") {
                    Ok(Self::free_abelian(parse(n)?))
                } else if let Some(m) = name.strip_prefix("cyclic:") {
                    Ok(Self::cyclic(parse(m)?))
                } else {
                    Err(Error::UnknownGroup(name.to_string()))
                }
            }
        }
    }

    /// A built-in name, or else a path to a group JSON file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        match Self::builtin(name_or_path) {
            Ok(s) => Ok(s),
            Err(Error::UnknownGroup(_)) if std::path::Path::new(name_or_path).exists() => {
                let text = std::fs::read_to_string(name_or_path)?;
                Self::from_json(&text)
            }
            Err(e) => Err(e),
        }
    }
}
