//! Group data `(G, Y, F, c)` and exact word arithmetic for the built-in groups.
//!
//! A [`GroupSpec`] holds the ordered generator set `Y`, the potential
//! `F : Y -> (0, inf)`, the abelianization vectors `c_s` and, optionally, a
//! word oracle that decides when two words end at the same group element.

mod builtin;
mod json;
mod validate;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

pub use json::GroupFile;
pub use validate::{validate_spec, ValidationReport};

/// Multiplication table of a finite group; `table[i][j]` is the index of `i * j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultTable {
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

/// Which exact arithmetic backs `endpoint`.
#[derive(Debug, Clone, PartialEq)]
pub enum Oracle {
    FreeAbelian(usize),
    Heisenberg,
    DihedralInfinite,
    FiniteTable(MultTable),
    None,
}

impl Oracle {
    pub fn name(&self) -> &'static str {
        match self {
            Oracle::FreeAbelian(_) => "free_abelian",
            Oracle::Heisenberg => "heisenberg",
            Oracle::DihedralInfinite => "dihedral_infinite",
            Oracle::FiniteTable(_) => "finite_table",
            Oracle::None => "none",
        }
    }
}

/// Normal form of a group element. Equality is bit-equality of the normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    FreeAbelian(Vec<i64>),
    /// The upper unitriangular matrix `[[1, a, c], [0, 1, b], [0, 0, 1]]`.
    Heisenberg {
        a: i64,
        b: i64,
        c: i64,
    },
    /// `a^shift b^flip` in the infinite dihedral group.
    Dihedral {
        shift: i64,
        flip: bool,
    },
    Finite(usize),
}

/// A finite word over `Y`, stored as generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&self, s: usize) -> Word {
        let mut v = self.0.clone();
        v.push(s);
        Word(v)
    }

    /// All words of length exactly `len` over `k` letters, in lexicographic order.
    pub fn all_of_length(k: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| (0..k).map(move |s| w.push(s)))
                .collect();
        }
        out
    }

    /// All words of length at most `max_len`, shortest first.
    pub fn all_up_to(k: usize, max_len: usize) -> Vec<Word> {
        (0..=max_len)
            .flat_map(|l| Word::all_of_length(k, l))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    name: String,
    generators: Vec<String>,
    potential: Vec<f64>,
    cvec: Vec<Vec<f64>>,
    rank: usize,
    oracle: Oracle,
    /// Oracle image of each generator; empty when the oracle is `None`.
    gen_elements: Vec<GroupElement>,
}

impl GroupSpec {
    /// Assembles a spec after structural checks (lengths, distinct symbols,
    /// oracle images of the right shape). The mathematical assumptions are
    /// checked separately by [`validate_spec`].
    pub fn new(
        name: impl Into<String>,
        generators: Vec<String>,
        potential: Vec<f64>,
        cvec: Vec<Vec<f64>>,
        rank: usize,
        oracle: Oracle,
        gen_elements: Vec<GroupElement>,
    ) -> Result<Self> {
        let k = generators.len();
        if potential.len() != k || cvec.len() != k {
            return Err(Error::InvalidSpec(format!(
                "{k} generators but {} potentials and {} c-vectors",
                potential.len(),
                cvec.len()
            )));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || g.contains(',') || g.chars().any(char::is_whitespace) {
                return Err(Error::InvalidSpec(format!("bad generator symbol `{g}`")));
            }
            if generators[..i].contains(g) {
                return Err(Error::InvalidSpec(format!("duplicate generator `{g}`")));
            }
        }
        if let Some((s, c)) = generators.iter().zip(&cvec).find(|(_, c)| c.len() != rank) {
            return Err(Error::InvalidSpec(format!(
                "c-vector of `{s}` has length {} but rank is {rank}",
                c.len()
            )));
        }
        if potential
            .iter()
            .chain(cvec.iter().flatten())
            .any(|x| !x.is_finite())
        {
            return Err(Error::InvalidSpec(
                "non-finite potential or c-vector".into(),
            ));
        }
        let expected = if oracle == Oracle::None { 0 } else { k };
        if gen_elements.len() != expected {
            return Err(Error::InvalidSpec(format!(
                "oracle `{}` needs {expected} generator images, got {}",
                oracle.name(),
                gen_elements.len()
            )));
        }
        for g in &gen_elements {
            let ok = match (&oracle, g) {
                (Oracle::FreeAbelian(n), GroupElement::FreeAbelian(v)) => v.len() == *n,
                (Oracle::Heisenberg, GroupElement::Heisenberg { .. }) => true,
                (Oracle::DihedralInfinite, GroupElement::Dihedral { .. }) => true,
                (Oracle::FiniteTable(t), GroupElement::Finite(i)) => *i < t.table.len(),
                _ => false,
            };
            if !ok {
                return Err(Error::InvalidSpec(format!(
                    "generator image {g:?} does not fit oracle `{}`",
                    oracle.name()
                )));
            }
        }
        if let Oracle::FiniteTable(t) = &oracle {
            let m = t.table.len();
            if t.identity >= m
                || t.table
                    .iter()
                    .any(|r| r.len() != m || r.iter().any(|&x| x >= m))
            {
                return Err(Error::InvalidSpec("malformed multiplication table".into()));
            }
        }
        Ok(GroupSpec {
            name: name.into(),
            generators,
            potential,
            cvec,
            rank,
            oracle,
            gen_elements,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn cvec(&self) -> &[Vec<f64>] {
        &self.cvec
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn has_oracle(&self) -> bool {
        self.oracle != Oracle::None
    }

    /// Copy of this spec with some potentials replaced.
    pub fn with_potential(&self, overrides: &[(usize, f64)]) -> Self {
        let mut out = self.clone();
        for &(i, f) in overrides {
            out.potential[i] = f;
        }
        out
    }

    pub fn symbol_index(&self, sym: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g == sym)
            .ok_or_else(|| Error::UnknownSymbol(sym.to_string()))
    }

    /// Parses a comma-separated word such as `a,b,a_inv`. The empty string
    /// (or `∅`) is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "∅" {
            return Ok(Word::empty());
        }
        text.split(',')
            .map(|s| self.symbol_index(s.trim()))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.0.iter()
            .map(|&i| self.generators[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// `F(t) = sum_j F(t_j)`.
    pub fn word_potential(&self, w: &Word) -> f64 {
        w.0.iter().map(|&i| self.potential[i]).sum()
    }

    fn require_oracle(&self) -> Result<()> {
        if self.has_oracle() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "group `{}` has no word oracle",
                self.name
            )))
        }
    }

    pub fn identity(&self) -> Result<GroupElement> {
        Ok(match &self.oracle {
            Oracle::FreeAbelian(n) => GroupElement::FreeAbelian(vec![0; *n]),
            Oracle::Heisenberg => GroupElement::Heisenberg { a: 0, b: 0, c: 0 },
            Oracle::DihedralInfinite => GroupElement::Dihedral {
                shift: 0,
                flip: false,
            },
            Oracle::FiniteTable(t) => GroupElement::Finite(t.identity),
            Oracle::None => return Err(self.require_oracle().unwrap_err()),
        })
    }

    /// Group product in the oracle's normal form.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        use GroupElement as E;
        Ok(match (g, h) {
            (E::FreeAbelian(x), E::FreeAbelian(y)) => {
                E::FreeAbelian(x.iter().zip(y).map(|(a, b)| a + b).collect())
            }
            (
                E::Heisenberg { a, b, c },
                E::Heisenberg {
                    a: a2,
                    b: b2,
                    c: c2,
                },
            ) => E::Heisenberg {
                a: a + a2,
                b: b + b2,
                c: c + c2 + a * b2,
            },
            (
                E::Dihedral { shift, flip },
                E::Dihedral {
                    shift: s2,
                    flip: f2,
                },
            ) => E::Dihedral {
                shift: if *flip { shift - s2 } else { shift + s2 },
                flip: flip ^ f2,
            },
            (E::Finite(i), E::Finite(j)) => match &self.oracle {
                Oracle::FiniteTable(t) => E::Finite(t.table[*i][*j]),
                _ => return Err(Error::Unsupported("finite element without a table".into())),
            },
            _ => {
                self.require_oracle()?;
                return Err(Error::InvalidArgument(format!(
                    "cannot multiply {g:?} by {h:?}"
                )));
            }
        })
    }

    /// Oracle image of generator `s`.
    pub fn generator_element(&self, s: usize) -> Result<&GroupElement> {
        self.require_oracle()?;
        Ok(&self.gen_elements[s])
    }

    /// `t̄ = t_1 t_2 ... t_n`; the empty word ends at the identity.
    pub fn endpoint(&self, t: &Word) -> Result<GroupElement> {
        let mut g = self.identity()?;
        for &s in &t.0 {
            g = self.multiply(&g, &self.gen_elements[s])?;
        }
        Ok(g)
    }

    pub fn same_endpoint(&self, t: &Word, u: &Word) -> Result<bool> {
        Ok(self.endpoint(t)? == self.endpoint(u)?)
    }

    /// `c(t̄) = sum_i c_{t_i}`.
    pub fn abelianized_word(&self, t: &Word) -> Vec<f64> {
        let mut out = vec![0.0; self.rank];
        for &s in &t.0 {
            for (o, c) in out.iter_mut().zip(&self.cvec[s]) {
                *o += c;
            }
        }
        out
    }

    /// Image of a group element under the abelianization map. Built-in normal
    /// forms are read off directly; other oracles go through a word that
    /// reaches the element inside a ball of radius `R_max`.
    pub fn abelianized(&self, g: &GroupElement) -> Result<Vec<f64>> {
        self.require_oracle()?;
        if self.rank == 0 {
            return Ok(Vec::new());
        }
        if let Some(v) = self.abelianized_direct(g) {
            return Ok(v);
        }
        self.word_reaching(g, DEFAULT_MAX_RADIUS)
            .map(|w| self.abelianized_word(&w))
            .ok_or_else(|| {
                Error::Unsupported(format!(
                    "no word of length <= {DEFAULT_MAX_RADIUS} reaches {g:?}"
                ))
            })
    }

    /// Reads the image straight from the normal form when the c-vectors are a
    /// linear function of it (true for the built-in presets).
    fn abelianized_direct(&self, g: &GroupElement) -> Option<Vec<f64>> {
        let coords: Vec<f64> = match g {
            GroupElement::FreeAbelian(v) => v.iter().map(|&x| x as f64).collect(),
            GroupElement::Heisenberg { a, b, .. } => vec![*a as f64, *b as f64],
            _ => return None,
        };
        // fit c_s = M * coords(s) exactly on the generators
        let gens: Vec<Vec<f64>> = self
            .gen_elements
            .iter()
            .map(|e| match e {
                GroupElement::FreeAbelian(v) => v.iter().map(|&x| x as f64).collect(),
                GroupElement::Heisenberg { a, b, .. } => vec![*a as f64, *b as f64],
                _ => Vec::new(),
            })
            .collect();
        let d = coords.len();
        let basis: Vec<usize> = (0..d)
            .map(|i| {
                gens.iter().position(|x| {
                    x.iter()
                        .enumerate()
                        .all(|(j, &v)| v == if i == j { 1.0 } else { 0.0 })
                })
            })
            .collect::<Option<Vec<_>>>()?;
        let mut out = vec![0.0; self.rank];
        for (i, &b) in basis.iter().enumerate() {
            for (o, c) in out.iter_mut().zip(&self.cvec[b]) {
                *o += coords[i] * c;
            }
        }
        // the fit must reproduce every generator, otherwise fall back to words
        for (s, x) in gens.iter().enumerate() {
            let mut pred = vec![0.0; self.rank];
            for (i, &b) in basis.iter().enumerate() {
                for (p, c) in pred.iter_mut().zip(&self.cvec[b]) {
                    *p += x[i] * c;
                }
            }
            if pred
                .iter()
                .zip(&self.cvec[s])
                .any(|(p, c)| (p - c).abs() > 1e-12)
            {
                return None;
            }
        }
        Some(out)
    }

    fn word_reaching(&self, target: &GroupElement, max_len: usize) -> Option<Word> {
        let id = self.identity().ok()?;
        let mut seen: HashMap<GroupElement, Word> = HashMap::new();
        seen.insert(id.clone(), Word::empty());
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            let w = seen[&g].clone();
            if &g == target {
                return Some(w);
            }
            if w.len() == max_len {
                continue;
            }
            for s in 0..self.num_generators() {
                let h = self.multiply(&g, &self.gen_elements[s]).ok()?;
                if !seen.contains_key(&h) {
                    seen.insert(h.clone(), w.push(s));
                    queue.push_back(h);
                }
            }
        }
        None
    }

    /// All endpoints of words of length `<= radius`, in breadth-first order
    /// (by length, then by generator order), with right neighbours `g s`.
    pub fn ball(&self, radius: usize, max_radius: usize) -> Result<Ball> {
        if radius > max_radius {
            return Err(Error::RadiusTooLarge(radius, max_radius));
        }
        let id = self.identity()?;
        let mut index = HashMap::new();
        let mut elements = vec![id.clone()];
        let mut depth = vec![0usize];
        index.insert(id, 0usize);
        let mut neighbors: Vec<Vec<GroupElement>> = Vec::new();
        let mut i = 0;
        while i < elements.len() {
            let g = elements[i].clone();
            let mut nbrs = Vec::with_capacity(self.num_generators());
            for s in 0..self.num_generators() {
                let h = self.multiply(&g, &self.gen_elements[s])?;
                if depth[i] < radius && !index.contains_key(&h) {
                    index.insert(h.clone(), elements.len());
                    elements.push(h.clone());
                    depth.push(depth[i] + 1);
                }
                nbrs.push(h);
            }
            neighbors.push(nbrs);
            i += 1;
        }
        Ok(Ball {
            elements,
            neighbors,
            index,
        })
    }
}

pub const DEFAULT_MAX_RADIUS: usize = 12;

/// A finite window of the Cayley graph.
#[derive(Debug, Clone)]
pub struct Ball {
    pub elements: Vec<GroupElement>,
    /// `neighbors[i][s]` is `elements[i] * s`, which may lie outside the ball.
    pub neighbors: Vec<Vec<GroupElement>>,
    index: HashMap<GroupElement, usize>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::FreeAbelian(v) => write!(f, "{v:?}"),
            GroupElement::Heisenberg { a, b, c } => write!(f, "({a},{b},{c})"),
            GroupElement::Dihedral { shift, flip } => {
                write!(f, "a^{shift}{}", if *flip { "b" } else { "" })
            }
            GroupElement::Finite(i) => write!(f, "#{i}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(spec: &GroupSpec, s: &str) -> Word {
        spec.parse_word(s).unwrap()
    }

    #[test]
    fn heisenberg_commutator_is_central() {
        let h = GroupSpec::heisenberg();
        let g = h.endpoint(&w(&h, "a,b,a_inv,b_inv")).unwrap();
        assert_eq!(g, GroupElement::Heisenberg { a: 0, b: 0, c: 1 });
    }

    #[test]
    fn heisenberg_ab_equals_bac() {
        let h = GroupSpec::heisenberg();
        assert!(h.same_endpoint(&w(&h, "a,b"), &w(&h, "b,a,c")).unwrap());
        assert!(!h.same_endpoint(&w(&h, "a,b"), &w(&h, "b,a")).unwrap());
    }

    #[test]
    fn dihedral_relations() {
        let d = GroupSpec::dihedral_infinite();
        assert_eq!(
            d.endpoint(&w(&d, "b,a,b")).unwrap(),
            GroupElement::Dihedral {
                shift: -1,
                flip: false
            }
        );
        assert!(d.same_endpoint(&w(&d, "b,b"), &Word::empty()).unwrap());
    }

    #[test]
    fn integers_distinguish_signs() {
        let z = GroupSpec::free_abelian(1);
        assert!(!z.same_endpoint(&w(&z, "e1"), &w(&z, "e1_inv")).unwrap());
    }

    #[test]
    fn empty_word_is_identity() {
        for spec in [
            GroupSpec::heisenberg(),
            GroupSpec::dihedral_infinite(),
            GroupSpec::free_abelian(2),
            GroupSpec::cyclic(5),
        ] {
            assert_eq!(
                spec.endpoint(&Word::empty()).unwrap(),
                spec.identity().unwrap()
            );
        }
    }

    #[test]
    fn ball_of_integers() {
        let z = GroupSpec::free_abelian(1);
        let b = z.ball(2, DEFAULT_MAX_RADIUS).unwrap();
        let mut xs: Vec<i64> = b
            .elements
            .iter()
            .map(|g| match g {
                GroupElement::FreeAbelian(v) => v[0],
                _ => unreachable!(),
            })
            .collect();
        xs.sort();
        assert_eq!(xs, vec![-2, -1, 0, 1, 2]);
        assert!(b.neighbors.iter().all(|n| n.len() == 2));
    }

    #[test]
    fn ball_of_dihedral_radius_one() {
        let d = GroupSpec::dihedral_infinite();
        let b = d.ball(1, DEFAULT_MAX_RADIUS).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.contains(&GroupElement::Dihedral {
            shift: 1,
            flip: false
        }));
        assert!(b.contains(&GroupElement::Dihedral {
            shift: 0,
            flip: true
        }));
    }

    #[test]
    fn ball_of_heisenberg_radius_two() {
        // brute force: all words of length <= 2, deduplicated by matrix product
        let h = GroupSpec::heisenberg();
        let mut brute = std::collections::HashSet::new();
        for t in Word::all_up_to(6, 2) {
            let mut m = [[1i64, 0, 0], [0, 1, 0], [0, 0, 1]];
            for &s in t.letters() {
                let (a, b, c) = match &h.gen_elements[s] {
                    GroupElement::Heisenberg { a, b, c } => (*a, *b, *c),
                    _ => unreachable!(),
                };
                let g = [[1, a, c], [0, 1, b], [0, 0, 1]];
                let mut p = [[0i64; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        p[i][j] = (0..3).map(|k| m[i][k] * g[k][j]).sum();
                    }
                }
                m = p;
            }
            brute.insert(m);
        }
        // 1 + 6 + (a^±2, b^±2, c^±2) + 8 mixed a/b products + 8 products with c
        assert_eq!(brute.len(), 29);
        let ball = h.ball(2, DEFAULT_MAX_RADIUS).unwrap();
        assert_eq!(ball.len(), 29);
        for m in &brute {
            assert!(ball.contains(&GroupElement::Heisenberg {
                a: m[0][1],
                b: m[1][2],
                c: m[0][2]
            }));
        }
    }

    #[test]
    fn ball_radius_limit() {
        let z = GroupSpec::free_abelian(1);
        assert!(matches!(z.ball(13, 12), Err(Error::RadiusTooLarge(13, 12))));
    }

    #[test]
    fn cyclic_ball_saturates() {
        let c = GroupSpec::cyclic(3);
        assert_eq!(c.ball(10, DEFAULT_MAX_RADIUS).unwrap().len(), 3);
    }

    #[test]
    fn abelianized_heisenberg_matrix() {
        let h = GroupSpec::heisenberg();
        let g = GroupElement::Heisenberg { a: 2, b: -1, c: 7 };
        assert_eq!(h.abelianized(&g).unwrap(), vec![2.0, -1.0]);
        assert_eq!(h.abelianized_word(&Word::empty()), vec![0.0, 0.0]);
        let d = GroupSpec::dihedral_infinite();
        assert!(d
            .abelianized(&GroupElement::Dihedral {
                shift: 3,
                flip: true
            })
            .unwrap()
            .is_empty());
    }

    #[test]
    fn endpoint_without_oracle_is_unsupported() {
        let mut f = GroupSpec::free_abelian(1).to_file();
        f.oracle = "none".into();
        let spec = GroupSpec::from_file(f).unwrap();
        assert!(matches!(
            spec.endpoint(&Word::empty()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn endpoint_is_a_homomorphism_for_short_words() {
        for spec in [
            GroupSpec::heisenberg(),
            GroupSpec::dihedral_infinite(),
            GroupSpec::free_abelian(2),
            GroupSpec::cyclic(4),
        ] {
            let words = Word::all_up_to(spec.num_generators(), 3);
            for t in words.iter().filter(|t| t.len() <= 2) {
                for u in words.iter().filter(|u| u.len() + t.len() <= 3) {
                    let lhs = spec.endpoint(&t.concat(u)).unwrap();
                    let rhs = spec
                        .multiply(&spec.endpoint(t).unwrap(), &spec.endpoint(u).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs, "{}: {:?} {:?}", spec.name(), t, u);
                }
            }
        }
    }

    #[test]
    fn balls_are_nested() {
        let h = GroupSpec::heisenberg();
        for r in 0..4 {
            let small = h.ball(r, 12).unwrap();
            let big = h.ball(r + 1, 12).unwrap();
            assert!(small.elements.iter().all(|g| big.contains(g)));
        }
    }

    #[test]
    fn equal_endpoints_have_equal_abelianization() {
        for spec in [GroupSpec::heisenberg(), GroupSpec::free_abelian(2)] {
            let mut by_end: HashMap<GroupElement, Vec<f64>> = HashMap::new();
            for t in Word::all_up_to(spec.num_generators(), 4) {
                let g = spec.endpoint(&t).unwrap();
                let c = spec.abelianized_word(&t);
                if let Some(prev) = by_end.get(&g) {
                    assert_eq!(prev, &c);
                } else {
                    by_end.insert(g, c);
                }
            }
        }
    }

    #[test]
    fn malformed_words_are_rejected() {
        let h = GroupSpec::heisenberg();
        assert!(matches!(h.parse_word("a,q"), Err(Error::UnknownSymbol(_))));
        assert_eq!(h.parse_word("").unwrap(), Word::empty());
        assert_eq!(h.format_word(&w(&h, "a, b ,a_inv")), "a,b,a_inv");
    }
}
