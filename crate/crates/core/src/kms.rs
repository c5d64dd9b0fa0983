//! Harmonic vectors, the cylinder measures they define, and evaluation of
//! KMS states on the elements `V_t V_u^*`.
//!
//! A normalized `β`-harmonic vector `ψ` on `G` satisfies
//! `sum_s e^{-βF(s)} ψ_{g s} = ψ_g` and `ψ_e = 1`. It determines the
//! measure `m(t Y^N) = e^{-βF(t)} ψ_{t̄}` on infinite paths, and the state
//! `ω(V_t V_u^*) = m(t Y^N)` when `t = u`, `0` otherwise.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Oracle, Word};
use crate::linalg::dot;
use crate::numerics::{PartitionData, SolverConfig};
use crate::sphere;

/// A point of `Q(β) = { u : sum_s e^{u.c_s - βF(s)} = 1 }`; the homomorphism
/// `c(s) = u . c_s` gives the Bernoulli measure `p_s = e^{c(s) - βF(s)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QBetaPoint {
    pub u: Vec<f64>,
    pub beta: f64,
}

impl QBetaPoint {
    /// `|Z(u, β) - 1|`.
    pub fn residual(&self, spec: &GroupSpec) -> f64 {
        (PartitionData::from_spec_unchecked(spec).partition(&self.u, self.beta) - 1.0).abs()
    }

    /// The Bernoulli probability vector `p_s = e^{u.c_s - βF(s)}`.
    pub fn probabilities(&self, spec: &GroupSpec) -> Vec<f64> {
        spec.cvec()
            .iter()
            .zip(spec.potential())
            .map(|(c, f)| (dot(&self.u, c) - self.beta * f).exp())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HarmonicKind {
    /// `ψ_g = e^{u . c(g)}`; harmonic exactly when `u ∈ Q(β)`.
    Exponential { u: Vec<f64> },
    /// The infinite dihedral solutions `ψ(a^n) = x_n`, `ψ(a^n b) = x_{n-1}`
    /// with `x_n = t e^{c n} + (1 - t) e^{-c n}` and `e^c + e^{-c} = e^{βF}`.
    DihedralFamily { t: f64, c_beta: f64 },
    /// Values on a finite ball; lookups outside it fail.
    Tabulated(HashMap<GroupElement, f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicVector {
    pub kind: HarmonicKind,
    pub beta: f64,
    spec: GroupSpec,
}

impl HarmonicVector {
    pub fn exponential(spec: &GroupSpec, beta: f64, u: Vec<f64>) -> Result<Self> {
        if u.len() != spec.rank() {
            return Err(Error::InvalidArgument(format!(
                "u has length {}, expected {}",
                u.len(),
                spec.rank()
            )));
        }
        Ok(HarmonicVector {
            kind: HarmonicKind::Exponential { u },
            beta,
            spec: spec.clone(),
        })
    }

    /// The dihedral family at parameter `t ∈ [0, 1]`. Needs the
    /// `dihedral_infinite` oracle, a constant potential `F` and
    /// `e^{βF} >= 2`.
    pub fn dihedral(spec: &GroupSpec, beta: f64, t: f64) -> Result<Self> {
        if *spec.oracle() != Oracle::DihedralInfinite || spec.num_generators() != 2 {
            return Err(Error::Unsupported(
                "the dihedral family lives on the infinite dihedral group with Y = {a, b}".into(),
            ));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "dihedral parameter t = {t} is not in [0, 1]"
            )));
        }
        let f = spec.potential()[0];
        if spec.potential().iter().any(|&g| g != f) {
            return Err(Error::Unsupported(
                "the dihedral family needs a constant potential".into(),
            ));
        }
        let c_beta = dihedral_c_beta(beta * f).ok_or(Error::NoSphere {
            beta,
            beta0: 2f64.ln() / f,
        })?;
        Ok(HarmonicVector {
            kind: HarmonicKind::DihedralFamily { t, c_beta },
            beta,
            spec: spec.clone(),
        })
    }

    pub fn tabulated(spec: &GroupSpec, beta: f64, values: HashMap<GroupElement, f64>) -> Self {
        HarmonicVector {
            kind: HarmonicKind::Tabulated(values),
            beta,
            spec: spec.clone(),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// `ψ_g`.
    pub fn psi_eval(&self, g: &GroupElement) -> Result<f64> {
        match &self.kind {
            HarmonicKind::Exponential { u } => Ok(dot(u, &self.spec.abelianized(g)?).exp()),
            HarmonicKind::DihedralFamily { t, c_beta } => match g {
                GroupElement::Dihedral { shift, flip } => {
                    let n = if *flip { shift - 1 } else { *shift } as f64;
                    Ok(t * (c_beta * n).exp() + (1.0 - t) * (-c_beta * n).exp())
                }
                _ => Err(Error::Unsupported(
                    "the dihedral family is only defined on the infinite dihedral group".into(),
                )),
            },
            HarmonicKind::Tabulated(map) => map.get(g).copied().ok_or(Error::OutsideTable),
        }
    }

    /// `ψ_{t̄}`. Exponential vectors need no word oracle.
    pub fn psi_word(&self, t: &Word) -> Result<f64> {
        match &self.kind {
            HarmonicKind::Exponential { u } => Ok(dot(u, &self.spec.abelianized_word(t)).exp()),
            _ => self.psi_eval(&self.spec.endpoint(t)?),
        }
    }

    /// `max_{g ∈ B(R)} |sum_s e^{-βF(s)} ψ_{g s} - ψ_g|`.
    pub fn harmonic_residual(&self, radius: usize, cfg: &SolverConfig) -> Result<f64> {
        let ball = self.spec.ball(radius, cfg.max_radius)?;
        let weights = self.weights();
        let mut worst: f64 = 0.0;
        for (g, nbrs) in ball.elements.iter().zip(&ball.neighbors) {
            let mut sum = 0.0;
            for (h, w) in nbrs.iter().zip(&weights) {
                sum += w * self.psi_eval(h)?;
            }
            worst = worst.max((sum - self.psi_eval(g)?).abs());
        }
        Ok(worst)
    }

    fn weights(&self) -> Vec<f64> {
        self.spec
            .potential()
            .iter()
            .map(|f| (-self.beta * f).exp())
            .collect()
    }

    /// `m(t Y^N) = e^{-βF(t)} ψ_{t̄}`.
    pub fn cylinder_mass(&self, t: &Word) -> Result<f64> {
        Ok((-self.beta * self.spec.word_potential(t)).exp() * self.psi_word(t)?)
    }

    /// The cylinder mass of the Markov chain on `G` with transition
    /// probabilities `p(g, g s) = e^{-βF(s)} ψ_{g s} / sum_{s'} e^{-βF(s')} ψ_{g s'}`,
    /// started at the identity. It equals [`cylinder_mass`](Self::cylinder_mass)
    /// exactly when `ψ` is normalized and harmonic along the path, and it is a
    /// genuine probability measure for every positive `ψ`.
    pub fn markov_cylinder_mass(&self, t: &Word) -> Result<f64> {
        let weights = self.weights();
        let mut g = self.spec.identity()?;
        let mut mass = 1.0;
        for &s in t.letters() {
            let mut total = 0.0;
            let mut chosen = 0.0;
            for (k, w) in weights.iter().enumerate() {
                let h = self.spec.multiply(&g, self.spec.generator_element(k)?)?;
                let x = w * self.psi_eval(&h)?;
                total += x;
                if k == s {
                    chosen = x;
                }
            }
            if total <= 0.0 {
                return Err(Error::ZeroWeights);
            }
            mass *= chosen / total;
            g = self.spec.multiply(&g, self.spec.generator_element(s)?)?;
        }
        Ok(mass)
    }

    /// Largest violation of `e^{βF(t)} m(tY^N) = e^{βF(u)} m(uY^N)` over word
    /// pairs of length `<= max_len` with the same endpoint, where `m` is the
    /// path measure of [`markov_cylinder_mass`](Self::markov_cylinder_mass).
    ///
    /// The spread at each endpoint is divided by `max(1, |value|)`: the
    /// compared quantity is `ψ_g`, which grows exponentially with `|u|`, and
    /// an absolute gap below one ulp of it carries no information.
    pub fn kms_condition_check(&self, max_len: usize) -> Result<f64> {
        if max_len > 6 {
            return Err(Error::InvalidArgument(format!(
                "word length {max_len} is above the supported maximum 6"
            )));
        }
        let gens = (0..self.spec.num_generators())
            .map(|s| self.spec.generator_element(s).cloned())
            .collect::<Result<Vec<_>>>()?;
        let walk = MarkovWalk {
            psi: self,
            weights: self.weights(),
            gens,
            max_len,
        };
        let mut ranges: BTreeMap<GroupElement, (f64, f64)> = BTreeMap::new();
        walk.visit(self.spec.identity()?, 0, 1.0, 0.0, &mut ranges)?;
        Ok(ranges
            .values()
            .map(|(lo, hi)| (hi - lo) / hi.abs().max(1.0))
            .fold(0.0, f64::max))
    }
}

/// Depth-first walk of the word tree for [`HarmonicVector::kms_condition_check`],
/// sharing the Markov mass of each prefix with its children.
struct MarkovWalk<'a> {
    psi: &'a HarmonicVector,
    weights: Vec<f64>,
    gens: Vec<GroupElement>,
    max_len: usize,
}

impl MarkovWalk<'_> {
    fn visit(
        &self,
        g: GroupElement,
        depth: usize,
        mass: f64,
        potential: f64,
        ranges: &mut BTreeMap<GroupElement, (f64, f64)>,
    ) -> Result<()> {
        let spec = &self.psi.spec;
        let x = (self.psi.beta * potential).exp() * mass;
        let r = ranges.entry(g.clone()).or_insert((x, x));
        r.0 = r.0.min(x);
        r.1 = r.1.max(x);
        if depth == self.max_len {
            return Ok(());
        }
        let mut children = Vec::with_capacity(self.gens.len());
        let mut total = 0.0;
        for (s, w) in self.gens.iter().zip(&self.weights) {
            let h = spec.multiply(&g, s)?;
            let x = w * self.psi.psi_eval(&h)?;
            total += x;
            children.push((h, x));
        }
        if total <= 0.0 {
            return Err(Error::ZeroWeights);
        }
        for (s, (h, x)) in children.into_iter().enumerate() {
            let f = spec.potential()[s];
            self.visit(h, depth + 1, mass * x / total, potential + f, ranges)?;
        }
        Ok(())
    }
}

/// `c > 0` with `e^c + e^{-c} = e^x`, or `None` when `e^x < 2`.
pub fn dihedral_c_beta(x: f64) -> Option<f64> {
    let e = x.exp();
    if e < 2.0 * (1.0 - 1e-12) {
        return None;
    }
    Some((e / 2.0).max(1.0).acosh())
}

/// Extreme point of the simplex of `β`-KMS states.
#[derive(Debug, Clone, PartialEq)]
pub enum Extreme {
    Abelian(QBetaPoint),
    Harmonic(HarmonicVector),
}

/// A finite convex combination of extreme `β`-KMS states.
#[derive(Debug, Clone, PartialEq)]
pub struct KmsState {
    pub beta: f64,
    pub mixture: Vec<(f64, HarmonicVector)>,
    spec: GroupSpec,
}

/// JSON form of a [`KmsState`]:
/// `{"beta": f, "mixture": [{"w": f, "u": [f; n]} | {"w": f, "dihedral_t": f}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDescriptor {
    pub beta: f64,
    pub mixture: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Component {
    Abelian { w: f64, u: Vec<f64> },
    Dihedral { w: f64, dihedral_t: f64 },
}

impl KmsState {
    pub fn new(
        spec: &GroupSpec,
        beta: f64,
        mixture: Vec<(f64, Extreme)>,
        cfg: &SolverConfig,
    ) -> Result<Self> {
        if mixture.is_empty() {
            return Err(Error::InvalidArgument(
                "a state needs at least one component".into(),
            ));
        }
        let total: f64 = mixture.iter().map(|(w, _)| *w).sum();
        if mixture.iter().any(|(w, _)| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "mixture weights must be non-negative and sum to 1 (sum is {total})"
            )));
        }
        let mut out = Vec::with_capacity(mixture.len());
        for (w, e) in mixture {
            let psi = match e {
                Extreme::Abelian(p) => {
                    if p.beta != beta {
                        return Err(Error::InvalidArgument(format!(
                            "component at β = {} in a state at β = {beta}",
                            p.beta
                        )));
                    }
                    let res = p.residual(spec);
                    if !(res <= cfg.eps_geom) {
                        return Err(Error::InvalidArgument(format!(
                            "u = {:?} is not in Q({beta}) (residual {res:e})",
                            p.u
                        )));
                    }
                    HarmonicVector::exponential(spec, beta, p.u)?
                }
                Extreme::Harmonic(h) => {
                    if h.beta != beta {
                        return Err(Error::InvalidArgument(format!(
                            "component at β = {} in a state at β = {beta}",
                            h.beta
                        )));
                    }
                    h
                }
            };
            out.push((w, psi));
        }
        Ok(KmsState {
            beta,
            mixture: out,
            spec: spec.clone(),
        })
    }

    /// The pure state of the point `u ∈ Q(β)`.
    pub fn abelian(spec: &GroupSpec, point: QBetaPoint, cfg: &SolverConfig) -> Result<Self> {
        let beta = point.beta;
        Self::new(spec, beta, vec![(1.0, Extreme::Abelian(point))], cfg)
    }

    pub fn from_descriptor(
        spec: &GroupSpec,
        d: &StateDescriptor,
        cfg: &SolverConfig,
    ) -> Result<Self> {
        let mut mixture = Vec::with_capacity(d.mixture.len());
        for c in &d.mixture {
            mixture.push(match c {
                Component::Abelian { w, u } => (
                    *w,
                    Extreme::Abelian(QBetaPoint {
                        u: u.clone(),
                        beta: d.beta,
                    }),
                ),
                Component::Dihedral { w, dihedral_t } => (
                    *w,
                    Extreme::Harmonic(HarmonicVector::dihedral(spec, d.beta, *dihedral_t)?),
                ),
            });
        }
        Self::new(spec, d.beta, mixture, cfg)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// `ω(V_t V_u^*)`: the weighted cylinder mass when `t = u`, zero when the
    /// words differ but end at the same element, and an error otherwise.
    pub fn state_eval(&self, t: &Word, u: &Word) -> Result<f64> {
        if !self.spec.same_endpoint(t, u)? {
            return Err(Error::EndpointMismatch(
                self.spec.format_word(t),
                self.spec.format_word(u),
            ));
        }
        if t != u {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for (w, psi) in &self.mixture {
            total += w * psi.cylinder_mass(t)?;
        }
        Ok(total)
    }
}

/// Deterministic sample of `Q(β)`: empty below `β₀`, the single point `u(β₀)`
/// at `β₀` (within `eps_geom`), and `u(β) + t_β(v) v` over a sphere grid above.
pub fn sample_q_beta(
    spec: &GroupSpec,
    beta: f64,
    k: usize,
    cfg: &SolverConfig,
) -> Result<Vec<QBetaPoint>> {
    if spec.rank() == 0 {
        return Err(Error::Unsupported(
            "Q(β) is only defined for rank >= 1; use the critical temperature instead".into(),
        ));
    }
    let data = PartitionData::new(spec, cfg)?;
    let beta0 = data.critical_beta(cfg)?;
    if beta < beta0 - cfg.eps_geom {
        return Ok(Vec::new());
    }
    if beta <= beta0 + cfg.eps_geom {
        return Ok(vec![QBetaPoint {
            u: data.u_of_beta(beta0, cfg)?,
            beta,
        }]);
    }
    let u0 = data.u_of_beta(beta, cfg)?;
    sphere::grid(spec.rank(), k)
        .into_iter()
        .map(|v| {
            let t = data.radial_root_from(&u0, beta, &v, cfg)?;
            Ok(QBetaPoint {
                u: crate::linalg::add_scaled(&u0, t, &v),
                beta,
            })
        })
        .collect()
}
