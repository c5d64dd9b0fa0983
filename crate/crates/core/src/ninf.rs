//! The zero-temperature limit set `N∞ ⊂ Δ_Y` and the map `H : S^{n-1} -> N∞`.
//!
//! `H` is built cone by cone. On a 1-dimensional cone, and at the center of
//! any cone `M(Z)`, `H` is the unique point supported on `Z` with equal
//! `t_s^{1/F(s)}`. Elsewhere `v = normalize((1 - λ) c + λ P(v))` with `P(v)` on
//! a proper face, and
//!
//! `t_s^{1/F(s)} / t_z^{1/F(z)} = (H(P)_s^{1/F(s)} / H(P)_z^{1/F(z)}) · exp(-log λ · c · (a_s - a_z))`
//!
//! with `a_s = c_s / F(s)`, `c` the center and `z` any element of `Z`.
//!
//! Two numerical oracles accompany `H`:
//! - [`ray_limit`], the limit of `p_s(r) = e^{-β(rv)F(s) + r v.c_s}` along the
//!   straight ray. On the interior of `M(Z)` it is the center value of `M(Z)`.
//! - [`HMapCache::associated_limit`], the same limit along the shifted ray
//!   `r d + o` read off from the decomposition chain of `v`, which converges
//!   to `H(v)`.

use crate::error::{Error, Result};
use crate::fan::{ConeId, Fan};
use crate::group::{GroupSpec, Word};
use crate::linalg::{self, dot};
use crate::numerics::{log_power_sum_root, PartitionData, SolverConfig};
use crate::sphere;

/// A probability vector on `Y` with its support.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitPoint {
    pub p: Vec<f64>,
    pub support: Vec<usize>,
}

impl LimitPoint {
    pub fn new(p: Vec<f64>) -> Self {
        let support = (0..p.len()).filter(|&s| p[s] > 0.0).collect();
        LimitPoint { p, support }
    }

    fn normalized(mut p: Vec<f64>) -> Self {
        let total: f64 = p.iter().sum();
        for x in &mut p {
            *x /= total;
        }
        Self::new(p)
    }

    pub fn sup_dist(&self, other: &LimitPoint) -> f64 {
        linalg::sup_dist(&self.p, &other.p)
    }

    /// Bernoulli mass `prod_i p(t_i)` of the cylinder over `t`.
    pub fn word_mass(&self, t: &Word) -> f64 {
        t.letters().iter().map(|&s| self.p[s]).product()
    }
}

/// Shifted ray `r d + o` along which `p(r)` converges to `H(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociatedRay {
    pub direction: Vec<f64>,
    pub offset: Vec<f64>,
}

/// The fan of a spec together with the memoized center values of `H`.
#[derive(Debug, Clone)]
pub struct HMapCache {
    spec: GroupSpec,
    fan: Fan,
    centers: Vec<Option<LimitPoint>>,
    cfg: SolverConfig,
}

impl HMapCache {
    pub fn new(spec: &GroupSpec, cfg: &SolverConfig) -> Result<Self> {
        crate::group::validate_spec(spec, cfg).into_result()?;
        let fan = Fan::build(spec, cfg)?;
        let mut cache = HMapCache {
            spec: spec.clone(),
            centers: Vec::new(),
            fan,
            cfg: cfg.clone(),
        };
        cache.centers = (0..cache.fan.cones().len())
            .map(|id| {
                if cache.fan.cone(id).is_zero() {
                    Ok(None)
                } else {
                    cache.compute_center(id).map(Some)
                }
            })
            .collect::<Result<_>>()?;
        Ok(cache)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn compute_center(&self, id: ConeId) -> Result<LimitPoint> {
        let k = self.spec.num_generators();
        let label = &self.fan.cone(id).label;
        let logs: Vec<f64> = (0..k)
            .map(|s| {
                if label.contains(&s) {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        let lx = log_power_sum_root(&logs, self.spec.potential(), &self.cfg)?;
        let p = (0..k)
            .map(|s| {
                if label.contains(&s) {
                    (self.spec.potential()[s] * lx).exp()
                } else {
                    0.0
                }
            })
            .collect();
        Ok(LimitPoint::normalized(p))
    }

    /// The value of `H` at the center of a cone of positive dimension: the
    /// point supported on the label `Z` with all `t_z^{1/F(z)}` equal.
    pub fn h_center(&self, id: ConeId) -> Result<&LimitPoint> {
        self.centers[id]
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("the zero cone has no center".into()))
    }

    fn check_direction(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.fan.rank() || (linalg::norm(v) - 1.0).abs() > self.cfg.eps_geom {
            return Err(Error::InvalidArgument(format!(
                "expected a unit vector in R^{}",
                self.fan.rank()
            )));
        }
        Ok(())
    }

    /// `H(v)` for a unit vector `v`.
    pub fn h_eval(&self, v: &[f64]) -> Result<LimitPoint> {
        self.check_direction(v)?;
        self.eval(v, 0, self.fan.rank() + 1).map(|(t, _)| t)
    }

    /// `H(v)` computed with the base element `z` taken at position `pick`
    /// (mod `|Z|`) of every label along the recursion. The value does not
    /// depend on `pick`; this entry point exists to check exactly that.
    pub fn h_eval_with_base(&self, v: &[f64], pick: usize) -> Result<LimitPoint> {
        self.check_direction(v)?;
        self.eval(v, pick, self.fan.rank() + 1).map(|(t, _)| t)
    }

    /// `H(v)` with the shifted ray that realizes it as a limit.
    pub fn h_eval_traced(&self, v: &[f64]) -> Result<(LimitPoint, AssociatedRay)> {
        self.check_direction(v)?;
        self.eval(v, 0, self.fan.rank() + 1)
    }

    fn eval(&self, v: &[f64], pick: usize, depth: usize) -> Result<(LimitPoint, AssociatedRay)> {
        let id = self.fan.membership(v)?;
        let cone = self.fan.cone(id);
        let at_center = cone.dim == 1 || linalg::angle(v, &cone.center) <= self.cfg.eps_geom;
        if at_center {
            let ray = AssociatedRay {
                direction: cone.center.clone(),
                offset: vec![0.0; self.fan.rank()],
            };
            return Ok((self.h_center(id)?.clone(), ray));
        }
        if depth == 0 {
            return Err(Error::DegenerateFan(format!(
                "recursion through the faces of {:?} did not terminate",
                cone.label
            )));
        }
        let (lambda, p) = self.fan.boundary_decompose(id, v)?;
        if self.fan.cone(self.fan.membership(&p)?).dim >= cone.dim {
            return Err(Error::DegenerateFan(format!(
                "boundary point of cone {:?} was not classified to a proper face",
                cone.label
            )));
        }
        let (hp, inner) = self.eval(&p, pick, depth - 1)?;
        let a = self.fan.normalized();
        let f = self.spec.potential();
        let z = cone.label[pick % cone.label.len()];
        let log_lambda = lambda.ln();
        let base = hp.p[z].ln() / f[z];
        let logs: Vec<f64> = (0..f.len())
            .map(|s| {
                if hp.p[s] <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    hp.p[s].ln() / f[s]
                        - base
                        - log_lambda * dot(&cone.center, &linalg::sub(&a[s], &a[z]))
                }
            })
            .collect();
        let lx = log_power_sum_root(&logs, f, &self.cfg)?;
        let t: Vec<f64> = logs
            .iter()
            .zip(f)
            .map(|(lr, fs)| {
                if lr.is_finite() {
                    (fs * (lx + lr)).exp()
                } else {
                    0.0
                }
            })
            .collect();
        let ray = AssociatedRay {
            direction: inner.direction,
            offset: linalg::add_scaled(&inner.offset, -log_lambda, &cone.center),
        };
        Ok((LimitPoint::normalized(t), ray))
    }

    /// `lim_r p(r d + o)` for the associated ray of `v`: an independent
    /// numerical route to `H(v)` that only uses `β(u)`.
    pub fn associated_limit(&self, v: &[f64]) -> Result<RayLimit> {
        let (_, ray) = self.h_eval_traced(v)?;
        shifted_ray_limit(&self.spec, &ray.direction, &ray.offset, &self.cfg)
    }

    /// `H` on the deterministic `K`-point sphere grid.
    pub fn n_infinity_sample(&self, k: usize) -> Result<Vec<(Vec<f64>, LimitPoint)>> {
        sphere::grid(self.fan.rank(), k)
            .into_iter()
            .map(|v| {
                let t = self.h_eval(&v)?;
                Ok((v, t))
            })
            .collect()
    }
}

/// Iterates and the limit of `p(r)` over the schedule `r = 2^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RayLimit {
    pub limit: LimitPoint,
    /// `(r, p(r))` for every evaluated radius.
    pub iterates: Vec<(f64, Vec<f64>)>,
    /// Sup-norm gaps between consecutive iterates.
    pub gaps: Vec<f64>,
}

pub const RAY_SCHEDULE_MAX_EXPONENT: u32 = 12;

/// `lim_{r -> ∞} e^{-β(rv)F(s) + r v.c_s}` along the straight ray through `v`.
pub fn ray_limit(spec: &GroupSpec, v: &[f64], cfg: &SolverConfig) -> Result<RayLimit> {
    let zero = vec![0.0; v.len()];
    shifted_ray_limit(spec, v, &zero, cfg)
}

/// The same limit along `r d + o`. Stops as soon as consecutive iterates on
/// the schedule `r = 1, 2, 4, ..., 2^12` differ by less than `eps_limit / 10`.
pub fn shifted_ray_limit(
    spec: &GroupSpec,
    d: &[f64],
    o: &[f64],
    cfg: &SolverConfig,
) -> Result<RayLimit> {
    if spec.rank() == 0
        || d.len() != spec.rank()
        || o.len() != spec.rank()
        || linalg::norm(d) == 0.0
    {
        return Err(Error::InvalidArgument(format!(
            "expected a nonzero direction in R^{}",
            spec.rank()
        )));
    }
    let data = PartitionData::from_spec_unchecked(spec);
    let mut iterates: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut gaps = Vec::new();
    for k in 0..=RAY_SCHEDULE_MAX_EXPONENT {
        let r = 2f64.powi(k as i32);
        let u = linalg::add_scaled(o, r, d);
        let beta = data.beta_of_u(&u, cfg)?;
        let p: Vec<f64> = spec
            .cvec()
            .iter()
            .zip(spec.potential())
            .map(|(c, f)| (dot(&u, c) - beta * f).exp())
            .collect();
        if let Some((_, prev)) = iterates.last() {
            let gap = linalg::sup_dist(prev, &p);
            gaps.push(gap);
            iterates.push((r, p));
            if gap < cfg.eps_limit / 10.0 {
                let last = iterates.last().expect("just pushed").1.clone();
                return Ok(RayLimit {
                    limit: LimitPoint::normalized(last),
                    iterates,
                    gaps,
                });
            }
        } else {
            iterates.push((r, p));
        }
    }
    let n = iterates.len();
    Err(Error::RayLimitNotSettled {
        r_prev: iterates[n - 2].0,
        r_last: iterates[n - 1].0,
        prev: iterates[n - 2].1.clone(),
        last: iterates[n - 1].1.clone(),
        gap: *gaps.last().expect("schedule has at least two radii"),
    })
}

/// `ω(V_t V_u^*)` for the KMS∞ state `sum_i w_i n_{p_i}`, each `n_p` the
/// Bernoulli measure of `p`.
pub fn kms_infinity_eval(
    spec: &GroupSpec,
    points: &[(f64, LimitPoint)],
    t: &Word,
    u: &Word,
) -> Result<f64> {
    let total: f64 = points.iter().map(|(w, _)| *w).sum();
    if points.is_empty() || points.iter().any(|(w, _)| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-12
    {
        return Err(Error::InvalidArgument(format!(
            "weights must be non-negative and sum to 1 (sum is {total})"
        )));
    }
    if !spec.same_endpoint(t, u)? {
        return Err(Error::EndpointMismatch(
            spec.format_word(t),
            spec.format_word(u),
        ));
    }
    if t != u {
        return Ok(0.0);
    }
    Ok(points.iter().map(|(w, p)| w * p.word_mass(t)).sum())
}
