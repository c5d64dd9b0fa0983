//! Root finding and convex minimization for the partition function
//! `Z(u, β) = sum_s exp(u . c_s - β F(s))`.
//!
//! Every sum is evaluated as a log-sum-exp so that the ray limits, which push
//! `|u|` into the thousands, stay finite.

use crate::error::{Error, Result};
use crate::group::{validate_spec, GroupSpec};
use crate::linalg::{self, dot, logsumexp};

/// Tolerances shared by every solver. The ordering
/// `eps_root < eps_grad < eps_geom < eps_limit` is part of the contract:
/// geometric classification is always coarser than root residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub eps_root: f64,
    pub eps_grad: f64,
    pub eps_geom: f64,
    pub eps_limit: f64,
    pub max_iter: usize,
    pub max_radius: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eps_root: 1e-12,
            eps_grad: 1e-10,
            eps_geom: 1e-9,
            eps_limit: 1e-6,
            max_iter: 200,
            max_radius: crate::group::DEFAULT_MAX_RADIUS,
        }
    }
}

impl SolverConfig {
    /// Defaults overridden by `KMS_CAYLEY_EPS_{ROOT,GRAD,GEOM,LIMIT}`.
    pub fn from_env() -> Result<Self> {
        let mut cfg = SolverConfig::default();
        for (suffix, slot) in [
            ("ROOT", &mut cfg.eps_root),
            ("GRAD", &mut cfg.eps_grad),
            ("GEOM", &mut cfg.eps_geom),
            ("LIMIT", &mut cfg.eps_limit),
        ] {
            let key = format!("KMS_CAYLEY_EPS_{suffix}");
            if let Ok(text) = std::env::var(&key) {
                *slot = text
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("{key}={text} is not a number")))?;
            }
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<()> {
        let eps = [self.eps_root, self.eps_grad, self.eps_geom, self.eps_limit];
        if eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) || self.max_iter == 0 {
            return Err(Error::InvalidArgument(
                "solver tolerances and max_iter must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// The exponent data `(F(s), c_s)` of a validated group spec.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionData {
    potential: Vec<f64>,
    cvec: Vec<Vec<f64>>,
    rank: usize,
}

impl PartitionData {
    pub fn new(spec: &GroupSpec, cfg: &SolverConfig) -> Result<Self> {
        validate_spec(spec, cfg).into_result()?;
        Ok(Self::from_spec_unchecked(spec))
    }

    pub fn from_spec_unchecked(spec: &GroupSpec) -> Self {
        PartitionData {
            potential: spec.potential().to_vec(),
            cvec: spec.cvec().to_vec(),
            rank: spec.rank(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn cvec(&self) -> &[Vec<f64>] {
        &self.cvec
    }

    /// `u . c_s - β F(s)` for every generator.
    pub fn exponents(&self, u: &[f64], beta: f64) -> Vec<f64> {
        self.cvec
            .iter()
            .zip(&self.potential)
            .map(|(c, f)| dot(u, c) - beta * f)
            .collect()
    }

    /// `log Z(u, β)`.
    pub fn log_partition(&self, u: &[f64], beta: f64) -> f64 {
        logsumexp(&self.exponents(u, beta))
    }

    pub fn partition(&self, u: &[f64], beta: f64) -> f64 {
        self.log_partition(u, beta).exp()
    }

    /// `grad_u Z(u, β) = sum_s c_s exp(u . c_s - β F(s))`.
    pub fn partition_gradient(&self, u: &[f64], beta: f64) -> Vec<f64> {
        let mut g = vec![0.0; self.rank];
        for (e, c) in self.exponents(u, beta).iter().zip(&self.cvec) {
            let w = e.exp();
            for (gi, ci) in g.iter_mut().zip(c) {
                *gi += w * ci;
            }
        }
        g
    }

    /// Softmax weights of the exponents together with their log-normalizer.
    fn weights(&self, u: &[f64], beta: f64) -> (Vec<f64>, f64) {
        let e = self.exponents(u, beta);
        let l = logsumexp(&e);
        (e.iter().map(|x| (x - l).exp()).collect(), l)
    }

    /// The unique `β(u) > 0` with `Z(u, β(u)) = 1`.
    pub fn beta_of_u(&self, u: &[f64], cfg: &SolverConfig) -> Result<f64> {
        let f = |b: f64| {
            let (p, l) = self.weights(u, b);
            (l, -dot(&p, &self.potential))
        };
        let lo = 0.0;
        if f(lo).0 <= 0.0 {
            return Err(Error::NonConvergence {
                what: "beta_of_u bracket",
                iterations: 0,
                residual: f(lo).0,
            });
        }
        let hi = expand_until(|b| f(b).0 < 0.0, 1.0, cfg.max_iter, "beta_of_u bracket")?;
        monotone_root(f, lo, hi, cfg.eps_root, cfg.max_iter, "beta_of_u")
    }

    /// Minimizer of the strictly convex map `u ↦ Z(u, β)` by damped Newton
    /// with an Armijo backtracking line search, started at the origin.
    pub fn u_of_beta(&self, beta: f64, cfg: &SolverConfig) -> Result<Vec<f64>> {
        let n = self.rank;
        if n == 0 {
            return Err(Error::Unsupported(
                "u(β) needs rank >= 1; use the critical-beta path for finite abelianization".into(),
            ));
        }
        let mut u = vec![0.0; n];
        for it in 0..cfg.max_iter {
            let (p, l) = self.weights(&u, beta);
            let mean: Vec<f64> = (0..n)
                .map(|i| p.iter().zip(&self.cvec).map(|(w, c)| w * c[i]).sum())
                .collect();
            if linalg::norm(&mean) * l.exp() <= cfg.eps_grad * 1e-3 {
                return Ok(u);
            }
            let mut hess = vec![vec![0.0; n]; n];
            for (w, c) in p.iter().zip(&self.cvec) {
                for i in 0..n {
                    for j in 0..n {
                        hess[i][j] += w * (c[i] - mean[i]) * (c[j] - mean[j]);
                    }
                }
            }
            let neg: Vec<f64> = mean.iter().map(|g| -g).collect();
            let dir = linalg::cholesky_solve(&hess, &neg).unwrap_or_else(|| neg.clone());
            let slope = dot(&mean, &dir);
            let mut step = 1.0;
            let mut accepted = None;
            while step > 1e-20 {
                let wanted = 1e-4 * step * slope;
                if !(l + wanted < l) {
                    // the sufficient decrease is below the rounding of log Z
                    break;
                }
                let cand = linalg::add_scaled(&u, step, &dir);
                let lc = self.log_partition(&cand, beta);
                if lc <= l + wanted {
                    accepted = Some(cand);
                    break;
                }
                step *= 0.5;
            }
            if accepted.is_none() {
                // Near the minimum the decrease of log Z drops below its
                // rounding, so fall back to the gradient norm as merit.
                let cand = linalg::add_scaled(&u, 1.0, &dir);
                let (pc, _) = self.weights(&cand, beta);
                let mean_c: Vec<f64> = (0..n)
                    .map(|i| pc.iter().zip(&self.cvec).map(|(w, c)| w * c[i]).sum())
                    .collect();
                if linalg::norm(&mean_c) < linalg::norm(&mean) {
                    accepted = Some(cand);
                }
            }
            match accepted {
                Some(next) => {
                    let moved = linalg::sup_dist(&next, &u);
                    u = next;
                    if moved <= f64::EPSILON * (1.0 + linalg::norm(&u)) {
                        break;
                    }
                }
                None => break,
            }
            if it + 1 == cfg.max_iter {
                break;
            }
        }
        let g = linalg::norm(&self.partition_gradient(&u, beta));
        if g <= cfg.eps_grad {
            Ok(u)
        } else {
            Err(Error::NonConvergence {
                what: "u_of_beta",
                iterations: cfg.max_iter,
                residual: g,
            })
        }
    }

    /// `log h(β)` where `h(β) = min_u Z(u, β)` (or `Z(0, β)` for rank 0),
    /// together with its derivative `-sum_s F(s) p_s`.
    pub fn log_min_partition(&self, beta: f64, cfg: &SolverConfig) -> Result<(f64, f64)> {
        let u = if self.rank == 0 {
            Vec::new()
        } else {
            self.u_of_beta(beta, cfg)?
        };
        let (p, l) = self.weights(&u, beta);
        Ok((l, -dot(&p, &self.potential)))
    }

    /// The critical inverse temperature: the root of `h(β) = 1`. `h` is
    /// strictly decreasing (its log-derivative is `-sum F(s) p_s < 0`), so a
    /// safeguarded Newton iteration on `log h` inside a bisection bracket is
    /// used.
    pub fn critical_beta(&self, cfg: &SolverConfig) -> Result<f64> {
        let mut err = None;
        let mut f = |b: f64| match self.log_min_partition(b, cfg) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                (f64::NAN, f64::NAN)
            }
        };
        let lo = expand_down(|b| f(b).0 > 0.0, cfg.max_iter)?;
        let hi = expand_until(
            |b| f(b).0 < 0.0,
            lo.max(0.0) + 1.0,
            cfg.max_iter,
            "critical_beta bracket",
        )?;
        let root = monotone_root(&mut f, lo, hi, cfg.eps_root, cfg.max_iter, "critical_beta");
        if let Some(e) = err {
            return Err(e);
        }
        root
    }

    /// The positive `t` with `Z(u(β) + t v, β) = 1`, for unit `v` and `β > β₀`.
    pub fn radial_root(&self, beta: f64, v: &[f64], cfg: &SolverConfig) -> Result<f64> {
        let nv = linalg::norm(v);
        if v.len() != self.rank || (nv - 1.0).abs() > cfg.eps_geom {
            return Err(Error::InvalidArgument(format!(
                "direction must be a unit vector in R^{}",
                self.rank
            )));
        }
        let u0 = self.u_of_beta(beta, cfg)?;
        self.radial_root_from(&u0, beta, v, cfg)
    }

    /// As [`radial_root`](Self::radial_root) with `u(β)` already known.
    pub fn radial_root_from(
        &self,
        u0: &[f64],
        beta: f64,
        v: &[f64],
        cfg: &SolverConfig,
    ) -> Result<f64> {
        let l0 = self.log_partition(u0, beta);
        if !(l0.exp() < 1.0 - cfg.eps_root) {
            let beta0 = self.critical_beta(cfg)?;
            return Err(Error::NoSphere { beta, beta0 });
        }
        let f = |t: f64| {
            let u = linalg::add_scaled(u0, t, v);
            let (p, l) = self.weights(&u, beta);
            let d: f64 = p.iter().zip(&self.cvec).map(|(w, c)| w * dot(v, c)).sum();
            (l, d)
        };
        let hi = expand_until(|t| f(t).0 > 0.0, 1.0, cfg.max_iter, "radial_root bracket")?;
        monotone_root(f, 0.0, hi, cfg.eps_root, cfg.max_iter, "radial_root")
    }
}

/// Positive `x` with `sum_s (x r_s)^{F(s)} = 1`. The left side is strictly
/// increasing in `x`, so the root is unique.
pub fn power_sum_root(weights: &[f64], exponents: &[f64], cfg: &SolverConfig) -> Result<f64> {
    if weights.len() != exponents.len() || weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::InvalidArgument(
            "weights must be non-negative and match the exponents".into(),
        ));
    }
    let logs: Vec<f64> = weights
        .iter()
        .map(|&w| if w > 0.0 { w.ln() } else { f64::NEG_INFINITY })
        .collect();
    log_power_sum_root(&logs, exponents, cfg).map(f64::exp)
}

/// Log-space form of [`power_sum_root`]: given `log r_s` (`-inf` for zero
/// weights) returns `log x`.
pub fn log_power_sum_root(
    log_weights: &[f64],
    exponents: &[f64],
    cfg: &SolverConfig,
) -> Result<f64> {
    let terms: Vec<(f64, f64)> = log_weights
        .iter()
        .zip(exponents)
        .filter(|(lw, _)| lw.is_finite())
        .map(|(&lw, &f)| (lw, f))
        .collect();
    if terms.is_empty() {
        return Err(Error::ZeroWeights);
    }
    let f = |y: f64| {
        let e: Vec<f64> = terms.iter().map(|(lw, fs)| fs * (y + lw)).collect();
        let l = logsumexp(&e);
        let d: f64 = e
            .iter()
            .zip(&terms)
            .map(|(x, (_, fs))| fs * (x - l).exp())
            .sum();
        (l, d)
    };
    // bracket around the largest single-term root
    let guess = terms
        .iter()
        .map(|(lw, _)| -lw)
        .fold(f64::INFINITY, f64::min);
    let mut lo = guess - 1.0;
    let mut width = 1.0;
    let mut k = 0;
    while f(lo).0 > 0.0 {
        width *= 2.0;
        lo = guess - width;
        k += 1;
        if k > cfg.max_iter {
            return Err(Error::NonConvergence {
                what: "power_sum_root bracket",
                iterations: k,
                residual: f(lo).0,
            });
        }
    }
    let hi = guess + 1e-12 * (1.0 + guess.abs());
    let hi = if f(hi).0 >= 0.0 { hi } else { guess + 1.0 };
    monotone_root(f, lo, hi, cfg.eps_root, cfg.max_iter, "power_sum_root")
}

/// Smallest `x = start * 2^k` with `pred(x)`.
fn expand_until(
    mut pred: impl FnMut(f64) -> bool,
    start: f64,
    max_iter: usize,
    what: &'static str,
) -> Result<f64> {
    let mut x = start;
    for _ in 0..max_iter.max(64) {
        if pred(x) {
            return Ok(x);
        }
        x *= 2.0;
        if !x.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergence {
        what,
        iterations: max_iter,
        residual: x,
    })
}

/// A lower bracket end for a decreasing function: 0 if `pred(0)`, else
/// `-1, -2, -4, ...`.
fn expand_down(mut pred: impl FnMut(f64) -> bool, max_iter: usize) -> Result<f64> {
    if pred(0.0) {
        return Ok(0.0);
    }
    let mut x = -1.0;
    for _ in 0..max_iter.max(64) {
        if pred(x) {
            return Ok(x);
        }
        x *= 2.0;
    }
    Err(Error::NonConvergence {
        what: "critical_beta lower bracket",
        iterations: max_iter,
        residual: x,
    })
}

/// Safeguarded Newton for a monotone function with a sign change on
/// `[lo, hi]`. `f` returns the value and the derivative. Stops once
/// `|f| <= tol` or the bracket collapses to a few ulps.
pub(crate) fn monotone_root(
    mut f: impl FnMut(f64) -> (f64, f64),
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
    what: &'static str,
) -> Result<f64> {
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum()) {
        return Err(Error::NonConvergence {
            what,
            iterations: 0,
            residual: flo.abs().min(fhi.abs()),
        });
    }
    let lo_sign = flo.signum();
    let mut x = 0.5 * (lo + hi);
    let mut best = (f64::INFINITY, x);
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if !fx.is_finite() {
            break;
        }
        if fx.abs() < best.0 {
            best = (fx.abs(), x);
        }
        if fx.abs() <= tol {
            // one more Newton step polishes the last bits for free
            let polished = x - fx / dfx;
            if polished > lo && polished < hi && dfx != 0.0 {
                let (fp, _) = f(polished);
                if fp.abs() <= fx.abs() {
                    return Ok(polished);
                }
            }
            return Ok(x);
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * (lo.abs().max(hi.abs()).max(1.0)) {
            return Ok(best.1);
        }
        let newton = x - fx / dfx;
        x = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    if best.0 <= tol {
        return Ok(best.1);
    }
    Err(Error::NonConvergence {
        what,
        iterations: max_iter,
        residual: best.0,
    })
}
