//! The fan of polyhedral cones
//! `M(Z) = { v : v.(c_s/F(s) - c_z/F(z)) <= 0 for s ∉ Z, = 0 for s, z ∈ Z }`.
//!
//! Cones are labelled by their maximal set `Z`. A direction `v` lies in the
//! relative interior of `M(Z)` exactly when `Z` is the set of generators that
//! maximize `v . c_s / F(s)`, so the labels are the argmax sets of the
//! normalized vectors `a_s = c_s / F(s)`.
//!
//! Construction:
//! 1. extreme rays come from `n`-element subsets whose equality system has a
//!    one-dimensional kernel, with a sign satisfying every inequality;
//! 2. every subset `Z ⊆ Y` with at least one ray `r` (`Z ⊆ label(r)`) spans the
//!    cone generated by those rays, whose maximal label is the intersection
//!    of their labels.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::linalg::{self, dot};
use crate::numerics::SolverConfig;

pub type ConeId = usize;

pub const MAX_GENERATORS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    pub id: ConeId,
    /// The maximal label `Z`, as sorted generator indices.
    pub label: Vec<usize>,
    /// `a_{z'} - a_{z0}` for `z' ∈ Z`, `z0` the first element of `Z`.
    pub eq_normals: Vec<Vec<f64>>,
    /// `a_s - a_{z0}` for `s ∉ Z`, paired with `s`.
    pub ineq_normals: Vec<(usize, Vec<f64>)>,
    pub dim: usize,
    /// Unit vectors of the 1-faces.
    pub rays: Vec<Vec<f64>>,
    /// Normalized mean of the rays; empty for the zero cone.
    pub center: Vec<f64>,
    /// Orthonormal basis of the linear span `M(Z) - M(Z)`.
    pub span: Vec<Vec<f64>>,
    /// Proper faces, i.e. cones whose label strictly contains `Z`.
    pub face_ids: Vec<ConeId>,
}

impl Cone {
    /// Largest constraint value at `v`: equalities count by absolute value.
    /// Non-positive (up to tolerance) iff `v ∈ M(Z)`.
    pub fn max_violation(&self, v: &[f64]) -> f64 {
        let eq = self
            .eq_normals
            .iter()
            .map(|q| dot(q, v).abs())
            .fold(f64::NEG_INFINITY, f64::max);
        let ineq = self
            .ineq_normals
            .iter()
            .map(|(_, q)| dot(q, v))
            .fold(f64::NEG_INFINITY, f64::max);
        eq.max(ineq)
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        self.max_violation(v) <= tol
    }

    /// Strict interior test in the relative topology: every inequality
    /// slack below `-tol` and every equality within `tol`.
    pub fn interior_contains(&self, v: &[f64], tol: f64) -> bool {
        self.eq_normals.iter().all(|q| dot(q, v).abs() <= tol)
            && self.ineq_normals.iter().all(|(_, q)| dot(q, v) < -tol)
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }
}

#[derive(Debug, Clone)]
pub struct Fan {
    rank: usize,
    normalized: Vec<Vec<f64>>,
    tol: f64,
    eps_geom: f64,
    cones: Vec<Cone>,
    by_label: HashMap<u32, ConeId>,
    /// Extreme rays of the whole fan with their label bitmasks.
    rays: Vec<(Vec<f64>, u32)>,
    skeletons: Vec<Vec<ConeId>>,
}

fn mask_of(label: &[usize]) -> u32 {
    label.iter().fold(0, |m, &s| m | (1 << s))
}

fn label_of(mask: u32, k: usize) -> Vec<usize> {
    (0..k).filter(|&s| mask & (1 << s) != 0).collect()
}

/// All `size`-element subsets of `0..k` in lexicographic order.
fn combinations(k: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            if k - i < left {
                break;
            }
            cur.push(i);
            rec(i + 1, k, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, size, &mut Vec::new(), &mut out);
    out
}

/// Extreme rays (unit vectors) of `{ v : e . v = 0 for e in eq, q . v <= 0 for q in ineq }`.
/// If the cone contains a line, both directions of that line are reported.
pub fn extreme_rays(
    eq: &[Vec<f64>],
    ineq: &[Vec<f64>],
    n: usize,
    tol: f64,
) -> Result<Vec<Vec<f64>>> {
    if eq.iter().chain(ineq).any(|q| q.len() != n) {
        return Err(Error::InvalidArgument(
            "constraint length differs from dimension".into(),
        ));
    }
    let d = linalg::kernel(eq, n, tol).len();
    if d == 0 {
        return Ok(Vec::new());
    }
    let feasible = |r: &[f64]| {
        ineq.iter()
            .all(|q| dot(q, r) <= tol * linalg::norm(q).max(1.0))
    };
    let mut out: Vec<Vec<f64>> = Vec::new();
    for subset in combinations(ineq.len(), d - 1) {
        let mut rows = eq.to_vec();
        rows.extend(subset.iter().map(|&i| ineq[i].clone()));
        let ker = linalg::kernel(&rows, n, tol);
        if ker.len() != 1 {
            continue;
        }
        for r in [ker[0].clone(), linalg::scale(&ker[0], -1.0)] {
            if feasible(&r) && !out.iter().any(|o| linalg::sup_dist(o, &r) < 1e-7) {
                out.push(r);
            }
        }
    }
    Ok(out)
}

impl Fan {
    pub fn build(spec: &GroupSpec, cfg: &SolverConfig) -> Result<Fan> {
        let n = spec.rank();
        let k = spec.num_generators();
        if n == 0 {
            return Err(Error::Unsupported("the cone fan needs rank >= 1".into()));
        }
        if k > MAX_GENERATORS {
            return Err(Error::Unsupported(format!(
                "cone fan supports at most {MAX_GENERATORS} generators, got {k}"
            )));
        }
        let normalized: Vec<Vec<f64>> = spec
            .cvec()
            .iter()
            .zip(spec.potential())
            .map(|(c, f)| linalg::scale(c, 1.0 / f))
            .collect();
        let scale = normalized
            .iter()
            .map(|a| linalg::norm(a))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut fan = Fan {
            rank: n,
            normalized,
            tol: cfg.eps_geom * scale,
            eps_geom: cfg.eps_geom,
            cones: Vec::new(),
            by_label: HashMap::new(),
            rays: Vec::new(),
            skeletons: Vec::new(),
        };
        fan.find_rays()?;
        fan.assemble_cones()?;
        Ok(fan)
    }

    fn find_rays(&mut self) -> Result<()> {
        let n = self.rank;
        let k = self.normalized.len();
        for subset in combinations(k, n) {
            let z0 = subset[0];
            let rows: Vec<Vec<f64>> = subset[1..]
                .iter()
                .map(|&z| linalg::sub(&self.normalized[z], &self.normalized[z0]))
                .collect();
            let ker = linalg::kernel(&rows, n, self.eps_geom);
            if ker.len() != 1 {
                continue;
            }
            let ok = |r: &[f64]| {
                self.normalized
                    .iter()
                    .all(|a| dot(r, &linalg::sub(a, &self.normalized[z0])) <= self.tol)
            };
            let plus = ker[0].clone();
            let minus = linalg::scale(&plus, -1.0);
            let r = match (ok(&plus), ok(&minus)) {
                (true, true) => {
                    return Err(Error::DegenerateFan(format!(
                        "M({:?}) contains the line through {plus:?}",
                        subset
                    )))
                }
                (true, false) => plus,
                (false, true) => minus,
                (false, false) => continue,
            };
            let mask = mask_of(&self.argmax_label(&r));
            if !self.rays.iter().any(|(_, m)| *m == mask) {
                self.rays.push((r, mask));
            }
        }
        if self.rays.is_empty() {
            return Err(Error::DegenerateFan("no extreme rays found".into()));
        }
        Ok(())
    }

    fn assemble_cones(&mut self) -> Result<()> {
        let n = self.rank;
        let k = self.normalized.len();
        let full: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        let mut labels: Vec<u32> = Vec::new();
        for z in 1..=full {
            let closure = self
                .rays
                .iter()
                .filter(|(_, m)| m & z == z)
                .fold(None, |acc: Option<u32>, (_, m)| {
                    Some(acc.map_or(*m, |a| a & m))
                });
            if let Some(c) = closure {
                if !labels.contains(&c) {
                    labels.push(c);
                }
            }
        }
        // cones ordered by dimension (descending) then label, for stable ids
        let mut cones: Vec<Cone> = labels
            .iter()
            .map(|&mask| {
                let rays: Vec<Vec<f64>> = self
                    .rays
                    .iter()
                    .filter(|(_, m)| m & mask == mask)
                    .map(|(r, _)| r.clone())
                    .collect();
                self.make_cone(mask, rays)
            })
            .collect();
        cones.push(self.make_cone(full, Vec::new()));
        cones.sort_by(|a, b| b.dim.cmp(&a.dim).then(a.label.cmp(&b.label)));
        for (i, c) in cones.iter_mut().enumerate() {
            c.id = i;
        }
        let masks: Vec<u32> = cones.iter().map(|c| mask_of(&c.label)).collect();
        for (i, c) in cones.iter_mut().enumerate() {
            c.face_ids = (0..masks.len())
                .filter(|&j| j != i && masks[j] & masks[i] == masks[i])
                .collect();
        }
        for (i, m) in masks.iter().enumerate() {
            self.by_label.insert(*m, i);
        }
        for c in cones.iter().filter(|c| !c.is_zero()) {
            if !c.interior_contains(&c.center, self.tol) {
                return Err(Error::DegenerateFan(format!(
                    "center of cone {:?} is not interior",
                    c.label
                )));
            }
            for r in &c.rays {
                if c.contains(&linalg::scale(r, -1.0), self.tol) {
                    return Err(Error::DegenerateFan(format!(
                        "cone {:?} is not strongly convex",
                        c.label
                    )));
                }
            }
        }
        self.skeletons = (1..=n)
            .map(|d| {
                cones
                    .iter()
                    .filter(|c| c.dim >= 1 && c.dim <= d)
                    .map(|c| c.id)
                    .collect()
            })
            .collect();
        self.cones = cones;
        let _ = full;
        Ok(())
    }

    fn make_cone(&self, mask: u32, rays: Vec<Vec<f64>>) -> Cone {
        let label = label_of(mask, self.normalized.len());
        let z0 = label[0];
        let base = &self.normalized[z0];
        let eq_normals = label[1..]
            .iter()
            .map(|&z| linalg::sub(&self.normalized[z], base))
            .collect();
        let ineq_normals = (0..self.normalized.len())
            .filter(|s| mask & (1 << s) == 0)
            .map(|s| (s, linalg::sub(&self.normalized[s], base)))
            .collect();
        let span = linalg::orthonormalize(&rays, self.eps_geom);
        let center = if rays.is_empty() {
            Vec::new()
        } else {
            let mut sum = vec![0.0; self.rank];
            for r in &rays {
                sum = linalg::add_scaled(&sum, 1.0 / rays.len() as f64, r);
            }
            linalg::normalize(&sum).unwrap_or_default()
        };
        Cone {
            id: 0,
            label,
            eq_normals,
            ineq_normals,
            dim: span.len(),
            rays,
            center,
            span,
            face_ids: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, id: ConeId) -> &Cone {
        &self.cones[id]
    }

    /// Cones of dimension `1..=k`.
    pub fn skeleton(&self, k: usize) -> &[ConeId] {
        &self.skeletons[k.clamp(1, self.rank) - 1]
    }

    /// Absolute tolerance used for every geometric comparison
    /// (`eps_geom` times the largest `|c_s / F(s)|`).
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn normalized(&self) -> &[Vec<f64>] {
        &self.normalized
    }

    /// Generators maximizing `v . c_s / F(s)` up to tolerance.
    pub fn argmax_label(&self, v: &[f64]) -> Vec<usize> {
        let vals: Vec<f64> = self.normalized.iter().map(|a| dot(a, v)).collect();
        let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let tol = self.tol * linalg::norm(v).max(f64::MIN_POSITIVE);
        (0..vals.len()).filter(|&s| m - vals[s] <= tol).collect()
    }

    /// The cone generated by all rays whose label contains `z`, identified
    /// by its maximal label.
    pub fn closure(&self, z: &[usize]) -> Option<ConeId> {
        let zm = mask_of(z);
        let closure = self
            .rays
            .iter()
            .filter(|(_, m)| m & zm == zm)
            .fold(None, |acc: Option<u32>, (_, m)| {
                Some(acc.map_or(*m, |a| a & m))
            })?;
        self.by_label.get(&closure).copied()
    }

    pub fn by_label(&self, label: &[usize]) -> Option<ConeId> {
        self.by_label.get(&mask_of(label)).copied()
    }

    /// The cone whose relative interior contains `v`: the maximal `Z` with
    /// `v ∈ Int M(Z)`.
    pub fn membership(&self, v: &[f64]) -> Result<ConeId> {
        if v.len() != self.rank || linalg::norm(v) == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "expected a nonzero vector in R^{}",
                self.rank
            )));
        }
        let label = self.argmax_label(v);
        self.closure(&label).ok_or_else(|| {
            Error::DegenerateFan(format!(
                "no cone contains direction {v:?} (label {label:?})"
            ))
        })
    }

    /// Full-dimensional cones holding `v` strictly inside. For a direction
    /// on no boundary this is exactly one cone; near a boundary it is empty.
    pub fn interior_claims(&self, v: &[f64]) -> Vec<ConeId> {
        self.cones
            .iter()
            .filter(|c| c.dim == self.rank && c.interior_contains(v, self.tol))
            .map(|c| c.id)
            .collect()
    }

    /// Writes a unit `v ∈ M(Z)`, `v ≠ center`, as
    /// `v = normalize((1 - λ) center + λ P(v))` with `λ ∈ (0, 1]` and `P(v)`
    /// on the boundary of the cone. The boundary point is where the great
    /// circle from the center through `v` first leaves the cone.
    pub fn boundary_decompose(&self, id: ConeId, v: &[f64]) -> Result<(f64, Vec<f64>)> {
        let cone = &self.cones[id];
        if cone.dim < 2 {
            return Err(Error::InvalidArgument(format!(
                "boundary decomposition needs a cone of dimension >= 2, got {}",
                cone.dim
            )));
        }
        if v.len() != self.rank || (linalg::norm(v) - 1.0).abs() > self.eps_geom.sqrt() {
            return Err(Error::InvalidArgument("expected a unit vector".into()));
        }
        if !cone.contains(v, self.tol) {
            return Err(Error::OutsideCone);
        }
        let c = &cone.center;
        let vp = linalg::normalize(&linalg::project(v, &cone.span)).ok_or(Error::OutsideCone)?;
        if linalg::angle(&vp, c) <= self.eps_geom {
            return Err(Error::AtCenter);
        }
        let w =
            linalg::normalize(&linalg::add_scaled(&vp, -dot(&vp, c), c)).ok_or(Error::AtCenter)?;
        let theta_v = dot(&vp, &w).atan2(dot(&vp, c));
        let theta_exit = cone
            .ineq_normals
            .iter()
            .map(|(_, q)| (-dot(q, c)).atan2(dot(q, &w)))
            .fold(f64::INFINITY, f64::min);
        if !theta_exit.is_finite() {
            return Err(Error::DegenerateFan(format!(
                "cone {:?} has no inequality to leave through",
                cone.label
            )));
        }
        let theta_v = theta_v.min(theta_exit);
        let p = linalg::add_scaled(&linalg::scale(c, theta_exit.cos()), theta_exit.sin(), &w);
        let lambda = theta_v.sin() / (theta_v.sin() + (theta_exit - theta_v).sin());
        Ok((lambda, p))
    }
}
