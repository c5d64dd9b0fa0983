use std::collections::HashMap;

use super::{GroupSpec, Word};
use crate::fan::extreme_rays;
use crate::linalg;
use crate::numerics::SolverConfig;

/// Outcome of [`validate_spec`]: hard violations plus advisory warnings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> crate::Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(crate::Error::Validation(self.violations))
        }
    }
}

/// Checks the standing assumptions on `(Y, F, c)`: at least two generators,
/// strictly positive potential, c-vectors spanning `R^n`, the positive
/// spanning property, and (when an oracle exists) that `t ↦ sum c_{t_i}`
/// only depends on the endpoint for words of length at most 4.
pub fn validate_spec(spec: &GroupSpec, cfg: &SolverConfig) -> ValidationReport {
    let mut report = ValidationReport::default();
    let k = spec.num_generators();
    let n = spec.rank();
    if k < 2 {
        report
            .violations
            .push(format!("need at least two generators, got {k}"));
    }
    for (s, &f) in spec.generators().iter().zip(spec.potential()) {
        if !(f > 0.0) {
            report
                .violations
                .push(format!("F({s}) = {f} is not positive"));
        }
    }
    if n > 0 {
        let r = linalg::rank(spec.cvec(), n, cfg.eps_geom);
        if r < n {
            report.violations.push(format!(
                "c-vectors span a {r}-dimensional space, rank is {n}"
            ));
            report
                .violations
                .push("positive spanning fails: some v != 0 has v.c_s = 0 for all s".into());
        } else {
            match extreme_rays(&[], spec.cvec(), n, cfg.eps_geom) {
                Ok(rays) if rays.is_empty() => {}
                Ok(rays) => report.violations.push(format!(
                    "positive spanning fails: v = {:?} has v.c_s <= 0 for all s",
                    rays[0]
                )),
                Err(e) => report.violations.push(e.to_string()),
            }
        }
    }
    if k > 16 && n > 0 {
        report.warnings.push(format!(
            "{k} generators: cone fan construction supports at most 16"
        ));
    }
    // generators whose normalized vectors c_s / F(s) coincide get merged by the fan
    if n > 0 && report.violations.is_empty() {
        let normalized: Vec<Vec<f64>> = spec
            .cvec()
            .iter()
            .zip(spec.potential())
            .map(|(c, f)| linalg::scale(c, 1.0 / f))
            .collect();
        let scale = normalized
            .iter()
            .map(|a| linalg::norm(a))
            .fold(1.0, f64::max);
        for i in 0..k {
            for j in i + 1..k {
                let d = linalg::norm(&linalg::sub(&normalized[i], &normalized[j]));
                if d > 0.0 && d < cfg.eps_geom * scale {
                    report.warnings.push(format!(
                        "c/F of `{}` and `{}` differ by {d:e}; treated as equal",
                        spec.generators()[i],
                        spec.generators()[j]
                    ));
                }
            }
        }
    }
    if spec.has_oracle() && k <= 16 {
        let mut seen: HashMap<_, (Word, Vec<f64>)> = HashMap::new();
        'words: for t in Word::all_up_to(k, 4) {
            let Ok(g) = spec.endpoint(&t) else { break };
            let c = spec.abelianized_word(&t);
            match seen.get(&g) {
                Some((u, cu)) => {
                    if linalg::sup_dist(cu, &c) > cfg.eps_geom * (1.0 + linalg::norm(cu)) {
                        report.violations.push(format!(
                            "abelianization is not a homomorphism: `{}` and `{}` share an endpoint but not c",
                            spec.format_word(u),
                            spec.format_word(&t)
                        ));
                        break 'words;
                    }
                }
                None => {
                    seen.insert(g, (t, c));
                }
            }
        }
    }
    report
}
