//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line (written
//! straight to stderr so it survives output capture) and then asserts.
//!
//! Run with `cargo test --test acceptance --no-fail-fast`.

use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

use kms_cayley::cli;
use kms_cayley::fan::Fan;
use kms_cayley::group::{GroupElement, GroupSpec, Word};
use kms_cayley::kms::{sample_q_beta, HarmonicKind, HarmonicVector, KmsState, QBetaPoint};
use kms_cayley::linalg;
use kms_cayley::ninf::{ray_limit, HMapCache};
use kms_cayley::numerics::{PartitionData, SolverConfig};
use kms_cayley::sphere;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn report(n: u32, ok: bool, detail: String) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n:>2}: {verdict}  {detail}");
    assert!(ok, "criterion {n} failed: {detail}");
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["kms-cayley"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn skewed_z2() -> GroupSpec {
    // F(±e1) = 1, F(±e2) = 2
    GroupSpec::free_abelian(2).with_potential(&[(2, 2.0), (3, 2.0)])
}

fn builtins() -> Vec<GroupSpec> {
    [
        "heisenberg",
        "dihedral_infinite",
        "zn:1",
        "zn:2",
        "zn:3",
        "cyclic:3",
        "cyclic:4",
    ]
    .iter()
    .map(|n| GroupSpec::builtin(n).unwrap())
    .collect()
}

#[test]
fn criterion_01_heisenberg_critical_temperature() {
    let start = Instant::now();
    let (code, out) = run_cli(&["critical-beta", "--group", "heisenberg"]);
    let elapsed = start.elapsed().as_secs_f64();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let beta0 = v["beta0"].as_f64().unwrap();
    let err = (beta0 - 6f64.ln()).abs();
    report(
        1,
        code == 0 && err <= 1e-9 && elapsed < 1.0,
        format!("beta0 = {beta0}, |beta0 - log 6| = {err:.1e}, {elapsed:.3} s"),
    );
}

#[test]
fn criterion_02_heisenberg_uniqueness_at_critical() {
    let h = GroupSpec::heisenberg();
    let at = sample_q_beta(&h, 6f64.ln(), 64, &cfg()).unwrap();
    let below = sample_q_beta(&h, 1.7, 64, &cfg()).unwrap();
    let one = at.len() == 1 && at[0].u.iter().all(|x| x.abs() <= 1e-9);
    report(
        2,
        one && below.is_empty(),
        format!(
            "{} point(s) at log 6 ({:?}), {} at 1.7",
            at.len(),
            at.first().map(|p| &p.u),
            below.len()
        ),
    );
}

#[test]
fn criterion_03_dihedral_rank_zero_path() {
    let d = GroupSpec::dihedral_infinite();
    let beta0 = PartitionData::new(&d, &cfg())
        .unwrap()
        .critical_beta(&cfg())
        .unwrap();
    let state = KmsState::abelian(
        &d,
        QBetaPoint {
            u: vec![],
            beta: beta0,
        },
        &cfg(),
    )
    .unwrap();
    let mut worst: f64 = 0.0;
    for t in Word::all_up_to(2, 6) {
        let m = state.state_eval(&t, &t).unwrap();
        worst = worst.max((m - 0.5f64.powi(t.len() as i32)).abs());
    }
    let err = (beta0 - 2f64.ln()).abs();
    report(
        3,
        err <= 1e-9 && worst <= 1e-12,
        format!("|beta0 - log 2| = {err:.1e}, max |m(t) - 2^-|t|| = {worst:.1e}"),
    );
}

#[test]
fn criterion_04_dihedral_non_abelian_family() {
    let d = GroupSpec::dihedral_infinite();
    let beta = 2.5f64.ln();
    let mut worst_h: f64 = 0.0;
    let mut worst_k: f64 = 0.0;
    let mut c_err: f64 = 0.0;
    for t in [0.0, 0.25, 0.5, 1.0] {
        let psi = HarmonicVector::dihedral(&d, beta, t).unwrap();
        if let HarmonicKind::DihedralFamily { c_beta, .. } = psi.kind {
            c_err = c_err.max((c_beta - 2f64.ln()).abs());
        }
        worst_h = worst_h.max(psi.harmonic_residual(8, &cfg()).unwrap());
        worst_k = worst_k.max(psi.kms_condition_check(5).unwrap());
    }
    report(
        4,
        worst_h <= 1e-10 && worst_k <= 1e-10 && c_err <= 1e-12,
        format!("harmonic residual {worst_h:.1e}, KMS violation {worst_k:.1e}, |c - log 2| = {c_err:.1e}"),
    );
}

#[test]
fn criterion_05_q_beta_sphere_identity() {
    let h = GroupSpec::heisenberg();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for beta in [2.0, 2.5, 3.0] {
        for p in sample_q_beta(&h, beta, 64, &cfg()).unwrap() {
            worst = worst.max(p.residual(&h));
            count += 1;
        }
    }
    report(
        5,
        count == 192 && worst <= 1e-12,
        format!("{count} points, max |Z(u, beta) - 1| = {worst:.1e}"),
    );
}

#[test]
fn criterion_06_convex_minimizer() {
    let mut rng = StdRng::seed_from_u64(0x6b6d73);
    let mut worst_grad: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    for i in 0..20 {
        let base = match i % 4 {
            0 => GroupSpec::heisenberg(),
            1 => GroupSpec::free_abelian(1),
            2 => GroupSpec::free_abelian(2),
            _ => GroupSpec::free_abelian(3),
        };
        let overrides: Vec<(usize, f64)> = (0..base.num_generators())
            .map(|s| (s, rng.gen_range(0.5..2.5)))
            .collect();
        let spec = base.with_potential(&overrides);
        let beta = rng.gen_range(0.3..4.0);
        let data = PartitionData::new(&spec, &cfg()).unwrap();
        let u = data.u_of_beta(beta, &cfg()).unwrap();
        worst_grad = worst_grad.max(linalg::norm(&data.partition_gradient(&u, beta)));
        // central differences away from the minimum, where the gradient is not zero
        let x: Vec<f64> = u.iter().map(|ui| ui + rng.gen_range(-0.5..0.5)).collect();
        let g = data.partition_gradient(&x, beta);
        let h = 1e-5;
        let fd: Vec<f64> = (0..x.len())
            .map(|k| {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += h;
                xm[k] -= h;
                (data.partition(&xp, beta) - data.partition(&xm, beta)) / (2.0 * h)
            })
            .collect();
        let rel = linalg::norm(&linalg::sub(&fd, &g)) / linalg::norm(&g).max(1e-300);
        worst_fd = worst_fd.max(rel);
    }
    report(
        6,
        worst_grad <= 1e-10 && worst_fd <= 1e-6,
        format!("max |grad Z(u(beta))| = {worst_grad:.1e}, max relative FD error = {worst_fd:.1e} over 20 instances"),
    );
}

/// Sampled extreme states of a built-in: Q(β) points on a few temperatures
/// for rank >= 1, the β₀ state for rank 0, and the dihedral family.
fn sampled_states(spec: &GroupSpec) -> Vec<HarmonicVector> {
    let data = PartitionData::new(spec, &cfg()).unwrap();
    let beta0 = data.critical_beta(&cfg()).unwrap();
    let mut out = Vec::new();
    if spec.rank() == 0 {
        out.push(HarmonicVector::exponential(spec, beta0, vec![]).unwrap());
    } else {
        for db in [0.0, 0.5, 1.5] {
            for p in sample_q_beta(spec, beta0 + db, 6, &cfg()).unwrap() {
                out.push(HarmonicVector::exponential(spec, p.beta, p.u).unwrap());
            }
        }
    }
    if spec.name() == "dihedral_infinite" {
        for t in [0.0, 0.3, 1.0] {
            out.push(HarmonicVector::dihedral(spec, 2.5f64.ln(), t).unwrap());
        }
    }
    out
}

#[test]
fn criterion_07_harmonicity_and_consistency() {
    let start = Instant::now();
    let mut worst_kolmogorov: f64 = 0.0;
    let mut worst_rep: f64 = 0.0;
    let mut states = 0;
    for spec in builtins() {
        let k = spec.num_generators();
        for psi in sampled_states(&spec) {
            states += 1;
            for t in Word::all_up_to(k, 5) {
                let parent = psi.cylinder_mass(&t).unwrap();
                let children: f64 = (0..k).map(|s| psi.cylinder_mass(&t.push(s)).unwrap()).sum();
                worst_kolmogorov = worst_kolmogorov.max((parent - children).abs());
            }
            worst_rep = worst_rep.max(psi.kms_condition_check(5).unwrap());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        7,
        worst_kolmogorov <= 1e-12 && worst_rep <= 1e-12 && elapsed < 30.0,
        format!(
            "{states} states: Kolmogorov gap {worst_kolmogorov:.1e}, representative gap (relative to max(1, |psi|)) {worst_rep:.1e}, {elapsed:.1} s"
        ),
    );
}

#[test]
fn criterion_08_h_versus_ray_limit() {
    // The straight-ray limit is taken literally here, on every sampled
    // direction. See the README section on the two limit oracles.
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    let mut unsettled = 0;
    let mut total = 0;
    for spec in [GroupSpec::heisenberg(), skewed_z2()] {
        let cache = HMapCache::new(&spec, &cfg()).unwrap();
        for v in sphere::quasi_random(2, 200) {
            total += 1;
            let h = cache.h_eval(&v).unwrap();
            match ray_limit(&spec, &v, &cfg()) {
                Ok(r) => {
                    let gap = h.sup_dist(&r.limit);
                    worst = worst.max(gap);
                    if gap > 1e-6 {
                        bad += 1;
                    }
                }
                Err(_) => {
                    unsettled += 1;
                    bad += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        8,
        bad == 0 && elapsed < 60.0,
        format!(
            "{bad}/{total} directions off by > 1e-6 ({unsettled} unsettled), max gap {worst:.3e}, {elapsed:.1} s"
        ),
    );
}

#[test]
fn criterion_09_worked_interior_point() {
    let h = GroupSpec::heisenberg();
    let cache = HMapCache::new(&h, &cfg()).unwrap();
    let v = linalg::normalize(&[2.0, 1.0]).unwrap();
    let s2 = 2f64.sqrt();
    // λ = 2 - √2, H(P) = (1/2, 1/2): t_b / t_a = λ and t_a + t_b = 1
    let expect = [
        1.0 / (3.0 - s2),
        0.0,
        (2.0 - s2) / (3.0 - s2),
        0.0,
        0.0,
        0.0,
    ];
    let got = cache.h_eval(&v).unwrap();
    let err = linalg::sup_dist(&got.p, &expect);
    let oracle = cache.associated_limit(&v).unwrap();
    let oracle_err = linalg::sup_dist(&oracle.limit.p, &expect);
    report(
        9,
        err <= 1e-9 && oracle_err <= 1e-9,
        format!("|H - expected| = {err:.1e}, |associated limit - expected| = {oracle_err:.1e}"),
    );
}

#[test]
fn criterion_10_sphere_image_properties() {
    let mut norm_err: f64 = 0.0;
    let mut min_sep = f64::INFINITY;
    let mut continuity_ok = true;
    let mut support_ok = true;
    for spec in [GroupSpec::heisenberg(), skewed_z2()] {
        let cache = HMapCache::new(&spec, &cfg()).unwrap();
        let f = spec.potential().to_vec();
        let samples = cache.n_infinity_sample(360).unwrap();
        for (v, t) in &samples {
            norm_err = norm_err.max((t.p.iter().sum::<f64>() - 1.0).abs());
            let label = &cache.fan().cone(cache.fan().membership(v).unwrap()).label;
            let root: Vec<f64> = t.p.iter().zip(&f).map(|(p, fs)| p.powf(1.0 / fs)).collect();
            let top = root.iter().cloned().fold(0.0, f64::max);
            for &z in label {
                if !(t.p[z] > 0.0 && (root[z] - top).abs() <= 1e-12) {
                    support_ok = false;
                }
            }
        }
        let every = samples.iter().step_by(3).collect::<Vec<_>>();
        for (i, (v, t)) in every.iter().enumerate() {
            for (w, s) in &every[i + 1..] {
                if linalg::sup_dist(v, w) >= 0.05 {
                    min_sep = min_sep.min(t.sup_dist(s));
                }
            }
        }
        for th0 in [0.2f64, 0.9, 2.4, 4.0, 5.5] {
            let h0 = cache.h_eval(&[th0.cos(), th0.sin()]).unwrap();
            let d: Vec<f64> = [1e-2, 1e-3, 1e-4]
                .iter()
                .map(|dl| {
                    let th = th0 + dl;
                    cache.h_eval(&[th.cos(), th.sin()]).unwrap().sup_dist(&h0)
                })
                .collect();
            if !(d[0] > d[1] && d[1] > d[2]) {
                continuity_ok = false;
            }
        }
    }
    report(
        10,
        norm_err <= 1e-12 && min_sep > 0.0 && continuity_ok && support_ok,
        format!(
            "normalization {norm_err:.1e}, min separation {min_sep:.3e}, continuity {continuity_ok}, support law {support_ok}"
        ),
    );
}

#[test]
fn criterion_11_fan_sanity() {
    let mut lines = Vec::new();
    let mut ok = true;
    for spec in builtins() {
        if spec.rank() == 0 {
            lines.push(format!("{}: rank 0, no fan", spec.name()));
            continue;
        }
        let fan = Fan::build(&spec, &cfg()).unwrap();
        let n = fan.rank();
        let tol = fan.tolerance();
        let (mut claimed, mut boundary, mut broken) = (0, 0, 0);
        for v in sphere::quasi_random(n, 10_000) {
            let claims = fan.interior_claims(&v);
            let member = fan.cone(fan.membership(&v).unwrap());
            match claims.len() {
                1 if claims[0] == member.id => claimed += 1,
                0 if member.dim < n && member.contains(&v, tol) => boundary += 1,
                _ => broken += 1,
            }
        }
        let mut cone_faults = 0;
        for c in fan.cones().iter().filter(|c| c.dim > 0) {
            if !c.interior_contains(&c.center, tol) {
                cone_faults += 1;
            }
            for r in &c.rays {
                if c.contains(&linalg::scale(r, -1.0), tol) {
                    cone_faults += 1;
                }
            }
        }
        ok &= broken == 0 && cone_faults == 0;
        lines.push(format!(
            "{}: {claimed} interior, {boundary} boundary, {broken} broken, {cone_faults} cone faults",
            spec.name()
        ));
    }
    report(11, ok, lines.join("; "));
}

#[test]
fn criterion_12_negative_controls() {
    let h = GroupSpec::heisenberg();
    let ball = h.ball(5, 12).unwrap();
    let mut values: HashMap<GroupElement, f64> =
        ball.elements.iter().map(|g| (g.clone(), 1.0)).collect();
    values.insert(GroupElement::Heisenberg { a: 1, b: 0, c: 0 }, 1.1);
    let perturbed = HarmonicVector::tabulated(&h, 6f64.ln(), values);
    let violation = perturbed.kms_condition_check(4).unwrap();
    let (q_code, _) = run_cli(&["q-beta", "--group", "heisenberg", "--beta", "1.0"]);
    let (e_code, _) = run_cli(&[
        "kms-eval",
        "--group",
        "heisenberg",
        "--beta",
        "1.5",
        "--direction",
        "1,0",
        "--t",
        "a",
        "--u",
        "a",
    ]);
    report(
        12,
        violation > 1e-2 && q_code == 2 && e_code == 2,
        format!("perturbed KMS violation {violation:.4}, q-beta below beta0 exit {q_code}, kms-eval below beta0 exit {e_code}"),
    );
}
