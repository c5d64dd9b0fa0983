use kms_cayley::fan::Fan;
use kms_cayley::group::{GroupSpec, Word};
use kms_cayley::linalg;
use kms_cayley::ninf::HMapCache;
use kms_cayley::numerics::{PartitionData, SolverConfig};
use kms_cayley::sphere;
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn rank_specs() -> Vec<GroupSpec> {
    vec![
        GroupSpec::heisenberg(),
        GroupSpec::free_abelian(2),
        GroupSpec::free_abelian(2).with_potential(&[(2, 2.0), (3, 2.0)]),
        GroupSpec::free_abelian(3),
        GroupSpec::free_abelian(3).with_potential(&[(0, 0.7), (3, 1.9), (5, 1.3)]),
    ]
}

#[test]
fn decomposition_reconstructs_random_pairs() {
    let mut rng = StdRng::seed_from_u64(17);
    let mut done = 0;
    let mut worst: (f64, f64) = (0.0, 0.0);
    for spec in rank_specs() {
        let fan = Fan::build(&spec, &cfg()).unwrap();
        let big: Vec<_> = fan.cones().iter().filter(|c| c.dim >= 2).collect();
        for _ in 0..200 {
            let cone = big[rng.gen_range(0..big.len())];
            let faces: Vec<_> = cone
                .face_ids
                .iter()
                .map(|&f| fan.cone(f))
                .filter(|f| f.dim >= 1)
                .collect();
            let face = faces[rng.gen_range(0..faces.len())];
            let mut u = vec![0.0; fan.rank()];
            for r in &face.rays {
                u = linalg::add_scaled(&u, rng.gen_range(0.1..1.0), r);
            }
            let u = linalg::normalize(&u).unwrap();
            let lambda = rng.gen_range(0.05..=1.0);
            let w = linalg::add_scaled(&linalg::scale(&cone.center, 1.0 - lambda), lambda, &u);
            let w = linalg::normalize(&w).unwrap();
            let (l, p) = fan.boundary_decompose(cone.id, &w).unwrap();
            worst.0 = worst.0.max((l - lambda).abs());
            worst.1 = worst.1.max(linalg::sup_dist(&p, &u));
            done += 1;
        }
    }
    assert_eq!(done, 1000);
    assert!(worst.0 <= 1e-9 && worst.1 <= 1e-9, "{worst:?}");
}

#[test]
fn membership_covers_the_sphere() {
    for spec in rank_specs() {
        let fan = Fan::build(&spec, &cfg()).unwrap();
        for v in sphere::quasi_random(fan.rank(), 10_000) {
            let cone = fan.cone(fan.membership(&v).unwrap());
            assert!(cone.contains(&v, fan.tolerance()), "{} {v:?}", spec.name());
        }
    }
}

#[test]
fn cone_intersections_are_faces() {
    for spec in rank_specs() {
        let fan = Fan::build(&spec, &cfg()).unwrap();
        let tol = fan.tolerance();
        for a in fan.cones() {
            for b in fan.cones() {
                let mut union = a.label.clone();
                union.extend(&b.label);
                union.sort_unstable();
                union.dedup();
                let meet = fan.by_label(&union).map(|id| fan.cone(id));
                // every ray lying in both cones is a ray of the union cone
                for r in a.rays.iter().filter(|r| b.contains(r, tol)) {
                    let m = meet.expect("shared ray without a union cone");
                    assert!(m.contains(r, tol));
                }
                if let Some(m) = meet {
                    for r in &m.rays {
                        assert!(a.contains(r, tol) && b.contains(r, tol));
                    }
                }
            }
        }
    }
}

#[test]
fn decomposition_is_continuous() {
    let fan = Fan::build(&GroupSpec::heisenberg(), &cfg()).unwrap();
    let id = fan.membership(&[1.0, 0.0]).unwrap();
    for th in [-0.7f64, -0.3, 0.2, 0.6] {
        let v = [th.cos(), th.sin()];
        let v2 = [(th + 1e-6).cos(), (th + 1e-6).sin()];
        let (l1, p1) = fan.boundary_decompose(id, &v).unwrap();
        let (l2, p2) = fan.boundary_decompose(id, &v2).unwrap();
        assert!((l1 - l2).abs() <= 1e-4 && linalg::sup_dist(&p1, &p2) <= 1e-4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_of_u_inverts_radial_points(th in 0.0f64..std::f64::consts::TAU, extra in 0.01f64..3.0, f in 0.5f64..2.5) {
        let spec = GroupSpec::heisenberg().with_potential(&[(0, f), (1, 2.0 * f)]);
        let data = PartitionData::new(&spec, &cfg()).unwrap();
        let beta = data.critical_beta(&cfg()).unwrap() + extra;
        let v = [th.cos(), th.sin()];
        // the radial root is measured from the minimizer u(β), not the origin
        let u0 = data.u_of_beta(beta, &cfg()).unwrap();
        let u = linalg::add_scaled(&u0, data.radial_root(beta, &v, &cfg()).unwrap(), &v);
        let back = data.beta_of_u(&u, &cfg()).unwrap();
        prop_assert!((back - beta).abs() <= 1e-9, "{} vs {}", back, beta);
    }

    #[test]
    fn radial_root_lands_on_the_sphere(th in 0.0f64..std::f64::consts::TAU, extra in 0.01f64..3.0) {
        let spec = GroupSpec::heisenberg().with_potential(&[(0, 0.5), (3, 1.7)]);
        let data = PartitionData::new(&spec, &cfg()).unwrap();
        let beta = data.critical_beta(&cfg()).unwrap() + extra;
        let v = [th.cos(), th.sin()];
        let u0 = data.u_of_beta(beta, &cfg()).unwrap();
        let r = data.radial_root(beta, &v, &cfg()).unwrap();
        let z = data.partition(&linalg::add_scaled(&u0, r, &v), beta);
        prop_assert!((z - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn endpoints_respect_concatenation(
        t in proptest::collection::vec(0usize..6, 0..8),
        u in proptest::collection::vec(0usize..6, 0..8),
    ) {
        let spec = GroupSpec::heisenberg();
        let (t, u) = (Word(t), Word(u));
        let joined = spec.endpoint(&t.concat(&u)).unwrap();
        let product = spec.multiply(&spec.endpoint(&t).unwrap(), &spec.endpoint(&u).unwrap()).unwrap();
        prop_assert_eq!(joined, product);
    }

    #[test]
    fn h_is_a_probability_vector(th in 0.0f64..std::f64::consts::TAU) {
        let cache = HMapCache::new(&GroupSpec::heisenberg(), &cfg()).unwrap();
        let h = cache.h_eval(&[th.cos(), th.sin()]).unwrap();
        prop_assert!(h.p.iter().all(|&x| x >= 0.0));
        prop_assert!((h.p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}
