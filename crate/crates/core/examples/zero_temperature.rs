//! The zero-temperature map H from the sphere to the limit points N∞, and
//! the two ways of approaching it by rays u in M(Z).

use kms_cayley::ninf::{ray_limit, HMapCache};
use kms_cayley::{GroupSpec, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SolverConfig::default();
    let spec = GroupSpec::heisenberg();
    let cache = HMapCache::new(&spec, &cfg)?;
    let names = spec.generators();

    for deg in [0.0f64, 15.0, 26.565, 45.0, 100.0] {
        let th = deg.to_radians();
        let v = [th.cos(), th.sin()];
        let h = cache.h_eval(&v)?;
        let shown: Vec<String> =
            h.p.iter()
                .zip(names)
                .filter(|(p, _)| **p > 0.0)
                .map(|(p, s)| format!("{s}: {p:.6}"))
                .collect();
        let associated = cache.associated_limit(&v)?;
        let straight = ray_limit(&spec, &v, &cfg);
        println!(
            "{deg:>7} deg  H = {{{}}}  |H - associated| = {:.1e}  |H - straight ray| = {}",
            shown.join(", "),
            h.sup_dist(&associated.limit),
            match straight {
                Ok(r) => format!("{:.3e}", h.sup_dist(&r.limit)),
                Err(e) => format!("({e})"),
            }
        );
    }
    Ok(())
}
