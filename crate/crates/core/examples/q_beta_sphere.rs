//! Sampling the sphere Q(β) = {u : Z(u, β) = 1} for the Heisenberg group
//! above, at and below the critical temperature.

use kms_cayley::kms::sample_q_beta;
use kms_cayley::{GroupSpec, PartitionData, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SolverConfig::default();
    let spec = GroupSpec::heisenberg().with_potential(&[(1, 2.0)]);
    let data = PartitionData::new(&spec, &cfg)?;
    let beta0 = data.critical_beta(&cfg)?;
    println!("beta0 = {beta0:.12}");

    for beta in [beta0 - 0.2, beta0, beta0 + 0.5] {
        let pts = sample_q_beta(&spec, beta, 8, &cfg)?;
        println!("beta = {beta:.4}: {} point(s)", pts.len());
        for p in &pts {
            let probs: Vec<String> = p
                .probabilities(&spec)
                .iter()
                .map(|x| format!("{x:.4}"))
                .collect();
            println!(
                "  u = ({:+.6}, {:+.6})  |Z - 1| = {:.1e}  p = [{}]",
                p.u[0],
                p.u[1],
                p.residual(&spec),
                probs.join(", ")
            );
        }
    }

    let u = data.u_of_beta(beta0 + 0.5, &cfg)?;
    println!(
        "minimizer u(beta0 + 0.5) = {u:?}, Z = {:.6}",
        data.partition(&u, beta0 + 0.5)
    );
    Ok(())
}
