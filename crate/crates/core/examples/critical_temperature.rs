//! Critical inverse temperature β₀ for every built-in group, and how it
//! moves when one generator gets a heavier potential.

use kms_cayley::{GroupSpec, PartitionData, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SolverConfig::default();
    for name in [
        "heisenberg",
        "dihedral_infinite",
        "zn:1",
        "zn:2",
        "zn:3",
        "cyclic:3",
        "cyclic:5",
    ] {
        let spec = GroupSpec::builtin(name)?;
        let beta0 = PartitionData::new(&spec, &cfg)?.critical_beta(&cfg)?;
        println!(
            "{name:<18} rank {}  |Y| = {}  beta0 = {beta0:.12}",
            spec.rank(),
            spec.num_generators()
        );
    }

    // F(a) from 1 to 3 on the Heisenberg group
    for f in [1.0, 1.5, 2.0, 3.0] {
        let spec = GroupSpec::heisenberg().with_potential(&[(0, f)]);
        let beta0 = PartitionData::new(&spec, &cfg)?.critical_beta(&cfg)?;
        println!("heisenberg F(a) = {f}: beta0 = {beta0:.12}");
    }
    Ok(())
}
