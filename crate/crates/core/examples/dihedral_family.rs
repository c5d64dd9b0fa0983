//! The one-parameter family of harmonic vectors on the infinite dihedral
//! group, which gives KMS states not factoring through the abelianization.

use kms_cayley::kms::HarmonicKind;
use kms_cayley::{GroupSpec, HarmonicVector, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SolverConfig::default();
    let spec = GroupSpec::dihedral_infinite();
    let beta = 2.5f64.ln();
    for t in [0.0, 0.25, 0.5, 1.0] {
        let psi = HarmonicVector::dihedral(&spec, beta, t)?;
        let HarmonicKind::DihedralFamily { c_beta, .. } = psi.kind else {
            unreachable!()
        };
        let a3 = spec.parse_word("a,a,a")?;
        println!(
            "t = {t:<4}  c = {c_beta:.6}  psi(a^3) = {:.6}  harmonic residual {:.1e}  KMS violation {:.1e}",
            psi.psi_word(&a3)?,
            psi.harmonic_residual(8, &cfg)?,
            psi.kms_condition_check(5)?,
        );
    }
    // below log 2 there is no such family
    println!(
        "beta = 0.6: {:?}",
        HarmonicVector::dihedral(&spec, 0.6, 0.5).err()
    );
    Ok(())
}
