//! Building KMS states as finite mixtures of extreme states and evaluating
//! them on V_t V_u*.

use kms_cayley::kms::{Extreme, QBetaPoint, StateDescriptor};
use kms_cayley::{GroupSpec, KmsState, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SolverConfig::default();
    let spec = GroupSpec::free_abelian(2);
    let beta: f64 = 2.0;

    // two points of Q(β) on the coordinate axes: Z = e^{-β}(2 cosh t + 2) = 1
    let t = ((beta.exp() - 2.0) / 2.0).acosh();
    let east = QBetaPoint {
        u: vec![t, 0.0],
        beta,
    };
    let north = QBetaPoint {
        u: vec![0.0, t],
        beta,
    };
    let state = KmsState::new(
        &spec,
        beta,
        vec![
            (0.25, Extreme::Abelian(east)),
            (0.75, Extreme::Abelian(north)),
        ],
        &cfg,
    )?;

    for (t, u) in [
        ("e1", "e1"),
        ("e2", "e2"),
        ("e1,e2", "e2,e1"),
        ("e1,e2", "e1,e2"),
        ("", ""),
    ] {
        let (tw, uw) = (spec.parse_word(t)?, spec.parse_word(u)?);
        println!(
            "omega(V_[{t}] V_[{u}]*) = {:.12}",
            state.state_eval(&tw, &uw)?
        );
    }

    // the same state as a JSON descriptor
    let text = format!(
        r#"{{"beta": {beta}, "mixture": [{{"w": 0.25, "u": [{t}, 0.0]}}, {{"w": 0.75, "u": [0.0, {t}]}}]}}"#
    );
    let descriptor: StateDescriptor = serde_json::from_str(&text)?;
    let again = KmsState::from_descriptor(&spec, &descriptor, &cfg)?;
    let w = spec.parse_word("e1,e1,e2")?;
    println!(
        "from JSON: {:.12} vs {:.12}",
        again.state_eval(&w, &w)?,
        state.state_eval(&w, &w)?
    );
    Ok(())
}
