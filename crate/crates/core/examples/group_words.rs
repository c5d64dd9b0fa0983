//! Words, endpoints and Cayley balls for the built-in groups, and the JSON
//! form of a group.

use kms_cayley::{validate_spec, GroupSpec, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = GroupSpec::heisenberg();
    let ab = h.parse_word("a,b")?;
    let ba = h.parse_word("b,a")?;
    let bac = h.parse_word("b,a,c")?;
    println!("ab -> {:?}", h.endpoint(&ab)?);
    println!("ba -> {:?}", h.endpoint(&ba)?);
    println!(
        "ab ~ ba: {}, ab ~ bac: {}",
        h.same_endpoint(&ab, &ba)?,
        h.same_endpoint(&ab, &bac)?
    );

    for r in 0..=3 {
        println!("|B({r})| = {}", h.ball(r, 12)?.len());
    }

    let d = GroupSpec::dihedral_infinite();
    let w = d.parse_word("a,b,a")?;
    println!(
        "dihedral: aba -> {:?}, abelianized {:?}",
        d.endpoint(&w)?,
        d.abelianized_word(&w)
    );

    let report = validate_spec(&GroupSpec::cyclic(4), &SolverConfig::default());
    println!("cyclic:4 valid: {}", report.is_valid());
    println!("{}", GroupSpec::free_abelian(1).to_json());
    Ok(())
}
