//! The fan of cones M(Z) for the Heisenberg group and for Z^3: labels, rays,
//! centers, membership and the boundary decomposition of a direction.

use kms_cayley::{Fan, GroupSpec, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SolverConfig::default();
    let spec = GroupSpec::heisenberg();
    let fan = Fan::build(&spec, &cfg)?;
    for c in fan.cones() {
        let label: Vec<&str> = c
            .label
            .iter()
            .map(|&s| spec.generators()[s].as_str())
            .collect();
        println!(
            "cone {:>2}  dim {}  Z = {{{}}}  center {:?}",
            c.id,
            c.dim,
            label.join(","),
            c.center
        );
    }

    let v = [2.0 / 5f64.sqrt(), 1.0 / 5f64.sqrt()];
    let id = fan.membership(&v)?;
    let (lambda, p) = fan.boundary_decompose(id, &v)?;
    println!(
        "v = (2,1)/sqrt5 lies in cone {id}; lambda = {lambda:.12} (2 - sqrt2 = {:.12}), P = {p:?}",
        2.0 - 2f64.sqrt()
    );

    let cube = Fan::build(&GroupSpec::free_abelian(3), &cfg)?;
    let counts: Vec<usize> = (0..=3)
        .rev()
        .map(|d| cube.cones().iter().filter(|c| c.dim == d).count())
        .collect();
    println!("Z^3 cones by dimension 3, 2, 1, 0: {counts:?}");
    Ok(())
}
