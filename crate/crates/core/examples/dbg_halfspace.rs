use probelp::geometry::Polyhedron;
use probelp::numlin::{RealMatrix, ToleranceConfig};
use probelp::sufficiency::{compute_decision_directions, EngineConfig};
use probelp::uncertainty::{Interpretation, UncertaintySet};

fn main() {
    let tol = ToleranceConfig::default();
    let x = Polyhedron::new(
        RealMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap(),
        vec![1.0],
        tol,
    )
    .unwrap();
    let c = UncertaintySet::new(
        2,
        0,
        vec![(vec![1.0, -1.0], 0.0)],
        vec![],
        Interpretation::RelativeInterior,
    )
    .unwrap();
    let norm = c.normalize_unbounded(&tol).unwrap();
    println!("normalized ineqs: {:?}", norm.ineq_rows());
    let shrunk = norm.shrink(tol.strict_margin, &tol).unwrap();
    println!("shrunk ineqs: {:?}", shrunk.ineq_rows());
    match compute_decision_directions(&x, &c, 7, &EngineConfig::default(), &tol) {
        Ok(d) => println!("ok dim={} anchor={:?}", d.basis.dim(), d.anchor.point),
        Err(e) => println!("err: {e}"),
    }
}
