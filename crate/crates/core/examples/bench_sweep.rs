use probelp::apps::{build_feature_uncertainty, build_hiring, MisspecMode};
use probelp::numlin::{RealMatrix, ToleranceConfig};
use probelp::sufficiency::{compute_decision_directions, missing_information, EngineConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let tol = ToleranceConfig::default();
    let cfg = EngineConfig::default();
    let n = 30;
    let k = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let gpa: Vec<f64> = (0..n).map(|_| rng.gen_range(2.0..4.0)).collect();
    let exp: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=5) as f64).collect();
    let phi = RealMatrix::from_rows(&[gpa, exp]).unwrap();
    let task = build_hiring(n, k, &[], &tol).unwrap();
    let total = Instant::now();
    for eta in [0.0, 0.25, 0.5, 1.0] {
        let t0 = Instant::now();
        let c = build_feature_uncertainty(&phi, &[4.0, 4.0], &[5.0, 5.0], eta, MisspecMode::PerCandidate).unwrap();
        let lifted = task.lift_uncertainty(&c).unwrap();
        let dirs = compute_decision_directions(&task.polyhedron, &lifted, 33, &cfg, &tol).unwrap();
        let r = missing_information(&lifted, &dirs.basis, &tol).unwrap();
        println!("eta={eta}: dim={} r={} elapsed={:?}", dirs.basis.dim(), r, t0.elapsed());
    }
    println!("total {:?}", total.elapsed());
}
