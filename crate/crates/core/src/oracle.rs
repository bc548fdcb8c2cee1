//! Brute-force ground truth at desk scale: reachable vertices, relevant
//! extreme directions, minimal datasets by subset search, and Monte-Carlo
//! falsification of sufficiency verdicts.
//!
//! Everything here is deliberately exponential and capped; it certifies the
//! fast path, it does not scale.

use crate::geometry::{GeometryError, Polyhedron, Vertex};
use crate::lp::{self, GeneralLP, LpResult};
use crate::numlin::{self, Subspace, ToleranceConfig};
use crate::sufficiency::{Dataset, SufficiencyError};
use crate::uncertainty::{Interpretation, MemberMode, UncertaintySet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SUBSET_CAP: usize = 24;

/// Ground-truth view of one (X, C) instance.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub reachable_vertices: Vec<Vertex>,
    pub delta_directions: Vec<Vec<f64>>,
    pub dir_span: Subspace,
}

pub fn oracle_report(
    x: &Polyhedron,
    c: &UncertaintySet,
    tol: &ToleranceConfig,
) -> Result<OracleReport, SufficiencyError> {
    let reachable = reachable_vertices_bruteforce(x, c, tol)?;
    let delta = delta_bruteforce(x, c, tol)?;
    let dir_span = reachable_span(x.dim(), &reachable, tol)?;
    Ok(OracleReport {
        reachable_vertices: reachable,
        delta_directions: delta,
        dir_span,
    })
}

pub fn reachable_span(
    d: usize,
    reachable: &[Vertex],
    tol: &ToleranceConfig,
) -> Result<Subspace, SufficiencyError> {
    let diffs: Vec<Vec<f64>> = reachable
        .iter()
        .skip(1)
        .map(|v| numlin::sub(&v.point, &reachable[0].point))
        .collect();
    Ok(numlin::orthonormalize_in(d, &diffs, tol)?)
}

/// Feasibility of "some c in C keeps each point of `optimal_at` optimal",
/// with uniform slack t on the non-implicit carrier rows. Returns the best
/// slack, or None when even the closed system is infeasible.
fn best_slack_for(
    x: &Polyhedron,
    c: &UncertaintySet,
    optimal_at: &[&Vertex],
    all: &[Vertex],
    tol: &ToleranceConfig,
) -> Result<Option<f64>, SufficiencyError> {
    let d = x.dim();
    let w = c.lifted_dim();
    let implicit = c.hull(tol)?.implicit_rows.clone();
    let cap = c.scale();
    let t = w;
    let mut lp = GeneralLP::new(w + 1);
    for (row, rhs) in c.eq_rows() {
        let mut r = row.clone();
        r.push(0.0);
        lp.push_eq(r, *rhs);
    }
    for (i, (row, rhs)) in c.ineq_rows().iter().enumerate() {
        let mut r = row.clone();
        r.push(if implicit.contains(&i) { 0.0 } else { 1.0 });
        lp.push_le(r, *rhs);
    }
    for v in optimal_at {
        for other in all {
            if other.close_to(v, tol.feas_tol * 10.0) {
                continue;
            }
            // cᵀ(other − v) ≥ 0  ⟺  (v − other)ᵀc ≤ 0
            let mut row = vec![0.0; w + 1];
            for i in 0..d {
                row[i] = v.point[i] - other.point[i];
            }
            lp.push_le(row, 0.0);
        }
    }
    lp.bounds[t] = (0.0, cap);
    lp.objective = vec![0.0; w + 1];
    lp.objective[t] = -1.0;
    match lp::solve_general(&lp, tol)? {
        LpResult::Optimal(s) => Ok(Some(-s.objective)),
        LpResult::Infeasible => Ok(None),
        LpResult::Unbounded => Ok(Some(cap)),
    }
}

fn slack_threshold(c: &UncertaintySet, tol: &ToleranceConfig) -> f64 {
    match c.interpretation() {
        Interpretation::RelativeInterior => tol.strict_margin * c.scale(),
        _ => 0.0,
    }
}

/// All vertices optimal for some cost in C (relative-interior semantics
/// handled exactly at vertex granularity through the slack threshold).
pub fn reachable_vertices_bruteforce(
    x: &Polyhedron,
    c: &UncertaintySet,
    tol: &ToleranceConfig,
) -> Result<Vec<Vertex>, SufficiencyError> {
    let verts = x.enumerate_vertices()?.to_vec();
    let thresh = slack_threshold(c, tol);
    let mut out = Vec::new();
    for v in &verts {
        if let Some(slack) = best_slack_for(x, c, &[v], &verts, tol)? {
            if slack >= thresh - tol.feas_tol {
                out.push(v.clone());
            }
        }
    }
    Ok(out)
}

/// Relevant extreme directions: differences of adjacent vertices that are
/// simultaneously optimal for some cost in (the relative interior of) C.
pub fn delta_bruteforce(
    x: &Polyhedron,
    c: &UncertaintySet,
    tol: &ToleranceConfig,
) -> Result<Vec<Vec<f64>>, SufficiencyError> {
    let verts = x.enumerate_vertices()?.to_vec();
    let thresh = slack_threshold(c, tol);
    let mut out = Vec::new();
    for v in &verts {
        for w in &verts {
            if w.close_to(v, tol.feas_tol * 10.0) {
                continue;
            }
            if !x.adjacency(v, w)? {
                continue;
            }
            if let Some(slack) = best_slack_for(x, c, &[v, w], &verts, tol)? {
                if slack >= thresh - tol.feas_tol {
                    out.push(numlin::sub(&w.point, &v.point));
                }
            }
        }
    }
    Ok(out)
}

/// Smallest sufficient subset of a finite query pool, judged against the
/// oracle's reachable-vertex span. Subsets are scanned in increasing
/// cardinality, lexicographic within a size.
pub fn minimal_dataset_bruteforce(
    x: &Polyhedron,
    c: &UncertaintySet,
    pool: &[Vec<f64>],
    size_cap: usize,
    tol: &ToleranceConfig,
) -> Result<Option<Dataset>, SufficiencyError> {
    if pool.len() > size_cap {
        return Err(SufficiencyError::CapExceeded {
            dim: pool.len(),
            cap: size_cap,
        });
    }
    let d = x.dim();
    let reachable = reachable_vertices_bruteforce(x, c, tol)?;
    if reachable.is_empty() {
        return Err(SufficiencyError::Geometry(GeometryError::Infeasible));
    }
    let dir = reachable_span(d, &reachable, tol)?;
    let comp = c.hull(tol)?.dir_c.complement();
    let sufficient = |subset: &[usize]| -> Result<bool, SufficiencyError> {
        let qs: Vec<Vec<f64>> = subset.iter().map(|&i| pool[i].clone()).collect();
        let span = numlin::orthonormalize_in(d, &qs, tol)?;
        let known = comp.sum(&span, tol)?;
        Ok(known.contains_subspace(&dir, tol)?)
    };
    let n = pool.len();
    for k in 0..=n {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if sufficient(&idx)? {
                let qs: Vec<Vec<f64>> = idx.iter().map(|&i| pool[i].clone()).collect();
                return Ok(Some(Dataset::labeled(qs, "oracle-exhaustive")));
            }
            // next k-combination
            let mut i = k;
            loop {
                if i == 0 {
                    idx.clear();
                    break;
                }
                i -= 1;
                if idx[i] != i + n - k {
                    idx[i] += 1;
                    for j in (i + 1)..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
            if idx.is_empty() {
                break;
            }
        }
    }
    Ok(None)
}

/// A counterexample to sufficiency: two costs in C with equal projections
/// on span D but different optimal-vertex sets.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
}

/// Monte-Carlo falsification: sample c in relint C, push it along a
/// direction invisible to the data (inside dir C but orthogonal to span D),
/// and compare optimal-vertex sets. Returns the first mismatch.
pub fn falsify_sufficiency(
    x: &Polyhedron,
    c: &UncertaintySet,
    dataset: &Dataset,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<Option<Counterexample>, SufficiencyError> {
    let d = x.dim();
    let hull = c.hull(tol)?.clone();
    let span_d = dataset.span(d, tol)?;
    let invisible = hull.dir_c.intersect(&span_d.complement(), tol)?;
    if invisible.dim() == 0 {
        return Ok(None);
    }
    let verts = x.enumerate_vertices()?.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reach = c.scale() * 2.0;

    let argmin_set = |cost: &[f64]| -> Vec<usize> {
        let vals: Vec<f64> = verts.iter().map(|v| numlin::dot(cost, &v.point)).collect();
        let best = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let eps = 1e-9 * (1.0 + best.abs()) + 1e-12;
        vals.iter()
            .enumerate()
            .filter(|(_, &v)| v <= best + eps)
            .map(|(i, _)| i)
            .collect()
    };

    for _ in 0..trials {
        // sample a relint point by a random walk step from the affine point
        let u = random_in(&hull.dir_c, &mut rng);
        let base = if let Some(u) = u.as_ref() {
            let t = max_step(c, &hull.affine_point, u, reach, tol)?;
            let step = t * rng.gen_range(0.0..0.9);
            numlin::add(&hull.affine_point, &numlin::scale(step, u))
        } else {
            hull.affine_point.clone()
        };
        // perturb along an invisible direction
        let w = match random_in(&invisible, &mut rng) {
            Some(w) => w,
            None => return Ok(None),
        };
        let sigma = max_step(c, &base, &w, reach, tol)?;
        if sigma <= 0.0 {
            continue;
        }
        let c2 = numlin::add(&base, &numlin::scale(0.95 * sigma, &w));
        if argmin_set(&base) != argmin_set(&c2) {
            return Ok(Some(Counterexample { c1: base, c2 }));
        }
    }
    Ok(None)
}

fn random_in(s: &Subspace, rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
    if s.dim() == 0 {
        return None;
    }
    let mut v = vec![0.0; s.ambient_dim()];
    for b in s.basis() {
        numlin::axpy(rng.gen_range(-1.0..1.0), b, &mut v);
    }
    let n = numlin::norm(&v);
    if n < 1e-12 {
        return Some(s.basis()[0].clone());
    }
    Some(numlin::scale(1.0 / n, &v))
}

/// Largest step `t ∈ [0, reach]` keeping `base + t·dir` in relint C,
/// located by bisection on the membership test.
fn max_step(
    c: &UncertaintySet,
    base: &[f64],
    dir: &[f64],
    reach: f64,
    tol: &ToleranceConfig,
) -> Result<f64, SufficiencyError> {
    let member = |t: f64| -> Result<bool, SufficiencyError> {
        let p = numlin::add(base, &numlin::scale(t, dir));
        Ok(c.member(&p, MemberMode::RelativeInterior, tol)?)
    };
    if !member(0.0)? {
        return Ok(0.0);
    }
    if member(reach)? {
        return Ok(reach);
    }
    let (mut lo, mut hi) = (0.0_f64, reach);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if member(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::RealMatrix;
    use crate::sufficiency::{compute_decision_directions, EngineConfig};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn segment() -> Polyhedron {
        Polyhedron::new(
            RealMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap(),
            vec![1.0],
            tol(),
        )
        .unwrap()
    }

    fn simplex3() -> Polyhedron {
        Polyhedron::new(
            RealMatrix::from_rows(&[vec![1.0, 1.0, 1.0]]).unwrap(),
            vec![1.0],
            tol(),
        )
        .unwrap()
    }

    fn strict_halfspace() -> UncertaintySet {
        UncertaintySet::new(
            2,
            0,
            vec![(vec![1.0, -1.0], 0.0)],
            vec![],
            Interpretation::RelativeInterior,
        )
        .unwrap()
    }

    #[test]
    fn segment_full_plane_reachable() {
        let x = segment();
        let c = UncertaintySet::full_space(2);
        let r = reachable_vertices_bruteforce(&x, &c, &tol()).unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn strict_halfspace_reachable_single() {
        let x = segment();
        let c = strict_halfspace();
        let r = reachable_vertices_bruteforce(&x, &c, &tol()).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].point[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn singleton_reachable_unique() {
        let x = segment();
        let c = UncertaintySet::singleton(&[1.0, 3.0]);
        let r = reachable_vertices_bruteforce(&x, &c, &tol()).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].point[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn delta_on_segment() {
        let x = segment();
        let c = UncertaintySet::full_space(2);
        let deltas = delta_bruteforce(&x, &c, &tol()).unwrap();
        assert_eq!(deltas.len(), 2); // both orientations
        for d in &deltas {
            assert!((d[0] + d[1]).abs() < 1e-9);
        }
        let c2 = strict_halfspace();
        assert!(delta_bruteforce(&x, &c2, &tol()).unwrap().is_empty());
    }

    #[test]
    fn delta_on_simplex_all_edges() {
        let x = simplex3();
        let c = UncertaintySet::full_space(3);
        let deltas = delta_bruteforce(&x, &c, &tol()).unwrap();
        assert_eq!(deltas.len(), 6);
    }

    #[test]
    fn span_delta_equals_reachable_span() {
        let x = simplex3();
        for c in [
            UncertaintySet::full_space(3),
            UncertaintySet::box_set(&[0.5, 0.4, 0.3], &[1.5, 1.6, 1.7]).unwrap(),
        ] {
            let rep = oracle_report(&x, &c, &tol()).unwrap();
            let delta_span =
                numlin::orthonormalize_in(3, &rep.delta_directions, &tol()).unwrap();
            assert!(delta_span.equals_with_tol(&rep.dir_span, 1e-8));
        }
    }

    #[test]
    fn oracle_matches_engine_on_segment() {
        let x = segment();
        for c in [UncertaintySet::full_space(2), UncertaintySet::singleton(&[1.0, 3.0])] {
            let rep = oracle_report(&x, &c, &tol()).unwrap();
            let dirs =
                compute_decision_directions(&x, &c, 5, &EngineConfig::default(), &tol()).unwrap();
            assert!(rep.dir_span.equals_with_tol(&dirs.basis, 1e-6));
            assert_eq!(dirs.iterations, rep.dir_span.dim());
        }
    }

    #[test]
    fn minimal_dataset_on_segment() {
        let x = segment();
        let c = UncertaintySet::full_space(2);
        let pool = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let ds = minimal_dataset_bruteforce(&x, &c, &pool, 24, &tol())
            .unwrap()
            .unwrap();
        // (1,-1) needs both canonical queries
        assert_eq!(ds.len(), 2);
        // a pool containing the direction itself admits a singleton answer
        let pool2 = vec![vec![1.0, 0.0], vec![1.0, -1.0]];
        let ds2 = minimal_dataset_bruteforce(&x, &c, &pool2, 24, &tol())
            .unwrap()
            .unwrap();
        assert_eq!(ds2.len(), 1);
        assert!((ds2.queries[0][0] - 1.0).abs() < 1e-12 && (ds2.queries[0][1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn falsify_finds_counterexample_for_thin_data() {
        let x = segment();
        let c = UncertaintySet::full_space(2).normalize_unbounded(&tol()).unwrap();
        let insufficient = Dataset::new(vec![vec![1.0, 0.0]]);
        let cx = falsify_sufficiency(&x, &c, &insufficient, 1000, 99, &tol()).unwrap();
        let cx = cx.expect("should find a counterexample");
        // equal projections on span D
        assert!((cx.c1[0] - cx.c2[0]).abs() < 1e-9);
    }

    #[test]
    fn falsify_passes_sufficient_data() {
        let x = segment();
        let c = UncertaintySet::full_space(2).normalize_unbounded(&tol()).unwrap();
        let sufficient = Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(falsify_sufficiency(&x, &c, &sufficient, 1000, 99, &tol())
            .unwrap()
            .is_none());
    }

    #[test]
    fn falsify_trivial_when_nothing_invisible() {
        let x = segment();
        let c = UncertaintySet::singleton(&[1.0, 3.0]);
        let empty = Dataset::new(vec![]);
        assert!(falsify_sufficiency(&x, &c, &empty, 10, 1, &tol())
            .unwrap()
            .is_none());
    }
}
