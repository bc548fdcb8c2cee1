//! Decision recovery from observations over a dataset, and the
//! noisy-observation optimality-gap bound.
//!
//! Noiseless observations are matched exactly by an LP feasibility problem
//! over the carrier: any cost consistent with the observations yields the
//! same optimal decisions once the dataset is sufficient, so no least
//! squares is needed. Noisy observations go through conditional-gradient
//! least squares over the carrier (one LP per step) followed by an
//! active-set refinement that solves the identified equality-constrained
//! problem exactly; the refinement is what makes vanishing noise recover
//! exact decisions in practice.

use crate::geometry::{GeometryError, Polyhedron};
use crate::lp::{self, GeneralLP, LpError, LpResult};
use crate::numlin::{self, NumlinError, RealMatrix, ToleranceConfig};
use crate::sufficiency::Dataset;
use crate::uncertainty::{UncertaintyError, UncertaintySet};
use std::fmt;

#[derive(Debug, Clone)]
pub struct ObservationBundle {
    pub dataset: Dataset,
    pub values: Vec<f64>,
    /// Additive noise actually injected (simulation only).
    pub noise: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct DecisionReport {
    pub c_hat: Vec<f64>,
    pub x_hat: Vec<f64>,
    pub objective_hat: f64,
    /// Normalized gap bound when the noise magnitude is known.
    pub gap_bound_normalized: Option<f64>,
    /// Smallest singular value of the query matrix (0 for empty datasets).
    pub sigma_min: f64,
}

#[derive(Debug, Clone)]
pub struct CostEstimate {
    pub c_hat: Vec<f64>,
    /// False when the conditional-gradient loop hit its iteration cap.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct GapBound {
    /// Bound on (cᵀx̂ − min cᵀx) / (‖c‖ · diam X).
    pub normalized: f64,
    /// The same bound scaled back to objective units.
    pub absolute: f64,
}

#[derive(Debug)]
pub enum DecideError {
    LengthMismatch { expected: usize, got: usize },
    /// The noiseless system has no solution in the carrier: the
    /// observations contradict the prior.
    ObservationsInconsistent,
    /// σ_min ≈ 0: the dataset has linearly dependent queries.
    RankDeficientDataset,
    EmptyDataset,
    Geometry(GeometryError),
    Uncertainty(UncertaintyError),
    Lp(LpError),
    Numeric(NumlinError),
}

impl fmt::Display for DecideError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecideError::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            DecideError::ObservationsInconsistent => {
                write!(f, "observations are inconsistent with the uncertainty set")
            }
            DecideError::RankDeficientDataset => {
                write!(f, "dataset queries are linearly dependent (σ_min ≈ 0)")
            }
            DecideError::EmptyDataset => write!(f, "dataset is empty"),
            DecideError::Geometry(e) => write!(f, "{e}"),
            DecideError::Uncertainty(e) => write!(f, "{e}"),
            DecideError::Lp(e) => write!(f, "{e}"),
            DecideError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DecideError {}

impl From<GeometryError> for DecideError {
    fn from(e: GeometryError) -> Self {
        DecideError::Geometry(e)
    }
}

impl From<UncertaintyError> for DecideError {
    fn from(e: UncertaintyError) -> Self {
        DecideError::Uncertainty(e)
    }
}

impl From<LpError> for DecideError {
    fn from(e: LpError) -> Self {
        DecideError::Lp(e)
    }
}

impl From<NumlinError> for DecideError {
    fn from(e: NumlinError) -> Self {
        DecideError::Numeric(e)
    }
}

/// Evaluate the dataset's observations for a (simulated) true cost.
pub fn observe(
    c_true: &[f64],
    dataset: &Dataset,
    noise: Option<&[f64]>,
) -> Result<ObservationBundle, DecideError> {
    if let Some(n) = noise {
        if n.len() != dataset.len() {
            return Err(DecideError::LengthMismatch {
                expected: dataset.len(),
                got: n.len(),
            });
        }
    }
    let mut values = Vec::with_capacity(dataset.len());
    for (i, q) in dataset.queries.iter().enumerate() {
        if q.len() != c_true.len() {
            return Err(DecideError::LengthMismatch {
                expected: c_true.len(),
                got: q.len(),
            });
        }
        let mut o = numlin::dot(c_true, q);
        if let Some(n) = noise {
            o += n[i];
        }
        values.push(o);
    }
    Ok(ObservationBundle {
        dataset: dataset.clone(),
        values,
        noise: noise.map(|n| n.to_vec()),
    })
}

fn query_matrix(dataset: &Dataset) -> Result<RealMatrix, DecideError> {
    Ok(RealMatrix::from_rows(&dataset.queries)?)
}

/// Recover a cost estimate consistent with the observations.
pub fn estimate_cost(
    c: &UncertaintySet,
    bundle: &ObservationBundle,
    tol: &ToleranceConfig,
) -> Result<CostEstimate, DecideError> {
    let d = c.cost_dim();
    for q in &bundle.dataset.queries {
        if q.len() != d {
            return Err(DecideError::LengthMismatch {
                expected: d,
                got: q.len(),
            });
        }
    }
    match bundle.noise {
        None => estimate_noiseless(c, bundle, tol),
        Some(_) => estimate_noisy(c, bundle, tol),
    }
}

/// Noiseless path: any carrier point reproducing the observations exactly.
/// Costs with equal projections on span D share their minimizers once D is
/// sufficient, so feasibility is all that is required.
fn estimate_noiseless(
    c: &UncertaintySet,
    bundle: &ObservationBundle,
    tol: &ToleranceConfig,
) -> Result<CostEstimate, DecideError> {
    let d = c.cost_dim();
    let w = c.lifted_dim();
    let mut lp = GeneralLP::new(w);
    for (row, rhs) in c.eq_rows() {
        lp.push_eq(row.clone(), *rhs);
    }
    for (row, rhs) in c.ineq_rows() {
        lp.push_le(row.clone(), *rhs);
    }
    for (q, o) in bundle.dataset.queries.iter().zip(bundle.values.iter()) {
        let mut row = vec![0.0; w];
        row[..d].copy_from_slice(q);
        lp.push_eq(row, *o);
    }
    match lp::solve_general(&lp, tol)? {
        LpResult::Optimal(s) => Ok(CostEstimate {
            c_hat: s.x[..d].to_vec(),
            converged: true,
        }),
        LpResult::Infeasible => Err(DecideError::ObservationsInconsistent),
        LpResult::Unbounded => unreachable!("feasibility LP has zero objective"),
    }
}

const FW_MAX_ITERS: usize = 10_000;

/// Noisy path: minimize ‖Qc − o‖² over the closed carrier by conditional
/// gradient, then refine on the identified active set.
fn estimate_noisy(
    c: &UncertaintySet,
    bundle: &ObservationBundle,
    tol: &ToleranceConfig,
) -> Result<CostEstimate, DecideError> {
    let d = c.cost_dim();
    let w = c.lifted_dim();
    let o = &bundle.values;
    let q = query_matrix(&bundle.dataset)?;
    let o_norm_sq = numlin::dot(o, o);
    let gap_tol = 1e-8 * (1.0 + o_norm_sq);

    // start at a feasible point
    let mut start_lp = GeneralLP::new(w);
    for (row, rhs) in c.eq_rows() {
        start_lp.push_eq(row.clone(), *rhs);
    }
    for (row, rhs) in c.ineq_rows() {
        start_lp.push_le(row.clone(), *rhs);
    }
    let mut wk = match lp::solve_general(&start_lp, tol)? {
        LpResult::Optimal(s) => s.x,
        _ => return Err(DecideError::Uncertainty(UncertaintyError::EmptyCarrier)),
    };

    // linear minimization oracle; unbounded carriers get a generous box
    let sigma = if bundle.dataset.is_empty() {
        0.0
    } else {
        numlin::smallest_singular_value(&q).unwrap_or(0.0)
    };
    let box_r = 10.0
        * (1.0
            + c.scale()
            + numlin::norm_inf(&wk)
            + numlin::norm(o) / sigma.max(1e-9));
    let lmo = |grad: &[f64]| -> Result<Vec<f64>, DecideError> {
        let mut lp = GeneralLP::new(w);
        for (row, rhs) in c.eq_rows() {
            lp.push_eq(row.clone(), *rhs);
        }
        for (row, rhs) in c.ineq_rows() {
            lp.push_le(row.clone(), *rhs);
        }
        lp.objective = grad.to_vec();
        match lp::solve_general(&lp, tol)? {
            LpResult::Optimal(s) => Ok(s.x),
            LpResult::Unbounded => {
                let mut boxed = lp.clone();
                for b in boxed.bounds.iter_mut() {
                    b.0 = b.0.max(-box_r);
                    b.1 = b.1.min(box_r);
                }
                match lp::solve_general(&boxed, tol)? {
                    LpResult::Optimal(s) => Ok(s.x),
                    _ => Err(DecideError::Uncertainty(UncertaintyError::EmptyCarrier)),
                }
            }
            LpResult::Infeasible => Err(DecideError::Uncertainty(UncertaintyError::EmptyCarrier)),
        }
    };

    let objective = |wv: &[f64]| -> f64 {
        let r = residual(&q, wv, o, d);
        numlin::dot(&r, &r)
    };
    let mut converged = false;
    if !bundle.dataset.is_empty() {
        for _ in 0..FW_MAX_ITERS {
            let r = residual(&q, &wk, o, d);
            // grad over c-block: 2 Qᵀ r, zero on aux
            let mut grad = vec![0.0; w];
            for (i, qrow) in bundle.dataset.queries.iter().enumerate() {
                for j in 0..d {
                    grad[j] += 2.0 * r[i] * qrow[j];
                }
            }
            let v = lmo(&grad)?;
            let dir = numlin::sub(&v, &wk);
            let fw_gap = -numlin::dot(&grad, &dir);
            if fw_gap <= gap_tol {
                converged = true;
                break;
            }
            let qd = q.matvec(&dir[..d].to_vec().as_slice())?;
            let denom = numlin::dot(&qd, &qd);
            if denom <= 1e-300 {
                converged = true;
                break;
            }
            let gamma = (-numlin::dot(&r, &qd) / denom).clamp(0.0, 1.0);
            if gamma <= 0.0 {
                converged = true;
                break;
            }
            for (wi, di) in wk.iter_mut().zip(dir.iter()) {
                *wi += gamma * di;
            }
        }
    } else {
        converged = true;
    }

    // Active-set refinement: solve the equality-constrained least squares
    // on the rows the iterate has (nearly) tightened; keep it only when it
    // stays feasible and does not worsen the objective.
    if let Some(polished) = polish(c, &q, o, &wk, tol)? {
        if objective(&polished) <= objective(&wk) + gap_tol && feasible(c, &polished, tol) {
            wk = polished;
            converged = true;
        }
    }
    Ok(CostEstimate {
        c_hat: wk[..d].to_vec(),
        converged,
    })
}

fn residual(q: &RealMatrix, wv: &[f64], o: &[f64], d: usize) -> Vec<f64> {
    if q.nrows() == 0 {
        return Vec::new();
    }
    let qc = q.matvec(&wv[..d]).expect("query matrix shape");
    numlin::sub(&qc, o)
}

fn feasible(c: &UncertaintySet, wv: &[f64], tol: &ToleranceConfig) -> bool {
    let scale = c.scale();
    for (row, rhs) in c.eq_rows() {
        if (numlin::dot(row, wv) - rhs).abs() > tol.feas_tol * scale * 10.0 {
            return false;
        }
    }
    for (row, rhs) in c.ineq_rows() {
        if numlin::dot(row, wv) > rhs + tol.feas_tol * scale * 10.0 {
            return false;
        }
    }
    true
}

/// Equality-constrained least squares on a working set of rows, grown by
/// the most violated inequality until the solution is feasible. Returns
/// `None` when no feasible improving point is identified.
fn polish(
    c: &UncertaintySet,
    q: &RealMatrix,
    o: &[f64],
    wk: &[f64],
    tol: &ToleranceConfig,
) -> Result<Option<Vec<f64>>, DecideError> {
    let scale = c.scale();
    let act_tol = 1e-6 * scale;
    let mut active: Vec<usize> = c
        .ineq_rows()
        .iter()
        .enumerate()
        .filter(|(_, (row, r))| numlin::dot(row, wk) >= r - act_tol)
        .map(|(i, _)| i)
        .collect();
    for _ in 0..=c.ineq_rows().len() {
        let cand = match ls_on_working_set(c, q, o, &active, tol)? {
            Some(w) => w,
            None => return Ok(None),
        };
        // most violated inactive row, if any
        let mut worst: Option<(usize, f64)> = None;
        for (i, (row, r)) in c.ineq_rows().iter().enumerate() {
            if active.contains(&i) {
                continue;
            }
            let v = numlin::dot(row, &cand) - r;
            if v > tol.feas_tol * scale {
                worst = match worst {
                    Some((_, wv)) if wv >= v => worst,
                    _ => Some((i, v)),
                };
            }
        }
        match worst {
            Some((i, _)) => active.push(i),
            None => return Ok(Some(cand)),
        }
    }
    Ok(None)
}

fn ls_on_working_set(
    c: &UncertaintySet,
    q: &RealMatrix,
    o: &[f64],
    active: &[usize],
    tol: &ToleranceConfig,
) -> Result<Option<Vec<f64>>, DecideError> {
    let w = c.lifted_dim();
    let d = c.cost_dim();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for (row, r) in c.eq_rows() {
        rows.push(row.clone());
        rhs.push(*r);
    }
    for &i in active {
        let (row, r) = &c.ineq_rows()[i];
        rows.push(row.clone());
        rhs.push(*r);
    }
    let (particular, kernel) = if rows.is_empty() {
        (vec![0.0; w], crate::numlin::Subspace::full(w))
    } else {
        let m = RealMatrix::from_rows(&rows)?;
        let p = match numlin::solve_consistent(&m, &rhs, 1e-10) {
            Some(p) => p,
            None => return Ok(None),
        };
        (p, crate::geometry::kernel_of(&m, tol)?)
    };
    if kernel.dim() == 0 {
        return Ok(Some(particular));
    }
    // minimize ‖Q (p + K z)_c − o‖² over z: normal equations on Q K_c
    let k = kernel.dim();
    let nq = q.nrows();
    let mut qk = RealMatrix::zeros(nq, k);
    for (j, b) in kernel.basis().iter().enumerate() {
        let col = q.matvec(&b[..d])?;
        for i in 0..nq {
            qk.set(i, j, col[i]);
        }
    }
    let qp = if nq > 0 {
        q.matvec(&particular[..d])?
    } else {
        Vec::new()
    };
    let target = numlin::sub(o, &qp);
    let normal = qk.transpose().matmul(&qk)?;
    let rhs2 = qk.transpose().matvec(&target)?;
    let z = match numlin::solve_consistent(&normal, &rhs2, 1e-12) {
        Some(z) => z,
        None => return Ok(None),
    };
    let mut out = particular;
    for (j, b) in kernel.basis().iter().enumerate() {
        numlin::axpy(z[j], b, &mut out);
    }
    Ok(Some(out))
}

/// Optimal decision for the estimated cost.
pub fn decide(x: &Polyhedron, c_hat: &[f64]) -> Result<Vec<f64>, DecideError> {
    Ok(x.minimize(c_hat)?.x)
}

/// Estimate, decide, and report.
pub fn full_pipeline(
    x: &Polyhedron,
    c: &UncertaintySet,
    bundle: &ObservationBundle,
    tol: &ToleranceConfig,
) -> Result<DecisionReport, DecideError> {
    let est = estimate_cost(c, bundle, tol)?;
    let x_hat = decide(x, &est.c_hat)?;
    let sigma_min = if bundle.dataset.is_empty() {
        0.0
    } else {
        numlin::smallest_singular_value(&query_matrix(&bundle.dataset)?)?
    };
    Ok(DecisionReport {
        objective_hat: numlin::dot(&est.c_hat, &x_hat),
        c_hat: est.c_hat,
        x_hat,
        gap_bound_normalized: None,
        sigma_min,
    })
}

/// Simulation wrapper: observe a known true cost (optionally with noise),
/// run the pipeline, and attach the gap bound.
pub fn full_pipeline_simulated(
    x: &Polyhedron,
    c: &UncertaintySet,
    dataset: &Dataset,
    c_true: &[f64],
    noise: Option<&[f64]>,
    tol: &ToleranceConfig,
) -> Result<DecisionReport, DecideError> {
    let bundle = observe(c_true, dataset, noise)?;
    let mut report = full_pipeline(x, c, &bundle, tol)?;
    if let Some(n) = noise {
        let eps_norm = numlin::norm(n);
        let c_norm = numlin::norm(c_true);
        if report.sigma_min > 1e-12 && c_norm > 0.0 {
            report.gap_bound_normalized = Some(2.0 * eps_norm / (report.sigma_min * c_norm));
        }
    }
    Ok(report)
}

/// Normalized and absolute optimality-gap bounds under additive noise:
/// the normalized gap is at most `2‖ε‖ / (σ_min ‖c‖)`.
pub fn gap_bound(
    dataset: &Dataset,
    c_true_norm: f64,
    eps_norm: f64,
    diam_x: f64,
    tol: &ToleranceConfig,
) -> Result<GapBound, DecideError> {
    if dataset.is_empty() {
        return Err(DecideError::EmptyDataset);
    }
    let sigma = numlin::smallest_singular_value(&query_matrix(dataset)?)?;
    if sigma <= tol.rank_tol {
        return Err(DecideError::RankDeficientDataset);
    }
    let normalized = 2.0 * eps_norm / (sigma * c_true_norm);
    Ok(GapBound {
        normalized,
        absolute: normalized * c_true_norm * diam_x,
    })
}

/// Measured normalized gap of a decision against the true cost.
pub fn measured_normalized_gap(
    x: &Polyhedron,
    c_true: &[f64],
    x_hat: &[f64],
) -> Result<f64, DecideError> {
    let best = x.minimize(c_true)?.objective;
    let got = numlin::dot(c_true, x_hat);
    let diam = x.diameter()?;
    let denom = numlin::norm(c_true) * diam;
    if denom <= 1e-30 {
        return Ok(0.0);
    }
    Ok((got - best).max(0.0) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn observe_examples() {
        let d = Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let b = observe(&[1.0, 3.0], &d, None).unwrap();
        assert_eq!(b.values, vec![1.0, 3.0]);

        let d2 = Dataset::new(vec![vec![1.0, 1.0]]);
        let b2 = observe(&[1.0, 3.0], &d2, None).unwrap();
        assert_eq!(b2.values, vec![4.0]);

        let b3 = observe(&[1.0, 3.0], &d, Some(&[0.1, 0.0])).unwrap();
        assert!((b3.values[0] - 1.1).abs() < 1e-12);
        assert!((b3.values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn noiseless_estimate_full_observation() {
        let c = UncertaintySet::full_space(2);
        let d = Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let b = observe(&[1.0, 3.0], &d, None).unwrap();
        let est = estimate_cost(&c, &b, &tol()).unwrap();
        assert!((est.c_hat[0] - 1.0).abs() < 1e-7);
        assert!((est.c_hat[1] - 3.0).abs() < 1e-7);
    }

    #[test]
    fn noiseless_estimate_partial_observation() {
        let c = UncertaintySet::box_set(&[0.0, 0.0], &[4.0, 4.0]).unwrap();
        let d = Dataset::new(vec![vec![1.0, 1.0]]);
        let b = observe(&[1.0, 3.0], &d, None).unwrap(); // o = 4
        let est = estimate_cost(&c, &b, &tol()).unwrap();
        // any point of {c1 + c2 = 4} ∩ box satisfies the observation
        assert!((est.c_hat[0] + est.c_hat[1] - 4.0).abs() < 1e-7);
        assert!(est.c_hat.iter().all(|&v| (-1e-7..=4.0 + 1e-7).contains(&v)));
    }

    #[test]
    fn noiseless_inconsistent_observation_errors() {
        let c = UncertaintySet::box_set(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let d = Dataset::new(vec![vec![1.0, 0.0]]);
        let b = ObservationBundle {
            dataset: d,
            values: vec![5.0],
            noise: None,
        };
        assert!(matches!(
            estimate_cost(&c, &b, &tol()),
            Err(DecideError::ObservationsInconsistent)
        ));
    }

    #[test]
    fn noisy_estimate_identity_queries() {
        // C contains o, so unconstrained least squares gives exactly o
        let c = UncertaintySet::box_set(&[-10.0, -10.0], &[10.0, 10.0]).unwrap();
        let d = Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let noise = [0.05, -0.03];
        let b = observe(&[1.0, 3.0], &d, Some(&noise)).unwrap();
        let est = estimate_cost(&c, &b, &tol()).unwrap();
        assert!(est.converged);
        assert!((est.c_hat[0] - 1.05).abs() < 1e-6, "{:?}", est.c_hat);
        assert!((est.c_hat[1] - 2.97).abs() < 1e-6);
    }

    #[test]
    fn noisy_estimate_respects_carrier() {
        // observation pushed outside the box: the estimate lands on the face
        let c = UncertaintySet::box_set(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let d = Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let b = observe(&[0.9, 0.5], &d, Some(&[0.4, 0.0])).unwrap(); // o = (1.3, 0.5)
        let est = estimate_cost(&c, &b, &tol()).unwrap();
        assert!((est.c_hat[0] - 1.0).abs() < 1e-6);
        assert!((est.c_hat[1] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn decide_on_segment() {
        let x = segment();
        let c = UncertaintySet::full_space(2);
        let d = Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let b = observe(&[1.0, 3.0], &d, None).unwrap();
        let rep = full_pipeline(&x, &c, &b, &tol()).unwrap();
        assert!((rep.x_hat[0] - 1.0).abs() < 1e-7);
        assert!((rep.sigma_min - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pipeline_exact_for_sufficient_data() {
        use rand::{Rng, SeedableRng};
        let x = segment();
        let c = UncertaintySet::box_set(&[0.5, 0.5], &[2.0, 2.0]).unwrap();
        let d = Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let c_true = vec![rng.gen_range(0.55..1.95), rng.gen_range(0.55..1.95)];
            let rep = full_pipeline_simulated(&x, &c, &d, &c_true, None, &tol()).unwrap();
            let best = x.minimize(&c_true).unwrap().objective;
            let got = numlin::dot(&c_true, &rep.x_hat);
            assert!((got - best).abs() <= 1e-7 * (1.0 + best.abs()));
        }
    }

    #[test]
    fn gap_bound_examples() {
        let t = tol();
        let d_id = Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let g = gap_bound(&d_id, 10f64.sqrt(), 0.1, 1.0, &t).unwrap();
        assert!((g.normalized - 0.2 / 10f64.sqrt()).abs() < 1e-12);

        let g0 = gap_bound(&d_id, 1.0, 0.0, 1.0, &t).unwrap();
        assert_eq!(g0.normalized, 0.0);

        let d_diag = Dataset::new(vec![vec![2.0, 0.0], vec![0.0, 3.0]]);
        let g2 = gap_bound(&d_diag, 1.0, 0.3, 1.0, &t).unwrap();
        assert!((g2.normalized - 0.3).abs() < 1e-9);
    }

    #[test]
    fn gap_bound_rank_deficient_errors() {
        let d = Dataset::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]]);
        assert!(matches!(
            gap_bound(&d, 1.0, 0.1, 1.0, &tol()),
            Err(DecideError::RankDeficientDataset)
        ));
    }

    #[test]
    fn noisy_gap_respects_bound() {
        use rand::{Rng, SeedableRng};
        let x = segment();
        let c = UncertaintySet::box_set(&[0.5, 0.5], &[2.0, 2.0]).unwrap();
        let d = Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let c_true = vec![rng.gen_range(0.6..1.9), rng.gen_range(0.6..1.9)];
            let level = 10f64.powf(rng.gen_range(-4.0..-1.0));
            let noise: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0) * level).collect();
            let rep =
                full_pipeline_simulated(&x, &c, &d, &c_true, Some(&noise), &tol()).unwrap();
            let measured = measured_normalized_gap(&x, &c_true, &rep.x_hat).unwrap();
            let bound = rep.gap_bound_normalized.unwrap();
            assert!(
                measured <= bound + 1e-9,
                "measured {measured} > bound {bound}"
            );
        }
    }

    #[test]
    fn tiny_noise_recovers_exact_decision() {
        let x = segment();
        let c = UncertaintySet::box_set(&[0.5, 0.5], &[2.0, 2.0]).unwrap();
        let d = Dataset::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let c_true = vec![0.8, 1.7]; // clear margin between the vertices
        let noise = vec![1e-10, -1e-10];
        let rep = full_pipeline_simulated(&x, &c, &d, &c_true, Some(&noise), &tol()).unwrap();
        let gap = measured_normalized_gap(&x, &c_true, &rep.x_hat).unwrap();
        assert_eq!(gap, 0.0);
    }
}
