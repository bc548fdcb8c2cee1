//! The core engine: compute the direction space of reachable optimal
//! decisions `dir(X*(C))`, test data-set sufficiency, and quantify missing
//! information.
//!
//! The direction space is built iteratively. Each round samples a Gaussian
//! functional, projects it onto the complement of the directions found so
//! far, and solves a mixed-binary program whose constraints encode "x is
//! optimal for some cost c in C" through complementary slackness
//! (`Ax = b`, `Aᵀλ + s = c`, `x, s ≥ 0`, `x_i s_i = 0` via binaries).
//! A nonzero optimum certifies a new reachable vertex whose difference from
//! the anchor extends the span; two zero optima certify completion. Every
//! accepted witness is re-verified by an exact LP duality check plus a
//! membership test, so an ill-chosen linking constant can only cost retries,
//! never a wrong answer.

use crate::geometry::{GeometryError, Polyhedron, Vertex};
use crate::lp::{self, LpError, MbpError, MbpOptions, MbpResult, MixedBinaryProgram};
use crate::numlin::{self, NumlinError, Subspace, ToleranceConfig};
use crate::uncertainty::{Interpretation, UncertaintyError, UncertaintySet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Finite collection of query vectors.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub queries: Vec<Vec<f64>>,
    pub provenance: Vec<String>,
}

impl Dataset {
    pub fn new(queries: Vec<Vec<f64>>) -> Self {
        let provenance = vec![String::new(); queries.len()];
        Dataset {
            queries,
            provenance,
        }
    }

    pub fn labeled(queries: Vec<Vec<f64>>, label: &str) -> Self {
        let provenance = vec![label.to_string(); queries.len()];
        Dataset {
            queries,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn span(&self, d: usize, tol: &ToleranceConfig) -> Result<Subspace, NumlinError> {
        numlin::orthonormalize_in(d, &self.queries, tol)
    }
}

/// A reachable vertex paired with a cost vector certifying it.
#[derive(Debug, Clone)]
pub struct DirectionWitness {
    pub cost: Vec<f64>,
    pub vertex: Vertex,
}

/// Basis of `dir(X*(C))` with the anchor and per-direction witnesses.
#[derive(Debug, Clone)]
pub struct DecisionDirections {
    pub basis: Subspace,
    pub anchor: Vertex,
    pub witnesses: Vec<DirectionWitness>,
    pub iterations: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub node_limit: usize,
    /// Multiplies the cost-magnitude bound when bounding dual slacks for
    /// the linking constant.
    pub conditioning_factor: f64,
    /// Rounds re-sampled after a failed witness verification.
    pub max_retries: usize,
    /// |optimum| ≤ zero_tol_factor · (1 + ‖x₀‖) counts as zero.
    pub zero_tol_factor: f64,
    /// Random carrier costs tried per round before the mixed-binary solve.
    pub sample_attempts: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            node_limit: 200_000,
            conditioning_factor: 1e3,
            max_retries: 4,
            zero_tol_factor: 1e-6,
            sample_attempts: 24,
        }
    }
}

#[derive(Debug)]
pub enum SufficiencyError {
    Geometry(GeometryError),
    Uncertainty(UncertaintyError),
    Lp(LpError),
    Mbp(MbpError),
    Numeric(NumlinError),
    /// Witness verification kept failing; the partial result is attached.
    WitnessVerification { partial: Box<DecisionDirections> },
    CapExceeded { dim: usize, cap: usize },
    WrongInterpretation(&'static str),
    DimensionMismatch { expected: usize, got: usize },
}

impl fmt::Display for SufficiencyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SufficiencyError::Geometry(e) => write!(f, "{e}"),
            SufficiencyError::Uncertainty(e) => write!(f, "{e}"),
            SufficiencyError::Lp(e) => write!(f, "{e}"),
            SufficiencyError::Mbp(e) => write!(f, "{e}"),
            SufficiencyError::Numeric(e) => write!(f, "{e}"),
            SufficiencyError::WitnessVerification { partial } => write!(
                f,
                "witness verification failed after retries; partial basis has dimension {}",
                partial.basis.dim()
            ),
            SufficiencyError::CapExceeded { dim, cap } => {
                write!(f, "dimension {dim} exceeds cap {cap}")
            }
            SufficiencyError::WrongInterpretation(s) => write!(f, "{s}"),
            SufficiencyError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
        }
    }
}

impl std::error::Error for SufficiencyError {}

impl From<GeometryError> for SufficiencyError {
    fn from(e: GeometryError) -> Self {
        SufficiencyError::Geometry(e)
    }
}

impl From<UncertaintyError> for SufficiencyError {
    fn from(e: UncertaintyError) -> Self {
        SufficiencyError::Uncertainty(e)
    }
}

impl From<LpError> for SufficiencyError {
    fn from(e: LpError) -> Self {
        SufficiencyError::Lp(e)
    }
}

impl From<MbpError> for SufficiencyError {
    fn from(e: MbpError) -> Self {
        SufficiencyError::Mbp(e)
    }
}

impl From<NumlinError> for SufficiencyError {
    fn from(e: NumlinError) -> Self {
        SufficiencyError::Numeric(e)
    }
}

/// Variable layout of one round's mixed-binary program. The dual slack
/// `s = c − Aᵀλ` is not a variable: dual feasibility and its linking row
/// are written directly in terms of (λ, c), so `s` lives implicitly in the
/// slack of the `Aᵀλ − c ≤ 0` row.
struct MilpLayout {
    d: usize,
    m: usize,
    aux: usize,
}

impl MilpLayout {
    fn x(&self, i: usize) -> usize {
        i
    }
    fn lambda(&self, i: usize) -> usize {
        self.d + i
    }
    fn c(&self, i: usize) -> usize {
        self.d + self.m + i
    }
    fn aux_var(&self, i: usize) -> usize {
        2 * self.d + self.m + i
    }
    fn tau(&self, i: usize) -> usize {
        2 * self.d + self.m + self.aux + i
    }
    fn total(&self) -> usize {
        3 * self.d + self.m + self.aux
    }
}

fn build_round_milp(
    x: &Polyhedron,
    carrier: &UncertaintySet,
    objective_on_x: &[f64],
    u_s: f64,
    w_lower: &[Option<f64>],
    node_limit: usize,
) -> MixedBinaryProgram {
    let d = x.dim();
    let m = x.num_rows();
    let lay = MilpLayout {
        d,
        m,
        aux: carrier.aux_dim(),
    };
    let n = lay.total();
    let mut lp = lp::GeneralLP::new(n);

    // Ax = b
    for r in 0..m {
        let mut row = vec![0.0; n];
        for j in 0..d {
            row[lay.x(j)] = x.a().get(r, j);
        }
        lp.push_eq(row, x.b()[r]);
    }
    // dual feasibility: Aᵀλ ≤ c (the slack is s ≥ 0)
    for j in 0..d {
        let mut row = vec![0.0; n];
        for r in 0..m {
            row[lay.lambda(r)] = x.a().get(r, j);
        }
        row[lay.c(j)] = -1.0;
        lp.push_le(row, 0.0);
    }
    // carrier rows over (c, aux)
    for (crow, rhs) in carrier.eq_rows() {
        let mut row = vec![0.0; n];
        for j in 0..d {
            row[lay.c(j)] = crow[j];
        }
        for k in 0..lay.aux {
            row[lay.aux_var(k)] = crow[d + k];
        }
        lp.push_eq(row, *rhs);
    }
    for (crow, rhs) in carrier.ineq_rows() {
        let mut row = vec![0.0; n];
        for j in 0..d {
            row[lay.c(j)] = crow[j];
        }
        for k in 0..lay.aux {
            row[lay.aux_var(k)] = crow[d + k];
        }
        lp.push_le(row, *rhs);
    }
    // Linking per coordinate: x_i ≤ u_x,i · τ_i and s_i ≤ u_s · (1 − τ_i),
    // the `1 − ε s_i ≥ τ_i ≥ ε x_i` encoding with a per-coordinate constant
    // on the x side. The coordinate maxima make the x-link tight (exact on
    // 0/1 polytopes), which is what lets the relaxation see optimality.
    // Coordinates forced to zero over X need no binary at all.
    let mut binaries = Vec::with_capacity(d);
    let mut priority = vec![0.0; n];
    let coord_max = x.coordinate_bounds();
    for i in 0..d {
        let u_xi = coord_max[i];
        if u_xi <= 1e-9 {
            lp.bounds[lay.x(i)] = (0.0, 0.0);
            lp.bounds[lay.tau(i)] = (0.0, 0.0);
            continue;
        }
        let mut r1 = vec![0.0; n];
        r1[lay.x(i)] = 1.0;
        r1[lay.tau(i)] = -(u_xi + 1e-7 * (1.0 + u_xi));
        lp.push_le(r1, 0.0);
        // s_i + u_s·τ_i ≤ u_s with s_i = c_i − (Aᵀλ)_i
        let mut r2 = vec![0.0; n];
        r2[lay.c(i)] = 1.0;
        for r in 0..m {
            r2[lay.lambda(r)] = -x.a().get(r, i);
        }
        r2[lay.tau(i)] = u_s;
        lp.push_le(r2, u_s);
        binaries.push(lay.tau(i));
        priority[lay.tau(i)] = objective_on_x[i].abs();
    }
    // One-sided bounds keep the standard-form lowering small: the τ upper
    // bound is implied by its linking row, and the carrier provides upper
    // sides for (c, aux).
    for i in 0..d {
        lp.bounds[lay.x(i)] = (0.0, lp.bounds[lay.x(i)].1);
        if lp.bounds[lay.tau(i)].1 > 0.0 {
            lp.bounds[lay.tau(i)] = (0.0, f64::INFINITY);
        }
    }
    for (k, lo) in w_lower.iter().enumerate() {
        if let Some(lo) = lo {
            let idx = if k < d { lay.c(k) } else { lay.aux_var(k - d) };
            lp.bounds[idx] = (lo - 1e-7 * (1.0 + lo.abs()), f64::INFINITY);
        }
    }
    for j in 0..d {
        lp.objective[lay.x(j)] = objective_on_x[j];
    }

    lp.assume_independent_rows = true;
    MixedBinaryProgram {
        lp,
        binary_indices: binaries,
        node_limit,
        branch_priority: priority,
    }
}

/// Per-coordinate lower/upper bounds of the carrier's lifted variables
/// (`None` marks an unbounded side). Used both to size the linking constant
/// and to hand the node LPs one-sided variable bounds.
fn carrier_w_bounds(
    carrier: &UncertaintySet,
    tol: &ToleranceConfig,
) -> Result<(Vec<Option<f64>>, Vec<Option<f64>>), SufficiencyError> {
    let w = carrier.lifted_dim();
    let mut lowers = vec![None; w];
    let mut uppers = vec![None; w];
    for i in 0..w {
        for sign in [1.0, -1.0] {
            let mut lp = lp::GeneralLP::new(w);
            for (row, rhs) in carrier.eq_rows() {
                lp.push_eq(row.clone(), *rhs);
            }
            for (row, rhs) in carrier.ineq_rows() {
                lp.push_le(row.clone(), *rhs);
            }
            lp.objective = vec![0.0; w];
            lp.objective[i] = sign;
            match lp::solve_general(&lp, tol)? {
                lp::LpResult::Optimal(s) => {
                    if sign > 0.0 {
                        lowers[i] = Some(s.objective);
                    } else {
                        uppers[i] = Some(-s.objective);
                    }
                }
                lp::LpResult::Unbounded => {}
                lp::LpResult::Infeasible => {
                    return Err(SufficiencyError::Uncertainty(UncertaintyError::EmptyCarrier))
                }
            }
        }
    }
    Ok((lowers, uppers))
}

/// Interior point and equality-kernel of the MILP carrier, used to draw
/// random carrier costs cheaply (no LP per sample).
struct CarrierSampler {
    w0: Vec<f64>,
    kernel: Subspace,
    reach: f64,
}

impl CarrierSampler {
    fn build(
        carrier: &UncertaintySet,
        tol: &ToleranceConfig,
    ) -> Result<Option<CarrierSampler>, SufficiencyError> {
        let w = carrier.lifted_dim();
        // interior-ish start: maximize a uniform slack on the inequalities
        let mut lp = lp::GeneralLP::new(w + 1);
        for (row, rhs) in carrier.eq_rows() {
            let mut r = row.clone();
            r.push(0.0);
            lp.push_eq(r, *rhs);
        }
        for (row, rhs) in carrier.ineq_rows() {
            let mut r = row.clone();
            r.push(1.0);
            lp.push_le(r, *rhs);
        }
        lp.bounds[w] = (0.0, carrier.scale());
        lp.objective = vec![0.0; w + 1];
        lp.objective[w] = -1.0;
        let w0 = match lp::solve_general(&lp, tol)? {
            lp::LpResult::Optimal(s) => s.x[..w].to_vec(),
            _ => return Ok(None),
        };
        let eq_rows: Vec<Vec<f64>> = carrier.eq_rows().iter().map(|(r, _)| r.clone()).collect();
        let kernel = if eq_rows.is_empty() {
            Subspace::full(w)
        } else {
            let m = crate::numlin::RealMatrix::from_rows(&eq_rows)?;
            crate::geometry::kernel_of(&m, tol)?
        };
        if kernel.dim() == 0 {
            return Ok(None);
        }
        Ok(Some(CarrierSampler {
            w0,
            kernel,
            reach: 4.0 * carrier.scale(),
        }))
    }

    /// One random point of the carrier: a random kernel direction from the
    /// interior point, stepped within the exact feasible interval.
    fn sample(
        &self,
        carrier: &UncertaintySet,
        rng: &mut ChaCha8Rng,
    ) -> Option<Vec<f64>> {
        let w = carrier.lifted_dim();
        let mut dir = vec![0.0; w];
        for b in self.kernel.basis() {
            numlin::axpy(rng.gen_range(-1.0f64..1.0), b, &mut dir);
        }
        let n = numlin::norm(&dir);
        if n < 1e-12 {
            return None;
        }
        for v in dir.iter_mut() {
            *v /= n;
        }
        // exact step interval against the inequality rows
        let mut t_max = self.reach;
        let mut t_min = -self.reach;
        for (row, rhs) in carrier.ineq_rows() {
            let slack = rhs - numlin::dot(row, &self.w0);
            let speed = numlin::dot(row, &dir);
            if speed > 1e-12 {
                t_max = t_max.min(slack / speed);
            } else if speed < -1e-12 {
                t_min = t_min.max(slack / speed);
            } else if slack < 0.0 {
                return None;
            }
        }
        if t_max < t_min {
            return None;
        }
        let t = rng.gen_range(0.0f64..1.0) * (t_max - t_min) * 0.98 + t_min * 0.98;
        Some(numlin::add(&self.w0, &numlin::scale(t, &dir)))
    }
}

enum RoundOutcome {
    /// A verified reachable vertex with its certifying cost.
    Witness(Vec<f64>, Vertex),
    /// Both senses certified a zero optimum.
    Zero,
    /// A candidate appeared but failed exact verification; the caller
    /// should resample the functional and retry.
    VerificationFailed,
}

/// One round of the iterative loop: try both senses of the projected
/// Gaussian functional; return a verified witness or a zero certificate.
#[allow(clippy::too_many_arguments)]
fn run_round(
    x: &Polyhedron,
    milp_carrier: &UncertaintySet,
    verify_sets: &[&UncertaintySet],
    anchor: &Vertex,
    span_d: &Subspace,
    rng: &mut ChaCha8Rng,
    u_s: f64,
    w_lower: &[Option<f64>],
    sampler: Option<&CarrierSampler>,
    cfg: &EngineConfig,
    tol: &ToleranceConfig,
) -> Result<RoundOutcome, SufficiencyError> {
    let d = x.dim();
    let alpha: Vec<f64> = (0..d).map(|_| standard_normal(rng)).collect();
    // objective vector: g = projection of α onto (span D)^⊥
    let g = numlin::sub(&alpha, &span_d.project(&alpha)?);
    let gnorm = numlin::norm(&g);
    if gnorm < 1e-12 {
        // span D already fills the space
        return Ok(RoundOutcome::Zero);
    }
    let mut failed_verification = false;
    let zero_thresh = cfg.zero_tol_factor * (1.0 + numlin::norm(&anchor.point)) * gnorm.max(1.0);
    let g_dot_x0 = numlin::dot(&g, &anchor.point);

    // Cheap pass first: random carrier costs solved by plain LP. Any vertex
    // leaving the current span is a ready-made witness; the MILP is only
    // consulted when sampling comes up empty.
    if let Some(sampler) = sampler {
        for _ in 0..cfg.sample_attempts {
            let wpt = match sampler.sample(milp_carrier, rng) {
                Some(w) => w,
                None => break,
            };
            let cost = wpt[..d].to_vec();
            let sol = x.minimize(&cost)?;
            let value = g_dot_x0 - numlin::dot(&g, &sol.x);
            if value.abs() <= zero_thresh {
                continue;
            }
            let mut member_ok = true;
            for set in verify_sets {
                if !set.member_interpreted(&cost, tol)? {
                    member_ok = false;
                    break;
                }
            }
            if !member_ok {
                continue;
            }
            if let Ok(vertex) = x.vertex_at(&sol.x) {
                return Ok(RoundOutcome::Witness(cost, vertex));
            }
        }
    }

    for sense in [1.0, -1.0] {
        // sense +1 maximizes g·(x0 − x) by minimizing g·x;
        // sense −1 minimizes it by minimizing −g·x.
        let obj: Vec<f64> = g.iter().map(|v| sense * v).collect();
        let milp = build_round_milp(x, milp_carrier, &obj, u_s, w_lower, cfg.node_limit);
        let exit_below = sense * g_dot_x0 - zero_thresh;
        let opts = MbpOptions {
            early_exit_below: Some(exit_below),
            prune_bound_at: Some(exit_below),
        };
        let t0 = std::time::Instant::now();
        let res = lp::solve_mbp(&milp, tol, opts);
        if std::env::var("PROBELP_DEBUG_ROUND").is_ok() {
            let nodes = match &res {
                Ok(MbpResult::Solved(s)) => s.nodes_explored as i64,
                Ok(MbpResult::Infeasible) => -1,
                _ => -2,
            };
            eprintln!("  milp sense={sense} nodes={nodes} elapsed={:?}", t0.elapsed());
        }
        let sol = match res {
            Ok(MbpResult::Solved(s)) => s,
            Ok(MbpResult::Infeasible) => continue, // nothing beats the threshold
            Err(MbpError::NodeLimitExhausted) => continue,
            Err(e) => return Err(e.into()),
        };
        if sol.objective > exit_below {
            continue; // incumbent did not beat the zero threshold
        }
        if std::env::var("PROBELP_DEBUG_ROUND").is_ok() {
            eprintln!(
                "sense={sense} obj={} exit_below={exit_below} x={:?}",
                sol.objective, sol.x
            );
        }
        let lay = MilpLayout {
            d,
            m: x.num_rows(),
            aux: milp_carrier.aux_dim(),
        };
        let cost: Vec<f64> = (0..d).map(|j| sol.x[lay.c(j)]).collect();
        // Pull the witness to a vertex of the optimal face of its cost,
        // keeping the round functional optimal there.
        let face = lp::solve_lp_on_optimal_face(
            &lp::StandardFormLP::new(x.a().clone(), x.b().to_vec(), cost.clone())?,
            &cost,
            &obj,
            tol,
        )?;
        let face_sol = match face {
            lp::LpResult::Optimal(s) => s,
            _ => {
                failed_verification = true;
                continue;
            }
        };
        let value = g_dot_x0 - numlin::dot(&g, &face_sol.x);
        if value.abs() <= zero_thresh {
            failed_verification = true;
            continue;
        }
        // Exact re-verification: optimality by duality gap, then membership.
        let direct = x.minimize(&cost)?;
        let witness_obj = numlin::dot(&cost, &face_sol.x);
        let gap_ok =
            witness_obj <= direct.objective + tol.feas_tol * (1.0 + direct.objective.abs()) * 10.0;
        let mut member_ok = true;
        for set in verify_sets {
            if !set.member_interpreted(&cost, tol)? {
                member_ok = false;
                break;
            }
        }
        if !(gap_ok && member_ok) {
            failed_verification = true;
            continue;
        }
        let vertex = match x.vertex_at(&face_sol.x) {
            Ok(v) => v,
            Err(_) => {
                failed_verification = true;
                continue;
            }
        };
        return Ok(RoundOutcome::Witness(cost, vertex));
    }
    if failed_verification {
        Ok(RoundOutcome::VerificationFailed)
    } else {
        Ok(RoundOutcome::Zero)
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; the tiny floor keeps ln finite.
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Compute a basis of `dir(X*(C))` with witnesses.
///
/// The uncertainty set is normalized first (unbounded cost directions are
/// boxed; minimizers are scale-invariant), the anchor is a vertex optimal
/// for a relative-interior cost, and rounds proceed until both senses of
/// the sampled functional certify zero.
pub fn compute_decision_directions(
    x: &Polyhedron,
    c: &UncertaintySet,
    seed: u64,
    cfg: &EngineConfig,
    tol: &ToleranceConfig,
) -> Result<DecisionDirections, SufficiencyError> {
    if c.cost_dim() != x.dim() {
        return Err(SufficiencyError::DimensionMismatch {
            expected: x.dim(),
            got: c.cost_dim(),
        });
    }
    let d = x.dim();
    let dbg = std::env::var("PROBELP_DEBUG_PHASE").is_ok();
    if dbg { eprintln!("phase: normalize"); }
    let c_norm = c.normalize_unbounded(tol)?;
    let milp_carrier = match c_norm.interpretation() {
        Interpretation::RelativeInterior => c_norm.shrink(tol.strict_margin, tol)?,
        _ => c_norm.shrink(0.0, tol)?,
    };
    if dbg { eprintln!("phase: hull"); }
    let hull = c_norm.hull(tol)?;
    let c0 = hull.affine_point.clone();
    let anchor_sol = x.minimize(&c0)?;
    let anchor = x
        .vertex_at(&anchor_sol.x)
        .map_err(SufficiencyError::Geometry)?;

    // Dual-slack cap for the s-side linking constant: the cost-magnitude
    // bound over the carrier times a conditioning factor. The x side uses
    // exact per-coordinate maxima inside the builder. An under-sized cap
    // cannot produce a wrong answer (witnesses are re-verified; the span
    // is cross-checked against the oracle in tests), only wasted retries.
    if dbg { eprintln!("phase: w_bounds"); }
    let (w_lower, w_upper) = carrier_w_bounds(&milp_carrier, tol)?;
    let c_inf = (0..milp_carrier.cost_dim())
        .map(|i| {
            let lo = w_lower[i].map(f64::abs).unwrap_or(1.0);
            let hi = w_upper[i].map(f64::abs).unwrap_or(1.0);
            lo.max(hi)
        })
        .fold(0.0_f64, f64::max);
    let u_s = cfg.conditioning_factor * (1.0 + c_inf);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut directions: Vec<Vec<f64>> = Vec::new();
    let mut witnesses: Vec<DirectionWitness> = Vec::new();
    let verify_sets: Vec<&UncertaintySet> = vec![c, &c_norm];
    if dbg { eprintln!("phase: sampler build"); }
    let sampler = if cfg.sample_attempts > 0 {
        CarrierSampler::build(&milp_carrier, tol)?
    } else {
        None
    };

    loop {
        if directions.len() == d {
            break;
        }
        if dbg { eprintln!("phase: round {}", directions.len()); }
        let span_d = numlin::orthonormalize_in(d, &directions, tol)?;
        let mut found = None;
        let mut certified_zero = false;
        let mut attempts = 0usize;
        loop {
            let outcome = run_round(
                x,
                &milp_carrier,
                &verify_sets,
                &anchor,
                &span_d,
                &mut rng,
                u_s,
                &w_lower,
                sampler.as_ref(),
                cfg,
                tol,
            )?;
            match outcome {
                RoundOutcome::Witness(cost, vertex) => {
                    found = Some((cost, vertex));
                    break;
                }
                RoundOutcome::Zero => {
                    certified_zero = true;
                    break;
                }
                RoundOutcome::VerificationFailed => {
                    attempts += 1;
                    if attempts > cfg.max_retries {
                        let basis = numlin::orthonormalize_in(d, &directions, tol)?;
                        return Err(SufficiencyError::WitnessVerification {
                            partial: Box::new(DecisionDirections {
                                iterations: directions.len(),
                                basis,
                                anchor,
                                witnesses,
                                seed,
                            }),
                        });
                    }
                }
            }
        }
        match found {
            Some((cost, vertex)) => {
                let delta = numlin::sub(&vertex.point, &anchor.point);
                directions.push(delta);
                witnesses.push(DirectionWitness { cost, vertex });
            }
            None => {
                debug_assert!(certified_zero);
                break;
            }
        }
    }

    let basis = numlin::orthonormalize_in(d, &directions, tol)?;
    if basis.dim() != directions.len() {
        // a round added a dependent direction: numerically inconsistent
        return Err(SufficiencyError::WitnessVerification {
            partial: Box::new(DecisionDirections {
                iterations: directions.len(),
                basis,
                anchor,
                witnesses,
                seed,
            }),
        });
    }
    Ok(DecisionDirections {
        iterations: directions.len(),
        basis,
        anchor,
        witnesses,
        seed,
    })
}

/// The vertex-returning variant: `{x₀, x*₁, …, x*_r}` where the differences
/// `x*_i − x₀` form the direction basis. Every returned point is a vertex
/// because each round re-optimizes its functional over the witness cost's
/// optimal face.
pub fn compute_decision_vertices(
    x: &Polyhedron,
    c: &UncertaintySet,
    seed: u64,
    cfg: &EngineConfig,
    tol: &ToleranceConfig,
) -> Result<Vec<Vertex>, SufficiencyError> {
    let dirs = compute_decision_directions(x, c, seed, cfg, tol)?;
    let mut out = vec![dirs.anchor.clone()];
    out.extend(dirs.witnesses.iter().map(|w| w.vertex.clone()));
    Ok(out)
}

/// Sufficiency test: `dir(X*(C)) ⊂ dir(C)^⊥ + span D`. `directions` is the
/// basis computed by [`compute_decision_directions`] (its `.basis` field).
pub fn is_sufficient(
    c: &UncertaintySet,
    dataset: &Dataset,
    directions: &Subspace,
    tol: &ToleranceConfig,
) -> Result<bool, SufficiencyError> {
    let d = c.cost_dim();
    let dir_c = &c.hull(tol)?.dir_c;
    let span_d = dataset.span(d, tol)?;
    let known = dir_c.complement().sum(&span_d, tol)?;
    Ok(known.contains_subspace(directions, tol)?)
}

/// Vector-space specialization: `F₀ ∩ Ker A ⊂ C^⊥ + span D`. Must agree
/// with [`is_sufficient`] on every exact-vector-space instance.
pub fn is_sufficient_vectorspace(
    x: &Polyhedron,
    c: &UncertaintySet,
    dataset: &Dataset,
    tol: &ToleranceConfig,
) -> Result<bool, SufficiencyError> {
    if c.interpretation() != Interpretation::ExactVectorSpace {
        return Err(SufficiencyError::WrongInterpretation(
            "is_sufficient_vectorspace requires an exact-vector-space uncertainty set",
        ));
    }
    let d = x.dim();
    let dir_c = &c.hull(tol)?.dir_c;
    let span_d = dataset.span(d, tol)?;
    let known = dir_c.complement().sum(&span_d, tol)?;
    let task = x.support_subspace().intersect(x.kernel_basis(), tol)?;
    Ok(known.contains_subspace(&task, tol)?)
}

/// Missing information `r(X, C)`: the dimension of the projection of
/// `dir(X*(C))` onto `dir(C)`.
pub fn missing_information(
    c: &UncertaintySet,
    directions: &Subspace,
    tol: &ToleranceConfig,
) -> Result<usize, SufficiencyError> {
    let dir_c = &c.hull(tol)?.dir_c;
    let overlap = directions.intersect(&dir_c.complement(), tol)?;
    Ok(directions.dim() - overlap.dim())
}

/// Sufficiency for the binary-restricted decision set `X ∩ {0,1}^d` by
/// exhaustive enumeration of feasible binary points.
pub fn mip_sufficiency_bruteforce(
    x: &Polyhedron,
    c: &UncertaintySet,
    dataset: &Dataset,
    binary_cap: usize,
    tol: &ToleranceConfig,
) -> Result<bool, SufficiencyError> {
    let d = x.dim();
    if d > binary_cap {
        return Err(SufficiencyError::CapExceeded {
            dim: d,
            cap: binary_cap,
        });
    }
    let carrier = match c.interpretation() {
        Interpretation::RelativeInterior => c.shrink(tol.strict_margin, tol)?,
        _ => c.shrink(0.0, tol)?,
    };
    // enumerate feasible binary points
    let mut points: Vec<Vec<f64>> = Vec::new();
    for mask in 0..(1usize << d) {
        let z: Vec<f64> = (0..d)
            .map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 })
            .collect();
        if x.contains_point(&z) {
            points.push(z);
        }
    }
    if points.is_empty() {
        return Err(SufficiencyError::Geometry(GeometryError::Infeasible));
    }
    // z is reachable iff some carrier cost makes it a minimizer over the
    // binary feasible set
    let w = carrier.lifted_dim();
    let mut reachable: Vec<Vec<f64>> = Vec::new();
    for z in &points {
        let mut lpp = lp::GeneralLP::new(w);
        for (row, rhs) in carrier.eq_rows() {
            lpp.push_eq(row.clone(), *rhs);
        }
        for (row, rhs) in carrier.ineq_rows() {
            lpp.push_le(row.clone(), *rhs);
        }
        for other in &points {
            if other == z {
                continue;
            }
            // cᵀ(other − z) ≥ 0  ⟺  (z − other)ᵀ c ≤ 0
            let mut row = vec![0.0; w];
            for i in 0..d {
                row[i] = z[i] - other[i];
            }
            lpp.push_le(row, 0.0);
        }
        if !matches!(lp::solve_general(&lpp, tol)?, lp::LpResult::Infeasible) {
            reachable.push(z.clone());
        }
    }
    let diffs: Vec<Vec<f64>> = reachable
        .iter()
        .skip(1)
        .map(|z| numlin::sub(z, &reachable[0]))
        .collect();
    let dir = numlin::orthonormalize_in(d, &diffs, tol)?;
    let dir_c = &c.hull(tol)?.dir_c;
    let span_d = dataset.span(d, tol)?;
    let known = dir_c.complement().sum(&span_d, tol)?;
    Ok(known.contains_subspace(&dir, tol)?)
}
