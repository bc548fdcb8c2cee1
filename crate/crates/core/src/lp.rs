//! Simplex-based LP solving and a branch-and-bound layer for mixed-binary
//! programs.
//!
//! The solver is a dense two-phase primal simplex with Bland's rule, which
//! trades speed for a termination guarantee; everything here runs on small
//! systems. Final solutions are recomputed from the basis against the
//! original data, so duals and reduced costs do not inherit tableau drift.

use crate::numlin::{self, norm_inf, RealMatrix, ToleranceConfig};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// `min cᵀx  s.t.  Ax = b, x ≥ 0`.
#[derive(Debug, Clone)]
pub struct StandardFormLP {
    pub a: RealMatrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl StandardFormLP {
    pub fn new(a: RealMatrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self, LpError> {
        if a.nrows() != b.len() {
            return Err(LpError::Shape("row count of A must match b".into()));
        }
        if a.ncols() != c.len() {
            return Err(LpError::Shape("column count of A must match c".into()));
        }
        Ok(StandardFormLP { a, b, c })
    }
}

/// Optimal solution with the dual certificate.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// One multiplier per original row of `A` (zero on redundant rows
    /// dropped by presolve).
    pub dual: Vec<f64>,
    /// `s = c − Aᵀλ`, nonnegative at optimality.
    pub reduced_costs: Vec<f64>,
    /// Column indices of the final basis.
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum LpResult {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn status(&self) -> LpStatus {
        match self {
            LpResult::Optimal(_) => LpStatus::Optimal,
            LpResult::Infeasible => LpStatus::Infeasible,
            LpResult::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpResult::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn into_optimal(self) -> Option<LpSolution> {
        match self {
            LpResult::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum LpError {
    Shape(String),
    /// Simplex exceeded its iteration cap.
    IterationLimit,
    /// The basis system became numerically singular.
    SingularBasis,
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::Shape(s) => write!(f, "shape error: {s}"),
            LpError::IterationLimit => write!(f, "simplex iteration limit exceeded"),
            LpError::SingularBasis => write!(f, "singular basis system"),
        }
    }
}

impl std::error::Error for LpError {}

/// Row presolve: select a maximal independent subset of rows of `[A|b]`.
/// Returns the kept row indices, or `None` when a dependent row is
/// inconsistent (certifying infeasibility).
pub(crate) fn independent_rows(a: &RealMatrix, b: &[f64], tol: f64) -> Option<Vec<usize>> {
    let m = a.nrows();
    let d = a.ncols();
    let mut work: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i]);
            r
        })
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    let scale = work
        .iter()
        .map(|r| norm_inf(r))
        .fold(1.0_f64, f64::max);
    let eps = tol * scale;
    let mut kept = Vec::new();
    let mut r = 0usize;
    for c in 0..d {
        if r == m {
            break;
        }
        let (piv, pval) = (r..m)
            .map(|i| (i, work[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pval <= eps {
            continue;
        }
        work.swap(r, piv);
        order.swap(r, piv);
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = work[i][c] / work[r][c];
            if f == 0.0 {
                continue;
            }
            for j in 0..=d {
                work[i][j] -= f * work[r][j];
            }
        }
        kept.push(order[r]);
        r += 1;
    }
    for row in work.iter().skip(r) {
        if row[d].abs() > eps.max(tol) * 10.0 {
            return None; // 0 = nonzero
        }
    }
    kept.sort_unstable();
    Some(kept)
}

struct Tableau {
    /// (m+1) x (n+1); last row is the objective, last column the rhs.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    m: usize,
    n: usize,
    /// Consecutive pivots without objective progress; once this passes the
    /// stall limit, pricing falls back to Bland's rule until progress
    /// resumes, which rules out cycling.
    stall: usize,
    stall_limit: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.t[i][self.n]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c];
        let prow = std::mem::take(&mut self.t[r]);
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f == 0.0 {
                continue;
            }
            let scale = f / p;
            for (v, pv) in row.iter_mut().zip(prow.iter()) {
                *v -= scale * pv;
            }
            row[c] = 0.0;
        }
        self.t[r] = prow;
        let inv = 1.0 / p;
        for v in self.t[r].iter_mut() {
            *v *= inv;
        }
        self.t[r][c] = 1.0;
        self.basis[r] = c;
    }

    /// One pivot: Dantzig pricing (most negative reduced cost) by default,
    /// Bland's rule while stalled. The leaving row takes the lowest basic
    /// index among ratio-test minimizers, Bland-compatible either way.
    fn step(&mut self, allowed: usize, eps: f64) -> Result<bool, LpStatus> {
        let cost = &self.t[self.m];
        let enter = if self.stall > self.stall_limit {
            (0..allowed).find(|&j| cost[j] < -eps)
        } else {
            let mut best: Option<(usize, f64)> = None;
            for (j, &cj) in cost.iter().enumerate().take(allowed) {
                if cj < -eps && best.map(|(_, bv)| cj < bv).unwrap_or(true) {
                    best = Some((j, cj));
                }
            }
            best.map(|(j, _)| j)
        };
        let enter = match enter {
            Some(j) => j,
            None => return Ok(false), // optimal
        };
        let mut best: Option<(f64, usize, usize)> = None; // (ratio, basis var, row)
        for i in 0..self.m {
            let a = self.t[i][enter];
            if a > eps {
                let ratio = self.rhs(i) / a;
                let key = (ratio, self.basis[i], i);
                best = match best {
                    None => Some(key),
                    Some(cur) => {
                        if key.0 < cur.0 - 1e-12 || ((key.0 - cur.0).abs() <= 1e-12 && key.1 < cur.1)
                        {
                            Some(key)
                        } else {
                            Some(cur)
                        }
                    }
                };
            }
        }
        match best {
            Some((ratio, _, row)) => {
                let before = self.t[self.m][self.n];
                self.pivot(row, enter);
                let after = self.t[self.m][self.n];
                if ratio <= 1e-12 || (after - before).abs() <= 1e-12 * (1.0 + before.abs()) {
                    self.stall += 1;
                } else {
                    self.stall = 0;
                }
                Ok(true)
            }
            None => Err(LpStatus::Unbounded),
        }
    }
}

/// Solver knobs for callers that know their system's structure.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Skip the rank presolve; rows must be linearly independent (all-zero
    /// rows are still dropped by a cheap scan).
    pub assume_independent_rows: bool,
    /// Skip the dual/reduced-cost extraction.
    pub skip_duals: bool,
}

/// Two-phase primal simplex on standard form. Deterministic: Dantzig
/// pricing with a Bland fallback under stalling, lowest-index tie breaks.
pub fn solve_lp(p: &StandardFormLP, tol: &ToleranceConfig) -> Result<LpResult, LpError> {
    solve_lp_opts(p, tol, SolveOptions::default())
}

pub fn solve_lp_opts(
    p: &StandardFormLP,
    tol: &ToleranceConfig,
    opts: SolveOptions,
) -> Result<LpResult, LpError> {
    let m_orig = p.a.nrows();
    let d = p.a.ncols();
    let kept = if opts.assume_independent_rows {
        // cheap scan: drop all-zero rows, checking rhs consistency
        let mut kept = Vec::with_capacity(m_orig);
        for i in 0..m_orig {
            let row_zero = p.a.row(i).iter().all(|&v| v == 0.0);
            if row_zero {
                if p.b[i].abs() > tol.feas_tol {
                    return Ok(LpResult::Infeasible);
                }
            } else {
                kept.push(i);
            }
        }
        kept
    } else {
        match independent_rows(&p.a, &p.b, tol.feas_tol) {
            Some(k) => k,
            None => return Ok(LpResult::Infeasible),
        }
    };
    let mut kept = kept;
    let m = kept.len();

    // Assemble rows, flipping signs so the rhs is nonnegative.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    for &i in &kept {
        let mut r = p.a.row(i).to_vec();
        let mut bi = p.b[i];
        if bi < 0.0 {
            for v in r.iter_mut() {
                *v = -*v;
            }
            bi = -bi;
        }
        rows.push(r);
        rhs.push(bi);
    }

    // Crash basis: rows whose slack-style unit column survives the sign
    // flip start basic without an artificial.
    let mut crash: Vec<Option<usize>> = vec![None; m];
    {
        let mut nonzero_row: Vec<Option<(usize, f64)>> = vec![None; d];
        let mut count = vec![0usize; d];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    count[j] += 1;
                    nonzero_row[j] = Some((i, v));
                }
            }
        }
        let mut used = vec![false; m];
        for j in 0..d {
            if count[j] == 1 {
                if let Some((i, v)) = nonzero_row[j] {
                    if v == 1.0 && !used[i] {
                        crash[i] = Some(j);
                        used[i] = true;
                    }
                }
            }
        }
    }
    let art_rows: Vec<usize> = (0..m).filter(|&i| crash[i].is_none()).collect();
    let n = d + art_rows.len();
    let mut t = vec![vec![0.0; n + 1]; m + 1];
    let mut basis = vec![0usize; m];
    for i in 0..m {
        t[i][..d].copy_from_slice(&rows[i]);
        t[i][n] = rhs[i];
    }
    for (k, &i) in art_rows.iter().enumerate() {
        t[i][d + k] = 1.0;
        basis[i] = d + k;
    }
    for i in 0..m {
        if let Some(j) = crash[i] {
            basis[i] = j;
        }
    }
    // Phase-1 objective: sum of artificials, priced out on their rows.
    for j in 0..=n {
        let s: f64 = art_rows.iter().map(|&i| t[i][j]).sum();
        t[m][j] = if (d..n).contains(&j) { 1.0 } else { 0.0 } - s;
    }
    t[m][n] = -art_rows.iter().map(|&i| t[i][n]).sum::<f64>();

    let scale_a = rows.iter().map(|r| norm_inf(r)).fold(1.0_f64, f64::max);
    let mut tab = Tableau {
        t,
        basis,
        m,
        n,
        stall: 0,
        stall_limit: 100 + 2 * m,
    };
    let eps = 1e-9 * scale_a.max(1.0);
    let max_iter = 400 * (m + n + 16);

    if !art_rows.is_empty() {
        let mut iter = 0usize;
        loop {
            iter += 1;
            if iter > max_iter {
                return Err(LpError::IterationLimit);
            }
            match tab.step(n, eps) {
                Ok(true) => continue,
                Ok(false) => break,
                Err(_) => return Err(LpError::SingularBasis), // phase 1 cannot be unbounded
            }
        }
        let phase1 = -tab.t[m][tab.n];
        if phase1 > tol.feas_tol * (1.0 + norm_inf(&rhs)) {
            return Ok(LpResult::Infeasible);
        }
        // Drive leftover artificials out of the basis; rows with no pivot
        // column left are redundant (possible when bound substitutions
        // collapse rows) and get removed outright.
        let mut dead: Vec<usize> = Vec::new();
        for i in 0..m {
            if tab.basis[i] >= d {
                let col = (0..d).find(|&j| tab.t[i][j].abs() > eps);
                match col {
                    Some(j) => tab.pivot(i, j),
                    None => dead.push(i),
                }
            }
        }
        for &i in dead.iter().rev() {
            tab.t.remove(i);
            tab.basis.remove(i);
            kept.remove(i);
            tab.m -= 1;
        }
    }
    let m = tab.m;

    // Phase 2: true costs, artificials barred from entering.
    let scale_c = norm_inf(&p.c).max(1.0);
    let eps2 = 1e-9 * scale_c.max(scale_a);
    for j in 0..=n {
        tab.t[m][j] = if j < d { p.c[j] } else { 0.0 };
    }
    for i in 0..m {
        let cb = if tab.basis[i] < d { p.c[tab.basis[i]] } else { 0.0 };
        if cb == 0.0 {
            continue;
        }
        let brow = std::mem::take(&mut tab.t[i]);
        for (v, bv) in tab.t[m].iter_mut().zip(brow.iter()) {
            *v -= cb * bv;
        }
        tab.t[i] = brow;
    }

    tab.stall = 0;
    let mut iter2 = 0usize;
    loop {
        iter2 += 1;
        if iter2 > max_iter {
            return Err(LpError::IterationLimit);
        }
        match tab.step(d, eps2) {
            Ok(true) => continue,
            Ok(false) => break,
            Err(LpStatus::Unbounded) => return Ok(LpResult::Unbounded),
            Err(_) => unreachable!(),
        }
    }

    // Recompute the solution from the basis against original data.
    let basis = tab.basis.clone();
    let mut x = vec![0.0; d];
    let (xb, lam) = if m > 0 {
        let mut bmat = RealMatrix::zeros(m, m);
        for (k, &j) in basis.iter().enumerate() {
            debug_assert!(j < d);
            for (i, &row) in kept.iter().enumerate() {
                bmat.set(i, k, p.a.get(row, j));
            }
        }
        let bsub: Vec<f64> = kept.iter().map(|&i| p.b[i]).collect();
        let xb = numlin::solve_square(&bmat, &bsub, 1e-13 * scale_a)
            .ok_or(LpError::SingularBasis)?;
        let lam = if opts.skip_duals {
            Vec::new()
        } else {
            let cb: Vec<f64> = basis.iter().map(|&j| p.c[j]).collect();
            numlin::solve_square(&bmat.transpose(), &cb, 1e-13 * scale_a)
                .ok_or(LpError::SingularBasis)?
        };
        (xb, lam)
    } else {
        (Vec::new(), Vec::new())
    };
    for (k, &j) in basis.iter().enumerate() {
        x[j] = xb[k];
    }
    let objective = numlin::dot(&p.c, &x);
    if opts.skip_duals {
        return Ok(LpResult::Optimal(LpSolution {
            x,
            objective,
            dual: Vec::new(),
            reduced_costs: Vec::new(),
            basis,
        }));
    }
    let mut dual = vec![0.0; m_orig];
    for (i, &row) in kept.iter().enumerate() {
        dual[row] = lam[i];
    }
    let mut reduced = vec![0.0; d];
    for j in 0..d {
        let mut s = p.c[j];
        for (i, &row) in kept.iter().enumerate() {
            s -= p.a.get(row, j) * lam[i];
        }
        reduced[j] = s;
    }
    Ok(LpResult::Optimal(LpSolution {
        x,
        objective,
        dual,
        reduced_costs: reduced,
        basis,
    }))
}

/// Optimize a secondary functional over the optimal face of `c_star`.
///
/// The optimal face of a bounded polyhedron is itself a polyhedron whose
/// vertices are vertices of the original, so the returned point is a vertex
/// of `X` optimal for `c_star`.
pub fn solve_lp_on_optimal_face(
    p: &StandardFormLP,
    c_star: &[f64],
    secondary: &[f64],
    tol: &ToleranceConfig,
) -> Result<LpResult, LpError> {
    let first = solve_lp(
        &StandardFormLP::new(p.a.clone(), p.b.clone(), c_star.to_vec())?,
        tol,
    )?;
    let opt = match first {
        LpResult::Optimal(s) => s,
        other => return Ok(other),
    };
    let d = p.a.ncols();
    let m = p.a.nrows();
    let mut a2 = RealMatrix::zeros(m + 1, d + 1);
    for i in 0..m {
        for j in 0..d {
            a2.set(i, j, p.a.get(i, j));
        }
    }
    for j in 0..d {
        a2.set(m, j, c_star[j]);
    }
    a2.set(m, d, 1.0); // slack for c*ᵀx ≤ v*
    let mut b2 = p.b.clone();
    b2.push(opt.objective + 0.5 * tol.feas_tol * (1.0 + opt.objective.abs()));
    let mut c2 = secondary.to_vec();
    c2.push(0.0);
    let res = solve_lp(&StandardFormLP::new(a2, b2, c2)?, tol)?;
    Ok(match res {
        LpResult::Optimal(mut s) => {
            s.x.truncate(d);
            s.dual.truncate(m);
            s.reduced_costs.truncate(d);
            s.objective = numlin::dot(secondary, &s.x);
            LpResult::Optimal(s)
        }
        other => other,
    })
}

/// Upper/lower bound for a variable; `f64::INFINITY` / `NEG_INFINITY`
/// mark absent bounds.
pub type Bounds = (f64, f64);

/// `min cᵀx` over equality and ≤ rows with per-variable bounds. This is the
/// node problem of the branch-and-bound layer; it is lowered to standard
/// form (shifts, splits and slacks) and solved by [`solve_lp`].
#[derive(Debug, Clone)]
pub struct GeneralLP {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub eq: Vec<(Vec<f64>, f64)>,
    pub le: Vec<(Vec<f64>, f64)>,
    pub bounds: Vec<Bounds>,
    /// Set when the rows are known independent by construction, skipping
    /// the rank presolve on every solve.
    pub assume_independent_rows: bool,
}

impl GeneralLP {
    pub fn new(num_vars: usize) -> Self {
        GeneralLP {
            num_vars,
            objective: vec![0.0; num_vars],
            eq: Vec::new(),
            le: Vec::new(),
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); num_vars],
            assume_independent_rows: false,
        }
    }

    pub fn push_eq(&mut self, row: Vec<f64>, rhs: f64) {
        debug_assert_eq!(row.len(), self.num_vars);
        self.eq.push((row, rhs));
    }

    pub fn push_le(&mut self, row: Vec<f64>, rhs: f64) {
        debug_assert_eq!(row.len(), self.num_vars);
        self.le.push((row, rhs));
    }
}

#[derive(Debug, Clone)]
pub struct GeneralSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

/// Solve a general-form LP by lowering to standard form.
pub fn solve_general(lp: &GeneralLP, tol: &ToleranceConfig) -> Result<LpResult, LpError> {
    let n = lp.num_vars;
    // Column plan per variable: x = shift + sign·y with y ≥ 0. Fixed
    // variables (lo = hi) are substituted out; two-sided bounds add a
    // range row; free variables split into a difference of two columns.
    #[derive(Clone, Copy)]
    enum Plan {
        Fixed { value: f64 },
        Shifted { col: usize, sign: f64, shift: f64 },
        Ranged { col: usize, shift: f64, range: f64 },
        Free { pos: usize, neg: usize },
    }
    let mut plans: Vec<Plan> = Vec::with_capacity(n);
    let mut next_col = 0usize;
    for v in 0..n {
        let (lo, hi) = lp.bounds[v];
        let plan = if lo.is_finite() && hi.is_finite() && lo == hi {
            Plan::Fixed { value: lo }
        } else if lo.is_finite() && hi.is_finite() {
            let p = Plan::Ranged {
                col: next_col,
                shift: lo,
                range: hi - lo,
            };
            next_col += 1;
            p
        } else if lo.is_finite() {
            let p = Plan::Shifted {
                col: next_col,
                sign: 1.0,
                shift: lo,
            };
            next_col += 1;
            p
        } else if hi.is_finite() {
            let p = Plan::Shifted {
                col: next_col,
                sign: -1.0,
                shift: hi,
            };
            next_col += 1;
            p
        } else {
            let p = Plan::Free {
                pos: next_col,
                neg: next_col + 1,
            };
            next_col += 2;
            p
        };
        plans.push(plan);
    }
    let range_vars: Vec<usize> = (0..n)
        .filter(|&v| matches!(plans[v], Plan::Ranged { .. }))
        .collect();
    let num_le = lp.le.len();
    let num_rows = lp.eq.len() + num_le + range_vars.len();
    let num_cols = next_col + num_le + range_vars.len();

    let mut a = RealMatrix::zeros(num_rows, num_cols);
    let mut b = vec![0.0; num_rows];
    let mut c = vec![0.0; num_cols];

    let fill_row = |a: &mut RealMatrix, b: &mut [f64], r: usize, row: &[f64], rhs: f64| {
        let mut adj = rhs;
        for v in 0..n {
            let coef = row[v];
            if coef == 0.0 {
                continue;
            }
            match plans[v] {
                Plan::Fixed { value } => adj -= coef * value,
                Plan::Shifted { col, sign, shift } => {
                    adj -= coef * shift;
                    let cur = a.get(r, col);
                    a.set(r, col, cur + coef * sign);
                }
                Plan::Ranged { col, shift, .. } => {
                    adj -= coef * shift;
                    let cur = a.get(r, col);
                    a.set(r, col, cur + coef);
                }
                Plan::Free { pos, neg } => {
                    let cp = a.get(r, pos);
                    a.set(r, pos, cp + coef);
                    let cn = a.get(r, neg);
                    a.set(r, neg, cn - coef);
                }
            }
        }
        b[r] = adj;
    };

    let mut r = 0usize;
    for (row, rhs) in &lp.eq {
        fill_row(&mut a, &mut b, r, row, *rhs);
        r += 1;
    }
    for (k, (row, rhs)) in lp.le.iter().enumerate() {
        fill_row(&mut a, &mut b, r, row, *rhs);
        a.set(r, next_col + k, 1.0);
        r += 1;
    }
    for (k, &v) in range_vars.iter().enumerate() {
        if let Plan::Ranged { col, range, .. } = plans[v] {
            a.set(r, col, 1.0);
            a.set(r, next_col + num_le + k, 1.0);
            b[r] = range;
            r += 1;
        }
    }
    let mut const_obj = 0.0;
    for v in 0..n {
        let coef = lp.objective[v];
        if coef == 0.0 {
            continue;
        }
        match plans[v] {
            Plan::Fixed { value } => const_obj += coef * value,
            Plan::Shifted { col, sign, shift } => {
                const_obj += coef * shift;
                c[col] += coef * sign;
            }
            Plan::Ranged { col, shift, .. } => {
                const_obj += coef * shift;
                c[col] += coef;
            }
            Plan::Free { pos, neg } => {
                c[pos] += coef;
                c[neg] -= coef;
            }
        }
    }

    let res = solve_lp_opts(
        &StandardFormLP::new(a, b, c)?,
        tol,
        SolveOptions {
            assume_independent_rows: lp.assume_independent_rows,
            skip_duals: true,
        },
    )?;
    Ok(match res {
        LpResult::Optimal(s) => {
            let mut x = vec![0.0; n];
            for v in 0..n {
                x[v] = match plans[v] {
                    Plan::Fixed { value } => value,
                    Plan::Shifted { col, sign, shift } => shift + sign * s.x[col],
                    Plan::Ranged { col, shift, .. } => shift + s.x[col],
                    Plan::Free { pos, neg } => s.x[pos] - s.x[neg],
                };
            }
            let objective = s.objective + const_obj;
            LpResult::Optimal(LpSolution {
                x,
                objective,
                dual: Vec::new(),
                reduced_costs: Vec::new(),
                basis: Vec::new(),
            })
        }
        other => other,
    })
}

/// Mixed-binary program: a [`GeneralLP`] plus a set of binary variables.
#[derive(Debug, Clone)]
pub struct MixedBinaryProgram {
    pub lp: GeneralLP,
    pub binary_indices: Vec<usize>,
    pub node_limit: usize,
    /// Optional per-variable branching priority (higher first); empty
    /// means plain most-fractional branching.
    pub branch_priority: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct MbpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub nodes_explored: usize,
    /// False when the node limit stopped the search or an early-exit
    /// threshold returned the incumbent before the tree was exhausted.
    pub proven_optimal: bool,
}

#[derive(Debug, Clone)]
pub enum MbpResult {
    Solved(MbpSolution),
    Infeasible,
}

#[derive(Debug, Clone)]
pub enum MbpError {
    Lp(LpError),
    /// Node limit hit with no incumbent found.
    NodeLimitExhausted,
    UnboundedRelaxation,
}

impl fmt::Display for MbpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MbpError::Lp(e) => write!(f, "node LP failed: {e}"),
            MbpError::NodeLimitExhausted => write!(f, "node limit exhausted with no incumbent"),
            MbpError::UnboundedRelaxation => write!(f, "LP relaxation unbounded"),
        }
    }
}

impl std::error::Error for MbpError {}

impl From<LpError> for MbpError {
    fn from(e: LpError) -> Self {
        MbpError::Lp(e)
    }
}

/// Search controls. `early_exit_below`: return the first incumbent whose
/// objective is at or below the threshold. `prune_bound_at`: discard nodes
/// whose relaxation bound is at or above the threshold (useful for proving
/// that no solution beats it).
#[derive(Debug, Clone, Copy, Default)]
pub struct MbpOptions {
    pub early_exit_below: Option<f64>,
    pub prune_bound_at: Option<f64>,
}

const INT_TOL: f64 = 1e-6;

/// Depth-first branch and bound on the binary variables.
///
/// A relaxation solution is accepted when every binary is integral within
/// `1e-6`, or when a rounding of the binaries keeps the continuous part
/// feasible (binaries that do not price into the objective make this a
/// cheap, exact acceptance test). Branching picks the most fractional
/// binary, lowest index on ties.
pub fn solve_mbp(
    p: &MixedBinaryProgram,
    tol: &ToleranceConfig,
    opts: MbpOptions,
) -> Result<MbpResult, MbpError> {
    if p.node_limit == 0 {
        return Err(MbpError::NodeLimitExhausted);
    }
    for &j in &p.binary_indices {
        debug_assert!(j < p.lp.num_vars);
        // an upper bound above 1 is fine as long as some row implies τ ≤ 1
        debug_assert!(p.lp.bounds[j].0 >= 0.0 - 1e-12);
    }

    let mut stack = vec![Node { fixes: Vec::new() }];
    let mut incumbent: Option<MbpSolution> = None;
    let mut nodes = 0usize;
    let mut exhausted = true;

    while let Some(node) = stack.pop() {
        if nodes >= p.node_limit {
            exhausted = false;
            break;
        }
        nodes += 1;
        let node_t0 = std::time::Instant::now();
        let mut lp = p.lp.clone();
        for &(j, v) in &node.fixes {
            lp.bounds[j] = (v, v);
        }
        let res = solve_general(&lp, tol)?;
        if std::env::var("PROBELP_DEBUG_NODELP").is_ok() && nodes % 500 == 0 {
            eprintln!("node {nodes}: lp {:?} fixes={}", node_t0.elapsed(), node.fixes.len());
        }
        let sol = match res {
            LpResult::Optimal(s) => s,
            LpResult::Infeasible => continue,
            LpResult::Unbounded => return Err(MbpError::UnboundedRelaxation),
        };
        let bound = sol.objective;
        if let Some(pb) = opts.prune_bound_at {
            if bound >= pb {
                continue;
            }
        }
        if let Some(ref inc) = incumbent {
            if bound >= inc.objective - 1e-9 * (1.0 + inc.objective.abs()) {
                continue;
            }
        }
        let accepted = accept_candidate(p, &lp, &sol, tol);
        if let Some(snapped) = accepted {
            // Certify the incumbent: re-solve with every binary pinned to
            // its snapped value so big-M rows hold exactly, not merely
            // within the row tolerance.
            let needs_repair = p
                .binary_indices
                .iter()
                .any(|&j| (sol.x[j] - snapped[j]).abs() > 1e-9);
            let x = if needs_repair {
                let mut fixed = lp.clone();
                for &j in &p.binary_indices {
                    fixed.bounds[j] = (snapped[j], snapped[j]);
                }
                match solve_general(&fixed, tol)? {
                    LpResult::Optimal(s) if feasible_point(&fixed, &s.x, tol) => s.x,
                    LpResult::Unbounded => return Err(MbpError::UnboundedRelaxation),
                    _ => {
                        // the snap was an artifact of row tolerances
                        branch(p, &node, &sol, &mut stack);
                        continue;
                    }
                }
            } else {
                snapped
            };
            let cand = MbpSolution {
                objective: numlin::dot(&p.lp.objective, &x),
                x,
                nodes_explored: nodes,
                proven_optimal: false,
            };
            let better = incumbent
                .as_ref()
                .map(|inc| cand.objective < inc.objective)
                .unwrap_or(true);
            if better {
                if let Some(th) = opts.early_exit_below {
                    if cand.objective <= th {
                        let mut c = cand;
                        c.nodes_explored = nodes;
                        return Ok(MbpResult::Solved(c));
                    }
                }
                incumbent = Some(cand);
            }
            continue;
        }
        branch(p, &node, &sol, &mut stack);
    }

    match incumbent {
        Some(mut s) => {
            s.nodes_explored = nodes;
            s.proven_optimal = exhausted;
            Ok(MbpResult::Solved(s))
        }
        None if exhausted => Ok(MbpResult::Infeasible),
        None => Err(MbpError::NodeLimitExhausted),
    }
}

struct Node {
    fixes: Vec<(usize, f64)>,
}

/// Split on the highest-priority fractional binary (most fractional within
/// a priority class, lowest index on ties); the nearer value is explored
/// first. No candidate means an integral-yet-unacceptable leaf: dead end.
fn branch(p: &MixedBinaryProgram, node: &Node, sol: &LpSolution, stack: &mut Vec<Node>) {
    let mut pick: Option<(f64, f64, usize)> = None;
    for &j in &p.binary_indices {
        if node.fixes.iter().any(|&(k, _)| k == j) {
            continue;
        }
        let frac = (sol.x[j] - sol.x[j].round()).abs();
        if frac <= INT_TOL {
            continue;
        }
        let prio = p.branch_priority.get(j).copied().unwrap_or(0.0);
        let better = match pick {
            None => true,
            Some((bp, bf, _)) => prio > bp + 1e-12 || (prio >= bp - 1e-12 && frac > bf + 1e-12),
        };
        if better {
            pick = Some((prio, frac, j));
        }
    }
    let (_, _, j) = match pick {
        Some(p) => p,
        None => return,
    };
    let near = sol.x[j].round().clamp(0.0, 1.0);
    let far = 1.0 - near;
    let mut fixes_far = node.fixes.clone();
    fixes_far.push((j, far));
    let mut fixes_near = node.fixes.clone();
    fixes_near.push((j, near));
    stack.push(Node { fixes: fixes_far });
    stack.push(Node { fixes: fixes_near }); // explored first
}

/// Integrality acceptance with a rounding fallback: if some binaries sit at
/// fractional values, try snapping each to an integer that keeps all rows
/// and bounds feasible at the fixed continuous solution.
fn accept_candidate(
    p: &MixedBinaryProgram,
    node_lp: &GeneralLP,
    sol: &LpSolution,
    tol: &ToleranceConfig,
) -> Option<Vec<f64>> {
    let mut x = sol.x.clone();
    let fractional: Vec<usize> = p
        .binary_indices
        .iter()
        .copied()
        .filter(|&j| (x[j] - x[j].round()).abs() > INT_TOL)
        .collect();
    if fractional.is_empty() {
        for &j in &p.binary_indices {
            x[j] = x[j].round();
        }
        return Some(x);
    }
    for &j in &fractional {
        let mut ok = false;
        for v in [x[j].round().clamp(0.0, 1.0), 1.0 - x[j].round().clamp(0.0, 1.0)] {
            let prev = x[j];
            x[j] = v;
            if check_rows_for_var(node_lp, &x, j, tol) {
                ok = true;
                break;
            }
            x[j] = prev;
        }
        if !ok {
            return None;
        }
    }
    // Full feasibility check of the snapped point.
    if feasible_point(node_lp, &x, tol) {
        for &j in &p.binary_indices {
            x[j] = x[j].round();
        }
        Some(x)
    } else {
        None
    }
}

fn check_rows_for_var(lp: &GeneralLP, x: &[f64], var: usize, tol: &ToleranceConfig) -> bool {
    let (lo, hi) = lp.bounds[var];
    if x[var] < lo - tol.feas_tol || x[var] > hi + tol.feas_tol {
        return false;
    }
    for (row, rhs) in &lp.eq {
        if row[var] == 0.0 {
            continue;
        }
        let v = numlin::dot(row, x);
        if (v - rhs).abs() > tol.feas_tol * (1.0 + rhs.abs()) {
            return false;
        }
    }
    for (row, rhs) in &lp.le {
        if row[var] == 0.0 {
            continue;
        }
        let v = numlin::dot(row, x);
        if v > rhs + tol.feas_tol * (1.0 + rhs.abs()) {
            return false;
        }
    }
    true
}

fn feasible_point(lp: &GeneralLP, x: &[f64], tol: &ToleranceConfig) -> bool {
    for (v, &(lo, hi)) in x.iter().zip(lp.bounds.iter()) {
        if *v < lo - tol.feas_tol || *v > hi + tol.feas_tol {
            return false;
        }
    }
    for (row, rhs) in &lp.eq {
        let v = numlin::dot(row, x);
        if (v - rhs).abs() > tol.feas_tol * (1.0 + rhs.abs()) {
            return false;
        }
    }
    for (row, rhs) in &lp.le {
        let v = numlin::dot(row, x);
        if v > rhs + tol.feas_tol * (1.0 + rhs.abs()) {
            return false;
        }
    }
    true
}
