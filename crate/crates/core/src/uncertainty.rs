//! Uncertainty sets for the cost vector: closed polyhedral carriers over
//! lifted variables `w = (c, aux)` together with a relative-interior
//! interpretation flag.
//!
//! Relatively open sets have no finite inequality representation, so they
//! are carried as the relative interior of a closed polyhedron; strictness
//! is realized by a margin (`strict_margin · scale`) in feasibility
//! subproblems. Lifted sets are never projected; every LP runs in the
//! lifted variables with `c` as a sub-block.

use crate::lp::{self, GeneralLP, LpError, LpResult};
use crate::numlin::{self, NumlinError, RealMatrix, Subspace, ToleranceConfig};
use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpretation {
    /// The set is the relative interior of the carrier.
    RelativeInterior,
    /// The set is the closed carrier itself.
    Closed,
    /// The carrier is exactly a linear subspace (equalities only).
    ExactVectorSpace,
    /// The carrier is a single point.
    Singleton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberMode {
    Closed,
    RelativeInterior,
}

#[derive(Debug, Clone)]
pub enum UncertaintyError {
    EmptyCarrier,
    EmptyAfterShrink,
    Shape(String),
    WrongInterpretation(&'static str),
    Lp(LpError),
    Numeric(NumlinError),
}

impl fmt::Display for UncertaintyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UncertaintyError::EmptyCarrier => write!(f, "uncertainty carrier is empty"),
            UncertaintyError::EmptyAfterShrink => {
                write!(f, "carrier became empty after shrinking; reduce the margin")
            }
            UncertaintyError::Shape(s) => write!(f, "shape error: {s}"),
            UncertaintyError::WrongInterpretation(s) => {
                write!(f, "operation requires interpretation {s}")
            }
            UncertaintyError::Lp(e) => write!(f, "lp solve failed: {e}"),
            UncertaintyError::Numeric(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl std::error::Error for UncertaintyError {}

impl From<LpError> for UncertaintyError {
    fn from(e: LpError) -> Self {
        UncertaintyError::Lp(e)
    }
}

impl From<NumlinError> for UncertaintyError {
    fn from(e: NumlinError) -> Self {
        UncertaintyError::Numeric(e)
    }
}

/// Linear hull and relative-interior data of the c-projection of a carrier.
#[derive(Debug, Clone)]
pub struct HullInfo {
    /// Linear hull of the c-block projection (the direction space of C).
    pub dir_c: Subspace,
    /// One c in the relative interior of the projection.
    pub affine_point: Vec<f64>,
    /// Inequality rows that hold with equality over the whole carrier.
    pub implicit_rows: Vec<usize>,
    /// Best uniform slack achievable on the non-implicit rows.
    pub max_uniform_slack: f64,
}

/// Set-based description of cost uncertainty over `w = (c, aux)`:
/// `{w : G w ≤ h, E w = f}` plus the interpretation flag.
#[derive(Debug)]
pub struct UncertaintySet {
    d: usize,
    aux_dim: usize,
    ineq: Vec<(Vec<f64>, f64)>,
    eq: Vec<(Vec<f64>, f64)>,
    interpretation: Interpretation,
    normalized: bool,
    hull: OnceLock<Result<HullInfo, UncertaintyError>>,
}

impl Clone for UncertaintySet {
    fn clone(&self) -> Self {
        UncertaintySet {
            d: self.d,
            aux_dim: self.aux_dim,
            ineq: self.ineq.clone(),
            eq: self.eq.clone(),
            interpretation: self.interpretation,
            normalized: self.normalized,
            hull: OnceLock::new(),
        }
    }
}

impl UncertaintySet {
    pub fn new(
        d: usize,
        aux_dim: usize,
        ineq: Vec<(Vec<f64>, f64)>,
        eq: Vec<(Vec<f64>, f64)>,
        interpretation: Interpretation,
    ) -> Result<Self, UncertaintyError> {
        let w = d + aux_dim;
        for (row, _) in ineq.iter().chain(eq.iter()) {
            if row.len() != w {
                return Err(UncertaintyError::Shape(format!(
                    "carrier row length {} != {}",
                    row.len(),
                    w
                )));
            }
        }
        if interpretation == Interpretation::ExactVectorSpace && !ineq.is_empty() {
            return Err(UncertaintyError::WrongInterpretation(
                "exact-vector-space carriers take equalities only",
            ));
        }
        Ok(UncertaintySet {
            d,
            aux_dim,
            ineq,
            eq,
            interpretation,
            normalized: false,
            hull: OnceLock::new(),
        })
    }

    /// `C = R^d`.
    pub fn full_space(d: usize) -> Self {
        UncertaintySet {
            d,
            aux_dim: 0,
            ineq: Vec::new(),
            eq: Vec::new(),
            interpretation: Interpretation::RelativeInterior,
            normalized: false,
            hull: OnceLock::new(),
        }
    }

    /// The subspace spanned by `vectors`.
    pub fn vector_space(
        d: usize,
        vectors: &[Vec<f64>],
        tol: &ToleranceConfig,
    ) -> Result<Self, UncertaintyError> {
        let span = numlin::orthonormalize_in(d, vectors, tol)?;
        let eq = span
            .complement()
            .basis()
            .iter()
            .map(|u| (u.clone(), 0.0))
            .collect();
        Ok(UncertaintySet {
            d,
            aux_dim: 0,
            ineq: Vec::new(),
            eq,
            interpretation: Interpretation::ExactVectorSpace,
            normalized: false,
            hull: OnceLock::new(),
        })
    }

    pub fn singleton(c0: &[f64]) -> Self {
        let d = c0.len();
        let eq = (0..d)
            .map(|i| (numlin::canonical(d, i), c0[i]))
            .collect();
        UncertaintySet {
            d,
            aux_dim: 0,
            ineq: Vec::new(),
            eq,
            interpretation: Interpretation::Singleton,
            normalized: false,
            hull: OnceLock::new(),
        }
    }

    /// Axis-aligned box `lo ≤ c ≤ hi`, taken as its relative interior.
    /// Coordinates with `lo = hi` become equalities.
    pub fn box_set(lo: &[f64], hi: &[f64]) -> Result<Self, UncertaintyError> {
        if lo.len() != hi.len() {
            return Err(UncertaintyError::Shape("box bound lengths differ".into()));
        }
        let d = lo.len();
        let mut ineq = Vec::new();
        let mut eq = Vec::new();
        for i in 0..d {
            if lo[i] > hi[i] {
                return Err(UncertaintyError::EmptyCarrier);
            }
            if lo[i] == hi[i] {
                eq.push((numlin::canonical(d, i), lo[i]));
            } else {
                ineq.push((numlin::canonical(d, i), hi[i]));
                ineq.push((numlin::scale(-1.0, &numlin::canonical(d, i)), -lo[i]));
            }
        }
        let interpretation = if ineq.is_empty() {
            Interpretation::Singleton
        } else {
            Interpretation::RelativeInterior
        };
        Ok(UncertaintySet {
            d,
            aux_dim: 0,
            ineq,
            eq,
            interpretation,
            normalized: false,
            hull: OnceLock::new(),
        })
    }

    pub fn cost_dim(&self) -> usize {
        self.d
    }

    pub fn aux_dim(&self) -> usize {
        self.aux_dim
    }

    pub fn lifted_dim(&self) -> usize {
        self.d + self.aux_dim
    }

    pub fn interpretation(&self) -> Interpretation {
        self.interpretation
    }

    pub fn with_interpretation(mut self, interpretation: Interpretation) -> Self {
        self.interpretation = interpretation;
        self.hull = OnceLock::new();
        self
    }

    pub fn was_normalized(&self) -> bool {
        self.normalized
    }

    pub fn ineq_rows(&self) -> &[(Vec<f64>, f64)] {
        &self.ineq
    }

    pub fn eq_rows(&self) -> &[(Vec<f64>, f64)] {
        &self.eq
    }

    /// Margin scale: relative margins are multiplied by `1 + ‖h‖∞` so they
    /// survive badly scaled carriers.
    pub fn scale(&self) -> f64 {
        1.0 + self
            .ineq
            .iter()
            .map(|(_, h)| h.abs())
            .fold(0.0_f64, f64::max)
    }

    fn feasibility_lp(&self) -> GeneralLP {
        let w = self.lifted_dim();
        let mut lp = GeneralLP::new(w);
        for (row, rhs) in &self.eq {
            lp.push_eq(row.clone(), *rhs);
        }
        for (row, rhs) in &self.ineq {
            lp.push_le(row.clone(), *rhs);
        }
        lp
    }

    pub fn is_nonempty(&self, tol: &ToleranceConfig) -> Result<bool, UncertaintyError> {
        let lp = self.feasibility_lp();
        Ok(!matches!(lp::solve_general(&lp, tol)?, LpResult::Infeasible))
    }

    /// Linear hull, relative-interior point and implicit rows of the
    /// c-projection. Cached on first use.
    pub fn hull(&self, tol: &ToleranceConfig) -> Result<&HullInfo, UncertaintyError> {
        let res = self.hull.get_or_init(|| self.hull_impl(tol));
        match res {
            Ok(h) => Ok(h),
            Err(e) => Err(e.clone()),
        }
    }

    fn hull_impl(&self, tol: &ToleranceConfig) -> Result<HullInfo, UncertaintyError> {
        if !self.is_nonempty(tol)? {
            return Err(UncertaintyError::EmptyCarrier);
        }
        let w = self.lifted_dim();
        let scale = self.scale();

        // Row i is implicit iff g_i w = h_i over the whole carrier,
        // i.e. min g_i w ≥ h_i (max equals h_i by feasibility).
        let mut implicit = Vec::new();
        for (i, (row, rhs)) in self.ineq.iter().enumerate() {
            let mut lp = self.feasibility_lp();
            lp.objective = row.clone();
            match lp::solve_general(&lp, tol)? {
                LpResult::Optimal(s) => {
                    if s.objective >= rhs - tol.feas_tol * scale {
                        implicit.push(i);
                    }
                }
                LpResult::Unbounded => {}
                LpResult::Infeasible => return Err(UncertaintyError::EmptyCarrier),
            }
        }

        // dir C: kernel of the stacked equality system (explicit equalities
        // plus implicit rows), projected onto the c-block. Linear images of
        // linear hulls are the hulls of the images.
        let mut eq_rows: Vec<Vec<f64>> = self.eq.iter().map(|(r, _)| r.clone()).collect();
        for &i in &implicit {
            eq_rows.push(self.ineq[i].0.clone());
        }
        let lifted_kernel = if eq_rows.is_empty() {
            Subspace::full(w)
        } else {
            let m = RealMatrix::from_rows(&eq_rows)?;
            crate::geometry::kernel_of(&m, tol)?
        };
        let projected: Vec<Vec<f64>> = lifted_kernel
            .basis()
            .iter()
            .map(|v| v[..self.d].to_vec())
            .collect();
        let dir_c = numlin::orthonormalize_in(self.d, &projected, tol)?;

        // Relative-interior point: maximize a uniform slack t on the
        // non-implicit rows, with t capped to keep the LP bounded.
        let cap = scale;
        let mut lp = GeneralLP::new(w + 1);
        let t = w;
        for (row, rhs) in &self.eq {
            let mut r = row.clone();
            r.push(0.0);
            lp.push_eq(r, *rhs);
        }
        for (i, (row, rhs)) in self.ineq.iter().enumerate() {
            let mut r = row.clone();
            r.push(if implicit.contains(&i) { 0.0 } else { 1.0 });
            lp.push_le(r, *rhs);
        }
        lp.bounds[t] = (0.0, cap);
        lp.objective = vec![0.0; w + 1];
        lp.objective[t] = -1.0;
        let sol = match lp::solve_general(&lp, tol)? {
            LpResult::Optimal(s) => s,
            _ => return Err(UncertaintyError::EmptyCarrier),
        };
        let affine_point = sol.x[..self.d].to_vec();
        Ok(HullInfo {
            dir_c,
            affine_point,
            implicit_rows: implicit,
            max_uniform_slack: -sol.objective,
        })
    }

    /// Membership of a cost vector, closed or relative-interior semantics.
    /// Lifted carriers are tested by LP feasibility over the aux block;
    /// aux-free carriers are tested arithmetically.
    pub fn member(
        &self,
        c: &[f64],
        mode: MemberMode,
        tol: &ToleranceConfig,
    ) -> Result<bool, UncertaintyError> {
        if c.len() != self.d {
            return Err(UncertaintyError::Shape(format!(
                "cost length {} != {}",
                c.len(),
                self.d
            )));
        }
        let scale = self.scale();
        let grace = tol.feas_tol * scale;
        let margin = match mode {
            MemberMode::Closed => 0.0,
            MemberMode::RelativeInterior => tol.strict_margin * scale,
        };
        let implicit: &[usize] = match mode {
            MemberMode::Closed => &[],
            MemberMode::RelativeInterior => &self.hull(tol)?.implicit_rows,
        };

        if self.aux_dim == 0 {
            for (row, rhs) in &self.eq {
                if (numlin::dot(row, c) - rhs).abs() > grace {
                    return Ok(false);
                }
            }
            for (i, (row, rhs)) in self.ineq.iter().enumerate() {
                let v = numlin::dot(row, c);
                if implicit.contains(&i) {
                    if (v - rhs).abs() > grace {
                        return Ok(false);
                    }
                } else if v > rhs - margin + grace {
                    return Ok(false);
                }
            }
            return Ok(true);
        }

        let mut lp = GeneralLP::new(self.aux_dim);
        for (row, rhs) in &self.eq {
            let shift = numlin::dot(&row[..self.d], c);
            lp.push_eq(row[self.d..].to_vec(), rhs - shift);
        }
        for (i, (row, rhs)) in self.ineq.iter().enumerate() {
            let shift = numlin::dot(&row[..self.d], c);
            let m = if implicit.contains(&i) { 0.0 } else { margin };
            lp.push_le(row[self.d..].to_vec(), rhs - shift - m + grace);
        }
        Ok(!matches!(lp::solve_general(&lp, tol)?, LpResult::Infeasible))
    }

    /// Membership under the set's own interpretation.
    pub fn member_interpreted(
        &self,
        c: &[f64],
        tol: &ToleranceConfig,
    ) -> Result<bool, UncertaintyError> {
        let mode = match self.interpretation {
            Interpretation::RelativeInterior => MemberMode::RelativeInterior,
            _ => MemberMode::Closed,
        };
        self.member(c, mode, tol)
    }

    /// Tighten every non-implicit inequality by `margin · scale`.
    /// Equalities and implicit rows are untouched.
    pub fn shrink(
        &self,
        margin: f64,
        tol: &ToleranceConfig,
    ) -> Result<UncertaintySet, UncertaintyError> {
        if margin < 0.0 {
            return Err(UncertaintyError::Shape("margin must be nonnegative".into()));
        }
        if self.ineq.is_empty() || margin == 0.0 {
            let mut c = self.clone();
            c.interpretation = match self.interpretation {
                Interpretation::RelativeInterior => Interpretation::Closed,
                other => other,
            };
            return Ok(c);
        }
        let implicit = self.hull(tol)?.implicit_rows.clone();
        let delta = margin * self.scale();
        let ineq = self
            .ineq
            .iter()
            .enumerate()
            .map(|(i, (row, rhs))| {
                let r = if implicit.contains(&i) { *rhs } else { rhs - delta };
                (row.clone(), r)
            })
            .collect();
        let out = UncertaintySet {
            d: self.d,
            aux_dim: self.aux_dim,
            ineq,
            eq: self.eq.clone(),
            interpretation: Interpretation::Closed,
            normalized: self.normalized,
            hull: OnceLock::new(),
        };
        if !out.is_nonempty(tol)? {
            return Err(UncertaintyError::EmptyAfterShrink);
        }
        Ok(out)
    }

    /// If the carrier is unbounded along some c-coordinate, intersect with
    /// the unit box along exactly those coordinates. Positive scaling leaves
    /// `argmin_{x∈X} cᵀx` unchanged, so the reachable-decision structure is
    /// preserved for conic carriers; the flag records that normalization
    /// happened so reports can disclose it.
    pub fn normalize_unbounded(
        &self,
        tol: &ToleranceConfig,
    ) -> Result<UncertaintySet, UncertaintyError> {
        let mut extra: Vec<(Vec<f64>, f64)> = Vec::new();
        let w = self.lifted_dim();
        for i in 0..self.d {
            for sign in [1.0, -1.0] {
                let mut lp = self.feasibility_lp();
                lp.objective = vec![0.0; w];
                lp.objective[i] = -sign;
                match lp::solve_general(&lp, tol)? {
                    LpResult::Unbounded => {
                        let mut row = vec![0.0; w];
                        row[i] = sign;
                        extra.push((row, 1.0));
                    }
                    LpResult::Optimal(_) => {}
                    LpResult::Infeasible => return Err(UncertaintyError::EmptyCarrier),
                }
            }
        }
        if extra.is_empty() {
            return Ok(self.clone());
        }
        let mut ineq = self.ineq.clone();
        ineq.extend(extra);
        Ok(UncertaintySet {
            d: self.d,
            aux_dim: self.aux_dim,
            ineq,
            eq: self.eq.clone(),
            interpretation: Interpretation::RelativeInterior,
            normalized: true,
            hull: OnceLock::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn hull_of_full_plane() {
        let c = UncertaintySet::full_space(2);
        let h = c.hull(&tol()).unwrap();
        assert!(h.dir_c.is_full());
        assert!(numlin::norm(&h.affine_point) < 1e-9);
        assert!(h.implicit_rows.is_empty());
    }

    #[test]
    fn hull_of_axis_subspace() {
        let c = UncertaintySet::vector_space(2, &[vec![1.0, 0.0]], &tol()).unwrap();
        let h = c.hull(&tol()).unwrap();
        assert_eq!(h.dir_c.dim(), 1);
        assert!(h.dir_c.contains(&[1.0, 0.0], &tol()).unwrap());
    }

    #[test]
    fn hull_of_lifted_carrier() {
        // w = (c1, c2, a): c1 = a, c2 = a, a in [0, 1]
        let c = UncertaintySet::new(
            2,
            1,
            vec![
                (vec![0.0, 0.0, 1.0], 1.0),
                (vec![0.0, 0.0, -1.0], 0.0),
            ],
            vec![
                (vec![1.0, 0.0, -1.0], 0.0),
                (vec![0.0, 1.0, -1.0], 0.0),
            ],
            Interpretation::RelativeInterior,
        )
        .unwrap();
        let h = c.hull(&tol()).unwrap();
        assert_eq!(h.dir_c.dim(), 1);
        assert!(h.dir_c.contains(&[1.0, 1.0], &tol()).unwrap());
        // cross-check by sampled differences: all carrier points are (a, a)
        assert!(c.member(&[0.5, 0.5], MemberMode::Closed, &tol()).unwrap());
        assert!(!c.member(&[0.5, 0.2], MemberMode::Closed, &tol()).unwrap());
    }

    #[test]
    fn implicit_row_detected() {
        // c1 <= 1 and -c1 <= -1 pin c1 = 1
        let c = UncertaintySet::new(
            2,
            0,
            vec![
                (vec![1.0, 0.0], 1.0),
                (vec![-1.0, 0.0], -1.0),
                (vec![0.0, 1.0], 1.0),
                (vec![0.0, -1.0], 0.0),
            ],
            vec![],
            Interpretation::RelativeInterior,
        )
        .unwrap();
        let h = c.hull(&tol()).unwrap();
        assert_eq!(h.implicit_rows, vec![0, 1]);
        assert_eq!(h.dir_c.dim(), 1);
        assert!(h.dir_c.contains(&[0.0, 1.0], &tol()).unwrap());
        // affine point respects the implicit equality and has interior c2
        assert!((h.affine_point[0] - 1.0).abs() < 1e-7);
        assert!(h.affine_point[1] > 0.1 && h.affine_point[1] < 0.9);
    }

    #[test]
    fn member_box_modes() {
        let c = UncertaintySet::box_set(&[0.9, 0.9], &[1.1, 1.1]).unwrap();
        assert!(c
            .member(&[1.0, 1.0], MemberMode::RelativeInterior, &tol())
            .unwrap());
        assert!(c.member(&[1.1, 1.0], MemberMode::Closed, &tol()).unwrap());
        assert!(!c
            .member(&[1.1, 1.0], MemberMode::RelativeInterior, &tol())
            .unwrap());
        assert!(!c.member(&[1.2, 1.0], MemberMode::Closed, &tol()).unwrap());
    }

    #[test]
    fn shrink_box() {
        let c = UncertaintySet::box_set(&[0.0, 0.0], &[2.0, 2.0]).unwrap();
        // scale = 3, so margin 0.5/3 gives an absolute 0.5 shrink
        let s = c.shrink(0.5 / 3.0, &tol()).unwrap();
        assert!(s.member(&[0.5, 0.5], MemberMode::Closed, &tol()).unwrap());
        assert!(s.member(&[1.5, 1.5], MemberMode::Closed, &tol()).unwrap());
        assert!(!s.member(&[0.4, 1.0], MemberMode::Closed, &tol()).unwrap());
    }

    #[test]
    fn shrink_vector_space_unchanged() {
        let c = UncertaintySet::vector_space(2, &[vec![1.0, 0.0]], &tol()).unwrap();
        let s = c.shrink(0.1, &tol()).unwrap();
        assert!(s.member(&[5.0, 0.0], MemberMode::Closed, &tol()).unwrap());
        assert!(!s.member(&[0.0, 1.0], MemberMode::Closed, &tol()).unwrap());
    }

    #[test]
    fn shrink_halfspace_excludes_tie() {
        // c1 <= c2 shrunk: the tie hyperplane is excluded
        let c = UncertaintySet::new(
            2,
            0,
            vec![(vec![1.0, -1.0], 0.0)],
            vec![],
            Interpretation::RelativeInterior,
        )
        .unwrap();
        let s = c.shrink(0.1, &tol()).unwrap();
        assert!(s.member(&[-1.0, 1.0], MemberMode::Closed, &tol()).unwrap());
        assert!(!s.member(&[0.0, 0.0], MemberMode::Closed, &tol()).unwrap());
        assert!(!s.member(&[1.0, -1.0], MemberMode::Closed, &tol()).unwrap());
    }

    #[test]
    fn shrink_empty_errors() {
        let c = UncertaintySet::box_set(&[0.0, 0.0], &[0.1, 0.1]).unwrap();
        assert!(matches!(
            c.shrink(0.5, &tol()),
            Err(UncertaintyError::EmptyAfterShrink)
        ));
    }

    #[test]
    fn normalize_full_space() {
        let c = UncertaintySet::full_space(3);
        let n = c.normalize_unbounded(&tol()).unwrap();
        assert!(n.was_normalized());
        assert_eq!(n.interpretation(), Interpretation::RelativeInterior);
        assert!(n.member(&[0.9, -0.9, 0.0], MemberMode::Closed, &tol()).unwrap());
        assert!(!n.member(&[1.5, 0.0, 0.0], MemberMode::Closed, &tol()).unwrap());
    }

    #[test]
    fn normalize_bounded_box_unchanged() {
        let c = UncertaintySet::box_set(&[0.0, 0.0], &[2.0, 2.0]).unwrap();
        let n = c.normalize_unbounded(&tol()).unwrap();
        assert!(!n.was_normalized());
        assert!(n.member(&[1.9, 1.9], MemberMode::Closed, &tol()).unwrap());
    }

    #[test]
    fn normalize_positive_orthant() {
        let d = 3;
        let ineq = (0..d)
            .map(|i| (numlin::scale(-1.0, &numlin::canonical(d, i)), 0.0))
            .collect();
        let c = UncertaintySet::new(d, 0, ineq, vec![], Interpretation::Closed).unwrap();
        let n = c.normalize_unbounded(&tol()).unwrap();
        assert!(n.was_normalized());
        assert!(n.member(&[0.5, 0.5, 0.5], MemberMode::Closed, &tol()).unwrap());
        assert!(!n.member(&[1.5, 0.5, 0.5], MemberMode::Closed, &tol()).unwrap());
        assert!(!n.member(&[-0.5, 0.5, 0.5], MemberMode::Closed, &tol()).unwrap());
    }

    #[test]
    fn affine_point_is_relint_member() {
        let sets = vec![
            UncertaintySet::box_set(&[0.0, 0.0], &[2.0, 2.0]).unwrap(),
            UncertaintySet::full_space(2).normalize_unbounded(&tol()).unwrap(),
            UncertaintySet::vector_space(2, &[vec![1.0, 1.0]], &tol()).unwrap(),
        ];
        for c in sets {
            let h = c.hull(&tol()).unwrap().clone();
            assert!(c
                .member(&h.affine_point, MemberMode::RelativeInterior, &tol())
                .unwrap());
        }
    }

    #[test]
    fn shrink_preserves_dir_c() {
        let c = UncertaintySet::box_set(&[0.0, 0.0], &[2.0, 2.0]).unwrap();
        let s = c.shrink(0.05, &tol()).unwrap();
        let d1 = &c.hull(&tol()).unwrap().dir_c;
        let d2 = &s.hull(&tol()).unwrap().dir_c;
        assert!(d1.equals_with_tol(d2, 1e-8));
    }

    #[test]
    fn vector_space_dir_and_complement() {
        let c = UncertaintySet::vector_space(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], &tol())
            .unwrap();
        let h = c.hull(&tol()).unwrap();
        assert_eq!(h.dir_c.dim(), 2);
        let comp = h.dir_c.complement();
        assert!(comp.contains(&[0.0, 0.0, 1.0], &tol()).unwrap());
    }

    #[test]
    fn singleton_hull() {
        let c = UncertaintySet::singleton(&[1.0, 3.0]);
        let h = c.hull(&tol()).unwrap();
        assert_eq!(h.dir_c.dim(), 0);
        assert!((h.affine_point[0] - 1.0).abs() < 1e-9);
        assert!((h.affine_point[1] - 3.0).abs() < 1e-9);
    }
}
