//! Dense real linear algebra and subspace arithmetic.
//!
//! Everything in this crate runs at desk scale (dimensions up to a few
//! hundred), so the representations are plain row-major `Vec<f64>` buffers
//! and the algorithms are the classical dense ones: modified Gram-Schmidt
//! with a re-orthogonalization pass, Gaussian elimination with partial
//! pivoting, and cyclic Jacobi for symmetric eigenvalues.

use std::fmt;

/// Numerical tolerances shared across the crate.
///
/// * `feas_tol` bounds constraint residuals accepted as feasible.
/// * `rank_tol` is the relative threshold below which a vector counts as
///   linearly dependent.
/// * `strict_margin` is the relative slack used to realize relative-interior
///   (strict inequality) semantics inside LP and MILP subproblems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub feas_tol: f64,
    pub rank_tol: f64,
    pub strict_margin: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            feas_tol: 1e-7,
            rank_tol: 1e-7,
            strict_margin: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<(), NumlinError> {
        if self.feas_tol <= 0.0 || self.rank_tol <= 0.0 || self.strict_margin <= 0.0 {
            return Err(NumlinError::InvalidTolerance);
        }
        if self.rank_tol >= 1.0 {
            return Err(NumlinError::InvalidTolerance);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NumlinError {
    DimensionMismatch { expected: usize, got: usize },
    EmptyMatrix,
    NonFinite,
    InvalidTolerance,
    /// Iterative eigenvalue computation failed to converge.
    NumericalInstability,
}

impl fmt::Display for NumlinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumlinError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            NumlinError::EmptyMatrix => write!(f, "matrix has no entries"),
            NumlinError::NonFinite => write!(f, "non-finite entry"),
            NumlinError::InvalidTolerance => write!(f, "tolerances must be positive (rank_tol < 1)"),
            NumlinError::NumericalInstability => {
                write!(f, "iterative computation did not converge")
            }
        }
    }
}

impl std::error::Error for NumlinError {}

/// Dense row-major matrix of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RealMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, NumlinError> {
        if rows.is_empty() {
            return Ok(RealMatrix::zeros(0, 0));
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(NumlinError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            for &v in r {
                if !v.is_finite() {
                    return Err(NumlinError::NonFinite);
                }
                data.push(v);
            }
        }
        Ok(RealMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> RealMatrix {
        let mut t = RealMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>, NumlinError> {
        if v.len() != self.cols {
            return Err(NumlinError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect())
    }

    pub fn matmul(&self, other: &RealMatrix) -> Result<RealMatrix, NumlinError> {
        if self.cols != other.rows {
            return Err(NumlinError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = RealMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| alpha * x).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

/// A linear subspace of `R^ambient` held as a mutually orthonormal basis.
/// The basis may be empty (the zero subspace).
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<f64>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| canonical(ambient, i)).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &[f64]) -> Result<Vec<f64>, NumlinError> {
        if v.len() != self.ambient {
            return Err(NumlinError::DimensionMismatch {
                expected: self.ambient,
                got: v.len(),
            });
        }
        let mut out = vec![0.0; self.ambient];
        for b in &self.basis {
            axpy(dot(b, v), b, &mut out);
        }
        Ok(out)
    }

    /// Residual of `v` after removing its projection onto the subspace.
    pub fn residual(&self, v: &[f64]) -> Result<Vec<f64>, NumlinError> {
        let p = self.project(v)?;
        Ok(sub(v, &p))
    }

    /// Membership test, relative to `rank_tol`:
    /// `v` is contained iff `‖v − P v‖ ≤ rank_tol · max(1, ‖v‖)`.
    pub fn contains(&self, v: &[f64], tol: &ToleranceConfig) -> Result<bool, NumlinError> {
        let r = self.residual(v)?;
        Ok(norm(&r) <= tol.rank_tol * norm(v).max(1.0))
    }

    pub fn contains_subspace(
        &self,
        inner: &Subspace,
        tol: &ToleranceConfig,
    ) -> Result<bool, NumlinError> {
        if inner.ambient != self.ambient {
            return Err(NumlinError::DimensionMismatch {
                expected: self.ambient,
                got: inner.ambient,
            });
        }
        for b in &inner.basis {
            if !self.contains(b, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Mutual containment within a user-supplied residual tolerance on unit
    /// vectors (equivalently, the sine of the largest principal angle).
    pub fn equals_with_tol(&self, other: &Subspace, residual_tol: f64) -> bool {
        if self.ambient != other.ambient || self.dim() != other.dim() {
            return false;
        }
        let t = ToleranceConfig {
            rank_tol: residual_tol,
            ..ToleranceConfig::default()
        };
        self.contains_subspace(other, &t).unwrap_or(false)
            && other.contains_subspace(self, &t).unwrap_or(false)
    }

    /// Orthogonal complement, built by sweeping the canonical basis.
    pub fn complement(&self) -> Subspace {
        let target = self.ambient - self.dim();
        let mut comp: Vec<Vec<f64>> = Vec::with_capacity(target);
        // The canonical basis spans the ambient space, so exactly
        // `ambient - dim` residuals survive. The threshold is adaptive:
        // if the sweep comes up short (near-degenerate basis), retry looser.
        let mut thresh = 1e-9;
        for _ in 0..4 {
            comp.clear();
            for i in 0..self.ambient {
                if comp.len() == target {
                    break;
                }
                let e = canonical(self.ambient, i);
                let mut r = sub(&e, &self.project(&e).expect("ambient checked"));
                for c in &comp {
                    let coef = dot(c, &r);
                    axpy(-coef, c, &mut r);
                }
                // one re-orthogonalization pass
                let mut r2 = sub(&r, &self.project(&r).expect("ambient checked"));
                for c in &comp {
                    let coef = dot(c, &r2);
                    axpy(-coef, c, &mut r2);
                }
                let n = norm(&r2);
                if n > thresh {
                    comp.push(scale(1.0 / n, &r2));
                }
            }
            if comp.len() == target {
                break;
            }
            thresh *= 1e-2;
        }
        debug_assert_eq!(comp.len(), target);
        Subspace {
            ambient: self.ambient,
            basis: comp,
        }
    }

    /// Span of the union of the two bases.
    pub fn sum(&self, other: &Subspace, tol: &ToleranceConfig) -> Result<Subspace, NumlinError> {
        if other.ambient != self.ambient {
            return Err(NumlinError::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        let mut vecs = self.basis.clone();
        vecs.extend(other.basis.iter().cloned());
        orthonormalize_in(self.ambient, &vecs, tol)
    }

    /// Intersection computed through complements:
    /// `S1 ∩ S2 = (S1^⊥ + S2^⊥)^⊥`.
    pub fn intersect(
        &self,
        other: &Subspace,
        tol: &ToleranceConfig,
    ) -> Result<Subspace, NumlinError> {
        let s = self.complement().sum(&other.complement(), tol)?;
        Ok(s.complement())
    }
}

pub fn canonical(ambient: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; ambient];
    e[i] = 1.0;
    e
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Vectors whose
/// residual drops below `rank_tol · max(1, ‖v‖)` are discarded as dependent.
pub fn orthonormalize(vectors: &[Vec<f64>], tol: &ToleranceConfig) -> Result<Subspace, NumlinError> {
    let ambient = match vectors.first() {
        Some(v) => v.len(),
        None => {
            return Ok(Subspace {
                ambient: 0,
                basis: Vec::new(),
            })
        }
    };
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        if v.len() != ambient {
            return Err(NumlinError::DimensionMismatch {
                expected: ambient,
                got: v.len(),
            });
        }
        let scale_v = norm(v).max(1.0);
        let mut r = v.clone();
        for b in &basis {
            let coef = dot(b, &r);
            axpy(-coef, b, &mut r);
        }
        for b in &basis {
            let coef = dot(b, &r);
            axpy(-coef, b, &mut r);
        }
        let n = norm(&r);
        if n > tol.rank_tol * scale_v {
            basis.push(scale(1.0 / n, &r));
        }
    }
    Ok(Subspace { ambient, basis })
}

/// Convenience: orthonormalize an empty-safe list in a known ambient
/// dimension (empty inputs are otherwise ambient-less).
pub fn orthonormalize_in(
    ambient: usize,
    vectors: &[Vec<f64>],
    tol: &ToleranceConfig,
) -> Result<Subspace, NumlinError> {
    if vectors.is_empty() {
        return Ok(Subspace::zero(ambient));
    }
    let s = orthonormalize(vectors, tol)?;
    if s.ambient != ambient {
        return Err(NumlinError::DimensionMismatch {
            expected: ambient,
            got: s.ambient,
        });
    }
    Ok(s)
}

/// Solve the square system `M x = rhs` by Gaussian elimination with partial
/// pivoting. Returns `None` when the matrix is singular at `pivot_tol`.
pub fn solve_square(m: &RealMatrix, rhs: &[f64], pivot_tol: f64) -> Option<Vec<f64>> {
    let n = m.nrows();
    if n != m.ncols() || rhs.len() != n {
        return None;
    }
    let mut a = m.clone();
    let mut b = rhs.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (piv, pval) = (k..n)
            .map(|i| (i, a.get(i, k).abs()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pval <= pivot_tol {
            return None;
        }
        if piv != k {
            for j in 0..n {
                let t = a.get(k, j);
                a.set(k, j, a.get(piv, j));
                a.set(piv, j, t);
            }
            b.swap(k, piv);
            perm.swap(k, piv);
        }
        for i in (k + 1)..n {
            let f = a.get(i, k) / a.get(k, k);
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                let v = a.get(i, j) - f * a.get(k, j);
                a.set(i, j, v);
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in (k + 1)..n {
            s -= a.get(k, j) * x[j];
        }
        x[k] = s / a.get(k, k);
    }
    Some(x)
}

/// Solve a (possibly rectangular, possibly rank-deficient) system
/// `M x = rhs` if it is consistent, returning one solution. Free variables
/// are set to zero. Returns `None` when the system is inconsistent at `tol`.
pub fn solve_consistent(m: &RealMatrix, rhs: &[f64], tol: f64) -> Option<Vec<f64>> {
    let rows = m.nrows();
    let cols = m.ncols();
    if rhs.len() != rows {
        return None;
    }
    // Augmented Gaussian elimination with partial pivoting.
    let mut a = m.clone();
    let mut b = rhs.to_vec();
    let scale_m = (0..rows)
        .map(|i| norm_inf(a.row(i)))
        .fold(1.0_f64, f64::max);
    let piv_tol = tol * scale_m;
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (piv, pval) = (r..rows)
            .map(|i| (i, a.get(i, c).abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pval <= piv_tol {
            continue;
        }
        if piv != r {
            for j in 0..cols {
                let t = a.get(r, j);
                a.set(r, j, a.get(piv, j));
                a.set(piv, j, t);
            }
            b.swap(r, piv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c) / a.get(r, c);
            if f == 0.0 {
                continue;
            }
            for j in 0..cols {
                let v = a.get(i, j) - f * a.get(r, j);
                a.set(i, j, v);
            }
            b[i] -= f * b[r];
        }
        pivot_cols.push(c);
        r += 1;
    }
    // Consistency: zero rows of A must have (near) zero rhs.
    let rhs_scale = norm_inf(rhs).max(1.0);
    for i in r..rows {
        if b[i].abs() > tol * rhs_scale * 10.0 {
            return None;
        }
    }
    let mut x = vec![0.0; cols];
    for (k, &c) in pivot_cols.iter().enumerate() {
        x[c] = b[k] / a.get(k, c);
    }
    // Verify.
    let res = m.matvec(&x).ok()?;
    let err: f64 = res
        .iter()
        .zip(rhs.iter())
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, f64::max);
    if err > tol * rhs_scale * 100.0 {
        return None;
    }
    Some(x)
}

/// Smallest singular value of a non-empty matrix, computed as the square
/// root of the smallest eigenvalue of the smaller Gram matrix (`M Mᵀ` when
/// rows ≤ cols, `Mᵀ M` otherwise).
pub fn smallest_singular_value(m: &RealMatrix) -> Result<f64, NumlinError> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(NumlinError::EmptyMatrix);
    }
    let gram = if m.nrows() <= m.ncols() {
        m.matmul(&m.transpose())?
    } else {
        m.transpose().matmul(m)?
    };
    let eigs = symmetric_eigenvalues(&gram)?;
    let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(min.max(0.0).sqrt())
}

/// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(m: &RealMatrix) -> Result<Vec<f64>, NumlinError> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(NumlinError::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = m.clone();
    let scale_a = (0..n)
        .map(|i| norm_inf(a.row(i)))
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let tol = 1e-14 * scale_a;
    let max_sweeps = 100;
    for _ in 0..max_sweeps {
        let mut off = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(a.get(i, j).abs());
            }
        }
        if off <= tol {
            return Ok((0..n).map(|i| a.get(i, i)).collect());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    Err(NumlinError::NumericalInstability)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn orthonormalize_collinear_pair() {
        let s = orthonormalize(&[vec![1.0, 0.0], vec![2.0, 0.0]], &tol()).unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.basis()[0][0].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormalize_empty() {
        let s = orthonormalize_in(3, &[], &tol()).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.ambient_dim(), 3);
    }

    #[test]
    fn orthonormalize_spans_plane() {
        let s = orthonormalize(&[vec![1.0, 1.0], vec![1.0, 0.0]], &tol()).unwrap();
        assert_eq!(s.dim(), 2);
        // derived check: both canonical vectors are contained
        assert!(s.contains(&[1.0, 0.0], &tol()).unwrap());
        assert!(s.contains(&[0.0, 1.0], &tol()).unwrap());
    }

    #[test]
    fn project_axis() {
        let s = orthonormalize(&[vec![1.0, 0.0]], &tol()).unwrap();
        let p = s.project(&[3.0, 4.0]).unwrap();
        assert!((p[0] - 3.0).abs() < 1e-12 && p[1].abs() < 1e-12);
    }

    #[test]
    fn project_full_space_is_identity() {
        let s = Subspace::full(2);
        let p = s.project(&[0.3, -0.7]).unwrap();
        assert!((p[0] - 0.3).abs() < 1e-12 && (p[1] + 0.7).abs() < 1e-12);
    }

    #[test]
    fn project_diagonal_least_squares() {
        // independent oracle: least squares of (1,0) on span{(1,1)}:
        // coefficient = <v,b>/<b,b> with b=(1,1) gives (0.5, 0.5).
        let b = vec![1.0, 1.0];
        let coef = dot(&b, &[1.0, 0.0]) / dot(&b, &b);
        let expect = scale(coef, &b);
        let s = orthonormalize(&[b.clone()], &tol()).unwrap();
        let p = s.project(&[1.0, 0.0]).unwrap();
        assert!((p[0] - expect[0]).abs() < 1e-12);
        assert!((p[1] - expect[1]).abs() < 1e-12);
    }

    #[test]
    fn complement_axis() {
        let s = orthonormalize(&[vec![1.0, 0.0]], &tol()).unwrap();
        let c = s.complement();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&[0.0, 1.0], &tol()).unwrap());
    }

    #[test]
    fn complement_full_is_zero() {
        let c = Subspace::full(3).complement();
        assert_eq!(c.dim(), 0);
    }

    #[test]
    fn complement_diagonal() {
        let s = orthonormalize(&[vec![1.0, 1.0]], &tol()).unwrap();
        let c = s.complement();
        assert_eq!(c.dim(), 1);
        // orthogonality check
        assert!(dot(&c.basis()[0], &s.basis()[0]).abs() < 1e-12);
        assert!(c.contains(&[1.0, -1.0], &tol()).unwrap());
    }

    #[test]
    fn sum_of_axes_is_plane() {
        let s1 = orthonormalize(&[vec![1.0, 0.0]], &tol()).unwrap();
        let s2 = orthonormalize(&[vec![0.0, 1.0]], &tol()).unwrap();
        assert_eq!(s1.sum(&s2, &tol()).unwrap().dim(), 2);
    }

    #[test]
    fn intersect_planes_in_r3() {
        let s1 = orthonormalize(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], &tol()).unwrap();
        let s2 = orthonormalize(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]], &tol()).unwrap();
        let i = s1.intersect(&s2, &tol()).unwrap();
        assert_eq!(i.dim(), 1);
        // membership both ways
        assert!(i.contains(&[0.0, 1.0, 0.0], &tol()).unwrap());
        assert!(s1.contains_subspace(&i, &tol()).unwrap());
        assert!(s2.contains_subspace(&i, &tol()).unwrap());
    }

    #[test]
    fn contains_rejects_off_axis() {
        let s = orthonormalize(&[vec![1.0, 0.0]], &tol()).unwrap();
        assert!(!s.contains(&[0.0, 1.0], &tol()).unwrap());
    }

    #[test]
    fn sigma_min_identity() {
        let m = RealMatrix::identity(2);
        assert!((smallest_singular_value(&m).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sigma_min_diagonal() {
        let m = RealMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        assert!((smallest_singular_value(&m).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn sigma_min_near_collinear_matches_quadratic_oracle() {
        let eps = 1e-4;
        let m = RealMatrix::from_rows(&[vec![1.0, 0.0], vec![1.0, eps]]).unwrap();
        // closed-form oracle: Gram = [[1,1],[1,1+e]], e = eps^2;
        // eigenvalues are roots of λ² − (2+e)λ + e.
        let e = eps * eps;
        let disc = ((2.0 + e) * (2.0 + e) - 4.0 * e).sqrt();
        let lam_min = (2.0 + e - disc) / 2.0;
        let expect = lam_min.sqrt();
        let got = smallest_singular_value(&m).unwrap();
        assert!((got - expect).abs() < 1e-8, "got {got}, expect {expect}");
    }

    #[test]
    fn solve_square_basic() {
        let m = RealMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = solve_square(&m, &[5.0, 10.0], 1e-12).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-10 && (x[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn solve_consistent_underdetermined() {
        let m = RealMatrix::from_rows(&[vec![1.0, 1.0, 0.0]]).unwrap();
        let x = solve_consistent(&m, &[2.0], 1e-10).unwrap();
        assert!((x[0] + x[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn solve_consistent_detects_inconsistency() {
        let m = RealMatrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(solve_consistent(&m, &[1.0, 2.0], 1e-10).is_none());
    }

    proptest! {
        #[test]
        fn projection_idempotent(vals in proptest::collection::vec(-10.0f64..10.0, 2..24)) {
            let d = 4usize.min(vals.len() / 2).max(2);
            let chunks: Vec<Vec<f64>> = vals.chunks(d).filter(|c| c.len() == d).map(|c| c.to_vec()).collect();
            prop_assume!(!chunks.is_empty());
            let (gen, v) = chunks.split_at(chunks.len().saturating_sub(1).max(1));
            let s = orthonormalize_in(d, gen, &ToleranceConfig::default()).unwrap();
            let target = if v.is_empty() { vec![1.0/8.0; d] } else { v[0].clone() };
            let p1 = s.project(&target).unwrap();
            let p2 = s.project(&p1).unwrap();
            let diff: f64 = p1.iter().zip(p2.iter()).map(|(a,b)| (a-b).abs()).fold(0.0, f64::max);
            prop_assert!(diff <= 1e-9);
        }

        #[test]
        fn complement_dims_add_up(vals in proptest::collection::vec(-5.0f64..5.0, 12..36)) {
            let d = 6usize;
            let chunks: Vec<Vec<f64>> = vals.chunks(d).filter(|c| c.len() == d).map(|c| c.to_vec()).collect();
            prop_assume!(!chunks.is_empty());
            let s = orthonormalize_in(d, &chunks, &ToleranceConfig::default()).unwrap();
            prop_assert_eq!(s.dim() + s.complement().dim(), d);
        }

        #[test]
        fn modular_dimension_law(vals in proptest::collection::vec(-3.0f64..3.0, 32..64)) {
            // dim(sum) + dim(intersect) = dim(S1) + dim(S2), dims <= 8
            let d = 8usize;
            let tol = ToleranceConfig::default();
            let chunks: Vec<Vec<f64>> = vals.chunks(d).filter(|c| c.len() == d).map(|c| c.to_vec()).collect();
            prop_assume!(chunks.len() >= 2);
            let half = chunks.len() / 2;
            let s1 = orthonormalize_in(d, &chunks[..half], &tol).unwrap();
            let s2 = orthonormalize_in(d, &chunks[half..], &tol).unwrap();
            let sum = s1.sum(&s2, &tol).unwrap();
            let inter = s1.intersect(&s2, &tol).unwrap();
            prop_assert_eq!(sum.dim() + inter.dim(), s1.dim() + s2.dim());
        }
    }
}
