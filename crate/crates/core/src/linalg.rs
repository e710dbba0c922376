//! Dense complex linear algebra at desk scale.
//!
//! Everything downstream works with small matrices (sides well below a few
//! hundred), so the representation is a plain row-major `Vec` of complex
//! entries. The conventions fixed here are load-bearing for the rest of the
//! crate:
//!
//! * Kronecker products are big-endian: the basis vector `e_i ⊗ e_j` of
//!   `V ⊗ W` sits at index `i * dim(W) + j`.
//! * `permutation_unitary(dims, perm)` sends tensor factor `j` to output
//!   position `perm[j]`, so `U(v_1 ⊗ … ⊗ v_n)` has `v_{perm⁻¹(i)}` in slot `i`.
//! * Positivity is tested on the Hermitian part with relative tolerances.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Scalar type used across the crate. Finiteness is enforced by every public
/// matrix constructor, so `NaN`/`Inf` never enter the numerics.
pub type Complex = Complex64;

/// Shorthand for a complex number from its parts.
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix of shape {0}x{1} cannot hold {2} entries")]
    EntryCount(usize, usize, usize),
    #[error("matrix entry {0} is not finite")]
    NonFinite(usize),
    #[error("matrix dimensions must be positive, got {0}x{1}")]
    ZeroDim(usize, usize),
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("factor dims multiply to {product}, matrix side is {side}")]
    DimMismatch { side: usize, product: usize },
    #[error("keep set must be strictly increasing and within factor range")]
    BadKeepSet,
    #[error("tolerance values must be positive and finite")]
    BadTolerance,
}

/// Comparison tolerances used by every approximate predicate.
///
/// `eps_eq` scales entrywise equality, `eps_psd` scales the eigenvalue
/// threshold in [`is_psd`]. Both are relative: the working threshold is
/// `eps * (1 + max_abs)` of the matrices involved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_eq: f64,
    pub eps_psd: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps_eq: 1e-9, eps_psd: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(eps_eq: f64, eps_psd: f64) -> Result<Self, LinalgError> {
        if !(eps_eq > 0.0 && eps_eq.is_finite() && eps_psd > 0.0 && eps_psd.is_finite()) {
            return Err(LinalgError::BadTolerance);
        }
        Ok(Tolerance { eps_eq, eps_psd })
    }

    /// Uniform tolerance for both thresholds.
    pub fn uniform(eps: f64) -> Result<Self, LinalgError> {
        Tolerance::new(eps, eps)
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = LinalgError;
    fn try_from(r: MatrixRepr) -> Result<Self, LinalgError> {
        let entries = r.entries.iter().map(|[re, im]| c(*re, *im)).collect();
        ComplexMatrix::new(r.rows, r.cols, entries)
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> MatrixRepr {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::ZeroDim(rows, cols));
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::EntryCount(rows, cols, entries.len()));
        }
        for (k, z) in entries.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(LinalgError::NonFinite(k));
            }
        }
        Ok(ComplexMatrix { rows, cols, entries })
    }

    /// Convenience constructor from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self, LinalgError> {
        ComplexMatrix::new(rows, cols, entries.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix { rows, cols, entries: vec![c(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c(1.0, 0.0));
        }
        m
    }

    pub fn from_diag(diag: &[Complex]) -> Self {
        let n = diag.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (i, z) in diag.iter().enumerate() {
            m.set(i, i, *z);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex) {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = z;
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "add: shape mismatch"
        );
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "sub: shape mismatch"
        );
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, z: Complex) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * z).collect(),
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul: inner dimensions {} and {} differ",
            self.cols, other.rows
        );
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex {
        assert_eq!(self.rows, self.cols, "trace: matrix is not square");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Hermitian part `(m + m†)/2`.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        assert_eq!(self.rows, self.cols, "hermitian_part: matrix is not square");
        self.add(&self.adjoint()).scale(c(0.5, 0.0))
    }
}

/// Entrywise comparison with threshold `eps_eq * (1 + max(|a|, |b|))`.
///
/// Panics on shape mismatch: comparing differently shaped matrices is a
/// programming error, not a runtime condition.
pub fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> bool {
    assert_eq!(
        (a.rows, a.cols),
        (b.rows, b.cols),
        "approx_eq: shape mismatch {}x{} vs {}x{}",
        a.rows,
        a.cols,
        b.rows,
        b.cols
    );
    let scale = 1.0 + a.max_abs().max(b.max_abs());
    let thr = tol.eps_eq * scale;
    a.entries
        .iter()
        .zip(&b.entries)
        .all(|(x, y)| (x - y).norm() <= thr)
}

/// Largest entrywise deviation between two equal-shaped matrices.
pub fn max_deviation(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "max_deviation: shape mismatch");
    a.entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Kronecker product with the big-endian index convention
/// `(A ⊗ B)[(i·rB + k), (j·cB + l)] = A[i,j] · B[k,l]`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let z = a.get(i, j);
            if z == c(0.0, 0.0) {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out.set(i * b.rows + k, j * b.cols + l, z * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Kronecker product of a list, folded left; the empty product is `[1]`.
pub fn tensor_all(ms: &[&ComplexMatrix]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(1);
    for m in ms {
        acc = tensor(&acc, m);
    }
    acc
}

#[inline]
fn decode_index(mut flat: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = flat % dims[k];
        flat /= dims[k];
    }
}

#[inline]
fn encode_index(multi: &[usize], dims: &[usize]) -> usize {
    let mut flat = 0;
    for (x, d) in multi.iter().zip(dims) {
        flat = flat * d + x;
    }
    flat
}

/// Partial trace over the factors *not* listed in `keep`.
///
/// `m` must be square of side `dims.iter().product()`; `keep` must be a
/// strictly increasing subset of factor indices. The kept factors retain
/// their original order.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NotSquare(m.rows, m.cols));
    }
    let side: usize = dims.iter().product();
    if side != m.rows {
        return Err(LinalgError::DimMismatch { side: m.rows, product: side });
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(LinalgError::BadKeepSet);
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let keep_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
    let trace_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let out_side: usize = keep_dims.iter().product::<usize>().max(1);
    let trace_count: usize = trace_dims.iter().product::<usize>().max(1);

    let mut out = ComplexMatrix::zeros(out_side.max(1), out_side.max(1));
    let n = dims.len();
    let mut row_multi = vec![0usize; n];
    let mut col_multi = vec![0usize; n];
    let mut kr = vec![0usize; keep.len()];
    let mut kc = vec![0usize; keep.len()];
    let mut t = vec![0usize; traced.len()];
    for r in 0..out_side {
        decode_index(r, &keep_dims, &mut kr);
        for cidx in 0..out_side {
            decode_index(cidx, &keep_dims, &mut kc);
            let mut acc = c(0.0, 0.0);
            for tt in 0..trace_count {
                decode_index(tt, &trace_dims, &mut t);
                for (pos, &f) in keep.iter().enumerate() {
                    row_multi[f] = kr[pos];
                    col_multi[f] = kc[pos];
                }
                for (pos, &f) in traced.iter().enumerate() {
                    row_multi[f] = t[pos];
                    col_multi[f] = t[pos];
                }
                acc += m.get(encode_index(&row_multi, dims), encode_index(&col_multi, dims));
            }
            out.set(r, cidx, acc);
        }
    }
    Ok(out)
}

/// Unitary that permutes tensor factors: factor `j` of the input moves to
/// position `perm[j]` of the output, so `U(v_1 ⊗ … ⊗ v_n)` carries
/// `v_{perm⁻¹(i)}` in slot `i`.
pub fn permutation_unitary(dims: &[usize], perm: &[usize]) -> ComplexMatrix {
    assert_eq!(dims.len(), perm.len(), "permutation_unitary: arity mismatch");
    let n = dims.len();
    let mut seen = vec![false; n];
    for &p in perm {
        assert!(p < n && !seen[p], "permutation_unitary: not a permutation");
        seen[p] = true;
    }
    let side: usize = dims.iter().product::<usize>().max(1);
    let mut out_dims = vec![0usize; n];
    for j in 0..n {
        out_dims[perm[j]] = dims[j];
    }
    let mut u = ComplexMatrix::zeros(side, side);
    let mut b = vec![0usize; n];
    let mut o = vec![0usize; n];
    for col in 0..side {
        decode_index(col, dims, &mut b);
        for j in 0..n {
            o[perm[j]] = b[j];
        }
        u.set(encode_index(&o, &out_dims), col, c(1.0, 0.0));
    }
    u
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in descending order with matching unit eigenvectors as
/// the columns of the second component. The input is symmetrised first, so
/// tiny non-Hermitian noise is tolerated; callers that need a strict
/// Hermitian check do it themselves (see [`is_psd`]).
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    assert!(m.is_square(), "hermitian_eigen: matrix is not square");
    let h = m.hermitian_part();
    let n = h.rows;
    let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| h.get(i, j));
    let se = nalgebra::linalg::SymmetricEigen::new(dm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[b]
            .partial_cmp(&se.eigenvalues[a])
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, col, se.eigenvectors[(i, k)]);
        }
    }
    (values, vectors)
}

/// Positive semidefinite test.
///
/// A matrix passes when it is Hermitian within `eps_eq * (1 + max_abs)`
/// entrywise and every eigenvalue of its Hermitian part is at least
/// `-eps_psd * (1 + max_abs)`. Non-Hermitian matrices are rejected before
/// any eigen-analysis.
pub fn is_psd(m: &ComplexMatrix, tol: &Tolerance) -> bool {
    if !m.is_square() {
        return false;
    }
    let scale = 1.0 + m.max_abs();
    let herm_thr = tol.eps_eq * scale;
    for i in 0..m.rows {
        for j in i..m.cols {
            if (m.get(i, j) - m.get(j, i).conj()).norm() > herm_thr {
                return false;
            }
        }
    }
    let (values, _) = hermitian_eigen(m);
    values.iter().all(|&v| v >= -tol.eps_psd * scale)
}

/// Inverse square root of a positive definite Hermitian matrix.
///
/// Eigenvalues below the relative cutoff are rejected with `None`; this is
/// used to normalise randomly generated Kraus families, where the Gram matrix
/// is almost surely well conditioned.
pub fn inv_sqrt_psd(m: &ComplexMatrix, tol: &Tolerance) -> Option<ComplexMatrix> {
    let (values, vectors) = hermitian_eigen(m);
    let scale = 1.0 + m.max_abs();
    if values.iter().any(|&v| v <= tol.eps_psd * scale) {
        return None;
    }
    let n = m.rows;
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let w = 1.0 / values[k].sqrt();
        for i in 0..n {
            for j in 0..n {
                let v = out.get(i, j) + vectors.get(i, k) * vectors.get(j, k).conj() * c(w, 0.0);
                out.set(i, j, v);
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn tensor_of_diagonals_is_frozen_diagonal() {
        let a = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let b = ComplexMatrix::from_diag(&[c(3.0, 0.0), c(4.0, 0.0)]);
        let expected = ComplexMatrix::from_diag(&[c(3.0, 0.0), c(4.0, 0.0), c(6.0, 0.0), c(8.0, 0.0)]);
        assert_eq!(tensor(&a, &b), expected);
    }

    #[test]
    fn tensor_index_convention_is_big_endian() {
        // e_1 ⊗ e_0 of C^2 ⊗ C^3 must sit at flat index 1*3 + 0 = 3.
        let e1 = ComplexMatrix::new(2, 1, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let f0 = ComplexMatrix::new(3, 1, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let v = tensor(&e1, &f0);
        for i in 0..6 {
            let expect = if i == 3 { 1.0 } else { 0.0 };
            assert_eq!(v.get(i, 0), c(expect, 0.0), "index {}", i);
        }
    }

    #[test]
    fn partial_trace_of_scaled_bell_projector_is_identity() {
        // 2 * |Φ+⟩⟨Φ+| has ones at (0,0), (0,3), (3,0), (3,3).
        let mut bell2 = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            bell2.set(i, j, c(1.0, 0.0));
        }
        let reduced = partial_trace(&bell2, &[2, 2], &[0]).unwrap();
        assert!(approx_eq(&reduced, &ComplexMatrix::identity(2), &tol()));
        let reduced_b = partial_trace(&bell2, &[2, 2], &[1]).unwrap();
        assert!(approx_eq(&reduced_b, &ComplexMatrix::identity(2), &tol()));
    }

    #[test]
    fn partial_trace_keeping_everything_is_identity_operation() {
        let m = ComplexMatrix::from_real(4, 4, &(0..16).map(|x| x as f64).collect::<Vec<_>>()).unwrap();
        let kept = partial_trace(&m, &[2, 2], &[0, 1]).unwrap();
        assert_eq!(kept, m);
        let all_traced = partial_trace(&m, &[2, 2], &[]).unwrap();
        assert_eq!(all_traced.get(0, 0), m.trace());
    }

    #[test]
    fn partial_trace_rejects_bad_inputs() {
        let m = ComplexMatrix::identity(4);
        assert_eq!(
            partial_trace(&m, &[2, 3], &[0]),
            Err(LinalgError::DimMismatch { side: 4, product: 6 })
        );
        assert_eq!(partial_trace(&m, &[2, 2], &[1, 0]), Err(LinalgError::BadKeepSet));
        assert_eq!(partial_trace(&m, &[2, 2], &[2]), Err(LinalgError::BadKeepSet));
    }

    #[test]
    fn three_cycle_permutation_unitary_cubes_to_identity() {
        let dims = [2, 2, 2];
        let u = permutation_unitary(&dims, &[1, 2, 0]);
        let u3 = u.matmul(&u).matmul(&u);
        assert_eq!(u3, ComplexMatrix::identity(8));
    }

    #[test]
    fn permutation_unitary_moves_factors_as_documented() {
        // swap on C^2 ⊗ C^3: factor 0 -> position 1, factor 1 -> position 0.
        let u = permutation_unitary(&[2, 3], &[1, 0]);
        let e1 = ComplexMatrix::new(2, 1, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let f2 = ComplexMatrix::new(3, 1, vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let v = tensor(&e1, &f2);
        let w = u.matmul(&v);
        let expected = tensor(&f2, &e1);
        assert!(approx_eq(&w, &expected, &tol()));
    }

    #[test]
    fn permutation_composition_is_covariant() {
        let dims = [2, 3, 2];
        let sigma = [2, 0, 1];
        let tau = [1, 2, 0];
        // applying tau then sigma sends factor j to sigma[tau[j]]
        let mut st = [0usize; 3];
        for j in 0..3 {
            st[j] = sigma[tau[j]];
        }
        let u_sigma_dims: Vec<usize> = {
            let mut d = vec![0; 3];
            for j in 0..3 {
                d[tau[j]] = dims[j];
            }
            d
        };
        let u = permutation_unitary(&u_sigma_dims, &sigma).matmul(&permutation_unitary(&dims, &tau));
        assert_eq!(u, permutation_unitary(&dims, &st));
    }

    #[test]
    fn is_psd_frozen_examples() {
        let t = tol();
        assert!(is_psd(&ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 0.0)]), &t));
        // eigenvalues 3 and -1
        let indefinite = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(!is_psd(&indefinite, &t));
        // non-Hermitian is rejected outright
        let nilpotent = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(!is_psd(&nilpotent, &t));
    }

    #[test]
    fn is_psd_tolerance_window() {
        let t = tol();
        let slightly_negative = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(-1e-12, 0.0)]);
        assert!(is_psd(&slightly_negative, &t));
        let clearly_negative = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(-1e-6, 0.0)]);
        assert!(!is_psd(&clearly_negative, &t));
    }

    #[test]
    fn hermitian_eigen_recovers_pauli_x() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let (values, vectors) = hermitian_eigen(&x);
        assert!((values[0] - 1.0).abs() < 1e-12);
        assert!((values[1] + 1.0).abs() < 1e-12);
        // reconstruct
        let mut recon = ComplexMatrix::zeros(2, 2);
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let v = recon.get(i, j)
                        + vectors.get(i, k) * vectors.get(j, k).conj() * c(values[k], 0.0);
                    recon.set(i, j, v);
                }
            }
        }
        assert!(approx_eq(&recon, &x, &tol()));
    }

    #[test]
    fn inv_sqrt_squares_back() {
        let m = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let s = inv_sqrt_psd(&m, &tol()).unwrap();
        let prod = s.matmul(&m).matmul(&s);
        assert!(approx_eq(&prod, &ComplexMatrix::identity(2), &tol()));
        let singular = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(inv_sqrt_psd(&singular, &tol()).is_none());
    }

    #[test]
    fn constructors_reject_bad_data() {
        assert_eq!(
            ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]),
            Err(LinalgError::EntryCount(2, 2, 3))
        );
        assert_eq!(
            ComplexMatrix::new(0, 2, vec![]),
            Err(LinalgError::ZeroDim(0, 2))
        );
        assert_eq!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(LinalgError::NonFinite(0))
        );
        assert!(Tolerance::new(-1.0, 1e-9).is_err());
    }

    #[test]
    fn matrix_json_round_trip_is_exact() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c(0.1, -0.2), c(1.0 / 3.0, 0.0), c(-0.0, 2e-17), c(5.5, -7.25)],
        )
        .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        for (a, b) in m.entries().iter().zip(back.entries()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["rows"], 2);
        assert_eq!(value["entries"][0][0], 0.1);
    }

    #[test]
    fn json_rejects_non_finite_entries() {
        let text = r#"{"rows":1,"cols":1,"entries":[[1e999,0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(&text).is_err());
        let bad_count = r#"{"rows":2,"cols":1,"entries":[[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(&bad_count).is_err());
    }
}
