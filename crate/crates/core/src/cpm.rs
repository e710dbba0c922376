//! Completely positive maps between matrix algebras, in Choi form.
//!
//! A superoperator `F : L(V) → L(W)` is stored as its Choi matrix
//! `J(F) = Σ_{ij} E_ij ⊗ F(E_ij)`, a square matrix of side
//! `dim(V) · dim(W)` indexed big-endian by `(input, output)` pairs:
//! row `(i, k)` sits at `i · dim(W) + k`. With this convention
//!
//! * `F` is completely positive iff `J(F)` is positive semidefinite,
//! * `F` is trace preserving iff the partial trace of `J(F)` over the
//!   output factor equals the identity on `V`, and trace non-increasing
//!   iff `I - tr_out J(F)` is positive semidefinite.
//!
//! Composition and the tensor of superoperators go through the transfer
//! matrix (the same data reshuffled to act on vectorised inputs), and the
//! tensor additionally through the canonical isomorphism
//! `φ : L(V ⊗ W) → L(V) ⊗ L(W)`, which on these bases is the pure index
//! relabelling computed by [`phi_iso_index`].

use crate::linalg::{
    approx_eq, c, hermitian_eigen, inv_sqrt_psd, is_psd, partial_trace, tensor, Complex,
    ComplexMatrix, Tolerance,
};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CpmError {
    #[error("choi matrix side {side} does not equal din*dout = {expected}")]
    ChoiShape { side: usize, expected: usize },
    #[error("kraus operator {index} has shape {got_rows}x{got_cols}, expected {dout}x{din}")]
    KrausShape { index: usize, got_rows: usize, got_cols: usize, dout: usize, din: usize },
    #[error("kraus set must contain at least one operator")]
    EmptyKraus,
    #[error("map is not completely positive (minimal eigenvalue {0:.3e})")]
    NotCompletelyPositive(f64),
    #[error("object dimension must be positive")]
    ZeroDim,
}

/// A labelled finite-dimensional Hilbert space; the objects of the simple
/// superoperator category.
///
/// Labels form a free monoid under [`HObject::tensor`] with `"I"` as the
/// unit, so `*` is reserved as the join character.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HObject {
    pub label: String,
    pub dim: usize,
}

impl HObject {
    pub fn new(label: impl Into<String>, dim: usize) -> Result<Self, CpmError> {
        if dim == 0 {
            return Err(CpmError::ZeroDim);
        }
        Ok(HObject { label: label.into(), dim })
    }

    /// The monoidal unit: the one-dimensional space `C`.
    pub fn unit() -> Self {
        HObject { label: "I".to_string(), dim: 1 }
    }

    pub fn is_unit(&self) -> bool {
        self.label == "I" && self.dim == 1
    }

    pub fn tensor(&self, other: &HObject) -> HObject {
        let label = if self.label == "I" {
            other.label.clone()
        } else if other.label == "I" {
            self.label.clone()
        } else {
            format!("{}*{}", self.label, other.label)
        };
        HObject { label, dim: self.dim * other.dim }
    }
}

/// A finite family of Kraus operators, all of shape `dout × din`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    pub din: usize,
    pub dout: usize,
    pub ops: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(din: usize, dout: usize, ops: Vec<ComplexMatrix>) -> Result<Self, CpmError> {
        if din == 0 || dout == 0 {
            return Err(CpmError::ZeroDim);
        }
        if ops.is_empty() {
            return Err(CpmError::EmptyKraus);
        }
        for (index, op) in ops.iter().enumerate() {
            if op.rows() != dout || op.cols() != din {
                return Err(CpmError::KrausShape {
                    index,
                    got_rows: op.rows(),
                    got_cols: op.cols(),
                    dout,
                    din,
                });
            }
        }
        Ok(KrausSet { din, dout, ops })
    }

    /// `Σ_m F_m† F_m`, the Gram operator deciding the trace conditions.
    pub fn gram(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.din, self.din);
        for op in &self.ops {
            acc = acc.add(&op.adjoint().matmul(op));
        }
        acc
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct LinMapRepr {
    din: usize,
    dout: usize,
    choi: ComplexMatrix,
}

/// A linear superoperator `L(C^din) → L(C^dout)` in Choi form.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LinMapRepr", into = "LinMapRepr")]
pub struct LinMap {
    din: usize,
    dout: usize,
    choi: ComplexMatrix,
}

impl TryFrom<LinMapRepr> for LinMap {
    type Error = CpmError;
    fn try_from(r: LinMapRepr) -> Result<Self, CpmError> {
        LinMap::from_choi(r.din, r.dout, r.choi)
    }
}

impl From<LinMap> for LinMapRepr {
    fn from(m: LinMap) -> LinMapRepr {
        LinMapRepr { din: m.din, dout: m.dout, choi: m.choi }
    }
}

impl std::fmt::Debug for LinMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LinMap {{ din: {}, dout: {}, choi: {:?} }}", self.din, self.dout, self.choi)
    }
}

impl LinMap {
    pub fn from_choi(din: usize, dout: usize, choi: ComplexMatrix) -> Result<Self, CpmError> {
        if din == 0 || dout == 0 {
            return Err(CpmError::ZeroDim);
        }
        if !choi.is_square() || choi.rows() != din * dout {
            return Err(CpmError::ChoiShape { side: choi.rows(), expected: din * dout });
        }
        Ok(LinMap { din, dout, choi })
    }

    pub fn din(&self) -> usize {
        self.din
    }

    pub fn dout(&self) -> usize {
        self.dout
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    /// The identity map on `L(C^d)`; its Choi matrix is `Σ_ij E_ij ⊗ E_ij`.
    pub fn identity(d: usize) -> Self {
        assert!(d > 0, "identity: dimension must be positive");
        let mut choi = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                choi.set(i * d + i, j * d + j, c(1.0, 0.0));
            }
        }
        LinMap { din: d, dout: d, choi }
    }

    pub fn zero(din: usize, dout: usize) -> Self {
        assert!(din > 0 && dout > 0, "zero: dimensions must be positive");
        LinMap { din, dout, choi: ComplexMatrix::zeros(din * dout, din * dout) }
    }

    pub fn from_kraus(k: &KrausSet) -> Self {
        let side = k.din * k.dout;
        let mut choi = ComplexMatrix::zeros(side, side);
        for op in &k.ops {
            // vec(F)[(i,k)] = F[k,i]
            let mut v = vec![c(0.0, 0.0); side];
            for i in 0..k.din {
                for kk in 0..k.dout {
                    v[i * k.dout + kk] = op.get(kk, i);
                }
            }
            for r in 0..side {
                for cc in 0..side {
                    let add = v[r] * v[cc].conj();
                    choi.set(r, cc, choi.get(r, cc) + add);
                }
            }
        }
        LinMap { din: k.din, dout: k.dout, choi }
    }

    /// Kraus decomposition from the eigendecomposition of the Choi matrix.
    ///
    /// Fails when the map is not completely positive within the tolerance.
    /// Eigenpairs with eigenvalue at or below the relative threshold are
    /// dropped, so the returned family has rank-many operators.
    pub fn to_kraus(&self, tol: &Tolerance) -> Result<KrausSet, CpmError> {
        if !is_psd(&self.choi, tol) {
            let (values, _) = hermitian_eigen(&self.choi);
            let min = values.last().copied().unwrap_or(f64::NEG_INFINITY);
            return Err(CpmError::NotCompletelyPositive(min));
        }
        let (values, vectors) = hermitian_eigen(&self.choi);
        let cut = tol.eps_psd * (1.0 + self.choi.max_abs());
        let mut ops = Vec::new();
        for (m, &lam) in values.iter().enumerate() {
            if lam <= cut {
                continue;
            }
            let w = lam.sqrt();
            let mut op = ComplexMatrix::zeros(self.dout, self.din);
            for i in 0..self.din {
                for k in 0..self.dout {
                    op.set(k, i, vectors.get(i * self.dout + k, m) * c(w, 0.0));
                }
            }
            ops.push(op);
        }
        if ops.is_empty() {
            // the zero map: represent with a single zero operator
            ops.push(ComplexMatrix::zeros(self.dout, self.din));
        }
        KrausSet::new(self.din, self.dout, ops)
    }

    /// Applies the map to a density-like matrix: `F(ρ)[k,l] = Σ_ij ρ[i,j] J[(i,k),(j,l)]`.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        assert!(
            rho.is_square() && rho.rows() == self.din,
            "apply: state has side {}, map expects {}",
            rho.rows(),
            self.din
        );
        let mut out = ComplexMatrix::zeros(self.dout, self.dout);
        for i in 0..self.din {
            for j in 0..self.din {
                let z = rho.get(i, j);
                if z == c(0.0, 0.0) {
                    continue;
                }
                for k in 0..self.dout {
                    for l in 0..self.dout {
                        let v = out.get(k, l) + z * self.choi.get(i * self.dout + k, j * self.dout + l);
                        out.set(k, l, v);
                    }
                }
            }
        }
        out
    }

    /// Transfer matrix acting on row-major vectorised states:
    /// `T[(k,l),(i,j)] = J[(i,k),(j,l)]`, so `vec(F(ρ)) = T vec(ρ)`.
    pub fn to_transfer(&self) -> ComplexMatrix {
        let mut t = ComplexMatrix::zeros(self.dout * self.dout, self.din * self.din);
        for i in 0..self.din {
            for j in 0..self.din {
                for k in 0..self.dout {
                    for l in 0..self.dout {
                        t.set(
                            k * self.dout + l,
                            i * self.din + j,
                            self.choi.get(i * self.dout + k, j * self.dout + l),
                        );
                    }
                }
            }
        }
        t
    }

    pub fn from_transfer(din: usize, dout: usize, t: &ComplexMatrix) -> Self {
        assert_eq!(
            (t.rows(), t.cols()),
            (dout * dout, din * din),
            "from_transfer: shape mismatch"
        );
        let mut choi = ComplexMatrix::zeros(din * dout, din * dout);
        for i in 0..din {
            for j in 0..din {
                for k in 0..dout {
                    for l in 0..dout {
                        choi.set(
                            i * dout + k,
                            j * dout + l,
                            t.get(k * dout + l, i * din + j),
                        );
                    }
                }
            }
        }
        LinMap { din, dout, choi }
    }

    /// `g ∘ f`, via transfer-matrix multiplication.
    pub fn compose(g: &LinMap, f: &LinMap) -> LinMap {
        assert_eq!(
            f.dout, g.din,
            "compose: inner dimensions differ ({} vs {})",
            f.dout, g.din
        );
        // block matrices are mostly zero entries; skip the dense multiply
        if f.is_zero() || g.is_zero() {
            return LinMap::zero(f.din, g.dout);
        }
        LinMap::from_transfer(f.din, g.dout, &g.to_transfer().matmul(&f.to_transfer()))
    }

    /// Exactly zero Choi matrix.
    pub fn is_zero(&self) -> bool {
        self.choi.entries().iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn add(&self, other: &LinMap) -> LinMap {
        assert_eq!(
            (self.din, self.dout),
            (other.din, other.dout),
            "add: signature mismatch"
        );
        LinMap { din: self.din, dout: self.dout, choi: self.choi.add(&other.choi) }
    }

    pub fn scale(&self, r: f64) -> LinMap {
        LinMap { din: self.din, dout: self.dout, choi: self.choi.scale(c(r, 0.0)) }
    }

    /// Same signature and entrywise-close Choi matrices.
    pub fn approx_eq(&self, other: &LinMap, tol: &Tolerance) -> bool {
        (self.din, self.dout) == (other.din, other.dout)
            && approx_eq(&self.choi, &other.choi, tol)
    }

    /// Largest entrywise Choi deviation; infinite on signature mismatch.
    pub fn max_deviation(&self, other: &LinMap) -> f64 {
        if (self.din, self.dout) != (other.din, other.dout) {
            return f64::INFINITY;
        }
        crate::linalg::max_deviation(&self.choi, &other.choi)
    }

    /// Partial trace of the Choi matrix over the output factor; the map is
    /// trace preserving iff this equals the identity.
    pub fn trace_out_output(&self) -> ComplexMatrix {
        partial_trace(&self.choi, &[self.din, self.dout], &[0])
            .expect("choi side matches din*dout by construction")
    }

    pub fn is_completely_positive(&self, tol: &Tolerance) -> bool {
        is_psd(&self.choi, tol)
    }

    pub fn is_trace_preserving(&self, tol: &Tolerance) -> bool {
        approx_eq(&self.trace_out_output(), &ComplexMatrix::identity(self.din), tol)
    }

    pub fn is_trace_nonincreasing(&self, tol: &Tolerance) -> bool {
        let gap = ComplexMatrix::identity(self.din).sub(&self.trace_out_output());
        is_psd(&gap, tol)
    }
}

/// The trace functional `L(C^d) → L(C)` as a map; the unique
/// trace-preserving map into the unit.
pub fn discard(d: usize) -> LinMap {
    // J[(i,0),(j,0)] = tr(E_ij) = δ_ij
    LinMap::from_choi(d, 1, ComplexMatrix::identity(d)).expect("identity choi is square")
}

/// State preparation `L(C) → L(C^d)` from a (not necessarily normalised)
/// column vector: `ρ ↦ ρ · ψψ†`.
pub fn prepare(psi: &ComplexMatrix) -> LinMap {
    assert_eq!(psi.cols(), 1, "prepare: expected a column vector");
    let k = KrausSet::new(1, psi.rows(), vec![psi.clone()]).expect("column vector kraus");
    LinMap::from_kraus(&k)
}

/// Unitary conjugation `ρ ↦ U ρ U†` as a map.
pub fn unitary_channel(u: &ComplexMatrix) -> LinMap {
    assert!(u.is_square(), "unitary_channel: matrix must be square");
    let k = KrausSet::new(u.rows(), u.rows(), vec![u.clone()]).expect("square kraus");
    LinMap::from_kraus(&k)
}

/// The index bijection realising `φ : L(V ⊗ W) → L(V) ⊗ L(W)` on basis
/// coordinates, together with its inverse.
///
/// The basis element `E_{(v,w),(v',w')}` of `L(V ⊗ W)` lives at flat index
/// `(v·dW + w)·dV·dW + (v'·dW + w')`; its image `E_{v,v'} ⊗ E_{w,w'}` at
/// `(v·dV + v')·dW² + (w·dW + w')`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexBijection {
    pub forward: Vec<usize>,
    pub inverse: Vec<usize>,
}

pub fn phi_iso_index(dv: usize, dw: usize) -> IndexBijection {
    let n = dv * dw * dv * dw;
    let mut forward = vec![0usize; n];
    let mut inverse = vec![0usize; n];
    for v in 0..dv {
        for w in 0..dw {
            for v2 in 0..dv {
                for w2 in 0..dw {
                    let x = (v * dw + w) * dv * dw + (v2 * dw + w2);
                    let y = (v * dv + v2) * dw * dw + (w * dw + w2);
                    forward[x] = y;
                    inverse[y] = x;
                }
            }
        }
    }
    IndexBijection { forward, inverse }
}

/// Tensor of superoperators `f ⊗ g`, computed through `φ` on both sides:
/// the transfer matrix is `φ_out⁻¹ · (T_f ⊗ T_g) · φ_in`.
pub fn tensor_map(f: &LinMap, g: &LinMap) -> LinMap {
    let tf = f.to_transfer();
    let tg = g.to_transfer();
    let kron = tensor(&tf, &tg);
    let phi_in = phi_iso_index(f.din, g.din);
    let phi_out = phi_iso_index(f.dout, g.dout);
    let din = f.din * g.din;
    let dout = f.dout * g.dout;
    let mut t = ComplexMatrix::zeros(dout * dout, din * din);
    for y in 0..dout * dout {
        for x in 0..din * din {
            t.set(y, x, kron.get(phi_out.forward[y], phi_in.forward[x]));
        }
    }
    LinMap::from_transfer(din, dout, &t)
}

/// Gaussian Kraus family; combined with [`normalize_to_tp`] this samples
/// trace-preserving maps with a reproducible generator.
pub fn random_kraus<R: Rng>(rng: &mut R, din: usize, dout: usize, n_ops: usize) -> KrausSet {
    assert!(n_ops > 0, "random_kraus: need at least one operator");
    let normal = |rng: &mut R| {
        // Box-Muller keeps the dependency surface small
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    };
    let ops = (0..n_ops)
        .map(|_| {
            let entries: Vec<Complex> = (0..din * dout)
                .map(|_| c(normal(rng), normal(rng)))
                .collect();
            ComplexMatrix::new(dout, din, entries).expect("finite gaussian entries")
        })
        .collect();
    KrausSet::new(din, dout, ops).expect("shapes are consistent")
}

/// Right-multiplies every operator by `(Σ F†F)^{-1/2}` so the family becomes
/// trace preserving. Returns `None` when the Gram operator is singular
/// (probability zero for Gaussian draws).
pub fn normalize_to_tp(k: &KrausSet, tol: &Tolerance) -> Option<KrausSet> {
    let s = inv_sqrt_psd(&k.gram(), tol)?;
    let ops = k.ops.iter().map(|op| op.matmul(&s)).collect();
    Some(KrausSet::new(k.din, k.dout, ops).expect("shapes preserved"))
}

/// Samples a random trace-preserving completely positive map.
pub fn random_tp<R: Rng>(rng: &mut R, din: usize, dout: usize, n_ops: usize, tol: &Tolerance) -> LinMap {
    loop {
        let k = random_kraus(rng, din, dout, n_ops);
        if let Some(tp) = normalize_to_tp(&k, tol) {
            return LinMap::from_kraus(&tp);
        }
    }
}

/// Fixed single- and two-qubit gate matrices.
pub mod gates {
    use crate::linalg::{c, ComplexMatrix};
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap()
    }

    pub fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    pub fn hadamard() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2])
            .unwrap()
    }

    pub fn phase_s() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]).unwrap()
    }

    pub fn phase_t() -> ComplexMatrix {
        ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)],
        )
        .unwrap()
    }

    /// Controlled-NOT with the first factor as control.
    pub fn cnot() -> ComplexMatrix {
        ComplexMatrix::from_real(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, 1.0, 0.0,
            ],
        )
        .unwrap()
    }

    pub fn by_name(name: &str) -> Option<ComplexMatrix> {
        match name {
            "X" => Some(pauli_x()),
            "Y" => Some(pauli_y()),
            "Z" => Some(pauli_z()),
            "H" => Some(hadamard()),
            "S" => Some(phase_s()),
            "T" => Some(phase_t()),
            "CNOT" => Some(cnot()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::permutation_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn basis_projectors() -> KrausSet {
        let p0 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let p1 = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        KrausSet::new(2, 2, vec![p0, p1]).unwrap()
    }

    #[test]
    fn dephasing_kills_off_diagonals() {
        let f = LinMap::from_kraus(&basis_projectors());
        let rho = ComplexMatrix::new(
            2,
            2,
            vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)],
        )
        .unwrap();
        let out = f.apply(&rho);
        let expected = ComplexMatrix::from_diag(&[c(0.7, 0.0), c(0.3, 0.0)]);
        assert!(approx_eq(&out, &expected, &tol()));
        assert!(f.is_trace_preserving(&tol()));
    }

    #[test]
    fn identity_choi_is_frozen() {
        let id = LinMap::identity(2);
        let mut expected = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            expected.set(i, j, c(1.0, 0.0));
        }
        assert_eq!(id.choi(), &expected);
        assert!((id.choi().trace() - c(2.0, 0.0)).norm() < 1e-12);
        let (values, _) = hermitian_eigen(id.choi());
        assert!((values[0] - 2.0).abs() < 1e-12, "top eigenvalue is d");
        assert!(values[1].abs() < 1e-12, "rank one");
    }

    #[test]
    fn apply_identity_is_identity() {
        let id = LinMap::identity(3);
        let rho = ComplexMatrix::from_real(3, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]).unwrap();
        assert!(approx_eq(&id.apply(&rho), &rho, &tol()));
    }

    #[test]
    fn transpose_map_is_not_completely_positive() {
        // the Choi matrix of the transpose map is the swap unitary
        let swap = permutation_unitary(&[2, 2], &[1, 0]);
        let transpose = LinMap::from_choi(2, 2, swap).unwrap();
        assert!(!transpose.is_completely_positive(&tol()));
        // but it is trace preserving as a linear map
        assert!(transpose.is_trace_preserving(&tol()));
        assert!(transpose.to_kraus(&tol()).is_err());
        // and it really is the transpose on inputs
        let rho = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.0), c(0.5, 0.25), c(0.5, -0.25), c(2.0, 0.0)],
        )
        .unwrap();
        assert!(approx_eq(&transpose.apply(&rho), &rho.transpose(), &tol()));
    }

    #[test]
    fn halved_identity_is_tni_but_not_tp() {
        let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        let k = KrausSet::new(2, 2, vec![half]).unwrap();
        let f = LinMap::from_kraus(&k);
        assert!(f.is_trace_nonincreasing(&tol()));
        assert!(!f.is_trace_preserving(&tol()));
        // doubling breaks the trace bound
        let double = ComplexMatrix::identity(2).scale(c(2.0, 0.0));
        let g = LinMap::from_kraus(&KrausSet::new(2, 2, vec![double]).unwrap());
        assert!(!g.is_trace_nonincreasing(&tol()));
    }

    #[test]
    fn discard_traces_and_prepare_prepares() {
        let d = discard(3);
        let rho = ComplexMatrix::from_diag(&[c(0.2, 0.0), c(0.3, 0.0), c(0.5, 0.0)]);
        let out = d.apply(&rho);
        assert!((out.get(0, 0) - c(1.0, 0.0)).norm() < 1e-12);
        assert!(d.is_trace_preserving(&tol()));

        let ket1 = ComplexMatrix::new(2, 1, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let p = prepare(&ket1);
        let one = ComplexMatrix::identity(1);
        let state = p.apply(&one);
        let expected = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(approx_eq(&state, &expected, &tol()));
        assert!(p.is_trace_preserving(&tol()));
    }

    #[test]
    fn kraus_choi_round_trip_on_seeded_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..25 {
            let din = rng.gen_range(1..=4);
            let dout = rng.gen_range(1..=4);
            let n_ops = rng.gen_range(1..=4);
            let k = random_kraus(&mut rng, din, dout, n_ops);
            let f = LinMap::from_kraus(&k);
            assert!(f.is_completely_positive(&tol()));
            let k2 = f.to_kraus(&tol()).unwrap();
            let f2 = LinMap::from_kraus(&k2);
            assert!(
                approx_eq(f.choi(), f2.choi(), &tol()),
                "roundtrip deviates by {:.3e}",
                crate::linalg::max_deviation(f.choi(), f2.choi())
            );
        }
    }

    #[test]
    fn random_tp_maps_are_tp(){
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let f = random_tp(&mut rng, 3, 2, 3, &tol());
            assert!(f.is_completely_positive(&tol()));
            assert!(f.is_trace_preserving(&tol()));
        }
    }

    #[test]
    fn compose_matches_sequential_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let f = random_tp(&mut rng, 2, 3, 2, &tol());
            let g = random_tp(&mut rng, 3, 2, 2, &tol());
            let gf = LinMap::compose(&g, &f);
            let rho = ComplexMatrix::new(
                2,
                2,
                vec![c(0.6, 0.0), c(0.2, 0.1), c(0.2, -0.1), c(0.4, 0.0)],
            )
            .unwrap();
            let direct = gf.apply(&rho);
            let stepped = g.apply(&f.apply(&rho));
            assert!(approx_eq(&direct, &stepped, &tol()));
            assert!(gf.is_trace_preserving(&tol()), "TP is closed under composition");
        }
    }

    #[test]
    fn compose_with_identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = random_tp(&mut rng, 2, 3, 2, &tol());
        let left = LinMap::compose(&LinMap::identity(3), &f);
        let right = LinMap::compose(&f, &LinMap::identity(2));
        assert!(approx_eq(left.choi(), f.choi(), &tol()));
        assert!(approx_eq(right.choi(), f.choi(), &tol()));
    }

    #[test]
    fn phi_index_bijection_is_involutive_pair() {
        let b = phi_iso_index(2, 3);
        for x in 0..b.forward.len() {
            assert_eq!(b.inverse[b.forward[x]], x);
            assert_eq!(b.forward[b.inverse[x]], x);
        }
    }

    #[test]
    fn phi_sends_product_states_to_product_states() {
        let rho = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.0), c(0.0, 0.5), c(0.0, -0.5), c(0.5, 0.0)],
        )
        .unwrap();
        let sigma = ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 1.0, 0.0, 3.0]).unwrap();
        let big = tensor(&rho, &sigma);
        let b = phi_iso_index(2, 3);
        // vectorise L(V⊗W) row-major, permute coordinates, compare with vec(ρ) ⊗ vec(σ)
        let side = 6;
        let mut image = vec![c(0.0, 0.0); side * side];
        for r in 0..side {
            for cc in 0..side {
                image[b.forward[r * side + cc]] = big.get(r, cc);
            }
        }
        let mut expected = vec![c(0.0, 0.0); side * side];
        for v in 0..2 {
            for v2 in 0..2 {
                for w in 0..3 {
                    for w2 in 0..3 {
                        expected[(v * 2 + v2) * 9 + (w * 3 + w2)] = rho.get(v, v2) * sigma.get(w, w2);
                    }
                }
            }
        }
        for (a, b) in image.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn tensor_map_acts_factorwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..8 {
            let f = random_tp(&mut rng, 2, 2, 2, &tol());
            let g = random_tp(&mut rng, 3, 2, 2, &tol());
            let fg = tensor_map(&f, &g);
            assert_eq!((fg.din(), fg.dout()), (6, 4));
            let rho = {
                let k = random_kraus(&mut rng, 1, 2, 1);
                let v = &k.ops[0];
                v.matmul(&v.adjoint())
            };
            let sigma = {
                let k = random_kraus(&mut rng, 1, 3, 1);
                let v = &k.ops[0];
                v.matmul(&v.adjoint())
            };
            let joint = tensor(&rho, &sigma);
            let lhs = fg.apply(&joint);
            let rhs = tensor(&f.apply(&rho), &g.apply(&sigma));
            assert!(approx_eq(&lhs, &rhs, &tol()));
            assert!(fg.is_trace_preserving(&tol()), "TP is closed under tensor");
            assert!(fg.is_completely_positive(&tol()));
        }
    }

    #[test]
    fn tensor_map_with_identity_units() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let f = random_tp(&mut rng, 2, 3, 2, &tol());
        let fid = tensor_map(&f, &LinMap::identity(1));
        assert!(approx_eq(fid.choi(), f.choi(), &tol()));
        let idf = tensor_map(&LinMap::identity(1), &f);
        assert!(approx_eq(idf.choi(), f.choi(), &tol()));
    }

    #[test]
    fn hobject_label_monoid_is_strict() {
        let a = HObject::new("A", 2).unwrap();
        let b = HObject::new("B", 3).unwrap();
        let u = HObject::unit();
        assert_eq!(a.tensor(&u), a);
        assert_eq!(u.tensor(&b), b);
        assert_eq!(a.tensor(&b).tensor(&a), a.tensor(&b.tensor(&a)));
        assert_eq!(a.tensor(&b).label, "A*B");
        assert_eq!(a.tensor(&b).dim, 6);
        assert!(HObject::new("A", 0).is_err());
    }

    #[test]
    fn linmap_json_round_trip_and_validation() {
        let f = LinMap::identity(2);
        let text = serde_json::to_string(&f).unwrap();
        let back: LinMap = serde_json::from_str(&text).unwrap();
        assert_eq!(f, back);
        let bad = r#"{"din":2,"dout":2,"choi":{"rows":3,"cols":3,"entries":[[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}}"#;
        assert!(serde_json::from_str::<LinMap>(bad).is_err());
    }

    #[test]
    fn gates_are_unitary_channels() {
        for name in ["X", "Y", "Z", "H", "S", "T", "CNOT"] {
            let u = gates::by_name(name).unwrap();
            let ch = unitary_channel(&u);
            assert!(ch.is_completely_positive(&tol()), "{name}");
            assert!(ch.is_trace_preserving(&tol()), "{name}");
        }
        assert!(gates::by_name("Q").is_none());
    }
}
