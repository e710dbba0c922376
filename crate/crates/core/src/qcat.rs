//! Families of Hilbert spaces and matrices of superoperators.
//!
//! Objects are finite (possibly empty) sequences of labelled spaces; a
//! morphism `(V_1, …, V_n) → (W_1, …, W_m)` is an `m × n` matrix of maps
//! with entry `(i, j) : L(V_j) → L(W_i)`, and composition is matrix
//! multiplication. Several full subcategories share this data and differ
//! only in the predicate imposed on morphisms:
//!
//! * all entries completely positive (the biproduct completion of CP maps),
//! * additionally, for every input index `j` and positive `ρ`,
//!   `Σ_i tr F_ij(ρ) ≤ tr ρ` — trace non-increasing families, or
//! * the same sum equal to `tr ρ` — trace preserving families.
//!
//! The trace conditions are decided exactly by the Gram-type criterion on
//! Choi matrices: with `M_ij = tr_out J(F_ij)`, the column condition reads
//! `I - Σ_i M_ij` positive semidefinite, with equality for preservation.
//!
//! The tensor product interleaves families lexicographically (left index
//! outer) and is strictly associative and unital on objects thanks to the
//! label monoid of [`HObject`]; coproducts are concatenation.

use crate::cpm::{tensor_map, HObject, KrausSet, LinMap};
use crate::linalg::{approx_eq, is_psd, permutation_unitary, ComplexMatrix, Tolerance};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QcatError {
    #[error("expected {expected} entries for a {rows}x{cols} morphism, got {got}")]
    EntryCount { rows: usize, cols: usize, expected: usize, got: usize },
    #[error("entry ({row},{col}) maps {got_in}->{got_out}, object dims require {want_in}->{want_out}")]
    EntryShape {
        row: usize,
        col: usize,
        got_in: usize,
        got_out: usize,
        want_in: usize,
        want_out: usize,
    },
    #[error("family state has {got} parts, object has {want}")]
    StatePartCount { got: usize, want: usize },
    #[error("family state part {index} has side {got}, object part has dim {want}")]
    StatePartDim { index: usize, got: usize, want: usize },
}

/// A finite family of labelled Hilbert spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QObject {
    pub parts: Vec<HObject>,
}

impl QObject {
    pub fn new(parts: Vec<HObject>) -> Self {
        QObject { parts }
    }

    /// The monoidal unit: the singleton family holding `C`.
    pub fn unit() -> Self {
        QObject { parts: vec![HObject::unit()] }
    }

    /// The zero object: the empty family.
    pub fn zero() -> Self {
        QObject { parts: vec![] }
    }

    pub fn single(h: HObject) -> Self {
        QObject { parts: vec![h] }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.dim).collect()
    }

    /// Sorted dimension multiset; two objects are isomorphic exactly when
    /// these agree, since any matching of parts by dimension extends to a
    /// unitary family isomorphism and dimensions are preserved by any
    /// invertible superoperator family.
    pub fn dim_multiset(&self) -> Vec<usize> {
        let mut d = self.dims();
        d.sort_unstable();
        d
    }

    pub fn tensor(&self, other: &QObject) -> QObject {
        let mut parts = Vec::with_capacity(self.len() * other.len());
        for a in &self.parts {
            for b in &other.parts {
                parts.push(a.tensor(b));
            }
        }
        QObject { parts }
    }

    pub fn coproduct(&self, other: &QObject) -> QObject {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        QObject { parts }
    }
}

/// Tensor of a list of objects, folded left; empty product is the unit.
pub fn tensor_many(objs: &[QObject]) -> QObject {
    let mut acc = QObject::unit();
    for x in objs {
        acc = acc.tensor(x);
    }
    acc
}

/// A matrix of superoperators between two families, stored row-major with
/// `dst.len()` rows and `src.len()` cols; entry `(i, j)` maps part `j` of
/// the source to part `i` of the destination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QMorphism {
    src: QObject,
    dst: QObject,
    entries: Vec<LinMap>,
}

impl QMorphism {
    pub fn new(src: QObject, dst: QObject, entries: Vec<LinMap>) -> Result<Self, QcatError> {
        let rows = dst.len();
        let cols = src.len();
        if entries.len() != rows * cols {
            return Err(QcatError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        for i in 0..rows {
            for j in 0..cols {
                let e = &entries[i * cols + j];
                let want_in = src.parts[j].dim;
                let want_out = dst.parts[i].dim;
                if e.din() != want_in || e.dout() != want_out {
                    return Err(QcatError::EntryShape {
                        row: i,
                        col: j,
                        got_in: e.din(),
                        got_out: e.dout(),
                        want_in,
                        want_out,
                    });
                }
            }
        }
        Ok(QMorphism { src, dst, entries })
    }

    /// Builds a morphism entry by entry from a closure.
    pub fn from_fn(
        src: QObject,
        dst: QObject,
        mut f: impl FnMut(usize, usize) -> LinMap,
    ) -> QMorphism {
        let rows = dst.len();
        let cols = src.len();
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        QMorphism::new(src, dst, entries).expect("entry shapes are provided by construction")
    }

    pub fn src(&self) -> &QObject {
        &self.src
    }

    pub fn dst(&self) -> &QObject {
        &self.dst
    }

    pub fn entry(&self, i: usize, j: usize) -> &LinMap {
        &self.entries[i * self.src.len() + j]
    }

    pub fn identity(x: &QObject) -> QMorphism {
        QMorphism::from_fn(x.clone(), x.clone(), |i, j| {
            if i == j {
                LinMap::identity(x.parts[i].dim)
            } else {
                LinMap::zero(x.parts[j].dim, x.parts[i].dim)
            }
        })
    }

    pub fn zero(src: &QObject, dst: &QObject) -> QMorphism {
        QMorphism::from_fn(src.clone(), dst.clone(), |i, j| {
            LinMap::zero(src.parts[j].dim, dst.parts[i].dim)
        })
    }

    pub fn compose(g: &QMorphism, f: &QMorphism) -> QMorphism {
        assert_eq!(
            f.dst, g.src,
            "compose: destination of the first morphism must match source of the second"
        );
        QMorphism::from_fn(f.src.clone(), g.dst.clone(), |i, k| {
            let mut acc = LinMap::zero(f.src.parts[k].dim, g.dst.parts[i].dim);
            for j in 0..f.dst.len() {
                acc = acc.add(&LinMap::compose(g.entry(i, j), f.entry(j, k)));
            }
            acc
        })
    }

    /// Applies the morphism to a family state: `out_i = Σ_j F_ij(ρ_j)`.
    pub fn apply(&self, state: &FamilyState) -> Result<FamilyState, QcatError> {
        state.check_against(&self.src)?;
        let parts = (0..self.dst.len())
            .map(|i| {
                let mut acc = ComplexMatrix::zeros(self.dst.parts[i].dim, self.dst.parts[i].dim);
                for j in 0..self.src.len() {
                    acc = acc.add(&self.entry(i, j).apply(&state.parts[j]));
                }
                acc
            })
            .collect();
        Ok(FamilyState { parts })
    }

    /// All entries completely positive: membership in the CP-matrix category.
    pub fn is_cp_family(&self, tol: &Tolerance) -> bool {
        self.entries.iter().all(|e| e.is_completely_positive(tol))
    }

    fn column_gram(&self, j: usize) -> ComplexMatrix {
        let d = self.src.parts[j].dim;
        let mut acc = ComplexMatrix::zeros(d, d);
        for i in 0..self.dst.len() {
            acc = acc.add(&self.entry(i, j).trace_out_output());
        }
        acc
    }

    /// Completely positive entries with every column trace non-increasing.
    pub fn is_q(&self, tol: &Tolerance) -> bool {
        if !self.is_cp_family(tol) {
            return false;
        }
        (0..self.src.len()).all(|j| {
            let d = self.src.parts[j].dim;
            let gap = ComplexMatrix::identity(d).sub(&self.column_gram(j));
            is_psd(&gap, tol)
        })
    }

    /// Completely positive entries with every column trace preserving.
    pub fn is_qprime(&self, tol: &Tolerance) -> bool {
        if !self.is_cp_family(tol) {
            return false;
        }
        (0..self.src.len()).all(|j| {
            let d = self.src.parts[j].dim;
            approx_eq(&self.column_gram(j), &ComplexMatrix::identity(d), tol)
        })
    }

    pub fn approx_eq(&self, other: &QMorphism, tol: &Tolerance) -> bool {
        if self.src.dims() != other.src.dims() || self.dst.dims() != other.dst.dims() {
            return false;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| approx_eq(a.choi(), b.choi(), tol))
    }

    /// Largest choi-entry deviation; useful in counterexample evidence.
    pub fn max_deviation(&self, other: &QMorphism) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| crate::linalg::max_deviation(a.choi(), b.choi()))
            .fold(0.0, f64::max)
    }
}

/// A tuple of density-like matrices, one per family part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyState {
    pub parts: Vec<ComplexMatrix>,
}

impl FamilyState {
    pub fn check_against(&self, obj: &QObject) -> Result<(), QcatError> {
        if self.parts.len() != obj.len() {
            return Err(QcatError::StatePartCount { got: self.parts.len(), want: obj.len() });
        }
        for (index, (m, p)) in self.parts.iter().zip(&obj.parts).enumerate() {
            if !m.is_square() || m.rows() != p.dim {
                return Err(QcatError::StatePartDim { index, got: m.rows(), want: p.dim });
            }
        }
        Ok(())
    }

    pub fn total_trace(&self) -> f64 {
        self.parts.iter().map(|m| m.trace().re).sum()
    }
}

/// Binary coproduct: concatenation with block injections.
pub fn coproduct(x: &QObject, y: &QObject) -> (QObject, QMorphism, QMorphism) {
    let obj = x.coproduct(y);
    let inj1 = QMorphism::from_fn(x.clone(), obj.clone(), |i, j| {
        if i == j {
            LinMap::identity(x.parts[j].dim)
        } else {
            LinMap::zero(x.parts[j].dim, obj.parts[i].dim)
        }
    });
    let inj2 = QMorphism::from_fn(y.clone(), obj.clone(), |i, j| {
        if i == x.len() + j {
            LinMap::identity(y.parts[j].dim)
        } else {
            LinMap::zero(y.parts[j].dim, obj.parts[i].dim)
        }
    });
    (obj, inj1, inj2)
}

/// Copairing `[f, g] : x ⊕ y → z` of morphisms with a common destination.
pub fn copair(f: &QMorphism, g: &QMorphism) -> QMorphism {
    assert_eq!(f.dst, g.dst, "copair: destinations must agree");
    let src = f.src.coproduct(&g.src);
    QMorphism::from_fn(src, f.dst.clone(), |i, j| {
        if j < f.src.len() {
            f.entry(i, j).clone()
        } else {
            g.entry(i, j - f.src.len()).clone()
        }
    })
}

/// n-ary coproduct with all injections.
pub fn coproduct_many(objs: &[QObject]) -> (QObject, Vec<QMorphism>) {
    let mut acc = QObject::zero();
    for x in objs {
        acc = acc.coproduct(x);
    }
    let mut injections = Vec::with_capacity(objs.len());
    let mut offset = 0;
    for x in objs {
        let inj = QMorphism::from_fn(x.clone(), acc.clone(), |i, j| {
            if i == offset + j {
                LinMap::identity(x.parts[j].dim)
            } else {
                LinMap::zero(x.parts[j].dim, acc.parts[i].dim)
            }
        });
        injections.push(inj);
        offset += x.len();
    }
    (acc, injections)
}

/// n-ary copairing of morphisms sharing a destination.
pub fn copair_many(legs: &[QMorphism], dst: &QObject) -> QMorphism {
    for leg in legs {
        assert_eq!(&leg.dst, dst, "copair_many: destinations must agree");
    }
    let src_parts: Vec<HObject> = legs
        .iter()
        .flat_map(|l| l.src.parts.iter().cloned())
        .collect();
    let src = QObject::new(src_parts);
    let col_owner: Vec<(usize, usize)> = legs
        .iter()
        .enumerate()
        .flat_map(|(k, l)| (0..l.src.len()).map(move |j| (k, j)))
        .collect();
    QMorphism::from_fn(src, dst.clone(), |i, j| {
        let (k, jj) = col_owner[j];
        legs[k].entry(i, jj).clone()
    })
}

/// Tensor of morphisms, lexicographic on both family indices.
pub fn tensor_mor(f: &QMorphism, g: &QMorphism) -> QMorphism {
    let src = f.src.tensor(&g.src);
    let dst = f.dst.tensor(&g.dst);
    let gs = g.src.len();
    let gd = g.dst.len();
    QMorphism::from_fn(src, dst, |row, col| {
        let (a, b) = (row / gd, row % gd);
        let (j, l) = (col / gs, col % gs);
        tensor_map(f.entry(a, j), g.entry(b, l))
    })
}

/// An isomorphism packaged with its inverse.
#[derive(Debug, Clone)]
pub struct QIso {
    pub fwd: QMorphism,
    pub inv: QMorphism,
}

impl QIso {
    /// Checks both composites against identities.
    pub fn verify(&self, tol: &Tolerance) -> bool {
        let back = QMorphism::compose(&self.inv, &self.fwd);
        let forth = QMorphism::compose(&self.fwd, &self.inv);
        back.approx_eq(&QMorphism::identity(self.fwd.src()), tol)
            && forth.approx_eq(&QMorphism::identity(self.fwd.dst()), tol)
    }
}

/// Right distributivity `x ⊗ (y ⊕ z) → (x ⊗ y) ⊕ (x ⊗ z)`: a pure
/// reindexing of family components, with identity entries.
pub fn distributivity_iso(x: &QObject, y: &QObject, z: &QObject) -> QIso {
    let src = x.tensor(&y.coproduct(z));
    let dst = x.tensor(y).coproduct(&x.tensor(z));
    let (nx, ny, nz) = (x.len(), y.len(), z.len());
    let target = |i: usize, k: usize| {
        if k < ny {
            i * ny + k
        } else {
            nx * ny + i * nz + (k - ny)
        }
    };
    let fwd = QMorphism::from_fn(src.clone(), dst.clone(), |row, col| {
        let (i, k) = (col / (ny + nz), col % (ny + nz));
        if row == target(i, k) {
            LinMap::identity(src.parts[col].dim)
        } else {
            LinMap::zero(src.parts[col].dim, dst.parts[row].dim)
        }
    });
    let inv = QMorphism::from_fn(dst.clone(), src.clone(), |row, col| {
        let (i, k) = (row / (ny + nz), row % (ny + nz));
        if col == target(i, k) {
            LinMap::identity(dst.parts[col].dim)
        } else {
            LinMap::zero(dst.parts[col].dim, src.parts[row].dim)
        }
    });
    QIso { fwd, inv }
}

/// Left distributivity `(y ⊕ z) ⊗ w = (y ⊗ w) ⊕ (z ⊗ w)`. With the
/// lexicographic part order the two objects are literally equal, so the
/// isomorphism is an identity; it is still returned as a pair for symmetry
/// with [`distributivity_iso`].
pub fn distributivity_iso_left(y: &QObject, z: &QObject, w: &QObject) -> QIso {
    let src = y.coproduct(z).tensor(w);
    debug_assert_eq!(src, y.tensor(w).coproduct(&z.tensor(w)));
    QIso { fwd: QMorphism::identity(&src), inv: QMorphism::identity(&src) }
}

/// Structural permutation `⊗_j objs[j] → ⊗_j objs[perm⁻¹(j)]`: the family
/// index tuple is permuted, and every component carries the matching
/// permutation unitary on its tensor factors.
pub fn tensor_permutation(objs: &[QObject], perm: &[usize]) -> QMorphism {
    assert_eq!(objs.len(), perm.len(), "tensor_permutation: arity mismatch");
    let n = objs.len();
    let src = tensor_many(objs);
    let permuted: Vec<QObject> = {
        let mut v = vec![QObject::zero(); n];
        for j in 0..n {
            v[perm[j]] = objs[j].clone();
        }
        v
    };
    let dst = tensor_many(&permuted);
    let sizes: Vec<usize> = objs.iter().map(|o| o.len()).collect();
    let out_sizes: Vec<usize> = permuted.iter().map(|o| o.len()).collect();
    let dst_dims = dst.dims();

    let decode = |mut flat: usize, dims: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize; dims.len()];
        for k in (0..dims.len()).rev() {
            out[k] = flat % dims[k];
            flat /= dims[k];
        }
        out
    };
    let encode = |multi: &[usize], dims: &[usize]| -> usize {
        multi.iter().zip(dims).fold(0, |acc, (x, d)| acc * d + x)
    };

    QMorphism::from_fn(src.clone(), dst, |row, col| {
        let multi = decode(col, &sizes);
        let mut out_multi = vec![0usize; n];
        for j in 0..n {
            out_multi[perm[j]] = multi[j];
        }
        let want_row = encode(&out_multi, &out_sizes);
        let factor_dims: Vec<usize> = multi
            .iter()
            .enumerate()
            .map(|(j, &cj)| objs[j].parts[cj].dim)
            .collect();
        if row == want_row {
            let u = permutation_unitary(&factor_dims, perm);
            let k = KrausSet::new(u.cols(), u.rows(), vec![u]).expect("square unitary");
            LinMap::from_kraus(&k)
        } else {
            LinMap::zero(src.parts[col].dim, dst_dims[row])
        }
    })
}

/// The symmetry `σ : x ⊗ y → y ⊗ x`.
pub fn symmetry(x: &QObject, y: &QObject) -> QMorphism {
    tensor_permutation(&[x.clone(), y.clone()], &[1, 0])
}

/// The canonical trace-preserving morphism into the unit family: every
/// member is traced out into the one-dimensional component.
pub fn discard_morphism(x: &QObject) -> QMorphism {
    QMorphism::from_fn(x.clone(), QObject::unit(), |_, j| {
        crate::cpm::discard(x.parts[j].dim)
    })
}

/// Morphism classes used by the random generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismClass {
    /// Completely positive entries, no trace condition.
    Cp,
    /// Columns trace non-increasing.
    TraceNonIncreasing,
    /// Columns trace preserving.
    TracePreserving,
}

/// Samples a random morphism of the requested class between the given
/// families. For the trace-preserving class the destination must be
/// non-empty, since an empty column sum can never reach the identity.
pub fn random_morphism<R: Rng>(
    rng: &mut R,
    src: &QObject,
    dst: &QObject,
    class: MorphismClass,
    tol: &Tolerance,
) -> QMorphism {
    if class == MorphismClass::TracePreserving {
        assert!(
            !dst.is_empty() || src.is_empty(),
            "random_morphism: no trace-preserving morphism into the zero object"
        );
    }
    let sum_dout: usize = dst.parts.iter().map(|p| p.dim).sum();
    let mut attempts = 0;
    'outer: loop {
        attempts += 1;
        assert!(attempts <= 1000, "random_morphism: normalisation keeps failing");
        // per column: a kraus family per entry, normalised jointly; the
        // operator count must give the column gram full rank, so it grows
        // with the ratio of source to total destination dimension
        let mut entries = vec![Vec::new(); dst.len() * src.len().max(1)];
        for j in 0..src.len() {
            let din = src.parts[j].dim;
            let n_ops = din.div_ceil(sum_dout.max(1)).max(2);
            let mut column: Vec<KrausSet> = (0..dst.len())
                .map(|i| crate::cpm::random_kraus(rng, din, dst.parts[i].dim, n_ops))
                .collect();
            match class {
                MorphismClass::Cp => {}
                MorphismClass::TraceNonIncreasing | MorphismClass::TracePreserving => {
                    if dst.is_empty() {
                        continue;
                    }
                    let mut gram = ComplexMatrix::zeros(din, din);
                    for k in &column {
                        gram = gram.add(&k.gram());
                    }
                    let Some(s) = crate::linalg::inv_sqrt_psd(&gram, tol) else {
                        continue 'outer;
                    };
                    let shrink = if class == MorphismClass::TraceNonIncreasing {
                        rng.gen_range(0.3..0.95f64).sqrt()
                    } else {
                        1.0
                    };
                    for k in column.iter_mut() {
                        let ops = k
                            .ops
                            .iter()
                            .map(|op| op.matmul(&s).scale(crate::linalg::c(shrink, 0.0)))
                            .collect();
                        *k = KrausSet::new(k.din, k.dout, ops).expect("shapes preserved");
                    }
                }
            }
            for (i, k) in column.into_iter().enumerate() {
                entries[i * src.len() + j] = k.ops;
            }
        }
        let mor = QMorphism::from_fn(src.clone(), dst.clone(), |i, j| {
            let ops = entries[i * src.len() + j].clone();
            LinMap::from_kraus(&KrausSet::new(src.parts[j].dim, dst.parts[i].dim, ops).unwrap())
        });
        return mor;
    }
}
