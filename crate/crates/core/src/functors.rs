//! The three structure functors and their property checkers.
//!
//! * `hat_f` collapses a morphism of the free affine category to a single
//!   channel: permute the retained factors to the front, in destination
//!   order, then trace out the rest. It is the unique strict monoidal
//!   extension of the inclusion of labelled spaces.
//! * [`Psi`] extends `hat_f` to the coproduct completion, landing in the
//!   category of families: member `a` of a family becomes the tensor of
//!   its sequence, and a morphism becomes the matrix with `hat_f(f_a)` in
//!   row `map(a)` of column `a` and zeros elsewhere.
//! * [`Phi`] embeds finite sets: `[n]` becomes the `n`-member family of
//!   empty sequences, a function becomes a reindexing with identity
//!   components. In this strict presentation both monoidal comparison
//!   maps are identities.
//!
//! The checkers at the bottom verify functoriality, strong monoidality,
//! fullness and faithfulness, essential surjectivity, coproduct
//! preservation, and the multiplicativity bijection
//! `hom(Φb, c) × hom(Φb, c') ≅ hom(Φb, c ⊗ c')`, each reporting how much
//! evidence was examined or a counterexample string.
//!
//! Deliberately broken functor variants ([`PsiConstant`], [`PsiCorrupt`],
//! [`PhiNonUnit`]) are provided as negative controls: a healthy checker
//! must flag exactly their documented defects.

use crate::cpm::{tensor_map, unitary_channel, HObject, LinMap};
use crate::freecat::{
    AffineExtension, AffineMonoidal, Cat, EnumHom, FinCoproducts, Fwm, FwmMorphism, FwmObject,
    MonoidalCat, Plus, PlusMorphism, PlusObject,
};
use crate::linalg::{permutation_unitary, Tolerance};
use crate::qcat::{self, QIso, QMorphism, QObject};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FunctorsError {
    #[error("table lists {got} values, source set has {want} elements")]
    TableArity { got: usize, want: usize },
    #[error("table value {0} out of range for destination set of size {1}")]
    TableRange(usize, usize),
}

/// A function between the finite sets `[src]` and `[dst]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinSetMorphism {
    pub src: usize,
    pub dst: usize,
    pub table: Vec<usize>,
}

impl FinSetMorphism {
    pub fn new(src: usize, dst: usize, table: Vec<usize>) -> Result<Self, FunctorsError> {
        if table.len() != src {
            return Err(FunctorsError::TableArity { got: table.len(), want: src });
        }
        for &v in &table {
            if v >= dst {
                return Err(FunctorsError::TableRange(v, dst));
            }
        }
        Ok(FinSetMorphism { src, dst, table })
    }

    pub fn identity(n: usize) -> Self {
        FinSetMorphism { src: n, dst: n, table: (0..n).collect() }
    }

    /// The diagonal `[n] → [n]×[n]`, with the product indexed
    /// lexicographically.
    pub fn diagonal(n: usize) -> Self {
        FinSetMorphism { src: n, dst: n * n, table: (0..n).map(|x| x * n + x).collect() }
    }

    /// All functions `[src] → [dst]`, lexicographic in the table.
    pub fn all(src: usize, dst: usize) -> Vec<FinSetMorphism> {
        if src == 0 {
            return vec![FinSetMorphism { src, dst, table: vec![] }];
        }
        if dst == 0 {
            return vec![];
        }
        let mut out = Vec::with_capacity(dst.pow(src as u32));
        let mut table = vec![0usize; src];
        loop {
            out.push(FinSetMorphism { src, dst, table: table.clone() });
            let mut k = src;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                table[k] += 1;
                if table[k] < dst {
                    break;
                }
                table[k] = 0;
                if k == 0 {
                    return out;
                }
            }
        }
    }
}

/// The category of finite sets `[n]`, with the cartesian product as
/// monoidal structure (lexicographic indexing, left factor outer).
#[derive(Debug, Clone, Copy, Default)]
pub struct FinSet;

impl FinSet {
    pub fn proj1(&self, a: usize, b: usize) -> FinSetMorphism {
        FinSetMorphism { src: a * b, dst: a, table: (0..a * b).map(|p| p / b).collect() }
    }

    pub fn proj2(&self, a: usize, b: usize) -> FinSetMorphism {
        FinSetMorphism { src: a * b, dst: b, table: (0..a * b).map(|p| p % b).collect() }
    }

    /// The universal map `⟨f, g⟩ : c → a×b`.
    pub fn pairing(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> FinSetMorphism {
        assert_eq!(f.src, g.src, "pairing: common source required");
        let table = f.table.iter().zip(&g.table).map(|(&x, &y)| x * g.dst + y).collect();
        FinSetMorphism { src: f.src, dst: f.dst * g.dst, table }
    }

    pub fn inl(&self, a: usize, b: usize) -> FinSetMorphism {
        FinSetMorphism { src: a, dst: a + b, table: (0..a).collect() }
    }

    pub fn inr(&self, a: usize, b: usize) -> FinSetMorphism {
        FinSetMorphism { src: b, dst: a + b, table: (a..a + b).collect() }
    }

    pub fn copair(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> FinSetMorphism {
        assert_eq!(f.dst, g.dst, "copair: common destination required");
        let mut table = f.table.clone();
        table.extend(g.table.iter().copied());
        FinSetMorphism { src: f.src + g.src, dst: f.dst, table }
    }
}

impl Cat for FinSet {
    type Obj = usize;
    type Mor = FinSetMorphism;

    fn src(&self, f: &FinSetMorphism) -> usize {
        f.src
    }

    fn dst(&self, f: &FinSetMorphism) -> usize {
        f.dst
    }

    fn id(&self, x: &usize) -> FinSetMorphism {
        FinSetMorphism::identity(*x)
    }

    fn compose(&self, g: &FinSetMorphism, f: &FinSetMorphism) -> FinSetMorphism {
        assert_eq!(f.dst, g.src, "compose: endpoint mismatch");
        let table = f.table.iter().map(|&x| g.table[x]).collect();
        FinSetMorphism { src: f.src, dst: g.dst, table }
    }

    fn mor_eq(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> bool {
        f == g
    }
}

impl EnumHom for FinSet {
    fn hom(&self, x: &usize, y: &usize) -> Vec<FinSetMorphism> {
        FinSetMorphism::all(*x, *y)
    }
}

impl MonoidalCat for FinSet {
    fn unit_obj(&self) -> usize {
        1
    }

    fn tensor_obj(&self, a: &usize, b: &usize) -> usize {
        a * b
    }

    fn tensor_mor(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> FinSetMorphism {
        let mut table = Vec::with_capacity(f.src * g.src);
        for &x in &f.table {
            for &y in &g.table {
                table.push(x * g.dst + y);
            }
        }
        FinSetMorphism { src: f.src * g.src, dst: f.dst * g.dst, table }
    }
}

impl FinCoproducts for FinSet {
    fn coproduct_many(&self, parts: &[usize]) -> (usize, Vec<FinSetMorphism>) {
        let total: usize = parts.iter().sum();
        let mut injections = Vec::with_capacity(parts.len());
        let mut offset = 0;
        for &p in parts {
            injections.push(FinSetMorphism {
                src: p,
                dst: total,
                table: (offset..offset + p).collect(),
            });
            offset += p;
        }
        (total, injections)
    }

    fn copair_many(&self, legs: &[FinSetMorphism], dst: &usize) -> FinSetMorphism {
        let table: Vec<usize> = legs.iter().flat_map(|l| l.table.iter().copied()).collect();
        FinSetMorphism { src: table.len(), dst: *dst, table }
    }
}

/// A channel tagged with its labelled endpoints: a morphism of the
/// single-space fragment of the family category.
#[derive(Debug, Clone)]
pub struct QsMorphism {
    pub src: HObject,
    pub dst: HObject,
    pub map: LinMap,
}

/// The single-space fragment: objects are labelled spaces, morphisms are
/// superoperators. This is the affine monoidal target of `hat_f`.
#[derive(Debug, Clone, Copy)]
pub struct QPrimeS {
    pub tol: Tolerance,
}

impl Default for QPrimeS {
    fn default() -> Self {
        QPrimeS { tol: Tolerance::default() }
    }
}

impl Cat for QPrimeS {
    type Obj = HObject;
    type Mor = QsMorphism;

    fn src(&self, f: &QsMorphism) -> HObject {
        f.src.clone()
    }

    fn dst(&self, f: &QsMorphism) -> HObject {
        f.dst.clone()
    }

    fn id(&self, x: &HObject) -> QsMorphism {
        QsMorphism { src: x.clone(), dst: x.clone(), map: LinMap::identity(x.dim) }
    }

    fn compose(&self, g: &QsMorphism, f: &QsMorphism) -> QsMorphism {
        assert_eq!(f.dst, g.src, "compose: endpoint mismatch");
        QsMorphism { src: f.src.clone(), dst: g.dst.clone(), map: LinMap::compose(&g.map, &f.map) }
    }

    fn mor_eq(&self, f: &QsMorphism, g: &QsMorphism) -> bool {
        f.src == g.src && f.dst == g.dst && f.map.approx_eq(&g.map, &self.tol)
    }
}

impl MonoidalCat for QPrimeS {
    fn unit_obj(&self) -> HObject {
        HObject::unit()
    }

    fn tensor_obj(&self, a: &HObject, b: &HObject) -> HObject {
        a.tensor(b)
    }

    fn tensor_mor(&self, f: &QsMorphism, g: &QsMorphism) -> QsMorphism {
        QsMorphism {
            src: f.src.tensor(&g.src),
            dst: f.dst.tensor(&g.dst),
            map: tensor_map(&f.map, &g.map),
        }
    }
}

impl AffineMonoidal for QPrimeS {
    fn discard(&self, x: &HObject) -> QsMorphism {
        QsMorphism { src: x.clone(), dst: HObject::unit(), map: crate::cpm::discard(x.dim) }
    }

    fn permute(&self, xs: &[HObject], perm: &[usize]) -> QsMorphism {
        let dims: Vec<usize> = xs.iter().map(|h| h.dim).collect();
        let u = permutation_unitary(&dims, perm);
        let src = xs.iter().fold(HObject::unit(), |acc, h| acc.tensor(h));
        let mut permuted = vec![HObject::unit(); xs.len()];
        for (j, h) in xs.iter().enumerate() {
            permuted[perm[j]] = h.clone();
        }
        let dst = permuted.iter().fold(HObject::unit(), |acc, h| acc.tensor(h));
        QsMorphism { src, dst, map: unitary_channel(&u) }
    }
}

/// Tensor of a sequence of labelled spaces, the object part of `hat_f`.
pub fn hat_f_obj(x: &FwmObject) -> HObject {
    x.seq.iter().fold(HObject::unit(), |acc, h| acc.tensor(h))
}

/// The channel `L(⊗src) → L(⊗dst)` realizing a free affine morphism:
/// conjugation by the permutation that brings the retained factors to the
/// front in destination order, followed by a partial trace over the rest.
/// Always trace preserving.
pub fn hat_f(f: &FwmMorphism) -> LinMap {
    let target = QPrimeS::default();
    AffineExtension::new(&target, |h: &HObject| h.clone()).on_mor(f).map
}

/// The family category as a target for coproduct extensions.
#[derive(Debug, Clone, Copy)]
pub struct QCat {
    pub tol: Tolerance,
}

impl Default for QCat {
    fn default() -> Self {
        QCat { tol: Tolerance::default() }
    }
}

impl Cat for QCat {
    type Obj = QObject;
    type Mor = QMorphism;

    fn src(&self, f: &QMorphism) -> QObject {
        f.src().clone()
    }

    fn dst(&self, f: &QMorphism) -> QObject {
        f.dst().clone()
    }

    fn id(&self, x: &QObject) -> QMorphism {
        QMorphism::identity(x)
    }

    fn compose(&self, g: &QMorphism, f: &QMorphism) -> QMorphism {
        QMorphism::compose(g, f)
    }

    fn mor_eq(&self, f: &QMorphism, g: &QMorphism) -> bool {
        f.approx_eq(g, &self.tol)
    }
}

impl MonoidalCat for QCat {
    fn unit_obj(&self) -> QObject {
        QObject::unit()
    }

    fn tensor_obj(&self, a: &QObject, b: &QObject) -> QObject {
        a.tensor(b)
    }

    fn tensor_mor(&self, f: &QMorphism, g: &QMorphism) -> QMorphism {
        qcat::tensor_mor(f, g)
    }
}

impl FinCoproducts for QCat {
    fn coproduct_many(&self, parts: &[QObject]) -> (QObject, Vec<QMorphism>) {
        qcat::coproduct_many(parts)
    }

    fn copair_many(&self, legs: &[QMorphism], dst: &QObject) -> QMorphism {
        qcat::copair_many(legs, dst)
    }
}

/// Interface shared by the genuine family functor and its negative
/// controls. The monoidal comparison of the genuine functor is the
/// identity, so no comparison data is carried.
pub trait PsiLike: Sync {
    fn name(&self) -> &'static str;
    fn on_obj(&self, x: &PlusObject<FwmObject>) -> QObject;
    fn on_mor(&self, f: &PlusMorphism<FwmObject, FwmMorphism>) -> QMorphism;
}

/// Interface shared by the genuine finite-set embedding and its negative
/// controls.
pub trait PhiLike: Sync {
    fn name(&self) -> &'static str;
    fn on_obj(&self, n: usize) -> PlusObject<FwmObject>;
    fn on_mor(&self, f: &FinSetMorphism) -> PlusMorphism<FwmObject, FwmMorphism>;
}

/// The coproduct-preserving functor from the completion to families:
/// member `a` becomes the tensor of its sequence; a morphism becomes the
/// block matrix with `hat_f(f_a)` at row `map(a)`, column `a`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Psi;

pub fn psi_obj(x: &PlusObject<FwmObject>) -> QObject {
    QObject::new(x.family.iter().map(hat_f_obj).collect())
}

pub fn psi_mor(f: &PlusMorphism<FwmObject, FwmMorphism>) -> QMorphism {
    let src = psi_obj(&f.src);
    let dst = psi_obj(&f.dst);
    QMorphism::from_fn(src.clone(), dst.clone(), |b, a| {
        if f.map[a] == b {
            hat_f(&f.comps[a])
        } else {
            LinMap::zero(src.parts[a].dim, dst.parts[b].dim)
        }
    })
}

impl PsiLike for Psi {
    fn name(&self) -> &'static str {
        "psi"
    }

    fn on_obj(&self, x: &PlusObject<FwmObject>) -> QObject {
        psi_obj(x)
    }

    fn on_mor(&self, f: &PlusMorphism<FwmObject, FwmMorphism>) -> QMorphism {
        psi_mor(f)
    }
}

/// The finite-set embedding: `[n]` is the `n`-member family of empty
/// sequences, a function is a pure reindexing.
#[derive(Debug, Clone, Copy, Default)]
pub struct Phi;

pub fn phi_obj(n: usize) -> PlusObject<FwmObject> {
    PlusObject::new(vec![FwmObject::unit(); n])
}

pub fn phi_mor(f: &FinSetMorphism) -> PlusMorphism<FwmObject, FwmMorphism> {
    PlusMorphism {
        src: phi_obj(f.src),
        dst: phi_obj(f.dst),
        map: f.table.clone(),
        comps: vec![FwmMorphism::identity(&FwmObject::unit()); f.src],
    }
}

impl PhiLike for Phi {
    fn name(&self) -> &'static str {
        "phi"
    }

    fn on_obj(&self, n: usize) -> PlusObject<FwmObject> {
        phi_obj(n)
    }

    fn on_mor(&self, f: &FinSetMorphism) -> PlusMorphism<FwmObject, FwmMorphism> {
        phi_mor(f)
    }
}

/// Negative control: collapses every family to a fixed one-member object
/// and every morphism to its identity. Functorial, but neither monoidal
/// nor coproduct preserving nor essentially surjective.
#[derive(Debug, Clone)]
pub struct PsiConstant {
    pub at: QObject,
}

impl Default for PsiConstant {
    fn default() -> Self {
        PsiConstant { at: QObject::single(HObject::new("Z", 2).unwrap()) }
    }
}

impl PsiLike for PsiConstant {
    fn name(&self) -> &'static str {
        "psi-constant"
    }

    fn on_obj(&self, _x: &PlusObject<FwmObject>) -> QObject {
        self.at.clone()
    }

    fn on_mor(&self, _f: &PlusMorphism<FwmObject, FwmMorphism>) -> QMorphism {
        QMorphism::identity(&self.at)
    }
}

/// Negative control: the genuine functor with the first live matrix entry
/// rescaled, which silently breaks composition.
#[derive(Debug, Clone)]
pub struct PsiCorrupt {
    pub scale: f64,
}

impl Default for PsiCorrupt {
    fn default() -> Self {
        PsiCorrupt { scale: 1.25 }
    }
}

impl PsiLike for PsiCorrupt {
    fn name(&self) -> &'static str {
        "psi-corrupt"
    }

    fn on_obj(&self, x: &PlusObject<FwmObject>) -> QObject {
        psi_obj(x)
    }

    fn on_mor(&self, f: &PlusMorphism<FwmObject, FwmMorphism>) -> QMorphism {
        let honest = psi_mor(f);
        if f.src.is_empty() {
            return honest;
        }
        let (src, dst) = (honest.src().clone(), honest.dst().clone());
        let hit_row = f.map[0];
        QMorphism::from_fn(src, dst, |b, a| {
            let e = honest.entry(b, a).clone();
            if a == 0 && b == hit_row {
                e.scale(self.scale)
            } else {
                e
            }
        })
    }
}

/// Negative control: embeds `[n]` as `n` copies of a fixed one-factor
/// sequence instead of the empty sequence. Still full and faithful and
/// coproduct preserving, but not monoidal and the multiplicativity
/// bijection collapses.
#[derive(Debug, Clone)]
pub struct PhiNonUnit {
    pub member: FwmObject,
}

impl PhiNonUnit {
    pub fn new(h: HObject) -> Self {
        PhiNonUnit { member: FwmObject::single(h) }
    }
}

impl PhiLike for PhiNonUnit {
    fn name(&self) -> &'static str {
        "phi-nonunit"
    }

    fn on_obj(&self, n: usize) -> PlusObject<FwmObject> {
        PlusObject::new(vec![self.member.clone(); n])
    }

    fn on_mor(&self, f: &FinSetMorphism) -> PlusMorphism<FwmObject, FwmMorphism> {
        PlusMorphism {
            src: self.on_obj(f.src),
            dst: self.on_obj(f.dst),
            map: f.table.clone(),
            comps: vec![FwmMorphism::identity(&self.member); f.src],
        }
    }
}

/// Indices of the empty-sequence members of a family. A morphism out of
/// an all-unit family must land its reindexing inside this set, which is
/// what makes hom-sets out of embedded finite sets pure function spaces.
pub fn unit_positions(c: &PlusObject<FwmObject>) -> Vec<usize> {
    c.family
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_empty())
        .map(|(i, _)| i)
        .collect()
}

/// The singleton-sequence preimage of a family of spaces, together with
/// the isomorphism witnessing that the functor sends it back to the
/// original object. In this strict presentation the image is equal to the
/// input, so both directions of the isomorphism are identity matrices.
pub fn choice_of_preimages(d: &QObject) -> (PlusObject<FwmObject>, QIso) {
    let pre = PlusObject::new(d.parts.iter().map(|h| FwmObject::single(h.clone())).collect());
    let img = psi_obj(&pre);
    let fwd = QMorphism::from_fn(img.clone(), d.clone(), |i, j| {
        if i == j {
            LinMap::identity(d.parts[i].dim)
        } else {
            LinMap::zero(img.parts[j].dim, d.parts[i].dim)
        }
    });
    let inv = QMorphism::from_fn(d.clone(), img.clone(), |i, j| {
        if i == j {
            LinMap::identity(img.parts[i].dim)
        } else {
            LinMap::zero(d.parts[j].dim, img.parts[i].dim)
        }
    });
    (pre, QIso { fwd, inv })
}

/// Matches families member by member through a dimension-sorted
/// permutation and packages the identity-entry isomorphism, or reports
/// that the dimension multisets differ. Invertible family morphisms
/// permute members of equal dimension, so the multiset is a complete iso
/// invariant.
pub fn family_permutation_iso(x: &QObject, y: &QObject) -> Option<QIso> {
    if x.dim_multiset() != y.dim_multiset() {
        return None;
    }
    let mut xi: Vec<usize> = (0..x.len()).collect();
    let mut yi: Vec<usize> = (0..y.len()).collect();
    xi.sort_by_key(|&a| x.parts[a].dim);
    yi.sort_by_key(|&b| y.parts[b].dim);
    let mut perm = vec![0usize; x.len()];
    for (a, b) in xi.into_iter().zip(yi) {
        perm[a] = b;
    }
    let fwd = QMorphism::from_fn(x.clone(), y.clone(), |b, a| {
        if perm[a] == b {
            LinMap::identity(x.parts[a].dim)
        } else {
            LinMap::zero(x.parts[a].dim, y.parts[b].dim)
        }
    });
    let inv = QMorphism::from_fn(y.clone(), x.clone(), |a, b| {
        if perm[a] == b {
            LinMap::identity(y.parts[b].dim)
        } else {
            LinMap::zero(y.parts[b].dim, x.parts[a].dim)
        }
    });
    Some(QIso { fwd, inv })
}

/// Outcome of one multiplicativity case: how large both sides were and
/// whether the explicit pairing bijection was exercised (it is skipped
/// when the candidate functor fails strictness, which is itself reported
/// as an error).
#[derive(Debug, Clone, PartialEq)]
pub struct Eq1Case {
    pub lhs_product: usize,
    pub rhs_count: usize,
    pub paired: usize,
}

/// Verifies `hom(Φb, c) × hom(Φb, c') ≅ hom(Φb, c ⊗ c')` by exhaustive
/// enumeration: cardinalities must agree, and the canonical pairing
/// `(u, v) ↦ (u ⊗ v) ∘ Φ(diagonal)` must be a bijection.
pub fn check_eq1_case(
    phi: &dyn PhiLike,
    b: usize,
    c: &PlusObject<FwmObject>,
    cp: &PlusObject<FwmObject>,
) -> Result<Eq1Case, String> {
    let plus = Plus { base: Fwm };
    let phib = phi.on_obj(b);
    let hom_c = plus.hom(&phib, c);
    let hom_cp = plus.hom(&phib, cp);
    let ccp = plus.tensor_obj(c, cp);
    let hom_ccp = plus.hom(&phib, &ccp);
    if hom_c.len() * hom_cp.len() != hom_ccp.len() {
        return Err(format!(
            "cardinality mismatch at b={b}, c={c:?}, c'={cp:?}: {}x{} vs {}",
            hom_c.len(),
            hom_cp.len(),
            hom_ccp.len()
        ));
    }
    let phibb = phi.on_obj(b * b);
    if phibb != plus.tensor_obj(&phib, &phib) {
        return Err(format!(
            "monoidal comparison at b={b} is not an identity, pairing undefined"
        ));
    }
    let diag = phi.on_mor(&FinSetMorphism::diagonal(b));
    let mut hit = vec![false; hom_ccp.len()];
    for u in &hom_c {
        for v in &hom_cp {
            let w = plus.compose(&plus.tensor_mor(u, v), &diag);
            let idx = hom_ccp
                .iter()
                .position(|h| plus.mor_eq(h, &w))
                .ok_or_else(|| format!("pairing left the hom-set at b={b}"))?;
            if hit[idx] {
                return Err(format!("pairing not injective at b={b}"));
            }
            hit[idx] = true;
        }
    }
    Ok(Eq1Case {
        lhs_product: hom_c.len() * hom_cp.len(),
        rhs_count: hom_ccp.len(),
        paired: hom_ccp.len(),
    })
}

/// Exact functoriality of a finite-set embedding over all sets of size at
/// most `n_max`: identities and all composable pairs.
pub fn check_phi_functorial(phi: &dyn PhiLike, n_max: usize) -> Result<usize, String> {
    let fs = FinSet;
    let plus = Plus { base: Fwm };
    let mut checked = 0;
    for n in 0..=n_max {
        let lhs = phi.on_mor(&fs.id(&n));
        if !plus.mor_eq(&lhs, &plus.id(&phi.on_obj(n))) {
            return Err(format!("identity not preserved at [{n}]"));
        }
        checked += 1;
    }
    for a in 0..=n_max {
        for b in 0..=n_max {
            for c in 0..=n_max {
                for f in FinSetMorphism::all(a, b) {
                    for g in FinSetMorphism::all(b, c) {
                        let lhs = phi.on_mor(&fs.compose(&g, &f));
                        let rhs = plus.compose(&phi.on_mor(&g), &phi.on_mor(&f));
                        if !plus.mor_eq(&lhs, &rhs) {
                            return Err(format!("composition broken at {f:?}; {g:?}"));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Exact strong monoidality of a finite-set embedding: the image of a
/// product must literally equal the tensor of the images, on objects and
/// on all product morphisms with factor sets of size at most `n_max`.
pub fn check_phi_strong_monoidal(phi: &dyn PhiLike, n_max: usize) -> Result<usize, String> {
    let fs = FinSet;
    let plus = Plus { base: Fwm };
    if phi.on_obj(1) != plus.unit_obj() {
        return Err("unit is not sent to the unit family".to_string());
    }
    let mut checked = 1;
    for a in 0..=n_max {
        for b in 0..=n_max {
            if phi.on_obj(a * b) != plus.tensor_obj(&phi.on_obj(a), &phi.on_obj(b)) {
                return Err(format!("object comparison fails at [{a}]x[{b}]"));
            }
            checked += 1;
        }
    }
    for a in 0..=n_max {
        for ap in 0..=n_max {
            for b in 0..=n_max {
                for bp in 0..=n_max {
                    for f in FinSetMorphism::all(a, ap) {
                        for g in FinSetMorphism::all(b, bp) {
                            let lhs = phi.on_mor(&fs.tensor_mor(&f, &g));
                            let rhs = plus.tensor_mor(&phi.on_mor(&f), &phi.on_mor(&g));
                            if !plus.mor_eq(&lhs, &rhs) {
                                return Err(format!("naturality fails at {f:?} x {g:?}"));
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Fullness and faithfulness by enumeration: the embedding must induce a
/// bijection from functions onto the full hom-set of the images.
pub fn check_phi_full_faithful(phi: &dyn PhiLike, n_max: usize) -> Result<usize, String> {
    let plus = Plus { base: Fwm };
    let mut checked = 0;
    for a in 0..=n_max {
        for b in 0..=n_max {
            let image: Vec<_> = FinSetMorphism::all(a, b)
                .iter()
                .map(|f| phi.on_mor(f))
                .collect();
            let hom = plus.hom(&phi.on_obj(a), &phi.on_obj(b));
            if image.len() != hom.len() {
                return Err(format!(
                    "hom([{a}],[{b}]) has {} functions but the image hom-set has {}",
                    image.len(),
                    hom.len()
                ));
            }
            let mut hit = vec![false; hom.len()];
            for w in &image {
                let idx = hom
                    .iter()
                    .position(|h| plus.mor_eq(h, w))
                    .ok_or_else(|| format!("image morphism missing from hom at [{a}]->[{b}]"))?;
                if hit[idx] {
                    return Err(format!("embedding not faithful at [{a}]->[{b}]"));
                }
                hit[idx] = true;
            }
            checked += hom.len();
        }
    }
    Ok(checked)
}

/// Exact coproduct preservation of a finite-set embedding: images of sums
/// are sums, injections map to injections, and copairing commutes with
/// the embedding for all legs with sets of size at most `n_max`.
pub fn check_phi_preserves_coproducts(phi: &dyn PhiLike, n_max: usize) -> Result<usize, String> {
    let fs = FinSet;
    let plus = Plus { base: Fwm };
    let mut checked = 0;
    for a in 0..=n_max {
        for b in 0..=n_max {
            let (total, injections) = plus.coproduct_many(&[phi.on_obj(a), phi.on_obj(b)]);
            if phi.on_obj(a + b) != total {
                return Err(format!("object comparison fails at [{a}]+[{b}]"));
            }
            if !plus.mor_eq(&phi.on_mor(&fs.inl(a, b)), &injections[0])
                || !plus.mor_eq(&phi.on_mor(&fs.inr(a, b)), &injections[1])
            {
                return Err(format!("injections differ at [{a}]+[{b}]"));
            }
            checked += 1;
            for c in 0..=n_max {
                for h in FinSetMorphism::all(a, c) {
                    for k in FinSetMorphism::all(b, c) {
                        let lhs = phi.on_mor(&fs.copair(&h, &k));
                        let legs = [phi.on_mor(&h), phi.on_mor(&k)];
                        let rhs = plus.copair_many(&legs, &phi.on_obj(c));
                        if !plus.mor_eq(&lhs, &rhs) {
                            return Err(format!("copairing differs at {h:?}, {k:?}"));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Functoriality of a family functor over the given completion objects:
/// identities exactly, then composable pairs enumerated in order up to
/// `pair_cap`, compared numerically.
pub fn check_psi_functorial(
    psi: &dyn PsiLike,
    objs: &[PlusObject<FwmObject>],
    tol: &Tolerance,
    pair_cap: usize,
) -> Result<usize, String> {
    let plus = Plus { base: Fwm };
    let mut checked = 0;
    for x in objs {
        let lhs = psi.on_mor(&plus.id(x));
        if !lhs.approx_eq(&QMorphism::identity(&psi.on_obj(x)), tol) {
            return Err(format!("identity not preserved at {x:?}"));
        }
        checked += 1;
    }
    let mut pairs = 0;
    'outer: for x in objs {
        for y in objs {
            let fs = plus.hom(x, y);
            if fs.is_empty() {
                continue;
            }
            for z in objs {
                let gs = plus.hom(y, z);
                for f in &fs {
                    for g in &gs {
                        let lhs = psi.on_mor(&plus.compose(g, f));
                        let rhs = QMorphism::compose(&psi.on_mor(g), &psi.on_mor(f));
                        if !lhs.approx_eq(&rhs, tol) {
                            return Err(format!(
                                "composition broken, deviation {:.3e} at {f:?}; {g:?}",
                                lhs.max_deviation(&rhs)
                            ));
                        }
                        checked += 1;
                        pairs += 1;
                        if pairs >= pair_cap {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Strong monoidality of a family functor: unit and tensor objects must
/// match exactly (the comparison is an identity in this strict setting),
/// and tensored morphisms must agree numerically, up to `pair_cap` pairs.
pub fn check_psi_strong_monoidal(
    psi: &dyn PsiLike,
    objs: &[PlusObject<FwmObject>],
    tol: &Tolerance,
    pair_cap: usize,
) -> Result<usize, String> {
    let plus = Plus { base: Fwm };
    if psi.on_obj(&plus.unit_obj()) != QObject::unit() {
        return Err("unit family is not sent to the unit".to_string());
    }
    let mut checked = 1;
    for x in objs {
        for y in objs {
            let lhs = psi.on_obj(&plus.tensor_obj(x, y));
            let rhs = psi.on_obj(x).tensor(&psi.on_obj(y));
            if lhs != rhs {
                return Err(format!("object comparison fails at {x:?} ⊗ {y:?}"));
            }
            checked += 1;
        }
    }
    let mut pairs = 0;
    'outer: for x in objs {
        for y in objs {
            let fs = plus.hom(x, y);
            if fs.is_empty() {
                continue;
            }
            for u in objs {
                for v in objs {
                    let gs = plus.hom(u, v);
                    for f in &fs {
                        for g in &gs {
                            let lhs = psi.on_mor(&plus.tensor_mor(f, g));
                            let rhs = qcat::tensor_mor(&psi.on_mor(f), &psi.on_mor(g));
                            if !lhs.approx_eq(&rhs, tol) {
                                return Err(format!(
                                    "tensor naturality fails, deviation {:.3e} at {f:?} ⊗ {g:?}",
                                    lhs.max_deviation(&rhs)
                                ));
                            }
                            checked += 1;
                            pairs += 1;
                            if pairs >= pair_cap {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Coproduct preservation of a family functor: objects and injections
/// exactly, copairings numerically over enumerated legs up to `pair_cap`.
pub fn check_psi_preserves_coproducts(
    psi: &dyn PsiLike,
    objs: &[PlusObject<FwmObject>],
    tol: &Tolerance,
    pair_cap: usize,
) -> Result<usize, String> {
    let plus = Plus { base: Fwm };
    let mut checked = 0;
    let mut pairs = 0;
    'outer: for x in objs {
        for y in objs {
            let (total, injections) = plus.coproduct_many(&[x.clone(), y.clone()]);
            let (q_total, q_injections) =
                qcat::coproduct_many(&[psi.on_obj(x), psi.on_obj(y)]);
            if psi.on_obj(&total) != q_total {
                return Err(format!("object comparison fails at {x:?} ⊕ {y:?}"));
            }
            for (i, inj) in injections.iter().enumerate() {
                if !psi.on_mor(inj).approx_eq(&q_injections[i], tol) {
                    return Err(format!("injection {i} differs at {x:?} ⊕ {y:?}"));
                }
            }
            checked += 1;
            for z in objs {
                let hs = plus.hom(x, z);
                let ks = plus.hom(y, z);
                for h in &hs {
                    for k in &ks {
                        let glued = plus.copair_many(
                            &[
                                plus.compose(&plus.id(z), h),
                                plus.compose(&plus.id(z), k),
                            ],
                            z,
                        );
                        let lhs = psi.on_mor(&glued);
                        let rhs = qcat::copair_many(
                            &[psi.on_mor(h), psi.on_mor(k)],
                            &psi.on_obj(z),
                        );
                        if !lhs.approx_eq(&rhs, tol) {
                            return Err(format!("copairing differs at {h:?}, {k:?}"));
                        }
                        checked += 1;
                        pairs += 1;
                        if pairs >= pair_cap {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Essential surjectivity: every family of spaces must be isomorphic to
/// the image of some completion object. The canonical singleton-sequence
/// preimage is tried first, then the supplied fallback objects; an
/// explicit isomorphism is constructed and verified in every case.
pub fn check_psi_essentially_surjective(
    psi: &dyn PsiLike,
    q_objs: &[QObject],
    fallback: &[PlusObject<FwmObject>],
    tol: &Tolerance,
) -> Result<usize, String> {
    'outer: for d in q_objs {
        let (canonical, _) = choice_of_preimages(d);
        let candidates = std::iter::once(&canonical).chain(fallback.iter());
        for x in candidates {
            let img = psi.on_obj(x);
            if let Some(iso) = family_permutation_iso(&img, d) {
                if iso.verify(tol) {
                    continue 'outer;
                }
            }
        }
        return Err(format!("no preimage found for {:?}", d.dim_multiset()));
    }
    Ok(q_objs.len())
}

/// A functor packaged for the property checker.
pub enum FunctorWitness<'a> {
    Phi(&'a dyn PhiLike),
    Psi(&'a dyn PsiLike),
}

/// Everything the property checker needs about the ambient universe.
pub struct FunctorCheckInputs<'a> {
    pub finset_max: usize,
    pub plus_objs: &'a [PlusObject<FwmObject>],
    pub q_objs: &'a [QObject],
    pub tol: Tolerance,
    pub pair_cap: usize,
}

/// Runs every structural property appropriate to the witness and returns
/// `(check name, evidence count or counterexample)` pairs in a fixed
/// order.
pub fn check_functor_props(
    w: &FunctorWitness,
    inp: &FunctorCheckInputs,
) -> Vec<(String, Result<usize, String>)> {
    match w {
        FunctorWitness::Phi(phi) => vec![
            ("phi-functorial".to_string(), check_phi_functorial(*phi, inp.finset_max)),
            (
                "phi-strong-monoidal".to_string(),
                check_phi_strong_monoidal(*phi, inp.finset_max),
            ),
            ("phi-full-faithful".to_string(), check_phi_full_faithful(*phi, inp.finset_max)),
            (
                "phi-preserves-coproducts".to_string(),
                check_phi_preserves_coproducts(*phi, inp.finset_max),
            ),
        ],
        FunctorWitness::Psi(psi) => vec![
            (
                "psi-functorial".to_string(),
                check_psi_functorial(*psi, inp.plus_objs, &inp.tol, inp.pair_cap),
            ),
            (
                "psi-strong-monoidal".to_string(),
                check_psi_strong_monoidal(*psi, inp.plus_objs, &inp.tol, inp.pair_cap),
            ),
            (
                "psi-essentially-surjective".to_string(),
                check_psi_essentially_surjective(*psi, inp.q_objs, inp.plus_objs, &inp.tol),
            ),
            (
                "psi-preserves-coproducts".to_string(),
                check_psi_preserves_coproducts(*psi, inp.plus_objs, &inp.tol, inp.pair_cap),
            ),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freecat::extend_coproduct_obj;
    use crate::linalg::{approx_eq, partial_trace, ComplexMatrix};

    fn ha() -> HObject {
        HObject::new("A", 2).unwrap()
    }

    fn hb() -> HObject {
        HObject::new("B", 3).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn small_plus_objs() -> Vec<PlusObject<FwmObject>> {
        vec![
            PlusObject::new(vec![]),
            PlusObject::new(vec![FwmObject::unit()]),
            PlusObject::new(vec![FwmObject::single(ha())]),
            PlusObject::new(vec![FwmObject::unit(), FwmObject::single(ha())]),
            PlusObject::new(vec![FwmObject::new(vec![ha(), ha()])]),
        ]
    }

    #[test]
    fn hat_f_on_identity_is_identity() {
        let x = FwmObject::new(vec![ha(), hb()]);
        let f = FwmMorphism::identity(&x);
        assert!(hat_f(&f).approx_eq(&LinMap::identity(6), &tol()));
    }

    #[test]
    fn hat_f_drop_second_is_partial_trace() {
        let src = FwmObject::new(vec![ha(), hb()]);
        let dst = FwmObject::single(ha());
        let f = FwmMorphism::new(src, dst, vec![0]).unwrap();
        let m = hat_f(&f);
        assert!(m.is_trace_preserving(&tol()));
        // apply to a non-product state and compare against the direct trace
        let mut rho = ComplexMatrix::zeros(6, 6);
        for i in 0..6 {
            for j in 0..6 {
                rho.set(i, j, crate::linalg::c(0.1 * (i as f64 + 1.0), 0.02 * (j as f64 - 2.0)));
            }
        }
        let rho = rho.add(&rho.adjoint());
        let expected = partial_trace(&rho, &[2, 3], &[0]).unwrap();
        assert!(approx_eq(&m.apply(&rho), &expected, &tol()));
    }

    #[test]
    fn hat_f_swap_is_permutation_conjugation() {
        let src = FwmObject::new(vec![ha(), hb()]);
        let dst = FwmObject::new(vec![hb(), ha()]);
        let f = FwmMorphism::new(src, dst, vec![1, 0]).unwrap();
        let expected = unitary_channel(&permutation_unitary(&[2, 3], &[1, 0]));
        assert!(hat_f(&f).approx_eq(&expected, &tol()));
    }

    #[test]
    fn hat_f_respects_composition_and_tensor() {
        let fwm = Fwm;
        let x = FwmObject::new(vec![ha(), hb(), ha()]);
        let y = FwmObject::new(vec![ha(), ha()]);
        let z = FwmObject::single(ha());
        let f = FwmMorphism::new(x, y.clone(), vec![2, 0]).unwrap();
        let g = FwmMorphism::new(y, z, vec![1]).unwrap();
        let lhs = hat_f(&fwm.compose(&g, &f));
        let rhs = LinMap::compose(&hat_f(&g), &hat_f(&f));
        assert!(lhs.approx_eq(&rhs, &tol()));

        let p = FwmMorphism::new(FwmObject::new(vec![ha(), ha()]), FwmObject::single(ha()), vec![0])
            .unwrap();
        let q = FwmMorphism::new(FwmObject::single(hb()), FwmObject::single(hb()), vec![0]).unwrap();
        let lhs = hat_f(&fwm.tensor_mor(&p, &q));
        let rhs = tensor_map(&hat_f(&p), &hat_f(&q));
        assert!(lhs.approx_eq(&rhs, &tol()));
    }

    #[test]
    fn psi_obj_tensors_each_member() {
        let x = PlusObject::new(vec![FwmObject::new(vec![ha(), hb()])]);
        let img = psi_obj(&x);
        assert_eq!(img.len(), 1);
        assert_eq!(img.parts[0].dim, 6);
        assert_eq!(img.parts[0].label, "A*B");
    }

    #[test]
    fn psi_identity_and_composition() {
        let plus = Plus { base: Fwm };
        let objs = small_plus_objs();
        assert!(check_psi_functorial(&Psi, &objs, &tol(), 500).is_ok());
        // every image morphism lands in the family category's good class
        for x in &objs {
            for y in &objs {
                for f in plus.hom(x, y) {
                    assert!(psi_mor(&f).is_qprime(&tol()));
                }
            }
        }
    }

    #[test]
    fn psi_matches_the_generic_coproduct_extension() {
        let plus = Plus { base: Fwm };
        let q = QCat::default();
        let objs = small_plus_objs();
        for x in &objs {
            let (obj, _) = extend_coproduct_obj::<Fwm, _>(
                &q,
                |s| QObject::single(hat_f_obj(s)),
                x,
            );
            assert_eq!(obj, psi_obj(x));
            for y in &objs {
                for f in plus.hom(x, y) {
                    let ext = crate::freecat::extend_coproduct_mor::<Fwm, _>(
                        &q,
                        |s| QObject::single(hat_f_obj(s)),
                        |m| {
                            QMorphism::from_fn(
                                QObject::single(hat_f_obj(&m.src)),
                                QObject::single(hat_f_obj(&m.dst)),
                                |_, _| hat_f(m),
                            )
                        },
                        &f,
                    );
                    assert!(ext.approx_eq(&psi_mor(&f), &tol()));
                }
            }
        }
    }

    #[test]
    fn psi_strong_monoidal_and_coproducts_pass() {
        let objs = small_plus_objs();
        assert!(check_psi_strong_monoidal(&Psi, &objs, &tol(), 200).is_ok());
        assert!(check_psi_preserves_coproducts(&Psi, &objs, &tol(), 200).is_ok());
    }

    #[test]
    fn phi_hom_count_is_nine_and_embedding_is_full_faithful() {
        let plus = Plus { base: Fwm };
        assert_eq!(plus.hom(&phi_obj(2), &phi_obj(3)).len(), 9);
        assert!(check_phi_full_faithful(&Phi, 3).is_ok());
        assert!(check_phi_functorial(&Phi, 3).is_ok());
        assert!(check_phi_strong_monoidal(&Phi, 2).is_ok());
        assert!(check_phi_preserves_coproducts(&Phi, 2).is_ok());
    }

    #[test]
    fn eq1_trivial_and_spec_sized_cases() {
        let unit_family = PlusObject::new(vec![FwmObject::unit()]);
        // empty exponent: both sides singletons
        let case = check_eq1_case(&Phi, 0, &unit_family, &unit_family).unwrap();
        assert_eq!((case.lhs_product, case.rhs_count), (1, 1));
        let case = check_eq1_case(&Phi, 1, &unit_family, &unit_family).unwrap();
        assert_eq!((case.lhs_product, case.rhs_count), (1, 1));
        // two unit members and one loaded member against one unit member
        let c = PlusObject::new(vec![
            FwmObject::unit(),
            FwmObject::unit(),
            FwmObject::single(ha()),
        ]);
        let cp = PlusObject::new(vec![FwmObject::unit()]);
        let case = check_eq1_case(&Phi, 2, &c, &cp).unwrap();
        assert_eq!((case.lhs_product, case.rhs_count), (4, 4));
        assert_eq!(unit_positions(&c), vec![0, 1]);
    }

    #[test]
    fn choice_of_preimages_roundtrips_exactly() {
        let d = QObject::new(vec![ha(), hb()]);
        let (pre, iso) = choice_of_preimages(&d);
        assert_eq!(pre.family.len(), 2);
        assert_eq!(psi_obj(&pre), d);
        assert!(iso.verify(&tol()));
        let single = QObject::single(ha());
        let (pre, iso) = choice_of_preimages(&single);
        assert_eq!(psi_obj(&pre), single);
        assert!(iso.verify(&tol()));
    }

    #[test]
    fn essential_surjectivity_over_sample_families() {
        let q_objs = vec![
            QObject::unit(),
            QObject::zero(),
            QObject::single(ha()),
            QObject::new(vec![ha(), hb()]),
            QObject::new(vec![hb(), ha(), ha()]),
        ];
        assert!(check_psi_essentially_surjective(&Psi, &q_objs, &[], &tol()).is_ok());
    }

    #[test]
    fn family_permutation_iso_matches_dimension_multisets() {
        let x = QObject::new(vec![ha(), hb()]);
        let y = QObject::new(vec![hb(), ha()]);
        let iso = family_permutation_iso(&x, &y).unwrap();
        assert!(iso.verify(&tol()));
        assert!(family_permutation_iso(&x, &QObject::single(ha())).is_none());
    }

    #[test]
    fn finset_product_and_coproduct_are_universal() {
        let fs = FinSet;
        for a in 0..=3usize {
            for b in 0..=3usize {
                let p1 = fs.proj1(a, b);
                let p2 = fs.proj2(a, b);
                for c in 0..=2usize {
                    for f in FinSetMorphism::all(c, a) {
                        for g in FinSetMorphism::all(c, b) {
                            let pair = fs.pairing(&f, &g);
                            assert_eq!(fs.compose(&p1, &pair), f);
                            assert_eq!(fs.compose(&p2, &pair), g);
                        }
                    }
                }
                let (total, injs) = fs.coproduct_many(&[a, b]);
                assert_eq!(total, a + b);
                for c in 0..=2usize {
                    for h in FinSetMorphism::all(a, c) {
                        for k in FinSetMorphism::all(b, c) {
                            let glued = fs.copair(&h, &k);
                            assert_eq!(fs.compose(&glued, &injs[0]), h);
                            assert_eq!(fs.compose(&glued, &injs[1]), k);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn psi_constant_control_fails_exactly_where_expected() {
        let control = PsiConstant::default();
        let objs = small_plus_objs();
        let q_objs = vec![QObject::single(hb())];
        assert!(check_psi_functorial(&control, &objs, &tol(), 200).is_ok());
        assert!(check_psi_strong_monoidal(&control, &objs, &tol(), 200).is_err());
        assert!(check_psi_preserves_coproducts(&control, &objs, &tol(), 200).is_err());
        assert!(
            check_psi_essentially_surjective(&control, &q_objs, &objs, &tol()).is_err()
        );
    }

    #[test]
    fn psi_corrupt_control_breaks_functoriality() {
        let control = PsiCorrupt::default();
        let objs = small_plus_objs();
        assert!(check_psi_functorial(&control, &objs, &tol(), 500).is_err());
    }

    #[test]
    fn phi_nonunit_control_fails_monoidality_and_multiplicativity() {
        let control = PhiNonUnit::new(ha());
        assert!(check_phi_functorial(&control, 2).is_ok());
        assert!(check_phi_full_faithful(&control, 2).is_ok());
        assert!(check_phi_preserves_coproducts(&control, 2).is_ok());
        assert!(check_phi_strong_monoidal(&control, 2).is_err());
        let c = PlusObject::new(vec![FwmObject::single(ha())]);
        assert!(check_eq1_case(&control, 1, &c, &c).is_err());
    }

    #[test]
    fn hat_f_discard_has_unit_shape_and_preserves_trace() {
        let fwm = Fwm;
        let src = FwmObject::new(vec![ha(), ha()]);
        let m = hat_f(&fwm.discard(&src));
        assert_eq!((m.din(), m.dout()), (4, 1));
        assert!(m.is_trace_preserving(&tol()));
    }
}
