//! Hypothesis verifier over a configurable finite universe.
//!
//! A [`Universe`] fixes the truncation bounds: which labelled spaces
//! exist, how long sequences and families may grow, how many finite sets
//! to range over, and how many random numeric samples to draw. Given
//! that, [`check_hypotheses`] verifies every structural hypothesis the
//! model construction rests on, one [`CheckRecord`] each:
//!
//! * finite products in the category of finite sets (exact),
//! * coproducts and tensor distributivity in all three layers (exact in
//!   the set and completion layers, numeric in the family layer),
//! * affineness of the completion,
//! * category laws in the completion (exact, truncated) and the family
//!   layer (numeric, sampled),
//! * the structural properties of both functors,
//! * the multiplicativity bijection, exhaustively via a representative
//!   class decomposition plus an integer cardinality sweep over every
//!   object pair,
//! * preservation of coproduct cones by the tensor (the distributivity
//!   isomorphism and its naturality).
//!
//! Failures are data, not errors: every failed record carries a
//! counterexample string. [`run_negative_controls`] feeds deliberately
//! broken functors through the same battery and demands that exactly the
//! documented checks fail, which guards the checkers themselves.

use crate::cpm::{gates, random_kraus, HObject, LinMap};
use crate::freecat::{
    check_associativity, check_identity_laws, AffineMonoidal, Cat, EnumHom, FinCoproducts, Fwm,
    FwmMorphism, FwmObject, MonoidalCat, Plus, PlusMorphism, PlusObject,
};
use crate::functors::{
    check_eq1_case, check_functor_props, choice_of_preimages, psi_obj, FinSet, FinSetMorphism,
    FunctorCheckInputs, FunctorWitness, Phi, PhiLike, PhiNonUnit, Psi, PsiConstant, PsiCorrupt,
    PsiLike,
};
use crate::linalg::{c, ComplexMatrix, Tolerance};
use crate::qcat::{
    copair_many, coproduct_many, discard_morphism, distributivity_iso, random_morphism, symmetry,
    tensor_mor, MorphismClass, QMorphism, QObject,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelcheckError {
    #[error("universe bound {0} must be at least 1")]
    BadBound(&'static str),
    #[error("universe needs at least one labelled space")]
    NoSpaces,
}

fn default_dim_cap() -> usize {
    16
}

/// Truncation bounds for every enumeration the verifier performs.
///
/// `dim_cap` bounds the Hilbert dimension of tensor products formed
/// during numeric checks; objects whose pairwise tensors would exceed it
/// are left out of the sampled sweeps (the exact combinatorial sweeps are
/// unaffected).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Universe {
    pub finset_max: usize,
    pub k_objects: Vec<HObject>,
    pub max_seq_len: usize,
    pub max_family: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: Tolerance,
    #[serde(default = "default_dim_cap")]
    pub dim_cap: usize,
}

impl Default for Universe {
    fn default() -> Self {
        Universe {
            finset_max: 3,
            k_objects: vec![
                HObject::new("A", 1).unwrap(),
                HObject::new("B", 2).unwrap(),
                HObject::new("C", 3).unwrap(),
            ],
            max_seq_len: 2,
            max_family: 3,
            samples: 40,
            seed: 7,
            tol: Tolerance::default(),
            dim_cap: default_dim_cap(),
        }
    }
}

impl Universe {
    pub fn validate(&self) -> Result<(), ModelcheckError> {
        if self.finset_max == 0 {
            return Err(ModelcheckError::BadBound("finset_max"));
        }
        if self.max_seq_len == 0 {
            return Err(ModelcheckError::BadBound("max_seq_len"));
        }
        if self.max_family == 0 {
            return Err(ModelcheckError::BadBound("max_family"));
        }
        if self.samples == 0 {
            return Err(ModelcheckError::BadBound("samples"));
        }
        if self.dim_cap == 0 {
            return Err(ModelcheckError::BadBound("dim_cap"));
        }
        if self.k_objects.is_empty() {
            return Err(ModelcheckError::NoSpaces);
        }
        Ok(())
    }

    /// All sequences over the labelled spaces up to the configured
    /// length, shortest first, lexicographic in label order within a
    /// length.
    pub fn fwm_objects(&self) -> Vec<FwmObject> {
        self.fwm_objects_bounded(self.max_seq_len)
    }

    pub fn fwm_objects_bounded(&self, max_len: usize) -> Vec<FwmObject> {
        let mut out = vec![FwmObject::unit()];
        let k = self.k_objects.len();
        for len in 1..=max_len {
            let mut digits = vec![0usize; len];
            loop {
                out.push(FwmObject::new(
                    digits.iter().map(|&d| self.k_objects[d].clone()).collect(),
                ));
                let mut p = len;
                loop {
                    if p == 0 {
                        break;
                    }
                    p -= 1;
                    digits[p] += 1;
                    if digits[p] < k {
                        break;
                    }
                    digits[p] = 0;
                    if p == 0 {
                        p = usize::MAX;
                        break;
                    }
                }
                if p == usize::MAX {
                    break;
                }
            }
        }
        out
    }

    /// All families over the sequence universe up to the configured
    /// size, smallest first, lexicographic within a size.
    pub fn plus_objects(&self) -> Vec<PlusObject<FwmObject>> {
        self.plus_objects_bounded(self.max_family, self.max_seq_len)
    }

    pub fn plus_objects_bounded(
        &self,
        max_family: usize,
        max_seq_len: usize,
    ) -> Vec<PlusObject<FwmObject>> {
        let seqs = self.fwm_objects_bounded(max_seq_len);
        let mut out = vec![PlusObject::new(vec![])];
        for size in 1..=max_family {
            let mut digits = vec![0usize; size];
            loop {
                out.push(PlusObject::new(
                    digits.iter().map(|&d| seqs[d].clone()).collect(),
                ));
                let mut p = size;
                loop {
                    if p == 0 {
                        break;
                    }
                    p -= 1;
                    digits[p] += 1;
                    if digits[p] < seqs.len() {
                        break;
                    }
                    digits[p] = 0;
                    if p == 0 {
                        p = usize::MAX;
                        break;
                    }
                }
                if p == usize::MAX {
                    break;
                }
            }
        }
        out
    }

    /// All families of labelled spaces up to the configured size,
    /// including the empty family and the unit.
    pub fn q_objects(&self) -> Vec<QObject> {
        let mut out = vec![QObject::zero(), QObject::unit()];
        let k = self.k_objects.len();
        for size in 1..=self.max_family {
            let mut digits = vec![0usize; size];
            loop {
                out.push(QObject::new(
                    digits.iter().map(|&d| self.k_objects[d].clone()).collect(),
                ));
                let mut p = size;
                loop {
                    if p == 0 {
                        break;
                    }
                    p -= 1;
                    digits[p] += 1;
                    if digits[p] < k {
                        break;
                    }
                    digits[p] = 0;
                    if p == 0 {
                        p = usize::MAX;
                        break;
                    }
                }
                if p == usize::MAX {
                    break;
                }
            }
        }
        out
    }

    /// Completion objects small enough for numeric sweeps: pairwise
    /// tensors of member dimensions stay within `dim_cap`, and families
    /// are kept to two members so tensored families stay small.
    pub fn plus_objects_numeric(&self) -> Vec<PlusObject<FwmObject>> {
        let per_member = (self.dim_cap as f64).sqrt().floor() as usize;
        self.plus_objects_bounded(self.max_family.min(2), self.max_seq_len)
            .into_iter()
            .filter(|x| x.family.iter().all(|s| s.dim() <= per_member))
            .collect()
    }

    /// Family objects small enough for numeric sweeps.
    pub fn q_objects_numeric(&self) -> Vec<QObject> {
        let per_part = (self.dim_cap as f64).sqrt().floor() as usize;
        self.q_objects()
            .into_iter()
            .filter(|d| d.len() <= 2 && d.dims().iter().all(|&x| x <= per_part))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// One verified hypothesis: its name, outcome, and either the evidence
/// volume or a counterexample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: CheckStatus,
    pub evidence: String,
}

impl CheckRecord {
    fn from_result(name: &str, result: Result<usize, String>, what: &str) -> CheckRecord {
        match result {
            Ok(n) => CheckRecord {
                name: name.to_string(),
                status: CheckStatus::Pass,
                evidence: format!("{n} {what}"),
            },
            Err(e) => CheckRecord {
                name: name.to_string(),
                status: CheckStatus::Fail,
                evidence: e,
            },
        }
    }
}

/// The ordered list of hypothesis records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub records: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.status != CheckStatus::Fail)
    }

    pub fn failed_names(&self) -> Vec<String> {
        self.records
            .iter()
            .filter(|r| r.status == CheckStatus::Fail)
            .map(|r| r.name.clone())
            .collect()
    }
}

/// A coproduct cocone over family objects; the Γ condition asks the
/// tensor to carry these to coproduct cocones again.
#[derive(Debug, Clone)]
pub struct Cone {
    pub vertex: QObject,
    pub legs: Vec<QMorphism>,
}

impl Cone {
    pub fn coproduct_of(parts: &[QObject]) -> Cone {
        let (vertex, legs) = coproduct_many(parts);
        Cone { vertex, legs }
    }

    pub fn is_well_formed(&self) -> bool {
        self.legs.iter().all(|l| l.dst() == &self.vertex)
    }
}

fn sub_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a over the check name, mixed with the universe seed
    let mut h: u64 = 0xcbf29ce484222325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^ seed
}

fn check_b_finite_products(u: &Universe) -> CheckRecord {
    let fs = FinSet;
    let max = u.finset_max;
    let mut checked = 0usize;
    for a in 0..=max {
        for b in 0..=max {
            let p1 = fs.proj1(a, b);
            let p2 = fs.proj2(a, b);
            for c in 0..=max.min(2) {
                for f in FinSetMorphism::all(c, a) {
                    for g in FinSetMorphism::all(c, b) {
                        let pair = fs.pairing(&f, &g);
                        if fs.compose(&p1, &pair) != f || fs.compose(&p2, &pair) != g {
                            return CheckRecord {
                                name: "b-finite-products".into(),
                                status: CheckStatus::Fail,
                                evidence: format!("projections fail at {f:?}, {g:?}"),
                            };
                        }
                        let unique = FinSetMorphism::all(c, a * b)
                            .into_iter()
                            .filter(|h| {
                                fs.compose(&p1, h) == f && fs.compose(&p2, h) == g
                            })
                            .count();
                        if unique != 1 {
                            return CheckRecord {
                                name: "b-finite-products".into(),
                                status: CheckStatus::Fail,
                                evidence: format!(
                                    "{unique} mediating maps at ({a},{b}) for {f:?}, {g:?}"
                                ),
                            };
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    CheckRecord {
        name: "b-finite-products".into(),
        status: CheckStatus::Pass,
        evidence: format!("{checked} cones with unique mediating maps, sets up to {max}"),
    }
}

fn check_b_coproducts(u: &Universe) -> CheckRecord {
    let fs = FinSet;
    let max = u.finset_max;
    let mut checked = 0usize;
    for a in 0..=max {
        for b in 0..=max {
            let (_, injs) = fs.coproduct_many(&[a, b]);
            for c in 0..=max.min(2) {
                for h in FinSetMorphism::all(a, c) {
                    for k in FinSetMorphism::all(b, c) {
                        let glued = fs.copair(&h, &k);
                        if fs.compose(&glued, &injs[0]) != h
                            || fs.compose(&glued, &injs[1]) != k
                        {
                            return CheckRecord {
                                name: "b-coproducts-distributive".into(),
                                status: CheckStatus::Fail,
                                evidence: format!("copairing fails at {h:?}, {k:?}"),
                            };
                        }
                        checked += 1;
                    }
                }
            }
            // distributivity: the canonical map a×c + a×d → a×(c+d) is a bijection;
            // in a cartesian category this is automatic, recorded for completeness
            for c in 0..=max {
                for d in 0..=max {
                    let left = fs.copair(
                        &fs.tensor_mor(&FinSetMorphism::identity(a), &fs.inl(c, d)),
                        &fs.tensor_mor(&FinSetMorphism::identity(a), &fs.inr(c, d)),
                    );
                    let mut seen = vec![false; a * (c + d)];
                    let mut bijective = left.table.len() == a * (c + d);
                    for &v in &left.table {
                        if seen[v] {
                            bijective = false;
                            break;
                        }
                        seen[v] = true;
                    }
                    if !bijective || seen.iter().any(|&s| !s) {
                        return CheckRecord {
                            name: "b-coproducts-distributive".into(),
                            status: CheckStatus::Fail,
                            evidence: format!("distributivity map not bijective at ({a},{c},{d})"),
                        };
                    }
                    checked += 1;
                }
            }
        }
    }
    CheckRecord {
        name: "b-coproducts-distributive".into(),
        status: CheckStatus::Pass,
        evidence: format!(
            "{checked} copairings and distributivity bijections, sets up to {max} (distributivity is automatic in a cartesian category)"
        ),
    }
}

/// The canonical completion-level distributivity reindexing
/// `x ⊗ (y ⊕ z) → (x ⊗ y) ⊕ (x ⊗ z)` with identity components.
fn plus_distributivity(
    plus: &Plus<Fwm>,
    x: &PlusObject<FwmObject>,
    y: &PlusObject<FwmObject>,
    z: &PlusObject<FwmObject>,
) -> (PlusMorphism<FwmObject, FwmMorphism>, PlusMorphism<FwmObject, FwmMorphism>) {
    let yz = plus.coproduct_many(&[y.clone(), z.clone()]).0;
    let src = plus.tensor_obj(x, &yz);
    let dst = plus
        .coproduct_many(&[plus.tensor_obj(x, y), plus.tensor_obj(x, z)])
        .0;
    let (ny, nz) = (y.len(), z.len());
    let map: Vec<usize> = (0..x.len())
        .flat_map(|i| {
            (0..ny + nz).map(move |j| {
                if j < ny {
                    i * ny + j
                } else {
                    x.len() * ny + i * nz + (j - ny)
                }
            })
        })
        .collect();
    let comps = src.family.iter().map(FwmMorphism::identity).collect();
    let fwd = PlusMorphism { src: src.clone(), dst: dst.clone(), map, comps };
    let mut inv_map = vec![0usize; dst.len()];
    for (s, &d) in fwd.map.iter().enumerate() {
        inv_map[d] = s;
    }
    let inv_comps = dst.family.iter().map(FwmMorphism::identity).collect();
    let inv = PlusMorphism { src: dst, dst: src, map: inv_map, comps: inv_comps };
    (fwd, inv)
}

fn check_c_coproducts(u: &Universe) -> CheckRecord {
    let plus = Plus { base: Fwm };
    let objs = u.plus_objects_bounded(u.max_family.min(2), 1);
    let mut checked = 0usize;
    // universal property by enumeration
    for x in &objs {
        for y in &objs {
            let (total, injs) = plus.coproduct_many(&[x.clone(), y.clone()]);
            for z in &objs {
                for f in plus.hom(&total, z) {
                    let legs: Vec<_> = injs.iter().map(|i| plus.compose(&f, i)).collect();
                    let rebuilt = plus.copair_many(&legs, z);
                    if !plus.mor_eq(&rebuilt, &f) {
                        return CheckRecord {
                            name: "c-coproducts-distributive".into(),
                            status: CheckStatus::Fail,
                            evidence: format!("copair does not rebuild {f:?}"),
                        };
                    }
                    checked += 1;
                }
            }
        }
    }
    // distributivity isomorphism, exactly
    for x in &objs {
        for y in &objs {
            for z in &objs {
                let (fwd, inv) = plus_distributivity(&plus, x, y, z);
                let back = plus.compose(&inv, &fwd);
                let forth = plus.compose(&fwd, &inv);
                if !plus.mor_eq(&back, &plus.id(&fwd.src)) || !plus.mor_eq(&forth, &plus.id(&fwd.dst))
                {
                    return CheckRecord {
                        name: "c-coproducts-distributive".into(),
                        status: CheckStatus::Fail,
                        evidence: format!("distributivity not invertible at {x:?},{y:?},{z:?}"),
                    };
                }
                checked += 1;
            }
        }
    }
    CheckRecord {
        name: "c-coproducts-distributive".into(),
        status: CheckStatus::Pass,
        evidence: format!(
            "{checked} exact copairings and distributivity isomorphisms over {} objects (families <= 2, sequences <= 1)",
            objs.len()
        ),
    }
}

fn check_d_coproducts(u: &Universe) -> CheckRecord {
    let name = "d-coproducts-distributive";
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(u.seed, name));
    let objs = u.q_objects_numeric();
    let nonempty: Vec<&QObject> = objs.iter().filter(|o| !o.is_empty()).collect();
    if nonempty.is_empty() {
        return CheckRecord {
            name: name.into(),
            status: CheckStatus::NotApplicable,
            evidence: "universe has no nonempty family objects".into(),
        };
    }
    let mut max_dev = 0f64;
    for _ in 0..u.samples {
        let x = nonempty[rng.gen_range(0..nonempty.len())];
        let y = nonempty[rng.gen_range(0..nonempty.len())];
        let z = nonempty[rng.gen_range(0..nonempty.len())];
        let iso = distributivity_iso(x, y, z);
        if !iso.verify(&u.tol) {
            return CheckRecord {
                name: name.into(),
                status: CheckStatus::Fail,
                evidence: format!("distributivity not invertible at {x:?},{y:?},{z:?}"),
            };
        }
        // universal property on a random morphism out of a coproduct
        let (total, injs) = coproduct_many(&[x.clone(), y.clone()]);
        let f = random_morphism(&mut rng, &total, z, MorphismClass::TraceNonIncreasing, &u.tol);
        let legs: Vec<_> = injs.iter().map(|i| QMorphism::compose(&f, i)).collect();
        let rebuilt = copair_many(&legs, z);
        let dev = rebuilt.max_deviation(&f);
        max_dev = max_dev.max(dev);
        if !rebuilt.approx_eq(&f, &u.tol) {
            return CheckRecord {
                name: name.into(),
                status: CheckStatus::Fail,
                evidence: format!("copair fails to rebuild a random morphism, deviation {dev:.3e}"),
            };
        }
        // naturality of distributivity against f ⊗ (g ⊕ h)
        let xp = nonempty[rng.gen_range(0..nonempty.len())];
        let f1 = random_morphism(&mut rng, x, xp, MorphismClass::TracePreserving, &u.tol);
        let g = random_morphism(&mut rng, y, y, MorphismClass::TracePreserving, &u.tol);
        let h = random_morphism(&mut rng, z, z, MorphismClass::TracePreserving, &u.tol);
        let (yz, yz_injs) = coproduct_many(&[y.clone(), z.clone()]);
        let gh = copair_many(
            &[
                QMorphism::compose(&yz_injs[0], &g),
                QMorphism::compose(&yz_injs[1], &h),
            ],
            &yz,
        );
        let before = distributivity_iso(x, y, z).fwd;
        let after = distributivity_iso(xp, y, z).fwd;
        let lhs = QMorphism::compose(&after, &tensor_mor(&f1, &gh));
        let (_, sum_injs) = coproduct_many(&[xp.tensor(y), xp.tensor(z)]);
        let sum = copair_many(
            &[
                QMorphism::compose(&sum_injs[0], &tensor_mor(&f1, &g)),
                QMorphism::compose(&sum_injs[1], &tensor_mor(&f1, &h)),
            ],
            after.dst(),
        );
        let rhs = QMorphism::compose(&sum, &before);
        let dev = lhs.max_deviation(&rhs);
        max_dev = max_dev.max(dev);
        if !lhs.approx_eq(&rhs, &u.tol) {
            return CheckRecord {
                name: name.into(),
                status: CheckStatus::Fail,
                evidence: format!("distributivity not natural, deviation {dev:.3e}"),
            };
        }
    }
    CheckRecord {
        name: name.into(),
        status: CheckStatus::Pass,
        evidence: format!(
            "{} random coproduct/distributivity instances, max deviation {max_dev:.3e}",
            u.samples
        ),
    }
}

fn check_c_affine(u: &Universe) -> CheckRecord {
    let plus = Plus { base: Fwm };
    let unit = plus.unit_obj();
    let objs = u.plus_objects();
    for x in &objs {
        let n = plus.hom(x, &unit).len();
        if n != 1 {
            return CheckRecord {
                name: "c-affine".into(),
                status: CheckStatus::Fail,
                evidence: format!("|hom(x, I)| = {n} at {x:?}"),
            };
        }
    }
    CheckRecord {
        name: "c-affine".into(),
        status: CheckStatus::Pass,
        evidence: format!("unit is terminal across all {} completion objects", objs.len()),
    }
}

fn check_c_category_laws(u: &Universe) -> CheckRecord {
    let plus = Plus { base: Fwm };
    // identity laws over a wide slice, associativity over a narrower one:
    // the laws are index algebra, so small instances exercise every path,
    // and the full triple sweep is combinatorially out of reach
    let wide = u.plus_objects_bounded(u.max_family, 1);
    let narrow = u.plus_objects_bounded(u.max_family.min(2), 1);
    let ids = match check_identity_laws(&plus, &wide) {
        Ok(n) => n,
        Err(e) => {
            return CheckRecord {
                name: "c-category-laws".into(),
                status: CheckStatus::Fail,
                evidence: e,
            }
        }
    };
    let assoc = match check_associativity(&plus, &narrow) {
        Ok(n) => n,
        Err(e) => {
            return CheckRecord {
                name: "c-category-laws".into(),
                status: CheckStatus::Fail,
                evidence: e,
            }
        }
    };
    CheckRecord {
        name: "c-category-laws".into(),
        status: CheckStatus::Pass,
        evidence: format!(
            "identity laws on {ids} morphisms over {} objects; associativity on {assoc} triples over {} objects",
            wide.len(),
            narrow.len()
        ),
    }
}

fn check_d_category_laws(u: &Universe) -> CheckRecord {
    let name = "d-category-laws";
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(u.seed, name));
    let objs = u.q_objects_numeric();
    let nonempty: Vec<&QObject> = objs.iter().filter(|o| !o.is_empty()).collect();
    if nonempty.is_empty() {
        return CheckRecord {
            name: name.into(),
            status: CheckStatus::NotApplicable,
            evidence: "universe has no nonempty family objects".into(),
        };
    }
    let mut max_dev = 0f64;
    for _ in 0..u.samples.max(200) {
        let w = nonempty[rng.gen_range(0..nonempty.len())];
        let x = nonempty[rng.gen_range(0..nonempty.len())];
        let y = nonempty[rng.gen_range(0..nonempty.len())];
        let z = nonempty[rng.gen_range(0..nonempty.len())];
        let f = random_morphism(&mut rng, w, x, MorphismClass::TraceNonIncreasing, &u.tol);
        let g = random_morphism(&mut rng, x, y, MorphismClass::TraceNonIncreasing, &u.tol);
        let h = random_morphism(&mut rng, y, z, MorphismClass::TraceNonIncreasing, &u.tol);
        let lhs = QMorphism::compose(&h, &QMorphism::compose(&g, &f));
        let rhs = QMorphism::compose(&QMorphism::compose(&h, &g), &f);
        let dev = lhs.max_deviation(&rhs);
        max_dev = max_dev.max(dev);
        if !lhs.approx_eq(&rhs, &u.tol) {
            return CheckRecord {
                name: name.into(),
                status: CheckStatus::Fail,
                evidence: format!("associativity off by {dev:.3e}"),
            };
        }
        let idl = QMorphism::compose(&QMorphism::identity(x), &f);
        let idr = QMorphism::compose(&f, &QMorphism::identity(w));
        if !idl.approx_eq(&f, &u.tol) || !idr.approx_eq(&f, &u.tol) {
            return CheckRecord {
                name: name.into(),
                status: CheckStatus::Fail,
                evidence: "identity law fails on a random morphism".into(),
            };
        }
    }
    CheckRecord {
        name: name.into(),
        status: CheckStatus::Pass,
        evidence: format!(
            "{} random triples, max associativity deviation {max_dev:.3e}",
            u.samples.max(200)
        ),
    }
}

/// Exhaustive multiplicativity verification, split into a bijection sweep
/// over emptiness-pattern representatives and an integer cardinality
/// identity over every ordered pair of universe objects.
///
/// Hom-sets out of an all-unit family depend only on which members of the
/// target are empty, because the free category admits no morphism from
/// the empty sequence to a nonempty one; the representative sweep
/// verifies the bijection once per pattern, and the pair sweep checks the
/// resulting counting identity `u(c ⊗ c') = u(c) · u(c')` from the
/// definition of the tensor (member lengths add).
fn check_eq1(u: &Universe) -> CheckRecord {
    let name = "eq1-multiplicative-kernel";
    let filler = self_filler(u);
    // representatives: one object per (family size, set of unit positions)
    let mut reps = Vec::new();
    for size in 0..=u.max_family {
        for mask in 0u32..(1u32 << size) {
            let family: Vec<FwmObject> = (0..size)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        FwmObject::unit()
                    } else {
                        filler.clone()
                    }
                })
                .collect();
            reps.push(PlusObject::new(family));
        }
    }
    let mut cases = 0usize;
    for b in 0..=u.finset_max {
        for c in &reps {
            for cp in &reps {
                if let Err(e) = check_eq1_case(&Phi, b, c, cp) {
                    return CheckRecord {
                        name: name.into(),
                        status: CheckStatus::Fail,
                        evidence: e,
                    };
                }
                cases += 1;
            }
        }
    }
    // cardinality identity over every ordered pair of universe objects
    let objs = u.plus_objects();
    let lens: Vec<Vec<usize>> = objs
        .iter()
        .map(|x| x.family.iter().map(|s| s.len()).collect())
        .collect();
    let zeros: Vec<usize> = lens
        .iter()
        .map(|l| l.iter().filter(|&&n| n == 0).count())
        .collect();
    let mut pairs = 0usize;
    for (i, li) in lens.iter().enumerate() {
        for (j, lj) in lens.iter().enumerate() {
            let mut tensor_zeros = 0usize;
            for &a in li {
                if a == 0 {
                    for &b in lj {
                        if b == 0 {
                            tensor_zeros += 1;
                        }
                    }
                }
            }
            if tensor_zeros != zeros[i] * zeros[j] {
                return CheckRecord {
                    name: name.into(),
                    status: CheckStatus::Fail,
                    evidence: format!(
                        "unit-position count is not multiplicative at objects {i}, {j}"
                    ),
                };
            }
            pairs += 1;
        }
    }
    CheckRecord {
        name: name.into(),
        status: CheckStatus::Pass,
        evidence: format!(
            "bijection verified on {cases} representative cases (b <= {}), counting identity on {pairs} ordered pairs over {} objects",
            u.finset_max,
            objs.len()
        ),
    }
}

fn self_filler(u: &Universe) -> FwmObject {
    FwmObject::single(u.k_objects[0].clone())
}

fn check_gamma(u: &Universe) -> CheckRecord {
    let name = "gamma-cones-preserved";
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(u.seed, name));
    let objs = u.q_objects_numeric();
    let nonempty: Vec<&QObject> = objs.iter().filter(|o| !o.is_empty()).collect();
    if nonempty.is_empty() {
        return CheckRecord {
            name: name.into(),
            status: CheckStatus::NotApplicable,
            evidence: "universe has no nonempty family objects".into(),
        };
    }
    let mut max_dev = 0f64;
    for _ in 0..u.samples {
        let x = nonempty[rng.gen_range(0..nonempty.len())];
        let y = nonempty[rng.gen_range(0..nonempty.len())];
        let z = nonempty[rng.gen_range(0..nonempty.len())];
        let cone = Cone::coproduct_of(&[y.clone(), z.clone()]);
        if !cone.is_well_formed() {
            return CheckRecord {
                name: name.into(),
                status: CheckStatus::Fail,
                evidence: "coproduct cocone malformed".into(),
            };
        }
        // tensoring the cocone with x must give the coproduct cocone of
        // the tensored parts, up to the distributivity isomorphism
        let iso = distributivity_iso(x, y, z);
        if !iso.verify(&u.tol) {
            return CheckRecord {
                name: name.into(),
                status: CheckStatus::Fail,
                evidence: format!("distributivity iso fails at {x:?},{y:?},{z:?}"),
            };
        }
        let (_, tens_injs) = coproduct_many(&[x.tensor(y), x.tensor(z)]);
        for (i, leg) in cone.legs.iter().enumerate() {
            let mapped = QMorphism::compose(&iso.fwd, &tensor_mor(&QMorphism::identity(x), leg));
            let dev = mapped.max_deviation(&tens_injs[i]);
            max_dev = max_dev.max(dev);
            if !mapped.approx_eq(&tens_injs[i], &u.tol) {
                return CheckRecord {
                    name: name.into(),
                    status: CheckStatus::Fail,
                    evidence: format!("tensored cocone leg {i} off by {dev:.3e}"),
                };
            }
        }
    }
    CheckRecord {
        name: name.into(),
        status: CheckStatus::Pass,
        evidence: format!(
            "{} tensored coproduct cocones match the canonical cocone, max deviation {max_dev:.3e}",
            u.samples
        ),
    }
}

/// Runs the full hypothesis battery over the universe. The records come
/// back in a fixed order; checks run in parallel.
pub fn check_hypotheses(u: &Universe) -> CheckReport {
    u.validate().expect("universe bounds must be positive");
    let plus_numeric = u.plus_objects_numeric();
    let q_objs = u.q_objects();
    let inputs = FunctorCheckInputs {
        finset_max: u.finset_max,
        plus_objs: &plus_numeric,
        q_objs: &q_objs,
        tol: u.tol,
        // enough composable pairs that functoriality is compared on a
        // three-digit sample even for small `samples` settings
        pair_cap: u.samples.max(100),
    };
    let results: Vec<Vec<CheckRecord>> = (0..11usize)
        .into_par_iter()
        .map(|task| match task {
            0 => vec![check_b_finite_products(u)],
            1 => vec![check_b_coproducts(u)],
            2 => vec![check_c_coproducts(u)],
            3 => vec![check_d_coproducts(u)],
            4 => vec![check_c_affine(u)],
            5 => vec![check_c_category_laws(u)],
            6 => vec![check_d_category_laws(u)],
            7 => check_functor_props(&FunctorWitness::Phi(&Phi), &inputs)
                .into_iter()
                .map(|(n, r)| CheckRecord::from_result(&n, r, "instances"))
                .collect(),
            8 => check_functor_props(&FunctorWitness::Psi(&Psi), &inputs)
                .into_iter()
                .map(|(n, r)| CheckRecord::from_result(&n, r, "instances"))
                .collect(),
            9 => vec![check_eq1(u)],
            _ => vec![check_gamma(u)],
        })
        .collect();
    CheckReport { records: results.into_iter().flatten().collect() }
}

/// Seeded CP/Choi consistency suite: Kraus→Choi→Kraus round trips
/// preserve the action on states, the canonical gate channels are bona
/// fide channels, and the transpose map is rejected as not completely
/// positive. Thresholds are pinned at 1e-9; `tol` only steers the
/// eigenvalue clipping inside the Kraus extraction.
pub fn check_cpm_suite(seed: u64, tol: &Tolerance) -> CheckReport {
    let mut records = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, "kraus-choi-roundtrip"));
    let mut roundtrip = Ok(0usize);
    'trials: for trial in 0..100 {
        let din = rng.gen_range(1..=4);
        let dout = rng.gen_range(1..=4);
        let n_ops = rng.gen_range(1..=4);
        let k = random_kraus(&mut rng, din, dout, n_ops);
        let f = LinMap::from_kraus(&k);
        let k2 = match f.to_kraus(tol) {
            Ok(k2) => k2,
            Err(e) => {
                roundtrip = Err(format!("trial {trial}: extraction failed: {e}"));
                break 'trials;
            }
        };
        let f2 = LinMap::from_kraus(&k2);
        if f.max_deviation(&f2) > 1e-9 {
            roundtrip = Err(format!(
                "trial {trial}: Choi deviates by {:.3e} after the round trip",
                f.max_deviation(&f2)
            ));
            break 'trials;
        }
        for _ in 0..3 {
            let g = random_kraus(&mut rng, din, din, 1).ops.remove(0);
            let p = g.matmul(&g.adjoint());
            let rho = p.scale(c(1.0 / p.trace().re, 0.0));
            let dev = crate::linalg::max_deviation(&f.apply(&rho), &f2.apply(&rho));
            if dev > 1e-9 {
                roundtrip = Err(format!("trial {trial}: apply deviates by {dev:.3e}"));
                break 'trials;
            }
        }
        roundtrip = Ok(trial + 1);
    }
    records.push(CheckRecord::from_result(
        "kraus-choi-roundtrip",
        roundtrip,
        "random Kraus sets round-tripped",
    ));

    // the transpose map is positive and trace preserving yet not CP; it
    // must be rejected on the Choi criterion at every dimension
    let mut transpose = Ok(0usize);
    for d in 2..=4usize {
        let mut j = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for k in 0..d {
                j.set(i * d + k, k * d + i, c(1.0, 0.0));
            }
        }
        let t = LinMap::from_choi(d, d, j).expect("square Choi block");
        if t.is_completely_positive(tol) {
            transpose = Err(format!("transpose on dimension {d} accepted as CP"));
            break;
        }
        if !t.is_trace_preserving(tol) {
            transpose = Err(format!("transpose on dimension {d} is not trace preserving"));
            break;
        }
        transpose = Ok(d - 1);
    }
    records.push(CheckRecord::from_result(
        "transpose-rejected",
        transpose,
        "dimensions rejected",
    ));

    let mut gate_records = Ok(0usize);
    for (count, name) in ["X", "Y", "Z", "H", "S", "T", "CNOT"].iter().enumerate() {
        let u = gates::by_name(name).expect("fixed gate table");
        let ch = crate::cpm::unitary_channel(&u);
        if !(ch.is_completely_positive(tol) && ch.is_trace_preserving(tol)) {
            gate_records = Err(format!("gate {name} is not a channel"));
            break;
        }
        gate_records = Ok(count + 1);
    }
    records.push(CheckRecord::from_result(
        "gate-channels-tp",
        gate_records,
        "gate channels verified CP and TP",
    ));

    CheckReport { records }
}

/// The presheaf lab as report rows: Yoneda, the Kan adjunction, the unit
/// isomorphism, and the Day convolution suite, all exact on built-in
/// finite categories.
pub fn check_presheaf_lab() -> CheckReport {
    let records = crate::presheaflab::lab_checks()
        .into_iter()
        .map(|(name, result)| CheckRecord::from_result(name, result, "instances verified"))
        .collect();
    CheckReport { records }
}

/// Base-level shadow of the concrete embedding: the preimage choice is
/// injective up to isomorphism, commutes with tensor and coproduct up to
/// explicit isomorphism, and the structural morphisms between images lift
/// through the functor.
pub fn check_concrete_embedding(u: &Universe) -> CheckReport {
    let mut records = Vec::new();
    let q_objs = u.q_objects();
    // injectivity up to isomorphism: preimages are isomorphic exactly
    // when the originals are (dimension multisets are a complete iso
    // invariant for families)
    let plus = Plus { base: Fwm };
    let mut pairs = 0usize;
    let mut iso_pairs = 0usize;
    let mut injective = None;
    'outer: for d in &q_objs {
        for dp in &q_objs {
            let (x, _) = choice_of_preimages(d);
            let (xp, _) = choice_of_preimages(dp);
            // isomorphic preimages must come from isomorphic objects; the
            // converse can fail because the completion is label-rigid
            // while family isomorphism only sees dimension multisets
            if plus_iso_exists(&plus, &x, &xp) {
                iso_pairs += 1;
                if d.dim_multiset() != dp.dim_multiset() {
                    injective = Some(format!(
                        "preimages isomorphic but objects are not: {:?} vs {:?}",
                        d.dim_multiset(),
                        dp.dim_multiset()
                    ));
                    break 'outer;
                }
            }
            pairs += 1;
        }
    }
    records.push(match injective {
        None => CheckRecord {
            name: "embed-preimage-injective".into(),
            status: CheckStatus::Pass,
            evidence: format!("{pairs} ordered pairs, {iso_pairs} isomorphic preimage pairs, none conflated"),
        },
        Some(e) => CheckRecord {
            name: "embed-preimage-injective".into(),
            status: CheckStatus::Fail,
            evidence: e,
        },
    });
    // tensor and coproduct shadows
    let small: Vec<&QObject> = q_objs.iter().filter(|d| d.len() <= 2).collect();
    let mut tensor_ok = None;
    let mut coproduct_ok = None;
    let mut shadows = 0usize;
    for d in &small {
        for dp in &small {
            let (x, _) = choice_of_preimages(d);
            let (xp, _) = choice_of_preimages(dp);
            let lhs = psi_obj(&plus.tensor_obj(&x, &xp));
            let (rhs, _) = choice_of_preimages(&d.tensor(dp));
            let rhs = psi_obj(&rhs);
            match crate::functors::family_permutation_iso(&lhs, &rhs) {
                Some(iso) if iso.verify(&u.tol) => {}
                _ => {
                    tensor_ok = Some(format!(
                        "tensor shadow fails at {:?} x {:?}",
                        d.dim_multiset(),
                        dp.dim_multiset()
                    ));
                }
            }
            let lhs = psi_obj(&plus.coproduct_many(&[x.clone(), xp.clone()]).0);
            let (rhs, _) = choice_of_preimages(&d.coproduct(dp));
            let rhs = psi_obj(&rhs);
            if lhs != rhs {
                coproduct_ok = Some(format!(
                    "coproduct shadow differs at {:?} + {:?}",
                    d.dim_multiset(),
                    dp.dim_multiset()
                ));
            }
            shadows += 1;
        }
    }
    records.push(match tensor_ok {
        None => CheckRecord {
            name: "embed-tensor-shadow".into(),
            status: CheckStatus::Pass,
            evidence: format!("{shadows} tensor squares close up to isomorphism"),
        },
        Some(e) => {
            CheckRecord { name: "embed-tensor-shadow".into(), status: CheckStatus::Fail, evidence: e }
        }
    });
    records.push(match coproduct_ok {
        None => CheckRecord {
            name: "embed-coproduct-shadow".into(),
            status: CheckStatus::Pass,
            evidence: format!("{shadows} coproduct squares close exactly"),
        },
        Some(e) => CheckRecord {
            name: "embed-coproduct-shadow".into(),
            status: CheckStatus::Fail,
            evidence: e,
        },
    });
    records.push(check_structural_fullness(&Psi, u));
    CheckReport { records }
}

/// Hom-sets of the family category are uncountable, so fullness proper
/// has no finite formulation; the checkable shadow is that every
/// canonical structural morphism between images (coproduct injections,
/// the symmetry, the discard) is hit by the functor.
pub fn check_structural_fullness(psi: &dyn PsiLike, u: &Universe) -> CheckRecord {
    let name = "embed-structural-fullness";
    let plus = Plus { base: Fwm };
    let small: Vec<QObject> = u
        .q_objects_numeric()
        .into_iter()
        .filter(|d| !d.is_empty())
        .collect();
    let mut lifted = 0usize;
    for d in &small {
        for dp in &small {
            let (x, _) = choice_of_preimages(d);
            let (xp, _) = choice_of_preimages(dp);
            // coproduct injections
            let (_, q_injs) = coproduct_many(&[psi.on_obj(&x), psi.on_obj(&xp)]);
            let (_, p_injs) = plus.coproduct_many(&[x.clone(), xp.clone()]);
            for (qi, pi) in q_injs.iter().zip(&p_injs) {
                let got = psi.on_mor(pi);
                if !got.approx_eq(qi, &u.tol) {
                    return CheckRecord {
                        name: name.into(),
                        status: CheckStatus::Fail,
                        evidence: format!(
                            "coproduct injection does not lift at {:?} + {:?}, deviation {:.3e}",
                            d.dim_multiset(),
                            dp.dim_multiset(),
                            got.max_deviation(qi)
                        ),
                    };
                }
                lifted += 1;
            }
            // the symmetry of the tensor
            let sigma = psi.on_mor(&plus_symmetry(&plus, &x, &xp));
            let q_sigma = symmetry(&psi.on_obj(&x), &psi.on_obj(&xp));
            if !sigma.approx_eq(&q_sigma, &u.tol) {
                return CheckRecord {
                    name: name.into(),
                    status: CheckStatus::Fail,
                    evidence: format!(
                        "symmetry does not lift at {:?} x {:?}, deviation {:.3e}",
                        d.dim_multiset(),
                        dp.dim_multiset(),
                        sigma.max_deviation(&q_sigma)
                    ),
                };
            }
            lifted += 1;
            // the discard into the unit
            let p_discard = psi.on_mor(&unique_to_unit(&plus, &x));
            let q_discard = discard_morphism(&psi.on_obj(&x));
            if !p_discard.approx_eq(&q_discard, &u.tol) {
                return CheckRecord {
                    name: name.into(),
                    status: CheckStatus::Fail,
                    evidence: format!(
                        "discard does not lift at {:?}, deviation {:.3e}",
                        d.dim_multiset(),
                        p_discard.max_deviation(&q_discard)
                    ),
                };
            }
            lifted += 1;
        }
    }
    CheckRecord {
        name: name.into(),
        status: CheckStatus::Pass,
        evidence: format!("{lifted} structural morphisms lift through the functor"),
    }
}

fn plus_symmetry(
    plus: &Plus<Fwm>,
    x: &PlusObject<FwmObject>,
    xp: &PlusObject<FwmObject>,
) -> PlusMorphism<FwmObject, FwmMorphism> {
    let fwm = Fwm;
    let src = plus.tensor_obj(x, xp);
    let dst = plus.tensor_obj(xp, x);
    let mut map = Vec::with_capacity(src.len());
    let mut comps = Vec::with_capacity(src.len());
    for a in 0..x.len() {
        for b in 0..xp.len() {
            map.push(b * x.len() + a);
            let s = &x.family[a];
            let t = &xp.family[b];
            comps.push(fwm.permute(&[s.clone(), t.clone()], &[1, 0]));
        }
    }
    PlusMorphism { src, dst, map, comps }
}

fn unique_to_unit(
    plus: &Plus<Fwm>,
    x: &PlusObject<FwmObject>,
) -> PlusMorphism<FwmObject, FwmMorphism> {
    PlusMorphism {
        src: x.clone(),
        dst: plus.unit_obj(),
        map: vec![0; x.len()],
        comps: x.family.iter().map(FwmMorphism::discard).collect(),
    }
}

fn plus_iso_exists(
    plus: &Plus<Fwm>,
    x: &PlusObject<FwmObject>,
    y: &PlusObject<FwmObject>,
) -> bool {
    for f in plus.hom(x, y) {
        for g in plus.hom(y, x) {
            if plus.mor_eq(&plus.compose(&g, &f), &plus.id(x))
                && plus.mor_eq(&plus.compose(&f, &g), &plus.id(y))
            {
                return true;
            }
        }
    }
    x.is_empty() && y.is_empty()
}

/// Outcome of running one deliberately broken functor through the
/// battery: the set of failing checks must equal the documented target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlOutcome {
    pub control: String,
    pub expected_failures: Vec<String>,
    pub observed_failures: Vec<String>,
    pub ok: bool,
}

/// Feeds the negative controls through the same checkers with reduced
/// bounds and compares the failing set against expectations.
pub fn run_negative_controls(u: &Universe) -> Vec<ControlOutcome> {
    // empty families make every numeric comparison vacuous (zero-column
    // morphisms), so the control sweeps start from nonempty ones to hit
    // corruption within the pair cap
    let plus_numeric: Vec<PlusObject<FwmObject>> = u
        .plus_objects_numeric()
        .into_iter()
        .filter(|x| !x.is_empty())
        .collect();
    let q_objs = u.q_objects();
    let inputs = FunctorCheckInputs {
        finset_max: u.finset_max.min(2),
        plus_objs: &plus_numeric,
        q_objs: &q_objs,
        tol: u.tol,
        pair_cap: u.samples.min(40).max(10),
    };
    let mut out = Vec::new();

    let constant = PsiConstant::default();
    out.push(control_outcome(
        "psi-constant",
        check_functor_props(&FunctorWitness::Psi(&constant), &inputs),
        &[
            "psi-strong-monoidal",
            "psi-essentially-surjective",
            "psi-preserves-coproducts",
        ],
    ));

    let corrupt = PsiCorrupt::default();
    out.push(control_outcome(
        "psi-corrupt",
        check_functor_props(&FunctorWitness::Psi(&corrupt), &inputs),
        &[
            "psi-functorial",
            "psi-strong-monoidal",
            "psi-preserves-coproducts",
        ],
    ));

    let nonunit = PhiNonUnit::new(u.k_objects[0].clone());
    let mut results = check_functor_props(&FunctorWitness::Phi(&nonunit), &inputs);
    results.push((
        "eq1-multiplicative-kernel".to_string(),
        eq1_control_sweep(&nonunit, u),
    ));
    out.push(control_outcome(
        "phi-nonunit",
        results,
        &["phi-strong-monoidal", "eq1-multiplicative-kernel"],
    ));
    out
}

/// A small honest enumeration sweep of the multiplicativity bijection,
/// usable with any embedding candidate.
fn eq1_control_sweep(phi: &dyn PhiLike, u: &Universe) -> Result<usize, String> {
    let filler = self_filler(u);
    let targets = vec![
        PlusObject::new(vec![]),
        PlusObject::new(vec![FwmObject::unit()]),
        PlusObject::new(vec![filler.clone()]),
        PlusObject::new(vec![FwmObject::unit(), filler.clone()]),
    ];
    let mut cases = 0usize;
    for b in 0..=u.finset_max.min(2) {
        for c in &targets {
            for cp in &targets {
                check_eq1_case(phi, b, c, cp)?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn control_outcome(
    control: &str,
    results: Vec<(String, Result<usize, String>)>,
    expected: &[&str],
) -> ControlOutcome {
    let observed: Vec<String> = results
        .iter()
        .filter(|(_, r)| r.is_err())
        .map(|(n, _)| n.clone())
        .collect();
    let expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
    let ok = observed == expected;
    ControlOutcome {
        control: control.to_string(),
        expected_failures: expected,
        observed_failures: observed,
        ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Universe {
        Universe {
            finset_max: 2,
            k_objects: vec![HObject::new("A", 1).unwrap(), HObject::new("B", 2).unwrap()],
            max_seq_len: 1,
            max_family: 2,
            samples: 4,
            seed: 11,
            tol: Tolerance::default(),
            dim_cap: 16,
        }
    }

    #[test]
    fn cpm_suite_passes_and_is_deterministic() {
        let tol = Tolerance::default();
        let a = check_cpm_suite(5, &tol);
        assert!(a.all_pass(), "failed: {:?}", a.failed_names());
        assert_eq!(
            a.records.iter().map(|r| r.name.as_str()).collect::<Vec<_>>(),
            vec!["kraus-choi-roundtrip", "transpose-rejected", "gate-channels-tp"]
        );
        assert_eq!(a, check_cpm_suite(5, &tol));
    }

    #[test]
    fn presheaf_lab_report_passes() {
        let report = check_presheaf_lab();
        assert!(report.all_pass(), "failed: {:?}", report.failed_names());
        assert_eq!(report.records.len(), 7);
        // every lab law is exact, so the evidence counts are frozen
        let counts: Vec<&str> = report.records.iter().map(|r| r.evidence.as_str()).collect();
        assert_eq!(counts[0], "14 instances verified");
    }

    #[test]
    fn universe_validation_and_enumeration_counts() {
        let u = tiny();
        u.validate().unwrap();
        // sequences: empty, (A), (B)
        assert_eq!(u.fwm_objects().len(), 3);
        // families: empty, 3 singles, 9 pairs
        assert_eq!(u.plus_objects().len(), 13);
        // q objects: zero, unit, 2 singles, 4 pairs
        assert_eq!(u.q_objects().len(), 8);
        let mut bad = tiny();
        bad.max_family = 0;
        assert_eq!(bad.validate(), Err(ModelcheckError::BadBound("max_family")));
        let mut bad = tiny();
        bad.k_objects.clear();
        assert_eq!(bad.validate(), Err(ModelcheckError::NoSpaces));
    }

    #[test]
    fn default_universe_matches_documented_shape() {
        let u = Universe::default();
        u.validate().unwrap();
        assert_eq!(u.fwm_objects().len(), 13);
        assert_eq!(u.plus_objects().len(), 2380);
        let j = serde_json::to_string(&u).unwrap();
        assert_eq!(serde_json::from_str::<Universe>(&j).unwrap(), u);
    }

    #[test]
    fn tiny_universe_passes_all_hypotheses() {
        let report = check_hypotheses(&tiny());
        assert_eq!(report.records.len(), 17);
        assert!(
            report.all_pass(),
            "failures: {:?}",
            report.failed_names()
        );
        // deterministic given the universe
        let again = check_hypotheses(&tiny());
        assert_eq!(report, again);
   }

    #[test]
    fn concrete_embedding_shadow_passes() {
        let report = check_concrete_embedding(&tiny());
        assert_eq!(report.records.len(), 4);
        assert!(report.all_pass(), "failures: {:?}", report.failed_names());
    }

    #[test]
    fn negative_controls_fail_exactly_where_documented() {
        let outcomes = run_negative_controls(&tiny());
        assert_eq!(outcomes.len(), 3);
        for o in &outcomes {
            assert!(
                o.ok,
                "{} expected {:?} but observed {:?}",
                o.control, o.expected_failures, o.observed_failures
            );
        }
    }

    #[test]
    fn corrupted_functor_breaks_structural_fullness() {
        let u = tiny();
        let record = check_structural_fullness(&PsiCorrupt::default(), &u);
        assert_eq!(record.status, CheckStatus::Fail);
        assert!(record.evidence.contains("deviation"));
    }

    #[test]
    fn monotonicity_exact_checks_survive_enlargement() {
        let small = tiny();
        let mut bigger = tiny();
        bigger.max_family = 3;
        bigger.finset_max = 3;
        for u in [&small, &bigger] {
            assert_eq!(check_b_finite_products(u).status, CheckStatus::Pass);
            assert_eq!(check_b_coproducts(u).status, CheckStatus::Pass);
            assert_eq!(check_c_affine(u).status, CheckStatus::Pass);
            assert_eq!(check_c_coproducts(u).status, CheckStatus::Pass);
            assert_eq!(check_c_category_laws(u).status, CheckStatus::Pass);
        }
    }

    #[test]
    fn report_serializes_deterministically() {
        let report = check_concrete_embedding(&tiny());
        let a = serde_json::to_string(&report).unwrap();
        let b = serde_json::to_string(&check_concrete_embedding(&tiny())).unwrap();
        assert_eq!(a, b);
    }
}
