//! Free categorical constructions over labelled Hilbert spaces.
//!
//! Two constructions are implemented, together with their universal
//! extension helpers:
//!
//! * [`Fwm`] — the free affine symmetric monoidal category on the discrete
//!   collection of labelled spaces. Objects are finite sequences; a morphism
//!   `(V_1, …, V_n) → (W_1, …, W_m)` is an injection `inj : [m] → [n]` with
//!   `V_{inj(i)} = W_i`; tensor is concatenation and the empty sequence is a
//!   terminal unit, which is exactly affineness. Composition of injections
//!   is contravariant: `inj_{g∘f} = inj_f ∘ inj_g`.
//! * [`Plus`] — the free finite coproduct completion of an arbitrary base
//!   category: objects are finite families, and a morphism is a reindexing
//!   function together with a base morphism per member. When the base is
//!   monoidal the completion is monoidal with lexicographic family pairing.
//!
//! [`AffineExtension`] extends any object assignment into an affine
//! monoidal target to a functor out of [`Fwm`] (permute the retained
//! factors to the front, in order, then discard the rest);
//! [`extend_coproduct_mor`] extends any functor on the base to the
//! completion by copairing through coproduct injections.

use crate::cpm::HObject;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FreecatError {
    #[error("injection lists {got} indices, destination has {want} factors")]
    InjectionArity { got: usize, want: usize },
    #[error("injection index {0} out of range for source of length {1}")]
    InjectionRange(usize, usize),
    #[error("injection repeats source index {0}")]
    InjectionNotInjective(usize),
    #[error("label mismatch at destination position {pos}: source factor is {src_label}, destination wants {dst_label}")]
    LabelMismatch { pos: usize, src_label: String, dst_label: String },
    #[error("family map lists {got} indices, source family has {want} members")]
    FamilyMapArity { got: usize, want: usize },
    #[error("family map index {0} out of range for destination family of size {1}")]
    FamilyMapRange(usize, usize),
    #[error("component {0} does not run between the members selected by the family map")]
    ComponentMismatch(usize),
}

/// Minimal category interface used by the generic law checkers and the
/// coproduct completion.
pub trait Cat {
    type Obj: Clone + PartialEq + std::fmt::Debug;
    type Mor: Clone + std::fmt::Debug;

    fn src(&self, f: &Self::Mor) -> Self::Obj;
    fn dst(&self, f: &Self::Mor) -> Self::Obj;
    fn id(&self, x: &Self::Obj) -> Self::Mor;
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn mor_eq(&self, f: &Self::Mor, g: &Self::Mor) -> bool;
}

/// Categories whose hom-sets can be listed exhaustively, in a fixed order.
pub trait EnumHom: Cat {
    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor>;
}

/// Strict monoidal structure.
pub trait MonoidalCat: Cat {
    fn unit_obj(&self) -> Self::Obj;
    fn tensor_obj(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn tensor_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
}

/// Monoidal categories whose unit is terminal, with enough structural
/// morphisms to express "keep these factors, in this order, drop the rest".
pub trait AffineMonoidal: MonoidalCat {
    /// The unique morphism into the unit.
    fn discard(&self, x: &Self::Obj) -> Self::Mor;
    /// Structural permutation `⊗ xs → ⊗ xs permuted`, factor `j` moving to
    /// position `perm[j]`.
    fn permute(&self, xs: &[Self::Obj], perm: &[usize]) -> Self::Mor;
}

/// Categories with finite coproducts presented by explicit injections.
pub trait FinCoproducts: Cat {
    fn coproduct_many(&self, parts: &[Self::Obj]) -> (Self::Obj, Vec<Self::Mor>);
    fn copair_many(&self, legs: &[Self::Mor], dst: &Self::Obj) -> Self::Mor;
}

/// An object of the free affine monoidal category: a finite sequence of
/// labelled spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FwmObject {
    pub seq: Vec<HObject>,
}

impl FwmObject {
    pub fn new(seq: Vec<HObject>) -> Self {
        FwmObject { seq }
    }

    pub fn unit() -> Self {
        FwmObject { seq: vec![] }
    }

    pub fn single(h: HObject) -> Self {
        FwmObject { seq: vec![h] }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn tensor(&self, other: &FwmObject) -> FwmObject {
        let mut seq = self.seq.clone();
        seq.extend(other.seq.iter().cloned());
        FwmObject { seq }
    }

    /// Total dimension of the underlying tensor product.
    pub fn dim(&self) -> usize {
        self.seq.iter().map(|h| h.dim).product()
    }
}

/// A morphism of the free affine monoidal category: `inj[i]` names the
/// source factor feeding destination position `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FwmMorphism {
    pub src: FwmObject,
    pub dst: FwmObject,
    pub inj: Vec<usize>,
}

impl FwmMorphism {
    pub fn new(src: FwmObject, dst: FwmObject, inj: Vec<usize>) -> Result<Self, FreecatError> {
        if inj.len() != dst.len() {
            return Err(FreecatError::InjectionArity { got: inj.len(), want: dst.len() });
        }
        let mut used = vec![false; src.len()];
        for (pos, &s) in inj.iter().enumerate() {
            if s >= src.len() {
                return Err(FreecatError::InjectionRange(s, src.len()));
            }
            if used[s] {
                return Err(FreecatError::InjectionNotInjective(s));
            }
            used[s] = true;
            if src.seq[s] != dst.seq[pos] {
                return Err(FreecatError::LabelMismatch {
                    pos,
                    src_label: src.seq[s].label.clone(),
                    dst_label: dst.seq[pos].label.clone(),
                });
            }
        }
        Ok(FwmMorphism { src, dst, inj })
    }

    pub fn identity(x: &FwmObject) -> Self {
        FwmMorphism { src: x.clone(), dst: x.clone(), inj: (0..x.len()).collect() }
    }

    /// The unique morphism to the unit.
    pub fn discard(x: &FwmObject) -> Self {
        FwmMorphism { src: x.clone(), dst: FwmObject::unit(), inj: vec![] }
    }
}

/// The free affine symmetric monoidal category as a [`Cat`] instance.
#[derive(Debug, Clone, Copy, Default)]
pub struct Fwm;

impl Cat for Fwm {
    type Obj = FwmObject;
    type Mor = FwmMorphism;

    fn src(&self, f: &FwmMorphism) -> FwmObject {
        f.src.clone()
    }

    fn dst(&self, f: &FwmMorphism) -> FwmObject {
        f.dst.clone()
    }

    fn id(&self, x: &FwmObject) -> FwmMorphism {
        FwmMorphism::identity(x)
    }

    fn compose(&self, g: &FwmMorphism, f: &FwmMorphism) -> FwmMorphism {
        assert_eq!(f.dst, g.src, "compose: endpoint mismatch");
        let inj = g.inj.iter().map(|&i| f.inj[i]).collect();
        FwmMorphism { src: f.src.clone(), dst: g.dst.clone(), inj }
    }

    fn mor_eq(&self, f: &FwmMorphism, g: &FwmMorphism) -> bool {
        f == g
    }
}

impl EnumHom for Fwm {
    /// All label-compatible injections, in lexicographic order of `inj`.
    fn hom(&self, x: &FwmObject, y: &FwmObject) -> Vec<FwmMorphism> {
        let mut out = Vec::new();
        let mut used = vec![false; x.len()];
        let mut inj = vec![0usize; y.len()];
        fn rec(
            x: &FwmObject,
            y: &FwmObject,
            pos: usize,
            used: &mut Vec<bool>,
            inj: &mut Vec<usize>,
            out: &mut Vec<FwmMorphism>,
        ) {
            if pos == y.len() {
                out.push(FwmMorphism {
                    src: x.clone(),
                    dst: y.clone(),
                    inj: inj.clone(),
                });
                return;
            }
            for s in 0..x.len() {
                if !used[s] && x.seq[s] == y.seq[pos] {
                    used[s] = true;
                    inj[pos] = s;
                    rec(x, y, pos + 1, used, inj, out);
                    used[s] = false;
                }
            }
        }
        rec(x, y, 0, &mut used, &mut inj, &mut out);
        out
    }
}

impl MonoidalCat for Fwm {
    fn unit_obj(&self) -> FwmObject {
        FwmObject::unit()
    }

    fn tensor_obj(&self, a: &FwmObject, b: &FwmObject) -> FwmObject {
        a.tensor(b)
    }

    fn tensor_mor(&self, f: &FwmMorphism, g: &FwmMorphism) -> FwmMorphism {
        let src = f.src.tensor(&g.src);
        let dst = f.dst.tensor(&g.dst);
        let mut inj = f.inj.clone();
        inj.extend(g.inj.iter().map(|&i| i + f.src.len()));
        FwmMorphism { src, dst, inj }
    }
}

impl AffineMonoidal for Fwm {
    fn discard(&self, x: &FwmObject) -> FwmMorphism {
        FwmMorphism::discard(x)
    }

    fn permute(&self, xs: &[FwmObject], perm: &[usize]) -> FwmMorphism {
        assert_eq!(xs.len(), perm.len(), "permute: arity mismatch");
        let src = xs.iter().fold(FwmObject::unit(), |acc, x| acc.tensor(x));
        let mut permuted = vec![FwmObject::unit(); xs.len()];
        for (j, x) in xs.iter().enumerate() {
            permuted[perm[j]] = x.clone();
        }
        let dst = permuted.iter().fold(FwmObject::unit(), |acc, x| acc.tensor(x));
        // source offset of each block
        let mut offsets = vec![0usize; xs.len()];
        let mut acc = 0;
        for (j, x) in xs.iter().enumerate() {
            offsets[j] = acc;
            acc += x.len();
        }
        let mut inj = Vec::with_capacity(dst.len());
        let mut inv = vec![0usize; xs.len()];
        for (j, &p) in perm.iter().enumerate() {
            inv[p] = j;
        }
        for &j in &inv {
            for k in 0..xs[j].len() {
                inj.push(offsets[j] + k);
            }
        }
        FwmMorphism { src, dst, inj }
    }
}

/// An object of the free finite coproduct completion: a finite family of
/// base objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlusObject<O> {
    pub family: Vec<O>,
}

impl<O> PlusObject<O> {
    pub fn new(family: Vec<O>) -> Self {
        PlusObject { family }
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }
}

/// A morphism of the completion: a reindexing together with one base
/// morphism per source member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlusMorphism<O, M> {
    pub src: PlusObject<O>,
    pub dst: PlusObject<O>,
    pub map: Vec<usize>,
    pub comps: Vec<M>,
}

/// The free finite coproduct completion of a base category.
#[derive(Debug, Clone, Copy, Default)]
pub struct Plus<C> {
    pub base: C,
}

impl<C: Cat> Plus<C> {
    pub fn mor(
        &self,
        src: PlusObject<C::Obj>,
        dst: PlusObject<C::Obj>,
        map: Vec<usize>,
        comps: Vec<C::Mor>,
    ) -> Result<PlusMorphism<C::Obj, C::Mor>, FreecatError> {
        if map.len() != src.len() {
            return Err(FreecatError::FamilyMapArity { got: map.len(), want: src.len() });
        }
        if comps.len() != src.len() {
            return Err(FreecatError::FamilyMapArity { got: comps.len(), want: src.len() });
        }
        for (a, &b) in map.iter().enumerate() {
            if b >= dst.len() {
                return Err(FreecatError::FamilyMapRange(b, dst.len()));
            }
            if self.base.src(&comps[a]) != src.family[a]
                || self.base.dst(&comps[a]) != dst.family[b]
            {
                return Err(FreecatError::ComponentMismatch(a));
            }
        }
        Ok(PlusMorphism { src, dst, map, comps })
    }
}

impl<C: Cat> Cat for Plus<C> {
    type Obj = PlusObject<C::Obj>;
    type Mor = PlusMorphism<C::Obj, C::Mor>;

    fn src(&self, f: &Self::Mor) -> Self::Obj {
        f.src.clone()
    }

    fn dst(&self, f: &Self::Mor) -> Self::Obj {
        f.dst.clone()
    }

    fn id(&self, x: &Self::Obj) -> Self::Mor {
        PlusMorphism {
            src: x.clone(),
            dst: x.clone(),
            map: (0..x.len()).collect(),
            comps: x.family.iter().map(|o| self.base.id(o)).collect(),
        }
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        assert_eq!(f.dst, g.src, "compose: endpoint mismatch");
        let map = f.map.iter().map(|&b| g.map[b]).collect();
        let comps = f
            .map
            .iter()
            .zip(&f.comps)
            .map(|(&b, fa)| self.base.compose(&g.comps[b], fa))
            .collect();
        PlusMorphism { src: f.src.clone(), dst: g.dst.clone(), map, comps }
    }

    fn mor_eq(&self, f: &Self::Mor, g: &Self::Mor) -> bool {
        f.src == g.src
            && f.dst == g.dst
            && f.map == g.map
            && f.comps
                .iter()
                .zip(&g.comps)
                .all(|(a, b)| self.base.mor_eq(a, b))
    }
}

impl<C: EnumHom> EnumHom for Plus<C> {
    /// Every reindexing function combined with every choice of components,
    /// lexicographic in the function table and then in the hom lists.
    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor> {
        let mut out = Vec::new();
        if x.is_empty() {
            out.push(PlusMorphism { src: x.clone(), dst: y.clone(), map: vec![], comps: vec![] });
            return out;
        }
        if y.is_empty() {
            return out;
        }
        let homs: Vec<Vec<Vec<C::Mor>>> = x
            .family
            .iter()
            .map(|xa| y.family.iter().map(|yb| self.base.hom(xa, yb)).collect())
            .collect();
        let mut map = vec![0usize; x.len()];
        loop {
            // all component choices for this reindexing
            let lists: Vec<&Vec<C::Mor>> = (0..x.len()).map(|a| &homs[a][map[a]]).collect();
            if lists.iter().all(|l| !l.is_empty()) {
                let mut pick = vec![0usize; x.len()];
                loop {
                    let comps: Vec<C::Mor> =
                        (0..x.len()).map(|a| lists[a][pick[a]].clone()).collect();
                    out.push(PlusMorphism {
                        src: x.clone(),
                        dst: y.clone(),
                        map: map.clone(),
                        comps,
                    });
                    let mut k = x.len();
                    loop {
                        if k == 0 {
                            break;
                        }
                        k -= 1;
                        pick[k] += 1;
                        if pick[k] < lists[k].len() {
                            break;
                        }
                        pick[k] = 0;
                        if k == 0 {
                            k = usize::MAX;
                            break;
                        }
                    }
                    if k == usize::MAX {
                        break;
                    }
                }
            }
            // next reindexing function
            let mut k = x.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                map[k] += 1;
                if map[k] < y.len() {
                    break;
                }
                map[k] = 0;
                if k == 0 {
                    return out;
                }
            }
        }
    }
}

impl<C: Cat> FinCoproducts for Plus<C> {
    fn coproduct_many(&self, parts: &[Self::Obj]) -> (Self::Obj, Vec<Self::Mor>) {
        let family: Vec<C::Obj> = parts.iter().flat_map(|p| p.family.iter().cloned()).collect();
        let total = PlusObject::new(family);
        let mut injections = Vec::with_capacity(parts.len());
        let mut offset = 0;
        for p in parts {
            injections.push(PlusMorphism {
                src: p.clone(),
                dst: total.clone(),
                map: (0..p.len()).map(|a| offset + a).collect(),
                comps: p.family.iter().map(|o| self.base.id(o)).collect(),
            });
            offset += p.len();
        }
        (total, injections)
    }

    fn copair_many(&self, legs: &[Self::Mor], dst: &Self::Obj) -> Self::Mor {
        for leg in legs {
            assert_eq!(&leg.dst, dst, "copair_many: destinations must agree");
        }
        let family: Vec<C::Obj> = legs.iter().flat_map(|l| l.src.family.iter().cloned()).collect();
        let src = PlusObject::new(family);
        let map = legs.iter().flat_map(|l| l.map.iter().copied()).collect();
        let comps = legs.iter().flat_map(|l| l.comps.iter().cloned()).collect();
        PlusMorphism { src, dst: dst.clone(), map, comps }
    }
}

impl<C: MonoidalCat> MonoidalCat for Plus<C> {
    fn unit_obj(&self) -> Self::Obj {
        PlusObject::new(vec![self.base.unit_obj()])
    }

    /// Lexicographic family pairing, left index outer.
    fn tensor_obj(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj {
        let mut family = Vec::with_capacity(a.len() * b.len());
        for xa in &a.family {
            for xb in &b.family {
                family.push(self.base.tensor_obj(xa, xb));
            }
        }
        PlusObject::new(family)
    }

    fn tensor_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor {
        let src = self.tensor_obj(&f.src, &g.src);
        let dst = self.tensor_obj(&f.dst, &g.dst);
        let mut map = Vec::with_capacity(src.len());
        let mut comps = Vec::with_capacity(src.len());
        for (a, fa) in f.map.iter().zip(&f.comps) {
            for (b, gb) in g.map.iter().zip(&g.comps) {
                map.push(a * g.dst.len() + b);
                comps.push(self.base.tensor_mor(fa, gb));
            }
        }
        PlusMorphism { src, dst, map, comps }
    }
}

/// The universal extension of an object assignment `K → T` to a strict
/// monoidal functor `Fwm(K) → T` for an affine monoidal target: a morphism
/// is sent to "permute the retained factors to the front, in destination
/// order, then discard the rest".
pub struct AffineExtension<'a, T: AffineMonoidal, F: Fn(&HObject) -> T::Obj> {
    pub target: &'a T,
    pub obj_map: F,
}

impl<'a, T: AffineMonoidal, F: Fn(&HObject) -> T::Obj> AffineExtension<'a, T, F> {
    pub fn new(target: &'a T, obj_map: F) -> Self {
        AffineExtension { target, obj_map }
    }

    pub fn on_obj(&self, x: &FwmObject) -> T::Obj {
        x.seq.iter().fold(self.target.unit_obj(), |acc, h| {
            self.target.tensor_obj(&acc, &(self.obj_map)(h))
        })
    }

    pub fn on_mor(&self, f: &FwmMorphism) -> T::Mor {
        let n = f.src.len();
        let m = f.dst.len();
        let mut perm = vec![usize::MAX; n];
        for (i, &s) in f.inj.iter().enumerate() {
            perm[s] = i;
        }
        let mut next = m;
        for slot in perm.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        let xs: Vec<T::Obj> = f.src.seq.iter().map(|h| (self.obj_map)(h)).collect();
        let p = self.target.permute(&xs, &perm);
        let kept = self.on_obj(&f.dst);
        let rest = (0..n)
            .filter(|j| perm[*j] >= m)
            .fold(self.target.unit_obj(), |acc, j| self.target.tensor_obj(&acc, &xs[j]));
        let keep_and_drop = self
            .target
            .tensor_mor(&self.target.id(&kept), &self.target.discard(&rest));
        self.target.compose(&keep_and_drop, &p)
    }
}

/// Object part of the coproduct extension of `F : C → T` to the completion:
/// the coproduct of the member images, with its injections.
pub fn extend_coproduct_obj<C: Cat, T: FinCoproducts>(
    target: &T,
    obj_map: impl Fn(&C::Obj) -> T::Obj,
    x: &PlusObject<C::Obj>,
) -> (T::Obj, Vec<T::Mor>) {
    let parts: Vec<T::Obj> = x.family.iter().map(|o| obj_map(o)).collect();
    target.coproduct_many(&parts)
}

/// Morphism part of the coproduct extension: component `a` travels through
/// `F(f_a)` and then the destination injection selected by the reindexing.
pub fn extend_coproduct_mor<C: Cat, T: FinCoproducts>(
    target: &T,
    obj_map: impl Fn(&C::Obj) -> T::Obj,
    mor_map: impl Fn(&C::Mor) -> T::Mor,
    f: &PlusMorphism<C::Obj, C::Mor>,
) -> T::Mor {
    let (dst_obj, dst_inj) = extend_coproduct_obj::<C, T>(target, &obj_map, &f.dst);
    let legs: Vec<T::Mor> = f
        .map
        .iter()
        .zip(&f.comps)
        .map(|(&b, fa)| target.compose(&dst_inj[b], &mor_map(fa)))
        .collect();
    target.copair_many(&legs, &dst_obj)
}

/// Checks `id ∘ f = f = f ∘ id` for every morphism between the given
/// objects; returns the number of morphisms checked.
pub fn check_identity_laws<C: EnumHom>(cat: &C, objs: &[C::Obj]) -> Result<usize, String> {
    let mut count = 0;
    for x in objs {
        for y in objs {
            for f in cat.hom(x, y) {
                let left = cat.compose(&cat.id(y), &f);
                let right = cat.compose(&f, &cat.id(x));
                if !cat.mor_eq(&left, &f) || !cat.mor_eq(&right, &f) {
                    return Err(format!("identity law fails for {f:?}"));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Checks `h ∘ (g ∘ f) = (h ∘ g) ∘ f` over all composable triples between
/// the given objects; returns the number of triples checked.
pub fn check_associativity<C: EnumHom>(cat: &C, objs: &[C::Obj]) -> Result<usize, String> {
    let mut count = 0;
    for x in objs {
        for y in objs {
            let fs = cat.hom(x, y);
            if fs.is_empty() {
                continue;
            }
            for z in objs {
                let gs = cat.hom(y, z);
                if gs.is_empty() {
                    continue;
                }
                for w in objs {
                    let hs = cat.hom(z, w);
                    for f in &fs {
                        for g in &gs {
                            let gf = cat.compose(g, f);
                            for h in &hs {
                                let left = cat.compose(h, &gf);
                                let right = cat.compose(&cat.compose(h, g), f);
                                if !cat.mor_eq(&left, &right) {
                                    return Err(format!(
                                        "associativity fails for {f:?}; {g:?}; {h:?}"
                                    ));
                                }
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> HObject {
        HObject::new("A", 2).unwrap()
    }

    fn b() -> HObject {
        HObject::new("B", 3).unwrap()
    }

    fn obj(hs: &[HObject]) -> FwmObject {
        FwmObject::new(hs.to_vec())
    }

    #[test]
    fn hom_counts_are_frozen() {
        let fwm = Fwm;
        let aa = obj(&[a(), a()]);
        let a1 = obj(&[a()]);
        let ab = obj(&[a(), b()]);
        let ba = obj(&[b(), a()]);
        assert_eq!(fwm.hom(&aa, &a1).len(), 2);
        assert_eq!(fwm.hom(&ab, &ba).len(), 1);
        assert_eq!(fwm.hom(&ab, &ba)[0].inj, vec![1, 0]);
        assert_eq!(fwm.hom(&ab, &FwmObject::unit()).len(), 1, "the unit is terminal");
        assert_eq!(fwm.hom(&FwmObject::unit(), &a1).len(), 0);
        assert_eq!(fwm.hom(&aa, &aa).len(), 2, "identity and the swap");
    }

    #[test]
    fn composition_is_contravariant_on_injections() {
        let fwm = Fwm;
        // f : (A,B,A) → (A,A) keeping factors 0 and 2; g : (A,A) → (A) keeping factor 1
        let src = obj(&[a(), b(), a()]);
        let mid = obj(&[a(), a()]);
        let dst = obj(&[a()]);
        let f = FwmMorphism::new(src.clone(), mid.clone(), vec![0, 2]).unwrap();
        let g = FwmMorphism::new(mid, dst, vec![1]).unwrap();
        let gf = fwm.compose(&g, &f);
        assert_eq!(gf.inj, vec![2], "inj of the composite is inj_f ∘ inj_g");
    }

    #[test]
    fn morphism_validation_rejects_bad_data() {
        let src = obj(&[a(), b()]);
        let dst = obj(&[a(), a()]);
        assert_eq!(
            FwmMorphism::new(src.clone(), dst.clone(), vec![0]),
            Err(FreecatError::InjectionArity { got: 1, want: 2 })
        );
        assert_eq!(
            FwmMorphism::new(src.clone(), dst.clone(), vec![0, 0]),
            Err(FreecatError::InjectionNotInjective(0))
        );
        assert_eq!(
            FwmMorphism::new(src.clone(), dst.clone(), vec![0, 5]),
            Err(FreecatError::InjectionRange(5, 2))
        );
        assert!(matches!(
            FwmMorphism::new(src, obj(&[b(), b()]), vec![1, 0]),
            Err(FreecatError::LabelMismatch { .. })
        ));
    }

    #[test]
    fn fwm_category_laws_hold_exactly() {
        let fwm = Fwm;
        let objs = vec![
            FwmObject::unit(),
            obj(&[a()]),
            obj(&[b()]),
            obj(&[a(), a()]),
            obj(&[a(), b()]),
            obj(&[b(), a()]),
        ];
        let morphisms = check_identity_laws(&fwm, &objs).unwrap();
        assert!(morphisms > 10);
        let triples = check_associativity(&fwm, &objs).unwrap();
        assert!(triples > 10);
    }

    #[test]
    fn fwm_tensor_is_strict_and_bifunctorial() {
        let fwm = Fwm;
        let x = obj(&[a()]);
        let y = obj(&[b(), a()]);
        let z = obj(&[b()]);
        assert_eq!(
            fwm.tensor_obj(&fwm.tensor_obj(&x, &y), &z),
            fwm.tensor_obj(&x, &fwm.tensor_obj(&y, &z))
        );
        assert_eq!(fwm.tensor_obj(&x, &FwmObject::unit()), x);

        let f1 = FwmMorphism::new(obj(&[a(), a()]), obj(&[a()]), vec![1]).unwrap();
        let f2 = FwmMorphism::new(obj(&[a()]), FwmObject::unit(), vec![]).unwrap();
        let g1 = FwmMorphism::new(obj(&[b(), a()]), obj(&[a(), b()]), vec![1, 0]).unwrap();
        let g2 = FwmMorphism::new(obj(&[a(), b()]), obj(&[b()]), vec![1]).unwrap();
        let lhs = fwm.tensor_mor(&fwm.compose(&f2, &f1), &fwm.compose(&g2, &g1));
        let rhs = fwm.compose(&fwm.tensor_mor(&f2, &g2), &fwm.tensor_mor(&f1, &g1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn fwm_permute_is_consistent_with_manual_injection() {
        let fwm = Fwm;
        let xs = [obj(&[a()]), obj(&[b(), b()]), obj(&[a()])];
        let p = fwm.permute(&xs, &[2, 0, 1]);
        // destination order: block 1, block 2, block 0
        assert_eq!(p.inj, vec![1, 2, 3, 0]);
        assert_eq!(p.dst, obj(&[b(), b(), a(), a()]));
    }

    #[test]
    fn affine_extension_into_fwm_itself_is_the_identity_functor() {
        let fwm = Fwm;
        let ext = AffineExtension::new(&fwm, |h: &HObject| FwmObject::single(h.clone()));
        let objs = [
            FwmObject::unit(),
            obj(&[a()]),
            obj(&[a(), b()]),
            obj(&[b(), a(), a()]),
        ];
        for x in &objs {
            assert_eq!(ext.on_obj(x), *x);
            for y in &objs {
                for f in fwm.hom(x, y) {
                    assert_eq!(ext.on_mor(&f), f, "extension must reproduce {f:?}");
                }
            }
        }
    }

    #[test]
    fn plus_hom_count_matches_function_times_component_formula() {
        let plus = Plus { base: Fwm };
        let x = PlusObject::new(vec![obj(&[a()])]);
        let y = PlusObject::new(vec![obj(&[a()]), obj(&[a()])]);
        assert_eq!(plus.hom(&x, &y).len(), 2);
        // two functions [2] → [2] with all-(A) members, one component choice each
        let xx = PlusObject::new(vec![obj(&[a()]), obj(&[a()])]);
        assert_eq!(plus.hom(&xx, &y).len(), 4);
        // empty family is initial
        let zero: PlusObject<FwmObject> = PlusObject::new(vec![]);
        assert_eq!(plus.hom(&zero, &y).len(), 1);
        assert_eq!(plus.hom(&y, &zero).len(), 0);
    }

    #[test]
    fn plus_category_laws_hold_exactly() {
        let plus = Plus { base: Fwm };
        let objs = vec![
            PlusObject::new(vec![]),
            PlusObject::new(vec![FwmObject::unit()]),
            PlusObject::new(vec![obj(&[a()])]),
            PlusObject::new(vec![obj(&[a()]), FwmObject::unit()]),
            PlusObject::new(vec![obj(&[a(), b()]), obj(&[a()])]),
        ];
        check_identity_laws(&plus, &objs).unwrap();
        check_associativity(&plus, &objs).unwrap();
    }

    #[test]
    fn plus_coproduct_universal_property_is_exact() {
        let plus = Plus { base: Fwm };
        let x = PlusObject::new(vec![obj(&[a()])]);
        let y = PlusObject::new(vec![obj(&[b()]), FwmObject::unit()]);
        let z = PlusObject::new(vec![obj(&[a()]), obj(&[b()]), FwmObject::unit()]);
        let (total, injections) = plus.coproduct_many(&[x.clone(), y.clone()]);
        assert_eq!(total.len(), 3);
        for f in plus.hom(&total, &z) {
            let legs: Vec<_> = injections.iter().map(|i| plus.compose(&f, i)).collect();
            let rebuilt = plus.copair_many(&legs, &z);
            assert!(plus.mor_eq(&rebuilt, &f));
        }
    }

    #[test]
    fn plus_tensor_is_lexicographic() {
        let plus = Plus { base: Fwm };
        let x = PlusObject::new(vec![obj(&[a()]), obj(&[b()])]);
        let y = PlusObject::new(vec![FwmObject::unit(), obj(&[a()])]);
        let xy = plus.tensor_obj(&x, &y);
        assert_eq!(
            xy.family,
            vec![obj(&[a()]), obj(&[a(), a()]), obj(&[b()]), obj(&[b(), a()])]
        );
        // unit of the completion is the singleton family of the base unit
        let unit = plus.unit_obj();
        assert_eq!(plus.tensor_obj(&unit, &x), x);
    }

    #[test]
    fn plus_tensor_mor_is_bifunctorial() {
        let plus = Plus { base: Fwm };
        let x = PlusObject::new(vec![obj(&[a(), a()])]);
        let y = PlusObject::new(vec![obj(&[a()]), obj(&[a()])]);
        let u = PlusObject::new(vec![obj(&[b(), a()])]);
        let v = PlusObject::new(vec![obj(&[a(), b()])]);
        let f1s = plus.hom(&x, &y);
        let f2s = plus.hom(&y, &x);
        let g1 = plus
            .mor(
                u.clone(),
                v.clone(),
                vec![0],
                vec![FwmMorphism::new(obj(&[b(), a()]), obj(&[a(), b()]), vec![1, 0]).unwrap()],
            )
            .unwrap();
        let g2 = plus
            .mor(
                v.clone(),
                u.clone(),
                vec![0],
                vec![FwmMorphism::new(obj(&[a(), b()]), obj(&[b(), a()]), vec![1, 0]).unwrap()],
            )
            .unwrap();
        for f1 in &f1s {
            for f2 in &f2s {
                let lhs = plus.tensor_mor(&plus.compose(f2, f1), &plus.compose(&g2, &g1));
                let rhs = plus.compose(&plus.tensor_mor(f2, &g2), &plus.tensor_mor(f1, &g1));
                assert!(plus.mor_eq(&lhs, &rhs));
            }
        }
    }

    #[test]
    fn extend_coproduct_into_plus_is_identity_on_singletons() {
        // extending the singleton-family embedding over a one-member family
        // must reproduce the embedded morphism
        let plus = Plus { base: Fwm };
        let x = PlusObject::new(vec![obj(&[a(), a()])]);
        let y = PlusObject::new(vec![obj(&[a()])]);
        let f = plus
            .mor(
                x.clone(),
                y.clone(),
                vec![0],
                vec![FwmMorphism::new(obj(&[a(), a()]), obj(&[a()]), vec![0]).unwrap()],
            )
            .unwrap();
        let embedded = extend_coproduct_mor::<Fwm, _>(
            &plus,
            |o| PlusObject::new(vec![o.clone()]),
            |m| PlusMorphism {
                src: PlusObject::new(vec![m.src.clone()]),
                dst: PlusObject::new(vec![m.dst.clone()]),
                map: vec![0],
                comps: vec![m.clone()],
            },
            &f,
        );
        assert!(plus.mor_eq(&embedded, &f));
    }

    #[test]
    fn plus_mor_validation() {
        let plus = Plus { base: Fwm };
        let x = PlusObject::new(vec![obj(&[a()])]);
        let y = PlusObject::new(vec![obj(&[b()])]);
        let id_a = FwmMorphism::identity(&obj(&[a()]));
        assert!(matches!(
            plus.mor(x.clone(), y.clone(), vec![0], vec![id_a.clone()]),
            Err(FreecatError::ComponentMismatch(0))
        ));
        assert!(matches!(
            plus.mor(x.clone(), y.clone(), vec![3], vec![id_a.clone()]),
            Err(FreecatError::FamilyMapRange(3, 1))
        ));
        assert!(matches!(
            plus.mor(x, y, vec![], vec![]),
            Err(FreecatError::FamilyMapArity { .. })
        ));
    }
}
