//! Fiber backends: the (co)limit, classification, factorization and lifting
//! primitives that the section-level algorithms are generic over.
//!
//! Two backends cover the instances this crate works with. `SetFibers`
//! concretizes every fiber object as a finite set and computes (co)limits
//! honestly via [`crate::setfun`]; intermediate objects need not be named in
//! the category, only section values must be. `SearchFibers` stays inside
//! the finite fiber categories and finds (co)limits by exhaustive
//! universal-property search.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::fib::FiberedCategory;
use crate::fincat::{
    colimit_in_category, discrete, limit_in_category, CategoryBuilder, FiniteCategory,
    FunctorData,
};
use crate::model::{ClassFlag, ModelClasses};
use crate::setfun::{
    diagram_colimit, diagram_limit, ConcreteSet, SetDiagram, SetFn,
};
use crate::{Error, Result};

/// Factorization mode for fiber maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorMode {
    CofThenTrivFib,
    TrivCofThenFib,
}

/// A diagram in one fiber, over an arbitrary finite shape.
pub struct FiberDiagram<B: FiberOps + ?Sized> {
    pub shape: Arc<FiniteCategory>,
    pub obs: Vec<B::Ob>,
    pub mors: Vec<B::Mor>,
}

impl<B: FiberOps + ?Sized> Clone for FiberDiagram<B> {
    fn clone(&self) -> Self {
        FiberDiagram {
            shape: self.shape.clone(),
            obs: self.obs.clone(),
            mors: self.mors.clone(),
        }
    }
}

/// The primitive fiber operations. `fiber` arguments are base object
/// indices; named objects and morphisms refer to the total category.
pub trait FiberOps {
    type Ob: Clone + std::fmt::Debug + PartialEq;
    type Mor: Clone + std::fmt::Debug + PartialEq;

    fn named_ob(&self, total_obj: u32) -> Self::Ob;
    fn named_mor(&self, total_mor: u32) -> Self::Mor;
    /// The total morphism with this underlying data, when src/tgt are named.
    fn as_total_mor(&self, fiber: u32, m: &Self::Mor) -> Option<u32>;
    fn ob_name(&self, o: &Self::Ob) -> Option<u32>;
    fn src(&self, m: &Self::Mor) -> Self::Ob;
    fn tgt(&self, m: &Self::Mor) -> Self::Ob;
    fn id_mor(&self, o: &Self::Ob) -> Self::Mor;
    fn compose(&self, fiber: u32, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    fn homs(&self, fiber: u32, a: &Self::Ob, b: &Self::Ob) -> Vec<Self::Mor>;
    fn is_iso(&self, fiber: u32, m: &Self::Mor) -> bool;
    /// All isomorphisms `a -> b`, deterministic order.
    fn isos_between(&self, fiber: u32, a: &Self::Ob, b: &Self::Ob) -> Vec<Self::Mor>;
    fn classify(&self, fiber: u32, m: &Self::Mor) -> BTreeSet<ClassFlag>;
    fn colimit(&self, fiber: u32, d: &FiberDiagram<Self>) -> Result<(Self::Ob, Vec<Self::Mor>)>;
    fn limit(&self, fiber: u32, d: &FiberDiagram<Self>) -> Result<(Self::Ob, Vec<Self::Mor>)>;
    /// The unique map out of a colimit determined by a compatible cocone.
    fn colimit_out(
        &self,
        fiber: u32,
        d: &FiberDiagram<Self>,
        colim: &(Self::Ob, Vec<Self::Mor>),
        tgt: &Self::Ob,
        legs: &[Self::Mor],
    ) -> Result<Self::Mor>;
    /// The unique map into a limit determined by a compatible cone.
    fn limit_in(
        &self,
        fiber: u32,
        d: &FiberDiagram<Self>,
        lim: &(Self::Ob, Vec<Self::Mor>),
        src: &Self::Ob,
        legs: &[Self::Mor],
    ) -> Result<Self::Mor>;
    /// Factor a fiber map with a *named* middle object (section values must
    /// live in the category).
    fn factor(
        &self,
        fiber: u32,
        m: &Self::Mor,
        mode: FactorMode,
    ) -> Result<(Self::Mor, Self::Ob, Self::Mor)>;
    /// All lifts `h` with `h ∘ i = a` and `p ∘ h = b`, deterministic order.
    fn lifts(
        &self,
        fiber: u32,
        i: &Self::Mor,
        p: &Self::Mor,
        a: &Self::Mor,
        b: &Self::Mor,
    ) -> Vec<Self::Mor>;
}

/// Pushout of the span `b <-f- a -g-> c` via a three-object span diagram.
pub fn pushout_of<B: FiberOps>(
    backend: &B,
    fiber: u32,
    f: &B::Mor,
    g: &B::Mor,
) -> Result<(FiberDiagram<B>, (B::Ob, Vec<B::Mor>))> {
    let shape = Arc::new(crate::fincat::span());
    let a = shape.object("a").unwrap() as usize;
    let b = shape.object("b").unwrap() as usize;
    let c = shape.object("c").unwrap() as usize;
    let mut obs = vec![backend.src(f); 3];
    obs[a] = backend.tgt(f);
    obs[b] = backend.src(f);
    obs[c] = backend.tgt(g);
    let mut mors = vec![backend.id_mor(&obs[b]); shape.morphism_count()];
    for m in shape.morphisms() {
        let id = shape.morphism_id(m);
        mors[m as usize] = match id {
            "l" => f.clone(),
            "r" => g.clone(),
            _ => backend.id_mor(&obs[shape.src(m) as usize]),
        };
    }
    let d = FiberDiagram { shape, obs, mors };
    let colim = backend.colimit(fiber, &d)?;
    Ok((d, colim))
}

/// Cocone legs of a pushout: (from tgt f, from tgt g).
pub fn pushout_legs<B: FiberOps>(
    d: &FiberDiagram<B>,
    colim: &(B::Ob, Vec<B::Mor>),
) -> (B::Mor, B::Mor) {
    let a = d.shape.object("a").unwrap() as usize;
    let c = d.shape.object("c").unwrap() as usize;
    (colim.1[a].clone(), colim.1[c].clone())
}

/// Pullback of the cospan `b -f-> a <-g- c`.
pub fn pullback_of<B: FiberOps>(
    backend: &B,
    fiber: u32,
    f: &B::Mor,
    g: &B::Mor,
) -> Result<(FiberDiagram<B>, (B::Ob, Vec<B::Mor>))> {
    let shape = Arc::new(crate::fincat::opposite(&crate::fincat::span()));
    // in the opposite span, l: a -> b and r: c -> b
    let a = shape.object("a").unwrap() as usize;
    let b = shape.object("b").unwrap() as usize;
    let c = shape.object("c").unwrap() as usize;
    let mut obs = vec![backend.src(f); 3];
    obs[a] = backend.src(f);
    obs[b] = backend.tgt(f);
    obs[c] = backend.src(g);
    let mut mors = vec![backend.id_mor(&obs[b]); shape.morphism_count()];
    for m in shape.morphisms() {
        let id = shape.morphism_id(m);
        mors[m as usize] = match id {
            "l" => f.clone(),
            "r" => g.clone(),
            _ => backend.id_mor(&obs[shape.src(m) as usize]),
        };
    }
    let d = FiberDiagram { shape, obs, mors };
    let lim = backend.limit(fiber, &d)?;
    Ok((d, lim))
}

/// Cone legs of a pullback: (to src f, to src g).
pub fn pullback_legs<B: FiberOps>(
    d: &FiberDiagram<B>,
    lim: &(B::Ob, Vec<B::Mor>),
) -> (B::Mor, B::Mor) {
    let a = d.shape.object("a").unwrap() as usize;
    let c = d.shape.object("c").unwrap() as usize;
    (lim.1[a].clone(), lim.1[c].clone())
}

// ---------------------------------------------------------------------------
// Set-backed fibers
// ---------------------------------------------------------------------------

/// A fiber object for the set backend: an optional category name plus its
/// concrete carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct SetOb {
    pub name: Option<u32>,
    pub set: ConcreteSet,
}

/// A fiber morphism for the set backend: a total function.
#[derive(Debug, Clone, PartialEq)]
pub struct SetMor {
    pub src: SetOb,
    pub tgt: SetOb,
    pub f: SetFn,
}

/// Set-valued fibers with (all, mono, epi) classes. (Co)limits are honest
/// set-level constructions and may produce unnamed objects; factorization
/// middles are relabeled onto named fiber objects and fail loudly when the
/// cap leaves no object of the required size.
#[derive(Debug, Clone)]
pub struct SetFibers {
    pub fc: Arc<FiberedCategory>,
    /// concretization per total object
    pub obj_sets: Vec<ConcreteSet>,
    /// function per total morphism
    pub mor_fns: Vec<SetFn>,
}

impl SetFibers {
    /// Validate that the concretization is functorial.
    pub fn new(
        fc: Arc<FiberedCategory>,
        obj_sets: Vec<ConcreteSet>,
        mor_fns: Vec<SetFn>,
    ) -> Result<Self> {
        let t = &fc.total;
        if obj_sets.len() != t.object_count() || mor_fns.len() != t.morphism_count() {
            return Err(Error::Structural("concretization must cover the total category".into()));
        }
        for m in t.morphisms() {
            let f = &mor_fns[m as usize];
            if f.map.len() != obj_sets[t.src(m) as usize].len()
                || f.map.iter().any(|&v| v as usize >= obj_sets[t.tgt(m) as usize].len())
            {
                return Err(Error::Structural(format!(
                    "function at `{}` has wrong endpoints",
                    t.morphism_id(m)
                )));
            }
        }
        for o in t.objects() {
            if !mor_fns[t.identity(o) as usize].is_identity() {
                return Err(Error::Structural(format!(
                    "identity at `{}` is not concretized as the identity",
                    t.object_id(o)
                )));
            }
        }
        for f in t.morphisms() {
            for g in t.hom_from(t.tgt(f)) {
                if let Some(gf) = t.compose(g, f) {
                    let lhs = &mor_fns[gf as usize];
                    let rhs = mor_fns[g as usize].compose(&mor_fns[f as usize]);
                    if *lhs != rhs {
                        return Err(Error::Structural(format!(
                            "concretization not functorial at `{}` ∘ `{}`",
                            t.morphism_id(g),
                            t.morphism_id(f)
                        )));
                    }
                }
            }
        }
        Ok(SetFibers { fc, obj_sets, mor_fns })
    }

    fn to_set_diagram(&self, d: &FiberDiagram<Self>) -> SetDiagram {
        SetDiagram {
            shape: d.shape.clone(),
            sets: d.obs.iter().map(|o| o.set.clone()).collect(),
            fns: d.mors.iter().map(|m| m.f.clone()).collect(),
        }
    }

    /// Least-id fiber object over `fiber` whose carrier has the given size.
    fn object_of_size(&self, fiber: u32, n: usize) -> Option<u32> {
        let mut cands: Vec<u32> = self
            .fc
            .fiber_objects(fiber)
            .iter()
            .copied()
            .filter(|&o| self.obj_sets[o as usize].len() == n)
            .collect();
        cands.sort_by(|&a, &b| {
            self.fc.total.object_id(a).cmp(self.fc.total.object_id(b))
        });
        cands.first().copied()
    }
}

impl FiberOps for SetFibers {
    type Ob = SetOb;
    type Mor = SetMor;

    fn named_ob(&self, total_obj: u32) -> SetOb {
        SetOb { name: Some(total_obj), set: self.obj_sets[total_obj as usize].clone() }
    }

    fn named_mor(&self, total_mor: u32) -> SetMor {
        SetMor {
            src: self.named_ob(self.fc.total.src(total_mor)),
            tgt: self.named_ob(self.fc.total.tgt(total_mor)),
            f: self.mor_fns[total_mor as usize].clone(),
        }
    }

    fn as_total_mor(&self, _fiber: u32, m: &SetMor) -> Option<u32> {
        let (s, t) = (m.src.name?, m.tgt.name?);
        self.fc
            .fiber_homs(s, t)
            .into_iter()
            .find(|&cand| self.mor_fns[cand as usize] == m.f)
    }

    fn ob_name(&self, o: &SetOb) -> Option<u32> {
        o.name
    }

    fn src(&self, m: &SetMor) -> SetOb {
        m.src.clone()
    }

    fn tgt(&self, m: &SetMor) -> SetOb {
        m.tgt.clone()
    }

    fn id_mor(&self, o: &SetOb) -> SetMor {
        SetMor { src: o.clone(), tgt: o.clone(), f: SetFn::identity(o.set.len()) }
    }

    fn compose(&self, _fiber: u32, g: &SetMor, f: &SetMor) -> Result<SetMor> {
        if f.tgt != g.src {
            return Err(Error::Structural("non-composable fiber morphisms".into()));
        }
        Ok(SetMor { src: f.src.clone(), tgt: g.tgt.clone(), f: g.f.compose(&f.f) })
    }

    fn homs(&self, _fiber: u32, a: &SetOb, b: &SetOb) -> Vec<SetMor> {
        // all functions, in lexicographic order
        let (na, nb) = (a.set.len(), b.set.len());
        if na > 0 && nb == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut v = vec![0u32; na];
        loop {
            out.push(SetMor { src: a.clone(), tgt: b.clone(), f: SetFn { map: v.clone() } });
            let mut i = 0;
            while i < na {
                v[i] += 1;
                if (v[i] as usize) < nb {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
            if i == na {
                break;
            }
        }
        out
    }

    fn is_iso(&self, _fiber: u32, m: &SetMor) -> bool {
        m.f.injective() && m.f.surjective_onto(m.tgt.set.len())
    }

    fn isos_between(&self, _fiber: u32, a: &SetOb, b: &SetOb) -> Vec<SetMor> {
        let n = a.set.len();
        if n != b.set.len() {
            return Vec::new();
        }
        // all permutations, in lexicographic order
        let mut out = Vec::new();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        loop {
            out.push(SetMor { src: a.clone(), tgt: b.clone(), f: SetFn { map: perm.clone() } });
            // next_permutation
            let mut i = n.wrapping_sub(1);
            if n < 2 {
                break;
            }
            while i > 0 && perm[i - 1] >= perm[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = n - 1;
            while perm[j] <= perm[i - 1] {
                j -= 1;
            }
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        out
    }

    fn classify(&self, _fiber: u32, m: &SetMor) -> BTreeSet<ClassFlag> {
        let mut out = BTreeSet::new();
        out.insert(ClassFlag::Weq);
        if m.f.injective() {
            out.insert(ClassFlag::Cof);
            out.insert(ClassFlag::TrivialCof);
        }
        if m.f.surjective_onto(m.tgt.set.len()) {
            out.insert(ClassFlag::Fib);
            out.insert(ClassFlag::TrivialFib);
        }
        out
    }

    fn colimit(&self, _fiber: u32, d: &FiberDiagram<Self>) -> Result<(SetOb, Vec<SetMor>)> {
        let sd = self.to_set_diagram(d);
        let col = diagram_colimit(&sd);
        let ob = SetOb { name: None, set: col.as_set() };
        let legs = d
            .obs
            .iter()
            .enumerate()
            .map(|(o, src)| SetMor {
                src: src.clone(),
                tgt: ob.clone(),
                f: col.injection(&sd, o as u32),
            })
            .collect();
        Ok((ob, legs))
    }

    fn limit(&self, _fiber: u32, d: &FiberDiagram<Self>) -> Result<(SetOb, Vec<SetMor>)> {
        let sd = self.to_set_diagram(d);
        let lim = diagram_limit(&sd);
        let ob = SetOb { name: None, set: lim.as_set(&sd) };
        let legs = d
            .obs
            .iter()
            .enumerate()
            .map(|(o, tgt)| SetMor {
                src: ob.clone(),
                tgt: tgt.clone(),
                f: lim.projection(o as u32),
            })
            .collect();
        Ok((ob, legs))
    }

    fn colimit_out(
        &self,
        _fiber: u32,
        d: &FiberDiagram<Self>,
        colim: &(SetOb, Vec<SetMor>),
        tgt: &SetOb,
        legs: &[SetMor],
    ) -> Result<SetMor> {
        // determined by the passed cocone: every colimit element is hit by
        // some injection, so the image is forced and checked for consistency
        let n = colim.0.set.len();
        let mut map = vec![u32::MAX; n];
        for o in 0..d.obs.len() {
            for e in 0..d.obs[o].set.len() {
                let cls = colim.1[o].f.map[e] as usize;
                let img = legs[o].f.map[e];
                if map[cls] != u32::MAX && map[cls] != img {
                    return Err(Error::Structural(
                        "legs do not form a cocone over the colimit".into(),
                    ));
                }
                map[cls] = img;
            }
        }
        if map.iter().any(|&v| v == u32::MAX) {
            return Err(Error::Structural("cocone does not cover the colimit".into()));
        }
        Ok(SetMor { src: colim.0.clone(), tgt: tgt.clone(), f: SetFn { map } })
    }

    fn limit_in(
        &self,
        _fiber: u32,
        d: &FiberDiagram<Self>,
        lim: &(SetOb, Vec<SetMor>),
        src: &SetOb,
        legs: &[SetMor],
    ) -> Result<SetMor> {
        // limit elements are separated by their projections, so the image of
        // each source element is the unique limit element with the same legs
        let mut map = Vec::with_capacity(src.set.len());
        for s in 0..src.set.len() {
            let fam: Vec<u32> = (0..d.obs.len()).map(|o| legs[o].f.map[s]).collect();
            let mut found = None;
            for z in 0..lim.0.set.len() {
                if (0..d.obs.len()).all(|o| lim.1[o].f.map[z] == fam[o]) {
                    if found.is_some() {
                        return Err(Error::Structural(
                            "limit projections do not separate elements".into(),
                        ));
                    }
                    found = Some(z as u32);
                }
            }
            let z = found.ok_or_else(|| {
                Error::Structural("legs do not form a cone into the limit".into())
            })?;
            map.push(z);
        }
        Ok(SetMor { src: src.clone(), tgt: lim.0.clone(), f: SetFn { map } })
    }

    fn factor(
        &self,
        fiber: u32,
        m: &SetMor,
        _mode: FactorMode,
    ) -> Result<(SetMor, SetOb, SetMor)> {
        // weak equivalences are everything here, so both modes use the
        // canonical injective-then-surjective route through A ⊔ (C ∖ im f)
        let a = m.src.set.len();
        let image: BTreeSet<u32> = m.f.map.iter().copied().collect();
        let missing: Vec<u32> =
            (0..m.tgt.set.len() as u32).filter(|x| !image.contains(x)).collect();
        let mid_size = a + missing.len();
        let named = self.object_of_size(fiber, mid_size).ok_or_else(|| {
            Error::MissingLimit(format!(
                "no fiber object of size {mid_size} over `{}` to carry the factorization middle",
                self.fc.base.object_id(fiber)
            ))
        })?;
        let mid = self.named_ob(named);
        let inj = SetMor {
            src: m.src.clone(),
            tgt: mid.clone(),
            f: SetFn { map: (0..a as u32).collect() },
        };
        let mut surj_map = m.f.map.clone();
        surj_map.extend(missing.iter().copied());
        let surj = SetMor { src: mid.clone(), tgt: m.tgt.clone(), f: SetFn { map: surj_map } };
        Ok((inj, mid, surj))
    }

    fn lifts(&self, _fiber: u32, i: &SetMor, p: &SetMor, a: &SetMor, b: &SetMor) -> Vec<SetMor> {
        // enumerate candidates h: tgt(i) -> src(p), constrained on im(i) by a
        // and filtered by p ∘ h = b
        let nb = i.tgt.set.len();
        let nx = p.src.set.len();
        let mut forced: Vec<Option<u32>> = vec![None; nb];
        for (e, &ie) in i.f.map.iter().enumerate() {
            let want = a.f.map[e];
            match forced[ie as usize] {
                Some(w) if w != want => return Vec::new(),
                _ => forced[ie as usize] = Some(want),
            }
        }
        // free positions choose any preimage of b under p
        let mut choices: Vec<Vec<u32>> = Vec::with_capacity(nb);
        for (pos, f) in forced.iter().enumerate() {
            match f {
                Some(v) => {
                    if p.f.map[*v as usize] != b.f.map[pos] {
                        return Vec::new();
                    }
                    choices.push(vec![*v]);
                }
                None => {
                    let opts: Vec<u32> = (0..nx as u32)
                        .filter(|&x| p.f.map[x as usize] == b.f.map[pos])
                        .collect();
                    if opts.is_empty() {
                        return Vec::new();
                    }
                    choices.push(opts);
                }
            }
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; nb];
        loop {
            let map: Vec<u32> = (0..nb).map(|k| choices[k][idx[k]]).collect();
            out.push(SetMor { src: i.tgt.clone(), tgt: p.src.clone(), f: SetFn { map } });
            let mut k = 0;
            while k < nb {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == nb {
                break;
            }
            if nb == 0 {
                break;
            }
        }
        // when both endpoints are named, only category morphisms qualify
        if i.tgt.name.is_some() && p.src.name.is_some() {
            out.retain(|h| self.as_total_mor(_fiber, h).is_some());
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Search-backed fibers
// ---------------------------------------------------------------------------

/// Fibers searched inside the finite fiber categories, with model classes
/// supplied per base object. Objects and morphisms are total-category
/// indices throughout.
#[derive(Debug, Clone)]
pub struct SearchFibers {
    pub fc: Arc<FiberedCategory>,
    /// model classes per base object, on the cached fiber categories
    pub models: Vec<ModelClasses>,
}

impl SearchFibers {
    pub fn new(fc: Arc<FiberedCategory>, models: Vec<ModelClasses>) -> Result<Self> {
        if models.len() != fc.base.object_count() {
            return Err(Error::Structural("one model structure per base object required".into()));
        }
        for c in fc.base.objects() {
            let fib = fc.fiber(c);
            let mc = &models[c as usize];
            if mc.category.object_count() != fib.object_count()
                || mc.category.morphism_count() != fib.morphism_count()
            {
                return Err(Error::Structural(format!(
                    "model classes over `{}` do not match the fiber",
                    fc.base.object_id(c)
                )));
            }
        }
        Ok(SearchFibers { fc, models })
    }

    fn fiber_mor_index(&self, fiber: u32, total_mor: u32) -> u32 {
        let fibcat = self.fc.fiber(fiber);
        fibcat
            .morphism(self.fc.total.morphism_id(total_mor))
            .expect("fiber morphism shares its id with the total category")
    }

    fn total_mor_index(&self, fiber: u32, fiber_mor: u32) -> u32 {
        let fibcat = self.fc.fiber(fiber);
        self.fc
            .total
            .morphism(fibcat.morphism_id(fiber_mor))
            .expect("total morphism shares its id with the fiber")
    }

    fn diagram_functor(&self, fiber: u32, d: &FiberDiagram<Self>) -> Result<FunctorData> {
        let fibcat = self.fc.fiber(fiber).clone();
        let obs: Vec<u32> = d
            .obs
            .iter()
            .map(|&o| fibcat.object(self.fc.total.object_id(o)))
            .collect::<Result<_>>()?;
        let mors: Vec<u32> = d
            .mors
            .iter()
            .map(|&m| fibcat.morphism(self.fc.total.morphism_id(m)))
            .collect::<Result<_>>()?;
        FunctorData::new(d.shape.clone(), fibcat, obs, mors)
    }
}

impl FiberOps for SearchFibers {
    type Ob = u32;
    type Mor = u32;

    fn named_ob(&self, total_obj: u32) -> u32 {
        total_obj
    }

    fn named_mor(&self, total_mor: u32) -> u32 {
        total_mor
    }

    fn as_total_mor(&self, _fiber: u32, m: &u32) -> Option<u32> {
        Some(*m)
    }

    fn ob_name(&self, o: &u32) -> Option<u32> {
        Some(*o)
    }

    fn src(&self, m: &u32) -> u32 {
        self.fc.total.src(*m)
    }

    fn tgt(&self, m: &u32) -> u32 {
        self.fc.total.tgt(*m)
    }

    fn id_mor(&self, o: &u32) -> u32 {
        self.fc.total.identity(*o)
    }

    fn compose(&self, _fiber: u32, g: &u32, f: &u32) -> Result<u32> {
        self.fc
            .total
            .compose(*g, *f)
            .ok_or_else(|| Error::Structural("non-composable fiber morphisms".into()))
    }

    fn homs(&self, _fiber: u32, a: &u32, b: &u32) -> Vec<u32> {
        self.fc.fiber_homs(*a, *b)
    }

    fn is_iso(&self, _fiber: u32, m: &u32) -> bool {
        self.fc.total.is_iso(*m)
    }

    fn isos_between(&self, fiber: u32, a: &u32, b: &u32) -> Vec<u32> {
        self.homs(fiber, a, b)
            .into_iter()
            .filter(|m| self.fc.total.is_iso(*m))
            .collect()
    }

    fn classify(&self, fiber: u32, m: &u32) -> BTreeSet<ClassFlag> {
        let fm = self.fiber_mor_index(fiber, *m);
        crate::model::classify(&self.models[fiber as usize], fm)
    }

    fn colimit(&self, fiber: u32, d: &FiberDiagram<Self>) -> Result<(u32, Vec<u32>)> {
        let fd = self.diagram_functor(fiber, d)?;
        let (apex, cocone) = colimit_in_category(&fd).ok_or_else(|| {
            Error::MissingLimit(format!(
                "no colimit in the fiber over `{}`",
                self.fc.base.object_id(fiber)
            ))
        })?;
        let fibcat = self.fc.fiber(fiber);
        let apex_total = self
            .fc
            .total
            .object(fibcat.object_id(apex))
            .expect("shared ids");
        let legs = cocone
            .into_iter()
            .map(|m| self.total_mor_index(fiber, m))
            .collect();
        Ok((apex_total, legs))
    }

    fn limit(&self, fiber: u32, d: &FiberDiagram<Self>) -> Result<(u32, Vec<u32>)> {
        let fd = self.diagram_functor(fiber, d)?;
        let (apex, cone) = limit_in_category(&fd).ok_or_else(|| {
            Error::MissingLimit(format!(
                "no limit in the fiber over `{}`",
                self.fc.base.object_id(fiber)
            ))
        })?;
        let fibcat = self.fc.fiber(fiber);
        let apex_total = self
            .fc
            .total
            .object(fibcat.object_id(apex))
            .expect("shared ids");
        let legs = cone.into_iter().map(|m| self.total_mor_index(fiber, m)).collect();
        Ok((apex_total, legs))
    }

    fn colimit_out(
        &self,
        _fiber: u32,
        d: &FiberDiagram<Self>,
        colim: &(u32, Vec<u32>),
        tgt: &u32,
        legs: &[u32],
    ) -> Result<u32> {
        let t = &self.fc.total;
        let mut cands: Vec<u32> = self
            .fc
            .fiber_homs(colim.0, *tgt)
            .into_iter()
            .filter(|&u| {
                (0..d.obs.len()).all(|o| t.compose(u, colim.1[o]) == Some(legs[o]))
            })
            .collect();
        cands.sort_by(|&a, &b| t.morphism_id(a).cmp(t.morphism_id(b)));
        match cands.len() {
            1 => Ok(cands[0]),
            0 => Err(Error::Structural("no map out of the colimit matches the cocone".into())),
            _ => Err(Error::Structural(
                "colimit universal property violated: several maps match".into(),
            )),
        }
    }

    fn limit_in(
        &self,
        _fiber: u32,
        d: &FiberDiagram<Self>,
        lim: &(u32, Vec<u32>),
        src: &u32,
        legs: &[u32],
    ) -> Result<u32> {
        let t = &self.fc.total;
        let mut cands: Vec<u32> = self
            .fc
            .fiber_homs(*src, lim.0)
            .into_iter()
            .filter(|&u| (0..d.obs.len()).all(|o| t.compose(lim.1[o], u) == Some(legs[o])))
            .collect();
        cands.sort_by(|&a, &b| t.morphism_id(a).cmp(t.morphism_id(b)));
        match cands.len() {
            1 => Ok(cands[0]),
            0 => Err(Error::Structural("no map into the limit matches the cone".into())),
            _ => Err(Error::Structural(
                "limit universal property violated: several maps match".into(),
            )),
        }
    }

    fn factor(&self, fiber: u32, m: &u32, mode: FactorMode) -> Result<(u32, u32, u32)> {
        let fm = self.fiber_mor_index(fiber, *m);
        let mc = &self.models[fiber as usize];
        let pair = match mode {
            FactorMode::CofThenTrivFib => mc.factor_cf.get(&fm),
            FactorMode::TrivCofThenFib => mc.factor_tcf.get(&fm),
        }
        .ok_or_else(|| {
            Error::MissingLimit(format!(
                "no stored factorization for `{}` in the fiber over `{}`",
                self.fc.total.morphism_id(*m),
                self.fc.base.object_id(fiber)
            ))
        })?;
        let l = self.total_mor_index(fiber, pair.0);
        let r = self.total_mor_index(fiber, pair.1);
        Ok((l, self.fc.total.tgt(l), r))
    }

    fn lifts(&self, _fiber: u32, i: &u32, p: &u32, a: &u32, b: &u32) -> Vec<u32> {
        let t = &self.fc.total;
        let mut out: Vec<u32> = self
            .fc
            .fiber_homs(t.tgt(*i), t.src(*p))
            .into_iter()
            .filter(|&h| t.compose(h, *i) == Some(*a) && t.compose(*p, h) == Some(*b))
            .collect();
        out.sort_by(|&x, &y| t.morphism_id(x).cmp(t.morphism_id(y)));
        out
    }
}

/// A diagram over the empty shape, the seed for initial/terminal objects.
pub fn empty_diagram<B: FiberOps>() -> FiberDiagram<B> {
    FiberDiagram {
        shape: Arc::new(CategoryBuilder::new().finish().expect("empty category")),
        obs: Vec::new(),
        mors: Vec::new(),
    }
}

/// A diagram over a discrete shape.
pub fn discrete_diagram<B: FiberOps>(backend: &B, obs: Vec<B::Ob>) -> FiberDiagram<B> {
    let names: Vec<String> = (0..obs.len()).map(|i| format!("d{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let shape = Arc::new(discrete(&name_refs));
    let mors = obs.iter().map(|o| backend.id_mor(o)).collect();
    FiberDiagram { shape, obs, mors }
}
