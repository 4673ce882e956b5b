//! Fibered-category machinery: (op)cartesian morphism detection, the
//! fibration zoo, Grothendieck constructions, semifibration validation,
//! transition functors, and mate squares.
//!
//! Cartesianness follows the original local convention: a morphism
//! `α: X -> Y` is cartesian iff every `β: X' -> Y` with the same projection
//! factors through `α` by a unique fiber morphism. Chosen lifts always pick
//! the lexicographically least morphism id, so all outputs are
//! deterministic.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::fincat::{full_subcategory, FiniteCategory, FunctorData, MorphismClass};
use crate::reedy::FactorizationSystem;
use crate::{Error, Result};

/// A functor to a base category together with chosen (op)cartesian lifts and
/// cached fibers.
#[derive(Debug, Clone)]
pub struct FiberedCategory {
    pub total: Arc<FiniteCategory>,
    pub base: Arc<FiniteCategory>,
    pub projection: FunctorData,
    /// chosen cartesian lift per (base morphism, total object over its target)
    pub cleavage_cart: HashMap<(u32, u32), u32>,
    /// chosen opcartesian lift per (base morphism, total object over its source)
    pub cleavage_opcart: HashMap<(u32, u32), u32>,
    fiber_objects: Vec<Vec<u32>>,
    fibers: Vec<Arc<FiniteCategory>>,
}

impl FiberedCategory {
    pub fn new(
        total: Arc<FiniteCategory>,
        base: Arc<FiniteCategory>,
        projection: FunctorData,
        cleavage_cart: HashMap<(u32, u32), u32>,
        cleavage_opcart: HashMap<(u32, u32), u32>,
    ) -> Result<Self> {
        let bad = projection.validate();
        if !bad.is_empty() {
            return Err(Error::Structural(format!("projection is not a functor: {}", bad[0])));
        }
        let mut fiber_objects = vec![Vec::new(); base.object_count()];
        for e in total.objects() {
            fiber_objects[projection.on_object(e) as usize].push(e);
        }
        let mut fibers = Vec::with_capacity(base.object_count());
        for c in base.objects() {
            let objs = &fiber_objects[c as usize];
            // fiber subcategory: objects over c, morphisms over id_c
            let sub = fiber_subcategory(&total, &projection, c, objs)?;
            fibers.push(Arc::new(sub));
        }
        for (&(f, y), &m) in &cleavage_cart {
            if projection.on_morphism(m) != f || total.tgt(m) != y {
                return Err(Error::Structural(format!(
                    "cartesian cleavage entry ({}, {}) does not cover its morphism",
                    base.morphism_id(f),
                    total.object_id(y)
                )));
            }
        }
        for (&(f, x), &m) in &cleavage_opcart {
            if projection.on_morphism(m) != f || total.src(m) != x {
                return Err(Error::Structural(format!(
                    "opcartesian cleavage entry ({}, {}) does not cover its morphism",
                    base.morphism_id(f),
                    total.object_id(x)
                )));
            }
        }
        Ok(FiberedCategory {
            total,
            base,
            projection,
            cleavage_cart,
            cleavage_opcart,
            fiber_objects,
            fibers,
        })
    }

    pub fn fiber_objects(&self, c: u32) -> &[u32] {
        &self.fiber_objects[c as usize]
    }

    /// The fiber over `c` as a finite category. Object and morphism ids are
    /// shared with the total category.
    pub fn fiber(&self, c: u32) -> &Arc<FiniteCategory> {
        &self.fibers[c as usize]
    }

    pub fn proj_obj(&self, e: u32) -> u32 {
        self.projection.on_object(e)
    }

    pub fn proj_mor(&self, m: u32) -> u32 {
        self.projection.on_morphism(m)
    }

    /// All total morphisms lying over the given base morphism.
    pub fn morphisms_over(&self, f: u32) -> Vec<u32> {
        self.total
            .morphisms()
            .filter(|&m| self.proj_mor(m) == f)
            .collect()
    }

    /// Fiber morphisms (over the identity) from `x` to `y` in one fiber.
    pub fn fiber_homs(&self, x: u32, y: u32) -> Vec<u32> {
        let c = self.proj_obj(x);
        let idc = self.base.identity(c);
        self.total
            .hom(x, y)
            .iter()
            .copied()
            .filter(|&m| self.proj_mor(m) == idc)
            .collect()
    }

    /// The chosen cartesian lift of `f` at `y` (a total object over
    /// `tgt f`): the identity for identity base morphisms, then cleavage
    /// entries, then the least cartesian lift by search.
    pub fn cart_lift(&self, f: u32, y: u32) -> Option<u32> {
        if self.base.is_identity(f) {
            return Some(self.total.identity(y));
        }
        if let Some(&m) = self.cleavage_cart.get(&(f, y)) {
            return Some(m);
        }
        let mut cands: Vec<u32> = self
            .morphisms_over(f)
            .into_iter()
            .filter(|&m| self.total.tgt(m) == y && is_cartesian(self, m))
            .collect();
        cands.sort_by(|&a, &b| self.total.morphism_id(a).cmp(self.total.morphism_id(b)));
        cands.first().copied()
    }

    /// The chosen opcartesian lift of `f` at `x` (a total object over
    /// `src f`), with the same priority order as [`Self::cart_lift`].
    pub fn opcart_lift(&self, f: u32, x: u32) -> Option<u32> {
        if self.base.is_identity(f) {
            return Some(self.total.identity(x));
        }
        if let Some(&m) = self.cleavage_opcart.get(&(f, x)) {
            return Some(m);
        }
        let mut cands: Vec<u32> = self
            .morphisms_over(f)
            .into_iter()
            .filter(|&m| self.total.src(m) == x && is_opcartesian(self, m))
            .collect();
        cands.sort_by(|&a, &b| self.total.morphism_id(a).cmp(self.total.morphism_id(b)));
        cands.first().copied()
    }
}

fn fiber_subcategory(
    total: &Arc<FiniteCategory>,
    projection: &FunctorData,
    c: u32,
    objs: &[u32],
) -> Result<FiniteCategory> {
    // full subcategory on the fiber objects, then keep only fiber morphisms
    let base = &projection.target;
    let idc = base.identity(c);
    let mut b = crate::fincat::CategoryBuilder::new();
    for &o in objs {
        b.object(total.object_id(o))?;
    }
    let kept: Vec<u32> = total
        .morphisms()
        .filter(|&m| projection.on_morphism(m) == idc)
        .collect();
    for &m in &kept {
        b.morphism(
            total.morphism_id(m),
            total.object_id(total.src(m)),
            total.object_id(total.tgt(m)),
        )?;
    }
    for &o in objs {
        b.identity(total.object_id(o), total.morphism_id(total.identity(o)))?;
    }
    for &f in &kept {
        for &g in &kept {
            if total.tgt(f) == total.src(g) {
                if let Some(h) = total.compose(g, f) {
                    b.compose(total.morphism_id(g), total.morphism_id(f), total.morphism_id(h))?;
                }
            }
        }
    }
    b.finish()
}

/// SGA1-style cartesianness: every parallel morphism with the same
/// projection factors uniquely through `m` by a fiber morphism.
pub fn is_cartesian(fc: &FiberedCategory, m: u32) -> bool {
    let t = &fc.total;
    let f = fc.proj_mor(m);
    let y = t.tgt(m);
    let x = t.src(m);
    for x2 in fc.fiber_objects(fc.proj_obj(x)) {
        for &beta in t.hom(*x2, y) {
            if fc.proj_mor(beta) != f {
                continue;
            }
            let count = fc
                .fiber_homs(*x2, x)
                .into_iter()
                .filter(|&gamma| t.compose(m, gamma) == Some(beta))
                .count();
            if count != 1 {
                return false;
            }
        }
    }
    true
}

/// Dual universal property for opcartesian morphisms.
pub fn is_opcartesian(fc: &FiberedCategory, m: u32) -> bool {
    let t = &fc.total;
    let f = fc.proj_mor(m);
    let x = t.src(m);
    let y = t.tgt(m);
    for y2 in fc.fiber_objects(fc.proj_obj(y)) {
        for &delta in t.hom(x, *y2) {
            if fc.proj_mor(delta) != f {
                continue;
            }
            let count = fc
                .fiber_homs(y, *y2)
                .into_iter()
                .filter(|&eta| t.compose(eta, m) == Some(delta))
                .count();
            if count != 1 {
                return false;
            }
        }
    }
    true
}

/// Flags of [`classify_projection`], each with a witness for failure.
#[derive(Debug, Clone, Default)]
pub struct ProjectionFlags {
    pub prefibration: bool,
    pub preopfibration: bool,
    pub fibration: bool,
    pub opfibration: bool,
    pub isofibration: bool,
    pub discrete: bool,
    pub failures: Vec<String>,
}

/// Classify a projection by exhaustive search: existence of (op)cartesian
/// lifts, closure of (op)cartesian maps under composition, isomorphism
/// lifting, and fiber discreteness.
pub fn classify_projection(fc: &FiberedCategory) -> ProjectionFlags {
    let mut flags = ProjectionFlags::default();
    let b = &fc.base;
    let t = &fc.total;
    flags.prefibration = true;
    flags.preopfibration = true;
    flags.isofibration = true;
    for f in b.morphisms() {
        for &y in fc.fiber_objects(b.tgt(f)) {
            let has = fc
                .morphisms_over(f)
                .into_iter()
                .any(|m| t.tgt(m) == y && is_cartesian(fc, m));
            if !has {
                flags.prefibration = false;
                flags.failures.push(format!(
                    "no cartesian lift of `{}` at `{}`",
                    b.morphism_id(f),
                    t.object_id(y)
                ));
            }
        }
        for &x in fc.fiber_objects(b.src(f)) {
            let has = fc
                .morphisms_over(f)
                .into_iter()
                .any(|m| t.src(m) == x && is_opcartesian(fc, m));
            if !has {
                flags.preopfibration = false;
                flags.failures.push(format!(
                    "no opcartesian lift of `{}` at `{}`",
                    b.morphism_id(f),
                    t.object_id(x)
                ));
            }
        }
        if b.is_iso(f) {
            for &y in fc.fiber_objects(b.tgt(f)) {
                let has = fc
                    .morphisms_over(f)
                    .into_iter()
                    .any(|m| t.tgt(m) == y && t.is_iso(m));
                if !has {
                    flags.isofibration = false;
                    flags.failures.push(format!(
                        "isomorphism `{}` has no iso lift at `{}`",
                        b.morphism_id(f),
                        t.object_id(y)
                    ));
                }
            }
        }
    }
    // closure under composition
    let cart: Vec<u32> = t.morphisms().filter(|&m| is_cartesian(fc, m)).collect();
    let opcart: Vec<u32> = t.morphisms().filter(|&m| is_opcartesian(fc, m)).collect();
    let mut cart_closed = true;
    for &f in &cart {
        for &g in &cart {
            if t.tgt(f) == t.src(g) {
                if let Some(gf) = t.compose(g, f) {
                    if !is_cartesian(fc, gf) {
                        cart_closed = false;
                        flags.failures.push(format!(
                            "composite of cartesian `{}` and `{}` is not cartesian",
                            t.morphism_id(g),
                            t.morphism_id(f)
                        ));
                    }
                }
            }
        }
    }
    let mut opcart_closed = true;
    for &f in &opcart {
        for &g in &opcart {
            if t.tgt(f) == t.src(g) {
                if let Some(gf) = t.compose(g, f) {
                    if !is_opcartesian(fc, gf) {
                        opcart_closed = false;
                        flags.failures.push(format!(
                            "composite of opcartesian `{}` and `{}` is not opcartesian",
                            t.morphism_id(g),
                            t.morphism_id(f)
                        ));
                    }
                }
            }
        }
    }
    flags.fibration = flags.prefibration && cart_closed;
    flags.opfibration = flags.preopfibration && opcart_closed;
    flags.discrete = fc
        .base
        .objects()
        .all(|c| {
            let fib = fc.fiber(c);
            fib.morphisms().all(|m| fib.is_identity(m))
        });
    flags
}

/// A strict category-valued functor: per-object fibers and per-morphism
/// transport functors. Covariant transports go `fiber(src f) -> fiber(tgt f)`;
/// for the contravariant construction pass transports in the other direction.
#[derive(Debug, Clone)]
pub struct CatFunctor {
    pub base: Arc<FiniteCategory>,
    pub fibers: Vec<Arc<FiniteCategory>>,
    pub transports: Vec<FunctorData>,
}

impl CatFunctor {
    /// Exhaustive strictness check for the covariant case: identities map to
    /// identity functors and transports compose on the nose.
    pub fn validate_strict_covariant(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let b = &self.base;
        for (i, tr) in self.transports.iter().enumerate() {
            if !tr.validate().is_empty() {
                bad.push(format!("transport at `{}` is not a functor", b.morphism_id(i as u32)));
            }
        }
        for c in b.objects() {
            let tr = &self.transports[b.identity(c) as usize];
            for o in self.fibers[c as usize].objects() {
                if tr.on_object(o) != o {
                    bad.push(format!("transport of identity at `{}` moves objects", b.object_id(c)));
                    break;
                }
            }
            for m in self.fibers[c as usize].morphisms() {
                if tr.on_morphism(m) != m {
                    bad.push(format!("transport of identity at `{}` moves morphisms", b.object_id(c)));
                    break;
                }
            }
        }
        for f in b.morphisms() {
            for g in b.hom_from(b.tgt(f)) {
                if let Some(gf) = b.compose(g, f) {
                    let lhs = &self.transports[gf as usize];
                    let rhs = self.transports[g as usize]
                        .compose(&self.transports[f as usize])
                        .expect("composable transports");
                    let agree = self.fibers[b.src(f) as usize]
                        .objects()
                        .all(|o| lhs.on_object(o) == rhs.on_object(o))
                        && self.fibers[b.src(f) as usize]
                            .morphisms()
                            .all(|m| lhs.on_morphism(m) == rhs.on_morphism(m));
                    if !agree {
                        bad.push(format!(
                            "transports do not compose strictly along `{}` ∘ `{}`",
                            b.morphism_id(g),
                            b.morphism_id(f)
                        ));
                    }
                }
            }
        }
        bad
    }

    /// A constant functor at the given category.
    pub fn constant(base: Arc<FiniteCategory>, m: Arc<FiniteCategory>) -> Self {
        let fibers = vec![m.clone(); base.object_count()];
        let transports = base.morphisms().map(|_| FunctorData::identity(m.clone())).collect();
        CatFunctor { base, fibers, transports }
    }
}

fn pair_obj(c: &str, x: &str) -> String {
    format!("({c}|{x})")
}

fn pair_mor(f: &str, a: &str) -> String {
    format!("({f}|{a})")
}

/// The covariant Grothendieck construction: objects are pairs `(c, X)`,
/// morphisms `(f, α: E(f)X -> X')`, with the canonical opcartesian cleavage
/// `(f, id)` installed.
pub fn grothendieck_op(e: &CatFunctor) -> Result<FiberedCategory> {
    let bad = e.validate_strict_covariant();
    if !bad.is_empty() {
        return Err(Error::Precondition(format!("functor not strict: {}", bad[0])));
    }
    let b = &e.base;
    let mut bld = crate::fincat::CategoryBuilder::new();
    for c in b.objects() {
        for x in e.fibers[c as usize].objects() {
            bld.object(&pair_obj(b.object_id(c), e.fibers[c as usize].object_id(x)))?;
        }
    }
    // morphisms (f: c -> c', α: E(f)X -> X')
    struct MRec {
        f: u32,
        alpha: u32,
        src_c: u32,
        src_x: u32,
        tgt_c: u32,
        tgt_x: u32,
        id: String,
    }
    let mut recs = Vec::new();
    for f in b.morphisms() {
        let (c, c2) = (b.src(f), b.tgt(f));
        let tr = &e.transports[f as usize];
        let fib2 = &e.fibers[c2 as usize];
        for x in e.fibers[c as usize].objects() {
            let ex = tr.on_object(x);
            for x2 in fib2.objects() {
                for &alpha in fib2.hom(ex, x2) {
                    let id = pair_mor(b.morphism_id(f), fib2.morphism_id(alpha));
                    // include the object part in the id only when ambiguous:
                    // (f, α) determines src X only through E(f)X = src α, which
                    // may have several preimages, so disambiguate with X.
                    let id = format!("{}@{}", id, e.fibers[c as usize].object_id(x));
                    recs.push(MRec { f, alpha, src_c: c, src_x: x, tgt_c: c2, tgt_x: x2, id });
                }
            }
        }
    }
    for r in &recs {
        bld.morphism(
            &r.id,
            &pair_obj(b.object_id(r.src_c), e.fibers[r.src_c as usize].object_id(r.src_x)),
            &pair_obj(b.object_id(r.tgt_c), e.fibers[r.tgt_c as usize].object_id(r.tgt_x)),
        )?;
    }
    for c in b.objects() {
        let fib = &e.fibers[c as usize];
        for x in fib.objects() {
            let id = format!(
                "{}@{}",
                pair_mor(b.morphism_id(b.identity(c)), fib.morphism_id(fib.identity(x))),
                fib.object_id(x)
            );
            bld.object_identity_helper(&pair_obj(b.object_id(c), fib.object_id(x)), &id)?;
        }
    }
    // composition: (g, β) ∘ (f, α) = (g∘f, β ∘ E(g)(α)), grouped by the
    // middle object to stay near-linear in composable pairs
    let rec_index: HashMap<(u32, u32, u32), usize> = recs
        .iter()
        .enumerate()
        .map(|(i, r)| ((r.f, r.alpha, r.src_x), i))
        .collect();
    let mut by_src: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (j, r2) in recs.iter().enumerate() {
        by_src.entry((r2.src_c, r2.src_x)).or_default().push(j);
    }
    for (i, r1) in recs.iter().enumerate() {
        let Some(succ) = by_src.get(&(r1.tgt_c, r1.tgt_x)) else { continue };
        for &j in succ {
            let r2 = &recs[j];
            let Some(gf) = b.compose(r2.f, r1.f) else { continue };
            let trg = &e.transports[r2.f as usize];
            let galpha = trg.on_morphism(r1.alpha);
            let beta_galpha = e.fibers[r2.tgt_c as usize]
                .compose(r2.alpha, galpha)
                .expect("fiber composition");
            let k = rec_index
                .get(&(gf, beta_galpha, r1.src_x))
                .copied()
                .expect("composite record exists");
            bld.compose(&recs[j].id, &recs[i].id, &recs[k].id)?;
        }
    }
    let total = Arc::new(bld.finish()?);
    let mut object_map = vec![0u32; total.object_count()];
    for c in b.objects() {
        for x in e.fibers[c as usize].objects() {
            let o = total.object(&pair_obj(b.object_id(c), e.fibers[c as usize].object_id(x)))?;
            object_map[o as usize] = c;
        }
    }
    let mut morphism_map = vec![0u32; total.morphism_count()];
    for r in &recs {
        let m = total.morphism(&r.id)?;
        morphism_map[m as usize] = r.f;
    }
    let projection = FunctorData::new(total.clone(), b.clone(), object_map, morphism_map)?;
    // canonical opcartesian cleavage: (f, id_{E(f)X})
    let mut cleavage_opcart = HashMap::new();
    for f in b.morphisms() {
        let tr = &e.transports[f as usize];
        let fib2 = &e.fibers[b.tgt(f) as usize];
        for x in e.fibers[b.src(f) as usize].objects() {
            let ex = tr.on_object(x);
            let id = format!(
                "{}@{}",
                pair_mor(b.morphism_id(f), fib2.morphism_id(fib2.identity(ex))),
                e.fibers[b.src(f) as usize].object_id(x)
            );
            let m = total.morphism(&id)?;
            let xo = total.object(&pair_obj(
                b.object_id(b.src(f)),
                e.fibers[b.src(f) as usize].object_id(x),
            ))?;
            cleavage_opcart.insert((f, xo), m);
        }
    }
    FiberedCategory::new(total, b.clone(), projection, HashMap::new(), cleavage_opcart)
}

/// The contravariant Grothendieck construction: objects `(c, Y)`, morphisms
/// `(f, β: Y -> F(f)Y')` for `f: c -> c'`, with the canonical cartesian
/// cleavage `(f, id)` installed. `transports[f]` must go
/// `fiber(tgt f) -> fiber(src f)`.
pub fn grothendieck_fib(e: &CatFunctor) -> Result<FiberedCategory> {
    let b = &e.base;
    // strictness, contravariant version
    for c in b.objects() {
        let tr = &e.transports[b.identity(c) as usize];
        let ok = e.fibers[c as usize].objects().all(|o| tr.on_object(o) == o)
            && e.fibers[c as usize].morphisms().all(|m| tr.on_morphism(m) == m);
        if !ok {
            return Err(Error::Precondition(format!(
                "transport of identity at `{}` is not the identity",
                b.object_id(c)
            )));
        }
    }
    for f in b.morphisms() {
        for g in b.hom_from(b.tgt(f)) {
            if let Some(gf) = b.compose(g, f) {
                let lhs = &e.transports[gf as usize];
                let rhs = e.transports[f as usize]
                    .compose(&e.transports[g as usize])
                    .expect("composable transports");
                let fib = &e.fibers[b.tgt(g) as usize];
                let agree = fib.objects().all(|o| lhs.on_object(o) == rhs.on_object(o))
                    && fib.morphisms().all(|m| lhs.on_morphism(m) == rhs.on_morphism(m));
                if !agree {
                    return Err(Error::Precondition(format!(
                        "transports do not compose strictly along `{}` ∘ `{}`",
                        b.morphism_id(g),
                        b.morphism_id(f)
                    )));
                }
            }
        }
    }
    let mut bld = crate::fincat::CategoryBuilder::new();
    for c in b.objects() {
        for y in e.fibers[c as usize].objects() {
            bld.object(&pair_obj(b.object_id(c), e.fibers[c as usize].object_id(y)))?;
        }
    }
    struct MRec {
        f: u32,
        beta: u32,
        src_c: u32,
        src_y: u32,
        tgt_c: u32,
        tgt_y: u32,
        id: String,
    }
    let mut recs = Vec::new();
    for f in b.morphisms() {
        let (c, c2) = (b.src(f), b.tgt(f));
        let tr = &e.transports[f as usize]; // fiber(c2) -> fiber(c)
        let fib1 = &e.fibers[c as usize];
        for y2 in e.fibers[c2 as usize].objects() {
            let fy2 = tr.on_object(y2);
            for y in fib1.objects() {
                for &beta in fib1.hom(y, fy2) {
                    let id = format!(
                        "{}@{}",
                        pair_mor(b.morphism_id(f), fib1.morphism_id(beta)),
                        e.fibers[c2 as usize].object_id(y2)
                    );
                    recs.push(MRec { f, beta, src_c: c, src_y: y, tgt_c: c2, tgt_y: y2, id });
                }
            }
        }
    }
    for r in &recs {
        bld.morphism(
            &r.id,
            &pair_obj(b.object_id(r.src_c), e.fibers[r.src_c as usize].object_id(r.src_y)),
            &pair_obj(b.object_id(r.tgt_c), e.fibers[r.tgt_c as usize].object_id(r.tgt_y)),
        )?;
    }
    for c in b.objects() {
        let fib = &e.fibers[c as usize];
        for y in fib.objects() {
            let id = format!(
                "{}@{}",
                pair_mor(b.morphism_id(b.identity(c)), fib.morphism_id(fib.identity(y))),
                fib.object_id(y)
            );
            bld.object_identity_helper(&pair_obj(b.object_id(c), fib.object_id(y)), &id)?;
        }
    }
    // (g, β') ∘ (f, β) = (g∘f, F(f)(β') ∘ β)
    let rec_index: HashMap<(u32, u32, u32), usize> = recs
        .iter()
        .enumerate()
        .map(|(i, r)| ((r.f, r.beta, r.tgt_y), i))
        .collect();
    for (i, r1) in recs.iter().enumerate() {
        for (j, r2) in recs.iter().enumerate() {
            if r1.tgt_c != r2.src_c || r1.tgt_y != r2.src_y {
                continue;
            }
            let Some(gf) = b.compose(r2.f, r1.f) else { continue };
            let trf = &e.transports[r1.f as usize];
            let fbeta2 = trf.on_morphism(r2.beta);
            let comp = e.fibers[r1.src_c as usize]
                .compose(fbeta2, r1.beta)
                .expect("fiber composition");
            let k = rec_index
                .get(&(gf, comp, r2.tgt_y))
                .copied()
                .expect("composite record exists");
            bld.compose(&recs[j].id, &recs[i].id, &recs[k].id)?;
        }
    }
    let total = Arc::new(bld.finish()?);
    let mut object_map = vec![0u32; total.object_count()];
    for c in b.objects() {
        for y in e.fibers[c as usize].objects() {
            let o = total.object(&pair_obj(b.object_id(c), e.fibers[c as usize].object_id(y)))?;
            object_map[o as usize] = c;
        }
    }
    let mut morphism_map = vec![0u32; total.morphism_count()];
    for r in &recs {
        let m = total.morphism(&r.id)?;
        morphism_map[m as usize] = r.f;
    }
    let projection = FunctorData::new(total.clone(), b.clone(), object_map, morphism_map)?;
    let mut cleavage_cart = HashMap::new();
    for f in b.morphisms() {
        let tr = &e.transports[f as usize];
        let fib1 = &e.fibers[b.src(f) as usize];
        for y2 in e.fibers[b.tgt(f) as usize].objects() {
            let fy2 = tr.on_object(y2);
            let id = format!(
                "{}@{}",
                pair_mor(b.morphism_id(f), fib1.morphism_id(fib1.identity(fy2))),
                e.fibers[b.tgt(f) as usize].object_id(y2)
            );
            let m = total.morphism(&id)?;
            let yo = total.object(&pair_obj(
                b.object_id(b.tgt(f)),
                e.fibers[b.tgt(f) as usize].object_id(y2),
            ))?;
            cleavage_cart.insert((f, yo), m);
        }
    }
    FiberedCategory::new(total, b.clone(), projection, cleavage_cart, HashMap::new())
}

/// Semifibration validation over a factorization system on the base.
#[derive(Debug, Clone, Default)]
pub struct SemifibReport {
    /// missing cartesian lifts (left-class morphism, target fiber object)
    pub missing_cart: Vec<(String, String)>,
    /// missing opcartesian lifts (right-class morphism, source fiber object)
    pub missing_opcart: Vec<(String, String)>,
    /// total morphisms over an r-then-l composite with no triple factorization
    pub missing_triple: Vec<(String, String, String)>,
    pub isofibration: bool,
}

impl SemifibReport {
    pub fn ok(&self) -> bool {
        self.missing_cart.is_empty()
            && self.missing_opcart.is_empty()
            && self.missing_triple.is_empty()
    }
}

/// Check the three semifibration conditions over `(left, right)`:
/// cartesian lifts along the left class, opcartesian lifts along the right
/// class, and the triple factorization `α = λ ∘ φ ∘ ρ` for every total
/// morphism over a right-then-left composite.
pub fn validate_semifibration(fc: &FiberedCategory, fs: &FactorizationSystem) -> SemifibReport {
    let mut report = SemifibReport::default();
    let b = &fc.base;
    let t = &fc.total;
    for &l in &fs.left.members {
        for &y in fc.fiber_objects(b.tgt(l)) {
            if fc.cart_lift(l, y).is_none() {
                report
                    .missing_cart
                    .push((b.morphism_id(l).to_string(), t.object_id(y).to_string()));
            }
        }
    }
    for &r in &fs.right.members {
        for &x in fc.fiber_objects(b.src(r)) {
            if fc.opcart_lift(r, x).is_none() {
                report
                    .missing_opcart
                    .push((b.morphism_id(r).to_string(), t.object_id(x).to_string()));
            }
        }
    }
    // triple factorization for every α over every r-then-l decomposition
    for alpha in t.morphisms() {
        let p_alpha = fc.proj_mor(alpha);
        for &r in &fs.right.members {
            if b.src(r) != b.src(p_alpha) {
                continue;
            }
            for &l in &fs.left.members {
                if b.src(l) != b.tgt(r) || b.tgt(l) != b.tgt(p_alpha) {
                    continue;
                }
                if b.compose(l, r) != Some(p_alpha) {
                    continue;
                }
                if !has_triple_factorization(fc, alpha, r, l) {
                    report.missing_triple.push((
                        t.morphism_id(alpha).to_string(),
                        b.morphism_id(r).to_string(),
                        b.morphism_id(l).to_string(),
                    ));
                }
            }
        }
    }
    report.isofibration = classify_projection(fc).isofibration;
    report
}

fn has_triple_factorization(fc: &FiberedCategory, alpha: u32, r: u32, l: u32) -> bool {
    let t = &fc.total;
    let x = t.src(alpha);
    let y = t.tgt(alpha);
    // ρ: X -> X' opcartesian over r; λ: Y' -> Y cartesian over l; φ fiber
    for rho in fc.morphisms_over(r) {
        if t.src(rho) != x || !is_opcartesian(fc, rho) {
            continue;
        }
        for lam in fc.morphisms_over(l) {
            if t.tgt(lam) != y || !is_cartesian(fc, lam) {
                continue;
            }
            for phi in fc.fiber_homs(t.tgt(rho), t.src(lam)) {
                let inner = t.compose(phi, rho);
                let whole = inner.and_then(|i| t.compose(lam, i));
                if whole == Some(alpha) {
                    return true;
                }
            }
        }
    }
    false
}

/// A transition functor between two fibers, stored on shared ids.
#[derive(Debug, Clone)]
pub struct TransitionFunctor {
    /// source fiber object (total index) -> image (total index)
    pub on_obj: BTreeMap<u32, u32>,
    /// source fiber morphism (total index) -> image (total index)
    pub on_mor: BTreeMap<u32, u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Cartesian,
    Opcartesian,
}

/// Compute the transition functor along a base morphism: object part from
/// chosen lifts, morphism part from the universal property (found by
/// exhaustive search and required unique). Functoriality is validated.
pub fn transition_functor(
    fc: &FiberedCategory,
    f: u32,
    dir: Direction,
) -> Result<TransitionFunctor> {
    let t = &fc.total;
    let b = &fc.base;
    let mut on_obj = BTreeMap::new();
    let mut on_mor = BTreeMap::new();
    match dir {
        Direction::Cartesian => {
            let c2 = b.tgt(f);
            for &y in fc.fiber_objects(c2) {
                let lift = fc.cart_lift(f, y).ok_or_else(|| {
                    Error::MissingLimit(format!(
                        "no cartesian lift of `{}` at `{}`",
                        b.morphism_id(f),
                        t.object_id(y)
                    ))
                })?;
                on_obj.insert(y, t.src(lift));
            }
            for &y in fc.fiber_objects(c2) {
                for &y2 in fc.fiber_objects(c2) {
                    for mu in fc.fiber_homs(y, y2) {
                        let lift_y = fc.cart_lift(f, y).unwrap();
                        let lift_y2 = fc.cart_lift(f, y2).unwrap();
                        // γ: f*Y -> f*Y' with lift_{Y'} ∘ γ = μ ∘ lift_Y
                        let rhs = t.compose(mu, lift_y).expect("composable");
                        let mut cands: Vec<u32> = fc
                            .fiber_homs(t.src(lift_y), t.src(lift_y2))
                            .into_iter()
                            .filter(|&gamma| t.compose(lift_y2, gamma) == Some(rhs))
                            .collect();
                        if cands.len() != 1 {
                            return Err(Error::Structural(format!(
                                "universal factorization through the lift of `{}` at `{}` is not unique ({} found)",
                                b.morphism_id(f),
                                t.object_id(y2),
                                cands.len()
                            )));
                        }
                        on_mor.insert(mu, cands.pop().unwrap());
                    }
                }
            }
        }
        Direction::Opcartesian => {
            let c1 = b.src(f);
            for &x in fc.fiber_objects(c1) {
                let lift = fc.opcart_lift(f, x).ok_or_else(|| {
                    Error::MissingLimit(format!(
                        "no opcartesian lift of `{}` at `{}`",
                        b.morphism_id(f),
                        t.object_id(x)
                    ))
                })?;
                on_obj.insert(x, t.tgt(lift));
            }
            for &x in fc.fiber_objects(c1) {
                for &x2 in fc.fiber_objects(c1) {
                    for mu in fc.fiber_homs(x, x2) {
                        let lift_x = fc.opcart_lift(f, x).unwrap();
                        let lift_x2 = fc.opcart_lift(f, x2).unwrap();
                        let rhs = t.compose(lift_x2, mu).expect("composable");
                        let mut cands: Vec<u32> = fc
                            .fiber_homs(t.tgt(lift_x), t.tgt(lift_x2))
                            .into_iter()
                            .filter(|&eta| t.compose(eta, lift_x) == Some(rhs))
                            .collect();
                        if cands.len() != 1 {
                            return Err(Error::Structural(format!(
                                "universal factorization through the lift of `{}` at `{}` is not unique ({} found)",
                                b.morphism_id(f),
                                t.object_id(x),
                                cands.len()
                            )));
                        }
                        on_mor.insert(mu, cands.pop().unwrap());
                    }
                }
            }
        }
    }
    // functoriality on the fiber
    let c = match dir {
        Direction::Cartesian => b.tgt(f),
        Direction::Opcartesian => b.src(f),
    };
    for &x in fc.fiber_objects(c) {
        let idx = t.identity(x);
        if on_mor.get(&idx) != Some(&t.identity(on_obj[&x])) {
            return Err(Error::Structural("transition functor breaks identities".into()));
        }
    }
    for (&m1, &im1) in &on_mor {
        for (&m2, &im2) in &on_mor {
            if t.tgt(m1) == t.src(m2) {
                if let Some(m21) = t.compose(m2, m1) {
                    let want = on_mor[&m21];
                    if t.compose(im2, im1) != Some(want) {
                        return Err(Error::Structural(
                            "transition functor breaks composition".into(),
                        ));
                    }
                }
            }
        }
    }
    Ok(TransitionFunctor { on_obj, on_mor })
}

/// A mate square datum: the base square and the computed components.
#[derive(Debug, Clone)]
pub struct MateSquare {
    /// the base square, as (f, g, h, k) with h∘f = k∘g, f,k left, g,h right
    pub f: u32,
    pub g: u32,
    pub h: u32,
    pub k: u32,
    /// per fiber object Y over tgt(f), the fiber morphism
    /// `g_! f* Y -> k* h_! Y` (total index)
    pub components: BTreeMap<u32, u32>,
}

/// Compute the mate transformation `g_! f* -> k* h_!` of a mixed square by
/// triple-factorizing the composite `f*Y -> Y -> h_! Y` through the chosen
/// lifts of `g` and `k`. Naturality in `Y` is validated.
pub fn mate(fc: &FiberedCategory, f: u32, g: u32, h: u32, k: u32) -> Result<MateSquare> {
    let b = &fc.base;
    let t = &fc.total;
    if b.compose(h, f) != b.compose(k, g) || b.compose(h, f).is_none() {
        return Err(Error::Precondition("mate square does not commute".into()));
    }
    let y_obj = b.tgt(f);
    let mut components = BTreeMap::new();
    for &y in fc.fiber_objects(y_obj) {
        let lam_f = fc.cart_lift(f, y).ok_or_else(|| {
            Error::MissingLimit(format!("no cartesian lift of `{}`", b.morphism_id(f)))
        })?;
        let rho_h = fc.opcart_lift(h, y).ok_or_else(|| {
            Error::MissingLimit(format!("no opcartesian lift of `{}`", b.morphism_id(h)))
        })?;
        let sigma = t.compose(rho_h, lam_f).expect("composable");
        let fy = t.src(lam_f);
        let hy = t.tgt(rho_h);
        let rho_g = fc.opcart_lift(g, fy).ok_or_else(|| {
            Error::MissingLimit(format!("no opcartesian lift of `{}`", b.morphism_id(g)))
        })?;
        let lam_k = fc.cart_lift(k, hy).ok_or_else(|| {
            Error::MissingLimit(format!("no cartesian lift of `{}`", b.morphism_id(k)))
        })?;
        let mut cands: Vec<u32> = fc
            .fiber_homs(t.tgt(rho_g), t.src(lam_k))
            .into_iter()
            .filter(|&phi| {
                t.compose(phi, rho_g)
                    .and_then(|i| t.compose(lam_k, i))
                    == Some(sigma)
            })
            .collect();
        cands.sort_by(|&a, &b2| t.morphism_id(a).cmp(t.morphism_id(b2)));
        match cands.len() {
            0 => {
                return Err(Error::MissingLimit(format!(
                    "no triple factorization for the mate at `{}` (semifibration violation)",
                    t.object_id(y)
                )))
            }
            1 => {
                components.insert(y, cands[0]);
            }
            _ => {
                return Err(Error::Structural(format!(
                    "mate component at `{}` not unique",
                    t.object_id(y)
                )))
            }
        }
    }
    // naturality: for μ: Y -> Y' in the fiber, k*h_!(μ) ∘ φ_Y = φ_{Y'} ∘ g_!f*(μ)
    let f_star = transition_functor(fc, f, Direction::Cartesian)?;
    let g_bang = transition_functor(fc, g, Direction::Opcartesian)?;
    let h_bang = transition_functor(fc, h, Direction::Opcartesian)?;
    let k_star = transition_functor(fc, k, Direction::Cartesian)?;
    for &y in fc.fiber_objects(y_obj) {
        for &y2 in fc.fiber_objects(y_obj) {
            for mu in fc.fiber_homs(y, y2) {
                let top = g_bang.on_mor[&f_star.on_mor[&mu]];
                let bot = k_star.on_mor[&h_bang.on_mor[&mu]];
                let lhs = t.compose(components[&y2], top);
                let rhs = t.compose(bot, components[&y]);
                if lhs != rhs || lhs.is_none() {
                    return Err(Error::Structural(format!(
                        "mate transformation not natural at `{}`",
                        t.morphism_id(mu)
                    )));
                }
            }
        }
    }
    Ok(MateSquare { f, g, h, k, components })
}

/// Install least-id (op)cartesian cleavages wherever lifts exist.
pub fn synthesize_cleavages(fc: &FiberedCategory) -> FiberedCategory {
    let mut cart = fc.cleavage_cart.clone();
    let mut opcart = fc.cleavage_opcart.clone();
    for f in fc.base.morphisms() {
        for &y in fc.fiber_objects(fc.base.tgt(f)) {
            if !cart.contains_key(&(f, y)) {
                if let Some(m) = fc.cart_lift(f, y) {
                    cart.insert((f, y), m);
                }
            }
        }
        for &x in fc.fiber_objects(fc.base.src(f)) {
            if !opcart.contains_key(&(f, x)) {
                if let Some(m) = fc.opcart_lift(f, x) {
                    opcart.insert((f, x), m);
                }
            }
        }
    }
    FiberedCategory::new(
        fc.total.clone(),
        fc.base.clone(),
        fc.projection.clone(),
        cart,
        opcart,
    )
    .expect("cleavage synthesis preserves well-formedness")
}

/// Pull a fibered category back along a functor into its base. Total objects
/// are pairs `(d, e)` with `F(d) = p(e)`; cleavage entries are inherited.
pub fn pullback_fibration(fc: &FiberedCategory, f: &FunctorData) -> Result<FiberedCategory> {
    let d_cat = &f.source;
    let t = &fc.total;
    let mut bld = crate::fincat::CategoryBuilder::new();
    let mut objs = Vec::new();
    for d in d_cat.objects() {
        for &e in fc.fiber_objects(f.on_object(d)) {
            let id = pair_obj(d_cat.object_id(d), t.object_id(e));
            bld.object(&id)?;
            objs.push((d, e));
        }
    }
    let mut mors = Vec::new();
    for phi in d_cat.morphisms() {
        let bf = f.on_morphism(phi);
        for psi in fc.morphisms_over(bf) {
            let id = pair_mor(d_cat.morphism_id(phi), t.morphism_id(psi));
            bld.morphism(
                &id,
                &pair_obj(d_cat.object_id(d_cat.src(phi)), t.object_id(t.src(psi))),
                &pair_obj(d_cat.object_id(d_cat.tgt(phi)), t.object_id(t.tgt(psi))),
            )?;
            mors.push((phi, psi, id));
        }
    }
    for (d, e) in &objs {
        let id = pair_mor(
            d_cat.morphism_id(d_cat.identity(*d)),
            t.morphism_id(t.identity(*e)),
        );
        bld.object_identity_helper(&pair_obj(d_cat.object_id(*d), t.object_id(*e)), &id)?;
    }
    for (phi1, psi1, id1) in &mors {
        for (phi2, psi2, id2) in &mors {
            if d_cat.tgt(*phi1) != d_cat.src(*phi2) || t.tgt(*psi1) != t.src(*psi2) {
                continue;
            }
            let (Some(phi), Some(psi)) = (d_cat.compose(*phi2, *phi1), t.compose(*psi2, *psi1))
            else {
                continue;
            };
            let id = pair_mor(d_cat.morphism_id(phi), t.morphism_id(psi));
            bld.compose(id2, id1, &id)?;
        }
    }
    let total2 = Arc::new(bld.finish()?);
    let mut object_map = vec![0u32; total2.object_count()];
    for (d, e) in &objs {
        let o = total2.object(&pair_obj(d_cat.object_id(*d), t.object_id(*e)))?;
        object_map[o as usize] = *d;
    }
    let mut morphism_map = vec![0u32; total2.morphism_count()];
    for (phi, _psi, id) in &mors {
        let m = total2.morphism(id)?;
        morphism_map[m as usize] = *phi;
    }
    let projection = FunctorData::new(total2.clone(), d_cat.clone(), object_map, morphism_map)?;
    let mut cart = HashMap::new();
    let mut opcart = HashMap::new();
    for phi in d_cat.morphisms() {
        let bf = f.on_morphism(phi);
        for (d, e) in &objs {
            if *d == d_cat.tgt(phi) {
                if let Some(&m) = fc.cleavage_cart.get(&(bf, *e)) {
                    let id = pair_mor(d_cat.morphism_id(phi), t.morphism_id(m));
                    if let Ok(m2) = total2.morphism(&id) {
                        let yo = total2.object(&pair_obj(d_cat.object_id(*d), t.object_id(*e)))?;
                        cart.insert((phi, yo), m2);
                    }
                }
            }
            if *d == d_cat.src(phi) {
                if let Some(&m) = fc.cleavage_opcart.get(&(bf, *e)) {
                    let id = pair_mor(d_cat.morphism_id(phi), t.morphism_id(m));
                    if let Ok(m2) = total2.morphism(&id) {
                        let xo = total2.object(&pair_obj(d_cat.object_id(*d), t.object_id(*e)))?;
                        opcart.insert((phi, xo), m2);
                    }
                }
            }
        }
    }
    FiberedCategory::new(total2, d_cat.clone(), projection, cart, opcart)
}

/// The constant (trivial) fibration `M × B -> B`, built as the Grothendieck
/// construction of the constant functor and equipped with both cleavages.
pub fn constant_fibration(base: Arc<FiniteCategory>, m: Arc<FiniteCategory>) -> Result<FiberedCategory> {
    let e = CatFunctor::constant(base, m);
    let fc = grothendieck_op(&e)?;
    Ok(synthesize_cleavages(&fc))
}

/// The disjoint-union projection `C -> C ⊔ D` style example is covered in
/// tests; this helper builds the full subcategory restriction of a fibered
/// category to part of its base (the base functor must be a full inclusion).
pub fn restrict_to_full_subbase(
    fc: &FiberedCategory,
    objects: &[u32],
) -> Result<FiberedCategory> {
    let sub = Arc::new(full_subcategory(&fc.base, objects)?);
    let object_map: Vec<u32> = sub
        .objects()
        .map(|o| fc.base.object(sub.object_id(o)).unwrap())
        .collect();
    let morphism_map: Vec<u32> = sub
        .morphisms()
        .map(|m| fc.base.morphism(sub.morphism_id(m)).unwrap())
        .collect();
    let incl = FunctorData::new(sub, fc.base.clone(), object_map, morphism_map)?;
    pullback_fibration(fc, &incl)
}

/// Convenience used by admissibility checks: fiber-class data along a
/// morphism class, as the wide subcategory fibration over it.
pub fn class_of(c: &FiniteCategory, ids: &[&str]) -> Result<MorphismClass> {
    MorphismClass::from_ids(c, ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{chain, discrete, span};
    use crate::reedy::span_raising;

    fn two_point_fiber() -> Arc<FiniteCategory> {
        Arc::new(discrete(&["p", "q"]))
    }

    fn arrow_fiber() -> Arc<FiniteCategory> {
        Arc::new(chain(1))
    }

    #[test]
    fn identity_projection_flags() {
        let b = Arc::new(chain(1));
        let fc = FiberedCategory::new(
            b.clone(),
            b.clone(),
            FunctorData::identity(b.clone()),
            HashMap::new(),
            HashMap::new(),
        )
        .unwrap();
        let flags = classify_projection(&fc);
        assert!(flags.prefibration && flags.fibration);
        assert!(flags.preopfibration && flags.opfibration);
        assert!(flags.isofibration);
        assert!(flags.discrete);
    }

    #[test]
    fn identities_are_cartesian_and_opcartesian() {
        let b = Arc::new(span());
        let fc = constant_fibration(b, arrow_fiber()).unwrap();
        for o in fc.total.objects() {
            let idm = fc.total.identity(o);
            assert!(is_cartesian(&fc, idm));
            assert!(is_opcartesian(&fc, idm));
        }
    }

    #[test]
    fn grothendieck_op_is_opfibration_and_canonical_lifts_opcartesian() {
        // E over [1] with E(0->1) a fold of discrete categories
        let b = Arc::new(chain(1));
        let f0 = two_point_fiber();
        let f1 = Arc::new(discrete(&["z"]));
        let fold = FunctorData::new(f0.clone(), f1.clone(), vec![0, 0], vec![0, 0]).unwrap();
        let e = CatFunctor {
            base: b.clone(),
            fibers: vec![f0.clone(), f1.clone()],
            transports: vec![
                FunctorData::identity(f0.clone()),
                FunctorData::identity(f1.clone()),
                fold,
            ],
        };
        // morphism order in chain(1): 0<=0, 0<=1, 1<=1 — transports indexed accordingly
        let e = CatFunctor {
            transports: {
                let mut tr = e.transports.clone();
                let m01 = b.morphism("0<=1").unwrap() as usize;
                let id0 = b.identity(b.object("0").unwrap()) as usize;
                let id1 = b.identity(b.object("1").unwrap()) as usize;
                let mut v: Vec<FunctorData> = vec![tr[0].clone(); 3];
                v[id0] = FunctorData::identity(f0.clone());
                v[id1] = FunctorData::identity(f1.clone());
                v[m01] = tr.remove(2);
                v
            },
            ..e
        };
        let fc = grothendieck_op(&e).unwrap();
        let flags = classify_projection(&fc);
        assert!(flags.opfibration, "{:?}", flags.failures);
        for (&(_f, _x), &m) in &fc.cleavage_opcart {
            assert!(is_opcartesian(&fc, m));
        }
        // opcartesian lifts over 0<=1 are exactly the (f, id) morphisms
        let m01 = b.morphism("0<=1").unwrap();
        for m in fc.morphisms_over(m01) {
            assert!(is_opcartesian(&fc, m), "discrete fibers make all of these opcartesian");
        }
    }

    #[test]
    fn constant_fibration_is_bifibration_with_product_total() {
        let b = Arc::new(span());
        let m = arrow_fiber();
        let fc = constant_fibration(b.clone(), m.clone()).unwrap();
        assert_eq!(fc.total.object_count(), b.object_count() * m.object_count());
        assert_eq!(
            fc.total.morphism_count(),
            b.morphism_count() * m.morphism_count()
        );
        let flags = classify_projection(&fc);
        assert!(flags.fibration && flags.opfibration, "{:?}", flags.failures);
    }

    #[test]
    fn grothendieck_fib_is_fibration() {
        // contravariant functor over [1]: F(1) = two points, F(0) = arrow,
        // F(0<=1): F(1) -> F(0) picks endpoints
        let b = Arc::new(chain(1));
        let f0 = arrow_fiber();
        let f1 = two_point_fiber();
        let tr = FunctorData::new(
            f1.clone(),
            f0.clone(),
            vec![f0.object("0").unwrap(), f0.object("1").unwrap()],
            vec![
                f0.identity(f0.object("0").unwrap()),
                f0.identity(f0.object("1").unwrap()),
            ],
        )
        .unwrap();
        let m01 = b.morphism("0<=1").unwrap() as usize;
        let id0 = b.identity(b.object("0").unwrap()) as usize;
        let id1 = b.identity(b.object("1").unwrap()) as usize;
        let mut transports = vec![FunctorData::identity(f0.clone()); 3];
        transports[id0] = FunctorData::identity(f0.clone());
        transports[id1] = FunctorData::identity(f1.clone());
        transports[m01] = tr;
        let e = CatFunctor { base: b.clone(), fibers: vec![f0, f1], transports };
        let fc = grothendieck_fib(&e).unwrap();
        let flags = classify_projection(&fc);
        assert!(flags.fibration, "{:?}", flags.failures);
        for (&(_f, _y), &m) in &fc.cleavage_cart {
            assert!(is_cartesian(&fc, m));
        }
    }

    #[test]
    fn semifibration_validation_and_mutation() {
        let rs = span_raising();
        let fc = constant_fibration(rs.category.clone(), arrow_fiber()).unwrap();
        let fs = rs.factorization_system();
        let report = validate_semifibration(&fc, &fs);
        assert!(report.ok(), "{report:?}");
        // drop one opcartesian lift requirement by deleting a fiber object?
        // simpler mutation: restrict the cleavage and poison the search by
        // removing the morphisms over `l` from a copy is heavy; instead check
        // that a non-semifibration is caught: take the subcategory of the
        // total category missing the lifts over `l`.
        let keep: Vec<u32> = fc
            .total
            .morphisms()
            .filter(|&m| {
                let f = fc.proj_mor(m);
                fc.base.morphism_id(f) != "l"
            })
            .collect();
        // build a total category without morphisms over l: projection to the
        // full base now misses lifts over l
        let mut bld = crate::fincat::CategoryBuilder::new();
        for o in fc.total.objects() {
            bld.object(fc.total.object_id(o)).unwrap();
        }
        for &m in &keep {
            bld.morphism(
                fc.total.morphism_id(m),
                fc.total.object_id(fc.total.src(m)),
                fc.total.object_id(fc.total.tgt(m)),
            )
            .unwrap();
        }
        for o in fc.total.objects() {
            bld.identity(fc.total.object_id(o), fc.total.morphism_id(fc.total.identity(o)))
                .unwrap();
        }
        for &m1 in &keep {
            for &m2 in &keep {
                if fc.total.tgt(m1) == fc.total.src(m2) {
                    if let Some(h) = fc.total.compose(m2, m1) {
                        if keep.contains(&h) {
                            bld.compose(
                                fc.total.morphism_id(m2),
                                fc.total.morphism_id(m1),
                                fc.total.morphism_id(h),
                            )
                            .unwrap();
                        }
                    }
                }
            }
        }
        let total2 = Arc::new(bld.finish().unwrap());
        let object_map: Vec<u32> = total2
            .objects()
            .map(|o| fc.proj_obj(fc.total.object(total2.object_id(o)).unwrap()))
            .collect();
        let morphism_map: Vec<u32> = total2
            .morphisms()
            .map(|m| fc.proj_mor(fc.total.morphism(total2.morphism_id(m)).unwrap()))
            .collect();
        let proj = FunctorData::new(total2.clone(), fc.base.clone(), object_map, morphism_map)
            .unwrap();
        let broken =
            FiberedCategory::new(total2, fc.base.clone(), proj, HashMap::new(), HashMap::new())
                .unwrap();
        let report = validate_semifibration(&broken, &fs);
        assert!(!report.ok());
        assert!(report.missing_opcart.iter().any(|(f, _)| f == "l"));
    }

    #[test]
    fn transition_functor_on_constant_fibration_is_identity_like() {
        let b = Arc::new(chain(1));
        let m = arrow_fiber();
        let fc = constant_fibration(b.clone(), m.clone()).unwrap();
        let f = b.morphism("0<=1").unwrap();
        let tr = transition_functor(&fc, f, Direction::Opcartesian).unwrap();
        // fibers of a constant fibration share object ids up to the pair tag;
        // the transition functor must send (0|X) to (1|X)
        for (&x, &fx) in &tr.on_obj {
            let xid = fc.total.object_id(x);
            let fxid = fc.total.object_id(fx);
            assert_eq!(xid.replace("(0|", "(1|"), fxid);
        }
    }

    #[test]
    fn mate_components_are_identities_on_constant_fibration() {
        // base: commuting square of the factorization system of Δ-like [1]×[1]
        // simplest mixed square: f = k = id, g = h = id on chain(0) is trivial;
        // use the span-with-both-classes base: f,k lowering identities is not
        // allowed, so take the poset square category instead.
        let sq = Arc::new(
            crate::fincat::poset(
                &["x", "y", "z", "t"],
                &[("x", "y"), ("x", "z"), ("y", "t"), ("z", "t")],
            )
            .unwrap(),
        );
        let m = arrow_fiber();
        let fc = constant_fibration(sq.clone(), m.clone()).unwrap();
        let f = sq.morphism("x<=y").unwrap();
        let g = sq.morphism("x<=z").unwrap();
        let h = sq.morphism("y<=t").unwrap();
        let k = sq.morphism("z<=t").unwrap();
        let ms = mate(&fc, f, g, h, k).unwrap();
        for (_y, &phi) in &ms.components {
            assert!(fc.total.is_identity(phi), "constant fibration mates are identities");
        }
    }
}

// small extension trait used by the Grothendieck builders
trait BuilderExt {
    fn object_identity_helper(&mut self, obj: &str, mor: &str) -> Result<&mut Self>
    where
        Self: Sized;
}

impl BuilderExt for crate::fincat::CategoryBuilder {
    fn object_identity_helper(&mut self, obj: &str, mor: &str) -> Result<&mut Self> {
        self.identity(obj, mor)
    }
}
