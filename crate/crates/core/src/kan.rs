//! Adjoint constructions for sections: pushforward along an opfibration of
//! bases, Noether matching systems, right Kan extension along a closed
//! immersion, base change, and (co)limits of sections of a semifibration
//! computed through one side of the factorization system.
//!
//! All inductions run over Noether degrees of the relevant class
//! subcategory; limits of sections follow the matching-system tower, with
//! the structure maps along the other class pinned down by naturality of
//! the projections and certified by an exhaustive universal-property check.

use std::sync::Arc;

use crate::fib::{pullback_fibration, FiberedCategory};
use crate::fincat::{comma_under, FiniteCategory, FunctorData, MorphismClass};
use crate::reedy::{class_subcategory, noether_bound, ReedyStructure};
use crate::sect::backend::{FiberDiagram, FiberOps};
use crate::sect::{
    count_section_maps, enumerate_section_maps, enumerate_sections, Section, SectionMap,
    SectInstance,
};
use crate::{Error, Result};

/// A finite diagram of sections: a shape, one section per shape object and
/// one section map per shape morphism.
pub struct DiagramOfSections {
    pub shape: Arc<FiniteCategory>,
    pub sections: Vec<Section>,
    pub maps: Vec<SectionMap>,
}

impl DiagramOfSections {
    pub fn validate(&self, fc: &FiberedCategory) -> Vec<String> {
        let mut bad = Vec::new();
        for (i, s) in self.sections.iter().enumerate() {
            let b = s.validate(fc);
            if !b.is_empty() {
                bad.push(format!("section {i}: {}", b[0]));
            }
        }
        for m in self.shape.morphisms() {
            let s = &self.sections[self.shape.src(m) as usize];
            let t = &self.sections[self.shape.tgt(m) as usize];
            let b = self.maps[m as usize].validate(fc, s, t);
            if !b.is_empty() {
                bad.push(format!("map at `{}`: {}", self.shape.morphism_id(m), b[0]));
            }
        }
        // functoriality of the assignment
        for f in self.shape.morphisms() {
            for g in self.shape.hom_from(self.shape.tgt(f)) {
                if let Some(gf) = self.shape.compose(g, f) {
                    let n = self.sections[self.shape.src(f) as usize].values.len();
                    for x in 0..n {
                        let lhs = self.maps[gf as usize].components[x];
                        let rhs = fc.total.compose(
                            self.maps[g as usize].components[x],
                            self.maps[f as usize].components[x],
                        );
                        if rhs != Some(lhs) {
                            bad.push(format!(
                                "diagram does not compose at `{}` ∘ `{}`",
                                self.shape.morphism_id(g),
                                self.shape.morphism_id(f)
                            ));
                        }
                    }
                }
            }
        }
        bad
    }
}

/// The pullback of a section along a base functor, inside the pulled-back
/// fibered category (whose total ids are `(d|e)` pairs).
pub fn pullback_section(
    fc_d: &FiberedCategory,
    f_base: &FunctorData,
    fc: &FiberedCategory,
    s: &Section,
) -> Result<Section> {
    let d_cat = &f_base.source;
    let mut values = Vec::with_capacity(d_cat.object_count());
    for d in d_cat.objects() {
        let e = s.values[f_base.on_object(d) as usize];
        let id = format!("({}|{})", d_cat.object_id(d), fc.total.object_id(e));
        values.push(fc_d.total.object(&id)?);
    }
    let mut arrows = Vec::with_capacity(d_cat.morphism_count());
    for phi in d_cat.morphisms() {
        let psi = s.arrows[f_base.on_morphism(phi) as usize];
        let id = format!("({}|{})", d_cat.morphism_id(phi), fc.total.morphism_id(psi));
        arrows.push(fc_d.total.morphism(&id)?);
    }
    let out = Section { values, arrows };
    let bad = out.validate(fc_d);
    if !bad.is_empty() {
        return Err(Error::Structural(format!("pullback section invalid: {}", bad[0])));
    }
    Ok(out)
}

/// Push a section forward along an opfibration of bases:
/// `F_! T(c)` is the colimit of `T` over the strict fiber of the base
/// functor, with structure maps assembled from opcartesian transport.
pub fn pushforward_opfib<B: FiberOps>(
    inst: &SectInstance<B>,
    f_base: &FunctorData,
    fc_d: &FiberedCategory,
    t: &Section,
) -> Result<Section> {
    let fc = &inst.fc;
    let b = &fc.base;
    let d_cat = &f_base.source;
    // strict base fibers and their diagrams
    let mut diagrams = Vec::with_capacity(b.object_count());
    let mut fiber_objs: Vec<Vec<u32>> = Vec::with_capacity(b.object_count());
    for c in b.objects() {
        let objs: Vec<u32> = d_cat.objects().filter(|&d| f_base.on_object(d) == c).collect();
        let mut bld = crate::fincat::CategoryBuilder::new();
        for &d in &objs {
            bld.object(d_cat.object_id(d))?;
        }
        let kept: Vec<u32> = d_cat
            .morphisms()
            .filter(|&m| f_base.on_morphism(m) == b.identity(c))
            .collect();
        for &m in &kept {
            bld.morphism(
                d_cat.morphism_id(m),
                d_cat.object_id(d_cat.src(m)),
                d_cat.object_id(d_cat.tgt(m)),
            )?;
        }
        for &d in &objs {
            bld.identity(d_cat.object_id(d), d_cat.morphism_id(d_cat.identity(d)))?;
        }
        for &m1 in &kept {
            for &m2 in &kept {
                if d_cat.tgt(m1) == d_cat.src(m2) {
                    if let Some(h) = d_cat.compose(m2, m1) {
                        bld.compose(
                            d_cat.morphism_id(m2),
                            d_cat.morphism_id(m1),
                            d_cat.morphism_id(h),
                        )?;
                    }
                }
            }
        }
        let shape = Arc::new(bld.finish()?);
        // diagram values: the E-parts of T over the fiber
        let obs: Vec<B::Ob> = shape
            .objects()
            .map(|o| {
                let d = d_cat.object(shape.object_id(o)).unwrap();
                let pair = fc_d.total.object_id(t.values[d as usize]);
                let e_id = split_pair(pair).1;
                Ok(inst.backend.named_ob(fc.total.object(e_id)?))
            })
            .collect::<Result<_>>()?;
        let mors: Vec<B::Mor> = shape
            .morphisms()
            .map(|m| {
                let dm = d_cat.morphism(shape.morphism_id(m)).unwrap();
                let pair = fc_d.total.morphism_id(t.arrows[dm as usize]);
                let e_id = split_pair(pair).1;
                Ok(inst.backend.named_mor(fc.total.morphism(e_id)?))
            })
            .collect::<Result<_>>()?;
        diagrams.push(FiberDiagram { shape, obs, mors });
        fiber_objs.push(objs);
    }
    let transport = |h: u32, o: usize| -> Result<(usize, u32)> {
        let c = b.src(h);
        let d = fiber_objs[c as usize][o];
        // opcartesian lift of h in the base opfibration
        let mut lifts: Vec<u32> = d_cat
            .morphisms()
            .filter(|&m| {
                f_base.on_morphism(m) == h && d_cat.src(m) == d && {
                    // opcartesian in the base-over-base sense
                    base_opcartesian(f_base, m)
                }
            })
            .collect();
        lifts.sort_by(|&a, &c2| d_cat.morphism_id(a).cmp(d_cat.morphism_id(c2)));
        let lift = lifts
            .into_iter()
            .next()
            .ok_or_else(|| Error::Precondition("base functor is not an opfibration".into()))?;
        let d2 = d_cat.tgt(lift);
        let slot = fiber_objs[b.tgt(h) as usize]
            .iter()
            .position(|&e| e == d2)
            .expect("lift target lies in the fiber");
        // θ: the E-part of T at the lift
        let pair = fc_d.total.morphism_id(t.arrows[lift as usize]);
        let theta = fc.total.morphism(split_pair(pair).1)?;
        Ok((slot, theta))
    };
    let cs = crate::sect::generators::assemble_colimit_section(inst, diagrams, &transport)?;
    Ok(cs.section)
}

fn split_pair(id: &str) -> (&str, &str) {
    // "(left|right)" with balanced parentheses inside either side
    let inner = &id[1..id.len() - 1];
    let mut depth = 0usize;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '|' if depth == 0 => return (&inner[..i], &inner[i + 1..]),
            _ => {}
        }
    }
    panic!("malformed pair id `{id}`")
}

fn base_opcartesian(f: &FunctorData, m: u32) -> bool {
    // opcartesian for the base functor viewed as a projection with discrete
    // lifting: every parallel morphism with the same image factors uniquely
    // through m by a fiber morphism
    let d_cat = &f.source;
    let x = d_cat.src(m);
    let y = d_cat.tgt(m);
    for y2 in d_cat.objects() {
        if f.on_object(y2) != f.on_object(y) {
            continue;
        }
        for &delta in d_cat.hom(x, y2) {
            if f.on_morphism(delta) != f.on_morphism(m) {
                continue;
            }
            let count = d_cat
                .hom(y, y2)
                .iter()
                .filter(|&&eta| {
                    f.on_morphism(eta) == d_cat.identity(f.on_object(y))
                        && d_cat.compose(eta, m) == Some(delta)
                })
                .count();
            if count != 1 {
                return false;
            }
        }
    }
    true
}

/// The `n`-th matching system of a partial section over a Noether base:
/// for each object of degree `n`, the limit over its comma into the lower
/// part, with cone.
pub struct MatchingSystem<B: FiberOps> {
    pub level: u32,
    /// (object, matching object, cone legs) per degree-`n` object
    pub entries: Vec<(u32, B::Ob, Vec<B::Mor>)>,
}

pub fn matching_system<B: FiberOps>(
    inst: &SectInstance<B>,
    value: &dyn Fn(u32) -> Option<u32>,
    arrow: &dyn Fn(u32) -> Option<u32>,
    n: u32,
) -> Result<MatchingSystem<B>> {
    let fc = &inst.fc;
    let b = &fc.base;
    let nb = noether_bound(b).ok_or_else(|| {
        Error::Precondition("base category is not Noether".into())
    })?;
    let mut entries = Vec::new();
    for c in b.objects() {
        if nb.bound[c as usize] != n {
            continue;
        }
        let (ob, cone, _d) = comma_limit_at(inst, value, arrow, c)?;
        entries.push((c, ob, cone));
    }
    Ok(MatchingSystem { level: n, entries })
}

/// The limit over all non-identity morphisms out of `c` of the cartesian
/// restrictions of a partial section, with its cone and the diagram.
fn comma_limit_at<B: FiberOps>(
    inst: &SectInstance<B>,
    value: &dyn Fn(u32) -> Option<u32>,
    arrow: &dyn Fn(u32) -> Option<u32>,
    c: u32,
) -> Result<(B::Ob, Vec<B::Mor>, FiberDiagram<B>)> {
    let fc = &inst.fc;
    let b = &fc.base;
    let base_arc = b.clone();
    let (comma, proj) = comma_under(&base_arc, c)?;
    // drop the identity object
    let keep: Vec<u32> = comma
        .objects()
        .filter(|&o| {
            let f = b.morphism(comma.object_id(o)).expect("comma object id");
            !b.is_identity(f)
        })
        .collect();
    let sub = Arc::new(crate::fincat::full_subcategory(&comma, &keep)?);
    let mut obs = Vec::with_capacity(sub.object_count());
    let mut lam = Vec::with_capacity(sub.object_count());
    for o in sub.objects() {
        let g = b.morphism(sub.object_id(o))?;
        let y = b.tgt(g);
        let v = value(y).ok_or_else(|| {
            Error::Precondition(format!("section not defined at `{}`", b.object_id(y)))
        })?;
        let lift = fc.cart_lift(g, v).ok_or_else(|| {
            Error::MissingLimit(format!(
                "no cartesian lift of `{}` at `{}`",
                b.morphism_id(g),
                fc.total.object_id(v)
            ))
        })?;
        lam.push(lift);
        obs.push(inst.backend.named_ob(fc.total.src(lift)));
    }
    let mut mors = Vec::with_capacity(sub.morphism_count());
    for m in sub.morphisms() {
        let o1 = sub.src(m);
        let o2 = sub.tgt(m);
        let cm = comma.morphism(sub.morphism_id(m))?;
        let h = proj.on_morphism(cm);
        let sh = arrow(h).ok_or_else(|| {
            Error::Precondition(format!("section arrow missing at `{}`", b.morphism_id(h)))
        })?;
        let t = &fc.total;
        let delta = t.compose(sh, lam[o1 as usize]).expect("composable");
        let gamma = crate::sect::unique_fiber_map(
            fc,
            t.src(lam[o1 as usize]),
            t.src(lam[o2 as usize]),
            |p| t.compose(lam[o2 as usize], p) == Some(delta),
        )?;
        mors.push(inst.backend.named_mor(gamma));
    }
    let d = FiberDiagram { shape: sub, obs, mors };
    let (ob, cone) = inst.backend.limit(c, &d)?;
    Ok((ob, cone, d))
}

/// Report of [`ran_closed_immersion`]: the extension plus the certificate
/// that restricting along the immersion returns the input.
pub struct RanResult {
    pub section: Section,
    pub restriction_agrees: bool,
}

/// Right Kan extension of a section along a closed immersion of Noether
/// bases, by induction over degrees: image objects keep their values,
/// degree-zero outsiders take terminal objects, and higher outsiders take
/// the limit of their comma into the already-extended part.
pub fn ran_closed_immersion<B: FiberOps>(
    inst: &SectInstance<B>,
    f_base: &FunctorData,
    fc_d: &FiberedCategory,
    x: &Section,
) -> Result<RanResult> {
    let fc = &inst.fc;
    let b = &fc.base;
    let imm = crate::reedy::check_closed_immersion(f_base);
    if !imm.ok() {
        return Err(Error::Precondition(format!(
            "base functor is not a closed immersion: {imm:?}"
        )));
    }
    let nb = noether_bound(b)
        .ok_or_else(|| Error::Precondition("base category is not Noether".into()))?;
    let d_cat = &f_base.source;
    // preimage per image object
    let mut preimage = vec![None; b.object_count()];
    for d in d_cat.objects() {
        preimage[f_base.on_object(d) as usize] = Some(d);
    }
    let mut values: Vec<Option<u32>> = vec![None; b.object_count()];
    let mut arrows: Vec<Option<u32>> = vec![None; b.morphism_count()];
    // seed with the image of x
    for d in d_cat.objects() {
        let pair = fc_d.total.object_id(x.values[d as usize]);
        values[f_base.on_object(d) as usize] = Some(fc.total.object(split_pair(pair).1)?);
    }
    for m in d_cat.morphisms() {
        let pair = fc_d.total.morphism_id(x.arrows[m as usize]);
        arrows[f_base.on_morphism(m) as usize] = Some(fc.total.morphism(split_pair(pair).1)?);
    }
    // outside objects by increasing degree
    let mut outside: Vec<u32> = b
        .objects()
        .filter(|&c| preimage[c as usize].is_none())
        .collect();
    outside.sort_by_key(|&c| (nb.bound[c as usize], b.object_id(c).to_string()));
    for &c in &outside {
        for c2 in b.objects() {
            if c2 != c && nb.bound[c2 as usize] == nb.bound[c as usize] {
                for &m in b.hom(c, c2) {
                    if !b.is_identity(m) {
                        return Err(Error::Precondition(format!(
                            "non-identity morphism `{}` between equal-degree outsiders",
                            b.morphism_id(m)
                        )));
                    }
                }
            }
        }
        let value_fn = |y: u32| values[y as usize];
        let arrow_fn = |g: u32| arrows[g as usize];
        let (ob, cone, d) = comma_limit_at(inst, &value_fn, &arrow_fn, c)?;
        // realize as a named object
        let (named, legs) = realize_limit(inst, c, &d, &(ob, cone))?;
        values[c as usize] = Some(named);
        arrows[b.identity(c) as usize] = Some(fc.total.identity(named));
        // arrows out of c: cart lift composed with the cone leg
        for (slot, o) in d.shape.objects().enumerate() {
            let g = b.morphism(d.shape.object_id(o))?;
            let y = b.tgt(g);
            let v = values[y as usize].expect("lower value");
            let lift = fc.cart_lift(g, v).expect("lift exists");
            let arrow = fc
                .total
                .compose(lift, legs[slot])
                .ok_or_else(|| Error::Structural("arrow assembly failed".into()))?;
            arrows[g as usize] = Some(arrow);
        }
    }
    let section = Section {
        values: values.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| {
            Error::Structural("extension misses values".into())
        })?,
        arrows: arrows.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| {
            Error::Structural("extension misses arrows".into())
        })?,
    };
    let bad = section.validate(fc);
    if !bad.is_empty() {
        return Err(Error::Structural(format!("extension invalid: {}", bad[0])));
    }
    // F* Ran X must literally return x here, since image values are copied
    let mut agrees = true;
    for d in d_cat.objects() {
        let pair = fc_d.total.object_id(x.values[d as usize]);
        if section.values[f_base.on_object(d) as usize] != fc.total.object(split_pair(pair).1)? {
            agrees = false;
        }
    }
    Ok(RanResult { section, restriction_agrees: agrees })
}

/// Realize a limit as a named fiber object with named cone legs.
pub(crate) fn realize_limit<B: FiberOps>(
    inst: &SectInstance<B>,
    fiber: u32,
    d: &FiberDiagram<B>,
    lim: &(B::Ob, Vec<B::Mor>),
) -> Result<(u32, Vec<u32>)> {
    let backend = &inst.backend;
    if let Some(name) = backend.ob_name(&lim.0) {
        let legs = lim
            .1
            .iter()
            .map(|leg| {
                backend.as_total_mor(fiber, leg).ok_or_else(|| {
                    Error::Structural("cone leg is not a named fiber morphism".into())
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        return Ok((name, legs));
    }
    let mut candidates: Vec<u32> = inst.fc.fiber_objects(fiber).to_vec();
    candidates.sort_by(|&a, &b| inst.fc.total.object_id(a).cmp(inst.fc.total.object_id(b)));
    for cand in candidates {
        let cob = backend.named_ob(cand);
        for iso in backend.isos_between(fiber, &cob, &lim.0) {
            let mut named_legs = Vec::with_capacity(lim.1.len());
            let mut ok = true;
            for leg in &lim.1 {
                let composed = backend.compose(fiber, leg, &iso)?;
                match backend.as_total_mor(fiber, &composed) {
                    Some(m) => named_legs.push(m),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok((cand, named_legs));
            }
        }
    }
    Err(Error::MissingLimit(format!(
        "no fiber object over `{}` realizes the limit",
        inst.fc.base.object_id(fiber)
    )))
}

/// Base-change report at one object: for every section within budget, both
/// routes were compared componentwise.
#[derive(Debug, Clone)]
pub struct BaseChangeReport {
    pub sections_checked: usize,
    pub mismatches: Vec<String>,
}

/// Compare `π* F_*` with `F_{c,*} π'^*` on every section of the immersed
/// part, componentwise up to isomorphism (with literal equality on the
/// image part).
pub fn base_change_check<B: FiberOps>(
    inst: &SectInstance<B>,
    f_base: &FunctorData,
    fc_d: &FiberedCategory,
    c: u32,
    budget: usize,
) -> Result<BaseChangeReport>
where
    B: CommaLiftable,
{
    let fc = &inst.fc;
    let b = &fc.base;
    // left route: Ran along F, then restrict to the comma c \ C
    let sections = enumerate_sections(&fc_d.total_as_fibered(), budget)
        .or_else(|_| enumerate_sections_of(fc_d, budget))?;
    let base_arc = b.clone();
    let (comma_c, proj_c) = comma_under(&base_arc, c)?;
    // fibered category over the comma
    let fc_comma = Arc::new(pullback_fibration(fc, &proj_c)?);
    let comma_inst = inst.backend.lift_to_base(inst, &fc_comma, &comma_c)?;
    // immersion of comma categories: c \ D -> c \ C
    let d_cat = &f_base.source;
    let mut image_mor = vec![None; comma_c.morphism_count()];
    let _ = &mut image_mor;
    let mut comma_d_objs = Vec::new();
    for o in comma_c.objects() {
        let g = b.morphism(comma_c.object_id(o))?;
        let y = b.tgt(g);
        let in_image = d_cat.objects().any(|d| f_base.on_object(d) == y);
        if in_image {
            comma_d_objs.push(o);
        }
    }
    let comma_d = Arc::new(crate::fincat::full_subcategory(&comma_c, &comma_d_objs)?);
    let obj_map: Vec<u32> = comma_d
        .objects()
        .map(|o| comma_c.object(comma_d.object_id(o)).unwrap())
        .collect();
    let mor_map: Vec<u32> = comma_d
        .morphisms()
        .map(|m| comma_c.morphism(comma_d.morphism_id(m)).unwrap())
        .collect();
    let f_c = FunctorData::new(comma_d.clone(), comma_c.clone(), obj_map, mor_map)?;
    let fc_comma_d = Arc::new(pullback_fibration(&fc_comma, &f_c)?);
    let mut mismatches = Vec::new();
    let mut checked = 0usize;
    for x in &sections {
        let Ok(ran) = ran_closed_immersion(inst, f_base, fc_d, x) else {
            continue;
        };
        // left route values on the comma: Ran X at the comma targets
        // right route: ran inside the comma of the restricted section
        let restricted = restrict_to_comma(inst, &fc_comma, &fc_comma_d, &f_c, f_base, fc_d, x)?;
        let Ok(ran_c) =
            ran_closed_immersion(&comma_inst, &f_c, &fc_comma_d, &restricted)
        else {
            continue;
        };
        checked += 1;
        for o in comma_c.objects() {
            let g = b.morphism(comma_c.object_id(o))?;
            let left_val = ran.section.values[b.tgt(g) as usize];
            // right route value lives over the comma object; its underlying
            // total object is the E-part of the pair
            let pair = fc_comma.total.object_id(ran_c.section.values[o as usize]);
            let right_val = fc.total.object(split_pair(pair).1)?;
            if left_val == right_val {
                continue;
            }
            // accept an isomorphism in the fiber
            let iso_exists = fc
                .fiber_homs(left_val, right_val)
                .into_iter()
                .any(|m| fc.total.is_iso(m));
            if !iso_exists {
                mismatches.push(format!(
                    "at `{}`: `{}` vs `{}`",
                    comma_c.object_id(o),
                    fc.total.object_id(left_val),
                    fc.total.object_id(right_val)
                ));
            }
        }
    }
    Ok(BaseChangeReport { sections_checked: checked, mismatches })
}

fn enumerate_sections_of(fc_d: &FiberedCategory, budget: usize) -> Result<Vec<Section>> {
    enumerate_sections(fc_d, budget)
}

/// Restrict a section over the immersed base to the comma fibration.
fn restrict_to_comma<B: FiberOps>(
    _inst: &SectInstance<B>,
    fc_comma: &FiberedCategory,
    fc_comma_d: &FiberedCategory,
    f_c: &FunctorData,
    f_base: &FunctorData,
    fc_d: &FiberedCategory,
    x: &Section,
) -> Result<Section> {
    let comma_d = &f_c.source;
    let d_cat = &f_base.source;
    let mut values = Vec::with_capacity(comma_d.object_count());
    for o in comma_d.objects() {
        // comma object is a base morphism c -> F(d); recover d
        let g_id = comma_d.object_id(o);
        let g = f_base.target.morphism(g_id)?;
        let y = f_base.target.tgt(g);
        let d = d_cat
            .objects()
            .find(|&d| f_base.on_object(d) == y)
            .expect("image object");
        let pair = fc_d.total.object_id(x.values[d as usize]);
        let e_part = split_pair(pair).1;
        // the comma-fibration total object is ((comma obj)|e)
        let id = format!("({}|{})", g_id, e_part);
        let in_comma = fc_comma.total.object(&id)?;
        let idd = format!("({}|{})", g_id, fc_comma.total.object_id(in_comma));
        let _ = idd;
        values.push(fc_comma_d.total.object(&format!(
            "({}|{})",
            g_id,
            fc_comma.total.object_id(in_comma)
        ))?);
    }
    let mut arrows = Vec::with_capacity(comma_d.morphism_count());
    for m in comma_d.morphisms() {
        // carrier h: a morphism of the immersed base
        let cm_id = comma_d.morphism_id(m);
        // comma morphism ids are "g|h"
        let (g_id, h_id) = cm_id.rsplit_once('|').expect("comma morphism id");
        let h = f_base.target.morphism(h_id)?;
        let dm = d_cat
            .morphisms()
            .find(|&dm| f_base.on_morphism(dm) == h)
            .expect("image morphism");
        let pair = fc_d.total.morphism_id(x.arrows[dm as usize]);
        let e_part = split_pair(pair).1;
        let inner = format!("({}|{})", cm_id, e_part);
        let _ = (g_id, inner);
        // the comma-d-fibration morphism id is ((comma mor)|(comma-fibration mor))
        let comma_fib_mor = fc_comma.total.morphism(&format!("({}|{})", cm_id, e_part))?;
        arrows.push(fc_comma_d.total.morphism(&format!(
            "({}|{})",
            cm_id,
            fc_comma.total.morphism_id(comma_fib_mor)
        ))?);
    }
    Ok(Section { values, arrows })
}

/// Ability to transport a backend to a pulled-back base (comma categories).
/// The set backend re-concretizes through the pair ids; the search backend
/// transports the fiber model classes.
pub trait CommaLiftable: FiberOps + Sized {
    fn lift_to_base(
        &self,
        inst: &SectInstance<Self>,
        fc_new: &Arc<FiberedCategory>,
        new_base: &Arc<FiniteCategory>,
    ) -> Result<SectInstance<Self>>;
}

impl CommaLiftable for crate::sect::SetFibers {
    fn lift_to_base(
        &self,
        inst: &SectInstance<Self>,
        fc_new: &Arc<FiberedCategory>,
        new_base: &Arc<FiniteCategory>,
    ) -> Result<SectInstance<Self>> {
        let t = &fc_new.total;
        let mut obj_sets = Vec::with_capacity(t.object_count());
        for o in t.objects() {
            let e = split_pair(t.object_id(o)).1;
            let orig = inst.fc.total.object(e)?;
            obj_sets.push(self.obj_sets[orig as usize].clone());
        }
        let mut mor_fns = Vec::with_capacity(t.morphism_count());
        for m in t.morphisms() {
            let e = split_pair(t.morphism_id(m)).1;
            let orig = inst.fc.total.morphism(e)?;
            mor_fns.push(self.mor_fns[orig as usize].clone());
        }
        let backend = crate::sect::SetFibers::new(fc_new.clone(), obj_sets, mor_fns)?;
        // reuse the degrees of the new base through a direct structure
        let rs = Arc::new(ReedyStructure::new(
            new_base.clone(),
            MorphismClass::identities(new_base),
            MorphismClass::all(new_base),
            noether_bound(&crate::fincat::opposite(new_base))
                .map(|nb| nb.bound)
                .unwrap_or_else(|| vec![0; new_base.object_count()]),
        )?);
        Ok(SectInstance { fc: fc_new.clone(), rs, backend })
    }
}

impl CommaLiftable for crate::sect::SearchFibers {
    fn lift_to_base(
        &self,
        inst: &SectInstance<Self>,
        fc_new: &Arc<FiberedCategory>,
        new_base: &Arc<FiniteCategory>,
    ) -> Result<SectInstance<Self>> {
        let _ = inst;
        let mut models = Vec::with_capacity(new_base.object_count());
        for c in new_base.objects() {
            // the comma object projects to a base object; transport classes
            // through the pair renaming
            let g = inst.fc.base.morphism(new_base.object_id(c))?;
            let y = inst.fc.base.tgt(g);
            let fiber_new = fc_new.fiber(c).clone();
            let source = &self.models[y as usize];
            let cid = new_base.object_id(c).to_string();
            let idc = new_base.morphism_id(new_base.identity(c)).to_string();
            let transported = crate::model::transport_model_classes(
                source,
                fiber_new,
                |o| format!("({cid}|{o})"),
                |mor, _src| format!("({idc}|{mor})"),
            )?;
            models.push(transported);
        }
        let backend = crate::sect::SearchFibers::new(fc_new.clone(), models)?;
        let rs = Arc::new(ReedyStructure::new(
            new_base.clone(),
            MorphismClass::identities(new_base),
            MorphismClass::all(new_base),
            vec![0; new_base.object_count()],
        )?);
        Ok(SectInstance { fc: fc_new.clone(), rs, backend })
    }
}

trait FiberedExt {
    fn total_as_fibered(&self) -> &FiberedCategory;
}

impl FiberedExt for FiberedCategory {
    fn total_as_fibered(&self) -> &FiberedCategory {
        self
    }
}

/// Limits of a diagram of sections of a semifibration, computed through the
/// left class: values by the matching-system tower over the left-class
/// Noether degrees, right-class structure maps pinned by naturality of the
/// projections, the whole certified by an exhaustive universal-property
/// check against every section within the budget.
pub fn limits_of_sections<B: FiberOps>(
    inst: &SectInstance<B>,
    left: &MorphismClass,
    diag: &DiagramOfSections,
    budget: usize,
) -> Result<(Section, Vec<SectionMap>)> {
    build_sections_limit(inst, left, diag, budget, true)
}

/// Colimits of a diagram of sections, dual tower over the right class.
pub fn colimits_of_sections<B: FiberOps>(
    inst: &SectInstance<B>,
    right: &MorphismClass,
    diag: &DiagramOfSections,
    budget: usize,
) -> Result<(Section, Vec<SectionMap>)> {
    build_sections_limit(inst, right, diag, budget, false)
}

fn build_sections_limit<B: FiberOps>(
    inst: &SectInstance<B>,
    class: &MorphismClass,
    diag: &DiagramOfSections,
    budget: usize,
    limit: bool,
) -> Result<(Section, Vec<SectionMap>)> {
    let fc = &inst.fc;
    let b = &fc.base;
    let backend = &inst.backend;
    let bad = diag.validate(fc);
    if !bad.is_empty() {
        return Err(Error::Precondition(format!("diagram invalid: {}", bad[0])));
    }
    let sub = class_subcategory(b, class)?;
    let degrees = if limit {
        noether_bound(&sub)
    } else {
        noether_bound(&crate::fincat::opposite(&sub))
    }
    .ok_or_else(|| Error::Precondition("class subcategory is not Noether".into()))?;
    // synthetic one-sided Reedy structure carrying the class comma
    let rs_class = if limit {
        ReedyStructure::new(
            b.clone(),
            class.clone(),
            MorphismClass::identities(b),
            degrees.bound.clone(),
        )?
    } else {
        ReedyStructure::new(
            b.clone(),
            MorphismClass::identities(b),
            class.clone(),
            degrees.bound.clone(),
        )?
    };
    let mut order: Vec<u32> = b.objects().collect();
    order.sort_by_key(|&c| (degrees.bound[c as usize], b.object_id(c).to_string()));
    let n_i = diag.shape.object_count();
    let mut values: Vec<Option<u32>> = vec![None; b.object_count()];
    let mut arrows: Vec<Option<u32>> = vec![None; b.morphism_count()];
    let mut projections: Vec<Vec<Option<u32>>> = vec![vec![None; b.object_count()]; n_i];
    for &x in &order {
        let obs: Vec<B::Ob> = (0..n_i)
            .map(|i| backend.named_ob(diag.sections[i].values[x as usize]))
            .collect();
        let mors: Vec<B::Mor> = diag
            .shape
            .morphisms()
            .map(|m| backend.named_mor(diag.maps[m as usize].components[x as usize]))
            .collect();
        let index_diag = FiberDiagram { shape: diag.shape.clone(), obs, mors };
        let pointwise = if limit {
            backend.limit(x, &index_diag)?
        } else {
            backend.colimit(x, &index_diag)?
        };
        // the tower: combine the pointwise (co)limit with the partial
        // matching (latching) of the under-construction section
        let value_fn = |y: u32| values[y as usize];
        let arrow_fn = |g: u32| arrows[g as usize];
        enum Tower<B: FiberOps> {
            Plain,
            Square {
                to_pointwise: B::Mor,
                comma_legs: Vec<(u32, B::Mor)>,
                value: B::Ob,
            },
        }
        let tower: Tower<B>;
        if limit {
            let part = crate::sect::matching_data_rs(inst, &rs_class, &value_fn, &arrow_fn, x)?;
            if part.mat.object_count() == 0 {
                tower = Tower::Plain;
            } else {
                let mut mi = Vec::with_capacity(n_i);
                for i in 0..n_i {
                    let (vi, ai) = crate::sect::SectionView::total(&diag.sections[i]);
                    let _ = vi;
                    let v = |y: u32| Some(diag.sections[i].values[y as usize]);
                    mi.push(crate::sect::matching_data_rs(inst, &rs_class, &v, &ai, x)?);
                }
                let c_mors: Vec<B::Mor> = diag
                    .shape
                    .morphisms()
                    .map(|m| {
                        let (i, j) = (diag.shape.src(m) as usize, diag.shape.tgt(m) as usize);
                        let comp = |y: u32| Some(diag.maps[m as usize].components[y as usize]);
                        crate::sect::induced_matching_map(inst, &mi[i], &mi[j], x, &comp)
                    })
                    .collect::<Result<_>>()?;
                let c_diag = FiberDiagram {
                    shape: diag.shape.clone(),
                    obs: mi.iter().map(|m| m.object.clone()).collect(),
                    mors: c_mors,
                };
                let c_apex = backend.limit(x, &c_diag)?;
                // p1: pointwise -> C via the value-to-matching maps of the X_i
                let p1 = {
                    let legs: Vec<B::Mor> = (0..n_i)
                        .map(|i| {
                            let (_v, ai) = crate::sect::SectionView::total(&diag.sections[i]);
                            let vtm = crate::sect::value_to_matching(
                                inst,
                                &mi[i],
                                &ai,
                                diag.sections[i].values[x as usize],
                            )?;
                            backend.compose(x, &vtm, &pointwise.1[i])
                        })
                        .collect::<Result<_>>()?;
                    backend.limit_in(x, &c_diag, &c_apex, &pointwise.0, &legs)?
                };
                // p2: partial matching -> C via the lower projections
                let p2 = {
                    let legs: Vec<B::Mor> = (0..n_i)
                        .map(|i| {
                            let comp = |y: u32| projections[i][y as usize];
                            crate::sect::induced_matching_map(inst, &part, &mi[i], x, &comp)
                        })
                        .collect::<Result<_>>()?;
                    backend.limit_in(x, &c_diag, &c_apex, &part.object, &legs)?
                };
                let (vd, vc) = crate::sect::pullback_of(backend, x, &p1, &p2)?;
                let (to_pointwise, to_b) = crate::sect::pullback_legs(&vd, &vc);
                let comma_legs = part
                    .mat
                    .objects()
                    .map(|o| {
                        let g = b.morphism(part.mat.object_id(o))?;
                        let leg = backend.compose(x, &part.cone[o as usize], &to_b)?;
                        Ok((g, leg))
                    })
                    .collect::<Result<Vec<_>>>()?;
                tower = Tower::Square { to_pointwise, comma_legs, value: vc.0 };
            }
        } else {
            let part = crate::sect::latching_data_rs(inst, &rs_class, &value_fn, &arrow_fn, x)?;
            if part.lat.object_count() == 0 {
                tower = Tower::Plain;
            } else {
                let mut mi = Vec::with_capacity(n_i);
                for i in 0..n_i {
                    let (_vi, ai) = crate::sect::SectionView::total(&diag.sections[i]);
                    let v = |y: u32| Some(diag.sections[i].values[y as usize]);
                    mi.push(crate::sect::latching_data_rs(inst, &rs_class, &v, &ai, x)?);
                }
                let c_mors: Vec<B::Mor> = diag
                    .shape
                    .morphisms()
                    .map(|m| {
                        let (i, j) = (diag.shape.src(m) as usize, diag.shape.tgt(m) as usize);
                        let comp = |y: u32| Some(diag.maps[m as usize].components[y as usize]);
                        crate::sect::induced_latching_map(inst, &mi[i], &mi[j], x, &comp)
                    })
                    .collect::<Result<_>>()?;
                let c_diag = FiberDiagram {
                    shape: diag.shape.clone(),
                    obs: mi.iter().map(|m| m.object.clone()).collect(),
                    mors: c_mors,
                };
                let c_apex = backend.colimit(x, &c_diag)?;
                let p1 = {
                    let legs: Vec<B::Mor> = (0..n_i)
                        .map(|i| {
                            let (_v, ai) = crate::sect::SectionView::total(&diag.sections[i]);
                            let ltv = crate::sect::latching_to_value(
                                inst,
                                &mi[i],
                                &ai,
                                diag.sections[i].values[x as usize],
                            )?;
                            backend.compose(x, &pointwise.1[i], &ltv)
                        })
                        .collect::<Result<_>>()?;
                    backend.colimit_out(x, &c_diag, &c_apex, &pointwise.0, &legs)?
                };
                let p2 = {
                    let legs: Vec<B::Mor> = (0..n_i)
                        .map(|i| {
                            let comp = |y: u32| projections[i][y as usize];
                            crate::sect::induced_latching_map(inst, &mi[i], &part, x, &comp)
                        })
                        .collect::<Result<_>>()?;
                    backend.colimit_out(x, &c_diag, &c_apex, &part.object, &legs)?
                };
                let (vd, vc) = crate::sect::pushout_of(backend, x, &p1, &p2)?;
                let (from_pointwise, from_b) = crate::sect::pushout_legs(&vd, &vc);
                let comma_legs = part
                    .lat
                    .objects()
                    .map(|o| {
                        let g = b.morphism(part.lat.object_id(o))?;
                        let leg = backend.compose(x, &from_b, &part.cocone[o as usize])?;
                        Ok((g, leg))
                    })
                    .collect::<Result<Vec<_>>>()?;
                tower = Tower::Square { to_pointwise: from_pointwise, comma_legs, value: vc.0 };
            }
        }
        let (raw_value, to_pointwise, comma_legs) = match tower {
            Tower::Plain => (pointwise.0.clone(), backend.id_mor(&pointwise.0), Vec::new()),
            Tower::Square { to_pointwise, comma_legs, value } => (value, to_pointwise, comma_legs),
        };
        // realize as a named object with all legs nameable
        let (named, index_legs, named_comma_legs) = realize_tower_value(
            inst,
            x,
            &raw_value,
            &to_pointwise,
            &pointwise,
            &comma_legs,
            limit,
        )?;
        values[x as usize] = Some(named);
        arrows[b.identity(x) as usize] = Some(fc.total.identity(named));
        for i in 0..n_i {
            projections[i][x as usize] = Some(index_legs[i]);
        }
        for (g, leg) in named_comma_legs {
            let y = if limit { b.tgt(g) } else { b.src(g) };
            let v = values[y as usize].expect("lower value");
            if limit {
                let lift = fc.cart_lift(g, v).ok_or_else(|| {
                    Error::MissingLimit(format!("no cartesian lift of `{}`", b.morphism_id(g)))
                })?;
                arrows[g as usize] = Some(
                    fc.total
                        .compose(lift, leg)
                        .ok_or_else(|| Error::Structural("arrow assembly failed".into()))?,
                );
            } else {
                let lift = fc.opcart_lift(g, v).ok_or_else(|| {
                    Error::MissingLimit(format!("no opcartesian lift of `{}`", b.morphism_id(g)))
                })?;
                arrows[g as usize] = Some(
                    fc.total
                        .compose(leg, lift)
                        .ok_or_else(|| Error::Structural("arrow assembly failed".into()))?,
                );
            }
        }
    }
    // remaining arrows: pinned by naturality of the projections (taking the
    // least candidate; the certificate below rejects wrong assemblies)
    for f in b.morphisms() {
        if arrows[f as usize].is_some() {
            continue;
        }
        let (s, t) = (b.src(f), b.tgt(f));
        let sv = values[s as usize].unwrap();
        let tv = values[t as usize].unwrap();
        let mut cands: Vec<u32> = fc
            .morphisms_over(f)
            .into_iter()
            .filter(|&m| fc.total.src(m) == sv && fc.total.tgt(m) == tv)
            .filter(|&m| {
                (0..n_i).all(|i| {
                    let (ps, pt) = (
                        projections[i][s as usize].unwrap(),
                        projections[i][t as usize].unwrap(),
                    );
                    let (lhs, rhs) = if limit {
                        (
                            fc.total.compose(pt, m),
                            fc.total.compose(diag.sections[i].arrows[f as usize], ps),
                        )
                    } else {
                        (
                            fc.total.compose(m, ps),
                            fc.total.compose(pt, diag.sections[i].arrows[f as usize]),
                        )
                    };
                    lhs == rhs && lhs.is_some()
                })
            })
            .collect();
        cands.sort_by(|&a, &c| fc.total.morphism_id(a).cmp(fc.total.morphism_id(c)));
        let m = cands.into_iter().next().ok_or_else(|| {
            Error::MissingLimit(format!(
                "no structure arrow over `{}` is compatible with the projections",
                b.morphism_id(f)
            ))
        })?;
        arrows[f as usize] = Some(m);
    }
    let section = Section {
        values: values.into_iter().collect::<Option<Vec<_>>>().unwrap(),
        arrows: arrows.into_iter().collect::<Option<Vec<_>>>().unwrap(),
    };
    let bad = section.validate(fc);
    if !bad.is_empty() {
        return Err(Error::Structural(format!("(co)limit section invalid: {}", bad[0])));
    }
    let proj_maps: Vec<SectionMap> = (0..n_i)
        .map(|i| SectionMap {
            components: projections[i].iter().map(|c| c.unwrap()).collect(),
        })
        .collect();
    for (i, p) in proj_maps.iter().enumerate() {
        let bad = if limit {
            p.validate(fc, &section, &diag.sections[i])
        } else {
            p.validate(fc, &diag.sections[i], &section)
        };
        if !bad.is_empty() {
            return Err(Error::Structural(format!("projection {i} invalid: {}", bad[0])));
        }
    }
    certify_universal(inst, diag, &section, &proj_maps, budget, limit)?;
    Ok((section, proj_maps))
}

/// Realize a tower value as a named object, converting the index legs and
/// the class-comma legs to named morphisms.
fn realize_tower_value<B: FiberOps>(
    inst: &SectInstance<B>,
    x: u32,
    value: &B::Ob,
    to_pointwise: &B::Mor,
    pointwise: &(B::Ob, Vec<B::Mor>),
    comma_legs: &[(u32, B::Mor)],
    limit: bool,
) -> Result<(u32, Vec<u32>, Vec<(u32, u32)>)> {
    let backend = &inst.backend;
    let n_i = pointwise.1.len();
    let attempt = |iso: Option<&B::Mor>| -> Result<(Vec<u32>, Vec<(u32, u32)>)> {
        // compose a value-side leg with the iso when present
        let adjust = |leg: &B::Mor| -> Result<B::Mor> {
            match iso {
                None => Ok(leg.clone()),
                Some(i) => {
                    if limit {
                        backend.compose(x, leg, i)
                    } else {
                        backend.compose(x, i, leg)
                    }
                }
            }
        };
        let mut index_legs = Vec::with_capacity(n_i);
        for i in 0..n_i {
            let through = if limit {
                backend.compose(x, &pointwise.1[i], &adjust(to_pointwise)?)?
            } else {
                backend.compose(x, &adjust(to_pointwise)?, &pointwise.1[i])?
            };
            let named = backend.as_total_mor(x, &through).ok_or_else(|| {
                Error::Structural("index projection is not a named fiber morphism".into())
            })?;
            index_legs.push(named);
        }
        let mut named_comma = Vec::with_capacity(comma_legs.len());
        for (g, leg) in comma_legs {
            let named = backend.as_total_mor(x, &adjust(leg)?).ok_or_else(|| {
                Error::Structural("comma leg is not a named fiber morphism".into())
            })?;
            named_comma.push((*g, named));
        }
        Ok((index_legs, named_comma))
    };
    if let Some(name) = backend.ob_name(value) {
        let (index_legs, named_comma) = attempt(None)?;
        return Ok((name, index_legs, named_comma));
    }
    let mut candidates: Vec<u32> = inst.fc.fiber_objects(x).to_vec();
    candidates.sort_by(|&a, &b| inst.fc.total.object_id(a).cmp(inst.fc.total.object_id(b)));
    for cand in candidates {
        let cob = backend.named_ob(cand);
        let isos = if limit {
            backend.isos_between(x, &cob, value)
        } else {
            backend.isos_between(x, value, &cob)
        };
        for iso in isos {
            if let Ok((index_legs, named_comma)) = attempt(Some(&iso)) {
                return Ok((cand, index_legs, named_comma));
            }
        }
    }
    Err(Error::MissingLimit(format!(
        "no fiber object over `{}` realizes the sections (co)limit",
        inst.fc.base.object_id(x)
    )))
}

/// Exhaustive universal-property certificate for a constructed (co)limit of
/// sections, quantified over every section within the budget.
fn certify_universal<B: FiberOps>(
    inst: &SectInstance<B>,
    diag: &DiagramOfSections,
    apex: &Section,
    projections: &[SectionMap],
    budget: usize,
    limit: bool,
) -> Result<()> {
    let fc = &inst.fc;
    let tests = enumerate_sections(fc, budget)?;
    let n_i = diag.shape.object_count();
    for z in &tests {
        // all cones (cocones) from z over the diagram
        let mut per_index: Vec<Vec<SectionMap>> = Vec::with_capacity(n_i);
        for i in 0..n_i {
            let maps = if limit {
                enumerate_section_maps(fc, z, &diag.sections[i])
            } else {
                enumerate_section_maps(fc, &diag.sections[i], z)
            };
            per_index.push(maps);
        }
        // iterate compatible families
        let mut idx = vec![0usize; n_i];
        if per_index.iter().any(|v| v.is_empty()) {
            continue;
        }
        loop {
            let family: Vec<&SectionMap> = (0..n_i).map(|i| &per_index[i][idx[i]]).collect();
            let compatible = diag.shape.morphisms().all(|m| {
                let (i, j) = (diag.shape.src(m) as usize, diag.shape.tgt(m) as usize);
                (0..apex.values.len()).all(|x| {
                    if limit {
                        fc.total
                            .compose(diag.maps[m as usize].components[x], family[i].components[x])
                            == Some(family[j].components[x])
                    } else {
                        fc.total
                            .compose(family[j].components[x], diag.maps[m as usize].components[x])
                            == Some(family[i].components[x])
                    }
                })
            });
            if compatible {
                let factorings = if limit {
                    enumerate_section_maps(fc, z, apex)
                        .into_iter()
                        .filter(|phi| {
                            (0..n_i).all(|i| {
                                (0..apex.values.len()).all(|x| {
                                    fc.total.compose(
                                        projections[i].components[x],
                                        phi.components[x],
                                    ) == Some(family[i].components[x])
                                })
                            })
                        })
                        .count()
                } else {
                    enumerate_section_maps(fc, apex, z)
                        .into_iter()
                        .filter(|phi| {
                            (0..n_i).all(|i| {
                                (0..apex.values.len()).all(|x| {
                                    fc.total.compose(
                                        phi.components[x],
                                        projections[i].components[x],
                                    ) == Some(family[i].components[x])
                                })
                            })
                        })
                        .count()
                };
                if factorings != 1 {
                    return Err(Error::Structural(format!(
                        "universal property fails: a test cone factors {factorings} times"
                    )));
                }
            }
            // advance
            let mut k = 0;
            while k < n_i {
                idx[k] += 1;
                if idx[k] < per_index[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n_i {
                break;
            }
        }
        // the empty diagram: the apex must be terminal (initial)
        if n_i == 0 {
            let count = if limit {
                count_section_maps(fc, z, apex, false).0
            } else {
                count_section_maps(fc, apex, z, false).0
            };
            if count != 1 {
                return Err(Error::Structural(
                    "empty (co)limit is not terminal (initial)".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Right adjoint to restriction along a right-closed factorization functor,
/// computed through the left class: values from the left-class right Kan
/// extension, right-class arrows pinned by the adjunction counit and
/// certified by hom counting against every section within the budget.
pub struct RightAdjointResult {
    pub section: Section,
    pub certified_against: usize,
}

pub fn right_adjoint_sections<B: FiberOps + CommaLiftable>(
    inst: &SectInstance<B>,
    left: &MorphismClass,
    left_sub: &MorphismClass,
    f_base: &FunctorData,
    fc_d: &FiberedCategory,
    x: &Section,
    budget: usize,
) -> Result<RightAdjointResult> {
    let fc = &inst.fc;
    let b = &fc.base;
    let d_cat = &f_base.source;
    // right-closedness: each map c -> F(c') factors as left-then-F(right')
    for c in b.objects() {
        for d in d_cat.objects() {
            for &g in b.hom(c, f_base.on_object(d)) {
                let ok = b.objects().any(|mid| {
                    b.hom(c, mid).iter().any(|&l| {
                        left.contains(l)
                            && d_cat.objects().any(|d2| {
                                f_base.on_object(d2) == mid
                                    && d_cat.hom(d2, d).iter().any(|&r| {
                                        b.compose(f_base.on_morphism(r), l) == Some(g)
                                    })
                            })
                    })
                });
                if !ok {
                    return Err(Error::Precondition(format!(
                        "functor is not right-closed at `{}`",
                        b.morphism_id(g)
                    )));
                }
            }
        }
    }
    let _ = left_sub;
    // left parts: the wide subcategories on the left classes
    let left_cat = Arc::new(class_subcategory(b, left)?);
    // immersion of left parts
    let mut obj_map = Vec::with_capacity(d_cat.object_count());
    for d in d_cat.objects() {
        obj_map.push(left_cat.object(b.object_id(f_base.on_object(d)))?);
    }
    // build values by Ran over the left part: reuse ran_closed_immersion on
    // the left-restricted instance
    let left_incl = {
        let object_map: Vec<u32> = left_cat
            .objects()
            .map(|o| b.object(left_cat.object_id(o)).unwrap())
            .collect();
        let morphism_map: Vec<u32> = left_cat
            .morphisms()
            .map(|m| b.morphism(left_cat.morphism_id(m)).unwrap())
            .collect();
        FunctorData::new(left_cat.clone(), b.clone(), object_map, morphism_map)?
    };
    let fc_left = Arc::new(pullback_fibration(fc, &left_incl)?);
    let left_inst = inst.backend.lift_to_base(inst, &fc_left, &left_cat)?;
    // the immersed left part of the source
    let d_left_cat = Arc::new(class_subcategory(d_cat, &{
        let mut cls = MorphismClass::from_indices([]);
        for m in d_cat.morphisms() {
            if left.contains(f_base.on_morphism(m)) {
                cls.members.insert(m);
            }
        }
        cls
    })?);
    let f_left = {
        let object_map: Vec<u32> = d_left_cat
            .objects()
            .map(|o| {
                let d = d_cat.object(d_left_cat.object_id(o)).unwrap();
                left_cat.object(b.object_id(f_base.on_object(d))).unwrap()
            })
            .collect();
        let morphism_map: Vec<u32> = d_left_cat
            .morphisms()
            .map(|m| {
                let dm = d_cat.morphism(d_left_cat.morphism_id(m)).unwrap();
                left_cat
                    .morphism(b.morphism_id(f_base.on_morphism(dm)))
                    .unwrap()
            })
            .collect();
        FunctorData::new(d_left_cat.clone(), left_cat.clone(), object_map, morphism_map)?
    };
    let fc_d_left = Arc::new(pullback_fibration(&fc_left, &f_left)?);
    // restrict x to the left part of the source
    let x_left = {
        let mut values = Vec::with_capacity(d_left_cat.object_count());
        for o in d_left_cat.objects() {
            let d = d_cat.object(d_left_cat.object_id(o))?;
            let pair = fc_d.total.object_id(x.values[d as usize]);
            let e = split_pair(pair).1;
            let lc = left_cat.object(b.object_id(f_base.on_object(d)))?;
            values.push(
                fc_d_left
                    .total
                    .object(&format!("({}|({}|{}))", d_left_cat.object_id(o), left_cat.object_id(lc), e))?,
            );
        }
        let mut arrows = Vec::with_capacity(d_left_cat.morphism_count());
        for m in d_left_cat.morphisms() {
            let dm = d_cat.morphism(d_left_cat.morphism_id(m))?;
            let pair = fc_d.total.morphism_id(x.arrows[dm as usize]);
            let e = split_pair(pair).1;
            let lm = left_cat.morphism(b.morphism_id(f_base.on_morphism(dm)))?;
            arrows.push(fc_d_left.total.morphism(&format!(
                "({}|({}|{}))",
                d_left_cat.morphism_id(m),
                left_cat.morphism_id(lm),
                e
            ))?);
        }
        Section { values, arrows }
    };
    let ran_left = ran_closed_immersion(&left_inst, &f_left, &fc_d_left, &x_left)?;
    // transfer to a section of the full base: values through the pair ids
    let mut values = Vec::with_capacity(b.object_count());
    for c in b.objects() {
        let lc = left_cat.object(b.object_id(c))?;
        let pair = fc_left.total.object_id(ran_left.section.values[lc as usize]);
        values.push(fc.total.object(split_pair(pair).1)?);
    }
    let mut arrows: Vec<Option<u32>> = vec![None; b.morphism_count()];
    for m in left_cat.morphisms() {
        let bm = b.morphism(left_cat.morphism_id(m))?;
        let pair = fc_left.total.morphism_id(ran_left.section.arrows[m as usize]);
        arrows[bm as usize] = Some(fc.total.morphism(split_pair(pair).1)?);
    }
    // remaining arrows by search against the adjunction conditions: the
    // counit on image objects must reproduce x
    let candidates_for = |f: u32| -> Vec<u32> {
        let (s, t) = (b.src(f), b.tgt(f));
        fc.morphisms_over(f)
            .into_iter()
            .filter(|&m| fc.total.src(m) == values[s as usize] && fc.total.tgt(m) == values[t as usize])
            .collect()
    };
    // try candidate combinations (usually forced), certify by hom counting
    let unresolved: Vec<u32> = b
        .morphisms()
        .filter(|&f| arrows[f as usize].is_none())
        .collect();
    let mut choice_lists: Vec<Vec<u32>> = Vec::with_capacity(unresolved.len());
    for &f in &unresolved {
        let mut c = candidates_for(f);
        c.sort_by(|&a, &b2| fc.total.morphism_id(a).cmp(fc.total.morphism_id(b2)));
        if c.is_empty() {
            return Err(Error::MissingLimit(format!(
                "no structure arrow over `{}`",
                b.morphism_id(f)
            )));
        }
        choice_lists.push(c);
    }
    let tests = enumerate_sections(fc, budget)?;
    let mut idx = vec![0usize; unresolved.len()];
    loop {
        let mut trial = arrows.clone();
        for (k, &f) in unresolved.iter().enumerate() {
            trial[f as usize] = Some(choice_lists[k][idx[k]]);
        }
        let section = Section {
            values: values.clone(),
            arrows: trial.iter().map(|a| a.unwrap()).collect(),
        };
        if section.validate(fc).is_empty() {
            // adjunction certificate: hom(T, F_* X) = hom(F* T, X)
            let mut ok = true;
            for t_sec in &tests {
                let lhs = count_section_maps(fc, t_sec, &section, false).0;
                let pulled = pullback_section(fc_d, f_base, fc, t_sec)?;
                let rhs = count_section_maps(fc_d, &pulled, x, false).0;
                if lhs != rhs {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(RightAdjointResult { section, certified_against: tests.len() });
            }
        }
        // advance
        let mut k = 0;
        while k < unresolved.len() {
            idx[k] += 1;
            if idx[k] < choice_lists[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == unresolved.len() {
            break;
        }
        if unresolved.is_empty() {
            break;
        }
    }
    Err(Error::Structural(
        "no structure-arrow assignment satisfies the adjunction certificate".into(),
    ))
}
