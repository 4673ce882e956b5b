//! Explicit generating (trivial) cofibrations for bifibration instances:
//! the free section `i(X)` on a fiber object, its matching-category
//! companion `m(X)`, and the generator `m(B) ⊔_{m(A)} i(A) -> i(B)`
//! attached to a fiber map `A -> B`.

use std::sync::Arc;

use crate::fincat::functor_comma_over;
use crate::reedy::matching_category;
use crate::{Error, Result};

use super::backend::{FiberDiagram, FiberOps};
use super::{Section, SectionMap, SectInstance};

/// One fiberwise-colimit section: the realized (named) values, the named
/// cocone legs per base object, and the diagrams they came from.
pub struct ColimitSection<B: FiberOps> {
    pub section: Section,
    pub diagrams: Vec<FiberDiagram<B>>,
    /// per base object, the named total morphisms injecting each diagram
    /// object into the value
    pub legs: Vec<Vec<u32>>,
}

/// Realize a colimit as a named fiber object with named legs.
pub(crate) fn realize_colimit<B: FiberOps>(
    inst: &SectInstance<B>,
    fiber: u32,
    d: &FiberDiagram<B>,
) -> Result<(u32, Vec<u32>)> {
    let backend = &inst.backend;
    let colim = backend.colimit(fiber, d)?;
    // try to name the apex directly, else relabel through an isomorphic
    // named object
    if let Some(name) = backend.ob_name(&colim.0) {
        let legs = colim
            .1
            .iter()
            .map(|leg| {
                backend.as_total_mor(fiber, leg).ok_or_else(|| {
                    Error::Structural("colimit leg is not a named fiber morphism".into())
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        return Ok((name, legs));
    }
    // search the fiber for an object with an isomorphism to the colimit
    // that transports the cocone to named morphisms
    let mut candidates: Vec<u32> = inst.fc.fiber_objects(fiber).to_vec();
    candidates.sort_by(|&a, &b| inst.fc.total.object_id(a).cmp(inst.fc.total.object_id(b)));
    for cand in candidates {
        let cob = backend.named_ob(cand);
        for iso in backend.isos_between(fiber, &colim.0, &cob) {
            let mut named_legs = Vec::with_capacity(colim.1.len());
            let mut ok = true;
            for leg in &colim.1 {
                let composed = backend.compose(fiber, &iso, leg)?;
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
        "no fiber object over `{}` realizes the colimit",
        inst.fc.base.object_id(fiber)
    )))
}

/// Assemble a section whose value at each base object is a realized fiber
/// colimit, with arrows determined by a transport rule: for a base morphism
/// `h` and a source diagram slot, the rule provides the target slot and the
/// total morphism connecting the diagram objects over `h`.
pub(crate) fn assemble_colimit_section<B: FiberOps>(
    inst: &SectInstance<B>,
    diagrams: Vec<FiberDiagram<B>>,
    transport: &dyn Fn(u32, usize) -> Result<(usize, u32)>,
) -> Result<ColimitSection<B>> {
    let fc = &inst.fc;
    let b = &fc.base;
    let t = &fc.total;
    let mut values = vec![0u32; b.object_count()];
    let mut legs: Vec<Vec<u32>> = vec![Vec::new(); b.object_count()];
    for y in b.objects() {
        let (v, l) = realize_colimit(inst, y, &diagrams[y as usize])?;
        values[y as usize] = v;
        legs[y as usize] = l;
    }
    let mut arrows = vec![u32::MAX; b.morphism_count()];
    for h in b.morphisms() {
        let (y, y2) = (b.src(h), b.tgt(h));
        if b.is_identity(h) {
            arrows[h as usize] = t.identity(values[y as usize]);
            continue;
        }
        // required triangles: arrow ∘ inj_o = inj_{σ(o)} ∘ θ_o
        let mut requirements = Vec::new();
        for o in 0..diagrams[y as usize].obs.len() {
            let (slot, theta) = transport(h, o)?;
            let rhs = t
                .compose(legs[y2 as usize][slot], theta)
                .ok_or_else(|| Error::Structural("transport does not compose".into()))?;
            requirements.push((legs[y as usize][o], rhs));
        }
        let mut cands: Vec<u32> = fc
            .morphisms_over(h)
            .into_iter()
            .filter(|&m| {
                t.src(m) == values[y as usize]
                    && t.tgt(m) == values[y2 as usize]
                    && requirements.iter().all(|&(inj, rhs)| t.compose(m, inj) == Some(rhs))
            })
            .collect();
        cands.sort_by(|&a, &c| t.morphism_id(a).cmp(t.morphism_id(c)));
        let arrow = cands.into_iter().next().ok_or_else(|| {
            Error::MissingLimit(format!(
                "no arrow over `{}` is compatible with the colimit legs",
                b.morphism_id(h)
            ))
        })?;
        arrows[h as usize] = arrow;
    }
    let section = Section { values, arrows };
    let bad = section.validate(fc);
    if !bad.is_empty() {
        return Err(Error::Structural(format!(
            "assembled colimit section invalid: {}",
            bad[0]
        )));
    }
    Ok(ColimitSection { section, diagrams, legs })
}

/// Build the free section `i(X)`: its value at `y` is the coproduct of
/// `f_! X` over all `f: x -> y`, with arrows transporting components along
/// postcomposition.
fn i_section<B: FiberOps>(
    inst: &SectInstance<B>,
    x: u32,
    x_obj: u32,
) -> Result<(ColimitSection<B>, Vec<Vec<u32>>)> {
    let fc = &inst.fc;
    let b = &fc.base;
    // per base object y: the discrete diagram over hom(x, y), plus the list
    // of base morphisms indexing the slots
    let mut diagrams = Vec::with_capacity(b.object_count());
    let mut slots: Vec<Vec<u32>> = Vec::with_capacity(b.object_count());
    for y in b.objects() {
        let fs: Vec<u32> = b.hom(x, y).to_vec();
        let obs: Vec<B::Ob> = fs
            .iter()
            .map(|&f| {
                let lift = fc.opcart_lift(f, x_obj).ok_or_else(|| {
                    Error::MissingLimit(format!(
                        "no opcartesian lift of `{}`",
                        b.morphism_id(f)
                    ))
                })?;
                Ok(inst.backend.named_ob(fc.total.tgt(lift)))
            })
            .collect::<Result<_>>()?;
        let d = super::backend::discrete_diagram(&inst.backend, obs);
        diagrams.push(d);
        slots.push(fs);
    }
    let slots2 = slots.clone();
    let transport = move |h: u32, o: usize| -> Result<(usize, u32)> {
        let y = b.src(h);
        let f = slots2[y as usize][o];
        let hf = b.compose(h, f).ok_or_else(|| Error::Structural("hom transport".into()))?;
        let slot = slots2[b.tgt(h) as usize]
            .iter()
            .position(|&g| g == hf)
            .expect("postcomposite is a hom element");
        let v = {
            let lift = fc.opcart_lift(f, x_obj).expect("lift exists");
            fc.total.tgt(lift)
        };
        let theta = fc.opcart_lift(h, v).ok_or_else(|| {
            Error::MissingLimit(format!("no opcartesian lift of `{}`", b.morphism_id(h)))
        })?;
        // strict cleavage: the transported object must be the (h∘f) pushforward
        let expect = {
            let lift = fc.opcart_lift(hf, x_obj).expect("lift exists");
            fc.total.tgt(lift)
        };
        if fc.total.tgt(theta) != expect {
            return Err(Error::Structural(format!(
                "cleavage not strict along `{}` ∘ `{}`",
                b.morphism_id(h),
                b.morphism_id(f)
            )));
        }
        Ok((slot, theta))
    };
    let cs = assemble_colimit_section(inst, diagrams, &transport)?;
    Ok((cs, slots))
}

/// Build `m(X)`: the value at `y` is the colimit over the comma category
/// `Mat(x) / y` of the pushforwards `(g ∘ k)_! X`.
fn m_section<B: FiberOps>(
    inst: &SectInstance<B>,
    x: u32,
    x_obj: u32,
) -> Result<(ColimitSection<B>, Vec<Vec<(u32, u32)>>)> {
    let fc = &inst.fc;
    let b = &fc.base;
    let (mat, incl) = matching_category(&inst.rs, x)?;
    let mut diagrams: Vec<FiberDiagram<B>> = Vec::with_capacity(b.object_count());
    let mut slots: Vec<Vec<(u32, u32)>> = Vec::with_capacity(b.object_count());
    for y in b.objects() {
        let (comma, pairs) = functor_comma_over(&incl, y)?;
        // diagram objects: (g∘k)_! X for (k-index d, g)
        let mut obs = Vec::with_capacity(pairs.len());
        let mut base_pairs = Vec::with_capacity(pairs.len());
        for &(d, g) in &pairs {
            let k = b.morphism(mat.object_id(d))?;
            let gk = b.compose(g, k).expect("composable");
            let lift = fc
                .opcart_lift(gk, x_obj)
                .ok_or_else(|| Error::MissingLimit("no opcartesian lift".into()))?;
            obs.push(inst.backend.named_ob(fc.total.tgt(lift)));
            base_pairs.push((k, g));
        }
        // diagram arrows via the unique comparison of pushforwards (identity
        // for strict cleavages: the base composites agree)
        let mut mors = Vec::with_capacity(comma.morphism_count());
        for m in comma.morphisms() {
            let o1 = comma.src(m) as usize;
            let o2 = comma.tgt(m) as usize;
            let (k1, g1) = base_pairs[o1];
            let (k2, g2) = base_pairs[o2];
            let c1 = b.compose(g1, k1).unwrap();
            let c2 = b.compose(g2, k2).unwrap();
            let l1 = fc.opcart_lift(c1, x_obj).unwrap();
            let l2 = fc.opcart_lift(c2, x_obj).unwrap();
            let t = &fc.total;
            // unique η with η ∘ lift1 = lift2 (both are over the same base map)
            let mut cands: Vec<u32> = fc
                .fiber_homs(t.tgt(l1), t.tgt(l2))
                .into_iter()
                .filter(|&eta| t.compose(eta, l1) == Some(l2))
                .collect();
            cands.sort_by(|&p, &q| t.morphism_id(p).cmp(t.morphism_id(q)));
            let eta = cands.into_iter().next().ok_or_else(|| {
                Error::Structural("pushforward comparison missing".into())
            })?;
            mors.push(inst.backend.named_mor(eta));
        }
        diagrams.push(FiberDiagram { shape: comma, obs, mors });
        slots.push(base_pairs);
    }
    let slots2 = slots.clone();
    let transport = move |h: u32, o: usize| -> Result<(usize, u32)> {
        let y = b.src(h);
        let (k, g) = slots2[y as usize][o];
        let hg = b.compose(h, g).ok_or_else(|| Error::Structural("hom transport".into()))?;
        let slot = slots2[b.tgt(h) as usize]
            .iter()
            .position(|&(k2, g2)| k2 == k && g2 == hg)
            .expect("postcomposite pair is a comma object");
        let gk = b.compose(g, k).unwrap();
        let v = fc.total.tgt(fc.opcart_lift(gk, x_obj).unwrap());
        let theta = fc.opcart_lift(h, v).ok_or_else(|| {
            Error::MissingLimit(format!("no opcartesian lift of `{}`", b.morphism_id(h)))
        })?;
        let hgk = b.compose(hg, k).unwrap();
        let expect = fc.total.tgt(fc.opcart_lift(hgk, x_obj).unwrap());
        if fc.total.tgt(theta) != expect {
            return Err(Error::Structural("cleavage not strict".into()));
        }
        Ok((slot, theta))
    };
    let cs = assemble_colimit_section(inst, diagrams, &transport)?;
    Ok((cs, slots))
}

/// The generator datum produced by [`quillen_generators`].
pub struct GeneratorData<B: FiberOps> {
    pub i_a: Section,
    pub i_b: Section,
    pub m_a: Section,
    pub m_b: Section,
    /// `i(g): i(A) -> i(B)` and `m(g): m(A) -> m(B)`
    pub i_g: SectionMap,
    pub m_g: SectionMap,
    /// the comparisons `m(X) -> i(X)`
    pub m_to_i_a: SectionMap,
    pub m_to_i_b: SectionMap,
    /// the pushout `m(B) ⊔_{m(A)} i(A)` and the generator map into `i(B)`
    pub pushout: Section,
    pub generator: SectionMap,
    _marker: std::marker::PhantomData<B>,
}

/// Build the generating map `m(B) ⊔_{m(A)} i(A) -> i(B)` attached to a
/// fiber morphism `g: A -> B` over `x`, entirely out of fiberwise colimits.
pub fn quillen_generators<B: FiberOps>(
    inst: &SectInstance<B>,
    x: u32,
    g_fiber: u32,
) -> Result<GeneratorData<B>> {
    let fc = &inst.fc;
    let b = &fc.base;
    let t = &fc.total;
    let a_obj = t.src(g_fiber);
    let b_obj = t.tgt(g_fiber);
    if fc.proj_obj(a_obj) != x || fc.proj_mor(g_fiber) != b.identity(x) {
        return Err(Error::Precondition("generator seed must be a fiber morphism over x".into()));
    }
    let (ia, ia_slots) = i_section(inst, x, a_obj)?;
    let (ib, ib_slots) = i_section(inst, x, b_obj)?;
    let (ma, ma_slots) = m_section(inst, x, a_obj)?;
    let (mb, mb_slots) = m_section(inst, x, b_obj)?;
    // i(g): per y, induced on coproducts by f_!(g)
    let mut i_g_comp = Vec::with_capacity(b.object_count());
    for y in b.objects() {
        let mut legs = Vec::with_capacity(ia_slots[y as usize].len());
        for (o, &f) in ia_slots[y as usize].iter().enumerate() {
            let fg = transport_fiber_map(fc, f, g_fiber)?;
            let composed = t
                .compose(ib.legs[y as usize][o], fg)
                .ok_or_else(|| Error::Structural("leg does not compose".into()))?;
            legs.push(composed);
        }
        i_g_comp.push(induced_out_of_colimit(inst, y, &ia, y, &legs, ib.section.values[y as usize])?);
    }
    let i_g = SectionMap { components: i_g_comp };
    // m(g): same over the comma diagrams
    let mut m_g_comp = Vec::with_capacity(b.object_count());
    for y in b.objects() {
        let mut legs = Vec::with_capacity(ma_slots[y as usize].len());
        for (o, &(k, gg)) in ma_slots[y as usize].iter().enumerate() {
            let gk = b.compose(gg, k).unwrap();
            let tg = transport_fiber_map(fc, gk, g_fiber)?;
            let composed = t
                .compose(mb.legs[y as usize][o], tg)
                .ok_or_else(|| Error::Structural("leg does not compose".into()))?;
            legs.push(composed);
        }
        m_g_comp.push(induced_out_of_colimit(inst, y, &ma, y, &legs, mb.section.values[y as usize])?);
    }
    let m_g = SectionMap { components: m_g_comp };
    // comparisons m(X) -> i(X): the (k, g) slot lands in the (g∘k) slot
    let m_to_i = |mx: &ColimitSection<B>,
                  mx_slots: &Vec<Vec<(u32, u32)>>,
                  ix: &ColimitSection<B>,
                  ix_slots: &Vec<Vec<u32>>|
     -> Result<SectionMap> {
        let mut comps = Vec::with_capacity(b.object_count());
        for y in b.objects() {
            let mut legs = Vec::with_capacity(mx_slots[y as usize].len());
            for &(k, g) in &mx_slots[y as usize] {
                let gk = b.compose(g, k).unwrap();
                let slot = ix_slots[y as usize]
                    .iter()
                    .position(|&f| f == gk)
                    .expect("composite is a hom element");
                legs.push(ix.legs[y as usize][slot]);
            }
            comps.push(induced_out_of_colimit(inst, y, mx, y, &legs, ix.section.values[y as usize])?);
        }
        Ok(SectionMap { components: comps })
    };
    let m_to_i_a = m_to_i(&ma, &ma_slots, &ia, &ia_slots)?;
    let m_to_i_b = m_to_i(&mb, &mb_slots, &ib, &ib_slots)?;
    // pushout section P(y) = m(B)(y) ⊔_{m(A)(y)} i(A)(y), fiberwise
    let mut p_diagrams = Vec::with_capacity(b.object_count());
    for y in b.objects() {
        let shape = Arc::new(crate::fincat::span());
        let backend = &inst.backend;
        let a_slot = shape.object("a").unwrap() as usize;
        let b_slot = shape.object("b").unwrap() as usize;
        let c_slot = shape.object("c").unwrap() as usize;
        let mut obs = vec![backend.named_ob(ma.section.values[y as usize]); 3];
        obs[a_slot] = backend.named_ob(mb.section.values[y as usize]);
        obs[b_slot] = backend.named_ob(ma.section.values[y as usize]);
        obs[c_slot] = backend.named_ob(ia.section.values[y as usize]);
        let mut mors = vec![backend.id_mor(&obs[b_slot]); shape.morphism_count()];
        for m in shape.morphisms() {
            let id = shape.morphism_id(m);
            mors[m as usize] = match id {
                "l" => backend.named_mor(m_g.components[y as usize]),
                "r" => backend.named_mor(m_to_i_a.components[y as usize]),
                _ => backend.id_mor(&obs[shape.src(m) as usize]),
            };
        }
        p_diagrams.push(FiberDiagram { shape, obs, mors });
    }
    let transport = |h: u32, o: usize| -> Result<(usize, u32)> {
        // slots: 0 = m(B), 1 = m(A), 2 = i(A) in span object order a, b, c
        let arrows = [&mb.section, &ma.section, &ia.section];
        // the span category lists objects a, b, c in insertion order
        Ok((o, arrows[o].arrows[h as usize]))
    };
    let p = assemble_colimit_section(inst, p_diagrams, &transport)?;
    // generator P -> i(B): legs m(B) -> i(B) (comparison) and i(A) -> i(B)
    let mut gen_comp = Vec::with_capacity(b.object_count());
    for y in b.objects() {
        let center = t
            .compose(m_to_i_b.components[y as usize], m_g.components[y as usize])
            .expect("composable");
        let legs = vec![m_to_i_b.components[y as usize], center, i_g.components[y as usize]];
        gen_comp.push(induced_out_of_colimit(inst, y, &p, y, &legs, ib.section.values[y as usize])?);
    }
    let generator = SectionMap { components: gen_comp };
    // validate everything before handing it out
    for (map, (s, tgt)) in [
        (&i_g, (&ia.section, &ib.section)),
        (&m_g, (&ma.section, &mb.section)),
        (&m_to_i_a, (&ma.section, &ia.section)),
        (&m_to_i_b, (&mb.section, &ib.section)),
        (&generator, (&p.section, &ib.section)),
    ] {
        let bad = map.validate(fc, s, tgt);
        if !bad.is_empty() {
            return Err(Error::Structural(format!("generator datum invalid: {}", bad[0])));
        }
    }
    Ok(GeneratorData {
        i_a: ia.section,
        i_b: ib.section,
        m_a: ma.section,
        m_b: mb.section,
        i_g,
        m_g,
        m_to_i_a,
        m_to_i_b,
        pushout: p.section,
        generator,
        _marker: std::marker::PhantomData,
    })
}

/// `f_!` applied to a fiber morphism, as a named total morphism.
pub(crate) fn transport_fiber_map(
    fc: &crate::fib::FiberedCategory,
    f: u32,
    mu: u32,
) -> Result<u32> {
    let t = &fc.total;
    let x = t.src(mu);
    let x2 = t.tgt(mu);
    let lift_x = fc
        .opcart_lift(f, x)
        .ok_or_else(|| Error::MissingLimit("missing opcartesian lift".into()))?;
    let lift_x2 = fc
        .opcart_lift(f, x2)
        .ok_or_else(|| Error::MissingLimit("missing opcartesian lift".into()))?;
    let rhs = t.compose(lift_x2, mu).expect("composable");
    let mut cands: Vec<u32> = fc
        .fiber_homs(t.tgt(lift_x), t.tgt(lift_x2))
        .into_iter()
        .filter(|&eta| t.compose(eta, lift_x) == Some(rhs))
        .collect();
    cands.sort_by(|&a, &b| t.morphism_id(a).cmp(t.morphism_id(b)));
    match cands.len() {
        1 => Ok(cands[0]),
        0 => Err(Error::MissingLimit("no transported fiber map".into())),
        _ => Err(Error::Structural("transport not unique".into())),
    }
}

/// The induced named map out of a realized colimit, given named legs.
pub(crate) fn induced_out_of_colimit<B: FiberOps>(
    inst: &SectInstance<B>,
    fiber: u32,
    cs: &ColimitSection<B>,
    y: u32,
    legs: &[u32],
    tgt_obj: u32,
) -> Result<u32> {
    let backend = &inst.backend;
    let d = &cs.diagrams[y as usize];
    let src = backend.named_ob(cs.section.values[y as usize]);
    let tgt = backend.named_ob(tgt_obj);
    let cocone: Vec<B::Mor> = cs.legs[y as usize]
        .iter()
        .map(|&m| backend.named_mor(m))
        .collect();
    let legs_b: Vec<B::Mor> = legs.iter().map(|&m| backend.named_mor(m)).collect();
    let out = backend.colimit_out(fiber, d, &(src, cocone), &tgt, &legs_b)?;
    backend
        .as_total_mor(fiber, &out)
        .ok_or_else(|| Error::Structural("induced map is not a named fiber morphism".into()))
}
