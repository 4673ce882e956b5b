//! Reference instances shared by the test suites and the command-line
//! front end: constant fibrations with set-fragment fibers, a non-constant
//! semifibration over the span with lattice model fibers, and a slice
//! bifibration over the arrow category.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::fib::{constant_fibration, synthesize_cleavages, CatFunctor, FiberedCategory};
use crate::fincat::{chain, poset, FiniteCategory, FunctorData, MorphismClass};
use crate::model::{
    builtin_finset_fragment, builtin_trivial, synthesize_factorizations, transport_model_classes,
    ModelClasses,
};
use crate::reedy::ReedyStructure;
use crate::sect::{SearchFibers, SectInstance, SetFibers};
use crate::setfun::{ConcreteSet, SetFn};
use crate::Result;

/// Fiber morphism id inside a Grothendieck-construction fiber over `c`:
/// the pair morphism decorated with its source object.
pub fn pair_fiber_mor_id(c_id: &str, id_mor: &str, mor: &str, src_obj: &str) -> String {
    let _ = c_id;
    format!("({id_mor}|{mor})@{src_obj}")
}

/// The constant fibration `M × R -> R` with `M` the finite-set fragment of
/// the given cap, concretized for the set backend.
pub fn constant_fragment_instance(
    rs: Arc<ReedyStructure>,
    cap: usize,
) -> Result<SectInstance<SetFibers>> {
    let frag = builtin_finset_fragment(cap)?;
    let m = frag.classes.category.clone();
    let fc = Arc::new(constant_fibration(rs.category.clone(), m.clone())?);
    // concretize: object (c|sk) carries {1..k}; morphism (f|α)@X carries α
    let t = &fc.total;
    let mut obj_sets = Vec::with_capacity(t.object_count());
    for o in t.objects() {
        let id = t.object_id(o);
        let inner = id
            .rsplit_once('|')
            .map(|(_, rest)| rest.trim_end_matches(')'))
            .expect("pair object id");
        let k = m.object(inner)?;
        obj_sets.push(ConcreteSet::numbered("e", frag.sizes[k as usize]));
    }
    let mut mor_fns = Vec::with_capacity(t.morphism_count());
    for mm in t.morphisms() {
        let id = t.morphism_id(mm);
        // format: (f|α)@X — α itself contains no '@'
        let (pair, _src) = id.rsplit_once('@').expect("pair morphism id");
        let alpha = pair
            .rsplit_once('|')
            .map(|(_, rest)| rest.trim_end_matches(')'))
            .expect("pair morphism id");
        let am = m.morphism(alpha)?;
        mor_fns.push(SetFn { map: frag.functions[am as usize].clone() });
    }
    let backend = SetFibers::new(fc.clone(), obj_sets, mor_fns)?;
    Ok(SectInstance { fc, rs, backend })
}

/// A constant fibration with an arbitrary fiber category equipped with
/// model classes, for the search backend.
pub fn constant_model_instance(
    rs: Arc<ReedyStructure>,
    mc: &ModelClasses,
) -> Result<SectInstance<SearchFibers>> {
    let fc = Arc::new(constant_fibration(rs.category.clone(), mc.category.clone())?);
    let b = &rs.category;
    let mut models = Vec::with_capacity(b.object_count());
    for c in b.objects() {
        let fiber = fc.fiber(c).clone();
        let idc = b.morphism_id(b.identity(c)).to_string();
        let cid = b.object_id(c).to_string();
        let transported = transport_model_classes(
            mc,
            fiber,
            |o| format!("({cid}|{o})"),
            |mor, src| pair_fiber_mor_id(&cid, &idc, mor, src),
        )?;
        models.push(transported);
    }
    let backend = SearchFibers::new(fc.clone(), models)?;
    Ok(SectInstance { fc, rs, backend })
}

/// The mixed model structure on the chain `[2]` (as a lattice): weak
/// equivalences `{ids, 1<=2}`, cofibrations `{ids, 0<=1}`, all maps
/// fibrations. A genuinely non-trivial finite model category.
pub fn chain2_mixed_model() -> Result<ModelClasses> {
    let lat = Arc::new(poset(&["0", "1", "2"], &[("0", "1"), ("1", "2")])?);
    let weq = MorphismClass::from_ids(&lat, &["0<=0", "1<=1", "2<=2", "1<=2"])?;
    let cof = MorphismClass::from_ids(&lat, &["0<=0", "1<=1", "2<=2", "0<=1"])?;
    let fib = MorphismClass::all(&lat);
    let (factor_cf, factor_tcf) = synthesize_factorizations(&lat, &weq, &cof, &fib);
    Ok(ModelClasses { category: lat, weq, cof, fib, factor_cf, factor_tcf })
}

/// A genuinely non-constant admissible model semifibration over the span
/// with both legs raising: the central fiber is the trivial structure on
/// `[1]`, the outer fibers carry the mixed `[2]` structure, and the
/// transitions embed `[1]` into `[2]` as `{0, 1}`.
pub fn span_lattice_instance() -> Result<SectInstance<SearchFibers>> {
    let rs = Arc::new(crate::reedy::span_raising());
    let base = rs.category.clone();
    let fiber_b = Arc::new(chain(1));
    let outer = chain2_mixed_model()?;
    let fiber_a = outer.category.clone();
    let fiber_c = outer.category.clone();
    // transports along l: b -> a and r: b -> c send 0, 1 to 0, 1; the arrow
    // of [1] lands on 0<=1, a cofibration, and identities on identities, so
    // both transitions are left derivable
    let embed = |tgt: &Arc<FiniteCategory>| -> Result<FunctorData> {
        let mut obj = BTreeMap::new();
        obj.insert("0".to_string(), "0".to_string());
        obj.insert("1".to_string(), "1".to_string());
        let mut mor = BTreeMap::new();
        mor.insert("0<=0".to_string(), "0<=0".to_string());
        mor.insert("1<=1".to_string(), "1<=1".to_string());
        mor.insert("0<=1".to_string(), "0<=1".to_string());
        FunctorData::from_ids(fiber_b.clone(), tgt.clone(), &obj, &mor)
    };
    let mut transports = Vec::with_capacity(base.morphism_count());
    for m in base.morphisms() {
        let id = base.morphism_id(m);
        let tr = match id {
            "l" => embed(&fiber_a)?,
            "r" => embed(&fiber_c)?,
            "ida" => FunctorData::identity(fiber_a.clone()),
            "idb" => FunctorData::identity(fiber_b.clone()),
            "idc" => FunctorData::identity(fiber_c.clone()),
            other => unreachable!("span morphism {other}"),
        };
        transports.push(tr);
    }
    let fibers = base
        .objects()
        .map(|c| match base.object_id(c) {
            "a" => fiber_a.clone(),
            "b" => fiber_b.clone(),
            "c" => fiber_c.clone(),
            other => unreachable!("span object {other}"),
        })
        .collect();
    let e = CatFunctor { base: base.clone(), fibers, transports };
    let fc = Arc::new(synthesize_cleavages(&crate::fib::grothendieck_op(&e)?));
    // fiber model structures
    let trivial_b = builtin_trivial(fiber_b.clone())?;
    let mut models = Vec::with_capacity(base.object_count());
    for c in base.objects() {
        let cid = base.object_id(c).to_string();
        let idc = base.morphism_id(base.identity(c)).to_string();
        let source = match cid.as_str() {
            "b" => &trivial_b,
            _ => &outer,
        };
        models.push(transport_model_classes(
            source,
            fc.fiber(c).clone(),
            |o| format!("({cid}|{o})"),
            |mor, src| pair_fiber_mor_id(&cid, &idc, mor, src),
        )?);
    }
    let backend = SearchFibers::new(fc.clone(), models)?;
    Ok(SectInstance { fc, rs, backend })
}

/// A Quillen-presheaf style bifibration over `[1]` with slice-of-sets
/// fibers: the fiber over 0 is `FinSet/{b1,b2}` (carriers of size <= 2),
/// the fiber over 1 is `FinSet` (size <= 4), the pushforward forgets the
/// structure map, and its right adjoint pairs with `{b1,b2}`.
pub struct SliceInstance {
    pub inst: SectInstance<SetFibers>,
    /// the Reedy structure with all maps lowering, sharing the same data
    pub inverse: Arc<ReedyStructure>,
}

pub fn slice_bifibration_instance() -> Result<SliceInstance> {
    slice_bifibration_instance_sized(2, 4)
}

/// As [`slice_bifibration_instance`] with explicit carrier caps for the two
/// fibers.
pub fn slice_bifibration_instance_sized(cap0: usize, cap1: usize) -> Result<SliceInstance> {
    // fiber over 0: objects "k/v" = carrier {1..k} with structure map v
    // (digits into {1, 2}); fiber over 1: sets up to the second cap
    let mut objs0: Vec<(usize, Vec<u32>)> = Vec::new();
    for k in 0usize..=cap0 {
        let mut v = vec![0u32; k];
        loop {
            objs0.push((k, v.clone()));
            let mut i = 0;
            while i < k {
                v[i] += 1;
                if v[i] < 2 {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
            if i == k || k == 0 {
                break;
            }
        }
    }
    let name0 = |k: usize, v: &[u32]| -> String {
        let digits: String = v.iter().map(|&d| (b'1' + d as u8) as char).collect();
        format!("{k}/{digits}")
    };
    let mut b0 = crate::fincat::CategoryBuilder::new();
    for (k, v) in &objs0 {
        b0.object(&name0(*k, v))?;
    }
    // morphisms of the slice: functions commuting with the structure maps
    let mut mors0: Vec<(usize, usize, Vec<u32>)> = Vec::new();
    let all_fns = |a: usize, b: usize| -> Vec<Vec<u32>> {
        if a == 0 {
            return vec![vec![]];
        }
        if b == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let mut v = vec![0u32; a];
        loop {
            out.push(v.clone());
            let mut i = 0;
            while i < a {
                v[i] += 1;
                if (v[i] as usize) < b {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
            if i == a {
                break;
            }
        }
        out
    };
    let fname = |i: usize, j: usize, f: &[u32]| -> String {
        let digits: String = f.iter().map(|&d| (b'1' + d as u8) as char).collect();
        format!("{}>{}:{digits}", name0(objs0[i].0, &objs0[i].1), name0(objs0[j].0, &objs0[j].1))
    };
    for (i, (ka, va)) in objs0.iter().enumerate() {
        for (j, (kb, vb)) in objs0.iter().enumerate() {
            for f in all_fns(*ka, *kb) {
                let commutes = (0..*ka).all(|e| vb[f[e] as usize] == va[e]);
                if commutes {
                    b0.morphism(&fname(i, j, &f), &name0(*ka, va), &name0(*kb, vb))?;
                    mors0.push((i, j, f));
                }
            }
        }
    }
    for (i, (k, v)) in objs0.iter().enumerate() {
        let idf: Vec<u32> = (0..*k as u32).collect();
        b0.identity(&name0(*k, v), &fname(i, i, &idf))?;
    }
    for (i1, j1, f1) in &mors0 {
        for (i2, j2, f2) in &mors0 {
            if j1 != i2 {
                continue;
            }
            let comp: Vec<u32> = f1.iter().map(|&x| f2[x as usize]).collect();
            b0.compose(&fname(*i2, *j2, f2), &fname(*i1, *j1, f1), &fname(*i1, *j2, &comp))?;
        }
    }
    let fiber0 = Arc::new(b0.finish()?);
    let frag = builtin_finset_fragment(cap1)?;
    let fiber1 = frag.classes.category.clone();
    // pushforward: forget the structure map; (k, v) -> sk
    let base = Arc::new(chain(1));
    let mut obj_map = BTreeMap::new();
    let mut mor_map = BTreeMap::new();
    for (k, v) in &objs0 {
        obj_map.insert(name0(*k, v), format!("s{k}"));
    }
    for (i, j, f) in &mors0 {
        let digits: String = f.iter().map(|&d| (b'1' + d as u8) as char).collect();
        let empty = if objs0[*i].0 == 0 { String::new() } else { digits };
        mor_map.insert(
            fname(*i, *j, f),
            format!("s{}>s{}:{}", objs0[*i].0, objs0[*j].0, empty),
        );
    }
    let push = FunctorData::from_ids(fiber0.clone(), fiber1.clone(), &obj_map, &mor_map)?;
    let m01 = base.morphism("0<=1")? as usize;
    let id0 = base.identity(base.object("0")?) as usize;
    let id1 = base.identity(base.object("1")?) as usize;
    let mut transports = vec![FunctorData::identity(fiber0.clone()); base.morphism_count()];
    transports[id0] = FunctorData::identity(fiber0.clone());
    transports[id1] = FunctorData::identity(fiber1.clone());
    transports[m01] = push;
    let e = CatFunctor {
        base: base.clone(),
        fibers: vec![fiber0.clone(), fiber1.clone()],
        transports,
    };
    let fc = Arc::new(synthesize_cleavages(&crate::fib::grothendieck_op(&e)?));
    // concretization: carriers
    let t = &fc.total;
    let mut obj_sets = Vec::with_capacity(t.object_count());
    for o in t.objects() {
        let id = t.object_id(o);
        let inner = id[1..id.len() - 1].split_once('|').expect("pair id").1;
        let size = if let Some((k, _)) = inner.split_once('/') {
            k.parse::<usize>().unwrap()
        } else {
            inner[1..].parse::<usize>().unwrap()
        };
        obj_sets.push(ConcreteSet::numbered("e", size));
    }
    let mut mor_fns = Vec::with_capacity(t.morphism_count());
    for mm in t.morphisms() {
        let id = t.morphism_id(mm);
        let (pair, _src) = id.rsplit_once('@').expect("pair morphism id");
        let alpha = pair[1..pair.len() - 1].split_once('|').expect("pair id").1;
        // function digits after the colon
        let digits = alpha.rsplit_once(':').expect("function id").1;
        let map: Vec<u32> = digits.bytes().map(|b| (b - b'1') as u32).collect();
        mor_fns.push(SetFn { map });
    }
    let backend = SetFibers::new(fc.clone(), obj_sets, mor_fns)?;
    let direct = Arc::new(crate::reedy::chain_direct(1));
    let inverse = Arc::new(crate::reedy::chain_inverse(1));
    Ok(SliceInstance { inst: SectInstance { fc, rs: direct, backend }, inverse })
}

/// Reuse a set-backed instance with a different Reedy structure on the same
/// base category.
pub fn with_reedy(inst: &SectInstance<SetFibers>, rs: Arc<ReedyStructure>) -> SectInstance<SetFibers> {
    SectInstance { fc: inst.fc.clone(), rs, backend: inst.backend.clone() }
}
