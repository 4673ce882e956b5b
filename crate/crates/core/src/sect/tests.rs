use std::sync::Arc;

use crate::fixtures::{
    constant_fragment_instance, slice_bifibration_instance, span_lattice_instance, with_reedy,
};
use crate::model::ClassFlag;
use crate::reedy::{chain_direct, chain_inverse};
use crate::setfun::{ConcreteSet, SetDiagram, SetFn};

use super::*;

#[test]
fn sections_of_constant_fragment_over_arrow_are_functors() {
    let inst = constant_fragment_instance(Arc::new(chain_direct(1)), 2).unwrap();
    let mat = sections_category(&inst, 1_000_000).unwrap();
    // sections of M × [1] -> [1] are morphisms of M: 11 for the cap-2 fragment
    assert_eq!(mat.sections.len(), 11);
    assert!(mat.cat.validate().ok());
    // identity maps classify with every flag set
    let s = &mat.sections[0];
    let idm = SectionMap::identity(&inst.fc, s);
    let cls = classify_section_map(&inst, s, s, &idm, true).unwrap();
    assert!(cls.reedy_cof && cls.reedy_fib && cls.weq && cls.trivial_cof && cls.trivial_fib);
}

#[test]
fn latching_of_constant_fragment_at_top_is_lower_value() {
    let inst = constant_fragment_instance(Arc::new(chain_direct(1)), 2).unwrap();
    let mat = sections_category(&inst, 1_000_000).unwrap();
    let x1 = inst.rs.category.object("1").unwrap();
    for s in &mat.sections {
        let lat = latching_object(&inst, s, x1).unwrap();
        // Lat(1) over the direct arrow has one object, so the latching
        // object is the pushforward of S(0), which for a constant fibration
        // has the same carrier
        let expected = inst.backend.obj_sets[s.values[0] as usize].len();
        assert_eq!(lat.object.set.len(), expected);
    }
    // degree-0 object: empty latching category, empty-set colimit
    let x0 = inst.rs.category.object("0").unwrap();
    let lat0 = latching_object(&inst, &mat.sections[5], x0).unwrap();
    assert_eq!(lat0.object.set.len(), 0);
}

#[test]
fn matching_dual_on_inverse_chain() {
    let inst = constant_fragment_instance(Arc::new(chain_inverse(1)), 2).unwrap();
    let mat_sections = sections_category(&inst, 1_000_000).unwrap();
    let x0 = inst.rs.category.object("0").unwrap();
    for s in &mat_sections.sections {
        let mat = matching_object(&inst, s, x0).unwrap();
        let expected = inst.backend.obj_sets[s.values[1] as usize].len();
        assert_eq!(mat.object.set.len(), expected);
    }
}

#[test]
fn classification_matches_mono_epi_on_constant_arrow_instance() {
    let inst = constant_fragment_instance(Arc::new(chain_direct(1)), 2).unwrap();
    let mat = sections_category(&inst, 1_000_000).unwrap();
    for (si, ti, map) in mat.maps.iter().take(200) {
        let s = &mat.sections[*si as usize];
        let t = &mat.sections[*ti as usize];
        let cls = classify_section_map(&inst, s, t, map, true).unwrap();
        // hand-computed classical classes over the arrow category:
        // cofibration iff c0 mono and the pushout-corner map mono
        let f0 = &inst.backend.mor_fns[map.components[0] as usize];
        let c0_mono = f0.injective();
        assert_eq!(
            cls.per_object[0].relative_latching.contains(&ClassFlag::Cof),
            c0_mono,
            "degree-0 relative latching map is the component"
        );
        let fib_flag0 = cls.per_object[0].relative_matching.contains(&ClassFlag::Fib);
        // over the direct structure the matching side is trivial at 1... at 0
        // Mat(0) is empty, so the relative matching map is the component
        let c0_epi = {
            let tgt = inst.backend.obj_sets[t.values[0] as usize].len();
            f0.surjective_onto(tgt)
        };
        assert_eq!(fib_flag0, c0_epi);
    }
}

#[test]
fn set_valued_latching_matches_degeneracy_count() {
    // standard 2-simplex as a set diagram over the inverse chain is not the
    // real simplex category; here a small sanity case: over [1] direct with
    // X(0) -> X(1) injective fold
    let rs = chain_direct(1);
    let shape = rs.category.clone();
    let m = shape.morphism("0<=1").unwrap() as usize;
    let mut fns = vec![SetFn::identity(0); shape.morphism_count()];
    fns[shape.identity(0) as usize] = SetFn::identity(2);
    fns[shape.identity(1) as usize] = SetFn::identity(3);
    fns[m] = SetFn { map: vec![0, 1] };
    let d = SetDiagram::new(
        shape.clone(),
        vec![ConcreteSet::numbered("a", 2), ConcreteSet::numbered("b", 3)],
        fns,
    )
    .unwrap();
    let x1 = shape.object("1").unwrap();
    let (lat, _) = set_valued_latching(&rs, &d, x1).unwrap();
    assert_eq!(lat.len(), 2, "latching at the top of the arrow is the image of X(0)");
    let x0 = shape.object("0").unwrap();
    let (lat0, _) = set_valued_latching(&rs, &d, x0).unwrap();
    assert_eq!(lat0.len(), 0);
}

#[test]
fn span_lattice_instance_is_admissible_semifibration() {
    let inst = span_lattice_instance().unwrap();
    let report = crate::fib::validate_semifibration(&inst.fc, &inst.rs.factorization_system());
    assert!(report.ok(), "{report:?}");
    let adm = check_admissibility(&inst, 100_000).unwrap();
    assert!(adm.admissible(), "{adm:?}");
    assert_eq!(adm.brute_force, Some((true, true)));
}

#[test]
fn span_lattice_sections_count() {
    let inst = span_lattice_instance().unwrap();
    let mat = sections_category(&inst, 100_000).unwrap();
    // sections: S(b) in [1], S(a), S(c) in [2] with l_! S(b) <= S(a) and
    // r_! S(b) <= S(c); l_!, r_! are the inclusion 0,1 -> 0,1:
    // S(b)=0: 3 * 3; S(b)=1: 2 * 2 -> 13
    assert_eq!(mat.sections.len(), 13);
    assert!(mat.cat.validate().ok());
}

#[test]
fn factorize_and_lift_on_span_lattice() {
    let inst = span_lattice_instance().unwrap();
    let mat = sections_category(&inst, 100_000).unwrap();
    for (si, ti, map) in &mat.maps {
        let s = &mat.sections[*si as usize];
        let t = &mat.sections[*ti as usize];
        for mode in [FactorMode::CofThenTrivFib, FactorMode::TrivCofThenFib] {
            let (b, i, p) = factorize_section_map(&inst, s, t, map, mode).unwrap();
            assert!(b.validate(&inst.fc).is_empty());
            let ci = classify_section_map(&inst, s, &b, &i, true).unwrap();
            let cp = classify_section_map(&inst, &b, t, &p, true).unwrap();
            match mode {
                FactorMode::CofThenTrivFib => {
                    assert!(ci.reedy_cof, "first factor must be a Reedy cofibration");
                    assert!(cp.trivial_fib && cp.weq, "second factor must be trivial fibration");
                }
                FactorMode::TrivCofThenFib => {
                    assert!(ci.trivial_cof && ci.weq);
                    assert!(cp.reedy_fib);
                }
            }
        }
    }
    // lifting: find a square (i trivial cof, p fib) and lift it
    let mut tried = 0;
    for (ai, bi, imap) in &mat.maps {
        let a = &mat.sections[*ai as usize];
        let b = &mat.sections[*bi as usize];
        let ci = classify_section_map(&inst, a, b, imap, true).unwrap();
        if !(ci.reedy_cof && ci.weq) {
            continue;
        }
        for (si, ti, pmap) in &mat.maps {
            let s = &mat.sections[*si as usize];
            let t = &mat.sections[*ti as usize];
            let cp = classify_section_map(&inst, s, t, pmap, true).unwrap();
            if !cp.reedy_fib {
                continue;
            }
            for (tsi, tti, top) in &mat.maps {
                if tsi != ai || tti != si {
                    continue;
                }
                for (bsi, bti, bottom) in &mat.maps {
                    if bsi != bi || bti != ti {
                        continue;
                    }
                    // commuting?
                    let commutes = inst.fc.base.objects().all(|x| {
                        inst.fc
                            .total
                            .compose(pmap.components[x as usize], top.components[x as usize])
                            == inst
                                .fc
                                .total
                                .compose(bottom.components[x as usize], imap.components[x as usize])
                    });
                    if !commutes {
                        continue;
                    }
                    let h = lift_section_square(&inst, a, b, s, t, imap, pmap, top, bottom)
                        .unwrap();
                    assert!(h.validate(&inst.fc, b, s).is_empty());
                    tried += 1;
                    if tried > 25 {
                        return;
                    }
                }
            }
        }
    }
    assert!(tried > 0, "at least one liftable square must exist");
}

#[test]
fn canonical_map_factors_through_extensions() {
    let inst = span_lattice_instance().unwrap();
    let mat = sections_category(&inst, 100_000).unwrap();
    // restrict a section to degree 0 (just b) and extend it back
    let s = &mat.sections[0];
    let b_obj = inst.rs.category.object("b").unwrap();
    let lower = crate::fincat::full_subcategory(&inst.rs.category, &[b_obj]).unwrap();
    let lb = lower.object("b").unwrap();
    let partial = Section {
        values: vec![s.values[b_obj as usize]; 1],
        arrows: vec![s.arrows[inst.rs.category.identity(b_obj) as usize]; 1],
    };
    let _ = lb;
    // choices at a and c: reuse the section's own data
    let mut choices = Vec::new();
    for name in ["a", "c"] {
        let x = inst.rs.category.object(name).unwrap();
        let (val, arr) = SectionView::total(s);
        let lat = latching_data(&inst, &val, &arr, x).unwrap();
        let mat_d = matching_data(&inst, &val, &arr, x).unwrap();
        let lat_map = latching_to_value(&inst, &lat, &arr, s.values[x as usize]).unwrap();
        let mat_map = value_to_matching(&inst, &mat_d, &arr, s.values[x as usize]).unwrap();
        choices.push((x, s.values[x as usize], lat_map, mat_map));
    }
    let extended = extend_section(&inst, &partial, &lower, &choices).unwrap();
    assert_eq!(&extended, s, "round trip: restrict then extend is the identity");
}

#[test]
fn generators_adjunction_certificates_on_slice_instance() {
    let slice = slice_bifibration_instance().unwrap();
    let inst = &slice.inst;
    let x = inst.rs.category.object("0").unwrap();
    // seed: a fiber morphism A -> B over 0
    let a_id = "(0|1/1)";
    let a_obj = inst.fc.total.object(a_id).unwrap();
    let g = inst.fc.total.identity(a_obj);
    let data = quillen_generators(inst, x, g).unwrap();
    // adjunction certificate: Sect(i(X), S) ≅ fiber(x)(X, S(x))
    let sections = enumerate_sections(&inst.fc, 1_000_000).unwrap();
    let mut tested = 0;
    for s in sections.iter() {
        let lhs = count_section_maps(&inst.fc, &data.i_a, s, false).0;
        let rhs = inst.fc.fiber_homs(a_obj, s.values[x as usize]).len() as u64;
        assert_eq!(lhs, rhs, "free-section adjunction certificate");
        tested += 1;
        if tested >= 25 {
            break;
        }
    }
    assert!(tested >= 20);
}

#[test]
fn m_adjunction_certificate_on_inverse_structure() {
    let slice = slice_bifibration_instance().unwrap();
    let inst = with_reedy(&slice.inst, slice.inverse.clone());
    let x = inst.rs.category.object("0").unwrap();
    let a_id = "(0|1/1)";
    let a_obj = inst.fc.total.object(a_id).unwrap();
    let g = inst.fc.total.identity(a_obj);
    let data = quillen_generators(&inst, x, g).unwrap();
    let sections = enumerate_sections(&inst.fc, 1_000_000).unwrap();
    let mut tested = 0;
    for s in sections.iter() {
        // skip sections whose matching object needs a pullback beyond the cap
        let Ok(mat) = matching_object(&inst, s, x) else { continue };
        let lhs = count_section_maps(&inst.fc, &data.m_a, s, false).0;
        // hom into a limit = cones over the matching diagram, counted with
        // honest fiber-category morphisms (here Mat(0) has one object)
        let obs_name = inst.backend.ob_name(&mat.diagram.obs[0]).unwrap();
        let rhs = inst.fc.fiber_homs(a_obj, obs_name).len() as u64;
        assert_eq!(lhs, rhs, "matching-companion adjunction certificate");
        tested += 1;
        if tested >= 25 {
            break;
        }
    }
    assert!(tested >= 5);
}
