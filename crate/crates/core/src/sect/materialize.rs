//! Exhaustive materialization of section categories: enumerate all sections
//! and all section maps within a budget, and present them as a finite
//! category with componentwise composition computed on demand.

use std::collections::HashMap;
use std::sync::Arc;

use crate::fib::FiberedCategory;
use crate::fincat::{virtual_category, FiniteCategory, MorRec};
use crate::{Error, Result};

use super::backend::FiberOps;
use super::{Section, SectionMap, SectInstance};

/// Enumerate every section of the fibered category, in a deterministic
/// order. The budget caps the number of search nodes.
pub fn enumerate_sections(fc: &FiberedCategory, budget: usize) -> Result<Vec<Section>> {
    let b = &fc.base;
    let t = &fc.total;
    let non_id_mors: Vec<u32> = b.morphisms().filter(|&m| !b.is_identity(m)).collect();
    let mut out = Vec::new();
    let mut nodes = 0usize;
    // choose values object by object, then arrows morphism by morphism
    let mut values = vec![0u32; b.object_count()];
    fn assign_values(
        fc: &FiberedCategory,
        values: &mut Vec<u32>,
        depth: usize,
        non_id: &[u32],
        nodes: &mut usize,
        budget: usize,
        out: &mut Vec<Section>,
    ) -> Result<()> {
        let b = &fc.base;
        if depth == b.object_count() {
            let mut arrows = vec![u32::MAX; b.morphism_count()];
            for x in b.objects() {
                arrows[b.identity(x) as usize] = fc.total.identity(values[x as usize]);
            }
            return assign_arrows(fc, values, &mut arrows, 0, non_id, nodes, budget, out);
        }
        for &v in fc.fiber_objects(depth as u32) {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::Budget(format!(
                    "section enumeration exceeded {budget} nodes"
                )));
            }
            values[depth] = v;
            assign_values(fc, values, depth + 1, non_id, nodes, budget, out)?;
        }
        Ok(())
    }
    #[allow(clippy::too_many_arguments)]
    fn assign_arrows(
        fc: &FiberedCategory,
        values: &[u32],
        arrows: &mut Vec<u32>,
        k: usize,
        non_id: &[u32],
        nodes: &mut usize,
        budget: usize,
        out: &mut Vec<Section>,
    ) -> Result<()> {
        let b = &fc.base;
        let t = &fc.total;
        if k == non_id.len() {
            out.push(Section { values: values.to_vec(), arrows: arrows.clone() });
            return Ok(());
        }
        let f = non_id[k];
        let (s, y) = (b.src(f), b.tgt(f));
        let src_v = values[s as usize];
        let tgt_v = values[y as usize];
        for m in fc.morphisms_over(f) {
            if t.src(m) != src_v || t.tgt(m) != tgt_v {
                continue;
            }
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::Budget(format!(
                    "section enumeration exceeded {budget} nodes"
                )));
            }
            arrows[f as usize] = m;
            // prune on every composition involving f whose factors are known
            let consistent = b.morphisms().all(|g| {
                if arrows[g as usize] == u32::MAX {
                    return true;
                }
                // f then g
                if b.tgt(f) == b.src(g) {
                    if let Some(gf) = b.compose(g, f) {
                        if arrows[gf as usize] != u32::MAX {
                            if t.compose(arrows[g as usize], arrows[f as usize])
                                != Some(arrows[gf as usize])
                            {
                                return false;
                            }
                        }
                    }
                }
                // g then f
                if b.tgt(g) == b.src(f) {
                    if let Some(fg) = b.compose(f, g) {
                        if arrows[fg as usize] != u32::MAX {
                            if t.compose(arrows[f as usize], arrows[g as usize])
                                != Some(arrows[fg as usize])
                            {
                                return false;
                            }
                        }
                    }
                }
                true
            });
            if consistent {
                assign_arrows(fc, values, arrows, k + 1, non_id, nodes, budget, out)?;
            }
            arrows[f as usize] = u32::MAX;
        }
        Ok(())
    }
    assign_values(fc, &mut values, 0, &non_id_mors, &mut nodes, budget, &mut out)?;
    // final validation and deterministic order
    out.retain(|s| s.validate(fc).is_empty());
    out.sort();
    let _ = t;
    Ok(out)
}

/// Count section maps `S -> T`; optionally collect them, in lexicographic
/// component order.
pub fn count_section_maps(
    fc: &FiberedCategory,
    s: &Section,
    t: &Section,
    collect: bool,
) -> (u64, Vec<SectionMap>) {
    let b = &fc.base;
    let tot = &fc.total;
    let n = b.object_count();
    let mut count = 0u64;
    let mut all = Vec::new();
    let mut comps: Vec<u32> = Vec::with_capacity(n);
    // check naturality for a base morphism as soon as both endpoints are set
    let mut checks_at: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for f in b.morphisms() {
        let hi = b.src(f).max(b.tgt(f)) as usize;
        checks_at[hi + 1].push(f);
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        fc: &FiberedCategory,
        s: &Section,
        t: &Section,
        comps: &mut Vec<u32>,
        depth: usize,
        checks_at: &[Vec<u32>],
        count: &mut u64,
        all: &mut Vec<SectionMap>,
        collect: bool,
    ) {
        let b = &fc.base;
        let tot = &fc.total;
        if depth == b.object_count() {
            *count += 1;
            if collect {
                all.push(SectionMap { components: comps.clone() });
            }
            return;
        }
        for c in fc.fiber_homs(s.values[depth], t.values[depth]) {
            comps.push(c);
            let ok = checks_at[depth + 1].iter().all(|&f| {
                let (x, y) = (b.src(f) as usize, b.tgt(f) as usize);
                tot.compose(comps[y], s.arrows[f as usize])
                    == tot.compose(t.arrows[f as usize], comps[x])
            });
            if ok {
                rec(fc, s, t, comps, depth + 1, checks_at, count, all, collect);
            }
            comps.pop();
        }
    }
    rec(fc, s, t, &mut comps, 0, &checks_at, &mut count, &mut all, collect);
    let _ = tot;
    (count, all)
}

/// All section maps between two sections.
pub fn enumerate_section_maps(
    fc: &FiberedCategory,
    s: &Section,
    t: &Section,
) -> Vec<SectionMap> {
    count_section_maps(fc, s, t, true).1
}

/// A materialized category of sections: all sections as objects, all
/// section maps as morphisms, composition componentwise (computed on
/// demand through the fiber tables).
pub struct MaterializedSections {
    pub cat: Arc<FiniteCategory>,
    pub sections: Vec<Section>,
    pub maps: Vec<(u32, u32, SectionMap)>,
}

impl MaterializedSections {
    /// Index of a map given endpoints and components.
    pub fn map_index(&self, src: u32, tgt: u32, comps: &[u32]) -> Option<u32> {
        self.maps
            .iter()
            .position(|(s, t, m)| *s == src && *t == tgt && m.components == comps)
            .map(|i| i as u32)
    }

    pub fn section_index(&self, s: &Section) -> Option<u32> {
        self.sections.iter().position(|x| x == s).map(|i| i as u32)
    }
}

/// Materialize the whole category of sections within a budget.
pub fn sections_category<B: FiberOps>(
    inst: &SectInstance<B>,
    budget: usize,
) -> Result<MaterializedSections> {
    let fc = &inst.fc;
    let sections = enumerate_sections(fc, budget)?;
    let mut maps: Vec<(u32, u32, SectionMap)> = Vec::new();
    for (si, s) in sections.iter().enumerate() {
        for (ti, t) in sections.iter().enumerate() {
            let between = enumerate_section_maps(fc, s, t);
            if maps.len() + between.len() > budget {
                return Err(Error::Budget(format!(
                    "section map enumeration exceeded {budget} entries"
                )));
            }
            for m in between {
                maps.push((si as u32, ti as u32, m));
            }
        }
    }
    maps.sort_by(|a, b| (a.0, a.1, &a.2.components).cmp(&(b.0, b.1, &b.2.components)));
    let objects: Vec<String> = (0..sections.len()).map(|i| format!("S{i:06}")).collect();
    let mors: Vec<MorRec> = maps
        .iter()
        .enumerate()
        .map(|(i, (s, t, _))| MorRec { id: format!("m{i:08}"), src: *s, tgt: *t })
        .collect();
    let identities: Vec<u32> = sections
        .iter()
        .enumerate()
        .map(|(si, s)| {
            let idm = SectionMap::identity(fc, s);
            maps.iter()
                .position(|(a, b, m)| *a == si as u32 && *b == si as u32 && m == &idm)
                .expect("identity map enumerated") as u32
        })
        .collect();
    // composition closure computed componentwise on demand
    let lookup: HashMap<(u32, u32, Vec<u32>), u32> = maps
        .iter()
        .enumerate()
        .map(|(i, (s, t, m))| ((*s, *t, m.components.clone()), i as u32))
        .collect();
    let recs: Vec<(u32, u32, Vec<u32>)> =
        maps.iter().map(|(s, t, m)| (*s, *t, m.components.clone())).collect();
    let total = fc.total.clone();
    let composer = Arc::new(move |g: u32, f: u32| -> Option<u32> {
        let (fs, ft, fcomp) = &recs[f as usize];
        let (gs, gt, gcomp) = &recs[g as usize];
        if ft != gs {
            return None;
        }
        let comps: Option<Vec<u32>> = fcomp
            .iter()
            .zip(gcomp.iter())
            .map(|(&cf, &cg)| total.compose(cg, cf))
            .collect();
        lookup.get(&(*fs, *gt, comps?)).copied()
    });
    let cat = Arc::new(virtual_category(objects, mors, identities, composer)?);
    Ok(MaterializedSections { cat, sections, maps })
}
