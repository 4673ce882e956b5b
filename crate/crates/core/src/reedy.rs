//! Factorization systems, Reedy structures, Noether/Artin degree theory,
//! latching and matching categories, open/closed immersions, and good
//! filtrations.
//!
//! Conventions. A factorization system `(L, R)` factors every morphism as a
//! left-class map followed by a right-class map. A Reedy structure is the
//! factorization system `(lowering, raising)` together with a degree
//! function: every `f` factors as a degree-lowering map followed by a
//! degree-raising map, isomorphisms are identities, and non-identities of
//! the two classes strictly lower/raise the degree.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::fincat::{
    comma_over, comma_under, full_subcategory, FiniteCategory, FunctorData, MorphismClass,
};
use crate::{Error, Result};

/// A factorization system on a finite category.
#[derive(Debug, Clone)]
pub struct FactorizationSystem {
    pub category: Arc<FiniteCategory>,
    pub left: MorphismClass,
    pub right: MorphismClass,
}

/// One chosen factorization `f = r ∘ l`, recorded for downstream use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChosenFactorization {
    pub l: u32,
    pub r: u32,
}

#[derive(Debug, Clone)]
pub enum FactorizationViolation {
    IsoNotInLeft { m: String },
    IsoNotInRight { m: String },
    LeftNotClosed { g: String, f: String },
    RightNotClosed { g: String, f: String },
    /// no (l, r) factorization of the named morphism
    NoFactorization { m: String },
    /// two factorizations with no connecting isomorphism, or with several
    NotUnique { m: String, mid1: String, mid2: String, connecting: usize },
}

#[derive(Debug, Clone, Default)]
pub struct FactorizationReport {
    pub violations: Vec<FactorizationViolation>,
    /// per morphism index, the chosen factorization (when one exists);
    /// the lexicographically least (by morphism ids) is chosen
    pub chosen: Vec<Option<ChosenFactorization>>,
}

impl FactorizationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// All `(l, r)` pairs with `r ∘ l = f`, `l` in the left class, `r` in the
/// right class.
pub fn factorizations_of(fs: &FactorizationSystem, f: u32) -> Vec<ChosenFactorization> {
    let c = &fs.category;
    let mut out = Vec::new();
    for &l in &fs.left.members {
        if c.src(l) != c.src(f) {
            continue;
        }
        for &r in &fs.right.members {
            if c.src(r) != c.tgt(l) || c.tgt(r) != c.tgt(f) {
                continue;
            }
            if c.compose(r, l) == Some(f) {
                out.push(ChosenFactorization { l, r });
            }
        }
    }
    out.sort_by(|a, b| {
        (c.morphism_id(a.l), c.morphism_id(a.r)).cmp(&(c.morphism_id(b.l), c.morphism_id(b.r)))
    });
    out
}

/// Validate existence and essential uniqueness of factorizations, plus the
/// class axioms (isomorphisms contained, closure under composition).
///
/// Essential uniqueness is checked by exhaustive search for connecting
/// isomorphisms: for any two factorizations of the same morphism there must
/// be exactly one isomorphism between the middles commuting with both legs.
pub fn validate_factorization_system(fs: &FactorizationSystem) -> FactorizationReport {
    let c = &fs.category;
    let mut violations = Vec::new();
    for m in c.morphisms() {
        if c.is_iso(m) {
            if !fs.left.contains(m) {
                violations.push(FactorizationViolation::IsoNotInLeft {
                    m: c.morphism_id(m).to_string(),
                });
            }
            if !fs.right.contains(m) {
                violations.push(FactorizationViolation::IsoNotInRight {
                    m: c.morphism_id(m).to_string(),
                });
            }
        }
    }
    if let Some((g, f)) = fs.left.closed_under_composition(c) {
        violations.push(FactorizationViolation::LeftNotClosed {
            g: c.morphism_id(g).to_string(),
            f: c.morphism_id(f).to_string(),
        });
    }
    if let Some((g, f)) = fs.right.closed_under_composition(c) {
        violations.push(FactorizationViolation::RightNotClosed {
            g: c.morphism_id(g).to_string(),
            f: c.morphism_id(f).to_string(),
        });
    }
    let mut chosen = vec![None; c.morphism_count()];
    for f in c.morphisms() {
        let facts = factorizations_of(fs, f);
        if facts.is_empty() {
            violations.push(FactorizationViolation::NoFactorization {
                m: c.morphism_id(f).to_string(),
            });
            continue;
        }
        chosen[f as usize] = Some(facts[0].clone());
        for a in &facts {
            for b in &facts {
                let mid_a = c.tgt(a.l);
                let mid_b = c.tgt(b.l);
                let connecting = c
                    .hom(mid_a, mid_b)
                    .iter()
                    .filter(|&&phi| {
                        c.is_iso(phi)
                            && c.compose(phi, a.l) == Some(b.l)
                            && c.compose(b.r, phi) == Some(a.r)
                    })
                    .count();
                if connecting != 1 {
                    violations.push(FactorizationViolation::NotUnique {
                        m: c.morphism_id(f).to_string(),
                        mid1: c.object_id(mid_a).to_string(),
                        mid2: c.object_id(mid_b).to_string(),
                        connecting,
                    });
                }
            }
        }
    }
    FactorizationReport { violations, chosen }
}

/// A Reedy structure: lowering/raising classes plus a degree function.
#[derive(Debug, Clone)]
pub struct ReedyStructure {
    pub category: Arc<FiniteCategory>,
    pub lowering: MorphismClass,
    pub raising: MorphismClass,
    /// degree per object index
    pub degree: Vec<u32>,
}

impl ReedyStructure {
    pub fn new(
        category: Arc<FiniteCategory>,
        lowering: MorphismClass,
        raising: MorphismClass,
        degree: Vec<u32>,
    ) -> Result<Self> {
        if degree.len() != category.object_count() {
            return Err(Error::Structural("one degree per object required".into()));
        }
        Ok(ReedyStructure { category, lowering, raising, degree })
    }

    pub fn deg(&self, o: u32) -> u32 {
        self.degree[o as usize]
    }

    /// The underlying factorization system, left = lowering, right = raising
    /// (a morphism factors as the lowering part followed by the raising part).
    pub fn factorization_system(&self) -> FactorizationSystem {
        FactorizationSystem {
            category: self.category.clone(),
            left: self.lowering.clone(),
            right: self.raising.clone(),
        }
    }

    /// The chosen (lowering, raising) factorization of a morphism.
    pub fn factor(&self, f: u32) -> Result<ChosenFactorization> {
        let facts = factorizations_of(&self.factorization_system(), f);
        facts.into_iter().next().ok_or_else(|| {
            Error::Structural(format!(
                "morphism `{}` has no (lowering, raising) factorization",
                self.category.morphism_id(f)
            ))
        })
    }

    /// A direct structure: all maps raise, degrees from the longest-path
    /// synthesis. Errors when no degree function exists.
    pub fn direct(category: Arc<FiniteCategory>) -> Result<Self> {
        let lowering = MorphismClass::identities(&category);
        let raising = MorphismClass::all(&category);
        let degree = synthesize_degree(&category, &lowering, &raising).ok_or_else(|| {
            Error::Structural("no degree function exists for the direct structure".into())
        })?;
        Ok(ReedyStructure { category, lowering, raising, degree })
    }

    /// An inverse structure: all maps lower.
    pub fn inverse(category: Arc<FiniteCategory>) -> Result<Self> {
        let lowering = MorphismClass::all(&category);
        let raising = MorphismClass::identities(&category);
        let degree = synthesize_degree(&category, &lowering, &raising).ok_or_else(|| {
            Error::Structural("no degree function exists for the inverse structure".into())
        })?;
        Ok(ReedyStructure { category, lowering, raising, degree })
    }
}

#[derive(Debug, Clone)]
pub enum ReedyViolation {
    NonIdentityIso { m: String },
    LoweringDoesNotLower { m: String },
    RaisingDoesNotRaise { m: String },
    Factorization(FactorizationViolation),
}

#[derive(Debug, Clone, Default)]
pub struct ReedyValidation {
    pub violations: Vec<ReedyViolation>,
}

impl ReedyValidation {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Validate all Reedy axioms, including strict degree monotonicity and the
/// factorization-system axioms for `(lowering, raising)`.
pub fn validate_reedy(rs: &ReedyStructure) -> ReedyValidation {
    let c = &rs.category;
    let mut violations = Vec::new();
    for m in c.morphisms() {
        if c.is_iso(m) && !c.is_identity(m) {
            violations.push(ReedyViolation::NonIdentityIso { m: c.morphism_id(m).to_string() });
        }
    }
    for &m in &rs.lowering.members {
        if !c.is_identity(m) && rs.deg(c.tgt(m)) >= rs.deg(c.src(m)) {
            violations.push(ReedyViolation::LoweringDoesNotLower {
                m: c.morphism_id(m).to_string(),
            });
        }
    }
    for &m in &rs.raising.members {
        if !c.is_identity(m) && rs.deg(c.tgt(m)) <= rs.deg(c.src(m)) {
            violations.push(ReedyViolation::RaisingDoesNotRaise {
                m: c.morphism_id(m).to_string(),
            });
        }
    }
    let fs_report = validate_factorization_system(&rs.factorization_system());
    violations.extend(fs_report.violations.into_iter().map(ReedyViolation::Factorization));
    ReedyValidation { violations }
}

/// The pointwise-minimal degree function compatible with the two classes,
/// computed as longest paths in the constraint digraph: each non-identity
/// raising `x -> y` forces `deg x < deg y` (edge `x -> y`), each non-identity
/// lowering `x -> y` forces `deg y < deg x` (edge `y -> x`). Returns `None`
/// iff the digraph has a cycle.
pub fn synthesize_degree(
    category: &FiniteCategory,
    lowering: &MorphismClass,
    raising: &MorphismClass,
) -> Option<Vec<u32>> {
    let n = category.object_count();
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for &m in &raising.members {
        if !category.is_identity(m) {
            edges.insert((category.src(m), category.tgt(m)));
        }
    }
    for &m in &lowering.members {
        if !category.is_identity(m) {
            edges.insert((category.tgt(m), category.src(m)));
        }
    }
    fn visit(
        v: usize,
        edges: &BTreeSet<(u32, u32)>,
        n: usize,
        deg: &mut Vec<u32>,
        state: &mut Vec<u8>,
    ) -> bool {
        if state[v] == 1 {
            return false;
        }
        if state[v] == 2 {
            return true;
        }
        state[v] = 1;
        let mut best = 0;
        for u in 0..n {
            if edges.contains(&(u as u32, v as u32)) {
                if !visit(u, edges, n, deg, state) {
                    return false;
                }
                best = best.max(deg[u] + 1);
            }
        }
        deg[v] = best;
        state[v] = 2;
        true
    }
    let mut deg = vec![0u32; n];
    let mut state = vec![0u8; n];
    for v in 0..n {
        if !visit(v, &edges, n, &mut deg, &mut state) {
            return None;
        }
    }
    Some(deg)
}

/// The Noether degree data: per object, the length of the longest chain of
/// composable non-isomorphisms starting there.
#[derive(Debug, Clone)]
pub struct NoetherDegree {
    pub bound: Vec<u32>,
}

/// Longest chain of composable non-isomorphisms out of each object, or
/// `None` when a non-isomorphism cycle makes chains unbounded.
pub fn noether_bound(c: &FiniteCategory) -> Option<NoetherDegree> {
    let n = c.object_count();
    let mut edge = vec![vec![false; n]; n];
    for m in c.morphisms() {
        if !c.is_iso(m) {
            edge[c.src(m) as usize][c.tgt(m) as usize] = true;
        }
    }
    fn visit(v: usize, edge: &[Vec<bool>], bound: &mut Vec<u32>, state: &mut Vec<u8>) -> bool {
        if state[v] == 1 {
            return false;
        }
        if state[v] == 2 {
            return true;
        }
        state[v] = 1;
        let mut best = 0;
        for (u, &has) in edge[v].iter().enumerate() {
            if has {
                if !visit(u, edge, bound, state) {
                    return false;
                }
                best = best.max(bound[u] + 1);
            }
        }
        bound[v] = best;
        state[v] = 2;
        true
    }
    let mut bound = vec![0u32; n];
    let mut state = vec![0u8; n];
    for v in 0..n {
        if !visit(v, &edge, &mut bound, &mut state) {
            return None;
        }
    }
    Some(NoetherDegree { bound })
}

/// The latching category `Lat(x)`: the full subcategory of the raising-class
/// comma over `x` minus the identity object, with its inclusion into the
/// base category (sending `g: y -> x` to `y` and a triangle to its carrier).
pub fn latching_category(
    rs: &ReedyStructure,
    x: u32,
) -> Result<(Arc<FiniteCategory>, FunctorData)> {
    let plus = Arc::new(class_subcategory(&rs.category, &rs.raising)?);
    let x_plus = plus.object(rs.category.object_id(x))?;
    let (comma, proj) = comma_over(&plus, x_plus)?;
    let keep: Vec<u32> = comma
        .objects()
        .filter(|&o| {
            let f = plus.morphism(comma.object_id(o)).expect("comma object is a morphism");
            !plus.is_identity(f)
        })
        .collect();
    let lat = Arc::new(full_subcategory(&comma, &keep)?);
    let object_map: Vec<u32> = lat
        .objects()
        .map(|o| {
            let f = plus.morphism(lat.object_id(o)).unwrap();
            rs.category
                .object(plus.object_id(plus.src(f)))
                .expect("shared object ids")
        })
        .collect();
    let morphism_map: Vec<u32> = lat
        .morphisms()
        .map(|m| {
            let cm = comma.morphism(lat.morphism_id(m)).unwrap();
            let h_in_plus = proj.on_morphism(cm);
            rs.category
                .morphism(plus.morphism_id(h_in_plus))
                .expect("raising subcategory morphisms exist in the base")
        })
        .collect();
    let incl = FunctorData::new(lat.clone(), rs.category.clone(), object_map, morphism_map)?;
    Ok((lat, incl))
}

/// The matching category `Mat(x)`: the lowering-class comma under `x` minus
/// the identity, with its projection into the base category.
pub fn matching_category(
    rs: &ReedyStructure,
    x: u32,
) -> Result<(Arc<FiniteCategory>, FunctorData)> {
    let minus = Arc::new(class_subcategory(&rs.category, &rs.lowering)?);
    let x_minus = minus.object(rs.category.object_id(x))?;
    let (comma, proj) = comma_under(&minus, x_minus)?;
    let keep: Vec<u32> = comma
        .objects()
        .filter(|&o| {
            let f = minus.morphism(comma.object_id(o)).expect("comma object is a morphism");
            !minus.is_identity(f)
        })
        .collect();
    let mat = Arc::new(full_subcategory(&comma, &keep)?);
    let object_map: Vec<u32> = mat
        .objects()
        .map(|o| {
            let f = minus.morphism(mat.object_id(o)).unwrap();
            rs.category
                .object(minus.object_id(minus.tgt(f)))
                .expect("shared object ids")
        })
        .collect();
    let morphism_map: Vec<u32> = mat
        .morphisms()
        .map(|m| {
            let cm = comma.morphism(mat.morphism_id(m)).unwrap();
            let h_in_minus = proj.on_morphism(cm);
            rs.category
                .morphism(minus.morphism_id(h_in_minus))
                .expect("lowering subcategory morphisms exist in the base")
        })
        .collect();
    let incl = FunctorData::new(mat.clone(), rs.category.clone(), object_map, morphism_map)?;
    Ok((mat, incl))
}

/// The wide subcategory carried by a morphism class (same objects, member
/// morphisms; the class must contain identities and be composition closed).
pub fn class_subcategory(c: &FiniteCategory, class: &MorphismClass) -> Result<FiniteCategory> {
    let mut b = crate::fincat::CategoryBuilder::new();
    for o in c.objects() {
        b.object(c.object_id(o))?;
        if !class.contains(c.identity(o)) {
            return Err(Error::Structural(format!(
                "class misses the identity at `{}`",
                c.object_id(o)
            )));
        }
    }
    for &m in &class.members {
        b.morphism(c.morphism_id(m), c.object_id(c.src(m)), c.object_id(c.tgt(m)))?;
    }
    for o in c.objects() {
        b.identity(c.object_id(o), c.morphism_id(c.identity(o)))?;
    }
    for &f in &class.members {
        for &g in &class.members {
            if c.tgt(f) == c.src(g) {
                if let Some(h) = c.compose(g, f) {
                    if !class.contains(h) {
                        return Err(Error::Structural(format!(
                            "class not closed under composition at `{}` ∘ `{}`",
                            c.morphism_id(g),
                            c.morphism_id(f)
                        )));
                    }
                    b.compose(c.morphism_id(g), c.morphism_id(f), c.morphism_id(h))?;
                }
            }
        }
    }
    b.finish()
}

/// One step of a good filtration: the object added and the induced Reedy
/// structure on the prefix.
#[derive(Debug, Clone)]
pub struct FiltrationStep {
    pub added: u32,
    pub prefix: Arc<FiniteCategory>,
    pub prefix_reedy: ReedyStructure,
}

/// The good filtration of a Reedy structure: objects sorted by
/// (degree, object id), each prefix a Reedy category under restriction.
pub fn good_filtration(rs: &ReedyStructure) -> Result<Vec<FiltrationStep>> {
    let c = &rs.category;
    let mut order: Vec<u32> = c.objects().collect();
    order.sort_by(|&a, &b| (rs.deg(a), c.object_id(a)).cmp(&(rs.deg(b), c.object_id(b))));
    let mut steps = Vec::new();
    for k in 1..=order.len() {
        let prefix_objs = &order[..k];
        let sub = Arc::new(full_subcategory(c, prefix_objs)?);
        let lowering = MorphismClass::from_indices(sub.morphisms().filter(|&m| {
            let base = c.morphism(sub.morphism_id(m)).unwrap();
            rs.lowering.contains(base)
        }));
        let raising = MorphismClass::from_indices(sub.morphisms().filter(|&m| {
            let base = c.morphism(sub.morphism_id(m)).unwrap();
            rs.raising.contains(base)
        }));
        let degree = sub
            .objects()
            .map(|o| rs.deg(c.object(sub.object_id(o)).unwrap()))
            .collect();
        let prefix_reedy = ReedyStructure::new(sub.clone(), lowering, raising, degree)?;
        steps.push(FiltrationStep { added: order[k - 1], prefix: sub, prefix_reedy });
    }
    Ok(steps)
}

/// Objects of the Reedy category ordered by the good filtration discipline.
pub fn filtration_order(rs: &ReedyStructure) -> Vec<u32> {
    let c = &rs.category;
    let mut order: Vec<u32> = c.objects().collect();
    order.sort_by(|&a, &b| (rs.deg(a), c.object_id(a)).cmp(&(rs.deg(b), c.object_id(b))));
    order
}

#[derive(Debug, Clone)]
pub struct ImmersionReport {
    pub full: bool,
    pub faithful: bool,
    pub injective_on_objects: bool,
    /// closed immersions: unique lifts for maps out of the image;
    /// open immersions: unique lifts for maps into the image
    pub unique_lifts: bool,
    pub lift_failure: Option<String>,
    /// the equivalent (co)sieve characterization, for cross-validation
    pub sieve_characterization: bool,
}

impl ImmersionReport {
    pub fn ok(&self) -> bool {
        self.full && self.faithful && self.injective_on_objects && self.unique_lifts
    }
}

fn fullness_faithfulness(f: &FunctorData) -> (bool, bool, bool) {
    let (s, t) = (&f.source, &f.target);
    let mut injective = true;
    for a in s.objects() {
        for b in s.objects() {
            if a != b && f.on_object(a) == f.on_object(b) {
                injective = false;
            }
        }
    }
    let mut full = true;
    let mut faithful = true;
    for a in s.objects() {
        for b in s.objects() {
            let (fa, fb) = (f.on_object(a), f.on_object(b));
            let images: Vec<u32> = s.hom(a, b).iter().map(|&m| f.on_morphism(m)).collect();
            let mut sorted = images.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != images.len() {
                faithful = false;
            }
            for &g in t.hom(fa, fb) {
                if !images.contains(&g) {
                    full = false;
                }
            }
        }
    }
    (full, faithful, injective)
}

/// Closed immersion check: full, faithful, injective on objects, and every
/// base map out of the image lifts uniquely. Cross-validated against the
/// cosieve characterization (the image of each under-category is closed
/// under postcomposition, and the functor is faithful).
pub fn check_closed_immersion(f: &FunctorData) -> ImmersionReport {
    let (full, faithful, injective) = fullness_faithfulness(f);
    let (s, t) = (&f.source, &f.target);
    let mut unique_lifts = true;
    let mut lift_failure = None;
    for d in s.objects() {
        for g in t.hom_from(f.on_object(d)) {
            let lifts = s
                .hom_from(d)
                .into_iter()
                .filter(|&m| f.on_morphism(m) == g)
                .count();
            if lifts != 1 {
                unique_lifts = false;
                lift_failure.get_or_insert_with(|| {
                    format!(
                        "map `{}` out of the image of `{}` has {} lifts",
                        t.morphism_id(g),
                        s.object_id(d),
                        lifts
                    )
                });
            }
        }
    }
    let mut cosieve = true;
    for d in s.objects() {
        for g in t.hom_from(f.on_object(d)) {
            let g_in_image = s.hom_from(d).into_iter().any(|m| f.on_morphism(m) == g);
            if !g_in_image {
                continue;
            }
            for h in t.hom_from(t.tgt(g)) {
                if let Some(hg) = t.compose(h, g) {
                    let hg_in = s.hom_from(d).into_iter().any(|m| f.on_morphism(m) == hg);
                    if !hg_in {
                        cosieve = false;
                    }
                }
            }
        }
    }
    ImmersionReport {
        full,
        faithful,
        injective_on_objects: injective,
        unique_lifts,
        lift_failure,
        sieve_characterization: cosieve && faithful,
    }
}

/// Open immersion check, dual to the closed one.
pub fn check_open_immersion(f: &FunctorData) -> ImmersionReport {
    let (full, faithful, injective) = fullness_faithfulness(f);
    let (s, t) = (&f.source, &f.target);
    let mut unique_lifts = true;
    let mut lift_failure = None;
    for d in s.objects() {
        for g in t.hom_into(f.on_object(d)) {
            let lifts = s
                .hom_into(d)
                .into_iter()
                .filter(|&m| f.on_morphism(m) == g)
                .count();
            if lifts != 1 {
                unique_lifts = false;
                lift_failure.get_or_insert_with(|| {
                    format!(
                        "map `{}` into the image of `{}` has {} lifts",
                        t.morphism_id(g),
                        s.object_id(d),
                        lifts
                    )
                });
            }
        }
    }
    let mut sieve = true;
    for d in s.objects() {
        for g in t.hom_into(f.on_object(d)) {
            let g_in_image = s.hom_into(d).into_iter().any(|m| f.on_morphism(m) == g);
            if !g_in_image {
                continue;
            }
            for h in t.hom_into(t.src(g)) {
                if let Some(gh) = t.compose(g, h) {
                    let gh_in = s.hom_into(d).into_iter().any(|m| f.on_morphism(m) == gh);
                    if !gh_in {
                        sieve = false;
                    }
                }
            }
        }
    }
    ImmersionReport {
        full,
        faithful,
        injective_on_objects: injective,
        unique_lifts,
        lift_failure,
        sieve_characterization: sieve && faithful,
    }
}

/// The two Reedy structures every `[n]` carries.
pub fn chain_direct(n: usize) -> ReedyStructure {
    ReedyStructure::direct(Arc::new(crate::fincat::chain(n))).expect("chains are direct")
}

pub fn chain_inverse(n: usize) -> ReedyStructure {
    ReedyStructure::inverse(Arc::new(crate::fincat::chain(n))).expect("chains are inverse")
}

/// Span with both arrows raising (deg b = 0, deg a = deg c = 1).
pub fn span_raising() -> ReedyStructure {
    ReedyStructure::direct(Arc::new(crate::fincat::span())).expect("span is direct")
}

/// Span with both arrows lowering (deg b = 1, deg a = deg c = 0).
pub fn span_lowering() -> ReedyStructure {
    ReedyStructure::inverse(Arc::new(crate::fincat::span())).expect("span is inverse")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{chain, discrete, span, validate_category, CategoryBuilder};

    #[test]
    fn isos_all_maps_is_a_factorization_system() {
        let c = Arc::new(chain(2));
        let fs = FactorizationSystem {
            category: c.clone(),
            left: MorphismClass::isos(&c),
            right: MorphismClass::all(&c),
        };
        let rep = validate_factorization_system(&fs);
        assert!(rep.ok(), "{:?}", rep.violations);
        let f = c.morphism("0<=2").unwrap();
        let ch = rep.chosen[f as usize].clone().unwrap();
        assert!(c.is_identity(ch.l));
        assert_eq!(ch.r, f);
    }

    #[test]
    fn span_all_all_fails_uniqueness() {
        let c = Arc::new(span());
        let fs = FactorizationSystem {
            category: c.clone(),
            left: MorphismClass::all(&c),
            right: MorphismClass::all(&c),
        };
        let rep = validate_factorization_system(&fs);
        assert!(!rep.ok());
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, FactorizationViolation::NotUnique { m, .. } if m == "l")));
    }

    #[test]
    fn chain_structures_validate() {
        for rs in [chain_direct(3), chain_inverse(3)] {
            let rep = validate_reedy(&rs);
            assert!(rep.ok(), "{:?}", rep.violations);
        }
        assert_eq!(chain_direct(3).degree, vec![0, 1, 2, 3]);
        assert_eq!(chain_inverse(3).degree, vec![3, 2, 1, 0]);
    }

    #[test]
    fn span_structures_validate_and_mixed_class_fails() {
        for rs in [span_raising(), span_lowering()] {
            assert!(validate_reedy(&rs).ok());
        }
        let rs = span_raising();
        assert_eq!(rs.deg(rs.category.object("b").unwrap()), 0);
        // put l in the lowering class as well: monotonicity breaks
        let c = rs.category.clone();
        let l = c.morphism("l").unwrap();
        let mut lowering = MorphismClass::identities(&c);
        lowering.members.insert(l);
        let bad = ReedyStructure::new(c, lowering, rs.raising.clone(), rs.degree.clone()).unwrap();
        assert!(!validate_reedy(&bad).ok());
    }

    #[test]
    fn synthesize_degree_examples() {
        let d = discrete(&["x", "y"]);
        let deg =
            synthesize_degree(&d, &MorphismClass::identities(&d), &MorphismClass::all(&d)).unwrap();
        assert_eq!(deg, vec![0, 0]);
        // a raising loop pair x -> y -> x has no degree function
        let mut b = CategoryBuilder::new();
        b.object("x").unwrap();
        b.object("y").unwrap();
        for (id, s, t) in [("idx", "x", "x"), ("idy", "y", "y"), ("u", "x", "y"), ("v", "y", "x")] {
            b.morphism(id, s, t).unwrap();
        }
        b.identity("x", "idx").unwrap();
        b.identity("y", "idy").unwrap();
        for (g, f, h) in [
            ("idx", "idx", "idx"),
            ("idy", "idy", "idy"),
            ("u", "idx", "u"),
            ("idy", "u", "u"),
            ("v", "idy", "v"),
            ("idx", "v", "v"),
            ("v", "u", "idx"),
            ("u", "v", "idy"),
        ] {
            b.compose(g, f, h).unwrap();
        }
        let c = b.finish().unwrap();
        let raising = MorphismClass::from_ids(&c, &["idx", "idy", "u", "v"]).unwrap();
        assert_eq!(synthesize_degree(&c, &MorphismClass::identities(&c), &raising), None);
    }

    #[test]
    fn synthesized_degree_passes_validate_reedy() {
        for cat in [Arc::new(chain(3)), Arc::new(span())] {
            let lowering = MorphismClass::identities(&cat);
            let raising = MorphismClass::all(&cat);
            let deg = synthesize_degree(&cat, &lowering, &raising).unwrap();
            let rs = ReedyStructure::new(cat, lowering, raising, deg).unwrap();
            assert!(validate_reedy(&rs).ok());
        }
    }

    #[test]
    fn noether_bound_examples() {
        let c = chain(2);
        let nb = noether_bound(&c).unwrap();
        let idx = |s: &str| c.object(s).unwrap() as usize;
        assert_eq!(nb.bound[idx("0")], 2);
        assert_eq!(nb.bound[idx("1")], 1);
        assert_eq!(nb.bound[idx("2")], 0);
        // one-object group: all endos isos, bound 0
        let mut b = CategoryBuilder::new();
        b.object("g").unwrap();
        b.morphism("e", "g", "g").unwrap();
        b.morphism("s", "g", "g").unwrap();
        b.identity("g", "e").unwrap();
        for (g, f, h) in [("e", "e", "e"), ("e", "s", "s"), ("s", "e", "s"), ("s", "s", "e")] {
            b.compose(g, f, h).unwrap();
        }
        let grp = b.finish().unwrap();
        assert!(validate_category(&grp).ok());
        assert_eq!(noether_bound(&grp).unwrap().bound, vec![0]);
        // non-iso idempotent: no bound
        let mut b = CategoryBuilder::new();
        b.object("x").unwrap();
        b.morphism("id", "x", "x").unwrap();
        b.morphism("e", "x", "x").unwrap();
        b.identity("x", "id").unwrap();
        for (g, f, h) in [("id", "id", "id"), ("id", "e", "e"), ("e", "id", "e"), ("e", "e", "e")] {
            b.compose(g, f, h).unwrap();
        }
        let idem = b.finish().unwrap();
        assert!(validate_category(&idem).ok());
        assert!(noether_bound(&idem).is_none());
    }

    #[test]
    fn noether_grading_properties_hold() {
        for cat in [chain(3), span()] {
            let nb = noether_bound(&cat).unwrap();
            for a in cat.objects() {
                for b in cat.objects() {
                    if nb.bound[a as usize] < nb.bound[b as usize] {
                        assert!(cat.hom(a, b).is_empty());
                    }
                    if nb.bound[a as usize] == nb.bound[b as usize] {
                        for &m in cat.hom(a, b) {
                            assert!(cat.is_iso(m));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn latching_matching_categories() {
        let rs = chain_direct(2);
        let o0 = rs.category.object("0").unwrap();
        let (lat0, _) = latching_category(&rs, o0).unwrap();
        assert_eq!(lat0.object_count(), 0);
        // Lat(k) in [n] direct is isomorphic to [k-1]
        let o2 = rs.category.object("2").unwrap();
        let (lat2, incl) = latching_category(&rs, o2).unwrap();
        assert_eq!(lat2.object_count(), 2);
        assert_eq!(lat2.morphisms().filter(|&m| !lat2.is_identity(m)).count(), 1);
        assert!(incl.validate().is_empty());
        let rsi = chain_inverse(2);
        let o0i = rsi.category.object("0").unwrap();
        let (mat0, mincl) = matching_category(&rsi, o0i).unwrap();
        assert_eq!(mat0.object_count(), 2);
        assert!(mincl.validate().is_empty());
    }

    #[test]
    fn good_filtration_properties() {
        for rs in [chain_direct(1), span_raising(), chain_direct(3), chain_inverse(2)] {
            let steps = good_filtration(&rs).unwrap();
            assert_eq!(steps.len(), rs.category.object_count());
            for (k, step) in steps.iter().enumerate() {
                assert_eq!(step.prefix.object_count(), k + 1);
                assert!(validate_reedy(&step.prefix_reedy).ok());
            }
        }
        let rs = span_raising();
        let added: Vec<String> = good_filtration(&rs)
            .unwrap()
            .iter()
            .map(|s| rs.category.object_id(s.added).to_string())
            .collect();
        assert_eq!(added, vec!["b", "a", "c"]);
    }

    #[test]
    fn immersion_checks() {
        let c = Arc::new(chain(1));
        let idf = FunctorData::identity(c.clone());
        assert!(check_closed_immersion(&idf).ok());
        assert!(check_open_immersion(&idf).ok());
        // {1} into [1]: closed immersion, not an open immersion
        let sub = Arc::new(full_subcategory(&c, &[c.object("1").unwrap()]).unwrap());
        let incl = FunctorData::new(
            sub.clone(),
            c.clone(),
            vec![c.object("1").unwrap()],
            vec![c.morphism("1<=1").unwrap()],
        )
        .unwrap();
        let closed = check_closed_immersion(&incl);
        assert!(closed.ok(), "{closed:?}");
        assert!(closed.sieve_characterization);
        assert!(!check_open_immersion(&incl).ok());
    }

    #[test]
    fn non_full_subcategory_fails_fullness() {
        let mut b = CategoryBuilder::new();
        b.object("x").unwrap();
        b.object("y").unwrap();
        for (id, s, t) in [("idx", "x", "x"), ("idy", "y", "y"), ("u", "x", "y"), ("v", "x", "y")] {
            b.morphism(id, s, t).unwrap();
        }
        b.identity("x", "idx").unwrap();
        b.identity("y", "idy").unwrap();
        for (g, f, h) in [
            ("idx", "idx", "idx"),
            ("idy", "idy", "idy"),
            ("u", "idx", "u"),
            ("idy", "u", "u"),
            ("v", "idx", "v"),
            ("idy", "v", "v"),
        ] {
            b.compose(g, f, h).unwrap();
        }
        let t = Arc::new(b.finish().unwrap());
        let mut b = CategoryBuilder::new();
        b.object("x").unwrap();
        b.object("y").unwrap();
        for (id, s2, t2) in [("idx", "x", "x"), ("idy", "y", "y"), ("u", "x", "y")] {
            b.morphism(id, s2, t2).unwrap();
        }
        b.identity("x", "idx").unwrap();
        b.identity("y", "idy").unwrap();
        for (g, f, h) in [
            ("idx", "idx", "idx"),
            ("idy", "idy", "idy"),
            ("u", "idx", "u"),
            ("idy", "u", "u"),
        ] {
            b.compose(g, f, h).unwrap();
        }
        let s = Arc::new(b.finish().unwrap());
        let incl = FunctorData::new(
            s.clone(),
            t.clone(),
            vec![t.object("x").unwrap(), t.object("y").unwrap()],
            vec![t.morphism("idx").unwrap(), t.morphism("idy").unwrap(), t.morphism("u").unwrap()],
        )
        .unwrap();
        assert!(!check_closed_immersion(&incl).full);
    }
}
