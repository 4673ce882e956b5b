//! Finite categories presented by explicit object lists, morphism lists and
//! composition tables, together with functors, natural transformations,
//! comma categories and elementary universal-object detection.
//!
//! Object and morphism ids are opaque strings. Composition is stored as a
//! table (or, for very large derived categories, as a pluggable closure), so
//! lookups are cheap and brute-force checking stays simple.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::{Error, Result};

/// A morphism record: id plus source/target object indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorRec {
    pub id: String,
    pub src: u32,
    pub tgt: u32,
}

/// Composition backend. Explicitly constructed categories carry a table;
/// materialized section categories compute composites on demand through the
/// fiber tables (storing the full table would be quadratic in morphisms).
#[derive(Clone)]
enum Composition {
    Table(HashMap<(u32, u32), u32>),
    Virtual(Arc<dyn Fn(u32, u32) -> Option<u32> + Send + Sync>),
}

impl std::fmt::Debug for Composition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Composition::Table(t) => write!(f, "Table({} entries)", t.len()),
            Composition::Virtual(_) => write!(f, "Virtual"),
        }
    }
}

/// A finite category: the universe every other type in this crate lives over.
///
/// Invariants (checked by [`FiniteCategory::validate`], not by construction):
/// composition is associative wherever defined, identities are two-sided
/// units, and the composite of `f: a -> b` and `g: b -> c` has source `a`
/// and target `c`.
#[derive(Debug, Clone)]
pub struct FiniteCategory {
    objects: Vec<String>,
    obj_index: HashMap<String, u32>,
    mors: Vec<MorRec>,
    mor_index: HashMap<String, u32>,
    identities: Vec<u32>,
    comp: Composition,
    /// hom-sets keyed by (src, tgt), each a sorted list of morphism indices
    hom: HashMap<(u32, u32), Vec<u32>>,
    /// isomorphism flags, precomputed
    iso: Vec<bool>,
}

impl FiniteCategory {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.mors.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = u32> {
        0..self.objects.len() as u32
    }

    pub fn morphisms(&self) -> impl Iterator<Item = u32> {
        0..self.mors.len() as u32
    }

    pub fn object_id(&self, o: u32) -> &str {
        &self.objects[o as usize]
    }

    pub fn morphism_id(&self, m: u32) -> &str {
        &self.mors[m as usize].id
    }

    pub fn object(&self, id: &str) -> Result<u32> {
        self.obj_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    pub fn morphism(&self, id: &str) -> Result<u32> {
        self.mor_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(id.to_string()))
    }

    pub fn src(&self, m: u32) -> u32 {
        self.mors[m as usize].src
    }

    pub fn tgt(&self, m: u32) -> u32 {
        self.mors[m as usize].tgt
    }

    pub fn identity(&self, o: u32) -> u32 {
        self.identities[o as usize]
    }

    pub fn is_identity(&self, m: u32) -> bool {
        let s = self.src(m);
        self.identities[s as usize] == m
    }

    /// The composite `g ∘ f`, defined when `tgt(f) = src(g)`.
    pub fn compose(&self, g: u32, f: u32) -> Option<u32> {
        if self.tgt(f) != self.src(g) {
            return None;
        }
        match &self.comp {
            Composition::Table(t) => t.get(&(g, f)).copied(),
            Composition::Virtual(c) => c(g, f),
        }
    }

    /// Morphisms from `a` to `b`, sorted by index.
    pub fn hom(&self, a: u32, b: u32) -> &[u32] {
        static EMPTY: Vec<u32> = Vec::new();
        self.hom.get(&(a, b)).unwrap_or(&EMPTY)
    }

    pub fn is_iso(&self, m: u32) -> bool {
        self.iso[m as usize]
    }

    /// The inverse of an isomorphism, if `m` is one.
    pub fn inverse(&self, m: u32) -> Option<u32> {
        if !self.iso[m as usize] {
            return None;
        }
        let (s, t) = (self.src(m), self.tgt(m));
        self.hom(t, s).iter().copied().find(|&g| {
            self.compose(g, m) == Some(self.identity(s))
                && self.compose(m, g) == Some(self.identity(t))
        })
    }

    /// True when all isomorphisms are identities (the Reedy condition).
    pub fn isos_are_identities(&self) -> bool {
        self.morphisms().all(|m| !self.iso[m as usize] || self.is_identity(m))
    }

    fn compute_isos(
        mors: &[MorRec],
        identities: &[u32],
        hom: &HashMap<(u32, u32), Vec<u32>>,
        comp: &Composition,
    ) -> Vec<bool> {
        let compose = |g: u32, f: u32| -> Option<u32> {
            match comp {
                Composition::Table(t) => t.get(&(g, f)).copied(),
                Composition::Virtual(c) => c(g, f),
            }
        };
        mors.iter()
            .enumerate()
            .map(|(i, m)| {
                let i = i as u32;
                let id_s = identities[m.src as usize];
                let id_t = identities[m.tgt as usize];
                hom.get(&(m.tgt, m.src)).is_some_and(|cands| {
                    cands.iter().any(|&g| {
                        compose(g, i) == Some(id_s) && compose(i, g) == Some(id_t)
                    })
                })
            })
            .collect()
    }
}

/// Builder for explicitly presented categories.
///
/// The builder enforces only structural well-formedness (unique ids, valid
/// references, identities assigned everywhere, table entries on composable
/// pairs). Categorical laws are checked by [`FiniteCategory::validate`], so
/// deliberately broken tables can be constructed and fed to the validator.
pub struct CategoryBuilder {
    objects: Vec<String>,
    obj_index: HashMap<String, u32>,
    mors: Vec<MorRec>,
    mor_index: HashMap<String, u32>,
    identity_of: HashMap<u32, u32>,
    comp: HashMap<(u32, u32), u32>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        CategoryBuilder {
            objects: Vec::new(),
            obj_index: HashMap::new(),
            mors: Vec::new(),
            mor_index: HashMap::new(),
            identity_of: HashMap::new(),
            comp: HashMap::new(),
        }
    }

    pub fn object(&mut self, id: &str) -> Result<&mut Self> {
        if self.obj_index.contains_key(id) {
            return Err(Error::DuplicateId(id.to_string()));
        }
        self.obj_index.insert(id.to_string(), self.objects.len() as u32);
        self.objects.push(id.to_string());
        Ok(self)
    }

    pub fn morphism(&mut self, id: &str, src: &str, tgt: &str) -> Result<&mut Self> {
        if self.mor_index.contains_key(id) {
            return Err(Error::DuplicateId(id.to_string()));
        }
        let s = *self
            .obj_index
            .get(src)
            .ok_or_else(|| Error::UnknownObject(src.to_string()))?;
        let t = *self
            .obj_index
            .get(tgt)
            .ok_or_else(|| Error::UnknownObject(tgt.to_string()))?;
        self.mor_index.insert(id.to_string(), self.mors.len() as u32);
        self.mors.push(MorRec { id: id.to_string(), src: s, tgt: t });
        Ok(self)
    }

    /// Declare a morphism as the identity of an object (must be an endo on it).
    pub fn identity(&mut self, obj: &str, mor: &str) -> Result<&mut Self> {
        let o = *self
            .obj_index
            .get(obj)
            .ok_or_else(|| Error::UnknownObject(obj.to_string()))?;
        let m = *self
            .mor_index
            .get(mor)
            .ok_or_else(|| Error::UnknownMorphism(mor.to_string()))?;
        let rec = &self.mors[m as usize];
        if rec.src != o || rec.tgt != o {
            return Err(Error::Structural(format!(
                "identity `{mor}` of `{obj}` must be an endomorphism of it"
            )));
        }
        self.identity_of.insert(o, m);
        Ok(self)
    }

    /// Record `g ∘ f = h`. Rejected unless `tgt(f) = src(g)`.
    pub fn compose(&mut self, g: &str, f: &str, h: &str) -> Result<&mut Self> {
        let gi = *self
            .mor_index
            .get(g)
            .ok_or_else(|| Error::UnknownMorphism(g.to_string()))?;
        let fi = *self
            .mor_index
            .get(f)
            .ok_or_else(|| Error::UnknownMorphism(f.to_string()))?;
        let hi = *self
            .mor_index
            .get(h)
            .ok_or_else(|| Error::UnknownMorphism(h.to_string()))?;
        if self.mors[fi as usize].tgt != self.mors[gi as usize].src {
            return Err(Error::Structural(format!(
                "compose({g},{f}) declared on a non-composable pair"
            )));
        }
        self.comp.insert((gi, fi), hi);
        Ok(self)
    }

    pub fn finish(self) -> Result<FiniteCategory> {
        let mut identities = Vec::with_capacity(self.objects.len());
        for (o, id) in self.objects.iter().enumerate() {
            match self.identity_of.get(&(o as u32)) {
                Some(&m) => identities.push(m),
                None => {
                    return Err(Error::Structural(format!(
                        "object `{id}` has no identity assigned"
                    )))
                }
            }
        }
        let mut hom: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for (i, m) in self.mors.iter().enumerate() {
            hom.entry((m.src, m.tgt)).or_default().push(i as u32);
        }
        let comp = Composition::Table(self.comp);
        let iso = FiniteCategory::compute_isos(&self.mors, &identities, &hom, &comp);
        Ok(FiniteCategory {
            objects: self.objects,
            obj_index: self.obj_index,
            mors: self.mors,
            mor_index: self.mor_index,
            identities,
            comp,
            hom,
            iso,
        })
    }
}

impl Default for CategoryBuilder {
    fn default() -> Self {
        Self::new()
    }
}

/// Build a category whose composition is computed on demand.
///
/// Used for materialized section categories, where the composition table
/// would be quadratic in the (large) number of morphisms.
pub fn virtual_category(
    objects: Vec<String>,
    mors: Vec<MorRec>,
    identities: Vec<u32>,
    compose: Arc<dyn Fn(u32, u32) -> Option<u32> + Send + Sync>,
) -> Result<FiniteCategory> {
    let mut obj_index = HashMap::new();
    for (i, o) in objects.iter().enumerate() {
        if obj_index.insert(o.clone(), i as u32).is_some() {
            return Err(Error::DuplicateId(o.clone()));
        }
    }
    let mut mor_index = HashMap::new();
    let mut hom: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    for (i, m) in mors.iter().enumerate() {
        if mor_index.insert(m.id.clone(), i as u32).is_some() {
            return Err(Error::DuplicateId(m.id.clone()));
        }
        hom.entry((m.src, m.tgt)).or_default().push(i as u32);
    }
    let comp = Composition::Virtual(compose);
    let iso = FiniteCategory::compute_isos(&mors, &identities, &hom, &comp);
    Ok(FiniteCategory {
        objects,
        obj_index,
        mors,
        mor_index,
        identities,
        comp,
        hom,
        iso,
    })
}

/// One violated law, with morphism ids as witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryViolation {
    /// compose(g, f) missing although tgt(f) = src(g)
    MissingComposite { g: String, f: String },
    /// src/tgt of compose(g,f) differ from src(f)/tgt(g)
    CompositeEndpoints { g: String, f: String, got: String },
    /// identity fails as a left or right unit on the named morphism
    IdentityUnit { id_mor: String, mor: String },
    /// compose(h, compose(g,f)) != compose(compose(h,g), f)
    Associativity { h: String, g: String, f: String },
}

/// Validation report for a [`FiniteCategory`].
#[derive(Debug, Clone, Default)]
pub struct CategoryReport {
    pub violations: Vec<CategoryViolation>,
}

impl CategoryReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check all [`FiniteCategory`] laws exhaustively and report every violation.
pub fn validate_category(c: &FiniteCategory) -> CategoryReport {
    let mut violations = Vec::new();
    // composites: defined exactly on composable pairs, with correct endpoints
    for f in c.morphisms() {
        for g in c.morphisms() {
            if c.tgt(f) != c.src(g) {
                continue;
            }
            match c.compose(g, f) {
                None => violations.push(CategoryViolation::MissingComposite {
                    g: c.morphism_id(g).to_string(),
                    f: c.morphism_id(f).to_string(),
                }),
                Some(h) => {
                    if c.src(h) != c.src(f) || c.tgt(h) != c.tgt(g) {
                        violations.push(CategoryViolation::CompositeEndpoints {
                            g: c.morphism_id(g).to_string(),
                            f: c.morphism_id(f).to_string(),
                            got: c.morphism_id(h).to_string(),
                        });
                    }
                }
            }
        }
    }
    // identity units
    for m in c.morphisms() {
        let id_s = c.identity(c.src(m));
        let id_t = c.identity(c.tgt(m));
        if c.compose(m, id_s) != Some(m) {
            violations.push(CategoryViolation::IdentityUnit {
                id_mor: c.morphism_id(id_s).to_string(),
                mor: c.morphism_id(m).to_string(),
            });
        }
        if c.compose(id_t, m) != Some(m) {
            violations.push(CategoryViolation::IdentityUnit {
                id_mor: c.morphism_id(id_t).to_string(),
                mor: c.morphism_id(m).to_string(),
            });
        }
    }
    // associativity over all composable triples
    for f in c.morphisms() {
        for g in c.hom_from(c.tgt(f)) {
            for h in c.hom_from(c.tgt(g)) {
                let gf = c.compose(g, f);
                let hg = c.compose(h, g);
                let left = gf.and_then(|gf| c.compose(h, gf));
                let right = hg.and_then(|hg| c.compose(hg, f));
                if left != right && left.is_some() && right.is_some() {
                    violations.push(CategoryViolation::Associativity {
                        h: c.morphism_id(h).to_string(),
                        g: c.morphism_id(g).to_string(),
                        f: c.morphism_id(f).to_string(),
                    });
                }
            }
        }
    }
    CategoryReport { violations }
}

impl FiniteCategory {
    /// All morphisms with the given source.
    pub fn hom_from(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::new();
        for b in self.objects() {
            out.extend_from_slice(self.hom(a, b));
        }
        out.sort_unstable();
        out
    }

    /// All morphisms with the given target.
    pub fn hom_into(&self, b: u32) -> Vec<u32> {
        let mut out = Vec::new();
        for a in self.objects() {
            out.extend_from_slice(self.hom(a, b));
        }
        out.sort_unstable();
        out
    }

    pub fn validate(&self) -> CategoryReport {
        validate_category(self)
    }
}

/// Functor data between two finite categories; laws checked by `validate`.
#[derive(Debug, Clone)]
pub struct FunctorData {
    pub source: Arc<FiniteCategory>,
    pub target: Arc<FiniteCategory>,
    object_map: Vec<u32>,
    morphism_map: Vec<u32>,
}

impl FunctorData {
    pub fn new(
        source: Arc<FiniteCategory>,
        target: Arc<FiniteCategory>,
        object_map: Vec<u32>,
        morphism_map: Vec<u32>,
    ) -> Result<Self> {
        if object_map.len() != source.object_count()
            || morphism_map.len() != source.morphism_count()
        {
            return Err(Error::Structural(
                "functor maps must cover the whole source category".into(),
            ));
        }
        if let Some(o) = object_map.iter().find(|&&o| o as usize >= target.object_count()) {
            return Err(Error::UnknownObject(format!("index {o}")));
        }
        if let Some(m) = morphism_map.iter().find(|&&m| m as usize >= target.morphism_count()) {
            return Err(Error::UnknownMorphism(format!("index {m}")));
        }
        Ok(FunctorData { source, target, object_map, morphism_map })
    }

    /// Build from id-keyed maps.
    pub fn from_ids(
        source: Arc<FiniteCategory>,
        target: Arc<FiniteCategory>,
        objects: &BTreeMap<String, String>,
        morphisms: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut object_map = vec![0u32; source.object_count()];
        for o in source.objects() {
            let id = source.object_id(o);
            let im = objects
                .get(id)
                .ok_or_else(|| Error::UnknownObject(id.to_string()))?;
            object_map[o as usize] = target.object(im)?;
        }
        let mut morphism_map = vec![0u32; source.morphism_count()];
        for m in source.morphisms() {
            let id = source.morphism_id(m);
            let im = morphisms
                .get(id)
                .ok_or_else(|| Error::UnknownMorphism(id.to_string()))?;
            morphism_map[m as usize] = target.morphism(im)?;
        }
        FunctorData::new(source, target, object_map, morphism_map)
    }

    pub fn identity(c: Arc<FiniteCategory>) -> Self {
        let object_map = (0..c.object_count() as u32).collect();
        let morphism_map = (0..c.morphism_count() as u32).collect();
        FunctorData { source: c.clone(), target: c, object_map, morphism_map }
    }

    pub fn on_object(&self, o: u32) -> u32 {
        self.object_map[o as usize]
    }

    pub fn on_morphism(&self, m: u32) -> u32 {
        self.morphism_map[m as usize]
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &FunctorData) -> Result<FunctorData> {
        if !std::ptr::eq(
            Arc::as_ptr(&other.target),
            Arc::as_ptr(&self.source),
        ) && other.target.object_count() != self.source.object_count()
        {
            return Err(Error::Structural("functor composition endpoint mismatch".into()));
        }
        let object_map = other
            .object_map
            .iter()
            .map(|&o| self.object_map[o as usize])
            .collect();
        let morphism_map = other
            .morphism_map
            .iter()
            .map(|&m| self.morphism_map[m as usize])
            .collect();
        Ok(FunctorData {
            source: other.source.clone(),
            target: self.target.clone(),
            object_map,
            morphism_map,
        })
    }

    /// Exhaustive functor-law check: endpoints, identities, composition.
    pub fn validate(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let (s, t) = (&self.source, &self.target);
        for m in s.morphisms() {
            let fm = self.on_morphism(m);
            if t.src(fm) != self.on_object(s.src(m)) || t.tgt(fm) != self.on_object(s.tgt(m)) {
                bad.push(format!(
                    "endpoints of image of `{}` disagree with image objects",
                    s.morphism_id(m)
                ));
            }
        }
        for o in s.objects() {
            if self.on_morphism(s.identity(o)) != t.identity(self.on_object(o)) {
                bad.push(format!("identity at `{}` not preserved", s.object_id(o)));
            }
        }
        for f in s.morphisms() {
            for g in s.hom_from(s.tgt(f)) {
                if let Some(gf) = s.compose(g, f) {
                    let lhs = self.on_morphism(gf);
                    let rhs = t.compose(self.on_morphism(g), self.on_morphism(f));
                    if Some(lhs) != rhs {
                        bad.push(format!(
                            "composition `{} ∘ {}` not preserved",
                            s.morphism_id(g),
                            s.morphism_id(f)
                        ));
                    }
                }
            }
        }
        bad
    }
}

/// Natural transformation data between two parallel functors.
#[derive(Debug, Clone)]
pub struct NatTransData {
    pub source: FunctorData,
    pub target: FunctorData,
    /// component at each source object, a morphism of the target category
    pub components: Vec<u32>,
}

impl NatTransData {
    pub fn new(source: FunctorData, target: FunctorData, components: Vec<u32>) -> Result<Self> {
        if components.len() != source.source.object_count() {
            return Err(Error::Structural("one component per source object required".into()));
        }
        Ok(NatTransData { source, target, components })
    }

    /// Component endpoints plus every naturality square, exhaustively.
    pub fn validate(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let cat = &self.source.source;
        let t = &self.source.target;
        for o in cat.objects() {
            let c = self.components[o as usize];
            if t.src(c) != self.source.on_object(o) || t.tgt(c) != self.target.on_object(o) {
                bad.push(format!("component at `{}` has wrong endpoints", cat.object_id(o)));
            }
        }
        for m in cat.morphisms() {
            let (a, b) = (cat.src(m), cat.tgt(m));
            let lhs = t.compose(self.components[b as usize], self.source.on_morphism(m));
            let rhs = t.compose(self.target.on_morphism(m), self.components[a as usize]);
            if lhs != rhs || lhs.is_none() {
                bad.push(format!("naturality fails at `{}`", cat.morphism_id(m)));
            }
        }
        bad
    }
}

/// A set of morphisms of a fixed category, the raw carrier for factorization
/// classes, Reedy classes and model classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismClass {
    pub members: BTreeSet<u32>,
}

impl MorphismClass {
    pub fn from_indices(members: impl IntoIterator<Item = u32>) -> Self {
        MorphismClass { members: members.into_iter().collect() }
    }

    pub fn from_ids(c: &FiniteCategory, ids: &[&str]) -> Result<Self> {
        let mut members = BTreeSet::new();
        for id in ids {
            members.insert(c.morphism(id)?);
        }
        Ok(MorphismClass { members })
    }

    pub fn all(c: &FiniteCategory) -> Self {
        MorphismClass { members: c.morphisms().collect() }
    }

    pub fn identities(c: &FiniteCategory) -> Self {
        MorphismClass { members: c.objects().map(|o| c.identity(o)).collect() }
    }

    pub fn isos(c: &FiniteCategory) -> Self {
        MorphismClass { members: c.morphisms().filter(|&m| c.is_iso(m)).collect() }
    }

    pub fn contains(&self, m: u32) -> bool {
        self.members.contains(&m)
    }

    pub fn contains_all_isos(&self, c: &FiniteCategory) -> bool {
        c.morphisms().all(|m| !c.is_iso(m) || self.contains(m))
    }

    pub fn closed_under_composition(&self, c: &FiniteCategory) -> Option<(u32, u32)> {
        for &f in &self.members {
            for &g in &self.members {
                if c.tgt(f) == c.src(g) {
                    if let Some(gf) = c.compose(g, f) {
                        if !self.contains(gf) {
                            return Some((g, f));
                        }
                    }
                }
            }
        }
        None
    }
}

/// The comma category `x \ C` of morphisms out of `x`, with its projection
/// to `C` sending `x -> y` to `y`.
///
/// Objects keep the id of their underlying morphism; a morphism of the comma
/// from `f` to `f'` is a triangle `h ∘ f = f'` and is labeled `"f|h"`.
pub fn comma_under(c: &Arc<FiniteCategory>, x: u32) -> Result<(Arc<FiniteCategory>, FunctorData)> {
    if x as usize >= c.object_count() {
        return Err(Error::UnknownObject(format!("index {x}")));
    }
    let objs: Vec<u32> = c.hom_from(x);
    build_comma(c, &objs, |f, h| c.compose(h, f), |f| c.tgt(f))
}

/// The comma category `C / x` of morphisms into `x`, with projection sending
/// `f: y -> x` to `y`. A morphism from `f` to `f'` is `h: y -> y'` with
/// `f' ∘ h = f`, labeled `"f|h"`.
pub fn comma_over(c: &Arc<FiniteCategory>, x: u32) -> Result<(Arc<FiniteCategory>, FunctorData)> {
    if x as usize >= c.object_count() {
        return Err(Error::UnknownObject(format!("index {x}")));
    }
    let objs: Vec<u32> = c.hom_into(x);
    // triangle direction: comma morphism f -> f' carried by h with f'∘h = f
    build_comma_over(c, &objs)
}

fn build_comma(
    c: &Arc<FiniteCategory>,
    objs: &[u32],
    // act(f, h): the comma object reached from f along the carrier h
    act: impl Fn(u32, u32) -> Option<u32>,
    proj_obj: impl Fn(u32) -> u32,
) -> Result<(Arc<FiniteCategory>, FunctorData)> {
    let mut b = CategoryBuilder::new();
    for &f in objs {
        b.object(c.morphism_id(f))?;
    }
    // morphisms: (f, h) with act(f, h) = f'
    let mut carriers = Vec::new();
    for &f in objs {
        for h in c.hom_from(proj_obj(f)) {
            if let Some(f2) = act(f, h) {
                if objs.contains(&f2) {
                    let id = format!("{}|{}", c.morphism_id(f), c.morphism_id(h));
                    b.morphism(&id, c.morphism_id(f), c.morphism_id(f2))?;
                    carriers.push((f, h, f2, id));
                }
            }
        }
    }
    for &f in objs {
        let idh = c.identity(proj_obj(f));
        let id = format!("{}|{}", c.morphism_id(f), c.morphism_id(idh));
        b.identity(c.morphism_id(f), &id)?;
    }
    for (f, h, f2, id) in &carriers {
        for (g, k, _g2, id2) in &carriers {
            if *g == *f2 {
                if let Some(kh) = c.compose(*k, *h) {
                    let comp_id = format!("{}|{}", c.morphism_id(*f), c.morphism_id(kh));
                    b.compose(id2, id, &comp_id)?;
                }
            }
        }
    }
    let comma = Arc::new(b.finish()?);
    let object_map: Vec<u32> = objs.iter().map(|&f| proj_obj(f)).collect();
    let mut morphism_map = vec![0u32; comma.morphism_count()];
    for (f, h, f2, id) in &carriers {
        let m = comma.morphism(id)?;
        morphism_map[m as usize] = *h;
        let _ = (f, f2);
    }
    let proj = FunctorData::new(comma.clone(), c.clone(), object_map, morphism_map)?;
    Ok((comma, proj))
}

fn build_comma_over(
    c: &Arc<FiniteCategory>,
    objs: &[u32],
) -> Result<(Arc<FiniteCategory>, FunctorData)> {
    let mut b = CategoryBuilder::new();
    for &f in objs {
        b.object(c.morphism_id(f))?;
    }
    let mut carriers = Vec::new();
    for &f in objs {
        // comma morphism f -> f2 carried by h: src(f) -> src(f2), f2 ∘ h = f
        for &f2 in objs {
            for &h in c.hom(c.src(f), c.src(f2)) {
                if c.compose(f2, h) == Some(f) {
                    let id = format!("{}|{}", c.morphism_id(f), c.morphism_id(h));
                    b.morphism(&id, c.morphism_id(f), c.morphism_id(f2))?;
                    carriers.push((f, h, f2, id));
                }
            }
        }
    }
    for &f in objs {
        let idh = c.identity(c.src(f));
        let id = format!("{}|{}", c.morphism_id(f), c.morphism_id(idh));
        b.identity(c.morphism_id(f), &id)?;
    }
    for (f, h, f2, id) in &carriers {
        for (g, k, _g2, id2) in &carriers {
            if *g == *f2 {
                if let Some(kh) = c.compose(*k, *h) {
                    let comp_id = format!("{}|{}", c.morphism_id(*f), c.morphism_id(kh));
                    b.compose(id2, id, &comp_id)?;
                }
            }
        }
    }
    let comma = Arc::new(b.finish()?);
    let object_map: Vec<u32> = objs.iter().map(|&f| c.src(f)).collect();
    let mut morphism_map = vec![0u32; comma.morphism_count()];
    for (_f, h, _f2, id) in &carriers {
        let m = comma.morphism(id)?;
        morphism_map[m as usize] = *h;
    }
    let proj = FunctorData::new(comma.clone(), c.clone(), object_map, morphism_map)?;
    Ok((comma, proj))
}

/// The comma category `F / y` of a functor: objects are pairs
/// `(d, g: F(d) -> y)`, morphisms are `φ: d -> d'` with `g' ∘ F(φ) = g`.
/// Object ids are `"d|g"`, morphism ids `"d|g|φ"`. Returns the category
/// plus the object-level pair data in object order.
pub fn functor_comma_over(
    f: &FunctorData,
    y: u32,
) -> Result<(Arc<FiniteCategory>, Vec<(u32, u32)>)> {
    let d_cat = &f.source;
    let c_cat = &f.target;
    let mut b = CategoryBuilder::new();
    let mut pairs = Vec::new();
    for d in d_cat.objects() {
        for &g in c_cat.hom(f.on_object(d), y) {
            b.object(&format!("{}|{}", d_cat.object_id(d), c_cat.morphism_id(g)))?;
            pairs.push((d, g));
        }
    }
    let mut carriers = Vec::new();
    for &(d, g) in &pairs {
        for &(d2, g2) in &pairs {
            for &phi in d_cat.hom(d, d2) {
                if c_cat.compose(g2, f.on_morphism(phi)) == Some(g) {
                    let id = format!(
                        "{}|{}|{}",
                        d_cat.object_id(d),
                        c_cat.morphism_id(g),
                        d_cat.morphism_id(phi)
                    );
                    b.morphism(
                        &id,
                        &format!("{}|{}", d_cat.object_id(d), c_cat.morphism_id(g)),
                        &format!("{}|{}", d_cat.object_id(d2), c_cat.morphism_id(g2)),
                    )?;
                    carriers.push((d, g, d2, g2, phi, id));
                }
            }
        }
    }
    for &(d, g) in &pairs {
        let idp = d_cat.identity(d);
        b.identity(
            &format!("{}|{}", d_cat.object_id(d), c_cat.morphism_id(g)),
            &format!(
                "{}|{}|{}",
                d_cat.object_id(d),
                c_cat.morphism_id(g),
                d_cat.morphism_id(idp)
            ),
        )?;
    }
    for (d, g, d2, g2, phi, id) in &carriers {
        for (e, h, _e2, _h2, psi, id2) in &carriers {
            if e == d2 && h == g2 {
                if let Some(comp) = d_cat.compose(*psi, *phi) {
                    let comp_id = format!(
                        "{}|{}|{}",
                        d_cat.object_id(*d),
                        c_cat.morphism_id(*g),
                        d_cat.morphism_id(comp)
                    );
                    b.compose(id2, id, &comp_id)?;
                }
            }
        }
    }
    Ok((Arc::new(b.finish()?), pairs))
}

/// The comma category `y \ F`: objects are pairs `(g: y -> F(d), d)`,
/// morphisms are `φ: d -> d'` with `F(φ) ∘ g = g'`.
pub fn functor_comma_under(
    f: &FunctorData,
    y: u32,
) -> Result<(Arc<FiniteCategory>, Vec<(u32, u32)>)> {
    let d_cat = &f.source;
    let c_cat = &f.target;
    let mut b = CategoryBuilder::new();
    let mut pairs = Vec::new();
    for d in d_cat.objects() {
        for &g in c_cat.hom(y, f.on_object(d)) {
            b.object(&format!("{}|{}", d_cat.object_id(d), c_cat.morphism_id(g)))?;
            pairs.push((d, g));
        }
    }
    let mut carriers = Vec::new();
    for &(d, g) in &pairs {
        for &(d2, g2) in &pairs {
            for &phi in d_cat.hom(d, d2) {
                if c_cat.compose(f.on_morphism(phi), g) == Some(g2) {
                    let id = format!(
                        "{}|{}|{}",
                        d_cat.object_id(d),
                        c_cat.morphism_id(g),
                        d_cat.morphism_id(phi)
                    );
                    b.morphism(
                        &id,
                        &format!("{}|{}", d_cat.object_id(d), c_cat.morphism_id(g)),
                        &format!("{}|{}", d_cat.object_id(d2), c_cat.morphism_id(g2)),
                    )?;
                    carriers.push((d, g, d2, g2, phi, id));
                }
            }
        }
    }
    for &(d, g) in &pairs {
        let idp = d_cat.identity(d);
        b.identity(
            &format!("{}|{}", d_cat.object_id(d), c_cat.morphism_id(g)),
            &format!(
                "{}|{}|{}",
                d_cat.object_id(d),
                c_cat.morphism_id(g),
                d_cat.morphism_id(idp)
            ),
        )?;
    }
    for (d, g, d2, g2, phi, id) in &carriers {
        for (e, h, _e2, _h2, psi, id2) in &carriers {
            if e == d2 && h == g2 {
                if let Some(comp) = d_cat.compose(*psi, *phi) {
                    let comp_id = format!(
                        "{}|{}|{}",
                        d_cat.object_id(*d),
                        c_cat.morphism_id(*g),
                        d_cat.morphism_id(comp)
                    );
                    b.compose(id2, id, &comp_id)?;
                }
            }
        }
    }
    Ok((Arc::new(b.finish()?), pairs))
}

/// An object with exactly one morphism to every object, least id on ties.
pub fn find_initial(c: &FiniteCategory) -> Option<u32> {
    let mut found: Vec<u32> = c
        .objects()
        .filter(|&i| c.objects().all(|y| c.hom(i, y).len() == 1))
        .collect();
    found.sort_by(|&a, &b| c.object_id(a).cmp(c.object_id(b)));
    found.first().copied()
}

/// An object with exactly one morphism from every object, least id on ties.
pub fn find_terminal(c: &FiniteCategory) -> Option<u32> {
    let mut found: Vec<u32> = c
        .objects()
        .filter(|&t| c.objects().all(|y| c.hom(y, t).len() == 1))
        .collect();
    found.sort_by(|&a, &b| c.object_id(a).cmp(c.object_id(b)));
    found.first().copied()
}

/// Partition of objects into zigzag-connected components. Each component is
/// sorted; components are ordered by their least object id.
pub fn connected_components(c: &FiniteCategory) -> Vec<Vec<u32>> {
    let n = c.object_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for m in c.morphisms() {
        let a = root(&mut parent, c.src(m) as usize);
        let b = root(&mut parent, c.tgt(m) as usize);
        parent[a] = b;
    }
    let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for i in 0..n {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(i as u32);
    }
    let mut comps: Vec<Vec<u32>> = groups.into_values().collect();
    for comp in &mut comps {
        comp.sort_by(|&a, &b| c.object_id(a).cmp(c.object_id(b)));
    }
    comps.sort_by(|a, b| c.object_id(a[0]).cmp(c.object_id(b[0])));
    comps
}

/// The full subcategory on the given objects. Morphism ids are preserved.
pub fn full_subcategory(c: &FiniteCategory, objects: &[u32]) -> Result<FiniteCategory> {
    let keep: BTreeSet<u32> = objects.iter().copied().collect();
    let mut b = CategoryBuilder::new();
    for &o in objects {
        b.object(c.object_id(o))?;
    }
    let kept_mors: Vec<u32> = c
        .morphisms()
        .filter(|&m| keep.contains(&c.src(m)) && keep.contains(&c.tgt(m)))
        .collect();
    for &m in &kept_mors {
        b.morphism(c.morphism_id(m), c.object_id(c.src(m)), c.object_id(c.tgt(m)))?;
    }
    for &o in objects {
        b.identity(c.object_id(o), c.morphism_id(c.identity(o)))?;
    }
    for &f in &kept_mors {
        for &g in &kept_mors {
            if c.tgt(f) == c.src(g) {
                if let Some(h) = c.compose(g, f) {
                    if keep.contains(&c.src(h)) && keep.contains(&c.tgt(h)) {
                        b.compose(c.morphism_id(g), c.morphism_id(f), c.morphism_id(h))?;
                    }
                }
            }
        }
    }
    b.finish()
}

/// The opposite category. Ids are preserved; src and tgt swap.
pub fn opposite(c: &FiniteCategory) -> FiniteCategory {
    let mut b = CategoryBuilder::new();
    for o in c.objects() {
        b.object(c.object_id(o)).unwrap();
    }
    for m in c.morphisms() {
        b.morphism(c.morphism_id(m), c.object_id(c.tgt(m)), c.object_id(c.src(m)))
            .unwrap();
    }
    for o in c.objects() {
        b.identity(c.object_id(o), c.morphism_id(c.identity(o))).unwrap();
    }
    for f in c.morphisms() {
        for g in c.morphisms() {
            // op composite g ∘op f = f ∘ g
            if c.src(f) == c.tgt(g) {
                if let Some(h) = c.compose(f, g) {
                    b.compose(c.morphism_id(g), c.morphism_id(f), c.morphism_id(h))
                        .unwrap();
                }
            }
        }
    }
    b.finish().expect("opposite of a well-formed category")
}

/// Product category `a × b`. Object ids are `"(x,y)"`, morphism ids `"(f,g)"`.
pub fn product(a: &FiniteCategory, b: &FiniteCategory) -> Result<FiniteCategory> {
    let mut bld = CategoryBuilder::new();
    for x in a.objects() {
        for y in b.objects() {
            bld.object(&format!("({},{})", a.object_id(x), b.object_id(y)))?;
        }
    }
    for f in a.morphisms() {
        for g in b.morphisms() {
            bld.morphism(
                &format!("({},{})", a.morphism_id(f), b.morphism_id(g)),
                &format!("({},{})", a.object_id(a.src(f)), b.object_id(b.src(g))),
                &format!("({},{})", a.object_id(a.tgt(f)), b.object_id(b.tgt(g))),
            )?;
        }
    }
    for x in a.objects() {
        for y in b.objects() {
            bld.identity(
                &format!("({},{})", a.object_id(x), b.object_id(y)),
                &format!(
                    "({},{})",
                    a.morphism_id(a.identity(x)),
                    b.morphism_id(b.identity(y))
                ),
            )?;
        }
    }
    for f in a.morphisms() {
        for f2 in a.hom_from(a.tgt(f)) {
            let Some(ff) = a.compose(f2, f) else { continue };
            for g in b.morphisms() {
                for g2 in b.hom_from(b.tgt(g)) {
                    let Some(gg) = b.compose(g2, g) else { continue };
                    bld.compose(
                        &format!("({},{})", a.morphism_id(f2), b.morphism_id(g2)),
                        &format!("({},{})", a.morphism_id(f), b.morphism_id(g)),
                        &format!("({},{})", a.morphism_id(ff), b.morphism_id(gg)),
                    )?;
                }
            }
        }
    }
    bld.finish()
}

/// The poset `[n] = 0 -> 1 -> ... -> n`. Morphism `i -> j` is labeled
/// `"i<=j"`; identities are `"i<=i"`.
pub fn chain(n: usize) -> FiniteCategory {
    let pairs: Vec<(String, String)> = (0..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i.to_string(), j.to_string())))
        .collect();
    let objs: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    poset(
        &objs.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        &pairs
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect::<Vec<_>>(),
    )
    .expect("chain poset is well-formed")
}

/// A thin category from a reflexive-transitive closure of the given relation
/// pairs. At most one morphism between two objects, so composition is forced.
pub fn poset(objects: &[&str], le_pairs: &[(&str, &str)]) -> Result<FiniteCategory> {
    let n = objects.len();
    let mut le = vec![vec![false; n]; n];
    let idx: HashMap<&str, usize> = objects.iter().copied().zip(0..).collect();
    for i in 0..n {
        le[i][i] = true;
    }
    for (a, b) in le_pairs {
        let i = *idx.get(a).ok_or_else(|| Error::UnknownObject(a.to_string()))?;
        let j = *idx.get(b).ok_or_else(|| Error::UnknownObject(b.to_string()))?;
        le[i][j] = true;
    }
    // transitive closure
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let mut b = CategoryBuilder::new();
    for o in objects {
        b.object(o)?;
    }
    let name = |i: usize, j: usize| format!("{}<={}", objects[i], objects[j]);
    for i in 0..n {
        for j in 0..n {
            if le[i][j] {
                b.morphism(&name(i, j), objects[i], objects[j])?;
            }
        }
    }
    for i in 0..n {
        b.identity(objects[i], &name(i, i))?;
    }
    for i in 0..n {
        for j in 0..n {
            if !le[i][j] {
                continue;
            }
            for k in 0..n {
                if le[j][k] {
                    b.compose(&name(j, k), &name(i, j), &name(i, k))?;
                }
            }
        }
    }
    b.finish()
}

/// The span `a <- b -> c` with arrows `"l": b -> a` and `"r": b -> c`.
pub fn span() -> FiniteCategory {
    let mut b = CategoryBuilder::new();
    for o in ["a", "b", "c"] {
        b.object(o).unwrap();
    }
    for (id, s, t) in [
        ("ida", "a", "a"),
        ("idb", "b", "b"),
        ("idc", "c", "c"),
        ("l", "b", "a"),
        ("r", "b", "c"),
    ] {
        b.morphism(id, s, t).unwrap();
    }
    b.identity("a", "ida").unwrap();
    b.identity("b", "idb").unwrap();
    b.identity("c", "idc").unwrap();
    for (g, f, h) in [
        ("ida", "ida", "ida"),
        ("idb", "idb", "idb"),
        ("idc", "idc", "idc"),
        ("l", "idb", "l"),
        ("ida", "l", "l"),
        ("r", "idb", "r"),
        ("idc", "r", "r"),
    ] {
        b.compose(g, f, h).unwrap();
    }
    b.finish().unwrap()
}

/// All cones from `t` over the diagram `f` (one leg per shape object,
/// commuting with every diagram arrow), in lexicographic leg order.
pub fn cones_from(t: u32, f: &FunctorData) -> Vec<Vec<u32>> {
    let shape = &f.source;
    let cat = &f.target;
    let n = shape.object_count();
    let mut out = Vec::new();
    let mut legs: Vec<u32> = Vec::with_capacity(n);
    fn rec(
        t: u32,
        f: &FunctorData,
        legs: &mut Vec<u32>,
        depth: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        let shape = &f.source;
        let cat = &f.target;
        let n = shape.object_count();
        if depth == n {
            out.push(legs.clone());
            return;
        }
        for &leg in cat.hom(t, f.on_object(depth as u32)) {
            legs.push(leg);
            let ok = shape.morphisms().all(|m| {
                let (s, tt) = (shape.src(m) as usize, shape.tgt(m) as usize);
                if s > depth || tt > depth {
                    return true;
                }
                cat.compose(f.on_morphism(m), legs[s]) == Some(legs[tt])
            });
            if ok {
                rec(t, f, legs, depth + 1, out);
            }
            legs.pop();
        }
    }
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let _ = cat;
    rec(t, f, &mut legs, 0, &mut out);
    out
}

/// All cocones from the diagram `f` to `t`.
pub fn cocones_to(t: u32, f: &FunctorData) -> Vec<Vec<u32>> {
    let shape = &f.source;
    let n = shape.object_count();
    let mut out = Vec::new();
    let mut legs: Vec<u32> = Vec::with_capacity(n);
    fn rec(
        t: u32,
        f: &FunctorData,
        legs: &mut Vec<u32>,
        depth: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        let shape = &f.source;
        let cat = &f.target;
        let n = shape.object_count();
        if depth == n {
            out.push(legs.clone());
            return;
        }
        for &leg in cat.hom(f.on_object(depth as u32), t) {
            legs.push(leg);
            let ok = shape.morphisms().all(|m| {
                let (s, tt) = (shape.src(m) as usize, shape.tgt(m) as usize);
                if s > depth || tt > depth {
                    return true;
                }
                cat.compose(legs[tt], f.on_morphism(m)) == Some(legs[s])
            });
            if ok {
                rec(t, f, legs, depth + 1, out);
            }
            legs.pop();
        }
    }
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    rec(t, f, &mut legs, 0, &mut out);
    out
}

/// Exhaustive limit search inside a finite category: an apex and cone such
/// that every cone from every object factors through it uniquely. On ties,
/// the least (apex id, cone legs) wins.
pub fn limit_in_category(f: &FunctorData) -> Option<(u32, Vec<u32>)> {
    let cat = &f.target;
    // necessary condition: |hom(T, apex)| equals the number of cones from T
    let cone_counts: Vec<usize> = cat.objects().map(|t| cones_from(t, f).len()).collect();
    let mut apexes: Vec<u32> = cat
        .objects()
        .filter(|&p| {
            cat.objects()
                .all(|t| cat.hom(t, p).len() == cone_counts[t as usize])
        })
        .collect();
    apexes.sort_by(|&a, &b| cat.object_id(a).cmp(cat.object_id(b)));
    for p in apexes {
        let mut candidate_cones = cones_from(p, f);
        candidate_cones.sort_by(|a, b| {
            let ka: Vec<&str> = a.iter().map(|&m| cat.morphism_id(m)).collect();
            let kb: Vec<&str> = b.iter().map(|&m| cat.morphism_id(m)).collect();
            ka.cmp(&kb)
        });
        'cone: for cone in candidate_cones {
            for t in cat.objects() {
                for test in cones_from(t, f) {
                    let factorings = cat
                        .hom(t, p)
                        .iter()
                        .filter(|&&h| {
                            cone.iter()
                                .zip(test.iter())
                                .all(|(&leg, &tleg)| cat.compose(leg, h) == Some(tleg))
                        })
                        .count();
                    if factorings != 1 {
                        continue 'cone;
                    }
                }
            }
            return Some((p, cone));
        }
    }
    None
}

/// Exhaustive colimit search, dual to [`limit_in_category`].
pub fn colimit_in_category(f: &FunctorData) -> Option<(u32, Vec<u32>)> {
    let cat = &f.target;
    let cocone_counts: Vec<usize> = cat.objects().map(|t| cocones_to(t, f).len()).collect();
    let mut apexes: Vec<u32> = cat
        .objects()
        .filter(|&p| {
            cat.objects()
                .all(|t| cat.hom(p, t).len() == cocone_counts[t as usize])
        })
        .collect();
    apexes.sort_by(|&a, &b| cat.object_id(a).cmp(cat.object_id(b)));
    for p in apexes {
        let mut candidate = cocones_to(p, f);
        candidate.sort_by(|a, b| {
            let ka: Vec<&str> = a.iter().map(|&m| cat.morphism_id(m)).collect();
            let kb: Vec<&str> = b.iter().map(|&m| cat.morphism_id(m)).collect();
            ka.cmp(&kb)
        });
        'cocone: for cocone in candidate {
            for t in cat.objects() {
                for test in cocones_to(t, f) {
                    let factorings = cat
                        .hom(p, t)
                        .iter()
                        .filter(|&&h| {
                            cocone
                                .iter()
                                .zip(test.iter())
                                .all(|(&leg, &tleg)| cat.compose(h, leg) == Some(tleg))
                        })
                        .count();
                    if factorings != 1 {
                        continue 'cocone;
                    }
                }
            }
            return Some((p, cocone));
        }
    }
    None
}

/// A discrete category on the given object ids.
pub fn discrete(objects: &[&str]) -> FiniteCategory {
    let mut b = CategoryBuilder::new();
    for o in objects {
        b.object(o).unwrap();
        b.morphism(&format!("id{o}"), o, o).unwrap();
        b.identity(o, &format!("id{o}")).unwrap();
    }
    for o in objects {
        b.compose(&format!("id{o}"), &format!("id{o}"), &format!("id{o}"))
            .unwrap();
    }
    b.finish().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_object_category_validates() {
        let c = discrete(&["x"]);
        assert!(validate_category(&c).ok());
    }

    #[test]
    fn chain_validates() {
        let c = chain(1);
        assert!(validate_category(&c).ok());
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.morphism_count(), 3);
    }

    #[test]
    fn broken_associativity_is_flagged_with_exact_witness() {
        // one object, morphisms id, e; table with e∘e = e but (e∘e)∘e set to id
        // so that compose(e, compose(e,e)) = e while compose(compose(e,e), e) = e.
        // Build a genuinely non-associative table on three generators instead.
        let mut b = CategoryBuilder::new();
        b.object("x").unwrap();
        for id in ["id", "e", "f"] {
            b.morphism(id, "x", "x").unwrap();
        }
        b.identity("x", "id").unwrap();
        for (g, f, h) in [
            ("id", "id", "id"),
            ("id", "e", "e"),
            ("e", "id", "e"),
            ("id", "f", "f"),
            ("f", "id", "f"),
            ("e", "e", "f"),
            ("e", "f", "id"),
            ("f", "e", "e"),
            ("f", "f", "e"),
        ] {
            b.compose(g, f, h).unwrap();
        }
        let c = b.finish().unwrap();
        let report = validate_category(&c);
        assert!(!report.ok());
        // (e∘e)∘e = f∘e = e, but e∘(e∘e) = e∘f = id: witness triple (e,e,e)
        assert!(report.violations.iter().any(|v| matches!(
            v,
            CategoryViolation::Associativity { h, g, f }
                if h == "e" && g == "e" && f == "e"
        )));
    }

    #[test]
    fn comma_under_of_initial_in_chain2_is_chain2() {
        let c = Arc::new(chain(2));
        let x = c.object("0").unwrap();
        let (comma, proj) = comma_under(&c, x).unwrap();
        assert_eq!(comma.object_count(), 3);
        assert!(validate_category(&comma).ok());
        assert!(proj.validate().is_empty());
        // initial object of x\C is the identity at x
        let init = find_initial(&comma).unwrap();
        assert_eq!(comma.object_id(init), "0<=0");
    }

    #[test]
    fn comma_under_span_center() {
        let c = Arc::new(span());
        let b = c.object("b").unwrap();
        let (comma, _) = comma_under(&c, b).unwrap();
        assert_eq!(comma.object_count(), 3);
        // two non-identity morphisms: idb -> l and idb -> r
        let nonid = comma.morphisms().filter(|&m| !comma.is_identity(m)).count();
        assert_eq!(nonid, 2);
    }

    #[test]
    fn comma_over_terminal_of_chain2() {
        let c = Arc::new(chain(2));
        let x = c.object("2").unwrap();
        let (comma, proj) = comma_over(&c, x).unwrap();
        assert_eq!(comma.object_count(), 3);
        assert!(validate_category(&comma).ok());
        assert!(proj.validate().is_empty());
        let term = find_terminal(&comma).unwrap();
        assert_eq!(comma.object_id(term), "2<=2");
    }

    #[test]
    fn initial_terminal_on_span_and_empty() {
        let c = span();
        assert_eq!(find_initial(&c).map(|o| c.object_id(o).to_string()), Some("b".into()));
        assert_eq!(find_terminal(&c), None);
        let empty = CategoryBuilder::new().finish().unwrap();
        assert_eq!(find_initial(&empty), None);
        assert_eq!(find_terminal(&empty), None);
    }

    #[test]
    fn chain_initial_terminal() {
        let c = chain(3);
        assert_eq!(find_initial(&c).map(|o| c.object_id(o).to_string()), Some("0".into()));
        assert_eq!(find_terminal(&c).map(|o| c.object_id(o).to_string()), Some("3".into()));
    }

    #[test]
    fn components_discrete_span_disjoint() {
        let d = discrete(&["p", "q", "r"]);
        assert_eq!(connected_components(&d).len(), 3);
        assert_eq!(connected_components(&span()).len(), 1);
        // [1] ⊔ [2] via product with nothing: build by hand
        let mut b = CategoryBuilder::new();
        for o in ["u0", "u1", "v0", "v1", "v2"] {
            b.object(o).unwrap();
            b.morphism(&format!("id{o}"), o, o).unwrap();
            b.identity(o, &format!("id{o}")).unwrap();
        }
        b.morphism("u01", "u0", "u1").unwrap();
        b.morphism("v01", "v0", "v1").unwrap();
        b.morphism("v12", "v1", "v2").unwrap();
        b.morphism("v02", "v0", "v2").unwrap();
        for o in ["u0", "u1", "v0", "v1", "v2"] {
            b.compose(&format!("id{o}"), &format!("id{o}"), &format!("id{o}")).unwrap();
        }
        for (g, f, h) in [
            ("u01", "idu0", "u01"),
            ("idu1", "u01", "u01"),
            ("v01", "idv0", "v01"),
            ("idv1", "v01", "v01"),
            ("v12", "idv1", "v12"),
            ("idv2", "v12", "v12"),
            ("v02", "idv0", "v02"),
            ("idv2", "v02", "v02"),
            ("v12", "v01", "v02"),
        ] {
            b.compose(g, f, h).unwrap();
        }
        let c = b.finish().unwrap();
        assert!(validate_category(&c).ok());
        assert_eq!(connected_components(&c).len(), 2);
    }

    #[test]
    fn functor_composition_laws_on_instances() {
        let c = Arc::new(chain(2));
        let idf = FunctorData::identity(c.clone());
        assert!(idf.validate().is_empty());
        let comp = idf.compose(&idf).unwrap();
        assert!(comp.validate().is_empty());
        for o in c.objects() {
            assert_eq!(comp.on_object(o), o);
        }
    }

    #[test]
    fn comma_projection_validates_for_every_object() {
        for cat in [Arc::new(chain(2)), Arc::new(span())] {
            for x in cat.objects() {
                let (comma, proj) = comma_under(&cat, x).unwrap();
                assert!(validate_category(&comma).ok());
                assert!(proj.validate().is_empty());
                assert!(find_initial(&comma).is_some());
                let (comma2, proj2) = comma_over(&cat, x).unwrap();
                assert!(validate_category(&comma2).ok());
                assert!(proj2.validate().is_empty());
                assert!(find_terminal(&comma2).is_some());
            }
        }
    }

    #[test]
    fn universal_search_in_posets() {
        // in the square lattice, the limit of the discrete pair {y, z} is
        // their meet x, the colimit their join t
        let sq = Arc::new(
            poset(&["x", "y", "z", "t"], &[("x", "y"), ("x", "z"), ("y", "t"), ("z", "t")])
                .unwrap(),
        );
        let shape = Arc::new(discrete(&["p", "q"]));
        let y = sq.object("y").unwrap();
        let z = sq.object("z").unwrap();
        let diag = FunctorData::new(
            shape.clone(),
            sq.clone(),
            vec![y, z],
            vec![sq.identity(y), sq.identity(z)],
        )
        .unwrap();
        let (apex, _) = limit_in_category(&diag).unwrap();
        assert_eq!(sq.object_id(apex), "x");
        let (co, _) = colimit_in_category(&diag).unwrap();
        assert_eq!(sq.object_id(co), "t");
        // empty diagram: limit is terminal, colimit initial
        let empty_shape = Arc::new(CategoryBuilder::new().finish().unwrap());
        let empty = FunctorData::new(empty_shape, sq.clone(), vec![], vec![]).unwrap();
        let (term, _) = limit_in_category(&empty).unwrap();
        assert_eq!(sq.object_id(term), "t");
        let (init, _) = colimit_in_category(&empty).unwrap();
        assert_eq!(sq.object_id(init), "x");
    }

    #[test]
    fn opposite_and_product_validate() {
        let c = chain(2);
        let op = opposite(&c);
        assert!(validate_category(&op).ok());
        assert_eq!(find_initial(&op).map(|o| op.object_id(o).to_string()), Some("2".into()));
        let p = product(&c, &span()).unwrap();
        assert!(validate_category(&p).ok());
        assert_eq!(p.object_count(), 9);
    }
}
