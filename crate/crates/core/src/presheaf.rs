//! Finite presheaves and natural transformations between them.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::base::{BaseCategory, MorId, ObjId};
use crate::error::{Error, Result};

/// Hard upper bound on the size of any single carrier (element sets are `u64` masks in search).
pub const MAX_CARRIER: usize = 64;

/// Raw presheaf data, keyed by names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafData {
    pub carriers: Vec<(String, Vec<String>)>,
    /// `(morphism, graph)` where the graph lists `element_at_cod -> element_at_dom`.
    pub actions: Vec<(String, Vec<(String, String)>)>,
}

/// Raw map data: per object, a graph `source_element -> target_element`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapData {
    pub components: Vec<(String, Vec<(String, String)>)>,
}

/// A finite presheaf: a contravariant functor from the base into finite sets.
///
/// Elements are indices into the per-object carrier; names are kept for I/O and
/// take part in equality, so two presheaves are equal only if they agree
/// structurally in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presheaf {
    base: Arc<BaseCategory>,
    carriers: Vec<Vec<String>>,
    /// `actions[m][x]` for `m : a -> b` and `x` in the carrier at `b` is an element at `a`.
    actions: Vec<Vec<usize>>,
}

impl Presheaf {
    /// Builds a presheaf from index data, checking sizes, name uniqueness and functoriality.
    pub fn from_parts(base: Arc<BaseCategory>, carriers: Vec<Vec<String>>, actions: Vec<Vec<usize>>) -> Result<Self> {
        if carriers.len() != base.object_count() {
            return Err(Error::ImplementationInvariantBroken("carrier count differs from object count".into()));
        }
        for (o, carrier) in carriers.iter().enumerate() {
            if carrier.len() > MAX_CARRIER {
                return Err(Error::CarrierTooLarge { size: carrier.len(), limit: MAX_CARRIER });
            }
            let mut seen = std::collections::HashSet::new();
            for name in carrier {
                if !seen.insert(name.as_str()) {
                    return Err(Error::DuplicateName {
                        kind: "element",
                        name: format!("{}@{}", name, base.objects()[o]),
                    });
                }
            }
        }
        let p = Presheaf { base, carriers, actions };
        p.check_functorial()?;
        Ok(p)
    }

    fn check_functorial(&self) -> Result<()> {
        let base = &*self.base;
        let morphisms = base.morphisms();
        if self.actions.len() != morphisms.len() {
            return Err(Error::ImplementationInvariantBroken("action count differs from morphism count".into()));
        }
        for (m, mor) in morphisms.iter().enumerate() {
            let act = &self.actions[m];
            let dom_size = self.carriers[mor.dom].len();
            if act.len() != self.carriers[mor.cod].len() || act.iter().any(|&x| x >= dom_size) {
                return Err(Error::NotAFunction { name: mor.name.clone(), detail: "action is not total".into() });
            }
            if base.is_identity(m) && act.iter().enumerate().any(|(i, &x)| i != x) {
                return Err(Error::FunctorialityViolation { f: mor.name.clone(), g: mor.name.clone() });
            }
        }
        for f in 0..morphisms.len() {
            for g in 0..morphisms.len() {
                let Some(h) = base.then(f, g) else { continue };
                // F(f ; g) = F(f) ∘ F(g)
                let ok = (0..self.carriers[morphisms[g].cod].len())
                    .all(|x| self.actions[h][x] == self.actions[f][self.actions[g][x]]);
                if !ok {
                    return Err(Error::FunctorialityViolation {
                        f: morphisms[f].name.clone(),
                        g: morphisms[g].name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<BaseCategory> {
        &self.base
    }

    pub fn carrier(&self, obj: ObjId) -> &[String] {
        &self.carriers[obj]
    }

    pub fn carriers(&self) -> &[Vec<String>] {
        &self.carriers
    }

    pub fn size(&self, obj: ObjId) -> usize {
        self.carriers[obj].len()
    }

    pub fn total_size(&self) -> usize {
        self.carriers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_size() == 0
    }

    /// Action of `m : a -> b` on an element at `b`.
    pub fn act(&self, m: MorId, x: usize) -> usize {
        self.actions[m][x]
    }

    pub fn action(&self, m: MorId) -> &[usize] {
        &self.actions[m]
    }

    pub fn actions(&self) -> &[Vec<usize>] {
        &self.actions
    }

    pub fn element_id(&self, obj: ObjId, name: &str) -> Option<usize> {
        self.carriers[obj].iter().position(|n| n == name)
    }

    /// Same structure with new element names (used for renaming-invariance checks).
    pub fn renamed(&self, rename: impl Fn(ObjId, usize, &str) -> String) -> Result<Presheaf> {
        let carriers = self
            .carriers
            .iter()
            .enumerate()
            .map(|(o, c)| c.iter().enumerate().map(|(i, n)| rename(o, i, n)).collect())
            .collect();
        Presheaf::from_parts(self.base.clone(), carriers, self.actions.clone())
    }

    pub fn to_data(&self) -> PresheafData {
        let base = &*self.base;
        PresheafData {
            carriers: base.objects().iter().cloned().zip(self.carriers.iter().cloned()).collect(),
            actions: base
                .morphisms()
                .iter()
                .enumerate()
                .filter(|(m, _)| !base.is_identity(*m))
                .map(|(m, mor)| {
                    let graph = self.actions[m]
                        .iter()
                        .enumerate()
                        .map(|(x, &y)| (self.carriers[mor.cod][x].clone(), self.carriers[mor.dom][y].clone()))
                        .collect();
                    (mor.name.clone(), graph)
                })
                .collect(),
        }
    }
}

fn lookup_graph(
    name: &str,
    graph: &[(String, String)],
    from: &[String],
    to: &[String],
    from_obj: &str,
    to_obj: &str,
) -> Result<Vec<usize>> {
    let index = |carrier: &[String], obj: &str, e: &str| {
        carrier.iter().position(|n| n == e).ok_or_else(|| Error::UnknownElement {
            object: obj.to_string(),
            element: e.to_string(),
        })
    };
    let mut out = vec![None; from.len()];
    for (x, y) in graph {
        let (xi, yi) = (index(from, from_obj, x)?, index(to, to_obj, y)?);
        if out[xi].replace(yi).is_some_and(|prev| prev != yi) {
            return Err(Error::NotAFunction { name: name.to_string(), detail: format!("`{x}` has two images") });
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, y)| {
            y.ok_or_else(|| Error::NotAFunction { name: name.to_string(), detail: format!("`{}` has no image", from[i]) })
        })
        .collect()
}

/// Validates raw presheaf data against a base; element order is input order.
pub fn validate_presheaf(base: &Arc<BaseCategory>, data: &PresheafData) -> Result<Presheaf> {
    let mut carriers: Vec<Option<Vec<String>>> = vec![None; base.object_count()];
    for (obj, elems) in &data.carriers {
        let o = base.object_id(obj).ok_or_else(|| Error::UnknownObject(obj.clone()))?;
        if carriers[o].replace(elems.clone()).is_some() {
            return Err(Error::DuplicateName { kind: "carrier", name: obj.clone() });
        }
    }
    let carriers: Vec<Vec<String>> = carriers
        .into_iter()
        .enumerate()
        .map(|(o, c)| c.ok_or_else(|| Error::MissingCarrier(base.objects()[o].clone())))
        .collect::<Result<_>>()?;

    let mut given: HashMap<usize, &Vec<(String, String)>> = HashMap::new();
    for (m, graph) in &data.actions {
        let mi = base.morphism_id(m).ok_or_else(|| Error::UnknownMorphism(m.clone()))?;
        if given.insert(mi, graph).is_some() {
            return Err(Error::DuplicateName { kind: "action", name: m.clone() });
        }
    }
    let mut actions = Vec::with_capacity(base.morphisms().len());
    for (m, mor) in base.morphisms().iter().enumerate() {
        let (dom, cod) = (&base.objects()[mor.dom], &base.objects()[mor.cod]);
        match given.get(&m) {
            Some(graph) => actions.push(lookup_graph(&mor.name, graph, &carriers[mor.cod], &carriers[mor.dom], cod, dom)?),
            None if base.is_identity(m) => actions.push((0..carriers[mor.cod].len()).collect()),
            None if carriers[mor.cod].is_empty() => actions.push(Vec::new()),
            None => return Err(Error::MissingAction(mor.name.clone())),
        }
    }
    Presheaf::from_parts(base.clone(), carriers, actions)
}

/// A natural transformation between finite presheaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PresheafMap {
    source: Arc<Presheaf>,
    target: Arc<Presheaf>,
    components: Vec<Vec<usize>>,
}

impl PresheafMap {
    /// Checks totality and every naturality square.
    pub fn new(source: Arc<Presheaf>, target: Arc<Presheaf>, components: Vec<Vec<usize>>) -> Result<Self> {
        if source.base != target.base {
            return Err(Error::BaseMismatch);
        }
        let base = source.base.clone();
        if components.len() != base.object_count() {
            return Err(Error::ImplementationInvariantBroken("component count differs from object count".into()));
        }
        for (o, comp) in components.iter().enumerate() {
            if comp.len() != source.size(o) || comp.iter().any(|&y| y >= target.size(o)) {
                return Err(Error::NotAFunction { name: base.objects()[o].clone(), detail: "component is not total".into() });
            }
        }
        let map = PresheafMap { source, target, components };
        for (m, mor) in base.morphisms().iter().enumerate() {
            for x in 0..map.source.size(mor.cod) {
                if map.components[mor.dom][map.source.act(m, x)] != map.target.act(m, map.components[mor.cod][x]) {
                    return Err(Error::NaturalityViolation {
                        morphism: mor.name.clone(),
                        element: map.source.carrier(mor.cod)[x].clone(),
                    });
                }
            }
        }
        Ok(map)
    }

    /// Callers guarantee naturality by construction.
    pub(crate) fn new_unchecked(source: Arc<Presheaf>, target: Arc<Presheaf>, components: Vec<Vec<usize>>) -> Self {
        debug_assert!(PresheafMap::new(source.clone(), target.clone(), components.clone()).is_ok());
        PresheafMap { source, target, components }
    }

    pub fn identity(x: &Arc<Presheaf>) -> Self {
        let components = x.carriers.iter().map(|c| (0..c.len()).collect()).collect();
        PresheafMap { source: x.clone(), target: x.clone(), components }
    }

    pub fn source(&self) -> &Arc<Presheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presheaf> {
        &self.target
    }

    pub fn base(&self) -> &Arc<BaseCategory> {
        &self.source.base
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component(&self, obj: ObjId) -> &[usize] {
        &self.components[obj]
    }

    pub fn apply(&self, obj: ObjId, x: usize) -> usize {
        self.components[obj][x]
    }

    pub fn is_parallel_to(&self, other: &PresheafMap) -> bool {
        self.source == other.source && self.target == other.target
    }

    /// Every component injective.
    pub fn is_mono(&self) -> bool {
        self.components.iter().enumerate().all(|(o, comp)| {
            let mut hit = vec![false; self.target.size(o)];
            comp.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
        })
    }

    /// Every component surjective.
    pub fn is_epi(&self) -> bool {
        self.components.iter().enumerate().all(|(o, comp)| {
            let mut hit = vec![false; self.target.size(o)];
            comp.iter().for_each(|&y| hit[y] = true);
            hit.into_iter().all(|h| h)
        })
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.components.iter().all(|c| c.iter().enumerate().all(|(i, &y)| i == y))
    }

    pub fn to_data(&self) -> MapData {
        let base = self.base();
        MapData {
            components: base
                .objects()
                .iter()
                .enumerate()
                .map(|(o, name)| {
                    let graph = self.components[o]
                        .iter()
                        .enumerate()
                        .map(|(x, &y)| (self.source.carrier(o)[x].clone(), self.target.carrier(o)[y].clone()))
                        .collect();
                    (name.clone(), graph)
                })
                .collect(),
        }
    }
}

/// Validates raw map data between two validated presheaves.
pub fn validate_map(source: &Arc<Presheaf>, target: &Arc<Presheaf>, data: &MapData) -> Result<PresheafMap> {
    if source.base != target.base {
        return Err(Error::BaseMismatch);
    }
    let base = source.base.clone();
    let mut comps: Vec<Option<Vec<usize>>> = vec![None; base.object_count()];
    for (obj, graph) in &data.components {
        let o = base.object_id(obj).ok_or_else(|| Error::UnknownObject(obj.clone()))?;
        let c = lookup_graph(obj, graph, source.carrier(o), target.carrier(o), obj, obj)?;
        if comps[o].replace(c).is_some() {
            return Err(Error::DuplicateName { kind: "component", name: obj.clone() });
        }
    }
    let comps = comps
        .into_iter()
        .enumerate()
        .map(|(o, c)| match c {
            Some(c) => Ok(c),
            None if source.size(o) == 0 => Ok(Vec::new()),
            None => Err(Error::MissingComponent(base.objects()[o].clone())),
        })
        .collect::<Result<_>>()?;
    PresheafMap::new(source.clone(), target.clone(), comps)
}

/// `g ∘ f`: first `f`, then `g`. The target of `f` must equal the source of `g`.
pub fn compose(f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap> {
    if f.target != g.source {
        return Err(Error::NonComposable);
    }
    let components = f
        .components
        .iter()
        .zip(&g.components)
        .map(|(fc, gc)| fc.iter().map(|&y| gc[y]).collect())
        .collect();
    Ok(PresheafMap { source: f.source.clone(), target: g.target.clone(), components })
}

/// Panicking composition for internal use where composability is structural.
pub(crate) fn comp(f: &PresheafMap, g: &PresheafMap) -> PresheafMap {
    compose(f, g).expect("internal composition of non-composable maps")
}
