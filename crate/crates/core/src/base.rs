//! Finite base categories given by an explicit composition table.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Hard upper bound on the number of objects of a base category.
pub const MAX_BASE_OBJECTS: usize = 16;

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// Raw, unvalidated description of a base category.
///
/// Compositions are written in diagrammatic order: `(f, g, h)` records
/// `f ; g = h`, i.e. `g ∘ f = h`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BaseDescription {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, String, String)>,
    pub identities: Vec<(String, String)>,
    pub compositions: Vec<(String, String, String)>,
}

/// A validated finite category. Objects and morphisms keep declaration order,
/// which fixes every enumeration order downstream.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    /// `table[f * n + g]` is `f ; g` when `cod f == dom g`.
    table: Vec<Option<MorId>>,
    /// Non-identity morphisms with the given codomain.
    into: Vec<Vec<MorId>>,
}

impl BaseCategory {
    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn identity(&self, obj: ObjId) -> MorId {
        self.identities[obj]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identities[self.morphisms[m].dom] == m
    }

    /// `f ; g`, defined when `cod f == dom g`.
    pub fn then(&self, f: MorId, g: MorId) -> Option<MorId> {
        self.table[f * self.morphisms.len() + g]
    }

    /// Non-identity morphisms whose codomain is `obj`.
    pub fn non_identity_into(&self, obj: ObjId) -> &[MorId] {
        &self.into[obj]
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_id(&self, name: &str) -> Option<MorId> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// Rebuilds the raw description; `load_base` of the result gives back `self`.
    pub fn describe(&self) -> BaseDescription {
        let n = self.morphisms.len();
        let mut compositions = Vec::new();
        for f in 0..n {
            for g in 0..n {
                if let Some(h) = self.table[f * n + g] {
                    compositions.push((
                        self.morphisms[f].name.clone(),
                        self.morphisms[g].name.clone(),
                        self.morphisms[h].name.clone(),
                    ));
                }
            }
        }
        BaseDescription {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| (m.name.clone(), self.objects[m.dom].clone(), self.objects[m.cod].clone()))
                .collect(),
            identities: self
                .identities
                .iter()
                .enumerate()
                .map(|(o, &m)| (self.objects[o].clone(), self.morphisms[m].name.clone()))
                .collect(),
            compositions,
        }
    }
}

/// Validates a base category description: total and well-typed table,
/// identity laws and associativity, all checked exhaustively.
pub fn load_base(desc: &BaseDescription) -> Result<BaseCategory> {
    if desc.objects.len() > MAX_BASE_OBJECTS {
        return Err(Error::BaseTooLarge { size: desc.objects.len(), limit: MAX_BASE_OBJECTS });
    }
    let mut obj_ids = HashMap::new();
    for (i, o) in desc.objects.iter().enumerate() {
        if obj_ids.insert(o.as_str(), i).is_some() {
            return Err(Error::DuplicateName { kind: "object", name: o.clone() });
        }
    }
    let obj = |name: &str| obj_ids.get(name).copied().ok_or_else(|| Error::UnknownObject(name.to_string()));

    let mut morphisms = Vec::with_capacity(desc.morphisms.len());
    let mut mor_ids = HashMap::new();
    for (name, dom, cod) in &desc.morphisms {
        if mor_ids.insert(name.as_str(), morphisms.len()).is_some() {
            return Err(Error::DuplicateName { kind: "morphism", name: name.clone() });
        }
        morphisms.push(Morphism { name: name.clone(), dom: obj(dom)?, cod: obj(cod)? });
    }
    let mor = |name: &str| mor_ids.get(name).copied().ok_or_else(|| Error::UnknownMorphism(name.to_string()));

    let mut identities = vec![None; desc.objects.len()];
    for (o, m) in &desc.identities {
        let (o, m) = (obj(o)?, mor(m)?);
        if morphisms[m].dom != o || morphisms[m].cod != o {
            return Err(Error::IdentityViolation {
                identity: morphisms[m].name.clone(),
                morphism: morphisms[m].name.clone(),
            });
        }
        identities[o] = Some(m);
    }
    let identities: Vec<MorId> = identities
        .into_iter()
        .enumerate()
        .map(|(o, m)| m.ok_or_else(|| Error::MissingIdentity(desc.objects[o].clone())))
        .collect::<Result<_>>()?;

    let n = morphisms.len();
    let mut table = vec![None; n * n];
    for (f, g, h) in &desc.compositions {
        let (fi, gi, hi) = (mor(f)?, mor(g)?, mor(h)?);
        if morphisms[fi].cod != morphisms[gi].dom {
            return Err(Error::IllTypedComposite { f: f.clone(), g: g.clone(), result: h.clone() });
        }
        if morphisms[hi].dom != morphisms[fi].dom || morphisms[hi].cod != morphisms[gi].cod {
            return Err(Error::IllTypedComposite { f: f.clone(), g: g.clone(), result: h.clone() });
        }
        if table[fi * n + gi].replace(hi).is_some_and(|prev| prev != hi) {
            return Err(Error::DuplicateName { kind: "composition", name: format!("{f} ; {g}") });
        }
    }
    for f in 0..n {
        for g in 0..n {
            if morphisms[f].cod == morphisms[g].dom && table[f * n + g].is_none() {
                return Err(Error::IncompleteTable {
                    f: morphisms[f].name.clone(),
                    g: morphisms[g].name.clone(),
                });
            }
        }
    }
    for f in 0..n {
        let (d, c) = (morphisms[f].dom, morphisms[f].cod);
        for (id, other) in [(identities[d], table[identities[d] * n + f]), (identities[c], table[f * n + identities[c]])] {
            if other != Some(f) {
                return Err(Error::IdentityViolation {
                    identity: morphisms[id].name.clone(),
                    morphism: morphisms[f].name.clone(),
                });
            }
        }
    }
    for f in 0..n {
        for g in 0..n {
            let Some(fg) = table[f * n + g] else { continue };
            for h in 0..n {
                let Some(gh) = table[g * n + h] else { continue };
                if table[fg * n + h] != table[f * n + gh] {
                    return Err(Error::AssociativityViolation {
                        f: morphisms[f].name.clone(),
                        g: morphisms[g].name.clone(),
                        h: morphisms[h].name.clone(),
                    });
                }
            }
        }
    }

    let mut into = vec![Vec::new(); desc.objects.len()];
    for (m, morphism) in morphisms.iter().enumerate() {
        if identities[morphism.dom] != m {
            into[morphism.cod].push(m);
        }
    }
    Ok(BaseCategory { objects: desc.objects.clone(), morphisms, identities, table, into })
}

/// The terminal base category: one object, identity only. Presheaves on it are finite sets.
pub fn point_base() -> BaseCategory {
    load_base(&BaseDescription {
        objects: vec!["pt".into()],
        morphisms: vec![("id".into(), "pt".into(), "pt".into())],
        identities: vec![("pt".into(), "id".into())],
        compositions: vec![("id".into(), "id".into(), "id".into())],
    })
    .expect("point base is valid")
}

/// Two objects `v`, `e` and two parallel morphisms `s, t : v -> e`;
/// presheaves on it are directed multigraphs with `s`/`t` giving source/target.
pub fn graph_base() -> BaseCategory {
    let s = |x: &str| x.to_string();
    load_base(&BaseDescription {
        objects: vec![s("v"), s("e")],
        morphisms: vec![
            (s("id_v"), s("v"), s("v")),
            (s("id_e"), s("e"), s("e")),
            (s("s"), s("v"), s("e")),
            (s("t"), s("v"), s("e")),
        ],
        identities: vec![(s("v"), s("id_v")), (s("e"), s("id_e"))],
        compositions: vec![
            (s("id_v"), s("id_v"), s("id_v")),
            (s("id_e"), s("id_e"), s("id_e")),
            (s("id_v"), s("s"), s("s")),
            (s("id_v"), s("t"), s("t")),
            (s("s"), s("id_e"), s("s")),
            (s("t"), s("id_e"), s("t")),
        ],
    })
    .expect("graph base is valid")
}
