//! Finite colimits (and the few limits we need), computed pointwise.

use std::sync::Arc;

use crate::base::BaseCategory;
use crate::error::{Error, Result};
use crate::presheaf::{Presheaf, PresheafMap};

/// Disjoint-set forest; `find` returns the least member of each class.
#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            cur = std::mem::replace(&mut self.parent[cur], root);
        }
        root
    }

    /// Links the larger root under the smaller, so roots are class minima.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

pub fn initial(base: &Arc<BaseCategory>) -> Arc<Presheaf> {
    let n = base.object_count();
    let actions = vec![Vec::new(); base.morphisms().len()];
    Arc::new(Presheaf::from_parts(base.clone(), vec![Vec::new(); n], actions).expect("initial presheaf"))
}

pub fn terminal(base: &Arc<BaseCategory>) -> Arc<Presheaf> {
    let n = base.object_count();
    let actions = vec![vec![0]; base.morphisms().len()];
    Arc::new(Presheaf::from_parts(base.clone(), vec![vec!["*".to_string()]; n], actions).expect("terminal presheaf"))
}

/// The unique map out of the initial presheaf.
pub fn from_initial(x: &Arc<Presheaf>) -> PresheafMap {
    let zero = initial(x.base());
    PresheafMap::new_unchecked(zero, x.clone(), vec![Vec::new(); x.base().object_count()])
}

/// The unique map into the terminal presheaf.
pub fn to_terminal(x: &Arc<Presheaf>) -> PresheafMap {
    let one = terminal(x.base());
    PresheafMap::new_unchecked(x.clone(), one, x.carriers().iter().map(|c| vec![0; c.len()]).collect())
}

/// How apex elements of a pushout are named. Each class is named after its
/// least member, prefixed by the tag of the side that member came from. If
/// that produces a clash the fallback tags `l:` / `r:` are used throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tagging {
    pub left: String,
    pub right: String,
}

impl Default for Tagging {
    fn default() -> Self {
        Tagging { left: "l:".into(), right: "r:".into() }
    }
}

impl Tagging {
    pub fn new(left: impl Into<String>, right: impl Into<String>) -> Self {
        Tagging { left: left.into(), right: right.into() }
    }
}

/// A pushout square together with what is needed to induce maps out of it.
#[derive(Debug, Clone)]
pub struct PushoutResult {
    pub apex: Arc<Presheaf>,
    pub leg_from_b: PresheafMap,
    pub leg_from_c: PresheafMap,
    f: PresheafMap,
    g: PresheafMap,
    /// Per object, the least member (in `B ⊔ C` order) of each class.
    reps: Vec<Vec<usize>>,
}

impl PushoutResult {
    pub fn span(&self) -> (&PresheafMap, &PresheafMap) {
        (&self.f, &self.g)
    }

    /// The unique map `apex -> T` restricting to `to_b` and `to_c`.
    pub fn mediator(&self, to_b: &PresheafMap, to_c: &PresheafMap) -> Result<PresheafMap> {
        let b = self.f.target();
        if to_b.source() != b || to_c.source() != self.g.target() || to_b.target() != to_c.target() {
            return Err(Error::NonComposable);
        }
        let base = b.base();
        for o in 0..base.object_count() {
            let ok = (0..self.f.source().size(o))
                .all(|a| to_b.apply(o, self.f.apply(o, a)) == to_c.apply(o, self.g.apply(o, a)));
            if !ok {
                return Err(Error::CoconeMismatch);
            }
        }
        let comps = self
            .reps
            .iter()
            .enumerate()
            .map(|(o, reps)| {
                let nb = b.size(o);
                reps.iter().map(|&r| if r < nb { to_b.apply(o, r) } else { to_c.apply(o, r - nb) }).collect()
            })
            .collect();
        PresheafMap::new(self.apex.clone(), to_b.target().clone(), comps)
            .map_err(|e| Error::ImplementationInvariantBroken(format!("mediator not natural: {e}")))
    }
}

/// Pushout of `f : A -> B` and `g : A -> C`, with the default `l:`/`r:` naming.
pub fn pushout(f: &PresheafMap, g: &PresheafMap) -> Result<PushoutResult> {
    pushout_tagged(f, g, &Tagging::default())
}

/// Pushout of `f : A -> B` and `g : A -> C`: the quotient of `B ⊔ C` by the
/// equivalence generated by `f(a) ~ g(a)`, one union-find per base object.
pub fn pushout_tagged(f: &PresheafMap, g: &PresheafMap, tagging: &Tagging) -> Result<PushoutResult> {
    if f.base() != g.base() {
        return Err(Error::BaseMismatch);
    }
    if f.source() != g.source() {
        return Err(Error::NonComposable);
    }
    let (b, c) = (f.target(), g.target());
    let base = b.base().clone();
    let n = base.object_count();

    let mut class_of = Vec::with_capacity(n);
    let mut reps = Vec::with_capacity(n);
    for o in 0..n {
        let nb = b.size(o);
        let mut uf = UnionFind::new(nb + c.size(o));
        for a in 0..f.source().size(o) {
            uf.union(f.apply(o, a), nb + g.apply(o, a));
        }
        let mut index = vec![usize::MAX; nb + c.size(o)];
        let mut obj_reps = Vec::new();
        for (z, slot) in index.iter_mut().enumerate() {
            if uf.find(z) == z {
                *slot = obj_reps.len();
                obj_reps.push(z);
            }
        }
        let classes: Vec<usize> = (0..nb + c.size(o)).map(|z| index[uf.find(z)]).collect();
        class_of.push(classes);
        reps.push(obj_reps);
    }

    let name_with = |t: &Tagging| -> Vec<Vec<String>> {
        reps.iter()
            .enumerate()
            .map(|(o, rs)| {
                let nb = b.size(o);
                rs.iter()
                    .map(|&r| {
                        if r < nb {
                            format!("{}{}", t.left, b.carrier(o)[r])
                        } else {
                            format!("{}{}", t.right, c.carrier(o)[r - nb])
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let mut carriers = name_with(tagging);
    let clash = carriers.iter().any(|names| {
        let mut seen = std::collections::HashSet::new();
        !names.iter().all(|n| seen.insert(n))
    });
    if clash {
        carriers = name_with(&Tagging::default());
    }

    let mut actions = Vec::with_capacity(base.morphisms().len());
    for (m, mor) in base.morphisms().iter().enumerate() {
        let (dom, cod) = (mor.dom, mor.cod);
        let nb_cod = b.size(cod);
        let nb_dom = b.size(dom);
        let side = |z: usize| if z < nb_cod { b.act(m, z) } else { nb_dom + c.act(m, z - nb_cod) };
        let mut act = Vec::with_capacity(reps[cod].len());
        for &r in &reps[cod] {
            act.push(class_of[dom][side(r)]);
        }
        for z in 0..nb_cod + c.size(cod) {
            if act[class_of[cod][z]] != class_of[dom][side(z)] {
                return Err(Error::ImplementationInvariantBroken(format!(
                    "pushout action for `{}` is not well defined",
                    mor.name
                )));
            }
        }
        actions.push(act);
    }
    let apex = Arc::new(Presheaf::from_parts(base.clone(), carriers, actions)?);
    let leg_b = class_of.iter().enumerate().map(|(o, cl)| cl[..b.size(o)].to_vec()).collect();
    let leg_c = class_of.iter().enumerate().map(|(o, cl)| cl[b.size(o)..].to_vec()).collect();
    Ok(PushoutResult {
        leg_from_b: PresheafMap::new_unchecked(b.clone(), apex.clone(), leg_b),
        leg_from_c: PresheafMap::new_unchecked(c.clone(), apex.clone(), leg_c),
        apex,
        f: f.clone(),
        g: g.clone(),
        reps,
    })
}

/// Coproduct `X ⊔ Y` with injections tagged `l:` and `r:`.
#[derive(Debug, Clone)]
pub struct CoproductResult {
    pub apex: Arc<Presheaf>,
    pub inl: PresheafMap,
    pub inr: PresheafMap,
    pushout: PushoutResult,
}

impl CoproductResult {
    pub fn mediator(&self, left: &PresheafMap, right: &PresheafMap) -> Result<PresheafMap> {
        self.pushout.mediator(left, right)
    }
}

pub fn coproduct(x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> Result<CoproductResult> {
    if x.base() != y.base() {
        return Err(Error::BaseMismatch);
    }
    // The default tags never clash with each other, so every element stays tagged.
    let po = pushout_tagged(&from_initial(x), &from_initial(y), &Tagging::default())?;
    Ok(CoproductResult { apex: po.apex.clone(), inl: po.leg_from_b.clone(), inr: po.leg_from_c.clone(), pushout: po })
}

/// `[f, g] : X ⊔ Y -> Z` for `f : X -> Z`, `g : Y -> Z`, with the coproduct built on the fly.
pub fn copair(f: &PresheafMap, g: &PresheafMap) -> Result<(CoproductResult, PresheafMap)> {
    let cp = coproduct(f.source(), g.source())?;
    let m = cp.mediator(f, g)?;
    Ok((cp, m))
}

/// Coproduct of two maps `f ⊔ g : A ⊔ C -> B ⊔ D`.
pub fn coproduct_map(f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap> {
    let dom = coproduct(f.source(), g.source())?;
    let cod = coproduct(f.target(), g.target())?;
    dom.mediator(&crate::presheaf::comp(f, &cod.inl), &crate::presheaf::comp(g, &cod.inr))
}

#[derive(Debug, Clone)]
pub struct ProductResult {
    pub apex: Arc<Presheaf>,
    pub proj0: PresheafMap,
    pub proj1: PresheafMap,
}

impl ProductResult {
    /// `<p, q> : T -> X × Y`.
    pub fn mediator(&self, p: &PresheafMap, q: &PresheafMap) -> Result<PresheafMap> {
        if p.source() != q.source() || p.target() != self.proj0.target() || q.target() != self.proj1.target() {
            return Err(Error::NonComposable);
        }
        let ny = |o| self.proj1.target().size(o);
        let comps = (0..p.base().object_count())
            .map(|o| p.component(o).iter().zip(q.component(o)).map(|(&x, &y)| x * ny(o) + y).collect())
            .collect();
        PresheafMap::new(p.source().clone(), self.apex.clone(), comps)
    }
}

/// Pointwise cartesian product; pairs are ordered lexicographically.
pub fn product(x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> Result<ProductResult> {
    if x.base() != y.base() {
        return Err(Error::BaseMismatch);
    }
    let base = x.base().clone();
    let n = base.object_count();
    let carriers = (0..n)
        .map(|o| {
            let mut names = Vec::with_capacity(x.size(o) * y.size(o));
            for a in x.carrier(o) {
                for b in y.carrier(o) {
                    names.push(format!("({a},{b})"));
                }
            }
            names
        })
        .collect();
    let actions = base
        .morphisms()
        .iter()
        .enumerate()
        .map(|(m, mor)| {
            let ny_dom = y.size(mor.dom);
            let mut act = Vec::new();
            for a in 0..x.size(mor.cod) {
                for b in 0..y.size(mor.cod) {
                    act.push(x.act(m, a) * ny_dom + y.act(m, b));
                }
            }
            act
        })
        .collect();
    let apex = Arc::new(Presheaf::from_parts(base, carriers, actions)?);
    let p0 = (0..n).map(|o| (0..x.size(o) * y.size(o)).map(|k| k / y.size(o)).collect()).collect();
    let p1 = (0..n).map(|o| (0..x.size(o) * y.size(o)).map(|k| k % y.size(o)).collect()).collect();
    Ok(ProductResult {
        proj0: PresheafMap::new_unchecked(apex.clone(), x.clone(), p0),
        proj1: PresheafMap::new_unchecked(apex.clone(), y.clone(), p1),
        apex,
    })
}
