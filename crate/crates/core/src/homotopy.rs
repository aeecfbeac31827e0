//! Relative cylinders, path objects, left and right homotopy, deformation retracts.

use std::sync::Arc;

use crate::colimit::{from_initial, product, pushout_tagged, Tagging};
use crate::error::{Error, Result};
use crate::factorization::{soa_factorize_with, CellFactorization, GeneratingSet, SquareOrder};
use crate::lifting::RelationOracle;
use crate::presheaf::{comp, Presheaf, PresheafMap};
use crate::retract::retractions;
use crate::search::MapQuery;

/// `Y ⊔_X Y -> Cyl_X Y -> Y` for a map `i : X -> Y`.
#[derive(Debug, Clone)]
pub struct CylinderObject {
    pub over: PresheafMap,
    pub apex: Arc<Presheaf>,
    pub incl0: PresheafMap,
    pub incl1: PresheafMap,
    pub collapse: PresheafMap,
    pub provenance: CellFactorization,
}

impl CylinderObject {
    pub fn base_object(&self) -> &Arc<Presheaf> {
        self.over.target()
    }
}

/// The canonical cylinder over `i`.
pub fn cylinder(i: &PresheafMap, gens: &GeneratingSet, fuel: usize) -> Result<CylinderObject> {
    cylinder_with(i, gens, fuel, SquareOrder::Canonical)
}

pub fn cylinder_with(i: &PresheafMap, gens: &GeneratingSet, fuel: usize, order: SquareOrder) -> Result<CylinderObject> {
    let y = i.target();
    let glued = pushout_tagged(i, i, &Tagging::new("0:", "1:"))?;
    let id = PresheafMap::identity(y);
    let fold = glued.mediator(&id, &id)?;
    let fact = soa_factorize_with(&fold, gens, fuel, order).complete()?;
    Ok(CylinderObject {
        over: i.clone(),
        apex: fact.middle().clone(),
        incl0: comp(&glued.leg_from_b, &fact.left),
        incl1: comp(&glued.leg_from_c, &fact.left),
        collapse: fact.right.clone(),
        provenance: fact,
    })
}

/// The absolute cylinder of `y`, i.e. the cylinder over `0 -> y`.
pub fn absolute_cylinder(y: &Arc<Presheaf>, gens: &GeneratingSet, fuel: usize) -> Result<CylinderObject> {
    cylinder(&from_initial(y), gens, fuel)
}

#[derive(Debug, Clone)]
pub struct HomotopyWitness {
    pub cylinder: CylinderObject,
    pub h: PresheafMap,
}

fn check_pair(f0: &PresheafMap, f1: &PresheafMap, i: &PresheafMap) -> Result<()> {
    if !f0.is_parallel_to(f1) || i.target() != f0.source() {
        return Err(Error::NonComposable);
    }
    if comp(i, f0) != comp(i, f1) {
        return Err(Error::IncompatibleOnRelativePart);
    }
    Ok(())
}

/// First homotopy `h : Cyl -> Z` with `h ∘ incl0 = f0` and `h ∘ incl1 = f1`.
pub fn homotopy_in(cyl: &CylinderObject, f0: &PresheafMap, f1: &PresheafMap) -> Result<Option<PresheafMap>> {
    check_pair(f0, f1, &cyl.over)?;
    Ok(MapQuery::new(&cyl.apex, f0.target()).fix_along(&cyl.incl0, f0).fix_along(&cyl.incl1, f1).first())
}

/// `f0 ∼_i f1`, decided on the canonical cylinder over `i`.
pub fn homotopic(
    f0: &PresheafMap,
    f1: &PresheafMap,
    i: &PresheafMap,
    gens: &GeneratingSet,
    fuel: usize,
) -> Result<Option<HomotopyWitness>> {
    check_pair(f0, f1, i)?;
    let cyl = cylinder(i, gens, fuel)?;
    Ok(homotopy_in(&cyl, f0, f1)?.map(|h| HomotopyWitness { cylinder: cyl, h }))
}

/// Verdicts on the canonical cylinder and on the reversed-order one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossCheck {
    pub canonical: bool,
    pub alternate: bool,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.canonical == self.alternate
    }
}

pub fn homotopic_cross_check(
    f0: &PresheafMap,
    f1: &PresheafMap,
    i: &PresheafMap,
    gens: &GeneratingSet,
    fuel: usize,
) -> Result<CrossCheck> {
    check_pair(f0, f1, i)?;
    let canonical = homotopy_in(&cylinder(i, gens, fuel)?, f0, f1)?.is_some();
    let alternate = homotopy_in(&cylinder_with(i, gens, fuel, SquareOrder::Reversed)?, f0, f1)?.is_some();
    Ok(CrossCheck { canonical, alternate })
}

/// `∼_i` as a relation oracle, over a fixed cylinder.
#[derive(Debug, Clone)]
pub struct HomotopyOracle {
    pub cylinder: Arc<CylinderObject>,
}

impl HomotopyOracle {
    pub fn new(cylinder: Arc<CylinderObject>) -> Self {
        HomotopyOracle { cylinder }
    }
}

impl RelationOracle for HomotopyOracle {
    type Witness = PresheafMap;

    fn tag(&self) -> String {
        "homotopy".into()
    }

    fn relate(&self, a: &PresheafMap, b: &PresheafMap) -> Result<Option<PresheafMap>> {
        match homotopy_in(&self.cylinder, a, b) {
            Err(Error::IncompatibleOnRelativePart) => Ok(None),
            r => r,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DeformationWitness {
    pub retraction: PresheafMap,
    pub homotopy: HomotopyWitness,
}

fn deformation_retract(f: &PresheafMap, strong: bool, gens: &GeneratingSet, fuel: usize) -> Result<Option<DeformationWitness>> {
    let y = f.target();
    let mut cyl = None;
    let id = PresheafMap::identity(y);
    for g in retractions(f) {
        let cyl = match &cyl {
            Some(c) => c,
            None => {
                let rel = if strong { f.clone() } else { from_initial(y) };
                cyl.insert(cylinder(&rel, gens, fuel)?)
            }
        };
        let fg = comp(&g, f);
        if let Some(h) = homotopy_in(cyl, &fg, &id)? {
            return Ok(Some(DeformationWitness {
                retraction: g,
                homotopy: HomotopyWitness { cylinder: cyl.clone(), h },
            }));
        }
    }
    Ok(None)
}

/// A retraction `g` of `f` with `f ∘ g ∼ id`.
pub fn deformation_retraction(f: &PresheafMap, gens: &GeneratingSet, fuel: usize) -> Result<Option<DeformationWitness>> {
    deformation_retract(f, false, gens, fuel)
}

/// A retraction `g` of `f` with `f ∘ g ∼_f id`.
pub fn strong_deformation_retraction(
    f: &PresheafMap,
    gens: &GeneratingSet,
    fuel: usize,
) -> Result<Option<DeformationWitness>> {
    deformation_retract(f, true, gens, fuel)
}

/// `Z -> P Z -> Z × Z` factoring the diagonal.
#[derive(Debug, Clone)]
pub struct PathObject {
    pub of: Arc<Presheaf>,
    pub apex: Arc<Presheaf>,
    pub into: PresheafMap,
    pub proj0: PresheafMap,
    pub proj1: PresheafMap,
    /// `⟨proj0, proj1⟩ : P Z -> Z × Z`.
    pub endpoints: PresheafMap,
    pub provenance: CellFactorization,
}

pub fn path_object(z: &Arc<Presheaf>, jset: &GeneratingSet, fuel: usize) -> Result<PathObject> {
    let sq = product(z, z)?;
    let id = PresheafMap::identity(z);
    let diagonal = sq.mediator(&id, &id)?;
    let fact = soa_factorize_with(&diagonal, jset, fuel, SquareOrder::Canonical).complete()?;
    Ok(PathObject {
        of: z.clone(),
        apex: fact.middle().clone(),
        into: fact.left.clone(),
        proj0: comp(&fact.right, &sq.proj0),
        proj1: comp(&fact.right, &sq.proj1),
        endpoints: fact.right.clone(),
        provenance: fact,
    })
}

/// A right homotopy `h : Y -> P Z` in a given path object, constant on `i`.
pub fn right_homotopy_in(
    path: &PathObject,
    f0: &PresheafMap,
    f1: &PresheafMap,
    i: &PresheafMap,
) -> Result<Option<PresheafMap>> {
    if !f0.is_parallel_to(f1) || i.target() != f0.source() || f0.target() != &path.of {
        return Err(Error::NonComposable);
    }
    let sq = product(&path.of, &path.of)?;
    let pair = sq.mediator(f0, f1)?;
    let constant = comp(&comp(i, f0), &path.into);
    Ok(MapQuery::new(f0.source(), &path.apex).lie_over(&path.endpoints, &pair).fix_along(i, &constant).first())
}

#[derive(Debug, Clone)]
pub struct RightHomotopyWitness {
    pub path: PathObject,
    pub h: PresheafMap,
}

pub fn right_homotopic(
    f0: &PresheafMap,
    f1: &PresheafMap,
    i: &PresheafMap,
    jset: &GeneratingSet,
    fuel: usize,
) -> Result<Option<RightHomotopyWitness>> {
    if !f0.is_parallel_to(f1) || i.target() != f0.source() {
        return Err(Error::NonComposable);
    }
    let path = path_object(f0.target(), jset, fuel)?;
    Ok(right_homotopy_in(&path, f0, f1, i)?.map(|h| RightHomotopyWitness { path, h }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colimit::{initial, pushout, terminal};
    use crate::presheaf::fixtures::*;
    use crate::search::hom_enumerate;

    fn finsets(n: usize) -> (Vec<Arc<Presheaf>>, GeneratingSet, GeneratingSet) {
        let s = sets();
        let objs: Vec<_> = (0..=n).map(|k| set(&s, k)).collect();
        let point = fmap(&objs[0], &objs[1], &[]);
        let collapse = fmap(&objs[2], &objs[1], &[0, 0]);
        (objs.clone(), GeneratingSet::new("I1", vec![point.clone()]), GeneratingSet::new("I2", vec![point, collapse]))
    }

    fn assert_cylinder_laws(c: &CylinderObject) {
        let id = PresheafMap::identity(c.base_object());
        assert_eq!(comp(&c.incl0, &c.collapse), id);
        assert_eq!(comp(&c.incl1, &c.collapse), id);
        assert_eq!(comp(&c.over, &c.incl0), comp(&c.over, &c.incl1));
    }

    #[test]
    fn finset_cylinders() {
        let (objs, i1, i2) = finsets(2);
        let c = absolute_cylinder(&objs[2], &i1, 100).unwrap();
        assert_cylinder_laws(&c);
        assert_eq!(c.apex.size(0), 4);
        assert!(c.provenance.log.is_empty());
        assert_eq!(c.incl0.component(0), &[0, 1]);
        assert_eq!(c.incl1.component(0), &[2, 3]);

        let c = absolute_cylinder(&objs[1], &i2, 100).unwrap();
        assert_cylinder_laws(&c);
        assert_eq!(c.apex.size(0), 1);
        assert_eq!(c.provenance.log.len(), 1);
    }

    #[test]
    fn graph_cylinder_over_boundary() {
        let g = graphs();
        let boundary = graph(&g, 2, &[]);
        let a = graph(&g, 2, &[(0, 1)]);
        let p = graph(&g, 1, &[]);
        let bd = gmap(&boundary, &a, &[0, 1], &[]);
        let ig = GeneratingSet::new("IG", vec![from_initial(&p), bd.clone()]);
        let c = cylinder(&bd, &ig, 100).unwrap();
        assert_cylinder_laws(&c);
        assert!(c.provenance.log.is_empty());
        assert_eq!((c.apex.size(0), c.apex.size(1)), (2, 2));
        assert!(c.incl0.is_mono() && c.incl1.is_mono());
        let po = pushout(&bd, &bd).unwrap();
        assert_eq!(c.apex.actions(), po.apex.actions());
    }

    #[test]
    fn relative_part_must_agree() {
        let (objs, i1, _) = finsets(2);
        let i = fmap(&objs[1], &objs[2], &[0]);
        let f0 = PresheafMap::identity(&objs[2]);
        let f1 = fmap(&objs[2], &objs[2], &[1, 1]);
        assert_eq!(homotopic(&f0, &f1, &i, &i1, 100).unwrap_err(), Error::IncompatibleOnRelativePart);
    }

    #[test]
    fn finset_homotopy_relations() {
        let (objs, i1, i2) = finsets(2);
        for y in &objs {
            for z in &objs {
                let rel = from_initial(y);
                for f0 in hom_enumerate(y, z) {
                    let w = homotopic(&f0, &f0, &rel, &i1, 100).unwrap().unwrap();
                    assert_eq!(comp(&w.cylinder.incl0, &w.h), f0);
                    for f1 in hom_enumerate(y, z) {
                        // I1: the cylinder is Y ⊔ Y so every pair is homotopic
                        assert!(homotopic(&f0, &f1, &rel, &i1, 100).unwrap().is_some());
                        // I2: the cylinder is Y, so homotopy is equality
                        assert_eq!(homotopic(&f0, &f1, &rel, &i2, 100).unwrap().is_some(), f0 == f1);
                        let cc = homotopic_cross_check(&f0, &f1, &rel, &i2, 100).unwrap();
                        assert!(cc.agrees());
                    }
                }
            }
        }
    }

    #[test]
    fn deformation_retracts() {
        let (objs, i1, _) = finsets(2);
        let iota0 = fmap(&objs[1], &objs[2], &[0]);
        let w = strong_deformation_retraction(&iota0, &i1, 100).unwrap().unwrap();
        assert_eq!(w.retraction.component(0), &[0, 0]);
        // Cyl over iota0 is 2 ⊔_1 2, three points
        assert_eq!(w.homotopy.cylinder.apex.size(0), 3);
        assert!(deformation_retraction(&iota0, &i1, 100).unwrap().is_some());

        let id = PresheafMap::identity(&objs[2]);
        let w = strong_deformation_retraction(&id, &i1, 100).unwrap().unwrap();
        assert!(w.retraction.is_identity());

        assert!(strong_deformation_retraction(&from_initial(&objs[1]), &i1, 100).unwrap().is_none());
    }

    #[test]
    fn path_objects() {
        let (objs, i1, _) = finsets(2);
        let c = absolute_cylinder(&objs[1], &i1, 100).unwrap();
        let j1 = GeneratingSet::new("J1", vec![c.incl0.clone()]);
        let p = path_object(&objs[1], &j1, 100).unwrap();
        assert!(p.provenance.log.is_empty());
        assert_eq!(p.apex.size(0), 1);
        for z in &objs {
            let p = path_object(z, &j1, 100).unwrap();
            let id = PresheafMap::identity(z);
            assert_eq!(comp(&p.into, &p.proj0), id);
            assert_eq!(comp(&p.into, &p.proj1), id);
        }
        let s = sets();
        let t = terminal(&s);
        assert_eq!(path_object(&t, &j1, 100).unwrap().apex, t);
        let e = initial(&s);
        assert!(path_object(&e, &j1, 100).unwrap().apex.is_empty());
    }

    #[test]
    fn right_homotopy_basics() {
        let (objs, i1, _) = finsets(2);
        let c = absolute_cylinder(&objs[1], &i1, 100).unwrap();
        let j1 = GeneratingSet::new("J1", vec![c.incl0.clone()]);
        for y in &objs {
            for z in &objs {
                let rel = from_initial(y);
                for f in hom_enumerate(y, z) {
                    let w = right_homotopic(&f, &f, &rel, &j1, 100).unwrap().unwrap();
                    assert_eq!(w.h, comp(&f, &w.path.into));
                }
            }
        }
    }
}
