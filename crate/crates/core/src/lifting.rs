//! Lifting problems: exact, against sets of maps, and up to a relation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::colimit::from_initial;
use crate::error::{Error, Result};
use crate::presheaf::{comp, Presheaf, PresheafMap};
use crate::search::{hom_enumerate, MapQuery, MapSearch};

/// A commutative square
///
/// ```text
///  A --top--> C
///  |left      |right
///  B --bot--> D
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiftingProblem {
    pub left: PresheafMap,
    pub right: PresheafMap,
    pub top: PresheafMap,
    pub bottom: PresheafMap,
}

impl LiftingProblem {
    pub fn new(left: PresheafMap, right: PresheafMap, top: PresheafMap, bottom: PresheafMap) -> Result<Self> {
        let shapes_ok = left.source() == top.source()
            && top.target() == right.source()
            && left.target() == bottom.source()
            && bottom.target() == right.target();
        if !shapes_ok || comp(&top, &right) != comp(&left, &bottom) {
            return Err(Error::NonCommutingSquare);
        }
        Ok(LiftingProblem { left, right, top, bottom })
    }

    /// All diagonals `h` with `h ∘ left = top` and `right ∘ h = bottom`, in order.
    pub fn lifts(&self) -> MapSearch {
        self.upper_lifts().lie_over(&self.right, &self.bottom).search()
    }

    /// Diagonals for which only the upper triangle is required to commute.
    fn upper_lifts(&self) -> MapQuery {
        MapQuery::new(self.left.target(), self.right.source()).fix_along(&self.left, &self.top)
    }
}

/// First exact lift of a square, if any.
pub fn solve_lifting(p: &LiftingProblem) -> Option<PresheafMap> {
    p.lifts().next()
}

/// A relation on parallel maps `B -> D`, as used for lifting up to a relation.
pub trait RelationOracle {
    type Witness;

    fn tag(&self) -> String;

    /// `Some(witness)` when `a R b`.
    fn relate(&self, a: &PresheafMap, b: &PresheafMap) -> Result<Option<Self::Witness>>;
}

/// Plain equality of maps.
#[derive(Debug, Clone, Copy, Default)]
pub struct Equality;

impl RelationOracle for Equality {
    type Witness = ();

    fn tag(&self) -> String {
        "equality".into()
    }

    fn relate(&self, a: &PresheafMap, b: &PresheafMap) -> Result<Option<()>> {
        Ok((a == b).then_some(()))
    }
}

/// The empty relation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Never;

impl RelationOracle for Never {
    type Witness = ();

    fn tag(&self) -> String {
        "empty".into()
    }

    fn relate(&self, _: &PresheafMap, _: &PresheafMap) -> Result<Option<()>> {
        Ok(None)
    }
}

/// First `h` with `h ∘ left = top` exactly and `(right ∘ h) R bottom`.
pub fn solve_lifting_up_to<R: RelationOracle>(
    p: &LiftingProblem,
    rel: &R,
) -> Result<Option<(PresheafMap, R::Witness)>> {
    for h in p.upper_lifts().search() {
        if let Some(w) = rel.relate(&comp(&h, &p.right), &p.bottom)? {
            return Ok(Some((h, w)));
        }
    }
    Ok(None)
}

/// Every commuting square from `left` to `right`: tops first, then the
/// bottoms compatible with each top (pruned during assignment).
pub fn squares<'a>(left: &'a PresheafMap, right: &'a PresheafMap) -> impl Iterator<Item = LiftingProblem> + 'a {
    hom_enumerate(left.source(), right.source()).flat_map(move |top| {
        let along = comp(&top, right);
        MapQuery::new(left.target(), right.target()).fix_along(left, &along).search().map(move |bottom| {
            LiftingProblem { left: left.clone(), right: right.clone(), top: top.clone(), bottom }
        })
    })
}

/// First square from `left` to `right` without an exact lift.
pub fn first_unliftable(left: &PresheafMap, right: &PresheafMap) -> Option<LiftingProblem> {
    squares(left, right).find(|sq| solve_lifting(sq).is_none())
}

/// `g` has the right lifting property against every map in `set`.
pub fn has_rlp(g: &PresheafMap, set: &[PresheafMap]) -> bool {
    set.iter().all(|s| first_unliftable(s, g).is_none())
}

/// `f` has the left lifting property against every map in `set`.
pub fn has_llp(f: &PresheafMap, set: &[PresheafMap]) -> bool {
    set.iter().all(|s| first_unliftable(f, s).is_none())
}

/// First square from `left` to `right` with no lift up to `rel`.
pub fn first_unliftable_up_to<R: RelationOracle>(
    left: &PresheafMap,
    right: &PresheafMap,
    rel: &R,
) -> Result<Option<LiftingProblem>> {
    for sq in squares(left, right) {
        if solve_lifting_up_to(&sq, rel)?.is_none() {
            return Ok(Some(sq));
        }
    }
    Ok(None)
}

pub fn has_rlp_up_to<R: RelationOracle>(g: &PresheafMap, set: &[PresheafMap], rel: &R) -> Result<bool> {
    for s in set {
        if first_unliftable_up_to(s, g, rel)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Right lifting up to `rel` against the object `v`, i.e. against `0 -> v`.
pub fn has_rlp_up_to_object<R: RelationOracle>(g: &PresheafMap, v: &Arc<Presheaf>, rel: &R) -> Result<bool> {
    Ok(first_unliftable_up_to(&from_initial(v), g, rel)?.is_none())
}

/// Memo of "every square from `left` to `right` has an exact lift".
/// Answers are pure functions of the key, so sharing it never changes results.
#[derive(Debug, Default)]
pub struct LiftingCache {
    verdicts: Mutex<HashMap<(PresheafMap, PresheafMap), bool>>,
}

impl LiftingCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn all_liftable(&self, left: &PresheafMap, right: &PresheafMap) -> bool {
        let key = (left.clone(), right.clone());
        if let Some(&v) = self.verdicts.lock().unwrap().get(&key) {
            return v;
        }
        let v = first_unliftable(left, right).is_none();
        self.verdicts.lock().unwrap().insert(key, v);
        v
    }

    pub fn has_rlp(&self, g: &PresheafMap, set: &[PresheafMap]) -> bool {
        set.iter().all(|s| self.all_liftable(s, g))
    }

    pub fn len(&self) -> usize {
        self.verdicts.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colimit::coproduct;
    use crate::presheaf::fixtures::*;

    #[test]
    fn identity_on_the_left_always_lifts() {
        let s = sets();
        let (two, three) = (set(&s, 2), set(&s, 3));
        let g = fmap(&three, &two, &[0, 1, 1]);
        for u in hom_enumerate(&two, &three) {
            let v = comp(&u, &g);
            let p = LiftingProblem::new(PresheafMap::identity(&two), g.clone(), u.clone(), v).unwrap();
            assert_eq!(solve_lifting(&p), Some(u));
        }
    }

    #[test]
    fn point_lifts_against_collapse() {
        let s = sets();
        let (zero, one, two) = (set(&s, 0), set(&s, 1), set(&s, 2));
        let p = LiftingProblem::new(
            fmap(&zero, &one, &[]),
            fmap(&two, &one, &[0, 0]),
            fmap(&zero, &two, &[]),
            PresheafMap::identity(&one),
        )
        .unwrap();
        assert_eq!(p.lifts().count(), 2);
        assert_eq!(solve_lifting(&p).unwrap().component(0), &[0]);
    }

    #[test]
    fn collapse_does_not_lift_against_fold() {
        let s = sets();
        let (one, two) = (set(&s, 1), set(&s, 2));
        let sum = coproduct(&one, &one).unwrap();
        let fold = sum.mediator(&PresheafMap::identity(&one), &PresheafMap::identity(&one)).unwrap();
        let p = LiftingProblem::new(
            fmap(&two, &one, &[0, 0]),
            fold,
            fmap(&two, &sum.apex, &[0, 1]),
            PresheafMap::identity(&one),
        )
        .unwrap();
        // oracle: the two maps 1 -> 1⊔1 are both constant and miss one point
        assert!(hom_enumerate(&one, &sum.apex).all(|h| comp(&fmap(&two, &one, &[0, 0]), &h) != p.top));
        assert!(solve_lifting(&p).is_none());
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let s = sets();
        let (one, two) = (set(&s, 1), set(&s, 2));
        let r = LiftingProblem::new(
            PresheafMap::identity(&one),
            PresheafMap::identity(&two),
            fmap(&one, &two, &[0]),
            fmap(&one, &two, &[1]),
        );
        assert_eq!(r.unwrap_err(), Error::NonCommutingSquare);
    }

    #[test]
    fn equality_and_never_relations() {
        let s = sets();
        let objs: Vec<_> = (0..=2).map(|n| set(&s, n)).collect();
        let gens = [fmap(&objs[0], &objs[1], &[]), fmap(&objs[2], &objs[1], &[0, 0])];
        for x in &objs {
            for y in &objs {
                for g in hom_enumerate(x, y) {
                    for i in &gens {
                        for sq in squares(i, &g) {
                            let exact = solve_lifting(&sq);
                            let up_to = solve_lifting_up_to(&sq, &Equality).unwrap().map(|p| p.0);
                            assert_eq!(exact, up_to);
                            assert!(solve_lifting_up_to(&sq, &Never).unwrap().is_none());
                        }
                    }
                    assert_eq!(has_rlp(&g, &gens), has_rlp_up_to(&g, &gens, &Equality).unwrap());
                }
            }
        }
    }

    /// Against {0 -> 1} the right class is the surjections, against
    /// {0 -> 1, 2 -> 1} the bijections.
    #[test]
    fn rlp_characterizes_surjections_and_bijections() {
        let s = sets();
        let objs: Vec<_> = (0..=3).map(|n| set(&s, n)).collect();
        let point = fmap(&objs[0], &objs[1], &[]);
        let collapse = fmap(&objs[2], &objs[1], &[0, 0]);
        let cache = LiftingCache::new();
        for x in &objs {
            for y in &objs {
                for g in hom_enumerate(x, y) {
                    assert_eq!(has_rlp(&g, std::slice::from_ref(&point)), g.is_epi());
                    assert_eq!(has_rlp(&g, &[point.clone(), collapse.clone()]), g.is_iso());
                    assert_eq!(cache.has_rlp(&g, &[point.clone(), collapse.clone()]), g.is_iso());
                    assert!(has_rlp(&PresheafMap::identity(x), &[point.clone(), collapse.clone(), g.clone()]));
                }
            }
        }
        assert!(!cache.is_empty());
    }

    #[test]
    fn lifting_is_complete_against_brute_force() {
        let s = sets();
        let objs: Vec<_> = (0..=3).map(|n| set(&s, n)).collect();
        let lefts = [fmap(&objs[0], &objs[1], &[]), fmap(&objs[2], &objs[1], &[0, 0]), fmap(&objs[1], &objs[2], &[1])];
        for x in &objs {
            for y in &objs {
                for g in hom_enumerate(x, y) {
                    for f in &lefts {
                        for sq in squares(f, &g) {
                            let brute = hom_enumerate(sq.left.target(), sq.right.source())
                                .find(|h| comp(&sq.left, h) == sq.top && comp(h, &sq.right) == sq.bottom);
                            assert_eq!(solve_lifting(&sq), brute);
                            assert_eq!(solve_lifting(&sq), solve_lifting(&sq));
                        }
                    }
                }
            }
        }
    }
}
