mod common;

use std::sync::Arc;

use common::*;
use minmodel::homotopy::{absolute_cylinder, cylinder, HomotopyOracle};
use minmodel::lifting::{
    first_unliftable, has_rlp, has_rlp_up_to, has_rlp_up_to_object, solve_lifting, squares, Equality,
    LiftingProblem,
};
use minmodel::PresheafMap;
use proptest::prelude::*;

fn brute_force_lift(sq: &LiftingProblem) -> bool {
    homs(sq.left.target(), sq.right.source())
        .iter()
        .any(|h| then(&sq.left, h) == sq.top && then(h, &sq.right) == sq.bottom)
}

#[test]
fn object_lifting_on_sets() {
    let gens = finset_i1();
    let one = set(1);
    let oracle = HomotopyOracle::new(Arc::new(absolute_cylinder(&one, &gens, FUEL).unwrap()));
    for f in set_maps(3) {
        let (x, y) = (f.source().total_size(), f.target().total_size());
        assert_eq!(has_rlp_up_to_object(&f, &one, &oracle).unwrap(), x != 0 || y == 0, "{f:?}");
    }
}

/// Edges between images of two domain vertices are reflected.
fn reflects_edges(g: &PresheafMap) -> bool {
    let (x, y) = (g.source(), g.target());
    let edges = |p: &minmodel::Presheaf| -> Vec<(usize, usize)> {
        (0..p.size(1)).map(|e| (p.act(2, e), p.act(3, e))).collect()
    };
    let (ex, ey) = (edges(x), edges(y));
    (0..x.size(0)).all(|x0| {
        (0..x.size(0)).all(|x1| !ey.contains(&(g.apply(0, x0), g.apply(0, x1))) || ex.contains(&(x0, x1)))
    })
}

#[test]
fn edge_lifting_on_graphs() {
    let gens = gph_ig();
    let oracle = HomotopyOracle::new(Arc::new(cylinder(&boundary(), &gens, FUEL).unwrap()));
    let objs = small_graphs(2, 2);
    let mut checked = 0;
    for a in &objs {
        for b in &objs {
            for g in homs(a, b) {
                assert_eq!(has_rlp_up_to(&g, &[boundary()], &oracle).unwrap(), reflects_edges(&g), "{g:?}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 929);
}

#[test]
fn lifting_examples() {
    // a surjection of sets lifts against 0 -> 1, an injection that misses a point does not
    let i = fmap(&set(0), &set(1), &[]);
    assert!(has_rlp(&fmap(&set(2), &set(1), &[0, 0]), std::slice::from_ref(&i)));
    let sq = first_unliftable(&i, &fmap(&set(1), &set(2), &[0])).unwrap();
    assert_eq!(sq.bottom.component(0), &[1]);
    assert!(solve_lifting(&sq).is_none());
    // non-commuting squares are rejected
    let f = fmap(&set(1), &set(2), &[0]);
    let bad = LiftingProblem::new(f.clone(), f.clone(), PresheafMap::identity(&set(1)), fmap(&set(2), &set(2), &[1, 0]));
    assert!(bad.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_is_complete_and_deterministic(i in arb_graph_map(2, 2), p in arb_graph_map(2, 2)) {
        for sq in squares(&i, &p).take(200) {
            let found = solve_lifting(&sq);
            prop_assert_eq!(found.is_some(), brute_force_lift(&sq));
            if let Some(h) = &found {
                prop_assert_eq!(&then(&sq.left, h), &sq.top);
                prop_assert_eq!(&then(h, &sq.right), &sq.bottom);
            }
            prop_assert_eq!(found, solve_lifting(&sq));
        }
    }

    #[test]
    fn rlp_is_monotone(g in arb_graph_map(3, 2), s1 in arb_graph_map(2, 1), s2 in arb_graph_map(2, 1)) {
        if has_rlp(&g, &[s1.clone(), s2.clone()]) {
            prop_assert!(has_rlp(&g, std::slice::from_ref(&s1)));
            prop_assert!(has_rlp(&g, &[s2]));
        }
    }

    #[test]
    fn equality_oracle_degenerates(g in arb_graph_map(3, 2), s in arb_graph_map(2, 2)) {
        let set = [s];
        prop_assert_eq!(has_rlp_up_to(&g, &set, &Equality).unwrap(), has_rlp(&g, &set));
    }
}
