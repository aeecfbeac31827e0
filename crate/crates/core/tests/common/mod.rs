#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use minmodel::analysis::{Analyzer, Bound, BoundedUniverse};
use minmodel::base::{graph_base, point_base};
use minmodel::colimit::initial;
use minmodel::factorization::GeneratingSet;
use minmodel::{compose, hom_enumerate, BaseCategory, Presheaf, PresheafMap};
use proptest::prelude::*;

pub const FUEL: usize = 1024;

pub fn sets() -> Arc<BaseCategory> {
    static B: OnceLock<Arc<BaseCategory>> = OnceLock::new();
    B.get_or_init(|| Arc::new(point_base())).clone()
}

pub fn graphs() -> Arc<BaseCategory> {
    static B: OnceLock<Arc<BaseCategory>> = OnceLock::new();
    B.get_or_init(|| Arc::new(graph_base())).clone()
}

pub fn set(n: usize) -> Arc<Presheaf> {
    let names = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Arc::new(Presheaf::from_parts(sets(), vec![names], vec![(0..n).collect()]).unwrap())
}

pub fn fmap(src: &Arc<Presheaf>, tgt: &Arc<Presheaf>, images: &[usize]) -> PresheafMap {
    PresheafMap::new(src.clone(), tgt.clone(), vec![images.to_vec()]).unwrap()
}

/// A graph with `nv` vertices and `(source, target)` edges.
pub fn graph(nv: usize, edges: &[(usize, usize)]) -> Arc<Presheaf> {
    let v = (0..nv).map(|i| format!("x{i}")).collect();
    let e = (0..edges.len()).map(|i| format!("a{i}")).collect();
    let src = edges.iter().map(|p| p.0).collect();
    let tgt = edges.iter().map(|p| p.1).collect();
    Arc::new(
        Presheaf::from_parts(graphs(), vec![v, e], vec![(0..nv).collect(), (0..edges.len()).collect(), src, tgt])
            .unwrap(),
    )
}

pub fn gmap(src: &Arc<Presheaf>, tgt: &Arc<Presheaf>, v: &[usize], e: &[usize]) -> PresheafMap {
    PresheafMap::new(src.clone(), tgt.clone(), vec![v.to_vec(), e.to_vec()]).unwrap()
}

pub fn then(f: &PresheafMap, g: &PresheafMap) -> PresheafMap {
    compose(f, g).unwrap()
}

pub fn homs(a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Vec<PresheafMap> {
    hom_enumerate(a, b).collect()
}

/// `{0 -> 1}`
pub fn finset_i1() -> GeneratingSet {
    GeneratingSet::new("I1", vec![fmap(&set(0), &set(1), &[])])
}

/// `{0 -> 1, 2 -> 1}`
pub fn finset_i2() -> GeneratingSet {
    GeneratingSet::new("I2", vec![fmap(&set(0), &set(1), &[]), fmap(&set(2), &set(1), &[0, 0])])
}

pub fn point() -> Arc<Presheaf> {
    graph(1, &[])
}

pub fn arrow() -> Arc<Presheaf> {
    graph(2, &[(0, 1)])
}

pub fn boundary() -> PresheafMap {
    gmap(&graph(2, &[]), &arrow(), &[0, 1], &[])
}

/// `{0 -> P, ∂A -> A}`
pub fn gph_ig() -> GeneratingSet {
    GeneratingSet::new("IG", vec![gmap(&initial(&graphs()), &point(), &[], &[]), boundary()])
}

pub struct Fixture {
    pub an: Analyzer,
    pub u: BoundedUniverse,
}

pub fn fixture(gens: GeneratingSet, bound: Vec<usize>) -> Fixture {
    let base = gens.maps[0].base().clone();
    let an = Analyzer::new(gens, FUEL);
    let u = BoundedUniverse::build(&an, &base, Bound(bound)).unwrap();
    Fixture { an, u }
}

/// Every graph with at most `max_v` vertices and `max_e` edges.
pub fn small_graphs(max_v: usize, max_e: usize) -> Vec<Arc<Presheaf>> {
    let mut out = Vec::new();
    for nv in 0..=max_v {
        let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|s| (0..nv).map(move |t| (s, t))).collect();
        for ne in 0..=max_e {
            let mut choices = vec![vec![]];
            for _ in 0..ne {
                choices = choices
                    .into_iter()
                    .flat_map(|c: Vec<usize>| (0..pairs.len()).map(move |k| [c.clone(), vec![k]].concat()))
                    .collect();
            }
            for c in choices {
                let edges: Vec<(usize, usize)> = c.iter().map(|&k| pairs[k]).collect();
                out.push(graph(nv, &edges));
            }
        }
    }
    out
}

pub fn arb_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = Arc<Presheaf>> {
    (0..=max_v).prop_flat_map(move |nv| {
        let edges = if nv == 0 {
            Just(Vec::new()).boxed()
        } else {
            prop::collection::vec((0..nv, 0..nv), 0..=max_e).boxed()
        };
        edges.prop_map(move |e| graph(nv, &e))
    })
}

/// A graph map between random small graphs, when one exists.
pub fn arb_graph_map(max_v: usize, max_e: usize) -> impl Strategy<Value = PresheafMap> {
    (arb_graph(max_v, max_e), arb_graph(max_v, max_e), any::<prop::sample::Index>()).prop_filter_map(
        "no maps between the chosen graphs",
        |(a, b, k)| {
            let hs = homs(&a, &b);
            (!hs.is_empty()).then(|| hs[k.index(hs.len())].clone())
        },
    )
}

/// All functions between sets of size at most `n`.
pub fn set_maps(n: usize) -> Vec<PresheafMap> {
    (0..=n).flat_map(|a| (0..=n).flat_map(move |b| homs(&set(a), &set(b)))).collect()
}
