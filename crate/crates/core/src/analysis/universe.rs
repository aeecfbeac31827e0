use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::base::BaseCategory;
use crate::colimit::from_initial;
use crate::error::Result;
use crate::presheaf::{Presheaf, PresheafMap};
use crate::retract::is_split_mono;
use crate::search::hom_enumerate;

use super::engine::Analyzer;

/// Per-object carrier size bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bound(pub Vec<usize>);

impl Bound {
    pub fn uniform(base: &BaseCategory, n: usize) -> Self {
        Bound(vec![n; base.object_count()])
    }

    pub fn describe(&self, base: &BaseCategory) -> String {
        base.objects().iter().zip(&self.0).map(|(o, n)| format!("{o}:{n}")).collect::<Vec<_>>().join(" ")
    }
}

/// Every presheaf with carriers within `bound`, elements named `0`, `1`, ...
/// Ordered by carrier sizes (lexicographically), then by actions.
pub fn enumerate_presheaves(base: &Arc<BaseCategory>, bound: &Bound) -> Vec<Presheaf> {
    let n_obj = base.object_count();
    let morphisms = base.morphisms();
    let moving: Vec<usize> = (0..morphisms.len()).filter(|&m| !base.is_identity(m)).collect();
    let mut out = Vec::new();
    let mut sizes = vec![0usize; n_obj];
    loop {
        let carriers: Vec<Vec<String>> = sizes.iter().map(|&n| (0..n).map(|k| k.to_string()).collect()).collect();
        // one odometer digit per (moving morphism, element at its codomain)
        let digits: Vec<(usize, usize)> = moving
            .iter()
            .flat_map(|&m| (0..sizes[morphisms[m].cod]).map(move |x| (m, x)))
            .collect();
        let radix: Vec<usize> = digits.iter().map(|&(m, _)| sizes[morphisms[m].dom]).collect();
        if radix.iter().all(|&r| r > 0) {
            let mut value = vec![0usize; digits.len()];
            loop {
                let mut actions: Vec<Vec<usize>> = morphisms
                    .iter()
                    .enumerate()
                    .map(|(m, mor)| if base.is_identity(m) { (0..sizes[mor.cod]).collect() } else { vec![0; sizes[mor.cod]] })
                    .collect();
                for (&(m, x), &v) in digits.iter().zip(&value) {
                    actions[m][x] = v;
                }
                if let Ok(p) = Presheaf::from_parts(base.clone(), carriers.clone(), actions) {
                    out.push(p);
                }
                if !increment(&mut value, &radix) {
                    break;
                }
            }
        }
        if !increment(&mut sizes, &bound.0.iter().map(|b| b + 1).collect::<Vec<_>>()) {
            break;
        }
    }
    out
}

/// Odometer step with the last digit least significant; `false` on wrap-around.
fn increment(value: &mut [usize], radix: &[usize]) -> bool {
    for k in (0..value.len()).rev() {
        value[k] += 1;
        if value[k] < radix[k] {
            return true;
        }
        value[k] = 0;
    }
    false
}

#[derive(Debug, Clone)]
pub struct UniverseMap {
    pub source: usize,
    pub target: usize,
    pub map: PresheafMap,
    /// `None` when the factorization ran out of fuel.
    pub cofibration: Option<bool>,
}

/// All presheaves within a bound, all maps between them, and their
/// cofibration status with respect to a fixed generating set.
#[derive(Debug, Clone)]
pub struct BoundedUniverse {
    pub bound: Bound,
    pub objects: Vec<Arc<Presheaf>>,
    pub labels: Vec<String>,
    pub cofibrant: Vec<bool>,
    pub maps: Vec<UniverseMap>,
    /// Objects left out because their cofibrancy could not be decided.
    pub excluded: usize,
    by_pair: HashMap<(usize, usize), (usize, usize)>,
    index: HashMap<Arc<Presheaf>, usize>,
    /// Cofibrations between cofibrant objects that are not split monos.
    purity_tests: Vec<usize>,
    undecided_cofibrations: usize,
    scope: String,
}

impl BoundedUniverse {
    pub fn build(an: &Analyzer, base: &Arc<BaseCategory>, bound: Bound) -> Result<Self> {
        let candidates: Vec<Arc<Presheaf>> = enumerate_presheaves(base, &bound).into_iter().map(Arc::new).collect();
        let cof: Vec<Option<bool>> = candidates
            .par_iter()
            .map(|x| an.in_cof_undecided(&from_initial(x)))
            .collect::<Result<_>>()?;
        let mut objects = Vec::new();
        let mut cofibrant = Vec::new();
        let mut excluded = 0;
        for (x, c) in candidates.into_iter().zip(cof) {
            match c {
                Some(c) => {
                    objects.push(x);
                    cofibrant.push(c);
                }
                None => excluded += 1,
            }
        }
        let labels: Vec<String> = (0..objects.len()).map(|k| format!("U{k}")).collect();
        let pairs: Vec<(usize, usize)> =
            (0..objects.len()).flat_map(|a| (0..objects.len()).map(move |b| (a, b))).collect();
        let per_pair: Vec<Vec<UniverseMap>> = pairs
            .par_iter()
            .map(|&(a, b)| {
                hom_enumerate(&objects[a], &objects[b])
                    .map(|map| {
                        let cofibration = an.in_cof_undecided(&map)?;
                        Ok(UniverseMap { source: a, target: b, map, cofibration })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut maps = Vec::new();
        let mut by_pair = HashMap::new();
        for (&pair, ms) in pairs.iter().zip(per_pair) {
            by_pair.insert(pair, (maps.len(), maps.len() + ms.len()));
            maps.extend(ms);
        }
        let purity_tests = maps
            .iter()
            .enumerate()
            .filter(|(_, m)| m.cofibration == Some(true) && cofibrant[m.source] && cofibrant[m.target])
            .filter(|(_, m)| !is_split_mono(&m.map))
            .map(|(k, _)| k)
            .collect();
        let undecided_cofibrations = maps.iter().filter(|m| m.cofibration.is_none()).count();
        let index = objects.iter().enumerate().map(|(k, x)| (x.clone(), k)).collect();
        let scope = format!("within bound {}", bound.describe(base));
        Ok(BoundedUniverse {
            bound,
            objects,
            labels,
            cofibrant,
            maps,
            excluded,
            by_pair,
            index,
            purity_tests,
            undecided_cofibrations,
            scope,
        })
    }

    pub fn scope(&self) -> &str {
        &self.scope
    }

    pub fn object_index(&self, x: &Arc<Presheaf>) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Indices of the maps from object `a` to object `b`, in enumeration order.
    pub fn indices_between(&self, a: usize, b: usize) -> std::ops::Range<usize> {
        let (lo, hi) = self.by_pair[&(a, b)];
        lo..hi
    }

    /// Indices of the maps out of object `a`.
    pub fn indices_from(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects.len()).flat_map(move |b| self.indices_between(a, b))
    }

    pub fn maps_between(&self, a: usize, b: usize) -> &[UniverseMap] {
        &self.maps[self.indices_between(a, b)]
    }

    pub fn maps_from(&self, a: usize) -> impl Iterator<Item = &UniverseMap> + '_ {
        (0..self.objects.len()).flat_map(move |b| self.maps_between(a, b))
    }

    pub fn maps_into(&self, b: usize) -> impl Iterator<Item = &UniverseMap> + '_ {
        (0..self.objects.len()).flat_map(move |a| self.maps_between(a, b))
    }

    pub fn cofibrant_objects(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects.len()).filter(|&k| self.cofibrant[k])
    }

    /// Indices of maps that are cofibrations between cofibrant objects.
    pub fn cofibrations_between_cofibrant(&self) -> impl Iterator<Item = usize> + '_ {
        self.maps
            .iter()
            .enumerate()
            .filter(|(_, m)| m.cofibration == Some(true) && self.cofibrant[m.source] && self.cofibrant[m.target])
            .map(|(k, _)| k)
    }

    /// The cofibrations between cofibrant objects that purity has to be tested against:
    /// split monos are skipped since every map factors through them.
    pub fn purity_tests(&self) -> &[usize] {
        &self.purity_tests
    }

    pub fn undecided_cofibrations(&self) -> usize {
        self.undecided_cofibrations
    }

    /// `U3 -> U5` style name of a map in the universe.
    pub fn describe_map(&self, k: usize) -> String {
        let m = &self.maps[k];
        format!("{} -> {}", self.labels[m.source], self.labels[m.target])
    }
}
