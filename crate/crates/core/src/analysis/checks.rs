use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::colimit::{coproduct_map, pushout};
use crate::error::Result;
use crate::presheaf::{comp, PresheafMap};
use crate::search::{hom_enumerate, MapQuery};

use super::engine::{square_counterexample, Analyzer};
use super::report::{aggregate, undecided, Counterexample, Probe, VerdictReport};
use super::universe::BoundedUniverse;

/// Bounded checks over a universe, for the generating set of an analyzer.
pub struct Checker<'a> {
    pub an: &'a Analyzer,
    pub u: &'a BoundedUniverse,
    pure_memo: Mutex<HashMap<PresheafMap, Probe>>,
}

fn inconclusive(what: &str) -> Probe {
    Probe::Inconclusive(format!("{what} ran out of fuel"))
}

impl<'a> Checker<'a> {
    pub fn new(an: &'a Analyzer, u: &'a BoundedUniverse) -> Self {
        Checker { an, u, pure_memo: Mutex::default() }
    }

    pub fn scope(&self) -> &str {
        self.u.scope()
    }

    fn label(&self, k: usize) -> String {
        self.u.describe_map(k)
    }

    /// Purity of `f` against the cofibrations between cofibrant objects of the universe.
    pub fn purity(&self, f: &PresheafMap) -> Probe {
        if let Some(p) = self.pure_memo.lock().unwrap().get(f) {
            return p.clone();
        }
        let p = self.purity_uncached(f);
        self.pure_memo.lock().unwrap().insert(f.clone(), p.clone());
        p
    }

    fn purity_uncached(&self, f: &PresheafMap) -> Probe {
        for &k in self.u.purity_tests() {
            let i = &self.u.maps[k].map;
            for top in hom_enumerate(i.source(), f.source()) {
                let along = comp(&top, f);
                let Some(bottom) = MapQuery::new(i.target(), f.target()).fix_along(i, &along).first() else {
                    continue;
                };
                if !MapQuery::new(i.target(), f.source()).fix_along(i, &top).exists() {
                    return Probe::Fail(
                        Counterexample::new(format!("top map does not factor through cofibration {}", self.label(k)))
                            .with("cofibration", i)
                            .with("map", f)
                            .with("top", &top)
                            .with("bottom", &bottom),
                    );
                }
            }
        }
        if self.u.undecided_cofibrations() > 0 {
            return Probe::Inconclusive(format!(
                "cofibration status undecided for {} map(s)",
                self.u.undecided_cofibrations()
            ));
        }
        Probe::Pass
    }

    pub fn is_pure(&self, f: &PresheafMap) -> VerdictReport {
        let mut r = aggregate("pure", self.scope(), [self.purity(f)]);
        r.instances = self.u.purity_tests().len();
        r
    }

    /// RLP up to absolute homotopy against every cofibrant object of the universe.
    fn lifts_against_cofibrant_objects(&self, f: &PresheafMap) -> Result<Probe> {
        for v in self.u.cofibrant_objects() {
            match undecided(self.an.first_unliftable_against_object(f, &self.u.objects[v]))? {
                None => return Ok(inconclusive(&format!("cylinder of {}", self.u.labels[v]))),
                Some(Some(sq)) => {
                    return Ok(Probe::Fail(square_counterexample(
                        &format!("no lift up to homotopy against object {}", self.u.labels[v]),
                        &sq,
                    )))
                }
                Some(None) => {}
            }
        }
        Ok(Probe::Pass)
    }

    /// Pure, and RLP up to homotopy against all cofibrant objects.
    pub fn pure_and_lifting(&self, f: &PresheafMap) -> Result<Probe> {
        let p = self.purity(f);
        if matches!(p, Probe::Fail(_)) {
            return Ok(p);
        }
        let l = self.lifts_against_cofibrant_objects(f)?;
        Ok(match (p, l) {
            (_, Probe::Fail(c)) => Probe::Fail(c),
            (Probe::Inconclusive(m), _) | (_, Probe::Inconclusive(m)) => Probe::Inconclusive(m),
            _ => Probe::Pass,
        })
    }

    /// Trivial fibrations between cofibrant objects of the universe.
    pub fn trivial_fibrations_between_cofibrant(&self) -> Vec<usize> {
        let candidates: Vec<usize> = (0..self.u.maps.len())
            .filter(|&k| {
                let m = &self.u.maps[k];
                self.u.cofibrant[m.source] && self.u.cofibrant[m.target]
            })
            .collect();
        let keep: Vec<bool> = candidates.par_iter().map(|&k| self.an.in_inj(&self.u.maps[k].map)).collect();
        candidates.into_iter().zip(keep).filter(|p| p.1).map(|p| p.0).collect()
    }

    pub fn check_appropriate(&self) -> Result<VerdictReport> {
        let tfs = self.trivial_fibrations_between_cofibrant();
        let work: Vec<(usize, usize)> = tfs
            .iter()
            .flat_map(|&t| self.u.indices_from(self.u.maps[t].source).map(move |c| (t, c)))
            .filter(|&(_, c)| self.u.maps[c].cofibration != Some(false))
            .collect();
        let probes: Vec<Probe> = work
            .par_iter()
            .map(|&(t, c)| {
                let (tm, cm) = (&self.u.maps[t], &self.u.maps[c]);
                if cm.cofibration.is_none() {
                    return Ok(inconclusive(&format!("cofibration test for {}", self.label(c))));
                }
                let po = pushout(&cm.map, &tm.map)?;
                let pushed = &po.leg_from_b;
                let context = || {
                    Counterexample::new(format!(
                        "pushout of trivial fibration {} along cofibration {}",
                        self.label(t),
                        self.label(c)
                    ))
                    .with("trivial_fibration", &tm.map)
                    .with("cofibration", &cm.map)
                    .with("pushout", pushed)
                };
                Ok(match self.pure_and_lifting(pushed)? {
                    Probe::Fail(c) => Probe::Fail(c.nested(context())),
                    other => other,
                })
            })
            .collect::<Result<_>>()?;
        let mut r = aggregate("appropriate", self.scope(), probes);
        r.diagnostics.push(format!("{} trivial fibration(s) between cofibrant objects", tfs.len()));
        Ok(r)
    }

    /// Pushouts of `J_I` maps along maps out of their domains into universe objects.
    fn jset_pushouts(&self) -> Result<Option<Vec<(usize, PresheafMap, PresheafMap)>>> {
        let Some(j) = undecided(self.an.jset())? else { return Ok(None) };
        let mut out = Vec::new();
        for (k, jm) in j.maps.iter().enumerate() {
            for x in &self.u.objects {
                for along in hom_enumerate(jm.source(), x) {
                    let po = pushout(&along, jm)?;
                    out.push((k, along, po.leg_from_b));
                }
            }
        }
        Ok(Some(out))
    }

    pub fn check_main_condition(&self) -> Result<VerdictReport> {
        let appropriate = self.check_appropriate()?;
        let lifting = match self.jset_pushouts()? {
            None => VerdictReport::not_evaluated("jset-lifting", self.scope(), "J ran out of fuel"),
            Some(pushouts) => {
                let domains = self.an.gens().domains();
                let probes: Vec<Probe> = pushouts
                    .par_iter()
                    .map(|(k, along, jp)| {
                        for d in &domains {
                            match undecided(self.an.first_unliftable_against_object(jp, d))? {
                                None => return Ok(inconclusive("cylinder of a generator domain")),
                                Some(Some(sq)) => {
                                    return Ok(Probe::Fail(
                                        square_counterexample(
                                            &format!("pushout of J map {k} has no lift up to homotopy against a generator domain"),
                                            &sq,
                                        )
                                        .with("attaching", along),
                                    ))
                                }
                                Some(None) => {}
                            }
                        }
                        Ok(Probe::Pass)
                    })
                    .collect::<Result<_>>()?;
                aggregate("jset-lifting", self.scope(), probes)
            }
        };
        Ok(VerdictReport::combine("main-condition", self.scope(), vec![appropriate, lifting]))
    }

    pub fn check_properness_condition(&self) -> Result<VerdictReport> {
        let tfs = self.trivial_fibrations_between_cofibrant();
        let pairs: Vec<(usize, usize)> = tfs.iter().flat_map(|&a| tfs.iter().map(move |&b| (a, b))).collect();
        let coproducts: Vec<Probe> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let sum = coproduct_map(&self.u.maps[a].map, &self.u.maps[b].map)?;
                Ok(if self.an.in_inj(&sum) {
                    Probe::Pass
                } else {
                    Probe::Fail(
                        Counterexample::new(format!(
                            "coproduct of trivial fibrations {} and {} is not a trivial fibration",
                            self.label(a),
                            self.label(b)
                        ))
                        .with("first", &self.u.maps[a].map)
                        .with("second", &self.u.maps[b].map)
                        .with("coproduct", &sum),
                    )
                })
            })
            .collect::<Result<_>>()?;
        let coproducts = aggregate("coproduct-closure", self.scope(), coproducts);

        let mut work = Vec::new();
        for (k, i) in self.an.gens().maps.iter().enumerate() {
            for (x, obj) in self.u.objects.iter().enumerate() {
                for along in hom_enumerate(i.source(), obj) {
                    work.extend(self.u.indices_from(x).map(|t| (k, along.clone(), t)));
                }
            }
        }
        let probes: Vec<Probe> = work
            .par_iter()
            .map(|(k, along, t)| {
                let tm = &self.u.maps[*t].map;
                if !self.an.in_inj(tm) {
                    return Ok(None);
                }
                let i = &self.an.gens().maps[*k];
                let left = pushout(along, i)?;
                let right = pushout(&comp(along, tm), i)?;
                let induced = left.mediator(&comp(tm, &right.leg_from_b), &right.leg_from_c)?;
                Ok(Some(match self.an.is_weak_equivalence(&induced)? {
                    None => inconclusive("weak equivalence test"),
                    Some(true) => Probe::Pass,
                    Some(false) => Probe::Fail(
                        Counterexample::new(format!(
                            "map induced on pushouts along generator {k} by trivial fibration {} is not a weak equivalence",
                            self.label(*t)
                        ))
                        .with("generator", i)
                        .with("attaching", along)
                        .with("trivial_fibration", tm)
                        .with("induced", &induced),
                    ),
                }))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let pushouts = aggregate("pushout-weak-equivalence", self.scope(), probes);
        Ok(VerdictReport::combine("properness-condition", self.scope(), vec![coproducts, pushouts]))
    }
}
