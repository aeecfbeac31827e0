use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::colimit::pushout;
use crate::error::Result;
use crate::factorization::{in_inj, GeneratingSet};
use crate::presheaf::{comp, PresheafMap};
use crate::retract::is_retract_of;
use crate::search::hom_enumerate;

use super::checks::Checker;
use super::engine::Analyzer;
use super::report::{aggregate, undecided, Counterexample, Probe, VerdictReport};

type Predicate<'a> = Box<dyn Fn(&PresheafMap) -> bool + Send + Sync + 'a>;

pub enum WeRule<'a> {
    /// RLP up to `∼_i` against the generators.
    Engine(&'a Analyzer),
    All,
    Predicate(String, Predicate<'a>),
}

/// A class of weak equivalences, with memoized membership.
pub struct WeClass<'a> {
    rule: WeRule<'a>,
    memo: Mutex<HashMap<PresheafMap, Option<bool>>>,
}

impl fmt::Debug for WeClass<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeClass").field("label", &self.label()).finish()
    }
}

impl<'a> WeClass<'a> {
    pub fn new(rule: WeRule<'a>) -> Self {
        WeClass { rule, memo: Mutex::default() }
    }

    pub fn engine(an: &'a Analyzer) -> Self {
        Self::new(WeRule::Engine(an))
    }

    pub fn all() -> Self {
        Self::new(WeRule::All)
    }

    pub fn predicate(label: impl Into<String>, test: impl Fn(&PresheafMap) -> bool + Send + Sync + 'a) -> Self {
        Self::new(WeRule::Predicate(label.into(), Box::new(test)))
    }

    pub fn label(&self) -> String {
        match &self.rule {
            WeRule::Engine(an) => format!("lifting up to homotopy against {}", an.gens().label),
            WeRule::All => "all maps".into(),
            WeRule::Predicate(l, _) => l.clone(),
        }
    }

    /// Membership; `None` when undecided.
    pub fn contains(&self, f: &PresheafMap) -> Result<Option<bool>> {
        if let Some(&v) = self.memo.lock().unwrap().get(f) {
            return Ok(v);
        }
        let v = match &self.rule {
            WeRule::Engine(an) => an.is_weak_equivalence(f)?,
            WeRule::All => Some(true),
            WeRule::Predicate(_, test) => Some(test(f)),
        };
        self.memo.lock().unwrap().insert(f.clone(), v);
        Ok(v)
    }
}

fn membership_probe(v: Option<bool>, fail: impl FnOnce() -> Counterexample) -> Probe {
    match v {
        None => Probe::Inconclusive("weak equivalence test ran out of fuel".into()),
        Some(true) => Probe::Pass,
        Some(false) => Probe::Fail(fail()),
    }
}

/// Sizes of `f`'s endpoints are dominated by those of `g`'s, as they must be for a retract.
fn fits_inside(f: &PresheafMap, g: &PresheafMap) -> bool {
    let n = f.base().object_count();
    (0..n).all(|o| f.source().size(o) <= g.source().size(o) && f.target().size(o) <= g.target().size(o))
}

impl Checker<'_> {
    fn two_out_of_three(&self, we: &[Option<bool>]) -> VerdictReport {
        let u = self.u;
        let triples: Vec<(usize, usize)> = (0..u.maps.len())
            .flat_map(|f| u.indices_from(u.maps[f].target).map(move |g| (f, g)))
            .collect();
        let probes: Vec<Probe> = triples
            .par_iter()
            .map(|&(f, g)| {
                let gf = comp(&u.maps[f].map, &u.maps[g].map);
                let (a, c) = (u.maps[f].source, u.maps[g].target);
                let k = u.indices_between(a, c).find(|&k| u.maps[k].map == gf).expect("composite lies in the universe");
                match (we[f], we[g], we[k]) {
                    (Some(x), Some(y), Some(z)) => {
                        if [x, y, z].iter().filter(|&&b| b).count() == 2 {
                            Probe::Fail(
                                Counterexample::new(format!(
                                    "two of f = {}, g = {}, g∘f are weak equivalences but not the third",
                                    u.describe_map(f),
                                    u.describe_map(g)
                                ))
                                .with("f", &u.maps[f].map)
                                .with("g", &u.maps[g].map),
                            )
                        } else {
                            Probe::Pass
                        }
                    }
                    _ => Probe::Inconclusive("membership undecided".into()),
                }
            })
            .collect();
        aggregate("two-out-of-three", self.scope(), probes)
    }

    fn retract_closure(&self, we: &[Option<bool>]) -> VerdictReport {
        let u = self.u;
        let inside: Vec<usize> = (0..u.maps.len()).filter(|&k| we[k] == Some(true)).collect();
        let outside: Vec<usize> = (0..u.maps.len()).filter(|&k| we[k] == Some(false)).collect();
        let pairs: Vec<(usize, usize)> = outside
            .iter()
            .flat_map(|&f| inside.iter().map(move |&g| (f, g)))
            .filter(|&(f, g)| fits_inside(&u.maps[f].map, &u.maps[g].map))
            .collect();
        let mut probes: Vec<Probe> = pairs
            .par_iter()
            .map(|&(f, g)| match is_retract_of(&u.maps[f].map, &u.maps[g].map) {
                None => Probe::Pass,
                Some(w) => Probe::Fail(
                    Counterexample::new(format!(
                        "{} is a retract of the weak equivalence {} but is not one",
                        u.describe_map(f),
                        u.describe_map(g)
                    ))
                    .with("f", &w.f)
                    .with("g", &w.g)
                    .with("s_dom", &w.s_dom)
                    .with("r_dom", &w.r_dom)
                    .with("s_cod", &w.s_cod)
                    .with("r_cod", &w.r_cod),
                ),
            })
            .collect();
        let undecided = we.iter().filter(|v| v.is_none()).count();
        if undecided > 0 {
            probes.push(Probe::Inconclusive(format!("{undecided} map(s) with undecided membership")));
        }
        aggregate("retracts", self.scope(), probes)
    }

    /// Bounded verification of the model category axioms for `(I, J, we)`.
    pub fn verify_axioms(&self, jset: &GeneratingSet, we: &WeClass) -> Result<VerdictReport> {
        let u = self.u;
        let gens = self.an.gens();
        let scope = self.scope();
        let member: Vec<Option<bool>> =
            u.maps.par_iter().map(|m| we.contains(&m.map)).collect::<Result<_>>()?;

        let a1 = VerdictReport::static_pass("A1", scope, "generators have finite domains and codomains, which are small");

        let a2 = VerdictReport::combine("A2", scope, vec![self.two_out_of_three(&member), self.retract_closure(&member)]);

        let a3_probes: Vec<Probe> = (0..u.maps.len())
            .into_par_iter()
            .filter(|&k| in_inj(&u.maps[k].map, gens))
            .map(|k| {
                membership_probe(member[k], || {
                    Counterexample::new(format!("trivial fibration {} is not a weak equivalence", u.describe_map(k)))
                        .with("map", &u.maps[k].map)
                })
            })
            .collect();
        let a3 = aggregate("A3", scope, a3_probes);

        let mut pushouts = Vec::new();
        for (k, j) in jset.maps.iter().enumerate() {
            for x in &u.objects {
                for along in hom_enumerate(j.source(), x) {
                    pushouts.push((k, along));
                }
            }
        }
        let a4_probes: Vec<Probe> = pushouts
            .par_iter()
            .map(|(k, along)| {
                let jp = pushout(along, &jset.maps[*k])?.leg_from_b;
                let w = we.contains(&jp)?;
                let c = undecided(crate::factorization::in_cof(&jp, gens, self.an.fuel()))?;
                let describe = || {
                    Counterexample::new(format!("pushout of J map {k} is not a trivial cofibration"))
                        .with("attaching", along)
                        .with("pushout", &jp)
                };
                Ok(match (w, c) {
                    (Some(false), _) | (_, Some(false)) => Probe::Fail(describe()),
                    (Some(true), Some(true)) => Probe::Pass,
                    _ => Probe::Inconclusive("membership undecided".into()),
                })
            })
            .collect::<Result<_>>()?;
        let a4 = aggregate("A4", scope, a4_probes);

        let a5_probes: Vec<Probe> = (0..u.maps.len())
            .into_par_iter()
            .filter(|&k| member[k] != Some(false) && in_inj(&u.maps[k].map, jset))
            .map(|k| {
                let f = &u.maps[k].map;
                match member[k] {
                    None => Probe::Inconclusive("membership undecided".into()),
                    _ if in_inj(f, gens) => Probe::Pass,
                    _ => Probe::Fail(
                        Counterexample::new(format!(
                            "{} is J-injective and a weak equivalence but not a trivial fibration",
                            u.describe_map(k)
                        ))
                        .with("map", f),
                    ),
                }
            })
            .collect();
        let mut a5 = aggregate("A5", scope, a5_probes);
        a5.diagnostics.push("first disjunct only; the second disjunct is not evaluated".into());

        let mut r = VerdictReport::combine("axioms", scope, vec![a1, a2, a3, a4, a5]);
        r.diagnostics.push(format!("weak equivalences: {}", we.label()));
        Ok(r)
    }
}
