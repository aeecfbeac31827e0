use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use crate::colimit::from_initial;
use crate::error::Result;
use crate::factorization::{cof_by_retract, soa_factorize, GeneratingSet};
use crate::homotopy::{cylinder, CylinderObject, HomotopyOracle};
use crate::lifting::{first_unliftable_up_to, LiftingCache, LiftingProblem};
use crate::presheaf::{Presheaf, PresheafMap};

use super::report::{undecided, Counterexample, Probe, VerdictReport};

/// `J_I`: the front inclusions `V -> Cyl_U V` of the canonical cylinders
/// over the generators `U -> V`, in generator order.
pub fn build_jset(gens: &GeneratingSet, fuel: usize) -> Result<GeneratingSet> {
    let maps = gens.maps.iter().map(|i| Ok(cylinder(i, gens, fuel)?.incl0)).collect::<Result<_>>()?;
    Ok(GeneratingSet::new(format!("J_{}", gens.label), maps))
}

type Memo<K, V> = Mutex<HashMap<K, V>>;

/// Decision procedures for one generating set, with shared caches.
/// Every cached value is a pure function of its key.
#[derive(Debug)]
pub struct Analyzer {
    gens: GeneratingSet,
    fuel: usize,
    gen_cylinders: Vec<OnceLock<Result<Arc<CylinderObject>>>>,
    abs_cylinders: Memo<Arc<Presheaf>, Result<Arc<CylinderObject>>>,
    jset: OnceLock<Result<GeneratingSet>>,
    inj: LiftingCache,
    fib: LiftingCache,
    cof: Memo<PresheafMap, Result<Option<bool>>>,
    we: Memo<PresheafMap, Result<Option<bool>>>,
    peak_fuel: AtomicUsize,
}

impl Analyzer {
    pub fn new(gens: GeneratingSet, fuel: usize) -> Self {
        let gen_cylinders = gens.maps.iter().map(|_| OnceLock::new()).collect();
        Analyzer {
            gens,
            fuel,
            gen_cylinders,
            abs_cylinders: Mutex::default(),
            jset: OnceLock::new(),
            inj: LiftingCache::new(),
            fib: LiftingCache::new(),
            cof: Mutex::default(),
            we: Mutex::default(),
            peak_fuel: AtomicUsize::new(0),
        }
    }

    pub fn gens(&self) -> &GeneratingSet {
        &self.gens
    }

    pub fn fuel(&self) -> usize {
        self.fuel
    }

    /// Largest number of attachments used by any single factorization so far.
    pub fn peak_fuel_used(&self) -> usize {
        self.peak_fuel.load(Ordering::Relaxed)
    }

    fn record(&self, used: usize) {
        self.peak_fuel.fetch_max(used, Ordering::Relaxed);
    }

    fn record_cylinder(&self, c: &Result<Arc<CylinderObject>>) {
        if let Ok(c) = c {
            self.record(c.provenance.fuel_used);
        }
    }

    /// The canonical cylinder over the `k`-th generator.
    pub fn generator_cylinder(&self, k: usize) -> Result<Arc<CylinderObject>> {
        self.gen_cylinders[k]
            .get_or_init(|| {
                let c = cylinder(&self.gens.maps[k], &self.gens, self.fuel).map(Arc::new);
                self.record_cylinder(&c);
                c
            })
            .clone()
    }

    /// The canonical cylinder over `0 -> y`.
    pub fn absolute_cylinder(&self, y: &Arc<Presheaf>) -> Result<Arc<CylinderObject>> {
        if let Some(c) = self.abs_cylinders.lock().unwrap().get(y) {
            return c.clone();
        }
        let c = cylinder(&from_initial(y), &self.gens, self.fuel).map(Arc::new);
        self.record_cylinder(&c);
        self.abs_cylinders.lock().unwrap().insert(y.clone(), c.clone());
        c
    }

    pub fn jset(&self) -> Result<GeneratingSet> {
        self.jset
            .get_or_init(|| {
                let maps = (0..self.gens.maps.len())
                    .map(|k| Ok(self.generator_cylinder(k)?.incl0.clone()))
                    .collect::<Result<_>>()?;
                Ok(GeneratingSet::new(format!("J_{}", self.gens.label), maps))
            })
            .clone()
    }

    /// Trivial fibration: `I`-injective.
    pub fn in_inj(&self, f: &PresheafMap) -> bool {
        self.inj.has_rlp(f, &self.gens.maps)
    }

    /// Fibration: `J_I`-injective.
    pub fn is_fibration(&self, f: &PresheafMap) -> Result<bool> {
        let j = self.jset()?;
        Ok(self.fib.has_rlp(f, &j.maps))
    }

    /// `I`-cofibration; `None` when the factorization ran out of fuel.
    pub fn in_cof_undecided(&self, f: &PresheafMap) -> Result<Option<bool>> {
        if let Some(v) = self.cof.lock().unwrap().get(f) {
            return v.clone();
        }
        let fact = soa_factorize(f, &self.gens, self.fuel);
        self.record(fact.fuel_used);
        let v = undecided(fact.complete().map(|fact| cof_by_retract(&fact)));
        self.cof.lock().unwrap().insert(f.clone(), v.clone());
        v
    }

    /// First square from `0 -> v` to `f` with no lift up to absolute homotopy.
    pub fn first_unliftable_against_object(&self, f: &PresheafMap, v: &Arc<Presheaf>) -> Result<Option<LiftingProblem>> {
        let oracle = HomotopyOracle::new(self.absolute_cylinder(v)?);
        first_unliftable_up_to(&from_initial(v), f, &oracle)
    }

    /// First generator index and square witnessing that `f` is not a weak equivalence.
    pub fn weak_equivalence_failure(&self, f: &PresheafMap) -> Result<Option<(usize, LiftingProblem)>> {
        for (k, i) in self.gens.maps.iter().enumerate() {
            let oracle = HomotopyOracle::new(self.generator_cylinder(k)?);
            if let Some(sq) = first_unliftable_up_to(i, f, &oracle)? {
                return Ok(Some((k, sq)));
            }
        }
        Ok(None)
    }

    /// RLP up to `∼_i` against every generator `i`; `None` when undecided.
    pub fn is_weak_equivalence(&self, f: &PresheafMap) -> Result<Option<bool>> {
        if let Some(v) = self.we.lock().unwrap().get(f) {
            return v.clone();
        }
        let v = undecided(self.weak_equivalence_failure(f).map(|w| w.is_none()));
        self.we.lock().unwrap().insert(f.clone(), v.clone());
        v
    }

    pub fn weak_equivalence_report(&self, f: &PresheafMap) -> Result<VerdictReport> {
        let probes: Vec<Probe> = self
            .gens
            .maps
            .iter()
            .enumerate()
            .map(|(k, i)| {
                let cyl = match undecided(self.generator_cylinder(k))? {
                    Some(c) => c,
                    None => return Ok(Probe::Inconclusive(format!("cylinder over generator {k} ran out of fuel"))),
                };
                Ok(match first_unliftable_up_to(i, f, &HomotopyOracle::new(cyl))? {
                    None => Probe::Pass,
                    Some(sq) => Probe::Fail(square_counterexample(
                        &format!("no lift up to homotopy against generator {k}"),
                        &sq,
                    )),
                })
            })
            .collect::<Result<_>>()?;
        Ok(super::report::aggregate("weak-equivalence", "generators", probes))
    }
}

pub(crate) fn square_counterexample(description: &str, sq: &LiftingProblem) -> Counterexample {
    Counterexample::new(description)
        .with("left", &sq.left)
        .with("right", &sq.right)
        .with("top", &sq.top)
        .with("bottom", &sq.bottom)
}
