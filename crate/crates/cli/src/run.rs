//! Command execution and the run report.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use minmodel::analysis::{Analyzer, BoundedUniverse, Checker, MapRecord, Verdict, WeClass};
use minmodel::colimit::from_initial;
use minmodel::factorization::{soa_factorize, Attachment, CellFactorization, GeneratingSet, SquareOrder};
use minmodel::homotopy::{cylinder, cylinder_with, homotopy_in, CylinderObject};
use minmodel::{Error, PresheafMap};

use crate::workspace::{BoundSpec, Workspace, WorkspaceError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Validate,
    Factor { map: String, set: String },
    Cylinder { map: String, set: String },
    Homotopic { f0: String, f1: String, rel: Option<String>, set: String },
    Classify { map: String, set: String },
    CheckAppropriate { set: String },
    CheckMain { set: String },
    CheckProperness { set: String },
    VerifyAxioms { set: String },
    EnumerateWe { set: String },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Factor { .. } => "factor",
            Command::Cylinder { .. } => "cylinder",
            Command::Homotopic { .. } => "homotopic",
            Command::Classify { .. } => "classify",
            Command::CheckAppropriate { .. } => "check-appropriate",
            Command::CheckMain { .. } => "check-main",
            Command::CheckProperness { .. } => "check-properness",
            Command::VerifyAxioms { .. } => "verify-axioms",
            Command::EnumerateWe { .. } => "enumerate-we",
        }
    }

    pub fn arguments(&self) -> Vec<String> {
        match self {
            Command::Validate => vec![],
            Command::Factor { map, set } | Command::Cylinder { map, set } | Command::Classify { map, set } => {
                vec![map.clone(), set.clone()]
            }
            Command::Homotopic { f0, f1, rel, set } => {
                let mut v = vec![f0.clone(), f1.clone()];
                if let Some(r) = rel {
                    v.extend(["rel".to_string(), r.clone()]);
                }
                v.push(set.clone());
                v
            }
            Command::CheckAppropriate { set }
            | Command::CheckMain { set }
            | Command::CheckProperness { set }
            | Command::VerifyAxioms { set }
            | Command::EnumerateWe { set } => vec![set.clone()],
        }
    }

    /// Parses `NAME ARGS...` as typed on the command line.
    pub fn parse(words: &[String]) -> Result<Command, RunError> {
        let (head, rest) = words.split_first().ok_or_else(|| RunError::Usage("missing command".into()))?;
        let arity = |n: usize| {
            if rest.len() == n {
                Ok(())
            } else {
                Err(RunError::Usage(format!("`{head}` takes {n} argument(s), got {}", rest.len())))
            }
        };
        let r = |k: usize| rest[k].clone();
        Ok(match head.as_str() {
            "validate" => arity(0).map(|_| Command::Validate)?,
            "factor" => arity(2).map(|_| Command::Factor { map: r(0), set: r(1) })?,
            "cylinder" => arity(2).map(|_| Command::Cylinder { map: r(0), set: r(1) })?,
            "classify" => arity(2).map(|_| Command::Classify { map: r(0), set: r(1) })?,
            "homotopic" => match rest.len() {
                3 => Command::Homotopic { f0: r(0), f1: r(1), rel: None, set: r(2) },
                5 if rest[2] == "rel" => Command::Homotopic { f0: r(0), f1: r(1), rel: Some(r(3)), set: r(4) },
                _ => return Err(RunError::Usage("usage: homotopic F0 F1 [rel I] SET".into())),
            },
            "check-appropriate" => arity(1).map(|_| Command::CheckAppropriate { set: r(0) })?,
            "check-main" => arity(1).map(|_| Command::CheckMain { set: r(0) })?,
            "check-properness" => arity(1).map(|_| Command::CheckProperness { set: r(0) })?,
            "verify-axioms" => arity(1).map(|_| Command::VerifyAxioms { set: r(0) })?,
            "enumerate-we" => arity(1).map(|_| Command::EnumerateWe { set: r(0) })?,
            other => return Err(RunError::UnknownCommand(other.to_string())),
        })
    }
}

/// Command-line overrides of the workspace configuration.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub fuel: Option<usize>,
    pub bound: Option<BoundSpec>,
    pub cross_check: Option<bool>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Workspace(#[from] WorkspaceError),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub arguments: Vec<String>,
    pub fuel: usize,
    pub bound: String,
    pub cross_check: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniverseBounds {
    pub bound: String,
    pub objects: usize,
    pub cofibrant_objects: usize,
    pub maps: usize,
    pub excluded_objects: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub fuel: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub universe: Option<UniverseBounds>,
}

/// The single document written per run. Key order is fixed by field order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Parameters,
    pub verdict: Verdict,
    pub witnesses: Value,
    pub bounds: Bounds,
    pub fuel_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

struct Outcome {
    verdict: Verdict,
    witnesses: Value,
    universe: Option<UniverseBounds>,
    fuel_used: usize,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("witnesses serialize")
}

fn record(role: &str, f: &PresheafMap) -> Value {
    to_value(&MapRecord::new(role, f))
}

fn attachment(a: &Attachment) -> Value {
    json!({
        "generator_index": a.generator_index,
        "attaching": a.attaching.to_data(),
        "result": a.result.to_data(),
    })
}

fn factorization_value(fact: &CellFactorization) -> Value {
    json!({
        "status": if fact.is_complete() { "complete" } else { "fuel_exhausted" },
        "rounds": fact.rounds,
        "attachments": fact.log.len(),
        "left": record("left", &fact.left),
        "right": record("right", &fact.right),
        "log": fact.log.iter().map(attachment).collect::<Vec<_>>(),
    })
}

fn cylinder_value(c: &CylinderObject) -> Value {
    json!({
        "over": record("over", &c.over),
        "apex": c.apex.to_data(),
        "incl0": c.incl0.to_data(),
        "incl1": c.incl1.to_data(),
        "collapse": c.collapse.to_data(),
        "attachments": c.provenance.log.len(),
    })
}

fn universe_bounds(u: &BoundedUniverse, bound: &str) -> UniverseBounds {
    UniverseBounds {
        bound: bound.to_string(),
        objects: u.objects.len(),
        cofibrant_objects: u.cofibrant.iter().filter(|&&c| c).count(),
        maps: u.maps.len(),
        excluded_objects: u.excluded,
    }
}

fn fuel_outcome(err: &Error, fuel_used: usize) -> Outcome {
    Outcome {
        verdict: Verdict::Inconclusive,
        witnesses: json!({ "diagnostic": err.to_string() }),
        universe: None,
        fuel_used,
    }
}

struct Ctx<'a> {
    ws: &'a Workspace,
    fuel: usize,
    bound: BoundSpec,
    cross_check: bool,
}

impl Ctx<'_> {
    fn genset(&self, name: &str) -> Result<GeneratingSet, RunError> {
        Ok(self.ws.genset(name)?)
    }

    fn map(&self, name: &str) -> Result<PresheafMap, RunError> {
        Ok(self.ws.map(name)?.clone())
    }

    fn with_universe(
        &self,
        set: &str,
        body: impl FnOnce(&Checker) -> Result<(Verdict, Value), Error>,
    ) -> Result<Outcome, RunError> {
        let gens = self.genset(set)?;
        let bound = self.bound.resolve(&self.ws.base).map_err(RunError::Usage)?;
        let described = bound.describe(&self.ws.base);
        let an = Analyzer::new(gens, self.fuel);
        let u = match BoundedUniverse::build(&an, &self.ws.base, bound) {
            Ok(u) => u,
            Err(e @ Error::FuelExhausted { .. }) => return Ok(fuel_outcome(&e, an.peak_fuel_used())),
            Err(e) => return Err(e.into()),
        };
        let checker = Checker::new(&an, &u);
        let universe = Some(universe_bounds(&u, &described));
        match body(&checker) {
            Ok((verdict, witnesses)) => Ok(Outcome { verdict, witnesses, universe, fuel_used: an.peak_fuel_used() }),
            Err(e @ Error::FuelExhausted { .. }) => {
                Ok(Outcome { universe, ..fuel_outcome(&e, an.peak_fuel_used()) })
            }
            Err(e) => Err(e.into()),
        }
    }

    fn validate(&self) -> Outcome {
        let ws = self.ws;
        let base = &ws.base;
        let presheaves: Vec<Value> = ws
            .presheaves
            .iter()
            .map(|(n, p)| {
                let sizes: serde_json::Map<String, Value> =
                    base.objects().iter().enumerate().map(|(o, name)| (name.clone(), json!(p.size(o)))).collect();
                json!({ "name": n, "sizes": sizes })
            })
            .collect();
        let maps: Vec<Value> = ws
            .maps
            .iter()
            .map(|(n, m)| json!({ "name": n, "source": m.source, "target": m.target }))
            .collect();
        let gensets: Vec<Value> = ws.gensets.iter().map(|(n, ms)| json!({ "name": n, "maps": ms })).collect();
        Outcome {
            verdict: Verdict::Pass,
            witnesses: json!({
                "base": { "objects": base.objects(), "morphisms": base.morphisms().len() },
                "presheaves": presheaves,
                "maps": maps,
                "gensets": gensets,
            }),
            universe: None,
            fuel_used: 0,
        }
    }

    fn factor(&self, map: &str, set: &str) -> Result<Outcome, RunError> {
        let f = self.map(map)?;
        let fact = soa_factorize(&f, &self.genset(set)?, self.fuel);
        Ok(Outcome {
            verdict: if fact.is_complete() { Verdict::Pass } else { Verdict::Inconclusive },
            witnesses: json!({ "factorization": factorization_value(&fact) }),
            universe: None,
            fuel_used: fact.fuel_used,
        })
    }

    fn cylinder(&self, map: &str, set: &str) -> Result<Outcome, RunError> {
        let i = self.map(map)?;
        let gens = self.genset(set)?;
        let c = match cylinder(&i, &gens, self.fuel) {
            Ok(c) => c,
            Err(e @ Error::FuelExhausted { .. }) => return Ok(fuel_outcome(&e, self.fuel)),
            Err(e) => return Err(e.into()),
        };
        let mut w = json!({ "cylinder": cylinder_value(&c) });
        let mut verdict = Verdict::Pass;
        if self.cross_check {
            match cylinder_with(&i, &gens, self.fuel, SquareOrder::Reversed) {
                Ok(alt) => {
                    let same_shape = alt.apex.carriers().iter().map(Vec::len).eq(c.apex.carriers().iter().map(Vec::len));
                    w["cross_check"] = json!({ "alternate": cylinder_value(&alt), "same_sizes": same_shape });
                }
                Err(e @ Error::FuelExhausted { .. }) => {
                    verdict = Verdict::Inconclusive;
                    w["cross_check"] = json!({ "diagnostic": e.to_string() });
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(Outcome { verdict, witnesses: w, universe: None, fuel_used: c.provenance.fuel_used })
    }

    fn homotopic(&self, f0: &str, f1: &str, rel: Option<&str>, set: &str) -> Result<Outcome, RunError> {
        let (f0, f1) = (self.map(f0)?, self.map(f1)?);
        if !f0.is_parallel_to(&f1) {
            return Err(RunError::Usage("homotopic needs two parallel maps".into()));
        }
        let i = match rel {
            Some(r) => self.map(r)?,
            None => from_initial(f0.source()),
        };
        if i.target() != f0.source() {
            return Err(RunError::Usage("the relative map must end at the common source".into()));
        }
        let gens = self.genset(set)?;
        let cyl = match cylinder(&i, &gens, self.fuel) {
            Ok(c) => c,
            Err(e @ Error::FuelExhausted { .. }) => return Ok(fuel_outcome(&e, self.fuel)),
            Err(e) => return Err(e.into()),
        };
        let fuel_used = cyl.provenance.fuel_used;
        let found = match homotopy_in(&cyl, &f0, &f1) {
            Ok(h) => h,
            Err(Error::IncompatibleOnRelativePart) => {
                return Ok(Outcome {
                    verdict: Verdict::Fail,
                    witnesses: json!({
                        "description": "the maps differ on the relative part",
                        "maps": [record("f0", &f0), record("f1", &f1), record("rel", &i)],
                    }),
                    universe: None,
                    fuel_used,
                })
            }
            Err(e) => return Err(e.into()),
        };
        let mut w = json!({ "cylinder": cylinder_value(&cyl) });
        match &found {
            Some(h) => w["homotopy"] = to_value(&h.to_data()),
            None => {
                w["description"] = json!("no map out of the cylinder restricts to f0 and f1");
                w["maps"] = json!([record("f0", &f0), record("f1", &f1), record("rel", &i)]);
            }
        }
        if self.cross_check {
            match cylinder_with(&i, &gens, self.fuel, SquareOrder::Reversed) {
                Ok(alt) => {
                    let alternate = homotopy_in(&alt, &f0, &f1)?.is_some();
                    w["cross_check"] = json!({
                        "canonical": found.is_some(),
                        "alternate": alternate,
                        "agrees": alternate == found.is_some(),
                    });
                }
                Err(e @ Error::FuelExhausted { .. }) => w["cross_check"] = json!({ "diagnostic": e.to_string() }),
                Err(e) => return Err(e.into()),
            }
        }
        Ok(Outcome { verdict: Verdict::from_bool(found.is_some()), witnesses: w, universe: None, fuel_used })
    }
}

/// Runs one command against a workspace.
pub fn run(command: &Command, ws: &Workspace, overrides: &Overrides) -> Result<RunReport, RunError> {
    let ctx = Ctx {
        ws,
        fuel: overrides.fuel.unwrap_or(ws.config.fuel),
        bound: overrides.bound.clone().unwrap_or_else(|| ws.config.bound.clone()),
        cross_check: overrides.cross_check.unwrap_or(ws.config.cross_check),
    };
    let bound_text = match ctx.bound.resolve(&ws.base) {
        Ok(b) => b.describe(&ws.base),
        Err(e) => return Err(RunError::Usage(e)),
    };
    let out = match command {
        Command::Validate => ctx.validate(),
        Command::Factor { map, set } => ctx.factor(map, set)?,
        Command::Cylinder { map, set } => ctx.cylinder(map, set)?,
        Command::Homotopic { f0, f1, rel, set } => ctx.homotopic(f0, f1, rel.as_deref(), set)?,
        Command::Classify { map, set } => {
            let f = ctx.map(map)?;
            ctx.with_universe(set, |c| {
                let cls = c.classify_map(&f)?;
                let decided = [
                    cls.cofibration,
                    cls.fibration,
                    cls.weak_equivalence,
                    cls.trivial_cofibration,
                    cls.trivial_fibration,
                    cls.pure,
                    cls.strong_deformation_retract,
                ]
                .iter()
                .all(Option::is_some);
                let verdict = if !cls.inconsistencies.is_empty() {
                    Verdict::Fail
                } else if decided {
                    Verdict::Pass
                } else {
                    Verdict::Inconclusive
                };
                Ok((verdict, json!({ "map": record(map, &f), "classification": cls })))
            })?
        }
        Command::CheckAppropriate { set } => ctx.with_universe(set, |c| {
            let r = c.check_appropriate()?;
            Ok((r.verdict, to_value(&r)))
        })?,
        Command::CheckMain { set } => ctx.with_universe(set, |c| {
            let r = c.check_main_condition()?;
            Ok((r.verdict, to_value(&r)))
        })?,
        Command::CheckProperness { set } => ctx.with_universe(set, |c| {
            let r = c.check_properness_condition()?;
            Ok((r.verdict, to_value(&r)))
        })?,
        Command::VerifyAxioms { set } => ctx.with_universe(set, |c| {
            let jset = c.an.jset()?;
            let r = c.verify_axioms(&jset, &WeClass::engine(c.an))?;
            Ok((r.verdict, to_value(&r)))
        })?,
        Command::EnumerateWe { set } => ctx.with_universe(set, |c| {
            let listing = c.enumerate_we()?;
            let verdict = if listing.undecided.is_empty() { Verdict::Pass } else { Verdict::Inconclusive };
            let objects: Vec<Value> = c
                .u
                .labels
                .iter()
                .zip(&c.u.objects)
                .map(|(l, x)| json!({ "label": l, "presheaf": x.to_data() }))
                .collect();
            Ok((verdict, json!({ "objects": objects, "listing": listing })))
        })?,
    };
    Ok(RunReport {
        command: command.name().to_string(),
        parameters: Parameters {
            arguments: command.arguments(),
            fuel: ctx.fuel,
            bound: bound_text,
            cross_check: ctx.cross_check,
        },
        verdict: out.verdict,
        witnesses: out.witnesses,
        bounds: Bounds { fuel: ctx.fuel, universe: out.universe },
        fuel_used: out.fuel_used,
        timing_ms: None,
    })
}
