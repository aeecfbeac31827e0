use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presheaf::{MapData, PresheafData, PresheafMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// `None` stands for an undecided (fuel-exhausted) answer.
    pub fn from_option(b: Option<bool>) -> Self {
        b.map_or(Verdict::Inconclusive, Verdict::from_bool)
    }

    /// Conjunction: any failure fails, otherwise any undecided part is undecided.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Pass => Some(true),
            Verdict::Fail => Some(false),
            Verdict::Inconclusive => None,
        }
    }
}

/// Maps fuel exhaustion to `None`, keeping every other error.
pub fn undecided<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::FuelExhausted { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// A map together with full data for both endpoints, so it re-validates on its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRecord {
    pub role: String,
    pub source: PresheafData,
    pub target: PresheafData,
    pub map: MapData,
}

impl MapRecord {
    pub fn new(role: impl Into<String>, f: &PresheafMap) -> Self {
        MapRecord { role: role.into(), source: f.source().to_data(), target: f.target().to_data(), map: f.to_data() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub description: String,
    pub maps: Vec<MapRecord>,
}

impl Counterexample {
    pub fn new(description: impl Into<String>) -> Self {
        Counterexample { description: description.into(), maps: Vec::new() }
    }

    pub fn with(mut self, role: &str, f: &PresheafMap) -> Self {
        self.maps.push(MapRecord::new(role, f));
        self
    }

    pub(crate) fn nested(mut self, outer: Counterexample) -> Self {
        self.description = format!("{}: {}", outer.description, self.description);
        let mut maps = outer.maps;
        maps.append(&mut self.maps);
        self.maps = maps;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub check: String,
    pub verdict: Verdict,
    pub scope: String,
    /// Number of instances examined.
    pub instances: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<VerdictReport>,
}

impl VerdictReport {
    pub fn static_pass(check: &str, scope: &str, note: &str) -> Self {
        VerdictReport {
            check: check.into(),
            verdict: Verdict::Pass,
            scope: scope.into(),
            instances: 0,
            counterexample: None,
            diagnostics: vec![note.into()],
            parts: Vec::new(),
        }
    }

    pub fn not_evaluated(check: &str, scope: &str, note: &str) -> Self {
        VerdictReport {
            check: check.into(),
            verdict: Verdict::Inconclusive,
            scope: scope.into(),
            instances: 0,
            counterexample: None,
            diagnostics: vec![note.into()],
            parts: Vec::new(),
        }
    }

    /// Conjunction of sub-reports; the first failing part supplies the counterexample.
    pub fn combine(check: &str, scope: &str, parts: Vec<VerdictReport>) -> Self {
        let verdict = parts.iter().fold(Verdict::Pass, |v, p| v.and(p.verdict));
        let counterexample = parts.iter().find(|p| p.verdict == Verdict::Fail).and_then(|p| {
            p.counterexample.clone().map(|c| Counterexample { description: format!("{}: {}", p.check, c.description), maps: c.maps })
        });
        VerdictReport {
            check: check.into(),
            verdict,
            scope: scope.into(),
            instances: parts.iter().map(|p| p.instances).sum(),
            counterexample,
            diagnostics: Vec::new(),
            parts,
        }
    }

    pub fn part(&self, check: &str) -> Option<&VerdictReport> {
        self.parts.iter().find(|p| p.check == check)
    }
}

/// Outcome of one instance of a bounded check.
#[derive(Debug, Clone)]
pub enum Probe {
    Pass,
    Fail(Counterexample),
    Inconclusive(String),
}

impl Probe {
    /// Re-frames a sub-report as a single probe, with `context` prepended to any counterexample.
    pub fn from_report(r: VerdictReport, context: impl FnOnce() -> Counterexample) -> Probe {
        match r.verdict {
            Verdict::Pass => Probe::Pass,
            Verdict::Fail => {
                let inner = r.counterexample.unwrap_or_else(|| Counterexample::new(r.check.clone()));
                Probe::Fail(inner.nested(context()))
            }
            Verdict::Inconclusive => Probe::Inconclusive(r.diagnostics.join("; ")),
        }
    }
}

/// Aggregates probes given in deterministic order: the first failure wins,
/// otherwise undecided probes make the whole check undecided.
pub fn aggregate(check: &str, scope: &str, probes: impl IntoIterator<Item = Probe>) -> VerdictReport {
    let mut instances = 0;
    let mut counterexample = None;
    let mut diagnostics: Vec<String> = Vec::new();
    let mut undecided = 0;
    for p in probes {
        instances += 1;
        match p {
            Probe::Pass => {}
            Probe::Fail(c) => {
                counterexample.get_or_insert(c);
            }
            Probe::Inconclusive(msg) => {
                undecided += 1;
                if diagnostics.len() < 8 && !diagnostics.contains(&msg) {
                    diagnostics.push(msg);
                }
            }
        }
    }
    let verdict = if counterexample.is_some() {
        Verdict::Fail
    } else if undecided > 0 {
        diagnostics.insert(0, format!("{undecided} undecided instance(s)"));
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    VerdictReport { check: check.into(), verdict, scope: scope.into(), instances, counterexample, diagnostics, parts: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_conjunction() {
        use Verdict::*;
        assert_eq!(Pass.and(Pass), Pass);
        assert_eq!(Pass.and(Inconclusive), Inconclusive);
        assert_eq!(Inconclusive.and(Fail), Fail);
        assert_eq!(Verdict::from_option(None), Inconclusive);
    }

    #[test]
    fn aggregation_prefers_first_failure() {
        let r = aggregate(
            "c",
            "s",
            vec![
                Probe::Pass,
                Probe::Inconclusive("fuel".into()),
                Probe::Fail(Counterexample::new("first")),
                Probe::Fail(Counterexample::new("second")),
            ],
        );
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.instances, 4);
        assert_eq!(r.counterexample.unwrap().description, "first");
        let r = aggregate("c", "s", vec![Probe::Pass, Probe::Inconclusive("fuel".into())]);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        let r = aggregate("c", "s", Vec::new());
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn serialized_field_order_is_stable() {
        let r = aggregate("c", "s", vec![Probe::Pass]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"check":"c","verdict":"pass","scope":"s","instances":1}"#);
    }
}
