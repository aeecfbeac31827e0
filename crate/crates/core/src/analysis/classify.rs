use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::homotopy::strong_deformation_retraction;
use crate::presheaf::PresheafMap;

use super::checks::Checker;
use super::report::{undecided, Probe};

/// Membership of one map in each class; `None` means undecided.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub cofibration: Option<bool>,
    pub fibration: Option<bool>,
    pub weak_equivalence: Option<bool>,
    pub trivial_cofibration: Option<bool>,
    pub trivial_fibration: Option<bool>,
    pub pure: Option<bool>,
    pub strong_deformation_retract: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inconsistencies: Vec<String>,
}

fn and3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

/// A map of the universe, identified by its endpoints' labels and components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub source: String,
    pub target: String,
    pub components: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeListing {
    pub scope: String,
    pub total_maps: usize,
    pub weak_equivalences: Vec<MapEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undecided: Vec<MapEntry>,
}

impl Checker<'_> {
    pub fn classify_map(&self, f: &PresheafMap) -> Result<Classification> {
        let an = self.an;
        let cofibration = an.in_cof_undecided(f)?;
        let fibration = undecided(an.is_fibration(f))?;
        let weak_equivalence = an.is_weak_equivalence(f)?;
        let trivial_fibration = Some(an.in_inj(f));
        let pure = match self.purity(f) {
            Probe::Pass => Some(true),
            Probe::Fail(_) => Some(false),
            Probe::Inconclusive(_) => None,
        };
        let sdr = undecided(strong_deformation_retraction(f, an.gens(), an.fuel()))?.map(|w| w.is_some());
        let trivial_cofibration = and3(cofibration, weak_equivalence);
        let mut inconsistencies = Vec::new();
        if cofibration == Some(true) {
            if let (Some(t), Some(s)) = (trivial_cofibration, sdr) {
                if t != s {
                    inconsistencies.push(format!(
                        "cofibration with trivial-cofibration verdict {t} but strong deformation retract verdict {s}"
                    ));
                }
            }
        }
        Ok(Classification {
            cofibration,
            fibration,
            weak_equivalence,
            trivial_cofibration,
            trivial_fibration,
            pure,
            strong_deformation_retract: sdr,
            inconsistencies,
        })
    }

    fn entry(&self, k: usize) -> MapEntry {
        let m = &self.u.maps[k];
        MapEntry {
            source: self.u.labels[m.source].clone(),
            target: self.u.labels[m.target].clone(),
            components: m.map.components().to_vec(),
        }
    }

    /// Weak equivalences of the universe, in universe order.
    pub fn enumerate_we(&self) -> Result<WeListing> {
        let verdicts: Vec<Option<bool>> =
            self.u.maps.par_iter().map(|m| self.an.is_weak_equivalence(&m.map)).collect::<Result<_>>()?;
        let pick = |want: Option<bool>| -> Vec<MapEntry> {
            verdicts.iter().enumerate().filter(|(_, &v)| v == want).map(|(k, _)| self.entry(k)).collect()
        };
        Ok(WeListing {
            scope: self.scope().to_string(),
            total_maps: self.u.maps.len(),
            weak_equivalences: pick(Some(true)),
            undecided: pick(None),
        })
    }
}
