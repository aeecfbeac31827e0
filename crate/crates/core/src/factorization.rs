//! Guarded small object argument: `(I-cell, I-inj)` factorizations with a
//! replayable log of cell attachments, and the membership tests built on it.
//!
//! Each round collects, in enumeration order, the squares from generators to
//! the current right map that have no lift. Those squares are then handled one
//! by one: a square whose transported version has meanwhile become liftable is
//! skipped, otherwise a cell is attached by pushing the generator out along the
//! (transported) top map. A round without unliftable squares ends the run.

use std::sync::Arc;

use crate::colimit::{pushout_tagged, Tagging};
use crate::error::{Error, Result};
use crate::lifting::{first_unliftable, solve_lifting, squares, LiftingCache, LiftingProblem};
use crate::presheaf::{comp, Presheaf, PresheafMap};

/// An ordered set of generating maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratingSet {
    pub label: String,
    pub maps: Vec<PresheafMap>,
}

impl GeneratingSet {
    pub fn new(label: impl Into<String>, maps: Vec<PresheafMap>) -> Self {
        GeneratingSet { label: label.into(), maps }
    }

    pub fn empty(label: impl Into<String>) -> Self {
        Self::new(label, Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Domains of the generators, first occurrence order, duplicates removed.
    pub fn domains(&self) -> Vec<Arc<Presheaf>> {
        let mut out: Vec<Arc<Presheaf>> = Vec::new();
        for m in &self.maps {
            if !out.contains(m.source()) {
                out.push(m.source().clone());
            }
        }
        out
    }
}

/// Order in which a round's unliftable squares are processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SquareOrder {
    #[default]
    Canonical,
    /// Reverse order within each round; used to build alternative cylinders.
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorizationStatus {
    Complete,
    FuelExhausted,
}

/// One cell attachment: the pushout of `generator` along `attaching`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub generator_index: usize,
    pub generator: PresheafMap,
    /// `dom(generator) -> M` for the `M` current at attachment time.
    pub attaching: PresheafMap,
    /// The `M` produced by this attachment.
    pub result: Arc<Presheaf>,
}

#[derive(Debug, Clone)]
pub struct CellFactorization {
    pub original: PresheafMap,
    pub left: PresheafMap,
    pub right: PresheafMap,
    pub log: Vec<Attachment>,
    pub fuel_used: usize,
    pub status: FactorizationStatus,
    pub rounds: usize,
}

impl CellFactorization {
    pub fn is_complete(&self) -> bool {
        self.status == FactorizationStatus::Complete
    }

    pub fn middle(&self) -> &Arc<Presheaf> {
        self.left.target()
    }

    /// The factorization, or `FuelExhausted` as an error.
    pub fn complete(self) -> Result<Self> {
        match self.status {
            FactorizationStatus::Complete => Ok(self),
            FactorizationStatus::FuelExhausted => Err(Error::FuelExhausted { used: self.fuel_used }),
        }
    }
}

/// Default attachment budget: ten times the total size of the target.
pub fn default_fuel(f: &PresheafMap) -> usize {
    10 * f.target().total_size()
}

fn cell_tagging(k: usize) -> Tagging {
    Tagging::new("", format!("c{k}:"))
}

pub fn soa_factorize(f: &PresheafMap, gens: &GeneratingSet, fuel: usize) -> CellFactorization {
    soa_factorize_with(f, gens, fuel, SquareOrder::Canonical)
}

pub fn soa_factorize_with(f: &PresheafMap, gens: &GeneratingSet, fuel: usize, order: SquareOrder) -> CellFactorization {
    let mut left = PresheafMap::identity(f.source());
    let mut right = f.clone();
    let mut log = Vec::new();
    let mut rounds = 0;
    loop {
        let mut frontier: Vec<(usize, LiftingProblem)> = Vec::new();
        for (k, i) in gens.maps.iter().enumerate() {
            frontier.extend(squares(i, &right).filter(|sq| solve_lifting(sq).is_none()).map(|sq| (k, sq)));
        }
        if frontier.is_empty() {
            return CellFactorization {
                original: f.clone(),
                left,
                right,
                fuel_used: log.len(),
                log,
                status: FactorizationStatus::Complete,
                rounds,
            };
        }
        rounds += 1;
        if order == SquareOrder::Reversed {
            frontier.reverse();
        }
        // inclusion of the round's starting M into the current M
        let mut moved = PresheafMap::identity(right.source());
        for (k, sq) in frontier {
            let generator = &gens.maps[k];
            let top = comp(&sq.top, &moved);
            let transported = LiftingProblem {
                left: generator.clone(),
                right: right.clone(),
                top: top.clone(),
                bottom: sq.bottom.clone(),
            };
            if solve_lifting(&transported).is_some() {
                continue;
            }
            if log.len() >= fuel {
                return CellFactorization {
                    original: f.clone(),
                    left,
                    right,
                    fuel_used: log.len(),
                    log,
                    status: FactorizationStatus::FuelExhausted,
                    rounds,
                };
            }
            let po = pushout_tagged(&top, generator, &cell_tagging(log.len() + 1))
                .expect("generator and attaching map share a domain");
            right = po.mediator(&right, &sq.bottom).expect("square commutes, so the cocone does");
            left = comp(&left, &po.leg_from_b);
            moved = comp(&moved, &po.leg_from_b);
            log.push(Attachment {
                generator_index: k,
                generator: generator.clone(),
                attaching: top,
                result: po.apex.clone(),
            });
        }
    }
}

/// Rebuilds `(M, j)` from a log, checking every recorded snapshot.
pub fn replay(log: &[Attachment], from: &Arc<Presheaf>) -> Result<(Arc<Presheaf>, PresheafMap)> {
    let mut j = PresheafMap::identity(from);
    for (n, att) in log.iter().enumerate() {
        if att.attaching.source() != att.generator.source() {
            return Err(Error::ReplayMismatch(format!("attachment {}: attaching map has the wrong domain", n + 1)));
        }
        if att.attaching.target() != j.target() {
            return Err(Error::ReplayMismatch(format!("attachment {}: attaching map is dangling", n + 1)));
        }
        let po = pushout_tagged(&att.attaching, &att.generator, &cell_tagging(n + 1))?;
        if po.apex != att.result {
            return Err(Error::ReplayMismatch(format!("attachment {}: result differs from the snapshot", n + 1)));
        }
        j = comp(&j, &po.leg_from_b);
    }
    Ok((j.target().clone(), j))
}

/// `f ∈ I-inj`.
pub fn in_inj(f: &PresheafMap, gens: &GeneratingSet) -> bool {
    gens.maps.iter().all(|i| first_unliftable(i, f).is_none())
}

/// `f ∈ I-inj`, memoized.
pub fn in_inj_cached(f: &PresheafMap, gens: &GeneratingSet, cache: &LiftingCache) -> bool {
    cache.has_rlp(f, &gens.maps)
}

/// `f ∈ I-cof`, decided by the retract argument: factor `f = p ∘ j` and lift
/// in the square `(f, p, j, id)`. Errors with `FuelExhausted` when the
/// factorization does not complete.
pub fn in_cof(f: &PresheafMap, gens: &GeneratingSet, fuel: usize) -> Result<bool> {
    Ok(cof_by_retract(&soa_factorize(f, gens, fuel).complete()?))
}

/// Whether the factored map lifts against its own right factor.
pub fn cof_by_retract(fact: &CellFactorization) -> bool {
    let f = &fact.original;
    let sq = LiftingProblem {
        left: f.clone(),
        right: fact.right.clone(),
        top: fact.left.clone(),
        bottom: PresheafMap::identity(f.target()),
    };
    solve_lifting(&sq).is_some()
}
