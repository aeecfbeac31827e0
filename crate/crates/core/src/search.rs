//! Backtracking search for natural transformations with naturality propagation.
//!
//! Variables are the elements of the source presheaf, ordered by base object
//! (declared order) and then by element order. Branching always picks the
//! first unassigned variable and tries target elements in ascending order, so
//! solutions come out in lexicographic order of the flattened assignment.
//! Forced values (from naturality or from fixed constraints) never change
//! that order, only prune it.

use std::sync::Arc;

use crate::base::ObjId;
use crate::presheaf::{Presheaf, PresheafMap};

const UNSET: usize = usize::MAX;

/// Constraints on a map `source -> target` beyond naturality.
#[derive(Debug, Clone)]
pub struct MapQuery {
    source: Arc<Presheaf>,
    target: Arc<Presheaf>,
    offsets: Vec<usize>,
    allowed: Vec<u64>,
    fixed: Vec<(usize, usize)>,
    infeasible: bool,
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl MapQuery {
    pub fn new(source: &Arc<Presheaf>, target: &Arc<Presheaf>) -> Self {
        let base = source.base();
        let mut offsets = Vec::with_capacity(base.object_count() + 1);
        let mut allowed = Vec::new();
        let mut total = 0;
        for o in 0..base.object_count() {
            offsets.push(total);
            total += source.size(o);
            allowed.extend(std::iter::repeat_n(full_mask(target.size(o)), source.size(o)));
        }
        offsets.push(total);
        let infeasible = source.base() != target.base();
        MapQuery { source: source.clone(), target: target.clone(), offsets, allowed, fixed: Vec::new(), infeasible }
    }

    /// Requires `h(x) = y` at object `obj`.
    pub fn fix(mut self, obj: ObjId, x: usize, y: usize) -> Self {
        self.fixed.push((self.offsets[obj] + x, y));
        self
    }

    /// Restricts `h(x)` at `obj` to the target elements in `mask`.
    pub fn restrict(mut self, obj: ObjId, x: usize, mask: u64) -> Self {
        self.allowed[self.offsets[obj] + x] &= mask;
        self
    }

    /// Requires `h ∘ along = values` (both maps out of the same presheaf).
    pub fn fix_along(mut self, along: &PresheafMap, values: &PresheafMap) -> Self {
        if along.source() != values.source() || along.target() != &self.source || values.target() != &self.target {
            self.infeasible = true;
            return self;
        }
        for o in 0..self.offsets.len() - 1 {
            for (&x, &y) in along.component(o).iter().zip(values.component(o)) {
                self = self.fix(o, x, y);
            }
        }
        self
    }

    /// Requires `through ∘ h = values` (both maps into the same presheaf).
    pub fn lie_over(mut self, through: &PresheafMap, values: &PresheafMap) -> Self {
        if through.source() != &self.target || values.source() != &self.source || through.target() != values.target() {
            self.infeasible = true;
            return self;
        }
        for o in 0..self.offsets.len() - 1 {
            let tc = through.component(o);
            for (x, &v) in values.component(o).iter().enumerate() {
                let mask = tc.iter().enumerate().filter(|(_, &t)| t == v).fold(0u64, |m, (y, _)| m | (1 << y));
                self.allowed[self.offsets[o] + x] &= mask;
            }
        }
        self
    }

    pub fn search(self) -> MapSearch {
        MapSearch::new(self)
    }

    pub fn first(self) -> Option<PresheafMap> {
        self.search().next()
    }

    pub fn exists(self) -> bool {
        self.search().next().is_some()
    }
}

struct Frame {
    var: usize,
    remaining: u64,
    trail_len: usize,
}

/// Iterator over all maps satisfying a [`MapQuery`], in lexicographic order.
pub struct MapSearch {
    q: MapQuery,
    var_obj: Vec<ObjId>,
    assign: Vec<usize>,
    trail: Vec<usize>,
    stack: Vec<Frame>,
    started: bool,
    descend: bool,
    done: bool,
}

impl MapSearch {
    fn new(q: MapQuery) -> Self {
        let n = *q.offsets.last().unwrap();
        let mut var_obj = Vec::with_capacity(n);
        for o in 0..q.offsets.len() - 1 {
            var_obj.extend(std::iter::repeat_n(o, q.offsets[o + 1] - q.offsets[o]));
        }
        MapSearch {
            q,
            var_obj,
            assign: vec![UNSET; n],
            trail: Vec::new(),
            stack: Vec::new(),
            started: false,
            descend: false,
            done: false,
        }
    }

    /// Assigns `var = val` and propagates naturality; `false` on conflict.
    /// Partial assignments stay on the trail and are undone by the caller.
    fn assign(&mut self, var: usize, val: usize) -> bool {
        let mut work = vec![(var, val)];
        while let Some((v, y)) = work.pop() {
            if self.assign[v] != UNSET {
                if self.assign[v] != y {
                    return false;
                }
                continue;
            }
            if y >= 64 || self.q.allowed[v] & (1 << y) == 0 {
                return false;
            }
            self.assign[v] = y;
            self.trail.push(v);
            let b = self.var_obj[v];
            let x = v - self.q.offsets[b];
            let base = self.q.source.base();
            for &m in base.non_identity_into(b) {
                let a = base.morphism(m).dom;
                let xa = self.q.source.act(m, x);
                let ya = self.q.target.act(m, y);
                work.push((self.q.offsets[a] + xa, ya));
            }
        }
        true
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().unwrap();
            self.assign[v] = UNSET;
        }
    }

    fn solution(&self) -> PresheafMap {
        let comps = (0..self.q.offsets.len() - 1)
            .map(|o| self.assign[self.q.offsets[o]..self.q.offsets[o + 1]].to_vec())
            .collect();
        PresheafMap::new_unchecked(self.q.source.clone(), self.q.target.clone(), comps)
    }
}

impl Iterator for MapSearch {
    type Item = PresheafMap;

    fn next(&mut self) -> Option<PresheafMap> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.q.infeasible {
                self.done = true;
                return None;
            }
            let fixed = std::mem::take(&mut self.q.fixed);
            for &(v, y) in &fixed {
                if !self.assign(v, y) {
                    self.done = true;
                    return None;
                }
            }
            self.descend = true;
        }
        loop {
            if self.descend {
                self.descend = false;
                match self.assign.iter().position(|&a| a == UNSET) {
                    None => return Some(self.solution()),
                    Some(var) => {
                        let remaining = self.q.allowed[var];
                        self.stack.push(Frame { var, remaining, trail_len: self.trail.len() });
                    }
                }
            }
            let Some(top) = self.stack.last_mut() else {
                self.done = true;
                return None;
            };
            let (var, trail_len) = (top.var, top.trail_len);
            if top.remaining == 0 {
                self.stack.pop();
                self.undo(trail_len);
                continue;
            }
            let y = top.remaining.trailing_zeros() as usize;
            top.remaining &= top.remaining - 1;
            self.undo(trail_len);
            if self.assign(var, y) {
                self.descend = true;
            }
        }
    }
}

/// Every natural transformation `x -> y`, in lexicographic order.
pub fn hom_enumerate(x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> MapSearch {
    MapQuery::new(x, y).search()
}
