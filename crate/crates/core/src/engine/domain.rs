//! Reversible integer domains.
//!
//! Two representations live side by side. Enumerated domains are sparse sets
//! over a fixed, sorted universe of values, so removing any value and
//! restoring it on backtrack are both O(1). Interval domains only track their
//! bounds; they are used for variables with huge ranges (the objective) where
//! only bounds reasoning is ever applied.

use super::{Inconsistency, VarId};

#[derive(Debug, Clone)]
enum Repr {
    Sparse {
        universe: Vec<i64>,
        dense: Vec<u32>,
        pos: Vec<u32>,
        size: u32,
        lo: u32,
        hi: u32,
    },
    Interval {
        lo: i64,
        hi: i64,
    },
}

/// A saved snapshot of one variable, enough to undo any sequence of
/// removals performed after it was taken.
#[derive(Debug, Clone, Copy)]
struct Saved {
    var: VarId,
    a: i64,
    b: i64,
    c: i64,
}

#[derive(Debug, Clone)]
enum TrailEntry {
    Marker,
    Undo(Saved),
}

/// The domain store: every variable's domain, the undo trail, and the list of
/// variables modified since the last drain.
#[derive(Debug, Clone, Default)]
pub struct Domains {
    doms: Vec<Repr>,
    stamp: Vec<u64>,
    trail: Vec<TrailEntry>,
    epochs: Vec<u64>,
    next_epoch: u64,
    changed: Vec<VarId>,
    is_changed: Vec<bool>,
}

impl Domains {
    pub fn new() -> Self {
        Self {
            epochs: vec![0],
            next_epoch: 1,
            ..Default::default()
        }
    }

    /// Adds a variable whose domain is the given set of values.
    pub fn add_enumerated(&mut self, values: &[i64]) -> VarId {
        let mut universe = values.to_vec();
        universe.sort_unstable();
        universe.dedup();
        let n = universe.len() as u32;
        let repr = Repr::Sparse {
            dense: (0..n).collect(),
            pos: (0..n).collect(),
            size: n,
            lo: 0,
            hi: n.saturating_sub(1),
            universe,
        };
        self.push_var(repr)
    }

    /// Adds a bounds-only variable over `[lo, hi]`.
    pub fn add_interval(&mut self, lo: i64, hi: i64) -> VarId {
        self.push_var(Repr::Interval { lo, hi })
    }

    fn push_var(&mut self, repr: Repr) -> VarId {
        let id = VarId(self.doms.len());
        self.doms.push(repr);
        self.stamp.push(u64::MAX);
        self.is_changed.push(false);
        id
    }

    pub fn num_vars(&self) -> usize {
        self.doms.len()
    }

    /// Current search depth (number of open `push_depth` calls).
    pub fn depth(&self) -> usize {
        self.epochs.len() - 1
    }

    pub fn push_depth(&mut self) {
        self.trail.push(TrailEntry::Marker);
        self.epochs.push(self.next_epoch);
        self.next_epoch += 1;
    }

    /// Undoes every modification made since the matching `push_depth`.
    pub fn pop_depth(&mut self) -> Result<(), super::EngineError> {
        if self.epochs.len() <= 1 {
            return Err(super::EngineError::PopWithoutPush);
        }
        self.epochs.pop();
        while let Some(entry) = self.trail.pop() {
            match entry {
                TrailEntry::Marker => break,
                TrailEntry::Undo(s) => self.restore(s),
            }
        }
        // Fresh epoch for the level we returned to: variables saved in the
        // popped child must be saved again before further changes here.
        if let Some(top) = self.epochs.last_mut() {
            *top = self.next_epoch;
            self.next_epoch += 1;
        }
        Ok(())
    }

    fn restore(&mut self, s: Saved) {
        match &mut self.doms[s.var.0] {
            Repr::Sparse { size, lo, hi, .. } => {
                *size = s.a as u32;
                *lo = s.b as u32;
                *hi = s.c as u32;
            }
            Repr::Interval { lo, hi } => {
                *lo = s.a;
                *hi = s.b;
            }
        }
    }

    fn save(&mut self, x: VarId) {
        if self.epochs.len() <= 1 {
            return;
        }
        let epoch = *self.epochs.last().unwrap();
        if self.stamp[x.0] == epoch {
            return;
        }
        self.stamp[x.0] = epoch;
        let (a, b, c) = match &self.doms[x.0] {
            Repr::Sparse { size, lo, hi, .. } => (*size as i64, *lo as i64, *hi as i64),
            Repr::Interval { lo, hi } => (*lo, *hi, 0),
        };
        self.trail.push(TrailEntry::Undo(Saved { var: x, a, b, c }));
    }

    fn mark_changed(&mut self, x: VarId) {
        if !self.is_changed[x.0] {
            self.is_changed[x.0] = true;
            self.changed.push(x);
        }
    }

    /// Returns and clears the set of variables modified since the last call.
    pub fn drain_changed(&mut self) -> Vec<VarId> {
        for x in &self.changed {
            self.is_changed[x.0] = false;
        }
        std::mem::take(&mut self.changed)
    }

    pub(crate) fn clear_changed(&mut self) {
        for x in self.changed.drain(..) {
            self.is_changed[x.0] = false;
        }
    }

    pub fn size(&self, x: VarId) -> u64 {
        match &self.doms[x.0] {
            Repr::Sparse { size, .. } => *size as u64,
            Repr::Interval { lo, hi } => {
                if hi < lo {
                    0
                } else {
                    (hi - lo + 1) as u64
                }
            }
        }
    }

    pub fn min(&self, x: VarId) -> i64 {
        match &self.doms[x.0] {
            Repr::Sparse { universe, lo, .. } => universe[*lo as usize],
            Repr::Interval { lo, .. } => *lo,
        }
    }

    pub fn max(&self, x: VarId) -> i64 {
        match &self.doms[x.0] {
            Repr::Sparse { universe, hi, .. } => universe[*hi as usize],
            Repr::Interval { hi, .. } => *hi,
        }
    }

    pub fn is_fixed(&self, x: VarId) -> bool {
        self.size(x) == 1
    }

    /// The assigned value, if the domain is a singleton.
    pub fn value(&self, x: VarId) -> Option<i64> {
        self.is_fixed(x).then(|| self.min(x))
    }

    pub fn contains(&self, x: VarId, v: i64) -> bool {
        match &self.doms[x.0] {
            Repr::Sparse {
                universe,
                pos,
                size,
                ..
            } => match universe.binary_search(&v) {
                Ok(i) => pos[i] < *size,
                Err(_) => false,
            },
            Repr::Interval { lo, hi } => *lo <= v && v <= *hi,
        }
    }

    /// Whether the variable is enumerated (sparse) rather than bounds-only.
    pub fn is_enumerated(&self, x: VarId) -> bool {
        matches!(self.doms[x.0], Repr::Sparse { .. })
    }

    /// Sorted initial values of an enumerated variable.
    pub fn universe(&self, x: VarId) -> &[i64] {
        match &self.doms[x.0] {
            Repr::Sparse { universe, .. } => universe,
            Repr::Interval { .. } => panic!("interval variable {x:?} has no universe"),
        }
    }

    pub fn index_of(&self, x: VarId, v: i64) -> Option<usize> {
        match &self.doms[x.0] {
            Repr::Sparse { universe, .. } => universe.binary_search(&v).ok(),
            Repr::Interval { .. } => None,
        }
    }

    pub fn contains_idx(&self, x: VarId, idx: usize) -> bool {
        match &self.doms[x.0] {
            Repr::Sparse { pos, size, .. } => pos[idx] < *size,
            Repr::Interval { .. } => panic!("interval variable {x:?} is not indexed"),
        }
    }

    /// Universe indices of the values currently in the domain (unordered).
    pub fn present_indices(&self, x: VarId) -> &[u32] {
        match &self.doms[x.0] {
            Repr::Sparse { dense, size, .. } => &dense[..*size as usize],
            Repr::Interval { .. } => panic!("interval variable {x:?} is not indexed"),
        }
    }

    /// Current values in increasing order.
    pub fn values(&self, x: VarId) -> Vec<i64> {
        match &self.doms[x.0] {
            Repr::Sparse {
                universe,
                pos,
                size,
                lo,
                hi,
                ..
            } => {
                if *size == 0 {
                    return Vec::new();
                }
                (*lo..=*hi)
                    .filter(|&i| pos[i as usize] < *size)
                    .map(|i| universe[i as usize])
                    .collect()
            }
            Repr::Interval { lo, hi } => (*lo..=*hi).collect(),
        }
    }

    /// Removes the value with universe index `idx`.
    pub fn remove_idx(&mut self, x: VarId, idx: usize) -> Result<bool, Inconsistency> {
        if !self.contains_idx(x, idx) {
            return Ok(false);
        }
        self.save(x);
        let Repr::Sparse {
            dense,
            pos,
            size,
            lo,
            hi,
            ..
        } = &mut self.doms[x.0]
        else {
            unreachable!()
        };
        let p = pos[idx] as usize;
        let last = *size as usize - 1;
        let moved = dense[last];
        dense.swap(p, last);
        pos[moved as usize] = p as u32;
        pos[idx] = last as u32;
        *size -= 1;
        if *size == 0 {
            self.mark_changed(x);
            return Err(Inconsistency);
        }
        let idx = idx as u32;
        if idx == *lo {
            while pos[*lo as usize] >= *size {
                *lo += 1;
            }
        }
        if idx == *hi {
            while pos[*hi as usize] >= *size {
                *hi -= 1;
            }
        }
        self.mark_changed(x);
        Ok(true)
    }

    pub fn remove(&mut self, x: VarId, v: i64) -> Result<bool, Inconsistency> {
        match &self.doms[x.0] {
            Repr::Sparse { universe, .. } => match universe.binary_search(&v) {
                Ok(i) => self.remove_idx(x, i),
                Err(_) => Ok(false),
            },
            Repr::Interval { lo, hi } => {
                let (lo, hi) = (*lo, *hi);
                if v == lo {
                    self.set_min(x, v + 1)
                } else if v == hi {
                    self.set_max(x, v - 1)
                } else {
                    // Interior holes are not representable; bounds-only.
                    Ok(false)
                }
            }
        }
    }

    /// Removes every value below `v`.
    pub fn set_min(&mut self, x: VarId, v: i64) -> Result<bool, Inconsistency> {
        if v <= self.min(x) {
            return Ok(false);
        }
        if v > self.max(x) {
            self.empty(x);
            return Err(Inconsistency);
        }
        match &self.doms[x.0] {
            Repr::Sparse { universe, lo, .. } => {
                let start = *lo as usize;
                let end = universe.partition_point(|&u| u < v);
                for i in start..end {
                    self.remove_idx(x, i)?;
                }
            }
            Repr::Interval { .. } => {
                self.save(x);
                if let Repr::Interval { lo, .. } = &mut self.doms[x.0] {
                    *lo = v;
                }
                self.mark_changed(x);
            }
        }
        Ok(true)
    }

    /// Removes every value above `v`.
    pub fn set_max(&mut self, x: VarId, v: i64) -> Result<bool, Inconsistency> {
        if v >= self.max(x) {
            return Ok(false);
        }
        if v < self.min(x) {
            self.empty(x);
            return Err(Inconsistency);
        }
        match &self.doms[x.0] {
            Repr::Sparse { universe, hi, .. } => {
                let start = universe.partition_point(|&u| u <= v);
                let end = *hi as usize;
                for i in (start..=end).rev() {
                    self.remove_idx(x, i)?;
                }
            }
            Repr::Interval { .. } => {
                self.save(x);
                if let Repr::Interval { hi, .. } = &mut self.doms[x.0] {
                    *hi = v;
                }
                self.mark_changed(x);
            }
        }
        Ok(true)
    }

    /// Reduces the domain to `{v}`.
    pub fn assign(&mut self, x: VarId, v: i64) -> Result<bool, Inconsistency> {
        if !self.contains(x, v) {
            self.empty(x);
            return Err(Inconsistency);
        }
        if self.is_fixed(x) {
            return Ok(false);
        }
        self.save(x);
        match &mut self.doms[x.0] {
            Repr::Sparse {
                universe,
                dense,
                pos,
                size,
                lo,
                hi,
            } => {
                let idx = universe.binary_search(&v).unwrap();
                let p = pos[idx] as usize;
                let first = dense[0];
                dense.swap(0, p);
                pos[first as usize] = p as u32;
                pos[idx] = 0;
                *size = 1;
                *lo = idx as u32;
                *hi = idx as u32;
            }
            Repr::Interval { lo, hi } => {
                *lo = v;
                *hi = v;
            }
        }
        self.mark_changed(x);
        Ok(true)
    }

    /// Wipes out a domain as part of signalling a failure. The state is
    /// restored by the next `pop_depth`.
    fn empty(&mut self, x: VarId) {
        self.save(x);
        match &mut self.doms[x.0] {
            Repr::Sparse { size, .. } => *size = 0,
            Repr::Interval { lo, hi } => *hi = *lo - 1,
        }
        self.mark_changed(x);
    }
}
