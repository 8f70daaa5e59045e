//! A small backtracking constraint engine.
//!
//! Variables hold trailed integer domains ([`Domains`]); constraints are
//! [`Propagator`]s woken through a FIFO queue whenever a variable in their
//! scope changes. The network also keeps one failure weight per constraint,
//! the statistic behind the dom/wdeg branching heuristic.

mod alldiff;
mod count;
mod domain;
mod path;
mod sum;
mod table;

use std::collections::VecDeque;

pub use alldiff::AllDifferentExcept0;
pub use count::CountValue;
pub use domain::Domains;
pub use path::PathZeroLink;
pub use sum::LinearSumEq;
pub use table::BinaryTable;

/// Handle of a variable in a [`Network`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

/// Handle of a posted constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintId(pub usize);

/// Signal that some domain became empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inconsistency;

pub type PropResult = Result<(), Inconsistency>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("pop_depth called without a matching push_depth")]
    PopWithoutPush,
}

pub trait Propagator: Send {
    fn scope(&self) -> Vec<VarId>;

    /// Removes unsupported values. Must only ever shrink domains.
    fn propagate(&mut self, doms: &mut Domains) -> PropResult;

    /// True when a single call always reaches the propagator's own fixpoint,
    /// so its own modifications need not wake it again.
    fn idempotent(&self) -> bool {
        false
    }

    fn name(&self) -> &'static str;
}

/// Variables, constraints and the propagation machinery.
pub struct Network {
    doms: Domains,
    props: Vec<Box<dyn Propagator>>,
    scopes: Vec<Vec<VarId>>,
    watchers: Vec<Vec<ConstraintId>>,
    queue: VecDeque<ConstraintId>,
    queued: Vec<bool>,
    weights: Vec<u64>,
    var_wdeg: Vec<u64>,
}

impl Default for Network {
    fn default() -> Self {
        Self::new()
    }
}

impl Network {
    pub fn new() -> Self {
        Self {
            doms: Domains::new(),
            props: Vec::new(),
            scopes: Vec::new(),
            watchers: Vec::new(),
            queue: VecDeque::new(),
            queued: Vec::new(),
            weights: Vec::new(),
            var_wdeg: Vec::new(),
        }
    }

    pub fn new_var(&mut self, values: &[i64]) -> VarId {
        let x = self.doms.add_enumerated(values);
        self.watchers.push(Vec::new());
        self.var_wdeg.push(0);
        x
    }

    pub fn new_interval_var(&mut self, lo: i64, hi: i64) -> VarId {
        let x = self.doms.add_interval(lo, hi);
        self.watchers.push(Vec::new());
        self.var_wdeg.push(0);
        x
    }

    pub fn domains(&self) -> &Domains {
        &self.doms
    }

    /// Direct domain access. Changes made here are picked up by the next
    /// [`Network::propagate`].
    pub fn domains_mut(&mut self) -> &mut Domains {
        &mut self.doms
    }

    pub fn num_vars(&self) -> usize {
        self.doms.num_vars()
    }

    pub fn num_constraints(&self) -> usize {
        self.props.len()
    }

    /// Registers a propagator and schedules it for the next propagation.
    pub fn post(&mut self, prop: Box<dyn Propagator>) -> ConstraintId {
        let id = ConstraintId(self.props.len());
        let mut scope = prop.scope();
        scope.sort_unstable();
        scope.dedup();
        assert!(
            !scope.is_empty(),
            "constraint {} has an empty scope",
            prop.name()
        );
        for &x in &scope {
            self.watchers[x.0].push(id);
            self.var_wdeg[x.0] += 1;
        }
        self.props.push(prop);
        self.scopes.push(scope);
        self.weights.push(1);
        self.queued.push(true);
        self.queue.push_back(id);
        id
    }

    pub fn post_binary_table(
        &mut self,
        x: VarId,
        y: VarId,
        allowed: &[(i64, i64)],
    ) -> ConstraintId {
        let prop = BinaryTable::new(&self.doms, x, y, allowed);
        self.post(Box::new(prop))
    }

    pub fn post_all_different_except_0(&mut self, xs: &[VarId], strong: bool) -> ConstraintId {
        self.post(Box::new(AllDifferentExcept0::new(xs.to_vec(), strong)))
    }

    pub fn post_count_value(&mut self, value: i64, xs: &[VarId], occ: VarId) -> ConstraintId {
        self.post(Box::new(CountValue::new(value, xs.to_vec(), occ)))
    }

    pub fn post_linear_sum_eq(&mut self, xs: &[VarId], total: VarId) -> ConstraintId {
        self.post(Box::new(LinearSumEq::new(xs.to_vec(), total)))
    }

    pub fn post_path_zero_link(&mut self, a: VarId, b: VarId, path: &[VarId]) -> ConstraintId {
        self.post(Box::new(PathZeroLink::new(a, b, path.to_vec())))
    }

    pub fn scope(&self, c: ConstraintId) -> &[VarId] {
        &self.scopes[c.0]
    }

    pub fn constraint_name(&self, c: ConstraintId) -> &'static str {
        self.props[c.0].name()
    }

    /// Failure weight of a constraint: 1 plus the failures it signalled.
    pub fn weight(&self, c: ConstraintId) -> u64 {
        self.weights[c.0]
    }

    /// Sum of the weights of the constraints attached to `x`.
    pub fn wdeg(&self, x: VarId) -> u64 {
        self.var_wdeg[x.0]
    }

    /// Resets every failure weight to 1.
    pub fn reset_weights(&mut self) {
        self.weights.iter_mut().for_each(|w| *w = 1);
        self.var_wdeg.iter_mut().for_each(|w| *w = 0);
        for scope in &self.scopes {
            for x in scope {
                self.var_wdeg[x.0] += 1;
            }
        }
    }

    pub fn push_depth(&mut self) {
        self.doms.push_depth();
    }

    pub fn pop_depth(&mut self) -> Result<(), EngineError> {
        self.doms.pop_depth()
    }

    pub fn depth(&self) -> usize {
        self.doms.depth()
    }

    fn schedule_changed(&mut self, skip: Option<ConstraintId>) {
        for x in self.doms.drain_changed() {
            for &c in &self.watchers[x.0] {
                if Some(c) != skip && !self.queued[c.0] {
                    self.queued[c.0] = true;
                    self.queue.push_back(c);
                }
            }
        }
    }

    /// Runs queued propagators until nothing changes. On failure the failing
    /// constraint's weight is bumped and its id returned.
    pub fn propagate(&mut self) -> Result<(), ConstraintId> {
        self.schedule_changed(None);
        while let Some(c) = self.queue.pop_front() {
            self.queued[c.0] = false;
            let outcome = self.props[c.0].propagate(&mut self.doms);
            match outcome {
                Ok(()) => {
                    let skip = self.props[c.0].idempotent().then_some(c);
                    self.schedule_changed(skip);
                }
                Err(Inconsistency) => {
                    self.weights[c.0] += 1;
                    for &x in &self.scopes[c.0] {
                        self.var_wdeg[x.0] += 1;
                    }
                    self.clear_queue();
                    return Err(c);
                }
            }
        }
        Ok(())
    }

    /// Drops pending work after a failure detected outside a propagator.
    pub fn clear_queue(&mut self) {
        for c in self.queue.drain(..) {
            self.queued[c.0] = false;
        }
        self.doms.clear_changed();
    }
}
