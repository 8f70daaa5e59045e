use super::{Domains, PropResult, Propagator, VarId};

/// `total = Σ xs`, bounds consistency.
pub struct LinearSumEq {
    xs: Vec<VarId>,
    total: VarId,
}

impl LinearSumEq {
    pub fn new(xs: Vec<VarId>, total: VarId) -> Self {
        Self { xs, total }
    }
}

impl Propagator for LinearSumEq {
    fn scope(&self) -> Vec<VarId> {
        let mut s = self.xs.clone();
        s.push(self.total);
        s
    }

    fn propagate(&mut self, doms: &mut Domains) -> PropResult {
        loop {
            let sum_min: i64 = self.xs.iter().map(|&x| doms.min(x)).sum();
            let sum_max: i64 = self.xs.iter().map(|&x| doms.max(x)).sum();
            let mut changed = doms.set_min(self.total, sum_min)?;
            changed |= doms.set_max(self.total, sum_max)?;
            let (t_min, t_max) = (doms.min(self.total), doms.max(self.total));
            for &x in &self.xs {
                let (lo, hi) = (doms.min(x), doms.max(x));
                // others contribute between sum_min - lo and sum_max - hi
                changed |= doms.set_min(x, t_min - (sum_max - hi))?;
                changed |= doms.set_max(x, t_max - (sum_min - lo))?;
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn idempotent(&self) -> bool {
        true
    }

    fn name(&self) -> &'static str {
        "linear_sum_eq"
    }
}

#[cfg(test)]
mod tests {
    use crate::engine::Network;

    #[test]
    fn fixed_total_forces_terms() {
        let mut net = Network::new();
        let a = net.new_var(&[1, 2]);
        let b = net.new_var(&[3, 4]);
        let t = net.new_var(&[4]);
        net.post_linear_sum_eq(&[a, b], t);
        net.propagate().unwrap();
        assert_eq!(net.domains().value(a), Some(1));
        assert_eq!(net.domains().value(b), Some(3));
    }

    #[test]
    fn fixed_terms_fix_total() {
        let mut net = Network::new();
        let xs: Vec<_> = [2, 3, 5].iter().map(|&v| net.new_var(&[v])).collect();
        let t = net.new_interval_var(0, 100);
        net.post_linear_sum_eq(&xs, t);
        net.propagate().unwrap();
        assert_eq!(net.domains().value(t), Some(10));
    }
}
