use super::{Domains, PropResult, Propagator, VarId};

/// `occ` equals the number of variables of `xs` taking `value`.
pub struct CountValue {
    value: i64,
    xs: Vec<VarId>,
    occ: VarId,
}

impl CountValue {
    pub fn new(value: i64, xs: Vec<VarId>, occ: VarId) -> Self {
        Self { value, xs, occ }
    }
}

impl Propagator for CountValue {
    fn scope(&self) -> Vec<VarId> {
        let mut s = self.xs.clone();
        s.push(self.occ);
        s
    }

    fn propagate(&mut self, doms: &mut Domains) -> PropResult {
        let v = self.value;
        let mut lower = 0i64;
        let mut upper = 0i64;
        for &x in &self.xs {
            if doms.contains(x, v) {
                upper += 1;
                if doms.is_fixed(x) {
                    lower += 1;
                }
            }
        }
        doms.set_min(self.occ, lower)?;
        doms.set_max(self.occ, upper)?;
        if lower == upper {
            return Ok(());
        }
        if doms.max(self.occ) == lower {
            for &x in &self.xs {
                if !doms.is_fixed(x) {
                    doms.remove(x, v)?;
                }
            }
            doms.assign(self.occ, lower)?;
        } else if doms.min(self.occ) == upper {
            for &x in &self.xs {
                if doms.contains(x, v) {
                    doms.assign(x, v)?;
                }
            }
            doms.assign(self.occ, upper)?;
        }
        Ok(())
    }

    fn idempotent(&self) -> bool {
        true
    }

    fn name(&self) -> &'static str {
        "count_value"
    }
}
