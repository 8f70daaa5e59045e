use super::{Domains, Inconsistency, PropResult, Propagator, VarId};

/// Extensional constraint on two variables, filtered to GAC with AC-3 and
/// residual supports.
pub struct BinaryTable {
    x: VarId,
    y: VarId,
    /// For each universe index of x, the supporting universe indices of y.
    x_supports: Vec<Vec<u32>>,
    y_supports: Vec<Vec<u32>>,
    x_residue: Vec<u32>,
    y_residue: Vec<u32>,
}

impl BinaryTable {
    /// Pairs whose values fall outside the variables' initial domains are
    /// ignored.
    pub fn new(doms: &Domains, x: VarId, y: VarId, allowed: &[(i64, i64)]) -> Self {
        let nx = doms.universe(x).len();
        let ny = doms.universe(y).len();
        let mut x_supports = vec![Vec::new(); nx];
        let mut y_supports = vec![Vec::new(); ny];
        for &(v, w) in allowed {
            if let (Some(i), Some(j)) = (doms.index_of(x, v), doms.index_of(y, w)) {
                x_supports[i].push(j as u32);
                y_supports[j].push(i as u32);
            }
        }
        for list in x_supports.iter_mut().chain(y_supports.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        let x_residue = x_supports
            .iter()
            .map(|s| s.first().copied().unwrap_or(0))
            .collect();
        let y_residue = y_supports
            .iter()
            .map(|s| s.first().copied().unwrap_or(0))
            .collect();
        Self {
            x,
            y,
            x_supports,
            y_supports,
            x_residue,
            y_residue,
        }
    }

    /// Removes the values of `a` without support in `b`. Returns whether any
    /// value was removed.
    fn revise(
        doms: &mut Domains,
        a: VarId,
        b: VarId,
        supports: &[Vec<u32>],
        residue: &mut [u32],
    ) -> Result<bool, Inconsistency> {
        let mut removed = Vec::new();
        for &i in doms.present_indices(a) {
            let i = i as usize;
            let list = &supports[i];
            if list.is_empty() {
                removed.push(i);
                continue;
            }
            // residues are always drawn from the support list
            if doms.contains_idx(b, residue[i] as usize) {
                continue;
            }
            match list.iter().find(|&&j| doms.contains_idx(b, j as usize)) {
                Some(&j) => residue[i] = j,
                None => removed.push(i),
            }
        }
        let changed = !removed.is_empty();
        for i in removed {
            doms.remove_idx(a, i)?;
        }
        Ok(changed)
    }
}

impl Propagator for BinaryTable {
    fn scope(&self) -> Vec<VarId> {
        vec![self.x, self.y]
    }

    fn propagate(&mut self, doms: &mut Domains) -> PropResult {
        Self::revise(doms, self.x, self.y, &self.x_supports, &mut self.x_residue)?;
        // A value of x only loses support when y shrinks, so alternate until
        // y is stable.
        while Self::revise(doms, self.y, self.x, &self.y_supports, &mut self.y_residue)? {
            if !Self::revise(doms, self.x, self.y, &self.x_supports, &mut self.x_residue)? {
                break;
            }
        }
        Ok(())
    }

    fn idempotent(&self) -> bool {
        true
    }

    fn name(&self) -> &'static str {
        "binary_table"
    }
}
