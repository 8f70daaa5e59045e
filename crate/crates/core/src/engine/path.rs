use super::{Domains, PropResult, Propagator, VarId};

/// `a = 0 ∨ b = 0 ∨ no variable of path takes 0`.
///
/// Posted for every pair of query nodes with the interior of their tree path:
/// when both endpoints are mapped, everything between them must be mapped
/// too, which on a tree is exactly connectivity of the mapped set.
pub struct PathZeroLink {
    a: VarId,
    b: VarId,
    path: Vec<VarId>,
}

impl PathZeroLink {
    pub fn new(a: VarId, b: VarId, path: Vec<VarId>) -> Self {
        assert!(!path.is_empty(), "path_zero_link needs a non-empty path");
        Self { a, b, path }
    }
}

impl Propagator for PathZeroLink {
    fn scope(&self) -> Vec<VarId> {
        let mut s = vec![self.a, self.b];
        s.extend_from_slice(&self.path);
        s
    }

    fn propagate(&mut self, doms: &mut Domains) -> PropResult {
        let a_zero = doms.contains(self.a, 0);
        let b_zero = doms.contains(self.b, 0);
        if !a_zero && !b_zero {
            for &x in &self.path {
                doms.remove(x, 0)?;
            }
            return Ok(());
        }
        if doms.value(self.a) == Some(0) || doms.value(self.b) == Some(0) {
            return Ok(());
        }
        let path_has_zero = self.path.iter().any(|&x| doms.value(x) == Some(0));
        if path_has_zero {
            if !a_zero {
                doms.assign(self.b, 0)?;
            } else if !b_zero {
                doms.assign(self.a, 0)?;
            }
        }
        Ok(())
    }

    fn idempotent(&self) -> bool {
        true
    }

    fn name(&self) -> &'static str {
        "path_zero_link"
    }
}
