use alloc::collections::BTreeSet;
use alloc::format;

use crate::model::VarName;

/// Deterministic supply of fresh variable names.
///
/// A name is `base_k` with the smallest `k ≥ 1` that is neither forbidden nor
/// previously issued. Issuance depends only on the forbidden set and the
/// order of requests.
#[derive(Debug, Clone, Default)]
pub struct FreshVarSource {
    forbidden: BTreeSet<VarName>,
    issued: BTreeSet<VarName>,
}

impl FreshVarSource {
    pub fn new(forbidden: impl IntoIterator<Item = VarName>) -> Self {
        FreshVarSource {
            forbidden: forbidden.into_iter().collect(),
            issued: BTreeSet::new(),
        }
    }

    /// Adds names that must never be issued from now on.
    pub fn forbid(&mut self, vars: impl IntoIterator<Item = VarName>) {
        self.forbidden.extend(vars);
    }

    pub fn fresh(&mut self, base: &VarName) -> VarName {
        self.fresh_avoiding(base, &BTreeSet::new())
    }

    /// A fresh name that additionally avoids `extra`.
    pub fn fresh_avoiding(&mut self, base: &VarName, extra: &BTreeSet<VarName>) -> VarName {
        let name = (1u64..)
            .map(|k| VarName::new(&format!("{}_{}", base, k)).expect("suffix keeps names valid"))
            .find(|v| !self.forbidden.contains(v) && !self.issued.contains(v) && !extra.contains(v))
            .expect("unbounded search");
        self.issued.insert(name.clone());
        name
    }

    pub fn issued(&self) -> &BTreeSet<VarName> {
        &self.issued
    }
}
