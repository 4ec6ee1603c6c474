use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;

use super::flif::FlifExpr;
use crate::error::{Error, Result};
use crate::model::VarName;

/// An injective partial map on variables. Variables outside the domain map
/// to themselves.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Renaming {
    map: BTreeMap<VarName, VarName>,
}

impl Renaming {
    pub fn new(map: BTreeMap<VarName, VarName>) -> Result<Self> {
        let image: BTreeSet<_> = map.values().collect();
        if image.len() != map.len() {
            return Err(Error::BadRenaming(String::from("renaming is not injective")));
        }
        Ok(Renaming { map })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, v) in pairs {
            if map.insert(VarName::new(k)?, VarName::new(v)?).is_some() {
                return Err(Error::BadRenaming(format!("`{}` mapped twice", k)));
            }
        }
        Renaming::new(map)
    }

    pub fn identity() -> Self {
        Renaming::default()
    }

    pub fn apply(&self, x: &VarName) -> VarName {
        self.map.get(x).cloned().unwrap_or_else(|| x.clone())
    }

    pub fn domain(&self) -> impl Iterator<Item = &VarName> {
        self.map.keys()
    }

    pub fn image(&self) -> BTreeSet<VarName> {
        self.map.values().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &VarName)> {
        self.map.iter()
    }

    pub fn insert(&mut self, from: VarName, to: VarName) {
        self.map.insert(from, to);
    }

    /// Restriction to `vars`; the result maps only members of `vars`.
    pub fn restrict(&self, vars: &BTreeSet<VarName>) -> Renaming {
        Renaming {
            map: self
                .map
                .iter()
                .filter(|(k, _)| vars.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Image of a set of variables.
    pub fn apply_set<'a>(&self, vars: impl IntoIterator<Item = &'a VarName>) -> BTreeSet<VarName> {
        vars.into_iter().map(|v| self.apply(v)).collect()
    }

    /// True when the map is injective on `vars`, counting identity entries.
    pub fn is_injective_on(&self, vars: &BTreeSet<VarName>) -> bool {
        self.apply_set(vars).len() == vars.len()
    }

    /// Simultaneous substitution on every variable occurrence.
    pub fn apply_expr(&self, e: &FlifExpr) -> FlifExpr {
        e.map_vars(&|v| self.apply(v))
    }
}

impl core::fmt::Debug for Renaming {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}↦{}", k, v)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_flif;
    use alloc::string::ToString;

    #[test]
    fn rejects_non_injective() {
        assert!(Renaming::from_pairs([("x", "z"), ("y", "z")]).is_err());
    }

    #[test]
    fn applies_simultaneously() {
        let r = Renaming::from_pairs([("x", "y"), ("y", "x")]).unwrap();
        let e = parse_flif("R(x;y) ; (x:=y)").unwrap();
        assert_eq!(r.apply_expr(&e).to_string(), "R(y;x) ; (y:=x)");
    }

    #[test]
    fn injectivity_counts_fixed_points() {
        let r = Renaming::from_pairs([("x", "y")]).unwrap();
        let both: BTreeSet<_> = ["x", "y"].iter().map(|s| VarName::new(s).unwrap()).collect();
        assert!(!r.is_injective_on(&both));
    }
}
