use alloc::vec::Vec;
use core::fmt;

use super::BrutePairs;
use crate::analysis::{io_profile, is_io_disjoint};
use crate::model::{Valuation, VarName};
use crate::syntax::FlifExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpineProperty {
    Inertia,
    FreeVariable,
    Determinacy,
    DeterminacyAlt,
    Identity,
}

impl SpineProperty {
    pub const ALL: [SpineProperty; 5] = [
        SpineProperty::Inertia,
        SpineProperty::FreeVariable,
        SpineProperty::Determinacy,
        SpineProperty::DeterminacyAlt,
        SpineProperty::Identity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpineProperty::Inertia => "inertia",
            SpineProperty::FreeVariable => "free-variable",
            SpineProperty::Determinacy => "input-output determinacy",
            SpineProperty::DeterminacyAlt => "input-output determinacy (alternative form)",
            SpineProperty::Identity => "identity",
        }
    }
}

/// A pair of the relation that breaks a property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineViolation {
    pub property: SpineProperty,
    pub nu1: Valuation,
    pub nu2: Valuation,
}

impl fmt::Display for SpineViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at ({}, {})", self.property.name(), self.nu1, self.nu2)
    }
}

/// Checks every property that applies to `expr`; identity only for
/// io-disjoint expressions.
pub fn check_spine(expr: &FlifExpr, rel: &BrutePairs) -> Result<(), SpineViolation> {
    for p in SpineProperty::ALL {
        if p == SpineProperty::Identity && !is_io_disjoint(expr) {
            continue;
        }
        check_property(p, expr, rel)?;
    }
    Ok(())
}

pub fn check_property(p: SpineProperty, expr: &FlifExpr, rel: &BrutePairs) -> Result<(), SpineViolation> {
    let io = io_profile(expr);
    let mark = |set: &alloc::collections::BTreeSet<VarName>| -> Vec<bool> {
        rel.vars().iter().map(|v| set.contains(v)).collect()
    };
    let in_i = mark(&io.inputs);
    let in_o = mark(&io.outputs);
    let in_vars = mark(&io.vars);
    let base = rel.domain().len();
    let fail = |a: usize, b: usize| SpineViolation {
        property: p,
        nu1: rel.decode(a),
        nu2: rel.decode(b),
    };
    for a in 0..rel.space_size() {
        let da = rel.digits(a);
        for &b in rel.succ_idx(a) {
            let b = b as usize;
            let db = rel.digits(b);
            let ok = match p {
                SpineProperty::Inertia => (0..da.len()).all(|i| in_o[i] || da[i] == db[i]),
                SpineProperty::FreeVariable => {
                    // ν₁[ν], ν₂[ν] for every ν outside vars(α)
                    let free: Vec<usize> = (0..da.len()).filter(|&i| !in_vars[i]).collect();
                    variants(&free, base).all(|w| {
                        let (mut a2, mut b2) = (da.clone(), db.clone());
                        for (k, &i) in free.iter().enumerate() {
                            a2[i] = w[k];
                            b2[i] = w[k];
                        }
                        rel.contains_idx(rel.encode_digits(&a2), rel.encode_digits(&b2))
                    })
                }
                SpineProperty::Determinacy => {
                    let open: Vec<usize> = (0..da.len()).filter(|&i| !in_i[i]).collect();
                    variants(&open, base).all(|w| {
                        let mut a2 = da.clone();
                        for (k, &i) in open.iter().enumerate() {
                            a2[i] = w[k];
                        }
                        let a2 = rel.encode_digits(&a2);
                        rel.succ_idx(a2).iter().any(|&b2| {
                            let d2 = rel.digits(b2 as usize);
                            (0..d2.len()).all(|i| !in_o[i] || d2[i] == db[i])
                        })
                    })
                }
                SpineProperty::DeterminacyAlt => {
                    let open: Vec<usize> = (0..da.len()).filter(|&i| in_o[i] && !in_i[i]).collect();
                    variants(&open, base).all(|w| {
                        let mut a2 = da.clone();
                        for (k, &i) in open.iter().enumerate() {
                            a2[i] = w[k];
                        }
                        rel.contains_idx(rel.encode_digits(&a2), b)
                    })
                }
                SpineProperty::Identity => rel.contains_idx(b, b),
            };
            if !ok {
                return Err(fail(a, b));
            }
        }
    }
    Ok(())
}

/// All assignments of `0..base` to the given positions.
fn variants(positions: &[usize], base: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = base.pow(positions.len() as u32);
    let len = positions.len();
    (0..total).map(move |mut i| {
        let mut w = Vec::with_capacity(len);
        for _ in 0..len {
            w.push(i % base);
            i /= base;
        }
        w
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Constant, Instance, Schema};
    use crate::oracle::{brute_pairs, DEFAULT_BUDGET};
    use crate::syntax::parse_flif;
    use alloc::collections::BTreeSet;

    fn friends() -> Instance {
        let schema = Schema::new().with("F", 2, 1).unwrap();
        Instance::new(schema)
            .with_tuples("F", &[&["a", "b"], &["b", "a"]])
            .unwrap()
    }

    fn rel(src: &str, vars: &[&str]) -> (FlifExpr, BrutePairs) {
        let e = parse_flif(src).unwrap();
        let v: BTreeSet<VarName> = vars.iter().map(|s| VarName::new(s).unwrap()).collect();
        let dom: BTreeSet<Constant> = ["a", "b", "c"].iter().map(|s| Constant::new(*s)).collect();
        let p = brute_pairs(&e, &v, &friends(), &dom, DEFAULT_BUDGET).unwrap();
        (e, p)
    }

    #[test]
    fn properties_hold() {
        for src in ["F(x;x)", "F(x;y) ; F(y;z)", "F(x;y) | (y:=x)", "F(x;y) - F(z;y)"] {
            let (e, p) = rel(src, &["x", "y", "z"]);
            assert_eq!(check_spine(&e, &p), Ok(()), "{}", src);
        }
    }

    #[test]
    fn identity_fails_without_io_disjointness() {
        let (e, p) = rel("F(x;x)", &["x"]);
        let v = check_property(SpineProperty::Identity, &e, &p).unwrap_err();
        assert_eq!(v.property, SpineProperty::Identity);
    }
}
