//! Schemas with limited access patterns, instances, constants and valuations.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

macro_rules! identifier_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            /// Validates `s` against `[A-Za-z_][A-Za-z0-9_]*`.
            pub fn new(s: &str) -> Result<Self> {
                if is_identifier(s) {
                    Ok(Self(s.to_owned()))
                } else {
                    Err(Error::InvalidIdentifier(s.to_owned()))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl core::str::FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                Self::new(s)
            }
        }
    };
}

identifier_newtype!(
    /// A variable name.
    VarName
);
identifier_newtype!(
    /// A relation name.
    RelName
);

/// An atomic data element. Equality is exact text equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constant(String);

impl Constant {
    /// Filler for output-only variables when evaluating from input variables.
    pub const PADDING: &'static str = "⊥";
    /// Value assigned by the negation gadget of the FO-to-FLIF translation.
    pub const NEGATION_FILLER: &'static str = "⊥c";

    pub fn new(s: impl Into<String>) -> Self {
        Constant(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn padding() -> Self {
        Constant::new(Self::PADDING)
    }

    pub fn negation_filler() -> Self {
        Constant::new(Self::NEGATION_FILLER)
    }

    /// Reserved constants may not occur in user data.
    pub fn is_reserved(&self) -> bool {
        self.0 == Self::PADDING || self.0 == Self::NEGATION_FILLER
    }
}

impl From<&str> for Constant {
    fn from(s: &str) -> Self {
        Constant(s.to_owned())
    }
}

impl From<String> for Constant {
    fn from(s: String) -> Self {
        Constant(s)
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub type Tuple = Vec<Constant>;

/// Arity and input arity of a relation name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub arity: usize,
    pub input_arity: usize,
}

impl Signature {
    pub fn output_arity(&self) -> usize {
        self.arity - self.input_arity
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schema {
    entries: BTreeMap<RelName, Signature>,
}

impl Schema {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, rel: RelName, arity: usize, input_arity: usize) -> Result<()> {
        if input_arity > arity {
            return Err(Error::BadSignature {
                rel,
                arity,
                input_arity,
            });
        }
        self.entries.insert(rel, Signature { arity, input_arity });
        Ok(())
    }

    pub fn with(mut self, rel: &str, arity: usize, input_arity: usize) -> Result<Self> {
        self.declare(RelName::new(rel)?, arity, input_arity)?;
        Ok(self)
    }

    pub fn signature(&self, rel: &RelName) -> Result<Signature> {
        self.entries
            .get(rel)
            .copied()
            .ok_or_else(|| Error::UnknownRelation(rel.clone()))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&RelName, &Signature)> {
        self.entries.iter()
    }

    /// Checks that an atom `R(x̄;ȳ)` has `|x̄| = iar(R)` and `|ȳ| = oar(R)`.
    pub fn check_atom(&self, rel: &RelName, inputs: usize, outputs: usize) -> Result<()> {
        let sig = self.signature(rel)?;
        if inputs != sig.input_arity {
            return Err(Error::ArityMismatch {
                rel: rel.clone(),
                expected: sig.input_arity,
                found: inputs,
            });
        }
        if outputs != sig.output_arity() {
            return Err(Error::ArityMismatch {
                rel: rel.clone(),
                expected: sig.output_arity(),
                found: outputs,
            });
        }
        Ok(())
    }
}

/// A finite instance of a schema.
///
/// Relations are kept as ordered tuple sets, so the tuples extending a given
/// input prefix form a contiguous range; `access` is a range scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    schema: Schema,
    relations: BTreeMap<RelName, BTreeSet<Tuple>>,
}

impl Instance {
    pub fn new(schema: Schema) -> Self {
        let relations = schema
            .relations()
            .map(|(r, _)| (r.clone(), BTreeSet::new()))
            .collect();
        Instance { schema, relations }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Adds a tuple; duplicates are absorbed.
    pub fn insert(&mut self, rel: &RelName, tuple: Tuple) -> Result<()> {
        let sig = self.schema.signature(rel)?;
        if tuple.len() != sig.arity {
            return Err(Error::ArityMismatch {
                rel: rel.clone(),
                expected: sig.arity,
                found: tuple.len(),
            });
        }
        self.relations.entry(rel.clone()).or_default().insert(tuple);
        Ok(())
    }

    pub fn with_tuples(mut self, rel: &str, tuples: &[&[&str]]) -> Result<Self> {
        let rel = RelName::new(rel)?;
        for t in tuples {
            self.insert(&rel, t.iter().map(|c| Constant::from(*c)).collect())?;
        }
        Ok(self)
    }

    pub fn tuples(&self, rel: &RelName) -> Result<&BTreeSet<Tuple>> {
        self.schema.signature(rel)?;
        Ok(&self.relations[rel])
    }

    /// The limited-access retrieval: given values for the input positions of
    /// `rel`, returns the output parts of all matching tuples.
    pub fn access(&self, rel: &RelName, input: &[Constant]) -> Result<BTreeSet<Tuple>> {
        let sig = self.schema.signature(rel)?;
        if input.len() != sig.input_arity {
            return Err(Error::ArityMismatch {
                rel: rel.clone(),
                expected: sig.input_arity,
                found: input.len(),
            });
        }
        let tuples = &self.relations[rel];
        let start: Tuple = input.to_vec();
        Ok(tuples
            .range(start..)
            .take_while(|t| t.starts_with(input))
            .map(|t| t[input.len()..].to_vec())
            .collect())
    }

    /// The set of constants occurring in some tuple.
    pub fn adom(&self) -> BTreeSet<Constant> {
        self.relations
            .values()
            .flat_map(|ts| ts.iter().flat_map(|t| t.iter().cloned()))
            .collect()
    }
}

/// A total map from a finite set of variables to constants.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation {
    bindings: BTreeMap<VarName, Constant>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, V, C>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (V, C)>,
        V: AsRef<str>,
        C: Into<Constant>,
    {
        let mut bindings = BTreeMap::new();
        for (v, c) in pairs {
            bindings.insert(VarName::new(v.as_ref())?, c.into());
        }
        Ok(Valuation { bindings })
    }

    pub fn get(&self, x: &VarName) -> Result<&Constant> {
        self.bindings
            .get(x)
            .ok_or_else(|| Error::UnboundVariable(x.clone()))
    }

    pub fn lookup(&self, x: &VarName) -> Option<&Constant> {
        self.bindings.get(x)
    }

    pub fn contains(&self, x: &VarName) -> bool {
        self.bindings.contains_key(x)
    }

    pub fn set(&mut self, x: VarName, c: Constant) {
        self.bindings.insert(x, c);
    }

    pub fn remove(&mut self, x: &VarName) -> Option<Constant> {
        self.bindings.remove(x)
    }

    /// `ν[x := c]`.
    pub fn extend(&self, x: &VarName, c: Constant) -> Valuation {
        let mut out = self.clone();
        out.bindings.insert(x.clone(), c);
        out
    }

    /// `ν|_Y`; every variable of `Y` must be bound.
    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a VarName>) -> Result<Valuation> {
        let mut bindings = BTreeMap::new();
        for x in vars {
            bindings.insert(x.clone(), self.get(x)?.clone());
        }
        Ok(Valuation { bindings })
    }

    pub fn domain(&self) -> BTreeSet<VarName> {
        self.bindings.keys().cloned().collect()
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarName> {
        self.bindings.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &Constant)> {
        self.bindings.iter()
    }

    pub fn values(&self) -> impl Iterator<Item = &Constant> {
        self.bindings.values()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn defined_on<'a>(&self, vars: impl IntoIterator<Item = &'a VarName>) -> bool {
        vars.into_iter().all(|x| self.contains(x))
    }

    /// Do the valuations agree on every variable of `vars`?
    pub fn agree_on<'a>(
        &self,
        other: &Valuation,
        vars: impl IntoIterator<Item = &'a VarName>,
    ) -> Result<bool> {
        for x in vars {
            if self.get(x)? != other.get(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Do the valuations agree on their common domain minus `vars`?
    /// Both must be defined on the same variables.
    pub fn agree_outside(&self, other: &Valuation, vars: &BTreeSet<VarName>) -> Result<bool> {
        if !self.bindings.keys().eq(other.bindings.keys()) {
            return Err(Error::DomainMismatch);
        }
        Ok(self
            .bindings
            .iter()
            .zip(other.bindings.values())
            .all(|((x, a), b)| vars.contains(x) || a == b))
    }

    /// Union of two valuations that agree on their shared variables.
    pub fn merge(&self, other: &Valuation) -> Option<Valuation> {
        let mut out = self.clone();
        for (x, c) in &other.bindings {
            match out.bindings.get(x) {
                Some(d) if d != c => return None,
                Some(_) => {}
                None => {
                    out.bindings.insert(x.clone(), c.clone());
                }
            }
        }
        Some(out)
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.bindings.iter()).finish()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, c)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {:?}", x, c.as_str())?;
        }
        f.write_str("}")
    }
}

impl FromIterator<(VarName, Constant)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (VarName, Constant)>>(iter: T) -> Self {
        Valuation {
            bindings: iter.into_iter().collect(),
        }
    }
}

/// Renders a variable set as `{x,y}`.
pub fn fmt_vars<'a>(vars: impl IntoIterator<Item = &'a VarName>) -> String {
    let mut s = String::from("{");
    for (i, v) in vars.into_iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(v.as_str());
    }
    s.push('}');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bus() -> Instance {
        let schema = Schema::new().with("B", 2, 1).unwrap().with("T", 2, 1).unwrap();
        Instance::new(schema)
            .with_tuples("B", &[&["1", "2"], &["1", "3"], &["2", "3"], &["3", "5"]])
            .unwrap()
            .with_tuples("T", &[&["1", "4"], &["3", "5"]])
            .unwrap()
    }

    fn r(s: &str) -> RelName {
        RelName::new(s).unwrap()
    }

    fn tuples(ts: &[&[&str]]) -> BTreeSet<Tuple> {
        ts.iter()
            .map(|t| t.iter().map(|c| Constant::from(*c)).collect())
            .collect()
    }

    #[test]
    fn access_follows_input_prefix() {
        let d = bus();
        assert_eq!(
            d.access(&r("B"), &["1".into()]).unwrap(),
            tuples(&[&["2"], &["3"]])
        );
        assert!(d.access(&r("T"), &["2".into()]).unwrap().is_empty());
    }

    #[test]
    fn access_with_nullary_input_returns_everything() {
        let schema = Schema::new().with("S", 2, 0).unwrap();
        let d = Instance::new(schema)
            .with_tuples("S", &[&["a", "b"], &["c", "d"]])
            .unwrap();
        assert_eq!(
            d.access(&r("S"), &[]).unwrap(),
            tuples(&[&["a", "b"], &["c", "d"]])
        );
    }

    #[test]
    fn access_errors() {
        let d = bus();
        assert_eq!(
            d.access(&r("Q"), &[]),
            Err(Error::UnknownRelation(r("Q")))
        );
        assert!(matches!(
            d.access(&r("B"), &[]),
            Err(Error::ArityMismatch { expected: 1, found: 0, .. })
        ));
    }

    #[test]
    fn prefix_scan_does_not_confuse_longer_constants() {
        let schema = Schema::new().with("R", 2, 1).unwrap();
        let d = Instance::new(schema)
            .with_tuples("R", &[&["1", "a"], &["10", "b"], &["01", "c"]])
            .unwrap();
        assert_eq!(d.access(&r("R"), &["1".into()]).unwrap(), tuples(&[&["a"]]));
    }

    #[test]
    fn adom_examples() {
        let d = bus();
        let expect: BTreeSet<Constant> = ["1", "2", "3", "4", "5"].iter().map(|c| (*c).into()).collect();
        assert_eq!(d.adom(), expect);
        assert!(Instance::new(Schema::new()).adom().is_empty());
        let single = Instance::new(Schema::new().with("P", 2, 0).unwrap())
            .with_tuples("P", &[&["7", "7"]])
            .unwrap();
        assert_eq!(single.adom(), [Constant::from("7")].into_iter().collect());
    }

    #[test]
    fn duplicates_collapse_and_arity_is_checked() {
        let mut d = bus();
        d.insert(&r("B"), vec!["1".into(), "2".into()]).unwrap();
        assert_eq!(d.tuples(&r("B")).unwrap().len(), 4);
        assert!(d.insert(&r("B"), vec!["1".into()]).is_err());
    }

    #[test]
    fn signature_rejects_input_arity_above_arity() {
        assert!(Schema::new().with("R", 1, 2).is_err());
    }

    #[test]
    fn identifiers() {
        assert!(VarName::new("x_1").is_ok());
        assert!(VarName::new("_").is_ok());
        assert!(VarName::new("1x").is_err());
        assert!(VarName::new("").is_err());
        assert!(VarName::new("x-y").is_err());
    }

    #[test]
    fn valuation_operations() {
        let x = VarName::new("x").unwrap();
        let y = VarName::new("y").unwrap();
        let nu = Valuation::from_pairs([("x", "1")]).unwrap();
        let ext = nu.extend(&y, "2".into());
        assert_eq!(ext, Valuation::from_pairs([("x", "1"), ("y", "2")]).unwrap());

        let a = Valuation::from_pairs([("x", "1"), ("y", "2")]).unwrap();
        let b = Valuation::from_pairs([("x", "1"), ("y", "9")]).unwrap();
        assert!(a.agree_on(&b, [&x]).unwrap());
        assert!(!a.agree_on(&b, [&y]).unwrap());
        assert!(a.agree_outside(&b, &[y.clone()].into_iter().collect()).unwrap());
        assert_eq!(
            a.agree_outside(&nu, &BTreeSet::new()),
            Err(Error::DomainMismatch)
        );
        assert_eq!(nu.get(&y), Err(Error::UnboundVariable(y.clone())));
        assert!(nu.restrict([&y]).is_err());
    }

    #[test]
    fn constants_compare_textually() {
        assert_ne!(Constant::from("1"), Constant::from("01"));
    }
}
