use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::fresh::FreshVarSource;
use crate::analysis::{io_profile, is_io_disjoint, IoProfile};
use crate::error::{Error, Result};
use crate::model::{fmt_vars, VarName};
use crate::syntax::{FlifExpr, Renaming};

/// Rewrites `α` into an io-disjoint expression `β` simulating it, with the
/// outputs of `α` found in the slots `ρ(O(α))` of `β`.
///
/// `ρ` must be defined on exactly `O(α)` and map into variables outside
/// `vars(α)`. The result satisfies `I(β) = I(α)`, `O(β) ⊇ ρ(O(α))`, and its
/// auxiliary outputs avoid `W`; for every `ν₁` the restrictions to `O(α)` of
/// the `α`-successors coincide with `ν₂ ∘ ρ` over the `β`-successors.
///
/// Auxiliary variables are named `y_k` after the variable they replace; when
/// a choice between candidate variables is free, the smallest name wins.
pub fn rewrite_io_disjoint(
    expr: &FlifExpr,
    rho: &Renaming,
    forbidden: &BTreeSet<VarName>,
) -> Result<FlifExpr> {
    let io = io_profile(expr);
    let domain: BTreeSet<VarName> = rho.domain().cloned().collect();
    if domain != io.outputs {
        return Err(Error::BadRenaming(format!(
            "renaming must be defined on exactly the outputs {}, got {}",
            fmt_vars(&io.outputs),
            fmt_vars(&domain)
        )));
    }
    let image = rho.image();
    if let Some(clash) = image.intersection(&io.vars).next() {
        return Err(Error::BadRenaming(format!(
            "`{}` is used by the expression and cannot be a renaming target",
            clash
        )));
    }
    let mut fresh = FreshVarSource::new(
        forbidden
            .iter()
            .chain(&io.vars)
            .chain(&image)
            .cloned(),
    );
    Ok(Rewriter { fresh: &mut fresh }.rewrite(expr, rho, forbidden))
}

/// The renaming `y ↦ y_k` of `O(α)` with the smallest suffixes avoiding
/// `vars(α)` and `avoid`.
pub fn fresh_output_renaming(expr: &FlifExpr, avoid: &BTreeSet<VarName>) -> Renaming {
    let io = io_profile(expr);
    let mut fresh = FreshVarSource::new(io.vars.iter().chain(avoid).cloned());
    let map: BTreeMap<_, _> = io
        .outputs
        .iter()
        .map(|y| (y.clone(), fresh.fresh(y)))
        .collect();
    Renaming::new(map).expect("fresh names are distinct")
}

struct Rewriter<'a> {
    fresh: &'a mut FreshVarSource,
}

fn union_of(sets: &[&BTreeSet<VarName>]) -> BTreeSet<VarName> {
    sets.iter().flat_map(|s| s.iter().cloned()).collect()
}

fn outputs(e: &FlifExpr) -> BTreeSet<VarName> {
    io_profile(e).outputs
}

/// `(ρ(y) := y)` for every `y` in `ys`.
fn copy_back(rho: &Renaming, ys: impl IntoIterator<Item = VarName>) -> Vec<FlifExpr> {
    ys.into_iter()
        .map(|y| FlifExpr::AssignVar(rho.apply(&y), y))
        .collect()
}

/// `(y := z)` for every `y` in `ys`.
fn reset(ys: &BTreeSet<VarName>, z: Option<&VarName>) -> Vec<FlifExpr> {
    match z {
        Some(z) => ys
            .iter()
            .map(|y| FlifExpr::AssignVar(y.clone(), z.clone()))
            .collect(),
        None => {
            assert!(ys.is_empty(), "no variable available to reset {}", fmt_vars(ys));
            Vec::new()
        }
    }
}

impl Rewriter<'_> {
    fn rewrite(&mut self, e: &FlifExpr, rho: &Renaming, w: &BTreeSet<VarName>) -> FlifExpr {
        let io = io_profile(e);
        let beta = if e.is_nullary() {
            e.clone()
        } else {
            self.case(e, &io, rho, w)
        };
        check_contract(e, &io, &beta, rho, w);
        beta
    }

    fn case(&mut self, e: &FlifExpr, io: &IoProfile, rho: &Renaming, w: &BTreeSet<VarName>) -> FlifExpr {
        match e {
            FlifExpr::Rel {
                rel,
                inputs,
                outputs,
            } => FlifExpr::rel(
                rel.clone(),
                inputs.clone(),
                outputs.iter().map(|y| rho.apply(y)).collect(),
            ),
            FlifExpr::AssignVar(x, t) => FlifExpr::AssignVar(rho.apply(x), t.clone()),
            FlifExpr::AssignConst(x, c) => FlifExpr::AssignConst(rho.apply(x), c.clone()),
            FlifExpr::EqVar(..) | FlifExpr::EqConst(..) => e.clone(),
            FlifExpr::Comp(a1, a2) => self.comp(a1, a2, io, rho, w),
            FlifExpr::Union(a1, a2) => self.union(a1, a2, io, rho, w),
            FlifExpr::Diff(a1, a2) => self.diff(a1, a2, io, rho, w),
        }
    }

    fn comp(
        &mut self,
        a1: &FlifExpr,
        a2: &FlifExpr,
        io: &IoProfile,
        rho: &Renaming,
        w: &BTreeSet<VarName>,
    ) -> FlifExpr {
        let (io1, io2) = (io_profile(a1), io_profile(a2));
        let w2 = union_of(&[w, &io.vars, &rho.apply_set(&io1.outputs)]);
        let b2 = self.rewrite(a2, &rho.restrict(&io2.outputs), &w2);

        let w1 = union_of(&[w, &io.vars]);
        let avoid = union_of(&[&io.vars, &outputs(&b2), &rho.image(), &w1]);
        let mut rho1 = rho.restrict(&io1.outputs);
        for y in io1.outputs.iter().filter(|y| io2.outputs.contains(*y) && io2.inputs.contains(*y)) {
            let target = self.fresh.fresh_avoiding(y, &avoid);
            rho1.insert(y.clone(), target);
        }
        let b1 = self.rewrite(a1, &rho1, &w1);

        let mut swap = BTreeMap::new();
        for y in io2.inputs.intersection(&io1.outputs) {
            let target = rho1.apply(y);
            swap.insert(y.clone(), target.clone());
            swap.insert(target, y.clone());
        }
        let theta = Renaming::new(swap).expect("θ is an involution");
        FlifExpr::comp(b1, theta.apply_expr(&b2))
    }

    fn union(
        &mut self,
        a1: &FlifExpr,
        a2: &FlifExpr,
        io: &IoProfile,
        rho: &Renaming,
        w: &BTreeSet<VarName>,
    ) -> FlifExpr {
        let (io1, io2) = (io_profile(a1), io_profile(a2));
        let w1 = union_of(&[w, &io.vars, &rho.apply_set(&io2.outputs)]);
        let b1 = self.rewrite(a1, &rho.restrict(&io1.outputs), &w1);
        let ob1 = outputs(&b1);
        let w2 = union_of(&[w, &io.vars, &ob1]);
        let b2 = self.rewrite(a2, &rho.restrict(&io2.outputs), &w2);
        let ob2 = outputs(&b2);

        let gamma1 = copy_back(rho, io2.outputs.difference(&io1.outputs).cloned());
        let gamma2 = copy_back(rho, io1.outputs.difference(&io2.outputs).cloned());

        let extra2: BTreeSet<_> = ob2.difference(&rho.apply_set(&io2.outputs)).cloned().collect();
        let z1 = ob1.iter().next().or_else(|| io2.vars.iter().next());
        let eta1 = reset(&extra2, z1);
        let extra1: BTreeSet<_> = ob1.difference(&rho.apply_set(&io1.outputs)).cloned().collect();
        let z2 = ob2.iter().next().or_else(|| io1.vars.iter().next());
        let eta2 = reset(&extra1, z2);

        FlifExpr::union(
            b1.then_all(gamma1).then_all(eta1),
            b2.then_all(gamma2).then_all(eta2),
        )
    }

    fn diff(
        &mut self,
        a1: &FlifExpr,
        a2: &FlifExpr,
        io: &IoProfile,
        rho: &Renaming,
        w: &BTreeSet<VarName>,
    ) -> FlifExpr {
        let (io1, io2) = (io_profile(a1), io_profile(a2));
        let w1 = union_of(&[w, &io.vars]);
        let rho1 = rho.clone();
        let b1 = self.rewrite(a1, &rho1, &w1);
        let ob1 = outputs(&b1);
        let w2 = union_of(&[&w1, &ob1]);

        let shared: BTreeSet<_> = io1.outputs.intersection(&io2.outputs).cloned().collect();
        let mut rho2 = rho.restrict(&shared);
        for y in io2.outputs.difference(&io1.outputs) {
            let target = self.fresh.fresh_avoiding(y, &w2);
            rho2.insert(y.clone(), target);
        }
        let b2 = self.rewrite(a2, &rho2, &w2);
        let ob2 = outputs(&b2);

        let gamma1 = copy_back(&rho2, io2.outputs.difference(&io1.outputs).cloned());
        let gamma2 = copy_back(&rho1, io1.outputs.difference(&io2.outputs).cloned());

        let shared_image = rho.apply_set(&shared);
        let z_shared = shared_image.iter().next();
        let extra2: BTreeSet<_> = ob2.difference(&rho2.apply_set(&io2.outputs)).cloned().collect();
        let eta1 = reset(&extra2, z_shared.or_else(|| io2.vars.iter().next()));
        let extra1: BTreeSet<_> = ob1.difference(&rho1.apply_set(&io1.outputs)).cloned().collect();
        let eta2 = reset(&extra1, z_shared.or_else(|| io1.vars.iter().next()));

        let etas: Vec<FlifExpr> = eta1.into_iter().chain(eta2).collect();
        FlifExpr::diff(
            b1.then_all(gamma1).then_all(etas.clone()),
            b2.then_all(gamma2).then_all(etas),
        )
    }
}

/// The structural half of the rewriting contract, checked on every step.
fn check_contract(alpha: &FlifExpr, io: &IoProfile, beta: &FlifExpr, rho: &Renaming, w: &BTreeSet<VarName>) {
    let out = io_profile(beta);
    let renamed = rho.apply_set(&io.outputs);
    assert!(is_io_disjoint(beta), "rewrite of `{}` is not io-disjoint: `{}`", alpha, beta);
    assert_eq!(out.inputs, io.inputs, "rewrite of `{}` changed inputs: `{}`", alpha, beta);
    assert!(
        renamed.is_subset(&out.outputs),
        "rewrite of `{}` lost renamed outputs: `{}`",
        alpha,
        beta
    );
    assert!(
        out.outputs.difference(&renamed).all(|v| !w.contains(v)),
        "auxiliary outputs of `{}` hit forbidden variables",
        beta
    );
}
