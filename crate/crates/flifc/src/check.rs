//! Differential checking of one expression: every applicable engine is
//! compared against `eval_flif_v` on a set of input valuations.

use std::collections::BTreeSet;

use flif_core::oracle::{brute_pairs, candidate_domain, fresh_constants, GenConfig, Generator, DEFAULT_BUDGET};
use flif_core::translate::{flif_to_fo3n, flifio_to_exfo, fresh_output_renaming, rewrite_io_disjoint};
use flif_core::{
    compile_plan, eval_exfo, eval_flif, eval_flif_v, eval_plan, in_sem, io_profile, is_io_disjoint, Constant,
    Error, FlifExpr, Instance, Valuation, ValuationSet, VarName,
};

use crate::CliError;

const SAMPLES: usize = 16;

pub struct Report {
    pub lines: Vec<String>,
    pub passed: usize,
    pub skipped: usize,
}

impl Report {
    pub fn summary(&self) -> String {
        if self.skipped == 0 {
            format!("all {} cross-checks passed", self.passed)
        } else {
            format!(
                "{} cross-checks passed, {} skipped",
                self.passed, self.skipped
            )
        }
    }
}

enum Outcome {
    Passed,
    Skipped(String),
}

struct Mismatch {
    engine: &'static str,
    input: Valuation,
    detail: String,
}

struct Case<'a> {
    expr: &'a FlifExpr,
    db: &'a Instance,
    vars: BTreeSet<VarName>,
    inputs: BTreeSet<VarName>,
    starts: Vec<Valuation>,
}

/// Runs all cross-checks; the first disagreement becomes an error naming
/// both engines and the input valuation restricted to `I(α)`.
pub fn run(expr: &FlifExpr, db: &Instance, given: &[Valuation], seed: u64) -> Result<Report, CliError> {
    expr.validate(db.schema())?;
    let io = io_profile(expr);
    let mut dom = candidate_domain(expr, db);
    for nu in given {
        dom.extend(nu.values().cloned());
    }
    let pool: Vec<Constant> = dom.iter().cloned().collect();
    let pad = pool[0].clone();
    let starts: Vec<Valuation> = if given.is_empty() {
        let mut g = Generator::new(GenConfig::default().with_seed(seed));
        (0..SAMPLES).map(|_| g.valuation(&io.vars, &pool)).collect()
    } else {
        given
            .iter()
            .map(|nu| {
                if let Some(x) = io.inputs.iter().find(|x| !nu.contains(x)) {
                    return Err(CliError::Semantic(format!("input valuation {} does not bind `{}`", nu, x)));
                }
                Ok(io
                    .vars
                    .iter()
                    .map(|x| (x.clone(), nu.lookup(x).cloned().unwrap_or_else(|| pad.clone())))
                    .collect())
            })
            .collect::<Result<_, _>>()?
    };
    let case = Case {
        expr,
        db,
        vars: io.vars.clone(),
        inputs: io.inputs.clone(),
        starts,
    };

    type Check = fn(&Case, &BTreeSet<Constant>) -> Result<Outcome, Mismatch>;
    let mut checks: Vec<(&str, Check)> = vec![
        ("brute-force oracle", oracle),
        ("pair membership", membership),
        ("bounded-variable FO", bounded_fo),
        ("io-disjoint rewriting", rewriting),
    ];
    if is_io_disjoint(expr) {
        checks.push(("executable FO", executable_fo));
        checks.push(("compiled plan", plan));
    }
    let mut report = Report {
        lines: Vec::new(),
        passed: 0,
        skipped: 0,
    };
    for (name, check) in checks {
        match check(&case, &dom) {
            Ok(Outcome::Passed) => {
                report.passed += 1;
                report.lines.push(format!("ok      eval_flif vs {}", name));
            }
            Ok(Outcome::Skipped(why)) => {
                report.skipped += 1;
                report.lines.push(format!("skipped eval_flif vs {}: {}", name, why));
            }
            Err(m) => {
                let input = m.input.restrict(&case.inputs).unwrap_or(m.input);
                return Err(CliError::CheckFailed(format!(
                    "cross-check failed: eval_flif disagrees with {} on input {}\n{}",
                    m.engine, input, m.detail
                )));
            }
        }
    }
    Ok(report)
}

fn reference(case: &Case, nu: &Valuation, engine: &'static str) -> Result<ValuationSet, Mismatch> {
    eval_flif_v(case.expr, &case.vars, case.db, nu).map_err(|e| internal(engine, nu, e))
}

fn internal(engine: &'static str, nu: &Valuation, e: Error) -> Mismatch {
    Mismatch {
        engine,
        input: nu.clone(),
        detail: format!("error: {}", e),
    }
}

fn differ(engine: &'static str, nu: &Valuation, want: &ValuationSet, got: &ValuationSet) -> Mismatch {
    Mismatch {
        engine,
        input: nu.clone(),
        detail: format!("eval_flif: {:?}\n{}: {:?}", want, engine, got),
    }
}

fn oracle(case: &Case, dom: &BTreeSet<Constant>) -> Result<Outcome, Mismatch> {
    const E: &str = "brute-force oracle";
    let rel = match brute_pairs(case.expr, &case.vars, case.db, dom, DEFAULT_BUDGET) {
        Ok(rel) => rel,
        Err(Error::BudgetExceeded { needed, budget }) => {
            return Ok(Outcome::Skipped(format!("{} candidate pairs exceed the budget of {}", needed, budget)))
        }
        Err(e) => return Err(internal(E, &case.starts[0], e)),
    };
    for nu in &case.starts {
        let want = reference(case, nu, E)?;
        let got = rel.successors(nu).expect("start values lie in the domain");
        if got != want {
            return Err(differ(E, nu, &want, &got));
        }
    }
    Ok(Outcome::Passed)
}

fn membership(case: &Case, _: &BTreeSet<Constant>) -> Result<Outcome, Mismatch> {
    const E: &str = "pair membership";
    for nu in &case.starts {
        let want = reference(case, nu, E)?;
        let probes = want.iter().cloned().chain(case.starts.iter().cloned());
        for nu2 in probes {
            let member = in_sem(case.expr, &case.vars, case.db, nu, &nu2).map_err(|e| internal(E, nu, e))?;
            if member != want.contains(&nu2) {
                return Err(Mismatch {
                    engine: E,
                    input: nu.clone(),
                    detail: format!("pair ({}, {}): eval_flif says {}, in_sem says {}", nu, nu2, !member, member),
                });
            }
        }
    }
    Ok(Outcome::Passed)
}

fn bounded_fo(case: &Case, _: &BTreeSet<Constant>) -> Result<Outcome, Mismatch> {
    const E: &str = "bounded-variable FO";
    let xs: Vec<VarName> = case.vars.iter().cloned().collect();
    let t = flif_to_fo3n(case.expr, &xs).map_err(|e| internal(E, &case.starts[0], e))?;
    for nu in &case.starts {
        let want = reference(case, nu, E)?;
        let rows = eval_exfo(&t.formula, &case.vars, case.db, nu).map_err(|e| internal(E, nu, e))?;
        let back = rows.iter().map(|r| {
            xs.iter()
                .zip(&t.y)
                .map(|(x, y)| (x.clone(), r.lookup(y).cloned().unwrap_or_else(Constant::padding)))
                .collect::<Valuation>()
        });
        let got = ValuationSet::from_rows(case.vars.clone(), back).map_err(|e| internal(E, nu, e))?;
        if got != want {
            return Err(differ(E, nu, &want, &got));
        }
    }
    Ok(Outcome::Passed)
}

fn rewriting(case: &Case, dom: &BTreeSet<Constant>) -> Result<Outcome, Mismatch> {
    const E: &str = "io-disjoint rewriting";
    let io = io_profile(case.expr);
    let rho = fresh_output_renaming(case.expr, &BTreeSet::new());
    let mut forbidden = case.vars.clone();
    forbidden.extend(rho.image());
    let beta = rewrite_io_disjoint(case.expr, &rho, &forbidden).map_err(|e| internal(E, &case.starts[0], e))?;
    let mut big = case.vars.clone();
    big.extend(beta.vars());
    let [pad, _] = fresh_constants(dom);
    for nu in &case.starts {
        let mut start = nu.clone();
        for x in big.difference(&case.vars) {
            start.set(x.clone(), pad.clone());
        }
        let lhs: BTreeSet<Valuation> = eval_flif_v(case.expr, &big, case.db, &start)
            .map_err(|e| internal(E, nu, e))?
            .iter()
            .map(|r| r.restrict(&io.outputs).expect("outputs are bound"))
            .collect();
        let rhs: BTreeSet<Valuation> = eval_flif_v(&beta, &big, case.db, &start)
            .map_err(|e| internal(E, nu, e))?
            .iter()
            .map(|r| rho.iter().map(|(y, ry)| (y.clone(), r.get(ry).expect("bound").clone())).collect())
            .collect();
        if lhs != rhs {
            return Err(Mismatch {
                engine: E,
                input: nu.clone(),
                detail: format!("rewriting {}\noutputs of α: {:?}\noutputs of β after ρ: {:?}", beta, lhs, rhs),
            });
        }
    }
    Ok(Outcome::Passed)
}

fn executable_fo(case: &Case, _: &BTreeSet<Constant>) -> Result<Outcome, Mismatch> {
    const E: &str = "executable FO";
    let phi = flifio_to_exfo(case.expr).map_err(|e| internal(E, &case.starts[0], e))?;
    for nu in &case.starts {
        let nu_in = nu.restrict(&case.inputs).expect("inputs are bound");
        let want = eval_flif(case.expr, case.db, &nu_in).map_err(|e| internal(E, nu, e))?;
        let got = eval_exfo(&phi, &case.inputs, case.db, &nu_in).map_err(|e| internal(E, nu, e))?;
        if got != want {
            return Err(differ(E, nu, &want, &got));
        }
    }
    Ok(Outcome::Passed)
}

fn plan(case: &Case, _: &BTreeSet<Constant>) -> Result<Outcome, Mismatch> {
    const E: &str = "compiled plan";
    let p = compile_plan(case.expr).map_err(|e| internal(E, &case.starts[0], e))?;
    for nu in &case.starts {
        let nu_in = nu.restrict(&case.inputs).expect("inputs are bound");
        let want = eval_flif(case.expr, case.db, &nu_in).map_err(|e| internal(E, nu, e))?;
        let n = ValuationSet::from_rows(case.inputs.clone(), [nu_in]).map_err(|e| internal(E, nu, e))?;
        let got = eval_plan(&p, case.db, &n).map_err(|e| internal(E, nu, e))?;
        if got != want {
            return Err(differ(E, nu, &want, &got));
        }
    }
    Ok(Outcome::Passed)
}
