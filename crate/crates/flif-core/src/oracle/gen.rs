use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{exec_check, io_profile, is_io_disjoint};
use crate::model::{Constant, Instance, RelName, Schema, Signature, Valuation, VarName};
use crate::syntax::{FlifExpr, FoFormula, Renaming};

/// Bounds for random generation. Output is a pure function of the config.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub max_relations: usize,
    pub max_arity: usize,
    pub max_adom: usize,
    pub max_depth: usize,
    pub num_vars: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_relations: 3,
            max_arity: 3,
            max_adom: 5,
            max_depth: 4,
            num_vars: 4,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

const VAR_NAMES: [&str; 8] = ["x", "y", "z", "u", "w", "v", "s", "t"];
const REL_NAMES: [&str; 6] = ["R", "S", "T", "U", "P", "Q"];
/// A constant outside every generated active domain.
const OFF_DOMAIN: &str = "k";

/// Seeded random generator for instances, expressions, formulas and
/// valuations.
pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

pub fn gen_instance(cfg: &GenConfig) -> Instance {
    Generator::new(cfg.clone()).instance()
}

pub fn gen_flif(cfg: &GenConfig, schema: &Schema) -> FlifExpr {
    Generator::new(cfg.clone()).flif(schema)
}

pub fn gen_flif_io(cfg: &GenConfig, schema: &Schema) -> FlifExpr {
    Generator::new(cfg.clone()).flif_io(schema)
}

pub fn gen_exfo(cfg: &GenConfig, schema: &Schema, vars: &BTreeSet<VarName>) -> FoFormula {
    Generator::new(cfg.clone()).exfo(schema, vars)
}

pub fn gen_valuation(cfg: &GenConfig, vars: &BTreeSet<VarName>, dom: &[Constant]) -> Valuation {
    Generator::new(cfg.clone()).valuation(vars, dom)
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Self {
        assert!(
            cfg.max_relations >= 1 && cfg.max_adom >= 1 && cfg.max_depth >= 1 && cfg.num_vars >= 1,
            "generator bounds must be at least 1"
        );
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Generator { cfg, rng }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn var_pool(&self) -> Vec<VarName> {
        (0..self.cfg.num_vars)
            .map(|i| match VAR_NAMES.get(i) {
                Some(s) => VarName::new(s),
                None => VarName::new(&format!("x{}", i)),
            })
            .collect::<crate::Result<_>>()
            .expect("valid names")
    }

    pub fn const_pool(&self) -> Vec<Constant> {
        (1..=self.cfg.max_adom).map(|i| Constant::new(format!("{}", i))).collect()
    }

    pub fn instance(&mut self) -> Instance {
        let n = self.rng.gen_range(1..=self.cfg.max_relations.min(REL_NAMES.len()));
        let mut schema = Schema::new();
        for name in &REL_NAMES[..n] {
            let arity = self.rng.gen_range(0..=self.cfg.max_arity);
            let iar = self.rng.gen_range(0..=arity);
            schema
                .declare(RelName::new(name).expect("valid"), arity, iar)
                .expect("iar ≤ arity");
        }
        let consts = self.const_pool();
        let mut db = Instance::new(schema.clone());
        for (rel, sig) in schema.relations() {
            let count = if sig.arity == 0 {
                self.rng.gen_range(0..=1)
            } else {
                self.rng.gen_range(0..=6)
            };
            for _ in 0..count {
                let t = (0..sig.arity)
                    .map(|_| consts.choose(&mut self.rng).expect("nonempty").clone())
                    .collect();
                db.insert(rel, t).expect("arity matches");
            }
        }
        db
    }

    fn constant(&mut self) -> Constant {
        if self.rng.gen_bool(0.15) {
            Constant::new(OFF_DOMAIN)
        } else {
            self.const_pool().choose(&mut self.rng).expect("nonempty").clone()
        }
    }

    fn pick(&mut self, pool: &[VarName]) -> VarName {
        pool.choose(&mut self.rng).expect("nonempty").clone()
    }

    fn relation(&mut self, schema: &Schema) -> Option<(RelName, Signature)> {
        let rels: Vec<_> = schema.relations().map(|(r, s)| (r.clone(), *s)).collect();
        rels.choose(&mut self.rng).cloned()
    }

    /// Any well-formed expression up to the configured depth.
    pub fn flif(&mut self, schema: &Schema) -> FlifExpr {
        let depth = self.cfg.max_depth;
        self.flif_at(schema, depth)
    }

    fn flif_at(&mut self, schema: &Schema, depth: usize) -> FlifExpr {
        if depth <= 1 || self.rng.gen_bool(0.3) {
            return self.flif_atom(schema);
        }
        let l = self.flif_at(schema, depth - 1);
        let r = self.flif_at(schema, depth - 1);
        match self.rng.gen_range(0..3) {
            0 => FlifExpr::comp(l, r),
            1 => FlifExpr::union(l, r),
            _ => FlifExpr::diff(l, r),
        }
    }

    fn flif_atom(&mut self, schema: &Schema) -> FlifExpr {
        let pool = self.var_pool();
        let kind = self.rng.gen_range(0..8);
        match kind {
            0..=3 => match self.relation(schema) {
                Some((rel, sig)) => {
                    let inputs = (0..sig.input_arity).map(|_| self.pick(&pool)).collect();
                    let outputs = (0..sig.output_arity()).map(|_| self.pick(&pool)).collect();
                    FlifExpr::rel(rel, inputs, outputs)
                }
                None => FlifExpr::EqVar(self.pick(&pool), self.pick(&pool)),
            },
            4 => FlifExpr::EqVar(self.pick(&pool), self.pick(&pool)),
            5 => FlifExpr::EqConst(self.pick(&pool), self.constant()),
            6 => FlifExpr::AssignVar(self.pick(&pool), self.pick(&pool)),
            _ => FlifExpr::AssignConst(self.pick(&pool), self.constant()),
        }
    }

    /// An io-disjoint expression. Atoms draw inputs and outputs from disjoint
    /// pools; union and difference operands are padded with constant
    /// assignments until their output sets fit.
    pub fn flif_io(&mut self, schema: &Schema) -> FlifExpr {
        let depth = self.cfg.max_depth;
        let e = self.io_at(schema, depth, &BTreeSet::new());
        debug_assert!(is_io_disjoint(&e), "{}", e);
        e
    }

    fn io_at(&mut self, schema: &Schema, depth: usize, forbidden: &BTreeSet<VarName>) -> FlifExpr {
        if depth <= 1 || self.rng.gen_bool(0.3) {
            return self.io_atom(schema, forbidden);
        }
        match self.rng.gen_range(0..3) {
            0 => {
                let l = self.io_at(schema, depth - 1, forbidden);
                let mut f2 = forbidden.clone();
                f2.extend(io_profile(&l).inputs);
                let r = self.io_at(schema, depth - 1, &f2);
                FlifExpr::comp(l, r)
            }
            1 => {
                let l = self.io_at(schema, depth - 1, forbidden);
                let r = self.io_at(schema, depth - 1, forbidden);
                let (ol, or) = (io_profile(&l).outputs, io_profile(&r).outputs);
                let l = self.pad(l, or.difference(&ol));
                let r = self.pad(r, ol.difference(&or));
                FlifExpr::union(l, r)
            }
            _ => {
                let l = self.io_at(schema, depth - 1, forbidden);
                let r = self.io_at(schema, depth - 1, forbidden);
                let (ol, or) = (io_profile(&l).outputs, io_profile(&r).outputs);
                let r = self.pad(r, ol.difference(&or));
                FlifExpr::diff(l, r)
            }
        }
    }

    /// `(y₁:="c") ; ... ; e`, adding the given outputs.
    fn pad<'a>(&mut self, e: FlifExpr, extra: impl Iterator<Item = &'a VarName>) -> FlifExpr {
        let extra: Vec<VarName> = extra.cloned().collect();
        extra.into_iter().rev().fold(e, |acc, y| {
            let c = self.constant();
            FlifExpr::comp(FlifExpr::AssignConst(y, c), acc)
        })
    }

    fn io_atom(&mut self, schema: &Schema, forbidden: &BTreeSet<VarName>) -> FlifExpr {
        let pool = self.var_pool();
        let writable: Vec<VarName> = pool.iter().filter(|v| !forbidden.contains(*v)).cloned().collect();
        let kind = self.rng.gen_range(0..8);
        let test = |g: &mut Self| {
            if g.rng.gen_bool(0.5) {
                FlifExpr::EqVar(g.pick(&pool), g.pick(&pool))
            } else {
                FlifExpr::EqConst(g.pick(&pool), g.constant())
            }
        };
        match kind {
            0..=3 => {
                let Some((rel, sig)) = self.relation(schema) else {
                    return test(self);
                };
                let inputs: Vec<VarName> = (0..sig.input_arity).map(|_| self.pick(&pool)).collect();
                let outs: Vec<VarName> = writable.iter().filter(|v| !inputs.contains(*v)).cloned().collect();
                if sig.output_arity() > 0 && outs.is_empty() {
                    return test(self);
                }
                let outputs = (0..sig.output_arity()).map(|_| self.pick(&outs)).collect();
                FlifExpr::rel(rel, inputs, outputs)
            }
            4 | 5 => test(self),
            6 => {
                if writable.is_empty() || pool.len() < 2 {
                    return test(self);
                }
                let x = self.pick(&writable);
                let others: Vec<VarName> = pool.iter().filter(|v| **v != x).cloned().collect();
                let y = self.pick(&others);
                FlifExpr::AssignVar(x, y)
            }
            _ => {
                if writable.is_empty() {
                    return test(self);
                }
                let x = self.pick(&writable);
                FlifExpr::AssignConst(x, self.constant())
            }
        }
    }

    /// A `vars`-executable formula, hygiene-normalized.
    pub fn exfo(&mut self, schema: &Schema, vars: &BTreeSet<VarName>) -> FoFormula {
        let depth = self.cfg.max_depth;
        let f = self.fo_at(schema, vars, depth).normalize_hygiene();
        debug_assert!(exec_check(&f, vars), "{}", f);
        f
    }

    fn fo_at(&mut self, schema: &Schema, v: &BTreeSet<VarName>, depth: usize) -> FoFormula {
        if depth <= 1 || self.rng.gen_bool(0.3) {
            return self.fo_atom(schema, v);
        }
        let pool = self.var_pool();
        match self.rng.gen_range(0..4) {
            0 => {
                let l = self.fo_at(schema, v, depth - 1);
                let mut v2 = v.clone();
                v2.extend(l.free_vars());
                let r = self.fo_at(schema, &v2, depth - 1);
                FoFormula::and(l, r)
            }
            1 => {
                let l = self.fo_at(schema, v, depth - 1);
                let r = self.fo_at(schema, v, depth - 1);
                let (fl, fr) = (l.free_vars(), r.free_vars());
                let l = self.bind_with_constants(l, fr.difference(&fl).filter(|x| !v.contains(*x)));
                let r = self.bind_with_constants(r, fl.difference(&fr).filter(|x| !v.contains(*x)));
                FoFormula::or(l, r)
            }
            2 => {
                let f = self.fo_at(schema, v, depth - 1);
                let extra: Vec<VarName> = f.free_vars().difference(v).cloned().collect();
                FoFormula::not(FoFormula::exists_all(extra, f))
            }
            _ => {
                let x = self.pick(&pool);
                let mut v2 = v.clone();
                v2.remove(&x);
                FoFormula::exists(x, self.fo_at(schema, &v2, depth - 1))
            }
        }
    }

    fn bind_with_constants<'a>(&mut self, f: FoFormula, vars: impl Iterator<Item = &'a VarName>) -> FoFormula {
        let vars: Vec<VarName> = vars.cloned().collect();
        vars.into_iter().fold(f, |acc, z| {
            let c = self.constant();
            FoFormula::and(acc, FoFormula::EqConst(z, c))
        })
    }

    fn fo_atom(&mut self, schema: &Schema, v: &BTreeSet<VarName>) -> FoFormula {
        let pool = self.var_pool();
        let bound: Vec<VarName> = v.iter().cloned().collect();
        match self.rng.gen_range(0..6) {
            0..=2 => {
                if let Some((rel, sig)) = self.relation(schema) {
                    if sig.input_arity == 0 || !bound.is_empty() {
                        let inputs = (0..sig.input_arity).map(|_| self.pick(&bound)).collect();
                        let outputs = (0..sig.output_arity()).map(|_| self.pick(&pool)).collect();
                        return FoFormula::rel(rel, inputs, outputs);
                    }
                }
                FoFormula::EqConst(self.pick(&pool), self.constant())
            }
            3 | 4 if !bound.is_empty() => {
                let x = self.pick(&bound);
                let y = self.pick(&pool);
                if self.rng.gen_bool(0.5) {
                    FoFormula::Eq(x, y)
                } else {
                    FoFormula::Eq(y, x)
                }
            }
            _ => FoFormula::EqConst(self.pick(&pool), self.constant()),
        }
    }

    /// Uniform valuation on `vars` over `dom`.
    pub fn valuation(&mut self, vars: &BTreeSet<VarName>, dom: &[Constant]) -> Valuation {
        vars.iter()
            .map(|x| (x.clone(), dom.choose(&mut self.rng).expect("nonempty domain").clone()))
            .collect()
    }

    /// A random injective renaming of `O(α)` onto names outside `vars(α)`.
    pub fn output_renaming(&mut self, expr: &FlifExpr) -> Renaming {
        let io = io_profile(expr);
        let mut targets: Vec<VarName> = (1..=2 * io.outputs.len().max(1))
            .map(|i| VarName::new(&format!("r{}", i)).expect("valid"))
            .filter(|v| !io.vars.contains(v))
            .collect();
        targets.shuffle(&mut self.rng);
        let map: BTreeMap<VarName, VarName> = io.outputs.iter().cloned().zip(targets).collect();
        Renaming::new(map).expect("distinct targets")
    }
}
