//! Brute-force semantics, semantic property checks and seeded generators
//! used for differential testing.

mod brute;
mod fo;
mod gen;
mod spine;

pub use brute::{brute_pairs, candidate_domain, fresh_constants, BrutePairs, DEFAULT_BUDGET};
pub use fo::{brute_exfo, fo_domain, satisfies};
pub use gen::{gen_exfo, gen_flif, gen_flif_io, gen_instance, gen_valuation, GenConfig, Generator};
pub use spine::{check_property, check_spine, SpineProperty, SpineViolation};
