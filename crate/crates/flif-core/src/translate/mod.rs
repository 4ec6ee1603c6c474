//! Translations between executable FO and FLIF, and the io-disjoint rewriting.

mod bounded;
mod fo_to_flif;
mod fresh;
mod io_to_fo;
mod rewrite;

pub use bounded::{flif_to_fo3n, BoundedTranslation};
pub use fo_to_flif::exfo_to_flif;
pub use fresh::FreshVarSource;
pub use io_to_fo::flifio_to_exfo;
pub use rewrite::{fresh_output_renaming, rewrite_io_disjoint};
