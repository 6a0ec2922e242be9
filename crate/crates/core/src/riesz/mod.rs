//! The Riesz-type functional, its potential, and the inequality chain.

mod bounds;
mod eval;
mod kernel;

pub use bounds::{
    hl_bound, radial_monotonicity, verify_chain, ChainReport, HlBound, MonotonicityReport,
};
pub use eval::{
    decompose_for, layercake_auto, layercake_eval, layercake_eval_decomposed, potential,
    riesz_eval, riesz_eval_with, Summation,
};
pub use kernel::{Kernel, KernelKind};
pub(crate) use kernel::KernelTable;
