//! Discrete verification toolkit for ball maximizers of Riesz-type functionals
//!
//! ```text
//! J(f, g) = sum_x sum_y Psi(f(x), g(y)) j(|x - y|) h^{2 dim}
//! ```
//!
//! over pairs with pointwise caps and mass budgets. Functions live on a regular
//! lattice in one or two dimensions; every routine is generic over the scalar
//! type, with `f64` aliases at the crate root.

pub mod config;
pub mod error;
pub mod grid;
pub mod instance;
pub mod integrand;
pub mod random;
pub mod rearrange;
pub mod riesz;
pub mod scalar;
pub mod search;
pub mod study;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use instance::Instance;
pub use grid::{ball_indicator, integral, is_feasible, ConstraintSpec, Domain, GridFunction};
pub use integrand::{decompose, derivative_f, truncate, Decomposition, GammaProfile, Integrand, PsiFlags};
pub use rearrange::{
    is_schwarz_symmetric, polarize, radial_order, schwarz_rearrange, set_rearrange, Reflection,
};
pub use riesz::{
    hl_bound, layercake_auto, layercake_eval, potential, riesz_eval, verify_chain, ChainReport,
    Kernel,
};
pub use scalar::Scalar;
pub use search::{exchange_ascent, exhaustive_max, uniqueness_check, MaximizerCertificate, SearchSpace};

pub type Domain64 = Domain<f64>;
pub type GridFunction64 = GridFunction<f64>;
pub type ConstraintSpec64 = ConstraintSpec<f64>;
pub type Integrand64 = Integrand<f64>;
pub type Kernel64 = Kernel<f64>;
pub type Tolerances64 = Tolerances<f64>;

pub type Domain32 = Domain<f32>;
pub type GridFunction32 = GridFunction<f32>;
pub type Integrand32 = Integrand<f32>;
pub type Kernel32 = Kernel<f32>;
