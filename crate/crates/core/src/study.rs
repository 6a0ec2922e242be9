//! Fixed smooth profiles and grid-refinement studies in two dimensions, used
//! to calibrate the `C * h` tolerances in [`crate::config`].

use crate::config::Tolerances;
use crate::error::Result;
use crate::grid::{ConstraintSpec, Domain, GridFunction};
use crate::integrand::Integrand;
use crate::riesz::{potential, radial_monotonicity, verify_chain, ChainReport, Kernel};
use crate::scalar::{lit, Scalar};

/// Half-width of the study box.
pub const STUDY_HALFWIDTH: f64 = 2.0;

/// Grid sizes used for calibration.
pub const CALIBRATION_SIZES: [usize; 2] = [8, 16];

/// Square 2D domain `[-2, 2]^2` with `n` cells per axis.
pub fn study_domain<T: Scalar>(n: usize) -> Result<Domain<T>> {
    Domain::new(2, lit(STUDY_HALFWIDTH), n)
}

/// Compactly supported radial bump `(1 - |x|^2)_+^2`.
pub fn bump<T: Scalar>(domain: &Domain<T>) -> Result<GridFunction<T>> {
    GridFunction::from_fn(*domain, |[x, y]| {
        let s = (T::one() - x * x - y * y).max(T::zero());
        s * s
    })
}

/// Off-center elliptical bump `(1 - q)_+^p` for the quadratic form
/// `q = ((x - cx) / ax)^2 + ((y - cy) / ay)^2`.
fn elliptic<T: Scalar>(domain: &Domain<T>, c: [f64; 2], a: [f64; 2], p: i32) -> Result<GridFunction<T>> {
    GridFunction::from_fn(*domain, |[x, y]| {
        let u = (x - lit(c[0])) / lit(a[0]);
        let v = (y - lit(c[1])) / lit(a[1]);
        (T::one() - u * u - v * v).max(T::zero()).powi(p)
    })
}

/// Scales `u` down so that it is feasible for `c`.
fn fit<T: Scalar>(u: GridFunction<T>, c: &ConstraintSpec<T>) -> Result<GridFunction<T>> {
    let ratio = (c.cap / u.max_value()).min(c.mass / u.integral()).min(T::one());
    u.scaled(ratio * (T::one() - lit(1e-12)))
}

/// The fixed smooth, non-symmetric pair of the chain refinement study.
pub fn smooth_pair<T: Scalar>(
    domain: &Domain<T>,
    c1: &ConstraintSpec<T>,
    c2: &ConstraintSpec<T>,
) -> Result<(GridFunction<T>, GridFunction<T>)> {
    let f = elliptic(domain, [0.3, -0.2], [1.2, 0.8], 1)?;
    let g = elliptic(domain, [-0.4, 0.1], [0.9, 1.1], 2)?;
    Ok((fit(f, c1)?, fit(g, c2)?))
}

/// Constraints of the chain study: `k = 1`, `l = 1`.
pub fn study_constraints<T: Scalar>() -> ConstraintSpec<T> {
    ConstraintSpec::new(T::one(), T::one()).expect("positive")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialPoint<T> {
    pub cells: usize,
    pub h: T,
    pub max_violation: T,
}

/// Largest radial ascent of the potential of [`bump`] at each grid size.
pub fn potential_study<T: Scalar>(kernel: &Kernel<T>, sizes: &[usize]) -> Result<Vec<PotentialPoint<T>>> {
    sizes
        .iter()
        .map(|&n| {
            let d = study_domain::<T>(n)?;
            let nu = potential(&bump(&d)?, kernel)?;
            Ok(PotentialPoint {
                cells: n,
                h: d.cell_width(),
                max_violation: radial_monotonicity(&nu).max_violation,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainPoint<T> {
    pub cells: usize,
    pub h: T,
    pub report: ChainReport<T>,
}

/// Chain reports for [`smooth_pair`] at each grid size.
pub fn chain_study<T: Scalar>(
    psi: &Integrand<T>,
    kernel: &Kernel<T>,
    sizes: &[usize],
    tol: &Tolerances<T>,
) -> Result<Vec<ChainPoint<T>>> {
    let c = study_constraints::<T>();
    sizes
        .iter()
        .map(|&n| {
            let d = study_domain::<T>(n)?;
            let (f, g) = smooth_pair(&d, &c, &c)?;
            Ok(ChainPoint {
                cells: n,
                h: d.cell_width(),
                report: verify_chain(&f, &g, &c, &c, psi, kernel, tol)?,
            })
        })
        .collect()
}

/// Twice the largest `violation / h` over the calibration sizes.
pub fn calibrate_potential_constant<T: Scalar>(kernel: &Kernel<T>) -> Result<T> {
    let points = potential_study(kernel, &CALIBRATION_SIZES)?;
    Ok(points
        .iter()
        .map(|p| p.max_violation / p.h)
        .fold(T::zero(), T::max)
        * lit(2.0))
}

/// Twice the largest negative relative slack over `h` at the calibration sizes.
pub fn calibrate_chain_constant<T: Scalar>(psi: &Integrand<T>, kernel: &Kernel<T>) -> Result<T> {
    let points = chain_study(psi, kernel, &CALIBRATION_SIZES, &Tolerances::default())?;
    Ok(points
        .iter()
        .flat_map(|p| p.report.relative_slacks().map(|s| (-s).max(T::zero()) / p.h))
        .fold(T::zero(), T::max)
        * lit(2.0))
}
