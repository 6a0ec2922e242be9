use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::grid::{ball_indicator, is_feasible, ConstraintSpec, GridFunction};
use crate::integrand::{GammaProfile, Integrand};
use crate::rearrange::{is_schwarz_symmetric, radial_order, schwarz_rearrange};
use crate::scalar::Scalar;

use super::eval::riesz_eval;
use super::kernel::Kernel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HlBound<T> {
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
}

/// Compares `sum u Gamma(nu) h^dim` against the same sum with `nu` replaced by
/// the ball indicator `k 1_B`, `|B| = l / k`.
pub fn hl_bound<T: Scalar>(
    u: &GridFunction<T>,
    gamma: &GammaProfile<T>,
    nu: &GridFunction<T>,
    c: &ConstraintSpec<T>,
    tol: &Tolerances<T>,
) -> Result<HlBound<T>> {
    if u.domain() != nu.domain() {
        return Err(Error::DomainMismatch);
    }
    if !is_schwarz_symmetric(u) {
        return Err(Error::NotSchwarzSymmetric);
    }
    if !is_feasible(nu, c, tol.feas) {
        return Err(Error::InfeasibleNu);
    }
    let ball = ball_indicator(u.domain(), c)?;
    let weighted = |w: &GridFunction<T>| -> T {
        u.values()
            .iter()
            .zip(w.values())
            .map(|(&a, &b)| a * gamma.eval(b))
            .sum::<T>()
            * u.domain().cell_measure()
    };
    let lhs = weighted(nu);
    let rhs = weighted(&ball);
    Ok(HlBound {
        lhs,
        rhs,
        holds: lhs <= rhs + tol.prop,
    })
}

/// The four functional values of the rearrangement chain
/// `J(f1, f2) <= J(f1*, f2*) <= J(k1 1_B1, f2*) <= J(k1 1_B1, k2 1_B2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainReport<T> {
    pub j_ff: T,
    pub j_star: T,
    pub j_half: T,
    pub j_ball: T,
    /// `[j_star - j_ff, j_half - j_star, j_ball - j_half]`.
    pub slacks: [T; 3],
    /// Relative tolerance applied to each slack.
    pub tolerance: T,
    pub violated: [bool; 3],
}

impl<T: Scalar> ChainReport<T> {
    pub fn holds(&self) -> bool {
        !self.violated.iter().any(|&v| v)
    }

    /// Slacks divided by the larger of the two values they compare.
    pub fn relative_slacks(&self) -> [T; 3] {
        let vals = [self.j_ff, self.j_star, self.j_half, self.j_ball];
        std::array::from_fn(|i| {
            let scale = vals[i].abs().max(vals[i + 1].abs());
            if scale > T::zero() {
                self.slacks[i] / scale
            } else {
                T::zero()
            }
        })
    }
}

pub fn verify_chain<T: Scalar>(
    f1: &GridFunction<T>,
    f2: &GridFunction<T>,
    c1: &ConstraintSpec<T>,
    c2: &ConstraintSpec<T>,
    psi: &Integrand<T>,
    kernel: &Kernel<T>,
    tol: &Tolerances<T>,
) -> Result<ChainReport<T>> {
    if f1.domain() != f2.domain() {
        return Err(Error::DomainMismatch);
    }
    if !is_feasible(f1, c1, tol.feas) || !is_feasible(f2, c2, tol.feas) {
        return Err(Error::InfeasibleStart);
    }
    let domain = f1.domain();
    let b1 = ball_indicator(domain, c1)?;
    let b2 = ball_indicator(domain, c2)?;
    let (s1, s2) = (schwarz_rearrange(f1), schwarz_rearrange(f2));

    let j_ff = riesz_eval(f1, f2, psi, kernel)?;
    let j_star = riesz_eval(&s1, &s2, psi, kernel)?;
    let j_half = riesz_eval(&b1, &s2, psi, kernel)?;
    let j_ball = riesz_eval(&b1, &b2, psi, kernel)?;
    let tolerance = tol.chain(domain.dim(), domain.cell_width(), kernel.kind());
    let mut report = ChainReport {
        j_ff,
        j_star,
        j_half,
        j_ball,
        slacks: [j_star - j_ff, j_half - j_star, j_ball - j_half],
        tolerance,
        violated: [false; 3],
    };
    let rel = report.relative_slacks();
    report.violated = rel.map(|r| r < -tolerance);
    Ok(report)
}

/// Ascents of a function along the radial order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport<T> {
    /// Consecutive pairs where the later cell has a strictly larger value.
    pub violations: usize,
    pub max_violation: T,
}

pub fn radial_monotonicity<T: Scalar>(u: &GridFunction<T>) -> MonotonicityReport<T> {
    let order = radial_order(u.domain());
    let mut report = MonotonicityReport {
        violations: 0,
        max_violation: T::zero(),
    };
    for w in order.windows(2) {
        let rise = u.get(w[1]) - u.get(w[0]);
        if rise > T::zero() {
            report.violations += 1;
            report.max_violation = report.max_violation.max(rise);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Domain;
    use crate::riesz::potential;

    fn d3() -> Domain<f64> {
        Domain::new(1, 1.5, 3).unwrap()
    }

    #[test]
    fn hl_bound_example() {
        let d = d3();
        let u = GridFunction::new(d, vec![1.0, 2.0, 1.0]).unwrap();
        let nu = GridFunction::new(d, vec![0.5, 0.0, 0.5]).unwrap();
        let c = ConstraintSpec::new(1.0, 1.0).unwrap();
        let tol = Tolerances::default();
        let r = hl_bound(&u, &GammaProfile::linear(), &nu, &c, &tol).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (1.0, 2.0, true));
        let ball = ball_indicator(&d, &c).unwrap();
        let r = hl_bound(&u, &GammaProfile::square(), &ball, &c, &tol).unwrap();
        assert_eq!(r.lhs, r.rhs);
        let r = hl_bound(&u, &GammaProfile::square(), &GridFunction::zeros(d), &c, &tol).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn hl_bound_errors() {
        let d = d3();
        let c = ConstraintSpec::new(1.0, 1.0).unwrap();
        let tol = Tolerances::default();
        let skew = GridFunction::new(d, vec![2.0, 1.0, 1.0]).unwrap();
        let z = GridFunction::zeros(d);
        assert_eq!(
            hl_bound(&skew, &GammaProfile::linear(), &z, &c, &tol),
            Err(Error::NotSchwarzSymmetric)
        );
        let u = GridFunction::new(d, vec![1.0, 2.0, 1.0]).unwrap();
        let heavy = GridFunction::new(d, vec![1.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            hl_bound(&u, &GammaProfile::linear(), &heavy, &c, &tol),
            Err(Error::InfeasibleNu)
        );
    }

    #[test]
    fn chain_fixed_points() {
        let d = Domain::new(1, 4.0, 8).unwrap();
        let c1 = ConstraintSpec::new(1.0, 2.0).unwrap();
        let c2 = ConstraintSpec::new(2.0, 6.0).unwrap();
        let b1 = ball_indicator(&d, &c1).unwrap();
        let b2 = ball_indicator(&d, &c2).unwrap();
        let psi = Integrand::power_product(2.0, 2.0).unwrap();
        let tol = Tolerances::default();
        let r = verify_chain(&b1, &b2, &c1, &c2, &psi, &Kernel::exp(), &tol).unwrap();
        assert_eq!(r.slacks, [0.0; 3]);
        assert!(r.holds());
        let z = GridFunction::zeros(d);
        let r = verify_chain(&z, &z, &c1, &c2, &psi, &Kernel::exp(), &tol).unwrap();
        assert_eq!([r.j_ff, r.j_star, r.j_half], [0.0; 3]);
    }

    #[test]
    fn chain_rejects_infeasible() {
        let d = Domain::new(1, 4.0, 8).unwrap();
        let c = ConstraintSpec::new(1.0, 2.0).unwrap();
        let big = GridFunction::constant(d, 1.0).unwrap();
        let tol = Tolerances::default();
        assert_eq!(
            verify_chain(&big, &big, &c, &c, &Integrand::product(), &Kernel::exp(), &tol),
            Err(Error::InfeasibleStart)
        );
    }

    #[test]
    fn potential_of_symmetric_is_strictly_radial_1d() {
        let d = Domain::new(1, 4.5, 9).unwrap();
        let h = GridFunction::new(d, vec![0.0, 0.0, 0.5, 1.0, 3.0, 1.0, 0.25, 0.0, 0.0]).unwrap();
        let h = schwarz_rearrange(&h);
        let nu = potential(&h, &Kernel::exp()).unwrap();
        assert_eq!(radial_monotonicity(&nu).violations, 0);
        let order = radial_order(&d);
        for w in order.windows(2) {
            if d.radius(w[0]) < d.radius(w[1]) {
                assert!(nu.get(w[1]) < nu.get(w[0]));
            }
        }
    }
}
