//! Sampling-based checks of the integrand hypotheses. A passing report means
//! no violation was found on the supplied samples, nothing more.

use super::Integrand;
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyReport<T> {
    pub holds: bool,
    pub strict: bool,
    /// Largest amount by which the inequality failed (0 when it holds everywhere).
    pub worst_violation: T,
    pub cases: usize,
}

/// `0 <= a < b`, `0 <= c < d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

/// One instance of the sub-homogeneity condition: scale the first slot
/// (`First`) by `t` over the second-slot interval `lo < hi`, or vice versa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingTriple<T> {
    First { x: T, lo: T, hi: T, t: T },
    Second { y: T, lo: T, hi: T, t: T },
}

/// 0 plus 20 log-spaced points on `[1e-2, 1e2]`.
pub fn default_lattice<T: Scalar>() -> Vec<T> {
    let mut pts = vec![T::zero()];
    pts.extend((0..20).map(|i| lit::<T>(10f64.powf(-2.0 + 4.0 * i as f64 / 19.0))));
    pts
}

pub fn default_rectangles<T: Scalar>(lattice: &[T]) -> Vec<Rectangle<T>> {
    let pairs = ordered_pairs(lattice);
    let mut out = Vec::with_capacity(pairs.len() * pairs.len());
    for &(a, b) in &pairs {
        for &(c, d) in &pairs {
            out.push(Rectangle { a, b, c, d });
        }
    }
    out
}

pub fn default_triples<T: Scalar>(lattice: &[T]) -> Vec<ScalingTriple<T>> {
    let pairs = ordered_pairs(lattice);
    let ts = [0.1, 0.25, 0.5, 0.75, 0.9].map(lit::<T>);
    let mut out = Vec::new();
    for &x in lattice {
        for &(lo, hi) in &pairs {
            for &t in &ts {
                out.push(ScalingTriple::First { x, lo, hi, t });
                out.push(ScalingTriple::Second { y: x, lo, hi, t });
            }
        }
    }
    out
}

fn ordered_pairs<T: Scalar>(pts: &[T]) -> Vec<(T, T)> {
    let mut sorted = pts.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sorted.dedup();
    let mut out = Vec::new();
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

fn scaled_tol<T: Scalar>(tol: T, terms: &[T]) -> T {
    tol * terms.iter().fold(T::one(), |acc, t| acc + t.abs())
}

/// Vanishing at the coordinate axes: `max |Psi(s, 0)|, |Psi(0, s)| <= tol`.
pub fn check_psi1<T: Scalar>(psi: &Integrand<T>, samples: &[T], tol: T) -> PropertyReport<T> {
    let worst = samples
        .iter()
        .map(|&s| psi.eval(s, T::zero()).abs().max(psi.eval(T::zero(), s).abs()))
        .fold(T::zero(), T::max);
    let holds = worst <= tol;
    PropertyReport {
        holds,
        strict: holds,
        worst_violation: worst,
        cases: samples.len(),
    }
}

/// Supermodularity: `Psi(b,d) - Psi(b,c) - Psi(a,d) + Psi(a,c) >= 0` on each rectangle.
pub fn check_psi2<T: Scalar>(
    psi: &Integrand<T>,
    rectangles: &[Rectangle<T>],
    tol: T,
) -> PropertyReport<T> {
    let mut worst = T::zero();
    let mut holds = true;
    let mut strict = true;
    for r in rectangles {
        let terms = [
            psi.eval(r.b, r.d),
            psi.eval(r.b, r.c),
            psi.eval(r.a, r.d),
            psi.eval(r.a, r.c),
        ];
        let diff = terms[0] - terms[1] - terms[2] + terms[3];
        let eps = scaled_tol(tol, &terms);
        if diff < -eps {
            holds = false;
        }
        if diff <= eps {
            strict = false;
        }
        worst = worst.max(-diff);
    }
    PropertyReport {
        holds,
        strict: strict && holds,
        worst_violation: worst,
        cases: rectangles.len(),
    }
}

/// Sub-homogeneity of the partial increments: for the first slot,
/// `Psi(tx, hi) - t Psi(x, hi) - Psi(tx, lo) + t Psi(x, lo) <= 0`, and symmetrically.
/// Strictness is only demanded where the scaled argument is positive.
pub fn check_psi3<T: Scalar>(
    psi: &Integrand<T>,
    triples: &[ScalingTriple<T>],
    tol: T,
) -> PropertyReport<T> {
    let mut worst = T::zero();
    let mut holds = true;
    let mut strict = true;
    for tr in triples {
        let (scaled, terms) = match *tr {
            ScalingTriple::First { x, lo, hi, t } => (
                x,
                [
                    psi.eval(t * x, hi),
                    t * psi.eval(x, hi),
                    psi.eval(t * x, lo),
                    t * psi.eval(x, lo),
                ],
            ),
            ScalingTriple::Second { y, lo, hi, t } => (
                y,
                [
                    psi.eval(hi, t * y),
                    t * psi.eval(hi, y),
                    psi.eval(lo, t * y),
                    t * psi.eval(lo, y),
                ],
            ),
        };
        let expr = terms[0] - terms[1] - terms[2] + terms[3];
        let eps = scaled_tol(tol, &terms);
        if expr > eps {
            holds = false;
        }
        if scaled > T::zero() && expr >= -eps {
            strict = false;
        }
        worst = worst.max(expr);
    }
    PropertyReport {
        holds,
        strict: strict && holds,
        worst_violation: worst,
        cases: triples.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{derivative_f, PsiFlags};
    use super::*;

    const TOL: f64 = 1e-12;

    fn custom(name: &str, f: fn(f64, f64) -> f64) -> Integrand<f64> {
        Integrand::custom(name, f, PsiFlags::default(), None)
    }

    #[test]
    fn psi1_examples() {
        let lat = default_lattice::<f64>();
        let r = check_psi1(&Integrand::product(), &lat, TOL);
        assert!(r.holds);
        assert_eq!(r.worst_violation, 0.0);
        let r = check_psi1(&custom("st+1", |s, t| s * t + 1.0), &lat, TOL);
        assert!(!r.holds);
        assert_eq!(r.worst_violation, 1.0);
        assert!(check_psi1(&Integrand::min(), &lat, TOL).holds);
    }

    #[test]
    fn psi2_examples() {
        let rects = default_rectangles(&default_lattice::<f64>());
        let r = check_psi2(&Integrand::product(), &rects, TOL);
        assert!(r.holds && r.strict);
        let one = [Rectangle {
            a: 0.0,
            b: 1.0,
            c: 2.0,
            d: 3.0,
        }];
        let r = check_psi2(&Integrand::min(), &one, TOL);
        assert!(r.holds && !r.strict);
        let r = check_psi2(&custom("-st", |s, t| -s * t), &rects, TOL);
        assert!(!r.holds);
        assert!(r.worst_violation > 0.0);
    }

    #[test]
    fn psi3_examples() {
        let triples = default_triples(&default_lattice::<f64>());
        let r = check_psi3(&Integrand::product(), &triples, TOL);
        assert!(r.holds && !r.strict);
        let one = [ScalingTriple::First {
            x: 1.0,
            lo: 0.0,
            hi: 1.0,
            t: 0.5,
        }];
        let pp = Integrand::power_product(2.0, 2.0).unwrap();
        let r = check_psi3(&pp, &one, TOL);
        assert!(r.holds && r.strict);
        assert_eq!(r.worst_violation, 0.0);
        let r = check_psi3(&pp, &triples, TOL);
        assert!(r.holds && r.strict);
        let r = check_psi3(&custom("sqrt(s)t", |s, t| s.sqrt() * t), &triples, TOL);
        assert!(!r.holds);
    }

    #[test]
    fn psi3_expression_value() {
        // (t^2 - t) x^2 (hi^2 - lo^2) at x=1, [0,1], t=1/2
        let pp = Integrand::power_product(2.0, 2.0).unwrap();
        let (x, t) = (1.0, 0.5);
        let e = pp.eval(t * x, 1.0) - t * pp.eval(x, 1.0) - pp.eval(t * x, 0.0) + t * pp.eval(x, 0.0);
        assert_eq!(e, -0.25);
    }

    #[test]
    fn declared_flags_match_checks_for_catalog() {
        let lat = default_lattice::<f64>();
        let rects = default_rectangles(&lat);
        let triples = default_triples(&lat);
        for name in [
            "product",
            "powerprod:2:2",
            "powerprod:1:3",
            "min",
            "cappedprod",
            "threshold:1:2",
        ] {
            let psi: Integrand<f64> = name.parse().unwrap();
            let fl = psi.flags();
            let r1 = check_psi1(&psi, &lat, TOL);
            let r2 = check_psi2(&psi, &rects, TOL);
            let r3 = check_psi3(&psi, &triples, TOL);
            assert_eq!(r1.holds, fl.vanishes_at_hyperplanes, "{name} psi1");
            assert_eq!(r2.holds, fl.supermodular, "{name} psi2");
            assert_eq!(r2.strict, fl.strict_supermodular, "{name} psi2 strict");
            assert_eq!(r3.holds, fl.psi3, "{name} psi3");
            assert_eq!(r3.strict, fl.strict_psi3, "{name} psi3 strict");
        }
    }

    #[test]
    fn monotonicity_follows_from_psi1_psi2() {
        let lat = default_lattice::<f64>();
        for name in ["product", "powerprod:2:2", "min", "cappedprod", "threshold:1:2"] {
            let psi: Integrand<f64> = name.parse().unwrap();
            for (i, &s) in lat.iter().enumerate() {
                for (j, &t) in lat.iter().enumerate() {
                    let v = psi.eval(s, t);
                    assert!(v >= 0.0, "{name}");
                    if i + 1 < lat.len() {
                        assert!(psi.eval(lat[i + 1], t) >= v, "{name}");
                    }
                    if j + 1 < lat.len() {
                        assert!(psi.eval(s, lat[j + 1]) >= v, "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn derivative_nonnegative_and_subhomogeneous() {
        let lat = default_lattice::<f64>();
        for name in ["product", "powerprod:2:2", "powerprod:1.5:2", "min", "cappedprod"] {
            let psi: Integrand<f64> = name.parse().unwrap();
            for &s in &lat {
                for &u in &lat {
                    let f = derivative_f(&psi, s, u, 1e-6);
                    assert!(f >= -TOL, "{name}");
                    if psi.flags().psi3 {
                        for t in [0.1, 0.5, 0.9] {
                            let lhs = derivative_f(&psi, t * s, u, 1e-6);
                            assert!(lhs <= t * f + TOL * (1.0 + f.abs()), "{name}");
                        }
                    }
                }
            }
        }
    }
}
