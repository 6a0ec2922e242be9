use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

#[derive(Clone)]
pub enum GammaKind<T> {
    /// `x`
    Linear,
    /// `x^2`
    Square,
    /// `x min(x, 1)`
    SquareThenLinear,
    /// `sqrt(x)`
    Sqrt,
    Custom {
        name: String,
        eval: Arc<dyn Fn(T) -> T + Send + Sync>,
    },
}

impl<T> fmt::Debug for GammaKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear => write!(f, "Linear"),
            Self::Square => write!(f, "Square"),
            Self::SquareThenLinear => write!(f, "SquareThenLinear"),
            Self::Sqrt => write!(f, "Sqrt"),
            Self::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// Single-variable profile `Gamma` with `Gamma(0) = 0` and, when declared,
/// `Gamma(t x) <= t Gamma(x)` for `0 < t < 1`.
#[derive(Debug, Clone)]
pub struct GammaProfile<T> {
    kind: GammaKind<T>,
    pub sublinear_scaling: bool,
    pub strict_sublinear_scaling: bool,
}

impl<T: Scalar> GammaProfile<T> {
    pub fn linear() -> Self {
        Self {
            kind: GammaKind::Linear,
            sublinear_scaling: true,
            strict_sublinear_scaling: false,
        }
    }

    pub fn square() -> Self {
        Self {
            kind: GammaKind::Square,
            sublinear_scaling: true,
            strict_sublinear_scaling: true,
        }
    }

    pub fn square_then_linear() -> Self {
        Self {
            kind: GammaKind::SquareThenLinear,
            sublinear_scaling: true,
            strict_sublinear_scaling: false,
        }
    }

    pub fn sqrt() -> Self {
        Self {
            kind: GammaKind::Sqrt,
            sublinear_scaling: false,
            strict_sublinear_scaling: false,
        }
    }

    pub fn custom(
        name: impl Into<String>,
        eval: impl Fn(T) -> T + Send + Sync + 'static,
        sublinear_scaling: bool,
        strict_sublinear_scaling: bool,
    ) -> Self {
        Self {
            kind: GammaKind::Custom {
                name: name.into(),
                eval: Arc::new(eval),
            },
            sublinear_scaling,
            strict_sublinear_scaling,
        }
    }

    pub fn kind(&self) -> &GammaKind<T> {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            GammaKind::Linear => "linear".into(),
            GammaKind::Square => "square".into(),
            GammaKind::SquareThenLinear => "xmin1".into(),
            GammaKind::Sqrt => "sqrt".into(),
            GammaKind::Custom { name, .. } => name.clone(),
        }
    }

    pub fn eval(&self, x: T) -> T {
        match &self.kind {
            GammaKind::Linear => x,
            GammaKind::Square => x * x,
            GammaKind::SquareThenLinear => x * x.min(T::one()),
            GammaKind::Sqrt => x.sqrt(),
            GammaKind::Custom { eval, .. } => eval(x),
        }
    }
}

impl<T: Scalar> FromStr for GammaProfile<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "linear" => Ok(Self::linear()),
            "square" => Ok(Self::square()),
            "xmin1" => Ok(Self::square_then_linear()),
            "sqrt" => Ok(Self::sqrt()),
            other => Err(Error::UnknownName {
                kind: "gamma profile",
                name: other.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaReport<T> {
    pub holds: bool,
    pub strict: bool,
    pub worst_violation: T,
}

/// `(t, x)` pairs with `t` in `{0.1, 0.25, 0.5, 0.75, 0.9}` and 20 log-spaced `x` in `[1e-2, 1e2]`.
pub fn default_gamma_samples<T: Scalar>() -> Vec<(T, T)> {
    let ts = [0.1, 0.25, 0.5, 0.75, 0.9];
    let mut out = Vec::new();
    for i in 0..20 {
        let x = 10f64.powf(-2.0 + 4.0 * i as f64 / 19.0);
        for t in ts {
            out.push((lit(t), lit(x)));
        }
    }
    out
}

/// Checks `Gamma(0) = 0` and `Gamma(t x) <= t Gamma(x)` on the samples.
pub fn check_gamma<T: Scalar>(gamma: &GammaProfile<T>, samples: &[(T, T)], tol: T) -> GammaReport<T> {
    let g0 = gamma.eval(T::zero()).abs();
    let mut holds = g0 <= tol;
    let mut strict = holds;
    let mut worst = g0;
    for &(t, x) in samples {
        let lhs = gamma.eval(t * x);
        let rhs = t * gamma.eval(x);
        let eps = tol * (T::one() + lhs.abs() + rhs.abs());
        let diff = lhs - rhs;
        if diff > eps {
            holds = false;
        }
        if diff >= -eps {
            strict = false;
        }
        worst = worst.max(diff);
    }
    GammaReport {
        holds,
        strict: strict && holds,
        worst_violation: worst.max(T::zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_reports() {
        let s = default_gamma_samples::<f64>();
        let r = check_gamma(&GammaProfile::linear(), &s, 1e-12);
        assert!(r.holds && !r.strict);
        let r = check_gamma(&GammaProfile::square(), &s, 1e-12);
        assert!(r.holds && r.strict);
        let r = check_gamma(&GammaProfile::sqrt(), &s, 1e-12);
        assert!(!r.holds);
        let r = check_gamma(&GammaProfile::square_then_linear(), &s, 1e-12);
        assert!(r.holds && !r.strict);
    }

    #[test]
    fn declared_flags_agree() {
        let s = default_gamma_samples::<f64>();
        for name in ["linear", "square", "xmin1", "sqrt"] {
            let g: GammaProfile<f64> = name.parse().unwrap();
            let r = check_gamma(&g, &s, 1e-12);
            assert_eq!(r.holds, g.sublinear_scaling, "{name}");
            assert_eq!(r.strict, g.strict_sublinear_scaling, "{name}");
        }
        assert!("cube".parse::<GammaProfile<f64>>().is_err());
    }

    #[test]
    fn nonzero_at_origin_fails() {
        let g = GammaProfile::<f64>::custom("x+1", |x| x + 1.0, true, false);
        assert!(!check_gamma(&g, &[], 1e-12).holds);
    }
}
