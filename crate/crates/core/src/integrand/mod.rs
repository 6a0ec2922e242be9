//! Bivariate integrands `Psi(s1, s2)` for the Riesz-type functional.
//!
//! Each integrand carries *declared* property flags. The sampling checkers in
//! [`checks`] test the checkable ones; `n_luzin` is declarative only.

mod checks;
mod decompose;
mod gamma;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use checks::{
    check_psi1, check_psi2, check_psi3, default_lattice, default_rectangles, default_triples,
    PropertyReport, Rectangle, ScalingTriple,
};
pub use decompose::{decompose, Decomposition};
pub use gamma::{check_gamma, default_gamma_samples, GammaKind, GammaProfile, GammaReport};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Declared hypotheses of an integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PsiFlags {
    pub vanishes_at_hyperplanes: bool,
    pub supermodular: bool,
    pub strict_supermodular: bool,
    pub psi3: bool,
    pub strict_psi3: bool,
    pub bounded: bool,
    /// Continuous in each variable, so the strip (derivative) path applies directly.
    pub continuous: bool,
    pub n_luzin: bool,
}

pub type PsiFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

#[derive(Clone)]
pub enum IntegrandKind<T> {
    /// `s t`
    Product,
    /// `s^a t^b`, `a, b >= 1`
    PowerProduct { a: T, b: T },
    /// `min(s, t)`
    Min,
    /// `min(s, 1) min(t, 1)`
    CappedProduct,
    /// `1{s >= alpha} 1{t >= beta}`
    Threshold { alpha: T, beta: T },
    /// `Psi(min(s, L), min(t, L))`
    Truncated { inner: Box<Integrand<T>>, level: T },
    Custom { name: String, eval: PsiFn<T> },
}

impl<T: fmt::Debug> fmt::Debug for IntegrandKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Product => write!(f, "Product"),
            Self::PowerProduct { a, b } => write!(f, "PowerProduct({a:?}, {b:?})"),
            Self::Min => write!(f, "Min"),
            Self::CappedProduct => write!(f, "CappedProduct"),
            Self::Threshold { alpha, beta } => write!(f, "Threshold({alpha:?}, {beta:?})"),
            Self::Truncated { inner, level } => write!(f, "Truncated({:?}, {level:?})", inner.kind),
            Self::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Integrand<T> {
    kind: IntegrandKind<T>,
    flags: PsiFlags,
    bound: Option<T>,
}

impl<T: Scalar> Integrand<T> {
    pub fn product() -> Self {
        Self {
            kind: IntegrandKind::Product,
            flags: PsiFlags {
                vanishes_at_hyperplanes: true,
                supermodular: true,
                strict_supermodular: true,
                psi3: true,
                strict_psi3: false,
                bounded: false,
                continuous: true,
                n_luzin: true,
            },
            bound: None,
        }
    }

    pub fn power_product(a: T, b: T) -> Result<Self> {
        if !(a >= T::one() && b >= T::one()) || !a.is_finite() || !b.is_finite() {
            return Err(Error::UnknownName {
                kind: "integrand",
                name: format!("powerprod:{a}:{b} (exponents must be >= 1)"),
            });
        }
        Ok(Self {
            kind: IntegrandKind::PowerProduct { a, b },
            flags: PsiFlags {
                strict_psi3: a > T::one() && b > T::one(),
                ..Self::product().flags
            },
            bound: None,
        })
    }

    pub fn min() -> Self {
        Self {
            kind: IntegrandKind::Min,
            flags: PsiFlags {
                vanishes_at_hyperplanes: true,
                supermodular: true,
                continuous: true,
                n_luzin: true,
                ..PsiFlags::default()
            },
            bound: None,
        }
    }

    pub fn capped_product() -> Self {
        Self {
            kind: IntegrandKind::CappedProduct,
            flags: PsiFlags {
                vanishes_at_hyperplanes: true,
                supermodular: true,
                bounded: true,
                continuous: true,
                n_luzin: true,
                ..PsiFlags::default()
            },
            bound: Some(T::one()),
        }
    }

    pub fn threshold(alpha: T, beta: T) -> Result<Self> {
        if !(alpha > T::zero() && beta > T::zero()) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::UnknownName {
                kind: "integrand",
                name: format!("threshold:{alpha}:{beta} (thresholds must be positive)"),
            });
        }
        Ok(Self {
            kind: IntegrandKind::Threshold { alpha, beta },
            flags: PsiFlags {
                vanishes_at_hyperplanes: true,
                supermodular: true,
                bounded: true,
                ..PsiFlags::default()
            },
            bound: Some(T::one()),
        })
    }

    /// User-supplied integrand. Flags are taken on trust; run the checkers.
    pub fn custom(
        name: impl Into<String>,
        eval: impl Fn(T, T) -> T + Send + Sync + 'static,
        flags: PsiFlags,
        bound: Option<T>,
    ) -> Self {
        Self {
            kind: IntegrandKind::Custom {
                name: name.into(),
                eval: Arc::new(eval),
            },
            flags,
            bound,
        }
    }

    pub fn kind(&self) -> &IntegrandKind<T> {
        &self.kind
    }

    pub fn flags(&self) -> PsiFlags {
        self.flags
    }

    pub fn bound(&self) -> Option<T> {
        self.bound
    }

    /// Name in the command-line syntax.
    pub fn name(&self) -> String {
        match &self.kind {
            IntegrandKind::Product => "product".into(),
            IntegrandKind::PowerProduct { a, b } => format!("powerprod:{a}:{b}"),
            IntegrandKind::Min => "min".into(),
            IntegrandKind::CappedProduct => "cappedprod".into(),
            IntegrandKind::Threshold { alpha, beta } => format!("threshold:{alpha}:{beta}"),
            IntegrandKind::Truncated { inner, level } => format!("trunc:{}:{level}", inner.name()),
            IntegrandKind::Custom { name, .. } => name.clone(),
        }
    }

    pub fn eval(&self, s: T, t: T) -> T {
        match &self.kind {
            IntegrandKind::Product => s * t,
            IntegrandKind::PowerProduct { a, b } => s.powf(*a) * t.powf(*b),
            IntegrandKind::Min => s.min(t),
            IntegrandKind::CappedProduct => s.min(T::one()) * t.min(T::one()),
            IntegrandKind::Threshold { alpha, beta } => {
                if s >= *alpha && t >= *beta {
                    T::one()
                } else {
                    T::zero()
                }
            }
            IntegrandKind::Truncated { inner, level } => inner.eval(s.min(*level), t.min(*level)),
            IntegrandKind::Custom { eval, .. } => eval(s, t),
        }
    }

    /// Closed-form `d Psi / d s2`, where one is known.
    pub fn closed_form_d2(&self, s: T, t: T) -> Option<T> {
        let one_if = |c: bool| if c { T::one() } else { T::zero() };
        match &self.kind {
            IntegrandKind::Product => Some(s),
            IntegrandKind::PowerProduct { a, b } => {
                Some(s.powf(*a) * *b * t.powf(*b - T::one()))
            }
            IntegrandKind::Min => Some(one_if(t < s)),
            IntegrandKind::CappedProduct => Some(s.min(T::one()) * one_if(t < T::one())),
            IntegrandKind::Truncated { inner, level } => {
                if t < *level {
                    inner.closed_form_d2(s.min(*level), t)
                } else {
                    inner.closed_form_d2(s, t).map(|_| T::zero())
                }
            }
            IntegrandKind::Threshold { .. } | IntegrandKind::Custom { .. } => None,
        }
    }
}

impl<T: Scalar> FromStr for Integrand<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName {
            kind: "integrand",
            name: s.to_string(),
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |p: &str| p.parse::<f64>().map(lit::<T>).map_err(|_| unknown());
        match parts.as_slice() {
            ["product"] => Ok(Self::product()),
            ["min"] => Ok(Self::min()),
            ["cappedprod"] => Ok(Self::capped_product()),
            ["powerprod", a, b] => Self::power_product(num(a)?, num(b)?),
            ["threshold", a, b] => Self::threshold(num(a)?, num(b)?),
            _ => Err(unknown()),
        }
    }
}

/// `Psi^L(s1, s2) = Psi(min(s1, L), min(s2, L))`, bounded by `Psi(L, L)`, same declared flags.
pub fn truncate<T: Scalar>(psi: &Integrand<T>, level: T) -> Result<Integrand<T>> {
    if !(level > T::zero()) || !level.is_finite() {
        return Err(Error::InvalidConstraint {
            cap: crate::scalar::to_f64(level),
            mass: 1.0,
        });
    }
    Ok(Integrand {
        kind: IntegrandKind::Truncated {
            inner: Box::new(psi.clone()),
            level,
        },
        flags: PsiFlags {
            bounded: true,
            ..psi.flags
        },
        bound: Some(psi.eval(level, level)),
    })
}

/// `F(s1, u) = d Psi(s1, u) / du`: the closed form when available, otherwise a central
/// difference with step `delta`, falling back to a forward difference when `u - delta < 0`.
pub fn derivative_f<T: Scalar>(psi: &Integrand<T>, s1: T, u: T, delta: T) -> T {
    if let Some(d) = psi.closed_form_d2(s1, u) {
        return d;
    }
    if u - delta < T::zero() {
        (psi.eval(s1, u + delta) - psi.eval(s1, u)) / delta
    } else {
        (psi.eval(s1, u + delta) - psi.eval(s1, u - delta)) / (lit::<T>(2.0) * delta)
    }
}
