use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::Domain;
use crate::scalar::{from_usize, lit, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind<T> {
    /// `e^{-r}`
    Exp,
    /// `(1 + r)^{-p}`, `p > 0`
    Algebraic { p: T },
    /// `1{r < R}`
    Cutoff { radius: T },
    /// `j = c`
    Constant { value: T },
    /// Piecewise constant: `values[i]` on `[breaks[i-1], breaks[i])`, with
    /// `values.len() == breaks.len() + 1`.
    Step { breaks: Vec<T>, values: Vec<T> },
}

/// Radial profile `j(r)`, `r >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel<T> {
    kind: KernelKind<T>,
    pub nonincreasing: bool,
    pub strictly_decreasing: bool,
}

impl<T: Scalar> Kernel<T> {
    pub fn exp() -> Self {
        Self {
            kind: KernelKind::Exp,
            nonincreasing: true,
            strictly_decreasing: true,
        }
    }

    pub fn algebraic(p: T) -> Result<Self> {
        if !(p > T::zero()) || !p.is_finite() {
            return Err(Error::UnknownName {
                kind: "kernel",
                name: format!("algebraic:{p} (exponent must be positive)"),
            });
        }
        Ok(Self {
            kind: KernelKind::Algebraic { p },
            nonincreasing: true,
            strictly_decreasing: true,
        })
    }

    pub fn cutoff(radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::UnknownName {
                kind: "kernel",
                name: format!("cutoff:{radius} (radius must be positive)"),
            });
        }
        Ok(Self {
            kind: KernelKind::Cutoff { radius },
            nonincreasing: true,
            strictly_decreasing: false,
        })
    }

    pub fn constant(value: T) -> Self {
        Self {
            kind: KernelKind::Constant { value },
            nonincreasing: true,
            strictly_decreasing: false,
        }
    }

    /// Step profile; monotonicity flags are derived from the values.
    pub fn step(breaks: Vec<T>, values: Vec<T>) -> Result<Self> {
        let sorted = breaks.windows(2).all(|w| w[0] < w[1]);
        if values.len() != breaks.len() + 1 || !sorted {
            return Err(Error::UnknownName {
                kind: "kernel",
                name: "step (need increasing breaks and one more value than breaks)".into(),
            });
        }
        let nonincreasing = values.windows(2).all(|w| w[0] >= w[1]);
        Ok(Self {
            kind: KernelKind::Step { breaks, values },
            nonincreasing,
            strictly_decreasing: false,
        })
    }

    pub fn kind(&self) -> &KernelKind<T> {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            KernelKind::Exp => "exp".into(),
            KernelKind::Algebraic { p } => format!("algebraic:{p}"),
            KernelKind::Cutoff { radius } => format!("cutoff:{radius}"),
            KernelKind::Constant { value } => format!("const:{value}"),
            KernelKind::Step { breaks, .. } => format!("step:{}", breaks.len() + 1),
        }
    }

    pub fn eval(&self, r: T) -> T {
        match &self.kind {
            KernelKind::Exp => (-r).exp(),
            KernelKind::Algebraic { p } => (T::one() + r).powf(-*p),
            KernelKind::Cutoff { radius } => {
                if r < *radius {
                    T::one()
                } else {
                    T::zero()
                }
            }
            KernelKind::Constant { value } => *value,
            KernelKind::Step { breaks, values } => {
                let i = breaks.partition_point(|&b| b <= r);
                values[i]
            }
        }
    }

    /// Samples `j(r1) >= j(r2)` for consecutive sorted radii.
    pub fn is_nonincreasing_on(&self, radii: &[T]) -> bool {
        let mut r = radii.to_vec();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        r.windows(2).all(|w| self.eval(w[0]) >= self.eval(w[1]))
    }
}

impl<T: Scalar> FromStr for Kernel<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName {
            kind: "kernel",
            name: s.to_string(),
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |p: &str| p.parse::<f64>().map(lit::<T>).map_err(|_| unknown());
        match parts.as_slice() {
            ["exp"] => Ok(Self::exp()),
            ["algebraic", p] => Self::algebraic(num(p)?),
            ["cutoff", r] => Self::cutoff(num(r)?),
            ["const"] => Ok(Self::constant(T::one())),
            ["const", c] => Ok(Self::constant(num(c)?)),
            _ => Err(unknown()),
        }
    }
}

/// `j(|x - y|)` tabulated by absolute lattice offset, so each distinct distance
/// is evaluated once.
#[derive(Debug, Clone)]
pub(crate) struct KernelTable<T> {
    n: usize,
    dim: usize,
    values: Vec<T>,
}

impl<T: Scalar> KernelTable<T> {
    pub(crate) fn new(domain: &Domain<T>, kernel: &Kernel<T>) -> Self {
        let n = domain.cells_per_axis();
        let h = domain.cell_width();
        let values = if domain.dim() == 1 {
            (0..n).map(|d| kernel.eval(from_usize::<T>(d) * h)).collect()
        } else {
            let mut v = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    let r = h * from_usize::<T>(a * a + b * b).sqrt();
                    v.push(kernel.eval(r));
                }
            }
            v
        };
        Self {
            n,
            dim: domain.dim(),
            values,
        }
    }

    #[inline]
    pub(crate) fn between(&self, x: usize, y: usize) -> T {
        if self.dim == 1 {
            self.values[x.abs_diff(y)]
        } else {
            let (xi, xj) = (x / self.n, x % self.n);
            let (yi, yj) = (y / self.n, y % self.n);
            self.values[xi.abs_diff(yi) * self.n + xj.abs_diff(yj)]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_profiles() {
        let e = Kernel::<f64>::exp();
        assert_eq!(e.eval(0.0), 1.0);
        let a: Kernel<f64> = "algebraic:2".parse().unwrap();
        assert_eq!(a.eval(1.0), 0.25);
        let c: Kernel<f64> = "cutoff:1.5".parse().unwrap();
        assert_eq!(c.eval(1.0), 1.0);
        assert_eq!(c.eval(1.5), 0.0);
        assert!(!c.strictly_decreasing);
        let k: Kernel<f64> = "const".parse().unwrap();
        assert_eq!(k.eval(7.0), 1.0);
        assert!("algebraic:-1".parse::<Kernel<f64>>().is_err());
        assert!("gauss".parse::<Kernel<f64>>().is_err());
    }

    #[test]
    fn nonincreasing_flags_hold_on_samples() {
        let radii: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        for name in ["exp", "algebraic:2", "algebraic:0.5", "cutoff:2", "const:3"] {
            let k: Kernel<f64> = name.parse().unwrap();
            assert!(k.nonincreasing && k.is_nonincreasing_on(&radii), "{name}");
        }
    }

    #[test]
    fn step_kernel() {
        let k = Kernel::step(vec![1.0, 2.0], vec![1.0, 0.5, 0.25]).unwrap();
        assert_eq!(k.eval(0.0), 1.0);
        assert_eq!(k.eval(1.0), 0.5);
        assert_eq!(k.eval(5.0), 0.25);
        assert!(k.nonincreasing);
        let up = Kernel::step(vec![1.0], vec![0.0, 1.0]).unwrap();
        assert!(!up.nonincreasing);
        assert!(Kernel::step(vec![2.0, 1.0], vec![0.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn table_matches_center_distances() {
        let d = Domain::new(2, 1.5, 3).unwrap();
        let k = Kernel::<f64>::exp();
        let t = KernelTable::new(&d, &k);
        for x in 0..9 {
            for y in 0..9 {
                let (p, q) = (d.center(x), d.center(y));
                let r = (p[0] - q[0]).hypot(p[1] - q[1]);
                assert!((t.between(x, y) - k.eval(r)).abs() < 1e-15);
            }
        }
    }
}
