//! Piecewise-constant nonnegative functions on a regular lattice over `[-A, A]^dim`.
//!
//! All integrals are exact cell sums, so every inequality the toolkit checks is
//! an exact discrete statement up to floating point rounding.

use crate::error::{Error, Result};
use crate::rearrange::radial_order;
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// Regular lattice of `cells_per_axis^dim` cells covering `[-halfwidth, halfwidth]^dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain<T> {
    dim: usize,
    halfwidth: T,
    cells_per_axis: usize,
}

impl<T: Scalar> Domain<T> {
    pub fn new(dim: usize, halfwidth: T, cells_per_axis: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidDomain(format!("dim must be 1 or 2, got {dim}")));
        }
        if !(halfwidth > T::zero()) || !halfwidth.is_finite() {
            return Err(Error::InvalidDomain(format!(
                "halfwidth must be positive, got {halfwidth}"
            )));
        }
        if cells_per_axis == 0 {
            return Err(Error::InvalidDomain("cells_per_axis must be at least 1".into()));
        }
        Ok(Self {
            dim,
            halfwidth,
            cells_per_axis,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfwidth(&self) -> T {
        self.halfwidth
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    /// Cell width `h = 2A / N`.
    pub fn cell_width(&self) -> T {
        lit::<T>(2.0) * self.halfwidth / from_usize(self.cells_per_axis)
    }

    /// Measure of one cell, `h^dim`.
    pub fn cell_measure(&self) -> T {
        self.cell_width().powi(self.dim as i32)
    }

    pub fn cell_count(&self) -> usize {
        self.cells_per_axis.pow(self.dim as u32)
    }

    /// Measure of the whole box.
    pub fn measure(&self) -> T {
        self.cell_measure() * from_usize(self.cell_count())
    }

    /// Per-axis lattice index of a cell; the second entry is 0 in one dimension.
    pub fn multi_index(&self, cell: usize) -> [usize; 2] {
        if self.dim == 1 {
            [cell, 0]
        } else {
            [cell / self.cells_per_axis, cell % self.cells_per_axis]
        }
    }

    /// Inverse of [`Domain::multi_index`]; `None` when outside the box.
    pub fn flat_index(&self, idx: [isize; 2]) -> Option<usize> {
        let n = self.cells_per_axis as isize;
        let inside = |i: isize| (0..n).contains(&i);
        if self.dim == 1 {
            inside(idx[0]).then_some(idx[0] as usize)
        } else {
            (inside(idx[0]) && inside(idx[1])).then_some((idx[0] * n + idx[1]) as usize)
        }
    }

    /// Center coordinate along one axis for lattice index `i`: `-A + (i + 1/2) h`.
    pub fn axis_center(&self, i: usize) -> T {
        -self.halfwidth + (from_usize::<T>(i) + lit(0.5)) * self.cell_width()
    }

    /// Cell center; the second coordinate is 0 in one dimension.
    pub fn center(&self, cell: usize) -> [T; 2] {
        let [i, j] = self.multi_index(cell);
        if self.dim == 1 {
            [self.axis_center(i), T::zero()]
        } else {
            [self.axis_center(i), self.axis_center(j)]
        }
    }

    /// Euclidean norm of the cell center.
    pub fn radius(&self, cell: usize) -> T {
        let [x, y] = self.center(cell);
        x.hypot(y)
    }
}

/// Nonnegative piecewise-constant function, one value per cell in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    domain: Domain<T>,
    values: Vec<T>,
}

impl<T: Scalar> GridFunction<T> {
    pub fn new(domain: Domain<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != domain.cell_count() {
            return Err(Error::ValueCount {
                expected: domain.cell_count(),
                got: values.len(),
            });
        }
        if let Some((index, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= T::zero()) || !v.is_finite())
        {
            return Err(Error::NegativeValue {
                index,
                value: to_f64(v),
            });
        }
        Ok(Self { domain, values })
    }

    pub fn zeros(domain: Domain<T>) -> Self {
        Self {
            values: vec![T::zero(); domain.cell_count()],
            domain,
        }
    }

    pub fn constant(domain: Domain<T>, value: T) -> Result<Self> {
        Self::new(domain, vec![value; domain.cell_count()])
    }

    /// Samples `f` at every cell center.
    pub fn from_fn(domain: Domain<T>, f: impl Fn([T; 2]) -> T) -> Result<Self> {
        let values = (0..domain.cell_count()).map(|c| f(domain.center(c))).collect();
        Self::new(domain, values)
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, cell: usize) -> T {
        self.values[cell]
    }

    /// `sum(values) * h^dim`.
    pub fn integral(&self) -> T {
        self.values.iter().copied().sum::<T>() * self.domain.cell_measure()
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(T::zero(), T::max)
    }

    /// Applies a pointwise map; fails if the result is negative anywhere.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(self.domain, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, alpha: T) -> Result<Self> {
        self.map(|v| v * alpha)
    }

    /// Indicator of `{u >= t}` as a 0/1 function.
    pub fn superlevel(&self, t: T) -> Self {
        let values = self
            .values
            .iter()
            .map(|&v| if v >= t { T::one() } else { T::zero() })
            .collect();
        Self {
            domain: self.domain,
            values,
        }
    }

    /// Translates by a lattice vector; `None` if any nonzero value leaves the box.
    pub fn shifted(&self, shift: [isize; 2]) -> Option<Self> {
        let mut out = vec![T::zero(); self.values.len()];
        for (cell, &v) in self.values.iter().enumerate() {
            if v == T::zero() {
                continue;
            }
            let [i, j] = self.domain.multi_index(cell);
            let target = [i as isize + shift[0], j as isize + shift[1]];
            let target = if self.domain.dim() == 1 {
                [target[0], 0]
            } else {
                target
            };
            out[self.domain.flat_index(target)?] = v;
        }
        Some(Self {
            domain: self.domain,
            values: out,
        })
    }

    pub(crate) fn from_parts_unchecked(domain: Domain<T>, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), domain.cell_count());
        Self { domain, values }
    }
}

/// Exact discrete integral of `u`.
pub fn integral<T: Scalar>(u: &GridFunction<T>) -> T {
    u.integral()
}

/// Pointwise cap `k` and mass budget `l` for one argument of the functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintSpec<T> {
    pub cap: T,
    pub mass: T,
}

impl<T: Scalar> ConstraintSpec<T> {
    pub fn new(cap: T, mass: T) -> Result<Self> {
        if !(cap > T::zero() && mass > T::zero()) || !cap.is_finite() || !mass.is_finite() {
            return Err(Error::InvalidConstraint {
                cap: to_f64(cap),
                mass: to_f64(mass),
            });
        }
        Ok(Self { cap, mass })
    }

    /// Measure `l / k` of the maximizing ball.
    pub fn ball_measure(&self) -> T {
        self.mass / self.cap
    }

    /// Number of cells of the ball on `domain`, checking representability.
    pub fn ball_cells(&self, domain: &Domain<T>) -> Result<usize> {
        let measure = self.ball_measure();
        let available = domain.measure();
        let slack = lit::<T>(1e-9) * T::one().max(available);
        if measure > available + slack {
            return Err(Error::InfeasibleMass {
                required: to_f64(measure),
                available: to_f64(available),
            });
        }
        let cells = measure / domain.cell_measure();
        let rounded = cells.round();
        if (cells - rounded).abs() > lit::<T>(1e-9) * T::one().max(cells) {
            return Err(Error::NonRepresentableMass {
                measure: to_f64(measure),
                cell: to_f64(domain.cell_measure()),
            });
        }
        Ok(rounded.to_usize().unwrap_or(0).min(domain.cell_count()))
    }
}

/// `max(u) <= k + tol` and `integral(u) <= l + tol`.
pub fn is_feasible<T: Scalar>(u: &GridFunction<T>, c: &ConstraintSpec<T>, tol: T) -> bool {
    u.max_value() <= c.cap + tol && u.integral() <= c.mass + tol
}

/// `k * 1_B` where `B` is the first `l / (k h^dim)` cells of the radial order.
pub fn ball_indicator<T: Scalar>(domain: &Domain<T>, c: &ConstraintSpec<T>) -> Result<GridFunction<T>> {
    let m = c.ball_cells(domain)?;
    let mut values = vec![T::zero(); domain.cell_count()];
    for &cell in radial_order(domain).iter().take(m) {
        values[cell] = c.cap;
    }
    Ok(GridFunction::from_parts_unchecked(*domain, values))
}
