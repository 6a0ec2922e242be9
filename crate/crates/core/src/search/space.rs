use crate::error::{Error, Result};
use crate::grid::{ConstraintSpec, Domain, GridFunction};
use crate::rearrange::radial_order;
use crate::scalar::{from_usize, lit, Scalar};

/// Finite slice of the constraint set: every cell takes a value `level * k_i`
/// and the total of the level fractions is at most `m_i`, i.e. the mass is at
/// most that of `m_i` full cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace<T> {
    pub domain: Domain<T>,
    /// Fractions of the cap, ascending, containing 0 and 1.
    pub levels: Vec<T>,
    /// Cell budgets `(m1, m2)`.
    pub masses: (usize, usize),
    /// Integer multiples of the smallest positive level, aligned with `levels`.
    weights: Vec<usize>,
    /// Units per full cell.
    unit_per_cell: usize,
}

impl<T: Scalar> SearchSpace<T> {
    pub fn new(domain: Domain<T>, levels: &[T], masses: (usize, usize)) -> Result<Self> {
        let mut levels = levels.to_vec();
        if levels.iter().any(|l| !(*l >= T::zero() && *l <= T::one())) {
            return Err(Error::InvalidLevels("levels must lie in [0, 1]".into()));
        }
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
        levels.dedup();
        if levels.first() != Some(&T::zero()) || levels.last() != Some(&T::one()) {
            return Err(Error::InvalidLevels("levels must include 0 and 1".into()));
        }
        let unit = levels[1];
        let mut weights = Vec::with_capacity(levels.len());
        for &l in &levels {
            let w = (l / unit).round();
            if (w * unit - l).abs() > lit(1e-9) {
                return Err(Error::InvalidLevels(format!("{l} is not a multiple of {unit}")));
            }
            weights.push(w.to_usize().unwrap_or(0));
        }
        let unit_per_cell = *weights.last().unwrap();
        Ok(Self {
            domain,
            levels,
            masses,
            weights,
            unit_per_cell,
        })
    }

    /// Levels `{0, 1}`.
    pub fn binary(domain: Domain<T>, masses: (usize, usize)) -> Result<Self> {
        Self::new(domain, &[T::zero(), T::one()], masses)
    }

    /// Budgets taken from the ball cell counts `l_i / (k_i h^dim)`.
    pub fn for_constraints(
        domain: Domain<T>,
        levels: &[T],
        c1: &ConstraintSpec<T>,
        c2: &ConstraintSpec<T>,
    ) -> Result<Self> {
        let masses = (c1.ball_cells(&domain)?, c2.ball_cells(&domain)?);
        Self::new(domain, levels, masses)
    }

    pub(crate) fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// Total weight budget for argument `i` (0 or 1).
    pub(crate) fn unit_budget(&self, i: usize) -> usize {
        let m = if i == 0 { self.masses.0 } else { self.masses.1 };
        m * self.unit_per_cell
    }

    /// Checks `m_i k_i h^dim <= l_i` so the slice lies inside the constraint set.
    pub(crate) fn check_constraints(&self, c1: &ConstraintSpec<T>, c2: &ConstraintSpec<T>) -> Result<()> {
        let cell = self.domain.cell_measure();
        for (m, c) in [(self.masses.0, c1), (self.masses.1, c2)] {
            let mass = from_usize::<T>(m) * c.cap * cell;
            if mass > c.mass * (T::one() + lit(1e-12)) {
                return Err(Error::InfeasibleMass {
                    required: mass.to_f64().unwrap_or(f64::NAN),
                    available: c.mass.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    /// `k` on the first `m` cells of the radial order.
    pub fn ball(&self, i: usize, cap: T) -> GridFunction<T> {
        let m = if i == 0 { self.masses.0 } else { self.masses.1 };
        let mut values = vec![T::zero(); self.domain.cell_count()];
        for &cell in radial_order(&self.domain).iter().take(m) {
            values[cell] = cap;
        }
        GridFunction::from_parts_unchecked(self.domain, values)
    }

    /// Number of level assignments with total weight at most `budget`.
    pub(crate) fn count_assignments(&self, budget: usize) -> u128 {
        let cells = self.domain.cell_count();
        // ways[b] = assignments of the processed cells with total weight exactly b
        let mut ways = vec![0u128; budget + 1];
        ways[0] = 1;
        for _ in 0..cells {
            let mut next = vec![0u128; budget + 1];
            for (b, &w) in ways.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                for &lw in &self.weights {
                    if b + lw <= budget {
                        next[b + lw] = next[b + lw].saturating_add(w);
                    }
                }
            }
            ways = next;
        }
        ways.iter().fold(0u128, |a, &w| a.saturating_add(w))
    }

    /// All assignments with total weight at most `budget`, as sparse
    /// `(cell, level index)` lists in lexicographic order.
    pub(crate) fn enumerate(&self, budget: usize) -> Vec<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.enumerate_from(0, budget, &mut current, &mut out);
        out
    }

    fn enumerate_from(
        &self,
        cell: usize,
        budget: usize,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        out.push(current.clone());
        for c in cell..self.domain.cell_count() {
            for (li, &w) in self.weights.iter().enumerate().skip(1) {
                if w <= budget {
                    current.push((c, li));
                    self.enumerate_from(c + 1, budget - w, current, out);
                    current.pop();
                }
            }
        }
    }
}
