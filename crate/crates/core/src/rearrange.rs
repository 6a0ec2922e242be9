//! Discrete symmetric decreasing rearrangement and two-point polarization.
//!
//! Everything here is defined relative to [`radial_order`], the canonical
//! ordering of cells by distance from the origin with a lexicographic
//! tie-break on the center coordinates (most negative first).

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::scalar::{lit, to_f64, Scalar};

/// Cells sorted by `|center|`, ties broken lexicographically on the coordinates.
pub fn radial_order<T: Scalar>(domain: &Domain<T>) -> Vec<usize> {
    let keys: Vec<(T, [T; 2])> = (0..domain.cell_count())
        .map(|c| {
            let p = domain.center(c);
            (p[0] * p[0] + p[1] * p[1], p)
        })
        .collect();
    let mut order: Vec<usize> = (0..domain.cell_count()).collect();
    order.sort_by(|&a, &b| {
        let (ra, pa) = keys[a];
        let (rb, pb) = keys[b];
        ra.partial_cmp(&rb)
            .unwrap_or(Ordering::Equal)
            .then(pa[0].partial_cmp(&pb[0]).unwrap_or(Ordering::Equal))
            .then(pa[1].partial_cmp(&pb[1]).unwrap_or(Ordering::Equal))
    });
    order
}

/// Discrete `A*`: the first `#A` cells of the radial order. Positive values count as members.
pub fn set_rearrange<T: Scalar>(mask: &GridFunction<T>) -> GridFunction<T> {
    let domain = *mask.domain();
    let m = mask.values().iter().filter(|&&v| v > T::zero()).count();
    let mut values = vec![T::zero(); domain.cell_count()];
    for &cell in radial_order(&domain).iter().take(m) {
        values[cell] = T::one();
    }
    GridFunction::from_parts_unchecked(domain, values)
}

/// Discrete `u*`: the values of `u` sorted descending and laid out along the radial order.
pub fn schwarz_rearrange<T: Scalar>(u: &GridFunction<T>) -> GridFunction<T> {
    let domain = *u.domain();
    let mut sorted = u.values().to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    let mut values = vec![T::zero(); domain.cell_count()];
    for (&cell, v) in radial_order(&domain).iter().zip(sorted) {
        values[cell] = v;
    }
    GridFunction::from_parts_unchecked(domain, values)
}

/// True iff the values are nonincreasing along the radial order (exact comparison).
pub fn is_schwarz_symmetric<T: Scalar>(u: &GridFunction<T>) -> bool {
    let order = radial_order(u.domain());
    order.windows(2).all(|w| u.get(w[0]) >= u.get(w[1]))
}

/// Axis-aligned reflection `x_axis -> 2c - x_axis` with `c > 0`, so the origin
/// lies strictly on the lower side `H+ = {x_axis < c}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection<T> {
    axis: usize,
    offset: T,
}

/// Image of a cell under a reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partner {
    /// Center lies on the fixed hyperplane.
    Fixed,
    /// Reflected center is the given cell.
    Cell(usize),
    /// Reflected center falls outside the box; the partner value is 0.
    Outside,
}

impl<T: Scalar> Reflection<T> {
    pub fn new(axis: usize, offset: T) -> Result<Self> {
        if axis > 1 {
            return Err(Error::InvalidReflection(format!("axis must be 0 or 1, got {axis}")));
        }
        if !(offset > T::zero()) || !offset.is_finite() {
            return Err(Error::InvalidReflection(format!(
                "plane offset must be positive, got {offset}"
            )));
        }
        Ok(Self { axis, offset })
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    /// `sigma(x)`.
    pub fn apply(&self, mut p: [T; 2]) -> [T; 2] {
        p[self.axis] = lit::<T>(2.0) * self.offset - p[self.axis];
        p
    }

    /// Lattice shift `2c / h`, or an error when the plane does not permute cell centers.
    fn lattice_shift(&self, domain: &Domain<T>) -> Result<isize> {
        if self.axis >= domain.dim() {
            return Err(Error::InvalidReflection(format!(
                "axis {} out of range for dimension {}",
                self.axis,
                domain.dim()
            )));
        }
        let h = domain.cell_width();
        let steps = lit::<T>(2.0) * self.offset / h;
        let rounded = steps.round();
        if (steps - rounded).abs() > lit(1e-9) {
            return Err(Error::ReflectionNotGridCompatible {
                offset: to_f64(self.offset),
                width: to_f64(h),
            });
        }
        Ok(rounded.to_isize().unwrap_or(0))
    }

    /// Partner of `cell` and whether `cell` lies in `H+`.
    pub fn partner(&self, domain: &Domain<T>, cell: usize) -> Result<(Partner, bool)> {
        let shift = self.lattice_shift(domain)?;
        Ok(partner_of(domain, self.axis, shift, cell))
    }
}

fn partner_of<T: Scalar>(domain: &Domain<T>, axis: usize, shift: isize, cell: usize) -> (Partner, bool) {
    let n = domain.cells_per_axis() as isize;
    let mut idx = domain.multi_index(cell).map(|i| i as isize);
    // center_i + center_j = 2c  <=>  i + j = 2c/h + N - 1
    let j = shift + n - 1 - idx[axis];
    let i = idx[axis];
    match i.cmp(&j) {
        Ordering::Equal => (Partner::Fixed, false),
        ord => {
            idx[axis] = j;
            let partner = domain
                .flat_index(idx)
                .map_or(Partner::Outside, Partner::Cell);
            (partner, ord == Ordering::Less)
        }
    }
}

/// Two-point rearrangement: the larger value of each reflected pair moves to the
/// origin side. Cells whose partner lies outside the box pair with an implicit 0.
pub fn polarize<T: Scalar>(u: &GridFunction<T>, sigma: &Reflection<T>) -> Result<GridFunction<T>> {
    let domain = *u.domain();
    let shift = sigma.lattice_shift(&domain)?;
    let mut values = u.values().to_vec();
    for cell in 0..domain.cell_count() {
        let (partner, upper_side) = partner_of(&domain, sigma.axis, shift, cell);
        if !upper_side {
            continue;
        }
        match partner {
            Partner::Cell(p) => {
                let (a, b) = (u.get(cell), u.get(p));
                values[cell] = a.max(b);
                values[p] = a.min(b);
            }
            // max(u(x), 0) = u(x): nothing moves.
            Partner::Outside | Partner::Fixed => {}
        }
    }
    Ok(GridFunction::from_parts_unchecked(domain, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d1(a: f64, n: usize) -> Domain<f64> {
        Domain::new(1, a, n).unwrap()
    }

    fn f(d: Domain<f64>, v: &[f64]) -> GridFunction<f64> {
        GridFunction::new(d, v.to_vec()).unwrap()
    }

    #[test]
    fn radial_order_1d() {
        let d = d1(2.5, 5);
        let centers: Vec<f64> = radial_order(&d).iter().map(|&c| d.center(c)[0]).collect();
        assert_eq!(centers, vec![0.0, -1.0, 1.0, -2.0, 2.0]);
        assert_eq!(radial_order(&d1(1.0, 1)), vec![0]);
    }

    #[test]
    fn radial_order_2d_pure_tie_break() {
        let d = Domain::new(2, 1.0, 2).unwrap();
        let centers: Vec<[f64; 2]> = radial_order(&d).iter().map(|&c| d.center(c)).collect();
        assert_eq!(
            centers,
            vec![[-0.5, -0.5], [-0.5, 0.5], [0.5, -0.5], [0.5, 0.5]]
        );
    }

    #[test]
    fn set_rearrange_examples() {
        let d = d1(2.5, 5);
        assert_eq!(set_rearrange(&GridFunction::zeros(d)).values(), &[0.0; 5]);
        let m = f(d, &[1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(set_rearrange(&m).values(), &[0.0, 1.0, 1.0, 0.0, 0.0]);
        let all = f(d, &[1.0; 5]);
        assert_eq!(set_rearrange(&all).values(), &[1.0; 5]);
    }

    #[test]
    fn schwarz_examples() {
        let d = d1(2.5, 5);
        let u = f(d, &[0.0, 3.0, 1.0, 2.0, 0.0]);
        let s = schwarz_rearrange(&u);
        assert_eq!(s.values(), &[0.0, 2.0, 3.0, 1.0, 0.0]);
        assert!(is_schwarz_symmetric(&s));
        assert_eq!(schwarz_rearrange(&s), s);
        let c = f(d, &[2.0; 5]);
        assert_eq!(schwarz_rearrange(&c), c);
    }

    #[test]
    fn symmetry_check() {
        let d = d1(2.5, 5);
        assert!(!is_schwarz_symmetric(&f(d, &[0.0, 1.0, 0.0, 0.0, 0.0])));
        assert!(is_schwarz_symmetric(&GridFunction::zeros(d)));
    }

    #[test]
    fn polarize_pairs_across_plane() {
        // centers -2..2, plane at 0.5: 0<->1, -1<->2, -2<->3 (outside)
        let d = d1(2.5, 5);
        let u = f(d, &[0.0, 4.0, 1.0, 3.0, 2.0]);
        let s = Reflection::new(0, 0.5).unwrap();
        assert_eq!(polarize(&u, &s).unwrap().values(), &[0.0, 4.0, 3.0, 1.0, 2.0]);
    }

    #[test]
    fn polarize_fixed_plane_and_outside_partner() {
        // centers -1.5..1.5, plane at 0.5: cell 0.5 fixed, -0.5<->1.5, -1.5 unpaired
        let d = d1(2.0, 4);
        let u = f(d, &[4.0, 1.0, 3.0, 2.0]);
        let s = Reflection::new(0, 0.5).unwrap();
        assert_eq!(s.partner(&d, 2).unwrap().0, Partner::Fixed);
        assert_eq!(s.partner(&d, 0).unwrap(), (Partner::Outside, true));
        assert_eq!(polarize(&u, &s).unwrap().values(), &[4.0, 2.0, 3.0, 1.0]);
    }

    #[test]
    fn polarize_fixes_symmetric_and_constant() {
        let d = d1(3.5, 7);
        let u = schwarz_rearrange(&f(d, &[0.5, 3.0, 1.0, 2.0, 0.0, 7.0, 1.0]));
        let c = f(d, &[1.5; 7]);
        for k in 1..8 {
            let s = Reflection::new(0, 0.5 * k as f64).unwrap();
            assert_eq!(polarize(&u, &s).unwrap(), u);
            assert_eq!(polarize(&c, &s).unwrap(), c);
        }
    }

    #[test]
    fn reflection_errors() {
        let d = d1(2.5, 5);
        assert!(Reflection::new(0, 0.0).is_err());
        assert!(Reflection::new(0, -1.0).is_err());
        let s = Reflection::new(0, 0.3).unwrap();
        assert!(matches!(
            polarize(&GridFunction::zeros(d), &s),
            Err(Error::ReflectionNotGridCompatible { .. })
        ));
        let s = Reflection::new(1, 0.5).unwrap();
        assert!(polarize(&GridFunction::zeros(d), &s).is_err());
    }

    #[test]
    fn reflection_is_involution() {
        let s = Reflection::new(1, 0.75).unwrap();
        let p = [0.3, -1.25];
        assert_eq!(s.apply(s.apply(p)), p);
    }

    #[test]
    fn polarize_2d_axis_one() {
        let d = Domain::new(2, 1.0, 2).unwrap();
        // cells (row, col): centers (-.5,-.5) (-.5,.5) (.5,-.5) (.5,.5); plane y = 0.5 is fixed
        let s = Reflection::new(1, 0.5).unwrap();
        let u = f(d, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(polarize(&u, &s).unwrap(), u);
        let s = Reflection::new(0, 1.0).unwrap();
        // rows pair 0 <-> 3 (outside), row 1 (x=.5) <-> x=1.5 (outside)
        assert_eq!(polarize(&u, &s).unwrap(), u);
    }
}
