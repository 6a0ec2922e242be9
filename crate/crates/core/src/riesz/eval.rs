//! Two independent evaluations of `J(f, g) = sum_x sum_y Psi(f(x), g(y)) j(|x - y|) h^{2 dim}`.
//!
//! The naive double sum is the reference. The layer-cake path slices `g` into
//! strips between consecutive distinct values and integrates the increments
//! of `Psi` in its second slot against the potential of each superlevel set.
//!
//! Outer sums may run on several threads; per-row partial sums are always
//! combined serially in row-major order, so results do not depend on the
//! worker count.

use rayon::prelude::*;

use super::kernel::{Kernel, KernelTable};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::integrand::{decompose, Decomposition, Integrand};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Summation {
    /// Plain left-to-right accumulation.
    #[default]
    Plain,
    /// Kahan-compensated accumulation, for large grids.
    Compensated,
}

#[derive(Default, Clone, Copy)]
struct Acc<T> {
    sum: T,
    carry: T,
}

impl<T: Scalar> Acc<T> {
    #[inline]
    fn add(&mut self, x: T, mode: Summation) {
        match mode {
            Summation::Plain => self.sum = self.sum + x,
            Summation::Compensated => {
                let y = x - self.carry;
                let t = self.sum + y;
                self.carry = (t - self.sum) - y;
                self.sum = t;
            }
        }
    }
}

fn fold_rows<T: Scalar>(rows: &[T], mode: Summation) -> T {
    let mut acc = Acc::default();
    for &r in rows {
        acc.add(r, mode);
    }
    acc.sum
}

fn same_domain<T: Scalar>(f: &GridFunction<T>, g: &GridFunction<T>) -> Result<()> {
    if f.domain() != g.domain() {
        return Err(Error::DomainMismatch);
    }
    Ok(())
}

/// Naive `O(M^2)` double sum.
pub fn riesz_eval<T: Scalar>(
    f: &GridFunction<T>,
    g: &GridFunction<T>,
    psi: &Integrand<T>,
    kernel: &Kernel<T>,
) -> Result<T> {
    riesz_eval_with(f, g, psi, kernel, Summation::Plain)
}

pub fn riesz_eval_with<T: Scalar>(
    f: &GridFunction<T>,
    g: &GridFunction<T>,
    psi: &Integrand<T>,
    kernel: &Kernel<T>,
    mode: Summation,
) -> Result<T> {
    same_domain(f, g)?;
    let domain = f.domain();
    let table = KernelTable::new(domain, kernel);
    let (fv, gv) = (f.values(), g.values());
    let rows: Vec<T> = (0..fv.len())
        .into_par_iter()
        .map(|x| {
            let fx = fv[x];
            let mut acc = Acc::default();
            for (y, &gy) in gv.iter().enumerate() {
                acc.add(psi.eval(fx, gy) * table.between(x, y), mode);
            }
            acc.sum
        })
        .collect();
    let h_d = domain.cell_measure();
    Ok(fold_rows(&rows, mode) * h_d * h_d)
}

/// `nu(x) = sum_y j(|x - y|) h(y) h^dim`.
pub fn potential<T: Scalar>(hfun: &GridFunction<T>, kernel: &Kernel<T>) -> Result<GridFunction<T>> {
    let domain = *hfun.domain();
    let table = KernelTable::new(&domain, kernel);
    let hv = hfun.values();
    let h_d = domain.cell_measure();
    let values: Vec<T> = (0..hv.len())
        .into_par_iter()
        .map(|x| {
            let mut acc = T::zero();
            for (y, &v) in hv.iter().enumerate() {
                acc = acc + table.between(x, y) * v;
            }
            acc * h_d
        })
        .collect();
    GridFunction::new(domain, values)
}

/// Strip evaluation against an arbitrary second-slot function `psi(s, t)`.
fn strip_eval<T: Scalar>(
    fv: &[T],
    gv: &[T],
    table: &KernelTable<T>,
    h_d: T,
    psi: &(dyn Fn(T, T) -> T + Sync),
) -> T {
    // s_0 = 0 < s_1 < ... < s_K: distinct positive values of g.
    let mut levels: Vec<T> = gv.iter().copied().filter(|&v| v > T::zero()).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    levels.insert(0, T::zero());
    let level_of: Vec<usize> = gv
        .iter()
        .map(|v| levels.partition_point(|l| l < v))
        .collect();

    let rows: Vec<T> = (0..fv.len())
        .into_par_iter()
        .map(|x| {
            // bucket[m] = sum of j over {y : g(y) = s_m}; suffix sums give the
            // potential of the superlevel set {g >= s_m}.
            let mut bucket = vec![T::zero(); levels.len()];
            for (y, &m) in level_of.iter().enumerate() {
                bucket[m] = bucket[m] + table.between(x, y);
            }
            let fx = fv[x];
            let mut potential = T::zero();
            let mut acc = T::zero();
            for m in (0..levels.len()).rev() {
                potential = potential + bucket[m];
                let increment = if m == 0 {
                    psi(fx, T::zero())
                } else {
                    psi(fx, levels[m]) - psi(fx, levels[m - 1])
                };
                acc = acc + potential * h_d * increment;
            }
            acc
        })
        .collect();
    fold_rows(&rows, Summation::Plain) * h_d
}

/// Layer-cake evaluation for integrands continuous in each variable.
pub fn layercake_eval<T: Scalar>(
    f: &GridFunction<T>,
    g: &GridFunction<T>,
    psi: &Integrand<T>,
    kernel: &Kernel<T>,
) -> Result<T> {
    same_domain(f, g)?;
    if !psi.flags().continuous {
        return Err(Error::NotDifferentiable(psi.name()));
    }
    let domain = f.domain();
    let table = KernelTable::new(domain, kernel);
    Ok(strip_eval(
        f.values(),
        g.values(),
        &table,
        domain.cell_measure(),
        &|s, t| psi.eval(s, t),
    ))
}

/// Layer-cake evaluation of `PsiTilde(phi1(f), phi2(g))` for a decomposed integrand.
pub fn layercake_eval_decomposed<T: Scalar>(
    f: &GridFunction<T>,
    g: &GridFunction<T>,
    dec: &Decomposition<T>,
    kernel: &Kernel<T>,
) -> Result<T> {
    same_domain(f, g)?;
    let domain = f.domain();
    let table = KernelTable::new(domain, kernel);
    let p: Vec<T> = f.values().iter().map(|&u| dec.phi1(u)).collect();
    let q: Vec<T> = g.values().iter().map(|&v| dec.phi2(v)).collect();
    Ok(strip_eval(&p, &q, &table, domain.cell_measure(), &|s, t| {
        dec.psi_tilde(s, t)
    }))
}

/// Decomposition of `psi` tabulated on the values taken by `f` and `g`, with the
/// limit evaluated at their joint maximum.
pub fn decompose_for<T: Scalar>(
    f: &GridFunction<T>,
    g: &GridFunction<T>,
    psi: &Integrand<T>,
) -> Result<Decomposition<T>> {
    let mut tab: Vec<T> = f.values().iter().chain(g.values()).copied().collect();
    tab.sort_by(|a, b| a.partial_cmp(b).unwrap());
    tab.dedup();
    let v_limit = f.max_value().max(g.max_value());
    decompose(psi, &tab, v_limit)
}

/// Layer-cake path with routing: continuous integrands go straight through the
/// strips; discontinuous bounded ones are decomposed first.
pub fn layercake_auto<T: Scalar>(
    f: &GridFunction<T>,
    g: &GridFunction<T>,
    psi: &Integrand<T>,
    kernel: &Kernel<T>,
) -> Result<T> {
    if psi.flags().continuous {
        layercake_eval(f, g, psi, kernel)
    } else {
        let dec = decompose_for(f, g, psi)?;
        layercake_eval_decomposed(f, g, &dec, kernel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Domain;

    fn d3() -> Domain<f64> {
        Domain::new(1, 1.5, 3).unwrap()
    }

    fn gf(d: Domain<f64>, v: &[f64]) -> GridFunction<f64> {
        GridFunction::new(d, v.to_vec()).unwrap()
    }

    #[test]
    fn single_term_example() {
        // f at center 0, g = 2 at center 1, Psi = st, j = e^{-r}
        let d = d3();
        let f = gf(d, &[0.0, 1.0, 0.0]);
        let g = gf(d, &[0.0, 0.0, 2.0]);
        let psi = Integrand::product();
        let k = Kernel::exp();
        let expect = 2.0 * (-1.0f64).exp();
        assert_eq!(riesz_eval(&f, &g, &psi, &k).unwrap(), expect);
        let lc = layercake_eval(&f, &g, &psi, &k).unwrap();
        assert!((lc - expect).abs() < 1e-15);
    }

    #[test]
    fn vanishing_second_argument() {
        let d = d3();
        let f = gf(d, &[1.0, 2.0, 3.0]);
        let z = GridFunction::zeros(d);
        for psi in [Integrand::product(), Integrand::min(), Integrand::capped_product()] {
            assert_eq!(riesz_eval(&f, &z, &psi, &Kernel::exp()).unwrap(), 0.0);
            assert_eq!(layercake_eval(&f, &z, &psi, &Kernel::exp()).unwrap(), 0.0);
        }
    }

    #[test]
    fn constant_kernel_factorizes() {
        let d = Domain::new(1, 2.5, 5).unwrap();
        let f = gf(d, &[0.5, 1.0, 0.0, 2.0, 0.25]);
        let g = gf(d, &[1.0, 0.0, 3.0, 0.5, 0.5]);
        let j = riesz_eval(&f, &g, &Integrand::product(), &Kernel::constant(1.0)).unwrap();
        assert!((j - f.integral() * g.integral()).abs() < 1e-12);
    }

    #[test]
    fn potential_examples() {
        let d = d3();
        let e = (-1.0f64).exp();
        let nu = potential(&gf(d, &[0.0, 1.0, 0.0]), &Kernel::exp()).unwrap();
        assert_eq!(nu.values(), &[e, 1.0, e]);
        let z = potential(&GridFunction::zeros(d), &Kernel::exp()).unwrap();
        assert_eq!(z.values(), &[0.0; 3]);
        let h = gf(d, &[0.5, 1.0, 2.0]);
        let c = potential(&h, &Kernel::constant(1.0)).unwrap();
        assert!(c.values().iter().all(|&v| v == h.integral()));
    }

    #[test]
    fn threshold_needs_decomposition() {
        let d = d3();
        let f = gf(d, &[1.0, 2.0, 0.0]);
        let g = gf(d, &[2.0, 3.0, 1.0]);
        let th = Integrand::threshold(1.0, 2.0).unwrap();
        assert!(matches!(
            layercake_eval(&f, &g, &th, &Kernel::exp()),
            Err(Error::NotDifferentiable(_))
        ));
        let naive = riesz_eval(&f, &g, &th, &Kernel::exp()).unwrap();
        let routed = layercake_auto(&f, &g, &th, &Kernel::exp()).unwrap();
        assert!((naive - routed).abs() < 1e-14);
    }

    #[test]
    fn compensated_agrees_with_plain() {
        let d = Domain::<f64>::new(2, 2.0, 12).unwrap();
        let f = GridFunction::from_fn(d, |[x, y]| (1.0 - x * x - y * y).max(0.0)).unwrap();
        let psi = Integrand::power_product(2.0, 2.0).unwrap();
        let a = riesz_eval(&f, &f, &psi, &Kernel::exp()).unwrap();
        let b = riesz_eval_with(&f, &f, &psi, &Kernel::exp(), Summation::Compensated).unwrap();
        assert!((a - b).abs() <= 1e-13 * a);
    }

    #[test]
    fn domain_mismatch() {
        let f = GridFunction::<f64>::zeros(d3());
        let g = GridFunction::zeros(Domain::new(1, 2.5, 5).unwrap());
        assert_eq!(
            riesz_eval(&f, &g, &Integrand::product(), &Kernel::exp()),
            Err(Error::DomainMismatch)
        );
    }

    #[test]
    fn single_precision_eval() {
        let d = Domain::<f32>::new(1, 1.5, 3).unwrap();
        let f = GridFunction::new(d, vec![0.0f32, 1.0, 0.0]).unwrap();
        let g = GridFunction::new(d, vec![0.0f32, 0.0, 2.0]).unwrap();
        let j = riesz_eval(&f, &g, &Integrand::product(), &Kernel::exp()).unwrap();
        assert!((j - 2.0 * (-1.0f32).exp()).abs() < 1e-6);
    }
}
