//! Factorization of a bounded supermodular integrand through two nondecreasing
//! rectifying maps: `Psi(u, v) = PsiTilde(phi1(u), phi2(v))`.
//!
//! `phi1(u) = Psi(u, V)` and `phi2(v) = Psi(V, v)` for a finite `V` past which
//! `Psi` is constant. `PsiTilde` takes the value of `Psi` on the image points and
//! is linearly interpolated across the gaps between them, clamped outside.

use super::Integrand;
use crate::error::{Error, Result};
use crate::scalar::{to_f64, Scalar};

#[derive(Debug, Clone)]
pub struct Decomposition<T> {
    source: Integrand<T>,
    v_limit: T,
    grid: Vec<T>,
    phi1: Vec<T>,
    phi2: Vec<T>,
    p_nodes: Vec<T>,
    q_nodes: Vec<T>,
    /// `PsiTilde` on `p_nodes x q_nodes`, row-major.
    table: Vec<T>,
    /// Largest difference quotient of `PsiTilde` between adjacent nodes (either axis).
    pub lipschitz_bound: T,
    /// `max |Psi(u, v) - PsiTilde(phi1(u), phi2(v))|` over the tabulation.
    pub residual: T,
}

/// Builds the decomposition on the tabulation `grid` (0 is added if missing).
pub fn decompose<T: Scalar>(psi: &Integrand<T>, grid: &[T], v_limit: T) -> Result<Decomposition<T>> {
    if !psi.flags().bounded {
        return Err(Error::NotBounded(psi.name()));
    }
    let mut grid: Vec<T> = grid.iter().copied().filter(|s| *s >= T::zero()).collect();
    grid.push(T::zero());
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();

    let phi1: Vec<T> = grid.iter().map(|&u| psi.eval(u, v_limit)).collect();
    let phi2: Vec<T> = grid.iter().map(|&v| psi.eval(v_limit, v)).collect();
    for (which, phi) in [(1, &phi1), (2, &phi2)] {
        if let Some(i) = (1..phi.len()).find(|&i| phi[i] < phi[i - 1]) {
            return Err(Error::NonMonotonePhi {
                which,
                at: to_f64(grid[i]),
            });
        }
    }

    let (p_nodes, p_rep) = distinct_with_representative(&grid, &phi1);
    let (q_nodes, q_rep) = distinct_with_representative(&grid, &phi2);
    let mut table = Vec::with_capacity(p_nodes.len() * q_nodes.len());
    for &u in &p_rep {
        for &v in &q_rep {
            table.push(psi.eval(u, v));
        }
    }

    let mut dec = Decomposition {
        source: psi.clone(),
        v_limit,
        grid,
        phi1,
        phi2,
        p_nodes,
        q_nodes,
        table,
        lipschitz_bound: T::zero(),
        residual: T::zero(),
    };
    dec.lipschitz_bound = dec.node_slope();
    dec.residual = dec.tabulation_residual();
    Ok(dec)
}

/// Distinct values of a nondecreasing table and the first argument attaining each.
fn distinct_with_representative<T: Scalar>(args: &[T], vals: &[T]) -> (Vec<T>, Vec<T>) {
    let mut nodes = Vec::new();
    let mut reps = Vec::new();
    for (&a, &v) in args.iter().zip(vals) {
        if nodes.last() != Some(&v) {
            nodes.push(v);
            reps.push(a);
        }
    }
    (nodes, reps)
}

/// Bracketing nodes and interpolation weight; exact hits return weight 0.
fn locate<T: Scalar>(nodes: &[T], x: T) -> (usize, usize, T) {
    let last = nodes.len() - 1;
    if x <= nodes[0] {
        return (0, 0, T::zero());
    }
    if x >= nodes[last] {
        return (last, last, T::zero());
    }
    match nodes.binary_search_by(|n| n.partial_cmp(&x).unwrap()) {
        Ok(i) => (i, i, T::zero()),
        Err(i) => {
            let (lo, hi) = (i - 1, i);
            (lo, hi, (x - nodes[lo]) / (nodes[hi] - nodes[lo]))
        }
    }
}

impl<T: Scalar> Decomposition<T> {
    pub fn source(&self) -> &Integrand<T> {
        &self.source
    }

    pub fn v_limit(&self) -> T {
        self.v_limit
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn phi1_table(&self) -> &[T] {
        &self.phi1
    }

    pub fn phi2_table(&self) -> &[T] {
        &self.phi2
    }

    pub fn p_nodes(&self) -> &[T] {
        &self.p_nodes
    }

    pub fn q_nodes(&self) -> &[T] {
        &self.q_nodes
    }

    pub fn phi1(&self, u: T) -> T {
        self.source.eval(u, self.v_limit)
    }

    pub fn phi2(&self, v: T) -> T {
        self.source.eval(self.v_limit, v)
    }

    fn node(&self, a: usize, b: usize) -> T {
        self.table[a * self.q_nodes.len() + b]
    }

    /// Bilinear interpolation of the node table, clamped to the node range.
    pub fn psi_tilde(&self, p: T, q: T) -> T {
        let (a0, a1, wp) = locate(&self.p_nodes, p);
        let (b0, b1, wq) = locate(&self.q_nodes, q);
        let one = T::one();
        (one - wp) * (one - wq) * self.node(a0, b0)
            + wp * (one - wq) * self.node(a1, b0)
            + (one - wp) * wq * self.node(a0, b1)
            + wp * wq * self.node(a1, b1)
    }

    pub fn reconstruct(&self, u: T, v: T) -> T {
        self.psi_tilde(self.phi1(u), self.phi2(v))
    }

    fn node_slope(&self) -> T {
        let (np, nq) = (self.p_nodes.len(), self.q_nodes.len());
        let mut slope = T::zero();
        for a in 0..np {
            for b in 0..nq {
                if a + 1 < np {
                    let dp = self.p_nodes[a + 1] - self.p_nodes[a];
                    slope = slope.max((self.node(a + 1, b) - self.node(a, b)).abs() / dp);
                }
                if b + 1 < nq {
                    let dq = self.q_nodes[b + 1] - self.q_nodes[b];
                    slope = slope.max((self.node(a, b + 1) - self.node(a, b)).abs() / dq);
                }
            }
        }
        slope
    }

    fn tabulation_residual(&self) -> T {
        let mut worst = T::zero();
        for (i, &u) in self.grid.iter().enumerate() {
            for (j, &v) in self.grid.iter().enumerate() {
                let r = (self.source.eval(u, v) - self.psi_tilde(self.phi1[i], self.phi2[j])).abs();
                worst = worst.max(r);
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::super::{truncate, PsiFlags};
    use super::*;

    fn tabulation(n: usize, top: f64) -> Vec<f64> {
        (0..n).map(|i| top * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn threshold_factors_through_indicators() {
        let psi = Integrand::threshold(1.0, 2.0).unwrap();
        let d = decompose(&psi, &tabulation(50, 4.0), 1e3).unwrap();
        assert_eq!(d.residual, 0.0);
        assert_eq!(d.p_nodes(), &[0.0, 1.0]);
        assert_eq!(d.q_nodes(), &[0.0, 1.0]);
        for (&u, &p) in d.grid().iter().zip(d.phi1_table()) {
            assert_eq!(p, if u >= 1.0 { 1.0 } else { 0.0 });
        }
        for (&v, &q) in d.grid().iter().zip(d.phi2_table()) {
            assert_eq!(q, if v >= 2.0 { 1.0 } else { 0.0 });
        }
        for (p, q) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (0.5, 0.25)] {
            assert_eq!(d.psi_tilde(p, q), p * q);
        }
        assert_eq!(d.lipschitz_bound, 1.0);
    }

    #[test]
    fn capped_product_factors_through_caps() {
        let psi = Integrand::capped_product();
        let d = decompose(&psi, &tabulation(50, 3.0), 1.0).unwrap();
        assert_eq!(d.residual, 0.0);
        for (&u, &p) in d.grid().iter().zip(d.phi1_table()) {
            assert_eq!(p, u.min(1.0));
        }
        assert!(d.lipschitz_bound.is_finite());
        assert!((d.psi_tilde(0.3, 0.7) - 0.21).abs() < 1e-15);
        assert!((d.reconstruct(2.0, 0.5) - psi.eval(2.0, 0.5)).abs() < 1e-15);
    }

    #[test]
    fn zero_integrand() {
        let flags = PsiFlags {
            vanishes_at_hyperplanes: true,
            supermodular: true,
            bounded: true,
            ..PsiFlags::default()
        };
        let psi = Integrand::custom("zero", |_, _| 0.0f64, flags, Some(0.0));
        let d = decompose(&psi, &tabulation(10, 1.0), 10.0).unwrap();
        assert!(d.phi1_table().iter().all(|&x| x == 0.0));
        assert_eq!(d.psi_tilde(0.0, 0.0), 0.0);
        assert_eq!(d.residual, 0.0);
        assert_eq!(d.lipschitz_bound, 0.0);
    }

    #[test]
    fn truncated_product_decomposes() {
        let psi = truncate(&Integrand::product(), 2.0).unwrap();
        let d = decompose(&psi, &tabulation(41, 4.0), 100.0).unwrap();
        assert!(d.residual < 1e-12);
        let g = d.grid();
        for w in d.phi1_table().windows(2) {
            assert!(w[1] >= w[0]);
        }
        assert_eq!(d.phi1(0.0), 0.0);
        assert_eq!(d.phi2(0.0), 0.0);
        // |PsiTilde(t, .) - PsiTilde(s, .)| <= L (t - s) on sampled pairs
        for &a in g {
            for &b in g {
                for &v in g {
                    let (s, t) = (d.phi1(a.min(b)), d.phi1(a.max(b)));
                    let q = d.phi2(v);
                    let lhs = (d.psi_tilde(t, q) - d.psi_tilde(s, q)).abs();
                    assert!(lhs <= d.lipschitz_bound * (t - s) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            decompose(&Integrand::<f64>::product(), &[0.0, 1.0], 10.0),
            Err(Error::NotBounded(_))
        ));
        let flags = PsiFlags {
            bounded: true,
            ..PsiFlags::default()
        };
        let bad = Integrand::custom("dip", |s: f64, t: f64| (s * (2.0 - s)).max(0.0) * t.min(1.0), flags, Some(1.0));
        assert!(matches!(
            decompose(&bad, &tabulation(9, 2.0), 5.0),
            Err(Error::NonMonotonePhi { which: 1, .. })
        ));
    }
}
