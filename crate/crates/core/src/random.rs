//! Seeded instance generators.
//!
//! Dyadic variants produce values with few significant bits, so sums over
//! them are exact in floating point.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{ConstraintSpec, Domain, GridFunction};
use crate::rearrange::schwarz_rearrange;
use crate::riesz::Kernel;
use crate::scalar::{from_usize, lit, Scalar};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Values uniform on `[0, k]`, scaled down if needed so the integral is at most `l`.
pub fn random_feasible<T: Scalar, R: Rng>(rng: &mut R, domain: &Domain<T>, c: &ConstraintSpec<T>) -> GridFunction<T> {
    let values: Vec<T> = (0..domain.cell_count())
        .map(|_| c.cap * lit::<T>(rng.gen::<f64>()))
        .collect();
    let u = GridFunction::from_parts_unchecked(*domain, values);
    let mass = u.integral();
    if mass <= c.mass {
        return u;
    }
    let mut ratio = c.mass / mass;
    loop {
        let scaled = u.values().iter().map(|&v| v * ratio).collect();
        let w = GridFunction::from_parts_unchecked(*domain, scaled);
        if w.integral() <= c.mass {
            return w;
        }
        ratio = ratio * (T::one() - T::epsilon());
    }
}

/// Random function with values `top * i / denom`, `i` uniform in `0..=denom`.
pub fn random_dyadic<T: Scalar, R: Rng>(rng: &mut R, domain: &Domain<T>, top: T, denom: usize) -> GridFunction<T> {
    let values = (0..domain.cell_count())
        .map(|_| top * from_usize::<T>(rng.gen_range(0..=denom)) / from_usize(denom))
        .collect();
    GridFunction::from_parts_unchecked(*domain, values)
}

/// Schwarz rearrangement of [`random_dyadic`], with a random number of zero cells.
pub fn random_schwarz<T: Scalar, R: Rng>(rng: &mut R, domain: &Domain<T>, top: T, denom: usize) -> GridFunction<T> {
    let mut u = random_dyadic(rng, domain, top, denom).into_values();
    let zeros = rng.gen_range(0..domain.cell_count());
    for v in u.iter_mut().take(zeros) {
        *v = T::zero();
    }
    schwarz_rearrange(&GridFunction::from_parts_unchecked(*domain, u))
}

/// Nonincreasing step kernel with `pieces` levels. Breaks are multiples of
/// `1/4` below `max_radius` and values are multiples of `1/16` in `(0, 1]`.
pub fn random_step_kernel<T: Scalar, R: Rng>(rng: &mut R, pieces: usize, max_radius: T) -> Result<Kernel<T>> {
    let quarter = lit::<T>(0.25);
    let slots = (max_radius / quarter).floor().to_usize().unwrap_or(1).max(pieces);
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, slots, pieces.saturating_sub(1))
        .into_iter()
        .map(|i| i + 1)
        .collect();
    cuts.sort_unstable();
    let mut levels: Vec<usize> = (0..pieces).map(|_| rng.gen_range(1..=16)).collect();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    let breaks = cuts.iter().map(|&i| from_usize::<T>(i) * quarter).collect();
    let values = levels
        .iter()
        .map(|&l| from_usize::<T>(l) / lit(16.0))
        .collect();
    Kernel::step(breaks, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::is_feasible;
    use crate::rearrange::is_schwarz_symmetric;

    #[test]
    fn feasible_and_reproducible() {
        let d = Domain::new(1, 8.0, 64).unwrap();
        let c = ConstraintSpec::new(1.0, 4.0).unwrap();
        for seed in 0..50 {
            let u = random_feasible(&mut seeded(seed), &d, &c);
            assert!(is_feasible(&u, &c, 0.0));
            assert_eq!(u, random_feasible(&mut seeded(seed), &d, &c));
        }
    }

    #[test]
    fn schwarz_and_step_generators() {
        let d = Domain::new(1, 4.0, 32).unwrap();
        let mut rng = seeded(3);
        for _ in 0..50 {
            let u = random_schwarz(&mut rng, &d, 2.0, 8);
            assert!(is_schwarz_symmetric(&u));
            let k = random_step_kernel(&mut rng, 4, 8.0).unwrap();
            assert!(k.nonincreasing);
        }
    }
}
