use super::{Pair, SearchOptions};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::grid::{ball_indicator, is_feasible, ConstraintSpec, GridFunction};
use crate::integrand::Integrand;
use crate::riesz::{riesz_eval, Kernel, KernelTable};
use crate::scalar::{from_usize, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct AscentOutcome<T> {
    pub final_pair: Pair<T>,
    pub value: T,
    /// Functional value after each accepted move, starting with the start value.
    pub trace: Vec<T>,
    pub iterations: usize,
    pub started_at_ball: bool,
    /// Only meaningful when `started_at_ball`.
    pub improving_move_found_at_ball: bool,
}

/// A transfer of `delta` from cell `from` to cell `to` of one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Move<T> {
    which: usize,
    from: usize,
    to: usize,
    delta: T,
    gain: T,
}

pub fn exchange_ascent<T: Scalar>(
    start: (&GridFunction<T>, &GridFunction<T>),
    c1: &ConstraintSpec<T>,
    c2: &ConstraintSpec<T>,
    psi: &Integrand<T>,
    kernel: &Kernel<T>,
    max_iters: usize,
) -> Result<AscentOutcome<T>> {
    exchange_ascent_with(start, c1, c2, psi, kernel, max_iters, &SearchOptions::default())
}

pub fn exchange_ascent_with<T: Scalar>(
    start: (&GridFunction<T>, &GridFunction<T>),
    c1: &ConstraintSpec<T>,
    c2: &ConstraintSpec<T>,
    psi: &Integrand<T>,
    kernel: &Kernel<T>,
    max_iters: usize,
    opts: &SearchOptions<T>,
) -> Result<AscentOutcome<T>> {
    let (f, g) = start;
    if f.domain() != g.domain() {
        return Err(Error::DomainMismatch);
    }
    let feas = Tolerances::<T>::default().feas;
    if !is_feasible(f, c1, feas) || !is_feasible(g, c2, feas) {
        return Err(Error::InfeasibleStart);
    }
    let domain = *f.domain();
    let started_at_ball = match (ball_indicator(&domain, c1), ball_indicator(&domain, c2)) {
        (Ok(b1), Ok(b2)) => &b1 == f && &b2 == g,
        _ => false,
    };
    let table = KernelTable::new(&domain, kernel);
    let scale = domain.cell_measure() * domain.cell_measure();
    let caps = [c1.cap, c2.cap];
    let mut vals = [f.values().to_vec(), g.values().to_vec()];
    let mut value = riesz_eval(f, g, psi, kernel)?;
    let mut trace = vec![value];
    let mut improving_at_ball = false;
    let mut iterations = 0;

    while iterations < max_iters {
        let Some(m) = best_move(&vals, caps, psi, &table, opts.schedule_depth) else {
            break;
        };
        let gain = m.gain * scale;
        if !(gain > opts.tie * value.abs()) {
            break;
        }
        if iterations == 0 && started_at_ball {
            improving_at_ball = true;
        }
        vals[m.which][m.from] = vals[m.which][m.from] - m.delta;
        vals[m.which][m.to] = vals[m.which][m.to] + m.delta;
        let pair = pair_of(&domain, &vals);
        value = riesz_eval(&pair.0, &pair.1, psi, kernel)?;
        trace.push(value);
        iterations += 1;
    }
    if max_iters == 0 && started_at_ball {
        improving_at_ball = best_move(&vals, caps, psi, &table, opts.schedule_depth)
            .is_some_and(|m| m.gain * scale > opts.tie * value.abs());
    }
    Ok(AscentOutcome {
        final_pair: pair_of(&domain, &vals),
        value,
        trace,
        iterations,
        started_at_ball,
        improving_move_found_at_ball: improving_at_ball,
    })
}

fn pair_of<T: Scalar>(domain: &crate::grid::Domain<T>, vals: &[Vec<T>; 2]) -> Pair<T> {
    (
        GridFunction::from_parts_unchecked(*domain, vals[0].clone()),
        GridFunction::from_parts_unchecked(*domain, vals[1].clone()),
    )
}

/// Unscaled change of the double sum when cell `x` of argument `which`
/// takes the value `v`.
fn cell_change<T: Scalar>(
    vals: &[Vec<T>; 2],
    which: usize,
    x: usize,
    v: T,
    psi: &Integrand<T>,
    table: &KernelTable<T>,
) -> T {
    let own = vals[which][x];
    let other = &vals[1 - which];
    let eval = |a: T, b: T| if which == 0 { psi.eval(a, b) } else { psi.eval(b, a) };
    other
        .iter()
        .enumerate()
        .map(|(y, &w)| (eval(v, w) - eval(own, w)) * table.between(x, y))
        .sum()
}

fn best_move<T: Scalar>(
    vals: &[Vec<T>; 2],
    caps: [T; 2],
    psi: &Integrand<T>,
    table: &KernelTable<T>,
    depth: usize,
) -> Option<Move<T>> {
    let cells = vals[0].len();
    let mut best: Option<Move<T>> = None;
    for which in 0..2 {
        for s in 1..=depth {
            let delta = caps[which] / from_usize::<T>(1 << s);
            let take: Vec<Option<T>> = (0..cells)
                .map(|x| {
                    let v = vals[which][x];
                    (v >= delta).then(|| cell_change(vals, which, x, v - delta, psi, table))
                })
                .collect();
            let give: Vec<Option<T>> = (0..cells)
                .map(|x| {
                    let v = vals[which][x];
                    (v + delta <= caps[which]).then(|| cell_change(vals, which, x, v + delta, psi, table))
                })
                .collect();
            for from in 0..cells {
                let Some(a) = take[from] else { continue };
                for to in 0..cells {
                    let Some(b) = give[to] else { continue };
                    if from == to {
                        continue;
                    }
                    let gain = a + b;
                    if best.is_none_or(|m| gain > m.gain) {
                        best = Some(Move {
                            which,
                            from,
                            to,
                            delta,
                            gain,
                        });
                    }
                }
            }
        }
    }
    best
}
