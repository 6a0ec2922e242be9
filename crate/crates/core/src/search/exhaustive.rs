//! Exact maximization of the functional over a finite search space.
//!
//! For each first argument `f` the per-cell gains
//! `W_f[y][b] = sum_x Psi(f(x), level_b) j(|x - y|)` are tabulated, so that
//! `J(f, g) = h^{2 dim} sum_y W_f[y][g(y)]` is separable in `g`. The second
//! argument is then either enumerated outright (`FullPairs`) or maximized
//! exactly by a knapsack recursion over cells (`Knapsack`), which visits every
//! `g` within the tie band of the optimum.

use rayon::prelude::*;

use super::space::SearchSpace;
use super::{canonical_classes, MaximizerCertificate, SearchOptions, Strategy};
use crate::error::{Error, Result};
use crate::grid::{ConstraintSpec, GridFunction};
use crate::integrand::Integrand;
use crate::riesz::{riesz_eval, Kernel, KernelTable};
use crate::scalar::{lit, Scalar};

type Sparse = Vec<(usize, usize)>;

struct Problem<'a, T> {
    space: &'a SearchSpace<T>,
    table: KernelTable<T>,
    /// `psi_tab[a][b] = Psi(level_a k1, level_b k2)`
    psi_tab: Vec<Vec<T>>,
    caps: (T, T),
    cells: usize,
}

impl<T: Scalar> Problem<'_, T> {
    /// `W_f` as a dense `cells x levels` array.
    fn gains(&self, f: &Sparse) -> Vec<T> {
        let nl = self.space.levels.len();
        let zero_row_live = self.psi_tab[0].iter().any(|&v| v != T::zero());
        let mut level_of = vec![0usize; self.cells];
        for &(x, a) in f {
            level_of[x] = a;
        }
        let sources: Vec<(usize, usize)> = (0..self.cells)
            .filter(|&x| level_of[x] != 0 || zero_row_live)
            .map(|x| (x, level_of[x]))
            .collect();
        let mut w = vec![T::zero(); self.cells * nl];
        for y in 0..self.cells {
            for b in 0..nl {
                let mut acc = T::zero();
                for &(x, a) in &sources {
                    acc = acc + self.psi_tab[a][b] * self.table.between(x, y);
                }
                w[y * nl + b] = acc;
            }
        }
        w
    }

    fn value(&self, w: &[T], base: T, g: &Sparse) -> T {
        let nl = self.space.levels.len();
        let mut acc = base;
        for &(y, b) in g {
            acc = acc + (w[y * nl + b] - w[y * nl]);
        }
        acc
    }

    fn to_function(&self, s: &Sparse, which: usize) -> GridFunction<T> {
        let cap = if which == 0 { self.caps.0 } else { self.caps.1 };
        let mut values = vec![T::zero(); self.cells];
        for &(x, l) in s {
            values[x] = self.space.levels[l] * cap;
        }
        GridFunction::from_parts_unchecked(self.space.domain, values)
    }
}

fn band<T: Scalar>(best: T, tie: T) -> T {
    best - tie * best.abs()
}

/// Per-`f` scan: candidates within the local band and the best value below it.
struct Local<T> {
    top: T,
    keep: Vec<(usize, T)>,
    below: Option<T>,
}

fn merge_below<T: Scalar>(a: Option<T>, b: T) -> Option<T> {
    Some(a.map_or(b, |a| a.max(b)))
}

pub fn exhaustive_max<T: Scalar>(
    space: &SearchSpace<T>,
    c1: &ConstraintSpec<T>,
    c2: &ConstraintSpec<T>,
    psi: &Integrand<T>,
    kernel: &Kernel<T>,
) -> Result<MaximizerCertificate<T>> {
    exhaustive_max_with(space, c1, c2, psi, kernel, &SearchOptions::default())
}

pub fn exhaustive_max_with<T: Scalar>(
    space: &SearchSpace<T>,
    c1: &ConstraintSpec<T>,
    c2: &ConstraintSpec<T>,
    psi: &Integrand<T>,
    kernel: &Kernel<T>,
    opts: &SearchOptions<T>,
) -> Result<MaximizerCertificate<T>> {
    space.check_constraints(c1, c2)?;
    let cells = space.domain.cell_count();
    let n1 = space.count_assignments(space.unit_budget(0));
    let n2 = space.count_assignments(space.unit_budget(1));
    let full_cost = n1.saturating_mul(n2);
    let knap_cost = n1.saturating_mul((cells * space.levels.len()) as u128);
    let strategy = match opts.strategy {
        Strategy::Auto if full_cost <= opts.budget => Strategy::FullPairs,
        Strategy::Auto => Strategy::Knapsack,
        s => s,
    };
    let cost = if strategy == Strategy::FullPairs {
        full_cost
    } else {
        knap_cost
    };
    if cost > opts.budget {
        return Err(Error::BudgetExceeded {
            required: cost,
            budget: opts.budget,
        });
    }

    let psi_tab = space
        .levels
        .iter()
        .map(|&a| {
            space
                .levels
                .iter()
                .map(|&b| psi.eval(a * c1.cap, b * c2.cap))
                .collect()
        })
        .collect();
    let problem = Problem {
        space,
        table: KernelTable::new(&space.domain, kernel),
        psi_tab,
        caps: (c1.cap, c2.cap),
        cells,
    };
    let fs = space.enumerate(space.unit_budget(0));
    let h_d = space.domain.cell_measure();
    let scale = h_d * h_d;

    let (argmax, runner_up) = match strategy {
        Strategy::FullPairs => full_pairs(&problem, &fs, opts.tie),
        _ => knapsack(&problem, &fs, opts.tie),
    };

    let best_value = argmax
        .iter()
        .map(|(_, _, v)| *v)
        .fold(T::neg_infinity(), T::max)
        * scale;
    let argmax_list: Vec<(GridFunction<T>, GridFunction<T>)> = argmax
        .iter()
        .map(|(f, g, _)| (problem.to_function(f, 0), problem.to_function(g, 1)))
        .collect();
    let ball_pair = (space.ball(0, c1.cap), space.ball(1, c2.cap));
    let ball_value = riesz_eval(&ball_pair.0, &ball_pair.1, psi, kernel)?;
    let ball_is_max = argmax_list.contains(&ball_pair);
    let translation_classes = canonical_classes(&argmax_list);
    Ok(MaximizerCertificate {
        best_value,
        argmax_list,
        ball_value,
        ball_is_max,
        translation_classes,
        runner_up: runner_up.map(|r| r * scale),
        ball_pair,
        strategy,
        evaluations: cost,
    })
}

fn full_pairs<T: Scalar>(problem: &Problem<'_, T>, fs: &[Sparse], tie: T) -> (Vec<(Sparse, Sparse, T)>, Option<T>) {
    let gs = problem.space.enumerate(problem.space.unit_budget(1));
    let nl = problem.space.levels.len();
    let locals: Vec<Local<T>> = fs
        .par_iter()
        .map(|f| {
            let w = problem.gains(f);
            let base = (0..problem.cells).map(|y| w[y * nl]).sum::<T>();
            let top = gs
                .iter()
                .map(|g| problem.value(&w, base, g))
                .fold(T::neg_infinity(), T::max);
            let cut = band(top, tie);
            let mut keep = Vec::new();
            let mut below = None;
            for (gi, g) in gs.iter().enumerate() {
                let v = problem.value(&w, base, g);
                if v >= cut {
                    keep.push((gi, v));
                } else {
                    below = merge_below(below, v);
                }
            }
            Local { top, keep, below }
        })
        .collect();

    let best = locals.iter().map(|l| l.top).fold(T::neg_infinity(), T::max);
    let cut = band(best, tie);
    let mut out = Vec::new();
    let mut below: Option<T> = None;
    for (fi, local) in locals.into_iter().enumerate() {
        if let Some(b) = local.below {
            below = merge_below(below, b);
        }
        for (gi, v) in local.keep {
            if v >= cut {
                out.push((fs[fi].clone(), gs[gi].clone(), v));
            } else {
                below = merge_below(below, v);
            }
        }
    }
    (out, below)
}

/// `table[y][c]`: the largest gain over cells `y..` with `c` weight units left.
fn solve<T: Scalar>(w: &[T], weights: &[usize], cells: usize, cap: usize) -> Vec<T> {
    let nl = weights.len();
    let mut table = vec![T::zero(); (cells + 1) * (cap + 1)];
    for y in (0..cells).rev() {
        for c in 0..=cap {
            let mut m = T::neg_infinity();
            for b in 0..nl {
                if weights[b] <= c {
                    let gain = w[y * nl + b] - w[y * nl];
                    m = m.max(gain + table[(y + 1) * (cap + 1) + c - weights[b]]);
                }
            }
            table[y * (cap + 1) + c] = m;
        }
    }
    table
}

fn knapsack<T: Scalar>(problem: &Problem<'_, T>, fs: &[Sparse], tie: T) -> (Vec<(Sparse, Sparse, T)>, Option<T>) {
    let space = problem.space;
    let nl = space.levels.len();
    let cap = space.unit_budget(1);
    let weights = space.weights();
    let cells = problem.cells;
    let prepare = |f: &Sparse| {
        let w = problem.gains(f);
        let base = (0..cells).map(|y| w[y * nl]).sum::<T>();
        let table = solve(&w, weights, cells, cap);
        (w, base, table)
    };

    let tops: Vec<T> = fs
        .par_iter()
        .map(|f| {
            let (_, base, table) = prepare(f);
            base + table[cap]
        })
        .collect();
    let best = tops.iter().copied().fold(T::neg_infinity(), T::max);
    let cut = band(best, tie);
    // the bound and the leaf value are summed in different orders
    let slack = T::epsilon() * lit::<T>(64.0) * (T::one() + best.abs());

    let found: Vec<(Vec<(Sparse, Sparse, T)>, Option<T>)> = fs
        .par_iter()
        .zip(&tops)
        .filter(|(_, &t)| t >= cut - slack)
        .map(|(f, _)| {
            let (w, base, table) = prepare(f);
            let dfs = Dfs {
                w: &w,
                table: &table,
                weights,
                cap,
                cells,
            };
            let mut hits = Vec::new();
            dfs.walk(0, cap, T::zero(), &mut Vec::new(), &mut Collect {
                floor: cut - base - slack,
                on_leaf: |g: &Sparse| {
                    let v = problem.value(&w, base, g);
                    if v >= cut {
                        hits.push((f.clone(), g.clone(), v));
                    }
                },
            });
            let mut second = RunnerUp {
                base,
                cut,
                slack,
                best: None,
                value: |g: &Sparse| problem.value(&w, base, g),
            };
            dfs.walk(0, cap, T::zero(), &mut Vec::new(), &mut second);
            (hits, second.best)
        })
        .collect();

    let mut below = tops.iter().copied().filter(|&t| t < cut).fold(None, merge_below);
    let mut out = Vec::new();
    for (hits, second) in found {
        out.extend(hits);
        if let Some(s) = second {
            below = merge_below(below, s);
        }
    }
    (out, below)
}

trait Visitor<T> {
    /// Branches whose bound on the remaining gain falls below this are pruned.
    fn floor(&self) -> T;
    fn leaf(&mut self, g: &Sparse);
}

struct Collect<T, F> {
    floor: T,
    on_leaf: F,
}

impl<T: Scalar, F: FnMut(&Sparse)> Visitor<T> for Collect<T, F> {
    fn floor(&self) -> T {
        self.floor
    }

    fn leaf(&mut self, g: &Sparse) {
        (self.on_leaf)(g)
    }
}

/// Best value strictly below the tie band, by branch and bound.
struct RunnerUp<T, F> {
    base: T,
    cut: T,
    slack: T,
    best: Option<T>,
    value: F,
}

impl<T: Scalar, F: Fn(&Sparse) -> T> Visitor<T> for RunnerUp<T, F> {
    fn floor(&self) -> T {
        match self.best {
            Some(b) => b - self.base + self.slack,
            None => T::neg_infinity(),
        }
    }

    fn leaf(&mut self, g: &Sparse) {
        let v = (self.value)(g);
        if v < self.cut {
            self.best = merge_below(self.best, v);
        }
    }
}

struct Dfs<'a, T> {
    w: &'a [T],
    table: &'a [T],
    weights: &'a [usize],
    cap: usize,
    cells: usize,
}

impl<T: Scalar> Dfs<'_, T> {
    fn walk(&self, y: usize, c: usize, acc: T, g: &mut Sparse, visitor: &mut dyn Visitor<T>) {
        if y == self.cells {
            visitor.leaf(g);
            return;
        }
        let nl = self.weights.len();
        for b in 0..nl {
            if self.weights[b] > c {
                continue;
            }
            let gain = self.w[y * nl + b] - self.w[y * nl];
            let rest = c - self.weights[b];
            if acc + gain + self.table[(y + 1) * (self.cap + 1) + rest] < visitor.floor() {
                continue;
            }
            if b != 0 {
                g.push((y, b));
            }
            self.walk(y + 1, rest, acc + gain, g, visitor);
            if b != 0 {
                g.pop();
            }
        }
    }
}
