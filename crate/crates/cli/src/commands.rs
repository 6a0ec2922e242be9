use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context as _, Result};
use rieszcheck::config::potential_constant;
use rieszcheck::integrand::{
    check_gamma, check_psi1, check_psi2, check_psi3, default_gamma_samples, default_lattice, default_rectangles, default_triples,
};
use rieszcheck::random::{random_feasible, random_schwarz, random_step_kernel, seeded};
use rieszcheck::riesz::{layercake_auto, radial_monotonicity};
use rieszcheck::search::{
    exchange_ascent_with, exhaustive_max_with, uniqueness_check, SearchOptions, Strategy,
};
use rieszcheck::{
    decompose as build_decomposition, hl_bound, is_schwarz_symmetric, polarize as polarize_fn, potential,
    riesz_eval, schwarz_rearrange, truncate, verify_chain, ConstraintSpec, Domain, GammaProfile,
    GridFunction, Instance, Integrand64, Kernel64, Reflection, SearchSpace,
};

use crate::sink::{flag, instance_hash, num, nums, text_hash, Sink};
use crate::{Check, Context, EvalPath, MaximizeArgs, Mode, StrategyArg, VerifyArgs};

fn load(path: &Path) -> Result<Instance<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Instance::parse(&text).with_context(|| format!("{}", path.display()))
}

fn psi(name: &str) -> Result<Integrand64> {
    Ok(name.parse()?)
}

fn kernel(name: &str) -> Result<Kernel64> {
    Ok(name.parse()?)
}

fn sink(ctx: &Context, subcommand: &str) -> Result<Sink> {
    Sink::new(ctx.output.as_deref(), subcommand, &ctx.tol)
}

fn functions(inst: &Instance<f64>) -> Vec<(&'static str, &GridFunction<f64>)> {
    [("f", &inst.f), ("g", &inst.g)]
        .into_iter()
        .filter_map(|(n, u)| u.as_ref().map(|u| (n, u)))
        .collect()
}

pub fn rearrange(ctx: &Context, path: &Path) -> Result<bool> {
    let inst = load(path)?;
    let hash = instance_hash(&inst);
    let mut out = sink(ctx, "rearrange")?;
    out.header(&["function", "values"])?;
    for (name, u) in functions(&inst) {
        out.row(&hash, &[format!("{name}*"), nums(schwarz_rearrange(u).values())])?;
    }
    out.finish()?;
    Ok(true)
}

pub fn polarize(ctx: &Context, path: &Path, axis: usize, offset: f64) -> Result<bool> {
    let inst = load(path)?;
    let hash = instance_hash(&inst);
    let sigma = Reflection::new(axis, offset)?;
    let mut out = sink(ctx, "polarize")?;
    out.header(&["function", "axis", "offset", "values"])?;
    for (name, u) in functions(&inst) {
        let p = polarize_fn(u, &sigma)?;
        out.row(
            &hash,
            &[format!("{name}^sigma"), axis.to_string(), num(offset), nums(p.values())],
        )?;
    }
    out.finish()?;
    Ok(true)
}

pub fn eval(ctx: &Context, path: &Path, psi_name: &str, kernel_name: &str, which: EvalPath) -> Result<bool> {
    let inst = load(path)?;
    let (psi, kernel) = (psi(psi_name)?, kernel(kernel_name)?);
    let (f, g) = (inst.f()?, inst.g()?);
    let (label, value) = match which {
        EvalPath::Naive => ("naive", riesz_eval(f, g, &psi, &kernel)?),
        EvalPath::Layercake => ("layercake", layercake_auto(f, g, &psi, &kernel)?),
    };
    let mut out = sink(ctx, "eval")?;
    out.header(&["psi", "kernel", "path", "value"])?;
    out.row(
        &instance_hash(&inst),
        &[psi.name(), kernel.name(), label.into(), num(value)],
    )?;
    out.finish()?;
    Ok(true)
}

pub fn check_integrand(ctx: &Context, name: &str) -> Result<bool> {
    let psi = psi(name)?;
    let lattice = default_lattice::<f64>();
    let flags = psi.flags();
    let reports = [
        ("psi1", flags.vanishes_at_hyperplanes, check_psi1(&psi, &lattice, ctx.tol.prop)),
        ("psi2", flags.supermodular, check_psi2(&psi, &default_rectangles(&lattice), ctx.tol.prop)),
        ("psi3", flags.psi3, check_psi3(&psi, &default_triples(&lattice), ctx.tol.prop)),
    ];
    let hash = text_hash(&format!("check-integrand psi={}", psi.name()));
    let mut out = sink(ctx, "check-integrand")?;
    out.header(&["psi", "property", "declared", "holds", "strict", "worst_violation", "cases"])?;
    let mut ok = true;
    for (prop, declared, r) in reports {
        ok &= !declared || r.holds;
        out.row(
            &hash,
            &[
                psi.name(),
                prop.into(),
                flag(declared),
                flag(r.holds),
                flag(r.strict),
                num(r.worst_violation),
                r.cases.to_string(),
            ],
        )?;
    }
    out.finish()?;
    Ok(ok)
}

pub fn decompose(ctx: &Context, name: &str, vlimit: f64, points: usize) -> Result<bool> {
    if points < 2 || !(vlimit > 0.0) {
        bail!("need --points >= 2 and a positive --vlimit");
    }
    let psi = match psi(name)? {
        p if p.flags().bounded => p,
        p => truncate(&p, vlimit)?,
    };
    let grid: Vec<f64> = (0..points)
        .map(|i| vlimit * i as f64 / (points - 1) as f64)
        .collect();
    let dec = build_decomposition(&psi, &grid, vlimit)?;
    let hash = text_hash(&format!(
        "decompose psi={} vlimit={} points={}",
        psi.name(),
        num(vlimit),
        points
    ));
    let mut out = sink(ctx, "decompose")?;
    out.header(&["psi", "vlimit", "kind", "x", "value"])?;
    let base = [psi.name(), num(vlimit)];
    for (kind, table) in [("phi1", dec.phi1_table()), ("phi2", dec.phi2_table())] {
        for (&x, &v) in dec.grid().iter().zip(table) {
            out.row(&hash, &[base[0].clone(), base[1].clone(), kind.into(), num(x), num(v)])?;
        }
    }
    for (kind, v) in [("residual", dec.residual), ("lipschitz", dec.lipschitz_bound)] {
        out.row(&hash, &[base[0].clone(), base[1].clone(), kind.into(), String::new(), num(v)])?;
    }
    out.finish()?;
    Ok(dec.residual <= ctx.tol.prop && dec.lipschitz_bound.is_finite())
}

/// Instances for `verify`: the given file, or `n` seeded random ones.
fn cases(args: &VerifyArgs, seed: u64) -> Result<Vec<Instance<f64>>> {
    if let Some(path) = &args.instance {
        return Ok(vec![load(path)?]);
    }
    let n = args.random.unwrap_or(0);
    let d = Domain::new(args.dim, args.halfwidth, args.cells)?;
    let c = ConstraintSpec::new(args.cap, args.mass)?;
    let mut rng = seeded(seed);
    Ok((0..n)
        .map(|_| {
            let (f, g) = match args.check {
                Check::Lemma21 => (random_schwarz(&mut rng, &d, args.cap, 8), GridFunction::zeros(d)),
                Check::Lemma23 => {
                    let big = ConstraintSpec::new(args.cap, d.measure() * args.cap).unwrap();
                    let u = schwarz_rearrange(&random_feasible(&mut rng, &d, &big));
                    (u, random_feasible(&mut rng, &d, &c))
                }
                _ => (random_feasible(&mut rng, &d, &c), random_feasible(&mut rng, &d, &c)),
            };
            Instance {
                domain: d,
                f: Some(f),
                g: Some(g),
                c1: Some(c),
                c2: Some(c),
            }
        })
        .collect())
}

pub fn verify(ctx: &Context, args: &VerifyArgs) -> Result<bool> {
    let insts = cases(args, ctx.seed)?;
    if matches!(args.check, Check::Lemma23) {
        let gamma: GammaProfile<f64> = args.gamma.parse()?;
        if !check_gamma(&gamma, &default_gamma_samples(), ctx.tol.prop).holds {
            bail!("gamma `{}` violates Gamma(t x) <= t Gamma(x)", gamma.name());
        }
    }
    let (name, columns): (&str, &[&str]) = match args.check {
        Check::Chain => (
            "verify-chain",
            &[
                "case", "psi", "kernel", "j_ff", "j_star", "j_half", "j_ball", "slack_1", "slack_2",
                "slack_3", "rel_slack_1", "rel_slack_2", "rel_slack_3", "tolerance", "pass",
            ],
        ),
        Check::Lemma21 => (
            "verify-lemma21",
            &["case", "kernel", "violations", "max_violation", "tolerance", "pass"],
        ),
        Check::Lemma23 => ("verify-lemma23", &["case", "gamma", "lhs", "rhs", "pass"]),
        Check::Truncation => (
            "verify-truncation",
            &["case", "psi", "kernel", "level", "value", "full", "pass"],
        ),
    };
    let mut out = sink(ctx, name)?;
    out.header(columns)?;
    let mut rng = seeded(ctx.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut passed = 0;
    for (case, inst) in insts.iter().enumerate() {
        let hash = instance_hash(inst);
        let ok = match args.check {
            Check::Chain => {
                let (psi, kernel) = (psi(&args.psi)?, kernel(args.kernel.as_deref().unwrap_or("exp"))?);
                let r = verify_chain(inst.f()?, inst.g()?, &inst.c1()?, &inst.c2()?, &psi, &kernel, &ctx.tol)?;
                let rel = r.relative_slacks();
                let mut row = vec![case.to_string(), psi.name(), kernel.name()];
                row.extend([r.j_ff, r.j_star, r.j_half, r.j_ball].map(num));
                row.extend(r.slacks.map(num));
                row.extend(rel.map(num));
                row.extend([num(r.tolerance), flag(r.holds())]);
                out.row(&hash, &row)?;
                r.holds()
            }
            Check::Lemma21 => {
                let h = inst.f()?;
                if !is_schwarz_symmetric(h) {
                    bail!("lemma21 needs a Schwarz-symmetric f (case {case})");
                }
                let kernel = match (&args.kernel, &args.instance) {
                    (Some(k), _) => kernel(k)?,
                    (None, Some(_)) => kernel("exp")?,
                    (None, None) => random_step_kernel(&mut rng, 1 + case % 5, 2.0 * args.halfwidth)?,
                };
                let nu = potential(h, &kernel)?;
                let m = radial_monotonicity(&nu);
                let d = h.domain();
                let tolerance = if d.dim() == 1 {
                    ctx.tol.prop * nu.max_value()
                } else {
                    potential_constant(kernel.kind()) * d.cell_width()
                };
                let ok = m.max_violation <= tolerance;
                out.row(
                    &hash,
                    &[
                        case.to_string(),
                        kernel.name(),
                        m.violations.to_string(),
                        num(m.max_violation),
                        num(tolerance),
                        flag(ok),
                    ],
                )?;
                ok
            }
            Check::Lemma23 => {
                let gamma: GammaProfile<f64> = args.gamma.parse()?;
                let u = inst.f()?;
                if !is_schwarz_symmetric(u) {
                    bail!("lemma23 needs a Schwarz-symmetric f (case {case})");
                }
                let r = hl_bound(u, &gamma, inst.g()?, &inst.c2()?, &ctx.tol)?;
                out.row(
                    &hash,
                    &[case.to_string(), gamma.name(), num(r.lhs), num(r.rhs), flag(r.holds)],
                )?;
                r.holds
            }
            Check::Truncation => {
                let (psi, kernel) = (psi(&args.psi)?, kernel(args.kernel.as_deref().unwrap_or("exp"))?);
                let (f, g) = (inst.f()?, inst.g()?);
                let full = riesz_eval(f, g, &psi, &kernel)?;
                let top = f.max_value().max(g.max_value());
                let max_level = top.ceil().max(1.0) as usize + 1;
                let mut last = f64::NEG_INFINITY;
                let mut all = true;
                for level in 1..=max_level {
                    let l = level as f64;
                    let v = riesz_eval(f, g, &truncate(&psi, l)?, &kernel)?;
                    let ok = v >= last && (l < top || v == full);
                    all &= ok;
                    last = v;
                    out.row(
                        &hash,
                        &[
                            case.to_string(),
                            psi.name(),
                            kernel.name(),
                            num(l),
                            num(v),
                            num(full),
                            flag(ok),
                        ],
                    )?;
                }
                all
            }
        };
        passed += usize::from(ok);
    }
    out.finish()?;
    let total = insts.len();
    let verdict = if passed == total { "PASS" } else { "FAIL" };
    eprintln!("{name}: {passed}/{total} cases passed [{verdict}]");
    Ok(passed == total)
}

pub fn maximize(ctx: &Context, args: &MaximizeArgs) -> Result<bool> {
    let inst = load(&args.template)?;
    let hash = instance_hash(&inst);
    let (c1, c2) = (inst.c1()?, inst.c2()?);
    let (psi, kernel) = (psi(&args.psi)?, kernel(&args.kernel)?);
    let opts = SearchOptions {
        budget: args.budget,
        strategy: match args.strategy {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Full => Strategy::FullPairs,
            StrategyArg::Knapsack => Strategy::Knapsack,
        },
        tie: ctx.tol.tie,
        ..SearchOptions::default()
    };
    match args.mode {
        Mode::Exhaustive => {
            let space = SearchSpace::for_constraints(inst.domain, &args.levels, &c1, &c2)?;
            let cert = exhaustive_max_with(&space, &c1, &c2, &psi, &kernel, &opts)?;
            let unique = uniqueness_check(&cert, &inst.domain);
            let mut out = sink(ctx, "maximize-exhaustive")?;
            out.header(&[
                "kind", "best_value", "ball_value", "ball_is_max", "unique_up_to_translation",
                "argmax_count", "classes", "runner_up", "margin", "evaluations", "strategy", "member",
                "class", "f", "g",
            ])?;
            let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
            out.row(
                &hash,
                &[
                    "summary".into(),
                    num(cert.best_value),
                    num(cert.ball_value),
                    flag(cert.ball_is_max),
                    flag(unique.unique_up_to_translation),
                    cert.argmax_list.len().to_string(),
                    cert.translation_classes.len().to_string(),
                    opt(cert.runner_up),
                    opt(cert.margin()),
                    cert.evaluations.to_string(),
                    format!("{:?}", cert.strategy),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ],
            )?;
            for (class, members) in cert.translation_classes.iter().enumerate() {
                for &i in members {
                    let (f, g) = &cert.argmax_list[i];
                    let mut row = vec!["member".to_string()];
                    row.extend(std::iter::repeat_n(String::new(), 10));
                    row.extend([i.to_string(), class.to_string(), nums(f.values()), nums(g.values())]);
                    out.row(&hash, &row)?;
                }
            }
            if let Some((f, g)) = &unique.witness {
                let mut row = vec!["witness".to_string()];
                row.extend(std::iter::repeat_n(String::new(), 12));
                row.extend([nums(f.values()), nums(g.values())]);
                out.row(&hash, &row)?;
            }
            out.finish()?;
            Ok(cert.ball_is_max)
        }
        Mode::Ascent => {
            let start = match (&inst.f, &inst.g) {
                (Some(f), Some(g)) => (f.clone(), g.clone()),
                _ => {
                    let space = SearchSpace::for_constraints(inst.domain, &[0.0, 1.0], &c1, &c2)?;
                    (space.ball(0, c1.cap), space.ball(1, c2.cap))
                }
            };
            let r = exchange_ascent_with((&start.0, &start.1), &c1, &c2, &psi, &kernel, args.max_iters, &opts)?;
            let mut out = sink(ctx, "maximize-ascent")?;
            out.header(&[
                "kind", "iteration", "value", "started_at_ball", "improving_move_found_at_ball", "f", "g",
            ])?;
            for (i, v) in r.trace.iter().enumerate() {
                let fields = ["trace".into(), i.to_string(), num(*v)];
                let mut row = fields.to_vec();
                row.extend(std::iter::repeat_n(String::new(), 4));
                out.row(&hash, &row)?;
            }
            out.row(
                &hash,
                &[
                    "final".into(),
                    r.iterations.to_string(),
                    num(r.value),
                    flag(r.started_at_ball),
                    flag(r.improving_move_found_at_ball),
                    nums(r.final_pair.0.values()),
                    nums(r.final_pair.1.values()),
                ],
            )?;
            out.finish()?;
            let monotone = r.trace.windows(2).all(|w| w[1] >= w[0]);
            Ok(monotone && !(r.started_at_ball && r.improving_move_found_at_ball))
        }
    }
}

pub fn bench(ctx: &Context, path: &Path, psi_name: &str, kernel_name: &str, repeats: usize) -> Result<bool> {
    let inst = load(path)?;
    let (psi, kernel) = (psi(psi_name)?, kernel(kernel_name)?);
    let (f, g) = (inst.f()?, inst.g()?);
    let mut out = sink(ctx, "bench")?;
    out.header(&["psi", "kernel", "path", "value", "repeats", "seconds_min", "seconds_median"])?;
    let hash = instance_hash(&inst);
    let mut values = Vec::new();
    for label in ["naive", "layercake"] {
        let mut times = Vec::with_capacity(repeats.max(1));
        let mut value = 0.0;
        for _ in 0..repeats.max(1) {
            let t = Instant::now();
            value = if label == "naive" {
                riesz_eval(f, g, &psi, &kernel)?
            } else {
                layercake_auto(f, g, &psi, &kernel)?
            };
            times.push(t.elapsed().as_secs_f64());
        }
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.push(value);
        out.row(
            &hash,
            &[
                psi.name(),
                kernel.name(),
                label.into(),
                num(value),
                times.len().to_string(),
                num(times[0]),
                num(times[times.len() / 2]),
            ],
        )?;
    }
    out.finish()?;
    let gap = (values[0] - values[1]).abs();
    Ok(gap <= ctx.tol.eval * (1.0 + values[0].abs()))
}
