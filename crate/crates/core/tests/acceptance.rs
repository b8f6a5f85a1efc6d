//! The nine acceptance criteria, one PASS/FAIL line each.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankflow::measure::{wasserstein_pp_double_integral, wasserstein_pp_quantile, Gaussian, QuantileFn, StepCdf};
use rankflow::model::{degenerate_demo, logistic_demo, CoefficientModel};
use rankflow::particle::{coupled_contraction_run, simulate, CnRule, SimConfig};
use rankflow::pde::{dissipation_identity_check, fd_solve_fn, interior_grid, quantile_pde_solve_fn, FdConfig, FdScheme, QuantileConfig};
use rankflow::scenario::{chaos_table, equilibrium_rows, Law, PdeParams};
use rankflow::stationary::{bump_family, degenerate_family, stationary_first_moment, stationary_residual, StationaryProfile};

type Outcome = Result<String, String>;

fn logistic() -> Arc<CoefficientModel> {
    Arc::new(logistic_demo(1.0).unwrap())
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok { Ok(detail) } else { Err(detail) }
}

/// Pathwise coupled contraction of the reordered systems, every step, 20 seeds.
fn a1() -> Outcome {
    let model = logistic();
    let f0 = Gaussian::new(0.0, 1.0).unwrap();
    let g0 = Gaussian::new(1.5, 2.0).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..20 {
        let mut cfg = SimConfig::new(1000, 1e-3, 2.0);
        cfg.seed = seed;
        let t = coupled_contraction_run(&model, &f0, &g0, &cfg, &[1.0, 2.0, 4.0]).map_err(|e| e.to_string())?;
        worst = worst.max(t.worst_excess().into_iter().fold(f64::NEG_INFINITY, f64::max));
    }
    check(worst <= 0.0, format!("largest step increase beyond slack: {worst:.3e}"))
}

fn random_step(rng: &mut ChaCha8Rng) -> StepCdf {
    let k = rng.random_range(1..=8);
    let mut locs: Vec<f64> = (0..k).map(|_| rng.random_range(-5.0..5.0)).collect();
    locs.sort_by(f64::total_cmp);
    locs.dedup();
    let w: Vec<f64> = locs.iter().map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    let mut atoms: Vec<(f64, f64)> = locs.into_iter().zip(w.into_iter().map(|m| m / total)).collect();
    let drift: f64 = 1.0 - atoms.iter().map(|a| a.1).sum::<f64>();
    atoms.last_mut().unwrap().1 += drift;
    StepCdf::new(atoms).unwrap()
}

/// Double-integral formula against the exact quantile formula.
fn a2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let (f, g) = (random_step(&mut rng), random_step(&mut rng));
        for p in [2.0, 3.0, 4.0] {
            let q = wasserstein_pp_quantile(&f, &g, p, 0).map_err(|e| e.to_string())?;
            let d = wasserstein_pp_double_integral(&f, &g, p).map_err(|e| e.to_string())?;
            let rel = if q == 0.0 { d.abs() } else { ((d - q) / q).abs() };
            worst = worst.max(rel);
        }
    }
    check(worst <= 1e-8, format!("max relative error {worst:.3e} over 1500 evaluations"))
}

/// Ψ⁻¹ against the logistic CDF; first absolute moment against ln 2.
fn a3() -> Outcome {
    let s = StationaryProfile::new(logistic()).map_err(|e| e.to_string())?;
    let err = (0..1000)
        .map(|k| {
            let x = -8.0 + 16.0 * k as f64 / 999.0;
            (s.psi_inverse(x, 1e-11) - 1.0 / (1.0 + (-2.0 * x).exp())).abs()
        })
        .fold(0.0, f64::max);
    let m = stationary_first_moment(&logistic_demo(1.0).unwrap()).map_err(|e| e.to_string())?.to_f64();
    let merr = (m - std::f64::consts::LN_2).abs();
    check(err <= 1e-8 && merr <= 1e-6, format!("max |Ψ⁻¹ − logistic| = {err:.2e}; |moment − ln 2| = {merr:.2e}"))
}

/// Empirical mean is conserved up to Monte Carlo noise.
fn a4() -> Outcome {
    let model = logistic();
    let f0 = Gaussian::new(0.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let mut cfg = SimConfig::new(10_000, 1e-3, 1.0);
        cfg.seed = seed;
        let s = simulate(model.clone(), &f0, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max((s.last().mean() - s.snapshots[0].mean()).abs());
    }
    check(worst <= 0.05, format!("max |mean(T) − mean(0)| = {worst:.4} over 10 seeds"))
}

/// W₂ to the mean-matched stationary profile decays and ends below 0.1.
fn a5() -> Outcome {
    let model = logistic();
    let f0 = Law::Gaussian(Gaussian::new(0.0, 2.0).unwrap());
    let base = StationaryProfile::new(model.clone()).map_err(|e| e.to_string())?;
    let xbar = base.centering_offset(&f0).map_err(|e| e.to_string())?;
    let stationary = base.with_xbar(xbar);
    let mut cfg = SimConfig::new(10_000, 1e-3, 10.0);
    cfg.seed = 5;
    cfg.c_n_rule = CnRule::Power { c0: 1.0, alpha: 0.5 };
    let times: Vec<f64> = (0..=10).map(|k| k as f64).collect();
    let rows = equilibrium_rows(&model, &f0, &stationary, &cfg, &times).map_err(|e| e.to_string())?;
    let w: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let rises = w[1..].windows(2).map(|p| p[1] - p[0]).fold(f64::NEG_INFINITY, f64::max);
    let last = w[w.len() - 1];
    let shown: Vec<String> = w.iter().map(|v| format!("{v:.3}")).collect();
    check(rises <= 0.02 && last <= 0.1, format!("W2 at t=0..10: [{}]; largest rise after t=1: {rises:.3}", shown.join(", ")))
}

/// Dissipation identity along the quantile solver.
fn a6() -> Outcome {
    let model = logistic();
    let f0 = Gaussian::new(0.0, 1.0).unwrap();
    let g0 = StationaryProfile::new(model.clone()).map_err(|e| e.to_string())?;
    let r = dissipation_identity_check(&model, &f0, &g0, 2.0, 512, 1e-3, Some(0.05), 1.0).map_err(|e| e.to_string())?;
    check(r.rel_err <= 0.05, format!("lhs = {:.6e}, rhs = {:.6e}, rel_err = {:.3e}", r.lhs, r.rhs, r.rel_err))
}

/// Mean W₁ to the finite-difference reference shrinks with n.
fn a7() -> Outcome {
    let model = logistic();
    let f0 = Law::Gaussian(Gaussian::new(0.0, 1.0).unwrap());
    let sim = SimConfig::new(100, 1e-3, 1.0);
    let seeds: Vec<u64> = (0..10).collect();
    let t = chaos_table(&model, &f0, &sim, &PdeParams::default(), &[100, 1000, 10_000], &seeds).map_err(|e| e.to_string())?;
    let means = t.means();
    let ok = means.windows(2).all(|w| w[1] < w[0]);
    check(ok, format!("mean W1 for n = 1e2, 1e3, 1e4: {:.4}, {:.4}, {:.4}", means[0], means[1], means[2]))
}

/// The non-translate family solves the degenerate stationary equation weakly.
fn a8() -> Outcome {
    let model = degenerate_demo();
    let mut worst = 0.0f64;
    for h in [0.0, 0.5, 1.0] {
        let f = move |x: f64| degenerate_family(h, x).unwrap();
        worst = worst.max(stationary_residual(&model, &f, &bump_family(-1.5, h + 1.5, 20)));
    }
    check(worst <= 1e-6, format!("max weak residual {worst:.2e} over h ∈ {{0, 0.5, 1}}, 20 bumps each"))
}

/// CDF solver and quantile solver agree on quantiles in [0.1, 0.9].
fn a9() -> Outcome {
    let model = logistic();
    let g = Gaussian::new(0.0, 1.0).unwrap();
    let fd = FdConfig { x_min: -10.0, x_max: 10.0, m: 2001, dt: 5e-5, t_end: 1.0, scheme: FdScheme::Explicit, output_times: vec![] };
    let a = fd_solve_fn(&model, &|x| g.cdf(x), &fd).map_err(|e| e.to_string())?;
    let q = quantile_pde_solve_fn(&model, &g, &QuantileConfig { m: 512, dt: 1e-3, t_end: 1.0, output_dt: None })
        .map_err(|e| e.to_string())?;
    let slice = a.last();
    let gap = interior_grid(512)
        .iter()
        .zip(q.last())
        .filter(|(u, _)| (0.1..=0.9).contains(*u))
        .map(|(&u, &x)| (slice.quantile(u) - x).abs())
        .fold(0.0, f64::max);
    check(gap <= 1e-2, format!("sup |F_fd⁻¹ − X| on [0.1, 0.9] at t=1: {gap:.2e}"))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 9] = [
        ("A1", "pathwise coupled contraction", a1),
        ("A2", "wasserstein oracle equivalence", a2),
        ("A3", "analytic stationary profile", a3),
        ("A4", "mean conservation", a4),
        ("A5", "convergence to equilibrium", a5),
        ("A6", "dissipation identity", a6),
        ("A7", "propagation of chaos trend", a7),
        ("A8", "degenerate stationary family", a8),
        ("A9", "cross-solver consistency", a9),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| a.starts_with('A')).collect();
    let mut failed = 0;
    for (id, name, f) in criteria {
        if !only.is_empty() && !only.iter().any(|o| o == id) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("{id} PASS  {name} ({secs:.1}s): {d}"),
            Err(d) => {
                failed += 1;
                println!("{id} FAIL  {name} ({secs:.1}s): {d}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
