//! Deterministic reference solvers.
//!
//! * [`fd_solve`]: the CDF equation `∂ₜF = ∂ₓ(½a(F)∂ₓF − B(F))` in divergence
//!   form on a truncated interval with Dirichlet ends.
//! * [`quantile_pde_solve`]: the quantile equation `∂ₜX = b − ½∂ᵤ(a/∂ᵤX)` for
//!   `X = F⁻¹`, written as `∂ₜX = ∂ᵤJ` with `J = B − ½a/∂ᵤX`.
//!
//! The quantile solver is a finite-volume scheme on `u_k = k/(m+1)`. Node `k`
//! owns `[u_{k−½}, u_{k+½}]`, and the two end nodes also own the tails
//! `[0, u_{3/2}]` and `[u_{m−½}, 1]`. Face fluxes are
//! `J_{k+½} = B̄ − ½(A(u_{k+1}) − A(u_k))/(X_{k+1} − X_k)` with
//! `B̄ = ∫a / ∫(a/B)` over the face cell, which makes `X_k = Ψ(u_k) + c`
//! an exact discrete equilibrium. The tail fluxes are `J(0) = B(0)` and
//! `J(1) = B(1)`, i.e. the density vanishes at infinity.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::measure::{EndBehavior, QuantileFn, QuantileProfile};
use crate::model::CoefficientModel;
use crate::quadrature::{integrate, Tolerance};

const MONOTONE_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FdScheme {
    #[default]
    Explicit,
    /// Linearized diffusion implicit, advection explicit.
    SemiImplicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdConfig {
    pub x_min: f64,
    pub x_max: f64,
    /// Number of grid points, ends included.
    pub m: usize,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub scheme: FdScheme,
    /// Extra recorded times besides `0` and `t_end`.
    #[serde(default)]
    pub output_times: Vec<f64>,
}

impl FdConfig {
    pub fn grid(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.m).map(|j| self.x_min + j as f64 * dx).collect()
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.m - 1) as f64
    }

    fn validate(&self) -> Result<()> {
        if self.m < 3 {
            return Err(invalid("fd grid needs at least 3 points"));
        }
        if !(self.x_max > self.x_min) {
            return Err(invalid("x_max must exceed x_min"));
        }
        if !(self.dt > 0.0) || !(self.t_end >= 0.0) {
            return Err(invalid("dt must be > 0 and t_end >= 0"));
        }
        Ok(())
    }
}

/// CDF slices `F_t(x_j)` on a uniform grid.
#[derive(Debug, Clone)]
pub struct GridSolution {
    pub x_grid: Vec<f64>,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl GridSolution {
    pub fn slice(&self, i: usize) -> GridSlice<'_> {
        GridSlice { x: &self.x_grid, f: &self.values[i] }
    }

    pub fn last(&self) -> GridSlice<'_> {
        self.slice(self.times.len() - 1)
    }

    /// Index of the recorded time closest to `t`.
    pub fn index_near(&self, t: f64) -> usize {
        nearest(&self.times, t)
    }

    /// CSV with columns `t, x, F`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_table(w, ["t", "x", "F"], &self.times, &self.x_grid, &self.values)
    }
}

/// One CDF slice, piecewise linear in `x`; its pseudo-inverse is the [`QuantileFn`].
#[derive(Debug, Clone, Copy)]
pub struct GridSlice<'a> {
    pub x: &'a [f64],
    pub f: &'a [f64],
}

impl GridSlice<'_> {
    pub fn cdf(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x <= self.x[0] {
            return self.f[0];
        }
        if x >= self.x[n - 1] {
            return self.f[n - 1];
        }
        let k = self.x.partition_point(|&g| g <= x) - 1;
        let t = (x - self.x[k]) / (self.x[k + 1] - self.x[k]);
        self.f[k] + t * (self.f[k + 1] - self.f[k])
    }
}

impl QuantileFn for GridSlice<'_> {
    fn quantile(&self, u: f64) -> f64 {
        let n = self.f.len();
        // first node with F > u
        let k = self.f.partition_point(|&v| v <= u);
        if k == 0 {
            return self.x[0];
        }
        if k == n {
            return self.x[n - 1];
        }
        let (f0, f1) = (self.f[k - 1], self.f[k]);
        self.x[k - 1] + (u - f0) / (f1 - f0) * (self.x[k] - self.x[k - 1])
    }
}

fn nearest(times: &[f64], t: f64) -> usize {
    (0..times.len()).min_by(|&i, &j| (times[i] - t).abs().total_cmp(&(times[j] - t).abs())).unwrap_or(0)
}

fn write_table<W: Write>(w: W, header: [&str; 3], times: &[f64], coords: &[f64], values: &[Vec<f64>]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(header)?;
    for (t, row) in times.iter().zip(values) {
        for (c, v) in coords.iter().zip(row) {
            wr.write_record([t.to_string(), c.to_string(), v.to_string()])?;
        }
    }
    wr.flush()?;
    Ok(())
}

/// `max a` over a fine grid of `[0, 1]`.
fn max_a(model: &CoefficientModel) -> f64 {
    (0..=4096).map(|k| model.a(k as f64 / 4096.0)).fold(0.0, f64::max)
}

fn check_cdf_slice(f: &[f64], time: f64) -> Result<()> {
    if let Some(j) = f.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { time, index: j });
    }
    if let Some(j) = f.windows(2).position(|w| w[1] < w[0] - MONOTONE_SLACK) {
        return Err(Error::MonotonicityLost { time, detail: format!("F decreases between nodes {j} and {}", j + 1) });
    }
    if let Some(j) = f.iter().position(|&v| !(-MONOTONE_SLACK..=1.0 + MONOTONE_SLACK).contains(&v)) {
        return Err(Error::MonotonicityLost { time, detail: format!("F leaves [0, 1] at node {j}: {}", f[j]) });
    }
    Ok(())
}

/// Sorted record times `{0} ∪ extra ∪ {t_end}` restricted to `[0, t_end]`.
fn record_times(extra: &[f64], t_end: f64) -> Vec<f64> {
    let mut t: Vec<f64> = std::iter::once(0.0)
        .chain(extra.iter().copied().filter(|&t| t > 0.0 && t < t_end))
        .chain([t_end])
        .collect();
    t.sort_by(f64::total_cmp);
    t.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    t
}

/// Evolves `F₀` (sampled on `cfg.grid()`) with the conservative central scheme.
pub fn fd_solve(model: &CoefficientModel, f0: &[f64], cfg: &FdConfig) -> Result<GridSolution> {
    cfg.validate()?;
    if f0.len() != cfg.m {
        return Err(Error::LengthMismatch { left: f0.len(), right: cfg.m });
    }
    if f0.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::NonMonotone("F0 must be nondecreasing".into()));
    }
    if f0.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
        return Err(invalid("F0 values must lie in [0, 1]"));
    }
    let dx = cfg.dx();
    let amax = max_a(model);
    if cfg.scheme == FdScheme::Explicit && cfg.dt * amax > dx * dx {
        return Err(Error::Cfl { dt: cfg.dt, bound: dx * dx / amax });
    }

    let x_grid = cfg.grid();
    let record = record_times(&cfg.output_times, cfg.t_end);
    let mut times = vec![0.0];
    let mut values = vec![f0.to_vec()];
    let mut f = f0.to_vec();
    let mut scratch = Stepper::new(cfg.m);
    let mut t = 0.0;
    for &target in &record[1..] {
        while t < target - 1e-14 {
            let h = cfg.dt.min(target - t);
            match cfg.scheme {
                FdScheme::Explicit => scratch.explicit(model, &mut f, dx, h),
                FdScheme::SemiImplicit => scratch.semi_implicit(model, &mut f, dx, h),
            }
            t = if target - t <= cfg.dt { target } else { t + h };
            check_cdf_slice(&f, t)?;
        }
        times.push(target);
        values.push(f.clone());
    }
    Ok(GridSolution { x_grid, times, values })
}

/// Samples `F₀` on the grid of `cfg` and calls [`fd_solve`].
pub fn fd_solve_fn(model: &CoefficientModel, f0: &dyn Fn(f64) -> f64, cfg: &FdConfig) -> Result<GridSolution> {
    let values: Vec<f64> = cfg.grid().iter().map(|&x| f0(x)).collect();
    fd_solve(model, &values, cfg)
}

struct Stepper {
    flux: Vec<f64>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
}

impl Stepper {
    fn new(m: usize) -> Self {
        Self { flux: vec![0.0; m - 1], lower: vec![0.0; m], diag: vec![0.0; m], upper: vec![0.0; m], rhs: vec![0.0; m] }
    }

    fn explicit(&mut self, model: &CoefficientModel, f: &mut [f64], dx: f64, dt: f64) {
        for j in 0..f.len() - 1 {
            let face = 0.5 * (f[j] + f[j + 1]);
            self.flux[j] = 0.5 * model.a(face) * (f[j + 1] - f[j]) / dx - model.big_b(face);
        }
        for j in 1..f.len() - 1 {
            f[j] += dt / dx * (self.flux[j] - self.flux[j - 1]);
        }
    }

    fn semi_implicit(&mut self, model: &CoefficientModel, f: &mut [f64], dx: f64, dt: f64) {
        let m = f.len();
        // face diffusion coefficients ½a(F_face)/dx² and explicit advective fluxes
        for j in 0..m - 1 {
            let face = 0.5 * (f[j] + f[j + 1]);
            self.flux[j] = model.big_b(face);
        }
        let k: Vec<f64> = (0..m - 1).map(|j| 0.5 * model.a(0.5 * (f[j] + f[j + 1])) / (dx * dx)).collect();
        self.lower[0] = 0.0;
        self.diag[0] = 1.0;
        self.upper[0] = 0.0;
        self.rhs[0] = f[0];
        for j in 1..m - 1 {
            self.lower[j] = -dt * k[j - 1];
            self.upper[j] = -dt * k[j];
            self.diag[j] = 1.0 + dt * (k[j - 1] + k[j]);
            self.rhs[j] = f[j] - dt / dx * (self.flux[j] - self.flux[j - 1]);
        }
        self.lower[m - 1] = 0.0;
        self.diag[m - 1] = 1.0;
        self.upper[m - 1] = 0.0;
        self.rhs[m - 1] = f[m - 1];
        thomas(&self.lower, &mut self.diag, &self.upper, &mut self.rhs);
        f.copy_from_slice(&self.rhs);
    }
}

/// Tridiagonal solve in place; `rhs` holds the solution on return.
fn thomas(lower: &[f64], diag: &mut [f64], upper: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    for i in 1..n {
        let w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
}

/// `u_k = k/(m+1)`, `k = 1..m`.
pub fn interior_grid(m: usize) -> Vec<f64> {
    (1..=m).map(|k| k as f64 / (m + 1) as f64).collect()
}

/// Voronoi weights of the interior nodes; the two end nodes also own the tails.
pub fn node_weights(m: usize) -> Vec<f64> {
    let h = 1.0 / (m + 1) as f64;
    let mut w = vec![h; m];
    w[0] = 1.5 * h;
    w[m - 1] = 1.5 * h;
    if m == 1 {
        w[0] = 1.0;
    }
    w
}

/// `Σ w_k |X_k − Y_k|ᵖ`: `W_p^p` of two profiles sampled on the same interior grid.
pub fn discrete_wpp(x: &[f64], y: &[f64], p: f64) -> f64 {
    node_weights(x.len()).iter().zip(x.iter().zip(y)).map(|(w, (a, b))| w * (a - b).abs().powf(p)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantileConfig {
    /// Number of interior nodes.
    pub m: usize,
    /// Largest step; also the floor reference `dt/2¹⁰` for halving.
    pub dt: f64,
    pub t_end: f64,
    /// Spacing of recorded slices (`t_end` when absent).
    #[serde(default)]
    pub output_dt: Option<f64>,
}

/// Quantile slices `X_t(u_k)` on the interior grid.
#[derive(Debug, Clone)]
pub struct QuantileSolution {
    pub u_grid: Vec<f64>,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    /// Accepted time steps.
    pub steps: usize,
}

impl QuantileSolution {
    pub fn index_near(&self, t: f64) -> usize {
        nearest(&self.times, t)
    }

    pub fn last(&self) -> &[f64] {
        &self.values[self.values.len() - 1]
    }

    /// Quantile profile of slice `i`, linearly extrapolated beyond the grid.
    pub fn profile(&self, i: usize) -> Result<QuantileProfile> {
        QuantileProfile::new(self.u_grid.clone(), self.values[i].clone(), EndBehavior::Divergent, EndBehavior::Divergent)
    }

    /// `Σ w_k X_k`, conserved when `B(1) = 0`.
    pub fn mean(&self, i: usize) -> f64 {
        node_weights(self.u_grid.len()).iter().zip(&self.values[i]).map(|(w, x)| w * x).sum()
    }

    /// CSV with columns `t, u, X`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_table(w, ["t", "u", "X"], &self.times, &self.u_grid, &self.values)
    }
}

/// Face data of the quantile scheme, fixed for a model and grid.
struct QuantileScheme {
    /// `A(u_{k+1}) − A(u_k)`, length `m − 1`.
    delta_a: Vec<f64>,
    /// Well-balanced `B̄` on the faces, length `m − 1`.
    b_bar: Vec<f64>,
    b0: f64,
    b1: f64,
    inv_w: Vec<f64>,
}

impl QuantileScheme {
    fn new(model: &CoefficientModel, m: usize) -> Self {
        let u = interior_grid(m);
        let tol = Tolerance { abs: 1e-15, rel: 1e-13, max_intervals: 200 };
        let mut delta_a = Vec::with_capacity(m - 1);
        let mut b_bar = Vec::with_capacity(m - 1);
        for k in 0..m - 1 {
            let (lo, hi) = (u[k], u[k + 1]);
            let da = model.big_a(hi) - model.big_a(lo);
            let mid = model.big_b(0.5 * (lo + hi));
            let positive = model.big_b(lo) > 0.0 && model.big_b(hi) > 0.0 && mid > 0.0;
            let bb = if positive && da > 0.0 {
                let int_a = integrate(&|v: f64| model.a(v), lo, hi, tol).value;
                let int_ab = integrate(&|v: f64| model.a(v) / model.big_b(v), lo, hi, tol).value;
                if int_ab > 0.0 && int_a > 0.0 { int_a / int_ab } else { mid }
            } else {
                mid
            };
            delta_a.push(da);
            b_bar.push(bb);
        }
        let inv_w = node_weights(m).iter().map(|w| 1.0 / w).collect();
        Self { delta_a, b_bar, b0: model.big_b(0.0), b1: model.big_b(1.0), inv_w }
    }

    /// `dX_k/dt`; `None` when some spacing is not positive.
    fn rate(&self, x: &[f64], out: &mut [f64]) -> Option<()> {
        let m = x.len();
        let mut left = self.b0;
        for k in 0..m {
            let right = if k + 1 < m {
                let dx = x[k + 1] - x[k];
                if !(dx > 0.0) {
                    return None;
                }
                self.b_bar[k] - 0.5 * self.delta_a[k] / dx
            } else {
                self.b1
            };
            out[k] = (right - left) * self.inv_w[k];
            left = right;
        }
        Some(())
    }

    /// Largest stable explicit step for the current spacings.
    fn stable_dt(&self, x: &[f64]) -> f64 {
        let m = x.len();
        let mut worst = 0.0f64;
        for k in 0..m {
            let mut d = 0.0;
            if k + 1 < m {
                let dx = x[k + 1] - x[k];
                d += 0.5 * self.delta_a[k] / (dx * dx);
            }
            if k > 0 {
                let dx = x[k] - x[k - 1];
                d += 0.5 * self.delta_a[k - 1] / (dx * dx);
            }
            worst = worst.max(d * self.inv_w[k]);
        }
        if worst > 0.0 { 0.9 / worst } else { f64::INFINITY }
    }
}

/// Evolves `X₀ = F₀⁻¹` sampled on the interior grid with Heun steps.
///
/// Each step is capped by the explicit stability bound and halved (at most ten
/// times below `dt`) whenever it would make `X` non-increasing somewhere.
pub fn quantile_pde_solve(model: &CoefficientModel, x0: &[f64], cfg: &QuantileConfig) -> Result<QuantileSolution> {
    let m = cfg.m;
    if m < 3 {
        return Err(invalid("quantile grid needs at least 3 interior nodes"));
    }
    if x0.len() != m {
        return Err(Error::LengthMismatch { left: x0.len(), right: m });
    }
    if !(cfg.dt > 0.0) || !(cfg.t_end >= 0.0) {
        return Err(invalid("dt must be > 0 and t_end >= 0"));
    }
    if let Some(j) = x0.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { time: 0.0, index: j });
    }
    if x0.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::NonMonotone("initial quantile profile must be strictly increasing".into()));
    }
    let scheme = QuantileScheme::new(model, m);
    let out_dt = cfg.output_dt.unwrap_or(cfg.t_end).max(f64::MIN_POSITIVE);
    let n_out = if cfg.t_end == 0.0 { 0 } else { (cfg.t_end / out_dt - 1e-9).ceil() as usize };
    let targets: Vec<f64> = (1..=n_out).map(|k| (k as f64 * out_dt).min(cfg.t_end)).collect();

    let mut x = x0.to_vec();
    let mut k1 = vec![0.0; m];
    let mut k2 = vec![0.0; m];
    let mut stage = vec![0.0; m];
    let mut next = vec![0.0; m];
    let mut times = vec![0.0];
    let mut values = vec![x.clone()];
    let mut t = 0.0;
    let mut steps = 0;
    let floor = cfg.dt / 1024.0;
    for &target in &targets {
        while t < target - 1e-14 {
            let mut h = cfg.dt.min(scheme.stable_dt(&x)).min(target - t);
            let mut halvings = 0;
            loop {
                let ok = heun(&scheme, &x, h, &mut k1, &mut k2, &mut stage, &mut next);
                if ok && next.windows(2).all(|w| w[1] > w[0]) {
                    break;
                }
                h *= 0.5;
                halvings += 1;
                if halvings > 10 && h < floor {
                    return Err(Error::MonotonicityLost {
                        time: t,
                        detail: format!("quantile profile stays non-increasing with step {h:.3e} < dt/2^10"),
                    });
                }
            }
            if let Some(j) = next.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { time: t + h, index: j });
            }
            std::mem::swap(&mut x, &mut next);
            t = if target - t - h <= 1e-14 { target } else { t + h };
            steps += 1;
        }
        times.push(target);
        values.push(x.clone());
    }
    Ok(QuantileSolution { u_grid: interior_grid(m), times, values, steps })
}

/// Samples `F₀⁻¹` on the interior grid and calls [`quantile_pde_solve`].
pub fn quantile_pde_solve_fn(model: &CoefficientModel, finv0: &dyn QuantileFn, cfg: &QuantileConfig) -> Result<QuantileSolution> {
    let x0: Vec<f64> = interior_grid(cfg.m).iter().map(|&u| finv0.quantile(u)).collect();
    quantile_pde_solve(model, &x0, cfg)
}

fn heun(
    scheme: &QuantileScheme,
    x: &[f64],
    h: f64,
    k1: &mut [f64],
    k2: &mut [f64],
    stage: &mut [f64],
    next: &mut [f64],
) -> bool {
    if scheme.rate(x, k1).is_none() {
        return false;
    }
    for i in 0..x.len() {
        stage[i] = x[i] + h * k1[i];
    }
    if scheme.rate(stage, k2).is_none() {
        return false;
    }
    for i in 0..x.len() {
        next[i] = x[i] + 0.5 * h * (k1[i] + k2[i]);
    }
    true
}

/// `(p(p−1)/2) ∫₀¹ a |X − Y|^{p−2} (∂ᵤX − ∂ᵤY)² / (∂ᵤX ∂ᵤY) du` for two
/// profiles on the interior grid.
///
/// Derivatives are differences across each face cell `[u_k, u_{k+1}]`, weighted
/// by `∫a` over the cell; the two tail cells reuse the nearest face's value.
pub fn dissipation_rate(model: &CoefficientModel, x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    let (total, head, tail) = face_sums(model, x, y, p)?;
    let m = x.len();
    let u = interior_grid(m);
    // tails: the ratio is scale free, so the end face value stands in for the tail cell
    let tails = (model.big_a(u[0]) - model.big_a(0.0)) * head + (model.big_a(1.0) - model.big_a(u[m - 1])) * tail;
    Ok(0.5 * p * (p - 1.0) * (total + tails))
}

/// Face cells only, i.e. over `[u_1, u_m]`. This is the rate the quantile
/// scheme actually dissipates: for `p = 2` it is exactly `−d/dt Σ w_k |X_k − Y_k|²`.
pub fn scheme_dissipation_rate(model: &CoefficientModel, x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    let (total, _, _) = face_sums(model, x, y, p)?;
    Ok(0.5 * p * (p - 1.0) * total)
}

/// `(Σ_faces ∫a · ratio, first face ratio, last face ratio)`
fn face_sums(model: &CoefficientModel, x: &[f64], y: &[f64], p: f64) -> Result<(f64, f64, f64)> {
    let m = x.len();
    if y.len() != m {
        return Err(Error::LengthMismatch { left: m, right: y.len() });
    }
    if m < 2 {
        return Err(invalid("need at least two nodes"));
    }
    if !(p >= 2.0) {
        return Err(invalid(format!("dissipation needs p >= 2, got {p}")));
    }
    for s in [x, y] {
        if s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::NonMonotone("dissipation needs strictly increasing slices".into()));
        }
    }
    let u = interior_grid(m);
    let face = |k: usize| {
        let dx = x[k + 1] - x[k];
        let dy = y[k + 1] - y[k];
        let gap = 0.5 * ((x[k] - y[k]) + (x[k + 1] - y[k + 1]));
        let weight = if p == 2.0 { 1.0 } else { gap.abs().powf(p - 2.0) };
        weight * (dx - dy) * (dx - dy) / (dx * dy)
    };
    let total = (0..m - 1).map(|k| (model.big_a(u[k + 1]) - model.big_a(u[k])) * face(k)).sum();
    Ok((total, face(0), face(m - 2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DissipationReport {
    pub t1: f64,
    pub t2: f64,
    /// `W_p^p(t₂) − W_p^p(t₁)`
    pub lhs: f64,
    /// `−∫_{t₁}^{t₂} dissipation`
    pub rhs: f64,
    pub rel_err: f64,
}

/// Evolves both profiles and compares `ΔW_p^p` with the time-integrated
/// dissipation (trapezoid over slices spaced `dt`). Uses the scheme's own
/// rate, so for `p = 2` the only error left is time stepping.
pub fn dissipation_identity_check(
    model: &CoefficientModel,
    finv0: &dyn QuantileFn,
    ginv0: &dyn QuantileFn,
    p: f64,
    m: usize,
    dt: f64,
    t1: Option<f64>,
    t2: f64,
) -> Result<DissipationReport> {
    let t1 = t1.unwrap_or(10.0 * dt);
    if !(t1 > 0.0 && t2 > t1) {
        return Err(invalid(format!("need 0 < t1 < t2, got t1={t1}, t2={t2}")));
    }
    let cfg = QuantileConfig { m, dt, t_end: t2, output_dt: Some(dt) };
    let (f, g) = rayon::join(|| quantile_pde_solve_fn(model, finv0, &cfg), || quantile_pde_solve_fn(model, ginv0, &cfg));
    let (f, g) = (f?, g?);
    let i1 = f.index_near(t1);
    let i2 = f.times.len() - 1;
    let t1 = f.times[i1];
    let lhs = discrete_wpp(&f.values[i2], &g.values[i2], p) - discrete_wpp(&f.values[i1], &g.values[i1], p);
    let rates = (i1..=i2).map(|i| scheme_dissipation_rate(model, &f.values[i], &g.values[i], p)).collect::<Result<Vec<_>>>()?;
    let mut integral = 0.0;
    for (j, i) in (i1..i2).enumerate() {
        integral += 0.5 * (f.times[i + 1] - f.times[i]) * (rates[j] + rates[j + 1]);
    }
    let rhs = -integral;
    let rel_err = if lhs == 0.0 {
        if rhs == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        ((lhs - rhs) / lhs).abs()
    };
    Ok(DissipationReport { t1, t2, lhs, rhs, rel_err })
}

/// Trapezoid value of `∫ (F − G)² / p_∞` over `x_grid`.
pub fn weighted_l2(f: &[f64], g: &[f64], p_inf: &[f64], x_grid: &[f64]) -> Result<f64> {
    let n = x_grid.len();
    for len in [f.len(), g.len(), p_inf.len()] {
        if len != n {
            return Err(Error::LengthMismatch { left: len, right: n });
        }
    }
    if let Some(j) = p_inf.iter().position(|&p| !(p > 0.0)) {
        return Err(invalid(format!("density must be positive on the grid; node {j} has {}", p_inf[j])));
    }
    let v: Vec<f64> = (0..n).map(|j| (f[j] - g[j]).powi(2) / p_inf[j]).collect();
    Ok((0..n.saturating_sub(1)).map(|j| 0.5 * (x_grid[j + 1] - x_grid[j]) * (v[j] + v[j + 1])).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Gaussian;
    use crate::model::logistic_demo;
    use crate::stationary::StationaryProfile;
    use std::sync::Arc;

    fn advection_diffusion() -> CoefficientModel {
        CoefficientModel::with_primitives("a=1,b=1", |_| 1.0, |_| 1.0, |u| u, |u| u)
    }

    fn logistic_cdf(x: f64) -> f64 {
        1.0 / (1.0 + (-2.0 * x).exp())
    }

    #[test]
    fn heat_equation_stays_monotone() {
        let heat = CoefficientModel::with_primitives("heat", |_| 1.0, |_| 0.0, |u| u, |_| 0.0);
        let cfg = FdConfig { x_min: -5.0, x_max: 5.0, m: 201, dt: 2e-3, t_end: 0.5, scheme: FdScheme::Explicit, output_times: vec![] };
        let f0 = |x: f64| 0.5 * (1.0 + (x / 0.05).tanh());
        let sol = fd_solve_fn(&heat, &f0, &cfg).unwrap();
        let last = &sol.values[1];
        assert!(last.windows(2).all(|w| w[1] >= w[0]));
        assert!(last.iter().all(|&v| (0.0..=1.0).contains(&v)));
        assert!((sol.last().cdf(0.0) - 0.5).abs() < 1e-12);
        // heat kernel at variance t: F(x) ≈ Φ(x/√t)
        let g = Gaussian::new(0.0, 0.5f64.sqrt()).unwrap();
        assert!((sol.last().cdf(0.5) - g.cdf(0.5)).abs() < 5e-3);
    }

    #[test]
    fn cfl_enforced() {
        let m = logistic_demo(1.0).unwrap();
        let cfg = FdConfig { x_min: -1.0, x_max: 1.0, m: 101, dt: 1e-3, t_end: 0.1, scheme: FdScheme::Explicit, output_times: vec![] };
        let f0: Vec<f64> = cfg.grid().iter().map(|&x| logistic_cdf(x)).collect();
        assert!(matches!(fd_solve(&m, &f0, &cfg), Err(Error::Cfl { .. })));
        let semi = FdConfig { scheme: FdScheme::SemiImplicit, ..cfg };
        assert!(fd_solve(&m, &f0, &semi).is_ok());
        let bad: Vec<f64> = f0.iter().rev().copied().collect();
        assert!(matches!(fd_solve(&m, &bad, &semi), Err(Error::NonMonotone(_))));
    }

    #[test]
    fn fd_keeps_stationary_profile() {
        let m = logistic_demo(1.0).unwrap();
        for scheme in [FdScheme::Explicit, FdScheme::SemiImplicit] {
            let cfg = FdConfig { x_min: -10.0, x_max: 10.0, m: 1001, dt: 1e-4, t_end: 1.0, scheme, output_times: vec![0.5] };
            let sol = fd_solve_fn(&m, &logistic_cdf, &cfg).unwrap();
            for slice in &sol.values {
                let drift = slice.iter().zip(&sol.values[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(drift <= 1e-4, "{scheme:?}: {drift}");
            }
        }
    }

    #[test]
    fn fd_advection_diffusion_closed_form() {
        let model = advection_diffusion();
        let cfg = FdConfig { x_min: -10.0, x_max: 12.0, m: 2201, dt: 5e-5, t_end: 1.0, scheme: FdScheme::Explicit, output_times: vec![] };
        let g0 = Gaussian::new(0.0, 1.0).unwrap();
        let sol = fd_solve_fn(&model, &|x| g0.cdf(x), &cfg).unwrap();
        // X_t = X_0 + t + W_t
        let gt = Gaussian::new(1.0, 2f64.sqrt()).unwrap();
        let err = sol.x_grid.iter().zip(sol.last().f).map(|(&x, &v)| (v - gt.cdf(x)).abs()).fold(0.0, f64::max);
        assert!(err <= 5e-3, "{err}");
    }

    #[test]
    fn thomas_solves_tridiagonal() {
        let lower = [0.0, 1.0, 1.0];
        let mut diag = [4.0, 4.0, 4.0];
        let upper = [1.0, 1.0, 0.0];
        let mut rhs = [5.0, 6.0, 5.0];
        thomas(&lower, &mut diag, &upper, &mut rhs);
        for v in rhs {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn grid_slice_quantile_inverts_cdf() {
        let x = [0.0, 1.0, 2.0];
        let f = [0.0, 0.5, 1.0];
        let s = GridSlice { x: &x, f: &f };
        assert_eq!(s.quantile(0.25), 0.5);
        assert_eq!(s.quantile(0.75), 1.5);
        assert_eq!(s.cdf(1.5), 0.75);
    }

    #[test]
    fn quantile_solver_pure_transport() {
        let model = CoefficientModel::with_primitives("transport", |_| 0.0, |_| 1.0, |_| 0.0, |u| u);
        let g = Gaussian::new(0.0, 1.0).unwrap();
        let cfg = QuantileConfig { m: 64, dt: 0.01, t_end: 0.5, output_dt: Some(0.25) };
        let sol = quantile_pde_solve_fn(&model, &g, &cfg).unwrap();
        assert_eq!(sol.times, vec![0.0, 0.25, 0.5]);
        for (a, b) in sol.last().iter().zip(&sol.values[0]) {
            assert!((a - b - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn quantile_solver_keeps_stationary_profile() {
        let model = Arc::new(logistic_demo(1.0).unwrap());
        let s = StationaryProfile::new(model.clone()).unwrap();
        let cfg = QuantileConfig { m: 256, dt: 1e-3, t_end: 1.0, output_dt: Some(0.1) };
        let sol = quantile_pde_solve_fn(&model, &s, &cfg).unwrap();
        for slice in &sol.values {
            let drift = slice.iter().zip(&sol.values[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(drift <= 1e-4, "{drift}");
        }
    }

    #[test]
    fn quantile_solver_conserves_mean_and_contracts() {
        let model = logistic_demo(1.0).unwrap();
        let cfg = QuantileConfig { m: 128, dt: 1e-3, t_end: 0.5, output_dt: Some(0.05) };
        let f = quantile_pde_solve_fn(&model, &Gaussian::new(0.3, 0.8).unwrap(), &cfg).unwrap();
        let g = quantile_pde_solve_fn(&model, &Gaussian::new(-0.2, 1.5).unwrap(), &cfg).unwrap();
        for i in 0..f.times.len() {
            assert!((f.mean(i) - f.mean(0)).abs() < 1e-10);
            assert!(f.values[i].windows(2).all(|w| w[1] > w[0]));
        }
        for p in [2.0, 4.0] {
            let w: Vec<f64> = (0..f.times.len()).map(|i| discrete_wpp(&f.values[i], &g.values[i], p)).collect();
            assert!(w.windows(2).all(|v| v[1] <= v[0] + 1e-6), "p={p}: {w:?}");
        }
    }

    #[test]
    fn quantile_solver_rejects_bad_input() {
        let model = logistic_demo(1.0).unwrap();
        let cfg = QuantileConfig { m: 4, dt: 1e-3, t_end: 0.1, output_dt: None };
        assert!(matches!(quantile_pde_solve(&model, &[0.0, 1.0, 1.0, 2.0], &cfg), Err(Error::NonMonotone(_))));
        assert!(quantile_pde_solve(&model, &[0.0, 1.0], &cfg).is_err());
    }

    #[test]
    fn dissipation_rate_examples() {
        let model = CoefficientModel::with_primitives("a=1", |_| 1.0, |_| 0.0, |u| u, |_| 0.0);
        let u = interior_grid(50);
        let x: Vec<f64> = u.clone();
        let y: Vec<f64> = u.iter().map(|v| 2.0 * v).collect();
        assert!((dissipation_rate(&model, &x, &y, 2.0).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(dissipation_rate(&model, &x, &x, 2.0).unwrap(), 0.0);
        let shifted: Vec<f64> = x.iter().map(|v| v + 0.3).collect();
        assert!(dissipation_rate(&model, &x, &shifted, 3.0).unwrap().abs() < 1e-20);
        assert!(dissipation_rate(&model, &x, &y, 1.5).is_err());
        // faces cover [u_1, u_m] = [1/(m+1), m/(m+1)]
        let m = x.len() as f64;
        assert!((scheme_dissipation_rate(&model, &x, &y, 2.0).unwrap() - 0.5 * (m - 1.0) / (m + 1.0)).abs() < 1e-12);
        let flat = vec![0.0; 50];
        assert!(dissipation_rate(&model, &flat, &y, 2.0).is_err());
    }

    #[test]
    fn dissipation_identity_trivial_cases() {
        let model = logistic_demo(1.0).unwrap();
        let g = Gaussian::new(0.0, 1.0).unwrap();
        let r = dissipation_identity_check(&model, &g, &g, 2.0, 64, 1e-3, None, 0.2).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        let shifted = Gaussian::new(0.5, 1.0).unwrap();
        let r = dissipation_identity_check(&model, &g, &shifted, 2.0, 64, 1e-3, None, 0.2).unwrap();
        assert!(r.lhs.abs() < 1e-12 && r.rhs.abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn weighted_l2_examples() {
        let x = [0.0, 0.5, 1.0];
        let f = [0.2, 0.2, 0.2];
        let g = [0.0, 0.0, 0.0];
        assert!((weighted_l2(&f, &g, &[1.0; 3], &x).unwrap() - 0.04).abs() < 1e-15);
        assert_eq!(weighted_l2(&f, &f, &[1.0; 3], &x).unwrap(), 0.0);
        assert!(weighted_l2(&f, &g, &[1.0, 0.0, 1.0], &x).is_err());
    }
}
