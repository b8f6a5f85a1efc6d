//! Distribution functions, pseudo-inverses and one-dimensional Wasserstein distances.
//!
//! All Wasserstein evaluators return `W_p^p`; take the `p`-th root at the call site.
//! Three independent routes are provided:
//!
//! * quantile form `∫₀¹ |F⁻¹ − G⁻¹|ᵖ du` ([`wasserstein_pp_quantile`]),
//! * sorted samples `(1/n) Σ |yᵢ − y'ᵢ|ᵖ` ([`wasserstein_pp_sorted`]) and its
//!   samples-vs-law variant ([`wasserstein_pp_samples_vs_profile`]),
//! * the CDF double integral `p(p−1) ∬_{x<y} ([G(x)−F(y)]⁺ + [F(x)−G(y)]⁺)(y−x)^{p−2}`,
//!   evaluated exactly for step functions ([`wasserstein_pp_double_integral`]).

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate, integrate_singular, Improper, Tolerance};

/// Anything that can evaluate a pseudo-inverse `F⁻¹(u)` on `(0, 1)`.
pub trait QuantileFn: Sync {
    fn quantile(&self, u: f64) -> f64;

    /// Levels in `(0, 1)` where the quantile jumps, if it is a step function.
    fn jump_levels(&self) -> Option<Vec<f64>> {
        None
    }
}

impl<F: Fn(f64) -> f64 + Sync> QuantileFn for F {
    fn quantile(&self, u: f64) -> f64 {
        self(u)
    }
}

/// Step CDF of a discrete law with finitely many atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCdf {
    locations: Vec<f64>,
    masses: Vec<f64>,
    cumulative: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AtomRow {
    location: f64,
    mass: f64,
}

impl StepCdf {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(invalid("step CDF needs at least one atom"));
        }
        let mut locations = Vec::with_capacity(atoms.len());
        let mut masses = Vec::with_capacity(atoms.len());
        for (i, &(x, m)) in atoms.iter().enumerate() {
            if !x.is_finite() || !(m > 0.0) || !m.is_finite() {
                return Err(invalid(format!("atom {i}: location {x}, mass {m}")));
            }
            if i > 0 && x <= locations[i - 1] {
                return Err(Error::NonMonotone(format!("atom locations must be strictly increasing at {i}")));
            }
            locations.push(x);
            masses.push(m);
        }
        let cumulative: Vec<f64> = masses
            .iter()
            .scan(0.0, |acc, m| {
                *acc += m;
                Some(*acc)
            })
            .collect();
        let total = *cumulative.last().unwrap();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("masses sum to {total}, expected 1")));
        }
        Ok(Self { locations, masses, cumulative })
    }

    /// Empirical distribution of a sample (ties merged).
    pub fn empirical(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(invalid("empty sample"));
        }
        let mut xs = samples.to_vec();
        xs.sort_by(f64::total_cmp);
        let w = 1.0 / xs.len() as f64;
        let mut atoms: Vec<(f64, f64)> = Vec::new();
        let mut count = 0usize;
        for (i, &x) in xs.iter().enumerate() {
            count += 1;
            if i + 1 == xs.len() || xs[i + 1] != x {
                atoms.push((x, count as f64 * w));
                count = 0;
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if let Some(last) = atoms.last_mut() {
            last.1 += 1.0 - total;
        }
        Self::new(atoms)
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// `F(x) = μ((−∞, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.locations.partition_point(|&l| l <= x);
        if k == 0 { 0.0 } else { self.cumulative[k - 1].min(1.0) }
    }

    pub fn mean(&self) -> f64 {
        self.locations.iter().zip(&self.masses).map(|(x, m)| x * m).sum()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for (&location, &mass) in self.locations.iter().zip(&self.masses) {
            wr.serialize(AtomRow { location, mass })?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut atoms = Vec::new();
        for row in rd.deserialize() {
            let row: AtomRow = row?;
            atoms.push((row.location, row.mass));
        }
        Self::new(atoms)
    }
}

impl QuantileFn for StepCdf {
    /// `inf{x : F(x) > u}`: the first atom whose cumulative mass strictly exceeds `u`.
    fn quantile(&self, u: f64) -> f64 {
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.locations[k.min(self.locations.len() - 1)]
    }

    fn jump_levels(&self) -> Option<Vec<f64>> {
        Some(self.cumulative[..self.cumulative.len() - 1].to_vec())
    }
}

/// How a tabulated pseudo-inverse behaves beyond its outermost grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndBehavior {
    /// Constant continuation (bounded support).
    Clamped,
    /// Unbounded; continued linearly with the outermost slope.
    Divergent,
}

/// Piecewise-linear tabulation of a nondecreasing pseudo-inverse on a grid in `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileProfile {
    grid: Vec<f64>,
    values: Vec<f64>,
    lower: EndBehavior,
    upper: EndBehavior,
}

impl QuantileProfile {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, lower: EndBehavior, upper: EndBehavior) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::LengthMismatch { left: grid.len(), right: values.len() });
        }
        if grid.len() < 2 {
            return Err(invalid("quantile profile needs at least two nodes"));
        }
        if grid.iter().any(|&u| !(u > 0.0 && u < 1.0)) {
            return Err(invalid("profile grid must lie in (0, 1)"));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotone("profile grid must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("profile values must be finite"));
        }
        if let Some(k) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::NonMonotone(format!("profile values decrease at node {k}")));
        }
        Ok(Self { grid, values, lower, upper })
    }

    /// Tabulates `f` on `grid`.
    pub fn from_fn(f: &dyn QuantileFn, grid: Vec<f64>, lower: EndBehavior, upper: EndBehavior) -> Result<Self> {
        let values = grid.iter().map(|&u| f.quantile(u)).collect();
        Self::new(grid, values, lower, upper)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ends(&self) -> (EndBehavior, EndBehavior) {
        (self.lower, self.upper)
    }

    /// Same grid, values shifted by `c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self { values: self.values.iter().map(|v| v + c).collect(), ..self.clone() }
    }

    /// `∫₀¹ F⁻¹(u) du`, exact for the piecewise-linear interpolant.
    pub fn mean(&self) -> f64 {
        let n = self.grid.len();
        let mut s = 0.0;
        for k in 0..n - 1 {
            s += 0.5 * (self.values[k] + self.values[k + 1]) * (self.grid[k + 1] - self.grid[k]);
        }
        let (u0, v0) = (self.grid[0], self.values[0]);
        s += match self.lower {
            EndBehavior::Clamped => v0 * u0,
            EndBehavior::Divergent => u0 * (v0 - 0.5 * self.end_slope(false) * u0),
        };
        let (u1, v1) = (self.grid[n - 1], self.values[n - 1]);
        let w = 1.0 - u1;
        s += match self.upper {
            EndBehavior::Clamped => v1 * w,
            EndBehavior::Divergent => w * (v1 + 0.5 * self.end_slope(true) * w),
        };
        s
    }

    fn end_slope(&self, upper: bool) -> f64 {
        let n = self.grid.len();
        if upper {
            (self.values[n - 1] - self.values[n - 2]) / (self.grid[n - 1] - self.grid[n - 2])
        } else {
            (self.values[1] - self.values[0]) / (self.grid[1] - self.grid[0])
        }
    }
}

impl QuantileFn for QuantileProfile {
    fn quantile(&self, u: f64) -> f64 {
        let n = self.grid.len();
        if u <= self.grid[0] {
            return match self.lower {
                EndBehavior::Clamped => self.values[0],
                EndBehavior::Divergent => self.values[0] - self.end_slope(false) * (self.grid[0] - u),
            };
        }
        if u >= self.grid[n - 1] {
            return match self.upper {
                EndBehavior::Clamped => self.values[n - 1],
                EndBehavior::Divergent => self.values[n - 1] + self.end_slope(true) * (u - self.grid[n - 1]),
            };
        }
        let k = self.grid.partition_point(|&g| g <= u) - 1;
        let t = (u - self.grid[k]) / (self.grid[k + 1] - self.grid[k]);
        self.values[k] + t * (self.values[k + 1] - self.values[k])
    }
}

/// `n` points `(1 − cos(π(k+½)/n))/2`, clustered toward 0 and 1.
pub fn chebyshev_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 0.5 * (1.0 - (std::f64::consts::PI * (k as f64 + 0.5) / n as f64).cos()))
        .collect()
}

/// Gaussian law `N(mean, std²)`.
#[derive(Debug, Clone, Copy)]
pub struct Gaussian {
    pub mean: f64,
    pub std: f64,
    normal: Normal,
}

impl Gaussian {
    pub fn new(mean: f64, std: f64) -> Result<Self> {
        let normal = Normal::new(mean, std).map_err(|e| invalid(format!("gaussian: {e}")))?;
        Ok(Self { mean, std, normal })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.normal.cdf(x)
    }

    pub fn density(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.std;
        (-0.5 * z * z).exp() / (self.std * (2.0 * std::f64::consts::PI).sqrt())
    }
}

impl QuantileFn for Gaussian {
    fn quantile(&self, u: f64) -> f64 {
        self.normal.inverse_cdf(u)
    }
}

/// Checks `u ∈ (0, 1)` and evaluates the pseudo-inverse.
pub fn quantile(f: &dyn QuantileFn, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::OutOfDomain { value: u, domain: "(0, 1)" });
    }
    Ok(f.quantile(u))
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(invalid(format!("Wasserstein order must be >= 1, got {p}")));
    }
    Ok(())
}

/// `∫₀¹ |F⁻¹ − G⁻¹|ᵖ du`.
///
/// Exact when both sides are step functions. Otherwise `(0, 1)` is cut at the
/// known jump levels and each piece is integrated adaptively, refining
/// geometrically toward 0 and 1; a divergent tail gives `+∞`. If the tails
/// cannot be classified, the midpoint rule on `n_quad` panels decides: when
/// refinement from `n_quad/4` to `n_quad/2` to `n_quad` does not shrink the
/// increments the result is `+∞`.
pub fn wasserstein_pp_quantile(finv: &dyn QuantileFn, ginv: &dyn QuantileFn, p: f64, n_quad: usize) -> Result<f64> {
    check_p(p)?;
    if let (Some(lf), Some(lg)) = (finv.jump_levels(), ginv.jump_levels()) {
        let mut levels: Vec<f64> = lf.into_iter().chain(lg).filter(|&l| l > 0.0 && l < 1.0).collect();
        levels.push(0.0);
        levels.push(1.0);
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let mut total = 0.0;
        for w in levels.windows(2) {
            let width = w[1] - w[0];
            if width <= 0.0 {
                continue;
            }
            let mid = 0.5 * (w[0] + w[1]);
            total += width * (finv.quantile(mid) - ginv.quantile(mid)).abs().powf(p);
        }
        return Ok(total);
    }
    let mut cuts: Vec<f64> = finv.jump_levels().into_iter().chain(ginv.jump_levels()).flatten().collect();
    cuts.extend([0.0, 0.5, 1.0]);
    cuts.retain(|&u| (0.0..=1.0).contains(&u));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let integrand = |u: f64| (finv.quantile(u) - ginv.quantile(u)).abs().powf(p);
    let mut total = 0.0;
    let mut undetermined = false;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        match integrate_singular(&integrand, lo, hi, lo == 0.0, hi == 1.0, 1e-12) {
            Improper::Finite(v) => total += v,
            Improper::Divergent => return Ok(f64::INFINITY),
            Improper::Undetermined => undetermined = true,
        }
    }
    if !undetermined {
        return Ok(total);
    }
    if n_quad < 4 {
        return Err(invalid("n_quad must be >= 4"));
    }
    let midpoint = |n: usize| -> f64 {
        let h = 1.0 / n as f64;
        (0..n)
            .map(|k| {
                let u = (k as f64 + 0.5) * h;
                (finv.quantile(u) - ginv.quantile(u)).abs().powf(p)
            })
            .sum::<f64>()
            * h
    };
    let m1 = midpoint(n_quad / 4);
    let m2 = midpoint(n_quad / 2);
    let m3 = midpoint(n_quad);
    if !m3.is_finite() {
        return Ok(f64::INFINITY);
    }
    let (d1, d2) = ((m2 - m1).abs(), (m3 - m2).abs());
    if d2 > 1e-9 * (1.0 + m3.abs()) && d2 >= 0.98 * d1 {
        return Ok(f64::INFINITY);
    }
    Ok(m3)
}

/// `(1/n) Σ |yᵢ − y'ᵢ|ᵖ` over the increasing reorderings of `x` and `y`.
pub fn wasserstein_pp_sorted(x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    check_p(p)?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.is_empty() {
        return Err(invalid("empty sample"));
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let value = mean_gap_pp(&xs, &ys, p);
    debug_assert!(value <= mean_gap_pp(x, y, p) * (1.0 + 1e-12) + 1e-300);
    Ok(value)
}

/// `(1/n) Σ |xᵢ − yᵢ|ᵖ` in the given pairing; equals `W_p^p` when both are sorted.
pub fn mean_gap_pp(x: &[f64], y: &[f64], p: f64) -> f64 {
    let n = x.len() as f64;
    if p == 1.0 {
        x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum::<f64>() / n
    } else if p == 2.0 {
        x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / n
    } else if p.fract() == 0.0 && p <= 16.0 {
        let k = p as i32;
        x.iter().zip(y).map(|(a, b)| (a - b).abs().powi(k)).sum::<f64>() / n
    } else {
        x.iter().zip(y).map(|(a, b)| (a - b).abs().powf(p)).sum::<f64>() / n
    }
}

/// `W_p^p(μⁿ, μ) = Σᵢ ∫_{(i−1)/n}^{i/n} |yᵢ − F⁻¹(u)|ᵖ du` with `yᵢ` the sorted sample.
pub fn wasserstein_pp_samples_vs_profile(x: &[f64], finv: &dyn QuantileFn, p: f64) -> Result<f64> {
    check_p(p)?;
    if x.is_empty() {
        return Err(invalid("empty sample"));
    }
    let mut ys = x.to_vec();
    ys.sort_by(f64::total_cmp);
    let n = ys.len();
    // generous budget: end panels of tabulated profiles can hold many kinks
    let tol = Tolerance { abs: 1e-12 / n as f64, rel: 1e-10, max_intervals: 5000 };
    let mut total = 0.0;
    let mut converged = true;
    for (i, &y) in ys.iter().enumerate() {
        let lo = i as f64 / n as f64;
        let hi = (i + 1) as f64 / n as f64;
        let r = integrate(&|u: f64| (y - finv.quantile(u)).abs().powf(p), lo, hi, tol);
        converged &= r.converged;
        total += r.value;
    }
    if !total.is_finite() {
        return Ok(f64::INFINITY);
    }
    if !converged {
        return Err(Error::Quadrature("samples-vs-profile panel integration".into()));
    }
    Ok(total)
}

// p(p−1)·∬(y − x)^{p−2} over a cell product is a second difference of s ↦ sᵖ.
fn phi(s: f64, p: f64) -> f64 {
    if s <= 0.0 { 0.0 } else { s.powf(p) }
}

/// The CDF double-integral form of `W_p^p`, evaluated exactly for step CDFs.
///
/// Both step functions are constant on the cells between consecutive merged
/// atom locations, so the integrand is `(y − x)^{p−2}` times a constant on
/// every product of cells; `p(p−1)` times its integral is a second difference
/// of `s ↦ sᵖ`.
pub fn wasserstein_pp_double_integral(f: &StepCdf, g: &StepCdf, p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(invalid(format!("double-integral form needs p > 1, got {p}")));
    }
    let mut z: Vec<f64> = f.locations.iter().chain(&g.locations).copied().collect();
    z.sort_by(f64::total_cmp);
    z.dedup();
    let cells = z.len() - 1;
    // values on [z_j, z_{j+1})
    let fv: Vec<f64> = (0..cells).map(|j| f.cdf(z[j])).collect();
    let gv: Vec<f64> = (0..cells).map(|j| g.cdf(z[j])).collect();
    let mut total = 0.0;
    for j in 0..cells {
        for k in j..cells {
            let weight = (gv[j] - fv[k]).max(0.0) + (fv[j] - gv[k]).max(0.0);
            if weight == 0.0 {
                continue;
            }
            let area = if j == k {
                phi(z[j + 1] - z[j], p)
            } else {
                phi(z[k + 1] - z[j], p) - phi(z[k + 1] - z[j + 1], p) - phi(z[k] - z[j], p) + phi(z[k] - z[j + 1], p)
            };
            total += weight * area;
        }
    }
    Ok(total)
}

/// `tl(F, x) = 1_{x≥0}(1 − F(x)) + 1_{x≤0} F(x)`; both indicators fire at `x = 0`.
pub fn tail_fn(f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let fx = f(x);
    let mut v = 0.0;
    if x >= 0.0 {
        v += 1.0 - fx;
    }
    if x <= 0.0 {
        v += fx;
    }
    v
}
