//! Stationary solutions `F_∞ = Ψ⁻¹(· + x̄)` with `Ψ(u) = ∫_{1/2}^u a/(2B)`.
//!
//! `Ψ` is tabulated once per model on a Chebyshev grid (cumulative quadrature
//! outward from `1/2`) and refined on demand: `Ψ(u)` is the nearest table value
//! plus a short adaptive integral, so the table only serves as a cache.

use std::io::Write;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::measure::{chebyshev_grid, EndBehavior, QuantileFn, QuantileProfile};
use crate::model::{check_conditions, e2_integral, CoefficientModel, TriState};
use crate::quadrature::{integrate, integrate_singular, integrate_toward, Improper, Tolerance};
use crate::roots::solve_monotone;

pub const PSI_TABLE_SIZE: usize = 2048;
const PSI_TOL: f64 = 1e-10;
const PIECE_TOL: Tolerance = Tolerance { abs: 1e-14, rel: 1e-13, max_intervals: 400 };

/// Tabulated `Ψ` for a model satisfying E1, with a centering offset `x̄`.
#[derive(Debug, Clone)]
pub struct StationaryProfile {
    model: Arc<CoefficientModel>,
    grid: Vec<f64>,
    psi_table: Vec<f64>,
    /// `Ψ(0+)` and `Ψ(1−)`; `Divergent` means `∓∞`.
    lower_limit: Improper,
    upper_limit: Improper,
    first_abs_moment: Improper,
    xbar: f64,
}

impl StationaryProfile {
    pub fn new(model: Arc<CoefficientModel>) -> Result<Self> {
        let report = check_conditions(&model, 512, 1e-12)?;
        if report.e1 != TriState::Holds {
            return Err(Error::NoStationaryFamily(format!(
                "E1 is {:?} for model '{}' (B(1) = {:.3e}, min interior B = {:.3e})",
                report.e1,
                model.name(),
                report.b_at_one,
                report.b_min_interior
            )));
        }
        let integrand = |u: f64| model.a(u) / (2.0 * model.big_b(u));
        let grid = chebyshev_grid(PSI_TABLE_SIZE);
        let mid = grid.partition_point(|&u| u < 0.5);
        let mut psi_table = vec![0.0; grid.len()];
        let mut acc = 0.0;
        let mut prev = 0.5;
        for k in mid..grid.len() {
            acc += integrate(&integrand, prev, grid[k], PIECE_TOL).value;
            psi_table[k] = acc;
            prev = grid[k];
        }
        let (mut acc, mut prev) = (0.0, 0.5);
        for k in (0..mid).rev() {
            acc -= integrate(&integrand, grid[k], prev, PIECE_TOL).value;
            psi_table[k] = acc;
            prev = grid[k];
        }
        if let Some(k) = psi_table.iter().position(|v| !v.is_finite()) {
            return Err(Error::Divergent(format!("Ψ is not finite at u = {}", grid[k])));
        }
        if psi_table.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::NonMonotone("Ψ table decreases; a/2B must be nonnegative".into()));
        }
        let g0 = grid[0];
        let g1 = 1.0 - grid[grid.len() - 1];
        let lower_limit = match integrate_toward(&integrand, 0.0, g0, false, PSI_TOL) {
            Improper::Finite(v) => Improper::Finite(psi_table[0] - v),
            other => other,
        };
        let upper_limit = match integrate_toward(&integrand, 1.0, g1, true, PSI_TOL) {
            Improper::Finite(v) => Improper::Finite(psi_table[grid.len() - 1] + v),
            other => other,
        };
        let first_abs_moment = e2_integral(&model, PSI_TOL);
        Ok(Self { model, grid, psi_table, lower_limit, upper_limit, first_abs_moment, xbar: 0.0 })
    }

    pub fn with_xbar(mut self, xbar: f64) -> Self {
        self.xbar = xbar;
        self
    }

    pub fn model(&self) -> &CoefficientModel {
        &self.model
    }

    pub fn xbar(&self) -> f64 {
        self.xbar
    }

    pub fn limits(&self) -> (Improper, Improper) {
        (self.lower_limit, self.upper_limit)
    }

    /// `∫|Ψ⁻¹ tail|` in Fubini form: finite iff E2 holds.
    pub fn first_abs_moment(&self) -> Improper {
        self.first_abs_moment
    }

    pub fn table(&self) -> (&[f64], &[f64]) {
        (&self.grid, &self.psi_table)
    }

    fn integrand(&self, u: f64) -> f64 {
        self.model.a(u) / (2.0 * self.model.big_b(u))
    }

    /// `Ψ(anchor node k) + ∫_{grid[k]}^u a/2B`.
    fn psi_from(&self, k: usize, u: f64) -> f64 {
        let f = |v: f64| self.integrand(v);
        self.psi_table[k] + integrate(&f, self.grid[k], u, PIECE_TOL).value
    }

    fn nearest_node(&self, u: f64) -> usize {
        let k = self.grid.partition_point(|&g| g < u);
        if k == 0 {
            0
        } else if k == self.grid.len() {
            k - 1
        } else if u - self.grid[k - 1] < self.grid[k] - u {
            k - 1
        } else {
            k
        }
    }

    /// `Ψ(u)` for `u ∈ [0, 1]`; at the endpoints the (possibly infinite) limit.
    pub fn psi(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::OutOfDomain { value: u, domain: "[0, 1]" });
        }
        Ok(self.psi_unchecked(u))
    }

    fn psi_unchecked(&self, u: f64) -> f64 {
        if u == 0.5 {
            return 0.0;
        }
        if u <= 0.0 {
            return limit_value(self.lower_limit, f64::NEG_INFINITY);
        }
        if u >= 1.0 {
            return limit_value(self.upper_limit, f64::INFINITY);
        }
        self.psi_from(self.nearest_node(u), u)
    }

    /// `Ψ⁻¹(x)` to `|Ψ(u) − x| ≤ tol`, clamped to 0 / 1 beyond finite limits.
    pub fn psi_inverse(&self, x: f64, tol: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let last = self.grid.len() - 1;
        if x < self.psi_table[0] {
            if let Improper::Finite(l) = self.lower_limit {
                if x <= l {
                    return 0.0;
                }
            }
            let hi = self.grid[0];
            let mut lo = hi;
            loop {
                lo *= 0.5;
                if lo < f64::MIN_POSITIVE {
                    return 0.0;
                }
                if self.psi_from(0, lo) <= x {
                    break;
                }
            }
            let f = |u: f64| self.psi_from(0, u);
            return solve_monotone(&f, x, lo, hi, tol);
        }
        if x > self.psi_table[last] {
            if let Improper::Finite(l) = self.upper_limit {
                if x >= l {
                    return 1.0;
                }
            }
            let lo = self.grid[last];
            let mut gap = 1.0 - lo;
            let hi = loop {
                gap *= 0.5;
                let u = 1.0 - gap;
                if u >= 1.0 {
                    return 1.0;
                }
                if self.psi_from(last, u) >= x {
                    break u;
                }
            };
            let f = |u: f64| self.psi_from(last, u);
            return solve_monotone(&f, x, lo, hi, tol);
        }
        let k = self.psi_table.partition_point(|&v| v <= x).clamp(1, last) - 1;
        let f = |u: f64| self.psi_from(k, u);
        solve_monotone(&f, x, self.grid[k], self.grid[k + 1], tol)
    }

    /// `F_∞(x) = Ψ⁻¹(x + x̄)`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.psi_inverse(x + self.xbar, 1e-13)
    }

    /// `p_∞(x) = 2B(F_∞(x)) / a(F_∞(x))`, the derivative of `F_∞`.
    pub fn density(&self, x: f64) -> f64 {
        let u = self.cdf(x);
        if u <= 0.0 || u >= 1.0 {
            return 0.0;
        }
        2.0 * self.model.big_b(u) / self.model.a(u)
    }

    /// `∫₀¹ Ψ(u) du`, via `−∫₀^½ u·a/2B + ∫_½^1 (1−u)·a/2B`.
    pub fn psi_mean(&self) -> Result<f64> {
        let left = |u: f64| u * self.integrand(u);
        let right = |u: f64| (1.0 - u) * self.integrand(u);
        let l = integrate_singular(&left, 0.0, 0.5, true, false, PSI_TOL);
        let r = integrate_singular(&right, 0.5, 1.0, false, true, PSI_TOL);
        match (l, r) {
            (Improper::Finite(l), Improper::Finite(r)) => Ok(r - l),
            _ => Err(Error::Divergent("Ψ has no finite mean (E2 fails)".into())),
        }
    }

    /// Mean of `F_∞ = Ψ⁻¹(· + x̄)`: `∫Ψ − x̄`.
    pub fn mean(&self) -> Result<f64> {
        Ok(self.psi_mean()? - self.xbar)
    }

    /// `x̄ = ∫₀¹ (Ψ − F₀⁻¹)`: the member of the family with the same mean as `F₀`.
    pub fn centering_offset(&self, f0_inv: &dyn QuantileFn) -> Result<f64> {
        Ok(self.psi_mean()? - quantile_mean(f0_inv)?)
    }

    /// Tabulated `F_∞⁻¹ = Ψ − x̄` as a piecewise-linear profile.
    pub fn quantile_profile(&self) -> Result<QuantileProfile> {
        let end = |l: Improper| match l {
            Improper::Finite(_) => EndBehavior::Clamped,
            _ => EndBehavior::Divergent,
        };
        let values = self.psi_table.iter().map(|v| v - self.xbar).collect();
        QuantileProfile::new(self.grid.clone(), values, end(self.lower_limit), end(self.upper_limit))
    }

    /// CSV `(u, psi)` over the cached table.
    pub fn write_psi_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["u", "psi"])?;
        for (u, p) in self.grid.iter().zip(&self.psi_table) {
            wr.write_record([u.to_string(), p.to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }

    /// CSV `(x, F)` on the given points.
    pub fn write_cdf_csv<W: Write>(&self, w: W, xs: &[f64]) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["x", "F"])?;
        for &x in xs {
            wr.write_record([x.to_string(), self.cdf(x).to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }
}

impl QuantileFn for StationaryProfile {
    fn quantile(&self, u: f64) -> f64 {
        self.psi_unchecked(u) - self.xbar
    }
}

fn limit_value(l: Improper, infinite: f64) -> f64 {
    match l {
        Improper::Finite(v) => v,
        _ => infinite,
    }
}

/// `∫₀¹ F⁻¹(u) du` with refinement toward both ends; exact piecewise for step CDFs.
pub fn quantile_mean(finv: &dyn QuantileFn) -> Result<f64> {
    let mut cuts = vec![0.0, 0.5, 1.0];
    if let Some(levels) = finv.jump_levels() {
        cuts.extend(levels.into_iter().filter(|&u| u > 0.0 && u < 1.0));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
    }
    let f = |u: f64| finv.quantile(u);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let piece = if lo > 0.0 && hi < 1.0 {
            // constant between jump levels; probe the middle to stay off the jumps
            let r = integrate(&f, lo, hi, Tolerance::default());
            Improper::Finite(r.value)
        } else {
            integrate_singular(&f, lo, hi, lo == 0.0, hi == 1.0, PSI_TOL)
        };
        match piece {
            Improper::Finite(v) => total += v,
            _ => return Err(Error::Divergent("initial law has no finite first moment".into())),
        }
    }
    Ok(total)
}

/// `∫|Ψ⁻¹|` for models with E1; `+∞` flag when E2 fails.
pub fn stationary_first_moment(model: &CoefficientModel) -> Result<Improper> {
    let report = check_conditions(model, 512, 1e-12)?;
    if report.e1 != TriState::Holds {
        return Err(Error::NoStationaryFamily(format!("E1 is {:?} for model '{}'", report.e1, model.name())));
    }
    Ok(report.e2_integral)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violated,
    Undetermined,
}

/// Partial suprema of one Hardy functional at increasing depths.
#[derive(Debug, Clone, Serialize)]
pub struct HardySide {
    pub verdict: Verdict,
    /// `(depth, sup, argmax u)` for each depth checked.
    pub partial_sups: Vec<(usize, f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HardyReport {
    pub verdict: Verdict,
    /// `sup_{u ≤ 1/2} u ∫_u^{1/2} (a/2B)²`
    pub left: HardySide,
    /// `sup_{u ≥ 1/2} (1−u) ∫_{1/2}^u (a/2B)²`
    pub right: HardySide,
}

pub const HARDY_DEPTHS: [usize; 3] = [20, 30, 40];

/// Evaluates both Hardy suprema on the geometric grid `1/2 ∓ (1/2 − 2^{-k}/2)`
/// and classifies them by how the partial suprema behave across depths.
pub fn hardy_poincare_check(profile: &StationaryProfile) -> HardyReport {
    let left = hardy_side(profile, false);
    let right = hardy_side(profile, true);
    let verdict = match (left.verdict, right.verdict) {
        (Verdict::Satisfied, Verdict::Satisfied) => Verdict::Satisfied,
        (Verdict::Violated, _) | (_, Verdict::Violated) => Verdict::Violated,
        _ => Verdict::Undetermined,
    };
    HardyReport { verdict, left, right }
}

fn hardy_side(profile: &StationaryProfile, upper: bool) -> HardySide {
    let sq = |v: f64| {
        let g = profile.integrand(v);
        g * g
    };
    let depth_max = HARDY_DEPTHS[HARDY_DEPTHS.len() - 1];
    let mut inner = 0.0;
    let mut prev: f64 = 0.5;
    let mut sup = 0.0f64;
    let mut arg = 0.5;
    let mut partial_sups = Vec::new();
    for k in 1..=depth_max {
        let gap = 0.5f64.powi(k as i32 + 1);
        let u = if upper { 1.0 - gap } else { gap };
        inner += integrate(&sq, prev.min(u), prev.max(u), Tolerance::abs(1e-12)).value;
        prev = u;
        let value = gap * inner;
        if !(value <= sup) {
            sup = value;
            arg = u;
        }
        if HARDY_DEPTHS.contains(&k) {
            partial_sups.push((k, sup, arg));
        }
    }
    let s: Vec<f64> = partial_sups.iter().map(|p| p.1).collect();
    let verdict = if s.iter().any(|v| v.is_nan()) {
        Verdict::Undetermined
    } else if s.iter().any(|v| v.is_infinite()) || (s[1] >= 1.5 * s[0] && s[2] >= 1.5 * s[1]) {
        Verdict::Violated
    } else if (s[2] - s[1]).abs() <= 1e-3 * s[2].max(1e-300) && (s[1] - s[0]).abs() <= 1e-2 * s[1].max(1e-300) {
        Verdict::Satisfied
    } else {
        Verdict::Undetermined
    };
    HardySide { verdict, partial_sups }
}

/// The five-piece family `F_{∞,h}` solving the stationary equation for the
/// degenerate example; members with different `h` are not translates.
pub fn degenerate_family(h: f64, x: f64) -> Result<f64> {
    if !(h >= 0.0) {
        return Err(invalid(format!("h must be >= 0, got {h}")));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Ok(if x < -r {
        0.0
    } else if x < 0.0 {
        0.5 - x * x
    } else if x < h {
        0.5
    } else if x < h + r {
        0.5 + (x - h) * (x - h)
    } else {
        1.0
    })
}

/// `φ(x) = exp(−1/(1 − z²))`, `z = (x − center)/radius`, supported on `|z| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub radius: f64,
}

impl Bump {
    pub fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }

    /// `(φ, φ′, φ″)` at `x`.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let z = (x - self.center) / self.radius;
        if z.abs() >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        let s = 1.0 - z * z;
        let phi = (-1.0 / s).exp();
        let g1 = -2.0 * z / (s * s);
        let g2 = -2.0 / (s * s) - 8.0 * z * z / (s * s * s);
        let r = self.radius;
        (phi, phi * g1 / r, phi * (g2 + g1 * g1) / (r * r))
    }
}

/// `count` bumps with centers spread over `[lo, hi]`, each overlapping its neighbours.
pub fn bump_family(lo: f64, hi: f64, count: usize) -> Vec<Bump> {
    let spacing = (hi - lo) / count as f64;
    (0..count)
        .map(|k| Bump { center: lo + (k as f64 + 0.5) * spacing, radius: 1.5 * spacing })
        .collect()
}

/// `max_φ |∫ ½A(F)φ″ + B(F)φ′ dx|`: the weak residual of `½(A(F))″ − (B(F))′ = 0`.
pub fn stationary_residual(model: &CoefficientModel, f: &(dyn Fn(f64) -> f64 + Sync), bumps: &[Bump]) -> f64 {
    use rayon::prelude::*;
    bumps
        .par_iter()
        .map(|bump| {
            let integrand = |x: f64| {
                let (_, d1, d2) = bump.eval(x);
                let u = f(x);
                0.5 * model.big_a(u) * d2 + model.big_b(u) * d1
            };
            let (lo, hi) = bump.support();
            integrate(&integrand, lo, hi, Tolerance { abs: 1e-12, rel: 1e-12, max_intervals: 2000 }).value.abs()
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Gaussian, StepCdf};
    use crate::model::{degenerate_demo, logistic_demo, porous_medium};

    fn logistic() -> StationaryProfile {
        StationaryProfile::new(Arc::new(logistic_demo(1.0).unwrap())).unwrap()
    }

    fn uniform_model() -> Arc<CoefficientModel> {
        // a = u(1−u), B = u(1−u): Ψ(u) = (u − 1/2)/2 has finite limits ±1/4
        Arc::new(CoefficientModel::with_primitives(
            "flat",
            |u| u * (1.0 - u),
            |u| 1.0 - 2.0 * u,
            |u| u * u / 2.0 - u * u * u / 3.0,
            |u| u * (1.0 - u),
        ))
    }

    #[test]
    fn psi_logistic_values() {
        let s = logistic();
        assert_eq!(s.psi(0.5).unwrap(), 0.0);
        assert!((s.psi(0.75).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-12);
        for u in [1e-9f64, 1e-4, 0.1, 0.49, 0.9, 1.0 - 1e-6] {
            let exact = 0.5 * (u / (1.0 - u)).ln();
            assert!((s.psi(u).unwrap() - exact).abs() < 1e-10, "u={u}");
        }
        assert_eq!(s.limits(), (Improper::Divergent, Improper::Divergent));
        assert_eq!(s.psi(1.0).unwrap(), f64::INFINITY);
        assert!(s.psi(1.5).is_err());
    }

    #[test]
    fn psi_inverse_logistic() {
        let s = logistic();
        assert!((s.psi_inverse(0.0, 1e-12) - 0.5).abs() < 1e-12);
        for k in 0..=64 {
            let x = -8.0 + 0.25 * k as f64;
            let exact = 1.0 / (1.0 + (-2.0 * x).exp());
            assert!((s.psi_inverse(x, 1e-11) - exact).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn round_trip() {
        let s = logistic();
        for k in 1..200 {
            let u = k as f64 / 200.0;
            let x = s.psi(u).unwrap();
            assert!((s.psi_inverse(x, 1e-12) - u).abs() < 1e-11);
        }
    }

    #[test]
    fn porous_medium_has_no_family() {
        let m = Arc::new(porous_medium(2.0).unwrap());
        assert!(matches!(StationaryProfile::new(m), Err(Error::NoStationaryFamily(_))));
        assert!(StationaryProfile::new(Arc::new(degenerate_demo())).is_err());
    }

    #[test]
    fn finite_limits_clamp() {
        let s = StationaryProfile::new(uniform_model()).unwrap();
        let (lo, hi) = s.limits();
        assert!((lo.finite().unwrap() + 0.25).abs() < 1e-9);
        assert!((hi.finite().unwrap() - 0.25).abs() < 1e-9);
        assert_eq!(s.psi_inverse(0.3, 1e-12), 1.0);
        assert_eq!(s.psi_inverse(-0.3, 1e-12), 0.0);
        assert!((s.psi_inverse(0.1, 1e-13) - 0.7).abs() < 1e-12);
        assert!((s.density(0.0) - 2.0).abs() < 1e-9);
        let p = s.quantile_profile().unwrap();
        assert_eq!(p.ends(), (EndBehavior::Clamped, EndBehavior::Clamped));
    }

    #[test]
    fn cdf_translation() {
        let s = logistic();
        let t = s.clone().with_xbar(0.3);
        assert_eq!(t.cdf(0.0), s.cdf(0.3));
        assert!((s.cdf(0.0) - 0.5).abs() < 1e-13);
        assert!((s.cdf(1.0) - 1.0 / (1.0 + (-2f64).exp())).abs() < 1e-12);
        let x = 0.4;
        let u = s.cdf(x);
        assert!((s.density(x) - 2.0 * u * (1.0 - u)).abs() < 1e-12);
    }

    #[test]
    fn first_moment() {
        let m = logistic_demo(1.0).unwrap();
        let v = stationary_first_moment(&m).unwrap().finite().unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-8);
        let m3 = logistic_demo(3.0).unwrap();
        let v3 = stationary_first_moment(&m3).unwrap().finite().unwrap();
        assert!((v3 - 3.0 * v).abs() < 1e-8);
        // B ~ u² at 0 with a(0) > 0
        let heavy = CoefficientModel::with_primitives(
            "heavy",
            |_| 1.0,
            |u| 2.0 * u - 3.0 * u * u,
            |u| u,
            |u| u * u * (1.0 - u),
        );
        assert_eq!(stationary_first_moment(&heavy).unwrap(), Improper::Divergent);
        assert!(stationary_first_moment(&porous_medium(2.0).unwrap()).is_err());
    }

    #[test]
    fn centering() {
        let s = logistic();
        assert!(s.psi_mean().unwrap().abs() < 1e-10);
        let x0 = s.centering_offset(&s).unwrap();
        assert!(x0.abs() < 1e-9);
        let shifted = |u: f64| s.quantile(u) + 0.7;
        assert!((s.centering_offset(&shifted).unwrap() + 0.7).abs() < 1e-9);
        let g = Gaussian::new(0.0, 1.0).unwrap();
        assert!(s.centering_offset(&g).unwrap().abs() < 1e-8);
        let step = StepCdf::new(vec![(-1.0, 0.25), (2.0, 0.75)]).unwrap();
        let xbar = s.centering_offset(&step).unwrap();
        assert!((xbar + 1.25).abs() < 1e-9);
        let centered = s.clone().with_xbar(xbar);
        assert!((centered.mean().unwrap() - step.mean()).abs() < 1e-9);
        let cauchy = |u: f64| (std::f64::consts::PI * (u - 0.5)).tan();
        assert!(s.centering_offset(&cauchy).is_err());
    }

    #[test]
    fn hardy_verdicts() {
        let s = logistic();
        let r = hardy_poincare_check(&s);
        assert_eq!(r.verdict, Verdict::Satisfied, "{r:?}");
        // b(1) = 0 with a ≡ 1: B = 1 − (1−u)² ... B(u) = u(1−u)² + ... keep B ~ (1−u)² at 1
        let heavy = StationaryProfile::new(Arc::new(CoefficientModel::with_primitives(
            "heavy-right",
            |_| 1.0,
            |u| (1.0 - u) * (1.0 - 3.0 * u),
            |u| u,
            |u| u * (1.0 - u) * (1.0 - u),
        )))
        .unwrap();
        let r = hardy_poincare_check(&heavy);
        assert_eq!(r.right.verdict, Verdict::Violated, "{r:?}");
        assert_eq!(r.left.verdict, Verdict::Satisfied, "{r:?}");
        assert_eq!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn degenerate_family_values() {
        assert_eq!(degenerate_family(0.0, 0.0).unwrap(), 0.5);
        for h in [0.0, 0.5, 3.0] {
            assert_eq!(degenerate_family(h, -1.0).unwrap(), 0.0);
        }
        assert_eq!(degenerate_family(1.0, 0.5).unwrap(), 0.5);
        assert!(degenerate_family(-0.1, 0.0).is_err());
        assert_eq!(degenerate_family(0.5, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn bump_derivatives_match_differences() {
        let b = Bump { center: 0.3, radius: 0.7 };
        let h = 1e-5;
        for x in [-0.2, 0.1, 0.3, 0.55, 0.9] {
            let (_, d1, d2) = b.eval(x);
            let fd1 = (b.eval(x + h).0 - b.eval(x - h).0) / (2.0 * h);
            let fd2 = (b.eval(x + h).1 - b.eval(x - h).1) / (2.0 * h);
            assert!((d1 - fd1).abs() < 1e-8, "x={x}");
            assert!((d2 - fd2).abs() < 1e-7, "x={x}");
        }
        assert_eq!(b.eval(1.0), (0.0, 0.0, 0.0));
    }

    #[test]
    fn residuals() {
        let s = logistic();
        let m = logistic_demo(1.0).unwrap();
        let bumps = bump_family(-4.0, 4.0, 12);
        let f = |x: f64| s.cdf(x);
        assert!(stationary_residual(&m, &f, &bumps) <= 1e-6);
        let shifted = |x: f64| s.cdf(x + 0.3);
        assert!(stationary_residual(&m, &shifted, &bumps) <= 1e-6);
        let g = Gaussian::new(0.0, 1.0).unwrap();
        let gf = |x: f64| g.cdf(x);
        assert!(stationary_residual(&m, &gf, &bumps) > 1e-3);
    }

    #[test]
    fn degenerate_family_is_stationary() {
        let m = degenerate_demo();
        for h in [0.0, 0.5, 1.0] {
            let f = move |x: f64| degenerate_family(h, x).unwrap();
            let bumps = bump_family(-1.5, h + 1.5, 20);
            let r = stationary_residual(&m, &f, &bumps);
            assert!(r <= 1e-6, "h={h}: {r}");
        }
        // a plain translate of the left half is not a member
        let wrong = |x: f64| (0.5 + x).clamp(0.0, 1.0);
        assert!(stationary_residual(&m, &wrong, &bump_family(-1.0, 1.0, 10)) > 1e-4);
    }

    #[test]
    fn csv_exports() {
        let s = logistic();
        let mut buf = Vec::new();
        s.write_psi_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("u,psi\n"));
        assert_eq!(text.lines().count(), PSI_TABLE_SIZE + 1);
        let mut buf = Vec::new();
        s.write_cdf_csv(&mut buf, &[0.0]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,F\n0,0.5\n");
    }
}
