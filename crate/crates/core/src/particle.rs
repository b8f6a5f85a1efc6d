//! Rank-based interacting particles, the reordered (sorted) system and coupled pairs.
//!
//! Particle `i` moves with drift `b(rᵢ)` and volatility `c_n + σ(rᵢ)` where
//! `rᵢ = #{j : X_j ≤ Xᵢ}/n` is its normalized rank. One Euler–Maruyama step
//! freezes both coefficients at the pre-step ranks. The reordered system keeps
//! positions sorted: rank `i` receives `b(i/n)` and `c_n + σ(i/n)`, then the
//! vector is re-sorted, which is the projection onto `y₁ ≤ … ≤ yₙ`.
//!
//! Noise comes from one ChaCha stream per particle (or rank) index derived from
//! the master seed, so runs are reproducible regardless of thread scheduling
//! and two coupled systems can share Brownian increments rank by rank.

use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Open01, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::measure::{mean_gap_pp, QuantileFn};
use crate::model::CoefficientModel;

// Stream id reserved for initial uniforms; Brownian streams use ids 0..n.
const INIT_STREAM: u64 = u64::MAX;

/// Rule producing the vanishing regularization `c_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum CnRule {
    /// `c₀ · n^{−α}`
    Power { c0: f64, alpha: f64 },
    Explicit { value: f64 },
}

impl Default for CnRule {
    fn default() -> Self {
        CnRule::Power { c0: 1.0, alpha: 0.25 }
    }
}

impl CnRule {
    pub fn value(&self, n: usize) -> f64 {
        match *self {
            CnRule::Power { c0, alpha } => c0 * (n as f64).powf(-alpha),
            CnRule::Explicit { value } => value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    #[default]
    Iid,
    /// Quantile evaluated at sorted uniforms: already-sorted initial positions.
    Stratified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    /// Particles keep their identity; ranks recomputed each step.
    #[default]
    Original,
    /// Sorted positions updated per rank and re-sorted.
    Reordered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub c_n_rule: CnRule,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub init_mode: InitMode,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default)]
    pub system: SystemKind,
}

impl SimConfig {
    pub fn new(n: usize, dt: f64, t_end: f64) -> Self {
        Self {
            n,
            dt,
            t_end,
            c_n_rule: CnRule::default(),
            seed: 0,
            init_mode: InitMode::Iid,
            snapshot_times: Vec::new(),
            system: SystemKind::Original,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n must be >= 1"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(invalid(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        let c = self.c_n();
        if !(c >= 0.0) || !c.is_finite() {
            return Err(invalid(format!("c_n must be >= 0, got {c}")));
        }
        if self.snapshot_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("snapshot_times must be sorted"));
        }
        if self.snapshot_times.iter().any(|&t| !(0.0..=self.t_end).contains(&t)) {
            return Err(invalid("snapshot_times must lie in [0, t_end]"));
        }
        Ok(())
    }

    pub fn c_n(&self) -> f64 {
        self.c_n_rule.value(self.n)
    }

    fn step_count(&self) -> usize {
        let r = self.t_end / self.dt;
        let k = r.round();
        if (r - k).abs() < 1e-9 * r.max(1.0) { k as usize } else { r.ceil() as usize }
    }

    fn time_at(&self, k: usize) -> f64 {
        (k as f64 * self.dt).min(self.t_end)
    }

    /// Recorded times: `0`, the requested snapshots and `t_end`.
    fn record_times(&self) -> Vec<f64> {
        let mut t: Vec<f64> = std::iter::once(0.0).chain(self.snapshot_times.iter().copied()).chain([self.t_end]).collect();
        t.sort_by(f64::total_cmp);
        t.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        t
    }
}

/// Independent standard-normal streams, one per index.
#[derive(Debug, Clone)]
pub struct NoiseBank {
    streams: Vec<ChaCha8Rng>,
}

impl NoiseBank {
    pub fn new(seed: u64, n: usize) -> Self {
        let streams = (0..n as u64)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                rng
            })
            .collect();
        Self { streams }
    }

    pub fn len(&self) -> usize {
        self.streams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.streams.is_empty()
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        out.par_iter_mut().zip(self.streams.par_iter_mut()).with_min_len(1024).for_each(|(g, rng)| {
            *g = rng.sample(StandardNormal);
        });
    }
}

/// `n` uniforms on `(0, 1)` from the initialization stream of `seed`.
pub fn initial_uniforms(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(INIT_STREAM);
    (0..n).map(|_| rng.sample::<f64, _>(Open01)).collect()
}

/// Per-rank drift `b(k/n)` and volatility `c_n + σ(k/n)`, `k = 1..n`.
#[derive(Debug, Clone)]
pub struct RankCoefficients {
    drift: Vec<f64>,
    vol: Vec<f64>,
}

impl RankCoefficients {
    pub fn new(model: &CoefficientModel, n: usize, c_n: f64) -> Self {
        let (drift, vol) = (1..=n)
            .map(|k| {
                let u = k as f64 / n as f64;
                (model.b(u), c_n + model.sigma(u))
            })
            .unzip();
        Self { drift, vol }
    }
}

/// Particle positions at one time.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub time: f64,
    pub positions: Vec<f64>,
    pub c_n: f64,
    pub model: Arc<CoefficientModel>,
}

/// Normalized ranks `#{j : X_j ≤ Xᵢ}/n`, ties broken by index.
pub fn rank_fractions(positions: &[f64]) -> Vec<f64> {
    let n = positions.len();
    let order = argsort(positions);
    let mut ranks = vec![0.0; n];
    for (k, &i) in order.iter().enumerate() {
        ranks[i] = (k + 1) as f64 / n as f64;
    }
    ranks
}

fn argsort(positions: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..positions.len()).collect();
    // stable sort keeps index order among ties
    order.sort_by(|&i, &j| positions[i].total_cmp(&positions[j]));
    order
}

fn check_finite(values: &[f64], time: f64) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { time, index }),
        None => Ok(()),
    }
}

/// Positions from given uniforms: `m⁻¹(Uᵢ)` (iid) or `m⁻¹` at the sorted uniforms (stratified).
pub fn init_from_uniforms(quantile_of_m: &dyn QuantileFn, uniforms: &[f64], mode: InitMode) -> Result<Vec<f64>> {
    let mut sorted = uniforms.to_vec();
    sorted.sort_by(f64::total_cmp);
    let sorted_values: Vec<f64> = sorted.iter().map(|&u| quantile_of_m.quantile(u)).collect();
    if let Some(k) = sorted_values.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::NonMonotone(format!("initial quantile decreases near u={}", sorted[k])));
    }
    check_finite(&sorted_values, 0.0)?;
    Ok(match mode {
        InitMode::Stratified => sorted_values,
        InitMode::Iid => uniforms.iter().map(|&u| quantile_of_m.quantile(u)).collect(),
    })
}

pub fn init_ensemble(model: Arc<CoefficientModel>, quantile_of_m: &dyn QuantileFn, config: &SimConfig) -> Result<Ensemble> {
    config.validate()?;
    let uniforms = initial_uniforms(config.seed, config.n);
    let mode = match config.system {
        SystemKind::Reordered => InitMode::Stratified,
        SystemKind::Original => config.init_mode,
    };
    let positions = init_from_uniforms(quantile_of_m, &uniforms, mode)?;
    Ok(Ensemble { time: 0.0, positions, c_n: config.c_n(), model })
}

impl Ensemble {
    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn mean(&self) -> f64 {
        self.positions.iter().sum::<f64>() / self.n() as f64
    }

    /// One Euler–Maruyama step of the original system.
    pub fn em_step(&self, dt: f64, gaussians: &[f64]) -> Result<Ensemble> {
        let coeffs = RankCoefficients::new(&self.model, self.n(), self.c_n);
        let mut next = self.clone();
        next.advance_original(&coeffs, dt, gaussians)?;
        Ok(next)
    }

    /// One step of the reordered system; positions must be sorted.
    pub fn reordered_step(&self, dt: f64, gaussians: &[f64]) -> Result<Ensemble> {
        if self.positions.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::NonMonotone("reordered step needs sorted positions".into()));
        }
        let coeffs = RankCoefficients::new(&self.model, self.n(), self.c_n);
        let mut next = self.clone();
        next.advance_reordered(&coeffs, dt, gaussians)?;
        Ok(next)
    }

    fn advance_original(&mut self, coeffs: &RankCoefficients, dt: f64, gaussians: &[f64]) -> Result<()> {
        let n = self.n();
        if gaussians.len() != n {
            return Err(Error::LengthMismatch { left: gaussians.len(), right: n });
        }
        let sqdt = dt.sqrt();
        let order = argsort(&self.positions);
        let mut rank_of = vec![0usize; n];
        for (k, &i) in order.iter().enumerate() {
            rank_of[i] = k;
        }
        self.positions.par_iter_mut().zip(rank_of.par_iter()).zip(gaussians.par_iter()).with_min_len(1024).for_each(
            |((x, &k), &g)| {
                *x += coeffs.drift[k] * dt + coeffs.vol[k] * sqdt * g;
            },
        );
        self.time += dt;
        check_finite(&self.positions, self.time)
    }

    fn advance_reordered(&mut self, coeffs: &RankCoefficients, dt: f64, gaussians: &[f64]) -> Result<()> {
        let n = self.n();
        if gaussians.len() != n {
            return Err(Error::LengthMismatch { left: gaussians.len(), right: n });
        }
        shift_by_rank(&mut self.positions, coeffs, dt, gaussians);
        self.time += dt;
        check_finite(&self.positions, self.time)?;
        self.positions.sort_unstable_by(f64::total_cmp);
        Ok(())
    }
}

fn shift_by_rank(y: &mut [f64], coeffs: &RankCoefficients, dt: f64, gaussians: &[f64]) {
    let sqdt = dt.sqrt();
    y.par_iter_mut()
        .zip(coeffs.drift.par_iter().zip(coeffs.vol.par_iter()))
        .zip(gaussians.par_iter())
        .with_min_len(1024)
        .for_each(|((y, (&b, &s)), &g)| *y += b * dt + s * sqdt * g);
}

/// Two sorted systems advanced by the same per-rank increments.
#[derive(Debug, Clone)]
pub struct CoupledState {
    pub time: f64,
    pub y_f: Vec<f64>,
    pub y_g: Vec<f64>,
}

impl CoupledState {
    pub fn new(y_f: Vec<f64>, y_g: Vec<f64>) -> Result<Self> {
        if y_f.len() != y_g.len() {
            return Err(Error::LengthMismatch { left: y_f.len(), right: y_g.len() });
        }
        for y in [&y_f, &y_g] {
            if y.windows(2).any(|w| w[1] < w[0]) {
                return Err(Error::NonMonotone("coupled arrays must be sorted".into()));
            }
        }
        Ok(Self { time: 0.0, y_f, y_g })
    }

    /// `(1/n) Σ |y_F,i − y_G,i|ᵖ`, which is `W_p^p` of the two empirical measures.
    pub fn wpp(&self, p: f64) -> f64 {
        mean_gap_pp(&self.y_f, &self.y_g, p)
    }

    /// Same per-rank shift on both arrays, then both are re-sorted.
    pub fn reordered_step(&mut self, coeffs: &RankCoefficients, dt: f64, gaussians: &[f64]) -> Result<()> {
        let n = self.y_f.len();
        if gaussians.len() != n || coeffs.drift.len() != n {
            return Err(Error::LengthMismatch { left: gaussians.len(), right: n });
        }
        shift_by_rank(&mut self.y_f, coeffs, dt, gaussians);
        shift_by_rank(&mut self.y_g, coeffs, dt, gaussians);
        self.time += dt;
        check_finite(&self.y_f, self.time)?;
        check_finite(&self.y_g, self.time)?;
        self.y_f.sort_unstable_by(f64::total_cmp);
        self.y_g.sort_unstable_by(f64::total_cmp);
        Ok(())
    }
}

/// Ensembles recorded at `0`, the requested snapshot times and `t_end`.
#[derive(Debug, Clone)]
pub struct SnapshotSeries {
    pub snapshots: Vec<Ensemble>,
}

impl SnapshotSeries {
    pub fn last(&self) -> &Ensemble {
        self.snapshots.last().expect("series always holds the initial ensemble")
    }

    /// CSV with columns `t, i, position`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["t", "i", "position"])?;
        for e in &self.snapshots {
            for (i, x) in e.positions.iter().enumerate() {
                wr.write_record([e.time.to_string(), i.to_string(), x.to_string()])?;
            }
        }
        wr.flush()?;
        Ok(())
    }
}

/// Runs the configured system to `t_end`.
pub fn simulate(model: Arc<CoefficientModel>, quantile_of_m: &dyn QuantileFn, config: &SimConfig) -> Result<SnapshotSeries> {
    let mut state = init_ensemble(model, quantile_of_m, config)?;
    let coeffs = RankCoefficients::new(&state.model, config.n, state.c_n);
    let mut noise = NoiseBank::new(config.seed, config.n);
    let mut g = vec![0.0; config.n];
    let record = config.record_times();
    let mut next_record = 0;
    let mut snapshots = Vec::with_capacity(record.len());
    let steps = config.step_count();
    let take = |state: &Ensemble, next_record: &mut usize, snapshots: &mut Vec<Ensemble>| {
        while *next_record < record.len() && record[*next_record] <= state.time + 0.5 * config.dt {
            snapshots.push(state.clone());
            *next_record += 1;
        }
    };
    take(&state, &mut next_record, &mut snapshots);
    for k in 1..=steps {
        let dt = config.time_at(k) - config.time_at(k - 1);
        noise.fill(&mut g);
        match config.system {
            SystemKind::Original => state.advance_original(&coeffs, dt, &g)?,
            SystemKind::Reordered => state.advance_reordered(&coeffs, dt, &g)?,
        }
        state.time = config.time_at(k);
        take(&state, &mut next_record, &mut snapshots);
    }
    Ok(SnapshotSeries { snapshots })
}

/// `W_p^p` between the two coupled empirical measures after every step.
#[derive(Debug, Clone)]
pub struct ContractionTable {
    pub p_list: Vec<f64>,
    pub times: Vec<f64>,
    /// `wpp[j][k]`: order `p_list[j]` at `times[k]`.
    pub wpp: Vec<Vec<f64>>,
}

impl ContractionTable {
    /// Largest step-to-step increase beyond the slack `1e-12·(1 + value)`, per order.
    pub fn worst_excess(&self) -> Vec<f64> {
        self.wpp
            .iter()
            .map(|series| {
                series.windows(2).map(|w| w[1] - w[0] - 1e-12 * (1.0 + w[0])).fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    }

    pub fn is_pathwise_nonincreasing(&self) -> bool {
        self.worst_excess().iter().all(|&e| e <= 0.0)
    }

    /// CSV with columns `t, p, wpp` at the given times (every step when empty).
    pub fn write_csv<W: Write>(&self, w: W, at: &[f64]) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["t", "p", "wpp"])?;
        let rows: Vec<usize> = if at.is_empty() {
            (0..self.times.len()).collect()
        } else {
            at.iter()
                .filter_map(|&t| {
                    self.times
                        .iter()
                        .enumerate()
                        .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
                        .map(|(k, _)| k)
                })
                .collect()
        };
        for k in rows {
            for (j, p) in self.p_list.iter().enumerate() {
                wr.write_record([self.times[k].to_string(), p.to_string(), self.wpp[j][k].to_string()])?;
            }
        }
        wr.flush()?;
        Ok(())
    }
}

/// Two reordered systems started from `F₀⁻¹` and `G₀⁻¹` at the same sorted
/// uniforms and driven by the same per-rank Brownian increments.
pub fn coupled_contraction_run(
    model: &CoefficientModel,
    f0_inv: &dyn QuantileFn,
    g0_inv: &dyn QuantileFn,
    config: &SimConfig,
    p_list: &[f64],
) -> Result<ContractionTable> {
    config.validate()?;
    if p_list.iter().any(|&p| !(p >= 1.0)) {
        return Err(invalid("every p must be >= 1"));
    }
    let uniforms = initial_uniforms(config.seed, config.n);
    let y_f = init_from_uniforms(f0_inv, &uniforms, InitMode::Stratified)?;
    let y_g = init_from_uniforms(g0_inv, &uniforms, InitMode::Stratified)?;
    let mut state = CoupledState::new(y_f, y_g)?;
    let coeffs = RankCoefficients::new(model, config.n, config.c_n());
    let mut noise = NoiseBank::new(config.seed, config.n);
    let mut g = vec![0.0; config.n];
    let steps = config.step_count();
    let mut times = Vec::with_capacity(steps + 1);
    let mut wpp: Vec<Vec<f64>> = p_list.iter().map(|_| Vec::with_capacity(steps + 1)).collect();
    let record = |state: &CoupledState, times: &mut Vec<f64>, wpp: &mut Vec<Vec<f64>>| {
        times.push(state.time);
        for (j, &p) in p_list.iter().enumerate() {
            wpp[j].push(state.wpp(p));
        }
    };
    record(&state, &mut times, &mut wpp);
    for k in 1..=steps {
        let dt = config.time_at(k) - config.time_at(k - 1);
        noise.fill(&mut g);
        state.reordered_step(&coeffs, dt, &g)?;
        state.time = config.time_at(k);
        record(&state, &mut times, &mut wpp);
    }
    Ok(ContractionTable { p_list: p_list.to_vec(), times, wpp })
}
