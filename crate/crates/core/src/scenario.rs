//! JSON-configured experiments writing CSV tables and a manifest.
//!
//! Everything is computed in memory first; files are written only once the
//! whole scenario succeeded, so a failing run leaves no partial output.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::measure::{wasserstein_pp_samples_vs_profile, Gaussian, QuantileFn, StepCdf};
use crate::model::{check_conditions, make_builtin_named, CoefficientModel, TriState};
use crate::particle::{coupled_contraction_run, simulate, SimConfig};
use crate::pde::{dissipation_identity_check, fd_solve_fn, FdConfig, FdScheme};
use crate::stationary::{hardy_poincare_check, StationaryProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Contraction,
    Equilibrium,
    Chaos,
    Dissipation,
    StationaryAudit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub name: String,
    #[serde(default)]
    pub params: serde_json::Value,
}

/// An initial law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistSpec {
    Gaussian { mean: f64, std: f64 },
    Dirac { at: f64 },
    Uniform { lo: f64, hi: f64 },
    /// `[location, mass]` pairs.
    Atoms { atoms: Vec<[f64; 2]> },
    /// The model's stationary profile `Ψ⁻¹(· + xbar)`.
    Stationary {
        #[serde(default)]
        xbar: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub f: DistSpec,
    #[serde(default)]
    pub g: Option<DistSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeParams {
    #[serde(default = "default_x_min")]
    pub x_min: f64,
    #[serde(default = "default_x_max")]
    pub x_max: f64,
    #[serde(default = "default_fd_points")]
    pub fd_points: usize,
    /// Defaults to half the explicit stability bound.
    #[serde(default)]
    pub fd_dt: Option<f64>,
    #[serde(default)]
    pub scheme: FdScheme,
    #[serde(default = "default_quantile_m")]
    pub quantile_m: usize,
    #[serde(default = "default_quantile_dt")]
    pub quantile_dt: f64,
    #[serde(default)]
    pub t1: Option<f64>,
    #[serde(default = "default_t2")]
    pub t2: f64,
    #[serde(default = "default_p")]
    pub p: f64,
}

fn default_x_min() -> f64 {
    -10.0
}
fn default_x_max() -> f64 {
    10.0
}
fn default_fd_points() -> usize {
    2001
}
fn default_quantile_m() -> usize {
    512
}
fn default_quantile_dt() -> f64 {
    1e-3
}
fn default_t2() -> f64 {
    1.0
}
fn default_p() -> f64 {
    2.0
}

impl Default for PdeParams {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub model: ModelSpec,
    /// Master seed; overrides `particles.seed`. Multi-seed runs use `seed, seed+1, …`.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub particles: Option<SimConfig>,
    #[serde(default)]
    pub pde: PdeParams,
    #[serde(default)]
    pub initial: Option<InitialSpec>,
    #[serde(default = "default_p_list")]
    pub p_list: Vec<f64>,
    #[serde(default)]
    pub n_list: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: usize,
    /// Equilibrium sampling times; integers `0..=t_end` by default.
    #[serde(default)]
    pub sample_times: Option<Vec<f64>>,
}

fn default_p_list() -> Vec<f64> {
    vec![2.0]
}
fn default_seeds() -> usize {
    1
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.build_model()?;
        if self.seeds == 0 {
            return Err(invalid("seeds must be >= 1"));
        }
        if let Some(p) = &self.particles {
            p.validate()?;
        }
        let need_particles = matches!(self.scenario, Scenario::Contraction | Scenario::Equilibrium | Scenario::Chaos);
        if need_particles && self.particles.is_none() {
            return Err(invalid(format!("scenario {:?} needs a 'particles' section", self.scenario)));
        }
        let need_initial = !matches!(self.scenario, Scenario::StationaryAudit);
        if need_initial && self.initial.is_none() {
            return Err(invalid(format!("scenario {:?} needs an 'initial' section", self.scenario)));
        }
        if matches!(self.scenario, Scenario::Contraction | Scenario::Dissipation)
            && self.initial.as_ref().is_some_and(|i| i.g.is_none())
        {
            return Err(invalid("this scenario needs both initial.f and initial.g"));
        }
        if self.scenario == Scenario::Contraction && self.p_list.iter().any(|&p| !(p >= 1.0)) {
            return Err(invalid("p_list entries must be >= 1"));
        }
        if self.scenario == Scenario::Chaos && (self.n_list.is_empty() || self.n_list.contains(&0)) {
            return Err(invalid("chaos needs a nonempty n_list of positive sizes"));
        }
        let pde = &self.pde;
        if !(pde.x_max > pde.x_min) || pde.fd_points < 3 || pde.quantile_m < 3 || !(pde.quantile_dt > 0.0) {
            return Err(invalid("pde grid parameters out of range"));
        }
        if self.scenario == Scenario::Dissipation && !(pde.p >= 2.0) {
            return Err(invalid("dissipation needs p >= 2"));
        }
        Ok(())
    }

    pub fn build_model(&self) -> Result<CoefficientModel> {
        make_builtin_named(&self.model.name, &self.model.params)
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// An initial law with both its CDF and its quantile.
#[derive(Debug, Clone)]
pub enum Law {
    Gaussian(Gaussian),
    Step(StepCdf),
    Uniform { lo: f64, hi: f64 },
    Stationary(Box<StationaryProfile>),
}

impl Law {
    pub fn from_spec(spec: &DistSpec, model: &Arc<CoefficientModel>) -> Result<Self> {
        Ok(match spec {
            DistSpec::Gaussian { mean, std } => Law::Gaussian(Gaussian::new(*mean, *std)?),
            DistSpec::Dirac { at } => Law::Step(StepCdf::new(vec![(*at, 1.0)])?),
            DistSpec::Uniform { lo, hi } => {
                if !(hi > lo) {
                    return Err(invalid("uniform law needs lo < hi"));
                }
                Law::Uniform { lo: *lo, hi: *hi }
            }
            DistSpec::Atoms { atoms } => Law::Step(StepCdf::new(atoms.iter().map(|a| (a[0], a[1])).collect())?),
            DistSpec::Stationary { xbar } => {
                Law::Stationary(Box::new(StationaryProfile::new(model.clone())?.with_xbar(*xbar)))
            }
        })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Law::Gaussian(g) => g.cdf(x),
            Law::Step(s) => s.cdf(x),
            Law::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Law::Stationary(s) => s.cdf(x),
        }
    }
}

impl QuantileFn for Law {
    fn quantile(&self, u: f64) -> f64 {
        match self {
            Law::Gaussian(g) => g.quantile(u),
            Law::Step(s) => s.quantile(u),
            Law::Uniform { lo, hi } => lo + u * (hi - lo),
            Law::Stationary(s) => s.quantile(u),
        }
    }

    fn jump_levels(&self) -> Option<Vec<f64>> {
        match self {
            Law::Step(s) => s.jump_levels(),
            _ => None,
        }
    }
}

/// One output file held in memory until the run succeeds.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub name: String,
    pub body: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub artifacts: Vec<Artifact>,
    pub summary: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub scenario: Scenario,
    pub config_sha256: String,
    pub seed: u64,
    pub version: &'static str,
    pub timestamp_unix: u64,
    pub files: Vec<String>,
    pub summary: serde_json::Value,
}

/// Runs the scenario and writes its artifacts plus `manifest.json` into `out_dir`.
pub fn run(config: &ScenarioConfig, out_dir: &Path) -> Result<Manifest> {
    config.validate()?;
    let outcome = compute(config)?;
    fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    for a in &outcome.artifacts {
        fs::write(out_dir.join(&a.name), &a.body)?;
        files.push(a.name.clone());
    }
    let manifest = Manifest {
        scenario: config.scenario,
        config_sha256: config.hash(),
        seed: config.seed,
        version: env!("CARGO_PKG_VERSION"),
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        files,
        summary: outcome.summary,
    };
    fs::write(out_dir.join("manifest.json"), serde_json::to_vec_pretty(&manifest)?)?;
    Ok(manifest)
}

/// Runs the scenario without touching the file system.
pub fn compute(config: &ScenarioConfig) -> Result<RunOutcome> {
    let model = Arc::new(config.build_model()?);
    match config.scenario {
        Scenario::Contraction => contraction(config, &model),
        Scenario::Equilibrium => equilibrium(config, &model),
        Scenario::Chaos => chaos(config, &model),
        Scenario::Dissipation => dissipation(config, &model),
        Scenario::StationaryAudit => stationary_audit(&model),
    }
}

fn particles(config: &ScenarioConfig, seed: u64) -> SimConfig {
    let mut p = config.particles.clone().expect("validated");
    p.seed = seed;
    p
}

fn laws(config: &ScenarioConfig, model: &Arc<CoefficientModel>) -> Result<(Law, Option<Law>)> {
    let init = config.initial.as_ref().expect("validated");
    let f = Law::from_spec(&init.f, model)?;
    let g = init.g.as_ref().map(|g| Law::from_spec(g, model)).transpose()?;
    Ok((f, g))
}

fn csv_body(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record(header)?;
    for r in rows {
        wr.write_record(&r)?;
    }
    wr.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn contraction(config: &ScenarioConfig, model: &Arc<CoefficientModel>) -> Result<RunOutcome> {
    let (f, g) = laws(config, model)?;
    let g = g.expect("validated");
    let table = coupled_contraction_run(model, &f, &g, &particles(config, config.seed), &config.p_list)?;
    let mut body = Vec::new();
    table.write_csv(&mut body, &[])?;
    let excess = table.worst_excess();
    let summary = serde_json::json!({
        "pathwise_nonincreasing": table.is_pathwise_nonincreasing(),
        "worst_excess": excess,
        "final_wpp": table.wpp.iter().map(|s| s[s.len() - 1]).collect::<Vec<_>>(),
    });
    Ok(RunOutcome { artifacts: vec![Artifact { name: "contraction.csv".into(), body }], summary })
}

/// `(t, W₂(μⁿ_t, F_∞), ∫(Fⁿ_t − F_∞)²/p_∞)` rows for one seed.
pub fn equilibrium_rows(
    model: &Arc<CoefficientModel>,
    f0: &Law,
    stationary: &StationaryProfile,
    sim: &SimConfig,
    sample_times: &[f64],
) -> Result<Vec<(f64, f64, f64)>> {
    let mut sim = sim.clone();
    sim.snapshot_times = sample_times.iter().copied().filter(|&t| t > 0.0 && t < sim.t_end).collect();
    let series = simulate(model.clone(), f0, &sim)?;
    let x_grid: Vec<f64> = (0..=2000).map(|k| stationary.quantile(1e-6 + (1.0 - 2e-6) * k as f64 / 2000.0)).collect();
    let f_inf: Vec<f64> = x_grid.iter().map(|&x| stationary.cdf(x)).collect();
    let p_inf: Vec<f64> = x_grid.iter().map(|&x| stationary.density(x)).collect();
    series
        .snapshots
        .iter()
        .map(|e| {
            let mut x = e.positions.clone();
            x.sort_by(f64::total_cmp);
            let w2 = wasserstein_pp_samples_vs_profile(&x, stationary, 2.0)?.sqrt();
            let n = x.len() as f64;
            let emp: Vec<f64> = x_grid.iter().map(|&g| x.partition_point(|&v| v <= g) as f64 / n).collect();
            let wl2 = crate::pde::weighted_l2(&emp, &f_inf, &p_inf, &x_grid)?;
            Ok((e.time, w2, wl2))
        })
        .collect()
}

fn equilibrium(config: &ScenarioConfig, model: &Arc<CoefficientModel>) -> Result<RunOutcome> {
    let (f0, _) = laws(config, model)?;
    let base = StationaryProfile::new(model.clone())?;
    let xbar = base.centering_offset(&f0)?;
    let stationary = base.with_xbar(xbar);
    let sim = particles(config, config.seed);
    let times = config
        .sample_times
        .clone()
        .unwrap_or_else(|| (0..=sim.t_end.floor() as usize).map(|k| k as f64).collect());
    let per_seed: Vec<Vec<(f64, f64, f64)>> = (0..config.seeds as u64)
        .into_par_iter()
        .map(|s| equilibrium_rows(model, &f0, &stationary, &particles(config, config.seed + s), &times))
        .collect::<Result<_>>()?;
    let mut artifacts = Vec::new();
    let header = ["t", "w2", "weighted_l2"];
    for (s, rows) in per_seed.iter().enumerate() {
        let body = csv_body(&header, rows.iter().map(|r| vec![r.0.to_string(), r.1.to_string(), r.2.to_string()]))?;
        artifacts.push(Artifact { name: format!("equilibrium_seed_{}.csv", config.seed + s as u64), body });
    }
    let k = per_seed[0].len();
    let ns = per_seed.len() as f64;
    let mean: Vec<(f64, f64, f64)> = (0..k)
        .map(|i| {
            let w = per_seed.iter().map(|r| r[i].1).sum::<f64>() / ns;
            let l = per_seed.iter().map(|r| r[i].2).sum::<f64>() / ns;
            (per_seed[0][i].0, w, l)
        })
        .collect();
    let body = csv_body(&header, mean.iter().map(|r| vec![r.0.to_string(), r.1.to_string(), r.2.to_string()]))?;
    artifacts.push(Artifact { name: "equilibrium.csv".into(), body });
    let summary = serde_json::json!({ "xbar": xbar, "final_w2": mean[k - 1].1 });
    Ok(RunOutcome { artifacts, summary })
}

/// Mean `W₁(μⁿ_T, F^fd_T)` over seeds for each `n`; per-seed values in `per_seed[n_index][seed]`.
#[derive(Debug, Clone)]
pub struct ChaosTable {
    pub n_list: Vec<usize>,
    pub per_seed: Vec<Vec<f64>>,
}

impl ChaosTable {
    pub fn means(&self) -> Vec<f64> {
        self.per_seed.iter().map(|v| v.iter().sum::<f64>() / v.len() as f64).collect()
    }
}

pub fn chaos_table(
    model: &Arc<CoefficientModel>,
    f0: &Law,
    sim: &SimConfig,
    pde: &PdeParams,
    n_list: &[usize],
    seeds: &[u64],
) -> Result<ChaosTable> {
    let mut fd = FdConfig {
        x_min: pde.x_min,
        x_max: pde.x_max,
        m: pde.fd_points,
        dt: 0.0,
        t_end: sim.t_end,
        scheme: pde.scheme,
        output_times: vec![],
    };
    let a_max = (0..=1024).map(|k| model.a(k as f64 / 1024.0)).fold(0.0, f64::max).max(1e-300);
    fd.dt = pde.fd_dt.unwrap_or(0.5 * fd.dx() * fd.dx() / a_max);
    let reference = fd_solve_fn(model, &|x| f0.cdf(x), &fd)?;
    let slice = reference.last();
    let jobs: Vec<(usize, u64)> = n_list.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    let w1: Vec<f64> = jobs
        .par_iter()
        .map(|&(n, seed)| {
            let mut cfg = sim.clone();
            cfg.n = n;
            cfg.seed = seed;
            cfg.snapshot_times.clear();
            let series = simulate(model.clone(), f0, &cfg)?;
            let mut x = series.last().positions.clone();
            x.sort_by(f64::total_cmp);
            wasserstein_pp_samples_vs_profile(&x, &slice, 1.0)
        })
        .collect::<Result<_>>()?;
    let per_seed = w1.chunks(seeds.len()).map(|c| c.to_vec()).collect();
    Ok(ChaosTable { n_list: n_list.to_vec(), per_seed })
}

fn chaos(config: &ScenarioConfig, model: &Arc<CoefficientModel>) -> Result<RunOutcome> {
    let (f0, _) = laws(config, model)?;
    let seeds: Vec<u64> = (0..config.seeds as u64).map(|s| config.seed + s).collect();
    let table = chaos_table(model, &f0, &particles(config, config.seed), &config.pde, &config.n_list, &seeds)?;
    let means = table.means();
    let mut artifacts = Vec::new();
    for (j, seed) in seeds.iter().enumerate() {
        let rows = table.n_list.iter().zip(&table.per_seed).map(|(n, v)| vec![n.to_string(), v[j].to_string()]);
        artifacts.push(Artifact { name: format!("chaos_seed_{seed}.csv"), body: csv_body(&["n", "w1"], rows)? });
    }
    let rows = table.n_list.iter().zip(&means).map(|(n, m)| vec![n.to_string(), m.to_string()]);
    artifacts.push(Artifact { name: "chaos.csv".into(), body: csv_body(&["n", "mean_w1"], rows)? });
    let decreasing = means.windows(2).all(|w| w[1] < w[0]);
    Ok(RunOutcome { artifacts, summary: serde_json::json!({ "mean_w1": means, "strictly_decreasing": decreasing }) })
}

fn dissipation(config: &ScenarioConfig, model: &Arc<CoefficientModel>) -> Result<RunOutcome> {
    let (f, g) = laws(config, model)?;
    let g = g.expect("validated");
    let pde = &config.pde;
    let r = dissipation_identity_check(model, &f, &g, pde.p, pde.quantile_m, pde.quantile_dt, pde.t1, pde.t2)?;
    let body = csv_body(
        &["t1", "t2", "lhs", "rhs", "rel_err"],
        [vec![r.t1.to_string(), r.t2.to_string(), r.lhs.to_string(), r.rhs.to_string(), r.rel_err.to_string()]],
    )?;
    Ok(RunOutcome {
        artifacts: vec![Artifact { name: "dissipation.csv".into(), body }],
        summary: serde_json::to_value(r)?,
    })
}

fn stationary_audit(model: &Arc<CoefficientModel>) -> Result<RunOutcome> {
    let report = check_conditions(model, 512, 1e-12)?;
    let mut artifacts = Vec::new();
    let mut audit = serde_json::json!({ "model": model.name(), "conditions": report });
    if report.e1 == TriState::Holds {
        let s = StationaryProfile::new(model.clone())?;
        let mut psi = Vec::new();
        s.write_psi_csv(&mut psi)?;
        artifacts.push(Artifact { name: "psi.csv".into(), body: psi });
        let lo = s.quantile(1e-4);
        let hi = s.quantile(1.0 - 1e-4);
        let xs: Vec<f64> = (0..=400).map(|k| lo + (hi - lo) * k as f64 / 400.0).collect();
        let mut cdf = Vec::new();
        s.write_cdf_csv(&mut cdf, &xs)?;
        artifacts.push(Artifact { name: "stationary_cdf.csv".into(), body: cdf });
        audit["hardy"] = serde_json::to_value(hardy_poincare_check(&s))?;
        audit["first_abs_moment"] = serde_json::to_value(s.first_abs_moment())?;
    }
    let body = serde_json::to_vec_pretty(&audit)?;
    artifacts.insert(0, Artifact { name: "conditions.json".into(), body });
    Ok(RunOutcome { artifacts, summary: audit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(json: &str) -> ScenarioConfig {
        ScenarioConfig::from_json(json).unwrap()
    }

    #[test]
    fn contraction_identical_laws_is_zero() {
        let c = config(
            r#"{"scenario":"contraction","model":{"name":"logistic_demo","params":{"sigma2":1.0}},
                "particles":{"n":50,"dt":0.01,"t_end":0.1},
                "initial":{"f":{"kind":"gaussian","mean":0,"std":1},"g":{"kind":"gaussian","mean":0,"std":1}},
                "p_list":[1,2]}"#,
        );
        let out = compute(&c).unwrap();
        let text = String::from_utf8(out.artifacts[0].body.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,p,wpp"));
        assert!(lines.all(|l| l.ends_with(",0")));
    }

    #[test]
    fn audit_porous_medium_has_no_psi() {
        let c = config(r#"{"scenario":"stationary_audit","model":{"name":"porous_medium","params":{"q":2}}}"#);
        let out = compute(&c).unwrap();
        assert_eq!(out.artifacts.len(), 1);
        assert_eq!(out.summary["conditions"]["e1"], "fails");
        let c = config(r#"{"scenario":"stationary_audit","model":{"name":"logistic_demo","params":{"sigma2":1}}}"#);
        let out = compute(&c).unwrap();
        let names: Vec<&str> = out.artifacts.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, ["conditions.json", "psi.csv", "stationary_cdf.csv"]);
        assert_eq!(out.summary["hardy"]["verdict"], "satisfied");
    }

    #[test]
    fn invalid_configs() {
        for bad in [
            r#"{"scenario":"contraction","model":{"name":"nope"}}"#,
            r#"{"scenario":"chaos","model":{"name":"burgers","params":{"sigma2":1}}}"#,
            r#"{"scenario":"stationary_audit","model":{"name":"burgers","params":{"sigma2":1}},"bogus":1}"#,
            r#"{"scenario":"contraction","model":{"name":"burgers","params":{"sigma2":1}},
                "particles":{"n":5,"dt":0.1,"t_end":1},"initial":{"f":{"kind":"dirac","at":0}}}"#,
        ] {
            assert!(ScenarioConfig::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn hash_is_stable_and_seed_sensitive() {
        let text = r#"{"scenario":"stationary_audit","model":{"name":"degenerate_demo"}}"#;
        let a = config(text);
        assert_eq!(a.hash(), config(text).hash());
        assert_eq!(a.hash().len(), 64);
        let mut b = a.clone();
        b.seed = 9;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn law_quantiles() {
        let m = Arc::new(crate::model::logistic_demo(1.0).unwrap());
        let l = Law::from_spec(&DistSpec::Uniform { lo: -1.0, hi: 3.0 }, &m).unwrap();
        assert_eq!(l.quantile(0.25), 0.0);
        assert_eq!(l.cdf(1.0), 0.5);
        let s = Law::from_spec(&DistSpec::Stationary { xbar: 0.0 }, &m).unwrap();
        assert!((s.cdf(0.0) - 0.5).abs() < 1e-12);
        let d = Law::from_spec(&DistSpec::Dirac { at: 2.0 }, &m).unwrap();
        assert_eq!(d.quantile(0.3), 2.0);
    }
}
