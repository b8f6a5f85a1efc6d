//! Particles started from a wide Gaussian relax to the mean-matched stationary profile.
use std::sync::Arc;

use rankflow::measure::Gaussian;
use rankflow::model::logistic_demo;
use rankflow::particle::{CnRule, SimConfig};
use rankflow::scenario::{equilibrium_rows, Law};
use rankflow::stationary::StationaryProfile;

fn main() -> rankflow::Result<()> {
    let model = Arc::new(logistic_demo(1.0)?);
    let f0 = Law::Gaussian(Gaussian::new(0.5, 2.0)?);
    let base = StationaryProfile::new(model.clone())?;
    let xbar = base.centering_offset(&f0)?;
    let target = base.with_xbar(xbar);
    let times: Vec<f64> = (0..=8).map(|k| k as f64).collect();
    for (label, rule) in [("c_n = n^-1/4", CnRule::default()), ("c_n = n^-1/2", CnRule::Power { c0: 1.0, alpha: 0.5 })] {
        let mut cfg = SimConfig::new(4000, 2e-3, 8.0);
        cfg.seed = 1;
        cfg.c_n_rule = rule;
        let rows = equilibrium_rows(&model, &f0, &target, &cfg, &times)?;
        let w: Vec<String> = rows.iter().map(|r| format!("{:.3}", r.1)).collect();
        println!("{label}: W2 to F_∞ at t = 0..8: {}", w.join(" "));
    }
    Ok(())
}
