//! Simulate the rank-based particle system and write snapshots as CSV.
use std::sync::Arc;

use rankflow::measure::Gaussian;
use rankflow::model::burgers;
use rankflow::particle::{simulate, SimConfig};

fn main() -> rankflow::Result<()> {
    // viscous Burgers: b(u) = 2u, so higher-ranked particles drift faster
    let model = Arc::new(burgers(0.5)?);
    let mut cfg = SimConfig::new(2000, 1e-3, 1.0);
    cfg.seed = 42;
    cfg.snapshot_times = vec![0.25, 0.5];
    let series = simulate(model, &Gaussian::new(0.0, 1.0)?, &cfg)?;
    for e in &series.snapshots {
        let mut x = e.positions.clone();
        x.sort_by(f64::total_cmp);
        let q = |u: f64| x[((u * x.len() as f64) as usize).min(x.len() - 1)];
        println!("t = {:.2}: mean {:+.4}, quartiles {:+.3} {:+.3} {:+.3}", e.time, e.mean(), q(0.25), q(0.5), q(0.75));
    }
    let path = std::env::temp_dir().join("rankflow_particles.csv");
    series.write_csv(std::fs::File::create(&path)?)?;
    println!("snapshots written to {}", path.display());
    Ok(())
}
