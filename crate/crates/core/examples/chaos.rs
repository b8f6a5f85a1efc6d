//! W1 between the particle empirical law and the PDE solution shrinks with n.
use std::sync::Arc;

use rankflow::measure::Gaussian;
use rankflow::model::logistic_demo;
use rankflow::particle::SimConfig;
use rankflow::scenario::{chaos_table, Law, PdeParams};

fn main() -> rankflow::Result<()> {
    let model = Arc::new(logistic_demo(1.0)?);
    let f0 = Law::Gaussian(Gaussian::new(0.0, 1.0)?);
    let sim = SimConfig::new(100, 1e-3, 1.0);
    let n_list = [100, 300, 1000, 3000];
    let table = chaos_table(&model, &f0, &sim, &PdeParams::default(), &n_list, &[0, 1, 2, 3, 4])?;
    for (n, m) in n_list.iter().zip(table.means()) {
        println!("n = {n:>5}: mean W1 = {m:.4}");
    }
    Ok(())
}
