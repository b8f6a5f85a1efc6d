//! The Wasserstein dissipation identity along the quantile-space solver.
use std::sync::Arc;

use rankflow::measure::Gaussian;
use rankflow::model::logistic_demo;
use rankflow::pde::dissipation_identity_check;
use rankflow::stationary::StationaryProfile;

fn main() -> rankflow::Result<()> {
    let model = Arc::new(logistic_demo(1.0)?);
    let f0 = Gaussian::new(0.0, 1.0)?;
    let g0 = StationaryProfile::new(model.clone())?;
    for m in [128, 256, 512] {
        for p in [2.0, 3.0] {
            let r = dissipation_identity_check(&model, &f0, &g0, p, m, 1e-3, Some(0.05), 1.0)?;
            println!("m = {m:>3}, p = {p}: ΔW = {:+.6e}, −∫D = {:+.6e}, rel err {:.2e}", r.lhs, r.rhs, r.rel_err);
        }
    }
    Ok(())
}
