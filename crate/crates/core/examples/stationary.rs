//! Stationary profile of the logistic demo: Ψ, F_∞, its moments and the Hardy check.
use std::sync::Arc;

use rankflow::measure::Gaussian;
use rankflow::model::logistic_demo;
use rankflow::stationary::{hardy_poincare_check, StationaryProfile};

fn main() -> rankflow::Result<()> {
    let s = StationaryProfile::new(Arc::new(logistic_demo(1.0)?))?;
    for u in [0.01, 0.25, 0.5, 0.75, 0.99] {
        println!("Ψ({u}) = {:+.9}   analytic {:+.9}", s.psi(u)?, 0.5 * (u / (1.0 - u)).ln());
    }
    for x in [-2.0, 0.0, 1.0] {
        println!("F_∞({x}) = {:.12}", s.cdf(x));
    }
    println!("first absolute moment {:?} (ln 2 = {:.9})", s.first_abs_moment(), std::f64::consts::LN_2);

    let f0 = Gaussian::new(0.7, 1.3)?;
    let xbar = s.centering_offset(&f0)?;
    let centered = s.clone().with_xbar(xbar);
    println!("x̄ for N(0.7, 1.3²): {xbar:+.9}; mean of centered profile {:+.9}", centered.mean()?);

    let hardy = hardy_poincare_check(&s);
    println!("Hardy criterion: {:?}", hardy.verdict);
    for (depth, sup, at) in &hardy.right.partial_sups {
        println!("  right side, depth {depth}: sup {sup:.6} at u = {at:.6}");
    }
    Ok(())
}
