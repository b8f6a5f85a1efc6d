//! A degenerate model whose stationary solutions are not all translates.
use rankflow::model::degenerate_demo;
use rankflow::stationary::{bump_family, degenerate_family, stationary_residual};

fn main() -> rankflow::Result<()> {
    let model = degenerate_demo();
    for h in [0.0, 0.5, 1.0, 2.0] {
        let f = move |x: f64| degenerate_family(h, x).expect("h >= 0");
        let r = stationary_residual(&model, &f, &bump_family(-1.5, h + 1.5, 20));
        println!("h = {h}: plateau [0, {h}), weak residual {r:.2e}");
    }
    // members differ in plateau length, so none is a shift of another
    let gauss = rankflow::measure::Gaussian::new(0.0, 1.0)?;
    let control = move |x: f64| gauss.cdf(x);
    println!("control N(0,1): residual {:.2e}", stationary_residual(&model, &control, &bump_family(-1.5, 1.5, 20)));
    Ok(())
}
