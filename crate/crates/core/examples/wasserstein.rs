//! Three ways to compute W_p^p on the line, and why they agree.
use rankflow::measure::{
    wasserstein_pp_double_integral, wasserstein_pp_quantile, wasserstein_pp_samples_vs_profile, wasserstein_pp_sorted,
    Gaussian, StepCdf,
};

fn main() -> rankflow::Result<()> {
    let f = StepCdf::new(vec![(-1.0, 0.2), (0.5, 0.5), (3.0, 0.3)])?;
    let g = StepCdf::new(vec![(0.0, 0.6), (2.0, 0.4)])?;
    for p in [1.0, 2.0, 3.0] {
        let q = wasserstein_pp_quantile(&f, &g, p, 0)?;
        let line = if p > 1.0 {
            format!("{:.12}", wasserstein_pp_double_integral(&f, &g, p)?)
        } else {
            "n/a (needs p > 1)".into()
        };
        println!("p = {p}: quantile form {q:.12}, double integral {line}");
    }

    let x = [3.0, -1.0, 0.5, 0.2];
    let y = [0.0, 1.0, 2.0, -2.0];
    println!("sorted samples, p = 2: {:.6}", wasserstein_pp_sorted(&x, &y, 2.0)?);

    let gauss = Gaussian::new(0.0, 1.0)?;
    let sample: Vec<f64> = (1..=1000).map(|i| statrs_free_quantile(i as f64 / 1001.0)).collect();
    let w = wasserstein_pp_samples_vs_profile(&sample, &gauss, 2.0)?;
    println!("stratified Gaussian sample vs N(0,1): W2 = {:.5}", w.sqrt());
    Ok(())
}

// a crude logistic stand-in so the sample is visibly not Gaussian
fn statrs_free_quantile(u: f64) -> f64 {
    (u / (1.0 - u)).ln() * 3f64.sqrt() / std::f64::consts::PI
}
