//! The CDF finite-difference solver and the quantile solver describe the same flow.
use rankflow::measure::{Gaussian, QuantileFn};
use rankflow::model::logistic_demo;
use rankflow::pde::{fd_solve_fn, quantile_pde_solve_fn, FdConfig, FdScheme, QuantileConfig};

fn main() -> rankflow::Result<()> {
    let model = logistic_demo(1.0)?;
    let g = Gaussian::new(0.0, 1.0)?;
    let fd = FdConfig {
        x_min: -10.0,
        x_max: 10.0,
        m: 2001,
        dt: 0.02,
        t_end: 1.0,
        scheme: FdScheme::SemiImplicit,
        output_times: vec![],
    };
    let cdf = fd_solve_fn(&model, &|x| g.cdf(x), &fd)?;
    let q = quantile_pde_solve_fn(&model, &g, &QuantileConfig { m: 512, dt: 1e-3, t_end: 1.0, output_dt: None })?;
    let slice = cdf.last();
    println!("{:>6} {:>12} {:>12}", "u", "fd", "quantile");
    for (u, x) in q.u_grid.iter().zip(q.last()).step_by(64) {
        println!("{u:>6.3} {:>12.6} {x:>12.6}", slice.quantile(*u));
    }
    println!("quantile solver took {} steps", q.steps);
    Ok(())
}
