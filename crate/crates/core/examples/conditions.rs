//! Check the nondegeneracy / equilibrium conditions for every builtin model.
use rankflow::model::{check_conditions, make_builtin_named, BUILTIN_NAMES};
use serde_json::json;

fn main() -> rankflow::Result<()> {
    let params = [
        json!({"q": 2.0}),
        json!({"sigma2": 1.0, "b": [1.0, -2.0]}),
        json!({"sigma2": 0.5}),
        json!({"sigma2": 1.0}),
        json!(null),
    ];
    println!("{:<22} {:>5} {:>5} {:>5} {:>5} {:>5}  E2 integral", "model", "D1", "D2", "D3", "E1", "E2");
    for (name, p) in BUILTIN_NAMES.iter().zip(params) {
        let model = make_builtin_named(name, &p)?;
        let r = check_conditions(&model, 512, 1e-12)?;
        let tag = |t: rankflow::model::TriState| format!("{t:?}").chars().take(5).collect::<String>();
        println!(
            "{:<22} {:>5} {:>5} {:>5} {:>5} {:>5}  {:?}",
            name,
            tag(r.d1),
            tag(r.d2),
            tag(r.d3),
            tag(r.e1),
            tag(r.e2),
            r.e2_integral
        );
    }
    Ok(())
}
