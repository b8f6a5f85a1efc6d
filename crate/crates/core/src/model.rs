//! Coefficient models `(a, b)` on `[0, 1]`, their primitives and the structural
//! conditions used throughout the crate.
//!
//! The diffusion and drift coefficients are plain callables. When a closed form
//! of a primitive is unknown it is recovered by adaptive quadrature, and a
//! cubic Hermite table (slopes given exactly by `a` or `b`) serves the hot
//! paths of the solvers.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{gk21, integrate, integrate_singular, Improper, Tolerance};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Regularity declared by whoever builds the model; it is never inferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    None,
    /// `a` is C¹ on `[0, 1]`.
    C1A,
    /// `a` is C², `b` is C¹, with Hölder `a''` and `b'`.
    C2aC1bHolder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primitive {
    A,
    B,
}

const TABLE_CELLS: usize = 2048;

struct HermiteTable {
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl HermiteTable {
    fn build(f: &ScalarFn) -> Self {
        let h = 1.0 / TABLE_CELLS as f64;
        let mut values = Vec::with_capacity(TABLE_CELLS + 1);
        let mut slopes = Vec::with_capacity(TABLE_CELLS + 1);
        let mut acc = 0.0;
        values.push(0.0);
        slopes.push(f(0.0));
        for k in 0..TABLE_CELLS {
            let lo = k as f64 * h;
            let hi = (k + 1) as f64 * h;
            let (v, e) = gk21(&**f, lo, hi);
            acc += if e < 1e-15 { v } else { integrate(&**f, lo, hi, Tolerance::abs(1e-15)).value };
            values.push(acc);
            slopes.push(f(hi));
        }
        Self { values, slopes }
    }

    fn eval(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let s = u * TABLE_CELLS as f64;
        let k = (s.floor() as usize).min(TABLE_CELLS - 1);
        let t = s - k as f64;
        let h = 1.0 / TABLE_CELLS as f64;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1
    }
}

#[derive(Clone)]
enum PrimitiveImpl {
    Closed(ScalarFn),
    Table(Arc<HermiteTable>),
}

impl PrimitiveImpl {
    fn eval(&self, u: f64) -> f64 {
        match self {
            PrimitiveImpl::Closed(f) => f(u),
            PrimitiveImpl::Table(t) => t.eval(u),
        }
    }
}

/// Coefficients of `∂ₜF = ½∂ₓ²A(F) − ∂ₓB(F)` with `A' = a`, `B' = b`, `A(0) = B(0) = 0`.
#[derive(Clone)]
pub struct CoefficientModel {
    name: String,
    a: ScalarFn,
    b: ScalarFn,
    big_a: PrimitiveImpl,
    big_b: PrimitiveImpl,
    smoothness: Smoothness,
}

impl fmt::Debug for CoefficientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientModel")
            .field("name", &self.name)
            .field("smoothness", &self.smoothness)
            .finish_non_exhaustive()
    }
}

impl CoefficientModel {
    /// Model from coefficient callables only; primitives come from quadrature.
    pub fn new(
        name: impl Into<String>,
        a: impl Fn(f64) -> f64 + Send + Sync + 'static,
        b: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let a: ScalarFn = Arc::new(a);
        let b: ScalarFn = Arc::new(b);
        let big_a = PrimitiveImpl::Table(Arc::new(HermiteTable::build(&a)));
        let big_b = PrimitiveImpl::Table(Arc::new(HermiteTable::build(&b)));
        Self { name: name.into(), a, b, big_a, big_b, smoothness: Smoothness::None }
    }

    /// Model with closed-form primitives.
    pub fn with_primitives(
        name: impl Into<String>,
        a: impl Fn(f64) -> f64 + Send + Sync + 'static,
        b: impl Fn(f64) -> f64 + Send + Sync + 'static,
        big_a: impl Fn(f64) -> f64 + Send + Sync + 'static,
        big_b: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            a: Arc::new(a),
            b: Arc::new(b),
            big_a: PrimitiveImpl::Closed(Arc::new(big_a)),
            big_b: PrimitiveImpl::Closed(Arc::new(big_b)),
            smoothness: Smoothness::None,
        }
    }

    pub fn smooth(mut self, smoothness: Smoothness) -> Self {
        self.smoothness = smoothness;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    #[inline]
    pub fn a(&self, u: f64) -> f64 {
        (self.a)(u)
    }

    #[inline]
    pub fn b(&self, u: f64) -> f64 {
        (self.b)(u)
    }

    #[inline]
    pub fn sigma(&self, u: f64) -> f64 {
        self.a(u).max(0.0).sqrt()
    }

    /// Fast primitive `A(u)`: closed form, or the Hermite table.
    #[inline]
    pub fn big_a(&self, u: f64) -> f64 {
        self.big_a.eval(u)
    }

    /// Fast primitive `B(u)`.
    #[inline]
    pub fn big_b(&self, u: f64) -> f64 {
        self.big_b.eval(u)
    }

    pub fn has_closed_primitives(&self) -> bool {
        matches!((&self.big_a, &self.big_b), (PrimitiveImpl::Closed(_), PrimitiveImpl::Closed(_)))
    }

    /// `A(u)` or `B(u)`: the closed form when known, otherwise adaptive
    /// quadrature of the coefficient with absolute tolerance 1e-10.
    pub fn antiderivative(&self, which: Primitive, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::OutOfDomain { value: u, domain: "[0, 1]" });
        }
        let (prim, coef) = match which {
            Primitive::A => (&self.big_a, &self.a),
            Primitive::B => (&self.big_b, &self.b),
        };
        match prim {
            PrimitiveImpl::Closed(f) => Ok(f(u)),
            PrimitiveImpl::Table(_) => {
                let r = integrate(&**coef, 0.0, u, Tolerance::abs(1e-10));
                if r.converged {
                    Ok(r.value)
                } else {
                    Err(Error::Quadrature(format!("primitive at u={u}")))
                }
            }
        }
    }
}

/// Drift coefficient given by polynomial coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn eval(&self, u: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    pub fn primitive(&self) -> Polynomial {
        let mut out = vec![0.0];
        out.extend(self.0.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        Polynomial(out)
    }
}

/// Builtin model families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum BuiltinKind {
    PorousMedium { q: f64 },
    ViscousConservation { sigma2: f64, b: Polynomial },
    Burgers { sigma2: f64 },
    LogisticDemo { sigma2: f64 },
    DegenerateDemo,
}

pub const BUILTIN_NAMES: [&str; 5] =
    ["porous_medium", "viscous_conservation", "burgers", "logistic_demo", "degenerate_demo"];

/// Builds a model from its name and a JSON parameter object.
pub fn make_builtin_named(name: &str, params: &serde_json::Value) -> Result<CoefficientModel> {
    if !BUILTIN_NAMES.contains(&name) {
        return Err(Error::UnknownModel(name.to_string()));
    }
    let mut obj = match params {
        serde_json::Value::Object(m) => m.clone(),
        serde_json::Value::Null => serde_json::Map::new(),
        _ => return Err(invalid("model params must be a JSON object")),
    };
    obj.insert("name".into(), serde_json::Value::String(name.to_string()));
    let kind: BuiltinKind = serde_json::from_value(serde_json::Value::Object(obj))?;
    make_builtin(&kind)
}

pub fn make_builtin(kind: &BuiltinKind) -> Result<CoefficientModel> {
    match kind {
        BuiltinKind::PorousMedium { q } => porous_medium(*q),
        BuiltinKind::ViscousConservation { sigma2, b } => {
            check_sigma2(*sigma2)?;
            if b.0.iter().any(|c| !c.is_finite()) {
                return Err(invalid("polynomial drift coefficients must be finite"));
            }
            let s2 = *sigma2;
            let drift = b.clone();
            let prim = b.primitive();
            Ok(CoefficientModel::with_primitives(
                "viscous_conservation",
                move |_| s2,
                move |u| drift.eval(u),
                move |u| s2 * u,
                move |u| prim.eval(u),
            )
            .smooth(Smoothness::C2aC1bHolder))
        }
        BuiltinKind::Burgers { sigma2 } => burgers(*sigma2),
        BuiltinKind::LogisticDemo { sigma2 } => logistic_demo(*sigma2),
        BuiltinKind::DegenerateDemo => Ok(degenerate_demo()),
    }
}

fn check_sigma2(sigma2: f64) -> Result<()> {
    if !sigma2.is_finite() || sigma2 < 0.0 {
        return Err(invalid(format!("sigma2 must be finite and >= 0, got {sigma2}")));
    }
    Ok(())
}

/// `A(u) = u^q`, `B ≡ 0`.
pub fn porous_medium(q: f64) -> Result<CoefficientModel> {
    if !q.is_finite() || q <= 1.0 {
        return Err(invalid(format!("porous medium exponent must be > 1, got {q}")));
    }
    let smooth = if q >= 3.0 || q == 2.0 { Smoothness::C2aC1bHolder } else if q >= 2.0 { Smoothness::C1A } else { Smoothness::None };
    Ok(CoefficientModel::with_primitives(
        format!("porous_medium(q={q})"),
        move |u| q * u.powf(q - 1.0),
        |_| 0.0,
        move |u| u.powf(q),
        |_| 0.0,
    )
    .smooth(smooth))
}

/// `A(u) = σ²u` with an arbitrary drift callable; `B` comes from quadrature.
pub fn viscous_conservation(
    sigma2: f64,
    b: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> Result<CoefficientModel> {
    check_sigma2(sigma2)?;
    Ok(CoefficientModel::new("viscous_conservation", move |_| sigma2, b))
}

/// Viscous Burgers: `A(u) = σ²u`, `B(u) = u²`.
pub fn burgers(sigma2: f64) -> Result<CoefficientModel> {
    check_sigma2(sigma2)?;
    Ok(CoefficientModel::with_primitives(
        format!("burgers(sigma2={sigma2})"),
        move |_| sigma2,
        |u| 2.0 * u,
        move |u| sigma2 * u,
        |u| u * u,
    )
    .smooth(Smoothness::C2aC1bHolder))
}

/// `a ≡ σ²`, `b(u) = 1 − 2u`, `B(u) = u(1 − u)`: the stationary profile is a logistic law.
pub fn logistic_demo(sigma2: f64) -> Result<CoefficientModel> {
    check_sigma2(sigma2)?;
    Ok(CoefficientModel::with_primitives(
        format!("logistic_demo(sigma2={sigma2})"),
        move |_| sigma2,
        |u| 1.0 - 2.0 * u,
        move |u| sigma2 * u,
        |u| u * (1.0 - u),
    )
    .smooth(Smoothness::C2aC1bHolder))
}

/// `a(u) = u(1−u)|u−½|^{3/2}`, `B(u) = u(1−u)(u−½)²`. `B` vanishes at `½`, which
/// admits stationary solutions that are not translations of each other.
pub fn degenerate_demo() -> CoefficientModel {
    // ∫ (¼ − w²)|w|^{3/2} dw, odd in w = u − ½
    fn g(w: f64) -> f64 {
        let aw = w.abs();
        w.signum() * (0.1 * aw.powf(2.5) - (2.0 / 9.0) * aw.powf(4.5))
    }
    let g0 = g(-0.5);
    CoefficientModel::with_primitives(
        "degenerate_demo",
        |u| u * (1.0 - u) * (u - 0.5).abs().powf(1.5),
        |u| {
            let w = u - 0.5;
            (1.0 - 2.0 * u) * w * w + 2.0 * u * (1.0 - u) * w
        },
        move |u| g(u - 0.5) - g0,
        |u| {
            let w = u - 0.5;
            u * (1.0 - u) * w * w
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Holds,
    Fails,
    Undetermined,
}

impl TriState {
    pub fn holds(self) -> bool {
        self == TriState::Holds
    }
}

impl Serialize for Improper {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Improper::Finite(v) => s.serialize_f64(*v),
            Improper::Divergent => s.serialize_str("+inf"),
            Improper::Undetermined => s.serialize_str("undetermined"),
        }
    }
}

/// Grid-based verdicts on the nondegeneracy (D1–D3), declared regularity
/// (R1–R2) and equilibrium (E1–E2) conditions, with witnesses.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub d1: TriState,
    pub d2: TriState,
    pub d3: TriState,
    /// Grid minimum of `a` on `[0, 1]`: the ellipticity constant when D3 holds.
    pub a_min: f64,
    pub r1: bool,
    pub r2: bool,
    pub e1: TriState,
    pub e2: TriState,
    pub b_at_one: f64,
    pub b_min_interior: f64,
    /// `∫ a/2B` over `[1/grid, 1 − 1/grid]`, when E1's sign checks pass.
    pub e1_local_integral: Option<f64>,
    pub e2_integral: Improper,
}

/// The E2 integral `∫₀^½ a·u/2|B| + ∫_½^1 a·(1−u)/2|B|`.
pub fn e2_integral(model: &CoefficientModel, tol: f64) -> Improper {
    let left = |u: f64| model.a(u) * u / (2.0 * model.big_b(u).abs());
    let right = |u: f64| model.a(u) * (1.0 - u) / (2.0 * model.big_b(u).abs());
    let l = integrate_singular(&left, 0.0, 0.5, true, false, tol);
    let r = integrate_singular(&right, 0.5, 1.0, false, true, tol);
    match (l, r) {
        (Improper::Finite(x), Improper::Finite(y)) => Improper::Finite(x + y),
        (Improper::Divergent, _) | (_, Improper::Divergent) => Improper::Divergent,
        _ => Improper::Undetermined,
    }
}

pub fn check_conditions(model: &CoefficientModel, grid_size: usize, tol: f64) -> Result<ConditionReport> {
    if grid_size < 16 {
        return Err(invalid(format!("grid_size must be >= 16, got {grid_size}")));
    }
    let h = 1.0 / grid_size as f64;
    let grid: Vec<f64> = (0..=grid_size).map(|k| k as f64 * h).collect();
    let a_vals: Vec<f64> = grid.iter().map(|&u| model.a(u)).collect();
    let a_min = a_vals.iter().copied().fold(f64::INFINITY, f64::min);
    let a_min_pos = a_vals[1..].iter().copied().fold(f64::INFINITY, f64::min);

    let grade = |m: f64| {
        if m >= tol {
            TriState::Holds
        } else if m <= 0.0 {
            TriState::Fails
        } else {
            TriState::Undetermined
        }
    };
    let d3 = grade(a_min);
    let d2 = grade(a_min_pos);
    let d1 = if d2.holds() {
        TriState::Holds
    } else {
        let big_a: Vec<f64> = grid.iter().map(|&u| model.big_a(u)).collect();
        if big_a.windows(2).all(|w| w[1] > w[0]) { TriState::Holds } else { TriState::Fails }
    };

    let b_at_one = model.antiderivative(Primitive::B, 1.0)?;
    let b_min_interior = grid[1..grid_size].iter().map(|&u| model.big_b(u)).fold(f64::INFINITY, f64::min);
    let mut e1_local_integral = None;
    let e1 = if b_at_one.abs() > tol || b_min_interior <= 0.0 {
        TriState::Fails
    } else {
        let f = |u: f64| model.a(u) / (2.0 * model.big_b(u));
        let r = integrate(&f, h, 1.0 - h, Tolerance::abs(1e-10));
        if r.converged && r.value.is_finite() {
            e1_local_integral = Some(r.value);
            TriState::Holds
        } else {
            TriState::Undetermined
        }
    };
    let (e2, e2_integral) = if e1.holds() {
        let v = e2_integral(model, 1e-10);
        let verdict = match v {
            Improper::Finite(_) => TriState::Holds,
            Improper::Divergent => TriState::Fails,
            Improper::Undetermined => TriState::Undetermined,
        };
        (verdict, v)
    } else {
        (TriState::Undetermined, Improper::Undetermined)
    };

    let smooth = model.smoothness();
    Ok(ConditionReport {
        d1,
        d2,
        d3,
        a_min,
        r1: smooth != Smoothness::None,
        r2: smooth == Smoothness::C2aC1bHolder,
        e1,
        e2,
        b_at_one,
        b_min_interior,
        e1_local_integral,
        e2_integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn porous_medium_values() {
        let m = porous_medium(2.0).unwrap();
        assert!(close(m.big_a(0.3), 0.09, 1e-15));
        assert!(close(m.a(0.3), 0.6, 1e-15));
        assert!(porous_medium(1.0).is_err());
        assert!(porous_medium(0.5).is_err());
    }

    #[test]
    fn linear_viscous_case() {
        let m = make_builtin(&BuiltinKind::ViscousConservation { sigma2: 1.0, b: Polynomial(vec![0.0]) }).unwrap();
        for u in [0.0, 0.25, 0.7, 1.0] {
            assert!(close(m.big_a(u), u, 1e-15));
            assert_eq!(m.big_b(u), 0.0);
        }
    }

    #[test]
    fn logistic_primitive() {
        let m = logistic_demo(1.0).unwrap();
        assert!(close(m.big_b(0.5), 0.25, 1e-15));
        assert!(close(m.big_b(1.0), 0.0, 1e-15));
    }

    #[test]
    fn antiderivative_examples() {
        let m = viscous_conservation(1.0, |_| 0.0).unwrap();
        assert!(close(m.antiderivative(Primitive::A, 0.5).unwrap(), 0.5, 1e-12));
        for model in [logistic_demo(2.0).unwrap(), degenerate_demo(), m.clone()] {
            assert_eq!(model.antiderivative(Primitive::A, 0.0).unwrap(), 0.0);
            assert_eq!(model.antiderivative(Primitive::B, 0.0).unwrap(), 0.0);
        }
        // quadrature route against the closed form u³
        let cubic = CoefficientModel::new("cubic", |u| 3.0 * u * u, |_| 0.0);
        assert!(close(cubic.antiderivative(Primitive::A, 0.5).unwrap(), 0.125, 1e-12));
        assert!(close(cubic.big_a(0.5), 0.125, 1e-12));
        assert!(m.antiderivative(Primitive::A, 1.5).is_err());
        assert!(m.antiderivative(Primitive::B, -0.1).is_err());
    }

    #[test]
    fn unknown_model_name() {
        let err = make_builtin_named("heat", &serde_json::json!({})).unwrap_err();
        assert!(matches!(err, Error::UnknownModel(_)));
        let m = make_builtin_named("logistic_demo", &serde_json::json!({"sigma2": 1.0})).unwrap();
        assert!(close(m.big_b(0.5), 0.25, 1e-15));
        assert!(make_builtin_named("porous_medium", &serde_json::json!({"q": 1.0})).is_err());
    }

    #[test]
    fn degenerate_primitive_matches_quadrature() {
        let m = degenerate_demo();
        for u in [0.1, 0.4, 0.5, 0.6, 0.93, 1.0] {
            let q = integrate(&|v| m.a(v), 0.0, u, Tolerance::abs(1e-13)).value;
            assert!(close(m.big_a(u), q, 1e-12), "u={u}");
            let qb = integrate(&|v| m.b(v), 0.0, u, Tolerance::abs(1e-13)).value;
            assert!(close(m.big_b(u), qb, 1e-12), "u={u}");
        }
    }

    #[test]
    fn primitives_differentiate_back() {
        let models = vec![
            porous_medium(2.0).unwrap(),
            porous_medium(3.5).unwrap(),
            burgers(0.7).unwrap(),
            logistic_demo(1.3).unwrap(),
            degenerate_demo(),
            viscous_conservation(1.0, |u| (1.0 - u) * (1.0 - 3.0 * u)).unwrap(),
        ];
        let h = 1e-5;
        for m in &models {
            for k in 1..200 {
                let u = k as f64 / 200.0;
                let da = (m.big_a(u + h) - m.big_a(u - h)) / (2.0 * h);
                let db = (m.big_b(u + h) - m.big_b(u - h)) / (2.0 * h);
                assert!(close(da, m.a(u), 1e-6), "{}: a at {u}: {da} vs {}", m.name(), m.a(u));
                assert!(close(db, m.b(u), 1e-6), "{}: b at {u}", m.name());
            }
        }
    }

    #[test]
    fn sigma_squares_to_a() {
        let m = porous_medium(2.5).unwrap();
        for k in 0..=100 {
            let u = k as f64 / 100.0;
            let s = m.sigma(u);
            assert!((s * s - m.a(u)).abs() <= 1e-12 * m.a(u).max(1e-300));
        }
    }

    #[test]
    fn constant_diffusion_is_uniformly_elliptic() {
        let m = viscous_conservation(1.0, |_| 0.0).unwrap();
        let r = check_conditions(&m, 64, 1e-9).unwrap();
        assert_eq!(r.d3, TriState::Holds);
        assert_eq!(r.a_min, 1.0);
    }

    #[test]
    fn logistic_conditions() {
        let r = check_conditions(&logistic_demo(1.0).unwrap(), 256, 1e-9).unwrap();
        assert_eq!(r.e1, TriState::Holds);
        assert_eq!(r.e2, TriState::Holds);
        let v = r.e2_integral.finite().unwrap();
        assert!(close(v, std::f64::consts::LN_2, 1e-6), "{v}");
        assert!(r.r1 && r.r2);
    }

    #[test]
    fn porous_medium_has_no_equilibrium() {
        let r = check_conditions(&porous_medium(2.0).unwrap(), 64, 1e-9).unwrap();
        assert_eq!(r.e1, TriState::Fails);
        assert_eq!(r.d3, TriState::Fails);
        assert_eq!(r.d2, TriState::Holds);
        assert_eq!(r.d1, TriState::Holds);
    }

    #[test]
    fn degenerate_demo_conditions() {
        let r = check_conditions(&degenerate_demo(), 64, 1e-12).unwrap();
        assert_eq!(r.d1, TriState::Holds);
        assert_eq!(r.d2, TriState::Fails);
        assert_eq!(r.e1, TriState::Fails);
    }

    #[test]
    fn divergent_e2_integral() {
        // B ~ u² at 0 with a(0) > 0
        let m = CoefficientModel::with_primitives(
            "quadratic_left_tail",
            |_| 1.0,
            |u| 2.0 * u - 3.0 * u * u,
            |u| u,
            |u| u * u * (1.0 - u),
        );
        let r = check_conditions(&m, 64, 1e-9).unwrap();
        assert_eq!(r.e1, TriState::Holds);
        assert_eq!(r.e2, TriState::Fails);
    }

    #[test]
    fn grid_too_small() {
        assert!(check_conditions(&degenerate_demo(), 8, 1e-9).is_err());
    }
}
