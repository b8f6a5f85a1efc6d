//! Adaptive Gauss–Kronrod quadrature and improper integrals with endpoint singularities.
//!
//! The 21-point Kronrod rule never samples the interval endpoints, so integrands
//! that blow up at `lo` or `hi` can be passed directly as long as the singularity
//! is integrable.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_598,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights, attached to the odd Kronrod abscissae XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One application of the 21-point Kronrod rule; returns (estimate, error).
pub fn gk21<F: Fn(f64) -> f64 + ?Sized>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-12, max_intervals: 4000 }
    }
}

impl Tolerance {
    pub fn abs(abs: f64) -> Self {
        Self { abs, ..Self::default() }
    }
}

struct Piece {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive bisection: always splits the piece with the largest error.
pub fn integrate<F: Fn(f64) -> f64 + ?Sized>(f: &F, lo: f64, hi: f64, tol: Tolerance) -> Integral {
    if lo == hi {
        return Integral { value: 0.0, error: 0.0, converged: true };
    }
    if lo > hi {
        let r = integrate(f, hi, lo, tol);
        return Integral { value: -r.value, ..r };
    }
    let (v, e) = gk21(f, lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { lo, hi, value: v, error: e });
    let mut total = v;
    let mut total_err = e;
    let mut count = 1;
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Integral { value: total, error: f64::INFINITY, converged: false };
        }
        if total_err <= tol.abs.max(tol.rel * total.abs()) {
            return Integral { value: total, error: total_err, converged: true };
        }
        if count >= tol.max_intervals {
            return Integral { value: total, error: total_err, converged: false };
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval exhausted at machine precision
            heap.push(worst);
            return Integral { value: total, error: total_err, converged: false };
        }
        let (v1, e1) = gk21(f, worst.lo, mid);
        let (v2, e2) = gk21(f, mid, worst.hi);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Piece { lo: worst.lo, hi: mid, value: v1, error: e1 });
        heap.push(Piece { lo: mid, hi: worst.hi, value: v2, error: e2 });
        count += 1;
    }
}

/// Outcome of an improper integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Improper {
    Finite(f64),
    Divergent,
    Undetermined,
}

impl Improper {
    pub fn finite(self) -> Option<f64> {
        match self {
            Improper::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// `+∞` for divergent, `NaN` for undetermined.
    pub fn to_f64(self) -> f64 {
        match self {
            Improper::Finite(v) => v,
            Improper::Divergent => f64::INFINITY,
            Improper::Undetermined => f64::NAN,
        }
    }
}

pub const MAX_HALVINGS: usize = 40;

/// Integrates `f` over `(end, end + start_width]` (or `[end - start_width, end)`)
/// by halving the distance to `end`, accumulating the increments.
///
/// Converged once an increment drops below `tol`, or once the increment ratios
/// settle below one and two successive geometric extrapolations of the remainder
/// agree to `tol`. Increments that refuse to shrink mean the integral diverges.
pub fn integrate_toward<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    end: f64,
    start_width: f64,
    toward_upper: bool,
    tol: f64,
) -> Improper {
    let point = |w: f64| if toward_upper { end - w } else { end + w };
    let piece_tol = Tolerance { abs: tol * 1e-2, rel: 1e-13, max_intervals: 2000 };
    let mut sum = 0.0;
    let mut width = start_width;
    let mut increments: Vec<f64> = Vec::with_capacity(MAX_HALVINGS);
    let mut last_extrapolated: Option<f64> = None;
    for _ in 0..MAX_HALVINGS {
        let next = 0.5 * width;
        let (x_far, x_near) = (point(width), point(next));
        let r = integrate(f, x_far.min(x_near), x_far.max(x_near), piece_tol);
        if !r.value.is_finite() {
            return Improper::Divergent;
        }
        let d = r.value;
        sum += d;
        increments.push(d.abs());
        width = next;

        let k = increments.len();
        if k >= 2 && increments[k - 1] <= tol && increments[k - 1] <= increments[k - 2] {
            return Improper::Finite(sum);
        }
        if k >= 3 {
            let r1 = ratio(increments[k - 1], increments[k - 2]);
            let r2 = ratio(increments[k - 2], increments[k - 3]);
            if r1 < 0.95 && r2 < 0.95 && (r1 - r2).abs() < 0.05 {
                let sign = if d < 0.0 { -1.0 } else { 1.0 };
                let extrapolated = sum + sign * increments[k - 1] * r1 / (1.0 - r1);
                if let Some(prev) = last_extrapolated {
                    if (extrapolated - prev).abs() <= tol {
                        return Improper::Finite(extrapolated);
                    }
                }
                last_extrapolated = Some(extrapolated);
            } else {
                last_extrapolated = None;
            }
        }
        if k >= 6 && increments[k - 1] > tol {
            let stalled = (k - 4..k).all(|j| increments[j] >= 0.98 * increments[j - 1]);
            if stalled {
                return Improper::Divergent;
            }
        }
    }
    Improper::Undetermined
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        num / den
    }
}

/// Integral over `(lo, hi)` where either endpoint may carry an integrable singularity.
pub fn integrate_singular<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    lo: f64,
    hi: f64,
    singular_lo: bool,
    singular_hi: bool,
    tol: f64,
) -> Improper {
    let width = hi - lo;
    let inner_lo = if singular_lo { lo + 0.25 * width } else { lo };
    let inner_hi = if singular_hi { hi - 0.25 * width } else { hi };
    let core = integrate(f, inner_lo, inner_hi, Tolerance { abs: tol * 0.1, rel: 1e-13, max_intervals: 4000 });
    if !core.value.is_finite() {
        return Improper::Divergent;
    }
    if !core.converged {
        return Improper::Undetermined;
    }
    let mut total = core.value;
    for (flag, end, upper) in [(singular_lo, lo, false), (singular_hi, hi, true)] {
        if !flag {
            continue;
        }
        match integrate_toward(f, end, 0.25 * width, upper, tol) {
            Improper::Finite(v) => total += v,
            other => return other,
        }
    }
    Improper::Finite(total)
}
