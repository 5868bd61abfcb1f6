//! Globally adaptive Gauss–Kronrod (10/21) quadrature.
//!
//! Semi-infinite ranges are split at an adaptively chosen point `b`; the tail
//! `[b, ∞)` is mapped through `x = b + c (e^v - 1)`, `v = w / (1 - w)`, which
//! turns algebraic decay into exponential decay in `v`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};
use crate::scalar::Real;

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
    0.123_491_976_262_065_851_077_208_977_211_034,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<T> {
    Finite(T, T),
    SemiInfinite(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub est_abs_err: T,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Real> QuadOptions<T> {
    pub fn absolute(tol: T) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: T::zero(),
            max_subdivisions: 4000,
        }
    }

    pub fn relative(tol: T) -> Self {
        Self {
            abs_tol: T::zero(),
            rel_tol: tol,
            max_subdivisions: 4000,
        }
    }

    fn target(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Integrates `f` over `domain` to absolute tolerance `tol`.
pub fn integrate<T, F>(f: F, domain: Domain<T>, tol: T) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_with(f, domain, &QuadOptions::absolute(tol))
}

pub fn integrate_with<T, F>(
    f: F,
    dom: Domain<T>,
    opts: &QuadOptions<T>,
) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if !(opts.abs_tol > T::zero() || opts.rel_tol > T::zero()) {
        return domain("integrate", "tolerance must be positive");
    }
    match dom {
        Domain::Finite(a, b) => {
            if !a.is_finite() || !b.is_finite() {
                return domain("integrate", "finite domain needs finite endpoints");
            }
            if a == b {
                return Ok(QuadratureResult {
                    value: T::zero(),
                    est_abs_err: T::zero(),
                    subdivisions: 0,
                });
            }
            adaptive(&f, &[(a, b)], opts)
        }
        Domain::SemiInfinite(a) => {
            if !a.is_finite() {
                return domain(
                    "integrate",
                    "semi-infinite domain needs a finite lower endpoint",
                );
            }
            let split = choose_split(&f, a, opts);
            let scale = split.abs().max(T::one());
            // x = split + scale (e^v - 1), v = w / (1 - w)
            let tail = |w: T| {
                let one_m = T::one() - w;
                if one_m <= T::zero() {
                    return T::zero();
                }
                let v = w / one_m;
                let ev = v.exp();
                if !ev.is_finite() {
                    return T::zero();
                }
                let x = split + scale * (ev - T::one());
                let jac = scale * ev / (one_m * one_m);
                let y = f(x) * jac;
                if y.is_finite() {
                    y
                } else {
                    T::zero()
                }
            };
            let core = adaptive(&f, &[(a, split)], opts);
            let tail_res = adaptive(&tail, &[(T::zero(), T::one())], opts);
            combine(core, tail_res)
        }
    }
}

fn combine<T: Real>(
    a: Result<QuadratureResult<T>>,
    b: Result<QuadratureResult<T>>,
) -> Result<QuadratureResult<T>> {
    match (a, b) {
        (Ok(a), Ok(b)) => Ok(QuadratureResult {
            value: a.value + b.value,
            est_abs_err: a.est_abs_err + b.est_abs_err,
            subdivisions: a.subdivisions + b.subdivisions,
        }),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

fn choose_split<T: Real, F: Fn(T) -> T>(f: &F, a: T, opts: &QuadOptions<T>) -> T {
    let mut width = T::one();
    let floor = opts.abs_tol.max(T::epsilon());
    for _ in 0..6 {
        let v = f(a + width).abs();
        if v.is_finite() && v * width <= floor {
            break;
        }
        width = width * T::lit(2.0);
    }
    a + width
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    err: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T: Real> Eq for Segment<T> {}
impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

fn gauss_kronrod<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    // Nodes of very short segments can round onto an integrable singularity
    // at an endpoint; such a node carries negligible weight.
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let f = |x: T| {
        let y = f(x);
        if !y.is_finite() && (x <= lo || x >= hi) {
            T::zero()
        } else {
            y
        }
    };
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let abs_half = half_len.abs();
    let fc = f(center);
    let mut resg = T::zero();
    let mut resk = fc * T::lit(WGK[10]);
    let mut resabs = resk.abs();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = T::lit(WGK[j]);
        resk = resk + wk * (f1 + f2);
        resabs = resabs + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg = resg + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let reskh = resk * half;
    let mut resasc = T::lit(WGK[10]) * (fc - reskh).abs();
    for j in 0..10 {
        resasc = resasc + T::lit(WGK[j]) * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * half_len;
    resabs = resabs * abs_half;
    resasc = resasc * abs_half;
    let mut err = ((resk - resg) * half_len).abs();
    if resasc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
        err = resasc * scale.min(T::one());
    }
    let uflow = T::min_positive_value();
    let epmach = T::epsilon();
    if resabs > uflow / (T::lit(50.0) * epmach) {
        err = err.max(epmach * T::lit(50.0) * resabs);
    }
    (result, err)
}

fn adaptive<T: Real, F: Fn(T) -> T>(
    f: &F,
    initial: &[(T, T)],
    opts: &QuadOptions<T>,
) -> Result<QuadratureResult<T>> {
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = T::zero();
    let mut frozen_value = T::zero();
    let mut frozen_err = T::zero();
    for &(a, b) in initial {
        let (value, err) = gauss_kronrod(f, a, b);
        total = total + value;
        total_err = total_err + err;
        heap.push(Segment { a, b, value, err });
    }
    let mut subdivisions = 0usize;
    loop {
        let value = total + frozen_value;
        let err = total_err + frozen_err;
        if !value.is_finite() || !err.is_finite() {
            return Err(Error::NonConvergence {
                func: "integrate",
                estimate: value.as_f64(),
                abs_err: err.as_f64(),
                evaluations: subdivisions,
            });
        }
        if err <= opts.target(value) {
            return Ok(QuadratureResult {
                value,
                est_abs_err: err,
                subdivisions,
            });
        }
        let Some(seg) = heap.pop() else {
            return Err(Error::NonConvergence {
                func: "integrate",
                estimate: value.as_f64(),
                abs_err: err.as_f64(),
                evaluations: subdivisions,
            });
        };
        if subdivisions >= opts.max_subdivisions {
            return Err(Error::NonConvergence {
                func: "integrate",
                estimate: value.as_f64(),
                abs_err: err.as_f64(),
                evaluations: subdivisions,
            });
        }
        let mid = T::lit(0.5) * (seg.a + seg.b);
        total = total - seg.value;
        total_err = total_err - seg.err;
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // Interval below floating resolution; keep its contribution as is.
            frozen_value = frozen_value + seg.value;
            frozen_err = frozen_err + seg.err;
            continue;
        }
        subdivisions += 1;
        let (v1, e1) = gauss_kronrod(f, seg.a, mid);
        let (v2, e2) = gauss_kronrod(f, mid, seg.b);
        total = total + v1 + v2;
        total_err = total_err + e1 + e2;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            err: e2,
        });
        // Running sums drift; resum occasionally.
        if subdivisions.is_multiple_of(64) {
            total = T::zero();
            total_err = T::zero();
            for s in heap.iter() {
                total = total + s.value;
                total_err = total_err + s.err;
            }
        }
    }
}
