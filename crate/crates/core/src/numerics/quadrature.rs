#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{NumericsError, Tolerance};

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule
// (QUADPACK qk15). Index 7 is the centre.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Segment, NumericsError> {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |x: f64| -> Result<f64, NumericsError> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericsError::NonFinite { t: x })
        }
    };

    let f_centre = eval(centre)?;
    let mut res_k = f_centre * WGK[7];
    let mut res_g = f_centre * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let a = eval(centre - dx)?;
        let b = eval(centre + dx)?;
        fv1[j] = a;
        fv2[j] = b;
        res_k += WGK[j] * (a + b);
        res_abs += WGK[j] * (a.abs() + b.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (a + b);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_centre - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { lo, hi, value, error })
}

/// Adaptive Gauss-Kronrod (7/15) quadrature of `f` over `[t_lo, t_hi]`.
///
/// The segment with the largest error estimate is bisected until the summed
/// estimate drops below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate_1d<F>(f: F, t_lo: f64, t_hi: f64, tol: &Tolerance) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    integrate_1d_points(f, &[t_lo, t_hi], tol)
}

/// Like [`integrate_1d`], but starts from the partition given by `points`
/// (sorted, at least two entries). Useful when the integrand has known kinks.
pub fn integrate_1d_points<F>(f: F, points: &[f64], tol: &Tolerance) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if points.len() < 2 {
        return Err(NumericsError::InvalidInput("need at least two integration points".into()));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(NumericsError::InvalidInput("integration limits must be finite".into()));
    }
    if points.windows(2).any(|w| w[0] > w[1]) {
        return Err(NumericsError::InvalidInput("integration limits must be non-decreasing".into()));
    }

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let seg = kronrod15(&f, w[0], w[1])?;
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }
    if heap.is_empty() {
        return Ok(0.0);
    }

    let mut subdivisions = heap.len();
    loop {
        if total_err <= tol.abs_tol.max(tol.rel_tol * total.abs()) {
            return Ok(total);
        }
        if subdivisions >= tol.max_iterations {
            return Err(NumericsError::NonConvergence { budget: tol.max_iterations, estimate: total_err });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval collapsed to adjacent floats; nothing left to refine.
            return Err(NumericsError::NonConvergence { budget: subdivisions, estimate: total_err });
        }
        let left = kronrod15(&f, worst.lo, mid)?;
        let right = kronrod15(&f, mid, worst.hi)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;

        // Re-sum now and then so cancellation in the running totals cannot drift.
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
}
