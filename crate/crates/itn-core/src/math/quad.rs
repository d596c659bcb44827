//! Adaptive Gauss-Kronrod quadrature (7/15 pair) with a worst-interval
//! report on failure, plus an arctangent substitution for narrow
//! Lorentzian-like peaks.

use crate::error::{BadInterval, Error, Result};
use crate::math::NeumaierSum;

// 15-point Kronrod abscissae (positive half) and weights, with the
// embedded 7-point Gauss weights. Standard QUADPACK constants.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss-Kronrod evaluation on [a, b]: (kronrod value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let raw = ((kronrod - gauss) * half).abs();
    // QUADPACK-style error rescaling against the absolute integral.
    let scaled = if resabs != 0.0 && raw != 0.0 {
        let r = (200.0 * raw / (resabs * half.abs())).powf(1.5);
        if r < 1.0 {
            resabs * half.abs() * r
        } else {
            raw
        }
    } else {
        raw
    };
    (value, scaled.max(raw * 50.0 * f64::EPSILON))
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-4,
            abs_tol: 0.0,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub n_evals: usize,
    pub n_intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

/// Adaptive bisection of the worst interval until the summed error meets
/// `max(abs_tol, rel_tol * |integral|)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::Config(format!("bad integration interval [{a}, {b}]")));
    }
    let (v, e) = gk15(&f, a, b);
    let mut intervals = vec![Interval { lo: a, hi: b, value: v, error: e }];
    let mut n_evals = 15;

    loop {
        let total: f64 = intervals.iter().map(|i| i.value).collect::<NeumaierSum>().total();
        let err: f64 = intervals.iter().map(|i| i.error).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= tol || err <= opts.abs_tol.max(f64::EPSILON * total.abs() * 50.0) {
            return Ok(QuadResult {
                value: total,
                error_estimate: err,
                n_evals,
                n_intervals: intervals.len(),
            });
        }
        if intervals.len() >= opts.max_intervals {
            let mut worst: Vec<&Interval> = intervals.iter().collect();
            worst.sort_by(|x, y| y.error.total_cmp(&x.error));
            return Err(Error::Unconverged {
                value: total,
                error_estimate: err,
                tolerance: tol,
                worst: worst
                    .iter()
                    .take(5)
                    .map(|i| BadInterval { lo: i.lo, hi: i.hi, error_estimate: i.error })
                    .collect(),
            });
        }
        // Split the worst interval.
        let (wi, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("nonempty");
        let Interval { lo, hi, .. } = intervals.swap_remove(wi);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        n_evals += 30;
        intervals.push(Interval { lo, hi: mid, value: v1, error: e1 });
        intervals.push(Interval { lo: mid, hi, value: v2, error: e2 });
    }
}

/// Integrate `f` over [lo, hi] across a Lorentzian-like peak centered at
/// `center` with half-width `scale`, using the substitution
/// `omega = center + scale * tan(v)` that flattens the peak.
pub fn integrate_peak<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    scale: f64,
    lo: f64,
    hi: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    debug_assert!(scale > 0.0);
    let v_lo = ((lo - center) / scale).atan();
    let v_hi = ((hi - center) / scale).atan();
    integrate_adaptive(
        move |v| {
            let c = v.cos();
            f(center + scale * v.tan()) * scale / (c * c)
        },
        v_lo,
        v_hi,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_integrand_converges_fast() {
        let r = integrate_adaptive(|x: f64| x.exp(), 0.0, 1.0, QuadOptions::default()).unwrap();
        assert!((r.value - (std::f64::consts::E - 1.0)).abs() < 1e-12);
        assert_eq!(r.n_intervals, 1);
    }

    #[test]
    fn narrow_lorentzian_needs_peak_substitution() {
        // half-width 1e-8 Lorentzian; area over the window is ~pi*g.
        let g = 1e-8;
        let f = move |x: f64| g * g / ((x - 0.5).powi(2) + g * g);
        let r = integrate_peak(f, 0.5, g, 0.5 - 1e-3, 0.5 + 1e-3, QuadOptions::default()).unwrap();
        let want = g * 2.0 * (1e-3 / g).atan();
        assert!((r.value - want).abs() / want < 1e-6, "got {} want {}", r.value, want);
    }

    #[test]
    fn unconverged_reports_worst_intervals() {
        // An integrable singularity with a tiny interval budget.
        let opts = QuadOptions { rel_tol: 1e-12, abs_tol: 0.0, max_intervals: 8 };
        let err = integrate_adaptive(|x: f64| x.abs().sqrt().recip().min(1e12), 1e-300, 1.0, opts)
            .unwrap_err();
        match err {
            Error::Unconverged { worst, .. } => assert!(!worst.is_empty()),
            other => panic!("expected Unconverged, got {other:?}"),
        }
    }

    #[test]
    fn oscillatory_integrand() {
        let r = integrate_adaptive(|x: f64| (40.0 * x).sin(), 0.0, 2.0, QuadOptions::default()).unwrap();
        let want = (1.0 - (80.0f64).cos()) / 40.0;
        assert!((r.value - want).abs() < 1e-9);
    }
}
