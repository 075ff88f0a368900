//! Bracketing root finding and first-root search along a time axis.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::extremum::{refine_local_extremum, ExtremumKind};

/// Sampling plan for scanning a time signal.
///
/// The scan step is `fastest_period / samples_per_fastest_period`, so the
/// sampling adapts to the fastest oscillation present in the signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec<T> {
    pub t_max: T,
    pub fastest_period: T,
    pub samples_per_fastest_period: usize,
    pub refine_tol: T,
}

impl<T: Real> ScanSpec<T> {
    pub const DEFAULT_SAMPLES: usize = 256;
    pub const MIN_SAMPLES: usize = 8;

    pub fn new(t_max: T, fastest_period: T) -> Result<Self> {
        Self::with_options(t_max, fastest_period, Self::DEFAULT_SAMPLES, T::lit(1e-10))
    }

    pub fn with_options(
        t_max: T,
        fastest_period: T,
        samples_per_fastest_period: usize,
        refine_tol: T,
    ) -> Result<Self> {
        if !(t_max.is_finite() && t_max > T::zero()) {
            return Err(Error::InvalidScan("t_max must be positive".into()));
        }
        if !(fastest_period.is_finite() && fastest_period > T::zero()) {
            return Err(Error::InvalidScan("fastest_period must be positive".into()));
        }
        if samples_per_fastest_period < Self::MIN_SAMPLES {
            return Err(Error::InvalidScan(format!(
                "samples_per_fastest_period must be >= {}, got {samples_per_fastest_period}",
                Self::MIN_SAMPLES
            )));
        }
        if !(refine_tol.is_finite() && refine_tol > T::zero()) {
            return Err(Error::InvalidScan("refine_tol must be positive".into()));
        }
        Ok(Self {
            t_max,
            fastest_period,
            samples_per_fastest_period,
            refine_tol,
        })
    }

    pub fn step(&self) -> T {
        self.fastest_period / T::count(self.samples_per_fastest_period)
    }
}

/// Brent's bracketing root finder on `[a, b]` where `f(a)` and `f(b)` differ
/// in sign.
pub fn brent_root<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> Result<T> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if (fa > T::zero()) == (fb > T::zero()) {
        return Err(Error::BracketInvalid {
            lo: a.to_f64().unwrap_or(f64::NAN),
            hi: b.to_f64().unwrap_or(f64::NAN),
        });
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * tol;
        let m = half * (c - b);
        if m.abs() <= tol1 || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            let lim = (T::lit(3.0) * m * q - (tol1 * q).abs()).min((e * q).abs());
            if two * p < lim {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else if m > T::zero() {
            b + tol1
        } else {
            b - tol1
        };
        fb = f(b);
    }
    Ok(b)
}

/// Smallest `t` in `(0, t_max]` with `|f(t)| <= refine_tol`, or `None`.
///
/// Scans uniformly for either a sign change (refined by [`brent_root`]) or a
/// near-zero local minimum of `|f|` (refined by golden-section/parabolic
/// minimization), whichever comes first in time.
pub fn find_first_root<T: Real, F: Fn(T) -> T>(f: F, scan: &ScanSpec<T>) -> Option<T> {
    let h = scan.step();
    let tol = scan.refine_tol;
    let t_at = |i: usize| (T::count(i) * h).min(scan.t_max);
    let abs_f = |t: T| f(t).abs();

    let mut prev2: Option<(T, T)> = None;
    let mut prev = (T::zero(), f(T::zero()));
    let mut i = 1;
    loop {
        let t = t_at(i);
        let ft = f(t);
        if !ft.is_finite() {
            return None;
        }
        // Touching zero at the previous sample (no sign change).
        if let Some((tp2, fp2)) = prev2 {
            let fp = prev.1;
            if fp.abs() < fp2.abs() && fp.abs() <= ft.abs() {
                if let Ok((tm, vm)) =
                    refine_local_extremum(abs_f, (tp2, t), ExtremumKind::Min, tol * T::lit(1e-2))
                {
                    if vm <= tol && tm > T::zero() {
                        return Some(tm);
                    }
                }
            }
        }
        if ft.abs() <= tol && t > T::zero() {
            return Some(t);
        }
        if prev.1 != T::zero() && (prev.1 > T::zero()) != (ft > T::zero()) {
            if let Ok(root) = brent_root(&f, prev.0, t, tol * T::lit(1e-2)) {
                return Some(root);
            }
        }
        if t >= scan.t_max {
            return None;
        }
        prev2 = Some(prev);
        prev = (t, ft);
        i += 1;
    }
}
