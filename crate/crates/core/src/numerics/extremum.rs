//! One-dimensional local extremum refinement and scanning.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Which kind of local extremum to locate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Min,
    Max,
}

impl ExtremumKind {
    fn sign<T: Real>(self) -> T {
        match self {
            ExtremumKind::Min => T::one(),
            ExtremumKind::Max => -T::one(),
        }
    }
}

/// Refines the single local extremum of `kind` inside `bracket` with Brent's
/// golden-section/parabolic method. Returns `(t*, f(t*))`.
///
/// The achievable location accuracy at a smooth extremum is limited to about
/// `sqrt(eps) * |t*|`; `tol` below that floor is silently raised to it.
pub fn refine_local_extremum<T: Real, F: Fn(T) -> T>(
    f: F,
    bracket: (T, T),
    kind: ExtremumKind,
    tol: T,
) -> Result<(T, T)> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::BracketInvalid {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let s = kind.sign::<T>();
    let g = |t: T| s * f(t);
    let (t, v) = brent_minimize(g, lo, hi, tol);
    Ok((t, s * v))
}

fn brent_minimize<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, tol: T) -> (T, T) {
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let golden = T::lit(0.381_966_011_250_105_15);
    let sqrt_eps = T::epsilon().sqrt();
    let (mut a, mut b) = (lo, hi);
    let mut x = a + golden * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d = T::zero();
    let mut e = T::zero();
    for _ in 0..500 {
        let m = half * (a + b);
        let tol1 = sqrt_eps * x.abs() + tol / T::lit(3.0);
        let tol2 = two * tol1;
        if (x - m).abs() <= tol2 - half * (b - a) {
            break;
        }
        let mut golden_step = true;
        if e.abs() > tol1 {
            // Parabola through (v, fv), (w, fw), (x, fx).
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = two * (q - r);
            if q > T::zero() {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            if p.abs() < (half * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden_step = false;
            }
        }
        if golden_step {
            e = if x < m { b - x } else { a - x };
            d = golden * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > T::zero() {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

/// Sampled scan for refined local extrema of `f` on `(start, end]`, yielded in
/// increasing `t` order.
///
/// A sample is a candidate when it is strictly better than its left neighbour
/// and no worse than its right neighbour; the candidate is then refined on the
/// two-step bracket around it.
pub struct LocalExtrema<T, F> {
    f: F,
    kind: ExtremumKind,
    start: T,
    step: T,
    end: T,
    tol: T,
    index: usize,
    window: [T; 3],
}

impl<T: Real, F: Fn(T) -> T> LocalExtrema<T, F> {
    pub fn new(f: F, kind: ExtremumKind, start: T, end: T, step: T, tol: T) -> Result<Self> {
        if !(step.is_finite() && step > T::zero()) {
            return Err(Error::InvalidScan("scan step must be positive".into()));
        }
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(Error::InvalidScan(
                "scan range must satisfy start < end".into(),
            ));
        }
        let s = kind.sign::<T>();
        let window = [s * f(start), s * f((start + step).min(end)), T::zero()];
        Ok(Self {
            f,
            kind,
            start,
            step,
            end,
            tol,
            index: 1,
            window,
        })
    }

    fn t_at(&self, i: usize) -> T {
        (self.start + T::count(i) * self.step).min(self.end)
    }
}

impl<T: Real, F: Fn(T) -> T> Iterator for LocalExtrema<T, F> {
    type Item = (T, T);

    fn next(&mut self) -> Option<(T, T)> {
        let s = self.kind.sign::<T>();
        loop {
            let t_mid = self.t_at(self.index);
            if t_mid >= self.end {
                return None;
            }
            let t_next = self.t_at(self.index + 1);
            self.window[2] = s * (self.f)(t_next);
            let [left, mid, right] = self.window;
            let t_prev = self.t_at(self.index - 1);
            self.index += 1;
            self.window = [mid, right, T::zero()];
            if mid < left && mid <= right {
                let refined =
                    refine_local_extremum(&self.f, (t_prev, t_next), self.kind, self.tol).ok()?;
                return Some(refined);
            }
        }
    }
}
