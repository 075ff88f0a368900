//! Quantum speed limit and two-qubit concurrence.

use std::fmt;

use num_complex::Complex;

use crate::coupled::CoupledSpectrum;
use crate::dynamics::{Preset, WavepacketSpec};
use crate::scalar::Real;

/// Which term sets the Mandelstam-Tamm / Margolus-Levitin bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    /// The mean energy `E` is the smaller term.
    Mean,
    /// The spread `dE` is the smaller term.
    Spread,
    /// `E` and `dE` agree to relative `1e-9`.
    Equal,
    /// `min(E, dE) = 0`; no finite bound.
    Unbounded,
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Binding::Mean => "mean",
            Binding::Spread => "spread",
            Binding::Equal => "equal",
            Binding::Unbounded => "unbounded",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedBound<T> {
    /// `sum w_nu (E_nu - E0)`.
    pub mean_energy: T,
    /// Standard deviation of `E_nu - E0` under `w_nu = |a_nu|^2`.
    pub energy_spread: T,
    /// `pi hbar / (2 min(E, dE))`, infinite when the minimum is zero.
    pub tau_min: T,
    pub binding: Binding,
}

/// Relative tolerance for reporting [`Binding::Equal`].
pub const BINDING_EQUAL_TOL: f64 = 1e-9;

pub fn speed_bound<T: Real>(
    spec: &WavepacketSpec<T>,
    spectrum: &CoupledSpectrum<T>,
) -> SpeedBound<T> {
    let e0 = spectrum.energies[0];
    let w = spec.weights();
    let shifted = spectrum.energies.map(|e| e - e0);
    let mean: T = w.iter().zip(shifted).map(|(&w, e)| w * e).sum();
    let second: T = w.iter().zip(shifted).map(|(&w, e)| w * e * e).sum();
    let spread = (second - mean * mean).max(T::zero()).sqrt();
    let lo = mean.min(spread);
    let hi = mean.max(spread);
    let (tau_min, binding) = if lo <= T::zero() {
        (T::infinity(), Binding::Unbounded)
    } else {
        let binding = if hi - lo <= T::lit(BINDING_EQUAL_TOL) * hi {
            Binding::Equal
        } else if mean < spread {
            Binding::Mean
        } else {
            Binding::Spread
        };
        (T::PI() * spectrum.hbar / (T::lit(2.0) * lo), binding)
    };
    SpeedBound {
        mean_energy: mean,
        energy_spread: spread,
        tau_min,
        binding,
    }
}

/// Coefficients `c_kl` of `sum c_kl phi_k(x1) phi_l(x2)`, ordered
/// `(c00, c01, c10, c11)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductBasisState<T> {
    pub c: [Complex<T>; 4],
}

impl<T: Real> ProductBasisState<T> {
    /// Maps eigenbasis amplitudes `a0..a3` through the rotation by `theta`.
    pub fn from_eigen_coefficients(a: &[Complex<T>; 4], theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        let r = T::FRAC_1_SQRT_2();
        Self {
            c: [
                a[0] * c - a[3] * s,
                (a[1] - a[2]) * r,
                (a[1] + a[2]) * r,
                a[0] * s + a[3] * c,
            ],
        }
    }

    pub fn get(&self, k: usize, l: usize) -> Complex<T> {
        self.c[2 * k + l]
    }

    pub fn norm_sqr(&self) -> T {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `C = 2 |c00 c11 - c01 c10|`.
    pub fn concurrence(&self) -> T {
        let [c00, c01, c10, c11] = self.c;
        T::lit(2.0) * (c00 * c11 - c01 * c10).norm()
    }
}

pub fn to_product_basis<T: Real>(spec: &WavepacketSpec<T>, theta: T) -> ProductBasisState<T> {
    ProductBasisState::from_eigen_coefficients(spec.coefficients(), theta)
}

/// Concurrence of the initial state.
pub fn concurrence<T: Real>(spec: &WavepacketSpec<T>, theta: T) -> T {
    to_product_basis(spec, theta).concurrence()
}

/// Concurrence for real eigenbasis amplitudes, expanded in `theta`:
/// `|(a0^2 - a3^2) sin 2theta + 2 a0 a3 cos 2theta - a1^2 + a2^2|`.
pub fn concurrence_real<T: Real>(a: [T; 4], theta: T) -> T {
    let (s2, c2) = (T::lit(2.0) * theta).sin_cos();
    ((a[0] * a[0] - a[3] * a[3]) * s2 + T::lit(2.0) * a[0] * a[3] * c2 - a[1] * a[1] + a[2] * a[2])
        .abs()
}

/// Per-preset closed forms.
pub fn concurrence_closed_form<T: Real>(preset: Preset, theta: T) -> T {
    let (s2, c2) = (T::lit(2.0) * theta).sin_cos();
    let h = T::lit(0.5);
    match preset {
        Preset::A => h * (T::one() - c2).abs(),
        Preset::B => c2.abs(),
        Preset::C => h * (T::one() - s2).abs(),
        Preset::D => h * c2.abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupled::CoupledSystem;
    use crate::numerics::QuadratureSpec;
    use crate::well::PotentialParams;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn system() -> &'static CoupledSystem<f64> {
        static SYS: OnceLock<CoupledSystem<f64>> = OnceLock::new();
        SYS.get_or_init(|| {
            CoupledSystem::new(PotentialParams::default(), &QuadratureSpec::default()).unwrap()
        })
    }

    fn rel(x: f64, y: f64) -> f64 {
        ((x - y) / y).abs()
    }

    #[test]
    fn speed_bounds_of_presets() {
        let s0 = system().spectrum(0.0);
        let a = speed_bound(&WavepacketSpec::preset(Preset::A), &s0);
        assert!(rel(a.mean_energy, 0.0862995) < 1e-5);
        assert!(rel(a.energy_spread, 0.0610230) < 1e-5);
        assert!(rel(a.tau_min, 25.7411) < 1e-5);
        assert_eq!(a.binding, Binding::Spread);
        let b = speed_bound(&WavepacketSpec::preset(Preset::B), &s0);
        assert_eq!(b.binding, Binding::Equal);
        assert!(rel(b.tau_min, 18.2017) < 1e-5);
        let s1 = system().spectrum(0.1);
        let c = speed_bound(&WavepacketSpec::preset(Preset::C), &s1);
        assert_eq!(c.binding, Binding::Equal);
        assert!(rel(c.tau_min, 120.315) < 1e-5);
        let d = speed_bound(&WavepacketSpec::preset(Preset::D), &s1);
        assert!(rel(d.tau_min, 10.9686) < 1e-5);
    }

    #[test]
    fn two_level_bound_is_saturated() {
        // For two equally weighted levels, tau_min equals the orthogonality time.
        for g in [0.0, 0.05, 0.1, 0.2] {
            let s = system().spectrum(g);
            let c = speed_bound(&WavepacketSpec::preset(Preset::C), &s);
            let tau = std::f64::consts::PI / s.frequencies()[1];
            assert!(rel(c.tau_min, tau) < 1e-12);
        }
    }

    #[test]
    fn stationary_bound_is_unbounded() {
        let z = Complex::new(0.0, 0.0);
        let spec = WavepacketSpec::new([Complex::new(1.0, 0.0), z, z, z]).unwrap();
        let b = speed_bound(&spec, &system().spectrum(0.1));
        assert_eq!(b.binding, Binding::Unbounded);
        assert!(b.tau_min.is_infinite());
        assert_eq!(b.energy_spread, 0.0);
    }

    #[test]
    fn concurrence_table_values() {
        let t0 = system().spectrum(0.0).theta;
        let t1 = system().spectrum(0.1).theta;
        let cases = [
            (Preset::A, t0, 0.0),
            (Preset::B, t0, 1.0),
            (Preset::C, t0, 0.5),
            (Preset::D, t0, 0.5),
            (Preset::C, t1, 0.0839),
            (Preset::D, t1, 0.2772),
        ];
        for (p, theta, want) in cases {
            let c = concurrence(&WavepacketSpec::preset(p), theta);
            assert_abs_diff_eq!(c, want, epsilon = 1e-4);
        }
    }

    #[test]
    fn three_routes_agree_over_g() {
        for k in 0..=40 {
            let g = 0.01 * k as f64;
            let theta = system().spectrum(g).theta;
            for p in Preset::ALL {
                let spec = WavepacketSpec::preset(p);
                let direct = concurrence(&spec, theta);
                assert_abs_diff_eq!(direct, concurrence_closed_form(p, theta), epsilon = 1e-12);
                assert_abs_diff_eq!(
                    direct,
                    concurrence_real(spec.real_coefficients().unwrap(), theta),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn product_state_is_normalized() {
        let s = system().spectrum(0.1);
        for p in Preset::ALL {
            let c = to_product_basis(&WavepacketSpec::preset(p), s.theta);
            assert_abs_diff_eq!(c.norm_sqr(), 1.0, epsilon = 1e-14);
        }
        // Phi0 at g = 0 is phi0 phi0, a product state.
        let z = Complex::new(0.0, 0.0);
        let spec = WavepacketSpec::new([Complex::new(1.0, 0.0), z, z, z]).unwrap();
        assert_abs_diff_eq!(concurrence(&spec, 0.0), 0.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn concurrence_bounded_and_phase_invariant(
            raw in proptest::array::uniform8(-1.0..1.0f64),
            theta in 0.0..std::f64::consts::FRAC_PI_2,
            phase in 0.0..6.0f64,
            local in 0.0..6.0f64,
        ) {
            let v: Vec<Complex<f64>> = raw.chunks(2).map(|p| Complex::new(p[0], p[1])).collect();
            let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(n > 1e-3);
            let a = [v[0] / n, v[1] / n, v[2] / n, v[3] / n];
            let spec = WavepacketSpec::new(a).unwrap();
            let c = concurrence(&spec, theta);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
            prop_assert!((concurrence(&spec.with_global_phase(phase), theta) - c).abs() < 1e-12);
            // A local phase on qubit 2 (phi1 -> e^{i local} phi1) leaves C unchanged.
            let mut ps = to_product_basis(&spec, theta);
            let u = Complex::from_polar(1.0, local);
            ps.c[1] *= u;
            ps.c[3] *= u;
            prop_assert!((ps.concurrence() - c).abs() < 1e-12);
        }
    }
}
