//! Two Razavy wells coupled by `-g x1 x2`, in the product basis
//! `(phi0 phi0, phi0 phi1, phi1 phi0, phi1 phi1)`.
//!
//! That basis order is part of the public contract: every 4-vector and 4x4
//! matrix in this crate uses it.

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::numerics::{integrate, QuadratureSpec};
use crate::scalar::Real;
use crate::well::{PotentialParams, SingleWellBasis};

/// Dipole matrix element `gamma = <phi0| x |phi1>`.
pub fn overlap_gamma<T: Real>(basis: &SingleWellBasis<T>, quad: &QuadratureSpec<T>) -> Result<T> {
    integrate(|x| basis.phi0(x) * x * basis.phi1(x), quad)
}

/// `U(x1, x2) = V(x1) + V(x2) - g x1 x2`.
pub fn composite_potential<T: Real>(params: &PotentialParams<T>, g: T, x1: T, x2: T) -> T {
    params.potential(x1) + params.potential(x2) - g * x1 * x2
}

/// Single-well basis together with its overlap `gamma`, computed once.
///
/// Every spectrum derived from one `CoupledSystem` shares the same `gamma`,
/// so coupling sweeps never re-run the quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledSystem<T> {
    basis: SingleWellBasis<T>,
    gamma: T,
}

impl<T: Real> CoupledSystem<T> {
    pub fn new(params: PotentialParams<T>, quad: &QuadratureSpec<T>) -> Result<Self> {
        let basis = SingleWellBasis::build(params, quad)?;
        let gamma = overlap_gamma(&basis, quad)?;
        Ok(Self { basis, gamma })
    }

    pub fn from_parts(basis: SingleWellBasis<T>, gamma: T) -> Self {
        Self { basis, gamma }
    }

    pub fn basis(&self) -> &SingleWellBasis<T> {
        &self.basis
    }

    pub fn params(&self) -> &PotentialParams<T> {
        &self.basis.params
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// The 4x4 energy matrix at coupling `g`.
    pub fn energy_matrix(&self, g: T) -> [[T; 4]; 4] {
        let [e0, e1, ..] = self.basis.levels;
        let c = -g * self.gamma * self.gamma;
        let z = T::zero();
        let two = T::lit(2.0);
        [
            [two * e0, z, z, c],
            [z, e0 + e1, c, z],
            [z, c, e0 + e1, z],
            [c, z, z, two * e1],
        ]
    }

    pub fn spectrum(&self, g: T) -> CoupledSpectrum<T> {
        let [e0, e1, ..] = self.basis.levels;
        let eps_sum = e1 + e0;
        let delta = e1 - e0;
        let coupling = g * self.gamma * self.gamma;
        let root = (delta * delta + coupling * coupling).sqrt();
        CoupledSpectrum {
            g,
            gamma: self.gamma,
            eps_sum,
            delta,
            theta: coupling.atan2(delta) / T::lit(2.0),
            energies: [
                eps_sum - root,
                eps_sum - coupling,
                eps_sum + coupling,
                eps_sum + root,
            ],
            hbar: self.basis.params.hbar,
        }
    }

    /// Eigen-decomposition of [`energy_matrix`](Self::energy_matrix) by
    /// Jacobi rotations, independent of the closed forms.
    pub fn numeric_spectrum(&self, g: T) -> ([T; 4], [[T; 4]; 4]) {
        symmetric_eigen(self.energy_matrix(g))
    }
}

/// Closed-form coupled levels and mixing angle at one coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledSpectrum<T> {
    pub g: T,
    pub gamma: T,
    /// `eps1 + eps0`.
    pub eps_sum: T,
    /// `eps1 - eps0`.
    pub delta: T,
    /// Mixing angle, `tan 2 theta = g gamma^2 / delta`, in `[-pi/4, pi/4]`.
    pub theta: T,
    /// `E0..E3`; ascending for `g >= 0`.
    pub energies: [T; 4],
    pub hbar: T,
}

/// One coupled eigenstate as coefficients over the product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledEigenstate<T> {
    pub index: usize,
    pub coefficients: [T; 4],
}

impl<T: Real> CoupledSpectrum<T> {
    /// Angular frequencies `Omega_nu = (E_nu - E0) / hbar`.
    pub fn frequencies(&self) -> [T; 4] {
        let e0 = self.energies[0];
        self.energies.map(|e| (e - e0) / self.hbar)
    }

    pub fn eigenstate(&self, index: usize) -> Result<CoupledEigenstate<T>> {
        if index > 3 {
            return Err(Error::IndexOutOfRange(index));
        }
        Ok(CoupledEigenstate {
            index,
            coefficients: self.eigenvector_matrix()[index],
        })
    }

    /// Rows are `Phi0..Phi3` over the product basis.
    pub fn eigenvector_matrix(&self) -> [[T; 4]; 4] {
        let (s, c) = self.theta.sin_cos();
        let r = T::FRAC_1_SQRT_2();
        let z = T::zero();
        [[c, z, z, s], [z, r, r, z], [z, -r, r, z], [-s, z, z, c]]
    }

    /// `E3 - E2 = E1 - E0 = sqrt(delta^2 + g^2 gamma^4) - g gamma^2`.
    pub fn doublet_gap(&self) -> T {
        let coupling = self.g * self.gamma * self.gamma;
        (self.delta * self.delta + coupling * coupling).sqrt() - coupling
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rule;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn system() -> CoupledSystem<f64> {
        CoupledSystem::new(PotentialParams::default(), &QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn gamma_value_and_symmetries() {
        let sys = system();
        assert_abs_diff_eq!(sys.gamma(), 1.13823, epsilon = 1e-4);
        let b = sys.basis();
        let quad = QuadratureSpec::default();
        let swapped = integrate(|x| b.phi1(x) * x * b.phi0(x), &quad).unwrap();
        assert_abs_diff_eq!(swapped, sys.gamma(), epsilon = 1e-14);
        let half = crate::numerics::integrate_interval(
            |x| b.phi0(x) * x * b.phi1(x),
            0.0,
            quad.truncation_halfwidth,
            &quad,
        )
        .unwrap();
        assert_abs_diff_eq!(2.0 * half, sys.gamma(), epsilon = 1e-11);
        let other = overlap_gamma(b, &quad.with_rule(Rule::GaussLegendre10x20)).unwrap();
        assert_abs_diff_eq!(other, sys.gamma(), epsilon = 1e-10);
    }

    #[test]
    fn matrix_structure() {
        let sys = system();
        let m0 = sys.energy_matrix(0.0);
        let [e0, e1, ..] = sys.basis().levels;
        assert_eq!(
            [m0[0][0], m0[1][1], m0[2][2], m0[3][3]],
            [2.0 * e0, e0 + e1, e0 + e1, 2.0 * e1]
        );
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(m0[i][j], 0.0);
                }
            }
        }
        let m = sys.energy_matrix(0.1);
        let expected = -0.1 * sys.gamma().powi(2);
        assert_abs_diff_eq!(m[0][3], -0.129557, epsilon = 1e-6);
        assert_eq!(m[0][3], expected);
        assert_eq!(m[1][2], expected);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m[i][j], m[j][i]);
            }
        }
    }

    #[test]
    fn spectrum_values() {
        let sys = system();
        let s = sys.spectrum(0.1);
        for (a, b) in s
            .energies
            .iter()
            .zip([-9.53347, -9.50736, -9.24825, -9.22213])
        {
            assert_abs_diff_eq!(*a, b, epsilon = 2e-5);
        }
        let s0 = sys.spectrum(0.0);
        for (a, b) in s0.energies.iter().zip([-9.4641, -9.3778, -9.3778, -9.2915]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-4);
        }
        assert_eq!(s0.energies[1], s0.energies[2]);
        assert_eq!(s0.theta, 0.0);
        assert_abs_diff_eq!(s0.delta, 1.0 + 3f64.sqrt() - 7f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(s0.eps_sum, -9.3778, epsilon = 1e-4);
    }

    #[test]
    fn spectrum_invariants_over_g() {
        let sys = system();
        let mut last_gap = f64::INFINITY;
        let mut last_mid = 0.0;
        for k in 0..=20 {
            let g = 0.01 * k as f64;
            let s = sys.spectrum(g);
            let e = s.energies;
            assert!(e[0] <= e[1] && e[1] <= e[2] && e[2] <= e[3]);
            assert_abs_diff_eq!(e[0] + e[3], 2.0 * s.eps_sum, epsilon = 1e-13);
            assert_abs_diff_eq!(e[1] + e[2], 2.0 * s.eps_sum, epsilon = 1e-13);
            assert_abs_diff_eq!(e[1] - e[0], s.doublet_gap(), epsilon = 1e-13);
            assert_abs_diff_eq!(e[3] - e[2], s.doublet_gap(), epsilon = 1e-13);
            assert_abs_diff_eq!(
                (2.0 * s.theta).tan(),
                g * s.gamma.powi(2) / s.delta,
                epsilon = 1e-12
            );
            assert!((-FRAC_PI_4..=FRAC_PI_4).contains(&s.theta));
            let gap = e[1] - e[0];
            let mid = e[2] - e[1];
            if k > 0 {
                assert!(gap < last_gap && mid > last_mid, "g={g}");
            }
            last_gap = gap;
            last_mid = mid;
            // Negative coupling mirrors the spectrum.
            let mut neg = sys.spectrum(-g).energies;
            neg.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a, b) in neg.iter().zip(e) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-13);
            }
        }
        assert_abs_diff_eq!(sys.spectrum(1e9).theta, FRAC_PI_4, epsilon = 1e-9);
    }

    #[test]
    fn numeric_decomposition_matches_closed_form() {
        let sys = system();
        for k in 0..=20 {
            let g = 0.01 * k as f64;
            let s = sys.spectrum(g);
            let (vals, vecs) = sys.numeric_spectrum(g);
            for (a, b) in vals.iter().zip(s.energies) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
            }
            if g > 0.0 {
                let analytic = s.eigenvector_matrix();
                for (num, ana) in vecs.iter().zip(analytic) {
                    let dot: f64 = num.iter().zip(ana).map(|(a, b)| a * b).sum();
                    assert_abs_diff_eq!(dot.abs(), 1.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn eigenstates() {
        let sys = system();
        let s0 = sys.spectrum(0.0);
        assert_eq!(s0.eigenstate(0).unwrap().coefficients, [1.0, 0.0, 0.0, 0.0]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for g in [0.0, 0.1, 0.7] {
            let s = sys.spectrum(g);
            assert_eq!(s.eigenstate(1).unwrap().coefficients, [0.0, r, r, 0.0]);
            assert_eq!(s.eigenstate(2).unwrap().coefficients, [0.0, -r, r, 0.0]);
            let m = s.eigenvector_matrix();
            for i in 0..4 {
                for j in 0..4 {
                    let dot: f64 = (0..4).map(|k| m[i][k] * m[j][k]).sum();
                    let id = if i == j { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(dot, id, epsilon = 1e-14);
                }
            }
            // H Phi = E Phi for the closed-form pairs.
            let h = sys.energy_matrix(g);
            for (k, row) in m.iter().enumerate() {
                for i in 0..4 {
                    let hv: f64 = (0..4).map(|j| h[i][j] * row[j]).sum();
                    assert_abs_diff_eq!(hv, s.energies[k] * row[i], epsilon = 1e-12);
                }
            }
        }
        assert!(matches!(s0.eigenstate(4), Err(Error::IndexOutOfRange(4))));
    }

    #[test]
    fn composite_potential_landmarks() {
        let p = PotentialParams::<f64>::default();
        let xs = p.well_minimum().unwrap();
        assert_abs_diff_eq!(
            composite_potential(&p, 0.0, xs, xs),
            -16.25,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            composite_potential(&p, 0.0, 0.0, 0.0),
            -4.0,
            epsilon = 1e-12
        );
        for g in [1.0, 0.1] {
            let diff = composite_potential(&p, g, xs, -xs) - composite_potential(&p, g, xs, xs);
            assert_abs_diff_eq!(diff, 2.0 * g * xs * xs, epsilon = 1e-12);
        }
        let d1 = composite_potential(&p, 1.0, xs, -xs) - composite_potential(&p, 1.0, xs, xs);
        assert_abs_diff_eq!(d1, 3.8327, epsilon = 1e-4);
        for (x1, x2) in [(0.3, -1.2), (1.7, 0.4)] {
            let u = composite_potential(&p, 0.37, x1, x2);
            assert_eq!(u, composite_potential(&p, 0.37, x2, x1));
            assert_abs_diff_eq!(u, composite_potential(&p, 0.37, -x1, -x2), epsilon = 1e-12);
        }
    }
}
