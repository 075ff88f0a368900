//! The single Razavy double well: potential, closed-form levels, and the two
//! lowest normalized eigenfunctions.

use crate::error::{Error, Result};
use crate::numerics::{integrate, QuadratureSpec};
use crate::scalar::Real;

/// Physical constants of one well. Defaults are `hbar = mass = xi = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams<T> {
    pub hbar: T,
    pub mass: T,
    pub xi: T,
}

impl<T: Real> Default for PotentialParams<T> {
    fn default() -> Self {
        Self {
            hbar: T::one(),
            mass: T::one(),
            xi: T::one(),
        }
    }
}

impl<T: Real> PotentialParams<T> {
    pub fn new(hbar: T, mass: T, xi: T) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("xi", xi)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self { hbar, mass, xi })
    }

    /// The common energy scale `hbar^2 / 2m`.
    pub fn energy_scale(&self) -> T {
        self.hbar * self.hbar / (T::lit(2.0) * self.mass)
    }

    /// `V(x) = (hbar^2/2m) [ (xi^2/8) cosh 4x - 4 xi cosh 2x - xi^2/8 ]`.
    ///
    /// Overflows to infinity for `|x|` beyond roughly 177 (f64).
    pub fn potential(&self, x: T) -> T {
        let xi = self.xi;
        let eighth = T::lit(0.125) * xi * xi;
        let four = T::lit(4.0);
        self.energy_scale()
            * (eighth * (four * x).cosh() - four * xi * (T::lit(2.0) * x).cosh() - eighth)
    }

    /// The four closed-form levels `(eps0, eps1, eps2, eps3)`.
    pub fn single_well_levels(&self) -> [T; 4] {
        let xi = self.xi;
        let two = T::lit(2.0);
        let five = T::lit(5.0);
        let (r_even, r_odd) = self.radicals();
        let s = self.energy_scale();
        [
            s * (-xi - five - two * r_even),
            s * (xi - five - two * r_odd),
            s * (-xi - five + two * r_even),
            s * (xi - five + two * r_odd),
        ]
    }

    /// `(sqrt(4 - 2 xi + xi^2), sqrt(4 + 2 xi + xi^2))`.
    fn radicals(&self) -> (T, T) {
        let xi = self.xi;
        let four = T::lit(4.0);
        let two = T::lit(2.0);
        (
            (four - two * xi + xi * xi).sqrt(),
            (four + two * xi + xi * xi).sqrt(),
        )
    }

    /// Abscissa of the right-hand minimum, from `cosh 2x_s = 8/xi`.
    pub fn well_minimum(&self) -> Result<T> {
        let arg = T::lit(8.0) / self.xi;
        if arg <= T::one() {
            return Err(Error::InvalidParams(format!(
                "xi = {} >= 8 leaves a single well (cosh 2x_s = 8/xi has no positive root)",
                self.xi
            )));
        }
        Ok(arg.acosh() / T::lit(2.0))
    }

    /// Unnormalized shape of the even ground state.
    pub fn raw_phi0(&self, x: T) -> T {
        let xi = self.xi;
        let Some(envelope) = self.envelope(x) else {
            return T::zero();
        };
        let (r_even, _) = self.radicals();
        let b = T::lit(4.0) - xi + T::lit(2.0) * r_even;
        envelope * (T::lit(3.0) * xi * x.cosh() + b * (T::lit(3.0) * x).cosh())
    }

    /// Unnormalized shape of the odd first excited state.
    pub fn raw_phi1(&self, x: T) -> T {
        let xi = self.xi;
        let Some(envelope) = self.envelope(x) else {
            return T::zero();
        };
        let (_, r_odd) = self.radicals();
        let b = T::lit(4.0) + xi + T::lit(2.0) * r_odd;
        envelope * (T::lit(3.0) * xi * x.sinh() + b * (T::lit(3.0) * x).sinh())
    }

    // exp(-xi cosh 2x / 4); None once the exponent passes -700, where the
    // eigenfunction underflows to zero regardless of the cosh prefactors.
    fn envelope(&self, x: T) -> Option<T> {
        let arg = self.xi * (T::lit(2.0) * x).cosh() / T::lit(4.0);
        if !(arg <= T::lit(700.0)) {
            return None;
        }
        Some((-arg).exp())
    }
}

/// Which of the two retained single-well states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    /// Even ground state, energy `eps0`.
    Ground,
    /// Odd first excited state, energy `eps1`.
    Excited,
}

impl Level {
    pub fn index(self) -> usize {
        match self {
            Level::Ground => 0,
            Level::Excited => 1,
        }
    }

    pub fn from_index(n: usize) -> Option<Self> {
        match n {
            0 => Some(Level::Ground),
            1 => Some(Level::Excited),
            _ => None,
        }
    }
}

/// Normalized single-well basis `{phi0, phi1}` plus the analytic geometry of
/// the well. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleWellBasis<T> {
    pub params: PotentialParams<T>,
    /// `eps0 < eps1 < eps2 < eps3`.
    pub levels: [T; 4],
    /// Normalization constants `(A0, A1)`.
    pub norms: [T; 2],
    /// Right-hand minimum `x_s`; the left one sits at `-x_s`.
    pub well_minimum: T,
    pub v_min: T,
    /// `V(0)`, the barrier top.
    pub v_barrier: T,
}

impl<T: Real> SingleWellBasis<T> {
    /// Builds the basis, normalizing both eigenfunctions by quadrature.
    pub fn build(params: PotentialParams<T>, quad: &QuadratureSpec<T>) -> Result<Self> {
        let well_minimum = params.well_minimum()?;
        let n0 = integrate(|x| params.raw_phi0(x).powi(2), quad)?;
        let n1 = integrate(|x| params.raw_phi1(x).powi(2), quad)?;
        Ok(Self {
            params,
            levels: params.single_well_levels(),
            norms: [n0.sqrt().recip(), n1.sqrt().recip()],
            well_minimum,
            v_min: params.potential(well_minimum),
            v_barrier: params.potential(T::zero()),
        })
    }

    pub fn phi0(&self, x: T) -> T {
        self.norms[0] * self.params.raw_phi0(x)
    }

    pub fn phi1(&self, x: T) -> T {
        self.norms[1] * self.params.raw_phi1(x)
    }

    pub fn eigenfunction(&self, level: Level, x: T) -> T {
        match level {
            Level::Ground => self.phi0(x),
            Level::Excited => self.phi1(x),
        }
    }

    /// `[phi0(x), phi1(x)]`.
    pub fn pair(&self, x: T) -> [T; 2] {
        [self.phi0(x), self.phi1(x)]
    }

    pub fn level(&self, level: Level) -> T {
        self.levels[level.index()]
    }

    /// Gram matrix of `{phi0, phi1}` under the given quadrature.
    pub fn gram(&self, quad: &QuadratureSpec<T>) -> Result<[[T; 2]; 2]> {
        let g00 = integrate(|x| self.phi0(x).powi(2), quad)?;
        let g11 = integrate(|x| self.phi1(x).powi(2), quad)?;
        let g01 = integrate(|x| self.phi0(x) * self.phi1(x), quad)?;
        Ok([[g00, g01], [g01, g11]])
    }
}
