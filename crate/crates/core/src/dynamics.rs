//! Wavepacket evolution in the four coupled eigenstates: correlation
//! function, tunneling period, orthogonality time, and position-space
//! densities.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;

use crate::coupled::CoupledSpectrum;
use crate::entanglement::ProductBasisState;
use crate::error::{Error, Result};
use crate::numerics::{ExtremumKind, LocalExtrema, ScanSpec};
use crate::scalar::Real;
use crate::well::SingleWellBasis;

/// The four wavepackets with fixed expansion coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    /// `(1/2, 1/sqrt2, 0, 1/2)`: the right-right product state at `g = 0`.
    A,
    /// `(1/sqrt2, 0, 0, 1/sqrt2)`: maximally entangled at `g = 0`.
    B,
    /// `(1/sqrt2, 1/sqrt2, 0, 0)`.
    C,
    /// `(1/2, 1/2, 1/2, 1/2)`.
    D,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::A, Preset::B, Preset::C, Preset::D];

    pub fn coefficients<T: Real>(self) -> [T; 4] {
        let h = T::lit(0.5);
        let r = T::FRAC_1_SQRT_2();
        let z = T::zero();
        match self {
            Preset::A => [h, r, z, h],
            Preset::B => [r, z, z, r],
            Preset::C => [r, r, z, z],
            Preset::D => [h, h, h, h],
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Preset::A => "A",
            Preset::B => "B",
            Preset::C => "C",
            Preset::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Preset::A),
            "B" | "b" => Ok(Preset::B),
            "C" | "c" => Ok(Preset::C),
            "D" | "d" => Ok(Preset::D),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Preset(Preset),
    Custom,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Preset(p) => p.fmt(f),
            Label::Custom => f.write_str("custom"),
        }
    }
}

/// Expansion coefficients `a0..a3` over the coupled eigenstates `Phi0..Phi3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavepacketSpec<T> {
    coefficients: [Complex<T>; 4],
    label: Label,
}

impl<T: Real> WavepacketSpec<T> {
    /// Tolerance on `sum |a|^2 = 1`.
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(coefficients: [Complex<T>; 4]) -> Result<Self> {
        let norm: T = coefficients.iter().map(|a| a.norm_sqr()).sum();
        let tol = T::lit(Self::NORM_TOL).max(T::epsilon() * T::lit(16.0));
        if !((norm - T::one()).abs() <= tol) {
            return Err(Error::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self {
            coefficients,
            label: Label::Custom,
        })
    }

    pub fn preset(preset: Preset) -> Self {
        Self {
            coefficients: preset
                .coefficients::<T>()
                .map(|a| Complex::new(a, T::zero())),
            label: Label::Preset(preset),
        }
    }

    pub fn coefficients(&self) -> &[Complex<T>; 4] {
        &self.coefficients
    }

    pub fn label(&self) -> Label {
        self.label
    }

    /// `|a_nu|^2`.
    pub fn weights(&self) -> [T; 4] {
        self.coefficients.map(|a| a.norm_sqr())
    }

    /// Multiplies every coefficient by `exp(i phase)`.
    pub fn with_global_phase(mut self, phase: T) -> Self {
        let u = Complex::from_polar(T::one(), phase);
        self.coefficients = self.coefficients.map(|a| a * u);
        self
    }

    /// The coefficients if all imaginary parts vanish.
    pub fn real_coefficients(&self) -> Option<[T; 4]> {
        self.coefficients
            .iter()
            .all(|a| a.im == T::zero())
            .then(|| self.coefficients.map(|a| a.re))
    }

    /// `a_nu exp(-i E_nu t / hbar)`.
    pub fn evolved(&self, spectrum: &CoupledSpectrum<T>, t: T) -> [Complex<T>; 4] {
        let mut out = self.coefficients;
        for (a, e) in out.iter_mut().zip(spectrum.energies) {
            *a = *a * Complex::from_polar(T::one(), -e * t / spectrum.hbar);
        }
        out
    }

    /// Product-basis coefficients `c_kl(t)` of the evolved state.
    pub fn product_state(&self, spectrum: &CoupledSpectrum<T>, t: T) -> ProductBasisState<T> {
        ProductBasisState::from_eigen_coefficients(&self.evolved(spectrum, t), spectrum.theta)
    }
}

/// `Gamma(t) = | sum_nu |a_nu|^2 exp(-i Omega_nu t) |`.
pub fn correlation<T: Real>(spec: &WavepacketSpec<T>, spectrum: &CoupledSpectrum<T>, t: T) -> T {
    let omega = spectrum.frequencies();
    spec.weights()
        .iter()
        .zip(omega)
        .map(|(&w, om)| Complex::from_polar(w, -om * t))
        .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
        .norm()
}

/// Distinct frequencies carrying nonzero weight, with their summed weights,
/// ascending. Degenerate levels (e.g. `E1 = E2` at `g = 0`) are merged.
pub fn frequency_groups<T: Real>(
    spec: &WavepacketSpec<T>,
    spectrum: &CoupledSpectrum<T>,
) -> Vec<(T, T)> {
    let omega = spectrum.frequencies();
    let scale = omega.iter().fold(T::zero(), |m, &o| m.max(o.abs()));
    let tol = scale * T::lit(1e-12);
    let mut groups: Vec<(T, T)> = Vec::with_capacity(4);
    for (w, om) in spec.weights().into_iter().zip(omega) {
        if w == T::zero() {
            continue;
        }
        match groups.iter_mut().find(|g| (g.0 - om).abs() <= tol) {
            Some(g) => g.1 = g.1 + w,
            None => groups.push((om, w)),
        }
    }
    groups.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    groups
}

fn grouped_correlation<T: Real>(groups: &[(T, T)], t: T) -> T {
    groups
        .iter()
        .map(|&(om, w)| Complex::from_polar(w, -om * t))
        .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
        .norm()
}

/// Thresholds and scan settings for [`timing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingOptions<T> {
    /// A local maximum of `Gamma` at or above this counts as a return to 1.
    pub recurrence_threshold: T,
    /// A local minimum of `Gamma` at or below this counts as orthogonality.
    pub orthogonality_threshold: T,
    pub samples_per_fastest_period: usize,
    pub refine_tol: T,
    /// Scan horizon; defaults to 20 slow periods.
    pub t_max: Option<T>,
}

impl<T: Real> Default for TimingOptions<T> {
    fn default() -> Self {
        Self {
            recurrence_threshold: T::one() - T::lit(1e-3),
            orthogonality_threshold: T::lit(1e-6),
            samples_per_fastest_period: ScanSpec::<T>::DEFAULT_SAMPLES,
            refine_tol: T::lit(1e-10),
            t_max: None,
        }
    }
}

impl<T: Real> TimingOptions<T> {
    /// Looser orthogonality threshold for custom wavepackets.
    pub const LOOSE_ORTHOGONALITY: f64 = 1e-3;

    pub fn loose() -> Self {
        Self {
            orthogonality_threshold: T::lit(Self::LOOSE_ORTHOGONALITY),
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let in_unit = |v: T| v.is_finite() && v > T::zero() && v < T::one();
        if !in_unit(self.recurrence_threshold) || !in_unit(self.orthogonality_threshold) {
            return Err(Error::InvalidScan("thresholds must lie in (0, 1)".into()));
        }
        if self.orthogonality_threshold >= self.recurrence_threshold {
            return Err(Error::InvalidScan(
                "orthogonality threshold must be below the recurrence threshold".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimingMethod {
    /// Two distinct frequencies: closed form `T = 2 pi / Omega`, `tau = T / 2`.
    AnalyticTwoState,
    /// Sampled scan of `Gamma` with refined extrema.
    NumericScan,
    /// A single frequency: `Gamma` is identically 1.
    Stationary,
}

impl fmt::Display for TimingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimingMethod::AnalyticTwoState => "analytic-two-state",
            TimingMethod::NumericScan => "numeric-scan",
            TimingMethod::Stationary => "stationary",
        })
    }
}

/// A located extremum of `Gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingEvent<T> {
    pub time: T,
    pub gamma: T,
    /// Whether `gamma` satisfies the threshold. When `false` the event is the
    /// closest approach inside the search window.
    pub reached: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingResult<T> {
    /// Tunneling period `T`.
    pub period: Option<TimingEvent<T>>,
    /// Orthogonality time `tau`.
    pub orthogonality: Option<TimingEvent<T>>,
    pub method: TimingMethod,
    /// `2 pi / Omega_slow`, the slowest weighted oscillation.
    pub slow_period: Option<T>,
}

impl<T: Real> TimingResult<T> {
    pub fn period_time(&self) -> Option<T> {
        self.period.map(|e| e.time)
    }

    pub fn orthogonality_time(&self) -> Option<T> {
        self.orthogonality.map(|e| e.time)
    }
}

/// Tunneling period and orthogonality time of a wavepacket.
///
/// Two distinct frequencies use the closed form. Otherwise `Gamma` is
/// scanned with a step set by the fastest weighted frequency:
///
/// * `tau` is the first local minimum in `(0, P]` with `Gamma` at or below
///   the orthogonality threshold, where `P = 2 pi / Omega_slow`; if none
///   qualifies, the deepest local minimum in that window (`reached = false`).
/// * `T` is the first local maximum in `(0, 3P/2]` with `Gamma` at or above
///   the recurrence threshold; if none qualifies, the highest local maximum
///   in `[P/2, 3P/2]` (`reached = false`).
///
/// Both windows are clipped to `t_max`. A single-frequency packet returns
/// `T = 0` and no `tau`.
pub fn timing<T: Real>(
    spec: &WavepacketSpec<T>,
    spectrum: &CoupledSpectrum<T>,
    opts: &TimingOptions<T>,
) -> Result<TimingResult<T>> {
    opts.validate()?;
    let groups = frequency_groups(spec, spectrum);
    match groups.len() {
        0 | 1 => Ok(stationary()),
        2 => {
            let (w0, w1) = (groups[0].1, groups[1].1);
            let omega = groups[1].0 - groups[0].0;
            let t_max = opts.t_max.unwrap_or_else(T::infinity);
            let period = T::lit(2.0) * T::PI() / omega;
            let half = period / T::lit(2.0);
            let gamma_tau = (w0 - w1).abs();
            Ok(TimingResult {
                period: (period <= t_max).then_some(TimingEvent {
                    time: period,
                    gamma: T::one(),
                    reached: true,
                }),
                orthogonality: (half <= t_max).then_some(TimingEvent {
                    time: half,
                    gamma: gamma_tau,
                    reached: gamma_tau <= opts.orthogonality_threshold,
                }),
                method: TimingMethod::AnalyticTwoState,
                slow_period: Some(period),
            })
        }
        _ => numeric_timing(spec, spectrum, opts),
    }
}

fn stationary<T: Real>() -> TimingResult<T> {
    log::warn!("wavepacket has a single frequency component; Gamma is identically 1");
    TimingResult {
        period: Some(TimingEvent {
            time: T::zero(),
            gamma: T::one(),
            reached: true,
        }),
        orthogonality: None,
        method: TimingMethod::Stationary,
        slow_period: None,
    }
}

/// [`timing`] without the two-frequency shortcut.
pub fn numeric_timing<T: Real>(
    spec: &WavepacketSpec<T>,
    spectrum: &CoupledSpectrum<T>,
    opts: &TimingOptions<T>,
) -> Result<TimingResult<T>> {
    opts.validate()?;
    let groups = frequency_groups(spec, spectrum);
    if groups.len() < 2 {
        return Ok(stationary());
    }
    let two_pi = T::lit(2.0) * T::PI();
    let slow = groups
        .windows(2)
        .map(|w| w[1].0 - w[0].0)
        .fold(T::infinity(), T::min);
    let fast = groups[groups.len() - 1].0 - groups[0].0;
    let slow_period = two_pi / slow;
    let t_max = opts.t_max.unwrap_or(T::lit(20.0) * slow_period);
    let scan = ScanSpec::with_options(
        t_max,
        two_pi / fast,
        opts.samples_per_fastest_period,
        opts.refine_tol,
    )?;
    let f = |t: T| grouped_correlation(&groups, t);

    let tau_end = slow_period.min(t_max);
    let mut deepest: Option<(T, T)> = None;
    let mut orthogonality = None;
    for (t, v) in LocalExtrema::new(
        f,
        ExtremumKind::Min,
        T::zero(),
        tau_end,
        scan.step(),
        scan.refine_tol,
    )? {
        if v <= opts.orthogonality_threshold {
            orthogonality = Some(TimingEvent {
                time: t,
                gamma: v,
                reached: true,
            });
            break;
        }
        if deepest.is_none_or(|d| v < d.1) {
            deepest = Some((t, v));
        }
    }
    let orthogonality = orthogonality.or_else(|| {
        deepest.map(|(t, v)| TimingEvent {
            time: t,
            gamma: v,
            reached: false,
        })
    });

    let t_end = (T::lit(1.5) * slow_period).min(t_max);
    let half = slow_period / T::lit(2.0);
    let mut highest: Option<(T, T)> = None;
    let mut period = None;
    for (t, v) in LocalExtrema::new(
        f,
        ExtremumKind::Max,
        T::zero(),
        t_end,
        scan.step(),
        scan.refine_tol,
    )? {
        if v >= opts.recurrence_threshold {
            period = Some(TimingEvent {
                time: t,
                gamma: v,
                reached: true,
            });
            break;
        }
        if t >= half && highest.is_none_or(|h| v > h.1) {
            highest = Some((t, v));
        }
    }
    let period = period.or_else(|| {
        highest.map(|(t, v)| TimingEvent {
            time: t,
            gamma: v,
            reached: false,
        })
    });

    Ok(TimingResult {
        period,
        orthogonality,
        method: TimingMethod::NumericScan,
        slow_period: Some(slow_period),
    })
}

/// Square lattice `n x n` over `[lo, hi]^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    pub n: usize,
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Default for Grid<T> {
    fn default() -> Self {
        Self {
            n: 201,
            lo: T::lit(-3.0),
            hi: T::lit(3.0),
        }
    }
}

impl<T: Real> Grid<T> {
    /// Largest coordinate magnitude for which the eigenfunctions are used.
    pub const MAX_EXTENT: f64 = 6.0;

    pub fn new(n: usize, lo: T, hi: T) -> Result<Self> {
        if n < 2 {
            return Err(Error::GridInvalid(format!(
                "need at least 2 points, got {n}"
            )));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::GridInvalid(format!(
                "bounds must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        let limit = T::lit(Self::MAX_EXTENT);
        if lo < -limit || hi > limit {
            return Err(Error::GridInvalid(format!(
                "bounds must lie within [-{limit}, {limit}]"
            )));
        }
        Ok(Self { n, lo, hi })
    }

    pub fn spacing(&self) -> T {
        (self.hi - self.lo) / T::count(self.n - 1)
    }

    pub fn nodes(&self) -> Vec<T> {
        let h = self.spacing();
        (0..self.n).map(|i| self.lo + T::count(i) * h).collect()
    }
}

/// `|Psi(x1, x2, t)|^2` sampled on a [`Grid`]; row index is `x1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid<T> {
    pub t: T,
    pub xs: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Real> DensityGrid<T> {
    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.n() + j]
    }

    /// `(x1, x2, density)` at the largest sample.
    pub fn argmax(&self) -> (T, T, T) {
        let n = self.n();
        let (k, v) =
            self.values
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |best, (k, &v)| {
                    if v > best.1 {
                        (k, v)
                    } else {
                        best
                    }
                });
        (self.xs[k / n], self.xs[k % n], v)
    }

    /// 2-D trapezoid rule over the grid.
    pub fn integral(&self) -> T {
        let n = self.n();
        let h = self.xs[1] - self.xs[0];
        let w = |i: usize| {
            if i == 0 || i == n - 1 {
                T::lit(0.5)
            } else {
                T::one()
            }
        };
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + w(i) * w(j) * self.get(i, j);
            }
        }
        acc * h * h
    }
}

/// `Psi(x1, x2, t)`.
pub fn amplitude<T: Real>(
    spec: &WavepacketSpec<T>,
    spectrum: &CoupledSpectrum<T>,
    basis: &SingleWellBasis<T>,
    t: T,
    x1: T,
    x2: T,
) -> Complex<T> {
    let c = spec.product_state(spectrum, t);
    product_amplitude(&c, basis.pair(x1), basis.pair(x2))
}

fn product_amplitude<T: Real>(c: &ProductBasisState<T>, p1: [T; 2], p2: [T; 2]) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (k, &a) in p1.iter().enumerate() {
        for (l, &b) in p2.iter().enumerate() {
            acc = acc + c.get(k, l) * (a * b);
        }
    }
    acc
}

/// Density snapshot on `grid`. Rows are evaluated in parallel; each cell is
/// computed independently, so the result does not depend on scheduling.
pub fn density<T: Real>(
    spec: &WavepacketSpec<T>,
    spectrum: &CoupledSpectrum<T>,
    basis: &SingleWellBasis<T>,
    t: T,
    grid: &Grid<T>,
) -> Result<DensityGrid<T>> {
    let grid = Grid::new(grid.n, grid.lo, grid.hi)?;
    let xs = grid.nodes();
    let phis: Vec<[T; 2]> = xs.iter().map(|&x| basis.pair(x)).collect();
    let c = spec.product_state(spectrum, t);
    let values: Vec<T> = phis
        .par_iter()
        .flat_map_iter(|&p1| {
            phis.iter()
                .map(move |&p2| product_amplitude(&c, p1, p2).norm_sqr())
        })
        .collect();
    Ok(DensityGrid { t, xs, values })
}

/// `rho(x1, t) = integral |Psi(x1, x2, t)|^2 dx2`, in closed form through the
/// orthonormality of `{phi0, phi1}`.
pub fn marginal_x1<T: Real>(
    spec: &WavepacketSpec<T>,
    spectrum: &CoupledSpectrum<T>,
    basis: &SingleWellBasis<T>,
    t: T,
    x1: T,
) -> T {
    let c = spec.product_state(spectrum, t);
    let [p0, p1] = basis.pair(x1);
    (0..2)
        .map(|l| (c.get(0, l) * p0 + c.get(1, l) * p1).norm_sqr())
        .sum()
}

/// `<x1>(t) = 2 gamma Re sum_l conj(c_0l) c_1l`, using `<phi_k|x|phi_k> = 0`.
pub fn mean_x1<T: Real>(spec: &WavepacketSpec<T>, spectrum: &CoupledSpectrum<T>, t: T) -> T {
    let c = spec.product_state(spectrum, t);
    let cross: T = (0..2).map(|l| (c.get(0, l).conj() * c.get(1, l)).re).sum();
    T::lit(2.0) * spectrum.gamma * cross
}

/// Peak position `x_m` of `|(phi0 + phi1)/sqrt2|^2`, the right-localized
/// single-well packet.
pub fn right_well_peak<T: Real>(basis: &SingleWellBasis<T>) -> Result<T> {
    let f = |x: T| {
        let [a, b] = basis.pair(x);
        (a + b) * (a + b) / T::lit(2.0)
    };
    let end = T::lit(2.0) * basis.well_minimum;
    LocalExtrema::new(
        f,
        ExtremumKind::Max,
        T::zero(),
        end,
        T::lit(0.01),
        T::lit(1e-12),
    )?
    .fold(None, |best: Option<(T, T)>, p| match best {
        Some(b) if b.1 >= p.1 => Some(b),
        _ => Some(p),
    })
    .map(|p| p.0)
    .ok_or_else(|| Error::InvalidParams("no density peak in the right well".into()))
}
