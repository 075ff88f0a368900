//! Batch drivers shared by the command-line runner and the regression
//! suite: the preset table, g-sweeps, time traces and density snapshots.

use rayon::prelude::*;

use crate::coupled::{CoupledSpectrum, CoupledSystem};
use crate::dynamics::{
    amplitude, correlation, density, marginal_x1, mean_x1, right_well_peak, timing, DensityGrid,
    Grid, Label, Preset, TimingOptions, TimingResult, WavepacketSpec,
};
use crate::entanglement::{concurrence, speed_bound, SpeedBound};
use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;
use crate::scalar::Real;
use crate::well::PotentialParams;

/// A coupled system together with the right-well peak `x_m`.
#[derive(Debug, Clone)]
pub struct Model<T> {
    system: CoupledSystem<T>,
    peak: T,
}

impl<T: Real> Model<T> {
    pub fn new(params: PotentialParams<T>) -> Result<Self> {
        Self::with_quadrature(params, &QuadratureSpec::default())
    }

    pub fn with_quadrature(params: PotentialParams<T>, quad: &QuadratureSpec<T>) -> Result<Self> {
        let system = CoupledSystem::new(params, quad)?;
        let peak = right_well_peak(system.basis())?;
        Ok(Self { system, peak })
    }

    pub fn system(&self) -> &CoupledSystem<T> {
        &self.system
    }

    pub fn spectrum(&self, g: T) -> CoupledSpectrum<T> {
        self.system.spectrum(g)
    }

    /// `x_m`, the maximum of `|(phi0 + phi1)/sqrt2|^2`.
    pub fn right_peak(&self) -> T {
        self.peak
    }
}

/// Everything computed for one wavepacket at one coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary<T> {
    pub label: Label,
    pub g: T,
    pub timing: TimingResult<T>,
    pub bound: SpeedBound<T>,
    pub concurrence: T,
}

pub fn summarize<T: Real>(
    model: &Model<T>,
    spec: &WavepacketSpec<T>,
    g: T,
    opts: &TimingOptions<T>,
) -> Result<Summary<T>> {
    let spectrum = model.spectrum(g);
    Ok(Summary {
        label: spec.label(),
        g,
        timing: timing(spec, &spectrum, opts)?,
        bound: speed_bound(spec, &spectrum),
        concurrence: concurrence(spec, spectrum.theta),
    })
}

/// Coupling used for each preset in the reference table.
pub fn table2_coupling<T: Real>(preset: Preset) -> T {
    match preset {
        Preset::A | Preset::B => T::zero(),
        Preset::C | Preset::D => T::lit(0.1),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table2Row<T> {
    pub summary: Summary<T>,
    pub note: Option<&'static str>,
}

/// Printed energy spread for packet C in the reference table; two equally
/// weighted levels give `dE = E` instead.
pub const TABLE2_C_SPREAD_MISPRINT: f64 = 0.1213;

pub fn table2<T: Real>(model: &Model<T>, opts: &TimingOptions<T>) -> Result<Vec<Table2Row<T>>> {
    Preset::ALL
        .iter()
        .map(|&p| {
            let summary = summarize(model, &WavepacketSpec::preset(p), table2_coupling(p), opts)?;
            let note = (p == Preset::C).then_some(
                "published dE = 0.1213 is a misprint; a two-level packet with equal weights has dE = E",
            );
            Ok(Table2Row { summary, note })
        })
        .collect()
}

/// `steps` evenly spaced couplings from `start` to `stop` inclusive.
pub fn g_range<T: Real>(start: T, stop: T, steps: usize) -> Result<Vec<T>> {
    if steps < 2 {
        return Err(Error::InvalidParams(format!(
            "sweep needs at least 2 steps, got {steps}"
        )));
    }
    if !(start.is_finite() && stop.is_finite() && start < stop) {
        return Err(Error::InvalidParams(format!(
            "sweep needs start < stop, got {start}:{stop}"
        )));
    }
    let h = (stop - start) / T::count(steps - 1);
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                stop
            } else {
                start + T::count(i) * h
            }
        })
        .collect())
}

/// Summaries for every `(packet, g)` pair, ordered by packet then `g`.
pub fn sweep<T: Real>(
    model: &Model<T>,
    packets: &[WavepacketSpec<T>],
    gs: &[T],
    opts: &TimingOptions<T>,
) -> Result<Vec<Summary<T>>> {
    let jobs: Vec<(usize, usize)> = (0..packets.len())
        .flat_map(|i| (0..gs.len()).map(move |j| (i, j)))
        .collect();
    jobs.par_iter()
        .map(|&(i, j)| summarize(model, &packets[i], gs[j], opts))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint<T> {
    pub t: T,
    pub correlation: T,
    /// `|Psi(x_m, x_m, t)|^2`.
    pub peak_density: T,
}

/// `steps + 1` evenly spaced times in `[0, t_max]`.
pub fn time_axis<T: Real>(t_max: T, steps: usize) -> Result<Vec<T>> {
    if steps == 0 || !(t_max.is_finite() && t_max > T::zero()) {
        return Err(Error::InvalidScan(format!(
            "time axis needs t_max > 0 and steps >= 1, got {t_max} and {steps}"
        )));
    }
    let h = t_max / T::count(steps);
    Ok((0..=steps).map(|i| T::count(i) * h).collect())
}

pub fn trace<T: Real>(
    model: &Model<T>,
    spec: &WavepacketSpec<T>,
    g: T,
    times: &[T],
) -> Vec<TracePoint<T>> {
    let spectrum = model.spectrum(g);
    let xm = model.right_peak();
    times
        .iter()
        .map(|&t| TracePoint {
            t,
            correlation: correlation(spec, &spectrum, t),
            peak_density: amplitude(spec, &spectrum, model.system().basis(), t, xm, xm).norm_sqr(),
        })
        .collect()
}

/// Default snapshot times as fractions of the tunneling period.
pub const SNAPSHOT_FRACTIONS: [f64; 6] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];

pub fn density_snapshots<T: Real>(
    model: &Model<T>,
    spec: &WavepacketSpec<T>,
    g: T,
    times: &[T],
    grid: &Grid<T>,
) -> Result<Vec<DensityGrid<T>>> {
    let spectrum = model.spectrum(g);
    times
        .iter()
        .map(|&t| density(spec, &spectrum, model.system().basis(), t, grid))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginalSlice<T> {
    pub t: T,
    pub xs: Vec<T>,
    pub rho: Vec<T>,
    pub mean_x1: T,
}

pub fn marginal_slices<T: Real>(
    model: &Model<T>,
    spec: &WavepacketSpec<T>,
    g: T,
    times: &[T],
    grid: &Grid<T>,
) -> Result<Vec<MarginalSlice<T>>> {
    let grid = Grid::new(grid.n, grid.lo, grid.hi)?;
    let spectrum = model.spectrum(g);
    let basis = model.system().basis();
    let xs = grid.nodes();
    Ok(times
        .iter()
        .map(|&t| MarginalSlice {
            t,
            rho: xs
                .iter()
                .map(|&x| marginal_x1(spec, &spectrum, basis, t, x))
                .collect(),
            xs: xs.clone(),
            mean_x1: mean_x1(spec, &spectrum, t),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn model() -> Model<f64> {
        Model::new(PotentialParams::default()).unwrap()
    }

    #[test]
    fn g_range_endpoints() {
        let g = g_range(0.0, 0.2, 21).unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[20], 0.2);
        assert_abs_diff_eq!(g[10], 0.1, epsilon = 1e-15);
        assert!(g_range(0.0, 0.2, 1).is_err());
        assert!(g_range(0.2, 0.0, 5).is_err());
    }

    #[test]
    fn sweep_is_ordered_and_matches_table() {
        let m = model();
        let opts = TimingOptions::default();
        let packets = [
            WavepacketSpec::preset(Preset::A),
            WavepacketSpec::preset(Preset::B),
        ];
        let gs = g_range(0.0, 0.2, 5).unwrap();
        let rows = sweep(&m, &packets, &gs, &opts).unwrap();
        assert_eq!(rows.len(), 10);
        for (k, r) in rows.iter().enumerate() {
            assert_eq!(r.label, packets[k / 5].label());
            assert_eq!(r.g, gs[k % 5]);
        }
        let table = table2(&m, &opts).unwrap();
        assert_eq!(rows[0], table[0].summary);
        assert_eq!(rows[5], table[1].summary);
        let tb: Vec<f64> = rows[5..]
            .iter()
            .map(|r| r.timing.period_time().unwrap())
            .collect();
        assert!(tb.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn trace_of_c_has_minimum_at_half_period() {
        let m = model();
        let spec = WavepacketSpec::preset(Preset::C);
        let times = time_axis(240.0, 2400).unwrap();
        let tr = trace(&m, &spec, 0.1, &times);
        let min = tr.iter().fold(
            tr[0],
            |a, &p| if p.correlation < a.correlation { p } else { a },
        );
        assert_abs_diff_eq!(min.t, 120.32, epsilon = 0.1);
        assert_abs_diff_eq!(tr[0].correlation, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn snapshots_and_marginals() {
        let m = model();
        let spec = WavepacketSpec::preset(Preset::C);
        let grid = Grid::new(61, -3.0, 3.0).unwrap();
        let snaps = density_snapshots(&m, &spec, 0.1, &[0.0, 60.0], &grid).unwrap();
        assert_eq!(snaps.len(), 2);
        let slices = marginal_slices(&m, &spec, 0.1, &[0.0, 60.0], &grid).unwrap();
        assert_eq!(slices[1].rho.len(), 61);
        assert!(time_axis(0.0, 10).is_err());
    }
}
