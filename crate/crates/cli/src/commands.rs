use anyhow::{bail, Context, Result};
use razavy_dw::dynamics::{timing, WavepacketSpec};
use razavy_dw::entanglement::speed_bound;
use razavy_dw::scenarios::{
    density_snapshots, marginal_slices, sweep, table2, time_axis, trace, Model, Summary,
};
use razavy_dw::{concurrence, Params};

use crate::config::{Command, RunConfig, DEFAULT_SWEEP};
use crate::output::{Cell, Table};

pub fn run(cfg: &RunConfig) -> Result<Table> {
    let params = Params::new(1.0, 1.0, cfg.xi)?;
    let model = Model::new(params).context("building the single-well basis")?;
    match cfg.command {
        Command::Spectrum => spectrum(&model, cfg),
        Command::Timing => timing_table(&model, cfg),
        Command::Trace => trace_table(&model, cfg),
        Command::Density => density_table(&model, cfg),
        Command::Marginal => marginal_table(&model, cfg),
        Command::Bounds => bounds(&model, cfg),
        Command::Concurrence => concurrence_table(&model, cfg),
        Command::Table2 => table2_table(&model, cfg),
        Command::Sweep => sweep_table(&model, cfg),
    }
}

fn spectrum(model: &Model<f64>, cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(&["g", "gamma", "delta", "theta", "E0", "E1", "E2", "E3"]);
    for g in cfg.couplings(crate::config::DEFAULT_G)? {
        let s = model.spectrum(g);
        let mut row: Vec<Cell> = vec![g.into(), s.gamma.into(), s.delta.into(), s.theta.into()];
        row.extend(s.energies.iter().map(|&e| Cell::from(e)));
        t.push(row);
    }
    Ok(t)
}

const TIMING_COLUMNS: [&str; 9] = [
    "wavepacket",
    "g",
    "T",
    "gamma_at_T",
    "T_reached",
    "tau",
    "gamma_at_tau",
    "tau_reached",
    "method",
];

fn timing_table(model: &Model<f64>, cfg: &RunConfig) -> Result<Table> {
    let opts = cfg.timing_options()?;
    let mut t = Table::new(&TIMING_COLUMNS);
    for spec in &cfg.packets {
        for g in cfg.couplings(crate::config::DEFAULT_G)? {
            let r = timing(spec, &model.spectrum(g), &opts)?;
            let ev = |e: Option<razavy_dw::TimingEvent<f64>>| -> [Cell; 3] {
                match e {
                    Some(e) => [e.time.into(), e.gamma.into(), e.reached.into()],
                    None => [Cell::Missing, Cell::Missing, Cell::Missing],
                }
            };
            let mut row: Vec<Cell> = vec![spec.label().to_string().into(), g.into()];
            row.extend(ev(r.period));
            row.extend(ev(r.orthogonality));
            row.push(r.method.to_string().into());
            t.push(row);
        }
    }
    Ok(t)
}

/// Tunneling period of the packet, used as the default time scale.
fn period_of(
    model: &Model<f64>,
    cfg: &RunConfig,
    spec: &WavepacketSpec<f64>,
    g: f64,
) -> Result<f64> {
    let opts = cfg.timing_options()?;
    match timing(spec, &model.spectrum(g), &opts)?.period_time() {
        Some(p) if p > 0.0 => Ok(p),
        _ => bail!("wavepacket has no tunneling period at g = {g}; pass --t-max"),
    }
}

fn times(
    model: &Model<f64>,
    cfg: &RunConfig,
    spec: &WavepacketSpec<f64>,
    g: f64,
    steps: usize,
) -> Result<Vec<f64>> {
    let t_max = match cfg.t_max {
        Some(t) => t,
        None => period_of(model, cfg, spec, g)?,
    };
    Ok(time_axis(t_max, cfg.t_steps.unwrap_or(steps))?)
}

fn trace_table(model: &Model<f64>, cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.single_packet()?;
    let g = cfg.single_coupling()?;
    let ts = times(model, cfg, spec, g, 1000)?;
    let mut t = Table::new(&["t", "gamma", "density_at_xm"]);
    for p in trace(model, spec, g, &ts) {
        t.push(vec![
            p.t.into(),
            p.correlation.into(),
            p.peak_density.into(),
        ]);
    }
    Ok(t)
}

fn density_table(model: &Model<f64>, cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.single_packet()?;
    let g = cfg.single_coupling()?;
    let period = period_of(model, cfg, spec, g)?;
    let ts: Vec<f64> = cfg.t_frac.iter().map(|f| f * period).collect();
    let snaps = density_snapshots(model, spec, g, &ts, &cfg.grid())?;
    let mut t = Table::new(&["t_frac", "t", "x1", "x2", "density"]);
    for (frac, d) in cfg.t_frac.iter().zip(&snaps) {
        for (i, &x1) in d.xs.iter().enumerate() {
            for (j, &x2) in d.xs.iter().enumerate() {
                t.push(vec![
                    (*frac).into(),
                    d.t.into(),
                    x1.into(),
                    x2.into(),
                    d.get(i, j).into(),
                ]);
            }
        }
    }
    Ok(t)
}

fn marginal_table(model: &Model<f64>, cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.single_packet()?;
    let g = cfg.single_coupling()?;
    let ts = times(model, cfg, spec, g, 20)?;
    let mut t = Table::new(&["t", "x1", "rho", "mean_x1"]);
    for s in marginal_slices(model, spec, g, &ts, &cfg.grid())? {
        for (&x, &rho) in s.xs.iter().zip(&s.rho) {
            t.push(vec![s.t.into(), x.into(), rho.into(), s.mean_x1.into()]);
        }
    }
    Ok(t)
}

fn bounds(model: &Model<f64>, cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(&["wavepacket", "g", "E", "dE", "tau_min", "binding"]);
    for spec in &cfg.packets {
        for g in cfg.couplings(crate::config::DEFAULT_G)? {
            let b = speed_bound(spec, &model.spectrum(g));
            t.push(vec![
                spec.label().to_string().into(),
                g.into(),
                b.mean_energy.into(),
                b.energy_spread.into(),
                b.tau_min.into(),
                b.binding.to_string().into(),
            ]);
        }
    }
    Ok(t)
}

fn concurrence_table(model: &Model<f64>, cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(&["wavepacket", "g", "theta", "C"]);
    for spec in &cfg.packets {
        for g in cfg.couplings(crate::config::DEFAULT_G)? {
            let theta = model.spectrum(g).theta;
            t.push(vec![
                spec.label().to_string().into(),
                g.into(),
                theta.into(),
                concurrence(spec, theta).into(),
            ]);
        }
    }
    Ok(t)
}

const SUMMARY_COLUMNS: [&str; 11] = [
    "wavepacket",
    "g",
    "T",
    "tau",
    "E",
    "dE",
    "tau_min",
    "C",
    "T_reached",
    "tau_reached",
    "note",
];

fn summary_row(s: &Summary<f64>, note: &str) -> Vec<Cell> {
    vec![
        s.label.to_string().into(),
        s.g.into(),
        s.timing.period_time().into(),
        s.timing.orthogonality_time().into(),
        s.bound.mean_energy.into(),
        s.bound.energy_spread.into(),
        s.bound.tau_min.into(),
        s.concurrence.into(),
        s.timing.period.is_some_and(|e| e.reached).into(),
        s.timing.orthogonality.is_some_and(|e| e.reached).into(),
        note.into(),
    ]
}

fn table2_table(model: &Model<f64>, cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(&SUMMARY_COLUMNS);
    for row in table2(model, &cfg.timing_options()?)? {
        t.push(summary_row(&row.summary, row.note.unwrap_or("")));
    }
    Ok(t)
}

fn sweep_table(model: &Model<f64>, cfg: &RunConfig) -> Result<Table> {
    let gs = match (cfg.g_sweep, cfg.g) {
        (None, None) => {
            let d = DEFAULT_SWEEP;
            razavy_dw::scenarios::g_range(d.start, d.stop, d.steps)?
        }
        _ => cfg.couplings(crate::config::DEFAULT_G)?,
    };
    let mut t = Table::new(&SUMMARY_COLUMNS);
    for s in sweep(model, &cfg.packets, &gs, &cfg.timing_options()?)? {
        t.push(summary_row(&s, ""));
    }
    Ok(t)
}
