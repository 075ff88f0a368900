//! Run configuration: command-line flags merged over an optional TOML file.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use num_complex::Complex;
use razavy_dw::dynamics::{Grid, Preset, TimingOptions, WavepacketSpec};
use razavy_dw::scenarios::g_range;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    Timing,
    Trace,
    Density,
    Marginal,
    Bounds,
    Concurrence,
    Table2,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Options shared by every command. Each may also be given in the file
/// named by `--config`; flags take precedence.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Preset wavepacket (A, B, C or D).
    #[arg(long)]
    pub preset: Option<String>,
    /// Custom coefficient a0 as "re,im" (or "re").
    #[arg(long, allow_hyphen_values = true)]
    pub a0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a3: Option<String>,
    /// Coupling strength.
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    /// Coupling sweep as start:stop:steps.
    #[arg(long)]
    pub g_sweep: Option<String>,
    /// Potential shape parameter, 0 < xi < 8.
    #[arg(long)]
    pub xi: Option<f64>,
    /// Spatial grid as n,lo,hi.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// End of the time axis (trace, marginal) or timing search horizon.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of time steps on [0, t_max].
    #[arg(long)]
    pub t_steps: Option<usize>,
    /// Density snapshot times as comma-separated fractions of T.
    #[arg(long)]
    pub t_frac: Option<String>,
    #[arg(long)]
    pub rec_threshold: Option<f64>,
    #[arg(long)]
    pub orth_threshold: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with any of the options above.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! merge_fields {
    ($flags:expr, $file:expr, $($f:ident),*) => {
        Options { $($f: $flags.$f.or($file.$f),)* config: $flags.config }
    };
}

impl Options {
    /// Fills unset flags from the config file, if any.
    pub fn merged(self) -> Result<Options> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load_file(&path)?;
        Ok(merge_fields!(
            self,
            file,
            preset,
            a0,
            a1,
            a2,
            a3,
            g,
            g_sweep,
            xi,
            grid,
            t_max,
            t_steps,
            t_frac,
            rec_threshold,
            orth_threshold,
            format,
            out
        ))
    }
}

fn load_file(path: &Path) -> Result<Options> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
}

/// Fully validated configuration; echoed in JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub preset: Option<String>,
    pub coefficients: Option<[[f64; 2]; 4]>,
    pub g: Option<f64>,
    pub g_sweep: Option<Sweep>,
    pub xi: f64,
    pub grid: GridSpec,
    pub t_max: Option<f64>,
    pub t_steps: Option<usize>,
    pub t_frac: Vec<f64>,
    pub rec_threshold: f64,
    pub orth_threshold: f64,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub packets: Vec<WavepacketSpec<f64>>,
}

pub const DEFAULT_G: f64 = 0.1;
pub const DEFAULT_SWEEP: Sweep = Sweep {
    start: 0.0,
    stop: 0.2,
    steps: 21,
};
pub const DEFAULT_T_FRAC: [f64; 6] = razavy_dw::scenarios::SNAPSHOT_FRACTIONS;

impl RunConfig {
    pub fn resolve(command: Command, opts: Options) -> Result<Self> {
        let opts = opts.merged()?;
        if opts.g.is_some() && opts.g_sweep.is_some() {
            bail!("--g and --g-sweep are mutually exclusive");
        }
        let g_sweep = opts.g_sweep.as_deref().map(parse_sweep).transpose()?;
        let grid = match opts.grid.as_deref() {
            Some(s) => parse_grid(s)?,
            None => {
                let d = Grid::<f64>::default();
                GridSpec {
                    n: d.n,
                    lo: d.lo,
                    hi: d.hi,
                }
            }
        };
        Grid::new(grid.n, grid.lo, grid.hi)?;
        let t_frac = match opts.t_frac.as_deref() {
            Some(s) => parse_list(s)?,
            None => DEFAULT_T_FRAC.to_vec(),
        };
        if t_frac.iter().any(|f| !(f.is_finite() && *f >= 0.0)) {
            bail!("--t-frac values must be finite and non-negative");
        }
        let defaults = TimingOptions::<f64>::default();
        let (coefficients, packets) = packets(&opts)?;
        let cfg = RunConfig {
            command,
            preset: opts.preset.clone(),
            coefficients,
            g: opts.g,
            g_sweep,
            xi: opts.xi.unwrap_or(1.0),
            grid,
            t_max: opts.t_max,
            t_steps: opts.t_steps,
            t_frac,
            rec_threshold: opts.rec_threshold.unwrap_or(defaults.recurrence_threshold),
            orth_threshold: opts
                .orth_threshold
                .unwrap_or(defaults.orthogonality_threshold),
            format: opts.format.unwrap_or_default(),
            out: opts.out,
            packets,
        };
        cfg.timing_options()?;
        if let Some(t) = cfg.t_max {
            if !(t.is_finite() && t > 0.0) {
                bail!("--t-max must be positive, got {t}");
            }
        }
        if cfg.t_steps == Some(0) {
            bail!("--t-steps must be at least 1");
        }
        Ok(cfg)
    }

    pub fn timing_options(&self) -> Result<TimingOptions<f64>> {
        let opts = TimingOptions {
            recurrence_threshold: self.rec_threshold,
            orthogonality_threshold: self.orth_threshold,
            t_max: self.t_max,
            ..TimingOptions::default()
        };
        let ok = |v: f64| v > 0.0 && v < 1.0;
        if !ok(opts.recurrence_threshold) || !ok(opts.orthogonality_threshold) {
            bail!("thresholds must lie in (0, 1)");
        }
        if opts.orthogonality_threshold >= opts.recurrence_threshold {
            bail!("--orth-threshold must be below --rec-threshold");
        }
        Ok(opts)
    }

    pub fn grid(&self) -> Grid<f64> {
        Grid {
            n: self.grid.n,
            lo: self.grid.lo,
            hi: self.grid.hi,
        }
    }

    /// Couplings to evaluate: the sweep, the single `--g`, or `default`.
    pub fn couplings(&self, default: f64) -> Result<Vec<f64>> {
        match (self.g_sweep, self.g) {
            (Some(s), _) => Ok(g_range(s.start, s.stop, s.steps)?),
            (None, Some(g)) => Ok(vec![g]),
            (None, None) => Ok(vec![default]),
        }
    }

    /// The single coupling for commands that do not sweep.
    pub fn single_coupling(&self) -> Result<f64> {
        if self.g_sweep.is_some() {
            bail!("{:?} takes --g, not --g-sweep", self.command);
        }
        Ok(self.g.unwrap_or(DEFAULT_G))
    }

    /// The single wavepacket for commands that need exactly one.
    pub fn single_packet(&self) -> Result<&WavepacketSpec<f64>> {
        match self.packets.as_slice() {
            [p] => Ok(p),
            _ => bail!("this command needs --preset or --a0..--a3"),
        }
    }
}

type Packets = (Option<[[f64; 2]; 4]>, Vec<WavepacketSpec<f64>>);

fn packets(opts: &Options) -> Result<Packets> {
    let raw = [&opts.a0, &opts.a1, &opts.a2, &opts.a3];
    let custom = raw.iter().any(|a| a.is_some());
    match (&opts.preset, custom) {
        (Some(_), true) => bail!("--preset and --a0..--a3 are mutually exclusive"),
        (Some(p), false) => {
            let p: Preset = p.parse()?;
            Ok((None, vec![WavepacketSpec::preset(p)]))
        }
        (None, true) => {
            let mut c = [[0.0; 2]; 4];
            for (k, a) in raw.iter().enumerate() {
                if let Some(s) = a {
                    c[k] = parse_complex(s).with_context(|| format!("--a{k}"))?;
                }
            }
            let spec = WavepacketSpec::new(c.map(|[re, im]| Complex::new(re, im)))?;
            Ok((Some(c), vec![spec]))
        }
        (None, false) => Ok((
            None,
            Preset::ALL
                .iter()
                .map(|&p| WavepacketSpec::preset(p))
                .collect(),
        )),
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| anyhow!("not a number: {s:?}"))?;
    if !v.is_finite() {
        bail!("not a finite number: {s:?}");
    }
    Ok(v)
}

pub fn parse_complex(s: &str) -> Result<[f64; 2]> {
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [re] => Ok([parse_f64(re)?, 0.0]),
        [re, im] => Ok([parse_f64(re)?, parse_f64(im)?]),
        _ => bail!("expected re,im, got {s:?}"),
    }
}

pub fn parse_sweep(s: &str) -> Result<Sweep> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, steps] = parts.as_slice() else {
        bail!("--g-sweep expects start:stop:steps, got {s:?}");
    };
    let steps: usize = steps
        .trim()
        .parse()
        .map_err(|_| anyhow!("bad sweep step count {steps:?}"))?;
    let sweep = Sweep {
        start: parse_f64(start)?,
        stop: parse_f64(stop)?,
        steps,
    };
    g_range(sweep.start, sweep.stop, sweep.steps)?;
    Ok(sweep)
}

pub fn parse_grid(s: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = s.split(',').collect();
    let [n, lo, hi] = parts.as_slice() else {
        bail!("--grid expects n,lo,hi, got {s:?}");
    };
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| anyhow!("bad grid size {n:?}"))?;
    Ok(GridSpec {
        n,
        lo: parse_f64(lo)?,
        hi: parse_f64(hi)?,
    })
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_complex("0.5,-0.25").unwrap(), [0.5, -0.25]);
        assert_eq!(parse_complex(" 1 ").unwrap(), [1.0, 0.0]);
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("nan").is_err());
        assert_eq!(
            parse_sweep("0:0.2:21").unwrap(),
            Sweep {
                start: 0.0,
                stop: 0.2,
                steps: 21
            }
        );
        assert!(parse_sweep("0:0.2:1").is_err());
        assert!(parse_sweep("0.2:0:5").is_err());
        assert!(parse_sweep("0:1").is_err());
        assert_eq!(
            parse_grid("11,-2,2").unwrap(),
            GridSpec {
                n: 11,
                lo: -2.0,
                hi: 2.0
            }
        );
    }

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "g = 0.05\npreset = \"B\"\nformat = \"json\"\n").unwrap();
        let opts = Options {
            g: Some(0.2),
            config: Some(path),
            ..Options::default()
        };
        let cfg = RunConfig::resolve(Command::Timing, opts).unwrap();
        assert_eq!(cfg.g, Some(0.2));
        assert_eq!(cfg.preset.as_deref(), Some("B"));
        assert_eq!(cfg.format, Format::Json);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = |o: Options| RunConfig::resolve(Command::Timing, o).is_err();
        assert!(bad(Options {
            a0: Some("1".into()),
            a1: Some("1".into()),
            ..Options::default()
        }));
        assert!(bad(Options {
            preset: Some("E".into()),
            ..Options::default()
        }));
        assert!(bad(Options {
            preset: Some("A".into()),
            a0: Some("1".into()),
            ..Options::default()
        }));
        assert!(bad(Options {
            g: Some(0.1),
            g_sweep: Some("0:1:3".into()),
            ..Options::default()
        }));
        assert!(bad(Options {
            grid: Some("1,0,1".into()),
            ..Options::default()
        }));
        assert!(bad(Options {
            orth_threshold: Some(0.9999),
            ..Options::default()
        }));
        assert!(bad(Options {
            t_steps: Some(0),
            ..Options::default()
        }));
    }

    #[test]
    fn unknown_file_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "gee = 0.05\n").unwrap();
        let opts = Options {
            config: Some(path),
            ..Options::default()
        };
        assert!(RunConfig::resolve(Command::Timing, opts).is_err());
    }
}
