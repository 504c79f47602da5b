//! Experiment descriptions, figure presets and CSV output for the CLI.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::analytic;
use crate::error::Error;
use crate::montecarlo::MonteCarlo;
use crate::params::SystemParams;

/// CSV header shared by every row.
pub const CSV_HEADER: &str = "snr_db,mode,L,n_t,kappa,omega_i,gcq_order,value,ci_low,ci_high,trials,seed";

/// Trials per point when a preset is selected.
pub const PRESET_TRIALS: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Spec(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 1 for specification errors, 2 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io(_) => 2,
            _ => 1,
        }
    }
}

fn spec_err(msg: impl Into<String>) -> RunError {
    RunError::Spec(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Mc,
    Analytic,
    Asymptotic,
    All,
}

impl Mode {
    fn runs_mc(self) -> bool {
        matches!(self, Mode::Mc | Mode::All)
    }

    fn runs_analytic(self) -> bool {
        matches!(self, Mode::Analytic | Mode::All)
    }

    fn runs_asymptotic(self) -> bool {
        matches!(self, Mode::Asymptotic | Mode::All)
    }
}

impl FromStr for Mode {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, RunError> {
        match s.trim() {
            "mc" => Ok(Mode::Mc),
            "analytic" => Ok(Mode::Analytic),
            "asymptotic" => Ok(Mode::Asymptotic),
            "all" => Ok(Mode::All),
            other => Err(spec_err(format!(
                "unknown mode '{other}' (expected mc, analytic, asymptotic or all)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    GcqConvergence,
    GcqAccuracy,
    CltValidation,
    LiSweep,
    SicSweep,
}

impl FromStr for Preset {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, RunError> {
        match s.trim() {
            "gcq-convergence" => Ok(Preset::GcqConvergence),
            "gcq-accuracy" => Ok(Preset::GcqAccuracy),
            "clt-validation" => Ok(Preset::CltValidation),
            "li-sweep" => Ok(Preset::LiSweep),
            "sic-sweep" => Ok(Preset::SicSweep),
            other => Err(spec_err(format!("unknown preset '{other}'"))),
        }
    }
}

/// Parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Kappa,
    OmegaI,
    Elements,
    TxAntennas,
    GcqOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub values: Vec<f64>,
}

impl Sweep {
    fn apply(&self, base: &SystemParams, value: f64) -> Result<SystemParams, RunError> {
        let mut p = base.clone();
        let count = |v: f64| -> Result<usize, RunError> {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(spec_err(format!("sweep value {v} must be a non-negative integer")))
            }
        };
        match self.var {
            SweepVar::Kappa => p.kappa = value,
            SweepVar::OmegaI => p.omega_i = value,
            SweepVar::Elements => p.elements = count(value)?,
            SweepVar::TxAntennas => p.tx_antennas = count(value)?,
            SweepVar::GcqOrder => p.gcq_order = count(value)?,
        }
        Ok(p.validate()?)
    }
}

impl FromStr for Sweep {
    type Err = RunError;

    /// `name=v1,v2,...` or `name=start:step:stop`.
    fn from_str(s: &str) -> Result<Self, RunError> {
        let (name, list) = s
            .split_once('=')
            .ok_or_else(|| spec_err(format!("sweep '{s}' must look like var=list")))?;
        let var = match name.trim() {
            "kappa" => SweepVar::Kappa,
            "omega" | "omega_i" => SweepVar::OmegaI,
            "L" => SweepVar::Elements,
            "nt" | "n_t" => SweepVar::TxAntennas,
            "G" | "gcq_order" | "gcq-order" => SweepVar::GcqOrder,
            other => return Err(spec_err(format!("cannot sweep '{other}'"))),
        };
        Ok(Sweep {
            var,
            values: parse_grid(list)?,
        })
    }
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, RunError> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| spec_err(format!("bad number '{t}' in '{s}'")))
    };
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step == 0.0 || (stop - start) / step < 0.0 {
                return Err(spec_err(format!("range '{s}' does not reach its stop value")));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            if n > 100_000 {
                return Err(spec_err(format!("range '{s}' has too many points")));
            }
            (0..=n).map(|k| start + k as f64 * step).collect()
        }
        [list] => list
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(num)
            .collect::<Result<Vec<_>, _>>()?,
        _ => return Err(spec_err(format!("cannot parse grid '{s}'"))),
    };
    if grid.is_empty() {
        return Err(spec_err("grid is empty"));
    }
    Ok(grid)
}

/// Everything one CLI invocation computes.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub mode: Mode,
    pub preset: Option<Preset>,
    pub params: SystemParams,
    pub snr_grid: Vec<f64>,
    pub sweep: Option<Sweep>,
    pub output_path: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            mode: Mode::Analytic,
            preset: None,
            params: SystemParams::default(),
            snr_grid: (0..=10).map(|k| 5.0 * k as f64).collect(),
            sweep: None,
            output_path: None,
            workers: None,
        }
    }
}

impl ExperimentSpec {
    /// Figure defaults for a preset; every field stays overridable.
    pub fn preset(preset: Preset) -> Self {
        let base = SystemParams {
            trials: PRESET_TRIALS,
            ..SystemParams::default()
        };
        let grid = |s: &str| parse_grid(s).expect("preset grid");
        let sweep = |var, s: &str| Some(Sweep { var, values: grid(s) });
        let (mode, params, snr_grid, sweep) = match preset {
            Preset::GcqConvergence => (
                Mode::Analytic,
                SystemParams { elements: 64, ..base },
                grid("0:5:50"),
                sweep(SweepVar::GcqOrder, "1:1:10"),
            ),
            Preset::GcqAccuracy => (
                Mode::Analytic,
                SystemParams { elements: 64, gcq_order: 5, ..base },
                grid("0:5:50"),
                None,
            ),
            // every L in the sweep is error-free above about -10 dB
            Preset::CltValidation => (
                Mode::All,
                base,
                grid("-40:2:-10"),
                sweep(SweepVar::Elements, "36,64,100,196,256"),
            ),
            Preset::LiSweep => (
                Mode::All,
                SystemParams { elements: 16, kappa: 0.1, ..base },
                grid("0:5:50"),
                sweep(SweepVar::OmegaI, "0,0.1,0.3"),
            ),
            Preset::SicSweep => (
                Mode::All,
                SystemParams { elements: 16, omega_i: 0.1, ..base },
                grid("0:5:50"),
                sweep(SweepVar::Kappa, "0,0.05,0.1,0.3"),
            ),
        };
        Self {
            mode,
            preset: Some(preset),
            params,
            snr_grid,
            sweep,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.snr_grid.is_empty() {
            return Err(spec_err("SNR grid is empty"));
        }
        for snr in &self.snr_grid {
            self.params.with_snr_db(*snr).validate()?;
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(spec_err("sweep value list is empty"));
            }
            for v in &sweep.values {
                sweep.apply(&self.params, *v)?;
            }
        }
        Ok(())
    }
}

/// Optional overrides from a config file or the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub preset: Option<Preset>,
    pub elements: Option<usize>,
    pub tx_antennas: Option<usize>,
    pub kappa: Option<f64>,
    pub omega_i: Option<f64>,
    pub snr_grid: Option<Vec<f64>>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub gcq_order: Option<usize>,
    pub sweep: Option<Sweep>,
    pub output_path: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Overrides {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn from_config(text: &str) -> Result<Self, RunError> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| spec_err(format!("config line {}: expected key=value", lineno + 1)))?;
            o.set(key.trim(), value.trim())
                .map_err(|e| spec_err(format!("config line {}: {e}", lineno + 1)))?;
        }
        Ok(o)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), RunError> {
        fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, RunError> {
            v.parse()
                .map_err(|_| spec_err(format!("invalid value '{v}' for {key}")))
        }
        match key {
            "mode" => self.mode = Some(value.parse()?),
            "preset" => self.preset = Some(value.parse()?),
            "L" => self.elements = Some(parse(key, value)?),
            "n_t" | "nt" => self.tx_antennas = Some(parse(key, value)?),
            "kappa" => self.kappa = Some(parse(key, value)?),
            "omega_i" | "omega" => self.omega_i = Some(parse(key, value)?),
            "snr" | "snr_db" => self.snr_grid = Some(parse_grid(value)?),
            "trials" => self.trials = Some(parse(key, value)?),
            "seed" => self.seed = Some(parse(key, value)?),
            "gcq_order" | "gcq-order" => self.gcq_order = Some(parse(key, value)?),
            "sweep" => self.sweep = Some(value.parse()?),
            "out" => self.output_path = Some(PathBuf::from(value)),
            "threads" => self.workers = Some(parse(key, value)?),
            other => return Err(spec_err(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// `self` wins wherever both are set.
    pub fn or(self, lower: Overrides) -> Overrides {
        Overrides {
            mode: self.mode.or(lower.mode),
            preset: self.preset.or(lower.preset),
            elements: self.elements.or(lower.elements),
            tx_antennas: self.tx_antennas.or(lower.tx_antennas),
            kappa: self.kappa.or(lower.kappa),
            omega_i: self.omega_i.or(lower.omega_i),
            snr_grid: self.snr_grid.or(lower.snr_grid),
            trials: self.trials.or(lower.trials),
            seed: self.seed.or(lower.seed),
            gcq_order: self.gcq_order.or(lower.gcq_order),
            sweep: self.sweep.or(lower.sweep),
            output_path: self.output_path.or(lower.output_path),
            workers: self.workers.or(lower.workers),
        }
    }

    /// Preset defaults (or plain defaults) with these overrides applied.
    pub fn into_spec(self) -> Result<ExperimentSpec, RunError> {
        let mut spec = match self.preset {
            Some(p) => ExperimentSpec::preset(p),
            None => ExperimentSpec::default(),
        };
        let p = &mut spec.params;
        if let Some(v) = self.elements {
            p.elements = v;
        }
        if let Some(v) = self.tx_antennas {
            p.tx_antennas = v;
        }
        if let Some(v) = self.kappa {
            p.kappa = v;
        }
        if let Some(v) = self.omega_i {
            p.omega_i = v;
        }
        if let Some(v) = self.trials {
            p.trials = v;
        }
        if let Some(v) = self.seed {
            p.seed = v;
        }
        if let Some(v) = self.gcq_order {
            p.gcq_order = v;
        }
        if let Some(m) = self.mode {
            spec.mode = m;
        }
        if let Some(g) = self.snr_grid {
            spec.snr_grid = g;
        }
        if self.sweep.is_some() {
            spec.sweep = self.sweep;
        }
        spec.output_path = self.output_path;
        spec.workers = self.workers;
        spec.validate()?;
        Ok(spec)
    }
}

/// Row label in the `mode` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Mc,
    Analytic,
    Asymptotic,
    Reference,
}

impl RowKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RowKind::Mc => "mc",
            RowKind::Analytic => "analytic",
            RowKind::Asymptotic => "asymptotic",
            RowKind::Reference => "reference",
        }
    }
}

/// One CSV line.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub snr_db: f64,
    pub kind: RowKind,
    pub params: SystemParams,
    pub value: f64,
    pub ci: Option<(f64, f64)>,
}

/// Scientific notation with 17 significant digits.
pub fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

impl Row {
    pub fn to_csv(&self) -> String {
        let p = &self.params;
        let (lo, hi) = match self.ci {
            Some((lo, hi)) => (fmt_value(lo), fmt_value(hi)),
            None => (String::new(), String::new()),
        };
        let trials = if self.kind == RowKind::Mc { p.trials } else { 0 };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.snr_db,
            self.kind.as_str(),
            p.elements,
            p.tx_antennas,
            p.kappa,
            p.omega_i,
            p.gcq_order,
            fmt_value(self.value),
            lo,
            hi,
            trials,
            p.seed
        )
    }
}

/// Reference integral tolerance used for `reference` rows.
pub const REFERENCE_TOLERANCE: f64 = 1e-9;

/// Computes every row of `spec`, in sweep-value then SNR order.
pub fn run(spec: &ExperimentSpec) -> Result<Vec<Row>, RunError> {
    spec.validate()?;
    let engine = MonteCarlo {
        workers: spec.workers,
    };
    let bases = match &spec.sweep {
        Some(sweep) => sweep
            .values
            .iter()
            .map(|v| sweep.apply(&spec.params, *v))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![spec.params.clone().validate()?],
    };
    let with_reference = spec.preset == Some(Preset::GcqAccuracy);
    let mut rows = Vec::new();
    for base in bases {
        let mc = if spec.mode.runs_mc() {
            Some(engine.run_sweep(&base, &spec.snr_grid)?)
        } else {
            None
        };
        for (i, snr) in spec.snr_grid.iter().enumerate() {
            let p = base.with_snr_db(*snr);
            if let Some(mc) = &mc {
                let pt = &mc[i];
                rows.push(Row {
                    snr_db: *snr,
                    kind: RowKind::Mc,
                    params: p.clone(),
                    value: pt.ber,
                    ci: Some((pt.ci_low, pt.ci_high)),
                });
            }
            if spec.mode.runs_analytic() {
                rows.push(Row {
                    snr_db: *snr,
                    kind: RowKind::Analytic,
                    params: p.clone(),
                    value: analytic::abep(&p)?,
                    ci: None,
                });
                if with_reference {
                    rows.push(Row {
                        snr_db: *snr,
                        kind: RowKind::Reference,
                        params: p.clone(),
                        value: analytic::abep_reference(&p, REFERENCE_TOLERANCE)?,
                        ci: None,
                    });
                }
            }
            if spec.mode.runs_asymptotic() {
                let value = match analytic::abep_asymptotic(&p) {
                    Ok(v) => v,
                    // no interference floor: the limit is exactly zero
                    Err(Error::NoInterferenceFloor) => 0.0,
                    Err(e) => return Err(e.into()),
                };
                rows.push(Row {
                    snr_db: *snr,
                    kind: RowKind::Asymptotic,
                    params: p,
                    value,
                    ci: None,
                });
            }
        }
    }
    Ok(rows)
}

/// Renders rows with the header.
pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.to_csv());
    }
    out
}

/// Writes rows to `path`, or stdout when `path` is `None`.
pub fn emit_csv(rows: &[Row], path: Option<&std::path::Path>) -> Result<(), RunError> {
    let text = render_csv(rows);
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
