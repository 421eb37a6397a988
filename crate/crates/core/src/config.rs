//! Run configuration: a TOML file with top-level run keys and one section
//! per module.
//!
//! ```toml
//! model = "ode"          # or "pde"; optional when `preset` is given
//! preset = "fig3"        # fig2 | fig3 | fig4 | fig5
//! t_end = 504.0          # h
//! seed = 1
//! output_dir = "out/fig3"
//!
//! [params]               # any ParameterSet field
//! chi_c = 5e-4
//!
//! [stimulus]             # S(t) = offset + amplitude * cos(t / period)
//! offset = 0.5
//!
//! [ode]
//! rtol = 1e-6
//!
//! [renewal]
//! enabled = true
//! period = 72.0
//! mode = "reset-to-initial"   # or "add-initial"
//! value = 1e-3
//!
//! [pde]
//! dx = 50.0
//! dt = 0.1
//! scheme = "imex"             # or "split-implicit"
//! taxis = "identity"          # off | identity | full
//! snapshot_times = [2.0]
//! probe = [2500.0, 2500.0]
//!
//! [tensor]
//! source = "table1"           # table1 | moment | acg | file | planar
//! ```
//!
//! Unknown keys are rejected. Every resolved value carries a [`Provenance`],
//! and [`RunConfig::echo`] renders the resolved configuration in the same
//! grammar, so an echo file is itself a complete config.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix3};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::fiber::{
    acg_moment, build_tensors, d2_over_d1, restrict_2d, table1_moment, DiffusionTensors,
    OrientationMatrix,
};
use crate::model::{ParameterSet, StimulusSignal};
use crate::ode::{step_count, IntegratorOptions, RenewalMode, RenewalSchedule, Tolerances};
use crate::pde::{ScaffoldGrid, TaxisMode, TimeScheme};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SEEDSIM_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "seedsim-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ode,
    Pde,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Ode => "ode",
            ModelKind::Pde => "pde",
        }
    }
}

/// The four reproduction experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Well-mixed model, 144 h, no renewal.
    Fig2,
    /// Well-mixed model, 504 h, medium renewed every 72 h.
    Fig3,
    /// Spatial model up to the 2 h snapshot.
    Fig4,
    /// Spatial model, 144 h midpoint series.
    Fig5,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        }
    }

    pub fn model(self) -> ModelKind {
        match self {
            Preset::Fig2 | Preset::Fig3 => ModelKind::Ode,
            Preset::Fig4 | Preset::Fig5 => ModelKind::Pde,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter {
                key: "preset".into(),
                reason: format!("unknown preset `{s}` (expected fig2, fig3, fig4 or fig5)"),
            })
    }
}

/// Where an effective value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Published value or experiment setting.
    PaperDefault,
    /// Set in the config file.
    User,
    /// Not published; chosen by this toolkit.
    Assumed,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::PaperDefault => "paper-default",
            Provenance::User => "user",
            Provenance::Assumed => "assumed",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Origin of the cell diffusion tensors.
#[derive(Debug, Clone, PartialEq)]
pub enum TensorSource {
    /// Published moment block.
    Table1,
    /// Literal 3x3 moment matrix.
    Moment(Matrix3<f64>),
    /// ACG parameter matrix, given inline or read from `file`.
    Acg {
        a: OrientationMatrix,
        file: Option<PathBuf>,
    },
    /// Literal planar hMSC tensor in um²/h; the chondrocyte tensor follows
    /// from the turning-rate/speed ratio.
    Planar(Matrix2<f64>),
}

impl TensorSource {
    pub fn name(&self) -> &'static str {
        match self {
            TensorSource::Table1 => "table1",
            TensorSource::Moment(_) => "moment",
            TensorSource::Acg { file: None, .. } => "acg",
            TensorSource::Acg { file: Some(_), .. } => "file",
            TensorSource::Planar(_) => "planar",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSettings {
    pub rtol: f64,
    pub atol: f64,
    pub sample_interval: f64,
}

impl OdeSettings {
    pub fn integrator_options(&self) -> IntegratorOptions {
        IntegratorOptions {
            tol: Tolerances {
                rel: self.rtol,
                abs: self.atol,
            },
            sample_interval: self.sample_interval,
            ..IntegratorOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeSettings {
    pub dx: f64,
    pub dt: f64,
    pub scheme: TimeScheme,
    pub taxis: TaxisMode,
    pub reactions: bool,
    /// Multiplies both cell diffusion tensors.
    pub diffusion_scale: f64,
    pub snapshot_times: Vec<f64>,
    pub probe: (f64, f64),
}

/// Fully resolved and validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub preset: Option<Preset>,
    pub t_end: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub params: ParameterSet,
    pub stimulus: StimulusSignal,
    pub ode: OdeSettings,
    pub renewal: Option<RenewalSchedule>,
    /// Renewal settings kept even when disabled, for the echo.
    renewal_settings: RenewalSchedule,
    pub pde: PdeSettings,
    pub tensor: TensorSource,
    provenance: BTreeMap<String, Provenance>,
}

// Raw file layout. Every field is optional so presence marks user values.

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: Option<ModelKind>,
    preset: Option<String>,
    t_end: Option<f64>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
    params: Option<Table>,
    stimulus: Option<RawStimulus>,
    ode: Option<RawOde>,
    renewal: Option<RawRenewal>,
    pde: Option<RawPde>,
    tensor: Option<RawTensor>,
    /// Informational block written into manifests; ignored on load.
    #[allow(dead_code)]
    derived: Option<Table>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStimulus {
    offset: Option<f64>,
    amplitude: Option<f64>,
    period: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOde {
    rtol: Option<f64>,
    atol: Option<f64>,
    sample_interval: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRenewal {
    enabled: Option<bool>,
    period: Option<f64>,
    mode: Option<RenewalMode>,
    value: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPde {
    dx: Option<f64>,
    dt: Option<f64>,
    scheme: Option<TimeScheme>,
    taxis: Option<TaxisMode>,
    reactions: Option<bool>,
    diffusion_scale: Option<f64>,
    snapshot_times: Option<Vec<f64>>,
    probe: Option<[f64; 2]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTensor {
    source: Option<String>,
    moment: Option<[[f64; 3]; 3]>,
    a: Option<[[f64; 3]; 3]>,
    file: Option<PathBuf>,
    d1: Option<[[f64; 2]; 2]>,
}

/// Reads, resolves and validates a config file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_config(&text, path, base)
}

/// Parses config text; `origin` names the source in error messages and
/// relative tensor files are resolved against `base_dir`.
pub fn parse_config(text: &str, origin: &Path, base_dir: &Path) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| parse_error(origin, text, &e))?;
    resolve(raw, base_dir)
}

/// Resolved configuration of a named preset.
pub fn preset_config(preset: Preset) -> Result<RunConfig> {
    resolve(
        RawConfig {
            preset: Some(preset.name().to_string()),
            ..RawConfig::default()
        },
        Path::new(""),
    )
}

fn parse_error(origin: &Path, text: &str, e: &toml::de::Error) -> Error {
    let message = match e.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            format!("line {line}, column {column}: {}", e.message())
        }
        None => e.message().to_string(),
    };
    Error::Parse {
        path: origin.to_path_buf(),
        message,
    }
}

fn invalid(key: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Records provenance while picking user values over defaults.
struct Resolver {
    provenance: BTreeMap<String, Provenance>,
}

impl Resolver {
    fn pick<T>(&mut self, key: &str, user: Option<T>, default: T, prov: Provenance) -> T {
        match user {
            Some(v) => {
                self.provenance.insert(key.into(), Provenance::User);
                v
            }
            None => {
                self.provenance.insert(key.into(), prov);
                default
            }
        }
    }
}

fn paper_if(cond: bool) -> Provenance {
    if cond {
        Provenance::PaperDefault
    } else {
        Provenance::Assumed
    }
}

fn resolve(raw: RawConfig, base_dir: &Path) -> Result<RunConfig> {
    let mut r = Resolver {
        provenance: BTreeMap::new(),
    };
    let preset = raw.preset.as_deref().map(Preset::from_str).transpose()?;
    if preset.is_some() {
        r.provenance.insert("preset".into(), Provenance::User);
    }

    let model = match (raw.model, preset) {
        (Some(m), Some(p)) if m != p.model() => {
            return Err(invalid(
                "model",
                format!("preset {} is a {} run", p.name(), p.model().name()),
            ))
        }
        (Some(m), _) => r.pick("model", Some(m), m, Provenance::User),
        (None, Some(p)) => r.pick("model", None, p.model(), Provenance::PaperDefault),
        (None, None) => {
            return Err(invalid(
                "model",
                "missing required key (set `model` or `preset`)",
            ))
        }
    };
    if model == ModelKind::Ode && (raw.pde.is_some() || raw.tensor.is_some()) {
        let key = if raw.pde.is_some() { "pde" } else { "tensor" };
        return Err(invalid(key, "section only applies to model = \"pde\""));
    }
    if model == ModelKind::Pde && raw.ode.is_some() {
        return Err(invalid("ode", "section only applies to model = \"ode\""));
    }

    let (t_end_default, t_end_paper) = match preset {
        Some(Preset::Fig3) => (504.0, true),
        Some(Preset::Fig4) => (2.0, true),
        Some(Preset::Fig5) => (144.0, false),
        Some(Preset::Fig2) => (144.0, true),
        None => (144.0, model == ModelKind::Ode),
    };
    let t_end = r.pick("t_end", raw.t_end, t_end_default, paper_if(t_end_paper));
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(invalid(
            "t_end",
            format!("must be a positive number of hours, got {t_end}"),
        ));
    }
    let seed = r.pick("seed", raw.seed, 1, Provenance::Assumed);
    let default_out = std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let default_out = match preset {
        Some(p) if raw.output_dir.is_none() => default_out.join(p.name()),
        _ => default_out,
    };
    let output_dir = r.pick(
        "output_dir",
        raw.output_dir,
        default_out,
        Provenance::Assumed,
    );

    let params = resolve_params(&mut r, raw.params.unwrap_or_default())?;

    let st = raw.stimulus.unwrap_or_default();
    let sd = StimulusSignal::default();
    let stimulus = StimulusSignal {
        offset: r.pick(
            "stimulus.offset",
            st.offset,
            sd.offset,
            Provenance::PaperDefault,
        ),
        amplitude: r.pick(
            "stimulus.amplitude",
            st.amplitude,
            sd.amplitude,
            Provenance::PaperDefault,
        ),
        period: r.pick(
            "stimulus.period",
            st.period,
            sd.period,
            Provenance::PaperDefault,
        ),
    };
    for (key, v) in [
        ("stimulus.offset", stimulus.offset),
        ("stimulus.amplitude", stimulus.amplitude),
    ] {
        if !v.is_finite() {
            return Err(invalid(key, "must be finite"));
        }
    }
    if !(stimulus.period > 0.0) || !stimulus.period.is_finite() {
        return Err(invalid("stimulus.period", "must be positive"));
    }

    let od = IntegratorOptions::default();
    let ro = raw.ode.unwrap_or_default();
    let ode = OdeSettings {
        rtol: r.pick("ode.rtol", ro.rtol, od.tol.rel, Provenance::Assumed),
        atol: r.pick("ode.atol", ro.atol, od.tol.abs, Provenance::Assumed),
        sample_interval: r.pick(
            "ode.sample_interval",
            ro.sample_interval,
            od.sample_interval,
            Provenance::Assumed,
        ),
    };
    for (key, v) in [
        ("ode.rtol", ode.rtol),
        ("ode.atol", ode.atol),
        ("ode.sample_interval", ode.sample_interval),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(invalid(key, format!("must be positive, got {v}")));
        }
    }

    let rr = raw.renewal.unwrap_or_default();
    let rd = RenewalSchedule::every_three_days();
    let enabled = r.pick(
        "renewal.enabled",
        rr.enabled,
        preset == Some(Preset::Fig3),
        paper_if(model == ModelKind::Ode),
    );
    let renewal_settings = RenewalSchedule {
        period: r.pick(
            "renewal.period",
            rr.period,
            rd.period,
            Provenance::PaperDefault,
        ),
        mode: r.pick("renewal.mode", rr.mode, rd.mode, Provenance::Assumed),
        value: r.pick(
            "renewal.value",
            rr.value,
            rd.value,
            Provenance::PaperDefault,
        ),
    };
    if !(renewal_settings.period > 0.0) || !renewal_settings.period.is_finite() {
        return Err(invalid("renewal.period", "must be positive"));
    }
    if !(renewal_settings.value >= 0.0) || !renewal_settings.value.is_finite() {
        return Err(invalid("renewal.value", "must be finite and >= 0"));
    }
    let renewal = enabled.then_some(renewal_settings);

    let rp = raw.pde.unwrap_or_default();
    let default_snaps = if preset == Some(Preset::Fig4) {
        vec![2.0]
    } else {
        vec![t_end]
    };
    let pde = PdeSettings {
        dx: r.pick("pde.dx", rp.dx, 50.0, Provenance::Assumed),
        dt: r.pick("pde.dt", rp.dt, 0.1, Provenance::PaperDefault),
        scheme: r.pick(
            "pde.scheme",
            rp.scheme,
            TimeScheme::Imex,
            Provenance::Assumed,
        ),
        taxis: r.pick(
            "pde.taxis",
            rp.taxis,
            TaxisMode::Identity,
            Provenance::PaperDefault,
        ),
        reactions: r.pick(
            "pde.reactions",
            rp.reactions,
            true,
            Provenance::PaperDefault,
        ),
        diffusion_scale: r.pick(
            "pde.diffusion_scale",
            rp.diffusion_scale,
            1.0,
            Provenance::PaperDefault,
        ),
        snapshot_times: r.pick(
            "pde.snapshot_times",
            rp.snapshot_times,
            default_snaps,
            paper_if(preset == Some(Preset::Fig4)),
        ),
        probe: r
            .pick(
                "pde.probe",
                rp.probe,
                [ScaffoldGrid::DISK_CENTER.0, ScaffoldGrid::DISK_CENTER.1],
                Provenance::PaperDefault,
            )
            .into(),
    };
    let tensor = resolve_tensor(&mut r, raw.tensor.unwrap_or_default(), base_dir)?;

    let cfg = RunConfig {
        model,
        preset,
        t_end,
        seed,
        output_dir,
        params,
        stimulus,
        ode,
        renewal,
        renewal_settings,
        pde,
        tensor,
        provenance: r.provenance,
    };
    if model == ModelKind::Pde {
        cfg.validate_pde()?;
    }
    Ok(cfg)
}

fn resolve_params(r: &mut Resolver, user: Table) -> Result<ParameterSet> {
    let defaults = ParameterSet::table1();
    let mut merged = Table::try_from(&defaults).map_err(|e| Error::Config(e.to_string()))?;
    let known: Vec<String> = merged
        .keys()
        .cloned()
        .chain(["k_minus".to_string(), "lambda11".to_string()])
        .collect();
    for key in &known {
        if merged.contains_key(key) {
            let prov = if key == "chi_c" {
                Provenance::Assumed
            } else {
                Provenance::PaperDefault
            };
            r.provenance.insert(format!("params.{key}"), prov);
        }
    }
    for (key, value) in user {
        let full = format!("params.{key}");
        if !known.contains(&key) {
            return Err(invalid(&full, "unknown parameter"));
        }
        let v = match value {
            Value::Float(v) => v,
            Value::Integer(i) => i as f64,
            other => {
                return Err(invalid(
                    &full,
                    format!("expected a number, got {}", other.type_str()),
                ))
            }
        };
        merged.insert(key, Value::Float(v));
        r.provenance.insert(full, Provenance::User);
    }
    let params: ParameterSet = merged
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    params.validate().map_err(|e| match e {
        Error::InvalidParameter { key, reason } => Error::InvalidParameter {
            key: format!("params.{key}"),
            reason,
        },
        other => other,
    })?;
    Ok(params)
}

fn resolve_tensor(r: &mut Resolver, raw: RawTensor, base_dir: &Path) -> Result<TensorSource> {
    let source = r.pick(
        "tensor.source",
        raw.source,
        "table1".to_string(),
        Provenance::PaperDefault,
    );
    let allowed: &[&str] = match source.as_str() {
        "table1" => &[],
        "moment" => &["moment"],
        "acg" => &["a"],
        "file" => &["file"],
        "planar" => &["d1"],
        other => {
            return Err(invalid(
                "tensor.source",
                format!("unknown source `{other}` (expected table1, moment, acg, file or planar)"),
            ))
        }
    };
    for (key, present) in [
        ("moment", raw.moment.is_some()),
        ("a", raw.a.is_some()),
        ("file", raw.file.is_some()),
        ("d1", raw.d1.is_some()),
    ] {
        let full = format!("tensor.{key}");
        if present && !allowed.contains(&key) {
            return Err(invalid(
                &full,
                format!("not used with source = \"{source}\""),
            ));
        }
        if !present && allowed.contains(&key) {
            return Err(invalid(
                &full,
                format!("required with source = \"{source}\""),
            ));
        }
        if present {
            r.provenance.insert(full, Provenance::User);
        }
    }
    let src = match source.as_str() {
        "table1" => TensorSource::Table1,
        "moment" => {
            let m = Matrix3::from_fn(|i, j| raw.moment.unwrap()[i][j]);
            if (m - m.transpose()).amax() > 1e-12 || !m.iter().all(|v| v.is_finite()) {
                return Err(invalid(
                    "tensor.moment",
                    "must be a finite symmetric matrix",
                ));
            }
            TensorSource::Moment(m)
        }
        "acg" => TensorSource::Acg {
            a: OrientationMatrix::from_rows(raw.a.unwrap())
                .map_err(|e| invalid("tensor.a", e.to_string()))?,
            file: None,
        },
        "file" => {
            let file = raw.file.unwrap();
            let path = base_dir.join(&file);
            TensorSource::Acg {
                a: load_orientation_matrix(&path)?,
                file: Some(file),
            }
        }
        _ => {
            let d = raw.d1.unwrap();
            TensorSource::Planar(Matrix2::new(d[0][0], d[0][1], d[1][0], d[1][1]))
        }
    };
    Ok(src)
}

/// Reads a 3x3 ACG matrix: three rows of three numbers separated by
/// whitespace or commas; `#` starts a comment.
pub fn load_orientation_matrix(path: &Path) -> Result<OrientationMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_orientation_matrix(&text).map_err(|message| Error::Parse {
        path: path.to_path_buf(),
        message,
    })?
}

fn parse_orientation_matrix(text: &str) -> std::result::Result<Result<OrientationMatrix>, String> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| format!("line {}: `{s}` is not a number", n + 1))
            })
            .collect::<std::result::Result<Vec<f64>, String>>()?;
        if row.len() != 3 {
            return Err(format!(
                "line {}: expected 3 entries, found {}",
                n + 1,
                row.len()
            ));
        }
        rows.push([row[0], row[1], row[2]]);
    }
    if rows.len() != 3 {
        return Err(format!("expected 3 rows, found {}", rows.len()));
    }
    Ok(OrientationMatrix::from_rows([rows[0], rows[1], rows[2]]))
}

impl RunConfig {
    pub fn provenance(&self, key: &str) -> Option<Provenance> {
        self.provenance.get(key).copied()
    }

    /// Three-dimensional tensors, when the source defines them.
    pub fn diffusion_tensors(&self) -> Result<Option<DiffusionTensors>> {
        let moment = match &self.tensor {
            TensorSource::Table1 => table1_moment(),
            TensorSource::Moment(m) => *m,
            TensorSource::Acg { a, .. } => acg_moment(a)?,
            TensorSource::Planar(_) => return Ok(None),
        };
        Ok(Some(build_tensors(&moment, &self.params)))
    }

    /// Planar (d1, d2) used by the spatial model, including the scale factor.
    pub fn planar_tensors(&self) -> Result<(Matrix2<f64>, Matrix2<f64>)> {
        let (d1, d2) = match (&self.tensor, self.diffusion_tensors()?) {
            (TensorSource::Planar(d1), _) => (*d1, d1 * d2_over_d1(&self.params)),
            (_, Some(t)) => (restrict_2d(&t.d1), restrict_2d(&t.d2)),
            (_, None) => unreachable!("non-planar sources always define 3D tensors"),
        };
        let s = self.pde.diffusion_scale;
        Ok((d1 * s, d2 * s))
    }

    fn validate_pde(&self) -> Result<()> {
        let p = &self.pde;
        if !(p.dx > 0.0) || !p.dx.is_finite() || p.dx > ScaffoldGrid::DISK_RADIUS {
            return Err(invalid(
                "pde.dx",
                format!("must lie in (0, 2500] um, got {}", p.dx),
            ));
        }
        if !(p.dt > 0.0) || !p.dt.is_finite() {
            return Err(invalid("pde.dt", format!("must be positive, got {}", p.dt)));
        }
        step_count(0.0, self.t_end, p.dt)
            .map_err(|_| invalid("t_end", format!("must be a multiple of pde.dt = {}", p.dt)))?;
        for &t in &p.snapshot_times {
            let ok = t == 0.0 || (t > 0.0 && t <= self.t_end && step_count(0.0, t, p.dt).is_ok());
            if !ok {
                return Err(invalid(
                    "pde.snapshot_times",
                    format!("{t} is not a multiple of pde.dt within [0, t_end]"),
                ));
            }
        }
        if !(p.diffusion_scale >= 0.0) || !p.diffusion_scale.is_finite() {
            return Err(invalid("pde.diffusion_scale", "must be finite and >= 0"));
        }
        let (cx, cy) = ScaffoldGrid::DISK_CENTER;
        if ((p.probe.0 - cx).powi(2) + (p.probe.1 - cy).powi(2)).sqrt() > ScaffoldGrid::DISK_RADIUS
        {
            return Err(invalid("pde.probe", "lies outside the scaffold disk"));
        }
        if p.taxis == TaxisMode::Full {
            if self.params.k_minus.is_none() {
                return Err(invalid(
                    "params.k_minus",
                    "required when pde.taxis = \"full\"",
                ));
            }
            if self.params.lambda11.is_none() {
                return Err(invalid(
                    "params.lambda11",
                    "required when pde.taxis = \"full\"",
                ));
            }
        }
        let (d1, d2) = self.planar_tensors()?;
        for (key, d) in [("tensor", d1), ("tensor", d2)] {
            let asym = (d[(0, 1)] - d[(1, 0)]).abs();
            let det = d[(0, 0)] * d[(1, 1)] - d[(0, 1)] * d[(1, 0)];
            if asym > 1e-12 * d.amax() || d[(0, 0)] < 0.0 || d[(1, 1)] < 0.0 || det < 0.0 {
                return Err(invalid(
                    key,
                    "planar diffusion tensor must be symmetric positive semi-definite",
                ));
            }
        }
        Ok(())
    }

    /// Every effective value as `(section, key, value, provenance)`; section
    /// "" holds top-level keys. Unset optional parameters are omitted.
    pub fn entries(&self) -> Vec<(&'static str, String, Value, Provenance)> {
        let mut out = Vec::new();
        let mut push = |section: &'static str, key: &str, value: Value| {
            let full = if section.is_empty() {
                key.to_string()
            } else {
                format!("{section}.{key}")
            };
            let prov = self.provenance(&full).unwrap_or(Provenance::Assumed);
            out.push((section, key.to_string(), value, prov));
        };
        push("", "model", Value::from(self.model.name()));
        if let Some(p) = self.preset {
            push("", "preset", Value::from(p.name()));
        }
        push("", "t_end", Value::Float(self.t_end));
        push("", "seed", Value::Integer(self.seed as i64));
        push(
            "",
            "output_dir",
            Value::from(self.output_dir.display().to_string()),
        );

        let params = Table::try_from(&self.params).expect("parameters serialize");
        for (k, v) in params {
            push("params", &k, v);
        }
        push("stimulus", "offset", Value::Float(self.stimulus.offset));
        push(
            "stimulus",
            "amplitude",
            Value::Float(self.stimulus.amplitude),
        );
        push("stimulus", "period", Value::Float(self.stimulus.period));

        if self.model == ModelKind::Ode {
            push("ode", "rtol", Value::Float(self.ode.rtol));
            push("ode", "atol", Value::Float(self.ode.atol));
            push(
                "ode",
                "sample_interval",
                Value::Float(self.ode.sample_interval),
            );
        }
        let rs = &self.renewal_settings;
        push("renewal", "enabled", Value::Boolean(self.renewal.is_some()));
        push("renewal", "period", Value::Float(rs.period));
        push(
            "renewal",
            "mode",
            Value::try_from(rs.mode).expect("mode serializes"),
        );
        push("renewal", "value", Value::Float(rs.value));

        if self.model == ModelKind::Pde {
            let p = &self.pde;
            push("pde", "dx", Value::Float(p.dx));
            push("pde", "dt", Value::Float(p.dt));
            push(
                "pde",
                "scheme",
                Value::try_from(p.scheme).expect("scheme serializes"),
            );
            push(
                "pde",
                "taxis",
                Value::try_from(p.taxis).expect("taxis serializes"),
            );
            push("pde", "reactions", Value::Boolean(p.reactions));
            push("pde", "diffusion_scale", Value::Float(p.diffusion_scale));
            push(
                "pde",
                "snapshot_times",
                Value::Array(p.snapshot_times.iter().map(|&t| Value::Float(t)).collect()),
            );
            push(
                "pde",
                "probe",
                Value::Array(vec![Value::Float(p.probe.0), Value::Float(p.probe.1)]),
            );
            push("tensor", "source", Value::from(self.tensor.name()));
            match &self.tensor {
                TensorSource::Table1 => {}
                TensorSource::Moment(m) => push("tensor", "moment", matrix_value(m.as_slice(), 3)),
                TensorSource::Acg { a, file: None } => {
                    push("tensor", "a", matrix_value(a.matrix().as_slice(), 3))
                }
                TensorSource::Acg { file: Some(f), .. } => {
                    push("tensor", "file", Value::from(f.display().to_string()))
                }
                TensorSource::Planar(d) => push("tensor", "d1", matrix_value(d.as_slice(), 2)),
            }
        }
        out
    }

    /// Resolved configuration in config-file grammar, each line annotated
    /// with its provenance. Loading the echo reproduces this config.
    pub fn echo(&self) -> String {
        let mut out = String::from("# effective configuration; comments give provenance\n");
        let mut current = "";
        for (section, key, value, prov) in self.entries() {
            if section != current {
                out.push_str(&format!("\n[{section}]\n"));
                current = section;
            }
            out.push_str(&format!("{key} = {value}  # {prov}\n"));
            if section == "params" && key == "lambda2" {
                for (name, v) in [
                    ("k_minus", self.params.k_minus),
                    ("lambda11", self.params.lambda11),
                ] {
                    if v.is_none() {
                        out.push_str(&format!("# {name} unset\n"));
                    }
                }
            }
        }
        out
    }
}

/// Nested TOML array from a column-major nalgebra slice.
fn matrix_value(col_major: &[f64], n: usize) -> Value {
    Value::Array(
        (0..n)
            .map(|i| Value::Array((0..n).map(|j| Value::Float(col_major[j * n + i])).collect()))
            .collect(),
    )
}

/// Serializes a matrix for manifests.
pub(crate) fn matrix3_value(m: &Matrix3<f64>) -> Value {
    matrix_value(m.as_slice(), 3)
}

pub(crate) fn matrix2_value(m: &Matrix2<f64>) -> Value {
    matrix_value(m.as_slice(), 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        parse_config(text, Path::new("test.toml"), Path::new(""))
    }

    fn bad_key(text: &str) -> String {
        match parse(text) {
            Err(Error::InvalidParameter { key, .. }) => key,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_ode_config_uses_published_defaults() {
        let c = parse("model = \"ode\"").unwrap();
        assert_eq!(c.model, ModelKind::Ode);
        assert_eq!(c.t_end, 144.0);
        assert_eq!(c.params, ParameterSet::table1());
        assert_eq!(c.renewal, None);
        assert_eq!(c.provenance("t_end"), Some(Provenance::PaperDefault));
        assert_eq!(c.provenance("params.chi_c"), Some(Provenance::Assumed));
        assert_eq!(c.provenance("params.beta"), Some(Provenance::PaperDefault));
        assert_eq!(c.provenance("model"), Some(Provenance::User));
    }

    #[test]
    fn presets_encode_the_experiments() {
        let f3 = preset_config(Preset::Fig3).unwrap();
        assert_eq!(f3.t_end, 504.0);
        assert_eq!(f3.renewal.unwrap().period, 72.0);
        let f2 = preset_config(Preset::Fig2).unwrap();
        assert_eq!(
            (f2.model, f2.t_end, f2.renewal),
            (ModelKind::Ode, 144.0, None)
        );
        let f4 = preset_config(Preset::Fig4).unwrap();
        assert_eq!((f4.model, f4.t_end), (ModelKind::Pde, 2.0));
        assert_eq!(f4.pde.snapshot_times, vec![2.0]);
        assert_eq!(f4.pde.dt, 0.1);
        assert_eq!(f4.pde.taxis, TaxisMode::Identity);
        let f5 = preset_config(Preset::Fig5).unwrap();
        assert_eq!(f5.pde.probe, (2500.0, 2500.0));
        assert_eq!(f5.renewal, None);
    }

    #[test]
    fn user_overrides_are_tracked() {
        let c = parse("preset = \"fig3\"\nt_end = 216\n[params]\nchi_c = 2e-4\n").unwrap();
        assert_eq!(c.t_end, 216.0);
        assert_eq!(c.params.chi_c, 2e-4);
        assert_eq!(c.provenance("t_end"), Some(Provenance::User));
        assert_eq!(c.provenance("params.chi_c"), Some(Provenance::User));
        assert_eq!(
            c.provenance("renewal.period"),
            Some(Provenance::PaperDefault)
        );
    }

    #[test]
    fn validation_names_the_offending_key() {
        assert_eq!(
            bad_key("model = \"ode\"\n[params]\ns_min = 3.0\n"),
            "params.s_min"
        );
        assert_eq!(
            bad_key("model = \"ode\"\n[params]\nfoo = 1.0\n"),
            "params.foo"
        );
        assert_eq!(
            bad_key("model = \"ode\"\n[params]\nbeta = \"x\"\n"),
            "params.beta"
        );
        assert_eq!(bad_key("t_end = 3.0"), "model");
        assert_eq!(bad_key("model = \"ode\"\nt_end = -1"), "t_end");
        assert_eq!(
            bad_key("model = \"pde\"\n[pde]\ntaxis = \"full\"\n"),
            "params.k_minus"
        );
        assert_eq!(
            bad_key("model = \"pde\"\n[pde]\ntaxis = \"full\"\n[params]\nk_minus = 1.0\n"),
            "params.lambda11"
        );
        assert_eq!(bad_key("model = \"pde\"\nt_end = 0.25"), "t_end");
        assert_eq!(
            bad_key("model = \"pde\"\n[pde]\nsnapshot_times = [200.0]\n"),
            "pde.snapshot_times"
        );
        assert_eq!(
            bad_key("model = \"pde\"\n[pde]\nprobe = [0.0, 0.0]\n"),
            "pde.probe"
        );
        assert_eq!(bad_key("preset = \"fig4\"\nmodel = \"ode\""), "model");
        assert_eq!(bad_key("preset = \"fig9\""), "preset");
        assert_eq!(bad_key("model = \"ode\"\n[pde]\ndx = 25.0\n"), "pde");
        assert_eq!(
            bad_key("model = \"pde\"\n[tensor]\nsource = \"moment\"\n"),
            "tensor.moment"
        );
        assert_eq!(
            bad_key("model = \"pde\"\n[tensor]\na = [[1,0,0],[0,1,0],[0,0,1]]\n"),
            "tensor.a"
        );
        assert_eq!(
            bad_key(
                "model = \"pde\"\n[tensor]\nsource = \"acg\"\na = [[1,0,0],[0,-1,0],[0,0,1]]\n"
            ),
            "tensor.a"
        );
    }

    #[test]
    fn unknown_keys_fail_with_line_information() {
        let err = parse("model = \"ode\"\n\n[ode]\nrtl = 1e-6\n").unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(msg.contains("line 4"), "{msg}");
        assert!(msg.contains("rtl"), "{msg}");
    }

    #[test]
    fn echo_round_trips() {
        let text = "preset = \"fig5\"\nseed = 7\n[pde]\ndx = 100.0\nscheme = \"split-implicit\"\n\
                    [tensor]\nsource = \"acg\"\na = [[4.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]]\n";
        let c = parse(text).unwrap();
        let again = parse(&c.echo()).unwrap();
        assert_eq!(again.model, c.model);
        assert_eq!(again.params, c.params);
        assert_eq!(again.pde, c.pde);
        assert_eq!(again.tensor, c.tensor);
        assert_eq!(again.renewal, c.renewal);
        assert_eq!(again.seed, 7);
        assert!(c.echo().contains("dx = 100.0  # user"));
        assert!(c.echo().contains("chi_c = 0.0005  # assumed"));
        assert!(c.echo().contains("# k_minus unset"));
    }

    #[test]
    fn planar_source_derives_the_second_tensor() {
        let c = parse(
            "model = \"pde\"\n[pde]\ndiffusion_scale = 0.5\n[tensor]\nsource = \"planar\"\nd1 = [[2.0, 1.0], [1.0, 3.0]]\n",
        )
        .unwrap();
        let (d1, d2) = c.planar_tensors().unwrap();
        assert_eq!(d1, Matrix2::new(1.0, 0.5, 0.5, 1.5));
        assert_eq!(d2, d1);
        assert!(c.diffusion_tensors().unwrap().is_none());
    }

    #[test]
    fn table1_tensors_by_default() {
        let c = parse("model = \"pde\"").unwrap();
        let (d1, _) = c.planar_tensors().unwrap();
        assert!((d1[(0, 1)] - 0.189e6).abs() < 1e-6);
    }

    #[test]
    fn orientation_file_grammar() {
        let a = parse_orientation_matrix("# A\n4, 0, 0\n0 1 0\n0,0,1 # last\n")
            .unwrap()
            .unwrap();
        assert_eq!(a.matrix()[(0, 0)], 4.0);
        assert!(parse_orientation_matrix("1 2\n").is_err());
        assert!(parse_orientation_matrix("1 0 0\n0 1 0\n").is_err());
        assert!(parse_orientation_matrix("1 0 0\n0 x 0\n0 0 1\n").is_err());
    }
}
