//! Executes a [`RunConfig`] and writes its artifacts.
//!
//! Every run writes `config_echo.toml` and `manifest.toml` into the output
//! directory. The manifest is the echo plus an informational `[derived]`
//! table (grid, tensors, files); it loads as a config and reproduces the run.
//!
//! Well-mixed runs add `trajectory.csv` and `rates.csv`; spatial runs add
//! `probe.csv` and `snapshots/<field>_t<t>h.csv`.

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::config::{matrix2_value, matrix3_value, ModelKind, RunConfig};
use crate::csvnum::Num;
use crate::error::{Error, Result};
use crate::model::{
    alpha1_chi, alpha1_s, alpha2_chi, alpha2_s, OdeState, ParameterSet, SeedingModel,
};
use crate::ode::{integrate, SolverStats};
use crate::pde::{
    init_fields, output, run, Field, PdeSetup, PdeStepper, RunSchedule, ScaffoldGrid,
};

pub const ECHO_FILE: &str = "config_echo.toml";
pub const MANIFEST_FILE: &str = "manifest.toml";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const RATES_FILE: &str = "rates.csv";
pub const PROBE_FILE: &str = "probe.csv";
pub const SNAPSHOT_DIR: &str = "snapshots";

/// Units line and header of `rates.csv`.
pub const RATES_UNITS_LINE: &str =
    "# units: s=1, alpha1_s=1/h, alpha2_s=1/h, chi=mol/um^2, alpha1_chi=1, alpha2_chi=1";
pub const RATES_HEADER: &str = "s,alpha1_s,alpha2_s,chi,alpha1_chi,alpha2_chi";

/// What a finished run reports.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub model: ModelKind,
    pub t_end: f64,
    /// Final ODE state, or the final probe state of a spatial run.
    pub final_state: OdeState,
    pub stats: Option<SolverStats>,
    /// Fixed time steps of a spatial run.
    pub pde_steps: Option<usize>,
    /// Most negative field value seen in a spatial run.
    pub min_value: Option<f64>,
    pub files: Vec<PathBuf>,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model: {}, t_end = {} h", self.model.name(), self.t_end)?;
        let y = &self.final_state;
        let label = match self.model {
            ModelKind::Ode => "final state",
            ModelKind::Pde => "final probe state",
        };
        writeln!(
            f,
            "{label}: c1={:e} c2={:e} chi={:e} h={:e} tau={:e}",
            y.c1, y.c2, y.chi, y.h, y.tau
        )?;
        if let Some(s) = &self.stats {
            writeln!(
                f,
                "solver: {} steps, {} rejected, {} rhs evaluations, {} jacobians, {} factorizations",
                s.steps, s.rejected_steps, s.rhs_evaluations, s.jacobian_evaluations, s.factorizations
            )?;
        }
        if let (Some(n), Some(m)) = (self.pde_steps, self.min_value) {
            writeln!(f, "solver: {n} fixed steps, smallest field value {m:e}")?;
        }
        for file in &self.files {
            writeln!(f, "wrote {}", file.display())?;
        }
        Ok(())
    }
}

/// Runs the configured experiment and writes all artifacts to
/// `cfg.output_dir`.
pub fn run_experiment(cfg: &RunConfig) -> Result<RunSummary> {
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = vec![write(dir, ECHO_FILE, &cfg.echo())?];
    let mut derived = Table::new();
    derived.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));

    let summary = match cfg.model {
        ModelKind::Ode => {
            let model = SeedingModel::new(cfg.params.clone(), cfg.stimulus);
            let traj = integrate(
                &model,
                OdeState::seeding_initial(),
                0.0,
                cfg.t_end,
                cfg.renewal.as_ref(),
                &cfg.ode.integrator_options(),
            )?;
            files.push(write(dir, TRAJECTORY_FILE, &traj.to_csv())?);
            files.push(write(dir, RATES_FILE, &rates_csv(&cfg.params, 401))?);
            derived.insert("samples".into(), Value::Integer(traj.len() as i64));
            derived.insert(
                "renewal_events".into(),
                Value::Array(traj.events.iter().map(|&t| Value::Float(t)).collect()),
            );
            RunSummary {
                model: cfg.model,
                t_end: cfg.t_end,
                final_state: traj.final_state(),
                stats: Some(traj.stats),
                pde_steps: None,
                min_value: None,
                files,
            }
        }
        ModelKind::Pde => {
            let grid = ScaffoldGrid::scaffold_disk(cfg.pde.dx)?;
            let (d1, d2) = cfg.planar_tensors()?;
            let setup = PdeSetup {
                params: cfg.params.clone(),
                stimulus: cfg.stimulus,
                d1,
                d2,
                taxis: cfg.pde.taxis,
                reactions: cfg.pde.reactions,
                scheme: cfg.pde.scheme,
                dt: cfg.pde.dt,
                renewal: cfg.renewal,
            };
            let stepper = PdeStepper::new(grid.clone(), &setup)?;
            let init = init_fields(&grid, cfg.seed);
            let result = run(
                &stepper,
                init,
                &RunSchedule {
                    t_end: cfg.t_end,
                    snapshot_times: cfg.pde.snapshot_times.clone(),
                    probe: cfg.pde.probe,
                },
            )?;
            files.push(write(dir, PROBE_FILE, &output::probe_csv(&result.probe))?);
            let snap_dir = dir.join(SNAPSHOT_DIR);
            std::fs::create_dir_all(&snap_dir).map_err(|e| Error::io(&snap_dir, e))?;
            for snap in &result.snapshots {
                for field in Field::ALL {
                    let name = output::snapshot_file_name(field, snap.t);
                    files.push(write(
                        &snap_dir,
                        &name,
                        &output::snapshot_csv(&grid, snap, field),
                    )?);
                }
            }

            let mut g = Table::new();
            g.insert("nx".into(), Value::Integer(grid.nx() as i64));
            g.insert("ny".into(), Value::Integer(grid.ny() as i64));
            g.insert("dx".into(), Value::Float(grid.dx()));
            g.insert("cells".into(), Value::Integer(grid.len() as i64));
            g.insert(
                "origin".into(),
                Value::Array(vec![grid.origin().0.into(), grid.origin().1.into()]),
            );
            g.insert(
                "probe_cell".into(),
                Value::Integer(result.probe.cell as i64),
            );
            derived.insert("grid".into(), Value::Table(g));
            let mut t = Table::new();
            if let Some(full) = cfg.diffusion_tensors()? {
                t.insert("moment".into(), matrix3_value(&full.moment));
                t.insert("d1".into(), matrix3_value(&full.d1));
                t.insert("d2".into(), matrix3_value(&full.d2));
            }
            t.insert("d1_planar".into(), matrix2_value(&d1));
            t.insert("d2_planar".into(), matrix2_value(&d2));
            derived.insert("tensors".into(), Value::Table(t));
            derived.insert("steps".into(), Value::Integer(result.steps as i64));

            RunSummary {
                model: cfg.model,
                t_end: cfg.t_end,
                final_state: result.probe.samples.last().map(|s| s.1).unwrap_or_default(),
                stats: None,
                pde_steps: Some(result.steps),
                min_value: Some(result.min_value),
                files,
            }
        }
    };

    let listed: Vec<Value> = summary
        .files
        .iter()
        .map(|p| Value::from(p.strip_prefix(dir).unwrap_or(p).display().to_string()))
        .chain(std::iter::once(Value::from(MANIFEST_FILE)))
        .collect();
    derived.insert("files".into(), Value::Array(listed));
    let mut manifest = cfg.echo();
    let mut wrapper = Table::new();
    wrapper.insert("derived".into(), Value::Table(derived));
    let rendered = toml::to_string(&wrapper).map_err(|e| Error::Config(e.to_string()))?;
    write!(
        manifest,
        "\n# informational, ignored when loaded as a config\n{rendered}"
    )
    .unwrap();

    let mut summary = summary;
    summary.files.push(write(dir, MANIFEST_FILE, &manifest)?);
    Ok(summary)
}

/// Rate functions sampled on `n` points: S over [0, 4] and chi over
/// [0, 4 chi_c], one pair per row.
pub fn rates_csv(p: &ParameterSet, n: usize) -> String {
    let mut out = String::with_capacity(n * 96);
    out.push_str(RATES_UNITS_LINE);
    out.push('\n');
    out.push_str(RATES_HEADER);
    out.push('\n');
    let last = (n.max(2) - 1) as f64;
    for k in 0..n.max(2) {
        let s = 4.0 * k as f64 / last;
        let chi = 4.0 * p.chi_c * k as f64 / last;
        let a1c = alpha1_chi(chi, p).expect("chi is nonnegative");
        writeln!(
            out,
            "{},{},{},{},{},{}",
            Num(s),
            Num(alpha1_s(s, p)),
            Num(alpha2_s(s, p)),
            Num(chi),
            Num(a1c),
            Num(alpha2_chi(chi, p))
        )
        .unwrap();
    }
    out
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates_table_layout() {
        let p = ParameterSet::table1();
        let csv = rates_csv(&p, 401);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 403);
        assert_eq!(lines[1], RATES_HEADER);
        assert_eq!(lines[2], "0,0.025,0.05,0,0,1");
        let mid: Vec<f64> = lines[2 + 50]
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(mid[0], 0.5);
        assert_eq!(mid[2], 0.05);
        let at_s_min: Vec<f64> = lines[2 + 100]
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(at_s_min[0], 1.0);
        assert!((at_s_min[1] - 0.0375).abs() < 1e-15);
        assert!((at_s_min[4] - 0.5).abs() < 1e-15);
    }
}
