//! Executes configurations and writes their outputs.

use std::path::Path;

use rayon::prelude::*;
use spinboson_core::bath::response_function;
use spinboson_core::{
    estimate_kappa0, influence_coefficients, initial_state, markov_propagate, propagate,
    unitary_evolution, InfluenceKernel, OdeConfig, SystemHamiltonian, TimeFs, Trajectory,
};

use crate::config::{Config, Job, Scenario, Solver};
use crate::error::{CliError, Result};
use crate::output::{
    dipole_csv, response_csv, sha256_hex, trajectory_csv, write_atomic, Manifest, ManifestEntry,
    OutputKind, MANIFEST_FILE,
};

/// Reduced dynamics of one scenario, starting from the equal superposition.
pub fn simulate(s: &Scenario) -> Result<Trajectory> {
    let sys = SystemHamiltonian::new(s.bare).map_err(|e| CliError::from_core(&s.name, e))?;
    let rho0 = initial_state();
    let n = s.n_steps();
    let traj = match s.solver {
        Solver::Unitary => {
            let cfg = OdeConfig {
                output_step: s.dt,
                ..Default::default()
            };
            unitary_evolution(&sys, &rho0, TimeFs(n as f64 * s.dt.0), &cfg)
        }
        Solver::Quapi => kernel(s).and_then(|k| propagate(&sys, &k, &rho0, s.dt, n, s.dk_max)),
        Solver::Markov => influence_coefficients(&s.bath, s.dt, 0)
            .and_then(|k| markov_propagate(&sys, &k, &rho0, s.dt, n)),
    };
    traj.map_err(|e| CliError::from_core(&s.name, e))
}

fn kernel(s: &Scenario) -> spinboson_core::Result<InfluenceKernel> {
    influence_coefficients(&s.bath, s.dt, s.dk_max)
}

/// Non-fatal diagnostics for a scenario.
pub fn warnings(s: &Scenario) -> Vec<String> {
    let mut out = Vec::new();
    if let Ok(sys) = SystemHamiltonian::new(s.bare) {
        let d = sys.drive();
        if d.exceeds_small_parameter() {
            out.push(format!(
                "scenario `{}`: peak kappa^2 (alpha + beta) = {:.3} is not small; \
                 the second-order transformation may be inaccurate",
                s.name, d.small_parameter
            ));
        }
    }
    out
}

/// A rendered output file, not yet written.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub file: String,
    pub job: String,
    pub kind: OutputKind,
    pub contents: String,
}

fn render_scenario(s: &Scenario, job: &str) -> Result<Rendered> {
    let traj = simulate(s)?;
    let sys = SystemHamiltonian::new(s.bare).map_err(|e| CliError::from_core(&s.name, e))?;
    Ok(Rendered {
        file: format!("{}.csv", s.name),
        job: job.to_string(),
        kind: OutputKind::Trajectory,
        contents: trajectory_csv(&traj, &sys, &s.outputs),
    })
}

/// Runs every job. Sweep points are distributed over `pool`; the order of
/// the returned files follows the configuration.
pub fn render(config: &Config, pool: &rayon::ThreadPool) -> Result<Vec<Rendered>> {
    let mut out = Vec::new();
    for job in &config.jobs {
        match job {
            Job::Scenario(s) => out.push(render_scenario(s, &s.name)?),
            Job::Sweep(sw) => {
                let points = sw.points()?;
                let rendered: Vec<Result<Rendered>> = pool.install(|| {
                    points
                        .par_iter()
                        .map(|p| render_scenario(p, &sw.base.name))
                        .collect()
                });
                for r in rendered {
                    out.push(r?);
                }
            }
            Job::Response(r) => {
                let n = (r.t_end.0 / r.dt.0 + 1e-9).floor() as usize;
                let samples = (0..=n)
                    .map(|i| response_function(&r.bath, TimeFs(i as f64 * r.dt.0)))
                    .collect::<spinboson_core::Result<Vec<_>>>()
                    .map_err(|e| CliError::from_core(&r.name, e))?;
                out.push(Rendered {
                    file: format!("{}.csv", r.name),
                    job: r.name.clone(),
                    kind: OutputKind::Response,
                    contents: response_csv(&samples),
                });
            }
            Job::Dipole(d) => {
                let est =
                    estimate_kappa0(&d.inputs).map_err(|e| CliError::from_core(&d.name, e))?;
                out.push(Rendered {
                    file: format!("{}.csv", d.name),
                    job: d.name.clone(),
                    kind: OutputKind::Dipole,
                    contents: dipole_csv(&est),
                });
            }
        }
    }
    Ok(out)
}

pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Invalid("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Invalid(format!("cannot start worker pool: {e}")))
}

pub fn manifest(config: &Config, files: &[Rendered]) -> Manifest {
    let text = config.to_string();
    Manifest {
        generator: "spinboson".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config_sha256: sha256_hex(text.as_bytes()),
        config: text,
        outputs: files
            .iter()
            .map(|f| ManifestEntry {
                file: f.file.clone(),
                job: f.job.clone(),
                kind: f.kind.clone(),
                sha256: sha256_hex(f.contents.as_bytes()),
            })
            .collect(),
    }
}

/// Runs `config`, writing one file per scenario or sweep point plus
/// `manifest.json` into `out_dir` (created if missing).
pub fn run(config: &Config, out_dir: &Path, pool: &rayon::ThreadPool) -> Result<Manifest> {
    let files = render(config, pool)?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    for f in &files {
        write_atomic(out_dir, &f.file, f.contents.as_bytes())?;
    }
    let manifest = manifest(config, &files);
    write_atomic(out_dir, MANIFEST_FILE, manifest.to_json().as_bytes())?;
    Ok(manifest)
}

/// Writes the influence-coefficient table of every scenario that has a bath
/// memory, one `<name>.kernel.csv` per scenario or sweep point.
pub fn write_kernels(config: &Config, out_dir: &Path) -> Result<Vec<String>> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut written = Vec::new();
    for job in &config.jobs {
        let scenarios = match job {
            Job::Scenario(s) => vec![s.clone()],
            Job::Sweep(sw) => sw.points()?,
            _ => continue,
        };
        for s in scenarios.iter().filter(|s| s.solver != Solver::Unitary) {
            let memory = if s.solver == Solver::Markov {
                0
            } else {
                s.dk_max
            };
            let k = influence_coefficients(&s.bath, s.dt, memory)
                .map_err(|e| CliError::from_core(&s.name, e))?;
            let mut table = Vec::new();
            k.write_table(&mut table).expect("writing to memory");
            let file = format!("{}.kernel.csv", s.name);
            write_atomic(out_dir, &file, &table)?;
            written.push(file);
        }
    }
    Ok(written)
}
