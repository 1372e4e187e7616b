//! Acceptance gate for the simulation suite.
//!
//! Prints one PASS/FAIL line per criterion and exits non-zero if any
//! criterion fails. Thresholds are pinned below and are not tuned to the
//! results.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use spinboson_cli::config::Job;
use spinboson_cli::output::{read_csv, Table};
use spinboson_cli::runner::Rendered;
use spinboson_cli::{presets, render, run, simulate, thread_pool, Scenario, PRESETS};
use spinboson_core::quapi::peaks_of;
use spinboson_core::{
    correlation_time, estimate_kappa0, influence_coefficients, initial_state, propagate,
    unitary_evolution, BathSpec, DipoleEstimateInputs, EnergyWavenumber, OdeConfig,
    SystemHamiltonian, Temperature, TimeFs, Trajectory,
};

const ZERO_COUPLING_SUP: f64 = 1e-3;
const ZERO_COUPLING_RUNTIME: Duration = Duration::from_secs(1);

const TRACE_TOL: f64 = 1e-4;
const HERMITICITY_TOL: f64 = 1e-10;
const MIN_EIGENVALUE: f64 = -1e-4;

const TAU_C_RANGE: (f64, f64) = (10.0, 20.0);
const TAU_C_RUNTIME: Duration = Duration::from_secs(5);

const FIG2_WINDOW_FS: f64 = 450.0;
const FIG2_MIN_PEAKS: usize = 3;
const FIG2_PERIOD_RANGE: (f64, f64) = (70.0, 170.0);
const FIG2_PERSISTENCE_TIME_FS: f64 = 400.0;
const FIG2_PERSISTENCE_FRACTION: f64 = 0.25;
const FIG2_RUNTIME: Duration = Duration::from_secs(30);

const TEMPERATURE_PROBE_FS: f64 = 400.0;

const FAMILY_SAME_SUP: f64 = 0.15;
const FAMILY_DIFFERENT_SUP: f64 = 0.15;
const FAMILY_SHARED_XI: f64 = 0.75;

const MARKOV_RMS: f64 = 0.05;

const CONVERGENCE_SUP: f64 = 0.05;

const KAPPA0_RANGE: (f64, f64) = (205.0, 213.0);
const MU_RANGE: (f64, f64) = (5.5, 5.8);

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn pool() -> rayon::ThreadPool {
    thread_pool(None).expect("thread pool")
}

fn only_scenario(name: &str) -> Scenario {
    match presets::find(name).unwrap().config().jobs.remove(0) {
        Job::Scenario(s) => s,
        _ => panic!("preset {name} is not a single scenario"),
    }
}

fn preset_files(name: &str) -> Vec<Rendered> {
    render(&presets::find(name).unwrap().config(), &pool()).expect("preset runs")
}

fn table(r: &Rendered) -> Table {
    read_csv(&r.contents).expect("CSV parses")
}

/// (t, |ρ_HB|) from a trajectory CSV.
fn coherence(t: &Table) -> (Vec<f64>, Vec<f64>) {
    (t.column("t_fs").unwrap(), t.column("abs_rho_HB").unwrap())
}

fn value_at(times: &[f64], values: &[f64], t: f64) -> f64 {
    let i = times
        .iter()
        .position(|&x| (x - t).abs() < 1e-9)
        .expect("sample at probe time");
    values[i]
}

/// max |a − b| / max |b| over common sample times.
fn relative_sup(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let num = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    num / b.iter().map(|y| y.abs()).fold(0.0, f64::max)
}

fn within(v: f64, (lo, hi): (f64, f64)) -> bool {
    (lo..=hi).contains(&v)
}

fn verdict(pass: bool, detail: String) -> Verdict {
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn zero_coupling() -> Verdict {
    let mut s = only_scenario("fig2a");
    s.bath.xi = 0.0;
    let start = Instant::now();
    let sys = SystemHamiltonian::new(s.bare).unwrap();
    let kernel = influence_coefficients(&s.bath, s.dt, s.dk_max).unwrap();
    let quapi = propagate(&sys, &kernel, &initial_state(), s.dt, s.n_steps(), s.dk_max).unwrap();
    let elapsed = start.elapsed();
    let cfg = OdeConfig {
        output_step: s.dt,
        ..Default::default()
    };
    let exact = unitary_evolution(&sys, &initial_state(), s.t_end, &cfg).unwrap();
    let sup = quapi
        .samples
        .iter()
        .zip(&exact.samples)
        .flat_map(|(a, b)| {
            (a.rho.0 - b.rho.0)
                .iter()
                .map(|z| z.norm())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    verdict(
        sup < ZERO_COUPLING_SUP && elapsed < ZERO_COUPLING_RUNTIME,
        format!("sup |QUAPI - ODE| = {sup:.2e} (< {ZERO_COUPLING_SUP:.0e}), runtime {elapsed:.2?}"),
    )
}

fn all_preset_scenarios() -> Vec<Scenario> {
    let mut out = Vec::new();
    for p in PRESETS {
        for job in p.config().jobs {
            match job {
                Job::Scenario(s) => out.push(s),
                Job::Sweep(sw) => out.extend(sw.points().unwrap()),
                _ => {}
            }
        }
    }
    out
}

fn invariants() -> Verdict {
    let mut worst = (0.0f64, 0.0f64, f64::INFINITY);
    let mut failures = Vec::new();
    for s in all_preset_scenarios() {
        let traj = simulate(&s).unwrap();
        let trace = traj
            .samples
            .iter()
            .map(|x| (x.rho.trace() - 1.0).norm())
            .fold(0.0, f64::max);
        let herm = traj
            .samples
            .iter()
            .map(|x| x.rho.hermiticity_defect())
            .fold(0.0, f64::max);
        let eig = traj
            .samples
            .iter()
            .map(|x| x.rho.min_eigenvalue())
            .fold(f64::INFINITY, f64::min);
        if !(trace < TRACE_TOL && herm < HERMITICITY_TOL && eig >= MIN_EIGENVALUE) {
            failures.push(s.name.clone());
        }
        worst = (worst.0.max(trace), worst.1.max(herm), worst.2.min(eig));
    }
    verdict(
        failures.is_empty(),
        format!(
            "max trace defect {:.1e}, max hermiticity defect {:.1e}, min eigenvalue {:.2e}{}",
            worst.0,
            worst.1,
            worst.2,
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", failures.join(", "))
            }
        ),
    )
}

fn fig2_bath() -> BathSpec {
    BathSpec::new(
        1.0,
        0.75,
        EnergyWavenumber(2000.0),
        Temperature::new(77.0).unwrap(),
    )
    .unwrap()
}

fn correlation() -> Verdict {
    let start = Instant::now();
    let tc = correlation_time(&fig2_bath()).unwrap().0;
    let elapsed = start.elapsed();
    verdict(
        within(tc, TAU_C_RANGE) && elapsed < TAU_C_RUNTIME,
        format!(
            "tau_c = {tc:.3} fs (want [{}, {}]), runtime {elapsed:.2?}",
            TAU_C_RANGE.0, TAU_C_RANGE.1
        ),
    )
}

fn fig2a_peaks() -> Verdict {
    let start = Instant::now();
    let files = preset_files("fig2a");
    let elapsed = start.elapsed();
    let (t, c) = coherence(&table(&files[0]));
    let n = t.iter().take_while(|&&x| x <= FIG2_WINDOW_FS).count();
    let pa = peaks_of(&t[..n], &c[..n]);
    let periods = &pa.periods;
    let increasing = periods.windows(2).all(|w| w[1] > w[0]);
    let in_range = periods.iter().all(|&p| within(p, FIG2_PERIOD_RANGE));
    let at_probe = value_at(&t, &c, FIG2_PERSISTENCE_TIME_FS);
    let persists = pa
        .peaks
        .first()
        .is_some_and(|p| at_probe > FIG2_PERSISTENCE_FRACTION * p.amplitude);
    let peak_times: Vec<String> = pa.peaks.iter().map(|p| format!("{:.0}", p.time)).collect();
    let period_list: Vec<String> = periods.iter().map(|p| format!("{p:.0}")).collect();
    verdict(
        pa.peaks.len() >= FIG2_MIN_PEAKS && increasing && in_range && persists && elapsed < FIG2_RUNTIME,
        format!(
            "peaks at [{}] fs, periods [{}] fs, |rho_HB|(400) = {at_probe:.4} vs first peak {:.4}, runtime {elapsed:.2?}",
            peak_times.join(", "),
            period_list.join(", "),
            pa.peaks.first().map_or(f64::NAN, |p| p.amplitude)
        ),
    )
}

fn temperature_ordering() -> Verdict {
    let (t77, c77) = coherence(&table(&preset_files("fig2a")[0]));
    let (t180, c180) = coherence(&table(&preset_files("fig2b")[0]));
    let a = value_at(&t77, &c77, TEMPERATURE_PROBE_FS);
    let b = value_at(&t180, &c180, TEMPERATURE_PROBE_FS);
    verdict(
        b < a,
        format!("|rho_HB|(400 fs): 180 K = {b:.4}, 77 K = {a:.4}"),
    )
}

fn coherence_of(traj: &Trajectory) -> Vec<f64> {
    traj.coherence_abs()
}

fn spectral_families() -> Verdict {
    let ohmic = coherence(&table(&preset_files("fig2a")[0])).1;
    let sub = coherence(&table(&preset_files("fig3a_subohmic")[0])).1;
    let sup = coherence(&table(&preset_files("fig3a_superohmic")[0])).1;
    let d_sub = relative_sup(&sub, &ohmic);
    let d_sup = relative_sup(&sup, &ohmic);

    let base = only_scenario("fig2a");
    let same_xi: Vec<Vec<f64>> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&s| {
            let mut sc = base.clone();
            sc.bath.s = s;
            sc.bath.xi = FAMILY_SHARED_XI;
            coherence_of(&simulate(&sc).unwrap())
        })
        .collect();
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let d_pairs: Vec<f64> = pairs
        .iter()
        .map(|&(i, j)| relative_sup(&same_xi[i], &same_xi[j]))
        .collect();

    let similar = d_sub < FAMILY_SAME_SUP && d_sup < FAMILY_SAME_SUP;
    let different = d_pairs.iter().all(|&d| d > FAMILY_DIFFERENT_SUP);
    verdict(
        similar && different,
        format!(
            "tuned xi vs Ohmic: sub {:.1}%, super {:.1}% (want < 15%); xi = 0.75 pairs sub/ohm {:.1}%, sub/super {:.1}%, ohm/super {:.1}% (want > 15%)",
            100.0 * d_sub,
            100.0 * d_sup,
            100.0 * d_pairs[0],
            100.0 * d_pairs[1],
            100.0 * d_pairs[2]
        ),
    )
}

fn markov_contrast() -> Verdict {
    let files = preset_files("fig3b_markov");
    let full = table(&files[0]).column("re_rho_HB").unwrap();
    let markov = table(&files[1]).column("re_rho_HB").unwrap();
    let rms = (full
        .iter()
        .zip(&markov)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        / full.len() as f64)
        .sqrt();
    verdict(
        rms > MARKOV_RMS,
        format!("RMS(Re rho_HB) = {rms:.4} (want > {MARKOV_RMS})"),
    )
}

fn convergence() -> Verdict {
    let base = only_scenario("fig2a");
    let reference = coherence_of(&simulate(&base).unwrap());

    let half_step = Scenario {
        dt: TimeFs(base.dt.0 / 2.0),
        ..base.clone()
    };
    let fine: Vec<f64> = coherence_of(&simulate(&half_step).unwrap())
        .into_iter()
        .step_by(2)
        .collect();
    let long_memory = Scenario {
        dk_max: 6,
        ..base.clone()
    };
    let long = coherence_of(&simulate(&long_memory).unwrap());

    let d_dt = relative_sup(&fine, &reference);
    let d_mem = relative_sup(&long, &reference);
    verdict(
        d_dt < CONVERGENCE_SUP && d_mem < CONVERGENCE_SUP,
        format!(
            "dt 5 -> 2.5 fs: {:.2}%, dk_max 3 -> 6: {:.2}% (want < 5%)",
            100.0 * d_dt,
            100.0 * d_mem
        ),
    )
}

fn first_periods(preset: &str) -> Vec<Option<f64>> {
    preset_files(preset)
        .iter()
        .map(|r| {
            let (t, c) = coherence(&table(r));
            peaks_of(&t, &c).periods.first().copied()
        })
        .collect()
}

fn show(periods: &[Option<f64>]) -> String {
    let parts: Vec<String> = periods
        .iter()
        .map(|p| p.map_or("none".to_string(), |v| format!("{v:.0}")))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn sweeps() -> Verdict {
    let split = first_periods("fig4_splitting");
    let kappa = first_periods("fig6_kappa");
    let ordered = |p: &[Option<f64>], ascending: bool| {
        p.iter().all(Option::is_some)
            && p.windows(2).all(|w| {
                let (a, b) = (w[0].unwrap(), w[1].unwrap());
                if ascending {
                    a < b
                } else {
                    a > b
                }
            })
    };
    verdict(
        ordered(&split, true) && ordered(&kappa, false),
        format!(
            "first period vs splitting 108/118/158: {} fs (want increasing); vs kappa0 170/210/250: {} fs (want decreasing)",
            show(&split),
            show(&kappa)
        ),
    )
}

fn dipole() -> Verdict {
    let est = estimate_kappa0(&DipoleEstimateInputs::reaction_center()).unwrap();
    let k = est.kappa0.0;
    verdict(
        within(k, KAPPA0_RANGE) && within(est.mu_debye, MU_RANGE),
        format!("kappa0 = {k:.1} cm-1, mu = {:.3} D", est.mu_debye),
    )
}

fn run_all_presets(dir: &Path) {
    let pool = pool();
    for p in PRESETS {
        run(&p.config(), &dir.join(p.name), &pool).expect("preset runs");
    }
}

fn files_under(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(files_under(&path));
        } else {
            out.push((
                path.strip_prefix(dir)
                    .unwrap_or(&path)
                    .display()
                    .to_string(),
                std::fs::read(&path).unwrap(),
            ));
        }
    }
    out.sort();
    out
}

fn determinism() -> Verdict {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_all_presets(a.path());
    run_all_presets(b.path());
    let fa = files_under(a.path());
    let fb = files_under(b.path());
    let differing: Vec<_> = fa
        .iter()
        .zip(&fb)
        .filter(|(x, y)| x != y)
        .map(|(x, _)| x.0.clone())
        .collect();
    verdict(
        fa.len() == fb.len() && differing.is_empty(),
        format!("{} files compared, {} differ", fa.len(), differing.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("zero-coupling oracle", zero_coupling),
        ("invariant suite", invariants),
        ("correlation time", correlation),
        ("fig2a peak structure", fig2a_peaks),
        ("temperature ordering", temperature_ordering),
        ("spectral-family equivalence", spectral_families),
        ("markov contrast", markov_contrast),
        ("convergence", convergence),
        ("sweep monotonicity", sweeps),
        ("dipole estimate", dipole),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
