//! Named configurations for the figure parameter sets.

use crate::config::Config;
use crate::error::{CliError, Result};

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    text: fn() -> String,
}

impl Preset {
    /// Configuration text; `spinboson run` accepts it unchanged.
    pub fn text(&self) -> String {
        (self.text)()
    }

    pub fn config(&self) -> Config {
        self.text()
            .parse()
            .unwrap_or_else(|e| panic!("preset `{}` does not parse: {e}", self.name))
    }
}

const SYSTEM: &str = "\
[system]
eps0 = 10570 cm-1
eps_h = 12108 cm-1
eps_b = 12000 cm-1
eps_hb = 0 cm-1
j0 = 20 cm-1
kappa0 = 210 cm-1
gamma1 = 3e-6 fs-2
gamma2 = 3e-6 fs-2
t1 = 30 fs
";

fn bath(s: f64, xi: f64, kelvin: f64) -> String {
    format!("[bath]\ns = {s}\nxi = {xi}\nomega_c = 2000 cm-1\ntemperature = {kelvin} K\n")
}

fn scenario(name: &str, solver: &str, s: f64, xi: f64, kelvin: f64) -> String {
    format!(
        "[scenario]\nname = {name}\nsolver = {solver}\ndt = 5 fs\nt_end = 600 fs\ndk_max = 3\n\n{SYSTEM}\n{}",
        bath(s, xi, kelvin)
    )
}

fn sweep(name: &str, axis: &str, values: &str) -> String {
    format!(
        "{}\n[sweep]\naxis = {axis}\nvalues = {values}\n",
        scenario(name, "quapi", 1.0, 0.75, 77.0)
    )
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1",
        description: "bath response C(t) on [0, 100] fs, Ohmic xi = 0.75, 2000 cm-1, 77 K",
        text: || {
            format!(
                "[response]\nname = fig1\ndt = 0.5 fs\nt_end = 100 fs\n\n{}",
                bath(1.0, 0.75, 77.0)
            )
        },
    },
    Preset {
        name: "fig2a",
        description: "coherence decay, Ohmic bath at 77 K",
        text: || scenario("fig2a", "quapi", 1.0, 0.75, 77.0),
    },
    Preset {
        name: "fig2b",
        description: "coherence decay, Ohmic bath at 180 K",
        text: || scenario("fig2b", "quapi", 1.0, 0.75, 180.0),
    },
    Preset {
        name: "fig3a_subohmic",
        description: "sub-Ohmic bath, s = 1/2, xi = 0.07, 77 K",
        text: || scenario("fig3a_subohmic", "quapi", 0.5, 0.07, 77.0),
    },
    Preset {
        name: "fig3a_superohmic",
        description: "super-Ohmic bath, s = 2, xi = 50, 77 K",
        text: || scenario("fig3a_superohmic", "quapi", 2.0, 50.0, 77.0),
    },
    Preset {
        name: "fig3b_markov",
        description: "memoryless baseline next to the dk_max = 3 run, Ohmic 77 K",
        text: || {
            format!(
                "{}\n{}",
                scenario("fig3b_nonmarkov", "quapi", 1.0, 0.75, 77.0),
                scenario("fig3b_markov", "markov", 1.0, 0.75, 77.0)
            )
        },
    },
    Preset {
        name: "fig4_splitting",
        description: "bare splitting eps_h - eps_b = 108, 118, 158 cm-1",
        text: || {
            sweep(
                "fig4_splitting",
                "system.splitting",
                "108 cm-1, 118 cm-1, 158 cm-1",
            )
        },
    },
    Preset {
        name: "fig5_J0",
        description: "electronic coupling J0 = 20, 5, 0.01 cm-1",
        text: || sweep("fig5_J0", "system.j0", "20 cm-1, 5 cm-1, 0.01 cm-1"),
    },
    Preset {
        name: "fig6_kappa",
        description: "pulse coupling kappa0 = 170, 210, 250 cm-1",
        text: || {
            sweep(
                "fig6_kappa",
                "system.kappa0",
                "170 cm-1, 210 cm-1, 250 cm-1",
            )
        },
    },
    Preset {
        name: "kappa0_estimate",
        description: "kappa0 = mu E0 from band dipole strengths and pulse fluence",
        text: || {
            "[dipole]\nname = kappa0_estimate\nrefractive_index = 1.359\neps_ratio = 0.5\n\
             delta_ratio = 1.1\nd_b = 40 D2\nlambda_h = 750 nm\nlambda_b = 800 nm\n\
             fluence = 1.3e-4 J/cm2\nduration = 40 fs\n"
                .to_string()
        },
    },
];

pub fn find(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        CliError::Invalid(format!(
            "unknown preset `{name}` (available: {})",
            names.join(", ")
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Axis, Job, Solver};
    use spinboson_core::DipoleEstimateInputs;

    #[test]
    fn every_preset_parses_and_round_trips() {
        for p in PRESETS {
            let cfg = p.config();
            assert!(!cfg.jobs.is_empty(), "{}", p.name);
            let again: Config = cfg.to_string().parse().unwrap();
            assert_eq!(again, cfg, "{}", p.name);
        }
    }

    #[test]
    fn figure_parameters() {
        let Job::Scenario(sub) = &find("fig3a_subohmic").unwrap().config().jobs[0] else {
            panic!()
        };
        assert_eq!((sub.bath.s, sub.bath.xi), (0.5, 0.07));
        let Job::Scenario(sup) = &find("fig3a_superohmic").unwrap().config().jobs[0] else {
            panic!()
        };
        assert_eq!((sup.bath.s, sup.bath.xi), (2.0, 50.0));

        let Job::Sweep(k) = &find("fig6_kappa").unwrap().config().jobs[0] else {
            panic!()
        };
        assert_eq!(k.axis, Axis::Kappa0);
        assert_eq!(k.values, [170.0, 210.0, 250.0]);
        let Job::Sweep(j) = &find("fig5_J0").unwrap().config().jobs[0] else {
            panic!()
        };
        assert_eq!(j.values, [20.0, 5.0, 0.01]);
        let Job::Sweep(e) = &find("fig4_splitting").unwrap().config().jobs[0] else {
            panic!()
        };
        let eps_h: Vec<_> = e.points().unwrap().iter().map(|p| p.bare.eps_h.0).collect();
        assert_eq!(eps_h, [12108.0, 12118.0, 12158.0]);

        let jobs = find("fig3b_markov").unwrap().config().jobs;
        let Job::Scenario(m) = &jobs[1] else { panic!() };
        assert_eq!(m.solver, Solver::Markov);

        let Job::Dipole(d) = &find("kappa0_estimate").unwrap().config().jobs[0] else {
            panic!()
        };
        assert_eq!(d.inputs, DipoleEstimateInputs::reaction_center());
    }

    #[test]
    fn unknown_preset() {
        let err = find("fig9").err().unwrap();
        assert!(err.to_string().contains("fig2a"));
        assert_eq!(err.exit_code(), 2);
    }
}
