//! Plain-text run configuration.
//!
//! A file is a sequence of jobs. Each job opens with a `[scenario]`,
//! `[response]` or `[dipole]` header; the `[system]`, `[bath]` and `[sweep]`
//! sections that follow belong to the most recent job. Every physical value
//! carries its unit, and a missing or wrong unit is an error:
//!
//! ```text
//! [scenario]
//! name = fig2a
//! solver = quapi
//! dt = 5 fs
//! t_end = 600 fs
//! dk_max = 3
//!
//! [system]
//! eps0 = 10570 cm-1
//! eps_h = 12108 cm-1
//! eps_b = 12000 cm-1
//! j0 = 20 cm-1
//! kappa0 = 210 cm-1
//! gamma1 = 3e-6 fs-2
//! gamma2 = 3e-6 fs-2
//! t1 = 30 fs
//!
//! [bath]
//! s = 1
//! xi = 0.75
//! omega_c = 2000 cm-1
//! temperature = 77 K
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Display, Write as _};
use std::str::FromStr;

use spinboson_core::{
    BareParameters, BathSpec, DipoleEstimateInputs, EnergyWavenumber, SystemHamiltonian,
    Temperature, TimeFs,
};

use crate::error::{CliError, Result};

pub const DEFAULT_DT: TimeFs = TimeFs(5.0);
pub const DEFAULT_T_END: TimeFs = TimeFs(600.0);
pub const DEFAULT_DK_MAX: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Quapi,
    Markov,
    Unitary,
}

impl Solver {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Quapi => "quapi",
            Self::Markov => "markov",
            Self::Unitary => "unitary",
        }
    }
}

impl FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "quapi" => Ok(Self::Quapi),
            "markov" => Ok(Self::Markov),
            "unitary" => Ok(Self::Unitary),
            other => Err(format!("unknown solver `{other}` (quapi, markov, unitary)")),
        }
    }
}

/// Optional columns appended after the fixed trajectory columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    /// Instantaneous bias ε(t), cm⁻¹.
    Eps,
    /// Instantaneous tunnelling Δ(t), cm⁻¹.
    Delta,
    /// Re Tr ρ − 1.
    TraceDefect,
    MinEigenvalue,
}

impl Observable {
    pub const ALL: [Observable; 4] = [
        Self::Eps,
        Self::Delta,
        Self::TraceDefect,
        Self::MinEigenvalue,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Eps => "eps_cm1",
            Self::Delta => "delta_cm1",
            Self::TraceDefect => "trace_defect",
            Self::MinEigenvalue => "min_eigenvalue",
        }
    }
}

impl FromStr for Observable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|o| o.as_str()).collect();
                format!("unknown output `{s}` ({})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub bare: BareParameters,
    pub bath: BathSpec,
    pub dt: TimeFs,
    pub t_end: TimeFs,
    pub dk_max: usize,
    pub solver: Solver,
    pub outputs: Vec<Observable>,
}

impl Scenario {
    pub fn n_steps(&self) -> usize {
        (self.t_end.0 / self.dt.0).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        validate_name(&self.name)?;
        let ctx = |m: String| CliError::Invalid(format!("scenario `{}`: {m}", self.name));
        if !(self.dt.0.is_finite() && self.dt.0 > 0.0) {
            return Err(ctx(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.0.is_finite() && self.t_end.0 >= self.dt.0) {
            return Err(ctx(format!(
                "t_end must be at least dt, got {}",
                self.t_end
            )));
        }
        let steps = self.t_end.0 / self.dt.0;
        if (steps - steps.round()).abs() > 1e-9 * steps {
            return Err(ctx(format!(
                "t_end = {} is not a whole number of steps of dt = {}",
                self.t_end, self.dt
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = self.outputs.iter().find(|o| !seen.insert(**o)) {
            return Err(ctx(format!("output `{}` listed twice", dup.as_str())));
        }
        // Re-validate the bath so that swept values are checked too.
        BathSpec::new(
            self.bath.s,
            self.bath.xi,
            self.bath.omega_c,
            self.bath.temperature,
        )
        .map_err(|e| ctx(e.to_string()))?;
        SystemHamiltonian::new(self.bare).map_err(|e| ctx(e.to_string()))?;
        Ok(())
    }
}

/// A scenario parameter that a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Eps0,
    EpsH,
    EpsB,
    EpsHb,
    /// ε_H − ε_B with ε_B held fixed.
    Splitting,
    J0,
    Kappa0,
    Gamma1,
    Gamma2,
    T1,
    S,
    Xi,
    OmegaC,
    Temperature,
    Dt,
    DkMax,
}

impl Axis {
    const ALL: [Axis; 16] = [
        Self::Eps0,
        Self::EpsH,
        Self::EpsB,
        Self::EpsHb,
        Self::Splitting,
        Self::J0,
        Self::Kappa0,
        Self::Gamma1,
        Self::Gamma2,
        Self::T1,
        Self::S,
        Self::Xi,
        Self::OmegaC,
        Self::Temperature,
        Self::Dt,
        Self::DkMax,
    ];

    pub fn path(self) -> &'static str {
        match self {
            Self::Eps0 => "system.eps0",
            Self::EpsH => "system.eps_h",
            Self::EpsB => "system.eps_b",
            Self::EpsHb => "system.eps_hb",
            Self::Splitting => "system.splitting",
            Self::J0 => "system.j0",
            Self::Kappa0 => "system.kappa0",
            Self::Gamma1 => "system.gamma1",
            Self::Gamma2 => "system.gamma2",
            Self::T1 => "system.t1",
            Self::S => "bath.s",
            Self::Xi => "bath.xi",
            Self::OmegaC => "bath.omega_c",
            Self::Temperature => "bath.temperature",
            Self::Dt => "scenario.dt",
            Self::DkMax => "scenario.dk_max",
        }
    }

    pub fn unit(self) -> Unit {
        match self {
            Self::Eps0
            | Self::EpsH
            | Self::EpsB
            | Self::EpsHb
            | Self::Splitting
            | Self::J0
            | Self::Kappa0
            | Self::OmegaC => Unit::Wavenumber,
            Self::Gamma1 | Self::Gamma2 => Unit::PerFsSquared,
            Self::T1 | Self::Dt => Unit::Femtosecond,
            Self::Temperature => Unit::Kelvin,
            Self::S | Self::Xi | Self::DkMax => Unit::None,
        }
    }

    /// Returns `base` with this parameter set to `v`. Validation is left to
    /// [`Scenario::validate`].
    pub fn apply(self, base: &Scenario, v: f64) -> Result<Scenario> {
        let mut s = base.clone();
        let b = &mut s.bare;
        match self {
            Self::Eps0 => b.eps0 = EnergyWavenumber(v),
            Self::EpsH => b.eps_h = EnergyWavenumber(v),
            Self::EpsB => b.eps_b = EnergyWavenumber(v),
            Self::EpsHb => b.eps_hb = EnergyWavenumber(v),
            Self::Splitting => b.eps_h = EnergyWavenumber(b.eps_b.0 + v),
            Self::J0 => b.j0 = EnergyWavenumber(v),
            Self::Kappa0 => b.kappa0 = EnergyWavenumber(v),
            Self::Gamma1 => b.gamma1 = v,
            Self::Gamma2 => b.gamma2 = v,
            Self::T1 => b.t1 = TimeFs(v),
            Self::S => s.bath.s = v,
            Self::Xi => s.bath.xi = v,
            Self::OmegaC => s.bath.omega_c = EnergyWavenumber(v),
            Self::Temperature => {
                s.bath.temperature = Temperature::new(v)
                    .map_err(|e| CliError::Invalid(format!("sweep of `{}`: {e}", base.name)))?
            }
            Self::Dt => s.dt = TimeFs(v),
            Self::DkMax => {
                if !(v >= 0.0 && v.fract() == 0.0) {
                    return Err(CliError::Invalid(format!(
                        "sweep of `{}`: dk_max must be a non-negative integer, got {v}",
                        base.name
                    )));
                }
                s.dk_max = v as usize
            }
        }
        Ok(s)
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|a| a.path() == s)
            .ok_or_else(|| format!("unknown sweep axis `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Scenario,
    pub axis: Axis,
    pub values: Vec<f64>,
}

impl SweepSpec {
    /// One scenario per value, named `<base>_<value>`.
    pub fn points(&self) -> Result<Vec<Scenario>> {
        self.values
            .iter()
            .map(|&v| {
                let mut s = self.axis.apply(&self.base, v)?;
                s.name = format!("{}_{}", self.base.name, fmt_num(v));
                s.validate()?;
                Ok(s)
            })
            .collect()
    }
}

/// Tabulates the bath response function C(t).
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseTable {
    pub name: String,
    pub bath: BathSpec,
    pub dt: TimeFs,
    pub t_end: TimeFs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DipoleJob {
    pub name: String,
    pub inputs: DipoleEstimateInputs,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Scenario(Scenario),
    Sweep(SweepSpec),
    Response(ResponseTable),
    Dipole(DipoleJob),
}

impl Job {
    pub fn name(&self) -> &str {
        match self {
            Self::Scenario(s) => &s.name,
            Self::Sweep(s) => &s.base.name,
            Self::Response(r) => &r.name,
            Self::Dipole(d) => &d.name,
        }
    }

    /// Names of the files-to-be, after sweep expansion.
    fn output_names(&self) -> Result<Vec<String>> {
        Ok(match self {
            Self::Sweep(s) => s.points()?.into_iter().map(|p| p.name).collect(),
            other => vec![other.name().to_string()],
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub jobs: Vec<Job>,
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for job in &self.jobs {
            match job {
                Job::Scenario(s) => s.validate()?,
                Job::Sweep(s) => s.base.validate()?,
                Job::Response(r) => {
                    validate_name(&r.name)?;
                    if !(r.dt.0 > 0.0 && r.t_end.0 >= 0.0) {
                        return Err(CliError::Invalid(format!(
                            "response `{}`: dt must be positive and t_end non-negative",
                            r.name
                        )));
                    }
                }
                Job::Dipole(d) => validate_name(&d.name)?,
            }
            for name in job.output_names()? {
                if !seen.insert(name.clone()) {
                    return Err(CliError::Invalid(format!(
                        "duplicate scenario name `{name}`"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn validate_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !name.starts_with('.');
    if ok {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "name `{name}` must be non-empty and use only letters, digits, `_`, `-`, `.`"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    None,
    Wavenumber,
    Femtosecond,
    PerFsSquared,
    Kelvin,
    DebyeSquared,
    Nanometre,
    JoulePerCm2,
}

impl Unit {
    pub fn suffix(self) -> &'static str {
        match self {
            Self::None => "",
            Self::Wavenumber => "cm-1",
            Self::Femtosecond => "fs",
            Self::PerFsSquared => "fs-2",
            Self::Kelvin => "K",
            Self::DebyeSquared => "D2",
            Self::Nanometre => "nm",
            Self::JoulePerCm2 => "J/cm2",
        }
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e7).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn fmt_quantity(v: f64, unit: Unit) -> String {
    match unit {
        Unit::None => fmt_num(v),
        u => format!("{} {}", fmt_num(v), u.suffix()),
    }
}

fn parse_quantity(raw: &str, unit: Unit) -> std::result::Result<f64, String> {
    let mut parts = raw.split_whitespace();
    let number = parts.next().ok_or("missing value")?;
    let suffix = parts.next();
    if let Some(extra) = parts.next() {
        return Err(format!("unexpected `{extra}`"));
    }
    let value: f64 = number
        .parse()
        .map_err(|_| format!("`{number}` is not a number"))?;
    if !value.is_finite() {
        return Err(format!("`{number}` is not finite"));
    }
    match (unit, suffix) {
        (Unit::None, None) => Ok(value),
        (Unit::None, Some(s)) => Err(format!("dimensionless value takes no unit, got `{s}`")),
        (u, None) => Err(format!("missing unit, expected `{}`", u.suffix())),
        (u, Some(s)) if s == u.suffix() => Ok(value),
        (u, Some(s)) => Err(format!("wrong unit `{s}`, expected `{}`", u.suffix())),
    }
}

struct Entry {
    value: String,
    line: usize,
}

struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<String, Entry>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<Entry> {
        self.take(key).ok_or_else(|| {
            CliError::parse(self.line, format!("[{}] is missing `{key}`", self.name))
        })
    }

    fn quantity(&mut self, key: &str, unit: Unit) -> Result<f64> {
        let e = self.require(key)?;
        parse_quantity(&e.value, unit).map_err(|m| CliError::parse(e.line, format!("`{key}`: {m}")))
    }

    fn quantity_or(&mut self, key: &str, unit: Unit, default: f64) -> Result<f64> {
        match self.take(key) {
            None => Ok(default),
            Some(e) => parse_quantity(&e.value, unit)
                .map_err(|m| CliError::parse(e.line, format!("`{key}`: {m}"))),
        }
    }

    fn parsed_or<T: FromStr<Err = String>>(&mut self, key: &str, default: T) -> Result<T> {
        match self.take(key) {
            None => Ok(default),
            Some(e) => e
                .value
                .parse()
                .map_err(|m| CliError::parse(e.line, format!("`{key}`: {m}"))),
        }
    }

    fn finish(self) -> Result<()> {
        match self.entries.into_iter().next() {
            None => Ok(()),
            Some((key, e)) => Err(CliError::parse(
                e.line,
                format!("unknown key `{key}` in [{}]", self.name),
            )),
        }
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| CliError::parse(line, "unterminated section header"))?
                .trim();
            sections.push(Section {
                name: name.to_string(),
                line,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::parse(line, "expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim();
        let section = sections
            .last_mut()
            .ok_or_else(|| CliError::parse(line, "entry before any section header"))?;
        if key.is_empty() {
            return Err(CliError::parse(line, "empty key"));
        }
        let previous = section.entries.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                line,
            },
        );
        if previous.is_some() {
            return Err(CliError::parse(line, format!("duplicate key `{key}`")));
        }
    }
    Ok(sections)
}

fn parse_system(mut sec: Section) -> Result<BareParameters> {
    let w = Unit::Wavenumber;
    let bare = BareParameters {
        eps0: EnergyWavenumber(sec.quantity("eps0", w)?),
        eps_h: EnergyWavenumber(sec.quantity("eps_h", w)?),
        eps_b: EnergyWavenumber(sec.quantity("eps_b", w)?),
        eps_hb: EnergyWavenumber(sec.quantity_or("eps_hb", w, 0.0)?),
        j0: EnergyWavenumber(sec.quantity("j0", w)?),
        kappa0: EnergyWavenumber(sec.quantity("kappa0", w)?),
        gamma1: sec.quantity("gamma1", Unit::PerFsSquared)?,
        gamma2: sec.quantity("gamma2", Unit::PerFsSquared)?,
        t1: TimeFs(sec.quantity("t1", Unit::Femtosecond)?),
    };
    sec.finish()?;
    Ok(bare)
}

fn parse_bath(mut sec: Section) -> Result<BathSpec> {
    let line = sec.line;
    let s = sec.quantity("s", Unit::None)?;
    let xi = sec.quantity("xi", Unit::None)?;
    let wc = sec.quantity("omega_c", Unit::Wavenumber)?;
    let t = sec.quantity("temperature", Unit::Kelvin)?;
    sec.finish()?;
    let temperature = Temperature::new(t).map_err(|e| CliError::parse(line, e.to_string()))?;
    BathSpec::new(s, xi, EnergyWavenumber(wc), temperature)
        .map_err(|e| CliError::parse(line, e.to_string()))
}

fn parse_list<T>(
    e: &Entry,
    key: &str,
    item: impl Fn(&str) -> std::result::Result<T, String>,
) -> Result<Vec<T>> {
    e.value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(s).map_err(|m| CliError::parse(e.line, format!("`{key}`: {m}"))))
        .collect()
}

fn parse_name(sec: &mut Section) -> Result<String> {
    let e = sec.require("name")?;
    validate_name(&e.value).map_err(|err| CliError::parse(e.line, err.to_string()))?;
    Ok(e.value)
}

fn parse_scenario(mut head: Section, parts: Vec<Section>) -> Result<Job> {
    let name = parse_name(&mut head)?;
    let solver = head.parsed_or("solver", Solver::Quapi)?;
    let dt = head.quantity_or("dt", Unit::Femtosecond, DEFAULT_DT.0)?;
    let t_end = head.quantity_or("t_end", Unit::Femtosecond, DEFAULT_T_END.0)?;
    let dk_max = match head.take("dk_max") {
        None => DEFAULT_DK_MAX,
        Some(e) => e.value.parse().map_err(|_| {
            CliError::parse(
                e.line,
                format!("`dk_max`: `{}` is not a non-negative integer", e.value),
            )
        })?,
    };
    let outputs = match head.take("outputs") {
        None => Vec::new(),
        Some(e) => parse_list(&e, "outputs", |s| s.parse())?,
    };
    let head_line = head.line;
    head.finish()?;

    let mut bare = None;
    let mut bath = None;
    let mut sweep = None;
    for sec in parts {
        let line = sec.line;
        let dup =
            |what: &str| CliError::parse(line, format!("second [{what}] in scenario `{name}`"));
        match sec.name.as_str() {
            "system" if bare.is_none() => bare = Some(parse_system(sec)?),
            "bath" if bath.is_none() => bath = Some(parse_bath(sec)?),
            "sweep" if sweep.is_none() => sweep = Some(sec),
            other @ ("system" | "bath" | "sweep") => return Err(dup(other)),
            other => {
                return Err(CliError::parse(
                    line,
                    format!("[{other}] cannot follow [scenario]"),
                ))
            }
        }
    }
    let missing =
        |what: &str| CliError::parse(head_line, format!("scenario `{name}` has no [{what}]"));
    let scenario = Scenario {
        name: name.clone(),
        bare: bare.ok_or_else(|| missing("system"))?,
        bath: bath.ok_or_else(|| missing("bath"))?,
        dt: TimeFs(dt),
        t_end: TimeFs(t_end),
        dk_max,
        solver,
        outputs,
    };
    let Some(mut sec) = sweep else {
        return Ok(Job::Scenario(scenario));
    };
    let axis_entry = sec.require("axis")?;
    let axis: Axis = axis_entry
        .value
        .parse()
        .map_err(|m: String| CliError::parse(axis_entry.line, m))?;
    let values_entry = sec.require("values")?;
    let values = parse_list(&values_entry, "values", |s| parse_quantity(s, axis.unit()))?;
    sec.finish()?;
    Ok(Job::Sweep(SweepSpec {
        base: scenario,
        axis,
        values,
    }))
}

fn parse_response(mut head: Section, parts: Vec<Section>) -> Result<Job> {
    let name = parse_name(&mut head)?;
    let dt = head.quantity_or("dt", Unit::Femtosecond, 0.5)?;
    let t_end = head.quantity_or("t_end", Unit::Femtosecond, 100.0)?;
    let line = head.line;
    head.finish()?;
    let mut bath = None;
    for sec in parts {
        match sec.name.as_str() {
            "bath" if bath.is_none() => bath = Some(parse_bath(sec)?),
            other => {
                return Err(CliError::parse(
                    sec.line,
                    format!("[{other}] cannot follow [response]"),
                ))
            }
        }
    }
    Ok(Job::Response(ResponseTable {
        bath: bath
            .ok_or_else(|| CliError::parse(line, format!("response `{name}` has no [bath]")))?,
        name,
        dt: TimeFs(dt),
        t_end: TimeFs(t_end),
    }))
}

fn parse_dipole(mut head: Section, parts: Vec<Section>) -> Result<Job> {
    let name = parse_name(&mut head)?;
    let inputs = DipoleEstimateInputs {
        refractive_index: head.quantity("refractive_index", Unit::None)?,
        eps_ratio: head.quantity("eps_ratio", Unit::None)?,
        delta_ratio: head.quantity("delta_ratio", Unit::None)?,
        d_b: head.quantity("d_b", Unit::DebyeSquared)?,
        lambda_h_nm: head.quantity("lambda_h", Unit::Nanometre)?,
        lambda_b_nm: head.quantity("lambda_b", Unit::Nanometre)?,
        fluence: head.quantity("fluence", Unit::JoulePerCm2)?,
        duration_fs: head.quantity("duration", Unit::Femtosecond)?,
    };
    head.finish()?;
    if let Some(sec) = parts.into_iter().next() {
        return Err(CliError::parse(
            sec.line,
            format!("[{}] cannot follow [dipole]", sec.name),
        ));
    }
    Ok(Job::Dipole(DipoleJob { name, inputs }))
}

impl FromStr for Config {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self> {
        let mut groups: Vec<(Section, Vec<Section>)> = Vec::new();
        for sec in split_sections(text)? {
            match sec.name.as_str() {
                "scenario" | "response" | "dipole" => groups.push((sec, Vec::new())),
                "system" | "bath" | "sweep" => match groups.last_mut() {
                    Some((_, parts)) => parts.push(sec),
                    None => {
                        return Err(CliError::parse(
                            sec.line,
                            format!("[{}] before any [scenario]", sec.name),
                        ))
                    }
                },
                other => {
                    return Err(CliError::parse(
                        sec.line,
                        format!("unknown section [{other}]"),
                    ))
                }
            }
        }
        let jobs = groups
            .into_iter()
            .map(|(head, parts)| match head.name.as_str() {
                "scenario" => parse_scenario(head, parts),
                "response" => parse_response(head, parts),
                _ => parse_dipole(head, parts),
            })
            .collect::<Result<Vec<_>>>()?;
        let config = Config { jobs };
        config.validate()?;
        Ok(config)
    }
}

fn write_bath(out: &mut String, b: &BathSpec) {
    let _ = writeln!(out, "\n[bath]");
    let _ = writeln!(out, "s = {}", fmt_num(b.s));
    let _ = writeln!(out, "xi = {}", fmt_num(b.xi));
    let _ = writeln!(
        out,
        "omega_c = {}",
        fmt_quantity(b.omega_c.0, Unit::Wavenumber)
    );
    let _ = writeln!(
        out,
        "temperature = {}",
        fmt_quantity(b.temperature.kelvin(), Unit::Kelvin)
    );
}

fn write_scenario(out: &mut String, s: &Scenario) {
    let w = Unit::Wavenumber;
    let _ = writeln!(out, "[scenario]");
    let _ = writeln!(out, "name = {}", s.name);
    let _ = writeln!(out, "solver = {}", s.solver.as_str());
    let _ = writeln!(out, "dt = {}", fmt_quantity(s.dt.0, Unit::Femtosecond));
    let _ = writeln!(
        out,
        "t_end = {}",
        fmt_quantity(s.t_end.0, Unit::Femtosecond)
    );
    let _ = writeln!(out, "dk_max = {}", s.dk_max);
    if !s.outputs.is_empty() {
        let names: Vec<_> = s.outputs.iter().map(|o| o.as_str()).collect();
        let _ = writeln!(out, "outputs = {}", names.join(", "));
    }
    let b = &s.bare;
    let _ = writeln!(out, "\n[system]");
    let _ = writeln!(out, "eps0 = {}", fmt_quantity(b.eps0.0, w));
    let _ = writeln!(out, "eps_h = {}", fmt_quantity(b.eps_h.0, w));
    let _ = writeln!(out, "eps_b = {}", fmt_quantity(b.eps_b.0, w));
    let _ = writeln!(out, "eps_hb = {}", fmt_quantity(b.eps_hb.0, w));
    let _ = writeln!(out, "j0 = {}", fmt_quantity(b.j0.0, w));
    let _ = writeln!(out, "kappa0 = {}", fmt_quantity(b.kappa0.0, w));
    let _ = writeln!(
        out,
        "gamma1 = {}",
        fmt_quantity(b.gamma1, Unit::PerFsSquared)
    );
    let _ = writeln!(
        out,
        "gamma2 = {}",
        fmt_quantity(b.gamma2, Unit::PerFsSquared)
    );
    let _ = writeln!(out, "t1 = {}", fmt_quantity(b.t1.0, Unit::Femtosecond));
    write_bath(out, &s.bath);
}

impl Display for Job {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        match self {
            Job::Scenario(s) => write_scenario(&mut out, s),
            Job::Sweep(sw) => {
                write_scenario(&mut out, &sw.base);
                let values: Vec<_> = sw
                    .values
                    .iter()
                    .map(|&v| fmt_quantity(v, sw.axis.unit()))
                    .collect();
                let _ = writeln!(out, "\n[sweep]");
                let _ = writeln!(out, "axis = {}", sw.axis.path());
                let _ = writeln!(out, "values = {}", values.join(", "));
            }
            Job::Response(r) => {
                let _ = writeln!(out, "[response]");
                let _ = writeln!(out, "name = {}", r.name);
                let _ = writeln!(out, "dt = {}", fmt_quantity(r.dt.0, Unit::Femtosecond));
                let _ = writeln!(
                    out,
                    "t_end = {}",
                    fmt_quantity(r.t_end.0, Unit::Femtosecond)
                );
                write_bath(&mut out, &r.bath);
            }
            Job::Dipole(d) => {
                let i = &d.inputs;
                let _ = writeln!(out, "[dipole]");
                let _ = writeln!(out, "name = {}", d.name);
                let _ = writeln!(out, "refractive_index = {}", fmt_num(i.refractive_index));
                let _ = writeln!(out, "eps_ratio = {}", fmt_num(i.eps_ratio));
                let _ = writeln!(out, "delta_ratio = {}", fmt_num(i.delta_ratio));
                let _ = writeln!(out, "d_b = {}", fmt_quantity(i.d_b, Unit::DebyeSquared));
                let _ = writeln!(
                    out,
                    "lambda_h = {}",
                    fmt_quantity(i.lambda_h_nm, Unit::Nanometre)
                );
                let _ = writeln!(
                    out,
                    "lambda_b = {}",
                    fmt_quantity(i.lambda_b_nm, Unit::Nanometre)
                );
                let _ = writeln!(
                    out,
                    "fluence = {}",
                    fmt_quantity(i.fluence, Unit::JoulePerCm2)
                );
                let _ = writeln!(
                    out,
                    "duration = {}",
                    fmt_quantity(i.duration_fs, Unit::Femtosecond)
                );
            }
        }
        f.write_str(&out)
    }
}

impl Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, job) in self.jobs.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{job}")?;
        }
        Ok(())
    }
}
