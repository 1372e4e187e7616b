//! Harmonic bath: spectral densities, the finite-temperature response
//! function, its correlation time, and the discretized influence-functional
//! coefficients used by the path-integral propagator.
//!
//! Energies enter as wavenumbers; internally every frequency is converted to
//! rad/fs so that the response function comes out in fs⁻² and the lineshape
//! function (its double time integral) is dimensionless.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::units::{
    thermal_energy, wavenumber_to_angular_frequency, EnergyWavenumber, Temperature, TimeFs,
    RAD_PER_FS_PER_WAVENUMBER,
};

/// Frequency integrals run over [0, UPPER_CUTOFF_FACTOR·ω_c].
pub const UPPER_CUTOFF_FACTOR: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralFamily {
    SubOhmic,
    Ohmic,
    SuperOhmic,
}

/// J(ω) = (π/2) ξ ω (ω/ω_c)^(s-1) e^(-ω/ω_c) at temperature T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    pub s: f64,
    pub xi: f64,
    pub omega_c: EnergyWavenumber,
    pub temperature: Temperature,
}

impl BathSpec {
    /// `xi = 0` is accepted and describes an uncoupled system.
    pub fn new(
        s: f64,
        xi: f64,
        omega_c: EnergyWavenumber,
        temperature: Temperature,
    ) -> Result<Self> {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::Domain(format!(
                "spectral exponent s must be >= 0, got {s}"
            )));
        }
        if !(xi.is_finite() && xi >= 0.0) {
            return Err(Error::Domain(format!(
                "dissipative parameter xi must be >= 0, got {xi}"
            )));
        }
        if !(omega_c.0.is_finite() && omega_c.0 > 0.0) {
            return Err(Error::Domain(format!(
                "cutoff omega_c must be positive, got {omega_c}"
            )));
        }
        Ok(Self {
            s,
            xi,
            omega_c,
            temperature,
        })
    }

    pub fn family(&self) -> SpectralFamily {
        if self.s < 1.0 {
            SpectralFamily::SubOhmic
        } else if self.s == 1.0 {
            SpectralFamily::Ohmic
        } else {
            SpectralFamily::SuperOhmic
        }
    }

    pub fn is_uncoupled(&self) -> bool {
        self.xi == 0.0
    }
}

/// J(ω) in cm⁻¹ for ω in cm⁻¹.
pub fn spectral_density(spec: &BathSpec, omega: EnergyWavenumber) -> Result<f64> {
    let w = omega.0;
    if w.is_nan() || w < 0.0 {
        return Err(Error::Domain(format!(
            "spectral density needs omega >= 0, got {omega}"
        )));
    }
    if w == 0.0 {
        // ω^s vanishes for s > 0; s = 0 leaves the constant prefactor.
        return Ok(if spec.s == 0.0 {
            0.5 * PI * spec.xi * spec.omega_c.0
        } else {
            0.0
        });
    }
    let wc = spec.omega_c.0;
    Ok(0.5 * PI * spec.xi * w * (w / wc).powf(spec.s - 1.0) * (-w / wc).exp())
}

/// The bath model in rad/fs, shared by every frequency integral.
#[derive(Debug, Clone, Copy)]
struct Model {
    s: f64,
    xi: f64,
    wc: f64,
    beta: f64,
}

impl Model {
    fn new(spec: &BathSpec) -> Result<Self> {
        if spec.s == 0.0 && !spec.is_uncoupled() {
            return Err(Error::Domain(
                "s = 0 gives a divergent response function at finite temperature".into(),
            ));
        }
        Ok(Self {
            s: spec.s,
            xi: spec.xi,
            wc: wavenumber_to_angular_frequency(spec.omega_c),
            beta: 1.0 / wavenumber_to_angular_frequency(thermal_energy(spec.temperature)),
        })
    }

    fn j(&self, w: f64) -> f64 {
        0.5 * PI * self.xi * w * (w / self.wc).powf(self.s - 1.0) * (-w / self.wc).exp()
    }

    fn coth(&self, w: f64) -> f64 {
        1.0 / (0.5 * self.beta * w).tanh()
    }

    fn upper(&self) -> f64 {
        UPPER_CUTOFF_FACTOR * self.wc
    }

    /// (1/π) ∫₀^Ω g(ω) dω, with ω = x² on [0, ω_c] to tame the ω^(s-1)
    /// behavior of thermally weighted sub-Ohmic integrands at the origin.
    fn frequency_integral<G>(&self, t: f64, rel_tol: f64, g: G) -> Result<(Complex64, f64)>
    where
        G: Fn(f64) -> Complex64,
    {
        let opts = QuadratureOptions {
            abs_tol: 1e-300,
            rel_tol,
            max_intervals: 50_000,
        };
        let pieces = |span: f64| 4 + (span * t.abs() / PI).ceil() as usize;

        let low = integrate(
            |x: f64| g(x * x) * (2.0 * x),
            0.0,
            self.wc.sqrt(),
            pieces(self.wc),
            &opts,
        )?;
        let high = integrate(
            &g,
            self.wc,
            self.upper(),
            pieces(self.upper() - self.wc),
            &opts,
        )?;
        Ok(((low.value + high.value) / PI, (low.error + high.error) / PI))
    }

    /// C(t) in fs⁻².
    fn response(&self, t: f64, rel_tol: f64) -> Result<(Complex64, f64)> {
        self.frequency_integral(t, rel_tol, |w| {
            let (sin, cos) = (w * t).sin_cos();
            self.j(w) * Complex64::new(self.coth(w) * cos, -sin)
        })
    }

    /// g(t) = ∫₀ᵗ (t − τ) C(τ) dτ, dimensionless.
    fn lineshape(&self, t: f64, rel_tol: f64) -> Result<Complex64> {
        if t == 0.0 {
            return Ok(Complex64::default());
        }
        let (value, _) = self.frequency_integral(t, rel_tol, |w| {
            let x = w * t;
            let half = (0.5 * x).sin();
            let one_minus_cos = 2.0 * half * half;
            let weight = self.j(w) / (w * w);
            weight * Complex64::new(self.coth(w) * one_minus_cos, sin_minus_identity(x))
        })?;
        Ok(value)
    }
}

/// sin x − x without cancellation for small |x|.
fn sin_minus_identity(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        -x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    } else {
        x.sin() - x
    }
}

/// One evaluation of the response function, in cm⁻².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseSample {
    pub t: TimeFs,
    pub value: Complex64,
    pub error: f64,
}

pub const RESPONSE_REL_TOL: f64 = 1e-10;

const CM2_PER_FS2: f64 = 1.0 / (RAD_PER_FS_PER_WAVENUMBER * RAD_PER_FS_PER_WAVENUMBER);

/// C(t) = (1/π) ∫ J(ω) [coth(βω/2) cos ωt − i sin ωt] dω, reported in cm⁻².
pub fn response_function(spec: &BathSpec, t: TimeFs) -> Result<ResponseSample> {
    response_function_with_tolerance(spec, t, RESPONSE_REL_TOL)
}

pub fn response_function_with_tolerance(
    spec: &BathSpec,
    t: TimeFs,
    rel_tol: f64,
) -> Result<ResponseSample> {
    if spec.is_uncoupled() {
        return Ok(ResponseSample {
            t,
            value: Complex64::default(),
            error: 0.0,
        });
    }
    let (value, error) = Model::new(spec)?.response(t.0, rel_tol)?;
    Ok(ResponseSample {
        t,
        value: value * CM2_PER_FS2,
        error: error * CM2_PER_FS2,
    })
}

/// The dimensionless lineshape function g(t), i.e. the double time integral
/// of the response function with g(0) = g'(0) = 0. Influence coefficients
/// are second differences of g.
pub fn lineshape_function(spec: &BathSpec, t: TimeFs) -> Result<Complex64> {
    if spec.is_uncoupled() {
        return Ok(Complex64::default());
    }
    if t.0 < 0.0 {
        return Err(Error::Domain(format!("lineshape needs t >= 0, got {t}")));
    }
    Model::new(spec)?.lineshape(t.0, RESPONSE_REL_TOL)
}

/// Half width at half maximum of Re C(t), measured from t = 0.
pub fn correlation_time(spec: &BathSpec) -> Result<TimeFs> {
    if spec.is_uncoupled() {
        return Ok(TimeFs(0.0));
    }
    let model = Model::new(spec)?;
    let re = |t: f64| -> Result<f64> { Ok(model.response(t, 1e-9)?.0.re) };
    let half = 0.5 * re(0.0)?;

    let step = 0.05 / model.wc;
    let mut lo = 0.0;
    let mut hi = step;
    let mut n = 0usize;
    while re(hi)?.abs() > half {
        lo = hi;
        hi += step;
        n += 1;
        if n > 200_000 {
            return Err(Error::Domain(
                "response function does not fall to half maximum".into(),
            ));
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if re(mid)?.abs() > half {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 * hi {
            break;
        }
    }
    Ok(TimeFs(0.5 * (lo + hi)))
}

/// Which part of the time grid a path point sits on. The first and last
/// points of a propagation own half a time slice; all others own a full one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Start,
    Interior,
    End,
}

/// Influence coefficients η indexed by lag, for every combination of slice
/// widths that occurs on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceKernel {
    dt: TimeFs,
    dk_max: usize,
    bath: Option<BathSpec>,
    interior: Vec<Complex64>,
    end: Vec<Complex64>,
    start: Vec<Complex64>,
    end_start: Vec<Complex64>,
}

impl InfluenceKernel {
    /// Builds the tables from the lineshape function sampled at multiples of
    /// dt/2. `lineshape(j)` must return g(j·dt/2).
    pub fn from_lineshape<G>(dt: TimeFs, dk_max: usize, mut lineshape: G) -> Result<Self>
    where
        G: FnMut(usize) -> Result<Complex64>,
    {
        if !(dt.0.is_finite() && dt.0 > 0.0) {
            return Err(Error::Domain(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let g: Vec<Complex64> = (0..=2 * dk_max + 2)
            .map(&mut lineshape)
            .collect::<Result<_>>()?;

        let mut interior = vec![g[2]];
        let mut end = vec![g[1]];
        let mut start = vec![g[1]];
        let mut end_start = vec![Complex64::default()];
        for lag in 1..=dk_max {
            let l = 2 * lag;
            interior.push(g[l + 2] - g[l] * 2.0 + g[l - 2]);
            let half = g[l + 1] - g[l - 1] - g[l] + g[l - 2];
            end.push(half);
            start.push(half);
            end_start.push(g[l] - g[l - 1] * 2.0 + g[l - 2]);
        }
        let kernel = Self {
            dt,
            dk_max,
            bath: None,
            interior,
            end,
            start,
            end_start,
        };
        kernel.check_finite()?;
        Ok(kernel)
    }

    pub fn zero(dt: TimeFs, dk_max: usize) -> Self {
        let zeros = vec![Complex64::default(); dk_max + 1];
        Self {
            dt,
            dk_max,
            bath: None,
            interior: zeros.clone(),
            end: zeros.clone(),
            start: zeros.clone(),
            end_start: zeros,
        }
    }

    pub fn dt(&self) -> TimeFs {
        self.dt
    }

    pub fn dk_max(&self) -> usize {
        self.dk_max
    }

    pub fn bath(&self) -> Option<&BathSpec> {
        self.bath.as_ref()
    }

    /// Coefficient coupling a later path point to one `lag` steps earlier.
    pub fn eta(&self, lag: usize, later: Slot, earlier: Slot) -> Complex64 {
        assert!(
            lag <= self.dk_max,
            "lag {lag} beyond memory {}",
            self.dk_max
        );
        if lag == 0 {
            return match later {
                Slot::Interior => self.interior[0],
                Slot::Start | Slot::End => self.end[0],
            };
        }
        match (later, earlier) {
            (Slot::Interior, Slot::Interior) => self.interior[lag],
            (Slot::End, Slot::Interior) => self.end[lag],
            (Slot::Interior, Slot::Start) => self.start[lag],
            (Slot::End, Slot::Start) => self.end_start[lag],
            (later, earlier) => panic!("no coefficient for {later:?} after {earlier:?}"),
        }
    }

    /// Same kernel with memory cut to `dk_max` (must not exceed the current one).
    pub fn truncated(&self, dk_max: usize) -> Self {
        assert!(dk_max <= self.dk_max);
        let cut = |v: &Vec<Complex64>| v[..=dk_max].to_vec();
        Self {
            dt: self.dt,
            dk_max,
            bath: self.bath,
            interior: cut(&self.interior),
            end: cut(&self.end),
            start: cut(&self.start),
            end_start: cut(&self.end_start),
        }
    }

    fn check_finite(&self) -> Result<()> {
        let all = self
            .interior
            .iter()
            .chain(&self.end)
            .chain(&self.start)
            .chain(&self.end_start);
        for v in all {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Domain("influence coefficient is not finite".into()));
            }
        }
        Ok(())
    }

    /// Writes the kernel cache table: a `key = value` header followed by one
    /// CSV row per lag.
    pub fn write_table<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# influence kernel")?;
        if let Some(b) = &self.bath {
            writeln!(w, "s = {:?}", b.s)?;
            writeln!(w, "xi = {:?}", b.xi)?;
            writeln!(w, "omega_c = {:?} cm-1", b.omega_c.0)?;
            writeln!(w, "T = {:?} K", b.temperature.kelvin())?;
        }
        writeln!(w, "dt = {:?} fs", self.dt.0)?;
        writeln!(w, "dk_max = {}", self.dk_max)?;
        writeln!(w, "{KERNEL_TABLE_HEADER}")?;
        for lag in 0..=self.dk_max {
            let row = [
                self.interior[lag],
                self.end[lag],
                self.start[lag],
                self.end_start[lag],
            ];
            write!(w, "{lag}")?;
            for v in row {
                write!(w, ",{:.16e},{:.16e}", v.re, v.im)?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn read_table<R: BufRead>(r: R) -> Result<Self> {
        let bad =
            |line: usize, msg: &str| Error::Config(format!("kernel table line {line}: {msg}"));
        let mut header = std::collections::BTreeMap::new();
        let mut rows: Vec<[Complex64; 4]> = Vec::new();
        let mut in_table = false;
        for (i, line) in r.lines().enumerate() {
            let n = i + 1;
            let line = line.map_err(|e| bad(n, &e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == KERNEL_TABLE_HEADER {
                in_table = true;
                continue;
            }
            if !in_table {
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| bad(n, "expected key = value"))?;
                header.insert(k.trim().to_string(), v.trim().to_string());
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 9 {
                return Err(bad(n, "expected 9 columns"));
            }
            let lag: usize = fields[0].parse().map_err(|_| bad(n, "bad lag"))?;
            if lag != rows.len() {
                return Err(bad(n, "lags must be consecutive from 0"));
            }
            let mut vals = [0.0; 8];
            for (slot, f) in vals.iter_mut().zip(&fields[1..]) {
                *slot = f.parse().map_err(|_| bad(n, "bad number"))?;
            }
            rows.push([
                Complex64::new(vals[0], vals[1]),
                Complex64::new(vals[2], vals[3]),
                Complex64::new(vals[4], vals[5]),
                Complex64::new(vals[6], vals[7]),
            ]);
        }

        let number = |key: &str, unit: &str| -> Result<f64> {
            let raw = header
                .get(key)
                .ok_or_else(|| Error::Config(format!("kernel table missing `{key}`")))?;
            let raw = raw.strip_suffix(unit).unwrap_or(raw).trim();
            raw.parse()
                .map_err(|_| Error::Config(format!("kernel table `{key}` is not a number")))
        };
        let dt = TimeFs(number("dt", "fs")?);
        let dk_max = number("dk_max", "")? as usize;
        if rows.len() != dk_max + 1 {
            return Err(Error::Config(format!(
                "kernel table has {} rows, dk_max = {dk_max} needs {}",
                rows.len(),
                dk_max + 1
            )));
        }
        let bath = if header.contains_key("s") {
            Some(BathSpec::new(
                number("s", "")?,
                number("xi", "")?,
                EnergyWavenumber(number("omega_c", "cm-1")?),
                Temperature::new(number("T", "K")?)?,
            )?)
        } else {
            None
        };
        let column = |c: usize| rows.iter().map(|r| r[c]).collect::<Vec<_>>();
        let kernel = Self {
            dt,
            dk_max,
            bath,
            interior: column(0),
            end: column(1),
            start: column(2),
            end_start: column(3),
        };
        kernel.check_finite()?;
        Ok(kernel)
    }
}

pub const KERNEL_TABLE_HEADER: &str =
    "lag,re_eta,im_eta,re_eta_end,im_eta_end,re_eta_start,im_eta_start,re_eta_end_start,im_eta_end_start";

/// Influence coefficients for `spec` on a grid of step `dt` with memory
/// `dk_max` steps.
///
/// For slices [a, b] (later) and [c, d] (earlier) the coefficient is
/// ∫ₐᵇ dt′ ∫꜀ᵈ dt″ C(t′ − t″) = g(b−c) − g(b−d) − g(a−c) + g(a−d), and the
/// same-slice coefficient is g(b − a); all slice edges sit on multiples of
/// dt/2, so the lineshape function is only needed there.
pub fn influence_coefficients(
    spec: &BathSpec,
    dt: TimeFs,
    dk_max: usize,
) -> Result<InfluenceKernel> {
    let mut kernel = if spec.is_uncoupled() {
        InfluenceKernel::zero(dt, dk_max)
    } else {
        let model = Model::new(spec)?;
        let half = 0.5 * dt.0;
        InfluenceKernel::from_lineshape(dt, dk_max, |j| {
            model.lineshape(j as f64 * half, RESPONSE_REL_TOL)
        })?
    };
    kernel.bath = Some(*spec);
    Ok(kernel)
}
