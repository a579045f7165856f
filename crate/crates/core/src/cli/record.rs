//! One row of output and the computation that fills it.

use serde::{Deserialize, Serialize};

use super::config::{ConfigError, Method, Mode, RunConfig};
use crate::classical::{HomogeneousBasis, ParticularSolution};
use crate::mathieu::{mathieu_phase_numeric, mathieu_phase_perturbative, mathieu_phase_series, MathieuParams, MAX_ORDER};
use crate::phase::{
    choose_period, closed_form_full, closed_form_special_rep, decomposition, dynamical_phase,
    dynamical_phase_quadrature, geometric_phase_integral, half_period_phase, ClosedForm, DynamicalMethod,
};
use crate::phase::reduce_angle;
use crate::wavefunction::Representation;
use crate::Error;

/// Outcome of a run. Everything except `Invalid` exits 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    PhaseUndefined,
    Resonance,
    NoPeriodicEnvelope,
    NumericalFailure,
    /// Only produced for sweep points; a single run reports a config error instead.
    Invalid,
}

/// Flat result row. The field order is the CSV column order.
///
/// Floating-point values are rounded to 12 significant digits. Angles are
/// radians; `*_mod_2pi` columns lie in `(-pi, pi]`. Missing values are `null`
/// in JSON and empty in CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub mode: Mode,
    pub status: Status,
    pub message: Option<String>,
    /// `+`-joined tags of the methods that produced a value.
    pub methods: String,
    #[serde(rename = "C")]
    pub c: f64,
    pub beta: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub phi: f64,
    pub n: usize,
    #[serde(rename = "M")]
    pub mass: f64,
    #[serde(rename = "w")]
    pub freq: f64,
    pub hbar: f64,
    pub half_period: bool,
    pub w_f: Option<f64>,
    pub a: Option<f64>,
    pub eps: Option<f64>,
    pub period: Option<f64>,
    pub geometric: Option<f64>,
    pub geometric_mod_2pi: Option<f64>,
    pub dynamical: Option<f64>,
    pub dynamical_mod_2pi: Option<f64>,
    pub total: Option<f64>,
    pub total_mod_2pi: Option<f64>,
    pub geometric_closed_form: Option<f64>,
    pub geometric_quadrature: Option<f64>,
    pub geometric_perturbative: Option<f64>,
    pub geometric_series: Option<f64>,
    pub geometric_numeric: Option<f64>,
    pub dynamical_closed_form: Option<f64>,
    pub dynamical_quadrature: Option<f64>,
    /// `|closed_form - quadrature|` or `|perturbative - numeric|` for the geometric phase.
    pub geometric_discrepancy: Option<f64>,
    pub dynamical_discrepancy: Option<f64>,
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

impl ResultRecord {
    fn blank(config: &RunConfig, mode: Mode) -> Self {
        Self {
            mode,
            status: Status::Ok,
            message: None,
            methods: String::new(),
            c: config.c,
            beta: config.beta,
            d: config.d,
            phi: config.phi,
            n: config.n,
            mass: config.mass,
            freq: config.freq,
            hbar: config.hbar,
            half_period: config.half_period,
            w_f: config.spectrum.as_ref().map(|s| s.w_f()),
            a: config.a,
            eps: config.eps,
            period: None,
            geometric: None,
            geometric_mod_2pi: None,
            dynamical: None,
            dynamical_mod_2pi: None,
            total: None,
            total_mod_2pi: None,
            geometric_closed_form: None,
            geometric_quadrature: None,
            geometric_perturbative: None,
            geometric_series: None,
            geometric_numeric: None,
            dynamical_closed_form: None,
            dynamical_quadrature: None,
            geometric_discrepancy: None,
            dynamical_discrepancy: None,
        }
    }

    /// Record for a sweep point whose configuration was rejected.
    pub fn invalid(config: &RunConfig, message: String) -> Self {
        let mut r = Self::blank(config, config.mode);
        r.status = Status::Invalid;
        r.message = Some(message);
        r.finish()
    }

    fn fail(&mut self, err: &Error) {
        self.status = match err {
            Error::PhaseUndefined(_) => Status::PhaseUndefined,
            Error::Resonance { .. } | Error::ResonantDenominator { .. } => Status::Resonance,
            Error::NoPeriodicEnvelope(_) | Error::NonPositive { .. } => Status::NoPeriodicEnvelope,
            _ => Status::NumericalFailure,
        };
        self.message = Some(err.to_string());
    }

    /// Fills derived columns and rounds every float.
    fn finish(mut self) -> Self {
        self.geometric = self.geometric_closed_form.or(self.geometric_numeric).or(self.geometric_quadrature).or(self.geometric_perturbative);
        self.dynamical = self.dynamical_closed_form.or(self.dynamical_quadrature);
        self.total = self.geometric.zip(self.dynamical).map(|(g, d)| g + d);
        self.geometric_discrepancy = match self.mode {
            Mode::Mathieu => diff(self.geometric_perturbative, self.geometric_numeric),
            _ => diff(self.geometric_closed_form, self.geometric_quadrature),
        };
        self.dynamical_discrepancy = diff(self.dynamical_closed_form, self.dynamical_quadrature);
        self.geometric_mod_2pi = self.geometric.map(reduce_angle);
        self.dynamical_mod_2pi = self.dynamical.map(reduce_angle);
        self.total_mod_2pi = self.total.map(reduce_angle);

        let tags = [
            (self.geometric_closed_form.is_some() || self.dynamical_closed_form.is_some(), "closed_form"),
            (self.geometric_quadrature.is_some() || self.dynamical_quadrature.is_some(), "quadrature"),
            (self.geometric_perturbative.is_some() || self.geometric_series.is_some(), "perturbative"),
            (self.geometric_numeric.is_some(), "numeric"),
        ];
        self.methods = tags.iter().filter(|(on, _)| *on).map(|(_, t)| *t).collect::<Vec<_>>().join("+");

        for v in [
            &mut self.c,
            &mut self.beta,
            &mut self.d,
            &mut self.phi,
            &mut self.mass,
            &mut self.freq,
            &mut self.hbar,
        ] {
            *v = round12(*v);
        }
        for v in [
            &mut self.w_f,
            &mut self.a,
            &mut self.eps,
            &mut self.period,
            &mut self.geometric,
            &mut self.geometric_mod_2pi,
            &mut self.dynamical,
            &mut self.dynamical_mod_2pi,
            &mut self.total,
            &mut self.total_mod_2pi,
            &mut self.geometric_closed_form,
            &mut self.geometric_quadrature,
            &mut self.geometric_perturbative,
            &mut self.geometric_series,
            &mut self.geometric_numeric,
            &mut self.dynamical_closed_form,
            &mut self.dynamical_quadrature,
            &mut self.geometric_discrepancy,
            &mut self.dynamical_discrepancy,
        ] {
            *v = v.map(round12);
        }
        self
    }
}

fn diff(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    a.zip(b).map(|(a, b)| (a - b).abs())
}

/// Errors that mean the inputs themselves are unusable.
fn is_config_error(err: &Error) -> bool {
    matches!(
        err,
        Error::InvalidParameter(_)
            | Error::DegenerateBasis { .. }
            | Error::ReversedOrientation { .. }
            | Error::FictitiousSolutionPresent
            | Error::RepresentationMismatch
    )
}

/// Splits library errors into config errors and domain outcomes.
fn domain<T>(record: &mut ResultRecord, result: crate::Result<T>) -> Result<Option<T>, ConfigError> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(e) if is_config_error(&e) => Err(ConfigError::Invalid(e.to_string())),
        Err(e) => {
            if record.status == Status::Ok {
                record.fail(&e);
            }
            Ok(None)
        }
    }
}

/// Runs one phase computation (`sho`, `driven` or `mathieu` mode).
pub fn run_point(config: &RunConfig) -> Result<ResultRecord, ConfigError> {
    config.validate()?;
    match config.mode {
        Mode::Sho => run_sho(config),
        Mode::Driven => run_driven(config),
        Mode::Mathieu => run_mathieu(config),
        Mode::Verify | Mode::Sweep => Err(ConfigError::Invalid(format!("{:?} is not a single-point mode", config.mode))),
    }
}

fn wants_closed(m: Method) -> bool {
    matches!(m, Method::Closed | Method::Both)
}

fn wants_quadrature(m: Method) -> bool {
    matches!(m, Method::Quadrature | Method::Both)
}

fn run_sho(config: &RunConfig) -> Result<ResultRecord, ConfigError> {
    let params = config.params()?;
    let rep = Representation::fictitious(params, config.c, config.beta, config.d, config.phi)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let state = rep.eigenstate(config.n);
    let mut r = ResultRecord::blank(config, Mode::Sho);
    let tau0 = params.period();

    if config.half_period {
        if config.d != 0.0 {
            return Err(ConfigError::Invalid("--half-period needs D = 0".into()));
        }
        let period = tau0 / 2.0;
        r.period = Some(period);
        if wants_closed(config.method) {
            r.geometric_closed_form = domain(&mut r, half_period_phase(&rep, config.n))?;
            // With x_p = 0 the energy expectation has period tau_0 / 2.
            let full = domain(&mut r, dynamical_phase(&state, tau0, DynamicalMethod::ClosedForm))?;
            r.dynamical_closed_form = full.map(|v| v / 2.0);
        }
        if wants_quadrature(config.method) {
            r.geometric_quadrature = domain(&mut r, geometric_phase_integral(&state, period))?;
            r.dynamical_quadrature = domain(&mut r, dynamical_phase_quadrature(&state, period))?;
        }
        return Ok(r.finish());
    }

    r.period = Some(tau0);
    if wants_closed(config.method) {
        let (width, centre) = decomposition(rep.basis(), config.d, &params, config.n);
        r.geometric_closed_form = Some(width + centre);
        r.dynamical_closed_form = domain(&mut r, dynamical_phase(&state, tau0, DynamicalMethod::ClosedForm))?;
    }
    if wants_quadrature(config.method) {
        r.geometric_quadrature = domain(&mut r, geometric_phase_integral(&state, tau0))?;
        r.dynamical_quadrature = domain(&mut r, dynamical_phase_quadrature(&state, tau0))?;
    }
    Ok(r.finish())
}

fn run_driven(config: &RunConfig) -> Result<ResultRecord, ConfigError> {
    let params = config.params()?;
    let spectrum = config.load_spectrum()?;
    let mut r = ResultRecord::blank(config, Mode::Driven);
    r.w_f = Some(spectrum.w_f());
    let basis = HomogeneousBasis::new(params, config.c, config.beta).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let Some(xp) = domain(&mut r, ParticularSolution::new(params, Some(spectrum), config.d, config.phi))? else {
        return Ok(r.finish());
    };
    let rep = Representation::new(basis, xp).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let Some(choice) = domain(&mut r, choose_period(&rep))? else {
        return Ok(r.finish());
    };
    r.period = Some(choice.period);
    let state = rep.eigenstate(config.n);
    if wants_closed(config.method) {
        let closed = match choice.form {
            ClosedForm::Undriven => {
                let (width, centre) = decomposition(rep.basis(), config.d, &params, config.n);
                Ok(width + centre)
            }
            ClosedForm::Full(comm) => closed_form_full(rep.basis(), rep.particular(), comm, config.n),
            ClosedForm::SpecialRepresentation => {
                let spec = rep.particular().spectrum().expect("driven representation has a spectrum");
                closed_form_special_rep(spec, &params)
            }
        };
        r.geometric_closed_form = domain(&mut r, closed)?;
    }
    if wants_quadrature(config.method) {
        r.geometric_quadrature = domain(&mut r, geometric_phase_integral(&state, choice.period))?;
    }
    // No closed form exists for the driven dynamical phase.
    r.dynamical_quadrature = domain(&mut r, dynamical_phase_quadrature(&state, choice.period))?;
    Ok(r.finish())
}

fn run_mathieu(config: &RunConfig) -> Result<ResultRecord, ConfigError> {
    let (a, eps) = (config.a.expect("validated"), config.eps.expect("validated"));
    let mp = MathieuParams::new(a, eps, config.mass, config.hbar).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let mut r = ResultRecord::blank(config, Mode::Mathieu);
    r.period = Some(crate::mathieu::PERIOD);
    if matches!(config.method, Method::Perturbative | Method::Both) {
        r.geometric_perturbative = domain(&mut r, mathieu_phase_perturbative(&mp, config.n))?;
        r.geometric_series = domain(&mut r, mathieu_phase_series(&mp, config.n, MAX_ORDER))?;
    }
    if matches!(config.method, Method::Numeric | Method::Both) {
        r.geometric_numeric = domain(&mut r, mathieu_phase_numeric(&mp, config.n))?;
    }
    Ok(r.finish())
}
