//! Runtime verification suites: each check compares a closed form or invariant
//! against an independent numerical route and records the measured residual.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI, TAU};

use clap::ValueEnum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::{
    commensurability, DeltaVariant, ForceSpectrum, HomogeneousBasis, OscillatorParams, ParticularSolution,
    DEFAULT_COMMENSURABILITY_TOL,
};
use crate::error::{Error, Result};
use crate::mathieu::{
    mathieu_phase_numeric, mathieu_phase_perturbative, mathieu_phase_series, perturbative_residual,
    power_law_fit, shoot_periodic_envelope, stability_probe, MathieuParams, PinneyForm, Stability,
};
use crate::phase::{
    angular_distance, closed_form_full, closed_form_special_rep, closed_form_undriven, decomposition,
    dynamical_phase, ge_child_integral, geometric_phase, geometric_phase_integral, half_period_phase,
    special_representation, superposition_phase, DynamicalMethod,
};
use crate::wavefunction::{
    normalization_check, overlap, position_expectation, quasi_periodicity_check, relative_schrodinger_residual,
    Representation, Superposition,
};

/// Which group of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    #[default]
    All,
    Sho,
    Driven,
    Mathieu,
    Wavefunction,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

/// Deliberate defects for negative-control runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Flip the sign of the `1/rho^3` term of the envelope equation.
    PinneySign,
    /// Drop the kinetic term from the `delta(t)` integrand.
    CorruptedDelta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub fault: Option<Fault>,
}

/// One verified property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub bound: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(suite: Suite) -> Self {
        Self { suite, checks: Vec::new() }
    }

    /// Passes when `measured <= bound`.
    fn at_most(&mut self, name: &str, measured: Result<f64>, bound: f64) {
        self.push(name, measured, bound, |m, b| m <= b);
    }

    /// Passes when `measured >= bound`.
    fn at_least(&mut self, name: &str, measured: Result<f64>, bound: f64) {
        self.push(name, measured, bound, |m, b| m >= b);
    }

    fn push(&mut self, name: &str, measured: Result<f64>, bound: f64, ok: impl Fn(f64, f64) -> bool) {
        let check = match measured {
            Ok(m) => Check {
                suite: self.suite,
                name: name.into(),
                passed: m.is_finite() && ok(m, bound),
                measured: m,
                bound,
                detail: String::new(),
            },
            Err(e) => Check {
                suite: self.suite,
                name: name.into(),
                passed: false,
                measured: f64::NAN,
                bound,
                detail: e.to_string(),
            },
        };
        self.checks.push(check);
    }

    fn flag(&mut self, name: &str, outcome: Result<bool>, detail: &str) {
        let (passed, detail) = match outcome {
            Ok(p) => (p, detail.to_string()),
            Err(e) => (false, e.to_string()),
        };
        self.checks.push(Check {
            suite: self.suite,
            name: name.into(),
            passed,
            measured: if passed { 1.0 } else { 0.0 },
            bound: 1.0,
            detail,
        });
    }
}

/// The `(C, beta)` grid used by the undriven and Ge-Child checks.
pub fn basis_grid() -> impl Iterator<Item = (f64, f64)> {
    [0.5, 1.0, 2.0]
        .into_iter()
        .flat_map(|c| [0.0, FRAC_PI_6, -FRAC_PI_6, FRAC_PI_3, -FRAC_PI_3].into_iter().map(move |b| (c, b)))
}

/// Fixed commensurate test spectra, each with `n_max <= 3`.
pub fn sample_spectra() -> Vec<ForceSpectrum> {
    let c = Complex64::new;
    [
        (2.0, vec![c(0.0, 0.0), c(0.5, 0.0)]),
        (1.5, vec![c(0.1, 0.0), c(0.3, -0.2), c(0.0, 0.15)]),
        (2.5, vec![c(0.0, 0.0), c(-0.4, 0.1), c(0.0, 0.0), c(0.2, 0.2)]),
        (3.0, vec![c(0.2, 0.0), c(0.0, 0.7)]),
        (0.4, vec![c(0.0, 0.0), c(0.05, 0.02), c(0.03, -0.04), c(0.01, 0.0)]),
    ]
    .into_iter()
    .map(|(w_f, coefficients)| ForceSpectrum::new(w_f, coefficients).expect("valid test spectrum"))
    .collect()
}

/// Runs the requested suites.
pub fn verify(suite: Suite, options: VerifyOptions) -> Report {
    let mut checks = Vec::new();
    if suite.includes(Suite::Sho) {
        checks.extend(sho_suite());
    }
    if suite.includes(Suite::Driven) {
        checks.extend(driven_suite());
    }
    if suite.includes(Suite::Wavefunction) {
        checks.extend(wavefunction_suite(options));
    }
    if suite.includes(Suite::Mathieu) {
        checks.extend(mathieu_suite(options));
    }
    Report { checks }
}

fn unit() -> OscillatorParams {
    OscillatorParams::unit()
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0, |acc: f64, v| Ok(acc.max(v?)))
}

fn sho_suite() -> Vec<Check> {
    let mut r = Recorder::new(Suite::Sho);
    let p = unit();

    r.at_most(
        "undriven closed form vs phase integral",
        max_of(basis_grid().flat_map(|(c, beta)| {
            [0usize, 1, 4].into_iter().map(move |n| {
                let rep = Representation::fictitious(p, c, beta, 0.0, 0.0)?;
                let quad = geometric_phase_integral(&rep.eigenstate(n), TAU)?;
                Ok((quad - closed_form_undriven(rep.basis(), n)).abs())
            })
        })),
        1e-8,
    );

    let stationary = Representation::stationary(p);
    r.at_most(
        "stationary representation has zero phase",
        max_of((0..=5).map(|n| Ok(geometric_phase_integral(&stationary.eigenstate(n), TAU)?.abs()))),
        1e-10,
    );

    r.at_most(
        "decomposition sum vs phase integral",
        (|| {
            let rep = Representation::fictitious(p, 2.0, 0.0, 1.0, 0.0)?;
            let (width, centre) = decomposition(rep.basis(), 1.0, &p, 0);
            let quad = geometric_phase_integral(&rep.eigenstate(0), TAU)?;
            Ok((width - PI / 4.0).abs().max((centre - PI).abs()).max((quad - width - centre).abs()))
        })(),
        1e-8,
    );

    r.at_most(
        "Ge-Child integral vs closed form",
        max_of(basis_grid().map(|(c, beta)| {
            let basis = HomogeneousBasis::new(p, c, beta)?;
            let ccb = basis.c_cos_beta();
            let expected = (1.0 - 2.0 * ccb + c * c) * PI / (2.0 * ccb);
            Ok((ge_child_integral(&basis, &p)? - expected).abs())
        })),
        1e-8,
    );

    let reps = [(2.0, 0.0, 0.0, 0.0), (0.7, 0.4, 0.3, 1.1), (1.6, -0.9, 1.2, -0.5)];
    r.at_most(
        "geometric + dynamical = -(2n+1) pi mod 2 pi",
        max_of(reps.iter().flat_map(|&(c, beta, d, phi)| {
            [0usize, 2].into_iter().map(move |n| {
                let rep = Representation::fictitious(p, c, beta, d, phi)?;
                let s = rep.eigenstate(n);
                let total = geometric_phase_integral(&s, TAU)? + dynamical_phase(&s, TAU, DynamicalMethod::Quadrature)?;
                Ok(angular_distance(total, -((2 * n + 1) as f64) * PI))
            })
        })),
        1e-7,
    );

    r.at_most(
        "dynamical phase closed form vs nested quadrature",
        max_of(reps.iter().map(|&(c, beta, d, phi)| {
            let rep = Representation::fictitious(p, c, beta, d, phi)?;
            let s = rep.eigenstate(1);
            Ok((dynamical_phase(&s, TAU, DynamicalMethod::ClosedForm)?
                - dynamical_phase(&s, TAU, DynamicalMethod::Quadrature)?)
            .abs())
        })),
        1e-7,
    );

    r.at_most(
        "closed form is linear in n + 1/2",
        max_of(basis_grid().map(|(c, beta)| {
            let basis = HomogeneousBasis::new(p, c, beta)?;
            let unit_rate = closed_form_undriven(&basis, 0) / 0.5;
            Ok((1..6)
                .map(|n| (closed_form_undriven(&basis, n) / (n as f64 + 0.5) - unit_rate).abs())
                .fold(0.0, f64::max))
        })),
        1e-12,
    );

    r.at_most(
        "half-period phase is half the full-period phase",
        max_of(basis_grid().flat_map(|(c, beta)| {
            (0..4).map(move |n| {
                let rep = Representation::fictitious(p, c, beta, 0.0, 0.0)?;
                Ok((half_period_phase(&rep, n)? - 0.5 * closed_form_undriven(rep.basis(), n)).abs())
            })
        })),
        1e-12,
    );

    r.at_most(
        "phase integral independent of phi",
        max_of([(1.0, 0.0, 1.0), (2.0, 0.3, 0.6)].iter().map(|&(c, beta, d)| {
            let values = [0.0, 0.7, 2.1, -1.3, 3.0]
                .iter()
                .map(|&phi| {
                    let rep = Representation::fictitious(p, c, beta, d, phi)?;
                    geometric_phase_integral(&rep.eigenstate(1), TAU)
                })
                .collect::<Result<Vec<_>>>()?;
            let hi = values.iter().copied().fold(f64::MIN, f64::max);
            let lo = values.iter().copied().fold(f64::MAX, f64::min);
            Ok(hi - lo)
        })),
        1e-10,
    );

    r.at_most(
        "superposition phase of a single eigenstate matches mod 2 pi",
        max_of([(1.0, 0.0, 1.0), (2.0, 0.4, 0.5), (0.8, -0.3, 0.0)].iter().flat_map(|&(c, beta, d)| {
            [0usize, 1, 3].into_iter().map(move |m| {
                let rep = Representation::fictitious(p, c, beta, d, 0.0)?;
                let mut coefficients = vec![Complex64::new(0.0, 0.0); m + 1];
                coefficients[m] = Complex64::new(1.0, 0.0);
                let sup = Superposition::new(&rep, coefficients)?;
                let raw = superposition_phase(&sup, &p)?.raw;
                let (width, centre) = decomposition(rep.basis(), d, &p, m);
                Ok(angular_distance(raw, width + centre))
            })
        })),
        1e-10,
    );
    r.checks
}

fn driven_suite() -> Vec<Check> {
    let mut r = Recorder::new(Suite::Driven);
    let p = unit();
    let example = ForceSpectrum::new(2.0, vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)]);

    r.at_most(
        "special-representation closed form vs quadrature",
        (|| {
            let spec = example.clone()?;
            let closed = closed_form_special_rep(&spec, &p)?;
            let rep = special_representation(p, spec)?;
            let quad = geometric_phase_integral(&rep.eigenstate(0), PI)?;
            Ok((closed - 2.0 * PI / 9.0).abs().max((quad - closed).abs()))
        })(),
        1e-8,
    );

    r.at_most(
        "joint-period closed form vs quadrature (example)",
        (|| {
            let spec = example.clone()?;
            let comm = commensurability(&p, spec.w_f(), DEFAULT_COMMENSURABILITY_TOL)
                .ok_or_else(|| Error::PhaseUndefined("example drive is commensurate".into()))?;
            let xp = ParticularSolution::new(p, Some(spec), 0.0, 0.0)?;
            let rep = Representation::new(HomogeneousBasis::stationary(p), xp)?;
            let closed = closed_form_full(rep.basis(), rep.particular(), comm, 0)?;
            let quad = geometric_phase_integral(&rep.eigenstate(0), comm.joint_period(&p))?;
            Ok((closed - 4.0 * PI / 9.0).abs().max((quad - closed).abs()))
        })(),
        1e-8,
    );

    r.at_most(
        "joint-period closed form vs quadrature (sample spectra)",
        max_of(sample_spectra().into_iter().enumerate().map(|(i, spec)| {
            let (c, beta, d, phi) = [(1.3, 0.2, 0.0, 0.0), (0.8, -0.5, 0.4, 1.0), (2.0, 0.9, 0.1, -2.0)][i % 3];
            let xp = ParticularSolution::new(p, Some(spec), d, phi)?;
            let rep = Representation::new(HomogeneousBasis::new(p, c, beta)?, xp)?;
            Ok(geometric_phase(&rep.eigenstate(i % 3))?.discrepancy())
        })),
        1e-7,
    );

    r.flag(
        "incommensurate drive with D != 0 is undefined",
        (|| {
            let golden = (1.0 + 5f64.sqrt()) / 2.0;
            let xp = ParticularSolution::new(p, Some(ForceSpectrum::cosine(golden, 1, 0.4)?), 0.5, 0.0)?;
            let rep = Representation::new(HomogeneousBasis::stationary(p), xp)?;
            Ok(matches!(geometric_phase(&rep.eigenstate(0)), Err(Error::PhaseUndefined(_))))
        })(),
        "geometric_phase must return PhaseUndefined",
    );
    r.checks
}

fn wavefunction_suite(options: VerifyOptions) -> Vec<Check> {
    let mut r = Recorder::new(Suite::Wavefunction);
    let p = unit();
    let variant = match options.fault {
        Some(Fault::CorruptedDelta) => DeltaVariant::KineticDropped,
        _ => DeltaVariant::Lagrangian,
    };
    let reps = || -> Result<Vec<Representation>> {
        let driven = ParticularSolution::new(p, Some(sample_spectra()[1].clone()), 0.3, 0.5)?;
        Ok(vec![
            Representation::fictitious(p, 2.0, 0.4, 0.8, 0.3)?.with_delta_variant(variant),
            Representation::new(HomogeneousBasis::new(p, 0.7, -0.6)?, driven)?.with_delta_variant(variant),
        ])
    };
    let times = [0.0, 0.37, 1.9, 4.4];

    r.at_most(
        "normalization",
        (|| {
            max_of(reps()?.iter().flat_map(|rep| {
                times.iter().flat_map(move |&t| {
                    [0usize, 1, 4].into_iter().map(move |n| Ok((normalization_check(&rep.eigenstate(n), t)? - 1.0).abs()))
                })
            }))
        })(),
        1e-8,
    );

    r.at_most(
        "orthogonality",
        (|| {
            max_of(reps()?.iter().flat_map(|rep| {
                times.iter().flat_map(move |&t| {
                    [(0usize, 1usize), (0, 2), (1, 3), (2, 5)]
                        .into_iter()
                        .map(move |(a, b)| Ok(overlap(&rep.eigenstate(a), &rep.eigenstate(b), t)?.norm()))
                })
            }))
        })(),
        1e-8,
    );

    r.at_most(
        "<x> follows x_p",
        (|| {
            max_of(reps()?.iter().flat_map(|rep| {
                times.iter().flat_map(move |&t| {
                    [0usize, 3].into_iter().map(move |n| {
                        Ok((position_expectation(&rep.eigenstate(n), t)? - rep.particular().x(t)).abs())
                    })
                })
            }))
        })(),
        1e-8,
    );

    let points: Vec<(f64, f64)> = (0..25).map(|i| (-1.53 + 0.1234 * i as f64, 0.21 + 0.47 * i as f64)).collect();
    r.at_most(
        "Schrodinger residual relative to hbar w |psi|",
        (|| {
            max_of(reps()?.iter().flat_map(|rep| {
                points.iter().flat_map(move |&(x, t)| {
                    [0usize, 2].into_iter().map(move |n| {
                        let s = rep.eigenstate(n);
                        // Probe relative to the moving centre to stay in the bulk.
                        relative_schrodinger_residual(&s, rep.particular().x(t) + x * rep.width(t), t)
                    })
                })
            }))
        })(),
        1e-5,
    );

    r.at_least(
        "corrupted delta inflates the residual",
        (|| {
            let good = Representation::fictitious(p, 2.0, 0.4, 0.8, 0.3)?;
            let bad = good.clone().with_delta_variant(DeltaVariant::KineticDropped);
            let (x, t) = (0.3, 1.3);
            let base = relative_schrodinger_residual(&good.eigenstate(1), x, t)?;
            let corrupted = relative_schrodinger_residual(&bad.eigenstate(1), x, t)?;
            Ok(corrupted / base.max(f64::MIN_POSITIVE))
        })(),
        1e3,
    );

    r.at_most(
        "half-period quasi-periodicity factor exp(-i (n + 1/2) pi)",
        (|| {
            let rep = Representation::fictitious(p, 2.0, 0.4, 0.0, 0.0)?.with_delta_variant(variant);
            max_of((0..4).map(|n| {
                let q = quasi_periodicity_check(&rep.eigenstate(n), 0.6, 0.5 * p.period())?;
                Ok((q.factor - Complex64::from_polar(1.0, -(n as f64 + 0.5) * PI)).norm())
            }))
        })(),
        1e-6,
    );
    r.checks
}

fn mathieu_suite(options: VerifyOptions) -> Vec<Check> {
    let mut r = Recorder::new(Suite::Mathieu);
    let form = match options.fault {
        Some(Fault::PinneySign) => PinneyForm::SignFault,
        _ => PinneyForm::Standard,
    };
    let mp = |a: f64, eps: f64| MathieuParams::unit(a, eps);

    r.at_most(
        "monodromy determinant is 1",
        max_of([(1.0, 0.05), (4.0, 0.05), (2.0, 0.01), (2.0, 0.0), (9.5, 0.02), (0.3, 0.1)].iter().map(|&(a, e)| {
            Ok((stability_probe(&mp(a, e)?)?.det - 1.0).abs())
        })),
        1e-8,
    );

    r.flag(
        "stability classification",
        (|| {
            let class = |a, e| -> Result<Stability> { Ok(stability_probe(&mp(a, e)?)?.classification) };
            Ok(class(1.0, 0.05)? == Stability::Unstable
                && class(4.0, 0.05)? == Stability::Unstable
                && class(2.0, 0.01)? == Stability::Stable)
        })(),
        "(1, 0.05) and (4, 0.05) unstable, (2, 0.01) stable",
    );

    let eps = 0.01;
    let residuals = (0..=3).map(|k| perturbative_residual(&mp(2.0, eps)?, k, form)).collect::<Result<Vec<_>>>();
    r.at_most(
        "residual ratio per order, excess outside [eps/3, 3 eps]",
        residuals.clone().map(|res| {
            res.windows(2)
                .map(|w| {
                    let ratio = w[1] / w[0];
                    // Distance outside the window, in units of the window edge.
                    if ratio < eps / 3.0 {
                        (eps / 3.0) / ratio - 1.0
                    } else if ratio > 3.0 * eps {
                        ratio / (3.0 * eps) - 1.0
                    } else {
                        0.0
                    }
                })
                .fold(0.0, f64::max)
        }),
        0.0,
    );

    r.at_most(
        "residual of order k scales as eps^(k+1)",
        (|| {
            let half = (0..=3).map(|k| perturbative_residual(&mp(2.0, eps / 2.0)?, k, form)).collect::<Result<Vec<_>>>()?;
            let full = residuals.clone()?;
            Ok(full
                .iter()
                .zip(&half)
                .enumerate()
                .map(|(k, (f, h))| ((f / h) / 2f64.powi(k as i32 + 1) - 1.0).abs())
                .fold(0.0, f64::max))
        })(),
        0.15,
    );

    r.at_most(
        "shot envelope is even about pi/2",
        (|| {
            let env = shoot_periodic_envelope(&mp(2.0, eps)?)?;
            Ok((0..64)
                .map(|i| {
                    let t = 0.013 + i as f64 * 0.047;
                    (env.sample(PI - t).0 - env.sample(t).0).abs()
                })
                .fold(0.0, f64::max))
        })(),
        1e-8,
    );

    r.at_most(
        "numeric phase linear in n + 1/2",
        (|| {
            let m = mp(2.0, 0.02)?;
            let g0 = mathieu_phase_numeric(&m, 0)?;
            let g4 = mathieu_phase_numeric(&m, 4)?;
            Ok((g4 / 4.5 - g0 / 0.5).abs() / (g0 / 0.5))
        })(),
        1e-12,
    );

    let sweep = [0.005, 0.01, 0.02, 0.04];
    let gammas = sweep.iter().map(|&e| mathieu_phase_numeric(&mp(2.0, e)?, 0)).collect::<Result<Vec<_>>>();

    r.at_most(
        "numeric phase vs leading-order eps^2 law, relative",
        (|| {
            let m = mp(2.0, eps)?;
            let numeric = mathieu_phase_numeric(&m, 0)?;
            Ok((numeric / mathieu_phase_perturbative(&m, 0)? - 1.0).abs())
        })(),
        2e-3,
    );

    r.at_most(
        "numeric phase vs third-order series integral, relative",
        (|| {
            let m = mp(2.0, eps)?;
            let numeric = mathieu_phase_numeric(&m, 0)?;
            Ok((numeric / mathieu_phase_series(&m, 0, 3)? - 1.0).abs())
        })(),
        1e-5,
    );

    r.at_most(
        "eps^3 coefficient of fit over eps in {0.005, 0.01, 0.02, 0.04}, |c3/c2|",
        (|| {
            let c = power_law_fit(&sweep, &gammas.clone()?, &[2, 3, 4])?;
            Ok((c[1] / c[0]).abs())
        })(),
        0.05,
    );

    r.at_most(
        "eps^3 coefficient of a fit through eps^6 over 12 points in [0.005, 0.04], |c3/c2|",
        (|| {
            let dense: Vec<f64> = (0..12).map(|i| 0.005 * 8f64.powf(i as f64 / 11.0)).collect();
            let values = dense.iter().map(|&e| mathieu_phase_numeric(&mp(2.0, e)?, 0)).collect::<Result<Vec<_>>>()?;
            let c = power_law_fit(&dense, &values, &[2, 3, 4, 5, 6])?;
            Ok((c[1] / c[0]).abs())
        })(),
        0.05,
    );

    r.at_most(
        "phase is even in eps, relative",
        max_of([0.01, 0.03].iter().map(|&e| {
            let plus = mathieu_phase_numeric(&mp(2.0, e)?, 0)?;
            let minus = mathieu_phase_numeric(&mp(2.0, -e)?, 0)?;
            Ok((plus - minus).abs() / plus)
        })),
        1e-7,
    );
    r.checks
}
