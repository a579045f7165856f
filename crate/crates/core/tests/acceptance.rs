//! Acceptance criteria 1 to 12. Prints one PASS/FAIL line per criterion.
//!
//! Criteria 9 and 10 encode claims that the computation contradicts; they are
//! evaluated at their stated tolerance and reported, but do not fail the run.
//! Any other failure exits nonzero.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use oscphase::cli::{run_point, Mode, RunConfig, Status};
use oscphase::mathieu::{
    mathieu_phase_numeric, mathieu_phase_perturbative, perturbative_residual, power_law_fit, stability_probe,
    MathieuParams, PinneyForm, Stability, MAX_ORDER,
};
use oscphase::phase::{
    angular_distance, centre_phase_integral, closed_form_full, closed_form_special_rep, closed_form_undriven,
    decomposition, dynamical_phase_quadrature, geometric_phase, geometric_phase_integral, ge_child_integral,
    half_period_phase,
};
use oscphase::wavefunction::{
    normalization_check, overlap, position_expectation, quasi_periodicity_check, relative_schrodinger_residual,
};
use oscphase::{
    commensurability, DeltaVariant, Error, ForceSpectrum, HomogeneousBasis, OscillatorParams, ParticularSolution,
    Representation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Res<T> = Result<T, Error>;

const KNOWN_UNATTAINABLE: [u32; 2] = [9, 10];

struct Outcome {
    passed: bool,
    detail: String,
}

fn unit() -> OscillatorParams {
    OscillatorParams::unit()
}

fn grid() -> Vec<(f64, f64)> {
    let mut g = Vec::new();
    for c in [0.5, 1.0, 2.0] {
        for beta in [0.0, FRAC_PI_6, -FRAC_PI_6, FRAC_PI_3, -FRAC_PI_3] {
            g.push((c, beta));
        }
    }
    g
}

/// `pi (n + 1/2) (1 - 2 C cos(beta) + C^2) / (C cos(beta))`, written out independently.
fn undriven_oracle(c: f64, beta: f64, n: usize) -> f64 {
    let ccb = c * beta.cos();
    PI * (n as f64 + 0.5) * (1.0 - 2.0 * ccb + c * c) / ccb
}

fn within(measured: f64, bound: f64) -> bool {
    measured.is_finite() && measured < bound
}

fn spectrum_example() -> Res<ForceSpectrum> {
    // f_{+1} = f_{-1} = 1/2 at w_f = 2, i.e. F(t) = cos 2t.
    ForceSpectrum::new(2.0, vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)])
}

fn c1() -> Res<Outcome> {
    let start = Instant::now();
    let p = unit();
    let mut worst: f64 = 0.0;
    for (c, beta) in grid() {
        for n in [0, 1, 4] {
            let rep = Representation::fictitious(p, c, beta, 0.0, 0.0)?;
            let quad = geometric_phase_integral(&rep.eigenstate(n), TAU)?;
            let oracle = undriven_oracle(c, beta, n);
            worst = worst.max((quad - oracle).abs()).max((closed_form_undriven(rep.basis(), n) - oracle).abs());
        }
    }
    let elapsed = start.elapsed();
    Ok(Outcome {
        passed: within(worst, 1e-8) && elapsed < Duration::from_secs(10),
        detail: format!("45 points, max |quadrature - closed form| = {worst:.2e} (< 1e-8), {:.2} s (< 10 s)", elapsed.as_secs_f64()),
    })
}

fn c2() -> Res<Outcome> {
    let rep = Representation::stationary(unit());
    let mut worst: f64 = 0.0;
    for n in 0..=5 {
        worst = worst.max(geometric_phase_integral(&rep.eigenstate(n), TAU)?.abs());
        worst = worst.max(geometric_phase(&rep.eigenstate(n))?.closed_form.abs());
    }
    Ok(Outcome { passed: within(worst, 1e-10), detail: format!("n = 0..5, max |gamma| = {worst:.2e} (< 1e-10)") })
}

fn c3() -> Res<Outcome> {
    let p = unit();
    let rep = Representation::fictitious(p, 2.0, 0.0, 1.0, 0.0)?;
    let (width, centre) = decomposition(rep.basis(), 1.0, &p, 0);
    let quad = geometric_phase_integral(&rep.eigenstate(0), TAU)?;
    let err = (width - PI / 4.0).abs().max((centre - PI).abs()).max((quad - (PI / 4.0 + PI)).abs());
    Ok(Outcome {
        passed: within(err, 1e-8),
        detail: format!("width {width:.12}, centre {centre:.12}, quadrature {quad:.12}; max error {err:.2e} (< 1e-8)"),
    })
}

fn c4() -> Res<Outcome> {
    let p = unit();
    let spec = spectrum_example()?;

    let special = closed_form_special_rep(&spec, &p)?;
    let xp = ParticularSolution::new(p, Some(spec.clone()), 0.0, 0.0)?;
    let special_quad = centre_phase_integral(&xp, spec.tau_f())?;

    let comm = commensurability(&p, spec.w_f(), 1e-12).ok_or_else(|| Error::PhaseUndefined("w_f = 2 w".into()))?;
    let rep = Representation::new(HomogeneousBasis::stationary(p), xp.clone())?;
    let full = closed_form_full(rep.basis(), &xp, comm, 0)?;
    let joint = comm.joint_period(&p);
    let full_quad = centre_phase_integral(&xp, joint)?;
    let full_eq7 = geometric_phase_integral(&rep.eigenstate(0), joint)?;

    let err = [
        (special - 2.0 * PI / 9.0).abs(),
        (special - special_quad).abs(),
        (full - 4.0 * PI / 9.0).abs(),
        (full - full_quad).abs(),
        (full - full_eq7).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(Outcome {
        passed: within(err, 1e-8),
        detail: format!(
            "tau_f form {special:.12} vs 2pi/9, quadrature {special_quad:.12}; joint-period form {full:.12} vs 4pi/9, \
             quadrature {full_quad:.12}; max error {err:.2e} (< 1e-8)"
        ),
    })
}

fn c5() -> Res<Outcome> {
    let p = unit();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let c = rng.random_range(0.5..2.0);
        let beta = rng.random_range(-1.2..1.2);
        let d = rng.random_range(-1.5..1.5);
        let phi = rng.random_range(-PI..PI);
        let n = rng.random_range(0..=4usize);
        let rep = Representation::fictitious(p, c, beta, d, phi)?;
        let s = rep.eigenstate(n);
        let total = geometric_phase_integral(&s, TAU)? + dynamical_phase_quadrature(&s, TAU)?;
        worst = worst.max(angular_distance(total, -((2 * n + 1) as f64) * PI));
    }
    Ok(Outcome {
        passed: within(worst, 1e-7),
        detail: format!("10 random representations, max distance mod 2pi = {worst:.2e} (< 1e-7)"),
    })
}

fn c6() -> Res<Outcome> {
    let p = unit();
    let mut worst: f64 = 0.0;
    for (c, beta) in grid() {
        let ccb = c * beta.cos();
        let expected = (1.0 - 2.0 * ccb + c * c) * PI / (2.0 * ccb);
        worst = worst.max((ge_child_integral(&HomogeneousBasis::new(p, c, beta)?, &p)? - expected).abs());
    }
    Ok(Outcome { passed: within(worst, 1e-8), detail: format!("15 (C, beta) points, max error {worst:.2e} (< 1e-8)") })
}

fn c7() -> Res<Outcome> {
    let p = unit();
    let mut algebraic: f64 = 0.0;
    for (c, beta) in grid() {
        let rep = Representation::fictitious(p, c, beta, 0.0, 0.0)?;
        for n in 0..6 {
            algebraic = algebraic.max((half_period_phase(&rep, n)? - 0.5 * undriven_oracle(c, beta, n)).abs());
        }
    }
    let mut factor_err: f64 = 0.0;
    for &(c, beta, t0) in &[(2.0, 0.4, 0.6), (0.7, -0.8, 2.3), (1.4, 1.0, 4.1)] {
        let rep = Representation::fictitious(p, c, beta, 0.0, 0.0)?;
        for n in 0..4 {
            let q = quasi_periodicity_check(&rep.eigenstate(n), t0, 0.5 * p.period())?;
            let expected = Complex64::from_polar(1.0, -(n as f64 + 0.5) * PI);
            factor_err = factor_err.max((q.factor - expected).norm());
        }
    }
    Ok(Outcome {
        passed: algebraic <= 1e-12 && within(factor_err, 1e-6),
        detail: format!(
            "half vs full-period phase {algebraic:.2e} (<= 1e-12); wavefunction factor vs exp(-i(n+1/2)pi) {factor_err:.2e} (< 1e-6)"
        ),
    })
}

fn c8() -> Res<Outcome> {
    let p = unit();
    let driven = ParticularSolution::new(p, Some(ForceSpectrum::cosine(1.5, 1, 0.8)?), 0.4, -0.7)?;
    let reps = [
        Representation::fictitious(p, 2.0, 0.4, 0.8, 0.3)?,
        Representation::new(HomogeneousBasis::new(p, 0.7, -0.6)?, driven)?,
    ];
    let times = [0.0, 0.37, 1.9, 4.4];
    let (mut norm, mut orth, mut mean): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for rep in &reps {
        for &t in &times {
            for n in 0..5 {
                norm = norm.max((normalization_check(&rep.eigenstate(n), t)? - 1.0).abs());
                mean = mean.max((position_expectation(&rep.eigenstate(n), t)? - rep.particular().x(t)).abs());
                for m in (n + 1)..5 {
                    orth = orth.max(overlap(&rep.eigenstate(n), &rep.eigenstate(m), t)?.norm());
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut residual: f64 = 0.0;
    for _ in 0..50 {
        let rep = &reps[rng.random_range(0..reps.len())];
        let n = rng.random_range(0..=3usize);
        let t = rng.random_range(0.0..TAU);
        let x = rep.particular().x(t) + rng.random_range(-2.0..2.0) * rep.width(t);
        residual = residual.max(relative_schrodinger_residual(&rep.eigenstate(n), x, t)?);
    }

    let good = Representation::fictitious(p, 2.0, 0.4, 0.8, 0.3)?;
    let bad = good.clone().with_delta_variant(DeltaVariant::KineticDropped);
    let (x, t) = (0.3, 1.3);
    let inflation =
        relative_schrodinger_residual(&bad.eigenstate(1), x, t)? / relative_schrodinger_residual(&good.eigenstate(1), x, t)?;

    Ok(Outcome {
        passed: within(norm, 1e-8) && within(orth, 1e-8) && within(mean, 1e-8) && residual <= 1e-5 && inflation >= 1e3,
        detail: format!(
            "normalization {norm:.2e}, orthogonality {orth:.2e}, <x> - x_p {mean:.2e} (< 1e-8); \
             Schrodinger residual / (hbar w |psi|) {residual:.2e} (<= 1e-5) at 50 points; corrupted delta x{inflation:.2e} (>= 1e3)"
        ),
    })
}

fn c9() -> Res<Outcome> {
    let start = Instant::now();
    let target = 8.8858e-4;
    let mp = MathieuParams::unit(2.0, 0.01)?;
    let numeric = mathieu_phase_numeric(&mp, 0)?;
    let leading_law = mathieu_phase_perturbative(&mp, 0)?;
    let rel = (numeric / target - 1.0).abs();

    // The stated model: c2 eps^2 + c3 eps^3 + c4 eps^4 on four points.
    let eps = [0.005, 0.01, 0.02, 0.04];
    let gammas = eps.iter().map(|&e| mathieu_phase_numeric(&MathieuParams::unit(2.0, e)?, 0)).collect::<Res<Vec<_>>>()?;
    let c = power_law_fit(&eps, &gammas, &[2, 3, 4])?;
    let ratio = (c[1] / c[0]).abs();
    // Diagnostic only: with every power through eps^6 on a denser grid the
    // eps^3 coefficient collapses, so the stated fit fails on truncation.
    let dense: Vec<f64> = (0..12).map(|i| 0.005 * 8f64.powf(i as f64 / 11.0)).collect();
    let dense_gammas =
        dense.iter().map(|&e| mathieu_phase_numeric(&MathieuParams::unit(2.0, e)?, 0)).collect::<Res<Vec<_>>>()?;
    let wide = power_law_fit(&dense, &dense_gammas, &[2, 3, 4, 5, 6])?;
    let wide_ratio = (wide[1] / wide[0]).abs();
    let elapsed = start.elapsed();
    Ok(Outcome {
        passed: rel < 2e-3 && ratio <= 0.05 && elapsed < Duration::from_secs(60),
        detail: format!(
            "numeric gamma {numeric:.5e} vs 8.8858e-4: relative {rel:.3e} (< 2e-3; the leading-order law itself gives {leading_law:.5e}, \
             numeric / leading = {:.4}); fit c2 eps^2 + c3 eps^3 + c4 eps^4 over eps in {{0.005, 0.01, 0.02, 0.04}}: |c3/c2| = {ratio:.3e} (<= 0.05) \
             [diagnostic, powers 2..6 on 12 points: {wide_ratio:.3e}]; {:.2} s (< 60 s)",
            numeric / leading_law,
            elapsed.as_secs_f64()
        ),
    })
}

fn c10() -> Res<Outcome> {
    let eps = 0.01;
    let mp = MathieuParams::unit(2.0, eps)?;
    let residuals = (0..=MAX_ORDER).map(|k| perturbative_residual(&mp, k, PinneyForm::Standard)).collect::<Res<Vec<_>>>()?;
    let ratios: Vec<f64> = residuals.windows(2).map(|w| w[1] / w[0]).collect();
    let ok = ratios.iter().all(|&r| r >= eps / 3.0 && r <= 3.0 * eps);
    let list = |v: &[f64]| v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ");
    Ok(Outcome {
        passed: ok,
        detail: format!(
            "residuals by order 0..{MAX_ORDER}: [{}]; successive ratios [{}], window [{:.3e}, {:.3e}]",
            list(&residuals),
            list(&ratios),
            eps / 3.0,
            3.0 * eps
        ),
    })
}

fn c11() -> Res<Outcome> {
    let mut all = true;
    let mut parts = Vec::new();
    for &(a, eps, expected) in &[(1.0, 0.05, Stability::Unstable), (4.0, 0.05, Stability::Unstable), (2.0, 0.01, Stability::Stable)] {
        let f = stability_probe(&MathieuParams::unit(a, eps)?)?;
        let det_err = (f.det - 1.0).abs();
        all &= f.classification == expected && within(det_err, 1e-8);
        parts.push(format!("({a}, {eps}): {:?}, |tr| {:.4}, |det - 1| {det_err:.1e}", f.classification, f.trace.abs()));
    }
    Ok(Outcome { passed: all, detail: parts.join("; ") })
}

fn c12() -> Res<Outcome> {
    let p = unit();
    let mut all = true;
    let mut parts = Vec::new();
    for w_f in [2f64.sqrt(), (1.0 + 5f64.sqrt()) / 2.0] {
        let spec = ForceSpectrum::cosine(w_f, 1, 0.5)?;
        let xp = ParticularSolution::new(p, Some(spec.clone()), 1.0, 0.0)?;
        let rep = Representation::new(HomogeneousBasis::stationary(p), xp)?;
        let library = matches!(geometric_phase(&rep.eigenstate(0)), Err(Error::PhaseUndefined(_)));
        let mut config = RunConfig::new(Mode::Driven);
        config.d = 1.0;
        config.spectrum = Some(spec);
        let record = run_point(&config).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let surfaced = record.status == Status::PhaseUndefined && record.geometric.is_none();
        all &= library && surfaced;
        parts.push(format!("w_f = {w_f:.6}: library PhaseUndefined {library}, record status {:?}", record.status));
    }
    Ok(Outcome { passed: all, detail: parts.join("; ") })
}

type Criterion = (u32, &'static str, fn() -> Res<Outcome>);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "undriven closed form vs quadrature", c1),
        (2, "stationary representation has zero phase", c2),
        (3, "fictitious-solution decomposition", c3),
        (4, "driven closed forms vs quadrature", c4),
        (5, "geometric + dynamical = -(2n+1) pi mod 2pi", c5),
        (6, "Ge-Child integral", c6),
        (7, "half-period phase and quasi-periodicity factor", c7),
        (8, "wavefunction suite", c8),
        (9, "Mathieu eps^2 law", c9),
        (10, "perturbative residual ordering", c10),
        (11, "Mathieu stability probe", c11),
        (12, "undefinability surfaced as PhaseUndefined", c12),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let outcome = run().unwrap_or_else(|e| Outcome { passed: false, detail: format!("error: {e}") });
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        let note = if !outcome.passed && KNOWN_UNATTAINABLE.contains(&id) { " [known: see README]" } else { "" };
        println!("{tag} {id:>2} {name}: {}{note}", outcome.detail);
        if !outcome.passed && !KNOWN_UNATTAINABLE.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
