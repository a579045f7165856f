use super::{NumericsError, Tolerance};

/// States whose sup-norm exceeds this are treated as a blow-up.
pub const BLOW_UP_THRESHOLD: f64 = 1e12;

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Sampled solution of an initial-value problem.
///
/// `derivative_values[i]` is the right-hand side evaluated at
/// `(times[i], values[i])`, which lets [`Trajectory::sample`] interpolate with
/// cubic Hermite polynomials between stored points.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub derivative_values: Vec<Vec<f64>>,
}

impl Trajectory {
    fn with_start(t0: f64, y0: Vec<f64>, dy0: Vec<f64>) -> Self {
        Self { times: vec![t0], values: vec![y0], derivative_values: vec![dy0] }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory always holds the initial point")
    }

    pub fn final_state(&self) -> &[f64] {
        self.values.last().expect("trajectory always holds the initial point")
    }

    /// Stored state at exactly `t`, if `t` is one of the grid times.
    pub fn state_at(&self, t: f64) -> Option<&[f64]> {
        self.times.iter().position(|&s| s == t).map(|i| self.values[i].as_slice())
    }

    /// Cubic Hermite interpolation of state and derivative at `t`.
    ///
    /// Returns `None` outside the covered time range.
    pub fn sample(&self, t: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let first = *self.times.first()?;
        let last = self.final_time();
        if t < first || t > last {
            return None;
        }
        let i = match self.times.binary_search_by(|s| s.total_cmp(&t)) {
            Ok(i) => return Some((self.values[i].clone(), self.derivative_values[i].clone())),
            Err(i) => i - 1,
        };
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (y0, y1) = (&self.values[i], &self.values[i + 1]);
        let (d0, d1) = (&self.derivative_values[i], &self.derivative_values[i + 1]);

        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let dh00 = 6.0 * s * (s - 1.0) / h;
        let dh10 = (1.0 - s) * (1.0 - 3.0 * s);
        let dh01 = -dh00;
        let dh11 = s * (3.0 * s - 2.0);

        let y = (0..y0.len())
            .map(|k| h00 * y0[k] + h * h10 * d0[k] + h01 * y1[k] + h * h11 * d1[k])
            .collect();
        let dy = (0..y0.len())
            .map(|k| dh00 * y0[k] + dh10 * d0[k] + dh01 * y1[k] + dh11 * d1[k])
            .collect();
        Some((y, dy))
    }

    /// One state component across all stored times.
    pub fn component(&self, k: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[k]).collect()
    }
}

fn check_state(t: f64, y: &[f64]) -> Result<(), NumericsError> {
    if y.iter().all(|v| v.is_finite() && v.abs() <= BLOW_UP_THRESHOLD) {
        Ok(())
    } else {
        Err(NumericsError::NonFinite { t })
    }
}

/// Integrates `dy/dt = rhs(t, y)` from `t0` to `t_end` with adaptive
/// Dormand-Prince 5(4) steps, recording every accepted step.
pub fn solve_ivp<F>(rhs: F, t0: f64, state0: &[f64], t_end: f64, tol: &Tolerance) -> Result<Trajectory, NumericsError>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    solve_ivp_with_output(rhs, t0, state0, t_end, tol, &[])
}

/// As [`solve_ivp`], additionally landing exactly on each of `output_times`
/// (which must lie in `[t0, t_end]`), so they appear verbatim in the
/// trajectory.
pub fn solve_ivp_with_output<F>(
    rhs: F,
    t0: f64,
    state0: &[f64],
    t_end: f64,
    tol: &Tolerance,
    output_times: &[f64],
) -> Result<Trajectory, NumericsError>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    if !(t0.is_finite() && t_end.is_finite()) || t_end < t0 {
        return Err(NumericsError::InvalidInput(format!("invalid time span [{t0}, {t_end}]")));
    }
    let mut stops: Vec<f64> = output_times.iter().copied().filter(|&s| s > t0 && s < t_end).collect();
    if output_times.iter().any(|s| !s.is_finite() || *s < t0 || *s > t_end) {
        return Err(NumericsError::InvalidInput("output times must lie inside the integration span".into()));
    }
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    stops.push(t_end);

    check_state(t0, state0)?;
    let dim = state0.len();
    let mut t = t0;
    let mut y = state0.to_vec();
    let mut k1 = rhs(t, &y);
    check_state(t, &k1).map_err(|_| NumericsError::NonFinite { t })?;
    let mut traj = Trajectory::with_start(t, y.clone(), k1.clone());
    if t_end == t0 {
        return Ok(traj);
    }

    let span = t_end - t0;
    let mut h = initial_step(&y, &k1, span, tol);
    let mut stop_idx = 0;
    let mut steps = 0usize;
    let mut prev_err: f64 = 1e-4;

    let mut tmp = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];

    while stop_idx < stops.len() {
        let target = stops[stop_idx];
        if steps >= tol.max_iterations {
            return Err(NumericsError::NonConvergence { budget: tol.max_iterations, estimate: prev_err });
        }
        let floor = 16.0 * f64::EPSILON * t.abs().max(span).max(1.0);
        if h < floor {
            return Err(NumericsError::StepUnderflow { t, h });
        }
        let mut landing = false;
        let mut step = h;
        if t + step >= target || (target - (t + step)) < floor {
            step = target - t;
            landing = true;
        }

        for i in 0..dim {
            tmp[i] = y[i] + step * A21 * k1[i];
        }
        let k2 = rhs(t + C2 * step, &tmp);
        for i in 0..dim {
            tmp[i] = y[i] + step * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = rhs(t + C3 * step, &tmp);
        for i in 0..dim {
            tmp[i] = y[i] + step * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = rhs(t + C4 * step, &tmp);
        for i in 0..dim {
            tmp[i] = y[i] + step * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = rhs(t + C5 * step, &tmp);
        for i in 0..dim {
            tmp[i] = y[i] + step * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = rhs(t + step, &tmp);
        for i in 0..dim {
            y_new[i] = y[i] + step * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let t_new = if landing { target } else { t + step };
        let k7 = rhs(t_new, &y_new);
        steps += 1;

        let mut err: f64 = 0.0;
        let mut finite = true;
        for i in 0..dim {
            let e = step * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = tol.abs_tol + tol.rel_tol * y[i].abs().max(y_new[i].abs());
            if !(e.is_finite() && y_new[i].is_finite() && k7[i].is_finite()) {
                finite = false;
            }
            err = err.max((e / scale).abs());
        }

        if !finite {
            // Shrink hard; a genuine singularity ends in StepUnderflow or NonFinite.
            h = step * 0.1;
            if h < floor {
                return Err(NumericsError::NonFinite { t });
            }
            continue;
        }

        if err <= 1.0 {
            if y_new.iter().any(|v| v.abs() > BLOW_UP_THRESHOLD) {
                return Err(NumericsError::NonFinite { t });
            }
            t = t_new;
            y.copy_from_slice(&y_new);
            k1 = k7;
            traj.times.push(t);
            traj.values.push(y.clone());
            traj.derivative_values.push(k1.clone());
            if landing {
                stop_idx += 1;
            }
            // PI step-size controller (Hairer & Wanner, beta = 0.04).
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.17) * prev_err.powf(0.04)).clamp(0.2, 5.0)
            };
            prev_err = err.max(1e-4);
            h = if landing { h.max(step) } else { step * fac };
        } else {
            let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            h = step * fac;
        }
    }
    Ok(traj)
}

fn initial_step(y: &[f64], dy: &[f64], span: f64, tol: &Tolerance) -> f64 {
    let scale = |v: f64| tol.abs_tol + tol.rel_tol * v.abs();
    let d0 = y.iter().map(|v| (v / scale(*v)).powi(2)).fold(0.0, f64::max).sqrt();
    let d1 = y.iter().zip(dy).map(|(v, d)| (d / scale(*v)).powi(2)).fold(0.0, f64::max).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0.min(span).max(1e-12 * span)
}
