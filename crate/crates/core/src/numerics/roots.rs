use super::{NumericsError, Tolerance};

/// Starting information for [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootSeed {
    /// Interval whose endpoints give opposite signs.
    Bracket(f64, f64),
    /// Single starting point; a secant iteration with a finite-difference
    /// first step is used.
    Guess(f64),
}

/// Finds `r` with `|g(r)| <= abs_tol` (or a bracket narrower than the
/// relative tolerance allows).
pub fn find_root<G>(g: G, seed: RootSeed, tol: &Tolerance) -> Result<f64, NumericsError>
where
    G: Fn(f64) -> f64,
{
    match seed {
        RootSeed::Bracket(lo, hi) => brent(&g, lo, hi, tol),
        RootSeed::Guess(x0) => secant(&g, x0, tol),
    }
}

fn eval<G: Fn(f64) -> f64>(g: &G, x: f64) -> Result<f64, NumericsError> {
    let y = g(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(NumericsError::NonFinite { t: x })
    }
}

fn brent<G: Fn(f64) -> f64>(g: &G, lo: f64, hi: f64, tol: &Tolerance) -> Result<f64, NumericsError> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (eval(g, a)?, eval(g, b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NoBracket { lo, hi });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..tol.max_iterations {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol_x = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.rel_tol * b.abs().max(1e-300);
        let m = 0.5 * (c - b);
        if fb.abs() <= tol.abs_tol || m.abs() <= tol_x {
            return Ok(b);
        }
        if e.abs() >= tol_x && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol_x * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol_x { d } else { tol_x.copysign(m) };
        fb = eval(g, b)?;
    }
    Err(NumericsError::NonConvergence { budget: tol.max_iterations, estimate: fb.abs() })
}

fn secant<G: Fn(f64) -> f64>(g: &G, x0: f64, tol: &Tolerance) -> Result<f64, NumericsError> {
    let mut x_prev = x0;
    let mut f_prev = eval(g, x_prev)?;
    if f_prev.abs() <= tol.abs_tol {
        return Ok(x_prev);
    }
    let mut x = x0 + 1e-4 * x0.abs().max(1.0);
    let mut f = eval(g, x)?;
    for _ in 0..tol.max_iterations {
        if f.abs() <= tol.abs_tol {
            return Ok(x);
        }
        let slope = (f - f_prev) / (x - x_prev);
        if slope == 0.0 || !slope.is_finite() {
            return Err(NumericsError::NonConvergence { budget: tol.max_iterations, estimate: f.abs() });
        }
        let next = x - f / slope;
        x_prev = x;
        f_prev = f;
        x = next;
        f = eval(g, x)?;
        if (x - x_prev).abs() <= tol.rel_tol * x.abs() && f.abs() <= tol.abs_tol.sqrt() {
            return Ok(x);
        }
    }
    Err(NumericsError::NonConvergence { budget: tol.max_iterations, estimate: f.abs() })
}
