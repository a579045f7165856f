//! Even, pi-periodic cosine series and the perturbative envelope built from them.

use crate::error::{Error, Result};

/// Largest perturbative order of [`RhoExpansion`].
pub const MAX_ORDER: usize = 3;

/// `f(t) = sum_k c_k cos(2 k t)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CosineSeries {
    coefficients: Vec<f64>,
}

impl CosineSeries {
    pub fn new(coefficients: Vec<f64>) -> Self {
        Self { coefficients }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `c_k`, the coefficient of `cos(2 k t)`; zero past the stored length.
    pub fn coefficient(&self, k: usize) -> f64 {
        self.coefficients.get(k).copied().unwrap_or(0.0)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coefficients.iter().enumerate().map(|(k, c)| c * (2.0 * k as f64 * t).cos()).sum()
    }

    pub fn eval_dot(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let kk = 2.0 * k as f64;
                -kk * c * (kk * t).sin()
            })
            .sum()
    }

    pub fn eval_ddot(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let kk = 2.0 * k as f64;
                -kk * kk * c * (kk * t).cos()
            })
            .sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coefficients.len().max(other.coefficients.len());
        Self::new((0..len).map(|k| self.coefficient(k) + other.coefficient(k)).collect())
    }

    /// Product, using `cos A cos B = [cos(A + B) + cos(A - B)] / 2`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.coefficients.is_empty() || other.coefficients.is_empty() {
            return Self::default();
        }
        let mut out = vec![0.0; self.coefficients.len() + other.coefficients.len() - 1];
        for (j, a) in self.coefficients.iter().enumerate() {
            for (k, b) in other.coefficients.iter().enumerate() {
                out[j + k] += 0.5 * a * b;
                out[j.abs_diff(k)] += 0.5 * a * b;
            }
        }
        Self::new(out)
    }

    /// `f * cos(2t)`.
    pub fn mul_cos2(&self) -> Self {
        self.mul(&Self::new(vec![0.0, 1.0]))
    }

    /// `int_0^pi f'(t)^2 dt = (pi/2) sum_k (2 k c_k)^2`.
    pub fn derivative_square_integral(&self) -> f64 {
        let sum: f64 = self.coefficients.iter().enumerate().map(|(k, c)| (2.0 * k as f64 * c).powi(2)).sum();
        0.5 * std::f64::consts::PI * sum
    }
}

/// Orders `0..=3` of the envelope series `rho = sum_j eps^j rho_j`, each a
/// cosine series obtained from
///
/// ```text
/// rho_j'' + 4 a rho_j = -16 cos(2t) rho_{j-1} + R_j
/// ```
///
/// where `R_j` collects the order-`eps^j` part of `rho^{-3}` that does not
/// involve `rho_j`. Each cosine mode `k` is divided by `4 (a - k^2)`, which is
/// what imposes pi-periodicity.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoExpansion {
    a: f64,
    orders: Vec<CosineSeries>,
}

impl RhoExpansion {
    pub fn new(a: f64, max_order: usize) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!("a must be positive, got {a}")));
        }
        if max_order > MAX_ORDER {
            return Err(Error::InvalidParameter(format!("order must be at most {MAX_ORDER}, got {max_order}")));
        }
        let rho0 = a.powf(-0.25);
        let mut orders = vec![CosineSeries::constant(rho0)];
        // Order-j coefficients of rho^{-3}.
        let mut inverse_cube = vec![CosineSeries::constant(rho0.powi(-3))];
        for j in 1..=max_order {
            let rest = power_coefficient(&orders, &inverse_cube, -3.0, j);
            let source = orders[j - 1].mul_cos2().scale(-16.0).add(&rest);
            let mut solved = Vec::with_capacity(source.coefficients().len());
            for (k, &c) in source.coefficients().iter().enumerate() {
                let k2 = (k * k) as f64;
                if c == 0.0 {
                    solved.push(0.0);
                    continue;
                }
                if (a - k2).abs() <= 1e-12 * k2.max(1.0) {
                    return Err(Error::ResonantDenominator { a, order: j });
                }
                solved.push(c / (4.0 * (a - k2)));
            }
            orders.push(CosineSeries::new(solved));
            inverse_cube.push(power_coefficient(&orders, &inverse_cube, -3.0, j));
        }
        Ok(Self { a, orders })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn max_order(&self) -> usize {
        self.orders.len() - 1
    }

    /// `rho_j` as a cosine series.
    pub fn order(&self, j: usize) -> &CosineSeries {
        &self.orders[j]
    }

    /// `sum_{j <= order} eps^j rho_j` as one cosine series.
    pub fn truncated(&self, eps: f64, order: usize) -> CosineSeries {
        let mut total = CosineSeries::default();
        for j in 0..=order.min(self.max_order()) {
            total = total.add(&self.orders[j].scale(eps.powi(j as i32)));
        }
        total
    }
}

/// Order-`j` coefficient of `P^alpha` for `P = sum_k eps^k orders[k]`, by
/// the power recursion
/// `q_j = (1/(j p_0)) sum_{k=1}^{j} ((alpha + 1) k - j) p_k q_{j-k}`.
///
/// Terms with `k >= orders.len()` are treated as zero, so calling this
/// before `orders[j]` is known yields the part of `q_j` that does not
/// involve `p_j`.
fn power_coefficient(orders: &[CosineSeries], q: &[CosineSeries], alpha: f64, j: usize) -> CosineSeries {
    let p0 = orders[0].coefficient(0);
    let mut acc = CosineSeries::default();
    for k in 1..=j {
        let Some(pk) = orders.get(k) else { continue };
        let weight = ((alpha + 1.0) * k as f64 - j as f64) / (j as f64 * p0);
        acc = acc.add(&pk.mul(&q[j - k]).scale(weight));
    }
    acc
}

/// `r`-th coefficient of the `ce_1` series,
/// `2^r eps^r / ((r+1)! r!) - 2^{r+1} eps^{r+1} / ((r+1)! (r+1)!)`.
fn ce1_coefficient(r: usize, eps: f64) -> f64 {
    let fact = |m: usize| (1..=m).map(|i| i as f64).product::<f64>();
    let rf = r as i32;
    2f64.powi(rf) * eps.powi(rf) / (fact(r + 1) * fact(r))
        - 2f64.powi(rf + 1) * eps.powi(rf + 1) / (fact(r + 1) * fact(r + 1))
}

/// Partial sum of the Mathieu function `ce_1(t, eps)` through `r_max`, valid
/// on the characteristic curve `a = 1 - 8 eps - 8 eps^2`.
pub fn ce1_series(t: f64, eps: f64, r_max: usize) -> f64 {
    ce1_series_derivatives(t, eps, r_max).0
}

/// `(ce_1, ce_1', ce_1'')` of the partial sum.
pub fn ce1_series_derivatives(t: f64, eps: f64, r_max: usize) -> (f64, f64, f64) {
    let (mut f, mut df, mut ddf) = (t.cos(), -t.sin(), -t.cos());
    for r in 1..=r_max {
        let c = ce1_coefficient(r, eps);
        let m = (2 * r + 1) as f64;
        let (s, co) = (m * t).sin_cos();
        f += c * co;
        df -= c * m * s;
        ddf -= c * m * m * co;
    }
    (f, df, ddf)
}

/// Characteristic value `a = 1 - 8 eps - 8 eps^2` on which [`ce1_series`] applies.
pub fn ce1_characteristic(eps: f64) -> f64 {
    1.0 - 8.0 * eps - 8.0 * eps * eps
}
