//! Optimal splitting for two-sided monomial objectives.
//!
//! `L(q) = sum A_i q^(u_i) + sum B_j q^(-v_j)` with positive coefficients
//! and exponents is convex in `log q`, so its minimum over `[q1, q2]` is
//! found by bisecting the derivative. The classical splitting bound says
//! the minimum is at most `(mn + m + n)` times the sum of the balanced
//! cross terms `(A_i^(v_j) B_j^(u_i))^(1/(u_i+v_j))` plus the endpoint
//! contributions; both sides are reported so the inequality can be
//! checked on concrete data.

use crate::Error;

#[derive(Debug, Clone)]
pub struct MonomialObjective {
    /// Increasing terms `(A_i, u_i)`: contributes `A_i q^(u_i)`.
    pub ascending: Vec<(f64, f64)>,
    /// Decreasing terms `(B_j, v_j)`: contributes `B_j q^(-v_j)`.
    pub descending: Vec<(f64, f64)>,
    /// Left endpoint of the feasible interval.
    pub q1: f64,
    /// Right endpoint of the feasible interval.
    pub q2: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SrinivasanResult {
    /// Argmin of `L` over `[q1, q2]`.
    pub minimizer: f64,
    /// `L(minimizer)`.
    pub minimum: f64,
    /// Double sum of balanced cross terms.
    pub cross_terms: f64,
    /// `mn + m + n`.
    pub factor: f64,
    /// `factor * (cross_terms + endpoint terms)`; the guaranteed ceiling.
    pub bound: f64,
}

impl MonomialObjective {
    fn validate(&self) -> Result<(), Error> {
        if self.ascending.is_empty() && self.descending.is_empty() {
            return Err(Error::domain("objective needs at least one term"));
        }
        for &(c, e) in self.ascending.iter().chain(&self.descending) {
            if !(c > 0.0 && c.is_finite() && e > 0.0 && e.is_finite()) {
                return Err(Error::domain(
                    "coefficients and exponents must be positive and finite",
                ));
            }
        }
        if !(self.q1 > 0.0 && self.q2.is_finite() && self.q2 >= self.q1) {
            return Err(Error::domain("need 0 < q1 <= q2 < infinity"));
        }
        Ok(())
    }

    /// `L(e^t)`.
    fn eval_log(&self, t: f64) -> f64 {
        let up: f64 = self.ascending.iter().map(|&(a, u)| a * (u * t).exp()).sum();
        let down: f64 = self
            .descending
            .iter()
            .map(|&(b, v)| b * (-v * t).exp())
            .sum();
        up + down
    }

    /// `d/dt L(e^t)`, strictly increasing in `t`.
    fn deriv_log(&self, t: f64) -> f64 {
        let up: f64 = self
            .ascending
            .iter()
            .map(|&(a, u)| a * u * (u * t).exp())
            .sum();
        let down: f64 = self
            .descending
            .iter()
            .map(|&(b, v)| b * v * (-v * t).exp())
            .sum();
        up - down
    }
}

/// Minimizes the objective exactly (convex bisection) and evaluates the
/// splitting bound alongside it.
pub fn srinivasan_min(obj: &MonomialObjective) -> Result<SrinivasanResult, Error> {
    obj.validate()?;
    let (t1, t2) = (obj.q1.ln(), obj.q2.ln());

    let t_star = if obj.ascending.is_empty() {
        t2
    } else if obj.descending.is_empty() || obj.deriv_log(t1) >= 0.0 {
        t1
    } else if obj.deriv_log(t2) <= 0.0 {
        t2
    } else {
        let (mut lo, mut hi) = (t1, t2);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if obj.deriv_log(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    let m = obj.ascending.len() as f64;
    let n = obj.descending.len() as f64;
    let mut cross = 0.0;
    for &(a, u) in &obj.ascending {
        for &(b, v) in &obj.descending {
            cross += (a.powf(v) * b.powf(u)).powf(1.0 / (u + v));
        }
    }
    let left: f64 = obj.ascending.iter().map(|&(a, u)| a * obj.q1.powf(u)).sum();
    let right: f64 = obj
        .descending
        .iter()
        .map(|&(b, v)| b * obj.q2.powf(-v))
        .sum();
    let factor = m * n + m + n;

    Ok(SrinivasanResult {
        minimizer: t_star.exp(),
        minimum: obj.eval_log(t_star),
        cross_terms: cross,
        factor,
        bound: factor * (cross + left + right),
    })
}
