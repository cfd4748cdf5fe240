//! Adaptive Gauss–Legendre quadrature at arbitrary precision.
//!
//! Order-16 panels with bisection refinement; a panel is accepted only when
//! the one-panel and two-half-panel values agree within its share of the
//! error budget, so the reported estimate is a two-level agreement
//! certificate.

use rug::ops::CompleteRound;
use rug::Float;

use super::{AppComplex, NumericsError, PrecisionPolicy};

pub const GL_ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on [-1, 1] at `prec` bits.
pub fn gauss_legendre_nodes(order: usize, prec: u32) -> (Vec<Float>, Vec<Float>) {
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    let n = order as u32;
    for i in 1..=order {
        // Chebyshev-flavored initial guess, then Newton on P_n.
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (order as f64 + 0.5)).cos();
        let mut x = Float::with_val(prec, guess);
        // Newton doubles correct digits each pass; the f64 seed leaves at
        // most ~log2(prec) passes to full precision.
        let max_iter = 8 + (prec as f64).log2().ceil() as usize;
        for _ in 0..max_iter {
            let (p, dp) = legendre_with_derivative(n, &x);
            let step = p / dp;
            x -= &step;
            if step.abs() < Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 4)) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, &x);
        let w = Float::with_val(prec, 2) / ((Float::with_val(prec, 1) - x.clone().square()) * dp.square());
        nodes.push(x);
        weights.push(w);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: u32, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p_prev = Float::with_val(prec, 1);
    let mut p = x.clone();
    for k in 1..n {
        let next = (Float::with_val(prec, 2 * k + 1) * x * &p
            - Float::with_val(prec, k) * &p_prev)
            / Float::with_val(prec, k + 1);
        p_prev = p;
        p = next;
    }
    // P'_n(x) = n (x P_n − P_{n−1}) / (x² − 1)
    let dp = Float::with_val(prec, n) * ((x * &p).complete(prec) - &p_prev)
        / (x.clone().square() - 1u8);
    (p, dp)
}

/// Reusable quadrature context holding the node table.
pub struct Quadrature {
    nodes: Vec<Float>,
    weights: Vec<Float>,
    prec: u32,
}

impl Quadrature {
    pub fn new(policy: &PrecisionPolicy) -> Self {
        let (nodes, weights) = gauss_legendre_nodes(GL_ORDER, policy.working_bits);
        Quadrature { nodes, weights, prec: policy.working_bits }
    }

    /// One-panel Gauss–Legendre value of `f` over [a, b].
    pub fn panel<F>(&self, f: &mut F, a: &Float, b: &Float) -> Result<AppComplex, NumericsError>
    where
        F: FnMut(&Float) -> Result<AppComplex, NumericsError>,
    {
        let prec = self.prec;
        let half = Float::with_val(prec, b - a) / 2u8;
        let mid = Float::with_val(prec, a + b) / 2u8;
        let mut acc = AppComplex::zero(prec);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let s = mid.clone() + half.clone() * x;
            let v = f(&s)?;
            acc = AppComplex(acc.0 + v.0 * w);
        }
        Ok(AppComplex(acc.0 * &half))
    }

    /// Adaptive bisection on [a, b] against an absolute error budget.
    fn adapt<F>(
        &self,
        f: &mut F,
        a: &Float,
        b: &Float,
        whole: AppComplex,
        budget: &Float,
        depth: u32,
    ) -> Result<(AppComplex, Float), NumericsError>
    where
        F: FnMut(&Float) -> Result<AppComplex, NumericsError>,
    {
        let prec = self.prec;
        if depth > 48 {
            return Err(NumericsError::NoConvergence(format!(
                "quadrature bisection exceeded depth 48 on [{}, {}]",
                a.to_f64(),
                b.to_f64()
            )));
        }
        let mid = Float::with_val(prec, a + b) / 2u8;
        let left = self.panel(f, a, &mid)?;
        let right = self.panel(f, &mid, b)?;
        let refined = &left + &right;
        let disc = refined.dist(&whole);
        // Roundoff floor: once the two levels agree to within the evaluation
        // noise of the sums, further bisection only amplifies noise.
        let floor = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 40))
            * (Float::with_val(prec, 1) + refined.abs());
        if disc <= *budget || disc <= floor {
            return Ok((refined, disc));
        }
        let half_budget = budget.clone() / 2u8;
        let (lv, le) = self.adapt(f, a, &mid, left, &half_budget, depth + 1)?;
        let (rv, re) = self.adapt(f, &mid, b, right, &half_budget, depth + 1)?;
        Ok((lv + rv, le + re))
    }
}

/// Adaptive Gauss–Legendre integration of a complex-valued function over
/// [s0, s1]. `breakpoints` must contain every integrand breakpoint (panel
/// boundaries include all of them plus the endpoints).
pub fn integrate<F>(
    s0: f64,
    s1: f64,
    breakpoints: &[f64],
    mut f: F,
    policy: &PrecisionPolicy,
) -> Result<(AppComplex, Float), NumericsError>
where
    F: FnMut(&Float) -> Result<AppComplex, NumericsError>,
{
    if !(s0 < s1) {
        return Err(NumericsError::DegenerateInput("empty integration domain".into()));
    }
    let prec = policy.working_bits;
    let quad = Quadrature::new(policy);
    let mut cuts: Vec<f64> = vec![s0, s1];
    cuts.extend(breakpoints.iter().copied().filter(|c| *c > s0 && *c < s1));
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let panels = cuts.len() - 1;
    let budget = policy.target_abs_error.clone() / Float::with_val(prec, panels as f64);
    let mut total = AppComplex::zero(prec);
    let mut err = Float::with_val(prec, 0);
    for w in cuts.windows(2) {
        let a = Float::with_val(prec, w[0]);
        let b = Float::with_val(prec, w[1]);
        let whole = quad.panel(&mut f, &a, &b)?;
        let (v, e) = quad.adapt(&mut f, &a, &b, whole, &budget, 0)?;
        total = total + v;
        err += e;
    }
    // Roundoff floor so the certificate is never reported as exactly zero.
    err += Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8));
    Ok((total, err))
}
