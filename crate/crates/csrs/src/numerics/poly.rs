//! Dense complex polynomials and an all-roots solver.
//!
//! Aberth–Ehrlich simultaneous iteration with precision escalation; every
//! returned root carries a Weierstrass-style inclusion radius.

use rug::Float;

use super::{AppComplex, NumericsError, PrecisionPolicy};

/// Dense univariate polynomial over ℂ, coefficients in ascending degree.
#[derive(Clone, Debug)]
pub struct PolyC {
    pub coefficients: Vec<AppComplex>,
}

/// A located root together with a radius certifying a disk that contains a
/// true root of the input polynomial.
#[derive(Clone, Debug)]
pub struct RootWithBound {
    pub root: AppComplex,
    pub error_bound: Float,
}

impl PolyC {
    pub fn new(coefficients: Vec<AppComplex>) -> Self {
        PolyC { coefficients }
    }

    pub fn prec(&self) -> u32 {
        self.coefficients.first().map(|c| c.precision_bits()).unwrap_or(64)
    }

    /// Drop leading coefficients whose modulus falls below `threshold`
    /// relative to the largest coefficient modulus.
    pub fn trimmed(&self, threshold: &Float) -> PolyC {
        let max = self.max_coeff_abs();
        let mut coeffs = self.coefficients.clone();
        while coeffs.len() > 1 {
            let lead = coeffs.last().unwrap().abs();
            if lead <= threshold.clone() * &max {
                coeffs.pop();
            } else {
                break;
            }
        }
        PolyC { coefficients: coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn max_coeff_abs(&self) -> Float {
        let prec = self.prec();
        let mut max = Float::with_val(prec, 0);
        for c in &self.coefficients {
            let a = c.abs();
            if a > max {
                max = a;
            }
        }
        max
    }

    pub fn eval(&self, z: &AppComplex) -> AppComplex {
        let prec = self.prec().max(z.precision_bits());
        let mut acc = AppComplex::zero(prec);
        for c in self.coefficients.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn derivative(&self) -> PolyC {
        let prec = self.prec();
        if self.coefficients.len() <= 1 {
            return PolyC::new(vec![AppComplex::zero(prec)]);
        }
        let coeffs = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| AppComplex::with_val(prec, k as u32) * c)
            .collect();
        PolyC::new(coeffs)
    }

    /// Lift all coefficients to a higher working precision.
    fn at_prec(&self, prec: u32) -> PolyC {
        PolyC::new(
            self.coefficients
                .iter()
                .map(|c| AppComplex(rug::Complex::with_val(prec, &c.0)))
                .collect(),
        )
    }
}

/// All roots of `p` with multiplicity, by Aberth–Ehrlich iteration.
///
/// Residuals are certified against `target_abs_error · max|coeff|`; if the
/// iteration cannot reach that at the current precision the policy escalates
/// (doubling working bits) until `max_escalations` is exhausted.
pub fn poly_roots(p: &PolyC, policy: &PrecisionPolicy) -> Result<Vec<RootWithBound>, NumericsError> {
    let trimmed = p.trimmed(&policy.zero_threshold());
    if trimmed.degree() == 0 {
        return Err(NumericsError::DegenerateInput(
            "polynomial trims to a constant".into(),
        ));
    }
    let mut pol = policy.clone();
    let mut attempt = trimmed;
    loop {
        match aberth_once(&attempt, &pol) {
            Ok(roots) => return Ok(roots),
            Err(e) => {
                if pol.max_escalations == 0 {
                    return Err(match e {
                        NumericsError::NoConvergence(msg) => NumericsError::NoConvergence(format!(
                            "{msg} (escalations exhausted)"
                        )),
                        other => other,
                    });
                }
                pol = pol.escalate();
                attempt = attempt.at_prec(pol.working_bits);
            }
        }
    }
}

fn aberth_once(p: &PolyC, policy: &PrecisionPolicy) -> Result<Vec<RootWithBound>, NumericsError> {
    let prec = policy.working_bits;
    let d = p.degree();
    let dp = p.derivative();
    let max_coeff = p.max_coeff_abs();
    let resid_target = policy.target_abs_error.clone() * &max_coeff;

    // Initial guesses on a circle of radius 1 + max|a_i|/|a_d|, slightly
    // de-phased so symmetric polynomials do not lock the iteration.
    let lead = p.coefficients.last().unwrap().abs();
    let radius = {
        let mut m = Float::with_val(prec, 0);
        for c in &p.coefficients[..d] {
            let q = c.abs() / lead.clone();
            if q > m {
                m = q;
            }
        }
        (Float::with_val(prec, 1) + m).min(&Float::with_val(prec, 1e6))
    };
    let mut z: Vec<AppComplex> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.41;
            let dir = AppComplex::from_f64(theta.cos(), theta.sin(), prec);
            AppComplex(dir.0 * &radius)
        })
        .collect();

    let max_sweeps = 64 + 16 * d;
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut max_step = Float::with_val(prec, 0);
        for k in 0..d {
            let pz = p.eval(&z[k]);
            let dpz = dp.eval(&z[k]);
            if dpz.abs().is_zero() {
                // Nudge off an exact critical point.
                z[k] = &z[k] + &AppComplex::from_f64(1e-3, 1e-3, prec);
                continue;
            }
            let newton = &pz / &dpz;
            let mut sum = AppComplex::zero(prec);
            for j in 0..d {
                if j != k {
                    let diff = &z[k] - &z[j];
                    if diff.abs().is_zero() {
                        continue;
                    }
                    sum = &sum + &diff.recip();
                }
            }
            let denom = &AppComplex::with_val(prec, 1) - &(&newton * &sum);
            let step = if denom.abs().to_f64() < 1e-30 {
                newton.clone()
            } else {
                &newton / &denom
            };
            let sa = step.abs();
            if sa > max_step {
                max_step = sa;
            }
            z[k] = &z[k] - &step;
            if !z[k].is_finite() {
                return Err(NumericsError::NoConvergence("iterate escaped to infinity".into()));
            }
        }
        // The residual gate below is the real certificate; the step test
        // only needs to reach well under the target before verifying.
        let ulp_stop = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 12))
            * (Float::with_val(prec, 1) + &radius);
        let target_stop = policy.target_abs_error.clone() / 1000u32;
        let stop = if ulp_stop > target_stop { ulp_stop } else { target_stop };
        if max_step < stop {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumericsError::NoConvergence(format!(
            "aberth sweeps stalled at degree {d}"
        )));
    }

    // Residual certification and Weierstrass inclusion radii.
    let lead_c = p.coefficients.last().unwrap();
    let mut out = Vec::with_capacity(d);
    for k in 0..d {
        let pz = p.eval(&z[k]);
        if pz.abs() > resid_target {
            return Err(NumericsError::NoConvergence(format!(
                "residual {} above target at root {k}",
                pz.abs().to_f64()
            )));
        }
        let mut denom = lead_c.clone();
        for j in 0..d {
            if j != k {
                denom = &denom * &(&z[k] - &z[j]);
            }
        }
        let bound = if denom.abs().is_zero() {
            super::float_inf(prec)
        } else {
            (pz.abs() / denom.abs()) * Float::with_val(prec, d as f64)
        };
        out.push(RootWithBound { root: z[k].clone(), error_bound: bound });
    }
    // Deterministic order: by (re, im) lexicographically.
    out.sort_by(|a, b| {
        let (ar, ai) = a.root.to_f64s();
        let (br, bi) = b.root.to_f64s();
        ar.partial_cmp(&br).unwrap_or(std::cmp::Ordering::Equal).then(
            ai.partial_cmp(&bi).unwrap_or(std::cmp::Ordering::Equal),
        )
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy(bits: u32, target: f64) -> PrecisionPolicy {
        PrecisionPolicy::new(bits, Float::with_val(bits, target), 3).unwrap()
    }

    fn c(re: f64, im: f64) -> AppComplex {
        AppComplex::from_f64(re, im, 128)
    }

    #[test]
    fn roots_of_z2_plus_1() {
        let p = PolyC::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let roots = poly_roots(&p, &policy(128, 1e-25)).unwrap();
        assert_eq!(roots.len(), 2);
        let mut ims: Vec<f64> = roots.iter().map(|r| r.root.im().to_f64()).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-24);
        assert!((ims[1] - 1.0).abs() < 1e-24);
        for r in &roots {
            assert!(r.root.re().to_f64().abs() < 1e-24);
            assert!(r.error_bound.to_f64() < 1e-20);
        }
    }

    #[test]
    fn roots_of_z3_minus_1() {
        let p = PolyC::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let roots = poly_roots(&p, &policy(128, 1e-25)).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            let modulus = r.root.abs().to_f64();
            assert!((modulus - 1.0).abs() < 1e-24);
        }
        // One root is exactly 1.
        assert!(roots.iter().any(|r| r.root.dist(&c(1.0, 0.0)).to_f64() < 1e-24));
    }

    #[test]
    fn constant_poly_is_degenerate() {
        let p = PolyC::new(vec![c(3.0, 0.0)]);
        assert!(matches!(
            poly_roots(&p, &policy(128, 1e-25)),
            Err(NumericsError::DegenerateInput(_))
        ));
    }

    #[test]
    fn vieta_first_identity() {
        // (z−1)(z−2)(z−3)(z−4) = 24 −50z +35z² −10z³ + z⁴
        let p = PolyC::new(vec![c(24.0, 0.0), c(-50.0, 0.0), c(35.0, 0.0), c(-10.0, 0.0), c(1.0, 0.0)]);
        let roots = poly_roots(&p, &policy(128, 1e-25)).unwrap();
        let sum: f64 = roots.iter().map(|r| r.root.re().to_f64()).sum();
        assert!((sum - 10.0).abs() < 1e-20);
    }
}
