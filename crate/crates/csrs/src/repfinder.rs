//! Enumerate SU(2) representation classes of 1/n-surgeries from the
//! A-polynomial and the Riley curve, with surgery-relation residuals,
//! nondegeneracy (twisted cohomology) checks, and the Casson count gate.

use rug::{Float, Integer, Rational};

use crate::algebra::{resultant, LPoly, LaurentPoly2, Ring};
use crate::linalg::CMatrix;
use crate::numerics::{poly_roots, AppComplex, CurveFn, NumericsError, PolyC, PrecisionPolicy};
use crate::presentations::{Gen, GroupWord, KnotPresentation};
use crate::riley::{
    evaluate_word, holonomy_matrices, longitude_eigenvalue_poly, Mat2Num, RileyData, RileyError,
};

#[derive(Debug, thiserror::Error)]
pub enum RepFinderError {
    #[error("elimination overflow: {0}")]
    EliminationOverflow(String),
    #[error("ambiguous class merge: points {0} and {1} coincide within tolerance but are not conjugate partners; escalate precision")]
    AmbiguousClass(String, String),
    #[error("rank ambiguous: singular value {0} within the tolerance band of the rank cut")]
    RankAmbiguous(f64),
    #[error(transparent)]
    Riley(#[from] RileyError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Where an A-polynomial came from; builtins outrank user files outrank
/// elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum APolySource {
    Builtin,
    UserSupplied,
    Eliminated,
}

/// Integer polynomial in the longitude eigenvalue L and meridian eigenvalue
/// M, with t = M².
#[derive(Clone, Debug, PartialEq)]
pub struct APoly {
    /// (L-power, M-power) → coefficient.
    pub terms: std::collections::BTreeMap<(u32, u32), Integer>,
    pub source: APolySource,
}

impl APoly {
    pub fn from_terms(
        terms: impl IntoIterator<Item = ((u32, u32), i64)>,
        source: APolySource,
    ) -> Self {
        let mut map = std::collections::BTreeMap::new();
        for ((l, m), c) in terms {
            if c != 0 {
                map.insert((l, m), Integer::from(c));
            }
        }
        APoly { terms: map, source }
    }

    pub fn coeff(&self, l: u32, m: u32) -> Integer {
        self.terms.get(&(l, m)).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficients as polynomials in L over ℤ[M], ascending in L.
    pub fn l_coefficients(&self) -> Vec<LPoly> {
        let maxl = self.terms.keys().map(|(l, _)| *l).max().unwrap_or(0);
        (0..=maxl)
            .map(|l| {
                LPoly::from_terms(
                    self.terms
                        .iter()
                        .filter(|((ll, _), _)| *ll == l)
                        .map(|((_, m), c)| (*m as i64, c.clone())),
                )
            })
            .collect()
    }

    /// The substitution M = L^{−n}, cleared to an honest polynomial in L.
    pub fn substitute_m_l_minus_n(&self, n: i64) -> LPoly {
        let mut p = LPoly::new();
        for ((l, m), c) in &self.terms {
            p.add_term(*l as i64 - n * (*m as i64), c.clone());
        }
        p.normalized_poly()
    }

    /// The (L, M) ↦ (L⁻¹, M⁻¹) dual, recleared to positive powers.
    pub fn reciprocal_dual(&self) -> APoly {
        let maxl = self.terms.keys().map(|(l, _)| *l).max().unwrap_or(0);
        let maxm = self.terms.keys().map(|(_, m)| *m).max().unwrap_or(0);
        let mut map = std::collections::BTreeMap::new();
        for ((l, m), c) in &self.terms {
            map.insert((maxl - l, maxm - m), c.clone());
        }
        APoly { terms: map, source: self.source }
    }

    /// Exact divisibility (as polynomials in L over ℤ[M]) of self by d.
    pub fn divisible_by(&self, d: &APoly) -> bool {
        let a = self.l_coefficients();
        let b = d.l_coefficients();
        if b.is_empty() {
            return false;
        }
        poly_divisible(&a, &b)
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut items: Vec<(&(u32, u32), &Integer)> = self.terms.iter().collect();
        items.sort_by(|x, y| (y.0 .0, y.0 .1).cmp(&(x.0 .0, x.0 .1)));
        let mut out = String::new();
        for (i, ((l, m), c)) in items.into_iter().enumerate() {
            let sign = if c.clone() >= 0 {
                if i == 0 { "" } else { " + " }
            } else if i == 0 {
                "-"
            } else {
                " - "
            };
            let mag = c.clone().abs();
            let mut body = String::new();
            if mag != 1 || (*l == 0 && *m == 0) {
                body.push_str(&format!("{mag}"));
            }
            match l {
                0 => {}
                1 => body.push('L'),
                _ => body.push_str(&format!("L^{l}")),
            }
            match m {
                0 => {}
                1 => body.push('M'),
                _ => body.push_str(&format!("M^{m}")),
            }
            out.push_str(sign);
            out.push_str(&body);
        }
        out
    }
}

/// Pseudo-remainder-based divisibility of polynomials (coeff vectors in an
/// auxiliary variable over ℤ[M]): a ≡ 0 mod b.
fn poly_divisible(a: &[LPoly], b: &[LPoly]) -> bool {
    let da = a.iter().rposition(|c| !c.is_zero());
    let db = b.iter().rposition(|c| !c.is_zero());
    let (da, db) = match (da, db) {
        (Some(x), Some(y)) => (x, y),
        (None, Some(_)) => return true,
        _ => return false,
    };
    if da < db {
        return false;
    }
    let mut r: Vec<LPoly> = a.to_vec();
    let lc = b[db].clone();
    let mut guard = 0;
    loop {
        let dr = match r.iter().rposition(|c| !c.is_zero()) {
            Some(d) => d,
            None => return true,
        };
        if dr < db {
            return false;
        }
        let rc = r[dr].clone();
        // r ← lc·r − rc·x^{dr−db}·b
        let mut next = vec![LPoly::new(); dr.max(r.len() - 1) + 1];
        for (i, ci) in r.iter().enumerate() {
            next[i] = ci.mul(&lc);
        }
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            let idx = dr - db + j;
            next[idx] = next[idx].sub(&bj.mul(&rc));
        }
        r = next;
        guard += 1;
        if guard > 10_000 {
            return false;
        }
    }
}

/// The paper's A-polynomial of 5₂:
/// −L³ − M¹⁴ + L²(1 − 2M² − 2M⁴ + M⁸ − M¹⁰) + LM⁴(−1 + M² − 2M⁶ − 2M⁸ + M¹⁰).
pub fn builtin_apoly_5_2() -> APoly {
    APoly::from_terms(
        [
            ((3, 0), -1),
            ((0, 14), -1),
            ((2, 0), 1),
            ((2, 2), -2),
            ((2, 4), -2),
            ((2, 8), 1),
            ((2, 10), -1),
            ((1, 4), -1),
            ((1, 6), 1),
            ((1, 10), -2),
            ((1, 12), -2),
            ((1, 14), 1),
        ],
        APolySource::Builtin,
    )
}

const ELIM_MAX_TERMS: usize = 200_000;
const ELIM_MAX_SPAN: i64 = 4_000;

/// Eliminate u between φ(t,u) and the longitude-eigenvalue condition
/// L = Λ₁₁(s, u), returning a polynomial over ℤ[L, M] (M = s) vanishing on
/// the eigenvalue variety. Exact resultants; squarefree, content-free,
/// sign-normalized output.
pub fn eliminate_apoly(
    rd: &RileyData,
    presentation: &KnotPresentation,
) -> Result<APoly, RepFinderError> {
    if presentation.relator_w.is_empty() || rd.phi.is_zero() || rd.deg_u == 0 {
        return Err(RepFinderError::EliminationOverflow(
            "degenerate input: empty relator or constant Riley polynomial".into(),
        ));
    }
    let lambda11 = longitude_eigenvalue_poly(presentation);

    // f = φ, g = L − Λ₁₁ as polynomials in u over ℤ[s^{±1}, L]
    // (LaurentPoly2 with the u32 slot holding the L-power).
    let lift = |c: &LPoly| -> LaurentPoly2 {
        let mut p = LaurentPoly2::new();
        for (e, a) in c.iter() {
            p.add_term(*e, 0, a.clone());
        }
        p
    };
    let f: Vec<LaurentPoly2> = rd.phi.u_coefficients().iter().map(lift).collect();
    let mut g: Vec<LaurentPoly2> = lambda11.u_coefficients().iter().map(|c| lift(c).neg()).collect();
    if g.is_empty() {
        g.push(LaurentPoly2::new());
    }
    g[0] = g[0].add(&LaurentPoly2::term(1, 0, 1)); // + L

    let res = resultant(&f, &g);
    if res.is_zero() {
        return Err(RepFinderError::EliminationOverflow(
            "resultant vanished identically (common factor between phi and the eigenvalue condition)".into(),
        ));
    }
    if res.num_terms() > ELIM_MAX_TERMS {
        return Err(RepFinderError::EliminationOverflow(format!(
            "resultant has {} terms",
            res.num_terms()
        )));
    }

    // Reshape ℤ[s^{±1}, L] → coefficients in L over ℤ[M] with M = s ≥ 0 powers.
    let min_s = res.iter().map(|((s, _), _)| *s).min().unwrap();
    let max_s = res.iter().map(|((s, _), _)| *s).max().unwrap();
    if max_s - min_s > ELIM_MAX_SPAN {
        return Err(RepFinderError::EliminationOverflow(format!(
            "M-degree span {} too large",
            max_s - min_s
        )));
    }
    let shifted = res.shift_s(-min_s);
    let maxl = shifted.iter().map(|((_, l), _)| *l).max().unwrap_or(0);
    let mut coeffs: Vec<LPoly> = (0..=maxl)
        .map(|l| {
            LPoly::from_terms(
                shifted
                    .iter()
                    .filter(|((_, ll), _)| *ll == l)
                    .map(|((s, _), c)| (*s, c.clone())),
            )
        })
        .collect();

    // Content (common ℤ[M] factor and integer content) out.
    let mut content = LPoly::new();
    for c in &coeffs {
        content = content.gcd(c);
    }
    if !(content.num_terms() == 1 && content.leading_coeff() == 1 && content.max_exp() == Some(0)) {
        for c in coeffs.iter_mut() {
            if !c.is_zero() {
                *c = c.exact_div_poly(&content);
            }
        }
    }
    // Squarefree in L: divide by gcd with the L-derivative.
    let deriv: Vec<LPoly> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&Integer::from(k as i64)))
        .collect();
    let g = poly_gcd_over_lpoly(&coeffs, &deriv);
    if g.iter().filter(|c| !c.is_zero()).count() > 0 {
        let dg = g.iter().rposition(|c| !c.is_zero()).unwrap();
        if dg > 0 {
            coeffs = exact_poly_div_over_lpoly(&coeffs, &g);
        }
    }
    // Re-strip monomial/content factors introduced by the gcd division.
    let mut content = LPoly::new();
    for c in &coeffs {
        content = content.gcd(c);
    }
    if !(content.num_terms() == 1 && content.leading_coeff() == 1 && content.max_exp() == Some(0)) && !content.is_zero() {
        for c in coeffs.iter_mut() {
            if !c.is_zero() {
                *c = c.exact_div_poly(&content);
            }
        }
    }
    let min_m = coeffs
        .iter()
        .filter_map(|c| c.min_exp())
        .min()
        .unwrap_or(0);
    if min_m != 0 {
        for c in coeffs.iter_mut() {
            *c = c.shift(-min_m);
        }
    }

    let mut terms = std::collections::BTreeMap::new();
    for (l, c) in coeffs.iter().enumerate() {
        for (m, a) in c.iter() {
            terms.insert((l as u32, *m as u32), a.clone());
        }
    }
    let mut a = APoly { terms, source: APolySource::Eliminated };
    // Sign normalization: the highest (L, M) term is made negative, matching
    // the paper's display convention (−L³ leads for 5₂).
    if let Some((&key, _)) = a.terms.iter().next_back() {
        if a.terms[&key] > 0 {
            for v in a.terms.values_mut() {
                let flipped = -v.clone();
                *v = flipped;
            }
        }
    }
    Ok(a)
}

/// gcd of two polynomials in an auxiliary variable with LPoly coefficients
/// (primitive pseudo-remainder sequence).
fn poly_gcd_over_lpoly(a: &[LPoly], b: &[LPoly]) -> Vec<LPoly> {
    fn deg(p: &[LPoly]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }
    fn primitive(p: &mut Vec<LPoly>) {
        let mut content = LPoly::new();
        for c in p.iter() {
            content = content.gcd(c);
        }
        if content.num_terms() > 0
            && !(content.num_terms() == 1 && content.leading_coeff() == 1 && content.max_exp() == Some(0))
        {
            for c in p.iter_mut() {
                if !c.is_zero() {
                    *c = c.exact_div_poly(&content);
                }
            }
        }
        // Normalize Laurent monomials away per coefficient vector.
        let min_m = p.iter().filter_map(|c| c.min_exp()).min().unwrap_or(0);
        if min_m != 0 {
            for c in p.iter_mut() {
                *c = c.shift(-min_m);
            }
        }
    }
    let mut x: Vec<LPoly> = a.to_vec();
    let mut y: Vec<LPoly> = b.to_vec();
    primitive(&mut x);
    primitive(&mut y);
    loop {
        let (dx, dy) = match (deg(&x), deg(&y)) {
            (_, None) => return x,
            (None, _) => return y,
            (Some(dx), Some(dy)) => (dx, dy),
        };
        if dx < dy {
            std::mem::swap(&mut x, &mut y);
            continue;
        }
        // pseudo-remainder x mod y
        let lc = y[dy].clone();
        let mut r = x.clone();
        let mut guard = 0;
        loop {
            let dr = match deg(&r) {
                Some(d) => d,
                None => break,
            };
            if dr < dy {
                break;
            }
            let rc = r[dr].clone();
            let mut next = vec![LPoly::new(); dr + 1];
            for (i, ci) in r.iter().enumerate() {
                next[i] = ci.mul(&lc);
            }
            for (j, bj) in y.iter().enumerate().take(dy + 1) {
                let idx = dr - dy + j;
                next[idx] = next[idx].sub(&bj.mul(&rc));
            }
            while next.last().map(|c| c.is_zero()).unwrap_or(false) {
                next.pop();
            }
            r = next;
            guard += 1;
            assert!(guard < 10_000, "gcd prs runaway");
        }
        if deg(&r).is_none() {
            return y;
        }
        let mut r = r;
        primitive(&mut r);
        x = y;
        y = r;
    }
}

/// Exact division of coefficient-vector polynomials (panics if inexact).
fn exact_poly_div_over_lpoly(a: &[LPoly], b: &[LPoly]) -> Vec<LPoly> {
    let da = a.iter().rposition(|c| !c.is_zero()).expect("zero dividend");
    let db = b.iter().rposition(|c| !c.is_zero()).expect("zero divisor");
    assert!(da >= db);
    let mut r: Vec<LPoly> = a.to_vec();
    let mut q = vec![LPoly::new(); da - db + 1];
    let lc = b[db].clone();
    loop {
        let dr = match r.iter().rposition(|c| !c.is_zero()) {
            Some(d) => d,
            None => break,
        };
        if dr < db {
            // Division was not exact after all: surface loudly.
            panic!("inexact squarefree division: remainder degree {dr}");
        }
        let qc = divide_lpoly_exact(&r[dr], &lc);
        q[dr - db] = qc.clone();
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            let idx = dr - db + j;
            r[idx] = r[idx].sub(&bj.mul(&qc));
        }
    }
    q
}

/// Exact LPoly division allowing monomial misalignment.
fn divide_lpoly_exact(a: &LPoly, b: &LPoly) -> LPoly {
    a.exact_div_poly(b)
}

/// 1/n surgery description.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurgerySpec {
    pub n: i64,
}

impl SurgerySpec {
    pub fn new(n: i64) -> Result<Self, RepFinderError> {
        if n == 0 {
            return Err(RepFinderError::EliminationOverflow("surgery coefficient 1/0".into()));
        }
        Ok(SurgerySpec { n })
    }

    /// The relator μλⁿ as a word.
    pub fn surgery_word(&self, presentation: &KnotPresentation) -> GroupWord {
        let lambda_power = if self.n >= 0 {
            presentation.longitude.pow(self.n as u32)
        } else {
            presentation.longitude.inverse().pow((-self.n) as u32)
        };
        presentation.meridian.concat(&lambda_power)
    }
}

/// A representation point of the surgered manifold.
#[derive(Clone, Debug)]
pub struct RepPoint {
    pub t: AppComplex,
    pub u: AppComplex,
    pub epsilon: i32,
    pub residual_phi: Float,
    pub residual_surgery: Float,
    pub is_su2: bool,
    pub is_nondegenerate: bool,
    pub class_id: usize,
    /// Meridian eigenvalue branch actually solved for (σ² = t); callers
    /// planning Kirk–Klassen paths need the branch, not just t.
    pub sigma: AppComplex,
    /// Newton-certified coordinate error bound.
    pub coord_error: Float,
}

impl RepPoint {
    pub fn arg_t(&self) -> f64 {
        self.t.arg().to_f64()
    }
}

/// Candidate surgery parameters t from the one-variable A-polynomial
/// specialization A(L, L^{−n}) = 0, t = L^{−2n}.
pub fn surgery_parameter_candidates(
    a: &APoly,
    spec: SurgerySpec,
    policy: &PrecisionPolicy,
) -> Result<Vec<AppComplex>, RepFinderError> {
    let (sigmas, _) = surgery_sigma_candidates(a, spec, policy)?;
    let mut out: Vec<AppComplex> = Vec::new();
    for s in sigmas {
        let t = &s * &s;
        if near(&t, 0.0, 0.0, 1e-9) || near(&t, 1.0, 0.0, 1e-9) {
            continue;
        }
        if !out.iter().any(|c| c.dist(&t).to_f64() < 1e-9) {
            out.push(t);
        }
    }
    sort_points(&mut out);
    Ok(out)
}

/// Candidate meridian eigenvalues σ = M = L^{−n} (finer than t = σ²: keeps
/// the branch) together with the longitude eigenvalues L.
fn surgery_sigma_candidates(
    a: &APoly,
    spec: SurgerySpec,
    policy: &PrecisionPolicy,
) -> Result<(Vec<AppComplex>, Vec<AppComplex>), RepFinderError> {
    if a.is_zero() {
        return Err(RepFinderError::EliminationOverflow("zero A-polynomial".into()));
    }
    let substituted = a.substitute_m_l_minus_n(spec.n);
    if substituted.num_terms() == 0 {
        return Err(RepFinderError::EliminationOverflow(
            "A(L, L^{-n}) vanished identically".into(),
        ));
    }
    if substituted.max_exp() == Some(0) {
        // Constant: no roots, no candidates.
        return Ok((Vec::new(), Vec::new()));
    }
    let prec = policy.working_bits;
    let maxe = substituted.max_exp().unwrap();
    let coeffs: Vec<AppComplex> = (0..=maxe)
        .map(|e| AppComplex::with_val(prec, &substituted.coeff(e)))
        .collect();
    let roots = poly_roots(&PolyC::new(coeffs), policy)?;
    let mut sigmas = Vec::new();
    let mut ls = Vec::new();
    for r in roots {
        let l = r.root;
        if l.abs().to_f64() < 1e-9 {
            continue;
        }
        let sigma = l.powi(-spec.n); // M = L^{−n}
        sigmas.push(sigma);
        ls.push(l);
    }
    Ok((sigmas, ls))
}

fn near(z: &AppComplex, re: f64, im: f64, tol: f64) -> bool {
    z.dist(&AppComplex::from_f64(re, im, z.precision_bits())).to_f64() < tol
}

fn sort_points(pts: &mut [AppComplex]) {
    pts.sort_by(|a, b| {
        let ka = (a.arg().to_f64(), a.abs().to_f64());
        let kb = (b.arg().to_f64(), b.abs().to_f64());
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
}

/// Newton polish of the square system
///   φ(σ², u) = 0,  σ · Λ₁₁(σ, u)^n = 1
/// in the meridian-eigenvalue coordinate σ (s = t^{1/2} branch included).
struct SurgerySystem<'a> {
    rd: &'a RileyData,
    lambda: &'a LaurentPoly2,
    lambda_ds: LaurentPoly2,
    lambda_du: LaurentPoly2,
    n: i64,
}

impl<'a> SurgerySystem<'a> {
    fn new(rd: &'a RileyData, lambda: &'a LaurentPoly2, n: i64) -> Self {
        SurgerySystem { rd, lambda, lambda_ds: lambda.dd_s(), lambda_du: lambda.dd_u(), n }
    }

    /// Returns (F1, F2) and the Jacobian rows at (σ, u).
    #[allow(clippy::type_complexity)]
    fn eval(
        &self,
        sigma: &AppComplex,
        u: &AppComplex,
    ) -> (AppComplex, AppComplex, [AppComplex; 2], [AppComplex; 2]) {
        let t = sigma * sigma;
        let f1 = self.rd.phi_at(&t, u);
        let two_sigma = &AppComplex::with_val(sigma.precision_bits(), 2) * sigma;
        let f1_dsigma = &CurveFn::dphi_dt(self.rd, &t, u) * &two_sigma;
        let f1_du = CurveFn::dphi_du(self.rd, &t, u);

        let lam = self.lambda.eval_su(sigma, u);
        let lam_ds = self.lambda_ds.eval_su(sigma, u);
        let lam_du = self.lambda_du.eval_su(sigma, u);
        let n = self.n;
        let one = AppComplex::with_val(sigma.precision_bits(), 1);
        // F2 = σ·Λ^n − 1, computed division-free on the n<0 side as σ − Λ^{−n}.
        let (f2, f2_dsigma, f2_du);
        if n >= 0 {
            let ln = lam.powi(n);
            let ln1 = lam.powi(n - 1);
            f2 = &(sigma * &ln) - &one;
            f2_dsigma = &ln + &(&(&AppComplex::with_val(sigma.precision_bits(), n as i32) * sigma) * &(&ln1 * &lam_ds));
            f2_du = &(&AppComplex::with_val(sigma.precision_bits(), n as i32) * sigma) * &(&ln1 * &lam_du);
        } else {
            let k = -n; // σ = Λ^k
            let lk = lam.powi(k);
            let lk1 = lam.powi(k - 1);
            f2 = sigma - &lk;
            f2_dsigma = &one - &(&AppComplex::with_val(sigma.precision_bits(), k as i32) * &(&lk1 * &lam_ds));
            f2_du = -&(&AppComplex::with_val(sigma.precision_bits(), k as i32) * &(&lk1 * &lam_du));
        }
        (f1, f2, [f1_dsigma, f1_du], [f2_dsigma, f2_du])
    }

    /// Newton iteration from (σ₀, u₀); returns the refined point and the
    /// final step size as the coordinate error certificate.
    fn polish(
        &self,
        sigma0: &AppComplex,
        u0: &AppComplex,
        policy: &PrecisionPolicy,
    ) -> Result<(AppComplex, AppComplex, Float), RepFinderError> {
        let prec = policy.working_bits;
        let _ = prec;
        let mut sigma = sigma0.clone();
        let mut u = u0.clone();
        let mut last_step;
        for _ in 0..64 {
            let (f1, f2, j1, j2) = self.eval(&sigma, &u);
            let det = &(&j1[0] * &j2[1]) - &(&j1[1] * &j2[0]);
            if det.abs() < policy.zero_threshold() {
                return Err(NumericsError::NewtonDivergence(format!("{sigma}")).into());
            }
            // Solve J δ = F
            let dsigma = &(&(&f1 * &j2[1]) - &(&f2 * &j1[1])) / &det;
            let du = &(&(&f2 * &j1[0]) - &(&f1 * &j2[0])) / &det;
            sigma = &sigma - &dsigma;
            u = &u - &du;
            if !(sigma.is_finite() && u.is_finite()) {
                return Err(NumericsError::NewtonDivergence("polish escaped".into()).into());
            }
            let step = dsigma.abs() + du.abs();
            let done = step <= policy.target_abs_error;
            last_step = step;
            if done {
                let (f1, f2, _, _) = self.eval(&sigma, &u);
                if f1.abs() <= policy.target_abs_error && f2.abs() <= policy.target_abs_error {
                    return Ok((sigma, u, last_step));
                }
            }
        }
        Err(NumericsError::NoConvergence("surgery polish stalled".into()).into())
    }
}

/// Outcome of the Casson-count gate.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CassonVerdict {
    pub lambda: String,
    pub expected_classes: u64,
    pub found_classes: u64,
    pub pass: bool,
}

/// λ(S³_{1/n}(K)) = n·Δ″(1)/2; the class count must equal 2|λ|.
pub fn casson_count_check(
    delta_second_at_one: &Rational,
    spec: SurgerySpec,
    found_classes: u64,
) -> CassonVerdict {
    let lambda = Rational::from((spec.n, 2)) * delta_second_at_one;
    let two_abs = lambda.clone().abs() * Rational::from(2);
    let expected = if two_abs.is_integer() {
        two_abs.numer().to_u64().unwrap_or(u64::MAX)
    } else {
        u64::MAX
    };
    CassonVerdict {
        lambda: lambda.to_string(),
        expected_classes: expected,
        found_classes,
        pass: expected == found_classes,
    }
}

/// Full enumeration: solve the A-polynomial specialization, fiber the Riley
/// curve, keep points satisfying ρ(μλⁿ) = +I, filter to SU(2), polish,
/// merge (t, t⁻¹) conjugates, and certify nondegeneracy.
pub fn find_representations(
    presentation: &KnotPresentation,
    rd: &RileyData,
    a: &APoly,
    spec: SurgerySpec,
    policy: &PrecisionPolicy,
) -> Result<Vec<RepPoint>, RepFinderError> {
    let lambda11 = longitude_eigenvalue_poly(presentation);
    let system = SurgerySystem::new(rd, &lambda11, spec.n);
    let surgery_word = spec.surgery_word(presentation);

    let (sigmas, _) = surgery_sigma_candidates(a, spec, policy)?;
    // Deduplicate σ candidates.
    let mut uniq: Vec<AppComplex> = Vec::new();
    for s in sigmas {
        let t = &s * &s;
        if near(&t, 0.0, 0.0, 1e-9) || near(&t, 1.0, 0.0, 1e-9) {
            continue;
        }
        if !uniq.iter().any(|c| c.dist(&s).to_f64() < 1e-9) {
            uniq.push(s);
        }
    }
    sort_points(&mut uniq);

    let class_tol = 1e-6f64.min(policy.target_abs_error.to_f64().max(1e-300).sqrt());
    let su2_tol = policy.zero_threshold().to_f64().max(1e-12).sqrt();

    let mut survivors: Vec<RepPoint> = Vec::new();
    for sigma in &uniq {
        let t = sigma * sigma;
        let fiber = rd.fiber(&t, policy)?;
        for u_raw in fiber {
            // Approximate surgery residual in the eigenvalue form first.
            let lam = lambda11.eval_su(sigma, &u_raw);
            let rel = &(sigma * &lam.powi(spec.n)) - &AppComplex::with_val(policy.working_bits, 1);
            if rel.abs().to_f64() > 1e-4 {
                continue;
            }
            // Newton polish on the square system.
            let (sig, u, err) = match system.polish(sigma, &u_raw, policy) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let t = &sig * &sig;
            // ε: does σ match the principal branch of √t or its negative?
            let principal = t.sqrt_principal();
            let eps = if sig.dist(&principal) < sig.dist(&-&principal) { 1 } else { -1 };
            // Residuals at the polished point, with the chosen ε.
            let residual_phi = rd.phi_at(&t, &u).abs();
            let w = evaluate_word(&surgery_word, &t, &u, eps)?;
            let residual_surgery = w.dist_to_identity();
            if residual_surgery.to_f64() > su2_tol {
                // +I fails: either a −I point (flagged non-representation,
                // dropped from the class list) or a spurious candidate.
                continue;
            }
            // SU(2) test: |t| = 1, t ≠ 1, u real, t + t⁻¹ − 2 < u < 0.
            let abs_t = t.abs().to_f64();
            let u_im = u.im().to_f64().abs();
            let u_re = u.re().to_f64();
            let lower = 2.0 * (t.re().to_f64() / abs_t.max(1e-300)) - 2.0;
            let is_su2 = (abs_t - 1.0).abs() < su2_tol
                && !near(&t, 1.0, 0.0, su2_tol)
                && u_im < su2_tol
                && u_re < -su2_tol
                && u_re > lower + su2_tol * lower.abs().max(1.0) * 1e-3;
            if !is_su2 {
                continue;
            }
            survivors.push(RepPoint {
                t,
                u,
                epsilon: eps,
                residual_phi,
                residual_surgery,
                is_su2,
                is_nondegenerate: false,
                class_id: 0,
                sigma: sig,
                coord_error: err,
            });
        }
    }

    if std::env::var_os("CSRS_DEBUG_REPS").is_some() {
        eprintln!("sigma candidates: {}", uniq.len());
        eprintln!("survivors before merge: {}", survivors.len());
        for s in &survivors {
            eprintln!(
                "  t = {:.6}+{:.6}i u = {:.6} eps = {} surg_res = {:.2e}",
                s.t.re().to_f64(),
                s.t.im().to_f64(),
                s.u.re().to_f64(),
                s.epsilon,
                s.residual_surgery.to_f64()
            );
        }
    }
    // Merge conjugate pairs (t, u) ~ (t̄ = t⁻¹, u); pick the Im t > 0
    // representative; reject non-conjugate coincidences.
    let mut used = vec![false; survivors.len()];
    let mut classes: Vec<RepPoint> = Vec::new();
    for i in 0..survivors.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut rep = survivors[i].clone();
        for j in i + 1..survivors.len() {
            if used[j] {
                continue;
            }
            let conj_t = survivors[i].t.conj();
            let same_u = survivors[i].u.dist(&survivors[j].u).to_f64() < class_tol;
            let is_conj = survivors[j].t.dist(&conj_t).to_f64() < class_tol && same_u;
            let is_dup = survivors[j].t.dist(&survivors[i].t).to_f64() < class_tol && same_u;
            if is_dup && survivors[j].epsilon == survivors[i].epsilon {
                used[j] = true; // numerically duplicated candidate
            } else if is_conj {
                used[j] = true;
                if survivors[j].t.im().to_f64() > rep.t.im().to_f64() {
                    rep = survivors[j].clone();
                }
            } else if is_dup {
                return Err(RepFinderError::AmbiguousClass(
                    format!("{}", survivors[i].t),
                    format!("{}", survivors[j].t),
                ));
            }
        }
        classes.push(rep);
    }

    // Deterministic output order by (arg t, Re u), then class ids.
    classes.sort_by(|a, b| {
        let ka = (a.arg_t(), a.u.re().to_f64());
        let kb = (b.arg_t(), b.u.re().to_f64());
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    for (i, c) in classes.iter_mut().enumerate() {
        c.class_id = i;
        c.is_nondegenerate = nondegeneracy_check(c, presentation, spec, policy)?;
    }
    Ok(classes)
}

/// Adjoint action of a 2×2 determinant-one matrix on sl₂ in the basis
/// (H, E, F), as a 3×3 complex matrix.
fn adjoint_action(m: &Mat2Num, prec: u32) -> CMatrix {
    // Basis: H = [[1,0],[0,−1]], E = [[0,1],[0,0]], F = [[0,0],[1,0]].
    // Ad_M(X) = M X M⁻¹, expanded in coordinates for M = [[a,b],[c,d]]:
    let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
    let two = AppComplex::with_val(prec, 2);
    let mut out = CMatrix::zero(3, 3, prec);
    // Ad(H) column: M H M⁻¹ = [[ad+bc, −2ab],[2cd, −(ad+bc)]]
    let ad_bc = &(a * d) + &(b * c);
    out.set(0, 0, ad_bc.clone());
    out.set(1, 0, -&(&two * &(a * b)));
    out.set(2, 0, &two * &(c * d));
    // Ad(E) column: M E M⁻¹ = [[−ac, a²],[−c², ac]]
    out.set(0, 1, -&(a * c));
    out.set(1, 1, a * a);
    out.set(2, 1, -&(c * c));
    // Ad(F) column: M F M⁻¹ = [[bd, −b²],[d², −bd]]
    out.set(0, 2, b * d);
    out.set(1, 2, -&(b * b));
    out.set(2, 2, d * d);
    out
}

/// Fox derivative ∂w/∂g evaluated under Ad∘ρ as a 3×3 complex matrix.
fn fox_derivative_ad(
    word: &GroupWord,
    gen: Gen,
    t: &AppComplex,
    u: &AppComplex,
    eps: i32,
) -> Result<CMatrix, RepFinderError> {
    let prec = t.precision_bits();
    let (x, y) = holonomy_matrices(t, u, eps)?;
    let xi = x.adjugate();
    let yi = y.adjugate();
    let mut prefix = Mat2Num::identity(prec);
    let mut acc = CMatrix::zero(3, 3, prec);
    for (g, sign) in word.expanded() {
        let letter = match (g, sign) {
            (Gen::X, 1) => &x,
            (Gen::X, _) => &xi,
            (Gen::Y, 1) => &y,
            (Gen::Y, _) => &yi,
        };
        if g == gen {
            // ∂(g·v)/∂g contributes Ad(prefix); ∂(g⁻¹·v)/∂g contributes
            // −Ad(prefix·g⁻¹).
            let contrib = if sign == 1 {
                adjoint_action(&prefix, prec)
            } else {
                let shifted = prefix.mul(letter);
                let adm = adjoint_action(&shifted, prec);
                negate(&adm)
            };
            acc = add(&acc, &contrib);
        }
        prefix = prefix.mul(letter);
    }
    Ok(acc)
}

fn add(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zero(a.rows, a.cols, a.prec());
    for r in 0..a.rows {
        for c in 0..a.cols {
            out.set(r, c, a.at(r, c) + b.at(r, c));
        }
    }
    out
}

fn negate(a: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zero(a.rows, a.cols, a.prec());
    for r in 0..a.rows {
        for c in 0..a.cols {
            out.set(r, c, -a.at(r, c));
        }
    }
    out
}

/// H¹(S³_{1/n}(K); sl₂_{Ad∘ρ}) = 0 test via the Fox-calculus cochain complex
/// of the two-generator, two-relator presentation ⟨x, y | wxw⁻¹y⁻¹, μλⁿ⟩.
/// Rank decisions use singular values; values inside the tolerance band make
/// the rank ambiguous (escalate precision).
pub fn nondegeneracy_check(
    rep: &RepPoint,
    presentation: &KnotPresentation,
    spec: SurgerySpec,
    policy: &PrecisionPolicy,
) -> Result<bool, RepFinderError> {
    let prec = policy.working_bits;
    let t = &rep.t;
    let u = &rep.u;
    let eps = rep.epsilon;

    // Relator 1: w x w⁻¹ y⁻¹; relator 2: μ λⁿ.
    let r1 = presentation
        .relator_w
        .concat(&presentation.meridian)
        .concat(&presentation.relator_w.inverse())
        .concat(&GroupWord::single(Gen::Y, -1));
    let r2 = spec.surgery_word(presentation);

    // d¹: 6×6 from the four 3×3 Fox blocks.
    let blocks = [
        [fox_derivative_ad(&r1, Gen::X, t, u, eps)?, fox_derivative_ad(&r1, Gen::Y, t, u, eps)?],
        [fox_derivative_ad(&r2, Gen::X, t, u, eps)?, fox_derivative_ad(&r2, Gen::Y, t, u, eps)?],
    ];
    let mut d1 = CMatrix::zero(6, 6, prec);
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, blk) in row.iter().enumerate() {
            for r in 0..3 {
                for c in 0..3 {
                    d1.set(3 * bi + r, 3 * bj + c, blk.at(r, c).clone());
                }
            }
        }
    }
    // d⁰: 6×3 with blocks Ad(ρ(x)) − I and Ad(ρ(y)) − I.
    let (x, y) = holonomy_matrices(t, u, eps)?;
    let adx = adjoint_action(&x, prec);
    let ady = adjoint_action(&y, prec);
    let mut d0 = CMatrix::zero(6, 3, prec);
    let one = AppComplex::with_val(prec, 1);
    for r in 0..3 {
        for c in 0..3 {
            let xv = if r == c { adx.at(r, c) - &one } else { adx.at(r, c).clone() };
            let yv = if r == c { ady.at(r, c) - &one } else { ady.at(r, c).clone() };
            d0.set(r, c, xv);
            d0.set(3 + r, c, yv);
        }
    }

    let sv1 = d1.singular_values();
    let sv0 = d0.singular_values();
    let cut = policy.zero_threshold().to_f64().sqrt();
    let band = 32.0;
    let count_above = |sv: &[Float]| -> Result<usize, RepFinderError> {
        let mut n = 0;
        for s in sv {
            let v = s.to_f64();
            if v > cut * band {
                n += 1;
            } else if v > cut / band {
                return Err(RepFinderError::RankAmbiguous(v));
            }
        }
        Ok(n)
    };
    let rank_d1 = count_above(&sv1)?;
    let rank_d0 = count_above(&sv0)?;
    // dim H¹ = dim ker d¹ − rank d⁰ = (6 − rank d¹) − rank d⁰.
    Ok(6 - rank_d1 == rank_d0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{builtin_5_2, two_bridge_presentation};
    use crate::riley::riley_polynomial;

    fn policy(bits: u32, target: f64) -> PrecisionPolicy {
        PrecisionPolicy::new(bits, Float::with_val(bits, target), 3).unwrap()
    }

    #[test]
    fn builtin_apoly_matches_display() {
        let a = builtin_apoly_5_2();
        assert_eq!(a.coeff(3, 0), Integer::from(-1));
        assert_eq!(a.coeff(0, 0), Integer::from(0));
        assert_eq!(a.num_terms(), 12);
    }

    #[test]
    fn toy_apoly_excludes_unit_t() {
        // A = L − 1: root L = 1 → t = 1 discarded.
        let a = APoly::from_terms([((1, 0), 1), ((0, 0), -1)], APolySource::UserSupplied);
        let cands =
            surgery_parameter_candidates(&a, SurgerySpec::new(-2).unwrap(), &policy(128, 1e-20))
                .unwrap();
        assert!(cands.is_empty());
    }

    #[test]
    fn casson_verdicts() {
        let v = casson_count_check(&Rational::from(4), SurgerySpec::new(-2).unwrap(), 8);
        assert!(v.pass);
        assert_eq!(v.lambda, "-4");
        let v2 = casson_count_check(&Rational::from(2), SurgerySpec::new(-1).unwrap(), 2);
        assert!(v2.pass);
        let v3 = casson_count_check(&Rational::from(4), SurgerySpec::new(-2).unwrap(), 7);
        assert!(!v3.pass);
    }

    #[test]
    fn candidates_5_2_contain_table_t_values() {
        let a = builtin_apoly_5_2();
        let pol = policy(192, 1e-30);
        let cands = surgery_parameter_candidates(&a, SurgerySpec::new(-2).unwrap(), &pol).unwrap();
        let table = [
            (0.716932, 0.697143),
            (0.309017, 0.951057),
            (-0.339570, 0.940581),
            (-0.778407, 0.627759),
            (-0.809017, 0.587785),
            (-0.905371, 0.424621),
            (-0.912712, 0.408603),
            (-0.988857, 0.148870),
        ];
        for (re, im) in table {
            let target = AppComplex::from_f64(re, im, 192);
            let hit = cands.iter().any(|c| c.dist(&target).to_f64() < 1e-5)
                || cands.iter().any(|c| c.dist(&target.conj()).to_f64() < 1e-5);
            assert!(hit, "missing table candidate {re}+{im}i");
        }
    }

    #[test]
    fn eliminated_5_2_divisible_by_builtin() {
        let pres = builtin_5_2();
        let pol = policy(128, 1e-20);
        let rd = riley_polynomial(&pres, &pol).unwrap();
        let a = eliminate_apoly(&rd, &pres).unwrap();
        assert_eq!(a.source, APolySource::Eliminated);
        let builtin = builtin_apoly_5_2();
        let direct = a.divisible_by(&builtin) || a == builtin;
        let dual = a.reciprocal_dual().divisible_by(&builtin) || a.reciprocal_dual() == builtin;
        assert!(
            direct || dual,
            "eliminated A-polynomial {} not divisible by the builtin {}",
            a.display(),
            builtin.display()
        );
    }

    #[test]
    fn eliminated_trefoil_has_classical_component() {
        let pres = two_bridge_presentation(3, 1).unwrap();
        let pol = policy(128, 1e-20);
        let rd = riley_polynomial(&pres, &pol).unwrap();
        let a = eliminate_apoly(&rd, &pres).unwrap();
        // Classical nonabelian component: L M⁶ + 1 (or its dual L + M⁶).
        let comp1 = APoly::from_terms([((1, 6), 1), ((0, 0), 1)], APolySource::UserSupplied);
        let comp2 = APoly::from_terms([((1, 0), 1), ((0, 6), 1)], APolySource::UserSupplied);
        let ok = a.divisible_by(&comp1)
            || a.divisible_by(&comp2)
            || a == comp1
            || a == comp2
            || {
                let d = a.reciprocal_dual();
                d.divisible_by(&comp1) || d.divisible_by(&comp2) || d == comp1 || d == comp2
            };
        assert!(ok, "trefoil elimination {} lacks the classical component", a.display());
    }

    #[test]
    fn degenerate_elimination_rejected() {
        let pres = builtin_5_2();
        let pol = policy(128, 1e-20);
        let rd = riley_polynomial(&pres, &pol).unwrap();
        let mut empty = pres.clone();
        empty.relator_w = GroupWord::empty();
        assert!(matches!(
            eliminate_apoly(&rd, &empty),
            Err(RepFinderError::EliminationOverflow(_))
        ));
    }

    #[test]
    fn finds_8_classes_for_5_2_surgery_minus_half() {
        let pres = builtin_5_2();
        let pol = policy(192, 1e-30);
        let rd = riley_polynomial(&pres, &pol).unwrap();
        let a = builtin_apoly_5_2();
        let spec = SurgerySpec::new(-2).unwrap();
        let reps = find_representations(&pres, &rd, &a, spec, &pol).unwrap();
        assert_eq!(reps.len(), 8, "expected the paper's 8 classes");
        // Paper table rows (t, u, ε), 6 significant digits.
        let table: [(f64, f64, f64, i32); 8] = [
            (0.716932, 0.697143, -0.0755806, 1),
            (0.309017, 0.951057, -1.00000, -1),
            (-0.339570, 0.940581, -2.41421, 1),
            (-0.778407, 0.627759, -1.69110, -1),
            (-0.809017, 0.587785, -1.00000, 1),
            (-0.905371, 0.424621, -2.16991, 1),
            (-0.912712, 0.408603, -3.62043, -1),
            (-0.988857, 0.148870, -2.41421, -1),
        ];
        for (re, im, uu, eps) in table {
            let target_t = AppComplex::from_f64(re, im, 192);
            let found = reps.iter().find(|r| r.t.dist(&target_t).to_f64() < 5e-6);
            let found = found.unwrap_or_else(|| panic!("missing class at t = {re}+{im}i"));
            assert!((found.u.re().to_f64() - uu).abs() < 5e-6 * uu.abs().max(1.0), "u mismatch");
            assert_eq!(found.epsilon, eps, "epsilon mismatch at t = {re}+{im}i");
            assert!(found.is_su2);
            assert!(found.is_nondegenerate, "class at {re}+{im}i flagged degenerate");
        }
        // Casson gate.
        let verdict = casson_count_check(&Rational::from(4), spec, reps.len() as u64);
        assert!(verdict.pass);
    }

    #[test]
    fn trefoil_minus_one_has_2_classes() {
        let pres = two_bridge_presentation(3, 1).unwrap();
        let pol = policy(192, 1e-30);
        let rd = riley_polynomial(&pres, &pol).unwrap();
        let a = eliminate_apoly(&rd, &pres).unwrap();
        let spec = SurgerySpec::new(-1).unwrap();
        let reps = find_representations(&pres, &rd, &a, spec, &pol).unwrap();
        assert_eq!(reps.len(), 2, "Sigma(2,3,5) has two SU(2) classes");
        for r in &reps {
            assert!(r.is_su2 && r.is_nondegenerate);
        }
    }

    #[test]
    fn doubled_precision_stability() {
        // Re-running at doubled precision moves each class by less than its
        // reported coordinate error.
        let pres = builtin_5_2();
        let a = builtin_apoly_5_2();
        let spec = SurgerySpec::new(-2).unwrap();
        let lo = policy(192, 1e-30);
        let hi = policy(384, 1e-30);
        let rd_lo = riley_polynomial(&pres, &lo).unwrap();
        let rd_hi = riley_polynomial(&pres, &hi).unwrap();
        let reps_lo = find_representations(&pres, &rd_lo, &a, spec, &lo).unwrap();
        let reps_hi = find_representations(&pres, &rd_hi, &a, spec, &hi).unwrap();
        assert_eq!(reps_lo.len(), reps_hi.len());
        for (r1, r2) in reps_lo.iter().zip(&reps_hi) {
            let dt = r1.t.dist(&r2.t).to_f64();
            let du = r1.u.dist(&r2.u).to_f64();
            let budget = r1.coord_error.to_f64().max(1e-28);
            assert!(dt <= budget && du <= budget, "class {} moved by ({dt:.2e}, {du:.2e})", r1.class_id);
        }
    }

    #[test]
    fn su2_filter_respects_involution() {
        // is_su2(t, u) must agree for (t, u) and (t⁻¹, u): on the unit circle
        // t⁻¹ = conj t, and the condition only involves Re t and u.
        let pres = builtin_5_2();
        let pol = policy(192, 1e-30);
        let rd = riley_polynomial(&pres, &pol).unwrap();
        let a = builtin_apoly_5_2();
        let reps =
            find_representations(&pres, &rd, &a, SurgerySpec::new(-2).unwrap(), &pol).unwrap();
        for r in &reps {
            assert!(r.t.im().to_f64() > 0.0, "class representative must take Im t > 0");
        }
    }
}
