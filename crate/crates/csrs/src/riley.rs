//! Riley matrices, the Riley polynomial φ(t,u) ∈ ℤ[t^{±1/2}, u], its
//! discriminant and branch points, and the Alexander specialization.
//!
//! All symbolic computation is exact over ℤ[s^{±1}, u] with s = t^{1/2};
//! branch points are the only numerically solved quantity.

use rug::{Integer, Rational};

use crate::algebra::{resultant, LPoly, LaurentPoly2, Mat2Sym, Ring};
use crate::numerics::{
    poly_roots, AppComplex, CurveFn, NumericsError, PolyC, PrecisionPolicy,
};
use crate::presentations::{Gen, GroupWord, KnotPresentation};

#[derive(Debug, thiserror::Error)]
pub enum RileyError {
    #[error("t must be nonzero")]
    ZeroT,
    #[error("normalization failure: {0}")]
    NormalizationFailure(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// ρ(x) = [[s, 1/s], [0, 1/s]] over ℤ[s^{±1}, u].
fn sym_x() -> Mat2Sym {
    Mat2Sym {
        a: LaurentPoly2::term(1, 1, 0),
        b: LaurentPoly2::term(1, -1, 0),
        c: LaurentPoly2::new(),
        d: LaurentPoly2::term(1, -1, 0),
    }
}

/// ρ(y) = [[s, 0], [−su, 1/s]] over ℤ[s^{±1}, u].
fn sym_y() -> Mat2Sym {
    Mat2Sym {
        a: LaurentPoly2::term(1, 1, 0),
        b: LaurentPoly2::new(),
        c: LaurentPoly2::term(-1, 1, 1),
        d: LaurentPoly2::term(1, -1, 0),
    }
}

/// Exact product of Riley matrices over a freely reduced word (ε = +1; for
/// even-length words the result is ε-independent, and the longitude and
/// two-bridge relators are always even).
pub fn evaluate_word_symbolic(word: &GroupWord) -> Mat2Sym {
    let x = sym_x();
    let xi = x.adjugate();
    let y = sym_y();
    let yi = y.adjugate();
    let mut acc = Mat2Sym::identity();
    for (g, sign) in word.expanded() {
        let m = match (g, sign) {
            (Gen::X, 1) => &x,
            (Gen::X, _) => &xi,
            (Gen::Y, 1) => &y,
            (Gen::Y, _) => &yi,
        };
        acc = acc.mul(m);
    }
    acc
}

/// The Riley polynomial data of a presentation.
#[derive(Clone, Debug)]
pub struct RileyData {
    /// φ(t,u) = w₁₁ + (1−t)w₁₂ as an exact element of ℤ[s^{±1}, u].
    pub phi: LaurentPoly2,
    pub deg_u: u32,
    /// resultant_u(φ, ∂φ/∂u) ∈ ℤ[s^{±1}], exact.
    pub disc_u: LPoly,
    /// Numeric t-locations over which fibers collide: roots of disc_u and of
    /// the u-leading coefficient, at the precision used to build this value.
    pub branch_points_t: Vec<AppComplex>,
    /// Excluded base points of the cover: t ∈ {0, 1}.
    pub excluded_t: [f64; 2],
    // Cached per-u-power t-coefficients (φ is even in s) and t-derivatives,
    // for fast numeric evaluation along paths.
    coeffs_t: Vec<LPoly>,
    dcoeffs_t: Vec<LPoly>,
}

/// Compute the Riley polynomial φ = w₁₁ + (1−t)w₁₂ exactly, its u-degree,
/// discriminant, and the numeric branch points at the policy precision.
pub fn riley_polynomial(
    presentation: &KnotPresentation,
    policy: &PrecisionPolicy,
) -> Result<RileyData, RileyError> {
    let w = evaluate_word_symbolic(&presentation.relator_w);
    // (1 − t) = 1 − s²
    let one_minus_t = LaurentPoly2::constant(1).sub(&LaurentPoly2::term(1, 2, 0));
    let phi = w.a.add(&one_minus_t.mul(&w.b));
    RileyData::from_phi(phi, policy)
}

impl RileyData {
    pub fn from_phi(phi: LaurentPoly2, policy: &PrecisionPolicy) -> Result<Self, RileyError> {
        let deg_u = phi.deg_u();
        let dphi = phi.dd_u();
        let disc_u = resultant(&phi.u_coefficients(), &dphi.u_coefficients());

        if !phi.is_even_in_s() {
            return Err(RileyError::NormalizationFailure(
                "Riley polynomial has odd half-powers of t; relator must have even length".into(),
            ));
        }
        let coeffs_t: Vec<LPoly> =
            phi.u_coefficients().iter().map(|c| c.halve_exponents()).collect();
        let dcoeffs_t: Vec<LPoly> = coeffs_t.iter().map(|c| c.derivative()).collect();

        // Branch points: roots of disc_u and of the u-leading coefficient.
        let mut branch = Vec::new();
        let lead = phi.u_coefficient(deg_u);
        for poly in [&disc_u, &lead] {
            branch.extend(laurent_roots_in_t(poly, policy)?);
        }
        // Deduplicate within tolerance; drop t = 0 and t = 1 (excluded points
        // of the cover, tracked separately).
        let mut dedup: Vec<AppComplex> = Vec::new();
        let tol = 1e-9;
        for b in branch {
            let d0 = b.abs().to_f64();
            let d1 = b.dist(&AppComplex::from_f64(1.0, 0.0, b.precision_bits())).to_f64();
            if d0 < tol || d1 < tol {
                continue;
            }
            if !dedup.iter().any(|c| c.dist(&b).to_f64() < tol) {
                dedup.push(b);
            }
        }
        dedup.sort_by(|a, b| {
            let (ar, ai) = a.to_f64s();
            let (br, bi) = b.to_f64s();
            (ar, ai).partial_cmp(&(br, bi)).unwrap_or(std::cmp::Ordering::Equal)
        });

        Ok(RileyData {
            phi,
            deg_u,
            disc_u,
            branch_points_t: dedup,
            excluded_t: [0.0, 1.0],
            coeffs_t,
            dcoeffs_t,
        })
    }

    /// φ(t, u), numeric, assuming the even-in-s representation (t = s²).
    pub fn phi_at(&self, t: &AppComplex, u: &AppComplex) -> AppComplex {
        horner_u(&self.coeffs_t, t, u)
    }

    /// The specialization φ(t, ·) as a numeric polynomial in u.
    pub fn specialize(&self, t: &AppComplex) -> PolyC {
        let prec = t.precision_bits();
        PolyC::new(
            self.coeffs_t
                .iter()
                .map(|c| if c.num_terms() == 0 { AppComplex::zero(prec) } else { c.eval(t) })
                .collect(),
        )
    }
}

fn horner_u(coeffs_t: &[LPoly], t: &AppComplex, u: &AppComplex) -> AppComplex {
    let prec = t.precision_bits().max(u.precision_bits());
    let mut acc = AppComplex::zero(prec);
    for c in coeffs_t.iter().rev() {
        let cv = if c.num_terms() == 0 { AppComplex::zero(prec) } else { c.eval(t) };
        acc = &(&acc * u) + &cv;
    }
    acc
}

impl CurveFn for RileyData {
    fn phi(&self, t: &AppComplex, u: &AppComplex) -> AppComplex {
        self.phi_at(t, u)
    }

    fn dphi_du(&self, t: &AppComplex, u: &AppComplex) -> AppComplex {
        let prec = t.precision_bits().max(u.precision_bits());
        let mut acc = AppComplex::zero(prec);
        for (j, c) in self.coeffs_t.iter().enumerate().skip(1).rev() {
            let cv = if c.num_terms() == 0 {
                AppComplex::zero(prec)
            } else {
                AppComplex::with_val(prec, j as u32) * &c.eval(t)
            };
            acc = &(&acc * u) + &cv;
        }
        acc
    }

    fn dphi_dt(&self, t: &AppComplex, u: &AppComplex) -> AppComplex {
        horner_u(&self.dcoeffs_t, t, u)
    }

    fn dphi_duu(&self, t: &AppComplex, u: &AppComplex) -> AppComplex {
        let prec = t.precision_bits().max(u.precision_bits());
        let mut acc = AppComplex::zero(prec);
        for (j, c) in self.coeffs_t.iter().enumerate().skip(2).rev() {
            let cv = if c.num_terms() == 0 {
                AppComplex::zero(prec)
            } else {
                AppComplex::with_val(prec, (j * (j - 1)) as u32) * &c.eval(t)
            };
            acc = &(&acc * u) + &cv;
        }
        acc
    }

    fn degree_u(&self) -> usize {
        self.deg_u as usize
    }

    fn fiber(&self, t: &AppComplex, policy: &PrecisionPolicy) -> Result<Vec<AppComplex>, NumericsError> {
        let p = self.specialize(t);
        Ok(poly_roots(&p, policy)?.into_iter().map(|r| r.root).collect())
    }
}

/// Numeric roots of a Laurent polynomial interpreted in the t-plane. Even
/// polynomials are halved to live in t; otherwise roots are found in s and
/// squared.
pub(crate) fn laurent_roots_in_t(
    p: &LPoly,
    policy: &PrecisionPolicy,
) -> Result<Vec<AppComplex>, RileyError> {
    let norm = p.normalized_poly();
    if norm.num_terms() == 0 || norm.max_exp() == Some(0) {
        return Ok(Vec::new());
    }
    let prec = policy.working_bits;
    let (poly_var, square_after) = if norm.is_even() {
        (norm.halve_exponents(), false)
    } else {
        (norm.clone(), true)
    };
    let maxe = poly_var.max_exp().unwrap_or(0);
    let coeffs: Vec<AppComplex> = (0..=maxe)
        .map(|e| {
            let c = poly_var.coeff(e);
            AppComplex::with_val(prec, &c)
        })
        .collect();
    let roots = poly_roots(&PolyC::new(coeffs), policy)?;
    Ok(roots
        .into_iter()
        .map(|r| if square_after { &r.root * &r.root } else { r.root })
        .collect())
}

/// Numeric 2×2 complex matrix.
#[derive(Clone, Debug)]
pub struct Mat2Num {
    pub a: AppComplex,
    pub b: AppComplex,
    pub c: AppComplex,
    pub d: AppComplex,
}

impl Mat2Num {
    pub fn identity(prec: u32) -> Self {
        Mat2Num {
            a: AppComplex::with_val(prec, 1),
            b: AppComplex::zero(prec),
            c: AppComplex::zero(prec),
            d: AppComplex::with_val(prec, 1),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat2Num {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    /// Inverse for determinant-one matrices.
    pub fn adjugate(&self) -> Self {
        Mat2Num { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn neg(&self) -> Self {
        Mat2Num { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    /// Frobenius distance to another matrix.
    pub fn dist(&self, o: &Self) -> rug::Float {
        let mut acc = self.a.dist(&o.a).square();
        acc += self.b.dist(&o.b).square();
        acc += self.c.dist(&o.c).square();
        acc += self.d.dist(&o.d).square();
        acc.sqrt()
    }

    pub fn dist_to_identity(&self) -> rug::Float {
        self.dist(&Mat2Num::identity(self.a.precision_bits()))
    }
}

/// The paper's holonomy matrices at a numeric point, with the principal
/// square root √(re^{iθ}) = √r e^{iθ/2}, −π < θ ≤ π.
pub fn holonomy_matrices(
    t: &AppComplex,
    u: &AppComplex,
    epsilon: i32,
) -> Result<(Mat2Num, Mat2Num), RileyError> {
    let prec = t.precision_bits().max(u.precision_bits());
    if t.abs().to_f64() == 0.0 {
        return Err(RileyError::ZeroT);
    }
    let s = t.sqrt_principal();
    let si = s.recip();
    let e = AppComplex::with_val(prec, epsilon);
    let rho_x = Mat2Num {
        a: &e * &s,
        b: &e * &si,
        c: AppComplex::zero(prec),
        d: &e * &si,
    };
    let rho_y = Mat2Num {
        a: &e * &s,
        b: AppComplex::zero(prec),
        c: -&(&(&e * &s) * u),
        d: &e * &si,
    };
    Ok((rho_x, rho_y))
}

/// Evaluate a word under ρ_{t,u,ε} numerically (exact adjugate inverses).
pub fn evaluate_word(
    word: &GroupWord,
    t: &AppComplex,
    u: &AppComplex,
    epsilon: i32,
) -> Result<Mat2Num, RileyError> {
    let prec = t.precision_bits().max(u.precision_bits());
    let (x, y) = holonomy_matrices(t, u, epsilon)?;
    let xi = x.adjugate();
    let yi = y.adjugate();
    let mut acc = Mat2Num::identity(prec);
    for (g, sign) in word.expanded() {
        let m = match (g, sign) {
            (Gen::X, 1) => &x,
            (Gen::X, _) => &xi,
            (Gen::Y, 1) => &y,
            (Gen::Y, _) => &yi,
        };
        acc = acc.mul(m);
    }
    Ok(acc)
}

/// The (1,1) entry of the symbolic longitude matrix: on the Riley curve this
/// is the longitude eigenvalue L for the meridian eigenvector (1,0)ᵀ.
pub fn longitude_eigenvalue_poly(presentation: &KnotPresentation) -> LaurentPoly2 {
    evaluate_word_symbolic(&presentation.longitude).a
}

/// Full symbolic longitude matrix.
pub fn longitude_matrix_symbolic(presentation: &KnotPresentation) -> Mat2Sym {
    evaluate_word_symbolic(&presentation.longitude)
}

/// The Alexander specialization Δ(t) = φ(t, 0), normalized so Δ(1) = 1 and
/// the exponent support is symmetric. Returned in s-powers (s = t^{1/2});
/// genuine knots yield even powers only.
pub fn alexander_specialization(rd: &RileyData) -> Result<LPoly, RileyError> {
    let phi0 = rd.phi.at_u_zero();
    if phi0.num_terms() == 0 {
        return Err(RileyError::NormalizationFailure("phi(t, 0) is identically zero".into()));
    }
    let at_one = phi0.eval_int(&Rational::from(1));
    if at_one == 0 {
        return Err(RileyError::NormalizationFailure("phi(1, 0) = 0".into()));
    }
    if at_one.clone().abs() != 1 {
        return Err(RileyError::NormalizationFailure(format!(
            "phi(1,0) = {at_one} is not a unit; cannot normalize to Delta(1) = 1"
        )));
    }
    let (min_e, max_e) = (phi0.min_exp().unwrap(), phi0.max_exp().unwrap());
    let shift = -(min_e + max_e) / 2;
    let mut delta = phi0.shift(shift);
    if at_one < 0 {
        delta = delta.scale(&Integer::from(-1));
    }
    Ok(delta)
}

/// Exact Δ''(1) of a normalized Alexander polynomial given in s-powers
/// (t-power k/2 per s-power k): Σ aₖ · (k/2)(k/2 − 1).
pub fn second_derivative_at_one(delta: &LPoly) -> Rational {
    let mut acc = Rational::new();
    for (k, a) in delta.iter() {
        let m = Rational::from((*k, 2));
        let term = m.clone() * (m - Rational::from(1)) * Rational::from(a);
        acc += term;
    }
    acc
}

/// Display an even-in-s Laurent polynomial in the t variable.
pub fn display_in_t(p: &LPoly) -> String {
    if p.is_even() {
        p.halve_exponents().display("t")
    } else {
        format!("(in s = t^(1/2))  {}", p.display("s"))
    }
}

/// Check whether φ₁ = ±s^k · φ₂ for some integer k (unit equivalence in
/// ℤ[t^{±1/2}, u]). Returns the (sign, k) witness.
pub fn unit_equivalent(phi1: &LaurentPoly2, phi2: &LaurentPoly2) -> Option<(i32, i64)> {
    if phi1.num_terms() != phi2.num_terms() {
        return None;
    }
    if phi1.num_terms() == 0 {
        return Some((1, 0));
    }
    // Align the lexicographically largest (u, s) terms.
    let lead = |p: &LaurentPoly2| {
        p.iter()
            .map(|((s, u), c)| ((*u, *s), c.clone()))
            .max_by(|a, b| a.0.cmp(&b.0))
            .unwrap()
    };
    let ((u1, s1), c1) = lead(phi1);
    let ((u2, s2), c2) = lead(phi2);
    if u1 != u2 || c1.clone().abs() != c2.clone().abs() {
        return None;
    }
    let k = s1 - s2;
    let sign: i32 = if c1 == c2 { 1 } else { -1 };
    let mut candidate = phi2.shift_s(k);
    if sign < 0 {
        candidate = candidate.neg();
    }
    if candidate == *phi1 {
        Some((sign, k))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;
    use crate::presentations::{builtin_5_2, two_bridge_presentation};
    use rug::Float;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::new(128, Float::with_val(128, 1e-25), 2).unwrap()
    }

    /// The paper's φ for 5₂, keyed by (s-power, u-power):
    /// −(t⁻²+t²)u + (t⁻¹+t)(2+3u+2u²) − (3+6u+3u²+u³).
    fn paper_phi_5_2() -> LaurentPoly2 {
        let mut p = LaurentPoly2::new();
        // u⁰: 2t + 2t⁻¹ − 3
        p.add_term(2, 0, Integer::from(2));
        p.add_term(-2, 0, Integer::from(2));
        p.add_term(0, 0, Integer::from(-3));
        // u¹: −t² − t⁻² + 3t + 3t⁻¹ − 6
        p.add_term(4, 1, Integer::from(-1));
        p.add_term(-4, 1, Integer::from(-1));
        p.add_term(2, 1, Integer::from(3));
        p.add_term(-2, 1, Integer::from(3));
        p.add_term(0, 1, Integer::from(-6));
        // u²: 2t + 2t⁻¹ − 3
        p.add_term(2, 2, Integer::from(2));
        p.add_term(-2, 2, Integer::from(2));
        p.add_term(0, 2, Integer::from(-3));
        // u³: −1
        p.add_term(0, 3, Integer::from(-1));
        p
    }

    #[test]
    fn riley_5_2_matches_paper_exactly() {
        let rd = riley_polynomial(&builtin_5_2(), &policy()).unwrap();
        assert_eq!(rd.phi, paper_phi_5_2());
        assert_eq!(rd.deg_u, 3);
    }

    #[test]
    fn riley_trefoil_is_classical() {
        let pres = two_bridge_presentation(3, 1).unwrap();
        let rd = riley_polynomial(&pres, &policy()).unwrap();
        // φ = t + t⁻¹ − 1 − u
        let mut expect = LaurentPoly2::new();
        expect.add_term(2, 0, Integer::from(1));
        expect.add_term(-2, 0, Integer::from(1));
        expect.add_term(0, 0, Integer::from(-1));
        expect.add_term(0, 1, Integer::from(-1));
        assert_eq!(rd.phi, expect);
    }

    #[test]
    fn generated_7_2_phi_unit_equivalent_to_builtin() {
        let gen = two_bridge_presentation(7, 2).unwrap();
        let rd_gen = riley_polynomial(&gen, &policy()).unwrap();
        let rd_builtin = riley_polynomial(&builtin_5_2(), &policy()).unwrap();
        let witness = unit_equivalent(&rd_gen.phi, &rd_builtin.phi);
        assert!(
            witness.is_some(),
            "generated (7,2) Riley polynomial {} is not unit-equivalent to the 5_2 polynomial {}",
            rd_gen.phi.display("s", "u"),
            rd_builtin.phi.display("s", "u")
        );
    }

    #[test]
    fn alexander_values() {
        let rd52 = riley_polynomial(&builtin_5_2(), &policy()).unwrap();
        let d52 = alexander_specialization(&rd52).unwrap();
        // 2t − 3 + 2t⁻¹ in s-powers.
        let expect = LPoly::from_terms([
            (2i64, Integer::from(2)),
            (0, Integer::from(-3)),
            (-2, Integer::from(2)),
        ]);
        assert_eq!(d52, expect);
        assert_eq!(second_derivative_at_one(&d52), Rational::from(4));

        let tref = two_bridge_presentation(3, 1).unwrap();
        let rdt = riley_polynomial(&tref, &policy()).unwrap();
        let dt = alexander_specialization(&rdt).unwrap();
        let expect_t = LPoly::from_terms([
            (2i64, Integer::from(1)),
            (0, Integer::from(-1)),
            (-2, Integer::from(1)),
        ]);
        assert_eq!(dt, expect_t);
        assert_eq!(second_derivative_at_one(&dt), Rational::from(2));

        // Degenerate constant: Δ ≡ 1 has Δ'' = 0.
        let one = LPoly::constant(1);
        assert_eq!(second_derivative_at_one(&one), Rational::from(0));
    }

    #[test]
    fn alexander_is_symmetric() {
        for pres in [builtin_5_2(), two_bridge_presentation(5, 3).unwrap(), two_bridge_presentation(7, 2).unwrap()] {
            let rd = riley_polynomial(&pres, &policy()).unwrap();
            let d = alexander_specialization(&rd).unwrap();
            assert_eq!(d, d.reciprocal(), "Delta not symmetric for {}", pres.name);
            assert_eq!(d.eval_int(&Rational::from(1)), Rational::from(1));
        }
    }

    #[test]
    fn holonomy_at_unit_values() {
        let one = AppComplex::from_f64(1.0, 0.0, 128);
        let zero = AppComplex::zero(128);
        let (x, y) = holonomy_matrices(&one, &zero, 1).unwrap();
        assert!(x.a.dist(&one).to_f64() < 1e-30);
        assert!(x.b.dist(&one).to_f64() < 1e-30);
        assert!(x.c.abs().to_f64() < 1e-30);
        assert!(y.dist_to_identity().to_f64() < 1e-30);
        // ε = −1 negates both matrices.
        let (xm, _) = holonomy_matrices(&one, &zero, -1).unwrap();
        assert!(xm.a.dist(&-&one).to_f64() < 1e-30);
        // t = i puts e^{iπ/4} in the upper-left slot.
        let i = AppComplex::from_f64(0.0, 1.0, 128);
        let (xi, _) = holonomy_matrices(&i, &zero, 1).unwrap();
        let expect = AppComplex::from_f64(
            std::f64::consts::FRAC_PI_4.cos(),
            std::f64::consts::FRAC_PI_4.sin(),
            128,
        );
        assert!(xi.a.dist(&expect).to_f64() < 1e-15);
    }

    #[test]
    fn empty_word_is_identity_and_words_reduce() {
        let t = AppComplex::from_f64(0.3, 0.7, 128);
        let u = AppComplex::from_f64(-0.4, 0.1, 128);
        let id = evaluate_word(&GroupWord::empty(), &t, &u, 1).unwrap();
        assert!(id.dist_to_identity().to_f64() < 1e-30);
        let xxinv = GroupWord::from_letters([(Gen::X, 1), (Gen::X, -1)]);
        let m = evaluate_word(&xxinv, &t, &u, 1).unwrap();
        assert!(m.dist_to_identity().to_f64() < 1e-30);
    }

    #[test]
    fn symbolic_numeric_consistency() {
        // Numeric w₁₁+(1−t)w₁₂ agrees with the exact φ at random samples.
        let pres = builtin_5_2();
        let rd = riley_polynomial(&pres, &policy()).unwrap();
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut rnd = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for _ in 0..100 {
            let t = AppComplex::from_f64(rnd() * 1.5, rnd() * 1.5, 128);
            if t.abs().to_f64() < 0.1 {
                continue;
            }
            let u = AppComplex::from_f64(rnd() * 2.0, rnd() * 2.0, 128);
            let w = evaluate_word(&pres.relator_w, &t, &u, 1).unwrap();
            let one = AppComplex::with_val(128, 1);
            let numeric = &w.a + &(&(&one - &t) * &w.b);
            let symbolic = rd.phi_at(&t, &u);
            assert!(
                numeric.dist(&symbolic).to_f64() < 1e-20,
                "mismatch at t={t} u={u}"
            );
        }
    }

    #[test]
    fn relation_holds_on_curve() {
        // At a point with φ(t,u) = 0, ρ(wx) = ρ(yw).
        let pres = builtin_5_2();
        let rd = riley_polynomial(&pres, &policy()).unwrap();
        // Pick t on the unit circle, solve for u.
        let theta = 2.4f64;
        let t = AppComplex::from_f64(theta.cos(), theta.sin(), 192);
        let fiber = rd.fiber(&t, &PrecisionPolicy::new(192, Float::with_val(192, 1e-40), 2).unwrap()).unwrap();
        assert_eq!(fiber.len(), 3);
        for u in &fiber {
            let wx = evaluate_word(&pres.relator_w.concat(&pres.meridian), &t, u, 1).unwrap();
            let yw = evaluate_word(
                &GroupWord::single(Gen::Y, 1).concat(&pres.relator_w),
                &t,
                u,
                1,
            )
            .unwrap();
            assert!(wx.dist(&yw).to_f64() < 1e-30, "relation fails at u={u}");
        }
    }

    #[test]
    fn discriminant_vanishes_at_branch_points() {
        let pres = builtin_5_2();
        let pol = policy();
        let rd = riley_polynomial(&pres, &pol).unwrap();
        assert!(!rd.branch_points_t.is_empty());
        // At each of the first 3 branch points, two fiber roots collide.
        for b in rd.branch_points_t.iter().take(3) {
            let p = rd.specialize(b);
            let roots = poly_roots(&p, &pol).unwrap();
            let mut min_gap = f64::INFINITY;
            for i in 0..roots.len() {
                for j in i + 1..roots.len() {
                    min_gap = min_gap.min(roots[i].root.dist(&roots[j].root).to_f64());
                }
            }
            assert!(min_gap < 1e-8, "no fiber collision at branch point {b} (gap {min_gap})");
        }
    }

    #[test]
    fn longitude_is_even_in_s() {
        for pres in [builtin_5_2(), two_bridge_presentation(3, 1).unwrap()] {
            let lam = longitude_eigenvalue_poly(&pres);
            assert!(lam.is_even_in_s());
        }
    }
}
