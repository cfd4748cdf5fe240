//! Exact sparse polynomial arithmetic over ℤ: univariate Laurent polynomials,
//! bivariate Laurent polynomials, fraction-free resultants, and gcds.
//!
//! Everything here is exact; nothing rounds. These rings carry the Riley
//! polynomial φ(t,u) ∈ ℤ[t^{±1/2}, u], its discriminant, and the A-polynomial
//! elimination.

use std::collections::BTreeMap;

use rug::{Complete, Integer, Rational};

use crate::numerics::AppComplex;

/// Ring operations needed by the fraction-free (Bareiss) elimination.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact division. Callers only divide when exactness is guaranteed
    /// (Bareiss pivots, content removal); inexact division is a logic error.
    fn exact_div(&self, o: &Self) -> Self;
}

impl Ring for Integer {
    fn zero() -> Self {
        Integer::new()
    }
    fn one() -> Self {
        Integer::from(1)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Self {
        (self + o).complete()
    }
    fn sub(&self, o: &Self) -> Self {
        (self - o).complete()
    }
    fn mul(&self, o: &Self) -> Self {
        (self * o).complete()
    }
    fn neg(&self) -> Self {
        (-self).complete()
    }
    fn exact_div(&self, o: &Self) -> Self {
        debug_assert!(self.is_divisible(o), "inexact integer division");
        self.div_exact_ref(o).complete()
    }
}

/// Univariate Laurent polynomial over ℤ; exponents may be negative.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LPoly {
    terms: BTreeMap<i64, Integer>,
}

impl std::fmt::Debug for LPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

impl LPoly {
    pub fn new() -> Self {
        LPoly { terms: BTreeMap::new() }
    }

    pub fn term(coeff: impl Into<Integer>, exp: i64) -> Self {
        let c: Integer = coeff.into();
        let mut t = BTreeMap::new();
        if c != 0 {
            t.insert(exp, c);
        }
        LPoly { terms: t }
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        LPoly::term(c, 0)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Integer)>) -> Self {
        let mut p = LPoly::new();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: Integer) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Integer::new);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Integer)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: i64) -> Integer {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Integer {
        self.max_exp().map(|e| self.coeff(e)).unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &Integer) -> Self {
        if *c == 0 {
            return LPoly::new();
        }
        LPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, (a * c).complete())).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        LPoly {
            terms: self.terms.iter().map(|(e, a)| (e + k, a.clone())).collect(),
        }
    }

    /// Integer content (gcd of coefficients), nonnegative.
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c == 0 || c == 1 {
            return self.clone();
        }
        LPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a.div_exact_ref(&c).complete())).collect(),
        }
    }

    /// Substitute x ↦ x^{-1}.
    pub fn reciprocal(&self) -> Self {
        LPoly {
            terms: self.terms.iter().map(|(e, a)| (-e, a.clone())).collect(),
        }
    }

    /// Formal derivative d/dx (Laurent rule, the x^0 term drops).
    pub fn derivative(&self) -> Self {
        let mut p = LPoly::new();
        for (e, c) in &self.terms {
            if *e != 0 {
                p.add_term(e - 1, c * Integer::from(*e));
            }
        }
        p
    }

    /// Evaluate at an integer point; exact.
    pub fn eval_int(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for (e, c) in &self.terms {
            let p = pow_rational(x, *e);
            acc += p * Rational::from(c);
        }
        acc
    }

    /// Evaluate at a complex point at that point's working precision.
    pub fn eval(&self, x: &AppComplex) -> AppComplex {
        let prec = x.precision_bits();
        let mut acc = AppComplex::zero(prec);
        // Horner over the nonnegative shift for stability.
        let shift = self.min_exp().unwrap_or(0).min(0);
        let shifted = self.shift(-shift);
        let maxe = shifted.max_exp().unwrap_or(0);
        let mut e = maxe;
        loop {
            acc = AppComplex(acc.0 * &x.0 + rug::Complex::with_val(prec, &shifted.coeff(e)));
            if e == 0 {
                break;
            }
            e -= 1;
        }
        if shift != 0 {
            acc = &acc * &x.powi(shift);
        }
        acc
    }

    /// True iff every exponent is even (the polynomial lives in ℤ[x²^{±1}]).
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    /// Substitute x² ↦ y: halve all exponents (requires `is_even`).
    pub fn halve_exponents(&self) -> Self {
        assert!(self.is_even(), "halve_exponents requires even exponents");
        LPoly {
            terms: self.terms.iter().map(|(e, a)| (e / 2, a.clone())).collect(),
        }
    }

    pub fn display(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.clone() >= 0 {
                if i == 0 { "" } else { " + " }
            } else if i == 0 {
                "-"
            } else {
                " - "
            };
            let mag = c.clone().abs();
            let body = match (*e, mag == 1) {
                (0, _) => format!("{mag}"),
                (1, true) => var.to_string(),
                (1, false) => format!("{mag}{var}"),
                (e, true) => format!("{var}^{e}"),
                (e, false) => format!("{mag}{var}^{e}"),
            };
            out.push_str(sign);
            out.push_str(&body);
        }
        out
    }

    /// Pseudo-remainder of `self` by `d` (as polynomials; Laurent parts are
    /// normalized away first). Returns (pseudo-remainder, shift info dropped).
    fn prem(&self, d: &LPoly) -> LPoly {
        // Work with nonnegative exponents.
        let a_shift = self.min_exp().unwrap_or(0).min(0);
        let d_shift = d.min_exp().unwrap_or(0).min(0);
        let mut r = self.shift(-a_shift);
        let d0 = d.shift(-d_shift);
        let dd = d0.max_exp().unwrap_or(0);
        let lc = d0.leading_coeff();
        let mut guard = 0usize;
        while !r.terms.is_empty() && r.max_exp().unwrap() >= dd {
            let re = r.max_exp().unwrap();
            let rc = r.leading_coeff();
            // r ← lc·r − rc·x^{re−dd}·d0
            r = r.scale(&lc).sub(&d0.shift(re - dd).scale(&rc));
            guard += 1;
            assert!(guard < 100_000, "prem runaway");
        }
        r
    }

    /// Polynomial gcd over ℤ (primitive PRS), nonnegative leading sign,
    /// Laurent monomial factors dropped.
    pub fn gcd(&self, other: &LPoly) -> LPoly {
        if self.terms.is_empty() {
            return other.normalized_poly();
        }
        if other.terms.is_empty() {
            return self.normalized_poly();
        }
        let ca = self.content();
        let cb = other.content();
        let cg = ca.gcd(&cb);
        let mut a = self.normalized_poly().primitive_part();
        let mut b = other.normalized_poly().primitive_part();
        if a.max_exp() < b.max_exp() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.prem(&b).normalized_poly();
            if r.terms.is_empty() {
                let mut g = b.primitive_part().scale(&cg);
                if g.leading_coeff() < 0 {
                    g = g.scale(&Integer::from(-1));
                }
                return g;
            }
            a = b;
            b = r.primitive_part();
        }
    }

    /// Strip any monomial factor x^k (normalize min exponent to 0).
    pub fn normalized_poly(&self) -> LPoly {
        match self.min_exp() {
            Some(m) if m != 0 => self.shift(-m),
            _ => self.clone(),
        }
    }

    /// Exact quotient self / d; panics if the division is not exact
    /// (only called where exactness is guaranteed).
    pub fn exact_div_poly(&self, d: &LPoly) -> LPoly {
        assert!(!d.terms.is_empty(), "division by zero polynomial");
        if self.terms.is_empty() {
            return LPoly::new();
        }
        let mut r = self.clone();
        let mut q = LPoly::new();
        let dd = d.max_exp().unwrap();
        let lc = d.leading_coeff();
        let mut guard = 0usize;
        while !r.terms.is_empty() {
            let re = r.max_exp().unwrap();
            let rc = r.leading_coeff();
            assert!(rc.is_divisible(&lc), "inexact LPoly division (leading coefficient)");
            let qc = rc.div_exact_ref(&lc).complete();
            let qe = re - dd;
            q.add_term(qe, qc.clone());
            r = r.sub(&d.shift(qe).scale(&qc));
            guard += 1;
            assert!(guard < 100_000, "exact_div_poly runaway");
        }
        q
    }

    pub fn pow(&self, k: u32) -> LPoly {
        let mut acc = LPoly::constant(1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Ring for LPoly {
    fn zero() -> Self {
        LPoly::new()
    }
    fn one() -> Self {
        LPoly::constant(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, (-c).complete());
        }
        out
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = LPoly::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(e1 + e2, (c1 * c2).complete());
            }
        }
        out
    }
    fn neg(&self) -> Self {
        self.scale(&Integer::from(-1))
    }
    fn exact_div(&self, o: &Self) -> Self {
        self.exact_div_poly(o)
    }
}

/// Bivariate Laurent polynomial: exponent of the Laurent variable (i64) and
/// of the polynomial variable (u32), mapped to an integer coefficient.
///
/// Used as ℤ[s^{±1}, u] for the Riley polynomial (s = t^{1/2}) and as
/// ℤ[s^{±1}, L] during A-polynomial elimination.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, u32), Integer>,
}

impl std::fmt::Debug for LaurentPoly2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display("s", "u"))
    }
}

impl LaurentPoly2 {
    pub fn new() -> Self {
        LaurentPoly2 { terms: BTreeMap::new() }
    }

    pub fn term(coeff: impl Into<Integer>, spow: i64, upow: u32) -> Self {
        let c: Integer = coeff.into();
        let mut t = BTreeMap::new();
        if c != 0 {
            t.insert((spow, upow), c);
        }
        LaurentPoly2 { terms: t }
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        LaurentPoly2::term(c, 0, 0)
    }

    pub fn add_term(&mut self, spow: i64, upow: u32, coeff: Integer) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry((spow, upow)).or_insert_with(Integer::new);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&(spow, upow));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i64, u32), &Integer)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, spow: i64, upow: u32) -> Integer {
        self.terms.get(&(spow, upow)).cloned().unwrap_or_default()
    }

    pub fn deg_u(&self) -> u32 {
        self.terms.keys().map(|(_, u)| *u).max().unwrap_or(0)
    }

    /// Coefficient of u^k as a univariate Laurent polynomial in s.
    pub fn u_coefficient(&self, k: u32) -> LPoly {
        LPoly::from_terms(
            self.terms
                .iter()
                .filter(|((_, u), _)| *u == k)
                .map(|((s, _), c)| (*s, c.clone())),
        )
    }

    /// All u-coefficients, ascending: index k holds the coefficient of u^k.
    pub fn u_coefficients(&self) -> Vec<LPoly> {
        (0..=self.deg_u()).map(|k| self.u_coefficient(k)).collect()
    }

    pub fn from_u_coefficients(coeffs: &[LPoly]) -> Self {
        let mut p = LaurentPoly2::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in c.iter() {
                p.add_term(*e, k as u32, a.clone());
            }
        }
        p
    }

    pub fn dd_u(&self) -> LaurentPoly2 {
        let mut p = LaurentPoly2::new();
        for ((s, u), c) in &self.terms {
            if *u > 0 {
                p.add_term(*s, u - 1, c * Integer::from(*u));
            }
        }
        p
    }

    pub fn dd_s(&self) -> LaurentPoly2 {
        let mut p = LaurentPoly2::new();
        for ((s, u), c) in &self.terms {
            if *s != 0 {
                p.add_term(s - 1, *u, c * Integer::from(*s));
            }
        }
        p
    }

    /// Specialize u = 0.
    pub fn at_u_zero(&self) -> LPoly {
        self.u_coefficient(0)
    }

    /// True iff every s-exponent is even, i.e. the polynomial lies in
    /// ℤ[t^{±1}, u] with t = s².
    pub fn is_even_in_s(&self) -> bool {
        self.terms.keys().all(|(s, _)| s % 2 == 0)
    }

    /// Evaluate at numeric (s, u).
    pub fn eval_su(&self, s: &AppComplex, u: &AppComplex) -> AppComplex {
        let prec = s.precision_bits().max(u.precision_bits());
        let mut acc = AppComplex::zero(prec);
        // Group by u-power, Horner in u, each coefficient evaluated in s.
        let maxu = self.deg_u();
        let mut k = maxu as i64;
        while k >= 0 {
            let cs = self.u_coefficient(k as u32);
            let cv = if cs.num_terms() == 0 { AppComplex::zero(prec) } else { cs.eval(s) };
            acc = &(&acc * u) + &cv;
            k -= 1;
        }
        acc
    }

    /// Evaluate at numeric t with u, requiring even s-powers.
    pub fn eval_tu(&self, t: &AppComplex, u: &AppComplex) -> AppComplex {
        debug_assert!(self.is_even_in_s());
        let prec = t.precision_bits().max(u.precision_bits());
        let maxu = self.deg_u();
        let mut acc = AppComplex::zero(prec);
        let mut k = maxu as i64;
        while k >= 0 {
            let cs = self.u_coefficient(k as u32).halve_exponents();
            let cv = if cs.num_terms() == 0 { AppComplex::zero(prec) } else { cs.eval(t) };
            acc = &(&acc * u) + &cv;
            k -= 1;
        }
        acc
    }

    /// Specialize t (even s-powers required), returning the u-polynomial
    /// with numeric coefficients, ascending in u.
    pub fn specialize_t(&self, t: &AppComplex) -> Vec<AppComplex> {
        debug_assert!(self.is_even_in_s());
        let prec = t.precision_bits();
        (0..=self.deg_u())
            .map(|k| {
                let cs = self.u_coefficient(k).halve_exponents();
                if cs.num_terms() == 0 {
                    AppComplex::zero(prec)
                } else {
                    cs.eval(t)
                }
            })
            .collect()
    }

    /// Multiply by s^k.
    pub fn shift_s(&self, k: i64) -> Self {
        LaurentPoly2 {
            terms: self.terms.iter().map(|((s, u), c)| ((s + k, *u), c.clone())).collect(),
        }
    }

    /// Substitute s ↦ −s (flips the sign of odd-s terms).
    pub fn negate_s(&self) -> Self {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|((s, u), c)| {
                    let c = if s % 2 == 0 { c.clone() } else { (-c).complete() };
                    ((*s, *u), c)
                })
                .collect(),
        }
    }

    /// Substitute s ↦ s^{-1}.
    pub fn reciprocal_s(&self) -> Self {
        LaurentPoly2 {
            terms: self.terms.iter().map(|((s, u), c)| ((-s, *u), c.clone())).collect(),
        }
    }

    pub fn display(&self, svar: &str, uvar: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut items: Vec<(&(i64, u32), &Integer)> = self.terms.iter().collect();
        items.sort_by(|a, b| (b.0 .1, b.0 .0).cmp(&(a.0 .1, a.0 .0)));
        let mut out = String::new();
        for (i, ((s, u), c)) in items.into_iter().enumerate() {
            let sign = if c.clone() >= 0 {
                if i == 0 { "" } else { " + " }
            } else if i == 0 {
                "-"
            } else {
                " - "
            };
            let mag = c.clone().abs();
            let mut body = String::new();
            if mag != 1 || (*s == 0 && *u == 0) {
                body.push_str(&format!("{mag}"));
            }
            if *s != 0 {
                if *s == 1 {
                    body.push_str(svar);
                } else {
                    body.push_str(&format!("{svar}^{s}"));
                }
            }
            if *u != 0 {
                if *u == 1 {
                    body.push_str(uvar);
                } else {
                    body.push_str(&format!("{uvar}^{u}"));
                }
            }
            out.push_str(sign);
            out.push_str(&body);
        }
        out
    }

    /// Pseudo-remainder of `self` by `d` as polynomials in u over ℤ[s^{±1}].
    /// When lc_u(d) is ±s^k this is an exact reduction up to a unit.
    pub fn prem_u(&self, d: &LaurentPoly2) -> LaurentPoly2 {
        let dd = d.deg_u();
        assert!(dd >= 1, "prem_u needs a divisor of positive u-degree");
        let lc = LaurentPoly2::from_u_coefficients(&[d.u_coefficient(dd)]);
        let mut r = self.clone();
        let mut guard = 0usize;
        while !r.terms.is_empty() && r.deg_u() >= dd {
            let re = r.deg_u();
            let rc = LaurentPoly2::from_u_coefficients(&[r.u_coefficient(re)]);
            // r ← lc·r − rc·u^{re−dd}·d
            let mut shifted_d = LaurentPoly2::new();
            for ((s, u), c) in &d.terms {
                shifted_d.add_term(*s, u + (re - dd), c.clone());
            }
            r = r.mul(&lc).sub(&rc.mul(&shifted_d));
            guard += 1;
            assert!(guard < 10_000, "prem_u runaway");
        }
        r
    }
}

impl Ring for LaurentPoly2 {
    fn zero() -> Self {
        LaurentPoly2::new()
    }
    fn one() -> Self {
        LaurentPoly2::constant(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((s, u), c) in &o.terms {
            out.add_term(*s, *u, c.clone());
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((s, u), c) in &o.terms {
            out.add_term(*s, *u, (-c).complete());
        }
        out
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = LaurentPoly2::new();
        for ((s1, u1), c1) in &self.terms {
            for ((s2, u2), c2) in &o.terms {
                out.add_term(s1 + s2, u1 + u2, (c1 * c2).complete());
            }
        }
        out
    }
    fn neg(&self) -> Self {
        let mut out = LaurentPoly2::new();
        for ((s, u), c) in &self.terms {
            out.add_term(*s, *u, (-c).complete());
        }
        out
    }
    fn exact_div(&self, o: &Self) -> Self {
        exact_div_mono_ordered(self, o)
    }
}

/// Exact multivariate division via leading-term elimination in (u, s)
/// lexicographic order. Guaranteed-exact inputs only.
fn exact_div_mono_ordered(a: &LaurentPoly2, d: &LaurentPoly2) -> LaurentPoly2 {
    assert!(!d.is_zero(), "division by zero polynomial");
    if a.is_zero() {
        return LaurentPoly2::new();
    }
    let lead = |p: &LaurentPoly2| -> ((i64, u32), Integer) {
        let key = p
            .terms
            .keys()
            .max_by(|(s1, u1), (s2, u2)| (u1, s1).cmp(&(u2, s2)))
            .copied()
            .unwrap();
        (key, p.terms.get(&key).cloned().unwrap())
    };
    let (dk, dc) = lead(d);
    let mut r = a.clone();
    let mut q = LaurentPoly2::new();
    let mut guard = 0usize;
    while !r.is_zero() {
        let (rk, rc) = lead(&r);
        assert!(rk.1 >= dk.1, "inexact bivariate division (u-degree)");
        assert!(rc.is_divisible(&dc), "inexact bivariate division (coefficient)");
        let qs = rk.0 - dk.0;
        let qu = rk.1 - dk.1;
        let qc = rc.div_exact_ref(&dc).complete();
        let qterm = LaurentPoly2::term(qc, qs, qu);
        q = q.add(&qterm);
        r = r.sub(&qterm.mul(d));
        guard += 1;
        assert!(guard < 1_000_000, "exact bivariate division runaway");
    }
    q
}

/// Resultant of two polynomials in an outer variable with coefficients in R,
/// via the Sylvester matrix and fraction-free Bareiss elimination.
///
/// `f` and `g` are coefficient vectors ascending in the outer variable.
pub fn resultant<R: Ring>(f: &[R], g: &[R]) -> R {
    let df = trim_degree(f);
    let dg = trim_degree(g);
    let (df, dg) = match (df, dg) {
        (Some(a), Some(b)) => (a, b),
        _ => return R::zero(),
    };
    if df == 0 && dg == 0 {
        return R::one();
    }
    let n = df + dg;
    let mut m: Vec<Vec<R>> = vec![vec![R::zero(); n]; n];
    // dg rows of f's coefficients, then df rows of g's.
    for row in 0..dg {
        for (k, c) in f.iter().enumerate().take(df + 1) {
            m[row][row + df - k] = c.clone();
        }
    }
    for row in 0..df {
        for (k, c) in g.iter().enumerate().take(dg + 1) {
            m[dg + row][row + dg - k] = c.clone();
        }
    }
    bareiss_determinant(m)
}

fn trim_degree<R: Ring>(f: &[R]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

/// Fraction-free determinant (Bareiss). Divisions are exact by construction.
pub fn bareiss_determinant<R: Ring>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    if n == 0 {
        return R::one();
    }
    let mut sign_flip = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return R::zero();
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t1 = m[i][j].mul(&m[k][k]);
                let t2 = m[i][k].mul(&m[k][j]);
                let num = t1.sub(&t2);
                m[i][j] = num.exact_div(&prev);
            }
            m[i][k] = R::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

fn pow_rational(x: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::from(1);
    }
    let base = if e < 0 { x.clone().recip() } else { x.clone() };
    let mut acc = Rational::from(1);
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// 2×2 matrices over ℤ[s^{±1}, u], determinant one by construction in our
/// use; inverse is the adjugate.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2Sym {
    pub a: LaurentPoly2,
    pub b: LaurentPoly2,
    pub c: LaurentPoly2,
    pub d: LaurentPoly2,
}

impl Mat2Sym {
    pub fn identity() -> Self {
        Mat2Sym {
            a: LaurentPoly2::constant(1),
            b: LaurentPoly2::new(),
            c: LaurentPoly2::new(),
            d: LaurentPoly2::constant(1),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat2Sym {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    /// Adjugate: the inverse for determinant-one matrices.
    pub fn adjugate(&self) -> Self {
        Mat2Sym {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    pub fn det(&self) -> LaurentPoly2 {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(pairs: &[(i64, i64)]) -> LPoly {
        LPoly::from_terms(pairs.iter().map(|(e, c)| (*e, Integer::from(*c))))
    }

    #[test]
    fn lpoly_mul_and_display() {
        // (x + 1)(x − 1) = x² − 1
        let a = lp(&[(1, 1), (0, 1)]);
        let b = lp(&[(1, 1), (0, -1)]);
        let p = a.mul(&b);
        assert_eq!(p, lp(&[(2, 1), (0, -1)]));
        assert_eq!(p.display("x"), "x^2 - 1");
    }

    #[test]
    fn lpoly_gcd_primitive() {
        // gcd((x²−1)·3, (x−1)·6) = 3(x−1) up to sign/content convention:
        // contents 3 and 6 → 3; primitive gcd = x−1.
        let a = lp(&[(2, 3), (0, -3)]);
        let b = lp(&[(1, 6), (0, -6)]);
        let g = a.gcd(&b);
        assert_eq!(g, lp(&[(1, 3), (0, -3)]));
    }

    #[test]
    fn integer_resultant_matches_closed_form() {
        // Res(x²−1, x²−4) = ((1)²−(4))... direct: ∏ (r_i − s_j) products:
        // roots ±1 and ±2 → (1−2)(1+2)(−1−2)(−1+2) = (−1)(3)(−3)(1) = 9.
        let f = vec![Integer::from(-1), Integer::from(0), Integer::from(1)];
        let g = vec![Integer::from(-4), Integer::from(0), Integer::from(1)];
        let r = resultant(&f, &g);
        assert_eq!(r, Integer::from(9));
    }

    #[test]
    fn resultant_detects_common_root() {
        // x−1 and x²−1 share a root → resultant 0.
        let f = vec![Integer::from(-1), Integer::from(1)];
        let g = vec![Integer::from(-1), Integer::from(0), Integer::from(1)];
        assert_eq!(resultant(&f, &g), Integer::from(0));
    }

    #[test]
    fn resultant_with_lpoly_coefficients() {
        // Res_u(u² − s, u + 1) = value of u²−s at u = −1 → 1 − s.
        let f = vec![lp(&[(1, -1)]), LPoly::new(), LPoly::constant(1)];
        let g = vec![LPoly::constant(1), LPoly::constant(1)];
        let r = resultant(&f, &g);
        assert_eq!(r, lp(&[(0, 1), (1, -1)]));
    }

    #[test]
    fn bivariate_exact_division() {
        // (s u + 1)(u + s³) / (u + s³)
        let a = {
            let mut p = LaurentPoly2::new();
            p.add_term(1, 1, Integer::from(1));
            p.add_term(0, 0, Integer::from(1));
            p
        };
        let b = {
            let mut p = LaurentPoly2::new();
            p.add_term(0, 1, Integer::from(1));
            p.add_term(3, 0, Integer::from(1));
            p
        };
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&b), a);
        assert_eq!(prod.exact_div(&a), b);
    }

    #[test]
    fn laurent_eval_consistency() {
        // p(s) = s² − 2 + s^{-2} = (s − 1/s)² at s = 3: (3 − 1/3)² = 64/9.
        let p = lp(&[(2, 1), (0, -2), (-2, 1)]);
        let x = AppComplex::from_f64(3.0, 0.0, 128);
        let v = p.eval(&x);
        assert!((v.re().to_f64() - 64.0 / 9.0).abs() < 1e-25);
        let q = p.eval_int(&Rational::from((3, 1)));
        assert_eq!(q, Rational::from((64, 9)));
    }

    #[test]
    fn mat2_adjugate_inverts() {
        // M = [[s, 1/s],[0, 1/s]] has det 1; M · adj(M) = I.
        let m = Mat2Sym {
            a: LaurentPoly2::term(1, 1, 0),
            b: LaurentPoly2::term(1, -1, 0),
            c: LaurentPoly2::new(),
            d: LaurentPoly2::term(1, -1, 0),
        };
        assert_eq!(m.det(), LaurentPoly2::constant(1));
        let prod = m.mul(&m.adjugate());
        assert_eq!(prod, Mat2Sym::identity());
    }

    #[test]
    fn derivative_and_reciprocal() {
        let p = lp(&[(2, 2), (0, -3), (-2, 2)]);
        assert_eq!(p.reciprocal(), p); // symmetric
        let d = p.derivative();
        assert_eq!(d, lp(&[(1, 4), (-3, -4)]));
    }
}
