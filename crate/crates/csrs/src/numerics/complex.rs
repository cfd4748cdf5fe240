//! Arbitrary-precision complex numbers and the precision/escalation policy
//! shared by every numeric routine in the crate.

use rug::float::Special;
use rug::ops::CompleteRound;
use rug::{Complex, Float};

use super::NumericsError;

/// Minimum working precision accepted anywhere.
pub const MIN_PRECISION_BITS: u32 = 64;

/// An arbitrary-precision complex value. Thin wrapper over an MPC-backed
/// complex; the wrapper pins the invariants (precision at least 64 bits,
/// finite components) at API boundaries.
#[derive(Clone, Debug, PartialEq)]
pub struct AppComplex(pub Complex);

impl AppComplex {
    pub fn zero(prec: u32) -> Self {
        AppComplex(Complex::new(prec.max(MIN_PRECISION_BITS)))
    }

    pub fn with_val<T>(prec: u32, val: T) -> Self
    where
        Complex: rug::Assign<T>,
    {
        let mut c = Complex::new(prec.max(MIN_PRECISION_BITS));
        rug::Assign::assign(&mut c, val);
        AppComplex(c)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        AppComplex(Complex::with_val(prec.max(MIN_PRECISION_BITS), (re, im)))
    }

    /// Parse decimal strings for the two components.
    pub fn from_decimal(re: &str, im: &str, prec: u32) -> Result<Self, NumericsError> {
        let prec = prec.max(MIN_PRECISION_BITS);
        let re = Float::parse(re)
            .map_err(|e| NumericsError::DegenerateInput(format!("bad real part: {e}")))?
            .complete(prec);
        let im = Float::parse(im)
            .map_err(|e| NumericsError::DegenerateInput(format!("bad imaginary part: {e}")))?
            .complete(prec);
        Ok(AppComplex(Complex::with_val(prec, (re, im))))
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn precision_bits(&self) -> u32 {
        self.0.prec().0
    }

    pub fn is_finite(&self) -> bool {
        self.0.real().is_finite() && self.0.imag().is_finite()
    }

    /// Reject non-finite values escaping a computation.
    pub fn validated(self, context: &str) -> Result<Self, NumericsError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(NumericsError::NonFinite(context.to_string()))
        }
    }

    pub fn abs(&self) -> Float {
        self.0.clone().abs().into_real_imag().0
    }

    /// Squared modulus, cheaper than `abs`.
    pub fn norm_sqr(&self) -> Float {
        self.0.clone().norm().into_real_imag().0
    }

    pub fn arg(&self) -> Float {
        self.0.clone().arg().into_real_imag().0
    }

    pub fn conj(&self) -> Self {
        AppComplex(self.0.clone().conj())
    }

    pub fn recip(&self) -> Self {
        AppComplex(self.0.clone().recip())
    }

    /// Principal square root: for re^{iθ} with −π < θ ≤ π this is √r·e^{iθ/2}.
    pub fn sqrt_principal(&self) -> Self {
        AppComplex(self.0.clone().sqrt())
    }

    pub fn exp(&self) -> Self {
        AppComplex(self.0.clone().exp())
    }

    /// Principal logarithm (imaginary part in (−π, π]).
    pub fn ln_principal(&self) -> Self {
        AppComplex(self.0.clone().ln())
    }

    pub fn mul_i(&self) -> Self {
        AppComplex(self.0.clone().mul_i(false))
    }

    /// Integer power, exact repeated squaring.
    pub fn powi(&self, n: i64) -> Self {
        let prec = self.precision_bits();
        if n == 0 {
            return AppComplex::with_val(prec, 1);
        }
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = AppComplex::with_val(prec, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = AppComplex((&acc.0 * &base.0).complete(acc.0.prec()));
            }
            base = AppComplex((&base.0 * &base.0).complete(base.0.prec()));
            e >>= 1;
        }
        acc
    }

    pub fn to_f64s(&self) -> (f64, f64) {
        (self.0.real().to_f64(), self.0.imag().to_f64())
    }

    /// Distance |self − other| as a Float.
    pub fn dist(&self, other: &Self) -> Float {
        AppComplex((&self.0 - &other.0).complete(self.0.prec())).abs()
    }
}

impl std::fmt::Display for AppComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {}i", self.0.real().to_f64(), self.0.imag().to_f64())
    }
}

macro_rules! binop {
    ($trait:ident, $meth:ident, $op:tt) => {
        impl std::ops::$trait<&AppComplex> for &AppComplex {
            type Output = AppComplex;
            fn $meth(self, rhs: &AppComplex) -> AppComplex {
                AppComplex((&self.0 $op &rhs.0).complete(self.0.prec().max(rhs.0.prec())))
            }
        }
        impl std::ops::$trait<AppComplex> for AppComplex {
            type Output = AppComplex;
            fn $meth(self, rhs: AppComplex) -> AppComplex {
                (&self).$meth(&rhs)
            }
        }
        impl std::ops::$trait<&AppComplex> for AppComplex {
            type Output = AppComplex;
            fn $meth(self, rhs: &AppComplex) -> AppComplex {
                (&self).$meth(rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl std::ops::Neg for &AppComplex {
    type Output = AppComplex;
    fn neg(self) -> AppComplex {
        AppComplex((-&self.0).complete(self.0.prec()))
    }
}

impl std::ops::Neg for AppComplex {
    type Output = AppComplex;
    fn neg(self) -> AppComplex {
        AppComplex(-self.0)
    }
}

/// Working precision, target error, and the escalation budget.
///
/// Escalation doubles `working_bits`; a routine that still cannot certify its
/// result after `max_escalations` doublings reports `NoConvergence` rather
/// than returning an uncertified value.
#[derive(Clone, Debug)]
pub struct PrecisionPolicy {
    pub working_bits: u32,
    pub target_abs_error: Float,
    pub max_escalations: u32,
}

impl PrecisionPolicy {
    pub fn new(working_bits: u32, target_abs_error: Float, max_escalations: u32) -> Result<Self, NumericsError> {
        let working_bits = working_bits.max(MIN_PRECISION_BITS);
        if !(target_abs_error.is_finite() && target_abs_error.is_sign_positive() && !target_abs_error.is_zero()) {
            return Err(NumericsError::DegenerateInput(
                "target_abs_error must be a positive finite real".into(),
            ));
        }
        let floor = Float::with_val(working_bits, Float::i_exp(1, -(working_bits as i32)));
        if target_abs_error <= floor {
            return Err(NumericsError::DegenerateInput(format!(
                "target_abs_error {} not representable above 2^-{}",
                target_abs_error, working_bits
            )));
        }
        Ok(PrecisionPolicy { working_bits, target_abs_error, max_escalations })
    }

    /// Parse the target error from a decimal string such as "1e-50", choosing
    /// working precision comfortably above it unless `bits` overrides.
    pub fn from_target_str(target: &str, bits: Option<u32>, max_escalations: u32) -> Result<Self, NumericsError> {
        let probe = Float::parse(target)
            .map_err(|e| NumericsError::DegenerateInput(format!("bad target error: {e}")))?
            .complete(96);
        if !(probe.is_finite() && probe.is_sign_positive() && !probe.is_zero()) {
            return Err(NumericsError::DegenerateInput("target error must be positive".into()));
        }
        // ~3.33 bits per decimal digit, then headroom for cancellation.
        let needed = (-probe.clone().log2()).to_f64().ceil().max(0.0) as u32;
        let working = bits.unwrap_or((2 * needed + 96).max(MIN_PRECISION_BITS));
        let target = Float::parse(target).unwrap().complete(working);
        PrecisionPolicy::new(working, target, max_escalations)
    }

    pub fn escalate(&self) -> Self {
        let bits = self.working_bits * 2;
        PrecisionPolicy {
            working_bits: bits,
            target_abs_error: Float::with_val(bits, &self.target_abs_error),
            max_escalations: self.max_escalations.saturating_sub(1),
        }
    }

    /// Threshold separating roundoff from structural zeros: 2^(−working_bits/2).
    pub fn zero_threshold(&self) -> Float {
        Float::with_val(
            self.working_bits,
            Float::i_exp(1, -((self.working_bits / 2) as i32)),
        )
    }

    pub fn complex(&self, re: f64, im: f64) -> AppComplex {
        AppComplex::from_f64(re, im, self.working_bits)
    }

    pub fn float(&self, v: f64) -> Float {
        Float::with_val(self.working_bits, v)
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy::new(128, Float::with_val(128, 1e-20), 4).unwrap()
    }
}

/// Positive infinity marker used by error bounds that could not be certified.
pub fn float_inf(prec: u32) -> Float {
    Float::with_val(prec, Special::Infinity)
}
