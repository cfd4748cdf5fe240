//! Two-generator knot group presentations ⟨x, y | wx = yw⟩ with meridian and
//! longitude words, including built-ins for the knots we compute with.

use serde::{Deserialize, Serialize};

/// The two generators of the knot group presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gen {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
}

/// A freely reduced word in x, y: letters with nonzero exponents, no two
/// adjacent letters sharing a generator.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupWord {
    letters: Vec<(Gen, i64)>,
}

#[derive(Debug, thiserror::Error)]
pub enum PresentationError {
    #[error("invalid fraction: {0}")]
    InvalidFraction(String),
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord { letters: Vec::new() }
    }

    /// Build from raw letters, freely reducing.
    pub fn from_letters(raw: impl IntoIterator<Item = (Gen, i64)>) -> Self {
        let mut letters: Vec<(Gen, i64)> = Vec::new();
        for (g, e) in raw {
            if e == 0 {
                continue;
            }
            match letters.last_mut() {
                Some((lg, le)) if *lg == g => {
                    *le += e;
                    if *le == 0 {
                        letters.pop();
                        // The merge may expose another mergeable pair; restart
                        // the tail check by re-pushing nothing (handled by the
                        // invariant that `letters` was reduced before).
                    }
                }
                _ => letters.push((g, e)),
            }
            // After a pop, adjacent letters may merge; normalize lazily.
            while letters.len() >= 2 {
                let n = letters.len();
                if letters[n - 2].0 == letters[n - 1].0 {
                    let (g2, e2) = letters.pop().unwrap();
                    let last = letters.last_mut().unwrap();
                    debug_assert_eq!(last.0, g2);
                    last.1 += e2;
                    if last.1 == 0 {
                        letters.pop();
                    }
                } else {
                    break;
                }
            }
        }
        GroupWord { letters }
    }

    pub fn single(g: Gen, e: i64) -> Self {
        GroupWord::from_letters([(g, e)])
    }

    pub fn letters(&self) -> &[(Gen, i64)] {
        &self.letters
    }

    /// Expand to a sequence of exponent-±1 letters.
    pub fn expanded(&self) -> Vec<(Gen, i64)> {
        let mut out = Vec::new();
        for (g, e) in &self.letters {
            let sign = if *e > 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                out.push((*g, sign));
            }
        }
        out
    }

    /// Total letter count Σ|exponent|.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent_sum_of(&self, g: Gen) -> i64 {
        self.letters.iter().filter(|(h, _)| *h == g).map(|(_, e)| e).sum()
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        GroupWord::from_letters(self.letters.iter().copied().chain(other.letters.iter().copied()))
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord::from_letters(self.letters.iter().rev().map(|(g, e)| (*g, -e)))
    }

    /// The word written backwards (same exponents, reversed letter order).
    pub fn reversed(&self) -> GroupWord {
        GroupWord::from_letters(self.letters.iter().rev().copied())
    }

    /// Commutator [a, b] = a b a⁻¹ b⁻¹.
    pub fn commutator(a: &GroupWord, b: &GroupWord) -> GroupWord {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    pub fn pow(&self, k: u32) -> GroupWord {
        let mut acc = GroupWord::empty();
        for _ in 0..k {
            acc = acc.concat(self);
        }
        acc
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl std::fmt::Display for GroupWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (g, e) in &self.letters {
            let name = match g {
                Gen::X => "x",
                Gen::Y => "y",
            };
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A two-bridge style knot group presentation ⟨x, y | wx = yw⟩ together with
/// peripheral words: meridian μ = x and preferred longitude λ (zero total
/// exponent sum, i.e. in the commutator subgroup).
#[derive(Clone, Debug, PartialEq)]
pub struct KnotPresentation {
    pub name: String,
    pub relator_w: GroupWord,
    pub meridian: GroupWord,
    pub longitude: GroupWord,
    pub fraction: Option<(u64, u64)>,
}

impl KnotPresentation {
    pub fn validate(&self) -> Result<(), PresentationError> {
        if self.meridian != GroupWord::single(Gen::X, 1) {
            return Err(PresentationError::InvariantViolation(
                "meridian must be the single letter x".into(),
            ));
        }
        if self.longitude.exponent_sum() != 0 {
            return Err(PresentationError::InvariantViolation(format!(
                "longitude must have zero total exponent sum (got {})",
                self.longitude.exponent_sum()
            )));
        }
        if self.relator_w.is_empty() {
            return Err(PresentationError::InvariantViolation("relator w must be nonempty".into()));
        }
        if let Some((p, q)) = self.fraction {
            check_fraction(p, q)?;
        }
        Ok(())
    }
}

fn check_fraction(p: u64, q: u64) -> Result<(), PresentationError> {
    if p < 3 || p % 2 == 0 {
        return Err(PresentationError::InvalidFraction(format!(
            "p must be an odd integer >= 3 (got {p})"
        )));
    }
    if q == 0 || q >= p {
        return Err(PresentationError::InvalidFraction(format!(
            "q must satisfy 0 < q < p (got q = {q}, p = {p})"
        )));
    }
    if gcd(p, q) != 1 {
        return Err(PresentationError::InvalidFraction(format!("gcd({p}, {q}) != 1")));
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(q: u64, p: u64) -> u64 {
    (1..p).find(|x| (x * q) % p == 1).expect("coprime input")
}

fn odd_representative(p: u64, q: u64) -> u64 {
    let inv = mod_inverse(q, p);
    [q, p - inv, inv, p - q]
        .into_iter()
        .find(|c| c % 2 == 1)
        .unwrap_or(q)
}

/// The paper's presentation of the 5₂ knot group:
/// ⟨x, y | [y,x⁻¹]² x = y [y,x⁻¹]²⟩, μ = x, λ = [x,y⁻¹]²[y,x⁻¹]².
pub fn builtin_5_2() -> KnotPresentation {
    let x = GroupWord::single(Gen::X, 1);
    let y = GroupWord::single(Gen::Y, 1);
    let y_xinv = GroupWord::commutator(&y, &x.inverse()); // [y, x^{-1}]
    let x_yinv = GroupWord::commutator(&x, &y.inverse()); // [x, y^{-1}]
    let w = y_xinv.pow(2);
    let lambda = x_yinv.pow(2).concat(&y_xinv.pow(2));
    let p = KnotPresentation {
        name: "5_2".into(),
        relator_w: w,
        meridian: x,
        longitude: lambda,
        fraction: Some((7, 2)),
    };
    debug_assert!(p.validate().is_ok());
    p
}

/// Standard two-bridge presentation for the fraction q/p:
/// w = x^{ε₁} y^{ε₂} x^{ε₃} ⋯ y^{ε_{p−1}} with εᵢ = (−1)^{⌊iq̂/p⌋};
/// λ = w̃ · w · x^{−2e} with w̃ the reversal of w and e the exponent sum of w.
///
/// The exponent formula needs the odd representative q̂ of the fraction
/// class: even q is replaced by the first odd member of
/// [q, p − q⁻¹, q⁻¹, p − q] (inverses mod p). The choice is pinned by the
/// 5₂ anchor: the (7,2) output reproduces the textbook 5₂ Riley polynomial
/// exactly, and (3,1) stays the braid-relation trefoil w = xy.
pub fn two_bridge_presentation(p: u64, q: u64) -> Result<KnotPresentation, PresentationError> {
    check_fraction(p, q)?;
    let qhat = odd_representative(p, q);
    let mut letters = Vec::with_capacity((p - 1) as usize);
    for i in 1..p {
        let eps = if (i * qhat / p) % 2 == 0 { 1 } else { -1 };
        let g = if i % 2 == 1 { Gen::X } else { Gen::Y };
        letters.push((g, eps));
    }
    let w = GroupWord::from_letters(letters);
    let e = w.exponent_sum();
    let lambda = w
        .reversed()
        .concat(&w)
        .concat(&GroupWord::single(Gen::X, -2 * e));
    let pres = KnotPresentation {
        name: format!("two_bridge({p},{q})"),
        relator_w: w,
        meridian: GroupWord::single(Gen::X, 1),
        longitude: lambda,
        fraction: Some((p, q)),
    };
    pres.validate()?;
    Ok(pres)
}

/// The twist knot K_k: the two-bridge knot of fraction 2/(4k−1), presented
/// as ⟨x, y | [y,x⁻¹]^k x = y [y,x⁻¹]^k⟩ with λ = [x,y⁻¹]^k [y,x⁻¹]^k —
/// the k-fold analogue of the 5₂ presentation (K₂ is exactly 5₂, K₁ the
/// left-handed trefoil; verified through the surgery spectra of
/// Σ(2,3,6k−1) ≅ S³₋₁(K_k) for k ≤ 3).
pub fn twist_knot(k: u64) -> Result<KnotPresentation, PresentationError> {
    if k == 0 {
        return Err(PresentationError::InvalidFraction("twist parameter k must be >= 1".into()));
    }
    let x = GroupWord::single(Gen::X, 1);
    let y = GroupWord::single(Gen::Y, 1);
    let y_xinv = GroupWord::commutator(&y, &x.inverse());
    let x_yinv = GroupWord::commutator(&x, &y.inverse());
    let pres = KnotPresentation {
        name: format!("K_{k}"),
        relator_w: y_xinv.pow(k as u32),
        meridian: x,
        longitude: x_yinv.pow(k as u32).concat(&y_xinv.pow(k as u32)),
        fraction: Some((4 * k - 1, 2)),
    };
    pres.validate()?;
    Ok(pres)
}

/// Serde schema for knot files (see the CLI module for the file contract).
#[derive(Debug, Serialize, Deserialize)]
pub struct KnotFile {
    pub name: String,
    pub relator: Vec<(String, i64)>,
    pub longitude: Vec<(String, i64)>,
    #[serde(default)]
    pub fraction: Option<(u64, u64)>,
}

fn word_from_pairs(pairs: &[(String, i64)]) -> Result<GroupWord, PresentationError> {
    let mut letters = Vec::with_capacity(pairs.len());
    for (name, e) in pairs {
        let g = match name.as_str() {
            "x" => Gen::X,
            "y" => Gen::Y,
            other => {
                return Err(PresentationError::SchemaError(format!(
                    "unknown generator {other:?} (expected \"x\" or \"y\")"
                )))
            }
        };
        letters.push((g, *e));
    }
    Ok(GroupWord::from_letters(letters))
}

/// Parse and validate a knot presentation document (JSON).
pub fn parse_presentation(document: &str) -> Result<KnotPresentation, PresentationError> {
    let file: KnotFile = serde_json::from_str(document)
        .map_err(|e| PresentationError::SchemaError(e.to_string()))?;
    let pres = KnotPresentation {
        name: file.name,
        relator_w: word_from_pairs(&file.relator)?,
        meridian: GroupWord::single(Gen::X, 1),
        longitude: word_from_pairs(&file.longitude)?,
        fraction: file.fraction,
    };
    pres.validate()?;
    Ok(pres)
}
