//! Satellite Alexander polynomials and the coefficient obstructions for
//! instanton L-space satellites whose pattern closes up to a torus knot.
//!
//! Everything here works at the level of polynomials: a knot-level
//! statement is only ever tested through the coefficients it forces.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::torus::TorusKnot;

/// Pattern `P(U)` and companion `C` data of a satellite `P(C)` with winding number `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatelliteSpec {
    pattern_poly: LaurentPoly,
    companion_poly: LaurentPoly,
    winding: i64,
}

fn check_symmetrized(f: &LaurentPoly, what: &str) -> Result<()> {
    if f.is_zero() || !f.is_symmetric() || !f.eval_at_one().is_one() {
        return Err(Error::Precondition(format!(
            "{what} polynomial {f} is not a symmetrized Alexander polynomial"
        )));
    }
    Ok(())
}

/// Genus under the fibered convention: the top exponent of a symmetrized polynomial.
fn top_genus(f: &LaurentPoly) -> i64 {
    f.max_exp().unwrap_or(0)
}

impl SatelliteSpec {
    pub fn new(
        pattern_poly: LaurentPoly,
        companion_poly: LaurentPoly,
        winding: i64,
    ) -> Result<Self> {
        check_symmetrized(&pattern_poly, "pattern")?;
        check_symmetrized(&companion_poly, "companion")?;
        if winding < 1 {
            return Err(Error::Precondition(format!(
                "winding number must be at least 1, got {winding}"
            )));
        }
        Ok(Self {
            pattern_poly,
            companion_poly,
            winding,
        })
    }

    /// Torus-knot pattern and companion.
    pub fn torus(pattern: &TorusKnot, companion: &TorusKnot, winding: i64) -> Result<Self> {
        Self::new(pattern.alexander(), companion.alexander(), winding)
    }

    pub fn pattern_poly(&self) -> &LaurentPoly {
        &self.pattern_poly
    }

    pub fn companion_poly(&self) -> &LaurentPoly {
        &self.companion_poly
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn pattern_genus(&self) -> i64 {
        top_genus(&self.pattern_poly)
    }

    pub fn companion_genus(&self) -> i64 {
        top_genus(&self.companion_poly)
    }

    /// `Δ_{P(U)}(t) · Δ_C(t^w)`.
    pub fn alexander(&self) -> LaurentPoly {
        let dilated = self
            .companion_poly
            .dilate(self.winding)
            .expect("winding validated positive");
        (&self.pattern_poly * &dilated)
            .symmetrize()
            .expect("product of symmetrized polynomials is symmetrizable")
    }

    /// `g(P(U)) + w · g(C)`.
    pub fn genus(&self) -> i64 {
        self.pattern_genus() + self.winding * self.companion_genus()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Admissible,
    FailsMagnitude,
    FailsAlternation,
    FailsTopTwo,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Admissible => "admissible",
            Verdict::FailsMagnitude => "fails_magnitude",
            Verdict::FailsAlternation => "fails_alternation",
            Verdict::FailsTopTwo => "fails_top_two",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub verdict: Verdict,
    pub witness_exponent: Option<i64>,
    /// `(exponent, coefficient)` pairs exhibiting the violation.
    #[serde(serialize_with = "crate::text::bigint_json::serialize_pairs")]
    pub witness_coefficients: Vec<(i64, BigInt)>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.verdict == Verdict::Admissible
    }

    fn fail(verdict: Verdict, exp: i64, witnesses: Vec<(i64, BigInt)>) -> Self {
        Self {
            verdict,
            witness_exponent: Some(exp),
            witness_coefficients: witnesses,
        }
    }
}

/// Checks the coefficient pattern forced on an instanton L-space knot:
/// all coefficients in `{-1, 0, 1}`, nonzero ones alternating in sign, and for
/// genus `g >= 1` nonzero opposite-sign coefficients at `t^g` and `t^{g-1}`.
///
/// Exponents are scanned from the top down and the first violation found is
/// reported. At a single exponent the magnitude bound is checked before the
/// sign pattern.
pub fn lspace_admissible(f: &LaurentPoly) -> Result<AdmissibilityReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("admissibility report"));
    }
    if !f.is_symmetric() || !f.eval_at_one().is_positive() {
        return Err(Error::Precondition(format!("{f} is not symmetrized")));
    }
    let g = f.max_exp().unwrap_or(0);
    let mut prev: Option<(i64, &BigInt)> = None;
    for (e, c) in f.terms().rev() {
        if let Some((pe, pc)) = prev {
            if pe == g && g >= 1 && e < g - 1 {
                return Ok(AdmissibilityReport::fail(
                    Verdict::FailsTopTwo,
                    g - 1,
                    vec![(g, pc.clone()), (g - 1, BigInt::zero())],
                ));
            }
        }
        if c.abs() > BigInt::one() {
            return Ok(AdmissibilityReport::fail(
                Verdict::FailsMagnitude,
                e,
                vec![(e, c.clone())],
            ));
        }
        if let Some((pe, pc)) = prev {
            if pc.is_positive() == c.is_positive() {
                let verdict = if pe == g && g >= 1 {
                    Verdict::FailsTopTwo
                } else {
                    Verdict::FailsAlternation
                };
                return Ok(AdmissibilityReport::fail(
                    verdict,
                    e,
                    vec![(pe, pc.clone()), (e, c.clone())],
                ));
            }
        }
        prev = Some((e, c));
    }
    Ok(AdmissibilityReport {
        verdict: Verdict::Admissible,
        witness_exponent: None,
        witness_coefficients: Vec::new(),
    })
}

/// Outcome of the winding-number-mod-`b` check on `Δ_{T(a,b)}(t) · Δ_C(t^w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WModBOutcome {
    /// `b | w`: the coefficient at `t^{g+hw-w}` cancels to zero.
    NoViolation,
    /// `w ≡ 1 (mod b)`: coefficient `-2` at `t^{g+hw-w}`.
    MagnitudeViolation {
        exponent: i64,
        #[serde(serialize_with = "crate::text::bigint_json::serialize")]
        coefficient: BigInt,
    },
    /// Otherwise: consecutive nonzero coefficients at `t^{g+hw-qb-1}` and
    /// `t^{g+hw-w}` (`q = floor(w/b)`) share a sign.
    SameSignViolation { upper: i64, lower: i64 },
}

impl WModBOutcome {
    pub fn class(&self) -> &'static str {
        match self {
            WModBOutcome::NoViolation => "no_violation",
            WModBOutcome::MagnitudeViolation { .. } => "magnitude_violation",
            WModBOutcome::SameSignViolation { .. } => "same_sign_violation",
        }
    }
}

fn validate_torus_pattern(a: i64, b: i64) -> Result<TorusKnot> {
    if !(a > b && b >= 2) {
        return Err(Error::Precondition(format!(
            "pattern T({a},{b}) must satisfy a > b >= 2"
        )));
    }
    TorusKnot::new(a, b).map_err(|e| Error::Precondition(e.to_string()))
}

pub(crate) fn validate_companion(companion: &LaurentPoly) -> Result<i64> {
    check_symmetrized(companion, "companion")?;
    let h = top_genus(companion);
    if h < 1 {
        return Err(Error::Precondition(
            "companion must have genus h >= 1".into(),
        ));
    }
    let report = lspace_admissible(companion)?;
    if !report.is_admissible() {
        return Err(Error::Precondition(format!(
            "companion {companion} is not L-space admissible ({})",
            report.verdict.as_str()
        )));
    }
    Ok(h)
}

/// Computes `Δ_{T(a,b)}(t) · companion(t^w)` and locates the coefficient
/// violation forced by `w mod b`, confirming it on the actual product.
///
/// A predicted witness that does not appear in the product is reported as
/// [`Error::WitnessMismatch`].
pub fn lemma_w_mod_b_check(
    a: i64,
    b: i64,
    w: i64,
    companion: &LaurentPoly,
) -> Result<WModBOutcome> {
    let pattern = validate_torus_pattern(a, b)?;
    if !(1 <= w && w < a) {
        return Err(Error::Precondition(format!(
            "winding number must satisfy 1 <= w < a, got w = {w}, a = {a}"
        )));
    }
    let h = validate_companion(companion)?;
    let product = SatelliteSpec::new(pattern.alexander(), companion.clone(), w)?.alexander();
    locate_w_mod_b_violation(&pattern, w, h, companion, &product)
}

/// The prediction half of [`lemma_w_mod_b_check`], applied to an already
/// computed product `Δ_{T(a,b)}(t) · companion(t^w)` with companion genus `h`.
pub(crate) fn locate_w_mod_b_violation(
    pattern: &TorusKnot,
    w: i64,
    h: i64,
    companion: &LaurentPoly,
    product: &LaurentPoly,
) -> Result<WModBOutcome> {
    let (a, b) = (pattern.a(), pattern.b());
    let g = pattern.genus();
    let pivot = g + h * w - w;
    let coeff = product.coefficient(pivot);
    let mismatch = |what: String| {
        Error::WitnessMismatch(format!(
            "T({a},{b}), w = {w}, companion {companion}: {what}"
        ))
    };

    match w % b {
        0 => {
            if !coeff.is_zero() {
                return Err(mismatch(format!(
                    "expected t^{pivot} coefficient 0, found {coeff}"
                )));
            }
            Ok(WModBOutcome::NoViolation)
        }
        1 => {
            if coeff != BigInt::from(-2) {
                return Err(mismatch(format!(
                    "expected t^{pivot} coefficient -2, found {coeff}"
                )));
            }
            Ok(WModBOutcome::MagnitudeViolation {
                exponent: pivot,
                coefficient: coeff,
            })
        }
        _ => {
            let upper = g + h * w - (w / b) * b - 1;
            let c_up = product.coefficient(upper);
            let gap_clear = (pivot + 1..upper).all(|e| product.coefficient(e).is_zero());
            let same_sign =
                !c_up.is_zero() && !coeff.is_zero() && c_up.is_positive() == coeff.is_positive();
            if !(gap_clear && same_sign) {
                return Err(mismatch(format!(
                    "expected consecutive same-sign coefficients at t^{upper} and t^{pivot}, \
                     found {c_up} and {coeff}"
                )));
            }
            Ok(WModBOutcome::SameSignViolation {
                upper,
                lower: pivot,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConfigImpossible {
    /// `w >= a` together with `w^2 | ab` would force `ab >= a^2`.
    WindingNotBelowA,
    /// `b | w` together with `w^2 | ab` makes `a` a multiple of `b`.
    AMultipleOfB,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ObstructionOutcome {
    Obstructed { violation: WModBOutcome },
    ConfigImpossible { reason: ConfigImpossible },
    NotObstructed,
}

impl ObstructionOutcome {
    pub fn verdict(&self) -> &'static str {
        match self {
            ObstructionOutcome::Obstructed { .. } => "obstructed",
            ObstructionOutcome::ConfigImpossible { .. } => "config_impossible",
            ObstructionOutcome::NotObstructed => "not_obstructed",
        }
    }
}

/// Polynomial-level obstruction for satellites with pattern closing to
/// `T(a,b)` and `w^2 | ab`, following the case split `w < a`, then `b | w`.
pub fn torus_satellite_obstruction(
    a: i64,
    b: i64,
    w: i64,
    companion: &LaurentPoly,
) -> Result<ObstructionOutcome> {
    validate_torus_pattern(a, b)?;
    if w < 1 {
        return Err(Error::Precondition(format!(
            "winding number must be >= 1, got {w}"
        )));
    }
    let ab = a * b;
    if ab % (w * w) != 0 {
        return Err(Error::Precondition(format!(
            "w^2 = {} does not divide ab = {ab}",
            w * w
        )));
    }
    validate_companion(companion)?;
    if w >= a {
        return Ok(ObstructionOutcome::ConfigImpossible {
            reason: ConfigImpossible::WindingNotBelowA,
        });
    }
    if w % b == 0 {
        return Ok(ObstructionOutcome::ConfigImpossible {
            reason: ConfigImpossible::AMultipleOfB,
        });
    }
    Ok(match lemma_w_mod_b_check(a, b, w, companion)? {
        WModBOutcome::NoViolation => ObstructionOutcome::NotObstructed,
        violation => ObstructionOutcome::Obstructed { violation },
    })
}
