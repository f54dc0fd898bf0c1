//! Closed-form invariants of torus knots.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::apolygon::BiPoly;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// A nontrivial torus knot in canonical form `|a| > b >= 2`, `gcd(|a|, b) = 1`.
///
/// The mirror image is carried by the sign of `a`. `T(a,b)`, `T(b,a)` and
/// `T(-a,-b)` all canonicalize to the same value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusKnot {
    a: i64,
    b: i64,
}

impl TorusKnot {
    pub fn new(x: i64, y: i64) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidTorusKnot {
            a: x,
            b: y,
            reason: reason.to_string(),
        };
        if x == 0 || y == 0 {
            return Err(invalid("parameters must be nonzero"));
        }
        let (ux, uy) = (x.unsigned_abs(), y.unsigned_abs());
        if ux.gcd(&uy) != 1 {
            return Err(invalid("parameters must be coprime"));
        }
        if ux.min(uy) < 2 {
            return Err(invalid("a parameter of absolute value 1 gives the unknot"));
        }
        let big = i64::try_from(ux.max(uy)).map_err(|_| invalid("parameter out of range"))?;
        let small = i64::try_from(ux.min(uy)).map_err(|_| invalid("parameter out of range"))?;
        let sign = x.signum() * y.signum();
        Ok(Self {
            a: sign * big,
            b: small,
        })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// `|a|`, the larger parameter.
    pub fn p(&self) -> i64 {
        self.a.abs()
    }

    pub fn is_negative(&self) -> bool {
        self.a < 0
    }

    pub fn mirror(&self) -> Self {
        Self {
            a: -self.a,
            b: self.b,
        }
    }

    /// Signed product `ab`, the cabling slope.
    pub fn ab(&self) -> i64 {
        self.a * self.b
    }

    /// `(|a|-1)(b-1)/2`; mirroring preserves genus.
    pub fn genus(&self) -> i64 {
        (self.p() - 1) * (self.b - 1) / 2
    }

    /// Symmetrized Alexander polynomial, from
    /// `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))` with `p = |a|`, `q = b`.
    pub fn alexander(&self) -> LaurentPoly {
        let (p, q) = (self.p(), self.b);
        let t_minus_one = |e: i64| LaurentPoly::from_terms([(e, 1), (0, -1)]);
        let num = &t_minus_one(p * q) * &t_minus_one(1);
        let den = &t_minus_one(p) * &t_minus_one(q);
        num.exact_divide(&den)
            .and_then(|d| d.symmetrize())
            .expect("torus knot quotient is an exact palindromic polynomial")
    }

    /// Leading part `sum_{i=0}^{floor(p/q)} (t^{g-iq} - t^{g-iq-1})` of the
    /// Alexander polynomial; it agrees with [`Self::alexander`] on every
    /// exponent greater than `g - p`.
    pub fn leading_form(&self) -> LaurentPoly {
        let (p, q, g) = (self.p(), self.b, self.genus());
        let terms = (0..=p / q).flat_map(|i| [(g - i * q, 1), (g - i * q - 1, -1)]);
        LaurentPoly::from_terms(terms)
    }

    /// Enhanced A-polynomial in the four-case closed form.
    pub fn enhanced_apoly(&self) -> BiPoly {
        let (a, b) = (self.a, self.b);
        // terms are (l_exp, m_exp, coeff)
        let terms: [(i64, i64, i64); 2] = match (b == 2, a > 0) {
            (true, true) => [(0, 0, 1), (1, 2 * a, 1)],
            (true, false) => [(0, -2 * a, 1), (1, 0, 1)],
            (false, true) => [(0, 0, -1), (2, 2 * a * b, 1)],
            (false, false) => [(0, -2 * a * b, -1), (2, 0, 1)],
        };
        BiPoly::from_terms(terms.into_iter().map(|(l, m, c)| ((l, m), c)))
    }

    /// Slopes `(n ab + 1)/n` for `1 <= n <= n_max`, all lens space surgeries,
    /// together with their limit `ab`.
    pub fn abelian_slope_family(&self, n_max: u32) -> Result<SlopeFamily> {
        if n_max == 0 {
            return Err(Error::Precondition("slope family needs n_max >= 1".into()));
        }
        let ab = self.ab();
        let slopes = (1..=i64::from(n_max))
            .map(|n| {
                n.checked_mul(ab)
                    .and_then(|x| x.checked_add(1))
                    .map(|num| Ratio::new(num, n))
                    .ok_or_else(|| Error::Precondition("slope numerator overflows i64".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SlopeFamily {
            slopes,
            limit: Ratio::from_integer(ab),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeFamily {
    pub slopes: Vec<Ratio<i64>>,
    pub limit: Ratio<i64>,
}

impl fmt::Display for TorusKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{})", self.a, self.b)
    }
}

impl FromStr for TorusKnot {
    type Err = Error;

    /// Accepts `T(a,b)` (case-insensitive `T`, optional whitespace) or bare `a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("T(")
            .or_else(|| compact.strip_prefix("t("))
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(&compact);
        let (x, y) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected T(a,b), got `{s}`")))?;
        let parse = |v: &str| {
            v.parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad torus parameter `{v}` in `{s}`")))
        };
        TorusKnot::new(parse(x)?, parse(y)?)
    }
}

#[derive(Deserialize)]
struct RawTorus {
    a: i64,
    b: i64,
}

impl<'de> Deserialize<'de> for TorusKnot {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawTorus::deserialize(d)?;
        TorusKnot::new(raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}
