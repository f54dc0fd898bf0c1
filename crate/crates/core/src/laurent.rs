//! One-variable Laurent polynomials over the integers.
//!
//! Terms are stored sparsely as `exponent -> coefficient` with no zero
//! coefficients, so structural equality is polynomial equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::text::parse_terms;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `coeff * t^exp`.
    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Coefficient of `t^exp`, zero when absent.
    pub fn coefficient(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Inclusive `(min_exp, max_exp)`.
    pub fn span(&self) -> Result<(i64, i64)> {
        match (self.terms.keys().next(), self.terms.keys().next_back()) {
            (Some(&lo), Some(&hi)) => Ok((lo, hi)),
            _ => Err(Error::ZeroPolynomial("span")),
        }
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Value at `t = 1`, i.e. the sum of the coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// `f(t^-1)`.
    pub fn mirror(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_palindromic_about(0)
    }

    /// Whether the coefficient at `e` equals the one at `center2 - e`.
    fn is_palindromic_about(&self, center2: i64) -> bool {
        self.terms
            .iter()
            .zip(self.terms.iter().rev())
            .take(self.terms.len().div_ceil(2))
            .all(|((e1, c1), (e2, c2))| e1 + e2 == center2 && c1 == c2)
    }

    /// Substitutes `t -> t^w`.
    pub fn dilate(&self, w: i64) -> Result<Self> {
        if w <= 0 {
            return Err(Error::Precondition(format!(
                "dilation factor must be positive, got {w}"
            )));
        }
        Ok(Self {
            terms: self.terms.iter().map(|(e, c)| (e * w, c.clone())).collect(),
        })
    }

    /// Returns `q` with `q * divisor == self`, or an error when the remainder is nonzero.
    ///
    /// Leading-term elimination from the top exponent. Any exact quotient has
    /// exponents in `[min(self) - min(divisor), max(self) - max(divisor)]`, so the
    /// loop stops with an error as soon as the next quotient term falls below that window.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self> {
        let (d_lo, d_hi) = divisor
            .span()
            .map_err(|_| Error::NonExactDivision("division by zero".into()))?;
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(q) = divide_small(self, divisor) {
            return Ok(q);
        }
        let d_lead = &divisor.terms[&d_hi];
        let floor = self.min_exp().unwrap_or(0) - d_lo;

        let mut rem = self.clone();
        let mut quotient = Self::zero();
        while let Some(top) = rem.max_exp() {
            let e = top - d_hi;
            if e < floor {
                return Err(Error::NonExactDivision(format!(
                    "nonzero remainder {rem} dividing {self} by {divisor}"
                )));
            }
            let (c, r) = rem.terms[&top].div_rem(d_lead);
            if !r.is_zero() {
                return Err(Error::NonExactDivision(format!(
                    "leading coefficient of {rem} not divisible by {d_lead}"
                )));
            }
            for (de, dc) in divisor.terms.iter() {
                rem.add_term(e + de, -(&c * dc));
            }
            quotient.add_term(e, c);
        }
        Ok(quotient)
    }

    /// Normalizes to `u * t^k * self` with `r(t) = r(1/t)` and `r(1) > 0`.
    pub fn symmetrize(&self) -> Result<Self> {
        let (lo, hi) = self.span()?;
        if (lo + hi) % 2 != 0 {
            return Err(Error::NotSymmetrizable(format!(
                "{self} has odd span width and cannot be centered"
            )));
        }
        if !self.is_palindromic_about(lo + hi) {
            return Err(Error::NotSymmetrizable(format!(
                "{self} is not palindromic up to shift"
            )));
        }
        let centered = self.shift(-(lo + hi) / 2);
        let at_one = centered.eval_at_one();
        if at_one.is_zero() {
            return Err(Error::NotSymmetrizable(format!("{self} vanishes at t = 1")));
        }
        Ok(if at_one.is_negative() {
            -centered
        } else {
            centered
        })
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }

    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if let Some(p) = mul_small(self, rhs) {
            return p;
        }
        let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in rhs.terms.iter() {
                *acc.entry(ea + eb).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly { terms: acc }
    }
}

/// Dense long division with checked `i128` arithmetic. Returns `None` on
/// overflow, on a nonzero remainder, or when the dense work estimate is too
/// large, leaving those cases to the exact sparse routine.
fn divide_small(num: &LaurentPoly, den: &LaurentPoly) -> Option<LaurentPoly> {
    const MAX_WORK: usize = 1 << 26;
    let (n_lo, n_hi) = (num.min_exp()?, num.max_exp()?);
    let (d_lo, d_hi) = (den.min_exp()?, den.max_exp()?);
    let width = usize::try_from(n_hi.checked_sub(n_lo)?.checked_add(1)?).ok()?;
    let shift = usize::try_from(d_hi - d_lo).ok()?;
    if shift >= width || width.checked_mul(den.terms.len())? > MAX_WORK {
        return None;
    }
    let mut rem = vec![0i128; width];
    for (e, c) in num.terms.iter() {
        rem[(e - n_lo) as usize] = i128::from(i64::try_from(c).ok()?);
    }
    let d: Vec<(usize, i128)> = den
        .terms
        .iter()
        .map(|(e, c)| Some(((e - d_lo) as usize, i128::from(i64::try_from(c).ok()?))))
        .collect::<Option<_>>()?;
    let lead = d.last()?.1;
    let mut quotient = vec![0i128; width - shift];
    for i in (shift..width).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        if c % lead != 0 {
            return None;
        }
        let qc = c / lead;
        quotient[i - shift] = qc;
        for &(j, dj) in &d {
            let slot = &mut rem[i - shift + j];
            *slot = slot.checked_sub(qc.checked_mul(dj)?)?;
        }
    }
    if rem[..shift].iter().any(|c| *c != 0) {
        return None;
    }
    let lo = n_lo - d_lo;
    Some(LaurentPoly {
        terms: quotient
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (lo + i as i64, BigInt::from(c)))
            .collect(),
    })
}

/// Dense `i128` product for machine-size coefficients, or `None` when the
/// operands are too large or too sparse for it to be safe and cheap.
fn mul_small(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let small = |p: &LaurentPoly| -> Option<Vec<(i64, i64)>> {
        p.terms
            .iter()
            .map(|(e, c)| i64::try_from(c).ok().map(|c| (*e, c)))
            .collect()
    };
    let (xa, xb) = (small(a)?, small(b)?);
    let (lo_a, hi_a) = (xa.first()?.0, xa.last()?.0);
    let (lo_b, hi_b) = (xb.first()?.0, xb.last()?.0);
    let width = usize::try_from((hi_a - lo_a).checked_add(hi_b - lo_b)?.checked_add(1)?).ok()?;
    if width > 4 * xa.len() * xb.len() + 64 {
        return None;
    }
    // every accumulated value is a sum of at most min(len) products
    let bound = |v: &[(i64, i64)]| v.iter().map(|(_, c)| c.unsigned_abs()).max().unwrap_or(0);
    let per_term = u128::from(bound(&xa)) * u128::from(bound(&xb));
    let terms = xa.len().min(xb.len()) as u128;
    if per_term.checked_mul(terms)? > i128::MAX as u128 {
        return None;
    }
    let mut acc = vec![0i128; width];
    for &(ea, ca) in &xa {
        let base = (ea - lo_a) as usize;
        for &(eb, cb) in &xb {
            acc[base + (eb - lo_b) as usize] += i128::from(ca) * i128::from(cb);
        }
    }
    let lo = lo_a + lo_b;
    Some(LaurentPoly {
        terms: acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (lo + i as i64, BigInt::from(c)))
            .collect(),
    })
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;

            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// Prints in decreasing exponent order, e.g. `t^3 - 2*t + 1 - t^-2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{e}")?,
                (_, false) => write!(f, "{mag}*t^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = LaurentPoly::zero();
        for term in parse_terms(s, &['t'])? {
            let exp = term.powers.first().map_or(0, |(_, e)| *e);
            p.add_term(exp, term.coeff);
        }
        Ok(p)
    }
}
