//! Newton polygons of enhanced A-polynomials and torus-knot detection.
//!
//! Lattice coordinates follow the `(a, b) <-> M^b L^a` convention: the first
//! coordinate is the `L`-exponent, the second the `M`-exponent, so an edge
//! slope `Δb/Δa` reads directly as a slope on the knot's boundary torus.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::text::parse_terms;
use crate::torus::TorusKnot;

/// Integer polynomial in `M^{±1}`, `L^{±1}`, defined up to an overall sign.
///
/// Keys are `(l_exp, m_exp)`. The coefficient of the lexicographically
/// smallest key is always positive, so equality ignores the global sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl BiPoly {
    pub fn one() -> Self {
        Self::from_terms([((0, 0), 1)])
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = ((i64, i64), C)>) -> Self {
        let mut acc: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        for (k, c) in terms {
            *acc.entry(k).or_insert_with(BigInt::zero) += c.into();
        }
        Self::normalized(acc)
    }

    fn normalized(mut terms: BTreeMap<(i64, i64), BigInt>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        if terms.values().next().is_some_and(|c| c.is_negative()) {
            for c in terms.values_mut() {
                *c = -std::mem::take(c);
            }
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    /// Coefficient of `M^m_exp L^l_exp` in the sign-normalized form.
    pub fn coefficient(&self, l_exp: i64, m_exp: i64) -> BigInt {
        self.terms.get(&(l_exp, m_exp)).cloned().unwrap_or_default()
    }

    /// `((l_exp, m_exp), coeff)` in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Exponent lattice points `(a, b)` for the monomials `M^b L^a`.
    pub fn support(&self) -> Vec<(i64, i64)> {
        self.terms.keys().copied().collect()
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;

    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut acc: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        for ((l1, m1), c1) in self.terms.iter() {
            for ((l2, m2), c2) in rhs.terms.iter() {
                *acc.entry((l1 + l2, m1 + m2)).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        BiPoly::normalized(acc)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, ((l, m), c)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            let mag = c.abs();
            if !mag.is_one() || (*l == 0 && *m == 0) {
                factors.push(mag.to_string());
            }
            for (var, e) in [('M', *m), ('L', *l)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for BiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let terms = parse_terms(s, &['M', 'L'])?;
        Ok(BiPoly::from_terms(terms.into_iter().map(|t| {
            let exp = |v: char| t.powers.iter().find(|(c, _)| *c == v).map_or(0, |p| p.1);
            ((exp('L'), exp('M')), t.coeff)
        })))
    }
}

/// An exact rational slope, or the vertical slope of an edge with `Δa = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slope {
    Finite(Ratio<i64>),
    Infinite,
}

impl Slope {
    /// Slope `Δb/Δa` of the vector `(da, db)`.
    fn of(da: i64, db: i64) -> Self {
        if da == 0 {
            Slope::Infinite
        } else {
            Slope::Finite(Ratio::new(db, da))
        }
    }

    pub fn integer(n: i64) -> Self {
        Slope::Finite(Ratio::from_integer(n))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) => write!(f, "{r}"),
            Slope::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    /// Sorted, deduplicated `(a, b)` points.
    pub lattice_points: Vec<(i64, i64)>,
    /// Extreme points in counterclockwise order, starting from the lexicographic minimum.
    pub hull_vertices: Vec<(i64, i64)>,
    /// One slope per hull edge; a segment has a single edge, a point none.
    pub edge_slopes: Vec<Slope>,
}

fn cross(o: (i64, i64), p: (i64, i64), q: (i64, i64)) -> i128 {
    let (ox, oy) = (i128::from(o.0), i128::from(o.1));
    (i128::from(p.0) - ox) * (i128::from(q.1) - oy)
        - (i128::from(p.1) - oy) * (i128::from(q.0) - ox)
}

/// Andrew's monotone chain over exact integers; collinear points are dropped
/// from the hull.
fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    if points.len() <= 2 {
        return points.to_vec();
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &pt in points {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], pt) <= 0 {
            lower.pop();
        }
        lower.push(pt);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &pt in points.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], pt) <= 0 {
            upper.pop();
        }
        upper.push(pt);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn newton_polygon(f: &BiPoly) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("Newton polygon"));
    }
    let lattice_points = f.support();
    let hull_vertices = convex_hull(&lattice_points);
    let edge_slopes = match hull_vertices.len() {
        1 => Vec::new(),
        2 => {
            let (p, q) = (hull_vertices[0], hull_vertices[1]);
            vec![Slope::of(q.0 - p.0, q.1 - p.1)]
        }
        n => (0..n)
            .map(|i| {
                let (p, q) = (hull_vertices[i], hull_vertices[(i + 1) % n]);
                Slope::of(q.0 - p.0, q.1 - p.1)
            })
            .collect(),
    };
    Ok(NewtonPolygon {
        lattice_points,
        hull_vertices,
        edge_slopes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thinness {
    Point,
    Thin(Ratio<i64>),
    /// Not contained in a segment of rational slope; `vertical` marks a
    /// collinear support along a line of infinite slope.
    NotThin {
        vertical: bool,
    },
}

pub fn thinness(f: &BiPoly) -> Result<Thinness> {
    let poly = newton_polygon(f)?;
    Ok(match poly.hull_vertices.len() {
        1 => Thinness::Point,
        2 => match poly.edge_slopes[0] {
            Slope::Finite(r) => Thinness::Thin(r),
            Slope::Infinite => Thinness::NotThin { vertical: true },
        },
        _ => Thinness::NotThin { vertical: false },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct EdgeSlope {
    pub slope: Slope,
    /// Every Newton polygon edge slope is a strict boundary slope candidate.
    pub strict_candidate: bool,
}

/// Distinct edge slopes of the Newton polygon, sorted.
pub fn edge_boundary_slopes(f: &BiPoly) -> Result<Vec<EdgeSlope>> {
    let mut slopes = newton_polygon(f)?.edge_slopes;
    slopes.sort();
    slopes.dedup();
    Ok(slopes
        .into_iter()
        .map(|slope| EdgeSlope {
            slope,
            strict_candidate: true,
        })
        .collect())
}

/// Prime factorization as `(prime, exponent)` by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All `(p, q)` with `2 <= p < q`, `pq = n` and `gcd(p, q) = 1`, sorted by `p`.
///
/// Each split of the prime-power factors of `n` into two nonempty groups
/// gives one pair, so there are `2^(ω(n)-1) - 1` of them.
pub fn coprime_factorizations(n: u64) -> Result<Vec<(u64, u64)>> {
    if n < 4 {
        return Err(Error::Precondition(format!(
            "coprime factorizations need n >= 4, got {n}"
        )));
    }
    let powers: Vec<u64> = factorize(n).into_iter().map(|(p, e)| p.pow(e)).collect();
    let mut pairs = Vec::new();
    for mask in 1..(1u64 << powers.len()) - 1 {
        let p: u64 = powers
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, pp)| *pp)
            .product();
        let q = n / p;
        if p < q {
            pairs.push((p, q));
        }
    }
    pairs.sort_unstable();
    Ok(pairs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetectionResult {
    #[serde(rename = "unknot")]
    pub is_unknot: bool,
    pub unique: bool,
    pub candidates: Vec<TorusKnot>,
}

impl DetectionResult {
    fn unknot() -> Self {
        Self {
            is_unknot: true,
            unique: true,
            candidates: Vec::new(),
        }
    }

    fn from_candidates(mut candidates: Vec<TorusKnot>) -> Self {
        candidates.sort_by_key(|k| (k.b(), k.a()));
        candidates.dedup();
        Self {
            is_unknot: false,
            unique: candidates.len() == 1,
            candidates,
        }
    }
}

/// Torus knots whose enhanced A-polynomial equals `f` exactly (up to sign).
///
/// `f = 1` is the unknot. Otherwise `f` must be one of the four two-term
/// templates; the `L`-degree-1 ones pin down `T(a,2)`, while the `L`-degree-2
/// ones only fix the signed product `ab` and every coprime split of `|ab|`
/// with both factors at least 3 is a candidate.
pub fn detect_torus_from_apoly(f: &BiPoly) -> DetectionResult {
    if f.is_one() {
        return DetectionResult::unknot();
    }
    let terms: Vec<((i64, i64), BigInt)> = f.terms().map(|(k, c)| (k, c.clone())).collect();
    let [(k0, c0), (k1, c1)] = terms.as_slice() else {
        return DetectionResult::from_candidates(Vec::new());
    };
    let (one, minus_one) = (BigInt::one(), -BigInt::one());

    let mut candidates: Vec<TorusKnot> = Vec::new();
    match (*k0, c0, *k1, c1) {
        // 1 + M^{2a} L
        ((0, 0), c0, (1, m), c1) if *c0 == one && *c1 == one && m > 0 && m % 2 == 0 => {
            candidates.extend(TorusKnot::new(m / 2, 2).ok());
        }
        // M^{-2a} + L, a < 0
        ((0, m), c0, (1, 0), c1) if *c0 == one && *c1 == one && m > 0 && m % 2 == 0 => {
            candidates.extend(TorusKnot::new(-m / 2, 2).ok());
        }
        // ±(1 - M^{2ab} L^2) and ±(M^{-2ab} - L^2)
        ((0, 0), c0, (2, m), c1) | ((0, m), c0, (2, 0), c1)
            if *c0 == one && *c1 == minus_one && m > 0 && m % 2 == 0 =>
        {
            let sign = if k0.1 == 0 { 1 } else { -1 };
            let n = (m / 2) as u64;
            for (p, q) in coprime_factorizations(n).unwrap_or_default() {
                if p >= 3 {
                    candidates.extend(TorusKnot::new(sign * q as i64, p as i64).ok());
                }
            }
        }
        _ => {}
    }
    candidates.retain(|k| k.enhanced_apoly() == *f);
    DetectionResult::from_candidates(candidates)
}

/// Refines [`detect_torus_from_apoly`] with the span width `2g` of the
/// symmetrized Alexander polynomial.
pub fn detect_with_degree(f: &BiPoly, alexander_degree: u64) -> DetectionResult {
    let base = detect_torus_from_apoly(f);
    if base.is_unknot {
        return if alexander_degree == 0 {
            base
        } else {
            DetectionResult::from_candidates(Vec::new())
        };
    }
    let kept = base
        .candidates
        .into_iter()
        .filter(|k| u64::try_from(2 * k.genus()).ok() == Some(alexander_degree))
        .collect();
    DetectionResult::from_candidates(kept)
}

fn is_prime_power(n: u64) -> bool {
    factorize(n).len() == 1
}

/// Whether the enhanced A-polynomial singles out `k` among torus knots:
/// true iff one parameter is 2 or both are prime powers (necessarily of
/// different primes, as they are coprime).
pub fn detectability(k: &TorusKnot) -> bool {
    let (p, q) = (k.p().unsigned_abs(), k.b().unsigned_abs());
    p == 2 || q == 2 || (is_prime_power(p) && is_prime_power(q))
}
