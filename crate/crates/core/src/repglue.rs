//! Abelian extension of a peripheral `SL(2,C)` representation across a
//! satellite pattern space.
//!
//! Given a companion representation `ρ` with `ρ(μ_C)^p ρ(λ_C)^q = I`, and a
//! pattern of winding number `w`, we build commuting matrices
//! `ρ_V(μ_P)`, `ρ_V(λ_P)` with
//!
//! 1. `ρ_V(μ_P)^w = ρ(μ_C)`,
//! 2. `ρ_V(λ_P) = ρ(λ_C)^w`,
//! 3. `ρ_V(μ_P)^{pw²/d} ρ_V(λ_P)^{q/d} = I`, where `d = gcd(q, w²)`.
//!
//! When `ρ(μ_C)` is a Jordan block with eigenvalue `-1` and `w` is even it has
//! no `w`-th root, and the construction twists `ρ` by the central character
//! sending `μ_C ↦ -1`, `λ_C ↦ 1` first.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use num_integer::Integer;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Entries below this are treated as structural zeros when reading Jordan form.
const STRUCTURAL_ZERO: f64 = 1e-12;

/// Largest allowed distance of `(pθ + qφ)/2π` from an integer.
const WINDING_ROUNDING_TOL: f64 = 1e-6;

/// Largest entry modulus the sampler lets the verified matrices reach, so
/// that rounding stays far below the default tolerance.
const SAMPLER_MAX_ENTRY: f64 = 1e3;

/// A 2×2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C(pub [[Complex64; 2]; 2]);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl Mat2C {
    pub fn new(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Self {
        Mat2C([[a, b], [cc, d]])
    }

    pub fn identity() -> Self {
        Self::diag(c(1.0), c(1.0))
    }

    pub fn diag(x: Complex64, y: Complex64) -> Self {
        Self::new(x, c(0.0), c(0.0), y)
    }

    /// `scale · [[1, off], [0, 1]]`.
    pub fn unipotent(scale: Complex64, off: Complex64) -> Self {
        Self::new(scale, scale * off, c(0.0), scale)
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Self::new(s * m[0][0], s * m[0][1], s * m[1][0], s * m[1][1])
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self) -> Self {
        let m = &self.0;
        let inv_det = self.det().inv();
        Self::new(m[1][1], -m[0][1], -m[1][0], m[0][0]).scale(inv_det)
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Max-norm of the entrywise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn commutator_residual(&self, other: &Self) -> f64 {
        (*self * *other).max_diff(&(*other * *self))
    }

    fn is_scalar_multiple_of_identity(&self, s: f64, tol: f64) -> bool {
        self.max_diff(&Self::identity().scale(c(s))) < tol
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;

    fn mul(self, rhs: Mat2C) -> Mat2C {
        let (a, b) = (&self.0, &rhs.0);
        Mat2C([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl fmt::Display for Mat2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

/// Values of `ρ` on the companion meridian and longitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeripheralPair {
    mu: Mat2C,
    lambda: Mat2C,
}

impl PeripheralPair {
    pub fn new(mu: Mat2C, lambda: Mat2C) -> Result<Self> {
        for (name, m) in [("mu", &mu), ("lambda", &lambda)] {
            let det = m.det();
            if (det - c(1.0)).norm() > DEFAULT_TOLERANCE {
                return Err(Error::InvalidPeripheral(format!(
                    "{name} has determinant {det}, not 1"
                )));
            }
        }
        if mu.is_scalar_multiple_of_identity(1.0, DEFAULT_TOLERANCE)
            || mu.is_scalar_multiple_of_identity(-1.0, DEFAULT_TOLERANCE)
        {
            return Err(Error::InvalidPeripheral(
                "mu must not be central (±I)".into(),
            ));
        }
        let comm = mu.commutator_residual(&lambda);
        if comm > DEFAULT_TOLERANCE {
            return Err(Error::InvalidPeripheral(format!(
                "mu and lambda do not commute (residual {comm:e})"
            )));
        }
        Ok(Self { mu, lambda })
    }

    pub fn mu(&self) -> &Mat2C {
        &self.mu
    }

    pub fn lambda(&self) -> &Mat2C {
        &self.lambda
    }
}

/// Jordan-form case of `ρ(μ_C)` relative to the winding number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CaseTag {
    /// `μ = diag(α, 1/α)`, `λ = diag(β, 1/β)`, `α ≠ ±1`.
    Diagonal { alpha: Complex64, beta: Complex64 },
    /// `μ = ε[[1, a], [0, 1]]`, `λ = η[[1, b], [0, 1]]` with `ε^w = ε`.
    JordanPlus {
        epsilon: i8,
        a_off: Complex64,
        eta: i8,
        b_off: Complex64,
    },
    /// `μ = -[[1, a], [0, 1]]` with `w` even.
    JordanMinus {
        a_off: Complex64,
        eta: i8,
        b_off: Complex64,
    },
}

impl CaseTag {
    pub fn number(&self) -> u8 {
        match self {
            CaseTag::Diagonal { .. } => 1,
            CaseTag::JordanPlus { .. } => 2,
            CaseTag::JordanMinus { .. } => 3,
        }
    }
}

fn as_sign(z: Complex64) -> Option<i8> {
    if (z - c(1.0)).norm() < DEFAULT_TOLERANCE {
        Some(1)
    } else if (z + c(1.0)).norm() < DEFAULT_TOLERANCE {
        Some(-1)
    } else {
        None
    }
}

/// Reads the Jordan-form case of `pp.mu` and the matching shape of `pp.lambda`.
///
/// Inputs not already in Jordan normal form are rejected; callers conjugate first.
pub fn classify_case(pp: &PeripheralPair, w: i64) -> Result<CaseTag> {
    if w < 1 {
        return Err(Error::Precondition(format!(
            "winding number must be >= 1, got {w}"
        )));
    }
    let (mu, lam) = (&pp.mu, &pp.lambda);
    if mu.entry(1, 0).norm() > STRUCTURAL_ZERO {
        return Err(Error::InvalidPeripheral(format!(
            "mu = {mu} is not upper triangular, so not in Jordan normal form"
        )));
    }
    let upper = mu.entry(0, 1);
    if upper.norm() <= STRUCTURAL_ZERO {
        let alpha = mu.entry(0, 0);
        if lam.entry(0, 1).norm() > STRUCTURAL_ZERO || lam.entry(1, 0).norm() > STRUCTURAL_ZERO {
            return Err(Error::InvalidPeripheral(format!(
                "lambda = {lam} must be diagonal when mu is"
            )));
        }
        return Ok(CaseTag::Diagonal {
            alpha,
            beta: lam.entry(0, 0),
        });
    }

    let eps = as_sign(mu.entry(0, 0))
        .filter(|_| (mu.entry(0, 0) - mu.entry(1, 1)).norm() < DEFAULT_TOLERANCE)
        .ok_or_else(|| {
            Error::InvalidPeripheral(format!(
                "mu = {mu} has a nonzero off-diagonal entry but is not a ±1 Jordan block"
            ))
        })?;
    let eta = as_sign(lam.entry(0, 0))
        .filter(|_| {
            (lam.entry(0, 0) - lam.entry(1, 1)).norm() < DEFAULT_TOLERANCE
                && lam.entry(1, 0).norm() <= STRUCTURAL_ZERO
        })
        .ok_or_else(|| {
            Error::InvalidPeripheral(format!(
                "lambda = {lam} is not of the form ±[[1, b], [0, 1]]"
            ))
        })?;
    let a_off = upper / c(f64::from(eps));
    let b_off = lam.entry(0, 1) / c(f64::from(eta));
    Ok(if eps == -1 && w % 2 == 0 {
        CaseTag::JordanMinus { a_off, eta, b_off }
    } else {
        CaseTag::JordanPlus {
            epsilon: eps,
            a_off,
            eta,
            b_off,
        }
    })
}

/// Smallest `k >= 0` with `m + pk ≡ 0 (mod d)`.
pub fn choose_k(m: i64, p: i64, d: i64) -> Result<i64> {
    if d < 1 {
        return Err(Error::Precondition(format!(
            "modulus must be positive, got {d}"
        )));
    }
    let eg = p.rem_euclid(d).extended_gcd(&d);
    if eg.gcd != 1 {
        return Err(Error::Precondition(format!(
            "gcd({p}, {d}) = {} is not 1",
            eg.gcd
        )));
    }
    // eg.x is p^{-1} mod d
    let k = (-(m.rem_euclid(d)) * eg.x.rem_euclid(d)).rem_euclid(d);
    Ok(k)
}

/// Surgery slope `p/q`, winding number and peripheral data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlueInstance {
    p: i64,
    q: i64,
    w: i64,
    d: i64,
    peripheral: PeripheralPair,
}

impl GlueInstance {
    pub fn new(p: i64, q: i64, w: i64, peripheral: PeripheralPair) -> Result<Self> {
        if q < 1 {
            return Err(Error::Precondition(format!("q must be positive, got {q}")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::Precondition(format!(
                "p/q = {p}/{q} is not in lowest terms"
            )));
        }
        if w < 1 {
            return Err(Error::Precondition(format!(
                "winding number must be >= 1, got {w}"
            )));
        }
        let rel = peripheral.mu.pow(p) * peripheral.lambda.pow(q);
        let residual = rel.max_diff(&Mat2C::identity());
        if residual > DEFAULT_TOLERANCE {
            return Err(Error::InvalidPeripheral(format!(
                "mu^{p} lambda^{q} differs from I by {residual:e}"
            )));
        }
        Ok(Self {
            p,
            q,
            w,
            d: q.gcd(&(w * w)),
            peripheral,
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn w(&self) -> i64 {
        self.w
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn peripheral(&self) -> &PeripheralPair {
        &self.peripheral
    }

    /// The surgered slope `r w²` in lowest terms, `(p w²/d, q/d)`.
    pub fn surgered_slope(&self) -> (i64, i64) {
        (self.p * self.w * self.w / self.d, self.q / self.d)
    }
}

/// Polar data and branch choices used in the diagonal case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalData {
    pub s: f64,
    pub t: f64,
    pub theta: f64,
    pub phi: f64,
    pub m: i64,
    pub k: i64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extension {
    pub mu_p: Mat2C,
    pub lambda_p: Mat2C,
    pub central_twist_used: bool,
    pub chosen_k: Option<i64>,
    pub diagonal: Option<DiagonalData>,
    pub case: u8,
    pub residuals: [f64; 3],
}

impl Extension {
    /// Copy with `delta` added to one matrix entry. Entries `0..4` address
    /// `mu_p` row by row, `4..8` address `lambda_p`.
    pub fn perturbed(&self, entry: usize, delta: Complex64) -> Self {
        assert!(entry < 8, "entry index {entry} out of range 0..8");
        let mut out = *self;
        let m = if entry < 4 {
            &mut out.mu_p
        } else {
            &mut out.lambda_p
        };
        let (i, j) = ((entry % 4) / 2, entry % 2);
        m.0[i][j] += delta;
        out
    }
}

/// Builds `ρ_V(μ_P)` and `ρ_V(λ_P)` for the instance's case.
pub fn construct_extension(g: &GlueInstance) -> Result<Extension> {
    let w = g.w;
    let wf = w as f64;
    let case = classify_case(&g.peripheral, w)?;
    let (mu_p, lambda_p, twist, diagonal) = match case {
        CaseTag::Diagonal { alpha, beta } => {
            let (s, theta) = alpha.to_polar();
            let (t, phi) = beta.to_polar();
            let winding = (g.p as f64 * theta + g.q as f64 * phi) / (2.0 * PI);
            let m = winding.round();
            if (winding - m).abs() > WINDING_ROUNDING_TOL {
                return Err(Error::InvalidPeripheral(format!(
                    "(pθ + qφ)/2π = {winding} is not an integer"
                )));
            }
            let m = m as i64;
            let k = choose_k(m, g.p, g.d)?;
            let eta = Complex64::from_polar(s.powf(1.0 / wf), (theta + 2.0 * PI * k as f64) / wf);
            let beta_w = beta.powi(w as i32);
            let data = DiagonalData {
                s,
                t,
                theta,
                phi,
                m,
                k,
            };
            (
                Mat2C::diag(eta, eta.inv()),
                Mat2C::diag(beta_w, beta_w.inv()),
                false,
                Some(data),
            )
        }
        CaseTag::JordanPlus {
            epsilon,
            a_off,
            eta,
            b_off,
        } => (
            Mat2C::unipotent(c(f64::from(epsilon)), a_off / wf),
            Mat2C::unipotent(c(f64::from(eta).powi(w as i32)), b_off * wf),
            false,
            None,
        ),
        CaseTag::JordanMinus { a_off, b_off, .. } => (
            Mat2C::unipotent(c(1.0), a_off / wf),
            Mat2C::unipotent(c(1.0), b_off * wf),
            true,
            None,
        ),
    };
    let residuals = residuals(g, &mu_p, &lambda_p, twist);
    Ok(Extension {
        mu_p,
        lambda_p,
        central_twist_used: twist,
        chosen_k: diagonal.map(|d| d.k),
        diagonal,
        case: case.number(),
        residuals,
    })
}

fn residuals(g: &GlueInstance, mu_p: &Mat2C, lambda_p: &Mat2C, twist: bool) -> [f64; 3] {
    let (mu, lambda) = (&g.peripheral.mu, &g.peripheral.lambda);
    // the central character sends mu to -1 and lambda to +1
    let target_mu = if twist { mu.scale(c(-1.0)) } else { *mu };
    let (n_mu, n_lambda) = g.surgered_slope();
    [
        mu_p.pow(g.w).max_diff(&target_mu),
        lambda_p.max_diff(&lambda.pow(g.w)),
        (mu_p.pow(n_mu) * lambda_p.pow(n_lambda)).max_diff(&Mat2C::identity()),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GlueEquation {
    /// `ρ_V(μ_P)^w = ρ(μ_C)` (twisted when required).
    MeridianRoot,
    /// `ρ_V(λ_P) = ρ(λ_C)^w`.
    LongitudePower,
    /// `ρ_V(μ_P^{pw²/d} λ_P^{q/d}) = I`.
    SurgeryRelation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verification {
    Ok {
        residuals: [f64; 3],
    },
    Fail {
        /// The equation with the largest residual.
        equation: GlueEquation,
        residual: f64,
        residuals: [f64; 3],
    },
}

impl Verification {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verification::Ok { .. })
    }

    pub fn residuals(&self) -> [f64; 3] {
        match self {
            Verification::Ok { residuals } | Verification::Fail { residuals, .. } => *residuals,
        }
    }
}

/// Recomputes the three defining equations from the instance and the
/// extension's two matrices alone. Whether the central twist is required is
/// re-derived from the instance, not taken from the extension.
pub fn verify_extension(g: &GlueInstance, e: &Extension, tol: f64) -> Verification {
    let needs_twist = matches!(
        classify_case(&g.peripheral, g.w),
        Ok(CaseTag::JordanMinus { .. })
    );
    let mut res = residuals(g, &e.mu_p, &e.lambda_p, needs_twist);
    if e.central_twist_used != needs_twist {
        res[0] = f64::INFINITY;
    }
    let equations = [
        GlueEquation::MeridianRoot,
        GlueEquation::LongitudePower,
        GlueEquation::SurgeryRelation,
    ];
    let (worst, residual) = res
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, r)| {
            // NaN counts as a failure
            let r = if r.is_nan() { f64::INFINITY } else { *r };
            if r > acc.1 {
                (i, r)
            } else {
                acc
            }
        });
    if residual < tol {
        Verification::Ok { residuals: res }
    } else {
        Verification::Fail {
            equation: equations[worst],
            residual,
            residuals: res,
        }
    }
}

/// `z = s^{pw/d} t^{qw/d} exp(i(pw(θ + 2πk) + qwφ)/d)`, the diagonal entry of
/// `ρ_V(μ_P^{pw²/d} λ_P^{q/d})` assembled directly from the polar data.
pub fn case1_scalar(data: &DiagonalData, p: i64, q: i64, w: i64, d: i64) -> Complex64 {
    let (pf, qf, wf, df) = (p as f64, q as f64, w as f64, d as f64);
    let modulus = data.s.powf(pf * wf / df) * data.t.powf(qf * wf / df);
    let angle = (pf * wf * (data.theta + 2.0 * PI * data.k as f64) + data.phi * qf * wf) / df;
    Complex64::from_polar(modulus, angle)
}

/// `ε^{pw²/d} η^{wq/d}` for signs `ε, η ∈ {±1}`, by exponent parity.
pub fn case2_sign(epsilon: i8, eta: i8, p: i64, q: i64, w: i64, d: i64) -> i8 {
    let sign_pow = |s: i8, n: i64| {
        if s == -1 && n.rem_euclid(2) == 1 {
            -1
        } else {
            1
        }
    };
    sign_pow(epsilon, p * w * w / d) * sign_pow(eta, w * (q / d))
}

/// Deterministic random instances for one case, all satisfying
/// `μ^p λ^q = I` by construction.
pub struct InstanceSampler {
    rng: ChaCha8Rng,
    case: u8,
}

impl InstanceSampler {
    pub fn new(case: u8, seed: u64) -> Result<Self> {
        if !(1..=3).contains(&case) {
            return Err(Error::Precondition(format!(
                "case must be 1, 2 or 3, got {case}"
            )));
        }
        let stream = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ u64::from(case);
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(stream),
            case,
        })
    }

    fn slope(&mut self, require_odd_q: bool) -> (i64, i64) {
        loop {
            let p = self.rng.gen_range(-6i64..=6);
            let q = self.rng.gen_range(1i64..=6);
            if p.gcd(&q) == 1 && (!require_odd_q || q % 2 == 1) {
                return (p, q);
            }
        }
    }

    fn off_diagonal(&mut self) -> Complex64 {
        let r = self.rng.gen_range(0.5..2.0);
        let th = self.rng.gen_range(-PI..PI);
        Complex64::from_polar(r, th)
    }

    pub fn sample(&mut self) -> GlueInstance {
        loop {
            if let Some(inst) = self.try_sample() {
                return inst;
            }
        }
    }

    fn try_sample(&mut self) -> Option<GlueInstance> {
        let (mu, lambda, p, q, w) = match self.case {
            1 => {
                let (p, q) = self.slope(false);
                let w = self.rng.gen_range(1i64..=4);
                let alpha = Complex64::from_polar(
                    self.rng.gen_range(0.5..2.0),
                    self.rng.gen_range(-PI..PI),
                );
                if (alpha - c(1.0)).norm() < 0.2 || (alpha + c(1.0)).norm() < 0.2 {
                    return None;
                }
                // the surgered power of mu_P has modulus |α|^{|p| w / d}, the
                // largest of all the matrices that get verified
                let d = q.gcd(&(w * w));
                let growth = alpha.norm().ln().abs() * (p.abs() * w) as f64 / d as f64;
                if growth > SAMPLER_MAX_ENTRY.ln() {
                    return None;
                }
                // β is some q-th root of α^{-p}
                let j = self.rng.gen_range(0..q) as f64;
                let beta = ((-(p as f64)) * alpha.ln() + Complex64::new(0.0, 2.0 * PI * j))
                    .unscale(q as f64)
                    .exp();
                (
                    Mat2C::diag(alpha, alpha.inv()),
                    Mat2C::diag(beta, beta.inv()),
                    p,
                    q,
                    w,
                )
            }
            2 => {
                let (p, q) = self.slope(false);
                let w = self.rng.gen_range(1i64..=4);
                let mut eps: i8 = if w % 2 == 1 && self.rng.gen_bool(0.5) {
                    -1
                } else {
                    1
                };
                if q % 2 == 0 {
                    // ε^p η^q = 1 with q even needs ε^p = 1, and p is odd here
                    eps = 1;
                }
                let eta: i8 = if q % 2 == 1 {
                    if p % 2 == 0 {
                        1
                    } else {
                        eps
                    }
                } else if self.rng.gen_bool(0.5) {
                    1
                } else {
                    -1
                };
                let a = self.off_diagonal();
                let b = -a * (p as f64) / (q as f64);
                (
                    Mat2C::unipotent(c(f64::from(eps)), a),
                    Mat2C::unipotent(c(f64::from(eta)), b),
                    p,
                    q,
                    w,
                )
            }
            _ => {
                // (-1)^p η^q = 1 forces q odd and η = (-1)^p
                let (p, q) = self.slope(true);
                let w = 2 * self.rng.gen_range(1i64..=2);
                let eta: f64 = if p % 2 == 0 { 1.0 } else { -1.0 };
                let a = self.off_diagonal();
                let b = -a * (p as f64) / (q as f64);
                (
                    Mat2C::unipotent(c(-1.0), a),
                    Mat2C::unipotent(c(eta), b),
                    p,
                    q,
                    w,
                )
            }
        };
        let pp = PeripheralPair::new(mu, lambda).ok()?;
        GlueInstance::new(p, q, w, pp).ok()
    }
}

/// One line of `glue-verify` output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlueRecord {
    pub case: u8,
    pub p: i64,
    pub q: i64,
    pub w: i64,
    pub d: i64,
    pub k: Option<i64>,
    pub central_twist: bool,
    pub residuals: [f64; 3],
    pub ok: bool,
}

impl GlueRecord {
    pub fn new(g: &GlueInstance, e: &Extension, v: &Verification) -> Self {
        Self {
            case: e.case,
            p: g.p,
            q: g.q,
            w: g.w,
            d: g.d,
            k: e.chosen_k,
            central_twist: e.central_twist_used,
            residuals: v.residuals(),
            ok: v.is_ok(),
        }
    }
}
