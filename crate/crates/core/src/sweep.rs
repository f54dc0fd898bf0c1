//! Exhaustive and randomized sweeps over parameter ranges.
//!
//! Each sweep yields its records in a fixed tuple order, whatever the number
//! of worker threads, plus a summary with per-verdict counts and the number
//! of records that contradict the expected classification.

use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::apolygon::{detect_torus_from_apoly, detectability, thinness, Thinness};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::repglue::{construct_extension, verify_extension, GlueRecord, InstanceSampler};
use crate::satellite::{
    locate_w_mod_b_violation, lspace_admissible, torus_satellite_obstruction, validate_companion,
    AdmissibilityReport, ObstructionOutcome, SatelliteSpec, Verdict, WModBOutcome,
};
use crate::torus::TorusKnot;

pub trait SweepRecord {
    fn verdict(&self) -> String;
    fn as_expected(&self) -> bool;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub counts: BTreeMap<String, usize>,
    pub contradictions: usize,
}

#[derive(Debug, Clone)]
pub struct SweepReport<R> {
    pub records: Vec<R>,
    pub summary: Summary,
}

impl<R: SweepRecord> SweepReport<R> {
    fn new(records: Vec<R>) -> Self {
        let mut counts = BTreeMap::new();
        let mut contradictions = 0;
        for r in &records {
            *counts.entry(r.verdict()).or_insert(0) += 1;
            if !r.as_expected() {
                contradictions += 1;
            }
        }
        let summary = Summary {
            total: records.len(),
            counts,
            contradictions,
        };
        Self { records, summary }
    }

    pub fn all_as_expected(&self) -> bool {
        self.summary.contradictions == 0
    }
}

fn check_bound(name: &str, value: i64, min: i64) -> Result<()> {
    if value < min {
        return Err(Error::Precondition(format!(
            "{name} must be at least {min}, got {value}"
        )));
    }
    Ok(())
}

/// Positive torus knots `T(p,q)` with `2 <= q < p <= max`, ordered by `(p, q)`.
pub fn torus_knots_up_to(max: i64) -> Vec<TorusKnot> {
    let mut out = Vec::new();
    for p in 3..=max {
        for q in 2..p {
            if p.gcd(&q) == 1 {
                out.push(TorusKnot::new(p, q).expect("coprime pair"));
            }
        }
    }
    out
}

/// Leading-form agreement and L-space admissibility of `Δ_{T(p,q)}`.
#[derive(Debug, Clone, Serialize)]
pub struct TorusPolyRecord {
    pub knot: TorusKnot,
    pub genus: i64,
    /// Exponents `> g - p` where the leading form and `Δ` differ.
    pub leading_mismatches: Vec<i64>,
    pub admissibility: AdmissibilityReport,
    pub span_ok: bool,
}

impl SweepRecord for TorusPolyRecord {
    fn verdict(&self) -> String {
        self.admissibility.verdict.as_str().to_string()
    }

    fn as_expected(&self) -> bool {
        self.leading_mismatches.is_empty() && self.admissibility.is_admissible() && self.span_ok
    }
}

pub fn torus_poly_sweep(max: i64) -> Result<SweepReport<TorusPolyRecord>> {
    check_bound("max", max, 3)?;
    let records = torus_knots_up_to(max)
        .par_iter()
        .map(|k| {
            let delta = k.alexander();
            let lead = k.leading_form();
            let g = k.genus();
            let cutoff = g - k.p();
            let leading_mismatches = (cutoff + 1..=g)
                .filter(|&e| delta.coefficient(e) != lead.coefficient(e))
                .collect();
            let span_ok = delta.span() == Ok((-g, g)) && delta.eval_at_one() == 1.into();
            TorusPolyRecord {
                knot: *k,
                genus: g,
                leading_mismatches,
                admissibility: lspace_admissible(&delta).expect("torus polynomial is symmetrized"),
                span_ok,
            }
        })
        .collect();
    Ok(SweepReport::new(records))
}

/// `w mod b` prediction against a direct scan of the satellite polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaRecord {
    pub a: i64,
    pub b: i64,
    pub w: i64,
    pub companion: TorusKnot,
    pub predicted: std::result::Result<WModBOutcome, String>,
    pub scanned: AdmissibilityReport,
    pub agree: bool,
}

impl SweepRecord for LemmaRecord {
    fn verdict(&self) -> String {
        match &self.predicted {
            Ok(o) => o.class().to_string(),
            Err(_) => "error".to_string(),
        }
    }

    fn as_expected(&self) -> bool {
        self.agree
    }
}

/// Whether the predicted violation is exactly the first violation a
/// top-down admissibility scan finds.
fn lemma_agrees(b: i64, w: i64, predicted: &WModBOutcome, scanned: &AdmissibilityReport) -> bool {
    let class_ok = match predicted {
        WModBOutcome::NoViolation => w % b == 0,
        WModBOutcome::MagnitudeViolation { .. } => w % b == 1,
        WModBOutcome::SameSignViolation { .. } => w % b >= 2,
    };
    class_ok
        && match predicted {
            WModBOutcome::NoViolation => scanned.is_admissible(),
            WModBOutcome::MagnitudeViolation { exponent, .. } => {
                scanned.verdict == Verdict::FailsMagnitude
                    && scanned.witness_exponent == Some(*exponent)
            }
            WModBOutcome::SameSignViolation { upper, lower } => {
                scanned.verdict == Verdict::FailsAlternation
                    && scanned.witness_exponent == Some(*lower)
                    && scanned.witness_coefficients.first().map(|(e, _)| *e) == Some(*upper)
            }
        }
}

pub fn lemma_sweep(a_max: i64, companion_max: i64) -> Result<SweepReport<LemmaRecord>> {
    check_bound("a-max", a_max, 3)?;
    check_bound("companion-max", companion_max, 3)?;
    let companions: Vec<(TorusKnot, LaurentPoly, i64)> = torus_knots_up_to(companion_max)
        .into_iter()
        .map(|k| {
            let poly = k.alexander();
            validate_companion(&poly).map(|h| (k, poly, h))
        })
        .collect::<Result<_>>()?;
    let patterns: Vec<(TorusKnot, LaurentPoly)> = torus_knots_up_to(a_max)
        .into_iter()
        .map(|k| (k, k.alexander()))
        .collect();
    let mut tuples = Vec::new();
    for (pi, (pattern, _)) in patterns.iter().enumerate() {
        for w in 1..pattern.a() {
            for ci in 0..companions.len() {
                tuples.push((pi, w, ci));
            }
        }
    }
    let records = tuples
        .par_iter()
        .map(|&(pi, w, ci)| {
            let (pattern, ppoly) = &patterns[pi];
            let (companion, cpoly, h) = &companions[ci];
            let (a, b) = (pattern.a(), pattern.b());
            let product = SatelliteSpec::new(ppoly.clone(), cpoly.clone(), w)
                .expect("torus polynomials are symmetrized")
                .alexander();
            let scanned = lspace_admissible(&product).expect("satellite polynomial is symmetrized");
            let predicted = locate_w_mod_b_violation(pattern, w, *h, cpoly, &product)
                .map_err(|e| e.to_string());
            let agree = predicted
                .as_ref()
                .is_ok_and(|p| lemma_agrees(b, w, p, &scanned));
            LemmaRecord {
                a,
                b,
                w,
                companion: *companion,
                predicted,
                scanned,
                agree,
            }
        })
        .collect();
    Ok(SweepReport::new(records))
}

/// One `obstruct` record: `{a, b, w, companion, verdict, witness}`.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructRecord {
    pub a: i64,
    pub b: i64,
    pub w: i64,
    pub companion: String,
    pub verdict: String,
    pub witness: Option<ObstructionOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ObstructRecord {
    pub fn evaluate(
        a: i64,
        b: i64,
        w: i64,
        companion_label: String,
        companion: &LaurentPoly,
    ) -> Result<Self> {
        let outcome = torus_satellite_obstruction(a, b, w, companion)?;
        Ok(Self {
            a,
            b,
            w,
            companion: companion_label,
            verdict: outcome.verdict().to_string(),
            witness: Some(outcome),
            error: None,
        })
    }
}

impl SweepRecord for ObstructRecord {
    fn verdict(&self) -> String {
        self.verdict.clone()
    }

    fn as_expected(&self) -> bool {
        self.error.is_none() && self.verdict != "not_obstructed"
    }
}

/// All `(a, b, w)` with `a > b >= 2` coprime, `a <= a_max`, `w^2 | ab`,
/// against every torus companion up to `companion_max`.
pub fn obstruct_sweep(a_max: i64, companion_max: i64) -> Result<SweepReport<ObstructRecord>> {
    check_bound("a-max", a_max, 3)?;
    check_bound("companion-max", companion_max, 3)?;
    let companions: Vec<(TorusKnot, LaurentPoly)> = torus_knots_up_to(companion_max)
        .into_iter()
        .map(|k| (k, k.alexander()))
        .collect();
    let mut tuples = Vec::new();
    for pattern in torus_knots_up_to(a_max) {
        let ab = pattern.ab();
        for w in (1..).take_while(|w| w * w <= ab) {
            if ab % (w * w) == 0 {
                for ci in 0..companions.len() {
                    tuples.push((pattern, w, ci));
                }
            }
        }
    }
    let records = tuples
        .par_iter()
        .map(|&(pattern, w, ci)| {
            let (companion, cpoly) = &companions[ci];
            let (a, b) = (pattern.a(), pattern.b());
            ObstructRecord::evaluate(a, b, w, companion.to_string(), cpoly).unwrap_or_else(|e| {
                ObstructRecord {
                    a,
                    b,
                    w,
                    companion: companion.to_string(),
                    verdict: "error".into(),
                    witness: None,
                    error: Some(e.to_string()),
                }
            })
        })
        .collect();
    Ok(SweepReport::new(records))
}

/// Thinness and detection of `Ã_{T(a,b)}`.
#[derive(Debug, Clone, Serialize)]
pub struct ThinnessRecord {
    pub knot: TorusKnot,
    pub apoly: String,
    pub thin_slope: Option<String>,
    pub expected_slope: i64,
    pub detectable: bool,
    pub detect_unique: bool,
    pub detect_contains_knot: bool,
}

impl SweepRecord for ThinnessRecord {
    fn verdict(&self) -> String {
        match &self.thin_slope {
            Some(_) => "thin".into(),
            None => "not_thin".into(),
        }
    }

    fn as_expected(&self) -> bool {
        self.thin_slope.as_deref() == Some(self.expected_slope.to_string().as_str())
            && self.detectable == self.detect_unique
            && self.detect_contains_knot
    }
}

/// Every torus knot with `|a| <= max`, positive and mirrored.
pub fn thinness_sweep(max: i64) -> Result<SweepReport<ThinnessRecord>> {
    check_bound("max", max, 3)?;
    let knots: Vec<TorusKnot> = torus_knots_up_to(max)
        .into_iter()
        .flat_map(|k| [k, k.mirror()])
        .collect();
    let records = knots
        .par_iter()
        .map(|k| {
            let f = k.enhanced_apoly();
            let thin_slope = match thinness(&f).expect("nonzero polynomial") {
                Thinness::Thin(r) => Some(r.to_string()),
                _ => None,
            };
            let detection = detect_torus_from_apoly(&f);
            ThinnessRecord {
                knot: *k,
                apoly: f.to_string(),
                thin_slope,
                expected_slope: k.ab(),
                detectable: detectability(k),
                detect_unique: detection.unique,
                detect_contains_knot: detection.candidates.contains(k),
            }
        })
        .collect();
    Ok(SweepReport::new(records))
}

impl SweepRecord for GlueRecord {
    fn verdict(&self) -> String {
        format!("case{}_{}", self.case, if self.ok { "ok" } else { "fail" })
    }

    fn as_expected(&self) -> bool {
        self.ok
    }
}

/// Samples `count` instances of one case and verifies each extension.
pub fn glue_case(case: u8, count: usize, seed: u64, tol: f64) -> Result<Vec<GlueRecord>> {
    glue_case_perturbed(case, count, seed, tol, None)
}

/// Like [`glue_case`], optionally adding `delta` to the upper-right entry of
/// `ρ_V(λ_P)` before verification.
pub fn glue_case_perturbed(
    case: u8,
    count: usize,
    seed: u64,
    tol: f64,
    delta: Option<f64>,
) -> Result<Vec<GlueRecord>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Precondition(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut sampler = InstanceSampler::new(case, seed)?;
    let instances: Vec<_> = (0..count).map(|_| sampler.sample()).collect();
    instances
        .par_iter()
        .map(|g| {
            let mut e = construct_extension(g)?;
            if let Some(delta) = delta {
                e = e.perturbed(5, delta.into());
            }
            let v = verify_extension(g, &e, tol);
            Ok(GlueRecord::new(g, &e, &v))
        })
        .collect()
}

pub fn glue_sweep(per_case: usize, seed: u64, tol: f64) -> Result<SweepReport<GlueRecord>> {
    let mut records = Vec::with_capacity(3 * per_case);
    for case in 1..=3 {
        records.extend(glue_case(case, per_case, seed, tol)?);
    }
    Ok(SweepReport::new(records))
}
