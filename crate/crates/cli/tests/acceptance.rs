//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.
//!
//! Every criterion is checked against an oracle written here from first
//! principles (numerical semigroups, brute-force divisor scans, direct
//! coefficient arithmetic), not against the library's own helpers.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde_json::Value;

use knotpoly_core::apolygon::{detect_torus_from_apoly, detectability, thinness};
use knotpoly_core::repglue::{construct_extension, verify_extension, InstanceSampler};
use knotpoly_core::satellite::lspace_admissible;
use knotpoly_core::sweep::{
    glue_sweep, lemma_sweep, obstruct_sweep, thinness_sweep, torus_knots_up_to,
};
use knotpoly_core::{BiPoly, LaurentPoly, Thinness, TorusKnot};

const GLUE_TOL: f64 = 1e-9;
const PERTURBATION: f64 = 1e-3;
const CASE1_Z_TOL: f64 = 1e-9;
const GLUE_SEED: u64 = 7;
const GLUE_PER_CASE: usize = 200;

type Criterion = (&'static str, fn() -> Outcome);
type DetectCase<'a> = (&'a [&'a str], bool, Vec<(i64, i64)>);

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn coprime_pairs(max: i64) -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for p in 3..=max {
        for q in 2..p {
            if gcd(p, q) == 1 {
                v.push((p, q));
            }
        }
    }
    v
}

/// `Δ_{T(p,q)}` as `exponent -> coefficient`, from the semigroup identity
/// `Δ(t) = (1 - t) Σ_{s ∈ <p,q>} t^s`, shifted to be symmetric.
fn semigroup_alexander(p: i64, q: i64) -> BTreeMap<i64, i64> {
    let two_g = (p - 1) * (q - 1);
    let in_semigroup = |s: i64| s >= 0 && (0..=s / p).any(|i| (s - i * p) % q == 0);
    let mut out = BTreeMap::new();
    for k in 0..=two_g {
        let c = i64::from(in_semigroup(k)) - i64::from(k >= 1 && in_semigroup(k - 1));
        if c != 0 {
            out.insert(k - two_g / 2, c);
        }
    }
    out
}

fn as_map(f: &LaurentPoly) -> BTreeMap<i64, i64> {
    f.terms()
        .map(|(e, c)| (e, i64::try_from(c).unwrap()))
        .collect()
}

/// Coefficients in {-1,0,1}, nonzero ones alternating, top two nonzero.
fn oracle_admissible(f: &BTreeMap<i64, i64>) -> bool {
    let g = *f.keys().next_back().unwrap();
    let signs: Vec<i64> = f.values().rev().copied().collect();
    f.values().all(|c| c.abs() == 1)
        && signs.windows(2).all(|w| w[0] == -w[1])
        && (g == 0 || f.contains_key(&(g - 1)))
}

fn knotpoly(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_knotpoly"))
        .args(args)
        .env_remove("KNOTPOLY_FORMAT")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout)
            .unwrap()
            .trim_end()
            .to_string(),
    )
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn within(limit_s: f64, elapsed: Duration, o: Outcome) -> Outcome {
    let secs = elapsed.as_secs_f64();
    let detail = format!("{} [{secs:.2}s, limit {limit_s}s]", o.detail);
    if o.ok && secs < limit_s {
        pass(detail)
    } else if o.ok {
        fail(format!("too slow: {detail}"))
    } else {
        fail(detail)
    }
}

fn c1_alexander_goldens() -> Outcome {
    let cases = [
        ("T(3,2)", (3, 2), "t - 1 + t^-1"),
        ("T(5,2)", (5, 2), "t^2 - t + 1 - t^-1 + t^-2"),
        ("T(4,3)", (4, 3), "t^3 - t^2 + 1 - t^-2 + t^-3"),
    ];
    let (o, t) = timed(|| {
        for (arg, (p, q), golden) in cases {
            let (code, out) = knotpoly(&["alexander", arg]);
            if code != 0 || out != golden {
                return fail(format!("{arg}: got `{out}` (exit {code})"));
            }
            let parsed: LaurentPoly = out.parse().unwrap();
            if as_map(&parsed) != semigroup_alexander(p, q) {
                return fail(format!("{arg}: golden disagrees with semigroup oracle"));
            }
        }
        pass("3 goldens exact")
    });
    within(1.0, t, o)
}

fn c2_leading_form() -> Outcome {
    let (o, t) = timed(|| {
        let pairs = coprime_pairs(40);
        for &(p, q) in &pairs {
            let k = TorusKnot::new(p, q).unwrap();
            let g = (p - 1) * (q - 1) / 2;
            let delta = as_map(&k.alexander());
            let oracle = semigroup_alexander(p, q);
            if delta != oracle {
                return fail(format!("T({p},{q}): alexander differs from oracle"));
            }
            let lead = as_map(&k.leading_form());
            for e in (g - p + 1)..=g {
                let (x, y) = (
                    lead.get(&e).copied().unwrap_or(0),
                    oracle.get(&e).copied().unwrap_or(0),
                );
                if x != y {
                    return fail(format!("T({p},{q}) at t^{e}: leading {x}, full {y}"));
                }
            }
        }
        pass(format!(
            "{} pairs, exact agreement above g - p",
            pairs.len()
        ))
    });
    within(10.0, t, o)
}

fn c3_torus_admissible() -> Outcome {
    let (o, t) = timed(|| {
        let pairs = coprime_pairs(40);
        for &(p, q) in &pairs {
            let delta = TorusKnot::new(p, q).unwrap().alexander();
            let report = lspace_admissible(&delta).unwrap();
            if !report.is_admissible() || !oracle_admissible(&as_map(&delta)) {
                return fail(format!("T({p},{q}): {:?}", report.verdict));
            }
        }
        pass(format!("{} pairs admissible", pairs.len()))
    });
    within(10.0, t, o)
}

/// Sparse product `pattern(t) * companion(t^w)` with machine integers.
fn oracle_product(
    pattern: &BTreeMap<i64, i64>,
    companion: &BTreeMap<i64, i64>,
    w: i64,
) -> BTreeMap<i64, i64> {
    let mut out: BTreeMap<i64, i64> = BTreeMap::new();
    for (e1, c1) in pattern {
        for (e2, c2) in companion {
            *out.entry(e1 + w * e2).or_insert(0) += c1 * c2;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn c4_lemma_sweep() -> Outcome {
    let (report, t) = timed(|| lemma_sweep(20, 10).unwrap());
    let mut mismatches = 0usize;
    let mut expected_total = 0usize;
    let companions = coprime_pairs(10);
    for (a, _) in coprime_pairs(20) {
        expected_total += (a as usize - 1) * companions.len();
    }
    let mut classes: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &report.records {
        let (a, b, w) = (r.a, r.b, r.w);
        let (cp, cq) = (r.companion.a(), r.companion.b());
        let g = (a - 1) * (b - 1) / 2;
        let h = (cp - 1) * (cq - 1) / 2;
        let prod = oracle_product(&semigroup_alexander(a, b), &semigroup_alexander(cp, cq), w);
        let coeff = |e: i64| prod.get(&e).copied().unwrap_or(0);
        let pivot = g + h * w - w;
        let oracle_ok = match w % b {
            0 => {
                *classes.entry("no_violation").or_default() += 1;
                coeff(pivot) == 0 && oracle_admissible(&prod)
            }
            1 => {
                *classes.entry("magnitude").or_default() += 1;
                coeff(pivot) == -2 && ((pivot + 1)..=(g + h * w)).all(|e| coeff(e).abs() <= 1)
            }
            _ => {
                *classes.entry("same_sign").or_default() += 1;
                let upper = g + h * w - (w / b) * b - 1;
                coeff(upper) * coeff(pivot) > 0 && ((pivot + 1)..upper).all(|e| coeff(e) == 0)
            }
        };
        if !(oracle_ok && r.agree) {
            mismatches += 1;
        }
    }
    let o = if mismatches == 0 && report.records.len() == expected_total {
        pass(format!(
            "{} tuples {classes:?}, 0 mismatches",
            report.records.len()
        ))
    } else {
        fail(format!(
            "{mismatches} mismatches, {} of {expected_total} tuples",
            report.records.len()
        ))
    };
    within(60.0, t, o)
}

fn c5_obstruct_sweep() -> Outcome {
    let (report, t) = timed(|| obstruct_sweep(20, 10).unwrap());
    let companions = coprime_pairs(10).len();
    let mut expected = 0usize;
    for (a, b) in coprime_pairs(20) {
        expected += (1..=a).filter(|w| (a * b) % (w * w) == 0).count() * companions;
    }
    let not_obstructed = report
        .records
        .iter()
        .filter(|r| r.verdict == "not_obstructed")
        .count();
    let bad = report
        .records
        .iter()
        .filter(|r| r.verdict != "obstructed" && r.verdict != "config_impossible")
        .count();
    let o = if bad == 0 && report.records.len() == expected {
        pass(format!(
            "{} tuples {:?}, not_obstructed = {not_obstructed}",
            report.records.len(),
            report.summary.counts
        ))
    } else {
        fail(format!(
            "{bad} bad verdicts, {} of {expected} tuples",
            report.records.len()
        ))
    };
    within(60.0, t, o)
}

fn candidates_of(json: &Value) -> Vec<(i64, i64)> {
    json["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["a"].as_i64().unwrap(), c["b"].as_i64().unwrap()))
        .collect()
}

fn c6_detection_goldens() -> Outcome {
    let (o, t) = timed(|| {
        let run = |args: &[&str]| -> Value {
            let mut full = vec!["--format", "json", "detect"];
            full.extend_from_slice(args);
            let (code, out) = knotpoly(&full);
            assert_eq!(code, 0, "detect {args:?} exited {code}");
            serde_json::from_str(&out).unwrap()
        };
        let checks: [DetectCase; 5] = [
            (&["-1 + M^210*L^2"], false, vec![(35, 3), (21, 5), (15, 7)]),
            (&["-1 + M^150*L^2"], false, vec![(25, 3)]),
            (&["1 + M^6*L"], false, vec![(3, 2)]),
            (&["1"], true, vec![]),
            (&["--degree", "68", "-1 + M^210*L^2"], false, vec![(35, 3)]),
        ];
        for (args, unknot, want) in checks {
            let v = run(args);
            let mut got = candidates_of(&v);
            got.sort();
            let mut want = want.clone();
            want.sort();
            if v["unknot"].as_bool() != Some(unknot)
                || got != want
                || v["unique"].as_bool() != Some(unknot || want.len() == 1)
            {
                return fail(format!("detect {args:?}: {v}"));
            }
        }
        pass("5 goldens exact")
    });
    within(1.0, t, o)
}

fn c7_thinness() -> Outcome {
    let (report, t) = timed(|| thinness_sweep(40).unwrap());
    let mut bad = Vec::new();
    let mut negatives = 0;
    for r in &report.records {
        let ab = r.knot.a() * r.knot.b();
        negatives += usize::from(ab < 0);
        let f: BiPoly = r.apoly.parse().unwrap();
        let pts: Vec<(i64, i64)> = f.support();
        // slope Δb/Δa between the two lattice points (a = L-exponent, b = M-exponent)
        let collinear = pts.len() == 2
            && pts[1].0 != pts[0].0
            && (pts[1].1 - pts[0].1) == ab * (pts[1].0 - pts[0].0);
        let lib = thinness(&f).unwrap() == Thinness::Thin(ab.into());
        if !(collinear && lib && r.thin_slope.as_deref() == Some(ab.to_string().as_str())) {
            bad.push(r.knot);
        }
    }
    let o = if bad.is_empty() && report.records.len() == 2 * coprime_pairs(40).len() {
        pass(format!(
            "{} knots ({negatives} mirrored) thin(ab)",
            report.records.len()
        ))
    } else {
        fail(format!("failures: {bad:?}"))
    };
    within(5.0, t, o)
}

fn c8_detectability() -> Outcome {
    let prime_power = |n: i64| {
        (2..=n).find(|d| n % d == 0).is_some_and(|p| {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            m == 1
        })
    };
    let mut disagreements = Vec::new();
    let mut unique = 0;
    let knots: Vec<TorusKnot> = torus_knots_up_to(40)
        .into_iter()
        .flat_map(|k| [k, k.mirror()])
        .collect();
    for k in &knots {
        let (p, q) = (k.a().abs(), k.b());
        let n = p * q;
        // coprime splits of |ab| with both factors at least 3
        let splits = (3..n)
            .filter(|&x| x * x < n && n % x == 0 && n / x >= 3 && gcd(x, n / x) == 1)
            .count();
        let oracle = q == 2 || splits == 1;
        let oracle_formula = q == 2 || (prime_power(p) && prime_power(q));
        let lib_unique = detect_torus_from_apoly(&k.enhanced_apoly()).unique;
        let lib_formula = detectability(k);
        unique += usize::from(lib_unique);
        if !(oracle == oracle_formula && oracle == lib_unique && lib_unique == lib_formula) {
            disagreements.push(*k);
        }
    }
    if disagreements.is_empty() {
        pass(format!(
            "{} knots, {unique} uniquely detected, all four answers agree",
            knots.len()
        ))
    } else {
        fail(format!("disagreements: {disagreements:?}"))
    }
}

fn c9_glue() -> Outcome {
    let (o, t) = timed(|| {
        let report = glue_sweep(GLUE_PER_CASE, GLUE_SEED, GLUE_TOL).unwrap();
        let worst = report
            .records
            .iter()
            .flat_map(|r| r.residuals)
            .fold(0.0f64, f64::max);
        if !report.all_as_expected()
            || report.records.len() != 3 * GLUE_PER_CASE
            || worst.is_nan()
            || worst >= GLUE_TOL
        {
            return fail(format!(
                "sweep {:?}, worst residual {worst:e}",
                report.summary
            ));
        }
        let (mut injected, mut caught) = (0usize, 0usize);
        for case in 1..=3u8 {
            let mut sampler = InstanceSampler::new(case, GLUE_SEED).unwrap();
            for _ in 0..GLUE_PER_CASE {
                let g = sampler.sample();
                let e = construct_extension(&g).unwrap();
                for entry in 0..8 {
                    for delta in [PERTURBATION, -PERTURBATION] {
                        injected += 1;
                        let v = verify_extension(&g, &e.perturbed(entry, delta.into()), GLUE_TOL);
                        caught += usize::from(!v.is_ok());
                    }
                }
            }
        }
        if caught != injected {
            return fail(format!("caught {caught} of {injected} perturbations"));
        }
        pass(format!(
            "{} instances, worst residual {worst:.1e}; {caught}/{injected} perturbations caught",
            report.records.len()
        ))
    });
    within(5.0, t, o)
}

fn c10_case1_scalar() -> Outcome {
    let mut sampler = InstanceSampler::new(1, GLUE_SEED).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..GLUE_PER_CASE {
        let g = sampler.sample();
        let e = construct_extension(&g).unwrap();
        let data = e.diagonal.expect("case 1 carries polar data");
        let (p, q, w, d) = (g.p(), g.q(), g.w(), g.d());
        if (data.m + p * data.k).rem_euclid(d) != 0 {
            return fail(format!("m + pk not divisible by d for p={p} q={q} w={w}"));
        }
        if (p as f64 * data.theta + q as f64 * data.phi - 2.0 * PI * data.m as f64).abs() > 1e-6 {
            return fail(format!("winding integer m inconsistent for p={p} q={q}"));
        }
        // η^{pw²/d} (β^w)^{q/d} written out in polar form
        let eta_log = Complex64::new(
            data.s.ln() / w as f64,
            (data.theta + 2.0 * PI * data.k as f64) / w as f64,
        );
        let beta_log = Complex64::new(data.t.ln(), data.phi);
        let z_log = eta_log * (p * w * w / d) as f64 + beta_log * (w * (q / d)) as f64;
        let z = z_log.exp();
        worst = worst.max((z - 1.0).norm());
    }
    if worst < CASE1_Z_TOL {
        pass(format!(
            "{GLUE_PER_CASE} instances, max |z - 1| = {worst:.1e}"
        ))
    } else {
        fail(format!("max |z - 1| = {worst:e}"))
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("torus Alexander goldens", c1_alexander_goldens),
        ("leading form sweep", c2_leading_form),
        ("torus admissibility sweep", c3_torus_admissible),
        ("w mod b lemma sweep", c4_lemma_sweep),
        ("satellite obstruction sweep", c5_obstruct_sweep),
        ("detection goldens", c6_detection_goldens),
        ("thinness sweep", c7_thinness),
        ("detectability cross-check", c8_detectability),
        ("glue verification", c9_glue),
        ("case 1 scalar identity", c10_case1_scalar),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failures += usize::from(!o.ok);
        println!(
            "criterion {:>2} {}: {name}: {}",
            i + 1,
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failures > 0 {
        eprintln!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
}
