use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use knotpoly_core::apolygon::{
    detect_torus_from_apoly, detect_with_degree, edge_boundary_slopes, newton_polygon, thinness,
};
use knotpoly_core::repglue::DEFAULT_TOLERANCE;
use knotpoly_core::sweep::{
    glue_case_perturbed, glue_sweep, lemma_sweep, obstruct_sweep, thinness_sweep, torus_poly_sweep,
    ObstructRecord, SweepRecord, SweepReport,
};
use knotpoly_core::{BiPoly, Error, LaurentPoly, Thinness, TorusKnot};

#[derive(Parser)]
#[command(
    name = "knotpoly",
    version,
    about = "Alexander and A-polynomial computations for torus and satellite knots"
)]
struct Cli {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "KNOTPOLY_FORMAT",
        default_value = "text"
    )]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetrized Alexander polynomial of a torus knot, e.g. `T(3,2)`.
    Alexander { knot: String },
    /// Enhanced A-polynomial of a torus knot.
    Apoly { knot: String },
    /// Newton polygon of a polynomial in M and L.
    Newton {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Torus knots whose enhanced A-polynomial equals the given one.
    Detect {
        /// Width 2g of the symmetrized Alexander polynomial, used to break ties.
        #[arg(long)]
        degree: Option<u64>,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Polynomial obstruction for a satellite whose pattern closes to T(a,b).
    Obstruct(ObstructArgs),
    /// Exhaustive or randomized sweeps with a per-verdict summary.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Build and check peripheral extensions for random glue instances.
    GlueVerify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        case: u8,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Add this amount to the upper-right entry of ρ_V(λ_P) before checking.
        #[arg(long, allow_hyphen_values = true)]
        perturb: Option<f64>,
    },
}

#[derive(Args)]
struct ObstructArgs {
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: i64,
    #[arg(long)]
    w: i64,
    /// Torus knot companion, e.g. `T(3,2)`.
    #[arg(
        long,
        conflicts_with = "companion_poly",
        required_unless_present = "companion_poly"
    )]
    companion: Option<String>,
    /// Companion given by its symmetrized Alexander polynomial.
    #[arg(long, allow_hyphen_values = true)]
    companion_poly: Option<String>,
}

#[derive(Subcommand)]
enum SweepKind {
    /// Obstruction verdicts for every (a, b, w) with w^2 | ab.
    Obstruct {
        #[arg(long, default_value_t = 20)]
        a_max: i64,
        #[arg(long, default_value_t = 10)]
        companion_max: i64,
    },
    /// Predicted w mod b violations against a direct coefficient scan.
    Lemma {
        #[arg(long, default_value_t = 20)]
        a_max: i64,
        #[arg(long, default_value_t = 10)]
        companion_max: i64,
    },
    /// Leading form agreement and admissibility of torus polynomials.
    Torus {
        #[arg(long, default_value_t = 40)]
        max: i64,
    },
    /// Thinness and detection of torus A-polynomials, mirrors included.
    Thinness {
        #[arg(long, default_value_t = 40)]
        max: i64,
    },
    /// Randomized glue verification over all three cases.
    Glue {
        #[arg(long, default_value_t = 200)]
        per_case: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
}

/// Exit statuses beyond success: domain errors and sweep contradictions.
enum Failure {
    Domain(Error),
    Contradictions(usize),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let code = match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            if cli.format == Format::Json {
                let record = json!({"error": {"kind": e.kind(), "detail": e.to_string()}});
                let _ = writeln!(out, "{record}");
            } else {
                eprintln!("error [{}]: {e}", e.kind());
            }
            ExitCode::from(1)
        }
        Err(Failure::Contradictions(n)) => {
            eprintln!("{n} record(s) contradict the expected classification");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    };
    if let Err(e) = out.flush() {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    code
}

fn run(cli: &Cli, out: &mut Out) -> Result<(), Failure> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Alexander { knot } => {
            let k: TorusKnot = knot.parse()?;
            let delta = k.alexander();
            if json {
                emit(
                    out,
                    &json!({"knot": k, "alexander": delta.to_string(), "genus": k.genus()}),
                )?;
            } else {
                writeln!(out, "{delta}")?;
            }
        }
        Command::Apoly { knot } => {
            let k: TorusKnot = knot.parse()?;
            let f = k.enhanced_apoly();
            if json {
                emit(out, &json!({"knot": k, "apoly": f.to_string()}))?;
            } else {
                writeln!(out, "{f}")?;
            }
        }
        Command::Newton { poly } => newton(out, poly, json)?,
        Command::Detect { degree, poly } => {
            let f: BiPoly = poly.parse()?;
            let result = match degree {
                Some(n) => detect_with_degree(&f, *n),
                None => detect_torus_from_apoly(&f),
            };
            if json {
                emit(out, &result)?;
            } else if result.is_unknot {
                writeln!(out, "unknot")?;
            } else {
                let names: Vec<String> = result.candidates.iter().map(|k| k.to_string()).collect();
                match names.len() {
                    0 => writeln!(out, "none")?,
                    1 => writeln!(out, "unique: {}", names[0])?,
                    _ => writeln!(out, "ambiguous: {}", names.join(" "))?,
                }
            }
        }
        Command::Obstruct(args) => obstruct(out, args, json)?,
        Command::GlueVerify {
            case,
            count,
            seed,
            tol,
            perturb,
        } => {
            let records = glue_case_perturbed(*case, *count, *seed, *tol, *perturb)?;
            for r in &records {
                if json {
                    emit(out, r)?;
                } else {
                    writeln!(
                        out,
                        "case {} p={} q={} w={} d={} k={} twist={} residuals=[{:.3e}, {:.3e}, {:.3e}] {}",
                        r.case,
                        r.p,
                        r.q,
                        r.w,
                        r.d,
                        r.k.map_or("-".to_string(), |k| k.to_string()),
                        r.central_twist,
                        r.residuals[0],
                        r.residuals[1],
                        r.residuals[2],
                        if r.ok { "ok" } else { "FAIL" },
                    )?;
                }
            }
        }
        Command::Sweep { kind } => match kind {
            SweepKind::Obstruct {
                a_max,
                companion_max,
            } => report(out, obstruct_sweep(*a_max, *companion_max)?, json)?,
            SweepKind::Lemma {
                a_max,
                companion_max,
            } => report(out, lemma_sweep(*a_max, *companion_max)?, json)?,
            SweepKind::Torus { max } => report(out, torus_poly_sweep(*max)?, json)?,
            SweepKind::Thinness { max } => report(out, thinness_sweep(*max)?, json)?,
            SweepKind::Glue {
                per_case,
                seed,
                tol,
            } => report(out, glue_sweep(*per_case, *seed, *tol)?, json)?,
        },
    }
    Ok(())
}

fn emit<T: Serialize>(out: &mut Out, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}

fn newton(out: &mut Out, poly: &str, json: bool) -> Result<(), Failure> {
    let f: BiPoly = poly.parse()?;
    let polygon = newton_polygon(&f)?;
    let thin = match thinness(&f)? {
        Thinness::Point => "point".to_string(),
        Thinness::Thin(r) => format!("thin({r})"),
        Thinness::NotThin { vertical: true } => "not_thin(vertical)".to_string(),
        Thinness::NotThin { vertical: false } => "not_thin".to_string(),
    };
    let slopes = edge_boundary_slopes(&f)?;
    if json {
        emit(
            out,
            &json!({
                "polynomial": f.to_string(),
                "lattice_points": polygon.lattice_points,
                "hull_vertices": polygon.hull_vertices,
                "edge_slopes": polygon.edge_slopes,
                "boundary_slopes": slopes,
                "thinness": thin,
            }),
        )?;
    } else {
        let pts = |v: &[(i64, i64)]| {
            v.iter()
                .map(|(a, b)| format!("({a},{b})"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let slope_list: Vec<String> = slopes.iter().map(|s| s.slope.to_string()).collect();
        writeln!(out, "points: {}", pts(&polygon.lattice_points))?;
        writeln!(out, "hull: {}", pts(&polygon.hull_vertices))?;
        writeln!(out, "slopes: {}", slope_list.join(" "))?;
        writeln!(out, "thinness: {thin}")?;
    }
    Ok(())
}

fn obstruct(out: &mut Out, args: &ObstructArgs, json: bool) -> Result<(), Failure> {
    let (label, companion) = match (&args.companion, &args.companion_poly) {
        (Some(k), _) => {
            let k: TorusKnot = k.parse()?;
            (k.to_string(), k.alexander())
        }
        (None, Some(p)) => {
            let f: LaurentPoly = p.parse()?;
            (f.to_string(), f)
        }
        (None, None) => unreachable!("clap requires one companion form"),
    };
    let record = ObstructRecord::evaluate(args.a, args.b, args.w, label, &companion)?;
    if json {
        emit(out, &record)?;
    } else {
        let detail = record
            .witness
            .as_ref()
            .map(|w| serde_json::to_string(w).expect("outcome serializes"))
            .unwrap_or_default();
        writeln!(
            out,
            "T({},{}) w={} companion {}: {} {detail}",
            record.a, record.b, record.w, record.companion, record.verdict
        )?;
    }
    Ok(())
}

/// Writes one NDJSON line per record plus a summary line in JSON mode, or
/// the summary and any contradicting records in text mode.
fn report<R: SweepRecord + Serialize>(
    out: &mut Out,
    rep: SweepReport<R>,
    json: bool,
) -> Result<(), Failure> {
    if json {
        for r in &rep.records {
            emit(out, r)?;
        }
        emit(out, &json!({"summary": rep.summary}))?;
    } else {
        for r in rep.records.iter().filter(|r| !r.as_expected()) {
            writeln!(
                out,
                "contradiction: {}",
                serde_json::to_string(r).expect("record serializes")
            )?;
        }
        let counts: Vec<String> = rep
            .summary
            .counts
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        writeln!(
            out,
            "total={} {} contradictions={}",
            rep.summary.total,
            counts.join(" "),
            rep.summary.contradictions
        )?;
    }
    match rep.summary.contradictions {
        0 => Ok(()),
        n => Err(Failure::Contradictions(n)),
    }
}
