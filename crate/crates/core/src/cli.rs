//! The `bruhat` command line: argument parsing, the pipelines behind each
//! subcommand and the mapping from outcomes to exit codes.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::admissibility::{check_admissible, Bounds, CheckReport, EmbeddingSpec, Overall, Verdict};
use crate::bt_tree::{tree_of_ends, ProjPoint};
use crate::error::{Error, Result};
use crate::gallery;
use crate::padic::FieldSpec;
use crate::pgl2::{ElementClass, Order, Pgl2, ORDER_BOUND};
use crate::realization::{
    branch_report, build_orbit_tree, discreteness_audit, disjointness_audit, quotient_graph, stabilizer_audit,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "bruhat", version, about = "Trees of groups in the Bruhat-Tits tree of PGL(2, K)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field construction.
    #[command(subcommand)]
    Field(FieldCommand),
    /// Classify a matrix and report its fixed points and mirror.
    Classify {
        /// `p,f,e[,precision]`
        #[arg(long)]
        field: String,
        /// `a,b;c,d` with p-adic literals.
        #[arg(long)]
        matrix: String,
    },
    /// Subtrees of the tree of K.
    #[command(subcommand)]
    Tree(TreeCommand),
    /// Bounded admissibility check of an embedding spec (JSON report).
    Check {
        #[command(flatten)]
        input: SpecInput,
    },
    /// Orbit tree (DOT) and branch report (JSON) of an embedding spec.
    Realize {
        #[command(flatten)]
        input: SpecInput,
        /// Write the DOT here instead of before the JSON on stdout.
        #[arg(long)]
        dot_out: Option<PathBuf>,
    },
    /// Build, check and realize one of the ready-made embeddings.
    #[command(subcommand)]
    Gallery(GalleryCommand),
}

#[derive(Subcommand, Debug)]
enum FieldCommand {
    /// Describe the tower with residue degree f and ramification e over Q_p.
    Make {
        /// Residue characteristic.
        #[arg(long)]
        p: u64,
        /// Residue degree.
        #[arg(long, default_value_t = 1)]
        f: u32,
        /// Ramification index.
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Stored digits in the uniformizer.
        #[arg(long, default_value_t = 32)]
        precision: u32,
    },
}

#[derive(Subcommand, Debug)]
enum TreeCommand {
    /// DOT of the subtree spanned by a set of ends.
    OfEnds {
        /// `p,f,e[,precision]`
        #[arg(long)]
        field: String,
        /// Ends as literals or `inf`, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<String>,
        /// Radius of the ball around the core center.
        #[arg(long, default_value_t = 4)]
        radius: u64,
    },
}

#[derive(Args, Debug)]
struct SpecInput {
    /// Embedding spec JSON file.
    #[arg(long)]
    spec: PathBuf,
    #[command(flatten)]
    bounds: BoundsArgs,
}

#[derive(Args, Debug, Clone, Copy)]
struct BoundsArgs {
    /// Word length bound L (default 6).
    #[arg(long)]
    length: Option<usize>,
    /// Ball radius R (default: core diameter + 2 max fixed radius + 4).
    #[arg(long)]
    radius: Option<u64>,
}

#[derive(Args, Debug)]
struct PipelineOutput {
    #[command(flatten)]
    bounds: BoundsArgs,
    /// Also write the orbit tree DOT here.
    #[arg(long)]
    dot_out: Option<PathBuf>,
    /// Also write the embedding spec JSON here.
    #[arg(long)]
    spec_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GalleryCommand {
    /// `Z_n * Z_m` with mirrors at distance 2r.
    FreeProduct {
        /// Residue characteristic, prime to n and m.
        #[arg(long)]
        p: u64,
        /// Order of the first cyclic factor.
        #[arg(long)]
        n: u64,
        /// Order of the second cyclic factor.
        #[arg(long)]
        m: u64,
        /// Half the distance between the two mirrors.
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[command(flatten)]
        out: PipelineOutput,
    },
    /// The dyadic triangle group `D_n *_{Z_2} Z_{2m}`.
    Triangle {
        /// Odd order of the rotation, at least 3.
        #[arg(long)]
        n: u64,
        /// Odd m; the lower vertex carries Z_{2m}.
        #[arg(long)]
        m: u64,
        /// Ramification index of the dyadic field.
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[command(flatten)]
        out: PipelineOutput,
    },
}

/// What a command produced: text for stdout and the exit code.
struct Outcome {
    stdout: String,
    code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_OK }
    }
}

/// Parses `argv` (program name first) and runs the command, writing reports
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(o) => {
            if out.write_all(o.stdout.as_bytes()).is_err() {
                return EXIT_USAGE;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted(_) | Error::DivisionByZero => EXIT_PRECISION,
        Error::NotAdmissible(_) => EXIT_REFUTED,
        Error::Explosion(_) => EXIT_INCONCLUSIVE,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Field(FieldCommand::Make { p, f, e, precision }) => {
            let k = FieldSpec::new(p, f, e, precision)?;
            Ok(Outcome::ok(to_json(&field_json(&k))?))
        }
        Command::Classify { field, matrix } => {
            let k = parse_field(&field)?;
            let g = Pgl2::parse(&k, &matrix)?;
            Ok(Outcome::ok(to_json(&classify_json(&g)?)?))
        }
        Command::Tree(TreeCommand::OfEnds { field, points, radius }) => {
            let k = parse_field(&field)?;
            let ends = points.iter().map(|s| ProjPoint::parse(&k, s.trim())).collect::<Result<Vec<_>>>()?;
            Ok(Outcome::ok(tree_of_ends(&ends, radius)?.to_dot("tree_of_ends", &Default::default())))
        }
        Command::Check { input } => {
            let spec = read_spec(&input.spec)?;
            let report = check_admissible(&spec, resolve(&spec, input.bounds)?)?;
            let code = overall_code(report.overall);
            Ok(Outcome { stdout: to_json(&report)?, code })
        }
        Command::Realize { input, dot_out } => {
            let spec = read_spec(&input.spec)?;
            let bounds = resolve(&spec, input.bounds)?;
            let check = check_admissible(&spec, bounds)?;
            if check.overall == Overall::Refuted {
                return Ok(Outcome { stdout: to_json(&check)?, code: EXIT_REFUTED });
            }
            let ot = build_orbit_tree(&spec, bounds)?;
            let branch = branch_report(&ot)?;
            let dot = ot.to_dot("orbit_tree");
            let mut stdout = String::new();
            match dot_out {
                Some(path) => write_file(&path, &dot)?,
                None => stdout.push_str(&dot),
            }
            stdout.push_str(&to_json(&branch)?);
            Ok(Outcome { stdout, code: overall_code(check.overall) })
        }
        Command::Gallery(g) => {
            let (spec, out) = match g {
                GalleryCommand::FreeProduct { p, n, m, r, out } => (gallery::free_product(p, n, m, r)?, out),
                GalleryCommand::Triangle { n, m, e, out } => (gallery::triangle_dyadic(n, m, e)?, out),
            };
            pipeline(&spec, &out)
        }
    }
}

fn overall_code(o: Overall) -> i32 {
    match o {
        Overall::Verified => EXIT_OK,
        Overall::Inconclusive => EXIT_INCONCLUSIVE,
        Overall::Refuted => EXIT_REFUTED,
    }
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Verified { .. } => EXIT_OK,
        Verdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
        Verdict::Refuted { .. } => EXIT_REFUTED,
    }
}

/// Build, check and realize; everything lands in one JSON document.
fn pipeline(spec: &EmbeddingSpec, out: &PipelineOutput) -> Result<Outcome> {
    let bounds = resolve(spec, out.bounds)?;
    if let Some(path) = &out.spec_out {
        write_file(path, &to_json(&spec.to_json()?)?)?;
    }
    let (doc, dot, code) = pipeline_report(spec, bounds)?;
    if let (Some(path), Some(dot)) = (&out.dot_out, dot) {
        write_file(path, &dot)?;
    }
    Ok(Outcome { stdout: to_json(&doc)?, code })
}

/// Runs the admissibility check and, unless it is refuted, the orbit tree
/// audits, quotient and branch report. Returns the combined JSON document,
/// the orbit tree DOT when one was built, and the exit code.
pub fn pipeline_report(spec: &EmbeddingSpec, bounds: Bounds) -> Result<(Value, Option<String>, i32)> {
    let check: CheckReport = check_admissible(spec, bounds)?;
    let mut doc = json!({
        "field": field_json(spec.field()),
        "bounds": bounds,
        "precision": spec.field().precision(),
        "check": check,
    });
    if check.overall == Overall::Refuted {
        return Ok((doc, None, EXIT_REFUTED));
    }
    let ot = build_orbit_tree(spec, bounds)?;
    let disjoint = disjointness_audit(&ot);
    let stabilizers = stabilizer_audit(&ot)?;
    let discrete = discreteness_audit(&ot)?;
    let quotient = quotient_graph(&ot)?;
    let branch = branch_report(&ot)?;
    let code = [overall_code(check.overall), verdict_code(&disjoint), verdict_code(&stabilizers), verdict_code(&discrete.verdict)]
        .into_iter()
        .max_by_key(|c| match *c {
            EXIT_REFUTED => 2,
            EXIT_INCONCLUSIVE => 1,
            _ => 0,
        })
        .unwrap_or(EXIT_OK);
    doc["orbit_tree"] = json!({
        "vertices": ot.tree.vertices.len(),
        "edges": ot.tree.edges.len(),
        "translates": ot.translates.len(),
        "glued": ot.glue.len(),
    });
    doc["disjointness"] = serde_json::to_value(&disjoint).map_err(json_error)?;
    doc["stabilizers"] = serde_json::to_value(&stabilizers).map_err(json_error)?;
    doc["discreteness"] = serde_json::to_value(&discrete).map_err(json_error)?;
    doc["quotient"] = serde_json::to_value(&quotient).map_err(json_error)?;
    doc["branch"] = serde_json::to_value(&branch).map_err(json_error)?;
    Ok((doc, Some(ot.to_dot("orbit_tree")), code))
}

fn resolve(spec: &EmbeddingSpec, args: BoundsArgs) -> Result<Bounds> {
    let defaults = spec.default_bounds()?;
    Ok(Bounds { length: args.length.unwrap_or(defaults.length), radius: args.radius.unwrap_or(defaults.radius) })
}

fn parse_field(s: &str) -> Result<FieldSpec> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(Error::Parse(format!("field must be p,f,e[,precision], got {s:?}")));
    }
    let num = |x: &str| x.parse::<u64>().map_err(|_| Error::Parse(format!("not a number: {x:?}")));
    let precision = if parts.len() == 4 { num(parts[3])? } else { 32 };
    let small = |x: u64| u32::try_from(x).map_err(|_| Error::Parse(format!("{x} is too large")));
    FieldSpec::new(num(parts[0])?, small(num(parts[1])?)?, small(num(parts[2])?)?, small(precision)?)
}

fn read_spec(path: &PathBuf) -> Result<EmbeddingSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    EmbeddingSpec::from_json(&text)
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::InvalidInput(format!("json: {e}"))
}

/// Pretty JSON with keys sorted at every level, newline terminated.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json's default map is ordered by key
    let v: Value = serde_json::to_value(value).map_err(json_error)?;
    let mut s = serde_json::to_string_pretty(&v).map_err(json_error)?;
    s.push('\n');
    Ok(s)
}

fn field_json(k: &FieldSpec) -> Value {
    json!({
        "p": k.p(),
        "f": k.f(),
        "e": k.e(),
        "q": k.q(),
        "degree": k.degree(),
        "precision": k.precision(),
        "description": k.describe(),
    })
}

/// Class, fixed points, order and mirror of an element as JSON.
pub fn classify_json(g: &Pgl2) -> Result<Value> {
    let class = g.classify()?;
    let mut v = json!({
        "matrix": g.to_literal(),
        "class": class.name(),
        "detail": class,
        "precision": g.field().precision(),
    });
    match class {
        ElementClass::Elliptic { .. } => {
            match g.fixed_points() {
                Ok(fp) => {
                    let lits = fp.iter().map(ProjPoint::to_literal).collect::<Result<Vec<_>>>()?;
                    v["fixed_points"] = json!(lits);
                    v["mirror"] = json!({ "ends": lits });
                }
                Err(Error::NotRational(why)) => v["fixed_points_not_rational"] = json!(why),
                Err(e) => return Err(e),
            }
            let order = g.order(ORDER_BOUND)?;
            v["order"] = json!(order);
            if let Order::Finite(_) = order {
                v["fixed_radius"] = json!(g.fixed_radius()?);
            }
        }
        ElementClass::Hyperbolic { .. } => {
            let axis = g.hyperbolic_axis()?;
            v["fixed_points"] = json!([axis.attracting.to_literal()?, axis.repelling.to_literal()?]);
            v["translation_length"] = json!(axis.translation);
        }
        ElementClass::Parabolic => {
            v["fixed_points"] =
                json!(g.fixed_points()?.iter().map(ProjPoint::to_literal).collect::<Result<Vec<_>>>()?);
        }
        ElementClass::Identity => {}
    }
    Ok(v)
}
