//! `holtklee` — validate chirotopes, test programs and coline fixations,
//! classify catalogs, and build non-HK* witnesses.
//!
//! Exit codes: 0 success, 1 the computed property fails, 2 bad input,
//! 3 an internal verification failed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use holtklee::classify::{batch_classify, ingest_reader, write_csv, BatchOptions, CatalogReader, Mode};
use holtklee::coshell::{
    coline_shelling, hkstar_certificate, is_generic_coline, is_proper_fixation, shelling_digraph, ColineFixation,
};
use holtklee::geom::catalog::{five_vertex_polytopes, simplex_3};
use holtklee::geom::construct::sensitive_polytope;
use holtklee::geom::lp::{find_sensitive_objective, sensitive_census};
use holtklee::geom::build_non_hkstar;
use holtklee::om::validate_cocircuit_axioms;
use holtklee::omp::{program_graph, program_report, Program};
use holtklee::{Chirotope, Error, OrientedMatroid};

#[derive(Parser)]
#[command(name = "holtklee", version, about = "Holt-Klee properties of oriented matroids")]
struct Cli {
    /// Plain `key: value` lines instead of JSON.
    #[arg(long, global = true)]
    plain: bool,
    /// Add wall-clock time to the output.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a chirotope and check the cocircuit axioms.
    Validate { file: PathBuf },
    /// Properness, Holt-Klee and Euclidean tests of the program (M, g, f).
    Program(ProgramArgs),
    /// Coline shelling, shelling digraph and HK* test of (M, T).
    Shelling(ShellingArgs),
    /// Classify every chirotope of a catalog.
    Classify(ClassifyArgs),
    /// Build a non-HK* oriented matroid or a sensitive LP digraph.
    Construct(ConstructArgs),
}

#[derive(Args)]
struct ProgramArgs {
    file: PathBuf,
    #[arg(long)]
    g: usize,
    #[arg(long)]
    f: usize,
    /// Elements to reorient first, comma separated.
    #[arg(long, value_delimiter = ',')]
    reorient: Vec<usize>,
    /// Write G_π^+ as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct ShellingArgs {
    file: PathBuf,
    /// Coline elements, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    coline: Vec<usize>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Catalog file; relative names missing from the working directory are
    /// looked up in $OM_CATALOG_DIR. Defaults to uniform_4_8.txt there.
    catalog: Option<PathBuf>,
    #[arg(long, default_value = "full")]
    mode: Mode,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Per-entry CSV report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON-lines checkpoint; an interrupted run resumes from it.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Read lines holding only a sign string as rank-R chirotopes on N
    /// elements, given as N,R.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    bare_signs: Vec<usize>,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct ConstructArgs {
    #[command(subcommand)]
    what: Option<ConstructKind>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    size: Option<usize>,
    /// Also write the certificate here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Sensitive LP digraph on a 3-polytope with the given vertex count.
    Sensitive {
        #[arg(long)]
        vertices: usize,
    },
}

/// What a command hands back: its payload and an exit code.
struct Outcome {
    code: u8,
    payload: Value,
}

impl Outcome {
    fn new(holds: bool, payload: Value) -> Self {
        Outcome {
            code: if holds { 0 } else { 1 },
            payload,
        }
    }
}

/// Errors carry their exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Verification { .. } | Error::BudgetExceeded { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Program(args) => program(args),
        Command::Shelling(args) => shelling(args),
        Command::Classify(args) => classify(args),
        Command::Construct(args) => construct(args),
    };
    match result {
        Ok(mut outcome) => {
            if cli.timing {
                if let Value::Object(map) = &mut outcome.payload {
                    map.insert("elapsed_ms".into(), json!(start.elapsed().as_millis()));
                }
            }
            print_payload(&outcome.payload, cli.plain);
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("holtklee: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn print_payload(payload: &Value, plain: bool) {
    if !plain {
        println!("{}", serde_json::to_string_pretty(payload).expect("json value"));
        return;
    }
    if let Value::Object(map) = payload {
        for (k, v) in map {
            match v {
                Value::String(s) => println!("{k}: {s}"),
                other => println!("{k}: {other}"),
            }
        }
    } else {
        println!("{payload}");
    }
}

fn read_chirotope(path: &Path) -> Result<Chirotope, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Chirotope::parse(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn read_om(path: &Path) -> Result<(Chirotope, OrientedMatroid), Failure> {
    let chi = read_chirotope(path)?;
    let om = OrientedMatroid::from_chirotope(&chi)?;
    Ok((chi, om))
}

fn validate(file: &Path) -> Result<Outcome, Failure> {
    let chi = read_chirotope(file)?;
    let axioms = validate_cocircuit_axioms(&chi.cocircuits());
    if !axioms.passed() {
        return Ok(Outcome::new(
            false,
            json!({
                "n": chi.ground_size(),
                "r": chi.rank(),
                "uniform": chi.is_uniform(),
                "axioms": axioms,
            }),
        ));
    }
    let om = OrientedMatroid::from_chirotope(&chi)?;
    Ok(Outcome::new(
        true,
        json!({
            "n": chi.ground_size(),
            "r": om.rank(),
            "uniform": chi.is_uniform(),
            "cocircuits": om.cocircuits().len(),
            "topes": om.topes().len(),
            "covectors": om.covectors().len(),
            "axioms": "pass",
        }),
    ))
}

fn program(args: &ProgramArgs) -> Result<Outcome, Failure> {
    let (_, om) = read_om(&args.file)?;
    let om = if args.reorient.is_empty() {
        om
    } else {
        om.reorient(&args.reorient)?
    };
    let pi = Program::new(om, args.g, args.f)?;
    let report = program_report(&pi)?;
    if let Some(path) = &args.dot {
        let graph = program_graph(&pi)?;
        fs::write(path, graph.feasible_graph.to_dot("feasible")).map_err(|e| input_error(e.to_string()))?;
    }
    let mut payload = serde_json::to_value(&report).expect("plain data");
    payload["reorient"] = json!(args.reorient);
    if !report.proper {
        payload["reason"] = json!("program is not proper: its feasible region is unbounded, contains no tope, or the objective is not generic");
        return Ok(Outcome::new(false, payload));
    }
    let holds = report.hk.as_ref().is_some_and(|h| h.holds);
    Ok(Outcome::new(holds, payload))
}

fn shelling(args: &ShellingArgs) -> Result<Outcome, Failure> {
    let (chi, om) = read_om(&args.file)?;
    let omega = ColineFixation::new(om, &args.coline)?;
    if !is_generic_coline(&omega) {
        return Ok(Outcome::new(
            false,
            json!({"T": args.coline, "generic": false, "reason": "coline is not generic"}),
        ));
    }
    if !is_proper_fixation(&omega) {
        let order = coline_shelling(&omega).ok().map(|s| s.order);
        return Ok(Outcome::new(
            false,
            json!({
                "T": args.coline,
                "generic": true,
                "proper": false,
                "shelling_order": order,
                "hkstar": Value::Null,
                "reason": "fixation is not proper: some element off T does not support a facet of the supercell, or the supercell is not pointed",
            }),
        ));
    }
    let cert = hkstar_certificate(&omega, Some(&chi))?;
    if let Some(path) = &args.dot {
        let graph = shelling_digraph(&omega)?;
        fs::write(path, graph.to_dot("shelling")).map_err(|e| input_error(e.to_string()))?;
    }
    let holds = cert.hkstar;
    let mut payload = serde_json::to_value(&cert).expect("plain data");
    payload["proper"] = json!(true);
    Ok(Outcome::new(holds, payload))
}

fn resolve_catalog(arg: Option<&Path>) -> Result<PathBuf, Failure> {
    let dir = std::env::var_os("OM_CATALOG_DIR").map(PathBuf::from);
    let wanted = arg.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("uniform_4_8.txt"));
    if wanted.exists() {
        return Ok(wanted);
    }
    if let Some(dir) = dir.filter(|_| wanted.is_relative()) {
        let inside = dir.join(&wanted);
        if inside.exists() {
            return Ok(inside);
        }
    }
    Err(input_error(format!(
        "catalog {} not found (also looked in $OM_CATALOG_DIR)",
        wanted.display()
    )))
}

fn classify(args: &ClassifyArgs) -> Result<Outcome, Failure> {
    let path = resolve_catalog(args.catalog.as_deref())?;
    let file = fs::File::open(&path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let mut reader = CatalogReader::new(std::io::BufReader::new(file));
    if let [n, r] = args.bare_signs[..] {
        reader = reader.with_bare_signs(n, r);
    }
    let catalog = ingest_reader(reader)?;
    let options = BatchOptions {
        mode: args.mode,
        jobs: args.jobs,
        checkpoint: args.checkpoint.clone(),
        ..BatchOptions::default()
    };
    let outcome = batch_classify(&catalog.entries, &options)?;
    if let Some(out) = &args.out {
        let file = fs::File::create(out).map_err(|e| input_error(format!("{}: {e}", out.display())))?;
        write_csv(&outcome.rows, file)?;
    }
    Ok(Outcome::new(
        true,
        json!({
            "catalog": path.display().to_string(),
            "mode": args.mode,
            "aggregate": outcome.aggregate,
            "malformed_lines": catalog.malformed.iter().map(|(l, _)| l).collect::<Vec<_>>(),
            "resumed": outcome.resumed,
        }),
    ))
}

fn construct(args: &ConstructArgs) -> Result<Outcome, Failure> {
    if let Some(ConstructKind::Sensitive { vertices }) = &args.what {
        return construct_sensitive(*vertices);
    }
    let (Some(r), Some(n)) = (args.rank, args.size) else {
        return Err(input_error("construct needs --rank and --size, or the `sensitive` subcommand"));
    };
    if r < 4 || n < 2 * r {
        return Err(input_error(format!("needs rank ≥ 4 and size ≥ 2·rank, got rank {r}, size {n}")));
    }
    let (_, cert) = build_non_hkstar(r, n)?;
    let payload = serde_json::to_value(&cert).expect("plain data");
    if let Some(out) = &args.out {
        fs::write(out, cert.to_json()).map_err(|e| input_error(e.to_string()))?;
    }
    Ok(Outcome::new(true, payload))
}

fn construct_sensitive(vertices: usize) -> Result<Outcome, Failure> {
    match vertices {
        0..=3 => Err(input_error("a 3-polytope has at least 4 vertices")),
        4 | 5 => {
            let polys = if vertices == 4 {
                vec![("simplex", simplex_3())]
            } else {
                five_vertex_polytopes().into_iter().map(|e| (e.name, e.polytope)).collect()
            };
            let mut orientations = 0;
            let mut sensitive = 0;
            let mut objective_found = false;
            for (_, p) in &polys {
                let census = sensitive_census(p);
                orientations += census.orientations;
                sensitive += census.sensitive_pairs;
                objective_found |= find_sensitive_objective(p).is_some();
            }
            let found = sensitive > 0 || objective_found;
            Ok(Outcome::new(
                found,
                json!({
                    "vertices": vertices,
                    "found": found,
                    "note": format!(
                        "{}: exhaustive over {} combinatorial type(s) ({}), {} acyclic face-USO orientations, {} sensitive",
                        if found { "found" } else { "not found" },
                        polys.len(),
                        polys.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", "),
                        orientations,
                        sensitive
                    ),
                }),
            ))
        }
        k => {
            let gamma = sensitive_polytope(3, k)?;
            Ok(Outcome::new(
                true,
                json!({"vertices": k, "found": true, "certificate": gamma.certificate()}),
            ))
        }
    }
}
