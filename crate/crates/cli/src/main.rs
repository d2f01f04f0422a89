//! Command-line driver: triangulation validation, scrambling, signature
//! encoding/decoding, and connection experiments with CSV reporting.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pachner::search::{
    compare_strategies, connect, scramble, stats_csv_row, SearchConfig, SearchResult, Strategy,
    DEFAULT_NODE_LIMIT,
};
use pachner::{decode, encode, validate, Triangulation};
use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "pachner",
    about = "Generalised 3-manifold triangulations: validation, elementary moves, \
             isomorphism signatures and connection searches",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a triangulation (closed 3-manifold / pseudo-manifold /
    /// invalid). Exit code: 0 closed 3-manifold, 2 pseudo-manifold,
    /// 3 invalid, 1 on parse errors.
    Validate {
        /// Gluing-table file, `-` for stdin, or a signature literal.
        input: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Run connection searches over the cases of a case file and emit one
    /// statistics row per (case, strategy).
    Connect {
        /// Case file: blocks of `case <id>` followed by one signature or
        /// `@<gluing-table-path>` per line, separated by blank lines.
        casefile: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::All)]
        strategy: StrategyArg,
        /// Height allowance: maximum extra tetrahedra above the seeds' size.
        #[arg(long, default_value_t = 6)]
        max_extra_tets: u32,
        /// Abort a search once this many distinct signatures are stored.
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: usize,
        /// Reconstruct witness paths and write them under this directory in
        /// the move-sequence text format.
        #[arg(long, value_name = "DIR")]
        emit_paths: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
        format: ReportFormat,
        /// Worker threads for expansion. Values above 1 relax wall time
        /// only; all reported values stay identical to a deterministic run.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Print signatures of random 2-3/3-2 walk images of the input.
    Scramble {
        /// Gluing-table file, `-` for stdin, or a signature literal.
        input: String,
        /// Number of moves per walk.
        #[arg(long)]
        steps: usize,
        /// Size cap (tetrahedra) for the walk; defaults to input size + 6.
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of independent scrambles (seeds seed, seed+1, ...).
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Re-validate each output against the input's classification,
        /// vertex counts and Z/2 homology before printing.
        #[arg(long)]
        check: bool,
    },
    /// Convert between gluing tables and canonical signatures.
    Sig {
        #[command(subcommand)]
        direction: SigDirection,
    },
}

#[derive(Subcommand)]
enum SigDirection {
    /// Print the canonical signature of a triangulation.
    Encode {
        /// Gluing-table file, `-` for stdin, or a signature literal.
        input: String,
    },
    /// Print the gluing table of a signature.
    Decode {
        /// Signature literal, or a file containing one.
        input: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Blind,
    Monotonic,
    #[value(name = "semi-monotonic")]
    SemiMonotonic,
    All,
}

fn main() -> ExitCode {
    // clap's own exit code for usage errors collides with the validate
    // command's classification codes; fold all argument errors into 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(!matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            )));
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { input, format } => cmd_validate(&input, format),
        Command::Connect {
            casefile,
            strategy,
            max_extra_tets,
            node_limit,
            emit_paths,
            csv,
            format,
            threads,
        } => cmd_connect(
            &casefile,
            strategy,
            max_extra_tets,
            node_limit,
            emit_paths.as_deref(),
            csv.as_deref(),
            format,
            threads,
        ),
        Command::Scramble {
            input,
            steps,
            max_size,
            seed,
            count,
            check,
        } => cmd_scramble(&input, steps, max_size, seed, count, check),
        Command::Sig { direction } => match direction {
            SigDirection::Encode { input } => {
                let t = load_triangulation(&input)?;
                println!("{}", encode(&t)?);
                Ok(ExitCode::SUCCESS)
            }
            SigDirection::Decode { input } => {
                let text = maybe_file_contents(&input)?.unwrap_or(input);
                let t = decode(text.trim())?;
                print!("{}", t.to_table_text());
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

/// Reads a triangulation from a gluing-table file (`-` = stdin) or, when no
/// such file exists, treats the argument as a signature literal.
fn load_triangulation(input: &str) -> Result<Triangulation> {
    if input == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        return Ok(Triangulation::parse(&text)?);
    }
    if let Some(text) = maybe_file_contents(input)? {
        return Ok(Triangulation::parse(&text)?);
    }
    decode(input).map_err(|e| {
        anyhow!("input `{input}` is neither an existing gluing-table file nor a valid signature: {e}")
    })
}

fn maybe_file_contents(input: &str) -> Result<Option<String>> {
    let path = Path::new(input);
    if path.is_file() {
        Ok(Some(
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        ))
    } else {
        Ok(None)
    }
}

fn cmd_validate(input: &str, format: OutputFormat) -> Result<ExitCode> {
    let t = load_triangulation(input)?;
    let report = validate(&t);
    match format {
        OutputFormat::Text => {
            println!("tetrahedra: {}", t.size());
            println!("closed: {}", report.closed);
            println!("invalid edges: {:?}", report.invalid_edges);
            println!("ideal vertices: {:?}", report.ideal_vertices);
            println!("material vertices: {}", report.material_vertex_count);
            println!("closed 3-manifold: {}", report.is_closed_3_manifold);
            println!("pseudo-manifold: {}", report.is_pseudo_manifold);
        }
        OutputFormat::Json => {
            let json = serde_json::json!({
                "tetrahedra": t.size(),
                "closed": report.closed,
                "invalid_edges": report.invalid_edges,
                "ideal_vertices": report.ideal_vertices,
                "material_vertex_count": report.material_vertex_count,
                "is_closed_3_manifold": report.is_closed_3_manifold,
                "is_pseudo_manifold": report.is_pseudo_manifold,
            });
            println!("{json}");
        }
    }
    Ok(ExitCode::from(if report.is_closed_3_manifold {
        0
    } else if report.is_pseudo_manifold {
        2
    } else {
        3
    }))
}

// ---------------------------------------------------------------------------
// connect

struct Case {
    id: String,
    seeds: Vec<Triangulation>,
}

/// Parses the case-file format: `case <id>` headers, followed by one seed
/// per line (a signature or `@path` to a gluing table, relative to the case
/// file), blocks separated by blank lines; `#` starts a comment.
fn parse_casefile(path: &Path) -> Result<Vec<Case>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut cases: Vec<Case> = Vec::new();
    let mut current: Option<Case> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let fail = |msg: String| anyhow!("{}:{}: {msg}", path.display(), lineno + 1);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(id) = line.strip_prefix("case ") {
            if let Some(case) = current.take() {
                cases.push(case);
            }
            current = Some(Case {
                id: id.trim().to_string(),
                seeds: Vec::new(),
            });
            continue;
        }
        let case = current
            .as_mut()
            .ok_or_else(|| fail("seed line before any `case <id>` header".into()))?;
        let seed = if let Some(rel) = line.strip_prefix('@') {
            let table = fs::read_to_string(dir.join(rel))
                .with_context(|| format!("reading gluing table {rel}"))?;
            Triangulation::parse(&table).map_err(|e| fail(e.to_string()))?
        } else {
            decode(line).map_err(|e| fail(e.to_string()))?
        };
        case.seeds.push(seed);
    }
    if let Some(case) = current.take() {
        cases.push(case);
    }
    if cases.is_empty() {
        bail!("{}: no cases found", path.display());
    }
    Ok(cases)
}

struct Row {
    case_id: String,
    strategy: String,
    result: Option<SearchResult>,
    height_gap: Option<i64>,
    error: Option<String>,
    wall_ms: u128,
}

const CONNECT_CSV_HEADER: &str = "case_id,strategy,connected,height,nodes_23_32,nodes_20,\
                                  terminated_early,height_gap,error,wall_ms";

impl Row {
    fn to_csv(&self) -> String {
        match &self.result {
            Some(r) => {
                // The core eight columns, with height_gap and error spliced
                // in before wall_ms.
                let core = stats_csv_row("", Strategy::Blind, r, 0);
                let fields: Vec<&str> = core.split(',').collect();
                format!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    self.case_id,
                    self.strategy,
                    fields[2],
                    fields[3],
                    fields[4],
                    fields[5],
                    fields[6],
                    self.height_gap.map(|g| g.to_string()).unwrap_or_default(),
                    self.error.clone().unwrap_or_default(),
                    self.wall_ms
                )
            }
            None => format!(
                "{},{},,,,,,,{},{}",
                self.case_id,
                self.strategy,
                self.error.clone().unwrap_or_default(),
                self.wall_ms
            ),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::json!({
            "case_id": self.case_id,
            "strategy": self.strategy,
            "wall_ms": self.wall_ms,
        });
        let map = obj.as_object_mut().unwrap();
        if let Some(r) = &self.result {
            map.insert("connected".into(), r.connected.into());
            map.insert("height".into(), r.height_used.into());
            map.insert("nodes_23_32".into(), r.nodes_23_32.into());
            map.insert("nodes_20".into(), r.nodes_20.into());
            map.insert("terminated_early".into(), r.terminated_early.into());
            map.insert("height_gap".into(), self.height_gap.into());
        }
        if let Some(e) = &self.error {
            map.insert("error".into(), e.clone().into());
        }
        obj
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_connect(
    casefile: &Path,
    strategy: StrategyArg,
    max_extra_tets: u32,
    node_limit: usize,
    emit_paths: Option<&Path>,
    csv_out: Option<&Path>,
    format: ReportFormat,
    threads: usize,
) -> Result<ExitCode> {
    let cases = parse_casefile(casefile)?;
    if let Some(dir) = emit_paths {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut rows: Vec<Row> = Vec::new();
    for case in &cases {
        match strategy {
            StrategyArg::All => {
                let start = Instant::now();
                match compare_strategies(&case.seeds, max_extra_tets, node_limit) {
                    Ok(report) => {
                        let wall_ms = start.elapsed().as_millis();
                        for (s, r) in [
                            (Strategy::Blind, &report.blind),
                            (Strategy::Monotonic, &report.monotonic),
                            (Strategy::SemiMonotonic, &report.semi_monotonic),
                        ] {
                            rows.push(Row {
                                case_id: case.id.clone(),
                                strategy: s.name().into(),
                                result: Some(r.clone()),
                                height_gap: report.height_gap,
                                error: None,
                                wall_ms,
                            });
                        }
                        if let Some(dir) = emit_paths {
                            emit_case_paths(dir, case, max_extra_tets, node_limit, threads)?;
                        }
                    }
                    Err(e) => rows.push(Row {
                        case_id: case.id.clone(),
                        strategy: "all".into(),
                        result: None,
                        height_gap: None,
                        error: Some(e.to_string()),
                        wall_ms: start.elapsed().as_millis(),
                    }),
                }
            }
            _ => {
                let s = match strategy {
                    StrategyArg::Blind => Strategy::Blind,
                    StrategyArg::Monotonic => Strategy::Monotonic,
                    StrategyArg::SemiMonotonic => Strategy::SemiMonotonic,
                    StrategyArg::All => unreachable!(),
                };
                let mut cfg = SearchConfig::new(s, max_extra_tets);
                cfg.node_limit = node_limit;
                cfg.reconstruct_paths = emit_paths.is_some();
                if threads > 1 {
                    cfg.deterministic = false;
                    cfg.threads = threads;
                }
                let start = Instant::now();
                match connect(&case.seeds, &cfg) {
                    Ok(result) => {
                        if let Some(dir) = emit_paths {
                            write_paths(dir, &case.id, s, &result)?;
                        }
                        rows.push(Row {
                            case_id: case.id.clone(),
                            strategy: s.name().into(),
                            result: Some(result),
                            height_gap: None,
                            error: None,
                            wall_ms: start.elapsed().as_millis(),
                        });
                    }
                    Err(e) => rows.push(Row {
                        case_id: case.id.clone(),
                        strategy: s.name().into(),
                        result: None,
                        height_gap: None,
                        error: Some(e.to_string()),
                        wall_ms: start.elapsed().as_millis(),
                    }),
                }
            }
        }
    }

    let report = match format {
        ReportFormat::Csv => {
            let mut out = String::new();
            writeln!(out, "{}", CONNECT_CSV_HEADER.replace(" ", ""))?;
            for row in &rows {
                writeln!(out, "{}", row.to_csv())?;
            }
            out
        }
        ReportFormat::Json => {
            let values: Vec<serde_json::Value> = rows.iter().map(Row::to_json).collect();
            format!("{}\n", serde_json::to_string_pretty(&values)?)
        }
    };
    match csv_out {
        Some(path) => fs::write(path, report).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{report}"),
    }
    Ok(ExitCode::SUCCESS)
}

/// With `--strategy all`, paths are reconstructed per strategy in separate
/// runs so that each file's class reflects its strategy's promise.
fn emit_case_paths(
    dir: &Path,
    case: &Case,
    max_extra_tets: u32,
    node_limit: usize,
    threads: usize,
) -> Result<()> {
    for s in Strategy::all() {
        let mut cfg = SearchConfig::new(s, max_extra_tets);
        cfg.node_limit = node_limit;
        cfg.reconstruct_paths = true;
        if threads > 1 {
            cfg.deterministic = false;
            cfg.threads = threads;
        }
        if let Ok(result) = connect(&case.seeds, &cfg) {
            write_paths(dir, &case.id, s, &result)?;
        }
    }
    Ok(())
}

fn write_paths(dir: &Path, case_id: &str, strategy: Strategy, result: &SearchResult) -> Result<()> {
    let Some(paths) = &result.paths else {
        return Ok(());
    };
    for path in paths {
        let file = dir.join(format!(
            "{case_id}_{}_{}_{}.seq",
            strategy.name(),
            path.from_seed,
            path.to_seed
        ));
        fs::write(&file, path.sequence.to_text())
            .with_context(|| format!("writing {}", file.display()))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// scramble

fn cmd_scramble(
    input: &str,
    steps: usize,
    max_size: Option<usize>,
    seed: u64,
    count: u64,
    check: bool,
) -> Result<ExitCode> {
    let t = load_triangulation(input)?;
    let max_size = max_size.unwrap_or(t.size() + 6);
    for i in 0..count {
        let out = scramble(&t, steps, max_size, seed.wrapping_add(i))?;
        if check {
            verify_scramble_invariants(&t, &out)?;
        }
        println!("{}", encode(&out)?);
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_scramble_invariants(input: &Triangulation, output: &Triangulation) -> Result<()> {
    use pachner::{z2_homology_ranks, Skeleton};
    let before = validate(input);
    let after = validate(output);
    if before.is_closed_3_manifold != after.is_closed_3_manifold
        || before.is_pseudo_manifold != after.is_pseudo_manifold
        || before.material_vertex_count != after.material_vertex_count
        || before.ideal_vertices.len() != after.ideal_vertices.len()
    {
        bail!("scramble changed the validity classification");
    }
    let sk_in = Skeleton::compute(input)?;
    let sk_out = Skeleton::compute(output)?;
    if z2_homology_ranks(input, &sk_in)? != z2_homology_ranks(output, &sk_out)? {
        bail!("scramble changed the Z/2 homology ranks");
    }
    Ok(())
}

// Re-exported for the integration tests.
#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn casefile_rejects_empty() {
        let dir = std::env::temp_dir().join("pachner-cli-test-empty");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cases.txt");
        fs::write(&path, "# nothing\n").unwrap();
        assert!(parse_casefile(&path).is_err());
    }

}
