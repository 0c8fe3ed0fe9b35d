//! `coxeter`: enumeration, deformation analysis and table emission for
//! hyperbolic Coxeter polyhedra.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use coxeter_deform::andreev::{enumerate_labelings, EnumerationOptions, Mode};
use coxeter_deform::groebner::instances::BuiltinInstance;
use coxeter_deform::groebner::GroebnerOptions;
use coxeter_deform::hyperbolic::Gauge;
use coxeter_deform::pipeline::{
    analyze_row, catalog_rows, lookup, prism_row, to_tsv, try_analyze_row, verify_theorem1, AnalysisRecord, GroebnerMode,
    NamedRow, PipelineError, PipelineOptions, RealizationCache, RowSet,
};
use coxeter_deform::polytope::{catalog, counts, CoxeterLabeling};

use config::FileConfig;

#[derive(Parser, Debug)]
#[command(name = "coxeter", version, about = "Projective deformations of hyperbolic Coxeter 3-orbifolds")]
struct Cli {
    /// Configuration file (TOML key-value pairs).
    #[arg(long, env = "COXETER_CONFIG", global = true)]
    config: Option<PathBuf>,
    /// Starting precision in bits for the rank decision (53/64, 256, 1024).
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Newton residual tolerance for the realization.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Three faces meeting at a vertex (1-based, comma separated) that fix
    /// the gauge of the realization.
    #[arg(long, global = true, value_delimiter = ',')]
    seed_anchor: Option<Vec<usize>>,
    /// Required singular-value gap for a rank decision.
    #[arg(long, global = true)]
    gap: Option<f64>,
    /// Directory for cached realizations and exported bases.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Exact eliminations to run.
    #[arg(long, global = true, value_enum)]
    groebner: Option<GroebnerArg>,
    /// Maximum number of terms produced during a Gröbner basis computation.
    #[arg(long, global = true)]
    term_budget: Option<usize>,
    /// Worker threads for tables (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "tsv")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Admissible labelings up to symmetry.
    Enumerate {
        /// cube, dodecahedron, prismN, pyramidN, antiprismN, ...
        polyhedron: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        orders: Vec<u32>,
        #[arg(long, value_enum, default_value = "compact")]
        mode: ModeArg,
        #[arg(long)]
        max_right_angles_per_face: Option<usize>,
    },
    /// Full analysis of one orbifold: `cuN`, `doN`, `prismN`, `prism --n N`,
    /// or a polyhedron with `--labels`.
    Analyze {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        /// Edge orders in the polyhedron's edge order.
        #[arg(long)]
        labels: Option<String>,
    },
    /// A whole table, analysed in parallel.
    Table {
        #[arg(value_enum)]
        set: SetArg,
        /// Prism range, `a..b` (inclusive) or a single value.
        #[arg(long, default_value = "5..12")]
        n: String,
    },
    /// Rank comparison and isometry-kernel check for an ideal polyhedron
    /// with every edge of order 3.
    VerifyTheorem1 {
        #[arg(default_value = "cube")]
        polyhedron: String,
        /// Edge orders; defaults to all 3.
        #[arg(long)]
        labels: Option<String>,
        /// Subspace-distance tolerance for the isometry kernel.
        #[arg(long, default_value_t = 1e-9)]
        span_tol: f64,
    },
    /// Exact reduced Gröbner basis and its dimension analysis.
    Groebner {
        /// `cu21`, `cu27`, or a polyhedron with `--labels`.
        name: String,
        #[arg(long)]
        labels: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Compact,
    FiniteVolume,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetArg {
    Cubes,
    Dodecahedra,
    Prisms,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroebnerArg {
    Off,
    Fast,
    Full,
}

impl From<GroebnerArg> for GroebnerMode {
    fn from(g: GroebnerArg) -> Self {
        match g {
            GroebnerArg::Off => GroebnerMode::Off,
            GroebnerArg::Fast => GroebnerMode::Fast,
            GroebnerArg::Full => GroebnerMode::Full,
        }
    }
}

impl From<SetArg> for RowSet {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::Cubes => RowSet::Cubes,
            SetArg::Dodecahedra => RowSet::Dodecahedra,
            SetArg::Prisms => RowSet::Prisms,
        }
    }
}

/// Effective settings after merging the config file and the flags.
struct Settings {
    pipeline: PipelineOptions,
    output_dir: PathBuf,
    jobs: usize,
    format: Format,
}

fn parse_groebner(s: &str) -> Result<GroebnerMode> {
    match s {
        "off" => Ok(GroebnerMode::Off),
        "fast" => Ok(GroebnerMode::Fast),
        "full" => Ok(GroebnerMode::Full),
        _ => bail!("unknown groebner mode `{s}`"),
    }
}

fn settings(cli: &Cli, file: &FileConfig) -> Result<Settings> {
    let mut p = PipelineOptions::default();
    p.solve.tol = cli.tol.or(file.newton_tol).unwrap_or(config::DEFAULT_NEWTON_TOL);
    if let Some(g) = cli.gap.or(file.gap_factor) {
        p.gap = g;
    }
    if let Some(l) = &file.precision_ladder {
        p.precision_ladder = l.clone();
    }
    if let Some(start) = cli.precision {
        let rest: Vec<usize> = p.precision_ladder.iter().copied().filter(|&b| b > start.max(64)).collect();
        p.precision_ladder = std::iter::once(start).chain(rest).collect();
    }
    if let Some(b) = cli.term_budget.or(file.groebner_term_budget) {
        p.term_budget = b;
    }
    p.groebner = match (cli.groebner, &file.groebner) {
        (Some(g), _) => g.into(),
        (None, Some(s)) => parse_groebner(s)?,
        (None, None) => GroebnerMode::default(),
    };
    if let Some(a) = &cli.seed_anchor {
        if a.len() != 3 || a.contains(&0) {
            return Err(PipelineError::Precondition("--seed-anchor takes three 1-based face indices".into()).into());
        }
        p.gauge = Gauge::Anchored([a[0] - 1, a[1] - 1, a[2] - 1]);
    }
    let output_dir = cli
        .output_dir
        .clone()
        .or_else(|| file.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(config::DEFAULT_OUTPUT_DIR));
    Ok(Settings { pipeline: p, output_dir, jobs: cli.jobs.or(file.jobs).unwrap_or(0), format: cli.format })
}

fn exit_code(kind: &str) -> u8 {
    match kind {
        "precondition" => 2,
        "ambiguity" => 3,
        "budget" => 4,
        _ => 1,
    }
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    e.chain()
        .find_map(|c| c.downcast_ref::<PipelineError>().map(PipelineError::kind))
        .unwrap_or("failure")
}

#[derive(Serialize)]
struct EnumeratedRow {
    name: String,
    string: String,
    e2: usize,
    #[serde(rename = "O")]
    o: i64,
}

fn row_prefix(polyhedron: &str) -> String {
    match polyhedron {
        "cube" => "cu".into(),
        "dodecahedron" => "do".into(),
        other => format!("{other}-"),
    }
}

fn cmd_enumerate(
    polyhedron: &str,
    orders: &[u32],
    mode: ModeArg,
    max_right: Option<usize>,
    format: Format,
) -> Result<String> {
    let p = catalog::by_name(polyhedron).map_err(PipelineError::from)?;
    let opts = EnumerationOptions {
        max_right_angles_per_face: max_right,
        mode: match mode {
            ModeArg::Compact => Mode::Compact,
            ModeArg::FiniteVolume => Mode::FiniteVolume,
        },
        ..EnumerationOptions::compact(orders)
    };
    let labelings = enumerate_labelings(&p, &opts, &p.symmetry_group()).map_err(PipelineError::from)?;
    let prefix = row_prefix(&p.name);
    let rows: Vec<EnumeratedRow> = labelings
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let c = counts(&p, l);
            EnumeratedRow { name: format!("{prefix}{}", k + 1), string: l.to_string(), e2: c.e2, o: c.excess }
        })
        .collect();
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Tsv => {
            let mut out = String::from("name\tstring\te2\tO\n");
            for r in &rows {
                out.push_str(&format!("{}\t{}\t{}\t{}\n", r.name, r.string, r.e2, r.o));
            }
            out
        }
    })
}

fn labeled_row(polyhedron: &str, labels: &str) -> Result<NamedRow> {
    let p = catalog::by_name(polyhedron).map_err(PipelineError::from)?;
    let l = CoxeterLabeling::parse(&p, labels).map_err(PipelineError::from)?;
    Ok(NamedRow { name: polyhedron.to_string(), polyhedron: p, labeling: l })
}

fn resolve(name: &str, n: Option<usize>, labels: Option<&str>) -> Result<NamedRow> {
    if let Some(labels) = labels {
        return labeled_row(name, labels);
    }
    if name == "prism" {
        let n = n.ok_or_else(|| PipelineError::Precondition("`prism` needs --n".into()))?;
        return Ok(prism_row(n)?);
    }
    Ok(lookup(name)?)
}

fn table_set(row: &NamedRow) -> RowSet {
    match row.polyhedron.name.as_str() {
        "cube" => RowSet::Cubes,
        "dodecahedron" => RowSet::Dodecahedra,
        _ => RowSet::Prisms,
    }
}

fn render(records: &[AnalysisRecord], set: RowSet, format: Format) -> Result<String> {
    Ok(match format {
        Format::Tsv => to_tsv(records, set),
        Format::Json => serde_json::to_string_pretty(records)? + "\n",
    })
}

fn cmd_analyze(row: &NamedRow, s: &Settings) -> Result<String> {
    let cache = RealizationCache::new(Some(s.output_dir.clone()));
    let rec = try_analyze_row(row, &s.pipeline, &cache)?;
    Ok(match s.format {
        Format::Tsv => to_tsv(std::slice::from_ref(&rec), table_set(row)),
        Format::Json => serde_json::to_string_pretty(&rec)? + "\n",
    })
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let bad = || PipelineError::Precondition(format!("bad range `{s}`, expected a..b"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad().into());
    }
    Ok(a..=b)
}

/// Runs the table and returns its text plus the first row error kind.
fn cmd_table(set: RowSet, range: &str, s: &Settings) -> Result<(String, Option<String>)> {
    let rows = catalog_rows(set, parse_range(range)?)?;
    let cache = RealizationCache::new(Some(s.output_dir.clone()));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(s.jobs).build()?;
    let records: Vec<AnalysisRecord> = pool.install(|| rows.par_iter().map(|r| analyze_row(r, &s.pipeline, &cache)).collect());
    let first_error = records.iter().find_map(|r| r.error.as_ref().map(|e| e.kind.clone()));
    Ok((render(&records, set, s.format)?, first_error))
}

fn cmd_verify(polyhedron: &str, labels: Option<&str>, span_tol: f64, s: &Settings) -> Result<String> {
    let p = catalog::by_name(polyhedron).map_err(PipelineError::from)?;
    let l = match labels {
        Some(t) => CoxeterLabeling::parse(&p, t).map_err(PipelineError::from)?,
        None => CoxeterLabeling::uniform(&p, 3),
    };
    let report = verify_theorem1(&p, &l, &s.pipeline, span_tol)?;
    Ok(match s.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Tsv => format!(
            "equations\trank_vinberg\trank_hyperbolic\tkernel_dim\tsubspace_distance\tisometry_span_dim\tpassed\n{}\t{}\t{}\t{}\t{:.3e}\t{}\t{}\n",
            report.equations,
            report.rank_vinberg,
            report.rank_hyperbolic,
            report.kernel_dim,
            report.subspace_distance,
            report.isometry_span_dim,
            report.passed
        ),
    })
}

fn cmd_groebner(name: &str, labels: Option<&str>, s: &Settings) -> Result<String> {
    let row = resolve(name, None, labels)?;
    let instance = BuiltinInstance::identify(&row.polyhedron, &row.labeling).ok_or_else(|| {
        PipelineError::Precondition(format!("no exact realization is built in for {} ({})", row.name, row.labeling))
    })?;
    let (cert, _, _) = instance
        .certificate(GroebnerOptions { term_budget: s.pipeline.term_budget })
        .map_err(PipelineError::from)?;
    write_file(&s.output_dir.join("groebner").join(format!("{}.txt", cert.name)), &cert.basis_text())?;
    Ok(match s.format {
        Format::Json => serde_json::to_string_pretty(&cert)? + "\n",
        Format::Tsv => cert.basis_text(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: &Cli) -> Result<(String, Option<String>)> {
    let file = config::load(cli.config.as_deref())?;
    let s = settings(cli, &file)?;
    let plain = |r: Result<String>| r.map(|t| (t, None));
    match &cli.command {
        Command::Enumerate { polyhedron, orders, mode, max_right_angles_per_face } => {
            plain(cmd_enumerate(polyhedron, orders, *mode, *max_right_angles_per_face, s.format))
        }
        Command::Analyze { name, n, labels } => plain(resolve(name, *n, labels.as_deref()).and_then(|row| cmd_analyze(&row, &s))),
        Command::Table { set, n } => cmd_table((*set).into(), n, &s),
        Command::VerifyTheorem1 { polyhedron, labels, span_tol } => plain(cmd_verify(polyhedron, labels.as_deref(), *span_tol, &s)),
        Command::Groebner { name, labels } => plain(cmd_groebner(name, labels.as_deref(), &s)),
    }
}

#[derive(Serialize)]
struct ErrorReport {
    error: ErrorBody,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: String,
    message: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, row_error)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(row_error.map_or(0, |k| exit_code(&k)))
        }
        Err(e) => {
            let kind = error_kind(&e);
            let report = ErrorReport { error: ErrorBody { kind: kind.to_string(), message: format!("{e:#}") } };
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap_or_default()),
                Format::Tsv => eprintln!("error[{kind}]: {e:#}"),
            }
            ExitCode::from(exit_code(kind))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("5..12").unwrap(), 5..=12);
        assert_eq!(parse_range("5..=7").unwrap(), 5..=7);
        assert_eq!(parse_range("6").unwrap(), 6..=6);
        assert!(parse_range("9..5").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn flags_override_config() {
        let cli = Cli::parse_from(["coxeter", "--tol", "1e-10", "--precision", "256", "--seed-anchor", "1,2,3", "analyze", "cu1"]);
        let file = config::parse("newton_tol = 1e-8\ngap_factor = 50.0\ngroebner = \"off\"\n").unwrap();
        let s = settings(&cli, &file).unwrap();
        assert_eq!(s.pipeline.solve.tol, 1e-10);
        assert_eq!(s.pipeline.gap, 50.0);
        assert_eq!(s.pipeline.precision_ladder, vec![256, 1024]);
        assert_eq!(s.pipeline.groebner, GroebnerMode::Off);
        assert_eq!(s.pipeline.gauge, Gauge::Anchored([0, 1, 2]));
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        let e: anyhow::Error = PipelineError::Budget("x".into()).into();
        assert_eq!(exit_code(error_kind(&e)), 4);
        let e = anyhow::anyhow!("plain");
        assert_eq!(exit_code(error_kind(&e)), 1);
        assert_eq!(exit_code("precondition"), 2);
        assert_eq!(exit_code("ambiguity"), 3);
    }
}
