//! End-to-end analysis of named orbifolds: realization, Jacobian rank with
//! precision escalation, linear test, local dimension, and table rows.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::andreev::{check_finite_volume, enumerate_labelings, AndreevError, EnumerationOptions};
use crate::groebner::instances::BuiltinInstance;
use crate::groebner::{GroebnerError, GroebnerOptions, DEFAULT_TERM_BUDGET};
use crate::hyperbolic::{prism_labeling, realize, refine, Gauge, HyperbolicError, HyperbolicRealization, RealizationRecord, SolveOptions};
use crate::localdim::{local_dimension, Certification, ExactElimination, LocalDimError, LocalDimOptions};
use crate::polytope::{catalog, classify_vertices, counts, CombinatorialPolyhedron, CoxeterLabeling, PolytopeError, VertexKind};
use crate::real::{Real, F1024, F256};
use crate::rigidity::linear_test;
use crate::tangent::{analyze, isometry_kernel_check, IsometryKernelReport, JacobianReport, TangentError};
use crate::vinberg::{hyperbolic_point, system_for};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("rank ambiguous at every precision of the ladder: {0}")]
    Ambiguous(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("unknown orbifold `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Andreev(#[from] AndreevError),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
    #[error(transparent)]
    Tangent(TangentError),
    #[error(transparent)]
    LocalDim(#[from] LocalDimError),
    #[error(transparent)]
    Groebner(GroebnerError),
    #[error("cache: {0}")]
    Cache(String),
}

impl From<GroebnerError> for PipelineError {
    fn from(e: GroebnerError) -> Self {
        match e {
            GroebnerError::ResourceExceeded { .. } => PipelineError::Budget(e.to_string()),
            other => PipelineError::Groebner(other),
        }
    }
}

impl From<TangentError> for PipelineError {
    fn from(e: TangentError) -> Self {
        match e {
            TangentError::NotApplicable(s) => PipelineError::Precondition(s),
            other => PipelineError::Tangent(other),
        }
    }
}

impl PipelineError {
    /// Short machine-readable kind.
    pub fn kind(&self) -> &'static str {
        match self {
            PipelineError::Precondition(_) | PipelineError::UnknownName(_) | PipelineError::Polytope(_) => "precondition",
            PipelineError::Andreev(_) | PipelineError::Hyperbolic(HyperbolicError::BadAnchor(_)) => "precondition",
            PipelineError::Ambiguous(_) => "ambiguity",
            PipelineError::Budget(_) => "budget",
            _ => "failure",
        }
    }
}

/// Which exact eliminations the pipeline runs when it recognises an
/// orbifold with a built-in exact realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GroebnerMode {
    Off,
    /// The quadratic-field instance only.
    #[default]
    Fast,
    /// Also the degree-12 instance.
    Full,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub solve: SolveOptions,
    pub gap: f64,
    /// Working precisions in bits; 53 and 64 both mean binary64.
    pub precision_ladder: Vec<usize>,
    pub gauge: Gauge,
    pub groebner: GroebnerMode,
    pub term_budget: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            solve: SolveOptions::default(),
            gap: crate::tangent::DEFAULT_GAP,
            precision_ladder: vec![64, 256, 1024],
            gauge: Gauge::Auto,
            groebner: GroebnerMode::Fast,
            term_budget: DEFAULT_TERM_BUDGET,
        }
    }
}

/// A named catalog orbifold.
#[derive(Clone, Debug)]
pub struct NamedRow {
    pub name: String,
    pub polyhedron: CombinatorialPolyhedron,
    pub labeling: CoxeterLabeling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSet {
    Cubes,
    Dodecahedra,
    Prisms,
}

pub fn cube_enumeration_options() -> EnumerationOptions {
    EnumerationOptions::compact(&[2, 3])
}

pub fn dodecahedron_enumeration_options() -> EnumerationOptions {
    EnumerationOptions { max_right_angles_per_face: Some(2), ..EnumerationOptions::compact(&[2, 3]) }
}

fn enumerated(p: CombinatorialPolyhedron, opts: &EnumerationOptions, prefix: &str) -> Result<Vec<NamedRow>, PipelineError> {
    let group = p.symmetry_group();
    let ls = enumerate_labelings(&p, opts, &group)?;
    Ok(ls
        .into_iter()
        .enumerate()
        .map(|(k, l)| NamedRow { name: format!("{prefix}{}", k + 1), polyhedron: p.clone(), labeling: l })
        .collect())
}

/// Catalog rows in table order; cubes and dodecahedra are enumerated once.
pub fn catalog_rows(set: RowSet, prism_range: std::ops::RangeInclusive<usize>) -> Result<Vec<NamedRow>, PipelineError> {
    static CUBES: OnceLock<Vec<NamedRow>> = OnceLock::new();
    static DODECAHEDRA: OnceLock<Vec<NamedRow>> = OnceLock::new();
    match set {
        RowSet::Cubes => {
            if CUBES.get().is_none() {
                let _ = CUBES.set(enumerated(catalog::cube(), &cube_enumeration_options(), "cu")?);
            }
            Ok(CUBES.get().expect("initialised").clone())
        }
        RowSet::Dodecahedra => {
            if DODECAHEDRA.get().is_none() {
                let _ = DODECAHEDRA.set(enumerated(catalog::dodecahedron(), &dodecahedron_enumeration_options(), "do")?);
            }
            Ok(DODECAHEDRA.get().expect("initialised").clone())
        }
        RowSet::Prisms => prism_range.map(|n| prism_row(n)).collect(),
    }
}

pub fn prism_row(n: usize) -> Result<NamedRow, PipelineError> {
    let p = catalog::prism(n)?;
    let l = prism_labeling(&p, n);
    Ok(NamedRow { name: format!("prism{n}"), polyhedron: p, labeling: l })
}

/// Resolves `cuN`, `doN` or `prismN`.
pub fn lookup(name: &str) -> Result<NamedRow, PipelineError> {
    let unknown = || PipelineError::UnknownName(name.to_string());
    let index = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    if let Some(n) = index("prism") {
        return prism_row(n);
    }
    let (set, k) = match (index("cu"), index("do")) {
        (Some(k), _) => (RowSet::Cubes, k),
        (_, Some(k)) => (RowSet::Dodecahedra, k),
        _ => return Err(unknown()),
    };
    let rows = catalog_rows(set, 0..=0)?;
    k.checked_sub(1).and_then(|i| rows.get(i).cloned()).ok_or_else(unknown)
}

/// Realizations in memory and optionally on disk, keyed by polyhedron,
/// labeling and gauge.
#[derive(Default)]
pub struct RealizationCache {
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<String, RealizationRecord>>,
}

impl RealizationCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        RealizationCache { dir, memory: Mutex::new(HashMap::new()) }
    }

    pub fn key(p: &CombinatorialPolyhedron, l: &CoxeterLabeling, gauge: Gauge) -> String {
        let orders: Vec<String> = l.orders.iter().map(|o| o.to_string()).collect();
        let gauge = match gauge {
            Gauge::Anchored(f) => format!("anchor-{}-{}-{}", f[0] + 1, f[1] + 1, f[2] + 1),
            other => format!("{other:?}").to_lowercase(),
        };
        format!("{}_{}_{}", p.name, orders.join(""), gauge)
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join("realizations").join(format!("{key}.json")))
    }

    pub fn get_or_realize(
        &self,
        p: &CombinatorialPolyhedron,
        l: &CoxeterLabeling,
        opts: &PipelineOptions,
    ) -> Result<HyperbolicRealization<f64>, PipelineError> {
        let key = Self::key(p, l, opts.gauge);
        let cached = self.memory.lock().expect("cache lock").get(&key).cloned();
        let from_disk = || -> Option<RealizationRecord> {
            let text = fs::read_to_string(self.path(&key)?).ok()?;
            serde_json::from_str(&text).ok()
        };
        if let Some(rec) = cached.or_else(from_disk) {
            if let Ok(r) = HyperbolicRealization::<f64>::from_record(p, &rec) {
                if r.labeling == *l {
                    return Ok(r);
                }
            }
        }
        let r = realize(p, l, opts.gauge, &opts.solve)?;
        let rec = r.to_record();
        if let Some(path) = self.path(&key) {
            let dir = path.parent().expect("cache directory");
            fs::create_dir_all(dir).map_err(|e| PipelineError::Cache(e.to_string()))?;
            let text = serde_json::to_string_pretty(&rec).map_err(|e| PipelineError::Cache(e.to_string()))?;
            fs::write(&path, text).map_err(|e| PipelineError::Cache(e.to_string()))?;
        }
        self.memory.lock().expect("cache lock").insert(key, rec);
        Ok(r)
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Timings {
    pub realize_ms: f64,
    pub jacobian_ms: f64,
    pub local_ms: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LinearVerdict {
    pub rigid: bool,
    pub level: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RecordError {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AnalysisRecord {
    pub name: String,
    pub polyhedron: String,
    pub string: String,
    #[serde(rename = "O")]
    pub o: i64,
    #[serde(rename = "I")]
    pub i: Option<usize>,
    #[serde(rename = "A")]
    pub a: Option<usize>,
    #[serde(rename = "L")]
    pub l: LinearVerdict,
    #[serde(rename = "J")]
    pub j: Option<bool>,
    #[serde(rename = "S")]
    pub s: Option<f64>,
    pub rows: usize,
    pub cols: usize,
    pub rank: Option<usize>,
    pub singular_gap: Option<f64>,
    pub precision: Option<usize>,
    pub certification: Option<Certification>,
    pub details: String,
    pub timings: Timings,
    pub error: Option<RecordError>,
}

// Wall-clock timer; browsers have no monotonic clock in std, so timings
// read zero there.
struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    fn ms(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed().as_secs_f64() * 1e3;
        #[cfg(target_arch = "wasm32")]
        return 0.0;
    }
}

fn analyze_at<T: Real>(
    p: &CombinatorialPolyhedron,
    r: &HyperbolicRealization<f64>,
    opts: &PipelineOptions,
) -> Result<JacobianReport, PipelineError> {
    let high: HyperbolicRealization<T> = refine(p, r, &opts.solve)?;
    Ok(analyze(p, &system_for(p, &high), &hyperbolic_point(&high), &r.labeling, opts.gap)?)
}

/// Jacobian analysis, escalating precision along the ladder while the rank
/// decision is ambiguous.
pub fn jacobian_with_escalation(
    p: &CombinatorialPolyhedron,
    r: &HyperbolicRealization<f64>,
    opts: &PipelineOptions,
) -> Result<JacobianReport, PipelineError> {
    let mut last = String::from("empty precision ladder");
    for &bits in &opts.precision_ladder {
        let attempt = match bits {
            53 | 64 => analyze(p, &system_for(p, r), &hyperbolic_point(r), &r.labeling, opts.gap).map_err(Into::into),
            256 => analyze_at::<F256>(p, r, opts),
            1024 => analyze_at::<F1024>(p, r, opts),
            other => return Err(PipelineError::Precondition(format!("unsupported precision {other}"))),
        };
        match attempt {
            Err(PipelineError::Tangent(e @ TangentError::AmbiguousRank { .. })) => last = format!("{e} at {bits} bits"),
            other => return other,
        }
    }
    Err(PipelineError::Ambiguous(last))
}

/// Local-dimension options for `row`, running the exact elimination when
/// one is available and enabled.
pub fn elimination_for(
    p: &CombinatorialPolyhedron,
    l: &CoxeterLabeling,
    opts: &PipelineOptions,
) -> Result<Option<ExactElimination>, PipelineError> {
    let inst = match (BuiltinInstance::identify(p, l), opts.groebner) {
        (None, _) | (_, GroebnerMode::Off) => return Ok(None),
        (Some(BuiltinInstance::Cu27), GroebnerMode::Fast) => return Ok(None),
        (Some(inst), _) => inst,
    };
    let (cert, _, _) = inst.certificate(GroebnerOptions { term_budget: opts.term_budget })?;
    Ok(Some(ExactElimination::from(&cert)))
}

fn base_record(row: &NamedRow) -> AnalysisRecord {
    let p = &row.polyhedron;
    let c = counts(p, &row.labeling);
    let lin = linear_test(p, &row.labeling);
    AnalysisRecord {
        name: row.name.clone(),
        polyhedron: p.name.clone(),
        string: row.labeling.to_string(),
        o: c.excess,
        i: None,
        a: None,
        l: LinearVerdict { rigid: lin.rigid, level: if lin.rigid { lin.max_level() } else { None } },
        j: None,
        s: None,
        rows: p.num_faces() + p.num_edges() + row.labeling.num_right_angles(),
        cols: 4 * p.num_faces(),
        rank: None,
        singular_gap: None,
        precision: None,
        certification: None,
        details: String::new(),
        timings: Timings::default(),
        error: None,
    }
}

/// Full analysis of one row. Failures are recorded in the record's error
/// field together with whatever columns were computed.
pub fn analyze_row(row: &NamedRow, opts: &PipelineOptions, cache: &RealizationCache) -> AnalysisRecord {
    let mut rec = base_record(row);
    if let Err(e) = fill_record(row, opts, cache, &mut rec) {
        rec.error = Some(RecordError { kind: e.kind().to_string(), message: e.to_string() });
    }
    rec
}

/// Like [`analyze_row`] but returns the first error.
pub fn try_analyze_row(row: &NamedRow, opts: &PipelineOptions, cache: &RealizationCache) -> Result<AnalysisRecord, PipelineError> {
    let mut rec = base_record(row);
    fill_record(row, opts, cache, &mut rec)?;
    Ok(rec)
}

fn fill_record(
    row: &NamedRow,
    opts: &PipelineOptions,
    cache: &RealizationCache,
    rec: &mut AnalysisRecord,
) -> Result<(), PipelineError> {
    let p = &row.polyhedron;
    let t = Stopwatch::start();
    let r = cache.get_or_realize(p, &row.labeling, opts)?;
    rec.timings.realize_ms = t.ms();
    let t = Stopwatch::start();
    let report = jacobian_with_escalation(p, &r, opts)?;
    rec.timings.jacobian_ms = t.ms();
    rec.i = Some(report.kernel_dim);
    rec.j = Some(report.full_rank);
    rec.rank = Some(report.rank);
    rec.singular_gap = Some(report.singular_gap);
    rec.precision = Some(report.precision);
    if p.name == "dodecahedron" && report.full_rank {
        rec.s = Some(report.min_singular);
    }
    let t = Stopwatch::start();
    let elimination = if report.full_rank { None } else { elimination_for(p, &row.labeling, opts)? };
    let verdict = local_dimension(p, &r, &report, &LocalDimOptions { elimination, ladder: None })?;
    rec.timings.local_ms = t.ms();
    rec.a = Some(verdict.dimension);
    rec.certification = Some(verdict.certification);
    rec.details = verdict.details;
    Ok(())
}

fn dash<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Tab-separated table in the published column layout; deterministic.
pub fn to_tsv(records: &[AnalysisRecord], set: RowSet) -> String {
    let mut out = String::new();
    let header: &[&str] = match set {
        RowSet::Cubes => &["name", "string", "O", "I", "A", "L", "J"],
        RowSet::Dodecahedra => &["name", "string", "O", "I", "A", "J", "S"],
        RowSet::Prisms => &["name", "string", "O", "I", "A", "certification"],
    };
    out.push_str(&header.join("\t"));
    out.push('\n');
    for r in records {
        let mut cols = vec![r.name.clone(), r.string.replace(' ', ""), r.o.to_string(), dash(&r.i), dash(&r.a)];
        match set {
            RowSet::Cubes => {
                cols.push(match r.l.level {
                    Some(k) if r.l.rigid => format!("yes, level {k}"),
                    _ => "no".to_string(),
                });
                cols.push(r.j.map_or("-".to_string(), |j| yes_no(j).to_string()));
            }
            RowSet::Dodecahedra => {
                cols.push(r.j.map_or("-".to_string(), |j| yes_no(j).to_string()));
                cols.push(r.s.map_or("-".to_string(), |s| format!("{s:.5}")));
            }
            RowSet::Prisms => {
                cols.push(r.certification.map_or("-".to_string(), |c| serde_json::to_value(c).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()));
            }
        }
        if let Some(e) = &r.error {
            cols.push(format!("error: {}", e.message));
        }
        out.push_str(&cols.join("\t"));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TheoremOneReport {
    pub equations: usize,
    pub rank_vinberg: usize,
    pub rank_hyperbolic: usize,
    pub kernel_dim: usize,
    pub subspace_distance: f64,
    pub isometry_span_dim: usize,
    pub passed: bool,
}

impl From<IsometryKernelReport> for TheoremOneReport {
    fn from(k: IsometryKernelReport) -> Self {
        TheoremOneReport {
            equations: k.equations,
            rank_vinberg: k.rank_vinberg,
            rank_hyperbolic: k.rank_hyperbolic,
            kernel_dim: k.kernel_dim,
            subspace_distance: k.subspace_distance,
            isometry_span_dim: k.isometry_span_dim,
            passed: k.passed,
        }
    }
}

/// Rank comparison and isometry-kernel check for an ideal polyhedron with
/// every order 3.
pub fn verify_theorem1(
    p: &CombinatorialPolyhedron,
    l: &CoxeterLabeling,
    opts: &PipelineOptions,
    tol: f64,
) -> Result<TheoremOneReport, PipelineError> {
    if p.is_tetrahedron() {
        return Err(PipelineError::Precondition("the tetrahedron is excluded".into()));
    }
    if l.orders.iter().any(|&o| o != 3) {
        return Err(PipelineError::Precondition("every edge must have order 3".into()));
    }
    if !classify_vertices(p, l)?.iter().all(|k| *k == VertexKind::Ideal) {
        return Err(PipelineError::Precondition("every vertex must be ideal".into()));
    }
    if !check_finite_volume(p, l)?.admissible {
        return Err(PipelineError::Precondition("labeling is not admissible for finite volume".into()));
    }
    let r = realize(p, l, Gauge::Free, &opts.solve)?;
    let report = jacobian_with_escalation(p, &r, opts)?;
    Ok(isometry_kernel_check(p, &r, &report, tol)?.into())
}
