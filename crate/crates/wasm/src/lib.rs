//! Browser bindings: labeling enumeration, the Andreev check, and the full
//! deformation analysis of one orbifold. Every function returns JSON.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use coxeter_deform::andreev::{self, enumerate_labelings, EnumerationOptions, Mode};
use coxeter_deform::pipeline::{lookup, prism_row, try_analyze_row, NamedRow, PipelineOptions, RealizationCache};
use coxeter_deform::polytope::{catalog, classify_vertices, counts, CoxeterLabeling, VertexKind};

fn parse_mode(mode: &str) -> Result<Mode, String> {
    match mode {
        "compact" => Ok(Mode::Compact),
        "finite-volume" => Ok(Mode::FiniteVolume),
        _ => Err(format!("unknown mode `{mode}`")),
    }
}

fn parse_orders(orders: &str) -> Result<Vec<u32>, String> {
    orders
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().map_err(|_| format!("bad order `{t}`")))
        .collect()
}

fn json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Row {
    name: String,
    string: String,
    e2: usize,
    #[serde(rename = "O")]
    o: i64,
}

/// Admissible labelings of a builtin polyhedron up to symmetry.
#[wasm_bindgen]
pub fn enumerate(polyhedron: &str, orders: &str, mode: &str, max_right_angles_per_face: Option<u32>) -> Result<String, String> {
    let p = catalog::by_name(polyhedron).map_err(|e| e.to_string())?;
    let opts = EnumerationOptions {
        max_right_angles_per_face: max_right_angles_per_face.map(|m| m as usize),
        mode: parse_mode(mode)?,
        ..EnumerationOptions::compact(&parse_orders(orders)?)
    };
    let labelings = enumerate_labelings(&p, &opts, &p.symmetry_group()).map_err(|e| e.to_string())?;
    let prefix = match p.name.as_str() {
        "cube" => "cu".to_string(),
        "dodecahedron" => "do".to_string(),
        other => format!("{other}-"),
    };
    let rows: Vec<Row> = labelings
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let c = counts(&p, l);
            Row { name: format!("{prefix}{}", k + 1), string: l.to_string(), e2: c.e2, o: c.excess }
        })
        .collect();
    json(&rows)
}

#[derive(Serialize)]
struct AndreevReport {
    admissible: bool,
    /// Violated conditions with their faces, 1-based.
    violations: Vec<(String, Vec<usize>)>,
    vertices: Vec<VertexKind>,
    edges: Vec<(usize, usize)>,
}

/// Andreev's conditions for a labeling given in the polyhedron's edge order.
#[wasm_bindgen]
pub fn andreev_check(polyhedron: &str, labels: &str, mode: &str) -> Result<String, String> {
    let p = catalog::by_name(polyhedron).map_err(|e| e.to_string())?;
    let l = CoxeterLabeling::parse(&p, labels).map_err(|e| e.to_string())?;
    let verdict = andreev::check(&p, &l, parse_mode(mode)?).map_err(|e| e.to_string())?;
    json(&AndreevReport {
        admissible: verdict.admissible,
        violations: verdict
            .violations
            .iter()
            .map(|v| (v.condition.to_string(), v.faces.iter().map(|f| f + 1).collect()))
            .collect(),
        vertices: classify_vertices(&p, &l).map_err(|e| e.to_string())?,
        edges: p.edges.iter().map(|&(a, b)| (a + 1, b + 1)).collect(),
    })
}

/// Full analysis of `cuN`, `doN`, `prismN`, or a builtin polyhedron with
/// explicit edge orders.
#[wasm_bindgen]
pub fn analyze(name: &str, labels: Option<String>) -> Result<String, String> {
    let row = match labels.as_deref().map(str::trim).filter(|s| !s.is_empty()) {
        Some(labels) => {
            let p = catalog::by_name(name).map_err(|e| e.to_string())?;
            let l = CoxeterLabeling::parse(&p, labels).map_err(|e| e.to_string())?;
            NamedRow { name: name.to_string(), polyhedron: p, labeling: l }
        }
        None => match name.strip_prefix("prism").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) => prism_row(n),
            None => lookup(name),
        }
        .map_err(|e| e.to_string())?,
    };
    let record = try_analyze_row(&row, &PipelineOptions::default(), &RealizationCache::default()).map_err(|e| e.to_string())?;
    json(&record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn enumerates_catalog_sets() {
        assert_eq!(parse(&enumerate("cube", "2,3", "compact", None).unwrap()).as_array().unwrap().len(), 34);
        let d = parse(&enumerate("dodecahedron", "2 3", "compact", Some(2)).unwrap());
        assert_eq!(d.as_array().unwrap().len(), 13);
        assert_eq!(d[12]["name"], "do13");
        assert_eq!(parse(&enumerate("cube", "2", "compact", None).unwrap()).as_array().unwrap().len(), 0);
        assert!(enumerate("cube", "2,x", "compact", None).is_err());
        assert!(enumerate("cube", "2,3", "sideways", None).is_err());
    }

    #[test]
    fn andreev_reports_violations() {
        let right = parse(&andreev_check("cube", "2 2 2 2 2 2 2 2 2 2 2 2", "compact").unwrap());
        assert_eq!(right["admissible"], false);
        assert!(right["violations"].as_array().unwrap().iter().any(|v| v[0] == "A3"));
        let ok = parse(&andreev_check("cube", "2 3 2 2 3 2 2 3 2 3 2 3", "compact").unwrap());
        assert_eq!(ok["admissible"], true);
        assert_eq!(ok["edges"].as_array().unwrap().len(), 12);
        let ideal = parse(&andreev_check("cube", "3 3 3 3 3 3 3 3 3 3 3 3", "finite-volume").unwrap());
        assert_eq!(ideal["admissible"], true);
        assert!(ideal["vertices"].as_array().unwrap().iter().all(|v| v == "ideal"));
        assert!(andreev_check("tetrahedron", "3 3 3 3 3 3", "compact").is_err());
    }

    #[test]
    fn analyzes_named_and_labelled_rows() {
        let r = parse(&analyze("cu21", None).unwrap());
        assert_eq!((r["O"].as_i64(), r["I"].as_u64(), r["A"].as_u64()), (Some(-1), Some(1), Some(1)));
        let same = parse(&analyze("cube", Some("2 3 2 2 3 2 2 3 2 3 2 3".into())).unwrap());
        assert_eq!(same["A"], r["A"]);
        let prism = parse(&analyze("prism6", None).unwrap());
        assert_eq!(prism["certification"], "exact-symmetric-family");
        assert!(analyze("cu99", None).is_err());
    }
}
