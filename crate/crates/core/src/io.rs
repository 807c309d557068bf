//! JSON formats for poly-exponentials, graphs, automorphisms and paths.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use num_traits::ToPrimitive;
use serde_json::Value;

use crate::continuation::ParamPath;
use crate::error::{Error, Result};
use crate::form::{format_rational, parse_rational, rat_from_f64, LinearForm, Rational};
use crate::graph::{DirectedGraph, GraphAutomorphism};
use crate::polyexp::PolyExponential;

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// A rational given as `"p/q"`, a decimal string or a JSON number.
fn rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                rat_from_f64(n.as_f64().unwrap_or(f64::NAN))
            }
        }
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

#[derive(Serialize, Deserialize)]
struct PolyTermJson {
    coeff: f64,
    exponent: BTreeMap<String, Value>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    a0: f64,
    params: Vec<String>,
    terms: Vec<PolyTermJson>,
}

pub fn poly_from_json(text: &str) -> Result<PolyExponential> {
    let raw: PolyJson = serde_json::from_str(text).map_err(parse_err)?;
    let mut terms = Vec::with_capacity(raw.terms.len());
    for t in raw.terms {
        let mut constant = Rational::from_integer(0.into());
        let mut coeffs = Vec::new();
        for (k, v) in &t.exponent {
            let r = rational_value(v)?;
            if k == "const" {
                constant = r;
            } else {
                coeffs.push((k.clone(), r));
            }
        }
        terms.push((t.coeff, LinearForm::from_terms(coeffs, constant)));
    }
    PolyExponential::new(raw.a0, terms, raw.params)
}

pub fn poly_to_json(q: &PolyExponential) -> String {
    let terms = q
        .terms()
        .iter()
        .map(|(c, f)| {
            let mut exponent: BTreeMap<String, Value> =
                f.coeffs().map(|(k, r)| (k.to_string(), Value::String(format_rational(r)))).collect();
            if !num_traits::Zero::is_zero(f.constant_term()) {
                exponent.insert("const".into(), Value::String(format_rational(f.constant_term())));
            }
            PolyTermJson { coeff: *c, exponent }
        })
        .collect();
    let j = PolyJson { a0: q.a0(), params: q.params().to_vec(), terms };
    serde_json::to_string_pretty(&j).expect("serializable")
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    src: String,
    dst: String,
    len: Value,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
}

/// Edge lengths are integers or linear forms such as `"l3"` or `"2a + 1"`.
pub fn graph_from_json(text: &str) -> Result<DirectedGraph> {
    let raw: GraphJson = serde_json::from_str(text).map_err(parse_err)?;
    let edges = raw
        .edges
        .into_iter()
        .map(|e| {
            let len = match &e.len {
                Value::String(s) => LinearForm::parse(s)?,
                v => LinearForm::constant(rational_value(v)?),
            };
            Ok((e.id, e.src, e.dst, len))
        })
        .collect::<Result<Vec<_>>>()?;
    DirectedGraph::new(raw.vertices, edges)
}

pub fn graph_to_json(g: &DirectedGraph) -> String {
    let edges = g
        .edges()
        .iter()
        .map(|e| {
            let int = e.len.constant_term().to_integer().to_i64();
            let len = match int {
                Some(n) if e.len.is_constant() && e.len.constant_term().is_integer() => Value::from(n),
                _ => Value::String(e.len.to_string()),
            };
            EdgeJson { id: e.id.clone(), src: g.vertices()[e.src].clone(), dst: g.vertices()[e.dst].clone(), len }
        })
        .collect();
    serde_json::to_string_pretty(&GraphJson { vertices: g.vertices().to_vec(), edges }).expect("serializable")
}

#[derive(Deserialize)]
struct AutomorphismJson {
    #[serde(default)]
    vertices: BTreeMap<String, String>,
    #[serde(default)]
    edges: BTreeMap<String, String>,
}

/// `{"vertices": {"a": "b", …}, "edges": {"ab": "ba", …}}`; unlisted
/// vertices and edges are fixed.
pub fn automorphism_from_json(text: &str, g: &DirectedGraph) -> Result<GraphAutomorphism> {
    let raw: AutomorphismJson = serde_json::from_str(text).map_err(parse_err)?;
    let v: Vec<(String, String)> = raw.vertices.into_iter().collect();
    let e: Vec<(String, String)> = raw.edges.into_iter().collect();
    GraphAutomorphism::from_names(g, &v, &e)
}

#[derive(Deserialize)]
struct PathJson {
    #[serde(default)]
    params: Option<Vec<String>>,
    breakpoints: Vec<Vec<f64>>,
    #[serde(default)]
    samples: usize,
}

/// Returns the path and its requested sample count. Coordinates follow
/// `params` when given, else `default_names`.
pub fn path_from_json(text: &str, default_names: &[String]) -> Result<(ParamPath, usize)> {
    let raw: PathJson = serde_json::from_str(text).map_err(parse_err)?;
    let names = raw.params.unwrap_or_else(|| default_names.to_vec());
    Ok((ParamPath::new(names, raw.breakpoints)?, raw.samples))
}
