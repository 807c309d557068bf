//! Loading polynomials, graphs and parameter points from files, fixture
//! names or command-line lists.

use std::fs;
use std::path::Path;

use expspec::form::parse_rational;
use expspec::graph::{DirectedGraph, GraphAutomorphism};
use expspec::{fixtures, io, Error, ExtendedParam, ParamPoint, PolyExponential, Result};

pub const GRAPH_FIXTURES: [&str; 3] = ["example1-graph", "bipartite-3x3", "two-cycle-swap"];

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {path}: {e}")))
}

/// A JSON file, or a fixture name when no such file exists.
pub fn poly(arg: &str) -> Result<PolyExponential> {
    if Path::new(arg).exists() {
        return io::poly_from_json(&read(arg)?);
    }
    fixtures::by_name(arg).ok_or_else(|| Error::Invalid(format!("no file or fixture named `{arg}`")))
}

pub fn graph(arg: &str) -> Result<DirectedGraph> {
    if Path::new(arg).exists() {
        return io::graph_from_json(&read(arg)?);
    }
    match arg {
        "example1-graph" => Ok(fixtures::example1_graph()),
        "bipartite-3x3" => Ok(fixtures::bipartite_3x3()),
        "two-cycle-swap" => Ok(fixtures::two_cycle_swap().0),
        _ => Err(Error::Invalid(format!(
            "no file or graph fixture named `{arg}` (fixtures: {})",
            GRAPH_FIXTURES.join(", ")
        ))),
    }
}

/// `swap` is the built-in automorphism of `two-cycle-swap`.
pub fn automorphism(arg: &str, g: &DirectedGraph) -> Result<GraphAutomorphism> {
    if Path::new(arg).exists() {
        return io::automorphism_from_json(&read(arg)?, g);
    }
    match arg {
        "swap" => Ok(fixtures::two_cycle_swap().1),
        "identity" => Ok(GraphAutomorphism::identity(g)),
        _ => Err(Error::Invalid(format!("no file or automorphism named `{arg}`"))),
    }
}

fn split(list: &str) -> impl Iterator<Item = &str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Comma-separated rationals, in the order of `names`.
pub fn point(list: &str, names: &[String]) -> Result<ParamPoint> {
    let values = split(list).map(parse_rational).collect::<Result<Vec<_>>>()?;
    ParamPoint::from_rationals(names, &values)
}

pub fn floats(list: &str) -> Result<Vec<f64>> {
    split(list)
        .map(|s| s.parse::<f64>().map_err(|_| Error::Parse(format!("`{s}` is not a number"))))
        .collect()
}

pub fn lengths(list: &str) -> Result<Vec<u64>> {
    split(list)
        .map(|s| s.parse::<u64>().map_err(|_| Error::Parse(format!("`{s}` is not a nonnegative integer"))))
        .collect()
}

pub fn extended(list: &str) -> Result<ExtendedParam> {
    ExtendedParam::parse(list)
}

pub fn window(list: &str) -> Result<(f64, f64)> {
    match floats(list)?.as_slice() {
        [a, b] if a < b => Ok((*a, *b)),
        _ => Err(Error::Invalid(format!("window `{list}` must be two increasing numbers"))),
    }
}

pub fn path_file(arg: &str, names: &[String]) -> Result<(expspec::ParamPath, usize)> {
    io::path_from_json(&read(arg)?, names)
}
