//! Built-in inputs: worked examples used by tests, the CLI and the
//! acceptance suite.

use crate::form::{rat_int, LinearForm, Rational};
use crate::graph::{DirectedGraph, GraphAutomorphism};
use crate::polyexp::{ParamPoint, PolyExponential};

/// Names accepted by `fixture`.
pub const NAMES: [&str; 3] = ["example1", "example2-teichmuller", "theorem2-family"];

fn form(s: &str) -> LinearForm {
    LinearForm::parse(s).expect("fixture form parses")
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Perron poly-exponential of the two-vertex graph with three edges each
/// way and a loop at each vertex, over lengths `l1..l8`:
/// `e^{(l7+l8)w} − Σ_{i≤3<j≤6} e^{(li+lj)w} − e^{l7 w} − e^{l8 w} + 1`.
pub fn example1() -> PolyExponential {
    let mut terms = vec![(1.0, form("l7 + l8"))];
    for i in 1..=3 {
        for j in 4..=6 {
            terms.push((-1.0, form(&format!("l{i} + l{j}"))));
        }
    }
    terms.push((-1.0, form("l7")));
    terms.push((-1.0, form("l8")));
    let params = (1..=8).map(|i| format!("l{i}")).collect();
    PolyExponential::new(1.0, terms, params).expect("valid fixture")
}

/// Edges `e1..e3: u→v`, `e4..e6: v→u`, loops `e7` at `u` and `e8` at `v`,
/// with symbolic lengths `l1..l8`.
pub fn example1_graph() -> DirectedGraph {
    let mut edges = Vec::new();
    for i in 1..=3 {
        edges.push((format!("e{i}"), "u".into(), "v".into(), LinearForm::var(&format!("l{i}"))));
    }
    for i in 4..=6 {
        edges.push((format!("e{i}"), "v".into(), "u".into(), LinearForm::var(&format!("l{i}"))));
    }
    edges.push(("e7".into(), "u".into(), "u".into(), LinearForm::var("l7")));
    edges.push(("e8".into(), "v".into(), "v".into(), LinearForm::var("l8")));
    DirectedGraph::new(names(&["u", "v"]), edges).expect("valid fixture")
}

pub fn example1_point() -> ParamPoint {
    ParamPoint::plain(&[1, 1, 1, 1, 1, 1, 2, 2].map(rat_int))
}

pub fn example1_point_prime() -> ParamPoint {
    ParamPoint::plain(&[4, 4, 4, 5, 5, 5, 6, 6].map(rat_int))
}

/// Two vertices, three parallel edges each way, unit lengths.
pub fn bipartite_3x3() -> DirectedGraph {
    let mut pairs = vec![(0, 1); 3];
    pairs.extend([(1, 0); 3]);
    DirectedGraph::from_pairs(2, &pairs)
}

/// `a ⇄ b` with both edges of length `L`, and the swap automorphism.
pub fn two_cycle_swap() -> (DirectedGraph, GraphAutomorphism) {
    let l = LinearForm::var("L");
    let g = DirectedGraph::new(
        names(&["a", "b"]),
        vec![
            ("ab".into(), "a".into(), "b".into(), l.clone()),
            ("ba".into(), "b".into(), "a".into(), l),
        ],
    )
    .expect("valid fixture");
    let t = GraphAutomorphism { vperm: vec![1, 0], eperm: vec![1, 0] };
    (g, t)
}

/// The 22-monomial fibered-face polynomial in `(a, b, c, u)`, transcribed
/// term by term; identical monomials with opposite signs cancel on
/// construction.
pub fn example2_teichmuller() -> PolyExponential {
    let mut terms = vec![
        (1.0, form("2u - a + 2b + 3c")),
        (1.0, form("u - a - b")),
        (1.0, form("u + 3b + 3c")),
        (1.0, form("u - a + 3b + 4c")),
        (1.0, form("u + 3b + 4c")),
    ];
    for i in 1..=4i64 {
        let (p, q) = (i - 1, i);
        terms.push((-1.0, form(&format!("u - a + {p}b + {q}c"))));
        terms.push((-1.0, form(&format!("u + {p}b + {q}c"))));
        terms.push((-1.0, form(&format!("u - a + {p}b + {p}c"))));
        terms.push((-1.0, form(&format!("u + {p}b + {p}c"))));
    }
    PolyExponential::new(1.0, terms, names(&["a", "b", "c", "u"])).expect("valid fixture")
}

/// Number of monomials in the transcription before cancellation.
pub const EXAMPLE2_MONOMIALS: usize = 22;

/// The curve `γ(x) = (−1, 3, 1, 3) − x(−1, 4, 5, 0)` in `(a, b, c, u)`.
pub fn gamma(x: f64) -> ParamPoint {
    ParamPoint::from_f64(&names(&["a", "b", "c", "u"]), &[-1.0 + x, 3.0 - 4.0 * x, 1.0 - 5.0 * x, 3.0])
        .expect("four coordinates")
}

pub fn gamma_exact(x: &Rational) -> ParamPoint {
    let v = [
        rat_int(-1) + x,
        rat_int(3) - rat_int(4) * x,
        rat_int(1) - rat_int(5) * x,
        rat_int(3),
    ];
    ParamPoint::from_rationals(&names(&["a", "b", "c", "u"]), &v).expect("four coordinates")
}

/// `−1 + Σ_{i≤m} e^{lᵢ w}`.
pub fn theorem2_family(m: usize) -> PolyExponential {
    PolyExponential::plain(-1.0, &vec![1.0; m]).expect("valid fixture")
}

/// The one-orbit quotient `1 − e^{l1 w} + e^{l9 w} + e^{l11 w} − e^{l8 w}`.
pub fn example3_quotient() -> PolyExponential {
    PolyExponential::new(
        1.0,
        vec![
            (-1.0, form("l1")),
            (1.0, form("l9")),
            (1.0, form("l11")),
            (-1.0, form("l8")),
        ],
        names(&["l1", "l8", "l9", "l11"]),
    )
    .expect("valid fixture")
}

/// Poly-exponential fixture by name.
pub fn by_name(name: &str) -> Option<PolyExponential> {
    match name {
        "example1" => Some(example1()),
        "example2-teichmuller" => Some(example2_teichmuller()),
        "theorem2-family" => Some(theorem2_family(3)),
        "example3-quotient" => Some(example3_quotient()),
        _ => None,
    }
}
