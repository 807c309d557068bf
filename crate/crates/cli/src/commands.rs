//! One function per subcommand. Each returns whatever it managed to
//! compute together with the error that stopped it, if any.

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use expspec::asymptotics::{growth_rate, track_to_boundary};
use expspec::form::{parse_rational, Rational};
use expspec::graph::{
    char_poly_direct, char_poly_multicycle, cor2_audit, perron_poly, quotient_poly, quotient_product, random_corpus,
    subdivide, DirectedGraph, RootOfUnity, DEFAULT_BUDGET,
};
use expspec::oracle::{congruent, rho_lambda, specialize, spectrum_classes};
use expspec::{
    boundary_spectrum, fixtures, io, limit_set, perron_frontier, track, track_all, zeros_in_band, Error, ParamPath,
    ParamPoint, PolyExponential, Result, TrackOpts, ZeroOpts,
};

use crate::input;
use crate::output::{Report, Table};
use crate::{Cli, Command, Global, Outcome};

/// Specializations above this degree go to the contour solver instead.
const ORACLE_MAX_DEGREE: usize = 4096;

#[derive(Args, Debug)]
pub struct PointArgs {
    /// Poly-exponential: a JSON file or a fixture name.
    #[arg(long)]
    pub poly: String,
    /// Parameter values in the order of the polynomial's `params`.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Oracle when the specialization is small enough, else contour.
    Auto,
    /// Exact specialization and polynomial roots: one row per class.
    Oracle,
    /// Argument-principle search in the band: one row per zero.
    Contour,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Half-width T of the band |Im w| ≤ T.
    #[arg(long)]
    pub band: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: Method,
}

#[derive(Args, Debug)]
pub struct TrackArgs {
    #[arg(long)]
    pub poly: String,
    /// Path JSON: {"params": [...], "breakpoints": [[...], ...], "samples": n}.
    #[arg(long, conflicts_with_all = ["from", "to"])]
    pub path: Option<String>,
    /// Start of a straight path.
    #[arg(long, requires = "to", allow_hyphen_values = true)]
    pub from: Option<String>,
    #[arg(long, requires = "from", allow_hyphen_values = true)]
    pub to: Option<String>,
    /// Track every zero with |Im w| ≤ T at the start.
    #[arg(long)]
    pub band: Option<f64>,
    /// Track a single zero `re,im` instead.
    #[arg(long, conflicts_with = "band", allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Output grid size in s (overrides the path file).
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Args, Debug)]
pub struct LimitSetArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
    pub window: String,
}

#[derive(Args, Debug)]
pub struct BoundaryArgs {
    #[arg(long)]
    pub poly: String,
    /// Boundary point p, one entry per term (`inf` drops the term).
    #[arg(long, allow_hyphen_values = true)]
    pub p: String,
    /// Reflected point q: the constant's entry first, then the other terms.
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
    /// Index of the dominant term (default: the last term).
    #[arg(long)]
    pub lead: Option<usize>,
    #[arg(long)]
    pub band: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    /// The built-in curve (−1,3,1,3) − x(−1,4,5,0) in (a,b,c,u).
    Gamma,
    /// `--base + x·--dir`.
    Linear,
}

#[derive(Args, Debug)]
pub struct GrowthArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long, value_enum, default_value = "gamma")]
    pub curve: Curve,
    #[arg(long, allow_hyphen_values = true)]
    pub base: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub dir: Option<String>,
    #[arg(long, default_value = "0.1")]
    pub x_start: String,
    #[arg(long, default_value_t = 1e-3)]
    pub x_end: f64,
    #[arg(long, default_value_t = 20)]
    pub per_decade: usize,
    /// Zero to follow (default: the rightmost class at x_start).
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Relative drift accepted when settling a rate.
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct FrontierArgs {
    /// Exponent vector.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
}

#[derive(Args, Debug)]
pub struct GraphLenArgs {
    /// Graph: a JSON file or a graph fixture name.
    #[arg(long)]
    pub graph: String,
    /// Integer edge lengths (default: the graph's own).
    #[arg(long)]
    pub lengths: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CharpolyMethod {
    Direct,
    Multicycle,
}

#[derive(Args, Debug)]
pub struct CharpolyArgs {
    #[command(flatten)]
    pub graph: GraphLenArgs,
    #[arg(long, value_enum, default_value = "direct")]
    pub method: CharpolyMethod,
}

#[derive(Args, Debug)]
pub struct PerronArgs {
    #[command(flatten)]
    pub graph: GraphLenArgs,
    /// Replace every length by its own variable l1..lE.
    #[arg(long, conflicts_with = "lengths")]
    pub symbolic: bool,
}

#[derive(Args, Debug)]
pub struct QuotientArgs {
    #[arg(long)]
    pub graph: String,
    /// Automorphism JSON file, or `swap` / `identity`.
    #[arg(long)]
    pub automorphism: String,
    /// Eigenvalue e^{2πik/n} as `k/n`.
    #[arg(long, default_value = "0/1")]
    pub lambda: String,
    /// Also check that the product over all eigenvalues is the Perron polynomial.
    #[arg(long)]
    pub product: bool,
}

#[derive(Args, Debug)]
pub struct FixturesArgs {
    #[arg(long)]
    pub list: bool,
    /// Print a fixture as JSON.
    #[arg(long)]
    pub show: Option<String>,
    /// Generate this many random graphs with integer lengths.
    #[arg(long)]
    pub corpus: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn run(cli: &Cli) -> Outcome {
    if let Err(e) = validate(&cli.global) {
        return (None, Some(e));
    }
    let g = &cli.global;
    let res = match &cli.command {
        Command::Spectrum(a) => spectrum(a, g),
        Command::Order(a) => order(a),
        Command::Track(a) => track_cmd(a, g),
        Command::LimitSet(a) => limit_set_cmd(a),
        Command::Boundary(a) => boundary(a, g),
        Command::Growth(a) => return growth(a),
        Command::Frontier(a) => frontier(a),
        Command::GraphSubdivide(a) => graph_subdivide(a),
        Command::GraphCharpoly(a) => graph_charpoly(a),
        Command::GraphPerron(a) => graph_perron(a),
        Command::GraphQuotient(a) => graph_quotient(a),
        Command::GraphAudit(a) => graph_audit(a),
        Command::Fixtures(a) => fixtures_cmd(a),
    };
    match res {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e)),
    }
}

fn validate(g: &Global) -> Result<()> {
    for (name, v) in [
        ("--tol-residual", g.tol_residual),
        ("--tol-cluster", g.tol_cluster),
        ("--tol-boundary", g.tol_boundary),
        ("--tol-match", g.tol_match),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Invalid(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}

fn zero_opts(g: &Global) -> ZeroOpts {
    ZeroOpts {
        cluster_tol: g.tol_cluster,
        residual_tol: g.tol_residual,
        boundary_tol: g.tol_boundary,
        ..ZeroOpts::default()
    }
}

fn band_ok(t: f64) -> Result<f64> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::Invalid(format!("band half-width must be positive, got {t}")))
    }
}

fn loaded(a: &PointArgs) -> Result<(PolyExponential, ParamPoint)> {
    let q = input::poly(&a.poly)?;
    let pt = input::point(&a.at, q.params())?;
    Ok((q, pt))
}

fn spectrum(a: &SpectrumArgs, g: &Global) -> Result<Report> {
    let (q, pt) = loaded(&a.point)?;
    let band = a.band.map(band_ok).transpose()?;
    let method = match a.method {
        Method::Auto => match specialize(&q, &pt) {
            Ok(p) if p.degree() <= ORACLE_MAX_DEGREE => Method::Oracle,
            Ok(_) if band.is_some() => Method::Contour,
            Ok(p) => return Err(Error::Invalid(format!("degree {} is large; give --band for the contour solver", p.degree()))),
            Err(e) => return Err(e),
        },
        m => m,
    };
    let mut t = Table::new(&["re", "im", "multiplicity", "residual", "class_id"]);
    if method == Method::Oracle {
        for (id, c) in spectrum_classes(&q, &pt)?.iter().enumerate() {
            if band.is_none_or(|b| c.w.im.abs() <= b) {
                t.push(vec![json!(c.w.re), json!(snap(c.w.im)), json!(c.multiplicity), json!(c.residual), json!(id)]);
            }
        }
        return Ok(Report::table(t));
    }
    let band = band.ok_or_else(|| Error::Invalid("the contour solver needs --band".into()))?;
    let qc = q.instantiate(&pt)?;
    // Classes identify zeros with equal e^{ℓᵢw} for every parameter ℓᵢ.
    let l = pt.values().to_vec();
    let zs = zeros_in_band(&qc, band, &zero_opts(g))?;
    let mut reps: Vec<Complex64> = Vec::new();
    for z in &zs {
        let id = match reps.iter().position(|r| congruent(*r, z.w, &l, g.tol_match)) {
            Some(i) => i,
            None => {
                reps.push(z.w);
                reps.len() - 1
            }
        };
        t.push(vec![json!(z.w.re), json!(snap(z.w.im)), json!(z.multiplicity), json!(z.residual), json!(id)]);
    }
    Ok(Report::table(t))
}

/// Imaginary parts of real zeros come out as rounding dust like 1e-45.
fn snap(x: f64) -> f64 {
    if x.abs() < 1e-20 { 0.0 } else { x }
}

fn order(a: &PointArgs) -> Result<Report> {
    let (q, pt) = loaded(a)?;
    let s = rho_lambda(&q, &pt)?;
    let mut t = Table::new(&["i", "lambda", "rho"]);
    for i in 1..=s.len() {
        t.push(vec![json!(i), json!(s.lambda(i)?), json!(s.rho(i)?)]);
    }
    Ok(Report::table(t))
}

fn complex(list: &str) -> Result<Complex64> {
    match input::floats(list)?.as_slice() {
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(Error::Invalid(format!("`{list}` is not `re,im`"))),
    }
}

fn track_cmd(a: &TrackArgs, g: &Global) -> Result<Report> {
    let q = input::poly(&a.poly)?;
    let names = q.params().to_vec();
    let (path, file_samples) = match (&a.path, &a.from, &a.to) {
        (Some(p), _, _) => input::path_file(p, &names)?,
        (None, Some(f), Some(t)) => (ParamPath::segment(&input::point(f, &names)?, &input::point(t, &names)?)?, 0),
        _ => return Err(Error::Invalid("give --path or --from/--to".into())),
    };
    let opts = TrackOpts {
        samples: a.samples.unwrap_or(file_samples),
        residual_tol: g.tol_residual.max(1e-9),
        ..TrackOpts::default()
    };
    let trajectories = match (&a.start, a.band) {
        (Some(s), _) => vec![track(&q, &path, complex(s)?, &opts)?],
        (None, Some(b)) => track_all(&q, &path, band_ok(b)?, &opts)?,
        (None, None) => return Err(Error::Invalid("give --band or --start".into())),
    };
    let mut t = Table::new(&["trajectory", "s", "re", "im", "residual", "status"]);
    for (i, tr) in trajectories.iter().enumerate() {
        for s in &tr.samples {
            t.push(vec![json!(i), json!(s.s), json!(s.w.re), json!(snap(s.w.im)), json!(s.residual), json!(tr.status.to_string())]);
        }
    }
    let doc = serde_json::to_value(&trajectories).map_err(|e| Error::Numeric(e.to_string()))?;
    Ok(Report::table(t).with_document(doc))
}

fn limit_set_cmd(a: &LimitSetArgs) -> Result<Report> {
    let (q, pt) = loaded(&a.point)?;
    let s = limit_set(&q, &pt, input::window(&a.window)?)?;
    let mut t = Table::new(&["lo", "hi"]);
    for (lo, hi) in s.intervals() {
        t.push(vec![json!(lo), json!(hi)]);
    }
    Ok(Report::table(t))
}

fn boundary(a: &BoundaryArgs, g: &Global) -> Result<Report> {
    let q = input::poly(&a.poly)?;
    let coeffs: Vec<f64> = q.terms().iter().map(|t| t.0).collect();
    let lead = a.lead.unwrap_or(coeffs.len().saturating_sub(1));
    let p = input::extended(&a.p)?;
    let qq = input::extended(&a.q)?;
    let b = boundary_spectrum(q.a0(), &coeffs, lead, &p, &qq, band_ok(a.band)?, &zero_opts(g))?;
    let mut t = Table::new(&["side", "re", "im", "multiplicity"]);
    for (side, zs) in [("left", &b.left), ("right", &b.right), ("axis", &b.axis)] {
        for z in zs {
            t.push(vec![json!(side), json!(z.w.re), json!(snap(z.w.im)), json!(z.multiplicity)]);
        }
    }
    let doc = serde_json::to_value(&b).map_err(|e| Error::Numeric(e.to_string()))?;
    Ok(Report::table(t).with_document(doc))
}

fn growth(a: &GrowthArgs) -> Outcome {
    match growth_inner(a) {
        Ok(r) => (Some(r), None),
        Err((partial, e)) => (partial, Some(e)),
    }
}

type Partial = (Option<Report>, Error);

fn growth_inner(a: &GrowthArgs) -> std::result::Result<Report, Partial> {
    let fail = |e: Error| (None, e);
    let q = input::poly(&a.poly).map_err(fail)?;
    let names = q.params().to_vec();
    let x0 = parse_rational(&a.x_start).map_err(fail)?;
    let x0f = expspec::form::rat_to_f64(&x0);
    let (exact, curve): (ParamPoint, Box<dyn Fn(f64) -> ParamPoint>) = match a.curve {
        Curve::Gamma => {
            if names != ["a", "b", "c", "u"] {
                return Err(fail(Error::Invalid("the gamma curve needs parameters (a, b, c, u)".into())));
            }
            (fixtures::gamma_exact(&x0), Box::new(fixtures::gamma))
        }
        Curve::Linear => {
            let (Some(b), Some(d)) = (&a.base, &a.dir) else {
                return Err(fail(Error::Invalid("the linear curve needs --base and --dir".into())));
            };
            let rats = |s: &str| -> Result<Vec<Rational>> { s.split(',').map(|x| parse_rational(x.trim())).collect() };
            let (b, d) = (rats(b).map_err(fail)?, rats(d).map_err(fail)?);
            if b.len() != names.len() || d.len() != names.len() {
                return Err(fail(Error::Invalid(format!("--base and --dir need {} entries", names.len()))));
            }
            let pt: Vec<Rational> = b.iter().zip(&d).map(|(b, d)| b + d * &x0).collect();
            let exact = ParamPoint::from_rationals(&names, &pt).map_err(fail)?;
            let bf: Vec<f64> = b.iter().map(expspec::form::rat_to_f64).collect();
            let df: Vec<f64> = d.iter().map(expspec::form::rat_to_f64).collect();
            let n2 = names.clone();
            let curve = move |x: f64| {
                let v: Vec<f64> = bf.iter().zip(&df).map(|(b, d)| b + d * x).collect();
                ParamPoint::from_f64(&n2, &v).expect("matching lengths")
            };
            (exact, Box::new(curve))
        }
    };
    let w0 = match &a.start {
        Some(s) => complex(s).map_err(fail)?,
        None => spectrum_classes(&q, &exact)
            .map_err(fail)?
            .iter()
            .max_by(|x, y| x.w.re.total_cmp(&y.w.re))
            .map(|c| c.w)
            .ok_or_else(|| fail(Error::EmptySpectrum))?,
    };
    let (_, samples) =
        track_to_boundary(&q, curve, x0f, a.x_end, a.per_decade, w0, &TrackOpts::default()).map_err(fail)?;
    let mut t = Table::new(&["x", "re", "im", "min_l", "min_lbar"]);
    for s in &samples {
        t.push(vec![json!(s.x), json!(s.psi.re), json!(snap(s.psi.im)), json!(s.min_l), json!(s.min_lbar)]);
    }
    match growth_rate(samples, a.tol) {
        Ok(c) => {
            let doc = serde_json::to_value(&c).map_err(|e| fail(Error::Numeric(e.to_string())))?;
            let mut summary = Table::new(&["kind", "lambda", "drift"]);
            summary.push(vec![serde_json::to_value(c.kind).unwrap_or(Value::Null), json!(c.lambda), json!(c.drift)]);
            Ok(Report::table(summary).with_document(doc))
        }
        Err(e) => Err((Some(Report::table(t)), e)),
    }
}

fn frontier(a: &FrontierArgs) -> Result<Report> {
    let l = input::floats(&a.at)?;
    let w = perron_frontier(&l)?;
    let mut t = Table::new(&["omega"]);
    t.push(vec![json!(w)]);
    Ok(Report::table(t))
}

fn graph_lengths(a: &GraphLenArgs) -> Result<(DirectedGraph, Vec<u64>)> {
    let g = input::graph(&a.graph)?;
    let lens = match &a.lengths {
        Some(l) => input::lengths(l)?,
        None => g.integer_lengths()?,
    };
    if lens.len() != g.edge_count() {
        return Err(Error::Invalid(format!("{} lengths for {} edges", lens.len(), g.edge_count())));
    }
    Ok((g, lens))
}

fn graph_subdivide(a: &GraphLenArgs) -> Result<Report> {
    let (g, lens) = graph_lengths(a)?;
    let s = subdivide(&g, &lens)?;
    let mut t = Table::new(&["edge", "src", "dst"]);
    for e in s.edges() {
        t.push(vec![json!(e.id), json!(s.vertices()[e.src]), json!(s.vertices()[e.dst])]);
    }
    let doc: Value = serde_json::from_str(&io::graph_to_json(&s)).map_err(|e| Error::Numeric(e.to_string()))?;
    Ok(Report::table(t).with_document(doc))
}

fn poly_table(s: String) -> Report {
    let mut t = Table::new(&["polynomial"]);
    t.push(vec![json!(s)]);
    Report::table(t)
}

fn graph_charpoly(a: &CharpolyArgs) -> Result<Report> {
    let (g, lens) = graph_lengths(&a.graph)?;
    let p = match a.method {
        CharpolyMethod::Direct => char_poly_direct(&subdivide(&g, &lens)?),
        CharpolyMethod::Multicycle => char_poly_multicycle(&g, &lens, DEFAULT_BUDGET)?,
    };
    Ok(poly_table(p.to_string()))
}

fn graph_perron(a: &PerronArgs) -> Result<Report> {
    let g = input::graph(&a.graph.graph)?;
    let p = match (&a.graph.lengths, a.symbolic) {
        (Some(l), _) => perron_poly(&g.with_lengths(&input::lengths(l)?)?).to_zpoly(&[], &[])?.to_string(),
        (None, true) => perron_poly(&g.with_symbolic_lengths()).to_string(),
        (None, false) => perron_poly(&g).to_string(),
    };
    Ok(poly_table(p))
}

fn graph_quotient(a: &QuotientArgs) -> Result<Report> {
    let g = input::graph(&a.graph)?;
    let t = input::automorphism(&a.automorphism, &g)?;
    let (k, n) = a
        .lambda
        .split_once('/')
        .and_then(|(k, n)| Some((k.trim().parse::<usize>().ok()?, n.trim().parse::<usize>().ok()?)))
        .ok_or_else(|| Error::Parse(format!("--lambda `{}` is not `k/n`", a.lambda)))?;
    let p = quotient_poly(&g, &t, RootOfUnity::new(k, n)?)?;
    let mut table = Table::new(&["polynomial", "product_matches"]);
    let matches = if a.product {
        let full = expspec::graph::perron::to_cyclo(&perron_poly(&g));
        json!(quotient_product(&g, &t)? == full)
    } else {
        Value::Null
    };
    table.push(vec![json!(p.to_string()), matches]);
    Ok(Report::table(table))
}

fn graph_audit(a: &GraphLenArgs) -> Result<Report> {
    let (g, lens) = graph_lengths(a)?;
    let r = cor2_audit(&g, &lens)?;
    let doc = serde_json::to_value(&r).map_err(|e| Error::Numeric(e.to_string()))?;
    let mut t = Table::new(&["key", "value"]);
    if let Value::Object(m) = &doc {
        for (k, v) in m {
            let v = match v {
                Value::Array(_) => json!(v.to_string()),
                other => other.clone(),
            };
            t.push(vec![json!(k), v]);
        }
    }
    Ok(Report::table(t).with_document(doc))
}

fn fixtures_cmd(a: &FixturesArgs) -> Result<Report> {
    if let Some(n) = a.corpus {
        let graphs = random_corpus(a.seed, n, 5, 10, 4);
        let mut t = Table::new(&["index", "vertices", "edges", "lengths"]);
        let mut doc = Vec::new();
        for (i, (g, lens)) in graphs.iter().enumerate() {
            let ls: Vec<String> = lens.iter().map(u64::to_string).collect();
            t.push(vec![json!(i), json!(g.vertex_count()), json!(g.edge_count()), json!(ls.join(" "))]);
            let gj: Value = serde_json::from_str(&io::graph_to_json(g)).map_err(|e| Error::Numeric(e.to_string()))?;
            doc.push(json!({"graph": gj, "lengths": lens}));
        }
        return Ok(Report::table(t).with_document(Value::Array(doc)));
    }
    if let Some(name) = &a.show {
        let text = match fixtures::by_name(name) {
            Some(q) => io::poly_to_json(&q),
            None => io::graph_to_json(&input::graph(name)?),
        };
        let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Numeric(e.to_string()))?;
        return Ok(Report::default().with_document(doc));
    }
    if !a.list {
        return Err(Error::Invalid("give --list, --show NAME or --corpus N".into()));
    }
    let mut t = Table::new(&["name"]);
    for n in fixtures::NAMES {
        t.push(vec![json!(n)]);
    }
    Ok(Report::table(t))
}
