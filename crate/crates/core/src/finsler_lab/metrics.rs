//! Finsler metrics on coordinate charts: constant norms, Riemannian matrix
//! fields, Randers fields and free-form expressions, plus a small catalog.

use std::sync::Arc;

use evalexpr::{ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node, Value};
use nalgebra::DMatrix;
use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use super::norms::{quad_form, MinkowskiNorm};
use super::FinslerError;

pub trait ChartMetric: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64], y: &[f64]) -> f64;
    fn contains(&self, _x: &[f64]) -> bool {
        true
    }
}

/// `F(x, ·)` at a fixed point.
pub struct AtPoint<'a> {
    pub metric: &'a dyn ChartMetric,
    pub x: Vec<f64>,
}

impl MinkowskiNorm for AtPoint<'_> {
    fn dim(&self) -> usize {
        self.metric.dim()
    }
    fn eval(&self, y: &[f64]) -> f64 {
        self.metric.eval(&self.x, y)
    }
}

/// A locally Minkowski metric: the same norm at every point.
pub struct Constant(pub Box<dyn MinkowskiNorm>);

impl ChartMetric for Constant {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, _x: &[f64], y: &[f64]) -> f64 {
        self.0.eval(y)
    }
}

type MatrixField = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
type VectorField = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type Domain = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// `√(yᵀ g(x) y)`.
#[derive(Clone)]
pub struct Riemannian {
    pub n: usize,
    pub g: MatrixField,
    pub domain: Domain,
}

impl ChartMetric for Riemannian {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        quad_form(&(self.g)(x), y).sqrt()
    }
    fn contains(&self, x: &[f64]) -> bool {
        (self.domain)(x)
    }
}

/// `√(yᵀ a(x) y) + ⟨b(x), y⟩`.
#[derive(Clone)]
pub struct RandersField {
    pub n: usize,
    pub a: MatrixField,
    pub b: VectorField,
    pub domain: Domain,
}

impl ChartMetric for RandersField {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let b = (self.b)(x);
        quad_form(&(self.a)(x), y).sqrt() + b.iter().zip(y).map(|(b, y)| b * y).sum::<f64>()
    }
    fn contains(&self, x: &[f64]) -> bool {
        (self.domain)(x)
    }
}

/// A compiled arithmetic expression in `x1..xn` and `y1..yn`. Bare function
/// names (`sin`, `sqrt`, …) and `pi` are accepted; integer literals are read
/// as floats.
#[derive(Clone)]
pub struct Expr {
    pub source: String,
    node: Node<DefaultNumericTypes>,
}

const FUNCTIONS: [&str; 16] = [
    "sin", "cos", "tan", "asin", "acos", "atan", "sinh", "cosh", "tanh", "sqrt", "cbrt", "exp", "ln", "abs",
    "hypot", "atan2",
];

impl Expr {
    pub fn parse(source: &str) -> Result<Expr, FinslerError> {
        let tok = Regex::new(r"[A-Za-z_][A-Za-z0-9_:]*|\d+\.?\d*(?:[eE][+-]?\d+)?").expect("static regex");
        let mut out = String::new();
        let mut last = 0;
        for m in tok.find_iter(source) {
            out.push_str(&source[last..m.start()]);
            let t = m.as_str();
            let rest = source[m.end()..].trim_start();
            if t.starts_with(|c: char| c.is_ascii_digit()) {
                out.push_str(t);
                if !t.contains(['.', 'e', 'E']) {
                    out.push_str(".0");
                }
            } else if t == "pi" {
                out.push_str(&format!("{:.17}", std::f64::consts::PI));
            } else if FUNCTIONS.contains(&t) && rest.starts_with('(') {
                out.push_str("math::");
                out.push_str(t);
            } else {
                out.push_str(t);
            }
            last = m.end();
        }
        out.push_str(&source[last..]);
        let node = evalexpr::build_operator_tree::<DefaultNumericTypes>(&out)
            .map_err(|e| FinslerError::Expression(format!("{source}: {e}")))?;
        Ok(Expr {
            source: source.to_string(),
            node,
        })
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
        for (prefix, vals) in [("x", x), ("y", y)] {
            for (i, v) in vals.iter().enumerate() {
                let _ = ctx.set_value(format!("{prefix}{}", i + 1), Value::Float(*v));
            }
        }
        self.node.eval_number_with_context(&ctx).unwrap_or(f64::NAN)
    }
}

pub struct ExpressionMetric {
    pub n: usize,
    pub f: Expr,
}

impl ChartMetric for ExpressionMetric {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.f.eval(x, y)
    }
}

/// JSON metric description `{dimension, kind, parameters}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricSpec {
    pub dimension: usize,
    pub kind: MetricKind,
    #[serde(default)]
    pub parameters: Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    RiemannianMatrixField,
    Randers,
    CustomExpression,
}

fn entry(v: &Json) -> Result<Expr, FinslerError> {
    match v {
        Json::Number(n) => Expr::parse(&n.to_string()),
        Json::String(s) => Expr::parse(s),
        _ => Err(FinslerError::Spec(format!("expected number or expression, got {v}"))),
    }
}

fn matrix_field(v: &Json, n: usize) -> Result<MatrixField, FinslerError> {
    let rows = v
        .as_array()
        .filter(|r| r.len() == n)
        .ok_or_else(|| FinslerError::Spec(format!("expected a {n}×{n} matrix")))?;
    let mut es = Vec::with_capacity(n * n);
    for r in rows {
        let r = r
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| FinslerError::Spec(format!("expected a {n}×{n} matrix")))?;
        for e in r {
            es.push(entry(e)?);
        }
    }
    Ok(Arc::new(move |x: &[f64]| DMatrix::from_fn(n, n, |i, j| es[i * n + j].eval(x, &[]))))
}

fn vector_field(v: &Json, n: usize) -> Result<VectorField, FinslerError> {
    let es: Vec<Expr> = v
        .as_array()
        .filter(|r| r.len() == n)
        .ok_or_else(|| FinslerError::Spec(format!("expected a vector of length {n}")))?
        .iter()
        .map(entry)
        .collect::<Result<_, _>>()?;
    Ok(Arc::new(move |x: &[f64]| es.iter().map(|e| e.eval(x, &[])).collect()))
}

fn everywhere() -> Domain {
    Arc::new(|_: &[f64]| true)
}

impl MetricSpec {
    pub fn build(&self) -> Result<Box<dyn ChartMetric>, FinslerError> {
        let n = self.dimension;
        if n == 0 {
            return Err(FinslerError::Spec("dimension must be positive".into()));
        }
        let p = &self.parameters;
        let field = |k: &str| p.get(k).ok_or_else(|| FinslerError::Spec(format!("missing parameter {k}")));
        Ok(match self.kind {
            MetricKind::RiemannianMatrixField => Box::new(Riemannian {
                n,
                g: matrix_field(field("g")?, n)?,
                domain: everywhere(),
            }),
            MetricKind::Randers => {
                let a = match p.get("a") {
                    Some(a) => matrix_field(a, n)?,
                    None => Arc::new(move |_: &[f64]| DMatrix::identity(n, n)),
                };
                Box::new(RandersField {
                    n,
                    a,
                    b: vector_field(field("b")?, n)?,
                    domain: everywhere(),
                })
            }
            MetricKind::CustomExpression => {
                let f = field("F")?
                    .as_str()
                    .ok_or_else(|| FinslerError::Spec("F must be an expression string".into()))?;
                Box::new(ExpressionMetric { n, f: Expr::parse(f)? })
            }
        })
    }
}

pub fn parse_metric_json(text: &str) -> Result<Box<dyn ChartMetric>, FinslerError> {
    let spec: MetricSpec = serde_json::from_str(text).map_err(|e| FinslerError::Spec(e.to_string()))?;
    spec.build()
}

fn diag_field(f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> MatrixField {
    Arc::new(move |x: &[f64]| DMatrix::from_diagonal(&nalgebra::DVector::from_vec(f(x))))
}

/// Unit sphere in polar coordinates `(θ, φ)`, `θ ∈ (0, π)`, scaled by `r`.
pub fn round_sphere(r: f64) -> Riemannian {
    let r2 = r * r;
    Riemannian {
        n: 2,
        g: diag_field(move |x| vec![r2, r2 * x[0].sin().powi(2)]),
        domain: Arc::new(|x: &[f64]| x[0] > 0.0 && x[0] < std::f64::consts::PI),
    }
}

/// Upper half-plane `(dx² + dy²)/y²`.
pub fn poincare_half_plane() -> Riemannian {
    Riemannian {
        n: 2,
        g: diag_field(|x| vec![1.0 / (x[1] * x[1]); 2]),
        domain: Arc::new(|x: &[f64]| x[1] > 0.0),
    }
}

/// `S² × ℝ` with the product metric, coordinates `(θ, φ, t)`.
pub fn sphere_times_line() -> Riemannian {
    Riemannian {
        n: 3,
        g: diag_field(|x| vec![1.0, x[0].sin().powi(2), 1.0]),
        domain: Arc::new(|x: &[f64]| x[0] > 0.0 && x[0] < std::f64::consts::PI),
    }
}

/// Unit `S³` in Hopf coordinates `(θ, φ, ψ)`:
/// `¼(dθ² + sin²θ dφ² + (dψ + cos θ dφ)²)`. Dropping `ψ` is a Riemannian
/// submersion onto the sphere of radius ½.
pub fn hopf_sphere() -> Riemannian {
    Riemannian {
        n: 3,
        g: Arc::new(|x: &[f64]| {
            let c = x[0].cos();
            DMatrix::from_row_slice(3, 3, &[0.25, 0.0, 0.0, 0.0, 0.25, 0.25 * c, 0.0, 0.25 * c, 0.25])
        }),
        domain: Arc::new(|x: &[f64]| x[0] > 0.0 && x[0] < std::f64::consts::PI),
    }
}

/// Randers metric on `ℝ²` with the drift `b = (x1/4, 3 x2²/20)`, which is not a
/// Killing field.
pub fn randers_drift() -> RandersField {
    RandersField {
        n: 2,
        a: Arc::new(|_: &[f64]| DMatrix::identity(2, 2)),
        b: Arc::new(|x: &[f64]| vec![0.25 * x[0], 0.15 * x[1] * x[1]]),
        domain: Arc::new(|x: &[f64]| x[0].abs() < 2.0 && x[1].abs() < 2.0),
    }
}

/// Catalog names accepted by [`catalog_metric`].
pub const CATALOG: [&str; 10] = [
    "euclidean2",
    "euclidean3",
    "minkowski-randers",
    "minkowski-quartic",
    "round-sphere",
    "quarter-sphere",
    "poincare",
    "s2xr",
    "hopf-s3",
    "randers-drift",
];

pub fn catalog_metric(name: &str) -> Result<Box<dyn ChartMetric>, FinslerError> {
    use super::norms::{Euclidean, Lp, Randers};
    Ok(match name {
        "euclidean2" => Box::new(Constant(Box::new(Euclidean(2)))),
        "euclidean3" => Box::new(Constant(Box::new(Euclidean(3)))),
        "minkowski-randers" => Box::new(Constant(Box::new(Randers::euclidean(&[0.5, 0.0])))),
        "minkowski-quartic" => Box::new(Constant(Box::new(Lp { p: 4.0, n: 2 }))),
        "round-sphere" => Box::new(round_sphere(1.0)),
        "quarter-sphere" => Box::new(round_sphere(0.5)),
        "poincare" => Box::new(poincare_half_plane()),
        "s2xr" => Box::new(sphere_times_line()),
        "hopf-s3" => Box::new(hopf_sphere()),
        "randers-drift" => Box::new(randers_drift()),
        _ => return Err(FinslerError::Spec(format!("unknown metric {name}"))),
    })
}

/// A catalog name, a path to a JSON file, or inline JSON.
pub fn load_metric(arg: &str) -> Result<Box<dyn ChartMetric>, FinslerError> {
    if CATALOG.contains(&arg) {
        return catalog_metric(arg);
    }
    if arg.trim_start().starts_with('{') {
        return parse_metric_json(arg);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| FinslerError::Spec(format!("{arg}: {e}")))?;
    parse_metric_json(&text)
}
