//! Order-preserving functions: `y ≺_G x ⟹ f(y) ≤ f(x)`.
//!
//! Verdicts here are sampled evidence in floating point, with exact rational
//! evaluation wherever the function is a polynomial (or `|h|`) and the point
//! is rational.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::cone::{fundamental_roots, representative};
use crate::error::{Error, Result};
use crate::group::{enumerate_group, Family, GroupSpec};
use crate::sample::{rng, substream, RationalDist};
use crate::structure::{random_orbit_combination, ExtensionTriple};
use crate::vector::{parse_rational, rat, serialize_opt_rational, to_f64, Rational, Vector};

pub const DEFAULT_INVARIANCE_TOL: f64 = 1e-9;
pub const DEFAULT_GRADIENT_TOL: f64 = 1e-7;
pub const DEFAULT_MARGIN: f64 = 0.1;

type Eval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type Grad = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type ExactEval = Arc<dyn Fn(&[Rational]) -> Rational + Send + Sync>;
type ExactGrad = Arc<dyn Fn(&[Rational]) -> Option<Vec<Rational>> + Send + Sync>;

/// A real function on R^n with optional analytic and exact companions.
#[derive(Clone)]
pub struct ScalarFunction {
    label: String,
    eval: Eval,
    gradient: Option<Grad>,
    exact: Option<ExactEval>,
    exact_gradient: Option<ExactGrad>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("label", &self.label)
            .field("analytic_gradient", &self.gradient.is_some())
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl ScalarFunction {
    pub fn new(label: impl Into<String>, eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFunction { label: label.into(), eval: Arc::new(eval), gradient: None, exact: None, exact_gradient: None }
    }

    pub fn with_gradient(mut self, grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(grad));
        self
    }

    pub fn with_exact(mut self, exact: impl Fn(&[Rational]) -> Rational + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(exact));
        self
    }

    pub fn with_exact_gradient(
        mut self,
        grad: impl Fn(&[Rational]) -> Option<Vec<Rational>> + Send + Sync + 'static,
    ) -> Self {
        self.exact_gradient = Some(Arc::new(grad));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    pub fn eval_exact(&self, x: &Vector) -> Option<Rational> {
        self.exact.as_ref().map(|f| f(x.coords()))
    }

    pub fn gradient_exact(&self, x: &Vector) -> Option<Vec<Rational>> {
        self.exact_gradient.as_ref().and_then(|g| g(x.coords()))
    }

    /// Analytic gradient when available, otherwise central differences with
    /// step `1e-5·(1+|x_i|)`.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match &self.gradient {
            Some(g) => g(x),
            None => self.finite_difference_gradient(x),
        }
    }

    pub fn finite_difference_gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut p = x.to_vec();
        (0..x.len())
            .map(|i| {
                let h = 1e-5 * (1.0 + x[i].abs());
                p[i] = x[i] + h;
                let up = self.eval(&p);
                p[i] = x[i] - h;
                let down = self.eval(&p);
                p[i] = x[i];
                (up - down) / (2.0 * h)
            })
            .collect()
    }

    /// `g_k = Σ_{|S|=k} Π_{i∈S} x_i²`, for `1 ≤ k ≤ dim`.
    pub fn invariant(k: usize, dim: usize) -> Result<Self> {
        check_k(k, dim)?;
        Ok(ScalarFunction::new(format!("g{k}"), move |x| elementary_of_squares(x, k))
            .with_gradient(move |x| (0..x.len()).map(|i| 2.0 * x[i] * elementary_excluding(x, k - 1, i)).collect())
            .with_exact(move |x| elementary_of_squares_exact(x, k))
            .with_exact_gradient(move |x| {
                let two = Rational::from_integer(2.into());
                Some((0..x.len()).map(|i| &two * &x[i] * elementary_excluding_exact(x, k - 1, i)).collect())
            }))
    }

    /// `h = Π x_i`.
    pub fn product() -> Self {
        ScalarFunction::new("h", |x| x.iter().product())
            .with_gradient(|x| (0..x.len()).map(|i| product_excluding(x, i)).collect())
            .with_exact(|x| x.iter().product())
            .with_exact_gradient(|x| Some((0..x.len()).map(|i| product_excluding_exact(x, i)).collect()))
    }

    /// `a·g_1 + b·h`.
    pub fn family(params: &InvariantFamilyParams) -> Self {
        let (a, b) = (params.a.clone(), params.b.clone());
        let (af, bf) = (to_f64(&a), to_f64(&b));
        let (a2, b2) = (a.clone(), b.clone());
        ScalarFunction::new(format!("family:a={a},b={b}"), move |x| {
            af * x.iter().map(|v| v * v).sum::<f64>() + bf * x.iter().product::<f64>()
        })
        .with_gradient(move |x| (0..x.len()).map(|i| 2.0 * af * x[i] + bf * product_excluding(x, i)).collect())
        .with_exact(move |x| &a * x.iter().map(|v| v * v).sum::<Rational>() + &b * x.iter().product::<Rational>())
        .with_exact_gradient(move |x| {
            let two_a = &a2 * Rational::from_integer(2.into());
            Some((0..x.len()).map(|i| &two_a * &x[i] + &b2 * product_excluding_exact(x, i)).collect())
        })
    }

    /// `¼·g_1² − |h|`: invariant under both B_n and D_n, order preserving
    /// only for the latter.
    pub fn quartic_minus_abs_product() -> Self {
        ScalarFunction::new("paper-counterexample-n4", |x| {
            let g1: f64 = x.iter().map(|v| v * v).sum();
            0.25 * g1 * g1 - x.iter().product::<f64>().abs()
        })
        .with_gradient(|x| {
            let g1: f64 = x.iter().map(|v| v * v).sum();
            let s = x.iter().product::<f64>().signum();
            (0..x.len()).map(|i| g1 * x[i] - s * product_excluding(x, i)).collect()
        })
        .with_exact(|x| {
            let g1: Rational = x.iter().map(|v| v * v).sum();
            &g1 * &g1 / Rational::from_integer(4.into()) - x.iter().product::<Rational>().abs()
        })
        .with_exact_gradient(|x| {
            let h: Rational = x.iter().product();
            if h.is_zero() {
                return None;
            }
            let g1: Rational = x.iter().map(|v| v * v).sum();
            let s = h.signum();
            Some((0..x.len()).map(|i| &g1 * &x[i] - &s * product_excluding_exact(x, i)).collect())
        })
    }

    pub fn constant(c: f64) -> Self {
        ScalarFunction::new(format!("const:{c}"), move |_| c).with_gradient(|x| vec![0.0; x.len()])
    }

    /// The coordinate function `x_i` (0-based).
    pub fn coordinate(i: usize) -> Self {
        ScalarFunction::new(format!("x{}", i + 1), move |x| x[i])
            .with_gradient(move |x| (0..x.len()).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .with_exact(move |x| x[i].clone())
    }

    pub fn negated(&self) -> Self {
        let f = self.clone();
        let mut out = ScalarFunction::new(format!("-{}", self.label), move |x| -f.eval(x));
        if let Some(g) = self.gradient.clone() {
            out = out.with_gradient(move |x| g(x).into_iter().map(|v| -v).collect());
        }
        if let Some(e) = self.exact.clone() {
            out = out.with_exact(move |x| -e(x));
        }
        out
    }
}

fn check_k(k: usize, dim: usize) -> Result<()> {
    if k == 0 || k > dim {
        Err(Error::IndexOutOfRange { index: k, max: dim })
    } else {
        Ok(())
    }
}

fn elementary_of_squares(x: &[f64], k: usize) -> f64 {
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for v in x {
        let s = v * v;
        for j in (1..=k).rev() {
            e[j] += e[j - 1] * s;
        }
    }
    e[k]
}

fn elementary_excluding(x: &[f64], k: usize, skip: usize) -> f64 {
    let rest: Vec<f64> = x.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| *v).collect();
    elementary_of_squares(&rest, k)
}

fn elementary_of_squares_exact(x: &[Rational], k: usize) -> Rational {
    let mut e = vec![Rational::zero(); k + 1];
    e[0] = Rational::one();
    for v in x {
        let s = v * v;
        for j in (1..=k).rev() {
            let add = &e[j - 1] * &s;
            e[j] += add;
        }
    }
    e[k].clone()
}

fn elementary_excluding_exact(x: &[Rational], k: usize, skip: usize) -> Rational {
    let rest: Vec<Rational> = x.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| v.clone()).collect();
    elementary_of_squares_exact(&rest, k)
}

fn product_excluding(x: &[f64], skip: usize) -> f64 {
    x.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| v).product()
}

fn product_excluding_exact(x: &[Rational], skip: usize) -> Rational {
    x.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| v).product()
}

/// `g_k(x)` evaluated exactly.
pub fn invariant_polynomial(k: usize, x: &Vector) -> Result<Rational> {
    check_k(k, x.dim())?;
    Ok(elementary_of_squares_exact(x.coords(), k))
}

/// `h(x) = Π x_i` evaluated exactly.
pub fn product_polynomial(x: &Vector) -> Rational {
    x.coords().iter().product()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantFamilyParams {
    #[serde(serialize_with = "crate::vector::serialize_rational")]
    pub a: Rational,
    #[serde(serialize_with = "crate::vector::serialize_rational")]
    pub b: Rational,
    pub n: usize,
}

/// A registry entry: the function and any named points worth probing exactly.
#[derive(Debug, Clone)]
pub struct NamedFunction {
    pub function: ScalarFunction,
    pub probes: Vec<Vector>,
}

/// Looks up `g1`, `gk:<k>`, `h`, `family:a=<q>,b=<q>` or `paper-counterexample-n4`.
pub fn lookup_function(name: &str, dim: usize) -> Result<NamedFunction> {
    let plain = |function| Ok(NamedFunction { function, probes: vec![] });
    if name == "g1" {
        return plain(ScalarFunction::invariant(1, dim)?);
    }
    if name == "h" {
        return plain(ScalarFunction::product());
    }
    if name == "paper-counterexample-n4" {
        let point = Vector::new(vec![rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 4)]);
        let probes = if dim == 4 { vec![point] } else { vec![] };
        return Ok(NamedFunction { function: ScalarFunction::quartic_minus_abs_product(), probes });
    }
    if let Some(k) = name.strip_prefix("gk:") {
        let k = k.parse::<usize>().map_err(|_| Error::Parse(format!("bad k in `{name}`")))?;
        return plain(ScalarFunction::invariant(k, dim)?);
    }
    if let Some(rest) = name.strip_prefix("family:") {
        let mut a = None;
        let mut b = None;
        for part in rest.split(',') {
            match part.split_once('=') {
                Some(("a", q)) => a = Some(parse_rational(q)?),
                Some(("b", q)) => b = Some(parse_rational(q)?),
                _ => return Err(Error::Parse(format!("bad family parameter `{part}`"))),
            }
        }
        let (Some(a), Some(b)) = (a, b) else {
            return Err(Error::Parse(format!("`{name}` needs both a and b")));
        };
        return plain(ScalarFunction::family(&InvariantFamilyParams { a, b, n: dim }));
    }
    Err(Error::Parse(format!("unknown function `{name}`")))
}

/// Sampling knobs shared by the suites. Points are drawn from the cube
/// `[-bound, bound]^n` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub margin: f64,
    pub bound: i64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { samples: 200, seed: 0, tol: DEFAULT_GRADIENT_TOL, margin: DEFAULT_MARGIN, bound: 1 }
    }
}

impl SuiteOptions {
    fn dist(&self) -> RationalDist {
        RationalDist { bound: self.bound, max_denom: 64 }
    }
}

const MAX_LISTED: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceViolation {
    pub x: Vector,
    pub element: String,
    pub f_x: f64,
    pub f_gx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub function: String,
    pub group: GroupSpec,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// `exact` when rational evaluation was available.
    pub mode: &'static str,
    pub checks: usize,
    pub worst_deviation: f64,
    pub violation_count: usize,
    pub violations: Vec<InvarianceViolation>,
    pub passed: bool,
}

/// `f(g·x) = f(x)` for every enumerated `g` and sampled `x`.
pub fn invariance_check(f: &ScalarFunction, spec: &GroupSpec, opts: &SuiteOptions) -> Result<InvarianceReport> {
    let elements = enumerate_group(spec)?;
    let mut r = rng(opts.seed);
    let dist = opts.dist();
    let exact = f.exact.is_some();
    let (mut checks, mut worst, mut count) = (0, 0.0f64, 0);
    let mut violations = Vec::new();
    for _ in 0..opts.samples {
        let x = dist.vector(&mut r, spec.dim());
        let xf = x.to_f64();
        let fx = f.eval(&xf);
        let fx_exact = f.eval_exact(&x);
        for g in &elements {
            checks += 1;
            let gx = g.apply_unchecked(&x);
            let fgx = f.eval(&gx.to_f64());
            let deviation = (fgx - fx).abs();
            worst = worst.max(deviation);
            let violated = match &fx_exact {
                Some(e) => f.eval_exact(&gx).as_ref() != Some(e),
                None => deviation > opts.tol * (1.0 + fx.abs()),
            };
            if violated {
                count += 1;
                if violations.len() < MAX_LISTED {
                    violations.push(InvarianceViolation { x: x.clone(), element: g.to_string(), f_x: fx, f_gx: fgx });
                }
            }
        }
    }
    Ok(InvarianceReport {
        function: f.label.clone(),
        group: *spec,
        samples: opts.samples,
        seed: opts.seed,
        tol: opts.tol,
        mode: if exact { "exact" } else { "float" },
        checks,
        worst_deviation: worst,
        violation_count: count,
        violations,
        passed: count == 0,
    })
}

/// Rational points strictly inside the fundamental cone: distance at least
/// `margin` from every wall and every coordinate at least `margin` from zero.
/// Drawn by rejection from representatives of cube samples.
pub fn interior_samples(spec: &GroupSpec, opts: &SuiteOptions) -> Result<Vec<Vector>> {
    let cs = fundamental_roots(spec)?;
    let norms: Vec<f64> = cs.roots.iter().map(|a| to_f64(&a.norm_squared()).sqrt()).collect();
    let dist = opts.dist();
    let mut r = substream(opts.seed, 0);
    let mut out = Vec::with_capacity(opts.samples);
    let max_attempts = opts.samples.saturating_mul(2000).max(1000);
    for _ in 0..max_attempts {
        if out.len() == opts.samples {
            break;
        }
        let x = representative(spec, &dist.vector(&mut r, spec.dim()))?.tilde_x;
        let walls_ok = cs.roots.iter().zip(&norms).all(|(a, norm)| to_f64(&a.dot(&x)) / norm >= opts.margin);
        let coords_ok = x.coords().iter().all(|c| to_f64(c).abs() >= opts.margin);
        if walls_ok && coords_ok {
            out.push(x);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootViolation {
    pub point: Vec<f64>,
    /// 1-based position in the fundamental root list.
    pub root_index: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult {
    pub point: Vector,
    pub root_index: usize,
    pub root: Vector,
    /// Exact `⟨∇f, a_j⟩` when available.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub exact_value: Option<Rational>,
    pub value: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientReport {
    pub function: String,
    pub group: GroupSpec,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub margin: f64,
    pub gradient: &'static str,
    pub points_tested: usize,
    /// Minimum of `⟨∇f, a_j⟩` over tested points and roots.
    pub worst_margin: Option<f64>,
    pub worst_point: Option<Vec<f64>>,
    pub worst_root: Option<usize>,
    pub violation_count: usize,
    pub violations: Vec<RootViolation>,
    pub probes: Vec<ProbeResult>,
    pub passed: bool,
}

/// `⟨∇f, a_j⟩ ≥ -tol` for every fundamental root at the given points.
pub fn gradient_condition_at(
    f: &ScalarFunction,
    spec: &GroupSpec,
    points: &[Vector],
    probes: &[Vector],
    opts: &SuiteOptions,
) -> Result<GradientReport> {
    let cs = fundamental_roots(spec)?;
    let roots_f: Vec<Vec<f64>> = cs.roots.iter().map(Vector::to_f64).collect();
    let mut worst: Option<(f64, Vec<f64>, usize)> = None;
    let mut violations = Vec::new();
    let mut count = 0;
    for p in points {
        let x = p.to_f64();
        let grad = f.gradient(&x);
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite { label: f.label.clone(), point: x });
        }
        for (j, a) in roots_f.iter().enumerate() {
            let value: f64 = grad.iter().zip(a).map(|(g, a)| g * a).sum();
            if worst.as_ref().is_none_or(|(w, _, _)| value < *w) {
                worst = Some((value, x.clone(), j + 1));
            }
            if value < -opts.tol {
                count += 1;
                if violations.len() < MAX_LISTED {
                    violations.push(RootViolation { point: x.clone(), root_index: j + 1, value });
                }
            }
        }
    }
    let mut probe_results = Vec::new();
    for p in probes {
        p.check_dim(spec.dim())?;
        let grad_exact = f.gradient_exact(p);
        let grad = f.gradient(&p.to_f64());
        for (j, a) in cs.roots.iter().enumerate() {
            let exact_value = grad_exact.as_ref().map(|g| Vector::new(g.clone()).dot(a));
            let value = match &exact_value {
                Some(e) => to_f64(e),
                None => grad.iter().zip(a.to_f64()).map(|(g, a)| g * a).sum(),
            };
            let passes = match &exact_value {
                Some(e) => !e.is_negative(),
                None => value >= -opts.tol,
            };
            probe_results.push(ProbeResult {
                point: p.clone(),
                root_index: j + 1,
                root: a.clone(),
                exact_value,
                value,
                passes,
            });
        }
    }
    let passed = count == 0 && probe_results.iter().all(|p| p.passes);
    Ok(GradientReport {
        function: f.label.clone(),
        group: *spec,
        samples: opts.samples,
        seed: opts.seed,
        tol: opts.tol,
        margin: opts.margin,
        gradient: if f.has_analytic_gradient() { "analytic" } else { "central-difference" },
        points_tested: points.len(),
        worst_margin: worst.as_ref().map(|w| w.0),
        worst_point: worst.as_ref().map(|w| w.1.clone()),
        worst_root: worst.as_ref().map(|w| w.2),
        violation_count: count,
        violations,
        probes: probe_results,
        passed,
    })
}

/// Samples interior points of the fundamental cone and checks the
/// fundamental-root gradient condition there, plus any exact probes.
pub fn gradient_root_condition(
    f: &ScalarFunction,
    spec: &GroupSpec,
    probes: &[Vector],
    opts: &SuiteOptions,
) -> Result<GradientReport> {
    let points = interior_samples(spec, opts)?;
    gradient_condition_at(f, spec, &points, probes, opts)
}

/// Every reflection of the group, as its root, found as the orbit of the
/// fundamental roots up to sign.
pub fn reflection_roots(spec: &GroupSpec) -> Result<Vec<Vector>> {
    let cs = fundamental_roots(spec)?;
    let mut seen = BTreeSet::new();
    for g in enumerate_group(spec)? {
        for a in &cs.roots {
            let ga = g.apply_unchecked(a);
            let neg = -&ga;
            if !seen.contains(&neg) {
                seen.insert(ga);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn reflect(x: &[f64], root: &[f64]) -> Vec<f64> {
    let dot: f64 = x.iter().zip(root).map(|(a, b)| a * b).sum();
    let nn: f64 = root.iter().map(|a| a * a).sum();
    x.iter().zip(root).map(|(v, a)| v - 2.0 * dot / nn * a).collect()
}

/// Pairs `(x, y)` with `y ≺_G x` by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// For each sampled `x`: one point on the segment to each reflection image
/// `s_α(x)`, plus one random convex combination of several orbit points.
pub fn ordered_pairs(spec: &GroupSpec, opts: &SuiteOptions) -> Result<Vec<OrderedPair>> {
    let roots: Vec<Vec<f64>> = reflection_roots(spec)?.iter().map(Vector::to_f64).collect();
    let dist = opts.dist();
    let mut r = substream(opts.seed, 1);
    let mut pairs = Vec::new();
    for _ in 0..opts.samples {
        let x = dist.vector(&mut r, spec.dim());
        let xf = x.to_f64();
        for a in &roots {
            let t: f64 = r.gen_range(0.05..0.95);
            let sx = reflect(&xf, a);
            let y = xf.iter().zip(&sx).map(|(p, q)| (1.0 - t) * p + t * q).collect();
            pairs.push(OrderedPair { x: xf.clone(), y });
        }
        let y = random_orbit_combination(spec, &x, &mut r)?;
        pairs.push(OrderedPair { x: xf, y: y.to_f64() });
    }
    Ok(pairs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityViolation {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub f_x: f64,
    pub f_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub function: String,
    pub group: GroupSpec,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub pairs_tested: usize,
    /// Largest `f(y) - f(x)` seen.
    pub worst_gap: Option<f64>,
    pub violation_count: usize,
    pub violations: Vec<MonotonicityViolation>,
    pub passed: bool,
}

pub fn monotonicity_on(
    f: &ScalarFunction,
    spec: &GroupSpec,
    pairs: &[OrderedPair],
    opts: &SuiteOptions,
) -> MonotonicityReport {
    let mut worst: Option<f64> = None;
    let mut violations = Vec::new();
    let mut count = 0;
    for pair in pairs {
        let fx = f.eval(&pair.x);
        let fy = f.eval(&pair.y);
        let gap = fy - fx;
        worst = Some(worst.map_or(gap, |w| w.max(gap)));
        if fy > fx + opts.tol * (1.0 + fx.abs()) {
            count += 1;
            if violations.len() < MAX_LISTED {
                violations.push(MonotonicityViolation { x: pair.x.clone(), y: pair.y.clone(), f_x: fx, f_y: fy });
            }
        }
    }
    MonotonicityReport {
        function: f.label.clone(),
        group: *spec,
        trials: opts.samples,
        seed: opts.seed,
        tol: opts.tol,
        pairs_tested: pairs.len(),
        worst_gap: worst,
        violation_count: count,
        violations,
        passed: count == 0,
    }
}

/// `f(y) ≤ f(x) + tol·(1+|f(x)|)` on constructed pairs `y ≺_G x`.
pub fn monotonicity_oracle(f: &ScalarFunction, spec: &GroupSpec, opts: &SuiteOptions) -> Result<MonotonicityReport> {
    let pairs = ordered_pairs(spec, opts)?;
    Ok(monotonicity_on(f, spec, &pairs, opts))
}

/// The closed region `{2a ≥ b ≥ 0}` claimed for `a·g_1 + b·h` under D_n.
pub fn claimed_family_region(a: f64, b: f64) -> bool {
    2.0 * a >= b && b >= 0.0
}

/// Euclidean distance from `(a, b)` to the boundary of `{2a ≥ b ≥ 0}`,
/// which is the union of the rays along `(1, 0)` and `(1, 2)`.
pub fn distance_to_claimed_boundary(a: f64, b: f64) -> f64 {
    let to_ray = |ux: f64, uy: f64| {
        let norm = (ux * ux + uy * uy).sqrt();
        let (ux, uy) = (ux / norm, uy / norm);
        let t = a * ux + b * uy;
        if t <= 0.0 {
            (a * a + b * b).sqrt()
        } else {
            ((a - t * ux).powi(2) + (b - t * uy).powi(2)).sqrt()
        }
    };
    to_ray(1.0, 0.0).min(to_ray(1.0, 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub a: f64,
    pub b: f64,
    pub gradient_passes: bool,
    pub monotone_passes: bool,
    pub preserving: bool,
    pub claimed: bool,
    pub boundary_distance: f64,
    /// Outside the boundary band, so it counts toward the comparison.
    pub counted: bool,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyRegionReport {
    pub group: GroupSpec,
    pub grid_min: f64,
    pub grid_max: f64,
    pub step: f64,
    pub band: f64,
    pub options: SuiteOptions,
    pub interior_points: usize,
    pub ordered_pairs: usize,
    pub points: Vec<GridPoint>,
    pub counted: usize,
    pub mismatches: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
    pub band: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { min: -2.0, max: 2.0, step: 0.25, band: 0.05 }
    }
}

/// Classifies `a·g_1 + b·h` over a grid of `(a, b)` by the gradient suite and
/// the monotonicity oracle, and compares against `{2a ≥ b ≥ 0}`. Sample
/// points and pairs are drawn once and shared by every grid point.
pub fn family_region_check(spec: &GroupSpec, grid: &GridSpec, opts: &SuiteOptions) -> Result<FamilyRegionReport> {
    if !matches!(spec.family(), Family::HyperoctahedralB | Family::DemihyperoctahedralD) {
        return Err(Error::UnsupportedFamily { family: spec.family(), operation: "family_region_check" });
    }
    let interior = interior_samples(spec, opts)?;
    let pairs = ordered_pairs(spec, opts)?;
    let steps = ((grid.max - grid.min) / grid.step).round() as i64;
    let mut points = Vec::new();
    for ia in 0..=steps {
        for ib in 0..=steps {
            let a = grid.min + ia as f64 * grid.step;
            let b = grid.min + ib as f64 * grid.step;
            let params = InvariantFamilyParams { a: f64_to_rational(a), b: f64_to_rational(b), n: spec.dim() };
            let f = ScalarFunction::family(&params);
            let gradient_passes = gradient_condition_at(&f, spec, &interior, &[], opts)?.passed;
            let mono_opts = SuiteOptions { tol: DEFAULT_INVARIANCE_TOL, ..opts.clone() };
            let monotone_passes = monotonicity_on(&f, spec, &pairs, &mono_opts).passed;
            let preserving = gradient_passes && monotone_passes;
            let claimed = claimed_family_region(a, b);
            let boundary_distance = distance_to_claimed_boundary(a, b);
            let counted = boundary_distance > grid.band;
            points.push(GridPoint {
                a,
                b,
                gradient_passes,
                monotone_passes,
                preserving,
                claimed,
                boundary_distance,
                counted,
                matches: preserving == claimed,
            });
        }
    }
    let counted = points.iter().filter(|p| p.counted).count();
    let mismatches = points.iter().filter(|p| p.counted && !p.matches).count();
    Ok(FamilyRegionReport {
        group: *spec,
        grid_min: grid.min,
        grid_max: grid.max,
        step: grid.step,
        band: grid.band,
        options: opts.clone(),
        interior_points: interior.len(),
        ordered_pairs: pairs.len(),
        points,
        counted,
        mismatches,
        passed: mismatches == 0,
    })
}

fn f64_to_rational(v: f64) -> Rational {
    Rational::from_float(v).expect("grid values are finite")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionGapReport {
    pub triple: ExtensionTriple,
    pub function: String,
    pub point: Vector,
    /// Exact `⟨∇f, e_n⟩` at `point`: the last `B_n` root.
    #[serde(serialize_with = "crate::vector::serialize_rational")]
    pub b_last_root_value: Rational,
    /// Exact `⟨∇f, e_{n-1} + e_n⟩` at `point`: the last `D_n` root.
    #[serde(serialize_with = "crate::vector::serialize_rational")]
    pub d_last_root_value: Rational,
    pub n_gradient: GradientReport,
    pub n_monotonic: MonotonicityReport,
    pub g_gradient: GradientReport,
    /// `f` passes for `N` and fails for `G`.
    pub passed: bool,
}

/// Shows `F_G ⊊ F_N` for `(B_4, D_4, Z2)` with `f = ¼g_1² − |h|`.
pub fn inclusion_gap_demo(t: &ExtensionTriple, opts: &SuiteOptions) -> Result<InclusionGapReport> {
    if t.g.family() != Family::HyperoctahedralB || t.n.family() != Family::DemihyperoctahedralD || t.g.dim() != 4 {
        return Err(Error::UnsupportedTriple(format!("{t}: the demo needs (B4, D4, Z2)")));
    }
    let f = ScalarFunction::quartic_minus_abs_product();
    let point = Vector::new(vec![rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 4)]);
    let grad = Vector::new(f.gradient_exact(&point).expect("h is nonzero at the probe"));
    let b_last_root_value = grad.dot(&fundamental_roots(&t.g)?.roots[3]);
    let d_last_root_value = grad.dot(&fundamental_roots(&t.n)?.roots[3]);
    let n_gradient = gradient_root_condition(&f, &t.n, &[], opts)?;
    let n_monotonic = monotonicity_oracle(&f, &t.n, &SuiteOptions { tol: DEFAULT_INVARIANCE_TOL, ..opts.clone() })?;
    let g_gradient = gradient_root_condition(&f, &t.g, std::slice::from_ref(&point), opts)?;
    let passed = n_gradient.passed && n_monotonic.passed && !g_gradient.passed && b_last_root_value.is_negative();
    Ok(InclusionGapReport {
        triple: *t,
        function: f.label.clone(),
        point,
        b_last_root_value,
        d_last_root_value,
        n_gradient,
        n_monotonic,
        g_gradient,
        passed,
    })
}
