//! `gmajor`: decide G-majorization and run the structural and
//! order-preserving-function suites from the command line.
//!
//! Exit codes: 0 holds/pass, 1 fails, 2 input error, 3 oracle disagreement.

use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gmajor::hull::reference_order;
use gmajor::opf::{
    family_region_check, gradient_root_condition, inclusion_gap_demo, invariance_check, lookup_function,
    monotonicity_oracle, GridSpec, SuiteOptions, DEFAULT_GRADIENT_TOL, DEFAULT_INVARIANCE_TOL, DEFAULT_MARGIN,
};
use gmajor::structure::{dual_sum_check, union_gap_report, verify_refinement, verify_region_intersection};
use gmajor::{
    cone_order_check, hull_membership, orbit, representative, Certificate, ExtensionTriple, Family, GroupSpec,
    OrderVerdict, Vector, DEFAULT_GROUP_GUARD,
};

const SCHEMA: &str = "gmajor/1";
const GUARD_ENV: &str = "GMAJOR_GROUP_GUARD";

#[derive(Parser)]
#[command(name = "gmajor", version, about = "G-majorization for finite reflection groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide y ≺_G x through the family's cone inequalities.
    Check {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Cross-check the verdict against the exact hull oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Canonical representative of x in the closed fundamental cone.
    Rep {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Distinct points of the orbit of x.
    Orbit {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Structural checks on an extension triple G:N:H.
    Verify {
        #[arg(value_enum)]
        subject: Subject,
        /// e.g. B3:D3:Z2coord or B3:Z2^3:S3.
        #[arg(long)]
        triple: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Order-preserving-function suites.
    Opf {
        /// g1, gk:<k>, h, family:a=<q>,b=<q> or paper-counterexample-n4.
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Sample points for the invariance, gradient and family-region suites.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Base points for the monotonicity suite.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        /// Minimum distance of gradient sample points from the cone walls.
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Subject {
    RegionIntersection,
    Refinement,
    DualSum,
    UnionGap,
    InclusionGap,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Invariance,
    Gradient,
    Monotonic,
    FamilyRegion,
}

/// What a command produced: the exit code, the JSON record, and the text rendering.
struct Outcome {
    code: u8,
    record: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => {
                    let mut record = out.record;
                    record["schema"] = json!(SCHEMA);
                    println!("{}", serde_json::to_string_pretty(&record).expect("records serialize"));
                }
                Format::Text => print!("{}", out.text),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if cli.format == Format::Json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "schema": SCHEMA, "error": format!("{e:#}") })).unwrap()
                );
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn guard() -> Result<u64> {
    match std::env::var(GUARD_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{GUARD_ENV}={v} is not a positive integer")),
        Err(_) => Ok(DEFAULT_GROUP_GUARD),
    }
}

fn check_guard(spec: &GroupSpec) -> Result<()> {
    let guard = guard()?;
    if spec.order() > u128::from(guard) {
        return Err(gmajor::Error::GroupTooLarge { order: spec.order(), guard }.into());
    }
    Ok(())
}

fn parse_group(text: &str) -> Result<GroupSpec> {
    GroupSpec::from_str(text).with_context(|| format!("group `{text}`"))
}

fn parse_vector(name: &str, text: &str, spec: &GroupSpec) -> Result<Vector> {
    let v = Vector::parse(text).with_context(|| format!("--{name} `{text}`"))?;
    v.check_dim(spec.dim()).with_context(|| format!("--{name} for {spec}"))?;
    Ok(v)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Check { group, x, y, oracle } => cmd_check(group, x, y, *oracle),
        Command::Rep { group, x } => cmd_rep(group, x),
        Command::Orbit { group, x } => cmd_orbit(group, x),
        Command::Verify { subject, triple, samples, seed } => cmd_verify(*subject, triple, *samples, *seed),
        Command::Opf { function, group, suite, samples, trials, seed, tol, margin } => {
            cmd_opf(function, group, *suite, *samples, *trials, *seed, *tol, *margin)
        }
    }
}

fn describe_certificate(c: &Certificate) -> String {
    match c {
        Certificate::InequalitySlacks { slacks } => {
            format!("slacks {}", slacks.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        }
        Certificate::ViolatedInequality { index, label, lhs, rhs } => {
            format!("inequality j={index} violated: {label}: {lhs} > {rhs}")
        }
        Certificate::ConvexCoefficients { terms } => terms
            .iter()
            .map(|t| format!("{} * ({}) via {}", t.weight, t.point, t.element))
            .collect::<Vec<_>>()
            .join(" + "),
        Certificate::SeparatingFunctional { z, m_zy, m_zx } => format!("z=({z}): m(z,y)={m_zy} > m(z,x)={m_zx}"),
        Certificate::ConicCoefficients { coefficients } => {
            format!("coefficients {}", coefficients.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        }
        Certificate::SeparatingVector { w } => format!("separating w=({w})"),
    }
}

fn cmd_check(group: &str, x: &str, y: &str, oracle: bool) -> Result<Outcome> {
    let spec = parse_group(group)?;
    let (x, y) = (parse_vector("x", x, &spec)?, parse_vector("y", y, &spec)?);
    check_guard(&spec)?;
    let guard = guard()?;
    // The trivial group has no inequality system; its order is equality.
    let verdict: OrderVerdict = if spec.family() == Family::Trivial {
        hull_membership(&spec, &x, &y)?
    } else {
        cone_order_check(&spec, &x, &y)?
    };
    let mut record = json!({
        "command": "check",
        "group": spec,
        "x": x,
        "y": y,
        "holds": verdict.holds,
        "certificate": to_value(&verdict.certificate),
    });
    let mut text = format!(
        "{spec}: y {} x\n  {}\n",
        if verdict.holds { "≺" } else { "⊀" },
        describe_certificate(&verdict.certificate)
    );
    let mut code = if verdict.holds { 0 } else { 1 };
    if oracle {
        let reference = reference_order(&spec, &x, &y, guard)?;
        let agrees = reference == verdict.holds;
        record["oracle"] = json!({ "holds": reference, "agrees": agrees });
        text.push_str(&format!(
            "  oracle: {} ({})\n",
            if reference { "holds" } else { "fails" },
            if agrees { "agrees" } else { "DISAGREES" }
        ));
        if !agrees {
            code = 3;
        }
    }
    Ok(Outcome { code, record, text })
}

fn cmd_rep(group: &str, x: &str) -> Result<Outcome> {
    let spec = parse_group(group)?;
    let x = parse_vector("x", x, &spec)?;
    let rep = representative(&spec, &x)?;
    let text = format!("{spec}: ({}) -> ({})\n  witness {}\n", x, rep.tilde_x, rep.witness);
    let record = json!({
        "command": "rep",
        "group": spec,
        "x": x,
        "tilde_x": rep.tilde_x,
        "witness": rep.witness,
    });
    Ok(Outcome { code: 0, record, text })
}

fn cmd_orbit(group: &str, x: &str) -> Result<Outcome> {
    let spec = parse_group(group)?;
    let x = parse_vector("x", x, &spec)?;
    check_guard(&spec)?;
    let points: Vec<Vector> = orbit(&spec, &x)?.into_iter().collect();
    let mut text = format!("{spec}: {} orbit points\n", points.len());
    for p in &points {
        text.push_str(&format!("  ({p})\n"));
    }
    let record = json!({ "command": "orbit", "group": spec, "x": x, "size": points.len(), "points": points });
    Ok(Outcome { code: 0, record, text })
}

fn parse_triple(text: &str) -> Result<ExtensionTriple> {
    ExtensionTriple::from_str(text).with_context(|| format!("triple `{text}`"))
}

fn cmd_verify(subject: Subject, triple: &str, samples: usize, seed: u64) -> Result<Outcome> {
    let t = parse_triple(triple)?;
    check_guard(&t.g)?;
    let (name, passed, report, summary) = match subject {
        Subject::RegionIntersection => {
            let r = verify_region_intersection(&t, samples, seed)?;
            let summary = format!(
                "{} points, {} violations; symbolic equality {}",
                r.points_tested,
                r.violations.len(),
                if r.symbolic.proves_equality { "certified" } else { "not certified" }
            );
            ("region-intersection", r.passed(), to_value(&r), summary)
        }
        Subject::Refinement => {
            let r = verify_refinement(&t, samples, seed)?;
            let parts: Vec<String> =
                r.subgroups.iter().map(|s| format!("{}: {}/{} fail", s.subgroup, s.failures.len(), s.trials)).collect();
            ("refinement", r.passed(), to_value(&r), parts.join("; "))
        }
        Subject::DualSum => {
            let r = dual_sum_check(&t, samples, seed)?;
            let summary = format!(
                "generators {}; {} sampled disagreements",
                if r.generators_certified { "certified" } else { "not certified" },
                r.violations.len()
            );
            ("dual-sum", r.passed(), to_value(&r), summary)
        }
        Subject::UnionGap => {
            let r = union_gap_report(&t)?;
            let valid = match r.witnesses.first() {
                Some(w) => w.is_valid(&t)?,
                None => false,
            };
            let summary = match r.witnesses.first() {
                Some(w) => format!("witness ({}) in C*_G, outside C*_N and C*_H", w.v),
                None => "no witness found".into(),
            };
            ("union-gap", valid, to_value(&r), summary)
        }
        Subject::InclusionGap => {
            let opts = SuiteOptions { samples, seed, ..Default::default() };
            let r = inclusion_gap_demo(&t, &opts)?;
            let summary = format!(
                "<grad f, e_n> = {} at ({}); N gradient {}, N monotonic {}",
                r.b_last_root_value,
                r.point,
                pass_word(r.n_gradient.passed),
                pass_word(r.n_monotonic.passed)
            );
            ("inclusion-gap", r.passed, to_value(&r), summary)
        }
    };
    let text = format!("{name} {t}: {}\n  {summary}\n", pass_word(passed).to_uppercase());
    let record = json!({ "command": "verify", "subject": name, "passed": passed, "report": report });
    Ok(Outcome { code: if passed { 0 } else { 1 }, record, text })
}

fn pass_word(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_opf(
    function: &str,
    group: &str,
    suite: Suite,
    samples: usize,
    trials: usize,
    seed: u64,
    tol: Option<f64>,
    margin: f64,
) -> Result<Outcome> {
    let spec = parse_group(group)?;
    check_guard(&spec)?;
    if let Some(t) = tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(anyhow!("--tol must be a nonnegative number"));
        }
    }
    let (name, passed, report, summary) = match suite {
        Suite::Invariance => {
            let named = lookup_function(function, spec.dim())?;
            let opts = SuiteOptions { samples, seed, tol: tol.unwrap_or(DEFAULT_INVARIANCE_TOL), margin, bound: 1 };
            let r = invariance_check(&named.function, &spec, &opts)?;
            let summary = format!(
                "{} checks ({}), worst deviation {:e}, {} violations",
                r.checks, r.mode, r.worst_deviation, r.violation_count
            );
            ("invariance", r.passed, to_value(&r), summary)
        }
        Suite::Gradient => {
            let named = lookup_function(function, spec.dim())?;
            let opts = SuiteOptions { samples, seed, tol: tol.unwrap_or(DEFAULT_GRADIENT_TOL), margin, bound: 1 };
            let r = gradient_root_condition(&named.function, &spec, &named.probes, &opts)?;
            let mut summary = format!(
                "{} interior points, worst <grad f, a_j> = {}, {} violations",
                r.points_tested,
                r.worst_margin.map_or("n/a".into(), |w| format!("{w:.6}")),
                r.violation_count
            );
            for p in r.probes.iter().filter(|p| !p.passes) {
                let value = p.exact_value.as_ref().map_or(format!("{:.6}", p.value), ToString::to_string);
                summary.push_str(&format!(
                    "\n  violation at ({}): root {} ({}) gives {value}",
                    p.point, p.root_index, p.root
                ));
            }
            ("gradient", r.passed, to_value(&r), summary)
        }
        Suite::Monotonic => {
            let named = lookup_function(function, spec.dim())?;
            let opts =
                SuiteOptions { samples: trials, seed, tol: tol.unwrap_or(DEFAULT_INVARIANCE_TOL), margin, bound: 1 };
            let r = monotonicity_oracle(&named.function, &spec, &opts)?;
            let summary = format!(
                "{} ordered pairs, worst f(y)-f(x) = {}, {} violations",
                r.pairs_tested,
                r.worst_gap.map_or("n/a".into(), |w| format!("{w:.6}")),
                r.violation_count
            );
            ("monotonic", r.passed, to_value(&r), summary)
        }
        Suite::FamilyRegion => {
            let opts = SuiteOptions { samples, seed, tol: tol.unwrap_or(DEFAULT_GRADIENT_TOL), margin, bound: 1 };
            let r = family_region_check(&spec, &GridSpec::default(), &opts)?;
            let summary =
                format!("{} off-boundary grid points, {} disagree with 2a >= b >= 0", r.counted, r.mismatches);
            ("family-region", r.passed, to_value(&r), summary)
        }
    };
    let text = format!("{name} {function} on {spec}: {}\n  {summary}\n", pass_word(passed).to_uppercase());
    let record = json!({
        "command": "opf",
        "suite": name,
        "function": function,
        "group": spec,
        "passed": passed,
        "report": report,
    });
    Ok(Outcome { code: if passed { 0 } else { 1 }, record, text })
}
