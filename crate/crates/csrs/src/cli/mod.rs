//! Command-line front end: knot/path/fact file ingestion, pipeline
//! orchestration, JSON/table/SVG emission.
//!
//! Exit codes: 0 success, 1 computation failure, 2 input error.

use std::io::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Float, Rational};
use serde_json::json;

use crate::csintegrator::{
    cs_absolute, orientation_flip, plan_path_candidates, CSValue, HintBasepoint, PlanHint,
};
use crate::numerics::{AppComplex, PrecisionPolicy};
use crate::presentations::{builtin_5_2, parse_presentation, twist_knot, two_bridge_presentation, KnotPresentation};
use crate::repfinder::{
    builtin_apoly_5_2, casson_count_check, eliminate_apoly, find_representations, APoly,
    SurgerySpec,
};
use crate::riley::{
    alexander_specialization, display_in_t, longitude_eigenvalue_poly, riley_polynomial,
    second_derivative_at_one, RileyData,
};
use crate::rscalc::parse::{load_facts, run_query, QueryOutcome};
use crate::rscalc::{FactStore, Membership};

#[derive(Parser)]
#[command(
    name = "csrs",
    about = "SU(2) Chern-Simons spectra of 1/n-surgeries on two-bridge knots, with an exact r_s deduction ledger",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Riley polynomial, Alexander specialization, and branch points.
    Riley(RileyArgs),
    /// Enumerate SU(2) representation classes of the surgered manifold.
    Reps(RepsArgs),
    /// Compute the Chern-Simons spectrum of the surgered manifold.
    Cs(CsArgs),
    /// Evaluate exact r_s / s_inf / d_inf ledger queries.
    Ledger(LedgerArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
    Svg,
}

#[derive(Args)]
struct CommonArgs {
    /// Knot: builtin:5_2 | twist:K | two_bridge:P/Q | file:PATH
    #[arg(long)]
    knot: String,
    /// Working precision in bits (default from target error; env CSRS_PRECISION_BITS overrides the default)
    #[arg(long)]
    precision_bits: Option<u32>,
    /// Target absolute error, decimal string (e.g. 1e-30)
    #[arg(long, default_value = "1e-20")]
    target_error: String,
    /// Residual acceptance tolerance, decimal string (defaults to the target error)
    #[arg(long)]
    tolerance: Option<String>,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    out: OutputFormat,
}

#[derive(Args)]
struct RileyArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct RepsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Surgery coefficient p/q with p = ±1 (e.g. -1/2 for S³_{-1/2})
    #[arg(long, allow_hyphen_values = true)]
    surgery: String,
}

#[derive(Args)]
struct CsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Surgery coefficient p/q with p = ±1
    #[arg(long, allow_hyphen_values = true)]
    surgery: String,
    /// Report values for the orientation-reversed manifold (the -cs column)
    #[arg(long)]
    mirror: bool,
    /// Waypoint hint file (JSON)
    #[arg(long)]
    hints: Option<String>,
    /// Worker threads for per-class evaluation
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct LedgerArgs {
    /// Facts file (JSON) with asserted axioms
    #[arg(long)]
    facts: Option<String>,
    /// Query, e.g. r0( 2*S(2,3,5) + (-1)*S(2,3,11) )
    #[arg(long)]
    query: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    out: OutputFormat,
}

/// Input-level failures exit with 2; computation failures with 1.
enum CliError {
    Input(String),
    Computation(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Computation(_) => 1,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Computation(m) => m,
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with its own success exit.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Riley(a) => cmd_riley(&a),
        Command::Reps(a) => cmd_reps(&a),
        Command::Cs(a) => cmd_cs(&a),
        Command::Ledger(a) => cmd_ledger(&a),
    };
    match result {
        Ok(output) => {
            println!("{output}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn resolve_knot(spec: &str) -> Result<KnotPresentation, CliError> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Input(format!("knot spec {spec:?}: expected kind:value")))?;
    match kind {
        "builtin" => match rest {
            "5_2" => Ok(builtin_5_2()),
            other => Err(CliError::Input(format!("unknown builtin knot {other:?}"))),
        },
        "twist" => {
            let k: u64 = rest
                .parse()
                .map_err(|_| CliError::Input(format!("twist parameter {rest:?}")))?;
            twist_knot(k).map_err(|e| CliError::Input(e.to_string()))
        }
        "two_bridge" => {
            let (p, q) = rest
                .split_once('/')
                .ok_or_else(|| CliError::Input("two_bridge:P/Q".into()))?;
            let p: u64 = p.parse().map_err(|_| CliError::Input(format!("bad p {p:?}")))?;
            let q: u64 = q.parse().map_err(|_| CliError::Input(format!("bad q {q:?}")))?;
            two_bridge_presentation(p, q).map_err(|e| CliError::Input(e.to_string()))
        }
        "file" => {
            let doc = std::fs::read_to_string(rest)
                .map_err(|e| CliError::Input(format!("cannot read {rest}: {e}")))?;
            parse_presentation(&doc).map_err(|e| CliError::Input(e.to_string()))
        }
        other => Err(CliError::Input(format!("unknown knot kind {other:?}"))),
    }
}

fn resolve_policy(common: &CommonArgs) -> Result<PrecisionPolicy, CliError> {
    let bits = match common.precision_bits {
        Some(b) => Some(b),
        None => match std::env::var("CSRS_PRECISION_BITS") {
            Ok(v) => Some(
                v.parse::<u32>()
                    .map_err(|_| CliError::Input(format!("CSRS_PRECISION_BITS={v:?}")))?,
            ),
            Err(_) => None,
        },
    };
    let policy = PrecisionPolicy::from_target_str(&common.target_error, bits, 3)
        .map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(tol) = &common.tolerance {
        let t = Float::parse(tol.as_str())
            .map_err(|e| CliError::Input(format!("bad tolerance: {e}")))?;
        let t = Float::with_val(policy.working_bits, t);
        let floor = Float::with_val(
            policy.working_bits,
            Float::i_exp(1, -(policy.working_bits as i32)),
        );
        if !(t.is_sign_positive() && !t.is_zero() && t > floor) {
            return Err(CliError::Input(
                "tolerance must be positive and above the machine floor at the working precision"
                    .into(),
            ));
        }
    }
    Ok(policy)
}

fn resolve_surgery(spec: &str) -> Result<SurgerySpec, CliError> {
    let (p, q) = spec
        .split_once('/')
        .ok_or_else(|| CliError::Input(format!("surgery {spec:?}: expected p/q")))?;
    let p: i64 = p.trim().parse().map_err(|_| CliError::Input(format!("bad p {p:?}")))?;
    let q: i64 = q.trim().parse().map_err(|_| CliError::Input(format!("bad q {q:?}")))?;
    if p.abs() != 1 || q == 0 {
        return Err(CliError::Input(format!(
            "surgery coefficient must be ±1/n (got {p}/{q})"
        )));
    }
    // p/q = 1/(q·p) since p = ±1.
    SurgerySpec::new(q * p).map_err(|e| CliError::Input(e.to_string()))
}

fn surgery_display(n: i64) -> String {
    if n < 0 {
        format!("-1/{}", -n)
    } else {
        format!("1/{n}")
    }
}

fn float_str(f: &Float, digits: usize) -> String {
    let s = f.to_string_radix(10, Some(digits));
    s.trim_end().to_string()
}

fn complex_strs(z: &AppComplex, digits: usize) -> (String, String) {
    (float_str(z.re(), digits), float_str(z.im(), digits))
}

fn cmd_riley(args: &RileyArgs) -> Result<String, CliError> {
    let pres = resolve_knot(&args.common.knot)?;
    let policy = resolve_policy(&args.common)?;
    let rd = riley_polynomial(&pres, &policy).map_err(|e| CliError::Computation(e.to_string()))?;
    let alexander = alexander_specialization(&rd).map_err(|e| CliError::Computation(e.to_string()))?;
    let dd1 = second_derivative_at_one(&alexander);

    match args.common.out {
        OutputFormat::Json => {
            let mut terms = Vec::new();
            for ((spow, upow), coeff) in rd.phi.iter() {
                terms.push(json!({
                    "t_halfpow": spow,
                    "u_pow": upow,
                    "coefficient": coeff.to_string(),
                }));
            }
            let branch: Vec<_> = rd
                .branch_points_t
                .iter()
                .map(|b| {
                    let (re, im) = complex_strs(b, 20);
                    json!({ "re": re, "im": im, "error": "root-finder certified at working precision" })
                })
                .collect();
            Ok(serde_json::to_string_pretty(&json!({
                "knot": pres.name,
                "phi_terms": terms,
                "phi_display": rd.phi.display("s", "u"),
                "deg_u": rd.deg_u,
                "alexander": display_in_t(&alexander),
                "alexander_second_derivative_at_1": dd1.to_string(),
                "discriminant": rd.disc_u.display("s"),
                "branch_points_t": branch,
                "excluded_t": [0.0, 1.0],
            }))
            .unwrap())
        }
        _ => {
            let mut out = String::new();
            out.push_str(&format!("knot: {}\n", pres.name));
            out.push_str(&format!("relator w: {}\n", pres.relator_w));
            out.push_str(&format!("longitude: {}\n", pres.longitude));
            out.push_str(&format!("phi(t,u) [s = t^(1/2)]: {}\n", rd.phi.display("s", "u")));
            out.push_str(&format!("deg_u: {}\n", rd.deg_u));
            out.push_str(&format!("Alexander: {}\n", display_in_t(&alexander)));
            out.push_str(&format!("Delta''(1): {dd1}\n"));
            out.push_str(&format!("branch points ({}):\n", rd.branch_points_t.len()));
            for b in &rd.branch_points_t {
                let (re, im) = complex_strs(b, 12);
                out.push_str(&format!("  {re} + {im} i\n"));
            }
            out.push_str("excluded: t = 0, t = 1\n");
            Ok(out.trim_end().to_string())
        }
    }
}

struct RepsOutput {
    pres: KnotPresentation,
    rd: RileyData,
    apoly: APoly,
    spec: SurgerySpec,
    reps: Vec<crate::repfinder::RepPoint>,
    casson: crate::repfinder::CassonVerdict,
}

fn compute_reps(
    knot: &str,
    surgery: &str,
    policy: &PrecisionPolicy,
) -> Result<RepsOutput, CliError> {
    let pres = resolve_knot(knot)?;
    let spec = resolve_surgery(surgery)?;
    let rd = riley_polynomial(&pres, policy).map_err(|e| CliError::Computation(e.to_string()))?;
    let apoly = if pres.name == "5_2" || pres.name == "K_2" {
        builtin_apoly_5_2()
    } else {
        eliminate_apoly(&rd, &pres).map_err(|e| CliError::Computation(e.to_string()))?
    };
    let reps = find_representations(&pres, &rd, &apoly, spec, policy)
        .map_err(|e| CliError::Computation(e.to_string()))?;
    let alexander =
        alexander_specialization(&rd).map_err(|e| CliError::Computation(e.to_string()))?;
    let dd1 = second_derivative_at_one(&alexander);
    let casson = casson_count_check(&dd1, spec, reps.len() as u64);
    Ok(RepsOutput { pres, rd, apoly, spec, reps, casson })
}

fn cmd_reps(args: &RepsArgs) -> Result<String, CliError> {
    let policy = resolve_policy(&args.common)?;
    let out = compute_reps(&args.common.knot, &args.surgery, &policy)?;

    match args.common.out {
        OutputFormat::Json => {
            let rows: Vec<_> = out
                .reps
                .iter()
                .map(|r| {
                    let (tre, tim) = complex_strs(&r.t, 20);
                    let (ure, uim) = complex_strs(&r.u, 20);
                    json!({
                        "class_id": r.class_id,
                        "t": {"re": tre, "im": tim},
                        "u": {"re": ure, "im": uim},
                        "epsilon": r.epsilon,
                        "residual_phi": format!("{:.3e}", r.residual_phi.to_f64()),
                        "residual_surgery": format!("{:.3e}", r.residual_surgery.to_f64()),
                        "coordinate_error": format!("{:.3e}", r.coord_error.to_f64()),
                        "is_su2": r.is_su2,
                        "is_nondegenerate": r.is_nondegenerate,
                    })
                })
                .collect();
            Ok(serde_json::to_string_pretty(&json!({
                "knot": out.pres.name,
                "surgery_n": out.spec.n,
                "a_polynomial": out.apoly.display(),
                "a_polynomial_source": out.apoly.source,
                "classes": rows,
                "casson": out.casson,
            }))
            .unwrap())
        }
        _ => {
            let mut s = String::new();
            s.push_str(&format!(
                "knot {} | surgery {} | A-polynomial [{}]\n",
                out.pres.name,
                surgery_display(out.spec.n),
                out.apoly.display()
            ));
            s.push_str("class |            t            |      u      | eps | su2 | nondeg | residuals\n");
            for r in &out.reps {
                s.push_str(&format!(
                    "{:>5} | {:>11.6} {:+11.6}i | {:>11.6} | {:>3} | {} | {} | phi {:.1e}, surg {:.1e}\n",
                    r.class_id,
                    r.t.re().to_f64(),
                    r.t.im().to_f64(),
                    r.u.re().to_f64(),
                    r.epsilon,
                    if r.is_su2 { "yes" } else { " no" },
                    if r.is_nondegenerate { "yes   " } else { " no   " },
                    r.residual_phi.to_f64(),
                    r.residual_surgery.to_f64(),
                ));
            }
            s.push_str(&format!(
                "casson: lambda = {}, expected 2|lambda| = {}, found {} -> {}\n",
                out.casson.lambda,
                out.casson.expected_classes,
                out.casson.found_classes,
                if out.casson.pass { "pass" } else { "FAIL" }
            ));
            Ok(s.trim_end().to_string())
        }
    }
}

fn load_hints(path: &Option<String>) -> Result<Vec<PlanHint>, CliError> {
    let Some(path) = path else {
        return Ok(Vec::new());
    };
    let doc = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read hints {path}: {e}")))?;
    #[derive(serde::Deserialize)]
    struct HintEntry {
        #[serde(default)]
        class_id: Option<usize>,
        waypoints: Vec<(f64, f64)>,
        #[serde(default)]
        basepoint: Option<String>,
    }
    #[derive(serde::Deserialize)]
    struct HintFile {
        paths: Vec<HintEntry>,
    }
    let file: HintFile =
        serde_json::from_str(&doc).map_err(|e| CliError::Input(format!("hints: {e}")))?;
    file.paths
        .into_iter()
        .map(|h| {
            let basepoint = match h.basepoint.as_deref() {
                None | Some("alexander") => HintBasepoint::Alexander,
                Some("trivial") => HintBasepoint::Trivial,
                Some(other) => {
                    return Err(CliError::Input(format!("unknown basepoint kind {other:?}")))
                }
            };
            Ok(PlanHint { class_id: h.class_id, waypoints: h.waypoints, basepoint })
        })
        .collect()
}

fn cmd_cs(args: &CsArgs) -> Result<String, CliError> {
    let policy = resolve_policy(&args.common)?;
    let out = compute_reps(&args.common.knot, &args.surgery, &policy)?;
    let hints = load_hints(&args.hints)?;
    let lambda11 = longitude_eigenvalue_poly(&out.pres);

    let candidates = plan_path_candidates(&out.rd, &out.reps, &hints, &policy, 8)
        .map_err(|e| CliError::Computation(e.to_string()))?;

    // Fan classes across threads; results keyed by class id for stable order.
    let threads = args.threads.max(1);
    let n = out.spec.n;
    let mirror = args.mirror;
    let mut results: Vec<Option<Result<(CSValue, Vec<(f64, f64, f64)>), String>>> =
        (0..candidates.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results_mutex = std::sync::Mutex::new(&mut results);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(candidates.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= candidates.len() {
                    break;
                }
                let mut last_err = String::from("no candidate plan");
                let mut got = None;
                for plan in &candidates[i] {
                    match cs_absolute(&out.rd, &lambda11, plan, n, &policy) {
                        Ok((v, evals)) => {
                            let v = if mirror { orientation_flip(&v) } else { v };
                            let route: Vec<(f64, f64, f64)> = evals
                                .iter()
                                .flat_map(|e| {
                                    e.trace.iter().map(|ts| {
                                        (ts.s, ts.t.re().to_f64(), ts.t.im().to_f64())
                                    })
                                })
                                .collect();
                            got = Some((v, route));
                            break;
                        }
                        Err(e) => last_err = e.to_string(),
                    }
                }
                let mut guard = results_mutex.lock().unwrap();
                guard[i] = Some(got.ok_or(last_err));
            });
        }
    });

    let digits = |v: &CSValue| (v.digits_certified as usize).clamp(6, 60);
    match args.common.out {
        OutputFormat::Json => {
            let mut rows = Vec::new();
            for (i, r) in results.iter().enumerate() {
                match r {
                    Some(Ok((v, _))) => rows.push(json!({
                        "class_id": out.reps[i].class_id,
                        "value_mod_1": float_str(&v.value_mod_1, digits(v)),
                        "error_bound": format!("{:.3e}", v.error_bound.to_f64()),
                        "digits_certified": v.digits_certified,
                        "orientation": if v.orientation_flipped { "flipped" } else { "as_computed" },
                    })),
                    Some(Err(e)) => rows.push(json!({
                        "class_id": out.reps[i].class_id,
                        "failure": e,
                    })),
                    None => {}
                }
            }
            Ok(serde_json::to_string_pretty(&json!({
                "knot": out.pres.name,
                "surgery_n": out.spec.n,
                "mirror": mirror,
                "casson": out.casson,
                "spectrum": rows,
            }))
            .unwrap())
        }
        OutputFormat::Table => {
            let mut s = String::new();
            s.push_str(&format!(
                "knot {} | surgery {} | {}\n",
                out.pres.name,
                surgery_display(out.spec.n),
                if mirror { "-cs (mirror convention)" } else { "cs (as computed)" }
            ));
            for (i, r) in results.iter().enumerate() {
                let rep = &out.reps[i];
                match r {
                    Some(Ok((v, _))) => s.push_str(&format!(
                        "class {:>2} | t = {:>9.6} {:+9.6}i | u = {:>9.6} | eps {:>2} | value {} (err {:.1e})\n",
                        rep.class_id,
                        rep.t.re().to_f64(),
                        rep.t.im().to_f64(),
                        rep.u.re().to_f64(),
                        rep.epsilon,
                        float_str(&v.value_mod_1, digits(v)),
                        v.error_bound.to_f64()
                    )),
                    Some(Err(e)) => {
                        s.push_str(&format!("class {:>2} | FAILED: {e}\n", rep.class_id))
                    }
                    None => {}
                }
            }
            s.push_str(&format!(
                "casson: lambda = {} -> {}\n",
                out.casson.lambda,
                if out.casson.pass { "pass" } else { "FAIL" }
            ));
            Ok(s.trim_end().to_string())
        }
        OutputFormat::Svg => {
            Ok(render_svg(&out, &results))
        }
    }
}

/// Representation circle and t-plane routes as a small standalone SVG.
fn render_svg(
    out: &RepsOutput,
    results: &[Option<Result<(CSValue, Vec<(f64, f64, f64)>), String>>],
) -> String {
    let scale = 180.0;
    let cx = 260.0;
    let cy = 260.0;
    let map = |re: f64, im: f64| (cx + scale * re, cy - scale * im);
    let mut s = String::new();
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" height=\"520\" viewBox=\"0 0 520 520\">\n",
    );
    s.push_str("<rect width=\"520\" height=\"520\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{scale}\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n"
    ));
    // Routes (blue polylines).
    for r in results.iter().flatten() {
        if let Ok((_, route)) = r {
            if route.is_empty() {
                continue;
            }
            let pts: Vec<String> = route
                .iter()
                .map(|(_, re, im)| {
                    let (x, y) = map(*re, *im);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            s.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#3366cc\" stroke-width=\"1\"/>\n",
                pts.join(" ")
            ));
        }
    }
    // Branch points (orange).
    for b in &out.rd.branch_points_t {
        let (x, y) = map(b.re().to_f64(), b.im().to_f64());
        if x.is_finite() && y.is_finite() && (0.0..520.0).contains(&x) && (0.0..520.0).contains(&y) {
            s.push_str(&format!(
                "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"#ff8800\"/>\n"
            ));
        }
    }
    // Excluded points.
    for t in [0.0, 1.0] {
        let (x, y) = map(t, 0.0);
        s.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"none\" stroke=\"#444\"/>\n"
        ));
    }
    // Representations (blue dots, labeled).
    for rep in &out.reps {
        let (x, y) = map(rep.t.re().to_f64(), rep.t.im().to_f64());
        s.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"#2244aa\"/>\n"
        ));
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" fill=\"#222\">rho{} ({})</text>\n",
            x + 7.0,
            y - 5.0,
            rep.class_id + 1,
            rep.epsilon
        ));
    }
    s.push_str("</svg>");
    s
}

fn cmd_ledger(args: &LedgerArgs) -> Result<String, CliError> {
    let mut store = FactStore::new();
    if let Some(path) = &args.facts {
        let doc = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read facts {path}: {e}")))?;
        load_facts(&mut store, &doc).map_err(|e| CliError::Input(e.to_string()))?;
    }
    let outcome = run_query(&mut store, &args.query).map_err(|e| match e {
        crate::rscalc::LedgerError::Parse(m) => CliError::Input(m),
        other => CliError::Computation(other.to_string()),
    })?;
    match args.out {
        OutputFormat::Json => Ok(ledger_json(&outcome)),
        _ => Ok(ledger_table(&outcome)),
    }
}

fn ledger_json(outcome: &QueryOutcome) -> String {
    let v = match outcome {
        QueryOutcome::RValueResult { subject, value, trace } => json!({
            "query": "r0",
            "subject": subject.to_string(),
            "value": value.to_string(),
            "exact": matches!(value, crate::rscalc::RValue::Exact(_) | crate::rscalc::RValue::Infinity),
            "trace": trace,
        }),
        QueryOutcome::MembershipResult { subject, r, verdict } => json!({
            "query": "member",
            "subject": subject.to_string(),
            "r": r.to_string(),
            "verdict": match verdict {
                Membership::Member => "true",
                Membership::NonMember => "false",
                Membership::Undecidable => "undecidable",
            },
        }),
        QueryOutcome::IndependenceResult { chain, trace } => json!({
            "query": "independent",
            "chain": chain.iter().map(|(e, v)| json!({"generator": e.to_string(), "r0": v.to_string()})).collect::<Vec<_>>(),
            "verdict": "linearly independent",
            "trace": trace,
        }),
        QueryOutcome::DInfResult { x, y, lower_bound, exact, trace } => json!({
            "query": "dinf",
            "x": x.to_string(),
            "y": y.to_string(),
            "lower_bound": lower_bound.to_string(),
            "exact": exact,
            "trace": trace,
        }),
        QueryOutcome::SInfResult { subject, value, is_exact, trace } => json!({
            "query": "sinf",
            "subject": subject.to_string(),
            "value": value.as_ref().map(|q| q.to_string()).unwrap_or_else(|| "-inf".into()),
            "kind": if *is_exact { "equality" } else { "upper_bound" },
            "trace": trace,
        }),
    };
    serde_json::to_string_pretty(&v).unwrap()
}

fn ledger_table(outcome: &QueryOutcome) -> String {
    let mut s = String::new();
    match outcome {
        QueryOutcome::RValueResult { subject, value, trace } => {
            s.push_str(&format!("r0( {subject} ) = {value}\n"));
            s.push_str("proof trace:\n");
            for line in trace {
                s.push_str(&format!("  {line}\n"));
            }
        }
        QueryOutcome::MembershipResult { subject, r, verdict } => {
            s.push_str(&format!(
                "member( {subject}, r={r} ) = {}\n",
                match verdict {
                    Membership::Member => "true",
                    Membership::NonMember => "false",
                    Membership::Undecidable => "undecidable",
                }
            ));
        }
        QueryOutcome::IndependenceResult { chain, trace } => {
            s.push_str("linearly independent in Theta^3_Z; decreasing chain:\n");
            for (e, v) in chain {
                s.push_str(&format!("  r0( {e} ) = {v}\n"));
            }
            s.push_str("proof trace:\n");
            for line in trace {
                s.push_str(&format!("  {line}\n"));
            }
        }
        QueryOutcome::DInfResult { x, y, lower_bound, exact, trace } => {
            s.push_str(&format!(
                "d_inf( {x}, {y} ) {} {lower_bound}\n",
                if *exact { "=" } else { ">=" }
            ));
            for line in trace {
                s.push_str(&format!("  {line}\n"));
            }
        }
        QueryOutcome::SInfResult { subject, value, is_exact, trace } => {
            let v = value.as_ref().map(|q| q.to_string()).unwrap_or_else(|| "-inf".into());
            s.push_str(&format!(
                "s_inf( {subject} ) {} {v}\n",
                if *is_exact { "=" } else { "<=" }
            ));
            for line in trace {
                s.push_str(&format!("  {line}\n"));
            }
        }
    }
    s.trim_end().to_string()
}

/// Convenience wrapper used by tests: run the CLI capturing stdout-style
/// output instead of printing.
pub fn run_capturing<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => return (if e.use_stderr() { 2 } else { 0 }, e.to_string()),
    };
    let result = match cli.command {
        Command::Riley(a) => cmd_riley(&a),
        Command::Reps(a) => cmd_reps(&a),
        Command::Cs(a) => cmd_cs(&a),
        Command::Ledger(a) => cmd_ledger(&a),
    };
    match result {
        Ok(out) => (0, out),
        Err(e) => (e.code(), e.message().to_string()),
    }
}

/// Used by the binary entry point.
pub fn main() -> i32 {
    let _ = std::io::stdout().flush();
    main_with_args(std::env::args_os())
}

// `Rational` appears in this module only through the ledger query types.
#[allow(unused_imports)]
use Rational as _RationalUsed;
