//! Output formatting for the CLI: JSON envelopes, CSV tables and text.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Map, Number, Value};
use trajent::linalg::DenseMatrix;
use trajent::mc::{McEstimate, McPair};
use trajent::report::{TheoremCheck, VelocityReport};
use trajent::{ChainAnalysis, ChainStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LogBase {
    #[value(name = "e")]
    E,
    #[value(name = "2")]
    Two,
}

impl LogBase {
    /// Multiplier converting nats to the display unit.
    pub fn factor(self) -> f64 {
        match self {
            Self::E => 1.0,
            Self::Two => 1.0 / std::f64::consts::LN_2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::E => "e",
            Self::Two => "2",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Self::E => "nats",
            Self::Two => "bits",
        }
    }
}

/// A JSON number with 17 significant digits; non-finite values become null.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format!("{x:.16e}")).expect("valid JSON number"))
    } else {
        Value::Null
    }
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn vector(xs: &[f64], scale: f64) -> Value {
    Value::Array(xs.iter().map(|&x| num(x * scale)).collect())
}

fn matrix(m: &DenseMatrix, scale: f64) -> Value {
    Value::Array(m.rows().map(|r| vector(r, scale)).collect())
}

fn structure_json(s: &ChainStructure) -> Value {
    json!({
        "irreducible": s.irreducible,
        "reversible": s.reversible,
        "constant_row_entropy": s.constant_row_entropy,
        "deterministic": s.deterministic,
        "structure_tol": num(s.structure_tol),
    })
}

fn check_json(c: &TheoremCheck) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), json!(c.id.as_str()));
    m.insert("applicable".into(), json!(c.applicable));
    m.insert("max_residual".into(), opt_num(c.max_residual));
    m.insert("passed".into(), c.passed.map_or(Value::Null, Value::Bool));
    if let Some(s) = c.slacks {
        m.insert("slacks".into(), json!({ "lower": num(s.lower), "upper": num(s.upper) }));
    }
    m.insert("detail".into(), json!(c.detail));
    Value::Object(m)
}

fn meta(command: &str, a: &ChainAnalysis, base: LogBase, tol: f64) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "n": a.n(),
        "log_base": base.label(),
        "entropy_unit": base.unit(),
        "residual_unit": "nats",
        "tolerance": num(tol),
        "row_correction": num(a.matrix.max_correction()),
    })
}

fn scalars_json(a: &ChainAnalysis, base: LogBase) -> Value {
    let f = base.factor();
    let spec = a.spectral.as_ref();
    json!({
        "rate": num(a.entropy.rate * f),
        "t_av": num(a.hitting.average()),
        "H_av": num(a.trajectory.average() * f),
        "t_rel": opt_num(spec.map(|s| s.relaxation_time)),
        "eigentime": opt_num(spec.map(|s| s.eigentime)),
        "route_disagreement": num(a.route_disagreement()),
    })
}

fn matrices_json(a: &ChainAnalysis, base: LogBase) -> Value {
    let f = base.factor();
    let mut m = Map::new();
    m.insert("P".into(), matrix(a.matrix.as_dense(), 1.0));
    m.insert("stationary".into(), vector(a.stationary.as_slice(), 1.0));
    m.insert("row_entropy".into(), vector(&a.entropy.row_entropy, f));
    m.insert("hitting_time".into(), matrix(a.hitting.expected(), 1.0));
    m.insert("return_time".into(), vector(a.hitting.return_times(), 1.0));
    m.insert("commute_time".into(), matrix(a.hitting.commute(), 1.0));
    m.insert("trajectory_entropy".into(), matrix(a.trajectory.matrix(), f));
    m.insert("commute_entropy".into(), matrix(a.trajectory.commute(), f));
    if let Some(s) = &a.spectral {
        m.insert("eigenvalues".into(), vector(&s.eigenvalues, 1.0));
    }
    Value::Object(m)
}

pub fn analyze_json(a: &ChainAnalysis, base: LogBase, tol: f64) -> Value {
    json!({
        "meta": meta("analyze", a, base, tol),
        "structure": structure_json(&a.structure),
        "scalars": scalars_json(a, base),
        "matrices": matrices_json(a, base),
        "checks": [],
    })
}

pub fn verify_json(a: &ChainAnalysis, r: &VelocityReport, base: LogBase) -> Value {
    let mut meta = meta("verify", a, base, r.tolerance);
    meta["all_passed"] = json!(r.all_passed());
    json!({
        "meta": meta,
        "structure": structure_json(&r.structure),
        "scalars": scalars_json(a, base),
        "matrices": { "stationary": vector(a.stationary.as_slice(), 1.0) },
        "checks": r.checks.iter().map(check_json).collect::<Vec<_>>(),
    })
}

fn estimate_json(e: &McEstimate, scale: f64, analytic: f64) -> Value {
    json!({
        "mean": num(e.mean * scale),
        "std_error": num(e.std_error * scale),
        "samples": e.samples,
        "truncated": e.truncated,
        "unreliable": e.unreliable(),
        "seed": e.seed,
        "step_cap": e.step_cap,
        "analytic": num(analytic * scale),
        "z_score": num(e.z_score(analytic)),
    })
}

pub struct SimulationView<'a> {
    pub pair: &'a McPair,
    pub n: usize,
    pub from: usize,
    pub to: usize,
    pub workers: usize,
    pub analytic_entropy: f64,
    pub analytic_hitting: f64,
}

pub fn simulate_json(s: &SimulationView<'_>, base: LogBase) -> Value {
    json!({
        "meta": {
            "command": "simulate",
            "version": env!("CARGO_PKG_VERSION"),
            "n": s.n,
            "from": s.from,
            "to": s.to,
            "log_base": base.label(),
            "entropy_unit": base.unit(),
            "workers": s.workers,
        },
        "trajectory_entropy": estimate_json(&s.pair.entropy, base.factor(), s.analytic_entropy),
        "hitting_time": estimate_json(&s.pair.hitting, 1.0, s.analytic_hitting),
    })
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn csv_cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

pub fn analyze_csv(a: &ChainAnalysis, base: LogBase) -> String {
    let f = base.factor();
    let mut out = String::from("quantity,i,j,value\n");
    let mut scalar = |name: &str, x: f64| {
        let _ = writeln!(out, "{name},,,{}", csv_cell(x));
    };
    scalar("rate", a.entropy.rate * f);
    scalar("t_av", a.hitting.average());
    scalar("H_av", a.trajectory.average() * f);
    if let Some(s) = &a.spectral {
        scalar("t_rel", s.relaxation_time);
        scalar("eigentime", s.eigentime);
    }
    let mut vec_rows = |name: &str, xs: &[f64], scale: f64| {
        for (i, &x) in xs.iter().enumerate() {
            let _ = writeln!(out, "{name},{i},,{}", csv_cell(x * scale));
        }
    };
    vec_rows("stationary", a.stationary.as_slice(), 1.0);
    vec_rows("row_entropy", &a.entropy.row_entropy, f);
    vec_rows("return_time", a.hitting.return_times(), 1.0);
    if let Some(s) = &a.spectral {
        vec_rows("eigenvalue", &s.eigenvalues, 1.0);
    }
    let mut mat_rows = |name: &str, m: &DenseMatrix, scale: f64| {
        for (i, r) in m.rows().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                let _ = writeln!(out, "{name},{i},{j},{}", csv_cell(x * scale));
            }
        }
    };
    mat_rows("hitting_time", a.hitting.expected(), 1.0);
    mat_rows("commute_time", a.hitting.commute(), 1.0);
    mat_rows("trajectory_entropy", a.trajectory.matrix(), f);
    mat_rows("commute_entropy", a.trajectory.commute(), f);
    out
}

pub fn verify_csv(r: &VelocityReport) -> String {
    let mut out = String::from("id,applicable,passed,max_residual,detail\n");
    for c in &r.checks {
        let passed = c.passed.map_or(String::new(), |p| p.to_string());
        let residual = c.max_residual.map_or(String::new(), csv_cell);
        let _ = writeln!(
            out,
            "{},{},{},{},\"{}\"",
            c.id,
            c.applicable,
            passed,
            residual,
            c.detail.replace('"', "\"\"")
        );
    }
    out
}

pub fn simulate_csv(s: &SimulationView<'_>, base: LogBase) -> String {
    let mut out =
        String::from("quantity,mean,std_error,samples,truncated,seed,step_cap,analytic,z_score\n");
    for (name, e, scale, analytic) in [
        ("trajectory_entropy", &s.pair.entropy, base.factor(), s.analytic_entropy),
        ("hitting_time", &s.pair.hitting, 1.0, s.analytic_hitting),
    ] {
        let _ = writeln!(
            out,
            "{name},{},{},{},{},{},{},{},{}",
            csv_cell(e.mean * scale),
            csv_cell(e.std_error * scale),
            e.samples,
            e.truncated,
            e.seed,
            e.step_cap,
            csv_cell(analytic * scale),
            csv_cell(e.z_score(analytic)),
        );
    }
    out
}

fn text_matrix(out: &mut String, title: &str, m: &DenseMatrix, scale: f64) {
    let _ = writeln!(out, "{title}:");
    for r in m.rows() {
        let cells: Vec<String> = r.iter().map(|x| format!("{:>12.6}", x * scale)).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

fn text_vector(out: &mut String, title: &str, xs: &[f64], scale: f64) {
    let cells: Vec<String> = xs.iter().map(|x| format!("{:.6}", x * scale)).collect();
    let _ = writeln!(out, "{title}: [{}]", cells.join(", "));
}

fn text_structure(out: &mut String, s: &ChainStructure) {
    let _ = writeln!(
        out,
        "structure: irreducible={} reversible={} constant_row_entropy={} deterministic={}",
        s.irreducible, s.reversible, s.constant_row_entropy, s.deterministic
    );
}

pub fn analyze_text(a: &ChainAnalysis, base: LogBase) -> String {
    let f = base.factor();
    let unit = base.unit();
    let mut out = String::new();
    let _ = writeln!(out, "states: {}", a.n());
    text_structure(&mut out, &a.structure);
    text_vector(&mut out, "stationary", a.stationary.as_slice(), 1.0);
    text_vector(&mut out, &format!("row entropy ({unit})"), &a.entropy.row_entropy, f);
    let _ = writeln!(out, "entropy rate: {:.10} {unit}", a.entropy.rate * f);
    let _ = writeln!(out, "average hitting time t_av: {:.10}", a.hitting.average());
    let _ = writeln!(out, "average entropy H_av: {:.10} {unit}", a.trajectory.average() * f);
    if let Some(s) = &a.spectral {
        text_vector(&mut out, "eigenvalues", &s.eigenvalues, 1.0);
        let _ = writeln!(out, "relaxation time t_rel: {:.10}", s.relaxation_time);
        let _ = writeln!(out, "eigentime: {:.10}", s.eigentime);
    }
    let _ = writeln!(out, "route disagreement: {:.3e}", a.route_disagreement());
    text_matrix(&mut out, "hitting time E_i(tau_j)", a.hitting.expected(), 1.0);
    text_vector(&mut out, "return time", a.hitting.return_times(), 1.0);
    text_matrix(&mut out, &format!("trajectory entropy H_ij ({unit})"), a.trajectory.matrix(), f);
    text_matrix(&mut out, "commute time", a.hitting.commute(), 1.0);
    text_matrix(&mut out, &format!("commute entropy ({unit})"), a.trajectory.commute(), f);
    out
}

pub fn verify_text(a: &ChainAnalysis, r: &VelocityReport, base: LogBase) -> String {
    let f = base.factor();
    let mut out = String::new();
    let _ = writeln!(out, "states: {}  tolerance: {:e}", r.n, r.tolerance);
    text_structure(&mut out, &r.structure);
    let _ = writeln!(
        out,
        "rate {:.10}  t_av {:.10}  H_av {:.10} ({})",
        r.scalars.rate * f,
        r.scalars.t_av,
        r.scalars.h_av * f,
        base.unit()
    );
    if let (Some(t), Some(e)) = (r.scalars.t_rel, r.scalars.eigentime) {
        let _ = writeln!(out, "t_rel {t:.10}  eigentime {e:.10}");
    }
    let _ = writeln!(out, "route disagreement {:.3e}", a.route_disagreement());
    let _ = writeln!(out, "{:<20} {:<8} {:<12} detail", "check", "status", "residual");
    for c in &r.checks {
        let status = match c.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "n/a",
        };
        let residual = c.max_residual.map_or("-".to_string(), |x| format!("{x:.3e}"));
        let _ = writeln!(out, "{:<20} {:<8} {:<12} {}", c.id, status, residual, c.detail);
    }
    let passed = r.applicable().filter(|c| c.passed == Some(true)).count();
    let _ = writeln!(out, "{passed}/{} applicable checks passed", r.applicable().count());
    out
}

pub fn simulate_text(s: &SimulationView<'_>, base: LogBase) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "trajectories {} -> {} on {} states", s.from, s.to, s.n);
    for (name, e, scale, analytic) in [
        ("trajectory entropy", &s.pair.entropy, base.factor(), s.analytic_entropy),
        ("hitting time", &s.pair.hitting, 1.0, s.analytic_hitting),
    ] {
        let _ = writeln!(
            out,
            "{name:<19} mean {:.8} ± {:.2e}  analytic {:.8}  z {:+.3}",
            e.mean * scale,
            e.std_error * scale,
            analytic * scale,
            e.z_score(analytic)
        );
    }
    let e = &s.pair.entropy;
    let _ = writeln!(
        out,
        "samples {}  truncated {}  seed {}  step cap {}{}",
        e.samples,
        e.truncated,
        e.seed,
        e.step_cap,
        if e.unreliable() { "  (UNRELIABLE: truncation)" } else { "" }
    );
    out
}
