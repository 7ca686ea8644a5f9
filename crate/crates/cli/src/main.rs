//! `ellagm`: periods, elliptic logarithms and AGM values from the command line.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;
use serde_json::{json, Map, Value};

use ellagm_core::agm::{agm_scheduled, AgmPair, SignSet};
use ellagm_core::agm_values::{classify_in_basis, coset_basis, expected_residues};
use ellagm_core::curve::{
    invariants_from_coeffs, roots_from_invariants, CurveInvariants, CurveRoots, Point,
    WeierstrassCoeffs,
};
use ellagm_core::elog::{elog_2torsion, elog_with_periods, ElogResult};
use ellagm_core::lattice::ReduceMode;
use ellagm_core::numerics::{cnum_to_json, format_cnum, format_real, parse_cnum, CNum, PrecisionContext};
use ellagm_core::oracle::wp;
use ellagm_core::periods::{period_basis, PeriodTriple};
use ellagm_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "ellagm", version, about = "Periods and elliptic logarithms of complex elliptic curves via the optimal AGM")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal (or scheduled) AGM of two complex numbers.
    Agm {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// Steps (1-based) at which the bad square root is taken, e.g. "1,3".
        #[arg(long)]
        schedule: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Period triple and lattice of a curve.
    Periods {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Elliptic logarithm of a point.
    Elog {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value_t = Reduce::Strip)]
        reduce: Reduce,
        #[command(flatten)]
        out: Output,
    },
    /// Weierstrass ℘ and ℘' of the curve's lattice at z.
    Wp {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[command(flatten)]
        out: Output,
    },
    /// Locate AGM values π/M_S(±a, ±b) in the lattice of (a, b).
    AgmValues {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// A single schedule; by default every subset of {1..5}.
        #[arg(long)]
        schedule: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Run the consistency checks for a curve (and optionally a point).
    Verify {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        point: OptPointArgs,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CurveArgs {
    /// Roots of 4(X - e1)(X - e2)(X - e3).
    #[arg(long, num_args = 3, value_names = ["E1", "E2", "E3"], allow_hyphen_values = true)]
    roots: Option<Vec<String>>,
    /// Y^2 = 4X^3 - g2 X - g3.
    #[arg(long = "g-invariants", num_args = 2, value_names = ["G2", "G3"], allow_hyphen_values = true)]
    g_invariants: Option<Vec<String>>,
    /// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
    #[arg(long = "a-invariants", num_args = 5, value_names = ["A1", "A2", "A3", "A4", "A6"], allow_hyphen_values = true)]
    a_invariants: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true, required = true)]
    point: Vec<String>,
}

#[derive(Args, Debug)]
struct OptPointArgs {
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true)]
    point: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct Output {
    /// Decimal digits of precision (and of printed fractional parts).
    #[arg(long, default_value_t = 100)]
    digits: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Reduce {
    /// -1/2 < Re(z/w1) <= 1/2 only.
    Strip,
    /// Both lattice coordinates in [0, 1).
    Fundamental,
}

/// A curve as given on the command line, with the map from its points to
/// the model `Y^2 = 4(X - e1)(X - e2)(X - e3)`.
struct Curve {
    roots: CurveRoots,
    coeffs: Option<WeierstrassCoeffs>,
}

impl Curve {
    fn parse(args: &CurveArgs, ctx: &PrecisionContext) -> Result<Curve> {
        let nums = |v: &[String]| -> Result<Vec<CNum>> { v.iter().map(|s| parse_cnum(s, ctx)).collect() };
        if let Some(r) = &args.roots {
            let e = nums(r)?;
            let roots = CurveRoots::new(e[0].clone(), e[1].clone(), e[2].clone(), ctx)?;
            return Ok(Curve { roots, coeffs: None });
        }
        if let Some(g) = &args.g_invariants {
            let g = nums(g)?;
            let inv = CurveInvariants::new(g[0].clone(), g[1].clone(), ctx)?;
            let roots = roots_from_invariants(&inv, ctx)?;
            return Ok(Curve { roots, coeffs: None });
        }
        let a = nums(args.a_invariants.as_deref().unwrap_or_default())?;
        if a.len() != 5 {
            return Err(Error::InvalidInput("expected five a-invariants".into()));
        }
        let coeffs = WeierstrassCoeffs {
            a1: a[0].clone(),
            a2: a[1].clone(),
            a3: a[2].clone(),
            a4: a[3].clone(),
            a6: a[4].clone(),
        };
        let inv = invariants_from_coeffs(&coeffs, ctx)?;
        let roots = roots_from_invariants(&inv, ctx)?;
        Ok(Curve {
            roots,
            coeffs: Some(coeffs),
        })
    }

    /// Parse a point, move it to the root model, and check it lies on the
    /// curve to relative `10^(-digits/2)`.
    fn point(&self, xy: &[String], ctx: &PrecisionContext) -> Result<Point> {
        let x = parse_cnum(&xy[0], ctx)?;
        let y = parse_cnum(&xy[1], ctx)?;
        let p = Point::affine(x, y);
        let p = match &self.coeffs {
            Some(w) => w.to_short_point(&p),
            None => p,
        };
        let tol = ctx.ten_pow_neg((ctx.target_digits / 2) as i32);
        if !self.roots.contains(&p, &tol) {
            return Err(Error::OffCurve("the point does not satisfy the curve equation".into()));
        }
        Ok(p)
    }
}

fn context(digits: u32) -> Result<PrecisionContext> {
    PrecisionContext::new(digits)
}

fn real_json(x: &Float, digits: u32) -> Value {
    Value::String(format_real(x, digits))
}

/// Rendered result: JSON object plus the same fields as text lines.
struct Report {
    fields: Map<String, Value>,
}

impl Report {
    fn new() -> Self {
        Report { fields: Map::new() }
    }

    fn put(&mut self, key: &str, v: Value) {
        self.fields.insert(key.to_string(), v);
    }

    fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string_pretty(&Value::Object(self.fields.clone())).unwrap_or_default();
        }
        let mut out = String::new();
        for (k, v) in &self.fields {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&text(v));
            out.push('\n');
        }
        out.pop();
        out
    }
}

/// Text form of a JSON value: complex numbers as `re±imi`.
fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(o) if o.len() == 2 && o.contains_key("re") && o.contains_key("im") => {
            let re = o["re"].as_str().unwrap_or("");
            let im = o["im"].as_str().unwrap_or("");
            if im.starts_with('-') {
                format!("{re}{im}i")
            } else {
                format!("{re}+{im}i")
            }
        }
        Value::Object(o) => {
            let parts: Vec<String> = o.iter().map(|(k, v)| format!("{k}: {}", text(v))).collect();
            format!("{{{}}}", parts.join(", "))
        }
        Value::Array(a) => {
            let parts: Vec<String> = a.iter().map(text).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn periods_report(t: &PeriodTriple, digits: u32) -> Report {
    let mut r = Report::new();
    r.put("w1", cnum_to_json(&t.w1, digits));
    r.put("w2", cnum_to_json(&t.w2, digits));
    r.put("w3", cnum_to_json(&t.w3, digits));
    r.put("rectangular", Value::Bool(t.rectangular));
    r.put(
        "ortho_basis",
        match &t.ortho_basis {
            Some((a, b)) => json!([cnum_to_json(a, digits), cnum_to_json(b, digits)]),
            None => Value::Null,
        },
    );
    r.put(
        "lattice",
        json!([cnum_to_json(&t.lattice.w1, digits), cnum_to_json(&t.lattice.w2, digits)]),
    );
    r
}

fn elog_report(e: &ElogResult, t: &PeriodTriple, reduce: Reduce, digits: u32) -> Report {
    let z = match reduce {
        Reduce::Strip => e.z.clone(),
        Reduce::Fundamental => t.lattice.reduce_mod(&e.z, ReduceMode::Fundamental),
    };
    let k = t.lattice.coordinates(&z);
    let mut r = Report::new();
    r.put("z", cnum_to_json(&z, digits));
    r.put("coords", json!({"u": real_json(&k.u, digits), "v": real_json(&k.v, digits)}));
    r.put("m", cnum_to_json(&e.m, digits));
    r.put("iterations", json!(e.iterations));
    r.put("tie_broken", Value::Bool(e.tie_broken));
    r
}

fn run_agm(a: &str, b: &str, schedule: Option<&str>, out: &Output) -> Result<String> {
    let ctx = context(out.digits)?;
    let pair = AgmPair::new(parse_cnum(a, &ctx)?, parse_cnum(b, &ctx)?, &ctx)?;
    let s: SignSet = schedule.map(str::parse).transpose()?.unwrap_or_else(SignSet::empty);
    let res = agm_scheduled(&pair, &s, &ctx)?;
    let mut r = Report::new();
    r.put("m", cnum_to_json(&res.m, out.digits));
    r.put("iterations", json!(res.iterations));
    r.put("tie_broken", Value::Bool(res.tie_broken));
    r.put("schedule", Value::String(res.schedule.to_string()));
    Ok(r.render(out.json))
}

fn run_periods(curve: &CurveArgs, out: &Output) -> Result<String> {
    let ctx = context(out.digits)?;
    let c = Curve::parse(curve, &ctx)?;
    let t = period_basis(&c.roots, &ctx)?;
    Ok(periods_report(&t, out.digits).render(out.json))
}

fn run_elog(curve: &CurveArgs, point: &[String], reduce: Reduce, out: &Output) -> Result<String> {
    let ctx = context(out.digits)?;
    let c = Curve::parse(curve, &ctx)?;
    let p = c.point(point, &ctx)?;
    let t = period_basis(&c.roots, &ctx)?;
    let e = match elog_with_periods(&t, &p, &ctx) {
        Err(Error::TwoTorsionInput) => {
            let Point::Affine { x, .. } = &p else {
                return Err(Error::InfinityInput);
            };
            let which = (0..3)
                .min_by(|&i, &j| {
                    let d = |k: usize| c.roots.as_array()[k].dist(x);
                    d(i).partial_cmp(&d(j)).unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(0);
            elog_2torsion(&c.roots, which, &ctx)?
        }
        other => other?,
    };
    Ok(elog_report(&e, &t, reduce, out.digits).render(out.json))
}

fn run_wp(curve: &CurveArgs, z: &str, out: &Output) -> Result<String> {
    let ctx = context(out.digits)?;
    let c = Curve::parse(curve, &ctx)?;
    let t = period_basis(&c.roots, &ctx)?;
    let z = parse_cnum(z, &ctx)?;
    let v = wp(&z, &t.lattice, &ctx)?;
    // ℘ refers to the centered model; report X on the curve as given
    let x = &v.wp + &c.roots.shift();
    let mut r = Report::new();
    r.put("wp", cnum_to_json(&x, out.digits));
    r.put("wp_prime", cnum_to_json(&v.wp_prime, out.digits));
    Ok(r.render(out.json))
}

fn run_agm_values(a: &str, b: &str, schedule: Option<&str>, out: &Output) -> Result<String> {
    let ctx = context(out.digits)?;
    let a = parse_cnum(a, &ctx)?;
    let b = parse_cnum(b, &ctx)?;
    AgmPair::new(a.clone(), b.clone(), &ctx)?;
    let basis = coset_basis(&a, &b, &ctx)?;
    let schedules: Vec<SignSet> = match schedule {
        Some(s) => vec![s.parse()?],
        None => SignSet::all_subsets(5).collect(),
    };
    let mut reports = Vec::new();
    let mut violations = 0usize;
    for s in &schedules {
        for (sa, sb) in [(1i8, 1i8), (1, -1), (-1, -1), (-1, 1)] {
            let mut entry = Map::new();
            entry.insert("schedule".into(), Value::String(s.to_string()));
            entry.insert("signs".into(), json!([sa, sb]));
            entry.insert("expected_residues".into(), json!(expected_residues(sa, sb)));
            match classify_in_basis(&basis, &a, &b, s, sa, sb, &ctx) {
                Ok(rep) => {
                    entry.insert("value".into(), cnum_to_json(&rep.value, out.digits));
                    entry.insert("u".into(), Value::String(rep.u.to_string()));
                    entry.insert("v".into(), Value::String(rep.v.to_string()));
                    entry.insert("residues".into(), json!(rep.residues));
                    entry.insert("primitive".into(), Value::Bool(rep.primitive));
                    entry.insert("ok".into(), Value::Bool(true));
                }
                Err(Error::CosetViolation(msg)) => {
                    violations += 1;
                    entry.insert("ok".into(), Value::Bool(false));
                    entry.insert("violation".into(), Value::String(msg));
                }
                Err(e) => return Err(e),
            }
            reports.push(Value::Object(entry));
        }
    }
    if out.json {
        let doc = json!({
            "w": cnum_to_json(&basis.w1, out.digits),
            "w_prime": cnum_to_json(&basis.w2, out.digits),
            "reports": reports,
            "violations": violations,
        });
        return Ok(serde_json::to_string_pretty(&doc).unwrap_or_default());
    }
    let mut lines = vec![
        format!("w = {}", format_cnum(&basis.w1, out.digits)),
        format!("w' = {}", format_cnum(&basis.w2, out.digits)),
    ];
    for r in &reports {
        lines.push(format!(
            "S = {} signs = {}: {}",
            r["schedule"].as_str().unwrap_or(""),
            text(&r["signs"]),
            if r["ok"] == Value::Bool(true) {
                format!(
                    "(u, v) = ({}, {}) residues {}",
                    r["u"].as_str().unwrap_or(""),
                    r["v"].as_str().unwrap_or(""),
                    text(&r["residues"])
                )
            } else {
                format!("VIOLATION {}", r["violation"].as_str().unwrap_or(""))
            }
        ));
    }
    lines.push(format!("violations = {violations}"));
    Ok(lines.join("\n"))
}

struct Check {
    name: String,
    residual: Float,
    passed: bool,
}

fn run_verify(curve: &CurveArgs, point: Option<&[String]>, out: &Output) -> Result<(String, bool)> {
    let ctx = context(out.digits)?;
    let c = Curve::parse(curve, &ctx)?;
    let p = point.map(|xy| c.point(xy, &ctx)).transpose()?;
    let t = period_basis(&c.roots, &ctx)?;
    let bound = ctx.ten_pow_neg(out.digits as i32 - 10);
    let spread = c.roots.spread().max(&ctx.real(1.0));
    let mut checks: Vec<Check> = Vec::new();
    let mut push = |name: String, residual: Float, limit: &Float| {
        let passed = residual <= *limit;
        checks.push(Check { name, residual, passed });
    };

    // w3 = ±w1 ± w2
    let scale = Float::with_val(ctx.work_bits, t.w1.abs() + t.w2.abs());
    let rel = [&t.w1 + &t.w2, &t.w1 - &t.w2]
        .iter()
        .flat_map(|s| [t.w3.dist(s), (&t.w3 + s).abs()])
        .fold(None::<Float>, |m, x| Some(m.map_or(x.clone(), |m| m.min(&x))))
        .unwrap_or_else(|| ctx.real(1.0))
        / &scale;
    push("w3 = ±w1 ± w2".into(), rel, &bound);

    // half periods: ℘(w_j/2) = e_j, ℘'(w_j/2) = 0, w_j minimal in its coset
    if let Some(sel) = &t.selection {
        let e = sel.permuted_roots.centered();
        let minimal_tol = ctx.member_tol();
        for (j, (w, ej)) in [(&t.w1, &e.e1), (&t.w2, &e.e2), (&t.w3, &e.e3)].into_iter().enumerate() {
            let v = wp(&w.shr(1), &t.lattice, &ctx)?;
            push(format!("℘(w{}/2) = e{}", j + 1, j + 1), v.wp.dist(ej) / &spread, &bound);
            let sp = cube(&spread);
            push(format!("℘'(w{}/2) = 0", j + 1), v.wp_prime.abs() / sp, &bound);
            let minimal = t.lattice.is_minimal_in_coset(w, 5, &minimal_tol);
            push(
                format!("w{} minimal in its coset mod 2Λ", j + 1),
                ctx.real(if minimal { 0.0 } else { 1.0 }),
                &ctx.real(0.0),
            );
        }
    }

    if let Some(p) = &p {
        match elog_with_periods(&t, p, &ctx) {
            Ok(e) => {
                let v = wp(&e.z, &t.lattice, &ctx)?;
                if let Point::Affine { x, y } = p {
                    let x = x - &c.roots.shift();
                    let sx = x.abs().max(&ctx.real(1.0));
                    let sy = y.abs().max(&ctx.real(1.0));
                    push("℘(elog P) = x(P)".into(), v.wp.dist(&x) / sx, &bound);
                    push("℘'(elog P) = y(P)".into(), v.wp_prime.dist(y) / sy, &bound);
                }
            }
            Err(Error::TwoTorsionInput) => {}
            Err(e) => return Err(e),
        }
    }

    let all = checks.iter().all(|c| c.passed);
    let text = if out.json {
        let items: Vec<Value> = checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "residual": format!("{:.3e}", c.residual.to_f64()),
                    "passed": c.passed,
                })
            })
            .collect();
        serde_json::to_string_pretty(&json!({"checks": items, "passed": all})).unwrap_or_default()
    } else {
        let mut lines: Vec<String> = checks
            .iter()
            .map(|c| {
                format!(
                    "{} {} (residual {:.3e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.residual.to_f64()
                )
            })
            .collect();
        lines.push(format!("{}", if all { "all checks passed" } else { "some checks failed" }));
        lines.join("\n")
    };
    Ok((text, all))
}

fn cube(x: &Float) -> Float {
    let sq = Float::with_val(x.prec(), x.square_ref());
    sq * x
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. } => 3,
        Error::Internal(_) | Error::CosetViolation(_) => 1,
        _ => 2,
    }
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let doc = json!({"error": kind, "message": message});
    eprintln!("{doc}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return fail("ArgumentError", e.to_string().trim(), 2);
        }
    };
    let result: Result<(String, bool)> = match &cli.command {
        Command::Agm { a, b, schedule, out } => run_agm(a, b, schedule.as_deref(), out).map(|s| (s, true)),
        Command::Periods { curve, out } => run_periods(curve, out).map(|s| (s, true)),
        Command::Elog { curve, point, reduce, out } => {
            run_elog(curve, &point.point, *reduce, out).map(|s| (s, true))
        }
        Command::Wp { curve, z, out } => run_wp(curve, z, out).map(|s| (s, true)),
        Command::AgmValues { a, b, schedule, out } => {
            run_agm_values(a, b, schedule.as_deref(), out).map(|s| (s, true))
        }
        Command::Verify { curve, point, out } => run_verify(curve, point.point.as_deref(), out),
    };
    match result {
        Ok((text, ok)) => {
            println!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(e.kind(), &e.to_string(), exit_code(&e)),
    }
}
