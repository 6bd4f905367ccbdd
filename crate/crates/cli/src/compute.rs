//! `compute` and `extend` reports.

use std::fmt::Write;

use bgsplit::{
    build_delta, build_psi, check_smooth_along_curve, expected_max, extend_dimension,
    generate_example, parse_hsf, predicted_splitting, Field, FieldSpec, FieldTask, GradedSheafMap,
    IdealCombination, Rational, SplittingType,
};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// Where the hypersurface comes from: a file, or the generator at `(d, e, n)`.
#[derive(Debug, Clone, Default)]
pub struct Source {
    pub hsf: Option<String>,
    pub d: Option<u32>,
    pub e: Option<u32>,
    pub n: Option<u32>,
}

impl Source {
    /// The `field = ...` header of the file, if any.
    pub fn declared_field(&self) -> CliResult<Option<FieldSpec>> {
        let Some(text) = &self.hsf else {
            return Ok(None);
        };
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            if let Some((k, v)) = line.split_once('=') {
                if k.trim() == "field" {
                    return v.trim().parse().map(Some).map_err(CliError::from);
                }
            }
        }
        Ok(None)
    }

    fn load<F: Field>(&self) -> CliResult<IdealCombination<F>> {
        let Some(text) = &self.hsf else {
            let (Some(d), Some(e), Some(n)) = (self.d, self.e, self.n) else {
                return Err(CliError::User("give --poly FILE or all of --d, --e, --n".into()));
            };
            return Ok(generate_example(d, e, n)?);
        };
        let f = parse_hsf::<F>(text)?;
        let ctx = f.context();
        for (flag, given, actual) in [("d", self.d, ctx.d), ("e", self.e, ctx.e), ("n", self.n, ctx.n)] {
            if given.is_some_and(|g| g != actual) {
                return Err(CliError::User(format!(
                    "--{flag} {} disagrees with the file ({flag} = {actual})",
                    given.unwrap_or_default()
                )));
            }
        }
        Ok(f)
    }
}

fn certify(ok: bool, what: &str) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Internal(what.to_string()))
    }
}

fn balanced_word(b: bool) -> &'static str {
    if b {
        "balanced"
    } else {
        "not balanced"
    }
}

pub struct Compute<'a>(pub &'a Source);

impl FieldTask for Compute<'_> {
    type Output = CliResult<Value>;

    fn run<F: Field>(self) -> CliResult<Value> {
        let f = self.0.load::<F>()?;
        compute_report(&f)
    }
}

pub fn compute_report<F: Field>(f: &IdealCombination<F>) -> CliResult<Value> {
    let ctx = f.context();
    let psi = build_psi(f);
    let delta = build_delta(f);
    let t = delta.splitting_of_kernel()?;
    let normal = psi.splitting_of_kernel()?;
    let k = delta.kernel_matrix()?;
    let compose_zero = delta.compose(&k)?.is_zero();
    let full_rank = k.full_rank_everywhere();
    let mut twists = k.source().to_vec();
    twists.sort();
    let twists_match = twists == t.parts();
    certify(compose_zero, "kernel matrix does not compose to zero with delta")?;
    certify(full_rank, "kernel matrix drops rank somewhere on P^1")?;
    certify(twists_match, "kernel matrix twists disagree with the splitting scan")?;
    let prediction = predicted_splitting(ctx.d, ctx.e, ctx.n)?;
    let agrees = prediction.exact_splitting().map(|s| *s == t);
    Ok(json!({
        "params": { "d": ctx.d, "e": ctx.e, "n": ctx.n, "field": ctx.field.to_string() },
        "F": f.to_hsf(),
        "psi": psi.to_json(),
        "delta": delta.to_json(),
        "T_splitting": t.parts(),
        "N_splitting": normal.parts(),
        "balanced": { "T": t.is_balanced(), "N": normal.is_balanced() },
        "interpolation": t.interpolation_count()?,
        "expected": expected_max(ctx.d, ctx.e, ctx.n)?,
        "provenance": {
            "prediction": prediction,
            "agrees": agrees,
        },
        "certificates": {
            "smooth_along_curve": check_smooth_along_curve(f),
            "kernel_compose_zero": compose_zero,
            "kernel_full_rank": full_rank,
            "kernel_twists_match": twists_match,
            "kernel": k.to_json(),
        },
    }))
}

fn splitting(v: &Value) -> SplittingType {
    serde_json::from_value(v.clone()).unwrap_or_else(|_| SplittingType::new(vec![]))
}

fn map_text(v: &Value) -> String {
    GradedSheafMap::<Rational>::from_json(v)
        .map(|m| m.to_text())
        .unwrap_or_else(|e| format!("<{e}>\n"))
}

fn indented(out: &mut String, text: &str) {
    for line in text.lines() {
        let _ = writeln!(out, "  {line}");
    }
}

fn flags(v: &Value) -> String {
    v.as_object()
        .map(|o| {
            o.iter()
                .filter(|(_, x)| x.is_boolean())
                .map(|(k, x)| format!("{k} = {x}"))
                .collect::<Vec<_>>()
                .join(", ")
        })
        .unwrap_or_default()
}

/// Human-readable rendering of a compute report.
pub fn compute_text(r: &Value) -> String {
    let p = &r["params"];
    let t = splitting(&r["T_splitting"]);
    let normal = splitting(&r["N_splitting"]);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "params: d = {}, e = {}, n = {}, field = {}",
        p["d"], p["e"], p["n"], p["field"].as_str().unwrap_or("")
    );
    let _ = writeln!(out, "F:");
    indented(&mut out, r["F"].as_str().unwrap_or(""));
    let _ = writeln!(out, "psi:");
    indented(&mut out, &map_text(&r["psi"]));
    let _ = writeln!(out, "delta:");
    indented(&mut out, &map_text(&r["delta"]));
    let _ = writeln!(out, "T_splitting: {t}");
    let _ = writeln!(out, "N_splitting: {normal}");
    let _ = writeln!(
        out,
        "balanced: T {}, N {}",
        balanced_word(t.is_balanced()),
        balanced_word(normal.is_balanced())
    );
    let _ = writeln!(out, "interpolation: {}", r["interpolation"]);
    let _ = writeln!(out, "expected: {}", r["expected"]);
    let pred: Option<bgsplit::Prediction> = serde_json::from_value(r["provenance"]["prediction"].clone()).ok();
    let agrees = match r["provenance"]["agrees"].as_bool() {
        Some(true) => " (agrees)",
        Some(false) => " (differs)",
        None => "",
    };
    if let Some(pred) = pred {
        let _ = writeln!(out, "provenance: {pred}{agrees}");
    }
    let _ = writeln!(out, "certificates: {}", flags(&r["certificates"]));
    out
}

pub struct Extend<'a> {
    pub source: &'a Source,
    pub target: Option<SplittingType>,
}

impl FieldTask for Extend<'_> {
    type Output = CliResult<(Value, String)>;

    fn run<F: Field>(self) -> CliResult<(Value, String)> {
        let f = self.source.load::<F>()?;
        let ctx = f.context();
        let target = match self.target {
            Some(t) => t,
            None => predicted_splitting(ctx.d, ctx.e, ctx.n + 1)?
                .exact_splitting()
                .cloned()
                .ok_or_else(|| {
                    CliError::User(format!(
                        "no exact splitting is predicted at n = {}; pass --target",
                        ctx.n + 1
                    ))
                })?,
        };
        let step = extend_dimension(&f, &target)?;
        let mut twists = step.n.source().to_vec();
        twists.sort();
        let certificates = json!({
            "N1_J_equals_K": step.n1.compose(&step.j)? == step.kernel,
            "N2_J_zero": step.n2.compose(&step.j)?.is_zero(),
            "delta_N_zero": step.delta_out.compose(&step.n)?.is_zero(),
            "N_full_rank": step.n.full_rank_everywhere(),
            "N_twists_match_target": twists == target.parts(),
            "delta_from_output_F": build_delta(&step.output_f) == step.delta_out,
            "smooth_along_curve": check_smooth_along_curve(&step.output_f),
        });
        for (name, ok) in certificates.as_object().expect("object") {
            if name != "smooth_along_curve" {
                certify(ok.as_bool() == Some(true), name)?;
            }
        }
        let mut report = step.to_json();
        report["params"] = json!({ "d": ctx.d, "e": ctx.e, "n": ctx.n, "field": ctx.field.to_string() });
        report["certificates"] = certificates;
        Ok((report, step.output_f.to_hsf()))
    }
}

/// Human-readable rendering of an extension report.
pub fn extend_text(r: &Value) -> String {
    let p = &r["params"];
    let mut out = String::new();
    let _ = writeln!(
        out,
        "params: d = {}, e = {}, n = {} -> {}, field = {}",
        p["d"],
        p["e"],
        p["n"],
        p["n"].as_u64().unwrap_or(0) + 1,
        p["field"].as_str().unwrap_or("")
    );
    let _ = writeln!(out, "strategy: {}", r["strategy"].as_str().unwrap_or(""));
    let _ = writeln!(out, "target: {}", splitting(&r["target_splitting"]));
    for key in ["input_F", "output_F"] {
        let _ = writeln!(out, "{key}:");
        indented(&mut out, r[key].as_str().unwrap_or(""));
    }
    for key in ["K", "J", "N1", "N2", "N", "delta"] {
        let _ = writeln!(out, "{key}:");
        indented(&mut out, &map_text(&r[key]));
    }
    let _ = writeln!(out, "g: {}", r["g"].as_str().unwrap_or(""));
    let _ = writeln!(out, "certificates: {}", flags(&r["certificates"]));
    out
}
