//! `verify`: regenerate every case of a theorem's table and compare with the catalog.

use std::collections::BTreeMap;
use std::fmt::Write;

use bgsplit::{
    build_delta, build_psi, check_smooth_along_curve, generate_example, predicted_splitting,
    Field, FieldSpec, FieldTask, SplittingType,
};
use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Quadrics,
    Cubics,
    Quartics,
    General,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub theorem: Theorem,
    pub d: Option<u32>,
    pub min_n: Option<u32>,
    pub max_n: u32,
    pub field: FieldSpec,
    pub jobs: usize,
}

/// The `(d, e, n)` covered by a theorem up to `max_n`, sorted.
pub fn cases(cfg: &VerifyConfig) -> CliResult<Vec<(u32, u32, u32)>> {
    let d = match cfg.theorem {
        Theorem::Quadrics => 2,
        Theorem::Cubics => 3,
        Theorem::Quartics => 4,
        Theorem::General => match cfg.d {
            Some(d) if d >= 5 => d,
            Some(d) => return Err(CliError::User(format!("--theorem general needs --d >= 5, got {d}"))),
            None => return Err(CliError::User("--theorem general needs --d".into())),
        },
    };
    if cfg.theorem != Theorem::General && cfg.d.is_some_and(|x| x != d) {
        return Err(CliError::User(format!("--theorem {:?} fixes d = {d}", cfg.theorem).to_lowercase()));
    }
    let min_n = cfg.min_n.unwrap_or(3);
    let mut out = Vec::new();
    if cfg.theorem == Theorem::General {
        for n in (2 * d - 2).max(min_n)..=cfg.max_n {
            out.push((d, n, n));
        }
    } else {
        for e in d.max(2)..=cfg.max_n {
            for n in e.max(3).max(min_n)..=cfg.max_n {
                out.push((d, e, n));
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::User(format!(
            "no cases for {:?} with n in {min_n}..={}",
            cfg.theorem, cfg.max_n
        )));
    }
    Ok(out)
}

struct Computed {
    t: SplittingType,
    normal: SplittingType,
    smooth: bool,
}

struct CaseTask(u32, u32, u32);

impl FieldTask for CaseTask {
    type Output = Result<Computed, String>;

    fn run<F: Field>(self) -> Result<Computed, String> {
        let f = generate_example::<F>(self.0, self.1, self.2).map_err(|e| e.to_string())?;
        Ok(Computed {
            t: build_delta(&f).splitting_of_kernel().map_err(|e| e.to_string())?,
            normal: build_psi(&f).splitting_of_kernel().map_err(|e| e.to_string())?,
            smooth: check_smooth_along_curve(&f),
        })
    }
}

struct Outcome {
    case: (u32, u32, u32),
    provenance: String,
    expected: Option<SplittingType>,
    computed: Result<Computed, String>,
    field: FieldSpec,
    rerun: bool,
    problems: Vec<String>,
}

fn problems(d: u32, expected: Option<&SplittingType>, computed: &Result<Computed, String>) -> Vec<String> {
    let c = match computed {
        Ok(c) => c,
        Err(e) => return vec![format!("construction failed: {e}")],
    };
    let mut out = Vec::new();
    match expected {
        Some(s) if *s == c.t => {}
        Some(s) => out.push(format!("T = {} but the catalog says {s}", c.t)),
        None => out.push("the catalog has no exact splitting here".into()),
    }
    if d == 2 && !c.normal.is_balanced() {
        out.push(format!("N = {} is not balanced", c.normal));
    }
    if !c.smooth {
        out.push("X is singular along the curve".into());
    }
    out
}

fn run_case(case: (u32, u32, u32), field: FieldSpec) -> Outcome {
    let (d, e, n) = case;
    let prediction = predicted_splitting(d, e, n);
    let (provenance, expected) = match &prediction {
        Ok(p) => (p.provenance.clone(), p.exact_splitting().cloned()),
        Err(err) => (format!("error: {err}"), None),
    };
    let compute = |field: FieldSpec| {
        field
            .dispatch(CaseTask(d, e, n))
            .unwrap_or_else(|err| Err(err.to_string()))
    };
    let mut computed = compute(field);
    let mut found = problems(d, expected.as_ref(), &computed);
    let mut used = field;
    let mut rerun = false;
    if !found.is_empty() && field != FieldSpec::Rational {
        // Rule out an unlucky characteristic before reporting.
        computed = compute(FieldSpec::Rational);
        found = problems(d, expected.as_ref(), &computed);
        used = FieldSpec::Rational;
        rerun = true;
    }
    Outcome {
        case,
        provenance,
        expected,
        computed,
        field: used,
        rerun,
        problems: found,
    }
}

pub struct VerifyReport {
    pub json: Value,
    pub text: String,
    pub mismatches: usize,
}

pub fn verify(cfg: &VerifyConfig) -> CliResult<VerifyReport> {
    cfg.field.validate()?;
    let list = cases(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let outcomes: Vec<Outcome> = pool.install(|| list.par_iter().map(|&c| run_case(c, cfg.field)).collect());

    let mut by_tag: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    let _ = writeln!(text, "theorem: {}, field: {}", format!("{:?}", cfg.theorem).to_lowercase(), cfg.field);
    let mut mismatches = 0;
    for o in &outcomes {
        let (d, e, n) = o.case;
        let ok = o.problems.is_empty();
        let slot = by_tag.entry(&o.provenance).or_default();
        slot.0 += 1;
        if ok {
            slot.1 += 1;
        } else {
            mismatches += 1;
        }
        let (t, normal) = match &o.computed {
            Ok(c) => (json!(c.t), json!(c.normal)),
            Err(_) => (Value::Null, Value::Null),
        };
        let status = if ok { "pass" } else { "MISMATCH" };
        let shown = match &o.computed {
            Ok(c) => c.t.to_string(),
            Err(_) => "-".into(),
        };
        let rerun = if o.rerun { " (re-run over rational)" } else { "" };
        let _ = writeln!(text, "({d},{e},{n})  {status:<8}  T = {shown}  [{}]{rerun}", o.provenance);
        for p in &o.problems {
            let _ = writeln!(text, "    {p}");
        }
        rows.push(json!({
            "params": { "d": d, "e": e, "n": n },
            "provenance": o.provenance,
            "expected": o.expected,
            "T_splitting": t,
            "N_splitting": normal,
            "field": o.field.to_string(),
            "rerun": o.rerun,
            "status": status,
            "problems": o.problems,
        }));
    }
    let _ = writeln!(text, "summary:");
    let mut summary = Vec::new();
    for (tag, (total, passed)) in &by_tag {
        let _ = writeln!(text, "  {tag:<40} {passed}/{total}");
        summary.push(json!({ "provenance": tag, "cases": total, "passed": passed }));
    }
    let _ = writeln!(text, "{} cases, {mismatches} mismatches", outcomes.len());
    let json = json!({
        "theorem": format!("{:?}", cfg.theorem).to_lowercase(),
        "field": cfg.field.to_string(),
        "cases": rows,
        "summary": summary,
        "mismatches": mismatches,
    });
    Ok(VerifyReport { json, text, mismatches })
}
