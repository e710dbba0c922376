//! qsem — command line front end for the workbench.
//!
//! Five subcommands, all emitting the same JSON report envelope so CI can
//! diff runs: `check-cpm` (Choi/Kraus consistency), `check-model` (the
//! hypothesis verifier over a finite universe), `check-presheaf` (the
//! exact presheaf laboratory), `denote` (typecheck a program and emit its
//! channel), and `enumerate-hom` (list completion morphisms).
//!
//! Reports are deterministic given config and seed; the `generated_at`
//! timestamp is the only varying field and sits alone at the top level.
//! Exit codes: 0 all selected checks pass, 1 failures, 2 usage errors,
//! 3 IO errors. `QSEM_THREADS` caps the worker pool.

use chrono::Utc;
use clap::{Parser, Subcommand};
use qsem_core::cpm::HObject;
use qsem_core::freecat::{EnumHom, Fwm, FwmObject, Plus, PlusObject};
use qsem_core::linalg::{c, ComplexMatrix, Tolerance};
use qsem_core::modelcheck::{
    check_concrete_embedding, check_cpm_suite, check_hypotheses, check_presheaf_lab,
    run_negative_controls, CheckRecord, CheckStatus, ControlOutcome, Universe,
};
use qsem_core::qcat::{QMorphism, QObject};
use qsem_core::qlc;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qsem",
    version,
    about = "Workbench for superoperator categories, monoidal completions, \
             a finite presheaf laboratory, and a small linear quantum language"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Choi/Kraus consistency suite on seeded random maps
    CheckCpm {
        /// Seed for the random Kraus draws
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Uniform numeric tolerance override
        #[arg(long)]
        tol: Option<f64>,
        /// Keep only checks whose name matches this glob (`*` wildcards)
        #[arg(long)]
        filter: Option<String>,
        /// Write the JSON report to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify every hypothesis of the model theorem over a finite universe
    CheckModel {
        /// Universe description (JSON); defaults to the built-in universe
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the universe seed
        #[arg(long)]
        seed: Option<u64>,
        /// Uniform numeric tolerance override
        #[arg(long)]
        tol: Option<f64>,
        /// Keep only checks whose name matches this glob (`*` wildcards)
        #[arg(long)]
        filter: Option<String>,
        /// Write the JSON report to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact presheaf laboratory: Yoneda, Kan extensions, Day convolution
    CheckPresheaf {
        /// Keep only checks whose name matches this glob (`*` wildcards)
        #[arg(long)]
        filter: Option<String>,
        /// Write the JSON report to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Typecheck a program and emit its channel denotation
    Denote {
        /// Path to the source program
        program: PathBuf,
        /// Input family state: JSON array of density matrices, one per
        /// source component, entries as [re, im] pairs
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write the channel JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate completion morphisms between two objects
    EnumerateHom {
        /// Source object: a sequence like "(A,A)" or a family like
        /// "{(A),(B,C)}"; labels may carry dimensions as "A:2"
        #[arg(long)]
        src: String,
        /// Destination object in the same syntax
        #[arg(long)]
        dst: String,
        /// Write the JSON listing here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    /// Some selected check failed, or the input program is ill-typed.
    Checks(String),
    /// The flags parsed but their values make no sense.
    Usage(String),
    Io(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("QSEM_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::CheckCpm { seed, tol, filter, out } => {
            let tolerance = parse_tol(tol)?;
            let checks = apply_filter(check_cpm_suite(seed, &tolerance).records, filter.as_deref());
            let config = json!({ "seed": seed, "tol": tolerance });
            emit(&assemble(config, checks, vec![]), out.as_deref())
        }
        Command::CheckModel { config, seed, tol, filter, out } => {
            let mut universe = match &config {
                Some(path) => {
                    let text = read(path)?;
                    serde_json::from_str::<Universe>(&text).map_err(|e| {
                        Failure::Usage(format!("bad config {}: {e}", path.display()))
                    })?
                }
                None => Universe::default(),
            };
            if let Some(s) = seed {
                universe.seed = s;
            }
            if let Some(eps) = tol {
                universe.tol = parse_tol(Some(eps))?;
            }
            universe.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let mut checks = check_hypotheses(&universe).records;
            checks.extend(check_concrete_embedding(&universe).records);
            let checks = apply_filter(checks, filter.as_deref());
            let controls = run_negative_controls(&universe);
            let config = serde_json::to_value(&universe).expect("universe serializes");
            emit(&assemble(config, checks, controls), out.as_deref())
        }
        Command::CheckPresheaf { filter, out } => {
            let checks = apply_filter(check_presheaf_lab().records, filter.as_deref());
            emit(&assemble(json!({}), checks, vec![]), out.as_deref())
        }
        Command::Denote { program, input, out } => cmd_denote(&program, input.as_deref(), out.as_deref()),
        Command::EnumerateHom { src, dst, out } => cmd_enumerate(&src, &dst, out.as_deref()),
    }
}

fn parse_tol(tol: Option<f64>) -> Result<Tolerance, Failure> {
    match tol {
        Some(eps) => Tolerance::uniform(eps).map_err(|e| Failure::Usage(e.to_string())),
        None => Ok(Tolerance::default()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: &Path, body: String) -> Result<(), Failure> {
    std::fs::write(path, body)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

// ---------------------------------------------------------------------
// report envelope

#[derive(Serialize)]
struct Report {
    tool: &'static str,
    version: &'static str,
    schema_version: u32,
    generated_at: String,
    config_hash: String,
    config: Value,
    checks: Vec<CheckRecord>,
    controls: Vec<ControlOutcome>,
    all_pass: bool,
}

fn assemble(config: Value, checks: Vec<CheckRecord>, controls: Vec<ControlOutcome>) -> Report {
    let canonical = serde_json::to_string(&config).expect("config serializes");
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    let all_pass = checks.iter().all(|r| r.status != CheckStatus::Fail)
        && controls.iter().all(|ctl| ctl.ok);
    Report {
        tool: "qsem",
        version: env!("CARGO_PKG_VERSION"),
        schema_version: 1,
        generated_at: Utc::now().to_rfc3339(),
        config_hash: format!("{:x}", hasher.finalize()),
        config,
        checks,
        controls,
        all_pass,
    }
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), Failure> {
    for r in &report.checks {
        let word = match r.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::NotApplicable => "SKIP",
        };
        println!("{word} {} — {}", r.name, r.evidence);
    }
    for ctl in &report.controls {
        println!(
            "{} control {} — expected failures {:?}, observed {:?}",
            if ctl.ok { "PASS" } else { "FAIL" },
            ctl.control,
            ctl.expected_failures,
            ctl.observed_failures
        );
    }
    let passed = report
        .checks
        .iter()
        .filter(|r| r.status != CheckStatus::Fail)
        .count();
    println!(
        "{}: {passed}/{} checks, {}/{} controls",
        if report.all_pass { "ok" } else { "FAILED" },
        report.checks.len(),
        report.controls.iter().filter(|ctl| ctl.ok).count(),
        report.controls.len()
    );
    if let Some(path) = out {
        let body = serde_json::to_string_pretty(report).expect("report serializes");
        write_out(path, body + "\n")?;
    }
    if report.all_pass {
        Ok(())
    } else {
        Err(Failure::Checks("some checks failed".into()))
    }
}

/// `*`-only glob match, anchored at both ends.
fn glob_match(pat: &str, name: &str) -> bool {
    let parts: Vec<&str> = pat.split('*').collect();
    if parts.len() == 1 {
        return pat == name;
    }
    let mut rest = name;
    let last = parts.len() - 1;
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            continue;
        }
        if i == 0 {
            match rest.strip_prefix(part) {
                Some(r) => rest = r,
                None => return false,
            }
        } else if i == last {
            return rest.ends_with(part);
        } else {
            match rest.find(part) {
                Some(at) => rest = &rest[at + part.len()..],
                None => return false,
            }
        }
    }
    true
}

fn apply_filter(checks: Vec<CheckRecord>, filter: Option<&str>) -> Vec<CheckRecord> {
    match filter {
        Some(pat) => checks
            .into_iter()
            .filter(|r| glob_match(pat, &r.name))
            .collect(),
        None => checks,
    }
}

// ---------------------------------------------------------------------
// denote

fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| {
                            let z = m.get(i, j);
                            json!([z.re, z.im])
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn entries_json(mor: &QMorphism) -> Value {
    let mut rows = Vec::new();
    for i in 0..mor.dst().len() {
        for j in 0..mor.src().len() {
            let e = mor.entry(i, j);
            rows.push(json!({
                "row": i,
                "col": j,
                "din": e.din(),
                "dout": e.dout(),
                "choi": matrix_json(e.choi()),
            }));
        }
    }
    Value::Array(rows)
}

fn load_state(path: &Path, src: &QObject) -> Result<Vec<ComplexMatrix>, Failure> {
    let text = read(path)?;
    let raw: Vec<Vec<Vec<[f64; 2]>>> = serde_json::from_str(&text)
        .map_err(|e| Failure::Checks(format!("bad state file {}: {e}", path.display())))?;
    if raw.len() != src.len() {
        return Err(Failure::Checks(format!(
            "state has {} components but the program input has {}",
            raw.len(),
            src.len()
        )));
    }
    raw.iter()
        .zip(&src.parts)
        .enumerate()
        .map(|(j, (m, part))| {
            let d = part.dim;
            if m.len() != d || m.iter().any(|row| row.len() != d) {
                return Err(Failure::Checks(format!("state component {j} must be {d}x{d}")));
            }
            let entries = m.iter().flatten().map(|&[re, im]| c(re, im)).collect();
            ComplexMatrix::new(d, d, entries)
                .map_err(|e| Failure::Checks(format!("state component {j}: {e}")))
        })
        .collect()
}

fn cmd_denote(program: &Path, input: Option<&Path>, out: Option<&Path>) -> Result<(), Failure> {
    let source = read(program)?;
    let (ctx, ty, mor) = qlc::run_source(&source)
        .map_err(|e| Failure::Checks(format!("{}: {e}", program.display())))?;
    let mut doc = json!({
        "tool": "qsem",
        "version": env!("CARGO_PKG_VERSION"),
        "schema_version": 1,
        "program": program.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        "context": ctx.vars.iter().map(|(n, t)| json!([n, t.to_string()])).collect::<Vec<_>>(),
        "type": ty.to_string(),
        "source_dims": mor.src().dims(),
        "target_dims": mor.dst().dims(),
        "entries": entries_json(&mor),
    });
    if let Some(state_path) = input {
        let state = load_state(state_path, mor.src())?;
        let outputs: Vec<Value> = (0..mor.dst().len())
            .map(|i| {
                let d = mor.dst().parts[i].dim;
                let mut acc = ComplexMatrix::zeros(d, d);
                for (j, rho) in state.iter().enumerate() {
                    acc = acc.add(&mor.entry(i, j).apply(rho));
                }
                json!({ "component": i, "trace": acc.trace().re, "matrix": matrix_json(&acc) })
            })
            .collect();
        doc["output_state"] = Value::Array(outputs);
    }
    let body = serde_json::to_string_pretty(&doc).expect("document serializes") + "\n";
    match out {
        Some(path) => {
            write_out(path, body)?;
            println!(
                "{}: {} ⊢ {} — wrote {}",
                program.display(),
                if ctx.vars.is_empty() { "·".to_string() } else {
                    ctx.vars.iter().map(|(n, t)| format!("{n} : {t}")).collect::<Vec<_>>().join(", ")
                },
                ty,
                path.display()
            );
        }
        None => print!("{body}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------
// enumerate-hom

enum ObjExpr {
    Seq(FwmObject),
    Family(PlusObject<FwmObject>),
}

fn parse_space(label: &str) -> Result<HObject, String> {
    let (name, dim) = match label.split_once(':') {
        Some((n, d)) => (
            n.trim(),
            Some(
                d.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad dimension in `{label}`"))?,
            ),
        ),
        None => (label, None),
    };
    if name.is_empty() || !name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_') {
        return Err(format!("bad space label `{label}`"));
    }
    if name == "I" {
        return match dim {
            Some(d) if d != 1 => Err("the unit space I is one-dimensional".into()),
            _ => Ok(HObject::unit()),
        };
    }
    // dimensions do not influence hom enumeration (only labels are
    // matched); the defaults just mirror the built-in universe
    let dim = dim.unwrap_or(match name {
        "B" => 2,
        "C" => 3,
        _ => 1,
    });
    HObject::new(name, dim).map_err(|e| e.to_string())
}

fn parse_seq(s: &str) -> Result<FwmObject, String> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| format!("expected `(…)` around a sequence, got `{t}`"))?
        .trim();
    if inner.is_empty() {
        return Ok(FwmObject::unit());
    }
    let seq = inner
        .split(',')
        .map(|label| parse_space(label.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FwmObject::new(seq))
}

fn parse_object(s: &str) -> Result<ObjExpr, String> {
    let t = s.trim();
    if !t.starts_with('{') {
        return Ok(ObjExpr::Seq(parse_seq(t)?));
    }
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| format!("expected `{{…}}` around a family, got `{t}`"))?
        .trim();
    if inner.is_empty() {
        return Ok(ObjExpr::Family(PlusObject::new(vec![])));
    }
    let mut members = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                members.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    members.push(&inner[start..]);
    let family = members
        .iter()
        .map(|m| parse_seq(m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ObjExpr::Family(PlusObject::new(family)))
}

fn cmd_enumerate(src: &str, dst: &str, out: Option<&Path>) -> Result<(), Failure> {
    let parse = |s: &str| parse_object(s).map_err(Failure::Usage);
    let (count, morphisms) = match (parse(src)?, parse(dst)?) {
        (ObjExpr::Seq(x), ObjExpr::Seq(y)) => {
            let ms = Fwm.hom(&x, &y);
            (ms.len(), serde_json::to_value(&ms).expect("morphisms serialize"))
        }
        (ObjExpr::Family(x), ObjExpr::Family(y)) => {
            let ms = Plus { base: Fwm }.hom(&x, &y);
            (ms.len(), serde_json::to_value(&ms).expect("morphisms serialize"))
        }
        _ => {
            return Err(Failure::Usage(
                "src and dst must both be sequences or both be families".into(),
            ))
        }
    };
    let doc = json!({
        "tool": "qsem",
        "version": env!("CARGO_PKG_VERSION"),
        "schema_version": 1,
        "src": src,
        "dst": dst,
        "count": count,
        "morphisms": morphisms,
    });
    let body = serde_json::to_string_pretty(&doc).expect("document serializes") + "\n";
    match out {
        Some(path) => {
            write_out(path, body)?;
            println!("{count} morphisms from {src} to {dst} — wrote {}", path.display());
        }
        None => print!("{body}"),
    }
    Ok(())
}
