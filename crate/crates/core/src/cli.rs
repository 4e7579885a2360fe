//! Command-line front end.
//!
//! Machine-readable JSON goes to stdout (or `--output`), a one-line human
//! summary to stderr. Exit codes: 0 accept/success, 1 principled rejection,
//! 2 malformed input or usage error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::forms::{
    a_form_determinant_target, h2_sum, hermitian_zero_aug, reduce_to_standard_with, verify_main_strategy,
    HermitianForm, ReduceOptions,
};
use crate::homology::{betti_qt, euler_chain, euler_check};
use crate::io::{
    wall_class_json, BoundsRecord, CertificateFile, ComplexFile, Dec, FormFile, IoError, OutcomeRecord, SurfaceFile,
};
use crate::laurent::LaurentPoly;
use crate::matrix::Matrix;
use crate::search::{bounded_isometry_search, conjecture_probe, replay_moves, MoveSpec, SearchBounds, SearchOutcome};
use crate::wallcalc::{hermitize, lambda_self, mu, pairing_shape_check, EventKind};

pub const EXIT_ACCEPT: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lamforms", version, about = "Hermitian forms over Z[t, t^-1]: unknotting certificates and friends")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Rescale basis vectors by units ±t^k before recognizing the block shape.
    #[arg(long, global = true)]
    pub prenormalize: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a form reduces to H2^g and emit a certificate.
    Check { form: PathBuf },
    /// Emit only the reduction certificate.
    Reduce { form: PathBuf },
    /// Evaluate the Wall self-intersection calculus on a surface model.
    Wall { surface: PathBuf },
    /// Betti numbers over Q(t) and the Euler characteristic check.
    Homology { complex: PathBuf },
    /// Bounded congruence search from one form to another.
    Search {
        form: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Compare stable and direct reductions to H2^g.
    Probe {
        form: PathBuf,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Independently re-check a certificate (or a found move list) against a form.
    Replay { certificate: PathBuf, form: PathBuf },
}

#[derive(Debug, Args, Clone)]
pub struct BoundsArgs {
    /// JSON bounds file; individual flags override its fields.
    #[arg(long)]
    pub bounds: Option<PathBuf>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub deg: Option<u32>,
    #[arg(long)]
    pub coeff: Option<u32>,
    #[arg(long = "unit-exp")]
    pub unit_exp: Option<u32>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub json: Option<Value>,
    pub message: String,
}

impl CliOutput {
    fn ok(code: i32, json: Value, message: impl Into<String>) -> Self {
        CliOutput { code, json: Some(json), message: message.into() }
    }

    fn malformed(message: impl Into<String>) -> Self {
        let message = message.into();
        CliOutput { code: EXIT_MALFORMED, json: Some(json!({"error": message})), message }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_form(path: &Path) -> Result<HermitianForm, String> {
    read_json::<FormFile>(path)?.into_form().map_err(|e| format!("{}: {e}", path.display()))
}

fn resolve_bounds(args: &BoundsArgs) -> Result<SearchBounds, String> {
    let mut b = match &args.bounds {
        Some(p) => SearchBounds::from(read_json::<BoundsRecord>(p)?),
        None => SearchBounds::default(),
    };
    if let Some(v) = args.depth {
        b.max_depth = v;
    }
    if let Some(v) = args.deg {
        b.degree = v;
    }
    if let Some(v) = args.coeff {
        b.coeff = v;
    }
    if let Some(v) = args.unit_exp {
        b.unit_exponent = v;
    }
    Ok(b)
}

fn poly_json(p: &LaurentPoly) -> Value {
    serde_json::to_value(p).expect("polynomials serialize")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CliConfig::try_parse_from(args) {
        Ok(cfg) => execute(&cfg),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_ACCEPT };
            CliOutput { code, json: None, message: e.to_string() }
        }
    }
}

pub fn execute(cfg: &CliConfig) -> CliOutput {
    let opts = ReduceOptions { prenormalize: cfg.prenormalize };
    let result = match &cfg.command {
        Command::Check { form } => run_check(form, opts),
        Command::Reduce { form } => run_reduce(form, opts),
        Command::Wall { surface } => run_wall(surface),
        Command::Homology { complex } => run_homology(complex),
        Command::Search { form, target, bounds } => run_search(form, target, bounds),
        Command::Probe { form, bounds } => run_probe(form, bounds),
        Command::Replay { certificate, form } => run_replay(certificate, form),
    };
    result.unwrap_or_else(CliOutput::malformed)
}

pub fn run_check(path: &Path, opts: ReduceOptions) -> Result<CliOutput, String> {
    let a = read_form(path)?;
    let v = verify_main_strategy(&a, opts);
    let cert = v.certificate.as_ref().map(CertificateFile::from_certificate);
    let out = json!({
        "verdict": if v.accepted { "accept" } else { "reject" },
        "label": v.label,
        "g": v.genus().map(|g| g.to_string()),
        "failed_gate": v.failed_gate.map(|g| g.describe()),
        "det_canonical": poly_json(&v.det_canonical),
        "det_compatible": v.det_compatible,
        "certificate": cert,
    });
    Ok(if v.accepted {
        let g = v.genus().unwrap_or(0);
        CliOutput::ok(EXIT_ACCEPT, out, format!("accept: isometric to H2^{g}"))
    } else {
        let gate = v.failed_gate.map(|g| g.describe()).unwrap_or("rejected");
        CliOutput::ok(EXIT_REJECT, out, format!("reject: {gate}"))
    })
}

pub fn run_reduce(path: &Path, opts: ReduceOptions) -> Result<CliOutput, String> {
    let a = read_form(path)?;
    match reduce_to_standard_with(&a, opts) {
        Ok(Some(cert)) => {
            let out = serde_json::to_value(CertificateFile::from_certificate(&cert)).expect("serializable");
            Ok(CliOutput::ok(EXIT_ACCEPT, out, format!("reduced to H2^{}", cert.genus)))
        }
        Ok(None) => {
            Ok(CliOutput::ok(EXIT_REJECT, json!({"error": "recognition failed"}), "reject: recognition failed"))
        }
        Err(e) => Ok(CliOutput::ok(EXIT_REJECT, json!({"error": e.to_string()}), format!("reject: {e}"))),
    }
}

pub fn run_wall(path: &Path) -> Result<CliOutput, String> {
    let model = read_json::<SurfaceFile>(path)?.into_model().map_err(|e| format!("{}: {e}", path.display()))?;
    let w = mu(&model);
    let lambda = lambda_self(&model);
    let applicable =
        num_traits::Zero::is_zero(&model.euler) && model.events.iter().all(|e| e.kind != EventKind::GenericDoublePoint);
    let shape = if applicable {
        let c = pairing_shape_check(&model).map_err(|e| e.to_string())?;
        json!({"applicable": true, "c": poly_json(&c)})
    } else {
        json!({"applicable": false, "c": null})
    };
    let out = json!({
        "label": model.label,
        "mu": wall_class_json(&w),
        "mu_representative": poly_json(&w.representative()),
        "mu_plus_conjugate": poly_json(&hermitize(&w)),
        "euler": model.euler.to_string(),
        "lambda": poly_json(&lambda),
        "shape_check": shape,
    });
    Ok(CliOutput::ok(EXIT_ACCEPT, out, format!("lambda = {lambda}")))
}

pub fn run_homology(path: &Path) -> Result<CliOutput, String> {
    let c = read_json::<ComplexFile>(path)?.into_complex().map_err(|e| format!("{}: {e}", path.display()))?;
    let betti = betti_qt(&c);
    let top = c.top_degree();
    let homology_euler: i64 =
        betti.iter().enumerate().map(|(idx, &b)| if (top - idx) % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    let out = json!({
        "degrees": (0..=top).rev().map(|d| d.to_string()).collect::<Vec<_>>(),
        "betti": betti.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "euler_chain": euler_chain(&c).to_string(),
        "euler_homology": homology_euler.to_string(),
        "euler_check": euler_check(&c),
    });
    let summary = betti.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", ");
    Ok(CliOutput::ok(EXIT_ACCEPT, out, format!("betti over Q(t), top degree first: ({summary})")))
}

fn outcome_code(o: &SearchOutcome) -> i32 {
    if o.is_found() {
        EXIT_ACCEPT
    } else {
        EXIT_REJECT
    }
}

pub fn run_search(form: &Path, target: &Path, bounds: &BoundsArgs) -> Result<CliOutput, String> {
    let a = read_form(form)?;
    let b = read_form(target)?;
    let bounds = resolve_bounds(bounds)?;
    let outcome = bounded_isometry_search(&a, &b, &bounds).map_err(|e| e.to_string())?;
    let mut out = serde_json::to_value(OutcomeRecord::new(&outcome, &b)).expect("serializable");
    out["bounds"] = serde_json::to_value(BoundsRecord::from(&bounds)).expect("serializable");
    let msg = match &outcome {
        SearchOutcome::Found { moves, .. } => format!("found at depth {}", moves.len()),
        SearchOutcome::Exhausted { states } => format!("exhausted after {states} states (bound-relative)"),
        SearchOutcome::ObstructionMismatch { reason } => format!("obstruction: {reason}"),
    };
    Ok(CliOutput::ok(outcome_code(&outcome), out, msg))
}

pub fn run_probe(form: &Path, bounds: &BoundsArgs) -> Result<CliOutput, String> {
    let a = read_form(form)?;
    let bounds = resolve_bounds(bounds)?;
    let report = conjecture_probe(&a, &bounds).map_err(|e| e.to_string())?;
    let g = report.genus;
    let out = json!({
        "g": g.to_string(),
        "bounds": BoundsRecord::from(&bounds),
        "stable": OutcomeRecord::new(&report.stable, &h2_sum(g + 1)),
        "direct": OutcomeRecord::new(&report.direct, &h2_sum(g)),
        "candidate": report.is_candidate(),
    });
    let msg = if report.is_candidate() {
        "stable found, direct exhausted: candidate for deeper bounds (not a counterexample)".to_string()
    } else {
        format!(
            "stable {}, direct {}",
            if report.stable.is_found() { "found" } else { "not found" },
            if report.direct.is_found() { "found" } else { "not found" }
        )
    };
    Ok(CliOutput::ok(EXIT_ACCEPT, out, msg))
}

fn square_side(len: usize) -> Option<usize> {
    let n = (len as f64).sqrt().round() as usize;
    (n * n == len).then_some(n)
}

fn reject(reason: String) -> CliOutput {
    CliOutput::ok(EXIT_REJECT, json!({"status": "fail", "reason": reason}), format!("replay failed: {reason}"))
}

fn first_difference(got: &HermitianForm, want: &HermitianForm) -> Option<String> {
    let n = got.rank();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find_map(|(i, j)| {
        (got.entry(i, j) != want.entry(i, j)).then(|| {
            format!("entry ({},{}) of P·A·P* is {} but should be {}", i + 1, j + 1, got.entry(i, j), want.entry(i, j))
        })
    })
}

/// Accepts either a certificate file or a `found` search outcome.
pub fn run_replay(cert_path: &Path, form_path: &Path) -> Result<CliOutput, String> {
    let a = read_form(form_path)?;
    let raw: Value = read_json(cert_path)?;
    if raw.get("moves").is_some() {
        return replay_outcome(raw, &a, cert_path);
    }
    let cert: CertificateFile = serde_json::from_value(raw).map_err(|e| format!("{}: {e}", cert_path.display()))?;
    let n = a.rank();
    let g = cert.g.0;
    let side = square_side(cert.p.len());
    if side != Some(n) || 2 * g != n {
        return Err(format!(
            "certificate for genus {g} with {} entries in P does not fit a rank {n} form",
            cert.p.len()
        ));
    }
    if cert.c_list.len() != g {
        return Err(format!("certificate lists {} values of c for genus {g}", cert.c_list.len()));
    }
    let p = Matrix::from_row_major(n, n, cert.p).map_err(|e| e.to_string())?;

    let det_p = p.determinant().map_err(|e| e.to_string())?;
    if det_p.is_unit().is_none() {
        return Ok(reject(format!("det P = {det_p} is not a unit")));
    }
    let reduced = crate::forms::congruence(&p, &a).map_err(|e| e.to_string())?;
    if let Some(diff) = first_difference(&reduced, &h2_sum(g)) {
        return Ok(reject(diff));
    }
    let det_a = a.determinant().canonical();
    if det_a != cert.det_canonical {
        return Ok(reject(format!("det_canonical {} but det A ≐ {det_a}", cert.det_canonical)));
    }
    if det_a != a_form_determinant_target(g).canonical() {
        return Ok(reject(format!("det A ≐ {det_a} is not associate to (1-t)^g(1-t^-1)^g")));
    }
    for (k, c) in cert.c_list.iter().enumerate() {
        if &hermitian_zero_aug(c) != a.entry(2 * k + 1, 2 * k + 1) {
            return Ok(reject(format!("c_{} does not reproduce diagonal entry ({},{})", k + 1, 2 * k + 2, 2 * k + 2)));
        }
    }
    Ok(CliOutput::ok(EXIT_ACCEPT, json!({"status": "ok", "g": g.to_string()}), "replay ok"))
}

fn replay_outcome(raw: Value, a: &HermitianForm, path: &Path) -> Result<CliOutput, String> {
    let rec: OutcomeRecord = serde_json::from_value(raw).map_err(|e| format!("{}: {e}", path.display()))?;
    let moves = rec
        .moves
        .unwrap_or_default()
        .into_iter()
        .map(MoveSpec::try_from)
        .collect::<Result<Vec<_>, IoError>>()
        .map_err(|e| e.to_string())?;
    let target =
        rec.target.ok_or_else(|| "search outcome has no target".to_string())?.into_form().map_err(|e| e.to_string())?;
    if target.rank() != a.rank() {
        return Err(format!("target rank {} vs form rank {}", target.rank(), a.rank()));
    }
    if let Some(mv) = moves.iter().find(|m| m.validate(a.rank()).is_err()) {
        return Err(format!("move {mv} does not fit rank {}", a.rank()));
    }
    let (end, p) = replay_moves(a, &moves).map_err(|e| e.to_string())?;
    if let Some(diff) = first_difference(&end, &target) {
        return Ok(reject(diff));
    }
    if let Some(entries) = rec.p {
        if entries != p.matrix().entries() {
            return Ok(reject("P does not equal the product of the moves".into()));
        }
    }
    Ok(CliOutput::ok(
        EXIT_ACCEPT,
        json!({"status": "ok", "depth": Dec(moves.len())}),
        format!("replay ok: {} moves", moves.len()),
    ))
}
