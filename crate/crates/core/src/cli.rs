//! Command-line front end.
//!
//! One verb per invocation. Inputs are file paths, inline JSON (anything
//! starting with `{`), or `-` for stdin; with no inputs, stdin is read as a
//! stream of JSON values. Every verb prints a report
//! `{verb, inputs_digest, result, counterexample?, seed, tolerances}`.
//! Exit status: 0 success, 1 law violation or equivalence not established,
//! 2 input error.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::aux::{AnyAux, AuxError, AuxMorphism};
use crate::classical::{PartialFn, PartialInj};
use crate::ext::{ext_congruence_check, pfn_functor, pfn_normalize, wellpointed_check_cptp, ExtEquality, ExtMorphism};
use crate::lawcheck::instances::{
    AuxPInjInstance, CptpInstance, ExtAuxPInjInstance, IsometryInstance, PInjInstance, PfnInstance, UnitaryInstance,
    INSTANCE_NAMES,
};
use crate::lawcheck::{check_named, CategoryInstance, Config, LawError, LawReport};
use crate::pipeline::{
    inp_to_isometry, inv_cptp, inv_pfn, isometry_to_inp, realize_channel, unitary_to_channel, Irreversible,
    PipelineError,
};
use crate::quantum::{
    channel_of_isometry, extract_unitary, minimal_stinespring, CMatrix, Channel, IsometryM, QuantumError, UnitaryM,
    EQ_TOL, PURITY_TOL, RANK_CUTOFF, ROUND_TRIP_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    Lawcheck,
    Compose,
    Tensor,
    BennettOf,
    PfnOf,
    AuxEqual,
    ExtEqual,
    NormalForm,
    Ridm,
    Dagger,
    Factorize,
    Dilate,
    Kraus,
    CompleteUnitary,
    ChannelOfUnitary,
    ExtractUnitary,
    Inv,
    Roundtrip,
}

impl Verb {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Clone, Debug, Parser)]
#[command(name = "revcomp", version, about = "Reversible and irreversible computation on finite instances")]
pub struct Command {
    #[arg(value_enum)]
    pub verb: Verb,
    /// Paths, inline JSON, or `-` for stdin.
    pub inputs: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Comparison tolerance override.
    #[arg(long, value_parser = positive_tol)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Law-check instance: Pfn, PInj, Unitary, Isometry, CPTP, Aux(PInj), Ext(Aux(PInj)).
    #[arg(long)]
    pub instance: Option<String>,
    /// `all`, a group name, or a law name.
    #[arg(long, default_value = "all")]
    pub law: String,
    /// Largest object size for law checks.
    #[arg(long)]
    pub max: Option<usize>,
    /// Ancilla dimension for `channel-of-unitary`.
    #[arg(long, default_value_t = 0)]
    pub anc: usize,
    /// Environment dimension for `channel-of-unitary`.
    #[arg(long, default_value_t = 1)]
    pub env: usize,
}

impl Command {
    pub fn new(verb: Verb, inputs: Vec<String>) -> Self {
        Command {
            verb,
            inputs,
            seed: 0,
            trials: 1000,
            tol: None,
            out: None,
            instance: None,
            law: "all".into(),
            max: None,
            anc: 0,
            env: 1,
        }
    }
}

fn positive_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err("tolerance must be positive".into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Failure = 1,
    InputError = 2,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub comparison: f64,
    pub rank_cutoff: f64,
    pub purity: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub verb: String,
    pub inputs_digest: String,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    pub seed: u64,
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub status: Status,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
}

impl From<AuxError> for CliError {
    fn from(e: AuxError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<crate::classical::ClassicalError> for CliError {
    fn from(e: crate::classical::ClassicalError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LawError> for CliError {
    fn from(e: LawError) -> Self {
        CliError::Input(e.to_string())
    }
}

struct Source {
    label: String,
    text: String,
}

fn read_stdin() -> Result<String, CliError> {
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io("stdin".into(), e))?;
    Ok(s)
}

/// Split a buffer holding several JSON values; syntax errors keep their positions.
fn split_stream(label: &str, text: &str) -> Result<Vec<Source>, CliError> {
    let mut out = Vec::new();
    let mut stream = serde_json::Deserializer::from_str(text).into_iter::<Value>();
    let mut start = 0;
    while let Some(v) = stream.next() {
        v.map_err(|e| CliError::Input(format!("{label}: {e}")))?;
        let end = stream.byte_offset();
        out.push(Source { label: format!("{label}[{}]", out.len()), text: text[start..end].trim().to_string() });
        start = end;
    }
    Ok(out)
}

fn gather(cmd: &Command) -> Result<Vec<Source>, CliError> {
    if cmd.inputs.is_empty() {
        if cmd.verb == Verb::Lawcheck {
            return Ok(Vec::new());
        }
        return split_stream("stdin", &read_stdin()?);
    }
    let mut out = Vec::new();
    for (k, arg) in cmd.inputs.iter().enumerate() {
        let trimmed = arg.trim_start();
        if trimmed.starts_with('{') || trimmed.starts_with('[') {
            out.push(Source { label: format!("input {}", k + 1), text: arg.clone() });
        } else if arg == "-" {
            out.extend(split_stream("stdin", &read_stdin()?)?);
        } else {
            let text = std::fs::read_to_string(arg).map_err(|e| CliError::Io(arg.clone(), e))?;
            out.push(Source { label: arg.clone(), text });
        }
    }
    Ok(out)
}

fn digest(sources: &[Source]) -> String {
    let mut h = Sha256::new();
    for s in sources {
        h.update((s.text.len() as u64).to_le_bytes());
        h.update(s.text.as_bytes());
    }
    hex::encode(h.finalize())
}

/// A parsed input, classified by its keys.
#[derive(Clone, Debug)]
enum Input {
    Pfn(PartialFn),
    Aux(AnyAux),
    Matrix(CMatrix),
    Channel(Channel),
    Kraus(Vec<CMatrix>),
}

impl Input {
    fn kind(&self) -> &'static str {
        match self {
            Input::Pfn(_) => "partial function",
            Input::Aux(_) => "aux morphism",
            Input::Matrix(_) => "matrix",
            Input::Channel(_) => "channel",
            Input::Kraus(_) => "kraus list",
        }
    }
}

fn parse_as<T: DeserializeOwned>(src: &Source) -> Result<T, CliError> {
    serde_json::from_str(&src.text).map_err(|e| CliError::Input(format!("{}: {e}", src.label)))
}

fn parse(src: &Source) -> Result<Input, CliError> {
    let v: Value = parse_as(src)?;
    let has = |k: &str| v.get(k).is_some();
    if has("base") {
        Ok(Input::Aux(parse_as(src)?))
    } else if has("graph") {
        Ok(Input::Pfn(parse_as(src)?))
    } else if has("choi") {
        Ok(Input::Channel(parse_as(src)?))
    } else if has("kraus") {
        #[derive(serde::Deserialize)]
        struct KrausJson {
            kraus: Vec<CMatrix>,
        }
        Ok(Input::Kraus(parse_as::<KrausJson>(src)?.kraus))
    } else if has("entries") {
        Ok(Input::Matrix(parse_as(src)?))
    } else {
        Err(CliError::Input(format!("{}: unrecognised morphism format", src.label)))
    }
}

fn arity(verb: Verb, inputs: &[Input], n: usize) -> Result<(), CliError> {
    if inputs.len() != n {
        return Err(CliError::Input(format!("{} takes {n} input(s), got {}", verb.name(), inputs.len())));
    }
    Ok(())
}

fn unsupported(verb: Verb, inputs: &[Input]) -> CliError {
    let kinds: Vec<&str> = inputs.iter().map(Input::kind).collect();
    CliError::Input(format!("{} does not apply to {}", verb.name(), kinds.join(" and ")))
}

fn isometry(m: &CMatrix) -> Result<IsometryM, CliError> {
    Ok(IsometryM::new(m.clone())?)
}

fn unitary(m: &CMatrix) -> Result<UnitaryM, CliError> {
    Ok(UnitaryM::new(m.clone())?)
}

fn pinj(f: &PartialFn) -> Result<PartialInj, CliError> {
    Ok(PartialInj::new(f.clone())?)
}

fn to_json<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serialisable")
}

struct Outcome {
    result: Value,
    counterexample: Option<Value>,
    status: Status,
    tol: f64,
}

impl Outcome {
    fn ok(result: Value, tol: f64) -> Self {
        Outcome { result, counterexample: None, status: Status::Success, tol }
    }

    fn verdict(result: Value, passed: bool, tol: f64) -> Self {
        let status = if passed { Status::Success } else { Status::Failure };
        Outcome { result, counterexample: None, status, tol }
    }
}

/// Execute a command in-process.
pub fn run(cmd: &Command) -> Result<Report, CliError> {
    let sources = gather(cmd)?;
    let inputs_digest = digest(&sources);
    let inputs = sources.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
    let out = dispatch(cmd, &inputs)?;
    Ok(Report {
        verb: cmd.verb.name(),
        inputs_digest,
        result: out.result,
        counterexample: out.counterexample,
        seed: cmd.seed,
        tolerances: Tolerances { comparison: out.tol, rank_cutoff: RANK_CUTOFF, purity: PURITY_TOL },
        status: out.status,
    })
}

fn dispatch(cmd: &Command, inputs: &[Input]) -> Result<Outcome, CliError> {
    let verb = cmd.verb;
    let tol = cmd.tol.unwrap_or(EQ_TOL);
    let rt_tol = cmd.tol.unwrap_or(ROUND_TRIP_TOL);
    match verb {
        Verb::Lawcheck => lawcheck(cmd),
        Verb::Compose | Verb::Tensor => {
            arity(verb, inputs, 2)?;
            let compose = verb == Verb::Compose;
            // `compose f g` is g ∘ f: the first input runs first
            let result = match (&inputs[0], &inputs[1]) {
                (Input::Pfn(f), Input::Pfn(g)) => to_json(&if compose { g.compose(f)? } else { f.tensor(g) }),
                (Input::Aux(f), Input::Aux(g)) => to_json(&if compose { g.compose(f)? } else { f.tensor(g)? }),
                (Input::Matrix(f), Input::Matrix(g)) => {
                    let (f, g) = (isometry(f)?, isometry(g)?);
                    to_json(&if compose { g.compose(&f)? } else { f.tensor(&g) })
                }
                (Input::Channel(f), Input::Channel(g)) => to_json(&if compose { g.compose(f)? } else { f.tensor(g)? }),
                _ => return Err(unsupported(verb, inputs)),
            };
            Ok(Outcome::ok(result, tol))
        }
        Verb::BennettOf => {
            arity(verb, inputs, 1)?;
            let Input::Pfn(f) = &inputs[0] else { return Err(unsupported(verb, inputs)) };
            Ok(Outcome::ok(to_json(&AnyAux::PInj(AuxMorphism::bennett(f))), tol))
        }
        Verb::PfnOf => {
            arity(verb, inputs, 1)?;
            let Input::Aux(AnyAux::PInj(f)) = &inputs[0] else { return Err(unsupported(verb, inputs)) };
            Ok(Outcome::ok(to_json(&pfn_normalize(&ExtMorphism::new(f.clone()))), tol))
        }
        Verb::AuxEqual => {
            arity(verb, inputs, 2)?;
            match (&inputs[0], &inputs[1]) {
                (Input::Aux(AnyAux::PInj(f)), Input::Aux(AnyAux::PInj(g))) => {
                    let witness = f.aux_equiv(g)?;
                    let equal = witness.is_some();
                    let mut result = json!({ "equal": equal });
                    if let Some(w) = witness {
                        result["witness"] = to_json(&w);
                    }
                    Ok(Outcome::verdict(result, equal, tol))
                }
                (Input::Aux(AnyAux::Isometry(f)), Input::Aux(AnyAux::Isometry(g))) => {
                    let equal = f.aux_equiv(g, tol)?;
                    Ok(Outcome::verdict(json!({ "equal": equal }), equal, tol))
                }
                _ => Err(unsupported(verb, inputs)),
            }
        }
        Verb::ExtEqual => {
            arity(verb, inputs, 2)?;
            let equal = match (&inputs[0], &inputs[1]) {
                (Input::Aux(AnyAux::PInj(f)), Input::Aux(AnyAux::PInj(g))) => {
                    ExtMorphism::new(f.clone()).ext_equiv(&ExtMorphism::new(g.clone()))?
                }
                (Input::Pfn(f), Input::Pfn(g)) => pfn_functor(f).ext_equiv(&pfn_functor(g))?,
                // ≈ on isometries compares the induced channels
                (Input::Aux(AnyAux::Isometry(f)), Input::Aux(AnyAux::Isometry(g))) => f.aux_equiv(g, tol)?,
                _ => return Err(unsupported(verb, inputs)),
            };
            Ok(Outcome::verdict(json!({ "equal": equal }), equal, tol))
        }
        Verb::NormalForm => {
            arity(verb, inputs, 1)?;
            let Input::Aux(f) = &inputs[0] else { return Err(unsupported(verb, inputs)) };
            Ok(Outcome::ok(to_json(&f.normal_form()), tol))
        }
        Verb::Ridm => {
            arity(verb, inputs, 1)?;
            let result = match &inputs[0] {
                Input::Pfn(f) => to_json(&f.ridm()),
                Input::Aux(AnyAux::PInj(f)) => to_json(&AnyAux::PInj(f.ridm())),
                Input::Aux(AnyAux::Isometry(f)) => to_json(&AnyAux::Isometry(f.ridm())),
                Input::Matrix(m) => to_json(&IsometryM::identity(isometry(m)?.dom())),
                _ => return Err(unsupported(verb, inputs)),
            };
            Ok(Outcome::ok(result, tol))
        }
        Verb::Dagger => {
            arity(verb, inputs, 1)?;
            let result = match &inputs[0] {
                Input::Pfn(f) => to_json(&pinj(f)?.dagger()),
                Input::Matrix(m) => to_json(&unitary(m)?.adjoint()),
                _ => return Err(unsupported(verb, inputs)),
            };
            Ok(Outcome::ok(result, tol))
        }
        Verb::Factorize => {
            arity(verb, inputs, 1)?;
            let (embedded, projection) = match &inputs[0] {
                Input::Aux(AnyAux::PInj(f)) => {
                    let (e, p) = f.factorize();
                    (AnyAux::PInj(e), AnyAux::PInj(p))
                }
                Input::Aux(AnyAux::Isometry(f)) => {
                    let (e, p) = f.factorize();
                    (AnyAux::Isometry(e), AnyAux::Isometry(p))
                }
                _ => return Err(unsupported(verb, inputs)),
            };
            Ok(Outcome::ok(json!({ "embedded": to_json(&embedded), "projection": to_json(&projection) }), tol))
        }
        Verb::Dilate => {
            arity(verb, inputs, 1)?;
            let Input::Channel(c) = &inputs[0] else { return Err(unsupported(verb, inputs)) };
            let d = minimal_stinespring(c)?;
            let aux = AnyAux::Isometry(AuxMorphism::new(d.isometry.clone(), c.dout(), d.env_dim)?);
            Ok(Outcome::ok(json!({ "isometry": to_json(&d.isometry), "env_dim": d.env_dim, "aux": to_json(&aux) }), rt_tol))
        }
        Verb::Kraus => {
            arity(verb, inputs, 1)?;
            let result = match &inputs[0] {
                Input::Channel(c) => json!({ "kraus": to_json(&c.kraus()?) }),
                Input::Kraus(ks) => to_json(&Channel::from_kraus(ks)?),
                _ => return Err(unsupported(verb, inputs)),
            };
            Ok(Outcome::ok(result, rt_tol))
        }
        Verb::CompleteUnitary => {
            arity(verb, inputs, 1)?;
            let Input::Matrix(m) = &inputs[0] else { return Err(unsupported(verb, inputs)) };
            let inp = isometry_to_inp(&isometry(m)?);
            Ok(Outcome::ok(to_json(&inp), tol))
        }
        Verb::ChannelOfUnitary => {
            arity(verb, inputs, 1)?;
            let Input::Matrix(m) = &inputs[0] else { return Err(unsupported(verb, inputs)) };
            let c = if m.is_square() {
                unitary_to_channel(&unitary(m)?, cmd.anc, cmd.env)?
            } else {
                channel_of_isometry(&isometry(m)?, cmd.env)?
            };
            Ok(Outcome::ok(to_json(&c), tol))
        }
        Verb::ExtractUnitary => {
            arity(verb, inputs, 1)?;
            let Input::Channel(c) = &inputs[0] else { return Err(unsupported(verb, inputs)) };
            match extract_unitary(c) {
                Ok(u) => Ok(Outcome::ok(json!({ "unitary": to_json(&u) }), rt_tol)),
                Err(QuantumError::Dimension(msg)) => Err(CliError::Input(msg)),
                Err(e) => Ok(Outcome::verdict(json!({ "unitary": null, "reason": e.to_string() }), false, rt_tol)),
            }
        }
        Verb::Inv => {
            arity(verb, inputs, 1)?;
            let result = match &inputs[0] {
                Input::Pfn(f) => match inv_pfn(f) {
                    Some(p) => json!({ "reversible": true, "pinj": to_json(&p), "inverse": to_json(&p.dagger()) }),
                    None => json!({ "reversible": false, "reason": "not injective" }),
                },
                Input::Channel(c) => match inv_cptp(c) {
                    Ok(u) => json!({ "reversible": true, "unitary": to_json(u.rep()) }),
                    Err(r) => json!({ "reversible": false, "reason": r.to_string() }),
                },
                _ => return Err(unsupported(verb, inputs)),
            };
            Ok(Outcome::ok(result, 1e-8))
        }
        Verb::Roundtrip => {
            arity(verb, inputs, 1)?;
            roundtrip(&inputs[0], tol, rt_tol).ok_or_else(|| unsupported(verb, inputs))?
        }
    }
}

fn roundtrip(input: &Input, tol: f64, rt_tol: f64) -> Option<Result<Outcome, CliError>> {
    let out = match input {
        Input::Pfn(f) => {
            let back = pfn_normalize(&pfn_functor(f));
            let ok = &back == f;
            Outcome::verdict(json!({ "ok": ok, "pfn": to_json(&back), "injective": inv_pfn(f).is_some() }), ok, tol)
        }
        Input::Aux(AnyAux::PInj(f)) => {
            let e = ExtMorphism::new(f.clone());
            let back = pfn_functor(&pfn_normalize(&e));
            let ext_ok = match back.ext_equiv(&e) {
                Ok(b) => b,
                Err(err) => return Some(Err(err.into())),
            };
            let (m, p) = f.factorize();
            let fact_ok = match p.compose(&m) {
                Ok(r) => r.normal_form() == f.normal_form(),
                Err(err) => return Some(Err(err.into())),
            };
            let ok = ext_ok && fact_ok;
            Outcome::verdict(json!({ "ok": ok, "ext": ext_ok, "factorization": fact_ok }), ok, tol)
        }
        Input::Aux(AnyAux::Isometry(f)) => {
            let (m, p) = f.factorize();
            let ok = match p.compose(&m).and_then(|r| r.aux_equiv(f, rt_tol)) {
                Ok(b) => b,
                Err(err) => return Some(Err(err.into())),
            };
            Outcome::verdict(json!({ "ok": ok, "factorization": ok }), ok, rt_tol)
        }
        Input::Matrix(m) => {
            let v = match isometry(m) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            let inp = isometry_to_inp(&v);
            let residual = inp_to_isometry(&inp).matrix().max_abs_diff(v.matrix());
            let ok = residual <= tol;
            Outcome::verdict(json!({ "ok": ok, "residual": residual, "completion": to_json(&inp) }), ok, tol)
        }
        Input::Channel(c) => {
            let run = || -> Result<Outcome, CliError> {
                let r = realize_channel(c)?;
                let back = unitary_to_channel(&r.unitary, r.anc_dim, r.env_dim)?;
                let residual = back.choi().max_abs_diff(c.choi());
                let rank = c.choi_rank()?;
                let ok = residual <= rt_tol && rank == r.env_dim;
                Ok(Outcome::verdict(
                    json!({ "ok": ok, "residual": residual, "choi_rank": rank, "realization": to_json(&r) }),
                    ok,
                    rt_tol,
                ))
            };
            return Some(run());
        }
        Input::Kraus(_) => return None,
    };
    Some(Ok(out))
}

fn instance_size(cmd: &Command, default: usize) -> usize {
    cmd.max.unwrap_or(default)
}

fn reports_of<I: CategoryInstance>(inst: &I, cmd: &Command, cfg: &Config) -> Result<Vec<LawReport>, CliError> {
    Ok(check_named(inst, &cmd.law, cfg)?.into_iter().map(|o| o.report).collect())
}

fn lawcheck(cmd: &Command) -> Result<Outcome, CliError> {
    if !cmd.inputs.is_empty() {
        return Err(CliError::Input("lawcheck takes no inputs".into()));
    }
    let cfg = Config { trials: cmd.trials, seed: cmd.seed, ..Config::default() };
    let (instance, reports) = match cmd.law.as_str() {
        "ext.congruence" => ("Ext(Aux(PInj))".to_string(), vec![ext_congruence_check(cmd.trials, cmd.seed)]),
        "cptp.well_pointed" => {
            ("CPTP".to_string(), vec![wellpointed_check_cptp(instance_size(cmd, 2), cmd.trials, cmd.seed)])
        }
        _ => {
            let name = cmd.instance.clone().ok_or_else(|| {
                CliError::Input(format!("lawcheck needs --instance, one of {}", INSTANCE_NAMES.join(", ")))
            })?;
            let reports = match name.as_str() {
                "Pfn" => reports_of(&PfnInstance::new(instance_size(cmd, 3)), cmd, &cfg)?,
                "PInj" => reports_of(&PInjInstance::new(instance_size(cmd, 3)), cmd, &cfg)?,
                "Unitary" => reports_of(&UnitaryInstance::new(instance_size(cmd, 3)), cmd, &cfg)?,
                "Isometry" => reports_of(&IsometryInstance::new(instance_size(cmd, 3)), cmd, &cfg)?,
                "CPTP" => reports_of(&CptpInstance::new(instance_size(cmd, 2)), cmd, &cfg)?,
                "Aux(PInj)" => reports_of(&AuxPInjInstance::new(instance_size(cmd, 2), 2), cmd, &cfg)?,
                "Ext(Aux(PInj))" => reports_of(&ExtAuxPInjInstance::new(instance_size(cmd, 2), 2), cmd, &cfg)?,
                other => {
                    return Err(CliError::Input(format!(
                        "unknown instance {other:?}, expected one of {}",
                        INSTANCE_NAMES.join(", ")
                    )))
                }
            };
            (name, reports)
        }
    };
    let passed = reports.iter().all(|r| r.passed);
    let counterexample = reports.iter().find(|r| !r.passed).map(|r| {
        json!({ "law": r.law, "data": r.counterexample.clone().unwrap_or(Value::Null) })
    });
    let result = json!({ "instance": instance, "law": cmd.law, "passed": passed, "reports": to_json(&reports) });
    Ok(Outcome { counterexample, ..Outcome::verdict(result, passed, cmd.tol.unwrap_or(EQ_TOL)) })
}

/// Run a command, write its report, and return the process exit code.
pub fn main_with(cmd: &Command) -> i32 {
    match run(cmd) {
        Ok(report) => {
            let text = report.to_json();
            match &cmd.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return Status::InputError as i32;
                    }
                }
                None => print!("{text}"),
            }
            report.status as i32
        }
        Err(e) => {
            eprintln!("error: {e}");
            Status::InputError as i32
        }
    }
}

/// Reason strings reported by `inv` on channels.
pub fn irreversibility_reasons() -> [String; 3] {
    [Irreversible::Dimension, Irreversible::ChoiImpure, Irreversible::NotUnitary].map(|r| r.to_string())
}
