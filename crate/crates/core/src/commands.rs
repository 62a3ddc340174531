//! The four commands behind the `solvco` binary, as library calls.
//!
//! Each command turns an input document into a [`RunReport`]. Reports are
//! deterministic apart from `timing`; the exit code distinguishes success
//! (0), a theorem whose hypotheses fail (1), bad input (2) and an internal
//! inconsistency (3).

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::chars::{build_weight_system, CharLattice, DeclaredCharacters, WeightSystem};
use crate::derham::{derham_report, is_poincare_symmetric};
use crate::dolbeault::{
    breve_from, build_b_gamma, build_b_gamma_split, holomorphic_mostow_check, is_serre_symmetric, shortcut_hodge,
    structure_is_valid, validate_complex_structure, BGamma, ComplexStructure, MostowCheck, ShortcutMode,
};
use crate::error::{Error, Result};
use crate::input::{brackets_decl, load_str, with_algebra, BracketDecl, InputDocument, Problem};
use crate::lattice::IntVec;
use crate::lie::{compute_ad_s, validate, AdSMap, LieAlgebra};
use crate::modification::{choose_subtorus, kasuya_condition, modified_algebra, SubtorusMode, SubtorusSummary};
use crate::rational::{fmt_rational, parse_rational, Q};
use crate::report::{Check, CheckList};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const REPORT_SCHEMA: &str = "solvco-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Validate,
    Betti,
    Hodge,
    Modify,
}

/// Subtorus selection; explicit rows are declared-character coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubtorusArg {
    Auto,
    Full,
    Explicit(Vec<Vec<Q>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PipelineArg {
    Dolbb,
    Split,
    Breve,
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub subtorus: SubtorusArg,
    pub pipeline: PipelineArg,
}

impl Default for Options {
    fn default() -> Self {
        Options { subtorus: SubtorusArg::Auto, pipeline: PipelineArg::Auto }
    }
}

impl SubtorusArg {
    fn label(&self) -> String {
        match self {
            SubtorusArg::Auto => "auto".into(),
            SubtorusArg::Full => "full".into(),
            SubtorusArg::Explicit(rows) => format!(
                "explicit:[{}]",
                rows.iter()
                    .map(|r| format!("({})", r.iter().map(fmt_rational).collect::<Vec<_>>().join(", ")))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }
    }

    /// Resolves against a character lattice.
    pub fn mode(&self, lattice: &CharLattice) -> Result<SubtorusMode> {
        Ok(match self {
            SubtorusArg::Auto => SubtorusMode::Auto,
            SubtorusArg::Full => SubtorusMode::Full,
            SubtorusArg::Explicit(rows) => {
                SubtorusMode::Explicit(rows.iter().map(|r| lattice.coords(r)).collect::<Result<Vec<IntVec>>>()?)
            }
        })
    }
}

impl PipelineArg {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dolbb" => Ok(PipelineArg::Dolbb),
            "split" => Ok(PipelineArg::Split),
            "breve" => Ok(PipelineArg::Breve),
            "auto" => Ok(PipelineArg::Auto),
            _ => Err(Error::Parse(format!("unknown pipeline {s:?}; expected dolbb, split, breve or auto"))),
        }
    }

    fn label(self) -> &'static str {
        match self {
            PipelineArg::Dolbb => "dolbb",
            PipelineArg::Split => "split",
            PipelineArg::Breve => "breve",
            PipelineArg::Auto => "auto",
        }
    }
}

/// Explicit sublattice file: a JSON list of characters, each a map from
/// declared character name to rational exponent.
pub fn parse_explicit_rows(text: &str, decl: &DeclaredCharacters) -> Result<Vec<Vec<Q>>> {
    let rows: Vec<BTreeMap<String, String>> = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("explicit sublattice, line {}, column {}: {e}", e.line(), e.column())))?;
    rows.iter()
        .map(|row| {
            let mut out = vec![Q::from_integer(0.into()); decl.len()];
            for (name, c) in row {
                let m = decl
                    .names()
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::InvalidPresentation(format!("unknown character {name:?}")))?;
                out[m] = parse_rational(c)?;
            }
            Ok(out)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub name: String,
    pub sha256: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    HypothesisFailure,
    InvalidInput,
    InternalError,
}

impl Status {
    pub fn from_exit_code(code: i32) -> Status {
        match code {
            0 => Status::Pass,
            1 => Status::HypothesisFailure,
            2 => Status::InvalidInput,
            _ => Status::InternalError,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum CommandResult {
    Validate(ValidateResult),
    Betti(BettiResult),
    Hodge(HodgeResult),
    Modify(Box<ModifyResult>),
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: Command,
    pub toolkit_version: &'static str,
    pub input: InputInfo,
    pub options: BTreeMap<String, String>,
    pub status: Status,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<CommandResult>,
    pub timing: Timing,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The report with `timing` zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> RunReport {
        RunReport { timing: Timing { elapsed_ms: 0 }, ..self.clone() }
    }

    pub fn betti(&self) -> Option<&BettiResult> {
        match &self.result {
            Some(CommandResult::Betti(b)) => Some(b),
            _ => None,
        }
    }

    pub fn hodge(&self) -> Option<&HodgeResult> {
        match &self.result {
            Some(CommandResult::Hodge(h)) => Some(h),
            _ => None,
        }
    }

    pub fn validate(&self) -> Option<&ValidateResult> {
        match &self.result {
            Some(CommandResult::Validate(v)) => Some(v),
            _ => None,
        }
    }

    pub fn modify(&self) -> Option<&ModifyResult> {
        match &self.result {
            Some(CommandResult::Modify(m)) => Some(m),
            _ => None,
        }
    }
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs `command` on the text of an input document.
pub fn run(command: Command, text: &str, opts: &Options) -> RunReport {
    let start = Instant::now();
    let mut options = BTreeMap::new();
    match command {
        Command::Betti | Command::Modify => {
            options.insert("subtorus".to_string(), opts.subtorus.label());
        }
        Command::Hodge => {
            options.insert("pipeline".to_string(), opts.pipeline.label().to_string());
            options.insert("subtorus".to_string(), opts.subtorus.label());
        }
        Command::Validate => {}
    }
    let mut name = String::new();
    let outcome = load_str(text).and_then(|p| {
        name = p.name.clone();
        match command {
            Command::Validate => cmd_validate(&p).map(|(r, c)| (CommandResult::Validate(r), c)),
            Command::Betti => cmd_betti(&p, opts).map(|(r, c)| (CommandResult::Betti(r), c)),
            Command::Hodge => cmd_hodge(&p, opts).map(|(r, c)| (CommandResult::Hodge(r), c)),
            Command::Modify => cmd_modify(&p, opts).map(|(r, c)| (CommandResult::Modify(Box::new(r)), c)),
        }
    });
    let (result, exit_code, error) = match outcome {
        Ok((r, c)) => (Some(r), c, None),
        Err(e) => (None, e.exit_code(), Some(e.to_string())),
    };
    RunReport {
        schema: REPORT_SCHEMA,
        command,
        toolkit_version: TOOLKIT_VERSION,
        input: InputInfo { name, sha256: sha256_hex(text) },
        options,
        status: Status::from_exit_code(exit_code),
        exit_code,
        error,
        result,
        timing: Timing { elapsed_ms: start.elapsed().as_millis() as u64 },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightEntry {
    pub name: String,
    /// Values on the V basis.
    pub weight: Vec<String>,
    /// Coordinates in the declared characters.
    pub declared: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidateResult {
    /// Gating checks: the presentation and, when present, integrability of `J`.
    pub checks: CheckList,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex_structure: Option<CheckList>,
    pub weights: Vec<WeightEntry>,
    pub character_lattice_rank: usize,
    pub nilpotent: bool,
    pub completely_solvable: bool,
    /// No nontrivial product of weights is trivial on the lattice.
    pub kasuya_condition: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mostow: Option<MostowCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub field_warnings: Vec<String>,
}

struct Prepared {
    ads: AdSMap,
    ws: WeightSystem,
}

fn fe_strings(v: &[crate::field::FieldElement]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn validation(p: &Problem) -> Result<(ValidateResult, Option<Prepared>)> {
    let g = &p.algebra;
    let mut checks = validate(g);
    let empty = |checks: CheckList| ValidateResult {
        checks,
        complex_structure: None,
        weights: Vec::new(),
        character_lattice_rank: 0,
        nilpotent: false,
        completely_solvable: false,
        kasuya_condition: false,
        mostow: None,
        field_warnings: p.field.warnings().to_vec(),
    };
    if !checks.all_passed() {
        return Ok((empty(checks), None));
    }
    let ads = compute_ad_s(g)?;
    let ws = build_weight_system(g, &ads, &p.declared)?;
    checks.push(Check::pass("weight_system"));
    let (cs_checks, mostow) = match &p.complex_structure {
        Some(j) => {
            let c = validate_complex_structure(g, j, Some(&ads));
            for name in ["j_squared", "nijenhuis"] {
                let k = c.get(name).expect("always checked");
                checks.push(Check::new(&format!("complex_structure_{name}"), k.passed, k.detail.clone()));
            }
            let m = structure_is_valid(&c).then(|| holomorphic_mostow_check(g, &ads, j));
            (Some(c), m)
        }
        None => (None, None),
    };
    let weights = ws
        .names
        .iter()
        .enumerate()
        .map(|(i, n)| WeightEntry {
            name: n.clone(),
            weight: fe_strings(&ws.weights[i]),
            declared: ws.declared[i].iter().map(fmt_rational).collect(),
        })
        .collect();
    let result = ValidateResult {
        checks,
        complex_structure: cs_checks,
        weights,
        character_lattice_rank: ws.lattice.rank(),
        nilpotent: g.is_nilpotent(),
        completely_solvable: ws.completely_solvable(),
        kasuya_condition: kasuya_condition(&ws, &p.lattice),
        mostow,
        field_warnings: p.field.warnings().to_vec(),
    };
    Ok((result, Some(Prepared { ads, ws })))
}

pub fn cmd_validate(p: &Problem) -> Result<(ValidateResult, i32)> {
    let (r, _) = validation(p)?;
    let code = if r.checks.all_passed() { 0 } else { 2 };
    Ok((r, code))
}

fn presentation_ok(c: &CheckList) -> bool {
    c.checks.iter().all(|c| c.passed || c.name.starts_with("complex_structure_"))
}

/// Validation that must pass before any computation; integrability of `J`
/// only matters to the Dolbeault pipelines.
fn prepare(p: &Problem, need_j: bool) -> Result<Prepared> {
    let (r, prep) = validation(p)?;
    let relevant = |c: &&Check| need_j || !c.name.starts_with("complex_structure_");
    if let Some(c) = r.checks.checks.iter().filter(relevant).find(|c| !c.passed) {
        return Err(Error::InvalidPresentation(format!("validation check {} failed: {}", c.name, c.detail)));
    }
    prep.ok_or_else(|| Error::Internal("validation passed without a weight system".into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiResult {
    pub checks: CheckList,
    #[serde(rename = "betti_A_gamma")]
    pub betti_a_gamma: Vec<usize>,
    #[serde(rename = "betti_gS")]
    pub betti_g_s: Vec<usize>,
    pub betti_g: Vec<usize>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repair_index: Option<u32>,
    pub subtorus: SubtorusSummary,
    pub kasuya_condition: bool,
    pub regression: CheckList,
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(list: &mut CheckList, name: &str, want: Option<&T>, got: &T) {
    if let Some(w) = want {
        list.push(Check::new(
            name,
            w == got,
            if w == got { String::new() } else { format!("expected {w:?}, got {got:?}") },
        ));
    }
}

pub fn cmd_betti(p: &Problem, opts: &Options) -> Result<(BettiResult, i32)> {
    let prep = prepare(p, false)?;
    let ws = &prep.ws;
    let choice = choose_subtorus(ws, &p.lattice, &opts.subtorus.mode(&ws.lattice)?)?;
    let r = derham_report(&p.algebra, ws, &p.declared, &p.lattice, &choice)?;
    let mut regression = CheckList::default();
    if r.passed() {
        let e = &p.expectations;
        expect_eq(&mut regression, "expected_betti", e.betti.as_ref(), &r.betti_a_gamma);
        expect_eq(
            &mut regression,
            "expected_betti_differs_from_g",
            e.betti_differs_from_g.as_ref(),
            &(r.betti_a_gamma != r.betti_g),
        );
    }
    let code = if !regression.all_passed() || !is_poincare_symmetric(&r.betti_a_gamma) {
        3
    } else if r.passed() {
        0
    } else {
        1
    };
    Ok((
        BettiResult {
            betti_a_gamma: r.betti_a_gamma,
            betti_g_s: r.betti_g_s,
            betti_g: r.betti_g,
            verdict: r.verdict,
            repair_index: r.repair_index,
            checks: r.checks,
            subtorus: choice.summary(ws.lattice.rank()),
            kasuya_condition: kasuya_condition(ws, &p.lattice),
            regression,
        },
        code,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct Attempt {
    pub pipeline: String,
    pub outcome: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShortcutEntry {
    pub mode: ShortcutMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hodge: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BreveSummary {
    pub subtorus: SubtorusSummary,
    pub brackets: Vec<BracketDecl>,
    pub j: Vec<Vec<String>>,
    pub shortcuts: Vec<ShortcutEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HodgeResult {
    pub hodge: Vec<Vec<usize>>,
    pub assumptions: Vec<String>,
    pub pipeline: String,
    pub checks: CheckList,
    pub attempts: Vec<Attempt>,
    /// Informational comparisons that do not affect the exit code.
    pub notes: CheckList,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breve: Option<BreveSummary>,
    pub regression: CheckList,
}

fn require_j(p: &Problem) -> Result<&ComplexStructure> {
    p.complex_structure.as_ref().ok_or_else(|| Error::HypothesisFailure("the input has no complex structure".into()))
}

/// Structural hypotheses are checked first; the lattice splitting itself
/// can only be asserted by the input.
fn run_split(p: &Problem, j: &ComplexStructure) -> Result<BGamma> {
    let b = build_b_gamma_split(&p.algebra, j, &p.declared, &p.lattice)?;
    if !p.split_action {
        return Err(Error::HypothesisFailure("the input does not assert that the lattice splits".into()));
    }
    Ok(b)
}

fn record(attempts: &mut Vec<Attempt>, name: &str, r: &Result<BGamma>) {
    attempts.push(Attempt {
        pipeline: name.into(),
        outcome: match r {
            Ok(_) => "ran".into(),
            Err(e) => e.to_string(),
        },
    });
}

fn is_hypothesis(e: &Error) -> bool {
    e.exit_code() == 1
}

fn hodge_from_b(b: &BGamma) -> (Vec<Vec<usize>>, Vec<String>, String) {
    (b.hodge(), b.assumptions.clone(), b.pipeline.label().to_string())
}

pub fn cmd_hodge(p: &Problem, opts: &Options) -> Result<(HodgeResult, i32)> {
    let prep = prepare(p, true)?;
    let j = require_j(p)?;
    let g = &p.algebra;
    let mut attempts = Vec::new();
    let mut notes = CheckList::default();
    let mut checks = CheckList::default();
    let (hodge, assumptions, pipeline, breve) = match opts.pipeline {
        PipelineArg::Dolbb => {
            let b = build_b_gamma(g, &prep.ads, j, &p.declared, &p.lattice);
            record(&mut attempts, "dolbb", &b);
            let (h, a, l) = hodge_from_b(&b?);
            (h, a, l, None)
        }
        PipelineArg::Split => {
            let b = run_split(p, j);
            record(&mut attempts, "split", &b);
            let (h, a, l) = hodge_from_b(&b?);
            (h, a, l, None)
        }
        PipelineArg::Breve => {
            let d = build_b_gamma(g, &prep.ads, j, &p.declared, &p.lattice);
            record(&mut attempts, "dolbb", &d);
            let b = match d {
                Err(e) if is_hypothesis(&e) && p.split_action => {
                    let s = run_split(p, j);
                    record(&mut attempts, "split", &s);
                    s?
                }
                other => other?,
            };
            let (h, a, s) = breve(p, &b, opts, &mut checks, &mut notes)?;
            attempts.push(Attempt { pipeline: "breve".into(), outcome: "ran".into() });
            (h, a, "breve".to_string(), Some(s))
        }
        PipelineArg::Auto => {
            let d = build_b_gamma(g, &prep.ads, j, &p.declared, &p.lattice);
            record(&mut attempts, "dolbb", &d);
            let b = match d {
                Ok(b) => Ok(b),
                Err(e) if is_hypothesis(&e) => {
                    let s = run_split(p, j);
                    record(&mut attempts, "split", &s);
                    s
                }
                Err(e) => Err(e),
            };
            match b {
                Ok(b) => {
                    let (h, a, l) = hodge_from_b(&b);
                    (h, a, l, None)
                }
                Err(e) if is_hypothesis(&e) => {
                    attempts.push(Attempt {
                        pipeline: "breve".into(),
                        outcome: "not run: it needs the hypotheses of dolbb or split".into(),
                    });
                    return Err(Error::HypothesisFailure(format!("no pipeline applies; last failure: {e}")));
                }
                Err(e) => return Err(e),
            }
        }
    };

    checks.push(Check::pass("dbar_squared_zero"));
    let serre = is_serre_symmetric(&hodge);
    checks.push(Check::new("serre_symmetry", serre, if serre { String::new() } else { format!("{hodge:?}") }));
    let mut regression = CheckList::default();
    let e = &p.expectations;
    if e.hodge_informational {
        if let Some(w) = &e.hodge {
            notes.push(Check::new("expected_hodge_informational", w == &hodge, ""));
        }
    } else {
        expect_eq(&mut regression, "expected_hodge", e.hodge.as_ref(), &hodge);
    }
    let code = if checks.all_passed() && regression.all_passed() { 0 } else { 3 };
    Ok((HodgeResult { hodge, assumptions, pipeline, checks, attempts, notes, breve, regression }, code))
}

fn breve(
    p: &Problem,
    b: &BGamma,
    opts: &Options,
    checks: &mut CheckList,
    notes: &mut CheckList,
) -> Result<(Vec<Vec<usize>>, Vec<String>, BreveSummary)> {
    let lattice = CharLattice::new(&b.twist_declared, &p.declared)?;
    let mode = opts.subtorus.mode(&lattice)?;
    let bp = breve_from(&p.algebra, b, &p.declared, &p.lattice, &mode)?;
    let general = shortcut_hodge(&bp, ShortcutMode::General)?;
    let mut shortcuts =
        vec![ShortcutEntry { mode: ShortcutMode::General, hodge: Some(general.clone()), note: String::new() }];
    for mode in [ShortcutMode::Abelian, ShortcutMode::Parallelizable] {
        match shortcut_hodge(&bp, mode) {
            Ok(h) => {
                let agree = h == general;
                checks.push(Check::new(
                    &format!("shortcut_{}_agrees", serde_json::to_value(mode).expect("mode").as_str().unwrap_or("")),
                    agree,
                    if agree { String::new() } else { format!("{h:?}") },
                ));
                shortcuts.push(ShortcutEntry { mode, hodge: Some(h), note: String::new() });
            }
            Err(Error::ModeHypothesisFailure(m)) => shortcuts.push(ShortcutEntry { mode, hodge: None, note: m }),
            Err(e) => return Err(e),
        }
    }
    notes.push(Check::new(
        "breve_agrees_with_b_gamma",
        general == b.hodge(),
        "equality is expected when no passage to a finite-index sublattice is needed",
    ));
    let mut assumptions = b.assumptions.clone();
    assumptions.push(format!("breve pair built from the {} complex", b.pipeline.label()));
    if !bp.choice.is_identity() {
        assumptions.push("the isomorphism may require a finite-index sublattice".into());
    }
    let summary = BreveSummary {
        subtorus: bp.choice.summary(bp.unitary_lattice.rank()),
        brackets: brackets_decl(&bp.algebra),
        j: bp.j.j.to_strings(),
        shortcuts,
    };
    Ok((general, assumptions, summary))
}

#[derive(Clone, Debug, Serialize)]
pub struct ModifyResult {
    pub document: InputDocument,
    pub checks: CheckList,
    pub unchanged: bool,
    pub nilpotent: bool,
    pub completely_solvable: bool,
    pub subtorus: SubtorusSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mostow_before: Option<MostowCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mostow_after: Option<MostowCheck>,
    /// Whether `J` is integrable on `g` and on `g^S`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrable_before: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrable_after: Option<bool>,
    pub regression: CheckList,
}

/// `g^S` of a validated problem, without the report.
pub fn modify_algebra(p: &Problem, subtorus: &SubtorusArg) -> Result<LieAlgebra> {
    let prep = prepare(p, false)?;
    let choice = choose_subtorus(&prep.ws, &p.lattice, &subtorus.mode(&prep.ws.lattice)?)?;
    Ok(modified_algebra(&p.algebra, &prep.ws, &p.declared, &choice)?.algebra)
}

pub fn cmd_modify(p: &Problem, opts: &Options) -> Result<(ModifyResult, i32)> {
    let prep = prepare(p, false)?;
    let ws = &prep.ws;
    let choice = choose_subtorus(ws, &p.lattice, &opts.subtorus.mode(&ws.lattice)?)?;
    let ms = modified_algebra(&p.algebra, ws, &p.declared, &choice)?;
    let gs = &ms.algebra;
    let mut checks = CheckList::default();
    checks.push(Check::pass("jacobi"));

    let document = with_algebra(&p.document, gs, &format!("{}-modified", p.name));
    let text = serde_json::to_string(&document).map_err(|e| Error::Internal(e.to_string()))?;
    let again = load_str(&text).and_then(|q| validation(&q).map(|(r, prep)| (q, r, prep)));
    let (completely_solvable, mostow_after, integrable_after) = match again {
        Ok((q, r, Some(prep2))) if presentation_ok(&r.checks) => {
            checks.push(Check::pass("round_trip"));
            let m = q.complex_structure.as_ref().map(|j| holomorphic_mostow_check(&q.algebra, &prep2.ads, j));
            (prep2.ws.completely_solvable(), m, q.complex_structure.as_ref().map(|_| r.checks.all_passed()))
        }
        Ok((_, r, _)) => {
            let c = r.checks.first_failure().cloned();
            checks.push(Check::new(
                "round_trip",
                false,
                c.map(|c| format!("{}: {}", c.name, c.detail)).unwrap_or_default(),
            ));
            (false, None, None)
        }
        Err(e) => {
            checks.push(Check::new("round_trip", false, e.to_string()));
            (false, None, None)
        }
    };
    let integrable_before =
        p.complex_structure.as_ref().map(|j| structure_is_valid(&validate_complex_structure(&p.algebra, j, None)));
    let mostow_before = p.complex_structure.as_ref().map(|j| holomorphic_mostow_check(&p.algebra, &prep.ads, j));

    let mut regression = CheckList::default();
    let e = &p.expectations;
    expect_eq(
        &mut regression,
        "expected_mostow_before_modify",
        e.mostow_before_modify.as_ref(),
        &mostow_before.as_ref().is_some_and(|m| m.holds),
    );
    expect_eq(
        &mut regression,
        "expected_mostow_after_modify",
        e.mostow_after_modify.as_ref(),
        &mostow_after.as_ref().is_some_and(|m| m.holds),
    );
    let code = if checks.all_passed() && regression.all_passed() { 0 } else { 3 };
    Ok((
        ModifyResult {
            document,
            unchanged: gs == &p.algebra,
            nilpotent: gs.is_nilpotent(),
            completely_solvable,
            subtorus: choice.summary(ws.lattice.rank()),
            checks,
            mostow_before,
            mostow_after,
            integrable_before,
            integrable_after,
            regression,
        },
        code,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::tests::ROTATION;

    #[test]
    fn validate_and_betti_on_rotation() {
        let r = run(Command::Validate, ROTATION, &Options::default());
        assert_eq!(r.exit_code, 0, "{}", r.to_json());
        let b = run(Command::Betti, ROTATION, &Options::default());
        assert_eq!(b.betti().unwrap().betti_a_gamma, vec![1, 1, 1, 1]);
        assert_eq!(b.exit_code, 0);
    }

    #[test]
    fn jacobi_failure_is_invalid_input() {
        let bad = ROTATION.replace(
            "{\"left\": \"T\", \"right\": \"W1\", \"value\": {\"V1\": \"1\"}}",
            "{\"left\": \"T\", \"right\": \"W1\", \"value\": {\"V1\": \"1\"}}, {\"left\": \"V1\", \"right\": \"W1\", \"value\": {\"V1\": \"1\"}}",
        );
        let r = run(Command::Validate, &bad, &Options::default());
        assert_eq!(r.exit_code, 2, "{}", r.to_json());
        let detail = &r.validate().unwrap().checks.get("jacobi").unwrap().detail;
        assert!(detail.contains("T") && detail.contains("V1") && detail.contains("W1"), "{detail}");
        assert_eq!(run(Command::Betti, &bad, &Options::default()).exit_code, 2);
    }

    #[test]
    fn full_modification_is_abelian_and_round_trips() {
        let opts = Options { subtorus: SubtorusArg::Full, ..Options::default() };
        let r = run(Command::Modify, ROTATION, &opts);
        assert_eq!(r.exit_code, 0, "{}", r.to_json());
        let m = r.modify().unwrap();
        assert!(m.document.algebra.brackets.is_empty());
        assert!(m.nilpotent && !m.unchanged);
        let auto = run(Command::Modify, ROTATION, &Options::default());
        assert!(auto.modify().unwrap().unchanged);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run(Command::Betti, ROTATION, &Options::default()).without_timing().to_json();
        let b = run(Command::Betti, ROTATION, &Options::default()).without_timing().to_json();
        assert_eq!(a, b);
    }
}
