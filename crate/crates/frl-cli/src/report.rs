//! Report payloads. Every JSON report carries `"schema": 1` and check-style
//! reports list the axioms they examined by flag name, so downstream tools
//! can key on stable identifiers.

use serde::Serialize;

use frl_core::frob2::{check_frob2, check_groupoid, Frob2, Groupoid};
use frl_core::frob3::{check_connector, check_frob3, check_sliding, Connector, Frob3};

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct AxiomFlag {
    pub flag: &'static str,
    pub holds: bool,
}

fn flag(flag: &'static str, holds: bool) -> AxiomFlag {
    AxiomFlag { flag, holds }
}

/// Outcome of checking one declaration: the axiom flags examined, whether
/// the defining ones hold, and an optional diagnostic.
pub struct Checked {
    pub axioms: Vec<AxiomFlag>,
    pub pass: bool,
    pub message: Option<String>,
}

pub fn check_frob2_decl(f: &Frob2) -> Checked {
    let r = check_frob2(f);
    Checked {
        axioms: vec![
            flag("F1", r.f1_left_unit),
            flag("F2", r.f2_right_unit),
            flag("F3", r.f3_associative),
            flag("F4", r.f4_special),
            flag("F5", r.f5_frobenius),
        ],
        pass: r.all(),
        message: None,
    }
}

/// A ternary structure passes on its defining axioms (associativity and
/// dagger symmetry); the remaining flags are reported as information.
pub fn check_frob3_decl(t: &Frob3) -> Checked {
    let r = check_frob3(t);
    let sliding = check_sliding(t);
    Checked {
        axioms: vec![
            flag("T-assoc", r.t_associative),
            flag("T-sym", r.t_dagger_symmetric),
            flag("T-normal", r.t_normal),
            flag("T-left-idem", r.t_left_idempotent),
            flag("T-right-idem", r.t_right_idempotent),
            flag("T-comm", r.t_commutative),
            flag("T-sliding", sliding),
        ],
        pass: r.t_associative && r.t_dagger_symmetric,
        message: None,
    }
}

pub fn check_connector_decl(c: &Connector) -> Checked {
    match check_connector(c) {
        Ok(r) => Checked {
            axioms: vec![
                flag("C-result-in-S", r.result_in_s_class),
                flag("C-result-in-R", r.result_in_r_class),
                flag("C-right-unit", r.right_unit),
                flag("C-left-unit", r.left_unit),
                flag("C-assoc", r.chain_associative),
            ],
            pass: r.all(),
            message: None,
        },
        Err(e) => Checked { axioms: Vec::new(), pass: false, message: Some(e.to_string()) },
    }
}

pub fn check_groupoid_decl(g: &Groupoid) -> Checked {
    match check_groupoid(g) {
        Ok(()) => Checked { axioms: vec![flag("G-axioms", true)], pass: true, message: None },
        Err(e) => Checked {
            axioms: vec![flag("G-axioms", false)],
            pass: false,
            message: Some(e.to_string()),
        },
    }
}

#[derive(Serialize)]
pub struct CheckResult {
    pub name: String,
    pub kind: &'static str,
    pub axioms: Vec<AxiomFlag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub command: &'static str,
    pub file: String,
    pub results: Vec<CheckResult>,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct ConvertReport {
    pub schema: u32,
    pub command: &'static str,
    pub name: String,
    pub to: &'static str,
    pub result_frl: String,
}

#[derive(Serialize)]
pub struct SplitReport {
    pub schema: u32,
    pub command: &'static str,
    pub name: String,
    /// Each class lists its member pairs as codes `y·n + z`.
    pub classes: Vec<Vec<usize>>,
    pub axioms: Vec<AxiomFlag>,
    /// `i ; i† = id` on the classes.
    pub isometry_separates: bool,
    /// `i† ; i` recovers the pair relation that was split.
    pub isometry_recovers_pairs: bool,
    pub result_frl: String,
}

#[derive(Serialize)]
pub struct BlockRanges {
    pub left_classes: [usize; 2],
    pub right_classes: [usize; 2],
    pub dual: [usize; 2],
    pub base: [usize; 2],
}

#[derive(Serialize)]
pub struct EnvelopeReport {
    pub schema: u32,
    pub command: &'static str,
    pub name: String,
    pub size: usize,
    pub blocks: BlockRanges,
    pub axioms: Vec<AxiomFlag>,
    /// `κ ; κ† = id` on the base carrier.
    pub kappa_isometry: bool,
    pub result_frl: String,
}

#[derive(Serialize)]
pub struct EnumerateReport {
    pub schema: u32,
    pub command: &'static str,
    pub kind: String,
    pub size: usize,
    pub candidate_space: u128,
    pub count: usize,
    pub wall_time_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survivors: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct CpGapReport {
    pub schema: u32,
    pub command: &'static str,
    pub groupoid: String,
    /// A subset that is completely positive but not a subgroupoid, or null.
    pub gap: Option<Vec<usize>>,
}

#[derive(Serialize)]
pub struct EvalReport {
    pub schema: u32,
    pub command: &'static str,
    pub structure: String,
    pub term: String,
    pub in_word: String,
    pub out_word: String,
    pub pairs: Vec<EvalPair>,
}

#[derive(Serialize)]
pub struct EvalPair {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
}

#[derive(Serialize)]
pub struct NormalizeReport {
    pub schema: u32,
    pub command: &'static str,
    pub term: String,
    pub mode: &'static str,
    pub m: usize,
    pub n: usize,
    pub in_word: String,
    pub out_word: String,
    pub bend_in: Option<&'static str>,
    pub bend_out: Option<&'static str>,
    pub closed: bool,
    pub spider: String,
}

#[derive(Serialize)]
pub struct FmtReport {
    pub schema: u32,
    pub command: &'static str,
    pub result_frl: String,
}

#[derive(Serialize)]
pub struct ErrorObject {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub schema: u32,
    pub error: ErrorObject,
}

pub fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

/// Render an axiom list for the human-readable check line.
pub fn axioms_human(axioms: &[AxiomFlag]) -> String {
    if axioms.is_empty() {
        return "shape validated on load".into();
    }
    axioms
        .iter()
        .map(|a| format!("{} {}", a.flag, if a.holds { "ok" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join(", ")
}
