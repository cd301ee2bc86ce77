//! `frl` — command-line front end for the finite relational Frobenius
//! workbench.
//!
//! Exit codes are a stable contract: `0` success, `1` a check or
//! construction failed on valid input, `2` the input itself was unusable
//! (unreadable file, syntax error, unresolved name, shape violation, bad
//! flags). With `--json`, reports and errors alike are machine-readable
//! objects on stdout carrying `"schema": 1`; human diagnostics go to stderr.

mod doc;
mod emit;
mod parse;
mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use frl_core::bridges::{envelope, split_construction, three_to_two, two_to_three};
use frl_core::diagrams::{eval, normalize, BendEnd, Mode, Term};
use frl_core::finrel::{FinRel, FinSet, Obj, Polarity};
use frl_core::frob2::{frob2_to_groupoid, groupoid_to_frob2};
use frl_core::frob3::{connector_to_frob3, frob3_to_connector, Frob3};
use frl_core::search::{
    enumerate_connectors, enumerate_frob2, enumerate_frob3, enumerate_groupoids, find_cp_gap,
    EnumReport, Frob2Require, Frob3Require,
};

use doc::{load, save, select, Decl, DeclBody, DocBuilder, FrlDocument, LoadError};
use emit::{component, emit_document, emit_with_header};
use report::{
    axioms_human, check_connector_decl, check_frob2_decl, check_frob3_decl, check_groupoid_decl,
    print_json, AxiomFlag, BlockRanges, CheckReport, CheckResult, Checked, ConvertReport,
    CpGapReport, EnumerateReport, EnvelopeReport, ErrorObject, ErrorReport, EvalPair, EvalReport,
    FmtReport, NormalizeReport, SplitReport, SCHEMA,
};

#[derive(Parser)]
#[command(
    name = "frl",
    version,
    about = "Check, convert, enumerate and rewrite finite relational Frobenius structures"
)]
struct Cli {
    /// Emit machine-readable JSON on stdout (reports and errors alike).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate declarations against their defining axioms.
    Check {
        file: PathBuf,
        /// Check one declaration instead of the whole file.
        #[arg(long)]
        name: Option<String>,
    },
    /// Convert a structure to another presentation.
    Convert {
        file: PathBuf,
        /// Which declaration to convert (default: the sole structure).
        #[arg(long)]
        name: Option<String>,
        /// Target presentation.
        #[arg(long, value_enum)]
        to: TargetKind,
        /// Unit elements for a ternary → binary conversion, comma separated.
        #[arg(long, value_delimiter = ',')]
        unit: Vec<usize>,
        /// Write the resulting document here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Split the left pair relation of a ternary structure into classes.
    Split {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build the enveloping binary structure of a ternary structure.
    Envelope {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Enumerate all structures of a kind on a small carrier.
    Enumerate {
        #[arg(long, value_enum)]
        kind: EnumKind,
        /// Carrier size (morphism count for groupoids).
        #[arg(long)]
        size: usize,
        /// Restrict to these requirement flags (default: all of them).
        /// frob2: special, dagger. frob3: normal, dagger, assoc.
        #[arg(long, value_delimiter = ',')]
        require: Option<Vec<String>>,
        /// Include the survivors, serialized, in the report.
        #[arg(long)]
        survivors: bool,
    },
    /// Counterexample searches.
    Search {
        #[command(subcommand)]
        search: SearchCommand,
    },
    /// Evaluate and normalize diagram terms.
    Diagram {
        #[command(subcommand)]
        diagram: DiagramCommand,
    },
    /// Reprint a file in canonical form.
    Fmt { file: PathBuf },
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Find a subset of a groupoid that is completely positive but not a
    /// subgroupoid.
    CpGap {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum DiagramCommand {
    /// Evaluate a term to a relation over a ternary structure.
    Eval {
        file: PathBuf,
        /// The structure to evaluate against (default: the sole one).
        #[arg(long)]
        structure: Option<String>,
        /// The term, e.g. "(cupx * id+) ; mu3".
        term: String,
    },
    /// Rewrite a connected term to spider normal form.
    Normalize {
        /// Admit swap generators (merges the two loop counts).
        #[arg(long)]
        commutative: bool,
        term: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetKind {
    Groupoid,
    Frob2,
    Frob3,
    Connector,
}

impl TargetKind {
    fn word(self) -> &'static str {
        match self {
            TargetKind::Groupoid => "groupoid",
            TargetKind::Frob2 => "frob2",
            TargetKind::Frob3 => "frob3",
            TargetKind::Connector => "connector",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumKind {
    Frob2,
    Groupoid,
    Frob3,
    Connector,
}

/// A command that could not complete: exit code, machine-readable kind, and
/// an optional source position.
struct CmdFail {
    code: i32,
    kind: &'static str,
    message: String,
    line: Option<usize>,
    col: Option<usize>,
}

impl CmdFail {
    /// Unusable input: exit 2.
    fn input(kind: &'static str, message: impl Into<String>) -> CmdFail {
        CmdFail { code: 2, kind, message: message.into(), line: None, col: None }
    }

    /// Valid input, failed outcome: exit 1.
    fn failed(kind: &'static str, message: impl Into<String>) -> CmdFail {
        CmdFail { code: 1, kind, message: message.into(), line: None, col: None }
    }

    fn render(&self, json: bool) {
        if json {
            print_json(&ErrorReport {
                schema: SCHEMA,
                error: ErrorObject {
                    kind: self.kind,
                    message: self.message.clone(),
                    line: self.line,
                    col: self.col,
                },
            });
        }
        eprintln!("error: {}", self.message);
    }
}

fn load_doc(path: &Path) -> Result<FrlDocument, CmdFail> {
    load(path).map_err(|e| match e {
        LoadError::Io(e) => CmdFail::input("io", format!("cannot read {}: {e}", path.display())),
        LoadError::Doc(e) => {
            let (line, col) = e.position();
            CmdFail {
                code: 2,
                kind: e.kind(),
                message: format!("{}:{e}", path.display()),
                line: Some(line),
                col,
            }
        }
    })
}

fn selected<'a>(
    doc: &'a FrlDocument,
    name: Option<&str>,
    wanted: &str,
    accepts: impl Fn(&DeclBody) -> bool,
) -> Result<&'a Decl, CmdFail> {
    select(doc, name, wanted, accepts).map_err(|e| CmdFail::input("selection", e.to_string()))
}

/// The ternary structure a declaration presents, for the commands that need
/// one (split, envelope, diagram eval).
fn as_ternary(decl: &Decl) -> Frob3 {
    match &decl.body {
        DeclBody::Frob3(t) => t.clone(),
        DeclBody::Connector(c) => connector_to_frob3(c),
        _ => unreachable!("selection admits only ternary presentations"),
    }
}

fn is_ternary(body: &DeclBody) -> bool {
    matches!(body, DeclBody::Frob3(_) | DeclBody::Connector(_))
}

/// Emit a built document: to `--out` if given, else to stdout (unless the
/// report itself will carry the text under `--json`). Returns the canonical
/// text for embedding in reports.
fn output_document(doc: &FrlDocument, out: Option<&Path>, json: bool) -> Result<String, CmdFail> {
    let text = emit_document(doc);
    if let Some(path) = out {
        save(doc, path)
            .map_err(|e| CmdFail::input("io", format!("cannot write {}: {e}", path.display())))?;
        if !json {
            eprintln!("wrote {}", path.display());
        }
    } else if !json {
        print!("{text}");
    }
    Ok(text)
}

/// As `output_document` for pre-rendered text (used where a comment header
/// rides above the declarations).
fn output_text(text: &str, out: Option<&Path>, json: bool) -> Result<(), CmdFail> {
    if let Some(path) = out {
        std::fs::write(path, text)
            .map_err(|e| CmdFail::input("io", format!("cannot write {}: {e}", path.display())))?;
        if !json {
            eprintln!("wrote {}", path.display());
        }
    } else if !json {
        print!("{text}");
    }
    Ok(())
}

fn word_text(word: &[Polarity]) -> String {
    if word.is_empty() {
        "I".into()
    } else {
        word.iter().map(|p| p.symbol()).collect()
    }
}

fn main() {
    // Die quietly when the reading end of a pipe closes (`frl ... | head`),
    // like other line-oriented tools, instead of panicking on EPIPE.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = Cli::parse();
    let json = cli.json;
    let code = match run(cli.command, json) {
        Ok(code) => code,
        Err(fail) => {
            fail.render(json);
            fail.code
        }
    };
    std::process::exit(code);
}

fn run(command: Command, json: bool) -> Result<i32, CmdFail> {
    match command {
        Command::Check { file, name } => cmd_check(&file, name.as_deref(), json),
        Command::Convert { file, name, to, unit, out } => {
            cmd_convert(&file, name.as_deref(), to, &unit, out.as_deref(), json)
        }
        Command::Split { file, name, out } => {
            cmd_split(&file, name.as_deref(), out.as_deref(), json)
        }
        Command::Envelope { file, name, out } => {
            cmd_envelope(&file, name.as_deref(), out.as_deref(), json)
        }
        Command::Enumerate { kind, size, require, survivors } => {
            cmd_enumerate(kind, size, require, survivors)
        }
        Command::Search { search: SearchCommand::CpGap { file, name } } => {
            cmd_cp_gap(&file, name.as_deref())
        }
        Command::Diagram { diagram } => match diagram {
            DiagramCommand::Eval { file, structure, term } => {
                cmd_eval(&file, structure.as_deref(), &term, json)
            }
            DiagramCommand::Normalize { commutative, term } => {
                cmd_normalize(commutative, &term, json)
            }
        },
        Command::Fmt { file } => cmd_fmt(&file, json),
    }
}

fn cmd_check(file: &Path, name: Option<&str>, json: bool) -> Result<i32, CmdFail> {
    let doc = load_doc(file)?;
    let targets: Vec<&Decl> = match name {
        Some(n) => {
            vec![doc
                .get(n)
                .ok_or_else(|| CmdFail::input("selection", format!("no declaration named `{n}`")))?]
        }
        None => doc.decls.iter().collect(),
    };

    let mut results = Vec::with_capacity(targets.len());
    for decl in targets {
        let checked = match &decl.body {
            DeclBody::Object { .. } | DeclBody::Rel(_) => {
                Checked { axioms: Vec::new(), pass: true, message: None }
            }
            DeclBody::Frob2(f) => check_frob2_decl(f),
            DeclBody::Frob3(t) => check_frob3_decl(t),
            DeclBody::Connector(c) => check_connector_decl(c),
            DeclBody::Groupoid(g) => check_groupoid_decl(g),
        };
        results.push(CheckResult {
            name: decl.name.clone(),
            kind: decl.body.kind(),
            axioms: checked.axioms,
            message: checked.message,
            pass: checked.pass,
        });
    }
    let pass = results.iter().all(|r| r.pass);

    if json {
        print_json(&CheckReport {
            schema: SCHEMA,
            command: "check",
            file: file.display().to_string(),
            results,
            pass,
        });
    } else {
        for r in &results {
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            println!("{} ({}): {}  [{}]", r.name, r.kind, verdict, axioms_human(&r.axioms));
            if let Some(message) = &r.message {
                println!("  {message}");
            }
        }
    }
    Ok(if pass { 0 } else { 1 })
}

fn precondition(e: impl std::fmt::Display) -> CmdFail {
    CmdFail::failed("precondition", e.to_string())
}

fn convert_body(decl: &Decl, to: TargetKind, unit: &[usize]) -> Result<DeclBody, CmdFail> {
    let from = decl.body.kind();
    if from == to.word() {
        return Err(CmdFail::input(
            "conversion",
            format!("`{}` is already a {from}", decl.name),
        ));
    }

    // --unit drives only the ternary → binary contraction.
    let uses_unit = matches!(&decl.body, DeclBody::Frob3(_) | DeclBody::Connector(_))
        && matches!(to, TargetKind::Frob2 | TargetKind::Groupoid);
    if !unit.is_empty() && !uses_unit {
        return Err(CmdFail::input(
            "usage",
            "--unit only applies when converting a ternary structure to frob2 or groupoid",
        ));
    }

    let contract = |t: &Frob3| -> Result<frl_core::frob2::Frob2, CmdFail> {
        if unit.is_empty() {
            return Err(CmdFail::input(
                "usage",
                "converting a ternary structure to a binary one needs --unit (e.g. --unit 0)",
            ));
        }
        if let Some(&bad) = unit.iter().find(|&&e| e >= t.size()) {
            return Err(CmdFail::input(
                "shape",
                format!("unit element {bad} is out of range for a carrier of size {}", t.size()),
            ));
        }
        three_to_two(t, unit).map_err(precondition)
    };

    match (&decl.body, to) {
        (DeclBody::Frob2(f), TargetKind::Groupoid) => {
            Ok(DeclBody::Groupoid(frob2_to_groupoid(f).map_err(precondition)?))
        }
        (DeclBody::Frob2(f), TargetKind::Frob3) => {
            Ok(DeclBody::Frob3(two_to_three(f).map_err(precondition)?))
        }
        (DeclBody::Frob2(f), TargetKind::Connector) => {
            let t = two_to_three(f).map_err(precondition)?;
            Ok(DeclBody::Connector(frob3_to_connector(&t).map_err(precondition)?))
        }
        (DeclBody::Frob3(t), TargetKind::Frob2) => Ok(DeclBody::Frob2(contract(t)?)),
        (DeclBody::Frob3(t), TargetKind::Groupoid) => {
            Ok(DeclBody::Groupoid(frob2_to_groupoid(&contract(t)?).map_err(precondition)?))
        }
        (DeclBody::Frob3(t), TargetKind::Connector) => {
            Ok(DeclBody::Connector(frob3_to_connector(t).map_err(precondition)?))
        }
        (DeclBody::Connector(c), TargetKind::Frob3) => {
            Ok(DeclBody::Frob3(connector_to_frob3(c)))
        }
        (DeclBody::Connector(c), TargetKind::Frob2) => {
            Ok(DeclBody::Frob2(contract(&connector_to_frob3(c))?))
        }
        (DeclBody::Connector(c), TargetKind::Groupoid) => {
            let f = contract(&connector_to_frob3(c))?;
            Ok(DeclBody::Groupoid(frob2_to_groupoid(&f).map_err(precondition)?))
        }
        (DeclBody::Groupoid(g), TargetKind::Frob2) => {
            Ok(DeclBody::Frob2(groupoid_to_frob2(g)))
        }
        (DeclBody::Groupoid(g), TargetKind::Frob3) => {
            Ok(DeclBody::Frob3(two_to_three(&groupoid_to_frob2(g)).map_err(precondition)?))
        }
        (DeclBody::Groupoid(g), TargetKind::Connector) => {
            let t = two_to_three(&groupoid_to_frob2(g)).map_err(precondition)?;
            Ok(DeclBody::Connector(frob3_to_connector(&t).map_err(precondition)?))
        }
        _ => unreachable!("selection admits only structures and same-kind is rejected"),
    }
}

fn cmd_convert(
    file: &Path,
    name: Option<&str>,
    to: TargetKind,
    unit: &[usize],
    out: Option<&Path>,
    json: bool,
) -> Result<i32, CmdFail> {
    let doc = load_doc(file)?;
    let decl = selected(&doc, name, "a structure", DeclBody::is_structure)?;
    let converted = convert_body(decl, to, unit)?;

    let mut builder = DocBuilder::new();
    builder.push_body(&decl.name, &converted);
    let text = output_document(&builder.finish(), out, json)?;
    if json {
        print_json(&ConvertReport {
            schema: SCHEMA,
            command: "convert",
            name: decl.name.clone(),
            to: to.word(),
            result_frl: text,
        });
    }
    Ok(0)
}

fn cmd_split(file: &Path, name: Option<&str>, out: Option<&Path>, json: bool) -> Result<i32, CmdFail> {
    let doc = load_doc(file)?;
    let decl = selected(&doc, name, "a ternary structure (frob3 or connector)", is_ternary)?;
    let t = as_ternary(decl);
    let split = split_construction(&t).map_err(precondition)?;

    let internal = |e: frl_core::finrel::RelError| CmdFail::failed("internal", e.to_string());
    let id_classes = FinRel::identity(Obj::plain(split.class_set.clone()));
    let separates =
        split.isometry.compose(&split.isometry.dagger()).map_err(internal)? == id_classes;
    let recovers =
        split.isometry.dagger().compose(&split.isometry).map_err(internal)? == t.l_rel();
    let axioms = check_frob2_decl(&split.structure).axioms;

    let mut builder = DocBuilder::new();
    builder.push_frob2(&format!("{}_split", decl.name), &split.structure);
    builder.push_rel(&format!("{}_isometry", decl.name), &split.isometry);
    let text = output_document(&builder.finish(), out, json)?;

    if json {
        print_json(&SplitReport {
            schema: SCHEMA,
            command: "split",
            name: decl.name.clone(),
            classes: split.classes.clone(),
            axioms,
            isometry_separates: separates,
            isometry_recovers_pairs: recovers,
            result_frl: text,
        });
    } else {
        eprintln!("split of {}: {} classes", decl.name, split.classes.len());
        eprintln!("result axioms: {}", axioms_human(&axioms));
        eprintln!(
            "isometry laws: separates {}, recovers pair relation {}",
            if separates { "ok" } else { "FAIL" },
            if recovers { "ok" } else { "FAIL" },
        );
    }
    if separates && recovers {
        Ok(0)
    } else {
        Err(CmdFail::failed("internal", "the splitting isometry laws failed"))
    }
}

fn cmd_envelope(
    file: &Path,
    name: Option<&str>,
    out: Option<&Path>,
    json: bool,
) -> Result<i32, CmdFail> {
    let doc = load_doc(file)?;
    let decl = selected(&doc, name, "a ternary structure (frob3 or connector)", is_ternary)?;
    let t = as_ternary(decl);
    let env = envelope(&t).map_err(precondition)?;

    let groupoid = frob2_to_groupoid(&env.structure)
        .map_err(|e| CmdFail::failed("internal", format!("envelope is not groupoid-presentable: {e}")))?;
    let [o0, o1, o2, o3] = env.offsets();
    let size = env.size();
    let blocks = BlockRanges {
        left_classes: [o0, o1],
        right_classes: [o1, o2],
        dual: [o2, o3],
        base: [o3, size],
    };

    let mut axioms = check_frob2_decl(&env.structure).axioms;
    axioms.push(AxiomFlag { flag: "symmetric", holds: env.structure.is_symmetric() });
    let internal = |e: frl_core::finrel::RelError| CmdFail::failed("internal", e.to_string());
    let kappa_isometry = env.kappa.compose(&env.kappa.dagger()).map_err(internal)?
        == FinRel::identity(Obj::plain(t.carrier.clone()));

    // Serialize as a groupoid whose morphism indices are the envelope
    // carrier indices, plus the inclusion of the base structure.
    let env_set = FinSet::new(format!("{}_env", decl.name), size);
    let kappa = FinRel::from_pairs(
        Obj::plain(t.carrier.clone()),
        Obj::plain(env_set),
        &env.kappa.pairs(),
    );
    let mut builder = DocBuilder::new();
    builder.push_groupoid(&format!("{}_envelope", decl.name), &groupoid);
    builder.push_rel(&format!("{}_kappa", decl.name), &kappa);
    let header = vec![
        format!(
            "envelope of {}: size {size} = left classes {} + right classes {} + dual {} + base {}",
            decl.name,
            o1 - o0,
            o2 - o1,
            o3 - o2,
            size - o3,
        ),
        format!(
            "blocks: left [{o0},{o1})  right [{o1},{o2})  dual [{o2},{o3})  base [{o3},{size})"
        ),
        "groupoid morphism indices equal envelope carrier indices".to_string(),
    ];
    let text = emit_with_header(&builder.finish(), &header);
    output_text(&text, out, json)?;

    if json {
        print_json(&EnvelopeReport {
            schema: SCHEMA,
            command: "envelope",
            name: decl.name.clone(),
            size,
            blocks,
            axioms,
            kappa_isometry,
            result_frl: text,
        });
    } else {
        eprintln!("envelope of {}: size {size}", decl.name);
        eprintln!("result axioms: {}", axioms_human(&axioms));
        eprintln!("kappa isometry: {}", if kappa_isometry { "ok" } else { "FAIL" });
    }
    if kappa_isometry {
        Ok(0)
    } else {
        Err(CmdFail::failed("internal", "the envelope inclusion is not an isometry"))
    }
}

fn frob2_requirements(flags: Option<&[String]>) -> Result<Frob2Require, CmdFail> {
    let Some(flags) = flags else { return Ok(Frob2Require::default()) };
    let mut require = Frob2Require { special: false, dagger: false };
    for f in flags {
        match f.as_str() {
            "special" => require.special = true,
            "dagger" => require.dagger = true,
            other => {
                return Err(CmdFail::input(
                    "usage",
                    format!("unknown frob2 requirement `{other}` (expected special, dagger)"),
                ))
            }
        }
    }
    Ok(require)
}

fn frob3_requirements(flags: Option<&[String]>) -> Result<Frob3Require, CmdFail> {
    let Some(flags) = flags else { return Ok(Frob3Require::default()) };
    let mut require = Frob3Require { normal: false, dagger_symmetric: false, assoc: false };
    for f in flags {
        match f.as_str() {
            "normal" => require.normal = true,
            "dagger" | "dagger-symmetric" => require.dagger_symmetric = true,
            "assoc" => require.assoc = true,
            other => {
                return Err(CmdFail::input(
                    "usage",
                    format!("unknown frob3 requirement `{other}` (expected normal, dagger, assoc)"),
                ))
            }
        }
    }
    Ok(require)
}

fn cmd_enumerate(
    kind: EnumKind,
    size: usize,
    require: Option<Vec<String>>,
    survivors: bool,
) -> Result<i32, CmdFail> {
    fn finish<T>(
        report: EnumReport<T>,
        size: usize,
        survivors: bool,
        mut serialize: impl FnMut(&mut DocBuilder, &str, &T),
    ) -> EnumerateReport {
        let texts = survivors.then(|| {
            report
                .survivors
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let mut builder = DocBuilder::new();
                    serialize(&mut builder, &format!("survivor_{i}"), s);
                    emit_document(&builder.finish())
                })
                .collect()
        });
        EnumerateReport {
            schema: SCHEMA,
            command: "enumerate",
            kind: report.kind,
            size,
            candidate_space: report.candidate_space,
            count: report.count,
            wall_time_ms: report.wall_time.as_millis(),
            survivors: texts,
        }
    }

    let too_large = |e: frl_core::search::SearchError| CmdFail::input("size", e.to_string());
    let flags = require.as_deref();
    let report = match kind {
        EnumKind::Frob2 => {
            let report = enumerate_frob2(size, frob2_requirements(flags)?).map_err(too_large)?;
            finish(report, size, survivors, |b, n, f| {
                b.push_frob2(n, f);
            })
        }
        EnumKind::Groupoid => {
            if flags.is_some() {
                return Err(CmdFail::input("usage", "groupoid enumeration takes no --require flags"));
            }
            let report = enumerate_groupoids(size).map_err(too_large)?;
            finish(report, size, survivors, |b, n, g| {
                b.push_groupoid(n, g);
            })
        }
        EnumKind::Frob3 => {
            let report = enumerate_frob3(size, frob3_requirements(flags)?).map_err(too_large)?;
            finish(report, size, survivors, |b, n, t| {
                b.push_frob3(n, t);
            })
        }
        EnumKind::Connector => {
            if flags.is_some() {
                return Err(CmdFail::input("usage", "connector enumeration takes no --require flags"));
            }
            let report = enumerate_connectors(size).map_err(too_large)?;
            finish(report, size, survivors, |b, n, c| {
                b.push_connector(n, c);
            })
        }
    };
    print_json(&report);
    Ok(0)
}

fn cmd_cp_gap(file: &Path, name: Option<&str>) -> Result<i32, CmdFail> {
    let doc = load_doc(file)?;
    let decl = selected(&doc, name, "a groupoid", |b| matches!(b, DeclBody::Groupoid(_)))?;
    let DeclBody::Groupoid(g) = &decl.body else { unreachable!("selection filters groupoids") };
    let gap = find_cp_gap(g);
    print_json(&CpGapReport {
        schema: SCHEMA,
        command: "search cp-gap",
        groupoid: decl.name.clone(),
        gap,
    });
    Ok(0)
}

fn parse_term(text: &str) -> Result<Term, CmdFail> {
    Term::parse(text).map_err(|e| CmdFail::input("term", e.to_string()))
}

fn cmd_eval(file: &Path, structure: Option<&str>, term: &str, json: bool) -> Result<i32, CmdFail> {
    let doc = load_doc(file)?;
    let decl = selected(&doc, structure, "a ternary structure (frob3 or connector)", is_ternary)?;
    let t = as_ternary(decl);
    let parsed = parse_term(term)?;
    let rel = eval(&parsed, &t).map_err(|e| CmdFail::input("term", e.to_string()))?;

    let in_word = word_text(&rel.src.factors.iter().map(|&(_, p)| p).collect::<Vec<_>>());
    let out_word = word_text(&rel.dst.factors.iter().map(|&(_, p)| p).collect::<Vec<_>>());
    if json {
        print_json(&EvalReport {
            schema: SCHEMA,
            command: "diagram eval",
            structure: decl.name.clone(),
            term: parsed.to_string(),
            in_word,
            out_word,
            pairs: rel
                .pairs()
                .into_iter()
                .map(|(a, b)| EvalPair { from: rel.src.decode(a), to: rel.dst.decode(b) })
                .collect(),
        });
    } else {
        println!("term: {parsed}");
        println!("in: {in_word}  out: {out_word}");
        for (a, b) in rel.pairs() {
            println!("{} -> {}", component(&rel.src, a), component(&rel.dst, b));
        }
    }
    Ok(0)
}

fn cmd_normalize(commutative: bool, term: &str, json: bool) -> Result<i32, CmdFail> {
    let parsed = parse_term(term)?;
    let mode = if commutative { Mode::Commutative } else { Mode::Planar };
    // An ill-typed term is bad input; a term the chosen mode cannot rewrite
    // (swap under planar rules, disconnected, closed) is a failed outcome.
    let nf = normalize(&parsed, mode).map_err(|e| match e {
        frl_core::diagrams::DiagramError::Type { .. } => CmdFail::input("term", e.to_string()),
        _ => CmdFail::failed("normalize", e.to_string()),
    })?;
    let spider = nf
        .spider()
        .map_err(|e| CmdFail::failed("internal", format!("normal form has no spider term: {e}")))?;

    let bend = |b: Option<BendEnd>| {
        b.map(|end| match end {
            BendEnd::Leftmost => "leftmost",
            BendEnd::Rightmost => "rightmost",
        })
    };
    if json {
        print_json(&NormalizeReport {
            schema: SCHEMA,
            command: "diagram normalize",
            term: parsed.to_string(),
            mode: if commutative { "commutative" } else { "planar" },
            m: nf.m,
            n: nf.n,
            in_word: word_text(&nf.in_word),
            out_word: word_text(&nf.out_word),
            bend_in: bend(nf.bend_in),
            bend_out: bend(nf.bend_out),
            closed: nf.closed,
            spider: spider.to_string(),
        });
    } else {
        println!("spider: {spider}");
        println!("m = {}, n = {}", nf.m, nf.n);
        println!("in: {}  out: {}", word_text(&nf.in_word), word_text(&nf.out_word));
        println!(
            "bend_in: {}, bend_out: {}",
            bend(nf.bend_in).unwrap_or("none"),
            bend(nf.bend_out).unwrap_or("none"),
        );
        if nf.closed {
            println!("closed: the term has no boundary");
        }
    }
    Ok(0)
}

fn cmd_fmt(file: &Path, json: bool) -> Result<i32, CmdFail> {
    let doc = load_doc(file)?;
    let text = emit_document(&doc);
    if json {
        print_json(&FmtReport { schema: SCHEMA, command: "fmt", result_frl: text });
    } else {
        print!("{text}");
    }
    Ok(0)
}
