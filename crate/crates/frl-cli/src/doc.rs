//! The `.frl` document model: named declarations over a shared namespace,
//! loading with validation, and builders that turn library results back into
//! well-formed documents.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use frl_core::finrel::{FinRel, FinSet, Obj};
use frl_core::frob2::{Frob2, Groupoid};
use frl_core::frob3::{Connector, Frob3};

use crate::emit::emit_document;
use crate::parse::parse_document;

/// A parsed `.frl` file: declarations in file order, names unique across all
/// kinds, every reference resolved and every index validated.
#[derive(Debug)]
pub struct FrlDocument {
    pub decls: Vec<Decl>,
}

#[derive(Debug)]
pub struct Decl {
    pub name: String,
    pub body: DeclBody,
}

#[derive(Debug)]
pub enum DeclBody {
    Object { size: usize, labels: Vec<String> },
    Rel(FinRel),
    Frob2(Frob2),
    Frob3(Frob3),
    Connector(Connector),
    Groupoid(Groupoid),
}

impl DeclBody {
    pub fn kind(&self) -> &'static str {
        match self {
            DeclBody::Object { .. } => "object",
            DeclBody::Rel(_) => "rel",
            DeclBody::Frob2(_) => "frob2",
            DeclBody::Frob3(_) => "frob3",
            DeclBody::Connector(_) => "connector",
            DeclBody::Groupoid(_) => "groupoid",
        }
    }

    /// Structures a checker or converter can act on, as opposed to the plain
    /// data declarations (objects and relations).
    pub fn is_structure(&self) -> bool {
        !matches!(self, DeclBody::Object { .. } | DeclBody::Rel(_))
    }
}

impl FrlDocument {
    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name == name)
    }
}

/// Errors produced while loading a document, each carrying the line it was
/// found on.
#[derive(Debug)]
pub enum DocError {
    Syntax { line: usize, col: usize, message: String },
    Duplicate { name: String, line: usize },
    Unresolved { name: String, line: usize },
    Shape { message: String, line: usize },
}

impl DocError {
    pub fn kind(&self) -> &'static str {
        match self {
            DocError::Syntax { .. } => "syntax",
            DocError::Duplicate { .. } => "duplicate",
            DocError::Unresolved { .. } => "unresolved",
            DocError::Shape { .. } => "shape",
        }
    }

    pub fn position(&self) -> (usize, Option<usize>) {
        match self {
            DocError::Syntax { line, col, .. } => (*line, Some(*col)),
            DocError::Duplicate { line, .. }
            | DocError::Unresolved { line, .. }
            | DocError::Shape { line, .. } => (*line, None),
        }
    }
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocError::Syntax { line, col, message } => write!(f, "{line}:{col}: {message}"),
            DocError::Duplicate { name, line } => {
                write!(f, "line {line}: duplicate declaration `{name}`")
            }
            DocError::Unresolved { name, line } => {
                write!(f, "line {line}: unresolved name `{name}` (objects must be declared before use)")
            }
            DocError::Shape { message, line } => write!(f, "line {line}: {message}"),
        }
    }
}

pub enum LoadError {
    Io(std::io::Error),
    Doc(DocError),
}

pub fn load(path: &Path) -> Result<FrlDocument, LoadError> {
    let text = fs::read_to_string(path).map_err(LoadError::Io)?;
    parse_document(&text).map_err(LoadError::Doc)
}

pub fn save(doc: &FrlDocument, path: &Path) -> std::io::Result<()> {
    fs::write(path, emit_document(doc))
}

/// How a command picked (or failed to pick) its target declaration.
pub enum SelectError {
    NotFound(String),
    WrongKind { name: String, kind: &'static str, wanted: String },
    NoneOfKind(String),
    Ambiguous { wanted: String, candidates: Vec<String> },
}

impl fmt::Display for SelectError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectError::NotFound(name) => write!(f, "no declaration named `{name}`"),
            SelectError::WrongKind { name, kind, wanted } => {
                write!(f, "`{name}` is a {kind}, but this command needs {wanted}")
            }
            SelectError::NoneOfKind(wanted) => {
                write!(f, "the file does not declare {wanted}")
            }
            SelectError::Ambiguous { wanted, candidates } => write!(
                f,
                "more than one declaration is {wanted}: {}; pick one with --name",
                candidates.join(", ")
            ),
        }
    }
}

/// Select the declaration a command acts on: by `--name` when given,
/// otherwise the sole declaration the predicate accepts.
pub fn select<'a>(
    doc: &'a FrlDocument,
    name: Option<&str>,
    wanted: &str,
    accepts: impl Fn(&DeclBody) -> bool,
) -> Result<&'a Decl, SelectError> {
    if let Some(name) = name {
        let decl = doc.get(name).ok_or_else(|| SelectError::NotFound(name.into()))?;
        if accepts(&decl.body) {
            Ok(decl)
        } else {
            Err(SelectError::WrongKind {
                name: name.into(),
                kind: decl.body.kind(),
                wanted: wanted.into(),
            })
        }
    } else {
        let mut hits = doc.decls.iter().filter(|d| accepts(&d.body));
        match (hits.next(), hits.next()) {
            (Some(d), None) => Ok(d),
            (None, _) => Err(SelectError::NoneOfKind(wanted.into())),
            (Some(a), Some(b)) => {
                let mut candidates = vec![a.name.clone(), b.name.clone()];
                candidates.extend(hits.map(|d| d.name.clone()));
                Err(SelectError::Ambiguous { wanted: wanted.into(), candidates })
            }
        }
    }
}

/// Turn an arbitrary string into a valid `.frl` identifier.
fn sanitize(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        if c.is_ascii_alphanumeric() || c == '_' {
            out.push(c);
        } else {
            out.push('_');
        }
    }
    if out.is_empty() || out.starts_with(|c: char| c.is_ascii_digit()) {
        out.insert(0, '_');
    }
    out
}

/// Assembles an output document from library values: allocates unique
/// declaration names, declares every carrier object before the structures
/// that reference it, and rewrites carrier names inside the structures so
/// the references resolve on reload.
#[derive(Default)]
pub struct DocBuilder {
    decls: Vec<Decl>,
    /// (original name, size) → declared object name.
    objects: BTreeMap<(String, usize), String>,
}

impl DocBuilder {
    pub fn new() -> DocBuilder {
        DocBuilder::default()
    }

    fn unique(&self, want: &str) -> String {
        let base = sanitize(want);
        let taken = |name: &str| self.decls.iter().any(|d| d.name == name);
        if !taken(&base) {
            return base;
        }
        (2..)
            .map(|k| format!("{base}_{k}"))
            .find(|c| !taken(c))
            .expect("an unused suffix exists")
    }

    /// Declare (or reuse) the object standing for a carrier set, returning
    /// the set renamed to its declared name.
    pub fn ensure_object(&mut self, set: &FinSet) -> FinSet {
        let key = (set.name.clone(), set.size);
        if let Some(name) = self.objects.get(&key) {
            return FinSet::new(name.clone(), set.size);
        }
        let name = self.unique(&set.name);
        self.objects.insert(key, name.clone());
        self.decls.push(Decl {
            name: name.clone(),
            body: DeclBody::Object { size: set.size, labels: Vec::new() },
        });
        FinSet::new(name, set.size)
    }

    fn rename_obj(&mut self, obj: &Obj) -> Obj {
        let mut out = Obj::one();
        for (set, pol) in &obj.factors {
            out = out.tensor(&Obj::atom(self.ensure_object(set), *pol));
        }
        out
    }

    pub fn push_rel(&mut self, want: &str, rel: &FinRel) -> String {
        let src = self.rename_obj(&rel.src);
        let dst = self.rename_obj(&rel.dst);
        let renamed = FinRel::from_pairs(src, dst, &rel.pairs());
        let name = self.unique(want);
        self.decls.push(Decl { name: name.clone(), body: DeclBody::Rel(renamed) });
        name
    }

    pub fn push_frob2(&mut self, want: &str, f: &Frob2) -> String {
        let mut f = f.clone();
        f.carrier = self.ensure_object(&f.carrier);
        let name = self.unique(want);
        self.decls.push(Decl { name: name.clone(), body: DeclBody::Frob2(f) });
        name
    }

    pub fn push_frob3(&mut self, want: &str, t: &Frob3) -> String {
        let mut t = t.clone();
        t.carrier = self.ensure_object(&t.carrier);
        let name = self.unique(want);
        self.decls.push(Decl { name: name.clone(), body: DeclBody::Frob3(t) });
        name
    }

    pub fn push_connector(&mut self, want: &str, c: &Connector) -> String {
        let mut c = c.clone();
        c.carrier = self.ensure_object(&c.carrier);
        let name = self.unique(want);
        self.decls.push(Decl { name: name.clone(), body: DeclBody::Connector(c) });
        name
    }

    pub fn push_groupoid(&mut self, want: &str, g: &Groupoid) -> String {
        let name = self.unique(want);
        self.decls.push(Decl { name: name.clone(), body: DeclBody::Groupoid(g.clone()) });
        name
    }

    pub fn push_body(&mut self, want: &str, body: &DeclBody) -> String {
        match body {
            DeclBody::Object { size, labels } => {
                let name = self.unique(want);
                self.decls.push(Decl {
                    name: name.clone(),
                    body: DeclBody::Object { size: *size, labels: labels.clone() },
                });
                name
            }
            DeclBody::Rel(r) => self.push_rel(want, r),
            DeclBody::Frob2(f) => self.push_frob2(want, f),
            DeclBody::Frob3(t) => self.push_frob3(want, t),
            DeclBody::Connector(c) => self.push_connector(want, c),
            DeclBody::Groupoid(g) => self.push_groupoid(want, g),
        }
    }

    pub fn finish(self) -> FrlDocument {
        FrlDocument { decls: self.decls }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use frl_core::search::{s3_herd, zmod_frob2, zmod_groupoid, zpara};

    /// Round-trip every declaration kind through emit → parse and compare
    /// the table contents.
    #[test]
    fn emit_parse_roundtrip() {
        let mut builder = DocBuilder::new();
        let f = zmod_frob2(3);
        builder.push_frob2("z3", &f);
        let t = zpara(3);
        builder.push_frob3("t3", &t);
        let c = frl_core::frob3::frob3_to_connector(&t).expect("parallelogram is normal");
        builder.push_connector("c3", &c);
        let g = zmod_groupoid(4);
        builder.push_groupoid("z4", &g);
        let kappa = frl_core::bridges::envelope(&zpara(2)).expect("preconditions hold").kappa;
        builder.push_rel("kappa", &kappa);
        let doc = builder.finish();

        let text = emit_document(&doc);
        let reparsed = parse_document(&text).expect("emitted documents parse");
        assert_eq!(reparsed.decls.len(), doc.decls.len());
        for (a, b) in doc.decls.iter().zip(&reparsed.decls) {
            assert_eq!(a.name, b.name);
            match (&a.body, &b.body) {
                (DeclBody::Object { size: x, .. }, DeclBody::Object { size: y, .. }) => {
                    assert_eq!(x, y)
                }
                (DeclBody::Rel(x), DeclBody::Rel(y)) => assert_eq!(x, y),
                (DeclBody::Frob2(x), DeclBody::Frob2(y)) => assert_eq!(x, y),
                (DeclBody::Frob3(x), DeclBody::Frob3(y)) => assert_eq!(x, y),
                (DeclBody::Connector(x), DeclBody::Connector(y)) => assert_eq!(x, y),
                (DeclBody::Groupoid(x), DeclBody::Groupoid(y)) => assert_eq!(x, y),
                (x, y) => panic!("kind changed across the roundtrip: {} vs {}", x.kind(), y.kind()),
            }
        }
    }

    /// Emitting is deterministic and reparsing the emission emits the same
    /// bytes — the stability contract behind `frl fmt`.
    #[test]
    fn emission_is_stable() {
        let mut builder = DocBuilder::new();
        builder.push_frob3("herd", &s3_herd());
        let doc = builder.finish();
        let once = emit_document(&doc);
        let twice = emit_document(&parse_document(&once).expect("emitted documents parse"));
        assert_eq!(once, twice);
    }

    #[test]
    fn builder_renames_hostile_carriers() {
        let mut builder = DocBuilder::new();
        let f = Frob2::from_op(FinSet::new("pants(L,R)", 2), |a, b| (a + b) % 2, &[0]);
        builder.push_frob2("p", &f);
        let doc = builder.finish();
        let text = emit_document(&doc);
        let reparsed = parse_document(&text).expect("sanitized names parse");
        assert_eq!(reparsed.decls[0].name, "pants_L_R_");
    }

    #[test]
    fn selection_rules() {
        let text = "object A 2\nfrob2 f {\n  carrier A\n  unit { 0 }\n  mult { }\n}\n\nfrob2 g {\n  carrier A\n  unit { }\n  mult { }\n}\n";
        let doc = parse_document(text).expect("test document parses");
        assert!(matches!(
            select(&doc, None, "a structure", DeclBody::is_structure),
            Err(SelectError::Ambiguous { .. })
        ));
        assert!(select(&doc, Some("g"), "a structure", DeclBody::is_structure).is_ok());
        assert!(matches!(
            select(&doc, Some("A"), "a structure", DeclBody::is_structure),
            Err(SelectError::WrongKind { .. })
        ));
        assert!(matches!(
            select(&doc, Some("zzz"), "a structure", DeclBody::is_structure),
            Err(SelectError::NotFound(_))
        ));
    }
}
