//! Tokenizer and recursive-descent parser for the `.frl` format.
//!
//! The format is line-oriented in spirit — `#` starts a comment that runs to
//! the end of the line, and `object` declarations keep their labels on one
//! line — but between tokens whitespace and newlines are otherwise free.

use std::collections::{BTreeMap, BTreeSet};

use frl_core::finrel::{FinRel, FinSet, Obj, Polarity};
use frl_core::frob2::{Frob2, Groupoid};
use frl_core::frob3::{Connector, Frob3};

use crate::doc::{Decl, DeclBody, DocError, FrlDocument};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Arrow,
    Star,
    Prime,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Star => "`*`".into(),
            Tok::Prime => "`'`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> DocError {
    DocError::Syntax { line, col, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<Token>, DocError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while chars.peek().is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_') {
                    s.push(bump(&mut chars));
                }
                tokens.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while chars.peek().is_some_and(|&c| c.is_ascii_digit()) {
                    s.push(bump(&mut chars));
                }
                let n = s
                    .parse::<usize>()
                    .map_err(|_| syntax(tl, tc, format!("number `{s}` is out of range")))?;
                tokens.push(Token { tok: Tok::Num(n), line: tl, col: tc });
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    tokens.push(Token { tok: Tok::Arrow, line: tl, col: tc });
                } else {
                    return Err(syntax(tl, tc, "expected `->`"));
                }
            }
            _ => {
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '*' => Tok::Star,
                    '\'' => Tok::Prime,
                    other => return Err(syntax(tl, tc, format!("unexpected character `{other}`"))),
                };
                bump(&mut chars);
                tokens.push(Token { tok, line: tl, col: tc });
            }
        }
    }
    Ok(tokens)
}

pub fn parse_document(text: &str) -> Result<FrlDocument, DocError> {
    let tokens = tokenize(text)?;
    let end = tokens.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
    let mut parser = Parser {
        tokens,
        i: 0,
        end,
        objects: BTreeMap::new(),
        names: BTreeSet::new(),
        decls: Vec::new(),
    };
    parser.document()?;
    Ok(FrlDocument { decls: parser.decls })
}

struct Parser {
    tokens: Vec<Token>,
    i: usize,
    /// Position just past the last token, for end-of-input errors.
    end: (usize, usize),
    /// Declared objects: name → size.
    objects: BTreeMap<String, usize>,
    /// All declared names, across every kind.
    names: BTreeSet<String>,
    decls: Vec<Decl>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.i)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn next(&mut self, what: &str) -> Result<Token, DocError> {
        let (line, col) = self.end;
        match self.tokens.get(self.i) {
            Some(t) => {
                self.i += 1;
                Ok(t.clone())
            }
            None => Err(syntax(line, col, format!("expected {what}, found end of input"))),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, DocError> {
        let t = self.next(&tok.describe())?;
        if t.tok == tok {
            Ok(t)
        } else {
            Err(syntax(t.line, t.col, format!("expected {}, found {}", tok.describe(), t.tok.describe())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), DocError> {
        let t = self.next(what)?;
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => Err(syntax(t.line, t.col, format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Token, DocError> {
        let (s, t) = self.ident(&format!("`{kw}`"))?;
        if s == kw {
            Ok(t)
        } else {
            Err(syntax(t.line, t.col, format!("expected `{kw}`, found `{s}`")))
        }
    }

    fn num(&mut self, what: &str) -> Result<(usize, Token), DocError> {
        let t = self.next(what)?;
        match t.tok {
            Tok::Num(n) => Ok((n, t.clone())),
            ref other => Err(syntax(t.line, t.col, format!("expected {what}, found {}", other.describe()))),
        }
    }

    /// A number that must index into a carrier of the given size.
    fn index(&mut self, what: &str, size: usize) -> Result<usize, DocError> {
        let (n, t) = self.num(what)?;
        if n < size {
            Ok(n)
        } else {
            Err(DocError::Shape {
                line: t.line,
                message: format!("{what} {n} is out of range for a carrier of size {size}"),
            })
        }
    }

    fn document(&mut self) -> Result<(), DocError> {
        while self.peek().is_some() {
            let (kw, t) = self.ident("a declaration keyword")?;
            match kw.as_str() {
                "object" => self.object_decl()?,
                "rel" => self.rel_decl()?,
                "frob2" => self.frob2_decl()?,
                "frob3" => self.frob3_decl()?,
                "connector" => self.connector_decl()?,
                "groupoid" => self.groupoid_decl()?,
                other => {
                    return Err(syntax(
                        t.line,
                        t.col,
                        format!("expected a declaration keyword (object, rel, frob2, frob3, connector, groupoid), found `{other}`"),
                    ))
                }
            }
        }
        Ok(())
    }

    fn declare(&mut self, name: String, line: usize, body: DeclBody) -> Result<(), DocError> {
        if !self.names.insert(name.clone()) {
            return Err(DocError::Duplicate { name, line });
        }
        if let DeclBody::Object { size, .. } = body {
            self.objects.insert(name.clone(), size);
        }
        self.decls.push(Decl { name, body });
        Ok(())
    }

    fn resolve(&self, name: &str, token: &Token) -> Result<FinSet, DocError> {
        match self.objects.get(name) {
            Some(&size) => Ok(FinSet::new(name, size)),
            None => Err(DocError::Unresolved { name: name.into(), line: token.line }),
        }
    }

    fn object_decl(&mut self) -> Result<(), DocError> {
        let (name, nt) = self.ident("an object name")?;
        let (size, _) = self.num("the object size")?;
        // Labels are cosmetic and stay on the declaration line.
        let mut labels = Vec::new();
        while let Some(t) = self.peek() {
            if t.line != nt.line {
                break;
            }
            match &t.tok {
                Tok::Ident(s) => {
                    labels.push(s.clone());
                    self.i += 1;
                }
                _ => break,
            }
        }
        self.declare(name, nt.line, DeclBody::Object { size, labels })
    }

    /// One side of a relation type: `I` or a `*`-separated list of atoms,
    /// where `NAME` is the object and `NAME'` its dual.
    fn side(&mut self) -> Result<Obj, DocError> {
        let (first, ft) = self.ident("an object reference")?;
        if first == "I" && !self.objects.contains_key("I") {
            return Ok(Obj::one());
        }
        let mut obj = self.atom(&first, &ft)?;
        while self.peek().map(|t| &t.tok) == Some(&Tok::Star) {
            self.i += 1;
            let (name, t) = self.ident("an object reference")?;
            obj = obj.tensor(&self.atom(&name, &t)?);
        }
        Ok(obj)
    }

    fn atom(&mut self, name: &str, token: &Token) -> Result<Obj, DocError> {
        let set = self.resolve(name, token)?;
        let pol = if self.peek().map(|t| &t.tok) == Some(&Tok::Prime) {
            self.i += 1;
            Polarity::Neg
        } else {
            Polarity::Pos
        };
        Ok(Obj::atom(set, pol))
    }

    /// One component of a relation entry, at the arity of the given side:
    /// a bare index, a tuple `(i, j, ...)`, or `()` for the unit.
    fn component(&mut self, obj: &Obj) -> Result<usize, DocError> {
        let arity = obj.factors.len();
        if arity == 1 {
            return self.index("index", obj.factors[0].0.size);
        }
        self.expect(Tok::LParen)?;
        let mut tuple = Vec::with_capacity(arity);
        for (k, (set, _)) in obj.factors.iter().enumerate() {
            if k > 0 {
                self.expect(Tok::Comma)?;
            }
            tuple.push(self.index("tuple entry", set.size)?);
        }
        self.expect(Tok::RParen)?;
        Ok(obj.encode(&tuple))
    }

    fn rel_decl(&mut self) -> Result<(), DocError> {
        let (name, nt) = self.ident("a relation name")?;
        self.expect(Tok::Colon)?;
        let src = self.side()?;
        self.expect(Tok::Arrow)?;
        let dst = self.side()?;
        self.expect(Tok::LBrace)?;
        let mut rel = FinRel::zero(src.clone(), dst.clone());
        let mut seen = BTreeSet::new();
        while self.peek().map(|t| &t.tok) != Some(&Tok::RBrace) {
            let (line, _) = self.here();
            self.expect(Tok::LParen)?;
            let a = self.component(&src)?;
            self.expect(Tok::Comma)?;
            let b = self.component(&dst)?;
            self.expect(Tok::RParen)?;
            if !seen.insert((a, b)) {
                return Err(DocError::Shape { line, message: format!("duplicate pair in `{name}`") });
            }
            rel.set(a, b, true);
        }
        self.expect(Tok::RBrace)?;
        self.declare(name, nt.line, DeclBody::Rel(rel))
    }

    fn carrier(&mut self) -> Result<FinSet, DocError> {
        self.keyword("carrier")?;
        let (name, t) = self.ident("an object reference")?;
        self.resolve(&name, &t)
    }

    /// `{ i j k ... }` — a set of indices below `size`.
    fn index_set(&mut self, what: &str, size: usize) -> Result<Vec<usize>, DocError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        while self.peek().map(|t| &t.tok) != Some(&Tok::RBrace) {
            let (line, _) = self.here();
            let v = self.index(what, size)?;
            if !seen.insert(v) {
                return Err(DocError::Shape { line, message: format!("duplicate {what} {v}") });
            }
            out.push(v);
        }
        self.expect(Tok::RBrace)?;
        Ok(out)
    }

    /// `( i, j, ... )` with a fixed arity, all indices below `size`.
    fn key(&mut self, arity: usize, size: usize) -> Result<Vec<usize>, DocError> {
        self.expect(Tok::LParen)?;
        let mut out = Vec::with_capacity(arity);
        for k in 0..arity {
            if k > 0 {
                self.expect(Tok::Comma)?;
            }
            out.push(self.index("index", size)?);
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn frob2_decl(&mut self) -> Result<(), DocError> {
        let (name, nt) = self.ident("a structure name")?;
        self.expect(Tok::LBrace)?;
        let carrier = self.carrier()?;
        let n = carrier.size;
        self.keyword("unit")?;
        let unit = self.index_set("unit element", n)?;
        self.keyword("mult")?;
        self.expect(Tok::LBrace)?;
        let mut f = Frob2::new_empty(carrier);
        for u in unit {
            f.set_unit(u, true);
        }
        let mut seen = BTreeSet::new();
        while self.peek().map(|t| &t.tok) != Some(&Tok::RBrace) {
            let (line, _) = self.here();
            let k = self.key(2, n)?;
            if !seen.insert(k.clone()) {
                return Err(DocError::Shape {
                    line,
                    message: format!("duplicate mult entry ({}, {}) in `{name}`", k[0], k[1]),
                });
            }
            self.expect(Tok::Arrow)?;
            for c in self.index_set("result", n)? {
                f.set_m(k[0], k[1], c, true);
            }
        }
        self.expect(Tok::RBrace)?;
        self.expect(Tok::RBrace)?;
        self.declare(name, nt.line, DeclBody::Frob2(f))
    }

    fn frob3_decl(&mut self) -> Result<(), DocError> {
        let (name, nt) = self.ident("a structure name")?;
        self.expect(Tok::LBrace)?;
        let carrier = self.carrier()?;
        let n = carrier.size;
        self.keyword("lambda")?;
        self.expect(Tok::LBrace)?;
        let mut t = Frob3::new_empty(carrier);
        let mut seen = BTreeSet::new();
        while self.peek().map(|t| &t.tok) != Some(&Tok::RBrace) {
            let (line, _) = self.here();
            let k = self.key(3, n)?;
            if !seen.insert(k.clone()) {
                return Err(DocError::Shape {
                    line,
                    message: format!("duplicate lambda entry ({}, {}, {}) in `{name}`", k[0], k[1], k[2]),
                });
            }
            self.expect(Tok::Arrow)?;
            for u in self.index_set("result", n)? {
                t.set_lam(k[0], k[1], k[2], u, true);
            }
        }
        self.expect(Tok::RBrace)?;
        self.expect(Tok::RBrace)?;
        self.declare(name, nt.line, DeclBody::Frob3(t))
    }

    /// `releq LABEL { (i,j) ... }` with a fixed expected label.
    fn releq(&mut self, label: &str, carrier: &FinSet) -> Result<FinRel, DocError> {
        self.keyword("releq")?;
        let (got, t) = self.ident("a relation label")?;
        if got != label {
            return Err(syntax(
                t.line,
                t.col,
                format!("expected the releq blocks in order `R` then `S`, found `{got}`"),
            ));
        }
        self.expect(Tok::LBrace)?;
        let obj = Obj::plain(carrier.clone());
        let mut rel = FinRel::zero(obj.clone(), obj);
        let mut seen = BTreeSet::new();
        while self.peek().map(|t| &t.tok) != Some(&Tok::RBrace) {
            let (line, _) = self.here();
            let k = self.key(2, carrier.size)?;
            if !seen.insert(k.clone()) {
                return Err(DocError::Shape {
                    line,
                    message: format!("duplicate pair ({}, {}) in releq {label}", k[0], k[1]),
                });
            }
            rel.set(k[0], k[1], true);
        }
        self.expect(Tok::RBrace)?;
        Ok(rel)
    }

    fn connector_decl(&mut self) -> Result<(), DocError> {
        let (name, nt) = self.ident("a structure name")?;
        self.expect(Tok::LBrace)?;
        let carrier = self.carrier()?;
        let n = carrier.size;
        let r_eq = self.releq("R", &carrier)?;
        let s_eq = self.releq("S", &carrier)?;
        self.keyword("p")?;
        self.expect(Tok::LBrace)?;
        let mut c = Connector::new(carrier, r_eq, s_eq);
        let mut seen = BTreeSet::new();
        while self.peek().map(|t| &t.tok) != Some(&Tok::RBrace) {
            let (line, _) = self.here();
            let k = self.key(3, n)?;
            if !seen.insert(k.clone()) {
                return Err(DocError::Shape {
                    line,
                    message: format!("duplicate p entry ({}, {}, {}) in `{name}`", k[0], k[1], k[2]),
                });
            }
            self.expect(Tok::Arrow)?;
            let w = self.index("result", n)?;
            if !c.in_domain(k[0], k[1], k[2]) {
                return Err(DocError::Shape {
                    line,
                    message: format!(
                        "p is defined at ({}, {}, {}) but that triple is outside the R×S domain",
                        k[0], k[1], k[2]
                    ),
                });
            }
            c.set_p(k[0], k[1], k[2], Some(w));
        }
        self.expect(Tok::RBrace)?;
        self.expect(Tok::RBrace)?;
        self.declare(name, nt.line, DeclBody::Connector(c))
    }

    /// `kw v0 v1 ... v{count-1}` — a fixed-length list of indices.
    fn num_list(&mut self, kw: &str, count: usize, bound: usize) -> Result<Vec<usize>, DocError> {
        self.keyword(kw)?;
        (0..count).map(|_| self.index(kw, bound)).collect()
    }

    fn groupoid_decl(&mut self) -> Result<(), DocError> {
        let (name, nt) = self.ident("a structure name")?;
        self.expect(Tok::LBrace)?;
        self.keyword("objects")?;
        let (k, _) = self.num("the object count")?;
        self.keyword("morphisms")?;
        let (n, _) = self.num("the morphism count")?;
        let source = self.num_list("source", n, k)?;
        let target = self.num_list("target", n, k)?;
        let unit = self.num_list("unit", k, n)?;
        let inverse = self.num_list("inverse", n, n)?;
        self.keyword("compose")?;
        self.expect(Tok::LBrace)?;
        let mut compose = vec![None; n * n];
        while self.peek().map(|t| &t.tok) != Some(&Tok::RBrace) {
            let (line, _) = self.here();
            let key = self.key(2, n)?;
            self.expect(Tok::Arrow)?;
            let c = self.index("result", n)?;
            let slot = &mut compose[key[0] * n + key[1]];
            if slot.is_some() {
                return Err(DocError::Shape {
                    line,
                    message: format!("duplicate compose entry ({}, {}) in `{name}`", key[0], key[1]),
                });
            }
            *slot = Some(c);
        }
        self.expect(Tok::RBrace)?;
        self.expect(Tok::RBrace)?;
        let g = Groupoid {
            objects: FinSet::new(format!("Ob({name})"), k),
            morphisms: FinSet::new(name.clone(), n),
            source,
            target,
            unit,
            inverse,
            compose,
        };
        self.declare(name, nt.line, DeclBody::Groupoid(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> FrlDocument {
        parse_document(text).expect("test document parses")
    }

    #[test]
    fn objects_with_labels() {
        let doc = parse("object A 2 zero one\nobject B 3\n");
        assert_eq!(doc.decls.len(), 2);
        match &doc.decls[0].body {
            DeclBody::Object { size, labels } => {
                assert_eq!(*size, 2);
                assert_eq!(labels, &["zero", "one"]);
            }
            other => panic!("expected an object, got {}", other.kind()),
        }
    }

    #[test]
    #[allow(clippy::identity_op)] // spelled-out mixed-radix arithmetic
    fn rel_with_tensor_side() {
        let doc = parse("object A 2\nobject B 3\nrel f : A * B' -> I { ((1, 2), ()) }\n");
        let DeclBody::Rel(r) = &doc.decls[2].body else { panic!("expected a rel") };
        assert_eq!(r.src.factors.len(), 2);
        assert_eq!(r.src.factors[1].1, Polarity::Neg);
        assert_eq!(r.dst.factors.len(), 0);
        assert_eq!(r.pairs(), vec![(1 * 3 + 2, 0)]);
    }

    #[test]
    fn comments_and_whitespace_are_free() {
        let doc = parse("# heading\nobject A 2\nfrob2 z2 { # inline\n  carrier A\n  unit { 0 }\n  mult { (0, 0) -> { 0 } (0, 1) -> { 1 } (1, 0) -> { 1 } (1, 1) -> { 0 } }\n}\n");
        let DeclBody::Frob2(f) = &doc.decls[1].body else { panic!("expected a frob2") };
        assert!(f.m(1, 1, 0) && !f.m(1, 1, 1));
        assert_eq!(f.unit_elems(), vec![0]);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_document("object A\n").unwrap_err();
        match err {
            DocError::Syntax { line, col, .. } => {
                assert_eq!(line, 1);
                assert!(col >= 9, "column {col} points past `object A`");
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }

        let err = parse_document("object A 2\nobject A 3\n").unwrap_err();
        assert!(matches!(err, DocError::Duplicate { ref name, line: 2 } if name == "A"));

        let err = parse_document("frob2 f { carrier A unit { } mult { } }").unwrap_err();
        assert!(matches!(err, DocError::Unresolved { ref name, .. } if name == "A"));

        let err = parse_document("object A 2\nrel r : A -> A { (0, 2) }\n").unwrap_err();
        assert!(matches!(err, DocError::Shape { line: 2, .. }), "got {err:?}");
    }

    #[test]
    fn connector_domain_is_enforced() {
        let text = "object A 2\nconnector c {\n  carrier A\n  releq R { (0, 0) (1, 1) }\n  releq S { (0, 0) (1, 1) }\n  p { (0, 1, 1) -> 0 }\n}\n";
        let err = parse_document(text).unwrap_err();
        assert!(matches!(err, DocError::Shape { line: 6, .. }), "got {err:?}");
    }

    #[test]
    fn groupoid_roundtrips_through_core_types() {
        let text = "groupoid z2 {\n  objects 1\n  morphisms 2\n  source 0 0\n  target 0 0\n  unit 0\n  inverse 0 1\n  compose { (0, 0) -> 0 (0, 1) -> 1 (1, 0) -> 1 (1, 1) -> 0 }\n}\n";
        let doc = parse(text);
        let DeclBody::Groupoid(g) = &doc.decls[0].body else { panic!("expected a groupoid") };
        frl_core::frob2::check_groupoid(g).expect("parsed groupoid is well-formed");
        assert_eq!(g.comp(1, 1), Some(0));
    }
}
