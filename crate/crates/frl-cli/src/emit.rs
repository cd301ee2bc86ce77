//! Canonical `.frl` serialization. The output is deterministic: entries are
//! listed in ascending index order, blocks use two-space indentation, and
//! declarations are separated by single blank lines — so re-emitting a
//! loaded document reproduces it byte for byte.

use std::fmt::Write;

use frl_core::finrel::{FinRel, Obj, Polarity};
use frl_core::frob2::{Frob2, Groupoid};
use frl_core::frob3::{Connector, Frob3};

use crate::doc::{DeclBody, FrlDocument};

pub fn emit_document(doc: &FrlDocument) -> String {
    let mut parts = Vec::with_capacity(doc.decls.len());
    for decl in &doc.decls {
        parts.push(match &decl.body {
            DeclBody::Object { size, labels } => emit_object(&decl.name, *size, labels),
            DeclBody::Rel(r) => emit_rel(&decl.name, r),
            DeclBody::Frob2(f) => emit_frob2(&decl.name, f),
            DeclBody::Frob3(t) => emit_frob3(&decl.name, t),
            DeclBody::Connector(c) => emit_connector(&decl.name, c),
            DeclBody::Groupoid(g) => emit_groupoid(&decl.name, g),
        });
    }
    parts.join("\n")
}

/// Prefix a document with `#` comment lines (metadata that does not survive
/// a reload, by design).
pub fn emit_with_header(doc: &FrlDocument, comments: &[String]) -> String {
    let mut out = String::new();
    for line in comments {
        writeln!(out, "# {line}").expect("string writes cannot fail");
    }
    if !comments.is_empty() {
        out.push('\n');
    }
    out.push_str(&emit_document(doc));
    out
}

fn emit_object(name: &str, size: usize, labels: &[String]) -> String {
    let mut line = format!("object {name} {size}");
    for label in labels {
        line.push(' ');
        line.push_str(label);
    }
    line.push('\n');
    line
}

fn side(obj: &Obj) -> String {
    if obj.factors.is_empty() {
        return "I".into();
    }
    obj.factors
        .iter()
        .map(|(set, pol)| match pol {
            Polarity::Pos => set.name.clone(),
            Polarity::Neg => format!("{}'", set.name),
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

/// Render one index of a tensor word: bare for a single factor, a tuple for
/// several, `()` for the unit.
pub(crate) fn component(obj: &Obj, index: usize) -> String {
    match obj.factors.len() {
        0 => "()".into(),
        1 => index.to_string(),
        _ => {
            let tuple = obj.decode(index);
            let inner = tuple.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
            format!("({inner})")
        }
    }
}

/// A braced block over the given lines: `{ }` when empty, otherwise one
/// entry per line at the given indentation depth.
fn block(lines: &[String], depth: usize) -> String {
    if lines.is_empty() {
        return "{ }".into();
    }
    let pad = "  ".repeat(depth + 1);
    let close = "  ".repeat(depth);
    let mut out = String::from("{\n");
    for line in lines {
        out.push_str(&pad);
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&close);
    out.push('}');
    out
}

fn emit_rel(name: &str, r: &FinRel) -> String {
    let lines: Vec<String> = r
        .pairs()
        .into_iter()
        .map(|(a, b)| format!("({}, {})", component(&r.src, a), component(&r.dst, b)))
        .collect();
    format!("rel {name} : {} -> {} {}\n", side(&r.src), side(&r.dst), block(&lines, 0))
}

fn index_set(values: impl Iterator<Item = usize>) -> String {
    let inner: Vec<String> = values.map(|v| v.to_string()).collect();
    if inner.is_empty() {
        "{ }".into()
    } else {
        format!("{{ {} }}", inner.join(" "))
    }
}

fn emit_frob2(name: &str, f: &Frob2) -> String {
    let n = f.size();
    let mut rows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let results: Vec<usize> = (0..n).filter(|&c| f.m(a, b, c)).collect();
            if !results.is_empty() {
                rows.push(format!("({a}, {b}) -> {}", index_set(results.into_iter())));
            }
        }
    }
    format!(
        "frob2 {name} {{\n  carrier {}\n  unit {}\n  mult {}\n}}\n",
        f.carrier.name,
        index_set(f.unit_elems().into_iter()),
        block(&rows, 1),
    )
}

fn emit_frob3(name: &str, t: &Frob3) -> String {
    let n = t.size();
    let mut rows = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let results: Vec<usize> = (0..n).filter(|&u| t.lam(x, y, z, u)).collect();
                if !results.is_empty() {
                    rows.push(format!("({x}, {y}, {z}) -> {}", index_set(results.into_iter())));
                }
            }
        }
    }
    format!(
        "frob3 {name} {{\n  carrier {}\n  lambda {}\n}}\n",
        t.carrier.name,
        block(&rows, 1),
    )
}

fn releq_block(r: &FinRel) -> String {
    let lines: Vec<String> =
        r.pairs().into_iter().map(|(a, b)| format!("({a}, {b})")).collect();
    block(&lines, 1)
}

fn emit_connector(name: &str, c: &Connector) -> String {
    let n = c.size();
    let mut rows = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if let Some(w) = c.p(x, y, z) {
                    rows.push(format!("({x}, {y}, {z}) -> {w}"));
                }
            }
        }
    }
    format!(
        "connector {name} {{\n  carrier {}\n  releq R {}\n  releq S {}\n  p {}\n}}\n",
        c.carrier.name,
        releq_block(&c.r_eq),
        releq_block(&c.s_eq),
        block(&rows, 1),
    )
}

/// Space-prefixed number list, so empty lists leave no trailing blank.
fn num_list(values: &[usize]) -> String {
    values.iter().map(|v| format!(" {v}")).collect()
}

fn emit_groupoid(name: &str, g: &Groupoid) -> String {
    let n = g.n_morphisms();
    let mut rows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if let Some(c) = g.comp(a, b) {
                rows.push(format!("({a}, {b}) -> {c}"));
            }
        }
    }
    format!(
        "groupoid {name} {{\n  objects {}\n  morphisms {}\n  source{}\n  target{}\n  unit{}\n  inverse{}\n  compose {}\n}}\n",
        g.n_objects(),
        n,
        num_list(&g.source),
        num_list(&g.target),
        num_list(&g.unit),
        num_list(&g.inverse),
        block(&rows, 1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_document;

    #[test]
    fn canonical_shapes() {
        let text = "object A 2\n\nrel r : A -> A * A' {\n  (0, (1, 0))\n}\n\nfrob2 f {\n  carrier A\n  unit { }\n  mult { }\n}\n";
        let doc = parse_document(text).expect("test document parses");
        assert_eq!(emit_document(&doc), text);
    }

    #[test]
    fn empty_source_lists_stay_parseable() {
        // A groupoid with zero morphisms over zero objects is degenerate but
        // shape-valid; the emitter must not produce dangling keywords that
        // the parser rejects.
        let text = "groupoid empty {\n  objects 0\n  morphisms 0\n  source\n  target\n  unit\n  inverse\n  compose { }\n}\n";
        let doc = parse_document(text).expect("degenerate groupoid parses");
        assert_eq!(emit_document(&doc), text);
    }
}
