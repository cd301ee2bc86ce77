//! A small term language for wire diagrams over a single ternary structure.
//!
//! Terms are built from the generators `mu3`, `comu3`, the four bent wires
//! `cup`, `cupx`, `cap`, `capx`, the identities `id+`, `id-`, and (in
//! commutative mode only) `swap(p,q)`. Composite terms are formed with `;`
//! (sequential composition, left side first) and `*` (tensor). `;` binds
//! looser than `*`, so `a * b ; c` reads as `(a * b) ; c`.
//!
//! Every term has a boundary type: a word of polarities for its inputs and
//! one for its outputs, where `+` is the carrier and `-` its dual. Terms
//! evaluate compositionally to [`FinRel`]s against a chosen [`Frob3`]:
//! `mu3` becomes the ternary relation read as `A ⊗ A* ⊗ A ⇸ A`, `comu3` its
//! converse, and the bent wires the corresponding unit/counit relations.
//!
//! [`normalize`] rewrites a connected term into spider normal form: a single
//! generalized vertex with two loop counts, reached by fusing vertices along
//! internal wires and absorbing self-loops. The result is a descriptor that
//! [`spider_term`] turns back into a canonical term, equal to the original
//! (after bending at most one input and one output end) on every structure
//! satisfying the sliding axioms.

mod graph;
mod normalize;
mod parse;

pub use graph::{Anchor, NodeKind, OpenGraph, to_graph};
pub use normalize::{BendEnd, NormalForm, apply_bends, normalize};

use crate::finrel::{FinRel, FinSet, Obj, Polarity};
use crate::frob3::Frob3;
use thiserror::Error;

/// Errors raised while parsing, typing, evaluating, or normalizing terms.
#[derive(Debug, Error)]
pub enum DiagramError {
    /// The input text is not a well-formed term.
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    /// Sequential composition of terms whose boundary words do not match.
    #[error("type error: {message}")]
    Type { message: String },
    /// A term containing `swap` was evaluated against a structure that does
    /// not satisfy the commutativity axiom.
    #[error("term uses swap but the structure is not commutative")]
    NotCommutative,
    /// `swap` appeared in a term handled in planar (non-commutative) mode.
    #[error("swap is only admitted in commutative mode")]
    SwapInPlanarMode,
    /// Normalization requires a connected diagram.
    #[error("diagram is not connected ({components} components)")]
    Disconnected { components: usize },
    /// A closed diagram (empty boundary) was normalized in planar mode.
    #[error("closed diagrams have no planar normal form; use commutative mode")]
    ClosedDiagram,
    /// Internal consistency failure during normalization.
    #[error("normalization failed: {0}")]
    NotNormalizable(String),
}

/// Atomic generator of the diagram language.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Ternary multiplication `A ⊗ A* ⊗ A ⇸ A`.
    Mu3,
    /// Converse of `mu3`, `A ⇸ A ⊗ A* ⊗ A`.
    Comu3,
    /// Bent wire `I ⇸ A* ⊗ A`.
    Cup,
    /// Bent wire `I ⇸ A ⊗ A*`.
    CupX,
    /// Bent wire `A ⊗ A* ⇸ I`.
    Cap,
    /// Bent wire `A* ⊗ A ⇸ I`.
    CapX,
    /// Identity on `A`.
    IdPos,
    /// Identity on `A*`.
    IdNeg,
    /// Wire crossing; only meaningful for commutative structures.
    Swap(Polarity, Polarity),
}

/// A diagram term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Gen(Generator),
    /// `Seq(f, g)` runs `f` first, then `g`.
    Seq(Box<Term>, Box<Term>),
    Tensor(Box<Term>, Box<Term>),
}

/// Handling mode for normalization: planar diagrams or diagrams up to
/// crossings over a commutative structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Planar,
    Commutative,
}

/// A boundary word: the polarities of the wires crossing one side of a term.
pub type Word = Vec<Polarity>;

impl Term {
    /// Parse a term from its textual form.
    pub fn parse(input: &str) -> Result<Term, DiagramError> {
        parse::parse(input)
    }

    /// Sequential composition, `self` first.
    pub fn then(self, next: Term) -> Term {
        Term::Seq(Box::new(self), Box::new(next))
    }

    /// Tensor with `right` placed to the right of `self`.
    pub fn beside(self, right: Term) -> Term {
        Term::Tensor(Box::new(self), Box::new(right))
    }

    /// Does the term mention `swap` anywhere?
    pub fn contains_swap(&self) -> bool {
        match self {
            Term::Gen(g) => matches!(g, Generator::Swap(_, _)),
            Term::Seq(l, r) | Term::Tensor(l, r) => l.contains_swap() || r.contains_swap(),
        }
    }
}

fn word_string(w: &[Polarity]) -> String {
    if w.is_empty() {
        return "()".to_string();
    }
    let mut s = String::new();
    for (i, p) in w.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push(p.symbol());
    }
    s
}

impl Generator {
    fn boundary(self) -> (Word, Word) {
        use Polarity::{Neg, Pos};
        match self {
            Generator::Mu3 => (vec![Pos, Neg, Pos], vec![Pos]),
            Generator::Comu3 => (vec![Pos], vec![Pos, Neg, Pos]),
            Generator::Cup => (vec![], vec![Neg, Pos]),
            Generator::CupX => (vec![], vec![Pos, Neg]),
            Generator::Cap => (vec![Pos, Neg], vec![]),
            Generator::CapX => (vec![Neg, Pos], vec![]),
            Generator::IdPos => (vec![Pos], vec![Pos]),
            Generator::IdNeg => (vec![Neg], vec![Neg]),
            Generator::Swap(p, q) => (vec![p, q], vec![q, p]),
        }
    }
}

/// Compute the input and output boundary words of a term, failing with a
/// type error when a sequential composite does not line up.
pub fn boundary(term: &Term) -> Result<(Word, Word), DiagramError> {
    match term {
        Term::Gen(g) => Ok(g.boundary()),
        Term::Seq(l, r) => {
            let (li, lo) = boundary(l)?;
            let (ri, ro) = boundary(r)?;
            if lo != ri {
                return Err(DiagramError::Type {
                    message: format!(
                        "cannot compose: left side produces {} but right side expects {}",
                        word_string(&lo),
                        word_string(&ri)
                    ),
                });
            }
            Ok((li, ro))
        }
        Term::Tensor(l, r) => {
            let (mut li, mut lo) = boundary(l)?;
            let (ri, ro) = boundary(r)?;
            li.extend(ri);
            lo.extend(ro);
            Ok((li, lo))
        }
    }
}

fn atom(t: &Frob3, p: Polarity) -> Obj {
    let fs = FinSet::new(&t.carrier.name, t.carrier.size);
    Obj::atom(fs, p)
}

fn eval_gen(g: Generator, t: &Frob3) -> FinRel {
    let fs = FinSet::new(&t.carrier.name, t.carrier.size);
    match g {
        Generator::Mu3 => t.lambda_rel(),
        Generator::Comu3 => t.lambda_rel().dagger(),
        Generator::Cup => FinRel::cup(&fs),
        Generator::CupX => FinRel::cup_swapped(&fs),
        Generator::Cap => FinRel::cap(&fs),
        Generator::CapX => FinRel::cap_swapped(&fs),
        Generator::IdPos => FinRel::identity(atom(t, Polarity::Pos)),
        Generator::IdNeg => FinRel::identity(atom(t, Polarity::Neg)),
        Generator::Swap(p, q) => FinRel::swap((fs.clone(), p), (fs, q)),
    }
}

/// Evaluate a term against a structure. The term must typecheck; if it
/// mentions `swap`, the structure must be commutative.
pub fn eval(term: &Term, t: &Frob3) -> Result<FinRel, DiagramError> {
    boundary(term)?;
    if term.contains_swap() && !t.is_commutative() {
        return Err(DiagramError::NotCommutative);
    }
    Ok(eval_unchecked(term, t))
}

fn eval_unchecked(term: &Term, t: &Frob3) -> FinRel {
    match term {
        Term::Gen(g) => eval_gen(*g, t),
        Term::Seq(l, r) => {
            let lr = eval_unchecked(l, t);
            let rr = eval_unchecked(r, t);
            lr.compose(&rr).expect("typechecked composite")
        }
        Term::Tensor(l, r) => eval_unchecked(l, t).tensor(&eval_unchecked(r, t)),
    }
}

fn gen(g: Generator) -> Term {
    Term::Gen(g)
}

/// The left loop `(cupx * id+) ; mu3 : A ⇸ A`, evaluating to
/// `{(z, u) | ∃a Λ(a, a, z, u)}`.
pub fn ll_term() -> Term {
    gen(Generator::CupX)
        .beside(gen(Generator::IdPos))
        .then(gen(Generator::Mu3))
}

/// The right loop `(id+ * cup) ; mu3 : A ⇸ A`, evaluating to
/// `{(x, u) | ∃a Λ(x, a, a, u)}`.
pub fn rl_term() -> Term {
    gen(Generator::IdPos)
        .beside(gen(Generator::Cup))
        .then(gen(Generator::Mu3))
}

/// Identity term on a nonempty word, or `None` for the empty word.
fn id_word(w: &[Polarity]) -> Option<Term> {
    let mut out: Option<Term> = None;
    for &p in w {
        let id = match p {
            Polarity::Pos => gen(Generator::IdPos),
            Polarity::Neg => gen(Generator::IdNeg),
        };
        out = Some(match out {
            None => id,
            Some(t) => t.beside(id),
        });
    }
    out
}

fn is_alternating(w: &[Polarity]) -> bool {
    w.len() % 2 == 1
        && w.iter().enumerate().all(|(i, &p)| {
            p == if i % 2 == 0 {
                Polarity::Pos
            } else {
                Polarity::Neg
            }
        })
}

/// Build the canonical spider term with `m` left loops and `n` right loops
/// and the given boundary words. Both words must be alternating of odd
/// length, `+ - + ... +`; pass empty words for the closed spider (which is
/// only meaningful in commutative mode, with `n = 0`).
pub fn spider_term(
    m: usize,
    n: usize,
    in_word: &[Polarity],
    out_word: &[Polarity],
) -> Result<Term, DiagramError> {
    if in_word.is_empty() != out_word.is_empty() {
        return Err(DiagramError::NotNormalizable(
            "spider boundary words must be both empty or both alternating".into(),
        ));
    }
    if in_word.is_empty() {
        // Closed spider: a loop threaded through `m` left loops.
        let mut middle = id_word(&[Polarity::Pos]).unwrap();
        for _ in 0..m + n {
            middle = middle.then(ll_term());
        }
        return Ok(gen(Generator::CupX)
            .then(middle.beside(gen(Generator::IdNeg)))
            .then(gen(Generator::Cap)));
    }
    if !is_alternating(in_word) || !is_alternating(out_word) {
        return Err(DiagramError::NotNormalizable(format!(
            "spider boundary words must alternate + - + ... +, got {} and {}",
            word_string(in_word),
            word_string(out_word)
        )));
    }
    // Left-leaning multiplication comb folding the input word down to one wire.
    let mut t = gen(Generator::IdPos);
    for _ in 0..in_word.len() / 2 {
        t = t
            .beside(gen(Generator::IdNeg))
            .beside(gen(Generator::IdPos))
            .then(gen(Generator::Mu3));
    }
    for _ in 0..m {
        t = t.then(ll_term());
    }
    for _ in 0..n {
        t = t.then(rl_term());
    }
    // Comultiplication comb expanding back out to the output word.
    let mut out = gen(Generator::IdPos);
    for _ in 0..out_word.len() / 2 {
        out = gen(Generator::Comu3).then(
            out.beside(gen(Generator::IdNeg))
                .beside(gen(Generator::IdPos)),
        );
    }
    Ok(t.then(out))
}

/// Check that two terms have the same boundary and evaluate to the same
/// relation on every supplied structure. Returns the first structure index
/// where they differ, if any.
pub fn corollary_check(lhs: &Term, rhs: &Term, structures: &[Frob3]) -> Result<Option<usize>, DiagramError> {
    let lb = boundary(lhs)?;
    let rb = boundary(rhs)?;
    if lb != rb {
        return Err(DiagramError::Type {
            message: "corollary sides have different boundary types".into(),
        });
    }
    for (i, t) in structures.iter().enumerate() {
        if eval(lhs, t)? != eval(rhs, t)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frob3::tests_support::{s3_herd, tproj, zpara};

    fn p(s: &str) -> Term {
        Term::parse(s).expect("test term parses")
    }

    #[test]
    fn boundaries_of_generators() {
        use Polarity::{Neg, Pos};
        assert_eq!(
            boundary(&p("mu3")).unwrap(),
            (vec![Pos, Neg, Pos], vec![Pos])
        );
        assert_eq!(
            boundary(&p("comu3")).unwrap(),
            (vec![Pos], vec![Pos, Neg, Pos])
        );
        assert_eq!(boundary(&p("cup")).unwrap(), (vec![], vec![Neg, Pos]));
        assert_eq!(boundary(&p("swap(+,-)")).unwrap(), (vec![Pos, Neg], vec![Neg, Pos]));
        assert_eq!(
            boundary(&p("(mu3 * id-* id+) ; mu3")).unwrap(),
            (vec![Pos, Neg, Pos, Neg, Pos], vec![Pos])
        );
        assert!(boundary(&p("mu3 ; cap")).is_err());
    }

    #[test]
    fn parse_print_roundtrip() {
        for text in [
            "mu3",
            "id+ * id- * id+ ; mu3",
            "(comu3 * id- * id+) ; (id+ * id- * cap * id+) ; (id+ * capx)",
            "cup ; (id- * ((id+ * cup) ; mu3))",
            "swap(-,+) ; swap(+,-)",
            "cupx ; ((id+ ; id+) * id-) ; cap",
        ] {
            let t = p(text);
            let printed = t.to_string();
            assert_eq!(p(&printed), t, "reparse of {printed:?}");
        }
        // The printer inserts parentheses to preserve tree shape.
        let right_leaning = p("mu3").then(p("id+").then(p("id+")));
        assert_eq!(right_leaning.to_string(), "mu3 ; (id+ ; id+)");
        assert_eq!(p(&right_leaning.to_string()), right_leaning);
    }

    #[test]
    fn parse_errors() {
        assert!(Term::parse("").is_err());
        assert!(Term::parse("mu3 ;").is_err());
        assert!(Term::parse("(mu3").is_err());
        assert!(Term::parse("mu4").is_err());
        assert!(Term::parse("swap(+)").is_err());
        assert!(Term::parse("mu3 mu3").is_err());
    }

    #[test]
    fn eval_matches_hand_relations() {
        let t = zpara(3);
        let lam = t.lambda_rel();
        assert_eq!(eval(&p("mu3"), &t).unwrap(), lam);
        assert_eq!(eval(&p("comu3"), &t).unwrap(), lam.dagger());

        // Left loop: {(z, u) | ∃a Λ(a, a, z, u)}; for x - y + z this is total.
        let ll = eval(&ll_term(), &t).unwrap();
        for z in 0..3 {
            for u in 0..3 {
                let want = (0..3).any(|a| t.lam(a, a, z, u));
                assert_eq!(ll.get(z, u), want);
            }
        }

        // Snake built from the generators is the identity.
        let snake = p("(id+ * cup) ; (cap * id+)");
        let id = eval(&p("id+"), &t).unwrap();
        assert_eq!(eval(&snake, &t).unwrap(), id);
    }

    #[test]
    fn eval_swap_requires_commutativity() {
        let lhs = p("swap(+,-) ; capx");
        assert!(eval(&lhs, &zpara(2)).is_ok(), "x - y + z is commutative");
        let herd = s3_herd();
        assert!(!herd.is_commutative());
        assert!(matches!(
            eval(&lhs, &herd),
            Err(DiagramError::NotCommutative)
        ));
    }

    #[test]
    fn spider_term_shapes() {
        use Polarity::{Neg, Pos};
        let plus = [Pos];
        let three = [Pos, Neg, Pos];
        // (0,0) on single wires is the identity.
        let t = spider_term(0, 0, &plus, &plus).unwrap();
        let z3 = zpara(3);
        assert_eq!(eval(&t, &z3).unwrap(), eval(&p("id+"), &z3).unwrap());
        // (0,0) from three wires to one is mu3 itself.
        let t = spider_term(0, 0, &three, &plus).unwrap();
        assert_eq!(eval(&t, &z3).unwrap(), z3.lambda_rel());
        // Loop counts place loops between the combs.
        let t = spider_term(2, 1, &plus, &plus).unwrap();
        let direct = p("(cupx * id+) ; mu3 ; (cupx * id+) ; mu3 ; (id+ * cup) ; mu3");
        assert_eq!(eval(&t, &z3).unwrap(), eval(&direct, &z3).unwrap());
        // Bad words are rejected.
        assert!(spider_term(0, 0, &[Neg], &plus).is_err());
        assert!(spider_term(0, 0, &[Pos, Neg], &plus).is_err());
        assert!(spider_term(0, 0, &[], &plus).is_err());
    }

    #[test]
    fn closed_spider_term_is_a_trace() {
        let t = spider_term(2, 0, &[], &[]).unwrap();
        let (i, o) = boundary(&t).unwrap();
        assert!(i.is_empty() && o.is_empty());
        let z3 = zpara(3);
        // x - y + z: LL is total, so the trace is inhabited.
        let r = eval(&t, &z3).unwrap();
        assert_eq!(r.count_pairs(), 1);
    }

    #[test]
    fn corollary_check_reports_disagreement() {
        let z3 = zpara(3);
        let t2 = tproj(2);
        // Associativity holds for both.
        let lhs = p("(mu3 * id- * id+) ; mu3");
        let rhs = p("(id+ * id- * mu3) ; mu3");
        assert_eq!(corollary_check(&lhs, &rhs, &[z3.clone(), t2]).unwrap(), None);
        // A deliberately false equation is caught on the first structure.
        let lhs2 = p("id+ * id- * id+ ; mu3");
        let rhs2 = p("id+ * id- * id+ ; (id+ * capx) ; id+");
        assert_eq!(
            corollary_check(&lhs2, &rhs2, &[z3]).unwrap(),
            Some(0),
            "mu3 is not a projection for x - y + z"
        );
    }
}
