//! Spider normal forms.
//!
//! A connected term reduces to a single generalized vertex — a spider —
//! decorated with two loop counts. The reduction works on a cyclic-leg
//! representation: every `mu3`/`comu3` occurrence starts as a four-legged
//! spider, internal wires between two spiders fuse them (splicing one leg
//! cycle into the other), and a wire between cyclically adjacent legs of the
//! same spider is absorbed into a loop count. For planar terms an innermost
//! self-wire is always adjacent, so the process runs to completion; in
//! commutative mode adjacency is not required and the two counts merge.
//!
//! The boundary of the reduced spider must read `+ - + ... +` on both sides;
//! where it does not, at most one input and one output wire is bent around
//! the side, preferring no bend, then a rightmost bend, then a leftmost one.

use super::graph::{to_graph, Anchor};
use super::{boundary, spider_term, DiagramError, Generator, Mode, NodeKind, Term, Word};
use crate::finrel::Polarity;

/// Which end of a boundary word a bend wraps around.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BendEnd {
    Leftmost,
    Rightmost,
}

/// The result of normalization: loop counts, the boundary words after
/// bending, and which bends were applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// Left loop count.
    pub m: usize,
    /// Right loop count. Always `0` in commutative mode, where the counts
    /// merge.
    pub n: usize,
    /// Input word after bending; empty for closed diagrams.
    pub in_word: Word,
    /// Output word after bending; empty for closed diagrams.
    pub out_word: Word,
    pub bend_in: Option<BendEnd>,
    pub bend_out: Option<BendEnd>,
    pub closed: bool,
}

impl NormalForm {
    /// The canonical term this normal form describes.
    pub fn spider(&self) -> Result<Term, DiagramError> {
        spider_term(self.m, self.n, &self.in_word, &self.out_word)
    }
}

/// Direction of the carrier flow at a spider leg: into the vertex or away
/// from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    E,
    L,
}

/// The far end of a leg's wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FarEnd {
    Leg(usize),
    Boundary(usize),
}

struct Reducer {
    /// Leg ids in cyclic (counterclockwise) order, per live spider.
    spiders: Vec<Option<Vec<usize>>>,
    counts: Vec<(usize, usize)>,
    leg_spider: Vec<usize>,
    leg_tok: Vec<Tok>,
    partner: Vec<FarEnd>,
}

impl Reducer {
    fn live(&self) -> impl Iterator<Item = (usize, &Vec<usize>)> {
        self.spiders
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|legs| (i, legs)))
    }

    fn find_adjacent_self_wire(&self) -> Option<(usize, usize)> {
        for (s, legs) in self.live() {
            for i in 0..legs.len() {
                let j = (i + 1) % legs.len();
                if i != j && self.partner[legs[i]] == FarEnd::Leg(legs[j]) {
                    return Some((s, i));
                }
            }
        }
        None
    }

    fn find_cross_wire(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (s, legs) in self.live() {
            for &leg in legs {
                if let FarEnd::Leg(other) = self.partner[leg] {
                    if self.leg_spider[other] != s && best.is_none_or(|b| leg < b) {
                        best = Some(leg);
                    }
                }
            }
        }
        best
    }

    fn find_any_self_wire(&self) -> Option<(usize, usize, usize)> {
        for (s, legs) in self.live() {
            for i in 0..legs.len() {
                for j in i + 1..legs.len() {
                    if self.partner[legs[i]] == FarEnd::Leg(legs[j]) {
                        return Some((s, i, j));
                    }
                }
            }
        }
        None
    }

    fn absorb_adjacent(&mut self, s: usize, i: usize) -> Result<(), DiagramError> {
        let legs = self.spiders[s].as_mut().expect("live spider");
        let j = (i + 1) % legs.len();
        let (la, lb) = (legs[i], legs[j]);
        match (self.leg_tok[la], self.leg_tok[lb]) {
            (Tok::E, Tok::L) => self.counts[s].0 += 1,
            (Tok::L, Tok::E) => self.counts[s].1 += 1,
            toks => {
                return Err(DiagramError::NotNormalizable(format!(
                    "self-wire between two {toks:?} legs"
                )))
            }
        }
        let (hi, lo) = (i.max(j), i.min(j));
        legs.remove(hi);
        legs.remove(lo);
        Ok(())
    }

    fn absorb_merged(&mut self, s: usize, i: usize, j: usize) {
        let legs = self.spiders[s].as_mut().expect("live spider");
        self.counts[s].0 += 1;
        legs.remove(j.max(i));
        legs.remove(j.min(i));
    }

    fn fuse(&mut self, la: usize) {
        let lb = match self.partner[la] {
            FarEnd::Leg(l) => l,
            FarEnd::Boundary(_) => unreachable!("fuse called on a boundary wire"),
        };
        let (sa, sb) = (self.leg_spider[la], self.leg_spider[lb]);
        let legs_a = self.spiders[sa].take().expect("live spider");
        let ia = legs_a.iter().position(|&l| l == la).expect("leg in its spider");
        // Cycle of `sa` minus the fused leg, starting just after it.
        let mut spliced: Vec<usize> = Vec::with_capacity(legs_a.len() - 1);
        for k in 1..legs_a.len() {
            spliced.push(legs_a[(ia + k) % legs_a.len()]);
        }
        for &l in &spliced {
            self.leg_spider[l] = sb;
        }
        let legs_b = self.spiders[sb].as_mut().expect("live spider");
        let ib = legs_b.iter().position(|&l| l == lb).expect("leg in its spider");
        legs_b.splice(ib..=ib, spliced);
        self.counts[sb].0 += self.counts[sa].0;
        self.counts[sb].1 += self.counts[sa].1;
    }
}

/// Cyclic boundary index: inputs left to right, then outputs right to left.
fn boundary_cycle_index(anchor: Anchor, n_in: usize, n_out: usize) -> usize {
    match anchor {
        Anchor::In(i) => i,
        Anchor::Out(j) => n_in + (n_out - 1 - j),
        Anchor::Node { .. } => unreachable!("not a boundary anchor"),
    }
}

/// The boundary words after applying the given bends, or `None` when the
/// combination is inadmissible for these words.
fn bend_words(
    win: &[Polarity],
    wout: &[Polarity],
    bend_in: Option<BendEnd>,
    bend_out: Option<BendEnd>,
) -> Option<(Word, Word)> {
    use BendEnd::{Leftmost, Rightmost};
    if bend_in.is_some() && win.is_empty() {
        return None;
    }
    if bend_out.is_some() && wout.is_empty() {
        return None;
    }
    let flip = Polarity::flip;
    let (mut ni, mut no): (Word, Word) = (win.to_vec(), wout.to_vec());
    match (bend_in, bend_out) {
        (None, None) => {}
        (Some(Rightmost), None) => {
            let p = ni.pop().unwrap();
            no.push(flip(p));
        }
        (Some(Leftmost), None) => {
            let p = ni.remove(0);
            no.insert(0, flip(p));
        }
        (None, Some(Rightmost)) => {
            let p = no.pop().unwrap();
            ni.push(flip(p));
        }
        (None, Some(Leftmost)) => {
            let p = no.remove(0);
            ni.insert(0, flip(p));
        }
        // The two wires of a double bend wrap around opposite sides of the
        // diagram; same-side pairs would cross and are not offered.
        (Some(Rightmost), Some(Leftmost)) => {
            let p = ni.pop().unwrap();
            let q = no.remove(0);
            ni.insert(0, flip(q));
            no.push(flip(p));
        }
        (Some(Leftmost), Some(Rightmost)) => {
            let p = ni.remove(0);
            let q = no.pop().unwrap();
            ni.push(flip(q));
            no.insert(0, flip(p));
        }
        _ => return None,
    }
    (!ni.is_empty() && !no.is_empty()).then_some((ni, no))
}

/// Preference order for bending: nothing, rightmost bends, leftmost bends,
/// then the two admissible double bends.
const BEND_CHOICES: [(Option<BendEnd>, Option<BendEnd>); 7] = [
    (None, None),
    (Some(BendEnd::Rightmost), None),
    (None, Some(BendEnd::Rightmost)),
    (Some(BendEnd::Leftmost), None),
    (None, Some(BendEnd::Leftmost)),
    (Some(BendEnd::Rightmost), Some(BendEnd::Leftmost)),
    (Some(BendEnd::Leftmost), Some(BendEnd::Rightmost)),
];

fn choose_bends(
    win: &[Polarity],
    wout: &[Polarity],
) -> Result<(Option<BendEnd>, Option<BendEnd>, Word, Word), DiagramError> {
    for (bi, bo) in BEND_CHOICES {
        if let Some((ni, no)) = bend_words(win, wout, bi, bo) {
            if super::is_alternating(&ni) && super::is_alternating(&no) {
                return Ok((bi, bo, ni, no));
            }
        }
    }
    Err(DiagramError::NotNormalizable(format!(
        "no admissible bending for boundary {} → {}",
        super::word_string(win),
        super::word_string(wout),
    )))
}

fn id_of(p: Polarity) -> Term {
    Term::Gen(match p {
        Polarity::Pos => Generator::IdPos,
        Polarity::Neg => Generator::IdNeg,
    })
}

fn id_row(word: &[Polarity]) -> Option<Term> {
    let mut out: Option<Term> = None;
    for &p in word {
        out = Some(match out {
            None => id_of(p),
            Some(t) => t.beside(id_of(p)),
        });
    }
    out
}

fn beside3(left: Option<Term>, mid: Term, right: Option<Term>) -> Term {
    let mut t = match left {
        None => mid,
        Some(l) => l.beside(mid),
    };
    if let Some(r) = right {
        t = t.beside(r);
    }
    t
}

fn single_bend(term: Term, end: BendEnd, on_input: bool) -> Result<Term, DiagramError> {
    let (win, wout) = boundary(&term)?;
    let missing = || {
        DiagramError::NotNormalizable(format!(
            "cannot bend an {} wire that is not there",
            if on_input { "input" } else { "output" }
        ))
    };
    match (on_input, end) {
        (true, BendEnd::Rightmost) => {
            let p = *win.last().ok_or_else(missing)?;
            let cup = Term::Gen(match p {
                Polarity::Pos => Generator::CupX,
                Polarity::Neg => Generator::Cup,
            });
            let first = beside3(id_row(&win[..win.len() - 1]), cup, None);
            Ok(first.then(term.beside(id_of(p.flip()))))
        }
        (true, BendEnd::Leftmost) => {
            let p = *win.first().ok_or_else(missing)?;
            let cup = Term::Gen(match p {
                Polarity::Pos => Generator::Cup,
                Polarity::Neg => Generator::CupX,
            });
            let first = beside3(None, cup, id_row(&win[1..]));
            Ok(first.then(id_of(p.flip()).beside(term)))
        }
        (false, BendEnd::Rightmost) => {
            let p = *wout.last().ok_or_else(missing)?;
            let cap = Term::Gen(match p {
                Polarity::Pos => Generator::Cap,
                Polarity::Neg => Generator::CapX,
            });
            let second = beside3(id_row(&wout[..wout.len() - 1]), cap, None);
            Ok(term.beside(id_of(p.flip())).then(second))
        }
        (false, BendEnd::Leftmost) => {
            let p = *wout.first().ok_or_else(missing)?;
            let cap = Term::Gen(match p {
                Polarity::Pos => Generator::CapX,
                Polarity::Neg => Generator::Cap,
            });
            let second = beside3(None, cap, id_row(&wout[1..]));
            Ok(id_of(p.flip()).beside(term).then(second))
        }
    }
}

/// Wrap a term so that the chosen boundary wires run around the side of the
/// diagram. The input bend is applied first; a double bend always targets
/// opposite ends, so the second wrap still reaches an original wire.
pub fn apply_bends(
    term: &Term,
    bend_in: Option<BendEnd>,
    bend_out: Option<BendEnd>,
) -> Result<Term, DiagramError> {
    let mut t = term.clone();
    if let Some(end) = bend_in {
        t = single_bend(t, end, true)?;
    }
    if let Some(end) = bend_out {
        t = single_bend(t, end, false)?;
    }
    Ok(t)
}

/// Rewrite a connected term to spider normal form.
pub fn normalize(term: &Term, mode: Mode) -> Result<NormalForm, DiagramError> {
    if mode == Mode::Planar && term.contains_swap() {
        return Err(DiagramError::SwapInPlanarMode);
    }
    let graph = to_graph(term)?;
    let components = graph.components();
    if components != 1 {
        return Err(DiagramError::Disconnected { components });
    }
    let closed = graph.in_word.is_empty() && graph.out_word.is_empty();
    if closed && mode == Mode::Planar {
        return Err(DiagramError::ClosedDiagram);
    }

    if graph.nodes.is_empty() {
        if closed {
            // A lone circle evaluates like the loopless closed spider: both
            // are the "is the carrier inhabited" scalar.
            return Ok(NormalForm {
                m: 0,
                n: 0,
                in_word: vec![],
                out_word: vec![],
                bend_in: None,
                bend_out: None,
                closed: true,
            });
        }
        let (bi, bo, ni, no) = choose_bends(&graph.in_word, &graph.out_word)?;
        return Ok(NormalForm {
            m: 0,
            n: 0,
            in_word: ni,
            out_word: no,
            bend_in: bi,
            bend_out: bo,
            closed: false,
        });
    }

    // Cyclic legs per vertex, counterclockwise, with flow directions. For
    // `mu3` the ports 0..4 read (x E, y L, z E, u L); for `comu3` the
    // counterclockwise order visits the input then the outputs from the
    // right, (in E, o2 L, o1 E, o0 L).
    let mut reducer = Reducer {
        spiders: Vec::new(),
        counts: vec![(0, 0); graph.nodes.len()],
        leg_spider: Vec::new(),
        leg_tok: Vec::new(),
        partner: Vec::new(),
    };
    let mut port_leg = vec![[usize::MAX; 4]; graph.nodes.len()];
    for (v, kind) in graph.nodes.iter().enumerate() {
        let ports: [usize; 4] = match kind {
            NodeKind::Mu => [0, 1, 2, 3],
            NodeKind::Comu => [0, 3, 2, 1],
        };
        let mut legs = Vec::with_capacity(4);
        for (slot, &port) in ports.iter().enumerate() {
            let leg = reducer.leg_tok.len();
            reducer.leg_tok.push(if slot % 2 == 0 { Tok::E } else { Tok::L });
            reducer.leg_spider.push(v);
            reducer.partner.push(FarEnd::Boundary(usize::MAX));
            port_leg[v][port] = leg;
            legs.push(leg);
        }
        reducer.spiders.push(Some(legs));
    }
    let (n_in, n_out) = (graph.in_word.len(), graph.out_word.len());
    for &(a, b) in &graph.wires {
        match (a, b) {
            (Anchor::Node { node: va, port: pa }, Anchor::Node { node: vb, port: pb }) => {
                let (la, lb) = (port_leg[va][pa], port_leg[vb][pb]);
                reducer.partner[la] = FarEnd::Leg(lb);
                reducer.partner[lb] = FarEnd::Leg(la);
            }
            (Anchor::Node { node, port }, other) | (other, Anchor::Node { node, port }) => {
                let leg = port_leg[node][port];
                reducer.partner[leg] = FarEnd::Boundary(boundary_cycle_index(other, n_in, n_out));
            }
            _ => unreachable!("boundary-to-boundary wire in a connected diagram with vertices"),
        }
    }

    loop {
        if let Some((s, i)) = reducer.find_adjacent_self_wire() {
            reducer.absorb_adjacent(s, i)?;
            continue;
        }
        if let Some(leg) = reducer.find_cross_wire() {
            reducer.fuse(leg);
            continue;
        }
        if mode == Mode::Commutative {
            if let Some((s, i, j)) = reducer.find_any_self_wire() {
                reducer.absorb_merged(s, i, j);
                continue;
            }
        }
        break;
    }

    let mut live = reducer.live();
    let (s, legs) = live.next().ok_or_else(|| {
        DiagramError::NotNormalizable("reduction consumed every vertex".into())
    })?;
    if live.next().is_some() {
        return Err(DiagramError::NotNormalizable(
            "multiple spiders left in a connected diagram".into(),
        ));
    }
    if reducer.find_any_self_wire().is_some() {
        return Err(DiagramError::NotNormalizable(
            "a non-adjacent self-wire survived planar reduction".into(),
        ));
    }
    let legs = legs.clone();
    let (mut m, mut n) = reducer.counts[s];
    if mode == Mode::Commutative {
        m += n;
        n = 0;
    }

    if closed {
        if !legs.is_empty() {
            return Err(DiagramError::NotNormalizable(
                "closed diagram left dangling legs".into(),
            ));
        }
        return Ok(NormalForm {
            m,
            n,
            in_word: vec![],
            out_word: vec![],
            bend_in: None,
            bend_out: None,
            closed: true,
        });
    }

    let targets: Vec<usize> = legs
        .iter()
        .map(|&l| match reducer.partner[l] {
            FarEnd::Boundary(b) => b,
            FarEnd::Leg(_) => unreachable!("self-wires were all absorbed"),
        })
        .collect();
    if targets.len() != n_in + n_out {
        return Err(DiagramError::NotNormalizable(
            "leg count does not match the boundary".into(),
        ));
    }
    if mode == Mode::Planar && !targets.is_empty() {
        // The reduced legs must read the boundary cycle in order, up to
        // rotation — anything else means the diagram was not planar.
        let start = targets.iter().position(|&b| b == 0).expect("boundary 0 is wired");
        let rotated: Vec<usize> = (0..targets.len())
            .map(|k| targets[(start + k) % targets.len()])
            .collect();
        if rotated != (0..targets.len()).collect::<Vec<_>>() {
            return Err(DiagramError::NotNormalizable(
                "spider legs do not align with the boundary cycle".into(),
            ));
        }
    }

    let (bi, bo, ni, no) = choose_bends(&graph.in_word, &graph.out_word)?;
    Ok(NormalForm {
        m,
        n,
        in_word: ni,
        out_word: no,
        bend_in: bi,
        bend_out: bo,
        closed: false,
    })
}
