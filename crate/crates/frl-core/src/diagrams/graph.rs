//! Terms as open graphs.
//!
//! A term denotes a graph whose vertices are the `mu3`/`comu3` occurrences
//! and whose edges are wires: maximal runs of identities, crossings, cups and
//! caps connecting two anchor points. An anchor is a vertex port or a
//! boundary position. Closed loops made of bent wires alone (no vertex on
//! them) are tracked separately as circles.

use super::{boundary, DiagramError, Generator, Term, Word};

/// Vertex kind in the open graph of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Mu,
    Comu,
}

/// One endpoint of a wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    /// Port `port` of vertex `node`. For `mu3` the ports are `0..3` =
    /// first/middle/last input and `3` = output; for `comu3` port `0` is the
    /// input and `1..4` are its outputs left to right.
    Node { node: usize, port: usize },
    /// The `i`-th input of the whole diagram.
    In(usize),
    /// The `j`-th output of the whole diagram.
    Out(usize),
}

/// The open graph of a term.
#[derive(Clone, Debug)]
pub struct OpenGraph {
    pub nodes: Vec<NodeKind>,
    pub wires: Vec<(Anchor, Anchor)>,
    pub in_word: Word,
    pub out_word: Word,
    /// Closed loops built entirely from bent wires.
    pub circles: usize,
}

impl OpenGraph {
    fn vertex_count(&self) -> usize {
        self.nodes.len() + self.in_word.len() + self.out_word.len()
    }

    fn vertex_of(&self, a: Anchor) -> usize {
        match a {
            Anchor::Node { node, .. } => node,
            Anchor::In(i) => self.nodes.len() + i,
            Anchor::Out(j) => self.nodes.len() + self.in_word.len() + j,
        }
    }

    /// Connected components, counting each circle as its own component.
    pub fn components(&self) -> usize {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        for &(a, b) in &self.wires {
            let (ra, rb) = (
                find(&mut parent, self.vertex_of(a)),
                find(&mut parent, self.vertex_of(b)),
            );
            parent[ra] = rb;
        }
        let graph_components = (0..n).filter(|&i| find(&mut parent, i) == i).count();
        graph_components + self.circles
    }

    /// Independent cycles: `E − V + C` over the graph part, plus one per
    /// circle. Self-loop wires count.
    pub fn cycle_rank(&self) -> usize {
        let v = self.vertex_count();
        let c = self.components() - self.circles;
        (self.wires.len() + c + self.circles).saturating_sub(v)
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }
}

/// Union-find over wire tokens created during the structural traversal.
struct Tokens {
    parent: Vec<usize>,
}

impl Tokens {
    fn fresh(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }
}

struct Interface {
    ins: Vec<usize>,
    outs: Vec<usize>,
}

struct Builder {
    nodes: Vec<NodeKind>,
    tokens: Tokens,
    /// Anchors contributed by vertex ports, per token.
    anchors: Vec<(usize, Anchor)>,
}

impl Builder {
    fn node(&mut self, kind: NodeKind) -> Interface {
        let node = self.nodes.len();
        self.nodes.push(kind);
        let mut port_tokens = Vec::with_capacity(4);
        for port in 0..4 {
            let t = self.tokens.fresh();
            self.anchors.push((t, Anchor::Node { node, port }));
            port_tokens.push(t);
        }
        match kind {
            NodeKind::Mu => Interface {
                ins: port_tokens[..3].to_vec(),
                outs: vec![port_tokens[3]],
            },
            NodeKind::Comu => Interface {
                ins: vec![port_tokens[0]],
                outs: port_tokens[1..].to_vec(),
            },
        }
    }

    fn build(&mut self, term: &Term) -> Interface {
        match term {
            Term::Gen(Generator::Mu3) => self.node(NodeKind::Mu),
            Term::Gen(Generator::Comu3) => self.node(NodeKind::Comu),
            Term::Gen(Generator::IdPos) | Term::Gen(Generator::IdNeg) => {
                let t = self.tokens.fresh();
                Interface { ins: vec![t], outs: vec![t] }
            }
            Term::Gen(Generator::Cup) | Term::Gen(Generator::CupX) => {
                let t = self.tokens.fresh();
                Interface { ins: vec![], outs: vec![t, t] }
            }
            Term::Gen(Generator::Cap) | Term::Gen(Generator::CapX) => {
                let t = self.tokens.fresh();
                Interface { ins: vec![t, t], outs: vec![] }
            }
            Term::Gen(Generator::Swap(_, _)) => {
                let a = self.tokens.fresh();
                let b = self.tokens.fresh();
                Interface { ins: vec![a, b], outs: vec![b, a] }
            }
            Term::Seq(l, r) => {
                let li = self.build(l);
                let ri = self.build(r);
                debug_assert_eq!(li.outs.len(), ri.ins.len(), "typechecked before building");
                for (&a, &b) in li.outs.iter().zip(&ri.ins) {
                    self.tokens.union(a, b);
                }
                Interface { ins: li.ins, outs: ri.outs }
            }
            Term::Tensor(l, r) => {
                let mut li = self.build(l);
                let ri = self.build(r);
                li.ins.extend(ri.ins);
                li.outs.extend(ri.outs);
                Interface { ins: li.ins, outs: li.outs }
            }
        }
    }
}

/// Compute the open graph of a term. Fails only if the term does not
/// typecheck.
pub fn to_graph(term: &Term) -> Result<OpenGraph, DiagramError> {
    let (in_word, out_word) = boundary(term)?;
    let mut builder = Builder {
        nodes: Vec::new(),
        tokens: Tokens { parent: Vec::new() },
        anchors: Vec::new(),
    };
    let interface = builder.build(term);
    for (i, &t) in interface.ins.iter().enumerate() {
        builder.anchors.push((t, Anchor::In(i)));
    }
    for (j, &t) in interface.outs.iter().enumerate() {
        builder.anchors.push((t, Anchor::Out(j)));
    }

    let token_count = builder.tokens.parent.len();
    let mut per_class: Vec<Vec<Anchor>> = vec![Vec::new(); token_count];
    for &(t, a) in &builder.anchors {
        let root = builder.tokens.find(t);
        per_class[root].push(a);
    }

    let mut wires = Vec::new();
    let mut circles = 0;
    let mut seen_roots = vec![false; token_count];
    for t in 0..token_count {
        let root = builder.tokens.find(t);
        if seen_roots[root] {
            continue;
        }
        seen_roots[root] = true;
        match per_class[root].as_slice() {
            [a, b] => wires.push((*a, *b)),
            [] => circles += 1,
            other => unreachable!("wire class with {} anchors", other.len()),
        }
    }

    Ok(OpenGraph {
        nodes: builder.nodes,
        wires,
        in_word,
        out_word,
        circles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(src: &str) -> OpenGraph {
        to_graph(&Term::parse(src).expect("parses")).expect("typechecks")
    }

    #[test]
    fn generators_have_expected_shapes() {
        let mu = g("mu3");
        assert_eq!(mu.nodes, vec![NodeKind::Mu]);
        assert_eq!(mu.wires.len(), 4);
        assert_eq!(mu.cycle_rank(), 0);
        assert!(mu.is_connected());

        let id = g("id+");
        assert!(id.nodes.is_empty());
        assert_eq!(id.wires.len(), 1);
        assert!(id.is_connected());

        let pair = g("id+ * id-");
        assert_eq!(pair.components(), 2);
        assert!(!pair.is_connected());
    }

    #[test]
    fn snake_is_one_wire() {
        let snake = g("(id+ * cup) ; (cap * id+)");
        assert!(snake.nodes.is_empty());
        assert_eq!(snake.wires.len(), 1);
        assert_eq!(snake.cycle_rank(), 0);
        assert!(snake.is_connected());
    }

    #[test]
    fn circle_is_tracked_separately() {
        let circle = g("cup ; capx");
        assert_eq!(circle.wires.len(), 0);
        assert_eq!(circle.circles, 1);
        assert_eq!(circle.components(), 1);
        assert_eq!(circle.cycle_rank(), 1);
    }

    #[test]
    fn loops_raise_cycle_rank() {
        // Left loop: one mu3 with a self-wire.
        let ll = g("(cupx * id+) ; mu3");
        assert_eq!(ll.nodes.len(), 1);
        assert_eq!(ll.cycle_rank(), 1);
        let self_loops = ll
            .wires
            .iter()
            .filter(|(a, b)| {
                matches!((a, b), (Anchor::Node { node: x, .. }, Anchor::Node { node: y, .. }) if x == y)
            })
            .count();
        assert_eq!(self_loops, 1);

        // comu3 ; mu3 has two internal wires between distinct nodes plus a
        // third — rank 2.
        let theta = g("comu3 ; mu3");
        assert_eq!(theta.nodes.len(), 2);
        assert_eq!(theta.cycle_rank(), 2);
        assert!(theta.is_connected());
    }

    #[test]
    fn trace_of_loop_is_closed_and_connected() {
        let tr = g("cupx ; (((id+ * cup) ; mu3) * id-) ; cap");
        assert!(tr.in_word.is_empty() && tr.out_word.is_empty());
        assert_eq!(tr.nodes.len(), 1);
        assert_eq!(tr.circles, 0);
        assert!(tr.is_connected());
        assert_eq!(tr.cycle_rank(), 2);
    }
}
