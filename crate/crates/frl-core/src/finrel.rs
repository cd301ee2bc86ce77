//! Finite relations between tensor words of finite sets.
//!
//! Objects are words of (finite set, polarity) factors; a relation is a
//! boolean incidence matrix between the carriers of two words. Polarities
//! carry no semantics at this level — they exist so the diagram language can
//! typecheck cups and caps — and are ignored by every operation except
//! [`Obj::dual`].

use std::fmt;
use thiserror::Error;

/// Orientation of a wire end. `Pos` is the object itself, `Neg` its dual.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Polarity {
    Pos,
    Neg,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Pos => Polarity::Neg,
            Polarity::Neg => Polarity::Pos,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Polarity::Pos => '+',
            Polarity::Neg => '-',
        }
    }
}

/// A named finite set `{0, 1, …, size-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FinSet {
    pub name: String,
    pub size: usize,
}

impl FinSet {
    pub fn new(name: impl Into<String>, size: usize) -> FinSet {
        FinSet { name: name.into(), size }
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// A tensor word of polarized finite sets. The empty word is the monoidal
/// unit `I`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Obj {
    pub factors: Vec<(FinSet, Polarity)>,
}

impl Obj {
    /// The monoidal unit (empty word, carrier of size 1).
    pub fn one() -> Obj {
        Obj { factors: Vec::new() }
    }

    /// A single-factor word.
    pub fn atom(set: FinSet, pol: Polarity) -> Obj {
        Obj { factors: vec![(set, pol)] }
    }

    /// Positive single-factor word — the common case.
    pub fn plain(set: FinSet) -> Obj {
        Obj::atom(set, Polarity::Pos)
    }

    /// Word with `n` positive copies of `set`.
    pub fn power(set: &FinSet, n: usize) -> Obj {
        Obj { factors: vec![(set.clone(), Polarity::Pos); n] }
    }

    pub fn tensor(&self, other: &Obj) -> Obj {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Obj { factors }
    }

    /// Dual word: reversed order, flipped polarities.
    pub fn dual(&self) -> Obj {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|(s, p)| (s.clone(), p.flip()))
            .collect();
        Obj { factors }
    }

    /// Number of elements of the carrier (product of factor sizes).
    pub fn card(&self) -> usize {
        self.factors.iter().map(|(s, _)| s.size).product()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|(s, _)| s.size).collect()
    }

    /// Same carrier cardinality. This is the compatibility test used by
    /// composition: factor structure is display-level bookkeeping, and the
    /// row-major encoding identifies the index sets of any two words with
    /// equal cardinality (e.g. a 4-element set and a 2⊗2 word).
    pub fn carrier_eq(&self, other: &Obj) -> bool {
        self.card() == other.card()
    }

    /// Mixed-radix, row-major encoding of a tuple (leftmost factor most
    /// significant). Panics if the tuple has the wrong length or an entry is
    /// out of range.
    pub fn encode(&self, tuple: &[usize]) -> usize {
        assert_eq!(tuple.len(), self.factors.len(), "tuple arity mismatch");
        let mut idx = 0;
        for (t, (s, _)) in tuple.iter().zip(&self.factors) {
            assert!(*t < s.size, "tuple entry out of range");
            idx = idx * s.size + t;
        }
        idx
    }

    /// Inverse of [`Obj::encode`].
    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, (s, _)) in out.iter_mut().zip(&self.factors).rev() {
            *slot = idx % s.size;
            idx /= s.size;
        }
        debug_assert_eq!(idx, 0, "index out of range");
        out
    }

    pub fn polarity_word(&self) -> String {
        self.factors.iter().map(|(_, p)| p.symbol()).collect()
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "I");
        }
        for (i, (s, p)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "⊗")?;
            }
            write!(f, "{}{}", s.name, p.symbol())?;
        }
        Ok(())
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RelError {
    #[error("shape mismatch in {op}: {lhs} does not meet {rhs}")]
    ShapeMismatch { op: &'static str, lhs: String, rhs: String },
    #[error("{op} requires an endorelation, got {src} ⇸ {dst}")]
    NotEndo { op: &'static str, src: String, dst: String },
    #[error("{op}: {reason}")]
    Precondition { op: &'static str, reason: String },
}

/// A relation between the carriers of two tensor words, stored as a boolean
/// incidence matrix (row = source element, column = target element).
#[derive(Clone, Debug)]
pub struct FinRel {
    pub src: Obj,
    pub dst: Obj,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl FinRel {
    /// The empty (zero) relation.
    pub fn zero(src: Obj, dst: Obj) -> FinRel {
        let words_per_row = dst.card().div_ceil(64).max(1);
        let bits = vec![0; src.card() * words_per_row];
        FinRel { src, dst, words_per_row, bits }
    }

    pub fn identity(obj: Obj) -> FinRel {
        let mut r = FinRel::zero(obj.clone(), obj);
        for a in 0..r.src.card() {
            r.set(a, a, true);
        }
        r
    }

    /// The all-pairs relation.
    pub fn full(src: Obj, dst: Obj) -> FinRel {
        let mut r = FinRel::zero(src, dst);
        for a in 0..r.src.card() {
            for b in 0..r.dst.card() {
                r.set(a, b, true);
            }
        }
        r
    }

    pub fn from_pairs(src: Obj, dst: Obj, pairs: &[(usize, usize)]) -> FinRel {
        let mut r = FinRel::zero(src, dst);
        for &(a, b) in pairs {
            r.set(a, b, true);
        }
        r
    }

    pub fn from_fn(src: Obj, dst: Obj, f: impl Fn(usize, usize) -> bool) -> FinRel {
        let mut r = FinRel::zero(src, dst);
        for a in 0..r.src.card() {
            for b in 0..r.dst.card() {
                if f(a, b) {
                    r.set(a, b, true);
                }
            }
        }
        r
    }

    pub fn rows(&self) -> usize {
        self.src.card()
    }

    pub fn cols(&self) -> usize {
        self.dst.card()
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words_per_row + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn set(&mut self, a: usize, b: usize, value: bool) {
        assert!(a < self.src.card() && b < self.dst.card(), "index out of range");
        let w = &mut self.bits[a * self.words_per_row + b / 64];
        if value {
            *w |= 1 << (b % 64);
        } else {
            *w &= !(1 << (b % 64));
        }
    }

    /// All related pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.rows() {
            for b in self.row_elements(a) {
                out.push((a, b));
            }
        }
        out
    }

    /// Iterator over the columns related to row `a`.
    pub fn row_elements(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.bits[a * self.words_per_row..(a + 1) * self.words_per_row];
        row.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn count_pairs(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    fn check_middle(&self, other: &FinRel, op: &'static str) -> Result<(), RelError> {
        if self.dst.carrier_eq(&other.src) {
            Ok(())
        } else {
            Err(RelError::ShapeMismatch {
                op,
                lhs: self.dst.to_string(),
                rhs: other.src.to_string(),
            })
        }
    }

    fn check_same_shape(&self, other: &FinRel, op: &'static str) -> Result<(), RelError> {
        if self.src.carrier_eq(&other.src) && self.dst.carrier_eq(&other.dst) {
            Ok(())
        } else {
            Err(RelError::ShapeMismatch {
                op,
                lhs: format!("{} ⇸ {}", self.src, self.dst),
                rhs: format!("{} ⇸ {}", other.src, other.dst),
            })
        }
    }

    /// Diagrammatic composition: `self`, then `other`. Related pairs satisfy
    /// `(a, c) ∈ result ⟺ ∃b. (a, b) ∈ self ∧ (b, c) ∈ other`.
    pub fn compose(&self, other: &FinRel) -> Result<FinRel, RelError> {
        self.check_middle(other, "compose")?;
        let mut out = FinRel::zero(self.src.clone(), other.dst.clone());
        for a in 0..self.rows() {
            let out_row = a * out.words_per_row;
            for b in self.row_elements(a) {
                let other_row = b * other.words_per_row;
                for w in 0..other.words_per_row {
                    out.bits[out_row + w] |= other.bits[other_row + w];
                }
            }
        }
        Ok(out)
    }

    /// Converse relation. Objects swap; polarities are untouched.
    pub fn dagger(&self) -> FinRel {
        let mut out = FinRel::zero(self.dst.clone(), self.src.clone());
        for a in 0..self.rows() {
            for b in self.row_elements(a) {
                out.set(b, a, true);
            }
        }
        out
    }

    /// Pointwise tensor: `(a₁a₂, b₁b₂) ∈ r⊗s ⟺ (a₁,b₁) ∈ r ∧ (a₂,b₂) ∈ s`.
    pub fn tensor(&self, other: &FinRel) -> FinRel {
        let src = self.src.tensor(&other.src);
        let dst = self.dst.tensor(&other.dst);
        let mut out = FinRel::zero(src, dst);
        let (sc2, dc2) = (other.rows(), other.cols());
        for a1 in 0..self.rows() {
            for b1 in self.row_elements(a1) {
                for a2 in 0..sc2 {
                    for b2 in other.row_elements(a2) {
                        out.set(a1 * sc2 + a2, b1 * dc2 + b2, true);
                    }
                }
            }
        }
        out
    }

    /// Pointwise union. Idempotent; shapes must agree.
    pub fn union(&self, other: &FinRel) -> Result<FinRel, RelError> {
        self.check_same_shape(other, "union")?;
        let mut out = self.clone();
        for (w, o) in out.bits.iter_mut().zip(&other.bits) {
            *w |= o;
        }
        Ok(out)
    }

    /// Containment of incidences.
    pub fn is_leq(&self, other: &FinRel) -> Result<bool, RelError> {
        self.check_same_shape(other, "is_leq")?;
        Ok(self.bits.iter().zip(&other.bits).all(|(w, o)| w & !o == 0))
    }

    /// `cup(A) : I → A⁻ ⊗ A⁺`, relating `⋆` to every diagonal pair.
    pub fn cup(set: &FinSet) -> FinRel {
        let dst = Obj::atom(set.clone(), Polarity::Neg).tensor(&Obj::atom(set.clone(), Polarity::Pos));
        FinRel::from_fn(Obj::one(), dst, |_, b| b / set.size == b % set.size)
    }

    /// `cup_swapped(A) : I → A⁺ ⊗ A⁻`.
    pub fn cup_swapped(set: &FinSet) -> FinRel {
        let mut r = FinRel::cup(set);
        r.dst = r.dst.dual();
        r
    }

    /// `cap(A) : A⁺ ⊗ A⁻ → I`, the dagger of `cup_swapped`.
    pub fn cap(set: &FinSet) -> FinRel {
        FinRel::cup_swapped(set).dagger()
    }

    /// `cap_swapped(A) : A⁻ ⊗ A⁺ → I`, the dagger of `cup`.
    pub fn cap_swapped(set: &FinSet) -> FinRel {
        FinRel::cup(set).dagger()
    }

    /// The symmetry `A ⊗ B → B ⊗ A` on single-factor words.
    pub fn swap(a: (FinSet, Polarity), b: (FinSet, Polarity)) -> FinRel {
        let (asz, bsz) = (a.0.size, b.0.size);
        let src = Obj::atom(a.0.clone(), a.1).tensor(&Obj::atom(b.0.clone(), b.1));
        let dst = Obj::atom(b.0, b.1).tensor(&Obj::atom(a.0, a.1));
        FinRel::from_fn(src, dst, |x, y| {
            let (x1, x2) = (x / bsz, x % bsz);
            let (y1, y2) = (y / asz, y % asz);
            x1 == y2 && x2 == y1
        })
    }
}

impl PartialEq for FinRel {
    /// Semantic equality: same carrier shapes, same incidences. Names and
    /// polarities do not participate.
    fn eq(&self, other: &FinRel) -> bool {
        self.src.carrier_eq(&other.src) && self.dst.carrier_eq(&other.dst) && self.bits == other.bits
    }
}

impl Eq for FinRel {}

impl fmt::Display for FinRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⇸ {} {{", self.src, self.dst)?;
        for (i, (a, b)) in self.pairs().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " ({a},{b})")?;
        }
        write!(f, " }}")
    }
}

/// Structural flags of a relation. The order-theoretic flags
/// (`reflexive` … `equivalence`) are only meaningful for endorelations and
/// are reported as `false` together with `endo = false` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationProperties {
    pub endo: bool,
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub equivalence: bool,
    pub single_valued: bool,
    pub total: bool,
    pub difunctional: bool,
}

/// Compute [`RelationProperties`] for a relation.
///
/// `difunctional` is the Riguet condition `r ∘ r† ∘ r ≤ r` (composition
/// diagrammatic), which is equivalent to the zig-zag implication
/// `r(a,x) ∧ r(b,x) ∧ r(b,y) ⟹ r(a,y)`.
pub fn relation_properties(r: &FinRel) -> RelationProperties {
    let endo = r.src.carrier_eq(&r.dst);
    let (reflexive, symmetric, transitive) = if endo {
        let dg = r.dagger();
        let refl = (0..r.rows()).all(|a| r.get(a, a));
        let sym = *r == dg;
        let trans = r
            .compose(r)
            .expect("endo composes with itself")
            .is_leq(r)
            .expect("same shape");
        (refl, sym, trans)
    } else {
        (false, false, false)
    };
    let single_valued = (0..r.rows()).all(|a| r.row_elements(a).count() <= 1);
    let total = (0..r.rows()).all(|a| r.row_elements(a).next().is_some());
    let zigzag = r
        .compose(&r.dagger())
        .and_then(|x| x.compose(r))
        .expect("shapes agree")
        .is_leq(r)
        .expect("same shape");
    RelationProperties {
        endo,
        reflexive,
        symmetric,
        transitive,
        equivalence: reflexive && symmetric && transitive,
        single_valued,
        total,
        difunctional: zigzag,
    }
}

/// For equivalence relations `r`, `s` on the same carrier: does the chain
/// condition `s∘r∘s = r∘s∘r` hold? (Both sides written diagrammatically.)
pub fn goursat_chain_check(r: &FinRel, s: &FinRel) -> Result<bool, RelError> {
    for (rel, name) in [(r, "first"), (s, "second")] {
        let p = relation_properties(rel);
        if !p.equivalence {
            return Err(RelError::Precondition {
                op: "goursat_chain_check",
                reason: format!("{name} argument is not an equivalence relation"),
            });
        }
    }
    r.check_same_shape(s, "goursat_chain_check")?;
    let srs = s.compose(r)?.compose(s)?;
    let rsr = r.compose(s)?.compose(r)?;
    Ok(srs == rsr)
}

/// Outcome of [`dagger_split`]: the class object `L`, the splitting
/// `i : L ⇸ A`, and the classes themselves (each sorted ascending).
#[derive(Clone, Debug)]
pub struct SplitParts {
    pub classes: Vec<Vec<usize>>,
    pub class_set: FinSet,
    /// `i : L ⇸ A` relating each class to its members. Satisfies
    /// `i.compose(i†) = id_L` and `i†.compose(i) = p`.
    pub injection: FinRel,
}

/// Split a symmetric, transitive relation `p` (a partial equivalence) into
/// its partial quotient: classes of `p` restricted to `{a | p(a,a)}`.
pub fn dagger_split(p: &FinRel) -> Result<SplitParts, RelError> {
    let props = relation_properties(p);
    if !props.endo {
        return Err(RelError::NotEndo {
            op: "dagger_split",
            src: p.src.to_string(),
            dst: p.dst.to_string(),
        });
    }
    if !(props.symmetric && props.transitive) {
        return Err(RelError::Precondition {
            op: "dagger_split",
            reason: "relation is not symmetric and transitive".into(),
        });
    }
    let n = p.rows();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if !p.get(a, a) || class_of[a] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = p.row_elements(a).collect();
        let id = classes.len();
        for &m in &members {
            class_of[m] = id;
        }
        classes.push(members);
    }
    let class_set = FinSet::new(format!("split({})", p.src), classes.len());
    let mut injection = FinRel::zero(Obj::plain(class_set.clone()), p.src.clone());
    for (id, members) in classes.iter().enumerate() {
        for &m in members {
            injection.set(id, m, true);
        }
    }
    Ok(SplitParts { classes, class_set, injection })
}

/// Disjoint union of carriers with the canonical injections
/// `κ_i : part_i ⇸ sum`. The injections are isometries onto complementary
/// blocks: `κ_i ∘ κ_i† = id`, `κ_i ∘ κ_j† = 0` for `i ≠ j`, and the
/// projections are their daggers.
pub fn biproduct(parts: &[FinSet]) -> (FinSet, Vec<FinRel>) {
    let total: usize = parts.iter().map(|p| p.size).sum();
    let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join("⊕");
    let sum = FinSet::new(if name.is_empty() { "0".to_string() } else { name }, total);
    let mut injections = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for part in parts {
        let mut k = FinRel::zero(Obj::plain(part.clone()), Obj::plain(sum.clone()));
        for a in 0..part.size {
            k.set(a, offset + a, true);
        }
        injections.push(k);
        offset += part.size;
    }
    (sum, injections)
}
