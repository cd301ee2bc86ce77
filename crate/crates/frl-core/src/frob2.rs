//! Binary Frobenius structures on a finite carrier and their groupoid
//! presentations.
//!
//! A structure is a pair (M, U): a ternary incidence table `M(a,b,c)`
//! ("c is a product of a and b") and a unit subset `U ⊆ A`. The five axiom
//! flags F1–F5 are direct quantifier translations; structures passing all
//! five are exactly groupoid composition tables, and the conversions in both
//! directions are implemented here.

use crate::finrel::{FinRel, FinSet, Obj};
use std::fmt;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Frob2Error {
    #[error("element {elem} has {count} source-unit candidates, expected exactly 1")]
    SourceUnit { elem: usize, count: usize },
    #[error("element {elem} has {count} target-unit candidates, expected exactly 1")]
    TargetUnit { elem: usize, count: usize },
    #[error("multiplication at ({a},{b}) has {count} values but the pair is {expected}")]
    Composability { a: usize, b: usize, count: usize, expected: &'static str },
    #[error("element {elem} has {count} inverse candidates, expected exactly 1")]
    Inverse { elem: usize, count: usize },
    #[error("groupoid axiom violated: {0}")]
    Groupoid(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// A binary Frobenius structure: multiplication incidence table and unit
/// subset over a finite carrier.
#[derive(Clone, Debug)]
pub struct Frob2 {
    pub carrier: FinSet,
    mult: Vec<bool>,
    unit: Vec<bool>,
}

impl Frob2 {
    pub fn new_empty(carrier: FinSet) -> Frob2 {
        let n = carrier.size;
        Frob2 { carrier, mult: vec![false; n * n * n], unit: vec![false; n] }
    }

    pub fn from_tables(carrier: FinSet, mult: Vec<bool>, unit: Vec<bool>) -> Frob2 {
        let n = carrier.size;
        assert_eq!(mult.len(), n * n * n);
        assert_eq!(unit.len(), n);
        Frob2 { carrier, mult, unit }
    }

    /// Build from a total binary operation and a unit subset.
    pub fn from_op(carrier: FinSet, op: impl Fn(usize, usize) -> usize, unit: &[usize]) -> Frob2 {
        let mut f = Frob2::new_empty(carrier);
        let n = f.size();
        for a in 0..n {
            for b in 0..n {
                let c = op(a, b);
                f.set_m(a, b, c, true);
            }
        }
        for &u in unit {
            f.unit[u] = true;
        }
        f
    }

    pub fn size(&self) -> usize {
        self.carrier.size
    }

    pub fn m(&self, a: usize, b: usize, c: usize) -> bool {
        let n = self.size();
        self.mult[(a * n + b) * n + c]
    }

    pub fn set_m(&mut self, a: usize, b: usize, c: usize, value: bool) {
        let n = self.size();
        self.mult[(a * n + b) * n + c] = value;
    }

    pub fn unit_has(&self, x: usize) -> bool {
        self.unit[x]
    }

    pub fn set_unit(&mut self, x: usize, value: bool) {
        self.unit[x] = value;
    }

    pub fn unit_elems(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.unit[x]).collect()
    }

    /// Multiplication as a relation `A ⊗ A ⇸ A`.
    pub fn mult_rel(&self) -> FinRel {
        let a = Obj::plain(self.carrier.clone());
        let n = self.size();
        FinRel::from_fn(a.tensor(&a), a, |p, c| self.m(p / n, p % n, c))
    }

    /// Unit subset as a state `I ⇸ A`.
    pub fn unit_state(&self) -> FinRel {
        FinRel::from_fn(Obj::one(), Obj::plain(self.carrier.clone()), |_, x| self.unit[x])
    }

    /// The involution relation `ι = {(a,b) | ∃x∈U. M(a,b,x)}`.
    pub fn involution(&self) -> FinRel {
        let a = Obj::plain(self.carrier.clone());
        FinRel::from_fn(a.clone(), a, |x, y| {
            (0..self.size()).any(|u| self.unit[u] && self.m(x, y, u))
        })
    }

    /// Is the involution invariant under swapping its arguments?
    pub fn is_symmetric(&self) -> bool {
        let i = self.involution();
        i == i.dagger()
    }
}

impl PartialEq for Frob2 {
    /// Table equality: same carrier size, same incidences, same unit subset.
    fn eq(&self, other: &Frob2) -> bool {
        self.carrier.size == other.carrier.size && self.mult == other.mult && self.unit == other.unit
    }
}

impl Eq for Frob2 {}

/// The five axiom flags of a binary structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frob2Report {
    /// F1: `∃x∈U. M(x,a,a′) ⟺ a = a′`.
    pub f1_left_unit: bool,
    /// F2: `∃x∈U. M(a,x,a′) ⟺ a = a′`.
    pub f2_right_unit: bool,
    /// F3: `∃e. M(a,b,e) ∧ M(e,c,d) ⟺ ∃e. M(b,c,e) ∧ M(a,e,d)`.
    pub f3_associative: bool,
    /// F4: `∃b,c. M(b,c,a) ∧ M(b,c,a′) ⟺ a = a′`.
    pub f4_special: bool,
    /// F5: `∃e. M(a,e,c) ∧ M(e,d,b) ⟺ ∃e. M(c,e,a) ∧ M(e,b,d)`.
    pub f5_frobenius: bool,
}

impl Frob2Report {
    pub fn all(&self) -> bool {
        self.f1_left_unit && self.f2_right_unit && self.f3_associative && self.f4_special && self.f5_frobenius
    }

    /// Everything except speciality — the precondition of the unit-expansion
    /// bridge.
    pub fn frobenius_non_special(&self) -> bool {
        self.f1_left_unit && self.f2_right_unit && self.f3_associative && self.f5_frobenius
    }
}

impl fmt::Display for Frob2Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F1={} F2={} F3={} F4={} F5={}",
            self.f1_left_unit, self.f2_right_unit, self.f3_associative, self.f4_special, self.f5_frobenius
        )
    }
}

/// Evaluate all five axiom flags by direct quantifier iteration.
pub fn check_frob2(f: &Frob2) -> Frob2Report {
    let n = f.size();
    let exists_unit = |pred: &dyn Fn(usize) -> bool| (0..n).any(|x| f.unit_has(x) && pred(x));

    let mut f1 = true;
    let mut f2 = true;
    for a in 0..n {
        for a2 in 0..n {
            let left = exists_unit(&|x| f.m(x, a, a2));
            let right = exists_unit(&|x| f.m(a, x, a2));
            f1 &= left == (a == a2);
            f2 &= right == (a == a2);
        }
    }

    let mut f3 = true;
    let mut f5 = true;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let lhs = (0..n).any(|e| f.m(a, b, e) && f.m(e, c, d));
                    let rhs = (0..n).any(|e| f.m(b, c, e) && f.m(a, e, d));
                    f3 &= lhs == rhs;
                    let lhs = (0..n).any(|e| f.m(a, e, c) && f.m(e, d, b));
                    let rhs = (0..n).any(|e| f.m(c, e, a) && f.m(e, b, d));
                    f5 &= lhs == rhs;
                }
            }
        }
    }

    let mut f4 = true;
    for a in 0..n {
        for a2 in 0..n {
            let joined = (0..n).any(|b| (0..n).any(|c| f.m(b, c, a) && f.m(b, c, a2)));
            f4 &= joined == (a == a2);
        }
    }

    Frob2Report {
        f1_left_unit: f1,
        f2_right_unit: f2,
        f3_associative: f3,
        f4_special: f4,
        f5_frobenius: f5,
    }
}

/// A finite groupoid: objects, morphisms, endpoint maps, units, inverses and
/// a partial composition table. `compose[a*n + b]` is `a ∘ b`, defined
/// exactly when `source[a] == target[b]`.
#[derive(Clone, Debug)]
pub struct Groupoid {
    pub objects: FinSet,
    pub morphisms: FinSet,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub unit: Vec<usize>,
    pub inverse: Vec<usize>,
    pub compose: Vec<Option<usize>>,
}

impl Groupoid {
    pub fn n_objects(&self) -> usize {
        self.objects.size
    }

    pub fn n_morphisms(&self) -> usize {
        self.morphisms.size
    }

    pub fn comp(&self, a: usize, b: usize) -> Option<usize> {
        self.compose[a * self.n_morphisms() + b]
    }

    /// Reindex objects along the order of their unit morphisms. Two
    /// presentations of the same composition structure that differ only in
    /// object labeling agree after canonicalization.
    pub fn canonicalize(&self) -> Groupoid {
        let mut order: Vec<usize> = (0..self.n_objects()).collect();
        order.sort_by_key(|&o| self.unit[o]);
        let mut new_index = vec![0; self.n_objects()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        Groupoid {
            objects: FinSet::new(self.objects.name.clone(), self.n_objects()),
            morphisms: self.morphisms.clone(),
            source: self.source.iter().map(|&o| new_index[o]).collect(),
            target: self.target.iter().map(|&o| new_index[o]).collect(),
            unit: order.iter().map(|&o| self.unit[o]).collect(),
            inverse: self.inverse.clone(),
            compose: self.compose.clone(),
        }
    }
}

impl PartialEq for Groupoid {
    /// Table equality: carrier sizes and all structure maps; names ignored.
    fn eq(&self, other: &Groupoid) -> bool {
        self.objects.size == other.objects.size
            && self.morphisms.size == other.morphisms.size
            && self.source == other.source
            && self.target == other.target
            && self.unit == other.unit
            && self.inverse == other.inverse
            && self.compose == other.compose
    }
}

impl Eq for Groupoid {}

/// Validate every groupoid axiom; errors name the first violation found.
pub fn check_groupoid(g: &Groupoid) -> Result<(), Frob2Error> {
    let n = g.n_morphisms();
    let k = g.n_objects();
    let fail = |msg: String| Err(Frob2Error::Groupoid(msg));
    if g.source.len() != n || g.target.len() != n || g.inverse.len() != n || g.unit.len() != k {
        return fail("table lengths do not match carrier sizes".into());
    }
    if g.compose.len() != n * n {
        return fail("composition table has the wrong size".into());
    }
    for o in 0..k {
        let u = g.unit[o];
        if u >= n || g.source[u] != o || g.target[u] != o {
            return fail(format!("unit of object {o} has wrong endpoints"));
        }
    }
    for a in 0..n {
        if g.source[a] >= k || g.target[a] >= k {
            return fail(format!("morphism {a} has out-of-range endpoints"));
        }
        for b in 0..n {
            let composable = g.source[a] == g.target[b];
            match g.comp(a, b) {
                None if composable => return fail(format!("({a},{b}) composable but undefined")),
                Some(_) if !composable => return fail(format!("({a},{b}) defined but not composable")),
                Some(c) if g.source[c] != g.source[b] || g.target[c] != g.target[a] => {
                    return fail(format!("({a},{b}) composite has wrong endpoints"));
                }
                _ => {}
            }
        }
        if g.comp(a, g.unit[g.source[a]]) != Some(a) || g.comp(g.unit[g.target[a]], a) != Some(a) {
            return fail(format!("unit laws fail at morphism {a}"));
        }
        let inv = g.inverse[a];
        if inv >= n || g.source[inv] != g.target[a] || g.target[inv] != g.source[a] {
            return fail(format!("inverse of {a} has wrong endpoints"));
        }
        if g.comp(a, inv) != Some(g.unit[g.target[a]]) || g.comp(inv, a) != Some(g.unit[g.source[a]]) {
            return fail(format!("inverse laws fail at morphism {a}"));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let left = g.comp(a, b).and_then(|ab| g.comp(ab, c));
                let right = g.comp(b, c).and_then(|bc| g.comp(a, bc));
                if left != right {
                    return fail(format!("associativity fails at ({a},{b},{c})"));
                }
            }
        }
    }
    Ok(())
}

/// Extract the groupoid presented by a structure passing F1–F5. All
/// uniqueness requirements are hard errors: the extraction refuses to guess.
pub fn frob2_to_groupoid(f: &Frob2) -> Result<Groupoid, Frob2Error> {
    let n = f.size();
    let units = f.unit_elems();
    let obj_of = |u: usize| units.iter().position(|&x| x == u);

    let mut source = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    for a in 0..n {
        let s: Vec<usize> = units
            .iter()
            .copied()
            .filter(|&x| (0..n).any(|c| f.m(a, x, c)))
            .collect();
        if s.len() != 1 {
            return Err(Frob2Error::SourceUnit { elem: a, count: s.len() });
        }
        source.push(obj_of(s[0]).expect("unit element indexes an object"));
        let t: Vec<usize> = units
            .iter()
            .copied()
            .filter(|&y| (0..n).any(|c| f.m(y, a, c)))
            .collect();
        if t.len() != 1 {
            return Err(Frob2Error::TargetUnit { elem: a, count: t.len() });
        }
        target.push(obj_of(t[0]).expect("unit element indexes an object"));
    }

    let mut compose = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            let values: Vec<usize> = (0..n).filter(|&c| f.m(a, b, c)).collect();
            let composable = source[a] == target[b];
            match (composable, values.len()) {
                (true, 1) => compose[a * n + b] = Some(values[0]),
                (false, 0) => {}
                (composable, count) => {
                    return Err(Frob2Error::Composability {
                        a,
                        b,
                        count,
                        expected: if composable { "composable (needs exactly 1 value)" } else { "not composable (needs none)" },
                    })
                }
            }
        }
    }

    let mut inverse = Vec::with_capacity(n);
    for a in 0..n {
        let candidates: Vec<usize> = (0..n)
            .filter(|&b| {
                let fwd = units.iter().any(|&x| f.m(a, b, x));
                let bwd = units.iter().any(|&y| f.m(b, a, y));
                fwd && bwd
            })
            .collect();
        if candidates.len() != 1 {
            return Err(Frob2Error::Inverse { elem: a, count: candidates.len() });
        }
        inverse.push(candidates[0]);
    }

    let g = Groupoid {
        objects: FinSet::new(format!("Ob({})", f.carrier.name), units.len()),
        morphisms: f.carrier.clone(),
        source,
        target,
        unit: (0..units.len()).map(|o| units[o]).collect(),
        inverse,
        compose,
    };
    check_groupoid(&g)?;
    Ok(g)
}

/// Present a groupoid as a binary structure: `M(a,b,c) ⟺ s(a)=t(b) ∧ c=a∘b`,
/// unit subset the image of `u`.
pub fn groupoid_to_frob2(g: &Groupoid) -> Frob2 {
    let n = g.n_morphisms();
    let mut f = Frob2::new_empty(g.morphisms.clone());
    for a in 0..n {
        for b in 0..n {
            if let Some(c) = g.comp(a, b) {
                f.set_m(a, b, c, true);
            }
        }
    }
    for o in 0..g.n_objects() {
        f.set_unit(g.unit[o], true);
    }
    f
}

/// The hom-pair structure on `L × R`: composition
/// `M((b,a),(b′,a′),(b″,a″)) ⟺ M_L(b′,b,b″) ∧ M_R(a,a′,a″)` with unit subset
/// `U_L × U_R`. For groupoid-presentable factors this is the presentation of
/// the product of the opposite of `L` with `R`.
pub fn pants2(left: &Frob2, right: &Frob2) -> Frob2 {
    let (nl, nr) = (left.size(), right.size());
    let carrier = FinSet::new(format!("pants({},{})", left.carrier.name, right.carrier.name), nl * nr);
    let mut p = Frob2::new_empty(carrier);
    for b in 0..nl {
        for a in 0..nr {
            for b2 in 0..nl {
                for a2 in 0..nr {
                    for b3 in 0..nl {
                        for a3 in 0..nr {
                            if left.m(b2, b, b3) && right.m(a, a2, a3) {
                                p.set_m(b * nr + a, b2 * nr + a2, b3 * nr + a3, true);
                            }
                        }
                    }
                }
            }
            if left.unit_has(b) && right.unit_has(a) {
                p.set_unit(b * nr + a, true);
            }
        }
    }
    p
}

/// Result of a completely-positive analysis of a state or relation.
#[derive(Clone, Debug)]
pub struct CpAnalysis {
    /// The comparison relation `C(a,b) ⟺ m(i(b), a) defined and in R`.
    pub c_rel: FinRel,
    /// `C` symmetric and support-reflexive (`C(a,b) ⟹ C(a,a)`).
    pub is_cp: bool,
    /// For positive instances, `g : A ⇸ X` with `g ∘ g† = C` built by the
    /// incidence-edge construction (`X` = set of C-edges, `|X| ≤ n(n+1)/2`).
    pub witness: Option<FinRel>,
}

fn cp_analysis_of(c: FinRel) -> CpAnalysis {
    let n = c.rows();
    let symmetric = c == c.dagger();
    let support_reflexive = c.pairs().iter().all(|&(a, _)| c.get(a, a));
    let is_cp = symmetric && support_reflexive;
    let witness = is_cp.then(|| {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for a in 0..n {
            for b in a..n {
                if c.get(a, b) {
                    edges.push((a, b));
                }
            }
        }
        let x = FinSet::new("edges", edges.len());
        FinRel::from_fn(c.src.clone(), Obj::plain(x), |a, e| {
            let (p, q) = edges[e];
            a == p || a == q
        })
    });
    CpAnalysis { c_rel: c, is_cp, witness }
}

/// Analyze a state `r : I ⇸ A` over a structure passing F1–F5 for complete
/// positivity. `C(a,b)` holds when `i(b) ∘ a` is defined and lands in the
/// subset presented by `r`.
pub fn cp_state(f: &Frob2, state: &FinRel) -> Result<CpAnalysis, Frob2Error> {
    if state.rows() != 1 || state.cols() != f.size() {
        return Err(Frob2Error::Shape(format!(
            "expected a state I ⇸ {}, got {} ⇸ {}",
            f.carrier, state.src, state.dst
        )));
    }
    let g = frob2_to_groupoid(f)?;
    let a_obj = Obj::plain(f.carrier.clone());
    let c = FinRel::from_fn(a_obj.clone(), a_obj, |a, b| {
        g.comp(g.inverse[b], a).map(|v| state.get(0, v)).unwrap_or(false)
    });
    Ok(cp_analysis_of(c))
}

/// Analyze a relation `r : B ⇸ A` between two structures passing F1–F5 by
/// transposing it to a state on the hom-pair structure [`pants2`]`(src, dst)`.
pub fn cp_rel(src: &Frob2, dst: &Frob2, r: &FinRel) -> Result<CpAnalysis, Frob2Error> {
    if r.rows() != src.size() || r.cols() != dst.size() {
        return Err(Frob2Error::Shape(format!(
            "expected {} ⇸ {}, got {} ⇸ {}",
            src.carrier, dst.carrier, r.src, r.dst
        )));
    }
    let pants = pants2(src, dst);
    let state = FinRel::from_fn(Obj::one(), Obj::plain(pants.carrier.clone()), |_, p| {
        r.get(p / dst.size(), p % dst.size())
    });
    cp_state(&pants, &state)
}

/// Is the subset presented by `r : B ⇸ A` a subgroupoid of the hom-pair
/// groupoid of [`pants2`]`(src, dst)` — closed under composition, inverses,
/// and the identities at its endpoints? The empty relation passes.
pub fn is_subgroupoid(src: &Frob2, dst: &Frob2, r: &FinRel) -> Result<bool, Frob2Error> {
    if r.rows() != src.size() || r.cols() != dst.size() {
        return Err(Frob2Error::Shape(format!(
            "expected {} ⇸ {}, got {} ⇸ {}",
            src.carrier, dst.carrier, r.src, r.dst
        )));
    }
    let pants = pants2(src, dst);
    let g = frob2_to_groupoid(&pants)?;
    let nd = dst.size();
    let member = |m: usize| r.get(m / nd, m % nd);
    let elems: Vec<usize> = (0..pants.size()).filter(|&m| member(m)).collect();
    for &x in &elems {
        if !member(g.unit[g.source[x]]) || !member(g.unit[g.target[x]]) || !member(g.inverse[x]) {
            return Ok(false);
        }
        for &y in &elems {
            if let Some(z) = g.comp(x, y) {
                if !member(z) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Exhaustive factorization search for `C = g ∘ g†` with codomain of size at
/// most `max_codomain`.
///
/// Every column `S` of a factoring `g` satisfies `S × S ⊆ C` (a C-clique),
/// and `g ∘ g†` depends only on the set of columns: it is `∪_S S×S`. So a
/// factorization with `k` columns exists iff some family of at most `k`
/// C-cliques covers `C` — the search below ranges over clique families and is
/// exhaustive over all relations `g` up to that reduction.
pub fn brute_force_cp(c: &FinRel, max_codomain: usize) -> bool {
    let n = c.rows();
    assert_eq!(n, c.cols(), "comparison relation must be square");
    if c.is_zero() {
        return true;
    }
    assert!(n <= 16, "brute-force search is sized for small carriers");
    let cliques: Vec<u32> = (1u32..1 << n)
        .filter(|&s| {
            (0..n).all(|a| {
                s >> a & 1 == 0 || (0..n).all(|b| s >> b & 1 == 0 || c.get(a, b))
            })
        })
        .collect();
    let target: Vec<u32> = (0..n)
        .map(|a| (0..n).filter(|&b| c.get(a, b)).fold(0u32, |acc, b| acc | 1 << b))
        .collect();

    fn covers(chosen: &[u32], target: &[u32]) -> bool {
        target.iter().enumerate().all(|(a, &row)| {
            let mut acc = 0u32;
            for &s in chosen {
                if s >> a & 1 == 1 {
                    acc |= s;
                }
            }
            acc == row
        })
    }

    fn search(cliques: &[u32], start: usize, chosen: &mut Vec<u32>, budget: usize, target: &[u32]) -> bool {
        if covers(chosen, target) {
            return true;
        }
        if budget == 0 {
            return false;
        }
        for i in start..cliques.len() {
            chosen.push(cliques[i]);
            if search(cliques, i + 1, chosen, budget - 1, target) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    search(&cliques, 0, &mut Vec::new(), max_codomain, &target)
}

/// Report of the three representability postconditions.
#[derive(Clone, Debug)]
pub struct Representability {
    /// `i : A ⇸ A ⊗ A`, relating `b` to every pair `(a,c)` with `M(a,b,c)`.
    pub i: FinRel,
    /// `i ∘ i† = id_A`.
    pub isometry: bool,
    /// `i` is a (non-unital) morphism into [`pants2`]`(f, f)`.
    pub pants_morphism: bool,
    /// `i† ∘ i` equals the canonical idempotent on `A ⊗ A` induced by the
    /// unit-expanded ternary relation.
    pub recovers_idempotent: bool,
}

/// Embed a special symmetric structure into its hom-pair structure.
///
/// Preconditions: F4 and symmetry of the involution. The embedding uses the
/// bending `i(b) = {(a, c) | M(a,b,c)}` (pair up an element with each of its
/// left translates).
pub fn representability(f: &Frob2) -> Result<Representability, Frob2Error> {
    let report = check_frob2(f);
    if !report.f4_special || !f.is_symmetric() {
        return Err(Frob2Error::Precondition(
            "representability requires a special structure with symmetric involution".into(),
        ));
    }
    let n = f.size();
    let a_obj = Obj::plain(f.carrier.clone());
    let i = FinRel::from_fn(a_obj.clone(), a_obj.tensor(&a_obj), |b, pair| {
        f.m(pair / n, b, pair % n)
    });

    let isometry = i.compose(&i.dagger()).expect("shapes agree") == FinRel::identity(a_obj.clone());

    let pants = pants2(f, f);
    let morphism = frob2_morphism_check(&i, f, &pants, false);
    let pants_morphism = morphism.preserves_mult && morphism.preserves_involution;

    // Canonical idempotent on A⊗A: (y,z) ~ (x,u) iff the unit-expanded
    // ternary relation Λ(x,y,z,u) holds, Λ(x,y,z,u) = ∃y′,w. ι(y,y′) ∧
    // M(x,y′,w) ∧ M(w,z,u).
    let iota = f.involution();
    let lam = |x: usize, y: usize, z: usize, u: usize| {
        (0..n).any(|y2| iota.get(y, y2) && (0..n).any(|w| f.m(x, y2, w) && f.m(w, z, u)))
    };
    let idem = FinRel::from_fn(a_obj.tensor(&a_obj), a_obj.tensor(&a_obj), |p, q| {
        lam(q / n, p / n, p % n, q % n)
    });
    let recovers_idempotent = i.dagger().compose(&i).expect("shapes agree") == idem;

    Ok(Representability { i, isometry, pants_morphism, recovers_idempotent })
}

/// Morphism flags for `rel : src ⇸ dst`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    /// `μ ; f = (f ⊗ f) ; μ′`.
    pub preserves_mult: bool,
    /// `f ; ι′ = ι ; f`.
    pub preserves_involution: bool,
    /// `η ; f = η′` — only evaluated when requested.
    pub preserves_unit: Option<bool>,
}

impl MorphismReport {
    pub fn holds(&self) -> bool {
        self.preserves_mult && self.preserves_involution && self.preserves_unit.unwrap_or(true)
    }
}

/// Check the morphism equations for `rel : src ⇸ dst`; pass `unital = true`
/// to also require unit preservation.
pub fn frob2_morphism_check(rel: &FinRel, src: &Frob2, dst: &Frob2, unital: bool) -> MorphismReport {
    let mu = src.mult_rel();
    let mu2 = dst.mult_rel();
    let lhs = mu.compose(rel).expect("shapes agree");
    let rhs = rel.tensor(rel).compose(&mu2).expect("shapes agree");
    let preserves_mult = lhs == rhs;

    let iota = src.involution();
    let iota2 = dst.involution();
    let preserves_involution =
        rel.compose(&iota2).expect("shapes agree") == iota.compose(rel).expect("shapes agree");

    let preserves_unit = unital.then(|| {
        src.unit_state().compose(rel).expect("shapes agree") == dst.unit_state()
    });

    MorphismReport { preserves_mult, preserves_involution, preserves_unit }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod(n: usize) -> Frob2 {
        Frob2::from_op(FinSet::new(format!("Z{n}"), n), move |a, b| (a + b) % n, &[0])
    }

    /// Indiscrete groupoid on `k` objects: morphisms are ordered pairs
    /// (to, from), composed like matrix units.
    fn pair_groupoid(k: usize) -> Groupoid {
        let n = k * k;
        let mut compose = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                let (ta, sa) = (a / k, a % k);
                let (tb, sb) = (b / k, b % k);
                if sa == tb {
                    compose[a * n + b] = Some(ta * k + sb);
                }
            }
        }
        Groupoid {
            objects: FinSet::new("K", k),
            morphisms: FinSet::new("Pair", n),
            source: (0..n).map(|a| a % k).collect(),
            target: (0..n).map(|a| a / k).collect(),
            unit: (0..k).map(|o| o * k + o).collect(),
            inverse: (0..n).map(|a| (a % k) * k + a / k).collect(),
            compose,
        }
    }

    #[test]
    fn cyclic_groups_pass_all_axioms() {
        for n in 1..=5 {
            let f = zmod(n);
            let report = check_frob2(&f);
            assert!(report.all(), "Z{n}: {report}");
            assert!(f.is_symmetric());
        }
    }

    #[test]
    fn axiom_flags_detect_failures() {
        // Unit missing.
        let mut f = zmod(3);
        f.set_unit(0, false);
        let report = check_frob2(&f);
        assert!(!report.f1_left_unit && !report.f2_right_unit && report.f3_associative);

        // A non-associative magma: subtraction.
        let f = Frob2::from_op(FinSet::new("S", 3), |a, b| (3 + a - b) % 3, &[0]);
        assert!(!check_frob2(&f).f3_associative);

        // Doubling the table breaks speciality.
        let mut f = zmod(2);
        f.set_m(0, 0, 1, true);
        f.set_m(0, 1, 0, true);
        f.set_m(1, 0, 0, true);
        f.set_m(1, 1, 1, true);
        assert!(!check_frob2(&f).f4_special);
    }

    #[test]
    fn groupoid_roundtrip_through_tables() {
        let f = zmod(4);
        let g = frob2_to_groupoid(&f).unwrap();
        assert_eq!(g.n_objects(), 1);
        assert_eq!(g.inverse, vec![0, 3, 2, 1]);
        assert_eq!(groupoid_to_frob2(&g), f);

        let pg = pair_groupoid(2);
        check_groupoid(&pg).unwrap();
        let back = frob2_to_groupoid(&groupoid_to_frob2(&pg)).unwrap();
        assert_eq!(back.canonicalize(), pg.canonicalize());
    }

    #[test]
    fn extraction_refuses_broken_tables() {
        // No unit at all: source units cannot be found.
        let f = Frob2::from_op(FinSet::new("S", 2), |a, b| (a + b) % 2, &[]);
        assert!(matches!(frob2_to_groupoid(&f), Err(Frob2Error::SourceUnit { .. })));

        // Multi-valued multiplication.
        let mut f = zmod(2);
        f.set_m(1, 1, 1, true);
        assert!(frob2_to_groupoid(&f).is_err());
    }

    #[test]
    fn involution_is_the_inverse_graph() {
        let f = zmod(3);
        let iota = f.involution();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(iota.get(a, b), (a + b) % 3 == 0);
            }
        }
    }

    #[test]
    fn pants_of_groups_is_a_frobenius_structure() {
        let p = pants2(&zmod(2), &zmod(3));
        assert!(check_frob2(&p).all());
        // One object on each side ⟹ the hom-pair groupoid is a group of
        // order 6.
        let g = frob2_to_groupoid(&p).unwrap();
        assert_eq!(g.n_objects(), 1);
    }

    #[test]
    fn cp_state_on_z4_subsets() {
        let f = zmod(4);
        let state = |elems: &[usize]| {
            FinRel::from_fn(Obj::one(), Obj::plain(f.carrier.clone()), |_, x| elems.contains(&x))
        };

        // Subgroup {0,2}: CP, and the witness factors C exactly.
        let a = cp_state(&f, &state(&[0, 2])).unwrap();
        assert!(a.is_cp);
        let g = a.witness.unwrap();
        assert_eq!(g.compose(&g.dagger()).unwrap(), a.c_rel);

        // {0,1,3}: symmetric (it is closed under negation) and contains 0,
        // hence CP — yet it is no subgroup.
        let a = cp_state(&f, &state(&[0, 1, 3])).unwrap();
        assert!(a.is_cp);
        let g = a.witness.unwrap();
        assert_eq!(g.compose(&g.dagger()).unwrap(), a.c_rel);
        assert!(g.cols() <= 4 * 5 / 2);

        // {1}: C is not symmetric.
        let a = cp_state(&f, &state(&[1])).unwrap();
        assert!(!a.is_cp && a.witness.is_none());
    }

    #[test]
    fn cp_rel_and_subgroupoid_flags() {
        let one = zmod(1);
        let z4 = zmod(4);
        let r = |elems: &[usize]| {
            FinRel::from_fn(Obj::plain(one.carrier.clone()), Obj::plain(z4.carrier.clone()), |_, x| {
                elems.contains(&x)
            })
        };

        // The quotient-graph of Z4 → Z1 transposes to all of Z4: CP and a
        // subgroupoid.
        let full = r(&[0, 1, 2, 3]);
        assert!(cp_rel(&one, &z4, &full).unwrap().is_cp);
        assert!(is_subgroupoid(&one, &z4, &full).unwrap());

        // {0,1,3}: CP but not closed under composition (1+1=2).
        let gap = r(&[0, 1, 3]);
        assert!(cp_rel(&one, &z4, &gap).unwrap().is_cp);
        assert!(!is_subgroupoid(&one, &z4, &gap).unwrap());

        // Empty relation: vacuously a subgroupoid.
        assert!(is_subgroupoid(&one, &z4, &r(&[])).unwrap());
    }

    #[test]
    fn brute_force_cp_agrees_on_z4() {
        let f = zmod(4);
        for mask in 0u32..16 {
            let state = FinRel::from_fn(Obj::one(), Obj::plain(f.carrier.clone()), |_, x| {
                mask >> x & 1 == 1
            });
            let a = cp_state(&f, &state).unwrap();
            assert_eq!(brute_force_cp(&a.c_rel, 10), a.is_cp, "mask {mask:b}");
        }
    }

    #[test]
    #[allow(clippy::identity_op)] // spelled-out cube indices
    fn representability_postconditions() {
        for n in 1..=4 {
            let rep = representability(&zmod(n)).unwrap();
            assert!(rep.isometry, "Z{n} isometry");
            assert!(rep.pants_morphism, "Z{n} pants morphism");
            assert!(rep.recovers_idempotent, "Z{n} idempotent");
        }

        // Z2: each element has exactly two factorizations, so i relates each
        // element to two pairs.
        let rep = representability(&zmod(2)).unwrap();
        assert_eq!(rep.i.count_pairs(), 4);

        // The two-element discrete groupoid: i is the diagonal embedding.
        let d2 = Frob2::from_tables(
            FinSet::new("D2", 2),
            {
                let mut m = vec![false; 8];
                m[0] = true; // (0,0,0)
                m[(1 * 2 + 1) * 2 + 1] = true; // (1,1,1)
                m
            },
            vec![true, true],
        );
        let rep = representability(&d2).unwrap();
        assert_eq!(rep.i.pairs(), vec![(0, 0), (1, 3)]);
        assert!(rep.isometry && rep.pants_morphism && rep.recovers_idempotent);
    }

    #[test]
    fn morphism_check_on_quotient_map() {
        let z4 = zmod(4);
        let z2 = zmod(2);
        let q = FinRel::from_fn(Obj::plain(z4.carrier.clone()), Obj::plain(z2.carrier.clone()), |a, b| {
            a % 2 == b
        });
        let report = frob2_morphism_check(&q, &z4, &z2, true);
        assert!(report.holds());

        // The non-homomorphic bijection swapping 0 and 1 on Z2.
        let bad = FinRel::from_fn(Obj::plain(z2.carrier.clone()), Obj::plain(z2.carrier.clone()), |a, b| {
            a != b
        });
        let report = frob2_morphism_check(&bad, &z2, &z2, true);
        assert!(!report.preserves_mult);
        assert_eq!(report.preserves_unit, Some(false));
    }
}
