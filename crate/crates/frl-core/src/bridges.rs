//! Constructions connecting binary and ternary structures.
//!
//! A unital ternary structure is the same thing as a symmetric binary
//! Frobenius structure ([`two_to_three`] / [`three_to_two`], exact inverses).
//! Without a unit, two constructions recover binary data: splitting the left
//! pair idempotent ([`split_construction`]) and the enveloping structure
//! ([`envelope`]), which is universal among "block" embeddings and comes with
//! a pointwise factorization ([`universal_factorization`]).

use std::collections::BTreeSet;

use crate::finrel::{dagger_split, FinRel, FinSet, Obj};
use crate::frob2::{check_frob2, frob2_morphism_check, Frob2};
use crate::frob3::{frob3_morphism_check, sub3structure_check, Frob3};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BridgeError {
    #[error("{op}: precondition failed: {reason}")]
    Precondition { op: &'static str, reason: String },
    /// A quotient construction produced representative-dependent output.
    /// This cannot happen on inputs satisfying the preconditions; it guards
    /// against silently wrong tables on malformed ones.
    #[error("{op}: construction invariant violated: {reason}")]
    Internal { op: &'static str, reason: String },
}

fn precondition(op: &'static str, reason: impl Into<String>) -> BridgeError {
    BridgeError::Precondition { op, reason: reason.into() }
}

fn internal(op: &'static str, reason: impl Into<String>) -> BridgeError {
    BridgeError::Internal { op, reason: reason.into() }
}

/// Expand a symmetric binary Frobenius structure into the ternary structure
/// `Λ(x,y,z,u) ⟺ ∃y′,w. ι(y,y′) ∧ M(x,y′,w) ∧ M(w,z,u)` — "x ∘ y⁻¹ ∘ z"
/// read relationally.
pub fn two_to_three(f: &Frob2) -> Result<Frob3, BridgeError> {
    const OP: &str = "two_to_three";
    let report = check_frob2(f);
    if !report.frobenius_non_special() {
        return Err(precondition(OP, format!("binary axioms failed: {report}")));
    }
    if !f.is_symmetric() {
        return Err(precondition(OP, "involution is not symmetric"));
    }
    let n = f.size();
    let iota = f.involution();
    let mut t = Frob3::new_empty(f.carrier.clone());
    for x in 0..n {
        for y in 0..n {
            // Everything reachable as x ∘ y⁻¹.
            let mut mid = vec![false; n];
            for y2 in iota.row_elements(y) {
                for (w, hit) in mid.iter_mut().enumerate() {
                    *hit |= f.m(x, y2, w);
                }
            }
            for z in 0..n {
                for u in 0..n {
                    if (0..n).any(|w| mid[w] && f.m(w, z, u)) {
                        t.set_lam(x, y, z, u, true);
                    }
                }
            }
        }
    }
    Ok(t)
}

/// Contract a unital ternary structure back to a binary one by filling the
/// middle argument with the unit subset: `M(a,b,c) ⟺ ∃e∈E. Λ(a,e,b,c)`.
pub fn three_to_two(t: &Frob3, e: &[usize]) -> Result<Frob2, BridgeError> {
    const OP: &str = "three_to_two";
    if !t.is_unital(e) {
        return Err(precondition(OP, format!("{e:?} is not a unit system")));
    }
    let n = t.size();
    let mut f = Frob2::new_empty(t.carrier.clone());
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if e.iter().any(|&u| t.lam(a, u, b, c)) {
                    f.set_m(a, b, c, true);
                }
            }
        }
    }
    for &u in e {
        f.set_unit(u, true);
    }
    Ok(f)
}

/// The four conditions that coincide for unital ternary structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// The contracted binary structure is special.
    pub special: bool,
    pub normal: bool,
    pub left_idempotent: bool,
    pub right_idempotent: bool,
}

impl EquivalenceReport {
    /// All four flags agree (the expected state on any unital input).
    pub fn agree(&self) -> bool {
        self.special == self.normal
            && self.normal == self.left_idempotent
            && self.left_idempotent == self.right_idempotent
    }
}

/// Evaluate the four equivalent conditions on a unital ternary structure.
pub fn special_normal_equivalences(t: &Frob3, e: &[usize]) -> Result<EquivalenceReport, BridgeError> {
    let two = three_to_two(t, e)?;
    Ok(EquivalenceReport {
        special: check_frob2(&two).f4_special,
        normal: t.is_normal(),
        left_idempotent: t.is_left_idempotent(),
        right_idempotent: t.is_right_idempotent(),
    })
}

/// Outcome of splitting the left pair idempotent of a ternary structure.
#[derive(Clone, Debug)]
pub struct SplitResult {
    /// Each class lists its member pairs as codes `y·n + z`.
    pub classes: Vec<Vec<usize>>,
    pub class_set: FinSet,
    /// `i : L ⇸ A⊗A` relating each class to its members; satisfies
    /// `i ; i† = id_L` and `i† ; i = l`.
    pub isometry: FinRel,
    /// The induced binary structure on the classes.
    pub structure: Frob2,
}

/// Split the left pair relation `l` of a left idempotent, dagger symmetric
/// ternary structure. Classes compose by chaining representatives through a
/// shared middle coordinate — `[y,m] ∘ [m,z] = [y,z]` — and the unit subset
/// consists of the classes containing a diagonal pair.
pub fn split_construction(t: &Frob3) -> Result<SplitResult, BridgeError> {
    const OP: &str = "split_construction";
    if !t.is_left_idempotent() {
        return Err(precondition(OP, "left pair relation is not idempotent"));
    }
    if !t.is_dagger_symmetric() {
        return Err(precondition(OP, "structure is not dagger symmetric"));
    }
    let n = t.size();
    let split = dagger_split(&t.l_rel()).map_err(|e| internal(OP, e.to_string()))?;
    let class_set = FinSet::new(format!("L({})", t.carrier.name), split.classes.len());

    let mut class_of = vec![None; n * n];
    for (ci, members) in split.classes.iter().enumerate() {
        for &pc in members {
            class_of[pc] = Some(ci);
        }
    }

    let mut structure = Frob2::new_empty(class_set.clone());
    for (pi, p) in split.classes.iter().enumerate() {
        for (qi, q) in split.classes.iter().enumerate() {
            for &pc in p {
                let (y, m) = (pc / n, pc % n);
                for &qc in q {
                    if qc / n != m {
                        continue;
                    }
                    if let Some(si) = class_of[y * n + (qc % n)] {
                        structure.set_m(pi, qi, si, true);
                    }
                }
            }
        }
    }
    for (ci, members) in split.classes.iter().enumerate() {
        if members.iter().any(|&pc| pc / n == pc % n) {
            structure.set_unit(ci, true);
        }
    }

    // Rebuild the isometry against the renamed class carrier.
    let mut isometry = FinRel::zero(Obj::plain(class_set.clone()), Obj::power(&t.carrier, 2));
    for (ci, members) in split.classes.iter().enumerate() {
        for &pc in members {
            isometry.set(ci, pc, true);
        }
    }

    Ok(SplitResult { classes: split.classes, class_set, isometry, structure })
}

/// Search for a table isomorphism: a permutation `π` of the carrier with
/// `M(a,b,c) ⟺ M′(πa,πb,πc)` and `U(a) ⟺ U′(πa)`. Depth-first with
/// incidence-profile pruning; intended for small carriers.
pub fn frob2_isomorphic(a: &Frob2, b: &Frob2) -> Option<Vec<usize>> {
    let n = a.size();
    if b.size() != n || a.unit_elems().len() != b.unit_elems().len() {
        return None;
    }

    fn profile(f: &Frob2, x: usize) -> (bool, usize, usize, usize) {
        let n = f.size();
        let mut counts = (f.unit_has(x), 0, 0, 0);
        for i in 0..n {
            for j in 0..n {
                counts.1 += usize::from(f.m(x, i, j));
                counts.2 += usize::from(f.m(i, x, j));
                counts.3 += usize::from(f.m(i, j, x));
            }
        }
        counts
    }
    let pa: Vec<_> = (0..n).map(|x| profile(a, x)).collect();
    let pb: Vec<_> = (0..n).map(|x| profile(b, x)).collect();

    fn dfs(
        a: &Frob2,
        b: &Frob2,
        pa: &[(bool, usize, usize, usize)],
        pb: &[(bool, usize, usize, usize)],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let x = image.len();
        if x == a.size() {
            return true;
        }
        'cand: for y in 0..a.size() {
            if used[y] || pa[x] != pb[y] {
                continue;
            }
            image.push(y);
            // Check every triple whose entries are all assigned and that
            // mentions the new element.
            for i in 0..=x {
                for j in 0..=x {
                    for k in 0..=x {
                        if (i == x || j == x || k == x)
                            && a.m(i, j, k) != b.m(image[i], image[j], image[k])
                        {
                            image.pop();
                            continue 'cand;
                        }
                    }
                }
            }
            used[y] = true;
            if dfs(a, b, pa, pb, image, used) {
                return true;
            }
            used[y] = false;
            image.pop();
        }
        false
    }

    let mut image = Vec::with_capacity(n);
    let mut used = vec![false; n];
    dfs(a, b, &pa, &pb, &mut image, &mut used).then_some(image)
}

/// Which block of the envelope carrier an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvBlock {
    /// A class of the left pair relation.
    LeftClasses,
    /// A class of the right pair relation.
    RightClasses,
    /// The reversed copy of the base carrier (`A⁻`).
    Dual,
    /// The base carrier itself (`A⁺`), the image of `kappa`.
    Base,
}

/// The enveloping binary structure of a ternary structure, on the carrier
/// `E = Q_l ⊔ Q_r ⊔ A⁻ ⊔ A⁺`.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub structure: Frob2,
    /// `κ : A ⇸ E`, the isometry onto the `A⁺` block.
    pub kappa: FinRel,
    /// The ternary structure the envelope was built from.
    pub base: Frob3,
    /// Classes of the left pair relation, as pair codes `y·n + z`.
    pub ql_classes: Vec<Vec<usize>>,
    /// Classes of the right pair relation, as pair codes `x·n + y`.
    pub qr_classes: Vec<Vec<usize>>,
}

impl Envelope {
    pub fn size(&self) -> usize {
        self.structure.size()
    }

    /// Block offsets `[Q_l, Q_r, A⁻, A⁺]` into the envelope carrier.
    pub fn offsets(&self) -> [usize; 4] {
        let (ql, qr) = (self.ql_classes.len(), self.qr_classes.len());
        [0, ql, ql + qr, ql + qr + self.base.size()]
    }

    /// The block an envelope element belongs to, with its in-block index.
    pub fn block_of(&self, e: usize) -> (EnvBlock, usize) {
        let [_, o_qr, o_an, o_ap] = self.offsets();
        if e < o_qr {
            (EnvBlock::LeftClasses, e)
        } else if e < o_an {
            (EnvBlock::RightClasses, e - o_qr)
        } else if e < o_ap {
            (EnvBlock::Dual, e - o_an)
        } else {
            (EnvBlock::Base, e - o_ap)
        }
    }
}

/// Evaluate one table entry on quotient inputs: compute the result set per
/// choice of representatives, insist the choice does not matter, and return
/// the common value.
fn well_defined_entry(
    label: &str,
    reps_left: &[usize],
    reps_right: &[usize],
    mut result: impl FnMut(usize, usize) -> BTreeSet<usize>,
) -> Result<BTreeSet<usize>, BridgeError> {
    let mut agreed: Option<BTreeSet<usize>> = None;
    for &a in reps_left {
        for &b in reps_right {
            let out = result(a, b);
            match &agreed {
                None => agreed = Some(out),
                Some(prev) if *prev != out => {
                    return Err(internal(
                        "envelope",
                        format!("table entry {label} depends on the chosen representatives"),
                    ));
                }
                Some(_) => {}
            }
        }
    }
    Ok(agreed.unwrap_or_default())
}

/// Build the enveloping binary structure of a normal, dagger symmetric,
/// associative ternary structure.
///
/// The carrier is `Q_l ⊔ Q_r ⊔ A⁻ ⊔ A⁺` where `Q_l`/`Q_r` are the classes of
/// the left/right pair relations. The multiplication is the union of the
/// eight block entries below (every other block pair is empty), and the unit
/// subset consists of the classes containing a diagonal pair:
///
/// | left  | right | result | witness                                     |
/// |-------|-------|--------|---------------------------------------------|
/// | `Q_l` | `Q_l` | `Q_l`  | `(b,c)·(d,e) ∋ (b,w)` with `Λ(c,d,e,w)`     |
/// | `Q_r` | `Q_r` | `Q_r`  | `(a,b)·(c,d) ∋ (w,d)` with `Λ(a,b,c,w)`     |
/// | `A⁺`  | `Q_l` | `A⁺`   | `a·(y,z) ∋ b` with `Λ(a,y,z,b)`             |
/// | `Q_r` | `A⁺`  | `A⁺`   | `(x,y)·c ∋ b` with `Λ(x,y,c,b)`             |
/// | `Q_l` | `A⁻`  | `A⁻`   | `(y,z)·a ∋ w` with `Λ(a,z,y,w)`             |
/// | `A⁻`  | `Q_r` | `A⁻`   | `a·(c,d) ∋ w` with `Λ(d,c,a,w)`             |
/// | `A⁻`  | `A⁺`  | `Q_l`  | `a·b ∋ class of (a,b)` when it exists       |
/// | `A⁺`  | `A⁻`  | `Q_r`  | `a·b ∋ class of (a,b)` when it exists       |
pub fn envelope(t: &Frob3) -> Result<Envelope, BridgeError> {
    const OP: &str = "envelope";
    let mut missing = Vec::new();
    if !t.is_normal() {
        missing.push("normal");
    }
    if !t.is_dagger_symmetric() {
        missing.push("dagger symmetric");
    }
    if !t.is_associative() {
        missing.push("associative");
    }
    if !missing.is_empty() {
        return Err(precondition(OP, format!("structure is not {}", missing.join(", "))));
    }

    let n = t.size();
    let split_l = dagger_split(&t.l_rel()).map_err(|e| internal(OP, e.to_string()))?;
    let split_r = dagger_split(&t.r_rel()).map_err(|e| internal(OP, e.to_string()))?;
    let (ql, qr) = (split_l.classes.len(), split_r.classes.len());
    let (o_ql, o_qr, o_an, o_ap) = (0, ql, ql + qr, ql + qr + n);

    let mut class_l = vec![None; n * n];
    for (ci, members) in split_l.classes.iter().enumerate() {
        for &pc in members {
            class_l[pc] = Some(ci);
        }
    }
    let mut class_r = vec![None; n * n];
    for (ci, members) in split_r.classes.iter().enumerate() {
        for &pc in members {
            class_r[pc] = Some(ci);
        }
    }

    let e_set = FinSet::new(format!("E({})", t.carrier.name), ql + qr + 2 * n);
    let mut m = Frob2::new_empty(e_set.clone());

    for (pi, p) in split_l.classes.iter().enumerate() {
        for (qi, q) in split_l.classes.iter().enumerate() {
            let out = well_defined_entry("(L,L)", p, q, |pc, qc| {
                let (b, c) = (pc / n, pc % n);
                let (d, e) = (qc / n, qc % n);
                (0..n)
                    .filter(|&w| t.lam(c, d, e, w))
                    .filter_map(|w| class_l[b * n + w])
                    .collect()
            })?;
            for s in out {
                m.set_m(o_ql + pi, o_ql + qi, o_ql + s, true);
            }
        }
    }

    for (pi, p) in split_r.classes.iter().enumerate() {
        for (qi, q) in split_r.classes.iter().enumerate() {
            let out = well_defined_entry("(R,R)", p, q, |pc, qc| {
                let (a, b) = (pc / n, pc % n);
                let (c, d) = (qc / n, qc % n);
                (0..n)
                    .filter(|&w| t.lam(a, b, c, w))
                    .filter_map(|w| class_r[w * n + d])
                    .collect()
            })?;
            for s in out {
                m.set_m(o_qr + pi, o_qr + qi, o_qr + s, true);
            }
        }
    }

    for a in 0..n {
        for (qi, q) in split_l.classes.iter().enumerate() {
            let out = well_defined_entry("(A⁺,L)", &[a], q, |a, qc| {
                let (y, z) = (qc / n, qc % n);
                (0..n).filter(|&b| t.lam(a, y, z, b)).collect()
            })?;
            for b in out {
                m.set_m(o_ap + a, o_ql + qi, o_ap + b, true);
            }
        }
    }

    for (qi, q) in split_r.classes.iter().enumerate() {
        for c in 0..n {
            let out = well_defined_entry("(R,A⁺)", q, &[c], |qc, c| {
                let (x, y) = (qc / n, qc % n);
                (0..n).filter(|&b| t.lam(x, y, c, b)).collect()
            })?;
            for b in out {
                m.set_m(o_qr + qi, o_ap + c, o_ap + b, true);
            }
        }
    }

    for (pi, p) in split_l.classes.iter().enumerate() {
        for a in 0..n {
            let out = well_defined_entry("(L,A⁻)", p, &[a], |pc, a| {
                let (y, z) = (pc / n, pc % n);
                (0..n).filter(|&w| t.lam(a, z, y, w)).collect()
            })?;
            for w in out {
                m.set_m(o_ql + pi, o_an + a, o_an + w, true);
            }
        }
    }

    for a in 0..n {
        for (qi, q) in split_r.classes.iter().enumerate() {
            let out = well_defined_entry("(A⁻,R)", &[a], q, |a, qc| {
                let (c, d) = (qc / n, qc % n);
                (0..n).filter(|&w| t.lam(d, c, a, w)).collect()
            })?;
            for w in out {
                m.set_m(o_an + a, o_qr + qi, o_an + w, true);
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            if let Some(li) = class_l[a * n + b] {
                m.set_m(o_an + a, o_ap + b, o_ql + li, true);
            }
            if let Some(ri) = class_r[a * n + b] {
                m.set_m(o_ap + a, o_an + b, o_qr + ri, true);
            }
        }
    }

    for (ci, members) in split_l.classes.iter().enumerate() {
        if members.iter().any(|&pc| pc / n == pc % n) {
            m.set_unit(o_ql + ci, true);
        }
    }
    for (ci, members) in split_r.classes.iter().enumerate() {
        if members.iter().any(|&pc| pc / n == pc % n) {
            m.set_unit(o_qr + ci, true);
        }
    }

    let kappa = FinRel::from_fn(Obj::plain(t.carrier.clone()), Obj::plain(e_set), |a, e| {
        e == o_ap + a
    });

    Ok(Envelope {
        structure: m,
        kappa,
        base: t.clone(),
        ql_classes: split_l.classes,
        qr_classes: split_r.classes,
    })
}

/// A binary structure with a chosen block `i : B ⇸ C`: the block is an
/// isometric sub-ternary-structure whose elements never multiply into a
/// defined product.
#[derive(Clone, Debug)]
pub struct BinSubObject {
    pub structure: Frob2,
    /// `i : B ⇸ C`.
    pub inclusion: FinRel,
    /// The ternary structure on `B` cut out by the inclusion.
    pub sub3: Frob3,
}

/// Validate the three block conditions on a [`BinSubObject`].
pub fn binsub_check(target: &BinSubObject) -> Result<(), BridgeError> {
    const OP: &str = "binsub_check";
    let three = two_to_three(&target.structure)?;
    match sub3structure_check(&target.inclusion, &target.sub3, &three) {
        Ok(rep) if rep.holds() => {}
        Ok(rep) => {
            return Err(precondition(
                OP,
                format!(
                    "inclusion is not a sub-structure embedding (isometry: {}, morphism: {})",
                    rep.isometry, rep.morphism
                ),
            ))
        }
        Err(e) => return Err(precondition(OP, e.to_string())),
    }
    if !target.sub3.is_normal() {
        return Err(precondition(OP, "block ternary structure is not normal"));
    }
    let ii = target.inclusion.tensor(&target.inclusion);
    let products = ii.compose(&target.structure.mult_rel()).expect("shapes agree");
    if !products.is_zero() {
        return Err(precondition(OP, "two block elements have a defined product"));
    }
    Ok(())
}

/// Factor a ternary morphism `h : base(env) ⇸ target.sub3` through the
/// envelope: the returned `f : E ⇸ C` is the unique binary morphism carrying
/// the `A⁺` block along `g = h ; i` and determined blockwise by it —
///
/// * on `A⁺`: `g`,
/// * on `A⁻`: `g ; ι`,
/// * on a `Q_l` class `[y,z]`: `μ(ι(g y), g z)`,
/// * on a `Q_r` class `[x,y]`: `μ(g x, ι(g y))`.
///
/// The blocks are forced by morphism-preservation applied to the envelope's
/// own table, which is what makes `f` unique; the theorem-level equations
/// (`f` is a binary morphism, stays on the block, and restricts to `h`) are
/// re-verified before returning.
pub fn universal_factorization(
    env: &Envelope,
    target: &BinSubObject,
    h: &FinRel,
) -> Result<FinRel, BridgeError> {
    const OP: &str = "universal_factorization";
    binsub_check(target)?;
    match frob3_morphism_check(h, &env.base, &target.sub3) {
        Ok(true) => {}
        Ok(false) => {
            return Err(precondition(OP, "h is not a ternary morphism into the block structure"))
        }
        Err(e) => return Err(precondition(OP, e.to_string())),
    }

    let g = h.compose(&target.inclusion).map_err(|e| precondition(OP, e.to_string()))?;
    let iota = target.structure.involution();
    let g_star = g.compose(&iota).expect("shapes agree");
    let n = env.base.size();
    let nc = target.structure.size();
    let [o_ql, o_qr, o_an, o_ap] = env.offsets();

    let mut f = FinRel::zero(
        Obj::plain(env.structure.carrier.clone()),
        Obj::plain(target.structure.carrier.clone()),
    );
    for a in 0..n {
        for c in 0..nc {
            if g.get(a, c) {
                f.set(o_ap + a, c, true);
            }
            if g_star.get(a, c) {
                f.set(o_an + a, c, true);
            }
        }
    }
    for (li, members) in env.ql_classes.iter().enumerate() {
        for &pc in members {
            let (y, z) = (pc / n, pc % n);
            for cy in g_star.row_elements(y) {
                for cz in g.row_elements(z) {
                    for c in 0..nc {
                        if target.structure.m(cy, cz, c) {
                            f.set(o_ql + li, c, true);
                        }
                    }
                }
            }
        }
    }
    for (ri, members) in env.qr_classes.iter().enumerate() {
        for &pc in members {
            let (x, y) = (pc / n, pc % n);
            for cx in g.row_elements(x) {
                for cy in g_star.row_elements(y) {
                    for c in 0..nc {
                        if target.structure.m(cx, cy, c) {
                            f.set(o_qr + ri, c, true);
                        }
                    }
                }
            }
        }
    }

    let morphism = frob2_morphism_check(&f, &env.structure, &target.structure, false);
    if !morphism.holds() {
        return Err(internal(OP, "factorization is not a binary morphism"));
    }
    let i = &target.inclusion;
    let kf = env.kappa.compose(&f).expect("shapes agree");
    let reflected = kf.compose(&i.dagger()).expect("shapes agree");
    if kf != reflected.compose(i).expect("shapes agree") {
        return Err(internal(OP, "factorization leaves the block"));
    }
    if reflected != *h {
        return Err(internal(OP, "factorization does not restrict to h"));
    }
    Ok(f)
}

/// Transport a ternary morphism along two splittings:
/// `i_src ; (f ⊗ f) ; i_dst†`, a binary morphism between the split
/// structures. Expects `f` to be a ternary morphism between the structures
/// the splittings came from.
pub fn l_on_morphisms(f: &FinRel, src: &SplitResult, dst: &SplitResult) -> Result<FinRel, BridgeError> {
    let ff = f.tensor(f);
    src.isometry
        .compose(&ff)
        .and_then(|x| x.compose(&dst.isometry.dagger()))
        .map_err(|e| precondition("l_on_morphisms", e.to_string()))
}
