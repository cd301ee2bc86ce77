//! Enumeration oracles over small carriers, the standard example suite,
//! roundtrip sweeps, and counterexample searches.
//!
//! Counts are labeled-structure counts — two survivors are distinct whenever
//! their tables differ, with no isomorphism quotient — because the
//! correspondence theorems are stated carrier by carrier, so equal labeled
//! counts together with the converter bijections are exactly what they
//! predict. Every enumeration records the size of the candidate space it
//! ranged over and visits candidates in a fixed order, making survivor lists
//! reproducible run to run.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bridges::{three_to_two, two_to_three};
use crate::finrel::{FinRel, FinSet, Obj};
use crate::frob2::{
    check_frob2, check_groupoid, cp_state, frob2_to_groupoid, groupoid_to_frob2, is_subgroupoid,
    Frob2, Frob2Report, Groupoid,
};
use crate::frob3::{
    check_connector, check_frob3, connector_to_frob3, frob3_to_connector, Connector, Frob3,
};

#[derive(Debug, Error)]
pub enum SearchError {
    /// The requested carrier size exceeds what the selected strategy covers.
    #[error("{kind} enumeration at carrier size {size}: {reason}")]
    TooLarge { kind: &'static str, size: usize, reason: String },
}

/// Outcome of one enumeration: the survivors, the candidate space they were
/// drawn from, and how long the scan took.
#[derive(Clone, Debug)]
pub struct EnumReport<T> {
    /// What was enumerated and with which strategy: `frob2/raw`,
    /// `frob2/partial`, `groupoid`, `frob3/raw`, `frob3/pruned`, `connector`.
    pub kind: String,
    pub carrier_size: usize,
    /// How many candidates the strategy ranges over before any filtering.
    pub candidate_space: u128,
    /// Survivors in candidate order; each passes the relevant checker.
    pub survivors: Vec<T>,
    /// Always `survivors.len()`, recorded separately for report plumbing.
    pub count: usize,
    pub wall_time: Duration,
}

impl<T> EnumReport<T> {
    fn finish(
        kind: &str,
        carrier_size: usize,
        candidate_space: u128,
        survivors: Vec<T>,
        started: Instant,
    ) -> EnumReport<T> {
        let count = survivors.len();
        EnumReport {
            kind: kind.into(),
            carrier_size,
            candidate_space,
            survivors,
            count,
            wall_time: started.elapsed(),
        }
    }
}

impl<T> fmt::Display for EnumReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[n={}]: {} survivor(s) out of {} candidates in {:.1?}",
            self.kind, self.carrier_size, self.count, self.candidate_space, self.wall_time
        )
    }
}

// ---------------------------------------------------------------------------
// Binary structures.

/// Optional axioms demanded by [`enumerate_frob2`]. The unit and
/// associativity laws F1–F3 are always demanded; `special` adds F4 and
/// `dagger` adds F5. (The comultiplication side of a candidate is the
/// converse of its multiplication by construction, so the Frobenius law F5
/// is precisely what makes the pair a dagger Frobenius structure.)
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frob2Require {
    pub special: bool,
    pub dagger: bool,
}

impl Default for Frob2Require {
    fn default() -> Frob2Require {
        Frob2Require { special: true, dagger: true }
    }
}

fn frob2_passes(f: &Frob2, require: Frob2Require) -> bool {
    let r = check_frob2(f);
    r.f1_left_unit
        && r.f2_right_unit
        && r.f3_associative
        && (!require.special || r.f4_special)
        && (!require.dagger || r.f5_frobenius)
}

/// All binary structures on a carrier of size `n` passing F1–F3 plus the
/// requested flags.
///
/// Strategy: a raw scan of all `2^(n³)·2ⁿ` (table, unit-subset) candidates
/// for `n ≤ 2`; at `n = 3` the scan ranges over single-valued partial
/// tables — `(n+1)^(n²)·2ⁿ` candidates — which loses nothing when
/// speciality is demanded, because F4 forces the multiplication to be
/// single-valued. Candidates are visited table-major, unit-mask-minor.
pub fn enumerate_frob2(n: usize, require: Frob2Require) -> Result<EnumReport<Frob2>, SearchError> {
    let started = Instant::now();
    match n {
        0..=2 => {
            let cells = n * n * n;
            let candidate_space = (1u128 << cells) << n;
            let mut survivors = Vec::new();
            for table_bits in 0..1u64 << cells {
                for unit_mask in 0..1u32 << n {
                    let f = Frob2::from_tables(
                        FinSet::new(format!("A{n}"), n),
                        (0..cells).map(|i| table_bits >> i & 1 == 1).collect(),
                        (0..n).map(|i| unit_mask >> i & 1 == 1).collect(),
                    );
                    if frob2_passes(&f, require) {
                        survivors.push(f);
                    }
                }
            }
            Ok(EnumReport::finish("frob2/raw", n, candidate_space, survivors, started))
        }
        3 if require.special => {
            let cells = n * n;
            let pow4: Vec<u64> = (0..cells).map(|i| 4u64.pow(i as u32)).collect();
            let codes = 4u64.pow(cells as u32);
            let candidate_space = (codes as u128) << n;
            let mut survivors = Vec::new();
            let mut op = vec![None::<usize>; cells];
            for code in 0..codes {
                for (i, slot) in op.iter_mut().enumerate() {
                    let digit = code / pow4[i] % 4;
                    *slot = (digit > 0).then(|| digit as usize - 1);
                }
                for unit_mask in 0..1u32 << n {
                    if !partial_unit_screen(&op, n, unit_mask) {
                        continue;
                    }
                    let mut f = Frob2::new_empty(FinSet::new("A3", n));
                    for a in 0..n {
                        for b in 0..n {
                            if let Some(c) = op[a * n + b] {
                                f.set_m(a, b, c, true);
                            }
                        }
                    }
                    for u in 0..n {
                        if unit_mask >> u & 1 == 1 {
                            f.set_unit(u, true);
                        }
                    }
                    if frob2_passes(&f, require) {
                        survivors.push(f);
                    }
                }
            }
            Ok(EnumReport::finish("frob2/partial", n, candidate_space, survivors, started))
        }
        3 => Err(SearchError::TooLarge {
            kind: "frob2",
            size: n,
            reason: "the single-valued partial-table strategy applies only when speciality is required"
                .into(),
        }),
        _ => Err(SearchError::TooLarge {
            kind: "frob2",
            size: n,
            reason: "the raw scan is sized for n ≤ 2 and the partial-table scan for n = 3".into(),
        }),
    }
}

/// Exact unit-law prefilter (F1 ∧ F2) for a single-valued partial table.
fn partial_unit_screen(op: &[Option<usize>], n: usize, unit_mask: u32) -> bool {
    for a in 0..n {
        let mut left_hit = false;
        let mut right_hit = false;
        for u in 0..n {
            if unit_mask >> u & 1 == 0 {
                continue;
            }
            match op[u * n + a] {
                Some(c) if c == a => left_hit = true,
                Some(_) => return false,
                None => {}
            }
            match op[a * n + u] {
                Some(c) if c == a => right_hit = true,
                Some(_) => return false,
                None => {}
            }
        }
        if !left_hit || !right_hit {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Groupoids.

/// All labeled groupoid structures with `n` morphisms, `n ≤ 6`.
///
/// Object labels are normalized — objects are indexed by their unit
/// morphisms in increasing order — so each structure on the labeled
/// morphism set appears exactly once. The scan enumerates unit subsets,
/// then source/target maps, then fills the composition table by
/// backtracking with row/column injectivity (composition in a groupoid is
/// cancellative); inverses and associativity are validated by
/// [`check_groupoid`] on every completed table. The reported candidate
/// space is the number of injectivity-unconstrained fillings of the
/// non-unit composition cells, summed over skeletons.
pub fn enumerate_groupoids(n: usize) -> Result<EnumReport<Groupoid>, SearchError> {
    if n > 6 {
        return Err(SearchError::TooLarge {
            kind: "groupoid",
            size: n,
            reason: "the backtracking scan is sized for n ≤ 6".into(),
        });
    }
    let started = Instant::now();
    if n == 0 {
        let empty = Groupoid {
            objects: FinSet::new("Ob", 0),
            morphisms: FinSet::new("C1", 0),
            source: vec![],
            target: vec![],
            unit: vec![],
            inverse: vec![],
            compose: vec![],
        };
        return Ok(EnumReport::finish("groupoid", 0, 1, vec![empty], started));
    }
    let mut survivors = Vec::new();
    let mut candidate_space: u128 = 0;
    for unit_mask in 1u32..1 << n {
        let units: Vec<usize> = (0..n).filter(|&i| unit_mask >> i & 1 == 1).collect();
        let nonunits: Vec<usize> = (0..n).filter(|&i| unit_mask >> i & 1 == 0).collect();
        let k = units.len();
        let maps = (k as u64).pow(nonunits.len() as u32);
        for s_code in 0..maps {
            for t_code in 0..maps {
                let mut source = vec![0usize; n];
                let mut target = vec![0usize; n];
                for (o, &u) in units.iter().enumerate() {
                    source[u] = o;
                    target[u] = o;
                }
                let mut s_digits = s_code;
                let mut t_digits = t_code;
                for &m in &nonunits {
                    source[m] = (s_digits % k as u64) as usize;
                    target[m] = (t_digits % k as u64) as usize;
                    s_digits /= k as u64;
                    t_digits /= k as u64;
                }
                scan_compositions(
                    n,
                    &units,
                    &source,
                    &target,
                    &mut candidate_space,
                    &mut survivors,
                );
            }
        }
    }
    Ok(EnumReport::finish("groupoid", n, candidate_space, survivors, started))
}

/// Fill the composition table of one (units, source, target) skeleton.
fn scan_compositions(
    n: usize,
    units: &[usize],
    source: &[usize],
    target: &[usize],
    candidate_space: &mut u128,
    survivors: &mut Vec<Groupoid>,
) {
    let mut compose: Vec<Option<usize>> = vec![None; n * n];
    let mut row_used = vec![0u64; n];
    let mut col_used = vec![0u64; n];

    fn force(
        compose: &mut [Option<usize>],
        row_used: &mut [u64],
        col_used: &mut [u64],
        n: usize,
        a: usize,
        b: usize,
        c: usize,
    ) -> bool {
        match compose[a * n + b] {
            Some(v) => v == c,
            None => {
                if row_used[a] >> c & 1 == 1 || col_used[b] >> c & 1 == 1 {
                    return false;
                }
                compose[a * n + b] = Some(c);
                row_used[a] |= 1 << c;
                col_used[b] |= 1 << c;
                true
            }
        }
    }
    for a in 0..n {
        if !force(&mut compose, &mut row_used, &mut col_used, n, a, units[source[a]], a)
            || !force(&mut compose, &mut row_used, &mut col_used, n, units[target[a]], a, a)
        {
            return;
        }
    }

    let mut free = Vec::new();
    let mut space: u128 = 1;
    for a in 0..n {
        for b in 0..n {
            if source[a] == target[b] && compose[a * n + b].is_none() {
                let choices =
                    (0..n).filter(|&c| source[c] == source[b] && target[c] == target[a]).count();
                space *= choices as u128;
                free.push((a, b));
            }
        }
    }
    *candidate_space += space;
    if space == 0 {
        return;
    }

    struct Scan<'a> {
        n: usize,
        units: &'a [usize],
        source: &'a [usize],
        target: &'a [usize],
        free: &'a [(usize, usize)],
        compose: Vec<Option<usize>>,
        row_used: Vec<u64>,
        col_used: Vec<u64>,
        survivors: &'a mut Vec<Groupoid>,
    }

    impl Scan<'_> {
        fn dfs(&mut self, idx: usize) {
            if idx == self.free.len() {
                self.finish();
                return;
            }
            let (a, b) = self.free[idx];
            for c in 0..self.n {
                if self.source[c] == self.source[b]
                    && self.target[c] == self.target[a]
                    && self.row_used[a] >> c & 1 == 0
                    && self.col_used[b] >> c & 1 == 0
                {
                    self.compose[a * self.n + b] = Some(c);
                    self.row_used[a] |= 1 << c;
                    self.col_used[b] |= 1 << c;
                    self.dfs(idx + 1);
                    self.compose[a * self.n + b] = None;
                    self.row_used[a] &= !(1 << c);
                    self.col_used[b] &= !(1 << c);
                }
            }
        }

        fn finish(&mut self) {
            let n = self.n;
            let mut inverse = Vec::with_capacity(n);
            for a in 0..n {
                let u_t = self.units[self.target[a]];
                let u_s = self.units[self.source[a]];
                match (0..n).find(|&b| {
                    self.compose[a * n + b] == Some(u_t) && self.compose[b * n + a] == Some(u_s)
                }) {
                    Some(b) => inverse.push(b),
                    None => return,
                }
            }
            let g = Groupoid {
                objects: FinSet::new("Ob", self.units.len()),
                morphisms: FinSet::new("C1", n),
                source: self.source.to_vec(),
                target: self.target.to_vec(),
                unit: self.units.to_vec(),
                inverse,
                compose: self.compose.clone(),
            };
            if check_groupoid(&g).is_ok() {
                self.survivors.push(g);
            }
        }
    }

    Scan { n, units, source, target, free: &free, compose, row_used, col_used, survivors }.dfs(0);
}

// ---------------------------------------------------------------------------
// Ternary structures and connectors.

/// Flags demanded by [`enumerate_frob3`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frob3Require {
    pub normal: bool,
    pub dagger_symmetric: bool,
    pub assoc: bool,
}

impl Default for Frob3Require {
    fn default() -> Frob3Require {
        Frob3Require { normal: true, dagger_symmetric: true, assoc: true }
    }
}

fn frob3_passes(t: &Frob3, require: Frob3Require) -> bool {
    // Cheap table scans first, allocation-heavy relation checks last.
    (!require.dagger_symmetric || t.is_dagger_symmetric())
        && (!require.normal || t.is_normal())
        && (!require.assoc || t.is_associative())
}

/// All ternary structures on a carrier of size `n` with the required flags:
/// a raw scan of all `2^(n⁴)` incidences for `n ≤ 2`, and the
/// partial-operation strategy of [`enumerate_frob3_pruned`] at `n = 3`.
pub fn enumerate_frob3(n: usize, require: Frob3Require) -> Result<EnumReport<Frob3>, SearchError> {
    let started = Instant::now();
    match n {
        0..=2 => {
            let cells = n * n * n * n;
            let candidate_space = 1u128 << cells;
            let mut survivors = Vec::new();
            for bits in 0..1u64 << cells {
                let t = Frob3::from_table(
                    FinSet::new(format!("T{n}"), n),
                    (0..cells).map(|i| bits >> i & 1 == 1).collect(),
                );
                if frob3_passes(&t, require) {
                    survivors.push(t);
                }
            }
            Ok(EnumReport::finish("frob3/raw", n, candidate_space, survivors, started))
        }
        3 => enumerate_frob3_pruned(n, require),
        _ => Err(SearchError::TooLarge {
            kind: "frob3",
            size: n,
            reason: "the raw scan is sized for n ≤ 2 and the partial-operation scan for n = 3"
                .into(),
        }),
    }
}

/// The `n = 3` strategy behind [`enumerate_frob3`], also runnable at
/// `n ≤ 2` to cross-check the raw scan.
///
/// Candidates are single-valued partial ternary operations organized by
/// their induced equivalence-relation pair. This covers every structure
/// with all three flags: for normal dagger-symmetric associative tables the
/// incidence is single-valued on exactly the pullback of the two derived
/// equivalence relations and empty off it. Demanding fewer flags would
/// make the pruning unsound (normality alone does not force
/// single-valuedness), so any other requirement set is an error.
pub fn enumerate_frob3_pruned(
    n: usize,
    require: Frob3Require,
) -> Result<EnumReport<Frob3>, SearchError> {
    if !(require.normal && require.dagger_symmetric && require.assoc) {
        return Err(SearchError::TooLarge {
            kind: "frob3/pruned",
            size: n,
            reason: "the partial-operation strategy covers only the normal, dagger-symmetric, associative case"
                .into(),
        });
    }
    let started = Instant::now();
    let connectors = enumerate_connectors(n)?;
    let survivors: Vec<Frob3> = connectors
        .survivors
        .iter()
        .map(connector_to_frob3)
        .filter(|t| frob3_passes(t, require))
        .collect();
    Ok(EnumReport::finish("frob3/pruned", n, connectors.candidate_space, survivors, started))
}

/// All set partitions of `{0,…,n−1}` as restricted growth strings in
/// lexicographic order: `a[0] = 0` and `a[i] ≤ 1 + max(a[..i])`.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, blocks: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=blocks {
            cur[i] = v;
            rec(i + 1, blocks.max(v + 1), cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, 0, &mut vec![0; n], &mut out);
    out
}

fn labels_to_rel(carrier: &FinSet, labels: &[usize]) -> FinRel {
    let obj = Obj::plain(carrier.clone());
    FinRel::from_fn(obj.clone(), obj, |i, j| labels[i] == labels[j])
}

/// All connectors on a carrier of size `n ≤ 3`: pairs of equivalence
/// relations with a parallelogram operation passing every flag of
/// [`check_connector`].
///
/// Equivalence relations are enumerated as restricted growth strings in
/// lexicographic order. For each pair the unit laws force `p` on the cells
/// `(x,y,y)` and `(x,x,z)`; the remaining pullback cells range over the
/// class-constrained values `S[x] ∩ R[z]`, and chain associativity is
/// checked on each completed table. The reported candidate space is the
/// number of class-constrained fillings summed over relation pairs.
pub fn enumerate_connectors(n: usize) -> Result<EnumReport<Connector>, SearchError> {
    if n > 3 {
        return Err(SearchError::TooLarge {
            kind: "connector",
            size: n,
            reason: "the pullback scan is sized for n ≤ 3".into(),
        });
    }
    let started = Instant::now();
    let parts = partitions(n);
    let mut survivors = Vec::new();
    let mut candidate_space: u128 = 0;
    for r_labels in &parts {
        for s_labels in &parts {
            scan_connector_tables(n, r_labels, s_labels, &mut candidate_space, &mut survivors);
        }
    }
    Ok(EnumReport::finish("connector", n, candidate_space, survivors, started))
}

fn scan_connector_tables(
    n: usize,
    r_labels: &[usize],
    s_labels: &[usize],
    candidate_space: &mut u128,
    survivors: &mut Vec<Connector>,
) {
    let carrier = FinSet::new(format!("A{n}"), n);
    let mut table: Vec<Option<usize>> = vec![None; n * n * n];
    let mut free: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut space: u128 = 1;
    for x in 0..n {
        for y in 0..n {
            if r_labels[x] != r_labels[y] {
                continue;
            }
            for z in 0..n {
                if s_labels[y] != s_labels[z] {
                    continue;
                }
                let cell = (x * n + y) * n + z;
                if y == z {
                    table[cell] = Some(x);
                } else if x == y {
                    table[cell] = Some(z);
                } else {
                    let allowed: Vec<usize> = (0..n)
                        .filter(|&w| s_labels[x] == s_labels[w] && r_labels[z] == r_labels[w])
                        .collect();
                    space *= allowed.len() as u128;
                    free.push((cell, allowed));
                }
            }
        }
    }
    *candidate_space += space;
    if space == 0 {
        return;
    }

    fn chain_associative(table: &[Option<usize>], n: usize) -> bool {
        let p = |x: usize, y: usize, z: usize| table[(x * n + y) * n + z];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for u in 0..n {
                        for v in 0..n {
                            let lhs = p(x, y, z).and_then(|w| p(w, u, v));
                            let rhs = p(z, u, v).and_then(|w| p(x, y, w));
                            if lhs != rhs {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn dfs(
        idx: usize,
        free: &[(usize, Vec<usize>)],
        table: &mut Vec<Option<usize>>,
        emit: &mut impl FnMut(&[Option<usize>]),
    ) {
        if idx == free.len() {
            emit(table);
            return;
        }
        let (cell, allowed) = &free[idx];
        for &w in allowed {
            table[*cell] = Some(w);
            dfs(idx + 1, free, table, emit);
        }
        table[*cell] = None;
    }

    let r_eq = labels_to_rel(&carrier, r_labels);
    let s_eq = labels_to_rel(&carrier, s_labels);
    let mut emit = |table: &[Option<usize>]| {
        if !chain_associative(table, n) {
            return;
        }
        let c = Connector::from_partial_op(carrier.clone(), r_eq.clone(), s_eq.clone(), |x, y, z| {
            table[(x * n + y) * n + z]
        });
        if check_connector(&c).is_ok_and(|report| report.all()) {
            survivors.push(c);
        }
    };
    dfs(0, &free, &mut table, &mut emit);
}

// ---------------------------------------------------------------------------
// Counterexample search.

/// Scan every nonempty subset of a groupoid's morphisms, in ascending mask
/// order, for one that is completely positive as a state on the presenting
/// binary structure yet fails subgroupoid closure. Returns the first
/// witness found, as a sorted list of morphisms.
pub fn find_cp_gap(g: &Groupoid) -> Option<Vec<usize>> {
    let n = g.n_morphisms();
    assert!(n <= 16, "the subset scan is sized for small groupoids");
    let f = groupoid_to_frob2(g);
    let one = zmod_frob2(1);
    let i_obj = Obj::plain(FinSet::new("I", 1));
    let a_obj = Obj::plain(f.carrier.clone());
    for mask in 1u32..1 << n {
        let state = FinRel::from_fn(i_obj.clone(), a_obj.clone(), |_, a| mask >> a & 1 == 1);
        let analysis = cp_state(&f, &state).expect("groupoid presentations pass F1–F5");
        if !analysis.is_cp {
            continue;
        }
        let closed = is_subgroupoid(&one, &f, &state).expect("state shape matches");
        if !closed {
            return Some((0..n).filter(|&a| mask >> a & 1 == 1).collect());
        }
    }
    None
}

// ---------------------------------------------------------------------------
// The standard example gallery.

/// Z/n as a binary structure: addition with unit `{0}`.
pub fn zmod_frob2(n: usize) -> Frob2 {
    Frob2::from_op(FinSet::new(format!("Z{n}"), n), move |a, b| (a + b) % n, &[0])
}

/// Z/n as a one-object groupoid.
pub fn zmod_groupoid(n: usize) -> Groupoid {
    assert!(n >= 1, "a group needs a unit");
    Groupoid {
        objects: FinSet::new("pt", 1),
        morphisms: FinSet::new(format!("Z{n}"), n),
        source: vec![0; n],
        target: vec![0; n],
        unit: vec![0],
        inverse: (0..n).map(|a| (n - a) % n).collect(),
        compose: (0..n * n).map(|p| Some((p / n + p % n) % n)).collect(),
    }
}

/// The discrete groupoid on `k` objects: units only.
pub fn discrete_groupoid(k: usize) -> Groupoid {
    Groupoid {
        objects: FinSet::new("D", k),
        morphisms: FinSet::new("D", k),
        source: (0..k).collect(),
        target: (0..k).collect(),
        unit: (0..k).collect(),
        inverse: (0..k).collect(),
        compose: (0..k * k).map(|p| (p / k == p % k).then_some(p / k)).collect(),
    }
}

/// The indiscrete ("pair") groupoid on `k` objects; morphisms are
/// (target, source) pairs composing like matrix units.
pub fn pair_groupoid(k: usize) -> Groupoid {
    let n = k * k;
    let mut compose = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            if a % k == b / k {
                compose[a * n + b] = Some((a / k) * k + b % k);
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

/// The permutations of three points, identity first; shared by
/// [`s3_groupoid`] and [`s3_herd`].
const S3_PERMS: [[usize; 3]; 6] =
    [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];

fn s3_after(a: [usize; 3], b: [usize; 3]) -> [usize; 3] {
    [a[b[0]], a[b[1]], a[b[2]]]
}

fn s3_invert(a: [usize; 3]) -> [usize; 3] {
    let mut r = [0; 3];
    for (i, &ai) in a.iter().enumerate() {
        r[ai] = i;
    }
    r
}

fn s3_index(p: [usize; 3]) -> usize {
    S3_PERMS.iter().position(|&q| q == p).expect("a permutation of three points")
}

/// S₃ as a one-object groupoid, elements indexed as in [`S3_PERMS`].
pub fn s3_groupoid() -> Groupoid {
    let n = 6;
    Groupoid {
        objects: FinSet::new("pt", 1),
        morphisms: FinSet::new("S3", n),
        source: vec![0; n],
        target: vec![0; n],
        unit: vec![0],
        inverse: (0..n).map(|a| s3_index(s3_invert(S3_PERMS[a]))).collect(),
        compose: (0..n * n)
            .map(|p| Some(s3_index(s3_after(S3_PERMS[p / n], S3_PERMS[p % n]))))
            .collect(),
    }
}

/// The parallelogram structure on Z/n: `u = x − y + z`.
pub fn zpara(n: usize) -> Frob3 {
    Frob3::from_op(FinSet::new(format!("T{n}"), n), move |x, y, z| (x + n - y + z) % n)
}

/// The projection structure: `u = x` when `y = z`.
pub fn tproj(n: usize) -> Frob3 {
    Frob3::from_partial_op(FinSet::new(format!("P{n}"), n), |x, y, z| (y == z).then_some(x))
}

/// The herd of S₃: `u = x ∘ y⁻¹ ∘ z`. Associative, dagger-symmetric,
/// normal — and not commutative.
pub fn s3_herd() -> Frob3 {
    Frob3::from_op(FinSet::new("S3herd", 6), |x, y, z| {
        s3_index(s3_after(s3_after(S3_PERMS[x], s3_invert(S3_PERMS[y])), S3_PERMS[z]))
    })
}

/// The parallelogram structure on the coset `c + ⟨m⟩` inside Z/n: the
/// carrier lists the coset's elements in increasing order and
/// `u = x − y + z` is computed in Z/n (the result stays in the coset).
pub fn coset_para(n: usize, m: usize, c: usize) -> Frob3 {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(m % n, n).max(1);
    let elems: Vec<usize> = (0..n).filter(|&x| (x + n - c % n).is_multiple_of(g)).collect();
    let size = elems.len();
    let lookup = elems.clone();
    let pos = move |v: usize| lookup.iter().position(|&e| e == v).expect("coset is closed");
    Frob3::from_op(FinSet::new(format!("({c}+<{m}>)/Z{n}"), size), move |x, y, z| {
        pos((elems[x] + n - elems[y] + elems[z]) % n)
    })
}

/// The group Z/4 presented over two objects: morphisms `(g, a, b)` exist
/// when `g` and `b − a` have the same parity, composing by addition. The
/// hom-sets are the cosets of `{0, 2}`.
pub fn z4_two_object_groupoid() -> Groupoid {
    let mut elems = Vec::new();
    for g in 0..4usize {
        for a in 0..2usize {
            for b in 0..2usize {
                if g % 2 == (b + 2 - a) % 2 {
                    elems.push((g, a, b));
                }
            }
        }
    }
    let n = elems.len();
    let pos =
        |g: usize, a: usize, b: usize| elems.iter().position(|&e| e == (g, a, b)).expect("member");
    let mut compose = vec![None; n * n];
    for (i, &(g1, a1, b1)) in elems.iter().enumerate() {
        for (j, &(g2, a2, b2)) in elems.iter().enumerate() {
            if a1 == b2 {
                compose[i * n + j] = Some(pos((g1 + g2) % 4, a2, b1));
            }
        }
    }
    Groupoid {
        objects: FinSet::new("Par", 2),
        morphisms: FinSet::new("Z4s", n),
        source: elems.iter().map(|&(_, a, _)| a).collect(),
        target: elems.iter().map(|&(_, _, b)| b).collect(),
        unit: vec![pos(0, 0, 0), pos(0, 1, 1)],
        inverse: elems.iter().map(|&(g, a, b)| pos((4 - g) % 4, b, a)).collect(),
        compose,
    }
}

/// A named structure of one of the four interconvertible kinds.
#[derive(Clone, Debug)]
pub enum Structure {
    Binary(Frob2),
    Ternary(Frob3),
    Groupoid(Groupoid),
    Connector(Connector),
}

#[derive(Clone, Debug)]
pub struct SuiteMember {
    pub name: String,
    pub structure: Structure,
}

fn member(name: impl Into<String>, structure: Structure) -> SuiteMember {
    SuiteMember { name: name.into(), structure }
}

/// The example suite grounding the cross-module tests: every size-2
/// survivor of the four enumerations, plus curated groups, pair groupoids,
/// pants, projection, and coset structures of sizes 3–8.
pub fn standard_suite() -> Vec<SuiteMember> {
    let mut suite = Vec::new();
    let within_caps = "size-2 enumerations stay within the strategy caps";
    for (i, f) in
        enumerate_frob2(2, Frob2Require::default()).expect(within_caps).survivors.into_iter().enumerate()
    {
        suite.push(member(format!("frob2(2)#{i}"), Structure::Binary(f)));
    }
    for (i, g) in enumerate_groupoids(2).expect(within_caps).survivors.into_iter().enumerate() {
        suite.push(member(format!("groupoid(2)#{i}"), Structure::Groupoid(g)));
    }
    for (i, t) in
        enumerate_frob3(2, Frob3Require::default()).expect(within_caps).survivors.into_iter().enumerate()
    {
        suite.push(member(format!("frob3(2)#{i}"), Structure::Ternary(t)));
    }
    for (i, c) in enumerate_connectors(2).expect(within_caps).survivors.into_iter().enumerate() {
        suite.push(member(format!("connector(2)#{i}"), Structure::Connector(c)));
    }

    suite.push(member("Z3", Structure::Binary(zmod_frob2(3))));
    suite.push(member("Z4", Structure::Binary(zmod_frob2(4))));
    suite.push(member("Z3 groupoid", Structure::Groupoid(zmod_groupoid(3))));
    suite.push(member("Z4 groupoid", Structure::Groupoid(zmod_groupoid(4))));
    suite.push(member("discrete(3)", Structure::Groupoid(discrete_groupoid(3))));
    suite.push(member("pair(2)", Structure::Groupoid(pair_groupoid(2))));
    suite.push(member("pair(3)", Structure::Groupoid(pair_groupoid(3))));
    suite.push(member("S3 groupoid", Structure::Groupoid(s3_groupoid())));
    suite.push(member(
        "pants2(Z2,Z2)",
        Structure::Binary(crate::frob2::pants2(&zmod_frob2(2), &zmod_frob2(2))),
    ));
    suite.push(member(
        "pants3(2,2)",
        Structure::Ternary(crate::frob3::pants3(&FinSet::new("a", 2), &FinSet::new("b", 2))),
    ));
    suite.push(member("T(Z3)", Structure::Ternary(zpara(3))));
    suite.push(member("T(Z4)", Structure::Ternary(zpara(4))));
    suite.push(member("proj(3)", Structure::Ternary(tproj(3))));
    suite.push(member("coset 1+<2> in Z4", Structure::Ternary(coset_para(4, 2, 1))));
    suite.push(member("herd(S3)", Structure::Ternary(s3_herd())));
    suite.push(member("Z4 over two objects", Structure::Groupoid(z4_two_object_groupoid())));
    suite
}

// ---------------------------------------------------------------------------
// Roundtrip sweeps.

/// One converter-pair attempt on one suite member.
#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub member: String,
    pub converter: &'static str,
    pub status: SweepStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepStatus {
    Passed,
    /// A precondition did not hold; the reason names the failing flag.
    Skipped(String),
    /// The roundtrip ran but was not the literal identity, or a step
    /// errored; the witness pinpoints the first discrepancy.
    Failed(String),
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub outcomes: Vec<SweepOutcome>,
}

impl SweepReport {
    pub fn clean(&self) -> bool {
        self.outcomes.iter().all(|o| !matches!(o.status, SweepStatus::Failed(_)))
    }

    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.status == SweepStatus::Passed).count()
    }

    pub fn skipped(&self) -> usize {
        self.outcomes.iter().filter(|o| matches!(o.status, SweepStatus::Skipped(_))).count()
    }

    pub fn failures(&self) -> Vec<&SweepOutcome> {
        self.outcomes.iter().filter(|o| matches!(o.status, SweepStatus::Failed(_))).collect()
    }

    pub fn passed_for(&self, m: &str) -> usize {
        self.outcomes
            .iter()
            .filter(|o| o.member == m && o.status == SweepStatus::Passed)
            .count()
    }

    fn push(&mut self, m: &str, converter: &'static str, status: SweepStatus) {
        self.outcomes.push(SweepOutcome { member: m.into(), converter, status });
    }
}

/// Run every applicable converter pair on every member and demand that each
/// roundtrip reproduce its input table for table.
///
/// Applicability is decided by the public checkers. A pair whose
/// precondition fails is recorded as skipped with the failing flag named; a
/// member on which no pair runs at all is recorded as failed, so corrupted
/// structures cannot slip through as all-skips.
pub fn sweep_roundtrips(suite: &[SuiteMember]) -> SweepReport {
    let mut report = SweepReport::default();
    for m in suite {
        let before = report.outcomes.len();
        match &m.structure {
            Structure::Binary(f) => sweep_binary(&m.name, f, &mut report),
            Structure::Ternary(t) => sweep_ternary(&m.name, t, &mut report),
            Structure::Groupoid(g) => sweep_groupoid(&m.name, g, &mut report),
            Structure::Connector(c) => sweep_connector(&m.name, c, &mut report),
        }
        let any_ran = report.outcomes[before..]
            .iter()
            .any(|o| !matches!(o.status, SweepStatus::Skipped(_)));
        if !any_ran {
            report.push(&m.name, "any", SweepStatus::Failed("no converter pair applies".into()));
        }
    }
    report
}

fn frob2_flag_summary(r: &Frob2Report) -> String {
    let mut failing = Vec::new();
    if !r.f1_left_unit {
        failing.push("F1");
    }
    if !r.f2_right_unit {
        failing.push("F2");
    }
    if !r.f3_associative {
        failing.push("F3");
    }
    if !r.f4_special {
        failing.push("F4");
    }
    if !r.f5_frobenius {
        failing.push("F5");
    }
    if failing.is_empty() {
        "passes F1–F5".into()
    } else {
        format!("fails {}", failing.join(", "))
    }
}

fn frob2_witness(want: &Frob2, got: &Frob2) -> String {
    if want.size() != got.size() {
        return format!("carrier sizes differ: {} vs {}", want.size(), got.size());
    }
    let n = want.size();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if want.m(a, b, c) != got.m(a, b, c) {
                    return format!("first difference at M({a},{b},{c})");
                }
            }
        }
    }
    for x in 0..n {
        if want.unit_has(x) != got.unit_has(x) {
            return format!("unit flag differs at {x}");
        }
    }
    "tables agree".into()
}

fn frob3_witness(want: &Frob3, got: &Frob3) -> String {
    if want.size() != got.size() {
        return format!("carrier sizes differ: {} vs {}", want.size(), got.size());
    }
    let n = want.size();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for u in 0..n {
                    if want.lam(x, y, z, u) != got.lam(x, y, z, u) {
                        return format!("first difference at Λ({x},{y},{z},{u})");
                    }
                }
            }
        }
    }
    "tables agree".into()
}

fn groupoid_witness(want: &Groupoid, got: &Groupoid) -> String {
    if want.n_morphisms() != got.n_morphisms() || want.n_objects() != got.n_objects() {
        return "carrier sizes differ".into();
    }
    for (name, a, b) in [
        ("source", &want.source, &got.source),
        ("target", &want.target, &got.target),
        ("unit", &want.unit, &got.unit),
        ("inverse", &want.inverse, &got.inverse),
    ] {
        if let Some(i) = (0..a.len()).find(|&i| a[i] != b[i]) {
            return format!("{name} map differs at {i}");
        }
    }
    let n = want.n_morphisms();
    for a in 0..n {
        for b in 0..n {
            if want.comp(a, b) != got.comp(a, b) {
                return format!("composition differs at ({a},{b})");
            }
        }
    }
    "tables agree".into()
}

fn connector_witness(want: &Connector, got: &Connector) -> String {
    if want.size() != got.size() {
        return format!("carrier sizes differ: {} vs {}", want.size(), got.size());
    }
    if want.r_eq != got.r_eq {
        return "R differs".into();
    }
    if want.s_eq != got.s_eq {
        return "S differs".into();
    }
    let n = want.size();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if want.p(x, y, z) != got.p(x, y, z) {
                    return format!("p differs at ({x},{y},{z})");
                }
            }
        }
    }
    "tables agree".into()
}

fn sweep_binary(name: &str, f: &Frob2, report: &mut SweepReport) {
    let flags = check_frob2(f);

    let converter = "frob2→groupoid→frob2";
    if flags.all() {
        let status = match frob2_to_groupoid(f) {
            Ok(g) => {
                let back = groupoid_to_frob2(&g);
                if back == *f {
                    SweepStatus::Passed
                } else {
                    SweepStatus::Failed(frob2_witness(f, &back))
                }
            }
            Err(e) => SweepStatus::Failed(format!("extraction failed: {e}")),
        };
        report.push(name, converter, status);
    } else {
        report.push(name, converter, SweepStatus::Skipped(frob2_flag_summary(&flags)));
    }

    let converter = "frob2→frob3→frob2";
    if !(flags.frobenius_non_special() && f.is_symmetric()) {
        let mut reason = frob2_flag_summary(&flags);
        if !f.is_symmetric() {
            reason.push_str("; involution is not symmetric");
        }
        report.push(name, converter, SweepStatus::Skipped(reason));
        return;
    }
    let status = match two_to_three(f) {
        Err(e) => SweepStatus::Failed(format!("expansion failed: {e}")),
        Ok(t) => {
            let units = f.unit_elems();
            if !t.is_unital(&units) {
                SweepStatus::Skipped("unit subset is not unital in the ternary expansion".into())
            } else {
                match three_to_two(&t, &units) {
                    Err(e) => SweepStatus::Failed(format!("contraction failed: {e}")),
                    Ok(back) => {
                        if back == *f {
                            SweepStatus::Passed
                        } else {
                            SweepStatus::Failed(frob2_witness(f, &back))
                        }
                    }
                }
            }
        }
    };
    report.push(name, converter, status);
}

fn sweep_ternary(name: &str, t: &Frob3, report: &mut SweepReport) {
    let flags = check_frob3(t);

    let converter = "frob3→connector→frob3";
    if !flags.t_normal {
        report.push(name, converter, SweepStatus::Skipped("not normal".into()));
    } else {
        let status = match frob3_to_connector(t) {
            Err(e) => SweepStatus::Skipped(format!("no connector presentation: {e}")),
            Ok(c) => {
                let back = connector_to_frob3(&c);
                if back == *t {
                    SweepStatus::Passed
                } else {
                    SweepStatus::Failed(frob3_witness(t, &back))
                }
            }
        };
        report.push(name, converter, status);
    }

    let converter = "frob3→frob2→frob3";
    if !(flags.t_associative && flags.t_dagger_symmetric) {
        let mut failing = Vec::new();
        if !flags.t_associative {
            failing.push("associativity");
        }
        if !flags.t_dagger_symmetric {
            failing.push("dagger symmetry");
        }
        report.push(name, converter, SweepStatus::Skipped(format!("fails {}", failing.join(", "))));
        return;
    }
    let candidates = t.unit_candidates();
    let Some(units) = candidates.first() else {
        report.push(name, converter, SweepStatus::Skipped("no unital subset".into()));
        return;
    };
    let status = match three_to_two(t, units) {
        Err(e) => SweepStatus::Failed(format!("contraction failed: {e}")),
        Ok(f) => match two_to_three(&f) {
            Err(e) => SweepStatus::Failed(format!("expansion failed: {e}")),
            Ok(back) => {
                if back == *t {
                    SweepStatus::Passed
                } else {
                    SweepStatus::Failed(frob3_witness(t, &back))
                }
            }
        },
    };
    report.push(name, converter, status);
}

fn sweep_groupoid(name: &str, g: &Groupoid, report: &mut SweepReport) {
    let converter = "groupoid→frob2→groupoid";
    let status = match check_groupoid(g) {
        Err(e) => SweepStatus::Skipped(format!("not a groupoid: {e}")),
        Ok(()) => {
            let f = groupoid_to_frob2(g);
            match frob2_to_groupoid(&f) {
                Err(e) => SweepStatus::Failed(format!("extraction failed: {e}")),
                Ok(back) => {
                    let want = g.canonicalize();
                    if back == want {
                        SweepStatus::Passed
                    } else {
                        SweepStatus::Failed(groupoid_witness(&want, &back))
                    }
                }
            }
        }
    };
    report.push(name, converter, status);
}

fn sweep_connector(name: &str, c: &Connector, report: &mut SweepReport) {
    let converter = "connector→frob3→connector";
    let status = match check_connector(c) {
        Err(e) => SweepStatus::Skipped(format!("malformed connector: {e}")),
        Ok(flags) if !flags.all() => SweepStatus::Skipped("connector axiom flags fail".into()),
        Ok(_) => {
            let t = connector_to_frob3(c);
            match frob3_to_connector(&t) {
                Err(e) => SweepStatus::Failed(format!("extraction failed: {e}")),
                Ok(back) => {
                    if back == *c {
                        SweepStatus::Passed
                    } else {
                        SweepStatus::Failed(connector_witness(c, &back))
                    }
                }
            }
        }
    };
    report.push(name, converter, status);
}
