//! Type-A quantum K-theory of the flag manifold: the Chevalley product
//! [O^{s_k}] * [O^w], the circular-order criteria that pin down a single
//! nonzero coefficient per coset, the reordering algorithm, and the degree
//! extrema of the quantum terms.
//!
//! Permutations act on positions 1..=n; the pair (i, j) with i <= k < j
//! stands for the root alpha_i + ... + alpha_{j-1}, and right multiplication
//! by (i, j) swaps the entries in positions i and j.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde_json::json;

use crate::alcove::{typea_omega_chain, LambdaChain, OmegaChainVariant};
use crate::ktheory::GroupAlgElt;
use crate::model::{enumerate_admissible, stats};
use crate::qbg::{EdgeKind, Qbg};
use crate::rootsys::{CartanType, ParabolicSubset, Perm, RootSystem, Weight};
use crate::{Error, Result};

/// A quantum degree (d_1, ..., d_{n-1}) in the coroot lattice coordinates.
pub type DegreeVector = Vec<i64>;

/// The degree d(i, j): ones exactly in positions i..j-1.
pub fn interval_degree(n: usize, i: usize, j: usize) -> DegreeVector {
    assert!(1 <= i && i < j && j <= n);
    (1..n).map(|p| if i <= p && p < j { 1 } else { 0 }).collect()
}

/// An element of QK_T(Fl_n) written in the [O^v] Q^d basis; coefficients live
/// in the group algebra of the weight lattice (a plain integer times e^0 in
/// the non-equivariant case).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QKElt {
    pub terms: BTreeMap<(Perm, DegreeVector), GroupAlgElt>,
}

impl QKElt {
    pub fn zero() -> QKElt {
        QKElt { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, v: Perm, d: DegreeVector, coeff: &GroupAlgElt) {
        assert!(d.iter().all(|&x| x >= 0), "degrees are nonnegative");
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((v, d)).or_insert_with(GroupAlgElt::zero);
        entry.add_assign(coeff);
        if entry.is_zero() {
            self.terms.retain(|_, g| !g.is_zero());
        }
    }

    pub fn coeff(&self, v: &Perm, d: &[i64]) -> GroupAlgElt {
        self.terms
            .get(&(v.clone(), d.to_vec()))
            .cloned()
            .unwrap_or_else(GroupAlgElt::zero)
    }

    /// The integer coefficient at (v, d), if the group-algebra coefficient is
    /// a multiple of e^0.
    pub fn int_coeff(&self, v: &Perm, d: &[i64]) -> Option<i64> {
        let g = self.coeff(v, d);
        let rank = v.n() - 1;
        if g.is_zero() {
            return Some(0);
        }
        let terms: Vec<(&Weight, i64)> = g.terms().collect();
        match terms.as_slice() {
            [(mu, c)] if **mu == Weight::zero(rank) => Some(*c),
            _ => None,
        }
    }

    /// Specialize e^mu -> 1.
    pub fn specialize(&self) -> QKElt {
        let mut out = QKElt::zero();
        for ((v, d), g) in &self.terms {
            let c: i64 = g.terms().map(|(_, c)| c).sum();
            let one = GroupAlgElt::one(v.n() - 1).scale(c);
            out.add_term(v.clone(), d.clone(), &one);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|((v, d), g)| {
                let coeff: Vec<_> = g
                    .terms()
                    .map(|(mu, c)| json!({"wt": mu.numerators(), "den": mu.den(), "c": c}))
                    .collect();
                json!({"v": v.to_string(), "d": d, "coeff": coeff})
            })
            .collect();
        json!({ "terms": terms })
    }
}

/// Position of x in the circular order i < i+1 < ... < n < 1 < ... < i-1
/// starting at a (so 0 iff x = a).
pub fn circ_pos(n: usize, a: usize, x: usize) -> usize {
    (x + n - a) % n
}

/// Position of x in the reversed circular order a > a-1 > ... > 1 > n > ...
pub fn circ_pos_rev(n: usize, a: usize, x: usize) -> usize {
    (a + n - x) % n
}

/// The chain Gamma(varpi_k) as position pairs, row order:
/// (k,k+1),...,(k,n),(k-1,k+1),...,(1,n).
pub fn omega_pairs(n: usize, k: usize) -> Vec<(usize, usize)> {
    assert!(1 <= k && k < n);
    let mut out = Vec::new();
    for a in (1..=k).rev() {
        for b in k + 1..=n {
            out.push((a, b));
        }
    }
    out
}

/// The chain Gamma(-varpi_k): the reverse of Gamma(varpi_k).
pub fn omega_pairs_minus(n: usize, k: usize) -> Vec<(usize, usize)> {
    let mut out = omega_pairs(n, k);
    out.reverse();
    out
}

/// Whether w -> w (i, j) is an edge of the quantum Bruhat graph on S_n, and
/// of which kind: the edge exists iff no i < l < j has w(l) strictly between
/// w(i) and w(j) in the circular order starting at w(i).
pub fn edge_in_qbg(w: &Perm, i: usize, j: usize) -> Option<EdgeKind> {
    let n = w.n();
    assert!(1 <= i && i < j && j <= n);
    let a = w.apply(i);
    let target = circ_pos(n, a, w.apply(j));
    for l in i + 1..j {
        let p = circ_pos(n, a, w.apply(l));
        if p > 0 && p < target {
            return None;
        }
    }
    Some(if w.apply(i) < w.apply(j) { EdgeKind::Bruhat } else { EdgeKind::Quantum })
}

/// The four pairwise criteria governing nonzero coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    A1,
    A1Prime,
    B1,
    B1Prime,
}

/// Literal evaluation of Condition A1/A1'/B1/B1' for the pair (v, w):
/// for every admissible index pair, v(i) = w(j) is false and
/// v(i) < w(j) < w(i) is false in the relevant circular order at v(i).
pub fn condition_check(v: &Perm, w: &Perm, k: usize, which: Condition) -> bool {
    let n = v.n();
    assert_eq!(w.n(), n);
    assert!(1 <= k && k < n);
    // A1/B1 range over 1 <= i < j <= k; A1'/B1' over n >= i > j >= k+1.
    // A1/A1' use the forward/reversed orders; B1/B1' swap them.
    let (pairs, rev): (Vec<(usize, usize)>, bool) = match which {
        Condition::A1 | Condition::B1 => (
            (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect(),
            matches!(which, Condition::B1),
        ),
        Condition::A1Prime | Condition::B1Prime => (
            (k + 1..=n).flat_map(|j| (j + 1..=n).map(move |i| (i, j))).collect(),
            matches!(which, Condition::A1Prime),
        ),
    };
    for (i, j) in pairs {
        let a = v.apply(i);
        if a == w.apply(j) {
            return false;
        }
        let (pj, pi) = if rev {
            (circ_pos_rev(n, a, w.apply(j)), circ_pos_rev(n, a, w.apply(i)))
        } else {
            (circ_pos(n, a, w.apply(j)), circ_pos(n, a, w.apply(i)))
        };
        if pj > 0 && pj < pi {
            return false;
        }
    }
    true
}

/// Which omega-chain labels a path: Gamma(varpi_k) for Plus (path v -> w),
/// Gamma(-varpi_k) for Minus (path w -> v).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainDir {
    Plus,
    Minus,
}

/// A path in QB(S_n) labeled by a subsequence of an omega-chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QkPath {
    /// Visited permutations, length labels.len() + 1.
    pub perms: Vec<Perm>,
    /// Labels (i, j) in chain order.
    pub labels: Vec<(usize, usize)>,
    /// Per step: whether the edge is quantum.
    pub quantum: Vec<bool>,
}

fn subsequence_paths(pairs: &[(usize, usize)], start: &Perm, target: &Perm) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn go(
        pairs: &[(usize, usize)],
        pos: usize,
        cur: &Perm,
        target: &Perm,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur == target {
            out.push(chosen.clone());
        }
        for t in pos..pairs.len() {
            let (i, j) = pairs[t];
            if edge_in_qbg(cur, i, j).is_some() {
                let next = cur.swap_positions(i, j);
                chosen.push(t);
                go(pairs, t + 1, &next, target, chosen, out);
                chosen.pop();
            }
        }
    }
    go(pairs, 0, start, target, &mut chosen, &mut out);
    out
}

/// The unique path with labels a subsequence of Gamma(varpi_k) (Plus: from v
/// to w, needs A1 and A1') or of Gamma(-varpi_k) (Minus: from w to v, needs
/// B1 and B1'). Entrywise circular monotonicity is verified on the output.
pub fn unique_chain_path(n: usize, k: usize, w: &Perm, v: &Perm, dir: ChainDir) -> Result<QkPath> {
    assert_eq!(w.n(), n);
    assert_eq!(v.n(), n);
    let (pairs, start, target) = match dir {
        ChainDir::Plus => {
            if !condition_check(v, w, k, Condition::A1) || !condition_check(v, w, k, Condition::A1Prime) {
                return Err(Error::PatternMismatch(format!("({v}, {w}) fails A1 or A1'")));
            }
            (omega_pairs(n, k), v, w)
        }
        ChainDir::Minus => {
            if !condition_check(v, w, k, Condition::B1) || !condition_check(v, w, k, Condition::B1Prime) {
                return Err(Error::PatternMismatch(format!("({v}, {w}) fails B1 or B1'")));
            }
            (omega_pairs_minus(n, k), w, v)
        }
    };
    let found = subsequence_paths(&pairs, start, target);
    let [choice] = <[Vec<usize>; 1]>::try_from(found).map_err(|found| {
        Error::InvariantViolation(format!(
            "expected a unique labeled path {start} -> {target}, found {}",
            found.len()
        ))
    })?;
    let mut perms = vec![start.clone()];
    let mut labels = Vec::new();
    let mut quantum = Vec::new();
    for t in choice {
        let (i, j) = pairs[t];
        let cur = perms.last().unwrap();
        quantum.push(edge_in_qbg(cur, i, j) == Some(EdgeKind::Quantum));
        perms.push(cur.swap_positions(i, j));
        labels.push((i, j));
    }
    check_circ_entries(n, k, v, &perms, dir)?;
    Ok(QkPath { perms, labels, quantum })
}

/// Entrywise monotonicity along the path: positions 1..k move weakly forward
/// in one circular order at v(i), positions k+1..n in the other; which order
/// is which depends on the chain direction.
fn check_circ_entries(n: usize, k: usize, v: &Perm, perms: &[Perm], dir: ChainDir) -> Result<()> {
    for i in 1..=n {
        let a = v.apply(i);
        let pos = |x: &Perm| {
            let low_rev = matches!(dir, ChainDir::Minus);
            if (i <= k) == low_rev {
                circ_pos_rev(n, a, x.apply(i))
            } else {
                circ_pos(n, a, x.apply(i))
            }
        };
        // Plus paths start at v; Minus paths end at v, so read them backwards.
        let seq: Vec<usize> = match dir {
            ChainDir::Plus => perms.iter().map(pos).collect(),
            ChainDir::Minus => perms.iter().rev().map(pos).collect(),
        };
        if seq.windows(2).any(|ab| ab[0] > ab[1]) {
            return Err(Error::InvariantViolation(format!(
                "entry {i} is not circularly monotone along the path"
            )));
        }
    }
    Ok(())
}

fn check_min_rep(sigma: &Perm, k: usize) -> Result<()> {
    let n = sigma.n();
    let increasing = |range: std::ops::RangeInclusive<usize>| {
        range.collect::<Vec<_>>().windows(2).all(|ij| sigma.apply(ij[0]) < sigma.apply(ij[1]))
    };
    if !increasing(1..=k) || !increasing(k + 1..=n) {
        return Err(Error::InvalidArgument(format!(
            "{sigma} is not a minimal coset representative for k={k}"
        )));
    }
    Ok(())
}

/// The unique member w of the coset sigma W_{I \ {k}} satisfying B1 and B1'
/// relative to v: the entries sigma(1..k) are placed by iterated minima in
/// the reversed circular order at v(i) for i = 1..k, the entries
/// sigma(k+1..n) by minima in the forward order for i = n..k+1. Uniqueness
/// is asserted by scanning the whole coset.
pub fn coset_reorder(n: usize, k: usize, v: &Perm, sigma: &Perm) -> Result<Perm> {
    assert_eq!(v.n(), n);
    assert_eq!(sigma.n(), n);
    assert!(1 <= k && k < n);
    check_min_rep(sigma, k)?;
    let mut entries = vec![0usize; n];
    let mut low: Vec<usize> = (1..=k).map(|i| sigma.apply(i)).collect();
    for i in 1..=k {
        let t = (0..low.len()).min_by_key(|&t| circ_pos_rev(n, v.apply(i), low[t])).unwrap();
        entries[i - 1] = low.remove(t);
    }
    let mut high: Vec<usize> = (k + 1..=n).map(|i| sigma.apply(i)).collect();
    for i in (k + 1..=n).rev() {
        let t = (0..high.len()).min_by_key(|&t| circ_pos(n, v.apply(i), high[t])).unwrap();
        entries[i - 1] = high.remove(t);
    }
    let w = Perm(entries);

    let satisfies = |cand: &Perm| {
        condition_check(v, cand, k, Condition::B1) && condition_check(v, cand, k, Condition::B1Prime)
    };
    let coset_hits = (1..=k)
        .map(|i| sigma.apply(i))
        .permutations(k)
        .cartesian_product((k + 1..=n).map(|i| sigma.apply(i)).permutations(n - k))
        .map(|(lo, hi)| Perm(lo.into_iter().chain(hi).collect()))
        .filter(satisfies)
        .collect::<Vec<_>>();
    if coset_hits.len() != 1 || coset_hits[0] != w {
        return Err(Error::InvariantViolation(format!(
            "coset of {sigma} has {} members satisfying B1 and B1'",
            coset_hits.len()
        )));
    }
    Ok(w)
}

/// Shared data for expansions of [O^{s_k}] * [O^w] in QK_T(Fl_n).
pub struct QkCtx {
    pub n: usize,
    pub k: usize,
    pub qbg: Qbg,
    pub chain: LambdaChain,
}

impl QkCtx {
    pub fn new(n: usize, k: usize) -> Result<QkCtx> {
        if n < 2 || k < 1 || k > n - 1 {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= n-1, got n={n} k={k}")));
        }
        let rs = RootSystem::new(CartanType::A, n - 1)?;
        let chain = typea_omega_chain(&rs, k, OmegaChainVariant::Rows, false)?;
        let qbg = Qbg::new(&rs, &ParabolicSubset::empty())?;
        Ok(QkCtx { n, k, qbg, chain })
    }

    /// The Chevalley product [O^{s_k}] * [O^w]: the diagonal term
    /// (1 - e^{w(varpi_k) - varpi_k}) [O^w] plus, for every nonempty
    /// w-admissible subset A of Gamma(-varpi_k),
    /// (-1)^{|A|-1} Q^{down(w,A)} e^{-varpi_k - wt(w,A)} [O^{end(w,A)}].
    /// Non-equivariant output specializes e^mu -> 1 (killing the diagonal).
    pub fn chevalley(&self, w: &Perm, equivariant: bool) -> Result<QKElt> {
        if w.n() != self.n {
            return Err(Error::InvalidArgument(format!("{w} is not in S_{}", self.n)));
        }
        let rs = &self.qbg.rs;
        let omega = Weight::fundamental(rs.rank, self.k - 1);
        let w_weyl = w.to_weyl(rs);
        let mut out = QKElt::zero();
        if equivariant {
            let mut diag = GroupAlgElt::one(rs.rank);
            diag.add_assign(&GroupAlgElt::exp(&w_weyl.apply_weight(rs, &omega).sub(&omega)).scale(-1));
            out.add_term(w.clone(), vec![0; self.n - 1], &diag);
        }
        for a in enumerate_admissible(&self.qbg, &self.chain, &w_weyl) {
            if a.indices.is_empty() {
                continue;
            }
            let st = stats(rs, &self.chain, &a);
            let sign = if a.indices.len() % 2 == 1 { 1 } else { -1 };
            let coeff = GroupAlgElt::exp(&omega.neg().sub(&st.wt)).scale(sign);
            out.add_term(st.end.to_perm(rs), st.down.0, &coeff);
        }
        Ok(if equivariant { out } else { out.specialize() })
    }
}

/// One-shot expansion; prefer QkCtx when looping over many w.
pub fn qk_chevalley(n: usize, k: usize, w: &Perm, equivariant: bool) -> Result<QKElt> {
    QkCtx::new(n, k)?.chevalley(w, equivariant)
}

/// The single nonzero coefficient of [O^v] Q^d in [O^{s_k}] * [O^w] over
/// w in the coset sigma W_{I \ {k}}: None when v lies in the coset (all
/// coefficients vanish), otherwise (w, d, sign) with sign = +-1.
pub fn find_coeff(n: usize, k: usize, v: &Perm, sigma: &Perm) -> Result<Option<(Perm, DegreeVector, i64)>> {
    assert_eq!(v.n(), n);
    assert_eq!(sigma.n(), n);
    check_min_rep(sigma, k)?;
    let block = |p: &Perm, lo: usize, hi: usize| {
        let mut b: Vec<usize> = (lo..=hi).map(|i| p.apply(i)).collect();
        b.sort_unstable();
        b
    };
    if block(v, 1, k) == block(sigma, 1, k) {
        return Ok(None);
    }
    let w = coset_reorder(n, k, v, sigma)?;
    let path = unique_chain_path(n, k, &w, v, ChainDir::Minus)?;
    let mut d = vec![0i64; n - 1];
    for (t, &(i, j)) in path.labels.iter().enumerate() {
        if path.quantum[t] {
            for (p, x) in interval_degree(n, i, j).into_iter().enumerate() {
                d[p] += x;
            }
        }
    }
    let sign = if path.labels.len() % 2 == 1 { 1 } else { -1 };
    Ok(Some((w, d, sign)))
}

/// The closed-form degree of the unique path for a pair (v, w) satisfying
/// B1 and B1': d_i counts the positions j <= i with v(j) < w(j) for i <= k,
/// and the positions j > i with v(j) > w(j) for i >= k.
pub fn degree_formula(v: &Perm, w: &Perm, k: usize) -> Result<DegreeVector> {
    let n = v.n();
    assert_eq!(w.n(), n);
    if !condition_check(v, w, k, Condition::B1) || !condition_check(v, w, k, Condition::B1Prime) {
        return Err(Error::PatternMismatch(format!("({v}, {w}) fails B1 or B1'")));
    }
    if v == w {
        return Err(Error::InvalidArgument("need v != w".into()));
    }
    let low = |i: usize| (1..=i).filter(|&j| v.apply(j) < w.apply(j)).count() as i64;
    let high = |i: usize| (i + 1..=n).filter(|&j| v.apply(j) > w.apply(j)).count() as i64;
    assert_eq!(low(k), high(k), "the two clauses must agree at i = k");
    Ok((1..n).map(|i| if i <= k { low(i) } else { high(i) }).collect())
}

/// Gamma_v: the labels (i, j) of Gamma(-varpi_k) whose edge out of v exists
/// and is quantum.
pub fn gamma_set(v: &Perm, k: usize) -> Vec<(usize, usize)> {
    omega_pairs_minus(v.n(), k)
        .into_iter()
        .filter(|&(i, j)| edge_in_qbg(v, i, j) == Some(EdgeKind::Quantum))
        .collect()
}

fn preceq(k: usize, x: (usize, usize), y: (usize, usize)) -> bool {
    // (a,b) <= (c,d) iff c <= a <= k < b <= d.
    y.0 <= x.0 && x.0 <= k && k < x.1 && x.1 <= y.1
}

fn strictly_inside(k: usize, x: (usize, usize), y: (usize, usize)) -> bool {
    y.0 < x.0 && x.0 <= k && k < x.1 && x.1 < y.1
}

fn extremum(k: usize, set: &[(usize, usize)], max: bool) -> Result<(usize, usize)> {
    set.iter()
        .copied()
        .find(|&m| set.iter().all(|&x| if max { preceq(k, x, m) } else { preceq(k, m, x) }))
        .ok_or_else(|| Error::InvariantViolation(format!("no interval-order extremum in {set:?}")))
}

/// The minimum and maximum quantum degrees of [O^{s_k}] * [O^w]: the minimum
/// is d(r, s) for the interval-order minimum (r, s) of Gamma_w; the maximum
/// is the sum of d over the chain of iterated interval-order maxima, each
/// taken over the labels strictly inside the previous one. None when
/// Gamma_w is empty (no quantum terms at all).
pub fn min_max_degree(w: &Perm, k: usize) -> Result<Option<(DegreeVector, DegreeVector)>> {
    let n = w.n();
    let gamma = gamma_set(w, k);
    if gamma.is_empty() {
        return Ok(None);
    }
    let (r, s) = extremum(k, &gamma, false)?;
    let mut d_max = vec![0i64; n - 1];
    let mut cur: Vec<(usize, usize)> = gamma.clone();
    while !cur.is_empty() {
        let (p, q) = extremum(k, &cur, true)?;
        for (t, x) in interval_degree(n, p, q).into_iter().enumerate() {
            d_max[t] += x;
        }
        cur = gamma.iter().copied().filter(|&x| strictly_inside(k, x, (p, q))).collect();
    }
    Ok(Some((interval_degree(n, r, s), d_max)))
}

/// The maximum degree over all of QK(Fl_n) for a fixed k:
/// (1, 2, ..., kb-1, kb, ..., kb, kb-1, ..., 2, 1) with kb = min(k, n-k);
/// the total is k(n-k).
pub fn global_max_degree(n: usize, k: usize) -> DegreeVector {
    assert!(1 <= k && k < n);
    let kb = k.min(n - k) as i64;
    (1..n).map(|i| (i as i64).min((n - i) as i64).min(kb)).collect()
}

/// One row of the non-equivariant coefficient table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffRow {
    pub k: usize,
    pub w: Perm,
    pub v: Perm,
    pub d: DegreeVector,
    pub coeff: i64,
}

/// All nonzero coefficients of [O^{s_k}] * [O^w] over w in S_n,
/// lexicographic in (w, v, d).
pub fn coefficient_table(n: usize, k: usize) -> Result<Vec<CoeffRow>> {
    let ctx = QkCtx::new(n, k)?;
    let mut rows = Vec::new();
    for w in ctx.qbg.rs.weyl_elements()? {
        let w = w.to_perm(&ctx.qbg.rs);
        for ((v, d), g) in ctx.chevalley(&w, false)?.terms {
            let coeff = g.terms().map(|(_, c)| c).sum::<i64>();
            rows.push(CoeffRow { k, w: w.clone(), v, d, coeff });
        }
    }
    rows.sort_by(|a, b| (&a.w, &a.v, &a.d).cmp(&(&b.w, &b.v, &b.d)));
    Ok(rows)
}
