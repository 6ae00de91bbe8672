//! The quantum alcove model: admissible subsets of a lambda-chain with their
//! statistics, quantum LS paths, and the statistic-preserving bijections
//! between the two models (one for dominant, one for anti-dominant weights).

use std::collections::HashMap;

use num::rational::Ratio;
use num::{One, Zero};
use serde_json::json;

use crate::alcove::{lex_chain, lex_chain_antidominant, LambdaChain};
use crate::qbg::{lambda_reflection_order_with_top, parabolic_top_order, Qbg, ReflectionOrder};
use crate::rootsys::{Coroot, ParabolicSubset, Root, RootSystem, Weight, WeylElt};
use crate::{Error, Result};

/// A w-admissible subset A = {j_1 < ... < j_s} of positions of a chain,
/// together with the path w -> w r_{j_1} -> ... in QB(W).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSubset {
    /// The base Weyl group element.
    pub w: WeylElt,
    /// Zero-based positions into the chain, strictly increasing.
    pub indices: Vec<usize>,
    /// The walk w, w r_{j_1}, ..., of length indices.len() + 1.
    pub path: Vec<WeylElt>,
}

impl AdmissibleSubset {
    pub fn end(&self) -> &WeylElt {
        self.path.last().unwrap()
    }
}

/// The statistics of an admissible subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleStats {
    pub wt: Weight,
    pub end: WeylElt,
    pub down: Coroot,
    pub height: i64,
    /// Number of negative chain roots indexed by A.
    pub n: usize,
    /// The positions in A where the path takes a quantum (down) step.
    pub a_minus: Vec<usize>,
}

/// Check the edge-by-edge admissibility of an index set and build the walk.
pub fn admissible(qbg: &Qbg, chain: &LambdaChain, w: &WeylElt, indices: &[usize]) -> Result<AdmissibleSubset> {
    assert!(qbg.j.is_empty(), "admissible subsets walk in QB(W)");
    let rs = &qbg.rs;
    let mut path = vec![w.clone()];
    let mut last = None;
    for &i in indices {
        if i >= chain.len() || Some(i) <= last {
            return Err(Error::InvalidArgument(format!(
                "index {i} out of order or out of range"
            )));
        }
        last = Some(i);
        let beta = chain.root(i).abs();
        let cur = path.last().unwrap();
        if qbg.edge_kind(cur, &beta).is_none() {
            return Err(Error::InvalidArgument(format!(
                "no edge at position {i}: subset is not admissible"
            )));
        }
        let next = rs.mul(cur, &rs.reflection(&beta));
        path.push(next);
    }
    Ok(AdmissibleSubset {
        w: w.clone(),
        indices: indices.to_vec(),
        path,
    })
}

/// All w-admissible subsets of the chain, in colex order of the index sets.
pub fn enumerate_admissible(qbg: &Qbg, chain: &LambdaChain, w: &WeylElt) -> Vec<AdmissibleSubset> {
    assert!(qbg.j.is_empty(), "admissible subsets walk in QB(W)");
    let mut out = Vec::new();
    let mut indices = Vec::new();
    let mut path = vec![w.clone()];
    enumerate_rec(qbg, chain, 0, &mut indices, &mut path, &mut out);
    out.sort_by_key(|a| a.indices.iter().rev().copied().collect::<Vec<_>>());
    out
}

fn enumerate_rec(
    qbg: &Qbg,
    chain: &LambdaChain,
    from: usize,
    indices: &mut Vec<usize>,
    path: &mut Vec<WeylElt>,
    out: &mut Vec<AdmissibleSubset>,
) {
    out.push(AdmissibleSubset {
        w: path[0].clone(),
        indices: indices.clone(),
        path: path.clone(),
    });
    for i in from..chain.len() {
        let beta = chain.root(i).abs();
        let cur = path.last().unwrap();
        if qbg.edge_kind(cur, &beta).is_some() {
            let next = qbg.rs.mul(cur, &qbg.rs.reflection(&beta));
            indices.push(i);
            path.push(next);
            enumerate_rec(qbg, chain, i + 1, indices, path, out);
            indices.pop();
            path.pop();
        }
    }
}

/// wt/end/down/height/n of an admissible subset.
pub fn stats(rs: &RootSystem, chain: &LambdaChain, a: &AdmissibleSubset) -> AdmissibleStats {
    // wt = -w r_{j_1} ... r_{j_s}(-lambda), innermost reflection first.
    let mut mu = chain.lambda.neg();
    for &i in a.indices.iter().rev() {
        mu = chain.affine_refl(i).apply(rs, &mu);
    }
    let wt = a.w.apply_weight(rs, &mu).neg();

    let mut a_minus = Vec::new();
    let mut down = Coroot::zero(rs.rank);
    let mut height = 0i64;
    let mut n = 0usize;
    for (t, &j) in a.indices.iter().enumerate() {
        let beta = chain.root(j);
        if !beta.is_positive() {
            n += 1;
        }
        if a.path[t + 1].length() < a.path[t].length() {
            a_minus.push(j);
            down = down.add(&rs.coroot(&beta.abs()));
            height += beta.sign() * chain.tilde_height(rs, j);
        }
    }
    AdmissibleStats {
        wt,
        end: a.end().clone(),
        down,
        height,
        n,
        a_minus,
    }
}

/// JSON record {w, A, wt, end, down, height, n}; indices are 1-based in the
/// output.
pub fn admissible_record(rs: &RootSystem, chain: &LambdaChain, a: &AdmissibleSubset) -> serde_json::Value {
    let st = stats(rs, chain, a);
    json!({
        "w": rs.reduced_word(&a.w),
        "A": a.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "wt": { "num": st.wt.numerators(), "den": st.wt.den() },
        "end": rs.reduced_word(&st.end),
        "down": st.down.0,
        "height": st.height,
        "n": st.n,
    })
}

/// A quantum LS path: rationals 0 = b_1 < ... < b_{t+1} = 1 and directions
/// sigma_1, ..., sigma_t in W^J.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QLSPath {
    pub b: Vec<Ratio<i64>>,
    pub dirs: Vec<WeylElt>,
}

impl QLSPath {
    pub fn t(&self) -> usize {
        self.dirs.len()
    }

    /// The trivial path with a single direction.
    pub fn trivial(sigma: WeylElt) -> QLSPath {
        QLSPath {
            b: vec![Ratio::zero(), Ratio::one()],
            dirs: vec![sigma],
        }
    }

    /// wt(eta) = sum_k (b_{k+1} - b_k) sigma_k(lambda).
    pub fn wt(&self, rs: &RootSystem, lambda: &Weight) -> Weight {
        let mut acc = Weight::zero(lambda.rank());
        for k in 0..self.t() {
            let seg = self.dirs[k].apply_weight(rs, lambda).scale(self.b[k + 1] - self.b[k]);
            acc = acc.add(&seg);
        }
        acc
    }
}

/// Whether eta is a quantum LS path for the dominant weight lambda; qbg_j
/// must be QB(W^J) for J the stabilizer of lambda.
pub fn qls_validate(rs: &RootSystem, lambda: &Weight, qbg_j: &Qbg, eta: &QLSPath) -> Result<bool> {
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(format!("{lambda:?}")));
    }
    if eta.b.len() != eta.t() + 1 || eta.t() == 0 {
        return Err(Error::InvalidArgument("b/dirs length mismatch".into()));
    }
    if eta.b[0] != Ratio::zero() || eta.b[eta.t()] != Ratio::one() {
        return Err(Error::InvalidArgument("b must run from 0 to 1".into()));
    }
    if eta.b.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("b must be strictly increasing".into()));
    }
    for s in &eta.dirs {
        if !rs.is_min_rep(s, &qbg_j.j) {
            return Ok(false);
        }
    }
    for k in 2..=eta.t() {
        if !qbg_j.connected_in_b(lambda, eta.b[k - 1], &eta.dirs[k - 2], &eta.dirs[k - 1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Deg(eta) = -sum_{k=2}^t (1 - b_k) <lambda, wt_J(sigma_{k-1} => sigma_k)>.
pub fn qls_deg(lambda: &Weight, qbg_j: &Qbg, eta: &QLSPath) -> Ratio<i64> {
    let mut deg = Ratio::zero();
    for k in 2..=eta.t() {
        let (_, wtj) = qbg_j.shortest_data(&eta.dirs[k - 2], &eta.dirs[k - 1]);
        deg -= (Ratio::one() - eta.b[k - 1]) * lambda.pair(&wtj);
    }
    deg
}

/// The initial direction of eta with respect to w, with its coroot and
/// degree: the lift recursion w_0 = w, w_k = lift_min(sigma_k, J, w_{k-1});
/// returns (w_t, sum of wt(w_{k-1} => w_k), Deg_w(eta)).
pub fn qls_initial_data(
    rs: &RootSystem,
    lambda: &Weight,
    j: &ParabolicSubset,
    qbg: &Qbg,
    eta: &QLSPath,
    w: &WeylElt,
) -> Result<(WeylElt, Coroot, Ratio<i64>)> {
    let mut cur = w.clone();
    let mut xi = Coroot::zero(rs.rank);
    let mut deg = Ratio::zero();
    for k in 1..=eta.t() {
        let next = qbg.lift_min(&eta.dirs[k - 1], j, &cur)?;
        let (_, wtv) = qbg.shortest_data(&cur, &next);
        deg -= (Ratio::one() - eta.b[k - 1]) * lambda.pair(&wtv);
        xi = xi.add(&wtv);
        cur = next;
    }
    Ok((cur, xi, deg))
}

/// The final direction of eta with respect to v, with its coroot: the lift
/// recursion w_{t+1} = v, w_k = lift_max(sigma_k, J, w_{k+1}); returns
/// (w_1, sum of wt(w_k => w_{k+1})).
pub fn qls_final_data(
    rs: &RootSystem,
    j: &ParabolicSubset,
    qbg: &Qbg,
    eta: &QLSPath,
    v: &WeylElt,
) -> Result<(WeylElt, Coroot)> {
    let mut cur = v.clone();
    let mut zeta = Coroot::zero(rs.rank);
    for k in (1..=eta.t()).rev() {
        let prev = qbg.lift_max(&eta.dirs[k - 1], j, &cur)?;
        zeta = zeta.add(&qbg.shortest_data(&prev, &cur).1);
        cur = prev;
    }
    Ok((cur, zeta))
}

/// The two bijections between admissible subsets of the lex chain and
/// quantum LS paths: one for dominant lambda, one for anti-dominant lambda
/// (the latter pairs A with (eta, v) where eta is a path for -lambda).
pub struct Bijection<'a> {
    qbg: &'a Qbg,
    chain: LambdaChain,
    j: ParabolicSubset,
    order: ReflectionOrder,
    entry_pos: HashMap<(Vec<i64>, i64), usize>,
    anti: bool,
}

impl<'a> Bijection<'a> {
    /// Dominant case, with the default order on Phi_J^+.
    pub fn new(qbg: &'a Qbg, lambda: &Weight) -> Result<Bijection<'a>> {
        let j = ParabolicSubset::stabilizer(lambda);
        let top = parabolic_top_order(&qbg.rs, &j)?;
        Bijection::new_with_top(qbg, lambda, top)
    }

    /// Dominant case with an explicit reflection order on Phi_J^+.
    pub fn new_with_top(qbg: &'a Qbg, lambda: &Weight, top: Vec<Root>) -> Result<Bijection<'a>> {
        assert!(qbg.j.is_empty(), "the bijection lifts into QB(W)");
        let rs = &qbg.rs;
        let chain = lex_chain(rs, lambda)?;
        let j = ParabolicSubset::stabilizer(lambda);
        let order = lambda_reflection_order_with_top(rs, lambda, &j, top)?;
        Ok(Bijection {
            qbg,
            entry_pos: entry_positions(&chain),
            chain,
            j,
            order,
            anti: false,
        })
    }

    /// Anti-dominant case; the adapted order is built for -lambda.
    pub fn new_anti(qbg: &'a Qbg, lambda: &Weight) -> Result<Bijection<'a>> {
        assert!(qbg.j.is_empty(), "the bijection lifts into QB(W)");
        let rs = &qbg.rs;
        let chain = lex_chain_antidominant(rs, lambda)?;
        let j = ParabolicSubset::stabilizer(lambda);
        let top = parabolic_top_order(rs, &j)?;
        let order = lambda_reflection_order_with_top(rs, &lambda.neg(), &j, top)?;
        Ok(Bijection {
            qbg,
            entry_pos: entry_positions(&chain),
            chain,
            j,
            order,
            anti: true,
        })
    }

    pub fn chain(&self) -> &LambdaChain {
        &self.chain
    }

    /// Relative height of chain position i, in [0,1) (dominant) or (0,1]
    /// (anti-dominant).
    fn rel_height(&self, i: usize) -> Ratio<i64> {
        let rs = &self.qbg.rs;
        let p = self.chain.lambda.pair_int(&rs.coroot(self.chain.root(i)));
        Ratio::new(self.chain.height(i), p)
    }

    /// Milestones: b-levels and the walk elements after consuming each level.
    fn milestones(&self, a: &AdmissibleSubset) -> (Vec<Ratio<i64>>, Vec<WeylElt>) {
        let hs: Vec<Ratio<i64>> = a.indices.iter().map(|&i| self.rel_height(i)).collect();
        assert!(hs.windows(2).all(|w| w[0] <= w[1]));
        let mut b = vec![Ratio::zero()];
        for &h in &hs {
            if h > *b.last().unwrap() && h < Ratio::one() {
                b.push(h);
            }
        }
        b.push(Ratio::one());
        // w_k = the walk element after all foldings of relative height <= b_k.
        let ws = b
            .iter()
            .map(|&bk| a.path[hs.iter().filter(|&&h| h <= bk).count()].clone())
            .collect();
        (b, ws)
    }

    /// Dominant forward map: (w, A) -> eta.
    pub fn to_qls(&self, a: &AdmissibleSubset) -> QLSPath {
        assert!(!self.anti);
        let rs = &self.qbg.rs;
        let (b, ws) = self.milestones(a);
        // Directions sigma_k = floor(w_k) for k = 1..t; the final slot of ws
        // (at b = 1) is not a direction in the dominant case.
        let t = b.len() - 1;
        let dirs = ws[..t]
            .iter()
            .map(|wk| rs.min_coset_rep(wk, &self.j))
            .collect();
        QLSPath { b, dirs }
    }

    /// Anti-dominant forward map: (w, A) -> (eta over -lambda, v).
    pub fn to_qls_anti(&self, a: &AdmissibleSubset) -> (QLSPath, WeylElt) {
        assert!(self.anti);
        let rs = &self.qbg.rs;
        let (b, ws) = self.milestones(a);
        let t = b.len() - 1;
        let dirs = ws[..t]
            .iter()
            .map(|wk| rs.min_coset_rep(wk, &self.j))
            .collect();
        (QLSPath { b, dirs }, ws[t].clone())
    }

    /// Dominant inverse map: (eta, w) -> the admissible subset, via the lift
    /// recursion and the unique label-increasing paths between milestones.
    pub fn from_qls(&self, eta: &QLSPath, w: &WeylElt) -> Result<AdmissibleSubset> {
        assert!(!self.anti);
        let mut cur = w.clone();
        let mut indices = Vec::new();
        for k in 1..=eta.t() {
            let next = self.qbg.lift_min(&eta.dirs[k - 1], &self.j, &cur)?;
            let path = self
                .qbg
                .restricted_increasing_path(&cur, &next, &self.order, &self.j)?;
            self.push_segment(&path, eta.b[k - 1], &mut indices)?;
            cur = next;
        }
        self.finish(w, indices)
    }

    /// Anti-dominant inverse map: (eta, v) -> the admissible subset, whose
    /// base element is kappa(eta, v).
    pub fn from_qls_anti(&self, eta: &QLSPath, v: &WeylElt) -> Result<AdmissibleSubset> {
        assert!(self.anti);
        let t = eta.t();
        let mut ws = vec![v.clone()];
        for k in (1..=t).rev() {
            let prev = self.qbg.lift_max(&eta.dirs[k - 1], &self.j, ws.last().unwrap())?;
            ws.push(prev);
        }
        ws.reverse(); // now ws[k-1] = w_k for k = 1..t+1
        let rev = self.order.reversed();
        let mut indices = Vec::new();
        for k in 1..=t {
            let path = self
                .qbg
                .restricted_increasing_path(&ws[k - 1], &ws[k], &rev, &self.j)?;
            self.push_segment(&path, eta.b[k], &mut indices)?;
        }
        self.finish(&ws[0], indices)
    }

    /// Convert the edges of a milestone-to-milestone path into chain
    /// positions at the given b-level.
    fn push_segment(&self, path: &crate::qbg::QbgPath, b: Ratio<i64>, indices: &mut Vec<usize>) -> Result<()> {
        let rs = &self.qbg.rs;
        for e in &path.edges {
            let beta = if self.anti { e.label.neg() } else { e.label.clone() };
            let l = b * self.chain.lambda.pair(&rs.coroot(&beta));
            if !l.is_integer() {
                return Err(Error::InvariantViolation(format!(
                    "hyperplane level {l} is not integral"
                )));
            }
            let key = (beta.0.clone(), l.to_integer());
            let &idx = self.entry_pos.get(&key).ok_or_else(|| {
                Error::InvariantViolation("hyperplane not found in the chain".into())
            })?;
            indices.push(idx);
        }
        Ok(())
    }

    fn finish(&self, w: &WeylElt, indices: Vec<usize>) -> Result<AdmissibleSubset> {
        if indices.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvariantViolation(
                "reconstructed positions are not increasing".into(),
            ));
        }
        admissible(self.qbg, &self.chain, w, &indices)
    }
}

fn entry_positions(chain: &LambdaChain) -> HashMap<(Vec<i64>, i64), usize> {
    chain
        .entries
        .iter()
        .enumerate()
        .map(|(i, (beta, l))| ((beta.0.clone(), *l), i))
        .collect()
}
