//! The (parabolic) quantum Bruhat graph, shortest-path data, reflection
//! orderings, shellability paths, and Deodhar lifts.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use num::rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::rootsys::{Coroot, ParabolicSubset, Root, RootSystem, Weight, WeylElt};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    Bruhat,
    Quantum,
}

/// An edge of QB(W^J) in export form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbgEdge {
    pub source: WeylElt,
    pub target: WeylElt,
    pub label: Root,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    src: usize,
    tgt: usize,
    /// Index into the label list (Phi^+ minus Phi_J^+).
    label: usize,
    kind: EdgeKind,
}

/// A directed path in QB(W^J), stored as a sequence of edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbgPath {
    pub edges: Vec<QbgEdge>,
}

impl QbgPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// wt^J(p): the sum of beta^v over the quantum edges.
    pub fn weight(&self, rs: &RootSystem) -> Coroot {
        let mut acc = Coroot::zero(rs.rank);
        for e in &self.edges {
            if e.kind == EdgeKind::Quantum {
                acc = acc.add(&rs.coroot(&e.label));
            }
        }
        acc
    }

    pub fn start(&self) -> Option<&WeylElt> {
        self.edges.first().map(|e| &e.source)
    }

    pub fn end(&self) -> Option<&WeylElt> {
        self.edges.last().map(|e| &e.target)
    }
}

/// A total (reflection) order on the positive roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionOrder {
    roots: Vec<Root>,
    pos: HashMap<Vec<i64>, usize>,
}

impl ReflectionOrder {
    pub fn new(roots: Vec<Root>) -> ReflectionOrder {
        let pos = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.0.clone(), i))
            .collect();
        ReflectionOrder { roots, pos }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn position(&self, root: &Root) -> usize {
        self.pos[&root.0]
    }

    /// The reversed order (also a reflection order).
    pub fn reversed(&self) -> ReflectionOrder {
        let mut roots = self.roots.clone();
        roots.reverse();
        ReflectionOrder::new(roots)
    }

    /// Betweenness axiom: whenever gamma = a*alpha + b*beta with a, b > 0,
    /// gamma lies strictly between alpha and beta in the order.
    pub fn validate(&self, rs: &RootSystem) -> bool {
        if self.roots.len() != rs.num_positive_roots() {
            return false;
        }
        let n = self.roots.len();
        for i in 0..n {
            for j in i + 1..n {
                for gamma in rs.positive_roots() {
                    if gamma == &self.roots[i] || gamma == &self.roots[j] {
                        continue;
                    }
                    if let Some((a, b)) =
                        decompose(gamma, &self.roots[i], &self.roots[j])
                    {
                        let zero = Ratio::new(0, 1);
                        if a > zero && b > zero {
                            let k = self.position(gamma);
                            if !(i < k && k < j) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Solve gamma = a*u + b*v over the rationals, if possible.
fn decompose(gamma: &Root, u: &Root, v: &Root) -> Option<(Ratio<i64>, Ratio<i64>)> {
    let n = gamma.0.len();
    // Find two coordinates with a nonzero 2x2 determinant.
    for i in 0..n {
        for j in i + 1..n {
            let det = u.0[i] * v.0[j] - u.0[j] * v.0[i];
            if det != 0 {
                let a = Ratio::new(gamma.0[i] * v.0[j] - gamma.0[j] * v.0[i], det);
                let b = Ratio::new(u.0[i] * gamma.0[j] - u.0[j] * gamma.0[i], det);
                let ok = (0..n).all(|k| {
                    a * Ratio::new(u.0[k], 1) + b * Ratio::new(v.0[k], 1)
                        == Ratio::new(gamma.0[k], 1)
                });
                return ok.then_some((a, b));
            }
        }
    }
    // u, v parallel (impossible for distinct positive roots in a reduced system).
    None
}

/// The reflection order induced by a reduced word of the longest element:
/// beta_k = s_{i_1} ... s_{i_{k-1}} (alpha_{i_k}).
pub fn reflection_order_from_word(rs: &RootSystem, word: &[usize]) -> Result<ReflectionOrder> {
    if word.len() != rs.num_positive_roots() || rs.from_word(word).length() as usize != word.len()
    {
        return Err(Error::NonReducedWord);
    }
    let mut roots = Vec::with_capacity(word.len());
    let mut prefix = rs.identity();
    for &i in word {
        roots.push(prefix.apply_root(&rs.simple_root(i)));
        prefix = rs.mul(&prefix, &rs.simple_reflection(i));
    }
    Ok(ReflectionOrder::new(roots))
}

/// Key of the hyperplane H_{beta,-l} in the lexicographic chain:
/// (1/<lambda, beta^v>) (l, c_1, ..., c_r) where beta^v = sum c_i alpha_i^v.
pub fn lex_key(rs: &RootSystem, lambda: &Weight, beta: &Root, l: i64) -> Vec<Ratio<i64>> {
    let p = lambda.pair(&rs.coroot(beta));
    assert!(p.is_integer() && *p.numer() > 0);
    let p = p.to_integer();
    let mut key = vec![Ratio::new(l, p)];
    for &c in &rs.coroot(beta).0 {
        key.push(Ratio::new(c, p));
    }
    key
}

/// The lambda-adapted reflection order: the roots of Phi^+ minus Phi_J^+
/// first, sorted by the position of H_{beta,0} in the lex lambda-chain, then
/// the roots of Phi_J^+ in a fixed reflection order of the subsystem.
pub fn lambda_reflection_order(
    rs: &RootSystem,
    lambda: &Weight,
    j: &ParabolicSubset,
) -> Result<ReflectionOrder> {
    let top = parabolic_top_order(rs, j)?;
    lambda_reflection_order_with_top(rs, lambda, j, top)
}

/// Like [`lambda_reflection_order`], with an explicit order on Phi_J^+.
pub fn lambda_reflection_order_with_top(
    rs: &RootSystem,
    lambda: &Weight,
    j: &ParabolicSubset,
    top: Vec<Root>,
) -> Result<ReflectionOrder> {
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(format!("{lambda:?}")));
    }
    if j != &ParabolicSubset::stabilizer(lambda) {
        return Err(Error::InvalidArgument(
            "J must be the stabilizer of lambda".into(),
        ));
    }
    let mut bottom: Vec<Root> = rs
        .positive_roots()
        .iter()
        .filter(|beta| !j.supports_root(beta))
        .cloned()
        .collect();
    bottom.sort_by_key(|beta| lex_key(rs, lambda, beta, 0));
    bottom.extend(top);
    Ok(ReflectionOrder::new(bottom))
}

/// A reflection order on Phi_J^+, from the lexicographically smallest
/// reduced word of the longest element of W_J.
pub fn parabolic_top_order(rs: &RootSystem, j: &ParabolicSubset) -> Result<Vec<Root>> {
    let wj = rs.longest_parabolic(j)?;
    let word = rs.reduced_word(&wj);
    let mut roots = Vec::with_capacity(word.len());
    let mut prefix = rs.identity();
    for &i in &word {
        roots.push(prefix.apply_root(&rs.simple_root(i)));
        prefix = rs.mul(&prefix, &rs.simple_reflection(i));
    }
    Ok(roots)
}

/// The quantum Bruhat graph QB(W^J), built once and then queried read-only.
#[derive(Debug, Clone)]
pub struct Qbg {
    pub rs: RootSystem,
    pub j: ParabolicSubset,
    verts: Vec<WeylElt>,
    vert_index: HashMap<WeylElt, usize>,
    labels: Vec<Root>,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    radj: Vec<Vec<usize>>,
}

impl Qbg {
    pub fn new(rs: &RootSystem, j: &ParabolicSubset) -> Result<Qbg> {
        let verts: Vec<WeylElt> = rs
            .weyl_elements()?
            .into_iter()
            .filter(|w| rs.is_min_rep(w, j))
            .collect();
        let vert_index: HashMap<WeylElt, usize> = verts
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let labels: Vec<Root> = rs
            .positive_roots()
            .iter()
            .filter(|beta| !j.supports_root(beta))
            .cloned()
            .collect();
        let two_rho_pair: Vec<i64> = {
            // 2 <rho - rho_J, beta^v> for each label (always an integer,
            // though the pairing itself may be half-integral)
            let rho_j = j.rho_j(rs);
            let diff = rs.rho().sub(&rho_j);
            labels
                .iter()
                .map(|b| {
                    let p = diff.pair(&rs.coroot(b)) * Ratio::new(2, 1);
                    assert!(p.is_integer());
                    p.to_integer()
                })
                .collect()
        };
        let mut edges = Vec::new();
        let mut adj = vec![Vec::new(); verts.len()];
        let mut radj = vec![Vec::new(); verts.len()];
        for (src, w) in verts.iter().enumerate() {
            for (li, beta) in labels.iter().enumerate() {
                let v = rs.min_coset_rep(&rs.mul(w, &rs.reflection(beta)), j);
                let dl = v.length() as i64 - w.length() as i64;
                let kind = if dl == 1 {
                    EdgeKind::Bruhat
                } else if dl == 1 - two_rho_pair[li] {
                    EdgeKind::Quantum
                } else {
                    continue;
                };
                let tgt = vert_index[&v];
                adj[src].push(edges.len());
                radj[tgt].push(edges.len());
                edges.push(Edge {
                    src,
                    tgt,
                    label: li,
                    kind,
                });
            }
        }
        Ok(Qbg {
            rs: rs.clone(),
            j: j.clone(),
            verts,
            vert_index,
            labels,
            edges,
            adj,
            radj,
        })
    }

    pub fn vertices(&self) -> &[WeylElt] {
        &self.verts
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    fn vid(&self, w: &WeylElt) -> usize {
        *self
            .vert_index
            .get(w)
            .unwrap_or_else(|| panic!("not a vertex of QB(W^J)"))
    }

    fn export_edge(&self, e: &Edge) -> QbgEdge {
        QbgEdge {
            source: self.verts[e.src].clone(),
            target: self.verts[e.tgt].clone(),
            label: self.labels[e.label].clone(),
            kind: e.kind,
        }
    }

    pub fn edges(&self) -> Vec<QbgEdge> {
        self.edges.iter().map(|e| self.export_edge(e)).collect()
    }

    /// Is w -> floor(w s_beta) an edge, and of which kind?
    pub fn edge_kind(&self, w: &WeylElt, beta: &Root) -> Option<EdgeKind> {
        let src = self.vid(w);
        let li = self.labels.iter().position(|b| b == beta)?;
        self.adj[src]
            .iter()
            .find(|&&ei| self.edges[ei].label == li)
            .map(|&ei| self.edges[ei].kind)
    }

    /// Does the edge survive in QB_{b lambda}: b <lambda, beta^v> integral?
    fn edge_b_ok(&self, e: &Edge, lambda: &Weight, b: Ratio<i64>) -> bool {
        (b * lambda.pair(&self.rs.coroot(&self.labels[e.label]))).is_integer()
    }

    /// BFS distances from src over edges passing the filter.
    fn distances_from_filtered<F: Fn(&Edge) -> bool>(&self, src: usize, f: F) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.verts.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &ei in &self.adj[u] {
                let e = &self.edges[ei];
                if f(e) && dist[e.tgt].is_none() {
                    dist[e.tgt] = Some(du + 1);
                    queue.push_back(e.tgt);
                }
            }
        }
        dist
    }

    /// BFS distances from every vertex to tgt (reversed edges).
    fn distances_to(&self, tgt: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.verts.len()];
        dist[tgt] = Some(0);
        let mut queue = VecDeque::from([tgt]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &ei in &self.radj[u] {
                let e = &self.edges[ei];
                if dist[e.src].is_none() {
                    dist[e.src] = Some(du + 1);
                    queue.push_back(e.src);
                }
            }
        }
        dist
    }

    /// The length ell^J(v => w) of a shortest directed path from v to w,
    /// together with the weight wt^J of one such path.
    pub fn shortest_data(&self, v: &WeylElt, w: &WeylElt) -> (u32, Coroot) {
        let src = self.vid(v);
        let tgt = self.vid(w);
        let mut dist = vec![None; self.verts.len()];
        let mut wt: Vec<Option<Coroot>> = vec![None; self.verts.len()];
        dist[src] = Some(0u32);
        wt[src] = Some(Coroot::zero(self.rs.rank));
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &ei in &self.adj[u] {
                let e = &self.edges[ei];
                if dist[e.tgt].is_none() {
                    dist[e.tgt] = Some(du + 1);
                    let mut acc = wt[u].clone().unwrap();
                    if e.kind == EdgeKind::Quantum {
                        acc = acc.add(&self.rs.coroot(&self.labels[e.label]));
                    }
                    wt[e.tgt] = Some(acc);
                    queue.push_back(e.tgt);
                }
            }
        }
        (
            dist[tgt].expect("QB(W^J) is strongly connected"),
            wt[tgt].clone().unwrap(),
        )
    }

    /// All distinct weights of shortest v -> w paths (oracle for
    /// well-definedness checks).
    pub fn all_shortest_weights(&self, v: &WeylElt, w: &WeylElt) -> BTreeSet<Coroot> {
        let src = self.vid(v);
        let tgt = self.vid(w);
        let dist = self.distances_from_filtered(src, |_| true);
        let rdist = self.distances_to(tgt);
        let total = dist[tgt].unwrap();
        // Collect weights over the DAG of tight edges by DFS with memoization.
        fn rec(
            g: &Qbg,
            u: usize,
            tgt: usize,
            dist: &[Option<u32>],
            rdist: &[Option<u32>],
            total: u32,
            memo: &mut HashMap<usize, BTreeSet<Coroot>>,
        ) -> BTreeSet<Coroot> {
            if u == tgt {
                return BTreeSet::from([Coroot::zero(g.rs.rank)]);
            }
            if let Some(s) = memo.get(&u) {
                return s.clone();
            }
            let mut out = BTreeSet::new();
            for &ei in &g.adj[u] {
                let e = &g.edges[ei];
                let tight = dist[e.tgt] == Some(dist[u].unwrap() + 1)
                    && rdist[e.tgt].map(|d| dist[e.tgt].unwrap() + d) == Some(total);
                if tight {
                    let tails = rec(g, e.tgt, tgt, dist, rdist, total, memo);
                    for t in tails {
                        if e.kind == EdgeKind::Quantum {
                            out.insert(t.add(&g.rs.coroot(&g.labels[e.label])));
                        } else {
                            out.insert(t);
                        }
                    }
                }
            }
            memo.insert(u, out.clone());
            out
        }
        let mut memo = HashMap::new();
        rec(self, src, tgt, &dist, &rdist, total, &mut memo)
    }

    pub fn is_strongly_connected(&self) -> bool {
        let fwd = self.distances_from_filtered(0, |_| true);
        let bwd = self.distances_to(0);
        fwd.iter().all(|d| d.is_some()) && bwd.iter().all(|d| d.is_some())
    }

    /// Is there a directed path from v to w using only edges of QB_{b lambda}?
    pub fn connected_in_b(&self, lambda: &Weight, b: Ratio<i64>, v: &WeylElt, w: &WeylElt) -> bool {
        let src = self.vid(v);
        let tgt = self.vid(w);
        let dist = self.distances_from_filtered(src, |e| self.edge_b_ok(e, lambda, b));
        dist[tgt].is_some()
    }

    /// Is every edge of the path allowed in QB_{b lambda}?
    pub fn path_in_b(&self, path: &QbgPath, lambda: &Weight, b: Ratio<i64>) -> bool {
        path.edges
            .iter()
            .all(|e| (b * lambda.pair(&self.rs.coroot(&e.label))).is_integer())
    }

    /// The unique path from v to w whose labels are strictly increasing
    /// (or decreasing) with respect to the given reflection order.
    pub fn increasing_path(
        &self,
        v: &WeylElt,
        w: &WeylElt,
        order: &ReflectionOrder,
        decreasing: bool,
    ) -> Result<QbgPath> {
        let paths = self.monotone_paths(v, |x| x == w, order, decreasing, None);
        match <[Vec<usize>; 1]>::try_from(paths) {
            Ok([p]) => Ok(self.build_path(&p)),
            Err(paths) => Err(Error::InvariantViolation(format!(
                "expected a unique monotone path, found {}",
                paths.len()
            ))),
        }
    }

    fn build_path(&self, edge_ids: &[usize]) -> QbgPath {
        QbgPath {
            edges: edge_ids
                .iter()
                .map(|&ei| self.export_edge(&self.edges[ei]))
                .collect(),
        }
    }

    /// All paths from v whose endpoint satisfies `accept`, with strictly
    /// monotone labels, optionally restricted to labels outside Phi_J^+.
    fn monotone_paths<F: Fn(&WeylElt) -> bool>(
        &self,
        v: &WeylElt,
        accept: F,
        order: &ReflectionOrder,
        decreasing: bool,
        label_filter: Option<&ParabolicSubset>,
    ) -> Vec<Vec<usize>> {
        let src = self.vid(v);
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.monotone_dfs(src, None, order, decreasing, label_filter, &accept, &mut stack, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn monotone_dfs<F: Fn(&WeylElt) -> bool>(
        &self,
        u: usize,
        last: Option<usize>,
        order: &ReflectionOrder,
        decreasing: bool,
        label_filter: Option<&ParabolicSubset>,
        accept: &F,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if accept(&self.verts[u]) {
            out.push(stack.clone());
        }
        for &ei in &self.adj[u] {
            let e = &self.edges[ei];
            let root = &self.labels[e.label];
            if let Some(j) = label_filter {
                if j.supports_root(root) {
                    continue;
                }
            }
            let p = order.position(root);
            let ok = match last {
                None => true,
                Some(lp) => {
                    if decreasing {
                        p < lp
                    } else {
                        p > lp
                    }
                }
            };
            if ok {
                stack.push(ei);
                self.monotone_dfs(e.tgt, Some(p), order, decreasing, label_filter, accept, stack, out);
                stack.pop();
            }
        }
    }

    /// The unique path between two given elements with strictly increasing
    /// labels (w.r.t. `order`) lying outside Phi_J^+.
    pub fn restricted_increasing_path(
        &self,
        from: &WeylElt,
        to: &WeylElt,
        order: &ReflectionOrder,
        j: &ParabolicSubset,
    ) -> Result<QbgPath> {
        let paths = self.monotone_paths(from, |x| x == to, order, false, Some(j));
        match <[Vec<usize>; 1]>::try_from(paths) {
            Ok([p]) => Ok(self.build_path(&p)),
            Err(paths) => Err(Error::InvariantViolation(format!(
                "expected a unique restricted monotone path, found {}",
                paths.len()
            ))),
        }
    }

    /// The quantum right Deodhar lift: the unique x in vW_J minimizing
    /// ell(w => x). Requires J = {} for this graph.
    pub fn lift_min(&self, v: &WeylElt, j: &ParabolicSubset, w: &WeylElt) -> Result<WeylElt> {
        assert!(self.j.is_empty(), "lifts are computed in QB(W)");
        let dist = self.distances_from_filtered(self.vid(w), |_| true);
        self.coset_argmin(v, j, |x| dist[self.vid(x)].unwrap())
    }

    /// The quantum left Deodhar lift: the unique x in wW_J minimizing
    /// ell(x => v). Requires J = {} for this graph.
    pub fn lift_max(&self, w: &WeylElt, j: &ParabolicSubset, v: &WeylElt) -> Result<WeylElt> {
        assert!(self.j.is_empty(), "lifts are computed in QB(W)");
        let dist = self.distances_to(self.vid(v));
        self.coset_argmin(w, j, |x| dist[self.vid(x)].unwrap())
    }

    fn coset_argmin<F: Fn(&WeylElt) -> u32>(
        &self,
        v: &WeylElt,
        j: &ParabolicSubset,
        dist: F,
    ) -> Result<WeylElt> {
        let coset = self.rs.coset(v, j)?;
        let min = coset.iter().map(&dist).min().unwrap();
        let mins: Vec<&WeylElt> = coset.iter().filter(|x| dist(x) == min).collect();
        match mins[..] {
            [x] => Ok(x.clone()),
            _ => Err(Error::InvariantViolation(format!(
                "Deodhar lift is not unique: {} minimizers",
                mins.len()
            ))),
        }
    }

    /// The unique shellability path behind the Deodhar lifts.
    ///
    /// `right`: the path from sigma*w_J into tau*W_J with labels outside
    /// Phi_J^+, strictly increasing in the given order (use the
    /// lambda-adapted order); it ends at the right lift.
    /// `left` (`right = false`): the path from some x in sigma*W_J to
    /// tau*w_J, strictly increasing in the reversed order.
    pub fn deodhar_path(
        &self,
        sigma: &WeylElt,
        tau: &WeylElt,
        w_j: &WeylElt,
        j: &ParabolicSubset,
        order: &ReflectionOrder,
        right: bool,
    ) -> Result<QbgPath> {
        assert!(self.j.is_empty(), "Deodhar paths live in QB(W)");
        let paths = if right {
            let start = self.rs.mul(sigma, w_j);
            let tau_rep = self.rs.min_coset_rep(tau, j);
            self.monotone_paths(
                &start,
                |x| self.rs.min_coset_rep(x, j) == tau_rep,
                order,
                false,
                Some(j),
            )
        } else {
            let end = self.rs.mul(tau, w_j);
            let rev = order.reversed();
            let mut all = Vec::new();
            for x in self.rs.coset(sigma, j)? {
                all.extend(self.monotone_paths(&x, |y| y == &end, &rev, false, Some(j)));
            }
            all
        };
        match <[Vec<usize>; 1]>::try_from(paths) {
            Ok([p]) => Ok(self.build_path(&p)),
            Err(paths) => Err(Error::InvariantViolation(format!(
                "expected a unique Deodhar path, found {}",
                paths.len()
            ))),
        }
    }

    fn node_name(&self, w: &WeylElt) -> String {
        let word = self.rs.reduced_word(w);
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter().fold(String::new(), |mut s, i| {
                let _ = write!(s, "s{}", i + 1);
                s
            })
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph qbg {\n");
        for w in &self.verts {
            let _ = writeln!(out, "  \"{}\";", self.node_name(w));
        }
        for e in &self.edges {
            let style = match e.kind {
                EdgeKind::Bruhat => "solid",
                EdgeKind::Quantum => "dashed",
            };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{:?}\", style={}];",
                self.node_name(&self.verts[e.src]),
                self.node_name(&self.verts[e.tgt]),
                self.labels[e.label].0,
                style
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "type": self.rs.cartan_type.to_string(),
            "rank": self.rs.rank,
            "parabolic": self.j.nodes.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "vertices": self.verts.iter().map(|w| self.node_name(w)).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "source": self.node_name(&self.verts[e.src]),
                "target": self.node_name(&self.verts[e.tgt]),
                "label": self.labels[e.label].0,
                "kind": match e.kind { EdgeKind::Bruhat => "bruhat", EdgeKind::Quantum => "quantum" },
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::CartanType;

    fn graph(ct: CartanType, rank: usize, j: &[usize]) -> Qbg {
        let rs = RootSystem::new(ct, rank).unwrap();
        Qbg::new(&rs, &ParabolicSubset::new(j.iter().copied())).unwrap()
    }

    #[test]
    fn a1_edges() {
        let g = graph(CartanType::A, 1, &[]);
        let edges = g.edges();
        assert_eq!(edges.len(), 2);
        let e = g.rs.identity();
        let s1 = g.rs.simple_reflection(0);
        assert_eq!(g.edge_kind(&e, &g.rs.simple_root(0)), Some(EdgeKind::Bruhat));
        assert_eq!(g.edge_kind(&s1, &g.rs.simple_root(0)), Some(EdgeKind::Quantum));
    }

    #[test]
    fn a2_edge_for_worked_example() {
        let g = graph(CartanType::A, 2, &[]);
        let s1 = g.rs.simple_reflection(0);
        // s1 -> s1 s2 labeled alpha_2 is a Bruhat edge
        assert_eq!(g.edge_kind(&s1, &g.rs.simple_root(1)), Some(EdgeKind::Bruhat));
    }

    #[test]
    fn parabolic_edges_match_definition() {
        // Brute-force the defining condition independently of the builder.
        let rs = RootSystem::new(CartanType::A, 2).unwrap();
        let j = ParabolicSubset::new([1]);
        let g = Qbg::new(&rs, &j).unwrap();
        let rho_j = j.rho_j(&rs);
        let diff = rs.rho().sub(&rho_j);
        let mut expected = 0usize;
        for w in g.vertices() {
            for beta in rs.positive_roots() {
                if j.supports_root(beta) {
                    continue;
                }
                let v = rs.min_coset_rep(&rs.mul(w, &rs.reflection(beta)), &j);
                let dl = v.length() as i64 - w.length() as i64;
                let two_pair = (diff.pair(&rs.coroot(beta)) * Ratio::new(2, 1)).to_integer();
                if dl == 1 || dl == 1 - two_pair {
                    expected += 1;
                }
            }
        }
        assert_eq!(g.num_edges(), expected);
        assert!(g.is_strongly_connected());
    }

    #[test]
    fn shortest_data_examples() {
        let g = graph(CartanType::A, 2, &[]);
        let e = g.rs.identity();
        let s1 = g.rs.simple_reflection(0);
        assert_eq!(g.shortest_data(&e, &e), (0, Coroot::zero(2)));
        // s1 -> e is one quantum step with weight alpha_1^v
        assert_eq!(g.shortest_data(&s1, &e), (1, Coroot(vec![1, 0])));
    }

    #[test]
    fn shortest_weights_well_defined() {
        let g = graph(CartanType::A, 2, &[]);
        for v in g.vertices() {
            for w in g.vertices() {
                let weights = g.all_shortest_weights(v, w);
                assert_eq!(weights.len(), 1, "multiple shortest weights {v:?} {w:?}");
                assert_eq!(weights.first().unwrap(), &g.shortest_data(v, w).1);
            }
        }
    }

    #[test]
    fn reflection_order_from_words() {
        let rs = RootSystem::new(CartanType::A, 2).unwrap();
        let o = reflection_order_from_word(&rs, &[0, 1, 0]).unwrap();
        assert_eq!(
            o.roots(),
            &[Root(vec![1, 0]), Root(vec![1, 1]), Root(vec![0, 1])]
        );
        let o2 = reflection_order_from_word(&rs, &[1, 0, 1]).unwrap();
        assert_eq!(
            o2.roots(),
            &[Root(vec![0, 1]), Root(vec![1, 1]), Root(vec![1, 0])]
        );
        assert!(o.validate(&rs));
        assert!(o2.validate(&rs));
        assert!(reflection_order_from_word(&rs, &[0, 1]).is_err());
        assert!(reflection_order_from_word(&rs, &[0, 0, 0]).is_err());
    }

    #[test]
    fn b2_reflection_order_valid() {
        let rs = RootSystem::new(CartanType::B, 2).unwrap();
        let w0 = rs.weyl_elements().unwrap().last().unwrap().clone();
        let word = rs.reduced_word(&w0);
        let o = reflection_order_from_word(&rs, &word).unwrap();
        assert_eq!(o.roots().len(), 4);
        assert!(o.validate(&rs));
        assert!(o.reversed().validate(&rs));
        // a non-reflection order must fail validation
        let mut bad = o.roots().to_vec();
        bad.swap(0, 1);
        assert!(!ReflectionOrder::new(bad).validate(&rs));
    }

    #[test]
    fn lambda_order_examples() {
        let rs = RootSystem::new(CartanType::A, 2).unwrap();
        // regular lambda: all three roots, ordered by the lex key
        let lam = Weight::integral(vec![1, 1]);
        let o = lambda_reflection_order(&rs, &lam, &ParabolicSubset::empty()).unwrap();
        let mut expected: Vec<Root> = rs.positive_roots().to_vec();
        expected.sort_by_key(|beta| lex_key(&rs, &lam, beta, 0));
        assert_eq!(o.roots(), &expected[..]);
        assert!(o.validate(&rs));

        // lambda = varpi_1: bottom {alpha_1, alpha_1 + alpha_2}, top {alpha_2}
        let lam = Weight::fundamental(2, 0);
        let j = ParabolicSubset::stabilizer(&lam);
        assert_eq!(j, ParabolicSubset::new([1]));
        let o = lambda_reflection_order(&rs, &lam, &j).unwrap();
        assert_eq!(
            o.roots(),
            &[Root(vec![1, 0]), Root(vec![1, 1]), Root(vec![0, 1])]
        );
        assert!(o.validate(&rs));

        let rs1 = RootSystem::new(CartanType::A, 1).unwrap();
        let o = lambda_reflection_order(&rs1, &Weight::fundamental(1, 0), &ParabolicSubset::empty())
            .unwrap();
        assert_eq!(o.roots(), &[Root(vec![1])]);
    }

    #[test]
    fn shellability_a2_and_b2() {
        for (ct, rank) in [(CartanType::A, 2), (CartanType::B, 2)] {
            let g = graph(ct, rank, &[]);
            let w0 = g.rs.weyl_elements().unwrap().last().unwrap().clone();
            let word = g.rs.reduced_word(&w0);
            let o = reflection_order_from_word(&g.rs, &word).unwrap();
            for v in g.vertices() {
                for w in g.vertices() {
                    for dec in [false, true] {
                        let p = g.increasing_path(v, w, &o, dec).unwrap();
                        assert_eq!(p.len() as u32, g.shortest_data(v, w).0);
                        if !p.is_empty() {
                            assert_eq!(p.start().unwrap(), v);
                            assert_eq!(p.end().unwrap(), w);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lift_examples_and_uniqueness() {
        let g = graph(CartanType::A, 2, &[]);
        let rs = &g.rs;
        let j = ParabolicSubset::new([1]);
        let s1 = rs.simple_reflection(0);
        let s2 = rs.simple_reflection(1);
        let s2s1 = rs.mul(&s2, &s1);
        // trivial: w already in the coset
        assert_eq!(g.lift_min(&s1, &j, &s1).unwrap(), s1);
        assert_eq!(g.lift_max(&s2, &j, &s2).unwrap(), s2);
        // derived: BFS-argmin over {s1, s1 s2}
        let lift = g.lift_min(&s1, &j, &s2s1).unwrap();
        let coset = rs.coset(&s1, &j).unwrap();
        let best = coset
            .iter()
            .min_by_key(|x| g.shortest_data(&s2s1, x).0)
            .unwrap();
        assert_eq!(&lift, best);

        // exhaustive uniqueness over S3
        for jset in [ParabolicSubset::new([0]), ParabolicSubset::new([1])] {
            for v in rs.weyl_elements().unwrap() {
                for w in rs.weyl_elements().unwrap() {
                    g.lift_min(&v, &jset, &w).unwrap();
                    g.lift_max(&v, &jset, &w).unwrap();
                }
            }
        }
    }

    #[test]
    fn deodhar_paths_match_lifts() {
        let g = graph(CartanType::A, 2, &[]);
        let rs = &g.rs;
        let lam = Weight::fundamental(2, 0);
        let j = ParabolicSubset::stabilizer(&lam);
        let order = lambda_reflection_order(rs, &lam, &j).unwrap();
        let reps: Vec<WeylElt> = rs
            .weyl_elements()
            .unwrap()
            .into_iter()
            .filter(|w| rs.is_min_rep(w, &j))
            .collect();
        let wjs = rs.parabolic_elements(&j).unwrap();
        for sigma in &reps {
            for tau in &reps {
                for wj in &wjs {
                    let p = g.deodhar_path(sigma, tau, wj, &j, &order, true).unwrap();
                    let start = rs.mul(sigma, wj);
                    let end = p.end().cloned().unwrap_or_else(|| start.clone());
                    assert_eq!(end, g.lift_min(tau, &j, &start).unwrap());

                    let p = g.deodhar_path(sigma, tau, wj, &j, &order, false).unwrap();
                    let end_elt = rs.mul(tau, wj);
                    let start_elt = p.start().cloned().unwrap_or_else(|| end_elt.clone());
                    assert_eq!(start_elt, g.lift_max(sigma, &j, &end_elt).unwrap());
                }
            }
        }
    }

    #[test]
    fn connectivity_various() {
        for (ct, rank) in [(CartanType::A, 3), (CartanType::B, 2), (CartanType::C, 2)] {
            let g = graph(ct, rank, &[]);
            assert!(g.is_strongly_connected());
            let g = graph(ct, rank, &[0]);
            assert!(g.is_strongly_connected());
        }
    }

    #[test]
    fn b_restricted_graph() {
        let g = graph(CartanType::A, 2, &[]);
        let lam = Weight::integral(vec![1, 1]);
        // b = 1: all edges survive; connectivity holds
        for v in g.vertices() {
            for w in g.vertices() {
                assert!(g.connected_in_b(&lam, Ratio::new(1, 1), v, w));
            }
        }
        // b = 1/2 with <lam, beta^v> = 1 for simple roots: only the long-root
        // edges survive, so some pairs disconnect
        let e = g.rs.identity();
        let s1 = g.rs.simple_reflection(0);
        assert!(!g.connected_in_b(&lam, Ratio::new(1, 2), &e, &s1));
    }

    #[test]
    fn exports_mention_all_vertices() {
        let g = graph(CartanType::A, 2, &[]);
        let dot = g.to_dot();
        assert!(dot.contains("s1s2s1") || dot.contains("s2s1s2"));
        let js = g.to_json();
        assert_eq!(js["vertices"].as_array().unwrap().len(), 6);
        assert_eq!(js["edges"].as_array().unwrap().len(), g.num_edges());
    }
}
