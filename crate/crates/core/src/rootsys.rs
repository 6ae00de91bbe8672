//! Finite irreducible root systems and Weyl group arithmetic.
//!
//! Roots live in the simple-root basis, coroots in the simple-coroot basis,
//! and weights in the fundamental-weight basis over a single positive
//! denominator. Everything is exact integer/rational arithmetic.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default cap on the Weyl group order for full-group enumeration.
pub const DEFAULT_GROUP_LIMIT: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A => write!(f, "A"),
            CartanType::B => write!(f, "B"),
            CartanType::C => write!(f, "C"),
            CartanType::D => write!(f, "D"),
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(CartanType::A),
            "B" | "b" => Ok(CartanType::B),
            "C" | "c" => Ok(CartanType::C),
            "D" | "d" => Ok(CartanType::D),
            other => Err(Error::UnsupportedType(other.to_string())),
        }
    }
}

/// A root, as integer coefficients in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i64>);

/// A coroot-lattice element, as integer coefficients in the simple-coroot basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coroot(pub Vec<i64>);

impl Root {
    pub fn is_positive(&self) -> bool {
        self.0.iter().any(|&c| c > 0)
    }

    /// +1 for positive roots, -1 for negative roots.
    pub fn sign(&self) -> i64 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }

    /// |beta| = sgn(beta) * beta.
    pub fn abs(&self) -> Root {
        if self.is_positive() {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|&c| -c).collect())
    }
}

impl Coroot {
    pub fn zero(rank: usize) -> Coroot {
        Coroot(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// All coefficients nonnegative, i.e. membership in Q^{v,+}.
    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Sum of the simple-coroot coefficients.
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Coroot) -> Coroot {
        Coroot(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Coroot {
        Coroot(self.0.iter().map(|&c| -c).collect())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A weight: integer numerators in the fundamental-weight basis over one
/// positive denominator, kept in reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    num: Vec<i64>,
    den: i64,
}

impl Weight {
    pub fn new(num: Vec<i64>, den: i64) -> Weight {
        assert!(den > 0, "denominator must be positive");
        let mut w = Weight { num, den };
        w.reduce();
        w
    }

    pub fn integral(num: Vec<i64>) -> Weight {
        Weight { num, den: 1 }
    }

    pub fn zero(rank: usize) -> Weight {
        Weight { num: vec![0; rank], den: 1 }
    }

    pub fn fundamental(rank: usize, i: usize) -> Weight {
        let mut num = vec![0; rank];
        num[i] = 1;
        Weight { num, den: 1 }
    }

    fn reduce(&mut self) {
        let mut g = self.den;
        for &c in &self.num {
            g = gcd(g, c);
            if g == 1 {
                return;
            }
        }
        if g > 1 {
            for c in &mut self.num {
                *c /= g;
            }
            self.den /= g;
        }
    }

    pub fn rank(&self) -> usize {
        self.num.len()
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn numerators(&self) -> &[i64] {
        &self.num
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0)
    }

    /// Coefficient of the i-th fundamental weight, as a rational.
    pub fn coeff(&self, i: usize) -> Ratio<i64> {
        Ratio::new(self.num[i], self.den)
    }

    pub fn is_dominant(&self) -> bool {
        self.num.iter().all(|&c| c >= 0)
    }

    pub fn is_antidominant(&self) -> bool {
        self.num.iter().all(|&c| c <= 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        let den = self.den / gcd(self.den, other.den) * other.den;
        let a = den / self.den;
        let b = den / other.den;
        Weight::new(
            self.num
                .iter()
                .zip(&other.num)
                .map(|(x, y)| x * a + y * b)
                .collect(),
            den,
        )
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Weight {
        Weight {
            num: self.num.iter().map(|&c| -c).collect(),
            den: self.den,
        }
    }

    pub fn scale(&self, s: Ratio<i64>) -> Weight {
        Weight::new(
            self.num.iter().map(|&c| c * s.numer()).collect(),
            self.den * s.denom(),
        )
    }

    /// <mu, xi> for a coroot-lattice element xi.
    pub fn pair(&self, xi: &Coroot) -> Ratio<i64> {
        let s: i64 = self.num.iter().zip(&xi.0).map(|(a, b)| a * b).sum();
        Ratio::new(s, self.den)
    }

    /// <mu, xi> when the value is known to be an integer.
    pub fn pair_int(&self, xi: &Coroot) -> i64 {
        let p = self.pair(xi);
        assert!(p.is_integer(), "pairing {p} is not integral");
        p.to_integer()
    }

    /// Dominant and anti-dominant parts: lambda = lambda^+ + lambda^-.
    pub fn split_signs(&self) -> (Weight, Weight) {
        assert!(self.is_integral());
        let plus = Weight::integral(self.num.iter().map(|&c| c.max(0)).collect());
        let minus = Weight::integral(self.num.iter().map(|&c| c.min(0)).collect());
        (plus, minus)
    }
}

/// A parabolic subset J of the Dynkin nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParabolicSubset {
    pub nodes: BTreeSet<usize>,
}

impl ParabolicSubset {
    pub fn new<I: IntoIterator<Item = usize>>(nodes: I) -> ParabolicSubset {
        ParabolicSubset {
            nodes: nodes.into_iter().collect(),
        }
    }

    pub fn empty() -> ParabolicSubset {
        ParabolicSubset { nodes: BTreeSet::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.nodes.contains(&i)
    }

    /// The stabilizer J_lambda = { i : <lambda, alpha_i^v> = 0 }.
    pub fn stabilizer(lambda: &Weight) -> ParabolicSubset {
        ParabolicSubset::new(
            (0..lambda.rank()).filter(|&i| lambda.coeff(i).is_zero()),
        )
    }

    /// Does the root have support inside J?
    pub fn supports_root(&self, root: &Root) -> bool {
        root.0
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || self.contains(i))
    }

    /// rho_J = half-sum of the positive roots of the subsystem.
    pub fn rho_j(&self, rs: &RootSystem) -> Weight {
        let mut acc = Weight::zero(rs.rank);
        for root in rs.positive_roots() {
            if self.supports_root(root) {
                acc = acc.add(&rs.root_weight(root));
            }
        }
        acc.scale(Ratio::new(1, 2))
    }
}

/// Root-system data for one of the supported irreducible types.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub rank: usize,
    /// cartan[i][j] = <alpha_j, alpha_i^v>.
    pub cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Root>,
    positive_coroots: Vec<Coroot>,
    root_index: HashMap<Vec<i64>, usize>,
    highest_root: usize,
    rho: Weight,
    coxeter_number: i64,
    pub group_limit: usize,
}

impl RootSystem {
    /// Build the root system of the given type and rank.
    pub fn new(cartan_type: CartanType, rank: usize) -> Result<RootSystem> {
        let supported = match cartan_type {
            CartanType::A => rank >= 1,
            CartanType::B | CartanType::C => rank >= 2,
            CartanType::D => rank >= 4,
        };
        if !supported {
            return Err(Error::UnsupportedType(format!("{cartan_type}{rank}")));
        }
        let cartan = cartan_matrix(cartan_type, rank);

        // Closure of the simple (root, coroot) pairs under simple reflections.
        let mut roots: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for i in 0..rank {
            let mut r = vec![0i64; rank];
            r[i] = 1;
            seen.insert(r.clone(), roots.len());
            queue.push_back(roots.len());
            roots.push((r.clone(), r));
        }
        while let Some(idx) = queue.pop_front() {
            let (root, coroot) = roots[idx].clone();
            for j in 0..rank {
                // <beta, alpha_j^v> and <alpha_j, beta^v>
                let pr: i64 = (0..rank).map(|k| root[k] * cartan[j][k]).sum();
                let pc: i64 = (0..rank).map(|k| coroot[k] * cartan[k][j]).sum();
                let mut nr = root.clone();
                nr[j] -= pr;
                let mut nc = coroot.clone();
                nc[j] -= pc;
                if !seen.contains_key(&nr) {
                    seen.insert(nr.clone(), roots.len());
                    queue.push_back(roots.len());
                    roots.push((nr, nc));
                }
            }
        }

        let mut positive: Vec<(Vec<i64>, Vec<i64>)> = roots
            .into_iter()
            .filter(|(r, _)| r.iter().any(|&c| c > 0))
            .collect();
        positive.sort_by_key(|(r, _)| (r.iter().sum::<i64>(), r.clone()));

        let positive_roots: Vec<Root> = positive.iter().map(|(r, _)| Root(r.clone())).collect();
        let positive_coroots: Vec<Coroot> =
            positive.iter().map(|(_, c)| Coroot(c.clone())).collect();
        let mut root_index = HashMap::new();
        for (i, r) in positive_roots.iter().enumerate() {
            root_index.insert(r.0.clone(), i);
        }
        let highest_root = positive_roots.len() - 1;
        let coxeter_number = positive_roots[highest_root].0.iter().sum::<i64>() + 1;
        let rho = Weight::integral(vec![1; rank]);

        Ok(RootSystem {
            cartan_type,
            rank,
            cartan,
            positive_roots,
            positive_coroots,
            root_index,
            highest_root,
            rho,
            coxeter_number,
            group_limit: DEFAULT_GROUP_LIMIT,
        })
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut r = vec![0; self.rank];
        r[i] = 1;
        Root(r)
    }

    pub fn highest_root(&self) -> &Root {
        &self.positive_roots[self.highest_root]
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    /// The Coxeter number h = height(theta) + 1.
    pub fn coxeter_number(&self) -> i64 {
        self.coxeter_number
    }

    /// Index of |beta| in the positive-root list.
    pub fn root_id(&self, root: &Root) -> usize {
        self.root_index[&root.abs().0]
    }

    /// The coroot beta^v of a (possibly negative) root.
    pub fn coroot(&self, root: &Root) -> Coroot {
        let id = self.root_id(root);
        let c = &self.positive_coroots[id];
        if root.is_positive() {
            c.clone()
        } else {
            c.neg()
        }
    }

    /// The root as a weight in the fundamental-weight basis.
    pub fn root_weight(&self, root: &Root) -> Weight {
        let num: Vec<i64> = (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.cartan[i][j] * root.0[j]).sum())
            .collect();
        Weight::integral(num)
    }

    /// <mu, beta^v> for a root beta.
    pub fn pair_root(&self, mu: &Weight, root: &Root) -> Ratio<i64> {
        mu.pair(&self.coroot(root))
    }

    /// An interior point of the fundamental alcove: rho / h.
    pub fn alcove_center(&self) -> Weight {
        self.rho.scale(Ratio::new(1, self.coxeter_number))
    }

    pub fn identity(&self) -> WeylElt {
        let images: Vec<Root> = (0..self.rank).map(|i| self.simple_root(i)).collect();
        WeylElt {
            images: images.clone(),
            inv_images: images,
            length: 0,
        }
    }

    pub fn simple_reflection(&self, i: usize) -> WeylElt {
        let images: Vec<Root> = (0..self.rank)
            .map(|j| {
                let mut r = vec![0i64; self.rank];
                r[j] = 1;
                r[i] -= self.cartan[i][j];
                Root(r)
            })
            .collect();
        WeylElt {
            images: images.clone(),
            inv_images: images,
            length: 1,
        }
    }

    /// The reflection s_beta for an arbitrary root beta.
    pub fn reflection(&self, root: &Root) -> WeylElt {
        let coroot = self.coroot(&root.abs());
        let abs = root.abs();
        let images: Vec<Root> = (0..self.rank)
            .map(|j| {
                // s_beta(alpha_j) = alpha_j - <alpha_j, beta^v> beta
                let p: i64 = (0..self.rank).map(|k| coroot.0[k] * self.cartan[k][j]).sum();
                let mut r = vec![0i64; self.rank];
                r[j] = 1;
                for k in 0..self.rank {
                    r[k] -= p * abs.0[k];
                }
                Root(r)
            })
            .collect();
        let length = self.length_of(&images);
        WeylElt {
            images: images.clone(),
            inv_images: images,
            length,
        }
    }

    fn length_of(&self, images: &[Root]) -> u32 {
        self.positive_roots
            .iter()
            .filter(|beta| !apply_images(images, beta).is_positive())
            .count() as u32
    }

    /// w1 * w2 (composition: first apply w2, then w1).
    pub fn mul(&self, w1: &WeylElt, w2: &WeylElt) -> WeylElt {
        let images: Vec<Root> = w2.images.iter().map(|r| w1.apply_root(r)).collect();
        let inv_images: Vec<Root> = w1.inv_images.iter().map(|r| w2.apply_root_inv(r)).collect();
        let length = self.length_of(&images);
        WeylElt {
            images,
            inv_images,
            length,
        }
    }

    pub fn from_word(&self, word: &[usize]) -> WeylElt {
        let mut w = self.identity();
        for &i in word {
            w = self.mul(&w, &self.simple_reflection(i));
        }
        w
    }

    /// The lexicographically smallest reduced word of w.
    pub fn reduced_word(&self, w: &WeylElt) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        while cur.length > 0 {
            let i = (0..self.rank)
                .find(|&i| !cur.inv_images[i].is_positive())
                .expect("non-identity element must have a left descent");
            word.push(i);
            cur = self.mul(&self.simple_reflection(i), &cur);
        }
        word
    }

    /// Enumerate the full Weyl group (BFS, deterministic order).
    pub fn weyl_elements(&self) -> Result<Vec<WeylElt>> {
        let mut elems: Vec<WeylElt> = vec![self.identity()];
        let mut seen: BTreeSet<Vec<Root>> = BTreeSet::new();
        seen.insert(elems[0].images.clone());
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        let simples: Vec<WeylElt> = (0..self.rank).map(|i| self.simple_reflection(i)).collect();
        while let Some(idx) = queue.pop_front() {
            let w = elems[idx].clone();
            for s in &simples {
                let next = self.mul(&w, s);
                if seen.insert(next.images.clone()) {
                    if elems.len() >= self.group_limit {
                        return Err(Error::SizeLimit { limit: self.group_limit });
                    }
                    elems.push(next);
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        elems.sort_by(|a, b| (a.length, &a.images).cmp(&(b.length, &b.images)));
        Ok(elems)
    }

    /// Enumerate the parabolic subgroup W_J.
    pub fn parabolic_elements(&self, j: &ParabolicSubset) -> Result<Vec<WeylElt>> {
        let mut elems: Vec<WeylElt> = vec![self.identity()];
        let mut seen: BTreeSet<Vec<Root>> = BTreeSet::new();
        seen.insert(elems[0].images.clone());
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        let simples: Vec<(usize, WeylElt)> = j
            .nodes
            .iter()
            .map(|&i| (i, self.simple_reflection(i)))
            .collect();
        while let Some(idx) = queue.pop_front() {
            let w = elems[idx].clone();
            for (_, s) in &simples {
                let next = self.mul(&w, s);
                if seen.insert(next.images.clone()) {
                    if elems.len() >= self.group_limit {
                        return Err(Error::SizeLimit { limit: self.group_limit });
                    }
                    elems.push(next);
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        elems.sort_by(|a, b| (a.length, &a.images).cmp(&(b.length, &b.images)));
        Ok(elems)
    }

    /// The longest element of W_J.
    pub fn longest_parabolic(&self, j: &ParabolicSubset) -> Result<WeylElt> {
        let elems = self.parabolic_elements(j)?;
        Ok(elems.last().unwrap().clone())
    }

    /// The minimal coset representative of wW_J.
    pub fn min_coset_rep(&self, w: &WeylElt, j: &ParabolicSubset) -> WeylElt {
        let mut cur = w.clone();
        loop {
            match j.nodes.iter().find(|&&i| !cur.images[i].is_positive()) {
                Some(&i) => cur = self.mul(&cur, &self.simple_reflection(i)),
                None => return cur,
            }
        }
    }

    /// Is w a minimal coset representative for J?
    pub fn is_min_rep(&self, w: &WeylElt, j: &ParabolicSubset) -> bool {
        j.nodes.iter().all(|&i| w.images[i].is_positive())
    }

    /// The coset wW_J as a list of elements.
    pub fn coset(&self, w: &WeylElt, j: &ParabolicSubset) -> Result<Vec<WeylElt>> {
        let rep = self.min_coset_rep(w, j);
        Ok(self
            .parabolic_elements(j)?
            .iter()
            .map(|x| self.mul(&rep, x))
            .collect())
    }
}

fn apply_images(images: &[Root], root: &Root) -> Root {
    let rank = images.len();
    let mut out = vec![0i64; rank];
    for (j, &c) in root.0.iter().enumerate() {
        if c != 0 {
            for k in 0..rank {
                out[k] += c * images[j].0[k];
            }
        }
    }
    Root(out)
}

fn cartan_matrix(ct: CartanType, rank: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        a[i][i] = 2;
    }
    let chain_len = match ct {
        CartanType::D => rank - 1,
        _ => rank,
    };
    for i in 0..chain_len.saturating_sub(1) {
        a[i][i + 1] = -1;
        a[i + 1][i] = -1;
    }
    match ct {
        CartanType::A => {}
        CartanType::B => {
            // alpha_{r-1} short: <alpha_{r-2}, alpha_{r-1}^v> = -2.
            a[rank - 1][rank - 2] = -2;
        }
        CartanType::C => {
            // alpha_{r-1} long: <alpha_{r-1}, alpha_{r-2}^v> = -2.
            a[rank - 2][rank - 1] = -2;
        }
        CartanType::D => {
            a[rank - 3][rank - 1] = -1;
            a[rank - 1][rank - 3] = -1;
        }
    }
    a
}

/// A Weyl group element, stored as its action on the simple roots together
/// with the inverse action and the cached length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElt {
    images: Vec<Root>,
    inv_images: Vec<Root>,
    length: u32,
}

impl WeylElt {
    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    pub fn inverse(&self) -> WeylElt {
        WeylElt {
            images: self.inv_images.clone(),
            inv_images: self.images.clone(),
            length: self.length,
        }
    }

    /// w(beta) for a root beta.
    pub fn apply_root(&self, root: &Root) -> Root {
        apply_images(&self.images, root)
    }

    /// w^{-1}(beta) for a root beta.
    pub fn apply_root_inv(&self, root: &Root) -> Root {
        apply_images(&self.inv_images, root)
    }

    /// w(xi) for a coroot-lattice element.
    pub fn apply_coroot(&self, rs: &RootSystem, xi: &Coroot) -> Coroot {
        let mut out = vec![0i64; rs.rank];
        for (i, &c) in xi.0.iter().enumerate() {
            if c != 0 {
                let img = rs.coroot(&self.images[i]);
                for k in 0..rs.rank {
                    out[k] += c * img.0[k];
                }
            }
        }
        Coroot(out)
    }

    /// w(mu) for a weight.
    pub fn apply_weight(&self, rs: &RootSystem, mu: &Weight) -> Weight {
        // <w mu, alpha_i^v> = <mu, w^{-1}(alpha_i^v)> = <mu, (w^{-1} alpha_i)^v>
        let den = mu.den();
        let num: Vec<i64> = (0..rs.rank)
            .map(|i| {
                let c = rs.coroot(&self.inv_images[i]);
                mu.numerators()
                    .iter()
                    .zip(&c.0)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Weight::new(num, den)
    }

    /// Is w(alpha_i) a negative root (right descent)?
    pub fn has_right_descent(&self, i: usize) -> bool {
        !self.images[i].is_positive()
    }

    /// One-line notation, when this is a type-A element.
    pub fn to_perm(&self, rs: &RootSystem) -> Perm {
        assert_eq!(rs.cartan_type, CartanType::A);
        let word = rs.reduced_word(self);
        let mut p = Perm::identity(rs.rank + 1);
        for &i in &word {
            p = p.mul(&Perm::transposition(rs.rank + 1, i + 1, i + 2));
        }
        p
    }
}

/// A permutation of [n] in one-line notation (values 1..=n).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((1..=n).collect())
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Perm {
        let mut v: Vec<usize> = (1..=n).collect();
        v.swap(i - 1, j - 1);
        Perm(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// w(i), 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// Composition: (self * other)(i) = self(other(i)).
    pub fn mul(&self, other: &Perm) -> Perm {
        Perm((1..=self.n()).map(|i| self.apply(other.apply(i))).collect())
    }

    /// Right multiplication by the transposition (i, j): swaps positions i, j.
    pub fn swap_positions(&self, i: usize, j: usize) -> Perm {
        let mut v = self.0.clone();
        v.swap(i - 1, j - 1);
        Perm(v)
    }

    pub fn inversions(&self) -> u32 {
        let n = self.n();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.0[i] > self.0[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// The corresponding element of the type A_{n-1} Weyl group.
    pub fn to_weyl(&self, rs: &RootSystem) -> WeylElt {
        assert_eq!(rs.cartan_type, CartanType::A);
        assert_eq!(rs.rank + 1, self.n());
        let mut word = Vec::new();
        let mut p = self.clone();
        while let Some(i) = (1..p.n()).find(|&i| p.apply(i) > p.apply(i + 1)) {
            p = p.swap_positions(i, i + 1);
            word.push(i - 1);
        }
        word.reverse();
        rs.from_word(&word)
    }

    pub fn parse(s: &str) -> Result<Perm> {
        let v: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidArgument(format!("bad permutation '{s}'")))?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InvalidArgument(format!("bad permutation '{s}'")))?
        };
        let n = v.len();
        let mut seen = vec![false; n + 1];
        for &x in &v {
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidArgument(format!("bad permutation '{s}'")));
            }
            seen[x] = true;
        }
        Ok(Perm(v))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for &x in &self.0 {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let strs: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", strs.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(ct: CartanType, rank: usize) -> RootSystem {
        RootSystem::new(ct, rank).unwrap()
    }

    #[test]
    fn a1_basics() {
        let r = rs(CartanType::A, 1);
        assert_eq!(r.num_positive_roots(), 1);
        assert_eq!(r.coxeter_number(), 2);
        assert_eq!(r.rho(), &Weight::integral(vec![1]));
    }

    #[test]
    fn a2_basics() {
        let r = rs(CartanType::A, 2);
        assert_eq!(r.num_positive_roots(), 3);
        assert_eq!(r.highest_root(), &Root(vec![1, 1]));
        assert_eq!(r.coxeter_number(), 3);
    }

    #[test]
    fn b2_enumeration() {
        let r = rs(CartanType::B, 2);
        assert_eq!(r.num_positive_roots(), 4);
        assert_eq!(r.coxeter_number(), 4);
        assert_eq!(r.weyl_elements().unwrap().len(), 8);
    }

    #[test]
    fn root_count_invariant() {
        for (ct, rank) in [
            (CartanType::A, 3),
            (CartanType::B, 3),
            (CartanType::C, 3),
            (CartanType::D, 4),
        ] {
            let r = rs(ct, rank);
            let h = r.coxeter_number();
            assert_eq!(
                r.num_positive_roots() as i64,
                rank as i64 * h / 2,
                "{ct}{rank}"
            );
        }
    }

    #[test]
    fn fundamental_weight_pairings() {
        for (ct, rank) in [(CartanType::B, 3), (CartanType::C, 2), (CartanType::D, 4)] {
            let r = rs(ct, rank);
            for i in 0..rank {
                let wi = Weight::fundamental(rank, i);
                for j in 0..rank {
                    let expected = i64::from(i == j);
                    assert_eq!(wi.pair_int(&r.coroot(&r.simple_root(j))), expected);
                }
                assert_eq!(r.rho().pair_int(&r.coroot(&r.simple_root(i))), 1);
            }
        }
    }

    #[test]
    fn weyl_identity_and_longest() {
        let r = rs(CartanType::A, 2);
        let elems = r.weyl_elements().unwrap();
        assert_eq!(elems.len(), 6);
        let w0 = elems.last().unwrap();
        assert_eq!(w0.length(), 3);
        assert_eq!(w0.apply_weight(&r, r.rho()), r.rho().neg());
    }

    #[test]
    fn weyl_act_identity_and_s1() {
        let r = rs(CartanType::A, 2);
        let e = r.identity();
        let w1 = Weight::fundamental(2, 0);
        assert_eq!(e.apply_weight(&r, &w1), w1);

        // s1(w1 - w2) used in the worked example table
        let s1 = r.simple_reflection(0);
        let lambda = Weight::integral(vec![1, -1]);
        // s1(lambda) = lambda - <lambda, a1^v> a1 = lambda - a1
        let expected = lambda.sub(&r.root_weight(&r.simple_root(0)));
        assert_eq!(s1.apply_weight(&r, &lambda), expected);
    }

    #[test]
    fn length_changes_by_one() {
        let r = rs(CartanType::B, 2);
        for w in r.weyl_elements().unwrap() {
            for i in 0..2 {
                let ws = r.mul(&w, &r.simple_reflection(i));
                assert_eq!(ws.length().abs_diff(w.length()), 1);
            }
        }
    }

    #[test]
    fn pairing_equivariance() {
        let r = rs(CartanType::C, 3);
        let lambda = Weight::integral(vec![2, -1, 3]);
        for w in r.weyl_elements().unwrap().iter().take(20) {
            for beta in r.positive_roots() {
                let lhs = w.apply_weight(&r, &lambda).pair(&r.coroot(beta));
                let rhs = lambda.pair(&r.coroot(&w.apply_root_inv(beta)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn min_coset_rep_examples() {
        let r = rs(CartanType::A, 2);
        let j = ParabolicSubset::new([1]);
        let s1 = r.simple_reflection(0);
        let s2 = r.simple_reflection(1);
        let s1s2 = r.mul(&s1, &s2);
        assert_eq!(r.min_coset_rep(&s1s2, &j), s1);
        assert_eq!(r.min_coset_rep(&r.identity(), &j), r.identity());

        // A2, w0, J={alpha_1}: w0 s1 = s1 s2 and s1 s2 (alpha_1) = alpha_2 > 0
        let j0 = ParabolicSubset::new([0]);
        let w0 = r.from_word(&[0, 1, 0]);
        assert_eq!(r.min_coset_rep(&w0, &j0), s1s2);
    }

    #[test]
    fn min_coset_rep_scan_oracle() {
        // Full coset scan: the rep must be the unique length-minimum.
        let r = rs(CartanType::B, 2);
        for j in [
            ParabolicSubset::empty(),
            ParabolicSubset::new([0]),
            ParabolicSubset::new([1]),
            ParabolicSubset::new([0, 1]),
        ] {
            for w in r.weyl_elements().unwrap() {
                let rep = r.min_coset_rep(&w, &j);
                let coset = r.coset(&w, &j).unwrap();
                let min_len = coset.iter().map(|x| x.length()).min().unwrap();
                assert_eq!(rep.length(), min_len);
                assert!(coset.contains(&rep));
                assert_eq!(r.min_coset_rep(&rep, &j), rep);
                // constant on cosets
                for x in &coset {
                    assert_eq!(r.min_coset_rep(x, &j), rep);
                }
            }
        }
    }

    #[test]
    fn perm_roundtrip() {
        let r = rs(CartanType::A, 3);
        for w in r.weyl_elements().unwrap() {
            let p = w.to_perm(&r);
            assert_eq!(p.to_weyl(&r), w);
            assert_eq!(p.inversions(), w.length());
        }
    }

    #[test]
    fn unsupported_types_rejected() {
        assert!(RootSystem::new(CartanType::B, 1).is_err());
        assert!(RootSystem::new(CartanType::D, 3).is_err());
    }
}
