//! Lambda-chains of roots with exact height bookkeeping.
//!
//! A chain is validated by walking the barycenter of the fundamental alcove
//! through the successive affine reflections and checking that each step
//! crosses exactly the stated hyperplane, in the stated direction.

use num::rational::Ratio;
use serde_json::json;

use crate::qbg::lex_key;
use crate::rootsys::{CartanType, Root, RootSystem, Weight};
use crate::{Error, Result};

/// The affine reflection s_{beta,l} in the hyperplane <mu, beta^v> = l.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineRefl {
    pub root: Root,
    pub level: i64,
}

impl AffineRefl {
    /// mu - (<mu, beta^v> - l) beta.
    pub fn apply(&self, rs: &RootSystem, mu: &Weight) -> Weight {
        let p = mu.pair(&rs.coroot(&self.root)) - Ratio::new(self.level, 1);
        mu.sub(&rs.root_weight(&self.root).scale(p))
    }
}

/// A lambda-chain: the weight lambda and the sequence of pairs (beta_i, l_i)
/// describing the hyperplanes H_{beta_i, -l_i} crossed by the alcove walk
/// from the fundamental alcove to its translate by -lambda.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaChain {
    pub lambda: Weight,
    pub entries: Vec<(Root, i64)>,
    pub reduced: bool,
}

impl LambdaChain {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.entries[i].0
    }

    pub fn height(&self, i: usize) -> i64 {
        self.entries[i].1
    }

    /// Complementary height: <lambda, beta_i^v> - l_i.
    pub fn tilde_height(&self, rs: &RootSystem, i: usize) -> i64 {
        self.lambda.pair_int(&rs.coroot(&self.entries[i].0)) - self.entries[i].1
    }

    /// The affine reflection r-hat_i = s_{beta_i, -l_i}.
    pub fn affine_refl(&self, i: usize) -> AffineRefl {
        AffineRefl {
            root: self.entries[i].0.clone(),
            level: -self.entries[i].1,
        }
    }

    /// Build a chain from a bare root sequence, deriving the heights from the
    /// alcove walk, then validate it.
    pub fn from_roots(rs: &RootSystem, lambda: &Weight, roots: &[Root]) -> Result<LambdaChain> {
        let mut p = rs.alcove_center();
        let mut entries = Vec::with_capacity(roots.len());
        for beta in roots {
            // The wall crossed in direction -beta sits at the integer just
            // below <p, beta^v> (p is never on a wall).
            let pair = p.pair(&rs.coroot(beta));
            if pair.is_integer() {
                return Err(Error::InvalidChain("walk point landed on a wall".into()));
            }
            let l = -pair.floor().to_integer();
            let r = AffineRefl {
                root: beta.clone(),
                level: -l,
            };
            p = r.apply(rs, &p);
            entries.push((beta.clone(), l));
        }
        Self::assemble(rs, lambda, entries)
    }

    /// Build a chain from explicit (root, height) pairs and validate it.
    pub fn assemble(
        rs: &RootSystem,
        lambda: &Weight,
        entries: Vec<(Root, i64)>,
    ) -> Result<LambdaChain> {
        let mut chain = LambdaChain {
            lambda: lambda.clone(),
            entries,
            reduced: false,
        };
        chain.validate(rs)?;
        chain.reduced = chain.check_reduced(rs);
        if chain.reduced && !chain.heights_in_range(rs) {
            return Err(Error::InvariantViolation(
                "reduced chain violates the height ranges".into(),
            ));
        }
        Ok(chain)
    }

    /// Walk the barycenter of the fundamental alcove through the chain and
    /// check each crossing and the endpoint.
    pub fn validate(&self, rs: &RootSystem) -> Result<()> {
        let mut p = rs.alcove_center();
        for (i, (beta, l)) in self.entries.iter().enumerate() {
            if !self.lambda.pair(&rs.coroot(beta)).is_integer() {
                return Err(Error::InvalidChain(format!(
                    "non-integral pairing at position {i}"
                )));
            }
            let q = self.affine_refl(i).apply(rs, &p);
            // crossing in direction -beta through <., beta^v> = -l
            let level = Ratio::new(-*l, 1);
            let before = p.pair(&rs.coroot(beta));
            let after = q.pair(&rs.coroot(beta));
            if !(after < level && level < before) {
                return Err(Error::InvalidChain(format!(
                    "step {i} does not cross H({beta:?},{}) in direction -beta",
                    -l
                )));
            }
            // exactly one wall crossed in total
            if crossings(rs, &p, &q) != 1 {
                return Err(Error::InvalidChain(format!(
                    "step {i} crosses more than one wall"
                )));
            }
            p = q;
        }
        let target = rs.alcove_center().sub(&self.lambda);
        if p != target {
            return Err(Error::InvalidChain(
                "walk does not end at the translated alcove".into(),
            ));
        }
        Ok(())
    }

    /// Height ranges for reduced chains: 0 <= l <= <lambda,beta^v> - 1 for
    /// positive beta, 1 <= l <= <lambda,beta^v> for negative beta.
    pub fn heights_in_range(&self, rs: &RootSystem) -> bool {
        self.entries.iter().all(|(beta, l)| {
            let p = self.lambda.pair_int(&rs.coroot(beta));
            if beta.is_positive() {
                0 <= *l && *l <= p - 1
            } else {
                1 <= *l && *l <= p
            }
        })
    }

    /// Canonical form of the i-th hyperplane: (positive root, signed level).
    fn hyperplane(&self, i: usize) -> (Root, i64) {
        let (beta, l) = &self.entries[i];
        if beta.is_positive() {
            (beta.clone(), -*l)
        } else {
            (beta.neg(), *l)
        }
    }

    fn check_reduced(&self, rs: &RootSystem) -> bool {
        let set: std::collections::BTreeSet<(Root, i64)> =
            (0..self.len()).map(|i| self.hyperplane(i)).collect();
        set.len() == self.len() && self.len() == separating_count(rs, &self.lambda)
    }

    /// Delete the (D) segment beta, -beta at positions pos, pos + 1.
    pub fn apply_d(&self, rs: &RootSystem, pos: usize) -> Result<LambdaChain> {
        if pos + 1 >= self.len()
            || self.entries[pos + 1].0 != self.entries[pos].0.neg()
            || self.entries[pos + 1].1 != -self.entries[pos].1
        {
            return Err(Error::PatternMismatch(format!(
                "no (D) segment at position {pos}"
            )));
        }
        let mut entries = self.entries.clone();
        entries.drain(pos..pos + 2);
        Self::assemble(rs, &self.lambda, entries)
    }

    /// Reverse the (YB) segment spanning positions u..=t.
    pub fn apply_yb(&self, rs: &RootSystem, u: usize, t: usize) -> Result<LambdaChain> {
        if u >= t || t >= self.len() {
            return Err(Error::PatternMismatch("bad (YB) segment bounds".into()));
        }
        let alpha = self.entries[u].0.clone();
        let beta = self.entries[t].0.clone();
        let pair = rs
            .root_weight(&alpha)
            .pair(&rs.coroot(&beta));
        if pair > Ratio::new(0, 1) {
            return Err(Error::PatternMismatch(
                "<alpha, beta^v> must be non-positive".into(),
            ));
        }
        let expected = yb_segment(rs, &alpha, &beta, t - u + 1)?;
        let actual: Vec<Root> = (u..=t).map(|i| self.entries[i].0.clone()).collect();
        if actual != expected {
            return Err(Error::PatternMismatch(
                "segment does not match the (YB) root pattern".into(),
            ));
        }
        let mut roots: Vec<Root> = self.entries.iter().map(|(b, _)| b.clone()).collect();
        roots[u..=t].reverse();
        Self::from_roots(rs, &self.lambda, &roots)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .entries
            .iter()
            .map(|(beta, l)| json!({"root": beta.0, "height": l}))
            .collect::<Vec<_>>())
    }
}

/// The (YB) root pattern alpha, s_a(b), s_a s_b(a), ..., s_b(a), b of the
/// given length.
fn yb_segment(rs: &RootSystem, alpha: &Root, beta: &Root, len: usize) -> Result<Vec<Root>> {
    let sa = rs.reflection(alpha);
    let sb = rs.reflection(beta);
    let mut out = Vec::with_capacity(len);
    let mut prefix = rs.identity();
    for j in 0..len {
        let base = if j % 2 == 0 { alpha } else { beta };
        out.push(prefix.apply_root(base));
        prefix = rs.mul(&prefix, if j % 2 == 0 { &sa } else { &sb });
    }
    if out.last() != Some(beta) {
        return Err(Error::PatternMismatch(
            "segment length does not close the (YB) pattern".into(),
        ));
    }
    Ok(out)
}

/// How many walls separate p from q (integers strictly between the pairings).
fn crossings(rs: &RootSystem, p: &Weight, q: &Weight) -> usize {
    rs.positive_roots()
        .iter()
        .map(|gamma| {
            let a = p.pair(&rs.coroot(gamma));
            let b = q.pair(&rs.coroot(gamma));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let first = lo.floor().to_integer() + 1;
            let last = hi.ceil().to_integer() - 1;
            (last - first + 1).max(0) as usize
        })
        .sum()
}

/// Number of hyperplanes separating the fundamental alcove from its translate
/// by -lambda (the length of any reduced lambda-chain).
pub fn separating_count(rs: &RootSystem, lambda: &Weight) -> usize {
    let p = rs.alcove_center();
    let q = p.sub(lambda);
    crossings(rs, &p, &q)
}

/// The lexicographic lambda-chain for a dominant weight.
pub fn lex_chain(rs: &RootSystem, lambda: &Weight) -> Result<LambdaChain> {
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(format!("{lambda:?}")));
    }
    if lambda.is_zero() {
        return Err(Error::ZeroWeight);
    }
    let mut keyed: Vec<(Vec<Ratio<i64>>, (Root, i64))> = Vec::new();
    for beta in rs.positive_roots() {
        let p = lambda.pair_int(&rs.coroot(beta));
        for l in 0..p {
            keyed.push((lex_key(rs, lambda, beta, l), (beta.clone(), l)));
        }
    }
    keyed.sort();
    for w in keyed.windows(2) {
        assert!(w[0].0 < w[1].0, "lex keys must be injective");
    }
    LambdaChain::assemble(rs, lambda, keyed.into_iter().map(|(_, e)| e).collect())
}

/// The lambda-chain for an anti-dominant weight: the reverse of the lex
/// (-lambda)-chain with negated roots and complemented heights.
pub fn lex_chain_antidominant(rs: &RootSystem, lambda: &Weight) -> Result<LambdaChain> {
    if !lambda.is_antidominant() {
        return Err(Error::NotAntiDominant(format!("{lambda:?}")));
    }
    if lambda.is_zero() {
        return Err(Error::ZeroWeight);
    }
    let base = lex_chain(rs, &lambda.neg())?;
    let entries: Vec<(Root, i64)> = base
        .entries
        .iter()
        .rev()
        .map(|(beta, l)| {
            let p = lambda.neg().pair_int(&rs.coroot(beta));
            (beta.neg(), p - l)
        })
        .collect();
    LambdaChain::assemble(rs, lambda, entries)
}

/// The concatenated chain for an arbitrary nonzero weight: the lex chain of
/// the dominant part followed by the anti-dominant chain of the negative
/// part, with the tail heights shifted by <lambda^+, beta^v>.
pub fn concat_chain(rs: &RootSystem, lambda: &Weight) -> Result<LambdaChain> {
    if lambda.is_zero() {
        return Err(Error::ZeroWeight);
    }
    let (plus, minus) = lambda.split_signs();
    if minus.is_zero() {
        return lex_chain(rs, lambda);
    }
    if plus.is_zero() {
        return lex_chain_antidominant(rs, lambda);
    }
    let mut entries = lex_chain(rs, &plus)?.entries;
    for (beta, l) in lex_chain_antidominant(rs, &minus)?.entries {
        let shift = plus.pair_int(&rs.coroot(&beta));
        entries.push((beta, l + shift));
    }
    LambdaChain::assemble(rs, lambda, entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaChainVariant {
    Rows,
    Columns,
}

/// The explicit type-A chains for +-varpi_k: the root (a, b) stands for
/// alpha_a + ... + alpha_{b-1}. `Rows` lists (k,k+1)...(k,n), (k-1,k+1)...,
/// `Columns` lists (k,k+1),(k-1,k+1),...,(1,k+1),(k,k+2),...
pub fn typea_omega_chain(
    rs: &RootSystem,
    k: usize,
    variant: OmegaChainVariant,
    positive: bool,
) -> Result<LambdaChain> {
    if rs.cartan_type != CartanType::A {
        return Err(Error::UnsupportedType("omega chains need type A".into()));
    }
    let n = rs.rank + 1;
    if k < 1 || k > n - 1 {
        return Err(Error::InvalidArgument(format!("k={k} out of range")));
    }
    let root = |a: usize, b: usize| {
        let mut c = vec![0i64; rs.rank];
        for x in a..b {
            c[x - 1] = 1;
        }
        Root(c)
    };
    let mut roots = Vec::new();
    match variant {
        OmegaChainVariant::Rows => {
            for a in (1..=k).rev() {
                for b in k + 1..=n {
                    roots.push(root(a, b));
                }
            }
        }
        OmegaChainVariant::Columns => {
            for b in k + 1..=n {
                for a in (1..=k).rev() {
                    roots.push(root(a, b));
                }
            }
        }
    }
    let lambda = Weight::fundamental(rs.rank, k - 1);
    if positive {
        // all heights are 0: <varpi_k, (a,b)^v> = 1 for a <= k < b
        LambdaChain::assemble(rs, &lambda, roots.into_iter().map(|b| (b, 0)).collect())
    } else {
        let entries = roots.into_iter().rev().map(|b| (b.neg(), 1)).collect();
        LambdaChain::assemble(rs, &lambda.neg(), entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a2() -> RootSystem {
        RootSystem::new(CartanType::A, 2).unwrap()
    }

    #[test]
    fn lex_chain_a1() {
        let rs = RootSystem::new(CartanType::A, 1).unwrap();
        let c = lex_chain(&rs, &Weight::fundamental(1, 0)).unwrap();
        assert_eq!(c.entries, vec![(Root(vec![1]), 0)]);
        assert!(c.reduced);
    }

    #[test]
    fn lex_chain_a2_omega1() {
        let rs = a2();
        let c = lex_chain(&rs, &Weight::fundamental(2, 0)).unwrap();
        // keys: alpha_1 -> (0,1,0); theta -> (0,1,1)
        assert_eq!(
            c.entries,
            vec![(Root(vec![1, 0]), 0), (Root(vec![1, 1]), 0)]
        );
        assert!(c.reduced);
    }

    #[test]
    fn lex_chain_a2_rho() {
        let rs = a2();
        let c = lex_chain(&rs, rs.rho()).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.reduced);
        // relative heights weakly increase
        let relh: Vec<Ratio<i64>> = (0..4)
            .map(|i| {
                Ratio::new(
                    c.height(i),
                    c.lambda.pair_int(&rs.coroot(c.root(i))),
                )
            })
            .collect();
        assert!(relh.windows(2).all(|w| w[0] <= w[1]));
        // the theta hyperplane appears at two levels
        assert_eq!(
            c.entries.iter().filter(|(b, _)| b == &Root(vec![1, 1])).count(),
            2
        );
    }

    #[test]
    fn antidominant_chains() {
        let rs = RootSystem::new(CartanType::A, 1).unwrap();
        let c = lex_chain_antidominant(&rs, &Weight::integral(vec![-1])).unwrap();
        assert_eq!(c.entries, vec![(Root(vec![-1]), 1)]);

        let rs = a2();
        let c = lex_chain_antidominant(&rs, &Weight::fundamental(2, 0).neg()).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.entries.iter().all(|(b, _)| !b.is_positive()));
        let fwd = lex_chain(&rs, &Weight::fundamental(2, 0)).unwrap();
        let rev_roots: Vec<Root> = c.entries.iter().map(|(b, _)| b.neg()).collect();
        let fwd_roots: Vec<Root> =
            fwd.entries.iter().rev().map(|(b, _)| b.clone()).collect();
        assert_eq!(rev_roots, fwd_roots);

        // endpoint check comes from assemble(); -rho just has to build
        let c = lex_chain_antidominant(&rs, &rs.rho().neg()).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.reduced);
    }

    #[test]
    fn concat_chain_mixed_sign() {
        let rs = a2();
        let lam = Weight::integral(vec![1, -1]);
        let c = concat_chain(&rs, &lam).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c.entries.iter().filter(|(b, _)| b.is_positive()).count(), 2);
        // no {alpha_i, -alpha_i} pair
        for i in 0..rs.rank {
            let a = rs.simple_root(i);
            let has = |r: &Root| c.entries.iter().any(|(b, _)| b == r);
            assert!(!(has(&a) && has(&a.neg())));
        }
        // dominant weight: same as the lex chain
        let lam = Weight::integral(vec![2, 1]);
        assert_eq!(concat_chain(&rs, &lam).unwrap(), lex_chain(&rs, &lam).unwrap());
    }

    #[test]
    fn concat_reduces_to_short_chain_by_d() {
        // Gamma_0 for varpi_1 - varpi_2 contains theta, -theta back to back;
        // deleting it leaves the two-entry chain (alpha_1, 0), (-alpha_2, 1).
        let rs = a2();
        let lam = Weight::integral(vec![1, -1]);
        let c = concat_chain(&rs, &lam).unwrap();
        assert!(!c.reduced);
        let pos = (0..c.len() - 1)
            .find(|&i| c.entries[i + 1].0 == c.entries[i].0.neg())
            .unwrap();
        let d = c.apply_d(&rs, pos).unwrap();
        assert_eq!(
            d.entries,
            vec![(Root(vec![1, 0]), 0), (Root(vec![0, -1]), 1)]
        );
        assert!(d.reduced);
    }

    #[test]
    fn yb_reversal_is_involutive() {
        let rs = a2();
        let c = lex_chain(&rs, rs.rho()).unwrap();
        // chain: alpha_2, theta, alpha_1, theta; positions 0..=2 form a
        // (YB) segment for (alpha_2, alpha_1)
        assert_eq!(c.root(0), &Root(vec![0, 1]));
        assert_eq!(c.root(2), &Root(vec![1, 0]));
        let c2 = c.apply_yb(&rs, 0, 2).unwrap();
        assert_eq!(
            c2.entries.iter().map(|(b, _)| b.clone()).collect::<Vec<_>>(),
            vec![
                Root(vec![1, 0]),
                Root(vec![1, 1]),
                Root(vec![0, 1]),
                Root(vec![1, 1])
            ]
        );
        assert!(c2.reduced);
        let c3 = c2.apply_yb(&rs, 0, 2).unwrap();
        assert_eq!(c3, c);
        // mismatched segment is rejected
        assert!(c.apply_yb(&rs, 1, 3).is_err());
    }

    #[test]
    fn omega_chain_examples() {
        let rs = a2();
        let c = typea_omega_chain(&rs, 1, OmegaChainVariant::Rows, true).unwrap();
        assert_eq!(
            c.entries,
            vec![(Root(vec![1, 0]), 0), (Root(vec![1, 1]), 0)]
        );
        assert!(c.reduced);

        let rs4 = RootSystem::new(CartanType::A, 3).unwrap();
        let c = typea_omega_chain(&rs4, 2, OmegaChainVariant::Columns, true).unwrap();
        // (2,3),(1,3),(2,4),(1,4)
        assert_eq!(
            c.entries.iter().map(|(b, _)| b.clone()).collect::<Vec<_>>(),
            vec![
                Root(vec![0, 1, 0]),
                Root(vec![1, 1, 0]),
                Root(vec![0, 1, 1]),
                Root(vec![1, 1, 1])
            ]
        );

        let rows = typea_omega_chain(&rs4, 2, OmegaChainVariant::Rows, true).unwrap();
        let neg = typea_omega_chain(&rs4, 2, OmegaChainVariant::Rows, false).unwrap();
        let expect: Vec<(Root, i64)> = rows
            .entries
            .iter()
            .rev()
            .map(|(b, _)| (b.neg(), 1))
            .collect();
        assert_eq!(neg.entries, expect);

        // same hyperplane set as the lex chain
        let lex = lex_chain(&rs4, &Weight::fundamental(3, 1)).unwrap();
        let mut a: Vec<_> = (0..rows.len()).map(|i| rows.hyperplane(i)).collect();
        let mut b: Vec<_> = (0..lex.len()).map(|i| lex.hyperplane(i)).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn affine_reflection_examples() {
        let rs = a2();
        // s_{alpha,0} = s_alpha
        let mu = Weight::integral(vec![2, -1]);
        let r = AffineRefl {
            root: rs.simple_root(0),
            level: 0,
        };
        assert_eq!(
            r.apply(&rs, &mu),
            rs.simple_reflection(0).apply_weight(&rs, &mu)
        );
        // r-hat_2 = s_{-alpha_2,-1} fixes -lambda for lambda = w1 - w2
        let lam = Weight::integral(vec![1, -1]);
        let r = AffineRefl {
            root: Root(vec![0, -1]),
            level: -1,
        };
        assert_eq!(r.apply(&rs, &lam.neg()), lam.neg());
    }

    proptest! {
        #[test]
        fn affine_apply_is_involutive(
            num in proptest::collection::vec(-5i64..=5, 2),
            den in 1i64..=4,
            root_idx in 0usize..3,
            level in -3i64..=3,
        ) {
            let rs = a2();
            let mu = Weight::new(num, den);
            let r = AffineRefl { root: rs.positive_roots()[root_idx].clone(), level };
            prop_assert_eq!(r.apply(&rs, &r.apply(&rs, &mu)), mu);
        }
    }

    #[test]
    fn worked_example_chain_validates() {
        // (alpha_1, -alpha_2) with heights (0, 1) is a chain for w1 - w2
        let rs = a2();
        let lam = Weight::integral(vec![1, -1]);
        let c = LambdaChain::assemble(
            &rs,
            &lam,
            vec![(Root(vec![1, 0]), 0), (Root(vec![0, -1]), 1)],
        )
        .unwrap();
        assert!(c.reduced);
        assert_eq!(c.tilde_height(&rs, 0), 1);
        assert_eq!(c.tilde_height(&rs, 1), 0);
        // heights are forced: from_roots recovers them
        let c2 = LambdaChain::from_roots(&rs, &lam, &[Root(vec![1, 0]), Root(vec![0, -1])])
            .unwrap();
        assert_eq!(c, c2);
        // wrong heights are rejected
        assert!(LambdaChain::assemble(
            &rs,
            &lam,
            vec![(Root(vec![1, 0]), 0), (Root(vec![0, -1]), 2)]
        )
        .is_err());
    }

    #[test]
    fn b2_and_c2_chains_validate() {
        for ct in [CartanType::B, CartanType::C] {
            let rs = RootSystem::new(ct, 2).unwrap();
            for lam in [
                Weight::fundamental(2, 0),
                Weight::fundamental(2, 1),
                Weight::integral(vec![1, 1]),
            ] {
                let c = lex_chain(&rs, &lam).unwrap();
                assert!(c.reduced, "{ct:?} {lam:?}");
                let c = lex_chain_antidominant(&rs, &lam.neg()).unwrap();
                assert!(c.reduced);
            }
            let c = concat_chain(&rs, &Weight::integral(vec![1, -1])).unwrap();
            assert!(!c.is_empty());
        }
    }

    #[test]
    fn json_roundtrippable_shape() {
        let rs = a2();
        let c = lex_chain(&rs, rs.rho()).unwrap();
        let js = c.to_json();
        let arr = js.as_array().unwrap();
        assert_eq!(arr.len(), 4);
        assert!(arr[0]["root"].is_array());
        assert!(arr[0]["height"].is_i64());
    }
}
