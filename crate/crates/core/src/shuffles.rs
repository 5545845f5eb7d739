//! Signed shuffle permutations and the bijections between shuffle sets.
//!
//! Permutations are 1-indexed: `images[k-1] = σ(k)`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    pub images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(Error::BadInput(format!("{images:?} is not a permutation of 1..{n}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// σ(k) for 1 ≤ k ≤ n.
    pub fn at(&self, k: usize) -> usize {
        self.images[k - 1]
    }

    pub fn inversions(&self) -> usize {
        let v = &self.images;
        let mut c = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] > v[j] {
                    c += 1;
                }
            }
        }
        c
    }

    /// ε(σ) ∈ {+1, −1}.
    pub fn sign(&self) -> i64 {
        if self.inversions() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (k, &x) in self.images.iter().enumerate() {
            inv[x - 1] = k + 1;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)(k) = self(other(k))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&k| self.at(k)).collect() }
    }

    /// Every permutation of 1..n in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n + 1];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation { images: cur.clone() });
                return;
            }
            for x in 1..=n {
                if !used[x] {
                    used[x] = true;
                    cur.push(x);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[x] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShuffleKind {
    All(usize, usize),
    /// Sh^1_{p,q}: σ(1) = 1.
    FirstFixed(usize, usize),
    /// Sh^{p+1}_{p,q}: the value 1 sits at position p+1, i.e. σ(p+1) = 1.
    FirstIsPPlus1(usize, usize),
    Triple(usize, usize, usize),
}

impl ShuffleKind {
    fn blocks(&self) -> Vec<usize> {
        match *self {
            ShuffleKind::All(p, q) | ShuffleKind::FirstFixed(p, q) | ShuffleKind::FirstIsPPlus1(p, q) => vec![p, q],
            ShuffleKind::Triple(p, q, r) => vec![p, q, r],
        }
    }

    /// Membership test for a permutation.
    pub fn contains(&self, s: &Permutation) -> bool {
        let blocks = self.blocks();
        if s.len() != blocks.iter().sum::<usize>() {
            return false;
        }
        let mut start = 0;
        for b in blocks {
            if !s.images[start..start + b].windows(2).all(|w| w[0] < w[1]) {
                return false;
            }
            start += b;
        }
        match *self {
            ShuffleKind::FirstFixed(..) => s.images.first() == Some(&1),
            ShuffleKind::FirstIsPPlus1(p, _) => s.images.get(p) == Some(&1),
            _ => true,
        }
    }
}

/// Block shuffles with possibly empty blocks, lexicographic by images.
pub fn block_shuffles(blocks: &[usize]) -> Vec<Permutation> {
    let n: usize = blocks.iter().sum();
    let mut out = Vec::new();
    let mut assign = vec![usize::MAX; n];
    fn rec(blocks: &[usize], b: usize, assign: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        let n = assign.len();
        if b + 1 >= blocks.len() {
            // last block takes the remaining positions
            let mut images = Vec::with_capacity(n);
            for blk in 0..blocks.len() {
                for v in 0..n {
                    let owner = if assign[v] == usize::MAX { blocks.len() - 1 } else { assign[v] };
                    if owner == blk {
                        images.push(v + 1);
                    }
                }
            }
            out.push(Permutation { images });
            return;
        }
        let free: Vec<usize> = (0..n).filter(|&v| assign[v] == usize::MAX).collect();
        for combo in combinations(&free, blocks[b]) {
            for &v in &combo {
                assign[v] = b;
            }
            rec(blocks, b + 1, assign, out);
            for &v in &combo {
                assign[v] = usize::MAX;
            }
        }
    }
    if blocks.is_empty() {
        return vec![Permutation::identity(0)];
    }
    rec(blocks, 0, &mut assign, &mut out);
    out.sort();
    out
}

/// k-subsets of `items` in lexicographic order.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Signed (p,q)-shuffles allowing empty blocks; used by the coproduct formulas.
pub fn signed_shuffles(p: usize, q: usize) -> Vec<(Permutation, i64)> {
    block_shuffles(&[p, q])
        .into_iter()
        .map(|s| {
            let e = s.sign();
            (s, e)
        })
        .collect()
}

pub fn enumerate_shuffles(kind: ShuffleKind) -> Result<Vec<(Permutation, i64)>> {
    if kind.blocks().iter().any(|&b| b == 0) {
        return Err(Error::EmptyBlock);
    }
    Ok(block_shuffles(&kind.blocks())
        .into_iter()
        .filter(|s| kind.contains(s))
        .map(|s| {
            let e = s.sign();
            (s, e)
        })
        .collect())
}

#[derive(Clone, Debug)]
pub enum BijectionInput {
    /// ι : Sh_{p,q} → Sh_{q,p}.
    Iota { p: usize, q: usize, sigma: Permutation },
    /// α : Sh_{p+q,r} × Sh_{p,q} → Sh_{p,q,r}.
    Alpha { p: usize, q: usize, r: usize, sigma: Permutation, gamma: Permutation },
    /// β : Sh_{p,q+r} × Sh_{q,r} → Sh_{p,q,r}.
    Beta { p: usize, q: usize, r: usize, sigma: Permutation, gamma: Permutation },
}

fn require(kind: ShuffleKind, s: &Permutation) -> Result<()> {
    if kind.contains(s) {
        Ok(())
    } else {
        Err(Error::NotAShuffle(format!("{s} is not in {kind:?}")))
    }
}

pub fn shuffle_bijection(input: &BijectionInput) -> Result<Permutation> {
    match input {
        BijectionInput::Iota { p, q, sigma } => {
            let (p, q) = (*p, *q);
            require(ShuffleKind::All(p, q), sigma)?;
            let images = (1..=p + q).map(|k| if k <= q { sigma.at(k + p) } else { sigma.at(k - q) }).collect();
            Ok(Permutation { images })
        }
        BijectionInput::Alpha { p, q, r, sigma, gamma } => {
            let (p, q, r) = (*p, *q, *r);
            require(ShuffleKind::All(p + q, r), sigma)?;
            require(ShuffleKind::All(p, q), gamma)?;
            let images =
                (1..=p + q + r).map(|k| if k <= p + q { sigma.at(gamma.at(k)) } else { sigma.at(k) }).collect();
            Ok(Permutation { images })
        }
        BijectionInput::Beta { p, q, r, sigma, gamma } => {
            let (p, q, r) = (*p, *q, *r);
            require(ShuffleKind::All(p, q + r), sigma)?;
            require(ShuffleKind::All(q, r), gamma)?;
            let images =
                (1..=p + q + r).map(|k| if k <= p { sigma.at(k) } else { sigma.at(p + gamma.at(k - p)) }).collect();
            Ok(Permutation { images })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn smallest_all_shuffles() {
        let s = enumerate_shuffles(ShuffleKind::All(1, 1)).unwrap();
        assert_eq!(s, vec![(Permutation::identity(2), 1), (Permutation { images: vec![2, 1] }, -1)]);
    }

    #[test]
    fn counts_match_binomials() {
        for n in 2..=8 {
            for p in 1..n {
                let q = n - p;
                assert_eq!(enumerate_shuffles(ShuffleKind::All(p, q)).unwrap().len(), binom(n, p));
            }
        }
        assert_eq!(enumerate_shuffles(ShuffleKind::All(2, 2)).unwrap().len(), 6);
    }

    #[test]
    fn first_fixed_counts_by_brute_force() {
        // exhaustive over S_3
        let brute = |p: usize, first: usize| {
            Permutation::all(3)
                .into_iter()
                .filter(|s| s.images[..p].windows(2).all(|w| w[0] < w[1]))
                .filter(|s| s.images[p..].windows(2).all(|w| w[0] < w[1]))
                .filter(|s| s.images[0] == first)
                .count()
        };
        assert_eq!(enumerate_shuffles(ShuffleKind::FirstFixed(2, 1)).unwrap().len(), 2);
        assert_eq!(enumerate_shuffles(ShuffleKind::FirstFixed(1, 2)).unwrap().len(), 1);
        assert_eq!(brute(2, 1), 2);
        assert_eq!(brute(1, 1), 1);
    }

    #[test]
    fn empty_block_rejected() {
        assert!(matches!(enumerate_shuffles(ShuffleKind::All(0, 2)), Err(Error::EmptyBlock)));
        assert!(matches!(enumerate_shuffles(ShuffleKind::Triple(1, 0, 1)), Err(Error::EmptyBlock)));
    }

    #[test]
    fn split_into_first_fixed_and_first_p_plus_one() {
        for n in 2..=8 {
            for p in 1..n {
                let q = n - p;
                let all: BTreeSet<_> = enumerate_shuffles(ShuffleKind::All(p, q)).unwrap().into_iter().collect();
                let a: BTreeSet<_> = enumerate_shuffles(ShuffleKind::FirstFixed(p, q)).unwrap().into_iter().collect();
                let b: BTreeSet<_> =
                    enumerate_shuffles(ShuffleKind::FirstIsPPlus1(p, q)).unwrap().into_iter().collect();
                assert!(a.is_disjoint(&b));
                assert_eq!(a.union(&b).cloned().collect::<BTreeSet<_>>(), all);
            }
        }
    }

    #[test]
    fn iota_identity_is_transposition() {
        let out = shuffle_bijection(&BijectionInput::Iota { p: 1, q: 1, sigma: Permutation::identity(2) }).unwrap();
        assert_eq!(out.images, vec![2, 1]);
    }

    #[test]
    fn iota_is_bijective() {
        for n in 2..=8 {
            for p in 1..n {
                let q = n - p;
                let img: BTreeSet<Permutation> = enumerate_shuffles(ShuffleKind::All(p, q))
                    .unwrap()
                    .into_iter()
                    .map(|(s, _)| shuffle_bijection(&BijectionInput::Iota { p, q, sigma: s }).unwrap())
                    .collect();
                let target: BTreeSet<Permutation> =
                    enumerate_shuffles(ShuffleKind::All(q, p)).unwrap().into_iter().map(|(s, _)| s).collect();
                assert_eq!(img, target);
            }
        }
    }

    #[test]
    fn alpha_beta_on_identities() {
        let id = Permutation::identity;
        let a = shuffle_bijection(&BijectionInput::Alpha { p: 1, q: 1, r: 1, sigma: id(3), gamma: id(2) }).unwrap();
        assert_eq!(a, id(3));
        let b = shuffle_bijection(&BijectionInput::Beta { p: 1, q: 1, r: 1, sigma: id(3), gamma: id(2) }).unwrap();
        assert_eq!(b, id(3));
    }

    #[test]
    fn alpha_and_beta_are_bijections_onto_triples() {
        for n in 3..=7 {
            for p in 1..n {
                for q in 1..n - p {
                    let r = n - p - q;
                    let triple: BTreeSet<Permutation> =
                        enumerate_shuffles(ShuffleKind::Triple(p, q, r)).unwrap().into_iter().map(|x| x.0).collect();
                    let mut via_alpha = Vec::new();
                    for (s, _) in enumerate_shuffles(ShuffleKind::All(p + q, r)).unwrap() {
                        for (g, _) in enumerate_shuffles(ShuffleKind::All(p, q)).unwrap() {
                            via_alpha.push(
                                shuffle_bijection(&BijectionInput::Alpha { p, q, r, sigma: s.clone(), gamma: g })
                                    .unwrap(),
                            );
                        }
                    }
                    let mut via_beta = Vec::new();
                    for (s, _) in enumerate_shuffles(ShuffleKind::All(p, q + r)).unwrap() {
                        for (g, _) in enumerate_shuffles(ShuffleKind::All(q, r)).unwrap() {
                            via_beta.push(
                                shuffle_bijection(&BijectionInput::Beta { p, q, r, sigma: s.clone(), gamma: g })
                                    .unwrap(),
                            );
                        }
                    }
                    for v in [via_alpha, via_beta] {
                        let set: BTreeSet<Permutation> = v.iter().cloned().collect();
                        assert_eq!(set.len(), v.len(), "not injective");
                        assert_eq!(set, triple);
                    }
                }
            }
        }
    }

    #[test]
    fn bijection_rejects_non_shuffles() {
        let bad = Permutation { images: vec![3, 1, 2] };
        assert!(matches!(
            shuffle_bijection(&BijectionInput::Iota { p: 2, q: 1, sigma: bad }),
            Err(Error::NotAShuffle(_))
        ));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let s: Vec<Permutation> =
            enumerate_shuffles(ShuffleKind::All(2, 3)).unwrap().into_iter().map(|x| x.0).collect();
        let mut sorted = s.clone();
        sorted.sort();
        assert_eq!(s, sorted);
    }

    #[test]
    fn signs_match_inversion_parity() {
        for s in Permutation::all(4) {
            let sign_by_cycles = {
                let mut seen = [false; 5];
                let mut parity = 0;
                for start in 1..=4 {
                    if seen[start] {
                        continue;
                    }
                    let mut len = 0;
                    let mut x = start;
                    while !seen[x] {
                        seen[x] = true;
                        x = s.at(x);
                        len += 1;
                    }
                    parity += len - 1;
                }
                if parity % 2 == 0 {
                    1
                } else {
                    -1
                }
            };
            assert_eq!(s.sign(), sign_by_cycles);
        }
    }
}
