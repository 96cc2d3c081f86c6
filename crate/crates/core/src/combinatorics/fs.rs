use super::genset::GenSet;
use super::index::{Index, IndexSet};
use crate::error::{Error, Result};

/// Bit-per-value set over the half-open window `[0, bound)`.
///
/// The shift-or update `bits |= bits << d` is the standard kernel for sums
/// of distinct elements: each element contributes at most once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumBits {
    words: Vec<u64>,
    bound: u64,
}

impl SumBits {
    pub fn new(bound: u64) -> Self {
        let n = (bound as usize).div_ceil(64);
        SumBits {
            words: vec![0; n],
            bound,
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn set(&mut self, i: u64) {
        if i < self.bound {
            self.words[(i / 64) as usize] |= 1 << (i % 64);
        }
    }

    pub fn test(&self, i: u64) -> bool {
        i < self.bound && self.words[(i / 64) as usize] & (1 << (i % 64)) != 0
    }

    /// `self |= self << k`, dropping bits at or above the bound.
    pub fn shift_or(&mut self, k: u64) {
        if k == 0 {
            return;
        }
        let word_off = (k / 64) as usize;
        let bit_off = (k % 64) as u32;
        let n = self.words.len();
        for i in (word_off..n).rev() {
            let mut v = self.words[i - word_off] << bit_off;
            if bit_off > 0 && i > word_off {
                v |= self.words[i - word_off - 1] >> (64 - bit_off);
            }
            self.words[i] |= v;
        }
        self.mask_tail();
    }

    fn mask_tail(&mut self) {
        let rem = (self.bound % 64) as u32;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut b = bits;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let t = b.trailing_zeros();
                    b &= b - 1;
                    Some(w as u64 * 64 + t as u64)
                }
            })
        })
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Subset-sum reachability of `d` over `[0, bound)` as a bitset.
pub fn fs_bits(d: &GenSet, bound: u64) -> SumBits {
    let mut bits = SumBits::new(bound);
    for e in d.iter() {
        bits.shift_or(e);
        bits.set(e);
    }
    bits
}

/// Finite sums of distinct elements of `d`, windowed to `[0, bound)`.
pub fn fs(d: &GenSet, bound: u64) -> Result<IndexSet> {
    if d.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    Ok(IndexSet::from_naturals(fs_bits(d, bound).iter_ones()))
}

/// All unordered pairs from `d`, in lexicographic order.
pub fn pairs(d: &GenSet) -> Result<IndexSet> {
    if d.len() < 2 {
        return Err(Error::TooFewGenerators {
            need: 2,
            got: d.len(),
        });
    }
    let elems = d.elements();
    let mut members = Vec::with_capacity(elems.len() * (elems.len() - 1) / 2);
    for (a, &i) in elems.iter().enumerate() {
        for &j in &elems[a + 1..] {
            members.push(Index::Pair(i, j));
        }
    }
    IndexSet::from_members(super::index::IndexDomain::Pair, members)
}

/// Exact search for the subset of `d` summing to `a`.
///
/// Exponential in general; on sets with distinct subset sums (the only
/// callers) the prefix-sum prune makes it effectively linear.
pub fn subset_sum_decode(d: &GenSet, a: u64) -> Option<GenSet> {
    // sums range over nonempty subsets, so 0 is reachable only as sum({0})
    if a == 0 {
        return d.contains(0).then(|| GenSet::singleton(0));
    }
    let elems = d.elements();
    let mut prefix: Vec<u128> = Vec::with_capacity(elems.len() + 1);
    prefix.push(0);
    for &e in elems {
        prefix.push(prefix.last().unwrap() + e as u128);
    }
    let mut chosen = Vec::new();
    if decode_rec(elems, &prefix, a, elems.len(), &mut chosen) {
        chosen.reverse();
        Some(GenSet::new(chosen).expect("descending choice reversed is increasing"))
    } else {
        None
    }
}

fn decode_rec(elems: &[u64], prefix: &[u128], target: u64, n: usize, chosen: &mut Vec<u64>) -> bool {
    if target == 0 {
        return true;
    }
    if n == 0 || (target as u128) > prefix[n] {
        return false;
    }
    let e = elems[n - 1];
    if e <= target {
        chosen.push(e);
        if decode_rec(elems, prefix, target - e, n - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    decode_rec(elems, prefix, target, n - 1, chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gs(v: &[u64]) -> GenSet {
        GenSet::new(v.to_vec()).unwrap()
    }

    fn naive_fs(d: &[u64], bound: u64) -> Vec<u64> {
        let mut out = std::collections::BTreeSet::new();
        for mask in 1u64..(1 << d.len()) {
            let s: u64 = d
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .sum();
            if s < bound {
                out.insert(s);
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn fs_small_examples() {
        let got = fs(&gs(&[1, 2, 4]), 100).unwrap();
        let want = IndexSet::from_naturals(1..=7);
        assert_eq!(got, want);

        // brute-force subset-sum oracle, frozen
        let got = fs(&gs(&[1, 5, 25]), 32).unwrap();
        assert_eq!(got, IndexSet::from_naturals([1, 5, 6, 25, 26, 30, 31]));
        assert_eq!(
            naive_fs(&[1, 5, 25], 32),
            vec![1, 5, 6, 25, 26, 30, 31],
        );
    }

    #[test]
    fn fs_powers_of_two_fill_the_window() {
        let d = GenSet::new((0..16).map(|n| 1u64 << n).collect()).unwrap();
        let got = fs(&d, 65536).unwrap();
        assert_eq!(got.len(), 65535);
        assert!(!got.contains(&Index::Nat(0)));
        assert!(got.contains(&Index::Nat(1)));
        assert!(got.contains(&Index::Nat(65535)));
    }

    #[test]
    fn fs_rejects_empty() {
        assert!(fs(&GenSet::empty(), 10).is_err());
    }

    #[test]
    fn fs_matches_naive_on_window_cuts() {
        let d = gs(&[3, 7, 11, 20]);
        for bound in [1, 10, 25, 42] {
            let got: Vec<u64> = fs_bits(&d, bound).iter_ones().collect();
            assert_eq!(got, naive_fs(d.elements(), bound), "bound {bound}");
        }
    }

    #[test]
    fn pairs_examples() {
        let got = pairs(&gs(&[0, 1, 2])).unwrap();
        assert_eq!(
            got.members(),
            &[
                Index::Pair(0, 1),
                Index::Pair(0, 2),
                Index::Pair(1, 2),
            ]
        );
        assert_eq!(pairs(&gs(&[3, 7])).unwrap().members(), &[Index::Pair(3, 7)]);
        let six = pairs(&gs(&[0, 2, 4, 6])).unwrap();
        assert_eq!(six.len(), 6);
        let mut sorted = six.members().to_vec();
        sorted.sort();
        assert_eq!(sorted, six.members());
        assert!(pairs(&gs(&[5])).is_err());
    }

    #[test]
    fn decode_finds_unique_supports() {
        let d = gs(&[1, 5, 25]);
        assert_eq!(subset_sum_decode(&d, 26).unwrap().elements(), &[1, 25]);
        assert_eq!(subset_sum_decode(&d, 5).unwrap().elements(), &[5]);
        assert!(subset_sum_decode(&d, 2).is_none());
    }
}
