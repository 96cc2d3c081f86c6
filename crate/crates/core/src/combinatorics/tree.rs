use serde::{Deserialize, Serialize};

/// A finite sequence of naturals; a node of the tree of finite sequences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TreeSeq(Vec<u64>);

impl std::fmt::Debug for TreeSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "⟨")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "⟩")
    }
}

impl TreeSeq {
    pub fn empty() -> Self {
        TreeSeq(Vec::new())
    }

    pub fn new(entries: Vec<u64>) -> Self {
        TreeSeq(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.0.get(i).copied()
    }

    pub fn max_entry(&self) -> Option<u64> {
        self.0.iter().max().copied()
    }

    pub fn is_prefix_of(&self, other: &TreeSeq) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// The length-`n` initial segment.
    pub fn prefix(&self, n: usize) -> TreeSeq {
        TreeSeq(self.0[..n.min(self.0.len())].to_vec())
    }

    /// All initial segments from the empty sequence up to the whole.
    pub fn prefixes(&self) -> impl Iterator<Item = TreeSeq> + '_ {
        (0..=self.0.len()).map(move |n| self.prefix(n))
    }

    pub fn child(&self, n: u64) -> TreeSeq {
        let mut v = self.0.clone();
        v.push(n);
        TreeSeq(v)
    }

    /// Extend with zeros up to total length `len` (no-op if already longer).
    pub fn zero_extended(&self, len: usize) -> TreeSeq {
        let mut v = self.0.clone();
        while v.len() < len {
            v.push(0);
        }
        TreeSeq(v)
    }
}

/// The canonical prefix-monotone enumeration of all finite sequences.
///
/// Stage `k` lists every sequence with length ≤ k and entries ≤ k that was
/// not listed before, ordered by (length, lexicographic). A prefix is never
/// listed after its extensions, so `s ⊆ t` implies `index(s) ≤ index(t)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeBijection;

// Stages beyond this overflow u128 stage counts; the designed windows
// (depth ≤ 12, entries < 16) stay far below it.
const MAX_STAGE: u64 = 26;

fn pow(base: u128, exp: u64) -> u128 {
    base.checked_pow(exp as u32).expect("tree stage count overflow")
}

/// Number of sequences with length ≤ k and entries ≤ k.
fn count_through(k: u64) -> u128 {
    assert!(k <= MAX_STAGE, "tree stage {k} beyond supported range");
    (0..=k).map(|l| pow(k as u128 + 1, l)).sum()
}

/// Sequences of length `l` first listed at stage `k` (requires 1 ≤ l ≤ k).
fn new_count(l: u64, k: u64) -> u128 {
    if l < k {
        pow(k as u128 + 1, l) - pow(k as u128, l)
    } else {
        pow(k as u128 + 1, l)
    }
}

impl TreeBijection {
    fn stage(s: &TreeSeq) -> u64 {
        if s.is_empty() {
            0
        } else {
            (s.len() as u64).max(s.max_entry().unwrap_or(0))
        }
    }

    /// Position of `s` in the enumeration.
    pub fn index(&self, s: &TreeSeq) -> u64 {
        let k = Self::stage(s);
        if k == 0 {
            return 0;
        }
        let mut idx = count_through(k - 1);
        let m = s.len() as u64;
        for l in 1..m {
            idx += new_count(l, k);
        }
        // rank of s among new length-m sequences of stage k, lexicographic
        let full_below: u128 = s
            .entries()
            .iter()
            .enumerate()
            .map(|(i, &d)| d as u128 * pow(k as u128 + 1, m - 1 - i as u64))
            .sum();
        let rank = if m == k {
            full_below
        } else {
            // subtract strings using only entries ≤ k-1 (they were listed earlier)
            let mut old_below: u128 = 0;
            for (i, &d) in s.entries().iter().enumerate() {
                old_below += (d.min(k)) as u128 * pow(k as u128, m - 1 - i as u64);
                if d >= k {
                    break;
                }
            }
            full_below - old_below
        };
        u64::try_from(idx + rank).expect("tree index exceeds u64 range")
    }

    /// The sequence at position `i`; inverse of [`TreeBijection::index`].
    pub fn seq(&self, i: u64) -> TreeSeq {
        if i == 0 {
            return TreeSeq::empty();
        }
        let i = i as u128;
        let mut k = 1;
        while count_through(k) <= i {
            k += 1;
        }
        let mut r = i - count_through(k - 1);
        for l in 1..=k {
            let nc = new_count(l, k);
            if r < nc {
                return Self::unrank(l, k, r);
            }
            r -= nc;
        }
        unreachable!("rank exhausted within its stage");
    }

    fn unrank(l: u64, k: u64, mut r: u128) -> TreeSeq {
        let mut entries = Vec::with_capacity(l as usize);
        if l == k {
            // plain base-(k+1) digits
            for pos in 0..l {
                let w = pow(k as u128 + 1, l - 1 - pos);
                entries.push((r / w) as u64);
                r %= w;
            }
            return TreeSeq(entries);
        }
        // length < k: the r-th string over {0..k} containing the entry k
        let mut has_k = false;
        for pos in 0..l {
            let rem = l - 1 - pos;
            for d in 0..=k {
                let cnt = if has_k || d == k {
                    pow(k as u128 + 1, rem)
                } else {
                    pow(k as u128 + 1, rem) - pow(k as u128, rem)
                };
                if r < cnt {
                    entries.push(d);
                    has_k |= d == k;
                    break;
                }
                r -= cnt;
            }
        }
        TreeSeq(entries)
    }
}
