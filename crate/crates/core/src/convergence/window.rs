use crate::combinatorics::{Index, IndexDomain};
use crate::error::{Error, Result};
use crate::exec;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Anything that assigns real values to indices. `None` means the index is
/// outside the evaluable range; searches treat such indices as unusable.
pub trait Sequence {
    fn domain(&self) -> IndexDomain;
    fn value(&self, idx: &Index) -> Option<f64>;
}

/// A totally populated finite view of a sequence: every index whose largest
/// mentioned natural is below `bound` carries a value.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceWindow {
    domain: IndexDomain,
    bound: u64,
    values: Vec<f64>,
}

fn pair_rank(i: u64, j: u64) -> usize {
    debug_assert!(i < j);
    (j * (j - 1) / 2 + i) as usize
}

fn slots(domain: IndexDomain, bound: u64) -> usize {
    match domain {
        IndexDomain::Nat => bound as usize,
        IndexDomain::Pair => (bound * bound.saturating_sub(1) / 2) as usize,
    }
}

impl SequenceWindow {
    pub fn from_fn(
        domain: IndexDomain,
        bound: u64,
        mut f: impl FnMut(&Index) -> f64,
    ) -> Result<Self> {
        if bound == 0 {
            return Err(Error::WindowTooSmall {
                bound,
                reason: "a window needs at least one index".into(),
            });
        }
        let mut values = Vec::with_capacity(slots(domain, bound));
        match domain {
            IndexDomain::Nat => {
                for n in 0..bound {
                    values.push(f(&Index::Nat(n)));
                }
            }
            IndexDomain::Pair => {
                for j in 1..bound {
                    for i in 0..j {
                        values.push(f(&Index::Pair(i, j)));
                    }
                }
            }
        }
        Ok(SequenceWindow {
            domain,
            bound,
            values,
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn get(&self, idx: &Index) -> Option<f64> {
        if idx.domain() != self.domain || idx.max_entry() >= self.bound {
            return None;
        }
        let rank = match *idx {
            Index::Nat(n) => n as usize,
            Index::Pair(i, j) => pair_rank(i, j),
        };
        self.values.get(rank).copied()
    }

    pub fn set(&mut self, idx: &Index, v: f64) {
        if idx.domain() == self.domain && idx.max_entry() < self.bound {
            let rank = match *idx {
                Index::Nat(n) => n as usize,
                Index::Pair(i, j) => pair_rank(i, j),
            };
            self.values[rank] = v;
        }
    }

    /// Iterate all indices of the window in canonical order.
    pub fn indices(&self) -> Box<dyn Iterator<Item = Index> + '_> {
        match self.domain {
            IndexDomain::Nat => Box::new((0..self.bound).map(Index::Nat)),
            IndexDomain::Pair => {
                Box::new((1..self.bound).flat_map(|j| (0..j).map(move |i| Index::Pair(i, j))))
            }
        }
    }
}

impl Sequence for SequenceWindow {
    fn domain(&self) -> IndexDomain {
        self.domain
    }
    fn value(&self, idx: &Index) -> Option<f64> {
        self.get(idx)
    }
}

#[derive(Serialize, Deserialize)]
struct WindowRepr {
    domain: IndexDomain,
    bound: u64,
    values: Vec<(Index, f64)>,
}

impl Serialize for SequenceWindow {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let values = self
            .indices()
            .map(|idx| {
                let v = self.get(&idx).expect("window is total");
                (idx, v)
            })
            .collect();
        WindowRepr {
            domain: self.domain,
            bound: self.bound,
            values,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SequenceWindow {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = WindowRepr::deserialize(de)?;
        let n = slots(repr.domain, repr.bound);
        let mut values = vec![f64::NAN; n];
        let mut seen = vec![false; n];
        for (idx, v) in repr.values {
            if idx.domain() != repr.domain {
                return Err(D::Error::custom("index outside the declared domain"));
            }
            if idx.max_entry() >= repr.bound {
                return Err(D::Error::custom("index outside the declared bound"));
            }
            let rank = match idx {
                Index::Nat(k) => k as usize,
                Index::Pair(i, j) => pair_rank(i, j),
            };
            values[rank] = v;
            seen[rank] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(D::Error::custom("window must assign every index below the bound"));
        }
        Ok(SequenceWindow {
            domain: repr.domain,
            bound: repr.bound,
            values,
        })
    }
}

/// The 2-adic valuation of a nonzero natural.
pub fn nu2(n: u64) -> u32 {
    debug_assert!(n > 0);
    n.trailing_zeros()
}

/// The valuation example sequence: `x_0 = 1/3`, `x_n = 2^{-ν₂(n)}`.
pub fn nu2_sequence(bound: u64) -> Result<SequenceWindow> {
    SequenceWindow::from_fn(IndexDomain::Nat, bound, |idx| match *idx {
        Index::Nat(0) => 1.0 / 3.0,
        Index::Nat(n) => 1.0 / (1u64 << nu2(n)) as f64,
        _ => unreachable!(),
    })
}

/// Least pair violating the equal-valuation lemma
/// `ν₂(a) = ν₂(b), a ≠ b  ⇒  ν₂(a+b) ≥ ν₂(a) + 1` on `1 ≤ a, b < bound`.
pub fn lemma_equal_valuation_violation(bound: u64) -> Option<(u64, u64)> {
    exec::min_over_range(bound.saturating_sub(1), |off| {
        scan_equal_valuation(off + 1, bound)
    })
}

/// Sequential reference path of [`lemma_equal_valuation_violation`].
pub fn lemma_equal_valuation_violation_seq(bound: u64) -> Option<(u64, u64)> {
    exec::min_over_range_seq(bound.saturating_sub(1), |off| {
        scan_equal_valuation(off + 1, bound)
    })
}

fn scan_equal_valuation(a: u64, bound: u64) -> Option<(u64, u64)> {
    (1..bound)
        .filter(|&b| b != a && nu2(b) == nu2(a) && nu2(a + b) < nu2(a) + 1)
        .map(|b| (a, b))
        .next()
}

/// Least pair violating the dominated-valuation lemma
/// `ν₂(b) > ν₂(a)  ⇒  ν₂(a+b) = ν₂(a)` on `1 ≤ a, b < bound`.
pub fn lemma_dominated_valuation_violation(bound: u64) -> Option<(u64, u64)> {
    exec::min_over_range(bound.saturating_sub(1), |off| {
        scan_dominated_valuation(off + 1, bound)
    })
}

/// Sequential reference path of [`lemma_dominated_valuation_violation`].
pub fn lemma_dominated_valuation_violation_seq(bound: u64) -> Option<(u64, u64)> {
    exec::min_over_range_seq(bound.saturating_sub(1), |off| {
        scan_dominated_valuation(off + 1, bound)
    })
}

fn scan_dominated_valuation(a: u64, bound: u64) -> Option<(u64, u64)> {
    (1..bound)
        .filter(|&b| nu2(b) > nu2(a) && nu2(a + b) != nu2(a))
        .map(|b| (a, b))
        .next()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu2_sequence_values() {
        let x = nu2_sequence(16).unwrap();
        assert_eq!(x.get(&Index::Nat(0)), Some(1.0 / 3.0));
        assert_eq!(x.get(&Index::Nat(7)), Some(1.0));
        assert_eq!(x.get(&Index::Nat(12)), Some(0.25));
        assert_eq!(x.get(&Index::Nat(16)), None);
        assert!(nu2_sequence(0).is_err());
    }

    #[test]
    fn digit_lemmas_hold_on_a_small_window() {
        assert_eq!(lemma_equal_valuation_violation(512), None);
        assert_eq!(lemma_dominated_valuation_violation(512), None);
        assert_eq!(lemma_equal_valuation_violation_seq(512), None);
        assert_eq!(lemma_dominated_valuation_violation_seq(512), None);
    }

    #[test]
    fn pair_window_round_trip() {
        let w = SequenceWindow::from_fn(IndexDomain::Pair, 4, |idx| match idx {
            Index::Pair(i, j) => (i * 10 + j) as f64,
            _ => unreachable!(),
        })
        .unwrap();
        assert_eq!(w.get(&Index::Pair(1, 3)), Some(13.0));
        let json = serde_json::to_string(&w).unwrap();
        let back: SequenceWindow = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn partial_window_rejected() {
        let json = r#"{"domain":"nat","bound":3,"values":[[0,1.0],[2,1.0]]}"#;
        assert!(serde_json::from_str::<SequenceWindow>(json).is_err());
    }
}
