use super::window::SequenceWindow;
use crate::combinatorics::{Index, IndexDomain, IndexSet};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A finite decreasing chain of index sets `A_0 ⊇ A_1 ⊇ …`, with decidable
/// membership on a window. `depth` is the number of known levels; nothing
/// is asserted beyond them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayeredFamily {
    /// Every level is the whole ambient set.
    Full { domain: IndexDomain, depth: u32 },
    /// Every level is empty.
    Empty { domain: IndexDomain, depth: u32 },
    /// Residue blocks `B_k = {i ≡ k (mod blocks)}`; level n holds the pairs
    /// within the union of blocks with residue ≥ n. The last level is empty.
    PairBlocks { blocks: u32 },
    /// Powers of five split by exponent residue; level n is the union of the
    /// sum sets of the classes with residue ≥ n, decided by base-5 digits.
    /// The last level is empty.
    FsBlocks { blocks: u32 },
    /// Explicit levels, validated decreasing.
    Levels { levels: Vec<IndexSet> },
}

impl LayeredFamily {
    pub fn depth(&self) -> u32 {
        match self {
            LayeredFamily::Full { depth, .. } | LayeredFamily::Empty { depth, .. } => *depth,
            LayeredFamily::PairBlocks { blocks } | LayeredFamily::FsBlocks { blocks } => blocks + 1,
            LayeredFamily::Levels { levels } => levels.len() as u32,
        }
    }

    pub fn domain(&self) -> IndexDomain {
        match self {
            LayeredFamily::Full { domain, .. } | LayeredFamily::Empty { domain, .. } => *domain,
            LayeredFamily::PairBlocks { .. } => IndexDomain::Pair,
            LayeredFamily::FsBlocks { .. } => IndexDomain::Nat,
            LayeredFamily::Levels { levels } => levels
                .first()
                .map(|l| l.domain())
                .unwrap_or(IndexDomain::Nat),
        }
    }

    /// Membership of `idx` in level `n`. Levels at or beyond the depth are
    /// unknown and answer `false`.
    pub fn member(&self, n: u32, idx: &Index) -> bool {
        if n >= self.depth() {
            return false;
        }
        match self {
            LayeredFamily::Full { .. } => true,
            LayeredFamily::Empty { .. } => false,
            LayeredFamily::PairBlocks { blocks } => match idx {
                Index::Pair(i, j) if n < *blocks => {
                    let b = *blocks as u64;
                    i % b >= n as u64 && j % b >= n as u64
                }
                _ => false,
            },
            LayeredFamily::FsBlocks { blocks } => match idx {
                Index::Nat(a) if n < *blocks => {
                    fs_block_residue(*a, *blocks).is_some_and(|r| r >= n as u64)
                }
                _ => false,
            },
            LayeredFamily::Levels { levels } => levels[n as usize].contains(idx),
        }
    }

    /// Explicit chain constructor; rejects non-decreasing input.
    pub fn from_levels(levels: Vec<IndexSet>) -> Result<Self> {
        for w in levels.windows(2) {
            if !w[1].is_subset_of(&w[0]) {
                return Err(Error::WitnessInvalid(
                    "levels must be decreasing under inclusion".into(),
                ));
            }
        }
        Ok(LayeredFamily::Levels { levels })
    }
}

/// Sums of distinct powers of five have base-5 digits 0/1; `a` lies in one
/// block's sum set exactly when all exponents carrying a digit share one
/// residue class modulo `blocks`. Returns that residue.
fn fs_block_residue(a: u64, blocks: u32) -> Option<u64> {
    let mut x = a;
    let mut exp = 0u64;
    let mut residue: Option<u64> = None;
    while x > 0 {
        match x % 5 {
            0 => {}
            1 => {
                let r = exp % blocks as u64;
                match residue {
                    None => residue = Some(r),
                    Some(prev) if prev == r => {}
                    Some(_) => return None,
                }
            }
            _ => return None,
        }
        x /= 5;
        exp += 1;
    }
    residue
}

/// The piecewise sequence of the layered construction: the base value on
/// the complement of the top level, the limit point on indices lying in
/// every known level, and the n-th target on each difference ring.
pub fn layered_sequence(
    family: &LayeredFamily,
    p: f64,
    y: &[f64],
    bound: u64,
) -> Result<SequenceWindow> {
    let depth = family.depth();
    // targets cover the complement (y_0) and every difference ring below the
    // deepest level, which reads y_n for n up to depth - 2
    let needed = (depth.saturating_sub(1) as usize).max(1);
    if y.len() < needed {
        return Err(Error::TooFewTargets {
            need: needed,
            got: y.len(),
        });
    }
    // distances to p must strictly decrease and stay positive
    let deltas: Vec<f64> = y.iter().map(|v| (v - p).abs()).collect();
    if deltas.iter().any(|&d| !(d > 0.0)) || deltas.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::BadDeltaLadder);
    }

    SequenceWindow::from_fn(family.domain(), bound, |idx| {
        if !family.member(0, idx) {
            return y[0];
        }
        // the deepest consecutive level containing idx
        let mut cut = 0;
        while cut + 1 < depth && family.member(cut + 1, idx) {
            cut += 1;
        }
        if cut + 1 == depth {
            p
        } else {
            y[cut as usize]
        }
    })
}

/// Pair block family: `blocks` residue classes plus a final empty level, so
/// every difference `A_n \ A_{n+1}` contains the full pair set of one block.
pub fn block_family_pairs(blocks: u32) -> Result<LayeredFamily> {
    if blocks == 0 {
        return Err(Error::EmptyGenerators);
    }
    Ok(LayeredFamily::PairBlocks { blocks })
}

/// Finite-sum block family on powers of five split by exponent residue.
pub fn block_family_fs(blocks: u32) -> Result<LayeredFamily> {
    if blocks == 0 {
        return Err(Error::EmptyGenerators);
    }
    Ok(LayeredFamily::FsBlocks { blocks })
}

/// The case split over a decreasing chain, driven by which differences
/// `A_n \ A_{n+1}` were observed positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCaseSplit {
    /// Levels whose difference ring is positive, plus level 0.
    pub marked_levels: Vec<usize>,
    /// When the marked levels stop strictly before the window's end, the
    /// chain can be re-based past them: `B_n = A_{cut + n}`.
    pub small_tail_cut: Option<usize>,
}

/// Classify a finite difference-positivity profile.
pub fn chain_case_split(diff_positive: &[bool]) -> ChainCaseSplit {
    let mut marked: Vec<usize> = vec![0];
    marked.extend(
        diff_positive
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(n, _)| n),
    );
    marked.dedup();
    let last = *marked.last().unwrap();
    let small_tail_cut = if last + 1 < diff_positive.len() {
        Some(last + 1)
    } else {
        None
    };
    ChainCaseSplit {
        marked_levels: marked,
        small_tail_cut,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition_regular::{positivity_search_pred, PartitionRegularMap};

    #[test]
    fn full_family_gives_constant_limit_value() {
        let fam = LayeredFamily::Full {
            domain: IndexDomain::Nat,
            depth: 4,
        };
        let x = layered_sequence(&fam, 0.0, &[1.0, 0.5, 0.25], 32).unwrap();
        for n in 0..32 {
            assert_eq!(x.get(&Index::Nat(n)), Some(0.0));
        }
    }

    #[test]
    fn empty_family_gives_constant_first_target() {
        let fam = LayeredFamily::Empty {
            domain: IndexDomain::Nat,
            depth: 4,
        };
        let x = layered_sequence(&fam, 0.0, &[1.0, 0.5, 0.25], 32).unwrap();
        for n in 0..32 {
            assert_eq!(x.get(&Index::Nat(n)), Some(1.0));
        }
    }

    #[test]
    fn delta_ladder_must_decrease() {
        let fam = LayeredFamily::Full {
            domain: IndexDomain::Nat,
            depth: 3,
        };
        assert!(layered_sequence(&fam, 0.0, &[0.5, 1.0], 8).is_err());
        assert!(layered_sequence(&fam, 0.0, &[0.5, 0.5], 8).is_err());
        assert!(layered_sequence(&fam, 0.5, &[0.5, 0.25], 8).is_err());
    }

    #[test]
    fn pair_blocks_levels_decrease_and_catch_blocks() {
        let fam = block_family_pairs(3).unwrap();
        assert_eq!(fam.depth(), 4);
        // level 0 is the full pair set
        for (i, j) in [(0, 1), (2, 5), (3, 7)] {
            assert!(fam.member(0, &Index::Pair(i, j)));
        }
        // decreasing, exhaustively on a window
        for n in 0..fam.depth() - 1 {
            for j in 1..24u64 {
                for i in 0..j {
                    let idx = Index::Pair(i, j);
                    if fam.member(n + 1, &idx) {
                        assert!(fam.member(n, &idx), "level {} lost {:?}", n + 1, idx);
                    }
                }
            }
        }
        // a block's own pairs sit in the difference ring of its level
        let idx = Index::Pair(1, 4); // both ≡ 1 mod 3
        assert!(fam.member(1, &idx) && !fam.member(2, &idx));
        // final level empty
        for j in 1..24u64 {
            for i in 0..j {
                assert!(!fam.member(3, &Index::Pair(i, j)));
            }
        }
    }

    #[test]
    fn fs_blocks_membership_by_digits() {
        let fam = block_family_fs(1).unwrap();
        // 130 = 5 + 125; exponents 1 and 3 both land in the single class
        assert!(fam.member(0, &Index::Nat(130)));
        assert!(!fam.member(1, &Index::Nat(130)));
        // 2 has a base-5 digit other than 0/1 in no position; 2 itself is not
        // a sum of distinct powers of five
        assert!(!fam.member(0, &Index::Nat(2)));

        let fam3 = block_family_fs(3).unwrap();
        // 126 = 1 + 125: exponents 0 and 3, both ≡ 0 mod 3 → min residue 0
        assert!(fam3.member(0, &Index::Nat(126)));
        assert!(!fam3.member(1, &Index::Nat(126)));
        // 5^1 + 5^4 = 630: exponents 1, 4 → residue 1
        assert!(fam3.member(1, &Index::Nat(630)));
        assert!(!fam3.member(2, &Index::Nat(630)));
        // decreasing on a window
        for n in 0..fam3.depth() - 1 {
            for a in 0..1000u64 {
                let idx = Index::Nat(a);
                if fam3.member(n + 1, &idx) {
                    assert!(fam3.member(n, &idx), "level {} lost {}", n + 1, a);
                }
            }
        }
    }

    #[test]
    fn layered_level_sets_exact_above_zero() {
        // on the pair block family, {x = y_n} matches A_n \ A_{n+1} for n ≥ 1;
        // the n = 0 target additionally covers the complement of A_0
        let fam = block_family_pairs(3).unwrap();
        let y = [1.0, 0.5, 0.25];
        let x = layered_sequence(&fam, 0.0, &y, 24).unwrap();
        for j in 1..24u64 {
            for i in 0..j {
                let idx = Index::Pair(i, j);
                let v = x.get(&idx).unwrap();
                for n in 1..3usize {
                    let in_ring = fam.member(n as u32, &idx) && !fam.member(n as u32 + 1, &idx);
                    assert_eq!(v == y[n], in_ring, "{idx:?} at level {n}");
                }
                let in_y0 = !fam.member(1, &idx);
                assert_eq!(v == y[0], in_y0, "{idx:?} at level 0");
            }
        }
    }

    #[test]
    fn block_differences_are_positive() {
        // each difference ring hosts a full image, so the chain's positivity
        // profile is all-true below the final empty level
        let fam = block_family_pairs(3).unwrap();
        let mut profile = Vec::new();
        for n in 0..fam.depth() - 1 {
            let pred = |idx: Index| fam.member(n, &idx) && !fam.member(n + 1, &idx);
            let hit = positivity_search_pred(PartitionRegularMap::Pairs, &pred, 3, 24, 24).unwrap();
            profile.push(hit.is_some());
        }
        assert_eq!(profile, vec![true, true, true]);
        let split = chain_case_split(&profile);
        assert_eq!(split.marked_levels, vec![0, 1, 2]);
        assert_eq!(split.small_tail_cut, None);
    }

    #[test]
    fn case_split_with_small_tail() {
        let split = chain_case_split(&[true, false, false, false]);
        assert_eq!(split.marked_levels, vec![0]);
        assert_eq!(split.small_tail_cut, Some(1));
    }

    #[test]
    fn explicit_levels_validated() {
        let a0 = IndexSet::from_naturals(0..10u64);
        let a1 = IndexSet::from_naturals(0..5u64);
        assert!(LayeredFamily::from_levels(vec![a0.clone(), a1.clone()]).is_ok());
        assert!(LayeredFamily::from_levels(vec![a1, a0]).is_err());
    }

    #[test]
    fn fs_block_family_layers_a_sequence() {
        let fam = block_family_fs(2).unwrap();
        let y = [1.0, 0.5];
        let x = layered_sequence(&fam, 0.0, &y, 700).unwrap();
        // 6 = 1 + 5: exponents 0 and 1 mix residues → not in any level → y_0
        assert_eq!(x.get(&Index::Nat(6)), Some(1.0));
        // 26 = 1 + 25: exponents 0, 2 → residue 0 → A_0 \ A_1 → y_0
        assert_eq!(x.get(&Index::Nat(26)), Some(1.0));
        // 130 = 5 + 125: exponents 1, 3 → residue 1 → A_1 \ A_2 → y_1
        assert_eq!(x.get(&Index::Nat(130)), Some(0.5));
    }
}
