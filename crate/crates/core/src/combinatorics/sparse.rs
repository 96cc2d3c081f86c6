use super::fs::{fs_bits, subset_sum_decode, SumBits};
use super::genset::GenSet;
use crate::error::{Error, Result};
use crate::exec;
use serde::{Deserialize, Serialize};

/// Greedy growth rule for sparse generation: `d_{k+1} = factor · Σ d_i + 1`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GrowthRule {
    pub factor: u64,
}

impl Default for GrowthRule {
    fn default() -> Self {
        GrowthRule { factor: 4 }
    }
}

/// Result of the exhaustive two-condition check:
/// (a) every finite sum below the bound has a unique support,
/// (b) sums of two overlapping supports escape the sum set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertificationOutcome {
    Pass {
        support_sums_checked: u64,
        overlap_pairs_checked: u64,
    },
    /// Two distinct supports reach the same value.
    AmbiguousSupport {
        value: u64,
        first: GenSet,
        second: GenSet,
    },
    /// Overlapping G, H with sum(G)+sum(H) still inside the sum set.
    OverlapSumInside { g: GenSet, h: GenSet, total: u64 },
}

impl std::fmt::Display for CertificationOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertificationOutcome::Pass {
                support_sums_checked,
                overlap_pairs_checked,
            } => write!(
                f,
                "pass ({support_sums_checked} sums, {overlap_pairs_checked} overlap pairs)"
            ),
            CertificationOutcome::AmbiguousSupport { value, first, second } => {
                write!(f, "value {value} has two supports {first:?} and {second:?}")
            }
            CertificationOutcome::OverlapSumInside { g, h, total } => {
                write!(f, "sum({g:?}) + sum({h:?}) = {total} stays inside the sum set")
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificationReport {
    pub elements: GenSet,
    pub bound: u64,
    pub outcome: CertificationOutcome,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, CertificationOutcome::Pass { .. })
    }
}

/// A generator set whose sparseness conditions were verified exhaustively
/// up to `certified_bound` (one past the total sum).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SparseRepr", into = "SparseRepr")]
pub struct VerySparseSet {
    elements: GenSet,
    certified_bound: u64,
}

#[derive(Serialize, Deserialize)]
struct SparseRepr {
    elements: GenSet,
    certified_bound: u64,
}

impl TryFrom<SparseRepr> for VerySparseSet {
    type Error = Error;
    fn try_from(r: SparseRepr) -> Result<Self> {
        let set = VerySparseSet::from_certified(r.elements)?;
        if set.certified_bound != r.certified_bound {
            return Err(Error::BeyondCertifiedBound {
                value: r.certified_bound,
                bound: set.certified_bound,
            });
        }
        Ok(set)
    }
}

impl From<VerySparseSet> for SparseRepr {
    fn from(s: VerySparseSet) -> SparseRepr {
        SparseRepr {
            elements: s.elements,
            certified_bound: s.certified_bound,
        }
    }
}

impl VerySparseSet {
    /// Certify `elements` and wrap them; fails with the violating pair.
    pub fn from_certified(elements: GenSet) -> Result<Self> {
        let report = certify_very_sparse(&elements)?;
        match report.outcome {
            CertificationOutcome::Pass { .. } => Ok(VerySparseSet {
                elements,
                certified_bound: report.bound,
            }),
            outcome => Err(Error::CertificationFailed(outcome)),
        }
    }

    pub fn elements(&self) -> &GenSet {
        &self.elements
    }

    pub fn certified_bound(&self) -> u64 {
        self.certified_bound
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Position of a generator in the increasing enumeration.
    pub fn position(&self, element: u64) -> Option<usize> {
        self.elements.position(element)
    }

    /// Sum-set membership bitset over the certified window.
    pub fn sum_bits(&self) -> SumBits {
        fs_bits(&self.elements, self.certified_bound)
    }

    /// The unique support of `a`, i.e. the subset of generators summing to it.
    pub fn support(&self, a: u64) -> Result<GenSet> {
        if a >= self.certified_bound {
            return Err(Error::BeyondCertifiedBound {
                value: a,
                bound: self.certified_bound,
            });
        }
        subset_sum_decode(&self.elements, a).ok_or(Error::NotRepresentable { value: a })
    }
}

/// Grow a sparse set greedily, then certify it exhaustively.
pub fn generate_very_sparse(size: usize, rule: GrowthRule) -> Result<VerySparseSet> {
    if size == 0 {
        return Err(Error::EmptyGenerators);
    }
    let mut elements = Vec::with_capacity(size);
    let mut total: u64 = 0;
    for _ in 0..size {
        let next = rule
            .factor
            .checked_mul(total)
            .and_then(|x| x.checked_add(1))
            .ok_or(Error::GrowthOverflow)?;
        elements.push(next);
        total = total.checked_add(next).ok_or(Error::GrowthOverflow)?;
    }
    VerySparseSet::from_certified(GenSet::new(elements)?)
}

/// Exhaustive certification over every nonempty pair of subsets.
pub fn certify_very_sparse(d: &GenSet) -> Result<CertificationReport> {
    certify_impl(d, false)
}

/// Sequential reference path of [`certify_very_sparse`].
pub fn certify_very_sparse_seq(d: &GenSet) -> Result<CertificationReport> {
    certify_impl(d, true)
}

fn certify_impl(d: &GenSet, force_seq: bool) -> Result<CertificationReport> {
    if d.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let n = d.len();
    if n > 14 {
        return Err(Error::CertificationTooLarge(n));
    }
    let total = d.sum_u128();
    let bound = u64::try_from(total + 1).map_err(|_| Error::GrowthOverflow)?;
    let elems = d.elements();

    // subset sums indexed by bitmask
    let full: u64 = 1 << n;
    let mut sums = vec![0u64; full as usize];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        sums[mask as usize] = sums[(mask & (mask - 1)) as usize] + elems[low];
    }

    let subset = |mask: u64| -> GenSet {
        GenSet::new(
            (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| elems[i])
                .collect(),
        )
        .expect("mask projection is increasing")
    };

    // (a) uniqueness: two masks with equal sums would be two supports
    let mut by_sum: Vec<(u64, u64)> = (1..full).map(|m| (sums[m as usize], m)).collect();
    by_sum.sort_unstable();
    let support_sums_checked = by_sum.len() as u64;
    let collision = by_sum
        .windows(2)
        .filter(|w| w[0].0 == w[1].0)
        .map(|w| (w[0].0, w[0].1, w[1].1))
        .min();
    if let Some((value, m1, m2)) = collision {
        return Ok(CertificationReport {
            elements: d.clone(),
            bound,
            outcome: CertificationOutcome::AmbiguousSupport {
                value,
                first: subset(m1),
                second: subset(m2),
            },
        });
    }

    // (b) overlapping double sums must escape the sum set
    let bits = fs_bits(d, bound);
    let scan = |g: u64| -> Option<(u64, u64, u64)> {
        let sg = sums[g as usize];
        let mut hit: Option<(u64, u64, u64)> = None;
        for h in 1..full {
            if g & h == 0 {
                continue;
            }
            let total = sg + sums[h as usize];
            if bits.test(total) {
                let cand = (total, g, h);
                if hit.map_or(true, |old| cand < old) {
                    hit = Some(cand);
                }
            }
        }
        hit
    };
    let violation = if force_seq {
        exec::min_over_range_seq(full - 1, |i| scan(i + 1))
    } else {
        exec::min_over_range(full - 1, |i| scan(i + 1))
    };
    if let Some((total, g, h)) = violation {
        return Ok(CertificationReport {
            elements: d.clone(),
            bound,
            outcome: CertificationOutcome::OverlapSumInside {
                g: subset(g),
                h: subset(h),
                total,
            },
        });
    }

    // count of overlapping ordered pairs: (2^n-1)^2 - (3^n - 2^{n+1} + 1)
    let nonempty = (full - 1) as u128;
    let disjoint = 3u128.pow(n as u32) + 1 - 2 * full as u128;
    let overlap_pairs_checked = (nonempty * nonempty - disjoint) as u64;

    Ok(CertificationReport {
        elements: d.clone(),
        bound,
        outcome: CertificationOutcome::Pass {
            support_sums_checked,
            overlap_pairs_checked,
        },
    })
}
