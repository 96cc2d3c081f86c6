use super::aset::{ASetHindman, ASetRamsey};
use crate::combinatorics::{Index, IndexDomain, TreeBijection, TreeSeq, VerySparseSet};
use crate::convergence::Sequence;
use crate::error::{Error, Result};
use crate::exec;
use crate::souslin::Scheme;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RealizedKind {
    Ramsey,
    Hindman,
}

/// A sequence whose limit-point set realizes a scheme's projection.
///
/// Pairs chaining under the enumeration take the branch point of the larger
/// member's sequence; everything else takes the base point of the all-zero
/// branch. The window materializes values below `bound` for serialization;
/// evaluation works for any index, so witnesses may mention indices far
/// beyond the materialized window.
#[derive(Clone, Debug)]
pub struct RealizedSequence {
    pub kind: RealizedKind,
    pub scheme: Scheme,
    pub sparse: Option<VerySparseSet>,
    pub resolution_depth: u32,
    pub bound: u64,
    values: Vec<f64>,
    base_value: f64,
}

impl RealizedSequence {
    /// Populate a realized window (parallel over indices when enabled).
    pub fn build(
        kind: RealizedKind,
        scheme: Scheme,
        resolution_depth: u32,
        bound: u64,
        sparse: Option<VerySparseSet>,
    ) -> Result<Self> {
        Self::build_impl(kind, scheme, resolution_depth, bound, sparse, false)
    }

    /// Sequential reference path of [`RealizedSequence::build`].
    pub fn build_seq(
        kind: RealizedKind,
        scheme: Scheme,
        resolution_depth: u32,
        bound: u64,
        sparse: Option<VerySparseSet>,
    ) -> Result<Self> {
        Self::build_impl(kind, scheme, resolution_depth, bound, sparse, true)
    }

    fn build_impl(
        kind: RealizedKind,
        scheme: Scheme,
        resolution_depth: u32,
        bound: u64,
        sparse: Option<VerySparseSet>,
        force_seq: bool,
    ) -> Result<Self> {
        if bound == 0 {
            return Err(Error::WindowTooSmall {
                bound,
                reason: "realized sequences need at least one index".into(),
            });
        }
        match kind {
            RealizedKind::Hindman => {
                let d = sparse.as_ref().ok_or(Error::UncertifiedSparse)?;
                if bound > d.certified_bound() {
                    return Err(Error::BeyondCertifiedBound {
                        value: bound,
                        bound: d.certified_bound(),
                    });
                }
            }
            RealizedKind::Ramsey => {}
        }
        let base_value = scheme.branch_point_value(&TreeSeq::empty(), resolution_depth);
        let mut out = RealizedSequence {
            kind,
            scheme,
            sparse,
            resolution_depth,
            bound,
            values: Vec::new(),
            base_value,
        };
        let n = out.slots();
        let values = {
            let probe = &out;
            let eval = |rank: u64| {
                let idx = probe.index_of_rank(rank);
                probe.evaluate(&idx).expect("window indices are evaluable")
            };
            if force_seq {
                exec::map_range_seq(n, eval)
            } else {
                exec::map_range(n, eval)
            }
        };
        out.values = values;
        Ok(out)
    }

    fn slots(&self) -> u64 {
        match self.domain() {
            IndexDomain::Nat => self.bound,
            IndexDomain::Pair => self.bound * (self.bound - 1) / 2,
        }
    }

    fn index_of_rank(&self, rank: u64) -> Index {
        match self.domain() {
            IndexDomain::Nat => Index::Nat(rank),
            IndexDomain::Pair => {
                // invert rank = j(j-1)/2 + i
                let mut j = (((8 * rank + 1) as f64).sqrt() as u64 + 1) / 2;
                while j * (j - 1) / 2 > rank {
                    j -= 1;
                }
                while (j + 1) * j / 2 <= rank {
                    j += 1;
                }
                Index::Pair(rank - j * (j - 1) / 2, j)
            }
        }
    }

    fn rank_of_index(&self, idx: &Index) -> Option<u64> {
        match (self.domain(), idx) {
            (IndexDomain::Nat, Index::Nat(n)) => Some(*n),
            (IndexDomain::Pair, Index::Pair(i, j)) => Some(j * (j - 1) / 2 + i),
            _ => None,
        }
    }

    pub fn domain(&self) -> IndexDomain {
        match self.kind {
            RealizedKind::Ramsey => IndexDomain::Pair,
            RealizedKind::Hindman => IndexDomain::Nat,
        }
    }

    pub fn base_value(&self) -> f64 {
        self.base_value
    }

    /// Evaluate the defining rule at any index.
    pub fn evaluate(&self, idx: &Index) -> Result<f64> {
        match (self.kind, idx) {
            (RealizedKind::Ramsey, Index::Pair(i, j)) => {
                if ASetRamsey::new(TreeSeq::empty()).contains(*i, *j) {
                    let branch = TreeBijection.seq(*j);
                    Ok(self
                        .scheme
                        .branch_point_value(&branch, self.resolution_depth))
                } else {
                    Ok(self.base_value)
                }
            }
            (RealizedKind::Hindman, Index::Nat(a)) => {
                let d = self.sparse.as_ref().ok_or(Error::UncertifiedSparse)?;
                let family = ASetHindman::new(d, TreeSeq::empty());
                if family.contains(*a)? {
                    let support = d.support(*a)?;
                    let top = d
                        .position(support.max_element().expect("support nonempty"))
                        .expect("support elements are generators");
                    let branch = TreeBijection.seq(top as u64);
                    Ok(self
                        .scheme
                        .branch_point_value(&branch, self.resolution_depth))
                } else {
                    Ok(self.base_value)
                }
            }
            (_, other) => Err(Error::DomainMismatch {
                expected: self.domain(),
                got: other.domain(),
            }),
        }
    }

    /// View of the materialized window.
    pub fn window_values(&self) -> impl Iterator<Item = (Index, f64)> + '_ {
        (0..self.slots()).map(|r| (self.index_of_rank(r), self.values[r as usize]))
    }
}

impl Sequence for RealizedSequence {
    fn domain(&self) -> IndexDomain {
        self.domain()
    }

    fn value(&self, idx: &Index) -> Option<f64> {
        if let Some(rank) = self.rank_of_index(idx) {
            if idx.max_entry() < self.bound {
                return self.values.get(rank as usize).copied();
            }
        }
        self.evaluate(idx).ok()
    }
}

#[derive(Serialize, Deserialize)]
struct RealizedRepr {
    kind: RealizedKind,
    scheme: Scheme,
    #[serde(skip_serializing_if = "Option::is_none")]
    sparse: Option<VerySparseSet>,
    bound: u64,
    resolution_depth: u32,
    values: Vec<(Index, f64)>,
}

impl Serialize for RealizedSequence {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        RealizedRepr {
            kind: self.kind,
            scheme: self.scheme.clone(),
            sparse: self.sparse.clone(),
            bound: self.bound,
            resolution_depth: self.resolution_depth,
            values: self.window_values().collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RealizedSequence {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = RealizedRepr::deserialize(de)?;
        let rebuilt = RealizedSequence::build(
            repr.kind,
            repr.scheme,
            repr.resolution_depth,
            repr.bound,
            repr.sparse,
        )
        .map_err(D::Error::custom)?;
        // declared values must agree with the defining rule
        for (idx, v) in repr.values {
            let got = rebuilt.value(&idx);
            if got != Some(v) {
                return Err(D::Error::custom(format!(
                    "stored value at {idx:?} disagrees with the rule: {v} vs {got:?}"
                )));
            }
        }
        Ok(rebuilt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{generate_very_sparse, GrowthRule};

    #[test]
    fn singleton_realization_is_constant() {
        let r = RealizedSequence::build(
            RealizedKind::Ramsey,
            Scheme::singleton(0.5),
            12,
            40,
            None,
        )
        .unwrap();
        for (_, v) in r.window_values() {
            assert_eq!(v, 0.5);
        }
    }

    #[test]
    fn hindman_window_respects_certified_bound() {
        let d = generate_very_sparse(5, GrowthRule::default()).unwrap();
        let bound = d.certified_bound();
        let r = RealizedSequence::build(
            RealizedKind::Hindman,
            Scheme::singleton(0.25),
            12,
            bound,
            Some(d.clone()),
        )
        .unwrap();
        assert_eq!(r.value(&Index::Nat(2)), Some(0.25));
        assert!(RealizedSequence::build(
            RealizedKind::Hindman,
            Scheme::singleton(0.25),
            12,
            bound + 1,
            Some(d),
        )
        .is_err());
        assert!(RealizedSequence::build(
            RealizedKind::Hindman,
            Scheme::singleton(0.25),
            12,
            16,
            None,
        )
        .is_err());
    }

    #[test]
    fn cantor_ramsey_values_follow_chains() {
        let r = RealizedSequence::build(
            RealizedKind::Ramsey,
            Scheme::cantor_middle_thirds(),
            12,
            64,
            None,
        )
        .unwrap();
        // pair {1, 4}: f(4) = ⟨0,0⟩, a chained pair, lands in the left cell
        let v = r.value(&Index::Pair(1, 4)).unwrap();
        assert!(v >= 0.0 && v <= 1.0 / 9.0, "value {v}");
        // pair {1, 2}: no chain, base point of the all-zero branch = 0-ish
        let w = r.value(&Index::Pair(1, 2)).unwrap();
        assert_eq!(w, r.base_value());
        // evaluation beyond the materialized window agrees with the rule
        let far = Index::Pair(1555, 19608);
        assert!(r.value(&far).is_some());
    }

    #[test]
    fn parallel_and_sequential_builds_agree() {
        let a = RealizedSequence::build(
            RealizedKind::Ramsey,
            Scheme::cantor_middle_thirds(),
            10,
            48,
            None,
        )
        .unwrap();
        let b = RealizedSequence::build_seq(
            RealizedKind::Ramsey,
            Scheme::cantor_middle_thirds(),
            10,
            48,
            None,
        )
        .unwrap();
        let av: Vec<_> = a.window_values().collect();
        let bv: Vec<_> = b.window_values().collect();
        assert_eq!(av, bv);
    }

    #[test]
    fn json_round_trip_checks_values() {
        let r = RealizedSequence::build(
            RealizedKind::Ramsey,
            Scheme::singleton(0.5),
            8,
            12,
            None,
        )
        .unwrap();
        let j = serde_json::to_string(&r).unwrap();
        let back: RealizedSequence = serde_json::from_str(&j).unwrap();
        assert_eq!(back.bound, 12);
        // tampered values are rejected
        let mut v: serde_json::Value = serde_json::from_str(&j).unwrap();
        v["values"][0][1] = serde_json::json!(0.75);
        assert!(serde_json::from_value::<RealizedSequence>(v).is_err());
    }

    #[test]
    fn rank_inversion_round_trips() {
        let r = RealizedSequence::build(
            RealizedKind::Ramsey,
            Scheme::singleton(0.0),
            4,
            30,
            None,
        )
        .unwrap();
        for rank in 0..r.slots() {
            let idx = r.index_of_rank(rank);
            assert_eq!(r.rank_of_index(&idx), Some(rank));
        }
    }
}
