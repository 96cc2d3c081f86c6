use crate::error::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// The ambient countable set: naturals, or unordered pairs of naturals.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexDomain {
    Nat,
    Pair,
}

/// A point of the ambient set. Pairs are canonical: `Pair(i, j)` has `i < j`
/// and orders lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Index {
    Nat(u64),
    Pair(u64, u64),
}

impl Index {
    pub fn pair(i: u64, j: u64) -> Result<Index> {
        if i < j {
            Ok(Index::Pair(i, j))
        } else {
            Err(Error::InvalidPair(i, j))
        }
    }

    pub fn domain(&self) -> IndexDomain {
        match self {
            Index::Nat(_) => IndexDomain::Nat,
            Index::Pair(..) => IndexDomain::Pair,
        }
    }

    /// Largest natural mentioned by the index; windows are judged on it.
    pub fn max_entry(&self) -> u64 {
        match *self {
            Index::Nat(n) => n,
            Index::Pair(_, j) => j,
        }
    }
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Index::Nat(n) => ser.serialize_u64(n),
            Index::Pair(i, j) => [i, j].serialize(ser),
        }
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Nat(u64),
            Pair([u64; 2]),
        }
        match Repr::deserialize(de)? {
            Repr::Nat(n) => Ok(Index::Nat(n)),
            Repr::Pair([i, j]) => {
                Index::pair(i, j).map_err(|_| D::Error::custom("pair index needs i < j"))
            }
        }
    }
}

/// A finite subset of the ambient set, sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexSet {
    domain: IndexDomain,
    members: Vec<Index>,
}

impl IndexSet {
    pub fn empty(domain: IndexDomain) -> Self {
        IndexSet {
            domain,
            members: Vec::new(),
        }
    }

    pub fn from_members(domain: IndexDomain, mut members: Vec<Index>) -> Result<Self> {
        for m in &members {
            if m.domain() != domain {
                return Err(Error::DomainMismatch {
                    expected: domain,
                    got: m.domain(),
                });
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(IndexSet { domain, members })
    }

    pub fn from_naturals(values: impl IntoIterator<Item = u64>) -> Self {
        let mut members: Vec<Index> = values.into_iter().map(Index::Nat).collect();
        members.sort_unstable();
        members.dedup();
        IndexSet {
            domain: IndexDomain::Nat,
            members,
        }
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, idx: &Index) -> bool {
        self.members.binary_search(idx).is_ok()
    }

    pub fn members(&self) -> &[Index] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = &Index> + '_ {
        self.members.iter()
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.domain == other.domain && self.members.iter().all(|m| other.contains(m))
    }

    /// Members whose largest mentioned natural is below `bound`.
    pub fn restricted(&self, bound: u64) -> IndexSet {
        IndexSet {
            domain: self.domain,
            members: self
                .members
                .iter()
                .filter(|m| m.max_entry() < bound)
                .copied()
                .collect(),
        }
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            domain: IndexDomain,
            members: &'a [Index],
        }
        Repr {
            domain: self.domain,
            members: &self.members,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            domain: IndexDomain,
            members: Vec<Index>,
        }
        let r = Repr::deserialize(de)?;
        IndexSet::from_members(r.domain, r.members).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_canonical_form() {
        assert!(Index::pair(3, 3).is_err());
        assert!(Index::pair(4, 2).is_err());
        assert_eq!(Index::pair(2, 4).unwrap(), Index::Pair(2, 4));
    }

    #[test]
    fn lexicographic_order() {
        let a = Index::pair(0, 5).unwrap();
        let b = Index::pair(1, 2).unwrap();
        assert!(a < b);
    }

    #[test]
    fn set_json_shape() {
        let s = IndexSet::from_members(
            IndexDomain::Pair,
            vec![Index::pair(0, 2).unwrap(), Index::pair(0, 1).unwrap()],
        )
        .unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"domain":"pair","members":[[0,1],[0,2]]}"#);
        let back: IndexSet = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);

        let n = IndexSet::from_naturals([3, 1, 1]);
        assert_eq!(
            serde_json::to_string(&n).unwrap(),
            r#"{"domain":"nat","members":[1,3]}"#
        );
    }

    #[test]
    fn mixed_domain_rejected() {
        let err = IndexSet::from_members(IndexDomain::Nat, vec![Index::pair(0, 1).unwrap()]);
        assert!(err.is_err());
    }
}
