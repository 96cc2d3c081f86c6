use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Finite strictly increasing set of naturals.
///
/// Stands in for the infinite generator sets of the theory, truncated to a
/// finite prefix. Serializes as a plain sorted integer array.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GenSet(Vec<u64>);

impl std::fmt::Debug for GenSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GenSet{:?}", self.0)
    }
}

impl GenSet {
    /// Build from an already strictly increasing list.
    pub fn new(elements: Vec<u64>) -> Result<Self> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotStrictlyIncreasing);
        }
        Ok(GenSet(elements))
    }

    /// Build from arbitrary input, sorting and deduplicating.
    pub fn from_unsorted(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        GenSet(elements)
    }

    pub fn empty() -> Self {
        GenSet(Vec::new())
    }

    pub fn singleton(x: u64) -> Self {
        GenSet(vec![x])
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// Position of `x` in the increasing enumeration.
    pub fn position(&self, x: u64) -> Option<usize> {
        self.0.binary_search(&x).ok()
    }

    pub fn min_element(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max_element(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn sum_u128(&self) -> u128 {
        self.0.iter().map(|&x| x as u128).sum()
    }

    /// Set difference `self \ other`.
    pub fn difference(&self, other: &GenSet) -> GenSet {
        GenSet(self.iter().filter(|&x| !other.contains(x)).collect())
    }

    pub fn union(&self, other: &GenSet) -> GenSet {
        let mut all: Vec<u64> = self.0.iter().chain(other.0.iter()).copied().collect();
        all.sort_unstable();
        all.dedup();
        GenSet(all)
    }

    pub fn is_subset_of(&self, other: &GenSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    pub fn intersects(&self, other: &GenSet) -> bool {
        self.iter().any(|x| other.contains(x))
    }

    /// Insert one element, keeping order. No-op if already present.
    pub fn inserted(&self, x: u64) -> GenSet {
        match self.0.binary_search(&x) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, x);
                GenSet(v)
            }
        }
    }
}

impl TryFrom<Vec<u64>> for GenSet {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        GenSet::new(v)
    }
}

impl From<GenSet> for Vec<u64> {
    fn from(g: GenSet) -> Vec<u64> {
        g.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_duplicates() {
        assert!(GenSet::new(vec![1, 1]).is_err());
        assert!(GenSet::new(vec![2, 1]).is_err());
        assert!(GenSet::new(vec![0, 1, 5]).is_ok());
    }

    #[test]
    fn difference_and_union() {
        let f = GenSet::new(vec![1, 2, 4, 8]).unwrap();
        let k = GenSet::new(vec![2, 8]).unwrap();
        assert_eq!(f.difference(&k).elements(), &[1, 4]);
        assert_eq!(f.union(&k).elements(), &[1, 2, 4, 8]);
        assert!(k.is_subset_of(&f));
    }

    #[test]
    fn json_round_trip() {
        let g = GenSet::new(vec![1, 5, 25]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, "[1,5,25]");
        let back: GenSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<GenSet>("[3,2]").is_err());
    }
}
