use crate::combinatorics::{TreeBijection, TreeSeq, VerySparseSet};
use crate::error::{Error, Result};

/// The pair family below a tree node: `{i, j}` belongs when `i < j` and the
/// enumerated sequences chain through `s`, i.e. `s ⊆ f(i) ⊆ f(j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASetRamsey {
    pub node: TreeSeq,
}

impl ASetRamsey {
    pub fn new(node: TreeSeq) -> Self {
        ASetRamsey { node }
    }

    pub fn contains(&self, i: u64, j: u64) -> bool {
        if i >= j {
            return false;
        }
        let f = TreeBijection;
        let fi = f.seq(i);
        let fj = f.seq(j);
        self.node.is_prefix_of(&fi) && fi.is_prefix_of(&fj)
    }
}

/// The sum family below a tree node: a finite sum belongs when its unique
/// support enumerates into a chain of sequences extending `s`.
///
/// The bijection into sequences composes the canonical tree enumeration
/// with the increasing enumeration of the sparse set, so the k-th smallest
/// generator carries the k-th sequence.
#[derive(Clone, Debug)]
pub struct ASetHindman<'a> {
    pub sparse: &'a VerySparseSet,
    pub node: TreeSeq,
}

impl<'a> ASetHindman<'a> {
    pub fn new(sparse: &'a VerySparseSet, node: TreeSeq) -> Self {
        ASetHindman { sparse, node }
    }

    /// Sequence attached to the generator at `position` in the enumeration.
    pub fn generator_seq(&self, position: usize) -> TreeSeq {
        TreeBijection.seq(position as u64)
    }

    pub fn contains(&self, a: u64) -> Result<bool> {
        if a >= self.sparse.certified_bound() {
            return Err(Error::BeyondCertifiedBound {
                value: a,
                bound: self.sparse.certified_bound(),
            });
        }
        let support = match self.sparse.support(a) {
            Ok(s) => s,
            Err(Error::NotRepresentable { .. }) => return Ok(false),
            Err(e) => return Err(e),
        };
        let mut prev = self.node.clone();
        for element in support.iter() {
            let pos = self
                .sparse
                .position(element)
                .expect("support elements are generators");
            let fs = self.generator_seq(pos);
            if !prev.is_prefix_of(&fs) {
                return Ok(false);
            }
            prev = fs;
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{generate_very_sparse, GrowthRule};

    fn ts(v: &[u64]) -> TreeSeq {
        TreeSeq::new(v.to_vec())
    }

    #[test]
    fn ramsey_membership_follows_prefix_chains() {
        let root = ASetRamsey::new(TreeSeq::empty());
        // f(1) = ⟨0⟩ and f(4) = ⟨0,0⟩ chain through the root
        assert!(root.contains(1, 4));
        // f(1) = ⟨0⟩ is no prefix of f(2) = ⟨1⟩
        assert!(!root.contains(1, 2));
        assert!(!root.contains(4, 1));

        let deeper = ASetRamsey::new(ts(&[0]));
        assert!(deeper.contains(1, 4));
        assert!(!deeper.contains(2, 8)); // f(2) = ⟨1⟩ does not extend ⟨0⟩
    }

    #[test]
    fn ramsey_monotone_and_sibling_disjoint_small() {
        // s ⊆ t forces A_t ⊆ A_s; siblings are disjoint
        let f = TreeBijection;
        let nodes: Vec<TreeSeq> = (0..13).map(|i| f.seq(i)).collect();
        for s in &nodes {
            for t in &nodes {
                if s.is_prefix_of(t) {
                    let a_s = ASetRamsey::new(s.clone());
                    let a_t = ASetRamsey::new(t.clone());
                    for i in 0..40u64 {
                        for j in (i + 1)..40 {
                            if a_t.contains(i, j) {
                                assert!(a_s.contains(i, j), "A_{t:?} ⊄ A_{s:?} at ({i},{j})");
                            }
                        }
                    }
                }
            }
        }
        for s in nodes.iter().take(4) {
            for n in 0..3u64 {
                for k in (n + 1)..3 {
                    let a_n = ASetRamsey::new(s.child(n));
                    let a_k = ASetRamsey::new(s.child(k));
                    for i in 0..40u64 {
                        for j in (i + 1)..40 {
                            assert!(
                                !(a_n.contains(i, j) && a_k.contains(i, j)),
                                "siblings of {s:?} share ({i},{j})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hindman_membership_and_bounds() {
        let d = generate_very_sparse(5, GrowthRule::default()).unwrap();
        let root = ASetHindman::new(&d, TreeSeq::empty());
        // single generators always chain trivially under the root
        for e in d.elements().iter() {
            assert!(root.contains(e).unwrap(), "generator {e}");
        }
        // d_1 + d_4: f(1) = ⟨0⟩, f(4) = ⟨0,0⟩ chain
        let e = d.elements().elements();
        assert!(root.contains(e[1] + e[4]).unwrap());
        // d_1 + d_2: f(1) = ⟨0⟩, f(2) = ⟨1⟩ do not chain
        assert!(!root.contains(e[1] + e[2]).unwrap());
        // not a sum at all
        assert!(!root.contains(2).unwrap());
        // beyond the certified window
        assert!(root.contains(d.certified_bound()).is_err());
    }

    #[test]
    fn hindman_sets_live_inside_the_sum_set() {
        let d = generate_very_sparse(5, GrowthRule::default()).unwrap();
        let bits = d.sum_bits();
        let root = ASetHindman::new(&d, TreeSeq::empty());
        for a in 0..d.certified_bound() {
            if root.contains(a).unwrap() {
                assert!(bits.test(a), "{a} in the family but not a finite sum");
            }
        }
    }
}
