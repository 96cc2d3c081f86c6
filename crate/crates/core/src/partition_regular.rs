//! The two canonical partition regular maps at finite scale — finite sums
//! and pairs — plus the tail-subset relation, ideal positivity as bounded
//! search, and finite checks of the defining axioms.

use crate::combinatorics::{fs, pairs, GenSet, Index, IndexDomain, IndexSet};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which map carries generator sets to index sets.
///
/// `Ident` is the trivial map `F ↦ F` realizing a plain ideal; it exists for
/// tests only.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionRegularMap {
    Fs,
    Pairs,
    Ident,
}

impl PartitionRegularMap {
    pub fn min_generators(&self) -> usize {
        match self {
            PartitionRegularMap::Pairs => 2,
            _ => 1,
        }
    }

    pub fn target_domain(&self) -> IndexDomain {
        match self {
            PartitionRegularMap::Pairs => IndexDomain::Pair,
            _ => IndexDomain::Nat,
        }
    }

    /// Evaluate the map on a finite generator set, windowed to `[0, bound)`.
    ///
    /// Windows are judged on the largest natural an index mentions, so for
    /// pairs `{i, j}` the pair is kept when `j < bound`.
    pub fn apply(&self, f: &GenSet, bound: u64) -> Result<IndexSet> {
        if f.len() < self.min_generators() {
            return if f.is_empty() {
                Err(Error::EmptyGenerators)
            } else {
                Err(Error::TooFewGenerators {
                    need: self.min_generators(),
                    got: f.len(),
                })
            };
        }
        match self {
            PartitionRegularMap::Fs => fs(f, bound),
            PartitionRegularMap::Pairs => Ok(pairs(f)?.restricted(bound)),
            PartitionRegularMap::Ident => {
                Ok(IndexSet::from_naturals(f.iter().filter(|&x| x < bound)))
            }
        }
    }
}

/// Witness that a set is positive for the induced ideal: the image of `F`
/// stays inside the queried set on the whole window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityWitness {
    #[serde(rename = "F")]
    pub generators: GenSet,
    pub window: u64,
}

/// The tail-subset relation: some finite `K` makes the image of `F \ K`
/// land inside `B`.  Here the candidate `K` is given by the caller.
pub fn rho_tail_subset(
    rho: PartitionRegularMap,
    f: &GenSet,
    k: &GenSet,
    b: &IndexSet,
    bound: u64,
) -> Result<bool> {
    let tail = f.difference(k);
    Ok(rho.apply(&tail, bound)?.is_subset_of(b))
}

/// Deterministic search for the lexicographically least `F` of the given
/// size, drawn from `[0, element_bound)`, whose image lies inside `inside`.
///
/// For pairs this is clique search; for finite sums it is a backtracking
/// walk that maintains the running sum set and prunes on the first escape.
pub fn positivity_search(
    rho: PartitionRegularMap,
    inside: &IndexSet,
    target_size: usize,
    element_bound: u64,
    window: u64,
) -> Result<Option<PositivityWitness>> {
    if inside.domain() != rho.target_domain() {
        return Err(Error::DomainMismatch {
            expected: rho.target_domain(),
            got: inside.domain(),
        });
    }
    let pred = |idx: Index| inside.contains(&idx);
    Ok(
        positivity_search_pred(rho, &pred, target_size, element_bound, window)?.map(
            |generators| PositivityWitness {
                generators,
                window,
            },
        ),
    )
}

/// Predicate-driven core of [`positivity_search`]; the predicate decides
/// membership of the queried set, evaluated only inside the window.
pub fn positivity_search_pred(
    rho: PartitionRegularMap,
    inside: &dyn Fn(Index) -> bool,
    target_size: usize,
    element_bound: u64,
    window: u64,
) -> Result<Option<GenSet>> {
    let pool: Vec<u64> = (0..element_bound).collect();
    positivity_search_pool(rho, inside, target_size, &pool, window)
}

/// Positivity search over an explicit increasing candidate pool. Lets the
/// caller restrict generators to a structured subset of the naturals.
pub fn positivity_search_pool(
    rho: PartitionRegularMap,
    inside: &dyn Fn(Index) -> bool,
    target_size: usize,
    pool: &[u64],
    window: u64,
) -> Result<Option<GenSet>> {
    if target_size < rho.min_generators() {
        return Err(Error::TooFewGenerators {
            need: rho.min_generators(),
            got: target_size,
        });
    }
    debug_assert!(pool.windows(2).all(|w| w[0] < w[1]));
    let found = match rho {
        PartitionRegularMap::Pairs => clique_search(inside, target_size, pool, window),
        PartitionRegularMap::Fs => {
            let keep = |e: u64| e >= window || inside(Index::Nat(e));
            let mut chosen: Vec<u64> = Vec::new();
            let mut sums: Vec<u64> = Vec::new();
            fs_search(&keep, target_size, pool, 0, &mut chosen, &mut sums)
        }
        PartitionRegularMap::Ident => {
            let keep = |e: u64| e >= window || inside(Index::Nat(e));
            let mut chosen = Vec::new();
            ident_search(&keep, target_size, pool, 0, &mut chosen)
        }
    };
    Ok(found.map(|v| GenSet::new(v).expect("search emits increasing elements")))
}

/// Re-check a positivity witness from scratch.
pub fn verify_positivity(
    rho: PartitionRegularMap,
    witness: &PositivityWitness,
    inside: &IndexSet,
) -> Result<bool> {
    Ok(rho
        .apply(&witness.generators, witness.window)?
        .is_subset_of(inside))
}

fn clique_search(
    inside: &dyn Fn(Index) -> bool,
    target_size: usize,
    pool: &[u64],
    window: u64,
) -> Option<Vec<u64>> {
    // a pair beyond the window is outside the checked image and never prunes
    let edge = |i: u64, j: u64| j >= window || inside(Index::Pair(i, j));
    fn rec(
        edge: &dyn Fn(u64, u64) -> bool,
        chosen: &mut Vec<u64>,
        pool: &[u64],
        from: usize,
        remaining: usize,
    ) -> bool {
        if remaining == 0 {
            return true;
        }
        for (off, &v) in pool[from..].iter().enumerate() {
            if pool.len() - (from + off) < remaining {
                break;
            }
            if chosen.iter().all(|&u| edge(u, v)) {
                chosen.push(v);
                if rec(edge, chosen, pool, from + off + 1, remaining - 1) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    rec(&edge, &mut chosen, pool, 0, target_size).then_some(chosen)
}

fn fs_search(
    keep: &dyn Fn(u64) -> bool,
    target_size: usize,
    pool: &[u64],
    from: usize,
    chosen: &mut Vec<u64>,
    sums: &mut Vec<u64>,
) -> Option<Vec<u64>> {
    if chosen.len() == target_size {
        return Some(chosen.clone());
    }
    for (off, &e) in pool[from..].iter().enumerate() {
        if pool.len() - (from + off) < target_size - chosen.len() {
            break;
        }
        if !keep(e) {
            continue;
        }
        // new sums reachable once e joins: e itself plus every old sum + e
        let fresh: Vec<u64> = std::iter::once(e)
            .chain(sums.iter().map(|&s| s.saturating_add(e)))
            .collect();
        if fresh.iter().all(|&s| keep(s)) {
            let old_len = sums.len();
            sums.extend(fresh);
            chosen.push(e);
            if let Some(hit) = fs_search(keep, target_size, pool, from + off + 1, chosen, sums) {
                return Some(hit);
            }
            chosen.pop();
            sums.truncate(old_len);
        }
    }
    None
}

fn ident_search(
    keep: &dyn Fn(u64) -> bool,
    target_size: usize,
    pool: &[u64],
    from: usize,
    chosen: &mut Vec<u64>,
) -> Option<Vec<u64>> {
    if chosen.len() == target_size {
        return Some(chosen.clone());
    }
    for (off, &e) in pool[from..].iter().enumerate() {
        if pool.len() - (from + off) < target_size - chosen.len() {
            break;
        }
        if keep(e) {
            chosen.push(e);
            if let Some(hit) = ident_search(keep, target_size, pool, from + off + 1, chosen) {
                return Some(hit);
            }
            chosen.pop();
        }
    }
    None
}

/// Finite probe of the dichotomy axiom: a sub-family of `f` of the requested
/// size whose image is monochromatic under the coloring, or none at this
/// scale. A miss at finite scale proves nothing and is reported as such.
pub fn check_axiom_r<C>(
    rho: PartitionRegularMap,
    f: &GenSet,
    coloring: C,
    target_size: usize,
    bound: u64,
) -> Result<Option<GenSet>>
where
    C: Fn(&Index) -> bool,
{
    if target_size < rho.min_generators() || target_size > f.len() {
        return Ok(None);
    }
    let elems = f.elements();
    let mut pick = vec![0usize; target_size];
    // lexicographic subset enumeration
    fn rec(
        rho: PartitionRegularMap,
        elems: &[u64],
        coloring: &dyn Fn(&Index) -> bool,
        pick: &mut [usize],
        depth: usize,
        from: usize,
        bound: u64,
    ) -> Result<Option<GenSet>> {
        if depth == pick.len() {
            let candidate = GenSet::new(pick.iter().map(|&i| elems[i]).collect())?;
            let image = rho.apply(&candidate, bound)?;
            let mut colors = image.iter().map(|idx| coloring(idx));
            if let Some(first) = colors.next() {
                if colors.all(|c| c == first) {
                    return Ok(Some(candidate));
                }
            }
            return Ok(None);
        }
        for i in from..elems.len() {
            pick[depth] = i;
            if let Some(hit) = rec(rho, elems, coloring, pick, depth + 1, i + 1, bound)? {
                return Ok(Some(hit));
            }
        }
        Ok(None)
    }
    rec(rho, elems, &coloring, &mut pick, 0, 0, bound)
}

/// Thin a generator set so every image point vanishes after removing its
/// support: for finite sums, keep an element only when it exceeds the sum
/// of everything kept before (distinct subset sums); pairs and the identity
/// map already have the property.
pub fn thin_for_s(rho: PartitionRegularMap, f: &GenSet) -> GenSet {
    match rho {
        PartitionRegularMap::Fs => {
            let mut kept: Vec<u64> = Vec::new();
            let mut total: u128 = 0;
            for e in f.iter() {
                if e as u128 > total {
                    kept.push(e);
                    total += e as u128;
                }
            }
            GenSet::new(kept).expect("subsequence of increasing list")
        }
        PartitionRegularMap::Pairs | PartitionRegularMap::Ident => f.clone(),
    }
}
