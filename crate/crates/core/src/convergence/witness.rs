use super::window::Sequence;
use crate::combinatorics::{subset_sum_decode, GenSet, Index};
use crate::error::{Error, Result};
use crate::partition_regular::{positivity_search_pred, PartitionRegularMap};
use serde::{Deserialize, Serialize};

/// One rung of a limit witness: inside distance `eps` of the target once
/// the generators in `removed` are dropped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailRung {
    pub eps: f64,
    #[serde(rename = "K")]
    pub removed: GenSet,
}

/// Search-space description attached to every witness and every miss.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessBounds {
    /// Indices are verified on `[0, window)`.
    pub window: u64,
    /// Generator candidates were drawn from `[0, element_bound)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element_bound: Option<u64>,
    /// Cap on the generator count.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_size: Option<usize>,
}

/// Certificate that the sequence tends to `eta` along the image of `F`:
/// for each rung, every index in the image of `F \ K` lies within `eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitWitness {
    pub eta: f64,
    #[serde(rename = "F")]
    pub generators: GenSet,
    pub tails: Vec<TailRung>,
    pub verified: bool,
    pub bounds: WitnessBounds,
}

/// Certificate that the `eps`-neighborhood level set of `eta` is positive:
/// it contains the whole image of `F` on the window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterWitness {
    pub eta: f64,
    pub eps: f64,
    #[serde(rename = "F")]
    pub generators: GenSet,
    pub window: u64,
}

/// One rung of an ideal-limit witness: along the image of `F`, every index
/// except the listed finitely many lies within `eps` of the target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealRung {
    pub eps: f64,
    pub exceptions: Vec<Index>,
}

/// Certificate of an ideal limit point: the subsequence along the image of
/// `F` converges to `eta` in the ordinary sense, with per-rung exceptions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealLimitWitness {
    pub eta: f64,
    #[serde(rename = "F")]
    pub generators: GenSet,
    pub rungs: Vec<IdealRung>,
    pub window: u64,
}

/// The default dyadic ladder `2^{-1} … 2^{-10}`.
pub fn default_eps_ladder() -> Vec<f64> {
    (1..=10).map(|k| 1.0 / (1u64 << k) as f64).collect()
}

pub(crate) fn check_ladder(ladder: &[f64]) -> Result<()> {
    if ladder.is_empty()
        || ladder.iter().any(|&e| !(e > 0.0))
        || ladder.windows(2).any(|w| w[0] <= w[1])
    {
        return Err(Error::BadEpsilonLadder);
    }
    Ok(())
}

/// Re-verify a limit witness index by index.
pub fn verify_limit_witness<S: Sequence + ?Sized>(
    rho: PartitionRegularMap,
    seq: &S,
    w: &LimitWitness,
) -> Result<()> {
    check_ladder(&w.tails.iter().map(|t| t.eps).collect::<Vec<_>>())?;
    for rung in &w.tails {
        let tail = w.generators.difference(&rung.removed);
        if tail.len() < rho.min_generators() {
            return Err(Error::WitnessInvalid(format!(
                "rung eps={} leaves {} generators, need {}",
                rung.eps,
                tail.len(),
                rho.min_generators()
            )));
        }
        let image = rho.apply(&tail, w.bounds.window)?;
        for idx in image.iter() {
            match seq.value(idx) {
                Some(v) if (v - w.eta).abs() < rung.eps => {}
                Some(v) => {
                    return Err(Error::WitnessInvalid(format!(
                        "index {idx:?} has value {v}, outside eps={} of eta={}",
                        rung.eps, w.eta
                    )))
                }
                None => {
                    return Err(Error::WitnessInvalid(format!(
                        "index {idx:?} is not evaluable"
                    )))
                }
            }
        }
    }
    Ok(())
}

/// Re-verify a cluster witness: the image of `F` sits inside the level set.
pub fn verify_cluster_witness<S: Sequence + ?Sized>(
    rho: PartitionRegularMap,
    seq: &S,
    w: &ClusterWitness,
) -> Result<()> {
    if !(w.eps > 0.0) {
        return Err(Error::BadEpsilonLadder);
    }
    let image = rho.apply(&w.generators, w.window)?;
    if image.is_empty() {
        return Err(Error::WitnessInvalid("image is empty on the window".into()));
    }
    for idx in image.iter() {
        match seq.value(idx) {
            Some(v) if (v - w.eta).abs() < w.eps => {}
            other => {
                return Err(Error::WitnessInvalid(format!(
                    "index {idx:?} with value {other:?} escapes the level set"
                )))
            }
        }
    }
    Ok(())
}

/// Re-verify an ideal-limit witness: outside the declared exceptions, every
/// image index lies within each rung.
pub fn verify_ideal_witness<S: Sequence + ?Sized>(
    rho: PartitionRegularMap,
    seq: &S,
    w: &IdealLimitWitness,
) -> Result<()> {
    check_ladder(&w.rungs.iter().map(|r| r.eps).collect::<Vec<_>>())?;
    let image = rho.apply(&w.generators, w.window)?;
    for rung in &w.rungs {
        for idx in image.iter() {
            if rung.exceptions.contains(idx) {
                continue;
            }
            match seq.value(idx) {
                Some(v) if (v - w.eta).abs() < rung.eps => {}
                other => {
                    return Err(Error::WitnessInvalid(format!(
                        "index {idx:?} with value {other:?} escapes eps={} and is not excepted",
                        rung.eps
                    )))
                }
            }
        }
    }
    Ok(())
}

/// Search controls for [`find_limit_witness`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LimitSearchBounds {
    /// Candidates are drawn from `[0, element_bound)`.
    pub element_bound: u64,
    /// Generators demanded at the finest rung.
    pub base_size: usize,
    /// Cap on the total generator count after per-rung extensions.
    pub max_size: usize,
    /// Verification window.
    pub window: u64,
}

impl LimitSearchBounds {
    pub fn new(element_bound: u64, window: u64) -> Self {
        LimitSearchBounds {
            element_bound,
            base_size: 2,
            max_size: 16,
            window,
        }
    }
}

/// Layered deterministic search for a limit witness.
///
/// The finest rung is seeded with the least positivity witness inside its
/// level set; each coarser rung greedily adjoins the least element that
/// keeps the image inside its own level set. Deterministic; a miss means
/// the finest level set holds no witness within the bounds.
pub fn find_limit_witness<S: Sequence + ?Sized>(
    rho: PartitionRegularMap,
    seq: &S,
    eta: f64,
    ladder: &[f64],
    bounds: &LimitSearchBounds,
) -> Result<Option<LimitWitness>> {
    check_ladder(ladder)?;
    let level = |idx: Index, eps: f64| seq.value(&idx).is_some_and(|v| (v - eta).abs() < eps);

    let finest = *ladder.last().expect("ladder nonempty");
    let seed_pred = move |idx: Index| level(idx, finest);
    let Some(seed) = positivity_search_pred(
        rho,
        &seed_pred,
        bounds.base_size,
        bounds.element_bound,
        bounds.window,
    )?
    else {
        return Ok(None);
    };

    // grow outward: tiers[r] generates rung r, nested upward
    let mut tiers: Vec<GenSet> = vec![seed];
    for &eps in ladder.iter().rev().skip(1) {
        let prev = tiers.last().unwrap().clone();
        let mut grown = prev.clone();
        if grown.len() < bounds.max_size {
            for e in 0..bounds.element_bound {
                if grown.contains(e) {
                    continue;
                }
                let candidate = grown.inserted(e);
                let image = rho.apply(&candidate, bounds.window)?;
                if image.iter().all(|idx| level(*idx, eps)) {
                    grown = candidate;
                    break;
                }
            }
        }
        tiers.push(grown);
    }
    tiers.reverse(); // tiers[i] now matches ladder[i]

    // each rung keeps as much of the final family as its level set allows
    let generators = tiers[0].clone();
    let mut tails = Vec::with_capacity(ladder.len());
    for (&eps, tier) in ladder.iter().zip(tiers.iter()) {
        let mut keep = tier.clone();
        for e in generators.difference(tier).iter() {
            let candidate = keep.inserted(e);
            let image = rho.apply(&candidate, bounds.window)?;
            if image.iter().all(|idx| level(*idx, eps)) {
                keep = candidate;
            }
        }
        tails.push(TailRung {
            eps,
            removed: generators.difference(&keep),
        });
    }
    let mut witness = LimitWitness {
        eta,
        generators,
        tails,
        verified: false,
        bounds: WitnessBounds {
            window: bounds.window,
            element_bound: Some(bounds.element_bound),
            max_size: Some(bounds.max_size),
        },
    };
    verify_limit_witness(rho, seq, &witness)?;
    witness.verified = true;
    Ok(Some(witness))
}

/// Search controls for cluster and ideal-limit searches.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ClusterSearchBounds {
    pub element_bound: u64,
    pub target_size: usize,
    pub window: u64,
}

/// Positivity search inside the `eps`-level set of `eta`.
pub fn find_cluster_witness<S: Sequence + ?Sized>(
    rho: PartitionRegularMap,
    seq: &S,
    eta: f64,
    eps: f64,
    bounds: &ClusterSearchBounds,
) -> Result<Option<ClusterWitness>> {
    if !(eps > 0.0) {
        return Err(Error::BadEpsilonLadder);
    }
    let pred = |idx: Index| seq.value(&idx).is_some_and(|v| (v - eta).abs() < eps);
    let hit = positivity_search_pred(rho, &pred, bounds.target_size, bounds.element_bound, bounds.window)?;
    match hit {
        Some(generators) => {
            let w = ClusterWitness {
                eta,
                eps,
                generators,
                window: bounds.window,
            };
            verify_cluster_witness(rho, seq, &w)?;
            Ok(Some(w))
        }
        None => Ok(None),
    }
}

/// Search for an ideal limit witness: a positive image along which the
/// sequence converges in the ordinary sense.
///
/// The search demands the whole image inside the finest level set, which
/// yields exception-free rungs; externally supplied witnesses may carry
/// nonempty exception lists.
pub fn find_ideal_limit_witness<S: Sequence + ?Sized>(
    rho: PartitionRegularMap,
    seq: &S,
    eta: f64,
    ladder: &[f64],
    bounds: &ClusterSearchBounds,
) -> Result<Option<IdealLimitWitness>> {
    check_ladder(ladder)?;
    let finest = *ladder.last().expect("ladder nonempty");
    let pred = |idx: Index| seq.value(&idx).is_some_and(|v| (v - eta).abs() < finest);
    let Some(generators) =
        positivity_search_pred(rho, &pred, bounds.target_size, bounds.element_bound, bounds.window)?
    else {
        return Ok(None);
    };
    let w = IdealLimitWitness {
        eta,
        generators,
        rungs: ladder
            .iter()
            .map(|&eps| IdealRung {
                eps,
                exceptions: Vec::new(),
            })
            .collect(),
        window: bounds.window,
    };
    verify_ideal_witness(rho, seq, &w)?;
    Ok(Some(w))
}

/// Convert an ideal-limit witness into a limit witness.
///
/// The generator set is thinned so every image point has a unique support;
/// each rung's finite exception set is then swept out by removing the
/// supports of the offending indices. The output is re-verified; a failure
/// on valid input is an internal invariant violation.
pub fn convert_ideal_to_rho_witness<S: Sequence + ?Sized>(
    rho: PartitionRegularMap,
    seq: &S,
    w: &IdealLimitWitness,
) -> Result<LimitWitness> {
    verify_ideal_witness(rho, seq, w)?;
    let thinned = crate::partition_regular::thin_for_s(rho, &w.generators);

    let mut tails = Vec::with_capacity(w.rungs.len());
    for rung in &w.rungs {
        let image = rho.apply(&thinned, w.window)?;
        let mut removed = GenSet::empty();
        for idx in image.iter() {
            let bad = match seq.value(idx) {
                Some(v) => !((v - w.eta).abs() < rung.eps),
                None => true,
            };
            if !bad {
                continue;
            }
            match (rho, idx) {
                (PartitionRegularMap::Fs, Index::Nat(a)) => {
                    let support = subset_sum_decode(&thinned, *a).ok_or_else(|| {
                        Error::WitnessInvalid(format!("no support for image point {a}"))
                    })?;
                    removed = removed.union(&support);
                }
                (PartitionRegularMap::Pairs, Index::Pair(i, j)) => {
                    removed = removed.union(&GenSet::new(vec![*i, *j]).expect("i<j"));
                }
                (PartitionRegularMap::Ident, Index::Nat(a)) => {
                    removed = removed.inserted(*a);
                }
                _ => unreachable!("image domain matches the map"),
            }
        }
        tails.push(TailRung {
            eps: rung.eps,
            removed,
        });
    }

    let mut out = LimitWitness {
        eta: w.eta,
        generators: thinned,
        tails,
        verified: false,
        bounds: WitnessBounds {
            window: w.window,
            element_bound: None,
            max_size: None,
        },
    };
    verify_limit_witness(rho, seq, &out)?;
    out.verified = true;
    Ok(out)
}

/// The cluster witness carried by one rung of a limit witness: the level
/// set at `eps` contains the image of `F \ K`.
pub fn cluster_from_rung<S: Sequence + ?Sized>(
    rho: PartitionRegularMap,
    seq: &S,
    w: &LimitWitness,
    rung: &TailRung,
) -> Result<ClusterWitness> {
    let c = ClusterWitness {
        eta: w.eta,
        eps: rung.eps,
        generators: w.generators.difference(&rung.removed),
        window: w.bounds.window,
    };
    verify_cluster_witness(rho, seq, &c)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::IndexDomain;
    use crate::convergence::window::{nu2_sequence, SequenceWindow};

    fn dyadic(k: u32) -> f64 {
        1.0 / (1u64 << k) as f64
    }

    #[test]
    fn hand_built_power_witness_verifies_exactly() {
        // the canonical witness for the valuation sequence tending to 0:
        // F = the powers of two, rung 2^{-k} removes the powers below 2^k
        let x = nu2_sequence(65536).unwrap();
        let f = GenSet::new((0..16).map(|n| 1u64 << n).collect()).unwrap();
        let tails = (1..=10)
            .map(|k| TailRung {
                eps: dyadic(k),
                removed: GenSet::new((0..=k as u64).map(|n| 1u64 << n).collect()).unwrap(),
            })
            .collect();
        let w = LimitWitness {
            eta: 0.0,
            generators: f,
            tails,
            verified: false,
            bounds: WitnessBounds {
                window: 65536,
                element_bound: None,
                max_size: None,
            },
        };
        verify_limit_witness(PartitionRegularMap::Fs, &x, &w).unwrap();
    }

    #[test]
    fn constant_sequence_needs_no_removals() {
        let x = SequenceWindow::from_fn(IndexDomain::Nat, 64, |_| 0.75).unwrap();
        let w = find_limit_witness(
            PartitionRegularMap::Fs,
            &x,
            0.75,
            &default_eps_ladder(),
            &LimitSearchBounds::new(64, 64),
        )
        .unwrap()
        .unwrap();
        assert!(w.verified);
        assert!(w.tails.iter().all(|t| t.removed.is_empty()));
    }

    #[test]
    fn valuation_sequence_limit_found_at_zero() {
        let x = nu2_sequence(65536).unwrap();
        let w = find_limit_witness(
            PartitionRegularMap::Fs,
            &x,
            0.0,
            &default_eps_ladder(),
            &LimitSearchBounds::new(16384, 65536),
        )
        .unwrap()
        .unwrap();
        assert!(w.verified);
        // every chosen generator is a power of two
        for e in w.generators.iter() {
            assert!(e.is_power_of_two(), "generator {e}");
        }
        // rungs hold as cluster witnesses too
        for rung in &w.tails {
            cluster_from_rung(PartitionRegularMap::Fs, &x, &w, rung).unwrap();
        }
    }

    #[test]
    fn one_third_is_not_a_limit_point() {
        let x = nu2_sequence(4096).unwrap();
        let w = find_limit_witness(
            PartitionRegularMap::Fs,
            &x,
            1.0 / 3.0,
            &default_eps_ladder(),
            &LimitSearchBounds::new(4096, 4096),
        )
        .unwrap();
        assert!(w.is_none());
    }

    #[test]
    fn cluster_witness_inside_high_valuation_level_set() {
        let x = nu2_sequence(4096).unwrap();
        let w = find_cluster_witness(
            PartitionRegularMap::Fs,
            &x,
            0.0,
            1.0 / 8.0,
            &ClusterSearchBounds {
                element_bound: 2048,
                target_size: 2,
                window: 4096,
            },
        )
        .unwrap()
        .unwrap();
        // |x_n| < 1/8 forces valuation at least 4
        for e in w.generators.iter() {
            assert_eq!(e % 16, 0, "generator {e}");
        }
    }

    #[test]
    fn exact_level_cluster_missing_at_size_two() {
        let x = nu2_sequence(4096).unwrap();
        // a tiny ball around 2^{-m} isolates the exact valuation level
        for m in 1..=4u32 {
            let w = find_cluster_witness(
                PartitionRegularMap::Fs,
                &x,
                dyadic(m),
                dyadic(m + 3),
                &ClusterSearchBounds {
                    element_bound: 1024,
                    target_size: 2,
                    window: 2048,
                },
            )
            .unwrap();
            assert!(w.is_none(), "m={m}");
        }
    }

    #[test]
    fn planted_ideal_witness_found_and_converts() {
        // x equals the target exactly on the sum set of {1, 5, 25, 125}
        let plant = GenSet::new(vec![1, 5, 25, 125]).unwrap();
        let sums = crate::combinatorics::fs(&plant, 256).unwrap();
        let x = SequenceWindow::from_fn(IndexDomain::Nat, 256, |idx| {
            if sums.contains(idx) {
                0.5
            } else {
                2.0
            }
        })
        .unwrap();
        let ladder = default_eps_ladder();
        let w = find_ideal_limit_witness(
            PartitionRegularMap::Fs,
            &x,
            0.5,
            &ladder,
            &ClusterSearchBounds {
                element_bound: 256,
                target_size: 3,
                window: 256,
            },
        )
        .unwrap()
        .unwrap();
        let limit = convert_ideal_to_rho_witness(PartitionRegularMap::Fs, &x, &w).unwrap();
        assert!(limit.verified);
    }

    #[test]
    fn valuation_sequence_has_no_ideal_witness() {
        let x = nu2_sequence(8192).unwrap();
        let bounds = ClusterSearchBounds {
            element_bound: 4096,
            target_size: 3,
            window: 8192,
        };
        for eta in [0.0, 0.5, 0.25, 1.0 / 3.0, 1.0] {
            let w = find_ideal_limit_witness(
                PartitionRegularMap::Fs,
                &x,
                eta,
                &default_eps_ladder(),
                &bounds,
            )
            .unwrap();
            assert!(w.is_none(), "eta={eta}");
        }
    }

    #[test]
    fn conversion_with_real_exceptions_removes_supports() {
        // corrupt one sum so the rung needs a nonempty removal
        let plant = GenSet::new(vec![1, 10, 100]).unwrap();
        let sums = crate::combinatorics::fs(&plant, 256).unwrap();
        let mut x = SequenceWindow::from_fn(IndexDomain::Nat, 256, |idx| {
            if sums.contains(idx) {
                0.5
            } else {
                2.0
            }
        })
        .unwrap();
        x.set(&Index::Nat(110), 0.6); // 110 = 10 + 100
        let w = IdealLimitWitness {
            eta: 0.5,
            generators: plant,
            rungs: vec![
                IdealRung {
                    eps: 0.5,
                    exceptions: vec![],
                },
                IdealRung {
                    eps: 0.01,
                    exceptions: vec![Index::Nat(110)],
                },
            ],
            window: 256,
        };
        let limit = convert_ideal_to_rho_witness(PartitionRegularMap::Fs, &x, &w).unwrap();
        assert!(limit.verified);
        let fine = &limit.tails[1];
        assert!(!fine.removed.is_empty());
    }

    #[test]
    fn ladder_validation() {
        assert!(check_ladder(&[0.5, 0.25]).is_ok());
        assert!(check_ladder(&[]).is_err());
        assert!(check_ladder(&[0.25, 0.5]).is_err());
        assert!(check_ladder(&[0.5, 0.5]).is_err());
        assert!(check_ladder(&[0.5, 0.0]).is_err());
    }

    #[test]
    fn witness_json_shape() {
        let w = LimitWitness {
            eta: 0.0,
            generators: GenSet::new(vec![2, 4]).unwrap(),
            tails: vec![TailRung {
                eps: 0.5,
                removed: GenSet::empty(),
            }],
            verified: true,
            bounds: WitnessBounds {
                window: 16,
                element_bound: None,
                max_size: None,
            },
        };
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["F"], serde_json::json!([2, 4]));
        assert_eq!(json["tails"][0]["K"], serde_json::json!([]));
        assert_eq!(json["verified"], serde_json::json!(true));
        assert!(json["bounds"]["window"].is_u64());
    }
}
