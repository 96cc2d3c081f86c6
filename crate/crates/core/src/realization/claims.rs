use super::aset::{ASetHindman, ASetRamsey};
use super::realized::{RealizedKind, RealizedSequence};
use crate::combinatorics::{GenSet, Index, TreeBijection, TreeSeq};
use crate::convergence::{
    verify_limit_witness, LimitWitness, Sequence, TailRung, WitnessBounds,
};
use crate::error::{Error, Result};
use crate::partition_regular::{positivity_search_pred, PartitionRegularMap};
use serde::{Deserialize, Serialize};

fn rho_for(kind: RealizedKind) -> PartitionRegularMap {
    match kind {
        RealizedKind::Ramsey => PartitionRegularMap::Pairs,
        RealizedKind::Hindman => PartitionRegularMap::Fs,
    }
}

fn verification_window(realized: &RealizedSequence, f: &GenSet) -> u64 {
    match realized.kind {
        RealizedKind::Ramsey => f.max_element().map_or(1, |m| m + 1),
        RealizedKind::Hindman => realized
            .sparse
            .as_ref()
            .map_or(1, |d| d.certified_bound()),
    }
}

/// Membership of an index in the family below `node`.
pub fn a_set_member(realized: &RealizedSequence, node: &TreeSeq, idx: &Index) -> Result<bool> {
    match (realized.kind, idx) {
        (RealizedKind::Ramsey, Index::Pair(i, j)) => {
            Ok(ASetRamsey::new(node.clone()).contains(*i, *j))
        }
        (RealizedKind::Hindman, Index::Nat(a)) => {
            let d = realized.sparse.as_ref().ok_or(Error::UncertifiedSparse)?;
            ASetHindman::new(d, node.clone()).contains(*a)
        }
        (_, other) => Err(Error::DomainMismatch {
            expected: realized.domain(),
            got: other.domain(),
        }),
    }
}

/// Generators whose enumerated sequences are exactly the prefixes of the
/// branch: the witness family of the first claim.
pub fn branch_preimages(realized: &RealizedSequence, branch: &TreeSeq) -> Result<GenSet> {
    let f = TreeBijection;
    let mut out = Vec::new();
    for prefix in branch.prefixes() {
        let idx = f.index(&prefix);
        match realized.kind {
            RealizedKind::Ramsey => out.push(idx),
            RealizedKind::Hindman => {
                let d = realized.sparse.as_ref().ok_or(Error::UncertifiedSparse)?;
                let elems = d.elements().elements();
                if (idx as usize) < elems.len() {
                    out.push(elems[idx as usize]);
                } else {
                    return Err(Error::WindowTooSmall {
                        bound: elems.len() as u64,
                        reason: format!(
                            "prefix {prefix:?} enumerates at {idx}, beyond the sparse set"
                        ),
                    });
                }
            }
        }
    }
    GenSet::new(out)
}

/// Build and re-verify the limit witness of the first claim: the branch
/// prefixes' preimages, with per-rung removals of the shallow prefixes.
pub fn claim1_witness(
    realized: &RealizedSequence,
    branch: &TreeSeq,
    ladder: &[f64],
) -> Result<LimitWitness> {
    let (branch, _) = realized.scheme.collapse(branch);
    let rho = rho_for(realized.kind);
    let generators = branch_preimages(realized, &branch)?;
    let ordered: Vec<u64> = generators.iter().collect();
    let eta = realized
        .scheme
        .branch_point_value(&branch, realized.resolution_depth);
    let window = verification_window(realized, &generators);

    let mut tails = Vec::with_capacity(ladder.len());
    for &eps in ladder {
        let mut chosen: Option<GenSet> = None;
        for cut in 0..ordered.len() {
            let removed = GenSet::new(ordered[..cut].to_vec()).expect("prefix of sorted");
            let tail = generators.difference(&removed);
            if tail.len() < rho.min_generators() {
                break;
            }
            if rung_holds(realized, rho, eta, eps, &tail, window)? {
                chosen = Some(removed);
                break;
            }
        }
        match chosen {
            Some(removed) => tails.push(TailRung { eps, removed }),
            None => {
                return Err(Error::WindowTooSmall {
                    bound: ordered.len() as u64,
                    reason: format!("no removal verifies the rung eps={eps}"),
                })
            }
        }
    }

    let mut witness = LimitWitness {
        eta,
        generators,
        tails,
        verified: false,
        bounds: WitnessBounds {
            window,
            element_bound: None,
            max_size: None,
        },
    };
    verify_limit_witness(rho, realized, &witness)?;
    witness.verified = true;
    Ok(witness)
}

fn rung_holds(
    realized: &RealizedSequence,
    rho: PartitionRegularMap,
    eta: f64,
    eps: f64,
    tail: &GenSet,
    window: u64,
) -> Result<bool> {
    let image = rho.apply(tail, window)?;
    for idx in image.iter() {
        match realized.value(idx) {
            Some(v) if (v - eta).abs() < eps => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Certificate of one descent step: after dropping `removed`, the image of
/// the generators sits inside the family below `node ⌢ child`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentCertificate {
    pub node: TreeSeq,
    #[serde(rename = "F")]
    pub generators: GenSet,
    pub child: u64,
    #[serde(rename = "K")]
    pub removed: GenSet,
    pub window: u64,
}

/// Re-check a descent certificate by exhaustive scan.
pub fn verify_descent(realized: &RealizedSequence, cert: &DescentCertificate) -> Result<bool> {
    let rho = rho_for(realized.kind);
    let tail = cert.generators.difference(&cert.removed);
    if tail.len() < rho.min_generators() {
        return Ok(false);
    }
    let target = cert.node.child(cert.child);
    let image = rho.apply(&tail, cert.window)?;
    for idx in image.iter() {
        if !a_set_member(realized, &target, idx)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One step of the middle claim: from a family sitting inside the node's
/// level, drop at most one obstruction and land inside a child level.
///
/// Ties among shortest enumerated sequences break toward the least tree
/// index; the choice is recorded in the certificate.
pub fn descend(realized: &RealizedSequence, node: &TreeSeq, f: &GenSet) -> Result<DescentCertificate> {
    let rho = rho_for(realized.kind);
    if f.len() < rho.min_generators() {
        return Err(Error::TooFewGenerators {
            need: rho.min_generators(),
            got: f.len(),
        });
    }
    let window = verification_window(realized, f);

    // checked precondition: the whole image lies inside the node's family
    let image = rho.apply(f, window)?;
    for idx in image.iter() {
        if !a_set_member(realized, node, idx)? {
            return Err(Error::DescentPrecondition(format!(
                "index {idx:?} of the image escapes the family at {node:?}"
            )));
        }
    }

    let enumeration = TreeBijection;
    let (removed, pivot_seq) = match realized.kind {
        RealizedKind::Ramsey => {
            let node_index = enumeration.index(node);
            let removed = if f.contains(node_index) {
                GenSet::singleton(node_index)
            } else {
                GenSet::empty()
            };
            let tail = f.difference(&removed);
            // the shortest enumerated sequence among the survivors
            let pivot = tail
                .iter()
                .map(|m| {
                    let s = enumeration.seq(m);
                    (s.len(), m, s)
                })
                .min_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)))
                .map(|(_, _, s)| s);
            (removed, pivot)
        }
        RealizedKind::Hindman => {
            let d = realized.sparse.as_ref().ok_or(Error::UncertifiedSparse)?;
            let elems = d.elements().elements();
            let node_index = enumeration.index(node) as usize;
            let obstruction = elems.get(node_index).copied();
            let mut removed = GenSet::empty();
            if let Some(e_s) = obstruction {
                for a in f.iter() {
                    if d.support(a)?.contains(e_s) {
                        removed = removed.inserted(a);
                    }
                }
            }
            let tail = f.difference(&removed);
            // least-depth generator sequence across all supports
            let mut pivot: Option<(usize, u64, TreeSeq)> = None;
            for a in tail.iter() {
                for e in d.support(a)?.iter() {
                    let pos = d.position(e).expect("support elements are generators") as u64;
                    let s = enumeration.seq(pos);
                    let key = (s.len(), pos);
                    if pivot.as_ref().map_or(true, |(l, p, _)| key < (*l, *p)) {
                        pivot = Some((s.len(), pos, s));
                    }
                }
            }
            (removed, pivot.map(|(_, _, s)| s))
        }
    };

    let tail = f.difference(&removed);
    if tail.len() < rho.min_generators() {
        return Err(Error::WindowTooSmall {
            bound: tail.len() as u64,
            reason: "descent leaves too few generators".into(),
        });
    }
    let pivot_seq = pivot_seq.expect("tail nonempty yields a pivot");
    if pivot_seq.len() <= node.len() {
        return Err(Error::DescentPrecondition(format!(
            "pivot sequence {pivot_seq:?} does not extend {node:?}"
        )));
    }
    let child = pivot_seq.get(node.len()).expect("length checked");

    let cert = DescentCertificate {
        node: node.clone(),
        generators: f.clone(),
        child,
        removed,
        window,
    };
    if !verify_descent(realized, &cert)? {
        return Err(Error::DescentPrecondition(format!(
            "descent into child {child} fails re-verification at {node:?}"
        )));
    }
    Ok(cert)
}

/// Search bounds for the third claim.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Claim3Bounds {
    pub eps: f64,
    pub target_size: usize,
    pub element_bound: u64,
    pub max_depth: u32,
}

/// Outcome of the third claim: any surviving witness pins the target value
/// near the scheme's projection, one way or the other.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Claim3Outcome {
    /// The witness descends along a branch; the target value lies within
    /// `error + eps` of the resolved interval center.
    Descent {
        witness: GenSet,
        branch: TreeSeq,
        approx: f64,
        error: f64,
        eps: f64,
        certificates: Vec<DescentCertificate>,
    },
    /// The witness keeps escaping the root family, so it rides the base
    /// point: the target value lies within `eps` of it.
    BasePoint {
        witness: GenSet,
        escape: Index,
        approx: f64,
        error: f64,
        eps: f64,
    },
    /// No witness inside the bounds; the target value is unconstrained at
    /// this scale.
    Unconstrained { bounds: Claim3Bounds },
}

impl Claim3Outcome {
    /// Whether the outcome constrains the target near the projection.
    pub fn accepts(&self) -> bool {
        !matches!(self, Claim3Outcome::Unconstrained { .. })
    }
}

/// Run the third claim against a candidate target value: search for a level
/// set witness, then either descend it along a branch or certify that it
/// rides the base point.
pub fn claim3_refute(
    realized: &RealizedSequence,
    eta: f64,
    bounds: &Claim3Bounds,
) -> Result<Claim3Outcome> {
    let rho = rho_for(realized.kind);
    let eps = bounds.eps;
    let window = match realized.kind {
        RealizedKind::Ramsey => bounds.element_bound,
        RealizedKind::Hindman => realized
            .sparse
            .as_ref()
            .map_or(bounds.element_bound, |d| d.certified_bound()),
    };
    let pred = |idx: Index| {
        realized
            .value(&idx)
            .is_some_and(|v| (v - eta).abs() < eps)
    };
    let Some(witness) =
        positivity_search_pred(rho, &pred, bounds.target_size, bounds.element_bound, window)?
    else {
        return Ok(Claim3Outcome::Unconstrained { bounds: *bounds });
    };

    // dichotomy: the largest sub-family staying inside the root level
    let chain = max_root_chain(realized, &witness)?;
    if chain.len() >= rho.min_generators() {
        let mut node = TreeSeq::empty();
        let mut family = chain;
        let mut certificates = Vec::new();
        while (node.len() as u32) < bounds.max_depth {
            match descend(realized, &node, &family) {
                Ok(cert) => {
                    node = node.child(cert.child);
                    family = cert.generators.difference(&cert.removed);
                    certificates.push(cert);
                    if family.len() < rho.min_generators() {
                        break;
                    }
                }
                Err(_) => break,
            }
        }
        let bp = realized.scheme.resolve(&node);
        if (eta - bp.approx).abs() > bp.error + eps {
            return Err(Error::WitnessInvalid(format!(
                "descent landed at {node:?} but eta={eta} escapes its interval"
            )));
        }
        return Ok(Claim3Outcome::Descent {
            witness,
            branch: node,
            approx: bp.approx,
            error: bp.error,
            eps,
            certificates,
        });
    }

    // every large sub-family escapes: exhibit an escaping index, whose value
    // is the base point and lies inside the level set
    let image = rho.apply(&witness, window)?;
    let escape = image
        .iter()
        .find(|idx| !a_set_member(realized, &TreeSeq::empty(), idx).unwrap_or(false))
        .copied()
        .ok_or_else(|| {
            Error::WitnessInvalid("no chain and no escaping index in the witness".into())
        })?;
    let base = realized.base_value();
    if (eta - base).abs() >= eps {
        return Err(Error::WitnessInvalid(format!(
            "escaping index should pin eta={eta} within eps={eps} of the base point {base}"
        )));
    }
    let root_error = realized
        .scheme
        .resolve(&TreeSeq::empty().zero_extended(realized.resolution_depth as usize))
        .error;
    Ok(Claim3Outcome::BasePoint {
        witness,
        escape,
        approx: base,
        error: root_error,
        eps,
    })
}

/// Largest subset of `f` whose whole image stays inside the root family.
fn max_root_chain(realized: &RealizedSequence, f: &GenSet) -> Result<GenSet> {
    match realized.kind {
        RealizedKind::Ramsey => {
            // longest chain in the prefix order of the enumerated sequences
            let enumeration = TreeBijection;
            let elems: Vec<u64> = f.iter().collect();
            let seqs: Vec<TreeSeq> = elems.iter().map(|&e| enumeration.seq(e)).collect();
            let mut best: Vec<usize> = Vec::new();
            let mut chain_to: Vec<Vec<usize>> = vec![Vec::new(); elems.len()];
            let mut order: Vec<usize> = (0..elems.len()).collect();
            order.sort_by_key(|&i| (seqs[i].len(), elems[i]));
            for &i in &order {
                let mut longest: Vec<usize> = Vec::new();
                for &j in &order {
                    if seqs[j].len() < seqs[i].len()
                        && seqs[j].is_prefix_of(&seqs[i])
                        && chain_to[j].len() > longest.len()
                    {
                        longest = chain_to[j].clone();
                    }
                }
                longest.push(i);
                if longest.len() > best.len() {
                    best = longest.clone();
                }
                chain_to[i] = longest;
            }
            GenSet::new({
                let mut v: Vec<u64> = best.into_iter().map(|i| elems[i]).collect();
                v.sort_unstable();
                v
            })
        }
        RealizedKind::Hindman => {
            // largest subset whose full sum set stays in the family
            let elems: Vec<u64> = f.iter().collect();
            let n = elems.len();
            let mut best: Option<Vec<u64>> = None;
            for mask in 1u64..(1 << n) {
                let subset: Vec<u64> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| elems[i])
                    .collect();
                if best.as_ref().is_some_and(|b| b.len() >= subset.len()) {
                    continue;
                }
                let g = GenSet::new(subset.clone()).expect("mask order");
                let image = PartitionRegularMap::Fs.apply(&g, verification_window(realized, &g))?;
                let mut ok = true;
                for idx in image.iter() {
                    if !a_set_member(realized, &TreeSeq::empty(), idx)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    best = Some(subset);
                }
            }
            GenSet::new(best.unwrap_or_default())
        }
    }
}
