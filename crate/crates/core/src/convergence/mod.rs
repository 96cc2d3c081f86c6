//! Witness-based detection of limit points, cluster points and ideal limit
//! points on finite sequence windows, plus the layered counterexample
//! constructions and the 2-adic valuation example.

mod layered;
mod window;
mod witness;

pub use layered::{
    block_family_fs, block_family_pairs, chain_case_split, layered_sequence, ChainCaseSplit,
    LayeredFamily,
};
pub use window::{
    lemma_dominated_valuation_violation, lemma_dominated_valuation_violation_seq,
    lemma_equal_valuation_violation, lemma_equal_valuation_violation_seq, nu2, nu2_sequence,
    Sequence, SequenceWindow,
};
pub use witness::{
    cluster_from_rung, convert_ideal_to_rho_witness, default_eps_ladder, find_cluster_witness,
    find_ideal_limit_witness, find_limit_witness, verify_cluster_witness, verify_ideal_witness,
    verify_limit_witness, ClusterSearchBounds, ClusterWitness, IdealLimitWitness, IdealRung,
    LimitSearchBounds, LimitWitness, TailRung, WitnessBounds,
};
