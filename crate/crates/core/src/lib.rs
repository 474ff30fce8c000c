//! Multipermutation-matrix algebra, codes cut out of it by integer linear
//! constraints, and LP-relaxation decoders for memoryless channels and the
//! Chebyshev distance, with exhaustive reference decoders for validation.

pub mod channel;
pub mod codes;
pub mod decode;
pub mod error;
pub mod lp;
pub mod multiperm;
pub mod oracle;
pub mod polytope;

pub use channel::{
    channel_rng, cost_matrix_awgn, cost_matrix_qsc, pseudodistance_awgn, q_function, sample_awgn,
    sample_qsc, union_bound_awgn, AwgnChannel, CostMatrix, QSymmetricChannel,
};
pub use codes::{
    derangement_spec, enumerate_codebook, exclusion_constraint, min_distance, satisfies,
    shieh_cardinality, shieh_spec, to_permutation_spec, CodeSpec, Codebook, LinearConstraint,
    Metric, PermutationSystem, DEFAULT_ENUMERATION_LIMIT,
};
pub use decode::{
    build_polytope_rows, certificate_check, decode_chebyshev, decode_memoryless, round_solution,
    DecodeResult, EPS_INT,
};
pub use error::{Error, Result};
pub use lp::{solve_lp, LinearProgram, LpRow, LpSolution, LpStatus, Relation, EPS_LP};
pub use multiperm::{
    chebyshev_distance, hamming_distance, matrix_hamming_distance, trace_distance, InitialVector,
    MultiplicityVector, Multipermutation, MultipermutationMatrix, PermutationMatrix,
};
pub use oracle::{
    chebyshev_decode_exhaustive, error_correction_radius_check, ml_decode_exhaustive,
    OracleResult, MAX_ORACLE_EVALUATIONS,
};
pub use polytope::{
    birkhoff_decompose, canonical_sorted_matrix, decompose_relaxed, membership_check,
    stochastic_from_relaxed, ConvexCombination, DoublyStochasticMatrix, MembershipReport,
    RelaxedMatrix, EPS_FEAS_EXACT, EPS_FEAS_LP,
};
