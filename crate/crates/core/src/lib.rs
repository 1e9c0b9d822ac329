//! Asymmetric Ramsey properties of random graphs, below the threshold.
//!
//! The crate computes the density measures that govern when `G(n,p)` can be
//! red/blue edge-coloured with no red `H₁` and no blue `H₂`, implements the
//! deletion-and-reinsertion colouring algorithm that does so for `p` below
//! `n^{-1/m₂(H₁,H₂)}`, and audits the growth procedures used to show the
//! algorithm rarely gets stuck.
//!
//! ```
//! use asym_ramsey::{build_pair_spec, rat, Graph};
//!
//! let pair = build_pair_spec(&Graph::complete(4), &Graph::cycle(4), rat(1, 100)).unwrap();
//! assert_eq!(pair.m2_pair, rat(9, 4));
//! ```

pub mod ahat;
pub mod blocks;
pub mod canon;
pub mod colorer;
pub mod density;
pub mod embed;
pub mod error;
pub mod families;
pub mod flow;
pub mod flower;
pub mod graph;
pub mod graph6;
pub mod grow;
pub mod harness;
pub mod oracle;
pub mod rational;
pub mod regular;
pub mod report;

pub use ahat::{enumerate_a_hat, enumerate_a_hat_with, AHatCatalog, AHatOptions};
pub use blocks::{block_decomposition, is_two_connected, Block};
pub use canon::{canonical_form, nonisomorphic_graphs};
pub use colorer::{asym_edge_col, check_stuck_state, ColorerOutcome, ColorerResult, StuckReport, TraceEvent};
pub use density::{
    asym_balancedness, balancedness, build_pair_spec, d2_asym, d2_density, d_density, default_epsilon, gamma,
    lambda, m2_asym, m2_density, m_density, min_lambda, Balance, PairCase, PairSpec,
};
pub use embed::{copies_through, enumerate_copies, CopySet, Embedding, Occurrence};
pub use error::{Error, Result};
pub use families::{a_colour, a_hat_membership, family_report, in_c, in_cstar, lstar_members, sg_decompose, FamilyReport};
pub use flower::{order_edges, compare_outside_density, EdgeOrder, FlowerAttachment, FlowerClass};
pub use graph::{graph_union, Edge, Graph, Subgraph, Vertex};
pub use graph6::{emit_graph6, parse_graph, parse_graph6};
pub use grow::{
    classify_iteration, eligible_edge, extend_l, grow, grow_alt, minimising_subgraph, GrowTrace, GrowVariant, StepKind,
};
pub use harness::{run_trial, sample_gnp, sweep, PairContext, SweepConfig, SweepReport, TrialConfig, TrialMode, TrialResult};
pub use oracle::{has_valid_coloring, verify_coloring, Colour, Coloring, Verdict};
pub use rational::{int, rat, Rational};
pub use regular::{certify_emptiness, EmptinessCertificate, RegularPairParams, Rejection, Route};
