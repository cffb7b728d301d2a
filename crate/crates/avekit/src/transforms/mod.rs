//! Exact reductions between the absolute value equation and neighbouring
//! problem classes: linear complementarity, the generalized equation,
//! Sylvester-type matrix equations, mixed 0-1 programs (with MPS export) and
//! interval linear systems. Every transform ships a back-map.

mod cayley;
mod gave;
mod interval;
mod lcp;
mod milp;

pub use cayley::{cayley, transform_al, transform_la};
pub use gave::{gave_to_ave, ngave_to_gave, sylvester_to_gave, GaveToAve, GaveToAveMode, SylvesterReduction};
pub use interval::{
    ave_membership, interval_hull_vertices, theorem_of_alternatives, weak_strong_membership,
    Alternatives, IntervalMatrix, IntervalVector,
};
pub use lcp::{ave_to_lcp, lcp_to_ave, AveToLcp, Lcp, LcpToAve};
pub use milp::{
    brute_force_bounded, brute_force_prokopyev, export_milp, MilpVariant, MixedIntegerModel,
};
