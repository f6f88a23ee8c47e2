//! Deterministic verdicts on the sign of the quenched free energy.

pub mod bracket;
pub mod cost;
pub mod deloc;
pub mod lemma22;
pub mod loc;
pub mod profile;
pub mod search;
pub(crate) mod strict;

pub use bracket::{hc_bracket, BracketOptions, HcBracket};
pub use cost::{
    holder_cost_gaussian, holder_cost_tilt, log_holder_cost, log_holder_cost_gaussian,
    log_holder_cost_tilt, shifted_annealed_iterate,
    shifted_annealed_log, ChangeOfMeasure,
};
pub use deloc::{deloc_certify, DelocCertificate, DelocFailure, DelocOptions, DelocVerdict};
pub use lemma22::{lemma22_check, lemma22_scan, Lemma22Outcome};
pub use loc::{
    cut_bound, loc_certify, loc_threshold, optimal_cut, CutPolicy, LocCertificate, LocFailure,
    LocOptions, LocVerdict,
};
pub use profile::{ProfileKind, ShiftProfile};
pub use search::{deloc_optimize, deloc_search_at, log_grid, Candidate, DelocOptimum, DelocSearch, ProfileFamily};
