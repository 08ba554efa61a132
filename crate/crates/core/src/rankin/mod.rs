//! Rankin minima, minimal reduced heights and the slope filtration.

mod enumerate;
mod filtration;
mod search;

pub use enumerate::{min_norm, short_vectors, short_vectors_limited, IntForm, ShortVector};
pub use filtration::{
    canonical_polygon, gs_filtration, h_min, is_semistable, is_stable, rankin_min, rankin_profile,
    sub_from_rows, subquotient, validate_filtration, Filtration, FiltrationCheck, MinFlag,
    RankinProfile,
};
pub use search::{gamma_bound, search_rank, RankSearch};

use crate::exact::Rat;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Maximum number of search-tree nodes per enumeration.
    pub budget_nodes: u64,
    /// Replace the certified generator radius; results are then flagged
    /// uncertified.
    pub radius_override: Option<Rat>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget_nodes: DEFAULT_BUDGET, radius_override: None }
    }
}
