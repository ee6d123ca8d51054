//! Multi-threaded nested Monte Carlo. Every outer realization owns its random
//! stream, so the parallel estimate is identical to
//! [`metadist_core::mdcore::nested_md_estimate`] for any thread count.

use metadist_core::mdcore::{check_query, outer_indicator, LayeredModel, MdEstimate, MdQuery};
use metadist_core::Result;
use rayon::prelude::*;

pub fn par_nested_md_estimate<M: LayeredModel + Sync>(model: &M, query: &MdQuery, seed: u64) -> Result<MdEstimate> {
    check_query(model, query)?;
    let successes = (0..query.outer_trials())
        .into_par_iter()
        .map(|i| outer_indicator(model, query, seed, i).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(MdEstimate::from_counts(successes, query.trials().to_vec(), seed))
}
