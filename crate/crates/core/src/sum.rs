//! Deterministic summation helpers.

use rayon::prelude::*;

/// Chunk size for parallel reductions. Results are bit-reproducible for a
/// fixed value.
pub const CHUNK: usize = 1 << 14;

const BLOCK: usize = 64;

/// Pairwise (cascade) summation over an iterator.
pub fn pairwise<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let v: Vec<f64> = values.into_iter().collect();
    pairwise_slice(&v)
}

pub fn pairwise_slice(v: &[f64]) -> f64 {
    if v.len() <= BLOCK {
        v.iter().sum()
    } else {
        let mid = v.len() / 2;
        pairwise_slice(&v[..mid]) + pairwise_slice(&v[mid..])
    }
}

/// Maps every element of `items` and sums the results.
///
/// Chunks are reduced in parallel and the chunk totals combined pairwise in
/// order, so the result does not depend on thread scheduling.
pub fn par_map_sum<T, F>(items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    let partials: Vec<f64> = items
        .par_chunks(CHUNK)
        .map(|chunk| {
            let vals: Vec<f64> = chunk.iter().map(&f).collect();
            pairwise_slice(&vals)
        })
        .collect();
    pairwise_slice(&partials)
}
