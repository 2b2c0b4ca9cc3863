//! Execution helpers for data-parallel loops.
//!
//! With the `parallel` feature (default) indexed maps run on the ambient
//! rayon pool; without it the same API compiles to plain sequential loops.
//! Map outputs are collected in index order and every reduction runs in a
//! fixed pairwise order, so results are bit-identical regardless of how many
//! workers execute the map.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every index in `0..n`, collecting results in index order.
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential twin of [`map_range`], available regardless of features.
/// The benchmark suite uses it as the single-thread baseline.
pub fn map_range_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Splits `out` into rows of `row_len` and fills each row independently.
pub fn fill_rows<T, F>(out: &mut [T], row_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    debug_assert_eq!(out.len() % row_len.max(1), 0);
    #[cfg(feature = "parallel")]
    {
        out.par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(i, row)| f(i, row));
    }
    #[cfg(not(feature = "parallel"))]
    {
        out.chunks_mut(row_len)
            .enumerate()
            .for_each(|(i, row)| f(i, row));
    }
}

/// Sums in a fixed pairwise order: deterministic for any thread count and
/// more accurate than left-to-right accumulation on long inputs.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Evaluates `f` over `0..n` (in parallel when enabled) and pairwise-sums
/// the results in index order.
pub fn sum_range<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    pairwise_sum(&map_range(n, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_range_matches_sequential() {
        let par = map_range(1000, |i| (i as f64).sqrt());
        let seq = map_range_seq(1000, |i| (i as f64).sqrt());
        assert_eq!(par, seq);
    }

    #[test]
    fn pairwise_sum_exact_on_integers() {
        let xs: Vec<f64> = (0..10_000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), (10_000.0 * 9_999.0) / 2.0);
    }

    #[test]
    fn pairwise_beats_naive_on_ill_conditioned_sum() {
        // Alternating large/small terms; exact sum is n * 1e-8.
        let n = 1 << 16;
        let mut xs = Vec::with_capacity(2 * n);
        for _ in 0..n {
            xs.push(1e16);
            xs.push(-1e16 + 1e-8);
        }
        let exact = n as f64 * 1e-8;
        let pairwise_err = (pairwise_sum(&xs) - exact).abs();
        let naive: f64 = xs.iter().sum();
        let naive_err = (naive - exact).abs();
        assert!(pairwise_err <= naive_err);
    }

    #[test]
    fn fill_rows_writes_every_row() {
        let mut out = vec![0usize; 12];
        fill_rows(&mut out, 3, |i, row| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = 10 * i + j;
            }
        });
        assert_eq!(out, vec![0, 1, 2, 10, 11, 12, 20, 21, 22, 30, 31, 32]);
    }
}
