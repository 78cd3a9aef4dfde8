//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) the loops run on rayon; without it
//! they fall back to plain sequential iteration. Every helper assigns each
//! output slot to exactly one closure invocation and never reduces floats
//! across tasks, so results are bitwise identical in both modes and across
//! thread counts.

/// Work sizes below this run sequentially even when `parallel` is enabled;
/// rayon overhead dominates tiny kernels.
pub const MIN_PAR_WORK: usize = 16 * 1024;

#[cfg(feature = "parallel")]
mod imp {
    use rayon::prelude::*;

    pub fn map_indexed<T, F>(n: usize, work: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        if work >= super::MIN_PAR_WORK && n > 1 {
            (0..n).into_par_iter().map(f).collect()
        } else {
            (0..n).map(f).collect()
        }
    }

    pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, work: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        if work >= super::MIN_PAR_WORK && data.len() > chunk {
            data.par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(i, c)| f(i, c));
        } else {
            for (i, c) in data.chunks_mut(chunk).enumerate() {
                f(i, c);
            }
        }
    }
}

#[cfg(not(feature = "parallel"))]
mod imp {
    pub fn map_indexed<T, F>(n: usize, _work: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }

    pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, _work: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        for (i, c) in data.chunks_mut(chunk).enumerate() {
            f(i, c);
        }
    }
}

/// Maps `f` over `0..n`, collecting results in index order. `work` is an
/// estimate of total scalar operations, used to decide whether splitting
/// pays off.
pub fn map_indexed<T, F>(n: usize, work: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    imp::map_indexed(n, work, f)
}

/// Splits `data` into `chunk`-sized pieces and applies `f(chunk_index, piece)`
/// to each. Chunks are disjoint, so the write pattern is deterministic.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, work: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    imp::for_each_chunk_mut(data, chunk, work, f)
}

/// Always-sequential variant of [`map_indexed`]; benchmark baseline.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
