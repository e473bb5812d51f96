//! Minimal worker-pool helper for embarrassingly parallel grid maps.
//!
//! The worker count is capped by the `HCMA_THREADS` environment variable
//! (default: available parallelism). Work is split into contiguous chunks of
//! the output slice, so results are bitwise identical for any thread count.

use std::env;

/// Worker cap from `HCMA_THREADS`, clamped to at least 1.
pub fn worker_count() -> usize {
    match env::var("HCMA_THREADS") {
        Ok(v) => v.trim().parse::<usize>().ok().filter(|&n| n >= 1).unwrap_or(1),
        Err(_) => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    }
}

/// Fills `out[i] = f(offset + i)` for the whole slice, chunked across workers.
pub fn fill_indexed<T, F>(out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = worker_count().min(out.len().max(1));
    if threads <= 1 || out.len() < 1024 {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = f(i);
        }
        return;
    }
    let chunk = out.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (ci, part) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                let base = ci * chunk;
                for (i, slot) in part.iter_mut().enumerate() {
                    *slot = f(base + i);
                }
            });
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fill_matches_serial() {
        let mut a = vec![0usize; 5000];
        fill_indexed(&mut a, |i| i * 3 + 1);
        assert!(a.iter().enumerate().all(|(i, &v)| v == i * 3 + 1));
    }
}
