//! Deterministic sharded parallelism. Work is cut into a fixed number of shards that
//! does not depend on the thread count, so results depend only on the inputs.

use std::sync::atomic::{AtomicUsize, Ordering};

/// Worker threads: `BEAUVILLE_WORKERS` if set to a positive integer, otherwise the
/// available parallelism.
pub fn worker_count() -> usize {
    std::env::var("BEAUVILLE_WORKERS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Runs `f` on every shard index in `0..shards` and returns the results in shard order.
pub fn map_shards<R: Send>(shards: usize, f: impl Fn(usize) -> R + Sync) -> Vec<R> {
    let workers = worker_count().min(shards).max(1);
    if workers == 1 {
        return (0..shards).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = (0..shards).map(|_| None).collect();
    let results: Vec<Vec<(usize, R)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= shards {
                            break;
                        }
                        out.push((i, f(i)));
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for (i, r) in results.into_iter().flatten() {
        slots[i] = Some(r);
    }
    slots.into_iter().map(|r| r.expect("every shard ran")).collect()
}

/// The result of the lowest-indexed shard that produced one. Shards above a shard
/// that already succeeded are skipped; shards below it always run to completion.
pub fn first_by_shard<R: Send>(shards: usize, f: impl Fn(usize) -> Option<R> + Sync) -> Option<R> {
    let best = AtomicUsize::new(usize::MAX);
    let results = map_shards(shards, |i| {
        if i > best.load(Ordering::Relaxed) {
            return None;
        }
        let r = f(i);
        if r.is_some() {
            best.fetch_min(i, Ordering::Relaxed);
        }
        r
    });
    results.into_iter().flatten().next()
}
