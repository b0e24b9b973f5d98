//! Bounded worker pool for embarrassingly parallel scan rows. Results come
//! back indexed by task, so output order never depends on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Worker count: `FERMION_ENTROPY_THREADS` when set (minimum 1), otherwise
/// the machine's available parallelism.
pub fn worker_count(tasks: usize) -> usize {
    let configured = std::env::var("FERMION_ENTROPY_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1);
    let n = configured.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    n.min(tasks.max(1))
}

/// Runs `f(0..tasks)` on a bounded pool, returning results in task order.
pub fn run_indexed<T, F>(tasks: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = worker_count(tasks);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..tasks).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= tasks {
                    break;
                }
                let value = f(idx);
                results.lock().expect("pool lock")[idx] = Some(value);
            });
        }
    });
    results
        .into_inner()
        .expect("pool lock")
        .into_iter()
        .map(|v| v.expect("every task ran"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_come_back_in_task_order() {
        let out = run_indexed(37, |i| i * i);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, i * i);
        }
    }
}
