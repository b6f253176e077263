use std::sync::atomic::{AtomicUsize, Ordering};

/// Bounds on every exhaustive search, plus the worker count for the
/// operations that fan out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Backtracking nodes per search.
    pub node_budget: u64,
    /// Models per catalog level.
    pub model_cap: usize,
    pub workers: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { node_budget: 10_000_000, model_cap: 200_000, workers: 1 }
    }
}

impl SearchLimits {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_budget(mut self, node_budget: u64) -> Self {
        self.node_budget = node_budget;
        self
    }
}

/// Order-preserving parallel map over scoped threads. With one worker (or
/// one item) it runs inline, so it is safe on targets without threads.
pub(crate) fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(items.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_iter().map(|r| r.expect("every slot filled")).collect()
}
