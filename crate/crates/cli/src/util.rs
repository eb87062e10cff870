//! Worker-pool fan-out and small hashing helpers for the driver.

use std::sync::Mutex;

/// Worker cap: SZEGO_LAB_THREADS when set, otherwise the machine parallelism.
pub fn worker_cap() -> usize {
    std::env::var("SZEGO_LAB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Run one task per input on a bounded scoped pool; results come back in
/// input order, so artifact contents stay deterministic regardless of
/// scheduling.
pub fn fan_out<T, R, F>(tasks: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let workers = worker_cap().min(tasks.len().max(1));
    if workers <= 1 {
        return tasks.into_iter().map(f).collect();
    }
    let mut slots: Vec<Option<R>> = Vec::with_capacity(tasks.len());
    slots.resize_with(tasks.len(), || None);
    let slots = Mutex::new(slots);
    let queue = Mutex::new(tasks.into_iter().enumerate().collect::<Vec<_>>());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let next = queue.lock().unwrap().pop();
                match next {
                    Some((idx, task)) => {
                        let result = f(task);
                        slots.lock().unwrap()[idx] = Some(result);
                    }
                    None => break,
                }
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

/// FNV-1a over bytes; used for the config hash in the run manifest.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
