//! Multi-threaded driver for the brute-force strong-equivalence search.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use mgc_core::oracle::{Disagreement, SeChecker, SeReport, SubsetOrder};

const CHUNK: usize = 512;

struct Shared {
    order: SubsetOrder,
    next: usize,
}

/// Same result as [`SeChecker::run`] for any number of threads: the
/// reported counterexample is the first one in enumeration order.
pub fn run_parallel(checker: &SeChecker, threads: usize) -> SeReport {
    let threads = threads.max(1);
    if threads == 1 {
        return checker.run();
    }
    let shared = Mutex::new(Shared { order: checker.y_order(), next: 0 });
    let best = AtomicUsize::new(usize::MAX);
    let found: Mutex<Option<(usize, Disagreement, u64)>> = Mutex::new(None);
    let evaluated = AtomicUsize::new(0);
    thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| {
                let mut sc = checker.scratch();
                loop {
                    let (start, ys): (usize, Vec<u64>) = {
                        let mut g = shared.lock().unwrap();
                        let start = g.next;
                        let ys: Vec<u64> = g.order.by_ref().take(CHUNK).collect();
                        g.next += ys.len();
                        (start, ys)
                    };
                    if ys.is_empty() || start > best.load(Ordering::Relaxed) {
                        return;
                    }
                    for (k, y) in ys.into_iter().enumerate() {
                        let idx = start + k;
                        if idx > best.load(Ordering::Relaxed) {
                            return;
                        }
                        let o = checker.check_y(y, &mut sc);
                        evaluated.fetch_add(o.pairs_evaluated as usize, Ordering::Relaxed);
                        if let Some(d) = o.counterexample {
                            let mut f = found.lock().unwrap();
                            if f.as_ref().is_none_or(|(i, ..)| idx < *i) {
                                *f = Some((idx, d, o.pairs_checked));
                                best.store(idx, Ordering::Relaxed);
                            }
                            return;
                        }
                    }
                }
            });
        }
    });
    let evaluated = evaluated.load(Ordering::Relaxed) as u64;
    match found.into_inner().unwrap() {
        None => checker.report(None, checker.total_pairs(), evaluated),
        Some((idx, d, within)) => {
            let before: u128 = checker.y_order().take(idx).map(|y| 1u128 << y.count_ones()).sum();
            checker.report(Some(d), before + within as u128, evaluated)
        }
    }
}
