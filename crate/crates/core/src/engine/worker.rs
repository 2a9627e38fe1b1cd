use std::sync::atomic::Ordering;
use std::sync::mpsc::{channel, Sender};
use std::thread::{Scope, ScopedJoinHandle};
use std::time::{Duration, Instant};

use super::Episode;
use crate::domain::Domain;
use crate::search::QueueEntry;
use crate::trace::ExpansionEvent;

pub(crate) struct Task {
    pub entry: QueueEntry,
    pub slot: usize,
    pub iteration: u32,
}

struct Slot<'scope> {
    tx: Sender<Task>,
    handle: ScopedJoinHandle<'scope, Vec<ExpansionEvent>>,
}

/// Fixed set of worker slots, spawned on first assignment.
pub(crate) struct WorkerPool<'scope, S> {
    slots: Vec<Option<Slot<'scope>>>,
    _state: std::marker::PhantomData<S>,
}

/// What shutting the pool down produced.
pub(crate) struct Shutdown {
    pub events: Vec<ExpansionEvent>,
    pub spawned: usize,
    pub latency: Duration,
}

impl<'scope, S: Send + Sync + 'scope> WorkerPool<'scope, S> {
    pub fn new(n_threads: usize) -> Self {
        WorkerPool {
            slots: (0..n_threads).map(|_| None).collect(),
            _state: std::marker::PhantomData,
        }
    }

    pub fn assign<'env, D>(
        &mut self,
        slot: usize,
        entry: QueueEntry,
        iteration: u32,
        ep: &'scope Episode<'env, D>,
        scope: &'scope Scope<'scope, '_>,
    ) where
        D: Domain<State = S>,
        'env: 'scope,
    {
        let worker = self.slots[slot].get_or_insert_with(|| {
            let (tx, rx) = channel::<Task>();
            let handle = scope.spawn(move || {
                let mut log = ep.tracing.then(Vec::new);
                while let Ok(task) = rx.recv() {
                    ep.expand_edge(&task, &mut log);
                    if ep.terminate.load(Ordering::Acquire) {
                        break;
                    }
                }
                log.unwrap_or_default()
            });
            Slot { tx, handle }
        });
        worker
            .tx
            .send(Task {
                entry,
                slot,
                iteration,
            })
            .expect("worker exited while the episode was running");
    }

    /// Release every worker and wait for it to exit.
    pub fn shutdown(self) -> Shutdown {
        let t0 = Instant::now();
        let mut handles = Vec::new();
        for slot in self.slots.into_iter().flatten() {
            drop(slot.tx);
            handles.push(slot.handle);
        }
        let spawned = handles.len();
        let mut events = Vec::new();
        for h in handles {
            events.extend(h.join().expect("worker panicked"));
        }
        let latency = t0.elapsed();
        events.sort_by_key(|e| (e.t_ns, e.worker));
        Shutdown {
            events,
            spawned,
            latency,
        }
    }
}
