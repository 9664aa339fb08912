//! Parallel, checkpointed execution of a [`SearchContext`].
//!
//! Frontier tasks are handed to workers through an atomic index. The node
//! budget is a shared counter that workers draw from in small slices; the
//! first worker to come up empty stops everyone. Only tasks that ran to the
//! end are merged, so the final hit list and statistics depend on which tasks
//! finished, never on thread scheduling.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use fdual_core::search::{sort_hits, SearchStats, TaskOutcome};
use fdual_core::{Certificate, SearchConfig, SearchContext};
use thiserror::Error;

use crate::checkpoint::{checkpoint_load, checkpoint_save, CheckpointError, CheckpointRecord, TaskRecord};
use crate::FormatError;

const BUDGET_SLICE: u64 = 1024;
const CHECKPOINT_INTERVAL: Duration = Duration::from_secs(2);

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid search configuration: {0}")]
    Config(#[from] fdual_core::Error),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error("checkpoint lists a task this search does not have: {0:?}")]
    UnknownTask(Vec<usize>),
    #[error("checkpoint hit does not decode: {0}")]
    Hit(#[from] FormatError),
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; 0 is treated as 1.
    pub jobs: usize,
    /// Read on start when present, rewritten as tasks finish.
    pub checkpoint: Option<PathBuf>,
    /// Stop handing out work after this many tasks finish in this run.
    pub stop_after_tasks: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    /// Sorted hits over every finished task, resumed ones included.
    pub hits: Vec<Certificate>,
    pub stats: SearchStats,
    pub complete: bool,
    /// True when the node budget ran out before every task finished.
    pub budget_stopped: bool,
    pub tasks_total: usize,
    pub tasks_completed: usize,
    pub tasks_resumed: usize,
    /// Nodes visited in this run, including those of tasks cut short.
    pub nodes_this_run: u64,
    pub automorphisms: usize,
    pub automorphisms_complete: bool,
    pub elapsed: Duration,
}

struct Budget<'a> {
    shared: Option<&'a AtomicU64>,
    stop: &'a AtomicBool,
    local: u64,
    spent: &'a AtomicU64,
}

impl Budget<'_> {
    fn take(&mut self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let Some(shared) = self.shared else {
            self.spent.fetch_add(1, Ordering::Relaxed);
            return true;
        };
        if self.local == 0 {
            let grabbed = shared.fetch_update(Ordering::AcqRel, Ordering::Acquire, |r| {
                if r == 0 {
                    None
                } else {
                    Some(r - r.min(BUDGET_SLICE))
                }
            });
            match grabbed {
                Ok(before) => self.local = before.min(BUDGET_SLICE),
                Err(_) => {
                    self.stop.store(true, Ordering::Relaxed);
                    return false;
                }
            }
        }
        self.local -= 1;
        self.spent.fetch_add(1, Ordering::Relaxed);
        true
    }
}

/// Runs the search described by `config`, resuming from and writing to the
/// checkpoint named in `options`.
pub fn run_search(config: SearchConfig, options: &RunOptions) -> Result<RunReport, RunError> {
    let started = Instant::now();
    let ctx = SearchContext::new(config)?;
    let tasks = ctx.enumerate_tasks();

    let mut record = match &options.checkpoint {
        Some(path) if path.exists() => checkpoint_load(path, ctx.config())?,
        _ => CheckpointRecord::new(ctx.config()),
    };
    let known: BTreeSet<&[usize]> = tasks.iter().map(|t| t.chosen.as_slice()).collect();
    if let Some(bad) = record.completed.iter().find(|id| !known.contains(id.as_slice())) {
        return Err(RunError::UnknownTask(bad.clone()));
    }
    let done: BTreeSet<Vec<usize>> = record.completed.iter().cloned().collect();
    let tasks_resumed = done.len();
    let pending: Vec<_> = tasks.iter().filter(|t| !done.contains(&t.chosen)).cloned().collect();

    let shared_budget = ctx.config().budget.map(AtomicU64::new);
    let stop = AtomicBool::new(false);
    let spent = AtomicU64::new(0);
    let next = AtomicUsize::new(0);
    let finished_here = AtomicUsize::new(0);
    let jobs = options.jobs.max(1).min(pending.len().max(1));

    let mut budget_stopped = false;
    std::thread::scope(|scope| -> Result<(), RunError> {
        let (tx, rx) = mpsc::channel::<TaskOutcome>();
        for _ in 0..jobs {
            let tx = tx.clone();
            let (ctx, pending, next, stop, spent, finished_here) =
                (&ctx, &pending, &next, &stop, &spent, &finished_here);
            let shared = shared_budget.as_ref();
            let stop_after = options.stop_after_tasks;
            scope.spawn(move || {
                let mut budget = Budget { shared, stop, local: 0, spent };
                loop {
                    if stop.load(Ordering::Relaxed) {
                        break;
                    }
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(task) = pending.get(i) else { break };
                    let outcome = ctx.run_task(task, &mut || budget.take());
                    if outcome.complete {
                        let n = finished_here.fetch_add(1, Ordering::Relaxed) + 1;
                        if stop_after.is_some_and(|k| n >= k) {
                            stop.store(true, Ordering::Relaxed);
                        }
                    }
                    if tx.send(outcome).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);

        let mut last_save = Instant::now();
        for outcome in rx {
            if !outcome.complete {
                if shared_budget.as_ref().is_some_and(|b| b.load(Ordering::Acquire) == 0) {
                    budget_stopped = true;
                }
                continue;
            }
            record.push(TaskRecord::from_outcome(&outcome));
            if let Some(path) = &options.checkpoint {
                if last_save.elapsed() >= CHECKPOINT_INTERVAL {
                    checkpoint_save(path, &record)?;
                    last_save = Instant::now();
                }
            }
        }
        Ok(())
    })?;

    if let Some(path) = &options.checkpoint {
        checkpoint_save(path, &record)?;
    }
    if shared_budget.as_ref().is_some_and(|b| b.load(Ordering::Acquire) == 0) && record.completed.len() < tasks.len() {
        budget_stopped = true;
    }

    let mut hits = Vec::new();
    for r in &record.results {
        for h in &r.hits {
            hits.push(h.to_certificate()?);
        }
    }
    sort_hits(&mut hits);
    Ok(RunReport {
        hits,
        stats: record.stats.into(),
        complete: record.completed.len() == tasks.len(),
        budget_stopped,
        tasks_total: tasks.len(),
        tasks_completed: record.completed.len(),
        tasks_resumed,
        nodes_this_run: spent.load(Ordering::Relaxed),
        automorphisms: ctx.automorphisms().maps.len(),
        automorphisms_complete: ctx.automorphisms().complete,
        elapsed: started.elapsed(),
    })
}
