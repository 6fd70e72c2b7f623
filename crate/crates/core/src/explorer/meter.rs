//! CPU time and peak resident memory of an exploration run.
//!
//! Peak memory is best-effort: a background thread samples the process
//! resident set size every couple of milliseconds while the run is active.

use std::sync::mpsc::{self, RecvTimeoutError};
use std::thread::JoinHandle;
use std::time::Duration;

use serde::{Deserialize, Serialize};

const SAMPLE_INTERVAL: Duration = Duration::from_millis(2);

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Metering {
    pub cpu_seconds: f64,
    pub peak_memory_bytes: u64,
}

pub(crate) struct Meter {
    cpu_start: f64,
    stop: mpsc::Sender<()>,
    sampler: JoinHandle<u64>,
}

impl Meter {
    pub fn start() -> Self {
        let (stop, rx) = mpsc::channel::<()>();
        let sampler = std::thread::spawn(move || {
            let mut peak = resident_bytes().unwrap_or(0);
            loop {
                match rx.recv_timeout(SAMPLE_INTERVAL) {
                    Err(RecvTimeoutError::Timeout) => {
                        peak = peak.max(resident_bytes().unwrap_or(0));
                    }
                    _ => return peak.max(resident_bytes().unwrap_or(0)),
                }
            }
        });
        Meter {
            cpu_start: thread_cpu_seconds(),
            stop,
            sampler,
        }
    }

    pub fn finish(self) -> Metering {
        let cpu_seconds = (thread_cpu_seconds() - self.cpu_start).max(0.0);
        let _ = self.stop.send(());
        let sampled = self.sampler.join().unwrap_or(0);
        Metering {
            cpu_seconds,
            peak_memory_bytes: if sampled > 0 { sampled } else { max_rss_bytes() },
        }
    }
}

/// CPU time consumed by the calling thread.
pub fn thread_cpu_seconds() -> f64 {
    let mut ts = libc::timespec {
        tv_sec: 0,
        tv_nsec: 0,
    };
    // SAFETY: `ts` is a valid, writable timespec.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return 0.0;
    }
    ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9
}

fn resident_bytes() -> Option<u64> {
    let statm = std::fs::read_to_string("/proc/self/statm").ok()?;
    let pages: u64 = statm.split_whitespace().nth(1)?.parse().ok()?;
    // SAFETY: sysconf has no memory-safety preconditions.
    let page = unsafe { libc::sysconf(libc::_SC_PAGESIZE) };
    Some(pages * page.max(0) as u64)
}

fn max_rss_bytes() -> u64 {
    // SAFETY: zeroed rusage is a valid out-parameter.
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    let rc = unsafe { libc::getrusage(libc::RUSAGE_SELF, &mut usage) };
    if rc != 0 {
        return 0;
    }
    // ru_maxrss is in kilobytes on Linux.
    usage.ru_maxrss.max(0) as u64 * 1024
}
