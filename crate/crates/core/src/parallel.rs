//! Indexed map over sample indices, data-parallel when the `parallel`
//! feature is enabled.
//!
//! Results always come back in index order, so any aggregation done over the
//! returned vector is independent of the thread count.

/// Environment variable capping worker parallelism; `0` means serial.
pub const THREADS_ENV: &str = "CURVKIT_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Threads {
    /// Plain iterator on the calling thread.
    Serial,
    /// A dedicated pool with this many workers.
    Fixed(usize),
    /// The global rayon pool.
    #[default]
    Auto,
}

impl Threads {
    /// Reads `CURVKIT_THREADS`; unset or unparsable values mean [`Threads::Auto`].
    pub fn from_env() -> Self {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(Threads::from_count)
            .unwrap_or(Threads::Auto)
    }

    pub fn from_count(count: usize) -> Self {
        match count {
            0 => Threads::Serial,
            k => Threads::Fixed(k),
        }
    }
}

/// `(0..count).map(f)`, evaluated according to `threads`.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(count: usize, threads: Threads, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    use rayon::prelude::*;

    let run = || (0..count as u64).into_par_iter().map(&f).collect();
    match threads {
        Threads::Serial => (0..count as u64).map(&f).collect(),
        Threads::Auto => run(),
        Threads::Fixed(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(run),
            Err(_) => (0..count as u64).map(&f).collect(),
        },
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(count: usize, _threads: Threads, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    (0..count as u64).map(f).collect()
}
