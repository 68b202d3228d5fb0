//! Thin shims over the data-parallel inner loops.
//!
//! With the `parallel` feature (default) these dispatch to rayon; without it
//! they are plain sequential loops with identical semantics. Parallelism is
//! only ever applied to independent work items (matrix rows, sweep cells,
//! grid chunks) and reductions are limited to order-insensitive max/min, so
//! results are bit-identical across thread counts and between both builds.

/// Apply `f` to every element, in parallel when enabled.
#[cfg(feature = "parallel")]
pub fn for_each_mut<T: Send, F>(items: &mut [T], f: F)
where
    F: Fn(usize, &mut T) + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter_mut().enumerate().for_each(|(i, v)| f(i, v));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_mut<T, F>(items: &mut [T], f: F)
where
    F: Fn(usize, &mut T),
{
    for (i, v) in items.iter_mut().enumerate() {
        f(i, v);
    }
}

/// Map `0..n` and collect, in parallel when enabled.
#[cfg(feature = "parallel")]
pub fn map_collect<T: Send, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Maximum of `f` over `0..n`. Empty ranges yield `f64::NEG_INFINITY`.
#[cfg(feature = "parallel")]
pub fn max_over<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    use rayon::prelude::*;
    (0..n)
        .into_par_iter()
        .map(f)
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

#[cfg(not(feature = "parallel"))]
pub fn max_over<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64,
{
    (0..n).map(f).fold(f64::NEG_INFINITY, f64::max)
}

/// Run `f` with parallelism forced off. With the `parallel` feature this
/// installs a one-thread rayon pool (the benchmark baseline); without it,
/// it is a plain call.
#[cfg(feature = "parallel")]
pub fn run_sequential<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("single-thread pool")
        .install(f)
}

#[cfg(not(feature = "parallel"))]
pub fn run_sequential<R>(f: impl FnOnce() -> R) -> R {
    f()
}

/// Run `f` on a pool with `threads` workers (0 = rayon default). Without the
/// `parallel` feature the thread count is ignored.
#[cfg(feature = "parallel")]
pub fn run_with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

#[cfg(not(feature = "parallel"))]
pub fn run_with_threads<R>(_threads: usize, f: impl FnOnce() -> R) -> R {
    f()
}
