//! Index-parallel map helpers.
//!
//! With the `parallel` feature the closures run on the rayon pool; without it
//! they run sequentially. Results are collected in index order either way, so
//! callers see identical output in both modes.

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, G>(len: usize, f: G) -> Vec<T>
where
    T: Send,
    G: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, G>(len: usize, f: G) -> Vec<T>
where
    G: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn try_map_indexed<T, E, G>(len: usize, f: G) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    G: Fn(usize) -> Result<T, E> + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn try_map_indexed<T, E, G>(len: usize, f: G) -> Result<Vec<T>, E>
where
    G: Fn(usize) -> Result<T, E>,
{
    (0..len).map(f).collect()
}
