//! Data-parallel iteration shim.
//!
//! With the `parallel` feature this re-exports rayon's prelude. Without it the
//! same method names resolve to ordinary sequential iterators, so call sites
//! compile unchanged in both configurations. Only combinators that exist on
//! both `Iterator` and rayon's `ParallelIterator` with identical meaning
//! (`map`, `filter`, `filter_map`, `collect`, `sum`, `count`, `all`, `any`)
//! should be used through this module.

#[cfg(feature = "parallel")]
pub use rayon::prelude::*;

#[cfg(not(feature = "parallel"))]
pub use sequential::*;

#[cfg(not(feature = "parallel"))]
mod sequential {
    pub trait IntoParallelIterator {
        type Iter: Iterator<Item = Self::Item>;
        type Item;

        fn into_par_iter(self) -> Self::Iter;
    }

    impl<I: IntoIterator> IntoParallelIterator for I {
        type Iter = I::IntoIter;
        type Item = I::Item;

        fn into_par_iter(self) -> Self::Iter {
            self.into_iter()
        }
    }

    pub trait IntoParallelRefIterator<'data> {
        type Iter: Iterator<Item = Self::Item>;
        type Item: 'data;

        fn par_iter(&'data self) -> Self::Iter;
    }

    impl<'data, I: 'data + ?Sized> IntoParallelRefIterator<'data> for I
    where
        &'data I: IntoIterator,
    {
        type Iter = <&'data I as IntoIterator>::IntoIter;
        type Item = <&'data I as IntoIterator>::Item;

        fn par_iter(&'data self) -> Self::Iter {
            self.into_iter()
        }
    }
}

/// Whether this build fans work out over a thread pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Caps the global worker count. A no-op in sequential builds; fails if the
/// pool was already started.
pub fn set_thread_count(threads: usize) -> Result<(), String> {
    if threads == 0 {
        return Err("thread count must be at least 1".into());
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())?;
    Ok(())
}
