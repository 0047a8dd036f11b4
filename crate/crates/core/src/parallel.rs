//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature off, [`Execution::Parallel`] runs sequentially.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    /// `threads: None` uses the global pool.
    Parallel {
        threads: Option<usize>,
    },
    #[default]
    Auto,
}

impl Execution {
    pub fn with_threads(threads: Option<usize>) -> Self {
        match threads {
            Some(1) => Execution::Sequential,
            Some(t) => Execution::Parallel { threads: Some(t) },
            None => Execution::Auto,
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self != Execution::Sequential
    }
}

/// `items.iter().map(f).collect()`, in input order.
pub fn map_ordered<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match exec {
            Execution::Sequential => items.iter().map(f).collect(),
            Execution::Auto | Execution::Parallel { threads: None } => {
                items.par_iter().map(f).collect()
            }
            Execution::Parallel { threads: Some(t) } => {
                match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
                    Ok(pool) => pool.install(|| items.par_iter().map(f).collect()),
                    Err(_) => items.iter().map(f).collect(),
                }
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = exec;
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        for exec in [
            Execution::Sequential,
            Execution::Auto,
            Execution::Parallel { threads: Some(3) },
        ] {
            let ys = map_ordered(&xs, exec, |x| x * x);
            assert_eq!(ys, xs.iter().map(|x| x * x).collect::<Vec<_>>());
        }
    }

    #[test]
    fn one_thread_is_sequential() {
        assert_eq!(Execution::with_threads(Some(1)), Execution::Sequential);
        assert!(!Execution::Sequential.is_parallel());
    }
}
