//! Grid sweeps. With the `parallel` feature the sweep fans out over rayon's
//! pool; without it every sweep runs on the calling thread.

/// Evaluate `f` on every grid point, preserving order.
#[cfg(feature = "parallel")]
pub fn map_grid<T, R, F>(grid: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    grid.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_grid<T, R, F>(grid: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    map_grid_seq(grid, f)
}

/// Sequential reference sweep, always available.
pub fn map_grid_seq<T, R, F>(grid: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    grid.iter().map(f).collect()
}

/// Fallible sweep; returns the first error in grid order.
pub fn try_map_grid<T, R, E, F>(grid: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map_grid(grid, f).into_iter().collect()
}

/// `n` equally spaced points on the closed interval `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { b } else { a + h * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_sequential() {
        let g = linspace(0.0, 1.0, 1001);
        let a = map_grid(&g, |t| t.sin());
        let b = map_grid_seq(&g, |t| t.sin());
        assert_eq!(a, b);
    }

    #[test]
    fn linspace_hits_endpoints() {
        let g = linspace(-1.0, 2.0, 7);
        assert_eq!(g.first(), Some(&-1.0));
        assert_eq!(g.last(), Some(&2.0));
        assert_eq!(g.len(), 7);
    }
}
