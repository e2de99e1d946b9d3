use num_traits::Zero;

use crate::error::{Result, SusyError};
use crate::scalar::{cx, Cx, Real};

/// Uniform one-dimensional grid `x_min, x_min + h, ..., x_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D<T> {
    x_min: T,
    x_max: T,
    n_points: usize,
}

impl<T: Real> Grid1D<T> {
    pub fn new(x_min: T, x_max: T, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(SusyError::InvalidInput(format!(
                "a grid needs at least 3 points, got {n_points}"
            )));
        }
        if !(x_min < x_max) {
            return Err(SusyError::InvalidInput(format!(
                "grid bounds must satisfy x_min < x_max (got {x_min} and {x_max})"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Grid covering the open interval `(a, b)` whose nodes sit half a
    /// spacing away from both endpoints. Used for potentials that diverge at
    /// the ends of their domain.
    pub fn open_interval(a: T, b: T, n_points: usize) -> Result<Self> {
        if n_points < 3 || !(a < b) {
            return Grid1D::new(a, b, n_points);
        }
        let h = (b - a) / T::from_usize_lossy(n_points);
        let half = h / T::lit(2.0);
        Grid1D::new(a + half, b - half, n_points)
    }

    #[inline]
    pub fn x_min(&self) -> T {
        self.x_min
    }

    #[inline]
    pub fn x_max(&self) -> T {
        self.x_max
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn spacing(&self) -> T {
        (self.x_max - self.x_min) / T::from_usize_lossy(self.n_points - 1)
    }

    #[inline]
    pub fn x(&self, i: usize) -> T {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + self.spacing() * T::from_usize_lossy(i)
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.nodes().collect()
    }

    /// Index of the node equal to `x` (within a hundredth of a spacing).
    pub fn index_of(&self, x: T) -> Option<usize> {
        let h = self.spacing();
        let t = ((x - self.x_min) / h).round();
        if t < T::zero() {
            return None;
        }
        let i = t.to_usize()?;
        if i < self.n_points && (self.x(i) - x).abs() <= h / T::lit(100.0) {
            Some(i)
        } else {
            None
        }
    }

    /// Index of the node closest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: T) -> usize {
        let t = ((x - self.x_min) / self.spacing()).round();
        if t <= T::zero() {
            0
        } else {
            t.to_usize().unwrap_or(usize::MAX).min(self.n_points - 1)
        }
    }
}

/// Complex samples of a function and of its first derivative on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction<T> {
    pub grid: Grid1D<T>,
    pub values: Vec<Cx<T>>,
    pub derivatives: Vec<Cx<T>>,
}

impl<T: Real> SampledFunction<T> {
    pub fn new(grid: Grid1D<T>, values: Vec<Cx<T>>, derivatives: Vec<Cx<T>>) -> Result<Self> {
        if values.len() != grid.len() || derivatives.len() != grid.len() {
            return Err(SusyError::InvalidInput(format!(
                "sample lengths ({}, {}) do not match the grid ({})",
                values.len(),
                derivatives.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            derivatives,
        })
    }

    /// Samples a complex function together with its derivative.
    pub fn from_fn<F>(grid: Grid1D<T>, mut f: F) -> Self
    where
        F: FnMut(T) -> (Cx<T>, Cx<T>),
    {
        let (values, derivatives) = grid.nodes().map(&mut f).unzip();
        Self {
            grid,
            values,
            derivatives,
        }
    }

    /// Samples a real function together with its derivative.
    pub fn from_real_fn<F>(grid: Grid1D<T>, mut f: F) -> Self
    where
        F: FnMut(T) -> (T, T),
    {
        Self::from_fn(grid, |x| {
            let (v, d) = f(x);
            (cx(v), cx(d))
        })
    }

    /// Builds a real sampled function from values and derivatives.
    pub fn from_real(grid: Grid1D<T>, values: &[T], derivatives: &[T]) -> Result<Self> {
        Self::new(
            grid,
            values.iter().map(|&v| cx(v)).collect(),
            derivatives.iter().map(|&v| cx(v)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn real_values(&self) -> Vec<T> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn real_derivatives(&self) -> Vec<T> {
        self.derivatives.iter().map(|v| v.re).collect()
    }

    /// Largest imaginary part among values and derivatives.
    pub fn max_imag(&self) -> T {
        self.values
            .iter()
            .chain(&self.derivatives)
            .fold(T::zero(), |m, v| m.max(v.im.abs()))
    }

    /// Drops imaginary parts, so that real-valued data carries exact zeros.
    pub fn into_real(mut self) -> Self {
        for v in self.values.iter_mut().chain(self.derivatives.iter_mut()) {
            v.im = T::zero();
        }
        self
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    pub fn scaled(mut self, s: Cx<T>) -> Self {
        for v in self.values.iter_mut().chain(self.derivatives.iter_mut()) {
            *v *= s;
        }
        self
    }

    pub fn zeros(grid: Grid1D<T>) -> Self {
        Self {
            grid,
            values: vec![Cx::zero(); grid.len()],
            derivatives: vec![Cx::zero(); grid.len()],
        }
    }
}
