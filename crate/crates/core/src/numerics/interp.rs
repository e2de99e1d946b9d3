//! Piecewise Hermite interpolation of sampled data.

use crate::numerics::grid::Grid1D;
use crate::scalar::{Cx, Real};

/// Quintic Hermite interpolation on `[x0, x0 + h]` from values and first and
/// second derivatives at both ends. `t ∈ [0, 1]` is the local coordinate.
#[allow(clippy::too_many_arguments)]
pub fn hermite_quintic<T: Real>(
    t: T,
    h: T,
    f0: Cx<T>,
    d0: Cx<T>,
    s0: Cx<T>,
    f1: Cx<T>,
    d1: Cx<T>,
    s1: Cx<T>,
) -> (Cx<T>, Cx<T>) {
    let l = |v: f64| T::lit(v);
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    // basis functions and their t-derivatives
    let h00 = T::one() - l(10.0) * t3 + l(15.0) * t4 - l(6.0) * t5;
    let h01 = t - l(6.0) * t3 + l(8.0) * t4 - l(3.0) * t5;
    let h02 = (t2 - l(3.0) * t3 + l(3.0) * t4 - t5) / l(2.0);
    let h10 = l(10.0) * t3 - l(15.0) * t4 + l(6.0) * t5;
    let h11 = -l(4.0) * t3 + l(7.0) * t4 - l(3.0) * t5;
    let h12 = (t3 - l(2.0) * t4 + t5) / l(2.0);
    let g00 = -l(30.0) * t2 + l(60.0) * t3 - l(30.0) * t4;
    let g01 = T::one() - l(18.0) * t2 + l(32.0) * t3 - l(15.0) * t4;
    let g02 = (l(2.0) * t - l(9.0) * t2 + l(12.0) * t3 - l(5.0) * t4) / l(2.0);
    let g10 = -g00;
    let g11 = -l(12.0) * t2 + l(28.0) * t3 - l(15.0) * t4;
    let g12 = (l(3.0) * t2 - l(8.0) * t3 + l(5.0) * t4) / l(2.0);
    let h2 = h * h;
    let value =
        f0 * h00 + d0 * (h01 * h) + s0 * (h02 * h2) + f1 * h10 + d1 * (h11 * h) + s1 * (h12 * h2);
    let deriv = (f0 * g00 + f1 * g10) / h + d0 * g01 + d1 * g11 + (s0 * g02 + s1 * g12) * h;
    (value, deriv)
}

/// Cubic Hermite interpolation from values and first derivatives.
pub fn hermite_cubic<T: Real>(t: T, h: T, f0: T, d0: T, f1: T, d1: T) -> (T, T) {
    let l = |v: f64| T::lit(v);
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = l(2.0) * t3 - l(3.0) * t2 + T::one();
    let h10 = t3 - l(2.0) * t2 + t;
    let h01 = -l(2.0) * t3 + l(3.0) * t2;
    let h11 = t3 - t2;
    let g00 = l(6.0) * t2 - l(6.0) * t;
    let g10 = l(3.0) * t2 - l(4.0) * t + T::one();
    let g11 = l(3.0) * t2 - l(2.0) * t;
    let value = f0 * h00 + d0 * h * h10 + f1 * h01 + d1 * h * h11;
    let deriv = (f0 - f1) * g00 / h + d0 * g10 + d1 * g11;
    (value, deriv)
}

fn locate<T: Real>(grid: &Grid1D<T>, x: T) -> (usize, T) {
    let h = grid.spacing();
    let s = (x - grid.x_min()) / h;
    let last = grid.len() - 2;
    let i = if s <= T::zero() {
        0
    } else {
        s.floor().to_usize().unwrap_or(last).min(last)
    };
    (i, (x - grid.x(i)) / h)
}

/// Real function known through values and derivatives on a grid, evaluated
/// anywhere by cubic Hermite interpolation (linear extrapolation of the
/// boundary cubic outside the grid).
#[derive(Debug, Clone)]
pub struct CubicTable<T> {
    grid: Grid1D<T>,
    f: Vec<T>,
    d: Vec<T>,
}

impl<T: Real> CubicTable<T> {
    pub fn new(grid: Grid1D<T>, f: Vec<T>, d: Vec<T>) -> Self {
        assert_eq!(f.len(), grid.len());
        assert_eq!(d.len(), grid.len());
        Self { grid, f, d }
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    /// `(f(x), f'(x))`.
    pub fn eval(&self, x: T) -> (T, T) {
        let (i, t) = locate(&self.grid, x);
        hermite_cubic(
            t,
            self.grid.spacing(),
            self.f[i],
            self.d[i],
            self.f[i + 1],
            self.d[i + 1],
        )
    }
}

/// Complex function known through values and first and second derivatives,
/// evaluated by quintic Hermite interpolation.
#[derive(Debug, Clone)]
pub struct QuinticTable<T> {
    grid: Grid1D<T>,
    f: Vec<Cx<T>>,
    d: Vec<Cx<T>>,
    s: Vec<Cx<T>>,
}

impl<T: Real> QuinticTable<T> {
    pub fn new(grid: Grid1D<T>, f: Vec<Cx<T>>, d: Vec<Cx<T>>, s: Vec<Cx<T>>) -> Self {
        assert!(f.len() == grid.len() && d.len() == grid.len() && s.len() == grid.len());
        Self { grid, f, d, s }
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    /// `(f(x), f'(x))`.
    pub fn eval(&self, x: T) -> (Cx<T>, Cx<T>) {
        let (i, t) = locate(&self.grid, x);
        hermite_quintic(
            t,
            self.grid.spacing(),
            self.f[i],
            self.d[i],
            self.s[i],
            self.f[i + 1],
            self.d[i + 1],
            self.s[i + 1],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;
    use approx::assert_relative_eq;

    #[test]
    fn quintic_hermite_reproduces_quintics() {
        let f = |x: f64| 1.0 + x - 2.0 * x.powi(3) + 0.5 * x.powi(5);
        let d = |x: f64| 1.0 - 6.0 * x * x + 2.5 * x.powi(4);
        let s = |x: f64| -12.0 * x + 10.0 * x.powi(3);
        let (x0, h) = (0.3, 0.7);
        for &t in &[0.0, 0.25, 0.6, 1.0] {
            let (v, dv) = hermite_quintic(
                t,
                h,
                cx(f(x0)),
                cx(d(x0)),
                cx(s(x0)),
                cx(f(x0 + h)),
                cx(d(x0 + h)),
                cx(s(x0 + h)),
            );
            assert_relative_eq!(v.re, f(x0 + t * h), epsilon = 1e-13);
            assert_relative_eq!(dv.re, d(x0 + t * h), epsilon = 1e-12);
        }
    }

    #[test]
    fn tables_track_smooth_functions() {
        let g = Grid1D::<f64>::new(0.0, 3.0, 301).unwrap();
        let xs = g.to_vec();
        let cubic = CubicTable::new(
            g,
            xs.iter().map(|x| x.sin()).collect(),
            xs.iter().map(|x| x.cos()).collect(),
        );
        let quintic = QuinticTable::new(
            g,
            xs.iter().map(|x| cx(x.exp())).collect(),
            xs.iter().map(|x| cx(x.exp())).collect(),
            xs.iter().map(|x| cx(x.exp())).collect(),
        );
        for &x in &[0.0013, 1.234_567, 2.999] {
            let (v, d) = cubic.eval(x);
            assert!((v - x.sin()).abs() < 1e-10 && (d - x.cos()).abs() < 1e-7);
            let (v, d) = quintic.eval(x);
            assert_relative_eq!(v.re, x.exp(), max_relative = 1e-14);
            assert_relative_eq!(d.re, x.exp(), max_relative = 1e-11);
        }
    }
}
