//! Bound-state energies of `-u''/2 + V u = E u` by shooting.
//!
//! The lower eigenvalues are bracketed by Sturm node counting of the solution
//! started at the left end, then refined on the Wronskian of the left and
//! right solutions matched at the midpoint. Ends where the potential behaves
//! like `g / (2 t²)` (with `t` the distance to the end) are started slightly
//! inside the domain from the leading Frobenius terms.

use crate::error::{Result, SusyError};
use crate::scalar::Real;

/// Boundary condition used at one end of the shooting interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShootingEnd<T> {
    /// A finite end at `position`, possibly singular. Integration starts at
    /// distance `inset` from it with Frobenius data fitted to the potential.
    Singular { position: T, inset: T },
    /// `u = 0`, `u' = ±1` at `position` (box truncation of an infinite domain).
    Dirichlet { position: T },
}

impl<T: Real> ShootingEnd<T> {
    fn start(&self, inward: T) -> T {
        match *self {
            ShootingEnd::Singular { position, inset } => position + inward * inset,
            ShootingEnd::Dirichlet { position } => position,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ShootingOptions {
    pub steps: usize,
    /// Relative tolerance on each eigenvalue.
    pub tolerance: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            steps: 8000,
            tolerance: 1e-13,
        }
    }
}

/// Shooting problem with the potential tabulated at all RK4 stages.
pub struct Shooter<T> {
    left: ShootingEnd<T>,
    right: ShootingEnd<T>,
    a: T,
    h: T,
    steps: usize,
    /// `V(a + k h / 2)`, `k = 0..=2 steps`.
    table: Vec<T>,
    left_fit: Option<(T, T, T)>,
    right_fit: Option<(T, T, T)>,
    tolerance: T,
}

/// Fits `V ≈ g / (2 t²) + c + k t²` through the values at `t = d, 2d, 3d`.
fn frobenius_fit<T: Real>(v: [T; 3], d: T) -> (T, T, T) {
    let x = [d * d, T::lit(4.0) * d * d, T::lit(9.0) * d * d];
    let y = [
        T::lit(2.0) * x[0] * v[0],
        T::lit(2.0) * x[1] * v[1],
        T::lit(2.0) * x[2] * v[2],
    ];
    // divided differences of y(x) = g + C x + K x²
    let d01 = (y[1] - y[0]) / (x[1] - x[0]);
    let d12 = (y[2] - y[1]) / (x[2] - x[1]);
    let kk = (d12 - d01) / (x[2] - x[0]);
    let cc = d01 - kk * (x[0] + x[1]);
    let g = y[0] - cc * x[0] - kk * x[0] * x[0];
    (g, cc / T::lit(2.0), kk / T::lit(2.0))
}

impl<T: Real> Shooter<T> {
    pub fn new<F: Fn(T) -> T>(
        v: F,
        left: ShootingEnd<T>,
        right: ShootingEnd<T>,
        opts: ShootingOptions,
    ) -> Result<Self> {
        let steps = opts.steps.max(16) & !1;
        let a = left.start(T::one());
        let b = right.start(-T::one());
        if !(a < b) {
            return Err(SusyError::InvalidInput("shooting interval is empty".into()));
        }
        let h = (b - a) / T::from_usize_lossy(steps);
        let half = h / T::lit(2.0);
        let table: Vec<T> = (0..=2 * steps)
            .map(|k| v(a + half * T::from_usize_lossy(k)))
            .collect();
        if let Some(k) = table.iter().position(|x| !x.is_finite()) {
            return Err(SusyError::InvalidInput(format!(
                "potential not finite at x = {}",
                a + half * T::from_usize_lossy(k)
            )));
        }
        let fit = |end: &ShootingEnd<T>, inward: T| match *end {
            ShootingEnd::Singular { position, inset } => {
                let at = |j: f64| v(position + inward * inset * T::lit(j));
                Some(frobenius_fit([at(1.0), at(2.0), at(3.0)], inset))
            }
            ShootingEnd::Dirichlet { .. } => None,
        };
        let left_fit = fit(&left, T::one());
        let right_fit = fit(&right, -T::one());
        Ok(Self {
            left,
            right,
            a,
            h,
            steps,
            table,
            left_fit,
            right_fit,
            tolerance: T::lit(opts.tolerance),
        })
    }

    /// Initial `(u, u')` at the integration start of one end, with `u'` taken
    /// along increasing `x`.
    fn initial(&self, e: T, fit: Option<(T, T, T)>, end: &ShootingEnd<T>, inward: T) -> (T, T) {
        match (fit, end) {
            (Some((g, c, k)), ShootingEnd::Singular { inset, .. }) => {
                // u = t^s (1 + a t² + b t⁴)
                let g = g.max(T::zero());
                let s = (T::one() + (T::one() + T::lit(4.0) * g).sqrt()) / T::lit(2.0);
                let a = (c - e) / (T::lit(2.0) * s + T::one());
                let b = ((c - e) * a + k) / (T::lit(4.0) * s + T::lit(6.0));
                let t = *inset;
                let t2 = t * t;
                let u = T::one() + a * t2 + b * t2 * t2;
                let logd = s / t + (T::lit(2.0) * a * t + T::lit(4.0) * b * t2 * t) / u;
                (T::one(), inward * logd)
            }
            _ => (T::zero(), inward),
        }
    }

    /// Integrates from the left end to step `stop`. Returns `(u, u', nodes)`.
    fn run_left(&self, e: T, stop: usize) -> (T, T, usize) {
        let (mut u, mut du) = self.initial(e, self.left_fit, &self.left, T::one());
        let mut nodes = 0;
        for k in 0..stop {
            let (nu, ndu) = self.step(u, du, e, 2 * k, self.h);
            if (nu > T::zero()) != (u > T::zero()) && nu != T::zero() && u != T::zero() {
                nodes += 1;
            }
            let scale = nu.abs().max(ndu.abs() * self.h);
            if scale > T::lit(1e100) {
                u = nu / scale;
                du = ndu / scale;
            } else {
                u = nu;
                du = ndu;
            }
        }
        (u, du, nodes)
    }

    fn run_right(&self, e: T, stop: usize) -> (T, T, usize) {
        let (mut u, mut du) = self.initial(e, self.right_fit, &self.right, -T::one());
        let mut nodes = 0;
        for k in (stop..self.steps).rev() {
            let (nu, ndu) = self.step(u, du, e, 2 * k + 2, -self.h);
            if (nu > T::zero()) != (u > T::zero()) && nu != T::zero() && u != T::zero() {
                nodes += 1;
            }
            let scale = nu.abs().max(ndu.abs() * self.h);
            if scale > T::lit(1e100) {
                u = nu / scale;
                du = ndu / scale;
            } else {
                u = nu;
                du = ndu;
            }
        }
        (u, du, nodes)
    }

    /// RK4 step from table index `k` (in half steps) with signed step `h`.
    #[inline]
    fn step(&self, u: T, du: T, e: T, k: usize, h: T) -> (T, T) {
        let two = T::lit(2.0);
        let (v0, vm, v1) = if h > T::zero() {
            (self.table[k], self.table[k + 1], self.table[k + 2])
        } else {
            (self.table[k], self.table[k - 1], self.table[k - 2])
        };
        let half = h / two;
        let k1u = du;
        let k1p = two * (v0 - e) * u;
        let k2u = du + half * k1p;
        let k2p = two * (vm - e) * (u + half * k1u);
        let k3u = du + half * k2p;
        let k3p = two * (vm - e) * (u + half * k2u);
        let k4u = du + h * k3p;
        let k4p = two * (v1 - e) * (u + h * k3u);
        let sixth = h / T::lit(6.0);
        (
            u + sixth * (k1u + two * k2u + two * k3u + k4u),
            du + sixth * (k1p + two * k2p + two * k3p + k4p),
        )
    }

    /// Number of eigenvalues below `e`, from the nodes of the left and right
    /// solutions up to the midpoint and their Prüfer phases there. Counting the
    /// left solution across the whole interval overcounts once the irregular
    /// solution takes over near a singular right end.
    pub fn count_below(&self, e: T) -> usize {
        let mid = self.steps / 2;
        let (ul, dl, nl) = self.run_left(e, mid);
        let (ur, dr, nr) = self.run_right(e, mid);
        let phase = |u: T, du: T, n: usize| {
            let sign = if n.is_multiple_of(2) {
                T::one()
            } else {
                -T::one()
            };
            (u * sign).atan2(du * sign * self.h)
        };
        nl + nr + usize::from(phase(ul, dl, nl) >= phase(ur, dr, nr))
    }

    /// Wronskian of the left and right solutions at the midpoint, normalized.
    pub fn mismatch(&self, e: T) -> T {
        let mid = self.steps / 2;
        let (ul, dl, _) = self.run_left(e, mid);
        let (ur, dr, _) = self.run_right(e, mid);
        let w = ul * dr - dl * ur;
        w / ((ul * ul + dl * dl * self.h * self.h).sqrt()
            * (ur * ur + dr * dr * self.h * self.h).sqrt())
    }

    pub fn potential_min(&self) -> T {
        self.table.iter().fold(T::infinity(), |m, &v| m.min(v))
    }

    pub fn interval(&self) -> (T, T) {
        (self.a, self.a + self.h * T::from_usize_lossy(self.steps))
    }

    /// The `count` lowest eigenvalues.
    pub fn lowest(&self, count: usize) -> Result<Vec<T>> {
        let mut lo = self.potential_min();
        if self.count_below(lo) != 0 {
            lo = lo - (T::one() + lo.abs());
        }
        let mut hi = lo.abs().max(T::one()) * T::lit(2.0) + lo;
        let mut guard = 0;
        while self.count_below(hi) < count {
            hi = hi + (hi - lo);
            guard += 1;
            if guard > 60 {
                return Err(SusyError::NoConvergence(format!(
                    "could not bracket {count} eigenvalues"
                )));
            }
        }
        (0..count).map(|n| self.isolate(n, lo, hi)).collect()
    }

    /// Eigenvalues inside `[e_min, e_max]`.
    pub fn in_range(&self, e_min: T, e_max: T) -> Result<Vec<T>> {
        let first = self.count_below(e_min);
        let last = self.count_below(e_max);
        (first..last)
            .map(|n| self.isolate(n, e_min, e_max))
            .collect()
    }

    /// The `n`-th eigenvalue, known to lie in `[lo, hi]`.
    fn isolate(&self, n: usize, mut lo: T, mut hi: T) -> Result<T> {
        // bracket: count_below(lo) <= n < count_below(hi)
        let scale = T::one() + lo.abs().max(hi.abs());
        let coarse = T::lit(1e-7) * scale;
        while hi - lo > coarse {
            let mid = (lo + hi) / T::lit(2.0);
            if self.count_below(mid) > n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // widen slightly so that the matched problem's root is inside
        let width = (hi - lo).max(coarse);
        let (mut a, mut b) = (lo - width * T::lit(10.0), hi + width * T::lit(10.0));
        let (mut fa, fb) = (self.mismatch(a), self.mismatch(b));
        if fa == T::zero() {
            return Ok(a);
        }
        if fb == T::zero() {
            return Ok(b);
        }
        if (fa > T::zero()) == (fb > T::zero()) {
            return Ok((lo + hi) / T::lit(2.0));
        }
        let tol = self.tolerance * scale;
        for _ in 0..200 {
            if b - a <= tol {
                break;
            }
            let mid = (a + b) / T::lit(2.0);
            let fm = self.mismatch(mid);
            if fm == T::zero() {
                return Ok(mid);
            }
            if (fm > T::zero()) == (fa > T::zero()) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        Ok((a + b) / T::lit(2.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn oscillator_levels() {
        let s = Shooter::new(
            |x: f64| x * x / 2.0,
            ShootingEnd::Dirichlet { position: -8.0 },
            ShootingEnd::Dirichlet { position: 8.0 },
            ShootingOptions::default(),
        )
        .unwrap();
        let e = s.lowest(4).unwrap();
        for (n, &en) in e.iter().enumerate() {
            assert_relative_eq!(en, n as f64 + 0.5, max_relative = 1e-9);
        }
    }

    #[test]
    fn infinite_well_levels() {
        let pi = std::f64::consts::PI;
        let s = Shooter::new(
            |_: f64| 0.0,
            ShootingEnd::Dirichlet { position: 0.0 },
            ShootingEnd::Dirichlet { position: pi },
            ShootingOptions::default(),
        )
        .unwrap();
        let e = s.in_range(0.1, 9.0).unwrap();
        assert_eq!(e.len(), 4);
        for (k, &en) in e.iter().enumerate() {
            let n = (k + 1) as f64;
            assert_relative_eq!(en, n * n / 2.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn singular_ends_with_frobenius_start() {
        // V = l(l+1)/(2 sin² x) on (0, π): E_n = (n + l + 1)² / 2
        let l = 2.0_f64;
        let pi = std::f64::consts::PI;
        let s = Shooter::new(
            |x: f64| l * (l + 1.0) / (2.0 * x.sin().powi(2)),
            ShootingEnd::Singular {
                position: 0.0,
                inset: 0.02,
            },
            ShootingEnd::Singular {
                position: pi,
                inset: 0.02,
            },
            ShootingOptions::default(),
        )
        .unwrap();
        let e = s.lowest(3).unwrap();
        for (n, &en) in e.iter().enumerate() {
            let exact = (n as f64 + l + 1.0).powi(2) / 2.0;
            assert_relative_eq!(en, exact, max_relative = 1e-8);
        }
    }
}
