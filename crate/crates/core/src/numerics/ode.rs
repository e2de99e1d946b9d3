//! Fixed-step fourth-order Runge-Kutta integration of the stationary
//! Schrödinger equation `-u''/2 + V u = ε u`.

use crate::error::{Result, SusyError};
use crate::numerics::grid::{Grid1D, SampledFunction};
use crate::numerics::interp::CubicTable;
use crate::scalar::{Cx, Real};

/// Default magnitude cap beyond which a solution is reported as overflowing.
pub const DEFAULT_OVERFLOW_CAP: f64 = 1e150;

/// Integrated solution plus the overflow sentinel.
#[derive(Debug, Clone)]
pub struct Integration<T> {
    pub u: SampledFunction<T>,
    /// Node index at which `|u|` first exceeded the cap. Samples beyond it
    /// (away from the start node) are set to infinity.
    pub overflow_at: Option<usize>,
}

impl<T: Real> Integration<T> {
    pub fn overflowed(&self) -> bool {
        self.overflow_at.is_some()
    }
}

/// One RK4 step for `(u, u')` with potential values at `x`, `x + h/2` and
/// `x + h`.
#[inline]
pub fn rk4_step<T: Real>(
    u: Cx<T>,
    du: Cx<T>,
    h: T,
    eps: Cx<T>,
    v0: T,
    vm: T,
    v1: T,
) -> (Cx<T>, Cx<T>) {
    let two = T::lit(2.0);
    let f = |v: T, y: Cx<T>| (Cx::new(v, T::zero()) - eps) * y * two;
    let half = h / two;
    let k1u = du;
    let k1p = f(v0, u);
    let k2u = du + k1p * half;
    let k2p = f(vm, u + k1u * half);
    let k3u = du + k2p * half;
    let k3p = f(vm, u + k2u * half);
    let k4u = du + k3p * h;
    let k4p = f(v1, u + k3u * h);
    let sixth = h / T::lit(6.0);
    (
        u + (k1u + k2u * two + k3u * two + k4u) * sixth,
        du + (k1p + k2p * two + k3p * two + k4p) * sixth,
    )
}

/// Integrates with a potential given as a closure `x -> V(x)`, from node `i0`
/// of `grid` towards both ends.
pub fn integrate_with<T: Real, F: Fn(T) -> T>(
    v: F,
    epsilon: Cx<T>,
    grid: &Grid1D<T>,
    i0: usize,
    u0: Cx<T>,
    du0: Cx<T>,
    cap: T,
) -> Integration<T> {
    let n = grid.len();
    let mut values = vec![Cx::new(T::zero(), T::zero()); n];
    let mut derivs = values.clone();
    values[i0] = u0;
    derivs[i0] = du0;
    let inf = Cx::new(T::infinity(), T::zero());
    let mut overflow_at: Option<usize> = None;
    for dir in [1isize, -1] {
        let (mut u, mut du) = (u0, du0);
        let mut i = i0 as isize;
        let mut blown = false;
        loop {
            let j = i + dir;
            if j < 0 || j >= n as isize {
                break;
            }
            let (ju, iu) = (j as usize, i as usize);
            if blown {
                values[ju] = inf;
                derivs[ju] = inf;
            } else {
                let x = grid.x(iu);
                let x1 = grid.x(ju);
                let h = x1 - x;
                let (nu, ndu) = rk4_step(u, du, h, epsilon, v(x), v(x + h / T::lit(2.0)), v(x1));
                u = nu;
                du = ndu;
                if !(u.norm() <= cap) {
                    blown = true;
                    overflow_at = match overflow_at {
                        Some(k) if k.abs_diff(i0) <= ju.abs_diff(i0) => Some(k),
                        _ => Some(ju),
                    };
                    values[ju] = inf;
                    derivs[ju] = inf;
                } else {
                    values[ju] = u;
                    derivs[ju] = du;
                }
            }
            i = j;
        }
    }
    Integration {
        u: SampledFunction {
            grid: *grid,
            values,
            derivatives: derivs,
        },
        overflow_at,
    }
}

/// Integrates `-u''/2 + V u = ε u` on `grid` from the node `x0` with
/// `u(x0) = u0`, `u'(x0) = du0`, in both directions.
///
/// `v` supplies real potential samples with derivatives. The potential at the
/// half steps is obtained by cubic Hermite interpolation of those samples.
pub fn integrate_schrodinger<T: Real>(
    v: &SampledFunction<T>,
    epsilon: Cx<T>,
    x0: T,
    u0: Cx<T>,
    du0: Cx<T>,
    grid: &Grid1D<T>,
) -> Result<Integration<T>> {
    if v.max_imag() > T::zero() {
        return Err(SusyError::InvalidInput(
            "the potential must be real-valued".into(),
        ));
    }
    let i0 = grid
        .index_of(x0)
        .ok_or_else(|| SusyError::InvalidInput(format!("x0 = {x0} is not a grid node")))?;
    let table = CubicTable::new(v.grid, v.real_values(), v.real_derivatives());
    Ok(integrate_with(
        |x| table.eval(x).0,
        epsilon,
        grid,
        i0,
        u0,
        du0,
        T::lit(DEFAULT_OVERFLOW_CAP),
    ))
}
