//! Differentiation, quadrature, interpolation, Wronskians and node counting
//! on sampled data.

use num_traits::Zero;

use crate::error::{Result, SusyError};
use crate::numerics::grid::{Grid1D, SampledFunction};
use crate::scalar::{cx, Cx, Real};

/// Fourth-order first derivative of uniformly spaced samples.
///
/// Interior nodes use the centered five-point stencil, the two nodes at each
/// end use one-sided five-point stencils.
pub fn derivative_4th<T: Real>(f: &[Cx<T>], h: T) -> Vec<Cx<T>> {
    let n = f.len();
    assert!(n >= 5, "derivative_4th needs at least 5 samples");
    let l = |v: f64| T::lit(v);
    let inv = T::one() / (l(12.0) * h);
    let mut d = vec![Cx::zero(); n];
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - f[i - 1] * l(8.0) + f[i + 1] * l(8.0) - f[i + 2]) * inv;
    }
    let fwd = |f: &[Cx<T>]| {
        (f[0] * l(-25.0) + f[1] * l(48.0) - f[2] * l(36.0) + f[3] * l(16.0) - f[4] * l(3.0)) * inv
    };
    let fwd1 = |f: &[Cx<T>]| {
        (f[0] * l(-3.0) - f[1] * l(10.0) + f[2] * l(18.0) - f[3] * l(6.0) + f[4]) * inv
    };
    d[0] = fwd(&f[0..5]);
    d[1] = fwd1(&f[0..5]);
    let rev: Vec<Cx<T>> = f[n - 5..].iter().rev().copied().collect();
    d[n - 1] = -fwd(&rev);
    d[n - 2] = -fwd1(&rev);
    d
}

/// Sixth-order centered second derivative. The three nodes at each end are
/// left as `None`.
pub fn second_derivative_6th<T: Real>(f: &[Cx<T>], h: T) -> Vec<Option<Cx<T>>> {
    let n = f.len();
    let l = |v: f64| T::lit(v);
    let inv = T::one() / (l(180.0) * h * h);
    (0..n)
        .map(|i| {
            if i < 3 || i + 3 >= n {
                None
            } else {
                Some(
                    ((f[i - 3] + f[i + 3]) * l(2.0) - (f[i - 2] + f[i + 2]) * l(27.0)
                        + (f[i - 1] + f[i + 1]) * l(270.0)
                        - f[i] * l(490.0))
                        * inv,
                )
            }
        })
        .collect()
}

/// Sixth-order centered first derivative. The three nodes at each end are
/// left as `None`.
pub fn derivative_6th<T: Real>(f: &[Cx<T>], h: T) -> Vec<Option<Cx<T>>> {
    let n = f.len();
    let l = |v: f64| T::lit(v);
    let inv = T::one() / (l(60.0) * h);
    (0..n)
        .map(|i| {
            if i < 3 || i + 3 >= n {
                None
            } else {
                Some(
                    ((f[i + 3] - f[i - 3]) - (f[i + 2] - f[i - 2]) * l(9.0)
                        + (f[i + 1] - f[i - 1]) * l(45.0))
                        * inv,
                )
            }
        })
        .collect()
}

/// Number of nodes excluded at each end by the verification norms.
pub const RESIDUAL_SKIP: usize = 5;

/// Largest modulus over the interior nodes `skip..n-skip`.
pub fn interior_sup<T: Real>(v: &[Cx<T>], skip: usize) -> T {
    let n = v.len();
    if n <= 2 * skip {
        return T::zero();
    }
    v[skip..n - skip]
        .iter()
        .fold(T::zero(), |m, z| m.max(z.norm()))
}

/// Composite Simpson rule on uniformly spaced samples. An even number of
/// samples closes with Simpson's 3/8 rule on the last three intervals.
pub fn simpson<T: Real>(f: &[T], h: T) -> T {
    let n = f.len();
    match n {
        0 | 1 => T::zero(),
        2 => (f[0] + f[1]) * h / T::lit(2.0),
        3 => (f[0] + T::lit(4.0) * f[1] + f[2]) * h / T::lit(3.0),
        _ => {
            let (body, tail) = if n % 2 == 1 {
                (n, None)
            } else {
                (n - 3, Some(n - 4))
            };
            let mut s = f[0] + f[body - 1];
            for (i, &v) in f.iter().enumerate().take(body - 1).skip(1) {
                s += if i % 2 == 1 {
                    T::lit(4.0) * v
                } else {
                    T::lit(2.0) * v
                };
            }
            let mut total = s * h / T::lit(3.0);
            if let Some(k) = tail {
                total += T::lit(3.0) * h / T::lit(8.0)
                    * (f[k] + T::lit(3.0) * (f[k + 1] + f[k + 2]) + f[k + 3]);
            }
            total
        }
    }
}

/// ∫|f|² over the grid by composite Simpson.
pub fn norm_squared<T: Real>(f: &SampledFunction<T>) -> T {
    let sq: Vec<T> = f.values.iter().map(|v| v.norm_sqr()).collect();
    simpson(&sq, f.grid.spacing())
}

/// ⟨f, g⟩ = ∫ conj(f) g by composite Simpson (real and imaginary parts).
pub fn inner_product<T: Real>(f: &SampledFunction<T>, g: &SampledFunction<T>) -> Cx<T> {
    let h = f.grid.spacing();
    let prod: Vec<Cx<T>> = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a.conj() * b)
        .collect();
    let re: Vec<T> = prod.iter().map(|p| p.re).collect();
    let im: Vec<T> = prod.iter().map(|p| p.im).collect();
    Cx::new(simpson(&re, h), simpson(&im, h))
}

/// Rescales to unit L² norm. Returns the original norm.
pub fn normalize<T: Real>(f: &mut SampledFunction<T>) -> T {
    let n = norm_squared(f).sqrt();
    if n > T::zero() && n.is_finite() {
        let inv = cx(T::one() / n);
        for v in f.values.iter_mut().chain(f.derivatives.iter_mut()) {
            *v *= inv;
        }
    }
    n
}

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Eight-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre_8<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T) -> T {
    let mid = (a + b) / T::lit(2.0);
    let half = (b - a) / T::lit(2.0);
    let mut s = T::zero();
    for (&x, &w) in GL8_NODES.iter().zip(&GL8_WEIGHTS) {
        let dx = half * T::lit(x);
        s += T::lit(w) * (f(mid - dx) + f(mid + dx));
    }
    s * half
}

/// Adaptive Gauss-Legendre quadrature: an interval is accepted when the
/// eight-point rule agrees with the sum over its halves to the relative
/// tolerance (or the depth budget is exhausted). Tolerances below
/// `64 ε` are raised to it, since rounding in `f` makes them unreachable.
pub fn gauss_legendre_adaptive<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, rel_tol: T) -> T {
    let whole = gauss_legendre_8(f, a, b);
    gl_refine(
        f,
        a,
        b,
        whole,
        rel_tol.max(T::epsilon() * T::lit(64.0)),
        GL_MAX_DEPTH,
    )
}

const GL_MAX_DEPTH: usize = 12;

fn gl_refine<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, whole: T, rel_tol: T, depth: usize) -> T {
    let m = (a + b) / T::lit(2.0);
    let left = gauss_legendre_8(f, a, m);
    let right = gauss_legendre_8(f, m, b);
    let both = left + right;
    if depth == 0 || (both - whole).abs() <= rel_tol * both.abs() || both == whole {
        both
    } else {
        gl_refine(f, a, m, left, rel_tol, depth - 1) + gl_refine(f, m, b, right, rel_tol, depth - 1)
    }
}

/// `∫_{start}^{x_i} f` at every node of `grid`, with `start` anywhere in or
/// before the grid (e.g. a domain end just outside an offset grid).
pub fn cumulative_integral<T: Real, F: Fn(T) -> T>(
    f: &F,
    start: T,
    grid: &Grid1D<T>,
    rel_tol: T,
) -> Vec<T> {
    let n = grid.len();
    let i0 = if start <= grid.x_min() {
        0
    } else {
        grid.nearest_index(start)
    };
    let mut out = vec![T::zero(); n];
    out[i0] = gauss_legendre_adaptive(f, start, grid.x(i0), rel_tol);
    for i in i0 + 1..n {
        out[i] = out[i - 1] + gauss_legendre_adaptive(f, grid.x(i - 1), grid.x(i), rel_tol);
    }
    for i in (0..i0).rev() {
        out[i] = out[i + 1] - gauss_legendre_adaptive(f, grid.x(i), grid.x(i + 1), rel_tol);
    }
    out
}

/// Adaptive Simpson quadrature, used by test oracles and moment checks.
pub fn adaptive_simpson<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, tol: T) -> T {
    fn rec<T: Real, F: Fn(T) -> T>(
        f: &F,
        a: T,
        b: T,
        fa: T,
        fm: T,
        fb: T,
        whole: T,
        tol: T,
        depth: usize,
    ) -> T {
        let m = (a + b) / T::lit(2.0);
        let lm = (a + m) / T::lit(2.0);
        let rm = (m + b) / T::lit(2.0);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / T::lit(6.0) * (fa + T::lit(4.0) * flm + fm);
        let right = (b - m) / T::lit(6.0) * (fm + T::lit(4.0) * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= T::lit(15.0) * tol {
            left + right + delta / T::lit(15.0)
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / T::lit(2.0), depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / T::lit(2.0), depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let m = (a + b) / T::lit(2.0);
    let fm = f(m);
    let whole = (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Known factorization energies of the two arguments of [`wronskian`].
#[derive(Debug, Clone, Copy)]
pub struct WronskianEnergies<T> {
    pub first: Cx<T>,
    pub second: Cx<T>,
}

/// `W(u1, u2) = u1 u2' - u1' u2`.
///
/// When both energies are provided the derivative is filled from
/// `W' = 2 (ε1 - ε2) u1 u2`, otherwise by fourth-order differences.
pub fn wronskian<T: Real>(
    u1: &SampledFunction<T>,
    u2: &SampledFunction<T>,
    energies: Option<WronskianEnergies<T>>,
) -> Result<SampledFunction<T>> {
    if u1.grid != u2.grid {
        return Err(SusyError::InvalidInput(
            "wronskian arguments live on different grids".into(),
        ));
    }
    let w: Vec<Cx<T>> = (0..u1.len())
        .map(|i| u1.values[i] * u2.derivatives[i] - u1.derivatives[i] * u2.values[i])
        .collect();
    let dw = match energies {
        Some(e) => {
            let k = (e.first - e.second) * T::lit(2.0);
            (0..u1.len())
                .map(|i| k * u1.values[i] * u2.values[i])
                .collect()
        }
        None => derivative_4th(&w, u1.grid.spacing()),
    };
    SampledFunction::new(u1.grid, w, dw)
}

/// Counts strict sign changes of the real part, ignoring nodes closer than
/// `interior_margin` to either end of the grid. Exact zeros are skipped, so a
/// sample equal to zero between values of opposite sign counts once.
pub fn count_nodes<T: Real>(u: &SampledFunction<T>, interior_margin: T) -> usize {
    count_sign_changes(&u.grid, &u.real_values(), interior_margin)
}

pub(crate) fn count_sign_changes<T: Real>(grid: &Grid1D<T>, v: &[T], interior_margin: T) -> usize {
    let lo = grid.x_min() + interior_margin;
    let hi = grid.x_max() - interior_margin;
    let mut count = 0;
    let mut last: Option<bool> = None;
    for (i, &val) in v.iter().enumerate() {
        let x = grid.x(i);
        if x < lo || x > hi || val == T::zero() || !val.is_finite() {
            continue;
        }
        let sign = val > T::zero();
        if let Some(prev) = last {
            if prev != sign {
                count += 1;
            }
        }
        last = Some(sign);
    }
    count
}

/// Default node-counting margin: two grid spacings.
pub fn default_margin<T: Real>(grid: &Grid1D<T>) -> T {
    grid.spacing() * T::lit(2.0)
}

/// First interior location where the real part changes sign, if any.
pub fn first_sign_change<T: Real>(grid: &Grid1D<T>, v: &[T], interior_margin: T) -> Option<T> {
    let lo = grid.x_min() + interior_margin;
    let hi = grid.x_max() - interior_margin;
    let mut last: Option<(T, T)> = None;
    for (i, &val) in v.iter().enumerate() {
        let x = grid.x(i);
        if x < lo || x > hi || !val.is_finite() {
            continue;
        }
        if val == T::zero() {
            return Some(x);
        }
        if let Some((px, pv)) = last {
            if (pv > T::zero()) != (val > T::zero()) {
                return Some(px - pv * (x - px) / (val - pv));
            }
        }
        last = Some((x, val));
    }
    None
}

/// `-(ln u)''` from samples of `u` and `u'`. The logarithmic derivative
/// `u'/u` is formed pointwise and differentiated with fourth-order stencils.
pub fn log_second_derivative<T: Real>(u: &SampledFunction<T>) -> Result<SampledFunction<T>> {
    let margin = default_margin(&u.grid);
    if let Some(x) = first_sign_change(&u.grid, &u.real_values(), margin) {
        return Err(SusyError::SingularTransform {
            what: "u".into(),
            location: x.to_f64_lossy(),
        });
    }
    if let Some(i) = u.values.iter().position(|v| v.is_zero()) {
        return Err(SusyError::SingularTransform {
            what: "u".into(),
            location: u.grid.x(i).to_f64_lossy(),
        });
    }
    let g: Vec<Cx<T>> = u
        .values
        .iter()
        .zip(&u.derivatives)
        .map(|(v, d)| d / v)
        .collect();
    let h = u.grid.spacing();
    let dg = derivative_4th(&g, h);
    let minus: Vec<Cx<T>> = dg.iter().map(|v| -v).collect();
    let dminus = derivative_4th(&minus, h);
    SampledFunction::new(u.grid, minus, dminus)
}
