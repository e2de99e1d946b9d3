//! Complete elliptic integral of the first kind and Jacobi elliptic
//! functions for real argument and parameter `m ∈ [0, 1)`.

use crate::error::{Result, SusyError};
use crate::scalar::Real;

/// Number of descending Landen levels used by [`jacobi_elliptic`].
pub const LANDEN_LEVELS: usize = 12;

fn check_parameter<T: Real>(m: T) -> Result<()> {
    if m < T::zero() || m >= T::one() || m.is_nan() {
        return Err(SusyError::ParameterBounds(format!(
            "elliptic parameter m = {m} must lie in [0, 1)"
        )));
    }
    Ok(())
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm<T: Real>(mut a: T, mut b: T) -> T {
    for _ in 0..64 {
        if (a - b).abs() <= T::epsilon() * a {
            break;
        }
        let next = (a + b) / T::lit(2.0);
        b = (a * b).sqrt();
        a = next;
    }
    a
}

/// `K(m) = ∫_0^{π/2} dθ / sqrt(1 - m sin²θ) = π / (2 AGM(1, sqrt(1-m)))`.
pub fn elliptic_k<T: Real>(m: T) -> Result<T> {
    check_parameter(m)?;
    if m == T::zero() {
        return Ok(T::FRAC_PI_2());
    }
    Ok(T::PI() / (T::lit(2.0) * agm(T::one(), (T::one() - m).sqrt())))
}

/// Values of the three Jacobi elliptic functions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobi<T> {
    pub sn: T,
    pub cn: T,
    pub dn: T,
}

/// `(sn, cn, dn)(x | m)` by the descending Landen (AGM) scheme.
pub fn jacobi_elliptic<T: Real>(x: T, m: T) -> Result<Jacobi<T>> {
    check_parameter(m)?;
    if m == T::zero() {
        return Ok(Jacobi {
            sn: x.sin(),
            cn: x.cos(),
            dn: T::one(),
        });
    }
    let mut a = [T::zero(); LANDEN_LEVELS + 1];
    let mut c = [T::zero(); LANDEN_LEVELS + 1];
    a[0] = T::one();
    let mut b = (T::one() - m).sqrt();
    c[0] = m.sqrt();
    let mut levels = 0;
    for n in 1..=LANDEN_LEVELS {
        a[n] = (a[n - 1] + b) / T::lit(2.0);
        c[n] = (a[n - 1] - b) / T::lit(2.0);
        b = (a[n - 1] * b).sqrt();
        levels = n;
        if c[n].abs() <= T::epsilon() * a[n] {
            break;
        }
    }
    let mut phi = T::from_usize_lossy(1usize << levels) * a[levels] * x;
    for n in (1..=levels).rev() {
        phi = (phi + (c[n] / a[n] * phi.sin()).asin()) / T::lit(2.0);
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (T::one() - m * sn * sn).sqrt();
    Ok(Jacobi { sn, cn, dn })
}
