//! Lamé potentials `V(x) = n(n+1) m sn²(x|m) / 2` of period `2K(m)`.

use crate::error::{Result, SusyError};
use crate::model::{BoundaryTag, DomainKind, PotentialModel, SeedSolution};
use crate::numerics::elliptic::{elliptic_k, jacobi_elliptic};
use crate::numerics::grid::Grid1D;
use crate::scalar::{cx, Real};

/// Cells on each side of the origin for whole-line transformations.
pub const DEFAULT_CELLS: usize = 12;
/// Grid points per period.
pub const DEFAULT_POINTS_PER_CELL: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LameParams<T> {
    pub n: usize,
    pub m: T,
    /// `2K(m)`.
    pub period: T,
}

impl<T: Real> LameParams<T> {
    pub fn new(n: usize, m: T) -> Result<Self> {
        if n == 0 {
            return Err(SusyError::ParameterBounds(
                "the Lamé index n must be at least 1".into(),
            ));
        }
        if !(m > T::zero() && m < T::one()) {
            return Err(SusyError::ParameterBounds(format!(
                "Lamé parameter m = {m} must lie in (0, 1)"
            )));
        }
        Ok(Self {
            n,
            m,
            period: T::lit(2.0) * elliptic_k(m)?,
        })
    }

    /// `K(m)`, half the period.
    pub fn quarter_period(&self) -> T {
        self.period / T::lit(2.0)
    }

    fn strength(&self) -> T {
        let n = T::from_usize_lossy(self.n);
        n * (n + T::one()) * self.m
    }
}

/// `(V(x), V'(x))`.
pub fn lame_potential_with_derivative<T: Real>(p: LameParams<T>, x: T) -> (T, T) {
    let j = jacobi_elliptic(x, p.m).expect("m checked by LameParams");
    let g = p.strength();
    (g * j.sn * j.sn / T::lit(2.0), g * j.sn * j.cn * j.dn)
}

pub fn lame_potential<T: Real>(p: LameParams<T>, x: T) -> T {
    lame_potential_with_derivative(p, x).0
}

/// Grid over `[-left T, right T]` with `points_per_cell` intervals per period.
pub fn multi_cell_grid<T: Real>(
    period: T,
    left: usize,
    right: usize,
    points_per_cell: usize,
) -> Result<Grid1D<T>> {
    if left + right == 0 || points_per_cell < 2 {
        return Err(SusyError::InvalidInput(
            "a multi-cell grid needs at least one cell and two points per cell".into(),
        ));
    }
    let n = (left + right) * points_per_cell + 1;
    Grid1D::new(
        -period * T::from_usize_lossy(left),
        period * T::from_usize_lossy(right),
        n,
    )
}

/// The default grid: [`DEFAULT_CELLS`] periods on each side of the origin.
pub fn lame_grid<T: Real>(p: LameParams<T>) -> Result<Grid1D<T>> {
    multi_cell_grid(
        p.period,
        DEFAULT_CELLS,
        DEFAULT_CELLS,
        DEFAULT_POINTS_PER_CELL,
    )
}

pub fn lame_model<T: Real>(p: LameParams<T>, grid: Grid1D<T>) -> Result<PotentialModel<T>> {
    let label = format!("Lamé(n={}, m={})", p.n, p.m);
    PotentialModel::new(
        label,
        DomainKind::Periodic { period: p.period },
        grid,
        move |x| lame_potential_with_derivative(p, x),
    )
}

/// A closed-form band-edge eigenfunction.
#[derive(Debug, Clone)]
pub struct BandEdgeState<T: Real> {
    pub energy: T,
    pub name: &'static str,
    pub seed: SeedSolution<T>,
}

/// `(m/2, dn)`, `(1/2, cn)` and `((1+m)/2, sn)` for `n = 1`.
pub fn lame1_band_edge_states<T: Real>(
    p: LameParams<T>,
    grid: Grid1D<T>,
) -> Result<Vec<BandEdgeState<T>>> {
    if p.n != 1 {
        return Err(SusyError::ParameterBounds(format!(
            "closed-form band edges are only available for n = 1 (got n = {})",
            p.n
        )));
    }
    let m = p.m;
    let half = T::lit(0.5);
    let bounded = (BoundaryTag::BoundedNonzero, BoundaryTag::BoundedNonzero);
    let jac = move |x: T| jacobi_elliptic(x, m).expect("m checked by LameParams");
    let dn = SeedSolution::from_evaluator(cx(m * half), grid, bounded, "dn", move |x| {
        let j = jac(x);
        (cx(j.dn), cx(-m * j.sn * j.cn))
    });
    let cn = SeedSolution::from_evaluator(cx(half), grid, bounded, "cn", move |x| {
        let j = jac(x);
        (cx(j.cn), cx(-j.sn * j.dn))
    });
    let sn =
        SeedSolution::from_evaluator(cx((T::one() + m) * half), grid, bounded, "sn", move |x| {
            let j = jac(x);
            (cx(j.sn), cx(j.cn * j.dn))
        });
    Ok(vec![
        BandEdgeState {
            energy: m * half,
            name: "dn",
            seed: dn,
        },
        BandEdgeState {
            energy: half,
            name: "cn",
            seed: cn,
        },
        BandEdgeState {
            energy: (T::one() + m) * half,
            name: "sn",
            seed: sn,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::calculus::count_nodes;
    use approx::assert_relative_eq;

    fn p() -> LameParams<f64> {
        LameParams::new(1, 0.5).unwrap()
    }

    #[test]
    fn values() {
        let p = p();
        assert_eq!(lame_potential(p, 0.0), 0.0);
        assert_relative_eq!(lame_potential(p, p.quarter_period()), 0.5, epsilon = 1e-12);
        for x in [0.1, 0.9, 2.3, -1.7] {
            assert_relative_eq!(
                lame_potential(p, x + p.period),
                lame_potential(p, x),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LameParams::new(0, 0.5).is_err());
        assert!(LameParams::new(1, 1.0).is_err());
        assert!(LameParams::new(1, 0.0).is_err());
    }

    #[test]
    fn band_edge_states() {
        let p = p();
        // one period, shifted so that no node sits at an end
        let cell = Grid1D::new(-p.period / 4.0, 0.75 * p.period, 801).unwrap();
        let model = lame_model(p, cell).unwrap();
        let states = lame1_band_edge_states(p, cell).unwrap();
        let energies: Vec<f64> = states.iter().map(|s| s.energy).collect();
        assert_eq!(energies, vec![0.25, 0.5, 0.75]);
        for (s, nodes) in states.iter().zip([0, 1, 1]) {
            assert!(
                s.seed.residual(&model) <= 1e-8,
                "{}: {:e}",
                s.name,
                s.seed.residual(&model)
            );
            assert_eq!(count_nodes(&s.seed.u, 1e-3), nodes, "{}", s.name);
        }
        assert!(lame1_band_edge_states(LameParams::new(2, 0.5).unwrap(), cell).is_err());
    }
}
