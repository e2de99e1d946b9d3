//! First- and second-order supersymmetric (Darboux) transformations.
//!
//! A transformation is described by a [`Stage`]: the input potential, the
//! superpotential `η` (for first order `α = u'/u`) evaluated pointwise from the
//! seed evaluators, and the factorization energies. The partner potential is
//! `V_new = V_in - η'`, again available pointwise, so a partner can be shot,
//! integrated or transformed once more. Composite transformations keep the
//! list of their stages and map eigenfunctions through each in turn.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SusyError};
use crate::model::{DomainKind, PotentialFn, PotentialModel, SeedSolution};
use crate::numerics::calculus::{default_margin, first_sign_change, normalize};
use crate::numerics::grid::SampledFunction;
use crate::scalar::{cx, Cx, Real};

mod first;
mod second;
mod verify;

pub use first::{
    classify_first_order_case, first_order_partner, map_eigenfunction_first, FirstOrderCase,
};
pub use second::{
    left_regular_seed, map_eigenfunction_second, move_level, second_order_complex,
    second_order_confluent, second_order_real, SecondOrderCase, SecondOrderParams,
};
pub use verify::{factorization_residual, verify_intertwining, verify_susy_algebra, TestFunction};

/// `η`, `η'`, `η''` at one point, plus the size of the imaginary part of `η'`
/// dropped when the superpotential is formed in complex arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaJet<T> {
    pub eta: T,
    pub d1: T,
    pub d2: T,
    pub imag: T,
}

pub type EtaFn<T> = Arc<dyn Fn(T) -> EtaJet<T> + Send + Sync>;

/// One intertwining step `H_out L = L H_in`.
#[derive(Clone)]
pub struct Stage<T> {
    pub order: usize,
    /// `(ε, ε)` for first order, `(ε₁, ε₂)` for second order.
    pub epsilons: (Cx<T>, Cx<T>),
    v_in: PotentialFn<T>,
    eta: EtaFn<T>,
}

impl<T: Real> fmt::Debug for Stage<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Stage")
            .field("order", &self.order)
            .field("epsilons", &self.epsilons)
            .finish()
    }
}

impl<T: Real> Stage<T> {
    pub(crate) fn new(
        order: usize,
        epsilons: (Cx<T>, Cx<T>),
        v_in: PotentialFn<T>,
        eta: EtaFn<T>,
    ) -> Self {
        Self {
            order,
            epsilons,
            v_in,
            eta,
        }
    }

    #[inline]
    pub fn eta(&self, x: T) -> EtaJet<T> {
        (self.eta)(x)
    }

    #[inline]
    pub fn v_in(&self, x: T) -> (T, T) {
        (self.v_in)(x)
    }

    /// `(V_out, V_out')`.
    #[inline]
    pub fn v_out(&self, x: T) -> (T, T) {
        let (v, dv) = self.v_in(x);
        let e = self.eta(x);
        (v - e.d1, dv - e.d2)
    }

    /// Ansatz constant `d = ε₁ + ε₂` of the second-order operator.
    pub fn d(&self) -> T {
        (self.epsilons.0 + self.epsilons.1).re
    }

    /// `(Lψ, (Lψ)')` for a solution of `H_in ψ = E ψ` given by `(ψ, ψ')` at
    /// `x`, with `L = (-d/dx + α)/√2` or `L = (d²/dx² - η d/dx + γ)/2`.
    pub fn apply(&self, x: T, energy: Cx<T>, psi: Cx<T>, dpsi: Cx<T>) -> (Cx<T>, Cx<T>) {
        let two = T::lit(2.0);
        let (v, dv) = self.v_in(x);
        let e = self.eta(x);
        let shifted = (cx(v) - energy) * two;
        let d2 = shifted * psi;
        match self.order {
            1 => {
                let r = T::one() / two.sqrt();
                let f = (-dpsi + psi * e.eta) * r;
                let df = (-d2 + psi * e.d1 + dpsi * e.eta) * r;
                (f, df)
            }
            _ => {
                let d3 = psi * (dv * two) + shifted * dpsi;
                let gamma = e.d1 / two + e.eta * e.eta / two - two * v + self.d();
                let dgamma = e.d2 / two + e.eta * e.d1 - two * dv;
                let f = (d2 - dpsi * e.eta + psi * gamma) / two;
                let df = (d3 - dpsi * e.d1 - d2 * e.eta + psi * dgamma + dpsi * gamma) / two;
                (f, df)
            }
        }
    }

    /// `√|E - ε|` or `√|(E - ε₁)(E - ε₂)|`, the norm ratio `‖Lψ‖/‖ψ‖`.
    pub fn norm_factor(&self, energy: T) -> Result<T> {
        let e = cx(energy);
        let p = match self.order {
            1 => (e - self.epsilons.0).norm(),
            _ => ((e - self.epsilons.0) * (e - self.epsilons.1)).norm(),
        };
        let tol = T::lit(1e-12) * (T::one() + energy.abs());
        if p <= tol {
            return Err(SusyError::CoincidentEnergy(energy.to_f64_lossy()));
        }
        Ok(p.sqrt())
    }
}

/// Effect of a transformation on the discrete spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralChange<T> {
    DeleteGround,
    CreateLevel(T),
    Isospectral,
    DeleteTwo(T, T),
    CreateTwo(T, T),
    DeleteOne(T),
    MoveLevel { from: T, to: T },
}

impl<T: Real> fmt::Display for SpectralChange<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralChange::DeleteGround => write!(f, "delete-ground"),
            SpectralChange::CreateLevel(e) => write!(f, "create-level({e})"),
            SpectralChange::Isospectral => write!(f, "isospectral"),
            SpectralChange::DeleteTwo(a, b) => write!(f, "delete-two({a}, {b})"),
            SpectralChange::CreateTwo(a, b) => write!(f, "create-two({a}, {b})"),
            SpectralChange::DeleteOne(e) => write!(f, "delete-one({e})"),
            SpectralChange::MoveLevel { from, to } => write!(f, "move-level({from} -> {to})"),
        }
    }
}

/// Which construction produced a partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformCase {
    First(FirstOrderCase),
    Second(SecondOrderCase),
    /// Several stages applied in sequence.
    Composite,
}

/// A state of the partner that has no preimage under the intertwiner.
#[derive(Debug, Clone)]
pub struct NewState<T> {
    pub energy: Cx<T>,
    /// Normalized to unit norm when `normalizable`.
    pub state: SampledFunction<T>,
    pub normalizable: bool,
}

/// Result of a SUSY transformation.
#[derive(Clone)]
pub struct PartnerResult<T> {
    pub potential: PotentialModel<T>,
    pub order: usize,
    pub case: TransformCase,
    pub spectral_change: SpectralChange<T>,
    pub new_states: Vec<NewState<T>>,
    /// `α` or `η` samples; derivatives hold `α'` or `η'`.
    pub superpotential: SampledFunction<T>,
    /// Largest `|Im V_new|` over the grid before the real part was taken.
    pub imag_residue: T,
    pub warnings: Vec<String>,
    pub stages: Vec<Stage<T>>,
}

impl<T: Real> fmt::Debug for PartnerResult<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartnerResult")
            .field("potential", &self.potential)
            .field("order", &self.order)
            .field("case", &self.case)
            .field("spectral_change", &self.spectral_change)
            .field("new_states", &self.new_states.len())
            .field("imag_residue", &self.imag_residue)
            .field("warnings", &self.warnings)
            .finish()
    }
}

impl<T: Real> PartnerResult<T> {
    pub fn v_new(&self) -> &SampledFunction<T> {
        &self.potential.v
    }

    /// Maps an eigenfunction of the original Hamiltonian (samples of `ψ` and
    /// `ψ'`) through every stage and normalizes the result.
    pub fn map_eigenfunction(
        &self,
        psi: &SampledFunction<T>,
        energy: T,
    ) -> Result<SampledFunction<T>> {
        let mut cur = psi.clone();
        for stage in &self.stages {
            let k = stage.norm_factor(energy)?;
            let (values, derivs) = cur
                .grid
                .nodes()
                .enumerate()
                .map(|(i, x)| {
                    let (f, df) = stage.apply(x, cx(energy), cur.values[i], cur.derivatives[i]);
                    (f / k, df / k)
                })
                .unzip();
            cur = SampledFunction::new(cur.grid, values, derivs)?;
        }
        normalize(&mut cur);
        Ok(cur)
    }

    /// Pointwise map of a solution `x -> (ψ, ψ')` of the original equation at
    /// `energy`, unnormalized.
    pub fn map_solution<F>(
        &self,
        energy: Cx<T>,
        psi: F,
    ) -> impl Fn(T) -> (Cx<T>, Cx<T>) + Send + Sync
    where
        F: Fn(T) -> (Cx<T>, Cx<T>) + Send + Sync,
    {
        let stages = self.stages.clone();
        move |x| {
            let (mut f, mut df) = psi(x);
            for s in &stages {
                (f, df) = s.apply(x, energy, f, df);
            }
            (f, df)
        }
    }
}

/// Partner model, superpotential samples and imaginary residue of a stage
/// applied to `v0`.
pub(crate) fn assemble<T: Real>(
    v0: &PotentialModel<T>,
    stage: &Stage<T>,
    label: String,
) -> Result<(PotentialModel<T>, SampledFunction<T>, T)> {
    let grid = *v0.grid();
    let eta = SampledFunction::from_fn(grid, |x| {
        let e = stage.eta(x);
        (cx(e.eta), cx(e.d1))
    });
    let imag = grid
        .nodes()
        .map(|x| stage.eta(x).imag)
        .fold(T::zero(), T::max);
    if let Some(i) = eta
        .values
        .iter()
        .chain(&eta.derivatives)
        .position(|v| !v.re.is_finite())
    {
        let x = grid.x(i % grid.len());
        return Err(SusyError::SingularTransform {
            what: "superpotential".into(),
            location: x.to_f64_lossy(),
        });
    }
    let s = stage.clone();
    let model = PotentialModel::from_arc(label, v0.domain, grid, Arc::new(move |x| s.v_out(x)))?;
    Ok((model, eta, imag))
}

/// Fails with `SingularTransform` if `values` change sign inside the grid.
pub(crate) fn require_nodeless<T: Real>(
    grid: &crate::numerics::grid::Grid1D<T>,
    values: &[T],
    what: &str,
) -> Result<()> {
    match first_sign_change(grid, values, default_margin(grid)) {
        Some(x) => Err(SusyError::SingularTransform {
            what: what.into(),
            location: x.to_f64_lossy(),
        }),
        None => Ok(()),
    }
}

/// Whether sampled `f` is square integrable over the domain.
///
/// On a finite interval the local power `|f| ~ t^p` at each end (with `t` the
/// distance to it) is fitted from two nodes next to the end; `p > -1/2` is
/// required. On unbounded domains the envelope of `|f|` must decay: its
/// log-slope between the two outermost windows (at least one period or a
/// tenth of the grid wide) has to be below `-1e-3`.
pub fn square_integrable<T: Real>(domain: &DomainKind<T>, f: &SampledFunction<T>) -> bool {
    let g = f.grid;
    let n = g.len();
    let mag = |i: usize| f.values[i].norm();
    if f.values
        .iter()
        .any(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return false;
    }
    match *domain {
        DomainKind::FiniteInterval { left, right } => {
            let power = |i1: usize, i2: usize, t1: T, t2: T| -> T {
                let (a, b) = (mag(i1), mag(i2));
                if a == T::zero() {
                    return T::infinity();
                }
                (a / b).ln() / (t1 / t2).ln()
            };
            let k = 8.min(n - 1);
            let pl = power(0, k, g.x(0) - left, g.x(k) - left);
            let pr = power(n - 1, n - 1 - k, right - g.x(n - 1), right - g.x(n - 1 - k));
            let half = T::lit(-0.5);
            pl > half && pr > half
        }
        DomainKind::WholeLine | DomainKind::Periodic { .. } => {
            let span = g.x_max() - g.x_min();
            let mut width = span / T::lit(10.0);
            if let Some(p) = domain_period(domain) {
                width = width.max(p);
            }
            let m = ((width / g.spacing()).to_f64_lossy() as usize).clamp(1, n / 4);
            let sup = |a: usize, b: usize| (a..b).map(mag).fold(T::zero(), T::max);
            let dist = g.spacing() * T::from_usize_lossy(m);
            let slope = |outer: T, inner: T| {
                (outer.max(T::min_positive_value()) / inner.max(T::min_positive_value())).ln()
                    / dist
            };
            let left = slope(sup(0, m), sup(m, 2 * m));
            let right = slope(sup(n - m, n), sup(n - 2 * m, n - m));
            let thr = T::lit(-1e-3);
            left < thr && right < thr
        }
    }
}

fn domain_period<T: Real>(domain: &DomainKind<T>) -> Option<T> {
    match *domain {
        DomainKind::Periodic { period } => Some(period),
        _ => None,
    }
}

/// Samples a new state from its evaluator and normalizes it when square
/// integrable.
pub(crate) fn new_state<T: Real, F>(
    model: &PotentialModel<T>,
    energy: Cx<T>,
    eval: F,
) -> NewState<T>
where
    F: Fn(T) -> (Cx<T>, Cx<T>),
{
    let mut state = SampledFunction::from_fn(*model.grid(), eval);
    let normalizable = square_integrable(&model.domain, &state);
    if normalizable {
        normalize(&mut state);
    }
    if energy.im == T::zero() && state.max_imag() == T::zero() {
        state = state.into_real();
    }
    NewState {
        energy,
        state,
        normalizable,
    }
}

/// Seed resampled on the grid of the model when they differ.
pub(crate) fn on_model_grid<T: Real>(
    model: &PotentialModel<T>,
    seed: &SeedSolution<T>,
) -> SeedSolution<T> {
    if seed.u.grid == *model.grid() {
        seed.clone()
    } else {
        seed.resampled(*model.grid())
    }
}
