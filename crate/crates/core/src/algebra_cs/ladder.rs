//! Ladder operators of `H0` and of a second-order partner `H2` acting on
//! coefficient vectors over the eigenbasis.
//!
//! A partner state carries two extra slots for the created levels `ε₁, ε₂`;
//! every ladder operator of `H2` annihilates them.

use std::fmt;

use crate::error::{Result, SusyError};
use crate::scalar::{cx, Cx, Real};

use super::spectrum::SpectrumFunction;

/// Levels inspected when checking where the new levels sit.
const LEVEL_SEARCH_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderKind {
    Intrinsic,
    Linear,
    Natural,
}

impl fmt::Display for LadderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LadderKind::Intrinsic => "intrinsic",
            LadderKind::Linear => "linear",
            LadderKind::Natural => "natural",
        })
    }
}

impl std::str::FromStr for LadderKind {
    type Err = SusyError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intrinsic" => Ok(LadderKind::Intrinsic),
            "linear" => Ok(LadderKind::Linear),
            "natural" => Ok(LadderKind::Natural),
            _ => Err(SusyError::InvalidInput(format!(
                "unknown ladder kind '{s}' (expected intrinsic, linear or natural)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Lower,
    Raise,
}

/// A ladder operator: its kind, phase parameter `α`, the spectrum of the
/// isospectral part and, for operators of `H2`, the two created levels.
#[derive(Debug, Clone)]
pub struct LadderSpec<T: Real> {
    pub kind: LadderKind,
    pub alpha: T,
    pub spectrum: SpectrumFunction<T>,
    pub new_levels: Option<(T, T)>,
}

impl<T: Real> LadderSpec<T> {
    /// The natural kind needs `new_levels`. The two levels may not be
    /// separated by a level of the spectrum, so that both lie below `E0` or
    /// in one gap.
    pub fn new(
        kind: LadderKind,
        alpha: T,
        spectrum: SpectrumFunction<T>,
        new_levels: Option<(T, T)>,
    ) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(SusyError::InvalidInput(format!(
                "α = {alpha} is not finite"
            )));
        }
        if kind == LadderKind::Natural && new_levels.is_none() {
            return Err(SusyError::InvalidInput(
                "the natural algebra is defined for a partner with two new levels".into(),
            ));
        }
        if let Some((e1, e2)) = new_levels {
            if !e1.is_finite() || !e2.is_finite() {
                return Err(SusyError::InvalidInput(format!(
                    "new levels ({e1}, {e2}) are not finite"
                )));
            }
            let (lo, hi) = (e1.min(e2), e1.max(e2));
            let mut n = 0;
            while n < LEVEL_SEARCH_CAP && spectrum.e(n) < hi {
                if spectrum.e(n) > lo {
                    return Err(SusyError::ParameterBounds(format!(
                        "the level E({n}) = {} separates the new levels {e1} and {e2}",
                        spectrum.e(n)
                    )));
                }
                n += 1;
            }
        }
        Ok(Self {
            kind,
            alpha,
            spectrum,
            new_levels,
        })
    }

    pub fn h0(kind: LadderKind, alpha: T, spectrum: SpectrumFunction<T>) -> Result<Self> {
        Self::new(kind, alpha, spectrum, None)
    }

    pub fn h2(
        kind: LadderKind,
        alpha: T,
        spectrum: SpectrumFunction<T>,
        e1: T,
        e2: T,
    ) -> Result<Self> {
        Self::new(kind, alpha, spectrum, Some((e1, e2)))
    }

    pub fn with_alpha(&self, alpha: T) -> Self {
        Self {
            alpha,
            ..self.clone()
        }
    }

    /// Slots reserved for the created levels (0 for `H0`, 2 for `H2`).
    pub fn new_level_slots(&self) -> usize {
        if self.new_levels.is_some() {
            2
        } else {
            0
        }
    }

    /// Energy attached to isospectral slot `n`.
    pub fn energy(&self, n: usize) -> T {
        self.spectrum.e(n)
    }

    /// Whether `|r(n)|` increases for all `m ≥ n`.
    pub(crate) fn monotone_from(&self, n: usize) -> bool {
        match (self.kind, self.new_levels) {
            (LadderKind::Natural, Some((e1, e2))) => n == 0 || self.spectrum.e(n - 1) >= e1.max(e2),
            _ => true,
        }
    }
}

/// `r(n)`: lowering maps slot `n` to `r(n)` times slot `n - 1`. `r(0) = 0`
/// for every kind.
pub fn ladder_coefficient<T: Real>(spec: &LadderSpec<T>, n: usize) -> Cx<T> {
    if n == 0 {
        return cx(T::zero());
    }
    let s = &spec.spectrum;
    let phase = Cx::from_polar(T::one(), spec.alpha * s.f(n - 1));
    match spec.kind {
        LadderKind::Linear => phase * T::from_usize_lossy(n).sqrt(),
        LadderKind::Intrinsic => phase * (s.e(n) - s.e0()).sqrt(),
        LadderKind::Natural => {
            let (e1, e2) = spec.new_levels.expect("checked by LadderSpec::new");
            let (a, b) = (s.e(n), s.e(n - 1));
            let extra = ((a - e1) * (a - e2) * (b - e1) * (b - e2))
                .max(T::zero())
                .sqrt();
            phase * (extra * (a - s.e0()).sqrt())
        }
    }
}

/// Coefficients over the new-level slots and the first isospectral slots.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderState<T> {
    pub new_levels: Vec<Cx<T>>,
    pub levels: Vec<Cx<T>>,
}

impl<T: Real> LadderState<T> {
    pub fn zeros(new_level_slots: usize, dim: usize) -> Self {
        Self {
            new_levels: vec![cx(T::zero()); new_level_slots],
            levels: vec![cx(T::zero()); dim],
        }
    }

    /// Isospectral basis vector `n`.
    pub fn basis(new_level_slots: usize, dim: usize, n: usize) -> Self {
        let mut s = Self::zeros(new_level_slots, dim);
        s.levels[n] = cx(T::one());
        s
    }

    /// Basis vector of new-level slot `i`.
    pub fn new_level(new_level_slots: usize, dim: usize, i: usize) -> Self {
        let mut s = Self::zeros(new_level_slots, dim);
        s.new_levels[i] = cx(T::one());
        s
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn norm(&self) -> T {
        self.new_levels
            .iter()
            .chain(&self.levels)
            .map(|c| c.norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    pub fn scaled(&self, k: Cx<T>) -> Self {
        Self {
            new_levels: self.new_levels.iter().map(|&c| c * k).collect(),
            levels: self.levels.iter().map(|&c| c * k).collect(),
        }
    }

    /// `self - other`; both must have the same layout.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.new_levels.len(), self.dim()),
            (other.new_levels.len(), other.dim()),
            "state layouts differ"
        );
        let d = |a: &[Cx<T>], b: &[Cx<T>]| a.iter().zip(b).map(|(&x, &y)| x - y).collect();
        Self {
            new_levels: d(&self.new_levels, &other.new_levels),
            levels: d(&self.levels, &other.levels),
        }
    }
}

fn check_layout<T: Real>(spec: &LadderSpec<T>, state: &LadderState<T>) -> Result<()> {
    if state.new_levels.len() != spec.new_level_slots() {
        return Err(SusyError::InvalidInput(format!(
            "state has {} new-level slots, the operator expects {}",
            state.new_levels.len(),
            spec.new_level_slots()
        )));
    }
    Ok(())
}

/// Lowering or raising in the truncated basis: components shifted past the
/// last slot are dropped, new-level slots are annihilated.
pub fn ladder_apply<T: Real>(
    spec: &LadderSpec<T>,
    state: &LadderState<T>,
    direction: Direction,
) -> Result<LadderState<T>> {
    check_layout(spec, state)?;
    let dim = state.dim();
    let mut out = LadderState::zeros(spec.new_level_slots(), dim);
    for n in 0..dim {
        match direction {
            Direction::Lower if n >= 1 => {
                out.levels[n - 1] = ladder_coefficient(spec, n) * state.levels[n]
            }
            Direction::Raise if n + 1 < dim => {
                out.levels[n + 1] = ladder_coefficient(spec, n + 1).conj() * state.levels[n]
            }
            _ => {}
        }
    }
    Ok(out)
}

/// `[a⁻, a⁺]` applied to `state`. The top slot is affected by truncation.
pub fn commutator<T: Real>(spec: &LadderSpec<T>, state: &LadderState<T>) -> Result<LadderState<T>> {
    let lr = ladder_apply(
        spec,
        &ladder_apply(spec, state, Direction::Raise)?,
        Direction::Lower,
    )?;
    let rl = ladder_apply(
        spec,
        &ladder_apply(spec, state, Direction::Lower)?,
        Direction::Raise,
    )?;
    Ok(lr.sub(&rl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poschl_teller::PTParams;

    fn pt() -> SpectrumFunction<f64> {
        SpectrumFunction::poschl_teller(PTParams::new(3.0, 4.0).unwrap())
    }

    #[test]
    fn oscillator_coefficients() {
        let spec =
            LadderSpec::h0(LadderKind::Intrinsic, 0.7, SpectrumFunction::oscillator()).unwrap();
        for n in 1..10 {
            let r = ladder_coefficient(&spec, n);
            assert!((r - Cx::from_polar((n as f64).sqrt(), 0.7)).norm() < 1e-14);
        }
        assert_eq!(ladder_coefficient(&spec, 0), cx(0.0));
    }

    #[test]
    fn pt_intrinsic_modulus() {
        let spec = LadderSpec::h0(LadderKind::Intrinsic, 0.3, pt()).unwrap();
        let mu = 7.0;
        for n in 1..8 {
            let nf = n as f64;
            assert!((ladder_coefficient(&spec, n).norm_sqr() - 2.0 * nf * (mu + nf)).abs() < 1e-10);
        }
    }

    #[test]
    fn natural_coefficient_vanishes_at_a_new_level() {
        let s = pt();
        let spec =
            LadderSpec::h2(LadderKind::Natural, 0.0, s.clone(), s.e(2), s.e(2) + 1.0).unwrap();
        assert_eq!(ladder_coefficient(&spec, 2), cx(0.0));
        assert_eq!(ladder_coefficient(&spec, 3), cx(0.0));
        assert!(ladder_coefficient(&spec, 4).norm() > 0.0);
    }

    #[test]
    fn natural_levels_must_share_a_gap() {
        assert!(LadderSpec::h2(LadderKind::Natural, 0.0, pt(), 10.0, 30.0).is_err());
        assert!(LadderSpec::h2(LadderKind::Natural, 0.0, pt(), 10.0, 20.0).is_ok());
        assert!(LadderSpec::h2(LadderKind::Natural, 0.0, pt(), 41.0, 50.0).is_ok());
        assert!(LadderSpec::h0(LadderKind::Natural, 0.0, pt()).is_err());
    }

    #[test]
    fn lowering_the_ground_state_vanishes() {
        let spec = LadderSpec::h0(LadderKind::Linear, 0.0, pt()).unwrap();
        let out = ladder_apply(&spec, &LadderState::basis(0, 6, 0), Direction::Lower).unwrap();
        assert_eq!(out.norm(), 0.0);
        let wrong = LadderState::<f64>::basis(2, 6, 0);
        assert!(ladder_apply(&spec, &wrong, Direction::Lower).is_err());
    }

    #[test]
    fn intrinsic_commutator_is_the_gap_function() {
        let s = pt();
        let spec = LadderSpec::h0(LadderKind::Intrinsic, 0.7, s.clone()).unwrap();
        let dim = 12;
        for n in 0..dim - 1 {
            let c = commutator(&spec, &LadderState::basis(0, dim, n)).unwrap();
            let want = LadderState::basis(0, dim, n).scaled(cx(s.f(n)));
            assert!(c.sub(&want).norm() <= 1e-10 * s.f(n), "n = {n}");
        }
    }

    #[test]
    fn raise_lower_is_the_shifted_hamiltonian() {
        let s = pt();
        let spec = LadderSpec::h0(LadderKind::Intrinsic, 0.7, s.clone()).unwrap();
        for n in 0..10 {
            let b = LadderState::basis(0, 10, n);
            let rl = ladder_apply(
                &spec,
                &ladder_apply(&spec, &b, Direction::Lower).unwrap(),
                Direction::Raise,
            )
            .unwrap();
            assert!(rl.sub(&b.scaled(cx(s.e(n) - s.e0()))).norm() <= 1e-10 * s.e(n));
        }
    }
}
