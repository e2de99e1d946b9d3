//! Gamma function and generalized hypergeometric series.

use num_traits::{One, Zero};

use crate::scalar::{cx, Cx, Real};

/// Outcome of a series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialFunctionResult<T> {
    pub value: Cx<T>,
    pub terms_used: usize,
    pub converged: bool,
}

/// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Returns `Some(n)` when `z` is the non-positive integer `-n`.
fn non_positive_integer<T: Real>(z: Cx<T>) -> Option<usize> {
    let tol = T::lit(1e-12) * (T::one() + z.re.abs());
    if z.im.abs() > tol || z.re > tol {
        return None;
    }
    let r = z.re.round();
    if (z.re - r).abs() <= tol {
        (-r).to_usize()
    } else {
        None
    }
}

/// `ln Γ(z)` for `Re z >= 1/2` via the Lanczos approximation.
fn ln_gamma_lanczos<T: Real>(z: Cx<T>) -> Cx<T> {
    let z = z - T::one();
    let mut acc = cx(T::lit(LANCZOS[0]));
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += cx(T::lit(c)) / (z + T::from_usize_lossy(i));
    }
    let t = z + T::lit(LANCZOS_G + 0.5);
    let half_ln_2pi = T::lit(0.918_938_533_204_672_8);
    (z + T::lit(0.5)) * t.ln() - t + acc.ln() + half_ln_2pi
}

/// `ln Γ(z)` on a branch that is continuous away from the negative real axis.
/// Only `exp` of the result is meaningful for arguments with `Re z < 1/2`.
pub fn ln_gamma<T: Real>(z: Cx<T>) -> Cx<T> {
    if z.re < T::lit(0.5) {
        let pi = T::PI();
        let s = (z * pi).sin();
        cx(pi.ln()) - s.ln() - ln_gamma_lanczos(Cx::<T>::one() - z)
    } else {
        ln_gamma_lanczos(z)
    }
}

/// Complex Gamma function. Poles return a non-finite value.
pub fn gamma<T: Real>(z: Cx<T>) -> Cx<T> {
    if non_positive_integer(z).is_some() {
        return cx(T::infinity());
    }
    if z.re < T::lit(0.5) {
        let pi = T::PI();
        cx(pi) / ((z * pi).sin() * ln_gamma_lanczos(Cx::<T>::one() - z).exp())
    } else {
        ln_gamma_lanczos(z).exp()
    }
}

/// `1/Γ(z)`, which is entire: it vanishes exactly at the poles of Γ.
pub fn rgamma<T: Real>(z: Cx<T>) -> Cx<T> {
    if non_positive_integer(z).is_some() {
        return Cx::zero();
    }
    if z.re < T::lit(0.5) {
        let pi = T::PI();
        (z * pi).sin() * ln_gamma_lanczos(Cx::<T>::one() - z).exp() / pi
    } else {
        (-ln_gamma_lanczos(z)).exp()
    }
}

/// Real Gamma function.
pub fn gamma_real<T: Real>(x: T) -> T {
    gamma(cx(x)).re
}

/// Pochhammer symbol `(a)_n`.
pub fn pochhammer<T: Real>(a: Cx<T>, n: usize) -> Cx<T> {
    (0..n).fold(Cx::one(), |acc, k| acc * (a + T::from_usize_lossy(k)))
}

/// Series controls shared by the hypergeometric evaluators.
#[derive(Debug, Clone, Copy)]
pub struct SeriesOptions<T> {
    pub tolerance: T,
    pub max_terms: usize,
}

impl<T: Real> Default for SeriesOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::epsilon(),
            max_terms: 20_000,
        }
    }
}

/// Sums `Σ t_k` with `t_{k+1} = t_k · ratio(k)`, starting from `t_0 = 1`.
fn sum_series<T: Real, R>(
    mut ratio: R,
    opts: SeriesOptions<T>,
    terminate_at: Option<usize>,
) -> SpecialFunctionResult<T>
where
    R: FnMut(usize) -> Cx<T>,
{
    let mut term = Cx::<T>::one();
    let mut sum = term;
    let mut small_streak = 0usize;
    let limit = terminate_at.map_or(opts.max_terms, |n| n.min(opts.max_terms));
    for k in 0..limit {
        term *= ratio(k);
        sum += term;
        if terminate_at.is_none() {
            if term.norm() <= opts.tolerance * sum.norm() {
                small_streak += 1;
                if small_streak >= 2 {
                    return SpecialFunctionResult {
                        value: sum,
                        terms_used: k + 2,
                        converged: true,
                    };
                }
            } else {
                small_streak = 0;
            }
        }
    }
    match terminate_at {
        Some(n) if n <= opts.max_terms => SpecialFunctionResult {
            value: sum,
            terms_used: n + 1,
            converged: true,
        },
        _ => SpecialFunctionResult {
            value: sum,
            terms_used: limit + 1,
            converged: false,
        },
    }
}

/// Plain Maclaurin series of ₂F₁(a, b; c; x).
pub fn gauss_2f1_series<T: Real>(
    a: Cx<T>,
    b: Cx<T>,
    c: Cx<T>,
    x: T,
    opts: SeriesOptions<T>,
) -> SpecialFunctionResult<T> {
    let terminate = non_positive_integer(a)
        .into_iter()
        .chain(non_positive_integer(b))
        .min();
    if x == T::zero() {
        return SpecialFunctionResult {
            value: Cx::one(),
            terms_used: 1,
            converged: true,
        };
    }
    sum_series(
        |k| {
            let kf = T::from_usize_lossy(k);
            (a + kf) * (b + kf) / ((c + kf) * (kf + T::one())) * x
        },
        opts,
        terminate,
    )
}

/// ₂F₁(a, b; c; x) for real `x ∈ [0, 1)`.
///
/// Arguments above 1/2 are mapped to `1 - x` with the Gauss connection
/// formula; terminating series are summed directly.
pub fn gauss_2f1<T: Real>(a: Cx<T>, b: Cx<T>, c: Cx<T>, x: T) -> SpecialFunctionResult<T> {
    Hyp2F1::new(a, b, c).eval(x)
}

/// ₂F₁ with precomputed connection coefficients, for repeated evaluation at
/// many arguments.
#[derive(Debug, Clone, Copy)]
pub struct Hyp2F1<T> {
    a: Cx<T>,
    b: Cx<T>,
    c: Cx<T>,
    terminating: bool,
    connection: Connection<T>,
    opts: SeriesOptions<T>,
}

#[derive(Debug, Clone, Copy)]
enum Connection<T> {
    /// `F = A1 F(a,b;a+b-c+1;1-x) + A2 (1-x)^(c-a-b) F(c-a,c-b;c-a-b+1;1-x)`
    Regular { a1: Cx<T>, a2: Cx<T> },
    /// `c - a - b` is an integer: average of `c ± delta`.
    Perturbed { delta: T },
}

impl<T: Real> Hyp2F1<T> {
    pub fn new(a: Cx<T>, b: Cx<T>, c: Cx<T>) -> Self {
        let terminating = non_positive_integer(a).is_some() || non_positive_integer(b).is_some();
        let s = c - a - b;
        let near_integer = s.im.abs() < T::lit(1e-9) && (s.re - s.re.round()).abs() < T::lit(1e-9);
        let connection = if near_integer {
            Connection::Perturbed {
                delta: T::lit(1e-6),
            }
        } else {
            Connection::Regular {
                a1: Self::coefficient(c, s, c - a, c - b),
                a2: Self::coefficient(c, -s, a, b),
            }
        };
        Self {
            a,
            b,
            c,
            terminating,
            connection,
            opts: SeriesOptions::default(),
        }
    }

    /// `Γ(c) Γ(p) / (Γ(q) Γ(r))`, zero when `q` or `r` is a pole of Γ.
    fn coefficient(c: Cx<T>, p: Cx<T>, q: Cx<T>, r: Cx<T>) -> Cx<T> {
        gamma(c) * gamma(p) * rgamma(q) * rgamma(r)
    }

    pub fn with_options(mut self, opts: SeriesOptions<T>) -> Self {
        self.opts = opts;
        self
    }

    pub fn params(&self) -> (Cx<T>, Cx<T>, Cx<T>) {
        (self.a, self.b, self.c)
    }

    pub fn eval(&self, x: T) -> SpecialFunctionResult<T> {
        self.eval_with_complement(x, T::one() - x)
    }

    /// Evaluation at `x` when `1 - x` is known more accurately than by
    /// subtraction (e.g. `x = sin²θ`, `1 - x = cos²θ`).
    pub fn eval_with_complement(&self, x: T, one_minus_x: T) -> SpecialFunctionResult<T> {
        if self.terminating || x <= T::lit(0.5) {
            return gauss_2f1_series(self.a, self.b, self.c, x, self.opts);
        }
        match self.connection {
            Connection::Regular { a1, a2 } => self.connected(a1, a2, self.c, one_minus_x),
            Connection::Perturbed { delta } => {
                let up = Hyp2F1::new(self.a, self.b, self.c + delta)
                    .with_options(self.opts)
                    .eval_with_complement(x, one_minus_x);
                let dn = Hyp2F1::new(self.a, self.b, self.c - delta)
                    .with_options(self.opts)
                    .eval_with_complement(x, one_minus_x);
                SpecialFunctionResult {
                    value: (up.value + dn.value) / T::lit(2.0),
                    terms_used: up.terms_used + dn.terms_used,
                    converged: up.converged && dn.converged,
                }
            }
        }
    }

    fn connected(&self, a1: Cx<T>, a2: Cx<T>, c: Cx<T>, y: T) -> SpecialFunctionResult<T> {
        let (a, b) = (self.a, self.b);
        let s = c - a - b;
        let f1 = gauss_2f1_series(a, b, a + b - c + T::one(), y, self.opts);
        let f2 = gauss_2f1_series(c - a, c - b, s + T::one(), y, self.opts);
        let power = (s * y.ln()).exp();
        SpecialFunctionResult {
            value: a1 * f1.value + a2 * power * f2.value,
            terms_used: f1.terms_used + f2.terms_used,
            converged: f1.converged && f2.converged,
        }
    }

    /// Derivative with respect to `x`: `(ab/c) ₂F₁(a+1, b+1; c+1; x)`.
    pub fn derivative(&self) -> (Cx<T>, Hyp2F1<T>) {
        let one = T::one();
        (
            self.a * self.b / self.c,
            Hyp2F1::new(self.a + one, self.b + one, self.c + one).with_options(self.opts),
        )
    }
}

/// Series for ₃F₂(a1, a2, a3; b1, b2; x), `x ∈ [0, 1)`.
pub fn hyp_3f2<T: Real>(
    a1: Cx<T>,
    a2: Cx<T>,
    a3: Cx<T>,
    b1: Cx<T>,
    b2: Cx<T>,
    x: T,
) -> SpecialFunctionResult<T> {
    hyp_3f2_with(a1, a2, a3, b1, b2, x, SeriesOptions::default())
}

pub fn hyp_3f2_with<T: Real>(
    a1: Cx<T>,
    a2: Cx<T>,
    a3: Cx<T>,
    b1: Cx<T>,
    b2: Cx<T>,
    x: T,
    opts: SeriesOptions<T>,
) -> SpecialFunctionResult<T> {
    if x == T::zero() {
        return SpecialFunctionResult {
            value: Cx::one(),
            terms_used: 1,
            converged: true,
        };
    }
    let terminate = [a1, a2, a3]
        .into_iter()
        .filter_map(non_positive_integer)
        .min();
    sum_series(
        |k| {
            let kf = T::from_usize_lossy(k);
            (a1 + kf) * (a2 + kf) * (a3 + kf) / ((b1 + kf) * (b2 + kf) * (kf + T::one())) * x
        },
        opts,
        terminate,
    )
}
