use proptest::prelude::*;
use susyqm::numerics::calculus::gauss_legendre_adaptive;
use susyqm::numerics::elliptic::{elliptic_k, jacobi_elliptic};
use susyqm::numerics::special::gauss_2f1;
use susyqm::{cx, Cx};

fn f21(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let r = gauss_2f1(cx(a), cx(b), cx(c), x);
    assert!(r.converged, "2F1({a}, {b}; {c}; {x}) did not converge");
    r.value.re
}

/// Keeps `c - a - b` away from the integers where the connection formula
/// degenerates.
fn generic(a: f64, b: f64, c: f64) -> bool {
    let s = c - a - b;
    (s - s.round()).abs() > 0.05
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_identities(x in -8.0..8.0_f64, m in 0.01..0.99_f64) {
        let j = jacobi_elliptic(x, m).unwrap();
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-13);
        prop_assert!((j.dn * j.dn + m * j.sn * j.sn - 1.0).abs() < 1e-13);
        let h = 1e-5;
        let d = (jacobi_elliptic(x + h, m).unwrap().sn - jacobi_elliptic(x - h, m).unwrap().sn) / (2.0 * h);
        prop_assert!((d - j.cn * j.dn).abs() < 1e-8);
        let k = elliptic_k(m).unwrap();
        let shifted = jacobi_elliptic(x + 2.0 * k, m).unwrap();
        prop_assert!((shifted.sn + j.sn).abs() < 1e-11);
        prop_assert!((shifted.dn - j.dn).abs() < 1e-11);
    }

    #[test]
    fn complete_integral_matches_quadrature(m in 0.0..0.95_f64) {
        let f = |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt();
        let q = gauss_legendre_adaptive(&f, 0.0, std::f64::consts::FRAC_PI_2, 1e-14);
        let k = elliptic_k(m).unwrap();
        prop_assert!((k - q).abs() <= 1e-12 * q, "{k} vs {q}");
    }

    #[test]
    fn gauss_contiguous_relation(
        a in -2.5..2.5_f64,
        b in -2.5..2.5_f64,
        c in 1.6..4.0_f64,
        x in 0.02..0.9_f64,
    ) {
        prop_assume!(generic(a, b, c));
        // c(c-1)(x-1) F(c-1) + c[c-1-(2c-a-b-1)x] F(c) + (c-a)(c-b) x F(c+1) = 0
        let t1 = c * (c - 1.0) * (x - 1.0) * f21(a, b, c - 1.0, x);
        let t2 = c * (c - 1.0 - (2.0 * c - a - b - 1.0) * x) * f21(a, b, c, x);
        let t3 = (c - a) * (c - b) * x * f21(a, b, c + 1.0, x);
        let scale = t1.abs().max(t2.abs()).max(t3.abs()).max(1.0);
        prop_assert!((t1 + t2 + t3).abs() <= 1e-9 * scale, "{t1} {t2} {t3}");
    }

    #[test]
    fn euler_transformation(
        a in -2.5..2.5_f64,
        b in -2.5..2.5_f64,
        c in 0.6..4.0_f64,
        x in 0.0..0.9_f64,
    ) {
        prop_assume!(generic(a, b, c));
        let lhs = f21(a, b, c, x);
        let rhs = (1.0 - x).powf(c - a - b) * f21(c - a, c - b, c, x);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn complex_parameters_conjugate(ar in -2.0..2.0_f64, ai in -1.0..1.0_f64, x in 0.0..0.9_f64) {
        let a = Cx::new(ar, ai);
        let (b, c) = (cx(1.3), cx(2.7));
        let f = gauss_2f1(a, b, c, x).value;
        let g = gauss_2f1(a.conj(), b, c, x).value;
        prop_assert!((f.conj() - g).norm() <= 1e-12 * f.norm().max(1.0));
    }
}
