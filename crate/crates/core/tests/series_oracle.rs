//! Series arithmetic against nested central differences evaluated in
//! double-double precision.

mod support;

use ngss::series::BivariateSeries;
use ngss::Complex64;
use proptest::prelude::*;
use support::{fd_coefficient, rel_err, Cdd, Dd};

const H: f64 = 1e-4;
const TOL: f64 = 1e-6;

fn poly_dd(s: &BivariateSeries, e: Dd, eh: Dd) -> Cdd {
    let mut acc = Cdd::ZERO;
    let mut pe = Cdd::ONE;
    for i in 0..=s.max_eps() {
        let mut ph = Cdd::ONE;
        for j in 0..=s.max_hat() {
            acc = acc + Cdd::from_c(s.coeff(i, j).unwrap()) * pe * ph;
            ph = ph * Cdd { re: eh, im: Dd::ZERO };
        }
        pe = pe * Cdd { re: e, im: Dd::ZERO };
    }
    acc
}

fn assert_matches(s: &BivariateSeries, f: &dyn Fn(Dd, Dd) -> Cdd) -> Result<(), TestCaseError> {
    for p in 0..=s.max_eps() {
        for q in 0..=s.max_hat() {
            let fd = fd_coefficient(f, p, q, H);
            let got = s.coeff(p, q).unwrap();
            prop_assert!(rel_err(got, fd) <= TOL, "({p},{q}): series {got} vs differences {fd}");
        }
    }
    Ok(())
}

#[test]
fn double_double_elementary_functions() {
    let e = Dd::ONE.exp();
    assert_eq!(e.hi, std::f64::consts::E);
    assert!((e.lo - 1.4456468917292502e-16).abs() < 1e-31);
    let x = Dd::new(0.7);
    let y = x.exp() * (-x).exp() - Dd::ONE;
    assert!(y.to_f64().abs() < 1e-30);
    let (s, c) = Dd::new(5.3).sin_cos();
    assert!((s * s + c * c - Dd::ONE).to_f64().abs() < 1e-30);
    assert!((s.to_f64() - 5.3f64.sin()).abs() < 1e-15);
    assert!((c.to_f64() - 5.3f64.cos()).abs() < 1e-15);
    let third = Dd::ONE / Dd::new(3.0);
    assert!((third * Dd::new(3.0) - Dd::ONE).to_f64().abs() < 1e-31);
}

#[test]
fn recip_affine_at_2i_matches_differences() {
    let c = Complex64::new(0.0, 2.0);
    let s = BivariateSeries::recip_affine(c, 3, 3).unwrap();
    let f = |e: Dd, eh: Dd| Cdd::ONE / (Cdd::from_c(c) + Cdd { re: e - eh, im: Dd::ZERO });
    assert_matches(&s, &f).unwrap();
}

fn arb_series(max_eps: usize, max_hat: usize) -> impl Strategy<Value = BivariateSeries> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), (max_eps + 1) * (max_hat + 1)).prop_map(move |v| {
        BivariateSeries::from_fn(max_eps, max_hat, |i, j| {
            let (re, im) = v[i * (max_hat + 1) + j];
            Complex64::new(re, im)
        })
    })
}

fn arb_pair() -> impl Strategy<Value = (BivariateSeries, BivariateSeries)> {
    (0usize..=3, 0usize..=3).prop_flat_map(|(me, mh)| (arb_series(me, mh), arb_series(me, mh)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sum_matches_differences((a, b) in arb_pair()) {
        let s = &a + &b;
        assert_matches(&s, &|e, eh| poly_dd(&a, e, eh) + poly_dd(&b, e, eh))?;
    }

    #[test]
    fn product_matches_differences((a, b) in arb_pair()) {
        let s = &a * &b;
        assert_matches(&s, &|e, eh| poly_dd(&a, e, eh) * poly_dd(&b, e, eh))?;
    }

    #[test]
    fn exp_matches_differences((a, _) in arb_pair()) {
        let s = a.exp();
        assert_matches(&s, &|e, eh| poly_dd(&a, e, eh).exp())?;
    }

    #[test]
    fn recip_linear_matches_differences(
        r in 0.5f64..3.0,
        arg in 0.0f64..std::f64::consts::TAU,
        sa in prop::bool::ANY,
        sb in prop::bool::ANY,
        me in 0usize..=3,
        mh in 0usize..=3,
    ) {
        let c = Complex64::from_polar(r, arg);
        let (alpha, beta) = (if sa { 1.0 } else { -1.0 }, if sb { 1.0 } else { -1.0 });
        let s = BivariateSeries::recip_linear(c, Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0), me, mh).unwrap();
        let f = |e: Dd, eh: Dd| Cdd::ONE / (Cdd::from_c(c) + Cdd { re: Dd::new(alpha) * e + Dd::new(beta) * eh, im: Dd::ZERO });
        assert_matches(&s, &f)?;
    }
}
