use std::sync::Arc;

use num_traits::ToPrimitive;
use proptest::prelude::*;

use pwl::algebra::{
    main_table, rat, rf_equal, LimitPoint, Monomial, MultiPoly, RationalFunc, Symbol, SymbolTable,
};
use pwl::birational::{pullback_field, BirationalError};
use pwl::systems::{generators, normalization_residual, ParamVector, WeylType};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const T: usize = 3;

fn table() -> Arc<SymbolTable> {
    main_table()
}

/// Random polynomial in x, y, z (and optionally t) with small rational
/// coefficients.
fn poly(max_terms: usize, with_t: bool) -> impl Strategy<Value = MultiPoly> {
    let tdeg = if with_t { 3u16 } else { 1 };
    prop::collection::vec(
        (0u16..3, 0u16..3, 0u16..3, 0u16..tdeg, -6i64..7, 1i64..4),
        0..max_terms,
    )
    .prop_map(|terms| {
        let t = table();
        let mut p = MultiPoly::zero(&t);
        for (a, b, c, d, n, den) in terms {
            let mut e = vec![0u16; t.len()];
            e[X] = a;
            e[Y] = b;
            e[Z] = c;
            e[T] = d;
            p = &p + &MultiPoly::monomial(&t, Monomial::from_exponents(&e), rat(n, den));
        }
        p
    })
}

fn nonzero(max_terms: usize, with_t: bool) -> impl Strategy<Value = MultiPoly> {
    poly(max_terms, with_t).prop_filter("nonzero", |p| !p.is_zero())
}

fn point(v: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0; table().len()];
    p[..v.len()].copy_from_slice(v);
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn addition_is_associative(a in poly(6, false), b in poly(6, false), c in poly(6, false)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn multiplication_distributes(a in poly(5, false), b in poly(5, false), c in poly(5, false)) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn exact_divide_round_trip(q in poly(5, false), d in nonzero(4, false), noise in poly(3, false)) {
        let n = &q * &d;
        let back = n.exact_divide(&d).unwrap();
        prop_assert_eq!(back.as_ref(), Some(&q));
        let m = &n + &noise;
        if let Some(q2) = m.exact_divide(&d).unwrap() {
            prop_assert_eq!(&q2 * &d, m);
        }
    }

    #[test]
    fn derivative_matches_central_difference(
        p in poly(8, false),
        v in -1.0f64..1.0, w in -1.0f64..1.0, u in -1.0f64..1.0,
        var in 0usize..3,
    ) {
        let h = 1e-4;
        let base = [v, w, u];
        let mut plus = base;
        plus[var] += h;
        let mut minus = base;
        minus[var] -= h;
        let fd = (p.eval_f64(&point(&plus)) - p.eval_f64(&point(&minus))) / (2.0 * h);
        let exact = p.differentiate(Symbol(var)).eval_f64(&point(&base));
        prop_assert!((fd - exact).abs() < 1e-6, "{} vs {}", fd, exact);
    }

    #[test]
    fn rf_equal_is_an_equivalence(
        n in poly(4, false), d in nonzero(3, false),
        c1 in nonzero(3, false), c2 in nonzero(3, false),
        other in poly(4, false),
    ) {
        let a = RationalFunc::new(n.clone(), d.clone()).unwrap();
        let b = RationalFunc::new(&n * &c1, &d * &c1).unwrap();
        let c = RationalFunc::new(&(&n * &c1) * &c2, &(&d * &c1) * &c2).unwrap();
        let o = RationalFunc::new(other, d).unwrap();
        prop_assert!(rf_equal(&a, &a));
        prop_assert!(rf_equal(&a, &b) && rf_equal(&b, &a));
        prop_assert!(rf_equal(&b, &c) && rf_equal(&a, &c));
        prop_assert_eq!(rf_equal(&a, &o), rf_equal(&o, &a));
        if rf_equal(&a, &o) && rf_equal(&o, &c) {
            prop_assert!(rf_equal(&a, &c));
        }
    }

    #[test]
    fn limit_at_infinity_matches_large_argument(
        n in poly(6, true), d in nonzero(6, true),
        v in 0.5f64..1.5, w in 0.5f64..1.5, u in 0.5f64..1.5,
    ) {
        let r = RationalFunc::new(n, d).unwrap();
        if let Ok(lim) = r.param_limit(Symbol(T), LimitPoint::Infinity) {
            let at = point(&[v, w, u, 0.0]);
            let lead_den = lim.den().eval_f64(&at);
            prop_assume!(lead_den.abs() > 1e-2);
            let exact = lim.eval_f64(&at);
            let far = r.eval_f64(&point(&[v, w, u, 1e8]));
            prop_assert!((far - exact).abs() <= 1e-4 * exact.abs().max(1.0), "{} vs {}", far, exact);
        }
    }

    #[test]
    fn d4_generators_are_involutions_at_points(
        vals in prop::collection::vec(-999i64..1000, 8),
        which in 0usize..5,
    ) {
        let s = &generators(WeylType::D4).unwrap()[which];
        let t = table();
        let mut st = vec![rat(0, 1); t.len()];
        for (name, v) in ["x", "y", "z", "t", "eta", "alpha1", "alpha2", "alpha3"].iter().zip(&vals) {
            st[t.index(name).unwrap()] = rat(*v, 1);
        }
        let a = &st[t.index("alpha1").unwrap()] + &(&st[t.index("alpha2").unwrap()] * &rat(2, 1)) + st[t.index("alpha3").unwrap()].clone();
        st[t.index("alpha4").unwrap()] = rat(1, 3);
        st[t.index("alpha0").unwrap()] = rat(1, 1) - a - rat(1, 3);
        let once = match s.apply(&st) {
            Ok(p) => p,
            Err(BirationalError::Indeterminate(_)) => return Ok(()),
            Err(e) => panic!("{}", e),
        };
        match s.apply(&once) {
            Ok(back) => prop_assert_eq!(back, st),
            Err(BirationalError::Indeterminate(_)) => {}
            Err(e) => panic!("{}", e),
        }
    }

    #[test]
    fn pullback_is_linear(f in prop::collection::vec(poly(4, false), 3), g in prop::collection::vec(poly(4, false), 3), which in 0usize..5) {
        let s = &generators(WeylType::D4).unwrap()[which];
        let rf = |v: &[MultiPoly]| v.iter().map(|p| RationalFunc::from_poly(p.clone())).collect::<Vec<_>>();
        let sum: Vec<MultiPoly> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        let lhs = pullback_field(s, &rf(&sum), usize::MAX).unwrap();
        let pf = pullback_field(s, &rf(&f), usize::MAX).unwrap();
        let pg = pullback_field(s, &rf(&g), usize::MAX).unwrap();
        for ((l, a), b) in lhs.iter().zip(&pf).zip(&pg) {
            prop_assert!(rf_equal(l, &a.checked_add(b, usize::MAX).unwrap()));
        }
    }
}

#[test]
fn parameter_actions_preserve_normalization() {
    for ty in WeylType::ALL {
        let sym = ParamVector::symbolic(ty);
        let residual = normalization_residual(ty, &sym.entries).unwrap();
        for g in generators(ty).unwrap() {
            let moved = g.param_action.apply_poly(&sym.entries);
            let after = normalization_residual(ty, &moved).unwrap();
            assert_eq!(after, residual, "{} {}", ty, g.name);
        }
    }
}

#[test]
fn limit_example_is_numerically_sane() {
    let t = table();
    let r = pwl::algebra::parse_rf(&t, "(3 t^2 + x)/(t^2 - 1)").unwrap();
    let lim = r
        .param_limit(t.symbol("t").unwrap(), LimitPoint::Infinity)
        .unwrap();
    assert_eq!(
        lim.evaluate(&vec![Some(rat(0, 1)); t.len()])
            .unwrap()
            .to_f64()
            .unwrap(),
        3.0
    );
}
