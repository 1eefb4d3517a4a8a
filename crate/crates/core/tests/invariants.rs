//! Property-based invariants of the series engine and the statistics group.

use num_traits::{One, Zero};
use proptest::prelude::*;

use umbral_stats::rational::rat;
use umbral_stats::statistics::{chu_vandermonde_holds, Statistics};
use umbral_stats::{Rational, TruncatedSeries};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// Sparse series: few nonzero terms keep the exact arithmetic cheap.
fn series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((0..=order, rational()), 0..5).prop_map(move |terms| {
        let mut c = vec![Rational::zero(); order + 1];
        for (k, v) in terms {
            c[k] = v;
        }
        TruncatedSeries::new(c, order)
    })
}

fn with_constant(order: usize, c0: Rational) -> impl Strategy<Value = TruncatedSeries> {
    series(order).prop_map(move |s| {
        let mut c = s.into_coeffs();
        c[0] = c0.clone();
        TruncatedSeries::new(c, order)
    })
}

fn delta(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    (series(order), nonzero_rational()).prop_map(move |(s, s1)| {
        let mut c = s.into_coeffs();
        c[0] = Rational::zero();
        c[1] = s1;
        TruncatedSeries::new(c, order)
    })
}

/// Statistics from a weight `X + …` with a few random higher terms.
fn statistics(order: usize) -> impl Strategy<Value = Statistics> {
    delta(order).prop_map(move |s| {
        let mut c = s.into_coeffs();
        c[1] = Rational::one();
        Statistics::from_weight("prop", TruncatedSeries::new(c, order)).unwrap()
    })
}

fn boltzmann_gibbs(order: usize) -> Statistics {
    Statistics::from_weight("bg", TruncatedSeries::x(order)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in series(12), b in series(12), c in series(12)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&TruncatedSeries::one(12)), a.clone());
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exp_and_log_are_inverse(s in with_constant(16, Rational::zero()), u in with_constant(16, Rational::one())) {
        prop_assert_eq!(s.exp().unwrap().log().unwrap(), s);
        prop_assert_eq!(u.log().unwrap().exp().unwrap(), u);
    }

    #[test]
    fn lagrange_inversion_roundtrip(s in delta(10)) {
        let t = s.lagrange_invert().unwrap();
        let x = TruncatedSeries::x(10);
        prop_assert_eq!(s.compose(&t).unwrap(), x.clone());
        prop_assert_eq!(t.compose(&s).unwrap(), x);
    }

    #[test]
    fn leibniz_rule(a in series(12), b in series(12)) {
        let lhs = a.mul(&b).derivative();
        let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn rational_power_raised_back(u in with_constant(10, Rational::one()), q in 1usize..=4, p in -3i64..=3) {
        let root = u.pow_rational(&rat(1, q as i64)).unwrap();
        prop_assert_eq!(root.pow_int(q), u.clone());
        let r = u.pow_rational(&rat(p, q as i64)).unwrap();
        let via_log = u.log().unwrap().scale(&rat(p, q as i64)).exp().unwrap();
        prop_assert_eq!(r, via_log);
    }

    #[test]
    fn duality_is_an_involution(s in statistics(10)) {
        let back = s.dual().unwrap().dual().unwrap();
        prop_assert_eq!(back.free_energy(), s.free_energy());
    }

    #[test]
    fn group_law(a in statistics(8), b in statistics(8), c in statistics(8)) {
        let left = a.group_compose(&b).unwrap().group_compose(&c).unwrap();
        let right = a.group_compose(&b.group_compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left.weight(), right.weight());

        let id = boltzmann_gibbs(8);
        prop_assert_eq!(a.group_compose(&id).unwrap().weight().clone(), a.weight().clone());
        prop_assert_eq!(id.group_compose(&a).unwrap().weight().clone(), a.weight().clone());
        prop_assert_eq!(a.group_compose_m(&b, 0).unwrap().weight().clone(), a.group_compose(&b).unwrap().weight().clone());

        let inv = a.dual().unwrap();
        prop_assert_eq!(a.group_compose(&inv).unwrap().weight().clone(), id.weight().clone());
    }

    #[test]
    fn chu_vandermonde(s in statistics(8), x in rational(), y in rational(), n in 0usize..=6) {
        prop_assert!(chu_vandermonde_holds(&s, &x, &y, n).unwrap());
    }
}
