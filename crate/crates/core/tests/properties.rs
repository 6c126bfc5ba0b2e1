use proptest::prelude::*;

use hqcf::algebra::convergents;
use hqcf::contfrac::{cf_expand, fold, fold_finite, nested_eval, tail_transform};
use hqcf::{Fp, Laurent, Poly, RatFunc, Word};

fn field() -> impl Strategy<Value = Fp> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(7)].prop_map(|p| Fp::new(p).unwrap())
}

fn poly_in(f: Fp, max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0..f.p(), 0..=max_deg + 1).prop_map(move |c| Poly::from_coeffs(f, c))
}

fn nonzero_poly_in(f: Fp, max_deg: usize) -> impl Strategy<Value = Poly> {
    poly_in(f, max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn nonconstant_poly_in(f: Fp, max_deg: usize) -> impl Strategy<Value = Poly> {
    poly_in(f, max_deg).prop_filter("degree >= 1", |p| p.degree().unwrap_or(0) >= 1)
}

/// `a_1` arbitrary, later letters nonconstant.
fn word_in(f: Fp, max_len: usize) -> impl Strategy<Value = Word> {
    (poly_in(f, 3), prop::collection::vec(nonconstant_poly_in(f, 3), 0..max_len))
        .prop_map(|(a1, rest)| Word::new(std::iter::once(a1).chain(rest).collect()))
}

fn ratfunc_in(f: Fp) -> impl Strategy<Value = RatFunc> {
    (poly_in(f, 6), nonzero_poly_in(f, 5)).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

/// A Laurent polynomial with nonzero leading coefficient, exact to `prec`.
fn series_in(f: Fp, prec: i64) -> impl Strategy<Value = Laurent> {
    (-8i64..8, 1..f.p(), prop::collection::vec(0..f.p(), 0..40)).prop_map(move |(top, lead, rest)| {
        let mut c = vec![lead];
        c.extend(rest);
        let len = (top - prec + 1).max(1) as usize;
        c.resize(len, 0);
        Laurent::from_window(f, top, c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_expansion_round_trips(x in field().prop_flat_map(ratfunc_in)) {
        let w = x.cf();
        prop_assert_eq!(fold_finite(&w).unwrap(), x);
        for a in w.letters().iter().skip(1) {
            prop_assert!(a.degree().unwrap_or(0) >= 1);
        }
    }

    #[test]
    fn convergent_determinants(w in field().prop_flat_map(|f| word_in(f, 8))) {
        let f = w.letters()[0].field();
        let conv = convergents(w.letters());
        for i in 1..conv.len() {
            let (p, q) = &conv[i];
            let (pp, qp) = &conv[i - 1];
            let det = &(p * qp) - &(pp * q);
            let sign = if i % 2 == 1 { 1 } else { -1 };
            prop_assert_eq!(det, Poly::from_ints(f, &[sign]));
        }
    }

    #[test]
    fn frobenius_is_a_ring_morphism(
        (f, a, b, t) in field().prop_flat_map(|f| (Just(f), poly_in(f, 6), poly_in(f, 6), 1u32..3))
    ) {
        let r = f.frobenius_power(t).unwrap();
        let fr = |x: &Poly| x.frobenius(r).unwrap();
        prop_assert_eq!(fr(&(&a + &b)), &fr(&a) + &fr(&b));
        prop_assert_eq!(fr(&(&a * &b)), &fr(&a) * &fr(&b));
    }

    #[test]
    fn series_frobenius_is_multiplicative(
        (x, y) in field().prop_flat_map(|f| (series_in(f, -60), series_in(f, -60)))
    ) {
        let r = x.field().p() as u64;
        let lhs = x.mul(&y).frobenius(r).unwrap();
        let rhs = x.frobenius(r).unwrap().mul(&y.frobenius(r).unwrap());
        let prec = lhs.prec().max(rhs.prec());
        prop_assert!(lhs.truncate(prec).sub(&rhs.truncate(prec)).is_zero_so_far());
    }

    #[test]
    fn ultrametric_inequality(
        (x, y) in field().prop_flat_map(|f| (series_in(f, -30), series_in(f, -30)))
    ) {
        let s = x.add(&y);
        let (dx, dy) = (x.degree().unwrap(), y.degree().unwrap());
        match s.degree() {
            Some(ds) => prop_assert!(ds <= dx.max(dy)),
            None => prop_assert_eq!(dx, dy),
        }
        if dx != dy {
            prop_assert_eq!(s.degree(), Some(dx.max(dy)));
        }
    }

    #[test]
    fn series_embedding_is_a_homomorphism(
        (a, b) in field().prop_flat_map(|f| (ratfunc_in(f), ratfunc_in(f)))
    ) {
        let prec = -40;
        let emb = |x: &RatFunc| Laurent::from_ratfunc(x, prec);
        let sum = emb(&(&a + &b));
        prop_assert!(sum.sub(&emb(&a).add(&emb(&b))).is_zero_so_far());
        let prod = emb(&(&a * &b));
        let direct = emb(&a).mul(&emb(&b));
        let p = direct.prec().max(prod.prec());
        prop_assert!(prod.truncate(p).sub(&direct.truncate(p)).is_zero_so_far());
    }

    #[test]
    fn tail_transform_identity(
        (w, x) in field().prop_flat_map(|f| (word_in(f, 5), ratfunc_in(f)))
    ) {
        prop_assume!(!x.is_zero());
        let (tf, tg) = tail_transform(&w).unwrap();
        let y = &(&tf * &x) + &tg;
        let lhs = nested_eval(&w, None).and_then(|v| Ok(&v + &x.inv()?));
        let rhs = nested_eval(&w, Some(&y));
        if let (Ok(lhs), Ok(rhs)) = (lhs, rhs) {
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn expansion_recovers_folded_word(
        (w, tail) in field().prop_flat_map(|f| (word_in(f, 6), series_in(f, -400)))
    ) {
        prop_assume!(tail.degree().unwrap() >= 1);
        let x = fold(&w, &tail).unwrap();
        let e = cf_expand(&x, w.len());
        prop_assert_eq!(e.word, w);
    }
}
