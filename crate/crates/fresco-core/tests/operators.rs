use fresco_core::ops::{ABOperator, BSeries, StructureWord, WordFactor};
use fresco_core::rational::{one, q, qf, zero};
use fresco_core::{Ambient, ExponentClass, FrescoError, Gen, LogMonomial, RationalPolynomial, XiElement, Q};
use proptest::prelude::*;

const T: usize = 16;

fn a() -> ABOperator {
    ABOperator::a(T)
}

fn b() -> ABOperator {
    ABOperator::b(T)
}

fn theme_ambient() -> Ambient {
    Ambient::new(vec![ExponentClass::new(q(1)).unwrap()], 1, 1)
}

#[test]
fn commutator_is_b_squared() {
    let c = a().compose(&b()).sub(&b().compose(&a()));
    let want = ABOperator::from_rows(vec![vec![zero(), zero(), one()]], T);
    assert!(c.same_as(&want));
}

#[test]
fn product_of_conjugate_linears() {
    let p = a().add(&b()).compose(&a().sub(&b()));
    let want = a().pow(2).sub(&b().pow(2).scale(&q(2)));
    assert!(p.same_as(&want));
    assert!(p.compose(&ABOperator::identity(T)).same_as(&p));
}

#[test]
fn squared_log_is_annihilated() {
    let p = StructureWord::linear(&[q(2), q(1)]).unwrap().expand(T).unwrap();
    let x = XiElement::monomial(&theme_ambient(), 12, q(1), 0, 2, 0).unwrap();
    assert!(p.apply(&x).unwrap().is_zero());
    assert!(ABOperator::identity(T).apply(&x).unwrap().same_as(&x));
}

#[test]
fn cubic_word_on_s_log_squared() {
    for nu in 1..=6 {
        let p = StructureWord::linear(&[q(nu), q(2), q(1)]).unwrap().expand(T).unwrap();
        let x = XiElement::monomial(&theme_ambient(), 12, q(1), 1, 2, 0).unwrap();
        let y = p.apply(&x).unwrap();
        for (t, c) in y.terms() {
            if t.j == 2 {
                assert_eq!(t.m, 4, "nu={nu}");
                assert_eq!(c, &qf(4 - nu, 24), "nu={nu}");
            }
        }
        let top = LogMonomial { cls: ExponentClass::new(q(1)).unwrap(), m: 4, j: 2, k: 0 };
        assert_eq!(y.coeff(&top), qf(4 - nu, 24));
    }
}

#[test]
fn linear_division_examples() {
    let p = StructureWord::linear(&[q(2), q(1)]).unwrap().expand(T).unwrap();
    let (qt, r) = p.divide_linear(&q(1));
    assert!(qt.same_as(&ABOperator::linear(&q(2), T)));
    assert!(r.is_zero());
    let (qt, r) = a().pow(2).divide_linear(&q(1));
    assert!(qt.same_as(&a().add(&b())));
    assert_eq!(r.coeffs()[..3], [zero(), zero(), q(2)]);
    let s = BSeries::new(vec![q(1), q(-2), qf(1, 3)], T);
    let (qt, r) = ABOperator::from_series(s.clone()).divide_linear(&qf(5, 2));
    assert!(qt.is_zero());
    assert_eq!(r, s);
}

#[test]
fn homogeneous_bernstein_examples() {
    let lam = qf(5, 7);
    assert_eq!(ABOperator::linear(&lam, T).bernstein_homogeneous().unwrap(), RationalPolynomial::linear(&-lam));
    let p = StructureWord::linear(&[q(2), q(1)]).unwrap().expand(T).unwrap();
    assert_eq!(p.bernstein_homogeneous().unwrap(), RationalPolynomial::from_roots(&[q(-1), q(-1)]));
    assert_eq!(b().pow(2).bernstein_homogeneous(), Err(FrescoError::NotMonic));
}

#[test]
fn word_with_units_round_trips() {
    let s = vec![one(), one()];
    let w = StructureWord::new(vec![WordFactor::Linear(q(3)), WordFactor::Unit { series: s.clone(), inverted: false }])
        .unwrap()
        .expand(T)
        .unwrap();
    let inv = BSeries::new(s, T).inverse().unwrap();
    let back = w.compose(&ABOperator::from_series(inv));
    assert!(back.same_as(&ABOperator::linear(&q(3), T)));
    assert_eq!(StructureWord::linear(&[q(3), q(2), q(1)]).unwrap().expand(T).unwrap().a_degree(), 3);
}

#[test]
fn binomial_exercise() {
    for n in 1..=8usize {
        let lhs = a().add(&b()).pow(n);
        let rhs = a().pow(n - 1).compose(&a().add(&b().scale(&q(n as i64))));
        assert!(lhs.same_as(&rhs), "q={n}");
    }
}

/// `ρ_P(β)` with `P e_β = ρ_P(β) e_{β+k}`, from `b^p a^q e_β = e_{β+q+p} / ∏_{i<p} (β+q+i)`.
fn rho(p: &ABOperator, beta: &Q) -> Q {
    p.terms().fold(zero(), |acc, (qd, pp, c)| {
        let den = (0..pp).fold(one(), |d, i| d * (beta + q((qd + i) as i64)));
        acc + c / den
    })
}

fn arb_lambdas() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((1i64..30, 1i64..7).prop_map(|(n, d)| qf(n, d)), 1..5)
}

fn arb_operator() -> impl Strategy<Value = ABOperator> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, 1..5), 1..4)
        .prop_map(|rows| ABOperator::from_rows(rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect(), T))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn linear_word_bernstein(ls in arb_lambdas()) {
        let k = ls.len();
        let p = StructureWord::linear(&ls).unwrap().expand(T).unwrap();
        let got = p.bernstein_homogeneous().unwrap();
        let roots: Vec<Q> = ls.iter().enumerate().map(|(j, l)| q((k - 1 - j) as i64) - l).collect();
        prop_assert_eq!(&got, &RationalPolynomial::from_roots(&roots));
        for i in 0..=k {
            let x = qf(2 * i as i64 + 1, 3 + i as i64) + q(k as i64);
            let sign = if k % 2 == 0 { one() } else { -one() };
            let prod = (0..k).fold(one(), |acc, t| acc * (q(t as i64) - &x));
            prop_assert_eq!(got.eval(&x), sign * rho(&p, &-x.clone()) * prod);
        }
    }

    #[test]
    fn division_round_trip(p in arb_operator(), n in -9i64..10, d in 1i64..5) {
        let lam = qf(n, d);
        let (qt, r) = p.divide_linear(&lam);
        let back = qt.compose(&ABOperator::linear(&lam, T)).add(&ABOperator::from_series(r));
        prop_assert!(back.same_as(&p));
    }

    #[test]
    fn action_is_multiplicative(p in arb_operator(), r in arb_operator(), j in 0usize..3, m in 0usize..3) {
        let amb = Ambient::new(vec![ExponentClass::new(qf(2, 3)).unwrap()], 2, 1);
        let x = XiElement::monomial(&amb, 14, qf(2, 3), m, j, 0).unwrap();
        let lhs = p.compose(&r).apply(&x).unwrap();
        let rhs = p.apply(&r.apply(&x).unwrap()).unwrap();
        prop_assert!(lhs.same_as(&rhs));
    }

    #[test]
    fn operator_file_round_trip(p in arb_operator()) {
        let s = serde_json::to_string(&p.to_file()).unwrap();
        let back = ABOperator::from_file(&serde_json::from_str(&s).unwrap()).unwrap();
        prop_assert!(back.same_as(&p));
    }
}

#[test]
fn powers_of_b_on_monomials() {
    let amb = Ambient::new(vec![ExponentClass::new(qf(1, 2)).unwrap()], 0, 1);
    let x = XiElement::monomial(&amb, 12, qf(1, 2), 0, 0, 0).unwrap();
    let y = x.act_n(Gen::B, 3).unwrap();
    // 1 / (1/2 · 3/2 · 5/2)
    let want = XiElement::monomial(&amb, 9, qf(1, 2), 3, 0, 0).unwrap().scale(&qf(8, 15));
    assert!(y.same_as(&want));
    assert!(b().pow(3).apply(&x).unwrap().same_as(&want));
}
