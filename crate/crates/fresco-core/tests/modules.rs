use std::collections::BTreeMap;

use fresco_core::matrix::Matrix;
use fresco_core::module::{ClosureSet, SubModule};
use fresco_core::rational::{q, qf};
use fresco_core::{Ambient, ExponentClass, FrescoError, Gen, LogMonomial, RationalPolynomial, XiElement, Q};
use proptest::prelude::*;

fn cls(a: Q) -> ExponentClass {
    ExponentClass::new(a).unwrap()
}

fn amb(alphas: &[Q], log_bound: usize, dim: usize) -> Ambient {
    Ambient::new(alphas.iter().cloned().map(cls).collect(), log_bound, dim)
}

fn gen(a: &Ambient, d: usize, xs: &[XiElement], g: usize) -> SubModule {
    SubModule::generate(a, d, xs, ClosureSet::AB, g).unwrap()
}

/// Growth of `dim (B[a]x mod s^{L+1})` in `L`, counted from the words `a^i b^j x`; needs
/// `cert(x) ≥ 2L + 3`, and `L` past the point where the growth settles, which can take `L` up to
/// the rank.
fn rank_by_dimension(x: &XiElement, l: usize) -> usize {
    let dim = |l: usize| {
        let mut cols: BTreeMap<LogMonomial, usize> = BTreeMap::new();
        let mut rows = Vec::new();
        for i in 0..=l + 1 {
            for j in 0..=l + 1 - i {
                let y = x.act_n(Gen::A, i).unwrap().act_n(Gen::B, j).unwrap();
                rows.push(y.terms().iter().filter(|(t, _)| t.m <= l).map(|(t, c)| (t.clone(), c.clone())).collect::<Vec<_>>());
            }
        }
        for r in &rows {
            for (t, _) in r {
                let n = cols.len();
                cols.entry(t.clone()).or_insert(n);
            }
        }
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (i, r) in rows.iter().enumerate() {
            for (t, c) in r {
                m[(i, cols[t])] = c.clone();
            }
        }
        m.rank()
    };
    dim(l + 1) - dim(l)
}

fn phi2() -> (Ambient, XiElement) {
    let a = amb(&[qf(1, 2)], 2, 1);
    let x = XiElement::monomial(&a, 40, qf(1, 2), 1, 2, 0)
        .unwrap()
        .add(&XiElement::monomial(&a, 40, qf(1, 2), 0, 0, 0).unwrap());
    (a, x)
}

#[test]
fn generation_examples() {
    let a = amb(&[qf(1, 2)], 1, 1);
    let x = XiElement::monomial(&a, 20, qf(1, 2), 0, 1, 0).unwrap();
    let theme = gen(&a, 20, std::slice::from_ref(&x), 6);
    assert_eq!(theme.b_rank().unwrap(), 2);
    assert_eq!(rank_by_dimension(&x, 8), 2);
    let e = XiElement::monomial(&a, 20, qf(1, 2), 0, 0, 0).unwrap();
    let ea = gen(&a, 20, std::slice::from_ref(&e), 6);
    assert_eq!(ea.b_rank().unwrap(), 1);
    assert_eq!(rank_by_dimension(&e, 8), 1);
    assert!(gen(&a, 20, &[], 6).is_zero());
    assert_eq!(gen(&a, 20, &[], 6).b_rank().unwrap(), 0);
}

#[test]
fn phi2_module_rank_matches_dimension_count() {
    let (a, x) = phi2();
    let m = gen(&a, 40, &[x.clone().truncate(20)], 8);
    assert_eq!(m.b_rank().unwrap(), 3);
    assert_eq!(rank_by_dimension(&x, 10), 3);
}

#[test]
fn saturation_examples() {
    let a = amb(&[qf(1, 2)], 1, 1);
    let x = XiElement::monomial(&a, 20, qf(1, 2), 0, 1, 0).unwrap();
    let e0 = XiElement::monomial(&a, 20, qf(1, 2), 0, 0, 0).unwrap();
    let theme = gen(&a, 20, std::slice::from_ref(&x), 6);
    let sat = theme.saturate().unwrap();
    let by_hand = gen(&a, 20, &[x, e0.clone()], 6);
    assert!(sat.same_span(&by_hand).unwrap());
    assert!(!theme.contains(&e0).unwrap());
    assert_eq!(sat.b_rank().unwrap(), 2);
    assert!(sat.saturate().unwrap().same_span(&sat).unwrap());
    assert!(sat.is_simple_pole());
    assert_eq!(sat.codim_exponent(&theme).unwrap(), Some(1));
    let ea = gen(&a, 20, &[e0], 6);
    assert!(ea.is_simple_pole());
    assert!(ea.saturate().unwrap().same_span(&ea).unwrap());
}

#[test]
fn simple_pole_of_phi2_module() {
    let (a, x) = phi2();
    let m = gen(&a, 40, &[x], 8);
    assert!(!m.is_simple_pole());
}

#[test]
fn normalization_examples() {
    let (a, x) = phi2();
    let e = gen(&a, 30, &[x.truncate(30)], 6);
    let be = e.b_power(1);
    assert!(be.normalize_in(&e).unwrap().same_span(&e.truncate(be.normalize_in(&e).unwrap().level())).unwrap());
    let s1 = e.s_layer(1).unwrap();
    assert!(s1.is_normal_in(&e).unwrap());
    let n = s1.normalize_in(&e).unwrap();
    assert!(n.same_span(&s1.truncate(n.level())).unwrap());
    // the normalization of b·S_2 recovers S_2
    let s2 = e.s_layer(2).unwrap();
    let n = s2.b_power(1).normalize_in(&e).unwrap();
    assert!(n.same_span(&s2.truncate(n.level())).unwrap());
    assert_eq!(n.b_rank().unwrap(), 2);
}

#[test]
fn bernstein_examples() {
    let (a, x) = phi2();
    let m = gen(&a, 40, &[x], 8);
    let b = m.bernstein().unwrap();
    assert_eq!(b.characteristic, RationalPolynomial::from_roots(&[qf(-3, 2), qf(-3, 2), qf(-1, 2)]));
    assert_eq!(m.nilpotent_order(), 3);
    let hb = m.higher_bernsteins().unwrap();
    assert_eq!(hb, vec![RationalPolynomial::linear(&qf(-1, 2)), RationalPolynomial::linear(&qf(-3, 2)), RationalPolynomial::linear(&qf(-3, 2))]);
    assert_eq!(m.s_layer(1).unwrap().bernstein().unwrap().minimal, RationalPolynomial::linear(&qf(-5, 2)));
    assert_eq!(m.higher_bernstein(4), Err(FrescoError::IndexOutOfRange { index: 4, max: 3 }));

    let a = amb(&[qf(1, 2)], 1, 1);
    let theme = gen(&a, 20, &[XiElement::monomial(&a, 20, qf(1, 2), 0, 1, 0).unwrap()], 6);
    assert_eq!(theme.bernstein().unwrap().minimal, RationalPolynomial::from_roots(&[qf(-1, 2), qf(-1, 2)]));
    let ea = gen(&a, 20, &[XiElement::monomial(&a, 20, qf(1, 2), 0, 0, 0).unwrap()], 6);
    let bp = ea.bernstein().unwrap();
    assert_eq!(bp.minimal, RationalPolynomial::linear(&qf(-1, 2)));
    assert_eq!(bp.characteristic, bp.minimal);
    assert_eq!(ea.higher_bernstein(1).unwrap(), bp.minimal);
}

#[test]
fn two_generator_example() {
    // s^{β-1} Log s ⊗ v_1 and s^{γ-1} ⊗ v_2
    let (beta, gamma) = (qf(1, 3), qf(3, 4));
    let a = amb(&[beta.clone(), gamma.clone()], 1, 2);
    let x = XiElement::monomial(&a, 24, beta.clone(), 0, 1, 0).unwrap();
    let y = XiElement::monomial(&a, 24, gamma.clone(), 0, 0, 1).unwrap();
    let e = gen(&a, 24, &[x, y], 6);
    assert_eq!(e.b_rank().unwrap(), 3);
    let b1 = e.higher_bernstein(1).unwrap();
    assert_eq!(b1, RationalPolynomial::from_roots(&[-beta.clone(), -gamma.clone()]));
    assert_eq!(e.higher_bernstein(2).unwrap(), RationalPolynomial::linear(&-beta.clone()));
    let pb = e.primitive_quotient(&cls(beta.clone()));
    assert_eq!(pb.b_rank().unwrap(), 2);
    assert_eq!(pb.bernstein().unwrap().minimal, RationalPolynomial::from_roots(&[-beta.clone(), -beta]));
    let pg = e.primitive_quotient(&cls(gamma.clone()));
    assert_eq!(pg.bernstein().unwrap().minimal, RationalPolynomial::linear(&-gamma));
}

#[test]
fn quotient_examples() {
    let (a, x) = phi2();
    let e = gen(&a, 30, &[x.truncate(30)], 6);
    let zero = SubModule::empty(e.frame().clone(), e.level(), ClosureSet::AB, e.guard());
    let whole = e.quotient(&zero).unwrap();
    assert_eq!(whole.b_rank().unwrap(), 3);
    assert_eq!(whole.bernstein().unwrap(), e.bernstein().unwrap());
    assert!(e.quotient(&e).unwrap().is_zero().unwrap());
    // E/S_1(E) against its realization N(E)
    let s1 = e.s_layer(1).unwrap();
    let g = e.quotient(&s1).unwrap();
    let ne = e.nil_image(1);
    assert_eq!(g.b_rank().unwrap(), ne.b_rank().unwrap());
    assert_eq!(g.bernstein().unwrap().characteristic, ne.bernstein().unwrap().characteristic);
    for h in 1..=2 {
        let lhs = ne.s_layer(h).unwrap();
        let rhs = e.s_layer(h + 1).unwrap().nil_image(1);
        assert!(lhs.same_span(&rhs.truncate(lhs.level())).unwrap(), "h={h}");
    }
    let b1 = e.b_power(1);
    assert!(matches!(e.quotient(&b1.s_layer(1).unwrap().b_power(1)), Err(FrescoError::NotNormal)));
}

#[test]
fn layer_ranks_do_not_increase() {
    let a = amb(&[qf(1, 2), q(1)], 3, 1);
    let x = XiElement::monomial(&a, 24, qf(1, 2), 0, 3, 0)
        .unwrap()
        .add(&XiElement::monomial(&a, 24, q(1), 1, 2, 0).unwrap())
        .add(&XiElement::monomial(&a, 24, qf(1, 2), 2, 1, 0).unwrap());
    let m = gen(&a, 24, &[x], 6);
    let f = m.semisimple_filtration().unwrap();
    let ranks: Vec<usize> = f.iter().map(|s| s.b_rank().unwrap()).collect();
    let steps: Vec<usize> = ranks.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(steps.windows(2).all(|w| w[1] <= w[0]), "{ranks:?}");
}

const POOL: [(i64, i64); 4] = [(1, 2), (1, 3), (2, 3), (1, 1)];

fn arb_module() -> impl Strategy<Value = (Ambient, Vec<XiElement>)> {
    let term = (0usize..4, 0usize..3, 0usize..3, 0usize..2, -3i64..=3);
    let elem = prop::collection::vec(term, 1..4);
    prop::collection::vec(elem, 1..3).prop_map(|gs| {
        let a = amb(&POOL.iter().map(|&(n, d)| qf(n, d)).collect::<Vec<_>>(), 2, 2);
        let xs = gs
            .into_iter()
            .map(|ts| {
                let terms = ts.into_iter().filter(|t| t.4 != 0).map(|(c, m, j, k, n)| {
                    let (an, ad) = POOL[c];
                    let j = if an == ad { j.max(1) } else { j };
                    (LogMonomial { cls: cls(qf(an, ad)), m, j, k }, q(n))
                });
                XiElement::from_terms(a.clone(), 28, terms).unwrap()
            })
            .collect();
        (a, xs)
    })
}

fn hb_or_one(m: &SubModule, j: usize) -> RationalPolynomial {
    if j > m.nilpotent_order() {
        RationalPolynomial::one()
    } else {
        m.higher_bernstein(j).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn higher_bernsteins_divide_and_cover((a, xs) in arb_module()) {
        let m = gen(&a, 22, &xs, 6);
        let b = m.bernstein().unwrap().minimal;
        let hb = m.higher_bernsteins().unwrap();
        for h in &hb {
            prop_assert!(h.divides(&b));
            prop_assert!(h.is_square_free_split());
        }
        for f in b.factor().unwrap() {
            let levels = hb.iter().filter(|h| h.is_root(&f.root)).count();
            prop_assert!(levels >= f.mult);
        }
    }

    #[test]
    fn saturation_commutes_with_primitive_part((a, xs) in arb_module()) {
        let m = gen(&a, 22, &xs, 6);
        let sat = m.saturate().unwrap();
        for c in m.classes() {
            let lhs = m.primitive_quotient(&c).saturate().unwrap();
            let rhs = sat.primitive_quotient(&c);
            prop_assert!(lhs.same_span(&rhs).unwrap());
            let bp = rhs.bernstein().unwrap().minimal;
            let want = RationalPolynomial::from_roots(
                &sat.bernstein().unwrap().minimal.factor().unwrap().into_iter()
                    .filter(|f| fresco_core::xi::shift_of(&c, &f.root).is_some())
                    .flat_map(|f| std::iter::repeat_n(f.root, f.mult))
                    .collect::<Vec<_>>(),
            );
            prop_assert_eq!(bp, want);
        }
    }

    #[test]
    fn primitive_splitting_of_higher_bernsteins((a, xs) in arb_module()) {
        let sat = gen(&a, 22, &xs, 6).saturate().unwrap();
        for c in sat.classes() {
            let pa = sat.primitive_quotient(&c);
            let rest = sat.complement_part(&c).unwrap();
            for j in 1..=sat.nilpotent_order() {
                prop_assert_eq!(hb_or_one(&sat, j), hb_or_one(&rest, j).mul(&hb_or_one(&pa, j)));
            }
        }
    }

    #[test]
    fn layers_of_submodules((a, xs) in arb_module()) {
        let m = gen(&a, 22, &xs, 6);
        let g = gen(&a, 22, &xs[..1], 6);
        for j in 0..=m.nilpotent_order() {
            let lhs = g.s_layer(j).unwrap();
            let rhs = m.s_layer(j).unwrap().intersect(&g).unwrap();
            prop_assert!(lhs.truncate(rhs.level()).same_span(&rhs).unwrap());
        }
    }

    #[test]
    fn rank_counts_agree((a, xs) in arb_module()) {
        let m = gen(&a, 22, &xs[..1], 6);
        prop_assert_eq!(m.b_rank().unwrap(), rank_by_dimension(&xs[0], 12));
    }
}

