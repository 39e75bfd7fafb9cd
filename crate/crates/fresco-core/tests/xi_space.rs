use fresco_core::rational::{q, qf};
use fresco_core::{Ambient, ExponentClass, Gen, LogMonomial, XiElement, Q};
use proptest::prelude::*;

const D: usize = 30;

fn cls(a: Q) -> ExponentClass {
    ExponentClass::new(a).unwrap()
}

fn amb() -> Ambient {
    Ambient::new(vec![cls(qf(1, 2)), cls(qf(1, 3)), cls(q(1))], 3, 2)
}

fn e(alpha: Q, m: usize, j: usize) -> XiElement {
    XiElement::monomial(&amb(), D, alpha, m, j, 0).unwrap()
}

/// `b e_{β,j} = (e_{β+1,j} - b e_{β,j-1}) / β`, unrolled by recursion.
fn b_by_recursion(alpha: &Q, m: usize, j: usize, k: usize) -> XiElement {
    let beta = alpha + q(m as i64);
    let up = XiElement::monomial(&amb(), D - 1, alpha.clone(), m + 1, j, k).unwrap();
    let rest = if j == 0 {
        up
    } else {
        up.sub(&b_by_recursion(alpha, m, j - 1, k))
    };
    rest.scale(&(q(1) / beta))
}

#[test]
fn b_action_matches_recursion() {
    for alpha in [qf(1, 2), qf(1, 3), q(1)] {
        for m in 0..4 {
            for j in 0..=3 {
                for k in 0..2 {
                    let x = XiElement::monomial(&amb(), D, alpha.clone(), m, j, k).unwrap();
                    let closed = x.act(Gen::B).unwrap();
                    let rec = b_by_recursion(&alpha, m, j, k);
                    assert!(closed.same_as(&rec), "alpha={alpha} m={m} j={j} k={k}");
                }
            }
        }
    }
}

#[test]
fn theta_on_phi2_generator() {
    let phi2 = e(qf(1, 2), 1, 2).add(&e(qf(1, 2), 0, 0));
    let phi1 = e(qf(1, 2), 1, 1).add(&e(qf(1, 2), 0, 0));
    let lhs = phi2.act(Gen::BInvA).unwrap().sub(&phi2.scale(&qf(3, 2)));
    let rhs = phi1.sub(&e(qf(1, 2), 0, 0).scale(&q(2)));
    assert_eq!(lhs, rhs);
}

#[test]
fn b_on_simple_monomials() {
    let y = e(qf(1, 2), 0, 0).act(Gen::B).unwrap();
    assert!(y.same_as(&e(qf(1, 2), 1, 0).scale(&q(2))));
    let y = e(qf(1, 2), 0, 1).act(Gen::B).unwrap();
    let want = e(qf(1, 2), 1, 1).scale(&q(2)).sub(&e(qf(1, 2), 1, 0).scale(&q(4)));
    assert!(y.same_as(&want));
}

#[test]
fn b_on_squared_log() {
    // (Log s)^2 = 2 e(1,0,2), s (Log s)^2 = 2 e(1,1,2), s Log s = e(1,1,1)
    let log2 = e(q(1), 0, 2).scale(&q(2));
    let s_log2 = e(q(1), 1, 2).scale(&q(2));
    let s_log = e(q(1), 1, 1);
    let y = log2.act(Gen::B).unwrap();
    assert!(y.same_as(&s_log2.sub(&s_log.scale(&q(2)))));
    assert!(e(q(1), 0, 1).act(Gen::B).unwrap().same_as(&s_log));
}

#[test]
fn nilpotent_orders() {
    assert_eq!(e(qf(1, 2), 3, 2).nilpotent_order(), 3);
    assert_eq!(e(q(1), 0, 2).nilpotent_order(), 2);
    assert_eq!(XiElement::zero(amb(), D).nilpotent_order(), 0);
}

#[test]
fn projection_examples() {
    let x = e(qf(1, 2), 0, 1).add(&e(q(1), 0, 1));
    assert_eq!(x.project_class(&cls(qf(1, 2))), e(qf(1, 2), 0, 1));
    assert!(XiElement::zero(amb(), D).project_class(&cls(q(1))).is_zero());
}

fn arb_element() -> impl Strategy<Value = XiElement> {
    let term = (0usize..3, 0usize..4, 0usize..4, 0usize..2, -5i64..=5, 1i64..4);
    prop::collection::vec(term, 0..6).prop_map(|ts| {
        let alphas = [qf(1, 2), qf(1, 3), q(1)];
        let terms = ts.into_iter().map(|(c, m, j, k, n, d)| {
            (LogMonomial { cls: cls(alphas[c].clone()), m, j, k }, qf(n, d))
        });
        XiElement::from_terms(amb(), 12, terms.filter(|(t, _)| !(t.cls.is_one() && t.j == 0))).unwrap()
    })
}

proptest! {
    #[test]
    fn commutation(x in arb_element()) {
        let ab = x.act(Gen::B).unwrap().act(Gen::A).unwrap();
        let ba = x.act(Gen::A).unwrap().act(Gen::B).unwrap();
        let bb = x.act(Gen::B).unwrap().act(Gen::B).unwrap();
        prop_assert!(ab.sub(&ba).same_as(&bb));
    }

    #[test]
    fn b_undoes_theta_into_a(x in arb_element()) {
        let lhs = x.act(Gen::BInvA).unwrap().act(Gen::B).unwrap();
        prop_assert!(lhs.same_as(&x.act(Gen::A).unwrap()));
    }

    #[test]
    fn injective_actions(x in arb_element()) {
        let nz = !x.truncate(x.cert_degree() - 1).is_zero();
        prop_assert_eq!(!x.act(Gen::B).unwrap().is_zero(), nz);
        prop_assert_eq!(!x.act(Gen::A).unwrap().is_zero(), nz);
    }

    #[test]
    fn order_never_grows(x in arb_element()) {
        for g in [Gen::A, Gen::B] {
            prop_assert!(x.act(g).unwrap().nilpotent_order() <= x.nilpotent_order());
        }
        prop_assert_eq!(x.act(Gen::A).unwrap().truncate(10).nilpotent_order(), x.truncate(9).nilpotent_order());
    }

    #[test]
    fn projection_commutes(x in arb_element(), c in 0usize..3) {
        let c = cls([qf(1, 2), qf(1, 3), q(1)][c].clone());
        let p = x.project_class(&c);
        prop_assert_eq!(p.project_class(&c), p.clone());
        for g in [Gen::A, Gen::B, Gen::BInvA] {
            prop_assert!(p.act(g).unwrap().same_as(&x.act(g).unwrap().project_class(&c)));
        }
    }

    #[test]
    fn file_round_trip(x in arb_element()) {
        let s = serde_json::to_string(&x.to_file()).unwrap();
        let back = XiElement::from_file(&serde_json::from_str(&s).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }
}
