//! The worked rank-two theme example: the operators `P₃`, `P₄`, `R = (a-2b)(a-b)`, a realization
//! of the generator killed by `P₃ + 4⁴P₄`, and the Bernstein data derived from it.

use std::fmt::Write as _;
use std::time::Instant;

use fresco_core::fresco::{kernel_realize, realized_generator};
use fresco_core::module::{ClosureSet, SubModule};
use fresco_core::ops::ABOperator;
use fresco_core::poly::RationalPolynomial;
use fresco_core::rational::{fmt_q, one, q, qf, zero, Q};
use fresco_core::{Ambient, ExponentClass, FrescoError, Gen, LogMonomial, Result, XiElement};
use serde::{Deserialize, Serialize};

/// `ν` in `P₃ = (a - νb)(a - 2b)(a - b)`.
pub const NU: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryItem {
    pub id: String,
    pub description: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryReport {
    pub cert_degree: usize,
    pub items: Vec<RegistryItem>,
    pub wall_ms: u64,
}

impl RegistryReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    /// Expected/computed pairs of the failing items.
    pub fn diff(&self) -> String {
        let mut s = String::new();
        for i in self.items.iter().filter(|i| !i.pass) {
            let _ = writeln!(s, "[{}] {}\n  - expected: {}\n  + computed: {}", i.id, i.description, i.expected, i.computed);
        }
        s
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for i in &self.items {
            let mark = if i.pass { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "{mark} [{}] {}: {}", i.id, i.description, i.computed);
        }
        let _ = writeln!(s, "truncation {}, {} ms", self.cert_degree, self.wall_ms);
        s
    }
}

fn item(id: &str, description: &str, expected: String, computed: String) -> RegistryItem {
    let pass = expected == computed;
    RegistryItem { id: id.into(), description: description.into(), expected, computed, pass }
}

fn lin(lambda: Q, trunc: usize) -> ABOperator {
    ABOperator::linear(&lambda, trunc)
}

fn product(lambdas: &[Q], trunc: usize) -> ABOperator {
    let mut acc = ABOperator::identity(trunc);
    for l in lambdas {
        acc = acc.compose(&lin(l.clone(), trunc));
    }
    acc.with_validity(trunc.saturating_sub(lambdas.len()))
}

pub fn p3(trunc: usize) -> ABOperator {
    product(&[q(NU), q(2), q(1)], trunc)
}

pub fn p4(trunc: usize) -> ABOperator {
    product(&[qf(13, 4), qf(5, 2), qf(7, 4), q(0)], trunc)
}

pub fn r_op(trunc: usize) -> ABOperator {
    product(&[q(2), q(1)], trunc)
}

/// `∏_j (x + λ_j - (k - j))` for `(a - λ_1 b)⋯(a - λ_k b)`.
fn factor_formula(lambdas: &[Q]) -> RationalPolynomial {
    let k = lambdas.len();
    let roots: Vec<Q> = lambdas.iter().enumerate().map(|(j, l)| q((k - 1 - j) as i64) - l).collect();
    RationalPolynomial::from_roots(&roots)
}

/// Checks `(-b)^p B_P(-b⁻¹a) = P` on `s^{β-1}` for `p + 1` exponents `β` of class 1/3.
fn inverse_substitution_identity(p: &ABOperator, bp: &RationalPolynomial) -> Result<bool> {
    let deg = bp.degree();
    let alpha = qf(1, 3);
    let amb = Ambient::new(vec![ExponentClass::new(alpha.clone())?], 0, 1);
    for m in 0..=deg {
        let e = XiElement::monomial(&amb, 24, alpha.clone(), m, 0, 0)?;
        let beta = &alpha + q(m as i64);
        let sign = if deg.is_multiple_of(2) { one() } else { -one() };
        let rhs = e.act_n(Gen::B, deg)?.scale(&(sign * bp.eval(&-beta)));
        if !p.apply(&e)?.same_as(&rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn theme_ambient() -> Result<Ambient> {
    Ok(Ambient::new(vec![ExponentClass::new(q(1))?], 1, 1))
}

fn mono(m: usize, j: usize) -> Result<LogMonomial> {
    Ok(LogMonomial { cls: ExponentClass::new(q(1))?, m, j, k: 0 })
}

fn show(p: &RationalPolynomial) -> String {
    p.to_string()
}

/// Runs every item at truncation `cert`; mismatches are data, computation errors propagate.
pub fn run_registry(cert: usize) -> Result<RegistryReport> {
    let start = Instant::now();
    let trunc = cert + 4;
    let amb = theme_ambient()?;
    let mut items = Vec::new();

    // P(s (Log s)^2) = 2 P e(1,1,2), read against s^4 (Log s)^2 = 2 e(1,4,2)
    let x = XiElement::monomial(&amb, cert, q(1), 1, 2, 0)?;
    let y = p3(trunc).apply(&x)?;
    let top = y.coeff(&mono(4, 2)?);
    let stray = y.terms().keys().any(|t| t.j == 2 && t.m != 4);
    items.push(item(
        "a",
        "coefficient of s^4 (Log s)^2 in P3(s (Log s)^2), nu = 3",
        format!("{} only", fmt_q(&qf(4 - NU, 24))),
        format!("{}{}", fmt_q(&top), if stray { " with other (Log s)^2 terms" } else { " only" }),
    ));

    // kernel of P3 + 4^4 P4
    let op = p3(trunc).add(&p4(trunc).scale(&q(256)));
    let sols = kernel_realize(&op, &amb, cert)?;
    let e = realized_generator(&sols).ok_or(FrescoError::EmptyKernel)?.clone();
    let uvw: Vec<Q> = [0, 1, 3].iter().map(|&m| mono(m, 2).map(|t| e.coeff(&t))).collect::<Result<_>>()?;
    let nonzero = uvw.iter().all(|c| *c != zero());
    items.push(item(
        "b",
        "u, v, w on (Log s)^2, s (Log s)^2, s^3 (Log s)^2 in the realized generator",
        "uvw != 0".into(),
        if nonzero { "uvw != 0".into() } else { format!("u, v, w = {}", uvw.iter().map(fmt_q).collect::<Vec<_>>().join(", ")) },
    ));
    let killed = op.apply(&e)?.truncate(cert.saturating_sub(4)).is_zero();
    items.push(item("b'", "P3 + 4^4 P4 kills the realized generator", "true".into(), killed.to_string()));

    // homogeneous Bernstein polynomials and the inverse substitution identity
    let r = r_op(trunc);
    let br = r.bernstein_homogeneous()?;
    items.push(item("c", "B of (a-2b)(a-b)", show(&RationalPolynomial::from_roots(&[q(-1), q(-1)])), show(&br)));
    let b3 = p3(trunc).bernstein_homogeneous()?;
    items.push(item("c'", "B of P3 against the factor formula", show(&factor_formula(&[q(NU), q(2), q(1)])), show(&b3)));
    let b4 = p4(trunc).bernstein_homogeneous()?;
    let l4 = [qf(13, 4), qf(5, 2), qf(7, 4), q(0)];
    items.push(item("c''", "B of P4 against the factor formula", show(&factor_formula(&l4)), show(&b4)));
    let fid = inverse_substitution_identity(&r, &br)? && inverse_substitution_identity(&p3(trunc), &b3)? && inverse_substitution_identity(&p4(trunc), &b4)?;
    items.push(item("c'''", "(-b)^p B_P(-b^-1 a) = P on s^(beta-1) for R, P3, P4", "true".into(), fid.to_string()));

    // b on Log s and (Log s)^2, with (Log s)^j = j! e(1,0,j)
    let log1 = XiElement::monomial(&amb, cert, q(1), 0, 1, 0)?;
    let s_log1 = XiElement::monomial(&amb, cert, q(1), 1, 1, 0)?;
    let log2 = XiElement::monomial(&amb, cert, q(1), 0, 2, 0)?.scale(&q(2));
    let s_log2 = XiElement::monomial(&amb, cert, q(1), 1, 2, 0)?.scale(&q(2));
    let ok1 = log1.act(Gen::B)?.same_as(&s_log1);
    let ok2 = log2.act(Gen::B)?.same_as(&s_log2.sub(&s_log1.scale(&q(2))));
    items.push(item("d", "b(Log s) = s Log s", "true".into(), ok1.to_string()));
    items.push(item("d'", "b((Log s)^2) = s (Log s)^2 - 2 s Log s", "true".into(), ok2.to_string()));

    // the theme itself and the sub-theme generated by R e
    let theme = SubModule::generate(&amb, cert, std::slice::from_ref(&e), ClosureSet::AB, 8)?;
    let hb = theme.higher_bernsteins()?;
    items.push(item("f", "B of the realized theme", show(&RationalPolynomial::from_roots(&[q(-1), q(-1)])), show(&theme.bernstein()?.characteristic)));
    items.push(item("f'", "second Bernstein polynomial of the realized theme", show(&RationalPolynomial::linear(&q(-1))), hb.get(1).map_or("none".into(), show)));

    let re = r.apply(&e)?;
    let k = r.a_degree() as i64;
    let j = (1..=3i64).find(|&i| !br.is_root(&q(-i))).ok_or(FrescoError::NoRoot)?;
    let sub = SubModule::generate(&amb, re.cert_degree(), std::slice::from_ref(&re), ClosureSet::AB, 8)?;
    let rank = sub.b_rank()?;
    items.push(item("e", "rank of B[a] R e", "2".into(), rank.to_string()));
    let w3 = re.coeff(&mono(3, 2)?);
    items.push(item("e'", "R e has a term in s^3 (Log s)^2", "true".into(), (w3 != zero()).to_string()));
    let second = if sub.nilpotent_order() >= 2 { show(&sub.higher_bernstein(2)?) } else { "none".into() };
    items.push(item(
        "e''",
        "second Bernstein polynomial of B[a] R e against -(k + j), j the first of 1, 2, 3 with B_R(-j) != 0",
        show(&RationalPolynomial::linear(&q(-(k + j)))),
        second,
    ));

    Ok(RegistryReport { cert_degree: cert, items, wall_ms: start.elapsed().as_millis() as u64 })
}

/// [`run_registry`], failing with the diff when an item disagrees.
pub fn reproduce_theme(cert: usize) -> Result<RegistryReport> {
    let rep = run_registry(cert)?;
    if rep.all_passed() {
        Ok(rep)
    } else {
        Err(FrescoError::RegistryMismatch(rep.diff()))
    }
}

/// `φ₂ = s^{1/2}(Log s)²/2 + s^{-1/2}` in class 1/2, the generator of the rank-three example.
pub fn phi2(cert: usize) -> Result<XiElement> {
    let alpha = qf(1, 2);
    let amb = Ambient::new(vec![ExponentClass::new(alpha.clone())?], 2, 1);
    Ok(XiElement::monomial(&amb, cert, alpha.clone(), 1, 2, 0)?.add(&XiElement::monomial(&amb, cert, alpha, 0, 0, 0)?))
}

/// Bernstein data of `B[a]φ₂`, where `-3/2` is a root of the second and third layers only.
pub fn run_phi2(cert: usize) -> Result<RegistryReport> {
    let start = Instant::now();
    let x = phi2(cert)?;
    let f = SubModule::generate(&x.ambient().clone(), cert, &[x], ClosureSet::AB, 8)?;
    let (h, th) = (qf(-1, 2), qf(-3, 2));
    let hb = f.higher_bernsteins()?;
    let level = |j: usize| hb.get(j - 1).map_or("none".into(), show);
    let s1 = f.s_layer(1)?;
    let mut items = vec![
        item("w1", "rank", "3".into(), f.b_rank()?.to_string()),
        item(
            "w2",
            "characteristic Bernstein polynomial",
            show(&RationalPolynomial::from_roots(&[th.clone(), th.clone(), h.clone()])),
            show(&f.bernstein()?.characteristic),
        ),
        item("w3", "B^1", show(&RationalPolynomial::linear(&h)), level(1)),
        item("w4", "B^2", show(&RationalPolynomial::linear(&th)), level(2)),
        item("w5", "B^3", show(&RationalPolynomial::linear(&th)), level(3)),
        item("w6", "nilpotent order", "3".into(), f.nilpotent_order().to_string()),
    ];
    let e52 = format!("rank 1, simple pole, B = {}", show(&RationalPolynomial::linear(&qf(-5, 2))));
    let got = format!(
        "rank {}, {}, B = {}",
        s1.b_rank()?,
        if s1.is_simple_pole() { "simple pole" } else { "no simple pole" },
        show(&s1.bernstein()?.characteristic)
    );
    items.push(item("w7", "S_1 against E_{5/2}", e52, got));
    Ok(RegistryReport { cert_degree: cert, items, wall_ms: start.elapsed().as_millis() as u64 })
}
