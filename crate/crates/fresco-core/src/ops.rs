//! The algebra `B[a]` at finite `b`-order.
//!
//! Operators are kept in the normal form `Σ_q S_q(b) a^q`, series to the left. Products are
//! reduced with `a·S(b) = S(b)·a + b²·S'(b)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{FrescoError, Result};
use crate::poly::{mul_raw, RationalPolynomial};
use crate::rational::{fmt_q, one, parse_q, q, zero, Q};
use crate::xi::{Gen, XiElement};

/// `Σ_{p ≤ order} c_p b^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSeries {
    coeffs: Vec<Q>,
}

impl BSeries {
    pub fn new(mut coeffs: Vec<Q>, trunc_order: usize) -> Self {
        coeffs.resize(trunc_order + 1, zero());
        Self { coeffs }
    }

    pub fn zero(trunc_order: usize) -> Self {
        Self::new(Vec::new(), trunc_order)
    }

    pub fn one(trunc_order: usize) -> Self {
        Self::new(vec![one()], trunc_order)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.coeffs.len();
        let mut out = mul_raw(&self.coeffs, &o.coeffs);
        out.truncate(n);
        Self { coeffs: out }
    }

    /// Truncated reciprocal.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(FrescoError::NonUnitSeries);
        }
        let n = self.coeffs.len();
        let inv0 = one() / c0;
        let mut out = vec![zero(); n];
        out[0] = inv0.clone();
        for k in 1..n {
            let s = (1..=k).fold(zero(), |acc, i| acc + &self.coeffs[i] * &out[k - i]);
            out[k] = -s * &inv0;
        }
        Ok(Self { coeffs: out })
    }

    /// `b²·S'(b)`.
    fn b2_derivative(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![zero(); n];
        for (k, o) in out.iter_mut().enumerate().skip(2) {
            *o = &self.coeffs[k - 1] * q((k - 1) as i64);
        }
        Self { coeffs: out }
    }

    fn add_assign(&mut self, o: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
    }
}

/// An element `Σ_q S_q(b) a^q` of `B[a]`; `b`-coefficients are exact up to `validity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ABOperator {
    trunc: usize,
    validity: usize,
    rows: Vec<BSeries>,
}

impl ABOperator {
    pub fn zero(trunc: usize) -> Self {
        Self { trunc, validity: trunc, rows: Vec::new() }
    }

    pub fn identity(trunc: usize) -> Self {
        Self::from_series(BSeries::one(trunc))
    }

    pub fn from_series(s: BSeries) -> Self {
        let trunc = s.trunc_order();
        Self { trunc, validity: trunc, rows: vec![s] }.trimmed()
    }

    /// From coefficient lists `rows[q][p]` of `b^p a^q`.
    pub fn from_rows(rows: Vec<Vec<Q>>, trunc: usize) -> Self {
        Self { trunc, validity: trunc, rows: rows.into_iter().map(|r| BSeries::new(r, trunc)).collect() }.trimmed()
    }

    pub fn a(trunc: usize) -> Self {
        Self::from_rows(vec![vec![], vec![one()]], trunc)
    }

    pub fn b(trunc: usize) -> Self {
        Self::from_rows(vec![vec![zero(), one()]], trunc)
    }

    /// `a - λb`.
    pub fn linear(lambda: &Q, trunc: usize) -> Self {
        Self::from_rows(vec![vec![zero(), -lambda.clone()], vec![one()]], trunc)
    }

    fn trimmed(mut self) -> Self {
        while self.rows.last().is_some_and(BSeries::is_zero) {
            self.rows.pop();
        }
        self
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc
    }

    pub fn validity(&self) -> usize {
        self.validity
    }

    pub fn with_validity(mut self, v: usize) -> Self {
        self.validity = self.validity.min(v);
        self
    }

    pub fn rows(&self) -> &[BSeries] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Largest `q` with a nonzero row; 0 for the zero operator.
    pub fn a_degree(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    /// Coefficient of `b^p a^q`.
    pub fn coeff(&self, q: usize, p: usize) -> Q {
        self.rows.get(q).and_then(|r| r.coeffs.get(p)).cloned().unwrap_or_else(zero)
    }

    /// Largest `p + q` over nonzero coefficients.
    pub fn total_degree(&self) -> usize {
        self.terms().map(|(q, p, _)| p + q).max().unwrap_or(0)
    }

    /// Nonzero coefficients as `(q, p, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(q, r)| r.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(p, c)| (q, p, c)))
    }

    pub fn add(&self, o: &Self) -> Self {
        let trunc = self.trunc.min(o.trunc);
        let mut rows = vec![BSeries::zero(trunc); self.rows.len().max(o.rows.len())];
        for src in [&self.rows, &o.rows] {
            for (i, r) in src.iter().enumerate() {
                rows[i].add_assign(r);
            }
        }
        Self { trunc, validity: self.validity.min(o.validity), rows }.trimmed()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| BSeries { coeffs: r.coeffs.iter().map(|x| x * c).collect() })
            .collect();
        Self { trunc: self.trunc, validity: self.validity, rows }.trimmed()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-one()))
    }

    /// `a·self`.
    fn left_mul_a(&self) -> Self {
        let mut rows = vec![BSeries::zero(self.trunc); self.rows.len() + 1];
        for (i, u) in self.rows.iter().enumerate() {
            rows[i + 1].add_assign(u);
            rows[i].add_assign(&u.b2_derivative());
        }
        Self { trunc: self.trunc, validity: self.validity, rows }.trimmed()
    }

    /// `S(b)·self`.
    fn left_mul_series(&self, s: &BSeries) -> Self {
        let rows = self.rows.iter().map(|r| s.mul(r)).collect();
        Self { trunc: self.trunc, validity: self.validity, rows }.trimmed()
    }

    /// Normal form of `self·o`.
    pub fn compose(&self, o: &Self) -> Self {
        let trunc = self.trunc.min(o.trunc);
        let mut acc = Self::zero(trunc);
        let mut aq = o.truncated(trunc);
        for (qd, s) in self.rows.iter().enumerate() {
            if qd > 0 {
                aq = aq.left_mul_a();
            }
            if !s.is_zero() {
                acc = acc.add(&aq.left_mul_series(&BSeries::new(s.coeffs.clone(), trunc)));
            }
        }
        acc.validity = self.validity.min(o.validity).min(trunc);
        acc
    }

    fn truncated(&self, trunc: usize) -> Self {
        if trunc == self.trunc {
            return self.clone();
        }
        Self {
            trunc,
            validity: self.validity.min(trunc),
            rows: self.rows.iter().map(|r| BSeries::new(r.coeffs[..=trunc.min(r.trunc_order())].to_vec(), trunc)).collect(),
        }
        .trimmed()
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(self.trunc), |acc, _| acc.compose(self))
    }

    /// Equality of all coefficients of `b`-order within the common validity.
    pub fn same_as(&self, o: &Self) -> bool {
        let v = self.validity.min(o.validity);
        let qmax = self.rows.len().max(o.rows.len());
        (0..qmax).all(|qd| (0..=v).all(|p| self.coeff(qd, p) == o.coeff(qd, p)))
    }

    /// `Σ_q S_q(b) a^q x`.
    pub fn apply(&self, x: &XiElement) -> Result<XiElement> {
        let total = self.total_degree();
        if x.cert_degree() < total {
            return Err(FrescoError::GuardExhausted(format!(
                "operator of degree {total} applied at certified degree {}",
                x.cert_degree()
            )));
        }
        let mut out = XiElement::zero(x.ambient().clone(), x.cert_degree() - total);
        let mut aq = x.clone();
        for (qd, row) in self.rows.iter().enumerate() {
            if qd > 0 {
                aq = aq.act(Gen::A)?;
            }
            let pmax = row.coeffs.iter().rposition(|c| !c.is_zero());
            let Some(pmax) = pmax else { continue };
            let mut y = aq.clone();
            for (p, c) in row.coeffs.iter().enumerate().take(pmax + 1) {
                if p > 0 {
                    y = y.act(Gen::B)?;
                }
                if !c.is_zero() {
                    out = out.add(&y.scale(c));
                }
            }
        }
        if let Some(m0) = x.terms().keys().map(|t| t.m).min() {
            out = out.truncate(m0 + self.validity);
        }
        Ok(out)
    }

    /// `self = Q·(a - λb) + R` with `R ∈ B`.
    pub fn divide_linear(&self, lambda: &Q) -> (Self, BSeries) {
        let lin = Self::linear(lambda, self.trunc);
        let mut rest = self.clone();
        let mut quot = Self::zero(self.trunc);
        while rest.a_degree() >= 1 {
            let d = rest.a_degree();
            let mut rows = vec![BSeries::zero(self.trunc); d];
            rows[d - 1] = rest.rows[d].clone();
            let t = Self { trunc: self.trunc, validity: self.trunc, rows };
            rest = rest.sub(&t.compose(&lin));
            debug_assert!(rest.rows.len() <= d);
            quot = quot.add(&t);
        }
        quot.validity = self.validity;
        let r = rest.rows.first().cloned().unwrap_or_else(|| BSeries::zero(self.trunc));
        (quot, r)
    }

    /// `B_P` for `P` homogeneous in `(a,b)` and monic in `a`.
    pub fn bernstein_homogeneous(&self) -> Result<RationalPolynomial> {
        let mut terms = self.terms();
        let Some((q0, p0, _)) = terms.next() else { return Err(FrescoError::NotMonic) };
        let deg = p0 + q0;
        if self.terms().any(|(qd, p, _)| p + qd != deg) {
            return Err(FrescoError::NotHomogeneous);
        }
        if self.a_degree() != deg || !self.coeff(deg, 0).is_one() {
            return Err(FrescoError::NotMonic);
        }
        // num(β) = Σ_q c_q ∏_{i<q} (β+i); B_P(x) = (-1)^p num(-x)
        let mut num = vec![zero()];
        let mut rising = vec![one()];
        for qd in 0..=deg {
            let c = self.coeff(qd, deg - qd);
            if !c.is_zero() {
                if num.len() < rising.len() {
                    num.resize(rising.len(), zero());
                }
                for (a, r) in num.iter_mut().zip(&rising) {
                    *a += &c * r;
                }
            }
            rising = mul_raw(&rising, &[q(qd as i64), one()]);
        }
        let coeffs: Vec<Q> = num
            .iter()
            .enumerate()
            .map(|(i, c)| if (i + deg) % 2 == 0 { c.clone() } else { -c.clone() })
            .collect();
        Ok(RationalPolynomial::from_coeffs(coeffs).expect("monic of degree p"))
    }

    pub fn to_file(&self) -> OperatorFile {
        OperatorFile {
            trunc_order: self.trunc,
            rows: self
                .rows
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.is_zero())
                .map(|(i, r)| {
                    let last = r.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
                    (i.to_string(), r.coeffs[..=last].iter().map(fmt_q).collect())
                })
                .collect(),
        }
    }

    pub fn from_file(f: &OperatorFile) -> Result<Self> {
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for (k, v) in &f.rows {
            let qd: usize = k.parse().map_err(|_| FrescoError::Parse(format!("row key {k:?}")))?;
            if v.len() > f.trunc_order + 1 {
                return Err(FrescoError::Parse(format!("row {qd} longer than trunc_order + 1")));
            }
            if rows.len() <= qd {
                rows.resize(qd + 1, Vec::new());
            }
            rows[qd] = v.iter().map(|s| parse_q(s)).collect::<Result<_>>()?;
        }
        Ok(Self::from_rows(rows, f.trunc_order))
    }
}

impl fmt::Display for ABOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms()
            .map(|(qd, p, c)| {
                let mut s = fmt_q(c);
                if p > 0 {
                    s += &format!("·b^{p}");
                }
                if qd > 0 {
                    s += &format!("·a^{qd}");
                }
                s
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub trunc_order: usize,
    pub rows: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordFactor {
    /// `a - λb`.
    Linear(Q),
    /// `S` or `S⁻¹`.
    Unit { series: Vec<Q>, inverted: bool },
}

/// `(a - λ₁b) S₁^{±1} (a - λ₂b) ⋯`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureWord {
    factors: Vec<WordFactor>,
}

impl StructureWord {
    pub fn new(factors: Vec<WordFactor>) -> Result<Self> {
        for f in &factors {
            match f {
                WordFactor::Linear(l) if l <= &zero() => {
                    return Err(FrescoError::Parse(format!("λ = {} is not positive", fmt_q(l))));
                }
                WordFactor::Unit { series, .. } if series.first().is_none_or(Zero::is_zero) => {
                    return Err(FrescoError::NonUnitSeries);
                }
                _ => {}
            }
        }
        Ok(Self { factors })
    }

    pub fn linear(lambdas: &[Q]) -> Result<Self> {
        Self::new(lambdas.iter().cloned().map(WordFactor::Linear).collect())
    }

    pub fn factors(&self) -> &[WordFactor] {
        &self.factors
    }

    pub fn lambdas(&self) -> Vec<Q> {
        self.factors
            .iter()
            .filter_map(|f| match f {
                WordFactor::Linear(l) => Some(l.clone()),
                WordFactor::Unit { .. } => None,
            })
            .collect()
    }

    /// Normal form of the product. Validity drops by one order per linear factor and per inversion.
    pub fn expand(&self, trunc: usize) -> Result<ABOperator> {
        let mut acc = ABOperator::identity(trunc);
        let mut cost = 0;
        for f in &self.factors {
            let op = match f {
                WordFactor::Linear(l) => {
                    cost += 1;
                    ABOperator::linear(l, trunc)
                }
                WordFactor::Unit { series, inverted } => {
                    let s = BSeries::new(series.iter().take(trunc + 1).cloned().collect(), trunc);
                    if *inverted {
                        cost += 1;
                        ABOperator::from_series(s.inverse()?)
                    } else {
                        ABOperator::from_series(s)
                    }
                }
            };
            acc = acc.compose(&op);
        }
        Ok(acc.with_validity(trunc.saturating_sub(cost)))
    }

    pub fn to_file(&self, trunc_order: usize) -> WordFile {
        WordFile {
            trunc_order: Some(trunc_order),
            word: self
                .factors
                .iter()
                .map(|f| match f {
                    WordFactor::Linear(l) => FactorFile { linear: Some(fmt_q(l)), unit: None, inverted: false },
                    WordFactor::Unit { series, inverted } => FactorFile {
                        linear: None,
                        unit: Some(series.iter().map(fmt_q).collect()),
                        inverted: *inverted,
                    },
                })
                .collect(),
        }
    }

    pub fn from_file(f: &WordFile) -> Result<Self> {
        let factors = f
            .word
            .iter()
            .map(|x| match (&x.linear, &x.unit) {
                (Some(l), None) => Ok(WordFactor::Linear(parse_q(l)?)),
                (None, Some(u)) => Ok(WordFactor::Unit {
                    series: u.iter().map(|s| parse_q(s)).collect::<Result<_>>()?,
                    inverted: x.inverted,
                }),
                _ => Err(FrescoError::Parse("factor needs exactly one of linear/unit".into())),
            })
            .collect::<Result<_>>()?;
        Self::new(factors)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc_order: Option<usize>,
    pub word: Vec<FactorFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
    #[serde(default)]
    pub inverted: bool,
}
