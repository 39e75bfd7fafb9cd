//! Truncated elements of the log-asymptotic expansion spaces and the actions of `a`, `b`, `b⁻¹a`.
//!
//! The basis vector `e(α,m,j,k)` stands for `s^{α+m-1} (Log s)^j / j! ⊗ v_k`. For `α = 1` the
//! terms with `j = 0` are quotiented away, so log degrees run over `1..=N+1` there.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{FrescoError, Result};
use crate::rational::{fmt_q, is_natural, one, parse_q, q, Q};

/// An exponent class `α ∈ (0, 1] ∩ ℚ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentClass(Q);

impl ExponentClass {
    pub fn new(alpha: Q) -> Result<Self> {
        if alpha > Q::zero() && alpha <= Q::one() {
            Ok(Self(alpha))
        } else {
            Err(FrescoError::Parse(format!("exponent class {} not in (0,1]", fmt_q(&alpha))))
        }
    }

    pub fn alpha(&self) -> &Q {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Lowest admissible log degree.
    pub fn min_log(&self) -> usize {
        usize::from(self.is_one())
    }
}

impl fmt::Display for ExponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q(&self.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogMonomial {
    pub cls: ExponentClass,
    pub m: usize,
    pub j: usize,
    pub k: usize,
}

impl LogMonomial {
    /// `α + m`, the exponent of `s` plus one.
    pub fn beta(&self) -> Q {
        self.cls.alpha() + q(self.m as i64)
    }

    /// Nilpotent order contributed by this monomial.
    pub fn order(&self) -> usize {
        if self.cls.is_one() {
            self.j
        } else {
            self.j + 1
        }
    }
}

/// The ambient space `SΞ_𝒜^{(N)} ⊗ V` up to truncation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ambient {
    pub alpha_set: Vec<ExponentClass>,
    pub log_bound: usize,
    pub value_dim: usize,
}

impl Ambient {
    pub fn new(mut alpha_set: Vec<ExponentClass>, log_bound: usize, value_dim: usize) -> Self {
        alpha_set.sort();
        alpha_set.dedup();
        Self { alpha_set, log_bound, value_dim }
    }

    pub fn max_log(&self, cls: &ExponentClass) -> usize {
        self.log_bound + usize::from(cls.is_one())
    }

    pub fn admits(&self, mono: &LogMonomial) -> bool {
        self.alpha_set.contains(&mono.cls)
            && mono.j >= mono.cls.min_log()
            && mono.j <= self.max_log(&mono.cls)
            && mono.k < self.value_dim
    }

    pub fn union(&self, o: &Self) -> Self {
        let mut a = self.alpha_set.clone();
        a.extend(o.alpha_set.iter().cloned());
        Self::new(a, self.log_bound.max(o.log_bound), self.value_dim.max(o.value_dim))
    }
}

/// The three generators acting on expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    A,
    B,
    BInvA,
}

/// A finite ℚ-combination of log-monomials, exact modulo terms with `m > cert_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiElement {
    ambient: Ambient,
    cert_degree: usize,
    terms: BTreeMap<LogMonomial, Q>,
}

impl XiElement {
    pub fn zero(ambient: Ambient, cert_degree: usize) -> Self {
        Self { ambient, cert_degree, terms: BTreeMap::new() }
    }

    /// Builds a canonical element; inadmissible monomials are rejected.
    pub fn from_terms(
        ambient: Ambient,
        cert_degree: usize,
        terms: impl IntoIterator<Item = (LogMonomial, Q)>,
    ) -> Result<Self> {
        let mut x = Self::zero(ambient, cert_degree);
        for (mono, c) in terms {
            if !x.ambient.admits(&mono) && !(mono.cls.is_one() && mono.j == 0) {
                return Err(FrescoError::Parse(format!("monomial {mono:?} outside the ambient")));
            }
            x.add_term(mono, c);
        }
        Ok(x)
    }

    /// Convenience constructor for a single basis vector `e(α,m,j,k)`.
    pub fn monomial(ambient: &Ambient, cert_degree: usize, alpha: Q, m: usize, j: usize, k: usize) -> Result<Self> {
        let mono = LogMonomial { cls: ExponentClass::new(alpha)?, m, j, k };
        Self::from_terms(ambient.clone(), cert_degree, [(mono, one())])
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn cert_degree(&self) -> usize {
        self.cert_degree
    }

    pub fn terms(&self) -> &BTreeMap<LogMonomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &LogMonomial) -> Q {
        self.terms.get(mono).cloned().unwrap_or_else(Q::zero)
    }

    /// Largest `m` in the support.
    pub fn max_shift(&self) -> Option<usize> {
        self.terms.keys().map(|t| t.m).max()
    }

    fn add_term(&mut self, mono: LogMonomial, c: Q) {
        if c.is_zero() || mono.m > self.cert_degree || (mono.cls.is_one() && mono.j == 0) {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Lowers the certified degree, dropping terms beyond it.
    pub fn truncate(&self, cert_degree: usize) -> Self {
        let cert = cert_degree.min(self.cert_degree);
        Self {
            ambient: self.ambient.clone(),
            cert_degree: cert,
            terms: self.terms.iter().filter(|(t, _)| t.m <= cert).map(|(t, c)| (t.clone(), c.clone())).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.ambient.union(&o.ambient), self.cert_degree.min(o.cert_degree));
        for (t, c) in self.terms.iter().chain(o.terms.iter()) {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.ambient.clone(), self.cert_degree);
        for (t, v) in &self.terms {
            out.add_term(t.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-one()))
    }

    /// Equality modulo terms beyond the smaller certified degree.
    pub fn same_as(&self, o: &Self) -> bool {
        let d = self.cert_degree.min(o.cert_degree);
        self.truncate(d).terms == o.truncate(d).terms
    }

    /// Keeps the terms of one exponent class.
    pub fn project_class(&self, cls: &ExponentClass) -> Self {
        Self {
            ambient: self.ambient.clone(),
            cert_degree: self.cert_degree,
            terms: self.terms.iter().filter(|(t, _)| &t.cls == cls).map(|(t, c)| (t.clone(), c.clone())).collect(),
        }
    }

    /// `d(x)`: the largest order of a monomial in the support.
    pub fn nilpotent_order(&self) -> usize {
        self.terms.keys().map(LogMonomial::order).max().unwrap_or(0)
    }

    /// Applies a generator using the closed-form basis action.
    pub fn act(&self, g: Gen) -> Result<Self> {
        let cert = match g {
            Gen::A | Gen::B => self.cert_degree.checked_sub(1).ok_or_else(|| {
                FrescoError::GuardExhausted(format!("{g:?} applied at certified degree 0"))
            })?,
            Gen::BInvA => self.cert_degree,
        };
        let mut out = Self::zero(self.ambient.clone(), cert);
        for (t, c) in &self.terms {
            let beta = t.beta();
            match g {
                Gen::A => out.add_term(LogMonomial { m: t.m + 1, ..t.clone() }, c.clone()),
                Gen::B => {
                    // Σ_i (-1)^i β^{-(i+1)} e(α, m+1, j-i)
                    let inv = one() / &beta;
                    let mut w = inv.clone();
                    for i in 0..=t.j {
                        let sgn = if i % 2 == 0 { w.clone() } else { -w.clone() };
                        out.add_term(LogMonomial { m: t.m + 1, j: t.j - i, ..t.clone() }, c * sgn);
                        w = &w * &inv;
                    }
                }
                Gen::BInvA => {
                    out.add_term(t.clone(), c * &beta);
                    if t.j > 0 {
                        out.add_term(LogMonomial { j: t.j - 1, ..t.clone() }, c.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn act_n(&self, g: Gen, n: usize) -> Result<Self> {
        let mut x = self.clone();
        for _ in 0..n {
            x = x.act(g)?;
        }
        Ok(x)
    }

    pub fn to_file(&self) -> ElementFile {
        ElementFile {
            alpha_set: self.ambient.alpha_set.iter().map(|a| fmt_q(a.alpha())).collect(),
            log_bound: self.ambient.log_bound,
            value_dim: self.ambient.value_dim,
            cert_degree: self.cert_degree,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| TermFile { alpha: fmt_q(t.cls.alpha()), m: t.m, j: t.j, k: t.k, coeff: fmt_q(c) })
                .collect(),
        }
    }

    pub fn from_file(f: &ElementFile) -> Result<Self> {
        let alphas = f
            .alpha_set
            .iter()
            .map(|s| ExponentClass::new(parse_q(s)?))
            .collect::<Result<Vec<_>>>()?;
        let ambient = Ambient::new(alphas, f.log_bound, f.value_dim);
        let terms = f
            .terms
            .iter()
            .map(|t| {
                Ok((
                    LogMonomial { cls: ExponentClass::new(parse_q(&t.alpha)?)?, m: t.m, j: t.j, k: t.k },
                    parse_q(&t.coeff)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(t) = f.terms.iter().find(|t| t.m > f.cert_degree) {
            return Err(FrescoError::Parse(format!("term with m = {} beyond cert_degree {}", t.m, f.cert_degree)));
        }
        Self::from_terms(ambient, f.cert_degree, terms)
    }
}

impl fmt::Display for XiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| format!("{}·e({},{},{},{})", fmt_q(c), t.cls, t.m, t.j, t.k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// On-disk form of an element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementFile {
    pub alpha_set: Vec<String>,
    pub log_bound: usize,
    pub value_dim: usize,
    pub cert_degree: usize,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermFile {
    pub alpha: String,
    pub m: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: String,
}

/// Location of the term of class `cls` with shift `m`, i.e. `-(α + m)`.
pub fn location(cls: &ExponentClass, m: usize) -> Q {
    -(cls.alpha() + q(m as i64))
}

/// Inverse of [`location`] when `x ∈ -α - ℕ`.
pub fn shift_of(cls: &ExponentClass, x: &Q) -> Option<usize> {
    let m = -x - cls.alpha();
    if is_natural(&m) {
        m.to_integer().try_into().ok()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn amb() -> Ambient {
        Ambient::new(vec![ExponentClass::new(qf(1, 2)).unwrap(), ExponentClass::new(q(1)).unwrap()], 2, 1)
    }

    fn e(alpha: Q, m: usize, j: usize) -> XiElement {
        XiElement::monomial(&amb(), 40, alpha, m, j, 0).unwrap()
    }

    #[test]
    fn quotient_drops_uni_valued_terms() {
        assert!(e(q(1), 3, 0).is_zero());
        let x = e(q(1), 0, 1).act(Gen::BInvA).unwrap();
        assert_eq!(x, e(q(1), 0, 1));
    }

    #[test]
    fn guard_is_consumed() {
        let x = XiElement::monomial(&amb(), 1, qf(1, 2), 0, 0, 0).unwrap();
        let y = x.act(Gen::B).unwrap();
        assert_eq!(y.cert_degree(), 0);
        assert!(matches!(y.act(Gen::A), Err(FrescoError::GuardExhausted(_))));
        assert_eq!(y.act(Gen::BInvA).unwrap().cert_degree(), 0);
    }

    #[test]
    fn project_partitions_support() {
        let x = e(qf(1, 2), 0, 1).add(&e(q(1), 0, 1));
        let h = ExponentClass::new(qf(1, 2)).unwrap();
        let o = ExponentClass::new(q(1)).unwrap();
        assert_eq!(x.project_class(&h), e(qf(1, 2), 0, 1));
        assert_eq!(x.project_class(&h).add(&x.project_class(&o)), x);
    }

    #[test]
    fn file_round_trip() {
        let x = e(qf(1, 2), 1, 2).add(&e(qf(1, 2), 0, 0).scale(&qf(-3, 4)));
        let s = serde_json::to_string(&x.to_file()).unwrap();
        let back: ElementFile = serde_json::from_str(&s).unwrap();
        assert_eq!(XiElement::from_file(&back).unwrap(), x);
    }
}
