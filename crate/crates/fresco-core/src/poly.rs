//! Monic polynomials over ℚ in one variable, with factorization over rational roots.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, one, zero, Q};

/// A monic polynomial, coefficients stored from the constant term upward.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    coeffs: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub root: Q,
    pub mult: usize,
}

impl RationalPolynomial {
    pub fn one() -> Self {
        Self { coeffs: vec![one()] }
    }

    /// Normalizes an arbitrary nonzero coefficient list to monic form.
    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Option<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.last()?.clone();
        for c in coeffs.iter_mut() {
            *c = &*c / &lead;
        }
        Some(Self { coeffs })
    }

    /// `x - r`.
    pub fn linear(r: &Q) -> Self {
        Self { coeffs: vec![-r.clone(), one()] }
    }

    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Q>) -> Self {
        roots
            .into_iter()
            .fold(Self::one(), |acc, r| acc.mul(&Self::linear(r)))
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { coeffs: mul_raw(&self.coeffs, &other.coeffs) }
    }

    /// The polynomial `x ↦ p(x + r)`.
    pub fn shift(&self, r: &Q) -> Self {
        // Horner in the shifted variable.
        let mut out: Vec<Q> = vec![zero()];
        for c in self.coeffs.iter().rev() {
            out = mul_raw(&out, &[r.clone(), one()]);
            out[0] += c;
        }
        out.truncate(self.coeffs.len());
        Self { coeffs: out }
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem(&self, d: &Self) -> (Vec<Q>, Vec<Q>) {
        div_rem_raw(&self.coeffs, &d.coeffs)
    }

    pub fn divides(&self, other: &Self) -> bool {
        let (_, r) = other.div_rem(self);
        r.iter().all(|c| c.is_zero())
    }

    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (qt, r) = self.div_rem(d);
        if r.iter().all(|c| c.is_zero()) {
            Some(Self { coeffs: qt })
        } else {
            None
        }
    }

    pub fn is_root(&self, x: &Q) -> bool {
        self.eval(x).is_zero()
    }

    /// Multiplicity of `r` as a root.
    pub fn multiplicity(&self, r: &Q) -> usize {
        let lin = Self::linear(r);
        let mut p = self.clone();
        let mut k = 0;
        while p.degree() > 0 {
            match p.exact_div(&lin) {
                Some(qt) => {
                    p = qt;
                    k += 1;
                }
                None => break,
            }
        }
        k
    }

    /// Factorization into rational linear factors (roots in decreasing order),
    /// or `None` if some factor has no rational root.
    pub fn factor(&self) -> Option<Vec<Factor>> {
        let mut rest = self.clone();
        let mut out = Vec::new();
        for r in rational_root_candidates(&self.coeffs)? {
            let m = rest.multiplicity(&r);
            if m > 0 {
                for _ in 0..m {
                    rest = rest.exact_div(&Self::linear(&r)).expect("root divides");
                }
                out.push(Factor { root: r, mult: m });
            }
            if rest.degree() == 0 {
                break;
            }
        }
        if rest.degree() > 0 {
            return None;
        }
        out.sort_by(|a, b| b.root.cmp(&a.root));
        Some(out)
    }

    /// Distinct rational roots, decreasing.
    pub fn roots(&self) -> Vec<Q> {
        match self.factor() {
            Some(f) => f.into_iter().map(|f| f.root).collect(),
            None => Vec::new(),
        }
    }

    /// Whether all roots are rational and simple.
    pub fn is_square_free_split(&self) -> bool {
        self.factor().is_some_and(|f| f.iter().all(|f| f.mult == 1))
    }

    pub fn report(&self) -> PolyReport {
        PolyReport {
            monic_coeffs: self.coeffs.iter().map(fmt_q).collect(),
            factors: self
                .factor()
                .unwrap_or_default()
                .into_iter()
                .map(|f| FactorReport { root: fmt_q(&f.root), mult: f.mult })
                .collect(),
        }
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        if let Some(fs) = self.factor() {
            for fa in fs {
                let c = -fa.root.clone();
                let lin = if c.is_zero() {
                    "x".to_string()
                } else if c.is_negative() {
                    format!("(x-{})", fmt_q(&-c))
                } else {
                    format!("(x+{})", fmt_q(&c))
                };
                if fa.mult > 1 {
                    write!(f, "{lin}^{}", fa.mult)?;
                } else {
                    write!(f, "{lin}")?;
                }
            }
            return Ok(());
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*x^{i}", fmt_q(c)))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyReport {
    pub monic_coeffs: Vec<String>,
    pub factors: Vec<FactorReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    pub root: String,
    pub mult: usize,
}

pub(crate) fn mul_raw(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn div_rem_raw(num: &[Q], den: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let dd = den.len() - 1;
    if num.len() <= dd {
        return (vec![zero()], num.to_vec());
    }
    let lead = den.last().expect("nonempty divisor");
    let mut r = num.to_vec();
    let mut qt = vec![zero(); num.len() - dd];
    for k in (0..qt.len()).rev() {
        let c = &r[k + dd] / lead;
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                r[k + i] -= &c * d;
            }
        }
        qt[k] = c;
    }
    r.truncate(dd.max(1));
    (qt, r)
}

/// Candidate rational roots via the rational root theorem on the integer
/// normalization. Returns `None` when the integers are too large to factor by
/// trial division.
fn rational_root_candidates(coeffs: &[Q]) -> Option<Vec<Q>> {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
    let low = ints.iter().position(|c| !c.is_zero())?;
    let mut cands = Vec::new();
    if low > 0 {
        cands.push(zero());
    }
    let c0 = ints[low].abs().to_u64()?;
    let cn = ints.last()?.abs().to_u64()?;
    if c0 > 1 << 40 || cn > 1 << 40 {
        return None;
    }
    let dp = divisors(c0);
    let dq = divisors(cn);
    for p in &dp {
        for qd in &dq {
            let r = Q::new(BigInt::from(*p), BigInt::from(*qd));
            cands.push(r.clone());
            cands.push(-r);
        }
    }
    cands.sort();
    cands.dedup();
    Some(cands)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn factor_and_shift() {
        let p = RationalPolynomial::from_roots(&[qf(-3, 2), qf(-3, 2), qf(-1, 2)]);
        let f = p.factor().unwrap();
        assert_eq!(f, vec![Factor { root: qf(-1, 2), mult: 1 }, Factor { root: qf(-3, 2), mult: 2 }]);
        let s = p.shift(&q(1));
        assert_eq!(s, RationalPolynomial::from_roots(&[qf(-5, 2), qf(-5, 2), qf(-3, 2)]));
        assert_eq!(p.to_string(), "(x+1/2)(x+3/2)^2");
    }

    #[test]
    fn divisibility() {
        let a = RationalPolynomial::from_roots(&[q(-1), q(-2)]);
        let b = RationalPolynomial::linear(&q(-2));
        assert!(b.divides(&a));
        assert!(!a.divides(&b));
        assert_eq!(a.multiplicity(&q(-1)), 1);
    }
}
