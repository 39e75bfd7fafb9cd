//! Pole data read off expansions: Mellin profiles of elements, the pole guaranteed by the
//! nilpotent order of the primitive part, and the ladder of biggest poles of each order.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{FrescoError, Result};
use crate::module::SubModule;
use crate::rational::{fmt_q, Q};
use crate::xi::{location, shift_of, ExponentClass, XiElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleStatus {
    /// A pole of exactly this order exists for a suitable pairing.
    Guaranteed,
    /// No pole of larger order can occur here.
    UpperBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleEntry {
    pub at: Q,
    pub order: usize,
    pub status: PoleStatus,
}

/// Pole locations with orders, sorted by decreasing location.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PoleProfile {
    entries: Vec<PoleEntry>,
    class_max: BTreeMap<ExponentClass, usize>,
}

impl PoleProfile {
    fn from_entries(mut entries: Vec<PoleEntry>) -> Self {
        entries.sort_by(|a, b| b.at.cmp(&a.at));
        let mut class_max: BTreeMap<ExponentClass, usize> = BTreeMap::new();
        for e in &entries {
            let cls = ExponentClass::new(crate::rational::class_of(&-e.at.clone())).expect("positive class");
            let slot = class_max.entry(cls).or_default();
            *slot = (*slot).max(e.order);
        }
        Self { entries, class_max }
    }

    pub fn entries(&self) -> &[PoleEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn order_at(&self, at: &Q) -> Option<usize> {
        self.entries.iter().find(|e| &e.at == at).map(|e| e.order)
    }

    /// Largest order among locations in `-α - ℕ`.
    pub fn max_order(&self, cls: &ExponentClass) -> usize {
        self.class_max.get(cls).copied().unwrap_or(0)
    }

    pub fn report(&self) -> PoleReport {
        PoleReport {
            poles: self
                .entries
                .iter()
                .map(|e| PoleReportEntry { at: fmt_q(&e.at), order: e.order, status: e.status })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleReport {
    pub poles: Vec<PoleReportEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleReportEntry {
    pub at: String,
    pub order: usize,
    pub status: PoleStatus,
}

/// Order of the pole contributed by log degree `j` in class `cls`; the `Γ` factor lowers it by
/// one at integral exponents.
pub fn order_of_log(cls: &ExponentClass, j: usize) -> usize {
    if cls.is_one() {
        j
    } else {
        j + 1
    }
}

/// Term-wise Mellin poles of `x`: order `j_max + 1` at `-(α+m)`, or `j_max` when `α = 1`.
pub fn mellin_profile(x: &XiElement) -> PoleProfile {
    let mut top: BTreeMap<(ExponentClass, usize), usize> = BTreeMap::new();
    for mono in x.terms().keys() {
        let e = top.entry((mono.cls.clone(), mono.m)).or_default();
        *e = (*e).max(mono.j);
    }
    let entries = top
        .into_iter()
        .map(|((cls, m), j)| PoleEntry { at: location(&cls, m), order: order_of_log(&cls, j), status: PoleStatus::Guaranteed })
        .filter(|e| e.order > 0)
        .collect();
    PoleProfile::from_entries(entries)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolePrediction {
    /// `d(F^{[α]})`.
    pub order: usize,
    /// Biggest root of `B^p` of the primitive part in `-α - ℕ`, if any.
    pub location: Option<Q>,
}

/// The pole of order `p = d(F^{[α]})` at the biggest root of `B^p_{F^{[α]}}`.
pub fn predict_pole(f: &SubModule, cls: &ExponentClass) -> Result<PolePrediction> {
    let fa = f.primitive_quotient(cls);
    if fa.is_zero() {
        return Err(FrescoError::NoAlphaPart);
    }
    let p = fa.nilpotent_order();
    let hb = fa.higher_bernstein(p)?;
    let location = hb.roots().into_iter().find(|r| shift_of(cls, r).is_some());
    Ok(PolePrediction { order: p, location })
}

/// Guaranteed pole from [`predict_pole`] together with upper bounds `p` at the other roots of
/// `B_{F^{[α]}}`, for every class met by `f`.
pub fn predicted_profile(f: &SubModule) -> Result<PoleProfile> {
    let mut entries = Vec::new();
    for cls in f.classes() {
        let pred = predict_pole(f, &cls)?;
        let b = f.primitive_quotient(&cls).bernstein()?.minimal;
        for r in b.roots() {
            let status = if pred.location.as_ref() == Some(&r) { PoleStatus::Guaranteed } else { PoleStatus::UpperBound };
            entries.push(PoleEntry { at: r, order: pred.order, status });
        }
    }
    Ok(PoleProfile::from_entries(entries))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderStep {
    pub s: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub xi: Q,
    /// Every `h ≥ s` with `B^h(ξ_s) = 0`.
    pub levels: Vec<usize>,
}

/// `ξ_s`: the biggest location in class `cls` where some element of `f` has a pole of order
/// at least `s`, for `1 ≤ s ≤ d(F^{[α]})`.
pub fn xi_ladder(f: &SubModule, cls: &ExponentClass) -> Result<Vec<LadderStep>> {
    let fa = f.primitive_quotient(cls);
    if fa.is_zero() {
        return Err(FrescoError::NoAlphaPart);
    }
    let p = fa.nilpotent_order();
    let hbs = fa.higher_bernsteins()?;
    let frame = fa.frame();
    let n = frame.n();
    let lim = fa
        .level()
        .checked_sub(fa.guard())
        .ok_or_else(|| FrescoError::GuardExhausted("ladder".into()))?;
    let mut out = Vec::with_capacity(p);
    for s in 1..=p {
        let mask: Vec<bool> = (0..n).map(|slot| frame.height_of(slot) + 1 >= s).collect();
        let order = Arc::new(mask.iter().map(|&b| u32::from(!b)).collect::<Vec<_>>());
        let ech = fa.echelon().reorder(order);
        let m = ech
            .gens()
            .filter(|g| mask[g.slot])
            .map(|g| g.deg)
            .min()
            .filter(|&m| m <= lim)
            .ok_or_else(|| FrescoError::RankUnstable(format!("no order-{s} term below level {lim}")))?;
        let xi = location(cls, m);
        let levels = (s..=p).filter(|&h| hbs[h - 1].is_root(&xi)).collect();
        out.push(LadderStep { s, xi, levels });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::ClosureSet;
    use crate::rational::{q, qf};
    use crate::xi::Ambient;

    fn amb(alphas: &[Q], log_bound: usize) -> Ambient {
        Ambient::new(alphas.iter().map(|a| ExponentClass::new(a.clone()).unwrap()).collect(), log_bound, 1)
    }

    #[test]
    fn profile_of_single_elements() {
        let a = amb(&[qf(1, 2), q(1)], 2);
        let x = XiElement::monomial(&a, 30, qf(1, 2), 1, 2, 0)
            .unwrap()
            .add(&XiElement::monomial(&a, 30, qf(1, 2), 0, 0, 0).unwrap());
        let p = mellin_profile(&x);
        assert_eq!(p.order_at(&qf(-1, 2)), Some(1));
        assert_eq!(p.order_at(&qf(-3, 2)), Some(3));
        assert_eq!(p.entries().len(), 2);
        let y = XiElement::monomial(&a, 30, q(1), 1, 1, 0).unwrap();
        let p = mellin_profile(&y);
        assert_eq!(p.entries().len(), 1);
        assert_eq!(p.order_at(&q(-2)), Some(1));
        assert!(mellin_profile(&XiElement::zero(a, 30)).is_empty());
    }

    #[test]
    fn phi2_example_poles() {
        let a = amb(&[qf(1, 2)], 2);
        let x = XiElement::monomial(&a, 40, qf(1, 2), 1, 2, 0)
            .unwrap()
            .add(&XiElement::monomial(&a, 40, qf(1, 2), 0, 0, 0).unwrap());
        let f = SubModule::generate(&a, 40, &[x], ClosureSet::AB, 8).unwrap();
        let cls = ExponentClass::new(qf(1, 2)).unwrap();
        let pred = predict_pole(&f, &cls).unwrap();
        assert_eq!(pred, PolePrediction { order: 3, location: Some(qf(-3, 2)) });
        let ladder = xi_ladder(&f, &cls).unwrap();
        let xs: Vec<Q> = ladder.iter().map(|l| l.xi.clone()).collect();
        assert_eq!(xs, vec![qf(-1, 2), qf(-3, 2), qf(-3, 2)]);
        assert!(ladder.iter().all(|l| !l.levels.is_empty()));
        let prof = predicted_profile(&f).unwrap();
        let json = serde_json::to_string(&prof.report()).unwrap();
        assert_eq!(
            json,
            r#"{"poles":[{"at":"-1/2","order":3,"status":"upper_bound"},{"at":"-3/2","order":3,"status":"guaranteed"}]}"#
        );
    }

    #[test]
    fn rank_one_prediction() {
        let a = amb(&[qf(2, 3)], 0);
        let x = XiElement::monomial(&a, 20, qf(2, 3), 0, 0, 0).unwrap();
        let f = SubModule::generate(&a, 20, &[x], ClosureSet::AB, 6).unwrap();
        let cls = ExponentClass::new(qf(2, 3)).unwrap();
        assert_eq!(predict_pole(&f, &cls).unwrap(), PolePrediction { order: 1, location: Some(qf(-2, 3)) });
        let other = ExponentClass::new(qf(1, 3)).unwrap();
        assert_eq!(predict_pole(&f, &other), Err(FrescoError::NoAlphaPart));
    }
}
