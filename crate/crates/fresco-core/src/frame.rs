//! Coordinates adapted to `b`.
//!
//! For a component `c = (α, k)` put `u_{c,t} = e(α, 0, t + off, k)` where `off = 1` for `α = 1`
//! and `0` otherwise. The vectors `b^m u_{c,t}` form a basis of the truncated expansion space in
//! which `b` is a pure shift, `b⁻¹a` acts by `b^m u_t ↦ (α+m) b^m u_t + b^m u_{t-1}`, and the
//! nilpotent part `N` lowers `t`. Since `b^m u_{c,t}` only involves monomials with shift `m`,
//! the change of basis is block diagonal with one upper triangular block `T_m` per `(α, m)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::echelon::{shift_up, Vector};
use crate::error::{FrescoError, Result};
use crate::matrix::Matrix;
use crate::rational::{one, q, zero, Q};
use crate::xi::{Ambient, ExponentClass, LogMonomial, XiElement};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Comp {
    pub cls: ExponentClass,
    pub k: usize,
}

#[derive(Debug)]
struct ClassTables {
    /// e-coordinates of `b^m u_t`, column `t`.
    t: Vec<Matrix>,
    t_inv: Vec<Matrix>,
}

#[derive(Debug)]
pub struct Frame {
    ambient: Ambient,
    comps: Vec<Comp>,
    h: usize,
    max_level: usize,
    tables: BTreeMap<ExponentClass, ClassTables>,
}

pub type FrameRef = Arc<Frame>;

fn class_tables(alpha: &Q, h: usize, max_level: usize) -> ClassTables {
    let mut t = vec![Matrix::identity(h)];
    let mut t_inv = vec![Matrix::identity(h)];
    for m in 0..max_level {
        let beta = alpha + q(m as i64);
        let inv = one() / &beta;
        // matrix of b from shift m to m+1 in e-coordinates, and its inverse
        let mut bm = Matrix::zeros(h, h);
        let mut bm_inv = Matrix::zeros(h, h);
        let mut w = inv.clone();
        for d in 0..h {
            let v = if d % 2 == 0 { w.clone() } else { -w.clone() };
            for r in 0..h - d {
                bm[(r, r + d)] = v.clone();
            }
            w = &w * &inv;
        }
        // (β⁻¹ (1 + S/β)⁻¹)⁻¹ = β + S
        for r in 0..h {
            bm_inv[(r, r)] = beta.clone();
            if r + 1 < h {
                bm_inv[(r, r + 1)] = one();
            }
        }
        let next = bm.mul(&t[m]);
        let next_inv = t_inv[m].mul(&bm_inv);
        t.push(next);
        t_inv.push(next_inv);
    }
    ClassTables { t, t_inv }
}

impl Frame {
    pub fn new(ambient: Ambient, mut comps: Vec<Comp>, max_level: usize) -> FrameRef {
        comps.sort();
        comps.dedup();
        let h = ambient.log_bound + 1;
        let mut tables = BTreeMap::new();
        for c in &comps {
            tables
                .entry(c.cls.clone())
                .or_insert_with(|| class_tables(c.cls.alpha(), h, max_level));
        }
        Arc::new(Self { ambient, comps, h, max_level, tables })
    }

    /// Frame over the components met by `elems`.
    pub fn for_elements<'a>(ambient: &Ambient, elems: impl IntoIterator<Item = &'a XiElement>, max_level: usize) -> FrameRef {
        let comps = elems
            .into_iter()
            .flat_map(|x| x.terms().keys().map(|t| Comp { cls: t.cls.clone(), k: t.k }))
            .collect();
        Self::new(ambient.clone(), comps, max_level)
    }

    /// Smallest frame containing both.
    pub fn union(a: &FrameRef, b: &FrameRef) -> FrameRef {
        if Arc::ptr_eq(a, b) || (a.comps == b.comps && a.ambient == b.ambient && a.max_level >= b.max_level) {
            return a.clone();
        }
        let mut comps = a.comps.clone();
        comps.extend(b.comps.iter().cloned());
        Self::new(a.ambient.union(&b.ambient), comps, a.max_level.max(b.max_level))
    }

    pub fn same(a: &FrameRef, b: &FrameRef) -> bool {
        Arc::ptr_eq(a, b) || (a.comps == b.comps && a.ambient == b.ambient)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn comps(&self) -> &[Comp] {
        &self.comps
    }

    /// Heights per component.
    pub fn heights(&self) -> usize {
        self.h
    }

    /// Slots per degree.
    pub fn n(&self) -> usize {
        self.comps.len() * self.h
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn slot(&self, comp: usize, t: usize) -> usize {
        comp * self.h + t
    }

    pub fn comp_of(&self, slot: usize) -> &Comp {
        &self.comps[slot / self.h]
    }

    pub fn height_of(&self, slot: usize) -> usize {
        slot % self.h
    }

    pub fn comp_index(&self, comp: &Comp) -> Option<usize> {
        self.comps.binary_search(comp).ok()
    }

    /// Log degree of slot `s`.
    pub fn log_degree(&self, slot: usize) -> usize {
        self.height_of(slot) + self.comp_of(slot).cls.min_log()
    }

    /// Exponent `α + m` attached to position `p` of a vector.
    pub fn beta_at(&self, p: usize) -> Q {
        let n = self.n();
        self.comp_of(p % n).cls.alpha() + q((p / n) as i64)
    }

    pub fn zero_vec(&self, level: usize) -> Vector {
        vec![zero(); (level + 1) * self.n()]
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.max_level {
            return Err(FrescoError::GuardExhausted(format!("level {level} beyond frame tables {}", self.max_level)));
        }
        Ok(())
    }

    /// B-coordinates of `x` at `level`; terms beyond `level` are dropped.
    pub fn to_vector(&self, x: &XiElement, level: usize) -> Result<Vector> {
        self.check_level(level)?;
        let n = self.n();
        let mut e = self.zero_vec(level);
        for (mono, c) in x.terms() {
            if mono.m > level {
                continue;
            }
            let ci = self
                .comp_index(&Comp { cls: mono.cls.clone(), k: mono.k })
                .ok_or_else(|| FrescoError::Incompatible(format!("monomial {mono:?} outside frame")))?;
            let t = mono.j - mono.cls.min_log();
            if t >= self.h {
                return Err(FrescoError::Incompatible(format!("log degree {} beyond bound", mono.j)));
            }
            e[mono.m * n + self.slot(ci, t)] += c;
        }
        Ok(self.convert(&e, level, true))
    }

    fn convert(&self, v: &[Q], level: usize, inverse: bool) -> Vector {
        let n = self.n();
        let mut out = self.zero_vec(level);
        for m in 0..=level {
            for (ci, comp) in self.comps.iter().enumerate() {
                let base = m * n + ci * self.h;
                let block = &v[base..base + self.h];
                if block.iter().all(Zero::is_zero) {
                    continue;
                }
                let tab = &self.tables[&comp.cls];
                let mat = if inverse { &tab.t_inv[m] } else { &tab.t[m] };
                let y = mat.mul_vec(block);
                out[base..base + self.h].clone_from_slice(&y);
            }
        }
        out
    }

    /// The element with B-coordinates `v`, certified to `level`.
    pub fn to_element(&self, v: &[Q], level: usize) -> XiElement {
        let n = self.n();
        let e = self.convert(v, level, false);
        let terms = e.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(p, c)| {
            let (m, s) = (p / n, p % n);
            let comp = self.comp_of(s);
            (LogMonomial { cls: comp.cls.clone(), m, j: self.log_degree(s), k: comp.k }, c.clone())
        });
        XiElement::from_terms(self.ambient.clone(), level, terms).expect("frame monomials are admissible")
    }

    /// `b⁻¹a`.
    pub fn theta(&self, v: &[Q]) -> Vector {
        let n = self.n();
        let mut out = vec![zero(); v.len()];
        for (p, x) in v.iter().enumerate() {
            let s = p % n;
            let mut y = if x.is_zero() { zero() } else { x * self.beta_at(p) };
            if self.height_of(s) + 1 < self.h {
                y += &v[p + 1];
            }
            out[p] = y;
        }
        out
    }

    /// `a = b·(b⁻¹a)`.
    pub fn a(&self, v: &[Q]) -> Vector {
        shift_up(&self.theta(v), 1, self.n())
    }

    pub fn b(&self, v: &[Q]) -> Vector {
        shift_up(v, 1, self.n())
    }

    /// The nilpotent part `N = b⁻¹a - (α+m)`, lowering the height by one.
    pub fn nil(&self, v: &[Q]) -> Vector {
        let mut out = vec![zero(); v.len()];
        for p in 0..v.len() {
            if self.height_of(p % self.n()) + 1 < self.h {
                out[p] = v[p + 1].clone();
            }
        }
        out
    }

    /// Slots of height below `j`, i.e. nilpotent order at most `j`.
    pub fn height_mask(&self, j: usize) -> Vec<bool> {
        (0..self.n()).map(|s| self.height_of(s) < j).collect()
    }

    pub fn class_mask(&self, cls: &ExponentClass) -> Vec<bool> {
        (0..self.n()).map(|s| &self.comp_of(s).cls == cls).collect()
    }

    /// Largest nilpotent order met by `v`.
    pub fn order_of(&self, v: &[Q]) -> usize {
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, _)| self.height_of(p % self.n()) + 1)
            .max()
            .unwrap_or(0)
    }

    /// Coordinates in another frame containing this one.
    pub fn embed(&self, v: &[Q], level: usize, into: &Frame) -> Result<Vector> {
        let n = self.n();
        let mut out = into.zero_vec(level);
        if into.h != self.h {
            return Err(FrescoError::Incompatible("log bounds differ".into()));
        }
        let map: Vec<usize> = self
            .comps
            .iter()
            .map(|c| into.comp_index(c).ok_or_else(|| FrescoError::Incompatible("frame not contained".into())))
            .collect::<Result<_>>()?;
        for (p, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (m, s) = (p / n, p % n);
            if m > level {
                break;
            }
            let ns = into.slot(map[s / self.h], s % self.h);
            out[m * into.n() + ns] = x.clone();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use crate::xi::Gen;

    fn amb() -> Ambient {
        Ambient::new(vec![ExponentClass::new(qf(1, 2)).unwrap(), ExponentClass::new(q(1)).unwrap()], 2, 1)
    }

    fn sample() -> XiElement {
        let a = amb();
        let e = |al: Q, m, j| XiElement::monomial(&a, 12, al, m, j, 0).unwrap();
        e(qf(1, 2), 1, 2)
            .add(&e(qf(1, 2), 0, 0).scale(&qf(-3, 7)))
            .add(&e(q(1), 2, 1).scale(&q(5)))
            .add(&e(q(1), 0, 3))
    }

    fn frame() -> FrameRef {
        Frame::for_elements(&amb(), [&sample()], 20)
    }

    #[test]
    fn round_trip() {
        let f = frame();
        let x = sample();
        let v = f.to_vector(&x, 12).unwrap();
        assert_eq!(f.to_element(&v, 12), x);
    }

    #[test]
    fn generators_match_closed_forms() {
        let f = frame();
        let x = sample();
        let v = f.to_vector(&x, 12).unwrap();
        let b = x.act(Gen::B).unwrap();
        assert!(f.to_element(&f.b(&v), 12).same_as(&b));
        let a = x.act(Gen::A).unwrap();
        assert!(f.to_element(&f.a(&v), 12).same_as(&a));
        let t = x.act(Gen::BInvA).unwrap();
        assert_eq!(f.to_element(&f.theta(&v), 12), t);
    }

    #[test]
    fn nil_lowers_log_degree() {
        let f = frame();
        let x = sample();
        let v = f.to_vector(&x, 12).unwrap();
        let nv = f.nil(&v);
        assert_eq!(f.order_of(&v), 3);
        assert_eq!(f.order_of(&nv), 2);
        // N commutes with b
        assert_eq!(f.nil(&f.b(&v)), f.b(&nv));
    }
}
