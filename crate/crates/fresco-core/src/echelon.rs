//! Echelon bases of `ℚ[b]/b^{L+1}`-submodules of `(ℚ[b]/b^{L+1})^n`.
//!
//! A vector is laid out by degree: entry `m·n + s` is the coefficient of `b^m u_s`.
//! Multiplication by `b` is a shift by `n` entries, so a submodule is stored through
//! at most one generator per slot `s`; the shifts `b^k g` of the generators form a
//! ℚ-basis of the truncated submodule. Positions are scanned in the order
//! `(class[s], m, s)`, which `b` preserves; choosing the classes turns the echelon
//! into an intersection device for coordinate submodules.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::rational::{one, zero, Q};

pub type Vector = Vec<Q>;

#[derive(Clone, Debug)]
pub struct Row {
    pub slot: usize,
    pub deg: usize,
    pub v: Vector,
    nz: Vec<u32>,
}

impl Row {
    fn new(slot: usize, deg: usize, v: Vector) -> Self {
        let nz = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i as u32).collect();
        Self { slot, deg, v, nz }
    }
}

#[derive(Clone, Debug)]
pub struct Echelon {
    n: usize,
    level: usize,
    class: Arc<Vec<u32>>,
    order: Arc<Vec<u32>>,
    gens: Vec<Option<Row>>,
    rigid: Vec<Row>,
    rigid_at: HashMap<usize, usize>,
}

fn scan_order(n: usize, level: usize, class: &[u32]) -> Vec<u32> {
    let mut pos: Vec<u32> = (0..(n * (level + 1)) as u32).collect();
    pos.sort_by_key(|&p| {
        let (m, s) = (p as usize / n, p as usize % n);
        (class[s], m, s)
    });
    pos
}

/// `v ↦ b^k v`, truncated at `level`.
pub fn shift_up(v: &[Q], k: usize, n: usize) -> Vector {
    let len = v.len();
    let mut out = vec![zero(); len];
    let off = k * n;
    if off < len {
        out[off..].clone_from_slice(&v[..len - off]);
    }
    out
}

/// `v ↦ b^{-k} v`; `None` if `v` has a nonzero entry below degree `k`.
pub fn shift_down(v: &[Q], k: usize, n: usize) -> Option<Vector> {
    let off = k * n;
    if off > v.len() || v[..off].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(v[off..].to_vec())
}

pub fn truncate_vec(v: &[Q], level: usize, n: usize) -> Vector {
    let len = (level + 1) * n;
    let mut out = v[..len.min(v.len())].to_vec();
    out.resize(len, zero());
    out
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

impl Echelon {
    pub fn new(n: usize, level: usize, class: Arc<Vec<u32>>) -> Self {
        let order = Arc::new(scan_order(n, level, &class));
        Self { n, level, class, order, gens: vec![None; n], rigid: Vec::new(), rigid_at: HashMap::new() }
    }

    pub fn with_default_order(n: usize, level: usize) -> Self {
        Self::new(n, level, Arc::new(vec![0; n]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn class(&self) -> &Arc<Vec<u32>> {
        &self.class
    }

    /// Length of the coordinate vectors.
    pub fn vec_len(&self) -> usize {
        (self.level + 1) * self.n
    }

    /// Generators sorted by slot.
    pub fn gens(&self) -> impl Iterator<Item = &Row> {
        self.gens.iter().flatten()
    }

    pub fn gen_at(&self, slot: usize) -> Option<&Row> {
        self.gens[slot].as_ref()
    }

    pub fn num_gens(&self) -> usize {
        self.gens().count()
    }

    pub fn rigid(&self) -> &[Row] {
        &self.rigid
    }

    /// ℚ-dimension of the truncated submodule.
    pub fn dim(&self) -> usize {
        self.gens().map(|g| self.level + 1 - g.deg).sum()
    }

    fn axpy(v: &mut [Q], c: &Q, row: &Row, k: usize, n: usize) {
        let off = k * n;
        let len = v.len();
        for &i in &row.nz {
            let t = i as usize + off;
            if t >= len {
                break;
            }
            let d = c * &row.v[i as usize];
            v[t] -= d;
        }
    }

    /// Reduces `v` in scan order. Stops at the first irreducible nonzero position
    /// (returned) when `stop` is set; otherwise clears every reducible position.
    /// Coefficients of rigid rows are accumulated into `track`.
    fn reduce_inner(&self, v: &mut Vector, stop: bool, mut track: Option<&mut Vec<Q>>) -> Option<usize> {
        let mut first = None;
        for &p in self.order.iter() {
            let p = p as usize;
            if v[p].is_zero() {
                continue;
            }
            let (m, s) = (p / self.n, p % self.n);
            if let Some(g) = &self.gens[s] {
                if g.deg <= m {
                    let c = v[p].clone();
                    Self::axpy(v, &c, g, m - g.deg, self.n);
                    continue;
                }
            }
            if let Some(&ri) = self.rigid_at.get(&p) {
                let c = v[p].clone();
                Self::axpy(v, &c, &self.rigid[ri], 0, self.n);
                if let Some(t) = track.as_deref_mut() {
                    t[ri] += c;
                }
                continue;
            }
            if stop {
                return Some(p);
            }
            first.get_or_insert(p);
        }
        first
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut w = v.to_vec();
        self.reduce_inner(&mut w, true, None).is_none()
    }

    /// Fully reduced remainder of `v`.
    pub fn remainder(&self, v: &[Q]) -> Vector {
        let mut w = v.to_vec();
        self.reduce_inner(&mut w, false, None);
        w
    }

    /// Coefficients on the rigid rows and the remainder.
    pub fn coordinates(&self, v: &[Q]) -> (Vec<Q>, Vector) {
        let mut w = v.to_vec();
        let mut t = vec![zero(); self.rigid.len()];
        self.reduce_inner(&mut w, false, Some(&mut t));
        (t, w)
    }

    /// Adds `v` to the submodule; returns the rows that became generators.
    pub fn insert(&mut self, v: Vector) -> Vec<Vector> {
        debug_assert!(self.rigid.is_empty(), "insert after rigid rows");
        debug_assert_eq!(v.len(), self.vec_len());
        let mut queue = vec![v];
        let mut added = Vec::new();
        while let Some(mut x) = queue.pop() {
            let Some(p) = self.reduce_inner(&mut x, true, None) else { continue };
            let inv = one() / &x[p];
            if !inv.is_one() {
                for y in x.iter_mut() {
                    if !y.is_zero() {
                        *y *= &inv;
                    }
                }
            }
            let (m, s) = (p / self.n, p % self.n);
            added.push(x.clone());
            if let Some(old) = self.gens[s].replace(Row::new(s, m, x)) {
                debug_assert!(old.deg > m);
                queue.push(old.v);
            }
        }
        added
    }

    /// Adds `v` as a rigid row (not closed under `b`). Returns whether it was new.
    pub fn insert_rigid(&mut self, v: Vector) -> bool {
        let mut x = v;
        let Some(p) = self.reduce_inner(&mut x, true, None) else { return false };
        let inv = one() / &x[p];
        for y in x.iter_mut() {
            if !y.is_zero() {
                *y *= &inv;
            }
        }
        let (m, s) = (p / self.n, p % self.n);
        self.rigid_at.insert(p, self.rigid.len());
        self.rigid.push(Row::new(s, m, x));
        true
    }

    /// Same submodule truncated at a lower level.
    pub fn truncate(&self, level: usize) -> Self {
        let level = level.min(self.level);
        let mut e = Self::new(self.n, level, self.class.clone());
        for g in self.gens() {
            if g.deg <= level {
                let v = truncate_vec(&g.v, level, self.n);
                e.gens[g.slot] = Some(Row::new(g.slot, g.deg, v));
            }
        }
        e
    }

    /// Same submodule with another scan order.
    pub fn reorder(&self, class: Arc<Vec<u32>>) -> Self {
        let mut e = Self::new(self.n, self.level, class);
        for g in self.gens() {
            e.insert(g.v.clone());
        }
        e
    }

    /// Inserts every generator of `other`.
    pub fn absorb(&mut self, other: &Self) {
        for g in other.gens() {
            self.insert(truncate_vec(&g.v, self.level, self.n));
        }
    }

    /// Whether every generator of `other` (truncated to `self.level`) lies in `self`.
    pub fn includes(&self, other: &Self) -> bool {
        other.gens().all(|g| self.contains(&truncate_vec(&g.v, self.level, self.n)))
    }

    /// Pivot degrees per slot.
    pub fn pivots(&self) -> Vec<(usize, usize)> {
        self.gens().map(|g| (g.slot, g.deg)).collect()
    }

    /// Number of generators with pivot degree at most `t`.
    pub fn count_upto(&self, t: usize) -> usize {
        self.gens().filter(|g| g.deg <= t).count()
    }
}
