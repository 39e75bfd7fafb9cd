//! Finitely generated `(a,b)`-submodules of expansion spaces.
//!
//! A [`SubModule`] stores the echelon basis of its image in `Ξ/b^{L+1}Ξ` for a level `L`.
//! Generation and saturation are exact at that level. Intersections with coordinate or
//! module subspaces are only exact in low degrees, so they drop `guard` levels; every
//! rank-like answer then requires all pivots to sit at least `guard` below the level.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::echelon::{is_zero_vec, shift_up, truncate_vec, Echelon, Vector};
use crate::error::{FrescoError, Result};
use crate::frame::{Comp, Frame, FrameRef};
use crate::matrix::Matrix;
use crate::poly::RationalPolynomial;
use crate::rational::{one, zero, Q};
use crate::xi::{Ambient, ElementFile, ExponentClass, Gen, XiElement};

pub const DEFAULT_GUARD: usize = 8;

/// Generators under which a span is closed (`b` is always included).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClosureSet {
    pub a: bool,
    pub b_inv_a: bool,
}

impl ClosureSet {
    pub const B: Self = Self { a: false, b_inv_a: false };
    pub const AB: Self = Self { a: true, b_inv_a: false };
    pub const SATURATED: Self = Self { a: true, b_inv_a: true };

    pub fn from_gens(gens: &[Gen]) -> Result<Self> {
        if !gens.contains(&Gen::B) {
            return Err(FrescoError::Incompatible("closure set must contain B".into()));
        }
        let t = gens.contains(&Gen::BInvA);
        Ok(Self { a: gens.contains(&Gen::A) || t, b_inv_a: t })
    }

    pub fn gens(&self) -> Vec<Gen> {
        let mut g = Vec::new();
        if self.a {
            g.push(Gen::A);
        }
        g.push(Gen::B);
        if self.b_inv_a {
            g.push(Gen::BInvA);
        }
        g
    }

    fn meet(self, o: Self) -> Self {
        Self { a: self.a && o.a, b_inv_a: self.b_inv_a && o.b_inv_a }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernsteinPair {
    pub minimal: RationalPolynomial,
    pub characteristic: RationalPolynomial,
}

#[derive(Clone, Debug)]
pub struct SubModule {
    frame: FrameRef,
    ech: Echelon,
    closure: ClosureSet,
    guard: usize,
}

/// `(left | right)` in the doubled slot space.
fn doubled(left: &[Q], right: &[Q], n: usize, level: usize) -> Vector {
    let mut out = vec![zero(); 2 * n * (level + 1)];
    for m in 0..=level {
        for s in 0..n {
            out[m * 2 * n + s] = left[m * n + s].clone();
            out[m * 2 * n + n + s] = right[m * n + s].clone();
        }
    }
    out
}

fn right_half(v: &[Q], n: usize, level: usize) -> Vector {
    let mut out = vec![zero(); n * (level + 1)];
    for m in 0..=level {
        out[m * n..(m + 1) * n].clone_from_slice(&v[m * 2 * n + n..(m + 1) * 2 * n]);
    }
    out
}

/// Elements `x` of the span of `rows_h` with `b^k x` in the span of `g`.
fn kernel_pairs(h: &Echelon, g: &Echelon, k: usize) -> Echelon {
    let (n, level) = (h.n(), h.level());
    let class = Arc::new((0..2 * n).map(|s| u32::from(s >= n)).collect::<Vec<_>>());
    let mut z = Echelon::new(2 * n, level, class);
    let zeros = vec![zero(); n * (level + 1)];
    for r in g.gens() {
        z.insert(doubled(&r.v, &zeros, n, level));
    }
    for r in h.gens() {
        z.insert(doubled(&shift_up(&r.v, k, n), &r.v, n, level));
    }
    let mut out = Echelon::with_default_order(n, level);
    for r in z.gens().filter(|r| r.slot >= n) {
        out.insert(right_half(&r.v, n, level));
    }
    out
}

/// Quotient `V/W` of finite dimension, as `W`'s echelon plus rigid representatives.
fn quotient_space(v: &Echelon, w: &Echelon, lim: usize) -> Result<Echelon> {
    let n = v.n();
    let mut red = w.clone();
    let mut queue: Vec<Vector> = v.gens().map(|g| g.v.clone()).collect();
    queue.reverse();
    while let Some(x) = queue.pop() {
        let bx = shift_up(&x, 1, n);
        if red.insert_rigid(x) && !is_zero_vec(&bx) {
            queue.push(bx);
        }
    }
    if let Some(r) = red.rigid().iter().find(|r| r.deg > lim) {
        return Err(FrescoError::RankUnstable(format!("quotient representative at degree {} above {lim}", r.deg)));
    }
    Ok(red)
}

/// Matrix of `f` on the quotient described by `red`.
fn endo_matrix(red: &Echelon, f: impl Fn(&[Q]) -> Vector) -> Result<Matrix> {
    let k = red.rigid().len();
    let mut m = Matrix::zeros(k, k);
    for (i, r) in red.rigid().iter().enumerate() {
        let (c, rem) = red.coordinates(&f(&r.v));
        if !is_zero_vec(&rem) {
            return Err(FrescoError::Incompatible("map does not preserve the quotient".into()));
        }
        for (j, x) in c.into_iter().enumerate() {
            m[(j, i)] = x;
        }
    }
    Ok(m)
}

impl SubModule {
    /// Smallest span containing `gens` and closed under `closure`, exact modulo `b^{cert+1}`.
    pub fn generate(ambient: &Ambient, cert: usize, gens: &[XiElement], closure: ClosureSet, guard: usize) -> Result<Self> {
        let level = gens.iter().map(XiElement::cert_degree).fold(cert, usize::min);
        let frame = Frame::for_elements(ambient, gens, level);
        let mut m = Self::empty(frame, level, closure, guard);
        let vs = gens.iter().map(|g| m.frame.to_vector(g, level)).collect::<Result<Vec<_>>>()?;
        m.extend(vs, closure);
        Ok(m)
    }

    /// Like [`SubModule::generate`], from B-coordinate vectors of `frame`.
    pub fn generate_vectors(frame: &FrameRef, level: usize, vs: Vec<Vector>, closure: ClosureSet, guard: usize) -> Self {
        let mut m = Self::empty(frame.clone(), level, closure, guard);
        let n = frame.n();
        m.extend(vs.into_iter().map(|v| truncate_vec(&v, level, n)).collect(), closure);
        m
    }

    pub fn empty(frame: FrameRef, level: usize, closure: ClosureSet, guard: usize) -> Self {
        let ech = Echelon::with_default_order(frame.n(), level);
        Self { frame, ech, closure, guard }
    }

    fn from_parts(frame: FrameRef, ech: Echelon, closure: ClosureSet, guard: usize) -> Self {
        Self { frame, ech, closure, guard }
    }

    /// Inserts vectors and closes under `closure`.
    fn extend(&mut self, vs: Vec<Vector>, closure: ClosureSet) {
        let mut work = Vec::new();
        for v in vs {
            work.extend(self.ech.insert(v));
        }
        while let Some(v) = work.pop() {
            if closure.b_inv_a {
                work.extend(self.ech.insert(self.frame.theta(&v)));
            } else if closure.a {
                work.extend(self.ech.insert(self.frame.a(&v)));
            }
        }
    }

    pub fn frame(&self) -> &FrameRef {
        &self.frame
    }

    pub fn ambient(&self) -> &Ambient {
        self.frame.ambient()
    }

    pub fn level(&self) -> usize {
        self.ech.level()
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    pub fn closure(&self) -> ClosureSet {
        self.closure
    }

    pub fn echelon(&self) -> &Echelon {
        &self.ech
    }

    pub fn with_guard(mut self, guard: usize) -> Self {
        self.guard = guard;
        self
    }

    /// Generator vectors in B-coordinates.
    pub fn gen_vectors(&self) -> Vec<Vector> {
        self.ech.gens().map(|g| g.v.clone()).collect()
    }

    /// The echelon generators as elements; their `b`-multiples span the module.
    pub fn basis(&self) -> Vec<XiElement> {
        self.ech.gens().map(|g| self.frame.to_element(&g.v, self.level())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.ech.num_gens() == 0
    }

    pub fn contains(&self, x: &XiElement) -> Result<bool> {
        Ok(self.ech.contains(&self.frame.to_vector(x, self.level())?))
    }

    pub fn contains_vector(&self, v: &[Q]) -> bool {
        self.ech.contains(&truncate_vec(v, self.level(), self.frame.n()))
    }

    fn lim(&self) -> Result<usize> {
        self.level()
            .checked_sub(self.guard)
            .ok_or_else(|| FrescoError::GuardExhausted(format!("level {} below guard {}", self.level(), self.guard)))
    }

    fn check_stable(&self, what: &str) -> Result<()> {
        let lim = self.lim()?;
        match self.ech.gens().find(|g| g.deg > lim) {
            Some(g) => Err(FrescoError::RankUnstable(format!("{what}: pivot at degree {} above {lim}", g.deg))),
            None => Ok(()),
        }
    }

    /// Same module known to a lower level.
    pub fn truncate(&self, level: usize) -> Self {
        Self::from_parts(self.frame.clone(), self.ech.truncate(level), self.closure, self.guard)
    }

    /// Coordinates in a larger frame.
    pub fn embed(&self, frame: &FrameRef) -> Result<Self> {
        if Frame::same(&self.frame, frame) {
            return Ok(Self { frame: frame.clone(), ..self.clone() });
        }
        let level = self.level().min(frame.max_level());
        let mut ech = Echelon::with_default_order(frame.n(), level);
        for g in self.ech.gens() {
            ech.insert(self.frame.embed(&truncate_vec(&g.v, level, self.frame.n()), level, frame)?);
        }
        Ok(Self::from_parts(frame.clone(), ech, self.closure, self.guard))
    }

    /// Both modules in one frame at a common level.
    pub fn align(&self, o: &Self) -> Result<(Self, Self)> {
        let frame = Frame::union(&self.frame, &o.frame);
        let level = self.level().min(o.level());
        let a = self.embed(&frame)?;
        let b = o.embed(&frame)?;
        let a = if a.level() > level { a.truncate(level) } else { a };
        let b = if b.level() > level { b.truncate(level) } else { b };
        Ok((a, b))
    }

    /// `o ⊆ self` at the common level.
    pub fn includes(&self, o: &Self) -> Result<bool> {
        let (a, b) = self.align(o)?;
        Ok(a.ech.includes(&b.ech))
    }

    /// Equality of spans at the common level.
    pub fn same_span(&self, o: &Self) -> Result<bool> {
        let (a, b) = self.align(o)?;
        Ok(a.ech.includes(&b.ech) && b.ech.includes(&a.ech))
    }

    pub fn sum(&self, o: &Self) -> Result<Self> {
        let (mut a, b) = self.align(o)?;
        a.ech.absorb(&b.ech);
        a.closure = a.closure.meet(b.closure);
        Ok(a)
    }

    /// `b^k·M`.
    pub fn b_power(&self, k: usize) -> Self {
        let n = self.frame.n();
        let mut ech = Echelon::with_default_order(n, self.level());
        for g in self.ech.gens() {
            ech.insert(shift_up(&g.v, k, n));
        }
        Self::from_parts(self.frame.clone(), ech, self.closure, self.guard)
    }

    /// `N^k(M)`, where `N = b⁻¹a - (α+m)` is the nilpotent part; a submodule since `N`
    /// commutes with `a` and `b`.
    pub fn nil_image(&self, k: usize) -> Self {
        let mut ech = Echelon::with_default_order(self.frame.n(), self.level());
        for g in self.ech.gens() {
            let mut v = g.v.clone();
            for _ in 0..k {
                v = self.frame.nil(&v);
            }
            ech.insert(v);
        }
        Self::from_parts(self.frame.clone(), ech, self.closure, self.guard)
    }

    /// `d(M)`, the largest nilpotent order of an element.
    pub fn nilpotent_order(&self) -> usize {
        self.ech.gens().map(|g| self.frame.order_of(&g.v)).max().unwrap_or(0)
    }

    /// Intersection with the coordinate subspace of the slots in `mask`.
    pub fn intersect_mask(&self, mask: &[bool]) -> Result<Self> {
        let level = self.lim()?;
        let class = Arc::new(mask.iter().map(|&b| u32::from(b)).collect::<Vec<_>>());
        let r = self.ech.reorder(class);
        let n = self.frame.n();
        let mut out = Echelon::with_default_order(n, level);
        for g in r.gens().filter(|g| mask[g.slot] && g.deg <= level) {
            out.insert(truncate_vec(&g.v, level, n));
        }
        Ok(Self::from_parts(self.frame.clone(), out, self.closure, self.guard))
    }

    pub fn intersect(&self, o: &Self) -> Result<Self> {
        let (a, b) = self.align(o)?;
        let level = a.lim()?;
        let k = kernel_pairs(&a.ech, &b.ech, 0).truncate(level);
        Ok(Self::from_parts(a.frame.clone(), k, a.closure.meet(b.closure), a.guard))
    }

    /// `{x ∈ self : b^k x ∈ g}`.
    pub fn preimage(&self, g: &Self, k: usize) -> Result<Self> {
        let (h, g) = self.align(g)?;
        let level = h.level().checked_sub(k + h.guard).ok_or_else(|| {
            FrescoError::GuardExhausted(format!("preimage under b^{k} at level {}", h.level()))
        })?;
        let p = kernel_pairs(&h.ech, &g.ech, k).truncate(level);
        Ok(Self::from_parts(h.frame.clone(), p, h.closure, h.guard))
    }

    /// `S_j(M)`: elements of nilpotent order at most `j`.
    pub fn s_layer(&self, j: usize) -> Result<Self> {
        if j >= self.frame.heights() {
            return Ok(self.clone());
        }
        self.intersect_mask(&self.frame.height_mask(j))
    }

    /// `S_0 ⊆ S_1 ⊆ … ⊆ S_d = M`.
    pub fn semisimple_filtration(&self) -> Result<Vec<Self>> {
        let d = self.nilpotent_order();
        let mut out = (0..d).map(|j| self.s_layer(j)).collect::<Result<Vec<_>>>()?;
        out.push(self.clone());
        Ok(out)
    }

    /// Closure under `b⁻¹a`.
    pub fn saturate(&self) -> Result<Self> {
        if !self.closure.a {
            return Err(FrescoError::Incompatible("saturation needs closure under a".into()));
        }
        let mut m = self.clone();
        m.closure = ClosureSet::SATURATED;
        let images = m.ech.gens().map(|g| m.frame.theta(&g.v)).collect();
        m.extend(images, ClosureSet::SATURATED);
        Ok(m)
    }

    /// Smallest `n` with `b^n·self ⊆ sub`, if any up to the level.
    pub fn codim_exponent(&self, sub: &Self) -> Result<Option<usize>> {
        let (a, b) = self.align(sub)?;
        let n = a.frame.n();
        Ok((0..=a.level()).find(|&k| a.ech.gens().all(|g| b.ech.contains(&shift_up(&g.v, k, n)))))
    }

    /// `dim_ℚ self/w` for `w ⊆ self` of finite codimension.
    pub fn codim(&self, w: &Self) -> Result<usize> {
        let (v, w) = self.align(w)?;
        Ok(quotient_space(&v.ech, &w.ech, v.lim()?)?.rigid().len())
    }

    /// `aM ⊆ bM`.
    pub fn is_simple_pole(&self) -> bool {
        let bm = self.b_power(1);
        self.ech.gens().all(|g| bm.ech.contains(&self.frame.a(&g.v)))
    }

    /// `dim_ℚ M/bM`.
    pub fn b_rank(&self) -> Result<usize> {
        self.check_stable("b_rank")?;
        Ok(self.ech.num_gens())
    }

    /// `N_E(F) = {x ∈ E : b^n x ∈ F for some n}` with `F = self`.
    pub fn normalize_in(&self, e: &Self) -> Result<Self> {
        let (f, e) = self.align(e)?;
        let mut prev = e.preimage(&f, 1)?;
        for k in 2..=e.level() {
            let next = e.preimage(&f, k)?;
            if next.ech.includes(&prev.ech.truncate(next.level())) && prev.truncate(next.level()).ech.includes(&next.ech) {
                return Ok(prev);
            }
            prev = next;
        }
        Err(FrescoError::GuardExhausted("normalization did not stabilize".into()))
    }

    /// `F ∩ bE = bF`.
    pub fn is_normal_in(&self, e: &Self) -> Result<bool> {
        let (f, e) = self.align(e)?;
        let lhs = f.intersect(&e.b_power(1))?;
        let rhs = f.b_power(1).truncate(lhs.level());
        lhs.same_span(&rhs)
    }

    /// Matrix of `-b⁻¹a` on `self / w` for θ-stable `self ⊇ w` of finite codimension.
    fn neg_theta_on(&self, w: &Self) -> Result<Matrix> {
        let (v, w) = self.align(w)?;
        let red = quotient_space(&v.ech, &w.ech, v.lim()?)?;
        let frame = v.frame.clone();
        let m = endo_matrix(&red, |x| frame.theta(x))?;
        Ok(m.scale(&-one()))
    }

    /// Minimal and characteristic polynomials of `-b⁻¹a` on `M^♯/bM^♯`.
    pub fn bernstein(&self) -> Result<BernsteinPair> {
        let h = self.saturate()?;
        h.check_stable("bernstein")?;
        let m = h.neg_theta_on(&h.b_power(1))?;
        Ok(BernsteinPair { minimal: m.min_poly(), characteristic: m.char_poly() })
    }

    /// `B^j_M`: Bernstein polynomial of `S_j(M^♯)/S_{j-1}(M^♯)`.
    pub fn higher_bernstein(&self, j: usize) -> Result<RationalPolynomial> {
        let d = self.nilpotent_order();
        if j == 0 || j > d {
            return Err(FrescoError::IndexOutOfRange { index: j, max: d });
        }
        let h = self.saturate()?;
        h.check_stable("higher_bernstein")?;
        layer_bernstein(&h, j)
    }

    /// All `B^j_M`, `j = 1..=d(M)`, sharing one saturation.
    pub fn higher_bernsteins(&self) -> Result<Vec<RationalPolynomial>> {
        let h = self.saturate()?;
        h.check_stable("higher_bernstein")?;
        (1..=self.nilpotent_order()).map(|j| layer_bernstein(&h, j)).collect()
    }

    /// `M^{[α]}`: the image under projection to the class `cls`, in a frame over that class.
    pub fn primitive_quotient(&self, cls: &ExponentClass) -> Self {
        let comps: Vec<Comp> = self.frame.comps().iter().filter(|c| &c.cls == cls).cloned().collect();
        let frame = Frame::new(self.frame.ambient().clone(), comps, self.frame.max_level());
        let level = self.level();
        let (n, h) = (self.frame.n(), self.frame.heights());
        let keep: Vec<Option<usize>> = self
            .frame
            .comps()
            .iter()
            .map(|c| frame.comp_index(c))
            .collect();
        let mut ech = Echelon::with_default_order(frame.n(), level);
        for g in self.ech.gens() {
            let mut v = frame.zero_vec(level);
            for (p, x) in g.v.iter().enumerate() {
                let (m, s) = (p / n, p % n);
                if let Some(ci) = keep[s / h] {
                    v[m * frame.n() + frame.slot(ci, s % h)] = x.clone();
                }
            }
            ech.insert(v);
        }
        Self::from_parts(frame, ech, self.closure, self.guard)
    }

    /// `M_{[≠α]} = M ∩ (classes other than α)`.
    pub fn complement_part(&self, cls: &ExponentClass) -> Result<Self> {
        let mask: Vec<bool> = self.frame.class_mask(cls).into_iter().map(|b| !b).collect();
        self.intersect_mask(&mask)
    }

    /// Exponent classes met by the module.
    pub fn classes(&self) -> Vec<ExponentClass> {
        let mut out: Vec<ExponentClass> = Vec::new();
        for g in self.ech.gens() {
            for (p, x) in g.v.iter().enumerate() {
                if !x.is_zero() {
                    let c = &self.frame.comp_of(p % self.frame.n()).cls;
                    if !out.contains(c) {
                        out.push(c.clone());
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// `E/F` for a normal submodule `F`.
    pub fn quotient(&self, f: &Self) -> Result<QuotientModule> {
        if !self.includes(f)? {
            return Err(FrescoError::Incompatible("quotient by a non-submodule".into()));
        }
        if !f.is_normal_in(self)? {
            return Err(FrescoError::NotNormal);
        }
        let (total, sub) = self.align(f)?;
        Ok(QuotientModule { total, sub })
    }

    pub fn to_file(&self) -> ModuleFile {
        ModuleFile {
            generators: self.basis().iter().map(|x| ElementRef::Inline(x.to_file())).collect(),
            closure: self.closure.gens(),
            guard: Some(self.guard),
        }
    }
}

/// `B^j` of a saturated module.
fn layer_bernstein(h: &SubModule, j: usize) -> Result<RationalPolynomial> {
    let sj = h.s_layer(j)?;
    let sj1 = h.s_layer(j - 1)?;
    let w = sj1.sum(&sj.b_power(1))?;
    Ok(sj.neg_theta_on(&w)?.min_poly())
}

/// Bernstein data of `E/F`, through `(E/F)^♯ = E^♯/N_{E^♯}(F)`.
pub fn quotient_bernstein(e: &SubModule, f: &SubModule) -> Result<BernsteinPair> {
    let h = e.saturate()?;
    h.check_stable("quotient bernstein")?;
    let n = f.normalize_in(&h)?;
    let h = h.truncate(n.level());
    let w = n.sum(&h.b_power(1))?;
    let m = h.neg_theta_on(&w)?;
    Ok(BernsteinPair { minimal: m.min_poly(), characteristic: m.char_poly() })
}

/// `E/F` with `F` normal in `E`, known modulo `b^{L+1}`.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    total: SubModule,
    sub: SubModule,
}

impl QuotientModule {
    pub fn total(&self) -> &SubModule {
        &self.total
    }

    pub fn sub(&self) -> &SubModule {
        &self.sub
    }

    /// `dim E/(F + bE)`.
    pub fn b_rank(&self) -> Result<usize> {
        let w = self.sub.sum(&self.total.b_power(1))?;
        let red = quotient_space(&self.total.ech, &w.ech, self.total.lim()?)?;
        Ok(red.rigid().len())
    }

    pub fn bernstein(&self) -> Result<BernsteinPair> {
        quotient_bernstein(&self.total, &self.sub)
    }

    /// Coset representatives of the truncation `E/(F + b^{L'+1}Ξ)` with `L' = level - guard`.
    pub fn transversal(&self) -> Result<Vec<XiElement>> {
        let red = self.truncated_space()?;
        let level = red.level();
        Ok(red.rigid().iter().map(|r| self.total.frame.to_element(&r.v, level)).collect())
    }

    fn truncated_space(&self) -> Result<Echelon> {
        let level = self.total.lim()?;
        let e = self.total.ech.truncate(level);
        let f = self.sub.ech.truncate(level);
        quotient_space(&e, &f, level)
    }

    /// Matrix of a generator on the truncated coset space; `B⁻¹A` needs both modules saturated.
    pub fn action_matrix(&self, g: Gen) -> Result<Matrix> {
        let red = self.truncated_space()?;
        let frame = self.total.frame.clone();
        match g {
            Gen::A => endo_matrix(&red, |x| frame.a(x)),
            Gen::B => endo_matrix(&red, |x| frame.b(x)),
            Gen::BInvA => endo_matrix(&red, |x| frame.theta(x)),
        }
    }

    pub fn is_zero(&self) -> Result<bool> {
        self.sub.includes(&self.total)
    }
}

/// An element given inline or by path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Inline(ElementFile),
    Path(String),
}

/// On-disk form of a module: generators and the closure set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub generators: Vec<ElementRef>,
    #[serde(default = "default_closure")]
    pub closure: Vec<Gen>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<usize>,
}

fn default_closure() -> Vec<Gen> {
    vec![Gen::A, Gen::B]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn amb(alphas: &[Q], n: usize, dim: usize) -> Ambient {
        Ambient::new(alphas.iter().map(|a| ExponentClass::new(a.clone()).unwrap()).collect(), n, dim)
    }

    fn phi2(cert: usize) -> (Ambient, XiElement) {
        let a = amb(&[qf(1, 2)], 2, 1);
        let x = XiElement::monomial(&a, cert, qf(1, 2), 1, 2, 0)
            .unwrap()
            .add(&XiElement::monomial(&a, cert, qf(1, 2), 0, 0, 0).unwrap());
        (a, x)
    }

    #[test]
    fn phi2_example() {
        let (a, x) = phi2(40);
        let m = SubModule::generate(&a, 40, &[x], ClosureSet::AB, 8).unwrap();
        assert_eq!(m.b_rank().unwrap(), 3);
        assert!(!m.is_simple_pole());
        assert_eq!(m.nilpotent_order(), 3);
        let b = m.bernstein().unwrap();
        let h = qf(-1, 2);
        let th = qf(-3, 2);
        assert_eq!(b.characteristic, RationalPolynomial::from_roots(&[th.clone(), th.clone(), h.clone()]));
        let hb = m.higher_bernsteins().unwrap();
        assert_eq!(hb[0], RationalPolynomial::linear(&h));
        assert_eq!(hb[1], RationalPolynomial::linear(&th));
        assert_eq!(hb[2], RationalPolynomial::linear(&th));
        let s1 = m.s_layer(1).unwrap();
        assert_eq!(s1.b_rank().unwrap(), 1);
        assert_eq!(s1.bernstein().unwrap().characteristic, RationalPolynomial::linear(&qf(-5, 2)));
        assert!(s1.is_simple_pole());
    }

    #[test]
    fn theme_of_log() {
        let a = amb(&[qf(1, 2)], 1, 1);
        let x = XiElement::monomial(&a, 20, qf(1, 2), 0, 1, 0).unwrap();
        let m = SubModule::generate(&a, 20, &[x], ClosureSet::AB, 6).unwrap();
        assert_eq!(m.b_rank().unwrap(), 2);
        let s = m.saturate().unwrap();
        assert_eq!(s.b_rank().unwrap(), 2);
        let e0 = XiElement::monomial(&a, 20, qf(1, 2), 0, 0, 0).unwrap();
        assert!(!m.contains(&e0).unwrap());
        assert!(s.contains(&e0).unwrap());
        assert!(s.same_span(&s.saturate().unwrap()).unwrap());
        let half = qf(-1, 2);
        assert_eq!(m.bernstein().unwrap().minimal, RationalPolynomial::from_roots(&[half.clone(), half]));
    }

    #[test]
    fn rank_one_module() {
        let a = amb(&[qf(1, 2)], 0, 1);
        let x = XiElement::monomial(&a, 20, qf(1, 2), 0, 0, 0).unwrap();
        let m = SubModule::generate(&a, 20, &[x], ClosureSet::AB, 6).unwrap();
        assert_eq!(m.b_rank().unwrap(), 1);
        assert!(m.is_simple_pole());
        assert!(m.same_span(&m.saturate().unwrap()).unwrap());
        let z = SubModule::generate(&a, 20, &[], ClosureSet::AB, 6).unwrap();
        assert_eq!(z.b_rank().unwrap(), 0);
    }

    #[test]
    fn normalization() {
        let (a, x) = phi2(40);
        let e = SubModule::generate(&a, 40, &[x], ClosureSet::AB, 8).unwrap();
        let be = e.b_power(1);
        assert!(be.normalize_in(&e).unwrap().same_span(&e).unwrap());
        let s1 = e.s_layer(1).unwrap();
        assert!(s1.is_normal_in(&e).unwrap());
        assert!(s1.normalize_in(&e).unwrap().same_span(&s1).unwrap());
        assert!(!be.is_normal_in(&e).unwrap());
    }

    #[test]
    fn quotient_by_first_layer() {
        let (a, x) = phi2(40);
        let e = SubModule::generate(&a, 40, &[x], ClosureSet::AB, 8).unwrap();
        let s1 = e.s_layer(1).unwrap();
        let qm = e.quotient(&s1).unwrap();
        assert_eq!(qm.b_rank().unwrap(), 2);
        let g = e.nil_image(1);
        assert_eq!(qm.bernstein().unwrap().characteristic, g.bernstein().unwrap().characteristic);
        assert!(e.quotient(&e).unwrap().is_zero().unwrap());
        let _ = q(0);
    }
}
