//! Modules generated by one element: the fresco test, Jordan–Hölder sequences, the shifted
//! higher Bernstein polynomials, kernels of operators inside expansion spaces, Jordan chains
//! and the search for witness frescos.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::echelon::{shift_up, Vector};
use crate::error::{FrescoError, Result};
use crate::frame::{Comp, Frame};
use crate::matrix::Matrix;
use crate::module::{quotient_bernstein, BernsteinPair, ClosureSet, SubModule};
use crate::ops::ABOperator;
use crate::poly::{mul_raw, RationalPolynomial};
use crate::rational::{class_of, fmt_q, is_natural, one, q, zero, Q};
use crate::xi::{Ambient, ExponentClass, Gen, XiElement};

/// `dim M/(aM + bM) = 1`.
pub fn is_fresco(m: &SubModule) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    let frame = m.frame();
    let images = m
        .echelon()
        .gens()
        .flat_map(|g| [frame.a(&g.v), frame.b(&g.v)])
        .collect();
    let w = SubModule::generate_vectors(frame, m.level(), images, ClosureSet::B, m.guard());
    Ok(m.codim(&w)? == 1)
}

/// A Jordan–Hölder sequence `F_1 ⊂ … ⊂ F_r = F` with `F_j/F_{j-1} ≅ E_{λ_j}`.
#[derive(Clone, Debug)]
pub struct JordanHolderData {
    pub chain: Vec<SubModule>,
    pub quotient_exponents: Vec<Q>,
    /// `r_j = rank(F/F_j)`.
    pub co_ranks: Vec<usize>,
}

impl JordanHolderData {
    /// `∏_j (x + λ_j - r_j)`, the Bernstein polynomial predicted by the exact-sequence rule.
    pub fn shifted_bernstein(&self) -> RationalPolynomial {
        let roots: Vec<Q> = self
            .quotient_exponents
            .iter()
            .zip(&self.co_ranks)
            .map(|(l, &r)| q(r as i64) - l)
            .collect();
        RationalPolynomial::from_roots(&roots)
    }

    pub fn report(&self) -> JordanHolderReport {
        JordanHolderReport {
            quotient_exponents: self.quotient_exponents.iter().map(fmt_q).collect(),
            co_ranks: self.co_ranks.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanHolderReport {
    pub quotient_exponents: Vec<String>,
    pub co_ranks: Vec<usize>,
}

/// Jordan–Hölder sequence from the flag of coordinate submodules ordered by log degree.
///
/// Intersecting with the flag `Y_1 ⊂ Y_2 ⊂ …` (slots sorted by height, then component) gives
/// normal submodules with quotients of rank at most one; the echelon basis for the reversed
/// slot order exhibits them all at once.
pub fn jordan_holder(f: &SubModule) -> Result<JordanHolderData> {
    let r = f.b_rank()?;
    let frame = f.frame();
    let (n, h, nc) = (frame.n(), frame.heights(), frame.comps().len());
    let pos = |s: usize| (s % h) * nc + s / h;
    let class = Arc::new((0..n).map(|s| (n - 1 - pos(s)) as u32).collect::<Vec<_>>());
    let flag = f.echelon().reorder(class);
    let lim = f
        .level()
        .checked_sub(f.guard())
        .ok_or_else(|| FrescoError::GuardExhausted("flag intersection".into()))?;
    let mut gens: Vec<_> = flag.gens().filter(|g| g.deg <= lim).collect();
    if gens.len() != r {
        return Err(FrescoError::SearchFailed(format!("{} flag generators for rank {r}", gens.len())));
    }
    gens.sort_by_key(|g| pos(g.slot));
    let mut chain = Vec::with_capacity(r);
    let mut quotient_exponents = Vec::with_capacity(r);
    for i in 1..=r {
        let vs = gens[..i].iter().map(|g| g.v.clone()).collect();
        chain.push(SubModule::generate_vectors(frame, lim, vs, ClosureSet::AB, f.guard()));
        let g = gens[i - 1];
        quotient_exponents.push(frame.comp_of(g.slot).cls.alpha() + q(g.deg as i64));
    }
    let co_ranks = (1..=r).map(|i| r - i).collect();
    Ok(JordanHolderData { chain, quotient_exponents, co_ranks })
}

/// `B_{S_j(F)/S_{j-1}(F)}(x - r_j)` with `r_j` the co-rank of `S_j(F)` in `F`.
///
/// Multiplying by `b^{-r}` raises every exponent by `r`, hence the sign.
pub fn higher_bernstein_shifted(f: &SubModule, j: usize) -> Result<RationalPolynomial> {
    let d = f.nilpotent_order();
    if j == 0 || j > d {
        return Err(FrescoError::IndexOutOfRange { index: j, max: d });
    }
    let r = f.b_rank()?;
    let sj = f.s_layer(j)?;
    let sj1 = f.s_layer(j - 1)?;
    let rj = r - sj.b_rank()?;
    Ok(quotient_bernstein(&sj, &sj1)?.minimal.shift(&q(-(rj as i64))))
}

/// Bernstein data of `S_j(F)/S_{j-1}(F)` through its image `N^{j-1}(S_j(F))`.
pub fn layer_bernstein_by_nil(f: &SubModule, j: usize) -> Result<BernsteinPair> {
    if j == 0 {
        return Err(FrescoError::IndexOutOfRange { index: 0, max: f.nilpotent_order() });
    }
    f.s_layer(j)?.nil_image(j - 1).bernstein()
}

fn eval_matrix_poly(coeffs: &[Q], x: &Matrix) -> Matrix {
    let n = x.rows;
    let mut acc = Matrix::zeros(n, n);
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add_scalar(c);
    }
    acc
}

fn hstack(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.rows, a.cols + b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out[(i, j)] = a[(i, j)].clone();
        }
        for j in 0..b.cols {
            out[(i, a.cols + j)] = b[(i, j)].clone();
        }
    }
    out
}

fn column(m: &Matrix, j: usize) -> Vec<Q> {
    (0..m.rows).map(|i| m[(i, j)].clone()).collect()
}

/// Solutions of `P·x = 0` in the expansion space, as an echelon basis.
///
/// Writing `b^p a^q = b^{p+q} ∏_{i<q}(θ+i)` with `θ = b⁻¹a` gives `P = Σ_n b^n Π_n(θ)`, and the
/// degree-`t` part of `P·Σ b^s x_s` is `Σ_n Π_n(θ_0 + t - n) x_{t-n}`. The system is solved one
/// degree at a time, carrying the free parameters forward.
pub fn kernel_realize(p: &ABOperator, ambient: &Ambient, trunc: usize) -> Result<Vec<XiElement>> {
    let mut pis: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
    for (qd, pp, c) in p.terms() {
        let mut rising = vec![one()];
        for i in 0..qd {
            rising = mul_raw(&rising, &[q(i as i64), one()]);
        }
        let e = pis.entry(pp + qd).or_default();
        if e.len() < rising.len() {
            e.resize(rising.len(), zero());
        }
        for (a, r) in e.iter_mut().zip(&rising) {
            *a += c * r;
        }
    }
    pis.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    let Some(&n0) = pis.keys().next() else { return Err(FrescoError::EmptyKernel) };
    let top = trunc.min(p.validity());
    let t_max = top
        .checked_sub(n0)
        .ok_or_else(|| FrescoError::GuardExhausted(format!("truncation {top} below operator order {n0}")))?;

    let comps: Vec<Comp> = ambient
        .alpha_set
        .iter()
        .flat_map(|c| (0..ambient.value_dim).map(move |k| Comp { cls: c.clone(), k }))
        .collect();
    let frame = Frame::new(ambient.clone(), comps, t_max);
    let n = frame.n();
    let mut theta0 = Matrix::zeros(n, n);
    for s in 0..n {
        theta0[(s, s)] = frame.comp_of(s).cls.alpha().clone();
        if frame.height_of(s) + 1 < frame.heights() {
            theta0[(s, s + 1)] = one();
        }
    }

    let mut xs: Vec<Matrix> = Vec::new();
    let mut k = 0usize;
    for t in 0..=t_max {
        let s = t + n0;
        let mut rhs = Matrix::zeros(n, k);
        for (&nn, pi) in pis.range(n0 + 1..s + 1) {
            let term = eval_matrix_poly(pi, &theta0.add_scalar(&q((s - nn) as i64))).mul(&xs[s - nn]);
            rhs = rhs.add(&term.scale(&-one()));
        }
        let a = eval_matrix_poly(&pis[&n0], &theta0.add_scalar(&q(t as i64)));
        let left = a.transpose().kernel();
        if !left.is_empty() && k > 0 {
            let c = Matrix::from_rows(left.iter().map(|y| Matrix::from_rows(vec![y.clone()]).mul(&rhs).row(0).to_vec()).collect());
            let keep = c.kernel();
            if keep.len() < k {
                let sub = Matrix::from_cols(&keep, k);
                for x in xs.iter_mut() {
                    *x = x.mul(&sub);
                }
                rhs = rhs.mul(&sub);
                k = keep.len();
            }
        }
        let mut cols: Vec<Vec<Q>> = (0..k)
            .map(|j| a.solve(&column(&rhs, j)).expect("constraints make the system consistent"))
            .collect();
        let ker = a.kernel();
        let extra = ker.len();
        cols.extend(ker);
        if extra > 0 {
            for x in xs.iter_mut() {
                *x = hstack(x, &Matrix::zeros(n, extra));
            }
            k += extra;
        }
        xs.push(Matrix::from_cols(&cols, n));
    }
    if k == 0 {
        return Err(FrescoError::EmptyKernel);
    }
    let rows: Vec<Vec<Q>> = (0..k)
        .map(|j| xs.iter().flat_map(|x| column(x, j)).collect())
        .collect();
    let (r, piv) = Matrix::from_rows(rows).rref();
    Ok((0..piv.len()).map(|i| frame.to_element(r.row(i), t_max)).collect())
}

/// Log degree of the lowest-shift part of `x`, maximal over that shift.
pub fn head_log_degree(x: &XiElement) -> Option<(usize, usize)> {
    let m0 = x.terms().keys().map(|t| t.m).min()?;
    let j = x.terms().keys().filter(|t| t.m == m0).map(|t| t.j).max()?;
    Some((m0, j))
}

/// Among kernel solutions, one whose head has maximal log degree.
pub fn realized_generator(sols: &[XiElement]) -> Option<&XiElement> {
    sols.iter().max_by_key(|x| head_log_degree(x).map(|(m, j)| (j, std::cmp::Reverse(m))))
}

/// A chain `w_1, …, w_p` with `a w_j = (α+m) b w_j + b w_{j-1}`.
#[derive(Clone, Debug)]
pub struct JordanChain {
    pub m: usize,
    pub chain: Vec<XiElement>,
}

impl JordanChain {
    /// Checks the chain relation with the closed-form actions.
    pub fn verify(&self, cls: &ExponentClass) -> Result<bool> {
        let beta = cls.alpha() + q(self.m as i64);
        for (i, w) in self.chain.iter().enumerate() {
            let lhs = w.act(Gen::A)?;
            let mut rhs = w.act(Gen::B)?.scale(&beta);
            if i > 0 {
                rhs = rhs.add(&self.chain[i - 1].act(Gen::B)?);
            }
            if !lhs.same_as(&rhs) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Largest `N`-stable subspace of the column span of `basis`.
fn nil_stable(basis: Vec<Vec<Q>>, nil: impl Fn(&[Q]) -> Vec<Q>, dim: usize) -> Vec<Vec<Q>> {
    let mut cur = basis;
    loop {
        if cur.is_empty() {
            return cur;
        }
        let b = Matrix::from_cols(&cur, dim);
        let nb: Vec<Vec<Q>> = cur.iter().map(|v| nil(v)).collect();
        // (c, c') with N·B·c = B·c'
        let mut stacked = nb.clone();
        stacked.extend(cur.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
        let sys = Matrix::from_cols(&stacked, dim);
        let ker = sys.kernel();
        let cs: Vec<Vec<Q>> = ker.iter().map(|v| v[..cur.len()].to_vec()).collect();
        let span = Matrix::from_cols(&cs, cur.len());
        let next_m = b.mul(&span);
        let (r, piv) = next_m.transpose().rref();
        let next: Vec<Vec<Q>> = (0..piv.len()).map(|i| r.row(i).to_vec()).collect();
        if next.len() == cur.len() {
            return cur;
        }
        cur = next;
    }
}

/// Searches degree by degree for a pure chain of length `p` in class `cls` inside `f`.
pub fn find_jordan_chain(f: &SubModule, cls: &ExponentClass, p: usize) -> Result<JordanChain> {
    let fa = f.primitive_quotient(cls);
    if p == 0 || p > fa.nilpotent_order() {
        return Err(FrescoError::NoRoot);
    }
    let hb = fa.higher_bernstein(p)?;
    if !hb.roots().iter().any(|r| crate::xi::shift_of(cls, r).is_some()) {
        return Err(FrescoError::NoRoot);
    }
    let frame = f.frame();
    let (n, level) = (frame.n(), f.level());
    let target: Vec<bool> = (0..n).map(|s| &frame.comp_of(s).cls == cls && frame.height_of(s) < p).collect();
    let lim = level
        .checked_sub(f.guard())
        .ok_or_else(|| FrescoError::GuardExhausted("jordan chain search".into()))?;
    let class = Arc::new(target.iter().map(|&b| u32::from(b)).collect::<Vec<_>>());
    let inside = f.echelon().reorder(class);
    let gens: Vec<_> = inside.gens().filter(|g| target[g.slot] && g.deg <= lim).collect();
    let block = |v: &[Q], m: usize| v[m * n..(m + 1) * n].to_vec();
    for m in 0..=lim {
        let vs: Vec<Vector> = gens.iter().filter(|g| g.deg <= m).map(|g| shift_up(&g.v, m - g.deg, n)).collect();
        if vs.is_empty() {
            continue;
        }
        // combinations vanishing above degree m
        let tail: Vec<Vec<Q>> = vs.iter().map(|v| v[(m + 1) * n..(lim + 1) * n].to_vec()).collect();
        let combos = if tail[0].is_empty() {
            Matrix::zeros(0, vs.len()).kernel()
        } else {
            Matrix::from_cols(&tail, tail[0].len()).kernel()
        };
        let u: Vec<Vec<Q>> = combos
            .iter()
            .map(|c| {
                let mut w = vec![zero(); n];
                for (ci, v) in c.iter().zip(&vs) {
                    if !ci.is_zero() {
                        for (x, y) in w.iter_mut().zip(block(v, m)) {
                            *x += ci * y;
                        }
                    }
                }
                w
            })
            .collect();
        let stable = nil_stable(u, |v| frame.nil(v), n);
        let top = stable
            .iter()
            .find(|w| w.iter().enumerate().any(|(s, x)| !x.is_zero() && frame.height_of(s) == p - 1));
        let Some(w) = top else { continue };
        let mut full = frame.zero_vec(level);
        full[m * n..(m + 1) * n].clone_from_slice(w);
        let mut chain = Vec::with_capacity(p);
        let mut cur = full;
        for _ in 0..p {
            chain.push(frame.to_element(&cur, level));
            cur = frame.nil(&cur);
        }
        chain.reverse();
        let jc = JordanChain { m, chain };
        if jc.verify(cls)? {
            return Ok(jc);
        }
    }
    Err(FrescoError::SearchExhausted)
}

/// Searches `S_j(E) ∖ S_{j-1}(E)` for `z` such that `B[a]z` has a root of some `B^h`, `h ≥ j`,
/// in `-β - ℕ` (exactly `-β` when `j = d(E^{[α]})`).
pub fn find_witness_fresco(e: &SubModule, j: usize, beta: &Q, seed: u64, budget: usize) -> Result<XiElement> {
    let target = -beta.clone();
    if !e.higher_bernstein(j)?.is_root(&target) {
        return Err(FrescoError::NoRoot);
    }
    let cls = ExponentClass::new(class_of(beta))?;
    let exact = j == e.primitive_quotient(&cls).nilpotent_order();
    let sj = e.s_layer(j)?;
    let sj1 = e.s_layer(j - 1)?;
    let frame = sj.frame().clone();
    let n = frame.n();
    let base: Vec<Vector> = sj.gen_vectors();
    let mut cands: Vec<Vector> = base.clone();
    cands.extend(base.iter().map(|v| shift_up(v, 1, n)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while cands.len() < budget && !base.is_empty() {
        let mut v = vec![zero(); base[0].len()];
        for g in &base {
            let c: i64 = rng.gen_range(-3..=3);
            let k: usize = rng.gen_range(0..=1);
            if c != 0 {
                for (x, y) in v.iter_mut().zip(shift_up(g, k, n)) {
                    *x += y * q(c);
                }
            }
        }
        cands.push(v);
    }
    let accept = |r: &Q| {
        if exact {
            r == &target
        } else {
            let d = &target - r;
            is_natural(&d)
        }
    };
    for z in cands.into_iter().take(budget.max(1)) {
        if sj1.contains_vector(&z) {
            continue;
        }
        let f = SubModule::generate_vectors(&frame, sj.level(), vec![z.clone()], ClosureSet::AB, e.guard());
        let hbs = match f.higher_bernsteins() {
            Ok(v) => v,
            Err(FrescoError::RankUnstable(_) | FrescoError::GuardExhausted(_)) => continue,
            Err(err) => return Err(err),
        };
        if hbs.iter().skip(j - 1).any(|b| b.roots().iter().any(accept)) {
            return Ok(frame.to_element(&z, sj.level()));
        }
    }
    Err(FrescoError::WitnessNotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::StructureWord;
    use crate::rational::qf;

    fn phi2_module() -> SubModule {
        let a = Ambient::new(vec![ExponentClass::new(qf(1, 2)).unwrap()], 2, 1);
        let x = XiElement::monomial(&a, 40, qf(1, 2), 1, 2, 0)
            .unwrap()
            .add(&XiElement::monomial(&a, 40, qf(1, 2), 0, 0, 0).unwrap());
        SubModule::generate(&a, 40, &[x], ClosureSet::AB, 8).unwrap()
    }

    #[test]
    fn phi2_example_structure() {
        let f = phi2_module();
        assert!(is_fresco(&f).unwrap());
        let jh = jordan_holder(&f).unwrap();
        assert_eq!(jh.chain.len(), 3);
        let (h, th) = (qf(-1, 2), qf(-3, 2));
        assert_eq!(jh.shifted_bernstein(), RationalPolynomial::from_roots(&[h.clone(), th.clone(), th.clone()]));
        for j in 1..=3 {
            assert_eq!(higher_bernstein_shifted(&f, j).unwrap(), f.higher_bernstein(j).unwrap(), "level {j}");
        }
    }

    #[test]
    fn kernel_of_theme_operator() {
        let a = Ambient::new(vec![ExponentClass::new(q(1)).unwrap()], 1, 1);
        let p = StructureWord::linear(&[q(2), q(1)]).unwrap().expand(24).unwrap();
        let sols = kernel_realize(&p, &a, 20).unwrap();
        assert_eq!(sols.len(), 2);
        let e = realized_generator(&sols).unwrap();
        assert_eq!(head_log_degree(e), Some((0, 2)));
        for s in &sols {
            assert!(p.apply(s).unwrap().is_zero());
        }
        let m = SubModule::generate(&a, 18, std::slice::from_ref(e), ClosureSet::AB, 6).unwrap();
        assert_eq!(m.b_rank().unwrap(), 2);
        assert_eq!(m.bernstein().unwrap().characteristic, RationalPolynomial::from_roots(&[q(-1), q(-1)]));
    }

    #[test]
    fn kernel_of_rank_one_relation() {
        let a = Ambient::new(vec![ExponentClass::new(qf(1, 3)).unwrap()], 0, 1);
        let p = ABOperator::linear(&qf(1, 3), 12);
        let sols = kernel_realize(&p, &a, 12).unwrap();
        assert_eq!(sols.len(), 1);
        let e0 = XiElement::monomial(&a, 11, qf(1, 3), 0, 0, 0).unwrap();
        assert!(sols[0].same_as(&e0));
    }

    #[test]
    fn jordan_chain_in_phi2_example() {
        let f = phi2_module();
        let cls = ExponentClass::new(qf(1, 2)).unwrap();
        let jc = find_jordan_chain(&f, &cls, 2).unwrap();
        assert!(jc.m >= 1);
        assert_eq!(jc.chain.len(), 2);
        assert!(jc.verify(&cls).unwrap());
        for w in &jc.chain {
            assert!(f.contains(w).unwrap());
        }
    }
}
