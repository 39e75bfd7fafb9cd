//! The checked invariants. Each property draws one input from a seed and returns a verdict;
//! comparisons are exact. Truncation trouble surfaces as an error and is retried by the suite.

use fresco_core::fresco::{
    find_jordan_chain, find_witness_fresco, higher_bernstein_shifted, is_fresco, jordan_holder, layer_bernstein_by_nil,
};
use fresco_core::module::{ClosureSet, ModuleFile, SubModule};
use fresco_core::ops::{ABOperator, StructureWord};
use fresco_core::poles::{mellin_profile, predict_pole, xi_ladder};
use fresco_core::rational::{is_natural, one, q, qf};
use fresco_core::xi::{location, shift_of};
use fresco_core::{Ambient, ExponentClass, FrescoError, Gen, RationalPolynomial, Result, XiElement, Q};
use rand::Rng;

use crate::input::{Input, InputFile};
use crate::random::{
    random_ambient, random_element, random_fresco_generator, random_lambda, random_module_generators, random_operator,
    random_unit, random_word, rng_for, SampleSpec,
};

/// Truncation order used for operator identities.
pub const OP_TRUNC: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ctx {
    pub cert: usize,
    pub guard: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    /// Precondition not met, or a bounded search came back empty.
    Skip(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Element,
    Division,
    Action,
    Power,
    Word,
    Module,
    /// Modules with `d ≥ 2`.
    DeepModule,
    Fresco,
}

type Check = fn(&Input, &Ctx) -> Result<Verdict>;

pub struct Property {
    pub name: &'static str,
    pub kind: Kind,
    pub about: &'static str,
    check: Check,
}

impl Property {
    pub fn check(&self, input: &Input, ctx: &Ctx) -> Result<Verdict> {
        (self.check)(input, ctx)
    }

    pub fn sample(&self, seed: u64, spec: &SampleSpec) -> Input {
        sample(self.kind, seed, spec)
    }
}

impl std::fmt::Debug for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Property").field("name", &self.name).field("kind", &self.kind).finish()
    }
}

pub fn sample(kind: Kind, seed: u64, spec: &SampleSpec) -> Input {
    let mut rng = rng_for(seed);
    match kind {
        Kind::Element => {
            let amb = random_ambient(&mut rng, spec, 3);
            let small = SampleSpec { cert_degree: spec.cert_degree.min(20), ..spec.clone() };
            Input::Element(random_element(&mut rng, &amb, &small))
        }
        Kind::Division => {
            let mut op = random_operator(&mut rng, OP_TRUNC);
            if rng.gen_bool(0.3) {
                op = op.compose(&ABOperator::from_series(random_unit(&mut rng, OP_TRUNC)));
            }
            Input::Division { op, lambda: random_lambda(&mut rng) }
        }
        Kind::Action => {
            let amb = random_ambient(&mut rng, spec, 2);
            let small = SampleSpec { cert_degree: 20, ..spec.clone() };
            let left = random_operator(&mut rng, OP_TRUNC);
            let right = random_operator(&mut rng, OP_TRUNC);
            Input::Action { left, right, element: random_element(&mut rng, &amb, &small) }
        }
        Kind::Power => Input::Power(rng.gen_range(1..=8)),
        Kind::Word => Input::Word(random_word(&mut rng)),
        Kind::Module => Input::Module(random_module_generators(&mut rng, spec, 1)),
        Kind::DeepModule => Input::Module(random_module_generators(&mut rng, spec, 2)),
        Kind::Fresco => Input::Fresco(random_fresco_generator(&mut rng, spec, 1)),
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Ok(Verdict::Fail(format!($($msg)+)));
        }
    };
}

/// The same element, certified to `cert`; drawn elements are finite sums, so this is exact.
pub fn recert(x: &XiElement, cert: usize) -> XiElement {
    XiElement::from_terms(x.ambient().clone(), cert, x.terms().iter().map(|(t, c)| (t.clone(), c.clone())))
        .expect("terms already admitted")
}

pub fn build(gens: &[XiElement], ctx: &Ctx) -> Result<SubModule> {
    let amb = gens
        .iter()
        .map(XiElement::ambient)
        .fold(None::<Ambient>, |acc, a| Some(acc.map_or_else(|| a.clone(), |b| b.union(a))))
        .ok_or_else(|| FrescoError::Incompatible("no generators".into()))?;
    let gs: Vec<XiElement> = gens.iter().map(|g| recert(g, ctx.cert)).collect();
    SubModule::generate(&amb, ctx.cert, &gs, ClosureSet::AB, ctx.guard)
}

fn hb_or_one(m: &SubModule, j: usize) -> Result<RationalPolynomial> {
    if j == 0 || j > m.nilpotent_order() {
        Ok(RationalPolynomial::one())
    } else {
        m.higher_bernstein(j)
    }
}

/// Some root of `p` in `x + ℕ`.
fn has_root_in_up(p: &RationalPolynomial, x: &Q) -> bool {
    p.roots().iter().any(|r| is_natural(&(r - x)))
}

fn class_of_root(r: &Q) -> ExponentClass {
    ExponentClass::new(fresco_core::rational::class_of(&-r.clone())).expect("class in (0,1]")
}

fn elements(input: &Input) -> &XiElement {
    match input {
        Input::Element(x) | Input::Fresco(x) => x,
        _ => panic!("property expects an element input"),
    }
}

fn generators(input: &Input) -> &[XiElement] {
    match input {
        Input::Module(gs) => gs,
        Input::Fresco(x) => std::slice::from_ref(x),
        _ => panic!("property expects a module input"),
    }
}

// ---------------------------------------------------------------------------------------------
// elements and operators

fn commutation(input: &Input, _: &Ctx) -> Result<Verdict> {
    let x = elements(input);
    let (a, b) = (x.act(Gen::A)?, x.act(Gen::B)?);
    let lhs = b.act(Gen::A)?.sub(&a.act(Gen::B)?);
    ensure!(lhs.same_as(&b.act(Gen::B)?), "ab - ba != b^2 on {x}");
    Ok(Verdict::Pass)
}

fn inverse_pair(input: &Input, _: &Ctx) -> Result<Verdict> {
    let x = elements(input);
    let ax = x.act(Gen::A)?;
    ensure!(x.act(Gen::BInvA)?.act(Gen::B)?.same_as(&ax), "b(b^-1 a x) != ax for {x}");
    let tb = x.act(Gen::B)?.act(Gen::BInvA)?;
    ensure!(tb.same_as(&ax.add(&x.act(Gen::B)?)), "b^-1 a (bx) != (a + b)x for {x}");
    for c in &x.ambient().alpha_set {
        let p = x.project_class(c);
        for g in [Gen::A, Gen::B, Gen::BInvA] {
            ensure!(p.act(g)?.same_as(&x.act(g)?.project_class(c)), "projection to {c} does not commute with {g:?}");
        }
    }
    Ok(Verdict::Pass)
}

fn division_round_trip(input: &Input, _: &Ctx) -> Result<Verdict> {
    let Input::Division { op, lambda } = input else { panic!("division input") };
    let (qt, r) = op.divide_linear(lambda);
    let back = qt.compose(&ABOperator::linear(lambda, op.trunc_order())).add(&ABOperator::from_series(r));
    ensure!(back.same_as(op), "Q(a - {lambda} b) + R != P for P = {op}");
    Ok(Verdict::Pass)
}

fn binomial_identity(input: &Input, _: &Ctx) -> Result<Verdict> {
    let Input::Power(n) = *input else { panic!("power input") };
    let (a, b) = (ABOperator::a(OP_TRUNC), ABOperator::b(OP_TRUNC));
    let apb = a.add(&b).pow(n);
    ensure!(apb.same_as(&a.pow(n - 1).compose(&a.add(&b.scale(&q(n as i64))))), "(a+b)^{n} != a^{}(a + {n}b)", n - 1);
    ensure!(b.compose(&apb).same_as(&a.pow(n).compose(&b)), "b(a+b)^{n} != a^{n} b");
    let amb = Ambient::new(vec![ExponentClass::new(qf(1, 2))?], 1, 1);
    let x = XiElement::monomial(&amb, 20, qf(1, 2), 0, 1, 0)?;
    ensure!(!apb.apply(&x)?.is_zero(), "(a+b)^{n} kills a nonzero element");
    Ok(Verdict::Pass)
}

fn linear_word_bernstein(input: &Input, _: &Ctx) -> Result<Verdict> {
    let Input::Word(ls) = input else { panic!("word input") };
    let k = ls.len();
    let word = StructureWord::linear(ls)?;
    let p = word.expand(OP_TRUNC)?;
    let got = p.bernstein_homogeneous()?;
    let roots: Vec<Q> = ls.iter().enumerate().map(|(j, l)| q((k - 1 - j) as i64) - l).collect();
    let want = RationalPolynomial::from_roots(&roots);
    ensure!(got == want, "B_P = {got} but the factor formula gives {want}");
    ensure!(word.expand(OP_TRUNC + 4)?.bernstein_homogeneous()? == got, "B_P changes with the truncation order");
    // (-b)^k B_P(-b^{-1}a) = P, read on s^{β-1}: P e_β = (-1)^k B_P(-β) b^k e_β
    let alpha = qf(1, 3);
    let amb = Ambient::new(vec![ExponentClass::new(alpha.clone())?], 0, 1);
    for m in 0..=k {
        let e = XiElement::monomial(&amb, 20, alpha.clone(), m, 0, 0)?;
        let beta = &alpha + q(m as i64);
        let sign = if k % 2 == 0 { one() } else { -one() };
        let rhs = e.act_n(Gen::B, k)?.scale(&(sign * got.eval(&-beta.clone())));
        ensure!(p.apply(&e)?.same_as(&rhs), "P s^(β-1) disagrees with B_P at β = {beta}");
    }
    Ok(Verdict::Pass)
}

fn action_multiplicative(input: &Input, _: &Ctx) -> Result<Verdict> {
    let Input::Action { left, right, element } = input else { panic!("action input") };
    let lhs = left.compose(right).apply(element)?;
    let rhs = left.apply(&right.apply(element)?)?;
    ensure!(lhs.same_as(&rhs), "(PR)x != P(Rx)");
    Ok(Verdict::Pass)
}

// ---------------------------------------------------------------------------------------------
// modules

fn higher_divides_bernstein(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let m = build(generators(input), ctx)?;
    let b = m.bernstein()?.minimal;
    let hb = m.higher_bernsteins()?;
    for (j, h) in hb.iter().enumerate() {
        ensure!(h.divides(&b), "B^{} = {h} does not divide B_E = {b}", j + 1);
        ensure!(h.is_square_free_split(), "B^{} = {h} is not square-free", j + 1);
    }
    for r in b.roots() {
        ensure!(hb.iter().any(|h| h.is_root(&r)), "root {r} of B_E in no B^j");
    }
    Ok(Verdict::Pass)
}

fn multiplicity_levels(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let m = build(generators(input), ctx)?;
    let b = m.bernstein()?.minimal;
    let hb = m.higher_bernsteins()?;
    let factors = b.factor().ok_or_else(|| FrescoError::RankUnstable("B_E does not split".into()))?;
    for f in factors {
        let levels = hb.iter().filter(|h| h.is_root(&f.root)).count();
        ensure!(levels >= f.mult, "root {} of multiplicity {} met in {levels} levels", f.root, f.mult);
    }
    let prod = hb.iter().fold(RationalPolynomial::one(), |acc, h| acc.mul(h));
    ensure!(b.divides(&prod), "B_E = {b} does not divide the product {prod}");
    Ok(Verdict::Pass)
}

fn root_propagation(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let m = build(generators(input), ctx)?;
    let d = m.nilpotent_order();
    if d < 2 {
        return Ok(Verdict::Skip(format!("d = {d}")));
    }
    let hb = m.higher_bernsteins()?;
    for j in 2..=d {
        for r in hb[j - 1].roots() {
            for h in 1..j {
                ensure!(has_root_in_up(&hb[h - 1], &r), "root {r} of B^{j} has no follower of B^{h} in {r} + N");
            }
        }
    }
    Ok(Verdict::Pass)
}

fn greatest_root(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let m = build(generators(input), ctx)?;
    let roots = m.bernstein()?.minimal.roots();
    let hb = m.higher_bernsteins()?;
    for r in &roots {
        let greatest = roots.iter().all(|s| !(s > r && (s - r).is_integer()));
        if !greatest {
            continue;
        }
        ensure!(hb[0].is_root(r), "greatest root {r} of its class is not a root of B^1");
        if let Some(top) = hb.iter().rposition(|h| h.is_root(r)) {
            ensure!(hb[..=top].iter().all(|h| h.is_root(r)), "greatest root {r} skips a level below {}", top + 1);
        }
    }
    Ok(Verdict::Pass)
}

fn finite_codimension(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let gens = generators(input);
    let h = build(gens, ctx)?;
    let bh = h.bernstein()?.minimal;
    let hbh = h.higher_bernsteins()?;
    let mut subs = vec![("bH", h.b_power(1)), ("b^2 H", h.b_power(2))];
    let mut shifted = gens.to_vec();
    shifted[0] = shifted[0].act(Gen::B)?;
    subs.push(("B[a]{b g_1, …}", build(&shifted, ctx)?));
    for (name, g) in &subs {
        for r in g.bernstein()?.minimal.roots() {
            ensure!(has_root_in_up(&bh, &r), "{name}: root {r} of B_G has no root of B_H in {r} + N");
        }
        for (p, hp) in g.higher_bernsteins()?.iter().enumerate() {
            for r in hp.roots() {
                let found = hbh.iter().skip(p).any(|hq| has_root_in_up(hq, &r));
                ensure!(found, "{name}: root {r} of B^{} of G has no root of some B^q_H, q >= {}, in {r} + N", p + 1, p + 1);
            }
        }
    }
    // a submodule of infinite codimension with the rigid hypothesis
    let g = build(&gens[..1], ctx)?;
    for (p, hp) in g.higher_bernsteins()?.iter().enumerate() {
        for r in hp.roots() {
            let above = bh.roots().iter().any(|s| s > &r && is_natural(&(s - &r)));
            if above {
                continue;
            }
            let found = hbh.iter().skip(p).any(|hq| hq.is_root(&r));
            ensure!(found, "root {r} of B^{} of B[a]g_1 is a root of no B^q_E with q >= {}", p + 1, p + 1);
        }
    }
    Ok(Verdict::Pass)
}

fn primitive_saturation(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let m = build(generators(input), ctx)?;
    let sat = m.saturate()?;
    let b = sat.bernstein()?.minimal;
    for c in m.classes() {
        let lhs = m.primitive_quotient(&c).saturate()?;
        let rhs = sat.primitive_quotient(&c);
        ensure!(lhs.same_span(&rhs)?, "saturation does not commute with the [{c}]-primitive quotient");
        let kept: Vec<Q> = b
            .factor()
            .ok_or_else(|| FrescoError::RankUnstable("B_E does not split".into()))?
            .into_iter()
            .filter(|f| shift_of(&c, &f.root).is_some())
            .flat_map(|f| std::iter::repeat_n(f.root, f.mult))
            .collect();
        let want = RationalPolynomial::from_roots(&kept);
        let got = m.primitive_quotient(&c).bernstein()?.minimal;
        ensure!(got == want, "B of the [{c}]-primitive quotient is {got}, expected {want}");
    }
    Ok(Verdict::Pass)
}

fn primitive_splitting(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let m = build(generators(input), ctx)?;
    let sat = m.saturate()?;
    let d = m.nilpotent_order();
    for c in sat.classes() {
        let pa = sat.primitive_quotient(&c);
        let rest = sat.complement_part(&c)?;
        let whole = sat.bernstein()?.minimal;
        let split = rest.bernstein()?.minimal.mul(&pa.bernstein()?.minimal);
        ensure!(whole == split, "B_E != B_(≠{c}) B_[{c}]");
        let pm = m.primitive_quotient(&c);
        for j in 1..=d {
            let hj = hb_or_one(&sat, j)?;
            ensure!(hj == hb_or_one(&rest, j)?.mul(&hb_or_one(&pa, j)?), "B^{j} does not split along [{c}]");
            let kept: Vec<Q> = hj.roots().into_iter().filter(|r| shift_of(&c, r).is_some()).collect();
            let want = RationalPolynomial::from_roots(&kept);
            ensure!(hb_or_one(&pm, j)? == want, "B^{j} of the [{c}]-primitive quotient is not the [{c}]-part of B^{j}");
        }
    }
    Ok(Verdict::Pass)
}

fn layer_realization(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let e = build(generators(input), ctx)?;
    let d = e.nilpotent_order();
    let s1 = e.s_layer(1)?;
    let g = e.quotient(&s1)?;
    let ne = e.nil_image(1);
    ensure!(g.b_rank()? == ne.b_rank()?, "E/S_1(E) and N(E) differ in rank");
    if d >= 2 {
        let lhs = g.bernstein()?.characteristic;
        ensure!(lhs == ne.bernstein()?.characteristic, "E/S_1(E) and N(E) differ in Bernstein polynomial");
    }
    for h in 1..d {
        let lhs = ne.s_layer(h)?;
        let rhs = e.s_layer(h + 1)?.nil_image(1);
        ensure!(lhs.same_span(&rhs)?, "S_{h}(N E) != N(S_{} E)", h + 1);
        let top = e.s_layer(h + 1)?.b_rank()? - e.s_layer(h)?.b_rank()?;
        let low = if h == 1 { 0 } else { ne.s_layer(h - 1)?.b_rank()? };
        ensure!(top == lhs.b_rank()? - low, "layer {} of E and layer {h} of E/S_1(E) differ in rank", h + 1);
    }
    Ok(Verdict::Pass)
}

fn layer_ranks(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let gens = generators(input);
    let e = build(gens, ctx)?;
    let filt = e.semisimple_filtration()?;
    let ranks = filt.iter().map(SubModule::b_rank).collect::<Result<Vec<_>>>()?;
    let steps: Vec<usize> = ranks.windows(2).map(|w| w[1] - w[0]).collect();
    ensure!(steps.iter().all(|&s| s > 0), "semi-simple filtration not strict: ranks {ranks:?}");
    ensure!(steps.windows(2).all(|w| w[1] <= w[0]), "layer ranks increase: {ranks:?}");
    for s in &filt {
        ensure!(s.is_normal_in(&e)?, "a layer S_j(E) is not normal");
    }
    let g = build(&gens[..1], ctx)?;
    for j in 0..=e.nilpotent_order() {
        let lhs = g.s_layer(j)?;
        let rhs = e.s_layer(j)?.intersect(&g)?;
        ensure!(lhs.same_span(&rhs)?, "S_{j}(G) != S_{j}(E) ∩ G");
    }
    Ok(Verdict::Pass)
}

fn polys_of_module(m: &SubModule) -> Result<Vec<RationalPolynomial>> {
    let b = m.bernstein()?;
    let mut out = vec![b.minimal, b.characteristic];
    out.extend(m.higher_bernsteins()?);
    Ok(out)
}

fn truncation_stability(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let gens = generators(input);
    let lo = polys_of_module(&build(gens, ctx)?)?;
    let hi = polys_of_module(&build(gens, &Ctx { cert: ctx.cert + 4, ..*ctx })?)?;
    ensure!(lo == hi, "polynomials change between cert {} and {}", ctx.cert, ctx.cert + 4);
    Ok(Verdict::Pass)
}

fn witness_search(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let e = build(generators(input), ctx)?.saturate()?;
    let d = e.nilpotent_order();
    let top = e.higher_bernstein(d)?;
    let Some(r) = top.roots().into_iter().find(|r| e.primitive_quotient(&class_of_root(r)).nilpotent_order() == d) else {
        return Ok(Verdict::Skip("no root at the top level".into()));
    };
    let beta = -r.clone();
    let z = match find_witness_fresco(&e, d, &beta, 0x5eed, 24) {
        Ok(z) => z,
        Err(FrescoError::WitnessNotFound) => return Ok(Verdict::Skip("witness search budget exhausted".into())),
        Err(err) => return Err(err),
    };
    ensure!(e.s_layer(d)?.contains(&z)?, "witness outside S_{d}(E)");
    if d > 1 {
        ensure!(!e.s_layer(d - 1)?.contains(&z)?, "witness inside S_{}(E)", d - 1);
    }
    let f = SubModule::generate(e.ambient(), e.level(), &[z], ClosureSet::AB, ctx.guard)?;
    let hs = f.higher_bernsteins()?;
    ensure!(hs.iter().skip(d - 1).any(|h| h.is_root(&r)), "witness fresco has no B^h, h >= {d}, vanishing at {r}");
    Ok(Verdict::Pass)
}

fn serialization(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let m = build(generators(input), ctx)?;
    let text = serde_json::to_string(&m.to_file()).expect("module files serialize");
    let file: ModuleFile = serde_json::from_str(&text).map_err(|e| FrescoError::Parse(e.to_string()))?;
    let back = crate::io::module_from_file(&file, None, Some(ctx.cert))?;
    ensure!(back.same_span(&m)?, "module changes through its file form");
    ensure!(back.bernstein()? == m.bernstein()?, "Bernstein data changes through the file form");
    let dump = serde_json::to_string(&input.to_file()).expect("inputs serialize");
    let again: InputFile = serde_json::from_str(&dump).map_err(|e| FrescoError::Parse(e.to_string()))?;
    ensure!(&Input::from_file(&again)? == input, "input dump does not reload identically");
    Ok(Verdict::Pass)
}

// ---------------------------------------------------------------------------------------------
// frescos

fn fresco_of(input: &Input, ctx: &Ctx) -> Result<SubModule> {
    build(generators(input), ctx)
}

/// `(E/F)/(a + b)` is one-dimensional.
fn quotient_is_fresco(e: &SubModule, f: &SubModule) -> Result<bool> {
    let frame = e.frame();
    let mut images: Vec<_> = e.echelon().gens().flat_map(|g| [frame.a(&g.v), frame.b(&g.v)]).collect();
    images.extend(f.embed(frame)?.gen_vectors());
    let w = SubModule::generate_vectors(frame, e.level(), images, ClosureSet::B, e.guard());
    Ok(e.codim(&w)? == 1)
}

fn exact_sequence(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let f = fresco_of(input, ctx)?;
    ensure!(is_fresco(&f)?, "B[a]x is not a fresco");
    let jh = jordan_holder(&f)?;
    let r = jh.chain.len();
    let bf = f.bernstein()?.characteristic;
    for (i, fk) in jh.chain.iter().enumerate().take(r - 1) {
        let k = i + 1;
        ensure!(fk.b_rank()? == k, "chain step {k} has rank {}", fk.b_rank()?);
        ensure!(fk.is_normal_in(&f)?, "F_{k} is not normal");
        ensure!(is_fresco(fk)?, "F_{k} is not a fresco");
        ensure!(quotient_is_fresco(&f, fk)?, "F/F_{k} is not a fresco");
        let quo = f.quotient(fk)?;
        let co = r - k;
        ensure!(quo.b_rank()? == co, "F/F_{k} has rank {}, expected {co}", quo.b_rank()?);
        let prod = fk.bernstein()?.characteristic.shift(&q(-(co as i64))).mul(&quo.bernstein()?.characteristic);
        ensure!(prod == bf, "B_(F_{k})(x - {co}) B_(F/F_{k})(x) = {prod} but B_F = {bf}");
    }
    Ok(Verdict::Pass)
}

fn saturation_from_chain(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let f = fresco_of(input, ctx)?;
    let jh = jordan_holder(&f)?;
    let r = jh.chain.len();
    ensure!(jh.shifted_bernstein() == f.bernstein()?.characteristic, "the chain does not reproduce B_F");
    // F^♯ = Σ b^{j-r} F_j, multiplied through by b^{r-1}
    let lhs = f.saturate()?.b_power(r - 1);
    let mut rhs = jh.chain[0].clone();
    for (j, fj) in jh.chain.iter().enumerate().skip(1) {
        rhs = rhs.sum(&fj.b_power(j))?;
    }
    ensure!(lhs.same_span(&rhs)?, "b^(r-1) F^# != Σ b^(j-1) F_j");
    Ok(Verdict::Pass)
}

fn normalization_shift(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let f = fresco_of(input, ctx)?;
    let jh = jordan_holder(&f)?;
    let r = jh.chain.len();
    let sf = f.saturate()?;
    for (i, g) in jh.chain.iter().enumerate() {
        let co = r - i - 1;
        let sg = g.saturate()?;
        let n = sg.normalize_in(&sf)?;
        ensure!(n.b_power(co).same_span(&sg)?, "b^{co} N(F_{}^#) != F_{}^#", i + 1, i + 1);
    }
    Ok(Verdict::Pass)
}

fn saturated_layers(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let f = fresco_of(input, ctx)?;
    let r = f.b_rank()?;
    let sf = f.saturate()?;
    for j in 1..=f.nilpotent_order() {
        let sj = f.s_layer(j)?;
        let rj = r - sj.b_rank()?;
        let lhs = sf.s_layer(j)?.b_power(rj);
        ensure!(lhs.same_span(&sj.saturate()?)?, "b^{rj} S_{j}(F^#) != S_{j}(F)^#");
    }
    Ok(Verdict::Pass)
}

fn two_definitions(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let f = fresco_of(input, ctx)?;
    let sf = f.saturate()?;
    for j in 1..=f.nilpotent_order() {
        let direct = f.higher_bernstein(j)?;
        let shifted = higher_bernstein_shifted(&f, j)?;
        ensure!(direct == shifted, "level {j}: B^j = {direct} but the shifted quotient gives {shifted}");
        let by_nil = layer_bernstein_by_nil(&sf, j)?.minimal;
        ensure!(direct == by_nil, "level {j}: B^j = {direct} but N^(j-1) S_j gives {by_nil}");
    }
    Ok(Verdict::Pass)
}

fn product_formula(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let f = fresco_of(input, ctx)?;
    let prod = f.higher_bernsteins()?.iter().fold(RationalPolynomial::one(), |acc, h| acc.mul(h));
    let bf = f.bernstein()?.characteristic;
    ensure!(prod == bf, "∏ B^j = {prod} but B_F = {bf}");
    Ok(Verdict::Pass)
}

fn jordan_chain(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let f = fresco_of(input, ctx)?;
    let mut any = false;
    for c in f.classes() {
        let p = f.primitive_quotient(&c).nilpotent_order();
        let chain = match find_jordan_chain(&f, &c, p) {
            Ok(jc) => jc,
            Err(FrescoError::NoRoot) => continue,
            Err(FrescoError::SearchExhausted) => return Err(FrescoError::RankUnstable("jordan chain search".into())),
            Err(e) => return Err(e),
        };
        any = true;
        ensure!(chain.verify(&c)?, "chain relation fails in class {c}");
        for w in &chain.chain {
            ensure!(f.contains(w)?, "chain element outside F");
        }
        let j = SubModule::generate(f.ambient(), f.level(), &chain.chain, ClosureSet::AB, ctx.guard)?;
        ensure!(j.b_rank()? == p, "chain span has rank {} instead of {p}", j.b_rank()?);
        ensure!(j.is_simple_pole(), "chain span has no simple pole");
        let root = location(&c, chain.m);
        let want = RationalPolynomial::from_roots(&vec![root; p]);
        ensure!(j.bernstein()?.characteristic == want, "chain span has B = {}, expected {want}", j.bernstein()?.characteristic);
    }
    if any {
        Ok(Verdict::Pass)
    } else {
        Ok(Verdict::Skip("no class with a root of the top B^p".into()))
    }
}

fn pole_ladder(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let f = fresco_of(input, ctx)?;
    let basis = f.basis();
    for c in f.classes() {
        let fa = f.primitive_quotient(&c);
        let p = fa.nilpotent_order();
        let by_terms = basis.iter().map(|x| mellin_profile(x).max_order(&c)).max().unwrap_or(0);
        ensure!(by_terms == p, "class {c}: largest pole order over a basis is {by_terms}, d = {p}");
        let pred = predict_pole(&f, &c)?;
        ensure!(pred.order == p, "predicted order {} != d = {p}", pred.order);
        let top = fa.higher_bernstein(p)?;
        let best = top.roots().into_iter().filter(|r| shift_of(&c, r).is_some()).max();
        ensure!(pred.location == best, "class {c}: predicted {:?}, biggest root of B^{p} in class is {best:?}", pred.location);
        let hbs = fa.higher_bernsteins()?;
        let ladder = xi_ladder(&f, &c)?;
        ensure!(ladder.len() == p, "ladder of length {} for d = {p}", ladder.len());
        for w in ladder.windows(2) {
            ensure!(w[0].xi >= w[1].xi, "ladder not decreasing");
        }
        for step in &ladder {
            ensure!(shift_of(&c, &step.xi).is_some(), "ξ_{} = {} outside the class", step.s, step.xi);
            let want: Vec<usize> = (step.s..=p).filter(|&h| hbs[h - 1].is_root(&step.xi)).collect();
            ensure!(!want.is_empty(), "ξ_{} = {} is a root of no B^(s+j)", step.s, step.xi);
            ensure!(step.levels == want, "ξ_{}: reported levels {:?}, recomputed {want:?}", step.s, step.levels);
        }
        if let (Some(loc), Some(last)) = (&pred.location, ladder.last()) {
            ensure!(&last.xi <= loc, "prediction {loc} below ξ_p = {}", last.xi);
        }
    }
    Ok(Verdict::Pass)
}

fn polys_of_fresco(f: &SubModule) -> Result<Vec<RationalPolynomial>> {
    let mut out = polys_of_module(f)?;
    out.push(jordan_holder(f)?.shifted_bernstein());
    for j in 1..=f.nilpotent_order() {
        out.push(higher_bernstein_shifted(f, j)?);
    }
    Ok(out)
}

fn fresco_truncation_stability(input: &Input, ctx: &Ctx) -> Result<Verdict> {
    let gens = generators(input);
    let lo = polys_of_fresco(&build(gens, ctx)?)?;
    let hi = polys_of_fresco(&build(gens, &Ctx { cert: ctx.cert + 4, ..*ctx })?)?;
    ensure!(lo == hi, "polynomials change between cert {} and {}", ctx.cert, ctx.cert + 4);
    Ok(Verdict::Pass)
}

/// Every property in a fixed order.
pub static PROPERTIES: &[Property] = &[
    Property { name: "commutation", kind: Kind::Element, about: "ab - ba = b^2 on elements", check: commutation },
    Property { name: "inverse_pair", kind: Kind::Element, about: "b and b^-1 a invert into a; projections commute", check: inverse_pair },
    Property { name: "division_round_trip", kind: Kind::Division, about: "P = Q(a - λb) + R", check: division_round_trip },
    Property { name: "binomial_identity", kind: Kind::Power, about: "(a+b)^q = a^(q-1)(a+qb), b(a+b)^q = a^q b", check: binomial_identity },
    Property { name: "linear_word_bernstein", kind: Kind::Word, about: "B of a linear word from its factors and from the action", check: linear_word_bernstein },
    Property { name: "action_multiplicative", kind: Kind::Action, about: "(PR)x = P(Rx)", check: action_multiplicative },
    Property { name: "higher_divides_bernstein", kind: Kind::Module, about: "B^j | B_E and every root of B_E is in some B^j", check: higher_divides_bernstein },
    Property { name: "multiplicity_levels", kind: Kind::Module, about: "a root of multiplicity p meets p levels; B_E | ∏ B^j", check: multiplicity_levels },
    Property { name: "root_propagation", kind: Kind::DeepModule, about: "roots of B^j propagate to every lower level", check: root_propagation },
    Property { name: "greatest_root", kind: Kind::Module, about: "greatest root of a class lies in B^1 and every lower level", check: greatest_root },
    Property { name: "finite_codimension", kind: Kind::Module, about: "root shifts between G ⊂ H", check: finite_codimension },
    Property { name: "primitive_saturation", kind: Kind::Module, about: "saturation commutes with primitive quotients", check: primitive_saturation },
    Property { name: "primitive_splitting", kind: Kind::Module, about: "B^j splits along a class", check: primitive_splitting },
    Property { name: "layer_realization", kind: Kind::Module, about: "E/S_1(E) through N(E) shifts the layers", check: layer_realization },
    Property { name: "layer_ranks", kind: Kind::Module, about: "layer ranks do not increase; S_j(G) = S_j(E) ∩ G", check: layer_ranks },
    Property { name: "truncation_stability", kind: Kind::Module, about: "module polynomials agree at cert + 4", check: truncation_stability },
    Property { name: "witness_search", kind: Kind::Module, about: "returned witnesses verify", check: witness_search },
    Property { name: "serialization", kind: Kind::Module, about: "file forms round-trip", check: serialization },
    Property { name: "exact_sequence", kind: Kind::Fresco, about: "B_F = B_(F_k)(x - r) B_(F/F_k) along the chain", check: exact_sequence },
    Property { name: "saturation_from_chain", kind: Kind::Fresco, about: "F^# = Σ b^(j-r) F_j", check: saturation_from_chain },
    Property { name: "normalization_shift", kind: Kind::Fresco, about: "normalization of G^# in F^# is b^(-g) G^#", check: normalization_shift },
    Property { name: "saturated_layers", kind: Kind::Fresco, about: "S_j(F^#) = b^(-r_j) S_j(F)^#", check: saturated_layers },
    Property { name: "two_definitions", kind: Kind::Fresco, about: "shifted quotient and nilpotent image give B^j", check: two_definitions },
    Property { name: "product_formula", kind: Kind::Fresco, about: "B_F = ∏ B^j", check: product_formula },
    Property { name: "jordan_chain", kind: Kind::Fresco, about: "Jordan chains verify and span (x + α + m)^p", check: jordan_chain },
    Property { name: "pole_ladder", kind: Kind::Fresco, about: "pole orders, predictions and the ξ ladder agree", check: pole_ladder },
    Property { name: "fresco_truncation_stability", kind: Kind::Fresco, about: "fresco polynomials agree at cert + 4", check: fresco_truncation_stability },
];

pub fn find(name: &str) -> Option<&'static Property> {
    PROPERTIES.iter().find(|p| p.name == name)
}
