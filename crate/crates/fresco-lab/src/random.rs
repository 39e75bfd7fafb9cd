//! Seeded generators for elements, modules, frescos, operators and words.

use std::collections::BTreeMap;

use fresco_core::module::{ClosureSet, SubModule};
use fresco_core::ops::{ABOperator, BSeries};
use fresco_core::rational::{q, qf};
use fresco_core::{Ambient, ExponentClass, FrescoError, LogMonomial, Result, XiElement, Q};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bounds for random draws.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSpec {
    pub alpha_pool: Vec<Q>,
    pub m_max: usize,
    pub log_bound: usize,
    pub value_dim_max: usize,
    pub rank_max: usize,
    pub cert_degree: usize,
    pub guard: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            alpha_pool: vec![qf(1, 2), qf(1, 3), qf(2, 3), q(1)],
            m_max: 2,
            log_bound: 2,
            value_dim_max: 2,
            rank_max: 6,
            cert_degree: 40,
            guard: 8,
        }
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const REDRAWS: usize = 64;

fn small_q(rng: &mut ChaCha8Rng) -> Q {
    let n = *[-3i64, -2, -1, 1, 2, 3].choose(rng).expect("nonempty");
    qf(n, rng.gen_range(1..=3))
}

pub fn random_ambient(rng: &mut ChaCha8Rng, spec: &SampleSpec, max_classes: usize) -> Ambient {
    let k = rng.gen_range(1..=max_classes.clamp(1, spec.alpha_pool.len()));
    let alphas: Vec<ExponentClass> = spec
        .alpha_pool
        .choose_multiple(rng, k)
        .map(|a| ExponentClass::new(a.clone()).expect("pool entries lie in (0,1]"))
        .collect();
    Ambient::new(alphas, spec.log_bound, rng.gen_range(1..=spec.value_dim_max.max(1)))
}

/// A sparse nonzero element with one to four terms.
pub fn random_element(rng: &mut ChaCha8Rng, amb: &Ambient, spec: &SampleSpec) -> XiElement {
    loop {
        let n = rng.gen_range(1..=4);
        let terms: Vec<(LogMonomial, Q)> = (0..n)
            .map(|_| {
                let cls = amb.alpha_set.choose(rng).expect("nonempty alpha set").clone();
                let j = rng.gen_range(cls.min_log()..=amb.max_log(&cls));
                let mono = LogMonomial { m: rng.gen_range(0..=spec.m_max), j, k: rng.gen_range(0..amb.value_dim), cls };
                (mono, small_q(rng))
            })
            .collect();
        let x = XiElement::from_terms(amb.clone(), spec.cert_degree, terms).expect("terms drawn inside the ambient");
        if !x.is_zero() {
            return x;
        }
    }
}

/// Rank of the smallest `Ξ`-block containing `B[a]x`, an upper bound for the rank of `B[a]x`.
pub fn rank_bound(x: &XiElement) -> usize {
    let mut top: BTreeMap<(ExponentClass, usize), usize> = BTreeMap::new();
    for t in x.terms().keys() {
        let e = top.entry((t.cls.clone(), t.k)).or_default();
        *e = (*e).max(t.order());
    }
    top.values().sum()
}

/// A generator whose fresco has rank at most `rank_max`; `min_order` asks for `d ≥ min_order`.
pub fn random_fresco_generator(rng: &mut ChaCha8Rng, spec: &SampleSpec, min_order: usize) -> XiElement {
    let amb = random_ambient(rng, spec, 2);
    let mut last = random_element(rng, &amb, spec);
    for _ in 0..REDRAWS {
        if rank_bound(&last) <= spec.rank_max && last.nilpotent_order() >= min_order {
            break;
        }
        last = random_element(rng, &amb, spec);
    }
    last
}

/// Two or three generators in a shared ambient; `min_order` asks for `d ≥ min_order`.
pub fn random_module_generators(rng: &mut ChaCha8Rng, spec: &SampleSpec, min_order: usize) -> Vec<XiElement> {
    let amb = random_ambient(rng, spec, 3);
    let mut gens = Vec::new();
    for _ in 0..REDRAWS {
        let n = rng.gen_range(2..=3);
        gens = (0..n).map(|_| random_element(rng, &amb, spec)).collect();
        let bound: usize = gens.iter().map(rank_bound).sum();
        let d = gens.iter().map(XiElement::nilpotent_order).max().unwrap_or(0);
        if bound <= 2 * spec.rank_max && d >= min_order {
            break;
        }
    }
    gens
}

/// `(x, B[a]x)`, re-drawn while the truncation guard is exhausted.
pub fn random_fresco(seed: u64, spec: &SampleSpec) -> Result<(XiElement, SubModule)> {
    let mut rng = rng_for(seed);
    let mut err = FrescoError::GuardExhausted("no draw".into());
    for _ in 0..REDRAWS {
        let x = random_fresco_generator(&mut rng, spec, 1);
        match SubModule::generate(x.ambient(), spec.cert_degree, std::slice::from_ref(&x), ClosureSet::AB, spec.guard) {
            Ok(f) => match f.b_rank() {
                Ok(r) if r <= spec.rank_max => return Ok((x, f)),
                Ok(_) => continue,
                Err(e @ (FrescoError::GuardExhausted(_) | FrescoError::RankUnstable(_))) => err = e,
                Err(e) => return Err(e),
            },
            Err(e @ FrescoError::GuardExhausted(_)) => err = e,
            Err(e) => return Err(e),
        }
    }
    Err(err)
}

/// Up to three rows of short series with small integer coefficients.
pub fn random_operator(rng: &mut ChaCha8Rng, trunc: usize) -> ABOperator {
    loop {
        let rows: Vec<Vec<Q>> = (0..rng.gen_range(1..=4))
            .map(|_| (0..rng.gen_range(1..=4)).map(|_| q(rng.gen_range(-4..=4))).collect())
            .collect();
        let p = ABOperator::from_rows(rows, trunc);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A unit series `S(b)` with nonzero constant term.
pub fn random_unit(rng: &mut ChaCha8Rng, trunc: usize) -> BSeries {
    let mut c: Vec<Q> = (0..3).map(|_| q(rng.gen_range(-2..=2))).collect();
    c[0] = small_q(rng);
    BSeries::new(c, trunc)
}

pub fn random_lambda(rng: &mut ChaCha8Rng) -> Q {
    qf(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

/// Positive `λ_1, …, λ_k` for a word `(a - λ_1 b)⋯(a - λ_k b)`, `k ≤ 4`.
pub fn random_word(rng: &mut ChaCha8Rng) -> Vec<Q> {
    (0..rng.gen_range(1..=4)).map(|_| qf(rng.gen_range(1..30), rng.gen_range(1..7))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_replay_bit_identically() {
        let spec = SampleSpec { cert_degree: 16, guard: 4, ..SampleSpec::default() };
        let (x, f) = random_fresco(11, &spec).unwrap();
        let (y, g) = random_fresco(11, &spec).unwrap();
        assert_eq!(x, y);
        assert!(f.same_span(&g).unwrap());
        assert!(f.b_rank().unwrap() <= rank_bound(&x));
        assert!(rank_bound(&x) <= spec.rank_max);
    }

    #[test]
    fn module_draws_respect_order_request() {
        let spec = SampleSpec::default();
        for s in 0..20 {
            let gens = random_module_generators(&mut rng_for(s), &spec, 2);
            assert!(gens.iter().any(|g| g.nilpotent_order() >= 2));
        }
    }
}
