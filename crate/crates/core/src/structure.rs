//! Composition factors, simplicity testing and the p-core.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::Result;
use crate::gf::valuation::factorize;
use crate::grp::{Cert, MatrixGroup, Perm, PermGroup};
use crate::matfq::Matrix;
use crate::modstruct::ModuleDecomposition;

/// Multiset of composition factors: cyclic ones by prime, nonabelian ones by order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionTally {
    pub cyclic: BTreeMap<u64, u32>,
    pub nonabelian: Vec<(u128, u32)>,
    /// Some simplicity verdict came from the sampled test.
    #[serde(default, skip_serializing_if = "is_false")]
    pub sampled: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl CompositionTally {
    /// Tally of an abelian group (or abelian section) of order `n`.
    pub fn abelian(n: u128) -> Self {
        let mut t = Self::default();
        t.add_abelian(n);
        t
    }

    pub fn add_abelian(&mut self, n: u128) {
        for (p, e) in factorize(n) {
            *self.cyclic.entry(p).or_default() += e;
        }
    }

    pub fn add_nonabelian(&mut self, order: u128, count: u32) {
        match self.nonabelian.binary_search_by_key(&order, |&(o, _)| o) {
            Ok(i) => self.nonabelian[i].1 += count,
            Err(i) => self.nonabelian.insert(i, (order, count)),
        }
    }

    pub fn merge(&mut self, other: &CompositionTally) {
        for (&p, &e) in &other.cyclic {
            *self.cyclic.entry(p).or_default() += e;
        }
        for &(o, c) in &other.nonabelian {
            self.add_nonabelian(o, c);
        }
        self.sampled |= other.sampled;
    }

    pub fn c_p(&self, p: u64) -> u32 {
        self.cyclic.get(&p).copied().unwrap_or(0)
    }

    /// Product of the orders of the abelian composition factors.
    pub fn a_of_g(&self) -> u128 {
        self.cyclic
            .iter()
            .map(|(&p, &e)| (p as u128).pow(e))
            .product()
    }

    /// Product of all factor orders, which must equal the group order.
    pub fn order(&self) -> u128 {
        self.a_of_g()
            * self
                .nonabelian
                .iter()
                .map(|&(o, c)| o.pow(c))
                .product::<u128>()
    }

    /// Same factors, ignoring the sampling flag.
    pub fn same_factors(&self, other: &CompositionTally) -> bool {
        self.cyclic == other.cyclic && self.nonabelian == other.nonabelian
    }
}

/// Which series the recursion descends along.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Derived subgroups first, a normal subgroup search only for perfect groups.
    DerivedFirst,
    /// Normal closures of pseudorandom prime-order elements first.
    NormalFirst,
}

#[derive(Clone, Debug)]
pub enum Simplicity {
    Simple { sampled: bool },
    ProperNormal(PermGroup),
}

pub fn composition_tally(g: &MatrixGroup, cfg: &Config) -> Result<CompositionTally> {
    perm_tally(g.vector_action()?, cfg, Strategy::DerivedFirst)
}

pub fn c_p(g: &MatrixGroup, p: u64, cfg: &Config) -> Result<u32> {
    Ok(composition_tally(g, cfg)?.c_p(p))
}

pub fn a_of_g(g: &MatrixGroup, cfg: &Config) -> Result<u128> {
    Ok(composition_tally(g, cfg)?.a_of_g())
}

pub fn perm_tally(g: &PermGroup, cfg: &Config, strategy: Strategy) -> Result<CompositionTally> {
    match strategy {
        Strategy::DerivedFirst => derived_first(g, cfg),
        Strategy::NormalFirst => normal_first(g, cfg),
    }
}

fn derived_first(g: &PermGroup, cfg: &Config) -> Result<CompositionTally> {
    if g.is_trivial() {
        return Ok(CompositionTally::default());
    }
    let order = g.order();
    if g.is_abelian() {
        return Ok(CompositionTally::abelian(order));
    }
    let d = g.derived_subgroup();
    let dorder = d.order();
    if dorder < order {
        let mut t = CompositionTally::abelian(order / dorder);
        t.merge(&derived_first(&d, cfg)?);
        return Ok(t);
    }
    match simplicity_test(g, cfg) {
        Simplicity::Simple { sampled } => {
            let mut t = CompositionTally::default();
            t.add_nonabelian(order, 1);
            t.sampled = sampled;
            Ok(t)
        }
        Simplicity::ProperNormal(n) => split_at(g, &n, cfg, derived_first),
    }
}

/// tally(G) = tally(K) + tally(G/K) for a normal subgroup K containing `n`.
/// The quotient is realized on the orbits of `n` when that action has
/// kernel exactly `n`, else via the kernel of the orbit action, else on cosets.
fn split_at(
    g: &PermGroup,
    n: &PermGroup,
    cfg: &Config,
    rec: fn(&PermGroup, &Config) -> Result<CompositionTally>,
) -> Result<CompositionTally> {
    let orbits = n.orbits();
    if orbits.len() > 1 {
        let images = g.block_action(&orbits);
        let image = PermGroup::new(orbits.len(), images.clone(), Cert::All);
        if !image.is_trivial() {
            let kernel = if image.order() * n.order() == g.order() {
                n.clone()
            } else {
                g.action_kernel(&images, Cert::All)
            };
            let mut t = rec(&kernel, cfg)?;
            t.merge(&rec(&image, cfg)?);
            return Ok(t);
        }
    }
    let quotient = g.coset_action(n, cfg.degree_limit)?.quotient();
    let mut t = rec(n, cfg)?;
    t.merge(&rec(&quotient, cfg)?);
    Ok(t)
}

fn normal_first(g: &PermGroup, cfg: &Config) -> Result<CompositionTally> {
    if g.is_trivial() {
        return Ok(CompositionTally::default());
    }
    let order = g.order();
    if factorize(order).iter().map(|&(_, e)| e).sum::<u32>() == 1 {
        return Ok(CompositionTally::abelian(order));
    }
    if order > cfg.exhaustive_limit {
        return derived_first(g, cfg);
    }
    // elements are kept as base images and materialized one at a time
    let chain = g.chain();
    let mut keys = Vec::new();
    chain.for_each_element(|x| {
        keys.push(chain.base_images(&x));
        true
    });
    keys.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
    for key in &keys {
        let x = chain.materialize(
            &chain
                .element_from_base_images(key)
                .expect("element of the group"),
        );
        let o = x.order();
        if factorize(o as u128).len() != 1 || o == 1 {
            continue;
        }
        let n = g.normal_closure_until(std::slice::from_ref(&x), Some(order));
        if n.order() < order {
            return split_at(g, &n, cfg, normal_first);
        }
    }
    let mut t = CompositionTally::default();
    t.add_nonabelian(order, 1);
    Ok(t)
}

/// Elements of prime order among the powers of `x`.
fn prime_order_powers(x: &Perm) -> Vec<Perm> {
    let o = x.order();
    factorize(o as u128)
        .into_iter()
        .map(|(p, _)| x.pow(o / p))
        .collect()
}

/// Decides whether a nontrivial perfect group is simple. Exhaustive up to
/// the configured order, sampled above it.
pub fn simplicity_test(g: &PermGroup, cfg: &Config) -> Simplicity {
    let order = g.order();
    let proper = |x: &Perm| {
        let n = g.normal_closure_until(std::slice::from_ref(x), Some(order));
        (n.order() < order).then_some(n)
    };
    if order <= cfg.exhaustive_limit {
        let chain = g.chain();
        let mut done: HashSet<Vec<u32>> = HashSet::new();
        let mut found = None;
        chain.for_each_element(|x| {
            if x.is_identity() || done.contains(&chain.base_images(&x)) {
                return true;
            }
            let f = factorize(x.order() as u128);
            if f.len() != 1 || f[0].1 != 1 {
                return true;
            }
            if let Some(n) = proper(&x) {
                found = Some(n);
                return false;
            }
            // the whole conjugacy class has the same closure
            done.insert(chain.base_images(&x));
            let mut stack = vec![x];
            while let Some(y) = stack.pop() {
                for s in g.generators() {
                    let z = y.conjugate(s);
                    if done.insert(chain.base_images(&z)) {
                        stack.push(z);
                    }
                }
            }
            true
        });
        return match found {
            Some(n) => Simplicity::ProperNormal(n),
            None => Simplicity::Simple { sampled: false },
        };
    }
    let mut seeds: Vec<Perm> = Vec::new();
    for s in g.chain().strong_generators().iter().cloned() {
        seeds.extend(prime_order_powers(&s));
        seeds.push(s);
    }
    seeds.extend(g.random_elements(cfg.seed, cfg.sample_size));
    for x in seeds.iter().filter(|x| !x.is_identity()) {
        if let Some(n) = proper(x) {
            return Simplicity::ProperNormal(n);
        }
    }
    Simplicity::Simple { sampled: true }
}

/// Largest normal p-subgroup: the kernel of the action on the sections of
/// a composition flag.
pub fn p_core(g: &MatrixGroup, dec: &ModuleDecomposition) -> Result<MatrixGroup> {
    let field = g.field();
    let sections = dec.sections(field);
    let blocks: Vec<Matrix> = g
        .generators()
        .iter()
        .map(|m| {
            sections
                .iter()
                .map(|s| s.action(field, m))
                .reduce(|a, b| a.direct_sum(&b))
                .expect("flag has at least one section")
        })
        .collect();
    let image = MatrixGroup::new(field.clone(), g.dim(), blocks.clone())?
        .with_degree_limit(g.degree_limit());
    image.vector_action()?;
    let images: Vec<Perm> = blocks.iter().map(|b| image.perm_of(b)).collect();
    g.action_kernel(&images, Cert::Points(image.basis_points()))
}
