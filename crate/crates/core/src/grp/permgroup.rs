use std::collections::HashMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grp::{Cert, Perm, StabChain};

/// A permutation group given by generators, with a lazily built stabilizer chain.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    cert: Cert,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup {
            degree: self.degree,
            gens: self.gens.clone(),
            cert: self.cert.clone(),
            chain,
        }
    }
}

/// The action of a group on the right cosets of a normal subgroup.
#[derive(Clone, Debug)]
pub struct CosetAction {
    /// Image of each generator of the acting group.
    pub images: Vec<Perm>,
}

impl CosetAction {
    pub fn degree(&self) -> usize {
        self.images.first().map_or(1, Perm::degree)
    }

    /// The induced group G/N as a permutation group on the cosets.
    pub fn quotient(&self) -> PermGroup {
        PermGroup::new(self.degree(), self.images.clone(), Cert::All)
    }
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Perm>, cert: Cert) -> Self {
        let gens = gens
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect::<Vec<_>>();
        assert!(
            gens.iter().all(|g| g.degree() == degree),
            "generator degree mismatch"
        );
        PermGroup {
            degree,
            gens,
            cert,
            chain: OnceLock::new(),
        }
    }

    pub fn with_chain(degree: usize, gens: Vec<Perm>, cert: Cert, chain: StabChain) -> Self {
        let g = Self::new(degree, gens, cert);
        let _ = g.chain.set(chain);
        g
    }

    pub fn trivial(degree: usize, cert: Cert) -> Self {
        Self::new(degree, Vec::new(), cert)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }
    pub fn cert(&self) -> &Cert {
        &self.cert
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::from_generators(self.degree, self.cert.clone(), &self.gens))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain().contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .enumerate()
            .all(|(i, a)| self.gens[i + 1..].iter().all(|b| a.mul(b) == b.mul(a)))
    }

    /// Subgroup of the same action generated by `gens`.
    pub fn subgroup(&self, gens: Vec<Perm>) -> PermGroup {
        PermGroup::new(self.degree, gens, self.cert.clone())
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn is_normal_in(&self, other: &PermGroup) -> bool {
        self.is_subgroup_of(other)
            && self
                .gens
                .iter()
                .all(|n| other.gens.iter().all(|g| self.contains(&n.conjugate(g))))
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[Perm]) -> PermGroup {
        self.normal_closure_until(seeds, None)
    }

    /// Normal closure, stopping early once the order reaches `stop_at`.
    pub fn normal_closure_until(&self, seeds: &[Perm], stop_at: Option<u128>) -> PermGroup {
        let mut chain = StabChain::new(self.degree, self.cert.clone());
        let mut ngens: Vec<Perm> = Vec::new();
        for s in seeds {
            if chain.add_generator(s) {
                ngens.push(s.clone());
            }
        }
        let mut i = 0;
        'outer: while i < ngens.len() {
            for g in &self.gens {
                if stop_at.is_some_and(|b| chain.order() >= b) {
                    break 'outer;
                }
                let c = ngens[i].conjugate(g);
                if chain.add_generator(&c) {
                    ngens.push(c);
                }
            }
            i += 1;
        }
        PermGroup::with_chain(self.degree, ngens, self.cert.clone(), chain)
    }

    /// Normal closure of the commutators of generator pairs.
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut seeds = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                let c = a.commutator(b);
                if !c.is_identity() {
                    seeds.push(c);
                }
            }
        }
        self.normal_closure(&seeds)
    }

    /// Deterministic pseudorandom elements by product replacement.
    pub fn random_elements(&self, seed: u64, count: usize) -> Vec<Perm> {
        if self.gens.is_empty() {
            return vec![Perm::identity(self.degree); count];
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state: Vec<Perm> = self
            .gens
            .iter()
            .cycle()
            .take(self.gens.len().max(10))
            .cloned()
            .collect();
        let mut acc = Perm::identity(self.degree);
        let n = state.len();
        let mut step = |state: &mut Vec<Perm>, acc: &mut Perm| {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            state[i] = if rng.gen_bool(0.5) {
                state[i].mul(&state[j])
            } else {
                state[j].mul(&state[i])
            };
            *acc = acc.mul(&state[i]);
        };
        for _ in 0..50 {
            step(&mut state, &mut acc);
        }
        (0..count)
            .map(|_| {
                step(&mut state, &mut acc);
                acc.clone()
            })
            .collect()
    }

    /// Action on the right cosets of a normal subgroup `n`.
    pub fn coset_action(&self, n: &PermGroup, limit: usize) -> Result<CosetAction> {
        let index = self.order() / n.order();
        if index > limit as u128 {
            return Err(Error::IndexTooLarge { index, limit });
        }
        if !n.is_normal_in(self) {
            return Err(Error::NotNormal);
        }
        let gc = self.chain();
        let base = gc.base();
        let mut nc = StabChain::with_base_prefix(self.degree, self.cert.clone(), &base);
        for g in n.generators() {
            nc.add_generator(g);
        }
        debug_assert_eq!(nc.depth(), base.len());

        // canonical base images of the coset containing the element with base images `imgs`
        let canonical = |mut cur: Vec<u32>| -> Vec<u32> {
            for l in 0..base.len() {
                let orbit = nc.orbit(l);
                if orbit.len() == 1 {
                    continue;
                }
                let xw = gc
                    .element_from_base_images(&cur)
                    .expect("coset element lies in G");
                let best = *orbit
                    .iter()
                    .min_by_key(|&&g| gc.apply(&xw, g))
                    .expect("orbit nonempty");
                if best == base[l] {
                    continue;
                }
                let uw = nc.transversal(l, best).expect("orbit point");
                cur = base
                    .iter()
                    .map(|&b| gc.apply(&xw, nc.apply(&uw, b)))
                    .collect();
            }
            cur
        };

        let mut reps: Vec<Vec<u32>> = vec![canonical(base.clone())];
        let mut index_of: HashMap<Vec<u32>, u32> = HashMap::new();
        index_of.insert(reps[0].clone(), 0);
        let mut images: Vec<Vec<u32>> = vec![Vec::new(); self.gens.len()];
        let mut i = 0;
        while i < reps.len() {
            for (gi, s) in self.gens.iter().enumerate() {
                let moved: Vec<u32> = reps[i].iter().map(|&x| s.image(x)).collect();
                let c = canonical(moved);
                let next = reps.len() as u32;
                let j = *index_of.entry(c.clone()).or_insert_with(|| {
                    reps.push(c);
                    next
                });
                images[gi].push(j);
            }
            i += 1;
        }
        debug_assert_eq!(reps.len() as u128, index);
        Ok(CosetAction {
            images: images.into_iter().map(Perm::from_images).collect(),
        })
    }

    /// Kernel of the homomorphism sending the i-th generator to `images[i]`.
    /// `image_cert` certifies identity for the image group's action.
    pub fn action_kernel(&self, images: &[Perm], image_cert: Cert) -> PermGroup {
        assert_eq!(images.len(), self.gens.len(), "one image per generator");
        if self.gens.is_empty() {
            return self.clone();
        }
        let n = self.degree;
        let m = images[0].degree();
        let image_chain = StabChain::from_generators(m, image_cert, images);
        let prefix: Vec<u32> = image_chain.base().iter().map(|&b| b + n as u32).collect();
        let cert_pts: Vec<u32> = match &self.cert {
            Cert::All => (0..n as u32).collect(),
            Cert::Points(p) => p.clone(),
        };
        let mut chain = StabChain::with_base_prefix(n + m, Cert::Points(cert_pts), &prefix);
        for (g, h) in self.gens.iter().zip(images) {
            let mut img = g.images().to_vec();
            img.extend(h.images().iter().map(|&x| x + n as u32));
            chain.add_generator(&Perm::from_images_unchecked(img));
        }
        let kgens: Vec<Perm> = chain
            .generators_from(prefix.len())
            .into_iter()
            .map(|k| Perm::from_images_unchecked(k.images()[..n].to_vec()))
            .collect();
        PermGroup::new(n, kgens, self.cert.clone())
    }

    /// Orbits on points, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start as u32];
            let mut i = 0;
            while i < orbit.len() {
                for g in &self.gens {
                    let y = g.image(orbit[i]);
                    if !std::mem::replace(&mut seen[y as usize], true) {
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Images of the generators acting on a block system (a partition
    /// preserved by the group).
    pub fn block_action(&self, blocks: &[Vec<u32>]) -> Vec<Perm> {
        let mut block_of = vec![0u32; self.degree];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                block_of[x as usize] = i as u32;
            }
        }
        self.gens
            .iter()
            .map(|g| {
                Perm::from_images(
                    blocks
                        .iter()
                        .map(|b| block_of[g.image(b[0]) as usize])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn elements(&self) -> Vec<Perm> {
        self.chain().elements()
    }
}
