//! Deterministic Schreier-Sims over a base and strong generating set.
//!
//! Group elements met during sifting are kept as words in the strong
//! generators and only evaluated on the points that are needed. A residue
//! is declared trivial when it fixes every certificate point: for the action
//! of a linear group on vectors a basis suffices, otherwise all points are
//! checked.

use crate::grp::Perm;

const UNSEEN: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

/// Points whose pointwise stabilizer in the group is trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cert {
    All,
    Points(Vec<u32>),
}

/// Letter of a word: strong generator index shifted left once, low bit set
/// for the inverse.
pub type Letter = u32;

#[inline]
fn fwd(i: usize) -> Letter {
    (i as u32) << 1
}
#[inline]
fn bwd(i: usize) -> Letter {
    ((i as u32) << 1) | 1
}

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    gens: Vec<usize>,
    orbit: Vec<u32>,
    label: Vec<u32>,
}

/// Element under sifting: an optional explicit head followed by letters.
#[derive(Clone, Debug, Default)]
struct Word {
    head: Option<Perm>,
    letters: Vec<Letter>,
}

#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    cert: Cert,
    gens: Vec<Perm>,
    inv: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, cert: Cert) -> Self {
        StabChain {
            degree,
            cert,
            gens: Vec::new(),
            inv: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// Chain whose base starts with `prefix`, in that order.
    pub fn with_base_prefix(degree: usize, cert: Cert, prefix: &[u32]) -> Self {
        let mut c = Self::new(degree, cert);
        for &b in prefix {
            c.push_level(b);
        }
        c
    }

    pub fn from_generators(degree: usize, cert: Cert, gens: &[Perm]) -> Self {
        let mut c = Self::new(degree, cert);
        for g in gens {
            c.add_generator(g);
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn orbit(&self, level: usize) -> &[u32] {
        &self.levels[level].orbit
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.order_from(0)
    }

    /// Order of the pointwise stabilizer of the first `level` base points.
    pub fn order_from(&self, level: usize) -> u128 {
        self.levels[level.min(self.levels.len())..]
            .iter()
            .map(|l| l.orbit.len() as u128)
            .product()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.gens
    }

    /// Strong generators of the pointwise stabilizer of the first `level` base points.
    pub fn generators_from(&self, level: usize) -> Vec<Perm> {
        match self.levels.get(level) {
            Some(l) => l.gens.iter().map(|&i| self.gens[i].clone()).collect(),
            None => Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Adds a generator; returns false when it was already a member.
    pub fn add_generator(&mut self, g: &Perm) -> bool {
        assert_eq!(g.degree(), self.degree);
        if g.is_identity() {
            return false;
        }
        let (res, j) = self.strip(
            Word {
                head: Some(g.clone()),
                letters: Vec::new(),
            },
            0,
        );
        if j == self.levels.len() && self.is_identity(&res) {
            return false;
        }
        let j = self.install(res, 0, j);
        self.complete(j);
        true
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (res, j) = self.strip(
            Word {
                head: Some(g.clone()),
                letters: Vec::new(),
            },
            0,
        );
        j == self.levels.len() && self.is_identity(&res)
    }

    /// Image of `x` under the word.
    pub fn apply(&self, letters: &[Letter], mut x: u32) -> u32 {
        for &l in letters {
            let i = (l >> 1) as usize;
            x = if l & 1 == 0 {
                self.gens[i].image(x)
            } else {
                self.inv[i].image(x)
            };
        }
        x
    }

    pub fn materialize(&self, letters: &[Letter]) -> Perm {
        Perm::from_images_unchecked(
            (0..self.degree as u32)
                .map(|x| self.apply(letters, x))
                .collect(),
        )
    }

    /// Letters of the transversal element u with base^u = point, or None
    /// when the point is outside the basic orbit.
    pub fn transversal(&self, level: usize, point: u32) -> Option<Vec<Letter>> {
        let lev = &self.levels[level];
        if lev.label[point as usize] == UNSEEN {
            return None;
        }
        let mut out = Vec::new();
        self.trace_forward(level, point, &mut out);
        Some(out)
    }

    /// The unique element with the given base images, as letters.
    pub fn element_from_base_images(&self, images: &[u32]) -> Option<Vec<Letter>> {
        assert_eq!(images.len(), self.levels.len());
        let mut cur = images.to_vec();
        let mut parts: Vec<Vec<Letter>> = Vec::with_capacity(self.levels.len());
        for l in 0..self.levels.len() {
            let gamma = cur[l];
            if self.levels[l].label[gamma as usize] == UNSEEN {
                return None;
            }
            let mut back = Vec::new();
            self.trace_inverse(l, gamma, &mut back);
            for c in cur.iter_mut().skip(l + 1) {
                *c = self.apply(&back, *c);
            }
            let mut u = Vec::new();
            self.trace_forward(l, gamma, &mut u);
            parts.push(u);
        }
        Some(parts.into_iter().rev().flatten().collect())
    }

    /// Every group element, materialized; intended for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = Vec::new();
        self.for_each_element(|g| {
            out.push(g);
            true
        });
        out
    }

    /// Calls `f` on every group element until it returns false.
    pub fn for_each_element(&self, mut f: impl FnMut(Perm) -> bool) {
        let k = self.levels.len();
        let mut idx = vec![0usize; k];
        let transversals: Vec<Vec<Vec<Letter>>> = self
            .levels
            .iter()
            .enumerate()
            .map(|(l, lev)| {
                lev.orbit
                    .iter()
                    .map(|&pt| self.transversal(l, pt).expect("orbit point"))
                    .collect()
            })
            .collect();
        loop {
            let letters: Vec<Letter> = (0..k)
                .rev()
                .flat_map(|l| transversals[l][idx[l]].iter().copied())
                .collect();
            if !f(self.materialize(&letters)) {
                return;
            }
            let mut l = 0;
            loop {
                if l == k {
                    return;
                }
                idx[l] += 1;
                if idx[l] < self.levels[l].orbit.len() {
                    break;
                }
                idx[l] = 0;
                l += 1;
            }
        }
    }

    /// Base images of a permutation (a complete invariant for group members).
    pub fn base_images(&self, g: &Perm) -> Vec<u32> {
        self.levels.iter().map(|l| g.image(l.base)).collect()
    }

    fn push_level(&mut self, base: u32) {
        let mut label = vec![UNSEEN; self.degree];
        label[base as usize] = ROOT;
        self.levels.push(Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            label,
        });
    }

    fn eval(&self, w: &Word, x: u32) -> u32 {
        let x = match &w.head {
            Some(h) => h.image(x),
            None => x,
        };
        self.apply(&w.letters, x)
    }

    fn is_identity(&self, w: &Word) -> bool {
        match &self.cert {
            Cert::All => (0..self.degree as u32).all(|x| self.eval(w, x) == x),
            Cert::Points(pts) => pts.iter().all(|&x| self.eval(w, x) == x),
        }
    }

    fn trace_forward(&self, level: usize, mut point: u32, out: &mut Vec<Letter>) {
        let lev = &self.levels[level];
        let start = out.len();
        while point != lev.base {
            let g = lev.label[point as usize] as usize;
            out.push(fwd(g));
            point = self.inv[g].image(point);
        }
        out[start..].reverse();
    }

    fn trace_inverse(&self, level: usize, mut point: u32, out: &mut Vec<Letter>) {
        let lev = &self.levels[level];
        while point != lev.base {
            let g = lev.label[point as usize] as usize;
            out.push(bwd(g));
            point = self.inv[g].image(point);
        }
    }

    fn strip(&self, mut w: Word, from: usize) -> (Word, usize) {
        for l in from..self.levels.len() {
            let img = self.eval(&w, self.levels[l].base);
            if self.levels[l].label[img as usize] == UNSEEN {
                return (w, l);
            }
            self.trace_inverse(l, img, &mut w.letters);
        }
        let n = self.levels.len();
        (w, n)
    }

    /// Adds a sifting residue as a new strong generator at levels `from..=j`
    /// (extending the base when j is past the end). Returns the top level touched.
    fn install(&mut self, res: Word, from: usize, j: usize) -> usize {
        let perm = match (&res.head, res.letters.is_empty()) {
            (Some(h), true) => h.clone(),
            _ => Perm::from_images_unchecked(
                (0..self.degree as u32)
                    .map(|x| self.eval(&res, x))
                    .collect(),
            ),
        };
        if j == self.levels.len() {
            let b = perm
                .first_moved()
                .expect("nontrivial residue moves a point");
            self.push_level(b);
        }
        let t = self.gens.len();
        self.inv.push(perm.inverse());
        self.gens.push(perm);
        for m in from..=j {
            self.levels[m].gens.push(t);
            self.rebuild_orbit(m);
        }
        j
    }

    fn rebuild_orbit(&mut self, level: usize) {
        let gens = &self.gens;
        let lev = &mut self.levels[level];
        for &x in &lev.orbit {
            lev.label[x as usize] = UNSEEN;
        }
        lev.label[lev.base as usize] = ROOT;
        lev.orbit.clear();
        lev.orbit.push(lev.base);
        let mut i = 0;
        while i < lev.orbit.len() {
            let x = lev.orbit[i];
            for &g in &lev.gens {
                let y = gens[g].image(x);
                if lev.label[y as usize] == UNSEEN {
                    lev.label[y as usize] = g as u32;
                    lev.orbit.push(y);
                }
            }
            i += 1;
        }
    }

    /// Runs Schreier-Sims downwards from `top`, assuming levels above `top`
    /// already form a BSGS for their stabilizers.
    fn complete(&mut self, top: usize) {
        let mut i = top as isize;
        while i >= 0 {
            let l = i as usize;
            let mut restart = None;
            'scan: for oi in 0..self.levels[l].orbit.len() {
                let beta = self.levels[l].orbit[oi];
                for si in 0..self.levels[l].gens.len() {
                    let s = self.levels[l].gens[si];
                    let gamma = self.gens[s].image(beta);
                    if self.levels[l].label[gamma as usize] == s as u32
                        && self.inv[s].image(gamma) == beta
                    {
                        continue;
                    }
                    let mut w = Word::default();
                    self.trace_forward(l, beta, &mut w.letters);
                    w.letters.push(fwd(s));
                    self.trace_inverse(l, gamma, &mut w.letters);
                    let (res, j) = self.strip(w, l + 1);
                    if j < self.levels.len() || !self.is_identity(&res) {
                        restart = Some(self.install(res, l + 1, j));
                        break 'scan;
                    }
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }
}
