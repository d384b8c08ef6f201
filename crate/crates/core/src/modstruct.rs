//! Structure of the natural module: invariant subspaces, splitting,
//! composition flags and endomorphism dimensions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::grp::MatrixGroup;
use crate::matfq::{
    nullspace, solve_linear, spin_vector, unit, LinearSolution, Matrix, Section, Subspace,
};

const MEATAXE_SEED: u64 = 0x6d65_6174;
const MEATAXE_TRIES: usize = 32;
const MAX_WORD: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantSubspace {
    Proper(Subspace),
    Irreducible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Splitting {
    Complement(Subspace),
    NoComplement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrStatus {
    CompletelyReducible,
    NotCompletelyReducible,
}

/// Flag and (when completely reducible) direct-sum data of the natural module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecomposition {
    /// V = F_0 > F_1 > ... > F_r = 0, each quotient irreducible.
    pub flag: Vec<Subspace>,
    pub summands: Option<Vec<Subspace>>,
    pub cr: CrStatus,
    pub r: usize,
    /// Endomorphism dimension of each summand.
    pub endo_dims: Option<Vec<usize>>,
    /// Number of absolutely irreducible summands.
    pub s: Option<usize>,
}

impl ModuleDecomposition {
    pub fn is_cr(&self) -> bool {
        self.cr == CrStatus::CompletelyReducible
    }

    /// Sections F_{i-1} / F_i of the flag, top first.
    pub fn sections(&self, field: &Field) -> Vec<Section> {
        self.flag
            .windows(2)
            .map(|w| Section::new(field, &w[0], &w[1]))
            .collect()
    }
}

/// A module given by the matrices by which generators act on row vectors.
#[derive(Clone, Debug)]
pub struct Module<'a> {
    field: &'a Field,
    dim: usize,
    gens: Vec<Matrix>,
}

impl<'a> Module<'a> {
    pub fn new(field: &'a Field, dim: usize, gens: Vec<Matrix>) -> Self {
        Module { field, dim, gens }
    }

    pub fn of(g: &'a MatrixGroup) -> Self {
        Module::new(g.field(), g.dim(), g.generators().to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn generators(&self) -> &[Matrix] {
        &self.gens
    }

    /// The submodule `u` in the coordinates of its RREF basis.
    pub fn restrict(&self, u: &Subspace) -> Module<'a> {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let rows = u
                    .basis()
                    .iter()
                    .map(|b| u.coordinates(&g.vec_mul(self.field, b)))
                    .collect();
                Matrix::from_rows(rows).expect("square")
            })
            .collect();
        Module::new(self.field, u.dim(), gens)
    }

    /// The quotient by the submodule `w`.
    pub fn quotient(&self, w: &Subspace) -> (Module<'a>, Section) {
        let sec = Section::new(self.field, &Subspace::full(self.dim), w);
        let gens = self
            .gens
            .iter()
            .map(|g| sec.action(self.field, g))
            .collect();
        (Module::new(self.field, sec.dim(), gens), sec)
    }

    fn transposed(&self) -> Vec<Matrix> {
        self.gens.iter().map(Matrix::transpose).collect()
    }

    pub fn is_invariant(&self, u: &Subspace) -> bool {
        u.is_invariant(self.field, &self.gens)
    }

    /// A proper nonzero invariant subspace, or a proof that none exists.
    pub fn find_invariant_subspace(&self) -> InvariantSubspace {
        let (field, d) = (self.field, self.dim);
        if d == 1 {
            return InvariantSubspace::Irreducible;
        }
        let best = (0..d)
            .map(|i| spin_vector(field, &self.gens, &unit(d, i)))
            .filter(Subspace::is_proper_nonzero)
            .min();
        if let Some(u) = best {
            return InvariantSubspace::Proper(u);
        }

        let tgens = self.transposed();
        let mut rng = ChaCha8Rng::seed_from_u64(MEATAXE_SEED);
        let mut fallback: Option<(usize, Vec<Vec<Elem>>, Vec<Vec<Elem>>)> = None;
        for _ in 0..MEATAXE_TRIES {
            let a = self.random_algebra_element(&mut rng);
            let v: Vec<Elem> = (0..d).map(|_| rng.gen_range(0..field.q())).collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let m = order_polynomial(field, &a, &v);
            for p in irreducible_factors(field, &m) {
                let b = eval_matrix_poly(field, &p, &a);
                let kernel = nullspace(field, &b.transpose());
                let tkernel = nullspace(field, &b);
                if kernel.is_empty() {
                    continue;
                }
                let u = spin_vector(field, &self.gens, &kernel[0]);
                if !u.is_full() {
                    return InvariantSubspace::Proper(u);
                }
                let w = spin_vector(field, &tgens, &tkernel[0]);
                if !w.is_full() {
                    return InvariantSubspace::Proper(w.annihilator(field));
                }
                if kernel.len() == p.len() - 1 {
                    return InvariantSubspace::Irreducible;
                }
                if fallback.as_ref().is_none_or(|f| kernel.len() < f.0) {
                    fallback = Some((kernel.len(), kernel, tkernel));
                }
            }
        }

        // no element with a small kernel turned up: spin every point of the smallest kernels
        let Some((_, kernel, tkernel)) = fallback else {
            return self.exhaustive_search();
        };
        for v in projective_points(field, &kernel) {
            let u = spin_vector(field, &self.gens, &v);
            if !u.is_full() {
                return InvariantSubspace::Proper(u);
            }
        }
        for w in projective_points(field, &tkernel) {
            let u = spin_vector(field, &tgens, &w);
            if !u.is_full() {
                return InvariantSubspace::Proper(u.annihilator(field));
            }
        }
        InvariantSubspace::Irreducible
    }

    fn exhaustive_search(&self) -> InvariantSubspace {
        let full: Vec<Vec<Elem>> = (0..self.dim).map(|i| unit(self.dim, i)).collect();
        for v in projective_points(self.field, &full) {
            let u = spin_vector(self.field, &self.gens, &v);
            if !u.is_full() {
                return InvariantSubspace::Proper(u);
            }
        }
        InvariantSubspace::Irreducible
    }

    fn random_algebra_element(&self, rng: &mut ChaCha8Rng) -> Matrix {
        let (field, d) = (self.field, self.dim);
        let mut acc = Matrix::zero(d, d);
        if self.gens.is_empty() {
            return Matrix::identity(d);
        }
        let terms = rng.gen_range(1..=3);
        for _ in 0..terms {
            let len = rng.gen_range(1..=MAX_WORD);
            let mut w = Matrix::identity(d);
            for _ in 0..len {
                w = w.mul(field, &self.gens[rng.gen_range(0..self.gens.len())]);
            }
            let c = rng.gen_range(1..field.q());
            acc = acc.add(field, &w.scale(field, c));
        }
        let c = rng.gen_range(0..field.q());
        acc.add(field, &Matrix::identity(d).scale(field, c))
    }

    /// Invariant complement of the invariant subspace `w`, if one exists.
    pub fn split(&self, w: &Subspace) -> Result<Splitting> {
        let field = self.field;
        let d = self.dim;
        if !w.is_proper_nonzero() || !self.is_invariant(w) {
            return Err(Error::PreconditionViolated(
                "split needs a proper nonzero invariant subspace".into(),
            ));
        }
        let m = w.dim();
        let free: Vec<usize> = (0..d).filter(|c| !w.pivots().contains(c)).collect();
        let k = free.len();
        let var = |j: usize, i: usize| j * m + i;
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        let mut rhs: Vec<Elem> = Vec::new();
        for g in &self.gens {
            // action on W in its basis
            let gw: Vec<Vec<Elem>> = w
                .basis()
                .iter()
                .map(|b| w.coordinates(&g.vec_mul(field, b)))
                .collect();
            // e_j g = c_j + y_j W with c_j supported on the free columns
            let mut gbar = vec![vec![0; k]; k];
            let mut y = vec![vec![0; m]; k];
            for (j, &fc) in free.iter().enumerate() {
                let img = g.vec_mul(field, &unit(d, fc));
                let c = w.reduce(field, &img);
                for (kk, &fc2) in free.iter().enumerate() {
                    gbar[j][kk] = c[fc2];
                }
                let diff: Vec<Elem> = img.iter().zip(&c).map(|(&a, &b)| field.sub(a, b)).collect();
                y[j] = w.coordinates(&diff);
            }
            // y_j + x_j G_W = sum_k gbar_jk x_k
            for j in 0..k {
                for i in 0..m {
                    let mut row = vec![0; k * m];
                    for l in 0..m {
                        row[var(j, l)] = field.add(row[var(j, l)], gw[l][i]);
                    }
                    for kk in 0..k {
                        row[var(kk, i)] = field.sub(row[var(kk, i)], gbar[j][kk]);
                    }
                    rows.push(row);
                    rhs.push(field.neg(y[j][i]));
                }
            }
        }
        let x = if rows.is_empty() {
            vec![0; k * m]
        } else {
            let a = Matrix::from_rows(rows).expect("rectangular");
            match solve_linear(field, &a, &rhs) {
                LinearSolution::Solvable { particular, .. } => particular,
                LinearSolution::Unsolvable => return Ok(Splitting::NoComplement),
            }
        };
        let vecs: Vec<Vec<Elem>> = free
            .iter()
            .enumerate()
            .map(|(j, &fc)| {
                let mut v = unit(d, fc);
                for (i, b) in w.basis().iter().enumerate() {
                    let c = x[var(j, i)];
                    if c != 0 {
                        for (o, &bb) in v.iter_mut().zip(b) {
                            *o = field.add(*o, field.mul(c, bb));
                        }
                    }
                }
                v
            })
            .collect();
        Ok(Splitting::Complement(Subspace::span(field, d, &vecs)))
    }

    /// Composition flag from the whole space down to zero.
    pub fn flag(&self) -> Vec<Subspace> {
        let d = self.dim;
        match self.find_invariant_subspace() {
            InvariantSubspace::Irreducible => vec![Subspace::full(d), Subspace::zero(d)],
            InvariantSubspace::Proper(w) => {
                let (quot, sec) = self.quotient(&w);
                let mut out: Vec<Subspace> = quot
                    .flag()
                    .iter()
                    .map(|s| {
                        let lifted: Vec<Vec<Elem>> =
                            s.basis().iter().map(|c| sec.lift(self.field, c)).collect();
                        Subspace::span(self.field, d, &lifted).sum(self.field, &w)
                    })
                    .collect();
                out.pop();
                let sub = self.restrict(&w);
                out.extend(sub.flag().iter().map(|s| s.embed(self.field, w.basis(), d)));
                out
            }
        }
    }

    /// Irreducible summands when the module is completely reducible.
    pub fn summands(&self) -> Option<Vec<Subspace>> {
        let d = self.dim;
        match self.find_invariant_subspace() {
            InvariantSubspace::Irreducible => Some(vec![Subspace::full(d)]),
            InvariantSubspace::Proper(w) => {
                let Ok(Splitting::Complement(c)) = self.split(&w) else {
                    return None;
                };
                let mut out = Vec::new();
                for u in [&w, &c] {
                    let parts = self.restrict(u).summands()?;
                    out.extend(parts.iter().map(|s| s.embed(self.field, u.basis(), d)));
                }
                Some(out)
            }
        }
    }

    pub fn decompose(&self) -> ModuleDecomposition {
        let field = self.field;
        match self.summands() {
            Some(mut summands) => {
                summands.sort();
                let endo: Vec<usize> = summands
                    .iter()
                    .map(|u| self.restrict(u).endo_dim_unchecked())
                    .collect();
                // flag from partial sums of the summands
                let mut flag = vec![Subspace::zero(self.dim)];
                for u in summands.iter().rev() {
                    let next = flag.last().expect("nonempty").sum(field, u);
                    flag.push(next);
                }
                flag.reverse();
                ModuleDecomposition {
                    r: summands.len(),
                    s: Some(endo.iter().filter(|&&e| e == 1).count()),
                    endo_dims: Some(endo),
                    summands: Some(summands),
                    cr: CrStatus::CompletelyReducible,
                    flag,
                }
            }
            None => {
                let flag = self.flag();
                ModuleDecomposition {
                    r: flag.len() - 1,
                    flag,
                    summands: None,
                    cr: CrStatus::NotCompletelyReducible,
                    endo_dims: None,
                    s: None,
                }
            }
        }
    }

    /// Dimension of the commutant {X : X g = g X for every generator}.
    pub fn endo_dim(&self) -> Result<usize> {
        match self.find_invariant_subspace() {
            InvariantSubspace::Irreducible => Ok(self.endo_dim_unchecked()),
            InvariantSubspace::Proper(_) => Err(Error::NotIrreducible),
        }
    }

    fn endo_dim_unchecked(&self) -> usize {
        let (field, k) = (self.field, self.dim);
        let var = |i: usize, j: usize| i * k + j;
        let mut rows = Vec::new();
        for g in &self.gens {
            // (Xg - gX)_{ij} = sum_l X_il g_lj - g_il X_lj
            for i in 0..k {
                for j in 0..k {
                    let mut row = vec![0; k * k];
                    for l in 0..k {
                        row[var(i, l)] = field.add(row[var(i, l)], g.get(l, j));
                        row[var(l, j)] = field.sub(row[var(l, j)], g.get(i, l));
                    }
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return k * k;
        }
        let a = Matrix::from_rows(rows).expect("rectangular");
        k * k - a.rank(field)
    }
}

pub fn find_invariant_subspace(g: &MatrixGroup) -> InvariantSubspace {
    Module::of(g).find_invariant_subspace()
}

pub fn split(g: &MatrixGroup, w: &Subspace) -> Result<Splitting> {
    Module::of(g).split(w)
}

pub fn decompose(g: &MatrixGroup) -> ModuleDecomposition {
    Module::of(g).decompose()
}

/// Endomorphism dimension of the irreducible submodule `u`.
pub fn endo_dim(g: &MatrixGroup, u: &Subspace) -> Result<usize> {
    let m = Module::of(g);
    if !m.is_invariant(u) || u.is_zero() {
        return Err(Error::NotIrreducible);
    }
    m.restrict(u).endo_dim()
}

pub fn is_absolutely_irreducible(g: &MatrixGroup) -> bool {
    Module::of(g).endo_dim() == Ok(1)
}

/// Nonzero vectors of span(basis) up to scalars (first nonzero coordinate 1).
fn projective_points(field: &Field, basis: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let k = basis.len();
    let q = field.q() as u64;
    let ambient = basis.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for lead in 0..k {
        let tail = k - lead - 1;
        for code in 0..q.pow(tail as u32) {
            let mut coeffs = vec![0; k];
            coeffs[lead] = 1;
            let mut c = code;
            for x in coeffs[lead + 1..].iter_mut() {
                *x = (c % q) as Elem;
                c /= q;
            }
            out.push(crate::matfq::combine(field, &coeffs, basis, ambient));
        }
    }
    out
}

/// Monic polynomial of least degree with v * m(a) = 0, ascending coefficients.
fn order_polynomial(field: &Field, a: &Matrix, v: &[Elem]) -> Vec<Elem> {
    let d = v.len();
    let mut krylov: Vec<Vec<Elem>> = vec![v.to_vec()];
    let mut span = Subspace::span(field, d, &krylov);
    loop {
        let next = a.vec_mul(field, krylov.last().expect("nonempty"));
        if !span.insert(field, &next) {
            let k = krylov.len();
            let mut cols = Matrix::zero(d, k);
            for (j, kv) in krylov.iter().enumerate() {
                for i in 0..d {
                    cols.set(i, j, kv[i]);
                }
            }
            let LinearSolution::Solvable { particular, .. } = solve_linear(field, &cols, &next)
            else {
                unreachable!("dependent vector lies in the span");
            };
            let mut poly: Vec<Elem> = particular.iter().map(|&c| field.neg(c)).collect();
            poly.push(1);
            return poly;
        }
        krylov.push(next);
    }
}

fn poly_divmod(field: &Field, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (vec![0], rem);
    }
    let lead_inv = field.inv(b[db]).expect("nonzero leading coefficient");
    let mut quot = vec![0; rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = field.mul(rem[i + db], lead_inv);
        quot[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                rem[i + j] = field.sub(rem[i + j], field.mul(c, bj));
            }
        }
    }
    rem.truncate(db.max(1));
    (quot, rem)
}

/// Distinct monic irreducible factors, smallest degree first.
fn irreducible_factors(field: &Field, m: &[Elem]) -> Vec<Vec<Elem>> {
    let q = field.q() as u64;
    let mut rest = m.to_vec();
    let mut out = Vec::new();
    let mut k = 1;
    while rest.len() > 2 * k {
        for code in 0..q.pow(k as u32) {
            let mut p: Vec<Elem> = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                p.push((c % q) as Elem);
                c /= q;
            }
            p.push(1);
            let mut found = false;
            loop {
                let (quot, rem) = poly_divmod(field, &rest, &p);
                if rem.iter().any(|&x| x != 0) {
                    break;
                }
                rest = quot;
                found = true;
            }
            if found {
                out.push(p);
            }
            if rest.len() - 1 < 2 * k {
                break;
            }
        }
        k += 1;
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out.sort_by_key(Vec::len);
    out
}

fn eval_matrix_poly(field: &Field, p: &[Elem], a: &Matrix) -> Matrix {
    let d = a.rows();
    let mut acc = Matrix::zero(d, d);
    for &c in p.iter().rev() {
        acc = acc
            .mul(field, a)
            .add(field, &Matrix::identity(d).scale(field, c));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<Elem>>) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    // ΓL(1,4) inside GL(2,2): multiplication by x and the Frobenius
    fn gamma_l_1_4(f: &Field) -> Vec<Matrix> {
        vec![
            m(vec![vec![0, 1], vec![1, 1]]),
            m(vec![vec![1, 0], vec![1, 1]]),
        ]
        .into_iter()
        .map(|g| g.map(|x| f.from_int(x as i64)))
        .collect()
    }

    #[test]
    fn identity_module_returns_first_line() {
        let f = Field::prime(2).unwrap();
        let md = Module::new(&f, 2, vec![]);
        let InvariantSubspace::Proper(u) = md.find_invariant_subspace() else {
            panic!()
        };
        assert_eq!(u.basis(), &[vec![0, 1]]);
        assert!(matches!(md.split(&u).unwrap(), Splitting::Complement(_)));
    }

    #[test]
    fn unitriangular_does_not_split() {
        let f = Field::prime(2).unwrap();
        let md = Module::new(&f, 2, vec![m(vec![vec![1, 0], vec![1, 1]])]);
        let InvariantSubspace::Proper(u) = md.find_invariant_subspace() else {
            panic!()
        };
        assert_eq!(u.dim(), 1);
        assert_eq!(md.split(&u).unwrap(), Splitting::NoComplement);
        let dec = md.decompose();
        assert!(!dec.is_cr());
        assert_eq!(dec.r, 2);
    }

    #[test]
    fn gamma_l_vs_gl_endomorphisms() {
        let f = Field::prime(2).unwrap();
        let gens = gamma_l_1_4(&f);
        let md = Module::new(&f, 2, gens.clone());
        assert_eq!(md.find_invariant_subspace(), InvariantSubspace::Irreducible);
        assert_eq!(md.endo_dim().unwrap(), 1);
        let gl = Module::new(&f, 2, vec![gens[0].clone()]);
        assert_eq!(gl.endo_dim().unwrap(), 2);
    }

    #[test]
    fn direct_sum_decomposes() {
        let f = Field::prime(2).unwrap();
        let g = gamma_l_1_4(&f);
        let gens: Vec<Matrix> = g
            .iter()
            .map(|a| a.direct_sum(&Matrix::identity(2)))
            .chain(g.iter().map(|a| Matrix::identity(2).direct_sum(a)))
            .collect();
        let md = Module::new(&f, 4, gens);
        let dec = md.decompose();
        assert!(dec.is_cr());
        assert_eq!(dec.r, 2);
        assert_eq!(dec.s, Some(2));
        assert_eq!(dec.flag.len(), 3);
        for u in &dec.flag {
            assert!(md.is_invariant(u));
        }
    }

    #[test]
    fn polynomial_helpers() {
        let f = Field::prime(3).unwrap();
        // x^2 - 1 = (x - 1)(x + 1)
        let fac = irreducible_factors(&f, &[2, 0, 1]);
        assert_eq!(fac, vec![vec![1, 1], vec![2, 1]]);
        // x^2 + 1 is irreducible over F_3
        assert_eq!(irreducible_factors(&f, &[1, 0, 1]), vec![vec![1, 0, 1]]);
        let a = m(vec![vec![0, 1], vec![2, 0]]);
        let p = order_polynomial(&f, &a, &[1, 0]);
        assert_eq!(p, vec![1, 0, 1]);
        assert!(eval_matrix_poly(&f, &p, &a).is_zero());
    }
}
