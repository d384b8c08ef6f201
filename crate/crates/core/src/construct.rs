//! Generators for the sharp example families and the building blocks
//! (wreath, direct sum, tensor, scalar extension) used by the fuzzer.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::valuation::is_prime;
use crate::gf::{is_fermat_prime, Elem, Field};
use crate::grp::{Cert, MatrixGroup, Perm, StabChain};
use crate::matfq::{nullspace, Matrix};

/// Largest matrix dimension any constructor produces.
pub const MAX_DIM: usize = 64;

/// Multiplicative order of an invertible matrix.
pub fn matrix_order(field: &Field, m: &Matrix) -> u64 {
    let mut acc = m.clone();
    let mut k = 1;
    while !acc.is_identity() {
        acc = acc.mul(field, m);
        k += 1;
    }
    k
}

/// Group of permutation matrices, with `v * P` moving coordinate i to `perm(i)`.
pub fn permutation_matrices(field: Arc<Field>, n: usize, perms: &[Perm]) -> Result<MatrixGroup> {
    let gens = perms
        .iter()
        .map(|p| Matrix::permutation(&perm_indices(p)))
        .collect();
    MatrixGroup::new(field, n, gens)
}

fn perm_indices(p: &Perm) -> Vec<usize> {
    p.images().iter().map(|&x| x as usize).collect()
}

/// GL(d, q): a diagonal generator of the multiplicative group, one
/// elementary transvection and a cyclic permutation of coordinates.
pub fn general_linear(field: Arc<Field>, d: usize) -> Result<MatrixGroup> {
    let w = field.primitive_element();
    let mut diag = vec![1; d];
    diag[0] = w;
    let mut gens = Vec::new();
    if d > 1 || w != 1 {
        gens.push(Matrix::diagonal(&diag));
    }
    if d > 1 {
        let mut t = Matrix::identity(d);
        t.set(0, 1, 1);
        gens.push(t);
        let cycle: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
        gens.push(Matrix::permutation(&cycle));
    }
    MatrixGroup::new(field, d, gens)
}

/// Invertible upper-triangular matrices.
pub fn upper_triangular(field: Arc<Field>, d: usize) -> Result<MatrixGroup> {
    let w = field.primitive_element();
    let mut gens = unitriangular_gens(&field, d);
    for i in 0..d {
        let mut diag = vec![1; d];
        diag[i] = w;
        if w != 1 {
            gens.push(Matrix::diagonal(&diag));
        }
    }
    MatrixGroup::new(field, d, gens)
}

/// Upper unitriangular matrices, a Sylow p-subgroup of GL(d, q).
pub fn unitriangular(field: Arc<Field>, d: usize) -> Result<MatrixGroup> {
    let gens = unitriangular_gens(&field, d);
    MatrixGroup::new(field, d, gens)
}

fn unitriangular_gens(field: &Field, d: usize) -> Vec<Matrix> {
    let mut gens = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..field.f() {
                let mut t = Matrix::identity(d);
                t.set(i, j, field.p().pow(k));
                gens.push(t);
            }
        }
    }
    gens
}

/// Block-diagonal copies of `h` in the first block plus block permutations
/// from `top` (permutations of the blocks).
pub fn wreath_product(h: &MatrixGroup, top: &[Perm]) -> Result<MatrixGroup> {
    let m = h.dim();
    let k = top.first().map_or(1, Perm::degree);
    let d = m * k;
    if d > MAX_DIM {
        return Err(Error::DimensionTooLarge(d));
    }
    let mut gens: Vec<Matrix> = h
        .generators()
        .iter()
        .map(|g| (1..k).fold(g.clone(), |acc, _| acc.direct_sum(&Matrix::identity(m))))
        .collect();
    for sigma in top {
        let mut idx = vec![0; d];
        for b in 0..k {
            let to = sigma.image(b as u32) as usize;
            for i in 0..m {
                idx[b * m + i] = to * m + i;
            }
        }
        gens.push(Matrix::permutation(&idx));
    }
    Ok(MatrixGroup::new(h.field().clone(), d, gens)?.with_degree_limit(h.degree_limit()))
}

/// Iterated wreath product with a p-cycle: level 1 is `base`, level n is
/// level n-1 wreath C_p.
pub fn tower(base: &MatrixGroup, p: u32, n: u32) -> Result<MatrixGroup> {
    if n == 0 {
        return Err(Error::PreconditionViolated(
            "tower level must be at least 1".into(),
        ));
    }
    let cycle: Vec<u32> = (0..p).collect();
    let c = Perm::from_cycles(p as usize, &[&cycle]);
    let mut g = base.clone();
    for _ in 1..n {
        g = wreath_product(&g, std::slice::from_ref(&c))?;
    }
    Ok(g)
}

/// The semilinear group of the field of order p^p acting on its p-dimensional
/// prime-field space: multiplication by a primitive element and the Frobenius.
pub fn gamma_l_1(p: u32) -> Result<MatrixGroup> {
    let big = Field::new(p, p, None)?;
    let x = big.modulus_root();
    let basis: Vec<Elem> = (0..p).map(|i| p.pow(i)).collect();
    let rows_of = |f: &dyn Fn(Elem) -> Elem| -> Matrix {
        let rows = basis.iter().map(|&b| big.coefficients(f(b))).collect();
        Matrix::from_rows(rows).expect("square")
    };
    let mult = rows_of(&|b| big.mul(b, x));
    let frob = rows_of(&|b| big.frobenius(b));
    MatrixGroup::new(Arc::new(Field::prime(p)?), p as usize, vec![mult, frob])
}

/// Whether g J conj(g)^T = J for the antidiagonal form over F_4.
pub fn preserves_hermitian_form(f4: &Field, g: &Matrix) -> bool {
    let d = g.rows();
    let j = Matrix::permutation(&(0..d).rev().collect::<Vec<_>>());
    let conj = g.map(|x| f4.frobenius(x)).transpose();
    g.mul(f4, &j).mul(f4, &conj) == j
}

/// GU(3, 2) of order 648, preserving x1 conj(y3) + x2 conj(y2) + x3 conj(y1)
/// over F_4, realized over `field` (which must have order an even power of 2).
pub fn gu_3_2(field: Arc<Field>) -> Result<MatrixGroup> {
    if field.p() != 2 || !field.f().is_multiple_of(2) {
        return Err(Error::OddPowerField);
    }
    let f4 = Arc::new(Field::new(2, 2, None)?);
    let probe = MatrixGroup::trivial(f4.clone(), 3);
    let mut chain = StabChain::new(63, Cert::Points(probe.basis_points()));
    let mut gens = Vec::new();
    'search: for code in 0..4u32.pow(9) {
        let data: Vec<Elem> = (0..9).map(|i| (code >> (2 * (8 - i))) & 3).collect();
        let g = Matrix::from_flat(3, 3, data);
        if !preserves_hermitian_form(&f4, &g) {
            continue;
        }
        if chain.add_generator(&probe.perm_of(&g)) {
            gens.push(g);
            if chain.order() == 648 {
                break 'search;
            }
        }
    }
    let g = MatrixGroup::new(f4, 3, gens)?;
    if field.f() == 2 {
        Ok(g)
    } else {
        g.extend_scalars(field)
    }
}

fn closure(field: &Field, gens: &[Matrix]) -> Vec<Matrix> {
    let d = gens[0].rows();
    let mut seen: BTreeSet<Matrix> = BTreeSet::from([Matrix::identity(d)]);
    let mut stack = vec![Matrix::identity(d)];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = x.mul(field, g);
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// An extraspecial 2-group of minus type extended by an element of order p
/// normalizing it, inside GL(p-1, p).
pub fn extraspecial_normalizer(p: u32) -> Result<MatrixGroup> {
    if !is_fermat_prime(p as u64) {
        return Err(Error::PreconditionViolated(format!(
            "{p} is not a Fermat prime"
        )));
    }
    let field = Arc::new(Field::prime(p)?);
    let m = |rows: Vec<Vec<i64>>| {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| field.from_int(x)).collect())
                .collect(),
        )
        .expect("square")
    };
    let e_gens: Vec<Matrix> = match p {
        3 => vec![
            m(vec![vec![0, -1], vec![1, 0]]),
            m(vec![vec![1, 1], vec![1, -1]]),
        ],
        5 => {
            let i2 = Matrix::identity(2);
            let qi = m(vec![vec![2, 0], vec![0, 3]]);
            let qj = m(vec![vec![0, 1], vec![-1, 0]]);
            let da = m(vec![vec![0, 1], vec![1, 0]]);
            let db = m(vec![vec![1, 0], vec![0, -1]]);
            vec![
                qi.kronecker(&field, &i2),
                qj.kronecker(&field, &i2),
                i2.kronecker(&field, &da),
                i2.kronecker(&field, &db),
            ]
        }
        _ => return Err(Error::UnsupportedFermatPrime(p)),
    };
    let elems = closure(&field, &e_gens);
    let p_elem = find_normalizing_element(&field, &e_gens, &elems, p as u64)
        .ok_or_else(|| Error::PreconditionViolated("no normalizing element of order p".into()))?;
    let mut gens = e_gens;
    gens.push(p_elem);
    MatrixGroup::new(field, (p - 1) as usize, gens)
}

/// Backtracks over images t_k of the generators e_k, solving e_k P = P t_k,
/// and returns the first invertible solution with an element of order p among its powers.
fn find_normalizing_element(
    field: &Field,
    gens: &[Matrix],
    elems: &[Matrix],
    p: u64,
) -> Option<Matrix> {
    let d = gens[0].rows();
    let orders: Vec<u64> = elems.iter().map(|e| matrix_order(field, e)).collect();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    search(field, d, gens, elems, &orders, p, 0, &mut rows)
}

#[allow(clippy::too_many_arguments)]
fn search(
    field: &Field,
    d: usize,
    gens: &[Matrix],
    elems: &[Matrix],
    orders: &[u64],
    p: u64,
    level: usize,
    rows: &mut Vec<Vec<Elem>>,
) -> Option<Matrix> {
    let kernel = if rows.is_empty() {
        Vec::new()
    } else {
        nullspace(
            field,
            &Matrix::from_rows(rows.clone()).expect("rectangular"),
        )
    };
    if level > 0 && kernel.is_empty() {
        return None;
    }
    if level == gens.len() {
        for v in &kernel {
            let cand = Matrix::from_flat(d, d, v.clone());
            if !cand.is_invertible(field) {
                continue;
            }
            let o = matrix_order(field, &cand);
            if o.is_multiple_of(p) {
                let x = cand.pow(field, o / p);
                if closure(field, std::slice::from_ref(&x)).len() as u64 == p {
                    return Some(x);
                }
            }
        }
        return None;
    }
    let e = &gens[level];
    let eo = matrix_order(field, e);
    for (t, &to) in elems.iter().zip(orders) {
        if to != eo {
            continue;
        }
        // (e P - P t)_{ij} = sum_l e_il P_lj - P_il t_lj, unknown P_ab at a*d + b
        let before = rows.len();
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![0; d * d];
                for l in 0..d {
                    row[l * d + j] = field.add(row[l * d + j], e.get(i, l));
                    row[i * d + l] = field.sub(row[i * d + l], t.get(l, j));
                }
                rows.push(row);
            }
        }
        if let Some(x) = search(field, d, gens, elems, orders, p, level + 1, rows) {
            return Some(x);
        }
        rows.truncate(before);
    }
    None
}

/// GL(d, q) with q = r^f for the non-defining-characteristic example;
/// requires p odd, r prime with r = 1 mod p, and f a positive power of p.
pub fn counterexample_gl(
    p: u32,
    r: u32,
    f: u32,
    d: usize,
    degree_limit: usize,
) -> Result<MatrixGroup> {
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::PreconditionViolated(format!(
            "p = {p} must be an odd prime"
        )));
    }
    if !is_prime(r as u64) || r % p != 1 {
        return Err(Error::PreconditionViolated(format!(
            "r = {r} must be a prime congruent to 1 mod {p}"
        )));
    }
    let mut e = f;
    while e.is_multiple_of(p) {
        e /= p;
    }
    if e != 1 || f == 1 {
        return Err(Error::PreconditionViolated(format!(
            "f = {f} must be a positive power of {p}"
        )));
    }
    let degree = (r as u128)
        .checked_pow(f * d as u32)
        .map_or(u128::MAX, |x| x - 1);
    if degree > degree_limit as u128 {
        return Err(Error::DegreeTooLarge {
            degree,
            limit: degree_limit,
        });
    }
    let field = Arc::new(Field::new(r, f, None)?);
    Ok(general_linear(field, d)?.with_degree_limit(degree_limit))
}

/// Block-diagonal product A x B acting on the direct sum.
pub fn direct_sum_groups(a: &MatrixGroup, b: &MatrixGroup) -> Result<MatrixGroup> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let (ia, ib) = (Matrix::identity(a.dim()), Matrix::identity(b.dim()));
    let gens = a
        .generators()
        .iter()
        .map(|g| g.direct_sum(&ib))
        .chain(b.generators().iter().map(|g| ia.direct_sum(g)))
        .collect();
    MatrixGroup::new(a.field().clone(), a.dim() + b.dim(), gens)
}

/// Image of A x B acting on the tensor product (a central product).
pub fn tensor_groups(a: &MatrixGroup, b: &MatrixGroup) -> Result<MatrixGroup> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let field = a.field();
    let (ia, ib) = (Matrix::identity(a.dim()), Matrix::identity(b.dim()));
    let gens = a
        .generators()
        .iter()
        .map(|g| g.kronecker(field, &ib))
        .chain(b.generators().iter().map(|g| ia.kronecker(field, g)))
        .collect();
    MatrixGroup::new(field.clone(), a.dim() * b.dim(), gens)
}

pub fn scalar_extension(g: &MatrixGroup, big: Arc<Field>) -> Result<MatrixGroup> {
    g.extend_scalars(big)
}

/// A subgroup of the direct product of `parts` generated by `count`
/// pseudorandom diagonal elements (random words in each factor).
pub fn subdirect_sample(parts: &[MatrixGroup], count: usize, seed: u64) -> Result<MatrixGroup> {
    let field = parts
        .first()
        .ok_or_else(|| Error::InvalidInput("no factors".into()))?
        .field()
        .clone();
    if parts.iter().any(|h| h.field() != &field) {
        return Err(Error::FieldMismatch);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = parts.iter().map(MatrixGroup::dim).sum();
    let gens = (0..count)
        .map(|_| {
            parts
                .iter()
                .map(|h| random_word(&field, h, &mut rng))
                .reduce(|a, b| a.direct_sum(&b))
                .expect("at least one factor")
        })
        .collect();
    MatrixGroup::new(field, d, gens)
}

fn random_word(field: &Field, h: &MatrixGroup, rng: &mut ChaCha8Rng) -> Matrix {
    let mut w = Matrix::identity(h.dim());
    if h.generators().is_empty() {
        return w;
    }
    for _ in 0..rng.gen_range(1..=6) {
        w = w.mul(
            field,
            &h.generators()[rng.gen_range(0..h.generators().len())],
        );
    }
    w
}

/// Named example families exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    GammaL1,
    Gu32,
    Extraspecial,
    GlCounterexample,
}

impl Family {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "gammaL1" => Some(Family::GammaL1),
            "gu32" => Some(Family::Gu32),
            "extraspecial" => Some(Family::Extraspecial),
            "gl-counterexample" => Some(Family::GlCounterexample),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::GammaL1 => "gammaL1",
            Family::Gu32 => "gu32",
            Family::Extraspecial => "extraspecial",
            Family::GlCounterexample => "gl-counterexample",
        }
    }

    /// The prime p whose composition factors the family is about.
    pub fn prime(self, p: u32) -> u32 {
        match self {
            Family::Gu32 => 2,
            _ => p,
        }
    }

    /// Level-`level` member over the field of order `q`. For the general
    /// linear family `level` is the dimension d.
    pub fn build(self, p: u32, q: u32, level: u32, degree_limit: usize) -> Result<MatrixGroup> {
        if self == Family::GlCounterexample {
            let (r, f) = prime_power(q)
                .ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
            return counterexample_gl(p, r, f, level as usize, degree_limit);
        }
        let (r, f) = prime_power(q)
            .ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        let field = Arc::new(Field::new(r, f, None)?);
        let (base, tp) = match self {
            Family::GammaL1 => (gamma_l_1(p)?, p),
            Family::Gu32 => (gu_3_2(field.clone())?, 2),
            Family::Extraspecial => (extraspecial_normalizer(p)?, p),
            Family::GlCounterexample => unreachable!(),
        };
        if r != tp {
            return Err(Error::PreconditionViolated(format!(
                "q = {q} must be a power of {tp}"
            )));
        }
        let base = if base.field().as_ref() == field.as_ref() {
            base
        } else {
            base.extend_scalars(field)?
        };
        tower(&base.with_degree_limit(degree_limit), tp, level)
    }
}

/// (r, f) with q = r^f, r prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let r = (2..=q).find(|&r| q.is_multiple_of(r))?;
    let mut n = q;
    let mut f = 0;
    while n.is_multiple_of(r) {
        n /= r;
        f += 1;
    }
    (n == 1).then_some((r, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_l_orders() {
        assert_eq!(gamma_l_1(2).unwrap().order().unwrap(), 6);
        assert_eq!(gamma_l_1(3).unwrap().order().unwrap(), 78);
    }

    #[test]
    fn general_linear_orders() {
        let f = |p, k| Arc::new(Field::new(p, k, None).unwrap());
        assert_eq!(general_linear(f(2, 1), 2).unwrap().order().unwrap(), 6);
        assert_eq!(general_linear(f(3, 1), 2).unwrap().order().unwrap(), 48);
        assert_eq!(general_linear(f(2, 1), 3).unwrap().order().unwrap(), 168);
        assert_eq!(general_linear(f(2, 2), 2).unwrap().order().unwrap(), 180);
        assert_eq!(general_linear(f(5, 1), 2).unwrap().order().unwrap(), 480);
        assert_eq!(upper_triangular(f(3, 1), 2).unwrap().order().unwrap(), 12);
        assert_eq!(unitriangular(f(2, 1), 3).unwrap().order().unwrap(), 8);
        assert_eq!(unitriangular(f(2, 2), 2).unwrap().order().unwrap(), 4);
    }

    #[test]
    fn unitary_group() {
        let f4 = Arc::new(Field::new(2, 2, None).unwrap());
        let g = gu_3_2(f4.clone()).unwrap();
        assert_eq!(g.order().unwrap(), 648);
        assert!(g
            .generators()
            .iter()
            .all(|m| preserves_hermitian_form(&f4, m)));
        assert_eq!(
            gu_3_2(Arc::new(Field::prime(2).unwrap())).unwrap_err(),
            Error::OddPowerField
        );
        assert_eq!(
            gu_3_2(Arc::new(Field::new(2, 3, None).unwrap())).unwrap_err(),
            Error::OddPowerField
        );
    }

    #[test]
    fn extraspecial_orders() {
        assert_eq!(extraspecial_normalizer(3).unwrap().order().unwrap(), 24);
        assert_eq!(extraspecial_normalizer(5).unwrap().order().unwrap(), 160);
        assert_eq!(
            extraspecial_normalizer(17).unwrap_err(),
            Error::UnsupportedFermatPrime(17)
        );
        assert!(matches!(
            extraspecial_normalizer(7),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn wreath_orders() {
        let f2 = Arc::new(Field::prime(2).unwrap());
        let c2 = Perm::from_cycles(2, &[&[0, 1]]);
        let triv = MatrixGroup::trivial(f2, 1);
        assert_eq!(
            wreath_product(&triv, std::slice::from_ref(&c2))
                .unwrap()
                .order()
                .unwrap(),
            2
        );
        let g = gamma_l_1(2).unwrap();
        assert_eq!(wreath_product(&g, &[c2]).unwrap().order().unwrap(), 72);
        assert_eq!(tower(&g, 2, 3).unwrap().order().unwrap(), 72 * 72 * 2);
    }

    #[test]
    fn counterexample_preconditions() {
        assert!(matches!(
            counterexample_gl(3, 7, 1, 1, 1 << 20),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            counterexample_gl(3, 5, 3, 1, 1 << 20),
            Err(Error::PreconditionViolated(_))
        ));
        let g = counterexample_gl(3, 7, 3, 1, 1 << 20).unwrap();
        assert_eq!(g.order().unwrap(), 342);
        assert!(matches!(
            counterexample_gl(3, 7, 3, 3, 1 << 20),
            Err(Error::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(343), Some((7, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(2), Some((2, 1)));
    }
}
