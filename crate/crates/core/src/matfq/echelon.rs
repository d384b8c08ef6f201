use std::cmp::Ordering;

use crate::gf::{Elem, Field};
use crate::matfq::Matrix;

/// Canonical reduced row-echelon form, its rank and the pivot columns.
/// Zero rows are kept at the bottom so the shape matches the input.
pub fn rref(field: &Field, m: &Matrix) -> (Matrix, usize, Vec<usize>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Elem>> = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = field.inv(a[r][c]).expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = r;
    (
        Matrix::from_flat(rows, cols, a.into_iter().flatten().collect()),
        rank,
        pivots,
    )
}

/// A subspace of F_q^n stored by its canonical RREF basis, so equal
/// subspaces have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| unit(ambient, i)).collect();
        Subspace {
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn span(field: &Field, ambient: usize, vectors: &[Vec<Elem>]) -> Self {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(field, v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }
    pub fn is_proper_nonzero(&self) -> bool {
        !self.is_zero() && !self.is_full()
    }

    pub fn basis_matrix(&self) -> Matrix {
        if self.basis.is_empty() {
            return Matrix::zero(0, self.ambient);
        }
        Matrix::from_rows(self.basis.clone()).expect("rows have equal length")
    }

    /// Subtracts basis multiples so the result vanishes at every pivot column.
    pub fn reduce(&self, field: &Field, v: &[Elem]) -> Vec<Elem> {
        let mut w = v.to_vec();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                for (x, &y) in w.iter_mut().zip(b) {
                    if y != 0 {
                        *x = field.sub(*x, field.mul(c, y));
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, field: &Field, v: &[Elem]) -> bool {
        self.reduce(field, v).iter().all(|&x| x == 0)
    }

    /// Coordinates of a vector of this subspace with respect to the RREF basis.
    pub fn coordinates(&self, v: &[Elem]) -> Vec<Elem> {
        self.pivots.iter().map(|&c| v[c]).collect()
    }

    /// Adds a vector; returns true when the dimension grew.
    pub fn insert(&mut self, field: &Field, v: &[Elem]) -> bool {
        let mut w = self.reduce(field, v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = field.inv(w[pc]).expect("nonzero");
        for x in w.iter_mut() {
            *x = field.mul(*x, inv);
        }
        for b in self.basis.iter_mut() {
            let c = b[pc];
            if c != 0 {
                for (x, &y) in b.iter_mut().zip(&w) {
                    if y != 0 {
                        *x = field.sub(*x, field.mul(c, y));
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pc);
        self.pivots.insert(pos, pc);
        self.basis.insert(pos, w);
        true
    }

    pub fn sum(&self, field: &Field, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.basis {
            s.insert(field, v);
        }
        s
    }

    /// {w : v . w = 0 for all v in self}, as row vectors.
    pub fn annihilator(&self, field: &Field) -> Subspace {
        let vecs = nullspace(field, &self.basis_matrix());
        Subspace::span(field, self.ambient, &vecs)
    }

    /// Whether v * g stays inside for every generator.
    pub fn is_invariant(&self, field: &Field, gens: &[Matrix]) -> bool {
        gens.iter().all(|g| {
            self.basis
                .iter()
                .all(|b| self.contains(field, &g.vec_mul(field, b)))
        })
    }

    /// Maps a subspace given in coordinates w.r.t. `rows` (a basis of some
    /// subspace of F^n) to the ambient space.
    pub fn embed(&self, field: &Field, rows: &[Vec<Elem>], ambient: usize) -> Subspace {
        let vecs: Vec<Vec<Elem>> = self
            .basis
            .iter()
            .map(|c| combine(field, c, rows, ambient))
            .collect();
        Subspace::span(field, ambient, &vecs)
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    /// Lexicographic order of the RREF basis rows.
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

pub fn unit(n: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// sum_i coeffs[i] * rows[i].
pub fn combine(field: &Field, coeffs: &[Elem], rows: &[Vec<Elem>], ambient: usize) -> Vec<Elem> {
    let mut out = vec![0; ambient];
    for (&c, r) in coeffs.iter().zip(rows) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(r) {
            if x != 0 {
                *o = field.add(*o, field.mul(c, x));
            }
        }
    }
    out
}

/// Smallest subspace containing `seed` and invariant under v -> v * g.
pub fn spin(field: &Field, gens: &[Matrix], seed: &Subspace) -> Subspace {
    let mut space = seed.clone();
    let mut queue: Vec<Vec<Elem>> = seed.basis().to_vec();
    while let Some(v) = queue.pop() {
        if space.is_full() {
            break;
        }
        for g in gens {
            let w = g.vec_mul(field, &v);
            if space.insert(field, &w) {
                queue.push(w);
            }
        }
    }
    space
}

/// Spin of a single vector.
pub fn spin_vector(field: &Field, gens: &[Matrix], v: &[Elem]) -> Subspace {
    let seed = Subspace::span(field, v.len(), &[v.to_vec()]);
    spin(field, gens, &seed)
}

/// Basis of {x : A x = 0} (column vectors).
pub fn nullspace(field: &Field, a: &Matrix) -> Vec<Vec<Elem>> {
    let n = a.cols();
    if a.rows() == 0 {
        return (0..n).map(|i| unit(n, i)).collect();
    }
    let (r, rank, pivots) = rref(field, a);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![0; n];
            x[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate().take(rank) {
                x[pc] = field.neg(r.get(i, fc));
            }
            x
        })
        .collect()
}

/// Solution set of A x = b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Solvable {
        particular: Vec<Elem>,
        kernel: Vec<Vec<Elem>>,
    },
    Unsolvable,
}

/// Solves A x = b; the particular solution has every free variable set to zero.
pub fn solve_linear(field: &Field, a: &Matrix, b: &[Elem]) -> LinearSolution {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    let mut aug = Matrix::zero(a.rows(), n + 1);
    for i in 0..a.rows() {
        for j in 0..n {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, n, b[i]);
    }
    let (r, rank, pivots) = rref(field, &aug);
    if pivots.last() == Some(&n) {
        return LinearSolution::Unsolvable;
    }
    let mut particular = vec![0; n];
    for (i, &pc) in pivots.iter().enumerate().take(rank) {
        particular[pc] = r.get(i, n);
    }
    LinearSolution::Solvable {
        particular,
        kernel: nullspace(field, a),
    }
}
