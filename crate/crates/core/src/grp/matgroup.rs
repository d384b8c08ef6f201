use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::config::DEFAULT_DEGREE_LIMIT;
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::grp::{Cert, CosetAction, Perm, PermGroup};
use crate::matfq::Matrix;

/// A subgroup of GL(d, q) given by generator matrices acting on row vectors.
/// Group-theoretic work happens in the faithful action on the q^d - 1
/// nonzero vectors, built on first use.
pub struct MatrixGroup {
    field: Arc<Field>,
    d: usize,
    gens: Vec<Matrix>,
    degree_limit: usize,
    perm: OnceLock<PermGroup>,
}

impl fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixGroup")
            .field("field", &self.field)
            .field("d", &self.d)
            .field("gens", &self.gens.len())
            .finish()
    }
}

impl Clone for MatrixGroup {
    fn clone(&self) -> Self {
        let perm = OnceLock::new();
        if let Some(p) = self.perm.get() {
            let _ = perm.set(p.clone());
        }
        MatrixGroup {
            field: self.field.clone(),
            d: self.d,
            gens: self.gens.clone(),
            degree_limit: self.degree_limit,
            perm,
        }
    }
}

impl MatrixGroup {
    pub fn new(field: Arc<Field>, d: usize, gens: Vec<Matrix>) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionMismatch(
                "dimension must be positive".into(),
            ));
        }
        for g in &gens {
            if g.rows() != d || g.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "generator is {}x{}, expected {d}x{d}",
                    g.rows(),
                    g.cols()
                )));
            }
            g.check_entries(&field)?;
            if !g.is_invertible(&field) {
                return Err(Error::NotInvertible);
            }
        }
        Ok(MatrixGroup {
            field,
            d,
            gens,
            degree_limit: DEFAULT_DEGREE_LIMIT,
            perm: OnceLock::new(),
        })
    }

    pub fn trivial(field: Arc<Field>, d: usize) -> Self {
        Self::new(field, d, Vec::new()).expect("valid trivial group")
    }

    pub fn with_degree_limit(mut self, limit: usize) -> Self {
        self.degree_limit = limit;
        self
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn generators(&self) -> &[Matrix] {
        &self.gens
    }
    pub fn degree_limit(&self) -> usize {
        self.degree_limit
    }

    /// Number of nonzero vectors, the degree of the vector action.
    pub fn action_degree(&self) -> u128 {
        (self.field.q() as u128).pow(self.d as u32) - 1
    }

    /// Faithful permutation action on nonzero vectors, points ordered by
    /// the big-endian base-q code of the vector (point = code - 1).
    pub fn vector_action(&self) -> Result<&PermGroup> {
        if let Some(p) = self.perm.get() {
            return Ok(p);
        }
        let degree = self.action_degree();
        if degree > self.degree_limit as u128 {
            return Err(Error::DegreeTooLarge {
                degree,
                limit: self.degree_limit,
            });
        }
        let perms = self.gens.iter().map(|g| self.perm_of(g)).collect();
        let g = PermGroup::new(degree as usize, perms, Cert::Points(self.basis_points()));
        Ok(self.perm.get_or_init(|| g))
    }

    /// Points of the standard basis vectors; only the identity fixes all of them.
    pub fn basis_points(&self) -> Vec<u32> {
        (0..self.d).map(|i| self.unit_code(i) - 1).collect()
    }

    fn unit_code(&self, i: usize) -> u32 {
        (self.field.q()).pow((self.d - 1 - i) as u32)
    }

    pub fn encode(&self, v: &[Elem]) -> u32 {
        let q = self.field.q();
        v.iter().fold(0, |acc, &x| acc * q + x)
    }

    pub fn decode(&self, mut code: u32) -> Vec<Elem> {
        let q = self.field.q();
        let mut v = vec![0; self.d];
        for x in v.iter_mut().rev() {
            *x = code % q;
            code /= q;
        }
        v
    }

    /// Permutation induced on nonzero vectors by an invertible matrix.
    pub fn perm_of(&self, g: &Matrix) -> Perm {
        let field = &*self.field;
        let (q, d) = (field.q() as usize, self.d);
        let scaled: Vec<Vec<Vec<Elem>>> = (0..d)
            .map(|i| {
                (0..q as u32)
                    .map(|c| g.row(i).iter().map(|&x| field.mul(c, x)).collect())
                    .collect()
            })
            .collect();
        let n = q.pow(d as u32);
        let mut digits = vec![0usize; d];
        let mut acc = vec![vec![0; d]; d + 1];
        let mut images = Vec::with_capacity(n - 1);
        for _ in 1..n {
            let mut k = d - 1;
            loop {
                digits[k] += 1;
                if digits[k] == q {
                    digits[k] = 0;
                    k -= 1;
                } else {
                    break;
                }
            }
            for i in k..d {
                let (lo, hi) = acc.split_at_mut(i + 1);
                let src = &lo[i];
                let add = &scaled[i][digits[i]];
                for ((o, &a), &b) in hi[0].iter_mut().zip(src).zip(add) {
                    *o = field.add(a, b);
                }
            }
            images.push(self.encode(&acc[d]) - 1);
        }
        Perm::from_images_unchecked(images)
    }

    /// Matrix of a permutation lying in the vector action.
    pub fn matrix_of(&self, p: &Perm) -> Matrix {
        let rows = (0..self.d)
            .map(|i| self.decode(p.image(self.unit_code(i) - 1) + 1))
            .collect();
        Matrix::from_rows(rows).expect("square")
    }

    /// Subgroup given by permutations of the vector action.
    pub fn from_perm_group(&self, sub: PermGroup) -> MatrixGroup {
        let gens = sub.generators().iter().map(|p| self.matrix_of(p)).collect();
        let mg = MatrixGroup {
            field: self.field.clone(),
            d: self.d,
            gens,
            degree_limit: self.degree_limit,
            perm: OnceLock::new(),
        };
        let _ = mg.perm.set(sub);
        mg
    }

    pub fn order(&self) -> Result<u128> {
        Ok(self.vector_action()?.order())
    }

    pub fn is_member(&self, m: &Matrix) -> Result<bool> {
        if m.rows() != self.d || m.cols() != self.d || !m.is_invertible(&self.field) {
            return Ok(false);
        }
        let g = self.vector_action()?;
        Ok(g.contains(&self.perm_of(m)))
    }

    pub fn normal_closure(&self, seeds: &[Matrix]) -> Result<MatrixGroup> {
        let g = self.vector_action()?;
        let perms: Vec<Perm> = seeds.iter().map(|m| self.perm_of(m)).collect();
        Ok(self.from_perm_group(g.normal_closure(&perms)))
    }

    pub fn derived_subgroup(&self) -> Result<MatrixGroup> {
        Ok(self.from_perm_group(self.vector_action()?.derived_subgroup()))
    }

    pub fn coset_action(&self, n: &MatrixGroup) -> Result<CosetAction> {
        let g = self.vector_action()?;
        g.coset_action(n.vector_action()?, self.degree_limit)
    }

    /// Kernel of the homomorphism given by generator images acting on
    /// another domain (`image_cert` certifies identity there).
    pub fn action_kernel(&self, images: &[Perm], image_cert: Cert) -> Result<MatrixGroup> {
        let g = self.vector_action()?;
        let images: Vec<Perm> = self
            .gens
            .iter()
            .zip(images)
            .filter(|(m, _)| !m.is_identity())
            .map(|(_, p)| p.clone())
            .collect();
        Ok(self.from_perm_group(g.action_kernel(&images, image_cert)))
    }

    /// Same group with every entry pushed through a field embedding.
    pub fn extend_scalars(&self, big: Arc<Field>) -> Result<MatrixGroup> {
        let emb = crate::gf::embedding(&self.field, &big)?;
        let gens = self
            .gens
            .iter()
            .map(|m| m.map(|x| emb[x as usize]))
            .collect();
        Ok(MatrixGroup::new(big, self.d, gens)?.with_degree_limit(self.degree_limit))
    }
}
