use crate::gf::{Elem, Field};
use crate::matfq::{combine, Matrix, Subspace};

/// The subquotient `upper / lower` of F^n for nested invariant subspaces,
/// with a fixed basis of representatives.
#[derive(Clone, Debug)]
pub struct Section {
    lower: Subspace,
    reps: Subspace,
}

impl Section {
    pub fn new(field: &Field, upper: &Subspace, lower: &Subspace) -> Self {
        let reduced: Vec<Vec<Elem>> = upper
            .basis()
            .iter()
            .map(|u| lower.reduce(field, u))
            .collect();
        Section {
            lower: lower.clone(),
            reps: Subspace::span(field, upper.ambient(), &reduced),
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn representatives(&self) -> &[Vec<Elem>] {
        self.reps.basis()
    }

    /// Coordinates of the image of an upper-space vector in the section.
    pub fn project(&self, field: &Field, v: &[Elem]) -> Vec<Elem> {
        self.reps.coordinates(&self.lower.reduce(field, v))
    }

    pub fn lift(&self, field: &Field, coords: &[Elem]) -> Vec<Elem> {
        combine(field, coords, self.reps.basis(), self.reps.ambient())
    }

    /// Matrix of the action induced by `g` on the section.
    pub fn action(&self, field: &Field, g: &Matrix) -> Matrix {
        let k = self.dim();
        let mut m = Matrix::zero(k, k);
        for (i, r) in self.reps.basis().iter().enumerate() {
            let img = self.project(field, &g.vec_mul(field, r));
            for (j, &x) in img.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }
}
