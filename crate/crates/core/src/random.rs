//! Random sampling of scalars, group elements and points.
//!
//! Over Q entries are small integers in `[-3, 3]`; over `F_p` they are
//! uniform residues.

use std::sync::Arc;

use rand::Rng;

use crate::freealg::AlgebraPresentation;
use crate::linear::{FieldValue, Matrix, ScalarField, Vector};
use crate::points::{GroupElement, PointData};

pub const RATIONAL_RANGE: i64 = 3;

pub fn random_scalar<R: Rng + ?Sized>(field: ScalarField, rng: &mut R) -> FieldValue {
    match field {
        ScalarField::Rationals => field.from_i64(rng.random_range(-RATIONAL_RANGE..=RATIONAL_RANGE)),
        ScalarField::Prime(p) => field.from_i64(rng.random_range(0..p) as i64),
    }
}

pub fn random_vector<R: Rng + ?Sized>(field: ScalarField, n: usize, rng: &mut R) -> Vector {
    (0..n).map(|_| random_scalar(field, rng)).collect()
}

pub fn random_matrix<R: Rng + ?Sized>(field: ScalarField, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let data = (0..rows).map(|_| random_vector(field, cols, rng)).collect();
    Matrix::from_rows(field, data).expect("entries are in the field")
}

/// Uniform over invertible matrices with entries from [`random_scalar`]
/// (rejection sampling).
pub fn random_group_element<R: Rng + ?Sized>(field: ScalarField, n: usize, rng: &mut R) -> GroupElement {
    loop {
        if let Ok(g) = GroupElement::new(random_matrix(field, n, n, rng)) {
            return g;
        }
    }
}

/// A random tuple, not necessarily valid.
pub fn random_tuple<R: Rng + ?Sized>(algebra: &Arc<AlgebraPresentation>, n: usize, rng: &mut R) -> PointData {
    let field = algebra.field();
    let mats = (0..algebra.m()).map(|_| random_matrix(field, n, n, rng)).collect();
    PointData::new(algebra.clone(), mats, random_vector(field, n, rng)).expect("shapes agree")
}

/// A random valid point, by rejection; `None` after `max_tries` misses.
/// Practical for the free algebra, where cyclicity is generic.
pub fn random_valid_point<R: Rng + ?Sized>(
    algebra: &Arc<AlgebraPresentation>,
    n: usize,
    rng: &mut R,
    max_tries: usize,
) -> Option<PointData> {
    (0..max_tries).map(|_| random_tuple(algebra, n, rng)).find(|p| p.is_valid())
}

/// A random commuting pair `(g D_1 g^{-1}, g D_2 g^{-1})` with diagonal
/// `D_i` and cyclic vector `g·(1, ..., 1)`, a point of the commutative plane
/// whenever the pairs `(D_1[i], D_2[i])` are distinct.
pub fn random_plane_point<R: Rng + ?Sized>(field: ScalarField, n: usize, rng: &mut R) -> PointData {
    let plane = Arc::new(AlgebraPresentation::commutative_plane(field));
    loop {
        let diag: Vec<Matrix> = (0..2)
            .map(|_| {
                let mut d = Matrix::zeros(field, n, n);
                for i in 0..n {
                    d.set(i, i, random_scalar(field, rng));
                }
                d
            })
            .collect();
        let p = PointData::new(plane.clone(), diag, vec![field.one(); n]).expect("shapes agree");
        if p.is_cyclic() {
            let g = random_group_element(field, n, rng);
            return p.gl_act(&g).expect("same field and size");
        }
    }
}
