//! Tangent spaces at points of the Hilbert scheme.
//!
//! Tangent vectors to the based scheme are first-order deformations
//! `(A + εA', y + εy')` that keep the relations; flattened they live in
//! `k^{mn² + n}` (the entries of `A'_1, ..., A'_m` row-major, then `y'`).
//! Such a deformation induces `φ: I → M` with
//! `φ(g_b) = D(g_b)(A)[A']·y + g_b(A)·y'` on the border generators of the
//! ideal, and the `gl_n` directions `(([ξ, A_s])_s, ξy)` are exactly the
//! deformations inducing zero.
//!
//! For the free algebra `I` is a free left module on the border generators,
//! so `Hom(I, M) ≅ M^{#border}` and the long exact sequence of
//! `0 → I → A → M → 0` gives `n - hom(M, M) + ext¹(M, M)`. With relations
//! a homomorphism is fixed by its values `m_b` on the `g_b`, subject to
//! vanishing on the relation ideal; that condition is imposed on `r·w` for
//! all words `w` up to a degree bound.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{differentiate, NCPoly, Word};
use crate::linear::{FieldValue, Matrix, ScalarField, Vector};
use crate::orbits::border_words;
use crate::points::PointData;

/// A first-order deformation `(A'_1, ..., A'_m, y')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentVector {
    pub matrices: Vec<Matrix>,
    pub y: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedTangent {
    pub dimension: usize,
    pub basis: Vec<TangentVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomStatus {
    Exact,
    /// Dimension agreed at degrees `degree - 1` and `degree`.
    Truncated { degree: usize },
    /// No two consecutive degrees up to `max_degree` agreed.
    Unstable { max_degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentReport {
    pub based_tangent_dim: usize,
    pub gl_dim: usize,
    pub hom_i_m_dim: Option<usize>,
    pub hom_mm_dim: usize,
    pub ext1_mm_dim: Option<usize>,
    pub status: HomStatus,
}

impl TangentVector {
    pub fn zero(field: ScalarField, m: usize, n: usize) -> Self {
        TangentVector {
            matrices: vec![Matrix::zeros(field, n, n); m],
            y: vec![field.zero(); n],
        }
    }

    pub fn to_flat(&self) -> Vector {
        let mut v: Vector = self.matrices.iter().flat_map(|a| a.entries().iter().cloned()).collect();
        v.extend(self.y.iter().cloned());
        v
    }

    pub fn from_flat(field: ScalarField, m: usize, n: usize, flat: &[FieldValue]) -> Result<Self> {
        if flat.len() != m * n * n + n {
            return Err(Error::Shape(format!(
                "tangent vector has {} entries, expected {}",
                flat.len(),
                m * n * n + n
            )));
        }
        let matrices = (0..m)
            .map(|s| {
                let rows = (0..n)
                    .map(|i| flat[s * n * n + i * n..s * n * n + i * n + n].to_vec())
                    .collect();
                Matrix::from_rows(field, rows)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TangentVector {
            matrices,
            y: flat[m * n * n..].to_vec(),
        })
    }
}

fn unit_direction(field: ScalarField, m: usize, n: usize, index: usize) -> Vec<Matrix> {
    let mut dir = vec![Matrix::zeros(field, n, n); m];
    let (s, rest) = (index / (n * n), index % (n * n));
    dir[s].set(rest / n, rest % n, field.one());
    dir
}

/// Solutions of the linearized relations `D r(A)[A'] = 0`; `y'` is free.
pub fn based_tangent(p: &PointData) -> Result<BasedTangent> {
    p.require_valid()?;
    let (field, m, n) = (p.field(), p.m(), p.n());
    let vars = m * n * n;
    let relations = p.algebra().relations();
    let mut matrix_part: Vec<Vector> = if relations.is_empty() {
        (0..vars)
            .map(|i| (0..vars).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect()
    } else {
        // columns: images of unit directions; rows: relation entries
        let columns = (0..vars)
            .map(|idx| {
                let dir = unit_direction(field, m, n, idx);
                let mut col = Vec::with_capacity(relations.len() * n * n);
                for r in relations {
                    col.extend(differentiate(r, p.matrices(), &dir)?.entries().iter().cloned());
                }
                Ok(col)
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = relations.len() * n * n;
        Matrix::from_columns(field, rows, &columns)?.kernel_basis()
    };
    let mut basis = Vec::with_capacity(matrix_part.len() + n);
    for v in matrix_part.iter_mut() {
        v.extend(std::iter::repeat_n(field.zero(), n));
        basis.push(TangentVector::from_flat(field, m, n, v)?);
    }
    for i in 0..n {
        let mut t = TangentVector::zero(field, m, n);
        t.y[i] = field.one();
        basis.push(t);
    }
    Ok(BasedTangent {
        dimension: basis.len(),
        basis,
    })
}

/// Whether `(A', y')` satisfies the linearized relations at `p`.
pub fn satisfies_linearized_relations(p: &PointData, t: &TangentVector) -> Result<bool> {
    check_shape(p, t)?;
    for r in p.algebra().relations() {
        if !differentiate(r, p.matrices(), &t.matrices)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_shape(p: &PointData, t: &TangentVector) -> Result<()> {
    if t.matrices.len() != p.m() {
        return Err(Error::Arity {
            expected: p.m(),
            found: t.matrices.len(),
        });
    }
    let n = p.n();
    if t.y.len() != n || t.matrices.iter().any(|a| a.rows() != n || a.cols() != n) {
        return Err(Error::Shape(format!("tangent vector does not match n = {n}")));
    }
    if t.matrices.iter().any(|a| a.field() != p.field()) || t.y.iter().any(|x| x.field() != p.field()) {
        return Err(Error::FieldMismatch {
            left: p.field(),
            right: t.y.first().map_or(p.field(), |x| x.field()),
        });
    }
    Ok(())
}

/// `D(w)(A)[A']·y`, folding right to left.
fn word_derivative_on(w: &Word, mats: &[Matrix], dir: &[Matrix], y: &[FieldValue]) -> Vector {
    let letters = w.letters();
    let field = mats[0].field();
    let mut suffix = Vec::with_capacity(letters.len() + 1);
    suffix.push(y.to_vec());
    for &l in letters.iter().rev() {
        let next = mats[l].mul_vec(suffix.last().unwrap()).expect("square tuple");
        suffix.push(next);
    }
    let mut total = vec![field.zero(); y.len()];
    for (k, &l) in letters.iter().enumerate() {
        // letters[k+1..] already applied
        let mut v = dir[l].mul_vec(&suffix[letters.len() - 1 - k]).expect("square tuple");
        for &pl in letters[..k].iter().rev() {
            v = mats[pl].mul_vec(&v).expect("square tuple");
        }
        for (t, x) in total.iter_mut().zip(&v) {
            *t = &*t + x;
        }
    }
    total
}

fn poly_on(f: &NCPoly, mats: &[Matrix], y: &[FieldValue]) -> Vector {
    crate::freealg::apply_poly_to_vector(f, mats, y).expect("square tuple")
}

struct HomContext {
    border: Vec<Word>,
    generators: BTreeMap<Word, NCPoly>,
    kinv: Matrix,
}

fn hom_context(p: &PointData) -> Result<HomContext> {
    p.require_valid()?;
    let form = crate::orbits::canonicalize(p)?;
    let ideal = form.extract_ideal();
    let kb = p.krylov_basis();
    let k = Matrix::from_columns(p.field(), p.n(), &kb.vectors)?;
    Ok(HomContext {
        border: border_words(form.basis_words(), p.m()),
        generators: ideal.generators().clone(),
        kinv: k.inverse()?.expect("Krylov vectors form a basis"),
    })
}

fn hom_values(ctx: &HomContext, p: &PointData, t: &TangentVector) -> BTreeMap<Word, Vector> {
    ctx.border
        .iter()
        .map(|b| {
            let g = &ctx.generators[b];
            let field = p.field();
            let mut v = poly_on(g, p.matrices(), &t.y);
            for (w, c) in g.terms() {
                let d = word_derivative_on(w, p.matrices(), &t.matrices, p.y());
                for (x, dx) in v.iter_mut().zip(&d) {
                    *x = &*x + &(c * dx);
                }
            }
            let coords = ctx.kinv.mul_vec(&v).expect("square");
            debug_assert!(coords.iter().all(|c| c.field() == field));
            (b.clone(), coords)
        })
        .collect()
}

/// The homomorphism `I → M` induced by a tangent vector, as its values on
/// the border generators `g_b` written in the basis `{s(A)y}` of `M`.
pub fn tangent_vector_to_hom(p: &PointData, t: &TangentVector) -> Result<BTreeMap<Word, Vector>> {
    p.require_valid()?;
    if !satisfies_linearized_relations(p, t)? {
        return Err(Error::RelationFailure(
            "tangent vector violates the linearized relations".into(),
        ));
    }
    let ctx = hom_context(p)?;
    Ok(hom_values(&ctx, p, t))
}

/// The based tangent space together with the matrix of
/// [`tangent_vector_to_hom`] on its basis: column `i` is the image of
/// basis vector `i`, concatenated over border words in order.
pub fn tangent_to_hom_matrix(p: &PointData) -> Result<(BasedTangent, Matrix)> {
    let based = based_tangent(p)?;
    let ctx = hom_context(p)?;
    let columns: Vec<Vector> = based
        .basis
        .iter()
        .map(|t| hom_values(&ctx, p, t).into_values().flatten().collect())
        .collect();
    let rows = ctx.border.len() * p.n();
    let matrix = Matrix::from_columns(p.field(), rows, &columns)?;
    Ok((based, matrix))
}

/// The infinitesimal `GL_n` direction `(([ξ, A_s])_s, ξy)`.
pub fn gl_direction(p: &PointData, xi: &Matrix) -> Result<TangentVector> {
    let matrices = p
        .matrices()
        .iter()
        .map(|a| xi.matmul(a)?.checked_sub(&a.matmul(xi)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(TangentVector {
        matrices,
        y: xi.mul_vec(p.y())?,
    })
}

/// Flattened `gl_n` directions for the unit matrices `E_ij`, as columns.
pub fn gl_direction_matrix(p: &PointData) -> Result<Matrix> {
    let (field, n) = (p.field(), p.n());
    let columns = (0..n * n)
        .map(|idx| {
            let mut xi = Matrix::zeros(field, n, n);
            xi.set(idx / n, idx % n, field.one());
            Ok(gl_direction(p, &xi)?.to_flat())
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(field, p.m() * n * n + n, &columns)
}

/// Matrix of `φ ↦ (φA_s^p - A_s^q φ)_s` on `n_q × n_p` matrices `φ`.
fn commutation_map(p: &PointData, q: &PointData) -> Result<Matrix> {
    if p.field() != q.field() {
        return Err(Error::FieldMismatch {
            left: p.field(),
            right: q.field(),
        });
    }
    if p.algebra() != q.algebra() {
        return Err(Error::InvalidArgument("modules over different algebras".into()));
    }
    let (field, np, nq, m) = (p.field(), p.n(), q.n(), p.m());
    let mut out = Matrix::zeros(field, m * nq * np, nq * np);
    for s in 0..m {
        let (ap, aq) = (&p.matrices()[s], &q.matrices()[s]);
        for i in 0..nq {
            for j in 0..np {
                let col = i * np + j;
                // (E_ij A^p)_{il} = A^p_{jl}
                for l in 0..np {
                    let row = s * nq * np + i * np + l;
                    let v = out.get(row, col) + ap.get(j, l);
                    out.set(row, col, v);
                }
                // (A^q E_ij)_{kj} = A^q_{ki}
                for k in 0..nq {
                    let row = s * nq * np + k * np + j;
                    let v = out.get(row, col) - aq.get(k, i);
                    out.set(row, col, v);
                }
            }
        }
    }
    Ok(out)
}

/// `dim Hom_A(M_p, M_q)`: intertwiners `φ A_s^p = A_s^q φ`.
pub fn hom_space_dim(p: &PointData, q: &PointData) -> Result<usize> {
    let map = commutation_map(p, q)?;
    Ok(map.cols() - map.rank())
}

/// `dim Ext¹(M_p, M_q)` over the free algebra: the cokernel of the
/// commutation map.
pub fn ext1_dim_free(p: &PointData, q: &PointData) -> Result<usize> {
    if !p.algebra().is_free() {
        return Err(Error::HasRelations);
    }
    let map = commutation_map(p, q)?;
    Ok(map.rows() - map.rank())
}

/// Default largest truncation degree: `2n + 2`.
pub fn default_max_degree(n: usize) -> usize {
    2 * n + 2
}

/// Tangent report with the default truncation cap.
pub fn tangent_dim(p: &PointData) -> Result<TangentReport> {
    tangent_dim_with(p, default_max_degree(p.n()))
}

pub fn tangent_dim_with(p: &PointData, max_degree: usize) -> Result<TangentReport> {
    p.require_valid()?;
    let n = p.n();
    let based = based_tangent(p)?;
    let hom_mm = hom_space_dim(p, p)?;
    if p.algebra().is_free() {
        let ext1 = ext1_dim_free(p, p)?;
        return Ok(TangentReport {
            based_tangent_dim: based.dimension,
            gl_dim: n * n,
            hom_i_m_dim: Some(n + ext1 - hom_mm),
            hom_mm_dim: hom_mm,
            ext1_mm_dim: Some(ext1),
            status: HomStatus::Exact,
        });
    }
    let form = crate::orbits::canonicalize(p)?;
    let mut previous: Option<usize> = None;
    let mut found = None;
    for d in n..=max_degree {
        let dim = truncated_hom_dim(&form, d)?;
        if previous == Some(dim) {
            found = Some((dim, d));
            break;
        }
        previous = Some(dim);
    }
    let (hom_i_m_dim, status) = match found {
        Some((dim, degree)) => (Some(dim), HomStatus::Truncated { degree }),
        None => (None, HomStatus::Unstable { max_degree }),
    };
    Ok(TangentReport {
        based_tangent_dim: based.dimension,
        gl_dim: n * n,
        hom_i_m_dim,
        hom_mm_dim: hom_mm,
        ext1_mm_dim: None,
        status,
    })
}

/// Dimension of the maps `I → M` determined by values `m_b` on the border
/// generators that vanish on `r·w` for every relation `r` and word `|w| ≤ d`.
///
/// Writing `Ψ(w)` for the value on `w - NF(w)`, `Ψ(ε) = 0` and
/// `Ψ(x_j w') = A_j Ψ(w') + Σ_s NF(w')_s [x_j s ∉ S] m_{x_j s}`, computed
/// at the canonical point where `NF(w') = w'(A)e_1`.
pub fn truncated_hom_dim(form: &crate::orbits::CanonicalForm, d: usize) -> Result<usize> {
    let point = form.canonical_point();
    let (field, n, m) = (point.field(), point.n(), point.m());
    let border: Vec<&Word> = form.border().keys().collect();
    let slot: HashMap<&Word, usize> = border.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let unknowns = border.len() * n;
    let basis = form.basis_words();

    let mut memo: HashMap<Word, (Vector, Matrix)> = HashMap::new();
    memo.insert(Word::empty(), (point.y().to_vec(), Matrix::zeros(field, n, unknowns)));
    let mut rows: Vec<Vector> = Vec::new();
    for r in point.algebra().relations() {
        for w in Word::all_up_to(m, d) {
            let mut acc = Matrix::zeros(field, n, unknowns);
            for (u, c) in r.terms() {
                let psi = psi_of(&u.concat(&w), point, basis, &slot, &mut memo);
                acc = acc.checked_add(&psi.scale(c))?;
            }
            rows.extend(acc.to_rows());
        }
    }
    if rows.is_empty() {
        return Ok(unknowns);
    }
    Ok(unknowns - Matrix::from_rows(field, rows)?.rank())
}

fn psi_of(
    w: &Word,
    point: &PointData,
    basis: &[Word],
    slot: &HashMap<&Word, usize>,
    memo: &mut HashMap<Word, (Vector, Matrix)>,
) -> Matrix {
    if let Some((_, psi)) = memo.get(w) {
        return psi.clone();
    }
    let j = w.first_letter().expect("nonempty word");
    let tail = w.tail().expect("nonempty word");
    psi_of(&tail, point, basis, slot, memo);
    let (nf_tail, psi_tail) = memo[&tail].clone();
    let a = &point.matrices()[j];
    let mut psi = a.matmul(&psi_tail).expect("square");
    for (s, coeff) in basis.iter().zip(&nf_tail) {
        if coeff.is_zero() {
            continue;
        }
        if let Some(&b) = slot.get(&s.prepend(j)) {
            for i in 0..point.n() {
                let col = b * point.n() + i;
                let v = psi.get(i, col) + coeff;
                psi.set(i, col, v);
            }
        }
    }
    let nf = a.mul_vec(&nf_tail).expect("square");
    memo.insert(w.clone(), (nf, psi.clone()));
    psi
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::freealg::AlgebraPresentation;

    fn point(alg: AlgebraPresentation, mats: &[&[&[i64]]], y: &[i64]) -> PointData {
        let f = alg.field();
        PointData::new(
            Arc::new(alg),
            mats.iter().map(|r| Matrix::from_i64(f, r)).collect(),
            y.iter().map(|&v| f.from_i64(v)).collect(),
        )
        .unwrap()
    }

    const Q: ScalarField = ScalarField::Rationals;

    #[test]
    fn free_based_tangent_is_everything() {
        let p = point(AlgebraPresentation::free(2, Q), &[&[&[0, 0], &[1, 0]], &[&[1, 2], &[0, 3]]], &[1, 0]);
        assert_eq!(based_tangent(&p).unwrap().dimension, 10);
        let r = tangent_dim(&p).unwrap();
        assert_eq!(r.hom_i_m_dim, Some(6));
        assert_eq!(r.status, HomStatus::Exact);
    }

    #[test]
    fn plane_at_origin() {
        let p = point(AlgebraPresentation::commutative_plane(Q), &[&[&[0]], &[&[0]]], &[1]);
        assert_eq!(based_tangent(&p).unwrap().dimension, 3);
        let r = tangent_dim(&p).unwrap();
        assert_eq!(r.hom_i_m_dim, Some(2));
        assert!(matches!(r.status, HomStatus::Truncated { .. }));
    }

    #[test]
    fn plane_two_points_split() {
        // distinct eigenvalues: two reduced points of the plane
        let p = point(
            AlgebraPresentation::commutative_plane(Q),
            &[&[&[1, 0], &[0, 2]], &[&[3, 0], &[0, 5]]],
            &[1, 1],
        );
        let r = tangent_dim(&p).unwrap();
        assert_eq!(r.hom_i_m_dim, Some(4));
        assert_eq!(r.based_tangent_dim, 8);
    }

    #[test]
    fn hom_dims() {
        let nil = point(AlgebraPresentation::free(1, Q), &[&[&[0, 1], &[0, 0]]], &[0, 1]);
        assert_eq!(hom_space_dim(&nil, &nil).unwrap(), 2);
        let scalar = point(AlgebraPresentation::free(1, Q), &[&[&[4]]], &[1]);
        assert_eq!(hom_space_dim(&scalar, &scalar).unwrap(), 1);
        assert_eq!(ext1_dim_free(&scalar, &scalar).unwrap(), 1);
        let a = point(AlgebraPresentation::free(1, Q), &[&[&[1, 0], &[0, 2]]], &[1, 1]);
        let b = point(AlgebraPresentation::free(1, Q), &[&[&[3, 0], &[0, 4]]], &[1, 1]);
        assert_eq!(hom_space_dim(&a, &b).unwrap(), 0);
        assert_eq!(ext1_dim_free(&a, &b).unwrap(), 0);
        let two = point(AlgebraPresentation::free(2, Q), &[&[&[1]], &[&[7]]], &[1]);
        assert_eq!(hom_space_dim(&two, &two).unwrap(), 1);
        assert_eq!(ext1_dim_free(&two, &two).unwrap(), 2);
    }

    #[test]
    fn ext_rejects_relations() {
        let p = point(AlgebraPresentation::commutative_plane(Q), &[&[&[0]], &[&[0]]], &[1]);
        assert!(matches!(ext1_dim_free(&p, &p), Err(Error::HasRelations)));
    }

    #[test]
    fn square_zero_hom_example() {
        // I = (x²), canonical point: x·e1 = e2, x·e2 = 0
        let p = point(AlgebraPresentation::free(1, Q), &[&[&[0, 0], &[1, 0]]], &[1, 0]);
        let t = TangentVector {
            matrices: vec![Matrix::from_i64(Q, &[&[0, 0], &[0, 1]])],
            y: vec![Q.zero(), Q.zero()],
        };
        let phi = tangent_vector_to_hom(&p, &t).unwrap();
        let x2 = Word::from_letters(vec![0, 0]);
        assert_eq!(phi[&x2], vec![Q.zero(), Q.one()]);
        let zero = tangent_vector_to_hom(&p, &TangentVector::zero(Q, 1, 2)).unwrap();
        assert!(zero.values().flatten().all(|c| c.is_zero()));
    }

    #[test]
    fn gl_directions_map_to_zero() {
        let p = point(AlgebraPresentation::free(2, Q), &[&[&[0, 1], &[1, 1]], &[&[2, 0], &[1, 3]]], &[1, 2]);
        for idx in 0..4 {
            let mut xi = Matrix::zeros(Q, 2, 2);
            xi.set(idx / 2, idx % 2, Q.from_i64(idx as i64 + 1));
            let t = gl_direction(&p, &xi).unwrap();
            let phi = tangent_vector_to_hom(&p, &t).unwrap();
            assert!(phi.values().flatten().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn off_tangent_vector_is_rejected() {
        let p = point(
            AlgebraPresentation::commutative_plane(Q),
            &[&[&[1, 0], &[0, 2]], &[&[3, 0], &[0, 5]]],
            &[1, 1],
        );
        let t = TangentVector {
            matrices: vec![Matrix::from_i64(Q, &[&[0, 1], &[0, 0]]), Matrix::zeros(Q, 2, 2)],
            y: vec![Q.zero(), Q.zero()],
        };
        assert!(matches!(tangent_vector_to_hom(&p, &t), Err(Error::RelationFailure(_))));
    }

    #[test]
    fn low_cap_is_unstable() {
        let p = point(AlgebraPresentation::commutative_plane(Q), &[&[&[0]], &[&[0]]], &[1]);
        let r = tangent_dim_with(&p, 1).unwrap();
        assert_eq!(r.status, HomStatus::Unstable { max_degree: 1 });
        assert_eq!(r.hom_i_m_dim, None);
    }
}
