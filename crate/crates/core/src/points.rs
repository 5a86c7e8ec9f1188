//! Points of the based Hilbert scheme: tuples `(A_1, ..., A_m, y)` of
//! `n x n` matrices satisfying the relations, with `y` a cyclic vector.
//!
//! Also covers the chart determinants `D_f = det(y, f_1(A)y, ...,
//! f_{n-1}(A)y)`, the `GL_n` action `g·(A, y) = (gAg^{-1}, gy)`, the
//! slice `chart_matrix = I` inside each chart, transition cocycles and
//! the projective coordinates given by determinant sections.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::freealg::{apply_poly_to_vector, check_tuple, evaluate, AlgebraPresentation, NCPoly, Word};
use crate::linear::{check_field, FieldValue, Matrix, ScalarField, Vector};

/// A matrix tuple with a distinguished vector. Validity (relations and
/// cyclicity) is checked by operations, not by the constructor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointData {
    algebra: Arc<AlgebraPresentation>,
    n: usize,
    matrices: Vec<Matrix>,
    y: Vector,
}

/// Words accepted by the greedy Krylov search and their vectors `w(A)y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KrylovBasis {
    pub words: Vec<Word>,
    pub vectors: Vec<Vector>,
}

/// An `(n-1)`-tuple of polynomials `(f_1, ..., f_{n-1})` naming the chart
/// `U_f = {D_f != 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChartIndex(Vec<NCPoly>);

/// An invertible matrix, kept with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    matrix: Matrix,
    inverse: Matrix,
}

/// A point of projective space, scaled so its first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint(Vec<FieldValue>);

/// Output of [`PointData::reduce_mod_p`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedPoint {
    pub point: PointData,
    pub is_cyclic: bool,
}

/// Incremental row echelon basis used for independence tests.
pub(crate) struct Echelon {
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, v: &[FieldValue]) -> Vector {
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            if v[*piv].is_zero() {
                continue;
            }
            let c = v[*piv].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&c * r);
                }
            }
        }
        v
    }

    /// Adds `v` if independent of the rows so far; reports whether it was added.
    pub(crate) fn insert(&mut self, v: &[FieldValue]) -> bool {
        let r = self.reduce(v);
        let Some(piv) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[piv].inv().expect("nonzero pivot");
        let r = r.iter().map(|x| x * &inv).collect();
        self.rows.push((piv, r));
        true
    }
}

impl PointData {
    pub fn new(algebra: Arc<AlgebraPresentation>, matrices: Vec<Matrix>, y: Vector) -> Result<Self> {
        if matrices.len() != algebra.m() {
            return Err(Error::Arity {
                expected: algebra.m(),
                found: matrices.len(),
            });
        }
        let (field, n) = check_tuple(&matrices)?;
        if field != algebra.field() {
            return Err(Error::FieldMismatch {
                left: algebra.field(),
                right: field,
            });
        }
        if n == 0 {
            return Err(Error::Shape("points need n >= 1".into()));
        }
        if y.len() != n {
            return Err(Error::Shape(format!("y has length {}, expected {n}", y.len())));
        }
        for v in &y {
            check_field(field, v)?;
        }
        Ok(PointData {
            algebra,
            n,
            matrices,
            y,
        })
    }

    pub fn algebra(&self) -> &Arc<AlgebraPresentation> {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    pub fn field(&self) -> ScalarField {
        self.algebra.field()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn y(&self) -> &[FieldValue] {
        &self.y
    }

    /// Whether every relation evaluates to the zero matrix.
    pub fn check_relations(&self) -> bool {
        self.algebra
            .relations()
            .iter()
            .all(|r| evaluate(r, &self.matrices).map(|m| m.is_zero()).unwrap_or(false))
    }

    /// Greedy breadth-first Krylov search in length-lex order. A word is
    /// accepted when its vector is independent of the vectors of the words
    /// accepted before it; children of `w` are `x_j·w`. The accepted set is
    /// closed under deleting the leftmost letter.
    pub fn krylov_basis(&self) -> KrylovBasis {
        let mut echelon = Echelon::new();
        let mut words = Vec::new();
        let mut vectors = Vec::new();
        if !echelon.insert(&self.y) {
            return KrylovBasis { words, vectors };
        }
        words.push(Word::empty());
        vectors.push(self.y.clone());
        let mut level = 0..1;
        while words.len() < self.n && !level.is_empty() {
            let start = words.len();
            // x_j·w over j, then over w of the previous level: length-lex order.
            'outer: for j in 0..self.m() {
                for idx in level.clone() {
                    let v = self.matrices[j].mul_vec(&vectors[idx]).expect("square tuple");
                    if echelon.insert(&v) {
                        words.push(words[idx].prepend(j));
                        vectors.push(v);
                        if words.len() == self.n {
                            break 'outer;
                        }
                    }
                }
            }
            level = start..words.len();
        }
        KrylovBasis { words, vectors }
    }

    /// Whether `y` generates `k^n` under the algebra action.
    pub fn is_cyclic(&self) -> bool {
        self.krylov_basis().words.len() == self.n
    }

    /// Relations hold and `y` is cyclic.
    pub fn is_valid(&self) -> bool {
        self.check_relations() && self.is_cyclic()
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        if !self.check_relations() {
            return Err(Error::InvalidPoint("relations do not hold".into()));
        }
        if !self.is_cyclic() {
            return Err(Error::InvalidPoint("y is not a cyclic vector".into()));
        }
        Ok(())
    }

    /// The matrix with columns `y, f_1(A)y, ..., f_{n-1}(A)y`.
    pub fn chart_matrix(&self, f: &ChartIndex) -> Result<Matrix> {
        if f.len() + 1 != self.n {
            return Err(Error::Arity {
                expected: self.n - 1,
                found: f.len(),
            });
        }
        let mut cols = Vec::with_capacity(self.n);
        cols.push(self.y.clone());
        for fi in &f.0 {
            if fi.field() != self.field() {
                return Err(Error::FieldMismatch {
                    left: self.field(),
                    right: fi.field(),
                });
            }
            cols.push(apply_poly_to_vector(fi, &self.matrices, &self.y)?);
        }
        Matrix::from_columns(self.field(), self.n, &cols)
    }

    /// The determinant section `D_f`.
    pub fn chart_det(&self, f: &ChartIndex) -> Result<FieldValue> {
        self.chart_matrix(f)?.det()
    }

    pub fn in_chart(&self, f: &ChartIndex) -> Result<bool> {
        Ok(!self.chart_det(f)?.is_zero())
    }

    /// `g·(A_1, ..., A_m, y) = (gA_1g^{-1}, ..., gA_mg^{-1}, gy)`.
    pub fn gl_act(&self, g: &GroupElement) -> Result<PointData> {
        if g.field() != self.field() {
            return Err(Error::FieldMismatch {
                left: self.field(),
                right: g.field(),
            });
        }
        if g.n() != self.n {
            return Err(Error::Shape(format!(
                "group element of size {} acting on n = {}",
                g.n(),
                self.n
            )));
        }
        let matrices = self
            .matrices
            .iter()
            .map(|a| &(&g.matrix * a) * &g.inverse)
            .collect();
        let y = g.matrix.mul_vec(&self.y)?;
        Ok(PointData {
            algebra: self.algebra.clone(),
            n: self.n,
            matrices,
            y,
        })
    }

    /// Moves the point onto the slice `chart_matrix(·, f) = I` of its chart,
    /// returning the slice point and the group element `g = M_f^{-1}` used.
    pub fn normalize_in_chart(&self, f: &ChartIndex) -> Result<(PointData, GroupElement)> {
        let mf = self.chart_matrix(f)?;
        let inv = mf.inverse()?.ok_or(Error::NotInChart)?;
        let g = GroupElement {
            matrix: inv,
            inverse: mf,
        };
        Ok((self.gl_act(&g)?, g))
    }

    /// `M_{f'}^{-1} M_f` at this point.
    pub fn transition_cocycle(&self, f: &ChartIndex, fprime: &ChartIndex) -> Result<GroupElement> {
        let mf = self.chart_matrix(f)?;
        let mfp = self.chart_matrix(fprime)?;
        let mfp_inv = mfp.inverse()?.ok_or(Error::NotInChart)?;
        let mf_inv = mf.inverse()?.ok_or(Error::NotInChart)?;
        Ok(GroupElement {
            matrix: &mfp_inv * &mf,
            inverse: &mf_inv * &mfp,
        })
    }

    /// Projective point `(D_{f_0}(p)^power : ... : D_{f_N}(p)^power)`.
    pub fn embedding_coordinates(&self, family: &[ChartIndex], power: u32) -> Result<ProjectivePoint> {
        if power == 0 {
            return Err(Error::InvalidArgument("embedding power must be positive".into()));
        }
        let coords = family
            .iter()
            .map(|f| Ok(self.chart_det(f)?.pow(power as u64)))
            .collect::<Result<Vec<_>>>()?;
        ProjectivePoint::new(coords).ok_or(Error::NotCovered)
    }

    /// Entrywise reduction of a point over Q to F_p, with cyclicity
    /// recomputed (it can be lost: `D_f` may vanish mod p).
    pub fn reduce_mod_p(&self, prime: u32) -> Result<ReducedPoint> {
        if self.field() != ScalarField::Rationals {
            return Err(Error::InvalidArgument(format!(
                "reduction mod p needs a point over Q, got {}",
                self.field()
            )));
        }
        let field = ScalarField::prime(prime as u64)?;
        let algebra = Arc::new(self.algebra.with_field(field)?);
        let reduce_all = |vs: &[FieldValue]| -> Result<Vector> { vs.iter().map(|v| v.reduce_mod(prime)).collect() };
        let matrices = self
            .matrices
            .iter()
            .map(|a| Matrix::from_rows(field, a.to_rows().iter().map(|r| reduce_all(r)).collect::<Result<_>>()?))
            .collect::<Result<Vec<_>>>()?;
        let y = reduce_all(&self.y)?;
        let point = PointData::new(algebra, matrices, y)?;
        let is_cyclic = point.is_cyclic();
        Ok(ReducedPoint { point, is_cyclic })
    }
}

impl ChartIndex {
    pub fn new(entries: Vec<NCPoly>) -> Self {
        ChartIndex(entries)
    }

    /// The chart indexed by words.
    pub fn from_words(field: ScalarField, words: &[Word]) -> Self {
        ChartIndex(words.iter().map(|w| NCPoly::monomial(field, w.clone())).collect())
    }

    /// The chart `(x, x^2, ..., x^{n-1})` for a single generator.
    pub fn powers_of_first_generator(field: ScalarField, n: usize) -> Self {
        let words: Vec<Word> = (1..n).map(|k| Word::from_letters(vec![0; k])).collect();
        ChartIndex::from_words(field, &words)
    }

    pub fn entries(&self) -> &[NCPoly] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `(n-1)`-tuples of words of length at most `max_len`, in
    /// lexicographic order of the tuples.
    pub fn word_family(field: ScalarField, m: usize, n: usize, max_len: usize) -> Vec<ChartIndex> {
        let words = Word::all_up_to(m, max_len);
        let mut tuples: Vec<Vec<Word>> = vec![Vec::new()];
        for _ in 1..n {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    words.iter().map(move |w| {
                        let mut t = t.clone();
                        t.push(w.clone());
                        t
                    })
                })
                .collect();
        }
        tuples.iter().map(|t| ChartIndex::from_words(field, t)).collect()
    }
}

impl GroupElement {
    /// Rejects non-square and singular matrices.
    pub fn new(matrix: Matrix) -> Result<Self> {
        let inverse = matrix.inverse()?.ok_or(Error::SingularGroupElement)?;
        Ok(GroupElement { matrix, inverse })
    }

    pub fn identity(field: ScalarField, n: usize) -> Self {
        GroupElement {
            matrix: Matrix::identity(field, n),
            inverse: Matrix::identity(field, n),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> ScalarField {
        self.matrix.field()
    }

    pub fn det(&self) -> FieldValue {
        self.matrix.det().expect("square")
    }

    /// The product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        Ok(GroupElement {
            matrix: self.matrix.matmul(&other.matrix)?,
            inverse: other.inverse.matmul(&self.inverse)?,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }
}

impl ProjectivePoint {
    /// Normalizes so the first nonzero coordinate is 1; `None` if all vanish.
    pub fn new(coords: Vec<FieldValue>) -> Option<Self> {
        let lead = coords.iter().find(|c| !c.is_zero())?.inv()?;
        Some(ProjectivePoint(coords.iter().map(|c| c * &lead).collect()))
    }

    pub fn coordinates(&self) -> &[FieldValue] {
        &self.0
    }
}

/// Checks `Π D_{f_i}(g·p) = det(g)^k Π D_{f_i}(p)` with `k` the number of
/// factors: a product of `k` determinant sections is a semi-invariant of
/// weight `k`.
pub fn semi_invariant_weight_check(product: &[ChartIndex], p: &PointData, g: &GroupElement) -> Result<bool> {
    let moved = p.gl_act(g)?;
    let field = p.field();
    let mut lhs = field.one();
    let mut rhs = field.one();
    for f in product {
        lhs = &lhs * &moved.chart_det(f)?;
        rhs = &rhs * &p.chart_det(f)?;
    }
    rhs = &rhs * &g.det().pow(product.len() as u64);
    Ok(lhs == rhs)
}

/// The sufficient Veronese degree `2 · k · (d_1 ⋯ d_k)` for a graded
/// algebra with `k` generators of degrees `d_i`.
pub fn veronese_bound(degrees: &[u64]) -> Result<u64> {
    if degrees.is_empty() {
        return Err(Error::InvalidArgument("veronese_bound needs at least one degree".into()));
    }
    if degrees.contains(&0) {
        return Err(Error::InvalidArgument("generator degrees must be positive".into()));
    }
    let overflow = || Error::InvalidArgument("veronese bound overflows u64".into());
    let product = degrees
        .iter()
        .try_fold(1u64, |acc, &d| acc.checked_mul(d))
        .ok_or_else(overflow)?;
    2u64.checked_mul(degrees.len() as u64)
        .and_then(|v| v.checked_mul(product))
        .ok_or_else(overflow)
}
