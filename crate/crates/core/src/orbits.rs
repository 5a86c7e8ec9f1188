//! Canonical orbit representatives, the left ideal they determine, and
//! normal forms modulo that ideal.
//!
//! A valid point is moved by `g = K^{-1}`, where `K` has the greedy Krylov
//! vectors as columns, so that `s(A)y = e_s` for every basis word `s`. The
//! remaining data are the border coefficients `c_b` with
//! `b(A)y = Σ_t c_{b,t} e_t` for one-letter extensions `b = x_j·s ∉ S`.
//! The greedy rule forces `c_{b,t} = 0` whenever `t >= b` (support
//! condition), and conversely every support-respecting choice comes from a
//! point whose greedy basis is exactly `S`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::freealg::{AlgebraPresentation, NCPoly, Word};
use crate::linear::{FieldValue, Matrix, Vector};
use crate::points::{GroupElement, PointData};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    algebra: Arc<AlgebraPresentation>,
    n: usize,
    basis_words: Vec<Word>,
    border: BTreeMap<Word, Vector>,
    canonical_point: PointData,
}

/// Border generators `g_b = b - Σ_t c_{b,t} t` of the left ideal
/// `I = ker(A → M, a ↦ a·y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealData {
    algebra: Arc<AlgebraPresentation>,
    n: usize,
    basis_words: Vec<Word>,
    generators: BTreeMap<Word, NCPoly>,
}

/// One-letter extensions `x_j·s` of basis words that leave the set, sorted.
pub fn border_words(basis: &[Word], m: usize) -> Vec<Word> {
    let set: BTreeSet<&Word> = basis.iter().collect();
    let mut out: Vec<Word> = basis
        .iter()
        .flat_map(|s| (0..m).map(move |j| s.prepend(j)))
        .filter(|b| !set.contains(b))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Whether `words` is a sorted, duplicate-free set containing the empty
/// word and closed under deleting the leftmost letter.
pub fn is_prefix_closed(words: &[Word]) -> bool {
    let set: BTreeSet<&Word> = words.iter().collect();
    set.len() == words.len()
        && words.windows(2).all(|p| p[0] < p[1])
        && set.contains(&Word::empty())
        && words.iter().all(|w| w.tail().is_none_or(|t| set.contains(&t)))
}

/// The canonical representative of the `GL_n`-orbit of a valid point.
pub fn canonicalize(p: &PointData) -> Result<CanonicalForm> {
    p.require_valid()?;
    let kb = p.krylov_basis();
    let k = Matrix::from_columns(p.field(), p.n(), &kb.vectors)?;
    let g = GroupElement::new(k.inverse()?.expect("Krylov vectors form a basis"))?;
    let q = p.gl_act(&g)?;
    let index: BTreeMap<&Word, usize> = kb.words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut border = BTreeMap::new();
    for (si, s) in kb.words.iter().enumerate() {
        for j in 0..p.m() {
            let b = s.prepend(j);
            if !index.contains_key(&b) {
                border.insert(b, q.matrices()[j].column(si));
            }
        }
    }
    Ok(CanonicalForm {
        algebra: p.algebra().clone(),
        n: p.n(),
        basis_words: kb.words,
        border,
        canonical_point: q,
    })
}

/// Whether two valid points lie in the same `GL_n`-orbit.
pub fn orbit_equal(p: &PointData, q: &PointData) -> Result<bool> {
    if p.algebra() != q.algebra() || p.n() != q.n() {
        return Err(Error::InvalidArgument(
            "orbit comparison needs points of the same algebra and size".into(),
        ));
    }
    Ok(canonicalize(p)? == canonicalize(q)?)
}

impl CanonicalForm {
    pub fn algebra(&self) -> &Arc<AlgebraPresentation> {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis_words(&self) -> &[Word] {
        &self.basis_words
    }

    pub fn border(&self) -> &BTreeMap<Word, Vector> {
        &self.border
    }

    pub fn canonical_point(&self) -> &PointData {
        &self.canonical_point
    }

    /// The left ideal this orbit determines.
    pub fn extract_ideal(&self) -> IdealData {
        let field = self.algebra.field();
        let generators = self
            .border
            .iter()
            .map(|(b, c)| {
                let mut g = NCPoly::monomial(field, b.clone());
                for (t, ct) in self.basis_words.iter().zip(c) {
                    g.add_term(t.clone(), -ct);
                }
                (b.clone(), g)
            })
            .collect();
        IdealData {
            algebra: self.algebra.clone(),
            n: self.n,
            basis_words: self.basis_words.clone(),
            generators,
        }
    }

    /// Reconstructs the canonical form from its ideal.
    pub fn from_ideal(ideal: &IdealData) -> Result<CanonicalForm> {
        canonicalize(&point_from_ideal(ideal)?)
    }
}

/// Free-function form of [`CanonicalForm::extract_ideal`].
pub fn extract_ideal(c: &CanonicalForm) -> IdealData {
    c.extract_ideal()
}

impl IdealData {
    /// Validates shape and the support condition: `S` is prefix-closed of
    /// size `n`, the generators are indexed by exactly the border words,
    /// and each `g_b` is `b` minus a combination of basis words below `b`.
    pub fn new(
        algebra: Arc<AlgebraPresentation>,
        n: usize,
        basis_words: Vec<Word>,
        generators: BTreeMap<Word, NCPoly>,
    ) -> Result<Self> {
        if basis_words.len() != n {
            return Err(Error::SupportViolation(format!(
                "{} basis words for n = {n}",
                basis_words.len()
            )));
        }
        if !is_prefix_closed(&basis_words) {
            return Err(Error::SupportViolation(
                "basis words must be sorted, contain 1 and be closed under deleting the leftmost letter".into(),
            ));
        }
        if let Some(l) = basis_words.iter().filter_map(Word::max_letter).max() {
            if l >= algebra.m() {
                return Err(Error::Arity {
                    expected: algebra.m(),
                    found: l + 1,
                });
            }
        }
        let border = border_words(&basis_words, algebra.m());
        let keys: Vec<&Word> = generators.keys().collect();
        if keys != border.iter().collect::<Vec<_>>() {
            return Err(Error::SupportViolation(format!(
                "generators must be indexed by the border words {border:?}"
            )));
        }
        let basis: BTreeSet<&Word> = basis_words.iter().collect();
        for (b, g) in &generators {
            if g.field() != algebra.field() {
                return Err(Error::FieldMismatch {
                    left: algebra.field(),
                    right: g.field(),
                });
            }
            if !g.coefficient(b).is_one() {
                return Err(Error::SupportViolation(format!("generator for {b} must have leading coefficient 1")));
            }
            for (t, _) in g.terms() {
                if t == b {
                    continue;
                }
                if !basis.contains(t) {
                    return Err(Error::SupportViolation(format!(
                        "generator for {b} has a term {t} outside the basis"
                    )));
                }
                if t >= b {
                    return Err(Error::SupportViolation(format!(
                        "generator for {b} has a term {t} not below {b}"
                    )));
                }
            }
        }
        Ok(IdealData {
            algebra,
            n,
            basis_words,
            generators,
        })
    }

    /// Builds ideal data from border coefficient columns `c_b`.
    pub fn from_border(
        algebra: Arc<AlgebraPresentation>,
        basis_words: Vec<Word>,
        border: &BTreeMap<Word, Vector>,
    ) -> Result<Self> {
        let field = algebra.field();
        let n = basis_words.len();
        let mut generators = BTreeMap::new();
        for (b, c) in border {
            if c.len() != n {
                return Err(Error::Shape(format!("border column for {b} has length {}", c.len())));
            }
            let mut g = NCPoly::monomial(field, b.clone());
            for (t, ct) in basis_words.iter().zip(c) {
                if ct.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field,
                        right: ct.field(),
                    });
                }
                g.add_term(t.clone(), -ct);
            }
            generators.insert(b.clone(), g);
        }
        IdealData::new(algebra, n, basis_words, generators)
    }

    pub fn algebra(&self) -> &Arc<AlgebraPresentation> {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis_words(&self) -> &[Word] {
        &self.basis_words
    }

    pub fn generators(&self) -> &BTreeMap<Word, NCPoly> {
        &self.generators
    }

    pub fn basis_index(&self, w: &Word) -> Option<usize> {
        self.basis_words.binary_search(w).ok()
    }

    /// `c_{b,t}` for all `t ∈ S`, in basis order.
    pub fn border_coefficients(&self, b: &Word) -> Option<Vector> {
        let g = self.generators.get(b)?;
        Some(self.basis_words.iter().map(|t| -&g.coefficient(t)).collect())
    }
}

/// Reduces `f` modulo the ideal to a combination of basis words. The
/// length-lex largest reducible term is rewritten first: a word `w ∉ S`
/// factors as `u·b` with `b` its shortest right factor outside `S` (a
/// border word), and `u·b` is replaced by `Σ_t c_{b,t} u·t`. Every step
/// strictly lowers the largest reducible term, so this terminates.
pub fn normal_form(f: &NCPoly, ideal: &IdealData) -> Result<NCPoly> {
    let field = ideal.algebra.field();
    if f.field() != field {
        return Err(Error::FieldMismatch {
            left: field,
            right: f.field(),
        });
    }
    if let Some(l) = f.max_letter() {
        if l >= ideal.algebra.m() {
            return Err(Error::Arity {
                expected: ideal.algebra.m(),
                found: l + 1,
            });
        }
    }
    let basis: BTreeSet<&Word> = ideal.basis_words.iter().collect();
    let mut work = f.clone();
    let mut out = NCPoly::zero(field);
    while let Some(w) = work.leading_word().cloned() {
        let c = work.remove_term(&w).expect("leading term present");
        if basis.contains(&w) {
            out.add_term(w, c);
            continue;
        }
        let k = (1..=w.len())
            .find(|&k| !basis.contains(&w.suffix(k)))
            .expect("word outside S has a right factor outside S");
        let b = w.suffix(k);
        let u = w.prefix(w.len() - k);
        let g = &ideal.generators[&b];
        for (t, ct) in g.terms() {
            if t != &b {
                work.add_term(u.concat(t), -&(&c * ct));
            }
        }
    }
    Ok(out)
}

/// The canonical point of the module `A/I`: `y = e_1` and
/// `A_j e_s = e_{x_j s}` inside the basis, `c_b` on the border.
pub fn point_from_ideal(ideal: &IdealData) -> Result<PointData> {
    let field = ideal.algebra.field();
    let n = ideal.n;
    let m = ideal.algebra.m();
    let mut mats = vec![Matrix::zeros(field, n, n); m];
    for (si, s) in ideal.basis_words.iter().enumerate() {
        for (j, a) in mats.iter_mut().enumerate() {
            let b = s.prepend(j);
            let col: Vector = match ideal.basis_index(&b) {
                Some(ti) => (0..n).map(|i| if i == ti { field.one() } else { field.zero() }).collect(),
                None => ideal.border_coefficients(&b).expect("border generator present"),
            };
            for (i, v) in col.into_iter().enumerate() {
                a.set(i, si, v);
            }
        }
    }
    let mut y = vec![field.zero(); n];
    y[0] = field.one();
    let point = PointData::new(ideal.algebra.clone(), mats, y)?;
    for r in ideal.algebra.relations() {
        if !crate::freealg::evaluate(r, point.matrices())?.is_zero() {
            return Err(Error::RelationFailure(r.to_string()));
        }
    }
    Ok(point)
}

/// Coordinates of `f(A)y` in the canonical basis equal the coefficients of
/// `normal_form(f)`; this evaluates the former.
pub fn coordinates_in_basis(c: &CanonicalForm, f: &NCPoly) -> Result<Vec<FieldValue>> {
    let p = c.canonical_point();
    crate::freealg::apply_poly_to_vector(f, p.matrices(), p.y())
}
