//! Substituting matrices for generators.
//!
//! The word `x_{i_1} x_{i_2} ... x_{i_k}` evaluates to the product
//! `A_{i_1} A_{i_2} ... A_{i_k}`; acting on a vector, the rightmost letter
//! is applied first.

use super::poly::NCPoly;
use super::word::Word;
use crate::error::{Error, Result};
use crate::linear::{check_field, FieldValue, Matrix, ScalarField, Vector};

/// Checks that `mats` is a nonempty tuple of equal-size square matrices
/// over one field, returning that field and the size.
pub(crate) fn check_tuple(mats: &[Matrix]) -> Result<(ScalarField, usize)> {
    let first = mats
        .first()
        .ok_or_else(|| Error::Shape("empty matrix tuple".into()))?;
    let (field, n) = (first.field(), first.rows());
    for (s, a) in mats.iter().enumerate() {
        if a.field() != field {
            return Err(Error::FieldMismatch {
                left: field,
                right: a.field(),
            });
        }
        if a.rows() != n || a.cols() != n {
            return Err(Error::Shape(format!(
                "matrix {} is {}x{}, expected {n}x{n}",
                s + 1,
                a.rows(),
                a.cols()
            )));
        }
    }
    Ok((field, n))
}

fn check_letters(w: &Word, m: usize) -> Result<()> {
    match w.max_letter() {
        Some(l) if l >= m => Err(Error::Arity {
            expected: m,
            found: l + 1,
        }),
        _ => Ok(()),
    }
}

fn word_product(w: &Word, mats: &[Matrix], field: ScalarField, n: usize) -> Matrix {
    let mut acc = Matrix::identity(field, n);
    for &l in w.letters() {
        acc = &acc * &mats[l];
    }
    acc
}

/// `f(A_1, ..., A_m)`.
pub fn evaluate(f: &NCPoly, mats: &[Matrix]) -> Result<Matrix> {
    let (field, n) = check_tuple(mats)?;
    if f.field() != field {
        return Err(Error::FieldMismatch {
            left: f.field(),
            right: field,
        });
    }
    let mut out = Matrix::zeros(field, n, n);
    for (w, c) in f.terms() {
        check_letters(w, mats.len())?;
        out = &out + &word_product(w, mats, field, n).scale(c);
    }
    Ok(out)
}

/// `w(A) y`, folding letters from the right: one matrix-vector product per letter.
pub fn apply_word_to_vector(w: &Word, mats: &[Matrix], y: &[FieldValue]) -> Result<Vector> {
    let (field, n) = check_tuple(mats)?;
    check_letters(w, mats.len())?;
    if y.len() != n {
        return Err(Error::Shape(format!("vector has length {}, expected {n}", y.len())));
    }
    for v in y {
        check_field(field, v)?;
    }
    let mut v = y.to_vec();
    for &l in w.letters().iter().rev() {
        v = mats[l].mul_vec(&v)?;
    }
    Ok(v)
}

/// `f(A) y`.
pub fn apply_poly_to_vector(f: &NCPoly, mats: &[Matrix], y: &[FieldValue]) -> Result<Vector> {
    let (field, n) = check_tuple(mats)?;
    if f.field() != field {
        return Err(Error::FieldMismatch {
            left: f.field(),
            right: field,
        });
    }
    let mut out = vec![field.zero(); n];
    for (w, c) in f.terms() {
        let v = apply_word_to_vector(w, mats, y)?;
        for (o, x) in out.iter_mut().zip(&v) {
            *o = &*o + &(c * x);
        }
    }
    Ok(out)
}

/// Directional derivative of a word evaluation:
/// `D(w)(A)[A'] = Σ_j A_{i_1}···A_{i_{j-1}} · A'_{i_j} · A_{i_{j+1}}···A_{i_k}`.
pub fn differentiate_word(w: &Word, mats: &[Matrix], dir: &[Matrix]) -> Result<Matrix> {
    let (field, n) = check_tuple(mats)?;
    let (dfield, dn) = check_tuple(dir)?;
    if dfield != field {
        return Err(Error::FieldMismatch {
            left: field,
            right: dfield,
        });
    }
    if dn != n || dir.len() != mats.len() {
        return Err(Error::Shape(format!(
            "direction is {} matrices of size {dn}, point is {} of size {n}",
            dir.len(),
            mats.len()
        )));
    }
    check_letters(w, mats.len())?;
    let letters = w.letters();
    let k = letters.len();
    // suffix[j] = A_{i_j} ... A_{i_k} (0-based, suffix[k] = I)
    let mut suffix = vec![Matrix::identity(field, n); k + 1];
    for j in (0..k).rev() {
        suffix[j] = &mats[letters[j]] * &suffix[j + 1];
    }
    let mut out = Matrix::zeros(field, n, n);
    let mut prefix = Matrix::identity(field, n);
    for j in 0..k {
        let term = &(&prefix * &dir[letters[j]]) * &suffix[j + 1];
        out = &out + &term;
        prefix = &prefix * &mats[letters[j]];
    }
    Ok(out)
}

/// Linear extension of [`differentiate_word`] to polynomials.
pub fn differentiate(f: &NCPoly, mats: &[Matrix], dir: &[Matrix]) -> Result<Matrix> {
    let (field, n) = check_tuple(mats)?;
    let mut out = Matrix::zeros(field, n, n);
    for (w, c) in f.terms() {
        out = &out + &differentiate_word(w, mats, dir)?.scale(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: ScalarField = ScalarField::Rationals;

    fn nil() -> Matrix {
        Matrix::from_i64(Q, &[&[0, 1], &[0, 0]])
    }

    fn vec_i(v: &[i64]) -> Vector {
        v.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn evaluate_examples() {
        let a = vec![nil()];
        assert!(evaluate(&NCPoly::monomial(Q, Word::empty()), &a).unwrap().is_identity());
        assert_eq!(evaluate(&NCPoly::monomial(Q, Word::letter(0)), &a).unwrap(), nil());

        let pair = vec![nil(), Matrix::from_i64(Q, &[&[0, 0], &[1, 0]])];
        let comm = NCPoly::from_i64(Q, &[(1, &[0, 1]), (-1, &[1, 0])]);
        assert_eq!(
            evaluate(&comm, &pair).unwrap(),
            Matrix::from_i64(Q, &[&[1, 0], &[0, -1]])
        );
    }

    #[test]
    fn evaluate_rejects_arity_and_field() {
        let x2 = NCPoly::monomial(Q, Word::letter(1));
        assert!(matches!(evaluate(&x2, &[nil()]), Err(Error::Arity { .. })));
        let f2 = NCPoly::monomial(ScalarField::Prime(2), Word::empty());
        assert!(matches!(evaluate(&f2, &[nil()]), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn apply_word_examples() {
        let a = vec![nil()];
        let y = vec_i(&[0, 1]);
        assert_eq!(apply_word_to_vector(&Word::empty(), &a, &y).unwrap(), y);
        assert_eq!(apply_word_to_vector(&Word::letter(0), &a, &y).unwrap(), vec_i(&[1, 0]));
        assert_eq!(
            apply_word_to_vector(&Word::from_letters(vec![0, 0]), &a, &y).unwrap(),
            vec_i(&[0, 0])
        );
        assert!(apply_word_to_vector(&Word::empty(), &a, &vec_i(&[1])).is_err());
    }

    #[test]
    fn differentiate_examples() {
        let a = vec![nil()];
        let id = vec![Matrix::identity(Q, 2)];
        assert!(differentiate_word(&Word::empty(), &a, &id).unwrap().is_zero());
        assert_eq!(differentiate_word(&Word::letter(0), &a, &id).unwrap(), id[0]);
        assert_eq!(
            differentiate_word(&Word::from_letters(vec![0, 0]), &a, &id).unwrap(),
            nil().scale(&Q.from_i64(2))
        );
    }

    fn arb_mat(n: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
            let rows: Vec<&[i64]> = v.chunks(n).collect();
            Matrix::from_i64(Q, &rows)
        })
    }

    fn arb_word(m: usize, max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(0..m, 0..=max).prop_map(Word::from_letters)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn evaluation_is_a_homomorphism(
            a in prop::collection::vec(arb_mat(3), 2),
            u in arb_word(2, 3),
            v in arb_word(2, 3),
        ) {
            let uv = evaluate(&NCPoly::monomial(Q, u.concat(&v)), &a).unwrap();
            let eu = evaluate(&NCPoly::monomial(Q, u), &a).unwrap();
            let ev = evaluate(&NCPoly::monomial(Q, v), &a).unwrap();
            prop_assert_eq!(uv, &eu * &ev);
        }

        #[test]
        fn vector_action_matches_matrix(
            a in prop::collection::vec(arb_mat(3), 2),
            w in arb_word(2, 4),
            y in prop::collection::vec(-3i64..=3, 3),
        ) {
            let y = vec_i(&y);
            let direct = apply_word_to_vector(&w, &a, &y).unwrap();
            let via = evaluate(&NCPoly::monomial(Q, w), &a).unwrap().mul_vec(&y).unwrap();
            prop_assert_eq!(direct, via);
        }

        // For length <= 2, evaluate(w, A + tA') is a polynomial in t of degree <= 2;
        // three samples pin its coefficients, and the linear one must be D(w)(A)[A'].
        #[test]
        fn derivative_is_first_order_coefficient(
            a in prop::collection::vec(arb_mat(2), 2),
            d in prop::collection::vec(arb_mat(2), 2),
            w in arb_word(2, 2),
        ) {
            let at = |t: i64| -> Matrix {
                let shifted: Vec<Matrix> = a.iter().zip(&d).map(|(x, y)| x + &y.scale(&Q.from_i64(t))).collect();
                evaluate(&NCPoly::monomial(Q, w.clone()), &shifted).unwrap()
            };
            let (f0, f1, f2) = (at(0), at(1), at(2));
            // f(t) = c0 + c1 t + c2 t^2  =>  c1 = (4 f1 - 3 f0 - f2) / 2
            let half = Q.from_i64(1) / Q.from_i64(2);
            let c1 = (&(&f1.scale(&Q.from_i64(4)) - &f0.scale(&Q.from_i64(3))) - &f2).scale(&half);
            prop_assert_eq!(c1, differentiate_word(&w, &a, &d).unwrap());
        }

        // Length <= 4: brute-force sum over positions, each term built as a
        // full product with one factor replaced.
        #[test]
        fn derivative_matches_positional_sum(
            a in prop::collection::vec(arb_mat(2), 2),
            d in prop::collection::vec(arb_mat(2), 2),
            w in arb_word(2, 4),
        ) {
            let mut expected = Matrix::zeros(Q, 2, 2);
            for pos in 0..w.len() {
                let mut prod = Matrix::identity(Q, 2);
                for (i, &l) in w.letters().iter().enumerate() {
                    let f = if i == pos { &d[l] } else { &a[l] };
                    prod = &prod * f;
                }
                expected = &expected + &prod;
            }
            prop_assert_eq!(expected, differentiate_word(&w, &a, &d).unwrap());
        }
    }
}
