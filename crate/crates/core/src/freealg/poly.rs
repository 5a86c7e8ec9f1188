use std::collections::BTreeMap;
use std::fmt;

use super::word::Word;
use crate::error::{Error, Result};
use crate::linear::{check_field, FieldValue, ScalarField};

/// A noncommutative polynomial: a finite linear combination of words with
/// no zero coefficients. Terms iterate in length-lex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NCPoly {
    field: ScalarField,
    terms: BTreeMap<Word, FieldValue>,
}

impl NCPoly {
    pub fn zero(field: ScalarField) -> Self {
        NCPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: ScalarField, word: Word) -> Self {
        Self::term(word, field.one())
    }

    pub fn term(word: Word, coeff: FieldValue) -> Self {
        let mut p = NCPoly::zero(coeff.field());
        p.add_term(word, coeff);
        p
    }

    /// Sums the given terms; repeated words are combined.
    pub fn from_terms(
        field: ScalarField,
        terms: impl IntoIterator<Item = (Word, FieldValue)>,
    ) -> Result<Self> {
        let mut p = NCPoly::zero(field);
        for (w, c) in terms {
            check_field(field, &c)?;
            p.add_term(w, c);
        }
        Ok(p)
    }

    /// Integer-coefficient convenience constructor; words are 0-based.
    pub fn from_i64(field: ScalarField, terms: &[(i64, &[usize])]) -> Self {
        let mut p = NCPoly::zero(field);
        for (c, letters) in terms {
            p.add_term(Word::from_letters(letters.to_vec()), field.from_i64(*c));
        }
        p
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &FieldValue)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> FieldValue {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Length-lex largest word with nonzero coefficient.
    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Largest generator index occurring (0-based).
    pub fn max_letter(&self) -> Option<usize> {
        self.terms.keys().filter_map(Word::max_letter).max()
    }

    pub fn add_term(&mut self, w: Word, c: FieldValue) {
        assert_eq!(c.field(), self.field, "field mismatch in NCPoly::add_term");
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            None => {
                self.terms.insert(w, c);
            }
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(w, s);
                }
            }
        }
    }

    pub(crate) fn remove_term(&mut self, w: &Word) -> Option<FieldValue> {
        self.terms.remove(w)
    }

    pub fn add(&self, other: &NCPoly) -> Result<NCPoly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NCPoly) -> Result<NCPoly> {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, c: &FieldValue) -> NCPoly {
        let mut out = NCPoly::zero(self.field);
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    /// `u · self`.
    pub fn left_mul_word(&self, u: &Word) -> NCPoly {
        NCPoly {
            field: self.field,
            terms: self.terms.iter().map(|(w, c)| (u.concat(w), c.clone())).collect(),
        }
    }

    /// `self · u`.
    pub fn right_mul_word(&self, u: &Word) -> NCPoly {
        NCPoly {
            field: self.field,
            terms: self.terms.iter().map(|(w, c)| (w.concat(u), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &NCPoly) -> Result<NCPoly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        let mut out = NCPoly::zero(self.field);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        Ok(out)
    }

    /// Coefficients brought into `field`; rationals are reduced mod p,
    /// failing when a denominator vanishes.
    pub fn coerce(&self, field: ScalarField) -> Result<NCPoly> {
        if field == self.field {
            return Ok(self.clone());
        }
        let ScalarField::Prime(p) = field else {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: field,
            });
        };
        let mut out = NCPoly::zero(field);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.reduce_mod(p)?);
        }
        Ok(out)
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{w}")?;
            } else if w.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c}){w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
