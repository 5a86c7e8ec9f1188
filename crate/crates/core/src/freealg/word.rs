use std::cmp::Ordering;
use std::fmt;

/// A monomial of the free algebra: generator indices (0-based) written
/// left to right. The empty word is the unit.
///
/// Words are ordered length-lexicographically: shorter first, then
/// letter by letter with `x_1 < x_2 < ...`. The order is total,
/// well-founded and compatible with left multiplication.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// The single generator `x_{j+1}` (0-based index `j`).
    pub fn letter(j: usize) -> Self {
        Word(vec![j])
    }

    pub fn from_letters(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    /// Builds a word from 1-based generator indices, the external form.
    pub fn from_one_based(letters: &[usize]) -> Option<Self> {
        letters
            .iter()
            .map(|&l| l.checked_sub(1))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|l| l + 1).collect()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x_j · self`.
    pub fn prepend(&self, j: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(j);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Deletes the leftmost letter: `x_j · w ↦ w`.
    pub fn tail(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[1..].to_vec()))
        }
    }

    pub fn first_letter(&self) -> Option<usize> {
        self.0.first().copied()
    }

    /// The rightmost `k` letters.
    pub fn suffix(&self, k: usize) -> Word {
        Word(self.0[self.0.len() - k..].to_vec())
    }

    /// The leftmost `k` letters.
    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.0.iter().copied().max()
    }

    /// All words over `m` letters of length exactly `len`, length-lex sorted.
    pub fn all_of_length(m: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * m);
            for j in 0..m {
                for w in &out {
                    next.push(w.prepend(j));
                }
            }
            out = next;
        }
        out
    }

    /// All words over `m` letters of length at most `max_len`, length-lex sorted.
    pub fn all_up_to(m: usize, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|l| Word::all_of_length(m, l)).collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "x{}", l + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(letters: &[usize]) -> Word {
        Word::from_letters(letters.to_vec())
    }

    #[test]
    fn length_lex_examples() {
        assert!(w(&[]) < w(&[0]));
        assert!(w(&[1]) < w(&[0, 0]));
        assert!(w(&[0, 1]) < w(&[1, 0]));
        assert_eq!(w(&[0, 1]).to_string(), "x1x2");
        assert_eq!(Word::empty().to_string(), "1");
    }

    #[test]
    fn enumeration_is_sorted() {
        let words = Word::all_up_to(2, 3);
        assert_eq!(words.len(), 1 + 2 + 4 + 8);
        assert!(words.windows(2).all(|p| p[0] < p[1]));
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec(0usize..3, 0..5).prop_map(Word::from_letters)
    }

    proptest! {
        #[test]
        fn left_multiplication_is_compatible(u in arb_word(), t in arb_word(), b in arb_word()) {
            prop_assert_eq!(u.concat(&t) < u.concat(&b), t < b);
            prop_assert_eq!(t.concat(&u) < b.concat(&u), t < b);
        }

        #[test]
        fn order_is_total(a in arb_word(), b in arb_word()) {
            let lt = a < b;
            let gt = a > b;
            let eq = a == b;
            prop_assert_eq!(lt as u8 + gt as u8 + eq as u8, 1);
        }

        #[test]
        fn tail_inverts_prepend(u in arb_word(), j in 0usize..3) {
            prop_assert_eq!(u.prepend(j).tail(), Some(u.clone()));
            prop_assert!(u < u.prepend(j));
        }
    }
}
