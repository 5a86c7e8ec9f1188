//! Cells of the Hilbert scheme of the free algebra, the point-count
//! polynomial they produce, and the exhaustive finite-field census that
//! checks it.
//!
//! A cell is a prefix-closed set `S` of `n` words. Its canonical forms are
//! parametrized freely by the border coefficients `c_{b,t}` with `t < b`,
//! so the cell is an affine space of dimension
//! `Σ_b #{t ∈ S : t < b}` over the border words `b`.

mod census;
mod fast;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use census::{
    census, census_forms, check_closed_embedding, gl_order, polynomial_fit_check, CensusOptions, CensusReport,
    EmbeddingCheck, FitReport, DEFAULT_BUDGET,
};

use crate::freealg::Word;
use crate::orbits::border_words;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub basis_words: Vec<Word>,
    pub dimension: u32,
}

/// Integer polynomial in `q`, stored as exponent → coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountPolynomial {
    pub coefficients: BTreeMap<u32, u64>,
}

/// Dimension of the cell with basis `S`.
pub fn cell_dimension(basis: &[Word], m: usize) -> u32 {
    border_words(basis, m)
        .iter()
        .map(|b| basis.iter().filter(|t| *t < b).count() as u32)
        .sum()
}

/// All prefix-closed `n`-element word sets over `m` letters, each sorted,
/// listed in lexicographic order of their sorted word lists.
pub fn enumerate_cells(m: usize, n: usize) -> Vec<Cell> {
    assert!(m >= 1 && n >= 1, "enumerate_cells needs m, n >= 1");
    let mut sets = Vec::new();
    let mut chosen = vec![Word::empty()];
    let mut candidates: Vec<Word> = (0..m).map(Word::letter).collect();
    grow(&mut chosen, &mut candidates, 0, n, m, &mut sets);
    let mut cells: Vec<Cell> = sets
        .into_iter()
        .map(|mut s: Vec<Word>| {
            s.sort();
            let dimension = cell_dimension(&s, m);
            Cell {
                basis_words: s,
                dimension,
            }
        })
        .collect();
    cells.sort_by(|a, b| a.basis_words.cmp(&b.basis_words));
    cells
}

// Include-or-skip over a growing candidate queue; every subtree of the
// word tree containing the root comes out exactly once.
fn grow(chosen: &mut Vec<Word>, candidates: &mut Vec<Word>, pos: usize, n: usize, m: usize, out: &mut Vec<Vec<Word>>) {
    if chosen.len() == n {
        out.push(chosen.clone());
        return;
    }
    if pos == candidates.len() {
        return;
    }
    let w = candidates[pos].clone();
    let before = candidates.len();
    candidates.extend((0..m).map(|j| w.prepend(j)));
    chosen.push(w);
    grow(chosen, candidates, pos + 1, n, m, out);
    chosen.pop();
    candidates.truncate(before);
    grow(chosen, candidates, pos + 1, n, m, out);
}

/// `Σ_cells q^dim` for the free algebra on `m` generators.
pub fn count_polynomial(m: usize, n: usize) -> CountPolynomial {
    let mut p = CountPolynomial::default();
    for c in enumerate_cells(m, n) {
        *p.coefficients.entry(c.dimension).or_insert(0) += 1;
    }
    p
}

impl CountPolynomial {
    pub fn degree(&self) -> Option<u32> {
        self.coefficients.keys().next_back().copied()
    }

    pub fn leading_coefficient(&self) -> Option<u64> {
        self.coefficients.values().next_back().copied()
    }

    /// Value at `q`, or `None` on overflow.
    pub fn evaluate(&self, q: u64) -> Option<u128> {
        self.coefficients.iter().try_fold(0u128, |acc, (&e, &c)| {
            let pow = (q as u128).checked_pow(e)?;
            acc.checked_add(pow.checked_mul(c as u128)?)
        })
    }
}
