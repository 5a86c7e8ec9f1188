//! Allocation-free F_p kernel for the census inner loop.
//!
//! A tuple is a flat digit array: the entries of `A_1, ..., A_m`
//! (row-major) followed by `y`. Semantics match the generic
//! [`crate::points::PointData`] operations; the census tests cross-check
//! the two.

use crate::freealg::NCPoly;
use crate::linear::{inv_mod, ScalarField};

pub(crate) const MAX_N: usize = 8;

type Vector = [u32; MAX_N];

pub(crate) struct Kernel {
    p: u32,
    n: usize,
    m: usize,
    relations: Vec<Vec<(u32, Vec<usize>)>>,
}

/// Per-thread working memory for one tuple.
pub(crate) struct Scratch {
    vectors: [Vector; MAX_N],
    parent: [usize; MAX_N],
    letter: [usize; MAX_N],
    echelon: [Vector; MAX_N],
    pivots: [usize; MAX_N],
    accepted: usize,
}

impl Scratch {
    pub(crate) fn new() -> Self {
        Scratch {
            vectors: [[0; MAX_N]; MAX_N],
            parent: [0; MAX_N],
            letter: [0; MAX_N],
            echelon: [[0; MAX_N]; MAX_N],
            pivots: [0; MAX_N],
            accepted: 0,
        }
    }
}

impl Kernel {
    /// `relations` must already be over `F_p`.
    pub(crate) fn new(p: u32, n: usize, m: usize, relations: &[NCPoly]) -> Self {
        assert!(n <= MAX_N, "census kernel supports n <= {MAX_N}");
        let relations = relations
            .iter()
            .map(|r| {
                debug_assert_eq!(r.field(), ScalarField::Prime(p));
                r.terms()
                    .map(|(w, c)| (c.residue().expect("relation over F_p"), w.letters().to_vec()))
                    .collect()
            })
            .collect();
        Kernel { p, n, m, relations }
    }

    pub(crate) fn digits(&self) -> usize {
        self.m * self.n * self.n + self.n
    }

    #[inline]
    fn mat_vec(&self, d: &[u32], s: usize, v: &Vector) -> Vector {
        let n = self.n;
        let base = s * n * n;
        let mut out = [0u32; MAX_N];
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let row = &d[base + i * n..base + i * n + n];
            let mut acc = 0u64;
            for (a, x) in row.iter().zip(v) {
                acc += *a as u64 * *x as u64;
            }
            *o = (acc % self.p as u64) as u32;
        }
        out
    }

    fn insert(&self, sc: &mut Scratch, v: &Vector) -> bool {
        let p = self.p as u64;
        let n = self.n;
        let mut r = *v;
        for k in 0..sc.accepted {
            let piv = sc.pivots[k];
            let c = r[piv] as u64;
            if c == 0 {
                continue;
            }
            let row = &sc.echelon[k];
            for i in 0..n {
                r[i] = ((r[i] as u64 + p * p - c * row[i] as u64) % p) as u32;
            }
        }
        let Some(piv) = (0..n).find(|&i| r[i] != 0) else {
            return false;
        };
        let inv = inv_mod(r[piv], self.p) as u64;
        for x in r.iter_mut().take(n) {
            *x = ((*x as u64 * inv) % p) as u32;
        }
        let k = sc.accepted;
        sc.echelon[k] = r;
        sc.pivots[k] = piv;
        sc.vectors[k] = *v;
        sc.accepted += 1;
        true
    }

    /// Greedy length-lex Krylov search; returns whether `y` is cyclic.
    /// On return `sc` holds the accepted words (as parent/letter links)
    /// and their vectors.
    pub(crate) fn krylov(&self, d: &[u32], sc: &mut Scratch) -> bool {
        let n = self.n;
        sc.accepted = 0;
        let mut y = [0u32; MAX_N];
        y[..n].copy_from_slice(&d[self.m * n * n..self.m * n * n + n]);
        if !self.insert(sc, &y) {
            return false;
        }
        let (mut lo, mut hi) = (0, 1);
        while sc.accepted < n && lo < hi {
            for j in 0..self.m {
                for idx in lo..hi {
                    let v = self.mat_vec(d, j, &sc.vectors[idx]);
                    let k = sc.accepted;
                    if self.insert(sc, &v) {
                        sc.parent[k] = idx;
                        sc.letter[k] = j;
                        if sc.accepted == n {
                            return true;
                        }
                    }
                }
            }
            lo = hi;
            hi = sc.accepted;
        }
        sc.accepted == n
    }

    /// For a cyclic tuple (after [`Kernel::krylov`]): every relation kills
    /// every basis vector, hence the whole space.
    pub(crate) fn relations_hold(&self, d: &[u32], sc: &Scratch) -> bool {
        let n = self.n;
        let p = self.p as u64;
        for rel in &self.relations {
            for k in 0..n {
                let mut acc = [0u64; MAX_N];
                for (c, letters) in rel {
                    let mut v = sc.vectors[k];
                    for &l in letters.iter().rev() {
                        v = self.mat_vec(d, l, &v);
                    }
                    for i in 0..n {
                        acc[i] = (acc[i] + *c as u64 * v[i] as u64) % p;
                    }
                }
                if acc[..n].iter().any(|&x| x != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Canonical-form fingerprint of a cyclic tuple: the accepted word tree
    /// and the border coefficients `K^{-1} A_j v_s`.
    pub(crate) fn canonical_key(&self, d: &[u32], sc: &Scratch) -> Vec<u32> {
        let n = self.n;
        let p = self.p as u64;
        let mut key = Vec::with_capacity(2 * n + n * self.m * n);
        for k in 1..n {
            key.push(sc.parent[k] as u32);
            key.push(sc.letter[k] as u32);
        }
        let kinv = self.inverse_of_columns(&sc.vectors);
        for s in 0..n {
            for j in 0..self.m {
                let inside = (1..n).any(|k| sc.parent[k] == s && sc.letter[k] == j);
                if inside {
                    continue;
                }
                let v = self.mat_vec(d, j, &sc.vectors[s]);
                for row in kinv.iter().take(n) {
                    let mut acc = 0u64;
                    for i in 0..n {
                        acc += row[i] as u64 * v[i] as u64;
                    }
                    key.push((acc % p) as u32);
                }
            }
        }
        key
    }

    /// Inverse of the matrix whose columns are `cols[0..n]`, as rows.
    fn inverse_of_columns(&self, cols: &[Vector; MAX_N]) -> [Vector; MAX_N] {
        let n = self.n;
        let p = self.p as u64;
        let mut a = [[0u32; 2 * MAX_N]; MAX_N];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = cols[j][i];
            }
            a[i][n + i] = 1;
        }
        for c in 0..n {
            let pr = (c..n).find(|&r| a[r][c] != 0).expect("Krylov basis is invertible");
            a.swap(c, pr);
            let inv = inv_mod(a[c][c], self.p) as u64;
            for x in a[c].iter_mut().take(2 * n) {
                *x = ((*x as u64 * inv) % p) as u32;
            }
            for r in 0..n {
                if r == c || a[r][c] == 0 {
                    continue;
                }
                let f = a[r][c] as u64;
                for k in 0..2 * n {
                    a[r][k] = ((a[r][k] as u64 + p * p - f * a[c][k] as u64) % p) as u32;
                }
            }
        }
        let mut out = [[0u32; MAX_N]; MAX_N];
        for i in 0..n {
            out[i][..n].copy_from_slice(&a[i][n..2 * n]);
        }
        out
    }
}
