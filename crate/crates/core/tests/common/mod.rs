//! Test-side oracles written with plain integer arithmetic, independent
//! of the library's linear algebra and census code.

#![allow(dead_code)]

use std::sync::Arc;

use nchilb_core::freealg::{AlgebraPresentation, NCPoly};
use nchilb_core::linear::{Matrix, ScalarField};
use nchilb_core::points::PointData;

/// `|GL_n(F_q)|` as the number of ordered bases of `F_q^n`.
pub fn gl_order_oracle(n: u32, q: u64) -> u64 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

/// Rank of vectors over `F_p` by plain elimination.
pub fn rank_mod(vectors: &[Vec<u64>], p: u64) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors.to_vec();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] + p * p - f * rows[rank][k]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

type Mat = Vec<Vec<u64>>;

fn mat_vec(a: &Mat, v: &[u64], p: u64) -> Vec<u64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum::<u64>() % p).collect()
}

fn mat_mul(a: &Mat, b: &Mat, p: u64) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum::<u64>() % p).collect())
        .collect()
}

/// Relations as `(coefficient mod p, letters)` lists.
pub fn relations_mod(relations: &[Vec<(i64, Vec<usize>)>], p: u64) -> Vec<Vec<(u64, Vec<usize>)>> {
    relations
        .iter()
        .map(|r| r.iter().map(|(c, w)| (c.rem_euclid(p as i64) as u64, w.clone())).collect())
        .collect()
}

fn relation_holds(mats: &[Mat], rel: &[(u64, Vec<usize>)], p: u64) -> bool {
    let n = mats[0].len();
    let mut acc = vec![vec![0u64; n]; n];
    for (c, w) in rel {
        let mut prod: Mat = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        for &l in w {
            prod = mat_mul(&prod, &mats[l], p);
        }
        for i in 0..n {
            for j in 0..n {
                acc[i][j] = (acc[i][j] + c * prod[i][j]) % p;
            }
        }
    }
    acc.iter().flatten().all(|&x| x == 0)
}

/// Whether `y` generates `F_p^n`: grow the span until it stops changing.
fn cyclic(mats: &[Mat], y: &[u64], p: u64) -> bool {
    let n = y.len();
    let mut span = vec![y.to_vec()];
    let mut rank = rank_mod(&span, p);
    loop {
        let mut next = span.clone();
        for v in &span {
            for a in mats {
                next.push(mat_vec(a, v, p));
            }
        }
        let r = rank_mod(&next, p);
        if r == rank {
            return rank == n;
        }
        rank = r;
        span = next;
    }
}

/// Brute force over every tuple `(A_1, ..., A_m, y)` over `F_p`: the number
/// of cyclic tuples satisfying the relations.
pub fn brute_force_cyclic_count(m: usize, n: usize, p: u64, relations: &[Vec<(i64, Vec<usize>)>]) -> u64 {
    let rels = relations_mod(relations, p);
    let digits = m * n * n + n;
    let total = p.pow(digits as u32);
    let mut count = 0;
    let mut d = vec![0u64; digits];
    for _ in 0..total {
        let mats: Vec<Mat> = (0..m)
            .map(|s| (0..n).map(|i| d[s * n * n + i * n..s * n * n + i * n + n].to_vec()).collect())
            .collect();
        let y = &d[m * n * n..];
        if rels.iter().all(|r| relation_holds(&mats, r, p)) && cyclic(&mats, y, p) {
            count += 1;
        }
        for x in d.iter_mut().rev() {
            *x += 1;
            if *x < p {
                break;
            }
            *x = 0;
        }
    }
    count
}

pub fn commutator() -> Vec<(i64, Vec<usize>)> {
    vec![(1, vec![0, 1]), (-1, vec![1, 0])]
}

pub fn point_i64(alg: &Arc<AlgebraPresentation>, mats: &[&[&[i64]]], y: &[i64]) -> PointData {
    let f = alg.field();
    PointData::new(
        alg.clone(),
        mats.iter().map(|r| Matrix::from_i64(f, r)).collect(),
        y.iter().map(|&v| f.from_i64(v)).collect(),
    )
    .unwrap()
}

pub fn free(m: usize, field: ScalarField) -> Arc<AlgebraPresentation> {
    Arc::new(AlgebraPresentation::free(m, field))
}

pub fn plane(field: ScalarField) -> Arc<AlgebraPresentation> {
    Arc::new(AlgebraPresentation::commutative_plane(field))
}

pub fn poly(field: ScalarField, terms: &[(i64, &[usize])]) -> NCPoly {
    NCPoly::from_i64(field, terms)
}
