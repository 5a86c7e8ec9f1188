//! Exhaustive census of `F_q`-points of the based Hilbert scheme.
//!
//! The tuple space is enumerated by an odometer over the digits
//! `(A_1 row-major, ..., A_m row-major, y)`, with the last digit of `y`
//! turning fastest. Tuple index `t` is the base-`q` number with those
//! digits, most significant first. Shards are contiguous index ranges;
//! shard results are pure and summed in shard order, so the totals do not
//! depend on the shard count.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::count_polynomial;
use super::fast::{Kernel, Scratch, MAX_N};
use crate::error::{Error, Result};
use crate::freealg::AlgebraPresentation;
use crate::linear::{Matrix, ScalarField};
use crate::orbits::{canonicalize, CanonicalForm};
use crate::points::PointData;

/// Largest search space accepted without an explicit override.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

const MAX_CENSUS_PRIME: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusOptions {
    /// Number of contiguous shards; 0 picks one per rayon thread (times 4).
    pub shards: usize,
    pub budget: u128,
    /// Also count distinct canonical forms among the cyclic tuples.
    pub distinct_forms: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            shards: 0,
            budget: DEFAULT_BUDGET,
            distinct_forms: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub m: usize,
    pub n: usize,
    pub q: u32,
    pub tuples: u64,
    pub cyclic_count: u64,
    pub gl_order: u64,
    pub orbit_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinct_forms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitReport {
    pub m: usize,
    pub n: usize,
    /// `(q, census orbit count, polynomial value)` per prime.
    pub samples: Vec<(u32, u64, u128)>,
    pub fits: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCheck {
    pub holds: bool,
    pub source_orbits: u64,
    pub quotient_orbits: u64,
    pub quotient_forms_satisfy_source: bool,
}

/// `|GL_n(F_q)| = Π_{i<n} (q^n - q^i)`.
pub fn gl_order(n: usize, q: u64) -> Option<u64> {
    let qn = q.checked_pow(n as u32)?;
    (0..n as u32).try_fold(1u64, |acc, i| acc.checked_mul(qn - q.pow(i)))
}

struct ShardResult {
    cyclic: u64,
    forms: HashMap<Vec<u32>, u64>,
}

struct Plan {
    algebra: Arc<AlgebraPresentation>,
    kernel: Kernel,
    q: u32,
    total: u64,
}

fn plan(algebra: &AlgebraPresentation, n: usize, q: u32, budget: u128) -> Result<Plan> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidArgument(format!("census supports 1 <= n <= {MAX_N}")));
    }
    if q >= MAX_CENSUS_PRIME {
        return Err(Error::InvalidArgument(format!("census supports q < {MAX_CENSUS_PRIME}")));
    }
    let field = ScalarField::prime(q as u64)?;
    let algebra = match algebra.field() {
        ScalarField::Rationals => algebra.with_field(field)?,
        f if f == field => algebra.clone(),
        f => {
            return Err(Error::FieldMismatch { left: f, right: field });
        }
    };
    let kernel = Kernel::new(q, n, algebra.m(), algebra.relations());
    let digits = kernel.digits() as u32;
    let needed = (q as u128).checked_pow(digits).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(Plan {
        algebra: Arc::new(algebra),
        kernel,
        q,
        total: needed as u64,
    })
}

fn decode(mut index: u64, q: u32, digits: &mut [u32]) {
    for d in digits.iter_mut().rev() {
        *d = (index % q as u64) as u32;
        index /= q as u64;
    }
}

fn run_shard(plan: &Plan, start: u64, end: u64, collect: bool) -> ShardResult {
    let k = &plan.kernel;
    let q = plan.q;
    let mut digits = vec![0u32; k.digits()];
    decode(start, q, &mut digits);
    let mut sc = Scratch::new();
    let mut out = ShardResult {
        cyclic: 0,
        forms: HashMap::new(),
    };
    for index in start..end {
        if k.krylov(&digits, &mut sc) && k.relations_hold(&digits, &sc) {
            out.cyclic += 1;
            if collect {
                out.forms.entry(k.canonical_key(&digits, &sc)).or_insert(index);
            }
        }
        // odometer step
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    out
}

fn execute(plan: &Plan, opts: &CensusOptions, collect: bool) -> (u64, HashMap<Vec<u32>, u64>) {
    let shards = if opts.shards == 0 {
        rayon::current_num_threads() * 4
    } else {
        opts.shards
    } as u64;
    let shards = shards.clamp(1, plan.total.max(1));
    let bounds: Vec<(u64, u64)> = (0..shards)
        .map(|s| {
            let lo = (plan.total as u128 * s as u128 / shards as u128) as u64;
            let hi = (plan.total as u128 * (s + 1) as u128 / shards as u128) as u64;
            (lo, hi)
        })
        .collect();
    let results: Vec<ShardResult> = bounds
        .par_iter()
        .map(|&(lo, hi)| run_shard(plan, lo, hi, collect))
        .collect();
    let mut cyclic = 0;
    let mut forms: HashMap<Vec<u32>, u64> = HashMap::new();
    for r in results {
        cyclic += r.cyclic;
        for (key, idx) in r.forms {
            forms
                .entry(key)
                .and_modify(|e| *e = (*e).min(idx))
                .or_insert(idx);
        }
    }
    (cyclic, forms)
}

fn report(plan: &Plan, n: usize, cyclic: u64, distinct: Option<u64>) -> Result<CensusReport> {
    let order = gl_order(n, plan.q as u64).ok_or_else(|| Error::InvalidArgument("|GL_n(F_q)| overflows".into()))?;
    if !cyclic.is_multiple_of(order) {
        return Err(Error::NonExactDivision {
            cyclic,
            group_order: order,
        });
    }
    Ok(CensusReport {
        m: plan.algebra.m(),
        n,
        q: plan.q,
        tuples: plan.total,
        cyclic_count: cyclic,
        gl_order: order,
        orbit_count: cyclic / order,
        distinct_forms: distinct,
    })
}

/// Counts cyclic tuples satisfying the relations over `F_q`, and orbits by
/// dividing by `|GL_n(F_q)|`. The division must be exact.
pub fn census(algebra: &AlgebraPresentation, n: usize, q: u32, opts: &CensusOptions) -> Result<CensusReport> {
    let plan = plan(algebra, n, q, opts.budget)?;
    let (cyclic, forms) = execute(&plan, opts, opts.distinct_forms);
    report(&plan, n, cyclic, opts.distinct_forms.then_some(forms.len() as u64))
}

/// Point with the digits of tuple `index`.
fn tuple_point(plan: &Plan, n: usize, index: u64) -> Result<PointData> {
    let field = plan.algebra.field();
    let mut digits = vec![0u32; plan.kernel.digits()];
    decode(index, plan.q, &mut digits);
    let m = plan.algebra.m();
    let mats = (0..m)
        .map(|s| {
            let rows = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| field.from_i64(digits[s * n * n + i * n + j] as i64))
                        .collect()
                })
                .collect();
            Matrix::from_rows(field, rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let y = (0..n).map(|i| field.from_i64(digits[m * n * n + i] as i64)).collect();
    PointData::new(plan.algebra.clone(), mats, y)
}

/// Census together with every distinct canonical form found, ordered by
/// the index of the first tuple reaching it. Each representative tuple is
/// canonicalized with the generic (exact) code path.
pub fn census_forms(
    algebra: &AlgebraPresentation,
    n: usize,
    q: u32,
    opts: &CensusOptions,
) -> Result<(CensusReport, Vec<CanonicalForm>)> {
    let plan = plan(algebra, n, q, opts.budget)?;
    let (cyclic, forms) = execute(&plan, opts, true);
    let report = report(&plan, n, cyclic, Some(forms.len() as u64))?;
    let mut reps: Vec<u64> = forms.into_values().collect();
    reps.sort_unstable();
    let forms = reps
        .into_iter()
        .map(|idx| canonicalize(&tuple_point(&plan, n, idx)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((report, forms))
}

/// Whether census orbit counts at each prime equal the cell polynomial
/// of the free algebra evaluated there.
pub fn polynomial_fit_check(m: usize, n: usize, primes: &[u32], opts: &CensusOptions) -> Result<FitReport> {
    let poly = count_polynomial(m, n);
    let mut samples = Vec::with_capacity(primes.len());
    for &q in primes {
        let free = AlgebraPresentation::free(m, ScalarField::prime(q as u64)?);
        let r = census(&free, n, q, opts)?;
        let expected = poly
            .evaluate(q as u64)
            .ok_or_else(|| Error::InvalidArgument("count polynomial overflows".into()))?;
        samples.push((q, r.orbit_count, expected));
    }
    let fits = samples.iter().all(|&(_, got, want)| got as u128 == want);
    Ok(FitReport { m, n, samples, fits })
}

/// For a quotient `B` of `A` (same generators, relations of `A` among those
/// of `B`): every canonical form of `B` over `F_q` must satisfy the
/// relations of `A`, and `B` has at most as many orbits as `A`.
pub fn check_closed_embedding(
    source: &AlgebraPresentation,
    quotient: &AlgebraPresentation,
    n: usize,
    q: u32,
    opts: &CensusOptions,
) -> Result<EmbeddingCheck> {
    if source.m() != quotient.m() {
        return Err(Error::NotAQuotient(format!(
            "{} generators vs {}",
            source.m(),
            quotient.m()
        )));
    }
    let field = ScalarField::prime(q as u64)?;
    let a = if source.field() == field { source.clone() } else { source.with_field(field)? };
    let b = if quotient.field() == field { quotient.clone() } else { quotient.with_field(field)? };
    for (i, r) in a.relations().iter().enumerate() {
        if !b.relations().contains(r) {
            return Err(Error::NotAQuotient(format!("relation {i} ({r}) of the source is missing")));
        }
    }
    let source_report = census(&a, n, q, opts)?;
    let (quotient_report, forms) = census_forms(&b, n, q, opts)?;
    let a = Arc::new(a);
    let mut satisfy = true;
    for f in &forms {
        let p = f.canonical_point();
        let lifted = PointData::new(a.clone(), p.matrices().to_vec(), p.y().to_vec())?;
        satisfy &= lifted.check_relations();
    }
    Ok(EmbeddingCheck {
        holds: satisfy && quotient_report.orbit_count <= source_report.orbit_count,
        source_orbits: source_report.orbit_count,
        quotient_orbits: quotient_report.orbit_count,
        quotient_forms_satisfy_source: satisfy,
    })
}
