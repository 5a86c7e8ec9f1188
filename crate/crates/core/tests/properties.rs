mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nchilb_core::freealg::{apply_poly_to_vector, AlgebraPresentation, NCPoly, Word};
use nchilb_core::linear::{Matrix, ScalarField};
use nchilb_core::orbits::{canonicalize, coordinates_in_basis, normal_form, point_from_ideal, IdealData};
use nchilb_core::points::{ChartIndex, PointData};
use nchilb_core::random::{random_group_element, random_plane_point, random_scalar, random_tuple, random_valid_point};
use nchilb_core::tangent::{based_tangent, ext1_dim_free, hom_space_dim, tangent_dim, HomStatus};
use nchilb_core::Error;

use common::*;

fn field_of(which: u8) -> ScalarField {
    match which % 3 {
        0 => ScalarField::Rationals,
        1 => ScalarField::Prime(5),
        _ => ScalarField::Prime(2),
    }
}

fn sample(seed: u64, m: usize, n: usize, field: ScalarField) -> (ChaCha8Rng, PointData) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_valid_point(&free(m, field), n, &mut rng, 100_000).expect("valid points are generic");
    (rng, p)
}

fn random_poly<R: Rng>(field: ScalarField, m: usize, max_len: usize, rng: &mut R) -> NCPoly {
    let mut f = NCPoly::zero(field);
    for _ in 0..rng.random_range(1..5) {
        let len = rng.random_range(0..=max_len);
        let w = Word::from_letters((0..len).map(|_| rng.random_range(0..m)).collect());
        f.add_term(w, random_scalar(field, rng));
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn validity_is_gl_stable(seed: u64, m in 1usize..=3, n in 1usize..=3, which: u8) {
        let field = field_of(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_tuple(&free(m, field), n, &mut rng);
        let g = random_group_element(field, n, &mut rng);
        prop_assert_eq!(p.gl_act(&g).unwrap().is_valid(), p.is_valid());
    }

    #[test]
    fn slice_is_identity_and_orbit_invariant(seed: u64, m in 1usize..=3, n in 2usize..=3, which: u8) {
        let field = field_of(which);
        let (mut rng, p) = sample(seed, m, n, field);
        let family = ChartIndex::word_family(field, m, n, n - 1);
        let f = family.iter().find(|f| p.in_chart(f).unwrap()).expect("covered").clone();
        let (slice, g) = p.normalize_in_chart(&f).unwrap();
        prop_assert!(slice.chart_matrix(&f).unwrap().is_identity());
        prop_assert_eq!(&p.gl_act(&g).unwrap(), &slice);
        let h = random_group_element(field, n, &mut rng);
        let (slice2, _) = p.gl_act(&h).unwrap().normalize_in_chart(&f).unwrap();
        prop_assert_eq!(slice2, slice);
    }

    #[test]
    fn chart_family_covers(seed: u64, m in 1usize..=3, n in 1usize..=3, which: u8) {
        let field = field_of(which);
        let (_, p) = sample(seed, m, n, field);
        if n == 1 {
            prop_assert!(p.in_chart(&ChartIndex::new(Vec::new())).unwrap());
        } else {
            let family = ChartIndex::word_family(field, m, n, n - 1);
            prop_assert!(family.iter().any(|f| p.in_chart(f).unwrap()));
        }
    }

    #[test]
    fn determinant_sections_are_semi_invariant(seed: u64, m in 1usize..=3, n in 2usize..=3, which: u8) {
        let field = field_of(which);
        let (mut rng, p) = sample(seed, m, n, field);
        let g = random_group_element(field, n, &mut rng);
        let f = ChartIndex::new((1..n).map(|_| random_poly(field, m, 3, &mut rng)).collect());
        let moved = p.gl_act(&g).unwrap();
        prop_assert_eq!(moved.chart_det(&f).unwrap(), &g.det() * &p.chart_det(&f).unwrap());
    }

    #[test]
    fn canonical_form_survives_ideal_round_trip(seed: u64, m in 1usize..=3, n in 1usize..=3, which: u8) {
        let field = field_of(which);
        let (mut rng, p) = sample(seed, m, n, field);
        let c = canonicalize(&p).unwrap();
        let ideal = c.extract_ideal();
        prop_assert_eq!(&point_from_ideal(&ideal).unwrap(), c.canonical_point());
        let rebuilt = IdealData::from_border(c.algebra().clone(), c.basis_words().to_vec(), c.border()).unwrap();
        prop_assert_eq!(&rebuilt, &ideal);
        // normal form coordinates equal f(A)y in the canonical basis
        let f = random_poly(field, m, 4, &mut rng);
        let nf = normal_form(&f, &ideal).unwrap();
        let coords: Vec<_> = c.basis_words().iter().map(|t| nf.coefficient(t)).collect();
        prop_assert_eq!(coords, coordinates_in_basis(&c, &f).unwrap());
        // generators vanish on y at the original point
        for g in ideal.generators().values() {
            prop_assert!(apply_poly_to_vector(g, p.matrices(), p.y()).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn euler_identity(seed: u64, m in 1usize..=3, np in 1usize..=3, nq in 1usize..=3, which: u8) {
        let field = field_of(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = free(m, field);
        // modules need not be cyclic; small entries make nontrivial Hom likely
        let p = random_tuple(&alg, np, &mut rng);
        let q = if rng.random_bool(0.3) && np == nq { p.clone() } else { random_tuple(&alg, nq, &mut rng) };
        let hom = hom_space_dim(&p, &q).unwrap() as i64;
        let ext = ext1_dim_free(&p, &q).unwrap() as i64;
        prop_assert_eq!(hom - ext, (1 - m as i64) * (np * nq) as i64);
    }

    #[test]
    fn plane_tangent_splits(seed: u64, n in 1usize..=3, which: u8) {
        let field = field_of(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_plane_point(field, n, &mut rng);
        let r = tangent_dim(&p).unwrap();
        let truncated = matches!(r.status, HomStatus::Truncated { .. });
        prop_assert!(truncated);
        prop_assert_eq!(r.hom_i_m_dim, Some(r.based_tangent_dim - n * n));
    }
}

/// For one generator every valid point lies in the chart `(x, ..., x^{n-1})`:
/// checked over every tuple over F_2 and F_3.
#[test]
fn single_generator_single_chart_exhaustive() {
    for q in [2u32, 3] {
        let field = ScalarField::Prime(q);
        let alg = free(1, field);
        for n in 1..=3usize {
            let chart = ChartIndex::powers_of_first_generator(field, n);
            let digits = n * n + n;
            let mut valid = 0u64;
            for index in 0..(q as u64).pow(digits as u32) {
                let mut x = index;
                let mut d = vec![0i64; digits];
                for slot in d.iter_mut().rev() {
                    *slot = (x % q as u64) as i64;
                    x /= q as u64;
                }
                let rows: Vec<Vec<_>> = (0..n).map(|i| (0..n).map(|j| field.from_i64(d[i * n + j])).collect()).collect();
                let a = Matrix::from_rows(field, rows).unwrap();
                let y = d[n * n..].iter().map(|&v| field.from_i64(v)).collect();
                let p = PointData::new(alg.clone(), vec![a], y).unwrap();
                if p.is_valid() {
                    valid += 1;
                    assert!(p.in_chart(&chart).unwrap(), "q={q} n={n} tuple {index}");
                }
            }
            // orbits of k[x] are the q^n monic polynomials of degree n
            assert_eq!(valid, (q as u64).pow(n as u32) * gl_order_oracle(n as u32, q as u64));
        }
    }
}

#[test]
fn plane_example_points() {
    let alg = plane(ScalarField::Rationals);
    let origin = point_i64(&alg, &[&[&[0]], &[&[0]]], &[1]);
    assert_eq!(based_tangent(&origin).unwrap().dimension, 3);
    assert_eq!(tangent_dim(&origin).unwrap().hom_i_m_dim, Some(2));
    // the fat point (x, y^2): a non-reduced point of the plane
    let fat = point_i64(&alg, &[&[&[0, 0], &[0, 0]], &[&[0, 0], &[1, 0]]], &[1, 0]);
    assert!(fat.is_valid());
    let r = tangent_dim(&fat).unwrap();
    assert_eq!(r.hom_i_m_dim, Some(r.based_tangent_dim - 4));
    assert_eq!(r.hom_i_m_dim, Some(4));
}

#[test]
fn ideal_data_rejects_bad_support() {
    let field = ScalarField::Rationals;
    let alg: Arc<AlgebraPresentation> = free(2, field);
    let basis = vec![Word::empty(), Word::letter(1)];
    let mut border = std::collections::BTreeMap::new();
    for b in nchilb_core::orbits::border_words(&basis, 2) {
        border.insert(b, vec![field.zero(), field.zero()]);
    }
    assert!(IdealData::from_border(alg.clone(), basis.clone(), &border).is_ok());
    // x1 < x2 in length-lex order, so c_{x1, x2} must vanish
    border.insert(Word::letter(0), vec![field.zero(), field.one()]);
    assert!(matches!(
        IdealData::from_border(alg, basis, &border),
        Err(Error::SupportViolation(_))
    ));
}
