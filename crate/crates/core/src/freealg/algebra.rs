use super::poly::NCPoly;
use crate::error::{Error, Result};
use crate::linear::ScalarField;

/// A finitely presented algebra `F_m / R` over Q or F_p, given by its
/// generator count and a list of two-sided relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraPresentation {
    m: usize,
    relations: Vec<NCPoly>,
    field: ScalarField,
}

impl AlgebraPresentation {
    /// Validates generator indices and nonzero-ness, coercing relation
    /// coefficients into `field` (rationals reduce mod p).
    pub fn new(m: usize, relations: Vec<NCPoly>, field: ScalarField) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("an algebra needs at least one generator".into()));
        }
        let mut out = Vec::with_capacity(relations.len());
        for (i, r) in relations.into_iter().enumerate() {
            if r.is_zero() {
                return Err(Error::InvalidArgument(format!("relation {i} is zero")));
            }
            if let Some(l) = r.max_letter() {
                if l >= m {
                    return Err(Error::InvalidArgument(format!(
                        "relation {i} uses generator x{} but m = {m}",
                        l + 1
                    )));
                }
            }
            let r = r.coerce(field)?;
            if r.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "relation {i} vanishes over {field}"
                )));
            }
            out.push(r);
        }
        Ok(AlgebraPresentation {
            m,
            relations: out,
            field,
        })
    }

    pub fn free(m: usize, field: ScalarField) -> Self {
        assert!(m > 0, "free algebra needs at least one generator");
        AlgebraPresentation {
            m,
            relations: Vec::new(),
            field,
        }
    }

    /// `k[x_1, x_2]`: the free algebra on two generators modulo the commutator.
    pub fn commutative_plane(field: ScalarField) -> Self {
        let comm = NCPoly::from_i64(field, &[(1, &[0, 1]), (-1, &[1, 0])]);
        AlgebraPresentation::new(2, vec![comm], field).expect("valid presentation")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn relations(&self) -> &[NCPoly] {
        &self.relations
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    /// The same presentation with coefficients reduced into `field`.
    pub fn with_field(&self, field: ScalarField) -> Result<Self> {
        AlgebraPresentation::new(self.m, self.relations.clone(), field)
    }
}
