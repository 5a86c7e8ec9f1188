//! Exact scalars over Q (arbitrary precision) and prime fields F_p.
//!
//! Binary operators on [`FieldValue`] panic when the operands live in
//! different fields. Every container in this crate ([`super::Matrix`],
//! polynomials, points) validates field uniformity on construction, so
//! the operators only see matched operands in practice.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const MAX_PRIME: u64 = 1 << 31;

/// The base field: Q or F_p with p prime, p <= 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScalarField {
    Rationals,
    Prime(u32),
}

impl ScalarField {
    /// Checked constructor for F_p.
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime <= 2^31")));
        }
        Ok(ScalarField::Prime(p as u32))
    }

    pub fn characteristic(self) -> u32 {
        match self {
            ScalarField::Rationals => 0,
            ScalarField::Prime(p) => p,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ScalarField::Prime(_))
    }

    pub fn zero(self) -> FieldValue {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldValue {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> FieldValue {
        match self {
            ScalarField::Rationals => FieldValue::Rational(BigRational::from_integer(v.into())),
            ScalarField::Prime(p) => FieldValue::Modular {
                value: v.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> FieldValue {
        match self {
            ScalarField::Rationals => FieldValue::Rational(BigRational::from_integer(v.clone())),
            ScalarField::Prime(p) => FieldValue::Modular {
                value: bigint_mod(v, p),
                p,
            },
        }
    }

    /// Brings a rational into this field. Fails over F_p when the
    /// denominator is divisible by p.
    pub fn from_rational(self, r: &BigRational) -> Result<FieldValue> {
        match self {
            ScalarField::Rationals => Ok(FieldValue::Rational(r.clone())),
            ScalarField::Prime(p) => {
                let den = bigint_mod(r.denom(), p);
                if den == 0 {
                    return Err(Error::BadDenominator {
                        value: format_rational(r),
                        prime: p,
                    });
                }
                let num = bigint_mod(r.numer(), p);
                Ok(FieldValue::Modular {
                    value: mul_mod(num, inv_mod(den, p), p),
                    p,
                })
            }
        }
    }

    /// Residues `0..p` for F_p; `None` over Q.
    pub fn elements(self) -> Option<impl Iterator<Item = FieldValue>> {
        match self {
            ScalarField::Rationals => None,
            ScalarField::Prime(p) => Some((0..p).map(move |value| FieldValue::Modular { value, p })),
        }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Rationals => write!(f, "Q"),
            ScalarField::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An element of a [`ScalarField`]. Rationals are kept in lowest terms
/// with positive denominator (guaranteed by `BigRational`); residues are
/// canonical in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldValue {
    Rational(BigRational),
    Modular { value: u32, p: u32 },
}

impl FieldValue {
    pub fn field(&self) -> ScalarField {
        match self {
            FieldValue::Rational(_) => ScalarField::Rationals,
            FieldValue::Modular { p, .. } => ScalarField::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Rational(r) => r.is_zero(),
            FieldValue::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Rational(r) => r.is_one(),
            FieldValue::Modular { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<FieldValue> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldValue::Rational(r) => FieldValue::Rational(r.recip()),
            FieldValue::Modular { value, p } => FieldValue::Modular {
                value: inv_mod(*value, *p),
                p: *p,
            },
        })
    }

    pub fn pow(&self, mut e: u64) -> FieldValue {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Residue for F_p values.
    pub fn residue(&self) -> Option<u32> {
        match self {
            FieldValue::Modular { value, .. } => Some(*value),
            FieldValue::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldValue::Rational(r) => Some(r),
            FieldValue::Modular { .. } => None,
        }
    }

    /// Reduction of a rational modulo a prime. F_p values are returned
    /// unchanged when the prime agrees.
    pub fn reduce_mod(&self, prime: u32) -> Result<FieldValue> {
        match self {
            FieldValue::Rational(r) => ScalarField::Prime(prime).from_rational(r),
            FieldValue::Modular { p, .. } if *p == prime => Ok(self.clone()),
            FieldValue::Modular { p, .. } => Err(Error::FieldMismatch {
                left: ScalarField::Prime(*p),
                right: ScalarField::Prime(prime),
            }),
        }
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Rational(r) => f.write_str(&format_rational(r)),
            FieldValue::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"a"` or `"a/b"` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((a, b)) => {
            let num = a.trim().parse::<BigInt>().ok()?;
            let den = b.trim().parse::<BigInt>().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(BigRational::new(num, den))
            }
        }
    }
}

fn mismatch(a: &FieldValue, b: &FieldValue) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: &FieldValue) -> FieldValue {
        match (self, rhs) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a + b),
            (FieldValue::Modular { value: a, p }, FieldValue::Modular { value: b, p: q }) if p == q => {
                let s = *a as u64 + *b as u64;
                FieldValue::Modular {
                    value: (s % *p as u64) as u32,
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: &FieldValue) -> FieldValue {
        match (self, rhs) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a - b),
            (FieldValue::Modular { value: a, p }, FieldValue::Modular { value: b, p: q }) if p == q => {
                let s = *a as u64 + *p as u64 - *b as u64;
                FieldValue::Modular {
                    value: (s % *p as u64) as u32,
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: &FieldValue) -> FieldValue {
        match (self, rhs) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a * b),
            (FieldValue::Modular { value: a, p }, FieldValue::Modular { value: b, p: q }) if p == q => {
                FieldValue::Modular {
                    value: mul_mod(*a, *b, *p),
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Div for &FieldValue {
    type Output = FieldValue;
    fn div(self, rhs: &FieldValue) -> FieldValue {
        let inv = rhs.inv().expect("division by zero");
        self * &inv
    }
}

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        match self {
            FieldValue::Rational(a) => FieldValue::Rational(-a),
            FieldValue::Modular { value, p } => FieldValue::Modular {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for FieldValue {
            type Output = FieldValue;
            fn $m(self, rhs: FieldValue) -> FieldValue {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $m(self, rhs: &FieldValue) -> FieldValue {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        -&self
    }
}

pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn pow_mod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue via Fermat.
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p as u64 - 2, p)
}

fn bigint_mod(v: &BigInt, p: u32) -> u32 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u32().expect("residue fits in u32")
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
