//! Exact scalars over ℚ and 𝔽_p.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient field for every linear-algebra computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    Rationals,
    PrimeField(u32),
}

impl FieldTag {
    /// Builds 𝔽_p after checking that `p` is a prime below 2^31.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= (1u64 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldTag::PrimeField(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldTag::Rationals => 0,
            FieldTag::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldTag::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            FieldTag::PrimeField(p) => {
                let p = *p as i64;
                Scalar::Fp { v: v.rem_euclid(p) as u32, p: p as u32 }
            }
        }
    }

    /// Parses `q`, `Q`, `f<p>` or `F<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldTag::Rationals);
        }
        if let Some(rest) = t.strip_prefix('f').or_else(|| t.strip_prefix('F')) {
            let p: u64 = rest.parse().map_err(|_| Error::BadInput(format!("bad field '{s}'")))?;
            return FieldTag::prime(p);
        }
        Err(Error::BadInput(format!("bad field '{s}' (expected q or f<p>)")))
    }

    /// Short name used in reports: `Q` or `Fp`.
    pub fn report_name(&self) -> &'static str {
        match self {
            FieldTag::Rationals => "Q",
            FieldTag::PrimeField(_) => "Fp",
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rationals => write!(f, "Q"),
            FieldTag::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element in canonical form: rationals in lowest terms,
/// 𝔽_p residues in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldTag {
        match self {
            Scalar::Q(_) => FieldTag::Rationals,
            Scalar::Fp { p, .. } => FieldTag::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Ok(Scalar::Q(a + b)),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => {
                Ok(Scalar::Fp { v: ((*a as u64 + *b as u64) % *p as u64) as u32, p: *p })
            }
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Ok(Scalar::Q(a * b)),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => {
                Ok(Scalar::Fp { v: ((*a as u64 * *b as u64) % *p as u64) as u32, p: *p })
            }
            _ => Err(Error::FieldMismatch),
        }
    }

    /// Panics on mixed fields; internal code only combines same-field values.
    pub fn add(&self, o: &Scalar) -> Scalar {
        self.try_add(o).expect("field mismatch")
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        self.try_mul(o).expect("field mismatch")
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Q(a) => Some(Scalar::Q(a.recip())),
            Scalar::Fp { v, p } => Some(Scalar::Fp { v: pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32, p: *p }),
        }
    }

    pub fn div(&self, o: &Scalar) -> Option<Scalar> {
        o.inv().map(|i| self.mul(&i))
    }

    /// Integer value when the scalar is an integer (ℚ) or its residue (𝔽_p).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(r) if r.is_integer() => r.to_integer().to_i64(),
            Scalar::Q(_) => None,
            Scalar::Fp { v, .. } => Some(*v as i64),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Q(r) if r.is_negative())
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse_roundtrip() {
        let f = FieldTag::prime(7).unwrap();
        for a in 1..7 {
            let x = f.from_i64(a);
            assert!(x.mul(&x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(FieldTag::prime(9).is_err());
        assert!(FieldTag::prime(1).is_err());
        assert!(FieldTag::prime(2).is_ok());
    }

    #[test]
    fn negative_values_reduce_canonically() {
        let f = FieldTag::PrimeField(5);
        assert_eq!(f.from_i64(-1), Scalar::Fp { v: 4, p: 5 });
        assert_eq!(FieldTag::Rationals.from_i64(-3).to_string(), "-3");
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = FieldTag::Rationals.one();
        let b = FieldTag::PrimeField(3).one();
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch)));
    }

    #[test]
    fn parse_field_names() {
        assert_eq!(FieldTag::parse("q").unwrap(), FieldTag::Rationals);
        assert_eq!(FieldTag::parse("f3").unwrap(), FieldTag::PrimeField(3));
        assert!(FieldTag::parse("f4").is_err());
        assert!(FieldTag::parse("z").is_err());
    }
}
