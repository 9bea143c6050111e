//! Exact scalars over the rationals and over prime fields F_q with q odd.
//!
//! Every computation in the crate is carried out over one [`FieldSpec`].
//! Rationals are arbitrary precision and always stored in lowest terms with
//! a positive denominator; prime-field elements are residues in `[0, q)`.
//! Combining scalars from two different fields is an error, never a coercion.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed-field operands: {0} and {1}")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("cannot parse field spec {0:?} (expected `rational` or `prime:q`)")]
    ParseField(String),
    #[error("{value} has a denominator that is not invertible mod {modulus}")]
    NotReducible { value: String, modulus: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Kind {
    Rational,
    Prime(u64),
}

/// The ground field: ℚ or F_q for an odd prime q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec(Kind);

impl FieldSpec {
    pub const fn rational() -> Self {
        FieldSpec(Kind::Rational)
    }

    /// The prime field F_q. Rejects even or composite moduli, so the
    /// characteristic is never 2.
    pub fn prime(modulus: u64) -> Result<Self, FieldError> {
        if modulus.is_multiple_of(2) || !is_prime(modulus) {
            return Err(FieldError::NotOddPrime(modulus));
        }
        Ok(FieldSpec(Kind::Prime(modulus)))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.0, Kind::Rational)
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.0 {
            Kind::Rational => None,
            Kind::Prime(q) => Some(q),
        }
    }

    /// 0 for ℚ, q for F_q.
    pub fn characteristic(&self) -> u64 {
        self.modulus().unwrap_or(0)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self.0 {
            Kind::Rational => Scalar(Repr::Rational(BigRational::from_integer(n.clone()))),
            Kind::Prime(q) => Scalar(Repr::Prime {
                value: reduce_bigint(n, q),
                modulus: q,
            }),
        }
    }

    /// `num / den` in this field. Fails when `den` vanishes in the field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// Image of an exact rational in this field (the reduction map ℚ → F_q).
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar, FieldError> {
        let num = self.from_bigint(r.numer());
        let den = self.from_bigint(r.denom());
        num.checked_div(&den).map_err(|_| FieldError::NotReducible {
            value: r.to_string(),
            modulus: self.characteristic(),
        })
    }

    /// Parses `"3"`, `"-1/2"` and, for prime fields, also plain residues.
    /// A fraction in a prime field is interpreted through the reduction map.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, FieldError> {
        let t = text.trim();
        let err = || FieldError::Parse(text.to_string());
        let r = match t.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
                if d.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(BigInt::from_str(t).map_err(|_| err())?),
        };
        self.from_rational(&r)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Rational => write!(f, "rational"),
            Kind::Prime(q) => write!(f, "prime:{q}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `rational`, `Q`, `prime:q` and `F_q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("rational") || t == "Q" {
            return Ok(FieldSpec::rational());
        }
        let digits = t
            .strip_prefix("prime:")
            .or_else(|| t.strip_prefix("F_"))
            .ok_or_else(|| FieldError::ParseField(s.to_string()))?;
        let q: u64 = digits
            .parse()
            .map_err(|_| FieldError::ParseField(s.to_string()))?;
        FieldSpec::prime(q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

/// An exact element of ℚ or of F_q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self.0 {
            Repr::Rational(_) => FieldSpec::rational(),
            Repr::Prime { modulus, .. } => FieldSpec(Kind::Prime(modulus)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_zero(),
            Repr::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_one(),
            Repr::Prime { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(r) => Some(r),
            Repr::Prime { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self.0 {
            Repr::Rational(_) => None,
            Repr::Prime { value, .. } => Some(value),
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<(), FieldError> {
        let (a, b) = (self.field(), other.field());
        if a == b {
            Ok(())
        } else {
            Err(FieldError::MixedFields(a, b))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a + b)),
            (Repr::Prime { value: a, modulus }, Repr::Prime { value: b, .. }) => {
                Scalar(Repr::Prime {
                    value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                })
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a * b)),
            (Repr::Prime { value: a, modulus }, Repr::Prime { value: b, .. }) => {
                Scalar(Repr::Prime {
                    value: mul_mod(*a, *b, *modulus),
                    modulus: *modulus,
                })
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Rational(r) => Scalar(Repr::Rational(r.recip())),
            Repr::Prime { value, modulus } => Scalar(Repr::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            }),
        })
    }

    fn neg_ref(&self) -> Scalar {
        match &self.0 {
            Repr::Rational(r) => Scalar(Repr::Rational(-r)),
            Repr::Prime { value, modulus } => Scalar(Repr::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            }),
        }
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, exp: i64) -> Result<Scalar, FieldError> {
        let e = u32::try_from(exp.unsigned_abs()).expect("exponent out of range");
        if exp < 0 {
            Ok(self.inv()?.pow(e))
        } else {
            Ok(self.pow(e))
        }
    }

    /// Reduction of a rational scalar into `target`. The identity on scalars
    /// already in `target`.
    pub fn reduce_to(&self, target: &FieldSpec) -> Result<Scalar, FieldError> {
        match &self.0 {
            Repr::Rational(r) => target.from_rational(r),
            Repr::Prime { .. } if self.field() == *target => Ok(self.clone()),
            Repr::Prime { .. } => Err(FieldError::MixedFields(self.field(), *target)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

// Operator sugar. These panic on mixed fields or division by zero; code that
// can see untrusted operands uses the `checked_*` methods instead.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("scalar {}: {e}", stringify!($method)))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

/// N is feasible when N ≥ 0 in characteristic 0, or 0 ≤ N < q over F_q.
pub fn feasible(n: i64, field: &FieldSpec) -> bool {
    match field.modulus() {
        None => n >= 0,
        Some(q) => n >= 0 && (n as u64) < q,
    }
}

/// The shifted factorial (α)_n = α(α+1)···(α+n−1), with (α)_0 = 1.
pub fn shifted_factorial(alpha: &Scalar, n: usize) -> Scalar {
    let field = alpha.field();
    (0..n).fold(field.one(), |acc, k| {
        acc * (alpha + field.from_i64(k as i64))
    })
}

/// n! as a field element.
pub fn factorial(n: usize, field: &FieldSpec) -> Scalar {
    field.from_bigint(&factorial_int(n))
}

/// The binomial coefficient C(n, k) as a field element (0 when k > n).
pub fn binomial(n: usize, k: usize, field: &FieldSpec) -> Scalar {
    if k > n {
        return field.zero();
    }
    let c = factorial_int(n) / (factorial_int(k) * factorial_int(n - k));
    field.from_bigint(&c)
}

fn factorial_int(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn reduce_bigint(n: &BigInt, q: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(q));
    debug_assert!(!r.is_negative());
    r.to_u64().expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every u64.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        FieldSpec::rational().parse_scalar(s).unwrap()
    }

    #[test]
    fn feasibility() {
        let rat = FieldSpec::rational();
        let f7 = FieldSpec::prime(7).unwrap();
        assert!(feasible(5, &rat));
        assert!(!feasible(7, &f7));
        assert!(feasible(6, &f7));
        assert!(!feasible(-1, &rat));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(q("1/2") + q("1/3"), q("5/6"));
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.from_i64(4) * f7.from_i64(2), f7.from_i64(1));
        assert_eq!(q("1").checked_div(&q("0")), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn mixed_fields_rejected() {
        let f7 = FieldSpec::prime(7).unwrap();
        let f11 = FieldSpec::prime(11).unwrap();
        assert!(matches!(
            f7.one().checked_add(&f11.one()),
            Err(FieldError::MixedFields(..))
        ));
        assert!(matches!(
            q("1").checked_mul(&f7.one()),
            Err(FieldError::MixedFields(..))
        ));
    }

    #[test]
    fn shifted_factorial_examples() {
        assert_eq!(shifted_factorial(&q("-2"), 2), q("2"));
        assert_eq!(shifted_factorial(&q("17/3"), 0), q("1"));
        assert_eq!(shifted_factorial(&q("-2"), 3), q("0"));
    }

    #[test]
    fn rational_text_form() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-2/4").to_string(), "-1/2");
        assert_eq!(q("1/-2").to_string(), "-1/2");
        assert_eq!(q("10/5").to_string(), "2");
    }

    #[test]
    fn prime_parsing_uses_reduction() {
        let f11 = FieldSpec::prime(11).unwrap();
        assert_eq!(f11.parse_scalar("1/2").unwrap(), f11.from_i64(6));
        assert_eq!(f11.parse_scalar("-1").unwrap().to_string(), "10");
        assert!(matches!(
            f11.parse_scalar("1/11"),
            Err(FieldError::NotReducible { .. })
        ));
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(
            "rational".parse::<FieldSpec>().unwrap(),
            FieldSpec::rational()
        );
        assert_eq!(
            "prime:13".parse::<FieldSpec>().unwrap(),
            FieldSpec::prime(13).unwrap()
        );
        assert!(matches!(
            "prime:9".parse::<FieldSpec>(),
            Err(FieldError::NotOddPrime(9))
        ));
        assert!(matches!(
            "prime:2".parse::<FieldSpec>(),
            Err(FieldError::NotOddPrime(2))
        ));
        assert!("real".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn inverse_and_powers() {
        let f13 = FieldSpec::prime(13).unwrap();
        for v in 1..13 {
            let x = f13.from_i64(v);
            assert!((&x * x.inv().unwrap()).is_one());
            assert_eq!(x.powi(-2).unwrap() * x.pow(2), f13.one());
        }
        assert_eq!(q("2/3").powi(-3).unwrap(), q("27/8"));
    }

    #[test]
    fn binomials() {
        let rat = FieldSpec::rational();
        assert_eq!(binomial(5, 2, &rat), rat.from_i64(10));
        assert_eq!(binomial(3, 4, &rat), rat.zero());
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(binomial(6, 3, &f7), f7.from_i64(20 % 7));
        assert_eq!(factorial(4, &rat), rat.from_i64(24));
    }
}
