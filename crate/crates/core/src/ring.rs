//! Coefficient rings: GF(2), the rationals, and the group algebra
//! Q[zeta]/(zeta^m - 1) used for m-th root of unity scalings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Rational from a JSON string "p/q" or an integer literal.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(rat)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingKind {
    Gf2,
    Rational,
    /// Q[zeta]/(zeta^m - 1).
    Cyclotomic(usize),
}

impl RingKind {
    pub fn zero(self) -> RingElem {
        self.from_i64(0)
    }

    pub fn one(self) -> RingElem {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> RingElem {
        match self {
            RingKind::Gf2 => RingElem::Gf2(v.rem_euclid(2) == 1),
            RingKind::Rational => RingElem::Rational(rat(v)),
            RingKind::Cyclotomic(m) => RingElem::Cyclotomic(Cyclotomic::constant(m, rat(v))),
        }
    }

    /// Image of a rational number. GF(2) needs an odd denominator.
    pub fn from_rational(self, q: &Rational) -> Result<RingElem> {
        match self {
            RingKind::Gf2 => {
                if q.denom().is_even() {
                    return Err(Error::NotRepresentable(q.to_string(), self.to_string()));
                }
                Ok(RingElem::Gf2(q.numer().is_odd()))
            }
            RingKind::Rational => Ok(RingElem::Rational(q.clone())),
            RingKind::Cyclotomic(m) => Ok(RingElem::Cyclotomic(Cyclotomic::constant(m, q.clone()))),
        }
    }

    pub fn to_json(self) -> Value {
        match self {
            RingKind::Gf2 => json!("gf2"),
            RingKind::Rational => json!("q"),
            RingKind::Cyclotomic(m) => json!({ "cyclotomic": m }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => s.parse(),
            Value::Object(o) => o
                .get("cyclotomic")
                .and_then(Value::as_u64)
                .filter(|&m| m >= 1)
                .map(|m| RingKind::Cyclotomic(m as usize))
                .ok_or_else(|| Error::Parse(format!("bad ring object {v}"))),
            _ => Err(Error::Parse(format!("bad ring {v}"))),
        }
    }
}

impl FromStr for RingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gf2" | "GF2" => Ok(RingKind::Gf2),
            "q" | "Q" | "rational" => Ok(RingKind::Rational),
            _ => {
                let m = s
                    .strip_prefix("cyclotomic:")
                    .and_then(|m| m.parse::<usize>().ok())
                    .filter(|&m| m >= 1)
                    .ok_or_else(|| Error::Parse(format!("unknown ring {s:?}")))?;
                Ok(RingKind::Cyclotomic(m))
            }
        }
    }
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Gf2 => write!(f, "gf2"),
            RingKind::Rational => write!(f, "q"),
            RingKind::Cyclotomic(m) => write!(f, "cyclotomic:{m}"),
        }
    }
}

/// Element of Q[zeta]/(zeta^m - 1), stored as coefficients of 1, zeta, ..., zeta^(m-1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("cyclotomic modulus must be >= 1".into()));
        }
        Ok(Cyclotomic { coeffs })
    }

    pub fn constant(m: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); m.max(1)];
        coeffs[0] = c;
        Cyclotomic { coeffs }
    }

    /// zeta^e.
    pub fn root_of_unity(m: usize, e: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); m.max(1)];
        coeffs[e % m.max(1)] = Rational::one();
        Cyclotomic { coeffs }
    }

    pub fn modulus(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn mul(&self, other: &Self) -> Self {
        let m = self.modulus();
        let mut out = vec![Rational::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[(i + j) % m] += a * b;
                }
            }
        }
        Cyclotomic { coeffs: out }
    }

    /// Value under zeta -> exp(2 pi i / m).
    pub fn to_complex(&self) -> Complex64 {
        let m = self.modulus() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| Complex64::from_polar(rational_to_f64(c), std::f64::consts::TAU * k as f64 / m))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElem {
    Gf2(bool),
    Rational(Rational),
    Cyclotomic(Cyclotomic),
}

impl RingElem {
    pub fn kind(&self) -> RingKind {
        match self {
            RingElem::Gf2(_) => RingKind::Gf2,
            RingElem::Rational(_) => RingKind::Rational,
            RingElem::Cyclotomic(c) => RingKind::Cyclotomic(c.modulus()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElem::Gf2(b) => !b,
            RingElem::Rational(q) => q.is_zero(),
            RingElem::Cyclotomic(c) => c.coeffs.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.kind().one()
    }

    fn mismatch(&self, other: &Self) -> Error {
        Error::IncompatibleRing(self.kind().to_string(), other.kind().to_string())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (RingElem::Gf2(a), RingElem::Gf2(b)) => Ok(RingElem::Gf2(a ^ b)),
            (RingElem::Rational(a), RingElem::Rational(b)) => Ok(RingElem::Rational(a + b)),
            (RingElem::Cyclotomic(a), RingElem::Cyclotomic(b)) if a.modulus() == b.modulus() => {
                let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
                Ok(RingElem::Cyclotomic(Cyclotomic { coeffs }))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (RingElem::Gf2(a), RingElem::Gf2(b)) => Ok(RingElem::Gf2(a & b)),
            (RingElem::Rational(a), RingElem::Rational(b)) => Ok(RingElem::Rational(a * b)),
            (RingElem::Cyclotomic(a), RingElem::Cyclotomic(b)) if a.modulus() == b.modulus() => {
                Ok(RingElem::Cyclotomic(a.mul(b)))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            RingElem::Gf2(b) => RingElem::Gf2(*b),
            RingElem::Rational(q) => RingElem::Rational(-q),
            RingElem::Cyclotomic(c) => RingElem::Cyclotomic(Cyclotomic {
                coeffs: c.coeffs.iter().map(|x| -x).collect(),
            }),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.kind().one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base).expect("same ring");
            }
            base = base.checked_mul(&base).expect("same ring");
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse where one exists in the field cases.
    pub fn inverse(&self) -> Result<Self> {
        match self {
            RingElem::Gf2(true) => Ok(RingElem::Gf2(true)),
            RingElem::Rational(q) if !q.is_zero() => Ok(RingElem::Rational(q.recip())),
            _ => Err(Error::Precondition(format!("{self} is not invertible here"))),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RingElem::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            RingElem::Gf2(b) => Complex64::new(f64::from(u8::from(*b)), 0.0),
            RingElem::Rational(q) => Complex64::new(rational_to_f64(q), 0.0),
            RingElem::Cyclotomic(c) => c.to_complex(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            RingElem::Gf2(b) => json!(u8::from(*b)),
            RingElem::Rational(q) => json!(q.to_string()),
            RingElem::Cyclotomic(c) => json!({
                "m": c.modulus(),
                "coeffs": c.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(kind: RingKind, v: &Value) -> Result<Self> {
        match kind {
            RingKind::Gf2 => match v.as_u64() {
                Some(b @ (0 | 1)) => Ok(RingElem::Gf2(b == 1)),
                _ => kind.from_rational(&rational_from_json(v)?),
            },
            RingKind::Rational => Ok(RingElem::Rational(rational_from_json(v)?)),
            RingKind::Cyclotomic(m) => match v {
                Value::Object(o) => {
                    let coeffs = o
                        .get("coeffs")
                        .and_then(Value::as_array)
                        .ok_or_else(|| Error::Parse(format!("bad cyclotomic element {v}")))?
                        .iter()
                        .map(rational_from_json)
                        .collect::<Result<Vec<_>>>()?;
                    if coeffs.len() != m {
                        return Err(Error::LengthMismatch { expected: m, got: coeffs.len() });
                    }
                    Ok(RingElem::Cyclotomic(Cyclotomic { coeffs }))
                }
                _ => kind.from_rational(&rational_from_json(v)?),
            },
        }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElem::Gf2(b) => write!(f, "{}", u8::from(*b)),
            RingElem::Rational(q) => write!(f, "{q}"),
            RingElem::Cyclotomic(c) => {
                let mut first = true;
                for (k, q) in c.coeffs.iter().enumerate().filter(|(_, q)| !q.is_zero()) {
                    if !first {
                        write!(f, "{}", if q.is_negative() { " - " } else { " + " })?;
                    } else if q.is_negative() {
                        write!(f, "-")?;
                    }
                    first = false;
                    let a = q.abs();
                    match k {
                        0 => write!(f, "{a}")?,
                        _ if a.is_one() => write!(f, "z^{k}")?,
                        _ => write!(f, "{a}*z^{k}")?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

/// Does `a^m` equal one?
pub fn pow_m_is_unit(a: &RingElem, m: u32) -> bool {
    a.pow(m).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(coeffs: &[i64]) -> RingElem {
        RingElem::Cyclotomic(Cyclotomic::new(coeffs.iter().map(|&c| rat(c)).collect()).unwrap())
    }

    #[test]
    fn zeta_is_an_m_th_root() {
        for m in 1..8 {
            for e in 0..m {
                let z = RingElem::Cyclotomic(Cyclotomic::root_of_unity(m, e));
                assert!(pow_m_is_unit(&z, m as u32));
            }
        }
        let z = RingElem::Cyclotomic(Cyclotomic::root_of_unity(4, 1));
        assert!(!pow_m_is_unit(&z, 2));
    }

    #[test]
    fn minus_one_squares_to_one() {
        assert!(pow_m_is_unit(&RingKind::Rational.from_i64(-1), 2));
        assert!(!pow_m_is_unit(&RingKind::Rational.from_i64(2), 2));
        assert!(pow_m_is_unit(&RingElem::Gf2(true), 2));
        assert!(!pow_m_is_unit(&RingElem::Gf2(false), 5));
    }

    #[test]
    fn mixing_rings_is_an_error() {
        let a = RingKind::Gf2.one();
        let b = RingKind::Rational.one();
        assert!(matches!(a.checked_add(&b), Err(Error::IncompatibleRing(..))));
        let c3 = RingKind::Cyclotomic(3).one();
        let c4 = RingKind::Cyclotomic(4).one();
        assert!(c3.checked_mul(&c4).is_err());
    }

    #[test]
    fn gf2_image_needs_odd_denominator() {
        assert_eq!(RingKind::Gf2.from_rational(&ratio(3, 5)).unwrap(), RingElem::Gf2(true));
        assert!(RingKind::Gf2.from_rational(&ratio(1, 2)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let samples = [
            RingElem::Gf2(true),
            RingElem::Rational(ratio(-7, 12)),
            cyc(&[1, 0, -3, 2]),
        ];
        for s in samples {
            let back = RingElem::from_json(s.kind(), &s.to_json()).unwrap();
            assert_eq!(back, s);
        }
        assert_eq!(RingElem::Rational(ratio(5, 6)).to_json(), json!("5/6"));
        for k in [RingKind::Gf2, RingKind::Rational, RingKind::Cyclotomic(5)] {
            assert_eq!(RingKind::from_json(&k.to_json()).unwrap(), k);
        }
    }

    #[test]
    fn complex_image_of_zeta() {
        let i = RingElem::Cyclotomic(Cyclotomic::root_of_unity(4, 1)).to_complex();
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn cyclotomic_mul_is_commutative_and_distributes(
            a in proptest::collection::vec(-5i64..5, 4),
            b in proptest::collection::vec(-5i64..5, 4),
            c in proptest::collection::vec(-5i64..5, 4),
        ) {
            let (a, b, c) = (cyc(&a), cyc(&b), cyc(&c));
            prop_assert_eq!(a.checked_mul(&b).unwrap(), b.checked_mul(&a).unwrap());
            let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
            let rhs = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rationals_stay_reduced(p in -1000i64..1000, q in 1i64..1000) {
            let x = ratio(p, q);
            let g = num_integer::Integer::gcd(x.numer(), x.denom());
            prop_assert!(g.is_one() || x.is_zero());
        }
    }
}
