//! Field elements.
//!
//! The default field is the exact rationals with arbitrary-precision
//! integers; the complex doubles are an opt-in lane for flows that need a
//! genuine matrix exponential. Mixed arithmetic promotes to complex. Exact
//! rationals are always kept in lowest terms with a positive denominator
//! (enforced by `num-rational` on construction).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{Signed, ToPrimitive, Zero as NumZero};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub enum Scalar {
    Rat(BigRational),
    Cpx(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    pub fn int(v: i64) -> Self {
        Scalar::Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn big(v: BigInt) -> Self {
        Scalar::Rat(BigRational::from_integer(v))
    }

    pub fn rat(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn re(v: f64) -> Self {
        Scalar::Cpx(Complex64::new(v, 0.0))
    }

    pub fn c(re: f64, im: f64) -> Self {
        Scalar::Cpx(Complex64::new(re, im))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Cpx(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        self == &Scalar::one() || matches!(self, Scalar::Cpx(z) if *z == Complex64::new(1.0, 0.0))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Rat(r) => Complex64::new(rational_to_f64(r), 0.0),
            Scalar::Cpx(z) => *z,
        }
    }

    /// Modulus as a double; exact values are converted lossily.
    pub fn modulus(&self) -> f64 {
        match self {
            Scalar::Rat(r) => rational_to_f64(r).abs(),
            Scalar::Cpx(z) => z.norm(),
        }
    }

    /// Magnitude test against an absolute tolerance. With `tol == 0` this is
    /// an exact zero test on the rational lane.
    pub fn within_tol(&self, tol: f64) -> bool {
        match self {
            Scalar::Rat(r) => {
                if tol == 0.0 {
                    r.is_zero()
                } else {
                    rational_to_f64(r).abs() <= tol
                }
            }
            Scalar::Cpx(z) => z.norm() <= tol,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Singular("inverse of zero".into()));
        }
        Ok(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Cpx(z) => Scalar::Cpx(z.inv()),
        })
    }

    pub fn pow_i(&self, e: i64) -> Result<Scalar> {
        if e < 0 {
            return self.inv()?.pow_i(-e);
        }
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn pow_u(&self, e: u32) -> Scalar {
        self.pow_i(e as i64).expect("nonnegative power")
    }

    /// Parse a rational from `"p/q"` or `"p"`.
    pub fn parse_rational(s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p = BigInt::from_str(num)
            .map_err(|_| Error::InvalidInput(format!("bad rational numerator {num:?}")))?;
        let q = BigInt::from_str(den)
            .map_err(|_| Error::InvalidInput(format!("bad rational denominator {den:?}")))?;
        if q.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Scalar::Rat(BigRational::new(p, q)))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Cpx(_) => None,
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Far outside the double range; the sign still matters.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Relative error between two scalars, for float-lane assertions.
pub fn rel_err(a: &Scalar, b: &Scalar) -> f64 {
    let (a, b) = (a.to_complex(), b.to_complex());
    let scale = a.norm().max(b.norm()).max(1e-300);
    (a - b).norm() / scale
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Cpx(z) => write!(f, "{}+{}i", z.re, z.im),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a $op b),
                    (a, b) => Scalar::Cpx(a.to_complex() $op b.to_complex()),
                }
            }
        }
        impl $trait for Scalar {
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
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero scalar");
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a / b),
            (a, b) => Scalar::Cpx(a.to_complex() / b.to_complex()),
        }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Cpx(z) => Scalar::Cpx(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

fn format_ratio(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Rat(r) => s.serialize_str(&format_ratio(r)),
            Scalar::Cpx(z) => {
                let mut st = s.serialize_struct("Scalar", 2)?;
                st.serialize_field("re", &z.re)?;
                st.serialize_field("im", &z.im)?;
                st.end()
            }
        }
    }
}

struct ScalarVisitor;

impl<'de> Visitor<'de> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational string \"p/q\", a number, or an object with re/im or rat fields")
    }

    fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Scalar, E> {
        Scalar::parse_rational(s).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::big(BigInt::from(v)))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Scalar, E> {
        // Whole numbers stay on the exact lane; anything else is a double.
        if v.fract() == 0.0 && v.abs() <= 9.0e15 {
            Ok(Scalar::int(v as i64))
        } else {
            Ok(Scalar::re(v))
        }
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Scalar, A::Error> {
        let mut re: Option<f64> = None;
        let mut im: Option<f64> = None;
        let mut rat: Option<String> = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "re" => re = Some(map.next_value()?),
                "im" => im = Some(map.next_value()?),
                "rat" => rat = Some(map.next_value()?),
                other => return Err(de::Error::unknown_field(other, &["re", "im", "rat"])),
            }
        }
        if let Some(r) = rat {
            return Scalar::parse_rational(&r).map_err(de::Error::custom);
        }
        Ok(Scalar::c(re.unwrap_or(0.0), im.unwrap_or(0.0)))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(ScalarVisitor)
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact_and_reduced() {
        let a = Scalar::rat(2, 4);
        let b = Scalar::rat(1, 3);
        assert_eq!(&a + &b, Scalar::rat(5, 6));
        assert_eq!(&a * &b, Scalar::rat(1, 6));
        assert_eq!(&a - &a, Scalar::zero());
        assert_eq!(Scalar::rat(-3, -6), Scalar::rat(1, 2));
    }

    #[test]
    fn mixed_arithmetic_promotes_to_complex() {
        let a = Scalar::rat(1, 2);
        let b = Scalar::c(0.5, 1.0);
        match &a + &b {
            Scalar::Cpx(z) => {
                assert_eq!(z.re, 1.0);
                assert_eq!(z.im, 1.0);
            }
            _ => panic!("expected complex"),
        }
    }

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["3", "-7/2", "0", "10/4"] {
            let v = Scalar::parse_rational(s).unwrap();
            let back = Scalar::parse_rational(&format!("{v}")).unwrap();
            assert_eq!(v, back);
        }
        assert!(Scalar::parse_rational("1/0").is_err());
    }

    #[test]
    fn serde_accepts_all_cell_forms() {
        let r: Scalar = serde_json::from_str("\"3/4\"").unwrap();
        assert_eq!(r, Scalar::rat(3, 4));
        let i: Scalar = serde_json::from_str("5").unwrap();
        assert_eq!(i, Scalar::int(5));
        let z: Scalar = serde_json::from_str("{\"re\":1.5,\"im\":-2.0}").unwrap();
        assert_eq!(z, Scalar::c(1.5, -2.0));
        let tagged: Scalar = serde_json::from_str("{\"rat\":\"-2/6\"}").unwrap();
        assert_eq!(tagged, Scalar::rat(-1, 3));
        assert_eq!(serde_json::to_string(&Scalar::rat(3, 4)).unwrap(), "\"3/4\"");
    }

    #[test]
    fn powers_and_inverses() {
        assert_eq!(Scalar::rat(2, 3).pow_i(-2).unwrap(), Scalar::rat(9, 4));
        assert!(Scalar::zero().inv().is_err());
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }
}
