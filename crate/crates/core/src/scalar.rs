//! Exact numbers: arbitrary precision rationals and elements `a + b·√d` of a
//! single real quadratic field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(int(p), int(q))
}

pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

/// Canonical `p/q` text (lowest terms, `q > 0`, integers keep `/1`).
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p = Int::from_str(p).map_err(|_| bad())?;
    let q = Int::from_str(q).map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

/// Serde adapter writing a rational as a `"p/q"` string.
pub mod rat_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod rat_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rat_to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter writing big integers as JSON strings of decimal digits.
pub mod int_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Int>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| Int::from_str(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Splits `n > 0` as `k²·d` with `d` squarefree.
pub fn square_free_split(n: &Int) -> (Int, Int) {
    assert!(n.is_positive(), "square_free_split needs a positive integer");
    let mut rest = n.clone();
    let mut k = Int::one();
    let mut d = Int::one();
    let limit = rest.cbrt() + 1u32;
    let mut p = int(2);
    while p <= limit && p.clone() * &p <= rest {
        let mut e = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= &p;
        }
        if e % 2 == 1 {
            d *= &p;
        }
        p += if p == int(2) { 1 } else { 2 };
    }
    // What remains has no prime factor up to the cube root of n, so it is
    // 1, a prime, a product of two distinct primes or a prime square.
    let s = rest.sqrt();
    if &s * &s == rest {
        k *= s;
    } else {
        d *= rest;
    }
    (k, d)
}

pub fn is_square_free(d: &Int) -> bool {
    if d.is_zero() {
        return true;
    }
    square_free_split(d).0.is_one()
}

/// `a + b·√d` with `d` a nonnegative squarefree integer.
///
/// Canonical form: if the value is rational then `b = 0` and `d = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    a: Rat,
    b: Rat,
    d: Int,
}

impl ExactScalar {
    pub fn new(a: Rat, b: Rat, d: Int) -> Result<Self> {
        if d.is_negative() || !is_square_free(&d) {
            return Err(Error::NotSquarefree(d.to_string()));
        }
        Ok(Self::canonical(a, b, d))
    }

    fn canonical(a: Rat, b: Rat, d: Int) -> Self {
        if b.is_zero() || d.is_zero() {
            return Self {
                a,
                b: Rat::zero(),
                d: Int::zero(),
            };
        }
        if d.is_one() {
            return Self {
                a: a + b,
                b: Rat::zero(),
                d: Int::zero(),
            };
        }
        Self { a, b, d }
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(a: Rat) -> Self {
        Self {
            a,
            b: Rat::zero(),
            d: Int::zero(),
        }
    }

    pub fn from_int(v: &Int) -> Self {
        Self::from_rat(rat_int(v))
    }

    /// Exact square root of a positive integer.
    pub fn sqrt_int(n: &Int) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        let (k, d) = square_free_split(n);
        Self::canonical(Rat::zero(), rat_int(&k), d)
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn d(&self) -> &Int {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.a)
    }

    fn common_d(&self, other: &Self) -> Result<Int> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(Int::zero()),
            (false, true) => Ok(self.d.clone()),
            (true, false) => Ok(other.d.clone()),
            (false, false) if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::MixedRadicals(
                self.d.to_string(),
                other.d.to_string(),
            )),
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        let d = self.common_d(o)?;
        Ok(Self::canonical(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let d = self.common_d(o)?;
        let dr = rat_int(&d);
        let a = &self.a * &o.a + &self.b * &o.b * dr;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Self::canonical(a, b, d))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        self.common_d(o)?;
        let norm = o.norm();
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let conj = Self::canonical(o.a.clone(), -o.b.clone(), o.d.clone());
        let num = self.try_mul(&conj)?;
        Ok(Self::canonical(num.a / &norm, num.b / &norm, num.d))
    }

    /// Field norm `a² − b²·d`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * rat_int(&self.d)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self::canonical(&self.a * k, &self.b * k, self.d.clone())
    }

    pub fn square(&self) -> Self {
        self.try_mul(self).expect("same field")
    }

    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: the larger of a² and b²d wins.
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * rat_int(&self.d))) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Total order; elements of different fields are compared through the
    /// sign of their difference when that is defined.
    pub fn try_cmp(&self, o: &Self) -> Result<Ordering> {
        Ok(self.try_sub(o)?.signum().cmp(&0))
    }

    /// Floating point approximation, only for rendering.
    pub fn to_f64(&self) -> f64 {
        let f = |r: &Rat| {
            let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
            n / d
        };
        let d: f64 = self.d.to_string().parse().unwrap_or(0.0);
        f(&self.a) + f(&self.b) * d.sqrt()
    }
}

fn sign_of(r: &Rat) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl From<Rat> for ExactScalar {
    fn from(r: Rat) -> Self {
        Self::from_rat(r)
    }
}

impl From<Int> for ExactScalar {
    fn from(v: Int) -> Self {
        Self::from_rat(Rat::from_integer(v))
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_rat(Rat::from_integer(int(v)))
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::canonical(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

// The operator forms panic on mixed radicals; inside the library every
// polygon lives in a single field, so that case is a bug.
macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: &ExactScalar) -> ExactScalar {
                self.$f(o).expect("exact scalar arithmetic")
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: ExactScalar) -> ExactScalar {
                (&self).$f(&o).expect("exact scalar arithmetic")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.try_cmp(o).ok()
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", rat_to_string(&self.a))
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", rat_to_string(&self.b), self.d)
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                rat_to_string(&self.a),
                rat_to_string(&self.b),
                self.d
            )
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    a: String,
    b: String,
    d: serde_json::Value,
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = match u64::try_from(&self.d) {
            Ok(v) => serde_json::Value::from(v),
            Err(_) => serde_json::Value::from(self.d.to_string()),
        };
        ScalarRepr {
            a: rat_to_string(&self.a),
            b: rat_to_string(&self.b),
            d,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ScalarRepr::deserialize(de)?;
        let a = parse_rat(&r.a).map_err(D::Error::custom)?;
        let b = parse_rat(&r.b).map_err(D::Error::custom)?;
        let d = match &r.d {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(Int::from)
                .ok_or_else(|| D::Error::custom("d must be a nonnegative integer"))?,
            serde_json::Value::String(s) => Int::from_str(s).map_err(D::Error::custom)?,
            _ => return Err(D::Error::custom("d must be an integer")),
        };
        ExactScalar::new(a, b, d).map_err(D::Error::custom)
    }
}

/// A point of the plane with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: ExactScalar,
    pub y: ExactScalar,
}

impl Point {
    pub fn new(x: impl Into<ExactScalar>, y: impl Into<ExactScalar>) -> Self {
        Self {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn origin() -> Self {
        Self::new(ExactScalar::zero(), ExactScalar::zero())
    }

    pub fn rat(x: Rat, y: Rat) -> Self {
        Self::new(x, y)
    }

    pub fn scale(&self, k: &ExactScalar) -> Self {
        Self {
            x: &self.x * k,
            y: &self.y * k,
        }
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point {
            x: &self.x - &o.x,
            y: &self.y - &o.y,
        }
    }

    /// Lexicographic comparison by `(x, y)`.
    pub fn lex_cmp(&self, o: &Point) -> Ordering {
        self.x
            .partial_cmp(&o.x)
            .expect("same field")
            .then_with(|| self.y.partial_cmp(&o.y).expect("same field"))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Cross product of `b − a` and `c − a`.
pub fn cross(a: &Point, b: &Point, c: &Point) -> ExactScalar {
    let u = b.sub(a);
    let v = c.sub(a);
    &u.x * &v.y - &u.y * &v.x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_square_part() {
        assert_eq!(square_free_split(&int(180)), (int(6), int(5)));
        assert_eq!(square_free_split(&int(303)), (int(1), int(303)));
        assert_eq!(square_free_split(&int(49)), (int(7), int(1)));
        assert_eq!(square_free_split(&int(1)), (int(1), int(1)));
        let big = int(1_000_003) * int(1_000_003) * int(6);
        assert_eq!(square_free_split(&big), (int(1_000_003), int(6)));
    }

    #[test]
    fn sqrt_is_exact() {
        let s = ExactScalar::sqrt_int(&int(180));
        assert_eq!(s.square(), ExactScalar::from(180));
        assert_eq!(ExactScalar::sqrt_int(&int(16)), ExactScalar::from(4));
        assert!(!s.is_rational());
    }

    #[test]
    fn ordering_with_radicals() {
        let r = ExactScalar::sqrt_int(&int(303));
        assert!(r < ExactScalar::from(18));
        assert!(r > ExactScalar::from(17));
        let x = ExactScalar::new(rat(18, 1), rat(-1, 1), int(303)).unwrap();
        assert_eq!(x.signum(), 1);
        assert_eq!((-x).signum(), -1);
    }

    #[test]
    fn division_rationalises() {
        let r = ExactScalar::sqrt_int(&int(2));
        let one_plus = &ExactScalar::one() + &r;
        let q = &ExactScalar::one() / &one_plus;
        // 1/(1+√2) = √2 − 1
        assert_eq!(q, &r - &ExactScalar::one());
    }

    #[test]
    fn mixed_radicals_rejected() {
        let a = ExactScalar::sqrt_int(&int(2));
        let b = ExactScalar::sqrt_int(&int(3));
        assert_eq!(a.try_add(&b).unwrap_err().code(), "MixedRadicals");
    }

    #[test]
    fn rejects_non_squarefree_radicand() {
        assert!(ExactScalar::new(rat(1, 1), rat(1, 1), int(12)).is_err());
    }

    #[test]
    fn json_shape() {
        let s = ExactScalar::new(rat(1, 2), rat(-3, 4), int(5)).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"a":"1/2","b":"-3/4","d":5}"#);
        let back: ExactScalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        let i = serde_json::to_string(&ExactScalar::from(18)).unwrap();
        assert_eq!(i, r#"{"a":"18/1","b":"0/1","d":0}"#);
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rat("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-7").unwrap(), rat(-7, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(rat_to_string(&rat(-6, -4)), "3/2");
    }
}
