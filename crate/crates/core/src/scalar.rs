//! Exact scalars: rationals, Gaussian rationals `a + b·i` and the Gaussian
//! integers used internally by fraction-free elimination.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary precision rational in canonical form (positive denominator, reduced).
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// An element of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    re: Rational,
    im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::new(rat(n), Rational::zero())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational::new(rat(re), rat(im))
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational::new(re, Rational::zero())
    }

    pub fn zero() -> Self {
        GaussianRational::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational::from_ints(0, 1)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    /// |z|² = re² + im².
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        GaussianRational::new(-self.im.clone(), self.re.clone())
    }

    /// `i^k` for any non-negative `k`.
    pub fn i_pow(k: usize) -> Self {
        match k % 4 {
            0 => GaussianRational::from_ints(1, 0),
            1 => GaussianRational::from_ints(0, 1),
            2 => GaussianRational::from_ints(-1, 0),
            _ => GaussianRational::from_ints(0, -1),
        }
    }

    /// Least common multiple of the denominators of both parts.
    pub(crate) fn denom_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                let f: fn(&GaussianRational, &GaussianRational) -> GaussianRational = $body;
                f(self, rhs)
            }
        }
        impl $trait<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianRational::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| GaussianRational::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| GaussianRational::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));
forward_binop!(Div, div, |a, b| {
    let inv = b.inv().expect("division by zero in ℚ(i)");
    a * &inv
});

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, rhs: GaussianRational) {
        *self += &rhs;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl SubAssign for GaussianRational {
    fn sub_assign(&mut self, rhs: GaussianRational) {
        *self -= &rhs;
    }
}

impl std::iter::Sum for GaussianRational {
    fn sum<I: Iterator<Item = GaussianRational>>(iter: I) -> Self {
        iter.fold(GaussianRational::zero(), |acc, x| acc + x)
    }
}

// Text form: "a/b+c/d*i", either term optional. "i", "-i", "3*i", "1/2-i" are
// all accepted; whitespace is ignored.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let mag = self.im.abs();
        let imag = if mag.is_one() {
            "i".to_string()
        } else {
            format!("{mag}*i")
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{imag}")
            } else {
                write!(f, "{imag}")
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}", self.re, sign, imag)
        }
    }
}

fn parse_rational(text: &str, whole: &str) -> Result<Rational, Error> {
    let bad = |reason: &str| Error::ParseScalar {
        input: whole.to_string(),
        reason: reason.to_string(),
    };
    let t = text.strip_prefix('+').unwrap_or(text);
    if t.is_empty() {
        return Err(bad("empty number"));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (t, None),
    };
    let digits_ok = |s: &str| {
        let s = s.strip_prefix('-').unwrap_or(s);
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num) {
        return Err(bad("malformed numerator"));
    }
    let n = BigInt::from_str(num).map_err(|_| bad("malformed numerator"))?;
    let d = match den {
        Some(d) => {
            if !d.bytes().all(|b| b.is_ascii_digit()) || d.is_empty() {
                return Err(bad("malformed denominator"));
            }
            BigInt::from_str(d).map_err(|_| bad("malformed denominator"))?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self, Error> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::ParseScalar {
                input: input.to_string(),
                reason: "empty scalar".into(),
            });
        }
        let Some(head) = s.strip_suffix('i') else {
            return Ok(GaussianRational::from_rational(parse_rational(&s, input)?));
        };
        // Split at the last sign that is not the leading character.
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (real_text, imag_text) = match split {
            Some(k) => (&head[..k], &head[k..]),
            None => ("", head),
        };
        let starred = imag_text.strip_suffix('*');
        let coeff = starred.unwrap_or(imag_text);
        let im = match coeff {
            "" | "+" | "-" if starred.is_some() => {
                return Err(Error::ParseScalar {
                    input: input.to_string(),
                    reason: "missing coefficient before '*i'".into(),
                })
            }
            "" | "+" => rat(1),
            "-" => rat(-1),
            c => parse_rational(c, input)?,
        };
        let re = if real_text.is_empty() {
            Rational::zero()
        } else {
            parse_rational(real_text, input)?
        };
        Ok(GaussianRational::new(re, im))
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = GaussianRational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a scalar string like \"1/2-3*i\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<GaussianRational, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<GaussianRational, E> {
                Ok(GaussianRational::from_int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<GaussianRational, E> {
                Ok(GaussianRational::from_rational(Rational::from_integer(
                    BigInt::from(v),
                )))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

/// Element of ℤ[i]; only used inside fraction-free elimination.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct GaussianInteger {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInteger {
    pub fn one() -> Self {
        GaussianInteger {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        GaussianInteger {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Clears denominators: `scale` must be a multiple of every denominator of `z`.
    pub fn scaled_from(z: &GaussianRational, scale: &BigInt) -> Self {
        let re = z.re() * Rational::from_integer(scale.clone());
        let im = z.im() * Rational::from_integer(scale.clone());
        debug_assert!(re.is_integer() && im.is_integer());
        GaussianInteger {
            re: re.to_integer(),
            im: im.to_integer(),
        }
    }

    pub fn to_rational(&self) -> GaussianRational {
        GaussianRational::new(
            Rational::from_integer(self.re.clone()),
            Rational::from_integer(self.im.clone()),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussianInteger {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussianInteger {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    /// Exact division; panics if `o` does not divide `self` in ℤ[i].
    pub fn exact_div(&self, o: &Self) -> Self {
        let n = &o.re * &o.re + &o.im * &o.im;
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        let (qr, rr) = re.div_rem(&n);
        let (qi, ri) = im.div_rem(&n);
        assert!(
            rr.is_zero() && ri.is_zero(),
            "fraction-free elimination produced an inexact division"
        );
        GaussianInteger { re: qr, im: qi }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_all_term_shapes() {
        assert_eq!(g("3"), GaussianRational::from_int(3));
        assert_eq!(g("-3/4"), GaussianRational::from_rational(frac(-3, 4)));
        assert_eq!(g("i"), GaussianRational::i());
        assert_eq!(g("-i"), -GaussianRational::i());
        assert_eq!(g("2*i"), GaussianRational::from_ints(0, 2));
        assert_eq!(g("1/2*i"), GaussianRational::new(rat(0), frac(1, 2)));
        assert_eq!(g("1+i"), GaussianRational::from_ints(1, 1));
        assert_eq!(
            g("1/2-1/3*i"),
            GaussianRational::new(frac(1, 2), frac(-1, 3))
        );
        assert_eq!(g(" -2 + 5 * i "), GaussianRational::from_ints(-2, 5));
        assert_eq!(g("+4"), GaussianRational::from_int(4));
        assert_eq!(g("6/4"), GaussianRational::from_rational(frac(3, 2)));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "x", "1//2", "1+2", "i*i", "1/2/3", "--1", "1+*i"] {
            assert!(bad.parse::<GaussianRational>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(GaussianRational::zero().to_string(), "0");
        assert_eq!(g("-i").to_string(), "-i");
        assert_eq!(g("2/4-6/4*i").to_string(), "1/2-3/2*i");
        assert_eq!(g("3*i").to_string(), "3*i");
    }

    #[test]
    fn field_identities() {
        let z = g("1/2+3*i");
        let w = g("-2+1/5*i");
        assert_eq!((&z * &w).conj(), z.conj() * w.conj());
        assert_eq!(z.conj().conj(), z);
        assert_eq!(&(&z / &w) * &w, z);
        assert!(GaussianRational::zero().inv().is_none());
        assert_eq!(GaussianRational::i_pow(2), GaussianRational::from_int(-1));
    }

    #[test]
    fn gaussian_integer_division() {
        let a = GaussianInteger {
            re: BigInt::from(3),
            im: BigInt::from(4),
        };
        let b = GaussianInteger {
            re: BigInt::from(1),
            im: BigInt::from(2),
        };
        let p = a.mul(&b);
        assert_eq!(p.exact_div(&b), a);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn scalar() -> impl Strategy<Value = GaussianRational> {
            (-50i64..=50, 1i64..=12, -50i64..=50, 1i64..=12)
                .prop_map(|(a, b, c, d)| GaussianRational::new(frac(a, b), frac(c, d)))
        }

        proptest! {
            #[test]
            fn display_parse_round_trip(z in scalar()) {
                prop_assert_eq!(z.to_string().parse::<GaussianRational>().unwrap(), z);
            }

            #[test]
            fn conjugation(z in scalar(), w in scalar()) {
                prop_assert_eq!(z.conj().conj(), z.clone());
                prop_assert_eq!((&z * &w).conj(), z.conj() * w.conj());
                prop_assert!((&z * &z.conj()).is_real());
                prop_assert_eq!(z.is_real(), z.im().is_zero());
            }

            #[test]
            fn json_round_trip(z in scalar()) {
                let text = serde_json::to_string(&z).unwrap();
                prop_assert_eq!(serde_json::from_str::<GaussianRational>(&text).unwrap(), z);
            }
        }
    }
}
