//! Exact scalars over the rationals, odd prime fields GF(p) and their
//! quadratic extensions GF(p²).
//!
//! Every scalar carries its field, so values from different fields never
//! mix silently: arithmetic between scalars of different fields panics.
//! Conversions between fields go through [`Scalar::reduce`] and
//! [`Scalar::lift`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod finite;

pub use finite::Gf;

pub type Rational = BigRational;

/// Largest prime accepted for a field. Keeps products of two residues
/// inside `u128` comfortably and the enumeration kernels meaningful.
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime { p: u64 },
    /// GF(p²) = GF(p)(s) with s² = `nonresidue`, the least quadratic
    /// nonresidue mod p.
    Ext { p: u64, nonresidue: u64 },
}

pub(crate) fn is_prime(n: u64) -> bool {
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

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(mod_pow(a, p - 2, p))
    }
}

/// Least quadratic nonresidue modulo the odd prime `p`.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&d| mod_pow(d, (p - 1) / 2, p) == p - 1)
        .expect("odd primes have nonresidues")
}

impl Field {
    pub fn rational() -> Field {
        Field::Rational
    }

    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::InvalidField(
                "characteristic 2 is not supported".into(),
            ));
        }
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        Ok(Field::Prime { p })
    }

    pub fn ext(p: u64) -> Result<Field> {
        Field::prime(p)?;
        Ok(Field::Ext {
            p,
            nonresidue: least_nonresidue(p),
        })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime { p } | Field::Ext { p, .. } => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Field::Rational)
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime { p } => Some(*p),
            Field::Ext { p, .. } => Some(p * p),
        }
    }

    /// The quadratic extension of a prime field (identity on extensions).
    pub fn extension(&self) -> Result<Field> {
        match self {
            Field::Rational => Err(Error::InvalidField(
                "the rationals have no canonical quadratic extension here".into(),
            )),
            Field::Prime { p } => Field::ext(*p),
            Field::Ext { .. } => Ok(self.clone()),
        }
    }

    /// Banner shown by downstream reports when working in characteristic 3.
    pub fn warning(&self) -> Option<&'static str> {
        (self.characteristic() == 3).then_some(
            "warning: characteristic 3; the linearized Jordan identity and the \
             identity itself need not agree here",
        )
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(Rational::from_integer(BigInt::from(n))),
            Field::Prime { p } => Scalar::Prime(PrimeFieldElement::new(*p, n)),
            Field::Ext { p, nonresidue } => Scalar::Ext(QuadExtElement {
                p: *p,
                d: *nonresidue,
                a: PrimeFieldElement::new(*p, n).value,
                b: 0,
            }),
        }
    }

    pub fn from_rational(&self, r: &Rational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Rational(r.clone())),
            Field::Prime { p } | Field::Ext { p, .. } => {
                let p = *p;
                let num = residue(r.numer(), p);
                let den = residue(r.denom(), p);
                let inv = inv_mod(den, p)
                    .ok_or_else(|| Error::NotReducible(r.to_string(), self.to_string()))?;
                let v = mul_mod(num, inv, p);
                Ok(match self {
                    Field::Prime { .. } => Scalar::Prime(PrimeFieldElement { p, value: v }),
                    Field::Ext { nonresidue, .. } => Scalar::Ext(QuadExtElement {
                        p,
                        d: *nonresidue,
                        a: v,
                        b: 0,
                    }),
                    Field::Rational => unreachable!(),
                })
            }
        }
    }

    /// All elements of a finite field in canonical (index) order.
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        match self {
            Field::Rational => Err(Error::NeedsFiniteField(self.to_string())),
            Field::Prime { p } => Ok((0..*p)
                .map(|v| Scalar::Prime(PrimeFieldElement { p: *p, value: v }))
                .collect()),
            Field::Ext { p, nonresidue } => {
                let mut out = Vec::with_capacity((p * p) as usize);
                for b in 0..*p {
                    for a in 0..*p {
                        out.push(Scalar::Ext(QuadExtElement {
                            p: *p,
                            d: *nonresidue,
                            a,
                            b,
                        }));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Parses a scalar in this field's textual form. Prime and extension
    /// fields also accept rational literals, which are reduced.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let fail = |reason: &str| Error::ScalarParse {
            input: text.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(fail("empty"));
        }
        match self {
            Field::Rational | Field::Prime { .. } => {
                if s.contains('s') {
                    return Err(fail("adjoined root s only exists in extension fields"));
                }
                let r = parse_rational(&s).ok_or_else(|| fail("expected a/b or an integer"))?;
                self.from_rational(&r)
            }
            Field::Ext { p, nonresidue } => {
                let (a_part, b_part) = split_ext(&s).ok_or_else(|| fail("expected a+b*s"))?;
                let base = Field::Prime { p: *p };
                let a = match a_part {
                    Some(t) => base.parse(t)?,
                    None => base.zero(),
                };
                let b = match b_part {
                    Some((neg, t)) => {
                        let v = if t.is_empty() { base.one() } else { base.parse(t)? };
                        if neg {
                            -v
                        } else {
                            v
                        }
                    }
                    None => base.zero(),
                };
                Ok(Scalar::Ext(QuadExtElement {
                    p: *p,
                    d: *nonresidue,
                    a: a.prime_value(),
                    b: b.prime_value(),
                }))
            }
        }
    }
}

fn residue(n: &BigInt, p: u64) -> u64 {
    let m = n.mod_floor(&BigInt::from(p));
    m.to_u64().expect("residue fits")
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let num: BigInt = num.strip_prefix('+').unwrap_or(num).parse().ok()?;
    let den: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if den.is_zero() || den.is_negative() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Splits "a+b*s", "a-b*s", "b*s", "s", "a" into the constant and root parts.
#[allow(clippy::type_complexity)]
fn split_ext(s: &str) -> Option<(Option<&str>, Option<(bool, &str)>)> {
    if !s.contains('s') {
        return Some((Some(s), None));
    }
    let body = s.strip_suffix('s')?;
    let body = body.strip_suffix('*').unwrap_or(body);
    // find the sign separating the constant part from the root coefficient
    let sep = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last();
    match sep {
        Some(i) => {
            let (a, rest) = body.split_at(i);
            let neg = rest.starts_with('-');
            Some((Some(a), Some((neg, &rest[1..]))))
        }
        None => {
            let (neg, coeff) = match body.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, body.strip_prefix('+').unwrap_or(body)),
            };
            Some((None, Some((neg, coeff))))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime { p } => write!(f, "GF({p})"),
            Field::Ext { p, .. } => write!(f, "GF({p}^2)"),
        }
    }
}

/// Wire form used by the structure-constant files:
/// `"rational" | {"prime": p} | {"prime": p, "ext": true}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime {
        prime: u64,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        ext: bool,
    },
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldSpec::Named(n) if n == "rational" => Ok(Field::Rational),
            FieldSpec::Named(n) => Err(Error::InvalidField(format!("unknown field {n:?}"))),
            FieldSpec::Prime { prime, ext: false } => Field::prime(*prime),
            FieldSpec::Prime { prime, ext: true } => Field::ext(*prime),
        }
    }
}

impl From<&Field> for FieldSpec {
    fn from(f: &Field) -> Self {
        match f {
            Field::Rational => FieldSpec::Named("rational".into()),
            Field::Prime { p } => FieldSpec::Prime {
                prime: *p,
                ext: false,
            },
            Field::Ext { p, .. } => FieldSpec::Prime {
                prime: *p,
                ext: true,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFieldElement {
    pub p: u64,
    pub value: u64,
}

impl PrimeFieldElement {
    pub fn new(p: u64, n: i64) -> Self {
        PrimeFieldElement {
            p,
            value: n.rem_euclid(p as i64) as u64,
        }
    }
}

/// `a + b·s` with `s² = d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtElement {
    pub p: u64,
    pub d: u64,
    pub a: u64,
    pub b: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Prime(PrimeFieldElement),
    Ext(QuadExtElement),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime(x) => Field::Prime { p: x.p },
            Scalar::Ext(x) => Field::Ext {
                p: x.p,
                nonresidue: x.d,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime(x) => x.value == 0,
            Scalar::Ext(x) => x.a == 0 && x.b == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime(x) => x.value == 1,
            Scalar::Ext(x) => x.a == 1 && x.b == 0,
        }
    }

    pub fn zero_like(&self) -> Scalar {
        self.field().zero()
    }

    pub fn one_like(&self) -> Scalar {
        self.field().one()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    fn prime_value(&self) -> u64 {
        match self {
            Scalar::Prime(x) => x.value,
            _ => panic!("expected a prime field element"),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime(x) => Scalar::Prime(PrimeFieldElement {
                p: x.p,
                value: inv_mod(x.value, x.p)?,
            }),
            Scalar::Ext(x) => {
                let p = x.p;
                // (a + bs)^{-1} = (a - bs) / (a² - d b²)
                let norm = (mul_mod(x.a, x.a, p) + p - mul_mod(x.d, mul_mod(x.b, x.b, p), p)) % p;
                let ninv = inv_mod(norm, p)?;
                Scalar::Ext(QuadExtElement {
                    p,
                    d: x.d,
                    a: mul_mod(x.a, ninv, p),
                    b: mul_mod((p - x.b) % p, ninv, p),
                })
            }
        })
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut acc = self.one_like();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Image of this scalar in `field`: rationals reduce into finite
    /// fields, prime-field elements lift into their extension.
    pub fn reduce(&self, field: &Field) -> Result<Scalar> {
        match (self, field) {
            (_, f) if *f == self.field() => Ok(self.clone()),
            (Scalar::Rational(r), f) => f.from_rational(r),
            (Scalar::Prime(x), Field::Ext { p, nonresidue }) if *p == x.p => {
                Ok(Scalar::Ext(QuadExtElement {
                    p: *p,
                    d: *nonresidue,
                    a: x.value,
                    b: 0,
                }))
            }
            _ => Err(Error::NotReducible(self.to_string(), field.to_string())),
        }
    }

    /// Same as [`Scalar::reduce`], spelled for the prime-to-extension case.
    pub fn lift(&self, field: &Field) -> Result<Scalar> {
        self.reduce(field)
    }

    fn order_key(&self) -> (u64, u64) {
        match self {
            Scalar::Rational(_) => (0, 0),
            Scalar::Prime(x) => (0, x.value),
            Scalar::Ext(x) => (x.b, x.a),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Rationals by value; finite fields by canonical index `a + b·p`.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            _ => self
                .field()
                .cmp(&other.field())
                .then_with(|| self.order_key().cmp(&other.order_key())),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.p == b.p => Scalar::Prime(PrimeFieldElement {
                p: a.p,
                value: (a.value + b.value) % a.p,
            }),
            (Scalar::Ext(a), Scalar::Ext(b)) if a.p == b.p => Scalar::Ext(QuadExtElement {
                p: a.p,
                d: a.d,
                a: (a.a + b.a) % a.p,
                b: (a.b + b.b) % a.p,
            }),
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime(a) => Scalar::Prime(PrimeFieldElement {
                p: a.p,
                value: (a.p - a.value) % a.p,
            }),
            Scalar::Ext(a) => Scalar::Ext(QuadExtElement {
                p: a.p,
                d: a.d,
                a: (a.p - a.a) % a.p,
                b: (a.p - a.b) % a.p,
            }),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.p == b.p => Scalar::Prime(PrimeFieldElement {
                p: a.p,
                value: mul_mod(a.value, b.value, a.p),
            }),
            (Scalar::Ext(x), Scalar::Ext(y)) if x.p == y.p => {
                let p = x.p;
                let bb = mul_mod(x.b, y.b, p);
                Scalar::Ext(QuadExtElement {
                    p,
                    d: x.d,
                    a: (mul_mod(x.a, y.a, p) + mul_mod(x.d, bb, p)) % p,
                    b: (mul_mod(x.a, y.b, p) + mul_mod(x.b, y.a, p)) % p,
                })
            }
            _ => mismatch(self, rhs),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

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

/// Textual forms: `a/b` (denominator omitted when 1), `k` in `[0,p)`,
/// `a+b*s` for the extension.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime(x) => write!(f, "{}", x.value),
            Scalar::Ext(x) => write!(f, "{}+{}*s", x.a, x.b),
        }
    }
}

/// Square root in the scalar's own finite field; the least representative
/// in canonical order when one exists.
pub fn field_sqrt(x: &Scalar) -> Result<Option<Scalar>> {
    let field = x.field();
    if !field.is_finite() {
        return Err(Error::RationalSqrt);
    }
    Ok(field.elements()?.into_iter().find(|r| &(r * r) == x))
}

/// The inverse of 2, which exists in every supported field.
pub fn half(field: &Field) -> Scalar {
    field.from_int(2).inv().expect("characteristic is never 2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rejects_characteristic_two_and_composites() {
        assert!(Field::prime(2).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::ext(4).is_err());
    }

    #[test]
    fn half_in_each_field() {
        assert_eq!(half(&Field::Rational).to_string(), "1/2");
        assert_eq!(half(&gf(5)).to_string(), "3");
        assert_eq!(half(&gf(7)).to_string(), "4");
        assert_eq!(half(&Field::ext(5).unwrap()).to_string(), "3+0*s");
    }

    #[test]
    fn sqrt_examples() {
        let f5 = gf(5);
        assert_eq!(field_sqrt(&f5.from_int(4)).unwrap(), Some(f5.from_int(2)));
        let f7 = gf(7);
        assert_eq!(field_sqrt(&f7.zero()).unwrap(), Some(f7.zero()));
        assert_eq!(field_sqrt(&f5.from_int(2)).unwrap(), None);
        let f25 = Field::ext(5).unwrap();
        let two = f5.from_int(2).lift(&f25).unwrap();
        let r = field_sqrt(&two).unwrap().unwrap();
        assert_eq!(&r * &r, two);
        assert!(matches!(
            field_sqrt(&Field::Rational.one()),
            Err(Error::RationalSqrt)
        ));
    }

    #[test]
    fn least_nonresidues() {
        assert_eq!(least_nonresidue(3), 2);
        assert_eq!(least_nonresidue(5), 2);
        assert_eq!(least_nonresidue(7), 3);
        assert_eq!(least_nonresidue(17), 3);
    }

    #[test]
    fn extension_root_squares_to_nonresidue() {
        let f = Field::ext(7).unwrap();
        let s = f.parse("s").unwrap();
        assert_eq!(&s * &s, f.from_int(3));
        assert_eq!(f.parse("2-s").unwrap().to_string(), "2+6*s");
        assert_eq!(f.parse("-1").unwrap().to_string(), "6+0*s");
    }

    #[test]
    fn parse_forms() {
        let q = Field::Rational;
        assert_eq!(q.parse("-3/6").unwrap().to_string(), "-1/2");
        assert_eq!(q.parse("4").unwrap().to_string(), "4");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("").is_err());
        assert!(q.parse("1+s").is_err());
        let f5 = gf(5);
        assert_eq!(f5.parse("1/2").unwrap().to_string(), "3");
        assert_eq!(f5.parse("-1").unwrap().to_string(), "4");
        assert!(f5.parse("1/5").is_err());
    }

    #[test]
    fn reduction_and_lift() {
        let r = Field::Rational.parse("3/4").unwrap();
        assert_eq!(r.reduce(&gf(5)).unwrap().to_string(), "2");
        assert!(Field::Rational.parse("1/3").unwrap().reduce(&gf(3)).is_err());
        let x = gf(5).from_int(3);
        assert!(x.reduce(&gf(7)).is_err());
        assert!(x.reduce(&Field::Rational).is_err());
    }

    #[test]
    fn scalar_order_is_canonical_index() {
        let f = Field::ext(3).unwrap();
        let els = f.elements().unwrap();
        assert_eq!(els.len(), 9);
        let mut sorted = els.clone();
        sorted.sort();
        assert_eq!(sorted, els);
        assert_eq!(els[1].to_string(), "1+0*s");
        assert_eq!(els[3].to_string(), "0+1*s");
    }

    #[test]
    fn p3_carries_a_warning() {
        assert!(gf(3).warning().is_some());
        assert!(gf(5).warning().is_none());
        assert!(Field::Rational.warning().is_none());
    }
}
