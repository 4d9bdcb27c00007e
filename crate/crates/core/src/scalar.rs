//! Exact scalars and the field backends used by the linear algebra.
//!
//! [`Rational`] is the canonical coefficient type. It keeps numerator and
//! denominator in machine words while they fit and falls back to
//! arbitrary-precision integers otherwise, so the common case of small
//! coefficients never allocates.
//!
//! Elimination code is written against the [`Field`] trait so that the same
//! routines run over the rationals ([`RationalField`]) or over a prime field
//! ([`PrimeField`]).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    /// `num / den` with `den > 0` and `gcd(|num|, den) = 1`.
    Small(i64, i64),
    /// Only used when the reduced value does not fit `Small`.
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_integer(v: i64) -> Self {
        Rational(Repr::Small(v, 1))
    }

    /// Builds `num / den`, reducing to lowest terms.
    ///
    /// Returns an error when `den == 0`.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Self::from_i128(num as i128, den as i128))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Self::zero();
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
        let (num, den) = (num / g, den / g);
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(BigRational::new_raw(
                BigInt::from(num),
                BigInt::from(den),
            ))),
        }
    }

    /// Converts from a `BigRational`, normalizing the representation.
    pub fn from_big(q: BigRational) -> Self {
        let q = if q.denom().is_negative() || !q.numer().gcd(q.denom()).is_one() {
            BigRational::new(q.numer().clone(), q.denom().clone())
        } else {
            q
        };
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(q)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(q) => q.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(q) => q.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(q) => q.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(q) => q.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(q) => q.is_negative(),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational(Repr::Small(m, *d)),
                None => Self::from_big(-self.to_big()),
            },
            Repr::Big(q) => Self::from_big(-q.clone()),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        return Rational(Repr::Small(s, 1));
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Self::from_i128(a * d + c * b, b * d)
            }
            _ => Self::from_big(self.to_big() + other.to_big()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(p) = a.checked_mul(*c) {
                        return Rational(Repr::Small(p, 1));
                    }
                }
                Self::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Self::from_big(self.to_big() * other.to_big()),
        }
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    ///
    /// Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(q) => Self::from_big(q.recip()),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Residue modulo `p`, or `None` when the denominator vanishes mod `p`.
    pub fn residue(&self, p: u64) -> Option<u64> {
        let f = PrimeField::new_unchecked(p);
        match &self.0 {
            Repr::Small(n, d) => {
                let dn = (*d as i128).rem_euclid(p as i128) as u64;
                if dn == 0 {
                    return None;
                }
                let nn = (*n as i128).rem_euclid(p as i128) as u64;
                Some(f.mul(&nn, &f.inv(&dn)))
            }
            Repr::Big(q) => {
                let pb = BigInt::from(p);
                let dn = q.denom().mod_floor(&pb).to_u64()?;
                if dn == 0 {
                    return None;
                }
                let nn = q.numer().mod_floor(&pb).to_u64()?;
                Some(f.mul(&nn, &f.inv(&dn)))
            }
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Self::from_integer(v as i64)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(p), Repr::Big(q)) => p == q,
            // Canonical representation: a value fits `Small` iff it is stored there.
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(q) => {
                1u8.hash(state);
                q.numer().hash(state);
                q.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Repr::Big(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `"p"` or `"p/q"` with optional sign and surrounding whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Self::from_big(BigRational::new(num, den)))
    }
}

/// Arithmetic context for the elimination routines.
///
/// Elements are plain values; the context carries any runtime parameters
/// (the modulus for prime fields).
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Maps a rational into the field; fails when the denominator is not
    /// invertible.
    fn from_rational(&self, q: &Rational) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// # Panics
    ///
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Human-readable name used in reports.
    fn describe(&self) -> String;

    /// Image of `a` in `F_p`, when defined.
    fn residue_mod(&self, a: &Self::Elem, p: &PrimeField) -> Option<u64>;

    /// Rescales a nonzero vector to a canonical representative of its line;
    /// the default leaves it unchanged.
    fn normalize(&self, _v: &mut [(usize, Self::Elem)]) {}

    /// `a -= c * b`
    fn sub_mul_assign(&self, a: &mut Self::Elem, c: &Self::Elem, b: &Self::Elem) {
        *a = self.sub(a, &self.mul(c, b));
    }
}

/// The rationals, the canonical characteristic-zero backend.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(v)
    }
    fn from_rational(&self, q: &Rational) -> Result<Rational> {
        Ok(q.clone())
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a.add(b)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a.sub(b)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a.mul(b)
    }
    fn neg(&self, a: &Rational) -> Rational {
        a.neg()
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.inv()
    }
    fn describe(&self) -> String {
        "rational".into()
    }
    fn residue_mod(&self, a: &Rational, p: &PrimeField) -> Option<u64> {
        a.residue(p.modulus())
    }
    /// Clears denominators and common factors, giving a primitive integer
    /// vector.
    fn normalize(&self, v: &mut [(usize, Rational)]) {
        let mut lcm = BigInt::one();
        let mut gcd = BigInt::zero();
        for (_, x) in v.iter() {
            lcm = lcm.lcm(&x.denom());
        }
        for (_, x) in v.iter() {
            gcd = gcd.gcd(&(x.numer() * (&lcm / x.denom())));
        }
        if gcd.is_zero() {
            return;
        }
        let scale = Rational::from_big(BigRational::new(lcm, gcd));
        for (_, x) in v.iter_mut() {
            *x = x.mul(&scale);
        }
    }
}

/// Default modulus for the prime-field accelerator, `2^31 - 1`.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Integers modulo a prime `p < 2^32`; residues are kept in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Checks that `p` is a prime below `2^32`.
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1u64 << 32)).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "modulus {p} is not a prime below 2^32"
            )));
        }
        Ok(PrimeField { p })
    }

    fn new_unchecked(p: u64) -> Self {
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

/// Which field a computation runs over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FieldChoice {
    #[default]
    Rational,
    Prime(PrimeField),
}

impl FieldChoice {
    pub fn describe(&self) -> String {
        match self {
            FieldChoice::Rational => RationalField.describe(),
            FieldChoice::Prime(p) => p.describe(),
        }
    }
}

impl FromStr for FieldChoice {
    type Err = Error;

    /// `"rational"`, `"prime"` (default modulus) or `"prime:<p>"`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rational" | "q" | "Q" => Ok(FieldChoice::Rational),
            "prime" => Ok(FieldChoice::Prime(PrimeField::default())),
            other => {
                let p = other
                    .strip_prefix("prime:")
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown field {other:?}")))?;
                Ok(FieldChoice::Prime(PrimeField::new(p)?))
            }
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_rational(&self, q: &Rational) -> Result<u64> {
        q.residue(self.p).ok_or_else(|| {
            Error::InvalidArgument(format!("denominator of {q} vanishes modulo {}", self.p))
        })
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn describe(&self) -> String {
        format!("prime({})", self.p)
    }
    fn residue_mod(&self, a: &u64, p: &PrimeField) -> Option<u64> {
        (p.p == self.p).then_some(*a)
    }
    fn sub_mul_assign(&self, a: &mut u64, c: &u64, b: &u64) {
        let prod = c * b % self.p;
        *a = if *a >= prod { *a - prod } else { *a + self.p - prod };
    }
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `C(n, k)` for possibly negative `n`, zero outside `0 <= k <= n`.
pub fn binomial_i(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as u64, k as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(Rational::new(2, -4).unwrap(), q("-1/2"));
        assert_eq!(q("0/7"), Rational::zero());
        assert_eq!(q("6/3").to_string(), "2");
        assert!(Rational::new(1, 0).is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn overflow_promotes_to_big() {
        let big = Rational::from_integer(i64::MAX);
        let s = big.add(&big);
        assert_eq!(s.to_string(), "18446744073709551614");
        // and comes back down when it fits again
        assert_eq!(s.sub(&big), big);
        let tiny = Rational::new(1, i64::MAX).unwrap();
        assert_eq!(tiny.mul(&tiny).inv().to_string(), "85070591730234615847396907784232501249");
        assert_eq!(Rational::from_integer(i64::MIN).neg().to_string(), "9223372036854775808");
    }

    #[test]
    fn arithmetic_matches_bigrational() {
        let vals = ["3/4", "-5/6", "7", "-1/9", "123456789/1000", "0"];
        for a in vals {
            for b in vals {
                let (x, y) = (q(a), q(b));
                let (bx, by) = (x.to_big(), y.to_big());
                assert_eq!(x.add(&y).to_big(), &bx + &by);
                assert_eq!(x.sub(&y).to_big(), &bx - &by);
                assert_eq!(x.mul(&y).to_big(), &bx * &by);
                if !y.is_zero() {
                    assert_eq!(x.div(&y).to_big(), &bx / &by);
                }
                assert_eq!(x.cmp(&y), bx.cmp(&by));
            }
        }
    }

    #[test]
    fn prime_field_residues() {
        let f = PrimeField::default();
        assert_eq!(f.from_i64(-1), DEFAULT_PRIME - 1);
        let half = f.from_rational(&q("1/2")).unwrap();
        assert_eq!(f.mul(&half, &2), 1);
        assert!(PrimeField::new(7).unwrap().from_rational(&q("1/14")).is_err());
        assert!(PrimeField::new(15).is_err());
        let g = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(g.mul(&a, &g.inv(&a)), 1);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 5), 0);
        assert_eq!(binomial(50, 25), 126_410_606_437_752);
        assert_eq!(binomial_i(-1, 0), 0);
    }
}
