//! Exact scalar fields.
//!
//! Every algebraic routine in this crate is generic over [`Field`]. Two
//! implementations ship: arbitrary-precision rationals ([`Rational`]) and
//! prime fields [`Fp`] with a compile-time modulus.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational numbers.
pub type Rational = BigRational;

/// An exact field. Floating point types deliberately do not implement this:
/// the rewriting engine asserts exact divisibility everywhere.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Parse `"p"`, `"p/q"` or a JSON-ish integer literal.
    fn parse(s: &str) -> Option<Self>;

    /// Numerator/denominator pair used by the JSON serializations. Prime
    /// field elements use their canonical representative over 1.
    fn to_fraction(&self) -> (BigInt, BigInt);

    /// Short name for reports ("rational", "gf32003", ...).
    fn field_name() -> String;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).ok()?;
                let d = BigInt::from_str(d.trim()).ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n, d))
            }
            None => BigInt::from_str(s).ok().map(BigRational::from_integer),
        }
    }

    fn to_fraction(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }

    fn field_name() -> String {
        "rational".to_string()
    }
}

/// Prime field `Z/PZ`. `P` must be prime and below 2^32 so products fit in u64.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

/// The prime field used by the CLI's `gf32003` option.
pub type Gf32003 = Fp<32003>;

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(self.0 * o.0 % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(o.0 != 0, "division by zero in F_{}", P);
        self * o.pow(P - 2)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<const P: u64> Field for Fp<P> {
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }

    fn parse(s: &str) -> Option<Self> {
        let r = BigRational::parse(s)?;
        let m = BigInt::from(P);
        let n = (r.numer() % &m + &m) % &m;
        let d = (r.denom() % &m + &m) % &m;
        if d.is_zero() {
            return None;
        }
        Some(Fp(n.to_u64()?) / Fp(d.to_u64()?))
    }

    fn to_fraction(&self) -> (BigInt, BigInt) {
        (BigInt::from(self.0), BigInt::one())
    }

    fn field_name() -> String {
        format!("gf{}", P)
    }
}

/// Render a scalar as `"n"` or `"n/d"`.
pub fn fraction_string<F: Field>(x: &F) -> String {
    let (n, d) = x.to_fraction();
    if d.is_one() {
        n.to_string()
    } else if d.is_negative() {
        format!("{}/{}", -n, -d)
    } else {
        format!("{}/{}", n, d)
    }
}
