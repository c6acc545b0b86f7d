//! Scalar abstraction for the tensor algebra.
//!
//! All algebraic machinery is generic over [`Scalar`]. The default mode is
//! exact arbitrary-precision rational arithmetic ([`Rat`]); an inexact f64
//! mode ([`Approx`]) with a configurable relative tolerance exists for
//! numerical cross-checks. Other scalar rings (polynomials in frame
//! coordinates, power laws in time) implement the same trait elsewhere in
//! this crate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar, the default everywhere.
pub type Rat = BigRational;

/// Build a `Rat` from an integer pair.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Commutative ring with enough extra structure for the exterior algebra:
/// exact division where defined, n-th roots where they exist, and a
/// positivity predicate for metric checks.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_ratio(n: i64, d: i64) -> Self;

    /// Exact division. Panics if `other` does not divide `self` in the ring.
    fn div_exact(&self, other: &Self) -> Self;

    /// Exact n-th root, if one exists in the ring. Negative inputs are
    /// allowed for odd `n`.
    fn nth_root_exact(&self, n: u32) -> Option<Self>;

    /// Whether the scalar is known to be strictly positive (conservative
    /// for rings where sign is not total, e.g. polynomials).
    fn is_positive_scalar(&self) -> bool;

    fn from_rat(r: &Rat) -> Self;

    /// Best-effort float view, for reporting.
    fn to_f64(&self) -> f64;
}

fn bigint_nth_root_exact(x: &BigInt, n: u32) -> Option<BigInt> {
    if x.is_negative() {
        if n % 2 == 0 {
            return None;
        }
        return bigint_nth_root_exact(&-x, n).map(|r| -r);
    }
    let r = x.nth_root(n);
    if num_traits::pow::Pow::pow(&r, n) == *x {
        Some(r)
    } else {
        None
    }
}

/// Exact n-th root of a rational, if it exists.
pub fn rat_nth_root(x: &Rat, n: u32) -> Option<Rat> {
    let num = bigint_nth_root_exact(x.numer(), n)?;
    let den = bigint_nth_root_exact(x.denom(), n)?;
    Some(Rat::new(num, den))
}

impl Scalar for Rat {
    fn from_ratio(n: i64, d: i64) -> Self {
        rat(n, d)
    }

    fn div_exact(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        self / other
    }

    fn nth_root_exact(&self, n: u32) -> Option<Self> {
        rat_nth_root(self, n)
    }

    fn is_positive_scalar(&self) -> bool {
        self.is_positive()
    }

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
    }
}

static FLOAT_TOL_BITS: AtomicU64 = AtomicU64::new(0x3E112E0BE826D695); // 1e-9

/// Relative tolerance used by [`Approx`] comparisons.
pub fn float_tolerance() -> f64 {
    f64::from_bits(FLOAT_TOL_BITS.load(Ordering::Relaxed))
}

pub fn set_float_tolerance(tol: f64) {
    FLOAT_TOL_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

/// f64 scalar whose equality is relative-tolerance based.
#[derive(Clone, Copy, Debug)]
pub struct Approx(pub f64);

impl PartialEq for Approx {
    fn eq(&self, other: &Self) -> bool {
        let tol = float_tolerance();
        (self.0 - other.0).abs() <= tol * self.0.abs().max(other.0.abs()).max(1.0)
    }
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Approx {
    type Output = Approx;
    fn add(self, rhs: Approx) -> Approx {
        Approx(self.0 + rhs.0)
    }
}

impl Sub for Approx {
    type Output = Approx;
    fn sub(self, rhs: Approx) -> Approx {
        Approx(self.0 - rhs.0)
    }
}

impl Mul for Approx {
    type Output = Approx;
    fn mul(self, rhs: Approx) -> Approx {
        Approx(self.0 * rhs.0)
    }
}

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx(-self.0)
    }
}

impl Zero for Approx {
    fn zero() -> Self {
        Approx(0.0)
    }
    fn is_zero(&self) -> bool {
        *self == Approx(0.0)
    }
}

impl One for Approx {
    fn one() -> Self {
        Approx(1.0)
    }
}

impl Scalar for Approx {
    fn from_ratio(n: i64, d: i64) -> Self {
        Approx(n as f64 / d as f64)
    }

    fn div_exact(&self, other: &Self) -> Self {
        Approx(self.0 / other.0)
    }

    fn nth_root_exact(&self, n: u32) -> Option<Self> {
        if self.0 < 0.0 {
            if n % 2 == 0 {
                return None;
            }
            return Some(Approx(-(-self.0).powf(1.0 / n as f64)));
        }
        Some(Approx(self.0.powf(1.0 / n as f64)))
    }

    fn is_positive_scalar(&self) -> bool {
        self.0 > 0.0
    }

    fn from_rat(r: &Rat) -> Self {
        Approx(ToPrimitive::to_f64(r).unwrap_or(f64::NAN))
    }

    fn to_f64(&self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roots() {
        assert_eq!(rat_nth_root(&rat(8, 27), 3), Some(rat(2, 3)));
        assert_eq!(rat_nth_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(rat_nth_root(&rat(2, 1), 2), None);
        assert_eq!(rat_nth_root(&rat(-4, 1), 2), None);
        let x = rat(3, 5);
        let p = &x * &x * &x * &x * &x * &x * &x * &x * &x;
        assert_eq!(rat_nth_root(&p, 9), Some(x));
    }

    #[test]
    fn approx_tolerance_eq() {
        assert_eq!(Approx(1.0), Approx(1.0 + 1e-12));
        assert_ne!(Approx(1.0), Approx(1.0 + 1e-6));
    }
}
