//! Multivariate polynomials with rational coefficients in up to 7 formal
//! coordinates x0..x6. Used for coordinate realizations of left-invariant
//! coframes and for polynomial vector fields in Lie-derivative checks.
//!
//! Exponent vectors are fixed-width arrays; the map is kept sorted by the
//! derived `Ord` so equality is structural.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{rat, Rat, Scalar};

pub const NVARS: usize = 7;

type Expt = [u8; NVARS];

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Expt, Rat>,
}

impl Poly {
    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; NVARS], c);
        }
        Poly { terms }
    }

    pub fn var(i: usize) -> Self {
        assert!(i < NVARS);
        let mut e = [0u8; NVARS];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, rat(1, 1));
        Poly { terms }
    }

    pub fn monomial(c: Rat, exps: Expt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { terms }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&p| p == 0))
    }

    pub fn constant_part(&self) -> Rat {
        self.terms.get(&[0; NVARS]).cloned().unwrap_or_else(Rat::zero)
    }

    /// Partial derivative with respect to x_i.
    pub fn diff(&self, i: usize) -> Self {
        assert!(i < NVARS);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[i] -= 1;
            let nc = c * rat(e[i] as i64, 1);
            if !nc.is_zero() {
                terms.insert(ne, nc);
            }
        }
        Poly { terms }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert!(point.len() >= NVARS);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    term *= point[i].clone();
                }
            }
            acc += term;
        }
        acc
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{p}")?,
                }
            }
        }
        Ok(())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let mut terms = self.terms;
        for (e, c) in rhs.terms {
            let entry = terms.entry(e).or_insert_with(Rat::zero);
            *entry += c;
        }
        Poly { terms }.normalized()
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut terms: BTreeMap<Expt, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0u8; NVARS];
                for i in 0..NVARS {
                    e[i] = ea[i] + eb[i];
                }
                let entry = terms.entry(e).or_insert_with(Rat::zero);
                *entry += ca * cb;
            }
        }
        Poly { terms }.normalized()
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(rat(1, 1))
    }
}

impl Scalar for Poly {
    fn from_ratio(n: i64, d: i64) -> Self {
        Poly::constant(rat(n, d))
    }

    fn div_exact(&self, other: &Self) -> Self {
        assert!(
            other.is_constant(),
            "polynomial division only supported by constants"
        );
        let c = other.constant_part();
        assert!(!c.is_zero(), "division by zero polynomial");
        Poly {
            terms: self.terms.iter().map(|(e, v)| (*e, v / &c)).collect(),
        }
    }

    fn nth_root_exact(&self, n: u32) -> Option<Self> {
        if !self.is_constant() {
            return None;
        }
        crate::scalar::rat_nth_root(&self.constant_part(), n).map(Poly::constant)
    }

    fn is_positive_scalar(&self) -> bool {
        self.is_constant() && self.constant_part() > Rat::zero()
    }

    fn from_rat(r: &Rat) -> Self {
        Poly::constant(r.clone())
    }

    fn to_f64(&self) -> f64 {
        assert!(self.is_constant(), "cannot convert non-constant poly to f64");
        crate::scalar::Scalar::to_f64(&self.constant_part())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let p = Poly::var(1) * Poly::var(2) + Poly::constant(rat(3, 2));
        let q = Poly::var(1).clone() * Poly::var(1);
        let lhs = (p.clone() * q.clone()).diff(1);
        let rhs = p.clone().diff(1) * q.clone() + p * q.diff(1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_matches_structure() {
        let p = Poly::var(0) + Poly::var(3) * Poly::var(5) * Poly::constant(rat(2, 1));
        let pt: Vec<Rat> = (0..7).map(|i| rat(i as i64, 1)).collect();
        assert_eq!(p.eval(&pt), rat(30, 1)); // 0 + 2*3*5
    }
}
