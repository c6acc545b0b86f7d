//! Dense alternating k-forms on a low-dimensional frame.
//!
//! Coefficients are stored on strictly increasing index tuples, encoded as
//! bitmasks over frame indices `0..dim` (dim <= 8). An absent tuple means a
//! zero coefficient.

use std::collections::BTreeMap;


use crate::alg::tensor::Vector;
use crate::scalar::Scalar;

/// Alternating `degree`-form on a `dim`-dimensional frame.
#[derive(Clone, Debug, PartialEq)]
pub struct AltForm<S> {
    dim: u8,
    degree: u8,
    coeffs: BTreeMap<u8, S>,
}

/// Sign of sorting the concatenation of two disjoint increasing masks `a`, `b`
/// (i.e. the sign of e^a wedge e^b relative to e^{a|b}).
pub fn merge_sign(a: u8, b: u8) -> i8 {
    let mut inversions = 0u32;
    let mut bits = a;
    while bits != 0 {
        let i = bits.trailing_zeros();
        inversions += (b & ((1u8 << i) - 1)).count_ones();
        bits &= bits - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Position-parity sign of removing index `i` from mask `mask` (i in mask).
pub fn removal_sign(mask: u8, i: u8) -> i8 {
    if (mask & ((1u8 << i) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn mask_of(indices: &[u8]) -> u8 {
    let mut m = 0u8;
    for &i in indices {
        assert!(m & (1 << i) == 0, "repeated index {i}");
        m |= 1 << i;
    }
    m
}

/// Sorted indices of a mask.
pub fn indices_of(mask: u8) -> Vec<u8> {
    (0..8).filter(|i| mask & (1 << i) != 0).collect()
}

/// All increasing index masks of `k` bits among `0..dim`.
pub fn masks(dim: u8, k: u8) -> Vec<u8> {
    (0u16..(1u16 << dim))
        .map(|m| m as u8)
        .filter(|m| m.count_ones() == k as u32)
        .collect()
}

impl<S: Scalar> AltForm<S> {
    pub fn zero(dim: u8, degree: u8) -> Self {
        assert!(dim <= 8);
        AltForm {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: u8, value: S) -> Self {
        let mut f = AltForm::zero(dim, 0);
        f.set_mask(0, value);
        f
    }

    /// Basis form `e^{i1...ik}` for the given (not necessarily sorted) indices.
    pub fn basis(dim: u8, indices: &[u8]) -> Self {
        let mut perm_sign = 1i8;
        let v: Vec<u8> = indices.to_vec();
        for a in 0..v.len() {
            for b in (a + 1)..v.len() {
                assert_ne!(v[a], v[b], "repeated index");
                if v[a] > v[b] {
                    perm_sign = -perm_sign;
                }
            }
        }
        let mut f = AltForm::zero(dim, indices.len() as u8);
        let c = if perm_sign > 0 {
            S::one()
        } else {
            -S::one()
        };
        f.set_mask(mask_of(indices), c);
        f
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn set_mask(&mut self, mask: u8, value: S) {
        assert_eq!(mask.count_ones(), self.degree as u32, "degree mismatch");
        assert!(mask < (1u16 << self.dim) as u8 || self.dim == 8, "index out of range");
        if value.is_zero() {
            self.coeffs.remove(&mask);
        } else {
            self.coeffs.insert(mask, value);
        }
    }

    pub fn add_to_mask(&mut self, mask: u8, value: S) {
        let cur = self.coeff_mask(mask);
        self.set_mask(mask, cur + value);
    }

    pub fn coeff_mask(&self, mask: u8) -> S {
        self.coeffs.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient on an arbitrary index tuple (with antisymmetry sign).
    pub fn coeff(&self, indices: &[u8]) -> S {
        let mut v = indices.to_vec();
        let mut sign = 1i8;
        for a in 0..v.len() {
            for b in (a + 1)..v.len() {
                if v[a] == v[b] {
                    return S::zero();
                }
                if v[a] > v[b] {
                    v.swap(a, b);
                    sign = -sign;
                }
            }
        }
        let c = self.coeff_mask(mask_of(&v));
        if sign > 0 {
            c
        } else {
            -c
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u8, &S)> {
        self.coeffs.iter().map(|(m, s)| (*m, s))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = AltForm::zero(self.dim, self.degree);
        for (m, v) in &self.coeffs {
            out.set_mask(*m, c.clone() * v.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (m, v) in &other.coeffs {
            out.add_to_mask(*m, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let deg = self.degree + other.degree;
        let mut out = AltForm::zero(self.dim, deg.min(self.dim + 1));
        if deg > self.dim {
            // zero form of too-high degree; keep degree clamped but empty
            return AltForm::zero(self.dim, deg.min(8));
        }
        out.degree = deg;
        for (ma, va) in &self.coeffs {
            for (mb, vb) in &other.coeffs {
                if ma & mb != 0 {
                    continue;
                }
                let sign = merge_sign(*ma, *mb);
                let term = va.clone() * vb.clone();
                out.add_to_mask(*ma | *mb, if sign > 0 { term } else { -term });
            }
        }
        out
    }

    /// Algebra-homomorphic substitution `e^i ↦ images[i]`: the pullback of
    /// the form under the linear map whose rows are the given 1-forms.
    /// The target dimension is taken from the images, so a form can also be
    /// re-expressed inside a larger frame.
    pub fn substitute(&self, images: &[AltForm<S>]) -> AltForm<S> {
        assert_eq!(images.len(), self.dim as usize, "one image per coframe leg");
        let target_dim = images.first().map_or(self.dim, |f| f.dim());
        let mut out = AltForm::zero(target_dim, self.degree.min(target_dim));
        for (mask, c) in self.iter() {
            let mut term = AltForm::constant(target_dim, S::one());
            for i in indices_of(mask) {
                term = term.wedge(&images[i as usize]);
            }
            out = out.add(&term.scale(c));
        }
        out
    }

    /// Interior product `X` into `self`. Requires degree >= 1.
    pub fn contract(&self, x: &Vector<S>) -> Self {
        assert!(self.degree >= 1, "cannot contract a 0-form");
        assert_eq!(x.dim() as u8, self.dim, "dimension mismatch");
        let mut out = AltForm::zero(self.dim, self.degree - 1);
        for (m, v) in &self.coeffs {
            for i in indices_of(*m) {
                let xi = x.get(i as usize);
                if xi.is_zero() {
                    continue;
                }
                let s = removal_sign(*m, i);
                let term = xi.clone() * v.clone();
                out.add_to_mask(m & !(1 << i), if s > 0 { term } else { -term });
            }
        }
        out
    }

    /// Map coefficients into another scalar ring.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AltForm<T> {
        let mut out = AltForm::zero(self.dim, self.degree);
        for (m, v) in &self.coeffs {
            out.set_mask(*m, f(v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn e(dim: u8, idx: &[u8]) -> AltForm<Rat> {
        AltForm::basis(dim, idx)
    }

    #[test]
    fn wedge_antisymmetry() {
        let a = e(7, &[0]);
        let b = e(7, &[1]);
        assert_eq!(a.wedge(&b), e(7, &[0, 1]));
        assert_eq!(b.wedge(&a), e(7, &[0, 1]).neg());
        assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn basis_orders_indices() {
        assert_eq!(e(7, &[2, 1]), e(7, &[1, 2]).neg());
    }

    #[test]
    fn contract_basis() {
        // e_1 into e^{12} -> e^2 ; e_2 into e^{12} -> -e^1
        let f = e(7, &[1, 2]);
        let mut x = Vector::zero(7);
        x.set(1, rat(1, 1));
        assert_eq!(f.contract(&x), e(7, &[2]));
        let mut y = Vector::zero(7);
        y.set(2, rat(1, 1));
        assert_eq!(f.contract(&y), e(7, &[1]).neg());
    }

    #[test]
    fn double_contraction_vanishes() {
        let f = e(7, &[0, 3, 5, 6]);
        let mut x = Vector::zero(7);
        for i in 0..7 {
            x.set(i, rat(i as i64 + 1, 3));
        }
        assert!(f.contract(&x).contract(&x).is_zero());
    }
}
