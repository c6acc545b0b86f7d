//! Metric-dependent operations: index raising, Hodge star, form inner
//! products. The orientation is stored explicitly as the coefficient of the
//! top basis form, never inferred from index parity.


use crate::alg::altform::{indices_of, masks, merge_sign, AltForm};
use crate::alg::tensor::{invert, SymTensor2, Tensor2};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Metric<S> {
    g: SymTensor2<S>,
    inv: SymTensor2<S>,
    det: S,
    /// Coefficient of the top basis form `e^{0...n-1}` in the Riemannian
    /// volume form, i.e. the chosen orientation. Satisfies vol^2 = det g.
    vol_coeff: S,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricError {
    NotPositive,
    NoExactRoot { detail: &'static str },
}

impl std::fmt::Display for MetricError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricError::NotPositive => write!(f, "bilinear form is not positive-definite"),
            MetricError::NoExactRoot { detail } => {
                write!(f, "no exact root in scalar ring: {detail}")
            }
        }
    }
}

impl std::error::Error for MetricError {}

fn leading_minors_positive<S: Scalar>(g: &SymTensor2<S>) -> bool {
    let n = g.dim();
    for k in 1..=n {
        let mut sub = Tensor2::zero(k);
        for i in 0..k {
            for j in 0..k {
                sub.set(i, j, g.get(i, j).clone());
            }
        }
        match invert(&sub) {
            Some((_, det)) => {
                if !det.is_positive_scalar() {
                    return false;
                }
            }
            None => return false,
        }
    }
    true
}

impl<S: Scalar> Metric<S> {
    /// Metric from a positive-definite symmetric tensor; the volume
    /// coefficient is the positive square root of det g (standard
    /// orientation `e^{0...n-1}`).
    pub fn new(g: SymTensor2<S>) -> Result<Self, MetricError> {
        let det = match invert(g.as_tensor2()) {
            Some((_, det)) => det,
            None => return Err(MetricError::NotPositive),
        };
        let vol = det
            .nth_root_exact(2)
            .ok_or(MetricError::NoExactRoot { detail: "sqrt(det g)" })?;
        Self::with_volume(g, vol)
    }

    /// Metric with an explicitly chosen volume coefficient (orientation).
    /// Requires vol^2 = det g exactly.
    pub fn with_volume(g: SymTensor2<S>, vol_coeff: S) -> Result<Self, MetricError> {
        if !leading_minors_positive(&g) {
            return Err(MetricError::NotPositive);
        }
        let (inv, det) = invert(g.as_tensor2()).ok_or(MetricError::NotPositive)?;
        assert!(
            vol_coeff.clone() * vol_coeff.clone() == det,
            "volume coefficient inconsistent with det g"
        );
        Ok(Metric {
            g,
            inv: inv.into_symmetric(),
            det,
            vol_coeff,
        })
    }

    pub fn euclidean(dim: usize) -> Self {
        Metric::new(SymTensor2::identity(dim)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn tensor(&self) -> &SymTensor2<S> {
        &self.g
    }

    pub fn inverse(&self) -> &SymTensor2<S> {
        &self.inv
    }

    pub fn det(&self) -> &S {
        &self.det
    }

    pub fn vol_coeff(&self) -> &S {
        &self.vol_coeff
    }

    /// Riemannian volume form.
    pub fn vol(&self) -> AltForm<S> {
        let n = self.dim() as u8;
        let top: Vec<u8> = (0..n).collect();
        AltForm::basis(n, &top).scale(&self.vol_coeff)
    }

    /// Gram determinant `det(g^{-1}[I,J])` for increasing masks I, J of
    /// equal size: the inner product of basis forms e^I, e^J.
    fn basis_inner(&self, mi: u8, mj: u8) -> S {
        let ii = indices_of(mi);
        let jj = indices_of(mj);
        debug_assert_eq!(ii.len(), jj.len());
        let k = ii.len();
        if k == 0 {
            return S::one();
        }
        let mut sub = Tensor2::zero(k);
        for (a, &i) in ii.iter().enumerate() {
            for (b, &j) in jj.iter().enumerate() {
                sub.set(a, b, self.inv.get(i as usize, j as usize).clone());
            }
        }
        match invert(&sub) {
            Some((_, det)) => det,
            None => determinant_by_expansion(&sub),
        }
    }

    /// Pointwise inner product of two equal-degree forms.
    pub fn form_inner(&self, a: &AltForm<S>, b: &AltForm<S>) -> S {
        assert_eq!(a.degree(), b.degree(), "degree mismatch");
        assert_eq!(a.dim() as usize, self.dim(), "dimension mismatch");
        assert_eq!(b.dim() as usize, self.dim(), "dimension mismatch");
        let mut acc = S::zero();
        for (mi, ci) in a.iter() {
            for (mj, cj) in b.iter() {
                let gram = self.basis_inner(mi, mj);
                if !gram.is_zero() {
                    acc = acc + ci.clone() * cj.clone() * gram;
                }
            }
        }
        acc
    }

    /// Hodge star with respect to this metric and orientation, defined by
    /// `a ∧ *b = <a, b> vol`.
    pub fn hodge_star(&self, b: &AltForm<S>) -> AltForm<S> {
        let n = self.dim() as u8;
        assert_eq!(b.dim(), n, "dimension mismatch");
        let k = b.degree();
        let full: u8 = if n == 8 { 0xFF } else { (1u8 << n) - 1 };
        let mut out = AltForm::zero(n, n - k);
        for mi in masks(n, n - k) {
            let comp = full & !mi;
            // <e^comp, b>
            let mut inner = S::zero();
            for (mj, cj) in b.iter() {
                let gram = self.basis_inner(comp, mj);
                if !gram.is_zero() {
                    inner = inner + cj.clone() * gram;
                }
            }
            if inner.is_zero() {
                continue;
            }
            let sign = merge_sign(comp, mi);
            let val = self.vol_coeff.clone() * inner;
            out.set_mask(mi, if sign > 0 { val } else { -val });
        }
        out
    }

    /// Inverse Hodge star (uses the degree-dependent double-star sign).
    pub fn hodge_star_inv(&self, b: &AltForm<S>) -> AltForm<S> {
        let n = self.dim() as u32;
        let m = b.degree() as u32;
        let s = self.hodge_star(b);
        if (m * (n - m)) % 2 == 0 {
            s
        } else {
            s.neg()
        }
    }

    /// Norm squared of a form.
    pub fn form_norm2(&self, a: &AltForm<S>) -> S {
        self.form_inner(a, a)
    }

    /// Norm squared of a 2-tensor (all indices raised).
    pub fn tensor2_norm2(&self, t: &Tensor2<S>) -> S {
        let n = self.dim();
        let mut acc = S::zero();
        for i in 0..n {
            for j in 0..n {
                if t.get(i, j).is_zero() {
                    continue;
                }
                for a in 0..n {
                    for b in 0..n {
                        let v = t.get(a, b);
                        if v.is_zero() {
                            continue;
                        }
                        acc = acc
                            + t.get(i, j).clone()
                                * v.clone()
                                * self.inv.get(i, a).clone()
                                * self.inv.get(j, b).clone();
                    }
                }
            }
        }
        acc
    }

    /// Trace of a 2-tensor with respect to this metric.
    pub fn trace(&self, t: &Tensor2<S>) -> S {
        let n = self.dim();
        let mut acc = S::zero();
        for i in 0..n {
            for j in 0..n {
                if !t.get(i, j).is_zero() {
                    acc = acc + self.inv.get(i, j).clone() * t.get(i, j).clone();
                }
            }
        }
        acc
    }

    /// Raise the index of a 1-form, producing a vector.
    pub fn sharp(&self, a: &AltForm<S>) -> crate::alg::tensor::Vector<S> {
        assert_eq!(a.degree(), 1);
        let n = self.dim();
        let mut v = crate::alg::tensor::Vector::zero(n);
        for i in 0..n {
            let mut acc = S::zero();
            for (m, c) in a.iter() {
                let j = m.trailing_zeros() as usize;
                acc = acc + self.inv.get(i, j).clone() * c.clone();
            }
            v.set(i, acc);
        }
        v
    }

    /// Lower the index of a vector, producing a 1-form.
    pub fn flat(&self, x: &crate::alg::tensor::Vector<S>) -> AltForm<S> {
        let n = self.dim();
        let mut a = AltForm::zero(n as u8, 1);
        for i in 0..n {
            let mut acc = S::zero();
            for j in 0..n {
                if !x.get(j).is_zero() {
                    acc = acc + self.g.get(i, j).clone() * x.get(j).clone();
                }
            }
            a.add_to_mask(1 << i, acc);
        }
        a
    }
}

/// Laplace expansion fallback for rings where Gaussian pivots may not be
/// exactly divisible (k <= 8 here, so this stays cheap).
fn determinant_by_expansion<S: Scalar>(m: &Tensor2<S>) -> S {
    let n = m.dim();
    if n == 0 {
        return S::one();
    }
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc = S::zero();
    for j in 0..n {
        let v = m.get(0, j);
        if v.is_zero() {
            continue;
        }
        let mut sub = Tensor2::zero(n - 1);
        for r in 1..n {
            let mut cc = 0;
            for c in 0..n {
                if c == j {
                    continue;
                }
                sub.set(r - 1, cc, m.get(r, c).clone());
                cc += 1;
            }
        }
        let cof = determinant_by_expansion(&sub);
        let term = v.clone() * cof;
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    #[test]
    fn star_of_one_and_vol() {
        let m: Metric<Rat> = Metric::euclidean(7);
        let one = AltForm::constant(7, rat(1, 1));
        assert_eq!(m.hodge_star(&one), m.vol());
        assert_eq!(m.hodge_star(&m.vol()), one);
        assert_eq!(m.form_inner(&m.vol(), &m.vol()), rat(1, 1));
    }

    #[test]
    fn double_star_sign_all_degrees() {
        let m: Metric<Rat> = Metric::euclidean(7);
        for k in 0..=7u8 {
            for mask in masks(7, k).into_iter().take(3) {
                let idx = indices_of(mask);
                let a: AltForm<Rat> = AltForm::basis(7, &idx);
                let ss = m.hodge_star(&m.hodge_star(&a));
                let sign = (k as u32 * (7 - k as u32)) % 2 == 0;
                assert_eq!(ss, if sign { a.clone() } else { a.neg() });
            }
        }
    }
}
