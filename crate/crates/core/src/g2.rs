//! Pointwise G2 linear algebra on a 7-dimensional frame: the metric induced
//! by a positive 3-form, the i/j operators between symmetric tensors and
//! 3-forms, the irreducible decompositions of 2- and 3-forms, and the
//! torsion forms / full torsion tensor extracted from (dφ, dψ).

use crate::alg::altform::{indices_of, masks, AltForm};
use crate::alg::metric::{Metric, MetricError};
use crate::alg::tensor::{solve_linear, SymTensor2, Tensor2, Vector};
use crate::scalar::Scalar;

pub const DIM: usize = 7;

/// Standard G2 3-form `φ0 = e^0 ∧ ω0 + Re Υ0` with
/// `ω0 = e^12 + e^34 + e^56` and `Re Υ0 = e^135 − e^146 − e^236 − e^245`.
pub fn standard_phi<S: Scalar>() -> AltForm<S> {
    let mut phi = AltForm::zero(7, 3);
    for (idx, sign) in [
        ([0u8, 1, 2], 1i64),
        ([0, 3, 4], 1),
        ([0, 5, 6], 1),
        ([1, 3, 5], 1),
        ([1, 4, 6], -1),
        ([2, 3, 6], -1),
        ([2, 4, 5], -1),
    ] {
        phi = phi.add(&AltForm::basis(7, &idx).scale(&S::from_ratio(sign, 1)));
    }
    phi
}

/// The bilinear form `B(X, Y) e^{0...6} = (X ⌟ φ) ∧ (Y ⌟ φ) ∧ φ`,
/// which equals `6 g(X, Y) vol` for a positive 3-form.
pub fn phi_bilinear<S: Scalar>(phi: &AltForm<S>) -> Tensor2<S> {
    assert_eq!(phi.dim(), 7);
    assert_eq!(phi.degree(), 3);
    let contractions: Vec<AltForm<S>> = (0..DIM)
        .map(|i| phi.contract(&Vector::basis(DIM, i)))
        .collect();
    let mut b = Tensor2::zero(DIM);
    for i in 0..DIM {
        for j in i..DIM {
            let top = contractions[i]
                .wedge(&contractions[j])
                .wedge(phi)
                .coeff_mask(0x7F);
            b.set(i, j, top.clone());
            b.set(j, i, top);
        }
    }
    b
}

/// Metric and volume coefficient induced by a positive 3-form via
/// `(X ⌟ φ) ∧ (Y ⌟ φ) ∧ φ = 6 g(X, Y) vol`. The orientation is determined
/// by φ itself: `det(B/6) = λ^9` with λ the coefficient of `e^{0...6}` in
/// the volume form, possibly negative.
pub fn metric_from_phi<S: Scalar>(phi: &AltForm<S>) -> Result<Metric<S>, MetricError> {
    let b = phi_bilinear(phi);
    let sixth = S::from_ratio(1, 6);
    let bt = b.scale(&sixth);
    let det = match crate::alg::tensor::invert(&bt) {
        Some((_, det)) => det,
        None => return Err(MetricError::NotPositive),
    };
    let lambda = det
        .nth_root_exact(9)
        .ok_or(MetricError::NoExactRoot { detail: "det(B/6)^(1/9)" })?;
    let g = bt.scale(&S::one().div_exact(&lambda)).into_symmetric();
    Metric::with_volume(g, lambda)
}

#[derive(Clone, Debug, PartialEq)]
pub struct G2Structure<S> {
    pub phi: AltForm<S>,
    pub psi: AltForm<S>,
    pub metric: Metric<S>,
}

/// Torsion forms of a G2-structure:
/// `dφ = τ0 ψ + 3 τ1 ∧ φ + ∗τ3`, `dψ = 4 τ1 ∧ ψ + τ2 ∧ φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionForms<S> {
    pub tau0: S,
    pub tau1: AltForm<S>,
    pub tau2: AltForm<S>,
    pub tau3: AltForm<S>,
}

impl<S: Scalar> G2Structure<S> {
    pub fn from_phi(phi: AltForm<S>) -> Result<Self, MetricError> {
        let metric = metric_from_phi(&phi)?;
        let psi = metric.hodge_star(&phi);
        Ok(G2Structure { phi, psi, metric })
    }

    pub fn standard() -> Self {
        G2Structure::from_phi(standard_phi()).expect("φ0 is positive")
    }

    fn raise_rows(&self, h: &Tensor2<S>) -> Tensor2<S> {
        // h_a^l = g^{lm} h_{am}, stored as (a, l)
        let ginv = self.metric.inverse();
        let n = DIM;
        let mut out = Tensor2::zero(n);
        for a in 0..n {
            for l in 0..n {
                let mut acc = S::zero();
                for m in 0..n {
                    if !h.get(a, m).is_zero() {
                        acc = acc + ginv.get(l, m).clone() * h.get(a, m).clone();
                    }
                }
                out.set(a, l, acc);
            }
        }
        out
    }

    /// `i_φ(h)` for a symmetric 2-tensor h: the 3-form with components
    /// `h_a^l φ_{lbc} + h_b^l φ_{alc} + h_c^l φ_{abl}`.
    pub fn i_op(&self, h: &SymTensor2<S>) -> AltForm<S> {
        let hu = self.raise_rows(h.as_tensor2());
        let mut out = AltForm::zero(7, 3);
        for mask in masks(7, 3) {
            let idx = indices_of(mask);
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            let mut acc = S::zero();
            for l in 0..DIM as u8 {
                for (slot, phi_idx) in [
                    (a, [l, b, c]),
                    (b, [a, l, c]),
                    (c, [a, b, l]),
                ] {
                    let p = self.phi.coeff(&phi_idx);
                    if !p.is_zero() {
                        acc = acc + hu.get(slot as usize, l as usize).clone() * p;
                    }
                }
            }
            out.set_mask(mask, acc);
        }
        out
    }

    /// `j_φ(γ)(X, Y) = ∗((X ⌟ φ) ∧ (Y ⌟ φ) ∧ γ)` for a 3-form γ; a
    /// symmetric 2-tensor. In particular `j_φ(φ) = 6g`.
    pub fn j_op(&self, gamma: &AltForm<S>) -> SymTensor2<S> {
        assert_eq!(gamma.degree(), 3);
        let contractions: Vec<AltForm<S>> = (0..DIM)
            .map(|i| self.phi.contract(&Vector::basis(DIM, i)))
            .collect();
        let inv_lambda = S::one().div_exact(self.metric.vol_coeff());
        SymTensor2::from_fn(DIM, |i, j| {
            let top = contractions[i]
                .wedge(&contractions[j])
                .wedge(gamma)
                .coeff_mask(0x7F);
            top * inv_lambda.clone()
        })
    }

    /// Project a k-form onto the span of the given generating forms by
    /// solving the Gram system exactly; returns (projection, coefficients).
    fn project_span(&self, form: &AltForm<S>, span: &[AltForm<S>]) -> (AltForm<S>, Vector<S>) {
        let n = span.len();
        let mut gram = Tensor2::zero(n);
        let mut rhs = Vector::zero(n);
        for i in 0..n {
            for j in 0..n {
                gram.set(i, j, self.metric.form_inner(&span[i], &span[j]));
            }
            rhs.set(i, self.metric.form_inner(form, &span[i]));
        }
        let coeffs = solve_linear(&gram, &rhs);
        let mut proj = AltForm::zero(form.dim(), form.degree());
        for i in 0..n {
            proj = proj.add(&span[i].scale(coeffs.get(i)));
        }
        (proj, coeffs)
    }

    fn span_lambda2_7(&self) -> Vec<AltForm<S>> {
        (0..DIM)
            .map(|i| self.phi.contract(&Vector::basis(DIM, i)))
            .collect()
    }

    fn span_lambda3_7(&self) -> Vec<AltForm<S>> {
        (0..DIM)
            .map(|i| self.psi.contract(&Vector::basis(DIM, i)))
            .collect()
    }

    /// Decompose a 2-form into its Λ²_7 ⊕ Λ²_14 components.
    pub fn decompose2(&self, beta: &AltForm<S>) -> (AltForm<S>, AltForm<S>) {
        assert_eq!(beta.degree(), 2);
        let (pi7, _) = self.project_span(beta, &self.span_lambda2_7());
        let pi14 = beta.sub(&pi7);
        (pi7, pi14)
    }

    /// Decompose a 3-form into its Λ³_1 ⊕ Λ³_7 ⊕ Λ³_27 components.
    pub fn decompose3(&self, gamma: &AltForm<S>) -> (AltForm<S>, AltForm<S>, AltForm<S>) {
        assert_eq!(gamma.degree(), 3);
        // <φ, φ> = 7, so π1 = (<γ, φ>/7) φ.
        let c1 = self.metric.form_inner(gamma, &self.phi) * S::from_ratio(1, 7);
        let pi1 = self.phi.scale(&c1);
        let (pi7, _) = self.project_span(gamma, &self.span_lambda3_7());
        let pi27 = gamma.sub(&pi1).sub(&pi7);
        (pi1, pi7, pi27)
    }

    /// Extract the torsion forms from the exterior derivatives of φ and ψ.
    pub fn torsion_forms(&self, dphi: &AltForm<S>, dpsi: &AltForm<S>) -> TorsionForms<S> {
        assert_eq!(dphi.degree(), 4);
        assert_eq!(dpsi.degree(), 5);
        let star_dphi = self.metric.hodge_star(dphi);
        let tau0 = self.metric.form_inner(&star_dphi, &self.phi) * S::from_ratio(1, 7);

        // ∗(α ∧ ψ) = α♯ ⌟ φ, so ∗dψ = 4 τ1♯ ⌟ φ + ∗(τ2 ∧ φ) with the
        // second summand in Λ²_14 where ∗(τ2 ∧ φ) = −τ2.
        let star_dpsi = self.metric.hodge_star(dpsi);
        let (_, coeffs) = self.project_span(&star_dpsi, &self.span_lambda2_7());
        let quarter = S::from_ratio(1, 4);
        let mut tau1_sharp = Vector::zero(DIM);
        for i in 0..DIM {
            tau1_sharp.set(i, coeffs.get(i).clone() * quarter.clone());
        }
        let tau1 = self.metric.flat(&tau1_sharp);
        let (pi7, pi14) = self.decompose2(&star_dpsi);
        debug_assert_eq!(
            pi7,
            self.tau1_sharp_hook_phi(&tau1).scale(&S::from_ratio(4, 1))
        );
        let tau2 = pi14.neg();

        // ∗dφ = τ0 φ + 3 ∗(τ1 ∧ φ) + τ3.
        let tau3 = star_dphi
            .sub(&self.phi.scale(&tau0))
            .sub(
                &self
                    .metric
                    .hodge_star(&tau1.wedge(&self.phi))
                    .scale(&S::from_ratio(3, 1)),
            );
        TorsionForms { tau0, tau1, tau2, tau3 }
    }

    fn tau1_sharp_hook_phi(&self, tau1: &AltForm<S>) -> AltForm<S> {
        self.phi.contract(&self.metric.sharp(tau1))
    }

    /// Full torsion tensor `T = (τ0/4) g − τ1♯ ⌟ φ − ½ τ2 − ¼ j_φ(τ3)`,
    /// with the 2-forms read as antisymmetric 2-tensors.
    pub fn full_torsion(&self, torsion: &TorsionForms<S>) -> Tensor2<S> {
        let n = DIM;
        let mut t = self
            .metric
            .tensor()
            .as_tensor2()
            .scale(&(torsion.tau0.clone() * S::from_ratio(1, 4)));
        let hook = self.tau1_sharp_hook_phi(&torsion.tau1);
        let j3 = self.j_op(&torsion.tau3);
        for i in 0..n {
            for j in 0..n {
                let mut v = t.get(i, j).clone();
                if i != j {
                    v = v - hook.coeff(&[i as u8, j as u8])
                        - torsion.tau2.coeff(&[i as u8, j as u8]) * S::from_ratio(1, 2);
                }
                v = v - j3.get(i, j).clone() * S::from_ratio(1, 4);
                t.set(i, j, v);
            }
        }
        t
    }
}

/// Read a 2-form as the antisymmetric 2-tensor with the same components.
pub fn form_as_tensor2<S: Scalar>(beta: &AltForm<S>) -> Tensor2<S> {
    assert_eq!(beta.degree(), 2);
    let n = beta.dim() as usize;
    let mut t = Tensor2::zero(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                t.set(i, j, beta.coeff(&[i as u8, j as u8]));
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};
    use num_traits::{One, Zero};

    fn std_g2() -> G2Structure<Rat> {
        G2Structure::standard()
    }

    #[test]
    fn standard_metric_is_euclidean() {
        let s = std_g2();
        assert_eq!(s.metric, Metric::euclidean(7));
        assert_eq!(*s.metric.vol_coeff(), Rat::one());
        assert_eq!(s.metric.form_norm2(&s.phi), rat(7, 1));
        assert_eq!(s.metric.form_norm2(&s.psi), rat(7, 1));
        assert_eq!(s.phi.wedge(&s.psi), s.metric.vol().scale(&rat(7, 1)));
    }

    #[test]
    fn scaled_phi_rescales_metric() {
        // φ ↦ c³ φ gives g ↦ c² g (here c = 2 so roots stay rational).
        let phi: AltForm<Rat> = standard_phi::<Rat>().scale(&rat(8, 1));
        let m = metric_from_phi(&phi).unwrap();
        assert_eq!(
            m.tensor(),
            &SymTensor2::from_fn(7, |i, j| if i == j { rat(4, 1) } else { Rat::zero() })
        );
        assert_eq!(*m.vol_coeff(), rat(128, 1)); // (c²)^{7/2}
    }

    #[test]
    fn i_of_metric_and_j_of_phi() {
        let s = std_g2();
        assert_eq!(s.i_op(s.metric.tensor()), s.phi.scale(&rat(3, 1)));
        assert_eq!(
            s.j_op(&s.phi),
            s.metric.tensor().scale(&rat(6, 1))
        );
    }

    #[test]
    fn two_form_decomposition_eigenvalues() {
        // ∗(φ ∧ β) = 2β on Λ²_7 and −β on Λ²_14.
        let s = std_g2();
        let beta: AltForm<Rat> = AltForm::basis(7, &[0, 1])
            .add(&AltForm::basis(7, &[2, 5]).scale(&rat(3, 2)))
            .add(&AltForm::basis(7, &[4, 6]).scale(&rat(-7, 3)));
        let (pi7, pi14) = s.decompose2(&beta);
        assert_eq!(pi7.add(&pi14), beta);
        assert_eq!(
            s.metric.hodge_star(&s.phi.wedge(&pi7)),
            pi7.scale(&rat(2, 1))
        );
        assert_eq!(s.metric.hodge_star(&s.phi.wedge(&pi14)), pi14.neg());
        assert!(s.metric.form_inner(&pi7, &pi14).is_zero());
    }

    #[test]
    fn three_form_decomposition() {
        let s = std_g2();
        let gamma: AltForm<Rat> = AltForm::basis(7, &[0, 1, 2])
            .add(&AltForm::basis(7, &[1, 3, 5]).scale(&rat(5, 4)))
            .add(&AltForm::basis(7, &[2, 4, 6]).scale(&rat(-1, 3)))
            .add(&AltForm::basis(7, &[0, 2, 5]).scale(&rat(2, 7)));
        let (pi1, pi7, pi27) = s.decompose3(&gamma);
        assert_eq!(pi1.add(&pi7).add(&pi27), gamma);
        for (a, b) in [(&pi1, &pi7), (&pi1, &pi27), (&pi7, &pi27)] {
            assert!(s.metric.form_inner(a, b).is_zero());
        }
        // π27 is orthogonal to φ and to every X ⌟ ψ.
        assert!(s.metric.form_inner(&pi27, &s.phi).is_zero());
        for i in 0..7 {
            let hook = s.psi.contract(&Vector::basis(7, i));
            assert!(s.metric.form_inner(&pi27, &hook).is_zero());
        }
    }

    #[test]
    fn torsion_extraction_roundtrip() {
        let s = std_g2();
        // Pure τ0: dφ = c ψ, dψ = 0.
        let c = rat(5, 3);
        let t = s.torsion_forms(&s.psi.scale(&c), &AltForm::zero(7, 5));
        assert_eq!(t.tau0, c);
        assert!(t.tau1.is_zero() && t.tau2.is_zero() && t.tau3.is_zero());
        // T = (τ0/4) g for pure τ0.
        assert_eq!(
            s.full_torsion(&t),
            s.metric.tensor().as_tensor2().scale(&rat(5, 12))
        );

        // Pure τ1: dφ = 3 τ1 ∧ φ, dψ = 4 τ1 ∧ ψ.
        let alpha: AltForm<Rat> = AltForm::basis(7, &[3]).scale(&rat(2, 5));
        let t = s.torsion_forms(
            &alpha.scale(&rat(3, 1)).wedge(&s.phi),
            &alpha.scale(&rat(4, 1)).wedge(&s.psi),
        );
        assert!(t.tau0.is_zero());
        assert_eq!(t.tau1, alpha);
        assert!(t.tau2.is_zero() && t.tau3.is_zero());

        // Pure τ2: dφ = 0, dψ = τ2 ∧ φ with τ2 ∈ Λ²_14.
        let raw: AltForm<Rat> = AltForm::basis(7, &[1, 3]).add(&AltForm::basis(7, &[2, 6]));
        let (_, tau2) = s.decompose2(&raw);
        assert!(!tau2.is_zero());
        let t = s.torsion_forms(&AltForm::zero(7, 4), &tau2.wedge(&s.phi));
        assert!(t.tau0.is_zero() && t.tau1.is_zero() && t.tau3.is_zero());
        assert_eq!(t.tau2, tau2);
    }
}
