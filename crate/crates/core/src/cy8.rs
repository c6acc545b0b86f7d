//! 8-dimensional spacetime structures over the one-parameter family: the
//! closed 4-form Φ = dt∧φ_t + ψ_t (torsion-free Spin(7) when the family
//! solves the ψ-evolution by dφ) and the Calabi–Yau (SU(4)) triple
//! (ω̂, ĝ, Υ̂).  Frame: index 0 = dt, indices 1..=7 = the 7-dimensional
//! frame shifted up by one; coefficients are power laws in t.

use num_traits::{One, Zero};

use crate::alg::altform::{indices_of, merge_sign, AltForm};
use crate::alg::metric::Metric;
use crate::alg::tensor::{SymTensor2, Tensor2};
use crate::flows::{FlowSolution, PowerScalar};
use crate::model::FrameAlgebra;
use crate::scalar::Scalar;

pub const DIM8: usize = 8;

/// Push a 7-dimensional frame form into the 8-dimensional frame
/// (spatial index i ↦ i+1; index 0 is reserved for dt).
pub fn embed(form: &AltForm<PowerScalar>) -> AltForm<PowerScalar> {
    let images: Vec<AltForm<PowerScalar>> = (0..7)
        .map(|i| AltForm::basis(DIM8 as u8, &[(i + 1) as u8]))
        .collect();
    form.substitute(&images)
}

pub fn dt() -> AltForm<PowerScalar> {
    AltForm::basis(DIM8 as u8, &[0])
}

/// Exterior derivative on the spacetime frame: the ∂/∂t term pairs with
/// dt, and each spatial coframe leg differentiates by the structure
/// constants (dt itself is closed).
pub fn d8(algebra: &FrameAlgebra<PowerScalar>, form: &AltForm<PowerScalar>) -> AltForm<PowerScalar> {
    let degree = form.degree();
    let mut out = AltForm::zero(DIM8 as u8, degree + 1);
    let entries: Vec<(u8, PowerScalar)> = form.iter().map(|(m, c)| (m, c.clone())).collect();
    for (mask, c) in entries {
        // time derivative of the coefficient ∧ dt
        if mask & 1 == 0 {
            let dc = c.deriv();
            if !dc.is_zero() {
                let sign = merge_sign(1, mask);
                let signed = if sign < 0 { PowerScalar::zero() - dc } else { dc };
                out.add_to_mask(mask | 1, signed);
            }
        }
        // spatial Maurer–Cartan term, leg by leg
        for (pos, idx) in indices_of(mask).into_iter().enumerate() {
            if idx == 0 {
                continue; // d(dt) = 0
            }
            let de = embed(&algebra.d_coframe((idx - 1) as usize));
            if de.is_zero() {
                continue;
            }
            let rest_mask = mask & !(1 << idx);
            let mut rest = AltForm::zero(DIM8 as u8, degree - 1);
            rest.set_mask(rest_mask, PowerScalar::one());
            let mut term = de.wedge(&rest);
            if pos % 2 == 1 {
                term = term.neg();
            }
            out = out.add(&term.scale(&c));
        }
    }
    out
}

/// The Spin(7) 4-form Φ = dt∧φ_t + ψ_t for any of the flows' (f, h).
pub fn build_spin7(sol: &FlowSolution) -> AltForm<PowerScalar> {
    let model = sol.model();
    dt().wedge(&embed(&model.structure.phi))
        .add(&embed(&model.structure.psi))
}

pub struct Cy4 {
    pub omega: AltForm<PowerScalar>,
    pub re_upsilon: AltForm<PowerScalar>,
    pub im_upsilon: AltForm<PowerScalar>,
    pub metric: Metric<PowerScalar>,
    pub algebra: FrameAlgebra<PowerScalar>,
}

/// The SU(4) triple: ω̂ = ε r⁻³ dt∧η0 + r² ω0 and
/// Υ̂ = (r³ dt + i ε η0)∧Υ0, with r = h and ε r⁻³ = f on the solution
/// orbit; ĝ = dt² + g_t.
pub fn build_cy4(sol: &FlowSolution) -> Cy4 {
    let model = sol.model();
    let f = model.f.clone();
    let h = model.h.clone();
    let eta = embed(&crate::model::eta0::<PowerScalar>());
    let om0 = embed(&crate::model::omega0::<PowerScalar>());
    let re0 = embed(&crate::model::re_upsilon0::<PowerScalar>());
    let im0 = embed(&crate::model::im_upsilon0::<PowerScalar>());
    let eps = PowerScalar::constant(sol.epsilon.clone());

    let h2 = h.clone() * h.clone();
    let h3 = h2.clone() * h.clone();
    let omega = dt().wedge(&eta).scale(&f).add(&om0.scale(&h2));
    // Re((r³dt + iεη0)∧(Re + iIm)) = r³ dt∧Re − ε η0∧Im, and
    // Im(...) = r³ dt∧Im + ε η0∧Re.
    let re_upsilon = dt()
        .wedge(&re0)
        .scale(&h3)
        .sub(&eta.wedge(&im0).scale(&eps));
    let im_upsilon = dt()
        .wedge(&im0)
        .scale(&h3)
        .add(&eta.wedge(&re0).scale(&eps));

    let mut g = SymTensor2::identity(DIM8);
    g.set_sym(1, 1, f.clone() * f.clone());
    for i in 2..DIM8 {
        g.set_sym(i, i, h2.clone());
    }
    let metric = Metric::new(g).expect("spacetime metric is positive with exact volume");
    Cy4 {
        omega,
        re_upsilon,
        im_upsilon,
        metric,
        algebra: spacetime_algebra(),
    }
}

/// The 7-dimensional structure constants, reused unchanged: `d8` shifts
/// the indices itself.
pub fn spacetime_algebra() -> FrameAlgebra<PowerScalar> {
    FrameAlgebra::heisenberg7()
}

#[derive(Debug)]
pub struct Su4Report {
    pub j_squared_plus_id: Tensor2<PowerScalar>,
    pub omega_norm2_minus_4: PowerScalar,
    pub omega_wedge_re: AltForm<PowerScalar>,
    pub omega_wedge_im: AltForm<PowerScalar>,
    pub upsilon_norm2: PowerScalar,
    pub holomorphic_volume_ratio: Option<(PowerScalar, PowerScalar)>,
}

impl Su4Report {
    pub fn passed(&self) -> bool {
        self.j_squared_plus_id.is_zero()
            && self.omega_norm2_minus_4.is_zero()
            && self.omega_wedge_re.is_zero()
            && self.omega_wedge_im.is_zero()
            && self.upsilon_norm2.is_constant()
            && self
                .holomorphic_volume_ratio
                .as_ref()
                .is_some_and(|(re, im)| re.is_constant() && im.is_constant())
    }
}

/// Pointwise SU(4) algebra: Ĵ = ĝ⁻¹ω̂ squares to −Id, |ω̂|² = 4,
/// ω̂∧Υ̂ = 0, |Υ̂|² constant in t, and Υ̂∧Ῡ̂ a constant multiple of ω̂⁴.
pub fn su4_pointwise_checks(cy: &Cy4) -> Su4Report {
    let n = DIM8;
    // ω̂ as a 2-tensor (lowered)
    let mut om = Tensor2::zero(n);
    for i in 0..n {
        for j in 0..n {
            if i < j {
                let v = cy.omega.coeff_mask((1 << i) | (1 << j));
                om.set(i, j, v.clone());
                om.set(j, i, PowerScalar::zero() - v);
            }
        }
    }
    let j = cy.metric.inverse().as_tensor2().matmul(&om);
    let j2 = j.matmul(&j);
    let j_squared_plus_id = j2.add(&Tensor2::identity(n));

    let omega_norm2_minus_4 =
        cy.metric.form_inner(&cy.omega, &cy.omega) - PowerScalar::from_ratio(4, 1);

    let omega_wedge_re = cy.omega.wedge(&cy.re_upsilon);
    let omega_wedge_im = cy.omega.wedge(&cy.im_upsilon);

    let upsilon_norm2 = cy.metric.form_inner(&cy.re_upsilon, &cy.re_upsilon)
        + cy.metric.form_inner(&cy.im_upsilon, &cy.im_upsilon);

    // Υ̂∧Ῡ̂ = (Re∧Re + Im∧Im) − i(Re∧Im − Im∧Re) against ω̂⁴, as a top form
    let top: u8 = 0xff;
    let om2 = cy.omega.wedge(&cy.omega);
    let om4 = om2.wedge(&om2);
    let om4_c = om4.coeff_mask(top);
    let real = cy.re_upsilon.wedge(&cy.re_upsilon).coeff_mask(top)
        + cy.im_upsilon.wedge(&cy.im_upsilon).coeff_mask(top);
    let imag = cy.im_upsilon.wedge(&cy.re_upsilon).coeff_mask(top)
        - cy.re_upsilon.wedge(&cy.im_upsilon).coeff_mask(top);
    let holomorphic_volume_ratio = if om4_c.is_zero() {
        None
    } else {
        Some((real.div_exact(&om4_c), imag.div_exact(&om4_c)))
    };

    Su4Report {
        j_squared_plus_id,
        omega_norm2_minus_4,
        omega_wedge_re,
        omega_wedge_im,
        upsilon_norm2,
        holomorphic_volume_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::FlowKind;
    use crate::scalar::rat;

    fn hitchin() -> FlowSolution {
        FlowSolution::new(FlowKind::Hitchin, rat(1, 1)).unwrap()
    }

    #[test]
    fn d8_squares_to_zero() {
        let alg = spacetime_algebra();
        let sol = hitchin();
        for form in [build_spin7(&sol), build_cy4(&sol).omega] {
            let dd = d8(&alg, &d8(&alg, &form));
            assert!(dd.is_zero());
        }
    }

    #[test]
    fn spin7_form_is_closed_for_hitchin_only() {
        let alg = spacetime_algebra();
        let phi8 = build_spin7(&hitchin());
        assert!(d8(&alg, &phi8).is_zero());

        // negative control: the coflow time laws do not close Φ
        let coflow = FlowSolution::new(FlowKind::LaplacianCoflow, rat(1, 1)).unwrap();
        assert!(!d8(&alg, &build_spin7(&coflow)).is_zero());
    }

    #[test]
    fn spin7_form_at_time_zero() {
        let phi8 = build_spin7(&hitchin());
        let phi8_0 = phi8.map(|c| PowerScalar::constant(c.eval_rat(&rat(0, 1)).unwrap()));
        let m = crate::model::Model::new(
            PowerScalar::constant(rat(1, 1)),
            PowerScalar::constant(rat(1, 1)),
        )
        .unwrap();
        let expect = dt()
            .wedge(&embed(&m.structure.phi))
            .add(&embed(&m.structure.psi));
        assert_eq!(phi8_0, expect);
    }

    #[test]
    fn cy4_forms_closed_and_reassemble_spin7() {
        let alg = spacetime_algebra();
        let sol = hitchin();
        let cy = build_cy4(&sol);
        assert!(d8(&alg, &cy.omega).is_zero());
        assert!(d8(&alg, &cy.re_upsilon).is_zero());
        assert!(d8(&alg, &cy.im_upsilon).is_zero());

        // Φ = ½ ω̂² + Re Υ̂
        let phi8 = build_spin7(&sol);
        let half_om2 = cy
            .omega
            .wedge(&cy.omega)
            .scale(&PowerScalar::from_ratio(1, 2));
        assert!(phi8.sub(&half_om2.add(&cy.re_upsilon)).is_zero());

        // ĝ = dt² + g_t: unit dt component, no cross terms
        assert!(cy.metric.tensor().get(0, 0).is_one());
        for i in 1..DIM8 {
            assert!(cy.metric.tensor().get(0, i).is_zero());
        }
    }

    #[test]
    fn su4_pointwise_algebra() {
        let cy = build_cy4(&hitchin());
        let report = su4_pointwise_checks(&cy);
        assert!(report.j_squared_plus_id.is_zero(), "J^2 = -Id fails");
        assert!(report.omega_norm2_minus_4.is_zero(), "|omega|^2 = 4 fails");
        assert!(report.omega_wedge_re.is_zero() && report.omega_wedge_im.is_zero());
        assert!(
            report.upsilon_norm2.is_constant(),
            "|Upsilon|^2 = {:?} not constant",
            report.upsilon_norm2
        );
        let (re, im) = report.holomorphic_volume_ratio.clone().unwrap();
        assert!(re.is_constant() && im.is_constant());
        assert!(report.passed());

        // also at other epsilon
        let sol = FlowSolution::new(FlowKind::Hitchin, rat(1, 2)).unwrap();
        assert!(su4_pointwise_checks(&build_cy4(&sol)).passed());
    }
}
