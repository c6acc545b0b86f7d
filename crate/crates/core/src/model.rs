//! Frame calculus on the 7-dimensional Heisenberg model.
//!
//! The frame is a left-invariant coframe `e^0, ..., e^6` with the only
//! nonzero brackets `[e1,e2] = [e3,e4] = [e5,e6] = −e0`, so that
//! `de^0 = ω0 = e^12 + e^34 + e^56` and the horizontal coframe is closed.
//! All tensors of interest have constant frame components, which keeps the
//! Levi-Civita connection, curvature, and covariant derivatives exact.

use crate::alg::altform::{indices_of, removal_sign, AltForm};
use crate::alg::metric::{Metric, MetricError};
use crate::alg::tensor::{SymTensor2, Tensor, Tensor2, Vector};
use crate::g2::{metric_from_phi, G2Structure, TorsionForms, DIM};
use crate::scalar::Scalar;

/// `ω0 = e^12 + e^34 + e^56`.
pub fn omega0<S: Scalar>() -> AltForm<S> {
    AltForm::basis(7, &[1, 2])
        .add(&AltForm::basis(7, &[3, 4]))
        .add(&AltForm::basis(7, &[5, 6]))
}

/// `Re Υ0 = e^135 − e^146 − e^236 − e^245`.
pub fn re_upsilon0<S: Scalar>() -> AltForm<S> {
    AltForm::basis(7, &[1, 3, 5])
        .sub(&AltForm::basis(7, &[1, 4, 6]))
        .sub(&AltForm::basis(7, &[2, 3, 6]))
        .sub(&AltForm::basis(7, &[2, 4, 5]))
}

/// `Im Υ0 = e^136 + e^145 + e^235 − e^246`.
pub fn im_upsilon0<S: Scalar>() -> AltForm<S> {
    AltForm::basis(7, &[1, 3, 6])
        .add(&AltForm::basis(7, &[1, 4, 5]))
        .add(&AltForm::basis(7, &[2, 3, 5]))
        .sub(&AltForm::basis(7, &[2, 4, 6]))
}

/// `η0 = e^0`.
pub fn eta0<S: Scalar>() -> AltForm<S> {
    AltForm::basis(7, &[0])
}

/// Structure constants of a 7-dimensional Lie algebra,
/// `[e_i, e_j] = c^k_{ij} e_k`, stored as c[k][i][j].
#[derive(Clone, Debug, PartialEq)]
pub struct FrameAlgebra<S> {
    c: Vec<Tensor2<S>>,
}

impl<S: Scalar> FrameAlgebra<S> {
    /// The Heisenberg algebra: `[e1,e2] = [e3,e4] = [e5,e6] = −e0`.
    pub fn heisenberg7() -> Self {
        let mut c0 = Tensor2::zero(DIM);
        for (i, j) in [(1, 2), (3, 4), (5, 6)] {
            c0.set(i, j, -S::one());
            c0.set(j, i, S::one());
        }
        let mut c = vec![c0];
        for _ in 1..DIM {
            c.push(Tensor2::zero(DIM));
        }
        FrameAlgebra { c }
    }

    /// The abelian algebra (torsion-free flat torus case; useful as a
    /// degenerate control).
    pub fn abelian7() -> Self {
        FrameAlgebra {
            c: vec![Tensor2::zero(DIM); DIM],
        }
    }

    /// Heisenberg algebra with one structure constant deliberately wrong —
    /// negative-control hook for the verification suites.
    pub fn corrupted7() -> Self {
        let mut alg = Self::heisenberg7();
        alg.c[0].set(5, 6, -S::from_ratio(2, 1));
        alg
    }

    pub fn bracket_coeff(&self, k: usize, i: usize, j: usize) -> &S {
        self.c[k].get(i, j)
    }

    /// `de^k` via the Maurer–Cartan equation `de^k = −½ c^k_{ij} e^i ∧ e^j`.
    pub fn d_coframe(&self, k: usize) -> AltForm<S> {
        let mut out = AltForm::zero(7, 2);
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                let c = self.c[k].get(i, j);
                if !c.is_zero() {
                    out.add_to_mask((1 << i) | (1 << j), -c.clone());
                }
            }
        }
        out
    }

    /// Exterior derivative of a constant-coefficient (left-invariant) form.
    pub fn d_invariant(&self, form: &AltForm<S>) -> AltForm<S> {
        let mut out = AltForm::zero(7, form.degree() + 1);
        for (mask, coeff) in form.iter() {
            for l in indices_of(mask) {
                // e^I = s · e^l ∧ e^{I\l}
                let s = removal_sign(mask, l);
                let mut rest: AltForm<S> = AltForm::zero(7, form.degree() - 1);
                rest.set_mask(mask & !(1 << l), S::one());
                let term = self.d_coframe(l as usize).wedge(&rest).scale(coeff);
                out = if s > 0 { out.add(&term) } else { out.sub(&term) };
            }
        }
        out
    }
}

/// Levi-Civita connection coefficients `∇_{e_i} e_j = Γ^k_{ij} e_k` for a
/// constant frame metric, via the Koszul formula.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<S> {
    /// gamma[k] is the matrix Γ^k_{ij}.
    gamma: Vec<Tensor2<S>>,
}

impl<S: Scalar> Connection<S> {
    pub fn levi_civita(algebra: &FrameAlgebra<S>, metric: &Metric<S>) -> Self {
        let n = DIM;
        let g = metric.tensor();
        let ginv = metric.inverse();
        // c_{ijk} = g([e_i,e_j], e_k)
        let c_low = |i: usize, j: usize, k: usize| -> S {
            let mut acc = S::zero();
            for m in 0..n {
                let c = algebra.bracket_coeff(m, i, j);
                if !c.is_zero() {
                    acc = acc + c.clone() * g.get(m, k).clone();
                }
            }
            acc
        };
        let half = S::from_ratio(1, 2);
        let mut gamma = vec![Tensor2::zero(n); n];
        for i in 0..n {
            for j in 0..n {
                // Γ_{ijk} = ½ (c_{ijk} − c_{jki} + c_{kij})
                let mut low = Vec::with_capacity(n);
                for k in 0..n {
                    low.push(
                        (c_low(i, j, k) - c_low(j, k, i) + c_low(k, i, j)) * half.clone(),
                    );
                }
                for l in 0..n {
                    let mut acc = S::zero();
                    for k in 0..n {
                        if !low[k].is_zero() {
                            acc = acc + ginv.get(l, k).clone() * low[k].clone();
                        }
                    }
                    gamma[l].set(i, j, acc);
                }
            }
        }
        Connection { gamma }
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &S {
        self.gamma[k].get(i, j)
    }

    /// Covariant derivative of a constant-component covariant tensor:
    /// `(∇T)_{i j1...jr} = −Σ_s Γ^m_{i js} T_{j1...m...jr}`.
    pub fn covariant_derivative(&self, t: &Tensor<S>) -> Tensor<S> {
        let n = DIM;
        let r = t.rank();
        let mut out = Tensor::zeros(n, r + 1);
        let mut idx = vec![0usize; r + 1];
        loop {
            let i = idx[0];
            let mut acc = S::zero();
            for s in 0..r {
                for m in 0..n {
                    let gam = self.gamma(m, i, idx[s + 1]);
                    if gam.is_zero() {
                        continue;
                    }
                    let mut inner: Vec<usize> = idx[1..].to_vec();
                    inner[s] = m;
                    let v = t.get(&inner);
                    if !v.is_zero() {
                        acc = acc - gam.clone() * v.clone();
                    }
                }
            }
            out.set(&idx, acc);
            if !advance(&mut idx, n) {
                break;
            }
        }
        out
    }

    /// Lowered curvature tensor `R_{ijkl} = g(R(e_i,e_j) e_k, e_l)` with
    /// `R(X,Y) = ∇_X ∇_Y − ∇_Y ∇_X − ∇_{[X,Y]}`.
    pub fn curvature(&self, algebra: &FrameAlgebra<S>, metric: &Metric<S>) -> Tensor<S> {
        let n = DIM;
        let g = metric.tensor();
        // R^l_{ijk}
        let mut upper = Tensor::zeros(n, 4);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut acc = S::zero();
                        for m in 0..n {
                            let a = self.gamma(m, j, k);
                            if !a.is_zero() {
                                acc = acc + self.gamma(l, i, m).clone() * a.clone();
                            }
                            let b = self.gamma(m, i, k);
                            if !b.is_zero() {
                                acc = acc - self.gamma(l, j, m).clone() * b.clone();
                            }
                            let c = algebra.bracket_coeff(m, i, j);
                            if !c.is_zero() {
                                acc = acc - c.clone() * self.gamma(l, m, k).clone();
                            }
                        }
                        upper.set(&[l, i, j, k], acc);
                    }
                }
            }
        }
        let mut low = Tensor::zeros(n, 4);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut acc = S::zero();
                        for m in 0..n {
                            let v = upper.get(&[m, i, j, k]);
                            if !v.is_zero() {
                                acc = acc + v.clone() * g.get(m, l).clone();
                            }
                        }
                        low.set(&[i, j, k, l], acc);
                    }
                }
            }
        }
        low
    }
}

fn advance(idx: &mut [usize], n: usize) -> bool {
    for p in (0..idx.len()).rev() {
        idx[p] += 1;
        if idx[p] < n {
            return true;
        }
        idx[p] = 0;
    }
    false
}

/// Norm squared of a fully covariant tensor: raise every index with g^{-1}
/// and contract against the original components.
pub fn tensor_norm2<S: Scalar>(metric: &Metric<S>, t: &Tensor<S>) -> S {
    let ginv = metric.inverse().as_tensor2();
    let mut raised = t.clone();
    for axis in 0..t.rank() {
        raised = raised.contract_axis(axis, ginv);
    }
    let n = t.dim();
    let r = t.rank();
    let mut acc = S::zero();
    let mut idx = vec![0usize; r];
    loop {
        let a = t.get(&idx);
        if !a.is_zero() {
            let b = raised.get(&idx);
            if !b.is_zero() {
                acc = acc + a.clone() * b.clone();
            }
        }
        if !advance(&mut idx, n) {
            break;
        }
    }
    acc
}

/// Ricci tensor `Ric_{jk} = g^{il} R_{ijkl}` from the lowered curvature.
pub fn ricci<S: Scalar>(metric: &Metric<S>, rm: &Tensor<S>) -> SymTensor2<S> {
    let n = DIM;
    let ginv = metric.inverse();
    SymTensor2::from_fn(n, |j, k| {
        let mut acc = S::zero();
        for i in 0..n {
            for l in 0..n {
                let v = rm.get(&[i, j, k, l]);
                if !v.is_zero() {
                    acc = acc + ginv.get(i, l).clone() * v.clone();
                }
            }
        }
        acc
    })
}

/// Divergence of a 2-tensor, `(div T)_k = g^{ij} (∇T)_{i j k}`.
pub fn divergence<S: Scalar>(metric: &Metric<S>, nabla_t: &Tensor<S>) -> Vector<S> {
    let n = DIM;
    let ginv = metric.inverse();
    let mut out = Vector::zero(n);
    for k in 0..n {
        let mut acc = S::zero();
        for i in 0..n {
            for j in 0..n {
                let v = nabla_t.get(&[i, j, k]);
                if !v.is_zero() {
                    acc = acc + ginv.get(i, j).clone() * v.clone();
                }
            }
        }
        out.set(k, acc);
    }
    out
}

/// The Heisenberg contact Calabi–Yau model with ansatz parameters (f, h):
/// `φ = f h² η0 ∧ ω0 + h³ Re Υ0`, inducing `g = f² η0² + h² g_D` and
/// `vol = f h⁶ e^{0...6}`.
#[derive(Clone, Debug)]
pub struct Model<S> {
    pub f: S,
    pub h: S,
    pub algebra: FrameAlgebra<S>,
    pub structure: G2Structure<S>,
    pub connection: Connection<S>,
}

impl<S: Scalar> Model<S> {
    pub fn new(f: S, h: S) -> Result<Self, MetricError> {
        Self::with_algebra(f, h, FrameAlgebra::heisenberg7())
    }

    /// Same ansatz over a different frame algebra (abelian control,
    /// corrupted negative control).
    pub fn with_algebra(f: S, h: S, algebra: FrameAlgebra<S>) -> Result<Self, MetricError> {
        let h2 = h.clone() * h.clone();
        let h3 = h2.clone() * h.clone();
        let phi = eta0::<S>()
            .wedge(&omega0())
            .scale(&(f.clone() * h2))
            .add(&re_upsilon0().scale(&h3));
        let metric = metric_from_phi(&phi)?;
        let connection = Connection::levi_civita(&algebra, &metric);
        let psi = metric.hodge_star(&phi);
        Ok(Model {
            f,
            h,
            algebra,
            structure: G2Structure { phi, psi, metric },
            connection,
        })
    }

    pub fn metric(&self) -> &Metric<S> {
        &self.structure.metric
    }

    pub fn d_phi(&self) -> AltForm<S> {
        self.algebra.d_invariant(&self.structure.phi)
    }

    pub fn d_psi(&self) -> AltForm<S> {
        self.algebra.d_invariant(&self.structure.psi)
    }

    pub fn torsion_forms(&self) -> TorsionForms<S> {
        self.structure.torsion_forms(&self.d_phi(), &self.d_psi())
    }

    /// Full torsion from the torsion forms.
    pub fn full_torsion(&self) -> Tensor2<S> {
        self.structure.full_torsion(&self.torsion_forms())
    }

    /// Full torsion from the covariant derivative of φ:
    /// `T_i^j = (1/24) (∇_i φ)_{lmn} ψ^{jlmn}`, returned lowered.
    pub fn full_torsion_from_nabla_phi(&self) -> Tensor2<S> {
        let n = DIM;
        let m = self.metric();
        let ginv = m.inverse().as_tensor2();
        let phi_t = Tensor::from_altform(&self.structure.phi);
        let nabla_phi = self.connection.covariant_derivative(&phi_t);
        let mut psi_up = Tensor::from_altform(&self.structure.psi);
        for axis in 0..4 {
            psi_up = psi_up.contract_axis(axis, ginv);
        }
        let coeff = S::from_ratio(1, 24);
        let mut t: Tensor2<S> = Tensor2::zero(n);
        for i in 0..n {
            for j_up in 0..n {
                let mut acc = S::zero();
                for l in 0..n {
                    for mm in 0..n {
                        for nn in 0..n {
                            let a = nabla_phi.get(&[i, l, mm, nn]);
                            if a.is_zero() {
                                continue;
                            }
                            let b = psi_up.get(&[j_up, l, mm, nn]);
                            if !b.is_zero() {
                                acc = acc + a.clone() * b.clone();
                            }
                        }
                    }
                }
                // lower the j index
                for j in 0..n {
                    let gj = m.tensor().get(j_up, j);
                    if !gj.is_zero() {
                        let add = acc.clone() * coeff.clone() * gj.clone();
                        let cur = t.get(i, j).clone();
                        t.set(i, j, cur + add);
                    }
                }
            }
        }
        t
    }

    /// ∇T as a rank-3 tensor (direction index first).
    pub fn nabla_torsion(&self) -> Tensor<S> {
        let t = Tensor::from_tensor2(&self.full_torsion());
        self.connection.covariant_derivative(&t)
    }

    pub fn curvature(&self) -> Tensor<S> {
        self.connection.curvature(&self.algebra, self.metric())
    }

    pub fn scalar_curvature(&self) -> S {
        let rm = self.curvature();
        let ric = ricci(self.metric(), &rm);
        self.metric().trace(ric.as_tensor2())
    }

    /// Hodge Laplacian `Δ = d d* + d* d` on invariant forms, with
    /// `d* = (−1)^k ∗^{-1} d ∗` on k-forms.
    pub fn hodge_laplacian(&self, form: &AltForm<S>) -> AltForm<S> {
        let d = |a: &AltForm<S>| self.algebra.d_invariant(a);
        let dstar = |a: &AltForm<S>| -> AltForm<S> {
            let s = self
                .metric()
                .hodge_star_inv(&d(&self.metric().hodge_star(a)));
            if a.degree() % 2 == 0 {
                s
            } else {
                s.neg()
            }
        };
        let k = form.degree();
        let mut out = d(&dstar(form));
        if k < 7 {
            out = out.add(&dstar(&d(form)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};
    use num_traits::Zero;

    fn model(fn_: i64, fd: i64, hn: i64, hd: i64) -> Model<Rat> {
        Model::new(rat(fn_, fd), rat(hn, hd)).unwrap()
    }

    fn fh_ratio(m: &Model<Rat>, fpow: u32, hpow: i32) -> Rat {
        let mut v = Rat::from_integer(1.into());
        for _ in 0..fpow {
            v *= m.f.clone();
        }
        for _ in 0..hpow.unsigned_abs() {
            if hpow > 0 {
                v *= m.h.clone();
            } else {
                v /= m.h.clone();
            }
        }
        v
    }

    #[test]
    fn maurer_cartan_and_d_squared() {
        let alg: FrameAlgebra<Rat> = FrameAlgebra::heisenberg7();
        assert_eq!(alg.d_coframe(0), omega0());
        for k in 1..7 {
            assert!(alg.d_coframe(k).is_zero());
        }
        let gamma = eta0::<Rat>()
            .wedge(&omega0())
            .add(&re_upsilon0().scale(&rat(3, 2)));
        assert!(alg.d_invariant(&alg.d_invariant(&gamma)).is_zero());
    }

    #[test]
    fn ansatz_metric_and_volume() {
        let m = model(2, 3, 5, 2);
        let g = m.metric().tensor();
        for i in 0..7 {
            for j in 0..7 {
                let expect = if i != j {
                    Rat::zero()
                } else if i == 0 {
                    fh_ratio(&m, 2, 0)
                } else {
                    m.h.clone() * m.h.clone()
                };
                assert_eq!(*g.get(i, j), expect);
            }
        }
        assert_eq!(*m.metric().vol_coeff(), fh_ratio(&m, 1, 6));
        // ψ = ½ ω0² − f h³ η0 ∧ Im Υ0  (as h⁴·½ω0² − f h³ η∧ImΥ)
        let h4 = fh_ratio(&m, 0, 4);
        let fh3 = m.f.clone() * fh_ratio(&m, 0, 3);
        let expected_psi = omega0::<Rat>()
            .wedge(&omega0())
            .scale(&(h4 / rat(2, 1)))
            .sub(&eta0::<Rat>().wedge(&im_upsilon0()).scale(&fh3));
        assert_eq!(m.structure.psi, expected_psi);
    }

    #[test]
    fn coclosed_and_torsion_forms() {
        let m = model(3, 1, 2, 1);
        assert!(m.d_psi().is_zero(), "ansatz must be coclosed");
        let t = m.torsion_forms();
        assert!(t.tau1.is_zero());
        assert!(t.tau2.is_zero());
        // τ0 = 6f/7h²
        assert_eq!(t.tau0, rat(6, 7) * fh_ratio(&m, 1, -2));
        // τ3 = (8/7) f² η0 ∧ ω0 − (6/7) f h Re Υ0
        let expected_tau3 = eta0::<Rat>()
            .wedge(&omega0())
            .scale(&(rat(8, 7) * fh_ratio(&m, 2, 0)))
            .sub(&re_upsilon0().scale(&(rat(6, 7) * m.f.clone() * m.h.clone())));
        assert_eq!(t.tau3, expected_tau3);
        // dφ reconstruction
        let rebuilt = m
            .structure
            .psi
            .scale(&t.tau0)
            .add(&m.metric().hodge_star(&t.tau3));
        assert_eq!(m.d_phi(), rebuilt);
    }

    #[test]
    fn full_torsion_two_routes_agree() {
        let m = model(3, 2, 2, 1);
        let t_forms = m.full_torsion();
        let t_nabla = m.full_torsion_from_nabla_phi();
        assert_eq!(t_forms, t_nabla);
        // T = −(3/2)(f³/h²) η0² + (f/2) g_D
        for i in 0..7 {
            for j in 0..7 {
                let expect = if i != j {
                    Rat::zero()
                } else if i == 0 {
                    rat(-3, 2) * fh_ratio(&m, 3, -2)
                } else {
                    m.f.clone() / rat(2, 1)
                };
                assert_eq!(*t_forms.get(i, j), expect, "T[{i}{j}]");
            }
        }
        // tr T = (3/2) f/h² and τ0 = (4/7) tr T
        let tr = m.metric().trace(&t_forms);
        assert_eq!(tr, rat(3, 2) * fh_ratio(&m, 1, -2));
        assert_eq!(m.torsion_forms().tau0, rat(4, 7) * tr);
    }

    #[test]
    fn curvature_invariants() {
        let m = model(5, 3, 3, 2);
        let rm = m.curvature();
        // |Rm|² = (69/4) f⁴/h⁸
        assert_eq!(
            tensor_norm2(m.metric(), &rm),
            rat(69, 4) * fh_ratio(&m, 4, -8)
        );
        // Ric = diag(3f⁴/2h⁴, −f²/2h² × 6)
        let ric = ricci(m.metric(), &rm);
        for i in 0..7 {
            for j in 0..7 {
                let expect = if i != j {
                    Rat::zero()
                } else if i == 0 {
                    rat(3, 2) * fh_ratio(&m, 4, -4)
                } else {
                    rat(-1, 2) * fh_ratio(&m, 2, -2)
                };
                assert_eq!(*ric.get(i, j), expect, "Ric[{i}{j}]");
            }
        }
        // R = −(3/2) f²/h⁴
        assert_eq!(m.scalar_curvature(), rat(-3, 2) * fh_ratio(&m, 2, -4));
        // R = (tr T)² − |T|²
        let t = m.full_torsion();
        let tr = m.metric().trace(&t);
        let t2 = m.metric().tensor2_norm2(&t);
        assert_eq!(m.scalar_curvature(), tr.clone() * tr - t2.clone());
        // |T|² = (15/4) f²/h⁴
        assert_eq!(t2, rat(15, 4) * fh_ratio(&m, 2, -4));
        // |∇T|² = 12 f⁴/h⁸, div T = 0
        let nt = m.nabla_torsion();
        assert_eq!(tensor_norm2(m.metric(), &nt), rat(12, 1) * fh_ratio(&m, 4, -8));
        assert!(divergence(m.metric(), &nt).is_zero());
    }

    #[test]
    fn hodge_laplacian_on_coframe() {
        let m = model(1, 1, 1, 1);
        // At f = h = 1 the structure is the standard φ0; Δη0 computed two
        // ways: directly, and via Δ = dd* + d*d piecewise.
        let eta = eta0::<Rat>();
        let lap = m.hodge_laplacian(&eta);
        // dη0 = ω0, d*η0 = 0 (ω0 ∧ ... divergence-free), so Δη0 = d*ω0.
        let d = |a: &AltForm<Rat>| m.algebra.d_invariant(a);
        let star = |a: &AltForm<Rat>| m.metric().hodge_star(a);
        let dstar_omega = star(&d(&star(&omega0::<Rat>())));
        assert_eq!(lap, dstar_omega); // (−1)^k ∗⁻¹d∗ with k=2, m(n−m) even
        assert_eq!(lap, eta.scale(&rat(3, 1)));
    }
}
