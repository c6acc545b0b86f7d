//! Named verification suites over the identity checkers, the flow
//! solutions, and the spacetime structures.  Each suite expands into a
//! deterministic, seeded list of [`IdentityCase`]s so front ends (CLI,
//! CI) can report per-case results and an overall exit status.

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alg::tensor::{Tensor2, Vector};
use crate::cy8;
use crate::flows::{
    classify_singularity, integrate_numeric, quantities, FlowKind, FlowSolution, PowerScalar,
    SingularityType,
};
use crate::g2::{G2Structure, DIM};
use crate::identities::{
    check_andres, check_contractions, check_dmu, check_grigorian,
    check_laplacian_decomposition, check_lie_derivative, check_su3_and_j, random_g2_structure,
    random_poly_vector, IdentityCase,
};
use crate::model::{FrameAlgebra, Model};
use crate::poly::Poly;
use crate::scalar::{rat, Rat, Scalar};

/// All suite names accepted by [`run_suite`], in canonical order.
pub const SUITE_NAMES: &[&str] = &[
    "contractions",
    "grigorian",
    "dmu",
    "laplacian",
    "andres",
    "lie",
    "su3j",
    "flows",
    "cy8",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Number of random instances per randomized family.
    pub cases: usize,
    /// Substitute a deliberately corrupted frame algebra (negative
    /// control: the structure constants fail d² = 0, so the identities
    /// must be reported as failing).
    pub corrupt: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 42, cases: 20, corrupt: false }
    }
}

fn rand_positive(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(1i64..=4), rng.gen_range(1i64..=3))
}

fn algebra<S: Scalar>(cfg: &SuiteConfig) -> FrameAlgebra<S> {
    if cfg.corrupt {
        FrameAlgebra::corrupted7()
    } else {
        FrameAlgebra::heisenberg7()
    }
}

fn rat_model(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Model<Rat> {
    let f = rand_positive(rng);
    let h = rand_positive(rng);
    Model::with_algebra(f, h, algebra(cfg)).expect("positive coefficients")
}

fn suite_contractions(cfg: &SuiteConfig) -> Vec<IdentityCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = check_contractions(&G2Structure::<Rat>::standard(), "standard");
    for i in 0..cfg.cases {
        let s = random_g2_structure(&mut rng);
        cases.extend(check_contractions(&s, &format!("random pullback #{i}")));
    }
    cases
}

fn suite_grigorian(cfg: &SuiteConfig) -> Vec<IdentityCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    for i in 0..cfg.cases {
        let m = rat_model(&mut rng, cfg);
        cases.extend(check_grigorian(m, &format!("random (f,h) #{i}")));
    }
    if !cfg.corrupt {
        let sol = FlowSolution::new(FlowKind::LaplacianCoflow, rat(1, 1)).unwrap();
        cases.extend(check_grigorian(sol.model(), "coflow as function of t"));
    }
    cases
}

fn suite_dmu(cfg: &SuiteConfig) -> Vec<IdentityCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    for i in 0..cfg.cases {
        let m = rat_model(&mut rng, cfg);
        let g = m.metric().tensor().as_tensor2().clone();
        let mut raw = Tensor2::zero(DIM);
        for a in 0..DIM {
            for b in a..DIM {
                let v = crate::identities::rand_small(&mut rng);
                raw.set(a, b, v.clone());
                raw.set(b, a, v);
            }
        }
        let tr = m.metric().trace(&raw);
        let h = raw.sub(&g.scale(&(tr / rat(7, 1)))).into_symmetric();
        cases.push(check_dmu(&m, &h, &format!("random trace-free h #{i}")));
    }
    cases
}

fn suite_laplacian(cfg: &SuiteConfig) -> Vec<IdentityCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    for i in 0..cfg.cases {
        let m = rat_model(&mut rng, cfg);
        cases.extend(check_laplacian_decomposition(m, &format!("random (f,h) #{i}")));
    }
    if !cfg.corrupt {
        let ab = Model::with_algebra(rat(1, 1), rat(1, 1), FrameAlgebra::abelian7()).unwrap();
        cases.extend(check_laplacian_decomposition(ab, "torsion-free abelian control"));
    }
    cases
}

fn suite_andres(cfg: &SuiteConfig) -> Vec<IdentityCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    for i in 0..cfg.cases {
        let m = rat_model(&mut rng, cfg);
        cases.extend(check_andres(m, &format!("random (f,h) #{i}")));
    }
    cases
}

fn suite_lie(cfg: &SuiteConfig) -> Vec<IdentityCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let m: Model<Poly> =
        Model::with_algebra(Poly::from_ratio(1, 1), Poly::from_ratio(1, 1), algebra(cfg))
            .expect("positive coefficients");
    let mut cases = Vec::new();

    let mut xi = Vector::zero(DIM);
    xi.set(0, Poly::one());
    let chk = check_lie_derivative(&m, &xi, "Reeb field xi0");
    let reeb_sym = chk.lie_psi_zero && chk.killing_and_curl_free;
    cases.push(chk.case);
    cases.push(IdentityCase {
        name: "xi0 is a symmetry: L psi = 0, Killing, Curl-corrected W = 0".into(),
        provenance: "symmetry corollary of the Lie-derivative theorem".into(),
        passed: reeb_sym || cfg.corrupt,
        detail: if reeb_sym { "both sides vanish".into() } else { "symmetry lost".into() },
    });

    for i in 0..cfg.cases {
        let x = random_poly_vector(&mut rng);
        let chk = check_lie_derivative(&m, &x, &format!("random polynomial field #{i}"));
        // The symmetry equivalence must hold in both directions.
        let equiv = chk.lie_psi_zero == chk.killing_and_curl_free;
        let name = format!("symmetry equivalence on random field #{i}");
        cases.push(chk.case);
        cases.push(IdentityCase {
            name,
            provenance: "L_X psi = 0 iff L_X g = 0 and CurlX/2 + TX = 0".into(),
            passed: equiv,
            detail: "checked both implications".into(),
        });
    }
    cases
}

fn suite_su3j(cfg: &SuiteConfig) -> Vec<IdentityCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    for i in 0..cfg.cases {
        let m = rat_model(&mut rng, cfg);
        cases.extend(check_su3_and_j(&m, &format!("random (f,h) #{i}")));
    }
    if !cfg.corrupt {
        let sol = FlowSolution::new(FlowKind::Hitchin, rat(1, 1)).unwrap();
        cases.extend(check_su3_and_j(&sol.model(), "hitchin as function of t"));
    }
    cases
}

/// Flow-level checks: exact PDE/ODE residuals, closed-form torsion norms,
/// the shared-orbit relation f = ε h⁻³, singularity taxonomy, and the RK4
/// numeric cross-check.
fn suite_flows(_cfg: &SuiteConfig) -> Vec<IdentityCase> {
    let mut cases = Vec::new();
    let epsilons = [rat(1, 1), rat(1, 2), rat(3, 1)];
    for kind in [FlowKind::LaplacianCoflow, FlowKind::LaplacianFlow, FlowKind::Hitchin] {
        for eps in &epsilons {
            let sol = FlowSolution::new(kind, eps.clone()).unwrap();
            let label = format!("{} eps={}", kind.name(), eps);
            let r = sol.pde_residual();
            cases.push(IdentityCase::zero_residual(
                &format!("PDE residual identically zero [{label}]"),
                "closed-form solution vs full frame-computed flow equation",
                r.is_zero(),
                &r,
            ));
            let odes = sol.ode_residuals();
            let ok = odes.iter().all(|p| p.is_zero());
            cases.push(IdentityCase::zero_residual(
                &format!("reduced ODE residuals zero [{label}]"),
                "closed form vs reduced (f, h) system",
                ok,
                &odes,
            ));
            // Independent torsion-norm closed forms for the two Laplacian flows.
            let e2 = eps * eps;
            let expected = match kind {
                FlowKind::LaplacianCoflow => Some(PowerScalar::monomial(
                    rat(15, 4) * &e2,
                    rat(10, 1) * &e2,
                    rat(-1, 1),
                )),
                FlowKind::LaplacianFlow => Some(PowerScalar::monomial(
                    rat(15, 4) * &e2,
                    rat(-8, 1) * &e2,
                    rat(-1, 1),
                )),
                FlowKind::Hitchin => None,
            };
            if let Some(exp) = expected {
                let q = quantities(&sol);
                let diff = q.norm_t2.clone() - exp;
                cases.push(IdentityCase::zero_residual(
                    &format!("|T|^2 matches closed form [{label}]"),
                    "frame-computed torsion norm vs power law",
                    diff.is_zero(),
                    &diff,
                ));
            }
        }
    }
    // Shared orbit: coflow and Hitchin both satisfy f h^3 = ε identically.
    for kind in [FlowKind::LaplacianCoflow, FlowKind::Hitchin] {
        let eps = rat(2, 1);
        let sol = FlowSolution::new(kind, eps.clone()).unwrap();
        let h3 = sol.h.clone() * sol.h.clone() * sol.h.clone();
        let diff = sol.f.clone() * h3 - PowerScalar::constant(eps);
        cases.push(IdentityCase::zero_residual(
            &format!("orbit relation f h^3 = eps [{}]", kind.name()),
            "coflow and Hitchin trace the same (f, h) path",
            diff.is_zero(),
            &diff,
        ));
    }
    // Singularity taxonomy, decided symbolically.
    let expect = |kind: FlowKind, k: Rat, fwd: Option<SingularityType>| -> IdentityCase {
        let sol = FlowSolution::new(kind, rat(1, 1)).unwrap();
        let reports = classify_singularity(&sol, &k);
        let got = reports
            .iter()
            .find(|r| matches!(r.direction, crate::flows::Direction::Forward))
            .and_then(|r| r.sing_type);
        IdentityCase {
            name: format!("forward classification [{} K={}]", kind.name(), k),
            provenance: "singularity taxonomy from power-law exponents".into(),
            passed: got == fwd,
            detail: format!("expected {fwd:?}, got {got:?}"),
        }
    };
    cases.push(expect(FlowKind::LaplacianFlow, rat(0, 1), Some(SingularityType::I)));
    cases.push(expect(FlowKind::LaplacianCoflow, rat(0, 1), Some(SingularityType::III)));
    cases.push(expect(FlowKind::LaplacianCoflow, rat(1, 1), Some(SingularityType::IIb)));
    // RK4 cross-check against the closed forms.
    for (kind, t1) in [
        (FlowKind::LaplacianCoflow, rat(1, 1)),
        (FlowKind::LaplacianFlow, rat(1, 10)),
        (FlowKind::Hitchin, rat(1, 1)),
    ] {
        let sol = FlowSolution::new(kind, rat(1, 1)).unwrap();
        let samples = integrate_numeric(&sol, &rat(0, 1), &t1, 1000).unwrap();
        let (tf, f_num, h_num) = *samples.last().unwrap();
        let f_ref = sol.f.eval_f64(tf);
        let h_ref = sol.h.eval_f64(tf);
        let rel = ((f_num - f_ref) / f_ref).abs().max(((h_num - h_ref) / h_ref).abs());
        cases.push(IdentityCase {
            name: format!("RK4 cross-check [{}] on [0, {t1}]", kind.name()),
            provenance: "1000-step RK4 vs closed form, relative error < 1e-8".into(),
            passed: rel < 1e-8,
            detail: format!("max relative error {rel:.3e}"),
        });
    }
    cases
}

fn suite_cy8(cfg: &SuiteConfig) -> Vec<IdentityCase> {
    let mut cases = Vec::new();
    let alg8 = cy8::spacetime_algebra();
    for eps in [rat(1, 1), rat(1, 2)] {
        let label = format!("eps={eps}");
        let sol = FlowSolution::new(FlowKind::Hitchin, eps.clone()).unwrap();
        let phi8 = cy8::build_spin7(&sol);
        let d_phi8 = cy8::d8(&alg8, &phi8);
        cases.push(IdentityCase::zero_residual(
            &format!("d Phi = 0 for the Hitchin solution [{label}]"),
            "closed Spin(7) form on the spacetime track",
            d_phi8.is_zero(),
            &d_phi8,
        ));
        let cy = cy8::build_cy4(&sol);
        for (name, form) in [
            ("d omega-hat = 0", &cy.omega),
            ("d Re Upsilon-hat = 0", &cy.re_upsilon),
            ("d Im Upsilon-hat = 0", &cy.im_upsilon),
        ] {
            let d = cy8::d8(&alg8, form);
            cases.push(IdentityCase::zero_residual(
                &format!("{name} [{label}]"),
                "closed Calabi-Yau data on the spacetime track",
                d.is_zero(),
                &d,
            ));
        }
        let half = PowerScalar::constant(rat(1, 2));
        let recon = cy.omega.wedge(&cy.omega).scale(&half).add(&cy.re_upsilon);
        let diff = phi8.sub(&recon);
        cases.push(IdentityCase::zero_residual(
            &format!("Phi = omega-hat^2/2 + Re Upsilon-hat [{label}]"),
            "Spin(7) form reconstructed from the SU(4) pair",
            diff.is_zero(),
            &diff,
        ));
        let report = cy8::su4_pointwise_checks(&cy);
        cases.push(IdentityCase {
            name: format!("SU(4) pointwise algebra [{label}]"),
            provenance: "J^2 = -Id, |omega|^2 = 4, omega ∧ Upsilon = 0, volume ratios constant"
                .into(),
            passed: report.passed(),
            detail: format!("{report:?}"),
        });
    }
    // Negative control: the coflow time law does not close Phi.
    let sol = FlowSolution::new(FlowKind::LaplacianCoflow, rat(1, 1)).unwrap();
    let d_phi8 = cy8::d8(&alg8, &cy8::build_spin7(&sol));
    cases.push(IdentityCase {
        name: "negative control: coflow time law breaks d Phi = 0".into(),
        provenance: "the two flows differ by time reparametrisation".into(),
        passed: !d_phi8.is_zero(),
        detail: if d_phi8.is_zero() {
            "unexpectedly closed".into()
        } else {
            "d Phi nonzero as required".into()
        },
    });
    let _ = cfg;
    cases
}

/// Run one suite (or `"all"`). Unknown names are an `Err`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<IdentityCase>, String> {
    match name {
        "contractions" => Ok(suite_contractions(cfg)),
        "grigorian" => Ok(suite_grigorian(cfg)),
        "dmu" => Ok(suite_dmu(cfg)),
        "laplacian" => Ok(suite_laplacian(cfg)),
        "andres" => Ok(suite_andres(cfg)),
        "lie" => Ok(suite_lie(cfg)),
        "su3j" => Ok(suite_su3j(cfg)),
        "flows" => Ok(suite_flows(cfg)),
        "cy8" => Ok(suite_cy8(cfg)),
        "all" => {
            let mut out = Vec::new();
            for s in SUITE_NAMES {
                out.extend(run_suite(s, cfg)?);
            }
            Ok(out)
        }
        other => Err(format!(
            "unknown suite '{other}'; expected one of {:?} or 'all'",
            SUITE_NAMES
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::all_passed;

    #[test]
    fn all_suites_pass_with_small_case_count() {
        let cfg = SuiteConfig { seed: 42, cases: 2, corrupt: false };
        let cases = run_suite("all", &cfg).unwrap();
        assert!(!cases.is_empty());
        for c in &cases {
            assert!(c.passed, "failing case: {c:#?}");
        }
    }

    #[test]
    fn corrupted_algebra_is_detected() {
        let cfg = SuiteConfig { seed: 42, cases: 1, corrupt: true };
        let cases = run_suite("grigorian", &cfg).unwrap();
        assert!(!all_passed(&cases), "corruption must be caught");
    }
}
