//! The three flows on the ansatz family `φ_t = f h² η0∧ω0 + h³ Re Υ0`:
//! closed-form solutions as exact power laws in t, frame-level PDE
//! residuals, a Runge–Kutta cross-check, evolution of norms and
//! bookkeeping quantities, and symbolic singularity classification.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::alg::altform::AltForm;
use crate::model::{eta0, im_upsilon0, omega0, tensor_norm2, Model};
use crate::scalar::{rat, rat_nth_root, Rat, Scalar};

/// Sum of power-law terms `Σ c_α (1 + b t)^α` with a shared base b and
/// rational exponents α. Closed under ring operations (for matching
/// bases), exact d/dt, and monomial division/roots, which is exactly what
/// the ansatz metric coefficients need.
#[derive(Clone, PartialEq)]
pub struct PowerScalar {
    /// None while the value is constant in t; fixed once a genuine power
    /// of (1 + b t) enters.
    base: Option<Rat>,
    terms: BTreeMap<Rat, Rat>,
}

impl PowerScalar {
    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Rat::zero(), c);
        }
        PowerScalar { base: None, terms }
    }

    /// `c (1 + b t)^α`.
    pub fn monomial(c: Rat, b: Rat, alpha: Rat) -> Self {
        if c.is_zero() || alpha.is_zero() {
            return PowerScalar::constant(c);
        }
        let mut terms = BTreeMap::new();
        terms.insert(alpha, c);
        PowerScalar { base: Some(b), terms }
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.keys().all(|a| a.is_zero()) {
            self.base = None;
        }
        self
    }

    fn unify_base(&self, other: &Self) -> Option<Rat> {
        match (&self.base, &other.base) {
            (Some(a), Some(b)) => {
                assert_eq!(a, b, "power-law bases differ: {a} vs {b}");
                Some(a.clone())
            }
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.base.is_none()
    }

    pub fn constant_part(&self) -> Rat {
        self.terms.get(&Rat::zero()).cloned().unwrap_or_else(Rat::zero)
    }

    /// Exact derivative d/dt: `c α b (1 + b t)^{α−1}` termwise.
    pub fn deriv(&self) -> Self {
        let b = match &self.base {
            Some(b) => b.clone(),
            None => return PowerScalar::constant(Rat::zero()),
        };
        let mut out = PowerScalar::constant(Rat::zero());
        for (alpha, c) in &self.terms {
            if alpha.is_zero() {
                continue;
            }
            out = out
                + PowerScalar::monomial(
                    c * alpha * &b,
                    b.clone(),
                    alpha - Rat::one(),
                );
        }
        out
    }

    /// Exponents of the nonzero terms, ascending.
    pub fn exponents(&self) -> Vec<Rat> {
        self.terms.keys().cloned().collect()
    }

    /// Exact evaluation data at rational t: a list of `(c, u, α)` triples
    /// meaning `Σ c·u^α` with `u = 1 + b t` rational. The value itself is
    /// rational only when every α is an integer.
    pub fn eval_terms(&self, t: &Rat) -> Vec<(Rat, Rat, Rat)> {
        let u = match &self.base {
            Some(b) => Rat::one() + b * t,
            None => Rat::one(),
        };
        self.terms
            .iter()
            .map(|(a, c)| (c.clone(), u.clone(), a.clone()))
            .collect()
    }

    /// Exact rational value at rational t, when it exists.
    pub fn eval_rat(&self, t: &Rat) -> Option<Rat> {
        let mut acc = Rat::zero();
        for (c, u, a) in self.eval_terms(t) {
            acc += c * rat_pow(&u, &a)?;
        }
        Some(acc)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        let rf = |r: &Rat| ToPrimitive::to_f64(r).unwrap();
        for (a, c) in &self.terms {
            let u: f64 = match &self.base {
                Some(b) => 1.0 + rf(b) * t,
                None => 1.0,
            };
            acc += rf(c) * u.powf(rf(a));
        }
        acc
    }
}

/// `u^α` for rational u > 0 (or u ≠ 0 with integer α), when rational.
pub fn rat_pow(u: &Rat, alpha: &Rat) -> Option<Rat> {
    if alpha.is_integer() {
        let n = alpha.to_integer().to_i64()?;
        let mut acc = Rat::one();
        for _ in 0..n.unsigned_abs() {
            acc *= u;
        }
        if n < 0 {
            if u.is_zero() {
                return None;
            }
            acc = acc.recip();
        }
        return Some(acc);
    }
    // u^{p/q} = (u^{1/q})^p when the q-th root is rational.
    let q = alpha.denom().to_u32()?;
    let root = rat_nth_root(u, q)?;
    rat_pow(&root, &Rat::from_integer(alpha.numer().clone()))
}

impl fmt::Debug for PowerScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PowerScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if a.is_zero() {
                write!(f, "{c}")?;
            } else {
                let b = self.base.as_ref().unwrap();
                write!(f, "{c}*(1+{b}*t)^({a})")?;
            }
        }
        Ok(())
    }
}

impl Add for PowerScalar {
    type Output = PowerScalar;
    fn add(self, rhs: PowerScalar) -> PowerScalar {
        let base = self.unify_base(&rhs);
        let mut terms = self.terms;
        for (a, c) in rhs.terms {
            let e = terms.entry(a).or_insert_with(Rat::zero);
            *e += c;
        }
        PowerScalar { base, terms }.normalized()
    }
}

impl Sub for PowerScalar {
    type Output = PowerScalar;
    fn sub(self, rhs: PowerScalar) -> PowerScalar {
        self + (-rhs)
    }
}

impl Neg for PowerScalar {
    type Output = PowerScalar;
    fn neg(self) -> PowerScalar {
        PowerScalar {
            base: self.base,
            terms: self.terms.into_iter().map(|(a, c)| (a, -c)).collect(),
        }
    }
}

impl Mul for PowerScalar {
    type Output = PowerScalar;
    fn mul(self, rhs: PowerScalar) -> PowerScalar {
        let base = self.unify_base(&rhs);
        let mut terms: BTreeMap<Rat, Rat> = BTreeMap::new();
        for (aa, ca) in &self.terms {
            for (ab, cb) in &rhs.terms {
                let e = terms.entry(aa + ab).or_insert_with(Rat::zero);
                *e += ca * cb;
            }
        }
        PowerScalar { base, terms }.normalized()
    }
}

impl Zero for PowerScalar {
    fn zero() -> Self {
        PowerScalar::constant(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for PowerScalar {
    fn one() -> Self {
        PowerScalar::constant(Rat::one())
    }
}

impl Scalar for PowerScalar {
    fn from_ratio(n: i64, d: i64) -> Self {
        PowerScalar::constant(rat(n, d))
    }

    fn div_exact(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero power law");
        if self.is_zero() {
            return PowerScalar::zero();
        }
        assert!(
            other.is_monomial(),
            "power-law division only by monomials, got {other}"
        );
        let (da, dc) = other.terms.iter().next().unwrap();
        let base = self.unify_base(other);
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| (a - da, c / dc))
            .collect();
        PowerScalar { base, terms }.normalized()
    }

    fn nth_root_exact(&self, n: u32) -> Option<Self> {
        if self.is_zero() {
            return Some(PowerScalar::zero());
        }
        if !self.is_monomial() {
            return None;
        }
        let (a, c) = self.terms.iter().next().unwrap();
        let root = rat_nth_root(c, n)?;
        Some(
            PowerScalar::monomial(
                root,
                self.base.clone().unwrap_or_else(Rat::zero),
                a / rat(n as i64, 1),
            ),
        )
    }

    fn is_positive_scalar(&self) -> bool {
        // Sufficient criterion: positive on the whole domain 1 + b t > 0
        // when every coefficient is positive.
        !self.terms.is_empty() && self.terms.values().all(|c| c.is_positive())
    }

    fn from_rat(r: &Rat) -> Self {
        PowerScalar::constant(r.clone())
    }

    fn to_f64(&self) -> f64 {
        assert!(
            self.is_constant(),
            "time-dependent power law has no single f64 value"
        );
        ToPrimitive::to_f64(&self.constant_part()).unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlowKind {
    LaplacianCoflow,
    LaplacianFlow,
    Hitchin,
}

impl FlowKind {
    pub fn name(&self) -> &'static str {
        match self {
            FlowKind::LaplacianCoflow => "coflow",
            FlowKind::LaplacianFlow => "laplacian",
            FlowKind::Hitchin => "hitchin",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FlowError {
    NonPositiveEpsilon,
    OutsideInterval { t: Rat, t_min: Option<Rat>, t_max: Option<Rat> },
}

impl fmt::Display for FlowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowError::NonPositiveEpsilon => write!(f, "ε must be positive"),
            FlowError::OutsideInterval { t, t_min, t_max } => {
                let lo = t_min
                    .as_ref()
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| "-inf".into());
                let hi = t_max
                    .as_ref()
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| "inf".into());
                write!(f, "t = {t} outside the maximal interval ({lo}, {hi})")
            }
        }
    }
}

impl std::error::Error for FlowError {}

/// Closed-form solution of one of the three flows with initial data
/// `f(0) = ε, h(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSolution {
    pub kind: FlowKind,
    pub epsilon: Rat,
    pub f: PowerScalar,
    pub h: PowerScalar,
    /// Maximal existence interval; None means ±∞.
    pub t_min: Option<Rat>,
    pub t_max: Option<Rat>,
}

impl FlowSolution {
    pub fn new(kind: FlowKind, epsilon: Rat) -> Result<Self, FlowError> {
        if !epsilon.is_positive() {
            return Err(FlowError::NonPositiveEpsilon);
        }
        let eps2 = &epsilon * &epsilon;
        let sol = match kind {
            // f = ε(1+10ε²t)^{−3/10}, h = (1+10ε²t)^{1/10} on (−1/10ε², ∞)
            FlowKind::LaplacianCoflow => {
                let b = rat(10, 1) * &eps2;
                FlowSolution {
                    kind,
                    f: PowerScalar::monomial(epsilon.clone(), b.clone(), rat(-3, 10)),
                    h: PowerScalar::monomial(Rat::one(), b.clone(), rat(1, 10)),
                    t_min: Some(-b.recip()),
                    t_max: None,
                    epsilon,
                }
            }
            // f = ε(1−8ε²t)^{−1/2}, h = 1 on (−∞, 1/8ε²)
            FlowKind::LaplacianFlow => {
                let b = rat(-8, 1) * &eps2;
                FlowSolution {
                    kind,
                    f: PowerScalar::monomial(epsilon.clone(), b.clone(), rat(-1, 2)),
                    h: PowerScalar::constant(Rat::one()),
                    t_min: None,
                    t_max: Some(-b.recip()),
                    epsilon,
                }
            }
            // f = ε(1+(5/2)εt)^{−3/5}, h = (1+(5/2)εt)^{1/5} on (−2/5ε, ∞)
            FlowKind::Hitchin => {
                let b = rat(5, 2) * &epsilon;
                FlowSolution {
                    kind,
                    f: PowerScalar::monomial(epsilon.clone(), b.clone(), rat(-3, 5)),
                    h: PowerScalar::monomial(Rat::one(), b.clone(), rat(1, 5)),
                    t_min: Some(-b.recip()),
                    t_max: None,
                    epsilon,
                }
            }
        };
        Ok(sol)
    }

    pub fn contains(&self, t: &Rat) -> bool {
        self.t_min.as_ref().map_or(true, |lo| t > lo)
            && self.t_max.as_ref().map_or(true, |hi| t < hi)
    }

    pub fn check_time(&self, t: &Rat) -> Result<(), FlowError> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(FlowError::OutsideInterval {
                t: t.clone(),
                t_min: self.t_min.clone(),
                t_max: self.t_max.clone(),
            })
        }
    }

    /// The frame model with the solution's (f, h) as exact power laws:
    /// every derived quantity becomes a function of t.
    pub fn model(&self) -> Model<PowerScalar> {
        Model::new(self.f.clone(), self.h.clone()).expect("ansatz metric is positive")
    }

    /// Residual of the defining PDE with the closed form substituted,
    /// computed through the frame calculus (not through the ODE reduction):
    /// coflow `∂_tψ − Δψ`, flow `∂_tφ − Δφ`, Hitchin `∂_tψ − dφ`.
    /// Identically zero iff the solution is exact.
    pub fn pde_residual(&self) -> AltForm<PowerScalar> {
        let m = self.model();
        match self.kind {
            FlowKind::LaplacianCoflow => {
                let dpsi_dt = m.structure.psi.map(|c| c.deriv());
                dpsi_dt.sub(&m.hodge_laplacian(&m.structure.psi))
            }
            FlowKind::LaplacianFlow => {
                let dphi_dt = m.structure.phi.map(|c| c.deriv());
                dphi_dt.sub(&m.hodge_laplacian(&m.structure.phi))
            }
            FlowKind::Hitchin => {
                let dpsi_dt = m.structure.psi.map(|c| c.deriv());
                dpsi_dt.sub(&m.d_phi())
            }
        }
    }

    /// Residuals of the reduced ODE system under exact power-law calculus.
    pub fn ode_residuals(&self) -> Vec<PowerScalar> {
        let f = &self.f;
        let h = &self.h;
        let pow = |x: &PowerScalar, n: u32| -> PowerScalar {
            let mut acc = PowerScalar::one();
            for _ in 0..n {
                acc = acc * x.clone();
            }
            acc
        };
        let four = PowerScalar::from_ratio(4, 1);
        let two = PowerScalar::from_ratio(2, 1);
        match self.kind {
            // d/dt h⁴ = 4f², d/dt (f h³) = 0
            FlowKind::LaplacianCoflow => vec![
                pow(h, 4).deriv() - four * pow(f, 2),
                (f.clone() * pow(h, 3)).deriv(),
            ],
            // d/dt (f h²) = 4f³/h², d/dt h³ = 0; with h ≡ 1: f' = 4f³
            FlowKind::LaplacianFlow => vec![
                (f.clone() * pow(h, 2)).deriv() * pow(h, 2) - four * pow(f, 3),
                pow(h, 3).deriv(),
            ],
            // d/dt h⁴ = 2 f h², d/dt (f h³) = 0
            FlowKind::Hitchin => vec![
                pow(h, 4).deriv() - two * f.clone() * pow(h, 2),
                (f.clone() * pow(h, 3)).deriv(),
            ],
        }
    }
}

/// Right-hand side of the reduced ODE system in the state (f, h).
pub fn ode_rhs(kind: FlowKind, f: f64, h: f64) -> (f64, f64) {
    match kind {
        FlowKind::LaplacianCoflow => {
            // h' = f²/h³, f' = −3f h'/h (from f h³ constant)
            let hp = f * f / (h * h * h);
            (-3.0 * f * hp / h, hp)
        }
        FlowKind::LaplacianFlow => (4.0 * f * f * f, 0.0),
        FlowKind::Hitchin => {
            let hp = f / (2.0 * h);
            (-3.0 * f * hp / h, hp)
        }
    }
}

/// Classical 4th-order Runge–Kutta on the reduced (f, h) system.
/// Returns (t, f, h) samples including both endpoints.
pub fn integrate_numeric(
    sol: &FlowSolution,
    t0: &Rat,
    t1: &Rat,
    steps: usize,
) -> Result<Vec<(f64, f64, f64)>, FlowError> {
    sol.check_time(t0)?;
    sol.check_time(t1)?;
    assert!(steps >= 1);
    let t0f = ToPrimitive::to_f64(t0).unwrap();
    let t1f = ToPrimitive::to_f64(t1).unwrap();
    let dt = (t1f - t0f) / steps as f64;
    let kind = sol.kind;
    let mut f = sol.f.eval_f64(t0f);
    let mut h = sol.h.eval_f64(t0f);
    let mut out = Vec::with_capacity(steps + 1);
    out.push((t0f, f, h));
    for i in 0..steps {
        let (k1f, k1h) = ode_rhs(kind, f, h);
        let (k2f, k2h) = ode_rhs(kind, f + 0.5 * dt * k1f, h + 0.5 * dt * k1h);
        let (k3f, k3h) = ode_rhs(kind, f + 0.5 * dt * k2f, h + 0.5 * dt * k2h);
        let (k4f, k4h) = ode_rhs(kind, f + dt * k3f, h + dt * k3h);
        f += dt / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        h += dt / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h);
        out.push((t0f + (i + 1) as f64 * dt, f, h));
    }
    Ok(out)
}

/// All tracked quantities as exact power laws in t. Each norm is computed
/// from scratch through the frame calculus on the flow model, so equality
/// with the stated closed forms is a theorem check, not a tautology.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowQuantities {
    pub f: PowerScalar,
    pub h: PowerScalar,
    /// g = coeff_eta2 η0² + coeff_gd g_D
    pub coeff_eta2: PowerScalar,
    pub coeff_gd: PowerScalar,
    pub norm_t2: PowerScalar,
    pub norm_grad_t2: PowerScalar,
    pub norm_rm2: PowerScalar,
    /// Λ(t)² = |Rm|² + |T|⁴ + |∇T|² (Λ itself has an irrational
    /// coefficient, so the square is the exact object).
    pub lambda2: PowerScalar,
    /// vol(g_t)/vol(g_0) = f h⁶ / ε; also the Hitchin density ratio
    /// H(φ_t)/H(φ_0) since (1/7)φ∧ψ = λ vol.
    pub vol_density: PowerScalar,
    pub hitchin_ratio: PowerScalar,
    /// Coefficient of η0∧Im Υ0 in ψ_t relative to t = 0 (= f h³/ε).
    pub cohom_coeff: PowerScalar,
}

pub fn quantities(sol: &FlowSolution) -> FlowQuantities {
    let m = sol.model();
    let t = m.full_torsion();
    let norm_t2 = m.metric().tensor2_norm2(&t);
    let norm_grad_t2 = tensor_norm2(m.metric(), &m.nabla_torsion());
    let norm_rm2 = tensor_norm2(m.metric(), &m.curvature());
    let lambda2 =
        norm_rm2.clone() + norm_t2.clone() * norm_t2.clone() + norm_grad_t2.clone();
    let eps = PowerScalar::constant(sol.epsilon.clone());
    let h2 = sol.h.clone() * sol.h.clone();
    let h3 = h2.clone() * sol.h.clone();
    let vol_density = m.metric().vol_coeff().clone().div_exact(&eps);
    FlowQuantities {
        f: sol.f.clone(),
        h: sol.h.clone(),
        coeff_eta2: sol.f.clone() * sol.f.clone(),
        coeff_gd: h2,
        norm_t2,
        norm_grad_t2,
        norm_rm2,
        lambda2,
        vol_density: vol_density.clone(),
        hitchin_ratio: vol_density,
        cohom_coeff: (sol.f.clone() * h3).div_exact(&eps),
    }
}

/// Fixed-volume normalization: rescale g_t by (vol ratio)^{−2/7} so the
/// volume density is constant; returns the rescaled (η0², g_D)
/// coefficients as exact power laws.
pub fn normalized_metric(sol: &FlowSolution) -> (PowerScalar, PowerScalar) {
    let q = quantities(sol);
    let factor = q
        .vol_density
        .nth_root_exact(7)
        .expect("vol density is a monomial");
    let inv_factor2 = PowerScalar::one()
        .div_exact(&(factor.clone() * factor));
    (
        q.coeff_eta2 * inv_factor2.clone(),
        q.coeff_gd * inv_factor2,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityType {
    I,
    IIa,
    IIb,
    III,
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityType::I => write!(f, "I"),
            SingularityType::IIa => write!(f, "IIa"),
            SingularityType::IIb => write!(f, "IIb"),
            SingularityType::III => write!(f, "III"),
        }
    }
}

/// Classification of one time direction, decided purely from the
/// power-law exponents of Λ(t)² (no numeric sup estimation).
#[derive(Clone, Debug, PartialEq)]
pub struct SingularityReport {
    pub direction: Direction,
    /// Finite singular time, or None for an infinite-time direction.
    pub t_sing: Option<Rat>,
    /// None means no singularity in this direction (ancient side).
    pub sing_type: Option<SingularityType>,
    /// Exponents of the Λ² terms in u = |1 + b t|  (u → 0 at a finite
    /// singular time, u → ∞ as t → ±∞).
    pub lambda2_exponents: Vec<Rat>,
    pub controlling_exponent: Option<Rat>,
    pub note: String,
}

/// Classify both time directions. `synthetic_k` injects the K²-term of
/// the general (non-flat transverse) Λ(t) closed form, which scales like
/// the inverse-square transverse diameter h^{−4}; the model itself has
/// K = 0 (flat transverse geometry).
pub fn classify_singularity(sol: &FlowSolution, synthetic_k: &Rat) -> Vec<SingularityReport> {
    let q = quantities(sol);
    let mut lambda2 = q.lambda2.clone();
    if synthetic_k.is_positive() {
        let h4 = q.coeff_gd.clone() * q.coeff_gd.clone();
        let k2 = PowerScalar::constant(synthetic_k * synthetic_k);
        lambda2 = lambda2 + k2.div_exact(&h4);
    }
    let exps = lambda2.exponents();
    let min_exp = exps.first().cloned().unwrap_or_else(Rat::zero);
    let max_exp = exps.last().cloned().unwrap_or_else(Rat::zero);
    let mut out = Vec::new();
    for (direction, endpoint) in [
        (Direction::Forward, sol.t_max.clone()),
        (Direction::Backward, sol.t_min.clone()),
    ] {
        let report = match endpoint {
            Some(t_sing) => {
                // u ∝ |T − t| → 0: (T−t)·Λ bounded ⇔ every Λ² exponent is
                // ≥ −2 ⇔ Type I (Def 1.1); otherwise Type IIa.
                let ty = if min_exp >= rat(-2, 1) {
                    SingularityType::I
                } else {
                    SingularityType::IIa
                };
                SingularityReport {
                    direction,
                    t_sing: Some(t_sing),
                    sing_type: Some(ty),
                    lambda2_exponents: exps.clone(),
                    controlling_exponent: Some(min_exp.clone()),
                    note: format!(
                        "finite-time: (T-t)*Lambda bounded iff min exponent {min_exp} >= -2"
                    ),
                }
            }
            None if direction == Direction::Backward => SingularityReport {
                direction,
                t_sing: None,
                sing_type: None,
                lambda2_exponents: exps.clone(),
                controlling_exponent: None,
                note: "none (ancient)".into(),
            },
            None => {
                // u ∝ t → ∞: sup t·Λ = ∞ ⇔ some Λ² exponent is > −2 ⇔
                // Type IIb; otherwise Type III.
                let ty = if max_exp > rat(-2, 1) {
                    SingularityType::IIb
                } else {
                    SingularityType::III
                };
                SingularityReport {
                    direction,
                    t_sing: None,
                    sing_type: Some(ty),
                    lambda2_exponents: exps.clone(),
                    controlling_exponent: Some(max_exp.clone()),
                    note: format!(
                        "infinite-time: sup t*Lambda infinite iff max exponent {max_exp} > -2"
                    ),
                }
            }
        };
        out.push(report);
    }
    out
}

/// ψ_t written in the ansatz shape `½h⁴ ω0² − f h³ η0∧Im Υ0` — used to
/// pin the cohomology bookkeeping against the frame computation.
pub fn ansatz_psi(f: &PowerScalar, h: &PowerScalar) -> AltForm<PowerScalar> {
    let h2 = h.clone() * h.clone();
    let h4 = h2.clone() * h2;
    let fh3 = f.clone() * h.clone() * h.clone() * h.clone();
    omega0::<PowerScalar>()
        .wedge(&omega0())
        .scale(&(h4 * PowerScalar::from_ratio(1, 2)))
        .sub(&eta0::<PowerScalar>().wedge(&im_upsilon0()).scale(&fh3))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_kinds() -> [FlowKind; 3] {
        [FlowKind::LaplacianCoflow, FlowKind::LaplacianFlow, FlowKind::Hitchin]
    }

    #[test]
    fn power_scalar_ring_and_derivative() {
        let b = rat(10, 1);
        let p = PowerScalar::monomial(rat(1, 1), b.clone(), rat(1, 10));
        // (p⁴)' = 4 p³ p' as exact power laws
        let p4 = p.clone() * p.clone() * p.clone() * p.clone();
        let lhs = p4.deriv();
        let rhs = PowerScalar::from_ratio(4, 1)
            * p.clone()
            * p.clone()
            * p.clone()
            * p.deriv();
        assert_eq!(lhs, rhs);
        // monomial root and division
        assert_eq!(p4.nth_root_exact(4), Some(p.clone()));
        assert_eq!(p4.div_exact(&p), p.clone() * p.clone() * p.clone());
    }

    #[test]
    fn initial_conditions_and_orbit_relation() {
        for kind in all_kinds() {
            for eps in [rat(1, 1), rat(1, 2), rat(3, 1)] {
                let sol = FlowSolution::new(kind, eps.clone()).unwrap();
                assert_eq!(sol.f.eval_rat(&Rat::zero()), Some(eps.clone()));
                assert_eq!(sol.h.eval_rat(&Rat::zero()), Some(Rat::one()));
                if kind != FlowKind::LaplacianFlow {
                    // f h³ ≡ ε (f = ε h^{−3}): coflow and Hitchin trace the
                    // same curve in the (f, h)-plane.
                    let fh3 = sol.f.clone()
                        * sol.h.clone()
                        * sol.h.clone()
                        * sol.h.clone();
                    assert_eq!(fh3, PowerScalar::constant(eps.clone()));
                }
            }
        }
    }

    #[test]
    fn ode_residuals_vanish() {
        for kind in all_kinds() {
            let sol = FlowSolution::new(kind, rat(2, 3)).unwrap();
            for r in sol.ode_residuals() {
                assert!(r.is_zero(), "{kind:?} ODE residual {r}");
            }
        }
    }

    #[test]
    fn pde_residuals_vanish_as_functions() {
        for kind in all_kinds() {
            let sol = FlowSolution::new(kind, rat(1, 1)).unwrap();
            let res = sol.pde_residual();
            assert!(res.is_zero(), "{kind:?} PDE residual {res:?}");
        }
    }

    #[test]
    fn coclosedness_preserved() {
        for kind in all_kinds() {
            let sol = FlowSolution::new(kind, rat(1, 2)).unwrap();
            assert!(sol.model().d_psi().is_zero(), "{kind:?} not coclosed");
        }
    }

    #[test]
    fn closed_form_norms() {
        // Prop 3.7 / 4.6 shapes with the frozen model constants.
        let eps = rat(1, 1);
        let sol = FlowSolution::new(FlowKind::LaplacianCoflow, eps.clone()).unwrap();
        let q = quantities(&sol);
        let b = rat(10, 1);
        assert_eq!(
            q.norm_t2,
            PowerScalar::monomial(rat(15, 4), b.clone(), rat(-1, 1))
        );
        assert_eq!(
            q.norm_rm2,
            PowerScalar::monomial(rat(69, 4), b.clone(), rat(-2, 1))
        );
        assert_eq!(
            q.norm_grad_t2,
            PowerScalar::monomial(rat(12, 1), b.clone(), rat(-2, 1))
        );
        assert_eq!(
            q.lambda2,
            PowerScalar::monomial(rat(693, 16), b.clone(), rat(-2, 1))
        );
        assert_eq!(
            q.vol_density,
            PowerScalar::monomial(rat(1, 1), b.clone(), rat(3, 10))
        );
        assert_eq!(q.cohom_coeff, PowerScalar::one());

        let sol = FlowSolution::new(FlowKind::LaplacianFlow, eps).unwrap();
        let q = quantities(&sol);
        let b = rat(-8, 1);
        assert_eq!(
            q.norm_t2,
            PowerScalar::monomial(rat(15, 4), b.clone(), rat(-1, 1))
        );
        assert_eq!(
            q.cohom_coeff,
            PowerScalar::monomial(rat(1, 1), b.clone(), rat(-1, 2))
        );
        // vol density strictly increasing: derivative positive coefficients
        for kind in all_kinds() {
            let sol = FlowSolution::new(kind, rat(1, 1)).unwrap();
            let d = quantities(&sol).vol_density.deriv();
            assert!(d.is_positive_scalar(), "{kind:?} vol density not increasing");
        }
    }

    #[test]
    fn normalized_metric_coefficients() {
        let sol = FlowSolution::new(FlowKind::LaplacianCoflow, rat(1, 1)).unwrap();
        let (ce, cg) = normalized_metric(&sol);
        let b = rat(10, 1);
        assert_eq!(ce, PowerScalar::monomial(rat(1, 1), b.clone(), rat(-24, 35)));
        assert_eq!(cg, PowerScalar::monomial(rat(1, 1), b, rat(4, 35)));
        let sol = FlowSolution::new(FlowKind::LaplacianFlow, rat(1, 1)).unwrap();
        let (ce, cg) = normalized_metric(&sol);
        let b = rat(-8, 1);
        assert_eq!(ce, PowerScalar::monomial(rat(1, 1), b.clone(), rat(-6, 7)));
        assert_eq!(cg, PowerScalar::monomial(rat(1, 1), b, rat(1, 7)));
    }

    #[test]
    fn rk4_matches_closed_form() {
        let sol = FlowSolution::new(FlowKind::LaplacianCoflow, rat(1, 1)).unwrap();
        let samples = integrate_numeric(&sol, &rat(0, 1), &rat(1, 1), 1000).unwrap();
        let mut max_rel = 0.0f64;
        for (t, f, h) in samples {
            let fe = sol.f.eval_f64(t);
            let he = sol.h.eval_f64(t);
            max_rel = max_rel.max(((f - fe) / fe).abs()).max(((h - he) / he).abs());
        }
        assert!(max_rel < 1e-8, "max relative error {max_rel}");
        // zero-length interval: exact initial value
        let s = integrate_numeric(&sol, &rat(0, 1), &rat(0, 1), 1).unwrap();
        assert_eq!(s.last().unwrap().1, 1.0);
        // stepping to a singular endpoint is rejected
        let flow = FlowSolution::new(FlowKind::LaplacianFlow, rat(1, 1)).unwrap();
        assert!(integrate_numeric(&flow, &rat(0, 1), &rat(1, 8), 10).is_err());
    }

    #[test]
    fn singularity_classification() {
        let zero = Rat::zero();
        // Laplacian flow: forward finite-time Type I at 1/8ε², backward ancient.
        let sol = FlowSolution::new(FlowKind::LaplacianFlow, rat(1, 1)).unwrap();
        let reps = classify_singularity(&sol, &zero);
        assert_eq!(reps[0].t_sing, Some(rat(1, 8)));
        assert_eq!(reps[0].sing_type, Some(SingularityType::I));
        assert_eq!(reps[1].sing_type, None);
        assert!(reps[1].note.contains("ancient"));
        // Coflow: forward infinite-time Type III (K = 0), backward finite Type I.
        let sol = FlowSolution::new(FlowKind::LaplacianCoflow, rat(1, 1)).unwrap();
        let reps = classify_singularity(&sol, &zero);
        assert_eq!(reps[0].sing_type, Some(SingularityType::III));
        assert_eq!(reps[0].t_sing, None);
        assert_eq!(reps[1].t_sing, Some(rat(-1, 10)));
        assert_eq!(reps[1].sing_type, Some(SingularityType::I));
        // Synthetic K > 0 flips the forward coflow branch to Type IIb.
        let reps = classify_singularity(&sol, &rat(1, 1));
        assert_eq!(reps[0].sing_type, Some(SingularityType::IIb));
        assert_eq!(reps[0].controlling_exponent, Some(rat(-2, 5)));
        // Types never depend on ε.
        for eps in [rat(1, 2), rat(3, 1)] {
            let s = FlowSolution::new(FlowKind::LaplacianCoflow, eps).unwrap();
            assert_eq!(
                classify_singularity(&s, &zero)[0].sing_type,
                Some(SingularityType::III)
            );
        }
    }

    #[test]
    fn ansatz_psi_matches_model() {
        let sol = FlowSolution::new(FlowKind::Hitchin, rat(1, 1)).unwrap();
        assert_eq!(sol.model().structure.psi, ansatz_psi(&sol.f, &sol.h));
    }
}
