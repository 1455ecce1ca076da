//! The constructive correspondences between line geometry and (hyper-)dual
//! vectors: oriented lines as unit dual vectors, hyper-dual curves as ruled
//! surfaces in dual space, their real/congruence decomposition, the paired
//! ruled surfaces with a common base curve, developability criteria, and the
//! inverse construction from two ruled surfaces back to hyper-dual curves.

use std::fmt;

use crate::curve::{Curve3, CurveError};
use crate::expr::Expr;
use crate::scalar::{DualScalar, HyperDualScalar};
use crate::vector::{
    on_hyperdual_sphere, on_unit_dual_sphere, on_unit_hyperdual_sphere, DualVec3, HyperDualVec3,
    MembershipReport, Vec3,
};
use crate::HyperDualCurve;

#[derive(Debug, Clone, PartialEq)]
pub enum StudyError {
    /// A line's defining invariant (unit direction, Plücker condition) fails.
    InvalidLine {
        condition: &'static str,
        residual: f64,
        tol: f64,
    },
    /// A construction requires sphere membership the input does not have.
    Membership {
        sphere: &'static str,
        t: f64,
        report: MembershipReport,
    },
    /// The two base-curve expressions of a surface pair disagree.
    BaseMismatch {
        t: f64,
        delta: f64,
        tol: f64,
    },
    /// A pointwise precondition (unit rulings, perpendicularity) fails.
    Precondition {
        what: &'static str,
        t: f64,
        residual: f64,
        tol: f64,
    },
    Curve(CurveError),
}

impl fmt::Display for StudyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StudyError::InvalidLine {
                condition,
                residual,
                tol,
            } => {
                write!(
                    f,
                    "invalid line: {condition} off by {residual:.3e} (tol {tol:.1e})"
                )
            }
            StudyError::Membership { sphere, t, report } => {
                write!(f, "not on the {sphere} at t = {t}: {report}")
            }
            StudyError::BaseMismatch { t, delta, tol } => write!(
                f,
                "common-base identity fails at t = {t}: delta {delta:.3e} exceeds tol {tol:.1e}"
            ),
            StudyError::Precondition {
                what,
                t,
                residual,
                tol,
            } => write!(
                f,
                "precondition '{what}' fails at t = {t}: residual {residual:.3e} (tol {tol:.1e})"
            ),
            StudyError::Curve(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for StudyError {}

impl From<CurveError> for StudyError {
    fn from(e: CurveError) -> Self {
        StudyError::Curve(e)
    }
}

// ---------------------------------------------------------------------------
// Oriented lines
// ---------------------------------------------------------------------------

/// An oriented spatial line as a (unit direction, moment) Plücker pair.
/// Construction validates `|direction| = 1` and `direction·moment = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line3 {
    direction: Vec3,
    moment: Vec3,
}

impl Line3 {
    pub fn new(direction: Vec3, moment: Vec3, tol: f64) -> Result<Self, StudyError> {
        let unit_residual = direction.norm() - 1.0;
        if unit_residual.abs() > tol {
            return Err(StudyError::InvalidLine {
                condition: "|direction| = 1",
                residual: unit_residual,
                tol,
            });
        }
        let pluecker_residual = direction.dot(moment);
        if pluecker_residual.abs() > tol {
            return Err(StudyError::InvalidLine {
                condition: "direction . moment = 0",
                residual: pluecker_residual,
                tol,
            });
        }
        Ok(Line3 { direction, moment })
    }

    /// Line with unit `direction` through `point`; the moment is
    /// `point × direction`, which satisfies the Plücker condition by
    /// construction.
    pub fn through_point(point: Vec3, direction: Vec3, tol: f64) -> Result<Self, StudyError> {
        Self::new(direction, point.cross(direction), tol)
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn moment(&self) -> Vec3 {
        self.moment
    }

    /// The point of the line closest to the origin, `direction × moment`.
    pub fn point_closest_to_origin(&self) -> Vec3 {
        self.direction.cross(self.moment)
    }
}

/// A line is a point of the unit dual sphere: `(direction, moment)` as a
/// dual vector.
pub fn line_to_dual(line: &Line3) -> DualVec3 {
    DualVec3::new(line.direction, line.moment)
}

/// Inverse map: a unit dual vector is an oriented line. Fails if the input
/// is not on the unit dual sphere at `tol`.
pub fn dual_to_line(v: DualVec3, tol: f64) -> Result<Line3, StudyError> {
    let report = on_unit_dual_sphere(&v, tol);
    if !report.passed() {
        return Err(StudyError::Membership {
            sphere: "unit dual sphere",
            t: f64::NAN,
            report,
        });
    }
    Line3::new(v.a, v.a_star, tol)
}

// ---------------------------------------------------------------------------
// Ruled surfaces in ℝ³
// ---------------------------------------------------------------------------

/// Ruled surface `Φ(t, u) = β(t) + u·α(t)` with base (directrix) `β` and
/// director `α`.
#[derive(Debug, Clone)]
pub struct RuledSurface3 {
    pub base: Curve3,
    pub director: Curve3,
}

impl RuledSurface3 {
    pub fn new(base: Curve3, director: Curve3) -> Self {
        RuledSurface3 { base, director }
    }

    pub fn eval(&self, t: f64, u: f64) -> Result<Vec3, CurveError> {
        Ok(self.base.position(t)? + self.director.position(t)?.scale(u))
    }

    pub fn domain(&self) -> (f64, f64) {
        self.base.domain()
    }
}

/// Residual of the classical developability determinant at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DevelopabilityCheck {
    /// `det(β′(t), α(t), α′(t))`
    pub residual: f64,
    pub developable: bool,
}

/// A ruled surface is developable where `det(β′, α, α′) = 0`.
pub fn is_developable_r3(
    surface: &RuledSurface3,
    t: f64,
    tol: f64,
) -> Result<DevelopabilityCheck, CurveError> {
    let beta = surface.base.jet(t)?;
    let alpha = surface.director.jet(t)?;
    let residual = Vec3::triple(beta.d1, alpha.p, alpha.d1);
    Ok(DevelopabilityCheck {
        residual,
        developable: residual.abs() <= tol,
    })
}

// ---------------------------------------------------------------------------
// Ruled surfaces in dual space and the curve correspondence
// ---------------------------------------------------------------------------

/// Ruled surface in dual space, `Φ₂(t, 𝕌) = 𝔹(t) + 𝕌·𝔹*(t)`, synthesized
/// from a hyper-dual curve by `𝔹 = 𝔸×𝔸*`, `𝔹* = 𝔸`.
///
/// The formula is total; the one-to-one correspondence statement assumes the
/// curve lies on the hyper-dual sphere. Use [`DualRuledSurface::membership_failures`]
/// to diagnose inputs that stray off it.
#[derive(Clone)]
pub struct DualRuledSurface {
    gamma: HyperDualCurve,
}

impl DualRuledSurface {
    pub fn from_gamma(gamma: &HyperDualCurve) -> Self {
        DualRuledSurface {
            gamma: gamma.clone(),
        }
    }

    pub fn gamma(&self) -> &HyperDualCurve {
        &self.gamma
    }

    pub fn domain(&self) -> (f64, f64) {
        self.gamma.domain()
    }

    /// Base curve `𝔹(t) = 𝔸(t) × 𝔸*(t)` (dual cross of the dual lanes).
    pub fn base(&self, t: f64) -> Result<DualVec3, CurveError> {
        let (a, a_star) = self.gamma.eval(t)?.dual_lanes();
        Ok(a.cross(a_star))
    }

    /// Director `𝔹*(t) = 𝔸(t)`.
    pub fn director(&self, t: f64) -> Result<DualVec3, CurveError> {
        Ok(self.gamma.eval(t)?.dual_lanes().0)
    }

    pub fn eval(&self, t: f64, u: DualScalar) -> Result<DualVec3, CurveError> {
        Ok(self.base(t)? + u * self.director(t)?)
    }

    /// Hyper-dual sphere membership sampled along the domain; returns the
    /// failing `(t, report)` pairs. Intended as a warning channel: the
    /// synthesis stays defined either way.
    pub fn membership_failures(
        &self,
        samples: usize,
        tol: f64,
    ) -> Result<Vec<(f64, MembershipReport)>, CurveError> {
        let (t0, t1) = self.gamma.domain();
        let mut failures = Vec::new();
        for &t in &crate::curve::linspace(t0, t1, samples.max(2)) {
            let report = on_hyperdual_sphere(&self.gamma.eval(t)?, tol);
            if !report.passed() {
                failures.push((t, report));
            }
        }
        Ok(failures)
    }
}

/// Two-parameter family of lines `K(t) + u·d₁(t) + u*·d₂(t)`; the ε-part of
/// a synthesized dual ruled surface decomposes into one of these.
#[derive(Debug, Clone)]
pub struct Congruence {
    pub base: Curve3,
    pub director_u: Curve3,
    pub director_ustar: Curve3,
}

impl Congruence {
    pub fn eval(&self, t: f64, u: f64, u_star: f64) -> Result<Vec3, CurveError> {
        Ok(self.base.position(t)?
            + self.director_u.position(t)?.scale(u)
            + self.director_ustar.position(t)?.scale(u_star))
    }
}

/// A derived curve computed from the lanes of `gamma`, with exact value and
/// first derivative.
fn gamma_curve<F>(gamma: &HyperDualCurve, f: F) -> Curve3
where
    F: Fn(&HyperDualVec3, &HyperDualVec3) -> (Vec3, Vec3) + Send + Sync + 'static,
{
    let g = gamma.clone();
    let domain = gamma.domain();
    Curve3::from_point_derivative_fn(
        move |t| {
            let v = g.eval(t)?;
            let d = g.derivative_lanes(t)?;
            Ok(f(&v, &d))
        },
        domain,
    )
}

/// Split the synthesized surface `Φ₂ = 𝔸×𝔸* + 𝕌𝔸` into its real part
/// `I(t,u) = a₀×a₂ + u·a₀` and the ε-part congruence
/// `II(t,u,u*) = (a₁×a₂ + a₀×a₃) + u·a₁ + u*·a₀`.
pub fn decompose(surface: &DualRuledSurface) -> (RuledSurface3, Congruence) {
    let gamma = surface.gamma();
    let real_part = RuledSurface3::new(
        gamma_curve(gamma, |v, d| {
            (v.a0.cross(v.a2), d.a0.cross(v.a2) + v.a0.cross(d.a2))
        }),
        gamma_curve(gamma, |v, d| (v.a0, d.a0)),
    );
    let congruence = Congruence {
        base: gamma_curve(gamma, |v, d| {
            (
                v.a1.cross(v.a2) + v.a0.cross(v.a3),
                d.a1.cross(v.a2) + v.a1.cross(d.a2) + d.a0.cross(v.a3) + v.a0.cross(d.a3),
            )
        }),
        director_u: gamma_curve(gamma, |v, d| (v.a1, d.a1)),
        director_ustar: gamma_curve(gamma, |v, d| (v.a0, d.a0)),
    };
    (real_part, congruence)
}

/// Residual pair of the developability criterion in dual space:
/// `(a₀′·a₂′, a₀′·a₃′ + a₁′·a₂′)`. Both vanish iff the synthesized surface
/// is developable in 𝔻.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualDevelopability {
    /// Real part `a₀′·a₂′`.
    pub residual_real: f64,
    /// ε part `a₀′·a₃′ + a₁′·a₂′`.
    pub residual_eps: f64,
    pub developable: bool,
}

pub fn is_developable_dual(
    gamma: &HyperDualCurve,
    t: f64,
    tol: f64,
) -> Result<DualDevelopability, CurveError> {
    let d = gamma.derivative_lanes(t)?;
    let residual_real = d.a0.dot(d.a2);
    let residual_eps = d.a0.dot(d.a3) + d.a1.dot(d.a2);
    Ok(DualDevelopability {
        residual_real,
        residual_eps,
        developable: residual_real.abs() <= tol && residual_eps.abs() <= tol,
    })
}

/// Diagnostic pair for the dual determinant identity behind the
/// developability criterion: `det((𝔸×𝔸*)′, 𝔸′, 𝔸)` equals `⟨𝔸′,𝔸*′⟩` up
/// to sign. Both sums are reported; on the sphere exactly one vanishes,
/// and the suite records which.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetIdentityResiduals {
    pub det_plus_inner: DualScalar,
    pub det_minus_inner: DualScalar,
}

pub fn dual_det_identity_residual(
    gamma: &HyperDualCurve,
    t: f64,
) -> Result<DetIdentityResiduals, CurveError> {
    let v = gamma.eval(t)?;
    let d = gamma.derivative_lanes(t)?;
    let (a, a_star) = v.dual_lanes();
    let (ap, a_star_p) = d.dual_lanes();
    let base_derivative = ap.cross(a_star) + a.cross(a_star_p);
    let det = DualVec3::triple(base_derivative, ap, a);
    let inner = ap.inner(a_star_p);
    Ok(DetIdentityResiduals {
        det_plus_inner: det + inner,
        det_minus_inner: det - inner,
    })
}

// ---------------------------------------------------------------------------
// The surface pair with a common base curve
// ---------------------------------------------------------------------------

/// The two ruled surfaces corresponding to a curve on the unit hyper-dual
/// sphere:
///
/// ```text
/// Φ₁(t,u) = k(t) + u·a₀(t),   Φ₂(t,v) = k(t) + v·a₂(t)
/// k(t) = a₀×a₁ + f·a₀ = a₂×a₃ + g·a₂,   f = ⟨a₂×a₃, a₀⟩,  g = ⟨a₀×a₁, a₂⟩
/// ```
///
/// with perpendicular rulings `a₀·a₂ = 0`. Construction validates the
/// membership hypothesis and the common-base identity at sampled parameters
/// instead of trusting them.
pub struct SurfacePair {
    gamma: HyperDualCurve,
    pub phi1: RuledSurface3,
    pub phi2: RuledSurface3,
    pub base_k: Curve3,
    /// Max pointwise distance between the two base-curve expressions over
    /// the validation samples.
    pub max_base_mismatch: f64,
}

fn pair_f(v: &HyperDualVec3) -> f64 {
    Vec3::triple(v.a2, v.a3, v.a0)
}

fn pair_g(v: &HyperDualVec3) -> f64 {
    Vec3::triple(v.a0, v.a1, v.a2)
}

fn pair_base_phi1(v: &HyperDualVec3, d: &HyperDualVec3) -> (Vec3, Vec3) {
    let f = pair_f(v);
    let fp = Vec3::triple(d.a2, v.a3, v.a0)
        + Vec3::triple(v.a2, d.a3, v.a0)
        + Vec3::triple(v.a2, v.a3, d.a0);
    (
        v.a0.cross(v.a1) + v.a0.scale(f),
        d.a0.cross(v.a1) + v.a0.cross(d.a1) + d.a0.scale(f) + v.a0.scale(fp),
    )
}

fn pair_base_phi2(v: &HyperDualVec3, d: &HyperDualVec3) -> (Vec3, Vec3) {
    let g = pair_g(v);
    let gp = Vec3::triple(d.a0, v.a1, v.a2)
        + Vec3::triple(v.a0, d.a1, v.a2)
        + Vec3::triple(v.a0, v.a1, d.a2);
    (
        v.a2.cross(v.a3) + v.a2.scale(g),
        d.a2.cross(v.a3) + v.a2.cross(d.a3) + d.a2.scale(g) + v.a2.scale(gp),
    )
}

impl SurfacePair {
    /// `f(t) = ⟨a₂×a₃, a₀⟩`
    pub fn f_at(&self, t: f64) -> Result<f64, CurveError> {
        Ok(pair_f(&self.gamma.eval(t)?))
    }

    /// `g(t) = ⟨a₀×a₁, a₂⟩`
    pub fn g_at(&self, t: f64) -> Result<f64, CurveError> {
        Ok(pair_g(&self.gamma.eval(t)?))
    }

    pub fn gamma(&self) -> &HyperDualCurve {
        &self.gamma
    }
}

/// Build the surface pair from a curve on the unit hyper-dual sphere.
/// Membership and the common-base identity are checked at `samples` uniform
/// parameters with tolerance `tol`; the worst base mismatch is recorded on
/// the result.
pub fn pair_from_unit_gamma(
    gamma: &HyperDualCurve,
    samples: usize,
    tol: f64,
) -> Result<SurfacePair, StudyError> {
    let (t0, t1) = gamma.domain();
    let mut max_mismatch: f64 = 0.0;
    for &t in &crate::curve::linspace(t0, t1, samples.max(2)) {
        let v = gamma.eval(t)?;
        let report = on_unit_hyperdual_sphere(&v, tol);
        if !report.passed() {
            return Err(StudyError::Membership {
                sphere: "unit hyper-dual sphere",
                t,
                report,
            });
        }
        let d = gamma.derivative_lanes(t)?;
        let k1 = pair_base_phi1(&v, &d).0;
        let k2 = pair_base_phi2(&v, &d).0;
        let delta = k1.max_abs_diff(&k2);
        if delta > tol {
            return Err(StudyError::BaseMismatch { t, delta, tol });
        }
        max_mismatch = max_mismatch.max(delta);
    }
    let base_k = gamma_curve(gamma, pair_base_phi1);
    let phi1 = RuledSurface3::new(
        gamma_curve(gamma, pair_base_phi1),
        gamma_curve(gamma, |v, d| (v.a0, d.a0)),
    );
    let phi2 = RuledSurface3::new(
        gamma_curve(gamma, pair_base_phi2),
        gamma_curve(gamma, |v, d| (v.a2, d.a2)),
    );
    Ok(SurfacePair {
        gamma: gamma.clone(),
        phi1,
        phi2,
        base_k,
        max_base_mismatch: max_mismatch,
    })
}

// ---------------------------------------------------------------------------
// The couple construction
// ---------------------------------------------------------------------------

/// A scalar function of `t` with an exact derivative: a constant or a parsed
/// expression.
#[derive(Debug, Clone)]
pub enum ScalarOfT {
    Const(f64),
    Expr(Expr),
}

impl ScalarOfT {
    pub fn zero() -> Self {
        ScalarOfT::Const(0.0)
    }

    pub fn value(&self, t: f64) -> Result<f64, CurveError> {
        match self {
            ScalarOfT::Const(c) => Ok(*c),
            ScalarOfT::Expr(e) => e.eval(t).map_err(|source| CurveError::Eval { t, source }),
        }
    }

    pub fn value_and_derivative(&self, t: f64) -> Result<(f64, f64), CurveError> {
        match self {
            ScalarOfT::Const(c) => Ok((*c, 0.0)),
            ScalarOfT::Expr(e) => {
                let y = e
                    .eval(HyperDualScalar::var(t))
                    .map_err(|source| CurveError::Eval { t, source })?;
                Ok((y.w, y.e1))
            }
        }
    }
}

/// The couple of surfaces obtained by shifting the decomposition along its
/// rulings by `f(t) = ⟨a₁×a₂, a₀⟩ + u*(t)` and `g(t) = ⟨a₀×(a₂−a₃), a₁⟩`:
///
/// ```text
/// Ī(t,u)  = a₀×a₂ + f·a₀ + u·a₀
/// ĪĪ(t,u) = (a₁×a₂ + a₀×a₃) + g·a₁ + u*(t)·a₀ + u·a₁
/// ```
///
/// `u*(t)` is a chosen function absorbed into the bases, so both members are
/// ordinary ruled surfaces. The construction is provided as an explicit family; no
/// common-base claim is made for it.
pub struct Couple {
    gamma: HyperDualCurve,
    u_star: ScalarOfT,
    pub i_bar: RuledSurface3,
    pub ii_bar: RuledSurface3,
}

impl Couple {
    /// `f(t) = ⟨a₁×a₂, a₀⟩ + u*(t)`
    pub fn f_at(&self, t: f64) -> Result<f64, CurveError> {
        let v = self.gamma.eval(t)?;
        Ok(Vec3::triple(v.a1, v.a2, v.a0) + self.u_star.value(t)?)
    }

    /// `g(t) = ⟨a₀×(a₂−a₃), a₁⟩`
    pub fn g_at(&self, t: f64) -> Result<f64, CurveError> {
        let v = self.gamma.eval(t)?;
        Ok(Vec3::triple(v.a0, v.a2 - v.a3, v.a1))
    }
}

pub fn build_couple(gamma: &HyperDualCurve, u_star: ScalarOfT) -> Couple {
    let us_value = u_star.clone();
    let g1 = gamma.clone();
    let i_bar_base = Curve3::from_point_derivative_fn(
        move |t| {
            let v = g1.eval(t)?;
            let d = g1.derivative_lanes(t)?;
            let (u, up) = us_value.value_and_derivative(t)?;
            let f = Vec3::triple(v.a1, v.a2, v.a0) + u;
            let fp = Vec3::triple(d.a1, v.a2, v.a0)
                + Vec3::triple(v.a1, d.a2, v.a0)
                + Vec3::triple(v.a1, v.a2, d.a0)
                + up;
            Ok((
                v.a0.cross(v.a2) + v.a0.scale(f),
                d.a0.cross(v.a2) + v.a0.cross(d.a2) + d.a0.scale(f) + v.a0.scale(fp),
            ))
        },
        gamma.domain(),
    );
    let i_bar = RuledSurface3::new(i_bar_base, gamma_curve(gamma, |v, d| (v.a0, d.a0)));

    let us_value = u_star.clone();
    let g2 = gamma.clone();
    let ii_bar_base = Curve3::from_point_derivative_fn(
        move |t| {
            let v = g2.eval(t)?;
            let d = g2.derivative_lanes(t)?;
            let (u, up) = us_value.value_and_derivative(t)?;
            let g = Vec3::triple(v.a0, v.a2 - v.a3, v.a1);
            let gp = Vec3::triple(d.a0, v.a2 - v.a3, v.a1)
                + Vec3::triple(v.a0, d.a2 - d.a3, v.a1)
                + Vec3::triple(v.a0, v.a2 - v.a3, d.a1);
            let base = v.a1.cross(v.a2) + v.a0.cross(v.a3) + v.a1.scale(g) + v.a0.scale(u);
            let basep = d.a1.cross(v.a2)
                + v.a1.cross(d.a2)
                + d.a0.cross(v.a3)
                + v.a0.cross(d.a3)
                + d.a1.scale(g)
                + v.a1.scale(gp)
                + d.a0.scale(u)
                + v.a0.scale(up);
            Ok((base, basep))
        },
        gamma.domain(),
    );
    let ii_bar = RuledSurface3::new(ii_bar_base, gamma_curve(gamma, |v, d| (v.a1, d.a1)));

    Couple {
        gamma: gamma.clone(),
        u_star,
        i_bar,
        ii_bar,
    }
}

// ---------------------------------------------------------------------------
// Inverse construction
// ---------------------------------------------------------------------------

/// From two ruled surfaces `K + u·a` and `K + v·a*` with a shared base curve
/// and unit perpendicular rulings, build the two corresponding hyper-dual
/// curves
///
/// ```text
/// Γ₁ = (a + ε K×a,  a* + ε K×a*),   Γ₂ = (a* + ε K×a*,  a + ε K×a).
/// ```
///
/// Preconditions `|a| = |a*| = 1`, `a·a* = 0` are checked at `samples`
/// parameters; the error names the first failing one. Both results lie on
/// the unit hyper-dual sphere identically: the remaining εε* condition is
/// the determinant identity `det(a, K, a*) = −det(K, a, a*)`.
pub fn inverse_pair(
    base: &Curve3,
    ruling: &Curve3,
    ruling_star: &Curve3,
    samples: usize,
    tol: f64,
) -> Result<(HyperDualCurve, HyperDualCurve), StudyError> {
    let (t0, t1) = base.domain();
    for &t in &crate::curve::linspace(t0, t1, samples.max(2)) {
        let a = ruling.position(t)?;
        let a_star = ruling_star.position(t)?;
        let unit_a = a.norm() - 1.0;
        if unit_a.abs() > tol {
            return Err(StudyError::Precondition {
                what: "|a| = 1",
                t,
                residual: unit_a,
                tol,
            });
        }
        let unit_star = a_star.norm() - 1.0;
        if unit_star.abs() > tol {
            return Err(StudyError::Precondition {
                what: "|a*| = 1",
                t,
                residual: unit_star,
                tol,
            });
        }
        let perp = a.dot(a_star);
        if perp.abs() > tol {
            return Err(StudyError::Precondition {
                what: "a . a* = 0",
                t,
                residual: perp,
                tol,
            });
        }
    }

    let moment_curve = |dir: &Curve3| -> Curve3 {
        let k = base.clone();
        let d = dir.clone();
        let domain = k.domain();
        Curve3::from_point_derivative_fn(
            move |t| {
                let kj = k.jet(t)?;
                let dj = d.jet(t)?;
                Ok((kj.p.cross(dj.p), kj.d1.cross(dj.p) + kj.p.cross(dj.d1)))
            },
            domain,
        )
    };

    let gamma1 = HyperDualCurve::from_lanes([
        ruling.clone(),
        moment_curve(ruling),
        ruling_star.clone(),
        moment_curve(ruling_star),
    ])?;
    let gamma2 = HyperDualCurve::from_lanes([
        ruling_star.clone(),
        moment_curve(ruling_star),
        ruling.clone(),
        moment_curve(ruling),
    ])?;
    Ok((gamma1, gamma2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{frenet_frame, hd_arc_length, linspace, FrameField, FrameKind};
    use std::f64::consts::PI;

    fn helix11() -> Curve3 {
        Curve3::helix(1.0, 1.0, (0.0, 2.0 * PI))
    }

    fn frenet_gamma(r: f64, c: f64) -> HyperDualCurve {
        HyperDualCurve::from_frame_lanes(
            Curve3::helix(r, c, (0.0, 2.0 * PI)),
            FrameKind::Frenet,
            [
                FrameField::Tangent,
                FrameField::Normal,
                FrameField::Binormal,
                FrameField::Normal,
            ],
        )
    }

    fn adapted_gamma(r: f64, c: f64) -> HyperDualCurve {
        HyperDualCurve::from_frame_lanes(
            Curve3::helix(r, c, (0.0, 2.0 * PI)),
            FrameKind::Adapted,
            [
                FrameField::Normal,
                FrameField::NormalDerivative,
                FrameField::Darboux,
                FrameField::NormalDerivative,
            ],
        )
    }

    fn assert_vec_eq(a: Vec3, b: Vec3, tol: f64) {
        assert!(a.max_abs_diff(&b) <= tol, "{a} != {b}");
    }

    #[test]
    fn line_examples() {
        let axis = Line3::through_point(Vec3::ZERO, Vec3::EZ, 1e-9).unwrap();
        assert_vec_eq(line_to_dual(&axis).a_star, Vec3::ZERO, 1e-15);

        let line = Line3::through_point(Vec3::EX, Vec3::EZ, 1e-9).unwrap();
        assert_vec_eq(line.moment(), -Vec3::EY, 1e-15);
        assert!(on_unit_dual_sphere(&line_to_dual(&line), 1e-12).passed());
    }

    #[test]
    fn dual_to_line_examples() {
        let line = dual_to_line(DualVec3::new(Vec3::EZ, -Vec3::EY), 1e-9).unwrap();
        assert_vec_eq(line.point_closest_to_origin(), Vec3::EX, 1e-15);
        assert_vec_eq(line.direction(), Vec3::EZ, 1e-15);

        // round trip
        let v = line_to_dual(&line);
        let back = dual_to_line(v, 1e-9).unwrap();
        assert_eq!(back, line);

        // a·a* ≠ 0 rejected
        assert!(dual_to_line(DualVec3::new(Vec3::EZ, Vec3::EZ), 1e-9).is_err());
    }

    #[test]
    fn ruled_from_gamma_helix_base() {
        let surface = DualRuledSurface::from_gamma(&frenet_gamma(1.0, 1.0));
        let helix = helix11();
        for &t in &linspace(0.0, 2.0 * PI, 25) {
            // base real lane = t×b = -n
            let frame = frenet_frame(&helix, t).unwrap();
            let base = surface.base(t).unwrap();
            assert_vec_eq(base.a, -frame.second, 1e-10);
        }
        assert!(surface.membership_failures(50, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn ruled_from_gamma_constant_and_degenerate() {
        let dom = (0.0, 1.0);
        let gamma = HyperDualCurve::from_lanes([
            Curve3::constant(Vec3::EX, dom),
            Curve3::constant(Vec3::ZERO, dom),
            Curve3::constant(Vec3::EY, dom),
            Curve3::constant(Vec3::ZERO, dom),
        ])
        .unwrap();
        let surface = DualRuledSurface::from_gamma(&gamma);
        let base = surface.base(0.5).unwrap();
        assert_vec_eq(base.a, Vec3::EZ, 1e-15);
        assert_vec_eq(base.a_star, Vec3::ZERO, 1e-15);
        let dir = surface.director(0.5).unwrap();
        assert_vec_eq(dir.a, Vec3::EX, 1e-15);

        // zero hyper-dual part: the base collapses and the surface is the
        // cone u·A through the origin
        let cone = HyperDualCurve::from_lanes([
            Curve3::constant(Vec3::EX, dom),
            Curve3::constant(Vec3::ZERO, dom),
            Curve3::constant(Vec3::ZERO, dom),
            Curve3::constant(Vec3::ZERO, dom),
        ])
        .unwrap();
        let cone_surface = DualRuledSurface::from_gamma(&cone);
        let b = cone_surface.base(0.0).unwrap();
        assert_vec_eq(b.a, Vec3::ZERO, 1e-15);
        assert_vec_eq(b.a_star, Vec3::ZERO, 1e-15);
    }

    #[test]
    fn decompose_helix() {
        let gamma = frenet_gamma(1.0, 1.0);
        let surface = DualRuledSurface::from_gamma(&gamma);
        let (real_part, congruence) = decompose(&surface);
        let helix = helix11();
        for &t in &linspace(0.0, 2.0 * PI, 25) {
            let frame = frenet_frame(&helix, t).unwrap();
            // I = a0×a2 + u a0 = -n + u t
            assert_vec_eq(real_part.base.position(t).unwrap(), -frame.second, 1e-10);
            assert_vec_eq(real_part.director.position(t).unwrap(), frame.first, 1e-10);
            // K = a1×a2 + a0×a3 = n×b + t×n = t + b
            assert_vec_eq(
                congruence.base.position(t).unwrap(),
                frame.first + frame.third,
                1e-10,
            );
        }
    }

    #[test]
    fn decompose_zero_dual_lanes() {
        let dom = (0.0, 1.0);
        let gamma = HyperDualCurve::from_lanes([
            Curve3::constant(Vec3::EX, dom),
            Curve3::constant(Vec3::ZERO, dom),
            Curve3::constant(Vec3::EY, dom),
            Curve3::constant(Vec3::ZERO, dom),
        ])
        .unwrap();
        let (_, congruence) = decompose(&DualRuledSurface::from_gamma(&gamma));
        assert_vec_eq(congruence.base.position(0.3).unwrap(), Vec3::ZERO, 1e-15);
        assert_vec_eq(
            congruence.eval(0.3, 0.0, 2.0).unwrap(),
            Vec3::EX.scale(2.0),
            1e-15,
        );
    }

    #[test]
    fn developable_r3_examples() {
        let helix = helix11();
        // tangent developable
        let tangent_surface = RuledSurface3::new(
            helix.clone(),
            Curve3::frame_field(&helix, FrameKind::Frenet, FrameField::Tangent),
        );
        // normal surface: det = c exactly (c = 1 here)
        let normal_surface = RuledSurface3::new(
            helix.clone(),
            Curve3::frame_field(&helix, FrameKind::Frenet, FrameField::Normal),
        );
        for &t in &linspace(0.1, 6.0, 20) {
            let check = is_developable_r3(&tangent_surface, t, 1e-9).unwrap();
            assert!(
                check.developable,
                "tangent surface at {t}: {}",
                check.residual
            );
            let check = is_developable_r3(&normal_surface, t, 1e-9).unwrap();
            assert!((check.residual - 1.0).abs() < 1e-9, "normal surface at {t}");
            assert!(!check.developable);
        }
        // cylinder: constant director
        let cylinder = RuledSurface3::new(
            Curve3::circle(1.0, (0.0, 2.0 * PI)),
            Curve3::constant(Vec3::EZ, (0.0, 2.0 * PI)),
        );
        let check = is_developable_r3(&cylinder, 1.0, 1e-9).unwrap();
        assert!(check.developable && check.residual.abs() < 1e-15);
    }

    #[test]
    fn developable_dual_examples() {
        // constant lanes: developable
        let dom = (0.0, 1.0);
        let gamma = HyperDualCurve::from_lanes([
            Curve3::constant(Vec3::EX, dom),
            Curve3::constant(Vec3::EY, dom),
            Curve3::constant(Vec3::EZ, dom),
            Curve3::constant(Vec3::ZERO, dom),
        ])
        .unwrap();
        let check = is_developable_dual(&gamma, 0.5, 1e-9).unwrap();
        assert!(check.developable);

        // helix Frenet lanes: a0'·a2' = t'·b' = -κτ|d1|² ≠ 0
        let gamma = frenet_gamma(1.0, 1.0);
        let check = is_developable_dual(&gamma, 1.0, 1e-9).unwrap();
        let expected = -(0.5) * (0.5) * 2.0; // κ = τ = 1/2, |d1|² = 2
        assert!((check.residual_real - expected).abs() < 1e-8);
        assert!(check.residual_eps.abs() < 1e-8);
        assert!(!check.developable);

        // planar circle (τ = 0): both residuals vanish
        let gamma = HyperDualCurve::from_frame_lanes(
            Curve3::circle(2.0, (0.0, 2.0 * PI)),
            FrameKind::Frenet,
            [
                FrameField::Tangent,
                FrameField::Normal,
                FrameField::Binormal,
                FrameField::Normal,
            ],
        );
        for &t in &linspace(0.0, 2.0 * PI, 20) {
            let check = is_developable_dual(&gamma, t, 1e-9).unwrap();
            assert!(check.developable, "circle lanes at {t}: {check:?}");
        }
    }

    #[test]
    fn det_identity_sign() {
        // constant lanes: both residuals zero
        let dom = (0.0, 1.0);
        let gamma = HyperDualCurve::from_lanes([
            Curve3::constant(Vec3::EX, dom),
            Curve3::constant(Vec3::EY, dom),
            Curve3::constant(Vec3::EZ, dom),
            Curve3::constant(Vec3::ZERO, dom),
        ])
        .unwrap();
        let r = dual_det_identity_residual(&gamma, 0.5).unwrap();
        assert!(r.det_plus_inner.re.abs() < 1e-15 && r.det_minus_inner.re.abs() < 1e-15);

        // helix Frenet lanes: det + inner vanishes (det = -⟨A',A*'⟩)
        let gamma = frenet_gamma(1.0, 1.0);
        for &t in &linspace(0.0, 2.0 * PI, 20) {
            let r = dual_det_identity_residual(&gamma, t).unwrap();
            assert!(
                r.det_plus_inner.re.abs() < 1e-9 && r.det_plus_inner.du.abs() < 1e-9,
                "det + inner at {t}: {:?}",
                r.det_plus_inner
            );
            assert!(r.det_minus_inner.re.abs() > 0.1);
        }
    }

    #[test]
    fn pair_frenet_base_is_b_minus_t() {
        let pair = pair_from_unit_gamma(&frenet_gamma(1.0, 1.0), 100, 1e-9).unwrap();
        let helix = helix11();
        for &t in &linspace(0.0, 2.0 * PI, 50) {
            let frame = frenet_frame(&helix, t).unwrap();
            let k = pair.base_k.position(t).unwrap();
            assert_vec_eq(k, frame.third - frame.first, 1e-9);
            assert_vec_eq(pair.phi1.director.position(t).unwrap(), frame.first, 1e-10);
            assert_vec_eq(pair.phi2.director.position(t).unwrap(), frame.third, 1e-10);
            // f = det(b, n, t) = -1, g = det(t, n, b)... = ⟨t×n, b⟩ = 1
            assert!((pair.f_at(t).unwrap() + 1.0).abs() < 1e-10);
            assert!((pair.g_at(t).unwrap() - 1.0).abs() < 1e-10);
        }
        assert!(pair.max_base_mismatch <= 1e-9);
    }

    #[test]
    fn pair_adapted_base_is_w_minus_n() {
        let pair = pair_from_unit_gamma(&adapted_gamma(1.0, 1.0), 100, 1e-9).unwrap();
        let helix = helix11();
        for &t in &linspace(0.0, 2.0 * PI, 50) {
            let frame = crate::curve::adapted_frame(&helix, t).unwrap();
            let k = pair.base_k.position(t).unwrap();
            assert_vec_eq(k, frame.third - frame.first, 1e-9);
        }
    }

    #[test]
    fn pair_rejects_off_sphere_input() {
        let gamma = HyperDualCurve::from_frame_lanes(
            helix11(),
            FrameKind::Frenet,
            [FrameField::Tangent; 4],
        );
        match pair_from_unit_gamma(&gamma, 50, 1e-9) {
            Err(StudyError::Membership { .. }) => {}
            other => panic!("expected membership error, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn couple_helix_base() {
        let gamma = frenet_gamma(1.0, 1.0);
        let couple = build_couple(&gamma, ScalarOfT::zero());
        let helix = helix11();
        for &t in &linspace(0.0, 2.0 * PI, 25) {
            let frame = frenet_frame(&helix, t).unwrap();
            // Ī base = t×b + ⟨n×b,t⟩t = -n + t
            assert_vec_eq(
                couple.i_bar.base.position(t).unwrap(),
                frame.first - frame.second,
                1e-9,
            );
            // f = ⟨a1×a2, a0⟩ + 0 = ⟨n×b, t⟩ = 1
            assert!((couple.f_at(t).unwrap() - 1.0).abs() < 1e-10);
            // direct formula for g on these lanes: ⟨t×(b−n), n⟩
            let g_direct = Vec3::triple(frame.first, frame.third - frame.second, frame.second);
            assert!((couple.g_at(t).unwrap() - g_direct).abs() < 1e-12);
        }
    }

    #[test]
    fn couple_constant_lanes() {
        let dom = (0.0, 1.0);
        let gamma = HyperDualCurve::from_lanes([
            Curve3::constant(Vec3::EX, dom),
            Curve3::constant(Vec3::EY, dom),
            Curve3::constant(Vec3::EZ, dom),
            Curve3::constant(Vec3::ZERO, dom),
        ])
        .unwrap();
        let couple = build_couple(&gamma, ScalarOfT::Const(0.5));
        let b0 = couple.i_bar.base.position(0.1).unwrap();
        let b1 = couple.i_bar.base.position(0.9).unwrap();
        assert_vec_eq(b0, b1, 1e-12);
        let b0 = couple.ii_bar.base.position(0.1).unwrap();
        let b1 = couple.ii_bar.base.position(0.9).unwrap();
        assert_vec_eq(b0, b1, 1e-12);
    }

    #[test]
    fn inverse_pair_helix_matches_reference_moment() {
        let helix = helix11();
        let t_k = Curve3::frame_field(&helix, FrameKind::Frenet, FrameField::Tangent);
        let n_k = Curve3::frame_field(&helix, FrameKind::Frenet, FrameField::Normal);
        let (gamma1, gamma2) = inverse_pair(&helix, &t_k, &n_k, 100, 1e-9).unwrap();
        let c = 1.0;
        for &t in &linspace(0.0, 2.0 * PI, 40) {
            let v = gamma1.eval(t).unwrap();
            // A* = (-cos, -sin, 0) + ε·ct(sin, -cos, 0), the reference closed form.
            assert_vec_eq(v.a2, Vec3::new(-t.cos(), -t.sin(), 0.0), 1e-12);
            assert_vec_eq(
                v.a3,
                Vec3::new(c * t * t.sin(), -c * t * t.cos(), 0.0),
                1e-12,
            );
            // A moment lane: K×t_K oracle computed from raw jets.
            let kj = helix.jet(t).unwrap();
            let oracle = kj.p.cross(kj.d1.scale(1.0 / kj.d1.norm()));
            assert_vec_eq(v.a1, oracle, 1e-12);
            // memberships
            assert!(on_unit_hyperdual_sphere(&v, 1e-9).passed());
            assert!(on_unit_hyperdual_sphere(&gamma2.eval(t).unwrap(), 1e-9).passed());
        }
    }

    #[test]
    fn inverse_pair_zero_base() {
        // K ≡ 0: a line pencil through the origin, zero moments.
        let dom = (0.0, PI);
        let k = Curve3::constant(Vec3::ZERO, dom);
        let a = Curve3::from_exprs(
            crate::expr::parse("cos(t)").unwrap(),
            crate::expr::parse("sin(t)").unwrap(),
            crate::expr::parse("0").unwrap(),
            dom,
        );
        let a_star = Curve3::constant(Vec3::EZ, dom);
        let (gamma1, _) = inverse_pair(&k, &a, &a_star, 50, 1e-9).unwrap();
        let v = gamma1.eval(1.0).unwrap();
        assert_vec_eq(v.a1, Vec3::ZERO, 1e-15);
        assert_vec_eq(v.a3, Vec3::ZERO, 1e-15);
    }

    #[test]
    fn inverse_pair_precondition_violation() {
        let helix = helix11();
        let t_k = Curve3::frame_field(&helix, FrameKind::Frenet, FrameField::Tangent);
        let not_unit = Curve3::constant(Vec3::EX.scale(2.0), helix.domain());
        match inverse_pair(&helix, &t_k, &not_unit, 50, 1e-9) {
            Err(StudyError::Precondition { what, .. }) => assert_eq!(what, "|a*| = 1"),
            other => panic!("expected precondition error, got ok={}", other.is_ok()),
        }
    }

    #[test]
    fn dual_developability_equivalent_to_split_criteria() {
        // On the sphere, the dual criterion is equivalent to: the real part
        // I of the decomposition is developable AND the ε lane of the dual
        // determinant (recovered as the mean of the two reported sums)
        // vanishes.
        let frenet = [
            FrameField::Tangent,
            FrameField::Normal,
            FrameField::Binormal,
            FrameField::Normal,
        ];
        let frame_gamma =
            |curve: Curve3| HyperDualCurve::from_frame_lanes(curve, FrameKind::Frenet, frenet);
        // A witness whose real residual vanishes (a0 constant) while the ε
        // residual a1'·a2' = -sin·cos does not: lanes
        //   a0 = e1, a1 = sin(t) e2, a2 = (0, cos t, sin t),
        //   a3 = -sin(t)cos(t) e1
        // satisfy the sphere conditions identically.
        let dom = (0.0, 2.0 * PI);
        let e = |s: &str| crate::expr::parse(s).unwrap();
        let split_witness = HyperDualCurve::from_lanes([
            Curve3::constant(Vec3::EX, dom),
            Curve3::from_exprs(e("0"), e("sin(t)"), e("0"), dom),
            Curve3::from_exprs(e("0"), e("cos(t)"), e("sin(t)"), dom),
            Curve3::from_exprs(e("-sin(t)*cos(t)"), e("0"), e("0"), dom),
        ])
        .unwrap();
        // The witness is genuinely split: real lane developable, ε lane not.
        let dual = is_developable_dual(&split_witness, 0.7, 1e-9).unwrap();
        assert!(dual.residual_real.abs() <= 1e-12);
        assert!(dual.residual_eps.abs() > 0.1);

        let cases = [
            (
                frame_gamma(Curve3::circle(1.5, (0.0, 2.0 * PI))),
                Some(true),
            ),
            (
                frame_gamma(Curve3::helix(1.0, 1.0, (0.0, 2.0 * PI))),
                Some(false),
            ),
            (
                frame_gamma(Curve3::helix(2.0, 0.5, (0.0, 2.0 * PI))),
                Some(false),
            ),
            (split_witness, None),
        ];
        for (gamma, expect_developable) in cases {
            let (real_part, _) = decompose(&DualRuledSurface::from_gamma(&gamma));
            for &t in &linspace(0.1, 6.0, 25) {
                let dual = is_developable_dual(&gamma, t, 1e-9).unwrap();
                let i_check = is_developable_r3(&real_part, t, 1e-9).unwrap();
                let det = dual_det_identity_residual(&gamma, t).unwrap();
                let det_eps = 0.5 * (det.det_plus_inner.du + det.det_minus_inner.du);
                let split = i_check.developable && det_eps.abs() <= 1e-9;
                if let Some(expected) = expect_developable {
                    assert_eq!(dual.developable, expected, "at t = {t}");
                }
                assert_eq!(dual.developable, split, "split criteria diverge at t = {t}");
                // the real residuals agree up to sign
                assert!(
                    (dual.residual_real.abs() - i_check.residual.abs()).abs() <= 1e-8,
                    "|a0'.a2'| vs |det| at t = {t}: {} vs {}",
                    dual.residual_real,
                    i_check.residual
                );
            }
        }
    }

    #[test]
    fn arc_length_developability_witness() {
        // Planar circle Frenet lanes are developable in 𝔻 and the ε*/εε*
        // components of the arc length vanish; helix lanes are not and the
        // ε* component does not vanish.
        let circle_gamma = HyperDualCurve::from_frame_lanes(
            Curve3::circle(1.0, (0.0, 2.0 * PI)),
            FrameKind::Frenet,
            [
                FrameField::Tangent,
                FrameField::Normal,
                FrameField::Binormal,
                FrameField::Normal,
            ],
        );
        let s = hd_arc_length(&circle_gamma, 2.0, 32).unwrap();
        assert!(s.e2.abs() < 1e-9 && s.e12.abs() < 1e-9);
        assert!(
            is_developable_dual(&circle_gamma, 1.0, 1e-9)
                .unwrap()
                .developable
        );

        let helix_gamma = frenet_gamma(1.0, 1.0);
        let s = hd_arc_length(&helix_gamma, 2.0, 32).unwrap();
        assert!(s.e2.abs() > 0.1);
        assert!(
            !is_developable_dual(&helix_gamma, 1.0, 1e-9)
                .unwrap()
                .developable
        );
    }
}
