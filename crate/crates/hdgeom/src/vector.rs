//! Dual and hyper-dual 3-vectors, their inner/cross products and norms, and
//! the sphere / tangent-bundle membership predicates.
//!
//! A dual vector `𝔸 = a + εa*` pairs two real 3-vectors; a hyper-dual vector
//! stacks four, interpreted as `𝔸₂ = (a₀ + εa₁) + ε*(a₂ + εa₃)`. Unit dual
//! vectors are oriented lines (direction, moment); the predicates here decide
//! membership of the unit dual sphere, the hyper-dual sphere, its unit
//! restriction, and the tangent bundle of the unit 2-sphere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{hd_sqrt, DualScalar, HyperDualScalar, ScalarError, SmoothScalar};

// ---------------------------------------------------------------------------
// Generic 3-vector
// ---------------------------------------------------------------------------

/// A 3-vector over any smooth scalar. `GVec3<f64>` is the ordinary [`Vec3`];
/// dual-scalar instantiations carry value-and-derivative lanes through the
/// same formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GVec3<S> {
    pub x: S,
    pub y: S,
    pub z: S,
}

/// Real 3-vector.
pub type Vec3 = GVec3<f64>;

impl<S: SmoothScalar> GVec3<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        GVec3 { x, y, z }
    }

    pub fn zero() -> Self {
        GVec3::new(S::zero(), S::zero(), S::zero())
    }

    pub fn dot(self, rhs: Self) -> S {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    pub fn cross(self, rhs: Self) -> Self {
        GVec3::new(
            self.y * rhs.z - self.z * rhs.y,
            self.z * rhs.x - self.x * rhs.z,
            self.x * rhs.y - self.y * rhs.x,
        )
    }

    pub fn scale(self, k: S) -> Self {
        GVec3::new(self.x * k, self.y * k, self.z * k)
    }

    /// Euclidean norm; domain of `sqrt` applies to the real part of the
    /// squared length.
    pub fn norm(self) -> S {
        self.dot(self).sqrt()
    }

    /// Scalar triple product `det(a, b, c) = ⟨a×b, c⟩`.
    pub fn triple(a: Self, b: Self, c: Self) -> S {
        a.cross(b).dot(c)
    }
}

impl<S: SmoothScalar> Add for GVec3<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GVec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl<S: SmoothScalar> Sub for GVec3<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GVec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl<S: SmoothScalar> Neg for GVec3<S> {
    type Output = Self;
    fn neg(self) -> Self {
        GVec3::new(-self.x, -self.y, -self.z)
    }
}

impl<S: SmoothScalar> Mul<S> for GVec3<S> {
    type Output = Self;
    fn mul(self, k: S) -> Self {
        self.scale(k)
    }
}

impl Vec3 {
    pub const EX: Vec3 = GVec3 {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const EY: Vec3 = GVec3 {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const EZ: Vec3 = GVec3 {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };
    pub const ZERO: Vec3 = GVec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector in the same direction, or `None` below `tol`.
    pub fn normalized(self, tol: f64) -> Option<Vec3> {
        let n = self.norm();
        if n <= tol {
            None
        } else {
            Some(self.scale(1.0 / n))
        }
    }

    pub fn max_abs_diff(&self, other: &Vec3) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

// ---------------------------------------------------------------------------
// Dual vectors
// ---------------------------------------------------------------------------

/// Dual vector `𝔸 = a + εa*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualVec3 {
    /// Real part `a`.
    pub a: Vec3,
    /// Dual part `a*`.
    pub a_star: Vec3,
}

impl DualVec3 {
    pub fn new(a: Vec3, a_star: Vec3) -> Self {
        DualVec3 { a, a_star }
    }

    /// `⟨𝔸,𝔹⟩ = a·b + ε(a*·b + a·b*)`
    pub fn inner(self, rhs: Self) -> DualScalar {
        DualScalar::new(
            self.a.dot(rhs.a),
            self.a_star.dot(rhs.a) + self.a.dot(rhs.a_star),
        )
    }

    /// `𝔸×𝔹 = a×b + ε(a×b* + a*×b)`
    pub fn cross(self, rhs: Self) -> Self {
        DualVec3::new(
            self.a.cross(rhs.a),
            self.a.cross(rhs.a_star) + self.a_star.cross(rhs.a),
        )
    }

    /// Dual norm `|𝔸| = |a| + ε(a·a*)/|a|`; exists only for `a ≠ 0`.
    pub fn norm(self) -> Result<DualScalar, ScalarError> {
        let n = self.a.norm();
        if n == 0.0 {
            return Err(ScalarError {
                op: "dual_norm",
                value: 0.0,
                requirement: "real part a != 0",
            });
        }
        Ok(DualScalar::new(n, self.a.dot(self.a_star) / n))
    }

    /// Dual determinant `det(𝔸,𝔹,ℂ) = ⟨𝔸×𝔹, ℂ⟩` over dual arithmetic.
    pub fn triple(a: Self, b: Self, c: Self) -> DualScalar {
        a.cross(b).inner(c)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.a
            .max_abs_diff(&other.a)
            .max(self.a_star.max_abs_diff(&other.a_star))
    }
}

impl Add for DualVec3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        DualVec3::new(self.a + rhs.a, self.a_star + rhs.a_star)
    }
}

impl Sub for DualVec3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        DualVec3::new(self.a - rhs.a, self.a_star - rhs.a_star)
    }
}

impl Neg for DualVec3 {
    type Output = Self;
    fn neg(self) -> Self {
        DualVec3::new(-self.a, -self.a_star)
    }
}

/// Dual scalar times dual vector: `(u + εu*)(b + εb*) = ub + ε(ub* + u*b)`.
impl Mul<DualVec3> for DualScalar {
    type Output = DualVec3;
    fn mul(self, v: DualVec3) -> DualVec3 {
        DualVec3::new(
            v.a.scale(self.re),
            v.a_star.scale(self.re) + v.a.scale(self.du),
        )
    }
}

// ---------------------------------------------------------------------------
// Hyper-dual vectors
// ---------------------------------------------------------------------------

/// Hyper-dual vector `𝔸₂ = a₀ + εa₁ + ε*a₂ + εε*a₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperDualVec3 {
    pub a0: Vec3,
    pub a1: Vec3,
    pub a2: Vec3,
    pub a3: Vec3,
}

impl HyperDualVec3 {
    pub fn new(a0: Vec3, a1: Vec3, a2: Vec3, a3: Vec3) -> Self {
        HyperDualVec3 { a0, a1, a2, a3 }
    }

    /// The nested view `(𝔸, 𝔸*)` with `𝔸 = a₀+εa₁`, `𝔸* = a₂+εa₃`.
    pub fn dual_lanes(self) -> (DualVec3, DualVec3) {
        (
            DualVec3::new(self.a0, self.a1),
            DualVec3::new(self.a2, self.a3),
        )
    }

    pub fn from_dual_lanes(a: DualVec3, a_star: DualVec3) -> Self {
        HyperDualVec3::new(a.a, a.a_star, a_star.a, a_star.a_star)
    }

    /// `⟨𝔸₂,𝔹₂⟩₂ = ⟨𝔸,𝔹⟩ + ε*(⟨𝔸,𝔹*⟩ + ⟨𝔸*,𝔹⟩)`, expanded per lane:
    ///
    /// ```text
    /// 1:   a₀·b₀
    /// ε:   a₀·b₁ + a₁·b₀
    /// ε*:  a₀·b₂ + a₂·b₀
    /// εε*: a₀·b₃ + a₁·b₂ + a₂·b₁ + a₃·b₀
    /// ```
    pub fn inner(self, rhs: Self) -> HyperDualScalar {
        HyperDualScalar::new(
            self.a0.dot(rhs.a0),
            self.a0.dot(rhs.a1) + self.a1.dot(rhs.a0),
            self.a0.dot(rhs.a2) + self.a2.dot(rhs.a0),
            self.a0.dot(rhs.a3) + self.a1.dot(rhs.a2) + self.a2.dot(rhs.a1) + self.a3.dot(rhs.a0),
        )
    }

    /// `𝔸₂×₂𝔹₂ = 𝔸×𝔹 + ε*(𝔸×𝔹* + 𝔸*×𝔹)` with the same lane expansion as
    /// the inner product, `×` replacing `·`.
    pub fn cross(self, rhs: Self) -> Self {
        HyperDualVec3::new(
            self.a0.cross(rhs.a0),
            self.a0.cross(rhs.a1) + self.a1.cross(rhs.a0),
            self.a0.cross(rhs.a2) + self.a2.cross(rhs.a0),
            self.a0.cross(rhs.a3)
                + self.a1.cross(rhs.a2)
                + self.a2.cross(rhs.a1)
                + self.a3.cross(rhs.a0),
        )
    }

    /// Hyper-dual norm `|𝔸₂| = sqrt(⟨𝔸₂,𝔸₂⟩₂)`; exists only for `a₀ ≠ 0`.
    ///
    /// The composition expands to
    /// `|a₀| + ε(a₀·a₁)/|a₀| + ε*(a₀·a₂)/|a₀|
    ///  + εε*[(a₀·a₃ + a₁·a₂)/|a₀| − (a₀·a₁)(a₀·a₂)/|a₀|³]`.
    pub fn norm(self) -> Result<HyperDualScalar, ScalarError> {
        if self.a0.dot(self.a0) == 0.0 {
            return Err(ScalarError {
                op: "hd_norm",
                value: 0.0,
                requirement: "a0 != 0",
            });
        }
        hd_sqrt(self.inner(self))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.a0
            .max_abs_diff(&other.a0)
            .max(self.a1.max_abs_diff(&other.a1))
            .max(self.a2.max_abs_diff(&other.a2))
            .max(self.a3.max_abs_diff(&other.a3))
    }
}

impl Add for HyperDualVec3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        HyperDualVec3::new(
            self.a0 + rhs.a0,
            self.a1 + rhs.a1,
            self.a2 + rhs.a2,
            self.a3 + rhs.a3,
        )
    }
}

impl Sub for HyperDualVec3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        HyperDualVec3::new(
            self.a0 - rhs.a0,
            self.a1 - rhs.a1,
            self.a2 - rhs.a2,
            self.a3 - rhs.a3,
        )
    }
}

impl Neg for HyperDualVec3 {
    type Output = Self;
    fn neg(self) -> Self {
        HyperDualVec3::new(-self.a0, -self.a1, -self.a2, -self.a3)
    }
}

// ---------------------------------------------------------------------------
// Membership predicates
// ---------------------------------------------------------------------------

/// One membership condition together with its residual. The condition holds
/// when `|residual| ≤ tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub residual: f64,
}

/// Structured outcome of a membership test: every defining condition with
/// its residual, so diagnostics can name exactly what failed and by how much.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub conditions: Vec<ConditionCheck>,
    pub tol: f64,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.residual.abs() <= self.tol)
    }

    pub fn max_violation(&self) -> f64 {
        self.conditions
            .iter()
            .map(|c| c.residual.abs())
            .fold(0.0, f64::max)
    }

    /// The worst-violating condition, if any condition exceeds the tolerance.
    pub fn worst_failure(&self) -> Option<&ConditionCheck> {
        self.conditions
            .iter()
            .filter(|c| c.residual.abs() > self.tol)
            .max_by(|a, b| a.residual.abs().total_cmp(&b.residual.abs()))
    }
}

impl fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.conditions.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let mark = if c.residual.abs() <= self.tol {
                "ok"
            } else {
                "FAIL"
            };
            write!(f, "{} = {:.3e} [{}]", c.name, c.residual, mark)?;
        }
        Ok(())
    }
}

/// Unit dual sphere: `|a| = 1` and `a·a* = 0`.
pub fn on_unit_dual_sphere(v: &DualVec3, tol: f64) -> MembershipReport {
    MembershipReport {
        conditions: vec![
            ConditionCheck {
                name: "|a| - 1",
                residual: v.a.norm() - 1.0,
            },
            ConditionCheck {
                name: "a . a*",
                residual: v.a.dot(v.a_star),
            },
        ],
        tol,
    }
}

/// Hyper-dual sphere: `|a₀| = 1`, `a₀·a₁ = a₀·a₂ = 0`, `a₀·a₃ = −a₁·a₂`.
pub fn on_hyperdual_sphere(v: &HyperDualVec3, tol: f64) -> MembershipReport {
    MembershipReport {
        conditions: vec![
            ConditionCheck {
                name: "|a0| - 1",
                residual: v.a0.norm() - 1.0,
            },
            ConditionCheck {
                name: "a0 . a1",
                residual: v.a0.dot(v.a1),
            },
            ConditionCheck {
                name: "a0 . a2",
                residual: v.a0.dot(v.a2),
            },
            ConditionCheck {
                name: "a0 . a3 + a1 . a2",
                residual: v.a0.dot(v.a3) + v.a1.dot(v.a2),
            },
        ],
        tol,
    }
}

/// Unit hyper-dual sphere: the hyper-dual sphere conditions plus
/// `|a₂| = 1` and `a₂·a₃ = 0` (the hyper-dual part is itself unit).
pub fn on_unit_hyperdual_sphere(v: &HyperDualVec3, tol: f64) -> MembershipReport {
    let mut report = on_hyperdual_sphere(v, tol);
    report.conditions.push(ConditionCheck {
        name: "|a2| - 1",
        residual: v.a2.norm() - 1.0,
    });
    report.conditions.push(ConditionCheck {
        name: "a2 . a3",
        residual: v.a2.dot(v.a3),
    });
    report
}

/// Unit tangent bundle of the 2-sphere: `|γ| = |v| = 1` and `γ·v = 0`.
pub fn on_unit_tangent_bundle(gamma: Vec3, v: Vec3, tol: f64) -> MembershipReport {
    MembershipReport {
        conditions: vec![
            ConditionCheck {
                name: "|gamma| - 1",
                residual: gamma.norm() - 1.0,
            },
            ConditionCheck {
                name: "|v| - 1",
                residual: v.norm() - 1.0,
            },
            ConditionCheck {
                name: "gamma . v",
                residual: gamma.dot(v),
            },
        ],
        tol,
    }
}

/// Tangent bundle of the 2-sphere: `|γ| = 1` and `γ·v = 0` (no unit
/// condition on the fibre).
pub fn on_tangent_bundle(gamma: Vec3, v: Vec3, tol: f64) -> MembershipReport {
    MembershipReport {
        conditions: vec![
            ConditionCheck {
                name: "|gamma| - 1",
                residual: gamma.norm() - 1.0,
            },
            ConditionCheck {
                name: "gamma . v",
                residual: gamma.dot(v),
            },
        ],
        tol,
    }
}

/// Analytic membership tolerance used where a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-9;
