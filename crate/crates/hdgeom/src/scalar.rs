//! Dual and hyper-dual scalar arithmetic.
//!
//! A dual number `a + εa*` (with `ε² = 0`) carries a value and an exact first
//! derivative. A hyper-dual number
//!
//! ```text
//! a₀ + ε a₁ + ε* a₂ + εε* a₃,    ε² = ε*² = (εε*)² = 0,  εε* ≠ 0
//! ```
//!
//! carries a value together with exact first and second derivatives: evaluate
//! `f` at `t + ε + ε*` and read `f(t)`, `f′(t)`, `f″(t)` from the `1`, `ε`
//! and `εε*` components. No truncation error, no step-size tuning — the
//! nilpotent algebra truncates the Taylor expansion exactly.
//!
//! Components are stored flat in the fixed basis `(1, ε, ε*, εε*)`; the
//! nested dual-of-dual view `(a₀ + εa₁) + ε*(a₂ + εa₃)` is recovered by
//! grouping.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Error for scalar operations outside their domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarError {
    /// Operation that failed, e.g. `"sqrt"`.
    pub op: &'static str,
    /// The offending real (non-nilpotent) part.
    pub value: f64,
    /// Human-readable domain requirement.
    pub requirement: &'static str,
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: domain error, requires {} (got real part {})",
            self.op, self.requirement, self.value
        )
    }
}

impl std::error::Error for ScalarError {}

// ---------------------------------------------------------------------------
// Generic smooth scalar
// ---------------------------------------------------------------------------

/// Scalar kinds an expression or curve can be evaluated over: plain reals,
/// dual numbers, hyper-dual numbers, and nestings thereof.
///
/// All methods are total; the elementary functions follow IEEE semantics on
/// the real line (`sqrt` of a negative real part yields NaN components, etc.).
/// Callers that need diagnostics check domains via [`SmoothScalar::real_part`]
/// before applying an operation.
pub trait SmoothScalar:
    Copy
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_real(x: f64) -> Self;
    /// The underlying real point the value sits over (all nilpotent parts
    /// stripped). Domain checks for `ln`, `sqrt`, `recip` apply to this.
    fn real_part(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    /// Power with a real constant exponent.
    fn powf(self, k: f64) -> Self;
    /// Multiplicative inverse; requires `real_part() != 0`.
    fn recip(self) -> Self;

    fn zero() -> Self {
        Self::from_real(0.0)
    }
    fn one() -> Self {
        Self::from_real(1.0)
    }
}

impl SmoothScalar for f64 {
    fn from_real(x: f64) -> Self {
        x
    }
    fn real_part(self) -> f64 {
        self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn tan(self) -> Self {
        f64::tan(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powf(self, k: f64) -> Self {
        f64::powf(self, k)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
}

// ---------------------------------------------------------------------------
// Dual numbers
// ---------------------------------------------------------------------------

/// A dual number `re + ε·du` over any smooth scalar, with `ε² = 0`.
///
/// `Dual<f64>` is the classical dual number ([`DualScalar`]). Nesting —
/// `Dual<HyperDualScalar>`, `Dual<Dual<...>>` — raises the derivative order,
/// which is how expression-defined curves obtain third and fourth
/// derivatives without finite differencing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<S> {
    /// Non-dual part `a`.
    pub re: S,
    /// Dual part `a*`.
    pub du: S,
}

/// The paper-facing dual scalar `a + εa*`.
pub type DualScalar = Dual<f64>;

impl<S: SmoothScalar> Dual<S> {
    pub fn new(re: S, du: S) -> Self {
        Dual { re, du }
    }

    /// Purely real dual number `x + 0ε`.
    pub fn real(x: f64) -> Self {
        Dual {
            re: S::from_real(x),
            du: S::zero(),
        }
    }

    /// The differentiation seed `t + 1ε`.
    pub fn var(t: S) -> Self {
        Dual {
            re: t,
            du: S::one(),
        }
    }
}

impl DualScalar {
    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.du.is_finite()
    }
}

impl<S: SmoothScalar> Add for Dual<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl<S: SmoothScalar> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl<S: SmoothScalar> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.du)
    }
}

/// `(a + εa*)(b + εb*) = ab + ε(ab* + a*b)` — the ε² term vanishes.
impl<S: SmoothScalar> Mul for Dual<S> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)] // product rule mixes + into ×
    fn mul(self, rhs: Self) -> Self {
        Dual::new(self.re * rhs.re, self.re * rhs.du + self.du * rhs.re)
    }
}

impl<S: SmoothScalar> SmoothScalar for Dual<S> {
    fn from_real(x: f64) -> Self {
        Dual::real(x)
    }
    fn real_part(self) -> f64 {
        self.re.real_part()
    }
    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.du * self.re.cos())
    }
    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -(self.du * self.re.sin()))
    }
    fn tan(self) -> Self {
        let c = self.re.cos();
        Dual::new(self.re.tan(), self.du * (c * c).recip())
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, self.du * e)
    }
    fn ln(self) -> Self {
        Dual::new(self.re.ln(), self.du * self.re.recip())
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Dual::new(s, self.du * (s + s).recip())
    }
    fn powf(self, k: f64) -> Self {
        // k = 0 and k = 1 short-circuit so derivative coefficients stay
        // finite at a zero base (k·w^(k-1) would evaluate 0·∞ there).
        if k == 0.0 {
            return Self::one();
        }
        if k == 1.0 {
            return self;
        }
        Dual::new(
            self.re.powf(k),
            self.du * S::from_real(k) * self.re.powf(k - 1.0),
        )
    }
    fn recip(self) -> Self {
        let r = self.re.recip();
        Dual::new(r, -(self.du * r * r))
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.re, self.du)
    }
}

/// Checked dual square root; requires `re > 0`. Squaring the result
/// recovers the input exactly (in exact arithmetic).
pub fn dual_sqrt(x: DualScalar) -> Result<DualScalar, ScalarError> {
    if !(x.re > 0.0) {
        return Err(ScalarError {
            op: "dual_sqrt",
            value: x.re,
            requirement: "re > 0",
        });
    }
    Ok(SmoothScalar::sqrt(x))
}

// ---------------------------------------------------------------------------
// Hyper-dual numbers
// ---------------------------------------------------------------------------

/// A hyper-dual number `w + ε e1 + ε* e2 + εε* e12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperDualScalar {
    /// Real component `a₀`.
    pub w: f64,
    /// `ε` component `a₁`.
    pub e1: f64,
    /// `ε*` component `a₂`.
    pub e2: f64,
    /// `εε*` component `a₃`.
    pub e12: f64,
}

impl HyperDualScalar {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    /// The unit `ε`.
    pub const EPS1: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    /// The unit `ε*`.
    pub const EPS2: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    /// The unit `εε*`.
    pub const EPS12: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, e1: f64, e2: f64, e12: f64) -> Self {
        HyperDualScalar { w, e1, e2, e12 }
    }

    /// Purely real hyper-dual number.
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// The second-derivative seed `t + ε + ε*`: evaluating `f` here yields
    /// `(f, f′, f′, f″)` in components `(w, e1, e2, e12)`.
    pub const fn var(t: f64) -> Self {
        Self::new(t, 1.0, 1.0, 0.0)
    }

    /// Split into the nested view `A + ε*A*` with `A = w + ε e1`,
    /// `A* = e2 + ε e12`.
    pub fn dual_parts(self) -> (DualScalar, DualScalar) {
        (
            DualScalar::new(self.w, self.e1),
            DualScalar::new(self.e2, self.e12),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.w.is_finite() && self.e1.is_finite() && self.e2.is_finite() && self.e12.is_finite()
    }

    /// Max componentwise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.w - other.w)
            .abs()
            .max((self.e1 - other.e1).abs())
            .max((self.e2 - other.e2).abs())
            .max((self.e12 - other.e12).abs())
    }
}

impl Add for HyperDualScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.w + rhs.w,
            self.e1 + rhs.e1,
            self.e2 + rhs.e2,
            self.e12 + rhs.e12,
        )
    }
}

impl Sub for HyperDualScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.w - rhs.w,
            self.e1 - rhs.e1,
            self.e2 - rhs.e2,
            self.e12 - rhs.e12,
        )
    }
}

impl Neg for HyperDualScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.e1, -self.e2, -self.e12)
    }
}

/// The hyper-dual product
/// `A₂B₂ = AB + ε*(AB* + A*B)`, expanded over the flat basis:
///
/// ```text
/// (ab)₀  = a₀b₀
/// (ab)₁  = a₀b₁ + a₁b₀
/// (ab)₂  = a₀b₂ + a₂b₀
/// (ab)₁₂ = a₀b₃ + a₁b₂ + a₂b₁ + a₃b₀
/// ```
impl Mul for HyperDualScalar {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)] // product rule mixes + into ×
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.w * rhs.w,
            self.w * rhs.e1 + self.e1 * rhs.w,
            self.w * rhs.e2 + self.e2 * rhs.w,
            self.w * rhs.e12 + self.e1 * rhs.e2 + self.e2 * rhs.e1 + self.e12 * rhs.w,
        )
    }
}

impl Mul<f64> for HyperDualScalar {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.w * rhs, self.e1 * rhs, self.e2 * rhs, self.e12 * rhs)
    }
}

impl fmt::Display for HyperDualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}ε + {}ε* + {}εε*",
            self.w, self.e1, self.e2, self.e12
        )
    }
}

/// Lift a smooth real function through a hyper-dual point, given its value
/// and first two derivatives at the real part.
///
/// Writing `x = w + h` with nilpotent `h`, `h² = 2εε*·e1·e2` and all higher
/// powers vanish, so the Taylor expansion truncates exactly:
///
/// ```text
/// f(x) = f(w) + f′(w)(ε e1 + ε* e2 + εε* e12) + εε* f″(w) e1 e2
/// ```
pub fn hd_lift<F>(f: F, x: HyperDualScalar) -> HyperDualScalar
where
    F: Fn(f64) -> (f64, f64, f64),
{
    let (f0, f1, f2) = f(x.w);
    HyperDualScalar::new(f0, x.e1 * f1, x.e2 * f1, x.e12 * f1 + x.e1 * x.e2 * f2)
}

/// Checked hyper-dual square root; requires `w > 0`.
///
/// The formula is forced by `r·r = x`:
/// `r = √w + ε e1/(2√w) + ε* e2/(2√w) + εε*(e12/(2√w) − e1·e2/(4w^{3/2}))`.
pub fn hd_sqrt(x: HyperDualScalar) -> Result<HyperDualScalar, ScalarError> {
    if !(x.w > 0.0) {
        return Err(ScalarError {
            op: "hd_sqrt",
            value: x.w,
            requirement: "w > 0",
        });
    }
    Ok(hd_lift(
        |w| {
            let s = w.sqrt();
            (s, 0.5 / s, -0.25 / (w * s))
        },
        x,
    ))
}

/// Checked reciprocal; requires `w ≠ 0`. Internal building block for norm
/// denominators — the algebra itself exposes no division.
pub fn hd_recip(x: HyperDualScalar) -> Result<HyperDualScalar, ScalarError> {
    if x.w == 0.0 {
        return Err(ScalarError {
            op: "hd_recip",
            value: x.w,
            requirement: "w != 0",
        });
    }
    Ok(hd_lift(
        |w| {
            let r = 1.0 / w;
            (r, -r * r, 2.0 * r * r * r)
        },
        x,
    ))
}

impl SmoothScalar for HyperDualScalar {
    fn from_real(x: f64) -> Self {
        Self::real(x)
    }
    fn real_part(self) -> f64 {
        self.w
    }
    fn sin(self) -> Self {
        hd_lift(|w| (w.sin(), w.cos(), -w.sin()), self)
    }
    fn cos(self) -> Self {
        hd_lift(|w| (w.cos(), -w.sin(), -w.cos()), self)
    }
    fn tan(self) -> Self {
        hd_lift(
            |w| {
                let t = w.tan();
                let sec2 = 1.0 + t * t;
                (t, sec2, 2.0 * t * sec2)
            },
            self,
        )
    }
    fn exp(self) -> Self {
        hd_lift(
            |w| {
                let e = w.exp();
                (e, e, e)
            },
            self,
        )
    }
    fn ln(self) -> Self {
        hd_lift(
            |w| {
                let r = 1.0 / w;
                (w.ln(), r, -r * r)
            },
            self,
        )
    }
    fn sqrt(self) -> Self {
        hd_lift(
            |w| {
                let s = w.sqrt();
                (s, 0.5 / s, -0.25 / (w * s))
            },
            self,
        )
    }
    fn powf(self, k: f64) -> Self {
        if k == 0.0 {
            return Self::ONE;
        }
        if k == 1.0 {
            return self;
        }
        hd_lift(
            |w| {
                (
                    w.powf(k),
                    k * w.powf(k - 1.0),
                    k * (k - 1.0) * w.powf(k - 2.0),
                )
            },
            self,
        )
    }
    fn recip(self) -> Self {
        hd_lift(
            |w| {
                let r = 1.0 / w;
                (r, -r * r, 2.0 * r * r * r)
            },
            self,
        )
    }
}

/// Exact value, first and second derivative of `f` at `t`, read from one
/// evaluation at the seed `t + ε + ε*`.
pub fn derivatives_of<F>(f: F, t: f64) -> Result<(f64, f64, f64), ScalarError>
where
    F: Fn(HyperDualScalar) -> Result<HyperDualScalar, ScalarError>,
{
    let y = f(HyperDualScalar::var(t))?;
    Ok((y.w, y.e1, y.e12))
}
