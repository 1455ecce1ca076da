//! Parametric curves in ℝ³ with exact derivatives, Frenet and adapted
//! frames, hyper-dual curve assembly, and the hyper-dual arc-length
//! functional.
//!
//! A [`Curve3`] evaluates to a jet `(p, d1, d2, d3)` — position and first
//! three derivatives. Built-in families (helix, circle, line) supply the
//! jet in closed form; expression-defined curves obtain it from one nested
//! dual-over-hyper-dual evaluation, so there is no finite differencing on
//! any frame path. Fourth derivatives, needed for exact derivatives of
//! adapted-frame fields, come from a second nesting level.
//!
//! A [`HyperDualCurve`] `Γ₂(t)` stacks four lanes `(a₀, a₁, a₂, a₃)` into a
//! hyper-dual vector per parameter, either from four explicit curves or from
//! the fields of a moving frame along one curve.

use std::fmt;
use std::sync::Arc;

use crate::expr::{EvalError, Expr};
use crate::scalar::{Dual, DualScalar, HyperDualScalar, SmoothScalar};
use crate::vector::{GVec3, HyperDualVec3, Vec3};

/// Magnitudes below this are treated as degenerate in frame constructions.
const DEGENERACY_TOL: f64 = 1e-12;

/// Central-difference step for the fallback derivatives of composite curves.
const FD_STEP: f64 = 1e-5;

/// Default number of Gauss–Legendre panels for arc-length quadrature.
pub const DEFAULT_QUAD_PANELS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum CurveError {
    /// A frame or norm could not be built because a required magnitude
    /// vanished (straight segment, inflection, zero-speed point).
    Degenerate {
        what: &'static str,
        t: f64,
        magnitude: f64,
    },
    /// An expression-defined component hit a domain error.
    Eval { t: f64, source: EvalError },
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::Degenerate { what, t, magnitude } => {
                write!(
                    f,
                    "degenerate curve at t = {t}: {what} (magnitude {magnitude:.3e})"
                )
            }
            CurveError::Eval { t, source } => write!(f, "evaluation failed at t = {t}: {source}"),
        }
    }
}

impl std::error::Error for CurveError {}

/// Position and first three derivatives of a curve at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub p: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: Vec3,
}

trait CurveMap: Send + Sync {
    fn jet(&self, t: f64) -> Result<CurveJet, CurveError>;
    fn d4(&self, t: f64) -> Result<Vec3, CurveError>;
}

// ---------------------------------------------------------------------------
// Built-in families
// ---------------------------------------------------------------------------

struct HelixMap {
    r: f64,
    c: f64,
}

impl CurveMap for HelixMap {
    fn jet(&self, t: f64) -> Result<CurveJet, CurveError> {
        let (s, co) = t.sin_cos();
        Ok(CurveJet {
            p: Vec3::new(self.r * co, self.r * s, self.c * t),
            d1: Vec3::new(-self.r * s, self.r * co, self.c),
            d2: Vec3::new(-self.r * co, -self.r * s, 0.0),
            d3: Vec3::new(self.r * s, -self.r * co, 0.0),
        })
    }

    fn d4(&self, t: f64) -> Result<Vec3, CurveError> {
        let (s, co) = t.sin_cos();
        Ok(Vec3::new(self.r * co, self.r * s, 0.0))
    }
}

struct LineMap {
    origin: Vec3,
    direction: Vec3,
}

impl CurveMap for LineMap {
    fn jet(&self, t: f64) -> Result<CurveJet, CurveError> {
        Ok(CurveJet {
            p: self.origin + self.direction.scale(t),
            d1: self.direction,
            d2: Vec3::ZERO,
            d3: Vec3::ZERO,
        })
    }

    fn d4(&self, _t: f64) -> Result<Vec3, CurveError> {
        Ok(Vec3::ZERO)
    }
}

struct ConstMap {
    point: Vec3,
}

impl CurveMap for ConstMap {
    fn jet(&self, _t: f64) -> Result<CurveJet, CurveError> {
        Ok(CurveJet {
            p: self.point,
            d1: Vec3::ZERO,
            d2: Vec3::ZERO,
            d3: Vec3::ZERO,
        })
    }

    fn d4(&self, _t: f64) -> Result<Vec3, CurveError> {
        Ok(Vec3::ZERO)
    }
}

// ---------------------------------------------------------------------------
// Expression-defined curves
// ---------------------------------------------------------------------------

struct ExprMap {
    components: [Expr; 3],
}

impl ExprMap {
    fn eval_component<S: SmoothScalar>(&self, i: usize, t: S, at: f64) -> Result<S, CurveError> {
        self.components[i]
            .eval(t)
            .map_err(|source| CurveError::Eval { t: at, source })
    }
}

impl CurveMap for ExprMap {
    fn jet(&self, t: f64) -> Result<CurveJet, CurveError> {
        // One dual-over-hyper-dual pass per component yields p, d1, d2, d3.
        let seed: Dual<HyperDualScalar> = Dual::new(HyperDualScalar::var(t), HyperDualScalar::ONE);
        let mut p = [0.0; 3];
        let mut d1 = [0.0; 3];
        let mut d2 = [0.0; 3];
        let mut d3 = [0.0; 3];
        for i in 0..3 {
            let y = self.eval_component(i, seed, t)?;
            p[i] = y.re.w;
            d1[i] = y.re.e1;
            d2[i] = y.re.e12;
            d3[i] = y.du.e12;
        }
        Ok(CurveJet {
            p: Vec3::new(p[0], p[1], p[2]),
            d1: Vec3::new(d1[0], d1[1], d1[2]),
            d2: Vec3::new(d2[0], d2[1], d2[2]),
            d3: Vec3::new(d3[0], d3[1], d3[2]),
        })
    }

    fn d4(&self, t: f64) -> Result<Vec3, CurveError> {
        let seed: Dual<Dual<HyperDualScalar>> = Dual::new(
            Dual::new(HyperDualScalar::var(t), HyperDualScalar::ONE),
            Dual::new(HyperDualScalar::ONE, HyperDualScalar::ZERO),
        );
        let mut d4 = [0.0; 3];
        for i in 0..3 {
            let y = self.eval_component(i, seed, t)?;
            d4[i] = y.du.du.e12;
        }
        Ok(Vec3::new(d4[0], d4[1], d4[2]))
    }
}

// ---------------------------------------------------------------------------
// Composite curves: frame fields and derived point/derivative maps
// ---------------------------------------------------------------------------

/// Curves defined by an exact `(position, first derivative)` closure.
/// Higher derivatives fall back to central differences of the exact data;
/// no frame construction in this crate consumes them.
struct DerivedMap {
    f: Arc<dyn Fn(f64) -> Result<(Vec3, Vec3), CurveError> + Send + Sync>,
}

impl CurveMap for DerivedMap {
    fn jet(&self, t: f64) -> Result<CurveJet, CurveError> {
        let (p, d1) = (self.f)(t)?;
        let (_, d1p) = (self.f)(t + FD_STEP)?;
        let (_, d1m) = (self.f)(t - FD_STEP)?;
        let d2 = (d1p - d1m).scale(0.5 / FD_STEP);
        let d3 = (d1p - d1.scale(2.0) + d1m).scale(1.0 / (FD_STEP * FD_STEP));
        Ok(CurveJet { p, d1, d2, d3 })
    }

    fn d4(&self, t: f64) -> Result<Vec3, CurveError> {
        let h = FD_STEP.sqrt();
        let (_, a) = (self.f)(t + 1.5 * h)?;
        let (_, b) = (self.f)(t + 0.5 * h)?;
        let (_, c) = (self.f)(t - 0.5 * h)?;
        let (_, d) = (self.f)(t - 1.5 * h)?;
        Ok((a - b.scale(3.0) + c.scale(3.0) - d).scale(1.0 / (h * h * h)))
    }
}

struct FrameFieldMap {
    base: Arc<dyn CurveMap>,
    frame: FrameKind,
    field: FrameField,
}

impl CurveMap for FrameFieldMap {
    fn jet(&self, t: f64) -> Result<CurveJet, CurveError> {
        let idx = self.field.index_in(self.frame);
        let (p, d1) = frame_pairs(self.base.as_ref(), self.frame, t)?[idx];
        let (_, d1p) = frame_pairs(self.base.as_ref(), self.frame, t + FD_STEP)?[idx];
        let (_, d1m) = frame_pairs(self.base.as_ref(), self.frame, t - FD_STEP)?[idx];
        let d2 = (d1p - d1m).scale(0.5 / FD_STEP);
        let d3 = (d1p - d1.scale(2.0) + d1m).scale(1.0 / (FD_STEP * FD_STEP));
        Ok(CurveJet { p, d1, d2, d3 })
    }

    fn d4(&self, t: f64) -> Result<Vec3, CurveError> {
        let h = FD_STEP.sqrt();
        let idx = self.field.index_in(self.frame);
        let grab = |s: f64| -> Result<Vec3, CurveError> {
            Ok(frame_pairs(self.base.as_ref(), self.frame, s)?[idx].1)
        };
        let (a, b, c, d) = (
            grab(t + 1.5 * h)?,
            grab(t + 0.5 * h)?,
            grab(t - 0.5 * h)?,
            grab(t - 1.5 * h)?,
        );
        Ok((a - b.scale(3.0) + c.scale(3.0) - d).scale(1.0 / (h * h * h)))
    }
}

// ---------------------------------------------------------------------------
// Curve3
// ---------------------------------------------------------------------------

/// A parametric curve `t ↦ ℝ³` on a closed interval, with exact derivatives
/// where the defining data permits.
#[derive(Clone)]
pub struct Curve3 {
    map: Arc<dyn CurveMap>,
    t0: f64,
    t1: f64,
}

impl fmt::Debug for Curve3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve3 {{ domain: [{}, {}] }}", self.t0, self.t1)
    }
}

impl Curve3 {
    fn from_map(map: Arc<dyn CurveMap>, domain: (f64, f64)) -> Self {
        assert!(
            domain.0 < domain.1,
            "curve domain must satisfy t0 < t1, got [{}, {}]",
            domain.0,
            domain.1
        );
        Curve3 {
            map,
            t0: domain.0,
            t1: domain.1,
        }
    }

    /// Circular helix `(r cos t, r sin t, c t)`.
    pub fn helix(r: f64, c: f64, domain: (f64, f64)) -> Self {
        Self::from_map(Arc::new(HelixMap { r, c }), domain)
    }

    /// Planar circle of radius `r` in the xy-plane.
    pub fn circle(r: f64, domain: (f64, f64)) -> Self {
        Self::from_map(Arc::new(HelixMap { r, c: 0.0 }), domain)
    }

    /// Affine line `origin + t·direction`. A zero direction gives a constant
    /// curve, valid as a lane but degenerate for frames.
    pub fn line(origin: Vec3, direction: Vec3, domain: (f64, f64)) -> Self {
        Self::from_map(Arc::new(LineMap { origin, direction }), domain)
    }

    /// Constant curve.
    pub fn constant(point: Vec3, domain: (f64, f64)) -> Self {
        Self::from_map(Arc::new(ConstMap { point }), domain)
    }

    /// Curve whose components are parsed expressions in `t`.
    pub fn from_exprs(x: Expr, y: Expr, z: Expr, domain: (f64, f64)) -> Self {
        Self::from_map(
            Arc::new(ExprMap {
                components: [x, y, z],
            }),
            domain,
        )
    }

    /// A moving-frame field of `base` viewed as a curve (e.g. the tangent
    /// of a helix), with exact position and first derivative.
    pub fn frame_field(base: &Curve3, frame: FrameKind, field: FrameField) -> Self {
        field.require_kind(frame);
        Self::from_map(
            Arc::new(FrameFieldMap {
                base: base.map.clone(),
                frame,
                field,
            }),
            base.domain(),
        )
    }

    /// Curve defined by an exact `(position, first derivative)` function.
    pub fn from_point_derivative_fn<F>(f: F, domain: (f64, f64)) -> Self
    where
        F: Fn(f64) -> Result<(Vec3, Vec3), CurveError> + Send + Sync + 'static,
    {
        Self::from_map(Arc::new(DerivedMap { f: Arc::new(f) }), domain)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    /// Position and first three derivatives at `t`.
    pub fn jet(&self, t: f64) -> Result<CurveJet, CurveError> {
        self.map.jet(t)
    }

    pub fn position(&self, t: f64) -> Result<Vec3, CurveError> {
        Ok(self.jet(t)?.p)
    }

    /// Fourth derivative; exact for built-in and expression curves.
    pub fn d4(&self, t: f64) -> Result<Vec3, CurveError> {
        self.map.d4(t)
    }
}

/// `n ≥ 2` uniform samples over `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least 2 samples");
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + step * i as f64).collect()
}

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

/// Which moving frame to erect along a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameKind {
    /// `{t, n, b}`: tangent, principal normal, binormal.
    Frenet,
    /// `{n, c, w}`: normal, normalized normal derivative, unit Darboux
    /// vector `w = n×c`.
    Adapted,
}

/// A field of a moving frame, used to select hyper-dual curve lanes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameField {
    /// `t` (Frenet only)
    Tangent,
    /// `n` (either frame)
    Normal,
    /// `b` (Frenet only)
    Binormal,
    /// `c = n′/|n′|` (adapted only)
    NormalDerivative,
    /// `w = n×c` (adapted only)
    Darboux,
}

impl FrameField {
    /// Position of this field within its frame's `(first, second, third)`;
    /// panics if the field does not belong to the frame kind.
    fn index_in(self, kind: FrameKind) -> usize {
        match (kind, self) {
            (FrameKind::Frenet, FrameField::Tangent) => 0,
            (FrameKind::Frenet, FrameField::Normal) => 1,
            (FrameKind::Frenet, FrameField::Binormal) => 2,
            (FrameKind::Adapted, FrameField::Normal) => 0,
            (FrameKind::Adapted, FrameField::NormalDerivative) => 1,
            (FrameKind::Adapted, FrameField::Darboux) => 2,
            (kind, field) => panic!("frame field {field:?} does not belong to {kind:?}"),
        }
    }

    fn require_kind(self, kind: FrameKind) {
        self.index_in(kind);
    }

    /// Parse a one-letter field name as used in lane patterns.
    pub fn parse(s: &str, kind: FrameKind) -> Option<FrameField> {
        let field = match (kind, s) {
            (FrameKind::Frenet, "t") => FrameField::Tangent,
            (FrameKind::Frenet, "n") => FrameField::Normal,
            (FrameKind::Frenet, "b") => FrameField::Binormal,
            (FrameKind::Adapted, "n") => FrameField::Normal,
            (FrameKind::Adapted, "c") => FrameField::NormalDerivative,
            (FrameKind::Adapted, "w") => FrameField::Darboux,
            _ => return None,
        };
        Some(field)
    }
}

/// An orthonormal right-handed frame at a curve point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame3 {
    pub first: Vec3,
    pub second: Vec3,
    pub third: Vec3,
}

impl Frame3 {
    pub fn field(&self, i: usize) -> Vec3 {
        match i {
            0 => self.first,
            1 => self.second,
            _ => self.third,
        }
    }
}

/// The Frenet apparatus over any smooth scalar: evaluated over `f64` it
/// yields the frame, over dual scalars it carries exact field derivatives.
struct FrenetData<S> {
    tangent: GVec3<S>,
    normal: GVec3<S>,
    binormal: GVec3<S>,
    speed: S,
    curvature: S,
    torsion: S,
}

fn frenet_data<S: SmoothScalar>(
    d1: GVec3<S>,
    d2: GVec3<S>,
    d3: GVec3<S>,
    t: f64,
) -> Result<FrenetData<S>, CurveError> {
    let v2 = d1.dot(d1);
    if v2.real_part().sqrt() <= DEGENERACY_TOL {
        return Err(CurveError::Degenerate {
            what: "|d1| vanishes (zero-speed point)",
            t,
            magnitude: v2.real_part().sqrt(),
        });
    }
    let speed = v2.sqrt();
    let cross = d1.cross(d2);
    let w2 = cross.dot(cross);
    if w2.real_part().sqrt() <= DEGENERACY_TOL {
        return Err(CurveError::Degenerate {
            what: "|d1 x d2| vanishes (straight or inflection point)",
            t,
            magnitude: w2.real_part().sqrt(),
        });
    }
    let wn = w2.sqrt();
    let tangent = d1.scale(speed.recip());
    let binormal = cross.scale(wn.recip());
    let normal = binormal.cross(tangent);
    let curvature = wn * (v2 * speed).recip();
    let torsion = GVec3::triple(d1, d2, d3) * w2.recip();
    Ok(FrenetData {
        tangent,
        normal,
        binormal,
        speed,
        curvature,
        torsion,
    })
}

/// Adapted fields `(n, c, w)` from the Frenet apparatus via the
/// Frenet–Serret relation `n′ = |d1|(−κ t + τ b)`, avoiding any frame
/// differencing.
fn adapted_fields<S: SmoothScalar>(
    fd: &FrenetData<S>,
    t: f64,
) -> Result<[GVec3<S>; 3], CurveError> {
    let nprime =
        fd.tangent.scale(-(fd.speed * fd.curvature)) + fd.binormal.scale(fd.speed * fd.torsion);
    let m2 = nprime.dot(nprime);
    if m2.real_part().sqrt() <= DEGENERACY_TOL {
        return Err(CurveError::Degenerate {
            what: "|n'| vanishes (adapted frame undefined)",
            t,
            magnitude: m2.real_part().sqrt(),
        });
    }
    let c = nprime.scale(m2.sqrt().recip());
    let w = fd.normal.cross(c);
    Ok([fd.normal, c, w])
}

fn to_dual_vec(value: Vec3, derivative: Vec3) -> GVec3<DualScalar> {
    GVec3::new(
        DualScalar::new(value.x, derivative.x),
        DualScalar::new(value.y, derivative.y),
        DualScalar::new(value.z, derivative.z),
    )
}

fn split_dual_vec(v: GVec3<DualScalar>) -> (Vec3, Vec3) {
    (
        Vec3::new(v.x.re, v.y.re, v.z.re),
        Vec3::new(v.x.du, v.y.du, v.z.du),
    )
}

/// `(value, derivative)` of the three frame fields at `t`, computed by
/// running the frame formulas over dual scalars seeded with the curve jet.
fn frame_pairs(
    map: &dyn CurveMap,
    kind: FrameKind,
    t: f64,
) -> Result<[(Vec3, Vec3); 3], CurveError> {
    let jet = map.jet(t)?;
    let d4 = map.d4(t)?;
    let d1 = to_dual_vec(jet.d1, jet.d2);
    let d2 = to_dual_vec(jet.d2, jet.d3);
    let d3 = to_dual_vec(jet.d3, d4);
    let fd = frenet_data(d1, d2, d3, t)?;
    let fields = match kind {
        FrameKind::Frenet => [fd.tangent, fd.normal, fd.binormal],
        FrameKind::Adapted => adapted_fields(&fd, t)?,
    };
    Ok([
        split_dual_vec(fields[0]),
        split_dual_vec(fields[1]),
        split_dual_vec(fields[2]),
    ])
}

/// Frenet frame `{t, n, b}` at `t`: `t = d1/|d1|`, `b = (d1×d2)/|d1×d2|`,
/// `n = b×t`.
pub fn frenet_frame(c: &Curve3, t: f64) -> Result<Frame3, CurveError> {
    let jet = c.jet(t)?;
    let fd = frenet_data(jet.d1, jet.d2, jet.d3, t)?;
    Ok(Frame3 {
        first: fd.tangent,
        second: fd.normal,
        third: fd.binormal,
    })
}

/// Adapted frame `{n, c, w}` at `t`.
pub fn adapted_frame(c: &Curve3, t: f64) -> Result<Frame3, CurveError> {
    let jet = c.jet(t)?;
    let fd = frenet_data(jet.d1, jet.d2, jet.d3, t)?;
    let [n, cdir, w] = adapted_fields(&fd, t)?;
    Ok(Frame3 {
        first: n,
        second: cdir,
        third: w,
    })
}

/// Speed, curvature and torsion at `t` (from `d1..d3`).
pub fn curvature_torsion(c: &Curve3, t: f64) -> Result<(f64, f64, f64), CurveError> {
    let jet = c.jet(t)?;
    let fd = frenet_data(jet.d1, jet.d2, jet.d3, t)?;
    Ok((fd.speed, fd.curvature, fd.torsion))
}

// ---------------------------------------------------------------------------
// Hyper-dual curves
// ---------------------------------------------------------------------------

#[derive(Clone)]
enum GammaInner {
    Lanes(Box<[Curve3; 4]>),
    FrameLanes {
        curve: Curve3,
        frame: FrameKind,
        fields: [FrameField; 4],
    },
}

/// A curve `Γ₂: t ↦ 𝔻₂` of hyper-dual vectors, assembled from four ℝ³
/// lanes `(a₀(t), a₁(t), a₂(t), a₃(t))`.
#[derive(Clone)]
pub struct HyperDualCurve {
    inner: GammaInner,
    t0: f64,
    t1: f64,
}

impl fmt::Debug for HyperDualCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HyperDualCurve {{ domain: [{}, {}] }}", self.t0, self.t1)
    }
}

impl HyperDualCurve {
    /// Assemble from four explicit lane curves. The shared domain is the
    /// intersection of the lane domains.
    pub fn from_lanes(lanes: [Curve3; 4]) -> Result<Self, CurveError> {
        let t0 = lanes.iter().map(|c| c.t0).fold(f64::NEG_INFINITY, f64::max);
        let t1 = lanes.iter().map(|c| c.t1).fold(f64::INFINITY, f64::min);
        if !(t0 < t1) {
            return Err(CurveError::Degenerate {
                what: "lane domains have empty intersection",
                t: t0,
                magnitude: t1 - t0,
            });
        }
        Ok(HyperDualCurve {
            inner: GammaInner::Lanes(Box::new(lanes)),
            t0,
            t1,
        })
    }

    /// Assemble lanes from the fields of a moving frame along `curve`,
    /// e.g. `(t, n, b, n)` over the Frenet frame.
    pub fn from_frame_lanes(curve: Curve3, frame: FrameKind, fields: [FrameField; 4]) -> Self {
        for field in fields {
            field.require_kind(frame);
        }
        let (t0, t1) = curve.domain();
        HyperDualCurve {
            inner: GammaInner::FrameLanes {
                curve,
                frame,
                fields,
            },
            t0,
            t1,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    /// The hyper-dual vector `Γ₂(t)`.
    pub fn eval(&self, t: f64) -> Result<HyperDualVec3, CurveError> {
        match &self.inner {
            GammaInner::Lanes(lanes) => Ok(HyperDualVec3::new(
                lanes[0].position(t)?,
                lanes[1].position(t)?,
                lanes[2].position(t)?,
                lanes[3].position(t)?,
            )),
            GammaInner::FrameLanes {
                curve,
                frame,
                fields,
            } => {
                let pairs = frame_pairs(curve.map.as_ref(), *frame, t)?;
                let pick = |f: FrameField| pairs[f.index_in(*frame)].0;
                Ok(HyperDualVec3::new(
                    pick(fields[0]),
                    pick(fields[1]),
                    pick(fields[2]),
                    pick(fields[3]),
                ))
            }
        }
    }

    /// Lane first derivatives `(a₀′, a₁′, a₂′, a₃′)` as a hyper-dual vector.
    pub fn derivative_lanes(&self, t: f64) -> Result<HyperDualVec3, CurveError> {
        match &self.inner {
            GammaInner::Lanes(lanes) => Ok(HyperDualVec3::new(
                lanes[0].jet(t)?.d1,
                lanes[1].jet(t)?.d1,
                lanes[2].jet(t)?.d1,
                lanes[3].jet(t)?.d1,
            )),
            GammaInner::FrameLanes {
                curve,
                frame,
                fields,
            } => {
                let pairs = frame_pairs(curve.map.as_ref(), *frame, t)?;
                let pick = |f: FrameField| pairs[f.index_in(*frame)].1;
                Ok(HyperDualVec3::new(
                    pick(fields[0]),
                    pick(fields[1]),
                    pick(fields[2]),
                    pick(fields[3]),
                ))
            }
        }
    }

    /// Lane curve views `(a₀, a₁, a₂, a₃)` with exact value and first
    /// derivative, for building ruled surfaces out of lane data.
    pub fn lane_curve(&self, lane: usize) -> Curve3 {
        assert!(lane < 4, "lane index out of range");
        let gamma = self.clone();
        Curve3::from_point_derivative_fn(
            move |t| {
                let v = gamma.eval(t)?;
                let d = gamma.derivative_lanes(t)?;
                let pick = |hv: &HyperDualVec3| match lane {
                    0 => hv.a0,
                    1 => hv.a1,
                    2 => hv.a2,
                    _ => hv.a3,
                };
                Ok((pick(&v), pick(&d)))
            },
            (self.t0, self.t1),
        )
    }
}

// ---------------------------------------------------------------------------
// Arc length
// ---------------------------------------------------------------------------

// 5-point Gauss–Legendre nodes and weights on [-1, 1].
const GL5_NODES: [f64; 5] = [
    -0.906179845938664,
    -0.5384693101056831,
    0.0,
    0.5384693101056831,
    0.906179845938664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.23692688505618908,
    0.47862867049936647,
    0.5688888888888889,
    0.47862867049936647,
    0.23692688505618908,
];

/// Hyper-dual arc length `t₂ = ∫₀ᵗ |Γ₂′(s)| ds`, by composite Gauss–Legendre
/// quadrature of the hyper-dual norm of the derivative lanes.
///
/// The components realize the lane decomposition: the real part integrates
/// `|a₀′|`, the ε part `(a₀′·a₁′)/|a₀′|`, the ε* and εε* parts the dual
/// remainder of `⟨𝔸′, 𝔸*′⟩/|𝔸′|`.
pub fn hd_arc_length(
    gamma: &HyperDualCurve,
    t: f64,
    panels: usize,
) -> Result<HyperDualScalar, CurveError> {
    assert!(panels >= 1, "quadrature needs at least one panel");
    if t == 0.0 {
        return Ok(HyperDualScalar::ZERO);
    }
    let (lo, hi, sign) = if t > 0.0 {
        (0.0, t, 1.0)
    } else {
        (t, 0.0, -1.0)
    };
    let width = (hi - lo) / panels as f64;
    let mut acc = HyperDualScalar::ZERO;
    for p in 0..panels {
        let a = lo + width * p as f64;
        let mid = a + 0.5 * width;
        let half = 0.5 * width;
        for (node, weight) in GL5_NODES.iter().zip(GL5_WEIGHTS.iter()) {
            let s = mid + half * node;
            let d = gamma.derivative_lanes(s)?;
            let speed0 = d.a0.norm();
            if speed0 <= DEGENERACY_TOL {
                return Err(CurveError::Degenerate {
                    what: "|a0'| vanishes on the integration interval",
                    t: s,
                    magnitude: speed0,
                });
            }
            let integrand = d.norm().map_err(|_| CurveError::Degenerate {
                what: "|a0'| vanishes on the integration interval",
                t: s,
                magnitude: speed0,
            })?;
            acc = acc + integrand * (weight * half);
        }
    }
    Ok(acc * sign)
}
