//! Shared test support: a deterministic PRNG, a symbolic-differentiation
//! oracle for expression trees, random on-sphere constructions, and a
//! bounded random expression generator.
//!
//! Everything here is independent of the library's derivative machinery so
//! it can serve as an oracle for it.

use hdgeom::expr::{BinOp, Expr, ExprKind, Func};
use hdgeom::vector::{HyperDualVec3, Vec3};

/// SplitMix64: tiny, deterministic, seedable.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.f64()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn vec3(&mut self, half_width: f64) -> Vec3 {
        Vec3::new(
            self.range(-half_width, half_width),
            self.range(-half_width, half_width),
            self.range(-half_width, half_width),
        )
    }

    /// Uniform-ish unit vector by rejection from the cube.
    pub fn unit_vec3(&mut self) -> Vec3 {
        loop {
            let v = self.vec3(1.0);
            let n = v.norm();
            if n > 0.2 && n < 1.0 {
                return v.scale(1.0 / n);
            }
        }
    }
}

/// A random point of the unit hyper-dual sphere, built by Gram–Schmidt:
/// unit `a₀`, arbitrary `a₁ ⟂ a₀`, unit `a₂ ⟂ a₀`, and
/// `a₃ = −(a₁·a₂)a₀ + γ(a₀×a₂)` which satisfies `a₀·a₃ = −a₁·a₂` and
/// `a₂·a₃ = 0` identically.
pub fn random_unit_sphere_point(rng: &mut Rng) -> HyperDualVec3 {
    let a0 = rng.unit_vec3();
    let raw = rng.vec3(2.0);
    let a1 = raw - a0.scale(a0.dot(raw));
    let a2 = loop {
        let r = rng.unit_vec3();
        let p = r - a0.scale(a0.dot(r));
        let n = p.norm();
        if n > 0.2 {
            break p.scale(1.0 / n);
        }
    };
    let gamma = rng.range(-2.0, 2.0);
    let a3 = a0.scale(-a1.dot(a2)) + a0.cross(a2).scale(gamma);
    HyperDualVec3::new(a0, a1, a2, a3)
}

// ---------------------------------------------------------------------------
// Symbolic differentiation oracle
// ---------------------------------------------------------------------------

fn node(kind: ExprKind) -> Expr {
    Expr { kind, offset: 0 }
}

fn num(x: f64) -> Expr {
    node(ExprKind::Number(x))
}

fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
    node(ExprKind::Bin(op, Box::new(a), Box::new(b)))
}

fn call(f: Func, a: Expr) -> Expr {
    node(ExprKind::Call(f, Box::new(a)))
}

/// d/dt of an expression tree, by the textbook rules. Entirely separate
/// from the dual-number evaluation path it is used to check.
pub fn differentiate(e: &Expr) -> Expr {
    match &e.kind {
        ExprKind::Number(_) | ExprKind::Pi | ExprKind::Euler => num(0.0),
        ExprKind::Var => num(1.0),
        ExprKind::Neg(inner) => node(ExprKind::Neg(Box::new(differentiate(inner)))),
        ExprKind::Bin(op, a, b) => {
            let da = differentiate(a);
            let db = differentiate(b);
            match op {
                BinOp::Add => bin(BinOp::Add, da, db),
                BinOp::Sub => bin(BinOp::Sub, da, db),
                BinOp::Mul => bin(
                    BinOp::Add,
                    bin(BinOp::Mul, da, (**b).clone()),
                    bin(BinOp::Mul, (**a).clone(), db),
                ),
                BinOp::Div => {
                    // (a/b)' = (a'b - ab') / b^2
                    let numerator = bin(
                        BinOp::Sub,
                        bin(BinOp::Mul, da, (**b).clone()),
                        bin(BinOp::Mul, (**a).clone(), db),
                    );
                    let denominator = node(ExprKind::Pow(Box::new((**b).clone()), 2.0));
                    bin(BinOp::Div, numerator, denominator)
                }
            }
        }
        ExprKind::Pow(base, k) => {
            // (b^k)' = k b^(k-1) b'
            let db = differentiate(base);
            bin(
                BinOp::Mul,
                bin(
                    BinOp::Mul,
                    num(*k),
                    node(ExprKind::Pow(Box::new((**base).clone()), k - 1.0)),
                ),
                db,
            )
        }
        ExprKind::Call(f, a) => {
            let da = differentiate(a);
            let outer = match f {
                Func::Sin => call(Func::Cos, (**a).clone()),
                Func::Cos => node(ExprKind::Neg(Box::new(call(Func::Sin, (**a).clone())))),
                // tan' = 1 + tan^2
                Func::Tan => bin(
                    BinOp::Add,
                    num(1.0),
                    node(ExprKind::Pow(Box::new(call(Func::Tan, (**a).clone())), 2.0)),
                ),
                Func::Exp => call(Func::Exp, (**a).clone()),
                // log' = 1/arg
                Func::Log => bin(BinOp::Div, num(1.0), (**a).clone()),
                // sqrt' = 1/(2 sqrt(arg))
                Func::Sqrt => bin(
                    BinOp::Div,
                    num(1.0),
                    bin(BinOp::Mul, num(2.0), call(Func::Sqrt, (**a).clone())),
                ),
            };
            bin(BinOp::Mul, outer, da)
        }
    }
}

// ---------------------------------------------------------------------------
// Bounded random expressions
// ---------------------------------------------------------------------------

/// Random expression of depth ≤ `depth`, from a grammar whose values stay
/// O(10) on `t ∈ [-1.5, 1.5]` and whose partial functions only ever see
/// in-domain arguments (`log`/`sqrt` wrap `x²+2`, `exp`/`tan` wrap a sine).
pub fn random_expr(rng: &mut Rng, depth: usize) -> Expr {
    if depth == 0 {
        return if rng.f64() < 0.5 {
            node(ExprKind::Var)
        } else {
            num((rng.range(-1.0, 1.0) * 8.0).round() / 8.0)
        };
    }
    match rng.below(9) {
        0 => bin(
            BinOp::Add,
            random_expr(rng, depth - 1),
            random_expr(rng, depth - 1),
        ),
        1 => bin(
            BinOp::Sub,
            random_expr(rng, depth - 1),
            random_expr(rng, depth - 1),
        ),
        2 => bin(
            BinOp::Mul,
            random_expr(rng, depth - 1),
            random_expr(rng, depth - 1),
        ),
        3 => call(Func::Sin, random_expr(rng, depth - 1)),
        4 => call(Func::Cos, random_expr(rng, depth - 1)),
        // exp(0.4 sin(x)) keeps the argument in [-0.4, 0.4]
        5 => call(
            Func::Exp,
            bin(
                BinOp::Mul,
                num(0.4),
                call(Func::Sin, random_expr(rng, depth - 1)),
            ),
        ),
        // log(x^2 + 2) and sqrt(x^2 + 1) are total
        6 => call(
            Func::Log,
            bin(
                BinOp::Add,
                node(ExprKind::Pow(Box::new(random_expr(rng, depth - 1)), 2.0)),
                num(2.0),
            ),
        ),
        7 => bin(
            BinOp::Div,
            random_expr(rng, depth - 1),
            bin(
                BinOp::Add,
                node(ExprKind::Pow(Box::new(random_expr(rng, depth - 1)), 2.0)),
                num(1.0),
            ),
        ),
        _ => node(ExprKind::Pow(
            Box::new(bin(
                BinOp::Add,
                call(Func::Cos, random_expr(rng, depth - 1)),
                num(2.0),
            )),
            match rng.below(3) {
                0 => 2.0,
                1 => 3.0,
                _ => 0.5,
            },
        )),
    }
}

/// `|a - b| ≤ tol·max(1, |a|, |b|)`
pub fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
