//! A small expression language in one variable `t`, evaluated over any
//! scalar kind.
//!
//! Grammar (precedence low to high, `+ - * /` left-associative):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('-')? power
//! power  := atom ('^' number)?
//! atom   := number | 'pi' | 'e' | 't' | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | tan | exp | log | sqrt
//! ```
//!
//! Exponents are restricted to number literals, so `^` lifts cleanly through
//! dual and hyper-dual arithmetic. There is no implicit multiplication:
//! `2t` is a parse error, `2*t` is not.
//!
//! Evaluating a parsed tree over [`HyperDualScalar`](crate::scalar::HyperDualScalar)
//! at the seed `t + ε + ε*` returns the value and the first two derivatives
//! of the expression, exactly.

use std::fmt;

use crate::scalar::SmoothScalar;

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Expression node. Every node carries the byte offset of the token that
/// introduced it, for error reporting during evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Number(f64),
    Pi,
    Euler,
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// `base ^ literal-exponent`
    Pow(Box<Expr>, f64),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub offset: usize,
}

/// Parse failure with the byte offset where the grammar had no valid
/// continuation and a hint of what was expected there.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub message: String,
    pub offset: usize,
    pub expected: &'static str,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at offset {}: {} (expected {})",
            self.offset, self.message, self.expected
        )
    }
}

impl std::error::Error for ParseError {}

/// Evaluation failure: a domain violation at a specific source location.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub message: String,
    pub offset: usize,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "domain error at offset {}: {}",
            self.offset, self.message
        )
    }
}

impl std::error::Error for EvalError {}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::Eof, start));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'/' => {
                self.pos += 1;
                Tok::Slash
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos < self.src.len()
                    && self.src[self.pos] == b'.'
                    && self.pos + 1 < self.src.len()
                    && self.src[self.pos + 1].is_ascii_digit()
                {
                    self.pos += 1;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let value = text.parse::<f64>().map_err(|_| ParseError {
                    message: format!("malformed number '{text}'"),
                    offset: start,
                    expected: "number",
                })?;
                Tok::Number(value)
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Tok::Ident(
                    std::str::from_utf8(&self.src[start..self.pos])
                        .unwrap()
                        .to_string(),
                )
            }
            other => {
                return Err(ParseError {
                    message: format!("unexpected character '{}'", other as char),
                    offset: start,
                    expected: "number, identifier, operator or parenthesis",
                })
            }
        };
        Ok((tok, start))
    }
}

// ---------------------------------------------------------------------------
// Parser (recursive descent, one token lookahead)
// ---------------------------------------------------------------------------

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    tok_offset: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let (tok, tok_offset) = lexer.next()?;
        Ok(Parser {
            lexer,
            tok,
            tok_offset,
        })
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let (tok, off) = self.lexer.next()?;
        self.tok = tok;
        self.tok_offset = off;
        Ok(())
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError {
            message: format!("unexpected {}", self.tok.describe()),
            offset: self.tok_offset,
            expected,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            let offset = self.tok_offset;
            self.advance()?;
            let rhs = self.term()?;
            lhs = Expr {
                kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)),
                offset,
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            let offset = self.tok_offset;
            self.advance()?;
            let rhs = self.factor()?;
            lhs = Expr {
                kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)),
                offset,
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Minus {
            let offset = self.tok_offset;
            self.advance()?;
            let inner = self.power()?;
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                offset,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Caret {
            let offset = self.tok_offset;
            self.advance()?;
            match self.tok {
                Tok::Number(k) => {
                    self.advance()?;
                    return Ok(Expr {
                        kind: ExprKind::Pow(Box::new(base), k),
                        offset,
                    });
                }
                _ => return Err(self.unexpected("number literal exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.tok_offset;
        match self.tok.clone() {
            Tok::Number(n) => {
                self.advance()?;
                Ok(Expr {
                    kind: ExprKind::Number(n),
                    offset,
                })
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                if self.tok != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.advance()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.advance()?;
                match name.as_str() {
                    "t" => Ok(Expr {
                        kind: ExprKind::Var,
                        offset,
                    }),
                    "pi" => Ok(Expr {
                        kind: ExprKind::Pi,
                        offset,
                    }),
                    "e" => Ok(Expr {
                        kind: ExprKind::Euler,
                        offset,
                    }),
                    other => {
                        let func = Func::from_name(other).ok_or(ParseError {
                            message: format!("unknown identifier '{other}'"),
                            offset,
                            expected: "t, pi, e, or a function name",
                        })?;
                        if self.tok != Tok::LParen {
                            return Err(self.unexpected("'(' after function name"));
                        }
                        self.advance()?;
                        let arg = self.expr()?;
                        if self.tok != Tok::RParen {
                            return Err(self.unexpected("')'"));
                        }
                        self.advance()?;
                        Ok(Expr {
                            kind: ExprKind::Call(func, Box::new(arg)),
                            offset,
                        })
                    }
                }
            }
            _ => Err(self.unexpected("number, 't', 'pi', 'e', function call or '('")),
        }
    }
}

/// Parse `src` into an expression tree.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    if p.tok != Tok::Eof {
        return Err(p.unexpected("end of input or an operator"));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

impl Expr {
    /// Evaluate over any scalar kind. Domain conditions (`log`, `sqrt`,
    /// division, non-integer powers of negatives) are checked on the real
    /// part and reported with the offending node's source offset.
    pub fn eval<S: SmoothScalar>(&self, t: S) -> Result<S, EvalError> {
        match &self.kind {
            ExprKind::Number(n) => Ok(S::from_real(*n)),
            ExprKind::Pi => Ok(S::from_real(std::f64::consts::PI)),
            ExprKind::Euler => Ok(S::from_real(std::f64::consts::E)),
            ExprKind::Var => Ok(t),
            ExprKind::Neg(inner) => Ok(-inner.eval(t)?),
            ExprKind::Bin(op, lhs, rhs) => {
                let a = lhs.eval(t)?;
                let b = rhs.eval(t)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b.real_part() == 0.0 {
                            return Err(EvalError {
                                message: "division by zero".into(),
                                offset: self.offset,
                            });
                        }
                        Ok(a * b.recip())
                    }
                }
            }
            ExprKind::Pow(base, k) => {
                let b = base.eval(t)?;
                let w = b.real_part();
                if w < 0.0 && k.fract() != 0.0 {
                    return Err(EvalError {
                        message: format!("negative base {w} with non-integer exponent {k}"),
                        offset: self.offset,
                    });
                }
                if w == 0.0 && *k < 2.0 && *k != 0.0 && *k != 1.0 {
                    return Err(EvalError {
                        message: format!("power {k} not differentiable at zero base"),
                        offset: self.offset,
                    });
                }
                Ok(b.powf(*k))
            }
            ExprKind::Call(func, arg) => {
                let a = arg.eval(t)?;
                let w = a.real_part();
                match func {
                    Func::Sin => Ok(a.sin()),
                    Func::Cos => Ok(a.cos()),
                    Func::Tan => Ok(a.tan()),
                    Func::Exp => Ok(a.exp()),
                    Func::Log => {
                        if w <= 0.0 {
                            return Err(EvalError {
                                message: format!("log of non-positive value {w}"),
                                offset: self.offset,
                            });
                        }
                        Ok(a.ln())
                    }
                    Func::Sqrt => {
                        if w <= 0.0 {
                            return Err(EvalError {
                                message: format!("sqrt of non-positive value {w}"),
                                offset: self.offset,
                            });
                        }
                        Ok(a.sqrt())
                    }
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self.kind {
            ExprKind::Bin(BinOp::Add, ..) | ExprKind::Bin(BinOp::Sub, ..) => 1,
            ExprKind::Bin(BinOp::Mul, ..) | ExprKind::Bin(BinOp::Div, ..) => 2,
            // A negative literal prints with a leading '-', so it binds like
            // a negation: -2^2 must not reprint as the base of a power.
            ExprKind::Neg(_) => 3,
            ExprKind::Number(n) if n < 0.0 => 3,
            // Negative exponents print as a reciprocal, i.e. at '/' level.
            ExprKind::Pow(_, k) if k < 0.0 => 2,
            ExprKind::Pow(..) => 4,
            _ => 5,
        }
    }
}

/// Canonical printer: minimal parentheses, `parse(print(e))` reproduces the
/// tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "(")?;
                write!(f, "{e}")?;
                write!(f, ")")
            } else {
                write!(f, "{e}")
            }
        }
        match &self.kind {
            ExprKind::Number(n) => write!(f, "{n}"),
            ExprKind::Pi => write!(f, "pi"),
            ExprKind::Euler => write!(f, "e"),
            ExprKind::Var => write!(f, "t"),
            ExprKind::Neg(inner) => {
                write!(f, "-")?;
                // min_prec 4 parenthesizes nested negations, which the
                // grammar cannot express bare ('--x' does not parse).
                child(f, inner, 4)
            }
            ExprKind::Bin(op, lhs, rhs) => {
                let (sym, prec) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                };
                child(f, lhs, prec)?;
                write!(f, " {sym} ")?;
                // Left associativity: the right operand needs strictly higher
                // precedence to stay unparenthesized under - and /.
                child(f, rhs, prec + 1)
            }
            ExprKind::Pow(base, k) => {
                // The grammar only admits unsigned literal exponents; a
                // negative one (from programmatic tree construction) prints
                // as the equivalent reciprocal so the output stays parseable.
                if *k < 0.0 {
                    write!(f, "1/")?;
                    child(f, base, 5)?;
                    write!(f, "^{}", -k)
                } else {
                    child(f, base, 5)?;
                    write!(f, "^{k}")
                }
            }
            ExprKind::Call(func, arg) => write!(f, "{}({})", func.name(), arg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::HyperDualScalar;

    fn structure_eq(a: &Expr, b: &Expr) -> bool {
        // PartialEq on Expr compares offsets too; for round-trip checks only
        // the shape matters.
        match (&a.kind, &b.kind) {
            (ExprKind::Number(x), ExprKind::Number(y)) => x == y,
            (ExprKind::Pi, ExprKind::Pi) => true,
            (ExprKind::Euler, ExprKind::Euler) => true,
            (ExprKind::Var, ExprKind::Var) => true,
            (ExprKind::Neg(x), ExprKind::Neg(y)) => structure_eq(x, y),
            (ExprKind::Bin(o1, a1, b1), ExprKind::Bin(o2, a2, b2)) => {
                o1 == o2 && structure_eq(a1, a2) && structure_eq(b1, b2)
            }
            (ExprKind::Pow(b1, k1), ExprKind::Pow(b2, k2)) => k1 == k2 && structure_eq(b1, b2),
            (ExprKind::Call(f1, a1), ExprKind::Call(f2, a2)) => f1 == f2 && structure_eq(a1, a2),
            _ => false,
        }
    }

    #[test]
    fn parses_valid_input() {
        assert!(parse("sin(t)*2 + 1").is_ok());
        assert!(parse("t^2").is_ok());
        assert!(parse("  cos( t ) / ( 1 + t^2 )  ").is_ok());
        assert!(parse("-t + pi*e").is_ok());
    }

    #[test]
    fn unterminated_call_offset() {
        let err = parse("sin(").unwrap_err();
        assert_eq!(err.offset, 4);
    }

    #[test]
    fn power_node_shape() {
        let e = parse("t^2").unwrap();
        match &e.kind {
            ExprKind::Pow(base, k) => {
                assert!(matches!(base.kind, ExprKind::Var));
                assert_eq!(*k, 2.0);
            }
            other => panic!("expected Pow, got {other:?}"),
        }
    }

    #[test]
    fn no_implicit_multiplication() {
        assert!(parse("2t").is_err());
        assert!(parse("2 t").is_err());
    }

    #[test]
    fn rejects_non_literal_exponent() {
        assert!(parse("t^t").is_err());
        assert!(parse("t^(2)").is_err());
    }

    #[test]
    fn error_offsets_point_at_dead_ends() {
        assert_eq!(parse("1 +").unwrap_err().offset, 3);
        assert_eq!(parse("(1").unwrap_err().offset, 2);
        assert_eq!(parse("1 2").unwrap_err().offset, 2);
        assert_eq!(parse("foo(1)").unwrap_err().offset, 0);
        assert_eq!(parse("").unwrap_err().offset, 0);
    }

    #[test]
    fn left_associativity() {
        // 8 - 3 - 2 = 3, 8 / 2 / 2 = 2
        let e = parse("8 - 3 - 2").unwrap();
        assert_eq!(e.eval(0.0_f64).unwrap(), 3.0);
        let e = parse("8 / 2 / 2").unwrap();
        assert_eq!(e.eval(0.0_f64).unwrap(), 2.0);
    }

    #[test]
    fn eval_real_and_hyperdual() {
        let e = parse("sin(t)").unwrap();
        assert_eq!(e.eval(0.0_f64).unwrap(), 0.0);

        // t^2 at the second-derivative seed over t = 3.
        let e = parse("t^2").unwrap();
        let y = e.eval(HyperDualScalar::var(3.0)).unwrap();
        assert!(y.max_abs_diff(&HyperDualScalar::new(9.0, 6.0, 6.0, 2.0)) < 1e-12);
    }

    #[test]
    fn division_by_zero_at_offset() {
        let e = parse("1/t").unwrap();
        let err = e.eval(HyperDualScalar::var(0.0)).unwrap_err();
        assert_eq!(err.offset, 1);
    }

    #[test]
    fn domain_errors() {
        assert!(parse("log(t)").unwrap().eval(0.0_f64).is_err());
        assert!(parse("log(t)").unwrap().eval(-1.0_f64).is_err());
        assert!(parse("sqrt(t)").unwrap().eval(-1.0_f64).is_err());
        assert!(parse("sqrt(t)").unwrap().eval(2.0_f64).is_ok());
    }

    #[test]
    fn negative_literal_never_prints_as_power_base() {
        // Pow(Number(-2), 2) is (-2)² = 4; the bare text -2^2 would reparse
        // as -(2²) = -4.
        let e = Expr {
            kind: ExprKind::Pow(
                Box::new(Expr {
                    kind: ExprKind::Number(-2.0),
                    offset: 0,
                }),
                2.0,
            ),
            offset: 0,
        };
        let printed = e.to_string();
        let reparsed = parse(&printed).unwrap();
        assert_eq!(reparsed.eval(0.0_f64).unwrap(), 4.0);
    }

    #[test]
    fn negative_exponent_prints_parseably() {
        let e = Expr {
            kind: ExprKind::Pow(
                Box::new(Expr {
                    kind: ExprKind::Var,
                    offset: 0,
                }),
                -2.0,
            ),
            offset: 0,
        };
        let printed = e.to_string();
        let reparsed = parse(&printed).unwrap();
        assert_eq!(reparsed.eval(2.0_f64).unwrap(), 0.25);
    }

    #[test]
    fn print_parse_round_trip() {
        for src in [
            "sin(t)*2 + 1",
            "t^2 - 3*t + 4",
            "-(t + 1)/(t - 2)",
            "cos(t)^2 + sin(t)^2",
            "exp(-t)*log(t + 3)",
            "1 - 2 - 3",
            "8/2/2",
            "-t^2",
            "t - (1 - t)",
            "t/(2*pi)",
        ] {
            let e1 = parse(src).unwrap();
            let printed = e1.to_string();
            let e2 = parse(&printed).unwrap_or_else(|err| {
                panic!("printer emitted unparseable '{printed}' from '{src}': {err}")
            });
            assert!(
                structure_eq(&e1, &e2),
                "round trip changed '{src}' -> '{printed}'"
            );
            // Idempotence: printing again is stable.
            assert_eq!(printed, e2.to_string());
        }
    }

    #[test]
    fn numeric_agreement_real_vs_hyperdual_value() {
        for src in [
            "t^3 - t",
            "sin(2*t)*cos(t)",
            "exp(t/4)",
            "(t + 1)^2/(t + 2)",
        ] {
            let e = parse(src).unwrap();
            for i in 0..10 {
                let t = -1.0 + 0.37 * i as f64;
                let real = e.eval(t).unwrap();
                let hd = e.eval(HyperDualScalar::var(t)).unwrap();
                assert!((real - hd.w).abs() < 1e-12, "{src} at {t}");
            }
        }
    }
}
