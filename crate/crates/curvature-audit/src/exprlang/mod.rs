//! Chart-definition expression language: lexer, recursive-descent parser,
//! and evaluation with exact first and second derivatives via 2-jets.
//!
//! Grammar (EBNF):
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = atom [ "^" unary ] ;            (* right-associative *)
//! atom    = number | func "(" expr ")" | variable | "(" expr ")" ;
//! func    = "sin" | "cos" | "tan" | "sinh" | "cosh" | "tanh"
//!         | "exp" | "ln" | "sqrt" | "abs" ;
//! ```
//! Numbers accept decimal and scientific notation. `^` binds tighter than
//! unary minus, so `-u^2` parses as `-(u^2)`.

mod jet;
mod lexer;
mod parser;

pub use jet::{eval_jet, eval_scalar, Jet2};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Neg,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl UnaryFn {
    pub fn name(self) -> &'static str {
        match self {
            UnaryFn::Neg => "-",
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Tan => "tan",
            UnaryFn::Sinh => "sinh",
            UnaryFn::Cosh => "cosh",
            UnaryFn::Tanh => "tanh",
            UnaryFn::Exp => "exp",
            UnaryFn::Ln => "ln",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<UnaryFn> {
        Some(match name {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "tan" => UnaryFn::Tan,
            "sinh" => UnaryFn::Sinh,
            "cosh" => UnaryFn::Cosh,
            "tanh" => UnaryFn::Tanh,
            "exp" => UnaryFn::Exp,
            "ln" => UnaryFn::Ln,
            "sqrt" => UnaryFn::Sqrt,
            "abs" => UnaryFn::Abs,
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
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

/// Abstract syntax tree of a chart-component expression over variables
/// indexed `0..arity`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Unary(UnaryFn, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn unary(f: UnaryFn, e: Expr) -> Expr {
        Expr::Unary(f, Box::new(e))
    }

    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    /// Fully parenthesized rendering; reparses to a structurally
    /// identical tree.
    pub fn pretty(&self, variables: &[String]) -> String {
        match self {
            Expr::Const(v) => {
                if *v < 0.0 || v.is_sign_negative() {
                    format!("({})", fmt_const(*v))
                } else {
                    fmt_const(*v)
                }
            }
            Expr::Var(i) => variables[*i].clone(),
            Expr::Unary(UnaryFn::Neg, e) => format!("(-{})", e.pretty(variables)),
            Expr::Unary(f, e) => format!("{}({})", f.name(), e.pretty(variables)),
            Expr::Binary(op, a, b) => format!(
                "({}{}{})",
                a.pretty(variables),
                op.symbol(),
                b.pretty(variables)
            ),
        }
    }

    /// Largest variable index plus one, i.e. the minimum arity this
    /// expression needs.
    pub fn min_arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Unary(_, e) => e.min_arity(),
            Expr::Binary(_, a, b) => a.min_arity().max(b.min_arity()),
        }
    }
}

fn fmt_const(v: f64) -> String {
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ExprError {
    #[error("lexical error at byte {offset}: unexpected character {ch:?}")]
    Lexical { offset: usize, ch: char },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown identifier {name:?} at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("domain error in {op}: {message}")]
    Domain { op: &'static str, message: String },
    #[error("abs is not differentiable at 0")]
    NonSmooth,
    #[error("point has {got} coordinates, expression needs {needed}")]
    Arity { needed: usize, got: usize },
}
