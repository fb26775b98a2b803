use super::lexer::{tokenize, Token, TokenKind};
use super::{BinOp, Expr, ExprError, UnaryFn};

/// Parse `source` over the given ordered variable names.
pub fn parse(source: &str, variables: &[&str]) -> Result<Expr, ExprError> {
    let tokens = tokenize(source)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        variables,
        source_len: source.len(),
    };
    let expr = p.expr()?;
    if let Some(tok) = p.peek() {
        return Err(ExprError::Parse {
            offset: tok.position,
            message: format!("unexpected token {:?}", tok.lexeme),
        });
    }
    Ok(expr)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    variables: &'a [&'a str],
    source_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.position).unwrap_or(self.source_len)
    }

    fn eat_operator(&mut self, symbols: &[&str]) -> Option<String> {
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Operator && symbols.contains(&t.lexeme.as_str()) {
                let lex = t.lexeme.clone();
                self.pos += 1;
                return Some(lex);
            }
        }
        None
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        match self.next() {
            Some(t) if t.kind == TokenKind::RightParen => Ok(()),
            Some(t) => Err(ExprError::Parse {
                offset: t.position,
                message: format!("expected ')', found {:?}", t.lexeme),
            }),
            None => Err(ExprError::Parse {
                offset: self.source_len,
                message: "expected ')', found end of input".into(),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(op) = self.eat_operator(&["+", "-"]) {
            let rhs = self.term()?;
            let op = if op == "+" { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.eat_operator(&["*", "/"]) {
            let rhs = self.unary()?;
            let op = if op == "*" { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat_operator(&["-"]).is_some() {
            let inner = self.unary()?;
            // fold literal negation so pretty-printed constants round-trip
            if let Expr::Const(v) = inner {
                return Ok(Expr::Const(-v));
            }
            return Ok(Expr::unary(UnaryFn::Neg, inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat_operator(&["^"]).is_some() {
            // right-associative; exponent may carry a unary minus
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let tok = match self.next() {
            Some(t) => t,
            None => {
                return Err(ExprError::Parse {
                    offset: self.source_len,
                    message: "unexpected end of input".into(),
                })
            }
        };
        match tok.kind {
            TokenKind::Number => {
                let v: f64 = tok.lexeme.parse().map_err(|_| ExprError::Parse {
                    offset: tok.position,
                    message: format!("invalid number literal {:?}", tok.lexeme),
                })?;
                Ok(Expr::Const(v))
            }
            TokenKind::LeftParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::Identifier => {
                if let Some(f) = UnaryFn::from_name(&tok.lexeme) {
                    match self.next() {
                        Some(t) if t.kind == TokenKind::LeftParen => {}
                        _ => {
                            return Err(ExprError::Parse {
                                offset: self.here().min(tok.position + tok.lexeme.len()),
                                message: format!(
                                    "function {:?} requires parenthesized argument",
                                    tok.lexeme
                                ),
                            })
                        }
                    }
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::unary(f, arg));
                }
                if let Some(idx) = self.variables.iter().position(|v| *v == tok.lexeme) {
                    return Ok(Expr::Var(idx));
                }
                Err(ExprError::UnknownIdentifier {
                    offset: tok.position,
                    name: tok.lexeme,
                })
            }
            _ => Err(ExprError::Parse {
                offset: tok.position,
                message: format!("unexpected token {:?}", tok.lexeme),
            }),
        }
    }
}
