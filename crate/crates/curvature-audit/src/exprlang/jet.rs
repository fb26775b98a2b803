use super::{BinOp, EvalError, Expr, UnaryFn};

/// Second-order Taylor data of a scalar function of n variables:
/// value, gradient, and symmetric Hessian. The Hessian stores the full
/// matrix but only the upper triangle is computed; the lower triangle is
/// mirrored, so symmetry is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
}

impl Jet2 {
    pub fn constant(v: f64, n: usize) -> Jet2 {
        Jet2 {
            value: v,
            gradient: vec![0.0; n],
            hessian: vec![vec![0.0; n]; n],
        }
    }

    /// Jet of the coordinate function u_i seeded at `point[i]`.
    pub fn variable(i: usize, point: &[f64]) -> Jet2 {
        let n = point.len();
        let mut j = Jet2::constant(point[i], n);
        j.gradient[i] = 1.0;
        j
    }

    pub fn arity(&self) -> usize {
        self.gradient.len()
    }

    fn map_upper(&mut self, mut f: impl FnMut(usize, usize) -> f64) {
        let n = self.arity();
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                self.hessian[i][j] = v;
                self.hessian[j][i] = v;
            }
        }
    }

    fn add(&self, other: &Jet2) -> Jet2 {
        let mut out = self.clone();
        out.value += other.value;
        for (g, og) in out.gradient.iter_mut().zip(&other.gradient) {
            *g += og;
        }
        let h = other.hessian.clone();
        out.map_upper(|i, j| self.hessian[i][j] + h[i][j]);
        out
    }

    fn sub(&self, other: &Jet2) -> Jet2 {
        let mut out = self.clone();
        out.value -= other.value;
        for (g, og) in out.gradient.iter_mut().zip(&other.gradient) {
            *g -= og;
        }
        out.map_upper(|i, j| self.hessian[i][j] - other.hessian[i][j]);
        out
    }

    fn mul(&self, other: &Jet2) -> Jet2 {
        let n = self.arity();
        let mut out = Jet2::constant(self.value * other.value, n);
        for i in 0..n {
            out.gradient[i] = self.gradient[i] * other.value + self.value * other.gradient[i];
        }
        out.map_upper(|i, j| {
            self.hessian[i][j] * other.value
                + self.gradient[i] * other.gradient[j]
                + self.gradient[j] * other.gradient[i]
                + self.value * other.hessian[i][j]
        });
        out
    }

    fn div(&self, other: &Jet2) -> Result<Jet2, EvalError> {
        if other.value == 0.0 {
            return Err(EvalError::Domain {
                op: "/",
                message: "division by zero".into(),
            });
        }
        let n = self.arity();
        let q = self.value / other.value;
        let mut out = Jet2::constant(q, n);
        for i in 0..n {
            out.gradient[i] = (self.gradient[i] - q * other.gradient[i]) / other.value;
        }
        let grad = out.gradient.clone();
        out.map_upper(|i, j| {
            (self.hessian[i][j]
                - q * other.hessian[i][j]
                - grad[i] * other.gradient[j]
                - grad[j] * other.gradient[i])
                / other.value
        });
        Ok(out)
    }

    /// Chain rule for a scalar function with derivatives (f0, f1, f2) at
    /// `self.value`.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        let n = self.arity();
        let mut out = Jet2::constant(f0, n);
        for i in 0..n {
            out.gradient[i] = f1 * self.gradient[i];
        }
        out.map_upper(|i, j| {
            f1 * self.hessian[i][j] + f2 * self.gradient[i] * self.gradient[j]
        });
        out
    }

}

fn unary_jet(f: UnaryFn, x: &Jet2) -> Result<Jet2, EvalError> {
    let v = x.value;
    // Opaque copy used for derivative terms only. Without it LLVM fuses
    // the adjacent sin/cos calls into libm sincos, whose results can
    // differ from standalone sin/cos in the last ulp and break the
    // bit-for-bit agreement between eval_scalar and eval_jet values.
    let vd = std::hint::black_box(v);
    let (f0, f1, f2) = match f {
        UnaryFn::Neg => (-v, -1.0, 0.0),
        UnaryFn::Sin => (v.sin(), vd.cos(), -vd.sin()),
        UnaryFn::Cos => (v.cos(), -vd.sin(), -vd.cos()),
        UnaryFn::Tan => {
            let t = v.tan();
            let d = 1.0 + t * t;
            (t, d, 2.0 * t * d)
        }
        UnaryFn::Sinh => (v.sinh(), vd.cosh(), vd.sinh()),
        UnaryFn::Cosh => (v.cosh(), vd.sinh(), vd.cosh()),
        UnaryFn::Tanh => {
            let t = v.tanh();
            let d = 1.0 - t * t;
            (t, d, -2.0 * t * d)
        }
        UnaryFn::Exp => {
            let e = v.exp();
            (e, e, e)
        }
        UnaryFn::Ln => {
            if v <= 0.0 {
                return Err(EvalError::Domain {
                    op: "ln",
                    message: format!("ln of non-positive value {v}"),
                });
            }
            (v.ln(), 1.0 / v, -1.0 / (v * v))
        }
        UnaryFn::Sqrt => {
            if v <= 0.0 {
                return Err(EvalError::Domain {
                    op: "sqrt",
                    message: format!("sqrt derivative undefined at {v}"),
                });
            }
            let s = v.sqrt();
            (s, 0.5 / s, -0.25 / (s * v))
        }
        UnaryFn::Abs => {
            if v == 0.0 {
                return Err(EvalError::NonSmooth);
            }
            let sign = if v > 0.0 { 1.0 } else { -1.0 };
            (v.abs(), sign, 0.0)
        }
    };
    Ok(x.chain(f0, f1, f2))
}

fn unary_scalar(f: UnaryFn, v: f64) -> Result<f64, EvalError> {
    Ok(match f {
        UnaryFn::Neg => -v,
        UnaryFn::Sin => v.sin(),
        UnaryFn::Cos => v.cos(),
        UnaryFn::Tan => v.tan(),
        UnaryFn::Sinh => v.sinh(),
        UnaryFn::Cosh => v.cosh(),
        UnaryFn::Tanh => v.tanh(),
        UnaryFn::Exp => v.exp(),
        UnaryFn::Ln => {
            if v <= 0.0 {
                return Err(EvalError::Domain {
                    op: "ln",
                    message: format!("ln of non-positive value {v}"),
                });
            }
            v.ln()
        }
        UnaryFn::Sqrt => {
            if v < 0.0 {
                return Err(EvalError::Domain {
                    op: "sqrt",
                    message: format!("sqrt of negative value {v}"),
                });
            }
            v.sqrt()
        }
        UnaryFn::Abs => v.abs(),
    })
}

fn pow_domain_check(base: f64, p: f64) -> Result<(), EvalError> {
    if base == 0.0 && p < 0.0 {
        return Err(EvalError::Domain {
            op: "^",
            message: "0 raised to a negative power".into(),
        });
    }
    if base < 0.0 && p.fract() != 0.0 {
        return Err(EvalError::Domain {
            op: "^",
            message: format!("negative base {base} with non-integer exponent {p}"),
        });
    }
    Ok(())
}

fn pow_const_jet(base: &Jet2, p: f64) -> Result<Jet2, EvalError> {
    pow_domain_check(base.value, p)?;
    let v = base.value;
    let f0 = v.powf(p);
    // power rule; at v = 0 the derivative factors are only finite for
    // integer p >= 2 (or p in {0, 1}), everything else is a domain error
    let (f1, f2) = if v == 0.0 {
        if p == 0.0 || p == 1.0 || (p.fract() == 0.0 && p >= 2.0) {
            let f1 = if p == 1.0 {
                1.0
            } else if p == 0.0 {
                0.0
            } else {
                p * v.powf(p - 1.0)
            };
            let f2 = if p == 2.0 {
                2.0
            } else if p == 0.0 || p == 1.0 {
                0.0
            } else {
                p * (p - 1.0) * v.powf(p - 2.0)
            };
            (f1, f2)
        } else {
            return Err(EvalError::Domain {
                op: "^",
                message: format!("derivative of x^{p} undefined at 0"),
            });
        }
    } else {
        (p * v.powf(p - 1.0), p * (p - 1.0) * v.powf(p - 2.0))
    };
    Ok(base.chain(f0, f1, f2))
}

/// Evaluate with exact first and second derivatives.
pub fn eval_jet(expr: &Expr, point: &[f64]) -> Result<Jet2, EvalError> {
    let needed = expr.min_arity();
    if point.len() < needed {
        return Err(EvalError::Arity {
            needed,
            got: point.len(),
        });
    }
    eval_jet_inner(expr, point)
}

fn eval_jet_inner(expr: &Expr, point: &[f64]) -> Result<Jet2, EvalError> {
    let n = point.len();
    match expr {
        Expr::Const(v) => Ok(Jet2::constant(*v, n)),
        Expr::Var(i) => Ok(Jet2::variable(*i, point)),
        Expr::Unary(f, e) => {
            let x = eval_jet_inner(e, point)?;
            unary_jet(*f, &x)
        }
        Expr::Binary(op, a, b) => {
            let x = eval_jet_inner(a, point)?;
            let y = eval_jet_inner(b, point)?;
            match op {
                BinOp::Add => Ok(x.add(&y)),
                BinOp::Sub => Ok(x.sub(&y)),
                BinOp::Mul => Ok(x.mul(&y)),
                BinOp::Div => x.div(&y),
                BinOp::Pow => {
                    // same syntactic test as eval_scalar, so the two
                    // paths pick the same formula and stay bit-identical
                    if constant_exponent(b) {
                        pow_const_jet(&x, y.value)
                    } else {
                        // variable exponent: a^b = exp(b ln a), needs a > 0
                        if x.value <= 0.0 {
                            return Err(EvalError::Domain {
                                op: "^",
                                message: format!(
                                    "non-positive base {} with variable exponent",
                                    x.value
                                ),
                            });
                        }
                        let ln_a = unary_jet(UnaryFn::Ln, &x)?;
                        unary_jet(UnaryFn::Exp, &y.mul(&ln_a))
                    }
                }
            }
        }
    }
}

/// Value-only fast path. Agrees with `eval_jet(..).value` bit-for-bit:
/// both paths compute the value with the same operations in the same
/// order.
pub fn eval_scalar(expr: &Expr, point: &[f64]) -> Result<f64, EvalError> {
    let needed = expr.min_arity();
    if point.len() < needed {
        return Err(EvalError::Arity {
            needed,
            got: point.len(),
        });
    }
    eval_scalar_inner(expr, point)
}

fn eval_scalar_inner(expr: &Expr, point: &[f64]) -> Result<f64, EvalError> {
    match expr {
        Expr::Const(v) => Ok(*v),
        Expr::Var(i) => Ok(point[*i]),
        Expr::Unary(f, e) => unary_scalar(*f, eval_scalar_inner(e, point)?),
        Expr::Binary(op, a, b) => {
            let x = eval_scalar_inner(a, point)?;
            let y = eval_scalar_inner(b, point)?;
            match op {
                BinOp::Add => Ok(x + y),
                BinOp::Sub => Ok(x - y),
                BinOp::Mul => Ok(x * y),
                BinOp::Div => {
                    if y == 0.0 {
                        Err(EvalError::Domain {
                            op: "/",
                            message: "division by zero".into(),
                        })
                    } else {
                        Ok(x / y)
                    }
                }
                BinOp::Pow => {
                    pow_domain_check(x, y)?;
                    if constant_exponent(b) {
                        Ok(x.powf(y))
                    } else {
                        if x <= 0.0 {
                            return Err(EvalError::Domain {
                                op: "^",
                                message: format!(
                                    "non-positive base {x} with variable exponent"
                                ),
                            });
                        }
                        Ok((y * x.ln()).exp())
                    }
                }
            }
        }
    }
}

fn constant_exponent(e: &Expr) -> bool {
    e.min_arity() == 0
}
