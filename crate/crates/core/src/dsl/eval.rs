use std::collections::{BTreeMap, HashMap};

use super::ast::{BinOp, Expr, Func};
use super::{EvalError, EvalErrorKind};

/// Variable lookup for [`eval`].
pub trait Bindings {
    fn lookup(&self, name: &str) -> Option<f64>;
}

impl Bindings for HashMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Bindings for BTreeMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Bindings for [(&str, f64)] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

impl<const N: usize> Bindings for [(&str, f64); N] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.as_slice().lookup(name)
    }
}

/// Local variables first, then a constants table.
pub struct Scope<'a, L: Bindings + ?Sized> {
    pub locals: &'a L,
    pub constants: &'a BTreeMap<String, f64>,
}

impl<L: Bindings + ?Sized> Bindings for Scope<'_, L> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.locals
            .lookup(name)
            .or_else(|| self.constants.get(name).copied())
    }
}

fn fail(kind: EvalErrorKind, detail: impl Into<String>) -> EvalError {
    EvalError {
        kind,
        detail: detail.into(),
    }
}

pub fn eval(e: &Expr, env: &(impl Bindings + ?Sized)) -> Result<f64, EvalError> {
    Ok(match e {
        Expr::Num(v) => *v,
        Expr::Var(name) => env
            .lookup(name)
            .ok_or_else(|| fail(EvalErrorKind::UnboundVariable, name.clone()))?,
        Expr::Neg(inner) => -eval(inner, env)?,
        Expr::Bin(op, a, b) => {
            let (a, b) = (eval(a, env)?, eval(b, env)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(fail(EvalErrorKind::DivisionByZero, format!("{a} / 0")));
                    }
                    a / b
                }
            }
        }
        Expr::Pow(base, n) => {
            let b = eval(base, env)?;
            if b == 0.0 && *n < 0 {
                return Err(fail(EvalErrorKind::DivisionByZero, format!("0^{n}")));
            }
            b.powi(*n)
        }
        Expr::Call(func, args) => {
            let a = eval(&args[0], env)?;
            match func {
                Func::Abs => a.abs(),
                Func::Min => a.min(eval(&args[1], env)?),
                Func::Max => a.max(eval(&args[1], env)?),
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(fail(EvalErrorKind::SqrtNegative, format!("sqrt({a})")));
                    }
                    a.sqrt()
                }
                Func::Exp => a.exp(),
                Func::Log => {
                    if a <= 0.0 {
                        return Err(fail(EvalErrorKind::LogNonpositive, format!("log({a})")));
                    }
                    a.ln()
                }
                Func::Sign => {
                    if a > 0.0 {
                        1.0
                    } else if a < 0.0 {
                        -1.0
                    } else {
                        0.0
                    }
                }
            }
        }
        Expr::If(cond, then, other) => {
            let (l, r) = (eval(&cond.lhs, env)?, eval(&cond.rhs, env)?);
            if cond.op.holds(l, r) {
                eval(then, env)?
            } else {
                eval(other, env)?
            }
        }
    })
}
