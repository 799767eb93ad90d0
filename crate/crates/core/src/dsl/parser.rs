//! Recursive descent over the token stream.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ['-'] power)?      exponent: constant integer in [-8, 8]
//! primary := number | ident | call | '(' expr ')'
//! call    := func '(' expr {',' expr} ')' | 'if' '(' expr cmp expr ',' expr ',' expr ')'
//! ```

use super::ast::{BinOp, CmpOp, Cond, Expr, Func};
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;

pub const MAX_EXPONENT: i32 = 8;

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(p.error("operator or end of input")),
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].offset
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::new(self.offset(), expected)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let exp = self.power()?;
        let value = constant(&exp).map(|v| if negative { -v } else { v });
        match value {
            Some(v) if v.fract() == 0.0 && v.abs() <= MAX_EXPONENT as f64 => {
                Ok(Expr::Pow(Box::new(base), v as i32))
            }
            _ => Err(ParseError::new(at, "constant integer exponent in [-8, 8]")),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                let is_call = *self.peek() == Tok::LParen;
                if name == "if" {
                    if !is_call {
                        return Err(self.error("'('"));
                    }
                    return self.if_call();
                }
                match Func::from_name(&name) {
                    Some(func) if is_call => self.call(func),
                    Some(_) => Err(self.error("'('")),
                    None if is_call => Err(ParseError::new(at, "known function")),
                    None => Ok(Expr::Var(name)),
                }
            }
            _ => Err(self.error("expression")),
        }
    }

    fn call(&mut self, func: Func) -> Result<Expr, ParseError> {
        self.bump();
        let mut args = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            if args.len() == func.arity() {
                return Err(self.error("')'"));
            }
            self.bump();
            args.push(self.expr()?);
        }
        if args.len() != func.arity() {
            let what = if func.arity() == 1 {
                "argument"
            } else {
                "arguments"
            };
            return Err(self.error(&format!("',' ({} {what})", func.arity())));
        }
        self.expect(Tok::RParen, "')'")?;
        Ok(Expr::Call(func, args))
    }

    fn if_call(&mut self) -> Result<Expr, ParseError> {
        self.bump();
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            Tok::EqEq => CmpOp::Eq,
            _ => return Err(self.error("comparison operator")),
        };
        self.bump();
        let rhs = self.expr()?;
        self.expect(Tok::Comma, "','")?;
        let a = self.expr()?;
        self.expect(Tok::Comma, "','")?;
        let b = self.expr()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(Expr::If(
            Box::new(Cond { op, lhs, rhs }),
            Box::new(a),
            Box::new(b),
        ))
    }
}

fn constant(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(v) => Some(*v),
        Expr::Neg(inner) => constant(inner).map(|v| -v),
        Expr::Pow(inner, n) => constant(inner).map(|v| v.powi(*n)),
        _ => None,
    }
}
