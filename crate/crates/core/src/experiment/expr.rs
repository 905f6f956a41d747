//! Check expressions: exact rational arithmetic, comparisons and boolean
//! connectives over named row values.
//!
//! ```text
//! expr  := and ("||" and)*
//! and   := cmp ("&&" cmp)*
//! cmp   := sum (("==" | "!=" | "<=" | ">=" | "<" | ">") sum)?
//! sum   := prod (("+" | "-") prod)*
//! prod  := unary (("*" | "/") unary)*
//! unary := ("-" | "!") unary | atom
//! atom  := number | "true" | "false" | ident | ident "(" expr ("," expr)* ")" | "(" expr ")"
//! ```
//!
//! Functions: `floor`, `ceil`, `abs`, `min`, `max`, `binom`, and the
//! floating-point `pow` and `sqrt`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::Q;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(Q),
    Float(f64),
    Bool(bool),
}

impl Value {
    pub fn int(v: i64) -> Self {
        Value::Num(Q::from_integer(v.into()))
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(q) => q
                .numer()
                .to_f64()
                .zip(q.denom().to_f64())
                .map(|(a, b)| a / b),
            Value::Float(f) => Some(*f),
            Value::Bool(_) => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Bool(b) => (*b).into(),
            Value::Float(f) => {
                serde_json::Number::from_f64(*f).map_or(serde_json::Value::Null, Into::into)
            }
            Value::Num(q) if q.is_integer() => match q.numer().to_i64() {
                Some(i) => i.into(),
                None => q.numer().to_string().into(),
            },
            Value::Num(q) => format!("{}/{}", q.numer(), q.denom()).into(),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::Bool(b) => Some(Value::Bool(*b)),
            serde_json::Value::Number(n) => match n.as_i64() {
                Some(i) => Some(Value::int(i)),
                None => n.as_f64().map(Value::Float),
            },
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Value::Num(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Value::Float(x) => write!(f, "{x}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Lit(Value),
    Var(String),
    Call(String, Vec<Expr>),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Sym(&'static str),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    const SYMS: [&str; 16] = [
        "==", "!=", "<=", ">=", "&&", "||", "<", ">", "+", "-", "*", "/", "(", ")", ",", "!",
    ];
    let b = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            out.push(Tok::Num(parse_decimal(&src[start..i])?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(src[start..i].to_string()));
        } else if let Some(s) = SYMS.iter().find(|s| src[i..].starts_with(**s)) {
            out.push(Tok::Sym(s));
            i += s.len();
        } else {
            return Err(Error::invalid(format!(
                "unexpected '{c}' in expression {src:?}"
            )));
        }
    }
    Ok(out)
}

fn parse_decimal(s: &str) -> Result<Q> {
    let bad = || Error::invalid(format!("bad number {s:?}"));
    match s.split_once('.') {
        None => Ok(Q::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((whole, frac)) => {
            let digits: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            Ok(Q::new(digits, scale))
        }
    }
}

struct Parser {
    toks: Vec<Tok>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "expected '{sym}' at token {}",
                self.at
            )))
        }
    }

    fn or(&mut self) -> Result<Expr> {
        let mut lhs = self.and()?;
        while self.eat("||") {
            lhs = Expr::Bin(Op::Or, Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut lhs = self.cmp()?;
        while self.eat("&&") {
            lhs = Expr::Bin(Op::And, Box::new(lhs), Box::new(self.cmp()?));
        }
        Ok(lhs)
    }

    fn cmp(&mut self) -> Result<Expr> {
        let lhs = self.sum()?;
        for (s, op) in [
            ("==", Op::Eq),
            ("!=", Op::Ne),
            ("<=", Op::Le),
            (">=", Op::Ge),
            ("<", Op::Lt),
            (">", Op::Gt),
        ] {
            if self.eat(s) {
                return Ok(Expr::Bin(op, Box::new(lhs), Box::new(self.sum()?)));
            }
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.prod()?;
        loop {
            let op = if self.eat("+") {
                Op::Add
            } else if self.eat("-") {
                Op::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.prod()?));
        }
    }

    fn prod(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat("*") {
                Op::Mul
            } else if self.eat("/") {
                Op::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat("!") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.at += 1;
                Ok(Expr::Lit(Value::Num(q)))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "true" => return Ok(Expr::Lit(Value::Bool(true))),
                    "false" => return Ok(Expr::Lit(Value::Bool(false))),
                    _ => {}
                }
                if self.eat("(") {
                    let mut args = vec![self.or()?];
                    while self.eat(",") {
                        args.push(self.or()?);
                    }
                    self.expect(")")?;
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::Sym("(")) => {
                self.at += 1;
                let e = self.or()?;
                self.expect(")")?;
                Ok(e)
            }
            other => Err(Error::invalid(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let e = p.or()?;
    if p.at != p.toks.len() {
        return Err(Error::invalid(format!(
            "trailing input in expression {src:?}"
        )));
    }
    Ok(e)
}

impl Expr {
    /// Names read by the expression, in first-use order.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<String>) {
        match self {
            Expr::Lit(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.collect(out)),
            Expr::Neg(e) | Expr::Not(e) => e.collect(out),
            Expr::Bin(_, a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    pub fn eval(&self, lookup: &mut dyn FnMut(&str) -> Result<Value>) -> Result<Value> {
        match self {
            Expr::Lit(v) => Ok(v.clone()),
            Expr::Var(name) => lookup(name),
            Expr::Neg(e) => match e.eval(lookup)? {
                Value::Num(q) => Ok(Value::Num(-q)),
                Value::Float(f) => Ok(Value::Float(-f)),
                Value::Bool(_) => Err(type_error("-", "a boolean")),
            },
            Expr::Not(e) => Ok(Value::Bool(!truth(&e.eval(lookup)?)?)),
            Expr::Bin(Op::And, a, b) => Ok(Value::Bool(
                truth(&a.eval(lookup)?)? && truth(&b.eval(lookup)?)?,
            )),
            Expr::Bin(Op::Or, a, b) => Ok(Value::Bool(
                truth(&a.eval(lookup)?)? || truth(&b.eval(lookup)?)?,
            )),
            Expr::Bin(op, a, b) => binary(*op, a.eval(lookup)?, b.eval(lookup)?),
            Expr::Call(f, args) => {
                let vals = args
                    .iter()
                    .map(|a| a.eval(lookup))
                    .collect::<Result<Vec<_>>>()?;
                call(f, &vals)
            }
        }
    }
}

fn type_error(op: &str, what: &str) -> Error {
    Error::invalid(format!("operator {op} applied to {what}"))
}

pub fn truth(v: &Value) -> Result<bool> {
    match v {
        Value::Bool(b) => Ok(*b),
        other => Err(Error::invalid(format!("expected a boolean, got {other}"))),
    }
}

fn num(v: &Value) -> Result<Q> {
    match v {
        Value::Num(q) => Ok(q.clone()),
        other => Err(Error::invalid(format!(
            "expected an exact number, got {other}"
        ))),
    }
}

fn float(v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::invalid(format!("expected a number, got {v}")))
}

pub(crate) fn binary(op: Op, a: Value, b: Value) -> Result<Value> {
    if let (Value::Bool(x), Value::Bool(y)) = (&a, &b) {
        return match op {
            Op::Eq => Ok(Value::Bool(x == y)),
            Op::Ne => Ok(Value::Bool(x != y)),
            _ => Err(type_error(&format!("{op:?}"), "booleans")),
        };
    }
    if let (Value::Num(x), Value::Num(y)) = (&a, &b) {
        return Ok(match op {
            Op::Add => Value::Num(x + y),
            Op::Sub => Value::Num(x - y),
            Op::Mul => Value::Num(x * y),
            Op::Div if y.is_zero() => return Err(Error::invalid("division by zero")),
            Op::Div => Value::Num(x / y),
            _ => Value::Bool(compare(op, x.cmp(y))),
        });
    }
    let (x, y) = (float(&a)?, float(&b)?);
    Ok(match op {
        Op::Add => Value::Float(x + y),
        Op::Sub => Value::Float(x - y),
        Op::Mul => Value::Float(x * y),
        Op::Div => Value::Float(x / y),
        _ => Value::Bool(compare(op, x.partial_cmp(&y).unwrap_or(Ordering::Equal))),
    })
}

fn compare(op: Op, ord: Ordering) -> bool {
    match op {
        Op::Eq => ord == Ordering::Equal,
        Op::Ne => ord != Ordering::Equal,
        Op::Lt => ord == Ordering::Less,
        Op::Le => ord != Ordering::Greater,
        Op::Gt => ord == Ordering::Greater,
        Op::Ge => ord != Ordering::Less,
        _ => unreachable!("not a comparison"),
    }
}

fn call(f: &str, args: &[Value]) -> Result<Value> {
    let arity = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "{f} takes {k} arguments, got {}",
                args.len()
            )))
        }
    };
    match f {
        "floor" => {
            arity(1)?;
            Ok(Value::Num(num(&args[0])?.floor()))
        }
        "ceil" => {
            arity(1)?;
            Ok(Value::Num(num(&args[0])?.ceil()))
        }
        "abs" => {
            arity(1)?;
            match &args[0] {
                Value::Num(q) => Ok(Value::Num(q.abs())),
                other => Ok(Value::Float(float(other)?.abs())),
            }
        }
        "min" | "max" => {
            if args.is_empty() {
                return Err(Error::invalid(format!("{f} needs arguments")));
            }
            let mut best = args[0].clone();
            for a in &args[1..] {
                let less = truth(&binary(Op::Lt, a.clone(), best.clone())?)?;
                if less == (f == "min") {
                    best = a.clone();
                }
            }
            Ok(best)
        }
        "binom" => {
            arity(2)?;
            let (n, k) = (num(&args[0])?, num(&args[1])?);
            if !n.is_integer() || !k.is_integer() {
                return Err(Error::invalid("binom needs integers"));
            }
            let (n, k) = (n.to_integer(), k.to_integer());
            if k.is_negative() || k > n {
                return Ok(Value::int(0));
            }
            let mut acc = BigInt::one();
            let mut i = BigInt::zero();
            while i < k {
                acc = acc * (&n - &i) / (&i + 1);
                i += 1;
            }
            Ok(Value::Num(Q::from_integer(acc)))
        }
        "pow" => {
            arity(2)?;
            Ok(Value::Float(float(&args[0])?.powf(float(&args[1])?)))
        }
        "sqrt" => {
            arity(1)?;
            Ok(Value::Float(float(&args[0])?.sqrt()))
        }
        _ => Err(Error::invalid(format!("unknown function {f}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, vars: &[(&str, i64)]) -> Value {
        parse(src)
            .unwrap()
            .eval(&mut |name| {
                vars.iter()
                    .find(|(k, _)| *k == name)
                    .map(|&(_, v)| Value::int(v))
                    .ok_or_else(|| Error::invalid(name.to_string()))
            })
            .unwrap()
    }

    #[test]
    fn arithmetic_is_exact() {
        assert_eq!(eval("1/3 + 1/6 == 1/2", &[]), Value::Bool(true));
        assert_eq!(
            eval("floor(n/2) * floor((n-1)/2)", &[("n", 11)]),
            Value::int(25)
        );
        assert_eq!(eval("binom(3*n, 2)", &[("n", 4)]), Value::int(66));
        assert_eq!(eval("0.25 * 4", &[]), Value::int(1));
        assert_eq!(eval("max(2, 7, 3) - min(4, -1)", &[]), Value::int(8));
    }

    #[test]
    fn logic_and_precedence() {
        assert_eq!(eval("1 + 2 * 3 == 7 && !(2 > 3)", &[]), Value::Bool(true));
        assert_eq!(eval("x < 0 || x >= 5", &[("x", 5)]), Value::Bool(true));
        assert_eq!(eval("-x", &[("x", 5)]), Value::int(-5));
    }

    #[test]
    fn floats_mix() {
        let v = eval("pow(4, 1.5)", &[]);
        assert_eq!(v, Value::Float(8.0));
        assert_eq!(eval("sqrt(16) == 4", &[]), Value::Bool(true));
    }

    #[test]
    fn errors() {
        assert!(parse("1 +").is_err());
        assert!(parse("a b").is_err());
        assert!(parse("1 $ 2").is_err());
        assert_eq!(parse("f(x, y) + z").unwrap().vars(), vec!["x", "y", "z"]);
    }
}
