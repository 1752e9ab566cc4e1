//! Arithmetic expressions in the problem size, used for budgets, ageing
//! thresholds and mutation rates (`"50*n*ln(n)"`, `"n*ln(n)^2"`, `"1e6"`).
//!
//! Supported: numbers (with exponents), `+ - * / ^` (right-associative
//! power), parentheses, the variables `n`, `d`, `gamma`, `mu`, the constants
//! `e` and `pi`, and the functions `ln`/`log`, `log2`, `log10`, `sqrt`,
//! `exp`, `abs`, `floor`, `ceil`, `round`, `min`, `max`, `pow` and
//! `binom(n, k)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Values bound to the variables of an expression.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vars {
    pub n: f64,
    pub d: Option<f64>,
    pub gamma: Option<f64>,
    pub mu: Option<f64>,
}

impl Vars {
    pub fn with_n(n: usize) -> Self {
        Self {
            n: n as f64,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(f64),
    Var(String),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(String, Vec<Node>),
}

/// A parsed expression that remembers its source text.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    source: String,
    root: Node,
}

impl Expr {
    pub fn parse(source: &str) -> Result<Self> {
        let tokens = lex(source)?;
        let mut p = Parser {
            source,
            tokens,
            pos: 0,
        };
        let root = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error(format!("unexpected `{}`", p.tokens[p.pos])));
        }
        Ok(Self {
            source: source.trim().to_string(),
            root,
        })
    }

    /// A constant expression.
    pub fn constant(value: f64) -> Self {
        Self {
            source: format_constant(value),
            root: Node::Num(value),
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, vars: &Vars) -> Result<f64> {
        let v = eval(&self.root, vars).map_err(|reason| Error::Expression {
            expr: self.source.clone(),
            reason,
        })?;
        if !v.is_finite() {
            return Err(Error::Expression {
                expr: self.source.clone(),
                reason: format!("value {v} is not finite"),
            });
        }
        Ok(v)
    }

    /// Evaluates and rounds to a positive integer count.
    pub fn eval_count(&self, vars: &Vars) -> Result<u64> {
        let v = self.eval(vars)?.round();
        if v < 1.0 || v > u64::MAX as f64 {
            return Err(Error::Expression {
                expr: self.source.clone(),
                reason: format!("need a positive count, got {v}"),
            });
        }
        Ok(v as u64)
    }
}

fn format_constant(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Expr::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Num(v) => write!(f, "{v}"),
            Token::Ident(s) => f.write_str(s),
            Token::Op(c) => write!(f, "{c}"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let err = |reason: String| Error::Expression {
        expr: src.to_string(),
        reason,
    };
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent only when followed by digits, so `2e` stays `2 * e`
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| err(format!("bad number `{text}`")))?;
            out.push(Token::Num(v));
            // a number glued to a name multiplies it: `2e`, `3n`
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                out.push(Token::Op('*'));
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(err(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    source: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: String) -> Error {
        Error::Expression {
            expr: self.source.to_string(),
            reason,
        }
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.peek_op() == Some(op) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{op}`")))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            return Ok(Node::Bin('^', Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let Some(tok) = self.tokens.get(self.pos).cloned() else {
            return Err(self.error("unexpected end of expression".into()));
        };
        self.pos += 1;
        match tok {
            Token::Num(v) => Ok(Node::Num(v)),
            Token::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Token::Ident(name) => {
                if self.peek_op() != Some('(') {
                    return Ok(Node::Var(name));
                }
                self.pos += 1;
                let mut args = vec![self.expr()?];
                while self.peek_op() == Some(',') {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                Ok(Node::Call(name, args))
            }
            Token::Op(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }
}

fn eval(node: &Node, vars: &Vars) -> std::result::Result<f64, String> {
    Ok(match node {
        Node::Num(v) => *v,
        Node::Neg(x) => -eval(x, vars)?,
        Node::Var(name) => match name.as_str() {
            "n" => vars.n,
            "d" => vars.d.ok_or("`d` is not defined for this benchmark")?,
            "gamma" => vars.gamma.ok_or("`gamma` is not defined here")?,
            "mu" => vars.mu.ok_or("`mu` is not defined here")?,
            "e" => std::f64::consts::E,
            "pi" => std::f64::consts::PI,
            other => return Err(format!("unknown variable `{other}`")),
        },
        Node::Bin(op, a, b) => {
            let (a, b) = (eval(a, vars)?, eval(b, vars)?);
            match op {
                '+' => a + b,
                '-' => a - b,
                '*' => a * b,
                '/' => a / b,
                '^' => a.powf(b),
                _ => unreachable!("parser only builds + - * / ^"),
            }
        }
        Node::Call(name, args) => {
            let vals = args.iter().map(|a| eval(a, vars)).collect::<std::result::Result<Vec<_>, _>>()?;
            let unary = |f: fn(f64) -> f64| -> std::result::Result<f64, String> {
                match vals.as_slice() {
                    [x] => Ok(f(*x)),
                    _ => Err(format!("`{name}` takes one argument")),
                }
            };
            let binary = |f: fn(f64, f64) -> f64| -> std::result::Result<f64, String> {
                match vals.as_slice() {
                    [x, y] => Ok(f(*x, *y)),
                    _ => Err(format!("`{name}` takes two arguments")),
                }
            };
            match name.as_str() {
                "ln" | "log" => unary(f64::ln)?,
                "log2" => unary(f64::log2)?,
                "log10" => unary(f64::log10)?,
                "sqrt" => unary(f64::sqrt)?,
                "exp" => unary(f64::exp)?,
                "abs" => unary(f64::abs)?,
                "floor" => unary(f64::floor)?,
                "ceil" => unary(f64::ceil)?,
                "round" => unary(f64::round)?,
                "min" => binary(f64::min)?,
                "max" => binary(f64::max)?,
                "pow" => binary(f64::powf)?,
                "binom" => binary(binom)?,
                other => return Err(format!("unknown function `{other}`")),
            }
        }
    })
}

/// `C(n, k)` for non-negative integral arguments, 0 outside `0..=n`.
pub fn binom(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k).round() as u64;
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i as f64) / (i + 1) as f64;
    }
    c.round()
}
