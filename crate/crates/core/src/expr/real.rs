//! Real-valued expressions in named variables.
//!
//! Used for implicit equations in `x1, x2, x3`, explicit parametrizations in
//! `u, v` and planar curves in `t`. Same grammar as the `z` language plus
//! `tan`, `tanh`, `sqrt` and the constant `pi`.

use std::fmt;

use super::lexer::{Cursor, ParseError, Token};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RFunc {
    Exp,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Ln,
    Sqrt,
}

impl RFunc {
    const ALL: [RFunc; 9] =
        [RFunc::Exp, RFunc::Sin, RFunc::Cos, RFunc::Tan, RFunc::Sinh, RFunc::Cosh, RFunc::Tanh, RFunc::Ln, RFunc::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            RFunc::Exp => "exp",
            RFunc::Sin => "sin",
            RFunc::Cos => "cos",
            RFunc::Tan => "tan",
            RFunc::Sinh => "sinh",
            RFunc::Cosh => "cosh",
            RFunc::Tanh => "tanh",
            RFunc::Ln => "ln",
            RFunc::Sqrt => "sqrt",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            RFunc::Exp => x.exp(),
            RFunc::Sin => x.sin(),
            RFunc::Cos => x.cos(),
            RFunc::Tan => x.tan(),
            RFunc::Sinh => x.sinh(),
            RFunc::Cosh => x.cosh(),
            RFunc::Tanh => x.tanh(),
            RFunc::Ln => x.ln(),
            RFunc::Sqrt => x.sqrt(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(f64),
    Pi,
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(RFunc, Box<Node>),
}

/// A parsed real expression together with its variable names.
#[derive(Clone, Debug, PartialEq)]
pub struct RealExpr {
    vars: Vec<String>,
    root: Node,
}

impl RealExpr {
    pub fn parse(src: &str, vars: &[&str]) -> Result<RealExpr, ParseError> {
        let mut cur = Cursor::new(src)?;
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let root = expr(&mut cur, &vars)?;
        cur.finish()?;
        Ok(RealExpr { vars, root })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Evaluates with `args[k]` bound to the k-th variable.
    pub fn eval(&self, args: &[f64]) -> f64 {
        assert_eq!(args.len(), self.vars.len(), "argument count");
        eval(&self.root, args)
    }
}

fn eval(n: &Node, x: &[f64]) -> f64 {
    match n {
        Node::Num(v) => *v,
        Node::Pi => std::f64::consts::PI,
        Node::Var(i) => x[*i],
        Node::Neg(a) => -eval(a, x),
        Node::Add(a, b) => eval(a, x) + eval(b, x),
        Node::Sub(a, b) => eval(a, x) - eval(b, x),
        Node::Mul(a, b) => eval(a, x) * eval(b, x),
        Node::Div(a, b) => eval(a, x) / eval(b, x),
        Node::Pow(a, k) => eval(a, x).powi(*k),
        Node::Call(f, a) => f.apply(eval(a, x)),
    }
}

fn expr(cur: &mut Cursor, vars: &[String]) -> Result<Node, ParseError> {
    let mut lhs = term(cur, vars)?;
    loop {
        if cur.eat(&Token::Plus) {
            lhs = Node::Add(Box::new(lhs), Box::new(term(cur, vars)?));
        } else if cur.eat(&Token::Minus) {
            lhs = Node::Sub(Box::new(lhs), Box::new(term(cur, vars)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn term(cur: &mut Cursor, vars: &[String]) -> Result<Node, ParseError> {
    let mut lhs = factor(cur, vars)?;
    loop {
        if cur.eat(&Token::Star) {
            lhs = Node::Mul(Box::new(lhs), Box::new(factor(cur, vars)?));
        } else if cur.eat(&Token::Slash) {
            lhs = Node::Div(Box::new(lhs), Box::new(factor(cur, vars)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn factor(cur: &mut Cursor, vars: &[String]) -> Result<Node, ParseError> {
    if cur.eat(&Token::Minus) {
        return Ok(Node::Neg(Box::new(factor(cur, vars)?)));
    }
    let base = atom(cur, vars)?;
    if cur.eat(&Token::Caret) {
        return Ok(Node::Pow(Box::new(base), cur.exponent()?));
    }
    Ok(base)
}

fn atom(cur: &mut Cursor, vars: &[String]) -> Result<Node, ParseError> {
    let pos = cur.pos();
    match cur.next() {
        Some(Token::Num(v)) => Ok(Node::Num(v)),
        Some(Token::LParen) => {
            let e = expr(cur, vars)?;
            cur.expect(&Token::RParen, "')'")?;
            Ok(e)
        }
        Some(Token::Ident(name)) => {
            if let Some(i) = vars.iter().position(|v| *v == name) {
                return Ok(Node::Var(i));
            }
            if name == "pi" {
                return Ok(Node::Pi);
            }
            match RFunc::ALL.into_iter().find(|f| f.name() == name) {
                Some(f) => {
                    cur.expect(&Token::LParen, "'(' after function name")?;
                    let arg = expr(cur, vars)?;
                    cur.expect(&Token::RParen, "')'")?;
                    Ok(Node::Call(f, Box::new(arg)))
                }
                None => Err(ParseError::new(pos, format!("unknown identifier '{name}'"))),
            }
        }
        Some(t) => Err(ParseError::new(pos, format!("unexpected token {t:?}"))),
        None => Err(ParseError::new(pos, "unexpected end of input")),
    }
}

impl Node {
    fn precedence(&self) -> u8 {
        match self {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(_) => 3,
            Node::Num(v) if *v < 0.0 => 3,
            Node::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, vars: &[String], min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Node::Num(v) => write!(f, "{v}")?,
            Node::Pi => f.write_str("pi")?,
            Node::Var(i) => f.write_str(&vars[*i])?,
            Node::Neg(a) => {
                f.write_str("-")?;
                a.write(f, vars, 3)?;
            }
            Node::Add(a, b) | Node::Sub(a, b) => {
                a.write(f, vars, 1)?;
                f.write_str(if matches!(self, Node::Add(..)) { "+" } else { "-" })?;
                b.write(f, vars, 2)?;
            }
            Node::Mul(a, b) | Node::Div(a, b) => {
                a.write(f, vars, 2)?;
                f.write_str(if matches!(self, Node::Mul(..)) { "*" } else { "/" })?;
                b.write(f, vars, 3)?;
            }
            Node::Pow(a, k) => {
                a.write(f, vars, 5)?;
                write!(f, "^{k}")?;
            }
            Node::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write(f, vars, 0)?;
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for RealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(f, &self.vars, 0)
    }
}

/// An equation `lhs = rhs` over real variables; the residual is `lhs - rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub lhs: RealExpr,
    pub rhs: RealExpr,
}

impl Equation {
    pub fn parse(src: &str, vars: &[&str]) -> Result<Equation, ParseError> {
        let mut parts = src.splitn(2, '=');
        let left = parts.next().unwrap_or("");
        let right = parts.next().ok_or_else(|| ParseError::new(src.len().saturating_sub(1), "expected '='"))?;
        let lhs = RealExpr::parse(left, vars)?;
        let rhs = RealExpr::parse(right, vars)
            .map_err(|e| ParseError { position: e.position + left.len() + 1, message: e.message })?;
        Ok(Equation { lhs, rhs })
    }

    pub fn residual(&self, args: &[f64]) -> f64 {
        self.lhs.eval(args) - self.rhs.eval(args)
    }

    /// Residual divided by `1 + |lhs| + |rhs|`.
    pub fn relative_residual(&self, args: &[f64]) -> f64 {
        let (l, r) = (self.lhs.eval(args), self.rhs.eval(args));
        (l - r).abs() / (1.0 + l.abs() + r.abs())
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_eval_display() {
        let e = RealExpr::parse("x1^2+x2^2-sinh(x3)^2", &["x1", "x2", "x3"]).unwrap();
        let t = 0.7f64;
        assert!(e.eval(&[t.sinh(), 0.0, t]).abs() < 1e-15);
        assert_eq!(e.to_string(), "x1^2+x2^2-sinh(x3)^2");
        let again = RealExpr::parse(&e.to_string(), &["x1", "x2", "x3"]).unwrap();
        assert_eq!(again, e);
    }

    #[test]
    fn equations() {
        let eq = Equation::parse("x3 = x1*tanh(x2)", &["x1", "x2", "x3"]).unwrap();
        assert!(eq.residual(&[2.0, 0.5, 2.0 * 0.5f64.tanh()]).abs() < 1e-15);
        assert!(Equation::parse("x1+x2", &["x1", "x2"]).is_err());
        let e = Equation::parse("u = q", &["u"]).unwrap_err();
        assert_eq!(e.position, 4);
    }

    #[test]
    fn pi_and_unknowns() {
        let e = RealExpr::parse("sin(pi/2)*t", &["t"]).unwrap();
        assert_eq!(e.eval(&[3.0]), 3.0);
        assert!(RealExpr::parse("w+1", &["t"]).is_err());
    }
}
