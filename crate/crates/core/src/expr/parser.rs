use super::lexer::{Cursor, ParseError, Token};
use super::{Expr, Func};
use crate::kalgebra::{Algebra, KScalar};

/// Parses `src` in the given algebra; constants are tagged with `algebra`.
pub fn parse(src: &str, algebra: Algebra) -> Result<Expr, ParseError> {
    let mut cur = Cursor::new(src)?;
    let e = expr(&mut cur, algebra)?;
    cur.finish()?;
    Ok(e)
}

fn expr(cur: &mut Cursor, alg: Algebra) -> Result<Expr, ParseError> {
    let mut lhs = term(cur, alg)?;
    loop {
        if cur.eat(&Token::Plus) {
            lhs = Expr::Add(Box::new(lhs), Box::new(term(cur, alg)?));
        } else if cur.eat(&Token::Minus) {
            lhs = Expr::Sub(Box::new(lhs), Box::new(term(cur, alg)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn term(cur: &mut Cursor, alg: Algebra) -> Result<Expr, ParseError> {
    let mut lhs = factor(cur, alg)?;
    loop {
        if cur.eat(&Token::Star) {
            lhs = Expr::Mul(Box::new(lhs), Box::new(factor(cur, alg)?));
        } else if cur.eat(&Token::Slash) {
            lhs = Expr::Div(Box::new(lhs), Box::new(factor(cur, alg)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn factor(cur: &mut Cursor, alg: Algebra) -> Result<Expr, ParseError> {
    if cur.eat(&Token::Minus) {
        return Ok(Expr::Neg(Box::new(factor(cur, alg)?)));
    }
    let base = atom(cur, alg)?;
    if cur.eat(&Token::Caret) {
        let n = cur.exponent()?;
        return Ok(Expr::Pow(Box::new(base), n));
    }
    Ok(base)
}

fn atom(cur: &mut Cursor, alg: Algebra) -> Result<Expr, ParseError> {
    let pos = cur.pos();
    match cur.next() {
        Some(Token::Num(v)) => Ok(Expr::Const(KScalar::real(alg, v))),
        Some(Token::LParen) => {
            let e = expr(cur, alg)?;
            cur.expect(&Token::RParen, "')'")?;
            Ok(e)
        }
        Some(Token::Ident(name)) => match name.as_str() {
            "z" => Ok(Expr::Var),
            "i" if alg == Algebra::Complex => Ok(Expr::unit(alg)),
            "i" => Err(ParseError::new(pos, "i not valid in lorentz mode")),
            "tau" if alg == Algebra::Lorentz => Ok(Expr::unit(alg)),
            "tau" => Err(ParseError::new(pos, "tau not valid in complex mode")),
            other => match Func::from_name(other) {
                Some(f) => {
                    cur.expect(&Token::LParen, "'(' after function name")?;
                    let arg = expr(cur, alg)?;
                    cur.expect(&Token::RParen, "')'")?;
                    Ok(Expr::Call(f, Box::new(arg)))
                }
                None => Err(ParseError::new(pos, format!("unknown identifier '{other}'"))),
            },
        },
        Some(t) => Err(ParseError::new(pos, format!("unexpected token {t:?}"))),
        None => Err(ParseError::new(pos, "unexpected end of input")),
    }
}
