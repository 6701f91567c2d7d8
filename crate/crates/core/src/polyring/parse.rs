use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, PolyError, Polynomial, RingContext, Scalar};

/// Parse an arithmetic expression over the context's declared symbols.
///
/// Grammar: `+ - * / ^`, parentheses, unbounded integer literals. `/` only
/// divides by expressions that evaluate to nonzero constants (so rational
/// literals like `3/4` work), `^` takes a non-negative integer literal, and
/// implicit multiplication (`2x1`, `(a)(b)`) is rejected.
pub fn parse(text: &str, ctx: &Arc<RingContext>) -> Result<Polynomial, PolyError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        ctx: Arc::clone(ctx),
        len: text.len(),
    };
    let poly = p.expr()?;
    match p.peek() {
        None => Ok(poly),
        Some(t) => Err(PolyError::Parse {
            offset: t.offset,
            message: format!("unexpected `{}`", t.kind.describe()),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Int(BigInt),
    Symbol(String),
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Plus => "+".into(),
            TokenKind::Minus => "-".into(),
            TokenKind::Star => "*".into(),
            TokenKind::Slash => "/".into(),
            TokenKind::Caret => "^".into(),
            TokenKind::LParen => "(".into(),
            TokenKind::RParen => ")".into(),
            TokenKind::Int(n) => n.to_string(),
            TokenKind::Symbol(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, PolyError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let offset = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
            }
            b'+' => {
                tokens.push(Token { kind: TokenKind::Plus, offset });
                i += 1;
            }
            b'-' => {
                tokens.push(Token { kind: TokenKind::Minus, offset });
                i += 1;
            }
            b'*' => {
                tokens.push(Token { kind: TokenKind::Star, offset });
                i += 1;
            }
            b'/' => {
                tokens.push(Token { kind: TokenKind::Slash, offset });
                i += 1;
            }
            b'^' => {
                tokens.push(Token { kind: TokenKind::Caret, offset });
                i += 1;
            }
            b'(' => {
                tokens.push(Token { kind: TokenKind::LParen, offset });
                i += 1;
            }
            b')' => {
                tokens.push(Token { kind: TokenKind::RParen, offset });
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                let value: BigInt = digits.parse().expect("digit run parses as BigInt");
                tokens.push(Token { kind: TokenKind::Int(value), offset });
                // implicit multiplication like `2x1` is ambiguous with
                // multi-character symbols, reject it here
                if i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                    return Err(PolyError::Parse {
                        offset: i,
                        message: "implicit multiplication is not accepted; write `*`".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                i += 1;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'\'' || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Symbol(text[start..i].to_string()),
                    offset,
                });
            }
            _ => {
                return Err(PolyError::Parse {
                    offset,
                    message: format!("unexpected character `{}`", &text[offset..offset + 1]),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    ctx: Arc<RingContext>,
    len: usize,
}

impl Parser {
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

    fn end_offset(&self) -> usize {
        self.len
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t.kind {
                TokenKind::Plus => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                TokenKind::Minus => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek().map(|t| (t.kind.clone(), t.offset)) {
                Some((TokenKind::Star, _)) => {
                    self.next();
                    acc = &acc * &self.factor()?;
                }
                Some((TokenKind::Slash, offset)) => {
                    self.next();
                    let divisor = self.factor()?;
                    let value = divisor.as_constant().ok_or(PolyError::Parse {
                        offset,
                        message: "division only by nonzero rational constants".into(),
                    })?;
                    if value.is_zero() {
                        return Err(PolyError::Parse {
                            offset,
                            message: "division by zero".into(),
                        });
                    }
                    acc = acc.mul_scalar(&value.recip());
                }
                // a factor immediately after a factor means a missing operator
                Some((TokenKind::Int(_), offset))
                | Some((TokenKind::Symbol(_), offset))
                | Some((TokenKind::LParen, offset)) => {
                    return Err(PolyError::Parse {
                        offset,
                        message: "implicit multiplication is not accepted; write `*`".into(),
                    });
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        // collect unary signs
        let mut negate = false;
        loop {
            match self.peek().map(|t| t.kind.clone()) {
                Some(TokenKind::Minus) => {
                    negate = !negate;
                    self.next();
                }
                Some(TokenKind::Plus) => {
                    self.next();
                }
                _ => break,
            }
        }
        let mut base = self.atom()?;
        if let Some(TokenKind::Caret) = self.peek().map(|t| t.kind.clone()) {
            self.next();
            let exp = self.exponent()?;
            base = base.pow(exp);
        }
        Ok(if negate { -&base } else { base })
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        match self.next() {
            Some(Token { kind: TokenKind::Int(n), offset }) => {
                u32::try_from(&n).map_err(|_| PolyError::Parse {
                    offset,
                    message: "exponent too large".into(),
                })
            }
            Some(Token { kind: TokenKind::Minus, offset }) => {
                Err(PolyError::NegativeExponent { offset })
            }
            Some(t) => Err(PolyError::Parse {
                offset: t.offset,
                message: "expected an integer exponent after `^`".into(),
            }),
            None => Err(PolyError::Parse {
                offset: self.end_offset(),
                message: "expected an integer exponent after `^`".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.next() {
            Some(Token { kind: TokenKind::Int(n), .. }) => Ok(Polynomial::constant(
                &self.ctx,
                Scalar::from_integer(n),
            )),
            Some(Token { kind: TokenKind::Symbol(name), offset }) => {
                match self.ctx.symbol(&name) {
                    Some(id) => Ok(Polynomial::from_terms(
                        &self.ctx,
                        [(Monomial::var(id, 1), Scalar::one())],
                    )),
                    None => Err(PolyError::UnknownSymbol { name, offset }),
                }
            }
            Some(Token { kind: TokenKind::LParen, offset }) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token { kind: TokenKind::RParen, .. }) => Ok(inner),
                    Some(t) => Err(PolyError::Parse {
                        offset: t.offset,
                        message: "expected `)`".into(),
                    }),
                    None => Err(PolyError::Parse {
                        offset,
                        message: "unclosed `(`".into(),
                    }),
                }
            }
            Some(t) => Err(PolyError::Parse {
                offset: t.offset,
                message: format!("unexpected `{}`", t.kind.describe()),
            }),
            None => Err(PolyError::Parse {
                offset: self.end_offset(),
                message: "unexpected end of input".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::scalar_int;
    use super::*;

    fn ctx() -> Arc<RingContext> {
        RingContext::with_split(
            vec!["x1", "x2", "x3", "x4", "x5"],
            vec!["a", "b", "c", "p", "q"],
            3,
        )
        .unwrap()
    }

    #[test]
    fn parses_simple_polynomials() {
        let ctx = ctx();
        let f = parse("x1^2 - x2^2", &ctx).unwrap();
        assert_eq!(f.num_terms(), 2);
        let x1sq = Monomial::var(0, 2);
        assert_eq!(f.coefficient(&x1sq), scalar_int(1));
        assert_eq!(f.coefficient(&Monomial::var(1, 2)), scalar_int(-1));

        let zero = parse("0", &ctx).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn parses_the_first_example_polynomial() {
        let ctx = ctx();
        let f = parse(
            "a*x1^2+b*x1^2+b*x1*x2+b*x1*x3+c*x1^2+c*x2^2+c*x3^2+x4*x5",
            &ctx,
        )
        .unwrap();
        // a*x1^2 and b*x1^2 and c*x1^2 stay separate monomials in Q[a..q][x..]
        assert_eq!(f.num_terms(), 8);
        assert_eq!(f.degree_and_homogeneity(), (Some(2), true));
    }

    #[test]
    fn rational_literals_and_precedence() {
        let ctx = ctx();
        let f = parse("3/4*x1 + 1/2", &ctx).unwrap();
        assert_eq!(f.coefficient(&Monomial::var(0, 1)), Scalar::new(3.into(), 4.into()));
        assert_eq!(f.coefficient(&Monomial::one()), Scalar::new(1.into(), 2.into()));
        // unary minus and powers
        let g = parse("-x1^2 - -x2", &ctx).unwrap();
        assert_eq!(g, parse("x2 - x1^2", &ctx).unwrap());
        // ^ binds tighter than *
        assert_eq!(
            parse("2*x1^3", &ctx).unwrap(),
            parse("2*(x1^3)", &ctx).unwrap()
        );
    }

    #[test]
    fn error_cases_carry_offsets() {
        let ctx = ctx();
        match parse("x1 + y7", &ctx) {
            Err(PolyError::UnknownSymbol { name, offset }) => {
                assert_eq!(name, "y7");
                assert_eq!(offset, 5);
            }
            other => panic!("expected unknown symbol, got {other:?}"),
        }
        assert!(matches!(
            parse("x1^-2", &ctx),
            Err(PolyError::NegativeExponent { offset: 3 })
        ));
        assert!(matches!(parse("2x1", &ctx), Err(PolyError::Parse { offset: 1, .. })));
        assert!(matches!(parse("(x1", &ctx), Err(PolyError::Parse { .. })));
        assert!(matches!(parse("x1 x2", &ctx), Err(PolyError::Parse { .. })));
        assert!(matches!(parse("x1/x2", &ctx), Err(PolyError::Parse { .. })));
        assert!(matches!(parse("1/0", &ctx), Err(PolyError::Parse { .. })));
    }
}
