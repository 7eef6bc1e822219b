//! Text syntax for scalars, polynomials, points and ternary forms.
//!
//! Lists use brackets or parentheses, entries are separated by commas, and
//! atoms may be quoted: `[-1, 0, "1/2", 1+w]`.

use ress_core::exactfield::{Field, QuadExt};
use ress_core::ternaryform::{Point3, TernaryForm};
use ress_core::unipoly::UniPoly;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Atom(String),
    List(Vec<Node>),
}

pub fn parse_tree(s: &str) -> Result<Node, CliError> {
    let mut tokens = tokenize(s).into_iter().peekable();
    let node = parse_node(&mut tokens, s)?;
    if tokens.peek().is_some() {
        return Err(CliError::parse(format!("trailing input in {s:?}")));
    }
    Ok(node)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Comma,
    Atom(String),
}

fn tokenize(s: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut atom = String::new();
    let flush = |atom: &mut String, out: &mut Vec<Token>| {
        if !atom.is_empty() {
            out.push(Token::Atom(std::mem::take(atom)));
        }
    };
    for c in s.chars() {
        match c {
            '[' | '(' => {
                flush(&mut atom, &mut out);
                out.push(Token::Open);
            }
            ']' | ')' => {
                flush(&mut atom, &mut out);
                out.push(Token::Close);
            }
            ',' => {
                flush(&mut atom, &mut out);
                out.push(Token::Comma);
            }
            '"' | '\'' => {}
            c if c.is_whitespace() => flush(&mut atom, &mut out),
            c => atom.push(c),
        }
    }
    flush(&mut atom, &mut out);
    out
}

fn parse_node<I: Iterator<Item = Token>>(tokens: &mut std::iter::Peekable<I>, src: &str) -> Result<Node, CliError> {
    match tokens.next() {
        Some(Token::Atom(a)) => Ok(Node::Atom(a)),
        Some(Token::Open) => {
            let mut items = Vec::new();
            if tokens.peek() == Some(&Token::Close) {
                tokens.next();
                return Ok(Node::List(items));
            }
            loop {
                items.push(parse_node(tokens, src)?);
                match tokens.next() {
                    Some(Token::Comma) => continue,
                    Some(Token::Close) => return Ok(Node::List(items)),
                    _ => return Err(CliError::parse(format!("unbalanced list in {src:?}"))),
                }
            }
        }
        _ => Err(CliError::parse(format!("unexpected token in {src:?}"))),
    }
}

pub fn from_json(v: &Value) -> Result<Node, CliError> {
    match v {
        Value::Number(n) => Ok(Node::Atom(n.to_string())),
        Value::String(s) => Ok(Node::Atom(s.clone())),
        Value::Array(items) => items.iter().map(from_json).collect::<Result<_, _>>().map(Node::List),
        other => Err(CliError::parse(format!("unsupported JSON value {other}"))),
    }
}

/// `q` or `q-sqrt:d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSel {
    Q,
    Sqrt(i64),
}

impl FieldSel {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        if s == "q" {
            return Ok(FieldSel::Q);
        }
        let d: i64 = s
            .strip_prefix("q-sqrt:")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| CliError::parse(format!("unknown field {s:?}, expected q or q-sqrt:d")))?;
        QuadExt::omega(d).map_err(|e| CliError::parse(e.to_string()))?;
        Ok(FieldSel::Sqrt(d))
    }
}

pub fn list(n: &Node) -> Result<&[Node], CliError> {
    match n {
        Node::List(v) => Ok(v),
        Node::Atom(a) => Err(CliError::parse(format!("expected a list, got {a:?}"))),
    }
}

pub fn atom(n: &Node) -> Result<&str, CliError> {
    match n {
        Node::Atom(a) => Ok(a),
        Node::List(_) => Err(CliError::parse("expected a scalar, got a list")),
    }
}

pub fn scalar<F: Field>(n: &Node, tag: F::Tag) -> Result<F, CliError> {
    F::parse_in(atom(n)?, tag).map_err(|e| CliError::parse(e.to_string()))
}

pub fn uint(n: &Node) -> Result<u32, CliError> {
    let a = atom(n)?;
    a.parse().map_err(|_| CliError::parse(format!("expected an exponent, got {a:?}")))
}

pub fn scalars<F: Field>(n: &Node, tag: F::Tag) -> Result<Vec<F>, CliError> {
    list(n)?.iter().map(|x| scalar(x, tag)).collect()
}

pub fn triple<F: Field>(n: &Node, tag: F::Tag) -> Result<[F; 3], CliError> {
    let v = scalars(n, tag)?;
    <[F; 3]>::try_from(v).map_err(|v| CliError::parse(format!("expected three entries, got {}", v.len())))
}

pub fn poly<F: Field>(n: &Node, tag: F::Tag) -> Result<UniPoly<F>, CliError> {
    Ok(UniPoly::new(scalars(n, tag)?, tag))
}

pub fn point<F: Field>(n: &Node, tag: F::Tag) -> Result<Point3<F>, CliError> {
    Ok(Point3::new(triple(n, tag)?)?)
}

pub fn form<F: Field>(n: &Node, tag: F::Tag) -> Result<TernaryForm<F>, CliError> {
    let mut terms = Vec::new();
    for t in list(n)? {
        let entries = list(t)?;
        let [i, j, k, c] = entries else {
            return Err(CliError::parse("a monomial entry is [i, j, k, coefficient]"));
        };
        terms.push((uint(i)?, uint(j)?, uint(k)?, scalar(c, tag)?));
    }
    Ok(TernaryForm::from_term_list(terms)?)
}

pub fn parse_with<T>(s: &str, f: impl FnOnce(&Node) -> Result<T, CliError>) -> Result<T, CliError> {
    f(&parse_tree(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ress_core::exactfield::Rat;

    #[test]
    fn nested_lists_and_atoms() {
        let n = parse_tree("[(1, 0, 2, \"1/2\"), [0,0,3,1+w]]").unwrap();
        let Node::List(v) = n else { panic!() };
        assert_eq!(v.len(), 2);
        assert_eq!(list(&v[1]).unwrap()[3], Node::Atom("1+w".into()));
        assert_eq!(parse_tree("[]").unwrap(), Node::List(vec![]));
        assert!(parse_tree("[1, 2").is_err());
        assert!(parse_tree("[1] 2").is_err());
    }

    #[test]
    fn polynomials_in_both_fields() {
        let p: UniPoly<Rat> = parse_with("[-1, 0, 1/2]", |n| poly(n, ())).unwrap();
        assert_eq!(p.coeff(2), Rat::new(1, 2).unwrap());
        let q: UniPoly<QuadExt> = parse_with("[w, '2-w']", |n| poly(n, 3)).unwrap();
        assert_eq!(q.coeff(0), QuadExt::omega(3).unwrap());
    }

    #[test]
    fn field_selectors() {
        assert_eq!(FieldSel::parse("q").unwrap(), FieldSel::Q);
        assert_eq!(FieldSel::parse("q-sqrt:-3").unwrap(), FieldSel::Sqrt(-3));
        assert!(FieldSel::parse("q-sqrt:4").is_err());
        assert!(FieldSel::parse("r").is_err());
    }
}
