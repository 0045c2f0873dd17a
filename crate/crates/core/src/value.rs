//! Parsing of `(get-value ...)` responses.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{parse_decimal, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Int(BigInt),
    Real(Rational),
}

impl Value {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Value::Bool(_) => None,
            Value::Int(i) => Some(Rational::from_integer(i.clone())),
            Value::Real(r) => Some(r.clone()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Real(r) => write!(f, "{r}"),
        }
    }
}

/// Symbol (without `|...|` quotes) to value.
pub type Assignment = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unparseable solver response: {0}")]
pub struct ResponseError(pub String);

#[derive(Debug, PartialEq)]
enum Sexp {
    Atom(String),
    /// A `|...|`-quoted symbol, kept apart so `|true|` is not a Boolean.
    Quoted(String),
    List(Vec<Sexp>),
}

struct Reader<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn read(&mut self) -> Result<Sexp, ResponseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let first = rest
            .chars()
            .next()
            .ok_or_else(|| ResponseError("unexpected end of response".into()))?;
        match first {
            '(' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.text[self.pos..].chars().next() {
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(items));
                        }
                        Some(_) => items.push(self.read()?),
                        None => return Err(ResponseError("unbalanced parentheses".into())),
                    }
                }
            }
            ')' => Err(ResponseError(format!("unexpected `)` at offset {}", self.pos))),
            '|' => {
                let end = rest[1..]
                    .find('|')
                    .ok_or_else(|| ResponseError("unterminated quoted symbol".into()))?;
                self.pos += end + 2;
                Ok(Sexp::Quoted(rest[1..end + 1].to_string()))
            }
            _ => {
                let end = rest
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')' || c == '|')
                    .unwrap_or(rest.len());
                self.pos += end;
                Ok(Sexp::Atom(rest[..end].to_string()))
            }
        }
    }
}

/// Evaluates a constant term: literals, `(- x)`, `(- x y ...)`, `(+ ...)`,
/// `(* ...)` and `(/ x y)`. The boolean says whether the term is an integer
/// literal (no decimal point, no division).
fn numeric(term: &Sexp) -> Result<(Rational, bool), ResponseError> {
    let bad = || ResponseError(format!("not a numeric constant: {term:?}"));
    match term {
        Sexp::Atom(a) => {
            let value = parse_decimal(a).ok_or_else(bad)?;
            Ok((value, !a.contains('.')))
        }
        Sexp::Quoted(_) => Err(bad()),
        Sexp::List(items) => {
            let (op, args) = match items.split_first() {
                Some((Sexp::Atom(op), args)) if !args.is_empty() => (op.as_str(), args),
                _ => return Err(bad()),
            };
            let values = args.iter().map(numeric).collect::<Result<Vec<_>, _>>()?;
            let integral = values.iter().all(|(_, i)| *i);
            let mut iter = values.into_iter().map(|(v, _)| v);
            let first = iter.next().unwrap();
            match op {
                "-" if args.len() == 1 => Ok((-first, integral)),
                "-" => Ok((iter.fold(first, |acc, v| acc - v), integral)),
                "+" => Ok((iter.fold(first, |acc, v| acc + v), integral)),
                "*" => Ok((iter.fold(first, |acc, v| acc * v), integral)),
                "/" => {
                    let mut acc = first;
                    for v in iter {
                        if v.is_zero() {
                            return Err(ResponseError("division by zero".into()));
                        }
                        acc /= v;
                    }
                    Ok((acc, false))
                }
                _ => Err(bad()),
            }
        }
    }
}

fn value(term: &Sexp) -> Result<Value, ResponseError> {
    match term {
        Sexp::Atom(a) if a == "true" => Ok(Value::Bool(true)),
        Sexp::Atom(a) if a == "false" => Ok(Value::Bool(false)),
        _ => {
            let (v, integral) = numeric(term)?;
            Ok(if integral && v.denom().is_one() {
                Value::Int(v.to_integer())
            } else {
                Value::Real(v)
            })
        }
    }
}

/// Parses `((sym value) ...)`. Symbols are returned without quotes.
pub fn parse_value_response(text: &str) -> Result<Assignment, ResponseError> {
    let mut reader = Reader { text, pos: 0 };
    let list = match reader.read()? {
        Sexp::List(items) => items,
        other => return Err(ResponseError(format!("expected a list, found {other:?}"))),
    };
    reader.skip_ws();
    if reader.pos != text.len() {
        return Err(ResponseError(format!(
            "trailing content after value list: `{}`",
            text[reader.pos..].trim()
        )));
    }
    let mut out = Assignment::new();
    for pair in list {
        match pair {
            Sexp::List(mut items) if items.len() == 2 => {
                let v = value(&items[1])?;
                let name = match items.swap_remove(0) {
                    Sexp::Atom(s) | Sexp::Quoted(s) => s,
                    Sexp::List(_) => {
                        return Err(ResponseError("expected a symbol in value pair".into()))
                    }
                };
                out.insert(name, v);
            }
            other => {
                return Err(ResponseError(format!("expected `(symbol value)`, found {other:?}")))
            }
        }
    }
    Ok(out)
}
