//! Symbolic edge colors: integer linear expressions in named variables, such
//! as `i`, `j` or `i+j`, bound to integers before any engine runs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColorError {
    #[error("cannot parse color expression `{0}`")]
    Parse(String),
    #[error("color variable `{0}` is not bound")]
    Unbound(String),
    #[error("color `{0}` evaluates to the negative value {1}")]
    Negative(String, i64),
}

/// `constant + sum coeff * var`
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorExpr {
    pub constant: i64,
    pub terms: BTreeMap<String, i64>,
}

pub type Bindings = BTreeMap<String, i64>;

impl ColorExpr {
    pub fn constant(c: i64) -> ColorExpr {
        ColorExpr { constant: c, terms: BTreeMap::new() }
    }

    pub fn var(name: &str) -> ColorExpr {
        ColorExpr { constant: 0, terms: BTreeMap::from([(name.to_string(), 1)]) }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(|s| s.as_str())
    }

    pub fn eval(&self, b: &Bindings) -> Result<i64, ColorError> {
        let mut v = self.constant;
        for (name, c) in &self.terms {
            let x = b.get(name).ok_or_else(|| ColorError::Unbound(name.clone()))?;
            v += c * x;
        }
        Ok(v)
    }

    /// Evaluate and insist on a non-negative result.
    pub fn bind(&self, b: &Bindings) -> Result<u32, ColorError> {
        let v = self.eval(b)?;
        if v < 0 {
            return Err(ColorError::Negative(self.to_string(), v));
        }
        Ok(v as u32)
    }
}

impl FromStr for ColorExpr {
    type Err = ColorError;

    /// Accepts sums and differences of terms `n`, `x`, `n*x` or `nx`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ColorError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut out = ColorExpr::constant(0);
        let mut chunks = Vec::new();
        let mut cur = String::new();
        for (k, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && k > 0 {
                chunks.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        chunks.push(cur);
        for chunk in chunks {
            let (neg, body) = match chunk.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, chunk.strip_prefix('+').unwrap_or(&chunk)),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let split = body.find(|c: char| c.is_ascii_alphabetic() || c == '_');
            let (num, var) = match split {
                Some(k) => (body[..k].trim_end_matches('*'), Some(&body[k..])),
                None => (body, None),
            };
            let n: i64 = if num.is_empty() { 1 } else { num.parse().map_err(|_| bad())? };
            let n = if neg { -n } else { n };
            match var {
                Some(v) => {
                    if !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                        return Err(bad());
                    }
                    *out.terms.entry(v.to_string()).or_insert(0) += n;
                }
                None => out.constant += n,
            }
        }
        out.terms.retain(|_, c| *c != 0);
        Ok(out)
    }
}

impl fmt::Display for ColorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, &c) in &self.terms {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}*{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant != 0 {
            write!(f, "{}{}", if self.constant < 0 { "-" } else { "+" }, self.constant.abs())
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_eval() {
        let e: ColorExpr = "i+j".parse().unwrap();
        let b = Bindings::from([("i".into(), 2), ("j".into(), 3)]);
        assert_eq!(e.eval(&b).unwrap(), 5);
        assert_eq!("2*i - 1".parse::<ColorExpr>().unwrap().eval(&b).unwrap(), 3);
        assert_eq!("3".parse::<ColorExpr>().unwrap().bind(&b).unwrap(), 3);
        assert_eq!("i-j".parse::<ColorExpr>().unwrap().bind(&b), Err(ColorError::Negative("i-j".into(), -1)));
        assert_eq!(e.to_string(), "i+j");
        assert!("i+*".parse::<ColorExpr>().is_err());
    }
}
