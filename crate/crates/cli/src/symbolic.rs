//! Closed forms for per-state weights of a symbolically colored diagram.
//!
//! The engines only see integer colors, so a weight is sampled at several
//! bindings and fitted to `c · t^{L/4} · [E]`, with `L` affine in the color
//! variables (in units of `q = t^{1/4}`) and `[E]` either absent or the quantum
//! integer of one of the file's color expressions.

use std::collections::BTreeMap;
use std::fmt;

use moyalex::color::{Bindings, ColorExpr};
use moyalex::{qint, BigInt, Laurent, Rational};
use num_integer::Integer;

/// `coeff · t^{exponent/4} · [factor]`, exponent affine in the variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigInt,
    pub exponent: ColorExpr,
    pub factor: Option<ColorExpr>,
}

/// Sample bindings: all ones, then each variable raised by one, then two
/// checks off the affine lattice.
pub fn sample_bindings(vars: &[String]) -> Vec<Bindings> {
    let base: Bindings = vars.iter().map(|v| (v.clone(), 1)).collect();
    let mut out = vec![base.clone()];
    for v in vars {
        let mut b = base.clone();
        *b.get_mut(v).unwrap() += 1;
        out.push(b);
    }
    for shift in [2i64, 3] {
        out.push(vars.iter().enumerate().map(|(k, v)| (v.clone(), shift + (k as i64 % 2))).collect());
    }
    out
}

/// `c q^e` when `r` is a signed monomial.
fn as_monomial(r: &Rational) -> Option<(BigInt, i64)> {
    let p = r.as_poly()?;
    if !p.is_monomial() {
        return None;
    }
    let e = p.min_exp()?;
    Some((p.coeff(e), e))
}

/// Fit `values[k]`, taken at `samples[k]`, to a [`Monomial`]. Candidate factors
/// are tried in order; `None` (no quantum integer) first.
pub fn fit(vars: &[String], samples: &[Bindings], values: &[Rational], factors: &[ColorExpr]) -> Option<Monomial> {
    let candidates = std::iter::once(None).chain(factors.iter().cloned().map(Some));
    'cand: for factor in candidates {
        let mut mono = Vec::new();
        for (b, v) in samples.iter().zip(values) {
            let q = match &factor {
                None => v.clone(),
                Some(f) => {
                    let k = f.eval(b).ok()?;
                    if k <= 0 {
                        continue 'cand;
                    }
                    match v.checked_div(&Rational::from(qint(k))) {
                        Ok(q) => q,
                        Err(_) => continue 'cand,
                    }
                }
            };
            match as_monomial(&q) {
                Some(m) => mono.push(m),
                None => continue 'cand,
            }
        }
        let coeff = mono[0].0.clone();
        if mono.iter().any(|(c, _)| *c != coeff) {
            continue;
        }
        // samples[0] is all ones and samples[1 + k] raises variable k
        let slopes: Vec<i64> = (0..vars.len()).map(|k| mono[1 + k].1 - mono[0].1).collect();
        let constant = mono[0].1 - slopes.iter().sum::<i64>();
        let mut terms = BTreeMap::new();
        for (v, &s) in vars.iter().zip(&slopes) {
            if s != 0 {
                terms.insert(v.clone(), s);
            }
        }
        let exponent = ColorExpr { constant, terms };
        if samples.iter().zip(&mono).any(|(b, (_, e))| exponent.eval(b).ok() != Some(*e)) {
            continue;
        }
        return Some(Monomial { coeff, exponent, factor });
    }
    None
}

fn linear(e: &ColorExpr, divide: i64) -> String {
    let mut s = String::new();
    let parts = e
        .terms
        .iter()
        .map(|(v, c)| (c / divide, v.as_str()))
        .chain((e.constant != 0).then_some((e.constant / divide, "")));
    for (c, v) in parts {
        let mag = c.abs();
        if c < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if mag != 1 || v.is_empty() {
            s.push_str(&mag.to_string());
        }
        s.push_str(v);
    }
    s
}

/// `t^{...}` for an exponent in quarter powers of `t`; empty for `t^0`.
pub fn t_power(e: &ColorExpr) -> String {
    let g = e.terms.values().fold(e.constant.gcd(&4), |g, c| g.gcd(c));
    if e.constant == 0 && e.terms.is_empty() {
        return String::new();
    }
    let den = 4 / g;
    let num = linear(e, g);
    let single = e.terms.len() + (e.constant != 0) as usize == 1;
    match (den, single) {
        (1, true) if num == "1" => "t".into(),
        (1, _) => format!("t^{{{num}}}"),
        (_, true) => format!("t^{{{num}/{den}}}"),
        _ => format!("t^{{({num})/{den}}}"),
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = t_power(&self.exponent);
        let bracket = self.factor.as_ref().map(|e| format!("[{e}]")).unwrap_or_default();
        let one = BigInt::from(1);
        let body = format!("{t}{bracket}");
        if self.coeff == -one.clone() {
            write!(f, "-")?;
        } else if self.coeff != one || body.is_empty() {
            write!(f, "{}", self.coeff)?;
        }
        write!(f, "{body}")
    }
}

/// `t`-power rendering of a Laurent polynomial in `q = t^{1/4}`.
pub fn t_form(p: &Laurent) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (n, (e, c)) in p.terms().enumerate() {
        let neg = c < &BigInt::from(0);
        let mag = if neg { -c.clone() } else { c.clone() };
        match (n, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        let t = t_power(&ColorExpr::constant(e));
        if t.is_empty() {
            s.push_str(&mag.to_string());
        } else {
            if mag != BigInt::from(1) {
                s.push_str(&format!("{mag}*"));
            }
            s.push_str(&t);
        }
    }
    s
}

/// `p` with quantum-integer factors `[k]`, `k ≥ 2`, pulled out greedily from
/// the largest `k`; `None` when there is none.
pub fn factored(p: &Laurent) -> Option<String> {
    let mut rest = p.clone();
    let mut ks = Vec::new();
    for k in (2..=16i64).rev() {
        while let Ok(x) = rest.exact_div(&qint(k)) {
            if x.is_zero() {
                break;
            }
            rest = x;
            ks.push(k);
        }
    }
    if ks.is_empty() {
        return None;
    }
    ks.reverse();
    let mut s = if rest.is_one() { String::new() } else { format!("({})", t_form(&rest)) };
    for k in ks {
        s += &format!("({})", t_form(&qint(k)));
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expr(s: &str) -> ColorExpr {
        s.parse().unwrap()
    }

    #[test]
    fn exponents_render_as_fractions() {
        assert_eq!(t_power(&expr("6*i+6*j")), "t^{(3i+3j)/2}");
        assert_eq!(t_power(&expr("2*j-2*i")), "t^{(-i+j)/2}");
        assert_eq!(t_power(&expr("4*i")), "t^{i}");
        assert_eq!(t_power(&expr("2")), "t^{1/2}");
        assert_eq!(t_power(&expr("-1")), "t^{-1/4}");
        assert_eq!(t_power(&expr("0")), "");
        assert_eq!(t_power(&expr("4")), "t");
    }

    #[test]
    fn t_form_of_a_polynomial() {
        let p: Laurent = "-1*q^-6 + 1*q^-2 + 3*q^2 - 1*q^6 - 1*q^10 + 1*q^14".parse().unwrap();
        assert_eq!(t_form(&p), "-t^{-3/2} + t^{-1/2} + 3*t^{1/2} - t^{3/2} - t^{5/2} + t^{7/2}");
    }

    #[test]
    fn factored_form() {
        let p: Laurent = "-1*q^-6 + 1*q^-2 + 3*q^2 - 1*q^6 - 1*q^10 + 1*q^14".parse().unwrap();
        assert_eq!(factored(&p).unwrap(), "(-t^{-1} + 2 + t - 2*t^{2} + t^{3})(t^{-1/2} + t^{1/2})");
        assert_eq!(factored(&Laurent::one()), None);
        assert_eq!(factored(&(&qint(3) * &qint(2))).unwrap(), "(t^{-1/2} + t^{1/2})(t^{-1} + 1 + t)");
    }

    #[test]
    fn fits_a_signed_quantum_monomial() {
        let vars = vec!["i".to_string(), "j".to_string()];
        let samples = sample_bindings(&vars);
        let values: Vec<Rational> = samples
            .iter()
            .map(|b| {
                let (i, j) = (b["i"], b["j"]);
                Rational::from(-(&Laurent::t_half(i + 3 * j) * &qint(i + j)))
            })
            .collect();
        let m = fit(&vars, &samples, &values, &[expr("i"), expr("i+j")]).unwrap();
        assert_eq!(m.to_string(), "-t^{(i+3j)/2}[i+j]");
    }

    #[test]
    fn no_fit_for_a_sum_of_monomials() {
        let vars = vec!["i".to_string()];
        let samples = sample_bindings(&vars);
        let values: Vec<Rational> =
            samples.iter().map(|b| Rational::from(&Laurent::t_half(b["i"]) + &Laurent::one())).collect();
        assert_eq!(fit(&vars, &samples, &values, &[expr("i")]), None);
    }
}
