//! Exact Laurent polynomials in `q = t^{1/4}` and rational functions over them.
//!
//! Every quantity the invariant needs (`t^{k/4}`, `t^{k/2}`, quantum integers) is an
//! integer power series in `q`, so one variable with integer exponents covers it.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Signed;
use thiserror::Error;

/// Coefficient ring: any exact signed integer type.
pub trait Coeff: Clone + fmt::Debug + fmt::Display + FromStr + Integer + Signed + Send + Sync + 'static {}

impl<T> Coeff for T where T: Clone + fmt::Debug + fmt::Display + FromStr + Integer + Signed + Send + Sync + 'static {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division is not exact in the Laurent ring")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// `sum_k coeffs[k] * q^(low + k)`, trimmed so that the first and last stored
/// coefficients are nonzero. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C> {
    low: i64,
    coeffs: Vec<C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        Self { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    /// `c * q^e`
    pub fn monomial(c: C, e: i64) -> Self {
        Self::from_dense(e, vec![c])
    }

    /// `q^e`
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(C::one(), e)
    }

    /// `t^(num/2) = q^(2 num)`
    pub fn t_half(num: i64) -> Self {
        Self::q_pow(2 * num)
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_dense(low: i64, coeffs: Vec<C>) -> Self {
        let mut p = Self { low, coeffs };
        p.trim();
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I) -> Self {
        let terms: Vec<(i64, C)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = slot.clone() + c;
        }
        Self::from_dense(lo, coeffs)
    }

    fn trim(&mut self) {
        let Some(last) = self.coeffs.iter().rposition(|c| !c.is_zero()) else {
            self.coeffs.clear();
            self.low = 0;
            return;
        };
        self.coeffs.truncate(last + 1);
        let first = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if first > 0 {
            self.coeffs.drain(..first);
            self.low += first as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> C {
        let k = e - self.low;
        if k < 0 || k >= self.coeffs.len() as i64 {
            C::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// Nonzero terms `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (self.low + k as i64, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn trailing_coeff(&self) -> Option<&C> {
        self.coeffs.first()
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_dense(self.low, self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// A single nonzero term.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// `+-q^k`, the units of the ring.
    pub fn is_unit(&self) -> bool {
        self.is_monomial() && self.coeffs[0].abs().is_one()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `q -> q^{-1}` (equivalently `t -> t^{-1}`).
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let hi = self.max_exp().unwrap();
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { low: -hi, coeffs }
    }

    /// Sum of all coefficients, i.e. the value at `t = 1`.
    pub fn eval_at_one(&self) -> C {
        self.coeffs.iter().fold(C::zero(), |a, c| a + c.clone())
    }

    /// All coefficients are `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Every exponent is divisible by `k`.
    pub fn exponents_divisible_by(&self, k: i64) -> bool {
        self.terms().all(|(e, _)| e.rem_euclid(k) == 0)
    }

    /// Dense coefficient vector of `q^{-low} * self` (an honest polynomial).
    fn poly_part(&self) -> Vec<C> {
        self.coeffs.clone()
    }

    /// Exact quotient `a / b` in `Z[q, q^{-1}]`.
    pub fn exact_div(&self, b: &Self) -> Result<Self, LaurentError> {
        if b.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // Both dense parts have nonzero constant terms, and `b`'s dense part is
        // coprime to q, so divisibility is ordinary polynomial divisibility.
        let (quot, rem) = poly_divrem_exact(&self.poly_part(), &b.poly_part());
        if !rem {
            return Err(LaurentError::NotDivisible);
        }
        Ok(Self::from_dense(self.low - b.low, quot))
    }

    /// Content: gcd of all coefficients (nonnegative).
    pub fn content(&self) -> C {
        self.coeffs.iter().fold(C::zero(), |g, c| g.gcd(c))
    }
}

/// Long division of dense polynomials (ascending order, index = degree).
/// Returns the quotient and whether the remainder is zero; bails out as soon as
/// a leading coefficient fails to divide.
fn poly_divrem_exact<C: Coeff>(a: &[C], b: &[C]) -> (Vec<C>, bool) {
    if a.len() < b.len() {
        return (Vec::new(), a.iter().all(|c| c.is_zero()));
    }
    let mut rem: Vec<C> = a.to_vec();
    let lb = b.last().unwrap().clone();
    let n = a.len() - b.len() + 1;
    let mut quot = vec![C::zero(); n];
    for k in (0..n).rev() {
        let top = rem[k + b.len() - 1].clone();
        if top.is_zero() {
            continue;
        }
        let (qc, r) = top.div_rem(&lb);
        if !r.is_zero() {
            return (Vec::new(), false);
        }
        for (i, bc) in b.iter().enumerate() {
            let v = rem[k + i].clone() - qc.clone() * bc.clone();
            rem[k + i] = v;
        }
        quot[k] = qc;
    }
    let ok = rem.iter().all(|c| c.is_zero());
    (quot, ok)
}

/// `[k] = (t^{k/2} - t^{-k/2}) / (t^{1/2} - t^{-1/2})`, for `k >= 0`.
pub fn quantum_int<C: Coeff>(k: i64) -> LaurentPoly<C> {
    if k < 0 {
        return -quantum_int::<C>(-k);
    }
    // t^{(k-1-2m)/2} = q^{2(k-1-2m)}
    LaurentPoly::from_terms((0..k).map(|m| (2 * (k - 1 - 2 * m), C::one())))
}

/// `{k} = t^{k/2} - t^{-k/2}`.
pub fn brace_int<C: Coeff>(k: i64) -> LaurentPoly<C> {
    LaurentPoly::from_terms([(2 * k, C::one()), (-2 * k, -C::one())])
}

impl<C: Coeff> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

fn add_dense<C: Coeff>(a: &LaurentPoly<C>, b: &LaurentPoly<C>, negate_b: bool) -> LaurentPoly<C> {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b.clone() } else { b.clone() };
    }
    let lo = a.low.min(b.low);
    let hi = a.max_exp().unwrap().max(b.max_exp().unwrap());
    let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
    for (k, c) in a.coeffs.iter().enumerate() {
        coeffs[(a.low - lo) as usize + k] = c.clone();
    }
    for (k, c) in b.coeffs.iter().enumerate() {
        let slot = &mut coeffs[(b.low - lo) as usize + k];
        *slot = if negate_b { slot.clone() - c.clone() } else { slot.clone() + c.clone() };
    }
    LaurentPoly::from_dense(lo, coeffs)
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        add_dense(self, rhs, false)
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        add_dense(self, rhs, true)
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let slot = &mut coeffs[i + j];
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        LaurentPoly::from_dense(self.low + rhs.low, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: Self) -> LaurentPoly<C> {
                (&self).$m(&rhs)
            }
        }
        impl<C: Coeff> $tr<&LaurentPoly<C>> for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> AddAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn add_assign(&mut self, rhs: &LaurentPoly<C>) {
        *self = &*self + rhs;
    }
}

impl<C: Coeff> SubAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn sub_assign(&mut self, rhs: &LaurentPoly<C>) {
        *self = &*self - rhs;
    }
}

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        Self { low: self.low, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -self.clone()
    }
}

impl<C: Coeff> std::iter::Sum for LaurentPoly<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<C: Coeff> std::iter::Product for LaurentPoly<C> {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}

/// Canonical form: `c*q^e` terms in ascending order joined by ` + ` / ` - `;
/// the `q^0` term is the bare integer; zero is `0`.
impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms().enumerate() {
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*q^{e}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Parses the canonical form. Also tolerates a bare `q^e` and `q` without a
/// coefficient, since hand-written fixtures use them.
impl<C: Coeff> FromStr for LaurentPoly<C> {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LaurentError::Parse(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut sign_neg = false;
        let mut rest = s;
        if let Some(r) = rest.strip_prefix('-') {
            sign_neg = true;
            rest = r;
        }
        loop {
            let cut = rest.find(" + ").into_iter().chain(rest.find(" - ")).min();
            let (tok, next) = match cut {
                Some(k) => (&rest[..k], Some((&rest[k + 3..], &rest[k + 1..k + 2] == "-"))),
                None => (rest, None),
            };
            let tok = tok.trim();
            let (cs, es) = match tok.find('q') {
                Some(k) => {
                    let cs = tok[..k].trim_end_matches('*');
                    let es = &tok[k + 1..];
                    let e = if es.is_empty() {
                        1
                    } else {
                        es.strip_prefix('^').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?
                    };
                    (cs, e)
                }
                None => (tok, 0),
            };
            let mut c = if cs.is_empty() { C::one() } else { cs.parse::<C>().map_err(|_| bad())? };
            if c.is_negative() {
                return Err(bad());
            }
            if sign_neg {
                c = -c;
            }
            terms.push((es, c));
            match next {
                Some((r, neg)) => {
                    rest = r;
                    sign_neg = neg;
                }
                None => break,
            }
        }
        Ok(Self::from_terms(terms))
    }
}

// ---------------------------------------------------------------------------
// Polynomial gcd over Z (primitive remainder sequence)

fn dense_content<C: Coeff>(p: &[C]) -> C {
    p.iter().fold(C::zero(), |g, c| g.gcd(c))
}

fn dense_trim<C: Coeff>(p: &mut Vec<C>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn primitive<C: Coeff>(p: &[C]) -> Vec<C> {
    let g = dense_content(p);
    if g.is_zero() || g.is_one() {
        return p.to_vec();
    }
    p.iter().map(|c| c.clone() / g.clone()).collect()
}

/// Pseudo-remainder of `a` by `b` (both nonzero, dense ascending).
fn pseudo_rem<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = c.clone() * lb.clone();
        }
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].clone() - lr.clone() * bc.clone();
        }
        dense_trim(&mut r);
    }
    r
}

/// gcd in `Z[x]`, normalized with a positive leading coefficient.
fn poly_gcd<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    dense_trim(&mut a);
    dense_trim(&mut b);
    if a.is_empty() {
        return normalize_sign(primitive(&b), &dense_content(&b));
    }
    if b.is_empty() {
        return normalize_sign(primitive(&a), &dense_content(&a));
    }
    let g = dense_content(&a).gcd(&dense_content(&b));
    let mut x = primitive(&a);
    let mut y = primitive(&b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { primitive(&r) };
    }
    normalize_sign(x, &g)
}

fn normalize_sign<C: Coeff>(mut p: Vec<C>, scale: &C) -> Vec<C> {
    if p.last().is_some_and(|c| c.is_negative()) {
        p = p.into_iter().map(|c| -c).collect();
    }
    p.into_iter().map(|c| c * scale.clone()).collect()
}

/// gcd of two Laurent polynomials as elements of `Z[q, q^{-1}]`, normalized
/// to lowest exponent 0 and positive leading coefficient.
pub fn laurent_gcd<C: Coeff>(a: &LaurentPoly<C>, b: &LaurentPoly<C>) -> LaurentPoly<C> {
    LaurentPoly::from_dense(0, poly_gcd(&a.poly_part(), &b.poly_part()))
}

// ---------------------------------------------------------------------------
// Rational functions

/// A quotient of Laurent polynomials kept in lowest terms: the denominator has
/// lowest exponent 0 and a positive lowest coefficient, and shares no factor
/// with the numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunc<C> {
    num: LaurentPoly<C>,
    den: LaurentPoly<C>,
}

impl<C: Coeff> RationalFunc<C> {
    pub fn new(num: LaurentPoly<C>, den: LaurentPoly<C>) -> Result<Self, LaurentError> {
        if den.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: LaurentPoly<C>, den: LaurentPoly<C>) -> Self {
        if num.is_zero() {
            return Self { num, den: LaurentPoly::one() };
        }
        let g = laurent_gcd(&num, &den);
        let mut num = num.exact_div(&g).expect("gcd divides numerator");
        let mut den = den.exact_div(&g).expect("gcd divides denominator");
        let s = den.min_exp().unwrap();
        num = num.shift(-s);
        den = den.shift(-s);
        if den.trailing_coeff().unwrap().is_negative() {
            num = -num;
            den = -den;
        }
        Self { num, den }
    }

    pub fn from_poly(p: LaurentPoly<C>) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn numerator(&self) -> &LaurentPoly<C> {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(p)` when the value is a Laurent polynomial.
    pub fn as_poly(&self) -> Option<LaurentPoly<C>> {
        if self.den.is_unit() {
            let c = self.den.trailing_coeff().unwrap().clone();
            let e = self.den.min_exp().unwrap();
            // den = +-q^e, but normalization already fixed den to 1
            Some(if c.is_negative() { -self.num.shift(-e) } else { self.num.shift(-e) })
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self, LaurentError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, LaurentError> {
        if rhs.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Value at `t = 1` as a fraction `(num(1), den(1))`.
    pub fn eval_at_one(&self) -> (C, C) {
        (self.num.eval_at_one(), self.den.eval_at_one())
    }

    pub fn invert_variable(&self) -> Self {
        Self::normalized(self.num.invert_variable(), self.den.invert_variable())
    }
}

impl<C: Coeff> From<LaurentPoly<C>> for RationalFunc<C> {
    fn from(p: LaurentPoly<C>) -> Self {
        Self::from_poly(p)
    }
}

impl<C: Coeff> Add for &RationalFunc<C> {
    type Output = RationalFunc<C>;
    fn add(self, rhs: Self) -> RationalFunc<C> {
        if self.den == rhs.den {
            return RationalFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunc::normalized(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den)
    }
}

impl<C: Coeff> Sub for &RationalFunc<C> {
    type Output = RationalFunc<C>;
    fn sub(self, rhs: Self) -> RationalFunc<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Mul for &RationalFunc<C> {
    type Output = RationalFunc<C>;
    fn mul(self, rhs: Self) -> RationalFunc<C> {
        RationalFunc::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<C: Coeff> Neg for &RationalFunc<C> {
    type Output = RationalFunc<C>;
    fn neg(self) -> RationalFunc<C> {
        RationalFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl<C: Coeff> Neg for RationalFunc<C> {
    type Output = RationalFunc<C>;
    fn neg(self) -> RationalFunc<C> {
        -&self
    }
}

macro_rules! forward_owned_rf {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for RationalFunc<C> {
            type Output = RationalFunc<C>;
            fn $m(self, rhs: Self) -> RationalFunc<C> {
                (&self).$m(&rhs)
            }
        }
        impl<C: Coeff> $tr<&RationalFunc<C>> for RationalFunc<C> {
            type Output = RationalFunc<C>;
            fn $m(self, rhs: &RationalFunc<C>) -> RationalFunc<C> {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned_rf!(Add, add);
forward_owned_rf!(Sub, sub);
forward_owned_rf!(Mul, mul);

impl<C: Coeff> std::iter::Sum for RationalFunc<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<C: Coeff> fmt::Display for RationalFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<C: Coeff> fmt::Debug for RationalFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunc({self})")
    }
}

/// Orders polynomials by their canonical term list; only used for
/// deterministic sorting, not as an algebraic order.
impl<C: Coeff> PartialOrd for LaurentPoly<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: Coeff> Ord for LaurentPoly<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        let a: Vec<(i64, &C)> = self.terms().collect();
        let b: Vec<(i64, &C)> = other.terms().collect();
        a.cmp(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = LaurentPoly<BigInt>;

    fn p(s: &str) -> P {
        s.parse().unwrap()
    }

    #[test]
    fn format_and_parse() {
        let x = P::from_terms([(-2, BigInt::from(-3)), (0, BigInt::from(1)), (4, BigInt::from(2))]);
        assert_eq!(x.to_string(), "-3*q^-2 + 1 + 2*q^4");
        assert_eq!(p("-3*q^-2 + 1 + 2*q^4"), x);
        assert_eq!(P::zero().to_string(), "0");
        assert_eq!(p("q^3 - q"), P::from_terms([(3, 1.into()), (1, (-1).into())]));
    }

    #[test]
    fn quantum_integers() {
        assert!(quantum_int::<BigInt>(0).is_zero());
        assert!(quantum_int::<BigInt>(1).is_one());
        assert_eq!(quantum_int::<BigInt>(2), p("1*q^-2 + 1*q^2"));
        for k in 1..8 {
            assert_eq!(&quantum_int::<BigInt>(k) * &brace_int(1), brace_int(k));
        }
    }

    #[test]
    fn exact_division() {
        assert_eq!(brace_int::<BigInt>(2).exact_div(&brace_int(1)).unwrap(), quantum_int(2));
        assert_eq!(brace_int::<BigInt>(1).exact_div(&brace_int(2)), Err(LaurentError::NotDivisible));
    }

    #[test]
    fn rational_normalization() {
        let half = RationalFunc::new(P::one(), quantum_int(2)).unwrap();
        let two = &half + &half;
        assert_eq!(two, RationalFunc::new(P::constant(2.into()), quantum_int(2)).unwrap());
        let r = RationalFunc::<BigInt>::new(brace_int(2), brace_int(1)).unwrap();
        assert_eq!(r.as_poly(), Some(quantum_int(2)));
        let a = RationalFunc::<BigInt>::new(quantum_int(3), quantum_int(1)).unwrap();
        let b = RationalFunc::new(quantum_int(1), quantum_int(3)).unwrap();
        assert_eq!(&a * &b, RationalFunc::one());
    }
}
