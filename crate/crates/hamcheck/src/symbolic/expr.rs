//! Exact rational functions over jet symbols and parameters — the universal
//! scalar of the engine.
//!
//! Every expression is held in a canonical form: numerator and denominator
//! are coprime (multivariate GCD removed), both have coprime integer
//! coefficients jointly, and the denominator's leading coefficient under the
//! global graded-lexicographic order is positive. Equality of canonical forms
//! is structural, which is what makes `is_zero` (and hence every verdict in
//! the engine) decidable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::poly::{poly_gcd, rat_int, Poly, Rat};
use super::symbol::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolicError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution makes a denominator identically zero")]
    SubstitutionZeroDenominator,
}

/// Exact multivariate rational function in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalExpr {
    num: Poly,
    den: Poly,
}

impl RationalExpr {
    pub fn zero() -> Self {
        RationalExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RationalExpr {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_int(i: i64) -> Self {
        RationalExpr {
            num: Poly::from_int(i),
            den: Poly::one(),
        }
    }

    pub fn from_rat(c: Rat) -> Self {
        RationalExpr::from_poly(Poly::constant(c))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational literal with zero denominator");
        RationalExpr::from_poly(Poly::constant(Rat::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn symbol(s: Symbol) -> Self {
        RationalExpr {
            num: Poly::symbol(s),
            den: Poly::one(),
        }
    }

    pub fn u(i: u32) -> Self {
        RationalExpr::symbol(Symbol::u(i))
    }

    pub fn u_jet(i: u32, order: u32) -> Self {
        RationalExpr::symbol(Symbol::u_jet(i, order))
    }

    pub fn p(i: u32) -> Self {
        RationalExpr::symbol(Symbol::p(i))
    }

    pub fn p_jet(i: u32, order: u32) -> Self {
        RationalExpr::symbol(Symbol::p_jet(i, order))
    }

    pub fn param(name: &str) -> Self {
        RationalExpr::symbol(Symbol::param(name))
    }

    pub fn from_poly(num: Poly) -> Self {
        RationalExpr {
            num,
            den: Poly::one(),
        }
    }

    /// Canonicalizing constructor: reduces to lowest terms and normalizes the
    /// coefficient scale. The one place canonical form is established;
    /// idempotent by construction.
    pub fn new(num: Poly, den: Poly) -> Result<Self, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalExpr::zero());
        }
        let (mut num, mut den) = (num, den);
        let g = poly_gcd(&num, &den);
        if !g.is_one() {
            num = num.divide_exact(&g).expect("gcd divides numerator");
            den = den.divide_exact(&g).expect("gcd divides denominator");
        }
        // joint integer normalization with positive leading den coefficient
        let mut denom_lcm = BigInt::one();
        let mut numer_gcd = BigInt::zero();
        for (_, c) in num.terms().iter().chain(den.terms().iter()) {
            denom_lcm = denom_lcm.lcm(c.denom());
            numer_gcd = numer_gcd.gcd(c.numer());
        }
        let mut f = Rat::new(denom_lcm, numer_gcd);
        if (den.leading().unwrap().1.clone() * &f).is_negative() {
            f = -f;
        }
        Ok(RationalExpr {
            num: num.scale(&f),
            den: den.scale(&f),
        })
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn contains_symbol_where(&self, pred: impl Fn(&Symbol) -> bool + Copy) -> bool {
        self.num.contains_symbol_where(pred) || self.den.contains_symbol_where(pred)
    }

    pub fn add_expr(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RationalExpr::new(self.num.add(&other.num), self.den.clone())
                .expect("nonzero denominator");
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RationalExpr::new(num, den).expect("nonzero denominator")
    }

    pub fn sub_expr(&self, other: &Self) -> Self {
        self.add_expr(&other.neg_expr())
    }

    pub fn neg_expr(&self) -> Self {
        RationalExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul_expr(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RationalExpr::zero();
        }
        RationalExpr::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    pub fn div_expr(&self, other: &Self) -> Result<Self, SymbolicError> {
        if other.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        RationalExpr::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.mul_expr(&RationalExpr::from_rat(c.clone()))
    }

    /// Integer power; negative exponents invert (error on zero base).
    pub fn pow_expr(&self, k: i64) -> Result<Self, SymbolicError> {
        if k < 0 && self.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        let mag = k.unsigned_abs() as u32;
        let num = self.num.pow(mag);
        let den = self.den.pow(mag);
        if k >= 0 {
            RationalExpr::new(num, den)
        } else {
            RationalExpr::new(den, num)
        }
    }

    /// Exact partial derivative, treating distinct jet symbols as independent
    /// coordinates.
    pub fn partial_diff(&self, s: &Symbol) -> Self {
        if self.den.is_one() {
            return RationalExpr::from_poly(self.num.partial(s));
        }
        let num = self
            .num
            .partial(s)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.partial(s)));
        let den = self.den.mul(&self.den);
        RationalExpr::new(num, den).expect("nonzero denominator")
    }

    /// One-pass simultaneous substitution; bindings may mention the symbols
    /// being replaced.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<Symbol, RationalExpr>,
    ) -> Result<Self, SymbolicError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let num = eval_poly(&self.num, bindings)?;
        let den = eval_poly(&self.den, bindings)?;
        if den.is_zero() {
            return Err(SymbolicError::SubstitutionZeroDenominator);
        }
        num.div_expr(&den)
    }

    /// Numeric evaluation for spot checks in tests: every symbol must be bound
    /// to a rational number.
    pub fn eval_rat(&self, bindings: &BTreeMap<Symbol, Rat>) -> Result<Rat, SymbolicError> {
        let map: BTreeMap<Symbol, RationalExpr> = bindings
            .iter()
            .map(|(s, c)| (s.clone(), RationalExpr::from_rat(c.clone())))
            .collect();
        let e = self.substitute(&map)?;
        e.as_rat().ok_or(SymbolicError::SubstitutionZeroDenominator)
    }
}

fn eval_poly(
    p: &Poly,
    bindings: &BTreeMap<Symbol, RationalExpr>,
) -> Result<RationalExpr, SymbolicError> {
    let mut acc = RationalExpr::zero();
    for (m, c) in p.terms() {
        let mut term = RationalExpr::from_rat(c.clone());
        for (s, e) in m.factors() {
            let base = match bindings.get(s) {
                Some(b) => b.clone(),
                None => RationalExpr::symbol(s.clone()),
            };
            term = term.mul_expr(&base.pow_expr(*e as i64)?);
        }
        acc = acc.add_expr(&term);
    }
    Ok(acc)
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        self.add_expr(rhs)
    }
}

impl Sub for &RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        self.sub_expr(rhs)
    }
}

impl Mul for &RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        self.mul_expr(rhs)
    }
}

impl Div for &RationalExpr {
    type Output = RationalExpr;
    fn div(self, rhs: &RationalExpr) -> RationalExpr {
        self.div_expr(rhs).expect("division by zero expression")
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        self.neg_expr()
    }
}

/// Sum of expressions.
pub fn sum<'a>(items: impl IntoIterator<Item = &'a RationalExpr>) -> RationalExpr {
    items
        .into_iter()
        .fold(RationalExpr::zero(), |acc, e| acc.add_expr(e))
}

pub fn int(i: i64) -> RationalExpr {
    RationalExpr::from_int(i)
}

#[allow(unused)]
pub fn rat_expr(num: i64, den: i64) -> RationalExpr {
    RationalExpr::from_rat(rat_int(num) / rat_int(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(i: u32) -> RationalExpr {
        RationalExpr::u(i)
    }

    #[test]
    fn canonical_reduction_and_normalization() {
        // (u1^2 - 1/u1^2) / 2  ->  (u1^4 - 1) / (2 u1^2)
        let e = &(&u(1).pow_expr(2).unwrap() - &u(1).pow_expr(-2).unwrap())
            / &RationalExpr::from_int(2);
        assert_eq!(e.to_string(), "(u1^4-1)/(2*u1^2)");
        // evaluate at u1 = 2: 63/8
        let mut b = BTreeMap::new();
        b.insert(Symbol::u(1), rat_int(2));
        assert_eq!(e.eval_rat(&b).unwrap(), rat_int(63) / rat_int(8));
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let e = &(&u(1) + &u(2)).pow_expr(3).unwrap() / &(&u(1) - &u(2));
        let again = RationalExpr::new(e.numerator().clone(), e.denominator().clone()).unwrap();
        assert_eq!(e, again);
    }

    #[test]
    fn subtraction_of_self_is_zero() {
        let e = &(&u(1) * &u(2)) / &(&u(1) + &RationalExpr::one());
        assert!((&e - &e).is_zero());
    }

    #[test]
    fn quotient_rule_partial() {
        // d/du1 [(u1^4 - 1)/(2 u1^2)] = (u1^4 + 1)/u1^3
        let e = &(&u(1).pow_expr(4).unwrap() - &RationalExpr::one())
            / &(&RationalExpr::from_int(2) * &u(1).pow_expr(2).unwrap());
        let d = e.partial_diff(&Symbol::u(1));
        assert_eq!(d.to_string(), "(u1^4+1)/(u1^3)");
        let mut b = BTreeMap::new();
        b.insert(Symbol::u(1), rat_int(2));
        assert_eq!(d.eval_rat(&b).unwrap(), rat_int(17) / rat_int(8));
    }

    #[test]
    fn partial_of_parameter_is_zero() {
        let c = RationalExpr::param("c");
        assert!(c.partial_diff(&Symbol::u(1)).is_zero());
        // d(8 u1)/du1 = 8
        let e = &RationalExpr::from_int(8) * &u(1);
        assert_eq!(e.partial_diff(&Symbol::u(1)), RationalExpr::from_int(8));
    }

    #[test]
    fn simultaneous_substitution() {
        // u1*u2 with u1 -> u2 gives u2^2
        let e = &u(1) * &u(2);
        let mut b = BTreeMap::new();
        b.insert(Symbol::u(1), u(2));
        assert_eq!(e.substitute(&b).unwrap(), u(2).pow_expr(2).unwrap());

        // 1/u1 with u1 -> u1 + 1 gives 1/(u1+1); binding mentions the
        // replaced symbol, which one-pass substitution permits
        let inv = RationalExpr::one().div_expr(&u(1)).unwrap();
        let mut b2 = BTreeMap::new();
        b2.insert(Symbol::u(1), &u(1) + &RationalExpr::one());
        let r = inv.substitute(&b2).unwrap();
        assert_eq!(r.to_string(), "(1)/(u1+1)");

        // swap u1 <-> u2 simultaneously
        let mut b3 = BTreeMap::new();
        b3.insert(Symbol::u(1), u(2));
        b3.insert(Symbol::u(2), u(1));
        let swapped = (&u(1) - &u(2)).substitute(&b3).unwrap();
        assert_eq!(swapped, &u(2) - &u(1));
    }

    #[test]
    fn substitution_zero_denominator_is_reported() {
        let inv = RationalExpr::one().div_expr(&u(1)).unwrap();
        let mut b = BTreeMap::new();
        b.insert(Symbol::u(1), RationalExpr::zero());
        assert_eq!(
            inv.substitute(&b).unwrap_err(),
            SymbolicError::SubstitutionZeroDenominator
        );
    }

    #[test]
    fn mixed_partials_commute() {
        let e = &(&u(1).pow_expr(3).unwrap() * &u(2)) / &(&u(2) + &RationalExpr::one());
        let d12 = e.partial_diff(&Symbol::u(1)).partial_diff(&Symbol::u(2));
        let d21 = e.partial_diff(&Symbol::u(2)).partial_diff(&Symbol::u(1));
        assert_eq!(d12, d21);
    }
}
