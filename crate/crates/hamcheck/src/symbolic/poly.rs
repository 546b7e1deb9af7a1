//! Sparse multivariate polynomials over the rationals, with the exact
//! operations the scalar domain is built on: arithmetic, partial derivatives,
//! exact division and a multivariate GCD (primitive pseudo-remainder
//! sequences). Terms are kept expanded and sorted in descending
//! graded-lexicographic order, which makes equality structural.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::symbol::Symbol;

/// Exact rational coefficient.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from(BigInt::from(num))
}

/// Power product of symbols; factors sorted by the global symbol order,
/// exponents strictly positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    factors: Vec<(Symbol, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: vec![] }
    }

    pub fn symbol(s: Symbol) -> Self {
        Monomial {
            factors: vec![(s, 1)],
        }
    }

    pub fn from_factors(mut factors: Vec<(Symbol, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        // merge duplicates
        let mut merged: Vec<(Symbol, u32)> = Vec::with_capacity(factors.len());
        for (s, e) in factors {
            match merged.last_mut() {
                Some((ls, le)) if *ls == s => *le += e,
                _ => merged.push((s, e)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.factors
    }

    pub fn total_degree(&self) -> u64 {
        self.factors.iter().map(|(_, e)| *e as u64).sum()
    }

    pub fn degree_of(&self, s: &Symbol) -> u32 {
        self.factors
            .iter()
            .find(|(t, _)| t == s)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            match self.factors[i].0.cmp(&other.factors[j].0) {
                Ordering::Less => {
                    out.push(self.factors[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.factors[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.factors[i].0.clone(), self.factors[i].1 + other.factors[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Componentwise quotient, if every exponent of `other` fits under `self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        for (s, e) in &self.factors {
            let mut e_out = *e;
            while j < other.factors.len() && other.factors[j].0 < *s {
                return None; // divisor has a symbol we lack
            }
            if j < other.factors.len() && other.factors[j].0 == *s {
                let d = other.factors[j].1;
                if d > *e {
                    return None;
                }
                e_out = *e - d;
                j += 1;
            }
            if e_out > 0 {
                out.push((s.clone(), e_out));
            }
        }
        if j < other.factors.len() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    /// Componentwise minimum (the largest common divisor of two monomials).
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            match self.factors[i].0.cmp(&other.factors[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((
                        self.factors[i].0.clone(),
                        self.factors[i].1.min(other.factors[j].1),
                    ));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial { factors: out }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: self.factors.iter().map(|(s, e)| (s.clone(), e * k)).collect(),
        }
    }

    /// Graded-lexicographic comparison: total degree first, then the earliest
    /// symbol (in the global order) with differing exponent decides, higher
    /// exponent winning.
    pub fn cmp_graded_lex(&self, other: &Monomial) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.factors.get(i), other.factors.get(j)) {
                (None, None) => return Ordering::Equal,
                // a symbol only present on one side: that side has a positive
                // exponent at the earliest difference
                (Some((sa, _)), Some((sb, _))) => match sa.cmp(sb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        match self.factors[i].1.cmp(&other.factors[j].1) {
                            Ordering::Equal => {}
                            ord => return ord,
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_graded_lex(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (s, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{s}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Multivariate polynomial; terms sorted descending by graded-lex order,
/// no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    terms: Vec<(Monomial, Rat)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn from_int(i: i64) -> Self {
        Poly::constant(rat_int(i))
    }

    pub fn symbol(s: Symbol) -> Self {
        Poly {
            terms: vec![(Monomial::symbol(s), Rat::one())],
        }
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds from unsorted terms, merging duplicates.
    pub fn from_terms(terms: Vec<(Monomial, Rat)>) -> Self {
        let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(m).or_insert_with(Rat::zero);
            *entry += c;
        }
        let mut out: Vec<(Monomial, Rat)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.reverse(); // BTreeMap ascending -> descending
        Poly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    /// Leading term under graded-lex (the first stored).
    pub fn leading(&self) -> Option<&(Monomial, Rat)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, s: &Symbol) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_of(s)).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for (m, _) in &self.terms {
            for (s, _) in m.factors() {
                out.insert(s.clone());
            }
        }
        out
    }

    pub fn contains_symbol_where(&self, pred: impl Fn(&Symbol) -> bool) -> bool {
        self.terms
            .iter()
            .any(|(m, _)| m.factors().iter().any(|(s, _)| pred(s)))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp_graded_lex(&other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, k)| (t.mul(m), k * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_monomial(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let entry = map.entry(m).or_insert_with(Rat::zero);
                *entry += ca * cb;
            }
        }
        let mut out: Vec<(Monomial, Rat)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.reverse();
        Poly { terms: out }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact partial derivative with respect to one symbol.
    pub fn partial(&self, s: &Symbol) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.degree_of(s);
            if e == 0 {
                continue;
            }
            let m2 = m
                .try_div(&Monomial::symbol(s.clone()))
                .expect("degree checked");
            terms.push((m2, c * rat_int(e as i64)));
        }
        Poly::from_terms(terms)
    }

    /// Coefficient of `s^k`, a polynomial free of `s`.
    pub fn coeff_of_power(&self, s: &Symbol, k: u32) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            if m.degree_of(s) == k {
                let m2 = m.try_div(&Monomial::symbol(s.clone()).pow(k)).unwrap();
                terms.push((m2, c.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    /// Exact division; `None` when the divisor does not divide exactly.
    pub fn divide_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(Rat::one() / c)));
        }
        let (dl_m, dl_c) = d.leading().unwrap();
        let mut rem = self.clone();
        let mut quo: Vec<(Monomial, Rat)> = Vec::new();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().unwrap();
            let qm = rm.try_div(dl_m)?;
            let qc = rc / dl_c;
            quo.push((qm.clone(), qc.clone()));
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
        }
        Some(Poly::from_terms(quo))
    }

    /// The common monomial factor of all terms (1 for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = match it.next() {
            Some((m, _)) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, (m, _)| acc.gcd(m))
    }

    /// Rescales so that coefficients are coprime integers and the leading
    /// coefficient is positive. Zero stays zero.
    pub fn int_normalized(&self) -> Poly {
        match self.normalization_factor() {
            Some(f) => self.scale(&f),
            None => Poly::zero(),
        }
    }

    /// The factor used by [`Poly::int_normalized`], if nonzero.
    pub fn normalization_factor(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        let mut denom_lcm = BigInt::one();
        let mut numer_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            denom_lcm = denom_lcm.lcm(c.denom());
            numer_gcd = numer_gcd.gcd(c.numer());
        }
        let mut f = Rat::new(denom_lcm, numer_gcd);
        if (self.leading().unwrap().1.clone() * &f).is_negative() {
            f = -f;
        }
        Some(f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{}", format_rat(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rat(&mag))?;
            }
        }
        Ok(())
    }
}

fn format_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

// ---- multivariate GCD via primitive pseudo-remainder sequences ----

/// GCD of two polynomials over the rationals, determined up to a unit and
/// returned with coprime integer coefficients and positive leading
/// coefficient.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.int_normalized();
    }
    if b.is_zero() {
        return a.int_normalized();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.int_normalized();
    }

    // split off common monomial factors first; cheap and very common here
    let mono_a = a.monomial_content();
    let mono_b = b.monomial_content();
    let mono = mono_a.gcd(&mono_b);
    let a1 = a
        .divide_exact(&Poly::monomial(mono_a.clone(), Rat::one()))
        .expect("monomial content divides");
    let b1 = b
        .divide_exact(&Poly::monomial(mono_b.clone(), Rat::one()))
        .expect("monomial content divides");

    let core = gcd_stripped(&a1, &b1);
    core.mul(&Poly::monomial(mono, Rat::one())).int_normalized()
}

fn gcd_stripped(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let sa = a.symbols();
    let sb = b.symbols();
    let common: Vec<&Symbol> = sa.intersection(&sb).collect();
    if common.is_empty() {
        return Poly::one();
    }
    // main variable: the common symbol of least combined degree
    let x = common
        .into_iter()
        .min_by_key(|s| a.degree_in(s) as u64 + b.degree_in(s) as u64)
        .unwrap()
        .clone();

    let (cont_a, pp_a) = split_content(a, &x);
    let (cont_b, pp_b) = split_content(b, &x);
    let cont = poly_gcd(&cont_a, &cont_b);

    let (mut r0, mut r1) = if pp_a.degree_in(&x) >= pp_b.degree_in(&x) {
        (pp_a, pp_b)
    } else {
        (pp_b, pp_a)
    };
    while !r1.is_zero() {
        let rem = pseudo_rem(&r0, &r1, &x);
        r0 = r1;
        r1 = if rem.is_zero() {
            Poly::zero()
        } else {
            primitive_part(&rem, &x)
        };
    }
    let core = if r0.degree_in(&x) == 0 {
        Poly::one()
    } else {
        primitive_part(&r0, &x)
    };
    cont.mul(&core)
}

/// Content (gcd of the `x`-coefficients) and primitive part with respect to `x`.
fn split_content(p: &Poly, x: &Symbol) -> (Poly, Poly) {
    let d = p.degree_in(x);
    let mut cont = Poly::zero();
    for k in 0..=d {
        let c = p.coeff_of_power(x, k);
        if !c.is_zero() {
            cont = poly_gcd(&cont, &c);
            if cont.is_one() {
                break;
            }
        }
    }
    let pp = p.divide_exact(&cont).expect("content divides");
    (cont, pp)
}

fn primitive_part(p: &Poly, x: &Symbol) -> Poly {
    split_content(p, x).1.int_normalized()
}

/// Pseudo-remainder of `a` by `b` in the variable `x`.
fn pseudo_rem(a: &Poly, b: &Poly, x: &Symbol) -> Poly {
    let db = b.degree_in(x);
    let lcb = b.coeff_of_power(x, db);
    let mut r = a.clone();
    let mut e = a.degree_in(x) as i64 - db as i64 + 1;
    while !r.is_zero() && r.degree_in(x) >= db {
        let dr = r.degree_in(x);
        let lcr = r.coeff_of_power(x, dr);
        let shift = Poly::monomial(Monomial::symbol(x.clone()).pow(dr - db), Rat::one());
        r = lcb.mul(&r).sub(&lcr.mul(&shift).mul(b));
        e -= 1;
    }
    for _ in 0..e.max(0) {
        r = r.mul(&lcb);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(i: u32) -> Poly {
        Poly::symbol(Symbol::u(i))
    }

    #[test]
    fn arithmetic_expands_and_sorts() {
        // (u1 + u2)^2 = u1^2 + 2 u1 u2 + u2^2
        let s = u(1).add(&u(2));
        let sq = s.mul(&s);
        assert_eq!(sq.terms().len(), 3);
        assert_eq!(sq.total_degree(), 2);
        assert_eq!(sq.to_string(), "u1^2+2*u1*u2+u2^2");
    }

    #[test]
    fn partial_derivative() {
        // d/du1 (u1^3 u2 + u2) = 3 u1^2 u2
        let p = u(1).pow(3).mul(&u(2)).add(&u(2));
        let d = p.partial(&Symbol::u(1));
        assert_eq!(d.to_string(), "3*u1^2*u2");
        assert!(p.partial(&Symbol::param("a")).is_zero());
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = u(1).add(&u(2)).pow(2);
        let b = u(1).sub(&Poly::from_int(3));
        let prod = a.mul(&b);
        assert_eq!(prod.divide_exact(&b).unwrap(), a);
        assert_eq!(prod.divide_exact(&a).unwrap(), b);
        assert!(u(1).divide_exact(&u(2)).is_none());
    }

    #[test]
    fn gcd_simple_common_factor() {
        let c = u(1).add(&u(2)); // u1 + u2
        let a = c.mul(&c).mul(&u(1).sub(&u(2))); // (u1+u2)^2 (u1-u2)
        let b = c.mul(&u(1).add(&u(2).scale(&rat_int(2)))); // (u1+u2)(u1+2u2)
        let g = poly_gcd(&a, &b);
        assert_eq!(g, c.int_normalized());
    }

    #[test]
    fn gcd_monomial_denominator_case() {
        // gcd(2 u1^3 u2, 4 u1^2) = u1^2 up to the integer content
        let a = u(1).pow(3).mul(&u(2)).scale(&rat_int(2));
        let b = u(1).pow(2).scale(&rat_int(4));
        let g = poly_gcd(&a, &b);
        assert_eq!(g.to_string(), "2*u1^2");
    }

    #[test]
    fn gcd_with_parameters() {
        let a_sym = Poly::symbol(Symbol::param("a"));
        let f = u(1).mul(&a_sym).add(&Poly::one()); // a u1 + 1
        let p = f.mul(&u(2).add(&Poly::one()));
        let q = f.mul(&u(2).sub(&Poly::one()));
        let g = poly_gcd(&p, &q);
        assert_eq!(g, f.int_normalized());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = u(1).pow(2).add(&Poly::one());
        let b = u(2).pow(3).sub(&u(1));
        assert!(poly_gcd(&a, &b).is_one());
    }

    #[test]
    fn int_normalization() {
        let p = u(1).scale(&rat(-2, 3)).add(&Poly::constant(rat(4, 3)));
        let n = p.int_normalized();
        assert_eq!(n.to_string(), "u1-2");
    }

    #[test]
    fn graded_lex_ordering() {
        // u1^2 > u1*u2 > u2^2 > u1 > u2 > 1
        let mut monos = vec![
            Monomial::one(),
            Monomial::symbol(Symbol::u(2)),
            Monomial::symbol(Symbol::u(1)).mul(&Monomial::symbol(Symbol::u(2))),
            Monomial::symbol(Symbol::u(1)).pow(2),
            Monomial::symbol(Symbol::u(1)),
            Monomial::symbol(Symbol::u(2)).pow(2),
        ];
        monos.sort_by(|a, b| b.cmp_graded_lex(a));
        let shown: Vec<String> = monos.iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, vec!["u1^2", "u1*u2", "u2^2", "u1", "u2", "1"]);
    }
}
