//! Jet-space bookkeeping: the total x-derivative, the evolutionary
//! t-derivative obtained by substituting a system's equations (and, when
//! covering variables are present, the covering equations), and collection of
//! an expression as a polynomial in jet monomials.
//!
//! There is no free t-jet coordinate anywhere in the engine: `total_t` is
//! defined only through substitution, and higher jets evolve through
//! `D_t o D_x = D_x o D_t`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::symbolic::{Monomial, Poly, RationalExpr, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JetError {
    #[error("symbol {0} has no defined t-evolution")]
    NoEvolution(String),
    #[error("expression is not polynomial in the collected families")]
    NotPolynomialInFamily,
}

/// Ambient data for jet computations. Symbols are self-describing values, so
/// the context only needs to know the dimension; registration of produced
/// symbols is the identity.
#[derive(Clone, Copy, Debug)]
pub struct JetContext {
    pub n: usize,
}

impl JetContext {
    pub fn new(n: usize) -> Self {
        JetContext { n }
    }
}

/// Right-hand sides defining the t-evolution of the coordinates: always the
/// field variables, optionally the covering variables. Higher jets evolve by
/// repeated total x-derivatives of these.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub n: usize,
    /// RHS of `u^i_t` for i = 1..n (0-based storage).
    pub u_rhs: Vec<RationalExpr>,
    /// RHS of `p_{i,t}` when a covering is in play.
    pub p_rhs: Option<Vec<RationalExpr>>,
}

/// Total derivative with respect to x: jets shift up one order, parameters
/// are constants.
pub fn total_x(e: &RationalExpr, _ctx: &JetContext) -> RationalExpr {
    let mut acc = RationalExpr::zero();
    for s in e.symbols() {
        if let Some(lifted) = s.lift_x() {
            let d = e.partial_diff(&s);
            if !d.is_zero() {
                acc = &acc + &(&d * &RationalExpr::symbol(lifted));
            }
        }
    }
    acc
}

/// Evolutionary derivative with respect to t, on shell: every jet symbol is
/// replaced through the chain rule by the x-derivatives of its defining
/// right-hand side.
pub fn total_t(e: &RationalExpr, evo: &Evolution, ctx: &JetContext) -> Result<RationalExpr, JetError> {
    let mut cache: BTreeMap<Symbol, RationalExpr> = BTreeMap::new();
    let mut acc = RationalExpr::zero();
    for s in e.symbols() {
        if s.is_param() {
            continue;
        }
        let d = e.partial_diff(&s);
        if d.is_zero() {
            continue;
        }
        let rhs = t_rhs_for(&s, evo, ctx, &mut cache)?;
        acc = &acc + &(&d * &rhs);
    }
    Ok(acc)
}

fn t_rhs_for(
    s: &Symbol,
    evo: &Evolution,
    ctx: &JetContext,
    cache: &mut BTreeMap<Symbol, RationalExpr>,
) -> Result<RationalExpr, JetError> {
    if let Some(hit) = cache.get(s) {
        return Ok(hit.clone());
    }
    let (base, order) = match s {
        Symbol::U { index, order } => {
            let i = *index as usize;
            if i == 0 || i > evo.n {
                return Err(JetError::NoEvolution(s.to_string()));
            }
            (evo.u_rhs[i - 1].clone(), *order)
        }
        Symbol::P { index, order } => {
            let i = *index as usize;
            let p_rhs = evo
                .p_rhs
                .as_ref()
                .ok_or_else(|| JetError::NoEvolution(s.to_string()))?;
            if i == 0 || i > evo.n {
                return Err(JetError::NoEvolution(s.to_string()));
            }
            (p_rhs[i - 1].clone(), *order)
        }
        Symbol::Param(_) => return Ok(RationalExpr::zero()),
    };
    let mut rhs = base;
    for _ in 0..order {
        rhs = total_x(&rhs, ctx);
    }
    cache.insert(s.clone(), rhs.clone());
    Ok(rhs)
}

/// A family of jet symbols that `collect` gathers monomials over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollectFamily {
    /// u-jets of x-order at least one (the field variables themselves stay in
    /// coefficients).
    UJets,
    /// Covering variables of any x-order, including order zero.
    PJets,
}

impl CollectFamily {
    fn contains(&self, s: &Symbol) -> bool {
        match (self, s) {
            (CollectFamily::UJets, Symbol::U { order, .. }) => *order >= 1,
            (CollectFamily::PJets, Symbol::P { .. }) => true,
            _ => false,
        }
    }
}

/// Decomposes `e` as a finite sum of monomials in the listed families with
/// coefficients free of those families. Reassembling the map reproduces `e`.
pub fn collect(
    e: &RationalExpr,
    families: &[CollectFamily],
) -> Result<BTreeMap<Monomial, RationalExpr>, JetError> {
    let in_family = |s: &Symbol| families.iter().any(|f| f.contains(s));
    if e.denominator().contains_symbol_where(in_family) {
        return Err(JetError::NotPolynomialInFamily);
    }
    let mut buckets: BTreeMap<Monomial, Vec<(Monomial, crate::symbolic::Rat)>> = BTreeMap::new();
    for (mono, coeff) in e.numerator().terms() {
        let mut fam_factors = Vec::new();
        let mut rest_factors = Vec::new();
        for (s, k) in mono.factors() {
            if in_family(s) {
                fam_factors.push((s.clone(), *k));
            } else {
                rest_factors.push((s.clone(), *k));
            }
        }
        buckets
            .entry(Monomial::from_factors(fam_factors))
            .or_default()
            .push((Monomial::from_factors(rest_factors), coeff.clone()));
    }
    let mut out = BTreeMap::new();
    for (key, terms) in buckets {
        let num = Poly::from_terms(terms);
        let coeff = RationalExpr::new(num, e.denominator().clone()).expect("denominator nonzero");
        if !coeff.is_zero() {
            out.insert(key, coeff);
        }
    }
    Ok(out)
}

/// Rebuilds the expression from a collection map (test helper; collection
/// followed by reassembly is the identity).
pub fn reassemble(parts: &BTreeMap<Monomial, RationalExpr>) -> RationalExpr {
    let mut acc = RationalExpr::zero();
    for (m, c) in parts {
        let mono = RationalExpr::from_poly(Poly::monomial(m.clone(), crate::symbolic::rat_int(1)));
        acc = &acc + &(c * &mono);
    }
    acc
}

/// Largest x-derivative order of the given family appearing in `e`.
pub fn max_order(e: &RationalExpr, family: CollectFamily) -> u32 {
    e.symbols()
        .iter()
        .filter(|s| match family {
            CollectFamily::UJets => matches!(s, Symbol::U { .. }),
            CollectFamily::PJets => matches!(s, Symbol::P { .. }),
        })
        .map(|s| s.order())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::int;

    fn ctx() -> JetContext {
        JetContext::new(3)
    }

    #[test]
    fn total_x_shifts_jets() {
        let c = ctx();
        assert_eq!(total_x(&RationalExpr::u(1), &c), RationalExpr::u_jet(1, 1));
        // D_x(8 u1) = 8 u1_x
        let e = &int(8) * &RationalExpr::u(1);
        assert_eq!(total_x(&e, &c), &int(8) * &RationalExpr::u_jet(1, 1));
        // Leibniz on u1 * p1
        let prod = &RationalExpr::u(1) * &RationalExpr::p(1);
        let expect = &(&RationalExpr::u_jet(1, 1) * &RationalExpr::p(1))
            + &(&RationalExpr::u(1) * &RationalExpr::p_jet(1, 1));
        assert_eq!(total_x(&prod, &c), expect);
        // parameters are constant
        assert!(total_x(&RationalExpr::param("a"), &c).is_zero());
    }

    fn kdv_evolution() -> Evolution {
        // u1_t = u2, u2_t = u3, u3_t = -u1_x + 6 u1 u2
        Evolution {
            n: 3,
            u_rhs: vec![
                RationalExpr::u(2),
                RationalExpr::u(3),
                &(&int(6) * &(&RationalExpr::u(1) * &RationalExpr::u(2)))
                    - &RationalExpr::u_jet(1, 1),
            ],
            p_rhs: None,
        }
    }

    #[test]
    fn total_t_substitutes_the_equations() {
        let c = ctx();
        let evo = kdv_evolution();
        let d = total_t(&RationalExpr::u(3), &evo, &c).unwrap();
        let expect = &(&int(6) * &(&RationalExpr::u(1) * &RationalExpr::u(2)))
            - &RationalExpr::u_jet(1, 1);
        assert_eq!(d, expect);
        assert!(total_t(&RationalExpr::param("c1"), &evo, &c).unwrap().is_zero());
        // covering variable with no covering equations is an error
        assert!(matches!(
            total_t(&RationalExpr::p(1), &evo, &c),
            Err(JetError::NoEvolution(_))
        ));
    }

    #[test]
    fn t_and_x_derivatives_commute_on_shell() {
        let c = ctx();
        let evo = kdv_evolution();
        let samples = vec![
            RationalExpr::u(1),
            &RationalExpr::u(1) * &RationalExpr::u(2),
            &(&RationalExpr::u(3) * &RationalExpr::u_jet(1, 1)) + &RationalExpr::u(2),
            RationalExpr::one().div_expr(&(&RationalExpr::u(1) + &int(1))).unwrap(),
        ];
        for e in samples {
            let xt = total_t(&total_x(&e, &c), &evo, &c).unwrap();
            let tx = total_x(&total_t(&e, &evo, &c).unwrap(), &c);
            assert_eq!(xt, tx, "commutation failed on {e}");
        }
    }

    #[test]
    fn collect_by_family() {
        // g p1_xx + b u1_x p1_x, collected over the p-family
        let g = RationalExpr::u(2);
        let b = RationalExpr::u(1);
        let e = &(&g * &RationalExpr::p_jet(1, 2))
            + &(&(&b * &RationalExpr::u_jet(1, 1)) * &RationalExpr::p_jet(1, 1));
        let parts = collect(&e, &[CollectFamily::PJets]).unwrap();
        assert_eq!(parts.len(), 2);
        let k_xx = Monomial::symbol(Symbol::p_jet(1, 2));
        let k_x = Monomial::symbol(Symbol::p_jet(1, 1));
        assert_eq!(parts[&k_xx], g);
        assert_eq!(parts[&k_x], &b * &RationalExpr::u_jet(1, 1));
        assert_eq!(reassemble(&parts), e);

        // collecting 0 gives the empty map
        assert!(collect(&RationalExpr::zero(), &[CollectFamily::PJets])
            .unwrap()
            .is_empty());
    }

    #[test]
    fn collect_rejects_family_in_denominator() {
        let e = RationalExpr::one().div_expr(&RationalExpr::p(1)).unwrap();
        assert_eq!(
            collect(&e, &[CollectFamily::PJets]).unwrap_err(),
            JetError::NotPolynomialInFamily
        );
    }
}
