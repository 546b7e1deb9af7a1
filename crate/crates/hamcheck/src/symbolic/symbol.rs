//! Coordinate symbols of the jet space: field variables `u^i`, their
//! x-derivatives, covering covariables `p_i` and their x-derivatives, and
//! named constant parameters.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A single indeterminate of the scalar domain.
///
/// Symbols are self-describing values: two symbols are the same coordinate
/// exactly when they compare equal, so no registry is needed. The derived
/// total order doubles as the fixed global variable order used by the
/// graded-lexicographic monomial order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Symbol {
    /// Field variable `u^index` differentiated `order` times by x.
    /// `order == 0` is the field variable itself.
    U { index: u32, order: u32 },
    /// Covering variable `p_index` differentiated `order` times by x.
    P { index: u32, order: u32 },
    /// Named constant parameter (e.g. `a`, `c1`).
    Param(Arc<str>),
}

impl Symbol {
    pub fn u(index: u32) -> Self {
        Symbol::U { index, order: 0 }
    }

    pub fn u_jet(index: u32, order: u32) -> Self {
        Symbol::U { index, order }
    }

    pub fn p(index: u32) -> Self {
        Symbol::P { index, order: 0 }
    }

    pub fn p_jet(index: u32, order: u32) -> Self {
        Symbol::P { index, order }
    }

    pub fn param(name: &str) -> Self {
        Symbol::Param(Arc::from(name))
    }

    pub fn is_param(&self) -> bool {
        matches!(self, Symbol::Param(_))
    }

    /// x-derivative order; parameters count as order 0.
    pub fn order(&self) -> u32 {
        match self {
            Symbol::U { order, .. } | Symbol::P { order, .. } => *order,
            Symbol::Param(_) => 0,
        }
    }

    /// 1-based coordinate index for u/p symbols.
    pub fn index(&self) -> Option<u32> {
        match self {
            Symbol::U { index, .. } | Symbol::P { index, .. } => Some(*index),
            Symbol::Param(_) => None,
        }
    }

    /// The same coordinate with one more x-derivative. Parameters have no
    /// x-dependence, hence no lift.
    pub fn lift_x(&self) -> Option<Symbol> {
        match self {
            Symbol::U { index, order } => Some(Symbol::U {
                index: *index,
                order: order + 1,
            }),
            Symbol::P { index, order } => Some(Symbol::P {
                index: *index,
                order: order + 1,
            }),
            Symbol::Param(_) => None,
        }
    }

    fn rank(&self) -> (u8, u32, u32, Option<&str>) {
        match self {
            Symbol::U { index, order } => (0, *index, *order, None),
            Symbol::P { index, order } => (1, *index, *order, None),
            Symbol::Param(name) => (2, 0, 0, Some(name)),
        }
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::U { index, order } => write_jet(f, 'u', *index, *order),
            Symbol::P { index, order } => write_jet(f, 'p', *index, *order),
            Symbol::Param(name) => write!(f, "{name}"),
        }
    }
}

// Jet suffixes (`u1_x`, `u1_xx`, ...) are display-only; the input grammar has
// no syntax for them since problem files are functions of u alone.
fn write_jet(f: &mut fmt::Formatter<'_>, family: char, index: u32, order: u32) -> fmt::Result {
    write!(f, "{family}{index}")?;
    if order > 0 {
        write!(f, "_")?;
        for _ in 0..order {
            write!(f, "x")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_order_is_total_and_stable() {
        let mut syms = vec![
            Symbol::param("c2"),
            Symbol::p_jet(1, 1),
            Symbol::u(2),
            Symbol::u_jet(1, 1),
            Symbol::param("a"),
            Symbol::u(1),
        ];
        syms.sort();
        assert_eq!(
            syms,
            vec![
                Symbol::u(1),
                Symbol::u_jet(1, 1),
                Symbol::u(2),
                Symbol::p_jet(1, 1),
                Symbol::param("a"),
                Symbol::param("c2"),
            ]
        );
    }

    #[test]
    fn display_names() {
        assert_eq!(Symbol::u(1).to_string(), "u1");
        assert_eq!(Symbol::u_jet(3, 2).to_string(), "u3_xx");
        assert_eq!(Symbol::p_jet(2, 1).to_string(), "p2_x");
        assert_eq!(Symbol::param("c1").to_string(), "c1");
    }

    #[test]
    fn lift_x_raises_order() {
        assert_eq!(Symbol::u(1).lift_x(), Some(Symbol::u_jet(1, 1)));
        assert_eq!(Symbol::p_jet(2, 1).lift_x(), Some(Symbol::p_jet(2, 2)));
        assert_eq!(Symbol::param("a").lift_x(), None);
    }
}
