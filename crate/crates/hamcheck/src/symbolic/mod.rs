//! Exact scalar arithmetic with canonical forms, the expression parser, and
//! partial differentiation. Every other module computes exclusively with
//! these scalars.
//!
//! The scalar domain is the field of rational functions over the rationals in
//! jet symbols, extended by named parameters treated as independent
//! transcendentals. Exact arithmetic makes `is_zero` decidable, which every
//! verdict in the engine rests on. Expressions are immutable values after
//! construction and safe to share across threads.

mod expr;
mod parser;
mod poly;
mod symbol;
mod tensor;

pub use expr::{int, rat_expr, sum, RationalExpr, SymbolicError};
pub use parser::{parse_expr, ContextError, ParseContext, ParseError};
pub use poly::{poly_gcd, rat, rat_int, Monomial, Poly, Rat};
pub use symbol::Symbol;
pub use tensor::{ExprMatrix, ExprTensor, ExprTensor3, MatrixError};
