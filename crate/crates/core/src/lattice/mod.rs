//! Exact integer and rational linear algebra, and lattice points of
//! rational polytopes. Nothing in here touches floating point.

mod matrix;
mod polytope;
mod rational;

pub use matrix::{hermite_normal_form, invariant_factors, smith_normal_form, IntMatrix};
pub use polytope::{count_lattice_points, lattice_points, Halfspace, RationalPolytope};
pub use rational::{
    inverse_q, maximize, rat, solve_rational, solve_rational_q, LpOutcome, Rational,
    RationalSolution,
};

pub(crate) use polytope::{ceil_i64, floor_i64, for_each_box_point};
