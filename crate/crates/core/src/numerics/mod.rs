//! Quadrature, Newton refinement and winding numbers.

pub mod quadrature;
pub mod roots;
pub mod winding;

pub use quadrature::{
    gauss_legendre, integrate, integrate_estimate, integrate_fallible, integrate_principal_value, integrate_principal_value_with, integrate_semi_infinite,
    integrate_semi_infinite_map, integrate_semi_infinite_split, integrate_with_breakpoints, Estimate, QuadratureSpec,
    SemiInfiniteMap,
};
pub use roots::{newton_refine, newton_refine_with};
pub use winding::{argument_change, argument_change_open, circle, rectangle, winding_number, PathSegment};
