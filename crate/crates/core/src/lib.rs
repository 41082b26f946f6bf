//! Clique-width expressions for planar order types, an MSO model checker over
//! annotated order types, and exact geometric oracles for the point problems
//! that both are cross-checked against.

pub mod construct;
pub mod dp;
pub mod error;
pub mod expr;
pub mod gen;
pub mod geometry;
pub mod mso;
pub mod solvers;

pub use error::{ConstructError, DpError, ExprError, GeometryError, MsoError, SolveError};
pub use geometry::{order_type, orient, OrderType, Orientation, Point, PointSet, TripleSet};
