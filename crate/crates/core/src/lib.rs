//! Exact finite models of quasi-metric, partial-metric and semilattice
//! structures, with the checkers that tie them together.

pub mod align;
pub mod entropy;
pub mod fixtures;
pub mod graphs;
pub mod io;
pub mod order;
pub mod partial;
pub mod qmetric;
pub mod semilattice;
pub mod value;
pub mod weights;

pub use order::{OrderRel, Partition};
pub use partial::{d_from_p, p_from_dw, validate_wpm, WpmSpace};
pub use qmetric::{disjoint_union, validate_gqm, GQSpace};
pub use value::{int, rat, DistVal, Rational};
pub use weights::{CWeakWeight, WeakWeight, WeightMode};
pub use semilattice::{semilattice_from_order, MeetSL};
