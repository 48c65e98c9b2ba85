//! Locality-sensitive orderings of the unit cube and the structures built on
//! them: a dynamic locality graph, bichromatic closest pair and a dynamic
//! spanner, plus brute-force checkers.

pub mod error;
pub mod geometry;
pub mod grid_orders;
pub mod locality_graph;
pub mod lso;
pub mod oracle;
pub mod packing;
pub mod rng;
pub mod stream;

pub use error::{Error, Result};
pub use geometry::{Direction, Segment, ShiftedPoint, UnitPoint};
pub use grid_orders::{CellIndex, GapOrderingSet, GridOrderSet, GridOrdering};
pub use locality_graph::{BcpState, Color, EdgeDelta, LocalityGraph, PointRecord};
pub use lso::{build_classic, build_gap, FamilyKind, LsoFamily, LsoParams, OrderingId, Resolution};
pub use packing::{DirectionNet, Packing};
