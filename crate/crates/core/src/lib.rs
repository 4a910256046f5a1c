//! Bicriteria routing games: congestion and path length.
//!
//! Players pick one path each from an explicit strategy set. Three cost
//! models are supported (`max`, `sum` and the bucketed `sum-bucket`), with
//! best-response dynamics, exhaustive equilibrium analysis and checkers for
//! the known equilibrium bounds.

pub mod cost;
pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod fraction;
pub mod game;
pub mod instances;
pub mod suite;

pub use cost::{Cost, CostModel, RoutingState};
pub use dynamics::{run_dynamics, DynamicsTrace, MovePolicy, Outcome, PathChoice, PlayerOrder};
pub use equilibria::{analyze, equilibrium_report, is_nash, BoundVerdict, EquilibriumReport};
pub use error::{Error, Result};
pub use fraction::Fraction;
pub use game::{validate_instance, Edge, Instance, InstanceStats, Path, Player, Routing, Violation};
pub use instances::{parse_instance, serialize_instance, GeneratorSpec};
