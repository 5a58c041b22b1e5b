//! Banana trees: a dynamic representation of the augmented persistence
//! diagram of a list of real values.
//!
//! A [`Workspace`] owns any number of lists. Each list with two or more
//! items carries an up-tree (for `f`) and a down-tree (for `-f`); both are
//! kept link-for-link equal to a fresh build under value changes,
//! insertions, deletions, cuts and concatenations.

mod build;
mod counters;
mod diagram;
mod dict;
mod error;
pub mod generators;
mod ids;
mod local;
pub mod oracle;
mod prim;
mod topo;
mod tree;
mod validate;
mod value;
mod workspace;

pub use counters::CostCounters;
pub use diagram::{diff, Arrow, ArrowTag, Diagram, DiagramPoint, Subdiagram, HOOK_ITEM};
pub use dict::{CritDict, Direction};
pub use error::BananaError;
pub use ids::{ItemId, ListId, NodeId};
pub use local::EditOutcome;
pub use prim::Primitive;
pub use topo::{CutSide, SplitStacks, StackedBanana};
pub use tree::{NodeLabel, SpineSide, TreeSignature};
pub use validate::Violation;
pub use value::{ExtValue, Height, Kind, Polarity, ValueError, MAX_EPS};
pub use workspace::{Crit, Sample, Workspace};
