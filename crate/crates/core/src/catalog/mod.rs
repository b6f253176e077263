//! Built-in classes with their expected check outcomes.

mod aliases;
mod classes;
mod entries;

pub use aliases::structure_alias;
pub use classes::{get_class, minimal_violations, CLASS_NAMES};
pub use entries::{get_entry, list_classes, replay, CatalogEntry, Outcome, ReplayLine, DEFAULT_BOUND, RIGIDITY_BOUND};
