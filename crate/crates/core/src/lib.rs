//! Reversible foundations for irreversible computation, on finite instances.
//!
//! Partial injections complete to partial functions, and isometries complete to
//! quantum channels, by adjoining garbage outputs ([`aux`]) and then quotienting
//! by agreement on points ([`ext`]). The [`pipeline`] module runs the full loop
//! from unitaries and partial injections and back again, and [`lawcheck`]
//! checks the categorical laws on every shipped instance.

pub mod classical;
pub mod quantum;
pub mod aux;
pub mod ext;
pub mod lawcheck;
pub mod pipeline;
pub mod cli;
