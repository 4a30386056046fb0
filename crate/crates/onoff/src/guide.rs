//! The user guide, included chapter by chapter so that `cargo test --doc`
//! compiles and runs every code block in `book/src` against the current
//! API. Build the rendered book with `mdbook build book`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model_concepts {}

#[doc = include_str!("../../../book/src/exogenous.md")]
pub mod exogenous_schedules {}

#[doc = include_str!("../../../book/src/exogenous-optimization.md")]
pub mod optimizing_schedules {}

#[doc = include_str!("../../../book/src/exhaustive-policies.md")]
pub mod exhaustive_policies {}

#[doc = include_str!("../../../book/src/optimal-policies.md")]
pub mod optimal_policies {}

#[doc = include_str!("../../../book/src/simulator.md")]
pub mod simulator_oracle {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli_reference {}
