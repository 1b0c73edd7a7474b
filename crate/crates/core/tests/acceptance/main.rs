//! Integration suite: acceptance criteria, derived oracles, structural
//! properties, the CLI and the example programs.

mod cli;
mod examples;
mod oracles;
mod support;
