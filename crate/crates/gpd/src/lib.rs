//! Text formats and the command-line front end for `groupoid-core`.
//!
//! Four line-oriented formats are supported: GPD (groupoid tables), PACT
//! (partial actions), FUNC (functors) and AUT (group actions by
//! automorphisms). See [`format`] for the grammar and [`cli`] for the
//! commands.

pub mod cli;
pub mod dot;
pub mod format;
