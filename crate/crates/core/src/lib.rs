//! Intuitionistic modal logic with a binary strict implication `⤳`.

pub mod conditions;
pub mod fixtures;
pub mod formula;
pub mod ipc;
pub mod kripke;
pub mod logics;
pub mod nnil;
pub mod search;
