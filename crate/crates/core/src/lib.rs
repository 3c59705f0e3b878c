//! Fuzzy ALC(D) reasoning by tableau saturation into exact bounded MILP.

pub mod cli;
pub mod kb;
pub mod linear;
pub mod membership;
pub mod milp;
pub mod par;
pub mod parser;
pub mod preprocess;
pub mod rational;
pub mod reasoner;
pub mod semantics;
pub mod tableau;
