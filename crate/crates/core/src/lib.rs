pub mod arith;
pub mod cert;
pub mod cli;
pub mod expr;
pub mod lemmas;
pub mod poly;
pub mod reduction;
mod surd;
