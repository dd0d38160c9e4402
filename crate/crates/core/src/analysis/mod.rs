//! Decision procedures on codings.

pub mod ldc;
pub mod semi;
pub mod words;
pub mod periodicity;
pub mod rank_one;
