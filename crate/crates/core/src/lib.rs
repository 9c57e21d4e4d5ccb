pub mod checker;
pub mod cli;
pub mod constructions;
pub mod corpus;
pub mod formula;
pub mod io;
pub mod partial;
pub mod pl;
pub mod rational;
pub mod semilinear;
pub mod sign;
pub mod term;
pub mod translate;
