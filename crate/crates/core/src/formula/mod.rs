pub mod lattice;
pub mod lgroup;
pub mod pairs;
pub mod parse;
