pub mod extend;
pub mod mix;
pub mod validate;
pub mod witness;
