pub mod axioms;
pub mod count;
pub mod delta;
pub mod emit;
pub mod translation;

pub use translation::{translate, HeightSchedule, QuantifierStep, TranslateError, TranslationResult};
