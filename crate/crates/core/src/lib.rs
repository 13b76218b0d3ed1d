pub mod field;
pub mod matrix;
pub mod slice_rank;
pub mod support;
pub mod tensor;
pub mod entropy;
pub mod order;
pub mod witness;
pub mod eisenstein;
pub mod trifference;
pub mod format;
pub mod cli;
