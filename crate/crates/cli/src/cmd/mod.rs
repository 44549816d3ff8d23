pub mod compile;
pub mod estimate;
pub mod reproduce;
pub mod sweep;
pub mod verify;
