pub mod adjunction;
pub mod algebra;
pub mod functor;
pub mod grading;
pub mod linalg;
pub mod module;
pub mod verify;
