pub mod integrate;
pub mod modulus;
pub mod report;
pub mod sweep;
pub mod verify;
