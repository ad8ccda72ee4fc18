pub mod debreu;
pub mod diffcons;
pub mod grid;
pub mod halfplane;
pub mod plmap;
pub mod pointset;
pub mod rational;
pub mod semiorder;
pub mod structure;
pub mod threshold;
