pub mod fluxcone;
pub mod interval;
pub mod linalg;
pub mod massaction;
pub mod network;
pub mod poly;
pub mod sign;
pub mod solver;
pub mod univariate;
pub mod catalog;
pub mod onedim;
pub mod lowdim;
pub mod pipeline;
