pub mod chartir;
pub mod extract;
pub mod model;
pub mod pages;
pub mod stats;
pub mod svg;
pub mod tau;
pub mod validate;
