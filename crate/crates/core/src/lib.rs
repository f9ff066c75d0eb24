pub mod delaunay;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod geodata;
pub mod geom;
pub mod metric;
pub mod quadrature;
pub mod rng;
pub mod sewing;
pub mod shapes;
pub mod stats;
pub mod svg;
