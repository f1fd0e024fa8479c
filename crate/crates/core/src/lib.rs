//! Admissible quadratic forms over ℚ and ℚ(√2), hyperboloid-model geometry,
//! relative Voronoi cells, and the graph-driven glueing count.

pub mod glueing;
pub mod hyperboloid;
pub mod numfield;
pub mod qforms;
pub mod voronoi;
