//! The Bruhat-Tits tree of PGL(2, K).
//!
//! Vertices are closed balls `B(b, n)` of K, the class of the lattice spanned
//! by `(pi^n, 0)` and `(b, 1)`. The parent of `B(b, n)` is `B(b, n - 1)`, so
//! the end infinity `(1 : 0)` lies "up" and the finite end `z` is reached by
//! the shrinking balls `B(z, n)`. A matrix acts on lattices through its
//! columns, so `diag(pi, 1)` sends the standard vertex `(0; 0)` to `(1; 0)`,
//! one step toward the end 0, matching the Mobius map `z -> pi z`.

mod ends;
mod subtree;
mod vertex;

pub use ends::{
    apartment, apartment_distance, gromov_product, median, on_apartment, project_to_apartment,
    ProjPoint,
};
pub use subtree::{core_center, spans, tree_of_ends, tree_of_ends_around, SubtreeTruncation};
pub use vertex::{Direction, Vertex, MAX_STAR_Q};
