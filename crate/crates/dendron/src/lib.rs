//! Exact combinatorics of rooted trees, dendroidal necklaces and the W_! rigidification.

pub mod face;
pub mod json;
pub mod map;
pub mod necklace;
pub mod nw;
pub mod presheaf;
pub mod sset;
pub mod tau;
pub mod tree;
pub mod w;

pub use map::{factorize, leaf_root, Class, Factorization, MapClass, MapError, TreeMap};
pub use presheaf::{DendroidalSet, Dendrex, Presheaf};
pub use tree::{Edge, EdgeSet, Face, Node, Tree, TreeError};
