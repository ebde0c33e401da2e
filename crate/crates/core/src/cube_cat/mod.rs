//! Maps between cubes generated by faces, degeneracies and connections, and the
//! permutohedra that shape mapping spaces of resolved cubes.

mod cube_map;
mod permutohedron;

pub use cube_map::{bits_label, cube_poset, CubeMap, Generator};
pub use permutohedron::{mapping_space_shape, OrderedSetPartition, Permutohedron};
