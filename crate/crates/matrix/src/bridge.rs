//! Bridge from exact tree shifts to dense matrices: the compression of the
//! shift onto the span of the core plus finitely many ray indices. For trees
//! with no rays this is the whole operator, so exact rational analysis and
//! floating SVD can be compared directly.

use num_traits::ToPrimitive;

use shiftlab_core::tree::ValidatedTree;
use shiftlab_core::VertexId;

use crate::dense::{DenseMatrix, MatrixError};

/// The shift compressed to core vertices plus ray indices 1..=`ray_depth`,
/// with the vertex ordering of the columns returned alongside. Entry
/// (child, parent) holds the child's weight.
pub fn shift_matrix(
    tree: &ValidatedTree,
    ray_depth: u64,
) -> Result<(DenseMatrix, Vec<VertexId>), MatrixError> {
    let mut vertices: Vec<VertexId> = tree.core_vertices().collect();
    for ray in tree.rays() {
        for j in 1..=ray_depth {
            vertices.push(VertexId::ray(&ray.id, j));
        }
    }
    vertices.sort();
    let index: std::collections::BTreeMap<&VertexId, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let n = vertices.len();
    let mut rows = vec![vec![0.0; n]; n];
    for (col, v) in vertices.iter().enumerate() {
        for child in tree.children(v).expect("vertices resolve") {
            if let Some(&row) = index.get(&child) {
                let w = tree
                    .weight(&child)
                    .expect("child resolves")
                    .expect("non-root has a weight");
                rows[row][col] = w.to_f64().expect("weight fits in f64");
            }
        }
    }
    Ok((DenseMatrix::from_rows(&rows)?, vertices))
}
