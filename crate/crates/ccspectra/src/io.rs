//! The CC document format: a small JSON dialect for complexes.
//!
//! ```json
//! {
//!   "vertices": [1, 2, 3],
//!   "cells": [
//!     { "vertices": [1, 2], "rank": 1 },
//!     { "vertices": [1, 2, 3], "rank": 4 }
//!   ],
//!   "features": [[0.5], [1.0], [-0.25]]
//! }
//! ```
//!
//! `vertices` may declare isolated vertices; rank-0 singletons can be
//! omitted and are re-inserted on load. `features` is optional and carries
//! one row of reals per rank-0 cell in ascending vertex order. Serialization
//! is canonical, so `parse(serialize(cc))` reproduces `cc` exactly.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::complex::{Cell, CombinatorialComplex};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Document {
    vertices: Vec<u32>,
    cells: Vec<CellEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    features: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
struct CellEntry {
    vertices: Vec<u32>,
    rank: i64,
}

/// Parses a CC document. Syntax problems report the line and column;
/// structural problems surface the underlying validation error.
pub fn parse(text: &str) -> Result<CombinatorialComplex> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut cells = Vec::with_capacity(doc.vertices.len() + doc.cells.len());
    for &v in &doc.vertices {
        cells.push(Cell::new([v], 0)?);
    }
    for entry in &doc.cells {
        if entry.rank < 0 {
            return Err(Error::NegativeRank {
                rank: entry.rank,
                cell: format!("{:?}", entry.vertices),
            });
        }
        cells.push(Cell::new(entry.vertices.iter().copied(), entry.rank as usize)?);
    }

    let features = match doc.features {
        None => None,
        Some(rows) => {
            let nrows = rows.len();
            let ncols = rows.first().map_or(0, Vec::len);
            for row in &rows {
                if row.len() != ncols {
                    return Err(Error::FeatureShapeMismatch {
                        rows: nrows,
                        vertices: nrows,
                    });
                }
            }
            Some(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
        }
    };

    CombinatorialComplex::build(cells, features)
}

/// Canonical serialization: ascending vertices, all cells (including rank-0
/// singletons) in canonical order, features row per vertex.
pub fn serialize(cc: &CombinatorialComplex) -> String {
    let doc = Document {
        vertices: cc.vertices().iter().map(|v| v.0).collect(),
        cells: cc
            .cells()
            .iter()
            .map(|c| CellEntry {
                vertices: c.vertices().iter().map(|v| v.0).collect(),
                rank: c.rank() as i64,
            })
            .collect(),
        features: cc.features().map(|f| {
            f.row_iter()
                .map(|r| r.iter().copied().collect())
                .collect()
        }),
    };
    serde_json::to_string_pretty(&doc).expect("document serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Permutation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_single_edge() {
        let cc = CombinatorialComplex::from_graph(&[], &[(1, 2)]).unwrap();
        let text = serialize(&cc);
        let back = parse(&text).unwrap();
        assert_eq!(cc, back);
    }

    #[test]
    fn round_trip_with_features() {
        let f = DMatrix::from_row_slice(2, 2, &[0.5, -1.0, 0.125, 3.25]);
        let cc = CombinatorialComplex::build(
            vec![Cell::new([1, 2], 1).unwrap()],
            Some(f),
        )
        .unwrap();
        let back = parse(&serialize(&cc)).unwrap();
        assert_eq!(cc, back);
    }

    #[test]
    fn missing_rank_field_is_a_syntax_error() {
        let text = r#"{ "vertices": [1], "cells": [ { "vertices": [1, 2] } ] }"#;
        match parse(text).unwrap_err() {
            Error::Syntax { line, message, .. } => {
                assert!(line >= 1);
                assert!(message.contains("rank"), "message: {message}");
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn negative_rank_rejected() {
        let text = r#"{ "vertices": [], "cells": [ { "vertices": [1, 2], "rank": -3 } ] }"#;
        assert!(matches!(
            parse(text).unwrap_err(),
            Error::NegativeRank { rank: -3, .. }
        ));
    }

    #[test]
    fn omitted_singletons_are_restored() {
        let text = r#"{ "vertices": [7], "cells": [ { "vertices": [1, 2], "rank": 1 } ] }"#;
        let cc = parse(text).unwrap();
        assert_eq!(cc.n_vertices(), 3);
        assert_eq!(cc.cells_of_rank(0).len(), 3);
    }

    #[test]
    fn fig4_style_document() {
        let text = r#"{
            "vertices": [1, 2, 3],
            "cells": [
                { "vertices": [1, 2], "rank": 1 },
                { "vertices": [1, 2, 3], "rank": 4 }
            ]
        }"#;
        let cc = parse(text).unwrap();
        assert_eq!(cc.max_rank(), 4);
        assert_eq!(cc.n_cells(), 5);
    }

    #[test]
    fn garbage_is_rejected_not_panicking() {
        for text in ["", "{", "[1,2]", "{\"vertices\": \"no\"}", "null"] {
            assert!(parse(text).is_err());
        }
    }

    #[test]
    fn round_trip_relabeled_complex() {
        let cc = CombinatorialComplex::from_simplicial(&[vec![1, 2, 3], vec![3, 4]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = Permutation::random(cc.n_vertices(), &mut rng);
        let rl = cc.relabel(&p).unwrap();
        assert_eq!(parse(&serialize(&rl)).unwrap(), rl);
    }
}
