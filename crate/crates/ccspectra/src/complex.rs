//! Data model for combinatorial complexes.
//!
//! A combinatorial complex is a set of vertices together with a set of cells
//! (nonempty vertex subsets), each carrying a non-negative integer rank. Two
//! structural rules hold everywhere in this crate:
//!
//! 1. every vertex appears as a rank-0 singleton cell, and
//! 2. the rank function is order-preserving: if the vertex set of `x` is a
//!    proper subset of the vertex set of `y`, then `rank(x) <= rank(y)`.
//!
//! Graphs are the special case with ranks 0 and 1 only; simplicial complexes
//! assign each cell the rank `|vertices| - 1`. Cells are kept in a canonical
//! order (rank ascending, vertex sets lexicographic within a rank) so that
//! every derived matrix and serialization is deterministic.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Label of a vertex (a rank-0 entity). Labels are arbitrary non-negative
/// integers; they need not be contiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A cell: a strictly sorted, nonempty set of vertices plus a rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    vertices: Vec<VertexId>,
    rank: usize,
}

impl Cell {
    /// Builds a cell from arbitrary vertex labels; duplicates collapse (the
    /// vertex list is a set) and the result is sorted.
    ///
    /// Singleton cells must carry rank 0.
    pub fn new<I>(vertices: I, rank: usize) -> Result<Self>
    where
        I: IntoIterator<Item = u32>,
    {
        let set: BTreeSet<u32> = vertices.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyCell);
        }
        if set.len() == 1 && rank != 0 {
            return Err(Error::RankViolation {
                reason: format!(
                    "singleton cell {{{}}} must have rank 0, got {rank}",
                    set.iter().next().unwrap()
                ),
            });
        }
        Ok(Cell {
            vertices: set.into_iter().map(VertexId).collect(),
            rank,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Smallest vertex label of the cell (first in sorted order).
    pub fn min_vertex(&self) -> VertexId {
        self.vertices[0]
    }

    /// True when every vertex of `self` belongs to `other`.
    pub fn is_subset_of(&self, other: &Cell) -> bool {
        is_sorted_subset(&self.vertices, &other.vertices)
    }

    /// Compact `{a,b,c}` rendering used in error messages and CSV labels.
    pub fn label(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                s.push('+');
            }
            s.push_str(&v.0.to_string());
        }
        s
    }
}

fn is_sorted_subset(sub: &[VertexId], sup: &[VertexId]) -> bool {
    let mut it = sup.iter();
    'outer: for v in sub {
        for w in it.by_ref() {
            match w.cmp(v) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// Canonical sort key: rank ascending, then vertex set lexicographic.
fn cell_key(c: &Cell) -> (usize, &[VertexId]) {
    (c.rank, &c.vertices)
}

/// A validated combinatorial complex.
///
/// Immutable after construction: every operation producing a new complex goes
/// back through [`CombinatorialComplex::build`], so validated values can be
/// shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinatorialComplex {
    vertices: Vec<VertexId>,
    cells: Vec<Cell>,
    rank_ranges: Vec<std::ops::Range<usize>>,
    max_rank: usize,
    features: Option<DMatrix<f64>>,
}

impl CombinatorialComplex {
    /// Validates and canonicalizes a cell list into a complex.
    ///
    /// Rank-0 singletons are inserted for every vertex that only occurs
    /// inside a higher cell; duplicate `(vertices, rank)` pairs collapse.
    /// The optional feature matrix carries one row per rank-0 cell, in vertex
    /// order.
    pub fn build(cells: Vec<Cell>, features: Option<DMatrix<f64>>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::EmptyComplex);
        }

        // Vertex universe, then closure under "every vertex is a cell".
        let mut vertex_set: BTreeSet<VertexId> = BTreeSet::new();
        for c in &cells {
            vertex_set.extend(c.vertices.iter().copied());
        }
        let mut all = cells;
        let present_singletons: BTreeSet<VertexId> = all
            .iter()
            .filter(|c| c.len() == 1 && c.rank == 0)
            .map(|c| c.vertices[0])
            .collect();
        for &v in vertex_set.difference(&present_singletons) {
            all.push(Cell {
                vertices: vec![v],
                rank: 0,
            });
        }

        // Canonical order + dedup on (rank, vertices).
        all.sort_by(|a, b| cell_key(a).cmp(&cell_key(b)));
        all.dedup();

        // Rank-0 cells are exactly the vertex singletons.
        for c in &all {
            if c.rank == 0 && c.len() != 1 {
                return Err(Error::RankViolation {
                    reason: format!("cell {{{}}} of rank 0 is not a singleton", c.label()),
                });
            }
        }

        check_order_preserving(&all)?;

        let vertices: Vec<VertexId> = vertex_set.into_iter().collect();
        if let Some(f) = &features {
            if f.nrows() != vertices.len() {
                return Err(Error::FeatureShapeMismatch {
                    rows: f.nrows(),
                    vertices: vertices.len(),
                });
            }
            for (row, r) in f.row_iter().enumerate() {
                if r.iter().any(|x| !x.is_finite()) {
                    return Err(Error::NonFiniteFeature { row });
                }
            }
        }

        let max_rank = all.iter().map(|c| c.rank).max().unwrap_or(0);
        let mut rank_ranges = Vec::with_capacity(max_rank + 1);
        let mut start = 0;
        for r in 0..=max_rank {
            let end = start + all[start..].iter().take_while(|c| c.rank == r).count();
            rank_ranges.push(start..end);
            start = end;
        }

        Ok(CombinatorialComplex {
            vertices,
            cells: all,
            rank_ranges,
            max_rank,
            features,
        })
    }

    /// Interprets an undirected graph as a complex: vertices are rank-0
    /// cells, edges rank-1 cells. `vertices` may declare isolated vertices
    /// not covered by any edge.
    pub fn from_graph(vertices: &[u32], edges: &[(u32, u32)]) -> Result<Self> {
        let mut cells = Vec::with_capacity(vertices.len() + edges.len());
        for &v in vertices {
            cells.push(Cell::new([v], 0)?);
        }
        for &(a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            cells.push(Cell::new([a, b], 1)?);
        }
        Self::build(cells, None)
    }

    /// Builds the downward closure of a set of maximal simplices; a simplex
    /// on `k + 1` vertices becomes a cell of rank `k`.
    pub fn from_simplicial(maximal: &[Vec<u32>]) -> Result<Self> {
        let mut cells: BTreeSet<(usize, Vec<u32>)> = BTreeSet::new();
        for simplex in maximal {
            let set: BTreeSet<u32> = simplex.iter().copied().collect();
            if set.is_empty() {
                return Err(Error::EmptyCell);
            }
            let verts: Vec<u32> = set.into_iter().collect();
            let s = verts.len();
            for mask in 1u64..(1 << s) {
                let subset: Vec<u32> = (0..s)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| verts[i])
                    .collect();
                let rank = subset.len() - 1;
                cells.insert((rank, subset));
            }
        }
        let cells = cells
            .into_iter()
            .map(|(rank, vs)| Cell::new(vs, rank))
            .collect::<Result<Vec<_>>>()?;
        Self::build(cells, None)
    }

    /// Renames vertices by a permutation of the vertex index range: the
    /// vertex at position `i` takes the label of the vertex at position
    /// `p(i)`. Cell structure, ranks, and per-vertex features follow their
    /// vertex.
    pub fn relabel(&self, p: &Permutation) -> Result<Self> {
        if p.len() != self.vertices.len() {
            return Err(Error::PermutationSizeMismatch {
                expected: self.vertices.len(),
                got: p.len(),
            });
        }
        let id_map: HashMap<VertexId, VertexId> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, self.vertices[p.apply(i)]))
            .collect();
        let cells = self
            .cells
            .iter()
            .map(|c| {
                Cell::new(
                    c.vertices.iter().map(|v| id_map[v].0).collect::<Vec<_>>(),
                    c.rank,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let features = self.features.as_ref().map(|f| {
            let mut out = f.clone();
            for i in 0..f.nrows() {
                out.set_row(p.apply(i), &f.row(i));
            }
            out
        });
        Self::build(cells, features)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// All cells in canonical order (rank ascending, lexicographic within).
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    /// Cells of exactly rank `k`, in canonical order. Empty slice when the
    /// complex has no cells of that rank.
    pub fn cells_of_rank(&self, k: usize) -> &[Cell] {
        match self.rank_ranges.get(k) {
            Some(r) => &self.cells[r.clone()],
            None => &[],
        }
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    pub fn features(&self) -> Option<&DMatrix<f64>> {
        self.features.as_ref()
    }

    /// Position of a vertex in the canonical vertex order.
    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// Positions of a cell's vertices in the canonical vertex order.
    pub(crate) fn vertex_positions(&self, cell: &Cell) -> Vec<usize> {
        cell.vertices
            .iter()
            .map(|&v| self.vertex_index(v).expect("cell vertex missing from complex"))
            .collect()
    }

    /// Number of cells per rank, `counts[k]` = number of rank-k cells.
    pub fn rank_counts(&self) -> Vec<usize> {
        (0..=self.max_rank)
            .map(|k| self.cells_of_rank(k).len())
            .collect()
    }
}

/// Upper bound on cell size for subset-enumeration rank checking; larger
/// cells fall back to a pairwise scan.
const SUBSET_ENUM_LIMIT: usize = 12;

/// Verifies `x proper-subset-of y implies rank(x) <= rank(y)` over all cell
/// pairs. Cells sharing a vertex set may carry different ranks; they are
/// distinct cells, not subset-related.
fn check_order_preserving(cells: &[Cell]) -> Result<()> {
    // vertex set -> max rank among cells with that exact set
    let mut max_rank_of: HashMap<&[VertexId], (usize, &Cell)> = HashMap::new();
    for c in cells {
        max_rank_of
            .entry(&c.vertices)
            .and_modify(|e| {
                if c.rank > e.0 {
                    *e = (c.rank, c);
                }
            })
            .or_insert((c.rank, c));
    }

    let mut buf: Vec<VertexId> = Vec::new();
    for y in cells {
        let s = y.len();
        if s == 1 {
            continue;
        }
        if s <= SUBSET_ENUM_LIMIT {
            let full: u64 = (1 << s) - 1;
            for mask in 1u64..full {
                buf.clear();
                for (i, &v) in y.vertices.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        buf.push(v);
                    }
                }
                if let Some(&(r, witness)) = max_rank_of.get(buf.as_slice()) {
                    if r > y.rank {
                        return Err(rank_violation(witness, y));
                    }
                }
            }
        } else {
            for x in cells {
                if x.len() < s && x.rank > y.rank && x.is_subset_of(y) {
                    return Err(rank_violation(x, y));
                }
            }
        }
    }
    Ok(())
}

fn rank_violation(sub: &Cell, sup: &Cell) -> Error {
    Error::RankViolation {
        reason: format!(
            "cell {{{}}} of rank {} is contained in cell {{{}}} of rank {}",
            sub.label(),
            sub.rank,
            sup.label(),
            sup.rank
        ),
    }
}

/// A bijection over the vertex index range `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// `map[i]` is the image of index `i`; must be a bijection on `0..len`.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &j in &map {
            if j >= n || seen[j] {
                return Err(Error::InvalidPermutation(n));
            }
            seen[j] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Uniformly random permutation (Fisher–Yates).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(rng);
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Function composition: `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "permutation sizes differ");
        Permutation {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { map: inv }
    }

    /// Permutation matrix `P` with `P[(p(i), i)] = 1`, so a vector indexed by
    /// old positions transforms as `f' = P f` and a conjugated operator as
    /// `P L P^T`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.map.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &j) in self.map.iter().enumerate() {
            m[(j, i)] = 1.0;
        }
        m
    }
}
