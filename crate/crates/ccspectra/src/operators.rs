//! Signed incidence matrices, boundary operators, and the two Laplacians.
//!
//! The central operator is the rank-aware Laplacian over rank-0 cells,
//! `L = Σ_{i=1..R} b_i δ_i δ_i^T`, where `δ_i` is the signed incidence
//! matrix from rank 0 to rank `i` and the weights `b_i` have pairwise
//! distinct subset sums so that no two rank mixtures can collide. With the
//! default dyadic weights (`b_1 = 1`) the Laplacian of a graph complex is
//! exactly the classical `D - A`.
//!
//! The Hodge Laplacian `Δ_k = ∂_{k+1} ∂_{k+1}^T + ∂_k^T ∂_k` is provided for
//! contrast: it only sees cells through adjacent-rank boundaries, so a cell
//! with no neighbors one rank below or above contributes nothing to any
//! `Δ_k`.

use nalgebra::DMatrix;

use crate::complex::CombinatorialComplex;
use crate::error::{Error, Result};

/// Sparse column-major matrix with entries in {-1, 0, +1}.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMatrix {
    n_rows: usize,
    columns: Vec<Vec<(usize, i8)>>,
}

impl SignedMatrix {
    fn new(n_rows: usize, columns: Vec<Vec<(usize, i8)>>) -> Self {
        SignedMatrix { n_rows, columns }
    }

    /// (rows, columns)
    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.columns.len())
    }

    /// Nonzero entries of column `j` as `(row, sign)` pairs.
    pub fn column(&self, j: usize) -> &[(usize, i8)] {
        &self.columns[j]
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n_rows, self.columns.len());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, s) in col {
                m[(i, j)] = s as f64;
            }
        }
        m
    }

    /// Adds `scale * B B^T` into `out` (shape `n_rows x n_rows`).
    fn add_scaled_outer_gram(&self, scale: f64, out: &mut DMatrix<f64>) {
        for col in &self.columns {
            for &(a, sa) in col {
                for &(b, sb) in col {
                    out[(a, b)] += scale * (sa as f64) * (sb as f64);
                }
            }
        }
    }

    /// `B B^T` as a dense matrix.
    pub fn outer_gram(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n_rows, self.n_rows);
        self.add_scaled_outer_gram(1.0, &mut out);
        out
    }

    /// `B^T B` as a dense matrix (Gram matrix of the columns).
    pub fn inner_gram(&self) -> DMatrix<f64> {
        let n = self.columns.len();
        let mut rows: Vec<Vec<(usize, i8)>> = vec![Vec::new(); self.n_rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, s) in col {
                rows[i].push((j, s));
            }
        }
        let mut out = DMatrix::zeros(n, n);
        for row in &rows {
            for &(a, sa) in row {
                for &(b, sb) in row {
                    out[(a, b)] += (sa as f64) * (sb as f64);
                }
            }
        }
        out
    }
}

/// Signed incidence matrix `δ_k` from rank-0 cells to rank-k cells.
///
/// Each column carries exactly one `+1`, on the smallest vertex of the cell,
/// and `-1` on every other vertex it contains.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedIncidence {
    rank: usize,
    matrix: SignedMatrix,
}

impl SignedIncidence {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &SignedMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> (usize, usize) {
        self.matrix.shape()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        self.matrix.to_dense()
    }
}

/// Builds the signed incidence matrix from rank 0 to rank `k`, columns in
/// canonical cell order. Ranks with no cells give an `n x 0` matrix.
pub fn incidence(cc: &CombinatorialComplex, k: usize) -> Result<SignedIncidence> {
    if k < 1 || k > cc.max_rank() {
        return Err(Error::RankOutOfRange {
            k,
            max_rank: cc.max_rank(),
        });
    }
    let columns = cc
        .cells_of_rank(k)
        .iter()
        .map(|cell| {
            cc.vertex_positions(cell)
                .into_iter()
                .enumerate()
                .map(|(i, pos)| (pos, if i == 0 { 1i8 } else { -1i8 }))
                .collect()
        })
        .collect();
    Ok(SignedIncidence {
        rank: k,
        matrix: SignedMatrix::new(cc.n_vertices(), columns),
    })
}

/// Boundary operator `∂_k` mapping rank-k cells to their rank-(k-1) faces.
///
/// A face is any rank-(k-1) cell whose vertex set is a proper subset of the
/// cell's. Faces are signed `(-1)^position` in lexicographic face order, so
/// on simplicial cells this reproduces the alternating-sign boundary up to
/// overall column orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryOperator {
    rank: usize,
    matrix: SignedMatrix,
}

impl BoundaryOperator {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &SignedMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> (usize, usize) {
        self.matrix.shape()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        self.matrix.to_dense()
    }
}

/// Builds `∂_k` for `1 <= k <= max_rank`. Shape is
/// `|rank k-1 cells| x |rank k cells|`; either side may be zero.
pub fn boundary(cc: &CombinatorialComplex, k: usize) -> Result<BoundaryOperator> {
    if k < 1 || k > cc.max_rank() {
        return Err(Error::RankOutOfRange {
            k,
            max_rank: cc.max_rank(),
        });
    }
    let faces = cc.cells_of_rank(k - 1);
    let columns = cc
        .cells_of_rank(k)
        .iter()
        .map(|cell| {
            let mut entries = Vec::new();
            for (row, face) in faces.iter().enumerate() {
                if face.len() < cell.len() && face.is_subset_of(cell) {
                    let sign = if entries.len() % 2 == 0 { 1i8 } else { -1i8 };
                    entries.push((row, sign));
                }
            }
            entries
        })
        .collect();
    Ok(BoundaryOperator {
        rank: k,
        matrix: SignedMatrix::new(faces.len(), columns),
    })
}

/// Hodge Laplacian `Δ_k = ∂_{k+1} ∂_{k+1}^T + ∂_k^T ∂_k` over rank-k cells,
/// with `∂_0` and `∂_{R+1}` the zero operators.
pub fn hodge_laplacian(cc: &CombinatorialComplex, k: usize) -> Result<DMatrix<f64>> {
    if k > cc.max_rank() {
        return Err(Error::RankOutOfRange {
            k,
            max_rank: cc.max_rank(),
        });
    }
    let nk = cc.cells_of_rank(k).len();
    let mut out = DMatrix::zeros(nk, nk);
    if k < cc.max_rank() {
        let up = boundary(cc, k + 1)?;
        up.matrix.add_scaled_outer_gram(1.0, &mut out);
    }
    if k >= 1 {
        out += boundary(cc, k)?.matrix.inner_gram();
    }
    Ok(out)
}

/// Named weight families for [`WeightScheme`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// `b_i = 2^(1-i)`: `1, 1/2, 1/4, ...`; subset sums are distinct and
    /// `b_1 = 1` keeps graph complexes on the classical graph Laplacian.
    Dyadic,
    /// Caller-supplied positive weights.
    Custom,
}

impl WeightKind {
    pub fn from_name(name: &str) -> Result<WeightKind> {
        match name {
            "dyadic" => Ok(WeightKind::Dyadic),
            other => Err(Error::UnknownScheme(other.to_string())),
        }
    }
}

/// Per-rank weights `b_1..b_R`, strictly positive with pairwise distinct
/// subset sums.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightScheme {
    kind: WeightKind,
    weights: Vec<f64>,
}

impl WeightScheme {
    /// Dyadic weights for ranks `1..=max_rank`.
    pub fn dyadic(max_rank: usize) -> WeightScheme {
        WeightScheme {
            kind: WeightKind::Dyadic,
            weights: (1..=max_rank as i32).map(|i| 2f64.powi(1 - i)).collect(),
        }
    }

    /// Builds the named scheme sized for `max_rank`.
    pub fn of_kind(name: &str, max_rank: usize) -> Result<WeightScheme> {
        match WeightKind::from_name(name)? {
            WeightKind::Dyadic => Ok(WeightScheme::dyadic(max_rank)),
            WeightKind::Custom => unreachable!("custom schemes have no name"),
        }
    }

    /// Validates caller-supplied weights: positive, and (for up to 20 ranks,
    /// where the exhaustive check is feasible) pairwise distinct subset sums.
    pub fn custom(weights: Vec<f64>) -> Result<WeightScheme> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w <= 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weights must be positive finite reals, got {w}"
            )));
        }
        if weights.len() <= 20 && !subset_sums_distinct(&weights) {
            return Err(Error::InvalidWeights(
                "two distinct rank subsets share the same weight sum".into(),
            ));
        }
        Ok(WeightScheme {
            kind: WeightKind::Custom,
            weights,
        })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weight `b_k` for rank `k` (1-based).
    pub fn rank_weight(&self, k: usize) -> f64 {
        self.weights[k - 1]
    }
}

/// Exhaustively checks that all `2^n` subset sums are pairwise distinct.
/// Exact in f64 for the dyadic family; intended for `n <= 20`.
pub fn subset_sums_distinct(weights: &[f64]) -> bool {
    let n = weights.len();
    let mut sums: Vec<f64> = (0u64..(1 << n))
        .map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| weights[i])
                .sum()
        })
        .collect();
    sums.sort_by(f64::total_cmp);
    sums.windows(2).all(|w| w[0] != w[1])
}

/// Which quadratic form realizes the Laplacian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `L = Σ b_i δ_i δ_i^T` with the signed incidence columns, taken
    /// literally. Cells on more than two vertices produce mixed off-diagonal
    /// signs, and because the +1 follows the smallest vertex *label*,
    /// relabeling such cells does not conjugate this form: only [`Dirichlet`]
    /// is relabeling-equivariant beyond two-vertex cells. The conventions
    /// coincide when every cell of rank >= 1 has exactly two vertices.
    SignedIncidence,
    /// `L = Σ b_i (D_i - A_i)` where `A_i` counts rank-i co-memberships.
    /// Off-diagonals are non-positive and rows sum to zero, so `f^T L f` is
    /// the weighted sum of squared differences across co-members.
    Dirichlet,
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Convention::SignedIncidence => write!(f, "signed"),
            Convention::Dirichlet => write!(f, "dirichlet"),
        }
    }
}

/// The rank-weighted Laplacian over rank-0 cells, together with the weight
/// scheme and convention that produced it. Symmetric positive semidefinite;
/// rows and columns follow the complex's vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct CcLaplacian {
    matrix: DMatrix<f64>,
    weights: WeightScheme,
    convention: Convention,
}

impl CcLaplacian {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn weights(&self) -> &WeightScheme {
        &self.weights
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Assembles the Laplacian. `weights` must provide exactly one weight per
/// rank `1..=max_rank`. The two conventions coincide whenever every cell of
/// rank >= 1 contains exactly two vertices (in particular on graphs).
pub fn cc_laplacian(
    cc: &CombinatorialComplex,
    weights: &WeightScheme,
    convention: Convention,
) -> Result<CcLaplacian> {
    if weights.len() != cc.max_rank() {
        return Err(Error::WeightLengthMismatch {
            expected: cc.max_rank(),
            got: weights.len(),
        });
    }
    let n = cc.n_vertices();
    let mut m = DMatrix::zeros(n, n);
    match convention {
        Convention::SignedIncidence => {
            for k in 1..=cc.max_rank() {
                incidence(cc, k)?
                    .matrix
                    .add_scaled_outer_gram(weights.rank_weight(k), &mut m);
            }
        }
        Convention::Dirichlet => {
            for k in 1..=cc.max_rank() {
                let b = weights.rank_weight(k);
                for cell in cc.cells_of_rank(k) {
                    let pos = cc.vertex_positions(cell);
                    let deg = (pos.len() - 1) as f64;
                    for &a in &pos {
                        m[(a, a)] += b * deg;
                    }
                    for &a in &pos {
                        for &bpos in &pos {
                            if a != bpos {
                                m[(a, bpos)] -= b;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(CcLaplacian {
        matrix: m,
        weights: weights.clone(),
        convention,
    })
}
