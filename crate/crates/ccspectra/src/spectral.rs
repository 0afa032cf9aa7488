//! Eigendecomposition, heat kernels, and heat-kernel-signature descriptors.
//!
//! Everything here runs off a single full symmetric eigendecomposition
//! `L = Φ diag(λ) Φ^T`. The heat kernel at diffusion time `t` is
//! `K_t = Φ diag(e^{-tλ}) Φ^T`, and the HKS descriptor of a rank-0 cell `c`
//! is the vector of diagonal entries `K_t(c,c)` across a grid of times:
//! small times see local structure, large times global connectivity. The
//! diagonal of `Φ diag(·) Φ^T` is invariant under the choice of basis inside
//! an eigenspace, so descriptors are well-defined even with repeated
//! eigenvalues.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::complex::{CombinatorialComplex, VertexId};
use crate::error::{Error, Result};
use crate::operators::{CcLaplacian, WeightScheme};

/// Numerically negative eigenvalues in `[-CLAMP, 0)` are snapped to zero.
const EIGENVALUE_CLAMP: f64 = 1e-10;
/// Maximum tolerated entrywise asymmetry of an input matrix.
const SYMMETRY_TOL: f64 = 1e-10;

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// symmetric operator; the reusable factorization behind all heat kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatSpectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl HeatSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal matrix whose columns are eigenvectors, aligned with
    /// `eigenvalues`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Full symmetric eigendecomposition of an arbitrary symmetric matrix.
///
/// Eigenvalues come back ascending with the `[-1e-10, 0)` window clamped to
/// zero; each eigenvector's first non-negligible component is made positive
/// so repeated runs agree bit-for-bit.
pub fn eigendecompose_matrix(matrix: &DMatrix<f64>) -> Result<HeatSpectrum> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: matrix.ncols(),
        });
    }
    let mut max_asym = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            max_asym = max_asym.max((matrix[(i, j)] - matrix[(j, i)]).abs());
        }
    }
    if max_asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { max_asym });
    }
    if n == 0 {
        return Ok(HeatSpectrum {
            eigenvalues: Vec::new(),
            eigenvectors: DMatrix::zeros(0, 0),
        });
    }

    let eig = SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, 0)
        .ok_or(Error::SolverFailure)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut lambda = eig.eigenvalues[src];
        if (-EIGENVALUE_CLAMP..0.0).contains(&lambda) {
            lambda = 0.0;
        }
        eigenvalues.push(lambda);
        let mut col = eig.eigenvectors.column(src).clone_owned();
        if let Some(first) = col.iter().find(|x| x.abs() > 1e-12) {
            if *first < 0.0 {
                col.neg_mut();
            }
        }
        eigenvectors.set_column(dst, &col);
    }
    Ok(HeatSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigendecomposition of a [`CcLaplacian`].
pub fn eigendecompose(laplacian: &CcLaplacian) -> Result<HeatSpectrum> {
    eigendecompose_matrix(laplacian.matrix())
}

/// Heat kernel `K_t = Φ diag(e^{-tλ}) Φ^T`. `t = 0` returns the exact
/// identity; negative times are rejected.
pub fn heat_kernel(spectrum: &HeatSpectrum, t: f64) -> Result<DMatrix<f64>> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let n = spectrum.len();
    if t == 0.0 {
        return Ok(DMatrix::identity(n, n));
    }
    let mut scaled = spectrum.eigenvectors.clone();
    for (i, &lambda) in spectrum.eigenvalues.iter().enumerate() {
        let factor = (-t * lambda).exp();
        scaled.column_mut(i).scale_mut(factor);
    }
    let k = &scaled * spectrum.eigenvectors.transpose();
    // The triple product is symmetric only up to roundoff; make it exact.
    Ok(0.5 * (&k + k.transpose()))
}

/// Strictly increasing positive diffusion times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<TimeGrid> {
        if times.is_empty() {
            return Err(Error::NonPositiveCount);
        }
        if times.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(Error::InvalidTimeGrid(
                "times must be positive finite reals".into(),
            ));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTimeGrid(
                "times must be strictly increasing".into(),
            ));
        }
        Ok(TimeGrid { times })
    }

    /// `d` equally spaced times `t_j = t_max * j / d`, excluding zero and
    /// including the endpoint.
    pub fn uniform(d: usize, t_max: f64) -> Result<TimeGrid> {
        if d == 0 {
            return Err(Error::NonPositiveCount);
        }
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(Error::InvalidTimeGrid(format!(
                "t_max must be positive, got {t_max}"
            )));
        }
        TimeGrid::new((1..=d).map(|j| t_max * j as f64 / d as f64).collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// The default descriptor grid: `d` equally spaced times between 0
/// (excluded) and 3 (included); `d = 10` unless configured otherwise.
pub fn default_grid(d: usize) -> Result<TimeGrid> {
    TimeGrid::uniform(d, DEFAULT_T_MAX)
}

pub const DEFAULT_TIME_COUNT: usize = 10;
pub const DEFAULT_T_MAX: f64 = 3.0;

/// Per-cell heat kernel signatures: row `c` holds
/// `[K_{t_1}(c), ..., K_{t_d}(c)]` in the complex's vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct HksTable {
    values: DMatrix<f64>,
    grid: TimeGrid,
    vertices: Vec<VertexId>,
}

impl HksTable {
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Rows as a lexicographically sorted multiset; see
    /// [`sorted_value_rows`].
    pub fn sorted_rows(&self, quantum: f64) -> Vec<Vec<f64>> {
        sorted_value_rows(&self.values, quantum)
    }

    /// CSV rendering with header `vertex,t_1,...,t_d`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex");
        for j in 1..=self.grid.len() {
            out.push_str(&format!(",t_{j}"));
        }
        out.push('\n');
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&v.to_string());
            for j in 0..self.grid.len() {
                out.push_str(&format!(",{}", self.values[(i, j)]));
            }
            out.push('\n');
        }
        out
    }
}

/// Raw HKS value matrix of any spectrum:
/// `values[c][j] = Σ_i e^{-t_j λ_i} Φ(c,i)^2`, computed directly from the
/// spectrum without forming full kernel matrices.
///
/// Each value is the diagonal of a PSD contraction, so it lies in `(0, 1]`
/// exactly; eigenvector roundoff can push the sum a few ulps past 1 and is
/// capped back.
pub fn hks_values(spectrum: &HeatSpectrum, grid: &TimeGrid) -> DMatrix<f64> {
    let n = spectrum.len();
    let d = grid.len();
    let phi_sq = spectrum.eigenvectors.component_mul(&spectrum.eigenvectors);
    let decay = DMatrix::from_fn(n, d, |i, j| {
        (-grid.times()[j] * spectrum.eigenvalues[i]).exp()
    });
    let mut values = phi_sq * decay;
    values.apply(|x| *x = x.min(1.0));
    values
}

/// Rows of a value matrix as a lexicographically sorted multiset. Sorting
/// compares values quantized to `quantum` so float jitter cannot reorder
/// effectively-equal rows; the returned rows keep their raw values.
pub fn sorted_value_rows(values: &DMatrix<f64>, quantum: f64) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = values
        .row_iter()
        .map(|r| r.iter().copied().collect())
        .collect();
    rows.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            let qx = (x / quantum).round();
            let qy = (y / quantum).round();
            match qx.total_cmp(&qy) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    rows
}

/// HKS table labeled by rank-0 cells.
pub fn hks(
    spectrum: &HeatSpectrum,
    grid: &TimeGrid,
    vertices: &[VertexId],
) -> Result<HksTable> {
    if vertices.len() != spectrum.len() {
        return Err(Error::DimensionMismatch {
            expected: spectrum.len(),
            got: vertices.len(),
        });
    }
    Ok(HksTable {
        values: hks_values(spectrum, grid),
        grid: grid.clone(),
        vertices: vertices.to_vec(),
    })
}

/// Convenience: HKS table of a complex under a given Laplacian.
pub fn hks_of_complex(
    cc: &CombinatorialComplex,
    laplacian: &CcLaplacian,
    grid: &TimeGrid,
) -> Result<HksTable> {
    let spectrum = eigendecompose(laplacian)?;
    hks(&spectrum, grid, cc.vertices())
}

/// The quadratic form `f^T L f`, measuring how much `f` varies across the
/// complex's connections.
pub fn smoothness(laplacian: &CcLaplacian, f: &[f64]) -> Result<f64> {
    let n = laplacian.n();
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.len(),
        });
    }
    let m = laplacian.matrix();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += f[i] * m[(i, j)] * f[j];
        }
    }
    Ok(acc)
}

/// Weighted sum of squared differences
/// `Σ_{i<j} ω_ij (f_i - f_j)^2` with `ω_ij = Σ_k b_k · #{rank-k cells
/// containing both}`, computed straight from the cell list without any
/// matrix. Under the Dirichlet convention this equals [`smoothness`].
pub fn dirichlet_energy(
    cc: &CombinatorialComplex,
    weights: &WeightScheme,
    f: &[f64],
) -> Result<f64> {
    if f.len() != cc.n_vertices() {
        return Err(Error::DimensionMismatch {
            expected: cc.n_vertices(),
            got: f.len(),
        });
    }
    if weights.len() != cc.max_rank() {
        return Err(Error::WeightLengthMismatch {
            expected: cc.max_rank(),
            got: weights.len(),
        });
    }
    let mut acc = 0.0;
    for k in 1..=cc.max_rank() {
        let b = weights.rank_weight(k);
        for cell in cc.cells_of_rank(k) {
            let pos = cc.vertex_positions(cell);
            for (ai, &a) in pos.iter().enumerate() {
                for &bpos in &pos[ai + 1..] {
                    let diff = f[a] - f[bpos];
                    acc += b * diff * diff;
                }
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Cell;
    use crate::operators::{cc_laplacian, Convention};
    use approx::assert_abs_diff_eq;

    fn edge_laplacian(convention: Convention) -> (CombinatorialComplex, CcLaplacian) {
        let cc = CombinatorialComplex::from_graph(&[], &[(1, 2)]).unwrap();
        let l = cc_laplacian(&cc, &WeightScheme::dyadic(1), convention).unwrap();
        (cc, l)
    }

    #[test]
    fn zero_matrix_spectrum() {
        let s = eigendecompose_matrix(&DMatrix::zeros(1, 1)).unwrap();
        assert_eq!(s.eigenvalues(), &[0.0]);
        assert_eq!(s.eigenvectors()[(0, 0)], 1.0);
    }

    #[test]
    fn edge_spectrum_is_zero_two() {
        let (_, l) = edge_laplacian(Convention::SignedIncidence);
        let s = eigendecompose(&l).unwrap();
        assert_abs_diff_eq!(s.eigenvalues()[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eigenvalues()[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.5, 0.0]);
        assert!(matches!(
            eigendecompose_matrix(&m).unwrap_err(),
            Error::NotSymmetric { .. }
        ));
    }

    #[test]
    fn heat_kernel_at_zero_is_identity() {
        let (_, l) = edge_laplacian(Convention::SignedIncidence);
        let s = eigendecompose(&l).unwrap();
        assert_eq!(heat_kernel(&s, 0.0).unwrap(), DMatrix::identity(2, 2));
        assert!(matches!(
            heat_kernel(&s, -1.0).unwrap_err(),
            Error::NegativeTime(_)
        ));
    }

    #[test]
    fn edge_heat_kernel_closed_form() {
        let (_, l) = edge_laplacian(Convention::SignedIncidence);
        let s = eigendecompose(&l).unwrap();
        for t in [0.1, 0.5, 1.0, 3.0] {
            let k = heat_kernel(&s, t).unwrap();
            let diag = (1.0 + (-2.0 * t).exp()) / 2.0;
            let off = (1.0 - (-2.0 * t).exp()) / 2.0;
            assert_abs_diff_eq!(k[(0, 0)], diag, epsilon = 1e-12);
            assert_abs_diff_eq!(k[(1, 1)], diag, epsilon = 1e-12);
            assert_abs_diff_eq!(k[(0, 1)], off, epsilon = 1e-12);
        }
    }

    #[test]
    fn semigroup_property() {
        let cc = CombinatorialComplex::from_simplicial(&[vec![1, 2, 3], vec![3, 4]]).unwrap();
        let l = cc_laplacian(&cc, &WeightScheme::dyadic(2), Convention::SignedIncidence)
            .unwrap();
        let s = eigendecompose(&l).unwrap();
        let (a, b) = (0.4, 1.1);
        let lhs = heat_kernel(&s, a).unwrap() * heat_kernel(&s, b).unwrap();
        let rhs = heat_kernel(&s, a + b).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-8);
    }

    #[test]
    fn default_grid_values() {
        let g = default_grid(10).unwrap();
        assert_eq!(
            g.times(),
            &[0.3, 0.6, 0.9, 1.2, 1.5, 1.8, 2.1, 2.4, 2.7, 3.0]
        );
        assert_eq!(default_grid(1).unwrap().times(), &[3.0]);
        assert_eq!(default_grid(3).unwrap().times(), &[1.0, 2.0, 3.0]);
        assert!(matches!(default_grid(0).unwrap_err(), Error::NonPositiveCount));
    }

    #[test]
    fn time_grid_validation() {
        assert!(TimeGrid::new(vec![0.0, 1.0]).is_err());
        assert!(TimeGrid::new(vec![1.0, 1.0]).is_err());
        assert!(TimeGrid::new(vec![2.0, 1.0]).is_err());
        assert!(TimeGrid::new(vec![0.5, 1.5]).is_ok());
    }

    #[test]
    fn hks_one_vertex_is_all_ones() {
        let cc = CombinatorialComplex::build(vec![Cell::new([5], 0).unwrap()], None).unwrap();
        let l = cc_laplacian(&cc, &WeightScheme::dyadic(0), Convention::SignedIncidence)
            .unwrap();
        let table = hks_of_complex(&cc, &l, &default_grid(10).unwrap()).unwrap();
        assert!(table.values().iter().all(|&x| x == 1.0));
    }

    #[test]
    fn hks_edge_at_t3() {
        let (cc, l) = edge_laplacian(Convention::SignedIncidence);
        let grid = TimeGrid::new(vec![3.0]).unwrap();
        let table = hks_of_complex(&cc, &l, &grid).unwrap();
        let expected = (1.0 + (-6.0f64).exp()) / 2.0;
        for i in 0..2 {
            assert_abs_diff_eq!(table.values()[(i, 0)], expected, epsilon = 1e-12);
            // Frozen literal from the closed form above.
            assert_abs_diff_eq!(table.values()[(i, 0)], 0.5012394, epsilon = 1e-7);
        }
    }

    #[test]
    fn hks_matches_explicit_kernel_diagonals() {
        let cc =
            CombinatorialComplex::from_simplicial(&[vec![1, 2, 3], vec![2, 4], vec![4, 5]])
                .unwrap();
        let l = cc_laplacian(&cc, &WeightScheme::dyadic(2), Convention::SignedIncidence)
            .unwrap();
        let s = eigendecompose(&l).unwrap();
        let grid = default_grid(10).unwrap();
        let table = hks(&s, &grid, cc.vertices()).unwrap();
        for (j, &t) in grid.times().iter().enumerate() {
            let k = heat_kernel(&s, t).unwrap();
            for i in 0..cc.n_vertices() {
                assert_abs_diff_eq!(table.values()[(i, j)], k[(i, i)], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn smoothness_edge_examples() {
        let (_, l) = edge_laplacian(Convention::Dirichlet);
        assert_eq!(smoothness(&l, &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(smoothness(&l, &[2.0, 2.0]).unwrap(), 0.0);
        assert!(matches!(
            smoothness(&l, &[1.0]).unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn dirichlet_energy_edge_examples() {
        let cc = CombinatorialComplex::from_graph(&[], &[(1, 2)]).unwrap();
        let w = WeightScheme::dyadic(1);
        assert_eq!(dirichlet_energy(&cc, &w, &[2.0, -1.0]).unwrap(), 9.0);
        assert_eq!(dirichlet_energy(&cc, &w, &[4.0, 4.0]).unwrap(), 0.0);
    }

    #[test]
    fn hks_csv_shape() {
        let (cc, l) = edge_laplacian(Convention::SignedIncidence);
        let table = hks_of_complex(&cc, &l, &default_grid(3).unwrap()).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "vertex,t_1,t_2,t_3");
        assert_eq!(lines.count(), 2);
    }
}
