//! Generators for the experimental structures: discretized tori with
//! higher-rank augmentations, blind-spot pairs, the three-vertex
//! counterexample pair, and seeded random complexes for property testing.
//!
//! A blind-spot pair is a pair of non-isomorphic complexes that every Hodge
//! Laplacian sees identically: the pairs differ only in a rank-4 cell, and a
//! rank-4 cell with no rank-3 or rank-5 neighbors contributes nothing to any
//! `Δ_k`. The rank-weighted Laplacian sees it directly.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{Cell, CombinatorialComplex, Permutation};
use crate::error::{Error, Result};

/// A quad-grid torus: `m * n` vertices, `2mn` edges (rank 1), `mn`
/// four-vertex faces (rank 2), plus optional higher-rank cells each covering
/// the union of two faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusSpec {
    m: usize,
    n: usize,
    augmentations: Vec<Augmentation>,
}

/// One added cell of rank 3 or 4 whose vertex set is the union of two faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Augmentation {
    pub rank: usize,
    pub faces: (usize, usize),
}

impl TorusSpec {
    pub fn new(m: usize, n: usize) -> Result<TorusSpec> {
        if m < 3 || n < 3 {
            return Err(Error::GridTooSmall { m, n });
        }
        Ok(TorusSpec {
            m,
            n,
            augmentations: Vec::new(),
        })
    }

    /// Adds one rank-3 or rank-4 cell covering faces `a` and `b`.
    pub fn with_augmentation(mut self, rank: usize, faces: (usize, usize)) -> Result<TorusSpec> {
        if rank != 3 && rank != 4 {
            return Err(Error::UnsupportedAugmentationRank(rank));
        }
        let n_faces = self.m * self.n;
        for idx in [faces.0, faces.1] {
            if idx >= n_faces {
                return Err(Error::InvalidFaceIndex {
                    index: idx,
                    n_faces,
                });
            }
        }
        if faces.0 == faces.1 {
            return Err(Error::FacePairNotDistinct(faces.0));
        }
        self.augmentations.push(Augmentation { rank, faces });
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn augmentations(&self) -> &[Augmentation] {
        &self.augmentations
    }

    /// 2 for a base torus, otherwise the largest augmentation rank.
    pub fn max_rank(&self) -> usize {
        self.augmentations
            .iter()
            .map(|a| a.rank)
            .max()
            .unwrap_or(2)
    }

    fn vertex(&self, i: usize, j: usize) -> u32 {
        (i * self.n + j) as u32
    }

    /// The four vertices of face `f` (anchored at its top-left corner,
    /// row-major), with wraparound.
    pub fn face_vertices(&self, f: usize) -> [u32; 4] {
        let (i, j) = (f / self.n, f % self.n);
        let (i2, j2) = ((i + 1) % self.m, (j + 1) % self.n);
        [
            self.vertex(i, j),
            self.vertex(i, j2),
            self.vertex(i2, j),
            self.vertex(i2, j2),
        ]
    }

    /// Chebyshev distance between two faces on the wrapped face grid.
    pub fn face_distance(&self, a: usize, b: usize) -> usize {
        let (ai, aj) = (a / self.n, a % self.n);
        let (bi, bj) = (b / self.n, b % self.n);
        let di = wrap_delta(ai, bi, self.m);
        let dj = wrap_delta(aj, bj, self.n);
        di.max(dj)
    }

    /// True when faces `a` and `b` share an edge of the grid.
    pub fn faces_edge_adjacent(&self, a: usize, b: usize) -> bool {
        let (ai, aj) = (a / self.n, a % self.n);
        let (bi, bj) = (b / self.n, b % self.n);
        let di = wrap_delta(ai, bi, self.m);
        let dj = wrap_delta(aj, bj, self.n);
        (di == 0 && dj == 1) || (di == 1 && dj == 0)
    }
}

fn wrap_delta(a: usize, b: usize, dim: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(dim - d)
}

/// Builds the torus complex described by `spec`.
pub fn make_torus(spec: &TorusSpec) -> Result<CombinatorialComplex> {
    let (m, n) = (spec.m, spec.n);
    let mut cells = Vec::with_capacity(4 * m * n + spec.augmentations.len());
    for i in 0..m {
        for j in 0..n {
            let v = spec.vertex(i, j);
            cells.push(Cell::new([v], 0)?);
            cells.push(Cell::new([v, spec.vertex(i, (j + 1) % n)], 1)?);
            cells.push(Cell::new([v, spec.vertex((i + 1) % m, j)], 1)?);
            cells.push(Cell::new(spec.face_vertices(i * n + j), 2)?);
        }
    }
    for aug in &spec.augmentations {
        let mut verts: Vec<u32> = spec.face_vertices(aug.faces.0).to_vec();
        verts.extend(spec.face_vertices(aug.faces.1));
        cells.push(Cell::new(verts, aug.rank)?);
    }
    CombinatorialComplex::build(cells, None)
}

/// A labeled pair of complexes on the same vertex count.
#[derive(Debug, Clone, PartialEq)]
pub struct PairInstance {
    pub left: CombinatorialComplex,
    pub right: CombinatorialComplex,
    /// Ground-truth label: are the two sides isomorphic?
    pub isomorphic: bool,
    pub description: String,
}

/// How a blind-spot pair differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlindspotMode {
    /// Left carries one rank-4 cell over a seeded face pair; right is the
    /// bare torus.
    PresentAbsent,
    /// Both sides carry one rank-4 cell: left over two edge-adjacent faces,
    /// right over two faces as far apart as the grid allows.
    AdjacentDistant,
}

impl BlindspotMode {
    pub fn parse(s: &str) -> Result<BlindspotMode> {
        match s {
            "present-absent" => Ok(BlindspotMode::PresentAbsent),
            "adjacent-distant" => Ok(BlindspotMode::AdjacentDistant),
            other => Err(Error::UnknownMode(other.to_string())),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BlindspotMode::PresentAbsent => "present-absent",
            BlindspotMode::AdjacentDistant => "adjacent-distant",
        }
    }
}

impl std::fmt::Display for BlindspotMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Generates one non-isomorphic torus pair whose Hodge Laplacians all
/// coincide (the differing rank-4 cells have no rank-3 or rank-5 neighbors).
pub fn make_blindspot_pair(
    m: usize,
    n: usize,
    mode: BlindspotMode,
    seed: u64,
) -> Result<PairInstance> {
    let base = TorusSpec::new(m, n)?;
    let n_faces = m * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let anchor = rng.gen_range(0..n_faces);

    match mode {
        BlindspotMode::PresentAbsent => {
            let mut other = rng.gen_range(0..n_faces);
            while other == anchor {
                other = rng.gen_range(0..n_faces);
            }
            let left = make_torus(&base.clone().with_augmentation(4, (anchor, other))?)?;
            let right = make_torus(&base)?;
            Ok(PairInstance {
                left,
                right,
                isomorphic: false,
                description: format!(
                    "{m}x{n} torus, rank-4 cell over faces ({anchor},{other}) vs absent"
                ),
            })
        }
        BlindspotMode::AdjacentDistant => {
            let (ai, aj) = (anchor / n, anchor % n);
            let adjacent = if rng.gen_bool(0.5) {
                ai * n + (aj + 1) % n
            } else {
                ((ai + 1) % m) * n + aj
            };
            // Farthest faces from the anchor; on 3x3 grids every face pair is
            // within Chebyshev distance 1, so fall back to the farthest
            // non-edge-adjacent (diagonal) choice.
            let max_dist = (0..n_faces)
                .filter(|&f| f != anchor && !base.faces_edge_adjacent(anchor, f))
                .map(|f| base.face_distance(anchor, f))
                .max()
                .expect("grid of at least 3x3 has non-adjacent faces");
            let candidates: Vec<usize> = (0..n_faces)
                .filter(|&f| {
                    f != anchor
                        && !base.faces_edge_adjacent(anchor, f)
                        && base.face_distance(anchor, f) == max_dist
                })
                .collect();
            let distant = candidates[rng.gen_range(0..candidates.len())];
            let left = make_torus(&base.clone().with_augmentation(4, (anchor, adjacent))?)?;
            let right = make_torus(&base.clone().with_augmentation(4, (anchor, distant))?)?;
            Ok(PairInstance {
                left,
                right,
                isomorphic: false,
                description: format!(
                    "{m}x{n} torus, rank-4 cell over adjacent faces ({anchor},{adjacent}) \
                     vs distant faces ({anchor},{distant})"
                ),
            })
        }
    }
}

/// The three-vertex counterexample: complex A has an edge {1,2} plus a
/// rank-4 cell {1,2,3}; complex B drops the rank-4 cell. Every Hodge
/// Laplacian coincides, the rank-weighted Laplacian does not.
pub fn fig4_pair() -> PairInstance {
    let a = CombinatorialComplex::build(
        vec![
            Cell::new([1, 2], 1).unwrap(),
            Cell::new([1, 2, 3], 4).unwrap(),
        ],
        None,
    )
    .unwrap();
    let b = CombinatorialComplex::build(
        vec![Cell::new([1, 2], 1).unwrap(), Cell::new([3], 0).unwrap()],
        None,
    )
    .unwrap();
    PairInstance {
        left: a,
        right: b,
        isomorphic: false,
        description: "edge {1,2} plus rank-4 cell {1,2,3} vs edge only".into(),
    }
}

/// What a corpus entry contains; `Control` pairs are relabeled-isomorphic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusMode {
    Blindspot(BlindspotMode),
    Control,
}

impl CorpusMode {
    pub fn parse(s: &str) -> Result<CorpusMode> {
        if s == "control" {
            Ok(CorpusMode::Control)
        } else {
            Ok(CorpusMode::Blindspot(BlindspotMode::parse(s)?))
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CorpusMode::Blindspot(m) => m.as_str(),
            CorpusMode::Control => "control",
        }
    }
}

/// One generated pair with its provenance, as recorded in corpus manifests.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusPair {
    pub pair_id: usize,
    pub mode: CorpusMode,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub instance: PairInstance,
}

fn derive_seed(seed: u64, i: usize) -> u64 {
    // splitmix64-style stream so per-pair seeds are decorrelated.
    let mut z = seed.wrapping_add((i as u64 + 1).wrapping_mul(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Deterministic corpus of blind-spot pairs, alternating between the two
/// modes, with grid sides drawn from `grid_range`. The same seed always
/// produces a structurally identical corpus.
pub fn gen_corpus(
    count: usize,
    grid_range: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Result<Vec<CorpusPair>> {
    (0..count)
        .map(|i| {
            let pair_seed = derive_seed(seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(pair_seed);
            let m = rng.gen_range(grid_range.clone());
            let n = rng.gen_range(grid_range.clone());
            let mode = if i % 2 == 0 {
                BlindspotMode::PresentAbsent
            } else {
                BlindspotMode::AdjacentDistant
            };
            let instance = make_blindspot_pair(m, n, mode, pair_seed)?;
            Ok(CorpusPair {
                pair_id: i,
                mode: CorpusMode::Blindspot(mode),
                m,
                n,
                seed: pair_seed,
                instance,
            })
        })
        .collect()
}

/// Deterministic corpus of relabeled-isomorphic control pairs built from the
/// same torus family; every pair is isomorphic by construction.
pub fn gen_control_corpus(
    count: usize,
    grid_range: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Result<Vec<CorpusPair>> {
    (0..count)
        .map(|i| {
            let pair_seed = derive_seed(seed ^ 0xC0117801, i);
            let mut rng = ChaCha8Rng::seed_from_u64(pair_seed);
            let m = rng.gen_range(grid_range.clone());
            let n = rng.gen_range(grid_range.clone());
            let mode = if i % 2 == 0 {
                BlindspotMode::PresentAbsent
            } else {
                BlindspotMode::AdjacentDistant
            };
            let left = make_blindspot_pair(m, n, mode, pair_seed)?.left;
            let p = Permutation::random(left.n_vertices(), &mut rng);
            let right = left.relabel(&p)?;
            Ok(CorpusPair {
                pair_id: i,
                mode: CorpusMode::Control,
                m,
                n,
                seed: pair_seed,
                instance: PairInstance {
                    isomorphic: true,
                    description: format!("{m}x{n} torus vs random relabeling"),
                    left,
                    right,
                },
            })
        })
        .collect()
}

/// One manifest line of a corpus directory; file paths are relative to the
/// manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub pair_id: usize,
    pub left_file: String,
    pub right_file: String,
    pub mode: String,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
}

/// Renders manifest rows as CSV with the canonical header.
pub fn render_manifest(rows: &[ManifestRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("manifest rows serialize");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("manifest is utf-8")
}

/// Parses a manifest CSV, validating the mode column.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.deserialize::<ManifestRow>() {
        let row = record.map_err(|e| {
            let line = e
                .position()
                .map(|p| p.line() as usize)
                .unwrap_or(0);
            Error::Syntax {
                line,
                column: 0,
                message: e.to_string(),
            }
        })?;
        CorpusMode::parse(&row.mode)?;
        rows.push(row);
    }
    Ok(rows)
}

/// Seeded random valid complex with up to `max_vertices` vertices and cells
/// of rank at most `max_rank`. Ranks are drawn freely and then raised along
/// the subset order so the result always validates.
pub fn random_complex<R: Rng + ?Sized>(
    rng: &mut R,
    max_vertices: usize,
    max_rank: usize,
) -> CombinatorialComplex {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut raw: Vec<(Vec<u32>, usize)> = Vec::new();
    if n >= 2 {
        let n_cells = rng.gen_range(0..=2 * n);
        for _ in 0..n_cells {
            let size = rng.gen_range(2..=n.min(6));
            let verts: Vec<u32> = sample(rng, n, size).iter().map(|v| v as u32).collect();
            let rank = rng.gen_range(1..=max_rank.max(1));
            raw.push((verts, rank));
        }
    }

    // Raise ranks along the subset order: supersets inherit at least the
    // rank of every proper subset already placed.
    raw.iter_mut().for_each(|(vs, _)| vs.sort_unstable());
    raw.sort_by_key(|(vs, _)| vs.len());
    for i in 0..raw.len() {
        let mut rank = raw[i].1;
        for j in 0..i {
            if raw[j].1 > rank
                && raw[j].0.len() < raw[i].0.len()
                && raw[j].0.iter().all(|v| raw[i].0.binary_search(v).is_ok())
            {
                rank = raw[j].1;
            }
        }
        raw[i].1 = rank;
    }

    let mut cells: Vec<Cell> = (0..n).map(|v| Cell::new([v as u32], 0).unwrap()).collect();
    for (vs, rank) in raw {
        cells.push(Cell::new(vs, rank).expect("generated cell is valid"));
    }
    CombinatorialComplex::build(cells, None).expect("generated complex is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io;

    #[test]
    fn base_torus_cell_counts() {
        for m in 3..=12 {
            for n in 3..=12 {
                let cc = make_torus(&TorusSpec::new(m, n).unwrap()).unwrap();
                assert_eq!(cc.cells_of_rank(0).len(), m * n, "{m}x{n} vertices");
                assert_eq!(cc.cells_of_rank(1).len(), 2 * m * n, "{m}x{n} edges");
                assert_eq!(cc.cells_of_rank(2).len(), m * n, "{m}x{n} faces");
                assert_eq!(cc.max_rank(), 2);
            }
        }
    }

    #[test]
    fn torus_3x3_with_rank4_augmentation() {
        let spec = TorusSpec::new(3, 3)
            .unwrap()
            .with_augmentation(4, (0, 4))
            .unwrap();
        let cc = make_torus(&spec).unwrap();
        assert_eq!(cc.n_cells(), 37);
        assert_eq!(cc.max_rank(), 4);
        assert_eq!(spec.max_rank(), 4);
    }

    #[test]
    fn torus_rank3_augmentation_supported() {
        let spec = TorusSpec::new(3, 4)
            .unwrap()
            .with_augmentation(3, (0, 1))
            .unwrap();
        let cc = make_torus(&spec).unwrap();
        assert_eq!(cc.max_rank(), 3);
        assert_eq!(cc.cells_of_rank(3).len(), 1);
    }

    #[test]
    fn torus_validation_errors() {
        assert!(matches!(
            TorusSpec::new(2, 5).unwrap_err(),
            Error::GridTooSmall { m: 2, n: 5 }
        ));
        let base = TorusSpec::new(3, 3).unwrap();
        assert!(matches!(
            base.clone().with_augmentation(5, (0, 1)).unwrap_err(),
            Error::UnsupportedAugmentationRank(5)
        ));
        assert!(matches!(
            base.clone().with_augmentation(4, (0, 9)).unwrap_err(),
            Error::InvalidFaceIndex { index: 9, .. }
        ));
        assert!(matches!(
            base.with_augmentation(4, (3, 3)).unwrap_err(),
            Error::FacePairNotDistinct(3)
        ));
    }

    #[test]
    fn present_absent_pair_counts() {
        let pair = make_blindspot_pair(3, 3, BlindspotMode::PresentAbsent, 0).unwrap();
        assert_eq!(pair.left.n_cells(), 37);
        assert_eq!(pair.right.n_cells(), 36);
        assert!(!pair.isomorphic);
        assert_eq!(pair.left.n_vertices(), pair.right.n_vertices());
    }

    #[test]
    fn adjacent_distant_pair_shapes() {
        let pair = make_blindspot_pair(3, 3, BlindspotMode::AdjacentDistant, 0).unwrap();
        assert_eq!(pair.left.n_cells(), pair.right.n_cells());
        // Adjacent faces overlap in two vertices, the diagonal fallback in
        // one: the rank-4 cells have different sizes.
        let left_cell = &pair.left.cells_of_rank(4)[0];
        let right_cell = &pair.right.cells_of_rank(4)[0];
        assert_eq!(left_cell.len(), 6);
        assert_eq!(right_cell.len(), 7);

        // On larger grids the distant faces are disjoint.
        let pair = make_blindspot_pair(5, 5, BlindspotMode::AdjacentDistant, 3).unwrap();
        assert_eq!(pair.left.cells_of_rank(4)[0].len(), 6);
        assert_eq!(pair.right.cells_of_rank(4)[0].len(), 8);
    }

    #[test]
    fn fig4_pair_shape() {
        let pair = fig4_pair();
        assert_eq!(pair.left.n_cells(), 5);
        assert_eq!(pair.left.max_rank(), 4);
        assert_eq!(pair.right.n_cells(), 4);
        assert_eq!(pair.right.max_rank(), 1);
        assert_eq!(pair.left.n_vertices(), 3);
        assert_eq!(pair.right.n_vertices(), 3);
    }

    #[test]
    fn corpus_is_deterministic_and_mixed() {
        let a = gen_corpus(10, 3..=5, 7).unwrap();
        let b = gen_corpus(10, 3..=5, 7).unwrap();
        assert_eq!(a, b);
        let texts_a: Vec<String> = a.iter().map(|p| io::serialize(&p.instance.left)).collect();
        let texts_b: Vec<String> = b.iter().map(|p| io::serialize(&p.instance.left)).collect();
        assert_eq!(texts_a, texts_b);
        assert!(a
            .iter()
            .any(|p| p.mode == CorpusMode::Blindspot(BlindspotMode::PresentAbsent)));
        assert!(a
            .iter()
            .any(|p| p.mode == CorpusMode::Blindspot(BlindspotMode::AdjacentDistant)));

        let other = gen_corpus(10, 3..=5, 8).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn control_corpus_is_isomorphic_by_construction() {
        let ctrl = gen_control_corpus(6, 3..=4, 1).unwrap();
        for pair in &ctrl {
            assert!(pair.instance.isomorphic);
            assert_eq!(pair.mode, CorpusMode::Control);
            assert_eq!(
                pair.instance.left.rank_counts(),
                pair.instance.right.rank_counts()
            );
        }
    }

    #[test]
    fn manifest_round_trip() {
        let rows = vec![
            ManifestRow {
                pair_id: 0,
                left_file: "pair_000_left.cc".into(),
                right_file: "pair_000_right.cc".into(),
                mode: "present-absent".into(),
                m: 3,
                n: 4,
                seed: 42,
            },
            ManifestRow {
                pair_id: 1,
                left_file: "pair_001_left.cc".into(),
                right_file: "pair_001_right.cc".into(),
                mode: "control".into(),
                m: 3,
                n: 3,
                seed: 43,
            },
        ];
        let text = render_manifest(&rows);
        assert!(text.starts_with("pair_id,left_file,right_file,mode,m,n,seed"));
        assert_eq!(parse_manifest(&text).unwrap(), rows);
    }

    #[test]
    fn manifest_rejects_bad_mode_and_garbage() {
        let bad = "pair_id,left_file,right_file,mode,m,n,seed\n0,a,b,upside-down,3,3,1\n";
        assert!(matches!(
            parse_manifest(bad).unwrap_err(),
            Error::UnknownMode(_)
        ));
        assert!(parse_manifest("pair_id,left_file\n0").is_err());
    }

    #[test]
    fn random_complexes_are_valid_and_deterministic() {
        use rand::SeedableRng;
        for seed in 0..50u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cc = random_complex(&mut rng, 12, 4);
            assert!(cc.n_vertices() >= 1);
            assert!(cc.max_rank() <= 4);
            let mut rng2 = ChaCha8Rng::seed_from_u64(seed);
            assert_eq!(cc, random_complex(&mut rng2, 12, 4));
        }
    }
}
