//! Randomized property tests: validation soundness, group actions,
//! round-trips, spectral laws, and oracle soundness.

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ccspectra::analysis::{
    brute_force_isomorphic, distinguish, encode_features, hks_feature_table, random_basis,
    LaplacianChoice, Verdict, DEFAULT_THRESHOLD,
};
use ccspectra::complex::{Cell, CombinatorialComplex, Permutation};
use ccspectra::datasets::random_complex;
use ccspectra::io::{parse, serialize};
use ccspectra::operators::{cc_laplacian, Convention, WeightScheme};
use ccspectra::spectral::{
    default_grid, dirichlet_energy, eigendecompose, heat_kernel, hks_of_complex, smoothness,
    sorted_value_rows,
};

fn seeded_complex(seed: u64, max_vertices: usize, max_rank: usize) -> CombinatorialComplex {
    random_complex(&mut ChaCha8Rng::seed_from_u64(seed), max_vertices, max_rank)
}

fn dyadic(cc: &CombinatorialComplex) -> WeightScheme {
    WeightScheme::dyadic(cc.max_rank())
}

/// Raw cell soups, most of them invalid in interesting ways.
fn cell_soup() -> impl Strategy<Value = Vec<(Vec<u32>, usize)>> {
    prop::collection::vec(
        (prop::collection::vec(0u32..8, 0..5), 0usize..6),
        0..10,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn build_validates_or_output_satisfies_invariants(soup in cell_soup()) {
        let cells: Result<Vec<Cell>, _> = soup
            .iter()
            .map(|(vs, r)| Cell::new(vs.iter().copied(), *r))
            .collect();
        let Ok(cells) = cells else { return Ok(()); };
        let Ok(cc) = CombinatorialComplex::build(cells, None) else { return Ok(()); };

        // 1. Every vertex appears as a rank-0 singleton.
        let singletons: Vec<u32> = cc
            .cells_of_rank(0)
            .iter()
            .map(|c| { prop_assert_eq!(c.len(), 1); Ok(c.vertices()[0].0) })
            .collect::<Result<_, TestCaseError>>()?;
        let vertex_ids: Vec<u32> = cc.vertices().iter().map(|v| v.0).collect();
        prop_assert_eq!(singletons, vertex_ids);

        // 2. Order-preserving rank over proper subsets.
        for x in cc.cells() {
            for y in cc.cells() {
                if x.len() < y.len() && x.is_subset_of(y) {
                    prop_assert!(x.rank() <= y.rank());
                }
            }
        }

        // 3. Every cell vertex exists in the vertex list.
        for c in cc.cells() {
            for v in c.vertices() {
                prop_assert!(cc.vertex_index(*v).is_some());
            }
        }

        // 4. Max rank is the maximum over cells.
        let max = cc.cells().iter().map(Cell::rank).max().unwrap();
        prop_assert_eq!(cc.max_rank(), max);
    }

    #[test]
    fn parse_never_panics(text in "\\PC*") {
        let _ = parse(&text);
    }

    #[test]
    fn parse_serialize_round_trip(seed in any::<u64>()) {
        let cc = seeded_complex(seed, 10, 4);
        prop_assert_eq!(parse(&serialize(&cc)).unwrap(), cc);
    }

    #[test]
    fn relabel_is_a_group_action(seed in any::<u64>()) {
        let cc = seeded_complex(seed, 10, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
        let n = cc.n_vertices();
        let p = Permutation::random(n, &mut rng);
        let q = Permutation::random(n, &mut rng);

        prop_assert_eq!(cc.relabel(&Permutation::identity(n)).unwrap(), cc.clone());
        let two_steps = cc.relabel(&p).unwrap().relabel(&q).unwrap();
        let one_step = cc.relabel(&q.compose(&p)).unwrap();
        prop_assert_eq!(two_steps, one_step);
    }

    #[test]
    fn simplicial_closure_holds(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_simplices = rng.gen_range(1..=4usize);
        let maximal: Vec<Vec<u32>> = (0..n_simplices)
            .map(|_| {
                let size = rng.gen_range(1..=4usize);
                (0..size).map(|_| rng.gen_range(0..10u32)).collect()
            })
            .collect();
        let cc = CombinatorialComplex::from_simplicial(&maximal).unwrap();
        for c in cc.cells() {
            prop_assert_eq!(c.rank(), c.len() - 1);
            let vs: Vec<u32> = c.vertices().iter().map(|v| v.0).collect();
            let s = vs.len();
            for mask in 1u64..(1 << s) {
                let subset: Vec<u32> = (0..s)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| vs[i])
                    .collect();
                let rank = subset.len() - 1;
                prop_assert!(
                    cc.cells_of_rank(rank)
                        .iter()
                        .any(|f| f.vertices().iter().map(|v| v.0).eq(subset.iter().copied())),
                    "missing face {:?} of {:?}", subset, vs
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_quadratic_form_is_psd(seed in any::<u64>()) {
        let cc = seeded_complex(seed, 12, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
        let f: Vec<f64> = (0..cc.n_vertices()).map(|_| rng.gen_range(-10.0..10.0)).collect();
        for convention in [Convention::SignedIncidence, Convention::Dirichlet] {
            let l = cc_laplacian(&cc, &dyadic(&cc), convention).unwrap();
            prop_assert!(smoothness(&l, &f).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn smoothness_equals_dirichlet_energy(seed in any::<u64>()) {
        let cc = seeded_complex(seed, 20, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD1D1);
        let f: Vec<f64> = (0..cc.n_vertices()).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let l = cc_laplacian(&cc, &dyadic(&cc), Convention::Dirichlet).unwrap();
        let lhs = smoothness(&l, &f).unwrap();
        let rhs = dirichlet_energy(&cc, &dyadic(&cc), &f).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn spectrum_reconstructs_the_laplacian(seed in any::<u64>()) {
        let cc = seeded_complex(seed, 10, 4);
        let l = cc_laplacian(&cc, &dyadic(&cc), Convention::SignedIncidence).unwrap();
        let s = eigendecompose(&l).unwrap();
        let n = s.len();
        let phi = s.eigenvectors();

        // Orthonormality and per-column eigen residuals.
        let gram = phi.transpose() * phi;
        prop_assert!((gram - DMatrix::identity(n, n)).abs().max() <= 1e-10);
        for (i, &lambda) in s.eigenvalues().iter().enumerate() {
            prop_assert!(lambda >= -1e-10);
            let residual = l.matrix() * phi.column(i) - lambda * phi.column(i);
            prop_assert!(residual.abs().max() <= 1e-8 * lambda.abs().max(1.0));
        }

        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(s.eigenvalues()));
        let reconstructed = phi * lambda * phi.transpose();
        let norm = l.matrix().abs().max().max(1.0);
        prop_assert!((reconstructed - l.matrix()).abs().max() <= 1e-8 * norm);
    }

    #[test]
    fn heat_kernel_laws(seed in any::<u64>()) {
        let cc = seeded_complex(seed, 10, 4);
        let l = cc_laplacian(&cc, &dyadic(&cc), Convention::SignedIncidence).unwrap();
        let s = eigendecompose(&l).unwrap();
        let n = s.len();

        prop_assert_eq!(heat_kernel(&s, 0.0).unwrap(), DMatrix::identity(n, n));

        let grid = default_grid(10).unwrap();
        let has_positive = s.eigenvalues().iter().any(|&x| x > 1e-9);
        let mut prev = n as f64 + 1e-9;
        for &t in grid.times() {
            let k = heat_kernel(&s, t).unwrap();
            prop_assert!((&k - k.transpose()).abs().max() == 0.0);
            let trace = k.trace();
            if has_positive {
                prop_assert!(trace < prev);
            } else {
                prop_assert!((trace - n as f64).abs() <= 1e-12);
            }
            prev = trace;
        }

        let ka = heat_kernel(&s, 0.7).unwrap();
        let kb = heat_kernel(&s, 1.6).unwrap();
        let kab = heat_kernel(&s, 2.3).unwrap();
        prop_assert!((ka * kb - kab).abs().max() <= 1e-8);
    }

    #[test]
    fn hks_rows_are_unit_interval_and_match_kernel_diagonal(seed in any::<u64>()) {
        let cc = seeded_complex(seed, 10, 4);
        let l = cc_laplacian(&cc, &dyadic(&cc), Convention::SignedIncidence).unwrap();
        let s = eigendecompose(&l).unwrap();
        let grid = default_grid(10).unwrap();
        let table = hks_of_complex(&cc, &l, &grid).unwrap();
        for &x in table.values().iter() {
            prop_assert!(x > 0.0 && x <= 1.0, "HKS entry {x} outside (0,1]");
        }
        for (j, &t) in grid.times().iter().enumerate() {
            let k = heat_kernel(&s, t).unwrap();
            for i in 0..cc.n_vertices() {
                prop_assert!((table.values()[(i, j)] - k[(i, i)]).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn hks_multiset_is_permutation_invariant(seed in any::<u64>()) {
        let cc = seeded_complex(seed, 10, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xFACE);
        let p = Permutation::random(cc.n_vertices(), &mut rng);
        let rl = cc.relabel(&p).unwrap();
        let grid = default_grid(10).unwrap();
        let ta = hks_of_complex(&cc, &cc_laplacian(&cc, &dyadic(&cc), Convention::Dirichlet).unwrap(), &grid).unwrap();
        let tb = hks_of_complex(&rl, &cc_laplacian(&rl, &dyadic(&rl), Convention::Dirichlet).unwrap(), &grid).unwrap();
        let ra = sorted_value_rows(ta.values(), 1e-9);
        let rb = sorted_value_rows(tb.values(), 1e-9);
        for (a, b) in ra.iter().flatten().zip(rb.iter().flatten()) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn feature_table_is_permutation_equivariant(seed in any::<u64>()) {
        let base = seeded_complex(seed, 8, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xF00D);
        let n = base.n_vertices();
        let feats = DMatrix::from_fn(n, 2, |_, _| rng.gen_range(-1.0..1.0));
        let cc = CombinatorialComplex::build(base.cells().to_vec(), Some(feats)).unwrap();
        let p = Permutation::random(n, &mut rng);
        let rl = cc.relabel(&p).unwrap();
        let grid = default_grid(5).unwrap();
        let ta = hks_feature_table(&cc, &grid, Convention::Dirichlet).unwrap();
        let tb = hks_feature_table(&rl, &grid, Convention::Dirichlet).unwrap();
        // Row i of the original lands at row p(i) of the relabeled table.
        for i in 0..n {
            for j in 0..ta.ncols() {
                prop_assert!((ta[(i, j)] - tb[(p.apply(i), j)]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn encoding_is_bounded_and_pythagorean(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, d, e) = (
            rng.gen_range(1..=6usize),
            rng.gen_range(1..=4usize),
            rng.gen_range(1..=8usize),
        );
        let x = DMatrix::from_fn(n, d, |_, _| rng.gen_range(-3.0..3.0));
        let g = random_basis(d, e, seed);
        let enc = encode_features(&x, &g).unwrap();
        prop_assert_eq!(enc.matrix.shape(), (n, 2 * e));
        for &v in enc.matrix.iter() {
            prop_assert!((-1.0..=1.0).contains(&v));
        }
        for i in 0..n {
            for j in 0..e {
                let s = enc.matrix[(i, j)];
                let c = enc.matrix[(i, e + j)];
                prop_assert!((s * s + c * c - 1.0).abs() <= 1e-12);
            }
        }
        // Determinism.
        prop_assert_eq!(encode_features(&x, &g).unwrap().matrix, enc.matrix);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distinguish_is_sound_on_isomorphic_pairs(seed in any::<u64>()) {
        let a = seeded_complex(seed, 8, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB1B0);
        let b = if rng.gen_bool(0.5) {
            a.relabel(&Permutation::random(a.n_vertices(), &mut rng)).unwrap()
        } else {
            random_complex(&mut rng, 8, 4)
        };
        let iso = brute_force_isomorphic(&a, &b).unwrap();
        let grid = default_grid(10).unwrap();
        let report = distinguish(
            &a,
            &b,
            &grid,
            Convention::Dirichlet,
            LaplacianChoice::Cc,
            DEFAULT_THRESHOLD,
        )
        .unwrap();
        if iso {
            prop_assert_eq!(report.verdict, Verdict::Indistinguishable);
        }
    }
}
