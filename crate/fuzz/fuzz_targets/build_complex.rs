// Fuzz the validator with arbitrary cell soups: construction either errors
// or yields a complex satisfying the structural invariants.
#![no_main]

use libfuzzer_sys::fuzz_target;

use ccspectra::complex::{Cell, CombinatorialComplex};

fuzz_target!(|soup: Vec<(Vec<u8>, u8)>| {
    let cells: Result<Vec<Cell>, _> = soup
        .iter()
        .map(|(vs, rank)| Cell::new(vs.iter().map(|&v| v as u32), *rank as usize))
        .collect();
    let Ok(cells) = cells else { return };
    let Ok(cc) = CombinatorialComplex::build(cells, None) else { return };

    for c in cc.cells_of_rank(0) {
        assert_eq!(c.len(), 1, "rank-0 cell is not a singleton");
    }
    assert_eq!(cc.cells_of_rank(0).len(), cc.n_vertices());
    for x in cc.cells() {
        for y in cc.cells() {
            if x.len() < y.len() && x.is_subset_of(y) {
                assert!(x.rank() <= y.rank(), "rank order violated");
            }
        }
    }
});
