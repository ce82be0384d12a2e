//! Chunked parallel version of the grid Pareto oracle.

use rayon::prelude::*;

use vecopt_core::oracle::{GridPoint, GridSpec};
use vecopt_core::{Error, Problem};

const CHUNK: usize = 4096;

fn better(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(p, q)| p <= q) && a.iter().zip(b).any(|(p, q)| p < q)
}

fn insert(archive: &mut Vec<(usize, GridPoint)>, idx: usize, p: GridPoint) {
    if archive.iter().any(|(_, a)| better(&a.fx, &p.fx)) {
        return;
    }
    archive.retain(|(_, a)| !better(&p.fx, &a.fx));
    archive.push((idx, p));
}

/// Same output as the sequential oracle: per-chunk archives are built in
/// parallel, then merged in chunk order and sorted back into grid order.
pub fn grid_pareto_par(problem: &Problem, grid: &GridSpec) -> Result<Vec<GridPoint>, Error> {
    if grid.dim() != problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            got: grid.dim(),
        });
    }
    let total = grid.len();
    let chunks: Vec<Vec<(usize, GridPoint)>> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut archive = Vec::new();
            for idx in c * CHUNK..total.min((c + 1) * CHUNK) {
                let x = grid.point(idx);
                if !problem.feasible().is_feasible(&x, 0.0) {
                    continue;
                }
                let fx = problem.evaluate(&x).expect("grid matches the problem dimension");
                insert(&mut archive, idx, GridPoint { x, fx });
            }
            archive
        })
        .collect();
    let mut merged = Vec::new();
    for (idx, p) in chunks.into_iter().flatten() {
        insert(&mut merged, idx, p);
    }
    merged.sort_unstable_by_key(|(i, _)| *i);
    Ok(merged.into_iter().map(|(_, p)| p).collect())
}
