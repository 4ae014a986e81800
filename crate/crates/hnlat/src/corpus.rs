//! Deterministic test lattices and seeded random generators.
//!
//! The fixed corpus holds thirty positive definite lattices of ranks 2 to 4:
//! hand-picked examples covering semistable, unstable, skew, and rational
//! cases, padded with seeded random ones. Every member is screened so that
//! the exhaustive box-scan reference implementations stay affordable on it,
//! which keeps cross-validation runs fast and refusal-free.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::herm::wedge_metric;
use crate::lattice::{min_coordinate_minor, HermLattice};
use crate::linalg::{IntMat, RatMat};
use crate::rat::{floor_sqrt_rat, rat_frac, rat_i, Int, Rat};

/// Largest box the corpus screening allows the reference scans, in points.
const FEASIBLE_POINTS: u128 = 2_000_000;

/// Random integer matrix with entries drawn uniformly from `lo..=hi`.
pub fn random_int_mat(rows: usize, cols: usize, lo: i64, hi: i64, rng: &mut impl Rng) -> IntMat {
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| Int::from(rng.gen_range(lo..=hi))).collect())
        .collect();
    IntMat::from_rows(data, cols).expect("rows of fixed width")
}

/// Random integer matrix of full row rank, entries in `lo..=hi`.
pub fn random_full_row_rank(
    rows: usize,
    cols: usize,
    lo: i64,
    hi: i64,
    rng: &mut impl Rng,
) -> IntMat {
    assert!(rows <= cols, "full row rank needs rows <= cols");
    loop {
        let m = random_int_mat(rows, cols, lo, hi, rng);
        if m.rank() == rows {
            return m;
        }
    }
}

/// Random positive definite integer Gram matrix `A A^T + d I` with entries
/// of `A` in `[-3, 3]` and `d` in `{0, 1}`, resampled until definite.
pub fn random_gram(rank: usize, rng: &mut impl Rng) -> RatMat {
    loop {
        let a = random_int_mat(rank, rank, -3, 3, rng);
        let d = rng.gen_range(0..=1i64);
        let mut gram = a.mul(&a.transpose()).to_rat();
        if d == 1 {
            gram = gram.add(&RatMat::identity(rank));
        }
        if HermLattice::from_gram(gram.clone()).is_ok() {
            return gram;
        }
    }
}

/// Random rational positive definite Gram matrix: an integer one rescaled
/// by a diagonal of unit fractions, which preserves definiteness.
pub fn random_rational_pd(rank: usize, rng: &mut impl Rng) -> RatMat {
    let g = random_gram(rank, rng);
    let mut d = RatMat::zeros(rank, rank);
    for i in 0..rank {
        d.set(i, i, rat_frac(1, rng.gen_range(1..=3i64)));
    }
    d.mul(&g).mul(&d)
}

/// Random lattice with an integer Gram matrix.
pub fn random_pd_lattice(rank: usize, rng: &mut impl Rng) -> HermLattice {
    HermLattice::from_gram(random_gram(rank, rng)).expect("sampler rejects indefinite matrices")
}

/// Random unimodular matrix: a product of row transvections with small
/// coefficients, row swaps, and sign flips.
pub fn random_unimodular(rank: usize, steps: usize, rng: &mut impl Rng) -> IntMat {
    let mut u = RatMat::identity(rank);
    if rank < 2 {
        return u.to_int().expect("identity is integral");
    }
    for _ in 0..steps {
        match rng.gen_range(0..4u8) {
            0 | 1 => {
                let i = rng.gen_range(0..rank);
                let mut j = rng.gen_range(0..rank);
                while j == i {
                    j = rng.gen_range(0..rank);
                }
                let k = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
                let mut t = RatMat::identity(rank);
                t.set(i, j, rat_i(k));
                u = t.mul(&u);
            }
            2 => {
                let i = rng.gen_range(0..rank);
                let mut j = rng.gen_range(0..rank);
                while j == i {
                    j = rng.gen_range(0..rank);
                }
                let mut t = RatMat::identity(rank);
                t.set(i, i, rat_i(0));
                t.set(j, j, rat_i(0));
                t.set(i, j, rat_i(1));
                t.set(j, i, rat_i(1));
                u = t.mul(&u);
            }
            _ => {
                let i = rng.gen_range(0..rank);
                let mut t = RatMat::identity(rank);
                t.set(i, i, rat_i(-1));
                u = t.mul(&u);
            }
        }
    }
    u.to_int().expect("elementary products are integral")
}

fn box_points(gram_inv_diag: &[Rat], bound: &Rat) -> u128 {
    let mut points: u128 = 1;
    for v in gram_inv_diag {
        let m = floor_sqrt_rat(&(bound * v));
        let w = 2u128
            .saturating_mul(u128::try_from(&m).unwrap_or(u128::MAX))
            .saturating_add(1);
        points = points.saturating_mul(w);
    }
    points
}

/// True when the box-scan references can afford this lattice: every wedge
/// power admits a small search box both at the degree threshold 1/25 and
/// under the best coordinate minor bound.
pub fn reference_feasible(e: &HermLattice) -> bool {
    let n = e.rank();
    for s in 1..n {
        let wedge = match wedge_metric(e.metric(), s) {
            Ok(w) => w,
            Err(_) => return false,
        };
        let inv = match wedge.gram().inverse() {
            Ok(i) => i,
            Err(_) => return false,
        };
        let diag: Vec<Rat> = (0..inv.rows()).map(|i| inv.get(i, i).clone()).collect();
        let flag = match min_coordinate_minor(e, s) {
            Ok(f) => f,
            Err(_) => return false,
        };
        let bound = flag.max(rat_i(25));
        if box_points(&diag, &bound) > FEASIBLE_POINTS {
            return false;
        }
    }
    true
}

fn int_lat(rows: &[&[i64]]) -> HermLattice {
    HermLattice::from_gram(RatMat::from_i64(rows)).expect("hand-picked matrices are definite")
}

/// Every Gram entry has absolute value at most `cap`.
pub(crate) fn entries_bounded_by(e: &HermLattice, cap: i64) -> bool {
    let g = e.metric().gram();
    let cap = rat_i(cap);
    (0..g.rows()).all(|i| {
        (0..g.cols()).all(|j| {
            let v = g.get(i, j);
            -&cap <= *v && *v <= cap
        })
    })
}

/// Thirty deterministic positive definite lattices of ranks 2 to 4 with
/// Gram entries bounded by 9, each screened with `reference_feasible`;
/// calls always return the same list.
pub fn fixed_corpus() -> Vec<HermLattice> {
    let mut out = vec![
        int_lat(&[&[1, 0], &[0, 1]]),
        int_lat(&[&[1, 0], &[0, 4]]),
        int_lat(&[&[2, 1], &[1, 2]]),
        int_lat(&[&[5, 3], &[3, 2]]),
        int_lat(&[&[1, 1], &[1, 5]]),
        int_lat(&[&[3, 1], &[1, 3]]),
        int_lat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        int_lat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 9]]),
        int_lat(&[&[1, 0, 0], &[0, 4, 0], &[0, 0, 9]]),
        int_lat(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 3]]),
        int_lat(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]),
        int_lat(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
        int_lat(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 9]]),
        int_lat(&[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 4, 0], &[0, 0, 0, 8]]),
        int_lat(&[&[2, 1, 1, 1], &[1, 2, 1, 1], &[1, 1, 2, 1], &[1, 1, 1, 2]]),
        HermLattice::from_gram(
            RatMat::from_rows(
                vec![vec![rat_i(1), rat_frac(1, 2)], vec![rat_frac(1, 2), rat_i(1)]],
                2,
            )
            .expect("fixed shape"),
        )
        .expect("definite"),
        HermLattice::from_gram(
            RatMat::from_rows(
                vec![
                    vec![rat_frac(1, 4), rat_i(0), rat_i(0)],
                    vec![rat_i(0), rat_i(1), rat_i(0)],
                    vec![rat_i(0), rat_i(0), rat_i(9)],
                ],
                3,
            )
            .expect("fixed shape"),
        )
        .expect("definite"),
    ];
    for e in &out {
        assert!(reference_feasible(e), "hand-picked corpus member too expensive");
        assert!(entries_bounded_by(e, 9), "hand-picked corpus member too large");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x484e4c4154);
    let mut rank_cycle = [2usize, 3, 4].iter().cycle();
    while out.len() < 30 {
        let rank = *rank_cycle.next().expect("cycle never ends");
        // Small entry range keeps the rejection on the entry cap cheap.
        let a = random_int_mat(rank, rank, -2, 2, &mut rng);
        let mut gram = a.mul(&a.transpose()).to_rat();
        if rng.gen_range(0..=1) == 1 {
            gram = gram.add(&RatMat::identity(rank));
        }
        let Ok(e) = HermLattice::from_gram(gram) else { continue };
        if entries_bounded_by(&e, 9) && reference_feasible(&e) {
            out.push(e);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed};

    #[test]
    fn corpus_is_deterministic_and_screened() {
        let a = fixed_corpus();
        let b = fixed_corpus();
        assert_eq!(a.len(), 30);
        assert_eq!(a, b);
        for e in &a {
            assert!((2..=4).contains(&e.rank()));
            assert!(reference_feasible(e));
            assert!(entries_bounded_by(e, 9));
        }
        // All three ranks are represented.
        for r in 2..=4 {
            assert!(a.iter().any(|e| e.rank() == r));
        }
    }

    #[test]
    fn random_gram_is_definite_and_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for rank in 1..=4 {
            let g = random_gram(rank, &mut rng);
            assert!(HermLattice::from_gram(g.clone()).is_ok());
            let mut rng2 = ChaCha8Rng::seed_from_u64(7);
            if rank == 1 {
                assert_eq!(random_gram(1, &mut rng2), g);
            }
        }
    }

    #[test]
    fn random_unimodular_has_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for rank in 1..=5 {
            for steps in [0, 3, 8] {
                let u = random_unimodular(rank, steps, &mut rng);
                assert!(u.det().unwrap().abs() == Int::one());
            }
        }
    }

    #[test]
    fn full_row_rank_sampler_is_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (r, c) in [(1, 3), (2, 4), (3, 3)] {
            let m = random_full_row_rank(r, c, -3, 3, &mut rng);
            assert_eq!(m.rank(), r);
        }
    }

    #[test]
    fn rational_pd_sampler_is_definite() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for rank in 2..=4 {
            let g = random_rational_pd(rank, &mut rng);
            assert!(HermLattice::from_gram(g).is_ok());
        }
    }
}
