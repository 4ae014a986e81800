//! Slow reference implementations used to cross-check the main search
//! routines on small inputs.
//!
//! The vector oracle scans a coordinate box derived from the dual metric:
//! `v H v^T <= B` forces `v_i^2 <= B (H^{-1})_{ii}`. Every point in the box
//! is tested against the exact quadratic form; nothing is pruned (partial
//! sums of an incomplete quadratic form are not monotone, so pruning would
//! require the very machinery under test). Boxes beyond a hundred million
//! points are refused rather than scanned.
//!
//! The sublattice and filtration oracles reuse the wedge correspondence and
//! the quotient construction, but drive them with the box scan instead of
//! the budgeted search family.

use num_traits::{One, Signed, Zero};

use crate::enumeration::{decomposable_recover, ShortVecReport, ShortVector, SubsReport};
use crate::error::{Error, Result};
use crate::herm::{wedge_metric, HermSpace};
use crate::lattice::{
    degree, degree_of_sub, min_coordinate_minor, quotient_lattice, ExpDegree, HermLattice,
    Sublattice,
};
use crate::linalg::RatMat;
use crate::rat::{floor_sqrt_rat, gcd_all, Int, Rat};

const BOX_LIMIT: u128 = 100_000_000;
const NAIVE_RANK_LIMIT: usize = 4;

fn box_scan(
    gram: &RatMat,
    half: &[Int],
    bound: &Rat,
    depth: usize,
    zero_prefix: bool,
    coords: &mut Vec<Int>,
    partial: Rat,
    out: &mut Vec<ShortVector>,
) {
    let n = half.len();
    if depth == n {
        if !zero_prefix && partial <= *bound {
            out.push(ShortVector { coords: coords.clone(), norm: partial });
        }
        return;
    }
    let mut cross = Rat::zero();
    for j in 0..depth {
        if !coords[j].is_zero() {
            cross += gram.get(j, depth) * Rat::from_integer(coords[j].clone());
        }
    }
    let two = Rat::from_integer(Int::from(2));
    let mut v = if zero_prefix { Int::zero() } else { -half[depth].clone() };
    while v <= half[depth] {
        let vr = Rat::from_integer(v.clone());
        let add = gram.get(depth, depth) * &vr * &vr + &two * &cross * &vr;
        coords[depth] = v.clone();
        box_scan(
            gram,
            half,
            bound,
            depth + 1,
            zero_prefix && v.is_zero(),
            coords,
            &partial + &add,
            out,
        );
        v += 1;
    }
    coords[depth] = Int::zero();
}

/// Exhaustive box-scan counterpart of the short vector search; always
/// complete, refuses oversized boxes.
pub fn naive_short_vectors(space: &HermSpace, bound: &Rat) -> Result<ShortVecReport> {
    let n = space.dim();
    if n == 0 || bound.is_negative() {
        return Ok(ShortVecReport { bound: bound.clone(), vectors: Vec::new(), complete: true });
    }
    let inv = space.gram().inverse()?;
    let mut half = Vec::with_capacity(n);
    let mut points: u128 = 1;
    for i in 0..n {
        let m = floor_sqrt_rat(&(bound * inv.get(i, i)));
        let width = (2u128)
            .saturating_mul(u128::try_from(&m).unwrap_or(u128::MAX))
            .saturating_add(1);
        points = points.saturating_mul(width);
        half.push(m);
    }
    if points > BOX_LIMIT {
        return Err(Error::BoxTooLarge { points, limit: BOX_LIMIT });
    }
    let mut out = Vec::new();
    let mut coords = vec![Int::zero(); n];
    box_scan(space.gram(), &half, bound, 0, true, &mut coords, Rat::zero(), &mut out);
    out.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.coords.cmp(&b.coords)));
    Ok(ShortVecReport { bound: bound.clone(), vectors: out, complete: true })
}

fn naive_ranked_pairs(
    e: &HermLattice,
    s: usize,
    norm_bound: &Rat,
) -> Result<Vec<(Sublattice, Rat)>> {
    let wedge = wedge_metric(e.metric(), s)?;
    let report = naive_short_vectors(&wedge, norm_bound)?;
    let mut out = Vec::new();
    for sv in &report.vectors {
        if gcd_all(&sv.coords) != Int::one() {
            continue;
        }
        if let Some(f) = decomposable_recover(e.rank(), s, &sv.coords)? {
            out.push((f, sv.norm.clone()));
        }
    }
    Ok(out)
}

/// Exhaustive counterpart of the bounded-degree sublattice enumeration.
pub fn naive_subs(e: &HermLattice, dmin: &Rat) -> Result<SubsReport> {
    if !dmin.is_positive() {
        return Err(Error::Precondition("degree threshold must be positive".into()));
    }
    let n = e.rank();
    let mut by_rank = std::collections::BTreeMap::new();
    for s in 1..n {
        let mut subs: Vec<Sublattice> = naive_ranked_pairs(e, s, &dmin.recip())?
            .into_iter()
            .map(|(f, _)| f)
            .collect();
        subs.sort();
        if !subs.is_empty() {
            by_rank.insert(s, subs);
        }
    }
    if degree(e).d() >= dmin {
        by_rank.insert(n, vec![Sublattice::full(n)]);
    }
    Ok(SubsReport { dmin: dmin.clone(), by_rank, complete: true })
}

/// Exhaustive counterpart of the canonical filtration, for ranks up to 4.
/// Each step searches the wedge box under the best coordinate principal
/// minor, an attainable bound, so the maximal slope is always in the scan.
pub fn naive_hn(e: &HermLattice) -> Result<crate::hn::HNFiltration> {
    let n = e.rank();
    if n > NAIVE_RANK_LIMIT {
        return Err(Error::RankRefused { rank: n, max: NAIVE_RANK_LIMIT });
    }
    let (e1, d1) = naive_top_destabilizer(e)?;
    let mut steps = vec![(e1.clone(), d1)];
    if !e1.is_full() {
        let q = quotient_lattice(e, &e1)?;
        let rest = naive_hn(q.lattice())?;
        for (g, _) in rest.steps() {
            let f = q.pull_back(g)?;
            let d = degree_of_sub(e, &f)?;
            steps.push((f, d));
        }
    }
    crate::hn::HNFiltration::from_steps(e, steps)
}

fn naive_top_destabilizer(e: &HermLattice) -> Result<(Sublattice, ExpDegree)> {
    let n = e.rank();
    let mut groups: Vec<Vec<(Sublattice, ExpDegree)>> = Vec::new();
    for s in 1..n {
        let pairs = naive_ranked_pairs(e, s, &min_coordinate_minor(e, s)?)?;
        let min_norm = pairs
            .iter()
            .map(|(_, norm)| norm.clone())
            .min()
            .expect("the coordinate witness is always in the scan");
        let deg = ExpDegree::new(min_norm.recip(), s);
        groups.push(
            pairs
                .into_iter()
                .filter(|(_, norm)| *norm == min_norm)
                .map(|(f, _)| (f, deg.clone()))
                .collect(),
        );
    }
    groups.push(vec![(Sublattice::full(n), degree(e))]);
    let mut best: Vec<(Sublattice, ExpDegree)> = Vec::new();
    for group in groups {
        if best.is_empty() {
            best = group;
            continue;
        }
        match group[0].1.slope_cmp(&best[0].1) {
            std::cmp::Ordering::Greater => best = group,
            std::cmp::Ordering::Equal => best.extend(group),
            std::cmp::Ordering::Less => {}
        }
    }
    let top_rank = best.iter().map(|(f, _)| f.rank()).max().expect("nonempty");
    let mut at_top = best.into_iter().filter(|(f, _)| f.rank() == top_rank);
    let first = at_top.next().expect("nonempty");
    if at_top.next().is_some() {
        return Err(Error::InvariantViolation(
            "maximal-slope sublattice of top rank must be unique".into(),
        ));
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{all_subs_with_deg_at_least, short_vectors, EnumConfig};
    use crate::hn::hn_filtration;
    use crate::linalg::IntMat;
    use crate::rat::{int, rat_frac, rat_i};

    fn lat(rows: &[&[i64]]) -> HermLattice {
        HermLattice::from_gram(RatMat::from_i64(rows)).unwrap()
    }

    #[test]
    fn box_scan_matches_hand_values() {
        let h = HermSpace::new(RatMat::from_i64(&[&[2, 1], &[1, 2]])).unwrap();
        let r = naive_short_vectors(&h, &rat_i(2)).unwrap();
        let coords: Vec<Vec<Int>> = r.vectors.iter().map(|sv| sv.coords.clone()).collect();
        assert_eq!(
            coords,
            vec![vec![int(0), int(1)], vec![int(1), int(-1)], vec![int(1), int(0)]]
        );
    }

    #[test]
    fn box_scan_agrees_with_budgeted_search() {
        let cfg = EnumConfig::default();
        let mut state = 0x243f6a8885a308d3u64;
        let mut nextv = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 7) as i64 - 3
        };
        for n in 2..=4 {
            for _ in 0..6 {
                let a = IntMat::from_rows(
                    (0..n).map(|_| (0..n).map(|_| int(nextv())).collect()).collect(),
                    n,
                )
                .unwrap();
                let gram = a.mul(&a.transpose()).to_rat().add(&RatMat::identity(n));
                let h = HermSpace::new(gram).unwrap();
                for bound in [rat_i(1), rat_i(4), rat_frac(17, 2)] {
                    let fast = short_vectors(&h, &bound, &cfg).unwrap();
                    let slow = naive_short_vectors(&h, &bound).unwrap();
                    assert_eq!(fast, slow, "dim {n} bound {bound}");
                }
            }
        }
    }

    #[test]
    fn oversized_boxes_are_refused() {
        let h = HermSpace::new(RatMat::identity(4)).unwrap();
        match naive_short_vectors(&h, &rat_i(100_000_000)) {
            Err(Error::BoxTooLarge { points, limit }) => {
                assert!(points > limit);
            }
            other => panic!("expected a box refusal, got {other:?}"),
        }
    }

    #[test]
    fn sub_enumeration_agrees_on_fixed_lattices() {
        let cfg = EnumConfig::default();
        let cases: Vec<(HermLattice, Rat)> = vec![
            (lat(&[&[1, 0], &[0, 4]]), rat_frac(1, 4)),
            (lat(&[&[2, 1], &[1, 2]]), rat_frac(1, 3)),
            (lat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), rat_i(1)),
            (lat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), rat_frac(1, 2)),
            (lat(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 3]]), rat_frac(1, 6)),
        ];
        for (e, dmin) in &cases {
            let fast = all_subs_with_deg_at_least(e, dmin, &cfg).unwrap();
            let slow = naive_subs(e, dmin).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn filtration_agrees_on_worked_examples() {
        let cfg = EnumConfig::default();
        let cases = vec![
            lat(&[&[1, 0], &[0, 4]]),
            lat(&[&[2, 1], &[1, 2]]),
            lat(&[&[1, 1], &[1, 5]]),
            lat(&[&[5, 3], &[3, 2]]),
            lat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 9]]),
            lat(&[&[1, 0, 0], &[0, 4, 0], &[0, 0, 64]]),
            lat(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 3]]),
        ];
        for e in &cases {
            let fast = hn_filtration(e, &cfg).unwrap();
            let slow = naive_hn(e).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn naive_filtration_refuses_large_ranks() {
        let e = HermLattice::from_gram(RatMat::identity(5)).unwrap();
        match naive_hn(&e) {
            Err(Error::RankRefused { rank: 5, max: 4 }) => {}
            other => panic!("expected a rank refusal, got {other:?}"),
        }
    }
}
