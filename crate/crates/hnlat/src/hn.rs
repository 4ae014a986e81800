//! Semistability, the maximal destabilizing sublattice, and the canonical
//! slope-decreasing filtration.
//!
//! A lattice is semistable when no saturated sublattice has strictly larger
//! slope. The search is exact: a rank-`s` sublattice of slope above the
//! total slope has wedge norm below `D_E^{-s/n}`, so a short vector search
//! in the wedge metric under a slightly larger dyadic bound either produces
//! a violator or proves there is none. Searches that hit their node budget
//! return an error, never a wrong boolean.
//!
//! The filtration is built greedily: take the maximal-slope sublattice of
//! largest rank (which is unique), quotient by it, and recurse; pulled back,
//! the steps form the unique chain with semistable quotients of strictly
//! decreasing slope, and the construction re-verifies all three properties
//! before returning.

use std::cmp::Ordering;

use num_traits::One;

use crate::enumeration::{primitive_decomposables, short_vectors, EnumConfig};
use crate::error::{Error, Result};
use crate::lattice::{
    degree, degree_of_sub, min_coordinate_minor, quotient_lattice, ExpDegree, HermLattice,
    Sublattice,
};
use crate::linalg::IntMat;
use crate::rat::{dyadic_root_upper, pow_rat, Int, Rat};

/// Outcome of a semistability decision, with a violating sublattice when
/// the answer is negative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemistabilityReport {
    pub semistable: bool,
    /// A proper saturated sublattice of strictly larger slope, if any.
    pub witness: Option<(Sublattice, ExpDegree)>,
}

/// All saturated sublattices attaining the maximal slope, the whole lattice
/// included, sorted by rank then basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MaxSlopeReport {
    pub attainers: Vec<(Sublattice, ExpDegree)>,
}

/// Chain of saturated sublattices ending at the whole lattice, each stored
/// with its exact degree. Construction checks structure only, so chains
/// violating the slope or semistability conditions can be built and then
/// interrogated with `verify_hn`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HNFiltration {
    steps: Vec<(Sublattice, ExpDegree)>,
}

impl HNFiltration {
    /// Validates ambient ranks, strictly increasing ranks, and that each
    /// stored degree is the exact degree of its sublattice.
    pub fn from_steps(e: &HermLattice, steps: Vec<(Sublattice, ExpDegree)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::Precondition("a filtration needs at least one step".into()));
        }
        for (f, d) in &steps {
            if f.ambient_rank() != e.rank() {
                return Err(Error::DimensionMismatch {
                    expected: e.rank(),
                    found: f.ambient_rank(),
                });
            }
            if &degree_of_sub(e, f)? != d {
                return Err(Error::Precondition("step degree does not match its sublattice".into()));
            }
        }
        for w in steps.windows(2) {
            if w[1].0.rank() <= w[0].0.rank() {
                return Err(Error::Precondition("step ranks must strictly increase".into()));
            }
        }
        Ok(HNFiltration { steps })
    }

    pub fn steps(&self) -> &[(Sublattice, ExpDegree)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Degrees of the successive quotients, whose slopes strictly decrease
    /// exactly when the chain is canonical.
    pub fn quotient_degrees(&self) -> Vec<ExpDegree> {
        let mut out = Vec::with_capacity(self.steps.len());
        out.push(self.steps[0].1.clone());
        for w in self.steps.windows(2) {
            out.push(w[1].1.quotient_from(&w[0].1));
        }
        out
    }

    /// Vertices `(rank, d)` of the degree polygon, beginning at `(0, 1)`.
    pub fn polygon(&self) -> Vec<(usize, Rat)> {
        let mut out = vec![(0, Rat::one())];
        for (f, d) in &self.steps {
            out.push((f.rank(), d.d().clone()));
        }
        out
    }
}

/// Smallest dyadic bound `B` with `B^n >= D_E^{-s}`: wedge norms of rank-`s`
/// destabilizers lie at or below `D_E^{-s/n}`, hence within this bound.
fn destabilizing_norm_bound(d_e: &Rat, s: usize, n: usize) -> Rat {
    dyadic_root_upper(&pow_rat(d_e, s).recip(), n)
}

/// Decides semistability exactly; a tripped search budget is an error, so a
/// returned boolean is always trustworthy.
pub fn is_semistable(e: &HermLattice, cfg: &EnumConfig) -> Result<SemistabilityReport> {
    let n = e.rank();
    let d_e = degree(e);
    for s in 1..n {
        let bound = destabilizing_norm_bound(d_e.d(), s, n);
        let (pairs, complete) = primitive_decomposables(e, s, &bound, cfg)?;
        if !complete {
            return Err(Error::SearchCapExceeded { nodes: cfg.max_nodes });
        }
        for (f, norm) in pairs {
            // mu(F) > mu(E) iff norm^n * D_E^s < 1, exactly.
            if pow_rat(&norm, n) * pow_rat(d_e.d(), s) < Rat::one() {
                let witness = (f, ExpDegree::new(norm.recip(), s));
                return Ok(SemistabilityReport { semistable: false, witness: Some(witness) });
            }
        }
    }
    Ok(SemistabilityReport { semistable: true, witness: None })
}

/// An attainable upper bound for the minimal rank-`s` wedge norm: the best
/// coordinate principal minor, improved by the Gram determinant of `s`
/// greedily chosen independent short vectors. Both come from actual
/// submodules, so the bounded search below is never empty.
fn attainable_norm_upper_bound(e: &HermLattice, s: usize, cfg: &EnumConfig) -> Result<Rat> {
    let n = e.rank();
    let gram = e.gram();
    let flag_bound = min_coordinate_minor(e, s)?;
    let mut diag: Vec<Rat> = (0..n).map(|i| gram.get(i, i).clone()).collect();
    diag.sort();
    let max_diag = diag[n - 1].clone();
    let ladder_cfg = EnumConfig { max_nodes: cfg.max_nodes.min(50_000), parallel: cfg.parallel };
    let mut bound = diag[0].clone();
    let frame_det = loop {
        let last_round = bound >= max_diag;
        let report = short_vectors(e.metric(), &bound, &ladder_cfg)?;
        let mut candidates: Vec<(Rat, Vec<Int>)> =
            report.vectors.into_iter().map(|sv| (sv.norm, sv.coords)).collect();
        if last_round {
            for i in 0..n {
                let mut row = vec![Int::from(0); n];
                row[i] = Int::from(1);
                candidates.push((gram.get(i, i).clone(), row));
            }
            candidates.sort();
            candidates.dedup();
        }
        let mut rows: Vec<Vec<Int>> = Vec::with_capacity(s);
        for (_, v) in &candidates {
            if rows.len() == s {
                break;
            }
            let mut trial = rows.clone();
            trial.push(v.clone());
            let m = IntMat::from_rows(trial, n)?;
            if m.rank() > rows.len() {
                rows.push(v.clone());
            }
        }
        if rows.len() == s {
            let b = IntMat::from_rows(rows, n)?.to_rat();
            break b.mul(gram).mul(&b.transpose()).det()?;
        }
        debug_assert!(!last_round, "coordinate vectors always span");
        bound = &bound * Rat::from_integer(Int::from(4));
        if bound > max_diag {
            bound = max_diag.clone();
        }
    };
    Ok(flag_bound.min(frame_det))
}

/// Maximal slope over all saturated sublattices, with every attainer. The
/// per-rank search runs under an attainable bound, so its first round is
/// complete and nonempty; budgets turn into errors, never wrong answers.
pub fn max_slope_subs(e: &HermLattice, cfg: &EnumConfig) -> Result<MaxSlopeReport> {
    let n = e.rank();
    let mut groups: Vec<Vec<(Sublattice, ExpDegree)>> = Vec::with_capacity(n);
    for s in 1..n {
        let ub = attainable_norm_upper_bound(e, s, cfg)?;
        let (pairs, complete) = primitive_decomposables(e, s, &ub, cfg)?;
        if !complete {
            return Err(Error::SearchCapExceeded { nodes: cfg.max_nodes });
        }
        let min_norm = match pairs.iter().map(|(_, norm)| norm.clone()).min() {
            Some(m) => m,
            None => {
                return Err(Error::InvariantViolation(
                    "attainable bound produced no sublattice".into(),
                ))
            }
        };
        let deg = ExpDegree::new(min_norm.recip(), s);
        let attainers: Vec<(Sublattice, ExpDegree)> = pairs
            .into_iter()
            .filter(|(_, norm)| *norm == min_norm)
            .map(|(f, _)| (f, deg.clone()))
            .collect();
        groups.push(attainers);
    }
    groups.push(vec![(Sublattice::full(n), degree(e))]);
    let mut best: Vec<(Sublattice, ExpDegree)> = Vec::new();
    for group in groups {
        if best.is_empty() {
            best = group;
            continue;
        }
        match group[0].1.slope_cmp(&best[0].1) {
            Ordering::Greater => best = group,
            Ordering::Equal => best.extend(group),
            Ordering::Less => {}
        }
    }
    best.sort_by(|a, b| a.0.rank().cmp(&b.0.rank()).then_with(|| a.0.cmp(&b.0)));
    Ok(MaxSlopeReport { attainers: best })
}

/// The unique maximal-slope sublattice of largest rank: the first step of
/// the canonical filtration (the whole lattice itself when semistable).
pub fn max_destabilizing(e: &HermLattice, cfg: &EnumConfig) -> Result<(Sublattice, ExpDegree)> {
    let report = max_slope_subs(e, cfg)?;
    let top_rank = report.attainers.iter().map(|(f, _)| f.rank()).max().expect("nonempty");
    let mut at_top = report.attainers.into_iter().filter(|(f, _)| f.rank() == top_rank);
    let first = at_top.next().expect("nonempty");
    if at_top.next().is_some() {
        return Err(Error::InvariantViolation(
            "maximal-slope sublattice of top rank must be unique".into(),
        ));
    }
    Ok(first)
}

/// The graded piece `cur / prev` as a lattice; `prev = None` means the
/// restriction of the metric to `cur`. When `prev` is present the piece is
/// computed two ways (inside the ambient quotient, and as a quotient of the
/// restricted lattice) and the Gram matrices must agree after an exact
/// change of basis.
fn graded_piece(e: &HermLattice, prev: Option<&Sublattice>, cur: &Sublattice) -> Result<HermLattice> {
    let b_cur = cur.basis().to_rat();
    let restricted = b_cur.mul(e.gram()).mul(&b_cur.transpose());
    let p = match prev {
        None => return HermLattice::from_gram(restricted),
        Some(p) => p,
    };
    let q = quotient_lattice(e, p)?;
    let g = q.push_forward(cur)?;
    let bg = g.basis().to_rat();
    let gram_a = bg.mul(q.lattice().gram()).mul(&bg.transpose());
    // Second route: quotient the restricted lattice by prev written in
    // cur's coordinates.
    let cur_lat = HermLattice::from_gram(restricted)?;
    let x = p
        .basis()
        .to_rat()
        .express_in_rows(&cur.basis().to_rat())
        .ok_or_else(|| Error::Precondition("prev must lie inside cur".into()))?
        .to_int()
        .ok_or_else(|| Error::Precondition("prev must lie inside cur integrally".into()))?;
    let x_sub = Sublattice::from_generators(cur.rank(), &x)?;
    let q2 = quotient_lattice(&cur_lat, &x_sub)?;
    let gram_b = q2.lattice().gram().clone();
    // Transport the second basis into the first and compare exactly.
    let ambient_rows = q2.section().to_rat().mul(&b_cur);
    let in_quotient = ambient_rows.mul(q.proj().matrix());
    let y = in_quotient
        .express_in_rows(&bg)
        .ok_or_else(|| Error::InvariantViolation("graded bases must span the same space".into()))?;
    if y.to_int().is_none() {
        return Err(Error::InvariantViolation("graded basis change must be integral".into()));
    }
    if y.mul(&gram_a).mul(&y.transpose()) != gram_b {
        return Err(Error::InvariantViolation(
            "graded piece metrics disagree between construction routes".into(),
        ));
    }
    HermLattice::from_gram(gram_a)
}

/// Per-condition verdict for a candidate filtration.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HNCheckReport {
    /// Successive steps strictly contained in each other, last one full.
    pub chain_ok: bool,
    /// Every graded piece along intact chain links is semistable.
    pub quotients_semistable: bool,
    /// Slopes of the successive quotients strictly decrease.
    pub slopes_decreasing: bool,
}

impl HNCheckReport {
    pub fn all_ok(&self) -> bool {
        self.chain_ok && self.quotients_semistable && self.slopes_decreasing
    }
}

/// Checks the three defining properties of the canonical filtration on any
/// structurally valid chain; graded pieces across broken links are skipped
/// (they are undefined) and reported through `chain_ok` instead.
pub fn verify_hn(e: &HermLattice, filt: &HNFiltration, cfg: &EnumConfig) -> Result<HNCheckReport> {
    let steps = filt.steps();
    let mut chain_ok = steps.last().map_or(false, |(f, _)| f.is_full());
    for w in steps.windows(2) {
        if !w[1].0.contains(&w[0].0) {
            chain_ok = false;
        }
    }
    let mut quotients_semistable = true;
    for i in 0..steps.len() {
        let prev = if i == 0 { None } else { Some(&steps[i - 1].0) };
        if let Some(p) = prev {
            if !steps[i].0.contains(p) {
                continue;
            }
        }
        let piece = graded_piece(e, prev, &steps[i].0)?;
        let rep = is_semistable(&piece, cfg)?;
        quotients_semistable &= rep.semistable;
    }
    let qd = filt.quotient_degrees();
    let mut slopes_decreasing = true;
    for w in qd.windows(2) {
        slopes_decreasing &= w[1].slope_cmp(&w[0]) == Ordering::Less;
    }
    Ok(HNCheckReport { chain_ok, quotients_semistable, slopes_decreasing })
}

/// The canonical filtration: repeatedly split off the maximal destabilizing
/// sublattice and recurse on the quotient. The result is verified against
/// all three defining properties before being returned.
pub fn hn_filtration(e: &HermLattice, cfg: &EnumConfig) -> Result<HNFiltration> {
    let filt = hn_filtration_unverified(e, cfg)?;
    let check = verify_hn(e, &filt, cfg)?;
    if !check.all_ok() {
        return Err(Error::InvariantViolation(
            "constructed filtration failed verification".into(),
        ));
    }
    Ok(filt)
}

fn hn_filtration_unverified(e: &HermLattice, cfg: &EnumConfig) -> Result<HNFiltration> {
    let (e1, d1) = max_destabilizing(e, cfg)?;
    let mut steps = vec![(e1.clone(), d1)];
    if !e1.is_full() {
        let q = quotient_lattice(e, &e1)?;
        let rest = hn_filtration_unverified(q.lattice(), cfg)?;
        for (g, _) in rest.steps() {
            let f = q.pull_back(g)?;
            let d = degree_of_sub(e, &f)?;
            steps.push((f, d));
        }
    }
    HNFiltration::from_steps(e, steps)
}
