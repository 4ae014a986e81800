//! Randomized property checks tying the metric calculus, degree arithmetic,
//! and searches together; shared by the command line `check` verb and the
//! acceptance suite.
//!
//! Every check draws its configurations from a caller-seeded generator and
//! verifies exact identities, so a failure is a real defect, never noise.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combi::k_subsets;
use crate::corpus::{
    fixed_corpus, random_full_row_rank, random_gram, random_int_mat, random_pd_lattice,
    random_rational_pd, random_unimodular, reference_feasible,
};
use crate::enumeration::{all_subs_with_deg_at_least, short_vectors, EnumConfig};
use crate::error::Result;
use crate::herm::{
    dominates, dual_metric, quotient_metric, quotient_metric_via_complement, submetric,
    tensor_metric, wedge_metric, HermSpace, LinMap,
};
use crate::hn::{hn_filtration, max_destabilizing, max_slope_subs};
use crate::lattice::{
    degree, degree_of_gen_sub, degree_of_sub, index_ratio, quotient_lattice, saturation,
    sub_index, GenSubmodule, HermLattice, Sublattice,
};
use crate::linalg::{IntMat, RatMat};
use crate::oracle::{naive_hn, naive_short_vectors, naive_subs};
use crate::rat::{rat_frac, rat_i, Int, Rat};

/// Tally of one property over its sampled configurations.
#[derive(Clone, Debug)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl PropertyOutcome {
    fn new(name: &'static str) -> Self {
        PropertyOutcome { name, cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn sample_space(rng: &mut impl Rng, max_dim: usize) -> HermSpace {
    let n = rng.gen_range(2..=max_dim);
    let gram =
        if rng.gen_bool(0.5) { random_gram(n, rng) } else { random_rational_pd(n, rng) };
    HermSpace::new(gram).expect("samplers produce definite matrices")
}

/// Surjection out of dimension `n`, as a full column rank map to a smaller
/// dimension, occasionally rescaled to exercise rational entries.
fn sample_surjection(rng: &mut impl Rng, n: usize, m: usize) -> LinMap {
    let mat = random_full_row_rank(m, n, -3, 3, rng).transpose().to_rat();
    let mat = if rng.gen_bool(0.3) {
        mat.scale(&rat_frac(1, rng.gen_range(2..=3i64)))
    } else {
        mat
    };
    LinMap::new(mat)
}

fn sample_inclusion(rng: &mut impl Rng, s: usize, n: usize) -> LinMap {
    LinMap::new(random_full_row_rank(s, n, -3, 3, rng).to_rat())
}

/// Quadratic form of an integer vector under a Gram matrix.
fn form(gram: &RatMat, x: &[Int]) -> Rat {
    let n = x.len();
    let mut q = Rat::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if x[j].is_zero() {
                continue;
            }
            q += gram.get(i, j)
                * Rat::from_integer(x[i].clone())
                * Rat::from_integer(x[j].clone());
        }
    }
    q
}

/// Surjection onto the coordinates complementary to the row span of `k`:
/// an `n x (n - rank k)` matrix whose left kernel is exactly that span.
fn quotient_map_killing(k: &RatMat) -> RatMat {
    k.kernel().transpose()
}

/// Restricting to a subspace and then descending equals descending first
/// and restricting after, exactly; and the descended metric agrees between
/// its two construction routes.
pub fn check_metric_two_paths(rng: &mut ChaCha8Rng, cases: usize) -> Result<PropertyOutcome> {
    let mut out = PropertyOutcome::new("metric-two-paths");
    for _ in 0..cases {
        let space = sample_space(rng, 6);
        let n = space.dim();
        let m = rng.gen_range(1..n);
        let surj = sample_surjection(rng, n, m);
        let a = quotient_metric(&space, &surj)?;
        let b = quotient_metric_via_complement(&space, &surj)?;
        let mut ok = a.gram() == b.gram();
        // Chain of subspaces: restrict to the middle one, then kill the
        // small one; or kill the small one inside the whole space and view
        // the middle quotient inside that. Both pull back to the same form.
        let w = rng.gen_range(2..=n);
        let w1 = random_full_row_rank(w, n, -3, 3, rng).to_rat();
        let u = rng.gen_range(1..w);
        let t = random_full_row_rank(u, w, -2, 2, rng).to_rat();
        let h_mid = submetric(&space, &LinMap::new(w1.clone()))?;
        let s1 = quotient_map_killing(&t);
        let left = quotient_metric(&h_mid, &LinMap::new(s1.clone()))?;
        let small = t.mul(&w1);
        let m_big = quotient_map_killing(&small);
        let right = quotient_metric(&space, &LinMap::new(m_big.clone()))?;
        let img = w1.mul(&m_big);
        let pulled_left = s1.mul(left.gram()).mul(&s1.transpose());
        let pulled_right = img.mul(right.gram()).mul(&img.transpose());
        ok &= pulled_left == pulled_right;
        out.record(ok, || format!("dim {n}: descended metrics diverged"));
    }
    Ok(out)
}

/// For subspaces `W`, `U` and the image `Q` of `W` in `V/U`, the metric
/// descended from `W` dominates the one restricted from `V/U`, including
/// the determinant consequence on any basis of `Q`.
pub fn check_metric_domination(rng: &mut ChaCha8Rng, cases: usize) -> Result<PropertyOutcome> {
    let mut out = PropertyOutcome::new("subquotient-domination");
    for _ in 0..cases {
        let space = sample_space(rng, 5);
        let n = space.dim();
        let (w_rows, phi, m_big) = loop {
            let w = rng.gen_range(1..=n - 1);
            let k = rng.gen_range(1..n);
            let w_rows = random_full_row_rank(w, n, -3, 3, rng).to_rat();
            let k_rows = random_full_row_rank(k, n, -3, 3, rng).to_rat();
            let m_big = quotient_map_killing(&k_rows);
            let phi = w_rows.mul(&m_big);
            if phi.rank() > 0 {
                break (w_rows, phi, m_big);
            }
        };
        let q_dim = phi.rank();
        let h_w = submetric(&space, &LinMap::new(w_rows.clone()))?;
        let h_vu = quotient_metric(&space, &LinMap::new(m_big))?;
        // Basis of the image, from the echelon form of the induced map.
        let (ech, _) = phi.rref();
        let c = RatMat::from_rows(
            (0..q_dim).map(|i| (0..ech.cols()).map(|j| ech.get(i, j).clone()).collect()).collect(),
            ech.cols(),
        )?;
        let s = phi.express_in_rows(&c).expect("image lies in its own echelon span");
        let h1 = quotient_metric(&h_w, &LinMap::new(s.clone()))?;
        let h2 = submetric(&h_vu, &LinMap::new(c))?;
        let mut ok = dominates(&h1, &h2)? && h1.gram().det()? >= h2.gram().det()?;
        // The same comparison read through the covering space: both forms
        // pulled back to `W` coordinates, where they may be singular.
        let pulled1 = s.mul(h1.gram()).mul(&s.transpose());
        let pulled2 = phi.mul(h_vu.gram()).mul(&phi.transpose());
        ok &= dominates(&HermSpace::trusted(pulled1.clone()), &HermSpace::trusted(pulled2.clone()))?;
        for _ in 0..4 {
            let x: Vec<Int> =
                (0..w_rows.rows()).map(|_| Int::from(rng.gen_range(-4..=4i64))).collect();
            ok &= form(&pulled2, &x) <= form(&pulled1, &x);
        }
        out.record(ok, || format!("dim {n}: subquotient domination failed"));
    }
    Ok(out)
}

/// Double dual identity, the exact Cauchy-Schwarz pairing bound with its
/// equality witness, and duality swapping restrictions with quotients.
pub fn check_dual_identities(rng: &mut ChaCha8Rng, cases: usize) -> Result<PropertyOutcome> {
    let mut out = PropertyOutcome::new("dual-identities");
    for _ in 0..cases {
        let space = sample_space(rng, 6);
        let n = space.dim();
        let dual = dual_metric(&space);
        let mut ok = dual_metric(&dual).gram() == space.gram();
        let x: Vec<Int> = (0..n).map(|_| Int::from(rng.gen_range(-4..=4i64))).collect();
        let phi: Vec<Int> = (0..n).map(|_| Int::from(rng.gen_range(-4..=4i64))).collect();
        let mut pair = Rat::zero();
        for i in 0..n {
            pair += Rat::from_integer(&x[i] * &phi[i]);
        }
        ok &= &pair * &pair <= form(space.gram(), &x) * form(dual.gram(), &phi);
        // Equality witness: the functional x H pairs with x at full norm.
        let xr = RatMat::from_rows(vec![x.iter().map(|v| Rat::from_integer(v.clone())).collect()], n)?;
        let witness = xr.mul(space.gram());
        let wpair = xr.mul(&witness.transpose()).get(0, 0).clone();
        let wnorm = witness.mul(dual.gram()).mul(&witness.transpose()).get(0, 0).clone();
        ok &= &wpair * &wpair == form(space.gram(), &x) * wnorm;
        // Duality exchanges descended and restricted metrics.
        let m = rng.gen_range(1..n);
        let surj = sample_surjection(rng, n, m);
        let q = quotient_metric(&space, &surj)?;
        let via_dual = submetric(&dual, &LinMap::new(surj.matrix().transpose()))?;
        ok &= dual_metric(&q).gram() == via_dual.gram();
        let s = rng.gen_range(1..=n);
        let incl = sample_inclusion(rng, s, n);
        let sub = submetric(&space, &incl)?;
        let via_dual2 = quotient_metric(&dual, &LinMap::new(incl.matrix().transpose()))?;
        ok &= dual_metric(&sub).gram() == via_dual2.gram();
        out.record(ok, || format!("dim {n}: a duality identity failed"));
    }
    Ok(out)
}

fn raw_minors(m: &IntMat, s: usize) -> Vec<Int> {
    let mut out = Vec::new();
    for cols in k_subsets(m.cols(), s) {
        let rows: Vec<Vec<Int>> = (0..s)
            .map(|i| cols.iter().map(|&j| m.get(i, j).clone()).collect())
            .collect();
        out.push(IntMat::from_rows(rows, s).expect("fixed width").det().expect("square"));
    }
    out
}

/// Product metrics multiply norms of pure tensors; the wedge norm of a
/// frame equals its restricted Gram determinant.
pub fn check_tensor_wedge_norms(rng: &mut ChaCha8Rng, cases: usize) -> Result<PropertyOutcome> {
    let mut out = PropertyOutcome::new("tensor-wedge-norms");
    for _ in 0..cases {
        let da = rng.gen_range(1..=2usize);
        let db = rng.gen_range(1..=3usize);
        let ha = HermSpace::new(random_gram(da, rng))?;
        let hb = HermSpace::new(random_gram(db, rng))?;
        let t = tensor_metric(&ha, &hb);
        let a: Vec<Int> = (0..da).map(|_| Int::from(rng.gen_range(-3..=3i64))).collect();
        let b: Vec<Int> = (0..db).map(|_| Int::from(rng.gen_range(-3..=3i64))).collect();
        let mut ab = vec![Int::zero(); da * db];
        for i in 0..da {
            for j in 0..db {
                ab[i * db + j] = &a[i] * &b[j];
            }
        }
        let mut ok = form(t.gram(), &ab) == form(ha.gram(), &a) * form(hb.gram(), &b);
        let n = rng.gen_range(2..=5usize);
        let s = rng.gen_range(1..=n.min(3));
        let h = HermSpace::new(random_gram(n, rng))?;
        let frame = random_int_mat(s, n, -3, 3, rng);
        let wedge = wedge_metric(&h, s)?;
        let coords = raw_minors(&frame, s);
        let fr = frame.to_rat();
        let gram_det = fr.mul(h.gram()).mul(&fr.transpose()).det()?;
        ok &= form(wedge.gram(), &coords) == gram_det;
        out.record(ok, || "a product or wedge norm identity failed".to_string());
    }
    Ok(out)
}

/// Degrees and covolume ratios transform exactly under base change: one
/// lattice, one generating set, and two change matrices per instance.
pub fn check_base_change(rng: &mut ChaCha8Rng, cases: usize) -> Result<PropertyOutcome> {
    let mut out = PropertyOutcome::new("degree-base-change");
    for _ in 0..cases {
        let n = rng.gen_range(2..=4usize);
        let e = random_pd_lattice(n, rng);
        let r = rng.gen_range(1..=n);
        let gens = random_full_row_rank(r, n, -4, 4, rng);
        // Generators of the rational span, written in its own coordinates.
        let x = loop {
            let mut m = random_full_row_rank(r, r, -4, 4, rng).to_rat();
            if rng.gen_bool(0.4) {
                m = m.scale(&rat_frac(1, rng.gen_range(2..=3i64)));
            }
            if !m.det()?.is_zero() {
                break m;
            }
        };
        let a = loop {
            let m = random_int_mat(r, r, -3, 3, rng);
            if !m.det()?.is_zero() {
                break m;
            }
        };
        let b = loop {
            let mut m = random_int_mat(r, r, -3, 3, rng).to_rat();
            if rng.gen_bool(0.5) {
                m = m.scale(&rat_frac(1, 2));
            }
            match m.det() {
                Ok(d) if !d.is_zero() => break m,
                _ => continue,
            }
        };
        // Elementary divisors recover the covolume exactly.
        let snf_prod: Int = a.snf_diag().iter().product();
        let mut ok = snf_prod == a.det()?.abs();
        // Integral and rational base changes scale the ratio by |det|.
        let base = index_ratio(&x)?;
        ok &= index_ratio(&a.to_rat().mul(&x))?
            == Rat::from_integer(a.det()?.abs()) * &base;
        ok &= index_ratio(&b.mul(&x))? == b.det()?.abs() * &base;
        // Degrees of generated submodules ignore unimodular regeneration.
        let s = GenSubmodule::new(n, gens.clone())?;
        let u = random_unimodular(r, 6, rng);
        let s2 = GenSubmodule::new(n, u.mul(&gens))?;
        ok &= degree_of_gen_sub(&e, &s)? == degree_of_gen_sub(&e, &s2)?;
        // The total degree ignores unimodular change of the ambient basis.
        let v = random_unimodular(n, 6, rng).to_rat();
        let twisted =
            HermLattice::from_gram(v.mul(e.metric().gram()).mul(&v.transpose()))?;
        ok &= degree(&e) == degree(&twisted);
        out.record(ok, || format!("rank {n}: a base-change identity failed"));
    }
    Ok(out)
}

/// Saturating a submodule raises its degree by exactly the squared index.
pub fn check_saturation_defect(rng: &mut ChaCha8Rng, cases: usize) -> Result<PropertyOutcome> {
    let mut out = PropertyOutcome::new("saturation-defect");
    for _ in 0..cases {
        let n = rng.gen_range(2..=4usize);
        let e = random_pd_lattice(n, rng);
        let gens = loop {
            let rows = rng.gen_range(1..=n);
            let mut g = random_int_mat(rows, n, -4, 4, rng);
            if rng.gen_bool(0.5) {
                let k = Int::from(rng.gen_range(2..=3i64));
                let i = rng.gen_range(0..rows);
                for j in 0..n {
                    let v = g.get(i, j) * &k;
                    g.set(i, j, v);
                }
            }
            if g.rank() > 0 {
                break g;
            }
        };
        let s = GenSubmodule::new(n, gens)?;
        let d_s = degree_of_gen_sub(&e, &s)?;
        let f = saturation(&e, &s)?;
        let d_f = degree_of_sub(&e, &f)?;
        let idx = sub_index(f.basis(), &s.span_basis())?;
        let idx_sq = Rat::from_integer(&idx * &idx);
        let ok = d_f.rank() == d_s.rank() && *d_f.d() == d_s.d() * &idx_sq;
        out.record(ok, || {
            format!("rank {n}: defect identity failed with index {idx}")
        });
    }
    Ok(out)
}

/// Degrees are additive along quotients: the whole equals sub plus
/// quotient, exactly.
pub fn check_degree_additivity(rng: &mut ChaCha8Rng, cases: usize) -> Result<PropertyOutcome> {
    let mut out = PropertyOutcome::new("degree-additivity");
    for _ in 0..cases {
        let n = rng.gen_range(2..=4usize);
        let e = random_pd_lattice(n, rng);
        let f = loop {
            let rows = rng.gen_range(1..n);
            let g = random_int_mat(rows, n, -3, 3, rng);
            match Sublattice::from_generators(n, &g) {
                Ok(f) if f.rank() < n => break f,
                _ => continue,
            }
        };
        let q = quotient_lattice(&e, &f)?;
        let total = degree(&e);
        let combined = degree_of_sub(&e, &f)?.plus(&degree(q.lattice()));
        out.record(total == combined, || format!("rank {n}: additivity failed"));
    }
    Ok(out)
}

/// The maximal destabilizing sublattice has strictly larger slope than the
/// whole lattice, which in turn exceeds the quotient's slope.
pub fn check_max_slope_vs_quotient(e: &HermLattice, cfg: &EnumConfig) -> Result<bool> {
    let (e1, d1) = max_destabilizing(e, cfg)?;
    if e1.is_full() {
        return Ok(d1 == degree(e));
    }
    let total = degree(e);
    let dq = total.quotient_from(&d1);
    Ok(d1.slope_cmp(&total) == std::cmp::Ordering::Greater
        && total.slope_cmp(&dq) == std::cmp::Ordering::Greater
        && d1.slope_cmp(&dq) == std::cmp::Ordering::Greater)
}

/// Every maximal-slope sublattice lies inside the top-rank attainer.
pub fn check_max_slope_containment(e: &HermLattice, cfg: &EnumConfig) -> Result<bool> {
    let report = max_slope_subs(e, cfg)?;
    let top = report
        .attainers
        .iter()
        .max_by_key(|(f, _)| f.rank())
        .expect("attainers are never empty")
        .0
        .clone();
    Ok(report.attainers.iter().all(|(f, _)| top.contains(f)))
}

/// Budgeted searches agree with the exhaustive box scans on small random
/// lattices: vectors, bounded-degree sublattices, and filtrations.
pub fn check_oracle_agreement(
    rng: &mut ChaCha8Rng,
    cases: usize,
    cfg: &EnumConfig,
) -> Result<PropertyOutcome> {
    let mut out = PropertyOutcome::new("oracle-agreement");
    for _ in 0..cases {
        let n = rng.gen_range(2..=3usize);
        let e = loop {
            let e = random_pd_lattice(n, rng);
            if reference_feasible(&e) {
                break e;
            }
        };
        let bound = rat_i(rng.gen_range(1..=8i64));
        let mut ok =
            short_vectors(e.metric(), &bound, cfg)? == naive_short_vectors(e.metric(), &bound)?;
        let dmin = [rat_i(1), rat_frac(1, 2), rat_frac(1, 4)][rng.gen_range(0..3)].clone();
        ok &= all_subs_with_deg_at_least(&e, &dmin, cfg)? == naive_subs(&e, &dmin)?;
        ok &= hn_filtration(&e, cfg)? == naive_hn(&e)?;
        out.record(ok, || format!("rank {n}: a search disagreed with its reference"));
    }
    Ok(out)
}

/// Slope bounds hold across the fixed corpus.
fn corpus_slope_checks(cfg: &EnumConfig) -> Result<(PropertyOutcome, PropertyOutcome)> {
    let mut vs_quotient = PropertyOutcome::new("max-slope-vs-quotient");
    let mut containment = PropertyOutcome::new("max-slope-containment");
    for e in fixed_corpus() {
        vs_quotient.record(check_max_slope_vs_quotient(&e, cfg)?, || {
            format!("rank {}: slope chain violated", e.rank())
        });
        containment.record(check_max_slope_containment(&e, cfg)?, || {
            format!("rank {}: attainer escaped the top sublattice", e.rank())
        });
    }
    Ok((vs_quotient, containment))
}

/// Runs every property with `cases` configurations each (the corpus-driven
/// ones run once per corpus member) and returns the tallies.
pub fn run_all_checks(seed: u64, cases: usize, cfg: &EnumConfig) -> Result<Vec<PropertyOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        check_metric_two_paths(&mut rng, cases)?,
        check_metric_domination(&mut rng, cases)?,
        check_dual_identities(&mut rng, cases)?,
        check_tensor_wedge_norms(&mut rng, cases)?,
        check_base_change(&mut rng, cases)?,
        check_saturation_defect(&mut rng, cases)?,
        check_degree_additivity(&mut rng, cases)?,
        check_oracle_agreement(&mut rng, cases.min(12), cfg)?,
    ];
    let (vs_quotient, containment) = corpus_slope_checks(cfg)?;
    out.push(vs_quotient);
    out.push(containment);
    Ok(out)
}

/// Degree additivity across every enumerated sublattice of one lattice;
/// returns (cases, failures).
pub fn additivity_over_enumerated_subs(
    e: &HermLattice,
    dmin: &Rat,
    cfg: &EnumConfig,
) -> Result<(usize, usize)> {
    let report = all_subs_with_deg_at_least(e, dmin, cfg)?;
    let total = degree(e);
    let mut cases = 0;
    let mut failures = 0;
    for subs in report.by_rank.values() {
        for f in subs {
            if f.is_full() {
                continue;
            }
            cases += 1;
            let q = quotient_lattice(e, f)?;
            if degree_of_sub(e, f)?.plus(&degree(q.lattice())) != total {
                failures += 1;
            }
        }
    }
    Ok((cases, failures))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_properties_hold_on_a_seeded_run() {
        let cfg = EnumConfig::default();
        let outcomes = run_all_checks(0xC0FFEE, 12, &cfg).unwrap();
        assert_eq!(outcomes.len(), 10);
        for o in &outcomes {
            assert!(o.cases > 0, "{} ran no cases", o.name);
            assert!(o.passed(), "{} failed: {:?}", o.name, o.first_failure);
        }
    }

    #[test]
    fn additivity_sweep_on_a_stretched_lattice() {
        let e = HermLattice::from_gram(RatMat::from_i64(&[&[1, 0], &[0, 4]])).unwrap();
        let (cases, failures) =
            additivity_over_enumerated_subs(&e, &rat_frac(1, 4), &EnumConfig::default()).unwrap();
        assert_eq!(failures, 0);
        assert_eq!(cases, 2);
    }

    #[test]
    fn slope_inequalities_are_strict_on_known_unstable_input() {
        // Direct spot check of the slope chain on diag(1, 4): the
        // destabilizer has slope 0, the whole -log(2), the quotient -log(4).
        let e = HermLattice::from_gram(RatMat::from_i64(&[&[1, 0], &[0, 4]])).unwrap();
        assert!(check_max_slope_vs_quotient(&e, &EnumConfig::default()).unwrap());
        assert!(check_max_slope_containment(&e, &EnumConfig::default()).unwrap());
    }
}
