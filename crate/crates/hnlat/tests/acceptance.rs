//! Product acceptance gate: seven criteria, each verified exactly and
//! timed against a pinned wall-clock budget, reporting one line apiece.
//!
//! Every numeric comparison here is exact rational equality or an exact
//! ordering decision; the only tolerances are the runtime budgets.

use std::time::{Duration, Instant};

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hnlat::checks::{
    additivity_over_enumerated_subs, check_base_change, check_dual_identities,
    check_max_slope_containment, check_max_slope_vs_quotient, check_metric_domination,
    check_metric_two_paths, check_saturation_defect, check_tensor_wedge_norms,
};
use hnlat::corpus::{fixed_corpus, random_pd_lattice, random_unimodular};
use hnlat::enumeration::{all_subs_with_deg_at_least, EnumConfig};
use hnlat::hn::{hn_filtration, is_semistable, verify_hn};
use hnlat::lattice::{degree, ExpDegree, HermLattice, Sublattice};
use hnlat::linalg::{IntMat, RatMat};
use hnlat::oracle::{naive_hn, naive_subs};
use hnlat::rat::{rat_frac, rat_i, Rat};

fn report(criterion: usize, name: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    println!(
        "[acceptance] criterion {criterion} ({name}): PASS in {elapsed:.2?} (budget {budget:?})"
    );
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its budget: {elapsed:?} > {budget:?}"
    );
}

fn int_lat(rows: &[&[i64]]) -> HermLattice {
    HermLattice::from_gram(RatMat::from_i64(rows)).unwrap()
}

#[test]
fn criterion_1_metric_identity_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC01);
    let outcomes = [
        check_metric_two_paths(&mut rng, 200).unwrap(),
        check_metric_domination(&mut rng, 200).unwrap(),
        check_dual_identities(&mut rng, 200).unwrap(),
        check_tensor_wedge_norms(&mut rng, 200).unwrap(),
    ];
    for o in &outcomes {
        assert!(o.cases >= 200, "{} ran only {} configurations", o.name, o.cases);
        assert!(o.passed(), "{} failed: {:?}", o.name, o.first_failure);
    }
    report(1, "metric identity suite", start, Duration::from_secs(30));
}

#[test]
fn criterion_2_degree_base_change() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC02);
    let o = check_base_change(&mut rng, 200).unwrap();
    assert!(o.cases >= 200, "only {} instances", o.cases);
    assert!(o.passed(), "failed: {:?}", o.first_failure);
    report(2, "degree base change", start, Duration::from_secs(10));
}

#[test]
fn criterion_3_saturation_defect_and_additivity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC03);
    let o = check_saturation_defect(&mut rng, 100).unwrap();
    assert!(o.cases >= 100, "only {} defect instances", o.cases);
    assert!(o.passed(), "failed: {:?}", o.first_failure);
    // Degree additivity across every sublattice enumerated down to a deep
    // degree threshold, on fresh random lattices of every supported rank.
    let cfg = EnumConfig::default();
    let dmin = rat_frac(1, 100);
    let mut checked = 0;
    for _ in 0..4 {
        for rank in 2..=4 {
            let e = random_pd_lattice(rank, &mut rng);
            let (cases, failures) = additivity_over_enumerated_subs(&e, &dmin, &cfg).unwrap();
            assert_eq!(failures, 0, "additivity failed on a rank {rank} lattice");
            checked += cases;
        }
    }
    assert!(checked > 100, "additivity sweep found only {checked} sublattices");
    report(3, "saturation defect and additivity", start, Duration::from_secs(60));
}

#[test]
fn criterion_4_enumeration_matches_oracle() {
    let start = Instant::now();
    let corpus = fixed_corpus();
    assert_eq!(corpus.len(), 30);
    let cfg = EnumConfig::default();
    for (i, e) in corpus.iter().enumerate() {
        for dmin in [rat_i(1), rat_frac(1, 4), rat_frac(1, 25)] {
            let fast = all_subs_with_deg_at_least(e, &dmin, &cfg).unwrap();
            assert!(fast.complete, "member {i} hit the search cap");
            let slow = naive_subs(e, &dmin).unwrap();
            assert_eq!(fast, slow, "member {i} diverged at threshold {dmin}");
        }
    }
    report(4, "bounded-degree enumeration vs oracle", start, Duration::from_secs(120));
}

#[test]
fn criterion_5_filtration_matches_oracle() {
    let start = Instant::now();
    let corpus = fixed_corpus();
    let cfg = EnumConfig::default();
    let mut unstable = 0;
    for (i, e) in corpus.iter().enumerate() {
        let hn = hn_filtration(e, &cfg).unwrap();
        assert_eq!(hn, naive_hn(e).unwrap(), "member {i} filtration diverged");
        assert!(verify_hn(e, &hn, &cfg).unwrap().all_ok(), "member {i} failed verification");
        let quotients = hn.quotient_degrees();
        for pair in quotients.windows(2) {
            assert_eq!(
                pair[0].slope_cmp(&pair[1]),
                std::cmp::Ordering::Greater,
                "member {i} slopes not strictly decreasing"
            );
        }
        let product: Rat = quotients.iter().map(ExpDegree::d).product();
        assert_eq!(&product, degree(e).d(), "member {i} quotient degrees do not multiply up");
        if !is_semistable(e, &cfg).unwrap().semistable {
            unstable += 1;
            assert!(
                check_max_slope_vs_quotient(e, &cfg).unwrap(),
                "member {i} slope comparison report failed"
            );
            assert!(
                check_max_slope_containment(e, &cfg).unwrap(),
                "member {i} containment report failed"
            );
        }
    }
    assert!(unstable >= 5, "corpus exercises only {unstable} non-semistable members");
    report(5, "filtration vs oracle and slope reports", start, Duration::from_secs(120));
}

#[test]
fn criterion_6_filtration_equivariance() {
    let start = Instant::now();
    let corpus = fixed_corpus();
    let cfg = EnumConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC06);
    let picks: Vec<&HermLattice> = corpus.iter().step_by(3).collect();
    assert_eq!(picks.len(), 10);
    for e in picks {
        let n = e.rank();
        let hn = hn_filtration(e, &cfg).unwrap();
        for _ in 0..50 {
            let u = random_unimodular(n, 8, &mut rng).to_rat();
            let twisted =
                HermLattice::from_gram(u.mul(e.metric().gram()).mul(&u.transpose())).unwrap();
            let hn_twisted = hn_filtration(&twisted, &cfg).unwrap();
            let u_inv = u.inverse().unwrap();
            assert_eq!(hn.len(), hn_twisted.len());
            for (step, twisted_step) in hn.steps().iter().zip(hn_twisted.steps()) {
                let moved = step.0.basis().to_rat().mul(&u_inv).to_int().unwrap();
                let expected = Sublattice::from_generators(n, &moved).unwrap();
                assert_eq!(twisted_step.0, expected, "filtration step did not transform");
                assert_eq!(twisted_step.1, step.1, "step degree changed under basis change");
            }
        }
    }
    report(6, "unimodular equivariance", start, Duration::from_secs(120));
}

#[test]
fn criterion_7_worked_fixed_points() {
    let start = Instant::now();
    let cfg = EnumConfig::default();

    // Stretched plane: destabilized by its short axis, two-step filtration.
    let e = int_lat(&[&[1, 0], &[0, 4]]);
    let verdict = is_semistable(&e, &cfg).unwrap();
    assert!(!verdict.semistable);
    let (witness, wd) = verdict.witness.unwrap();
    assert_eq!(witness.basis(), &IntMat::from_rows(vec![vec![1.into(), 0.into()]], 2).unwrap());
    assert_eq!(wd, ExpDegree::new(rat_i(1), 1));
    let hn = hn_filtration(&e, &cfg).unwrap();
    assert_eq!(hn.len(), 2);
    assert_eq!(hn.steps()[0].1, ExpDegree::new(rat_i(1), 1));
    assert_eq!(hn.steps()[1].1, ExpDegree::new(rat_frac(1, 4), 2));
    assert_eq!(hn.steps()[0].0, witness);

    // Two flat directions and one heavy one: the flat plane leads.
    let e = int_lat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 9]]);
    let hn = hn_filtration(&e, &cfg).unwrap();
    assert_eq!(hn.len(), 2);
    let plane = IntMat::from_rows(
        vec![vec![1.into(), 0.into(), 0.into()], vec![0.into(), 1.into(), 0.into()]],
        3,
    )
    .unwrap();
    assert_eq!(hn.steps()[0].0.basis(), &plane);
    assert_eq!(hn.steps()[0].1, ExpDegree::new(rat_i(1), 2));

    // Identity Grams: semistable of slope zero in every supported rank.
    for n in 1..=4 {
        let e = HermLattice::from_gram(RatMat::identity(n)).unwrap();
        assert!(is_semistable(&e, &cfg).unwrap().semistable);
        let d = degree(&e);
        assert!(d.d().is_one());
        assert_eq!(d.slope_cmp(&ExpDegree::new(rat_i(1), 1)), std::cmp::Ordering::Equal);
        let hn = hn_filtration(&e, &cfg).unwrap();
        assert_eq!(hn.len(), 1);
        assert!(hn.steps()[0].0.is_full());
    }

    // Hexagonal plane: semistable even though its degree is negative.
    let e = int_lat(&[&[2, 1], &[1, 2]]);
    assert!(is_semistable(&e, &cfg).unwrap().semistable);

    // Census of the unit rank-4 lattice at threshold one half.
    let e = int_lat(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    let subs = all_subs_with_deg_at_least(&e, &rat_frac(1, 2), &cfg).unwrap();
    assert!(subs.complete);
    let counts: Vec<(usize, usize)> =
        subs.by_rank.iter().map(|(r, v)| (*r, v.len())).collect();
    assert_eq!(counts, vec![(1, 16), (2, 30), (3, 16), (4, 1)]);

    report(7, "worked fixed points", start, Duration::from_secs(60));
}
