//! Hermitian lattices over the integers: `Z^n` with a positive definite
//! rational Gram matrix, their saturated sublattices, and arithmetic degrees.
//!
//! Degrees are kept in exponential form to stay exact: a sublattice `F` of
//! rank `r` with generators `x` has
//!
//! ```text
//! deg(F) = log #(F / <x>) - (1/2) log det(h(x_i, x_j)) = (1/2) log D
//! ```
//!
//! and we store the positive rational `D = index^2 / det(h(x_i, x_j))`
//! together with the rank. The slope is `deg / rank`; slopes compare exactly
//! by cross-raising: `D_a^{r_b}` against `D_b^{r_a}`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::combi::k_subsets;
use crate::error::{Error, Result};
use crate::herm::{quotient_metric, HermSpace, LinMap};
use crate::linalg::{IntMat, RatMat};
use crate::rat::{ln_rat_approx, pow_rat, Int, Rat};

/// `Z^rank` with a positive definite metric on its rational span.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HermLattice {
    metric: HermSpace,
}

impl HermLattice {
    pub fn new(metric: HermSpace) -> Result<Self> {
        if metric.dim() == 0 {
            return Err(Error::Precondition("lattice rank must be positive".into()));
        }
        Ok(HermLattice { metric })
    }

    pub fn from_gram(gram: RatMat) -> Result<Self> {
        HermLattice::new(HermSpace::new(gram)?)
    }

    pub fn rank(&self) -> usize {
        self.metric.dim()
    }

    pub fn metric(&self) -> &HermSpace {
        &self.metric
    }

    pub fn gram(&self) -> &RatMat {
        self.metric.gram()
    }
}

/// Saturated sublattice of `Z^n` in canonical Hermite basis. Values of this
/// type are always saturated: constructors saturate their input, so two
/// sublattices are equal iff their `basis` matrices are equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: IntMat,
}

impl Sublattice {
    /// Saturation of the integer row span of `gens`, in canonical basis.
    pub fn from_generators(ambient_rank: usize, gens: &IntMat) -> Result<Self> {
        if gens.cols() != ambient_rank {
            return Err(Error::DimensionMismatch { expected: ambient_rank, found: gens.cols() });
        }
        let basis = gens.saturate_rows();
        if basis.rows() == 0 {
            return Err(Error::ZeroSubmodule);
        }
        Ok(Sublattice { ambient_rank, basis })
    }

    /// The whole lattice `Z^n`.
    pub fn full(ambient_rank: usize) -> Self {
        Sublattice { ambient_rank, basis: IntMat::identity(ambient_rank) }
    }

    /// Wraps a basis that is already saturated and in Hermite form; checked
    /// in debug builds.
    pub(crate) fn from_canonical_basis(ambient_rank: usize, basis: IntMat) -> Self {
        debug_assert_eq!(basis.cols(), ambient_rank);
        debug_assert!(basis.rows() > 0);
        debug_assert_eq!(basis.saturate_rows(), basis, "basis not saturated-canonical");
        Sublattice { ambient_rank, basis }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_rank
    }

    /// Containment of saturated sublattices, decided on rational spans.
    pub fn contains(&self, other: &Sublattice) -> bool {
        self.ambient_rank == other.ambient_rank
            && other.basis.to_rat().express_in_rows(&self.basis.to_rat()).is_some()
    }

    /// Coordinates of the basis in the wedge power: all `rank x rank`
    /// minors, indexed by sorted column subsets in lexicographic order.
    /// Saturation makes this vector primitive.
    pub fn plucker(&self) -> Vec<Int> {
        let s = self.rank();
        let mut out = Vec::new();
        for cols in k_subsets(self.ambient_rank, s) {
            let rows: Vec<Vec<Int>> = (0..s)
                .map(|i| cols.iter().map(|&j| self.basis.get(i, j).clone()).collect())
                .collect();
            let m = IntMat::from_rows(rows, s).expect("rows of fixed width");
            out.push(m.det().expect("square minor"));
        }
        out
    }
}

/// Finitely generated submodule of `Z^n`, not necessarily saturated; the
/// generators carry no normalization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenSubmodule {
    ambient_rank: usize,
    gens: IntMat,
}

impl GenSubmodule {
    pub fn new(ambient_rank: usize, gens: IntMat) -> Result<Self> {
        if gens.cols() != ambient_rank {
            return Err(Error::DimensionMismatch { expected: ambient_rank, found: gens.cols() });
        }
        Ok(GenSubmodule { ambient_rank, gens })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn gens(&self) -> &IntMat {
        &self.gens
    }

    /// Canonical basis of the integer span of the generators.
    pub fn span_basis(&self) -> IntMat {
        self.gens.hnf_basis()
    }
}

/// Exponentially encoded degree: `deg = (1/2) log d` at the given rank, so
/// `d` is a positive rational and the slope is `(1/(2 rank)) log d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpDegree {
    d: Rat,
    rank: usize,
}

impl ExpDegree {
    pub fn new(d: Rat, rank: usize) -> Self {
        assert!(d.is_positive(), "degree encoding must be positive");
        assert!(rank > 0, "degree rank must be positive");
        ExpDegree { d, rank }
    }

    pub fn d(&self) -> &Rat {
        &self.d
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Advisory value of `deg = (1/2) log d`.
    pub fn deg_approx(&self) -> f64 {
        ln_rat_approx(&self.d) / 2.0
    }

    /// Advisory value of the slope `deg / rank`.
    pub fn slope_approx(&self) -> f64 {
        ln_rat_approx(&self.d) / (2.0 * self.rank as f64)
    }

    /// Exact slope comparison: `log(d_a)/(2 r_a)` versus `log(d_b)/(2 r_b)`
    /// iff `d_a^{r_b}` versus `d_b^{r_a}`.
    pub fn slope_cmp(&self, other: &ExpDegree) -> Ordering {
        pow_rat(&self.d, other.rank).cmp(&pow_rat(&other.d, self.rank))
    }

    /// Degree of a direct extension: degrees add, ranks add.
    pub fn plus(&self, other: &ExpDegree) -> ExpDegree {
        ExpDegree::new(&self.d * &other.d, self.rank + other.rank)
    }

    /// Degree of the quotient in a short exact sequence with total degree
    /// `self` and sub-degree `sub`.
    pub fn quotient_from(&self, sub: &ExpDegree) -> ExpDegree {
        assert!(self.rank > sub.rank, "quotient rank must be positive");
        ExpDegree::new(&self.d / &sub.d, self.rank - sub.rank)
    }
}

/// Smallest principal minor of the Gram matrix over coordinate subsets of
/// size `s`: the degree encoding of the best coordinate-axis sublattice,
/// hence an attainable bound for sublattice searches.
pub fn min_coordinate_minor(e: &HermLattice, s: usize) -> Result<Rat> {
    if s == 0 || s > e.rank() {
        return Err(Error::RankOutOfRange { rank: s, ambient: e.rank() });
    }
    let gram = e.gram();
    let mut best: Option<Rat> = None;
    for cols in k_subsets(e.rank(), s) {
        let mut rows = Vec::with_capacity(s);
        for &i in &cols {
            rows.push(cols.iter().map(|&j| gram.get(i, j).clone()).collect());
        }
        let minor = RatMat::from_rows(rows, s)?.det()?;
        if best.as_ref().map_or(true, |b| &minor < b) {
            best = Some(minor);
        }
    }
    Ok(best.expect("at least one coordinate subset"))
}

/// Saturation of a generated submodule inside the ambient lattice.
pub fn saturation(e: &HermLattice, s: &GenSubmodule) -> Result<Sublattice> {
    if s.ambient_rank() != e.rank() {
        return Err(Error::DimensionMismatch { expected: e.rank(), found: s.ambient_rank() });
    }
    Sublattice::from_generators(e.rank(), s.gens())
}

/// Exponential index ratio `#(Z^r / <a x_1, .., a x_r>) / a^r` for rational
/// vectors `x_i` (rows of `xs`) forming a basis of `Q^r`; independent of the
/// integer `a` clearing the denominators. Equals the product of the Smith
/// divisors of `a * xs` divided by `a^r`.
pub fn index_ratio(xs: &RatMat) -> Result<Rat> {
    if xs.rows() != xs.cols() {
        return Err(Error::NonSquare { rows: xs.rows(), cols: xs.cols() });
    }
    let r = xs.rows();
    let mut a = Int::one();
    for i in 0..r {
        for v in xs.row(i) {
            a = num_integer::Integer::lcm(&a, v.denom());
        }
    }
    let scaled = xs.scale(&Rat::from_integer(a.clone()));
    let ints = scaled.to_int().expect("denominators cleared");
    let divisors = ints.snf_diag();
    let mut prod = Int::one();
    for dv in &divisors {
        if dv.is_zero() {
            return Err(Error::DependentVectors);
        }
        prod *= dv;
    }
    Ok(Rat::new(prod, crate::rat::pow_int(&a, r)))
}

/// `#(span(sup) / span(sub))` for two bases of the same rational span with
/// `sub`'s rows lying in the integer span of `sup`'s.
pub fn sub_index(sup: &IntMat, sub: &IntMat) -> Result<Int> {
    if sup.rows() != sub.rows() {
        return Err(Error::DimensionMismatch { expected: sup.rows(), found: sub.rows() });
    }
    let coords = sub
        .to_rat()
        .express_in_rows(&sup.to_rat())
        .ok_or(Error::Precondition("sub must span the same rational space".into()))?;
    let coords = coords
        .to_int()
        .ok_or(Error::Precondition("sub must lie in the integer span of sup".into()))?;
    let divisors = coords.snf_diag();
    let mut prod = Int::one();
    for dv in &divisors {
        if dv.is_zero() {
            return Err(Error::DependentVectors);
        }
        prod *= dv;
    }
    Ok(prod)
}

/// Degree of the whole lattice: `d = 1 / det(gram)`.
pub fn degree(e: &HermLattice) -> ExpDegree {
    let det = e.gram().det().expect("square Gram matrix");
    ExpDegree::new(det.recip(), e.rank())
}

/// Degree of a saturated sublattice with the restricted metric:
/// `d = 1 / det(B H B^T)` over the canonical basis `B` (the index factor is
/// 1 because `B` is a basis of `F` itself).
pub fn degree_of_sub(e: &HermLattice, f: &Sublattice) -> Result<ExpDegree> {
    if f.ambient_rank() != e.rank() {
        return Err(Error::DimensionMismatch { expected: e.rank(), found: f.ambient_rank() });
    }
    let b = f.basis().to_rat();
    let g = b.mul(e.gram()).mul(&b.transpose());
    let det = g.det()?;
    if !det.is_positive() {
        return Err(Error::InvariantViolation("restricted Gram must be positive definite".into()));
    }
    Ok(ExpDegree::new(det.recip(), f.rank()))
}

/// Degree of a generated (possibly non-saturated) submodule: computed from
/// the canonical basis of its span, over which the index factor is 1.
pub fn degree_of_gen_sub(e: &HermLattice, s: &GenSubmodule) -> Result<ExpDegree> {
    if s.ambient_rank() != e.rank() {
        return Err(Error::DimensionMismatch { expected: e.rank(), found: s.ambient_rank() });
    }
    let basis = s.span_basis();
    if basis.rows() == 0 {
        return Err(Error::ZeroSubmodule);
    }
    let b = basis.to_rat();
    let g = b.mul(e.gram()).mul(&b.transpose());
    let det = g.det()?;
    if !det.is_positive() {
        return Err(Error::InvariantViolation("restricted Gram must be positive definite".into()));
    }
    Ok(ExpDegree::new(det.recip(), basis.rows()))
}

/// Quotient of a lattice by a proper saturated sublattice, together with the
/// projection and an integral section.
#[derive(Clone, Debug)]
pub struct QuotientLattice {
    lattice: HermLattice,
    proj: LinMap,
    /// Rows represent the quotient basis inside the ambient lattice;
    /// `section * proj.matrix = I`.
    section: IntMat,
    sub_basis: IntMat,
}

impl QuotientLattice {
    pub fn lattice(&self) -> &HermLattice {
        &self.lattice
    }

    pub fn proj(&self) -> &LinMap {
        &self.proj
    }

    pub fn section(&self) -> &IntMat {
        &self.section
    }

    /// Preimage in the ambient lattice of a saturated sublattice of the
    /// quotient; saturated of rank `rank(F) + rank(G)`.
    pub fn pull_back(&self, g: &Sublattice) -> Result<Sublattice> {
        if g.ambient_rank() != self.lattice.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.lattice.rank(),
                found: g.ambient_rank(),
            });
        }
        let lifted = g.basis().mul(&self.section);
        let stacked = IntMat::vstack(&self.sub_basis, &lifted);
        let basis = stacked.hnf_basis();
        Ok(Sublattice::from_canonical_basis(self.sub_basis.cols(), basis))
    }

    /// Image in the quotient of a saturated sublattice of the ambient
    /// lattice (the saturation of `(G + F) / F`).
    pub fn push_forward(&self, g: &Sublattice) -> Result<Sublattice> {
        if g.ambient_rank() != self.sub_basis.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.sub_basis.cols(),
                found: g.ambient_rank(),
            });
        }
        let image = g.basis().to_rat().mul(self.proj.matrix());
        let image = image.to_int().expect("integral projection of integral rows");
        Sublattice::from_generators(self.lattice.rank(), &image)
    }
}

/// Constructs `E / F` for a proper nonzero saturated sublattice: completes
/// `F`'s basis to a basis of `Z^n` (deterministically, via the Hermite
/// transform of the transposed basis), projects, and descends the metric.
pub fn quotient_lattice(e: &HermLattice, f: &Sublattice) -> Result<QuotientLattice> {
    let n = e.rank();
    if f.ambient_rank() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.ambient_rank() });
    }
    let s = f.rank();
    if s == 0 || s >= n {
        return Err(Error::RankOutOfRange { rank: s, ambient: n });
    }
    let b = f.basis();
    // Saturation means the columns of B generate Z^s, so hnf(B^T) is the
    // identity over zero rows and U^T completes B to a basis of Z^n.
    let (h, u) = b.transpose().hnf();
    let mut expect = IntMat::identity(s);
    for _ in s..n {
        expect = IntMat::vstack(&expect, &IntMat::zeros(1, s));
    }
    if h != expect {
        return Err(Error::InvariantViolation("sublattice basis is not saturated".into()));
    }
    let w = u.transpose();
    // B * W = [I | 0], so M = W^{-1} is an integral basis of Z^n whose first
    // s rows are exactly B.
    let m = w
        .to_rat()
        .inverse()
        .map_err(|_| Error::InvariantViolation("unimodular transform must invert".into()))?
        .to_int()
        .ok_or_else(|| Error::InvariantViolation("unimodular inverse must be integral".into()))?;
    for i in 0..s {
        debug_assert_eq!(m.row(i), b.row(i), "completion must extend the basis");
    }
    let rest = n - s;
    let mut section_rows = Vec::with_capacity(rest);
    for i in s..n {
        section_rows.push(m.row(i).to_vec());
    }
    let section = IntMat::from_rows(section_rows, n)?;
    // Coordinates of e_i in the basis M are row i of W; the quotient
    // coordinates are the last n-s of them.
    let mut proj_rows = Vec::with_capacity(n);
    for i in 0..n {
        proj_rows.push(w.row(i)[s..].to_vec());
    }
    let proj = LinMap::from_int(&IntMat::from_rows(proj_rows, rest)?);
    let metric = quotient_metric(e.metric(), &proj)?;
    Ok(QuotientLattice {
        lattice: HermLattice::new(metric)?,
        proj,
        section,
        sub_basis: b.clone(),
    })
}
