//! Positive definite rational metrics and the operations that move them
//! along linear maps.
//!
//! A `HermSpace` is a finite-dimensional rational vector space carrying a
//! positive definite symmetric Gram matrix. Metrics restrict along
//! injections, descend along surjections (by duality: the quotient metric is
//! the one whose dual restricts to the dual metric), dualize, and extend to
//! tensor and wedge powers. All comparisons are exact.
//!
//! Maps use the row convention: `LinMap` row `i` is the image of the `i`-th
//! source basis vector in target coordinates, so a vector `x` of source
//! coordinates maps to `x * M`.

use num_traits::{Signed, Zero};

use crate::combi::{binomial, k_subsets};
use crate::error::{Error, Result};
use crate::linalg::RatMat;
use crate::rat::{Int, Rat};

/// Rational vector space with a positive definite symmetric Gram matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HermSpace {
    gram: RatMat,
}

impl HermSpace {
    /// Validates symmetry and positive definiteness. The error names the
    /// first offending entry pair or the first non-positive leading
    /// principal minor.
    pub fn new(gram: RatMat) -> Result<Self> {
        if gram.rows() != gram.cols() {
            return Err(Error::NonSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if let Some((i, j)) = gram.symmetry_defect() {
            return Err(Error::NotSymmetric { row: i, col: j });
        }
        let space = HermSpace { gram };
        space.ldl()?;
        Ok(space)
    }

    /// Constructor for metrics that are positive definite for structural
    /// reasons (restrictions, quotients, duals, tensor and wedge powers of
    /// validated metrics).
    pub(crate) fn trusted(gram: RatMat) -> Self {
        debug_assert!(gram.is_symmetric());
        HermSpace { gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    pub fn inner(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let n = self.dim();
        assert_eq!(x.len(), n, "vector dimension mismatch");
        assert_eq!(y.len(), n, "vector dimension mismatch");
        let mut acc = Rat::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !y[j].is_zero() {
                    acc += &x[i] * self.gram.get(i, j) * &y[j];
                }
            }
        }
        acc
    }

    pub fn norm(&self, x: &[Rat]) -> Rat {
        self.inner(x, x)
    }

    pub fn norm_int(&self, x: &[Int]) -> Rat {
        let xr: Vec<Rat> = x.iter().map(|v| Rat::from_integer(v.clone())).collect();
        self.norm(&xr)
    }

    /// `gram = L * D * L^T` with `L` unit lower triangular and `D` the
    /// positive pivots; fails with the first non-positive leading principal
    /// minor if the metric is not positive definite. The `k`-th leading
    /// minor equals `d_1 * .. * d_k`.
    pub fn ldl(&self) -> Result<(RatMat, Vec<Rat>)> {
        let n = self.dim();
        let mut l = RatMat::identity(n);
        let mut d: Vec<Rat> = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..i {
                let mut v = self.gram.get(i, j).clone();
                for k in 0..j {
                    v -= l.get(i, k) * l.get(j, k) * &d[k];
                }
                l.set(i, j, v / &d[j]);
            }
            let mut v = self.gram.get(i, i).clone();
            for k in 0..i {
                v -= l.get(i, k) * l.get(i, k) * &d[k];
            }
            if !v.is_positive() {
                let minor: Rat = d.iter().product::<Rat>() * &v;
                return Err(Error::NotPositiveDefinite { minor_order: i + 1, minor });
            }
            d.push(v);
        }
        Ok((l, d))
    }
}

/// Linear map between coordinate spaces; row `i` is the image of source
/// basis vector `i` in target coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinMap {
    matrix: RatMat,
}

impl LinMap {
    pub fn new(matrix: RatMat) -> Self {
        LinMap { matrix }
    }

    pub fn from_int(matrix: &crate::linalg::IntMat) -> Self {
        LinMap { matrix: matrix.to_rat() }
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &RatMat {
        &self.matrix
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        let m = RatMat::from_rows(vec![x.to_vec()], self.source_dim()).expect("row vector");
        m.mul(&self.matrix).row(0).to_vec()
    }
}

/// Restriction of `target`'s metric along an injection: Gram `M * H * M^T`.
pub fn submetric(target: &HermSpace, incl: &LinMap) -> Result<HermSpace> {
    if incl.target_dim() != target.dim() {
        return Err(Error::DimensionMismatch { expected: target.dim(), found: incl.target_dim() });
    }
    if incl.matrix().rank() != incl.source_dim() {
        return Err(Error::NotInjective);
    }
    let m = incl.matrix();
    Ok(HermSpace::trusted(m.mul(target.gram()).mul(&m.transpose())))
}

/// Metric descended along a surjection `psi`: the unique metric on the
/// target whose dual pulls back to the dual metric, i.e. Gram
/// `(M^T * H^{-1} * M)^{-1}` in the row convention.
pub fn quotient_metric(source: &HermSpace, surj: &LinMap) -> Result<HermSpace> {
    if surj.source_dim() != source.dim() {
        return Err(Error::DimensionMismatch { expected: source.dim(), found: surj.source_dim() });
    }
    if surj.matrix().rank() != surj.target_dim() {
        return Err(Error::NotSurjective);
    }
    let m = surj.matrix();
    let hinv = source.gram().inverse().map_err(|_| {
        Error::InvariantViolation("positive definite Gram matrix must be invertible".into())
    })?;
    let dual = m.transpose().mul(&hinv).mul(m);
    let gram = dual.inverse().map_err(|_| {
        Error::InvariantViolation("restricted dual metric must be invertible".into())
    })?;
    Ok(HermSpace::trusted(gram))
}

/// Reference construction of the quotient metric kept deliberately separate
/// from `quotient_metric`: restrict to the orthogonal complement of the
/// kernel and transport along the isomorphism onto the target.
pub fn quotient_metric_via_complement(source: &HermSpace, surj: &LinMap) -> Result<HermSpace> {
    if surj.source_dim() != source.dim() {
        return Err(Error::DimensionMismatch { expected: source.dim(), found: surj.source_dim() });
    }
    if surj.matrix().rank() != surj.target_dim() {
        return Err(Error::NotSurjective);
    }
    let m = surj.matrix();
    // Kernel of x -> x * M, as rows.
    let ker = m.transpose().kernel();
    // Orthogonal complement W = { w : w * H * K^T = 0 }.
    let w = ker.mul(source.gram()).kernel();
    debug_assert_eq!(w.rows(), surj.target_dim());
    // Transport: W's basis maps to a basis C of the target.
    let c = w.mul(m);
    let c_inv = c.inverse().map_err(|_| {
        Error::InvariantViolation("complement must map isomorphically onto the target".into())
    })?;
    let g_w = w.mul(source.gram()).mul(&w.transpose());
    Ok(HermSpace::trusted(c_inv.mul(&g_w).mul(&c_inv.transpose())))
}

/// Dual metric on the dual basis: Gram `H^{-1}`.
pub fn dual_metric(space: &HermSpace) -> HermSpace {
    let inv = space
        .gram()
        .inverse()
        .expect("positive definite Gram matrix is invertible");
    HermSpace::trusted(inv)
}

/// Tensor product metric; basis `u_i (x) w_j` ordered with the right index
/// fastest (`(i, j) -> i * dim_w + j`). Gram is the Kronecker product.
pub fn tensor_metric(a: &HermSpace, b: &HermSpace) -> HermSpace {
    let (da, db) = (a.dim(), b.dim());
    let mut g = RatMat::zeros(da * db, da * db);
    for i in 0..da {
        for k in 0..da {
            let aik = a.gram().get(i, k);
            if aik.is_zero() {
                continue;
            }
            for j in 0..db {
                for l in 0..db {
                    g.set(i * db + j, k * db + l, aik * b.gram().get(j, l));
                }
            }
        }
    }
    HermSpace::trusted(g)
}

/// Wedge power metric on the size-`s` subset basis in lexicographic order:
/// Gram entry (S, T) is the minor `det(H[S, T])`. Under this normalization
/// the norm of `x_1 ∧ .. ∧ x_s` is exactly `det(h(x_i, x_j))`.
pub fn wedge_metric(space: &HermSpace, s: usize) -> Result<HermSpace> {
    let n = space.dim();
    if s > n {
        return Err(Error::RankOutOfRange { rank: s, ambient: n });
    }
    let subs = k_subsets(n, s);
    let dim = binomial(n, s);
    let mut g = RatMat::zeros(dim, dim);
    for (a, sa) in subs.iter().enumerate() {
        for (b, sb) in subs.iter().enumerate() {
            if b < a {
                g.set(a, b, g.get(b, a).clone());
                continue;
            }
            let rows: Vec<Vec<Rat>> = sa
                .iter()
                .map(|&i| sb.iter().map(|&j| space.gram().get(i, j).clone()).collect())
                .collect();
            let minor = RatMat::from_rows(rows, s).expect("rows of fixed width");
            g.set(a, b, minor.det().expect("square minor"));
        }
    }
    Ok(HermSpace::trusted(g))
}

/// Exact positive semidefiniteness via Schur complements with symmetric
/// pivoting. In a PSD matrix a zero diagonal entry forces its whole row to
/// vanish, so once no positive pivot remains the matrix must be zero.
fn is_psd(g: &RatMat) -> bool {
    debug_assert!(g.is_symmetric());
    let n = g.rows();
    let mut m = g.clone();
    let mut active: Vec<usize> = (0..n).collect();
    loop {
        if active.iter().any(|&i| m.get(i, i).is_negative()) {
            return false;
        }
        let Some(pos) = active.iter().position(|&i| m.get(i, i).is_positive()) else {
            // All remaining diagonal entries are zero.
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| m.get(i, j).is_zero()));
        };
        let p = active.remove(pos);
        let d = m.get(p, p).clone();
        for &i in &active {
            if m.get(i, p).is_zero() {
                continue;
            }
            let f = m.get(i, p) / &d;
            for &j in &active {
                let v = m.get(i, j) - &f * m.get(p, j);
                m.set(i, j, v);
            }
        }
    }
}

/// Whether `h1(x, x) >= h2(x, x)` for every vector `x`, decided exactly as
/// positive semidefiniteness of the Gram difference.
pub fn dominates(h1: &HermSpace, h2: &HermSpace) -> Result<bool> {
    if h1.dim() != h2.dim() {
        return Err(Error::DimensionMismatch { expected: h1.dim(), found: h2.dim() });
    }
    Ok(is_psd(&h1.gram().sub(h2.gram())))
}
