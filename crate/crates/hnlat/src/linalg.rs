//! Exact integer and rational matrices.
//!
//! Matrices are dense and row-major. Integer matrices carry the normal-form
//! machinery (fraction-free determinants, Hermite and Smith forms, saturated
//! kernels); rational matrices carry elimination-based operations (rref,
//! inverse, kernels). Dimension mismatches in pure arithmetic are programmer
//! errors and panic; mathematically meaningful failures (singularity,
//! non-squareness) return `Error`.
//!
//! Hermite normal form convention, fixed for the whole crate: row style,
//! `H = U * M` with `U` unimodular, pivots positive, entries above a pivot
//! reduced into `[0, pivot)`, zero rows last. Under this convention `H` is
//! unique, so equal canonical bases mean equal row lattices.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{Int, Rat};

/// Quotient of an exact division; division that does not come out exact is a
/// bug in the caller.
fn div_exact(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "inexact division {a}/{b}");
    q
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>, cols: usize) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
        }
        let nrows = rows.len();
        Ok(IntMat { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Test/corpus convenience constructor from machine integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMat::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Int::from(v)).collect()).collect(),
            cols,
        )
        .expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn neg(&self) -> IntMat {
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| -v).collect() }
    }

    pub fn vstack(top: &IntMat, bottom: &IntMat) -> IntMat {
        assert_eq!(top.cols, bottom.cols, "vstack column mismatch");
        let mut data = top.data.clone();
        data.extend_from_slice(&bottom.data);
        IntMat { rows: top.rows + bottom.rows, cols: top.cols, data }
    }

    pub fn to_rat(&self) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| Rat::from_integer(v.clone())).collect(),
        }
    }

    /// Fraction-free (Bareiss) determinant. Intermediate entries stay
    /// integral, which controls coefficient growth compared to naive
    /// elimination.
    pub fn det(&self) -> Result<Int> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(Int::zero());
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                    m.set(i, j, div_exact(&v, &prev));
                }
                m.set(i, k, Int::zero());
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if sign < 0 { -d } else { d })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }

    /// row_dst -= q * row_src
    fn row_submul(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) - q * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// Replaces rows (a, b) by (x*a + y*b, u*a + v*b); the caller guarantees
    /// the 2x2 coefficient matrix is unimodular.
    fn row_combine(&mut self, a: usize, b: usize, x: &Int, y: &Int, u: &Int, v: &Int) {
        for j in 0..self.cols {
            let p = x * self.get(a, j) + y * self.get(b, j);
            let q = u * self.get(a, j) + v * self.get(b, j);
            self.set(a, j, p);
            self.set(b, j, q);
        }
    }

    /// Row-style Hermite normal form: returns `(H, U)` with `H = U * self`,
    /// `U` unimodular, pivots positive, entries above each pivot in
    /// `[0, pivot)`, zero rows last. `H` is the unique such form.
    pub fn hnf(&self) -> (IntMat, IntMat) {
        let mut h = self.clone();
        let mut u = IntMat::identity(self.rows);
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row >= self.rows {
                break;
            }
            if h.get(pivot_row, col).is_zero() {
                if let Some(r) = (pivot_row + 1..self.rows).find(|&r| !h.get(r, col).is_zero()) {
                    h.swap_rows(pivot_row, r);
                    u.swap_rows(pivot_row, r);
                } else {
                    continue;
                }
            }
            for r in pivot_row + 1..self.rows {
                if h.get(r, col).is_zero() {
                    continue;
                }
                let a = h.get(pivot_row, col).clone();
                let b = h.get(r, col).clone();
                if (&b % &a).is_zero() {
                    let q = div_exact(&b, &a);
                    h.row_submul(r, pivot_row, &q);
                    u.row_submul(r, pivot_row, &q);
                } else {
                    let eg = a.extended_gcd(&b);
                    let ag = div_exact(&a, &eg.gcd);
                    let bg = div_exact(&b, &eg.gcd);
                    h.row_combine(pivot_row, r, &eg.x, &eg.y, &-&bg, &ag);
                    u.row_combine(pivot_row, r, &eg.x, &eg.y, &-&bg, &ag);
                }
            }
            if h.get(pivot_row, col).is_negative() {
                h.negate_row(pivot_row);
                u.negate_row(pivot_row);
            }
            let pivot = h.get(pivot_row, col).clone();
            for r in 0..pivot_row {
                let q = h.get(r, col).div_floor(&pivot);
                h.row_submul(r, pivot_row, &q);
                u.row_submul(r, pivot_row, &q);
            }
            pivot_row += 1;
        }
        (h, u)
    }

    /// Nonzero rows of the Hermite form: the canonical basis of the integer
    /// row span.
    pub fn hnf_basis(&self) -> IntMat {
        let (h, _) = self.hnf();
        let kept: Vec<Vec<Int>> =
            (0..h.rows).filter(|&i| !h.is_zero_row(i)).map(|i| h.row(i).to_vec()).collect();
        IntMat::from_rows(kept, self.cols).expect("rows of fixed width")
    }

    pub fn rank(&self) -> usize {
        self.hnf_basis().rows
    }

    /// Smith elementary divisors `d_1 | d_2 | ..`, nonnegative, zeros last;
    /// length `min(rows, cols)`. For a full-rank square matrix their product
    /// is `|det|`.
    pub fn snf_diag(&self) -> Vec<Int> {
        let k = self.rows.min(self.cols);
        let mut m = self.clone();
        let mut t = 0;
        'outer: while t < k {
            // Locate any nonzero entry of the trailing submatrix.
            let mut found = None;
            'scan: for i in t..self.rows {
                for j in t..self.cols {
                    if !m.get(i, j).is_zero() {
                        found = Some((i, j));
                        break 'scan;
                    }
                }
            }
            let Some((pi, pj)) = found else { break 'outer };
            m.swap_rows(t, pi);
            m.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if m.get(i, t).is_zero() {
                        continue;
                    }
                    let a = m.get(t, t).clone();
                    let b = m.get(i, t).clone();
                    if (&b % &a).is_zero() {
                        let q = div_exact(&b, &a);
                        m.row_submul(i, t, &q);
                    } else {
                        let eg = a.extended_gcd(&b);
                        let ag = div_exact(&a, &eg.gcd);
                        let bg = div_exact(&b, &eg.gcd);
                        m.row_combine(t, i, &eg.x, &eg.y, &-&bg, &ag);
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    if m.get(t, j).is_zero() {
                        continue;
                    }
                    let a = m.get(t, t).clone();
                    let b = m.get(t, j).clone();
                    if (&b % &a).is_zero() {
                        let q = div_exact(&b, &a);
                        m.col_submul(j, t, &q);
                    } else {
                        let eg = a.extended_gcd(&b);
                        let ag = div_exact(&a, &eg.gcd);
                        let bg = div_exact(&b, &eg.gcd);
                        m.col_combine(t, j, &eg.x, &eg.y, &-&bg, &ag);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                // Pivot isolated; enforce divisibility over the rest.
                let mut offender = None;
                'div: for i in t + 1..self.rows {
                    for j in t + 1..self.cols {
                        if !(m.get(i, j) % m.get(t, t)).is_zero() {
                            offender = Some(i);
                            break 'div;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        // Fold the offending row in; the next gcd pass
                        // strictly shrinks the pivot.
                        let one = Int::one();
                        let zero = Int::zero();
                        m.row_combine(t, i, &one, &one, &zero, &one);
                    }
                    None => break,
                }
            }
            t += 1;
        }
        let mut d: Vec<Int> = (0..k).map(|i| m.get(i, i).abs()).collect();
        // Zeros, if any, already sit at the end because the scan stopped.
        for i in t..k {
            d[i] = Int::zero();
        }
        d
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col_dst -= q * col_src
    fn col_submul(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) - q * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn col_combine(&mut self, a: usize, b: usize, x: &Int, y: &Int, u: &Int, v: &Int) {
        for i in 0..self.rows {
            let p = x * self.get(i, a) + y * self.get(i, b);
            let q = u * self.get(i, a) + v * self.get(i, b);
            self.set(i, a, p);
            self.set(i, b, q);
        }
    }

    /// Canonical basis of the saturated integer left kernel
    /// `{ x : x * self = 0 }` (rows of length `self.rows`).
    ///
    /// The rows of the Hermite transform `U` aligned with zero rows of `H`
    /// span exactly this kernel, and it is saturated by construction.
    pub fn left_kernel_lattice(&self) -> IntMat {
        let (h, u) = self.hnf();
        let kept: Vec<Vec<Int>> =
            (0..h.rows).filter(|&i| h.is_zero_row(i)).map(|i| u.row(i).to_vec()).collect();
        let raw = IntMat::from_rows(kept, self.rows).expect("rows of fixed width");
        raw.hnf_basis()
    }

    /// Canonical Hermite basis of `(rational row span) ∩ Z^cols`, the
    /// saturation of the integer row span. Idempotent; returns a matrix with
    /// `rank` rows and no zero rows.
    pub fn saturate_rows(&self) -> IntMat {
        // x lies in the rational row span iff it annihilates the right
        // kernel, so saturation = integer left kernel of a kernel basis.
        let kernel = self.to_rat().kernel();
        let k_int = kernel.clear_rows_primitive();
        k_int.transpose().left_kernel_lattice()
    }

    /// gcd of all entries (0 for the zero matrix).
    pub fn content(&self) -> Int {
        crate::rat::gcd_all(&self.data)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
        }
        let nrows = rows.len();
        Ok(RatMat { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Test convenience constructor from machine integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMat::from_i64(rows).to_rat()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// First (i, j) with `m[i][j] != m[j][i]`, if any.
    pub fn symmetry_defect(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in 0..i {
                if self.get(i, j) != self.get(j, i) {
                    return Some((j, i));
                }
            }
        }
        None
    }

    /// Exact determinant: rows are cleared to integers, then the
    /// fraction-free integer path runs.
    pub fn det(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let mut scale = Rat::one();
        let mut int_rows: Vec<Vec<Int>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut l = Int::one();
            for v in self.row(i) {
                l = l.lcm(v.denom());
            }
            scale *= Rat::from_integer(l.clone());
            int_rows.push(
                self.row(i).iter().map(|v| div_exact(&(v.numer() * &l), v.denom())).collect(),
            );
        }
        let im = IntMat::from_rows(int_rows, self.cols)?;
        Ok(Rat::from_integer(im.det()?) / scale)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (RatMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for col in 0..m.cols {
            if pr >= m.rows {
                break;
            }
            let Some(r) = (pr..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(pr * m.cols + j, r * m.cols + j);
            }
            let inv = m.get(pr, col).recip();
            for j in 0..m.cols {
                let v = m.get(pr, j) * &inv;
                m.set(pr, j, v);
            }
            for i in 0..m.rows {
                if i == pr || m.get(i, col).is_zero() {
                    continue;
                }
                let f = m.get(i, col).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(pr, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            pr += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rows form the canonical (rref-derived) basis of the right kernel:
    /// `self * k^T = 0` for every returned row `k`.
    pub fn kernel(&self) -> RatMat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -r.get(prow, f).clone();
            }
            rows.push(v);
        }
        RatMat::from_rows(rows, self.cols).expect("rows of fixed width")
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMat> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        // Eliminate on [self | I].
        let mut aug = RatMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        let mut inv = RatMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Solves `X * basis = self` when every row of `self` lies in the row
    /// span of `basis` (which must have full row rank); `None` otherwise.
    pub fn express_in_rows(&self, basis: &RatMat) -> Option<RatMat> {
        assert_eq!(self.cols, basis.cols, "ambient dimension mismatch");
        if basis.rows == 0 {
            return if self.is_zero() { Some(RatMat::zeros(self.rows, 0)) } else { None };
        }
        // basis * basis^T is invertible over Q for real full-row-rank bases.
        let bbt = basis.mul(&basis.transpose());
        let inv = bbt.inverse().ok()?;
        let x = self.mul(&basis.transpose()).mul(&inv);
        if x.mul(basis) == *self {
            Some(x)
        } else {
            None
        }
    }

    /// Scales each row to a primitive integer vector (zero rows stay zero);
    /// preserves every row's line, hence the row span.
    pub fn clear_rows_primitive(&self) -> IntMat {
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut l = Int::one();
            for v in self.row(i) {
                l = l.lcm(v.denom());
            }
            let ints: Vec<Int> =
                self.row(i).iter().map(|v| div_exact(&(v.numer() * &l), v.denom())).collect();
            let g = crate::rat::gcd_all(&ints);
            if g.is_zero() {
                rows.push(ints);
            } else {
                rows.push(ints.iter().map(|v| div_exact(v, &g)).collect());
            }
        }
        IntMat::from_rows(rows, self.cols).expect("rows of fixed width")
    }

    /// Exact integer image, if every entry is integral.
    pub fn to_int(&self) -> Option<IntMat> {
        let mut data = Vec::with_capacity(self.data.len());
        for v in &self.data {
            if !v.is_integer() {
                return None;
            }
            data.push(v.to_integer());
        }
        Some(IntMat { rows: self.rows, cols: self.cols, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat_frac, rat_i};
    use proptest::prelude::*;

    /// Cofactor-expansion determinant: the independent oracle for the
    /// fraction-free path.
    fn det_cofactor(m: &RatMat) -> Rat {
        let n = m.rows();
        assert_eq!(n, m.cols());
        if n == 0 {
            return Rat::one();
        }
        let mut acc = Rat::zero();
        for j in 0..n {
            if m.get(0, j).is_zero() {
                continue;
            }
            let mut minor_rows = Vec::with_capacity(n - 1);
            for i in 1..n {
                let mut r: Vec<Rat> = Vec::with_capacity(n - 1);
                for c in 0..n {
                    if c != j {
                        r.push(m.get(i, c).clone());
                    }
                }
                minor_rows.push(r);
            }
            let minor = RatMat::from_rows(minor_rows, n - 1).unwrap();
            let term = m.get(0, j) * det_cofactor(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn seeded_int_mat(seed: u64, n: usize, lo: i64, hi: i64) -> IntMat {
        // Tiny deterministic LCG; fine for exercising exact identities.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            lo + ((state >> 33) as i64).rem_euclid(hi - lo + 1)
        };
        let rows: Vec<Vec<Int>> =
            (0..n).map(|_| (0..n).map(|_| Int::from(next())).collect()).collect();
        IntMat::from_rows(rows, n).unwrap()
    }

    #[test]
    fn det_matches_cofactor_oracle() {
        for seed in 0..40u64 {
            let n = 1 + (seed % 5) as usize;
            let m = seeded_int_mat(seed, n, -6, 6);
            let d = m.det().unwrap();
            assert_eq!(Rat::from_integer(d), det_cofactor(&m.to_rat()), "seed {seed}");
        }
        assert_eq!(IntMat::zeros(0, 0).det().unwrap(), int(1));
    }

    #[test]
    fn det_fixed_values() {
        assert_eq!(IntMat::from_i64(&[&[2, 1], &[1, 2]]).det().unwrap(), int(3));
        assert_eq!(IntMat::from_i64(&[&[1, 2], &[2, 4]]).det().unwrap(), int(0));
        let m = RatMat::from_rows(
            vec![vec![rat_frac(1, 2), rat_i(1)], vec![rat_i(1), rat_frac(5, 2)]],
            2,
        )
        .unwrap();
        assert_eq!(m.det().unwrap(), rat_frac(1, 4));
    }

    #[test]
    fn hnf_canonical_examples() {
        let (h, u) = IntMat::from_i64(&[&[1, 2], &[2, 4]]).hnf();
        assert_eq!(h, IntMat::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(u.mul(&IntMat::from_i64(&[&[1, 2], &[2, 4]])), h);

        let (h, _) = IntMat::from_i64(&[&[2, 0], &[0, 2]]).hnf();
        assert_eq!(h, IntMat::from_i64(&[&[2, 0], &[0, 2]]));

        // Above-pivot entries land in [0, pivot).
        let (h, _) = IntMat::from_i64(&[&[1, 7], &[0, 3]]).hnf();
        assert_eq!(h, IntMat::from_i64(&[&[1, 1], &[0, 3]]));

        // Negative single row flips to a positive leading entry.
        let (h, _) = IntMat::from_i64(&[&[-2, 1]]).hnf();
        assert_eq!(h, IntMat::from_i64(&[&[2, -1]]));
    }

    #[test]
    fn hnf_transform_is_unimodular() {
        for seed in 0..30u64 {
            let n = 2 + (seed % 3) as usize;
            let m = seeded_int_mat(seed, n, -5, 5);
            let (h, u) = m.hnf();
            assert_eq!(u.mul(&m), h, "seed {seed}");
            assert_eq!(u.det().unwrap().abs(), int(1), "seed {seed}");
        }
    }

    #[test]
    fn snf_fixed_values() {
        assert_eq!(IntMat::from_i64(&[&[2, 0], &[0, 4]]).snf_diag(), vec![int(2), int(4)]);
        // Hand-reduced: [[2,4],[6,8]] -> divisors (2, 4); det = -8.
        assert_eq!(IntMat::from_i64(&[&[2, 4], &[6, 8]]).snf_diag(), vec![int(2), int(4)]);
        // Rank-deficient keeps zeros last.
        assert_eq!(IntMat::from_i64(&[&[1, 2], &[2, 4]]).snf_diag(), vec![int(1), int(0)]);
        // Classic: diag(2, 3) has divisors (1, 6).
        assert_eq!(IntMat::from_i64(&[&[2, 0], &[0, 3]]).snf_diag(), vec![int(1), int(6)]);
    }

    #[test]
    fn snf_product_equals_abs_det_and_chain_divides() {
        for seed in 0..40u64 {
            let n = 1 + (seed % 4) as usize;
            let m = seeded_int_mat(seed.wrapping_add(99), n, -7, 7);
            let d = m.det().unwrap().abs();
            let divisors = m.snf_diag();
            let mut prod = Int::one();
            for w in divisors.windows(2) {
                if !w[1].is_zero() {
                    assert!((&w[1] % &w[0]).is_zero(), "chain broken: {divisors:?}");
                }
            }
            for v in &divisors {
                if !v.is_zero() {
                    prod *= v;
                }
            }
            if !d.is_zero() {
                assert_eq!(prod, d, "seed {seed}");
            }
        }
    }

    #[test]
    fn saturate_rows_examples() {
        // Index-2 sublattice of Z saturates to Z.
        assert_eq!(IntMat::from_i64(&[&[2, 0]]).saturate_rows(), IntMat::from_i64(&[&[1, 0]]));
        // (2, 1) is already primitive, hence saturated.
        assert_eq!(IntMat::from_i64(&[&[2, 1]]).saturate_rows(), IntMat::from_i64(&[&[2, 1]]));
        // Full-rank sublattice saturates to the whole ambient lattice.
        assert_eq!(IntMat::from_i64(&[&[2, 0], &[0, 3]]).saturate_rows(), IntMat::identity(2));
        // Span of (2,2,0) and (0,0,3): saturation is (1,1,0), (0,0,1).
        assert_eq!(
            IntMat::from_i64(&[&[2, 2, 0], &[0, 0, 3]]).saturate_rows(),
            IntMat::from_i64(&[&[1, 1, 0], &[0, 0, 1]])
        );
    }

    #[test]
    fn kernel_annihilates_and_has_complementary_rank() {
        for seed in 0..25u64 {
            let n = 2 + (seed % 4) as usize;
            let m = seeded_int_mat(seed.wrapping_add(7), n, -3, 3).to_rat();
            let k = m.kernel();
            assert_eq!(k.rows() + m.rank(), n, "rank-nullity, seed {seed}");
            if k.rows() > 0 {
                assert!(m.mul(&k.transpose()).is_zero(), "seed {seed}");
            }
        }
    }

    #[test]
    fn inverse_round_trips() {
        let m = RatMat::from_i64(&[&[1, 2], &[3, 5]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMat::identity(2));
        assert_eq!(inv.mul(&m), RatMat::identity(2));
        assert!(RatMat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn express_in_rows_detects_membership() {
        let basis = RatMat::from_i64(&[&[1, 0, 1], &[0, 2, 0]]);
        let inside = RatMat::from_i64(&[&[2, 2, 2]]);
        let x = inside.express_in_rows(&basis).unwrap();
        assert_eq!(x, RatMat::from_i64(&[&[2, 1]]));
        let outside = RatMat::from_i64(&[&[1, 0, 0]]);
        assert!(outside.express_in_rows(&basis).is_none());
    }

    proptest! {
        #[test]
        fn hnf_is_basis_change_invariant(seed in 0u64..500) {
            // Unimodular row mixing never changes the canonical form.
            let n = 2 + (seed % 3) as usize;
            let m = seeded_int_mat(seed, n, -5, 5);
            let mut u = IntMat::identity(n);
            // A couple of deterministic elementary ops derived from the seed.
            let a = (seed % n as u64) as usize;
            let b = ((seed / 3) % n as u64) as usize;
            if a != b {
                u.row_submul(a, b, &Int::from((seed % 5) as i64 - 2));
                u.swap_rows(a, b);
            }
            u.negate_row(a);
            prop_assert_eq!(u.det().unwrap().abs(), int(1));
            prop_assert_eq!(u.mul(&m).hnf().0, m.hnf().0);
        }

        #[test]
        fn saturate_is_idempotent_and_contains(seed in 0u64..300) {
            let rows = 1 + (seed % 3) as usize;
            let n = rows + (seed % 2) as usize + 1;
            let m0 = seeded_int_mat(seed, n, -4, 4);
            let gens: Vec<Vec<Int>> = (0..rows).map(|i| m0.row(i).to_vec()).collect();
            let m = IntMat::from_rows(gens, n).unwrap();
            let sat = m.saturate_rows();
            prop_assert_eq!(sat.saturate_rows(), sat.clone());
            prop_assert_eq!(sat.rank(), m.rank());
            // Every original row lies in the saturation's integer span.
            if sat.rows() > 0 {
                let x = m.to_rat().express_in_rows(&sat.to_rat());
                let x = x.expect("rows lie in the rational span");
                prop_assert!(x.to_int().is_some());
            }
        }

        #[test]
        fn det_is_multiplicative(seed in 0u64..200) {
            let n = 1 + (seed % 4) as usize;
            let a = seeded_int_mat(seed, n, -4, 4);
            let b = seeded_int_mat(seed.wrapping_add(1), n, -4, 4);
            let lhs = a.mul(&b).det().unwrap();
            prop_assert_eq!(lhs, a.det().unwrap() * b.det().unwrap());
        }
    }
}
