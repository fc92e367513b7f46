//! Dense exact linear algebra over prime fields F_q.
//!
//! Everything downstream (hom spaces, ideals, functor tables) reduces to the
//! kernels in this module: row reduction, solving, kernels and subspace
//! bookkeeping. Matrices are dense and row-major; all moduli are primes
//! below 2^16 and arithmetic is exact.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A scalar in F_q, reduced representative in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElem {
    pub value: u32,
    pub modulus: u32,
}

impl FieldElem {
    pub fn new(value: i64, modulus: u32) -> Self {
        assert!(is_prime(modulus), "modulus {modulus} is not prime");
        let q = modulus as i64;
        FieldElem {
            value: (value.rem_euclid(q)) as u32,
            modulus,
        }
    }

    pub fn zero(modulus: u32) -> Self {
        FieldElem::new(0, modulus)
    }

    pub fn one(modulus: u32) -> Self {
        FieldElem::new(1, modulus)
    }

    pub fn add(self, other: FieldElem) -> FieldElem {
        assert_eq!(self.modulus, other.modulus);
        FieldElem::new(self.value as i64 + other.value as i64, self.modulus)
    }

    pub fn mul(self, other: FieldElem) -> FieldElem {
        assert_eq!(self.modulus, other.modulus);
        FieldElem::new(self.value as i64 * other.value as i64, self.modulus)
    }

    pub fn neg(self) -> FieldElem {
        FieldElem::new(-(self.value as i64), self.modulus)
    }

    pub fn inv(self) -> FieldElem {
        assert!(self.value != 0, "inverting zero in F_{}", self.modulus);
        FieldElem::new(mod_inv(self.value, self.modulus) as i64, self.modulus)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inv(a: u32, q: u32) -> u32 {
    // extended Euclid; q prime, a != 0 mod q
    let (mut r0, mut r1) = (q as i64, (a % q) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    assert_eq!(r0, 1, "{a} not invertible mod {q}");
    s0.rem_euclid(q as i64) as u32
}

/// Dense matrix over F_q, row-major.
///
/// By convention linear maps act on *row* vectors, `x -> x * M`, so a map
/// `V -> W` is a `dim V x dim W` matrix and composition is left-to-right
/// matrix multiplication.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FqMatrix {
    q: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of `row_reduce`: `transform * m = rref`, `rank = pivots.len()`.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rref: FqMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub transform: FqMatrix,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FqMatrix {}x{} mod {} [", self.rows, self.cols, self.q)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl FqMatrix {
    pub fn zeros(q: u32, rows: usize, cols: usize) -> Self {
        assert!(is_prime(q), "modulus {q} is not prime");
        FqMatrix {
            q,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(q: u32, n: usize) -> Self {
        let mut m = FqMatrix::zeros(q, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(q: u32, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = FqMatrix::zeros(q, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set_i64(i, j, v);
            }
        }
        m
    }

    pub fn from_fn(q: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = FqMatrix::zeros(q, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set_i64(i, j, f(i, j));
            }
        }
        m
    }

    pub fn row_vector(q: u32, entries: &[i64]) -> Self {
        FqMatrix::from_rows(q, &[entries.to_vec()])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v % self.q;
    }

    pub fn set_i64(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v.rem_euclid(self.q as i64) as u32;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut m = FqMatrix::zeros(self.q, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c));
            }
        }
        m
    }

    pub fn mul(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.q, other.q);
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let q = self.q as u64;
        let mut m = FqMatrix::zeros(self.q, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    m.data[idx] = ((m.data[idx] as u64 + a * other.get(k, c) as u64) % q) as u32;
                }
            }
        }
        m
    }

    pub fn add(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.q, other.q);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for i in 0..m.data.len() {
            m.data[i] = (m.data[i] + other.data[i]) % self.q;
        }
        m
    }

    pub fn sub(&self, other: &FqMatrix) -> FqMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FqMatrix {
        let mut m = self.clone();
        for v in &mut m.data {
            *v = (self.q - *v) % self.q;
        }
        m
    }

    pub fn scale(&self, s: u32) -> FqMatrix {
        let s = s % self.q;
        let mut m = self.clone();
        for v in &mut m.data {
            *v = ((*v as u64 * s as u64) % self.q as u64) as u32;
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.q, other.q);
        assert_eq!(self.rows, other.rows);
        let mut m = FqMatrix::zeros(self.q, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c));
            }
        }
        m
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.q, other.q);
        assert_eq!(self.cols, other.cols);
        let mut m = FqMatrix::zeros(self.q, self.rows + other.rows, self.cols);
        m.data[..self.data.len()].copy_from_slice(&self.data);
        m.data[self.data.len()..].copy_from_slice(&other.data);
        m
    }

    pub fn vstack_all(q: u32, cols: usize, parts: &[FqMatrix]) -> FqMatrix {
        let mut out = FqMatrix::zeros(q, 0, cols);
        for p in parts {
            out = out.vstack(p);
        }
        out
    }

    pub fn block_diag(q: u32, blocks: &[FqMatrix]) -> FqMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = FqMatrix::zeros(q, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> FqMatrix {
        let mut m = FqMatrix::zeros(self.q, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c));
            }
        }
        m
    }

    /// Reduced row echelon form with deterministic pivoting (first nonzero
    /// entry in column order) and the recording transform.
    pub fn row_reduce(&self) -> Echelon {
        let q = self.q as u64;
        let mut a = self.clone();
        let mut t = FqMatrix::identity(self.q, self.rows);
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..a.cols {
            // first nonzero entry at or below `lead`
            let Some(pr) = (lead..a.rows).find(|&r| a.get(r, col) != 0) else {
                continue;
            };
            if pr != lead {
                for c in 0..a.cols {
                    let (x, y) = (a.get(lead, c), a.get(pr, c));
                    a.set(lead, c, y);
                    a.set(pr, c, x);
                }
                for c in 0..t.cols {
                    let (x, y) = (t.get(lead, c), t.get(pr, c));
                    t.set(lead, c, y);
                    t.set(pr, c, x);
                }
            }
            let inv = mod_inv(a.get(lead, col), self.q) as u64;
            for c in 0..a.cols {
                a.set(lead, c, ((a.get(lead, c) as u64 * inv) % q) as u32);
            }
            for c in 0..t.cols {
                t.set(lead, c, ((t.get(lead, c) as u64 * inv) % q) as u32);
            }
            for r in 0..a.rows {
                if r != lead && a.get(r, col) != 0 {
                    let f = a.get(r, col) as u64;
                    for c in 0..a.cols {
                        let v = (a.get(r, c) as u64 + (q - f % q) * a.get(lead, c) as u64) % q;
                        a.set(r, c, v as u32);
                    }
                    for c in 0..t.cols {
                        let v = (t.get(r, c) as u64 + (q - f % q) * t.get(lead, c) as u64) % q;
                        t.set(r, c, v as u32);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == a.rows {
                break;
            }
        }
        Echelon {
            rref: a,
            rank: pivots.len(),
            pivots,
            transform: t,
        }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    pub fn inverse(&self) -> Option<FqMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let e = self.row_reduce();
        (e.rank == self.rows).then_some(e.transform)
    }

    /// Solves `self * x = b` for a column vector `x` (both columns). Returns
    /// `None` iff the system is inconsistent.
    pub fn solve(&self, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let rhs = FqMatrix::from_fn(self.q, self.rows, 1, |r, _| {
            assert_eq!(b[r].modulus, self.q, "modulus mismatch");
            b[r].value as i64
        });
        let x = self.transpose().solve_left(&rhs.transpose())?;
        Some(
            (0..self.cols)
                .map(|i| FieldElem::new(x.get(0, i) as i64, self.q))
                .collect(),
        )
    }

    /// Solves `x * self = rhs` for `x` (maps in row convention: find a
    /// preimage of `rhs` under postcomposition). Returns any solution.
    pub fn solve_left(&self, rhs: &FqMatrix) -> Option<FqMatrix> {
        assert_eq!(self.q, rhs.q);
        assert_eq!(self.cols, rhs.cols, "solve_left: target mismatch");
        let e = self.row_reduce();
        let mut x = FqMatrix::zeros(self.q, rhs.rows, self.rows);
        // each row of rhs must be a combination of rows of self
        for r in 0..rhs.rows {
            let mut v: Vec<u32> = rhs.row(r).to_vec();
            let mut coeffs = vec![0u32; self.rows];
            for (pi, &pc) in e.pivots.iter().enumerate() {
                let f = v[pc];
                if f != 0 {
                    for c in 0..self.cols {
                        let sub = (f as u64 * e.rref.get(pi, c) as u64) % self.q as u64;
                        v[c] = ((v[c] as u64 + self.q as u64 - sub) % self.q as u64) as u32;
                    }
                    for c in 0..self.rows {
                        coeffs[c] = ((coeffs[c] as u64
                            + f as u64 * e.transform.get(pi, c) as u64)
                            % self.q as u64) as u32;
                    }
                }
            }
            if v.iter().any(|&z| z != 0) {
                return None;
            }
            for c in 0..self.rows {
                x.set(r, c, coeffs[c]);
            }
        }
        Some(x)
    }

    /// Solves `self * x = rhs` in row convention (find a preimage under
    /// precomposition): `x : rows(rhs) -> cols(self)` is not meaningful here;
    /// this solves for `x` with `self.mul(&x) == rhs`.
    pub fn solve_right(&self, rhs: &FqMatrix) -> Option<FqMatrix> {
        assert_eq!(self.rows, rhs.rows, "solve_right: source mismatch");
        Some(
            self.transpose()
                .solve_left(&rhs.transpose())?
                .transpose(),
        )
    }

    /// Basis of `{x : x * self = 0}` (kernel of the map in row convention),
    /// returned as rows of a matrix in reduced echelon form.
    pub fn left_kernel(&self) -> FqMatrix {
        let e = self.row_reduce();
        let free = self.rows - e.rank;
        let mut k = FqMatrix::zeros(self.q, free, self.rows);
        for (i, r) in (e.rank..self.rows).enumerate() {
            for c in 0..self.rows {
                k.set(i, c, e.transform.get(r, c));
            }
        }
        k.row_space()
    }

    /// Basis of `{x : self * x = 0}` as rows (each row transposed solution).
    pub fn right_kernel(&self) -> FqMatrix {
        self.transpose().left_kernel()
    }

    /// Row space in reduced echelon form, zero rows dropped.
    pub fn row_space(&self) -> FqMatrix {
        let e = self.row_reduce();
        let mut m = e.rref;
        m.data.truncate(e.rank * m.cols);
        m.rows = e.rank;
        m
    }

    /// Expresses `v` in the row space of `self`: coefficients `c` with
    /// `c * self = v`, or None.
    pub fn coords_of(&self, v: &FqMatrix) -> Option<FqMatrix> {
        self.solve_left(v)
    }
}

/// Subspace helpers. A subspace of F_q^n is represented as a matrix whose
/// rows form a basis, canonically in reduced echelon form.
pub mod subspace {
    use super::FqMatrix;

    pub fn canonical(rows: &FqMatrix) -> FqMatrix {
        rows.row_space()
    }

    pub fn contains(space: &FqMatrix, v: &FqMatrix) -> bool {
        space.solve_left(v).is_some()
    }

    pub fn equal(a: &FqMatrix, b: &FqMatrix) -> bool {
        canonical(a) == canonical(b)
    }

    pub fn sum(a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
        canonical(&a.vstack(b))
    }

    pub fn dim(a: &FqMatrix) -> usize {
        a.rank()
    }

    /// Intersection of two row spaces inside F_q^n.
    pub fn intersection(a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
        assert_eq!(a.cols(), b.cols());
        if a.rows() == 0 || b.rows() == 0 {
            return FqMatrix::zeros(a.q(), 0, a.cols());
        }
        // x*a = y*b  <=>  (x, -y) in left kernel of [a; b]
        let stacked = a.vstack(b);
        let ker = stacked.left_kernel();
        let mut rows = FqMatrix::zeros(a.q(), ker.rows(), a.cols());
        for r in 0..ker.rows() {
            let xa = ker.submatrix(&[r], &(0..a.rows()).collect::<Vec<_>>()).mul(a);
            for c in 0..a.cols() {
                rows.set(r, c, xa.get(0, c));
            }
        }
        canonical(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_row_reduce() {
        let m = FqMatrix::identity(5, 3);
        let e = m.row_reduce();
        assert_eq!(e.rank, 3);
        assert!(e.rref.is_identity());
    }

    #[test]
    fn zero_matrix_rank() {
        let m = FqMatrix::zeros(2, 2, 4);
        assert_eq!(m.row_reduce().rank, 0);
    }

    #[test]
    fn ones_over_f2() {
        // hand elimination: row2 - row1 = 0, single pivot in column 0
        let m = FqMatrix::from_rows(2, &[vec![1, 1], vec![1, 1]]);
        let e = m.row_reduce();
        assert_eq!(e.rank, 1);
        assert_eq!(e.pivots, vec![0]);
        assert_eq!(e.transform.mul(&m), e.rref);
    }

    #[test]
    fn solve_identity() {
        let a = FqMatrix::identity(7, 3);
        let b = vec![
            FieldElem::new(2, 7),
            FieldElem::new(5, 7),
            FieldElem::new(0, 7),
        ];
        assert_eq!(a.solve(&b).unwrap(), b);
    }

    #[test]
    fn solve_inconsistent() {
        let a = FqMatrix::zeros(3, 1, 1);
        assert!(a.solve(&[FieldElem::new(1, 3)]).is_none());
    }

    #[test]
    fn solve_two_inverse_mod_three() {
        // 2 * 2 = 4 = 1 mod 3
        let a = FqMatrix::from_rows(3, &[vec![2]]);
        let x = a.solve(&[FieldElem::new(1, 3)]).unwrap();
        assert_eq!(x, vec![FieldElem::new(2, 3)]);
    }

    #[test]
    fn nullspace_identity_empty() {
        assert_eq!(FqMatrix::identity(3, 4).right_kernel().rows(), 0);
    }

    #[test]
    fn nullspace_zero_full() {
        assert_eq!(FqMatrix::zeros(5, 3, 3).right_kernel().rows(), 3);
    }

    #[test]
    fn nullspace_sum_over_f2() {
        // kernel of [1 1] over F_2 is spanned by (1,1); oracle: enumerate all
        // four vectors and keep those annihilated.
        let a = FqMatrix::from_rows(2, &[vec![1, 1]]);
        let mut expected = Vec::new();
        for x in 0..2i64 {
            for y in 0..2i64 {
                if (x + y) % 2 == 0 && (x, y) != (0, 0) {
                    expected.push((x, y));
                }
            }
        }
        assert_eq!(expected, vec![(1, 1)]);
        let k = a.right_kernel();
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0), &[1, 1]);
    }

    #[test]
    fn subspace_intersection_planes() {
        let a = FqMatrix::from_rows(3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = FqMatrix::from_rows(3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let i = subspace::intersection(&a, &b);
        assert_eq!(i.rows(), 1);
        assert_eq!(i.row(0), &[0, 1, 0]);
    }

    fn arb_matrix() -> impl Strategy<Value = FqMatrix> {
        (prop_oneof![Just(2u32), Just(3u32), Just(5u32)], 1usize..5, 1usize..5).prop_flat_map(
            |(q, r, c)| {
                proptest::collection::vec(0i64..q as i64, r * c).prop_map(move |vals| {
                    let mut m = FqMatrix::zeros(q, r, c);
                    for (i, v) in vals.into_iter().enumerate() {
                        m.set_i64(i / c, i % c, v);
                    }
                    m
                })
            },
        )
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let e = m.row_reduce();
            let k = m.right_kernel();
            prop_assert_eq!(e.rank + k.rows(), m.cols());
        }

        #[test]
        fn row_reduce_idempotent(m in arb_matrix()) {
            let r1 = m.row_reduce().rref;
            let r2 = r1.row_reduce().rref;
            prop_assert_eq!(r1, r2);
        }

        #[test]
        fn transform_invertible(m in arb_matrix()) {
            let e = m.row_reduce();
            prop_assert!(e.transform.inverse().is_some());
            prop_assert_eq!(e.transform.mul(&m), e.rref);
        }

        #[test]
        fn solve_left_consistency(m in arb_matrix()) {
            // any combination of rows of m is solvable
            let c = FqMatrix::from_fn(m.q(), 1, m.rows(), |_, j| (j % m.q() as usize) as i64);
            let rhs = c.mul(&m);
            let x = m.solve_left(&rhs).expect("consistent system");
            prop_assert_eq!(x.mul(&m), rhs);
        }
    }
}
