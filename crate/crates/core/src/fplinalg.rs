//! Exact linear algebra over the prime field F_p.
//!
//! Matrices are dense and row-major with entries stored as residues in
//! `[0, p)`. Subspaces are kept in a canonical form (the nonzero rows of
//! their reduced row-echelon basis), so two subspaces are equal exactly when
//! their stored bases are equal.

use std::fmt;

use thiserror::Error;

/// Largest modulus supported; products of two residues must fit in `u32`.
pub const MAX_PRIME: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
    #[error("{0} is not a prime below 65536")]
    BadPrime(u32),
    #[error("entry {value} at ({row}, {col}) is not reduced mod {p}")]
    UnreducedEntry {
        row: usize,
        col: usize,
        value: u32,
        p: u32,
    },
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(p: u32) -> Result<(), LinalgError> {
    if p < MAX_PRIME && is_prime(p) {
        Ok(())
    } else {
        Err(LinalgError::BadPrime(p))
    }
}

/// Multiplicative inverse of a nonzero residue.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(mut base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// `dst -= factor * src`, entrywise mod p, starting at column `from`.
#[inline]
fn axpy_neg(dst: &mut [u32], src: &[u32], factor: u32, p: u32, from: usize) {
    if factor == 0 {
        return;
    }
    if p == 2 {
        for (d, s) in dst[from..].iter_mut().zip(&src[from..]) {
            *d ^= *s;
        }
        return;
    }
    let neg = p - factor;
    for (d, s) in dst[from..].iter_mut().zip(&src[from..]) {
        if *s != 0 {
            *d = (*d + neg * *s) % p;
        }
    }
}

#[inline]
fn scale_in_place(row: &mut [u32], factor: u32, p: u32) {
    if factor == 1 {
        return;
    }
    for x in row.iter_mut() {
        *x = *x * factor % p;
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn new(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self, LinalgError> {
        check_prime(p)?;
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|&v| v >= p) {
            return Err(LinalgError::UnreducedEntry {
                row: i / cols.max(1),
                col: i % cols.max(1),
                value: data[i],
                p,
            });
        }
        Ok(FpMatrix { p, rows, cols, data })
    }

    /// Builds a matrix from rows, reducing every entry mod p.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Result<Self, LinalgError> {
        check_prime(p)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().map(|v| v % p));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub(crate) fn from_raw(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&v| v < p));
        FpMatrix { p, rows, cols, data }
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix, LinalgError> {
        if self.p != other.p {
            return Err(LinalgError::PrimeMismatch(self.p, other.p));
        }
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let p = self.p as u64;
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (c, a) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = *a as u32;
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p) as u32
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }
}

/// Reduced row-echelon form with its pivot columns. Zero rows are dropped
/// from the returned matrix, so its row count equals the rank.
pub fn rref(m: &FpMatrix) -> (FpMatrix, Vec<usize>) {
    let p = m.p;
    let cols = m.cols;
    let mut rows: Vec<Vec<u32>> = m.row_vecs();
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(next, found);
        let inv = inv_mod(rows[next][c], p);
        scale_in_place(&mut rows[next][c..], inv, p);
        let pivot_row = std::mem::take(&mut rows[next]);
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next {
                let f = row[c];
                axpy_neg(row, &pivot_row, f, p, c);
            }
        }
        rows[next] = pivot_row;
        pivots.push(c);
        next += 1;
    }
    rows.truncate(next);
    let data = rows.into_iter().flatten().collect();
    (FpMatrix::from_raw(p, next, cols, data), pivots)
}

/// Basis of `{v : m v = 0}` in canonical form.
pub fn kernel_basis(m: &FpMatrix) -> Subspace {
    let (r, pivots) = rref(m);
    let p = m.p;
    let n = m.cols;
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut vecs = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; n];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            let e = r.get(i, free);
            if e != 0 {
                v[pc] = p - e;
            }
        }
        vecs.push(v);
    }
    Subspace::from_vectors(p, n, vecs).expect("kernel vectors have ambient length")
}

/// A subspace of F_p^n stored by its canonical reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(p={}, ambient={}, basis={:?})",
            self.basis.p,
            self.basis.cols,
            self.basis.row_vecs()
        )
    }
}

impl Subspace {
    pub fn zero(p: u32, ambient_dim: usize) -> Self {
        Subspace {
            basis: FpMatrix::zeros(p, 0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u32, ambient_dim: usize) -> Self {
        Subspace {
            basis: FpMatrix::identity(p, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn from_vectors(
        p: u32,
        ambient_dim: usize,
        vectors: Vec<Vec<u32>>,
    ) -> Result<Self, LinalgError> {
        let m = FpMatrix::from_rows(p, ambient_dim, &vectors)?;
        Ok(Self::row_space(&m))
    }

    pub fn row_space(m: &FpMatrix) -> Self {
        let (basis, pivots) = rref(m);
        Subspace { basis, pivots }
    }

    pub fn p(&self) -> u32 {
        self.basis.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u32>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the canonical basis; the result is zero exactly
    /// when `v` lies in the subspace.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.ambient_dim());
        let mut out = v.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            let f = out[c];
            axpy_neg(&mut out, self.basis.row(i), f, self.p(), 0);
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    /// Sum of two subspaces.
    pub fn join(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        check_compatible(self, other)?;
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Subspace::from_vectors(self.p(), self.ambient_dim(), rows)
    }
}

fn check_compatible(a: &Subspace, b: &Subspace) -> Result<(), LinalgError> {
    if a.p() != b.p() {
        return Err(LinalgError::PrimeMismatch(a.p(), b.p()));
    }
    if a.ambient_dim() != b.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.ambient_dim(),
            got: b.ambient_dim(),
        });
    }
    Ok(())
}

fn intersect_pair(a: &Subspace, b: &Subspace) -> Subspace {
    let p = a.p();
    let n = a.ambient_dim();
    let (r, s) = (a.dim(), b.dim());
    if r == 0 || s == 0 {
        return Subspace::zero(p, n);
    }
    // Columns [a_1 .. a_r | -b_1 .. -b_s]; a kernel vector (l, m) gives the
    // common element sum l_i a_i.
    let mut sys = FpMatrix::zeros(p, n, r + s);
    for i in 0..r {
        for (c, &v) in a.basis.row(i).iter().enumerate() {
            sys.data[c * (r + s) + i] = v;
        }
    }
    for j in 0..s {
        for (c, &v) in b.basis.row(j).iter().enumerate() {
            sys.data[c * (r + s) + r + j] = (p - v) % p;
        }
    }
    let ker = kernel_basis(&sys);
    let mut common = Vec::with_capacity(ker.dim());
    for k in 0..ker.dim() {
        let coeffs = &ker.basis.row(k)[..r];
        let mut v = vec![0u32; n];
        for (i, &l) in coeffs.iter().enumerate() {
            if l != 0 {
                axpy_neg(&mut v, a.basis.row(i), p - l, p, 0);
            }
        }
        common.push(v);
    }
    Subspace::from_vectors(p, n, common).expect("same ambient")
}

/// Intersection of a list of subspaces of F_p^n. The empty list yields the
/// whole space.
pub fn intersect_subspaces(
    p: u32,
    ambient_dim: usize,
    spaces: &[Subspace],
) -> Result<Subspace, LinalgError> {
    let mut acc = Subspace::full(p, ambient_dim);
    for s in spaces {
        check_compatible(&acc, s)?;
        acc = intersect_pair(&acc, s);
    }
    Ok(acc)
}

pub fn subspaces_equal(a: &Subspace, b: &Subspace) -> Result<bool, LinalgError> {
    check_compatible(a, b)?;
    Ok(a.basis == b.basis)
}

/// Incrementally built semi-echelon basis. Each inserted row is reduced
/// against the earlier rows, so reducing a vector against rows in insertion
/// order clears every pivot.
#[derive(Debug, Clone)]
pub struct EchelonBuilder {
    p: u32,
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl EchelonBuilder {
    pub fn new(p: u32, cols: usize) -> Self {
        EchelonBuilder {
            p,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut [u32]) {
        debug_assert_eq!(v.len(), self.cols);
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            axpy_neg(v, row, f, self.p, 0);
        }
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        self.reduce(&mut v);
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(c) => {
                let inv = inv_mod(v[c], self.p);
                scale_in_place(&mut v, inv, self.p);
                self.rows.push(v);
                self.pivots.push(c);
                true
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace::from_vectors(self.p, self.cols, self.rows).expect("rows have builder width")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn m(p: u32, rows: &[&[u32]]) -> FpMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        FpMatrix::from_rows(p, cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn span(p: u32, n: usize, vs: &[&[u32]]) -> Subspace {
        Subspace::from_vectors(p, n, vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rref_examples() {
        let (r, piv) = rref(&m(2, &[&[1, 1], &[1, 1]]));
        assert_eq!(r.row_vecs(), vec![vec![1, 1]]);
        assert_eq!(piv, vec![0]);

        let (r, piv) = rref(&m(3, &[&[2, 1]]));
        assert_eq!(r.row_vecs(), vec![vec![1, 2]]);
        assert_eq!(piv, vec![0]);

        let id = FpMatrix::identity(5, 3);
        let (r, piv) = rref(&id);
        assert_eq!(r, id);
        assert_eq!(piv, vec![0, 1, 2]);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&m(2, &[&[1, 1]]));
        assert_eq!(k.basis_vectors(), vec![vec![1, 1]]);

        let k = kernel_basis(&FpMatrix::zeros(3, 2, 3));
        assert_eq!(k.dim(), 3);
        assert_eq!(k, Subspace::full(3, 3));

        let k = kernel_basis(&FpMatrix::identity(2, 2));
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn intersection_examples() {
        let a = span(2, 3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = span(2, 3, &[&[0, 1, 0], &[0, 0, 1]]);
        let i = intersect_subspaces(2, 3, &[a.clone(), b]).unwrap();
        assert_eq!(i, span(2, 3, &[&[0, 1, 0]]));

        let v = span(5, 3, &[&[1, 2, 3], &[0, 4, 1]]);
        assert_eq!(intersect_subspaces(5, 3, &[v.clone(), v.clone()]).unwrap(), v);

        let x = span(3, 2, &[&[1, 0]]);
        let y = span(3, 2, &[&[0, 1]]);
        assert_eq!(intersect_subspaces(3, 2, &[x, y]).unwrap().dim(), 0);

        assert_eq!(intersect_subspaces(7, 4, &[]).unwrap(), Subspace::full(7, 4));
    }

    #[test]
    fn intersection_dimension_error() {
        let a = Subspace::full(2, 3);
        let b = Subspace::full(2, 4);
        assert!(matches!(
            intersect_subspaces(2, 3, &[a, b]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn equality_examples() {
        assert!(subspaces_equal(&span(3, 2, &[&[1, 1]]), &span(3, 2, &[&[2, 2]])).unwrap());
        assert!(subspaces_equal(&Subspace::zero(2, 3), &Subspace::zero(2, 3)).unwrap());
        assert!(!subspaces_equal(&span(2, 2, &[&[1, 0]]), &span(2, 2, &[&[1, 1]])).unwrap());
        assert!(subspaces_equal(&Subspace::zero(2, 3), &Subspace::zero(2, 2)).is_err());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(FpMatrix::new(4, 1, 1, vec![1]), Err(LinalgError::BadPrime(4)));
        assert!(matches!(
            FpMatrix::new(3, 1, 2, vec![1, 3]),
            Err(LinalgError::UnreducedEntry { value: 3, .. })
        ));
    }

    #[test]
    fn echelon_builder_tracks_span() {
        let mut b = EchelonBuilder::new(3, 3);
        assert!(b.insert(vec![1, 2, 0]));
        assert!(b.insert(vec![0, 1, 1]));
        assert!(!b.insert(vec![2, 0, 2]));
        assert!(b.contains(&[1, 0, 1]));
        assert_eq!(b.rank(), 2);
    }

    /// Every vector of the span, by enumerating coefficient tuples.
    fn brute_span(s: &Subspace) -> HashSet<Vec<u32>> {
        let p = s.p();
        let n = s.ambient_dim();
        let basis = s.basis_vectors();
        let mut out = HashSet::new();
        let total = (p as usize).pow(basis.len() as u32);
        for mut code in 0..total {
            let mut v = vec![0u32; n];
            for b in &basis {
                let c = (code % p as usize) as u32;
                code /= p as usize;
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + c * y) % p;
                }
            }
            out.insert(v);
        }
        out
    }

    fn arb_matrix() -> impl Strategy<Value = FpMatrix> {
        (prop::sample::select(vec![2u32, 3, 5]), 0usize..6, 1usize..6).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0..p, r * c)
                .prop_map(move |data| FpMatrix::new(p, r, c, data).unwrap())
        })
    }

    fn arb_subspace_pair() -> impl Strategy<Value = (Subspace, Subspace, Subspace)> {
        (prop::sample::select(vec![2u32, 3]), 1usize..5).prop_flat_map(|(p, n)| {
            let vecs = prop::collection::vec(prop::collection::vec(0..p, n), 0..4);
            (vecs.clone(), vecs.clone(), vecs).prop_map(move |(a, b, c)| {
                (
                    Subspace::from_vectors(p, n, a).unwrap(),
                    Subspace::from_vectors(p, n, b).unwrap(),
                    Subspace::from_vectors(p, n, c).unwrap(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(mat in arb_matrix()) {
            let (r1, p1) = rref(&mat);
            let (r2, p2) = rref(&r1);
            prop_assert_eq!(r1, r2);
            prop_assert_eq!(p1, p2);
        }

        #[test]
        fn rank_nullity(mat in arb_matrix()) {
            let k = kernel_basis(&mat);
            prop_assert_eq!(mat.rank() + k.dim(), mat.cols());
            for v in k.basis_vectors() {
                prop_assert!(mat.apply(&v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn intersection_matches_enumeration((a, b, c) in arb_subspace_pair()) {
            let p = a.p();
            let n = a.ambient_dim();
            let ab = intersect_subspaces(p, n, &[a.clone(), b.clone()]).unwrap();
            let expected: HashSet<_> = brute_span(&a).intersection(&brute_span(&b)).cloned().collect();
            prop_assert_eq!(brute_span(&ab), expected);
            prop_assert!(ab.dim() + n >= a.dim() + b.dim());

            let ba = intersect_subspaces(p, n, &[b.clone(), a.clone()]).unwrap();
            prop_assert_eq!(&ab, &ba);
            let left = intersect_subspaces(p, n, &[ab, c.clone()]).unwrap();
            let bc = intersect_subspaces(p, n, &[b, c]).unwrap();
            let right = intersect_subspaces(p, n, &[a, bc]).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
