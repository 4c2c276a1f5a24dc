//! Linear algebra over F_{q^m} and relative F_q-linear algebra inside
//! F_{q^m}-spaces.
//!
//! F_q-scalars are kept as elements of the subfield inside F_{q^m}, so a
//! single elimination routine serves both levels of the tower.

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{Felem, Field};

/// Dense matrix over F_{q^m}, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Felem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Felem::ZERO; rows * cols] }
    }

    pub fn identity(f: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Felem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("matrix rows have different lengths".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Felem>]) -> Result<Matrix> {
        Ok(Matrix::from_rows(cols.to_vec())?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Felem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Felem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Felem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Felem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Felem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Columns `range` as a new matrix.
    pub fn col_block(&self, range: Range<usize>) -> Matrix {
        let mut out = Matrix::zeros(self.rows, range.len());
        for i in 0..self.rows {
            for (jj, j) in range.clone().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hcat(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j));
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, f: &Field, v: &[Felem]) -> Vec<Felem> {
        vec_mat(f, v, self)
    }

    pub fn rank(&self, f: &Field) -> usize {
        let mut rows = self.to_rows();
        rref(f, &mut rows).len()
    }

    /// Reduced row-echelon form with zero rows removed.
    pub fn rref(&self, f: &Field) -> Matrix {
        let mut rows = self.to_rows();
        rref(f, &mut rows);
        let cols = self.cols;
        let mut m = Matrix::from_rows(rows).unwrap();
        m.cols = cols;
        m
    }

    /// Basis of the right kernel {x : A x = 0} over F_{q^m}.
    pub fn right_kernel(&self, f: &Field) -> Vec<Vec<Felem>> {
        nullspace(f, &self.to_rows(), self.cols)
    }

    pub fn row_space_eq(&self, f: &Field, other: &Matrix) -> bool {
        self.cols == other.cols && self.rref(f) == other.rref(f)
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut aug: Vec<Vec<Felem>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { f.one() } else { Felem::ZERO }));
                r
            })
            .collect();
        let piv = rref(f, &mut aug);
        if piv.len() != n || piv.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Matrix::from_rows(aug.into_iter().map(|r| r[n..].to_vec()).collect()).ok()
    }
}

pub fn vec_mat(f: &Field, v: &[Felem], m: &Matrix) -> Vec<Felem> {
    assert_eq!(v.len(), m.rows);
    let mut out = vec![Felem::ZERO; m.cols];
    for (i, &a) in v.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let row = m.row(i);
        for (o, &b) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(a, b));
        }
    }
    out
}

pub fn dot(f: &Field, a: &[Felem], b: &[Felem]) -> Felem {
    a.iter().zip(b).fold(Felem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn scale(f: &Field, c: Felem, v: &[Felem]) -> Vec<Felem> {
    v.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn axpy(f: &Field, c: Felem, x: &[Felem], y: &mut [Felem]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = f.add(*yi, f.mul(c, xi));
    }
}

/// In-place reduced row-echelon form. Zero rows are dropped; the returned
/// vector lists pivot columns in row order. Entries may come from F_q or
/// F_{q^m}; elimination never leaves the field spanned by the input.
pub fn rref(f: &Field, rows: &mut Vec<Vec<Felem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        if inv != f.one() {
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = f.neg(row[c]);
                axpy(f, factor, &pivot_row, row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of {x : A x = 0} for A given by rows with `ncols` columns.
pub fn nullspace(f: &Field, rows: &[Vec<Felem>], ncols: usize) -> Vec<Vec<Felem>> {
    let mut r = rows.to_vec();
    let piv = rref(f, &mut r);
    let mut is_pivot = vec![false; ncols];
    for &p in &piv {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![Felem::ZERO; ncols];
        x[free] = f.one();
        for (row, &p) in r.iter().zip(&piv) {
            x[p] = f.neg(row[free]);
        }
        out.push(x);
    }
    out
}

/// Basis of the left kernel {λ : λ X = 0} of the matrix with the given rows.
pub fn left_kernel(f: &Field, rows: &[Vec<Felem>]) -> Vec<Vec<Felem>> {
    let n = rows.len();
    if n == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let t: Vec<Vec<Felem>> = (0..ncols).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    nullspace(f, &t, n)
}

// ---- F_q-rank ----------------------------------------------------------

/// dim_{F_q} of the span of the entries of `v`.
pub fn rank_q(f: &Field, v: &[Felem]) -> usize {
    if f.p() == 2 && f.e() == 1 {
        // coefficient vectors over F_2 are the packed bits themselves
        let mut basis = [0u32; 32];
        let mut rank = 0;
        for &x in v {
            let mut y = x.0;
            while y != 0 {
                let top = 31 - y.leading_zeros() as usize;
                if basis[top] == 0 {
                    basis[top] = y;
                    rank += 1;
                    break;
                }
                y ^= basis[top];
            }
        }
        return rank;
    }
    let mut rows: Vec<Vec<Felem>> = v.iter().filter(|x| !x.is_zero()).map(|&x| f.fq_coords(x)).collect();
    rref(f, &mut rows).len()
}

/// Coordinates of every entry of `x` over the F_q-basis `gamma`, one row per
/// entry (an `len(x) × m` matrix over F_q).
pub fn expand_over(f: &Field, x: &[Felem], gamma: &[Felem]) -> Result<Vec<Vec<Felem>>> {
    let m = f.m() as usize;
    if gamma.len() != m || rank_q(f, gamma) != m {
        return Err(Error::BasisNotIndependent);
    }
    // columns of B are the canonical coordinates of gamma_j; solve B c = coords(x_i)
    let b: Vec<Vec<Felem>> = gamma.iter().map(|&g| f.fq_coords(g)).collect();
    let bt = Matrix::from_cols(&b)?;
    let inv = bt.inverse(f).ok_or(Error::BasisNotIndependent)?;
    Ok(x.iter()
        .map(|&xi| {
            let c = f.fq_coords(xi);
            (0..m).map(|r| dot(f, inv.row(r), &c)).collect()
        })
        .collect())
}

/// Blockwise expansion: block r is the n_r × m coordinate matrix of x_r over
/// gamma_r.
pub fn expand_matrix(
    f: &Field,
    blocks: &[&[Felem]],
    gammas: &[Vec<Felem>],
) -> Result<Vec<Vec<Vec<Felem>>>> {
    if blocks.len() != gammas.len() {
        return Err(Error::AmbientMismatch(blocks.len(), gammas.len()));
    }
    blocks.iter().zip(gammas).map(|(x, g)| expand_over(f, x, g)).collect()
}

/// F_q-coordinates of a vector of F_{q^m}^k, concatenated (length k·m).
pub fn expand_vec(f: &Field, v: &[Felem]) -> Vec<Felem> {
    v.iter().flat_map(|&x| f.fq_coords(x)).collect()
}

pub fn from_expanded(f: &Field, c: &[Felem]) -> Vec<Felem> {
    c.chunks(f.m() as usize).map(|ch| f.from_fq_coords(ch)).collect()
}

// ---- F_q-subspaces -----------------------------------------------------

/// F_q-subspace of F_{q^m}^k stored by an F_q-independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqSubspace {
    k: usize,
    basis: Vec<Vec<Felem>>,
}

impl FqSubspace {
    /// Validates that `basis` is F_q-independent.
    pub fn new(f: &Field, k: usize, basis: Vec<Vec<Felem>>) -> Result<FqSubspace> {
        if let Some(b) = basis.iter().find(|b| b.len() != k) {
            return Err(Error::AmbientMismatch(k, b.len()));
        }
        let mut rows: Vec<Vec<Felem>> = basis.iter().map(|b| expand_vec(f, b)).collect();
        if rref(f, &mut rows).len() != basis.len() {
            return Err(Error::BasisNotIndependent);
        }
        Ok(FqSubspace { k, basis })
    }

    pub fn zero(k: usize) -> FqSubspace {
        FqSubspace { k, basis: Vec::new() }
    }

    /// F_q-span of `vectors`, keeping the first vector of each rank increase.
    pub fn span(f: &Field, k: usize, vectors: &[Vec<Felem>]) -> Result<FqSubspace> {
        let mut ech = Echelon::new(k * f.m() as usize);
        let mut basis = Vec::new();
        for v in vectors {
            if v.len() != k {
                return Err(Error::AmbientMismatch(k, v.len()));
            }
            if ech.insert(f, expand_vec(f, v)) {
                basis.push(v.clone());
            }
        }
        Ok(FqSubspace { k, basis })
    }

    /// The F_{q^m}-span of `vectors` as an F_q-subspace, basis
    /// {v, z v, …, z^{m-1} v} per independent vector.
    pub fn fqm_span(f: &Field, k: usize, vectors: &[Vec<Felem>]) -> Result<FqSubspace> {
        let zs = f.fq_basis();
        let all: Vec<Vec<Felem>> =
            vectors.iter().flat_map(|v| zs.iter().map(move |&z| scale(f, z, v))).collect();
        FqSubspace::span(f, k, &all)
    }

    pub fn ambient(&self) -> usize {
        self.k
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<Felem>] {
        &self.basis
    }

    pub fn contains(&self, f: &Field, v: &[Felem]) -> bool {
        let mut rows: Vec<Vec<Felem>> = self.basis.iter().map(|b| expand_vec(f, b)).collect();
        rows.push(expand_vec(f, v));
        rref(f, &mut rows).len() == self.basis.len()
    }

    /// Mutual containment of bases.
    pub fn same_as(&self, f: &Field, other: &FqSubspace) -> bool {
        self.k == other.k
            && self.dim() == other.dim()
            && other.basis.iter().all(|b| self.contains(f, b))
    }

    /// dim_{F_{q^m}} of the F_{q^m}-span.
    pub fn fqm_dim(&self, f: &Field) -> usize {
        if self.basis.is_empty() {
            return 0;
        }
        Matrix::from_rows(self.basis.clone()).unwrap().rank(f)
    }

    /// All q^dim elements; used by brute-force oracles only.
    pub fn elements(&self, f: &Field) -> Vec<Vec<Felem>> {
        let sub = f.subfield();
        let mut out = vec![vec![Felem::ZERO; self.k]];
        for b in &self.basis {
            let mut next = Vec::with_capacity(out.len() * sub.len());
            for v in &out {
                for &c in &sub {
                    let mut w = v.clone();
                    axpy(f, c, b, &mut w);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    /// The image u ↦ u A under a k × k matrix.
    pub fn right_mul(&self, f: &Field, a: &Matrix) -> FqSubspace {
        let basis = self.basis.iter().map(|b| vec_mat(f, b, a)).collect();
        FqSubspace { k: self.k, basis }
    }

    /// Expresses `v` in this basis (F_q coefficients), if it is a member.
    pub fn coordinates(&self, f: &Field, v: &[Felem]) -> Option<Vec<Felem>> {
        // solve λ B = v with B rows = expanded basis
        let n = self.basis.len();
        let km = self.k * f.m() as usize;
        let target = expand_vec(f, v);
        let mut rows: Vec<Vec<Felem>> = (0..km)
            .map(|j| {
                let mut r: Vec<Felem> = self.basis.iter().map(|b| f.fq_coords(b[j / f.m() as usize])[j % f.m() as usize]).collect();
                r.push(target[j]);
                r
            })
            .collect();
        let piv = rref(f, &mut rows);
        if piv.last() == Some(&n) {
            return None;
        }
        let mut lambda = vec![Felem::ZERO; n];
        for (row, &p) in rows.iter().zip(&piv) {
            lambda[p] = row[n];
        }
        Some(lambda)
    }
}

/// dim_{F_q}(U ∩ W) from the kernel of the stacked expansion system.
pub fn intersect_dim(f: &Field, u: &FqSubspace, w: &FqSubspace) -> Result<usize> {
    if u.k != w.k {
        return Err(Error::AmbientMismatch(u.k, w.k));
    }
    let rows: Vec<Vec<Felem>> =
        u.basis.iter().chain(&w.basis).map(|b| expand_vec(f, b)).collect();
    Ok(left_kernel(f, &rows).len())
}

/// Explicit basis of U ∩ W.
pub fn intersect(f: &Field, u: &FqSubspace, w: &FqSubspace) -> Result<FqSubspace> {
    if u.k != w.k {
        return Err(Error::AmbientMismatch(u.k, w.k));
    }
    let rows: Vec<Vec<Felem>> =
        u.basis.iter().chain(&w.basis).map(|b| expand_vec(f, b)).collect();
    let ker = left_kernel(f, &rows);
    let vecs: Vec<Vec<Felem>> = ker
        .iter()
        .map(|lam| {
            let mut acc = vec![Felem::ZERO; u.k];
            for (c, b) in lam.iter().zip(&u.basis) {
                axpy(f, *c, b, &mut acc);
            }
            acc
        })
        .collect();
    FqSubspace::span(f, u.k, &vecs)
}

/// Incremental echelon basis for F_q-rank tracking.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    rows: Vec<(usize, Vec<Felem>)>,
}

impl Echelon {
    pub fn new(width: usize) -> Echelon {
        Echelon { width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, f: &Field, v: &mut [Felem]) {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = f.neg(v[*p]);
                axpy(f, c, row, v);
            }
        }
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, f: &Field, mut v: Vec<Felem>) -> bool {
        assert_eq!(v.len(), self.width);
        self.reduce(f, &mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(v[p]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = f.neg(row[p]);
                axpy(f, c, &v, row);
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, f: &Field, v: &[Felem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w.iter().all(|x| x.is_zero())
    }
}

// ---- projective space --------------------------------------------------

/// Scales `v` so its first nonzero coordinate is 1. `None` for the zero vector.
pub fn normalize(f: &Field, v: &[Felem]) -> Option<Vec<Felem>> {
    let lead = v.iter().find(|x| !x.is_zero())?;
    let inv = f.inv(*lead);
    Some(scale(f, inv, v))
}

/// Number of points of PG(k−1, Q).
pub fn projective_count(qm: u64, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut pw: u128 = 1;
    for _ in 0..k {
        total += pw;
        pw *= qm as u128;
    }
    total
}

/// PG(k−1, q^m) with points indexed in lexicographic order of their
/// normalized representatives.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    k: usize,
    qm: u64,
}

impl ProjectiveSpace {
    pub fn new(f: &Field, k: usize) -> ProjectiveSpace {
        assert!(k >= 1);
        ProjectiveSpace { k, qm: f.size() as u64 }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn count(&self) -> u128 {
        projective_count(self.qm, self.k)
    }

    /// Representative of the point with index `idx`.
    pub fn point(&self, f: &Field, mut idx: u64) -> Vec<Felem> {
        // blocks by lead position: k−1 (size 1), k−2 (size Q), …
        let mut lead = self.k - 1;
        let mut block: u64 = 1;
        while idx >= block {
            idx -= block;
            block *= self.qm;
            lead -= 1;
        }
        let mut v = vec![Felem::ZERO; self.k];
        v[lead] = f.one();
        for j in (lead + 1..self.k).rev() {
            v[j] = Felem((idx % self.qm) as u32);
            idx /= self.qm;
        }
        v
    }

    /// Index of the point spanned by nonzero `v`.
    pub fn index_of(&self, f: &Field, v: &[Felem]) -> u64 {
        let n = normalize(f, v).expect("zero vector has no point");
        let lead = n.iter().position(|x| !x.is_zero()).unwrap();
        let mut base: u64 = 0;
        let mut block: u64 = 1;
        for _ in lead + 1..self.k {
            base += block;
            block *= self.qm;
        }
        let tail = n[lead + 1..].iter().fold(0u64, |acc, x| acc * self.qm + x.0 as u64);
        base + tail
    }

    /// Points in `range`, in index order.
    pub fn iter_range<'a>(&'a self, f: &'a Field, range: Range<u64>) -> impl Iterator<Item = Vec<Felem>> + 'a {
        let mut cur = (range.start < range.end).then(|| self.point(f, range.start));
        let mut remaining = range.end.saturating_sub(range.start);
        std::iter::from_fn(move || {
            if remaining == 0 {
                return None;
            }
            remaining -= 1;
            let out = cur.take()?;
            if remaining > 0 {
                cur = Some(self.successor(f, &out));
            }
            Some(out)
        })
    }

    pub fn iter<'a>(&'a self, f: &'a Field) -> impl Iterator<Item = Vec<Felem>> + 'a {
        self.iter_range(f, 0..self.count() as u64)
    }

    fn successor(&self, f: &Field, v: &[Felem]) -> Vec<Felem> {
        let mut w = v.to_vec();
        let lead = w.iter().position(|x| !x.is_zero()).unwrap();
        for j in (lead + 1..self.k).rev() {
            if (w[j].0 as u64) + 1 < self.qm {
                w[j] = Felem(w[j].0 + 1);
                return w;
            }
            w[j] = Felem::ZERO;
        }
        // tail exhausted: move the leading one left
        w[lead] = Felem::ZERO;
        w[lead - 1] = f.one();
        w
    }
}

/// Ordered enumeration of PG(k−1, q^m).
pub fn enum_projective(f: &Field, k: usize) -> Vec<Vec<Felem>> {
    let ps = ProjectiveSpace::new(f, k);
    ps.iter(f).collect()
}

/// v^⊥ under the standard bilinear form, as an F_q-subspace of dimension m(k−1).
pub fn hyperplane_of(f: &Field, v: &[Felem]) -> FqSubspace {
    let k = v.len();
    let n = normalize(f, v).expect("hyperplane of the zero vector");
    let lead = n.iter().position(|x| !x.is_zero()).unwrap();
    let mut gens = Vec::new();
    for i in (0..k).filter(|&i| i != lead) {
        let mut w = vec![Felem::ZERO; k];
        w[i] = f.one();
        w[lead] = f.neg(n[i]);
        gens.push(w);
    }
    FqSubspace::fqm_span(f, k, &gens).expect("dimensions agree")
}

// ---- parallel sweeps ---------------------------------------------------

/// Work partitioning for exhaustive sweeps. Chunking is fixed, so merged
/// results do not depend on the worker count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOpts {
    pub workers: usize,
    pub budget: u128,
}

pub const DEFAULT_BUDGET: u128 = 1 << 22;
const CHUNK: u64 = 2048;

impl Default for SweepOpts {
    fn default() -> Self {
        SweepOpts { workers: 1, budget: DEFAULT_BUDGET }
    }
}

impl SweepOpts {
    pub fn with_workers(workers: usize) -> SweepOpts {
        SweepOpts { workers: workers.max(1), ..SweepOpts::default() }
    }

    pub fn check(&self, count: u128) -> Result<()> {
        if count > self.budget {
            return Err(Error::TooLarge { count, budget: self.budget });
        }
        Ok(())
    }
}

/// Maps each chunk of `0..count` through `chunk_fn` and folds the chunk
/// results in index order with `merge`.
pub fn sweep<A, F, M>(opts: SweepOpts, count: u64, identity: A, chunk_fn: F, merge: M) -> A
where
    A: Send,
    F: Fn(Range<u64>) -> A + Sync,
    M: Fn(A, A) -> A,
{
    let ranges: Vec<Range<u64>> = (0..count.div_ceil(CHUNK))
        .map(|c| c * CHUNK..((c + 1) * CHUNK).min(count))
        .collect();
    let parts: Vec<A> = if opts.workers <= 1 || ranges.len() <= 1 {
        ranges.into_iter().map(&chunk_fn).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .expect("thread pool");
        pool.install(|| ranges.into_par_iter().map(&chunk_fn).collect())
    };
    parts.into_iter().fold(identity, merge)
}
