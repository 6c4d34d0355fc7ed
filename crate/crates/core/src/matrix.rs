//! Dense exact matrices over a [`FieldSpec`].
//!
//! Storage is specialised per field family (`BigRational` or raw residues); the
//! elimination kernels are written once against the private [`Arith`] trait.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{inv_mod, FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Entries {
    Rat(Vec<BigRational>),
    Mod { p: u64, v: Vec<u64> },
}

trait Arith {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E {
        self.sub(&self.zero(), a)
    }
    /// `dst -= f * src`, elementwise.
    fn sub_scaled(&self, dst: &mut [Self::E], f: &Self::E, src: &[Self::E]) {
        for (d, s) in dst.iter_mut().zip(src) {
            if !self.is_zero(s) {
                *d = self.sub(d, &self.mul(f, s));
            }
        }
    }
    fn scale_in_place(&self, dst: &mut [Self::E], f: &Self::E) {
        for d in dst.iter_mut() {
            *d = self.mul(d, f);
        }
    }
    fn wrap(&self, v: Vec<Self::E>) -> Entries;
}

struct RatArith;
struct ModArith(u64);

impl Arith for RatArith {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn wrap(&self, v: Vec<BigRational>) -> Entries {
        Entries::Rat(v)
    }
}

impl Arith for ModArith {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
    fn sub_scaled(&self, dst: &mut [u64], f: &u64, src: &[u64]) {
        let p = self.0;
        let g = (p - f % p) % p;
        if g == 0 {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            *d = (*d + g * s) % p;
        }
    }
    fn wrap(&self, v: Vec<u64>) -> Entries {
        Entries::Mod { p: self.0, v }
    }
}

macro_rules! with_arith {
    ($entries:expr, |$ar:ident, $d:ident| $body:expr) => {
        match $entries {
            Entries::Rat($d) => {
                let $ar = RatArith;
                $body
            }
            Entries::Mod { p, v: $d } => {
                let $ar = ModArith(*p);
                $body
            }
        }
    };
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref_kernel<A: Arith>(ar: &A, d: &mut [A::E], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !ar.is_zero(&d[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                d.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = ar.inv(&d[r * cols + c]);
        ar.scale_in_place(&mut d[r * cols..(r + 1) * cols], &inv);
        let pivot_row: Vec<A::E> = d[r * cols..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = d[i * cols + c].clone();
            if !ar.is_zero(&f) {
                ar.sub_scaled(&mut d[i * cols..(i + 1) * cols], &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn matmul_kernel<A: Arith>(ar: &A, a: &[A::E], b: &[A::E], n: usize, k: usize, m: usize) -> Vec<A::E> {
    let mut out = vec![ar.zero(); n * m];
    for i in 0..n {
        for l in 0..k {
            let x = &a[i * k + l];
            if ar.is_zero(x) {
                continue;
            }
            let neg = ar.neg(x);
            ar.sub_scaled(&mut out[i * m..(i + 1) * m], &neg, &b[l * m..(l + 1) * m]);
        }
    }
    out
}

fn det_kernel<A: Arith>(ar: &A, mut d: Vec<A::E>, n: usize) -> A::E {
    let mut det = ar.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !ar.is_zero(&d[i * n + c])) else {
            return ar.zero();
        };
        if pr != c {
            for j in 0..n {
                d.swap(pr * n + j, c * n + j);
            }
            det = ar.neg(&det);
        }
        let piv = d[c * n + c].clone();
        det = ar.mul(&det, &piv);
        let inv = ar.inv(&piv);
        let row: Vec<A::E> = d[c * n..(c + 1) * n].to_vec();
        for i in c + 1..n {
            let f = ar.mul(&d[i * n + c], &inv);
            if !ar.is_zero(&f) {
                ar.sub_scaled(&mut d[i * n..(i + 1) * n], &f, &row);
            }
        }
    }
    det
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Entries,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}[", self.field(), self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        let entries = match field {
            FieldSpec::Rationals => Entries::Rat(vec![BigRational::zero(); rows * cols]),
            FieldSpec::PrimeField { p } => Entries::Mod { p, v: vec![0; rows * cols] },
        };
        Matrix { rows, cols, entries }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        let one = field.one();
        for i in 0..n {
            m.set(i, i, &one);
        }
        m
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                m.set(i, j, &x);
            }
        }
        m
    }

    /// Row-major integer entries, reduced into the field.
    pub fn from_ints(field: FieldSpec, rows: usize, cols: usize, data: &[i64]) -> Matrix {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Matrix::from_fn(field, rows, cols, |i, j| field.int(data[i * cols + j]))
    }

    pub fn from_rows(field: FieldSpec, rows: &[Vec<Scalar>], cols: usize) -> Result<Matrix> {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, x) in row.iter().enumerate() {
                if x.field() != field {
                    return Err(Error::FieldMismatch(x.field(), field));
                }
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn column_vector(field: FieldSpec, xs: &[Scalar]) -> Matrix {
        Matrix::from_fn(field, xs.len(), 1, |i, _| xs[i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn field(&self) -> FieldSpec {
        match &self.entries {
            Entries::Rat(_) => FieldSpec::Rationals,
            Entries::Mod { p, .. } => FieldSpec::PrimeField { p: *p },
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        let k = i * self.cols + j;
        match &self.entries {
            Entries::Rat(d) => Scalar::Rat(d[k].clone()),
            Entries::Mod { p, v } => Scalar::Mod { v: v[k], p: *p },
        }
    }

    pub fn set(&mut self, i: usize, j: usize, x: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        let k = i * self.cols + j;
        match (&mut self.entries, x) {
            (Entries::Rat(d), Scalar::Rat(r)) => d[k] = r.clone(),
            (Entries::Mod { p, v }, Scalar::Mod { v: x, p: q }) if p == q => v[k] = *x,
            _ => panic!("mixed-field assignment"),
        }
    }

    pub fn is_zero(&self) -> bool {
        with_arith!(&self.entries, |ar, d| d.iter().all(|x| ar.is_zero(x)))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.field(), self.rows)
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field(), other.field()));
        }
        Ok(())
    }

    pub fn transpose(&self) -> Matrix {
        let (r, c) = (self.rows, self.cols);
        let entries = with_arith!(&self.entries, |ar, d| {
            let mut out = Vec::with_capacity(r * c);
            for j in 0..c {
                for i in 0..r {
                    out.push(d[i * c + j].clone());
                }
            }
            ar.wrap(out)
        });
        Matrix { rows: c, cols: r, entries }
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let entries = match (&self.entries, &other.entries) {
            (Entries::Rat(a), Entries::Rat(b)) => RatArith.wrap(matmul_kernel(&RatArith, a, b, n, k, m)),
            (Entries::Mod { p, v: a }, Entries::Mod { v: b, .. }) => {
                let ar = ModArith(*p);
                ar.wrap(matmul_kernel(&ar, a, b, n, k, m))
            }
            _ => unreachable!(),
        };
        Ok(Matrix { rows: n, cols: m, entries })
    }

    fn zip_with(&self, other: &Matrix, sub: bool) -> Result<Matrix> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!("shapes {:?} and {:?} differ", self.shape(), other.shape())));
        }
        let entries = match (&self.entries, &other.entries) {
            (Entries::Rat(a), Entries::Rat(b)) => Entries::Rat(
                a.iter().zip(b).map(|(x, y)| if sub { x - y } else { x + y }).collect(),
            ),
            (Entries::Mod { p, v: a }, Entries::Mod { v: b, .. }) => Entries::Mod {
                p: *p,
                v: a.iter().zip(b).map(|(x, y)| if sub { (x + p - y) % p } else { (x + y) % p }).collect(),
            },
            _ => unreachable!(),
        };
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, false)
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, true)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut m = self.clone();
        match (&mut m.entries, s) {
            (Entries::Rat(d), Scalar::Rat(r)) => d.iter_mut().for_each(|x| *x = &*x * r),
            (Entries::Mod { p, v }, Scalar::Mod { v: x, p: q }) if p == q => {
                v.iter_mut().for_each(|y| *y = *y * x % *p)
            }
            _ => panic!("mixed-field scaling"),
        }
        m
    }

    pub fn pow(&self, e: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.field(), self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows as u32).is_zero()
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        let mut t = self.field().zero();
        for i in 0..self.rows {
            t = t + self.get(i, i);
        }
        t
    }

    /// Reduced row echelon form together with the rank.
    pub fn rref(&self) -> (Matrix, usize) {
        let (m, piv) = self.rref_pivots();
        (m, piv.len())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let (r, c) = (m.rows, m.cols);
        let piv = with_arith!(&mut m.entries, |ar, d| rref_kernel(&ar, d, r, c));
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Columns form a basis of the null space, one per free column in order.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, piv) = self.rref_pivots();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
        let field = self.field();
        let mut k = Matrix::zeros(field, n, free.len());
        for (a, &f) in free.iter().enumerate() {
            k.set(f, a, &field.one());
            for (i, &p) in piv.iter().enumerate() {
                let x = r.get(i, f);
                if !x.is_zero() {
                    k.set(p, a, &-x);
                }
            }
        }
        k
    }

    /// Some `x` with `self * x = b`, or `None` when `b` is outside the column span.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        self.check_field(b)?;
        if b.rows != self.rows {
            return Err(Error::Dimension(format!("solve: {} rows vs rhs {}", self.rows, b.rows)));
        }
        let aug = Matrix::hstack(&[self, b])?;
        let (r, piv) = aug.rref_pivots();
        if piv.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let field = self.field();
        let mut x = Matrix::zeros(field, self.cols, b.cols);
        for (i, &p) in piv.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, &r.get(i, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::hstack(&[self, &Matrix::identity(self.field(), n)]).ok()?;
        let (r, piv) = aug.rref_pivots();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        Some(r.submatrix(0, n, n, 2 * n))
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        match &self.entries {
            Entries::Rat(d) => Scalar::Rat(det_kernel(&RatArith, d.clone(), n)),
            Entries::Mod { p, v } => Scalar::Mod { v: det_kernel(&ModArith(*p), v.clone(), n), p: *p },
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Kronecker product: `(a ⊗ b)(v ⊗ w) = (a v) ⊗ (b w)`, with `v`-major indexing.
    pub fn tensor(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field(), other.field(), "mixed-field tensor product");
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Matrix::zeros(self.field(), r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * r2 + k, j * c2 + l, &(&a * &b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Assembles a grid of blocks. Every row of the grid must share heights and
    /// every column widths.
    pub fn block(grid: &[Vec<Matrix>]) -> Result<Matrix> {
        let Some(first) = grid.first().and_then(|r| r.first()) else {
            return Err(Error::Dimension("empty block grid".into()));
        };
        let field = first.field();
        let ncols = grid[0].len();
        let heights: Vec<usize> = grid.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        for (i, row) in grid.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Dimension(format!("block row {i} has {} blocks, expected {ncols}", row.len())));
            }
            for (j, b) in row.iter().enumerate() {
                if b.field() != field {
                    return Err(Error::FieldMismatch(b.field(), field));
                }
                if b.rows != heights[i] || b.cols != widths[j] {
                    return Err(Error::Dimension(format!(
                        "block ({i},{j}) is {}x{}, expected {}x{}",
                        b.rows, b.cols, heights[i], widths[j]
                    )));
                }
            }
        }
        let mut out = Matrix::zeros(field, heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (i, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (j, b) in row.iter().enumerate() {
                out.set_block(r0, c0, b);
                c0 += widths[j];
            }
            r0 += heights[i];
        }
        Ok(out)
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let field = blocks.first().map(|b| b.field()).expect("block_diag of nothing");
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        match (&mut self.entries, &b.entries) {
            (Entries::Rat(d), Entries::Rat(s)) => {
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        d[(r0 + i) * self.cols + c0 + j] = s[i * b.cols + j].clone();
                    }
                }
            }
            (Entries::Mod { v: d, p }, Entries::Mod { v: s, p: q }) if p == q => {
                for i in 0..b.rows {
                    d[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + b.cols]
                        .copy_from_slice(&s[i * b.cols..(i + 1) * b.cols]);
                }
            }
            _ => panic!("mixed-field block assignment"),
        }
    }

    pub fn hstack(parts: &[&Matrix]) -> Result<Matrix> {
        let row: Vec<Matrix> = parts.iter().map(|m| (*m).clone()).collect();
        if row.is_empty() {
            return Err(Error::Dimension("empty hstack".into()));
        }
        Matrix::block(&[row])
    }

    pub fn vstack(parts: &[&Matrix]) -> Result<Matrix> {
        let grid: Vec<Vec<Matrix>> = parts.iter().map(|m| vec![(*m).clone()]).collect();
        if grid.is_empty() {
            return Err(Error::Dimension("empty vstack".into()));
        }
        Matrix::block(&grid)
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        Matrix::from_fn(self.field(), r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field(), self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(self.field(), rows.len(), self.cols, |i, j| self.get(rows[i], j))
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.select_cols(&[j])
    }

    /// Canonical basis of the column space: columns are the transposed nonzero
    /// rows of `rref(selfᵀ)`.
    pub fn col_space(&self) -> Matrix {
        let (r, rank) = self.transpose().rref();
        r.submatrix(0, rank, 0, self.rows).transpose()
    }

    /// A basis of the column space made of original columns (pivot columns).
    pub fn image_basis(&self) -> Matrix {
        let (_, piv) = self.rref_pivots();
        self.select_cols(&piv)
    }

    /// Whether every column of `v` lies in the column span of `self`.
    pub fn spans(&self, v: &Matrix) -> bool {
        if v.cols == 0 {
            return true;
        }
        if self.cols == 0 {
            return v.is_zero();
        }
        self.rank() == Matrix::hstack(&[self, v]).expect("shapes").rank()
    }

    /// Vectorises column-major into a single column.
    pub fn vec_cols(&self) -> Matrix {
        Matrix::from_fn(self.field(), self.rows * self.cols, 1, |k, _| self.get(k % self.rows, k / self.rows))
    }

    /// Vectorises row-major into a single column.
    pub fn vec_rows(&self) -> Matrix {
        Matrix::from_fn(self.field(), self.rows * self.cols, 1, |k, _| self.get(k / self.cols, k % self.cols))
    }

    /// Inverse of [`Matrix::vec_rows`].
    pub fn unvec_rows(v: &Matrix, rows: usize, cols: usize) -> Matrix {
        assert_eq!(v.rows, rows * cols);
        Matrix::from_fn(v.field(), rows, cols, |i, j| v.get(i * cols + j, 0))
    }

    /// Entries as decimal/fraction strings, row-major.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect()
    }

    pub fn from_string_rows(field: FieldSpec, rows: usize, cols: usize, data: &[Vec<String>]) -> Result<Matrix> {
        if data.len() != rows {
            return Err(Error::Dimension(format!("expected {rows} rows, found {}", data.len())));
        }
        let parsed: Vec<Vec<Scalar>> = data
            .iter()
            .map(|r| r.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Matrix::from_rows(field, &parsed, cols)
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&self.field().int(-1))
    }
}

/// Serializes as row-major entry strings.
impl serde::Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&self.to_string_rows(), s)
    }
}

/// Quotient of `k^n` by a column subspace, with an explicit complement made of
/// standard basis vectors.
#[derive(Clone, Debug)]
pub struct Quotient {
    ambient: usize,
    projection: Matrix,
    section: Matrix,
}

impl Quotient {
    /// `sub` spans the subspace (columns). Columns of the ambient space listed
    /// in `priority` are eliminated first, so the complement avoids them when
    /// possible.
    pub fn new(field: FieldSpec, ambient: usize, sub: &Matrix, priority: &[usize]) -> Quotient {
        assert_eq!(sub.rows(), ambient, "subspace lives in the wrong ambient space");
        let mut order: Vec<usize> = priority.to_vec();
        for c in 0..ambient {
            if !priority.contains(&c) {
                order.push(c);
            }
        }
        let permuted = sub.transpose().select_cols(&order);
        let (r, piv) = permuted.rref_pivots();
        let pivots: Vec<usize> = piv.iter().map(|&c| order[c]).collect();
        let mut free: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        free.sort_unstable();
        // un-permute the reduced rows
        let mut inv = vec![0; ambient];
        for (pos, &c) in order.iter().enumerate() {
            inv[c] = pos;
        }
        let q = free.len();
        let mut projection = Matrix::zeros(field, q, ambient);
        let mut section = Matrix::zeros(field, ambient, q);
        for (a, &f) in free.iter().enumerate() {
            projection.set(a, f, &field.one());
            section.set(f, a, &field.one());
            for (i, &p) in pivots.iter().enumerate() {
                let x = r.get(i, inv[f]);
                if !x.is_zero() {
                    projection.set(a, p, &-x);
                }
            }
        }
        Quotient { ambient, projection, section }
    }

    pub fn dim(&self) -> usize {
        self.projection.rows()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// `dim × ambient`; kills the subspace, identity on the complement.
    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    /// `ambient × dim`; lifts quotient coordinates to the chosen complement.
    pub fn section(&self) -> &Matrix {
        &self.section
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn rref_examples() {
        let z = Matrix::zeros(q(), 2, 2);
        assert_eq!(z.rref(), (z.clone(), 0));
        let i3 = Matrix::identity(q(), 3);
        assert_eq!(i3.rref(), (i3.clone(), 3));
        let m = Matrix::from_ints(q(), 2, 2, &[1, 2, 2, 4]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(q(), 3).kernel_basis().cols(), 0);
        assert_eq!(Matrix::zeros(q(), 3, 3).kernel_basis().cols(), 3);
        let m = Matrix::from_ints(f(2), 1, 2, &[1, 1]);
        let k = m.kernel_basis();
        assert_eq!(k, Matrix::from_ints(f(2), 2, 1, &[1, 1]));
        assert!((&m * &k).is_zero());
    }

    #[test]
    fn solve_examples() {
        let b = Matrix::from_ints(q(), 3, 1, &[1, -2, 5]);
        assert_eq!(Matrix::identity(q(), 3).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(Matrix::zeros(q(), 3, 3).solve(&b).unwrap(), None);
        let x = Matrix::from_ints(q(), 1, 1, &[2]).solve(&Matrix::from_ints(q(), 1, 1, &[1])).unwrap().unwrap();
        assert_eq!(x.get(0, 0).to_string(), "1/2");
        assert!(Matrix::identity(q(), 2).solve(&b).is_err());
    }

    #[test]
    fn tensor_examples() {
        let i2 = Matrix::identity(q(), 2);
        let i3 = Matrix::identity(q(), 3);
        assert_eq!(i2.tensor(&i3), Matrix::identity(q(), 6));
        let a = Matrix::from_ints(q(), 2, 3, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(a.tensor(&Matrix::identity(q(), 1)), a);
    }

    #[test]
    fn block_examples() {
        let a = Matrix::from_ints(q(), 2, 2, &[1, 2, 2, 4]);
        assert_eq!(Matrix::block(&[vec![a.clone()]]).unwrap(), a);
        let b = Matrix::identity(q(), 3);
        let d = Matrix::block_diag(&[&a, &b]);
        assert_eq!(d.rank(), a.rank() + b.rank());
        let bad = Matrix::block(&[vec![a.clone(), b.clone()]]);
        assert!(bad.is_err());
    }

    #[test]
    fn mixed_field_errors() {
        let a = Matrix::identity(q(), 2);
        let b = Matrix::identity(f(5), 2);
        assert!(matches!(a.try_mul(&b), Err(Error::FieldMismatch(..))));
        assert!(a.solve(&b).is_err());
    }

    #[test]
    fn inverse_and_det() {
        let a = Matrix::from_ints(q(), 2, 2, &[2, 1, 1, 1]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert_eq!(a.det(), q().int(1));
        assert!(Matrix::from_ints(f(3), 2, 2, &[1, 2, 2, 1]).inverse().is_none());
        assert_eq!(Matrix::from_ints(f(7), 3, 3, &[0, 1, 0, 0, 0, 1, 1, 0, 0]).det(), f(7).int(1));
    }

    #[test]
    fn quotient_kills_subspace() {
        let fld = f(5);
        let sub = Matrix::from_ints(fld, 3, 1, &[1, 2, 3]);
        let qt = Quotient::new(fld, 3, &sub, &[2]);
        assert_eq!(qt.dim(), 2);
        assert!((qt.projection() * &sub).is_zero());
        assert!((qt.projection() * qt.section()).is_identity());
        // priority column 2 is the pivot, so the complement uses coordinates 0 and 1
        assert!(qt.section().get(2, 0).is_zero() && qt.section().get(2, 1).is_zero());
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5, prop_oneof![Just(0u64), Just(2), Just(7)]).prop_flat_map(|(r, c, p)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |d| {
                let fld = if p == 0 { FieldSpec::Rationals } else { FieldSpec::prime(p).unwrap() };
                Matrix::from_ints(fld, r, c, &d)
            })
        })
    }

    proptest! {
        #[test]
        fn rref_idempotent_and_rank_transpose(m in arb_matrix()) {
            let (r, rank) = m.rref();
            prop_assert_eq!(r.rref(), (r.clone(), rank));
            prop_assert_eq!(rank, m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert!((&m * &k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn tensor_rank_multiplies(a in arb_matrix(), b in arb_matrix()) {
            prop_assume!(a.field() == b.field());
            prop_assert_eq!(a.tensor(&b).rank(), a.rank() * b.rank());
        }

        #[test]
        fn solve_is_exact(m in arb_matrix()) {
            let x = Matrix::from_fn(m.field(), m.cols(), 1, |i, _| m.field().int(i as i64 + 1));
            let b = &m * &x;
            let y = m.solve(&b).unwrap().expect("b is in the span");
            prop_assert_eq!(&m * &y, b);
        }
    }
}
