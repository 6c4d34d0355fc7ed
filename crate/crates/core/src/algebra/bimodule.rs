//! Bimodules and the tensor functors they induce.
//!
//! Two shapes are supported. A [`DenseBimodule`] has finite-dimensional
//! algebras on both sides and is stored by its left and right action matrices.
//! A [`FreeBimodule`] is free of finite rank over a free algebra on the right;
//! it is stored by how each left basis element (or left generator) acts on a
//! right basis, as a matrix of noncommutative polynomials.

use std::collections::BTreeMap;

use serde::Serialize;

use super::module::same_algebra;
use super::{AModule, AlgebraRef, FreeAlgModule};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{Matrix, Quotient};

/// Noncommutative polynomial in `X_0..X_{n-1}`; the word `[a, b]` is `X_a X_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcPoly {
    field: FieldSpec,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl NcPoly {
    pub fn zero(field: FieldSpec) -> NcPoly {
        NcPoly { field, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar) -> NcPoly {
        NcPoly::term(vec![], c)
    }

    pub fn var(field: FieldSpec, i: usize) -> NcPoly {
        NcPoly::term(vec![i], field.one())
    }

    pub fn term(word: Vec<usize>, c: Scalar) -> NcPoly {
        let field = c.field();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(word, c);
        }
        NcPoly { field, terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree, with `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn add(&self, o: &NcPoly) -> NcPoly {
        let mut terms = self.terms.clone();
        for (w, c) in &o.terms {
            let v = terms.get(w).map(|x| x + c).unwrap_or_else(|| c.clone());
            if v.is_zero() {
                terms.remove(w);
            } else {
                terms.insert(w.clone(), v);
            }
        }
        NcPoly { field: self.field, terms }
    }

    pub fn scale(&self, s: &Scalar) -> NcPoly {
        if s.is_zero() {
            return NcPoly::zero(self.field);
        }
        NcPoly { field: self.field, terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect() }
    }

    pub fn mul(&self, o: &NcPoly) -> NcPoly {
        let mut acc = NcPoly::zero(self.field);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend(w2);
                acc = acc.add(&NcPoly::term(w, c1 * c2));
            }
        }
        acc
    }

    /// Value on a module given by generator matrices.
    pub fn eval(&self, gens: &[Matrix], dim: usize) -> Matrix {
        let mut acc = Matrix::zeros(self.field, dim, dim);
        for (w, c) in &self.terms {
            let m = w.iter().rev().fold(Matrix::identity(self.field, dim), |acc, &l| &gens[l] * &acc);
            acc = &acc + &m.scale(c);
        }
        acc
    }

    /// Substitutes `X_s ↦ subs[s]` (square polynomial matrices of size `r`).
    pub fn substitute(&self, subs: &[PolyMatrix], r: usize) -> PolyMatrix {
        let mut acc = PolyMatrix::zeros(self.field, r, r);
        for (w, c) in &self.terms {
            let m = w.iter().fold(PolyMatrix::identity(self.field, r), |acc, &l| acc.mul(&subs[l]));
            acc = acc.add(&m.scale(c));
        }
        acc
    }
}

/// Row-major matrix of [`NcPoly`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<NcPoly>,
}

impl PolyMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { rows, cols, entries: vec![NcPoly::zero(field); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, NcPoly::constant(field.one()));
        }
        m
    }

    /// Constant polynomial matrix.
    pub fn from_matrix(m: &Matrix) -> PolyMatrix {
        let mut p = PolyMatrix::zeros(m.field(), m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                p.set(i, j, NcPoly::constant(m.get(i, j)));
            }
        }
        p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &NcPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: NcPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn add(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, o.rows);
        let field = self.entries.first().or(o.entries.first()).map(|p| p.field).unwrap_or(FieldSpec::Rationals);
        let mut out = PolyMatrix::zeros(field, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = NcPoly::zero(field);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), o.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(|p| p.degree()).max()
    }

    /// Block matrix with block `(j, i)` = entry `(j, i)` evaluated on the module.
    pub fn eval(&self, gens: &[Matrix], dim: usize, field: FieldSpec) -> Matrix {
        let mut out = Matrix::zeros(field, self.rows * dim, self.cols * dim);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.get(i, j);
                if !p.is_zero() {
                    out.set_block(i * dim, j * dim, &p.eval(gens, dim));
                }
            }
        }
        out
    }
}

/// Algebra acting on the left of a [`FreeBimodule`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeftAlgebra {
    /// Finite-dimensional; one action per basis element.
    Fd(AlgebraRef),
    /// Free on `n` generators; one action per generator.
    Free(usize),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BimoduleCertificate {
    /// Free over the right algebra with a basis of this size.
    Free { rank: usize },
    /// Free with a basis on which left multiplication has coefficients of degree ≤ 1.
    Affine { rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeBimodule {
    field: FieldSpec,
    left: LeftAlgebra,
    right_gens: usize,
    rank: usize,
    /// Column `i` of `action[b]` holds the coefficients of `b·m_i` in the right basis.
    action: Vec<PolyMatrix>,
}

impl FreeBimodule {
    pub fn new(field: FieldSpec, left: LeftAlgebra, right_gens: usize, rank: usize, action: Vec<PolyMatrix>) -> Result<FreeBimodule> {
        let expected = match &left {
            LeftAlgebra::Fd(a) => a.dim(),
            LeftAlgebra::Free(n) => *n,
        };
        if action.len() != expected {
            return Err(Error::Dimension(format!("{} left actions, expected {expected}", action.len())));
        }
        for p in &action {
            if (p.rows, p.cols) != (rank, rank) {
                return Err(Error::Dimension("left action must be rank × rank".into()));
            }
            for e in &p.entries {
                if e.field != field {
                    return Err(Error::FieldMismatch(e.field, field));
                }
                if e.terms.keys().flatten().any(|&l| l >= right_gens) {
                    return Err(Error::InvalidInput("polynomial uses an unknown right generator".into()));
                }
            }
        }
        let b = FreeBimodule { field, left, right_gens, rank, action };
        if let LeftAlgebra::Fd(a) = &b.left {
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    let lhs = b.action[i].mul(&b.action[j]);
                    let rhs = b.act(&a.basis_product(i, j));
                    if lhs != rhs {
                        return Err(Error::InvalidInput(format!("left action not multiplicative on ({}, {})", a.label(i), a.label(j))));
                    }
                }
            }
            if b.act(a.unit()) != PolyMatrix::identity(field, rank) {
                return Err(Error::InvalidInput("left unit does not act as the identity".into()));
            }
        }
        Ok(b)
    }

    /// Action of a left algebra element given by coordinates (finite-dimensional left side).
    fn act(&self, a: &Matrix) -> PolyMatrix {
        let mut acc = PolyMatrix::zeros(self.field, self.rank, self.rank);
        for (i, p) in self.action.iter().enumerate() {
            let c = a.get(i, 0);
            if !c.is_zero() {
                acc = acc.add(&p.scale(&c));
            }
        }
        acc
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn left(&self) -> &LeftAlgebra {
        &self.left
    }

    pub fn right_generators(&self) -> usize {
        self.right_gens
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self) -> &[PolyMatrix] {
        &self.action
    }

    pub fn certificate(&self) -> BimoduleCertificate {
        if self.action.iter().all(|p| p.degree().unwrap_or(0) <= 1) {
            BimoduleCertificate::Affine { rank: self.rank }
        } else {
            BimoduleCertificate::Free { rank: self.rank }
        }
    }

    /// The identity bimodule of the free algebra.
    pub fn regular_free(field: FieldSpec, n: usize) -> FreeBimodule {
        let action = (0..n)
            .map(|s| {
                let mut p = PolyMatrix::zeros(field, 1, 1);
                p.set(0, 0, NcPoly::var(field, s));
                p
            })
            .collect();
        FreeBimodule { field, left: LeftAlgebra::Free(n), right_gens: n, rank: 1, action }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseBimodule {
    left: AlgebraRef,
    right: AlgebraRef,
    dim: usize,
    left_action: Vec<Matrix>,
    /// `right_action[a]` is `m ↦ m·a`.
    right_action: Vec<Matrix>,
    free_basis: Option<Matrix>,
}

impl DenseBimodule {
    pub fn new(left: AlgebraRef, right: AlgebraRef, left_action: Vec<Matrix>, right_action: Vec<Matrix>) -> Result<DenseBimodule> {
        if left_action.len() != left.dim() || right_action.len() != right.dim() {
            return Err(Error::Dimension("one action matrix per basis element is required on each side".into()));
        }
        let dim = left_action.first().map(|m| m.rows()).unwrap_or(0);
        for m in left_action.iter().chain(&right_action) {
            if m.shape() != (dim, dim) {
                return Err(Error::Dimension("bimodule action matrices must be square of a common size".into()));
            }
        }
        let b = DenseBimodule { left, right, dim, left_action, right_action, free_basis: None };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<()> {
        let lm = AModule::new(self.left.clone(), self.left_action.clone())?;
        let _ = lm;
        let r = &self.right;
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                // (m·a_i)·a_j = m·(a_i a_j)
                let lhs = &self.right_action[j] * &self.right_action[i];
                let rhs = combine(&self.right_action, &r.basis_product(i, j), self.dim);
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!("right action not multiplicative on ({}, {})", r.label(i), r.label(j))));
                }
            }
        }
        if !combine(&self.right_action, r.unit(), self.dim).is_identity() {
            return Err(Error::InvalidInput("right unit does not act as the identity".into()));
        }
        for l in &self.left_action {
            for rr in &self.right_action {
                if &(l * rr) != &(rr * l) {
                    return Err(Error::InvalidInput("left and right actions do not commute".into()));
                }
            }
        }
        Ok(())
    }

    /// `_A A_A`, free of rank one on the unit.
    pub fn regular(a: &AlgebraRef) -> DenseBimodule {
        let d = a.dim();
        DenseBimodule {
            left: a.clone(),
            right: a.clone(),
            dim: d,
            left_action: (0..d).map(|i| a.left_mult(i).clone()).collect(),
            right_action: (0..d).map(|i| a.right_mult(i).clone()).collect(),
            free_basis: Some(a.unit().clone()),
        }
    }

    /// Attaches a right basis (columns) after checking `(a_i) ↦ Σ n_i·a_i`
    /// is bijective.
    pub fn with_free_basis(mut self, basis: Matrix) -> Result<DenseBimodule> {
        let phi = self.free_coordinates_matrix(&basis)?;
        if !phi.is_invertible() {
            return Err(Error::InvalidInput("proposed basis is not a free right basis".into()));
        }
        self.free_basis = Some(basis);
        Ok(self)
    }

    fn free_coordinates_matrix(&self, basis: &Matrix) -> Result<Matrix> {
        let mut cols = vec![];
        for i in 0..basis.cols() {
            let n = basis.column(i);
            for s in 0..self.right.dim() {
                cols.push(&self.right_action[s] * &n);
            }
        }
        if cols.is_empty() {
            return Ok(Matrix::zeros(self.left.field(), self.dim, 0));
        }
        Matrix::hstack(&cols.iter().collect::<Vec<_>>())
    }

    pub fn left(&self) -> &AlgebraRef {
        &self.left
    }

    pub fn right(&self) -> &AlgebraRef {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_action(&self) -> &[Matrix] {
        &self.left_action
    }

    pub fn right_action(&self) -> &[Matrix] {
        &self.right_action
    }

    pub fn free_basis(&self) -> Option<&Matrix> {
        self.free_basis.as_ref()
    }

    pub fn certificate(&self) -> Option<BimoduleCertificate> {
        self.free_basis.as_ref().map(|b| BimoduleCertificate::Free { rank: b.cols() })
    }

    /// Relations `m·a ⊗ x − m ⊗ a·x` over the right generators, as a quotient of `M ⊗ X`.
    fn tensor_quotient(&self, x: &AModule) -> Result<Quotient> {
        let f = self.left.field();
        let dx = x.dim();
        let n = self.dim * dx;
        let gens = self.right.generators();
        let mut parts = vec![];
        for &g in &gens {
            let rel = &self.right_action[g].tensor(&Matrix::identity(f, dx)) - &Matrix::identity(f, self.dim).tensor(x.action_of(g));
            parts.push(rel);
        }
        let rels = if parts.is_empty() || n == 0 { Matrix::zeros(f, n, 0) } else { Matrix::hstack(&parts.iter().collect::<Vec<_>>())?.col_space() };
        Ok(Quotient::new(f, n, &rels, &[]))
    }
}

fn combine(mats: &[Matrix], a: &Matrix, dim: usize) -> Matrix {
    let f = a.field();
    let mut acc = Matrix::zeros(f, dim, dim);
    for (i, m) in mats.iter().enumerate() {
        let c = a.get(i, 0);
        if !c.is_zero() {
            acc = &acc + &m.scale(&c);
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bimodule {
    Dense(DenseBimodule),
    Free(FreeBimodule),
}

impl Bimodule {
    pub fn certificate(&self) -> Option<BimoduleCertificate> {
        match self {
            Bimodule::Dense(d) => d.certificate(),
            Bimodule::Free(f) => Some(f.certificate()),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Bimodule::Dense(d) => d.left.field(),
            Bimodule::Free(f) => f.field,
        }
    }
}

/// Input or output of a tensor functor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TensorModule {
    Alg(AModule),
    Free(FreeAlgModule),
}

/// `M ⊗_A X` with its left action.
pub fn tensor_module(m: &Bimodule, x: &TensorModule) -> Result<TensorModule> {
    match (m, x) {
        (Bimodule::Dense(d), TensorModule::Alg(x)) => {
            if !same_algebra(&d.right, x.algebra()) {
                return Err(Error::InvalidInput("module is over a different algebra than the bimodule's right side".into()));
            }
            let q = d.tensor_quotient(x)?;
            let f = d.left.field();
            let action = d
                .left_action
                .iter()
                .map(|l| &(q.projection() * &l.tensor(&Matrix::identity(f, x.dim()))) * q.section())
                .collect();
            Ok(TensorModule::Alg(AModule::new(d.left.clone(), action)?))
        }
        (Bimodule::Free(b), TensorModule::Free(x)) => {
            if x.generator_count() != b.right_gens {
                return Err(Error::InvalidInput(format!(
                    "module has {} generators, bimodule expects {}",
                    x.generator_count(),
                    b.right_gens
                )));
            }
            let acts: Vec<Matrix> = b.action.iter().map(|p| p.eval(x.gens(), x.dim(), b.field)).collect();
            match &b.left {
                LeftAlgebra::Fd(a) => Ok(TensorModule::Alg(AModule::new(a.clone(), acts)?)),
                LeftAlgebra::Free(_) => Ok(TensorModule::Free(FreeAlgModule::new(b.field, b.rank * x.dim(), acts)?)),
            }
        }
        (Bimodule::Dense(_), TensorModule::Free(_)) => {
            Err(Error::InvalidInput("bimodule has a finite-dimensional right algebra; got a free-algebra module".into()))
        }
        (Bimodule::Free(_), TensorModule::Alg(_)) => {
            Err(Error::InvalidInput("bimodule is over a free algebra on the right; got a finite-dimensional module".into()))
        }
    }
}

/// `M ⊗ f` for a module map `f: X → Y` (matrix of shape `dim Y × dim X`).
pub fn tensor_morphism(m: &Bimodule, x: &TensorModule, y: &TensorModule, f: &Matrix) -> Result<Matrix> {
    match (m, x, y) {
        (Bimodule::Dense(d), TensorModule::Alg(x), TensorModule::Alg(y)) => {
            let qx = d.tensor_quotient(x)?;
            let qy = d.tensor_quotient(y)?;
            let id = Matrix::identity(d.left.field(), d.dim);
            Ok(&(qy.projection() * &id.tensor(f)) * qx.section())
        }
        (Bimodule::Free(b), TensorModule::Free(_), TensorModule::Free(_)) => {
            Ok(Matrix::identity(b.field, b.rank).tensor(f))
        }
        _ => Err(Error::InvalidInput("bimodule and modules do not match".into())),
    }
}

/// `N ⊗_B M` for `N` a `C-B` and `M` a `B-A` bimodule.
pub fn tensor_bimodules(n: &Bimodule, m: &Bimodule) -> Result<Bimodule> {
    match (n, m) {
        (Bimodule::Dense(n), Bimodule::Dense(m)) => {
            if !same_algebra(&n.right, &m.left) {
                return Err(Error::InvalidInput("middle algebras differ".into()));
            }
            let f = n.left.field();
            let dim = n.dim * m.dim;
            let mut parts = vec![];
            for &g in &n.right.generators() {
                parts.push(&n.right_action[g].tensor(&Matrix::identity(f, m.dim)) - &Matrix::identity(f, n.dim).tensor(&m.left_action[g]));
            }
            let rels = if parts.is_empty() || dim == 0 { Matrix::zeros(f, dim, 0) } else { Matrix::hstack(&parts.iter().collect::<Vec<_>>())?.col_space() };
            let q = Quotient::new(f, dim, &rels, &[]);
            let (p, s) = (q.projection(), q.section());
            let left_action = n.left_action.iter().map(|l| &(p * &l.tensor(&Matrix::identity(f, m.dim))) * s).collect();
            let right_action = m.right_action.iter().map(|r| &(p * &Matrix::identity(f, n.dim).tensor(r)) * s).collect();
            let out = DenseBimodule::new(n.left.clone(), m.right.clone(), left_action, right_action)?;
            match (&n.free_basis, &m.free_basis) {
                (Some(bn), Some(bm)) => {
                    let mut cols = vec![];
                    for i in 0..bn.cols() {
                        for j in 0..bm.cols() {
                            cols.push(p * &bn.column(i).tensor(&bm.column(j)));
                        }
                    }
                    let basis = if cols.is_empty() { Matrix::zeros(f, q.dim(), 0) } else { Matrix::hstack(&cols.iter().collect::<Vec<_>>())? };
                    Ok(Bimodule::Dense(out.with_free_basis(basis)?))
                }
                _ => Ok(Bimodule::Dense(out)),
            }
        }
        (Bimodule::Dense(n), Bimodule::Free(m)) => {
            let LeftAlgebra::Fd(mid) = &m.left else {
                return Err(Error::InvalidInput("middle algebras differ".into()));
            };
            if !same_algebra(&n.right, mid) {
                return Err(Error::InvalidInput("middle algebras differ".into()));
            }
            let basis = n
                .free_basis
                .as_ref()
                .ok_or_else(|| Error::Precondition("left factor needs a free right-basis certificate".into()))?;
            let f = m.field;
            let t = basis.cols();
            let r = m.rank;
            let db = mid.dim();
            let phi = n.free_coordinates_matrix(basis)?;
            let mut action = Vec::with_capacity(n.left.dim());
            for c in 0..n.left.dim() {
                let mut pm = PolyMatrix::zeros(f, t * r, t * r);
                for i in 0..t {
                    let img = &n.left_action[c] * &basis.column(i);
                    let y = phi.solve(&img)?.expect("free basis spans");
                    for k in 0..t {
                        // β_{ki}(c) = Σ_s y_{k,s} b_s acting on M
                        let mut beta = PolyMatrix::zeros(f, r, r);
                        for s in 0..db {
                            let coef = y.get(k * db + s, 0);
                            if !coef.is_zero() {
                                beta = beta.add(&m.action[s].scale(&coef));
                            }
                        }
                        for l in 0..r {
                            for j in 0..r {
                                pm.set(k * r + l, i * r + j, beta.get(l, j).clone());
                            }
                        }
                    }
                }
                action.push(pm);
            }
            Ok(Bimodule::Free(FreeBimodule::new(f, LeftAlgebra::Fd(n.left.clone()), m.right_gens, t * r, action)?))
        }
        (Bimodule::Free(n), Bimodule::Free(m)) => {
            if m.left != LeftAlgebra::Free(n.right_gens) {
                return Err(Error::InvalidInput("middle algebras differ".into()));
            }
            let f = n.field;
            let (rn, rm) = (n.rank, m.rank);
            let mut action = Vec::with_capacity(n.action.len());
            for pc in &n.action {
                let mut pm = PolyMatrix::zeros(f, rn * rm, rn * rm);
                for k in 0..rn {
                    for i in 0..rn {
                        let sub = pc.get(k, i).substitute(&m.action, rm);
                        for l in 0..rm {
                            for j in 0..rm {
                                pm.set(k * rm + l, i * rm + j, sub.get(l, j).clone());
                            }
                        }
                    }
                }
                action.push(pm);
            }
            Ok(Bimodule::Free(FreeBimodule::new(f, n.left.clone(), m.right_gens, rn * rm, action)?))
        }
        (Bimodule::Free(_), Bimodule::Dense(_)) => Err(Error::InvalidInput("middle algebras differ".into())),
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum BimoduleJson {
    Dense {
        left: String,
        right: String,
        dim: usize,
        left_action: Vec<Vec<Vec<String>>>,
        right_action: Vec<Vec<Vec<String>>>,
        certificate: Option<BimoduleCertificate>,
    },
    FreeRight {
        field: FieldSpec,
        left: String,
        right_generators: usize,
        rank: usize,
        /// Per left element: rank × rank entries, each a list of `[word, coefficient]`.
        action: Vec<Vec<Vec<Vec<(Vec<usize>, String)>>>>,
        certificate: BimoduleCertificate,
    },
}

fn algebra_name(a: &AlgebraRef) -> String {
    a.preset().map(|p| p.to_string()).unwrap_or_else(|| format!("custom(dim {})", a.dim()))
}

impl Serialize for Bimodule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = |ms: &[Matrix]| ms.iter().map(|m| m.to_string_rows()).collect::<Vec<_>>();
        let j = match self {
            Bimodule::Dense(d) => BimoduleJson::Dense {
                left: algebra_name(&d.left),
                right: algebra_name(&d.right),
                dim: d.dim,
                left_action: rows(&d.left_action),
                right_action: rows(&d.right_action),
                certificate: d.certificate(),
            },
            Bimodule::Free(b) => BimoduleJson::FreeRight {
                field: b.field,
                left: match &b.left {
                    LeftAlgebra::Fd(a) => algebra_name(a),
                    LeftAlgebra::Free(n) => format!("free{n}"),
                },
                right_generators: b.right_gens,
                rank: b.rank,
                action: b
                    .action
                    .iter()
                    .map(|p| {
                        (0..p.rows)
                            .map(|i| {
                                (0..p.cols)
                                    .map(|j| p.get(i, j).terms().map(|(w, c)| (w.clone(), c.to_string())).collect())
                                    .collect()
                            })
                            .collect()
                    })
                    .collect(),
                certificate: b.certificate(),
            },
        };
        j.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{amodule_from_quiver_rep, FDAlgebra};
    use crate::quiver::{kron_l, kron_p};
    use crate::Poly;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    #[test]
    fn regular_tensor_is_identity() {
        let a = FDAlgebra::kronecker(f5(), 2);
        let reg = Bimodule::Dense(DenseBimodule::regular(&a));
        let x = amodule_from_quiver_rep(&kron_l(&Poly::from_ints(f5(), &[2, 1, 1])).unwrap()).unwrap();
        let TensorModule::Alg(y) = tensor_module(&reg, &TensorModule::Alg(x.clone())).unwrap() else { panic!() };
        assert_eq!(y.dim(), x.dim());
        let back = tensor_bimodules(&reg, &reg).unwrap();
        assert_eq!(back.certificate(), Some(BimoduleCertificate::Free { rank: 1 }));
    }

    #[test]
    fn free_rank_multiplies_dimension() {
        let f = f5();
        let reg = Bimodule::Free(FreeBimodule::regular_free(f, 2));
        let x = FreeAlgModule::new(f, 2, vec![Matrix::identity(f, 2), Matrix::zeros(f, 2, 2)]).unwrap();
        let TensorModule::Free(y) = tensor_module(&reg, &TensorModule::Free(x.clone())).unwrap() else { panic!() };
        assert_eq!(y, x);
        let both = tensor_bimodules(&reg, &reg).unwrap();
        assert_eq!(both.certificate(), Some(BimoduleCertificate::Affine { rank: 1 }));
    }

    #[test]
    fn noncommutative_products() {
        let f = f5();
        let x = NcPoly::var(f, 0);
        let y = NcPoly::var(f, 1);
        assert_ne!(x.mul(&y), y.mul(&x));
        let a = Matrix::from_ints(f, 2, 2, &[0, 1, 0, 0]);
        let b = Matrix::from_ints(f, 2, 2, &[0, 0, 1, 0]);
        let gens = vec![a.clone(), b.clone()];
        assert_eq!(x.mul(&y).eval(&gens, 2), &a * &b);
    }

    #[test]
    fn dense_rejects_noncommuting_actions() {
        let a = FDAlgebra::nilpotent(f5(), 2);
        let p0 = kron_p(f5(), 0);
        let _ = p0;
        let d = DenseBimodule::regular(&a);
        let mut right = d.right_action.clone();
        right[1] = Matrix::from_ints(f5(), 2, 2, &[0, 0, 1, 0]).transpose();
        assert!(DenseBimodule::new(a.clone(), a, d.left_action.clone(), right).is_err());
    }
}
