//! Finite-dimensional algebras given by structure constants, with designated
//! primitive idempotents and algebra generators.

mod bimodule;
mod module;

pub use bimodule::{
    tensor_bimodules, tensor_module, tensor_morphism, Bimodule, BimoduleCertificate, DenseBimodule, FreeBimodule, LeftAlgebra,
    NcPoly, PolyMatrix, TensorModule,
};
pub(crate) use module::same_algebra;
pub use module::{amodule_from_quiver_rep, amodule_over, projective, quiver_rep_from_amodule, radical_layers, radical_series, socle, top, AModule, FreeAlgModule};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

pub type AlgebraRef = Arc<FDAlgebra>;

/// Named algebras shipped with the library.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Path algebra `kK_n`.
    Kronecker(usize),
    /// `k[X,Y]/(X,Y)^{n+1}`.
    Truncated(usize),
    /// `k[X]/(X^n)`; `Nilpotent(1)` is the ground field.
    Nilpotent(usize),
    /// Free algebra `k⟨X_1..X_n⟩` = path algebra of `L_n` (infinite-dimensional,
    /// descriptor only).
    Free(usize),
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Kronecker(n) => write!(f, "kron{n}"),
            Preset::Truncated(n) => write!(f, "trunc{n}"),
            Preset::Nilpotent(n) => write!(f, "nil{n}"),
            Preset::Free(n) => write!(f, "free{n}"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Preset> {
        if s == "k" {
            return Ok(Preset::Nilpotent(1));
        }
        let bad = || Error::InvalidInput(format!("unknown preset `{s}` (try kron<n>, trunc<n>, nil<n>, free<n>, k)"));
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let (name, num) = s.split_at(split);
        let n: usize = num.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        match name {
            "kron" => Ok(Preset::Kronecker(n)),
            "trunc" => Ok(Preset::Truncated(n)),
            "nil" => Ok(Preset::Nilpotent(n)),
            "free" => Ok(Preset::Free(n)),
            _ => Err(bad()),
        }
    }
}

impl Preset {
    pub const NAMES: [&'static str; 5] = ["kron<n>", "trunc<n>", "nil<n>", "free<n>", "k"];

    pub fn describe(&self) -> String {
        match self {
            Preset::Kronecker(n) => format!("path algebra of the Kronecker quiver with {n} arrows"),
            Preset::Truncated(n) => format!("k[X,Y]/(X,Y)^{}", n + 1),
            Preset::Nilpotent(1) => "the ground field k".to_string(),
            Preset::Nilpotent(n) => format!("k[X]/(X^{n})"),
            Preset::Free(n) => format!("free algebra on {n} generators (path algebra of L_{n})"),
        }
    }

    /// The finite-dimensional algebra, or `None` for free algebras.
    pub fn algebra(&self, field: FieldSpec) -> Option<AlgebraRef> {
        match *self {
            Preset::Kronecker(n) => Some(FDAlgebra::kronecker(field, n)),
            Preset::Truncated(n) => Some(FDAlgebra::truncated_poly(field, n)),
            Preset::Nilpotent(n) => Some(FDAlgebra::nilpotent(field, n)),
            Preset::Free(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FDAlgebra {
    field: FieldSpec,
    labels: Vec<String>,
    /// `table[i][j]` lists the nonzero `(k, c^k_{ij})`.
    table: Vec<Vec<Vec<(usize, Scalar)>>>,
    unit: Matrix,
    idempotents: Vec<usize>,
    generators: Vec<usize>,
    radical: Option<Matrix>,
    preset: Option<Preset>,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    /// Each basis element as a combination of words in the generators.
    expansions: Vec<Vec<(Vec<usize>, Scalar)>>,
}

impl FDAlgebra {
    /// Builds and validates an algebra from a multiplication table.
    /// `radical`, when given, is a column basis of the Jacobson radical.
    pub fn new(
        field: FieldSpec,
        labels: Vec<String>,
        table: Vec<Vec<Vec<(usize, Scalar)>>>,
        unit: Vec<(usize, Scalar)>,
        idempotents: Vec<usize>,
        generators: Vec<usize>,
        radical: Option<Matrix>,
    ) -> Result<FDAlgebra> {
        let d = labels.len();
        if d == 0 {
            return Err(Error::InvalidInput("an algebra needs at least one basis element".into()));
        }
        if table.len() != d || table.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension(format!("multiplication table must be {d}x{d}")));
        }
        for row in &table {
            for cell in row {
                for (k, c) in cell {
                    if *k >= d {
                        return Err(Error::InvalidInput(format!("table refers to basis index {k} ≥ {d}")));
                    }
                    if c.field() != field {
                        return Err(Error::FieldMismatch(c.field(), field));
                    }
                }
            }
        }
        let mut u = Matrix::zeros(field, d, 1);
        for (k, c) in &unit {
            if *k >= d {
                return Err(Error::InvalidInput(format!("unit refers to basis index {k}")));
            }
            u.set(*k, 0, c);
        }
        if let Some(&g) = generators.iter().chain(&idempotents).find(|&&g| g >= d) {
            return Err(Error::InvalidInput(format!("basis index {g} out of range")));
        }
        let left: Vec<Matrix> = (0..d)
            .map(|i| {
                let mut m = Matrix::zeros(field, d, d);
                for j in 0..d {
                    for (k, c) in &table[i][j] {
                        m.set(*k, j, &(&m.get(*k, j) + c));
                    }
                }
                m
            })
            .collect();
        let right: Vec<Matrix> = (0..d)
            .map(|i| {
                let mut m = Matrix::zeros(field, d, d);
                for j in 0..d {
                    for (k, c) in &table[j][i] {
                        m.set(*k, j, &(&m.get(*k, j) + c));
                    }
                }
                m
            })
            .collect();
        if let Some(r) = &radical {
            if r.rows() != d || r.field() != field {
                return Err(Error::Dimension("radical basis must have one row per basis element".into()));
            }
        }
        let mut alg = FDAlgebra {
            field,
            labels,
            table,
            unit: u,
            idempotents,
            generators,
            radical,
            preset: None,
            left,
            right,
            expansions: vec![],
        };
        alg.validate()?;
        alg.expansions = alg.generator_expansions()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        // associativity: L_i L_j = Σ_k c^k_{ij} L_k
        for i in 0..d {
            for j in 0..d {
                let lhs = &self.left[i] * &self.left[j];
                let rhs = self.left_of(&self.basis_product(i, j));
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!(
                        "multiplication is not associative on ({}, {}, -)",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        let lu = self.left_of(&self.unit);
        let ru = self.right_of(&self.unit);
        if !lu.is_identity() || !ru.is_identity() {
            return Err(Error::InvalidInput("unit does not act as the identity".into()));
        }
        if !self.idempotents.is_empty() {
            let mut sum = Matrix::zeros(self.field, d, 1);
            for (a, &x) in self.idempotents.iter().enumerate() {
                for (b, &y) in self.idempotents.iter().enumerate() {
                    let p = self.basis_product(x, y);
                    let expect = if a == b { self.basis_vector(x) } else { Matrix::zeros(self.field, d, 1) };
                    if p != expect {
                        return Err(Error::InvalidInput("listed idempotents are not orthogonal idempotents".into()));
                    }
                }
                sum = &sum + &self.basis_vector(x);
            }
            if sum != self.unit {
                return Err(Error::InvalidInput("listed idempotents do not sum to the unit".into()));
            }
        }
        Ok(())
    }

    fn generator_expansions(&self) -> Result<Vec<Vec<(Vec<usize>, Scalar)>>> {
        let d = self.dim();
        let gens: Vec<usize> = if self.generators.is_empty() { (0..d).collect() } else { self.generators.clone() };
        let mut words: Vec<(Vec<usize>, Matrix)> = vec![(vec![], self.unit.clone())];
        let mut span = self.unit.clone();
        let mut frontier = words.clone();
        while span.rank() < d && !frontier.is_empty() {
            let mut next = vec![];
            for (w, e) in &frontier {
                for (gi, &g) in gens.iter().enumerate() {
                    let prod = self.mul(&self.basis_vector(g), e);
                    if !span.spans(&prod) {
                        span = Matrix::hstack(&[&span, &prod])?;
                        let mut w2 = vec![gi];
                        w2.extend(w);
                        next.push((w2, prod));
                    }
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        if span.rank() < d {
            return Err(Error::InvalidInput("listed generators do not generate the algebra".into()));
        }
        let coeffs = span.inverse().expect("word basis is a basis");
        Ok((0..d)
            .map(|i| {
                (0..d)
                    .filter_map(|k| {
                        let c = coeffs.get(k, i);
                        (!c.is_zero()).then(|| (words[k].0.clone(), c))
                    })
                    .collect()
            })
            .collect())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn preset(&self) -> Option<Preset> {
        self.preset
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    /// Generators as basis indices; all basis elements when none were listed.
    pub fn generators(&self) -> Vec<usize> {
        if self.generators.is_empty() {
            (0..self.dim()).collect()
        } else {
            self.generators.clone()
        }
    }

    /// Basis element `i` as a combination of words in [`FDAlgebra::generators`]
    /// (indices into that list; leftmost letter acts last).
    pub fn expansion(&self, i: usize) -> &[(Vec<usize>, Scalar)] {
        &self.expansions[i]
    }

    pub fn unit(&self) -> &Matrix {
        &self.unit
    }

    pub fn structure_constants(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> Matrix {
        let mut v = Matrix::zeros(self.field, self.dim(), 1);
        v.set(i, 0, &self.field.one());
        v
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Matrix {
        self.left[i].column(j)
    }

    /// Left multiplication by basis element `i`.
    pub fn left_mult(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    /// Right multiplication by basis element `i`: `x ↦ x·b_i`.
    pub fn right_mult(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    pub fn left_of(&self, a: &Matrix) -> Matrix {
        combine(self.field, self.dim(), &self.left, a)
    }

    pub fn right_of(&self, a: &Matrix) -> Matrix {
        combine(self.field, self.dim(), &self.right, a)
    }

    /// Product of two elements given as coordinate columns.
    pub fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        &self.left_of(a) * b
    }

    pub fn is_commutative(&self) -> bool {
        self.left == self.right
    }

    /// Jacobson radical as a column basis. Uses the explicit radical when one
    /// was supplied; otherwise the kernel of the trace form
    /// `(a, b) ↦ tr L(ab)`, which needs characteristic 0 or `p > dim`.
    pub fn radical(&self) -> Result<Ideal> {
        if let Some(r) = &self.radical {
            return Ok(Ideal { basis: r.clone() });
        }
        let d = self.dim();
        let p = self.field.characteristic();
        if p != 0 && p as usize <= d {
            return Err(Error::RadicalUnavailable { field: self.field, dim: d });
        }
        let gram = Matrix::from_fn(self.field, d, d, |i, j| {
            let prod = self.basis_product(i, j);
            self.left_of(&prod).trace()
        });
        Ok(Ideal { basis: gram.kernel_basis() })
    }

    /// `e_x A e_y` as a column basis.
    pub fn corner(&self, x: usize, y: usize) -> Matrix {
        let ex = &self.left[x];
        let ey = &self.right[y];
        let p = ex * ey;
        p.col_space()
    }

    /// Whether the two-sided ideal lattice is distributive: every `e_xAe_y`
    /// has a radical filtration with layers of dimension ≤ 1. On failure the
    /// witness names the first offending pair and layer.
    pub fn is_distributive(&self) -> Result<(bool, Option<DistributivityWitness>)> {
        let rad = self.radical()?;
        let ids: Vec<usize> = if self.idempotents.is_empty() { vec![] } else { self.idempotents.clone() };
        let d = self.dim();
        let unit_only = ids.is_empty();
        let corners: Vec<(usize, usize)> = if unit_only {
            vec![(usize::MAX, usize::MAX)]
        } else {
            ids.iter().flat_map(|&x| ids.iter().map(move |&y| (x, y))).collect()
        };
        let ident = Matrix::identity(self.field, d);
        for (x, y) in corners {
            let (lx, ry) = if unit_only { (ident.clone(), ident.clone()) } else { (self.left[x].clone(), self.right[y].clone()) };
            let (lxx, rxx) = if unit_only { (ident.clone(), ident.clone()) } else { (self.left[x].clone(), self.right[x].clone()) };
            let (lyy, ryy) = if unit_only { (ident.clone(), ident.clone()) } else { (self.left[y].clone(), self.right[y].clone()) };
            // radicals of the corner rings e_x A e_x and e_y A e_y
            let rad_x = (&(&lxx * &rxx) * &rad.basis).col_space();
            let rad_y = (&(&lyy * &ryy) * &rad.basis).col_space();
            let mut layer = (&lx * &ry).col_space();
            let mut j = 0;
            while layer.cols() > 0 {
                let mut gens = vec![];
                for r in 0..rad_x.cols() {
                    gens.push(&self.left_of(&rad_x.column(r)) * &layer);
                }
                for r in 0..rad_y.cols() {
                    gens.push(&self.right_of(&rad_y.column(r)) * &layer);
                }
                let next = if gens.is_empty() {
                    Matrix::zeros(self.field, d, 0)
                } else {
                    Matrix::hstack(&gens.iter().collect::<Vec<_>>())?.col_space()
                };
                let diff = layer.cols() - next.cols();
                if diff >= 2 {
                    let (ex, ey) = if unit_only { (None, None) } else { (Some(x), Some(y)) };
                    return Ok((false, Some(DistributivityWitness { x: ex, y: ey, layer: j, dim: diff })));
                }
                if diff == 0 {
                    break;
                }
                layer = next;
                j += 1;
            }
        }
        Ok((true, None))
    }

    /// `kK_n` with basis `[e_1, e_2, a_1..a_n]`; `e_1` is the sink idempotent,
    /// every arrow satisfies `e_1 a = a = a e_2`.
    pub fn kronecker(field: FieldSpec, n: usize) -> AlgebraRef {
        let d = n + 2;
        let one = field.one();
        let mut table = vec![vec![vec![]; d]; d];
        table[0][0] = vec![(0, one.clone())];
        table[1][1] = vec![(1, one.clone())];
        for a in 2..d {
            table[0][a] = vec![(a, one.clone())];
            table[a][1] = vec![(a, one.clone())];
        }
        let mut labels = vec!["e1".to_string(), "e2".to_string()];
        labels.extend((1..=n).map(|k| format!("a{k}")));
        if n == 2 {
            labels[2] = "lambda".into();
            labels[3] = "rho".into();
        }
        let radical = Matrix::from_fn(field, d, n, |i, j| if i == j + 2 { field.one() } else { field.zero() });
        let mut gens = vec![0];
        gens.extend(2..d);
        let mut a = FDAlgebra::new(field, labels, table, vec![(0, one.clone()), (1, one)], vec![0, 1], gens, Some(radical))
            .expect("Kronecker algebra table is valid");
        a.preset = Some(Preset::Kronecker(n));
        Arc::new(a)
    }

    /// `k[X,Y]/(X,Y)^{n+1}`; basis monomials `X^aY^b`, `a+b ≤ n`, by degree and
    /// then by decreasing power of `X`.
    pub fn truncated_poly(field: FieldSpec, n: usize) -> AlgebraRef {
        let monos = truncated_monomials(n);
        let d = monos.len();
        let idx = |a: usize, b: usize| monos.iter().position(|&m| m == (a, b));
        let mut table = vec![vec![vec![]; d]; d];
        for (i, &(a1, b1)) in monos.iter().enumerate() {
            for (j, &(a2, b2)) in monos.iter().enumerate() {
                if let Some(k) = idx(a1 + a2, b1 + b2) {
                    table[i][j] = vec![(k, field.one())];
                }
            }
        }
        let labels = monos.iter().map(|&(a, b)| monomial_label(a, b)).collect();
        let radical = Matrix::from_fn(field, d, d - 1, |i, j| if i == j + 1 { field.one() } else { field.zero() });
        let gens = if n == 0 { vec![] } else { vec![1, 2] };
        let mut a = FDAlgebra::new(field, labels, table, vec![(0, field.one())], vec![0], gens, Some(radical))
            .expect("truncated polynomial table is valid");
        a.preset = Some(Preset::Truncated(n));
        Arc::new(a)
    }

    /// `k[X]/(X^n)`; basis `1, X, …, X^{n-1}`.
    pub fn nilpotent(field: FieldSpec, n: usize) -> AlgebraRef {
        assert!(n >= 1);
        let mut table = vec![vec![vec![]; n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                if i + j < n {
                    *cell = vec![(i + j, field.one())];
                }
            }
        }
        let labels = (0..n).map(|i| monomial_label(i, 0)).collect();
        let radical = Matrix::from_fn(field, n, n - 1, |i, j| if i == j + 1 { field.one() } else { field.zero() });
        let gens = if n == 1 { vec![0] } else { vec![1] };
        let mut a = FDAlgebra::new(field, labels, table, vec![(0, field.one())], vec![0], gens, Some(radical))
            .expect("truncated polynomial table is valid");
        a.preset = Some(Preset::Nilpotent(n));
        Arc::new(a)
    }

    /// Same algebra with a different radical basis (for small characteristic).
    pub fn with_radical(&self, radical: Matrix) -> Result<FDAlgebra> {
        let ideal = Ideal { basis: radical.clone() };
        ideal.check(self)?;
        let mut a = self.clone();
        a.radical = Some(radical);
        Ok(a)
    }
}

/// Monomials `X^aY^b` with `a + b ≤ n` in basis order.
pub fn truncated_monomials(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|deg| (0..=deg).rev().map(move |a| (a, deg - a))).collect()
}

fn monomial_label(a: usize, b: usize) -> String {
    let part = |v: &str, e: usize| match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    };
    let s = format!("{}{}", part("X", a), part("Y", b));
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

fn combine(field: FieldSpec, d: usize, mats: &[Matrix], a: &Matrix) -> Matrix {
    let mut acc = Matrix::zeros(field, d, d);
    for (i, m) in mats.iter().enumerate() {
        let c = a.get(i, 0);
        if !c.is_zero() {
            acc = &acc + &m.scale(&c);
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributivityWitness {
    /// Idempotent basis indices of the corner `e_x A e_y` (absent for local algebras
    /// given without idempotents).
    pub x: Option<usize>,
    pub y: Option<usize>,
    /// Index `j` of the layer `R^j / R^{j+1}`.
    pub layer: usize,
    pub dim: usize,
}

/// A two-sided ideal as a column basis of a subspace of the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub basis: Matrix,
}

impl Ideal {
    pub fn new(algebra: &FDAlgebra, basis: Matrix) -> Result<Ideal> {
        let i = Ideal { basis };
        i.check(algebra)?;
        Ok(i)
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Closure under left and right multiplication by the basis.
    pub fn check(&self, a: &FDAlgebra) -> Result<()> {
        if self.basis.rows() != a.dim() {
            return Err(Error::Dimension("ideal basis has the wrong number of rows".into()));
        }
        for i in 0..a.dim() {
            if !self.basis.spans(&(a.left_mult(i) * &self.basis)) || !self.basis.spans(&(a.right_mult(i) * &self.basis)) {
                return Err(Error::InvalidInput(format!("subspace is not closed under multiplication by {}", a.label(i))));
            }
        }
        Ok(())
    }

    /// `I^k` for `k ≥ 1`.
    pub fn power(&self, a: &FDAlgebra, k: usize) -> Result<Ideal> {
        if k == 0 {
            return Err(Error::InvalidInput("ideal powers start at 1".into()));
        }
        let mut cur = self.basis.clone();
        for _ in 1..k {
            let mut cols = Vec::new();
            for i in 0..cur.cols() {
                for j in 0..self.basis.cols() {
                    cols.push(a.mul(&cur.column(i), &self.basis.column(j)));
                }
            }
            let refs: Vec<&Matrix> = cols.iter().collect();
            cur = if refs.is_empty() { Matrix::zeros(a.field(), a.dim(), 0) } else { Matrix::hstack(&refs)?.col_space() };
        }
        Ok(Ideal { basis: cur })
    }

    pub fn contains(&self, v: &Matrix) -> bool {
        self.basis.spans(v)
    }

    /// Whether `I·J = 0` and `J·I = 0` hold for `J` the given column basis.
    pub fn annihilated_by(&self, a: &FDAlgebra, other: &Matrix) -> bool {
        (0..self.basis.cols()).all(|i| {
            let x = self.basis.column(i);
            (0..other.cols()).all(|j| {
                let y = other.column(j);
                a.mul(&x, &y).is_zero() && a.mul(&y, &x).is_zero()
            })
        })
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    field: FieldSpec,
    basis: Vec<String>,
    table: Vec<Vec<Vec<(usize, String)>>>,
    unit: Vec<(usize, String)>,
    idempotents: Vec<usize>,
    #[serde(default)]
    generators: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radical: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
}

impl Serialize for FDAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs = |v: &[(usize, Scalar)]| v.iter().map(|(k, c)| (*k, c.to_string())).collect::<Vec<_>>();
        let unit: Vec<(usize, String)> =
            (0..self.dim()).filter(|&i| !self.unit.get(i, 0).is_zero()).map(|i| (i, self.unit.get(i, 0).to_string())).collect();
        AlgebraJson {
            field: self.field,
            basis: self.labels.clone(),
            table: self.table.iter().map(|r| r.iter().map(|c| pairs(c)).collect()).collect(),
            unit,
            idempotents: self.idempotents.clone(),
            generators: self.generators.clone(),
            radical: self.radical.as_ref().map(|r| r.transpose().to_string_rows()),
            preset: self.preset.map(|p| p.to_string()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FDAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = AlgebraJson::deserialize(d)?;
        let f = j.field;
        let parse_pairs = |v: &[(usize, String)]| -> Result<Vec<(usize, Scalar)>> {
            v.iter().map(|(k, c)| Ok((*k, f.parse(c)?))).collect()
        };
        let table = j
            .table
            .iter()
            .map(|r| r.iter().map(|c| parse_pairs(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let unit = parse_pairs(&j.unit).map_err(D::Error::custom)?;
        let n = j.basis.len();
        let radical = match &j.radical {
            None => None,
            Some(rows) => Some(
                Matrix::from_string_rows(f, rows.len(), n, rows).map_err(D::Error::custom)?.transpose(),
            ),
        };
        let mut a = FDAlgebra::new(f, j.basis, table, unit, j.idempotents, j.generators, radical).map_err(D::Error::custom)?;
        a.preset = j.preset.as_deref().map(str::parse).transpose().map_err(D::Error::custom)?;
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn truncated_dims() {
        assert_eq!(FDAlgebra::truncated_poly(q(), 2).dim(), 6);
        let a = FDAlgebra::truncated_poly(q(), 1);
        assert_eq!(a.dim(), 3);
        assert_eq!(a.labels(), &["1", "X", "Y"]);
        let a2 = FDAlgebra::truncated_poly(q(), 2);
        let x = a2.index_of("X").unwrap();
        let x2 = a2.index_of("X^2").unwrap();
        assert!(a2.basis_product(x, x2).is_zero());
        assert!(a2.is_commutative());
    }

    #[test]
    fn kronecker_table() {
        let a = FDAlgebra::kronecker(q(), 2);
        assert_eq!(a.dim(), 4);
        let (e1, e2, l) = (0, 1, 2);
        assert_eq!(a.basis_product(l, e2), a.basis_vector(l));
        assert_eq!(a.basis_product(e1, l), a.basis_vector(l));
        assert!(a.basis_product(l, l).is_zero());
        assert!(a.basis_product(e2, l).is_zero());
        assert_eq!(a.radical().unwrap().dim(), 2);
        // trace-form radical agrees with the explicit one
        let stripped = FDAlgebra { radical: None, ..(*a).clone() };
        assert_eq!(stripped.radical().unwrap().basis.col_space(), a.radical().unwrap().basis.col_space());
    }

    #[test]
    fn radicals() {
        let a = FDAlgebra::truncated_poly(q(), 2);
        assert_eq!(a.radical().unwrap().dim(), 5);
        let stripped = FDAlgebra { radical: None, ..(*a).clone() };
        assert_eq!(stripped.radical().unwrap().dim(), 5);
        let small = FDAlgebra { radical: None, ..(*FDAlgebra::truncated_poly(FieldSpec::prime(3).unwrap(), 2)).clone() };
        assert!(matches!(small.radical(), Err(Error::RadicalUnavailable { .. })));
    }

    #[test]
    fn distributivity() {
        let (ok, w) = FDAlgebra::kronecker(q(), 2).is_distributive().unwrap();
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!((w.x, w.y, w.dim), (Some(0), Some(1), 2));
        assert!(FDAlgebra::nilpotent(q(), 3).is_distributive().unwrap().0);
        let (ok, w) = FDAlgebra::truncated_poly(q(), 1).is_distributive().unwrap();
        assert!(!ok);
        assert_eq!(w.unwrap().dim, 2);
    }

    #[test]
    fn rejects_bad_tables() {
        let f = q();
        // X·X = 1 with unit "X" is not unital
        let table = vec![vec![vec![(0, f.one())]]];
        assert!(FDAlgebra::new(f, vec!["x".into()], table, vec![(0, f.int(2))], vec![], vec![], None).is_err());
    }

    #[test]
    fn preset_names() {
        assert_eq!("kron3".parse::<Preset>().unwrap(), Preset::Kronecker(3));
        assert_eq!("k".parse::<Preset>().unwrap(), Preset::Nilpotent(1));
        assert!("foo2".parse::<Preset>().is_err());
        assert!(Preset::Free(2).algebra(q()).is_none());
    }

    #[test]
    fn json_round_trip() {
        let a = FDAlgebra::truncated_poly(FieldSpec::prime(5).unwrap(), 2);
        let s = serde_json::to_string(&*a).unwrap();
        let back: FDAlgebra = serde_json::from_str(&s).unwrap();
        assert_eq!(back, *a);
    }
}
