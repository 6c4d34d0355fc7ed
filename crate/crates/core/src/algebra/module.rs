use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{AlgebraRef, FDAlgebra, Preset};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::{Matrix, Quotient};
use crate::quiver::{Quiver, QuiverRep};

/// A finite-dimensional left module: one action matrix per algebra basis element.
#[derive(Clone, Debug)]
pub struct AModule {
    algebra: AlgebraRef,
    dim: usize,
    action: Vec<Matrix>,
}

impl PartialEq for AModule {
    fn eq(&self, other: &AModule) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.action == other.action
    }
}

impl Eq for AModule {}

pub(crate) fn same_algebra(a: &AlgebraRef, b: &AlgebraRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl AModule {
    /// Validates shapes and that the action is a unital algebra homomorphism.
    pub fn new(algebra: AlgebraRef, action: Vec<Matrix>) -> Result<AModule> {
        let m = AModule::new_unchecked(algebra, action)?;
        m.check_homomorphism()?;
        Ok(m)
    }

    fn new_unchecked(algebra: AlgebraRef, action: Vec<Matrix>) -> Result<AModule> {
        if action.len() != algebra.dim() {
            return Err(Error::Dimension(format!("{} action matrices for an algebra of dimension {}", action.len(), algebra.dim())));
        }
        let dim = action[0].rows();
        for m in &action {
            if m.shape() != (dim, dim) {
                return Err(Error::Dimension("action matrices must be square of a common size".into()));
            }
            if m.field() != algebra.field() {
                return Err(Error::FieldMismatch(m.field(), algebra.field()));
            }
        }
        Ok(AModule { algebra, dim, action })
    }

    pub fn check_homomorphism(&self) -> Result<()> {
        let a = &self.algebra;
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = &self.action[i] * &self.action[j];
                let rhs = self.act(&a.basis_product(i, j));
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!(
                        "action is not multiplicative on ({}, {})",
                        a.label(i),
                        a.label(j)
                    )));
                }
            }
        }
        if !self.act(a.unit()).is_identity() {
            return Err(Error::InvalidInput("unit does not act as the identity".into()));
        }
        Ok(())
    }

    /// Builds the module from the action of the algebra generators
    /// ([`FDAlgebra::generators`], in order); fails if relations are violated.
    pub fn from_generators(algebra: AlgebraRef, gens: &[Matrix]) -> Result<AModule> {
        let g = algebra.generators();
        if gens.len() != g.len() {
            return Err(Error::Dimension(format!("{} generator matrices, algebra has {} generators", gens.len(), g.len())));
        }
        let dim = gens.first().map(|m| m.rows()).unwrap_or(0);
        let field = algebra.field();
        let action = (0..algebra.dim())
            .map(|i| {
                let mut acc = Matrix::zeros(field, dim, dim);
                for (word, c) in algebra.expansion(i) {
                    // leftmost letter acts last
                    let w = word.iter().rev().fold(Matrix::identity(field, dim), |acc, &l| &gens[l] * &acc);
                    acc = &acc + &w.scale(c);
                }
                acc
            })
            .collect();
        AModule::new(algebra, action)
    }

    pub fn regular(algebra: &AlgebraRef) -> AModule {
        let action = (0..algebra.dim()).map(|i| algebra.left_mult(i).clone()).collect();
        AModule { algebra: algebra.clone(), dim: algebra.dim(), action }
    }

    pub fn zero(algebra: &AlgebraRef) -> AModule {
        let f = algebra.field();
        AModule { algebra: algebra.clone(), dim: 0, action: vec![Matrix::zeros(f, 0, 0); algebra.dim()] }
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn action_of(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    /// Action of an algebra element given by coordinates.
    pub fn act(&self, a: &Matrix) -> Matrix {
        let mut acc = Matrix::zeros(self.field(), self.dim, self.dim);
        for (i, m) in self.action.iter().enumerate() {
            let c = a.get(i, 0);
            if !c.is_zero() {
                acc = &acc + &m.scale(&c);
            }
        }
        acc
    }

    pub fn generator_actions(&self) -> Vec<Matrix> {
        self.algebra.generators().iter().map(|&g| self.action[g].clone()).collect()
    }

    pub fn direct_sum(&self, other: &AModule) -> Result<AModule> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::InvalidInput("direct sum of modules over different algebras".into()));
        }
        let action = self.action.iter().zip(&other.action).map(|(a, b)| Matrix::block_diag(&[a, b])).collect();
        AModule::new_unchecked(self.algebra.clone(), action)
    }

    /// Submodule spanned by the columns of `basis`; fails if not invariant.
    pub fn restrict(&self, basis: &Matrix) -> Result<AModule> {
        let k = basis.cols();
        let f = self.field();
        let action = self
            .action
            .iter()
            .map(|m| {
                let img = m * basis;
                if k == 0 {
                    return Ok(Matrix::zeros(f, 0, 0));
                }
                basis.solve(&img)?.ok_or_else(|| Error::InvalidInput("subspace is not a submodule".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        AModule::new_unchecked(self.algebra.clone(), action)
    }

    /// Quotient by the submodule spanned by the columns of `basis`, with the
    /// projection matrix.
    pub fn quotient(&self, basis: &Matrix) -> Result<(AModule, Matrix)> {
        let q = Quotient::new(self.field(), self.dim, basis, &[]);
        let action = self.action.iter().map(|m| &(q.projection() * m) * q.section()).collect();
        Ok((AModule::new_unchecked(self.algebra.clone(), action)?, q.projection().clone()))
    }

    /// `g M g⁻¹`.
    pub fn conjugate(&self, g: &Matrix) -> Result<AModule> {
        let inv = g.inverse().ok_or_else(|| Error::InvalidInput("basis change is not invertible".into()))?;
        let action = self.action.iter().map(|m| &(g * m) * &inv).collect();
        AModule::new_unchecked(self.algebra.clone(), action)
    }

    /// Whether `f: self → other` commutes with the action.
    pub fn is_morphism_to(&self, other: &AModule, f: &Matrix) -> bool {
        f.shape() == (other.dim, self.dim)
            && self.action.iter().zip(&other.action).all(|(a, b)| &(f * a) == &(b * f))
    }
}

/// A module over the free algebra `k⟨X_1..X_n⟩`: one matrix per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeAlgModule {
    field: FieldSpec,
    dim: usize,
    gens: Vec<Matrix>,
}

impl FreeAlgModule {
    pub fn new(field: FieldSpec, dim: usize, gens: Vec<Matrix>) -> Result<FreeAlgModule> {
        for m in &gens {
            if m.shape() != (dim, dim) {
                return Err(Error::Dimension(format!("generator matrix {:?} for a module of dimension {dim}", m.shape())));
            }
            if m.field() != field {
                return Err(Error::FieldMismatch(m.field(), field));
            }
        }
        Ok(FreeAlgModule { field, dim, gens })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &Matrix {
        &self.gens[i]
    }

    /// The corresponding representation of `L_n`.
    pub fn to_rep(&self) -> QuiverRep {
        QuiverRep::new(Quiver::loops(self.gens.len()), self.field, vec![self.dim], self.gens.clone()).unwrap()
    }

    pub fn from_rep(rep: &QuiverRep) -> Result<FreeAlgModule> {
        if rep.quiver().loop_count().is_none() {
            return Err(Error::InvalidInput("representation is not over a one-vertex loop quiver".into()));
        }
        FreeAlgModule::new(rep.field(), rep.dims()[0], rep.maps().to_vec())
    }

    pub fn direct_sum(&self, other: &FreeAlgModule) -> Result<FreeAlgModule> {
        if self.gens.len() != other.gens.len() {
            return Err(Error::InvalidInput("direct sum over free algebras of different rank".into()));
        }
        let gens = self.gens.iter().zip(&other.gens).map(|(a, b)| Matrix::block_diag(&[a, b])).collect();
        FreeAlgModule::new(self.field, self.dim + other.dim, gens)
    }
}

/// Module over `kK_n` from a representation of `K_n`; the space is
/// `V(0) ⊕ V(1)` and each arrow maps the second summand to the first.
pub fn amodule_from_quiver_rep(rep: &QuiverRep) -> Result<AModule> {
    let n = rep
        .quiver()
        .kronecker_arrows()
        .ok_or_else(|| Error::InvalidInput("amodule_from_quiver_rep expects a Kronecker quiver representation".into()))?;
    let f = rep.field();
    let alg = FDAlgebra::kronecker(f, n);
    amodule_over(&alg, rep)
}

/// As [`amodule_from_quiver_rep`], reusing an existing `kK_n` handle.
pub fn amodule_over(alg: &AlgebraRef, rep: &QuiverRep) -> Result<AModule> {
    let n = rep.quiver().kronecker_arrows().ok_or_else(|| Error::InvalidInput("not a Kronecker representation".into()))?;
    if alg.preset() != Some(Preset::Kronecker(n)) {
        return Err(Error::InvalidInput(format!("algebra is not kK_{n}")));
    }
    let f = rep.field();
    let (d0, d1) = (rep.dims()[0], rep.dims()[1]);
    let d = d0 + d1;
    let mut action = Vec::with_capacity(n + 2);
    let mut e1 = Matrix::zeros(f, d, d);
    e1.set_block(0, 0, &Matrix::identity(f, d0));
    let mut e2 = Matrix::zeros(f, d, d);
    e2.set_block(d0, d0, &Matrix::identity(f, d1));
    action.push(e1);
    action.push(e2);
    for a in 0..n {
        let mut m = Matrix::zeros(f, d, d);
        m.set_block(0, d0, rep.map(a));
        action.push(m);
    }
    AModule::new_unchecked(alg.clone(), action)
}

/// Inverse of [`amodule_from_quiver_rep`]: vertex spaces are the images of the
/// idempotents (canonical bases).
pub fn quiver_rep_from_amodule(m: &AModule) -> Result<QuiverRep> {
    let Some(Preset::Kronecker(n)) = m.algebra().preset() else {
        return Err(Error::InvalidInput("module is not over a Kronecker path algebra".into()));
    };
    let f = m.field();
    let b0 = m.action_of(0).col_space();
    let b1 = m.action_of(1).col_space();
    let maps = (0..n)
        .map(|a| {
            let img = m.action_of(a + 2) * &b1;
            if b0.cols() == 0 {
                return Ok(Matrix::zeros(f, 0, b1.cols()));
            }
            b0.solve(&img)?.ok_or_else(|| Error::InvalidInput("arrow action leaves the sink component".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    QuiverRep::new(Quiver::kronecker(n), f, vec![b0.cols(), b1.cols()], maps)
}

/// `A e_y` for the idempotent with basis index `y`, as a module together with
/// its basis inside `A` (columns).
pub fn projective(algebra: &AlgebraRef, y: usize) -> Result<(AModule, Matrix)> {
    if !algebra.idempotents().contains(&y) && algebra.idempotents().len() > 0 {
        return Err(Error::InvalidInput(format!("{} is not a listed idempotent", algebra.label(y))));
    }
    let basis = algebra.right_mult(y).col_space();
    let m = AModule::regular(algebra).restrict(&basis)?;
    Ok((m, basis))
}

/// The radical series `X ⊇ JX ⊇ J²X ⊇ … ⊇ 0` as column bases.
pub fn radical_series(x: &AModule) -> Result<Vec<Matrix>> {
    let rad = x.algebra().radical()?;
    let f = x.field();
    let mut out = vec![Matrix::identity(f, x.dim())];
    loop {
        let cur = out.last().unwrap();
        if cur.cols() == 0 {
            break;
        }
        let parts: Vec<Matrix> = (0..rad.dim()).map(|j| &x.act(&rad.basis.column(j)) * cur).collect();
        let next = if parts.is_empty() {
            Matrix::zeros(f, x.dim(), 0)
        } else {
            Matrix::hstack(&parts.iter().collect::<Vec<_>>())?.col_space()
        };
        if next.cols() == cur.cols() {
            return Err(Error::InvalidInput("radical does not act nilpotently".into()));
        }
        out.push(next);
    }
    Ok(out)
}

/// Dimensions of the layers `J^iX / J^{i+1}X`.
pub fn radical_layers(x: &AModule) -> Result<Vec<usize>> {
    let s = radical_series(x)?;
    Ok(s.windows(2).map(|w| w[0].cols() - w[1].cols()).collect())
}

/// `{x : Jx = 0}` as a column basis.
pub fn socle(x: &AModule) -> Result<Matrix> {
    let rad = x.algebra().radical()?;
    if rad.dim() == 0 || x.dim() == 0 {
        return Ok(Matrix::identity(x.field(), x.dim()));
    }
    let parts: Vec<Matrix> = (0..rad.dim()).map(|j| x.act(&rad.basis.column(j))).collect();
    Ok(Matrix::vstack(&parts.iter().collect::<Vec<_>>())?.kernel_basis())
}

/// `X / JX` with the projection.
pub fn top(x: &AModule) -> Result<(AModule, Matrix)> {
    let s = radical_series(x)?;
    let rad = s.get(1).cloned().unwrap_or_else(|| Matrix::zeros(x.field(), x.dim(), 0));
    x.quotient(&rad)
}

#[derive(Serialize, Deserialize)]
pub(crate) struct AModuleJson {
    pub algebra: FDAlgebra,
    pub dim: usize,
    pub action: Vec<Vec<Vec<String>>>,
}

impl Serialize for AModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AModuleJson {
            algebra: (*self.algebra).clone(),
            dim: self.dim,
            action: self.action.iter().map(|m| m.to_string_rows()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = AModuleJson::deserialize(d)?;
        let f = j.algebra.field();
        let action = j
            .action
            .iter()
            .map(|rows| Matrix::from_string_rows(f, j.dim, j.dim, rows))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        AModule::new(Arc::new(j.algebra), action).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct FreeModuleJson {
    field: FieldSpec,
    dim: usize,
    generators: Vec<Vec<Vec<String>>>,
}

impl Serialize for FreeAlgModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FreeModuleJson { field: self.field, dim: self.dim, generators: self.gens.iter().map(|m| m.to_string_rows()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FreeAlgModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = FreeModuleJson::deserialize(d)?;
        let gens = j
            .generators
            .iter()
            .map(|rows| Matrix::from_string_rows(j.field, j.dim, j.dim, rows))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        FreeAlgModule::new(j.field, j.dim, gens).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{kron_l, kron_p};
    use crate::Poly;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn quiver_round_trip() {
        let p0 = kron_p(q(), 0);
        let m = amodule_from_quiver_rep(&p0).unwrap();
        assert_eq!(m.dim(), 1);
        assert!(m.action_of(0).is_identity());
        let l = kron_l(&Poly::from_ints(q(), &[-1, 1])).unwrap();
        let m = amodule_from_quiver_rep(&l).unwrap();
        m.check_homomorphism().unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(quiver_rep_from_amodule(&m).unwrap(), l);
    }

    #[test]
    fn generators_rebuild_action() {
        let a = FDAlgebra::kronecker(q(), 2);
        let m = amodule_from_quiver_rep(&kron_p(q(), 2)).unwrap();
        let back = AModule::from_generators(a, &m.generator_actions()).unwrap();
        assert_eq!(back, m);
        let t = FDAlgebra::truncated_poly(q(), 1);
        let bad = vec![Matrix::identity(q(), 1), Matrix::zeros(q(), 1, 1)];
        assert!(AModule::from_generators(t, &bad).is_err());
    }

    #[test]
    fn projective_socle_top() {
        let a = FDAlgebra::truncated_poly(q(), 1);
        let (p, _) = projective(&a, 0).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(socle(&p).unwrap().cols(), 2);
        assert_eq!(top(&p).unwrap().0.dim(), 1);
        assert_eq!(radical_layers(&p).unwrap(), vec![1, 2]);
        let k = FDAlgebra::kronecker(q(), 2);
        assert_eq!(projective(&k, 1).unwrap().0.dim(), 3);
        assert_eq!(projective(&k, 0).unwrap().0.dim(), 1);
    }
}
