//! Seeded random objects for property checks and randomized algorithms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AModule, AlgebraRef};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use crate::quiver::{Quiver, QuiverRep};
use crate::Result;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over `F_p`; over ℚ a small integer in `[-5, 5]`.
pub fn scalar(field: FieldSpec, rng: &mut SeededRng) -> Scalar {
    match field {
        FieldSpec::Rationals => Scalar::from_i64(field, rng.gen_range(-5..=5)),
        FieldSpec::PrimeField { p } => Scalar::from_i64(field, rng.gen_range(0..p as i64)),
    }
}

pub fn matrix(field: FieldSpec, rows: usize, cols: usize, rng: &mut SeededRng) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| scalar(field, rng))
}

/// Random representation with the given dimension vector.
pub fn rep(quiver: &Quiver, field: FieldSpec, dims: &[usize], rng: &mut SeededRng) -> QuiverRep {
    let maps = quiver.arrows.iter().map(|&(s, t)| matrix(field, dims[t], dims[s], rng)).collect();
    QuiverRep::new(quiver.clone(), field, dims.to_vec(), maps).expect("shapes match")
}

/// Random dimension vector with entries in `0..=max`, not all zero.
pub fn dims(vertices: usize, max: usize, rng: &mut SeededRng) -> Vec<usize> {
    loop {
        let d: Vec<usize> = (0..vertices).map(|_| rng.gen_range(0..=max)).collect();
        if d.iter().any(|&x| x > 0) {
            return d;
        }
    }
}

/// Random module over an algebra: a random quotient of a free module of rank
/// `rank`, generated by the images of random vectors under the regular action.
pub fn amodule(algebra: &AlgebraRef, rank: usize, rng: &mut SeededRng) -> Result<AModule> {
    let free = (0..rank).try_fold(AModule::zero(algebra), |acc, _| acc.direct_sum(&AModule::regular(algebra)))?;
    let n = free.dim();
    if n == 0 {
        return Ok(free);
    }
    let seed = matrix(algebra.field(), n, 1, rng);
    let mut span = Matrix::zeros(algebra.field(), n, 0);
    for a in free.action() {
        let v = a * &seed;
        span = Matrix::hstack(&[&span, &v])?;
    }
    let (q, _) = free.quotient(&span.col_space())?;
    Ok(q)
}

/// A random element of the span of `basis`.
pub fn combination(basis: &[Matrix], field: FieldSpec, rng: &mut SeededRng) -> Option<Matrix> {
    let first = basis.first()?;
    let mut acc = Matrix::zeros(field, first.rows(), first.cols());
    for b in basis {
        acc = &acc + &b.scale(&scalar(field, rng));
    }
    Some(acc)
}
