//! Univariate polynomials over a [`FieldSpec`]: companion matrices,
//! characteristic polynomials and roots in the base field.

use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{c}X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "{c}X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(field: FieldSpec, coeffs: Vec<Scalar>) -> Poly {
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(field: FieldSpec, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.int(c)).collect())
    }

    pub fn zero(field: FieldSpec) -> Poly {
        Poly { field, coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// `X - c`.
    pub fn linear(c: &Scalar) -> Poly {
        let f = c.field();
        Poly::new(f, vec![-c, f.one()])
    }

    pub fn monomial(field: FieldSpec, deg: usize) -> Poly {
        let mut c = vec![field.zero(); deg + 1];
        c[deg] = field.one();
        Poly::new(field, c)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, c)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.coeffs[dd].inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * dc);
            }
            q[k] = c;
        }
        (Poly::new(self.field, q), Poly::new(self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `Q(X^n)`.
    pub fn compose_power(&self, n: usize) -> Poly {
        assert!(n >= 1);
        let mut c = vec![self.field.zero(); (self.coeffs.len().max(1) - 1) * n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * n] = a.clone();
        }
        Poly::new(self.field, c)
    }

    /// Evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let mut acc = Matrix::zeros(m.field(), m.rows(), m.cols());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &Matrix::identity(m.field(), m.rows()).scale(c);
        }
        acc
    }

    /// Companion matrix of a monic polynomial of degree `q ≥ 1`: ones on the
    /// subdiagonal, last column `-a_0, …, -a_{q-1}`.
    pub fn companion(&self) -> Matrix {
        assert!(self.is_monic() && self.degree().unwrap_or(0) >= 1, "companion needs a monic polynomial of degree ≥ 1");
        let q = self.degree().unwrap();
        let mut b = Matrix::zeros(self.field, q, q);
        for i in 1..q {
            b.set(i, i - 1, &self.field.one());
        }
        for i in 0..q {
            b.set(i, q - 1, &-&self.coeffs[i]);
        }
        b
    }

    /// Roots in the base field with multiplicities, sorted by their display
    /// string for determinism.
    pub fn roots(&self) -> Vec<(Scalar, usize)> {
        if self.is_zero() {
            return vec![];
        }
        let distinct = match self.field {
            FieldSpec::PrimeField { p } => roots_mod_p(&self.monic(), p),
            FieldSpec::Rationals => rational_roots(&self.monic()),
        };
        let mut out: Vec<(Scalar, usize)> = distinct
            .into_iter()
            .map(|r| {
                let mut m = 0;
                let lin = Poly::linear(&r);
                let mut f = self.clone();
                loop {
                    let (q, rem) = f.divrem(&lin);
                    if !rem.is_zero() {
                        break;
                    }
                    m += 1;
                    f = q;
                }
                (r, m)
            })
            .collect();
        out.sort_by_key(|(r, _)| r.to_string());
        out
    }

    /// Whether the polynomial splits into linear factors over the base field.
    pub fn splits(&self) -> bool {
        let total: usize = self.roots().iter().map(|(_, m)| m).sum();
        Some(total) == self.degree()
    }
}

/// Characteristic polynomial `det(X·I − m)` via Hessenberg reduction.
pub fn char_poly(m: &Matrix) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let field = m.field();
    let mut h = m.clone();
    // reduce to upper Hessenberg form by similarity
    for c in 0..n.saturating_sub(2) {
        let Some(piv) = (c + 1..n).find(|&i| !h.get(i, c).is_zero()) else {
            continue;
        };
        if piv != c + 1 {
            swap_rows(&mut h, piv, c + 1);
            swap_cols(&mut h, piv, c + 1);
        }
        let inv = h.get(c + 1, c).inv().unwrap();
        for i in c + 2..n {
            let f = &h.get(i, c) * &inv;
            if f.is_zero() {
                continue;
            }
            // row_i -= f row_{c+1}; col_{c+1} += f col_i
            for j in 0..n {
                let v = &h.get(i, j) - &(&f * &h.get(c + 1, j));
                h.set(i, j, &v);
            }
            for j in 0..n {
                let v = &h.get(j, c + 1) + &(&f * &h.get(j, i));
                h.set(j, c + 1, &v);
            }
        }
    }
    // p_k = char poly of leading k×k block
    let x = Poly::monomial(field, 1);
    let mut ps: Vec<Poly> = vec![Poly::constant(field.one())];
    for k in 1..=n {
        let mut pk = x.sub(&Poly::constant(h.get(k - 1, k - 1))).mul(&ps[k - 1]);
        let mut prod = field.one();
        for i in 1..k {
            prod = &prod * &h.get(k - i, k - i - 1);
            if prod.is_zero() {
                break;
            }
            let term = ps[k - i - 1].scale(&(&prod * &h.get(k - i - 1, k - 1)));
            pk = pk.sub(&term);
        }
        ps.push(pk);
    }
    ps.pop().unwrap()
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    for j in 0..m.cols() {
        let (x, y) = (m.get(a, j), m.get(b, j));
        m.set(a, j, &y);
        m.set(b, j, &x);
    }
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    for i in 0..m.rows() {
        let (x, y) = (m.get(i, a), m.get(i, b));
        m.set(i, a, &y);
        m.set(i, b, &x);
    }
}

const BRUTE_FORCE_LIMIT: u64 = 1 << 16;

fn roots_mod_p(f: &Poly, p: u64) -> Vec<Scalar> {
    let field = f.field();
    if f.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    if p <= BRUTE_FORCE_LIMIT {
        return field.elements().unwrap().filter(|x| f.eval(x).is_zero()).collect();
    }
    // product of the distinct linear factors: gcd(f, X^p − X)
    let x = Poly::monomial(field, 1);
    let xp = powmod(&x, p as u128, f);
    let g = f.gcd(&xp.sub(&x));
    let mut out = vec![];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    split_linear(&g, p, &mut rng, &mut out);
    out
}

fn powmod(base: &Poly, mut e: u128, m: &Poly) -> Poly {
    let mut acc = Poly::constant(base.field().one());
    let mut b = base.rem(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b).rem(m);
        }
        b = b.mul(&b).rem(m);
        e >>= 1;
    }
    acc
}

/// Equal-degree splitting of a squarefree product of distinct linear factors.
fn split_linear(g: &Poly, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Scalar>) {
    let field = g.field();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-&g.monic().coeff(0)),
        Some(_) => loop {
            let a = Scalar::Mod { v: rng.gen_range(0..p), p };
            let shifted = Poly::new(field, vec![a, field.one()]);
            let h = powmod(&shifted, ((p - 1) / 2) as u128, g).sub(&Poly::constant(field.one()));
            let d = g.gcd(&h);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && Some(dd) < g.degree() {
                split_linear(&d, p, rng, out);
                split_linear(&g.divrem(&d).0, p, rng, out);
                return;
            }
        },
    }
}

const DIVISOR_SEARCH_LIMIT: u64 = 1 << 20;

fn rational_roots(f: &Poly) -> Vec<Scalar> {
    let field = f.field();
    let mut f = f.clone();
    let mut out = vec![];
    if f.coeff(0).is_zero() {
        out.push(field.zero());
        while f.coeff(0).is_zero() && !f.is_zero() {
            f = f.divrem(&Poly::monomial(field, 1)).0;
        }
    }
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    // clear denominators
    let lcm = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.as_rational().unwrap().denom()));
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c.as_rational().unwrap() * &lcm).to_integer())
        .collect();
    let (Some(a0), Some(an)) = (small_divisors(&ints[0]), small_divisors(ints.last().unwrap())) else {
        return out;
    };
    let mut seen = std::collections::HashSet::new();
    for num in &a0 {
        for den in &an {
            for sign in [1i64, -1] {
                let r = Scalar::Rat(num::rational::BigRational::new(
                    BigInt::from(*num as i64 * sign),
                    BigInt::from(*den as i64),
                ));
                if seen.insert(r.clone()) && f.eval(&r).is_zero() {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// Positive divisors of `n`, or `None` when `n` is too large to factor by
/// trial division.
fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs();
    if n.is_zero() || n > BigInt::from(DIVISOR_SEARCH_LIMIT * DIVISOR_SEARCH_LIMIT) {
        return None;
    }
    let n: u64 = n.to_string().parse().ok()?;
    let mut ds = vec![];
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            ds.push(d);
            if d * d != n {
                ds.push(n / d);
            }
        }
        d += 1;
    }
    Some(ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    #[test]
    fn divrem_and_gcd() {
        let q = FieldSpec::Rationals;
        let a = Poly::from_ints(q, &[-1, 0, 1]);
        let b = Poly::from_ints(q, &[-1, 1]);
        let (quo, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(quo, Poly::from_ints(q, &[1, 1]));
        assert_eq!(a.gcd(&Poly::from_ints(q, &[1, 1])), Poly::from_ints(q, &[1, 1]));
    }

    #[test]
    fn char_poly_of_companion_is_the_polynomial() {
        let p = Poly::from_ints(f7(), &[3, 0, 5, 1]);
        assert_eq!(char_poly(&p.companion()), p);
        let q = Poly::from_ints(FieldSpec::Rationals, &[2, -3, 1]);
        assert_eq!(char_poly(&q.companion()), q);
    }

    #[test]
    fn char_poly_general() {
        let fld = FieldSpec::Rationals;
        let m = Matrix::from_ints(fld, 3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4]);
        let cp = char_poly(&m);
        assert_eq!(cp.coeff(2), fld.int(-9));
        assert_eq!(cp.coeff(0), -m.det());
        assert!(cp.eval_matrix(&m).is_zero());
    }

    #[test]
    fn roots_with_multiplicity() {
        let fld = FieldSpec::Rationals;
        let p = Poly::linear(&fld.int(1)).pow(2).mul(&Poly::linear(&Scalar::from_ratio(fld, -1, 2)));
        let r = p.roots();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&(fld.int(1), 2)));
        assert!(r.contains(&(Scalar::from_ratio(fld, -1, 2), 1)));
        assert!(!Poly::from_ints(fld, &[1, 0, 1]).splits());
        assert!(Poly::from_ints(f7(), &[6, 0, 1]).splits());
    }

    #[test]
    fn roots_large_prime() {
        let fld = FieldSpec::prime(1_000_003).unwrap();
        let p = Poly::linear(&fld.int(5)).mul(&Poly::linear(&fld.int(77))).mul(&Poly::from_ints(fld, &[1, 0, 1]));
        let r: Vec<Scalar> = p.roots().into_iter().map(|(x, _)| x).collect();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&fld.int(5)) && r.contains(&fld.int(77)));
    }

    #[test]
    fn compose_power() {
        let fld = f7();
        let q = Poly::from_ints(fld, &[-1, 1]);
        assert_eq!(q.compose_power(3), Poly::from_ints(fld, &[-1, 0, 0, 1]));
    }
}
