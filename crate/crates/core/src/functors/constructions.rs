//! The individual embeddings and the families of modules they act on.

use std::collections::VecDeque;

use super::Category;
use crate::algebra::{
    quiver_rep_from_amodule, AModule, AlgebraRef, FDAlgebra, FreeAlgModule, FreeBimodule, LeftAlgebra, NcPoly,
    PolyMatrix, DenseBimodule,
};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::homology::{ext_bimodule_radical, hom_dim};
use crate::matrix::{Matrix, Quotient};
use crate::quiver::{Quiver, QuiverRep};

/// Receivers `p⁻` keep index `p`, emitters `p⁺` get `|Q| + p`. The arrows
/// `p⁺ → p⁻` come first, then one arrow `s⁺ → t⁻` per arrow `s → t`.
pub fn split_quiver(q: &Quiver) -> Quiver {
    let n = q.vertices;
    let mut arrows: Vec<(usize, usize)> = (0..n).map(|p| (n + p, p)).collect();
    arrows.extend(q.arrows.iter().map(|&(s, t)| (n + s, t)));
    Quiver::new(2 * n, arrows).expect("vertices in range")
}

pub(super) fn split_apply(q: &Quiver, m: &QuiverRep) -> Result<QuiverRep> {
    let f = m.field();
    let mut dims = m.dims().to_vec();
    dims.extend(m.dims().to_vec());
    let mut maps: Vec<Matrix> = m.dims().iter().map(|&d| Matrix::identity(f, d)).collect();
    maps.extend(m.maps().iter().cloned());
    QuiverRep::new(split_quiver(q), f, dims, maps)
}

/// Bimodule of the splitting functor `mod k⟨X_1..X_n⟩ → mod kK_{n+1}`: free
/// of rank 2 on a sink copy `m_1` and a source copy `m_2`, with `a_1 m_2 = m_1`
/// and `a_{j+1} m_2 = m_1 X_j`.
pub fn split_bimodule(n: usize, field: FieldSpec) -> FreeBimodule {
    let a = FDAlgebra::kronecker(field, n + 1);
    let one = || NcPoly::constant(field.one());
    let mut action = Vec::with_capacity(n + 3);
    let mut e1 = PolyMatrix::zeros(field, 2, 2);
    e1.set(0, 0, one());
    let mut e2 = PolyMatrix::zeros(field, 2, 2);
    e2.set(1, 1, one());
    action.push(e1);
    action.push(e2);
    let mut first = PolyMatrix::zeros(field, 2, 2);
    first.set(0, 1, one());
    action.push(first);
    for j in 0..n {
        let mut p = PolyMatrix::zeros(field, 2, 2);
        p.set(0, 1, NcPoly::var(field, j));
        action.push(p);
    }
    FreeBimodule::new(field, LeftAlgebra::Fd(a), n, 2, action).expect("split bimodule is multiplicative")
}

/// Generator names in input order: the `X_ij` (`i ≥ j + 2`) row by row, then
/// the `Y_ij` (`j ≥ i + 2`) row by row, indices from 1 to `n + 2`.
pub fn brenner_generator_labels(n: usize) -> Vec<String> {
    brenner_positions(n).into_iter().map(|(x, i, j)| format!("{}{}_{}", if x { "X" } else { "Y" }, i + 1, j + 1)).collect()
}

fn brenner_positions(n: usize) -> Vec<(bool, usize, usize)> {
    let m = n + 2;
    let mut out = Vec::with_capacity(n * (n + 1));
    for i in 2..m {
        for j in 0..i - 1 {
            out.push((true, i, j));
        }
    }
    for i in 0..n {
        for j in i + 2..m {
            out.push((false, i, j));
        }
    }
    out
}

/// `M ↦ M^{n+2}`, with `x` strictly lower block triangular (identities on the
/// first subdiagonal, `X_ij` below it) and `y` strictly upper (identities on
/// the first superdiagonal, `Y_ij` above it).
pub fn brenner_apply(n: usize, m: &FreeAlgModule) -> Result<FreeAlgModule> {
    if m.generator_count() != n * (n + 1) {
        return Err(Error::InvalidInput(format!("expected {} generators, got {}", n * (n + 1), m.generator_count())));
    }
    let f = m.field();
    let d = m.dim();
    let size = (n + 2) * d;
    let mut x = Matrix::zeros(f, size, size);
    let mut y = Matrix::zeros(f, size, size);
    let id = Matrix::identity(f, d);
    for i in 0..n + 1 {
        x.set_block((i + 1) * d, i * d, &id);
        y.set_block(i * d, (i + 1) * d, &id);
    }
    for (g, (is_x, i, j)) in brenner_positions(n).into_iter().enumerate() {
        let target = if is_x { &mut x } else { &mut y };
        target.set_block(i * d, j * d, m.gen(g));
    }
    FreeAlgModule::new(f, size, vec![x, y])
}

/// Data of the extension embedding `rep K_m → mod A` for modules `U`, `V`
/// with `Hom(U, V) = 0` and derivations `z_1..z_m` independent modulo the
/// radical of `Ext(V, U)`.
#[derive(Clone, Debug)]
pub struct ExtEmbedData {
    algebra: AlgebraRef,
    u: AModule,
    v: AModule,
    z: Vec<Vec<Matrix>>,
    output_rep: bool,
}

impl ExtEmbedData {
    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn u(&self) -> &AModule {
        &self.u
    }

    pub fn v(&self) -> &AModule {
        &self.v
    }

    pub fn derivations(&self) -> &[Vec<Matrix>] {
        &self.z
    }

    pub(super) fn target(&self) -> Category {
        match (self.output_rep, self.algebra.preset()) {
            (true, Some(crate::algebra::Preset::Kronecker(n))) => Category::Rep(Quiver::kronecker(n)),
            _ => Category::Mod(self.algebra.clone()),
        }
    }

    /// `W ↦ U ⊗ W(0) ⊕ V ⊗ W(1)`, `a ↦ [[u(a) ⊗ 1, Σ z_i(a) ⊗ W(i)], [0, v(a) ⊗ 1]]`.
    pub fn apply_module(&self, w: &QuiverRep) -> Result<AModule> {
        if w.quiver() != &Quiver::kronecker(self.z.len()) {
            return Err(Error::InvalidInput(format!("expected a representation of K_{}", self.z.len())));
        }
        let f = w.field();
        let (w0, w1) = (w.dims()[0], w.dims()[1]);
        let (du, dv) = (self.u.dim(), self.v.dim());
        let (top, size) = (du * w0, du * w0 + dv * w1);
        let action = (0..self.algebra.dim())
            .map(|b| {
                let mut e = Matrix::zeros(f, size, size);
                e.set_block(0, 0, &self.u.action_of(b).tensor(&Matrix::identity(f, w0)));
                e.set_block(top, top, &self.v.action_of(b).tensor(&Matrix::identity(f, w1)));
                let mut off = Matrix::zeros(f, top, dv * w1);
                for (i, z) in self.z.iter().enumerate() {
                    off = &off + &z[b].tensor(w.map(i));
                }
                e.set_block(0, top, &off);
                e
            })
            .collect();
        AModule::new(self.algebra.clone(), action)
    }

    pub(super) fn apply(&self, w: &QuiverRep) -> Result<super::Object> {
        let m = self.apply_module(w)?;
        Ok(if self.output_rep { super::Object::Rep(quiver_rep_from_amodule(&m)?) } else { super::Object::Alg(m) })
    }

    pub(super) fn apply_morphism(&self, x: &QuiverRep, y: &QuiverRep, g: &[Matrix]) -> Result<Vec<Matrix>> {
        let f = x.field();
        let h = Matrix::block_diag(&[
            &Matrix::identity(f, self.u.dim()).tensor(&g[0]),
            &Matrix::identity(f, self.v.dim()).tensor(&g[1]),
        ]);
        if !self.output_rep {
            return Ok(vec![h]);
        }
        let (mx, my) = (super::Object::Alg(self.apply_module(x)?), super::Object::Alg(self.apply_module(y)?));
        super::coerce_morphism(&mx, &my, &[h], &self.target())
    }

    /// Picks the first `count` extension classes of `Ext(V, U)` that are
    /// independent modulo the radical.
    pub fn from_modules(u: &AModule, v: &AModule, count: usize, output_rep: bool) -> Result<ExtEmbedData> {
        let rad = ext_bimodule_radical(v, u)?;
        let mut chosen: Vec<Vec<Matrix>> = Vec::new();
        for z in &rad.ext.representatives {
            if chosen.len() == count {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(z.clone());
            if rad.independent_mod_radical(&trial) {
                chosen = trial;
            }
        }
        if chosen.len() < count {
            return Err(Error::Precondition(format!(
                "Ext(V, U) has only {} classes independent modulo its radical, need {count}",
                chosen.len()
            )));
        }
        ext_embed_build(u, v, chosen, output_rep)
    }
}

/// Checks `Hom(U, V) = 0`, that each `z_i` is a derivation, and independence
/// modulo the radical of the `End(U)`-`End(V)`-bimodule `Ext(V, U)`.
pub fn ext_embed_build(u: &AModule, v: &AModule, z: Vec<Vec<Matrix>>, output_rep: bool) -> Result<ExtEmbedData> {
    if !crate::algebra::same_algebra(u.algebra(), v.algebra()) {
        return Err(Error::InvalidInput("U and V are modules over different algebras".into()));
    }
    if hom_dim(u, v)? != 0 {
        return Err(Error::Precondition("Hom(U, V) is not zero".into()));
    }
    for zi in &z {
        if zi.len() != u.algebra().dim() || zi.iter().any(|m| m.rows() != u.dim() || m.cols() != v.dim()) {
            return Err(Error::Dimension("derivation values must be dim U × dim V, one per basis element".into()));
        }
        crate::homology::extension_module(v, u, zi)
            .map_err(|_| Error::Precondition("a given map is not a derivation".into()))?;
    }
    if !ext_bimodule_radical(v, u)?.independent_mod_radical(&z) {
        return Err(Error::Precondition("derivations are dependent modulo the radical of Ext(V, U)".into()));
    }
    Ok(ExtEmbedData { algebra: u.algebra().clone(), u: u.clone(), v: v.clone(), z, output_rep })
}

/// `U` the simple at the sink, `V` the simple at the source of `K_n`, and
/// `z_i` the coefficient of the `i`-th arrow.
pub fn ext_embed_kronecker_simples(n: usize, field: FieldSpec) -> Result<ExtEmbedData> {
    let a = FDAlgebra::kronecker(field, n);
    let q = Quiver::kronecker(n);
    let u = crate::algebra::amodule_over(&a, &QuiverRep::simple(&q, field, 0))?;
    let v = crate::algebra::amodule_over(&a, &QuiverRep::simple(&q, field, 1))?;
    let z = (0..n)
        .map(|i| {
            (0..a.dim())
                .map(|b| Matrix::from_fn(field, 1, 1, |_, _| if b == i + 2 { field.one() } else { field.zero() }))
                .collect()
        })
        .collect();
    ext_embed_build(&u, &v, z, true)
}

/// The bimodule `kK_2`-`kK_2` of the self-embedding `F_n` of `rep K_2`:
/// basis `e1, λ, ρ, e2(1), …, e2(2n−1)`.
pub fn fn_kron_bimodule(n: usize, field: FieldSpec) -> Result<DenseBimodule> {
    if n == 0 {
        return Err(Error::InvalidInput("fn_kron needs n ≥ 1".into()));
    }
    let a = FDAlgebra::kronecker(field, 2);
    let dim = 2 * n + 2;
    let e2 = |j: usize| 2 + j;
    let unit = |rows: &[(usize, usize)]| {
        let mut m = Matrix::zeros(field, dim, dim);
        for &(r, c) in rows {
            m.set(r, c, &field.one());
        }
        m
    };
    let odd: Vec<(usize, usize)> = (1..=n).map(|j| (e2(2 * j - 1), e2(2 * j - 1))).collect();
    let left_e2 = unit(&odd);
    let left_e1 = &Matrix::identity(field, dim) - &left_e2;
    let mut s = vec![(1, e2(1))];
    s.extend((2..=n).map(|j| (e2(2 * j - 2), e2(2 * j - 1))));
    let mut r: Vec<(usize, usize)> = (1..n).map(|j| (e2(2 * j), e2(2 * j - 1))).collect();
    r.push((2, e2(2 * n - 1)));
    let left = vec![left_e1, left_e2, unit(&s), unit(&r)];
    let mut e2_part = vec![(1, 1), (2, 2)];
    e2_part.extend((1..2 * n).map(|j| (e2(j), e2(j))));
    let right = vec![unit(&[(0, 0)]), unit(&e2_part), unit(&[(1, 0)]), unit(&[(2, 0)])];
    DenseBimodule::new(a.clone(), a, left, right)
}

fn coords(basis: &Matrix, v: &Matrix) -> Result<Matrix> {
    if basis.cols() == 0 {
        return Ok(Matrix::zeros(v.field(), 0, v.cols()));
    }
    basis.solve(v)?.ok_or_else(|| Error::InvalidInput("vector outside the expected subspace".into()))
}

fn trunc_generators(a: &AlgebraRef) -> Result<(usize, usize)> {
    match a.preset() {
        Some(crate::algebra::Preset::Truncated(1)) => {
            let g = a.generators();
            Ok((g[0], g[1]))
        }
        _ => Err(Error::InvalidInput("expected a module over k[X,Y]/(X,Y)^2".into())),
    }
}

fn radical_and_top(m: &AModule) -> Result<(Matrix, Quotient)> {
    let (x, y) = trunc_generators(m.algebra())?;
    let rad = Matrix::hstack(&[m.action_of(x), m.action_of(y)])?.col_space();
    let q = Quotient::new(m.field(), m.dim(), &rad, &[]);
    Ok((rad, q))
}

/// `M ↦ (rad M, M / rad M)` with `X`, `Y` inducing the two arrows top → radical.
pub fn radical_top(m: &AModule) -> Result<QuiverRep> {
    let (x, y) = trunc_generators(m.algebra())?;
    let (rad, top) = radical_and_top(m)?;
    let lambda = coords(&rad, &(m.action_of(x) * top.section()))?;
    let rho = coords(&rad, &(m.action_of(y) * top.section()))?;
    QuiverRep::new(Quiver::kronecker(2), m.field(), vec![rad.cols(), top.dim()], vec![lambda, rho])
}

pub(super) fn radical_top_morphism(m: &AModule, n: &AModule, g: &Matrix) -> Result<Vec<Matrix>> {
    let (rm, tm) = radical_and_top(m)?;
    let (rn, tn) = radical_and_top(n)?;
    Ok(vec![coords(&rn, &(g * &rm))?, &(tn.projection() * g) * tm.section()])
}

/// `(V, W; λ, ρ) ↦ V ⊕ W` (source first) with `X`, `Y` acting through `λ`, `ρ`.
pub fn square_zero(a: &AlgebraRef, w: &QuiverRep) -> Result<AModule> {
    let (gx, gy) = trunc_generators(a)?;
    if w.quiver() != &Quiver::kronecker(2) {
        return Err(Error::InvalidInput("expected a representation of K_2".into()));
    }
    let f = w.field();
    let (d0, d1) = (w.dims()[0], w.dims()[1]);
    let size = d0 + d1;
    let action = (0..a.dim())
        .map(|b| {
            let mut e = Matrix::zeros(f, size, size);
            if b == gx || b == gy {
                e.set_block(d1, 0, w.map(if b == gx { 0 } else { 1 }));
            } else if &a.basis_vector(b) == a.unit() {
                e = Matrix::identity(f, size);
            }
            e
        })
        .collect();
    AModule::new(a.clone(), action)
}

/// `(V, T) ↦ (V, V; T, id)`.
pub fn kt_embed(dim: usize, t: &Matrix) -> Result<QuiverRep> {
    if t.rows() != dim || t.cols() != dim {
        return Err(Error::Dimension(format!("expected a {dim}×{dim} matrix")));
    }
    let f = t.field();
    QuiverRep::new(Quiver::kronecker(2), f, vec![dim, dim], vec![t.clone(), Matrix::identity(f, dim)])
}

/// `x = diag(λ, m_1, …, m_{n−1})`, `y` the cyclic permutation `e_1 → e_2 → … → e_n → e_1`.
pub fn klein_simple(lambda: &Scalar, m_set: &[Scalar]) -> Result<FreeAlgModule> {
    let f = lambda.field();
    if m_set.contains(lambda) {
        return Err(Error::Precondition(format!("λ = {lambda} lies in the excluded set")));
    }
    for (i, a) in m_set.iter().enumerate() {
        if m_set[..i].contains(a) {
            return Err(Error::Precondition(format!("excluded set repeats {a}")));
        }
    }
    let n = m_set.len() + 1;
    let diag: Vec<Scalar> = std::iter::once(lambda.clone()).chain(m_set.iter().cloned()).collect();
    let x = Matrix::from_fn(f, n, n, |i, j| if i == j { diag[i].clone() } else { f.zero() });
    let y = Matrix::from_fn(f, n, n, |i, j| if i == (j + 1) % n { f.one() } else { f.zero() });
    FreeAlgModule::new(f, n, vec![x, y])
}

/// A shortest unoriented cycle, as arrow indices.
fn shortest_cycle(q: &Quiver) -> Option<Vec<usize>> {
    if let Some(a) = q.arrows.iter().position(|&(s, t)| s == t) {
        return Some(vec![a]);
    }
    for (i, &(s, t)) in q.arrows.iter().enumerate() {
        if let Some(j) = q.arrows.iter().enumerate().skip(i + 1).position(|(_, &(u, v))| (u, v) == (s, t) || (u, v) == (t, s)) {
            return Some(vec![i, i + 1 + j]);
        }
    }
    let mut best: Option<Vec<usize>> = None;
    for (e, &(s, t)) in q.arrows.iter().enumerate() {
        // breadth-first search from t to s avoiding e
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; q.vertices];
        let mut seen = vec![false; q.vertices];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(x) = queue.pop_front() {
            for (a, &(u, v)) in q.arrows.iter().enumerate() {
                if a == e {
                    continue;
                }
                let y = if u == x { v } else if v == x { u } else { continue };
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, a));
                    queue.push_back(y);
                }
            }
        }
        if !seen[s] {
            continue;
        }
        let mut path = vec![e];
        let mut cur = s;
        while let Some((p, a)) = prev[cur] {
            path.push(a);
            cur = p;
        }
        if best.as_ref().map_or(true, |b| path.len() < b.len()) {
            best = Some(path);
        }
    }
    best
}

/// Pairwise Hom-orthogonal bricks on a quiver containing a cycle: `k^4` on a
/// shortest cycle with identities except `diag(M)` on its first arrow, and a
/// further arrow `β` touching the cycle carrying a 4-cycle permutation (both
/// ends on the cycle) or an all-ones vector (one end). The `i`-th brick uses
/// `M = {4i, …, 4i + 3}`.
pub fn wild_bricks(q: &Quiver, field: FieldSpec, count: usize) -> Result<Vec<QuiverRep>> {
    let cycle = shortest_cycle(q).ok_or_else(|| Error::Unsupported("tree case not implemented".into()))?;
    if let Some(size) = field.size() {
        if size < 4 * count as u64 {
            return Err(Error::FieldTooSmall(format!("need {} distinct scalars, field has {size}", 4 * count)));
        }
    }
    let mut on_cycle = vec![false; q.vertices];
    for &a in &cycle {
        let (s, t) = q.arrows[a];
        on_cycle[s] = true;
        on_cycle[t] = true;
    }
    let extra = |both: bool| {
        q.arrows.iter().enumerate().find(|(a, &(s, t))| {
            !cycle.contains(a) && if both { on_cycle[s] && on_cycle[t] } else { on_cycle[s] || on_cycle[t] }
        })
    };
    let (beta, &(y, z)) = extra(true)
        .or_else(|| extra(false))
        .ok_or_else(|| Error::Precondition("no arrow outside the cycle touches it; quiver is not wild".into()))?;
    let mut dims = vec![0; q.vertices];
    for v in 0..q.vertices {
        if on_cycle[v] {
            dims[v] = 4;
        }
    }
    if !on_cycle[y] {
        dims[y] = 1;
    }
    if !on_cycle[z] {
        dims[z] = 1;
    }
    let ones = |r: usize, c: usize| Matrix::from_fn(field, r, c, |_, _| field.one());
    (0..count)
        .map(|i| {
            let maps = q
                .arrows
                .iter()
                .enumerate()
                .map(|(a, &(s, t))| {
                    if a == cycle[0] {
                        Matrix::from_fn(field, 4, 4, |r, c| if r == c { field.int((4 * i + r) as i64) } else { field.zero() })
                    } else if cycle.contains(&a) {
                        Matrix::identity(field, 4)
                    } else if a == beta {
                        if dims[s] == 4 && dims[t] == 4 {
                            Matrix::from_fn(field, 4, 4, |r, c| if r == (c + 1) % 4 { field.one() } else { field.zero() })
                        } else {
                            ones(dims[t], dims[s])
                        }
                    } else {
                        Matrix::zeros(field, dims[t], dims[s])
                    }
                })
                .collect();
            QuiverRep::new(q.clone(), field, dims.clone(), maps)
        })
        .collect()
}
