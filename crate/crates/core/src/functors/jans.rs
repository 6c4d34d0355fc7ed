//! Embedding of representations of a bipartite quiver into `mod A` along an
//! ideal `T ⊆ rad A` with `rad·T = T·rad = 0`.
//!
//! The quiver `K` has a receiver `y⁻` (index `y`) and an emitter `x⁺` (index
//! `|Q| + x`) per idempotent, and one arrow `x⁺ → y⁻` per basis element of
//! `e_x T e_y`. A representation `M` goes to the cokernel of
//! `⊕_x Ae_x ⊗ M(x⁺) → ⊕_y Ae_y ⊗ M(y⁻)`, `e_x ⊗ v ↦ Σ s ⊗ M(α)(v)`.

use crate::algebra::{AModule, AlgebraRef, FreeAlgModule, FreeBimodule, Ideal, LeftAlgebra, NcPoly, PolyMatrix};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Quotient};
use crate::quiver::{strip_simple_injectives, Quiver, QuiverRep};

#[derive(Clone, Debug)]
struct JansArrow {
    x: usize,
    y: usize,
    /// Element of `e_x T e_y`.
    s: Matrix,
}

#[derive(Clone, Debug)]
pub struct JansData {
    algebra: AlgebraRef,
    ideal: Ideal,
    quiver: Quiver,
    arrows: Vec<JansArrow>,
    /// Basis of `Ae_y` inside `A` and the module it spans, per point.
    projectives: Vec<(Matrix, AModule)>,
}

impl JansData {
    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn points(&self) -> usize {
        self.projectives.len()
    }

    /// The element of `T` attached to an arrow of the quiver.
    pub fn arrow_element(&self, arrow: usize) -> &Matrix {
        &self.arrows[arrow].s
    }

    /// `Ae_y` as a module.
    pub fn projective(&self, y: usize) -> &AModule {
        &self.projectives[y].1
    }
}

/// Validates `T` and builds the quiver. Algebras without listed idempotents are
/// treated as local, with the unit as the only point.
pub fn jans_build(a: &AlgebraRef, t: &Ideal) -> Result<JansData> {
    t.check(a)?;
    let rad = a.radical()?;
    if !rad.basis.spans(&t.basis) {
        return Err(Error::Precondition("the ideal is not contained in the radical".into()));
    }
    if !t.annihilated_by(a, &rad.basis) {
        return Err(Error::Precondition("the ideal is not annihilated by the radical on both sides".into()));
    }
    let idem: Vec<Matrix> = if a.idempotents().is_empty() {
        vec![a.unit().clone()]
    } else {
        a.idempotents().iter().map(|&i| a.basis_vector(i)).collect()
    };
    let q = idem.len();
    let mut arrows = Vec::new();
    let mut edges = Vec::new();
    for (x, ex) in idem.iter().enumerate() {
        for (y, ey) in idem.iter().enumerate() {
            let cols: Vec<Matrix> = (0..t.dim()).map(|i| a.mul(&a.mul(ex, &t.basis.column(i)), ey)).collect();
            if cols.is_empty() {
                continue;
            }
            let refs: Vec<&Matrix> = cols.iter().collect();
            let corner = Matrix::hstack(&refs)?.col_space();
            for j in 0..corner.cols() {
                arrows.push(JansArrow { x, y, s: corner.column(j) });
                edges.push((q + x, y));
            }
        }
    }
    let projectives = idem
        .iter()
        .map(|e| {
            let basis = a.right_of(e).col_space();
            let m = AModule::regular(a).restrict(&basis)?;
            Ok((basis, m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JansData { algebra: a.clone(), ideal: t.clone(), quiver: Quiver::new(2 * q, edges)?, arrows, projectives })
}

/// `P_M = ⊕_y Ae_y ⊗ M(y⁻)` with its action, and the image of `f_M`.
fn presentation(d: &JansData, m: &QuiverRep) -> Result<(Vec<Matrix>, Matrix, Vec<usize>)> {
    if m.quiver() != &d.quiver {
        return Err(Error::InvalidInput("representation is not over the quiver of this construction".into()));
    }
    let f = m.field();
    let q = d.points();
    let dims = m.dims();
    let sizes: Vec<usize> = (0..q).map(|y| d.projectives[y].0.cols() * dims[y]).collect();
    let offsets: Vec<usize> = sizes.iter().scan(0, |acc, s| {
        let o = *acc;
        *acc += s;
        Some(o)
    }).collect();
    let total: usize = sizes.iter().sum();
    let action = (0..d.algebra.dim())
        .map(|b| {
            let mut out = Matrix::zeros(f, total, total);
            for y in 0..q {
                let rho = d.projectives[y].1.action_of(b);
                out.set_block(offsets[y], offsets[y], &rho.tensor(&Matrix::identity(f, dims[y])));
            }
            out
        })
        .collect();
    let emitted: usize = (0..q).map(|x| dims[q + x]).sum();
    let mut image = Matrix::zeros(f, total, emitted);
    let mut col = 0;
    for x in 0..q {
        for v in 0..dims[q + x] {
            for (k, arrow) in d.arrows.iter().enumerate().filter(|(_, a)| a.x == x) {
                let y = arrow.y;
                if dims[y] == 0 {
                    continue;
                }
                let coords = d.projectives[y]
                    .0
                    .solve(&arrow.s)?
                    .ok_or_else(|| Error::InvalidInput("arrow element outside Ae_y".into()))?;
                let piece = coords.tensor(&m.map(k).column(v));
                for r in 0..piece.rows() {
                    let cur = image.get(offsets[y] + r, col);
                    image.set(offsets[y] + r, col, &(&cur + &piece.get(r, 0)));
                }
            }
            col += 1;
        }
    }
    Ok((action, image, offsets))
}

fn check_no_simple_injectives(m: &QuiverRep) -> Result<()> {
    let (_, mult) = strip_simple_injectives(m)?;
    if let Some(v) = mult.iter().position(|&r| r > 0) {
        return Err(Error::Precondition(format!("representation has a simple injective summand at vertex {v}")));
    }
    Ok(())
}

/// `F(M) = coker f_M`.
pub fn jans_apply(d: &JansData, m: &QuiverRep) -> Result<AModule> {
    check_no_simple_injectives(m)?;
    let (action, image, _) = presentation(d, m)?;
    let quo = Quotient::new(m.field(), image.rows(), &image, &[]);
    let out = action.iter().map(|a| &(quo.projection() * a) * quo.section()).collect();
    AModule::new(d.algebra.clone(), out)
}

/// `F(g)` for vertex maps `g: M → N`.
pub fn jans_morphism(d: &JansData, m: &QuiverRep, n: &QuiverRep, g: &[Matrix]) -> Result<Matrix> {
    let f = m.field();
    let (_, im_m, _) = presentation(d, m)?;
    let (_, im_n, _) = presentation(d, n)?;
    let qm = Quotient::new(f, im_m.rows(), &im_m, &[]);
    let qn = Quotient::new(f, im_n.rows(), &im_n, &[]);
    let blocks: Vec<Matrix> =
        (0..d.points()).map(|y| Matrix::identity(f, d.projectives[y].0.cols()).tensor(&g[y])).collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    let lifted = Matrix::block_diag(&refs);
    Ok(&(qn.projection() * &lifted) * qm.section())
}

/// `(V; X_1..X_n) ↦ (V, V; X_1, …, X_n, id)`, a representation of the
/// Kronecker quiver with `n + 1` arrows, which is the quiver of the truncated
/// construction for `k[X,Y]/(X,Y)^{n+1}` with `T = rad^n`.
pub fn gp_embed_module(m: &FreeAlgModule) -> Result<QuiverRep> {
    let f = m.field();
    let mut maps = m.gens().to_vec();
    maps.push(Matrix::identity(f, m.dim()));
    QuiverRep::new(Quiver::kronecker(maps.len()), f, vec![m.dim(), m.dim()], maps)
}

/// Explicit bimodule for `M ↦ F(gp_embed_module(M))` over a local algebra
/// with a single point: `A` in a basis starting with the arrow elements
/// `s_1..s_{n+1}`, where the generator `s_{n+1}` is replaced by
/// `-Σ_{j ≤ n} s_j X_j`.
pub fn gp_bimodule(d: &JansData) -> Result<FreeBimodule> {
    if d.points() != 1 {
        return Err(Error::Unsupported("explicit bimodule needs a local algebra".into()));
    }
    let a = &d.algebra;
    let f = a.field();
    let dim = a.dim();
    let k = d.arrows.len();
    let n = k - 1;
    let mut cols: Vec<Matrix> = d.arrows.iter().map(|ar| ar.s.clone()).collect();
    for i in 0..dim {
        let refs: Vec<&Matrix> = cols.iter().collect();
        let cur = Matrix::hstack(&refs)?;
        let e = a.basis_vector(i);
        if !cur.spans(&e) {
            cols.push(e);
        }
    }
    let refs: Vec<&Matrix> = cols.iter().collect();
    let p = Matrix::hstack(&refs)?;
    let p_inv = p.inverse().ok_or_else(|| Error::InvalidInput("arrow elements are dependent".into()))?;
    let keep: Vec<usize> = (0..dim).filter(|&i| i != n).collect();
    let pos = |i: usize| keep.iter().position(|&j| j == i);
    let action = (0..dim)
        .map(|b| {
            let rho = &(&p_inv * a.left_mult(b)) * &p;
            let mut pm = PolyMatrix::zeros(f, dim - 1, dim - 1);
            for (ci, &i) in keep.iter().enumerate() {
                let mut entries: Vec<NcPoly> = (0..dim - 1).map(|_| NcPoly::zero(f)).collect();
                for j in 0..dim {
                    let c = rho.get(j, i);
                    if c.is_zero() {
                        continue;
                    }
                    match pos(j) {
                        Some(r) => entries[r] = entries[r].add(&NcPoly::constant(c)),
                        None => {
                            for l in 0..n {
                                let r = pos(l).expect("arrow generators are kept");
                                entries[r] = entries[r].add(&NcPoly::var(f, l).scale(&(-&c)));
                            }
                        }
                    }
                }
                for (r, e) in entries.into_iter().enumerate() {
                    pm.set(r, ci, e);
                }
            }
            pm
        })
        .collect();
    FreeBimodule::new(f, LeftAlgebra::Fd(a.clone()), n, dim - 1, action)
}
