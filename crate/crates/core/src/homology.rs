//! Hom and Ext spaces, endomorphism algebras and the structural tests built on
//! them: bricks, indecomposability, decomposition, isomorphism and simplicity.
//!
//! Every module kind is handled through a quiver view: a [`QuiverRep`] is its
//! own view, an [`AModule`] is viewed as one vertex with a loop per algebra
//! generator, and a [`FreeAlgModule`] as a representation of the loop quiver.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{AModule, AlgebraRef, FDAlgebra, FreeAlgModule};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{Matrix, Quotient};
use crate::poly::char_poly;
use crate::quiver::{spin_subrep, DimVector, Quiver, QuiverRep, RepMorphism};
use crate::sample;

/// Default number of random trials in randomized steps.
pub const DEFAULT_TRIALS: usize = 32;

/// Default cap on the number of vectors enumerated by exhaustive searches.
pub const DEFAULT_BUDGET: u128 = 4096;

/// Enumeration budget, overridable through `QUIVERKIT_BUDGET`.
pub fn enumeration_budget() -> u128 {
    std::env::var("QUIVERKIT_BUDGET").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Seed and trial count for randomized steps.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    pub trials: usize,
}

impl Default for Options {
    fn default() -> Options {
        Options { seed: 0, trials: DEFAULT_TRIALS }
    }
}

impl Options {
    pub fn with_seed(seed: u64) -> Options {
        Options { seed, ..Options::default() }
    }
}

/// A module kind with a quiver view.
pub trait Module: Clone {
    fn field(&self) -> FieldSpec;
    fn view(&self) -> QuiverRep;
    /// Rebuilds a module of the same kind (and over the same algebra) from a view.
    fn from_view(&self, rep: &QuiverRep) -> Result<Self>;
    fn same_category(&self, other: &Self) -> bool;
}

impl Module for QuiverRep {
    fn field(&self) -> FieldSpec {
        QuiverRep::field(self)
    }

    fn view(&self) -> QuiverRep {
        self.clone()
    }

    fn from_view(&self, rep: &QuiverRep) -> Result<QuiverRep> {
        Ok(rep.clone())
    }

    fn same_category(&self, other: &QuiverRep) -> bool {
        self.quiver() == other.quiver() && QuiverRep::field(self) == QuiverRep::field(other)
    }
}

impl Module for AModule {
    fn field(&self) -> FieldSpec {
        AModule::field(self)
    }

    fn view(&self) -> QuiverRep {
        let gens = self.generator_actions();
        QuiverRep::new(Quiver::loops(gens.len()), AModule::field(self), vec![self.dim()], gens).expect("square actions")
    }

    fn from_view(&self, rep: &QuiverRep) -> Result<AModule> {
        AModule::from_generators(self.algebra().clone(), rep.maps())
    }

    fn same_category(&self, other: &AModule) -> bool {
        crate::algebra::same_algebra(self.algebra(), other.algebra())
    }
}

impl Module for FreeAlgModule {
    fn field(&self) -> FieldSpec {
        FreeAlgModule::field(self)
    }

    fn view(&self) -> QuiverRep {
        self.to_rep()
    }

    fn from_view(&self, rep: &QuiverRep) -> Result<FreeAlgModule> {
        FreeAlgModule::from_rep(rep)
    }

    fn same_category(&self, other: &FreeAlgModule) -> bool {
        self.generator_count() == other.generator_count() && FreeAlgModule::field(self) == FreeAlgModule::field(other)
    }
}

fn check_pair<M: Module>(m: &M, n: &M) -> Result<()> {
    if m.field() != n.field() {
        return Err(Error::FieldMismatch(m.field(), n.field()));
    }
    if !m.same_category(n) {
        return Err(Error::InvalidInput("modules live over different quivers or algebras".into()));
    }
    Ok(())
}

/// Linear map `(f_x) ↦ (f_t M(a) − N(a) f_s)` in row-major coordinates, with
/// the offsets of each vertex block of unknowns.
fn hom_system(m: &QuiverRep, n: &QuiverRep) -> (Matrix, Vec<usize>, Vec<usize>) {
    let f = m.field();
    let q = m.quiver();
    let mut var_off = vec![0];
    for x in 0..q.vertices {
        var_off.push(var_off[x] + n.dims()[x] * m.dims()[x]);
    }
    let mut row_off = vec![0];
    for &(s, t) in &q.arrows {
        let last = *row_off.last().unwrap();
        row_off.push(last + n.dims()[t] * m.dims()[s]);
    }
    let mut sys = Matrix::zeros(f, *row_off.last().unwrap(), var_off[q.vertices]);
    for (a, &(s, t)) in q.arrows.iter().enumerate() {
        let (r0, r1) = (row_off[a], row_off[a + 1]);
        if r0 == r1 {
            continue;
        }
        let post = Matrix::identity(f, n.dims()[t]).tensor(&m.map(a).transpose());
        let pre = n.map(a).tensor(&Matrix::identity(f, m.dims()[s]));
        let add = |sys: &mut Matrix, c0: usize, b: &Matrix| {
            if b.cols() == 0 {
                return;
            }
            let cur = sys.submatrix(r0, r1, c0, c0 + b.cols());
            sys.set_block(r0, c0, &(&cur + b));
        };
        add(&mut sys, var_off[t], &post);
        add(&mut sys, var_off[s], &-&pre);
    }
    (sys, var_off, row_off)
}

fn unpack_vertex_maps(v: &Matrix, m: &QuiverRep, n: &QuiverRep, var_off: &[usize]) -> Vec<Matrix> {
    (0..m.quiver().vertices)
        .map(|x| Matrix::unvec_rows(&v.submatrix(var_off[x], var_off[x + 1], 0, 1), n.dims()[x], m.dims()[x]))
        .collect()
}

fn hom_views(m: &QuiverRep, n: &QuiverRep) -> Vec<RepMorphism> {
    let (sys, var_off, _) = hom_system(m, n);
    let k = sys.kernel_basis();
    (0..k.cols())
        .map(|j| RepMorphism::new_unchecked(m.clone(), n.clone(), unpack_vertex_maps(&k.column(j), m, n, &var_off)))
        .collect()
}

/// A basis of `Hom(m, n)`, as morphisms between the quiver views.
pub fn hom_basis<M: Module>(m: &M, n: &M) -> Result<Vec<RepMorphism>> {
    check_pair(m, n)?;
    Ok(hom_views(&m.view(), &n.view()))
}

pub fn hom_dim<M: Module>(m: &M, n: &M) -> Result<usize> {
    check_pair(m, n)?;
    let (sys, var_off, _) = hom_system(&m.view(), &n.view());
    Ok(var_off.last().copied().unwrap_or(0) - sys.rank())
}

/// Extensions of quiver representations: cokernel representatives, one
/// matrix per arrow.
#[derive(Clone, Debug, Serialize)]
pub struct ExtQuiver {
    pub dim: usize,
    pub cocycles: Vec<Vec<Matrix>>,
}

/// `Ext¹(m, n)` as the cokernel of the standard map; a cocycle `z` gives the
/// extension `0 → n → E → m → 0` from [`extension_rep`].
pub fn ext_quiver(m: &QuiverRep, n: &QuiverRep) -> Result<ExtQuiver> {
    check_pair(m, n)?;
    let (sys, _, row_off) = hom_system(m, n);
    let rows = sys.rows();
    let q = Quotient::new(m.field(), rows, &sys.col_space(), &[]);
    let sec = q.section();
    let cocycles = (0..q.dim())
        .map(|j| {
            m.quiver()
                .arrows
                .iter()
                .enumerate()
                .map(|(a, &(s, t))| Matrix::unvec_rows(&sec.submatrix(row_off[a], row_off[a + 1], j, j + 1), n.dims()[t], m.dims()[s]))
                .collect()
        })
        .collect();
    Ok(ExtQuiver { dim: q.dim(), cocycles })
}

pub fn ext_quiver_dim(m: &QuiverRep, n: &QuiverRep) -> Result<usize> {
    check_pair(m, n)?;
    let (sys, _, _) = hom_system(m, n);
    Ok(sys.rows() - sys.rank())
}

/// Middle term `n ⊕ m` with arrows `[[N(a), z(a)], [0, M(a)]]`.
pub fn extension_rep(m: &QuiverRep, n: &QuiverRep, z: &[Matrix]) -> Result<QuiverRep> {
    check_pair(m, n)?;
    let dims: DimVector = n.dims().iter().zip(m.dims()).map(|(a, b)| a + b).collect();
    let mut maps = vec![];
    for (a, &(s, t)) in m.quiver().arrows.iter().enumerate() {
        let mut e = Matrix::zeros(m.field(), dims[t], dims[s]);
        e.set_block(0, 0, n.map(a));
        e.set_block(0, n.dims()[s], &z[a]);
        e.set_block(n.dims()[t], n.dims()[s], m.map(a));
        maps.push(e);
    }
    QuiverRep::new(m.quiver().clone(), m.field(), dims, maps)
}

/// `Ext¹(V, U)` as derivations modulo inner derivations.
#[derive(Clone, Debug, Serialize)]
pub struct ExtSpace {
    pub dim: usize,
    /// One `dim U × dim V` matrix per algebra basis element, per class.
    pub representatives: Vec<Vec<Matrix>>,
    #[serde(skip)]
    cocycles: Matrix,
    #[serde(skip)]
    boundaries: Matrix,
    #[serde(skip)]
    shape: (usize, usize, usize),
}

impl ExtSpace {
    pub fn derivation_dim(&self) -> usize {
        self.cocycles.cols()
    }

    pub fn inner_dim(&self) -> usize {
        self.boundaries.cols()
    }

    fn pack(&self, z: &[Matrix]) -> Matrix {
        let parts: Vec<Matrix> = z.iter().map(|m| m.vec_rows()).collect();
        Matrix::vstack(&parts.iter().collect::<Vec<_>>()).expect("matching shapes")
    }

    fn unpack(&self, v: &Matrix) -> Vec<Matrix> {
        let (da, du, dv) = self.shape;
        (0..da).map(|i| Matrix::unvec_rows(&v.submatrix(i * du * dv, (i + 1) * du * dv, 0, 1), du, dv)).collect()
    }

    /// Whether the given derivations are linearly independent modulo inner derivations.
    pub fn independent(&self, zs: &[Vec<Matrix>]) -> bool {
        independent_mod(&self.boundaries, &zs.iter().map(|z| self.pack(z)).collect::<Vec<_>>())
    }
}

fn independent_mod(sub: &Matrix, vs: &[Matrix]) -> bool {
    if vs.is_empty() {
        return true;
    }
    let base = sub.rank();
    let mut all: Vec<&Matrix> = vec![sub];
    all.extend(vs);
    Matrix::hstack(&all).expect("common ambient").rank() == base + vs.len()
}

fn check_same_algebra(v: &AModule, u: &AModule) -> Result<()> {
    check_pair(v, u)
}

/// Derivations `z: A → Hom(V, U)` with `z(ab) = u(a) z(b) + z(a) v(b)`,
/// modulo inner derivations `a ↦ u(a) f − f v(a)`.
pub fn ext_derivations(v: &AModule, u: &AModule) -> Result<ExtSpace> {
    check_same_algebra(v, u)?;
    let alg = v.algebra();
    let f = alg.field();
    let (da, du, dv) = (alg.dim(), u.dim(), v.dim());
    let blk = du * dv;
    let gens = alg.generators();
    let mut sys = Matrix::zeros(f, (gens.len() * da + 1) * blk, da * blk);
    let iu = Matrix::identity(f, du);
    let iv = Matrix::identity(f, dv);
    let mut row = 0;
    for &g in &gens {
        for j in 0..da {
            // Σ_k c^k_{gj} z_k − u(g) z_j − z_g v(b_j)
            for (k, c) in alg.structure_constants(g, j) {
                let cur = sys.submatrix(row, row + blk, k * blk, (k + 1) * blk);
                sys.set_block(row, k * blk, &(&cur + &Matrix::identity(f, blk).scale(c)));
            }
            let cur = sys.submatrix(row, row + blk, j * blk, (j + 1) * blk);
            sys.set_block(row, j * blk, &(&cur - &u.action_of(g).tensor(&iv)));
            let cur = sys.submatrix(row, row + blk, g * blk, (g + 1) * blk);
            sys.set_block(row, g * blk, &(&cur - &iu.tensor(&v.action_of(j).transpose())));
            row += blk;
        }
    }
    // z(1) = 0
    let unit = alg.unit();
    for k in 0..da {
        let c = unit.get(k, 0);
        if !c.is_zero() {
            sys.set_block(row, k * blk, &Matrix::identity(f, blk).scale(&c));
        }
    }
    let cocycles = sys.kernel_basis();
    let mut inner = Matrix::zeros(f, da * blk, blk);
    for i in 0..da {
        let b = &u.action_of(i).tensor(&iv) - &iu.tensor(&v.action_of(i).transpose());
        inner.set_block(i * blk, 0, &b);
    }
    let boundaries = inner.col_space();
    let joined = Matrix::hstack(&[&boundaries, &cocycles])?;
    let (_, piv) = joined.rref_pivots();
    let reps: Vec<usize> = piv.into_iter().filter(|&p| p >= boundaries.cols()).map(|p| p - boundaries.cols()).collect();
    let mut space = ExtSpace { dim: reps.len(), representatives: vec![], cocycles, boundaries, shape: (da, du, dv) };
    space.representatives = reps.iter().map(|&j| space.unpack(&space.cocycles.column(j))).collect();
    Ok(space)
}

/// Middle term of the extension given by a derivation: `U ⊕ V` with action
/// `[[u(a), z(a)], [0, v(a)]]`.
pub fn extension_module(v: &AModule, u: &AModule, z: &[Matrix]) -> Result<AModule> {
    check_same_algebra(v, u)?;
    let f = v.field();
    let (du, dv) = (u.dim(), v.dim());
    let action = (0..v.algebra().dim())
        .map(|i| {
            let mut e = Matrix::zeros(f, du + dv, du + dv);
            e.set_block(0, 0, u.action_of(i));
            e.set_block(0, du, &z[i]);
            e.set_block(du, du, v.action_of(i));
            e
        })
        .collect();
    AModule::new(v.algebra().clone(), action)
}

/// `Ext(V, U)` together with the radical `J = rad End(U)·Ext + Ext·rad End(V)`
/// of its bimodule structure.
#[derive(Clone, Debug)]
pub struct ExtRadical {
    pub ext: ExtSpace,
    /// Dimension of `J` inside `Ext`.
    pub radical_dim: usize,
    span: Matrix,
}

impl ExtRadical {
    /// Dimension of `Ext / J`.
    pub fn top_dim(&self) -> usize {
        self.ext.dim - self.radical_dim
    }

    /// Whether the classes of the derivations are independent in `Ext / J`.
    pub fn independent_mod_radical(&self, zs: &[Vec<Matrix>]) -> bool {
        independent_mod(&self.span, &zs.iter().map(|z| self.ext.pack(z)).collect::<Vec<_>>())
    }
}

pub fn ext_bimodule_radical(v: &AModule, u: &AModule) -> Result<ExtRadical> {
    let ext = ext_derivations(v, u)?;
    let eu = end_algebra(u)?;
    let ev = end_algebra(v)?;
    let ru = eu.radical_elements()?;
    let rv = ev.radical_elements()?;
    let mut cols = vec![ext.boundaries.clone()];
    for j in 0..ext.cocycles.cols() {
        let z = ext.unpack(&ext.cocycles.column(j));
        for phi in &ru {
            cols.push(ext.pack(&z.iter().map(|zi| &phi[0] * zi).collect::<Vec<_>>()));
        }
        for psi in &rv {
            cols.push(ext.pack(&z.iter().map(|zi| zi * &psi[0]).collect::<Vec<_>>()));
        }
    }
    let span = Matrix::hstack(&cols.iter().collect::<Vec<_>>())?.col_space();
    let span = if span.cols() == 0 { Matrix::zeros(v.field(), ext.boundaries.rows(), 0) } else { span };
    let radical_dim = span.cols() - ext.boundaries.cols();
    Ok(ExtRadical { ext, radical_dim, span })
}

/// `End(m)` as an algebra, with the identity as basis element 0.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub algebra: AlgebraRef,
    /// Vertex maps of each basis element.
    pub basis: Vec<Vec<Matrix>>,
}

impl EndAlgebra {
    fn radical_elements(&self) -> Result<Vec<Vec<Matrix>>> {
        let rad = self.algebra.radical()?;
        Ok((0..rad.basis.cols()).map(|j| self.element(&rad.basis.column(j))).collect())
    }

    /// Vertex maps of the element with the given coordinates.
    pub fn element(&self, coords: &Matrix) -> Vec<Matrix> {
        let mut acc: Vec<Matrix> = self.basis[0].iter().map(|m| Matrix::zeros(m.field(), m.rows(), m.cols())).collect();
        for (i, b) in self.basis.iter().enumerate() {
            let c = coords.get(i, 0);
            if !c.is_zero() {
                for (a, m) in acc.iter_mut().zip(b) {
                    *a = &*a + &m.scale(&c);
                }
            }
        }
        acc
    }
}

fn flatten(maps: &[Matrix]) -> Matrix {
    let parts: Vec<Matrix> = maps.iter().map(|m| m.vec_rows()).collect();
    let field = maps.first().map(|m| m.field()).unwrap_or(FieldSpec::Rationals);
    if parts.is_empty() {
        return Matrix::zeros(field, 0, 1);
    }
    Matrix::vstack(&parts.iter().collect::<Vec<_>>()).expect("column vectors")
}

pub fn end_algebra<M: Module>(m: &M) -> Result<EndAlgebra> {
    let v = m.view();
    let f = v.field();
    if v.total_dim() == 0 {
        return Err(Error::InvalidInput("the zero module has the zero endomorphism ring".into()));
    }
    let homs = hom_views(&v, &v);
    let id: Vec<Matrix> = v.dims().iter().map(|&d| Matrix::identity(f, d)).collect();
    let mut cands = vec![flatten(&id)];
    cands.extend(homs.iter().map(|h| flatten(h.maps())));
    let joined = Matrix::hstack(&cands.iter().collect::<Vec<_>>())?;
    let (_, piv) = joined.rref_pivots();
    let mut basis = vec![id.clone()];
    basis.extend(piv.iter().filter(|&&p| p > 0).map(|&p| homs[p - 1].maps().to_vec()));
    let vecs = joined.select_cols(&piv);
    let d = basis.len();
    let mut products = vec![];
    for a in &basis {
        for b in &basis {
            let prod: Vec<Matrix> = a.iter().zip(b).map(|(x, y)| x * y).collect();
            products.push(flatten(&prod));
        }
    }
    let rhs = Matrix::hstack(&products.iter().collect::<Vec<_>>())?;
    let coords = vecs.solve(&rhs)?.ok_or_else(|| Error::InvalidInput("endomorphisms not closed under composition".into()))?;
    let table = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).filter_map(|k| Some((k, coords.get(k, i * d + j))).filter(|(_, c)| !c.is_zero())).collect())
                .collect()
        })
        .collect();
    let labels = (0..d).map(|i| if i == 0 { "id".to_string() } else { format!("f{i}") }).collect();
    let algebra = FDAlgebra::new(f, labels, table, vec![(0, f.one())], vec![], vec![], None)?;
    Ok(EndAlgebra { algebra: Arc::new(algebra), basis })
}

pub fn is_brick<M: Module>(m: &M) -> Result<bool> {
    Ok(m.view().total_dim() > 0 && hom_dim(m, m)? == 1)
}

/// A summand of a module together with its inclusion (vertex maps of the view).
#[derive(Clone, Debug)]
pub struct Summand<M> {
    pub module: M,
    pub inclusion: Vec<Matrix>,
}

/// `ker φ^N ⊕ im φ^N` for an endomorphism `φ` (vertex maps), `N = dim m`;
/// `None` if one side is zero.
pub fn fitting_split<M: Module>(m: &M, phi: &[Matrix]) -> Result<Option<(Summand<M>, Summand<M>)>> {
    let v = m.view();
    let Some((a, b)) = fitting_split_view(&v, phi)? else {
        return Ok(None);
    };
    Ok(Some((
        Summand { module: m.from_view(&a.0)?, inclusion: a.1 },
        Summand { module: m.from_view(&b.0)?, inclusion: b.1 },
    )))
}

type ViewSummand = (QuiverRep, Vec<Matrix>);

fn fitting_split_view(v: &QuiverRep, phi: &[Matrix]) -> Result<Option<(ViewSummand, ViewSummand)>> {
    let n = v.total_dim() as u32;
    let powers: Vec<Matrix> = phi.iter().map(|p| p.pow(n)).collect();
    let kers: Vec<Matrix> = powers.iter().map(|p| p.kernel_basis()).collect();
    let kdim: usize = kers.iter().map(|k| k.cols()).sum();
    if kdim == 0 || kdim == v.total_dim() {
        return Ok(None);
    }
    let ims: Vec<Matrix> = powers.iter().map(|p| p.col_space()).collect();
    let (ks, ki) = v.restrict(&kers)?;
    let (is, ii) = v.restrict(&ims)?;
    Ok(Some(((ks, ki.maps().to_vec()), (is, ii.maps().to_vec()))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Indecomposability {
    Zero,
    Brick,
    /// `End = k·id ⊕ N` with `N` a nilpotent ideal.
    Local { end_dim: usize },
    Decomposable { first: DimVector, second: DimVector },
}

impl Indecomposability {
    pub fn holds(&self) -> bool {
        matches!(self, Indecomposability::Brick | Indecomposability::Local { .. })
    }
}

pub fn is_indecomposable<M: Module>(m: &M, opts: Options) -> Result<Indecomposability> {
    let v = m.view();
    Ok(match find_split(&v, opts)? {
        Split::Zero => Indecomposability::Zero,
        Split::Brick => Indecomposability::Brick,
        Split::Local(end_dim) => Indecomposability::Local { end_dim },
        Split::Found(a, b) => Indecomposability::Decomposable { first: a.0.dims().to_vec(), second: b.0.dims().to_vec() },
    })
}

enum Split {
    Zero,
    Brick,
    Local(usize),
    Found(ViewSummand, ViewSummand),
}

fn total_matrix(v: &QuiverRep, maps: &[Matrix]) -> Matrix {
    let _ = v;
    Matrix::block_diag(&maps.iter().collect::<Vec<_>>())
}

/// Tries `φ − λ` for each eigenvalue `λ` of `φ` in the field. Returns the
/// split if one is found, otherwise the nilpotent shift (if `φ` has a single
/// eigenvalue in the field) or `None` (no eigenvalue in the field).
fn try_element(v: &QuiverRep, phi: &[Matrix]) -> Result<std::result::Result<(ViewSummand, ViewSummand), Option<Vec<Matrix>>>> {
    let t = total_matrix(v, phi);
    let roots = char_poly(&t).roots();
    let n = v.total_dim();
    for (lambda, mult) in &roots {
        let shifted: Vec<Matrix> = phi.iter().map(|p| p - &Matrix::identity(p.field(), p.rows()).scale(lambda)).collect();
        if let Some(s) = fitting_split_view(v, &shifted)? {
            return Ok(Ok(s));
        }
        if *mult == n {
            return Ok(Err(Some(shifted)));
        }
    }
    Ok(Err(None))
}

fn find_split(v: &QuiverRep, opts: Options) -> Result<Split> {
    let n = v.total_dim();
    if n == 0 {
        return Ok(Split::Zero);
    }
    let f = v.field();
    let homs = hom_views(v, v);
    if homs.len() == 1 {
        return Ok(Split::Brick);
    }
    let basis: Vec<Vec<Matrix>> = homs.iter().map(|h| h.maps().to_vec()).collect();
    let mut shifts = vec![];
    let mut unsplit = false;
    for phi in &basis {
        match try_element(v, phi)? {
            Ok((a, b)) => return Ok(Split::Found(a, b)),
            Err(Some(s)) => shifts.push(s),
            Err(None) => unsplit = true,
        }
    }
    let mut rng = sample::rng(opts.seed);
    for _ in 0..opts.trials {
        let phi = random_endo(&basis, f, &mut rng);
        if let Ok((a, b)) = try_element(v, &phi)? {
            return Ok(Split::Found(a, b));
        }
    }
    if !unsplit && is_nil_ideal_of_codim_one(&shifts, homs.len())? {
        return Ok(Split::Local(homs.len()));
    }
    // exhaustive search over End when it is small enough
    if let Some(q) = f.size() {
        let total = (q as u128).checked_pow(homs.len() as u32);
        if total.is_some_and(|t| t <= enumeration_budget()) {
            for coeffs in enumerate_vectors(f, homs.len()) {
                let phi = combine_maps(&basis, &coeffs);
                if let Ok((a, b)) = try_element(v, &phi)? {
                    return Ok(Split::Found(a, b));
                }
            }
        }
    }
    Err(Error::NotSplit(f))
}

fn random_endo(basis: &[Vec<Matrix>], f: FieldSpec, rng: &mut sample::SeededRng) -> Vec<Matrix> {
    let coeffs: Vec<Scalar> = basis.iter().map(|_| sample::scalar(f, rng)).collect();
    combine_maps(basis, &coeffs)
}

fn combine_maps(basis: &[Vec<Matrix>], coeffs: &[Scalar]) -> Vec<Matrix> {
    let mut acc: Vec<Matrix> = basis[0].iter().map(|m| Matrix::zeros(m.field(), m.rows(), m.cols())).collect();
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (a, m) in acc.iter_mut().zip(b) {
            *a = &*a + &m.scale(c);
        }
    }
    acc
}

/// All vectors of `F_q^n` as coordinate lists.
pub(crate) fn enumerate_vectors(f: FieldSpec, n: usize) -> impl Iterator<Item = Vec<Scalar>> {
    let q = f.size().expect("finite field") as u64;
    let total = q.pow(n as u32);
    (0..total).map(move |mut k| {
        (0..n)
            .map(|_| {
                let d = k % q;
                k /= q;
                Scalar::from_i64(f, d as i64)
            })
            .collect()
    })
}

/// Whether the span of the given endomorphisms has dimension `end_dim − 1`,
/// is closed under composition and consists of nilpotent maps.
fn is_nil_ideal_of_codim_one(shifts: &[Vec<Matrix>], end_dim: usize) -> Result<bool> {
    let vecs: Vec<Matrix> = shifts.iter().map(|s| flatten(s)).collect();
    if vecs.is_empty() {
        return Ok(end_dim == 1);
    }
    let span = Matrix::hstack(&vecs.iter().collect::<Vec<_>>())?;
    let (_, piv) = span.rref_pivots();
    if piv.len() + 1 != end_dim {
        return Ok(false);
    }
    let gens: Vec<&Vec<Matrix>> = piv.iter().map(|&p| &shifts[p]).collect();
    let span = span.select_cols(&piv);
    for a in &gens {
        for b in &gens {
            let prod: Vec<Matrix> = a.iter().zip(b.iter()).map(|(x, y)| x * y).collect();
            if !span.spans(&flatten(&prod)) {
                return Ok(false);
            }
        }
    }
    // nilpotency of the whole span: N^k = 0 for some k
    let mut power: Vec<Vec<Matrix>> = gens.iter().map(|g| (*g).clone()).collect();
    for _ in 0..=shifts[0].iter().map(|m| m.rows()).sum::<usize>() {
        if power.iter().all(|p| p.iter().all(|m| m.is_zero())) {
            return Ok(true);
        }
        let mut next: Vec<Vec<Matrix>> = vec![];
        let mut next_span: Option<Matrix> = None;
        for p in &power {
            for g in &gens {
                let prod: Vec<Matrix> = p.iter().zip(g.iter()).map(|(x, y)| x * y).collect();
                let fl = flatten(&prod);
                if fl.is_zero() || next_span.as_ref().is_some_and(|s| s.spans(&fl)) {
                    continue;
                }
                next_span = Some(match next_span {
                    None => fl,
                    Some(s) => Matrix::hstack(&[&s, &fl])?,
                });
                next.push(prod);
            }
        }
        power = next;
    }
    Ok(power.is_empty())
}

/// Splits a module into indecomposable summands with their inclusions.
pub fn decompose<M: Module>(m: &M, opts: Options) -> Result<Vec<Summand<M>>> {
    let v = m.view();
    let parts = decompose_view(&v, opts)?;
    parts
        .into_iter()
        .map(|(rep, inclusion)| Ok(Summand { module: m.from_view(&rep)?, inclusion }))
        .collect()
}

fn decompose_view(v: &QuiverRep, opts: Options) -> Result<Vec<ViewSummand>> {
    match find_split(v, opts)? {
        Split::Zero => Ok(vec![]),
        Split::Brick | Split::Local(_) => {
            let id = v.dims().iter().map(|&d| Matrix::identity(v.field(), d)).collect();
            Ok(vec![(v.clone(), id)])
        }
        Split::Found(a, b) => {
            let mut out = vec![];
            for (rep, inc) in [a, b] {
                for (sub, sub_inc) in decompose_view(&rep, opts)? {
                    let composed = inc.iter().zip(&sub_inc).map(|(x, y)| x * y).collect();
                    out.push((sub, composed));
                }
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Isomorphism {
    /// Vertex maps of an invertible homomorphism.
    Iso { maps: Vec<Matrix> },
    NotIso { reason: String },
}

impl Isomorphism {
    pub fn holds(&self) -> bool {
        matches!(self, Isomorphism::Iso { .. })
    }
}

fn invertible(maps: &[Matrix]) -> bool {
    maps.iter().all(|m| m.is_square() && (m.rows() == 0 || m.is_invertible()))
}

fn not_iso(reason: &str) -> Isomorphism {
    Isomorphism::NotIso { reason: reason.into() }
}

pub fn is_isomorphic<M: Module>(m: &M, n: &M, opts: Options) -> Result<Isomorphism> {
    check_pair(m, n)?;
    is_isomorphic_views(&m.view(), &n.view(), opts)
}

fn is_isomorphic_views(a: &QuiverRep, b: &QuiverRep, opts: Options) -> Result<Isomorphism> {
    if a.dims() != b.dims() {
        return Ok(not_iso("dimension vectors differ"));
    }
    let homs = hom_views(a, b);
    let basis: Vec<Vec<Matrix>> = homs.iter().map(|h| h.maps().to_vec()).collect();
    if a.total_dim() == 0 {
        return Ok(Isomorphism::Iso { maps: a.dims().iter().map(|&d| Matrix::identity(a.field(), d)).collect() });
    }
    if basis.is_empty() {
        return Ok(not_iso("no nonzero homomorphism"));
    }
    if let Some(maps) = basis.iter().find(|m| invertible(m)) {
        return Ok(Isomorphism::Iso { maps: maps.clone() });
    }
    let mut rng = sample::rng(opts.seed);
    for _ in 0..opts.trials {
        let phi = random_endo(&basis, a.field(), &mut rng);
        if invertible(&phi) {
            return Ok(Isomorphism::Iso { maps: phi });
        }
    }
    let ea = hom_views(a, a).len();
    if ea != hom_views(b, b).len() || ea != basis.len() || ea != hom_views(b, a).len() {
        return Ok(not_iso("Hom dimensions differ"));
    }
    let da = decompose_view(a, opts)?;
    let db = decompose_view(b, opts)?;
    if da.len() != db.len() {
        return Ok(not_iso("numbers of indecomposable summands differ"));
    }
    let mut used = vec![false; db.len()];
    let mut matched = vec![];
    for (sa, ia) in &da {
        let mut found = None;
        for (k, (sb, _)) in db.iter().enumerate() {
            if used[k] || sa.dims() != sb.dims() {
                continue;
            }
            // between indecomposables the non-isomorphisms form a subspace
            if let Some(g) = hom_views(sa, sb).iter().map(|h| h.maps().to_vec()).find(|m| invertible(m)) {
                found = Some((k, g));
                break;
            }
        }
        let Some((k, g)) = found else {
            return Ok(not_iso("indecomposable summands differ"));
        };
        used[k] = true;
        matched.push((ia.clone(), k, g));
    }
    let f = a.field();
    let mut maps = vec![];
    for x in 0..a.quiver().vertices {
        let ba = Matrix::hstack(&da.iter().map(|(_, i)| &i[x]).collect::<Vec<_>>())?;
        let proj = if ba.rows() == 0 { ba.clone() } else { ba.inverse().expect("summands span") };
        let mut total = Matrix::zeros(f, b.dims()[x], a.dims()[x]);
        let mut off = 0;
        for (ia, k, g) in &matched {
            let w = ia[x].cols();
            let pi = proj.submatrix(off, off + w, 0, proj.cols());
            total = &total + &(&(&db[*k].1[x] * &g[x]) * &pi);
            off += w;
        }
        maps.push(total);
    }
    debug_assert!(RepMorphism::new(a.clone(), b.clone(), maps.clone()).is_ok());
    Ok(Isomorphism::Iso { maps })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Simplicity {
    pub simple: bool,
    /// Every nonzero vector (up to scalars) was spun.
    pub exhaustive: bool,
    pub vectors_tried: usize,
    /// Dimension vector of a proper nonzero subrepresentation, when found.
    pub witness: Option<DimVector>,
}

/// Simple iff every nonzero vector generates the whole module. Vectors are
/// taken homogeneous at one vertex of the view, which suffices because every
/// subrepresentation is graded by vertices.
pub fn is_simple<M: Module>(m: &M, opts: Options) -> Result<Simplicity> {
    let v = m.view();
    let f = v.field();
    let n = v.total_dim();
    if n == 0 {
        return Ok(Simplicity { simple: false, exhaustive: true, vectors_tried: 0, witness: Some(v.dims().to_vec()) });
    }
    let points: Option<u128> = f.size().map(|q| {
        v.dims().iter().map(|&d| ((q as u128).saturating_pow(d as u32) - 1) / (q as u128 - 1)).sum()
    });
    let exhaustive = points.is_some_and(|p| p <= enumeration_budget());
    let mut tried = 0;
    let mut rng = sample::rng(opts.seed);
    for (x, &d) in v.dims().iter().enumerate() {
        if d == 0 {
            continue;
        }
        let vectors: Box<dyn Iterator<Item = Matrix>> = if exhaustive {
            Box::new(
                enumerate_vectors(f, d)
                    .filter(|c| c.iter().find(|s| !s.is_zero()).is_some_and(|s| s.is_one()))
                    .map(move |c| Matrix::column_vector(f, &c)),
            )
        } else {
            let mut vs: Vec<Matrix> = (0..d).map(|i| Matrix::identity(f, d).column(i)).collect();
            for _ in 0..opts.trials {
                let r = sample::matrix(f, d, 1, &mut rng);
                if !r.is_zero() {
                    vs.push(r);
                }
            }
            Box::new(vs.into_iter())
        };
        for vec in vectors {
            tried += 1;
            let seeds: Vec<Matrix> =
                v.dims().iter().enumerate().map(|(y, &dy)| if y == x { vec.clone() } else { Matrix::zeros(f, dy, 0) }).collect();
            let (sub, _) = spin_subrep(&v, &seeds)?;
            if sub.total_dim() < n {
                return Ok(Simplicity { simple: false, exhaustive: true, vectors_tried: tried, witness: Some(sub.dims().to_vec()) });
            }
        }
    }
    Ok(Simplicity { simple: true, exhaustive, vectors_tried: tried, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{amodule_from_quiver_rep, FDAlgebra};
    use crate::poly::Poly;
    use crate::quiver::{euler_form, kron_i, kron_l, kron_p};

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    #[test]
    fn hom_between_projectives() {
        let f = f7();
        assert_eq!(hom_dim(&kron_p(f, 0), &kron_p(f, 1)).unwrap(), 2);
        assert_eq!(hom_dim(&kron_p(f, 1), &kron_p(f, 0)).unwrap(), 0);
        let q = Quiver::kronecker(2);
        assert_eq!(hom_dim(&QuiverRep::simple(&q, f, 0), &QuiverRep::simple(&q, f, 1)).unwrap(), 0);
    }

    #[test]
    fn ext_of_simples_and_injectives() {
        let f = f7();
        let q = Quiver::kronecker(3);
        // source is vertex 1, sink vertex 0
        let e = ext_quiver(&QuiverRep::simple(&q, f, 1), &QuiverRep::simple(&q, f, 0)).unwrap();
        assert_eq!(e.dim, 3);
        assert_eq!(ext_quiver_dim(&kron_i(f, 0), &kron_p(f, 0)).unwrap(), 2);
        assert_eq!(ext_quiver_dim(&kron_p(f, 0), &kron_i(f, 3)).unwrap(), 0);
        let mid = extension_rep(&QuiverRep::simple(&q, f, 1), &QuiverRep::simple(&q, f, 0), &e.cocycles[0]).unwrap();
        assert!(is_indecomposable(&mid, Options::default()).unwrap().holds());
    }

    #[test]
    fn derivations_match_quiver_ext() {
        let f = f7();
        let a = amodule_from_quiver_rep(&kron_i(f, 1)).unwrap();
        let b = amodule_from_quiver_rep(&kron_p(f, 1)).unwrap();
        let e = ext_derivations(&a, &b).unwrap();
        assert_eq!(e.dim, ext_quiver_dim(&kron_i(f, 1), &kron_p(f, 1)).unwrap());
        let mid = extension_module(&a, &b, &e.representatives[0]).unwrap();
        assert_eq!(mid.dim(), 6);
        let nil = FDAlgebra::nilpotent(f, 2);
        let (s, _) = crate::algebra::top(&AModule::regular(&nil)).unwrap();
        assert_eq!(ext_derivations(&s, &s).unwrap().dim, 1);
        assert_eq!(ext_derivations(&AModule::regular(&nil), &s).unwrap().dim, 0);
    }

    #[test]
    fn local_but_not_brick() {
        let f = f7();
        let m = kron_l(&Poly::from_ints(f, &[-1, 1]).pow(2)).unwrap();
        assert_eq!(hom_dim(&m, &m).unwrap(), 2);
        assert_eq!(is_indecomposable(&m, Options::default()).unwrap(), Indecomposability::Local { end_dim: 2 });
        let e = end_algebra(&m).unwrap();
        assert_eq!(e.algebra.radical().unwrap().dim(), 1);
    }

    #[test]
    fn decompose_and_reassemble() {
        let f = f7();
        let parts = [kron_p(f, 1), kron_l(&Poly::from_ints(f, &[2, 1])).unwrap(), kron_i(f, 0), kron_p(f, 1)];
        let m = QuiverRep::direct_sum_all(&parts).unwrap();
        let mixed = m.conjugate(&[sample::matrix(f, 5, 5, &mut sample::rng(3)), sample::matrix(f, 4, 4, &mut sample::rng(4))]);
        let mixed = mixed.unwrap_or(m.clone());
        let pieces = decompose(&mixed, Options::default()).unwrap();
        assert_eq!(pieces.len(), 4);
        let reassembled = QuiverRep::direct_sum_all(&pieces.iter().map(|s| s.module.clone()).collect::<Vec<_>>()).unwrap();
        let iso = is_isomorphic(&reassembled, &mixed, Options::default()).unwrap();
        assert!(iso.holds());
        assert!(!is_isomorphic(&kron_p(f, 1), &kron_i(f, 1), Options::default()).unwrap().holds());
    }

    #[test]
    fn simplicity() {
        let f = f7();
        let q = Quiver::kronecker(2);
        assert!(is_simple(&QuiverRep::simple(&q, f, 0), Options::default()).unwrap().simple);
        let s = is_simple(&kron_p(f, 1), Options::default()).unwrap();
        assert!(!s.simple && s.exhaustive);
    }

    #[test]
    fn euler_identity_on_samples() {
        let f = f7();
        let q = Quiver::kronecker(3);
        let mut rng = sample::rng(11);
        for _ in 0..5 {
            let dm = sample::dims(2, 3, &mut rng);
            let dn = sample::dims(2, 3, &mut rng);
            let m = sample::rep(&q, f, &dm, &mut rng);
            let n = sample::rep(&q, f, &dn, &mut rng);
            let lhs = hom_dim(&m, &n).unwrap() as i64 - ext_quiver_dim(&m, &n).unwrap() as i64;
            assert_eq!(lhs, euler_form(&q, &dm, &dn).unwrap());
        }
    }
}
