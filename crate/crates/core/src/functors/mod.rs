//! Functors between module and representation categories.
//!
//! A [`FunctorHandle`] carries one construction (splitting, Jans, Brenner,
//! extension embeddings, Kronecker self-embeddings, …) and knows its source and
//! target [`Category`]. Objects of equivalent categories are converted
//! automatically: `rep L_n` with `mod k⟨X_1..X_n⟩`, and `rep K_n` with
//! `mod kK_n`.

mod constructions;
mod jans;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use constructions::{
    brenner_apply, brenner_generator_labels, ext_embed_build, ext_embed_kronecker_simples, fn_kron_bimodule, radical_top, square_zero, klein_simple,
    kt_embed, split_bimodule, split_quiver, wild_bricks, ExtEmbedData,
};
pub use jans::{gp_bimodule, gp_embed_module, jans_apply, jans_build, JansData};

use crate::algebra::{
    amodule_from_quiver_rep, quiver_rep_from_amodule, same_algebra, tensor_bimodules, tensor_module, tensor_morphism,
    AModule, AlgebraRef, Bimodule, DenseBimodule, FDAlgebra, FreeAlgModule, FreeBimodule, LeftAlgebra, NcPoly,
    PolyMatrix, Preset, TensorModule,
};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::homology::{is_isomorphic, Module, Options};
use crate::matrix::Matrix;
use crate::quiver::{Quiver, QuiverRep};
use crate::sample;

/// A module of one of the supported kinds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Object {
    Rep(QuiverRep),
    Alg(AModule),
    Free(FreeAlgModule),
}

impl Object {
    pub fn field(&self) -> FieldSpec {
        match self {
            Object::Rep(r) => r.field(),
            Object::Alg(m) => m.field(),
            Object::Free(m) => m.field(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Object::Rep(r) => r.total_dim(),
            Object::Alg(m) => m.dim(),
            Object::Free(m) => m.dim(),
        }
    }

    /// Dimension vector of the quiver view.
    pub fn dims(&self) -> Vec<usize> {
        match self {
            Object::Rep(r) => r.dims().to_vec(),
            Object::Alg(m) => vec![m.dim()],
            Object::Free(m) => vec![m.dim()],
        }
    }

    pub fn category(&self) -> Category {
        match self {
            Object::Rep(r) => Category::Rep(r.quiver().clone()),
            Object::Alg(m) => Category::Mod(m.algebra().clone()),
            Object::Free(m) => Category::Free(m.generator_count()),
        }
    }

    pub fn as_rep(&self) -> Result<&QuiverRep> {
        match self {
            Object::Rep(r) => Ok(r),
            _ => Err(Error::InvalidInput("expected a quiver representation".into())),
        }
    }

    pub fn as_alg(&self) -> Result<&AModule> {
        match self {
            Object::Alg(m) => Ok(m),
            _ => Err(Error::InvalidInput("expected a module over a finite-dimensional algebra".into())),
        }
    }

    pub fn as_free(&self) -> Result<&FreeAlgModule> {
        match self {
            Object::Free(m) => Ok(m),
            _ => Err(Error::InvalidInput("expected a module over a free algebra".into())),
        }
    }

    /// The zero object of a category.
    pub fn zero(cat: &Category, field: FieldSpec) -> Object {
        match cat {
            Category::Rep(q) => Object::Rep(QuiverRep::zero(q, field)),
            Category::Mod(a) => Object::Alg(AModule::zero(a)),
            Category::Free(n) => Object::Free(FreeAlgModule::new(field, 0, vec![Matrix::zeros(field, 0, 0); *n]).unwrap()),
        }
    }
}

impl Module for Object {
    fn field(&self) -> FieldSpec {
        Object::field(self)
    }

    fn view(&self) -> QuiverRep {
        match self {
            Object::Rep(r) => r.clone(),
            Object::Alg(m) => m.view(),
            Object::Free(m) => m.view(),
        }
    }

    fn from_view(&self, rep: &QuiverRep) -> Result<Object> {
        Ok(match self {
            Object::Rep(r) => Object::Rep(r.from_view(rep)?),
            Object::Alg(m) => Object::Alg(m.from_view(rep)?),
            Object::Free(m) => Object::Free(m.from_view(rep)?),
        })
    }

    fn same_category(&self, other: &Object) -> bool {
        self.category() == other.category()
    }
}

impl From<QuiverRep> for Object {
    fn from(r: QuiverRep) -> Object {
        Object::Rep(r)
    }
}

impl From<AModule> for Object {
    fn from(m: AModule) -> Object {
        Object::Alg(m)
    }
}

impl From<FreeAlgModule> for Object {
    fn from(m: FreeAlgModule) -> Object {
        Object::Free(m)
    }
}

/// Source or target of a functor.
#[derive(Clone, Debug)]
pub enum Category {
    Rep(Quiver),
    Mod(AlgebraRef),
    /// Modules over the free algebra on this many generators.
    Free(usize),
}

impl PartialEq for Category {
    fn eq(&self, other: &Category) -> bool {
        match (self, other) {
            (Category::Rep(a), Category::Rep(b)) => a == b,
            (Category::Mod(a), Category::Mod(b)) => same_algebra(a, b),
            (Category::Free(a), Category::Free(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Rep(q) => {
                if let Some(n) = q.kronecker_arrows() {
                    write!(f, "rep K_{n}")
                } else if let Some(n) = q.loop_count() {
                    write!(f, "rep L_{n}")
                } else {
                    write!(f, "rep Q({} vertices, arrows {:?})", q.vertices, q.arrows)
                }
            }
            Category::Mod(a) => match a.preset() {
                Some(p) => write!(f, "mod {}", p.describe()),
                None => write!(f, "mod A (dim {})", a.dim()),
            },
            Category::Free(n) => write!(f, "mod k<X_1..X_{n}>"),
        }
    }
}

impl Serialize for Category {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Category {
    /// Kronecker and loop quivers are interchangeable with their algebras.
    fn normal(&self) -> Category {
        match self {
            Category::Rep(q) => match q.loop_count() {
                Some(n) => Category::Free(n),
                None => self.clone(),
            },
            Category::Mod(a) => match a.preset() {
                Some(Preset::Kronecker(n)) => Category::Rep(Quiver::kronecker(n)),
                _ => self.clone(),
            },
            Category::Free(_) => self.clone(),
        }
    }

    pub fn compatible(&self, other: &Category) -> bool {
        self.normal() == other.normal()
    }
}

/// Converts an object into an equivalent category.
pub fn coerce(x: &Object, cat: &Category) -> Result<Object> {
    if &x.category() == cat {
        return Ok(x.clone());
    }
    if !x.category().compatible(cat) {
        return Err(Error::InvalidInput(format!("object lives in {}, expected {cat}", x.category())));
    }
    Ok(match (x, cat) {
        (Object::Rep(r), Category::Free(_)) => Object::Free(FreeAlgModule::from_rep(r)?),
        (Object::Free(m), Category::Rep(_)) => Object::Rep(m.to_rep()),
        (Object::Rep(r), Category::Mod(a)) => Object::Alg(crate::algebra::amodule_over(a, r)?),
        (Object::Alg(m), Category::Rep(_)) => Object::Rep(quiver_rep_from_amodule(m)?),
        (Object::Alg(m), Category::Mod(a)) => Object::Alg(AModule::new(a.clone(), m.action().to_vec())?),
        _ => return Err(Error::InvalidInput(format!("cannot convert {} to {cat}", x.category()))),
    })
}

/// Vertex bases of the Kronecker representation attached to a `kK_n`-module.
fn vertex_bases(m: &AModule) -> [Matrix; 2] {
    [m.action_of(0).col_space(), m.action_of(1).col_space()]
}

/// Converts a morphism `x → y` (view maps) to the views of the objects in `cat`.
pub fn coerce_morphism(x: &Object, y: &Object, f: &[Matrix], cat: &Category) -> Result<Vec<Matrix>> {
    if &x.category() == cat {
        return Ok(f.to_vec());
    }
    match (x, y, cat) {
        (Object::Rep(_), Object::Rep(_), Category::Free(_)) | (Object::Free(_), Object::Free(_), Category::Rep(_)) => Ok(f.to_vec()),
        (Object::Alg(_), Object::Alg(_), Category::Mod(_)) => Ok(f.to_vec()),
        (Object::Rep(_), Object::Rep(_), Category::Mod(_)) => Ok(vec![Matrix::block_diag(&[&f[0], &f[1]])]),
        (Object::Alg(a), Object::Alg(b), Category::Rep(_)) => {
            let [a0, a1] = vertex_bases(a);
            let [b0, b1] = vertex_bases(b);
            let g = &f[0];
            let part = |bt: &Matrix, bs: &Matrix| -> Result<Matrix> {
                if bt.cols() == 0 || bs.cols() == 0 {
                    return Ok(Matrix::zeros(g.field(), bt.cols(), bs.cols()));
                }
                bt.solve(&(g * bs))?.ok_or_else(|| Error::InvalidInput("morphism does not respect idempotents".into()))
            };
            Ok(vec![part(&b0, &a0)?, part(&b1, &a1)?])
        }
        _ => Err(Error::InvalidInput(format!("cannot convert a morphism of {} to {cat}", x.category()))),
    }
}

/// How a functor acts; see the constructors on [`FunctorHandle`].
#[derive(Clone, Debug)]
enum Kind {
    Identity(Category),
    Split(Quiver),
    Jans(Arc<JansData>),
    Gp { n: usize, jans: Arc<JansData> },
    Brenner(usize),
    ExtEmbed(Arc<ExtEmbedData>),
    FnKron { n: usize, bimodule: Arc<Bimodule> },
    RadicalTop(AlgebraRef),
    SquareZero(AlgebraRef),
    Kt,
    Restrict(AlgebraRef),
    Tensor { bimodule: Arc<Bimodule>, source: Category, target: Category },
    Compose(Box<FunctorHandle>, Box<FunctorHandle>),
}

#[derive(Clone, Debug)]
pub struct FunctorHandle {
    field: FieldSpec,
    kind: Kind,
}

impl FunctorHandle {
    pub fn identity(cat: Category, field: FieldSpec) -> FunctorHandle {
        FunctorHandle { field, kind: Kind::Identity(cat) }
    }

    /// Splits every vertex into an emitter and a receiver joined by an identity arrow.
    pub fn split(quiver: Quiver, field: FieldSpec) -> FunctorHandle {
        FunctorHandle { field, kind: Kind::Split(quiver) }
    }

    pub fn jans(data: JansData) -> FunctorHandle {
        FunctorHandle { field: data.algebra().field(), kind: Kind::Jans(Arc::new(data)) }
    }

    /// `mod k⟨X_1..X_n⟩ → mod k[X,Y]/(X,Y)^{n+1}` through the Jans construction.
    pub fn gp(n: usize, field: FieldSpec) -> Result<FunctorHandle> {
        if n == 0 {
            return Err(Error::InvalidInput("gp needs n ≥ 1".into()));
        }
        let a = FDAlgebra::truncated_poly(field, n);
        let t = a.radical()?.power(&a, n)?;
        let jans = jans_build(&a, &t)?;
        Ok(FunctorHandle { field, kind: Kind::Gp { n, jans: Arc::new(jans) } })
    }

    /// `mod k⟨X_ij, Y_ij⟩` (`n(n+1)` generators) `→ mod k⟨X, Y⟩`.
    pub fn brenner(n: usize, field: FieldSpec) -> Result<FunctorHandle> {
        if n < 2 {
            return Err(Error::InvalidInput("brenner needs n ≥ 2".into()));
        }
        Ok(FunctorHandle { field, kind: Kind::Brenner(n) })
    }

    pub fn ext_embed(data: ExtEmbedData) -> FunctorHandle {
        FunctorHandle { field: data.algebra().field(), kind: Kind::ExtEmbed(Arc::new(data)) }
    }

    /// The Kronecker self-embedding `F_n` given by its bimodule.
    pub fn fn_kron(n: usize, field: FieldSpec) -> Result<FunctorHandle> {
        let b = fn_kron_bimodule(n, field)?;
        Ok(FunctorHandle { field, kind: Kind::FnKron { n, bimodule: Arc::new(Bimodule::Dense(b)) } })
    }

    /// `M ↦ (rad M, M/rad M)` from `mod k[X,Y]/(X,Y)²` to `rep K_2`.
    pub fn radical_top(field: FieldSpec) -> FunctorHandle {
        FunctorHandle { field, kind: Kind::RadicalTop(FDAlgebra::truncated_poly(field, 1)) }
    }

    /// `(V, W) ↦ V ⊕ W` from `rep K_2` to `mod k[X,Y]/(X,Y)²`.
    pub fn square_zero(field: FieldSpec) -> FunctorHandle {
        FunctorHandle { field, kind: Kind::SquareZero(FDAlgebra::truncated_poly(field, 1)) }
    }

    /// `(V, T) ↦ (V, V; T, id)` from `mod k[T]` to `rep K_2`.
    pub fn kt(field: FieldSpec) -> FunctorHandle {
        FunctorHandle { field, kind: Kind::Kt }
    }

    /// The full embedding `mod A → mod k⟨X_1..X_p⟩` along the generators of `A`
    /// (the unit is not counted).
    pub fn restrict(algebra: AlgebraRef) -> FunctorHandle {
        FunctorHandle { field: algebra.field(), kind: Kind::Restrict(algebra) }
    }

    /// `X ↦ M ⊗ X`.
    pub fn tensor(bimodule: Bimodule, source: Category, target: Category) -> Result<FunctorHandle> {
        let field = bimodule.field();
        Ok(FunctorHandle { field, kind: Kind::Tensor { bimodule: Arc::new(bimodule), source, target } })
    }

    /// `second ∘ first`.
    pub fn compose(first: FunctorHandle, second: FunctorHandle) -> Result<FunctorHandle> {
        if !first.target().compatible(&second.source()) {
            return Err(Error::InvalidInput(format!("cannot compose: {} vs {}", first.target(), second.source())));
        }
        if first.field != second.field {
            return Err(Error::FieldMismatch(first.field, second.field));
        }
        Ok(FunctorHandle { field: first.field, kind: Kind::Compose(Box::new(first), Box::new(second)) })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn name(&self) -> String {
        match &self.kind {
            Kind::Identity(_) => "identity".into(),
            Kind::Split(_) => "split".into(),
            Kind::Jans(_) => "jans".into(),
            Kind::Gp { n, .. } => format!("gp({n})"),
            Kind::Brenner(n) => format!("brenner({n})"),
            Kind::ExtEmbed(d) => format!("ext_embed({})", d.derivations().len()),
            Kind::FnKron { n, .. } => format!("fn_kron({n})"),
            Kind::RadicalTop(_) => "radical_top".into(),
            Kind::SquareZero(_) => "square_zero".into(),
            Kind::Kt => "kt".into(),
            Kind::Restrict(a) => format!("restrict({})", Category::Mod(a.clone())),
            Kind::Tensor { .. } => "tensor".into(),
            Kind::Compose(a, b) => format!("{} ∘ {}", b.name(), a.name()),
        }
    }

    pub fn source(&self) -> Category {
        match &self.kind {
            Kind::Identity(c) => c.clone(),
            Kind::Split(q) => Category::Rep(q.clone()),
            Kind::Jans(j) => Category::Rep(j.quiver().clone()),
            Kind::Gp { n, .. } => Category::Free(*n),
            Kind::Brenner(n) => Category::Free(n * (n + 1)),
            Kind::ExtEmbed(d) => Category::Rep(Quiver::kronecker(d.derivations().len())),
            Kind::FnKron { .. } => Category::Rep(Quiver::kronecker(2)),
            Kind::RadicalTop(a) => Category::Mod(a.clone()),
            Kind::SquareZero(_) => Category::Rep(Quiver::kronecker(2)),
            Kind::Kt => Category::Free(1),
            Kind::Restrict(a) => Category::Mod(a.clone()),
            Kind::Tensor { source, .. } => source.clone(),
            Kind::Compose(a, _) => a.source(),
        }
    }

    pub fn target(&self) -> Category {
        match &self.kind {
            Kind::Identity(c) => c.clone(),
            Kind::Split(q) => Category::Rep(split_quiver(q)),
            Kind::Jans(j) => Category::Mod(j.algebra().clone()),
            Kind::Gp { jans, .. } => Category::Mod(jans.algebra().clone()),
            Kind::Brenner(_) => Category::Free(2),
            Kind::ExtEmbed(d) => d.target(),
            Kind::FnKron { .. } => Category::Rep(Quiver::kronecker(2)),
            Kind::RadicalTop(_) => Category::Rep(Quiver::kronecker(2)),
            Kind::SquareZero(a) => Category::Mod(a.clone()),
            Kind::Kt => Category::Rep(Quiver::kronecker(2)),
            Kind::Restrict(a) => Category::Free(restrict_generators(a).len()),
            Kind::Tensor { target, .. } => target.clone(),
            Kind::Compose(_, b) => b.target(),
        }
    }

    /// Whether the construction is exact on its whole source category.
    pub fn is_exact(&self) -> bool {
        match &self.kind {
            Kind::RadicalTop(_) => false,
            Kind::Compose(a, b) => a.is_exact() && b.is_exact(),
            _ => true,
        }
    }

    pub fn apply(&self, x: &Object) -> Result<Object> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch(x.field(), self.field));
        }
        let x = coerce(x, &self.source())?;
        let f = self.field;
        Ok(match &self.kind {
            Kind::Identity(_) => x,
            Kind::Split(q) => Object::Rep(constructions::split_apply(q, x.as_rep()?)?),
            Kind::Jans(j) => Object::Alg(jans_apply(j, x.as_rep()?)?),
            Kind::Gp { jans, .. } => Object::Alg(jans_apply(jans, &gp_embed_module(x.as_free()?)?)?),
            Kind::Brenner(n) => Object::Free(brenner_apply(*n, x.as_free()?)?),
            Kind::ExtEmbed(d) => d.apply(x.as_rep()?)?,
            Kind::FnKron { bimodule, .. } => {
                let m = coerce(&x, &Category::Mod(FDAlgebra::kronecker(f, 2)))?;
                let TensorModule::Alg(out) = tensor_module(bimodule, &TensorModule::Alg(m.as_alg()?.clone()))? else {
                    unreachable!("dense bimodules produce finite-dimensional modules")
                };
                Object::Rep(quiver_rep_from_amodule(&out)?)
            }
            Kind::RadicalTop(_) => Object::Rep(radical_top(x.as_alg()?)?),
            Kind::SquareZero(a) => Object::Alg(square_zero(a, x.as_rep()?)?),
            Kind::Kt => {
                let m = x.as_free()?;
                Object::Rep(kt_embed(m.dim(), m.gen(0))?)
            }
            Kind::Restrict(a) => {
                let m = x.as_alg()?;
                let gens = restrict_generators(a).iter().map(|&g| m.action_of(g).clone()).collect();
                Object::Free(FreeAlgModule::new(f, m.dim(), gens)?)
            }
            Kind::Tensor { bimodule, target, .. } => coerce(&from_tensor(tensor_module(bimodule, &to_tensor(&x)?)?), target)?,
            Kind::Compose(a, b) => b.apply(&a.apply(&x)?)?,
        })
    }

    /// Image of a morphism `f: x → y` (maps of the quiver views).
    pub fn apply_morphism(&self, x: &Object, y: &Object, f: &[Matrix]) -> Result<Vec<Matrix>> {
        let src = self.source();
        let g = coerce_morphism(x, y, f, &src)?;
        let (x, y) = (coerce(x, &src)?, coerce(y, &src)?);
        let fld = self.field;
        Ok(match &self.kind {
            Kind::Identity(_) => g,
            Kind::Split(_) => {
                let mut out = g.clone();
                out.extend(g);
                out
            }
            Kind::Jans(j) => vec![jans::jans_morphism(j, x.as_rep()?, y.as_rep()?, &g)?],
            Kind::Gp { jans, .. } => {
                let (mx, my) = (gp_embed_module(x.as_free()?)?, gp_embed_module(y.as_free()?)?);
                vec![jans::jans_morphism(jans, &mx, &my, &[g[0].clone(), g[0].clone()])?]
            }
            Kind::Brenner(n) => {
                let blocks: Vec<&Matrix> = (0..n + 2).map(|_| &g[0]).collect();
                vec![Matrix::block_diag(&blocks)]
            }
            Kind::ExtEmbed(d) => d.apply_morphism(x.as_rep()?, y.as_rep()?, &g)?,
            Kind::FnKron { bimodule, .. } => {
                let kk = Category::Mod(FDAlgebra::kronecker(fld, 2));
                let (mx, my) = (coerce(&x, &kk)?, coerce(&y, &kk)?);
                let gm = coerce_morphism(&x, &y, &g, &kk)?;
                let (tx, ty) = (TensorModule::Alg(mx.as_alg()?.clone()), TensorModule::Alg(my.as_alg()?.clone()));
                let h = tensor_morphism(bimodule, &tx, &ty, &gm[0])?;
                let (TensorModule::Alg(ox), TensorModule::Alg(oy)) = (tensor_module(bimodule, &tx)?, tensor_module(bimodule, &ty)?) else {
                    unreachable!()
                };
                coerce_morphism(&Object::Alg(ox), &Object::Alg(oy), &[h], &Category::Rep(Quiver::kronecker(2)))?
            }
            Kind::RadicalTop(_) => constructions::radical_top_morphism(x.as_alg()?, y.as_alg()?, &g[0])?,
            Kind::SquareZero(_) => vec![Matrix::block_diag(&[&g[1], &g[0]])],
            Kind::Kt => vec![g[0].clone(), g[0].clone()],
            Kind::Restrict(_) => g,
            Kind::Tensor { bimodule, target, .. } => {
                let (tx, ty) = (to_tensor(&x)?, to_tensor(&y)?);
                let gm = match &x {
                    Object::Rep(r) if r.quiver().kronecker_arrows().is_some() => Matrix::block_diag(&[&g[0], &g[1]]),
                    _ => g[0].clone(),
                };
                let h = tensor_morphism(bimodule, &tx, &ty, &gm)?;
                let (ox, oy) = (from_tensor(tensor_module(bimodule, &tx)?), from_tensor(tensor_module(bimodule, &ty)?));
                coerce_morphism(&ox, &oy, &[h], target)?
            }
            Kind::Compose(a, b) => {
                let (ax, ay) = (a.apply(&x)?, a.apply(&y)?);
                let ag = a.apply_morphism(&x, &y, &g)?;
                b.apply_morphism(&ax, &ay, &ag)?
            }
        })
    }

    /// A bimodule inducing the functor, when one is known without probing.
    pub fn bimodule(&self) -> Result<Option<Bimodule>> {
        Ok(match &self.kind {
            Kind::Identity(Category::Mod(a)) => Some(Bimodule::Dense(DenseBimodule::regular(a))),
            Kind::Identity(Category::Free(n)) => Some(Bimodule::Free(FreeBimodule::regular_free(self.field, *n))),
            Kind::Split(q) => q.loop_count().map(|n| Bimodule::Free(split_bimodule(n, self.field))),
            Kind::Gp { jans, .. } => Some(Bimodule::Free(gp_bimodule(jans)?)),
            Kind::FnKron { bimodule, .. } | Kind::Tensor { bimodule, .. } => Some((**bimodule).clone()),
            Kind::Compose(a, b) => match (a.bimodule()?, b.bimodule()?) {
                (Some(m), Some(n)) => Some(tensor_bimodules(&n, &m)?),
                _ => None,
            },
            _ => None,
        })
    }
}

fn to_tensor(x: &Object) -> Result<TensorModule> {
    Ok(match x {
        Object::Alg(m) => TensorModule::Alg(m.clone()),
        Object::Free(m) => TensorModule::Free(m.clone()),
        Object::Rep(r) if r.quiver().kronecker_arrows().is_some() => TensorModule::Alg(amodule_from_quiver_rep(r)?),
        Object::Rep(r) if r.quiver().loop_count().is_some() => TensorModule::Free(FreeAlgModule::from_rep(r)?),
        Object::Rep(_) => return Err(Error::InvalidInput("expected a Kronecker or loop quiver representation".into())),
    })
}

fn from_tensor(t: TensorModule) -> Object {
    match t {
        TensorModule::Alg(m) => Object::Alg(m),
        TensorModule::Free(m) => Object::Free(m),
    }
}

/// Generators of `A` other than the unit.
fn restrict_generators(a: &AlgebraRef) -> Vec<usize> {
    a.generators().into_iter().filter(|&g| &a.basis_vector(g) != a.unit()).collect()
}

/// Target of an Eilenberg–Watts bimodule: a finite-dimensional algebra or a free one.
fn left_category(cat: &Category, field: FieldSpec) -> Result<Category> {
    Ok(match cat.normal() {
        Category::Rep(q) => match q.kronecker_arrows() {
            Some(n) => Category::Mod(FDAlgebra::kronecker(field, n)),
            None => return Err(Error::Unsupported(format!("no algebra attached to {cat}"))),
        },
        c => c,
    })
}

/// The bimodule `F(A)` of a functor out of `mod A`. For a finite-dimensional
/// source this is the image of the regular module with right action
/// `F(x ↦ x·a)`. For a free source the functor is probed on one-dimensional
/// modules to read off an affine bimodule, which is then checked against the
/// functor on random modules.
pub fn eilenberg_watts(f: &FunctorHandle, seed: u64) -> Result<Bimodule> {
    let field = f.field();
    let src = f.source().normal();
    let tgt = left_category(&f.target(), field)?;
    match src {
        Category::Free(n) => probe_affine(f, n, &tgt, seed),
        _ => {
            let a = match left_category(&src, field)? {
                Category::Mod(a) => a,
                _ => return Err(Error::Unsupported(format!("source {} is not finite-dimensional", f.source()))),
            };
            let Category::Mod(b) = &tgt else {
                return Err(Error::Unsupported("target is not finite-dimensional".into()));
            };
            let reg = Object::Alg(AModule::regular(&a));
            let image = coerce(&f.apply(&reg)?, &tgt)?;
            let left = image.as_alg()?.action().to_vec();
            let mut right = Vec::with_capacity(a.dim());
            for i in 0..a.dim() {
                let g = f.apply_morphism(&reg, &reg, &[a.right_mult(i).clone()])?;
                let img_src = f.apply(&reg)?;
                right.push(coerce_morphism(&img_src, &img_src, &g, &tgt)?.remove(0));
            }
            Ok(Bimodule::Dense(DenseBimodule::new(b.clone(), a, left, right)?))
        }
    }
}

fn probe_affine(f: &FunctorHandle, n: usize, tgt: &Category, seed: u64) -> Result<Bimodule> {
    let field = f.field();
    let one_dim = |l: Option<usize>| {
        let gens = (0..n)
            .map(|s| Matrix::from_fn(field, 1, 1, |_, _| if Some(s) == l { field.one() } else { field.zero() }))
            .collect();
        FreeAlgModule::new(field, 1, gens).map(Object::Free)
    };
    let actions = |o: Object| -> Result<Vec<Matrix>> {
        Ok(match coerce(&o, tgt)? {
            Object::Alg(m) => m.action().to_vec(),
            Object::Free(m) => m.gens().to_vec(),
            Object::Rep(_) => unreachable!("left category is an algebra"),
        })
    };
    let base = actions(f.apply(&one_dim(None)?)?)?;
    let rank = base.first().map(|m| m.rows()).unwrap_or(0);
    let mut slopes = vec![];
    for l in 0..n {
        let act = actions(f.apply(&one_dim(Some(l))?)?)?;
        if act.iter().any(|m| m.rows() != rank) {
            return Err(Error::Unsupported("functor does not multiply dimensions by a constant rank".into()));
        }
        slopes.push(act.iter().zip(&base).map(|(a, c)| a - c).collect::<Vec<_>>());
    }
    let polys = (0..base.len())
        .map(|b| {
            let mut p = PolyMatrix::zeros(field, rank, rank);
            for i in 0..rank {
                for j in 0..rank {
                    let mut e = NcPoly::constant(base[b].get(i, j));
                    for (l, s) in slopes.iter().enumerate() {
                        e = e.add(&NcPoly::var(field, l).scale(&s[b].get(i, j)));
                    }
                    p.set(i, j, e);
                }
            }
            p
        })
        .collect();
    let left = match tgt {
        Category::Mod(a) => LeftAlgebra::Fd(a.clone()),
        Category::Free(m) => LeftAlgebra::Free(*m),
        Category::Rep(_) => unreachable!(),
    };
    let bimodule = Bimodule::Free(FreeBimodule::new(field, left, n, rank, polys)?);
    let mut rng = sample::rng(seed);
    for d in [2, 3] {
        let gens = (0..n).map(|_| sample::matrix(field, d, d, &mut rng)).collect();
        let x = FreeAlgModule::new(field, d, gens)?;
        let via_tensor = match tensor_module(&bimodule, &TensorModule::Free(x.clone()))? {
            TensorModule::Alg(m) => Object::Alg(m),
            TensorModule::Free(m) => Object::Free(m),
        };
        let direct = coerce(&f.apply(&Object::Free(x))?, tgt)?;
        if via_tensor != direct && !is_isomorphic(&via_tensor, &direct, Options::with_seed(seed))?.holds() {
            return Err(Error::Unsupported("functor is not given by an affine bimodule in its coordinates".into()));
        }
    }
    Ok(bimodule)
}

/// Serializable description of a functor built from shipped constructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorSpec {
    Identity { category: String },
    Split { quiver: Quiver },
    Jans { algebra: String, ideal_power: usize },
    Gp { n: usize },
    Brenner { n: usize },
    /// Extensions of the source simple by the sink simple of `K_n`, one arrow derivation each.
    ExtEmbedSimples { n: usize },
    FnKron { n: usize },
    RadicalTop,
    SquareZero,
    Kt,
    Restrict { algebra: String },
    Compose { first: Box<FunctorSpec>, second: Box<FunctorSpec> },
}

impl FunctorSpec {
    pub fn build(&self, field: FieldSpec) -> Result<FunctorHandle> {
        Ok(match self {
            FunctorSpec::Identity { category } => FunctorHandle::identity(parse_category(category, field)?, field),
            FunctorSpec::Split { quiver } => FunctorHandle::split(quiver.clone(), field),
            FunctorSpec::Jans { algebra, ideal_power } => {
                let a = preset_algebra(algebra, field)?;
                let t = a.radical()?.power(&a, *ideal_power)?;
                FunctorHandle::jans(jans_build(&a, &t)?)
            }
            FunctorSpec::Gp { n } => FunctorHandle::gp(*n, field)?,
            FunctorSpec::Brenner { n } => FunctorHandle::brenner(*n, field)?,
            FunctorSpec::ExtEmbedSimples { n } => FunctorHandle::ext_embed(constructions::ext_embed_kronecker_simples(*n, field)?),
            FunctorSpec::FnKron { n } => FunctorHandle::fn_kron(*n, field)?,
            FunctorSpec::RadicalTop => FunctorHandle::radical_top(field),
            FunctorSpec::SquareZero => FunctorHandle::square_zero(field),
            FunctorSpec::Kt => FunctorHandle::kt(field),
            FunctorSpec::Restrict { algebra } => FunctorHandle::restrict(preset_algebra(algebra, field)?),
            FunctorSpec::Compose { first, second } => FunctorHandle::compose(first.build(field)?, second.build(field)?)?,
        })
    }
}

fn preset_algebra(name: &str, field: FieldSpec) -> Result<AlgebraRef> {
    let p: Preset = name.parse()?;
    p.algebra(field).ok_or_else(|| Error::InvalidInput(format!("{name} is not finite-dimensional")))
}

/// Parses `rep:kron<n>`, `rep:loops<n>`, `mod:<preset>` or `free<n>`.
pub fn parse_category(s: &str, field: FieldSpec) -> Result<Category> {
    if let Some(rest) = s.strip_prefix("rep:kron") {
        return Ok(Category::Rep(Quiver::kronecker(rest.parse().map_err(|_| bad_category(s))?)));
    }
    if let Some(rest) = s.strip_prefix("rep:loops") {
        return Ok(Category::Rep(Quiver::loops(rest.parse().map_err(|_| bad_category(s))?)));
    }
    if let Some(rest) = s.strip_prefix("mod:") {
        return Ok(Category::Mod(preset_algebra(rest, field)?));
    }
    if let Some(rest) = s.strip_prefix("free") {
        return Ok(Category::Free(rest.parse().map_err(|_| bad_category(s))?));
    }
    Err(bad_category(s))
}

fn bad_category(s: &str) -> Error {
    Error::InvalidInput(format!("unknown category `{s}` (try rep:kron<n>, rep:loops<n>, mod:<preset>, free<n>)"))
}

#[cfg(test)]
mod tests;
