//! Sample-scale checks that a functor is a representation embedding, the
//! orthogonal-embedding recipe, submodule lattices and Euler-form checks.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{amodule_from_quiver_rep, AModule, FreeAlgModule, Preset};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::functors::{coerce, klein_simple, Category, ExtEmbedData, FunctorHandle, Object};
use crate::homology::{decompose, enumerate_vectors, enumeration_budget, ext_quiver_dim, hom_dim, is_indecomposable, is_isomorphic, Indecomposability, Module, Options};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::quiver::{euler_form, kron_i, kron_l, kron_l_infinity, kron_p, spin_subrep, Quiver, QuiverRep};
use crate::sample::{self, SeededRng};

/// How to draw samples: seed, number of cases, and a dimension bound (per
/// vertex for quiver representations, total for modules over algebras).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub seed: u64,
    pub count: usize,
    pub max_dim: usize,
    pub field: FieldSpec,
}

impl SampleSpec {
    pub fn new(field: FieldSpec, seed: u64, count: usize, max_dim: usize) -> Result<SampleSpec> {
        if count == 0 || max_dim == 0 {
            return Err(Error::InvalidInput("sample count and dimension bound must be at least 1".into()));
        }
        Ok(SampleSpec { seed, count, max_dim, field })
    }

    fn describe(&self) -> String {
        format!("{} samples, dims ≤ {}, over {}", self.count, self.max_dim, self.field)
    }
}

/// A counterexample found by a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub note: String,
    pub objects: Vec<Object>,
    /// Maps between the objects, one matrix per view vertex.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<Vec<MatrixJson>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// `objects = [sub, mid, quot]`, `maps = [inclusion, projection]`.
    NotExact,
    /// `objects = [input]`; the image decomposes.
    NotIndecomposable,
    /// `objects = [x, y]`, non-isomorphic with isomorphic images.
    IsoCollapse,
    /// `objects = [x, y]`; `dim Hom` differs after applying the functor.
    HomMismatch,
    /// `objects = [F_i X, F_j Y]` with a nonzero morphism.
    CrossHom,
    /// `objects = [M, N]`; `dim Hom − dim Ext` differs from the Euler form.
    Euler,
    /// `objects = [X]`; the image has a dimension vector outside `ℕ·(2, 2)`.
    DimensionVector,
    /// `objects = [M]`; submodules of `M` do not correspond to those of `FM`.
    Lattice,
}

/// A matrix with its shape and row-major entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

fn pack_maps(maps: &[Matrix]) -> Vec<MatrixJson> {
    maps.iter().map(|m| MatrixJson { rows: m.rows(), cols: m.cols(), entries: m.to_string_rows() }).collect()
}

fn unpack_maps(field: FieldSpec, maps: &[MatrixJson]) -> Result<Vec<Matrix>> {
    maps.iter().map(|m| Matrix::from_string_rows(field, m.rows, m.cols, &m.entries)).collect()
}

impl Witness {
    fn new(kind: WitnessKind, note: impl Into<String>, objects: Vec<Object>) -> Witness {
        Witness { kind, note: note.into(), objects, maps: vec![] }
    }

    /// Recomputes the failure; `true` when the witness still exhibits it.
    pub fn reverify(&self, f: Option<&FunctorHandle>, seed: u64) -> Result<bool> {
        let opts = Options::with_seed(seed);
        let need = || f.ok_or_else(|| Error::InvalidInput("this witness needs its functor to re-verify".into()));
        let o = &self.objects;
        Ok(match self.kind {
            WitnessKind::NotExact => {
                let f = need()?;
                let field = o[1].field();
                let inc = unpack_maps(field, &self.maps[0])?;
                let proj = unpack_maps(field, &self.maps[1])?;
                !image_is_exact(f, &o[0], &o[1], &o[2], &inc, &proj)?
            }
            WitnessKind::NotIndecomposable => {
                matches!(is_indecomposable(&need()?.apply(&o[0])?, opts)?, Indecomposability::Decomposable { .. })
            }
            WitnessKind::IsoCollapse => {
                let f = need()?;
                !is_isomorphic(&o[0], &o[1], opts)?.holds() && is_isomorphic(&f.apply(&o[0])?, &f.apply(&o[1])?, opts)?.holds()
            }
            WitnessKind::HomMismatch => {
                let f = need()?;
                hom_dim(&o[0], &o[1])? != hom_dim(&f.apply(&o[0])?, &f.apply(&o[1])?)?
            }
            WitnessKind::CrossHom => hom_dim(&o[0], &o[1])? > 0,
            WitnessKind::Euler => {
                let (m, n) = (o[0].as_rep()?, o[1].as_rep()?);
                hom_dim(m, n)? as i64 - ext_quiver_dim(m, n)? as i64 != euler_form(m.quiver(), m.dims(), n.dims())?
            }
            WitnessKind::DimensionVector => {
                let d = need()?.apply(&o[0])?.dims();
                d[0] != d[1] || d[0] % 2 != 0
            }
            WitnessKind::Lattice => lattice_correspondence(need()?, &o[0])?.is_err(),
        })
    }
}

/// One property checked on a batch of samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub sample: String,
    pub seed: u64,
    pub cases: usize,
    /// Cases where the underlying decision procedure could not conclude
    /// (for instance no eigenvalues in the ground field).
    #[serde(default)]
    pub inconclusive: usize,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

const MAX_WITNESSES: usize = 3;

impl Check {
    fn new(name: &str, sample: String, seed: u64) -> Check {
        Check { name: name.into(), sample, seed, cases: 0, inconclusive: 0, passed: true, witnesses: vec![] }
    }

    fn fail(&mut self, w: Witness) {
        self.passed = false;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub functor: String,
    pub field: FieldSpec,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerificationReport {
    fn new(functor: String, s: &SampleSpec, checks: Vec<Check>) -> VerificationReport {
        let passed = checks.iter().all(|c| c.passed);
        VerificationReport { functor, field: s.field, seed: s.seed, checks, passed }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn summary(&self) -> String {
        let mut out = format!("{}: {}\n", self.functor, if self.passed { "pass" } else { "FAIL" });
        for c in &self.checks {
            out += &format!(
                "  {:<18} {} ({} cases{}{})\n",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.cases,
                if c.inconclusive > 0 { format!(", {} inconclusive", c.inconclusive) } else { String::new() },
                c.witnesses.first().map(|w| format!("; {}", w.note)).unwrap_or_default()
            );
        }
        out
    }
}

/// A random object of a category.
pub fn random_object(cat: &Category, field: FieldSpec, max_dim: usize, rng: &mut SeededRng) -> Result<Object> {
    Ok(match cat {
        Category::Rep(q) => {
            let dims = sample::dims(q.vertices, max_dim, rng);
            Object::Rep(sample::rep(q, field, &dims, rng))
        }
        Category::Free(n) => {
            let d = rng.gen_range(1..=max_dim);
            Object::Free(FreeAlgModule::new(field, d, (0..*n).map(|_| sample::matrix(field, d, d, rng)).collect())?)
        }
        Category::Mod(a) => {
            if let Some(Preset::Kronecker(n)) = a.preset() {
                let q = Quiver::kronecker(n);
                let dims = sample::dims(2, max_dim, rng);
                return Ok(Object::Alg(crate::algebra::amodule_over(a, &sample::rep(&q, field, &dims, rng))?));
            }
            for _ in 0..200 {
                let rank = rng.gen_range(1..=2);
                let free = (0..rank).try_fold(AModule::zero(a), |acc, _| acc.direct_sum(&AModule::regular(a)))?;
                let seeds = rng.gen_range(0..=free.dim().min(3));
                let cols: Vec<Matrix> = (0..seeds).map(|_| sample::matrix(field, free.dim(), 1, rng)).collect();
                let view = free.view();
                let sub = if cols.is_empty() {
                    Matrix::zeros(field, free.dim(), 0)
                } else {
                    let seeds = Matrix::hstack(&cols.iter().collect::<Vec<_>>())?;
                    spin_subrep(&view, &[seeds])?.1.maps()[0].clone()
                };
                let (q, _) = free.quotient(&sub)?;
                if (1..=max_dim).contains(&q.dim()) {
                    return Ok(Object::Alg(q));
                }
            }
            return Err(Error::InvalidInput(format!("could not sample a module of dimension ≤ {max_dim}")));
        }
    })
}

/// A short exact sequence `0 → sub → mid → quot → 0` with its maps (view maps).
#[derive(Clone, Debug)]
pub struct Ses {
    pub sub: Object,
    pub mid: Object,
    pub quot: Object,
    pub inclusion: Vec<Matrix>,
    pub projection: Vec<Matrix>,
}

/// Random middle term, submodule spun from random vectors, and the cokernel.
pub fn random_ses(cat: &Category, field: FieldSpec, max_dim: usize, rng: &mut SeededRng) -> Result<Ses> {
    let mid = random_object(cat, field, max_dim, rng)?;
    let view = mid.view();
    let seeds: Vec<Matrix> = view
        .dims()
        .iter()
        .map(|&d| {
            let k = if d == 0 { 0 } else { rng.gen_range(0..=1) };
            sample::matrix(field, d, k, rng)
        })
        .collect();
    let (sub_view, inc) = spin_subrep(&view, &seeds)?;
    let bases: Vec<Matrix> = inc.maps().to_vec();
    let (quot_view, proj) = view.quotient(&bases)?;
    Ok(Ses {
        sub: mid.from_view(&sub_view)?,
        quot: mid.from_view(&quot_view)?,
        inclusion: inc.maps().to_vec(),
        projection: proj.maps().to_vec(),
        mid,
    })
}

/// Whether `F` carries the sequence to a short exact sequence.
pub fn ses_image_is_exact(f: &FunctorHandle, ses: &Ses) -> Result<bool> {
    image_is_exact(f, &ses.sub, &ses.mid, &ses.quot, &ses.inclusion, &ses.projection)
}

fn image_is_exact(f: &FunctorHandle, sub: &Object, mid: &Object, quot: &Object, inc: &[Matrix], proj: &[Matrix]) -> Result<bool> {
    let fi = f.apply_morphism(sub, mid, inc)?;
    let fp = f.apply_morphism(mid, quot, proj)?;
    Ok(fi.iter().zip(&fp).all(|(i, p)| {
        let (r_i, r_p) = (i.rank(), p.rank());
        r_i == i.cols() && r_p == p.rows() && (p * i).is_zero() && i.rows() == r_i + r_p
    }))
}

/// Decomposes random objects until `count` indecomposable summands are found.
fn sample_indecomposables(cat: &Category, s: &SampleSpec, rng: &mut SeededRng) -> Result<Vec<Object>> {
    let mut out = Vec::new();
    for attempt in 0..s.count * 20 {
        if out.len() >= s.count {
            break;
        }
        let x = random_object(cat, s.field, s.max_dim, rng)?;
        match decompose(&x, Options::with_seed(s.seed.wrapping_add(attempt as u64))) {
            Ok(parts) => out.extend(parts.into_iter().map(|p| p.module).filter(|m| m.dim() > 0)),
            Err(Error::NotSplit(_)) | Err(Error::BudgetExceeded { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    out.truncate(s.count);
    Ok(out)
}

/// Fixed indecomposables for a category: for `rep K_2` the preprojectives
/// `P(0..3)`, preinjectives `I(0..2)` and regular modules `L(X)`, `L(X ± 1)`,
/// `L((X − 1)²)`, `L_∞`; nothing for other categories.
pub fn standard_fixtures(cat: &Category, field: FieldSpec) -> Result<Vec<Object>> {
    if cat != &Category::Rep(Quiver::kronecker(2)) {
        return Ok(vec![]);
    }
    let mut out: Vec<QuiverRep> = (0..4).map(|i| kron_p(field, i)).collect();
    out.extend((0..3).map(|i| kron_i(field, i)));
    let linear = |c: i64| Poly::from_ints(field, &[c, 1]);
    for q in [linear(0), linear(-1), linear(1), linear(-1).pow(2)] {
        let l = kron_l(&q)?;
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out.push(kron_l_infinity(field, 1));
    Ok(out.into_iter().map(Object::Rep).collect())
}

/// Exactness on random short exact sequences, preservation of
/// indecomposability, and reflection of isomorphism classes.
pub fn check_embedding(f: &FunctorHandle, s: &SampleSpec) -> Result<VerificationReport> {
    check_embedding_with(f, s, &[])
}

/// As [`check_embedding`], adding fixed indecomposable inputs to the sample.
pub fn check_embedding_with(f: &FunctorHandle, s: &SampleSpec, fixtures: &[Object]) -> Result<VerificationReport> {
    let mut rng = sample::rng(s.seed);
    let src = f.source();
    let opts = Options::with_seed(s.seed);

    let mut exact = Check::new("exactness", format!("{} short exact sequences", s.describe()), s.seed);
    for _ in 0..s.count {
        let ses = random_ses(&src, s.field, s.max_dim, &mut rng)?;
        exact.cases += 1;
        if !image_is_exact(f, &ses.sub, &ses.mid, &ses.quot, &ses.inclusion, &ses.projection)? {
            let mut w = Witness::new(WitnessKind::NotExact, "image sequence is not exact", vec![ses.sub, ses.mid, ses.quot]);
            w.maps = vec![pack_maps(&ses.inclusion), pack_maps(&ses.projection)];
            exact.fail(w);
        }
    }

    let mut inputs: Vec<Object> = fixtures.iter().map(|x| coerce(x, &src)).collect::<Result<_>>()?;
    inputs.extend(sample_indecomposables(&src, s, &mut rng)?);
    let mut indec = Check::new("indecomposables", format!("{} fixtures + {} indecomposables", fixtures.len(), s.describe()), s.seed);
    let mut images = Vec::with_capacity(inputs.len());
    for x in &inputs {
        let fx = f.apply(x)?;
        indec.cases += 1;
        match is_indecomposable(&fx, opts) {
            Ok(Indecomposability::Decomposable { .. }) => {
                indec.fail(Witness::new(WitnessKind::NotIndecomposable, format!("image of {:?} decomposes", x.dims()), vec![x.clone()]))
            }
            Ok(_) => {}
            Err(Error::NotSplit(_)) | Err(Error::BudgetExceeded { .. }) => indec.inconclusive += 1,
            Err(e) => return Err(e),
        }
        images.push(fx);
    }

    let mut reflect = Check::new("iso_reflection", "pairs of sampled indecomposables".into(), s.seed);
    for i in 0..inputs.len() {
        for j in i + 1..inputs.len() {
            if images[i].dims() != images[j].dims() {
                reflect.cases += 1;
                continue;
            }
            reflect.cases += 1;
            let (src_iso, img_iso) = match (is_isomorphic(&inputs[i], &inputs[j], opts), is_isomorphic(&images[i], &images[j], opts)) {
                (Ok(a), Ok(b)) => (a.holds(), b.holds()),
                _ => {
                    reflect.inconclusive += 1;
                    continue;
                }
            };
            if img_iso && !src_iso {
                reflect.fail(Witness::new(
                    WitnessKind::IsoCollapse,
                    "non-isomorphic inputs with isomorphic images",
                    vec![inputs[i].clone(), inputs[j].clone()],
                ));
            }
        }
    }
    Ok(VerificationReport::new(f.name(), s, vec![exact, indec, reflect]))
}

/// Compares `dim Hom(X, Y)` with `dim Hom(FX, FY)` on random pairs. The
/// functor is faithful on the sample if no image dimension is smaller and
/// full if all agree.
pub fn check_fullness(f: &FunctorHandle, s: &SampleSpec) -> Result<VerificationReport> {
    let mut rng = sample::rng(s.seed);
    let src = f.source();
    let pairs: Vec<(Object, Object)> = (0..s.count)
        .map(|_| Ok((random_object(&src, s.field, s.max_dim, &mut rng)?, random_object(&src, s.field, s.max_dim, &mut rng)?)))
        .collect::<Result<_>>()?;
    check_fullness_on(f, s, &pairs)
}

pub fn check_fullness_on(f: &FunctorHandle, s: &SampleSpec, pairs: &[(Object, Object)]) -> Result<VerificationReport> {
    let mut faithful = Check::new("faithful", format!("{} pairs", pairs.len()), s.seed);
    let mut full = Check::new("full", format!("{} pairs", pairs.len()), s.seed);
    for (x, y) in pairs {
        let before = hom_dim(x, y)?;
        let after = hom_dim(&f.apply(x)?, &f.apply(y)?)?;
        faithful.cases += 1;
        full.cases += 1;
        let note = format!("dim Hom {before} ↦ {after}");
        if after < before {
            faithful.fail(Witness::new(WitnessKind::HomMismatch, note.clone(), vec![x.clone(), y.clone()]));
        }
        if after != before {
            full.fail(Witness::new(WitnessKind::HomMismatch, note, vec![x.clone(), y.clone()]));
        }
    }
    Ok(VerificationReport::new(f.name(), s, vec![faithful, full]))
}

/// `dim Hom(M, N) − dim Ext(M, N) = ⟨dim M, dim N⟩` on random pairs.
pub fn euler_consistency(q: &Quiver, s: &SampleSpec) -> Result<VerificationReport> {
    let mut rng = sample::rng(s.seed);
    let mut check = Check::new("euler_form", format!("{} pairs, {}", s.count, s.describe()), s.seed);
    for _ in 0..s.count {
        let dm = sample::dims(q.vertices, s.max_dim, &mut rng);
        let m = sample::rep(q, s.field, &dm, &mut rng);
        let dn = sample::dims(q.vertices, s.max_dim, &mut rng);
        let n = sample::rep(q, s.field, &dn, &mut rng);
        let lhs = hom_dim(&m, &n)? as i64 - ext_quiver_dim(&m, &n)? as i64;
        let rhs = euler_form(q, &dm, &dn)?;
        check.cases += 1;
        if lhs != rhs {
            check.fail(Witness::new(WitnessKind::Euler, format!("{lhs} ≠ {rhs}"), vec![Object::Rep(m), Object::Rep(n)]));
        }
    }
    Ok(VerificationReport::new("euler_form".into(), s, vec![check]))
}

/// All submodules (as subrepresentations of the quiver view), ordered by dimension.
#[derive(Clone, Debug)]
pub struct SubmoduleLattice {
    members: Vec<Vec<Matrix>>,
}

impl SubmoduleLattice {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Vertex bases of the `i`-th submodule.
    pub fn member(&self, i: usize) -> &[Matrix] {
        &self.members[i]
    }

    pub fn dims(&self, i: usize) -> Vec<usize> {
        self.members[i].iter().map(|b| b.cols()).collect()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.members[i].iter().zip(&self.members[j]).all(|(a, b)| a.cols() == 0 || (b.cols() > 0 && b.spans(a)))
    }

    /// Index of the sum of two members.
    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        let sum = sum_spaces(&self.members[i], &self.members[j]);
        self.position(&sum)
    }

    /// Index of the intersection of two members.
    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        let inter: Vec<Matrix> = self.members[i].iter().zip(&self.members[j]).map(|(a, b)| intersect(a, b)).collect();
        self.position(&inter)
    }

    fn position(&self, spaces: &[Matrix]) -> Option<usize> {
        let k = key(spaces);
        self.members.iter().position(|m| key(m) == k)
    }

    /// Pairs `(i, j)` with `i` covered by `j`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let total = |i: usize| self.dims(i).iter().sum::<usize>();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if total(j) > total(i)
                    && self.leq(i, j)
                    && !(0..n).any(|k| total(k) > total(i) && total(k) < total(j) && self.leq(i, k) && self.leq(k, j))
                {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl Serialize for SubmoduleLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json {
            count: usize,
            members: Vec<Vec<MatrixJson>>,
            dims: Vec<Vec<usize>>,
            covers: Vec<(usize, usize)>,
        }
        Json {
            count: self.len(),
            members: self.members.iter().map(|m| pack_maps(m)).collect(),
            dims: (0..self.len()).map(|i| self.dims(i)).collect(),
            covers: self.covers(),
        }
        .serialize(s)
    }
}

fn key(spaces: &[Matrix]) -> Vec<Vec<Vec<String>>> {
    spaces.iter().map(|b| b.to_string_rows()).collect()
}

fn canonical(b: Matrix) -> Matrix {
    if b.cols() == 0 {
        b
    } else {
        let c = b.col_space();
        if c.cols() == 0 {
            Matrix::zeros(b.field(), b.rows(), 0)
        } else {
            c
        }
    }
}

fn sum_spaces(a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
    a.iter()
        .zip(b)
        .map(|(x, y)| canonical(Matrix::hstack(&[x, y]).expect("same ambient space")))
        .collect()
}

fn intersect(a: &Matrix, b: &Matrix) -> Matrix {
    if a.cols() == 0 || b.cols() == 0 {
        return Matrix::zeros(a.field(), a.rows(), 0);
    }
    // x = a·u = b·v  ⇔  [a | −b] (u; v) = 0
    let sys = Matrix::hstack(&[a, &-b]).expect("same ambient space");
    let k = sys.kernel_basis();
    if k.cols() == 0 {
        return Matrix::zeros(a.field(), a.rows(), 0);
    }
    canonical(a * &k.submatrix(0, a.cols(), 0, k.cols()))
}

/// Enumerates every submodule over a finite field: the cyclic submodules
/// spun from all vectors supported at a single vertex, closed under sums.
pub fn submodule_lattice<M: Module>(m: &M) -> Result<SubmoduleLattice> {
    let view = m.view();
    let f = view.field();
    let q = f.size().ok_or_else(|| Error::InvalidInput("submodule enumeration needs a finite field".into()))? as u128;
    let needed: u128 = view.dims().iter().map(|&d| q.saturating_pow(d as u32)).sum();
    let budget = enumeration_budget();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let zero: Vec<Matrix> = view.dims().iter().map(|&d| Matrix::zeros(f, d, 0)).collect();
    let mut cyclic: Vec<Vec<Matrix>> = Vec::new();
    let mut seen_cyclic = HashMap::new();
    for (v, &d) in view.dims().iter().enumerate() {
        for coords in enumerate_vectors(f, d) {
            if coords.iter().all(Scalar::is_zero) {
                continue;
            }
            let seeds: Vec<Matrix> = view
                .dims()
                .iter()
                .enumerate()
                .map(|(w, &dw)| if w == v { Matrix::from_fn(f, dw, 1, |i, _| coords[i].clone()) } else { Matrix::zeros(f, dw, 0) })
                .collect();
            let (_, inc) = spin_subrep(&view, &seeds)?;
            let spaces: Vec<Matrix> = inc.maps().iter().cloned().map(canonical).collect();
            if seen_cyclic.insert(key(&spaces), ()).is_none() {
                cyclic.push(spaces);
            }
        }
    }
    let mut members = vec![zero];
    let mut index: HashMap<Vec<Vec<Vec<String>>>, usize> = HashMap::from([(key(&members[0]), 0)]);
    for c in &cyclic {
        let current = members.len();
        for i in 0..current {
            let s = sum_spaces(&members[i], c);
            let k = key(&s);
            if !index.contains_key(&k) {
                index.insert(k, members.len());
                members.push(s);
            }
        }
        if members.len() as u128 > budget {
            return Err(Error::BudgetExceeded { needed: members.len() as u128, budget });
        }
    }
    members.sort_by_key(|m| (m.iter().map(|b| b.cols()).sum::<usize>(), key(m)));
    Ok(SubmoduleLattice { members })
}

/// Sends each submodule `M' ⊆ M` to the image of `F(M' ↪ M)` in `FM`. On
/// success returns the index map into the lattice of `FM`, which is then a
/// bijection preserving and reflecting inclusion; otherwise a description
/// of the first defect.
pub fn lattice_correspondence(f: &FunctorHandle, m: &Object) -> Result<std::result::Result<Vec<usize>, String>> {
    let fm = f.apply(m)?;
    let (lm, lfm) = (submodule_lattice(m)?, submodule_lattice(&fm)?);
    let view = m.view();
    let mut image = Vec::with_capacity(lm.len());
    for i in 0..lm.len() {
        let (sub, inc) = spin_subrep(&view, lm.member(i))?;
        let sub = m.from_view(&sub)?;
        let finc = f.apply_morphism(&sub, m, inc.maps())?;
        let spaces: Vec<Matrix> = finc.into_iter().map(canonical).collect();
        match lfm.position(&spaces) {
            Some(j) => image.push(j),
            None => return Ok(Err(format!("image of submodule {i} is not a submodule of FM"))),
        }
    }
    if lm.len() != lfm.len() {
        return Ok(Err(format!("{} submodules of M, {} of FM", lm.len(), lfm.len())));
    }
    let mut hit = vec![false; lfm.len()];
    for &j in &image {
        if std::mem::replace(&mut hit[j], true) {
            return Ok(Err("two submodules have the same image".into()));
        }
    }
    for i in 0..lm.len() {
        for j in 0..lm.len() {
            if lm.leq(i, j) != lfm.leq(image[i], image[j]) {
                return Ok(Err(format!("inclusion between submodules {i} and {j} is not preserved")));
            }
        }
    }
    Ok(Ok(image))
}

/// [`lattice_correspondence`] on fixtures and random modules.
pub fn check_lattice(f: &FunctorHandle, s: &SampleSpec, fixtures: &[Object]) -> Result<VerificationReport> {
    let mut rng = sample::rng(s.seed);
    let src = f.source();
    let mut inputs: Vec<Object> = fixtures.iter().map(|x| coerce(x, &src)).collect::<Result<_>>()?;
    for _ in 0..s.count {
        inputs.push(random_object(&src, s.field, s.max_dim, &mut rng)?);
    }
    let mut check = Check::new("submodule_lattice", format!("{} fixtures + {}", fixtures.len(), s.describe()), s.seed);
    for m in inputs {
        check.cases += 1;
        match lattice_correspondence(f, &m) {
            Ok(Ok(_)) => {}
            Ok(Err(note)) => check.fail(Witness::new(WitnessKind::Lattice, note, vec![m])),
            Err(Error::BudgetExceeded { .. }) => check.inconclusive += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(VerificationReport::new(f.name(), s, vec![check]))
}

/// Pairs of distinct nonzero scalars `{r, s}` with `r^m = s^m` (`m = 2`, or
/// `m = 3` in characteristic 2), pairwise disjoint.
fn fibre_pairs(field: FieldSpec, count: usize) -> Result<Vec<(Scalar, Scalar)>> {
    let mut out = Vec::new();
    match field.size() {
        None => {
            for r in 1..=count as i64 {
                out.push((field.int(r), field.int(-r)));
            }
        }
        Some(_) => {
            let m = if field.characteristic() == 2 { 3 } else { 2 };
            let mut fibres: Vec<(Scalar, Vec<Scalar>)> = Vec::new();
            for x in field.elements().expect("finite field") {
                if x.is_zero() {
                    continue;
                }
                let y = x.pow(m);
                match fibres.iter_mut().find(|(k, _)| *k == y) {
                    Some((_, v)) => v.push(x),
                    None => fibres.push((y, vec![x])),
                }
            }
            for (_, v) in fibres {
                if v.len() >= 2 && out.len() < count {
                    out.push((v[0].clone(), v[1].clone()));
                }
            }
        }
    }
    if out.len() < count {
        return Err(Error::FieldTooSmall(format!("need {count} disjoint pairs of brick indices")));
    }
    Ok(out)
}

/// The orthogonal embeddings `E_i: mod A_i → rep K_3`, one per algebra, as
/// composites `mod A_i → mod k⟨X_1..X_p⟩ → rep K_{p+1} → rep K_3`. The last
/// step is the extension embedding for a pair of bricks of dimension vector
/// `(2, 2)`, images of two-dimensional simples of `k⟨X, Y⟩` under splitting;
/// different algebras use disjoint pairs.
pub fn orthogonal_embeddings(presets: &[Preset], field: FieldSpec) -> Result<Vec<FunctorHandle>> {
    if presets.len() > 3 {
        return Err(Error::InvalidInput("at most three algebras".into()));
    }
    let pairs = fibre_pairs(field, presets.len())?;
    let excluded = [field.zero()];
    let split_l2 = FunctorHandle::split(Quiver::loops(2), field);
    let brick = |lambda: &Scalar| -> Result<AModule> {
        let s = klein_simple(lambda, &excluded)?;
        amodule_from_quiver_rep(split_l2.apply(&Object::Free(s))?.as_rep()?)
    };
    presets
        .iter()
        .zip(pairs)
        .map(|(p, (r, s))| {
            let a = p.algebra(field).ok_or_else(|| Error::InvalidInput(format!("{p} is not finite-dimensional")))?;
            let restrict = FunctorHandle::restrict(a);
            let gens = match restrict.target() {
                Category::Free(n) => n,
                _ => unreachable!("restriction lands in a free algebra"),
            };
            if gens + 1 > 4 {
                return Err(Error::Precondition(format!("{p} needs {} extension classes, only 4 available", gens + 1)));
            }
            let split = FunctorHandle::split(Quiver::loops(gens), field);
            let (u, v) = (brick(&r)?, brick(&s)?);
            let h = FunctorHandle::ext_embed(ExtEmbedData::from_modules(&u, &v, gens + 1, true)?);
            FunctorHandle::compose(FunctorHandle::compose(restrict, split)?, h)
        })
        .collect()
}

/// Builds [`orthogonal_embeddings`] and checks on sampled images: pairwise
/// vanishing of Hom in both directions, dimension vectors in `ℕ·(2, 2)`, and
/// `Hom(F_i X, U_i ⊕ V_i) ≠ 0`.
pub fn orthogonal_family(presets: &[Preset], s: &SampleSpec) -> Result<VerificationReport> {
    let embeddings = orthogonal_embeddings(presets, s.field)?;
    let mut rng = sample::rng(s.seed);
    let mut images: Vec<Vec<Object>> = Vec::new();
    let mut dims = Check::new("dimension_vectors", s.describe(), s.seed);
    for e in &embeddings {
        let mut imgs = Vec::new();
        for _ in 0..s.count {
            let x = random_object(&e.source(), s.field, s.max_dim, &mut rng)?;
            let fx = e.apply(&x)?;
            dims.cases += 1;
            let d = fx.dims();
            if d[0] != d[1] || d[0] % 2 != 0 {
                dims.fail(Witness::new(WitnessKind::DimensionVector, format!("image dimension vector {d:?}"), vec![x]));
            }
            imgs.push(fx);
        }
        images.push(imgs);
    }
    let mut cross = Check::new("cross_hom", format!("{} algebras × {} images", presets.len(), s.count), s.seed);
    for i in 0..images.len() {
        for j in 0..images.len() {
            if i == j {
                continue;
            }
            for x in &images[i] {
                for y in &images[j] {
                    cross.cases += 1;
                    if hom_dim(x, y)? != 0 {
                        cross.fail(Witness::new(WitnessKind::CrossHom, format!("Hom(F_{i} X, F_{j} Y) ≠ 0"), vec![x.clone(), y.clone()]));
                    }
                }
            }
        }
    }
    let name = format!("orthogonal_family({})", presets.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
    Ok(VerificationReport::new(name, s, vec![dims, cross]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FDAlgebra;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn identity_functor_passes() {
        let f = fp(3);
        let h = FunctorHandle::identity(Category::Rep(Quiver::kronecker(2)), f);
        let s = SampleSpec::new(f, 5, 6, 2).unwrap();
        assert!(check_embedding(&h, &s).unwrap().passed);
        assert!(check_fullness(&h, &s).unwrap().passed);
    }

    #[test]
    fn splitting_does_not_preserve_lattices() {
        let f = fp(2);
        let h = FunctorHandle::split(Quiver::loops(1), f);
        let m = Object::Free(FreeAlgModule::new(f, 1, vec![Matrix::zeros(f, 1, 1)]).unwrap());
        assert!(lattice_correspondence(&h, &m).unwrap().is_err());
        let id = FunctorHandle::identity(Category::Free(1), f);
        assert!(lattice_correspondence(&id, &m).unwrap().is_ok());
        let r = check_lattice(&h, &SampleSpec::new(f, 1, 2, 2).unwrap(), &[m]).unwrap();
        assert!(!r.passed);
        assert!(r.checks[0].witnesses[0].reverify(Some(&h), 1).unwrap());
    }

    #[test]
    fn lattice_counts() {
        let f = fp(2);
        let q = Quiver::loops(0);
        let simple = QuiverRep::new(q.clone(), f, vec![1], vec![]).unwrap();
        assert_eq!(submodule_lattice(&simple).unwrap().len(), 2);
        let double = QuiverRep::new(q, f, vec![2], vec![]).unwrap();
        let lat = submodule_lattice(&double).unwrap();
        assert_eq!(lat.len(), 5);
        assert_eq!(lat.covers().len(), 6);
    }

    #[test]
    fn non_exact_functor_is_caught() {
        let f = fp(3);
        let g = FunctorHandle::radical_top(f);
        let a = FDAlgebra::truncated_poly(f, 1);
        // X ⊂ A regular, spanned by the generator X
        let reg = Object::Alg(AModule::regular(&a));
        let x = a.basis_vector(a.generators()[0]);
        let (sub, inc) = spin_subrep(&reg.view(), &[x]).unwrap();
        let (quot, proj) = reg.view().quotient(inc.maps()).unwrap();
        let sub = reg.from_view(&sub).unwrap();
        let quot = reg.from_view(&quot).unwrap();
        assert!(!image_is_exact(&g, &sub, &reg, &quot, inc.maps(), proj.maps()).unwrap());
    }

    #[test]
    fn euler_identity_on_kronecker() {
        let s = SampleSpec::new(fp(7), 2, 10, 3).unwrap();
        assert!(euler_consistency(&Quiver::kronecker(3), &s).unwrap().passed);
    }

    #[test]
    fn witnesses_round_trip_through_json() {
        let f = FieldSpec::Rationals;
        let h = FunctorHandle::fn_kron(2, f).unwrap();
        let l = crate::quiver::kron_l(&crate::poly::Poly::from_ints(f, &[-1, 1])).unwrap();
        let s = SampleSpec::new(f, 1, 2, 2).unwrap();
        let report = check_embedding_with(&h, &s, &[Object::Rep(l)]).unwrap();
        assert!(!report.passed);
        let json = serde_json::to_string(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        let w = &back.check("indecomposables").unwrap().witnesses[0];
        assert!(w.reverify(Some(&h), 1).unwrap());
    }
}
