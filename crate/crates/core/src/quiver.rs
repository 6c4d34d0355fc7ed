//! Quivers, their representations and morphisms, and the Kronecker-module
//! families `P(i)`, `I(i)`, `L(Q)`.
//!
//! For the Kronecker quiver `K_n` vertex 0 is the sink and vertex 1 the source;
//! every arrow runs `1 → 0`. Dimension vectors are listed as (sink, source), so
//! `P(i)` has dimension vector `(i+1, i)` and `I(i)` has `(i, i+1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::{Matrix, Quotient};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: usize,
    pub arrows: Vec<(usize, usize)>,
}

pub type DimVector = Vec<usize>;

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Quiver> {
        if let Some(&(s, t)) = arrows.iter().find(|&&(s, t)| s >= vertices || t >= vertices) {
            return Err(Error::InvalidInput(format!("arrow ({s},{t}) has an endpoint outside 0..{vertices}")));
        }
        Ok(Quiver { vertices, arrows })
    }

    /// `K_n`: `n` parallel arrows from vertex 1 (source) to vertex 0 (sink).
    pub fn kronecker(n: usize) -> Quiver {
        Quiver { vertices: 2, arrows: vec![(1, 0); n] }
    }

    /// `L_n`: one vertex with `n` loops.
    pub fn loops(n: usize) -> Quiver {
        Quiver { vertices: 1, arrows: vec![(0, 0); n] }
    }

    /// Whether this is `K_n` for some `n` in the orientation used here.
    pub fn kronecker_arrows(&self) -> Option<usize> {
        (self.vertices == 2 && self.arrows.iter().all(|&a| a == (1, 0))).then_some(self.arrows.len())
    }

    pub fn loop_count(&self) -> Option<usize> {
        (self.vertices == 1).then_some(self.arrows.len())
    }

    pub fn incoming(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].1 == v).collect()
    }

    pub fn outgoing(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].0 == v).collect()
    }

    /// No arrow starts here.
    pub fn is_sink(&self, v: usize) -> bool {
        self.outgoing(v).is_empty()
    }

    /// No arrow ends here.
    pub fn is_source(&self, v: usize) -> bool {
        self.incoming(v).is_empty()
    }

    pub fn has_oriented_cycle(&self) -> bool {
        // Kahn's algorithm
        let mut indeg = vec![0usize; self.vertices];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut stack: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &a in &self.outgoing(v) {
                let t = self.arrows[a].1;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
        seen < self.vertices
    }

    /// Whether the underlying graph (ignoring orientation) contains a cycle,
    /// counting loops and multiple edges.
    pub fn has_cycle(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(s, t) in &self.arrows {
            let (a, b) = (find(&mut parent, s), find(&mut parent, t));
            if a == b {
                return true;
            }
            parent[a] = b;
        }
        false
    }
}

/// `Σ_i α_i β_i − Σ_{i→j} α_i β_j`.
pub fn euler_form(q: &Quiver, alpha: &[usize], beta: &[usize]) -> Result<i64> {
    if alpha.len() != q.vertices || beta.len() != q.vertices {
        return Err(Error::Dimension(format!(
            "dimension vectors of length {} and {} for a quiver with {} vertices",
            alpha.len(),
            beta.len(),
            q.vertices
        )));
    }
    let diag: i64 = alpha.iter().zip(beta).map(|(&a, &b)| (a * b) as i64).sum();
    let arrows: i64 = q.arrows.iter().map(|&(s, t)| (alpha[s] * beta[t]) as i64).sum();
    Ok(diag - arrows)
}

pub fn tits_form(q: &Quiver, alpha: &[usize]) -> Result<i64> {
    euler_form(q, alpha, alpha)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuiverRep {
    quiver: Quiver,
    field: FieldSpec,
    dims: DimVector,
    maps: Vec<Matrix>,
}

impl QuiverRep {
    pub fn new(quiver: Quiver, field: FieldSpec, dims: DimVector, maps: Vec<Matrix>) -> Result<QuiverRep> {
        if dims.len() != quiver.vertices {
            return Err(Error::Dimension(format!("{} dims for {} vertices", dims.len(), quiver.vertices)));
        }
        if maps.len() != quiver.arrows.len() {
            return Err(Error::Dimension(format!("{} matrices for {} arrows", maps.len(), quiver.arrows.len())));
        }
        for (a, (m, &(s, t))) in maps.iter().zip(&quiver.arrows).enumerate() {
            if m.field() != field {
                return Err(Error::FieldMismatch(m.field(), field));
            }
            if m.shape() != (dims[t], dims[s]) {
                return Err(Error::Dimension(format!(
                    "arrow {a}: matrix is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[t],
                    dims[s]
                )));
            }
        }
        Ok(QuiverRep { quiver, field, dims, maps })
    }

    pub fn zero(quiver: &Quiver, field: FieldSpec) -> QuiverRep {
        QuiverRep::from_dims_zero(quiver, field, vec![0; quiver.vertices])
    }

    /// The representation with the given dimensions and all arrow maps zero.
    pub fn from_dims_zero(quiver: &Quiver, field: FieldSpec, dims: DimVector) -> QuiverRep {
        let maps = quiver.arrows.iter().map(|&(s, t)| Matrix::zeros(field, dims[t], dims[s])).collect();
        QuiverRep { quiver: quiver.clone(), field, dims, maps }
    }

    /// The simple representation concentrated at `v` (for quivers without
    /// loops at `v`).
    pub fn simple(quiver: &Quiver, field: FieldSpec, v: usize) -> QuiverRep {
        let mut dims = vec![0; quiver.vertices];
        dims[v] = 1;
        QuiverRep::from_dims_zero(quiver, field, dims)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &Matrix {
        &self.maps[arrow]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Offset of each vertex space inside the concatenated total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            off.push(acc);
            acc += d;
        }
        off
    }

    /// Arrow maps as operators on the total space.
    pub fn total_operators(&self) -> Vec<Matrix> {
        let n = self.total_dim();
        let off = self.offsets();
        self.quiver
            .arrows
            .iter()
            .zip(&self.maps)
            .map(|(&(s, t), m)| {
                let mut op = Matrix::zeros(self.field, n, n);
                op.set_block(off[t], off[s], m);
                op
            })
            .collect()
    }

    pub fn direct_sum(&self, other: &QuiverRep) -> Result<QuiverRep> {
        if self.quiver != other.quiver {
            return Err(Error::InvalidInput("direct sum of representations of different quivers".into()));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| Matrix::block_diag(&[a, b])).collect();
        QuiverRep::new(self.quiver.clone(), self.field, dims, maps)
    }

    pub fn direct_sum_all(parts: &[QuiverRep]) -> Result<QuiverRep> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        rest.iter().try_fold(first.clone(), |acc, p| acc.direct_sum(p))
    }

    /// Restriction to subspaces given by column bases, one per vertex.
    /// Fails if the subspaces are not invariant.
    pub fn restrict(&self, bases: &[Matrix]) -> Result<(QuiverRep, RepMorphism)> {
        let dims: DimVector = bases.iter().map(|b| b.cols()).collect();
        let mut maps = Vec::with_capacity(self.maps.len());
        for (a, &(s, t)) in self.quiver.arrows.iter().enumerate() {
            let img = &self.maps[a] * &bases[s];
            let m = if dims[t] == 0 {
                if !img.is_zero() {
                    return Err(Error::InvalidInput(format!("subspace not invariant under arrow {a}")));
                }
                Matrix::zeros(self.field, 0, dims[s])
            } else {
                bases[t]
                    .solve(&img)?
                    .ok_or_else(|| Error::InvalidInput(format!("subspace not invariant under arrow {a}")))?
            };
            maps.push(m);
        }
        let sub = QuiverRep::new(self.quiver.clone(), self.field, dims, maps)?;
        let inc = RepMorphism::new_unchecked(sub.clone(), self.clone(), bases.to_vec());
        Ok((sub, inc))
    }

    /// Quotient by invariant subspaces given by column bases, one per vertex.
    pub fn quotient(&self, bases: &[Matrix]) -> Result<(QuiverRep, RepMorphism)> {
        let quots: Vec<Quotient> = (0..self.quiver.vertices)
            .map(|v| Quotient::new(self.field, self.dims[v], &bases[v], &[]))
            .collect();
        let dims: DimVector = quots.iter().map(|q| q.dim()).collect();
        let maps = self
            .quiver
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| &(quots[t].projection() * &self.maps[a]) * quots[s].section())
            .collect();
        let q = QuiverRep::new(self.quiver.clone(), self.field, dims, maps)?;
        let proj = RepMorphism::new_unchecked(self.clone(), q.clone(), quots.iter().map(|q| q.projection().clone()).collect());
        Ok((q, proj))
    }

    /// Change of basis: `g_x` invertible at each vertex, new maps `g_t M(a) g_s⁻¹`.
    pub fn conjugate(&self, g: &[Matrix]) -> Result<QuiverRep> {
        let inv: Vec<Matrix> = g
            .iter()
            .map(|m| m.inverse().ok_or_else(|| Error::InvalidInput("basis change is not invertible".into())))
            .collect::<Result<_>>()?;
        let maps = self
            .quiver
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| &(&g[t] * &self.maps[a]) * &inv[s])
            .collect();
        QuiverRep::new(self.quiver.clone(), self.field, self.dims.clone(), maps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMorphism {
    source: QuiverRep,
    target: QuiverRep,
    maps: Vec<Matrix>,
}

impl RepMorphism {
    /// Checks shapes and the intertwining condition `f_t M(a) = N(a) f_s`.
    pub fn new(source: QuiverRep, target: QuiverRep, maps: Vec<Matrix>) -> Result<RepMorphism> {
        if source.quiver != target.quiver {
            return Err(Error::InvalidInput("morphism between representations of different quivers".into()));
        }
        if maps.len() != source.quiver.vertices {
            return Err(Error::Dimension(format!("{} vertex maps for {} vertices", maps.len(), source.quiver.vertices)));
        }
        for (v, f) in maps.iter().enumerate() {
            if f.shape() != (target.dims[v], source.dims[v]) {
                return Err(Error::Dimension(format!("vertex map {v} has shape {:?}", f.shape())));
            }
        }
        let m = RepMorphism { source, target, maps };
        if !m.intertwines() {
            return Err(Error::InvalidInput("vertex maps do not intertwine the arrow maps".into()));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: QuiverRep, target: QuiverRep, maps: Vec<Matrix>) -> RepMorphism {
        RepMorphism { source, target, maps }
    }

    pub fn identity(m: &QuiverRep) -> RepMorphism {
        let maps = m.dims.iter().map(|&d| Matrix::identity(m.field, d)).collect();
        RepMorphism { source: m.clone(), target: m.clone(), maps }
    }

    pub fn zero(source: &QuiverRep, target: &QuiverRep) -> RepMorphism {
        let maps = (0..source.quiver.vertices)
            .map(|v| Matrix::zeros(source.field, target.dims[v], source.dims[v]))
            .collect();
        RepMorphism { source: source.clone(), target: target.clone(), maps }
    }

    pub fn intertwines(&self) -> bool {
        self.source.quiver.arrows.iter().enumerate().all(|(a, &(s, t))| {
            &self.maps[t] * &self.source.maps[a] == &self.target.maps[a] * &self.maps[s]
        })
    }

    pub fn source(&self) -> &QuiverRep {
        &self.source
    }

    pub fn target(&self) -> &QuiverRep {
        &self.target
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RepMorphism) -> Result<RepMorphism> {
        if self.target != other.source {
            return Err(Error::InvalidInput("morphisms are not composable".into()));
        }
        let maps = self.maps.iter().zip(&other.maps).map(|(f, g)| g * f).collect();
        Ok(RepMorphism { source: self.source.clone(), target: other.target.clone(), maps })
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn is_iso(&self) -> bool {
        self.maps.iter().all(|m| m.is_invertible())
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows())
    }

    /// Kernel with its inclusion.
    pub fn kernel(&self) -> Result<(QuiverRep, RepMorphism)> {
        let bases: Vec<Matrix> = self.maps.iter().map(|f| f.kernel_basis()).collect();
        self.source.restrict(&bases)
    }

    /// Image with its inclusion into the target.
    pub fn image(&self) -> Result<(QuiverRep, RepMorphism)> {
        let bases: Vec<Matrix> = self.maps.iter().map(|f| f.col_space()).collect();
        self.target.restrict(&bases)
    }

    /// Cokernel with its projection.
    pub fn cokernel(&self) -> Result<(QuiverRep, RepMorphism)> {
        let bases: Vec<Matrix> = self.maps.iter().map(|f| f.col_space()).collect();
        self.target.quotient(&bases)
    }
}

pub fn kernel_rep(f: &RepMorphism) -> Result<(QuiverRep, RepMorphism)> {
    f.kernel()
}

pub fn cokernel_rep(f: &RepMorphism) -> Result<(QuiverRep, RepMorphism)> {
    f.cokernel()
}

pub fn image_rep(f: &RepMorphism) -> Result<(QuiverRep, RepMorphism)> {
    f.image()
}

/// Smallest subrepresentation containing the given seed vectors (columns, one
/// matrix per vertex), with its inclusion. Bases are canonical.
pub fn spin_subrep(m: &QuiverRep, seeds: &[Matrix]) -> Result<(QuiverRep, RepMorphism)> {
    if seeds.len() != m.quiver.vertices {
        return Err(Error::Dimension(format!("{} seed blocks for {} vertices", seeds.len(), m.quiver.vertices)));
    }
    for (v, s) in seeds.iter().enumerate() {
        if s.rows() != m.dims[v] {
            return Err(Error::Dimension(format!("seeds at vertex {v} have {} rows, expected {}", s.rows(), m.dims[v])));
        }
    }
    let mut spaces: Vec<Matrix> = seeds.iter().map(|s| s.col_space()).collect();
    loop {
        let mut grew = false;
        for (a, &(s, t)) in m.quiver.arrows.iter().enumerate() {
            if spaces[s].cols() == 0 {
                continue;
            }
            let img = &m.maps[a] * &spaces[s];
            if !spaces[t].spans(&img) {
                let joined = if spaces[t].cols() == 0 { img } else { Matrix::hstack(&[&spaces[t], &img])? };
                spaces[t] = joined.col_space();
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let spaces: Vec<Matrix> = spaces
        .into_iter()
        .enumerate()
        .map(|(v, s)| if s.cols() == 0 { Matrix::zeros(m.field, m.dims[v], 0) } else { s })
        .collect();
    m.restrict(&spaces)
}

/// Splits off the simple injective summands: at each source vertex `x`, the
/// vectors killed by every outgoing arrow span a summand `S(x)^r`. Returns the
/// complement and the multiplicities `r` per vertex (zero at non-sources).
pub fn strip_simple_injectives(m: &QuiverRep) -> Result<(QuiverRep, Vec<usize>)> {
    let q = &m.quiver;
    let mut mult = vec![0; q.vertices];
    let mut bases = Vec::with_capacity(q.vertices);
    for v in 0..q.vertices {
        let d = m.dims[v];
        if !q.is_source(v) || d == 0 {
            bases.push(Matrix::identity(m.field, d));
            continue;
        }
        let out = q.outgoing(v);
        let k = if out.is_empty() {
            Matrix::identity(m.field, d)
        } else {
            let stacked: Vec<&Matrix> = out.iter().map(|&a| &m.maps[a]).collect();
            let nonempty: Vec<&Matrix> = stacked.into_iter().filter(|x| x.rows() > 0).collect();
            if nonempty.is_empty() {
                Matrix::identity(m.field, d)
            } else {
                Matrix::vstack(&nonempty)?.kernel_basis()
            }
        };
        mult[v] = k.cols();
        // complement: standard vectors outside the kernel
        let qt = Quotient::new(m.field, d, &k, &[]);
        bases.push(qt.section().clone());
    }
    let (rest, _) = m.restrict(&bases)?;
    Ok((rest, mult))
}

fn kron(n: usize) -> Quiver {
    Quiver::kronecker(n)
}

/// Preprojective `P(i)` over `K_2`: source basis `x_1..x_i`, sink basis
/// `y_1..y_{i+1}`, `λ(x_j) = y_j`, `ρ(x_j) = y_{j+1}`.
pub fn kron_p(field: FieldSpec, i: usize) -> QuiverRep {
    let lam = Matrix::from_fn(field, i + 1, i, |r, c| if r == c { field.one() } else { field.zero() });
    let rho = Matrix::from_fn(field, i + 1, i, |r, c| if r == c + 1 { field.one() } else { field.zero() });
    QuiverRep::new(kron(2), field, vec![i + 1, i], vec![lam, rho]).unwrap()
}

/// Preinjective `I(i)` over `K_2`: source basis `x_1..x_{i+1}`, sink basis
/// `y_1..y_i`, `λ(x_j) = y_j` (`j ≤ i`), `ρ(x_j) = y_{j-1}` (`j ≥ 2`).
pub fn kron_i(field: FieldSpec, i: usize) -> QuiverRep {
    let lam = Matrix::from_fn(field, i, i + 1, |r, c| if r == c { field.one() } else { field.zero() });
    let rho = Matrix::from_fn(field, i, i + 1, |r, c| if c == r + 1 { field.one() } else { field.zero() });
    QuiverRep::new(kron(2), field, vec![i, i + 1], vec![lam, rho]).unwrap()
}

/// Regular `L(Q)` over `K_2`: `λ` the identity and `ρ` the companion matrix.
pub fn kron_l(q: &Poly) -> Result<QuiverRep> {
    let deg = q.degree().unwrap_or(0);
    if !q.is_monic() || deg == 0 {
        return Err(Error::InvalidInput(format!("L(Q) needs a normed polynomial of degree ≥ 1, got {q}")));
    }
    let field = q.field();
    QuiverRep::new(kron(2), field, vec![deg, deg], vec![Matrix::identity(field, deg), q.companion()])
}

/// Regular module at infinity: `ρ` the identity and `λ` a nilpotent Jordan block
/// of size `k`.
pub fn kron_l_infinity(field: FieldSpec, k: usize) -> QuiverRep {
    let jordan = Matrix::from_fn(field, k, k, |r, c| if r == c + 1 { field.one() } else { field.zero() });
    QuiverRep::new(kron(2), field, vec![k, k], vec![jordan, Matrix::identity(field, k)]).unwrap()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reflection {
    /// At a sink: replace the space by the kernel of the incoming sum map.
    Plus,
    /// At a source: replace the space by the cokernel of the outgoing sum map.
    Minus,
}

/// BGP reflection at `vertex`. On `K_2` the reflected quiver is identified
/// with `K_2` again by swapping the vertices and relabelling the reversed
/// arrows as `λ' = ρ*`, `ρ' = −λ*`; with this choice every `L(Q)` is fixed on
/// the nose. On other quivers the arrows at `vertex` are reversed in place.
pub fn bgp_reflect(m: &QuiverRep, vertex: usize, dir: Reflection) -> Result<QuiverRep> {
    let q = &m.quiver;
    if vertex >= q.vertices {
        return Err(Error::InvalidInput(format!("vertex {vertex} out of range")));
    }
    if q.arrows.iter().any(|&(s, t)| s == vertex && t == vertex) {
        return Err(Error::Precondition("cannot reflect at a vertex with a loop".into()));
    }
    let field = m.field;
    let (new_dim, star): (usize, Vec<(usize, Matrix)>) = match dir {
        Reflection::Plus => {
            if !q.is_sink(vertex) {
                return Err(Error::Precondition(format!("vertex {vertex} is not a sink")));
            }
            let inc = q.incoming(vertex);
            let widths: Vec<usize> = inc.iter().map(|&a| m.dims[q.arrows[a].0]).collect();
            let total: usize = widths.iter().sum();
            let k = if total == 0 {
                Matrix::zeros(field, 0, 0)
            } else if m.dims[vertex] == 0 {
                Matrix::identity(field, total)
            } else {
                let parts: Vec<&Matrix> = inc.iter().map(|&a| &m.maps[a]).collect();
                Matrix::hstack(&parts)?.kernel_basis()
            };
            let mut off = 0;
            let mut star = Vec::new();
            for (idx, &a) in inc.iter().enumerate() {
                let block = k.submatrix(off, off + widths[idx], 0, k.cols());
                star.push((a, block));
                off += widths[idx];
            }
            (k.cols(), star)
        }
        Reflection::Minus => {
            if !q.is_source(vertex) {
                return Err(Error::Precondition(format!("vertex {vertex} is not a source")));
            }
            let out = q.outgoing(vertex);
            let heights: Vec<usize> = out.iter().map(|&a| m.dims[q.arrows[a].1]).collect();
            let total: usize = heights.iter().sum();
            let image = if total == 0 || m.dims[vertex] == 0 {
                Matrix::zeros(field, total, 0)
            } else {
                let parts: Vec<&Matrix> = out.iter().map(|&a| &m.maps[a]).collect();
                Matrix::vstack(&parts)?
            };
            let qt = Quotient::new(field, total, &image, &[]);
            let pi = qt.projection();
            let mut off = 0;
            let mut star = Vec::new();
            for (idx, &a) in out.iter().enumerate() {
                let block = pi.submatrix(0, pi.rows(), off, off + heights[idx]);
                star.push((a, block));
                off += heights[idx];
            }
            (qt.dim(), star)
        }
    };
    let mut dims = m.dims.clone();
    dims[vertex] = new_dim;
    if q.kronecker_arrows() == Some(2) {
        // swap vertices and relabel
        let lam_star = star[0].1.clone();
        let rho_star = star[1].1.clone();
        let dims = vec![dims[1], dims[0]];
        return QuiverRep::new(kron(2), field, dims, vec![rho_star, -&lam_star]);
    }
    let mut arrows = q.arrows.clone();
    let mut maps = m.maps.clone();
    for (a, mat) in star {
        let (s, t) = arrows[a];
        arrows[a] = (t, s);
        maps[a] = mat;
    }
    if q.kronecker_arrows().is_some() {
        // K_n with n ≠ 2: reversed arrows run 0 → 1; swap vertices to restore 1 → 0
        let arrows = arrows.iter().map(|&(s, t)| (1 - s, 1 - t)).collect();
        return QuiverRep::new(Quiver { vertices: 2, arrows }, field, vec![dims[1], dims[0]], maps);
    }
    QuiverRep::new(Quiver { vertices: q.vertices, arrows }, field, dims, maps)
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    field: FieldSpec,
    quiver: Quiver,
    dims: DimVector,
    matrices: Vec<Vec<Vec<String>>>,
}

impl Serialize for QuiverRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RepJson {
            field: self.field,
            quiver: self.quiver.clone(),
            dims: self.dims.clone(),
            matrices: self.maps.iter().map(|m| m.to_string_rows()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuiverRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RepJson::deserialize(d)?;
        let quiver = Quiver::new(j.quiver.vertices, j.quiver.arrows).map_err(serde::de::Error::custom)?;
        if j.dims.len() != quiver.vertices || j.matrices.len() != quiver.arrows.len() {
            return Err(serde::de::Error::custom("dims/matrices do not match the quiver"));
        }
        let maps = quiver
            .arrows
            .iter()
            .zip(&j.matrices)
            .map(|(&(s, t), rows)| Matrix::from_string_rows(j.field, j.dims[t], j.dims[s], rows))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        QuiverRep::new(quiver, j.field, j.dims, maps).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    #[test]
    fn euler_examples() {
        assert_eq!(tits_form(&Quiver::kronecker(2), &[1, 1]).unwrap(), 0);
        assert_eq!(tits_form(&Quiver::kronecker(3), &[2, 2]).unwrap(), -4);
        assert_eq!(euler_form(&Quiver::kronecker(3), &[1, 1], &[1, 1]).unwrap(), -1);
        // Hom(S_source, S_sink) = 0, Ext = 2
        assert_eq!(euler_form(&Quiver::kronecker(2), &[0, 1], &[1, 0]).unwrap(), -2);
        assert!(euler_form(&Quiver::kronecker(2), &[1], &[1, 1]).is_err());
    }

    #[test]
    fn direct_sum_dims() {
        let f = f7();
        let s = kron_p(f, 0).direct_sum(&kron_p(f, 1)).unwrap();
        assert_eq!(s.dims(), &[3, 1]);
        let z = QuiverRep::zero(&Quiver::kronecker(2), f);
        assert_eq!(kron_p(f, 2).direct_sum(&z).unwrap(), kron_p(f, 2));
    }

    #[test]
    fn kronecker_family_dims() {
        let f = f7();
        assert_eq!(kron_p(f, 0).dims(), &[1, 0]);
        assert_eq!(kron_i(f, 0).dims(), &[0, 1]);
        let l = kron_l(&Poly::from_ints(f, &[-1, 1])).unwrap();
        assert_eq!(l.map(0), &Matrix::identity(f, 1));
        assert_eq!(l.map(1), &Matrix::identity(f, 1));
    }

    #[test]
    fn kernel_and_cokernel_trivia() {
        let f = f7();
        let m = kron_p(f, 2);
        let (k, _) = RepMorphism::identity(&m).kernel().unwrap();
        assert!(k.is_zero());
        let z = RepMorphism::zero(&kron_p(f, 0), &m);
        let (c, _) = z.cokernel().unwrap();
        assert_eq!(c, m);
    }

    #[test]
    fn spin_examples() {
        let f = f7();
        let p1 = kron_p(f, 1);
        let y1 = Matrix::from_ints(f, 2, 1, &[1, 0]);
        let (sub, inc) = spin_subrep(&p1, &[y1, Matrix::zeros(f, 1, 0)]).unwrap();
        assert_eq!(sub.dims(), &[1, 0]);
        assert!(inc.intertwines());
        let (all, _) = spin_subrep(&p1, &[Matrix::identity(f, 2), Matrix::identity(f, 1)]).unwrap();
        assert_eq!(all.dims(), p1.dims());
        let (none, _) = spin_subrep(&p1, &[Matrix::zeros(f, 2, 0), Matrix::zeros(f, 1, 0)]).unwrap();
        assert!(none.is_zero());
    }

    #[test]
    fn strip_examples() {
        let f = f7();
        let (r, mult) = strip_simple_injectives(&kron_i(f, 0)).unwrap();
        assert!(r.is_zero());
        assert_eq!(mult, vec![0, 1]);
        for i in 0..4 {
            let (r, mult) = strip_simple_injectives(&kron_p(f, i)).unwrap();
            assert_eq!(r, kron_p(f, i));
            assert_eq!(mult, vec![0, 0]);
        }
        let m = kron_p(f, 2).direct_sum(&kron_i(f, 0)).unwrap();
        let (r, mult) = strip_simple_injectives(&m).unwrap();
        assert_eq!(r.dims(), kron_p(f, 2).dims());
        assert_eq!(mult, vec![0, 1]);
    }

    #[test]
    fn reflections_on_kronecker() {
        let f = f7();
        assert!(bgp_reflect(&kron_p(f, 0), 0, Reflection::Plus).unwrap().is_zero());
        assert!(bgp_reflect(&kron_i(f, 0), 1, Reflection::Minus).unwrap().is_zero());
        assert_eq!(bgp_reflect(&kron_p(f, 1), 0, Reflection::Plus).unwrap().dims(), &[1, 0]);
        assert_eq!(bgp_reflect(&kron_p(f, 0), 1, Reflection::Minus).unwrap().dims(), &[2, 1]);
        for q in [Poly::from_ints(f, &[-1, 1]), Poly::from_ints(f, &[3, 2, 1])] {
            let l = kron_l(&q).unwrap();
            assert_eq!(bgp_reflect(&l, 0, Reflection::Plus).unwrap(), l);
            assert_eq!(bgp_reflect(&l, 1, Reflection::Minus).unwrap(), l);
        }
        assert!(bgp_reflect(&kron_p(f, 1), 1, Reflection::Plus).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = kron_l(&Poly::from_ints(FieldSpec::Rationals, &[1, 3, 1])).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: QuiverRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
