use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use quiverkit::algebra::{AModule, FDAlgebra, Preset};
use quiverkit::functors::{eilenberg_watts, klein_simple, FunctorSpec, Object};
use quiverkit::homology::{decompose, ext_derivations, ext_quiver_dim, hom_basis, is_indecomposable, Module, Options};
use quiverkit::quiver::{kron_i, kron_l, kron_l_infinity, kron_p, Quiver, QuiverRep};
use quiverkit::verify::{
    check_embedding_with, check_fullness, check_lattice, euler_consistency, orthogonal_family, standard_fixtures,
    submodule_lattice, SampleSpec, VerificationReport,
};
use quiverkit::{FieldSpec, Poly};
use serde::{Deserialize, Serialize};
use serde_json::json;

const PRESETS: [&str; 10] = ["k", "nil2", "nil3", "trunc1", "trunc2", "kron2", "kron3", "free1", "free2", "free3"];
const QUIVERS: [&str; 4] = ["kron2", "kron3", "loops1", "loops2"];

/// Exact computations with quiver representations, modules over
/// finite-dimensional algebras, and functors between their categories.
#[derive(Parser, Debug)]
#[command(name = "quiverkit", version)]
struct Cli {
    /// Ground field: `rationals` or `q<p>` for a prime p.
    #[arg(long, global = true, default_value = "rationals")]
    field: String,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write JSON here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shipped algebras, quivers and standard modules.
    #[command(subcommand)]
    Preset(PresetCmd),
    /// Build, apply and compose functors between module categories.
    #[command(subcommand)]
    Functor(FunctorCmd),
    /// Basis of the homomorphism space between two modules.
    Hom { m: PathBuf, n: PathBuf },
    /// Dimension of Ext^1(M, N).
    Ext { m: PathBuf, n: PathBuf },
    /// Splits a module into indecomposable summands.
    Decompose { m: PathBuf },
    /// Lists all submodules of a module over a finite field, with covering relations.
    Lattice { m: PathBuf },
    /// Sample-based checks that a functor is an embedding, and related properties.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
enum PresetCmd {
    /// Names of shipped algebras and quivers.
    List,
    /// Structure constants of a shipped algebra.
    Show { name: String },
    /// A standard module. `P<i>`, `I<i>`: preprojective and preinjective
    /// Kronecker modules; `L:<c0,c1,..>`: the regular Kronecker module of a
    /// monic polynomial (coefficients from the constant term up); `Linf<k>`:
    /// the regular module at infinity; `regular:<algebra>`: the regular
    /// module; `simple:<quiver>:<v>`: a simple representation;
    /// `klein:<λ>:<m1,..>`: the simple module of k<X,Y> with x diagonal,
    /// y a cyclic shift.
    Module { name: String },
}

#[derive(Subcommand, Debug)]
enum FunctorCmd {
    /// Writes a functor handle (JSON) for later use.
    Build(FunctorArgs),
    /// Applies a functor handle to a module file.
    Apply { handle: PathBuf, module: PathBuf },
    /// Composite handle: first `a`, then `b`.
    Compose { a: PathBuf, b: PathBuf },
    /// Recovers a bimodule B with F ≅ B ⊗ − from an exact functor.
    Bimodule { handle: PathBuf },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Identity on `--category`.
    Identity,
    /// Vertex splitting for `--quiver`.
    Split,
    /// Bipartite-quiver embedding into `--algebra` along rad^`--ideal-power`.
    Jans,
    /// mod k<X_1..X_n> into modules over k[X,Y]/(X,Y)^{n+1}.
    Gp,
    /// Modules over the free algebra on n(n+1) generators into modules over k<X,Y>.
    Brenner,
    /// Extensions of the source simple by the sink simple of K_n.
    ExtSimples,
    /// Kronecker endofunctor of rep K_2 built from its bimodule; X ↦ X^n on regular modules.
    Fn,
    /// M ↦ (rad M, top M) from modules over k[X,Y]/(X,Y)^2 to rep K_2.
    RadicalTop,
    /// rep K_2 to modules over k[X,Y]/(X,Y)^2 with square-zero action.
    SquareZero,
    /// mod k[T] into rep K_2.
    Kt,
    /// Restriction from modules over `--algebra` to the free algebra on its generators.
    Restrict,
}

#[derive(Args, Debug)]
struct FunctorArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    n: Option<usize>,
    /// Algebra preset, e.g. `trunc2` or `nil3`.
    #[arg(long)]
    algebra: Option<String>,
    #[arg(long, default_value_t = 2)]
    ideal_power: usize,
    /// Quiver for `split`: `kron<n>` or `loops<n>`.
    #[arg(long)]
    quiver: Option<String>,
    /// Category for `identity`: `rep:kron<n>`, `rep:loops<n>`, `mod:<preset>`, `free<n>`.
    #[arg(long)]
    category: Option<String>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long, default_value_t = 10)]
    samples: usize,
    /// Dimension bound: per vertex for representations, total otherwise.
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
}

#[derive(Args, Debug)]
struct FunctorChoice {
    /// Functor kind, or `--handle` for a built functor.
    #[arg(long, value_enum, required_unless_present = "handle")]
    functor: Option<Kind>,
    #[arg(long, conflicts_with = "functor")]
    handle: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    algebra: Option<String>,
    #[arg(long, default_value_t = 2)]
    ideal_power: usize,
    #[arg(long)]
    quiver: Option<String>,
    #[arg(long)]
    category: Option<String>,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Exactness, preservation of indecomposables and reflection of
    /// isomorphism on random samples plus standard fixtures.
    Embedding {
        #[command(flatten)]
        functor: FunctorChoice,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Compares dim Hom(X, Y) with dim Hom(FX, FY) on random pairs.
    Fullness {
        #[command(flatten)]
        functor: FunctorChoice,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Checks that M' ↦ FM' is an isomorphism of submodule lattices.
    Lattice {
        #[command(flatten)]
        functor: FunctorChoice,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// dim Hom − dim Ext against the Euler form on random Kronecker pairs.
    Euler {
        /// Number of Kronecker arrows.
        #[arg(long, default_value_t = 2)]
        arrows: usize,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Embeddings of several algebras into rep K_3 with pairwise orthogonal images.
    Orthogonal {
        /// Comma-separated algebra presets (at most three).
        #[arg(long, value_delimiter = ',', default_value = "nil1,nil2")]
        algebras: Vec<String>,
        #[command(flatten)]
        sample: SampleArgs,
    },
}

#[derive(Serialize, Deserialize)]
struct Handle {
    field: FieldSpec,
    functor: FunctorSpec,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_module(path: &Path) -> anyhow::Result<Object> {
    let text = read_file(path)?;
    let obj = serde_json::from_str::<Object>(&text)
        .or_else(|_| serde_json::from_str::<QuiverRep>(&text).map(Object::Rep))
        .with_context(|| format!("{} is not a module file", path.display()))?;
    Ok(obj)
}

fn read_handle(path: &Path) -> anyhow::Result<Handle> {
    serde_json::from_str(&read_file(path)?).with_context(|| format!("{} is not a functor handle", path.display()))
}

fn same_field(objects: &[&Object]) -> anyhow::Result<FieldSpec> {
    let f = objects[0].field();
    if objects.iter().any(|o| o.field() != f) {
        bail!("modules are over different fields");
    }
    Ok(f)
}

fn quiver(name: &str) -> anyhow::Result<Quiver> {
    if let Some(n) = name.strip_prefix("kron") {
        return Ok(Quiver::kronecker(n.parse()?));
    }
    if let Some(n) = name.strip_prefix("loops") {
        return Ok(Quiver::loops(n.parse()?));
    }
    bail!("unknown quiver `{name}` (try kron<n> or loops<n>)")
}

fn spec(
    kind: Kind,
    n: Option<usize>,
    algebra: Option<&str>,
    ideal_power: usize,
    quiver_name: Option<&str>,
    category: Option<&str>,
) -> anyhow::Result<FunctorSpec> {
    let n = || n.ok_or_else(|| anyhow!("--n is required for this functor"));
    let algebra = || algebra.map(str::to_string).ok_or_else(|| anyhow!("--algebra is required for this functor"));
    Ok(match kind {
        Kind::Identity => FunctorSpec::Identity {
            category: category.ok_or_else(|| anyhow!("--category is required for identity"))?.to_string(),
        },
        Kind::Split => FunctorSpec::Split { quiver: quiver(quiver_name.ok_or_else(|| anyhow!("--quiver is required for split"))?)? },
        Kind::Jans => FunctorSpec::Jans { algebra: algebra()?, ideal_power },
        Kind::Gp => FunctorSpec::Gp { n: n()? },
        Kind::Brenner => FunctorSpec::Brenner { n: n()? },
        Kind::ExtSimples => FunctorSpec::ExtEmbedSimples { n: n()? },
        Kind::Fn => FunctorSpec::FnKron { n: n()? },
        Kind::RadicalTop => FunctorSpec::RadicalTop,
        Kind::SquareZero => FunctorSpec::SquareZero,
        Kind::Kt => FunctorSpec::Kt,
        Kind::Restrict => FunctorSpec::Restrict { algebra: algebra()? },
    })
}

impl FunctorChoice {
    fn handle(&self, field: FieldSpec) -> anyhow::Result<Handle> {
        if let Some(path) = &self.handle {
            let h = read_handle(path)?;
            if h.field != field {
                bail!("handle is over {} but --field is {field}", h.field);
            }
            return Ok(h);
        }
        let kind = self.functor.expect("clap requires --functor or --handle");
        let functor = spec(kind, self.n, self.algebra.as_deref(), self.ideal_power, self.quiver.as_deref(), self.category.as_deref())?;
        Ok(Handle { field, functor })
    }
}

fn emit<T: Serialize>(out: &Option<PathBuf>, value: &T) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("cannot write {}", p.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = writeln!(stdout, "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

fn report(out: &Option<PathBuf>, r: &VerificationReport) -> anyhow::Result<bool> {
    emit(out, r)?;
    eprint!("{}", r.summary());
    Ok(r.passed)
}

fn standard_module(name: &str, field: FieldSpec) -> anyhow::Result<Object> {
    let index = |s: &str| s.parse::<usize>().with_context(|| format!("bad index in `{name}`"));
    if let Some(rest) = name.strip_prefix("regular:") {
        let p: Preset = rest.parse()?;
        let a = p.algebra(field).ok_or_else(|| anyhow!("`{rest}` has no structure constants"))?;
        return Ok(Object::Alg(AModule::regular(&a)));
    }
    if let Some(rest) = name.strip_prefix("simple:") {
        let (q, v) = rest.split_once(':').ok_or_else(|| anyhow!("expected simple:<quiver>:<vertex>"))?;
        let q = quiver(q)?;
        let v = index(v)?;
        if v >= q.vertices {
            bail!("vertex {v} out of range");
        }
        return Ok(Object::Rep(QuiverRep::simple(&q, field, v)));
    }
    if let Some(rest) = name.strip_prefix("klein:") {
        let (l, m) = rest.split_once(':').unwrap_or((rest, ""));
        let m: Vec<_> = m.split(',').filter(|s| !s.is_empty()).map(|s| field.parse(s)).collect::<Result<_, _>>()?;
        return Ok(Object::Free(klein_simple(&field.parse(l)?, &m)?));
    }
    if let Some(rest) = name.strip_prefix("L:") {
        let coeffs: Vec<_> = rest.split(',').map(|s| field.parse(s.trim())).collect::<Result<_, _>>()?;
        return Ok(Object::Rep(kron_l(&Poly::new(field, coeffs))?));
    }
    if let Some(k) = name.strip_prefix("Linf") {
        return Ok(Object::Rep(kron_l_infinity(field, index(k)?)));
    }
    if let Some(i) = name.strip_prefix('P') {
        return Ok(Object::Rep(kron_p(field, index(i)?)));
    }
    if let Some(i) = name.strip_prefix('I') {
        return Ok(Object::Rep(kron_i(field, index(i)?)));
    }
    bail!("unknown module `{name}`")
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let field: FieldSpec = cli.field.parse()?;
    let seed = cli.seed;
    let out = &cli.output;
    let opts = Options::with_seed(seed);
    match cli.command {
        Command::Preset(PresetCmd::List) => {
            let algebras: Vec<_> = PRESETS
                .iter()
                .map(|n| {
                    let p: Preset = n.parse().expect("shipped preset");
                    json!({ "name": n, "description": p.describe() })
                })
                .collect();
            emit(out, &json!({ "algebras": algebras, "quivers": QUIVERS }))?;
            eprintln!("{} algebras, {} quivers", PRESETS.len(), QUIVERS.len());
        }
        Command::Preset(PresetCmd::Show { name }) => {
            let p: Preset = name.parse()?;
            let a: std::sync::Arc<FDAlgebra> =
                p.algebra(field).ok_or_else(|| anyhow!("`{name}` is infinite-dimensional; it has no structure constants"))?;
            emit(out, &*a)?;
            eprintln!("{}: dimension {}", p.describe(), a.dim());
        }
        Command::Preset(PresetCmd::Module { name }) => {
            let m = standard_module(&name, field)?;
            emit(out, &m)?;
            eprintln!("{name}: dimension vector {:?}", m.dims());
        }
        Command::Functor(FunctorCmd::Build(a)) => {
            let functor = spec(a.kind, a.n, a.algebra.as_deref(), a.ideal_power, a.quiver.as_deref(), a.category.as_deref())?;
            let built = functor.build(field)?;
            eprintln!("{}: {} → {}", built.name(), built.source(), built.target());
            emit(out, &Handle { field, functor })?;
        }
        Command::Functor(FunctorCmd::Apply { handle, module }) => {
            let (h, m) = (read_handle(&handle)?, read_module(&module)?);
            if m.field() != h.field {
                bail!("module is over {} but the functor is over {}", m.field(), h.field);
            }
            let image = h.functor.build(h.field)?.apply(&m)?;
            eprintln!("dimension vector {:?} ↦ {:?}", m.dims(), image.dims());
            emit(out, &image)?;
        }
        Command::Functor(FunctorCmd::Compose { a, b }) => {
            let (a, b) = (read_handle(&a)?, read_handle(&b)?);
            if a.field != b.field {
                bail!("handles are over different fields");
            }
            let functor = FunctorSpec::Compose { first: Box::new(a.functor), second: Box::new(b.functor) };
            let built = functor.build(a.field)?;
            eprintln!("{}: {} → {}", built.name(), built.source(), built.target());
            emit(out, &Handle { field: a.field, functor })?;
        }
        Command::Functor(FunctorCmd::Bimodule { handle }) => {
            let h = read_handle(&handle)?;
            let b = eilenberg_watts(&h.functor.build(h.field)?, seed)?;
            eprintln!("certificate: {:?}", b.certificate());
            emit(out, &b)?;
        }
        Command::Hom { m, n } => {
            let (m, n) = (read_module(&m)?, read_module(&n)?);
            same_field(&[&m, &n])?;
            let basis = hom_basis(&m, &n)?;
            let maps: Vec<_> = basis.iter().map(|f| f.maps().to_vec()).collect();
            eprintln!("dim Hom = {}", basis.len());
            emit(out, &json!({ "dim": basis.len(), "basis": maps }))?;
        }
        Command::Ext { m, n } => {
            let (m, n) = (read_module(&m)?, read_module(&n)?);
            same_field(&[&m, &n])?;
            let dim = match (&m, &n) {
                (Object::Alg(a), Object::Alg(b)) => ext_derivations(a, b)?.dim,
                (Object::Alg(_), _) | (_, Object::Alg(_)) => bail!("both modules must be of the same kind"),
                _ => ext_quiver_dim(&m.view(), &n.view())?,
            };
            eprintln!("dim Ext^1 = {dim}");
            emit(out, &json!({ "dim": dim }))?;
        }
        Command::Decompose { m } => {
            let m = read_module(&m)?;
            let parts = decompose(&m, opts)?;
            let summands = parts
                .iter()
                .map(|p| {
                    let status = is_indecomposable(&p.module, opts)?;
                    Ok(json!({ "module": p.module, "inclusion": p.inclusion, "indecomposable": status }))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            eprintln!("{} summand(s) with dimension vectors {:?}", parts.len(), parts.iter().map(|p| p.module.dims()).collect::<Vec<_>>());
            emit(out, &json!({ "summands": summands }))?;
        }
        Command::Lattice { m } => {
            let m = read_module(&m)?;
            let l = submodule_lattice(&m)?;
            eprintln!("{} submodules", l.len());
            emit(out, &l)?;
        }
        Command::Verify(v) => {
            return match v {
                VerifyCmd::Embedding { functor, sample } => {
                    let h = functor.handle(field)?.functor.build(field)?;
                    let fixtures = standard_fixtures(&h.source(), field)?;
                    let s = SampleSpec::new(field, seed, sample.samples, sample.max_dim)?;
                    report(out, &check_embedding_with(&h, &s, &fixtures)?)
                }
                VerifyCmd::Fullness { functor, sample } => {
                    let h = functor.handle(field)?.functor.build(field)?;
                    report(out, &check_fullness(&h, &SampleSpec::new(field, seed, sample.samples, sample.max_dim)?)?)
                }
                VerifyCmd::Lattice { functor, sample } => {
                    let h = functor.handle(field)?.functor.build(field)?;
                    let fixtures = standard_fixtures(&h.source(), field)?;
                    report(out, &check_lattice(&h, &SampleSpec::new(field, seed, sample.samples, sample.max_dim)?, &fixtures)?)
                }
                VerifyCmd::Euler { arrows, sample } => {
                    let s = SampleSpec::new(field, seed, sample.samples, sample.max_dim)?;
                    report(out, &euler_consistency(&Quiver::kronecker(arrows), &s)?)
                }
                VerifyCmd::Orthogonal { algebras, sample } => {
                    let presets: Vec<Preset> = algebras.iter().map(|a| a.parse()).collect::<Result<_, _>>()?;
                    let s = SampleSpec::new(field, seed, sample.samples, sample.max_dim)?;
                    report(out, &orthogonal_family(&presets, &s)?)
                }
            };
        }
    }
    Ok(true)
}
