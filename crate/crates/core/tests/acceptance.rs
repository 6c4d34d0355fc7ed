//! End-to-end acceptance run: twelve numbered checks, one result line each.
//! Exits non-zero when any check fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use quiverkit::algebra::{AModule, BimoduleCertificate, FDAlgebra, FreeAlgModule, Preset};
use quiverkit::functors::{
    eilenberg_watts, ext_embed_kronecker_simples, jans_build, klein_simple, Category, FunctorHandle, Object,
};
use quiverkit::homology::{decompose, is_isomorphic, is_simple, Isomorphism, Module, Options};
use quiverkit::quiver::{kron_i, kron_l, kron_p, spin_subrep, Quiver, RepMorphism};
use quiverkit::sample;
use quiverkit::verify::{
    check_embedding, check_embedding_with, check_fullness, euler_consistency, orthogonal_family, random_object,
    lattice_correspondence, random_ses, ses_image_is_exact, submodule_lattice, SampleSpec, Ses,
};
use quiverkit::{FieldSpec, Matrix, Poly, Result};
use rand::Rng;

const SEED: u64 = 20240601;
const ORTHOGONAL_TIME_LIMIT: Duration = Duration::from_secs(60);

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn opts() -> Options {
    Options::with_seed(SEED)
}

/// An isomorphism certificate that re-checks as an invertible homomorphism.
fn certified_iso(a: &Object, b: &Object) -> Result<bool> {
    match is_isomorphic(a, b, opts())? {
        Isomorphism::Iso { maps } => Ok(RepMorphism::new(a.view(), b.view(), maps)?.is_iso()),
        Isomorphism::NotIso { .. } => Ok(false),
    }
}

fn euler() -> Result<(bool, String)> {
    let mut cases = 0;
    let mut ok = true;
    for n in [2, 3] {
        let r = euler_consistency(&Quiver::kronecker(n), &SampleSpec::new(fp(7), SEED + n as u64, 25, 4)?)?;
        cases += r.checks[0].cases;
        ok &= r.passed;
    }
    Ok((ok && cases >= 50, format!("{cases} pairs on K_2 and K_3 over F_7")))
}

fn brenner_full_exact() -> Result<(bool, String)> {
    let f = fp(5);
    let h = FunctorHandle::brenner(2, f)?;
    let full = check_fullness(&h, &SampleSpec::new(f, SEED, 20, 3)?)?;
    let emb = check_embedding(&h, &SampleSpec::new(f, SEED, 10, 3)?)?;
    let exact = emb.check("exactness").unwrap();
    Ok((full.passed && emb.passed, format!("Hom dims equal on {} pairs; {} exact sequences", full.checks[1].cases, exact.cases)))
}

fn brenner_lattice() -> Result<(bool, String)> {
    let f = fp(2);
    let h = FunctorHandle::brenner(2, f)?;
    let mut rng = sample::rng(SEED);
    let zero = |d| Matrix::zeros(f, d, d);
    let nil = Matrix::from_ints(f, 2, 2, &[0, 1, 0, 0]);
    let mut modules = vec![
        Object::Free(FreeAlgModule::new(f, 2, vec![zero(2); 6])?),
        Object::Free(FreeAlgModule::new(f, 2, vec![nil.clone(), zero(2), nil, zero(2), zero(2), zero(2)])?),
    ];
    for _ in 0..8 {
        modules.push(random_object(&Category::Free(6), f, 2, &mut rng)?);
    }
    let mut ok = true;
    let mut sizes = Vec::new();
    for m in &modules {
        let a = submodule_lattice(m)?.len();
        let b = submodule_lattice(&h.apply(m)?)?.len();
        ok &= a == b && lattice_correspondence(&h, m)?.is_ok();
        sizes.push(a);
    }
    Ok((ok, format!("order isomorphism M' ↦ FM' on {} modules, lattice sizes {sizes:?}", modules.len())))
}

fn fn_kron_characteristic() -> Result<(bool, String)> {
    let q = FieldSpec::Rationals;
    let h = FunctorHandle::fn_kron(2, q)?;
    let l = |c: &[i64]| kron_l(&Poly::from_ints(q, c)).map(Object::Rep);
    let image = h.apply(&l(&[-1, 1])?)?;
    let parts = decompose(&image, opts())?;
    let expected = [l(&[-1, 1])?, l(&[1, 1])?];
    let split_ok = parts.len() == 2
        && expected.iter().all(|e| parts.iter().filter(|p| certified_iso(&p.module, e).unwrap_or(false)).count() == 1);

    let f2 = fp(2);
    let h2 = FunctorHandle::fn_kron(2, f2)?;
    let mut fixtures: Vec<Object> = (0..4).map(|i| Object::Rep(kron_p(f2, i))).collect();
    fixtures.extend((0..3).map(|i| Object::Rep(kron_i(f2, i))));
    for k in 1..=3 {
        fixtures.push(Object::Rep(kron_l(&Poly::from_ints(f2, &[1, 1]).pow(k))?));
    }
    let extra = 15 - fixtures.len();
    let r = check_embedding_with(&h2, &SampleSpec::new(f2, SEED, extra, 3)?, &fixtures)?;
    let indec = r.check("indecomposables").unwrap();
    Ok((
        split_ok && indec.passed && indec.cases >= 15,
        format!("over Q F L(X-1) = L(X-1) + L(X+1): {split_ok}; over F_2 {} images indecomposable: {}", indec.cases, indec.passed),
    ))
}

fn fn_kron_images() -> Result<(bool, String)> {
    let f = fp(7);
    let mut rng = sample::rng(SEED);
    let mut ok = true;
    let mut checked = 0;
    for n in [2, 3] {
        let h = FunctorHandle::fn_kron(n, f)?;
        let img = |r| h.apply(&Object::Rep(r));
        ok &= certified_iso(&img(kron_p(f, 0))?, &Object::Rep(kron_p(f, 0)))?;
        ok &= certified_iso(&img(kron_p(f, 1))?, &Object::Rep(kron_p(f, n)))?;
        ok &= certified_iso(&img(kron_i(f, 0))?, &Object::Rep(kron_i(f, n - 1)))?;
        checked += 3;
        for _ in 0..5 {
            let deg = rng.gen_range(1..=2);
            let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(0..7)).collect();
            c.push(1);
            let qp = Poly::from_ints(f, &c);
            ok &= certified_iso(&img(kron_l(&qp)?)?, &Object::Rep(kron_l(&qp.compose_power(n))?))?;
            checked += 1;
        }
    }
    Ok((ok, format!("{checked} isomorphism certificates for n = 2, 3 over F_7")))
}

fn gp_embedding() -> Result<(bool, String)> {
    let f = fp(5);
    let h = FunctorHandle::gp(2, f)?;
    let s = SampleSpec::new(f, SEED, 20, 3)?;
    let r = check_embedding(&h, &s)?;
    let cert = h.bimodule()?.and_then(|b| b.certificate());
    let a = FDAlgebra::truncated_poly(f, 2);
    let (x, y) = (a.generators()[0], a.generators()[1]);
    let mut rng = sample::rng(SEED);
    let mut annihilated = true;
    for _ in 0..20 {
        let m = h.apply(&random_object(&h.source(), f, 3, &mut rng)?)?;
        let m = m.as_alg()?;
        let (mx, my) = (m.action_of(x), m.action_of(y));
        for w in [[mx, mx, mx], [mx, mx, my], [mx, my, my], [my, my, my], [my, mx, mx], [my, my, mx]] {
            annihilated &= (&(w[0] * w[1]) * w[2]).is_zero();
        }
    }
    Ok((
        r.passed && cert == Some(BimoduleCertificate::Affine { rank: 5 }) && annihilated,
        format!("embedding checks {}; certificate {cert:?}; (X,Y)^3 acts as zero: {annihilated}", if r.passed { "pass" } else { "fail" }),
    ))
}

fn jans_projectives() -> Result<(bool, String)> {
    let f = fp(5);
    let a = FDAlgebra::truncated_poly(f, 2);
    let t = a.radical()?.power(&a, 2)?;
    let d = jans_build(&a, &t)?;
    let h = FunctorHandle::jans(d.clone());
    let mut ok = true;
    for y in 0..d.points() {
        let s = Object::Rep(quiverkit::quiver::QuiverRep::simple(d.quiver(), f, y));
        ok &= certified_iso(&h.apply(&s)?, &Object::Alg(d.projective(y).clone()))?;
    }
    Ok((ok, format!("{} receiver simple(s) map to Ae_y with verified isomorphisms", d.points())))
}

fn ext_embed_simples() -> Result<(bool, String)> {
    let f = fp(7);
    let h = FunctorHandle::ext_embed(ext_embed_kronecker_simples(3, f)?);
    let s = SampleSpec::new(f, SEED, 10, 2)?;
    let emb = check_embedding(&h, &s)?;
    let full = check_fullness(&h, &s)?;
    Ok((emb.passed && full.passed, format!("embedding {}, fullness {}", emb.passed, full.passed)))
}

fn orthogonal() -> Result<(bool, String)> {
    let start = Instant::now();
    let r = orthogonal_family(&[Preset::Nilpotent(1), Preset::Nilpotent(2)], &SampleSpec::new(fp(11), SEED, 10, 2)?)?;
    let elapsed = start.elapsed();
    let cross = r.check("cross_hom").unwrap();
    Ok((
        r.passed && elapsed < ORTHOGONAL_TIME_LIMIT,
        format!("{} cross pairs with Hom = 0: {}; dimension vectors in N(2,2): {}; {:.1}s", cross.cases, cross.passed, r.check("dimension_vectors").unwrap().passed, elapsed.as_secs_f64()),
    ))
}

fn radical_top_functors() -> Result<(bool, String)> {
    let f = fp(3);
    let a = FDAlgebra::truncated_poly(f, 1);
    let (g, h) = (FunctorHandle::radical_top(f), FunctorHandle::square_zero(f));
    let mut rng = sample::rng(SEED);
    let mut round_trip = true;
    for _ in 0..10 {
        let m = random_object(&Category::Mod(a.clone()), f, 4, &mut rng)?;
        round_trip &= certified_iso(&h.apply(&g.apply(&m)?)?, &m)?;
    }
    let sink = Object::Rep(kron_p(f, 0));
    let gh_differs = !is_isomorphic(&g.apply(&h.apply(&sink)?)?, &sink, opts())?.holds();
    let k2 = Category::Rep(Quiver::kronecker(2));
    let mut h_exact = true;
    for _ in 0..10 {
        h_exact &= ses_image_is_exact(&h, &random_ses(&k2, f, 3, &mut rng)?)?;
    }
    let reg = Object::Alg(AModule::regular(&a));
    let x = a.basis_vector(a.generators()[0]);
    let (sub, inc) = spin_subrep(&reg.view(), &[x])?;
    let (quot, proj) = reg.view().quotient(inc.maps())?;
    let fixture = Ses {
        sub: reg.from_view(&sub)?,
        quot: reg.from_view(&quot)?,
        mid: reg.clone(),
        inclusion: inc.maps().to_vec(),
        projection: proj.maps().to_vec(),
    };
    let g_fails = !ses_image_is_exact(&g, &fixture)?;
    Ok((
        round_trip && gh_differs && h_exact && g_fails,
        format!("HG M = M on 10 modules: {round_trip}; GH(sink simple) differs: {gh_differs}; H exact: {h_exact}; G not exact on kX ⊂ A: {g_fails}"),
    ))
}

fn klein() -> Result<(bool, String)> {
    let f = fp(7);
    let mut ok = true;
    for n in 1..=4 {
        let m_set: Vec<_> = (0..n as i64 - 1).map(|i| f.int(i)).collect();
        let s = |l: i64| klein_simple(&f.int(l), &m_set);
        for l in 4..=5 {
            let r = is_simple(&s(l)?, opts())?;
            ok &= r.simple && r.exhaustive;
        }
        ok &= !is_isomorphic(&s(4)?, &s(5)?, opts())?.holds();
    }
    Ok((ok, "n = 1..4: exhaustive simplicity and non-isomorphic for distinct λ".into()))
}

fn eilenberg_watts_check() -> Result<(bool, String)> {
    let f = fp(5);
    let mut ok = true;
    let mut notes = Vec::new();
    for h in [FunctorHandle::split(Quiver::loops(2), f), FunctorHandle::fn_kron(2, f)?] {
        let b = eilenberg_watts(&h, SEED)?;
        notes.push(format!("{}: {:?}", h.name(), b.certificate()));
        let t = FunctorHandle::tensor(b, h.source(), h.target())?;
        let mut rng = sample::rng(SEED);
        for _ in 0..10 {
            let x = random_object(&h.source(), f, 3, &mut rng)?;
            ok &= certified_iso(&h.apply(&x)?, &t.apply(&x)?)?;
        }
    }
    Ok((ok, format!("tensor functor agrees on 10 samples each ({})", notes.join(", "))))
}

fn main() -> ExitCode {
    type Criterion = fn() -> Result<(bool, String)>;
    let criteria: [(&str, Criterion); 12] = [
        ("Euler form consistency", euler),
        ("Brenner embedding full and exact", brenner_full_exact),
        ("Brenner submodule lattices", brenner_lattice),
        ("Kronecker self-embedding and characteristic", fn_kron_characteristic),
        ("Kronecker self-embedding images", fn_kron_images),
        ("Gelfand-Ponomarev embedding", gp_embedding),
        ("Jans simples to projectives", jans_projectives),
        ("Extension embedding from simples", ext_embed_simples),
        ("Orthogonal embeddings", orthogonal),
        ("Radical/top functors", radical_top_functors),
        ("Simple modules of k<X,Y>", klein),
        ("Bimodule extraction", eilenberg_watts_check),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "acceptance {:>2} {:<45} {}  [{:.2}s] {detail}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
