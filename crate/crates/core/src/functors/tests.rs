use super::*;
use crate::homology::{hom_dim, is_brick, is_simple};
use crate::poly::Poly;
use crate::quiver::{kron_i, kron_l, kron_p};

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn iso(a: &Object, b: &Object) -> bool {
    is_isomorphic(a, b, Options::with_seed(1)).unwrap().holds()
}

fn random_free(field: FieldSpec, gens: usize, dim: usize, seed: u64) -> FreeAlgModule {
    let mut rng = sample::rng(seed);
    FreeAlgModule::new(field, dim, (0..gens).map(|_| sample::matrix(field, dim, dim, &mut rng)).collect()).unwrap()
}

#[test]
fn split_matches_its_bimodule() {
    let f = fp(5);
    let h = FunctorHandle::split(Quiver::loops(2), f);
    assert_eq!(h.target(), Category::Rep(Quiver::kronecker(3)));
    let m = Object::Free(random_free(f, 2, 3, 7));
    let direct = h.apply(&m).unwrap();
    assert_eq!(direct.dims(), vec![3, 3]);
    let b = h.bimodule().unwrap().unwrap();
    let TensorModule::Alg(t) = tensor_module(&b, &TensorModule::Free(m.as_free().unwrap().clone())).unwrap() else { panic!() };
    assert_eq!(coerce(&direct, &Category::Mod(FDAlgebra::kronecker(f, 3))).unwrap(), Object::Alg(t));
}

#[test]
fn jans_sends_receiver_simples_to_projectives() {
    let f = fp(3);
    let a = FDAlgebra::truncated_poly(f, 2);
    let t = a.radical().unwrap().power(&a, 2).unwrap();
    let d = jans_build(&a, &t).unwrap();
    assert_eq!(d.quiver(), &Quiver::kronecker(3));
    let h = FunctorHandle::jans(d.clone());
    let s = Object::Rep(QuiverRep::simple(d.quiver(), f, 0));
    let image = h.apply(&s).unwrap();
    assert!(iso(&image, &Object::Alg(d.projective(0).clone())));
    let emitter = Object::Rep(QuiverRep::simple(d.quiver(), f, 1));
    assert!(matches!(h.apply(&emitter), Err(Error::Precondition(_))));
}

#[test]
fn jans_rejects_ideals_outside_the_socle_condition() {
    let f = fp(3);
    let a = FDAlgebra::truncated_poly(f, 2);
    let rad = a.radical().unwrap();
    assert!(matches!(jans_build(&a, &rad), Err(Error::Precondition(_))));
}

#[test]
fn gp_bimodule_agrees_with_construction() {
    let f = fp(5);
    let h = FunctorHandle::gp(2, f).unwrap();
    let b = h.bimodule().unwrap().unwrap();
    assert_eq!(b.certificate(), Some(crate::algebra::BimoduleCertificate::Affine { rank: 5 }));
    for seed in 0..4 {
        let m = random_free(f, 2, 2, seed);
        let direct = h.apply(&Object::Free(m.clone())).unwrap();
        assert_eq!(direct.dim(), 10);
        let TensorModule::Alg(t) = tensor_module(&b, &TensorModule::Free(m)).unwrap() else { panic!() };
        assert!(iso(&direct, &Object::Alg(t)));
    }
}

#[test]
fn brenner_blocks() {
    let f = fp(5);
    let h = FunctorHandle::brenner(2, f).unwrap();
    assert_eq!(h.source(), Category::Free(6));
    assert_eq!(brenner_generator_labels(2), ["X3_1", "X4_1", "X4_2", "Y1_3", "Y1_4", "Y2_4"]);
    let m = random_free(f, 6, 2, 3);
    let out = h.apply(&Object::Free(m.clone())).unwrap();
    let out = out.as_free().unwrap();
    assert_eq!(out.dim(), 8);
    assert_eq!(out.gen(0).submatrix(4, 6, 0, 2), *m.gen(0));
    assert_eq!(out.gen(1).submatrix(0, 2, 2, 4), Matrix::identity(f, 2));
}

#[test]
fn fn_kron_images() {
    let f = fp(7);
    for n in [2, 3] {
        let h = FunctorHandle::fn_kron(n, f).unwrap();
        let img = |r: QuiverRep| h.apply(&Object::Rep(r)).unwrap();
        assert!(iso(&img(kron_p(f, 0)), &Object::Rep(kron_p(f, 0))));
        assert!(iso(&img(kron_p(f, 1)), &Object::Rep(kron_p(f, n))));
        assert!(iso(&img(kron_i(f, 0)), &Object::Rep(kron_i(f, n - 1))));
        let q = Poly::from_ints(f, &[-2, 1]);
        let expected = kron_l(&q.compose_power(n)).unwrap();
        assert!(iso(&img(kron_l(&q).unwrap()), &Object::Rep(expected)));
    }
}

#[test]
fn eilenberg_watts_recovers_tensor_functors() {
    let f = fp(5);
    let fk = FunctorHandle::fn_kron(2, f).unwrap();
    let b = eilenberg_watts(&fk, 0).unwrap();
    let tensor = FunctorHandle::tensor(b, fk.source(), fk.target()).unwrap();
    let x = Object::Rep(sample::rep(&Quiver::kronecker(2), f, &[2, 2], &mut sample::rng(4)));
    assert!(iso(&fk.apply(&x).unwrap(), &tensor.apply(&x).unwrap()));

    let split = FunctorHandle::split(Quiver::loops(2), f);
    let b = eilenberg_watts(&split, 0).unwrap();
    assert_eq!(b.certificate(), Some(crate::algebra::BimoduleCertificate::Affine { rank: 2 }));
}

#[test]
fn radical_top_round_trip() {
    let f = fp(3);
    let a = FDAlgebra::truncated_poly(f, 1);
    let (g, h) = (FunctorHandle::radical_top(f), FunctorHandle::square_zero(f));
    assert!(!g.is_exact());
    let mut rng = sample::rng(11);
    for _ in 0..3 {
        let m = Object::Alg(sample::amodule(&a, 2, &mut rng).unwrap());
        let back = h.apply(&g.apply(&m).unwrap()).unwrap();
        assert!(iso(&back, &m));
    }
    let sink = Object::Rep(kron_p(f, 0));
    let round = g.apply(&h.apply(&sink).unwrap()).unwrap();
    assert!(!iso(&round, &sink));
}

#[test]
fn ext_embed_simples_is_faithful_on_homs() {
    let f = fp(7);
    let h = FunctorHandle::ext_embed(ext_embed_kronecker_simples(3, f).unwrap());
    let x = Object::Rep(sample::rep(&Quiver::kronecker(3), f, &[1, 2], &mut sample::rng(2)));
    let y = Object::Rep(sample::rep(&Quiver::kronecker(3), f, &[2, 1], &mut sample::rng(3)));
    let (fx, fy) = (h.apply(&x).unwrap(), h.apply(&y).unwrap());
    assert_eq!(hom_dim(&x, &y).unwrap(), hom_dim(&fx, &fy).unwrap());
}

#[test]
fn morphisms_are_carried_along() {
    let f = fp(5);
    let x = Object::Rep(kron_p(f, 1));
    let h = FunctorHandle::fn_kron(2, f).unwrap();
    let fx = h.apply(&x).unwrap();
    let id: Vec<Matrix> = x.dims().iter().map(|&d| Matrix::identity(f, d)).collect();
    let fid = h.apply_morphism(&x, &x, &id).unwrap();
    let expected: Vec<Matrix> = fx.dims().iter().map(|&d| Matrix::identity(f, d)).collect();
    assert_eq!(fid, expected);
}

#[test]
fn kt_and_klein() {
    let f = fp(7);
    let t = Matrix::from_ints(f, 2, 2, &[3, 1, 0, 3]);
    let m = FreeAlgModule::new(f, 2, vec![t]).unwrap();
    let out = FunctorHandle::kt(f).apply(&Object::Free(m)).unwrap();
    assert!(crate::homology::is_indecomposable(&out, Options::default()).unwrap().holds());

    let s = |l: i64| klein_simple(&f.int(l), &[f.int(0), f.int(1)]).unwrap();
    assert!(is_simple(&s(2), Options::default()).unwrap().simple);
    assert!(!iso(&Object::Free(s(2)), &Object::Free(s(3))));
    assert!(matches!(klein_simple(&f.int(1), &[f.int(1)]), Err(Error::Precondition(_))));
}

#[test]
fn wild_bricks_on_kronecker() {
    let f = fp(11);
    let q = Quiver::kronecker(3);
    let bricks = wild_bricks(&q, f, 2).unwrap();
    assert_eq!(bricks[0].dims(), &[4, 4]);
    assert_eq!(crate::quiver::tits_form(&q, &[4, 4]).unwrap(), -16);
    assert!(is_brick(&bricks[0]).unwrap());
    assert_eq!(hom_dim(&bricks[0], &bricks[1]).unwrap(), 0);
    assert!(matches!(wild_bricks(&Quiver::new(3, vec![(0, 1), (1, 2)]).unwrap(), f, 1), Err(Error::Unsupported(_))));
}

#[test]
fn compose_and_spec_round_trip() {
    let f = fp(5);
    let spec = FunctorSpec::Compose {
        first: Box::new(FunctorSpec::Restrict { algebra: "nil2".into() }),
        second: Box::new(FunctorSpec::Split { quiver: Quiver::loops(1) }),
    };
    let json = serde_json::to_string(&spec).unwrap();
    let back: FunctorSpec = serde_json::from_str(&json).unwrap();
    assert_eq!(back, spec);
    let h = spec.build(f).unwrap();
    let a = FDAlgebra::nilpotent(f, 2);
    let x = Object::Alg(AModule::regular(&a));
    assert_eq!(h.apply(&x).unwrap().dims(), vec![2, 2]);
    let obj_json = serde_json::to_string(&x).unwrap();
    assert_eq!(serde_json::from_str::<Object>(&obj_json).unwrap(), x);
}
