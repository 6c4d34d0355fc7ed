use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use quiverkit::functors::{Category, FunctorHandle, Object};
use quiverkit::homology::{decompose, hom_dim, is_isomorphic, Module, Options};
use quiverkit::quiver::{euler_form, Quiver, QuiverRep, RepMorphism};
use quiverkit::sample;
use quiverkit::verify::{random_ses, ses_image_is_exact, submodule_lattice};
use quiverkit::{Error, FieldSpec, Matrix};

fn f2() -> FieldSpec {
    FieldSpec::prime(2).unwrap()
}

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::Rationals), Just(FieldSpec::prime(5).unwrap()), Just(FieldSpec::prime(2).unwrap())]
}

fn square(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, n * n)
}

fn bits(m: &Matrix) -> Vec<Vec<u64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).residue().unwrap()).collect()).collect()
}

fn apply_bits(m: &[Vec<u64>], v: u64) -> u64 {
    m.iter().enumerate().fold(0, |acc, (i, row)| {
        let b = row.iter().enumerate().filter(|&(j, &x)| x == 1 && v >> j & 1 == 1).count() as u64 & 1;
        acc | b << i
    })
}

/// All subspaces of `F_2^d`, as sets of vectors encoded in bitmasks.
fn subspaces(d: usize) -> Vec<Vec<u64>> {
    let n = 1usize << d;
    (0u64..1 << n)
        .filter(|set| set & 1 == 1)
        .filter(|set| (0..n).all(|a| (0..n).all(|b| set >> a & 1 == 0 || set >> b & 1 == 0 || set >> (a ^ b) & 1 == 1)))
        .map(|set| (0..n as u64).filter(|v| set >> v & 1 == 1).collect())
        .collect()
}

/// Subrepresentation count by exhaustive enumeration over `F_2`.
fn brute_force_submodules(m: &QuiverRep) -> usize {
    let q = m.quiver();
    let maps: Vec<_> = m.maps().iter().map(bits).collect();
    let per_vertex: Vec<_> = m.dims().iter().map(|&d| subspaces(d)).collect();
    let mut count = 0;
    let mut choice = vec![0; q.vertices];
    loop {
        let closed = q.arrows.iter().enumerate().all(|(a, &(s, t))| {
            per_vertex[s][choice[s]].iter().all(|&v| per_vertex[t][choice[t]].contains(&apply_bits(&maps[a], v)))
        });
        count += closed as usize;
        let mut v = 0;
        loop {
            if v == q.vertices {
                return count;
            }
            choice[v] += 1;
            if choice[v] < per_vertex[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
    }
}

/// `|Hom(M, N)|` by trying every family of vertex maps over `F_2`.
fn brute_force_hom_count(m: &QuiverRep, n: &QuiverRep) -> usize {
    let f = m.field();
    let shapes: Vec<(usize, usize)> = n.dims().iter().zip(m.dims()).map(|(&r, &c)| (r, c)).collect();
    let total: usize = shapes.iter().map(|(r, c)| r * c).sum();
    (0u64..1 << total)
        .filter(|code| {
            let mut offset = 0;
            let maps = shapes
                .iter()
                .map(|&(r, c)| {
                    let m = Matrix::from_fn(f, r, c, |i, j| f.int((code >> (offset + i * c + j) & 1) as i64));
                    offset += r * c;
                    m
                })
                .collect();
            RepMorphism::new(m.clone(), n.clone(), maps).is_ok()
        })
        .count()
}

fn small_rep(seed: u64, max: usize) -> QuiverRep {
    let mut rng = sample::rng(seed);
    let q = Quiver::kronecker(2);
    let dims = sample::dims(2, max, &mut rng);
    sample::rep(&q, f2(), &dims, &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity(f in field(), data in square(4)) {
        let m = Matrix::from_ints(f, 4, 4, &data);
        prop_assert_eq!(m.rank() + m.kernel_basis().cols(), 4);
        prop_assert!((&m * &m.kernel_basis()).is_zero());
    }

    #[test]
    fn products_transpose_and_determinants(f in field(), a in square(3), b in square(3)) {
        let (a, b) = (Matrix::from_ints(f, 3, 3, &a), Matrix::from_ints(f, 3, 3, &b));
        let ab = &a * &b;
        prop_assert_eq!(ab.transpose(), &b.transpose() * &a.transpose());
        prop_assert_eq!(ab.det(), a.det() * b.det());
        prop_assert_eq!(a.is_invertible(), !a.det().is_zero());
        if let Some(inv) = a.inverse() {
            prop_assert!((&inv * &a).is_identity());
        }
    }

    #[test]
    fn solve_returns_preimages(f in field(), a in square(3), x in prop::collection::vec(-3i64..=3, 3)) {
        let a = Matrix::from_ints(f, 3, 3, &a);
        let b = &a * &Matrix::from_ints(f, 3, 1, &x);
        let sol = a.solve(&b).unwrap().expect("b lies in the image");
        prop_assert_eq!(&a * &sol, b);
    }

    #[test]
    fn hom_dimension_matches_enumeration(s in 0u64..10_000, t in 0u64..10_000) {
        let (m, n) = (small_rep(s, 2), small_rep(t, 2));
        prop_assert_eq!(1usize << hom_dim(&m, &n).unwrap(), brute_force_hom_count(&m, &n));
    }

    #[test]
    fn lattice_size_matches_enumeration(s in 0u64..10_000) {
        let m = small_rep(s, 2);
        let lattice = submodule_lattice(&m).unwrap();
        prop_assert_eq!(lattice.len(), brute_force_submodules(&m));
        for i in 0..lattice.len() {
            for j in 0..lattice.len() {
                let join = lattice.join(i, j).unwrap();
                let meet = lattice.meet(i, j).unwrap();
                prop_assert!(lattice.leq(i, join) && lattice.leq(j, join));
                prop_assert!(lattice.leq(meet, i) && lattice.leq(meet, j));
            }
        }
    }

    #[test]
    fn isomorphism_is_symmetric_and_sees_base_change(s in 0u64..10_000, t in 0u64..10_000) {
        let f = FieldSpec::prime(5).unwrap();
        let mut rng = sample::rng(s);
        let q = Quiver::kronecker(2);
        let m = sample::rep(&q, f, &[2, 2], &mut rng);
        let n = sample::rep(&q, f, &[2, 2], &mut sample::rng(t));
        let opts = Options::with_seed(s);
        prop_assert_eq!(
            is_isomorphic(&m, &n, opts).unwrap().holds(),
            is_isomorphic(&n, &m, opts).unwrap().holds()
        );
        let g: Vec<Matrix> = (0..2)
            .map(|_| loop {
                let g = sample::matrix(f, 2, 2, &mut rng);
                if g.is_invertible() {
                    break g;
                }
            })
            .collect();
        prop_assert!(is_isomorphic(&m, &m.conjugate(&g).unwrap(), opts).unwrap().holds());
    }

    #[test]
    fn summands_add_up(s in 0u64..10_000) {
        let f = FieldSpec::prime(3).unwrap();
        let mut rng = sample::rng(s);
        let q = Quiver::kronecker(2);
        let a = sample::rep(&q, f, &sample::dims(2, 2, &mut rng), &mut rng);
        let b = sample::rep(&q, f, &sample::dims(2, 2, &mut rng), &mut rng);
        let sum = a.direct_sum(&b).unwrap();
        let parts = match decompose(&sum, Options::with_seed(s)) {
            Err(Error::NotSplit(_)) => return Err(TestCaseError::reject("endomorphism ring does not split")),
            r => r.unwrap(),
        };
        let total: usize = parts.iter().map(|p| p.module.view().dims().iter().sum::<usize>()).sum();
        prop_assert_eq!(total, sum.dims().iter().sum::<usize>());
    }

    #[test]
    fn euler_form_is_bilinear(a in prop::collection::vec(0usize..4, 2), b in prop::collection::vec(0usize..4, 2), c in prop::collection::vec(0usize..4, 2)) {
        let q = Quiver::kronecker(3);
        let bc: Vec<usize> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
        prop_assert_eq!(
            euler_form(&q, &a, &bc).unwrap(),
            euler_form(&q, &a, &b).unwrap() + euler_form(&q, &a, &c).unwrap()
        );
    }

    #[test]
    fn exact_functors_keep_sequences_exact(s in 0u64..10_000) {
        let f = FieldSpec::prime(5).unwrap();
        let mut rng = sample::rng(s);
        let brenner = FunctorHandle::brenner(2, f).unwrap();
        let ses = random_ses(&brenner.source(), f, 2, &mut rng).unwrap();
        prop_assert!(ses_image_is_exact(&brenner, &ses).unwrap());
        let split = FunctorHandle::split(Quiver::loops(2), f);
        let ses = random_ses(&Category::Free(2), f, 3, &mut rng).unwrap();
        prop_assert!(ses_image_is_exact(&split, &ses).unwrap());
    }

    #[test]
    fn objects_round_trip_through_json(s in 0u64..10_000) {
        let f = FieldSpec::prime(7).unwrap();
        let x = Object::Rep(sample::rep(&Quiver::kronecker(3), f, &[2, 1], &mut sample::rng(s)));
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Object>(&json).unwrap(), x);
    }
}
