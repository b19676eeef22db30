use proptest::prelude::*;

use superjordan::envelope::{systems, Monomial, NcPoly, RewriteSystem};
use superjordan::field::Rational;
use superjordan::iso::{apply_basis_change, find_graded_isomorphism, fingerprint};
use superjordan::linalg;
use superjordan::{catalog, Field, Scalar, SuperAlgebra};

fn fields() -> Vec<Field> {
    vec![Field::prime(7).unwrap(), Field::ext(3).unwrap(), Field::Rational]
}

fn scalar(f: &Field, seed: (i64, i64)) -> Scalar {
    match f {
        Field::Rational => f
            .from_rational(&Rational::new(seed.0.into(), (seed.1.abs() % 7 + 1).into()))
            .unwrap(),
        _ => {
            let els = f.elements().unwrap();
            els[(seed.0.unsigned_abs() as usize + 3 * seed.1.unsigned_abs() as usize) % els.len()].clone()
        }
    }
}

proptest! {
    #[test]
    fn field_axioms_and_text(fi in 0usize..3, a in (-40i64..40, -40i64..40), b in (-40i64..40, -40i64..40), c in (-40i64..40, -40i64..40)) {
        let f = &fields()[fi];
        let (x, y, z) = (scalar(f, a), scalar(f, b), scalar(f, c));
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x + &(-&x), f.zero());
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), f.one());
        }
        prop_assert_eq!(f.parse(&x.to_string()).unwrap(), x);
    }
}

fn dim3_gf5() -> Vec<SuperAlgebra> {
    let f = Field::prime(5).unwrap();
    catalog::all_of_dimension(3)
        .unwrap()
        .into_iter()
        .filter(|e| e.algebra.dim_odd() > 0)
        .map(|e| e.algebra.reduce(&f).unwrap())
        .collect()
}

fn block(f: &Field, n: usize, seed: &[u8]) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| (0..n).map(|j| f.from_int(seed[(i * n + j) % seed.len()] as i64)).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bilinear_product(which in 0usize..20, s in prop::collection::vec(-5i64..5, 12)) {
        let algs = dim3_gf5();
        let a = &algs[which % algs.len()];
        let f = a.field().clone();
        let v = |o: usize| -> Vec<Scalar> { (0..3).map(|i| f.from_int(s[o + i])).collect() };
        let (x, y, z) = (v(0), v(3), v(6));
        let t = f.from_int(s[9]);
        let xz: Vec<Scalar> = x.iter().zip(&z).map(|(p, q)| &(&t * p) + q).collect();
        let lhs = a.mul_coords(&xz, &y);
        let (xy, zy) = (a.mul_coords(&x, &y), a.mul_coords(&z, &y));
        let rhs: Vec<Scalar> = xy.iter().zip(&zy).map(|(p, q)| &(&t * p) + q).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fingerprint_invariant_under_basis_change(which in 0usize..40, seed in prop::collection::vec(0u8..5, 9)) {
        let algs = dim3_gf5();
        let a = &algs[which % algs.len()];
        let f = a.field().clone();
        let even = block(&f, a.dim_even(), &seed);
        let odd = block(&f, a.dim_odd(), &seed[3..]);
        prop_assume!(linalg::inverse(&f, &even).is_some() && linalg::inverse(&f, &odd).is_some());
        let b = apply_basis_change(a, &even, &odd).unwrap();
        prop_assert_eq!(fingerprint(a), fingerprint(&b));
        let m = find_graded_isomorphism(a, &b).unwrap();
        prop_assert!(m.is_some());
    }
}

fn random_poly(sys: &RewriteSystem, words: &[(Vec<u16>, i64)]) -> NcPoly {
    let g = sys.generators().count() as u16;
    let mut p = NcPoly::zero();
    for (w, c) in words {
        let word = w.iter().map(|x| x % g).collect();
        p = p.add(&NcPoly::monomial(Monomial { word, unit: None }, Rational::from_integer((*c).into())));
    }
    p
}

proptest! {
    #[test]
    fn normal_form_is_idempotent_and_multiplicative(
        which in 0usize..3,
        p in prop::collection::vec((prop::collection::vec(0u16..4, 0..4), -3i64..4), 1..4),
        q in prop::collection::vec((prop::collection::vec(0u16..4, 0..4), -3i64..4), 1..4),
    ) {
        let sys = [systems::weyl(), systems::clifford(3), systems::odd_weyl()][which].clone();
        let (p, q) = (random_poly(&sys, &p), random_poly(&sys, &q));
        let np = sys.normal_form(&p);
        prop_assert_eq!(sys.normal_form(&np), np.clone());
        let raw = sys.normal_form(&sys.mul(&p, &q));
        let via = sys.mul(&np, &sys.normal_form(&q));
        prop_assert_eq!(raw, via);
    }
}

/// The ⊙ product on a finite basis of normal-form monomials as a structure
/// constant table over the rationals.
fn plus_algebra(sys: &RewriteSystem, degree: usize) -> SuperAlgebra {
    let even = sys.monomials(degree, 0);
    let odd = sys.monomials(degree, 1);
    let basis: Vec<Monomial> = even.iter().chain(&odd).cloned().collect();
    let d = basis.len();
    let f = Field::Rational;
    let mut c = vec![f.zero(); d * d * d];
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let pa = NcPoly::monomial(a.clone(), Rational::from_integer(1.into()));
            let pb = NcPoly::monomial(b.clone(), Rational::from_integer(1.into()));
            let prod = sys.super_jordan_product(&pa, &pb).unwrap();
            for (m, coef) in prod.terms() {
                let k = basis.iter().position(|x| x == m).expect("closed basis");
                c[(i * d + j) * d + k] = f.from_rational(coef).unwrap();
            }
        }
    }
    SuperAlgebra::new(even.len(), odd.len(), f, None, c).unwrap()
}

#[test]
fn plus_product_is_jordan_on_finite_carriers() {
    for sys in [systems::matrices(1, 2), systems::clifford(2), systems::odd_weyl_supercommutator()] {
        let j = plus_algebra(&sys, 2);
        assert!(j.check_supercommutativity().holds);
        assert!(j.check_super_jordan().holds);
    }
}

#[test]
fn weyl_commutator_is_one() {
    let w = systems::weyl();
    let p = w.parse("xi*eta - eta*xi").unwrap();
    assert_eq!(w.render(&w.normal_form(&p)), "1");
}
