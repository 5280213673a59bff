use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ktcore::arith;
use ktcore::brauer::{hilbert_symbol_q, Place};
use ktcore::clifford::{self, CliffordAlgebra, CliffordEl, Idempotents};
use ktcore::field::{Elem, Field};
use ktcore::hypcert;
use ktcore::invariants;
use ktcore::isotropy::{self, Budget, Search};
use ktcore::quadform::QuadraticSpace;
use ktcore::quat::{self, QuaternionAlgebra, SkewHermitianSpace};
use ktcore::similitudes;
use ktcore::splitting;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn fields() -> Vec<Field> {
    let qq = Field::rationals();
    vec![
        qq.clone(),
        Field::prime_field(7).unwrap(),
        Field::sqrt_ext(qq.clone(), &qq.from_i64(2)).unwrap(),
        Field::rational_functions(Field::prime_field(5).unwrap(), "t"),
    ]
}

/// A field element from five small integers, shaped for the field's tower.
fn elem(k: &Field, c: &[i64; 5]) -> Elem {
    let den = c[4].unsigned_abs() as i64 + 1;
    match k {
        Field::QuadExt { base, .. } => Elem::quad(base.from_ratio(c[0], den), base.from_ratio(c[1], den)),
        Field::RationalFunctions { .. } => {
            let t = k.t().unwrap();
            let num = k.add(&k.from_i64(c[0]), &k.mul(&k.from_i64(c[1]), &t));
            let d = k.add(&k.from_i64(1), &k.mul(&k.from_i64(c[2]), &k.square(&t)));
            if k.is_zero(&d) {
                num
            } else {
                k.div(&num, &d).unwrap()
            }
        }
        Field::PrimeField(_) => k.from_i64(c[0] + 3 * c[1]),
        _ => k.from_ratio(c[0] + 3 * c[1], den),
    }
}

fn five() -> impl Strategy<Value = [i64; 5]> {
    prop::array::uniform5(-9i64..=9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(fi in 0usize..4, a in five(), b in five(), c in five()) {
        let k = &fields()[fi];
        let (x, y, z) = (elem(k, &a), elem(k, &b), elem(k, &c));
        prop_assert_eq!(k.add(&x, &y), k.add(&y, &x));
        prop_assert_eq!(k.mul(&x, &y), k.mul(&y, &x));
        prop_assert_eq!(k.mul(&k.mul(&x, &y), &z), k.mul(&x, &k.mul(&y, &z)));
        prop_assert_eq!(k.mul(&x, &k.add(&y, &z)), k.add(&k.mul(&x, &y), &k.mul(&x, &z)));
        prop_assert_eq!(k.sub(&k.add(&x, &y), &y), x.clone());
        if !k.is_zero(&x) {
            prop_assert!(k.is_one(&k.mul(&x, &k.inv(&x).unwrap())));
        }
    }

    #[test]
    fn hilbert_symbol_bimultiplicative(a in -60i64..60, b in -60i64..60, c in -60i64..60) {
        prop_assume!(a != 0 && b != 0 && c != 0);
        let (a, b, c) = (q(a, 1), q(b, 1), q(c, 1));
        let bc = &b * &c;
        let primes = arith::relevant_primes(&[&a, &b, &c]).unwrap();
        let places = primes.into_iter().map(Place::Prime).chain([Place::Infinity]);
        let mut product = 1;
        for v in places {
            let lhs = hilbert_symbol_q(&a, &bc, v).unwrap();
            let rhs = hilbert_symbol_q(&a, &b, v).unwrap() * hilbert_symbol_q(&a, &c, v).unwrap();
            prop_assert_eq!(lhs, rhs, "place {}", v);
            prop_assert_eq!(hilbert_symbol_q(&a, &b, v).unwrap(), hilbert_symbol_q(&b, &a, v).unwrap());
            product *= hilbert_symbol_q(&a, &b, v).unwrap();
        }
        prop_assert_eq!(product, 1);
    }

    #[test]
    fn polarization(fi in 0usize..4, cs in prop::collection::vec(five(), 6), u in prop::collection::vec(five(), 3), v in prop::collection::vec(five(), 3), s in five()) {
        let k = &fields()[fi];
        let mut m = vec![vec![k.zero(); 3]; 3];
        let mut it = cs.iter();
        for i in 0..3 {
            for j in i..3 {
                m[i][j] = elem(k, it.next().unwrap());
            }
        }
        let form = QuadraticSpace::new(k.clone(), m).unwrap();
        let u: Vec<Elem> = u.iter().map(|c| elem(k, c)).collect();
        let v: Vec<Elem> = v.iter().map(|c| elem(k, c)).collect();
        let sum: Vec<Elem> = u.iter().zip(&v).map(|(x, y)| k.add(x, y)).collect();
        let expect = k.sub(&k.sub(&form.eval(&sum), &form.eval(&u)), &form.eval(&v));
        prop_assert_eq!(form.polar(&u, &v), expect);
        prop_assert_eq!(form.polar(&u, &v), form.polar(&v, &u));
        let c = elem(k, &s);
        let cu: Vec<Elem> = u.iter().map(|x| k.mul(&c, x)).collect();
        prop_assert_eq!(form.eval(&cu), k.mul(&k.square(&c), &form.eval(&u)));
    }

    #[test]
    fn witt_round_trip(entries in prop::collection::vec(-12i64..=12, 2..=6), off in -3i64..=3) {
        prop_assume!(entries.iter().all(|&e| e != 0));
        let k = Field::rationals();
        let n = entries.len();
        let mut m = QuadraticSpace::diag_i64(&k, &entries).coeffs().clone();
        m[0][1] = k.from_i64(off);
        let form = QuadraticSpace::new(k.clone(), m).unwrap();
        prop_assume!(form.is_nondegenerate());
        let wd = isotropy::witt_decompose(&form).unwrap();
        prop_assert_eq!(2 * wd.witt_index + wd.kernel_basis.len(), n);
        let mut all = Vec::new();
        for (e, f) in &wd.pairs {
            prop_assert!(k.is_zero(&form.eval(e)) && k.is_zero(&form.eval(f)));
            prop_assert!(k.is_one(&form.polar(e, f)));
            all.push(e.clone());
            all.push(f.clone());
        }
        for (i, (e, f)) in wd.pairs.iter().enumerate() {
            for (j, (e2, f2)) in wd.pairs.iter().enumerate() {
                if i != j {
                    for (x, y) in [(e, e2), (e, f2), (f, e2), (f, f2)] {
                        prop_assert!(k.is_zero(&form.polar(x, y)));
                    }
                }
            }
            for w in &wd.kernel_basis {
                prop_assert!(k.is_zero(&form.polar(e, w)) && k.is_zero(&form.polar(f, w)));
            }
        }
        all.extend(wd.kernel_basis.iter().cloned());
        prop_assert_eq!(ktcore::linalg::rank(&k, &all), n);
        prop_assert_eq!(&wd.kernel, &form.restrict(&wd.kernel_basis).unwrap());
        if wd.kernel.dim() > 0 {
            prop_assert!(matches!(isotropy::search(&wd.kernel, &Budget::default()).unwrap(), Search::Anisotropic));
        }
    }

    #[test]
    fn clifford_associativity(fi in 0usize..2, diag in prop::collection::vec(1i64..=6, 4), off in 0i64..=2, xs in prop::collection::vec((0u32..16, -4i64..=4), 12)) {
        let k = [Field::rationals(), Field::prime_field(5).unwrap()][fi].clone();
        let mut m = QuadraticSpace::diag_i64(&k, &diag).coeffs().clone();
        m[1][2] = k.from_i64(off);
        let form = QuadraticSpace::new(k.clone(), m).unwrap();
        let alg = CliffordAlgebra::new(&form).unwrap();
        let el = |part: &[(u32, i64)]| part.iter().fold(CliffordEl::zero(), |acc, (mask, c)| acc.add(&k, &CliffordEl::monomial(&k, *mask, k.from_i64(*c))));
        let (a, b, c) = (el(&xs[0..4]), el(&xs[4..8]), el(&xs[8..12]));
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
        // generators satisfy e² = q(e)
        for i in 0..4 {
            let g = alg.generator(i);
            prop_assert_eq!(alg.mul(&g, &g), CliffordEl::scalar(&k, form.coeff(i, i).clone()));
        }
    }

    #[test]
    fn quaternion_algebra_laws(a in -9i64..=9, b in -9i64..=9, xs in prop::collection::vec(prop::array::uniform4(-5i64..=5), 3)) {
        prop_assume!(a != 0 && b != 0);
        let d = QuaternionAlgebra::from_i64(a, b);
        let (x, y, z) = (d.from_ints(xs[0]), d.from_ints(xs[1]), d.from_ints(xs[2]));
        prop_assert_eq!(d.mul(&d.mul(&x, &y), &z), d.mul(&x, &d.mul(&y, &z)));
        prop_assert_eq!(d.nrd(&d.mul(&x, &y)), d.field.mul(&d.nrd(&x), &d.nrd(&y)));
        prop_assert_eq!(d.conj(&d.mul(&x, &y)), d.mul(&d.conj(&y), &d.conj(&x)));
        prop_assert_eq!(d.nrd(&x), d.norm_form().eval(&x.to_vec()));
    }

    #[test]
    fn skew_hermitian_axiom(h in prop::collection::vec(prop::array::uniform4(-3i64..=3), 6), us in prop::collection::vec(prop::array::uniform4(-3i64..=3), 8)) {
        let d = QuaternionAlgebra::from_i64(-1, 7);
        let pure = |c: [i64; 4]| d.from_ints([0, c[1], c[2], c[3]]);
        let mut m = vec![vec![d.zero(); 3]; 3];
        for i in 0..3 {
            m[i][i] = pure(h[i]);
        }
        let off = [(0, 1, 3), (0, 2, 4), (1, 2, 5)];
        for (i, j, t) in off {
            m[i][j] = d.from_ints(h[t]);
            m[j][i] = d.neg(&d.conj(&m[i][j]));
        }
        let sp = SkewHermitianSpace::new(d.clone(), m).unwrap();
        let u: Vec<_> = us[0..3].iter().map(|c| d.from_ints(*c)).collect();
        let v: Vec<_> = us[3..6].iter().map(|c| d.from_ints(*c)).collect();
        prop_assert!(sp.check_axiom(&u, &v).unwrap());
        let (l, mu) = (d.from_ints(us[6]), d.from_ints(us[7]));
        let lhs = sp.eval(&sp.vec_rmul(&u, &l), &sp.vec_rmul(&v, &mu)).unwrap();
        prop_assert_eq!(lhs, d.mul(&d.mul(&d.conj(&l), &sp.eval(&u, &v).unwrap()), &mu));
    }

    #[test]
    fn spinor_norm_multiplicative(v in prop::collection::vec(prop::array::uniform4(-2i64..=2), 4), u1 in (-4i64..=4, 1i64..=4), u2 in (-4i64..=4, 1i64..=4)) {
        let d = QuaternionAlgebra::from_i64(-1, -1);
        let h = SkewHermitianSpace::diagonal(d.clone(), &[d.basis(1), d.basis(2), d.basis(3), d.basis(1)]).unwrap();
        let v: Vec<_> = v.iter().map(|c| d.from_ints(*c)).collect();
        let nu = h.eval(&v, &v).unwrap();
        prop_assume!(!d.is_zero(&nu));
        let k = &d.field;
        let unit = |(x, y): (i64, i64)| d.add(&d.scalar(k.from_i64(x)), &d.scale(&k.from_i64(y), &nu));
        let (w1, w2) = (unit(u1), unit(u2));
        let r1 = quat::r_from_unit(&h, &v, &w1).unwrap();
        let r2 = quat::r_from_unit(&h, &v, &w2).unwrap();
        let t1 = quat::tau_transform(&h, &v, &r1).unwrap();
        let t2 = quat::tau_transform(&h, &v, &r2).unwrap();
        // the composite acts on v·D by the product of the induced units
        let image = quat::tau_apply(&h, &v, &r1, &quat::tau_apply(&h, &v, &r2, &v).unwrap()).unwrap();
        let theta = d.mul(&t2.theta, &t1.theta);
        prop_assert_eq!(&image, &h.vec_rmul(&v, &theta));
        let u12 = if d.is_zero(&d.add(&d.one(), &theta)) { nu.clone() } else { d.add(&d.one(), &theta) };
        prop_assert_eq!(d.mul(&u12, &d.inv(&d.conj(&u12)).unwrap()), theta);
        let prod = k.mul(&t1.spinor_norm, &t2.spinor_norm);
        prop_assert!(k.same_square_class(&d.nrd(&u12), &prod).unwrap());
    }

    #[test]
    fn hyperbolic_peeling_matches_invariants(entries in prop::collection::vec(prop::sample::select(vec![1i64, -1, 2, -2, 3, -3, 5, -5, 6, 7, -7, 10, -14]), 2..=6), d in prop::sample::select(vec![-1i64, 2, -2, 3, -3, 5, -7, 7, -14])) {
        let k = Field::rationals();
        let form = QuadraticSpace::diag_i64(&k, &entries);
        let d = k.from_i64(d);
        let s = splitting::hyperbolic_over_sqrt(&form, &d).unwrap();
        prop_assert_eq!(splitting::verify_splitting(&form, &s).unwrap(), s.hyperbolic);
        prop_assert_eq!(s.hyperbolic, splitting::hyperbolic_over_sqrt_by_invariants(&form, &d).unwrap());
    }

    #[test]
    fn idempotents_iff_trivial_discriminant(fi in 0usize..4, diag in prop::collection::vec(prop::sample::select(vec![1i64, -1, 2, 3, -3, 5, 6, 7]), 1..=4)) {
        let k = [Field::rationals(), Field::prime_field(3).unwrap(), Field::prime_field(5).unwrap(), Field::prime_field(7).unwrap()][fi].clone();
        let mut e = diag.clone();
        e.extend(diag.iter().map(|x| x + 1).map(|x| if x % k.characteristic().max(1) as i64 == 0 { 1 } else { x }));
        let form = QuadraticSpace::diag_i64(&k, &e);
        prop_assume!(form.is_nondegenerate());
        let trivial = invariants::discriminant(&form).unwrap().is_trivial(&k).unwrap();
        let split = matches!(clifford::central_idempotents(&form).unwrap(), Idempotents::Split { .. });
        prop_assert_eq!(trivial, split);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn multipliers_form_a_group(a in prop::sample::select(vec![1i64, 2, 3, 5, 7, 8, 11, 14]), b in prop::sample::select(vec![1i64, 2, 3, 5, 7, 8, 11, 14])) {
        let k = Field::rationals();
        let q8 = QuadraticSpace::diag_i64(&k, &[1, 1, 1, 7, 1, 1, 1, 7]);
        let (ga, gb) = (k.from_i64(a), k.from_i64(b));
        let ma = similitudes::gq_membership(&q8, &ga).unwrap();
        let mb = similitudes::gq_membership(&q8, &gb).unwrap();
        if ma && mb {
            prop_assert!(similitudes::gq_membership(&q8, &k.mul(&ga, &gb)).unwrap());
        }
        prop_assert_eq!(ma, similitudes::gq_membership(&q8, &k.inv(&ga).unwrap()).unwrap());
    }
}

/// Pairs (x₁ ∈ ℚ(√d₁), x₂ ∈ ℚ(√d₂)) of equal norm: α = N(x₁), then d₂ = (c² − α)/e².
#[test]
fn combined_norm_identity_on_pairs() {
    let k = Field::rationals();
    let mut checked = 0;
    'outer: for a in 1i64..=6 {
        for b in 1i64..=4 {
            for d1 in [-1i64, 2, 3, -5, 7] {
                for (c, e) in [(1i64, 1i64), (2, 1), (3, 2), (4, 1), (5, 3)] {
                    let alpha = a * a - d1 * b * b;
                    let d2 = k.from_ratio(c * c - alpha, e * e);
                    let d1e = k.from_i64(d1);
                    if k.is_zero(&d2)
                        || k.is_square(&d2).unwrap().0
                        || k.is_square(&k.mul(&d1e, &d2)).unwrap().0
                    {
                        continue;
                    }
                    let x1 = (k.from_i64(a), k.from_i64(b));
                    let x2 = (k.from_i64(c), k.from_i64(e));
                    let out = hypcert::combine_norms(&k, &d1e, &x1, &d2, &x2).unwrap();
                    assert!(!k.is_zero(&out.square));
                    checked += 1;
                    if checked == 100 {
                        break 'outer;
                    }
                }
            }
        }
    }
    assert_eq!(checked, 100);
}
