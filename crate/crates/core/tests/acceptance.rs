//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs under `cargo test` as a plain binary.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ktcore::clifford::{self, CliffordAlgebra, CliffordEl, Idempotents};
use ktcore::field::{Elem, Field};
use ktcore::hypcert::{self, CertEntry};
use ktcore::invariants::{self, TypeKind};
use ktcore::isotropy::{self, Budget};
use ktcore::linalg::{self, Matrix, Vector};
use ktcore::quadform::QuadraticSpace;
use ktcore::quat::{self, QuaternionAlgebra, SkewHermitianSpace};
use ktcore::similitudes;
use ktcore::splitting;

/// Height bound of the brute-force isotropy oracle.
const ORACLE_HEIGHT: i64 = 50;
/// Share of generated 10-dimensional forms that must come with a witness.
const WITNESS_RATE: f64 = 0.90;
/// CI budget for one dense product of even Clifford elements at n = 12.
const C0_PRODUCT_BUDGET: Duration = Duration::from_secs(2);
/// Wall-clock budget for the whole suite.
const SUITE_BUDGET: Duration = Duration::from_secs(600);

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero(r: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let x = r.gen_range(-bound..=bound);
        if x != 0 {
            return x;
        }
    }
}

fn upper(k: &Field, c: &[Vec<i64>]) -> QuadraticSpace {
    let m: Matrix = c.iter().map(|row| row.iter().map(|&x| k.from_i64(x)).collect()).collect();
    QuadraticSpace::new(k.clone(), m).unwrap()
}

// --- 1 -----------------------------------------------------------------------

fn eval_int(c: &[Vec<i64>], x: &[i64]) -> i128 {
    let mut s = 0i128;
    for i in 0..x.len() {
        for j in i..x.len() {
            s += c[i][j] as i128 * x[i] as i128 * x[j] as i128;
        }
    }
    s
}

fn is_square_i128(n: i128) -> bool {
    n >= 0 && {
        let r = n.sqrt();
        r * r == n
    }
}

/// Leading principal minors of the integral Gram matrix, by Bareiss elimination.
fn definite(c: &[Vec<i64>]) -> bool {
    let n = c.len();
    let mut g: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 2 * c[i][i] as i128 } else { c[i.min(j)][i.max(j)] as i128 }).collect())
        .collect();
    let mut minors = Vec::new();
    let mut prev = 1i128;
    for p in 0..n {
        if g[p][p] == 0 {
            return false;
        }
        minors.push(g[p][p]);
        for i in p + 1..n {
            for j in p + 1..n {
                g[i][j] = (g[i][j] * g[p][p] - g[i][p] * g[p][j]) / prev;
            }
        }
        prev = g[p][p];
    }
    minors.iter().all(|&m| m > 0) || minors.iter().enumerate().all(|(i, &m)| if i % 2 == 0 { m < 0 } else { m > 0 })
}

/// Projective search over x₁..x_{n−1} of height ≤ `ORACLE_HEIGHT`, shell by
/// shell, solving the last coordinate exactly from A·y² + B·y + C = 0.
fn brute_force_isotropic(c: &[Vec<i64>]) -> bool {
    let n = c.len();
    let a = c[n - 1][n - 1] as i128;
    if a == 0 {
        return true;
    }
    if n == 1 {
        return false;
    }
    if n == 5 && definite(c) {
        // q has constant sign off zero; the enumeration cannot succeed
        return false;
    }
    let m = n - 1;
    let hit = |x: &[i64]| {
        let mut full = x.to_vec();
        full.push(0);
        let cc = eval_int(c, &full);
        let b: i128 = (0..m).map(|i| c[i][m] as i128 * x[i] as i128).sum();
        is_square_i128(b * b - 4 * a * cc)
    };
    // coordinates before `lead` have height < h, x_lead = ±h, the rest ≤ h;
    // first nonzero coordinate positive
    fn fill(x: &mut [i64], pos: usize, lead: usize, h: i64, hit: &dyn Fn(&[i64]) -> bool) -> bool {
        if pos == x.len() {
            return x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0) && hit(x);
        }
        let vals: Vec<i64> = if pos == lead {
            vec![h, -h]
        } else if pos < lead {
            (-(h - 1)..h).collect()
        } else {
            (-h..=h).collect()
        };
        for v in vals {
            x[pos] = v;
            if fill(x, pos + 1, lead, h, hit) {
                return true;
            }
        }
        false
    }
    let mut x = vec![0i64; m];
    for h in 1..=ORACLE_HEIGHT {
        for lead in 0..m {
            if fill(&mut x, 0, lead, h, &hit) {
                return true;
            }
        }
    }
    // x' = 0 forces y = 0 since A ≠ 0
    false
}

fn criterion_1() -> Outcome {
    let k = Field::rationals();
    let mut r = rng(1);
    let (mut iso, mut aniso, mut bad) = (0, 0, Vec::new());
    let mut made = 0;
    while made < 200 {
        let n = r.gen_range(1..=5usize);
        let diagonal = r.gen_bool(0.5);
        let c: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i.cmp(&j), diagonal) {
                        (std::cmp::Ordering::Equal, _) => nonzero(&mut r, 20),
                        (std::cmp::Ordering::Less, false) => r.gen_range(-20..=20),
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let q = upper(&k, &c);
        if !q.is_nondegenerate() {
            continue;
        }
        made += 1;
        let hm = ok(isotropy::is_isotropic(&q), "decision")?;
        let bf = brute_force_isotropic(&c);
        if hm != bf {
            bad.push(format!("{c:?}: decision {hm}, search {bf}"));
        }
        if hm {
            iso += 1;
        } else {
            aniso += 1;
        }
    }
    check(bad.is_empty(), || format!("{} disagreements, first {}", bad.len(), bad[0]))?;
    Ok(format!("200 forms, {iso} isotropic / {aniso} anisotropic, 0 disagreements"))
}

// --- 2 -----------------------------------------------------------------------

fn criterion_2() -> Outcome {
    let k = Field::rationals();
    let mut r = rng(2);
    let (mut decided, mut witnessed) = (0, 0);
    for trial in 0..100 {
        let pf: Vec<Elem> = (0..3).map(|_| k.from_i64(nonzero(&mut r, 7))).collect();
        let a = k.from_i64(nonzero(&mut r, 5));
        let b = nonzero(&mut r, 11);
        let base = ok(QuadraticSpace::pfister(&k, &pf), "pfister")?
            .scale(&a)
            .orthogonal_sum(&QuadraticSpace::diag_i64(&k, &[b, -b]))
            .unwrap();
        let t: Vec<Vector> = loop {
            let t: Vec<Vector> = (0..10)
                .map(|i| (0..10).map(|j| k.from_i64(if i == j { 1 } else { r.gen_range(-1..=1) * r.gen_range(0..=1) })).collect())
                .collect();
            if linalg::rank(&k, &t) == 10 {
                break t;
            }
        };
        let q = ok(base.transform(&t), "transform")?;
        let disc = ok(invariants::discriminant(&q).and_then(|d| d.is_trivial(&k)), "disc")?;
        let (clif, _) = ok(invariants::clifford_invariant(&q), "clif")?;
        let diag = q.diagonal_form().unwrap();
        let pos = diag.iter().filter(|x| k.rational_sign(x) == Some(1)).count() as i64;
        let sig = 2 * pos - 10;
        check(disc && clif.is_trivial() && sig.rem_euclid(8) == 0, || format!("form {trial} escaped the invariant class"))?;
        if ok(isotropy::is_isotropic(&q), "decision")? {
            decided += 1;
        }
        if let Ok(v) = isotropy::isotropic_vector_with(&q, &Budget::default()) {
            if k.is_zero(&q.eval(&v)) && v.iter().any(|x| !k.is_zero(x)) {
                witnessed += 1;
            }
        }
    }
    check(decided == 100, || format!("only {decided}/100 declared isotropic"))?;
    check(witnessed as f64 >= WITNESS_RATE * 100.0, || format!("witnesses on {witnessed}/100"))?;
    Ok(format!("decision 100/100, witnesses {witnessed}/100"))
}

// --- 3 -----------------------------------------------------------------------

fn q12(l: &Field) -> QuadraticSpace {
    let t = l.t().unwrap();
    QuadraticSpace::diag_i64(l, &[1, 1, 1, 1, 1, 1, 7, 7])
        .orthogonal_sum(&QuadraticSpace::diag_i64(l, &[1, 1, -7, -7]).scale(&t))
        .unwrap()
}

fn criterion_3() -> Outcome {
    let k = Field::rationals();
    let l = ok(Field::laurent(k.clone()), "laurent")?;
    let cases = [
        ("diag(1,1,1,1,1,1,7,7)", QuadraticSpace::diag_i64(&k, &[1, 1, 1, 1, 1, 1, 7, 7]), TypeKind::E7),
        ("q12", q12(&l), TypeKind::E8),
        ("<1>^8", QuadraticSpace::diag_i64(&k, &[1; 8]), TypeKind::Neither),
    ];
    for (name, q, want) in cases {
        let got = ok(invariants::classify_type(&q), name)?.kind;
        check(got == want, || format!("{name}: {} instead of {}", got.name(), want.name()))?;
    }
    let (_, idx) = ok(invariants::clifford_invariant(&QuadraticSpace::diag_i64(&k, &[1; 8])), "index")?;
    check(idx == 1, || format!("<1>^8 has Clifford index {idx}"))?;
    Ok("E7, E8, neither as expected".into())
}

// --- 4 -----------------------------------------------------------------------

fn q8(k: &Field) -> QuadraticSpace {
    QuadraticSpace::diag_i64(k, &[1, 1, 1, 7, 1, 1, 1, 7])
}

fn small_vector(r: &mut ChaCha8Rng, n: usize, k: &Field) -> Vector {
    loop {
        let v: Vector = (0..n).map(|_| k.from_i64(r.gen_range(-3..=3))).collect();
        if v.iter().any(|x| !k.is_zero(x)) {
            return v;
        }
    }
}

fn criterion_4() -> Outcome {
    let k = Field::rationals();
    let q = q8(&k);
    let w = ok(hypcert::e7_witt_decompose(&q), "Witt pieces")?;
    let nq = w.nq_form(&k).unwrap();
    let pi = w.pi_form(&k).unwrap();
    let mut r = rng(4);
    let mut gammas: Vec<Elem> = Vec::new();
    let mut tries = 0;
    while gammas.len() < 20 {
        tries += 1;
        check(tries < 5000, || "could not sample 20 multipliers".into())?;
        let x = nq.eval(&small_vector(&mut r, 4, &k));
        if k.is_zero(&x) || !ok(similitudes::gq_membership(&pi, &x), "G(pi)")? {
            continue;
        }
        let s = k.from_i64(r.gen_range(1..=4));
        let g = k.mul(&x, &k.square(&s));
        if !gammas.contains(&g) {
            gammas.push(g);
        }
    }
    let mut nonsquare = 0;
    for g in &gammas {
        let c = ok(hypcert::hyp_certificate(&q, g), &format!("certificate for {}", k.format(g)))?;
        let v = hypcert::verify_certificate(&q, g, &c, false);
        check(v.accepted, || format!("{} rejected: {:?}", k.format(g), v.reasons))?;
        check(ok(similitudes::gq_membership(&q, g), "G(q)")?, || format!("{} not in G(q)", k.format(g)))?;
        if !c.entries.is_empty() {
            nonsquare += 1;
        }
    }
    // q8 is positive definite in I², so G(q8) is the positive rationals
    for g in [-1, -3] {
        let g = k.from_i64(g);
        check(!similitudes::gq_membership(&q, &g).unwrap(), || format!("{} in G(q)", k.format(&g)))?;
        check(hypcert::hyp_certificate(&q, &g).is_err(), || format!("certificate for {}", k.format(&g)))?;
    }
    Ok(format!("20 multipliers certified and verified ({nonsquare} with norm entries)"))
}

// --- 5 -----------------------------------------------------------------------

fn criterion_5() -> Outcome {
    let l = ok(Field::laurent(Field::rationals()), "laurent")?;
    let q = q12(&l);
    let mut r = rng(5);
    let mut gammas: Vec<i64> = Vec::new();
    while gammas.len() < 10 {
        let (a, b, s) = (r.gen_range(1..=6i64), r.gen_range(1..=6i64), r.gen_range(1..=2i64));
        let g = (a * a + b * b) * s * s;
        let root = (g as f64).sqrt().round() as i64;
        if root * root != g && !gammas.contains(&g) {
            gammas.push(g);
        }
    }
    let mut entries = 0;
    for &g in &gammas {
        let ge = l.from_i64(g);
        let split = ok(similitudes::e8_decompose(&q, &ge, None), &format!("E8 split for {g}"))?;
        check(split.q1.dim() == 4 && split.q2.dim() == 8, || format!("{g}: split dimensions"))?;
        let c = ok(hypcert::hyp_certificate(&q, &ge), &format!("lifted certificate for {g}"))?;
        let v = hypcert::verify_certificate(&q, &ge, &c, true);
        check(v.accepted, || format!("{g}: {:?}", v.reasons))?;
        for e in &c.entries {
            let CertEntry::Quadratic { d, .. } = e else {
                return Err(format!("{g}: non-quadratic entry after lifting"));
            };
            let sp = ok(splitting::hyperbolic_over_sqrt(&q, d), "re-verification")?;
            check(sp.hyperbolic && ok(splitting::verify_splitting(&q, &sp), "witness")?, || {
                format!("{g}: q12 not hyperbolic over sqrt({})", l.format(d))
            })?;
            entries += 1;
        }
    }
    Ok(format!("10 multipliers split and lifted, {entries} entries re-verified hyperbolic"))
}

// --- 6 -----------------------------------------------------------------------

fn criterion_6() -> Outcome {
    let fields = [Field::rationals(), Field::prime_field(3).unwrap(), Field::prime_field(5).unwrap(), Field::prime_field(7).unwrap()];
    let mut r = rng(6);
    let mut forms = 0;
    for k in &fields {
        let p = k.characteristic() as i64;
        for n in [2usize, 4, 6, 8] {
            let mut made = 0;
            while made < 6 {
                let dense = made % 2 == 1;
                let c: Vec<Vec<i64>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if i == j {
                                    nonzero(&mut r, 7)
                                } else if i < j && dense && n <= 4 {
                                    r.gen_range(-3..=3)
                                } else {
                                    0
                                }
                            })
                            .collect()
                    })
                    .collect();
                if p > 0 && c.iter().enumerate().any(|(i, row)| row[i] % p == 0) {
                    continue;
                }
                let q = upper(k, &c);
                if !q.is_nondegenerate() {
                    continue;
                }
                made += 1;
                forms += 1;
                let trivial = ok(invariants::discriminant(&q).and_then(|d| d.is_trivial(k)), "disc")?;
                let split = matches!(ok(clifford::central_idempotents(&q), "idempotents")?, Idempotents::Split { .. });
                check(trivial == split, || format!("{c:?} over {}: disc trivial {trivial}, split {split}", k.descriptor_json()))?;
                // ω² from the engine against the signed determinant
                let diag = q.diagonal_form().unwrap();
                let data = ok(clifford::center_data(&QuadraticSpace::diag(k, &diag)), "center")?;
                let sd = invariants::signed_determinant(k, &diag);
                check(data.relation == sd, || format!("{c:?}: omega^2 differs from the signed determinant"))?;
                if *k == Field::Rationals {
                    let engine = ok(clifford::clifford_class_by_peeling(k, &diag), "peeling")?;
                    let formula = ok(invariants::clifford_class_of_diagonal(k, &diag), "formula")?;
                    check(engine == formula, || format!("{c:?}: Clifford class by dimension formula differs"))?;
                }
            }
        }
    }
    // both outcomes are exercised
    let k = Field::rationals();
    let split = |d: &[i64]| matches!(clifford::central_idempotents(&QuadraticSpace::diag_i64(&k, d)).unwrap(), Idempotents::Split { .. });
    check(split(&[1, -1, 2, -2]) && !split(&[1, 1, 1, 7]), || "reference idempotents".into())?;
    Ok(format!("{forms} forms, idempotents match discriminants, constants agree"))
}

// --- 7 -----------------------------------------------------------------------

fn criterion_7() -> Outcome {
    let d = QuaternionAlgebra::from_i64(-1, -1);
    let k = d.field.clone();
    let h = ok(SkewHermitianSpace::diagonal(d.clone(), &[d.basis(1), d.basis(2), d.basis(3), d.basis(1)]), "h")?;
    let t = ok(quat::tau_transform(&h, &h.unit(0), &d.from_ints([1, 1, 0, 0])), "tau")?;
    check(t.spinor_class == k.from_i64(2), || format!("spinor class {}", k.format(&t.spinor_class)))?;

    let rep = ok(quat::sn_generators(&h, 1, 2), "generators")?;
    let ds: Vec<Elem> = rep.classes.iter().map(|c| c.d.clone()).collect();
    check(ds.contains(&k.from_i64(-1)) && ds.contains(&k.from_i64(-2)), || "classes -1 and -2 missing".into())?;
    for c in &rep.classes {
        let name = k.format(&c.d);
        check(c.d_split, || format!("D not split by sqrt({name})"))?;
        let he = ok(h.base_change(&c.witness.field), "base change")?;
        let w = &c.witness.w;
        check(he.d.is_zero(&he.eval(w, w).unwrap()) && w.iter().any(|x| !he.d.is_zero(x)), || {
            format!("no isotropy witness over sqrt({name})")
        })?;
        // there and back: x + y√a ↦ x + yλ = 2vλ
        let back = ok(quat::quadsplit_backward(&h, &c.witness.field, w, &c.witness.lambda), "backward")?;
        let two_lambda = d.scale(&k.from_i64(2), &c.witness.lambda);
        check(back.v == h.vec_rmul(&c.v, &two_lambda), || format!("round trip for {name}"))?;
    }

    let q = q8(&k);
    let d7 = QuaternionAlgebra::from_i64(-1, 7);
    let i = d7.basis(1);
    let h7 = ok(SkewHermitianSpace::diagonal(d7, &[i.clone(), i.clone(), i.clone(), i]), "curated h")?;
    let sample: Vec<Elem> = [-1, 2, -2, 7, -7, -14].iter().map(|&x| k.from_i64(x)).collect();
    let tr = ok(quat::triality_consistency(&q, &h7, &sample, &[k.from_i64(2)], 2, 3), "triality")?;
    check(tr.hard_violations.is_empty(), || format!("hard violations {:?}", tr.hard_violations))?;
    Ok(format!(
        "tau class 2; {} generator classes with witnesses and round trips; triality 0 hard violations ({} unknown)",
        rep.classes.len(),
        tr.unknown.len()
    ))
}

// --- 8 -----------------------------------------------------------------------

fn criterion_8() -> Outcome {
    let f = Field::rational_functions(Field::PrimeField(2), "t");
    let t = f.t().unwrap();
    let b = QuadraticSpace::binary_blocks(&f, &[(f.one(), f.one())]);
    let q = b.orthogonal_sum(&b.scale(&t)).unwrap();
    let (z, o) = (f.zero(), f.one());
    let m: Matrix = vec![
        vec![z.clone(), z.clone(), t.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), t.clone()],
        vec![o.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), o.clone(), z.clone(), z.clone()],
    ];
    let sim = ok(similitudes::verify_similitude(&q, &m), "similitude")?;
    check(sim.multiplier == t && !sim.separable, || "expected an inseparable similitude with multiplier t".into())?;
    let dec = ok(similitudes::insep_decompose(&q, &m), "decomposition")?;
    check(dec.q0.dim() == 2 && dec.q0.is_nondegenerate(), || "q0 shape".into())?;
    check(linalg::rank(&f, &dec.isometry) == 4, || "isometry columns are dependent".into())?;
    let image = ok(q.transform(&dec.isometry), "transform")?;
    let target = dec.q0.orthogonal_sum(&dec.q0.scale(&t)).unwrap();
    check(image.coeffs() == target.coeffs(), || "q in the isometry basis is not <1,t>q0".into())?;
    let e = ok(Field::quad_ext(f.clone(), f.zero(), t.clone()), "K(sqrt t)")?;
    let s = ok(splitting::hyperbolic_over_quadratic(&q, &e), "splitting")?;
    check(s.hyperbolic && ok(splitting::verify_splitting(&q, &s), "witness")?, || "q not hyperbolic over K(sqrt t)".into())?;
    Ok("q = <1,t>q0 verified; hyperbolic over K(sqrt t)".into())
}

// --- 9 -----------------------------------------------------------------------

fn criterion_9(start: Instant) -> Outcome {
    let k = Field::rationals();
    let mut r = rng(9);
    let n = 12;
    // the engine multiplies in an orthogonal basis outside characteristic 2
    let diag: Vec<i64> = (0..n).map(|_| nonzero(&mut r, 9)).collect();
    let q = QuadraticSpace::diag_i64(&k, &diag);
    let alg = ok(CliffordAlgebra::new(&q), "algebra")?;
    let even = alg.even_part_basis();
    check(even.len() == 2048, || format!("even part has dimension {}", even.len()))?;
    let dense = |r: &mut ChaCha8Rng| {
        even.iter().fold(CliffordEl::zero(), |acc, &m| {
            let c = Elem::Q(BigRational::new(BigInt::from(nonzero(r, 50)), BigInt::from(r.gen_range(1..=9))));
            acc.add(&k, &CliffordEl::monomial(&k, m, c))
        })
    };
    let (x, y) = (dense(&mut r), dense(&mut r));
    let t0 = Instant::now();
    let p = alg.mul(&x, &y);
    let dt = t0.elapsed();
    check(p.is_even() && !p.is_zero(), || "product left the even part".into())?;
    check(dt <= C0_PRODUCT_BUDGET, || format!("dense product took {dt:?}, budget {C0_PRODUCT_BUDGET:?}"))?;
    let total = start.elapsed();
    check(total <= SUITE_BUDGET, || format!("suite took {total:?}, budget {SUITE_BUDGET:?}"))?;
    Ok(format!("dense n=12 even product {dt:.2?} (budget {C0_PRODUCT_BUDGET:?}); suite so far {total:.1?}"))
}

fn run(n: usize, f: impl FnOnce() -> Outcome) -> bool {
    let t0 = Instant::now();
    let out = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panic: {}", msg.unwrap_or_default()))
    });
    let secs = t0.elapsed().as_secs_f64();
    match out {
        Ok(msg) => {
            println!("criterion {n}: PASS ({secs:.1}s) {msg}");
            true
        }
        Err(msg) => {
            println!("criterion {n}: FAIL ({secs:.1}s) {msg}");
            false
        }
    }
}

fn main() {
    // the libtest flags cargo forwards are not meaningful here
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    // numeric arguments select criteria; anything else is ignored
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let want = |n: usize| only.is_empty() || only.contains(&n);
    let start = Instant::now();
    let last = || criterion_9(start);
    let suite: [(usize, &dyn Fn() -> Outcome); 9] = [
        (1, &criterion_1),
        (2, &criterion_2),
        (3, &criterion_3),
        (4, &criterion_4),
        (5, &criterion_5),
        (6, &criterion_6),
        (7, &criterion_7),
        (8, &criterion_8),
        (9, &last),
    ];
    let results: Vec<bool> = suite.iter().filter(|(n, _)| want(*n)).map(|(n, f)| run(*n, f)).collect();
    let passed = results.iter().filter(|&&b| b).count();
    println!("acceptance: {passed}/{} criteria passed in {:.1?}", results.len(), start.elapsed());
    if passed != results.len() {
        std::process::exit(1);
    }
}
