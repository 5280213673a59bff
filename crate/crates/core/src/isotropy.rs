//! Isotropy decisions, isotropic vectors and Witt decompositions.
//!
//! Over ℚ the decision is Hasse–Minkowski with the local criteria of Serre,
//! *A Course in Arithmetic*, IV.2.2; vectors come from a small height search
//! followed by Legendre descent on ternary pieces. Over 𝔽_p we use the
//! Chevalley bound. Over the Laurent view we use Springer's theorem on the
//! two residue forms. Elsewhere (characteristic 2 function fields and their
//! quadratic extensions) only a bounded search is available.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::brauer::{hilbert_symbol_q, Place};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Vector};
use crate::quadform::QuadraticSpace;

/// Search limits for isotropic vectors.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Candidate vectors tried by the height search.
    pub candidates: u64,
    /// Largest |c| tried when splitting forms of dimension ≥ 4 over ℚ.
    pub split_bound: i64,
    /// Degree bound on polynomial coordinates in characteristic 2 searches.
    pub char2_degree: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { candidates: 1_000_000, split_bound: 20_000, char2_degree: 1 }
    }
}

/// Outcome of a vector search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    Found(Vector),
    Anisotropic,
    /// Search exhausted without a decision (fields without a decision procedure).
    Unknown,
}

// ---------------------------------------------------------------------------
// local and global decisions over ℚ

fn hasse_invariant(diag: &[BigRational], place: Place) -> Result<i32> {
    let mut e = 1;
    for i in 0..diag.len() {
        for j in (i + 1)..diag.len() {
            e *= hilbert_symbol_q(&diag[i], &diag[j], place)?;
        }
    }
    Ok(e)
}

fn is_local_square(x: &BigRational, place: Place) -> bool {
    match place {
        Place::Infinity => x.is_positive(),
        Place::Prime(p) => arith::is_padic_square(x, p),
    }
}

/// Isotropy of a nondegenerate diagonal form over ℚ_v.
pub fn locally_isotropic(diag: &[BigRational], place: Place) -> Result<bool> {
    let n = diag.len();
    if place == Place::Infinity {
        return Ok(diag.iter().any(|a| a.is_positive()) && diag.iter().any(|a| a.is_negative()));
    }
    let d: BigRational = diag.iter().product();
    let minus_one = BigRational::from_integer((-1).into());
    Ok(match n {
        0 | 1 => false,
        // −d is a square
        2 => is_local_square(&-d, place),
        // (−1, −d) = ε
        3 => hilbert_symbol_q(&minus_one, &-d, place)? == hasse_invariant(diag, place)?,
        // d not a square, or ε = (−1, −1)
        4 => {
            !is_local_square(&d, place)
                || hasse_invariant(diag, place)? == hilbert_symbol_q(&minus_one, &minus_one, place)?
        }
        _ => true,
    })
}

/// Places where a diagonal form over ℚ may fail to be isotropic.
pub fn relevant_places(diag: &[BigRational]) -> Result<Vec<Place>> {
    let refs: Vec<&BigRational> = diag.iter().collect();
    let mut out = vec![Place::Infinity];
    out.extend(arith::relevant_primes(&refs)?.into_iter().map(Place::Prime));
    Ok(out)
}

/// Hasse–Minkowski over ℚ for a nondegenerate diagonal form.
pub fn hm_isotropic(diag: &[BigRational]) -> Result<bool> {
    if diag.iter().any(|a| a.is_zero()) {
        return Ok(true);
    }
    if diag.len() < 2 {
        return Ok(false);
    }
    for place in relevant_places(diag)? {
        if !locally_isotropic(diag, place)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// vectors over ℚ

/// Small-height search for ∑ sᵢ zᵢ² = 0 with integer sᵢ, solving for z₀.
/// Candidates are ordered by height, then colexicographically.
fn height_search(s: &[i128], budget: u64) -> Option<Vec<i128>> {
    let n = s.len();
    if n < 2 {
        return None;
    }
    let mut h: i128 = 1;
    loop {
        let per_pass = (h as u128 + 1).checked_pow((n - 1) as u32)?;
        if per_pass > budget as u128 {
            return None;
        }
        let mut z = vec![0i128; n];
        'outer: loop {
            // advance the counter over z[1..]
            let mut i = 1;
            loop {
                if i == n {
                    break 'outer;
                }
                if z[i] < h {
                    z[i] += 1;
                    break;
                }
                z[i] = 0;
                i += 1;
            }
            let rest: i128 = (1..n).map(|i| s[i] * z[i] * z[i]).sum();
            if rest % s[0] != 0 {
                continue;
            }
            let sq = -rest / s[0];
            if sq < 0 {
                continue;
            }
            let r = (sq as f64).sqrt().round() as i128;
            for cand in [r - 1, r, r + 1] {
                if cand >= 0 && cand * cand == sq {
                    z[0] = cand;
                    return Some(z);
                }
            }
        }
        h *= 2;
    }
}

/// Solves Z² = A X² + B Y² for squarefree nonzero A, B by Legendre descent.
fn legendre_descent(a: &BigInt, b: &BigInt) -> Result<Option<(BigInt, BigInt, BigInt)>> {
    if a.is_one() {
        return Ok(Some((BigInt::one(), BigInt::one(), BigInt::zero())));
    }
    if b.is_one() {
        return Ok(Some((BigInt::one(), BigInt::zero(), BigInt::one())));
    }
    if a.abs() > b.abs() {
        return Ok(legendre_descent(b, a)?.map(|(z, x, y)| (z, y, x)));
    }
    if b.abs().is_one() {
        // A = B = −1
        return Ok(None);
    }
    let m = b.abs();
    let Some(mut r) = arith::sqrt_mod_squarefree(a, &m)? else {
        return Ok(None);
    };
    if &r * 2 > m {
        r -= &m;
    }
    let t = (&r * &r - a) / b;
    if t.is_zero() {
        return Ok(Some((r, BigInt::one(), BigInt::zero())));
    }
    let (t0, s) = arith::squarefree_decompose(&t)?;
    let Some((z1, x1, y1)) = legendre_descent(a, &t0)? else {
        return Ok(None);
    };
    // (r + √A)(Z' + X'√A) has norm B·(T₀ s Y')²
    let mut out = (&r * &z1 + a * &x1, &z1 + &r * &x1, &t0 * &s * &y1);
    if out.0.is_zero() && out.1.is_zero() && out.2.is_zero() {
        out = (&r * &z1 - a * &x1, -&z1 + &r * &x1, &t0 * &s * &y1);
    }
    Ok(Some(out))
}

fn br(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Isotropic vector of ⟨s₁,…,s_n⟩ with squarefree integer entries, known to be isotropic.
fn construct_vector(s: &[BigInt], budget: &Budget) -> Result<Option<Vec<BigRational>>> {
    let n = s.len();
    match n {
        0 | 1 => Ok(None),
        2 => {
            let x2 = BigRational::new(-&s[1], s[0].clone());
            Ok(arith::sqrt_rational(&x2).map(|x| vec![x, BigRational::one()]))
        }
        3 => {
            // s₁x² + s₂y² + s₃z² = 0  ⇔  (s₃z)² = −s₁s₃x² − s₂s₃y²
            let (a, alpha) = arith::squarefree_decompose(&(-&s[0] * &s[2]))?;
            let (b, beta) = arith::squarefree_decompose(&(-&s[1] * &s[2]))?;
            let Some((z, x, y)) = legendre_descent(&a, &b)? else {
                return Ok(None);
            };
            Ok(Some(vec![
                BigRational::new(x, alpha),
                BigRational::new(y, beta),
                BigRational::new(z, s[2].clone()),
            ]))
        }
        _ => {
            // s₁x₁² + s₂x₂² = c and s₃x₃² + … = −c
            let head = [br(&s[0]), br(&s[1])];
            let tail: Vec<BigRational> = s[2..].iter().map(br).collect();
            for c in split_candidates(s, budget.split_bound).chain(local_split_candidates(s)?) {
                let cq = br(&c);
                let mut left = head.to_vec();
                left.push(-cq.clone());
                let mut right = tail.clone();
                right.push(cq);
                if !hm_isotropic(&left)? || !hm_isotropic(&right)? {
                    continue;
                }
                let l = construct_vector(&[s[0].clone(), s[1].clone(), -c.clone()], budget)?
                    .ok_or_else(|| Error::Internal("ternary descent failed on an isotropic form".into()))?;
                let mut rs: Vec<BigInt> = s[2..].to_vec();
                rs.push(c.clone());
                let r = construct_vector(&rs, budget)?
                    .ok_or_else(|| Error::Internal("descent failed on an isotropic form".into()))?;
                let mut out = vec![BigRational::zero(); n];
                if l[2].is_zero() {
                    out[0] = l[0].clone();
                    out[1] = l[1].clone();
                    return Ok(Some(out));
                }
                let last = r.len() - 1;
                if r[last].is_zero() {
                    out[2..].clone_from_slice(&r[..last]);
                    return Ok(Some(out));
                }
                out[0] = &l[0] / &l[2];
                out[1] = &l[1] / &l[2];
                for i in 0..last {
                    out[2 + i] = &r[i] / &r[last];
                }
                return Ok(Some(out));
            }
            Err(Error::Budget(format!("no splitting value |c| ≤ {}", budget.split_bound)))
        }
    }
}

/// Values s₁x² + s₂y² and −(s₃x² + s₄y²) for small x, y first (each makes one
/// half isotropic), then small squarefree integers.
fn split_candidates(s: &[BigInt], bound: i64) -> impl Iterator<Item = BigInt> + '_ {
    let mut firsts: Vec<BigInt> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for r in 0..=40i64 {
        for x in 0..=r {
            for (u, v) in [(x, r), (r, x)] {
                for (a, b, sign) in [(&s[0], &s[1], 1), (&s[2], &s[3], -1)] {
                    let val: BigInt = (a * BigInt::from(u * u) + b * BigInt::from(v * v)) * BigInt::from(sign);
                    if val.is_zero() {
                        continue;
                    }
                    if let Ok((c, _)) = arith::squarefree_decompose(&val) {
                        if seen.insert(c.clone()) {
                            firsts.push(c);
                        }
                    }
                }
            }
        }
    }
    let smalls = (1..=bound).flat_map(|c| [c, -c]).filter(|&c| is_squarefree_small(c)).map(BigInt::from);
    firsts.into_iter().chain(smalls)
}

/// Split values assembled from local data: at each relevant place, the square
/// classes of c making both ⟨s₁,s₂,−c⟩ and ⟨s₃,…,c⟩ isotropic fix the sign and
/// some valuation parities; c runs over those primes times small cofactors.
fn local_split_candidates(s: &[BigInt]) -> Result<Vec<BigInt>> {
    let q = |n: &BigInt| BigRational::from_integer(n.clone());
    let rs: Vec<BigRational> = s.iter().map(q).collect();
    let refs: Vec<&BigRational> = rs.iter().collect();
    let primes = arith::relevant_primes(&refs)?;
    let left_ok = |c: &BigRational, place: Place| -> Result<bool> {
        Ok(locally_isotropic(&[rs[0].clone(), rs[1].clone(), -c.clone()], place)?
            && locally_isotropic(&[&rs[2..], &[c.clone()][..]].concat(), place)?)
    };
    let mut forced = BigInt::one();
    let mut free: Vec<u64> = Vec::new();
    let mut signs = Vec::new();
    for sign in [1i64, -1] {
        if left_ok(&BigRational::from_integer(sign.into()), Place::Infinity)? {
            signs.push(sign);
        }
    }
    for &p in &primes {
        let units: Vec<i64> = if p == 2 {
            vec![1, 3, 5, 7]
        } else {
            let eps = (2..p as i64).find(|&n| arith::legendre(&BigInt::from(n), p) == -1).unwrap_or(1);
            vec![1, eps]
        };
        let (mut even, mut odd) = (false, false);
        for u in &units {
            even |= left_ok(&BigRational::from_integer((*u).into()), Place::Prime(p))?;
            odd |= left_ok(&BigRational::from_integer(BigInt::from(*u) * p), Place::Prime(p))?;
        }
        match (even, odd) {
            (true, true) => free.push(p),
            (false, true) => forced *= p,
            (true, false) => {}
            (false, false) => return Ok(vec![]),
        }
    }
    free.truncate(4);
    let mut out = Vec::new();
    for mask in 0..(1u32 << free.len()) {
        let mut g = forced.clone();
        for (i, p) in free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g *= *p;
            }
        }
        for m in 1..=400u64 {
            if primes.iter().any(|p| m % p == 0) || !is_squarefree_small(m as i64) {
                continue;
            }
            for &sign in &signs {
                out.push(&g * m * sign);
            }
        }
    }
    Ok(out)
}

fn is_squarefree_small(c: i64) -> bool {
    let c = c.unsigned_abs();
    arith::factor_u64(c).iter().all(|&(_, e)| e == 1)
}

/// Isotropic vector of a diagonal form over ℚ (nonzero entries), or `None`.
pub fn isotropic_vector_q_diag(diag: &[BigRational], budget: &Budget) -> Result<Option<Vec<BigRational>>> {
    if let Some(i) = diag.iter().position(|a| a.is_zero()) {
        let mut v = vec![BigRational::zero(); diag.len()];
        v[i] = BigRational::one();
        return Ok(Some(v));
    }
    if !hm_isotropic(diag)? {
        return Ok(None);
    }
    // aᵢxᵢ² = sᵢ(rᵢxᵢ/dᵢ)² with aᵢ = nᵢ/dᵢ and nᵢdᵢ = sᵢrᵢ²
    let mut s = Vec::with_capacity(diag.len());
    let mut scale = Vec::with_capacity(diag.len());
    for a in diag {
        let (sq, r) = arith::squarefree_decompose(&(a.numer() * a.denom()))?;
        s.push(sq);
        scale.push(BigRational::new(a.denom().clone(), r));
    }
    let small: Option<Vec<i128>> = s.iter().map(|x| x.to_i128().filter(|v| v.abs() < (1 << 40))).collect();
    let z: Vec<BigRational> = match small.and_then(|s| height_search(&s, budget.candidates)) {
        Some(z) => z.into_iter().map(|x| BigRational::from_integer(x.into())).collect(),
        None => construct_vector(&s, budget)?
            .ok_or_else(|| Error::Internal("descent failed on a locally isotropic form".into()))?,
    };
    let x: Vec<BigRational> = z.iter().zip(&scale).map(|(z, c)| z * c).collect();
    Ok(Some(primitive(&x)))
}

/// Scales a nonzero rational vector to a primitive integer vector.
pub fn primitive(x: &[BigRational]) -> Vec<BigRational> {
    let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| (v * br(&l)).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return x.to_vec();
    }
    ints.into_iter().map(|v| BigRational::from_integer(v / &g)).collect()
}

// ---------------------------------------------------------------------------
// the Laurent view

/// A diagonal basis of a form over k((t)) scaled so that each value is
/// (unit)·t^{0|1}, grouped by the parity of the valuation.
#[derive(Clone, Debug)]
pub struct ResidueSplit {
    pub base: Field,
    /// Ambient vectors of the scaled diagonal basis.
    pub basis: Vec<Vector>,
    /// (index into `basis`, leading coefficient) for even valuations.
    pub first: Vec<(usize, Elem)>,
    /// Same for odd valuations.
    pub second: Vec<(usize, Elem)>,
    /// Whether every basis value equals its leading term exactly.
    pub monomial: bool,
}

impl ResidueSplit {
    pub fn first_form(&self) -> QuadraticSpace {
        let e: Vec<Elem> = self.first.iter().map(|(_, c)| c.clone()).collect();
        QuadraticSpace::diag(&self.base, &e)
    }

    pub fn second_form(&self) -> QuadraticSpace {
        let e: Vec<Elem> = self.second.iter().map(|(_, c)| c.clone()).collect();
        QuadraticSpace::diag(&self.base, &e)
    }

    /// Ambient vector from coordinates on one residue piece.
    pub fn lift(&self, l: &Field, second: bool, w: &[Elem]) -> Result<Vector> {
        let part = if second { &self.second } else { &self.first };
        let n = self.basis.first().map_or(0, |b| b.len());
        let mut v = vec![l.zero(); n];
        for ((idx, _), c) in part.iter().zip(w) {
            let c = l.embed_constant(c);
            v = linalg::vec_add(l, &v, &linalg::vec_scale(l, &c, &self.basis[*idx]));
        }
        Ok(v)
    }
}

pub fn residue_split(q: &QuadraticSpace) -> Result<ResidueSplit> {
    let l = &q.field;
    let Field::LaurentView { base } = l else {
        return Err(Error::Unsupported("residue forms need the Laurent view".into()));
    };
    q.require_nondegenerate()?;
    let (b, d) = q.diagonalize()?;
    let cols = linalg::transpose(&b);
    let t = l.t()?;
    let mut out = ResidueSplit {
        base: (**base).clone(),
        basis: Vec::new(),
        first: Vec::new(),
        second: Vec::new(),
        monomial: true,
    };
    for (i, (col, a)) in cols.into_iter().zip(d).enumerate() {
        let (v, lead) = l.t_adic_parts(&a)?;
        let shift = v.div_euclid(2);
        let col = linalg::vec_scale(l, &l.pow(&t, -shift)?, &col);
        let parity = v.rem_euclid(2);
        let expected = l.mul(&l.embed_constant(&lead), &l.pow(&t, parity)?);
        if q.eval(&col) != expected {
            out.monomial = false;
        }
        out.basis.push(col);
        if parity == 0 {
            out.first.push((i, lead));
        } else {
            out.second.push((i, lead));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// dispatch

/// Exact isotropy decision (ℚ, 𝔽_p, the Laurent view over ℚ or 𝔽_p).
pub fn is_isotropic(q: &QuadraticSpace) -> Result<bool> {
    q.require_nondegenerate()?;
    let k = &q.field;
    match k {
        Field::Rationals => {
            let d: Vec<BigRational> =
                q.diagonal_form()?.iter().map(|x| x.as_rational().unwrap().clone()).collect();
            hm_isotropic(&d)
        }
        Field::PrimeField(2) => Ok(brute_force_f2(q).is_some()),
        Field::PrimeField(_) => {
            let d = q.diagonal_form()?;
            Ok(match d.len() {
                0 | 1 => false,
                2 => k.is_square(&k.neg(&k.mul(&d[0], &d[1])))?.0,
                _ => true,
            })
        }
        Field::LaurentView { .. } => {
            let split = residue_split(q)?;
            Ok(is_isotropic(&split.first_form())? || is_isotropic(&split.second_form())?)
        }
        _ => Err(Error::Unsupported(format!("isotropy decision over {}", k.descriptor_json()))),
    }
}

fn brute_force_f2(q: &QuadraticSpace) -> Option<Vector> {
    let n = q.dim();
    if n > 24 {
        return None;
    }
    (1u64..(1 << n)).map(|bits| (0..n).map(|i| Elem::Fp((bits >> i) & 1)).collect::<Vector>()).find(|v| q.field.is_zero(&q.eval(v)))
}

pub fn isotropic_vector(q: &QuadraticSpace) -> Result<Vector> {
    isotropic_vector_with(q, &Budget::default())
}

/// A nonzero vector with q(v) = 0; a precondition error if q is anisotropic.
pub fn isotropic_vector_with(q: &QuadraticSpace, budget: &Budget) -> Result<Vector> {
    match search(q, budget)? {
        Search::Found(v) => Ok(v),
        Search::Anisotropic => Err(Error::Precondition("form is anisotropic".into())),
        Search::Unknown => Err(Error::Budget("no isotropic vector within the search bounds".into())),
    }
}

/// Isotropic vector, proof of anisotropy, or an inconclusive bounded search.
pub fn search(q: &QuadraticSpace, budget: &Budget) -> Result<Search> {
    let k = &q.field;
    if q.dim() == 0 {
        return Ok(Search::Anisotropic);
    }
    match k {
        Field::Rationals => {
            if !q.is_nondegenerate() {
                let (b, d) = q.diagonalize()?;
                let dq: Vec<BigRational> = d.iter().map(|x| x.as_rational().unwrap().clone()).collect();
                return Ok(match isotropic_vector_q_diag(&dq, budget)? {
                    None => Search::Anisotropic,
                    Some(y) => Search::Found(linalg::mat_vec(k, &b, &y.into_iter().map(Elem::Q).collect::<Vector>())),
                });
            }
            let n = q.dim();
            let units: Vec<Vector> = (0..n).map(|i| linalg::unit_vector(k, n, i)).collect();
            if let Some(s) = indefinite_coordinate_span(q)? {
                let span: Vec<Vector> = s.iter().map(|&i| units[i].clone()).collect();
                if let Some(v) = vector_in_span_q(q, &span, budget)? {
                    return Ok(Search::Found(v));
                }
                return Err(Error::Internal("indefinite five-dimensional subform without a vector".into()));
            }
            Ok(vector_in_span_q(q, &units, budget)?.map_or(Search::Anisotropic, Search::Found))
        }
        Field::PrimeField(2) => Ok(brute_force_f2(q).map_or(Search::Anisotropic, Search::Found)),
        Field::PrimeField(p) => {
            let (b, d) = q.diagonalize()?;
            let n = d.len();
            let mut y = vec![k.zero(); n];
            if n >= 3 {
                // a₁x² + a₂y² = −a₃z² with z = 1
                for x0 in 0..*p {
                    for x1 in 0..*p {
                        let (e0, e1) = (Elem::Fp(x0), Elem::Fp(x1));
                        let s = k.add(&k.mul(&d[0], &k.square(&e0)), &k.mul(&d[1], &k.square(&e1)));
                        let rhs = k.div(&k.neg(&s), &d[2])?;
                        if let Some(z) = k.sqrt(&rhs)? {
                            y[0] = e0;
                            y[1] = e1;
                            y[2] = z;
                            return Ok(Search::Found(linalg::mat_vec(k, &b, &y)));
                        }
                    }
                }
                return Err(Error::Internal("Chevalley bound violated".into()));
            }
            if n == 2 {
                if let Some(x) = k.sqrt(&k.div(&k.neg(&d[1]), &d[0])?)? {
                    y[0] = x;
                    y[1] = k.one();
                    return Ok(Search::Found(linalg::mat_vec(k, &b, &y)));
                }
            }
            Ok(Search::Anisotropic)
        }
        Field::LaurentView { .. } => {
            let split = residue_split(q)?;
            for second in [false, true] {
                let res = if second { split.second_form() } else { split.first_form() };
                if res.dim() == 0 {
                    continue;
                }
                if let Search::Found(w) = search(&res, budget)? {
                    if !split.monomial {
                        return Err(Error::Unsupported(
                            "isotropic residue form, but the form is not in monomial residue shape".into(),
                        ));
                    }
                    let v = split.lift(k, second, &w)?;
                    debug_assert!(k.is_zero(&q.eval(&v)));
                    return Ok(Search::Found(v));
                }
            }
            Ok(Search::Anisotropic)
        }
        _ => Ok(bounded_search(q, budget)),
    }
}

/// Five coordinates spanning an indefinite nondegenerate subform, when q is
/// larger than that. Such a subform is isotropic, and its Gram matrix is
/// small, so the diagonal entries stay easy to factor.
fn indefinite_coordinate_span(q: &QuadraticSpace) -> Result<Option<Vec<usize>>> {
    let n = q.dim();
    if n <= 5 {
        return Ok(None);
    }
    let k = &q.field;
    let mut cands = Vec::new();
    subsets(n, 5, None, &mut cands);
    for c in cands {
        let span: Vec<Vector> = c.iter().map(|&i| linalg::unit_vector(k, n, i)).collect();
        let (_, d) = q.restrict(&span)?.diagonalize()?;
        let signs: Vec<i32> = d.iter().filter_map(|x| k.rational_sign(x)).collect();
        if d.iter().any(|x| k.is_zero(x)) {
            continue;
        }
        if signs.contains(&1) && signs.contains(&-1) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Isotropic vector of q inside a nondegenerate span over ℚ, found on the
/// smallest isotropic piece of a squarefree orthogonal basis.
fn vector_in_span_q(q: &QuadraticSpace, span: &[Vector], budget: &Budget) -> Result<Option<Vector>> {
    let k = &q.field;
    let (basis, vals) = squarefree_orthogonal_basis(q, span)?;
    let diag: Vec<BigRational> = vals.iter().map(br).collect();
    let Some(sup) = isotropic_support(&diag, None)? else { return Ok(None) };
    let sub: Vec<BigRational> = sup.iter().map(|&i| diag[i].clone()).collect();
    let y = isotropic_vector_q_diag(&sub, budget)?
        .ok_or_else(|| Error::Internal("isotropic subform without a vector".into()))?;
    let sub_basis: Vec<Vector> = sup.iter().map(|&i| basis[i].clone()).collect();
    Ok(Some(combine(k, &sub_basis, &y.into_iter().map(Elem::Q).collect::<Vector>())))
}

/// Small field elements used by the bounded search: polynomials of degree
/// ≤ bound over 𝔽₂ (and pairs of them over a quadratic extension).
pub fn small_elements(k: &Field, degree: usize) -> Vec<Elem> {
    match k {
        Field::PrimeField(p) if *p < 64 => (0..*p).map(Elem::Fp).collect(),
        Field::RationalFunctions { base, .. } => {
            let coeffs = small_elements(base, 0);
            let mut out = vec![Vec::new()];
            for _ in 0..=degree {
                let mut next = Vec::new();
                for p in &out {
                    for c in &coeffs {
                        let mut q: Vec<Elem> = p.clone();
                        q.push(c.clone());
                        next.push(q);
                    }
                }
                out = next;
            }
            out.into_iter()
                .map(|mut p| {
                    crate::field::poly::trim(base, &mut p);
                    k.ratfn(p, vec![base.one()]).unwrap()
                })
                .collect()
        }
        Field::QuadExt { base, .. } => {
            let s = small_elements(base, degree);
            let mut out = Vec::new();
            for a in &s {
                for b in &s {
                    out.push(Elem::quad(a.clone(), b.clone()));
                }
            }
            out
        }
        Field::Rationals => (-2..=2).map(|n| k.from_i64(n)).collect(),
        _ => vec![k.zero(), k.one()],
    }
}

fn bounded_search(q: &QuadraticSpace, budget: &Budget) -> Search {
    let k = &q.field;
    let elems = small_elements(k, budget.char2_degree);
    let n = q.dim();
    let m = elems.len() as u64;
    let total = m.checked_pow(n as u32).unwrap_or(u64::MAX);
    let limit = total.min(budget.candidates);
    let mut idx = vec![0usize; n];
    for _ in 0..limit {
        // advance
        let mut i = 0;
        while i < n {
            idx[i] += 1;
            if idx[i] < elems.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        let v: Vector = idx.iter().map(|&j| elems[j].clone()).collect();
        if k.is_zero(&q.eval(&v)) {
            return Search::Found(v);
        }
    }
    Search::Unknown
}

// ---------------------------------------------------------------------------
// Witt decomposition

#[derive(Clone, Debug)]
pub struct WittDecomposition {
    pub witt_index: usize,
    /// Hyperbolic pairs (e, f): q(e) = q(f) = 0, f(e, f) = 1.
    pub pairs: Vec<(Vector, Vector)>,
    pub kernel_basis: Vec<Vector>,
    pub kernel: QuadraticSpace,
    /// False when the kernel came from an inconclusive bounded search.
    pub kernel_anisotropic: bool,
}

impl WittDecomposition {
    pub fn is_hyperbolic(&self) -> bool {
        self.kernel_basis.is_empty()
    }
}

pub fn witt_decompose(q: &QuadraticSpace) -> Result<WittDecomposition> {
    witt_decompose_with(q, &Budget::default())
}

pub fn witt_decompose_with(q: &QuadraticSpace, budget: &Budget) -> Result<WittDecomposition> {
    q.require_nondegenerate()?;
    if q.field == Field::Rationals {
        return witt_decompose_q(q, budget);
    }
    let k = &q.field;
    let n = q.dim();
    // Witt decomposition is additive: split each orthogonal coordinate block,
    // then whatever kernels remain together.
    let mut pairs = Vec::new();
    let mut kernels: Vec<(Vec<Vector>, bool)> = Vec::new();
    for comp in coordinate_components(q) {
        let span: Vec<Vector> = comp.iter().map(|&i| linalg::unit_vector(k, n, i)).collect();
        let (p, rest, aniso) = witt_loop(q, span, budget)?;
        pairs.extend(p);
        if !rest.is_empty() {
            kernels.push((rest, aniso));
        }
    }
    let (span, anisotropic) = match kernels.len() {
        0 => (Vec::new(), true),
        1 => kernels.pop().unwrap(),
        _ => {
            let (p, rest, aniso) = witt_loop(q, kernels.into_iter().flat_map(|(s, _)| s).collect(), budget)?;
            pairs.extend(p);
            (rest, aniso)
        }
    };
    let kernel = q.restrict(&span)?;
    Ok(WittDecomposition { witt_index: pairs.len(), pairs, kernel_basis: span, kernel, kernel_anisotropic: anisotropic })
}

/// Index sets of the connected components of the coefficient graph.
fn coordinate_components(q: &QuadraticSpace) -> Vec<Vec<usize>> {
    let k = &q.field;
    let n = q.dim();
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(c: &mut [usize], mut i: usize) -> usize {
        while c[i] != i {
            c[i] = c[c[i]];
            i = c[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if !k.is_zero(&q.coeffs()[i][j]) {
                let (a, b) = (root(&mut comp, i), root(&mut comp, j));
                comp[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut at = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut comp, i);
        if at[r] == usize::MAX {
            at[r] = out.len();
            out.push(Vec::new());
        }
        out[at[r]].push(i);
    }
    out
}

/// Splits hyperbolic planes off span(`span`) until the search stops.
fn witt_loop(q: &QuadraticSpace, mut span: Vec<Vector>, budget: &Budget) -> Result<(Vec<(Vector, Vector)>, Vec<Vector>, bool)> {
    let k = &q.field;
    let mut pairs = Vec::new();
    let mut anisotropic = true;
    while span.len() >= 2 {
        let local = q.restrict(&span)?;
        let y = match search(&local, budget)? {
            Search::Found(y) => y,
            Search::Anisotropic => break,
            Search::Unknown => {
                anisotropic = false;
                break;
            }
        };
        let e = combine(k, &span, &y);
        let f = hyperbolic_partner(q, &e, &span)?;
        // complement of span(e, f) inside the current span
        span = orthogonal_complement(q, &span, &[&e, &f]);
        pairs.push((e, f));
    }
    Ok((pairs, span, anisotropic))
}

/// f with q(f) = 0 and f(e, f) = 1, taken from span(e, s) for some s in `span`.
fn hyperbolic_partner(q: &QuadraticSpace, e: &Vector, span: &[Vector]) -> Result<Vector> {
    let k = &q.field;
    let j = span
        .iter()
        .position(|s| !k.is_zero(&q.polar(e, s)))
        .ok_or_else(|| Error::Internal("isotropic vector in the radical".into()))?;
    let w = linalg::vec_scale(k, &k.inv(&q.polar(e, &span[j]))?, &span[j]);
    Ok(linalg::vec_sub(k, &w, &linalg::vec_scale(k, &q.eval(&w), e)))
}

/// Vectors of span(`span`) orthogonal to each of `against`.
pub fn orthogonal_complement(q: &QuadraticSpace, span: &[Vector], against: &[&Vector]) -> Vec<Vector> {
    let k = &q.field;
    let rows: Vec<Vector> = against.iter().map(|a| span.iter().map(|s| q.polar(a, s)).collect()).collect();
    linalg::kernel(k, &rows, span.len()).iter().map(|c| combine(k, span, c)).collect()
}

/// Orthogonal basis of span(`span`) over ℚ, scaled so each value is a
/// squarefree integer. The span must be nondegenerate.
pub fn squarefree_orthogonal_basis(q: &QuadraticSpace, span: &[Vector]) -> Result<(Vec<Vector>, Vec<BigInt>)> {
    let k = &q.field;
    if span.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let (b, d) = q.restrict(span)?.diagonalize()?;
    let mut vecs = Vec::with_capacity(d.len());
    let mut vals = Vec::with_capacity(d.len());
    for (c, a) in linalg::transpose(&b).iter().zip(&d) {
        let a = a.as_rational().ok_or(Error::FieldMismatch)?;
        if a.is_zero() {
            return Err(Error::Internal("degenerate subspace".into()));
        }
        // a·(den/r)² = num·den/r² = s
        let (sq, r) = arith::squarefree_decompose(&(a.numer() * a.denom()))?;
        let v = combine(k, span, c);
        let v = linalg::vec_scale(k, &Elem::Q(BigRational::new(a.denom().clone(), r)), &v);
        debug_assert_eq!(q.eval(&v), Elem::Q(br(&sq)));
        vecs.push(v);
        vals.push(sq);
    }
    Ok((vecs, vals))
}

fn subsets(n: usize, size: usize, must: Option<usize>, out: &mut Vec<Vec<usize>>) {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - left {
            cur.push(i);
            go(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut all);
    out.extend(all.into_iter().filter(|c| must.map_or(true, |m| c.contains(&m))));
}

/// Smallest set of coordinates (at most five) on which the diagonal form is
/// isotropic, optionally forced to contain one index. Five suffices: a form
/// of dimension ≥ 5 is isotropic iff it is indefinite, and then some five of
/// its coefficients are already indefinite.
pub fn isotropic_support(diag: &[BigRational], must: Option<usize>) -> Result<Option<Vec<usize>>> {
    let n = diag.len();
    for size in 2..=n.min(5) {
        let mut cands = Vec::new();
        subsets(n, size, must, &mut cands);
        for c in cands {
            let sub: Vec<BigRational> = c.iter().map(|&i| diag[i].clone()).collect();
            if hm_isotropic(&sub)? {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

/// Over ℚ the decomposition stays diagonal: each hyperbolic plane is cut out
/// of the smallest isotropic subform, and only that support is rediagonalised.
fn witt_decompose_q(q: &QuadraticSpace, budget: &Budget) -> Result<WittDecomposition> {
    let k = &q.field;
    let n = q.dim();
    let units: Vec<Vector> = (0..n).map(|i| linalg::unit_vector(k, n, i)).collect();
    let (mut basis, mut vals) = squarefree_orthogonal_basis(q, &units)?;
    let mut pairs = Vec::new();
    while basis.len() >= 2 {
        let diag: Vec<BigRational> = vals.iter().map(br).collect();
        let Some(sup) = isotropic_support(&diag, None)? else { break };
        let sub: Vec<BigRational> = sup.iter().map(|&i| diag[i].clone()).collect();
        let y = isotropic_vector_q_diag(&sub, budget)?
            .ok_or_else(|| Error::Internal("isotropic subform without a vector".into()))?;
        let sub_basis: Vec<Vector> = sup.iter().map(|&i| basis[i].clone()).collect();
        let y: Vector = y.into_iter().map(Elem::Q).collect();
        let e = combine(k, &sub_basis, &y);
        let f = hyperbolic_partner(q, &e, &sub_basis)?;
        let rest = orthogonal_complement(q, &sub_basis, &[&e, &f]);
        let (nb, nv) = squarefree_orthogonal_basis(q, &rest)?;
        let keep: Vec<usize> = (0..basis.len()).filter(|i| !sup.contains(i)).collect();
        basis = keep.iter().map(|&i| basis[i].clone()).chain(nb).collect();
        vals = keep.iter().map(|&i| vals[i].clone()).chain(nv).collect();
        pairs.push((e, f));
    }
    let kernel = q.restrict(&basis)?;
    Ok(WittDecomposition { witt_index: pairs.len(), pairs, kernel_basis: basis, kernel, kernel_anisotropic: true })
}

/// ∑ cᵢ·basisᵢ.
pub fn combine(k: &Field, basis: &[Vector], c: &[Elem]) -> Vector {
    let n = basis.first().map_or(0, |b| b.len());
    let mut v = vec![k.zero(); n];
    for (b, x) in basis.iter().zip(c) {
        if !k.is_zero(x) {
            v = linalg::vec_add(k, &v, &linalg::vec_scale(k, x, b));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn qd(xs: &[i64]) -> QuadraticSpace {
        QuadraticSpace::diag_i64(&Field::rationals(), xs)
    }

    fn ints(v: &Vector) -> Vec<i64> {
        v.iter().map(|x| x.as_rational().unwrap().to_integer().to_i64().unwrap()).collect()
    }

    #[test]
    fn blockwise_decomposition_over_f4t() {
        // [1,1] ⊥ t[1,1] becomes hyperbolic once F₄ is adjoined
        let f = Field::rational_functions(Field::PrimeField(2), "t");
        let b = QuadraticSpace::binary_blocks(&f, &[(f.one(), f.one())]);
        let q = b.orthogonal_sum(&b.scale(&f.t().unwrap())).unwrap();
        assert_eq!(coordinate_components(&q), vec![vec![0, 1], vec![2, 3]]);
        let e = Field::quad_ext(f.clone(), f.one(), f.one()).unwrap();
        let qe = q.base_change(&e).unwrap();
        let w = witt_decompose(&qe).unwrap();
        assert!(w.is_hyperbolic());
        for (a, c) in &w.pairs {
            assert!(e.is_zero(&qe.eval(a)) && e.is_zero(&qe.eval(c)) && e.is_one(&qe.polar(a, c)));
        }
    }

    #[test]
    fn decisions() {
        assert!(!is_isotropic(&qd(&[1, 1, 1, 1, 1])).unwrap());
        assert!(is_isotropic(&qd(&[1, 1, -2, -2])).unwrap());
        assert!(!is_isotropic(&qd(&[1, 1, -3])).unwrap());
        assert!(!is_isotropic(&qd(&[1, 1, 1, 7])).unwrap());
        // 7 is not a sum of three rational squares
        assert!(!is_isotropic(&qd(&[1, 1, 1, -7])).unwrap());
        assert!(is_isotropic(&qd(&[1, 1, 1, 1, -7])).unwrap());
        let f5 = Field::PrimeField(5);
        assert!(!is_isotropic(&QuadraticSpace::diag_i64(&f5, &[1, 2])).unwrap());
        assert!(is_isotropic(&QuadraticSpace::diag_i64(&f5, &[1, 1])).unwrap());
    }

    #[test]
    fn vectors() {
        assert_eq!(ints(&isotropic_vector(&qd(&[1, 1, -2, -2])).unwrap()), vec![1, 1, 1, 0]);
        assert_eq!(ints(&isotropic_vector(&qd(&[1, 1, -2])).unwrap()), vec![1, 1, 1]);
        assert_eq!(ints(&isotropic_vector(&qd(&[2, 3, -5])).unwrap()), vec![1, 1, 1]);
    }

    #[test]
    fn descent_without_search() {
        let b = Budget { candidates: 0, ..Budget::default() };
        for d in [[1i64, 1, -2], [2, 3, -5], [5, 7, -3], [-1, 13, 17], [3, -7, 11], [1, 1, -10001]] {
            let diag: Vec<BigRational> = d.iter().map(|&x| rat(x, 1)).collect();
            if !hm_isotropic(&diag).unwrap() {
                continue;
            }
            let v = isotropic_vector_q_diag(&diag, &b).unwrap().unwrap();
            let s: BigRational = diag.iter().zip(&v).map(|(a, x)| a * x * x).sum();
            assert!(s.is_zero(), "{d:?}");
        }
        for d in [vec![1i64, 1, 1, -6], vec![2, 3, 5, -30], vec![1, -3, 5, -7, 11], vec![1, 1, 1, 1, -1, -1, -1, -1, 3, -3]] {
            let diag: Vec<BigRational> = d.iter().map(|&x| rat(x, 1)).collect();
            assert!(hm_isotropic(&diag).unwrap());
            let v = isotropic_vector_q_diag(&diag, &b).unwrap().unwrap();
            let s: BigRational = diag.iter().zip(&v).map(|(a, x)| a * x * x).sum();
            assert!(s.is_zero() && v.iter().any(|x| !x.is_zero()), "{d:?}");
        }
    }

    #[test]
    fn witt_examples() {
        let w = witt_decompose(&qd(&[1, -1, 1, -1])).unwrap();
        assert_eq!(w.witt_index, 2);
        assert!(w.is_hyperbolic());
        let w = witt_decompose(&qd(&[1, 1, 1, 1, 1, 1, 7, 7])).unwrap();
        assert_eq!(w.witt_index, 0);
        let k = Field::rationals();
        let q4 = qd(&[1, 1, 1, 7]);
        let q8 = q4.orthogonal_sum(&q4.scale(&k.from_i64(-2))).unwrap();
        let w = witt_decompose(&q8).unwrap();
        assert_eq!(w.witt_index, 4);
        for (e, f) in &w.pairs {
            assert!(k.is_zero(&q8.eval(e)) && k.is_zero(&q8.eval(f)));
            assert!(k.is_one(&q8.polar(e, f)));
        }
    }

    #[test]
    fn laurent_residues() {
        let l = Field::laurent(Field::rationals()).unwrap();
        let t = l.t().unwrap();
        let mut d: Vec<Elem> = [1, 1, 1, 1, 1, 1, 7, 7].iter().map(|&x| l.from_i64(x)).collect();
        d.extend([1, 1, -7, -7].iter().map(|&x| l.mul(&l.from_i64(x), &t)));
        let q12 = QuadraticSpace::diag(&l, &d);
        assert!(!is_isotropic(&q12).unwrap());
        let iso = QuadraticSpace::diag(&l, &[l.one(), l.neg(&l.mul(&t, &t))]);
        let v = isotropic_vector(&iso).unwrap();
        assert!(l.is_zero(&iso.eval(&v)));
    }

    #[test]
    fn char2_bounded() {
        let f2t = Field::rational_functions(Field::PrimeField(2), "t");
        let t = f2t.t().unwrap();
        let b = QuadraticSpace::binary_blocks(&f2t, &[(f2t.one(), f2t.one())]);
        let q = b.orthogonal_sum(&b.scale(&t)).unwrap();
        let e = Field::quad_ext(f2t.clone(), f2t.zero(), t).unwrap();
        let qe = q.base_change(&e).unwrap();
        let w = witt_decompose(&qe).unwrap();
        assert!(w.is_hyperbolic());
    }
}
