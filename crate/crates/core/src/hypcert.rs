//! Norm-group certificates for multipliers of E₇/E₈-type forms, and their verifier.
//!
//! A certificate writes γ = s²·∏ N(x) with each x in an extension E over
//! which q is hyperbolic. Quadratic entries carry E = K(√d) directly;
//! biquadratic entries carry M = K(√d₁,√d₂) and a Witt witness
//! q = ⟨α⟩N_Q + ⟨β⟩π with N_Q split by √d₁ and π split by √d₂.

use serde_json::{json, Value};

use crate::brauer::{self, BrauerClass2, Place};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::invariants;
use crate::isotropy::{self, residue_split, Search};
use crate::linalg::{self, Vector};
use crate::quadform::{parse_scalar, QuadraticSpace};
use crate::similitudes::{e8_decompose, gq_membership};
use crate::splitting;

pub const SCHEMA: &str = "hypcert/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittWitness {
    pub alpha: Elem,
    pub nq: (Elem, Elem),
    pub beta: Elem,
    pub pi: [Elem; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertEntry {
    /// x ∈ K(√d), written x₀ + x₁√d.
    Quadratic { d: Elem, x: (Elem, Elem) },
    /// x ∈ K(√d₁)(√d₂), written (p₀ + p₁√d₁) + (r₀ + r₁√d₁)√d₂.
    Biquadratic { d1: Elem, d2: Elem, x: [Elem; 4], witt: WittWitness },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypCertificate {
    pub field: Field,
    pub gamma: Elem,
    pub square: Elem,
    pub entries: Vec<CertEntry>,
    /// Scale of the quaternion-norm piece when the certificate came through an E₈ split.
    pub lambda: Option<Elem>,
}

/// An element of K(√d) with θ² = d.
fn quad_field(k: &Field, d: &Elem) -> Result<Field> {
    Field::sqrt_ext(k.clone(), d)
}

fn biquad_field(k: &Field, d1: &Elem, d2: &Elem) -> Result<Field> {
    let e1 = quad_field(k, d1)?;
    let d2e = e1.embed_constant(d2);
    Field::sqrt_ext(e1, &d2e)
}

impl CertEntry {
    pub fn norm(&self, k: &Field) -> Result<Elem> {
        match self {
            CertEntry::Quadratic { d, x } => {
                let e = quad_field(k, d)?;
                e.norm(&Elem::quad(x.0.clone(), x.1.clone()))
            }
            CertEntry::Biquadratic { d1, d2, x, .. } => {
                let m = biquad_field(k, d1, d2)?;
                let e1 = quad_field(k, d1)?;
                let y = Elem::quad(Elem::quad(x[0].clone(), x[1].clone()), Elem::quad(x[2].clone(), x[3].clone()));
                e1.norm(&m.norm(&y)?)
            }
        }
    }
}

/// Result of norm extraction from a Pfister form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extraction {
    Square(Elem),
    Quadratic { d: Elem, x: (Elem, Elem) },
}

/// Reduces x₀ + x₁√d to a squarefree radicand (over ℚ and the Laurent view's constants).
fn normalize_radicand(k: &Field, d: &Elem, x: (Elem, Elem)) -> Result<(Elem, (Elem, Elem))> {
    let rep = k.square_class_rep(d)?;
    let r = k
        .sqrt(&k.div(d, &rep)?)?
        .ok_or_else(|| Error::Internal("radicand and its class differ by a non-square".into()))?;
    Ok((rep, (x.0, k.mul(&x.1, &r))))
}

/// Writes γ ∈ G(π) as a square or as a norm from K(√d) with π_{K(√d)} hyperbolic.
/// `one` is a vector with π(one) = 1.
pub fn pfister_norm_extraction(pi: &QuadraticSpace, one: &Vector, gamma: &Elem) -> Result<Extraction> {
    let k = &pi.field;
    if !k.is_one(&pi.eval(one)) {
        return Err(Error::Precondition("the given vector does not have value 1".into()));
    }
    if k.characteristic() == 2 {
        return Err(Error::Unsupported("norm extraction in characteristic 2".into()));
    }
    if let Some(s) = k.sqrt(gamma)? {
        return Ok(Extraction::Square(s));
    }
    if !gq_membership(pi, gamma)? {
        return Err(Error::Precondition("multiplier is not in G(pi)".into()));
    }
    let v = represent(pi, gamma)?;
    let a = k.div(&pi.polar(one, &v), &k.from_i64(2))?;
    let vp = linalg::vec_sub(k, &v, &linalg::vec_scale(k, &a, one));
    let c = pi.eval(&vp);
    if k.is_zero(&c) {
        return Err(Error::Internal("binary restriction is degenerate".into()));
    }
    // span(one, v) ≅ ⟨1, c⟩ = N of K(√−c), and v = a·one + v′ ↔ a + √−c
    let (d, x) = normalize_radicand(k, &k.neg(&c), (a, k.one()))?;
    let sp = splitting::hyperbolic_over_sqrt(pi, &d)?;
    if !sp.hyperbolic || !splitting::verify_splitting(pi, &sp)? {
        return Err(Error::Internal("pfister form is not split by the extracted extension".into()));
    }
    Ok(Extraction::Quadratic { d, x })
}

/// A vector v with q(v) = γ.
fn represent(q: &QuadraticSpace, gamma: &Elem) -> Result<Vector> {
    let k = &q.field;
    let n = q.dim();
    let ext = q.orthogonal_sum(&QuadraticSpace::diag(k, &[k.neg(gamma)]))?;
    if let Search::Found(y) = isotropy::search(&ext, &isotropy::Budget::default())? {
        if !k.is_zero(&y[n]) {
            return y[..n].iter().map(|c| k.div(c, &y[n])).collect();
        }
    }
    // q itself is isotropic: use a hyperbolic pair, q(e + γf) = γ
    let wd = isotropy::witt_decompose(q)?;
    let (e, f) = wd.pairs.first().ok_or_else(|| Error::Budget("representation search".into()))?;
    let fe = k.inv(&q.polar(e, f))?;
    Ok(linalg::vec_add(k, e, &linalg::vec_scale(k, &k.mul(gamma, &fe), f)))
}

pub struct CombinedNorm {
    /// y ∈ M, or None in the square branch.
    pub y: Option<[Elem; 4]>,
    /// s with α = s²·N_{M/K}(y) (or α = s² in the square branch).
    pub square: Elem,
}

/// For N(x₁) = N(x₂) = α with x₁ ∈ K(√d₁), x₂ ∈ K(√d₂) linearly disjoint:
/// y = 1 + x₁⁻¹x₂ satisfies α·N_{M/K}(y) = (T₁ + T₂)².
pub fn combine_norms(k: &Field, d1: &Elem, x1: &(Elem, Elem), d2: &Elem, x2: &(Elem, Elem)) -> Result<CombinedNorm> {
    for c in [d1.clone(), d2.clone(), k.mul(d1, d2)] {
        if k.is_square(&c)?.0 {
            return Err(Error::Precondition("extensions are not linearly disjoint".into()));
        }
    }
    let e1 = quad_field(k, d1)?;
    let e2 = quad_field(k, d2)?;
    let x1e = Elem::quad(x1.0.clone(), x1.1.clone());
    let x2e = Elem::quad(x2.0.clone(), x2.1.clone());
    let alpha = e1.norm(&x1e)?;
    if alpha != e2.norm(&x2e)? {
        return Err(Error::Precondition("norms differ".into()));
    }
    if k.is_zero(&x1.1) && k.is_zero(&x2.1) && k.add(&x1.0, &x2.0) == k.zero() {
        return Ok(CombinedNorm { y: None, square: x1.0.clone() });
    }
    let m = biquad_field(k, d1, d2)?;
    let x1m = Elem::quad(x1e.clone(), e1.zero());
    let x2m = Elem::quad(Elem::quad(x2.0.clone(), k.zero()), Elem::quad(x2.1.clone(), k.zero()));
    let y = m.add(&m.one(), &m.mul(&m.inv(&x1m)?, &x2m));
    let ny = e1.norm(&m.norm(&y)?)?;
    let tsum = k.add(&e1.trace(&x1e)?, &e2.trace(&x2e)?);
    if k.mul(&alpha, &ny) != k.square(&tsum) {
        return Err(Error::Internal("combined norm identity fails".into()));
    }
    let (p, r) = y.quad_parts().ok_or_else(|| Error::Internal("biquadratic element shape".into()))?;
    let (p0, p1) = p.quad_parts().ok_or_else(|| Error::Internal("biquadratic element shape".into()))?;
    let (r0, r1) = r.quad_parts().ok_or_else(|| Error::Internal("biquadratic element shape".into()))?;
    Ok(CombinedNorm { y: Some([p0.clone(), p1.clone(), r0.clone(), r1.clone()]), square: k.div(&tsum, &ny)? })
}

#[derive(Clone, Debug)]
pub struct E7Witt {
    pub alpha: Elem,
    pub nq: (Elem, Elem),
    pub beta: Elem,
    pub pi: [Elem; 3],
}

impl E7Witt {
    pub fn nq_form(&self, k: &Field) -> Result<QuadraticSpace> {
        QuadraticSpace::pfister(k, &[self.nq.0.clone(), self.nq.1.clone()])
    }

    pub fn pi_form(&self, k: &Field) -> Result<QuadraticSpace> {
        QuadraticSpace::pfister(k, &self.pi)
    }

    pub fn to_json(&self, k: &Field) -> Value {
        json!({
            "alpha": k.format(&self.alpha),
            "NQ": [k.format(&self.nq.0), k.format(&self.nq.1)],
            "beta": k.format(&self.beta),
            "pi": self.pi.iter().map(|x| k.format(x)).collect::<Vec<_>>(),
        })
    }
}

/// Symbol pair (a, b) over ℚ with (a, b) in the given class, searched over a
/// small alphabet of ±1, ±2, ± the odd places of the class and small primes.
pub fn quaternion_pair_for(class: &BrauerClass2) -> Result<(Elem, Elem)> {
    let k = Field::rationals();
    if class.is_trivial() {
        return Ok((k.one(), k.one()));
    }
    let BrauerClass2::Places(places) = class else {
        return Err(Error::Unsupported("symbol lifting is implemented over Q".into()));
    };
    let mut primes: Vec<i64> = vec![2];
    for p in places {
        if let Place::Prime(p) = p {
            if !primes.contains(&(*p as i64)) {
                primes.push(*p as i64);
            }
        }
    }
    for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if !primes.contains(&p) {
            primes.push(p);
        }
    }
    let mut alphabet = vec![-1i64];
    for &p in &primes {
        alphabet.push(p);
        alphabet.push(-p);
    }
    // widen by pairwise products of the alphabet when single letters fail
    let mut wide = alphabet.clone();
    for (i, &a) in alphabet.iter().enumerate() {
        for &b in &alphabet[i + 1..] {
            let c = a * b;
            if c != 1 && !wide.contains(&c) {
                wide.push(c);
            }
        }
    }
    for letters in [&alphabet, &wide] {
        for (i, &a) in letters.iter().enumerate() {
            for &b in &letters[i..] {
                let (a, b) = (k.from_i64(a), k.from_i64(b));
                if &brauer::quaternion_class(&k, &a, &b)? == class {
                    return Ok((a, b));
                }
            }
        }
    }
    Err(Error::Budget("no symbol pair in the search alphabet".into()))
}

/// Pfister generators of an 8-dimensional Pfister form over ℚ: anisotropic
/// 3-fold Pfister forms over ℚ are positive definite, hence ⟨⟨−1,−1,−1⟩⟩.
fn pfister_generators_q(pi: &QuadraticSpace, hyperbolic: bool) -> Result<[Elem; 3]> {
    let k = &pi.field;
    if hyperbolic {
        return Ok([k.one(), k.one(), k.one()]);
    }
    let diag = pi.diagonal_form()?;
    if diag.iter().all(|x| k.rational_sign(x) == Some(1)) {
        return Ok([k.from_i64(-1), k.from_i64(-1), k.from_i64(-1)]);
    }
    Err(Error::Internal("anisotropic Pfister form over Q is not definite".into()))
}

fn witt_identity_holds(q: &QuadraticSpace, w: &E7Witt) -> Result<bool> {
    let k = &q.field;
    let f = QuadraticSpace::sum_all(&[
        q.clone(),
        w.nq_form(k)?.scale(&k.neg(&w.alpha)),
        w.pi_form(k)?.scale(&k.neg(&w.beta)),
    ])?;
    let wd = isotropy::witt_decompose(&f)?;
    if !wd.is_hyperbolic() && !wd.kernel_anisotropic {
        return Err(Error::Budget("Witt decomposition inconclusive".into()));
    }
    Ok(wd.is_hyperbolic())
}

/// q = ⟨α⟩N_Q + ⟨β⟩π in the Witt group, for q of dimension 8 over ℚ with
/// trivial discriminant.
pub fn e7_witt_decompose(q: &QuadraticSpace) -> Result<E7Witt> {
    let k = &q.field;
    if *k != Field::Rationals {
        return Err(Error::Unsupported("E7 Witt decomposition is implemented over Q".into()));
    }
    if q.dim() != 8 {
        return Err(Error::Precondition(format!("expected dimension 8, found {}", q.dim())));
    }
    q.require_nondegenerate()?;
    if !invariants::discriminant(q)?.is_trivial(k)? {
        return Err(Error::Precondition("discriminant is not trivial".into()));
    }
    let (class, index) = invariants::clifford_invariant(q)?;
    if index > 2 {
        return Err(Error::Precondition("Clifford index exceeds 2".into()));
    }
    if isotropy::witt_decompose(q)?.is_hyperbolic() {
        let one = k.one();
        return Ok(E7Witt { alpha: one.clone(), nq: (one.clone(), one.clone()), beta: one.clone(), pi: [one.clone(), one.clone(), one] });
    }
    let alpha = q.diagonal_form()?[0].clone();
    let nq = quaternion_pair_for(&class)?;
    let nq_form = QuadraticSpace::pfister(k, &[nq.0.clone(), nq.1.clone()])?;
    let rest = q.orthogonal_sum(&nq_form.scale(&k.neg(&alpha)))?;
    let wd = isotropy::witt_decompose(&rest)?;
    let (beta, pi) = match wd.kernel.dim() {
        0 => (k.one(), [k.one(), k.one(), k.one()]),
        8 => {
            let pm = invariants::recognize_pfister_multiple(&wd.kernel)?;
            (pm.beta.clone(), pfister_generators_q(&pm.pi, pm.hyperbolic)?)
        }
        n => return Err(Error::Internal(format!("Witt reduction left dimension {n}"))),
    };
    let w = E7Witt { alpha, nq, beta, pi };
    if !witt_identity_holds(q, &w)? {
        return Err(Error::Internal("Witt identity fails".into()));
    }
    Ok(w)
}

fn extract_pair(k: &Field, form: &QuadraticSpace, gamma: &Elem) -> Result<Extraction> {
    pfister_norm_extraction(form, &linalg::unit_vector(k, form.dim(), 0), gamma)
}

/// Certificate for γ ∈ G(q), q of E₇ type (dimension 8, over ℚ) or E₈ type
/// (dimension 12, over the Laurent view of ℚ).
pub fn hyp_certificate(q: &QuadraticSpace, gamma: &Elem) -> Result<HypCertificate> {
    let k = &q.field;
    if k.characteristic() == 2 {
        return Err(Error::Unsupported("certificates in characteristic 2".into()));
    }
    if k.is_zero(gamma) {
        return Err(Error::Precondition("multiplier must be nonzero".into()));
    }
    if !gq_membership(q, gamma)? {
        return Err(Error::Precondition("multiplier is not in G(q)".into()));
    }
    if let Some(s) = k.sqrt(gamma)? {
        return Ok(HypCertificate { field: k.clone(), gamma: gamma.clone(), square: s, entries: vec![], lambda: None });
    }
    match q.dim() {
        8 => certificate_dim8(q, gamma),
        12 => certificate_dim12(q, gamma),
        n => Err(Error::Precondition(format!("certificates need dimension 8 or 12, found {n}"))),
    }
}

fn certificate_dim8(q: &QuadraticSpace, gamma: &Elem) -> Result<HypCertificate> {
    let k = &q.field;
    let w = e7_witt_decompose(q)?;
    let nq = w.nq_form(k)?;
    let pi = w.pi_form(k)?;
    if !gq_membership(&nq, gamma)? || !gq_membership(&pi, gamma)? {
        return Err(Error::Internal("multiplier is not shared by both Witt pieces".into()));
    }
    let done = |square: Elem, entries: Vec<CertEntry>| HypCertificate {
        field: k.clone(),
        gamma: gamma.clone(),
        square,
        entries,
        lambda: None,
    };
    let e1 = extract_pair(k, &nq, gamma)?;
    let e2 = extract_pair(k, &pi, gamma)?;
    let (d1, x1, d2, x2) = match (e1, e2) {
        (Extraction::Square(s), _) | (_, Extraction::Square(s)) => return Ok(done(s, vec![])),
        (Extraction::Quadratic { d: d1, x: x1 }, Extraction::Quadratic { d: d2, x: x2 }) => (d1, x1, d2, x2),
    };
    if k.same_square_class(&d1, &d2)? {
        return Ok(done(k.one(), vec![CertEntry::Quadratic { d: d1, x: x1 }]));
    }
    let c = combine_norms(k, &d1, &x1, &d2, &x2)?;
    match c.y {
        None => Ok(done(c.square, vec![])),
        Some(y) => Ok(done(
            c.square,
            vec![CertEntry::Biquadratic {
                d1,
                d2,
                x: y,
                witt: WittWitness { alpha: w.alpha, nq: w.nq, beta: w.beta, pi: w.pi },
            }],
        )),
    }
}

fn certificate_dim12(q: &QuadraticSpace, gamma: &Elem) -> Result<HypCertificate> {
    let k = &q.field;
    let split = e8_decompose(q, gamma, None)?;
    let rs = residue_split(&split.q2)?;
    if !rs.monomial || (!rs.first.is_empty() && !rs.second.is_empty()) {
        return Err(Error::Unsupported("E7 piece mixes residue classes".into()));
    }
    let r = if rs.first.is_empty() { rs.second_form() } else { rs.first_form() };
    let gc = k.as_constant(gamma).ok_or_else(|| Error::Unsupported("non-constant multiplier".into()))?;
    let inner = certificate_dim8(&r, &gc)?;
    let mut entries = Vec::new();
    for e in inner.entries {
        match e {
            CertEntry::Quadratic { d, x } => {
                let d = k.embed_constant(&d);
                let sp = splitting::hyperbolic_over_sqrt(q, &d)?;
                if !sp.hyperbolic || !splitting::verify_splitting(q, &sp)? {
                    return Err(Error::Internal("lifted extension does not split the E8 form".into()));
                }
                entries.push(CertEntry::Quadratic { d, x: (k.embed_constant(&x.0), k.embed_constant(&x.1)) });
            }
            CertEntry::Biquadratic { .. } => {
                return Err(Error::Unsupported("biquadratic entries do not lift through the E8 split".into()));
            }
        }
    }
    Ok(HypCertificate {
        field: k.clone(),
        gamma: gamma.clone(),
        square: k.embed_constant(&inner.square),
        entries,
        lambda: Some(split.lambda),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub reasons: Vec<String>,
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        json!({"accepted": self.accepted, "reasons": self.reasons})
    }
}

/// Re-checks every obligation of a certificate from scratch; the first failure is reported.
pub fn verify_certificate(q: &QuadraticSpace, gamma: &Elem, cert: &HypCertificate, quadratic_only: bool) -> Verdict {
    match verify_inner(q, gamma, cert, quadratic_only) {
        Ok(None) => Verdict { accepted: true, reasons: vec![] },
        Ok(Some(r)) => Verdict { accepted: false, reasons: vec![r] },
        Err(e) => Verdict { accepted: false, reasons: vec![format!("verification error: {e}")] },
    }
}

fn verify_inner(q: &QuadraticSpace, gamma: &Elem, cert: &HypCertificate, quadratic_only: bool) -> Result<Option<String>> {
    let k = &q.field;
    if cert.field != *k {
        return Ok(Some("field mismatch".into()));
    }
    if cert.gamma != *gamma {
        return Ok(Some("target mismatch".into()));
    }
    let mut prod = k.square(&cert.square);
    for e in &cert.entries {
        prod = k.mul(&prod, &e.norm(k)?);
    }
    if prod != *gamma {
        return Ok(Some("norm product mismatch".into()));
    }
    for (i, e) in cert.entries.iter().enumerate() {
        match e {
            CertEntry::Quadratic { d, .. } => {
                if k.is_square(d)?.0 {
                    return Ok(Some(format!("entry {i}: radicand is a square")));
                }
                let sp = splitting::hyperbolic_over_sqrt(q, d)?;
                if !sp.hyperbolic || !splitting::verify_splitting(q, &sp)? {
                    return Ok(Some(format!("entry {i}: hyperbolicity obligation")));
                }
            }
            CertEntry::Biquadratic { d1, d2, witt, .. } => {
                if quadratic_only {
                    return Ok(Some(format!("entry {i}: biquadratic entry in quadratic-only mode")));
                }
                for c in [d1.clone(), d2.clone(), k.mul(d1, d2)] {
                    if k.is_square(&c)?.0 {
                        return Ok(Some(format!("entry {i}: extension obligation")));
                    }
                }
                let w = E7Witt { alpha: witt.alpha.clone(), nq: witt.nq.clone(), beta: witt.beta.clone(), pi: witt.pi.clone() };
                if !witt_identity_holds(q, &w)? {
                    return Ok(Some(format!("entry {i}: Witt identity obligation")));
                }
                if !splitting::hyperbolic_over_sqrt(&w.nq_form(k)?, d1)?.hyperbolic {
                    return Ok(Some(format!("entry {i}: N_Q hyperbolicity obligation")));
                }
                if !splitting::hyperbolic_over_sqrt(&w.pi_form(k)?, d2)?.hyperbolic {
                    return Ok(Some(format!("entry {i}: pi hyperbolicity obligation")));
                }
            }
        }
    }
    Ok(None)
}

impl HypCertificate {
    pub fn is_quadratic_only(&self) -> bool {
        self.entries.iter().all(|e| matches!(e, CertEntry::Quadratic { .. }))
    }

    pub fn to_json(&self) -> Value {
        let k = &self.field;
        let f = |x: &Elem| k.format(x);
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| match e {
                CertEntry::Quadratic { d, x } => json!({"kind": "quadratic", "d": f(d), "x": [f(&x.0), f(&x.1)]}),
                CertEntry::Biquadratic { d1, d2, x, witt } => json!({
                    "kind": "biquadratic",
                    "d1": f(d1),
                    "d2": f(d2),
                    "x": x.iter().map(f).collect::<Vec<_>>(),
                    "witt": {
                        "alpha": f(&witt.alpha),
                        "NQ": [f(&witt.nq.0), f(&witt.nq.1)],
                        "beta": f(&witt.beta),
                        "pi": witt.pi.iter().map(f).collect::<Vec<_>>(),
                    },
                }),
            })
            .collect();
        let mut v = json!({
            "schema": SCHEMA,
            "field": k.descriptor_json(),
            "gamma": f(&self.gamma),
            "square": f(&self.square),
            "entries": entries,
        });
        if let Some(l) = &self.lambda {
            v["lambda"] = json!(f(l));
        }
        v
    }

    pub fn from_json(default_field: &Field, v: &Value) -> Result<HypCertificate> {
        if let Some(s) = v.get("schema").and_then(Value::as_str) {
            if s != SCHEMA {
                return Err(Error::Parse(format!("unknown certificate schema {s}")));
            }
        }
        let k = match v.get("field") {
            Some(f) => Field::from_descriptor_json(f)?,
            None => default_field.clone(),
        };
        let get = |obj: &Value, key: &str| -> Result<Elem> {
            parse_scalar(&k, obj.get(key).ok_or_else(|| Error::Parse(format!("missing \"{key}\"")))?)
        };
        let list = |obj: &Value, key: &str, n: usize| -> Result<Vec<Elem>> {
            let a = obj
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing array \"{key}\"")))?;
            if a.len() != n {
                return Err(Error::Parse(format!("\"{key}\" needs {n} entries")));
            }
            a.iter().map(|x| parse_scalar(&k, x)).collect()
        };
        let mut entries = Vec::new();
        for e in v.get("entries").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"entries\"".into()))? {
            match e.get("kind").and_then(Value::as_str) {
                Some("quadratic") => {
                    let x = list(e, "x", 2)?;
                    entries.push(CertEntry::Quadratic { d: get(e, "d")?, x: (x[0].clone(), x[1].clone()) });
                }
                Some("biquadratic") => {
                    let x = list(e, "x", 4)?;
                    let w = e.get("witt").ok_or_else(|| Error::Parse("missing \"witt\"".into()))?;
                    let nq = list(w, "NQ", 2)?;
                    let pi = list(w, "pi", 3)?;
                    entries.push(CertEntry::Biquadratic {
                        d1: get(e, "d1")?,
                        d2: get(e, "d2")?,
                        x: [x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()],
                        witt: WittWitness {
                            alpha: get(w, "alpha")?,
                            nq: (nq[0].clone(), nq[1].clone()),
                            beta: get(w, "beta")?,
                            pi: [pi[0].clone(), pi[1].clone(), pi[2].clone()],
                        },
                    });
                }
                _ => return Err(Error::Parse("entry kind must be quadratic or biquadratic".into())),
            }
        }
        let lambda = match v.get("lambda") {
            Some(l) => Some(parse_scalar(&k, l)?),
            None => None,
        };
        Ok(HypCertificate { gamma: get(v, "gamma")?, square: get(v, "square")?, entries, lambda, field: k })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q8(k: &Field) -> QuadraticSpace {
        QuadraticSpace::diag_i64(k, &[1, 1, 1, 7, 1, 1, 1, 7])
    }

    #[test]
    fn extraction() {
        let k = Field::rationals();
        let pi = QuadraticSpace::pfister(&k, &[k.from_i64(-1), k.from_i64(-1), k.from_i64(-7)]).unwrap();
        let one = linalg::unit_vector(&k, 8, 0);
        match pfister_norm_extraction(&pi, &one, &k.from_i64(2)).unwrap() {
            Extraction::Quadratic { d, x } => {
                assert_eq!(d, k.from_i64(-1));
                assert_eq!(quad_field(&k, &d).unwrap().norm(&Elem::quad(x.0, x.1)).unwrap(), k.from_i64(2));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(pfister_norm_extraction(&pi, &one, &k.from_i64(4)).unwrap(), Extraction::Square(k.from_i64(2)));
        let nq = QuadraticSpace::pfister(&k, &[k.from_i64(-1), k.from_i64(7)]).unwrap();
        match pfister_norm_extraction(&nq, &linalg::unit_vector(&k, 4, 0), &k.from_i64(8)).unwrap() {
            Extraction::Quadratic { d, x } => {
                assert_eq!(quad_field(&k, &d).unwrap().norm(&Elem::quad(x.0, x.1)).unwrap(), k.from_i64(8));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn combined_norms() {
        let k = Field::rationals();
        let c = combine_norms(&k, &k.from_i64(-1), &(k.one(), k.one()), &k.from_i64(2), &(k.from_i64(2), k.one())).unwrap();
        let y = c.y.unwrap();
        let entry = CertEntry::Biquadratic {
            d1: k.from_i64(-1),
            d2: k.from_i64(2),
            x: y,
            witt: WittWitness { alpha: k.one(), nq: (k.one(), k.one()), beta: k.one(), pi: [k.one(), k.one(), k.one()] },
        };
        assert_eq!(entry.norm(&k).unwrap(), k.from_i64(18));
        assert_eq!(c.square, k.from_ratio(1, 3));
        let c = combine_norms(&k, &k.from_i64(-1), &(k.from_i64(3), k.zero()), &k.from_i64(2), &(k.from_i64(-3), k.zero())).unwrap();
        assert!(c.y.is_none());
        assert!(combine_norms(&k, &k.from_i64(-1), &(k.one(), k.one()), &k.from_i64(-1), &(k.one(), k.one())).is_err());
    }

    #[test]
    fn e7_pieces() {
        let k = Field::rationals();
        let w = e7_witt_decompose(&q8(&k)).unwrap();
        assert_eq!(brauer::quaternion_class(&k, &w.nq.0, &w.nq.1).unwrap(), invariants::clifford_invariant(&q8(&k)).unwrap().0);
        let p = QuadraticSpace::pfister(&k, &[k.from_i64(-1), k.from_i64(-1), k.from_i64(-7)]).unwrap();
        let w = e7_witt_decompose(&p).unwrap();
        assert!(brauer::quaternion_is_split(&k, &w.nq.0, &w.nq.1).unwrap());
        let w = e7_witt_decompose(&QuadraticSpace::hyperbolic(&k, 4)).unwrap();
        assert!(k.is_one(&w.alpha) && k.is_one(&w.beta));
    }

    #[test]
    fn certificates() {
        let k = Field::rationals();
        let q = q8(&k);
        let c = hyp_certificate(&q, &k.from_i64(2)).unwrap();
        assert!(verify_certificate(&q, &k.from_i64(2), &c, true).accepted);
        assert_eq!(c.entries.len(), 1);
        let c9 = hyp_certificate(&q, &k.from_i64(9)).unwrap();
        assert!(c9.entries.is_empty());
        assert_eq!(c9.square, k.from_i64(3));
        let back = HypCertificate::from_json(&k, &c.to_json()).unwrap();
        assert_eq!(back, c);
        // tampering
        let mut bad = c.clone();
        if let CertEntry::Quadratic { x, .. } = &mut bad.entries[0] {
            x.0 = k.add(&x.0, &k.one());
        }
        assert_eq!(verify_certificate(&q, &k.from_i64(2), &bad, false).reasons, vec!["norm product mismatch".to_string()]);
        let mut bad = c.clone();
        bad.entries[0] = CertEntry::Quadratic { d: k.from_i64(2), x: (k.from_i64(2), k.one()) };
        bad.square = k.one();
        let v = verify_certificate(&q, &k.from_i64(2), &bad, false);
        assert!(!v.accepted && v.reasons[0].contains("hyperbolicity obligation"), "{v:?}");
    }

    #[test]
    fn certificate_dim12() {
        let l = Field::laurent(Field::rationals()).unwrap();
        let t = l.t().unwrap();
        let q12 = q8(&l).orthogonal_sum(&QuadraticSpace::diag_i64(&l, &[1, 1, -7, -7]).scale(&t)).unwrap();
        let c = hyp_certificate(&q12, &l.from_i64(2)).unwrap();
        assert!(verify_certificate(&q12, &l.from_i64(2), &c, true).accepted);
        assert!(c.lambda.is_some());
    }
}
