//! Quaternion algebras, skew-hermitian forms over them, the isometries
//! τ_{v,r} with their spinor norms, and the transfer between vectors of W
//! and isotropic vectors over quadratic extensions.
//!
//! Convention: vectors are right D-modules and h(u,v) = ∑ conj(uᵢ)·Hᵢⱼ·vⱼ,
//! so h(uλ, vμ) = λ̄·h(u,v)·μ.

use serde_json::{json, Value};

use crate::brauer;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::hypcert;
use crate::invariants;
use crate::isotropy;
use crate::quadform::{parse_scalar, QuadraticSpace};
use crate::splitting;

/// x₀ + x₁i + x₂j + x₃ij.
pub type Quat = [Elem; 4];
/// A vector in Dⁿ.
pub type HVec = Vec<Quat>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    pub field: Field,
    pub a: Elem,
    pub b: Elem,
}

impl QuaternionAlgebra {
    pub fn new(field: Field, a: Elem, b: Elem) -> Result<QuaternionAlgebra> {
        if field.characteristic() == 2 {
            return Err(Error::Unsupported("quaternion algebras in characteristic 2".into()));
        }
        if field.is_zero(&a) || field.is_zero(&b) {
            return Err(Error::Precondition("quaternion parameters must be nonzero".into()));
        }
        Ok(QuaternionAlgebra { field, a, b })
    }

    pub fn from_i64(a: i64, b: i64) -> QuaternionAlgebra {
        let k = Field::rationals();
        QuaternionAlgebra { a: k.from_i64(a), b: k.from_i64(b), field: k }
    }

    pub fn zero(&self) -> Quat {
        let z = self.field.zero();
        [z.clone(), z.clone(), z.clone(), z]
    }

    pub fn scalar(&self, c: Elem) -> Quat {
        let mut x = self.zero();
        x[0] = c;
        x
    }

    pub fn one(&self) -> Quat {
        self.scalar(self.field.one())
    }

    pub fn basis(&self, idx: usize) -> Quat {
        let mut x = self.zero();
        x[idx] = self.field.one();
        x
    }

    pub fn from_ints(&self, c: [i64; 4]) -> Quat {
        c.map(|x| self.field.from_i64(x))
    }

    pub fn is_zero(&self, x: &Quat) -> bool {
        x.iter().all(|c| self.field.is_zero(c))
    }

    pub fn is_pure(&self, x: &Quat) -> bool {
        self.field.is_zero(&x[0])
    }

    pub fn add(&self, x: &Quat, y: &Quat) -> Quat {
        let k = &self.field;
        [k.add(&x[0], &y[0]), k.add(&x[1], &y[1]), k.add(&x[2], &y[2]), k.add(&x[3], &y[3])]
    }

    pub fn neg(&self, x: &Quat) -> Quat {
        let k = &self.field;
        [k.neg(&x[0]), k.neg(&x[1]), k.neg(&x[2]), k.neg(&x[3])]
    }

    pub fn sub(&self, x: &Quat, y: &Quat) -> Quat {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, c: &Elem, x: &Quat) -> Quat {
        let k = &self.field;
        [k.mul(c, &x[0]), k.mul(c, &x[1]), k.mul(c, &x[2]), k.mul(c, &x[3])]
    }

    pub fn mul(&self, x: &Quat, y: &Quat) -> Quat {
        let k = &self.field;
        let (a, b) = (&self.a, &self.b);
        let ab = k.mul(a, b);
        let m = |p: &Elem, q: &Elem| k.mul(p, q);
        // i² = a, j² = b, k² = −ab, ij = k, ji = −k, ik = a·j, ki = −a·j, jk = −b·i, kj = b·i
        let c0 = k.sum(&[
            m(&x[0], &y[0]),
            k.mul(a, &m(&x[1], &y[1])),
            k.mul(b, &m(&x[2], &y[2])),
            k.neg(&k.mul(&ab, &m(&x[3], &y[3]))),
        ]);
        let c1 = k.sum(&[
            m(&x[0], &y[1]),
            m(&x[1], &y[0]),
            k.neg(&k.mul(b, &m(&x[2], &y[3]))),
            k.mul(b, &m(&x[3], &y[2])),
        ]);
        let c2 = k.sum(&[
            m(&x[0], &y[2]),
            m(&x[2], &y[0]),
            k.mul(a, &m(&x[1], &y[3])),
            k.neg(&k.mul(a, &m(&x[3], &y[1]))),
        ]);
        let c3 = k.sum(&[m(&x[0], &y[3]), m(&x[3], &y[0]), m(&x[1], &y[2]), k.neg(&m(&x[2], &y[1]))]);
        [c0, c1, c2, c3]
    }

    pub fn conj(&self, x: &Quat) -> Quat {
        let k = &self.field;
        [x[0].clone(), k.neg(&x[1]), k.neg(&x[2]), k.neg(&x[3])]
    }

    /// x·x̄ = x₀² − a x₁² − b x₂² + ab x₃².
    pub fn nrd(&self, x: &Quat) -> Elem {
        self.mul(x, &self.conj(x))[0].clone()
    }

    pub fn trd(&self, x: &Quat) -> Elem {
        self.field.add(&x[0], &x[0])
    }

    pub fn inv(&self, x: &Quat) -> Result<Quat> {
        let n = self.nrd(x);
        if self.field.is_zero(&n) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&self.field.inv(&n)?, &self.conj(x)))
    }

    /// As an element of K when the pure part vanishes.
    pub fn as_scalar(&self, x: &Quat) -> Option<Elem> {
        x[1..].iter().all(|c| self.field.is_zero(c)).then(|| x[0].clone())
    }

    pub fn is_split(&self) -> Result<bool> {
        brauer::quaternion_is_split(&self.field, &self.a, &self.b)
    }

    pub fn class(&self) -> Result<brauer::BrauerClass2> {
        brauer::quaternion_class(&self.field, &self.a, &self.b)
    }

    /// ⟨1, −a, −b, ab⟩.
    pub fn norm_form(&self) -> QuadraticSpace {
        let k = &self.field;
        QuadraticSpace::diag(k, &[k.one(), k.neg(&self.a), k.neg(&self.b), k.mul(&self.a, &self.b)])
    }

    pub fn base_change(&self, e: &Field) -> Result<QuaternionAlgebra> {
        QuaternionAlgebra::new(e.clone(), e.embed_from(&self.field, &self.a)?, e.embed_from(&self.field, &self.b)?)
    }

    pub fn embed(&self, target: &QuaternionAlgebra, x: &Quat) -> Result<Quat> {
        let e = &target.field;
        Ok([
            e.embed_from(&self.field, &x[0])?,
            e.embed_from(&self.field, &x[1])?,
            e.embed_from(&self.field, &x[2])?,
            e.embed_from(&self.field, &x[3])?,
        ])
    }

    pub fn format(&self, x: &Quat) -> Value {
        json!(x.iter().map(|c| self.field.format(c)).collect::<Vec<_>>())
    }

    pub fn parse(&self, v: &Value) -> Result<Quat> {
        let a = v.as_array().ok_or_else(|| Error::Parse("quaternion must be a 4-element array".into()))?;
        if a.len() != 4 {
            return Err(Error::Parse("quaternion must be a 4-element array".into()));
        }
        Ok([
            parse_scalar(&self.field, &a[0])?,
            parse_scalar(&self.field, &a[1])?,
            parse_scalar(&self.field, &a[2])?,
            parse_scalar(&self.field, &a[3])?,
        ])
    }
}

#[derive(Clone, Debug)]
pub struct SkewHermitianSpace {
    pub d: QuaternionAlgebra,
    pub h: Vec<Vec<Quat>>,
}

impl SkewHermitianSpace {
    pub fn new(d: QuaternionAlgebra, h: Vec<Vec<Quat>>) -> Result<SkewHermitianSpace> {
        let n = h.len();
        for (i, row) in h.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for j in 0..n {
                if h[j][i] != d.neg(&d.conj(&h[i][j])) {
                    return Err(Error::Precondition(format!("H is not skew-hermitian at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(SkewHermitianSpace { d, h })
    }

    pub fn diagonal(d: QuaternionAlgebra, entries: &[Quat]) -> Result<SkewHermitianSpace> {
        let n = entries.len();
        let mut h = vec![vec![d.zero(); n]; n];
        for (i, e) in entries.iter().enumerate() {
            h[i][i] = e.clone();
        }
        SkewHermitianSpace::new(d, h)
    }

    pub fn rank(&self) -> usize {
        self.h.len()
    }

    pub fn unit(&self, i: usize) -> HVec {
        let mut v = vec![self.d.zero(); self.rank()];
        v[i] = self.d.one();
        v
    }

    pub fn eval(&self, u: &HVec, v: &HVec) -> Result<Quat> {
        let n = self.rank();
        if u.len() != n || v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: u.len().min(v.len()) });
        }
        let d = &self.d;
        let mut acc = d.zero();
        for i in 0..n {
            if d.is_zero(&u[i]) {
                continue;
            }
            let cu = d.conj(&u[i]);
            for j in 0..n {
                if d.is_zero(&v[j]) || d.is_zero(&self.h[i][j]) {
                    continue;
                }
                acc = d.add(&acc, &d.mul(&d.mul(&cu, &self.h[i][j]), &v[j]));
            }
        }
        Ok(acc)
    }

    /// h(v,u) = −conj(h(u,v)) and h(v,v) pure, for the given vectors.
    pub fn check_axiom(&self, u: &HVec, v: &HVec) -> Result<bool> {
        let d = &self.d;
        let huv = self.eval(u, v)?;
        let hvu = self.eval(v, u)?;
        Ok(hvu == d.neg(&d.conj(&huv)) && d.is_pure(&self.eval(v, v)?))
    }

    pub fn vec_add(&self, u: &HVec, v: &HVec) -> HVec {
        u.iter().zip(v).map(|(x, y)| self.d.add(x, y)).collect()
    }

    /// v·λ.
    pub fn vec_rmul(&self, v: &HVec, l: &Quat) -> HVec {
        v.iter().map(|x| self.d.mul(x, l)).collect()
    }

    pub fn base_change(&self, e: &Field) -> Result<SkewHermitianSpace> {
        let de = self.d.base_change(e)?;
        let h = self
            .h
            .iter()
            .map(|r| r.iter().map(|x| self.d.embed(&de, x)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(SkewHermitianSpace { d: de, h })
    }

    pub fn to_json(&self) -> Value {
        let k = &self.d.field;
        json!({
            "field": k.descriptor_json(),
            "D": [k.format(&self.d.a), k.format(&self.d.b)],
            "H": self.h.iter().map(|r| r.iter().map(|x| self.d.format(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// {"D": [a, b], "H": [[q, …], …]} or {"D": [a, b], "diag": [q, …]}.
    pub fn from_json(v: &Value) -> Result<SkewHermitianSpace> {
        let k = match v.get("field") {
            Some(f) => Field::from_descriptor_json(f)?,
            None => Field::Rationals,
        };
        let ab = v.get("D").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"D\": [a, b]".into()))?;
        if ab.len() != 2 {
            return Err(Error::Parse("\"D\" needs two parameters".into()));
        }
        let d = QuaternionAlgebra::new(k.clone(), parse_scalar(&k, &ab[0])?, parse_scalar(&k, &ab[1])?)?;
        if let Some(diag) = v.get("diag").and_then(Value::as_array) {
            let e: Vec<Quat> = diag.iter().map(|x| d.parse(x)).collect::<Result<_>>()?;
            return SkewHermitianSpace::diagonal(d, &e);
        }
        let rows = v.get("H").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"H\" or \"diag\"".into()))?;
        let mut h = Vec::new();
        for r in rows {
            let r = r.as_array().ok_or_else(|| Error::Parse("rows of H must be arrays".into()))?;
            h.push(r.iter().map(|x| d.parse(x)).collect::<Result<Vec<_>>>()?);
        }
        SkewHermitianSpace::new(d, h)
    }

    pub fn parse_vector(&self, v: &Value) -> Result<HVec> {
        let a = v.as_array().ok_or_else(|| Error::Parse("vector must be an array of quaternions".into()))?;
        if a.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: a.len() });
        }
        a.iter().map(|x| self.d.parse(x)).collect()
    }

    pub fn format_vector(&self, v: &HVec) -> Value {
        json!(v.iter().map(|x| self.d.format(x)).collect::<Vec<_>>())
    }
}

#[derive(Clone, Debug)]
pub struct Tau {
    /// Column p is τ(e_p).
    pub columns: Vec<HVec>,
    pub theta: Quat,
    pub u: Quat,
    pub spinor_norm: Elem,
    pub spinor_class: Elem,
}

/// θ = u·ū⁻¹ for θ of reduced norm 1 in K(ν): u = 1 + θ, or ν when θ = −1.
fn hilbert90(d: &QuaternionAlgebra, theta: &Quat, nu: &Quat) -> Result<Quat> {
    let u = d.add(&d.one(), theta);
    let u = if d.is_zero(&u) { nu.clone() } else { u };
    if d.mul(&u, &d.inv(&d.conj(&u))?) != *theta {
        return Err(Error::Internal("u/conj(u) differs from theta".into()));
    }
    Ok(u)
}

pub fn tau_apply(h: &SkewHermitianSpace, v: &HVec, r: &Quat, x: &HVec) -> Result<HVec> {
    let d = &h.d;
    let c = d.mul(&d.conj(r), &h.eval(v, x)?);
    Ok(x.iter().zip(v).map(|(xi, vi)| d.sub(xi, &d.mul(vi, &c))).collect())
}

/// τ_{v,r}(x) = x − v·h(vr, x), with r − r̄ = r·h(v,v)·r̄.
pub fn tau_transform(h: &SkewHermitianSpace, v: &HVec, r: &Quat) -> Result<Tau> {
    let d = &h.d;
    let k = &d.field;
    let nu = h.eval(v, v)?;
    if d.is_zero(&nu) {
        return Err(Error::Precondition("v is isotropic".into()));
    }
    let lhs = d.sub(r, &d.conj(r));
    let rhs = d.mul(&d.mul(r, &nu), &d.conj(r));
    if lhs != rhs {
        return Err(Error::Precondition("side condition r - conj(r) = r h(v,v) conj(r) fails".into()));
    }
    let n = h.rank();
    let columns: Vec<HVec> = (0..n).map(|p| tau_apply(h, v, r, &h.unit(p))).collect::<Result<_>>()?;
    for p in 0..n {
        for q in 0..n {
            if h.eval(&columns[p], &columns[q])? != h.h[p][q] {
                return Err(Error::Internal("tau does not preserve h".into()));
            }
        }
    }
    let theta = d.sub(&d.one(), &d.mul(&d.conj(r), &nu));
    if d.mul(&theta, &nu) != d.mul(&nu, &theta) || !k.is_one(&d.nrd(&theta)) {
        return Err(Error::Internal("induced unit is not a norm-one element of K(nu)".into()));
    }
    if tau_apply(h, v, r, v)? != h.vec_rmul(v, &theta) {
        return Err(Error::Internal("tau(v) differs from v*theta".into()));
    }
    let u = hilbert90(d, &theta, &nu)?;
    let spinor_norm = d.nrd(&u);
    let spinor_class = k.square_class_rep(&spinor_norm)?;
    Ok(Tau { columns, theta, u, spinor_norm, spinor_class })
}

/// A valid r for τ_{v,r} built from any u ∈ K(ν) with u ≠ ū: θ = u/ū, r̄ = (1 − θ)ν⁻¹.
pub fn r_from_unit(h: &SkewHermitianSpace, v: &HVec, u: &Quat) -> Result<Quat> {
    let d = &h.d;
    let nu = h.eval(v, v)?;
    let theta = d.mul(u, &d.inv(&d.conj(u))?);
    let rbar = d.mul(&d.sub(&d.one(), &theta), &d.inv(&nu)?);
    Ok(d.conj(&rbar))
}

#[derive(Clone, Debug)]
pub struct ForwardWitness {
    /// E = K(√a).
    pub field: Field,
    /// Pure quaternion over K with λ² = a.
    pub lambda: Quat,
    /// v·(λ + √a), isotropic for h over E.
    pub w: HVec,
}

/// From v with K(h(v,v)) ≅ K(√a) to an isotropic vector of h over K(√a).
pub fn quadsplit_forward(h: &SkewHermitianSpace, v: &HVec, a: &Elem) -> Result<ForwardWitness> {
    let d = &h.d;
    let k = &d.field;
    let nu = h.eval(v, v)?;
    if d.is_zero(&nu) {
        return Err(Error::Precondition("v is isotropic".into()));
    }
    let nu2 = d.as_scalar(&d.mul(&nu, &nu)).ok_or_else(|| Error::Internal("h(v,v) is not pure".into()))?;
    let s = k
        .sqrt(&k.div(&nu2, a)?)?
        .ok_or_else(|| Error::Precondition("K(h(v,v)) is not the requested extension".into()))?;
    let lambda = d.scale(&k.inv(&s)?, &nu);
    let e = Field::sqrt_ext(k.clone(), a)?;
    let he = h.base_change(&e)?;
    let de = &he.d;
    let lam_e = d.embed(de, &lambda)?;
    let root = de.scalar(Elem::quad(k.zero(), k.one()));
    let factor = de.add(&lam_e, &root);
    let ve: HVec = v.iter().map(|x| d.embed(de, x)).collect::<Result<_>>()?;
    let w = he.vec_rmul(&ve, &factor);
    if w.iter().all(|x| de.is_zero(x)) || !de.is_zero(&he.eval(&w, &w)?) {
        return Err(Error::Internal("forward transfer did not produce an isotropic vector".into()));
    }
    Ok(ForwardWitness { field: e, lambda, w })
}

#[derive(Clone, Debug)]
pub struct BackwardResult {
    pub v: HVec,
    pub nu: Quat,
    /// h(v,v) = λ·b.
    pub b: Elem,
}

/// From an isotropic x + y√a of h over E = K[√a] back to v = x + yλ with h(v,v) ∈ λ·K^×.
pub fn quadsplit_backward(h: &SkewHermitianSpace, e: &Field, w: &HVec, lambda: &Quat) -> Result<BackwardResult> {
    let d = &h.d;
    let k = &d.field;
    let Field::QuadExt { base, alpha, beta } = e else { return Err(Error::FieldMismatch) };
    if **base != *k || !k.is_zero(alpha) {
        return Err(Error::Precondition("expected E = K[x]/(x^2 - a)".into()));
    }
    let a = k.neg(beta);
    let he = h.base_change(e)?;
    if w.iter().all(|x| he.d.is_zero(x)) || !he.d.is_zero(&he.eval(w, w)?) {
        return Err(Error::Precondition("vector is not isotropic over the extension".into()));
    }
    if !d.is_pure(lambda) || d.mul(lambda, lambda) != d.scalar(a) {
        return Err(Error::Precondition("lambda must be pure with lambda^2 = a".into()));
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for c in w {
        let mut xc = d.zero();
        let mut yc = d.zero();
        for t in 0..4 {
            let (c0, c1) = c[t].quad_parts().ok_or_else(|| Error::Internal("coordinate outside E".into()))?;
            xc[t] = c0.clone();
            yc[t] = c1.clone();
        }
        x.push(xc);
        y.push(yc);
    }
    let v = h.vec_add(&x, &h.vec_rmul(&y, lambda));
    let nu = h.eval(&v, &v)?;
    let idx = (1..4).find(|&t| !k.is_zero(&lambda[t])).unwrap();
    let b = k.div(&nu[idx], &lambda[idx])?;
    if k.is_zero(&b) || d.scale(&b, lambda) != nu {
        return Err(Error::Internal("h(v,v) is not a nonzero multiple of lambda".into()));
    }
    Ok(BackwardResult { v, nu, b })
}

#[derive(Clone, Debug)]
pub struct SnClass {
    /// Square class of ν², so E = K(√d).
    pub d: Elem,
    pub v: HVec,
    pub nu: Quat,
    pub sample_norms: Vec<Elem>,
    pub d_split: bool,
    pub witness: ForwardWitness,
}

#[derive(Clone, Debug)]
pub struct SnReport {
    pub classes: Vec<SnClass>,
    /// An isotropic vector of h, when one turns up (then Sn = K^×).
    pub isotropic: Option<HVec>,
    pub examined: usize,
}

/// Nonzero quaternions with integer coordinates in [−B, B].
fn small_quats(d: &QuaternionAlgebra, bound: i64) -> Vec<Quat> {
    let mut out = Vec::new();
    let r = -bound..=bound;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for e in r.clone() {
                    if (a, b, c, e) != (0, 0, 0, 0) {
                        out.push(d.from_ints([a, b, c, e]));
                    }
                }
            }
        }
    }
    out.sort_by_key(|x| x.iter().filter(|c| !d.field.is_zero(c)).count());
    out
}

/// Vectors e_p + ∑ e_q·μ_q with at most `max_support` nonzero coordinates
/// and the μ_q drawn from `small_quats`, visited in order of support; the
/// callback also gets h(v,v). For diagonal H the cross terms vanish, so each
/// coordinate only contributes its value μ̄·H_qq·μ and duplicates are skipped.
fn for_each_vector(
    h: &SkewHermitianSpace,
    bound: i64,
    max_support: usize,
    mut f: impl FnMut(&HVec, &Quat) -> Result<bool>,
) -> Result<usize> {
    let d = &h.d;
    let n = h.rank();
    let qs = small_quats(d, bound);
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || d.is_zero(&h.h[i][j])));
    // per coordinate: (μ, μ̄·H_qq·μ when H is diagonal)
    let options: Vec<Vec<(Quat, Option<Quat>)>> = (0..n)
        .map(|q| {
            if !diagonal {
                return qs.iter().map(|m| (m.clone(), None)).collect();
            }
            let mut seen = std::collections::HashSet::new();
            qs.iter()
                .filter_map(|m| {
                    let val = d.mul(&d.mul(&d.conj(m), &h.h[q][q]), m);
                    seen.insert(val.clone()).then(|| (m.clone(), Some(val)))
                })
                .collect()
        })
        .collect();
    let mut count = 0;
    for support in 1..=max_support.min(n) {
        let mut idx: Vec<usize> = (0..support).collect();
        loop {
            // idx[0] carries 1, the rest range over their options
            let mut choice = vec![0usize; support - 1];
            loop {
                let mut v = vec![d.zero(); n];
                v[idx[0]] = d.one();
                let mut nu = if diagonal { Some(h.h[idx[0]][idx[0]].clone()) } else { None };
                for (slot, &c) in idx[1..].iter().zip(&choice) {
                    let (m, val) = &options[*slot][c];
                    v[*slot] = m.clone();
                    if let (Some(acc), Some(val)) = (nu.as_mut(), val) {
                        *acc = d.add(acc, val);
                    }
                }
                let nu = match nu {
                    Some(x) => x,
                    None => h.eval(&v, &v)?,
                };
                count += 1;
                if f(&v, &nu)? {
                    return Ok(count);
                }
                let mut pos = 0;
                while pos < choice.len() {
                    choice[pos] += 1;
                    if choice[pos] < options[idx[pos + 1]].len() {
                        break;
                    }
                    choice[pos] = 0;
                    pos += 1;
                }
                if pos == choice.len() {
                    break;
                }
            }
            // next combination of `support` indices
            let mut i = support;
            while i > 0 && idx[i - 1] == n - support + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..support {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(count)
}

/// Quadratic extension classes K(h(v,v)) over vectors of bounded height, each
/// with D_E split checked and an isotropy witness of h_E.
pub fn sn_generators(h: &SkewHermitianSpace, bound: i64, max_support: usize) -> Result<SnReport> {
    let d = &h.d;
    let k = &d.field;
    if *k != Field::Rationals {
        return Err(Error::Unsupported("spinor norm generators are enumerated over Q".into()));
    }
    let class = d.class()?;
    let mut classes: Vec<SnClass> = Vec::new();
    let mut isotropic = None;
    let examined = for_each_vector(h, bound, max_support, |v, nu| {
        let nu = nu.clone();
        if d.is_zero(&nu) {
            if isotropic.is_none() {
                isotropic = Some(v.clone());
            }
            return Ok(false);
        }
        let nu2 = d.as_scalar(&d.mul(&nu, &nu)).ok_or_else(|| Error::Internal("h(v,v) is not pure".into()))?;
        let rep = k.square_class_rep(&nu2)?;
        if k.is_one(&rep) || classes.iter().any(|c| c.d == rep) {
            return Ok(false);
        }
        let e = Field::sqrt_ext(k.clone(), &rep)?;
        let sample_norms = vec![e.norm(&Elem::quad(k.one(), k.one()))?, e.norm(&Elem::quad(k.from_i64(2), k.one()))?];
        let witness = quadsplit_forward(h, v, &rep)?;
        classes.push(SnClass {
            d_split: brauer::splits_over_quadratic(&class, k, &rep)?,
            d: rep,
            v: v.clone(),
            nu,
            sample_norms,
            witness,
        });
        Ok(false)
    })?;
    Ok(SnReport { classes, isotropic, examined })
}

#[derive(Clone, Debug)]
pub struct TrialityRow {
    pub d: Elem,
    /// q hyperbolic over K(√d).
    pub q_hyperbolic: bool,
    pub d_split: bool,
    /// h isotropic over K(√d): Some(true) with a witness, Some(false) when D_E
    /// is not split, None when the bounded search found nothing.
    pub h_isotropic: Option<bool>,
    pub verdict: &'static str,
}

#[derive(Clone, Debug)]
pub struct TrialityReport {
    pub rows: Vec<TrialityRow>,
    pub hard_violations: Vec<String>,
    pub unknown: Vec<String>,
    pub sn_classes: Vec<Elem>,
}

impl TrialityReport {
    pub fn to_json(&self, k: &Field) -> Value {
        json!({
            "rows": self.rows.iter().map(|r| json!({
                "d": k.format(&r.d),
                "q_hyperbolic": r.q_hyperbolic,
                "D_split": r.d_split,
                "h_isotropic": r.h_isotropic,
                "verdict": r.verdict,
            })).collect::<Vec<_>>(),
            "hard_violations": self.hard_violations,
            "unknown": self.unknown,
            "sn_classes": self.sn_classes.iter().map(|x| k.format(x)).collect::<Vec<_>>(),
        })
    }
}

/// Compares hyperbolicity of q over K(√d) with isotropy of h over K(√d) on
/// the given radicands, and the spinor-norm classes of h with the
/// extensions in which q and its certificates live.
pub fn triality_consistency(
    q: &QuadraticSpace,
    h: &SkewHermitianSpace,
    ds: &[Elem],
    gammas: &[Elem],
    bound: i64,
    max_support: usize,
) -> Result<TrialityReport> {
    let k = &q.field;
    if q.dim() != 8 || h.rank() != 4 {
        return Err(Error::Precondition("triality pairs need dim q = 8 and rank h = 4".into()));
    }
    if h.d.field != *k {
        return Err(Error::FieldMismatch);
    }
    let (clif, _) = invariants::clifford_invariant(q)?;
    if clif != h.d.class()? {
        return Err(Error::Precondition("rejected pairing: Clifford invariant of q differs from the class of D".into()));
    }
    if isotropy::is_isotropic(q)? {
        return Err(Error::Precondition("q is isotropic".into()));
    }
    let sn = sn_generators(h, bound, max_support)?;
    let mut report = TrialityReport { rows: vec![], hard_violations: vec![], unknown: vec![], sn_classes: vec![] };
    for c in &sn.classes {
        report.sn_classes.push(c.d.clone());
        if !splitting::hyperbolic_over_sqrt_by_invariants(q, &c.d)? {
            report.hard_violations.push(format!("spinor class {} does not split q", k.format(&c.d)));
        }
    }
    for d in ds {
        let rep = k.square_class_rep(d)?;
        let q_hyp = if k.is_one(&rep) { true } else { splitting::hyperbolic_over_sqrt(q, &rep)?.hyperbolic };
        let d_split = brauer::splits_over_quadratic(&h.d.class()?, k, &rep)?;
        let h_iso = if !d_split {
            Some(false)
        } else if sn.isotropic.is_some() || k.is_one(&rep) || sn.classes.iter().any(|c| c.d == rep) {
            Some(true)
        } else {
            None
        };
        let verdict = match h_iso {
            Some(c) if c == q_hyp => "consistent",
            Some(_) => {
                report.hard_violations.push(format!("d = {}: q hyperbolic {} but h isotropic {}", k.format(&rep), q_hyp, !q_hyp));
                "violation"
            }
            None => {
                report.unknown.push(format!("d = {}: no isotropy witness for h within the bound", k.format(&rep)));
                "unknown"
            }
        };
        report.rows.push(TrialityRow { d: rep, q_hyperbolic: q_hyp, d_split, h_isotropic: h_iso, verdict });
    }
    for g in gammas {
        let cert = hypcert::hyp_certificate(q, g)?;
        for e in &cert.entries {
            if let hypcert::CertEntry::Quadratic { d, .. } = e {
                let rep = k.square_class_rep(d)?;
                if !sn.classes.iter().any(|c| c.d == rep) && sn.isotropic.is_none() {
                    report.unknown.push(format!("certificate extension {} not among spinor classes within the bound", k.format(&rep)));
                }
            }
        }
    }
    Ok(report)
}
