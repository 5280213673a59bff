//! Similitudes, multiplier groups and the decompositions built from them.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::invariants::{self, TypeKind};
use crate::isotropy::{self, residue_split};
use crate::linalg::{self, Matrix, Vector};
use crate::quadform::QuadraticSpace;
use crate::splitting::{self, SplitBlock};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Similitude {
    /// Acts on column vectors: T·v.
    pub matrix: Matrix,
    pub multiplier: Elem,
    pub separable: bool,
}

impl Similitude {
    pub fn apply(&self, k: &Field, v: &Vector) -> Vector {
        linalg::mat_vec(k, &self.matrix, v)
    }

    pub fn to_json(&self, k: &Field) -> Value {
        let m: Vec<Vec<String>> = self.matrix.iter().map(|r| r.iter().map(|x| k.format(x)).collect()).collect();
        json!({"matrix": m, "multiplier": k.format(&self.multiplier), "separable": self.separable})
    }

    pub fn from_json(q: &QuadraticSpace, v: &Value) -> Result<Similitude> {
        let rows = v
            .get("matrix")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("similitude needs a \"matrix\"".into()))?;
        let mut m = Vec::new();
        for r in rows {
            let r = r.as_array().ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
            m.push(r.iter().map(|x| crate::quadform::parse_scalar(&q.field, x)).collect::<Result<Vector>>()?);
        }
        verify_similitude(q, &m)
    }
}

/// Checks q(Teᵢ) = γq(eᵢ) and f(Teᵢ,Teⱼ) = γf(eᵢ,eⱼ) exactly and classifies separability.
pub fn verify_similitude(q: &QuadraticSpace, t: &Matrix) -> Result<Similitude> {
    let k = &q.field;
    let n = q.dim();
    if t.len() != n || t.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: t.len() });
    }
    if k.is_zero(&linalg::det(k, t)) {
        return Err(Error::NotSimilitude("matrix is singular".into()));
    }
    let e: Vec<Vector> = (0..n).map(|i| linalg::unit_vector(k, n, i)).collect();
    let te: Vec<Vector> = linalg::transpose(t);
    let mut gamma = None;
    for i in 0..n {
        let a = q.eval(&e[i]);
        if !k.is_zero(&a) {
            gamma = Some(k.div(&q.eval(&te[i]), &a)?);
            break;
        }
    }
    if gamma.is_none() {
        'outer: for i in 0..n {
            for j in (i + 1)..n {
                let a = q.polar(&e[i], &e[j]);
                if !k.is_zero(&a) {
                    gamma = Some(k.div(&q.polar(&te[i], &te[j]), &a)?);
                    break 'outer;
                }
            }
        }
    }
    let gamma = gamma.ok_or(Error::Degenerate(n))?;
    if k.is_zero(&gamma) {
        return Err(Error::NotSimilitude("multiplier is zero".into()));
    }
    for i in 0..n {
        if q.eval(&te[i]) != k.mul(&gamma, &q.eval(&e[i])) {
            return Err(Error::NotSimilitude(format!("q(Te_{}) != gamma*q(e_{})", i + 1, i + 1)));
        }
        for j in (i + 1)..n {
            if q.polar(&te[i], &te[j]) != k.mul(&gamma, &q.polar(&e[i], &e[j])) {
                return Err(Error::NotSimilitude(format!(
                    "f(Te_{a},Te_{b}) != gamma*f(e_{a},e_{b})",
                    a = i + 1,
                    b = j + 1
                )));
            }
        }
    }
    let inseparable = k.characteristic() == 2
        && !k.is_square(&gamma)?.0
        && (0..n).all(|i| {
            k.is_zero(&q.polar(&e[i], &te[i]))
                && ((i + 1)..n).all(|j| k.is_zero(&k.add(&q.polar(&e[i], &te[j]), &q.polar(&e[j], &te[i]))))
        });
    Ok(Similitude { matrix: t.clone(), multiplier: gamma, separable: !inseparable })
}

pub fn compose(q: &QuadraticSpace, a: &Similitude, b: &Similitude) -> Result<Similitude> {
    verify_similitude(q, &linalg::mat_mul(&q.field, &a.matrix, &b.matrix))
}

pub fn inverse(q: &QuadraticSpace, a: &Similitude) -> Result<Similitude> {
    verify_similitude(q, &linalg::inverse(&q.field, &a.matrix)?)
}

/// π_u(v) = f(u,v)u/q(u) − v.
pub fn reflection(q: &QuadraticSpace, u: &Vector) -> Result<Similitude> {
    let k = &q.field;
    if u.len() != q.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim(), found: u.len() });
    }
    let qu = q.eval(u);
    if k.is_zero(&qu) {
        return Err(Error::Precondition("reflection along an isotropic vector".into()));
    }
    let n = q.dim();
    let cols: Vec<Vector> = (0..n)
        .map(|j| {
            let ej = linalg::unit_vector(k, n, j);
            let c = k.div(&q.polar(u, &ej), &qu)?;
            Ok(linalg::vec_sub(k, &linalg::vec_scale(k, &c, u), &ej))
        })
        .collect::<Result<_>>()?;
    verify_similitude(q, &linalg::transpose(&cols))
}

/// γ ∈ G(q) iff ⟨1,−γ⟩⊗q is hyperbolic.
pub fn gq_membership(q: &QuadraticSpace, gamma: &Elem) -> Result<bool> {
    let k = &q.field;
    if k.is_zero(gamma) {
        return Err(Error::Precondition("multiplier must be nonzero".into()));
    }
    q.require_nondegenerate()?;
    let form = q.orthogonal_sum(&q.scale(&k.neg(gamma)))?;
    let wd = isotropy::witt_decompose(&form)?;
    if !wd.is_hyperbolic() && !wd.kernel_anisotropic {
        return Err(Error::Budget("Witt decomposition of <1,-gamma>q inconclusive".into()));
    }
    Ok(wd.is_hyperbolic())
}

/// Turns the hyperbolic planes of a splitting into ⟨1,−d⟩-blocks, two at a
/// time: H ⊥ H ≅ ⟨½⟩⟨1,−d⟩ ⊥ ⟨−½⟩⟨1,−d⟩.
fn all_norm_blocks(k: &Field, blocks: &[SplitBlock], d: &Elem) -> Result<Vec<(Vector, Vector)>> {
    let mut norms = Vec::new();
    let mut hyp = Vec::new();
    for b in blocks {
        match b {
            SplitBlock::Norm { u, w } => norms.push((u.clone(), w.clone())),
            SplitBlock::Hyperbolic { e, f } => hyp.push((e.clone(), f.clone())),
        }
    }
    if hyp.len() % 2 == 1 {
        return Err(Error::Precondition("odd Witt index: no structure over the extension".into()));
    }
    let half = k.inv(&k.from_i64(2))?;
    let a = k.mul(&half, &k.add(d, &k.one()));
    let b = k.mul(&half, &k.sub(d, &k.one()));
    for pair in hyp.chunks(2) {
        let ((e1, f1), (e2, f2)) = (&pair[0], &pair[1]);
        let hf1 = linalg::vec_scale(k, &half, f1);
        let hf2 = linalg::vec_scale(k, &half, f2);
        let x1 = linalg::vec_add(k, e1, &hf1);
        let y1 = linalg::vec_sub(k, e1, &hf1);
        let x2 = linalg::vec_add(k, e2, &hf2);
        let y2 = linalg::vec_sub(k, e2, &hf2);
        let w = linalg::vec_add(k, &linalg::vec_scale(k, &a, &y1), &linalg::vec_scale(k, &b, &x2));
        let w2 = linalg::vec_add(k, &linalg::vec_scale(k, &b, &y1), &linalg::vec_scale(k, &a, &x2));
        norms.push((x1, w));
        norms.push((y2, w2));
    }
    Ok(norms)
}

#[derive(Clone, Debug)]
pub struct NormSplitting {
    /// (u, w) with f(u,w) = 0 and q(w) = −d·q(u); u ↦ 1, w ↦ √d.
    pub blocks: Vec<(Vector, Vector)>,
    pub d: Elem,
    /// The element of E acting as T.
    pub element: Elem,
    pub similitude: Similitude,
    /// Whether the first block starts at the requested vector.
    pub seeded: bool,
}

/// Similitude T of q given by multiplication by `x` ∈ E (default: the
/// generator of E) under an E-structure read off a hyperbolicity witness.
pub fn norm_splitting_structure(
    q: &QuadraticSpace,
    e: &Field,
    v1: Option<&Vector>,
    x: Option<&Elem>,
) -> Result<NormSplitting> {
    let k = &q.field;
    if k.characteristic() == 2 {
        return Err(Error::Unsupported("norm-splitting structures in characteristic 2".into()));
    }
    let Field::QuadExt { alpha, .. } = e else {
        return Err(Error::Precondition("expected a quadratic extension".into()));
    };
    // reorder the space so that v₁ leads
    let (frame, qq) = match v1 {
        Some(v) => {
            if k.is_zero(&q.eval(v)) {
                return Err(Error::Precondition("seed vector is isotropic".into()));
            }
            let mut frame = vec![v.clone()];
            frame.extend(q.orthogonal_complement(std::slice::from_ref(v)));
            let qq = q.restrict(&frame)?;
            (frame, qq)
        }
        None => ((0..q.dim()).map(|i| linalg::unit_vector(k, q.dim(), i)).collect(), q.clone()),
    };
    let sp = splitting::hyperbolic_over_quadratic(&qq, e)?;
    if !sp.hyperbolic {
        return Err(Error::Precondition("form is not hyperbolic over the extension".into()));
    }
    let d = sp.d.clone().ok_or_else(|| Error::Internal("missing radicand".into()))?;
    let local = all_norm_blocks(k, &sp.blocks, &d)?;
    let blocks: Vec<(Vector, Vector)> = local
        .iter()
        .map(|(u, w)| (isotropy::combine(k, &frame, u), isotropy::combine(k, &frame, w)))
        .collect();
    let seeded = match (v1, blocks.first()) {
        (Some(v), Some((u, _))) => linalg::rank(k, &vec![v.clone(), u.clone()]) == 1,
        _ => false,
    };
    let x = match x {
        Some(x) => x.clone(),
        None => Elem::quad(k.zero(), k.one()),
    };
    let (x0, x1) = x.quad_parts().ok_or_else(|| Error::Precondition("element must lie in E".into()))?;
    let half = k.inv(&k.from_i64(2))?;
    // x = x₀ + x₁θ with θ = (α + √d)/2
    let scalar = k.add(x0, &k.mul(&k.mul(x1, alpha), &half));
    let root = k.mul(x1, &half);
    let mut basis = Vec::new();
    let mut images = Vec::new();
    for (u, w) in &blocks {
        let su = w.clone();
        let sw = linalg::vec_scale(k, &d, u);
        basis.push(u.clone());
        images.push(linalg::vec_add(k, &linalg::vec_scale(k, &scalar, u), &linalg::vec_scale(k, &root, &su)));
        basis.push(w.clone());
        images.push(linalg::vec_add(k, &linalg::vec_scale(k, &scalar, w), &linalg::vec_scale(k, &root, &sw)));
    }
    let b = linalg::transpose(&basis);
    let img = linalg::transpose(&images);
    let t = linalg::mat_mul(k, &img, &linalg::inverse(k, &b)?);
    let sim = verify_similitude(q, &t)?;
    let nx = e.norm(&x)?;
    let tx = e.trace(&x)?;
    if sim.multiplier != nx {
        return Err(Error::Internal("multiplier differs from the norm".into()));
    }
    // p(T) = T² − Tr(x)T + N(x) = 0
    let t2 = linalg::mat_mul(k, &t, &t);
    let n = q.dim();
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { nx.clone() } else { k.zero() };
            let v = k.add(&k.sub(&t2[i][j], &k.mul(&tx, &t[i][j])), &id);
            if !k.is_zero(&v) {
                return Err(Error::Internal("T does not satisfy its minimal polynomial".into()));
            }
        }
    }
    // f(v, Tv) = Tr(x)·q(v), checked on the basis and polarized
    let te = linalg::transpose(&t);
    for i in 0..n {
        let ei = linalg::unit_vector(k, n, i);
        if q.polar(&ei, &te[i]) != k.mul(&tx, &q.eval(&ei)) {
            return Err(Error::Internal("f(v,Tv) != Tr(x)q(v)".into()));
        }
        for j in (i + 1)..n {
            let ej = linalg::unit_vector(k, n, j);
            let lhs = k.add(&q.polar(&ei, &te[j]), &q.polar(&ej, &te[i]));
            if lhs != k.mul(&tx, &q.polar(&ei, &ej)) {
                return Err(Error::Internal("polarized f(v,Tv) identity fails".into()));
            }
        }
    }
    Ok(NormSplitting { blocks, d, element: x, similitude: sim, seeded })
}

#[derive(Clone, Debug)]
pub struct InsepDecomposition {
    pub gamma: Elem,
    /// Symplectic pairs over E = K(√γ) for f′(v,w) = f(v,w) + √γ⁻¹ f(v,Tw), as K-vectors.
    pub symplectic_pairs: Vec<(Vector, Vector)>,
    /// K-span of the symplectic E-basis.
    pub w_basis: Vec<Vector>,
    pub q0: QuadraticSpace,
    /// Columns w_basis ++ T·w_basis; q in this basis is q0 ⊥ γ·q0.
    pub isometry: Vec<Vector>,
}

/// q ≅ ⟨1,γ⟩·q₀ from an inseparable similitude (characteristic 2).
pub fn insep_decompose(q: &QuadraticSpace, t: &Matrix) -> Result<InsepDecomposition> {
    let k = &q.field;
    if k.characteristic() != 2 {
        return Err(Error::Precondition("inseparable similitudes need characteristic 2".into()));
    }
    q.require_nondegenerate()?;
    let sim = verify_similitude(q, t)?;
    if sim.separable {
        return Err(Error::Precondition("similitude is separable".into()));
    }
    let n = q.dim();
    let gamma = sim.multiplier.clone();
    let t2 = linalg::mat_mul(k, t, t);
    let scaled_id: Matrix = linalg::identity(k, n).iter().map(|r| linalg::vec_scale(k, &gamma, r)).collect();
    if t2 != scaled_id {
        return Err(Error::Precondition("T² ≠ γ·id".into()));
    }
    let e = Field::quad_ext(k.clone(), k.zero(), gamma.clone())?;
    let tv = |v: &Vector| linalg::mat_vec(k, t, v);
    let fprime = |v: &Vector, w: &Vector| -> Result<Elem> {
        Ok(Elem::quad(q.polar(v, w), k.div(&q.polar(v, &tv(w)), &gamma)?))
    };
    // (x₀ + x₁θ)·v = x₀v + x₁Tv
    let smul = |c: &Elem, v: &Vector| -> Vector {
        let (c0, c1) = c.quad_parts().expect("element of E");
        linalg::vec_add(k, &linalg::vec_scale(k, c0, v), &linalg::vec_scale(k, c1, &tv(v)))
    };
    let mut pool: Vec<Vector> = (0..n).map(|i| linalg::unit_vector(k, n, i)).collect();
    let mut pairs = Vec::new();
    loop {
        pool.retain(|v| !linalg::is_zero_vec(k, v));
        let Some(v) = pool.first().cloned() else { break };
        let mut partner = None;
        for cand in pool.iter().cloned().chain(pool.iter().map(&tv)) {
            let c = fprime(&v, &cand)?;
            if !e.is_zero(&c) {
                partner = Some(smul(&e.inv(&c)?, &cand));
                break;
            }
        }
        let w = partner.ok_or_else(|| Error::Degenerate(n))?;
        let mut next = Vec::new();
        for x in &pool {
            let a = fprime(x, &w)?;
            let b = fprime(x, &v)?;
            next.push(linalg::vec_add(k, &linalg::vec_sub(k, x, &smul(&a, &v)), &smul(&b, &w)));
        }
        pool = next;
        pairs.push((v, w));
    }
    if 4 * pairs.len() != n {
        return Err(Error::Internal(format!("symplectic E-basis has {} pairs in dimension {n}", pairs.len())));
    }
    assert_eq!(n % 4, 0);
    let w_basis: Vec<Vector> = pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    let q0 = q.restrict(&w_basis)?;
    let mut isometry = w_basis.clone();
    isometry.extend(w_basis.iter().map(&tv));
    let image = q.restrict(&isometry)?;
    let target = q0.orthogonal_sum(&q0.scale(&gamma))?;
    if image.coeffs() != target.coeffs() {
        return Err(Error::Internal("q is not q0 + gamma*q0 on the constructed basis".into()));
    }
    Ok(InsepDecomposition { gamma, symplectic_pairs: pairs, w_basis, q0, isometry })
}

#[derive(Clone, Debug)]
pub struct E8Split {
    pub d: Elem,
    /// q₁ ≅ ⟨λ⟩·Nrd_D with D = (a, b).
    pub lambda: Elem,
    pub quaternion: (Elem, Elem),
    pub q1_basis: Vec<Vector>,
    pub q2_basis: Vec<Vector>,
    pub q1: QuadraticSpace,
    pub q2: QuadraticSpace,
    pub residue_piece: usize,
}

/// Radicands tried when none is given: squarefree |d| ≤ 50.
fn radicand_candidates() -> Vec<i64> {
    let mut out = vec![-1];
    for a in 2..=50i64 {
        if crate::arith::squarefree_decompose(&a.into()).map(|(s, _)| s == a.into()).unwrap_or(false) {
            out.push(a);
            out.push(-a);
        }
    }
    out
}

/// Splits an E₈-type form over the Laurent view as q₁ ⊥ q₂ with q₁ similar to
/// a quaternion norm form and q₂ of type E₇, both admitting γ as multiplier.
/// The quaternion part is carved from ⟨1,−d⟩-blocks of one residue form,
/// with d a radicand for which γ is a norm and q is hyperbolic.
pub fn e8_decompose(q: &QuadraticSpace, gamma: &Elem, d: Option<&Elem>) -> Result<E8Split> {
    let k = &q.field;
    let Field::LaurentView { base } = k else {
        return Err(Error::Unsupported("E8 decomposition is implemented over the Laurent view of Q".into()));
    };
    if **base != Field::Rationals {
        return Err(Error::Unsupported("E8 decomposition is implemented over the Laurent view of Q".into()));
    }
    let cls = invariants::classify_type(q)?;
    if cls.kind != TypeKind::E8 {
        return Err(Error::Precondition(format!("form is of type {}, not E8", cls.kind.name())));
    }
    if k.is_square(gamma)?.0 {
        return Err(Error::Precondition("multiplier is a square".into()));
    }
    let gc = k
        .as_constant(gamma)
        .ok_or_else(|| Error::Unsupported("only constant multipliers are supported".into()))?;
    if !gq_membership(q, gamma)? {
        return Err(Error::Precondition("multiplier is not in G(q)".into()));
    }
    let split = residue_split(q)?;
    if !split.monomial {
        return Err(Error::Unsupported("form is not in monomial residue shape".into()));
    }
    let candidates: Vec<Elem> = match d {
        Some(d) => vec![k.as_constant(d).ok_or_else(|| Error::Unsupported("radicand must be constant".into()))?],
        None => radicand_candidates().into_iter().map(|a| base.from_i64(a)).collect(),
    };
    let mut last_err = Error::Budget("no radicand splits q with the multiplier as a norm".into());
    for dc in candidates {
        let eq = Field::sqrt_ext(Field::Rationals, &dc)?;
        if !splitting::norm_membership(&eq, &gc)?.0 {
            if d.is_some() {
                return Err(Error::Precondition("multiplier is not a norm from the given extension".into()));
            }
            continue;
        }
        let ek = Field::sqrt_ext(k.clone(), &k.embed_constant(&dc))?;
        if !splitting::hyperbolic_over_quadratic(q, &ek)?.hyperbolic {
            if d.is_some() {
                return Err(Error::Precondition("form is not hyperbolic over the given extension".into()));
            }
            continue;
        }
        match carve(q, &split, gamma, &dc) {
            Ok(s) => return Ok(s),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

fn carve(q: &QuadraticSpace, split: &isotropy::ResidueSplit, gamma: &Elem, dc: &Elem) -> Result<E8Split> {
    let k = &q.field;
    let base = &split.base;
    let t = k.t()?;
    for second in [true, false] {
        let res = if second { split.second_form() } else { split.first_form() };
        if res.dim() < 4 {
            continue;
        }
        let sp = splitting::hyperbolic_over_sqrt(&res, dc)?;
        if !sp.hyperbolic {
            continue;
        }
        // the extension's radicand differs from dc by a square; rescale w to match dc
        let rd = sp.d.clone().ok_or_else(|| Error::Internal("missing radicand".into()))?;
        let r = base
            .sqrt(&base.div(&rd, dc)?)?
            .ok_or_else(|| Error::Internal("radicands differ by a non-square".into()))?;
        let r_inv = base.inv(&r)?;
        let blocks: Vec<(Vector, Vector)> = all_norm_blocks(base, &sp.blocks, &rd)?
            .into_iter()
            .map(|(u, w)| (u, linalg::vec_scale(base, &r_inv, &w)))
            .collect();
        let other = if second { split.first.len() } else { split.second.len() };
        let other_vecs: Vec<Vector> = (0..other)
            .map(|i| split.lift(k, !second, &linalg::unit_vector(base, other, i)))
            .collect::<Result<_>>()?;
        for i in 0..blocks.len() {
            for j in (i + 1)..blocks.len() {
                let (u1, w1) = &blocks[i];
                let (u2, w2) = &blocks[j];
                let c1 = res.eval(u1);
                let c2 = res.eval(u2);
                let u2s = linalg::vec_scale(base, &c1, u2);
                let w2s = linalg::vec_scale(base, &c1, w2);
                let local = vec![u1.clone(), w1.clone(), u2s, w2s];
                let rest = res.orthogonal_complement(&local);
                let q1_basis: Vec<Vector> = local.iter().map(|v| split.lift(k, second, v)).collect::<Result<_>>()?;
                let mut q2_basis: Vec<Vector> =
                    rest.iter().map(|v| split.lift(k, second, v)).collect::<Result<_>>()?;
                q2_basis.extend(other_vecs.iter().cloned());
                let q1 = q.restrict(&q1_basis)?;
                let q2 = q.restrict(&q2_basis)?;
                let scale = if second { t.clone() } else { k.one() };
                let lambda = k.mul(&scale, &k.embed_constant(&c1));
                let a = k.embed_constant(dc);
                let b = k.neg(&k.embed_constant(&base.mul(&c1, &c2)));
                let nrd = QuadraticSpace::diag(k, &[k.one(), k.neg(&a), k.neg(&b), k.mul(&a, &b)]).scale(&lambda);
                if q1.coeffs() != nrd.coeffs() {
                    return Err(Error::Internal("carved piece is not the scaled norm form".into()));
                }
                if invariants::classify_type(&q2)?.kind != TypeKind::E7 {
                    continue;
                }
                if !gq_membership(&q1, gamma)? || !gq_membership(&q2, gamma)? {
                    continue;
                }
                return Ok(E8Split {
                    d: k.embed_constant(dc),
                    lambda,
                    quaternion: (a, b),
                    q1_basis,
                    q2_basis,
                    q1,
                    q2,
                    residue_piece: usize::from(second),
                });
            }
        }
    }
    Err(Error::Budget("no block pair leaves an E7 complement".into()))
}

impl E8Split {
    pub fn to_json(&self, k: &Field) -> Value {
        let fmt = |vs: &[Vector]| -> Vec<Vec<String>> { vs.iter().map(|v| v.iter().map(|x| k.format(x)).collect()).collect() };
        json!({
            "d": k.format(&self.d),
            "lambda": k.format(&self.lambda),
            "quaternion": [k.format(&self.quaternion.0), k.format(&self.quaternion.1)],
            "q1_basis": fmt(&self.q1_basis),
            "q2_basis": fmt(&self.q2_basis),
            "q1": self.q1.to_json(),
            "q2": self.q2.to_json(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: &Field, d: &[i64]) -> QuadraticSpace {
        QuadraticSpace::diag_i64(k, d)
    }

    fn mat(k: &Field, rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| k.from_i64(x)).collect()).collect()
    }

    #[test]
    fn similitudes() {
        let k = Field::rationals();
        let s = verify_similitude(&q(&k, &[1, 1]), &mat(&k, &[&[1, -1], &[1, 1]])).unwrap();
        assert_eq!(s.multiplier, k.from_i64(2));
        assert!(s.separable);
        let err = verify_similitude(&q(&k, &[1, 2]), &mat(&k, &[&[1, -1], &[1, 1]])).unwrap_err();
        assert!(matches!(err, Error::NotSimilitude(_)));
    }

    #[test]
    fn reflections() {
        let k = Field::rationals();
        let r = reflection(&q(&k, &[1, 1]), &vec![k.one(), k.zero()]).unwrap();
        assert_eq!(r.matrix, mat(&k, &[&[1, 0], &[0, -1]]));
        let r = reflection(&q(&k, &[1, 1, 1, 7]), &linalg::unit_vector(&k, 4, 3)).unwrap();
        assert_eq!(r.matrix, mat(&k, &[&[-1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 1]]));
        assert!(reflection(&q(&k, &[1, -1]), &vec![k.one(), k.one()]).is_err());
    }

    #[test]
    fn memberships() {
        let k = Field::rationals();
        let q8 = q(&k, &[1, 1, 1, 7, 1, 1, 1, 7]);
        assert!(gq_membership(&q8, &k.one()).unwrap());
        assert!(gq_membership(&q8, &k.from_i64(2)).unwrap());
        assert!(!gq_membership(&q8, &k.from_i64(-1)).unwrap());
    }

    #[test]
    fn norm_structures() {
        let k = Field::rationals();
        let qi = Field::sqrt_ext(k.clone(), &k.from_i64(-1)).unwrap();
        let ns = norm_splitting_structure(&q(&k, &[1, 1]), &qi, Some(&vec![k.one(), k.zero()]), None).unwrap();
        assert_eq!(ns.similitude.matrix, mat(&k, &[&[0, -1], &[1, 0]]));
        assert!(ns.seeded);
        let ns = norm_splitting_structure(&q(&k, &[1, 1, 1, 7, 1, 1, 1, 7]), &qi, None, None).unwrap();
        assert_eq!(ns.blocks.len(), 4);
        assert_eq!(ns.similitude.multiplier, k.one());
        let x = Elem::quad(k.one(), k.one());
        let ns = norm_splitting_structure(&q(&k, &[1, 1, 1, 7, 1, 1, 1, 7]), &qi, None, Some(&x)).unwrap();
        assert_eq!(ns.similitude.multiplier, k.from_i64(2));
        let r2 = Field::sqrt_ext(k.clone(), &k.from_i64(2)).unwrap();
        let ns = norm_splitting_structure(&q(&k, &[1, 1, -2, -2]), &r2, None, None).unwrap();
        assert_eq!(ns.similitude.multiplier, k.from_i64(-2));
        // hyperbolic planes in pairs
        let ns = norm_splitting_structure(&q(&k, &[1, -1, 1, -1]), &qi, None, None).unwrap();
        assert_eq!(ns.similitude.multiplier, k.one());
    }

    fn char2_instance() -> (QuadraticSpace, Matrix) {
        let f = Field::rational_functions(Field::PrimeField(2), "t");
        let t = f.t().unwrap();
        let b = QuadraticSpace::binary_blocks(&f, &[(f.one(), f.one())]);
        let q = b.orthogonal_sum(&b.scale(&t)).unwrap();
        let (z, o) = (f.zero(), f.one());
        let m = vec![
            vec![z.clone(), z.clone(), t.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), t.clone()],
            vec![o.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), o.clone(), z.clone(), z.clone()],
        ];
        (q, m)
    }

    #[test]
    fn inseparable() {
        let (q, m) = char2_instance();
        let f = q.field.clone();
        let s = verify_similitude(&q, &m).unwrap();
        assert!(!s.separable);
        assert_eq!(s.multiplier, f.t().unwrap());
        let dec = insep_decompose(&q, &m).unwrap();
        assert_eq!(dec.q0.dim(), 2);
        assert!(dec.q0.is_nondegenerate());
        assert_eq!(dec.isometry.len(), 4);
        let id = linalg::identity(&f, 4);
        assert!(insep_decompose(&q, &id).is_err());
    }

    #[test]
    fn e8_split() {
        let l = Field::laurent(Field::rationals()).unwrap();
        let t = l.t().unwrap();
        let q8 = QuadraticSpace::diag_i64(&l, &[1, 1, 1, 7, 1, 1, 1, 7]);
        let q12 = q8.orthogonal_sum(&QuadraticSpace::diag_i64(&l, &[1, 1, -7, -7]).scale(&t)).unwrap();
        let s = e8_decompose(&q12, &l.from_i64(2), None).unwrap();
        assert_eq!(s.q2.dim(), 8);
        assert_eq!(s.residue_piece, 1);
        assert!(e8_decompose(&q12, &l.from_i64(4), None).is_err());
    }
}
