//! Quadratic spaces stored through an upper-triangular coefficient matrix C,
//! with q(v) = vᵀCv and polar form f(u, v) = uᵀ(C + Cᵀ)v. This works
//! uniformly in characteristic 2, where q is not recoverable from f.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Matrix, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    pub field: Field,
    coeffs: Matrix,
}

impl QuadraticSpace {
    /// From an upper-triangular n×n coefficient matrix. Entries below the
    /// diagonal are folded onto the upper triangle.
    pub fn new(field: Field, coeffs: Matrix) -> Result<QuadraticSpace> {
        let n = coeffs.len();
        let mut c = linalg::zeros(&field, n, n);
        for (i, row) in coeffs.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for (j, x) in row.iter().enumerate() {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                c[a][b] = field.add(&c[a][b], x);
            }
        }
        Ok(QuadraticSpace { field, coeffs: c })
    }

    pub fn diag(field: &Field, entries: &[Elem]) -> QuadraticSpace {
        let n = entries.len();
        let mut c = linalg::zeros(field, n, n);
        for (i, a) in entries.iter().enumerate() {
            c[i][i] = a.clone();
        }
        QuadraticSpace { field: field.clone(), coeffs: c }
    }

    pub fn diag_i64(field: &Field, entries: &[i64]) -> QuadraticSpace {
        let e: Vec<Elem> = entries.iter().map(|&a| field.from_i64(a)).collect();
        QuadraticSpace::diag(field, &e)
    }

    /// Orthogonal sum of binary blocks [a, b] = a x² + xy + b y².
    pub fn binary_blocks(field: &Field, blocks: &[(Elem, Elem)]) -> QuadraticSpace {
        let n = 2 * blocks.len();
        let mut c = linalg::zeros(field, n, n);
        for (i, (a, b)) in blocks.iter().enumerate() {
            c[2 * i][2 * i] = a.clone();
            c[2 * i][2 * i + 1] = field.one();
            c[2 * i + 1][2 * i + 1] = b.clone();
        }
        QuadraticSpace { field: field.clone(), coeffs: c }
    }

    /// m orthogonal hyperbolic planes xy.
    pub fn hyperbolic(field: &Field, m: usize) -> QuadraticSpace {
        QuadraticSpace::binary_blocks(field, &vec![(field.zero(), field.zero()); m])
    }

    /// The Pfister form ⊗⟨1, −aᵢ⟩; entry at index b is ∏_{bit i of b} (−aᵢ).
    pub fn pfister(field: &Field, params: &[Elem]) -> Result<QuadraticSpace> {
        if field.characteristic() == 2 {
            return Err(Error::Unsupported("Pfister forms in characteristic 2".into()));
        }
        let mut entries = vec![field.one()];
        for a in params {
            if field.is_zero(a) {
                return Err(Error::Precondition("Pfister parameter is zero".into()));
            }
            let na = field.neg(a);
            let scaled: Vec<Elem> = entries.iter().map(|x| field.mul(x, &na)).collect();
            entries.extend(scaled);
        }
        Ok(QuadraticSpace::diag(field, &entries))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Elem {
        &self.coeffs[i][j]
    }

    fn check_len(&self, v: &Vector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    pub fn eval(&self, v: &Vector) -> Elem {
        let k = &self.field;
        let mut acc = k.zero();
        for (i, row) in self.coeffs.iter().enumerate() {
            if k.is_zero(&v[i]) {
                continue;
            }
            let mut s = k.zero();
            for j in i..row.len() {
                if !k.is_zero(&row[j]) && !k.is_zero(&v[j]) {
                    s = k.add(&s, &k.mul(&row[j], &v[j]));
                }
            }
            acc = k.add(&acc, &k.mul(&v[i], &s));
        }
        acc
    }

    pub fn polar(&self, u: &Vector, v: &Vector) -> Elem {
        let k = &self.field;
        let mut acc = k.zero();
        for (i, row) in self.coeffs.iter().enumerate() {
            for j in i..row.len() {
                if k.is_zero(&row[j]) {
                    continue;
                }
                let t = k.add(&k.mul(&u[i], &v[j]), &k.mul(&u[j], &v[i]));
                if i == j {
                    // f(eᵢ, eᵢ) = 2 C_ii
                    acc = k.add(&acc, &k.mul(&row[j], &k.mul(&u[i], &v[i])));
                    acc = k.add(&acc, &k.mul(&row[j], &k.mul(&u[i], &v[i])));
                } else {
                    acc = k.add(&acc, &k.mul(&row[j], &t));
                }
            }
        }
        acc
    }

    /// (q(u), q(v), f(u, v)).
    pub fn evaluate_polar(&self, u: &Vector, v: &Vector) -> Result<(Elem, Elem, Elem)> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok((self.eval(u), self.eval(v), self.polar(u, v)))
    }

    /// F = C + Cᵀ.
    pub fn polar_matrix(&self) -> Matrix {
        let k = &self.field;
        let n = self.dim();
        let mut f = linalg::zeros(k, n, n);
        for i in 0..n {
            for j in 0..n {
                f[i][j] = if i == j {
                    k.add(&self.coeffs[i][i], &self.coeffs[i][i])
                } else if i < j {
                    self.coeffs[i][j].clone()
                } else {
                    self.coeffs[j][i].clone()
                };
            }
        }
        f
    }

    /// Gram matrix G with q(v) = vᵀGv (char ≠ 2).
    pub fn gram(&self) -> Result<Matrix> {
        let k = &self.field;
        if k.characteristic() == 2 {
            return Err(Error::Unsupported("Gram matrix in characteristic 2".into()));
        }
        let half = k.inv(&k.from_i64(2))?;
        Ok(self
            .polar_matrix()
            .iter()
            .map(|r| r.iter().map(|x| k.mul(x, &half)).collect())
            .collect())
    }

    pub fn from_gram(field: &Field, g: &Matrix) -> Result<QuadraticSpace> {
        let n = g.len();
        let mut c = linalg::zeros(field, n, n);
        for i in 0..n {
            c[i][i] = g[i][i].clone();
            for j in (i + 1)..n {
                c[i][j] = field.add(&g[i][j], &g[j][i]);
            }
        }
        Ok(QuadraticSpace { field: field.clone(), coeffs: c })
    }

    /// Basis of rad f and the nondegeneracy verdict. The radical may have
    /// dimension at most one, only in odd dimension and characteristic 2,
    /// where q must not vanish on it.
    pub fn radical_check(&self) -> (Vec<Vector>, bool) {
        let rad = linalg::kernel(&self.field, &self.polar_matrix(), self.dim());
        let ok = match rad.len() {
            0 => true,
            1 => {
                self.dim() % 2 == 1
                    && self.field.characteristic() == 2
                    && !self.field.is_zero(&self.eval(&rad[0]))
            }
            _ => false,
        };
        (rad, ok)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical_check().1
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        let (rad, ok) = self.radical_check();
        if ok {
            Ok(())
        } else {
            Err(Error::Degenerate(rad.len()))
        }
    }

    /// Diagonal entries if C is diagonal.
    pub fn diagonal_entries(&self) -> Option<Vec<Elem>> {
        let k = &self.field;
        for (i, row) in self.coeffs.iter().enumerate() {
            if row.iter().enumerate().any(|(j, x)| j != i && !k.is_zero(x)) {
                return None;
            }
        }
        Some((0..self.dim()).map(|i| self.coeffs[i][i].clone()).collect())
    }

    /// Orthogonal basis (as columns of the returned matrix B) and the values
    /// aᵢ = q(bᵢ), so that q(By) = Σ aᵢ yᵢ².
    pub fn diagonalize(&self) -> Result<(Matrix, Vec<Elem>)> {
        let k = &self.field;
        if k.characteristic() == 2 {
            return Err(Error::Unsupported("diagonalization in characteristic 2".into()));
        }
        let n = self.dim();
        if let Some(d) = self.diagonal_entries() {
            if d.iter().all(|x| !k.is_zero(x)) {
                return Ok((linalg::identity(k, n), d));
            }
        }
        let mut g = self.gram()?;
        // rows of `basis` are the current basis vectors
        let mut basis = linalg::identity(k, n);
        for i in 0..n {
            if k.is_zero(&g[i][i]) {
                if let Some(j) = ((i + 1)..n).find(|&j| !k.is_zero(&g[j][j])) {
                    g.swap(i, j);
                    for row in g.iter_mut() {
                        row.swap(i, j);
                    }
                    basis.swap(i, j);
                } else if let Some(j) = ((i + 1)..n).find(|&j| !k.is_zero(&g[i][j])) {
                    // bᵢ ← bᵢ + bⱼ gives q = 2 G_ij
                    for c in 0..n {
                        g[i][c] = k.add(&g[i][c], &g[j][c]);
                    }
                    for r in 0..n {
                        g[r][i] = k.add(&g[r][i], &g[r][j]);
                    }
                    basis[i] = linalg::vec_add(k, &basis[i], &basis[j]);
                } else {
                    let (rad, _) = self.radical_check();
                    return Err(Error::Degenerate(rad.len().max(1)));
                }
            }
            let inv = k.inv(&g[i][i])?;
            for j in (i + 1)..n {
                if k.is_zero(&g[i][j]) {
                    continue;
                }
                let f = k.mul(&g[i][j], &inv);
                for c in 0..n {
                    let t = k.mul(&f, &g[i][c]);
                    g[j][c] = k.sub(&g[j][c], &t);
                }
                for r in 0..n {
                    let t = k.mul(&f, &g[r][i]);
                    g[r][j] = k.sub(&g[r][j], &t);
                }
                let bi = linalg::vec_scale(k, &f, &basis[i]);
                basis[j] = linalg::vec_sub(k, &basis[j], &bi);
            }
        }
        let entries = (0..n).map(|i| g[i][i].clone()).collect();
        Ok((linalg::transpose(&basis), entries))
    }

    /// Diagonal entries of some diagonalization.
    pub fn diagonal_form(&self) -> Result<Vec<Elem>> {
        Ok(self.diagonalize()?.1)
    }

    /// Form induced on the span of the given vectors (in that basis).
    pub fn restrict(&self, basis: &[Vector]) -> Result<QuadraticSpace> {
        for b in basis {
            self.check_len(b)?;
        }
        let k = &self.field;
        let m = basis.len();
        let mut c = linalg::zeros(k, m, m);
        for i in 0..m {
            c[i][i] = self.eval(&basis[i]);
            for j in (i + 1)..m {
                c[i][j] = self.polar(&basis[i], &basis[j]);
            }
        }
        Ok(QuadraticSpace { field: k.clone(), coeffs: c })
    }

    /// Orthogonal complement of the span of `vs` (basis vectors of f-perp).
    pub fn orthogonal_complement(&self, vs: &[Vector]) -> Vec<Vector> {
        let f = self.polar_matrix();
        let rows: Matrix = vs.iter().map(|v| linalg::mat_vec(&self.field, &f, v)).collect();
        if rows.is_empty() {
            return (0..self.dim()).map(|i| linalg::unit_vector(&self.field, self.dim(), i)).collect();
        }
        linalg::kernel(&self.field, &rows, self.dim())
    }

    pub fn orthogonal_sum(&self, other: &QuadraticSpace) -> Result<QuadraticSpace> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let (n, m) = (self.dim(), other.dim());
        let k = &self.field;
        let mut c = linalg::zeros(k, n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                c[i][j] = self.coeffs[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                c[n + i][n + j] = other.coeffs[i][j].clone();
            }
        }
        Ok(QuadraticSpace { field: k.clone(), coeffs: c })
    }

    pub fn sum_all(parts: &[QuadraticSpace]) -> Result<QuadraticSpace> {
        let mut it = parts.iter();
        let first = it.next().ok_or_else(|| Error::Precondition("empty orthogonal sum".into()))?;
        it.try_fold(first.clone(), |acc, p| acc.orthogonal_sum(p))
    }

    /// ⟨α⟩·q.
    pub fn scale(&self, alpha: &Elem) -> QuadraticSpace {
        let k = &self.field;
        QuadraticSpace {
            field: k.clone(),
            coeffs: self.coeffs.iter().map(|r| r.iter().map(|x| k.mul(alpha, x)).collect()).collect(),
        }
    }

    pub fn negate(&self) -> QuadraticSpace {
        self.scale(&self.field.neg(&self.field.one()))
    }

    /// ⟨α₁,…,α_k⟩·q = ⊥ αᵢ·q.
    pub fn diagonal_multiple(&self, alphas: &[Elem]) -> Result<QuadraticSpace> {
        let parts: Vec<QuadraticSpace> = alphas.iter().map(|a| self.scale(a)).collect();
        QuadraticSpace::sum_all(&parts)
    }

    /// Change of basis: the form v ↦ q(Bv), with B given by its columns.
    pub fn transform(&self, columns: &[Vector]) -> Result<QuadraticSpace> {
        self.restrict(columns)
    }

    /// The same form read over an extension of the coefficient field.
    pub fn base_change(&self, to: &Field) -> Result<QuadraticSpace> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|r| r.iter().map(|x| to.embed_from(&self.field, x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Matrix>>()?;
        Ok(QuadraticSpace { field: to.clone(), coeffs })
    }

    /// Evaluate a vector of canonical strings.
    pub fn parse_vector(&self, items: &[String]) -> Result<Vector> {
        let v: Vector = items.iter().map(|s| self.field.parse(s)).collect::<Result<_>>()?;
        self.check_len(&v)?;
        Ok(v)
    }

    pub fn format_vector(&self, v: &Vector) -> Vec<String> {
        v.iter().map(|x| self.field.format(x)).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut flat = Vec::new();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                flat.push(self.field.format(&self.coeffs[i][j]));
            }
        }
        json!({"field": self.field.descriptor_json(), "dim": self.dim(), "coeffs": flat})
    }

    /// Accepts the canonical schema and the shorthands `{"diag":[…]}`,
    /// `{"pfister":[…]}`, `{"blocks":[[a,b],…]}`, `{"sum":[form,…]}` and
    /// `{"scale":c,"form":form}`; `"field"` defaults to ℚ.
    pub fn from_json(v: &Value) -> Result<QuadraticSpace> {
        let field = match v.get("field") {
            Some(f) => Field::from_descriptor_json(f)?,
            None => Field::Rationals,
        };
        QuadraticSpace::from_json_over(&field, v)
    }

    pub fn from_json_over(default_field: &Field, v: &Value) -> Result<QuadraticSpace> {
        let field = match v.get("field") {
            Some(f) => Field::from_descriptor_json(f)?,
            None => default_field.clone(),
        };
        let k = &field;
        let elems = |key: &str| -> Result<Vec<Elem>> {
            v[key]
                .as_array()
                .ok_or_else(|| Error::Parse(format!("\"{key}\" must be an array")))?
                .iter()
                .map(|x| parse_scalar(k, x))
                .collect()
        };
        if v.get("diag").is_some() {
            return Ok(QuadraticSpace::diag(k, &elems("diag")?));
        }
        if v.get("pfister").is_some() {
            return QuadraticSpace::pfister(k, &elems("pfister")?);
        }
        if let Some(bl) = v.get("blocks") {
            let arr = bl.as_array().ok_or_else(|| Error::Parse("\"blocks\" must be an array".into()))?;
            let mut blocks = Vec::new();
            for b in arr {
                let pair = b.as_array().filter(|p| p.len() == 2).ok_or_else(|| Error::Parse("block must be [a,b]".into()))?;
                blocks.push((parse_scalar(k, &pair[0])?, parse_scalar(k, &pair[1])?));
            }
            return Ok(QuadraticSpace::binary_blocks(k, &blocks));
        }
        if let Some(parts) = v.get("sum") {
            let arr = parts.as_array().ok_or_else(|| Error::Parse("\"sum\" must be an array".into()))?;
            let forms: Vec<QuadraticSpace> =
                arr.iter().map(|p| QuadraticSpace::from_json_over(k, p)).collect::<Result<_>>()?;
            return QuadraticSpace::sum_all(&forms);
        }
        if let Some(c) = v.get("scale") {
            let inner = QuadraticSpace::from_json_over(k, &v["form"])?;
            return Ok(inner.scale(&parse_scalar(k, c)?));
        }
        let n = v["dim"].as_u64().ok_or_else(|| Error::Parse("form needs \"dim\"".into()))? as usize;
        let flat = elems("coeffs")?;
        if flat.len() != n * (n + 1) / 2 {
            return Err(Error::DimensionMismatch { expected: n * (n + 1) / 2, found: flat.len() });
        }
        let mut c = linalg::zeros(k, n, n);
        let mut it = flat.into_iter();
        for i in 0..n {
            for j in i..n {
                c[i][j] = it.next().unwrap();
            }
        }
        Ok(QuadraticSpace { field, coeffs: c })
    }
}

/// A scalar given as a JSON string or number.
pub fn parse_scalar(k: &Field, x: &Value) -> Result<Elem> {
    match x {
        Value::String(s) => k.parse(s),
        Value::Number(n) => k.parse(&n.to_string()),
        _ => Err(Error::Parse(format!("expected a scalar, found {x}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn v(k: &Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| k.from_i64(x)).collect()
    }

    #[test]
    fn polar_examples() {
        let k = q();
        let h = QuadraticSpace::diag_i64(&k, &[1, 1]);
        let (a, b, f) = h.evaluate_polar(&v(&k, &[1, 0]), &v(&k, &[0, 1])).unwrap();
        assert_eq!((a, b, f), (k.one(), k.one(), k.zero()));
        assert_eq!(QuadraticSpace::diag_i64(&k, &[1, -2]).eval(&v(&k, &[1, 1])), k.from_i64(-1));
        let f2t = Field::rational_functions(Field::PrimeField(2), "t");
        let b = QuadraticSpace::binary_blocks(&f2t, &[(f2t.one(), f2t.one())]);
        let (_, qv, fv) = b.evaluate_polar(&v(&f2t, &[1, 0]), &v(&f2t, &[1, 1])).unwrap();
        assert_eq!(qv, f2t.one());
        assert_eq!(fv, f2t.one());
        assert!(b.evaluate_polar(&v(&f2t, &[1]), &v(&f2t, &[1, 1])).is_err());
    }

    #[test]
    fn radicals() {
        let k = q();
        assert!(QuadraticSpace::diag_i64(&k, &[1, -1]).radical_check().1);
        let f2t = Field::rational_functions(Field::PrimeField(2), "t");
        let (rad, ok) = QuadraticSpace::diag_i64(&f2t, &[1, 1]).radical_check();
        assert_eq!(rad.len(), 2);
        assert!(!ok);
        let t = f2t.t().unwrap();
        let q4 = QuadraticSpace::binary_blocks(&f2t, &[(f2t.one(), f2t.one()), (t, f2t.one())]);
        let (rad, ok) = q4.radical_check();
        assert!(rad.is_empty() && ok);
    }

    #[test]
    fn diagonalize_examples() {
        let k = q();
        let h = QuadraticSpace::hyperbolic(&k, 1);
        let (b, d) = h.diagonalize().unwrap();
        assert!(k.is_square(&k.neg(&k.mul(&d[0], &d[1]))).unwrap().0);
        let cols: Vec<Vector> = linalg::transpose(&b);
        for (c, a) in cols.iter().zip(&d) {
            assert_eq!(&h.eval(c), a);
        }
        let g = vec![v(&k, &[2, 1]), v(&k, &[1, 2])];
        let (_, d) = QuadraticSpace::from_gram(&k, &g).unwrap().diagonalize().unwrap();
        assert_eq!(d, vec![k.from_i64(2), k.from_ratio(3, 2)]);
    }

    #[test]
    fn compose_and_pfister() {
        let k = q();
        let p = QuadraticSpace::pfister(&k, &[k.from_i64(-1), k.from_i64(7)]).unwrap();
        assert_eq!(p.diagonal_entries().unwrap(), v(&k, &[1, 1, -7, -7]));
        let p3 = QuadraticSpace::pfister(&k, &v(&k, &[-1, -1, -7])).unwrap();
        assert_eq!(p3.diagonal_entries().unwrap(), v(&k, &[1, 1, 1, 1, 7, 7, 7, 7]));
        let q8 = QuadraticSpace::diag_i64(&k, &[1, 1, 1, 7]).diagonal_multiple(&v(&k, &[1, 1])).unwrap();
        assert_eq!(q8.diagonal_entries().unwrap(), v(&k, &[1, 1, 1, 7, 1, 1, 1, 7]));
        let q17 = QuadraticSpace::diag_i64(&k, &[1, 7]);
        let s = q17.orthogonal_sum(&q17.negate()).unwrap();
        assert_eq!(s.diagonal_entries().unwrap(), v(&k, &[1, 7, -1, -7]));
    }

    #[test]
    fn json_round_trip() {
        let k = Field::laurent(q()).unwrap();
        let f = QuadraticSpace::from_json(&serde_json::json!({"field": "Q((t))", "diag": ["t", "-7*t", 1]})).unwrap();
        assert_eq!(f.field, k);
        assert_eq!(QuadraticSpace::from_json(&f.to_json()).unwrap(), f);
        let s = QuadraticSpace::from_json(&serde_json::json!({"sum": [{"diag": [1, 1]}, {"scale": 2, "form": {"pfister": [-1]}}]})).unwrap();
        assert_eq!(s.diagonal_entries().unwrap(), v(&q(), &[1, 1, 2, 2]));
    }
}
