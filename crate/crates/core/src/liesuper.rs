//! Finite-dimensional Lie superalgebras given by an ordered homogeneous basis
//! and exact structure constants, with `gl(m|n)` builders, rational points of
//! the reduced group `GL(m)×GL(n)` and their adjoint action.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::qmatrix::{self, QMat};
use crate::superpoly::{Parity, Signature, SuperPolynomial};
use crate::{qi, Error, Result, Q};

/// Lie superalgebra via structure constants `[b_i, b_j] = Σ_k c_{ij}^k b_k`.
///
/// The basis is ordered with all even elements before all odd ones, which is
/// also the PBW order used downstream.
#[derive(Debug)]
pub struct LieSuperAlgebra {
    basis: Vec<(String, Parity)>,
    /// Sparse rows: `c[i][j]` lists the nonzero `(k, c_{ij}^k)`.
    c: Vec<Vec<Vec<(usize, Q)>>>,
    /// `(m, n)` when this algebra was built as `gl(m|n)`; enables the matrix
    /// realization used by the adjoint action.
    gl_shape: Option<(usize, usize)>,
}

impl LieSuperAlgebra {
    pub fn from_structure_constants(
        basis: Vec<(String, Parity)>,
        c: Vec<Vec<Vec<(usize, Q)>>>,
    ) -> Result<LieSuperAlgebra> {
        let alg = LieSuperAlgebra {
            basis,
            c,
            gl_shape: None,
        };
        alg.validate()?;
        Ok(alg)
    }

    /// `gl(m|n)`: basis `E_ij`, odd iff exactly one of `i`, `j` exceeds `m`.
    /// Even elements (both indices in the same block) come first; odd
    /// elements follow, upper block then lower block, row-major throughout.
    /// Structure constants come from the matrix supercommutator
    /// `XY − (−1)^{|X||Y|} YX`.
    pub fn gl(m: usize, n: usize) -> LieSuperAlgebra {
        assert!(m + n >= 1);
        let d = m + n;
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        // even: block-diagonal positions
        for i in 0..m {
            for j in 0..m {
                pairs.push((i, j));
            }
        }
        for i in m..d {
            for j in m..d {
                pairs.push((i, j));
            }
        }
        // odd: upper-right then lower-left block
        for i in 0..m {
            for j in m..d {
                pairs.push((i, j));
            }
        }
        for i in m..d {
            for j in 0..m {
                pairs.push((i, j));
            }
        }
        let parity_of = |&(i, j): &(usize, usize)| {
            if (i < m) == (j < m) {
                Parity::Even
            } else {
                Parity::Odd
            }
        };
        let index: BTreeMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let basis: Vec<(String, Parity)> = pairs
            .iter()
            .map(|p| (format!("E{}{}", p.0 + 1, p.1 + 1), parity_of(p)))
            .collect();
        let dim = pairs.len();
        let mut c = vec![vec![Vec::new(); dim]; dim];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                let both_odd = basis[a].1 == Parity::Odd && basis[b].1 == Parity::Odd;
                let mut row: BTreeMap<usize, Q> = BTreeMap::new();
                // E_ij E_kl = δ_jk E_il
                if j == k {
                    *row.entry(index[&(i, l)]).or_insert_with(Q::zero) += Q::one();
                }
                // ∓ E_kl E_ij = ∓ δ_li E_kj
                if l == i {
                    let sgn = if both_odd { Q::one() } else { -Q::one() };
                    *row.entry(index[&(k, j)]).or_insert_with(Q::zero) += sgn;
                }
                c[a][b] = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            }
        }
        LieSuperAlgebra {
            basis,
            c,
            gl_shape: Some((m, n)),
        }
    }

    fn validate(&self) -> Result<()> {
        let dim = self.basis.len();
        if self.c.len() != dim || self.c.iter().any(|row| row.len() != dim) {
            return Err(Error::DimensionMismatch);
        }
        // brackets must be parity-homogeneous and close the even part
        for i in 0..dim {
            for j in 0..dim {
                let p = self.parity(i).xor(self.parity(j));
                for &(k, _) in &self.c[i][j] {
                    if self.parity(k) != p {
                        return Err(Error::BadStructure(format!(
                            "parity of [{}, {}]",
                            self.name(i),
                            self.name(j)
                        )));
                    }
                }
            }
        }
        self.check_antisymmetry().map_err(Error::BadStructure)?;
        self.check_jacobi().map_err(Error::BadStructure)?;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].0
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.basis[i].1
    }

    pub fn basis(&self) -> &[(String, Parity)] {
        &self.basis
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|(n, _)| n == name)
    }

    pub fn gl_shape(&self) -> Option<(usize, usize)> {
        self.gl_shape
    }

    pub fn even_count(&self) -> usize {
        self.basis.iter().filter(|(_, p)| *p == Parity::Even).count()
    }

    pub fn odd_count(&self) -> usize {
        self.dim() - self.even_count()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.c[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::one();
        v
    }

    /// Bilinear bracket of coordinate vectors.
    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Result<Vec<Q>> {
        if x.len() != self.dim() || y.len() != self.dim() {
            return Err(Error::DimensionMismatch);
        }
        let mut out = vec![Q::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi.clone() * yj;
                for &(k, ref ck) in &self.c[i][j] {
                    out[k] += f.clone() * ck;
                }
            }
        }
        Ok(out)
    }

    /// `[b_i,b_j] + (−1)^{|i||j|}[b_j,b_i] = 0` for all basis pairs.
    pub fn check_antisymmetry(&self) -> std::result::Result<(), String> {
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                let both_odd = self.parity(i).is_odd() && self.parity(j).is_odd();
                let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                for &(k, ref v) in &self.c[i][j] {
                    *acc.entry(k).or_insert_with(Q::zero) += v.clone();
                }
                for &(k, ref v) in &self.c[j][i] {
                    let s = if both_odd { v.clone() } else { -v.clone() };
                    *acc.entry(k).or_insert_with(Q::zero) += s;
                }
                if acc.values().any(|v| !v.is_zero()) {
                    return Err(format!(
                        "graded antisymmetry at [{}, {}]",
                        self.name(i),
                        self.name(j)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Graded Jacobi identity, checked exactly on every basis triple:
    /// `(−1)^{|x||z|}[x,[y,z]] + (−1)^{|y||x|}[y,[z,x]] + (−1)^{|z||y|}[z,[x,y]] = 0`.
    pub fn check_jacobi(&self) -> std::result::Result<(), String> {
        let dim = self.dim();
        let sgn = |p: Parity, q: Parity| if p.is_odd() && q.is_odd() { -Q::one() } else { Q::one() };
        for x in 0..dim {
            for y in 0..dim {
                for z in 0..dim {
                    let mut acc = vec![Q::zero(); dim];
                    // each leading letter pairs in sign with the letter it
                    // cyclically jumped over
                    let cyclic = [(x, y, z, x, z), (y, z, x, y, x), (z, x, y, z, y)];
                    for &(a, b, c, s1, s2) in &cyclic {
                        let s = sgn(self.parity(s1), self.parity(s2));
                        for &(m, ref cm) in &self.c[b][c] {
                            for &(k, ref ck) in &self.c[a][m] {
                                acc[k] += s.clone() * cm * ck;
                            }
                        }
                    }
                    if acc.iter().any(|v| !v.is_zero()) {
                        return Err(format!(
                            "Jacobi at ({}, {}, {})",
                            self.name(x),
                            self.name(y),
                            self.name(z)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of a basis element in the defining representation (gl only).
    pub fn basis_matrix(&self, idx: usize) -> Result<QMat> {
        let (m, n) = self
            .gl_shape
            .ok_or_else(|| Error::Unsupported("matrix realization needs gl(m|n)".into()))?;
        let d = m + n;
        let name = &self.basis[idx].0;
        // names are E{i}{j} with 1-based single digits at desk scale
        let bytes = name.as_bytes();
        let i = (bytes[1] - b'1') as usize;
        let j = (bytes[2] - b'1') as usize;
        let mut mat = vec![vec![Q::zero(); d]; d];
        mat[i][j] = Q::one();
        Ok(mat)
    }

    pub fn coords_of_matrix(&self, mat: &QMat) -> Result<Vec<Q>> {
        let (m, n) = self
            .gl_shape
            .ok_or_else(|| Error::Unsupported("matrix realization needs gl(m|n)".into()))?;
        let d = m + n;
        let mut out = vec![Q::zero(); self.dim()];
        for idx in 0..self.dim() {
            let name = &self.basis[idx].0;
            let bytes = name.as_bytes();
            let i = (bytes[1] - b'1') as usize;
            let j = (bytes[2] - b'1') as usize;
            out[idx] = mat[i][j].clone();
        }
        let _ = d;
        Ok(out)
    }

    /// `Ad(h)x = h·X·h⁻¹` in the matrix realization.
    pub fn adjoint(&self, h: &ReducedPoint, x: &[Q]) -> Result<Vec<Q>> {
        let (m, n) = self
            .gl_shape
            .ok_or_else(|| Error::Unsupported("adjoint needs gl(m|n)".into()))?;
        if (h.m, h.n) != (m, n) {
            return Err(Error::DimensionMismatch);
        }
        let xm = self.coords_to_matrix(x)?;
        let hinv = h.inverse_matrix();
        let conj = qmatrix::mul(&qmatrix::mul(&h.mat, &xm), &hinv);
        self.coords_of_matrix(&conj)
    }

    fn coords_to_matrix(&self, x: &[Q]) -> Result<QMat> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch);
        }
        let (m, n) = self
            .gl_shape
            .ok_or_else(|| Error::Unsupported("matrix realization needs gl(m|n)".into()))?;
        let d = m + n;
        let mut mat = vec![vec![Q::zero(); d]; d];
        for (idx, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let bytes = self.basis[idx].0.as_bytes();
            let i = (bytes[1] - b'1') as usize;
            let j = (bytes[2] - b'1') as usize;
            mat[i][j] += c.clone();
        }
        Ok(mat)
    }

    /// `h⁻¹.x` for a generic diagonal point of `GL(1)×GL(1)`: coefficients are
    /// Laurent monomials in the reduced coordinates. Specializing at a
    /// rational point reproduces `adjoint(h⁻¹, x)`.
    pub fn generic_adjoint(
        &self,
        x: &[Q],
        reduced_sig: &Signature,
    ) -> Result<Vec<SuperPolynomial>> {
        if self.gl_shape != Some((1, 1)) {
            return Err(Error::Unsupported(
                "generic adjoint is implemented for gl(1|1)".into(),
            ));
        }
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch);
        }
        // h = diag(a11, a22): (h⁻¹ X h)_ij = (a_jj / a_ii) x_ij
        let mut out = Vec::with_capacity(self.dim());
        for idx in 0..self.dim() {
            let bytes = self.basis[idx].0.as_bytes();
            let i = (bytes[1] - b'1') as i64;
            let j = (bytes[2] - b'1') as i64;
            let mut exps: Vec<(u32, i64)> = Vec::new();
            if i != j {
                exps.push((j as u32, 1));
                exps.push((i as u32, -1));
            }
            out.push(SuperPolynomial::monomial(reduced_sig, &exps, x[idx].clone())?);
        }
        Ok(out)
    }

    /// First-order check that the adjoint action differentiates to the
    /// bracket: over dual numbers (`t² = 0`),
    /// `Ad(1 + tZ)X = X + t·ad(Z)X` exactly, for every even basis `Z`.
    pub fn check_ad_differential(&self) -> std::result::Result<(), String> {
        let Some((m, n)) = self.gl_shape else {
            return Err("matrix realization needed".into());
        };
        let d = m + n;
        for z in 0..self.dim() {
            if self.parity(z).is_odd() {
                continue;
            }
            let zm = self.basis_matrix(z).unwrap();
            for x in 0..self.dim() {
                let xm = self.basis_matrix(x).unwrap();
                // (I + tZ) X (I − tZ) = X + t(ZX − XZ), computed as the
                // t-component of the dual-number product
                let id = qmatrix::identity(d);
                let lhs0 = qmatrix::mul(&id, &xm);
                let mut t_part = qmatrix::mul(&zm, &xm);
                let xz = qmatrix::mul(&xm, &zm);
                for i in 0..d {
                    for j in 0..d {
                        t_part[i][j] -= xz[i][j].clone();
                    }
                }
                let got = self.coords_of_matrix(&t_part).unwrap();
                let mut want = vec![Q::zero(); self.dim()];
                for &(k, ref c) in self.bracket_basis(z, x) {
                    want[k] += c.clone();
                }
                if got != want || lhs0 != xm {
                    return Err(format!(
                        "Ad(exp(t{})) differs from id + t·ad at {}",
                        self.name(z),
                        self.name(x)
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let basis: Vec<serde_json::Value> = self
            .basis
            .iter()
            .map(|(n, p)| {
                serde_json::json!({
                    "name": n,
                    "parity": if p.is_odd() { "odd" } else { "even" },
                })
            })
            .collect();
        let mut constants = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for &(k, ref v) in &self.c[i][j] {
                    constants.push(serde_json::json!({
                        "i": i, "j": j, "k": k, "c": v.to_string(),
                    }));
                }
            }
        }
        serde_json::json!({ "basis": basis, "constants": constants })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<LieSuperAlgebra> {
        let basis_arr = v
            .get("basis")
            .and_then(|b| b.as_array())
            .ok_or_else(|| Error::Invalid("missing basis".into()))?;
        let mut basis = Vec::new();
        for b in basis_arr {
            let name = b
                .get("name")
                .and_then(|n| n.as_str())
                .ok_or_else(|| Error::Invalid("basis name".into()))?;
            let parity = match b.get("parity").and_then(|p| p.as_str()) {
                Some("even") => Parity::Even,
                Some("odd") => Parity::Odd,
                _ => return Err(Error::Invalid("basis parity".into())),
            };
            basis.push((name.to_string(), parity));
        }
        let dim = basis.len();
        let mut c = vec![vec![Vec::new(); dim]; dim];
        let constants = v
            .get("constants")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Invalid("missing constants".into()))?;
        for entry in constants {
            let geti = |key: &str| -> Result<usize> {
                entry
                    .get(key)
                    .and_then(|x| x.as_u64())
                    .map(|x| x as usize)
                    .ok_or_else(|| Error::Invalid(format!("constant index `{key}`")))
            };
            let (i, j, k) = (geti("i")?, geti("j")?, geti("k")?);
            let val: Q = entry
                .get("c")
                .and_then(|x| x.as_str())
                .ok_or_else(|| Error::Invalid("constant value".into()))?
                .parse()
                .map_err(|_| Error::Invalid("constant value".into()))?;
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::DimensionMismatch);
            }
            c[i][j].push((k, val));
        }
        LieSuperAlgebra::from_structure_constants(basis, c)
    }
}

/// Invertible block-diagonal rational matrix: a rational point of the reduced
/// group `GL(m)×GL(n)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReducedPoint {
    m: usize,
    n: usize,
    mat: QMat,
}

impl ReducedPoint {
    pub fn block_diag(m_block: QMat, n_block: QMat) -> Result<ReducedPoint> {
        let m = m_block.len();
        let n = n_block.len();
        if m_block.iter().any(|r| r.len() != m) || n_block.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch);
        }
        if (m > 0 && qmatrix::invert(&m_block).is_none())
            || (n > 0 && qmatrix::invert(&n_block).is_none())
        {
            return Err(Error::Singular);
        }
        let d = m + n;
        let mut mat = vec![vec![Q::zero(); d]; d];
        for i in 0..m {
            for j in 0..m {
                mat[i][j] = m_block[i][j].clone();
            }
        }
        for i in 0..n {
            for j in 0..n {
                mat[m + i][m + j] = n_block[i][j].clone();
            }
        }
        Ok(ReducedPoint { m, n, mat })
    }

    /// Diagonal point; panics on a zero entry.
    pub fn diag(m: usize, n: usize, values: &[Q]) -> ReducedPoint {
        assert_eq!(values.len(), m + n);
        assert!(values.iter().all(|v| !v.is_zero()));
        let d = m + n;
        let mut mat = vec![vec![Q::zero(); d]; d];
        for (i, v) in values.iter().enumerate() {
            mat[i][i] = v.clone();
        }
        ReducedPoint { m, n, mat }
    }

    pub fn identity(m: usize, n: usize) -> ReducedPoint {
        ReducedPoint {
            m,
            n,
            mat: qmatrix::identity(m + n),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.mat[i][j]
    }

    pub fn matrix(&self) -> &QMat {
        &self.mat
    }

    pub fn is_identity(&self) -> bool {
        *self == ReducedPoint::identity(self.m, self.n)
    }

    pub fn multiply(&self, other: &ReducedPoint) -> Result<ReducedPoint> {
        if (self.m, self.n) != (other.m, other.n) {
            return Err(Error::DimensionMismatch);
        }
        Ok(ReducedPoint {
            m: self.m,
            n: self.n,
            mat: qmatrix::mul(&self.mat, &other.mat),
        })
    }

    pub fn inverse(&self) -> ReducedPoint {
        ReducedPoint {
            m: self.m,
            n: self.n,
            mat: self.inverse_matrix(),
        }
    }

    fn inverse_matrix(&self) -> QMat {
        if self.dim() == 0 {
            return Vec::new();
        }
        qmatrix::invert(&self.mat).expect("blocks invertible by construction")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .mat
            .iter()
            .map(|r| serde_json::Value::Array(r.iter().map(|v| v.to_string().into()).collect()))
            .collect();
        serde_json::json!({ "m": self.m, "n": self.n, "matrix": rows })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ReducedPoint> {
        let m = v.get("m").and_then(|x| x.as_u64()).ok_or_else(|| Error::Invalid("m".into()))?
            as usize;
        let n = v.get("n").and_then(|x| x.as_u64()).ok_or_else(|| Error::Invalid("n".into()))?
            as usize;
        let rows = v
            .get("matrix")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Invalid("matrix".into()))?;
        let d = m + n;
        if rows.len() != d {
            return Err(Error::DimensionMismatch);
        }
        let mut m_block = vec![vec![Q::zero(); m]; m];
        let mut n_block = vec![vec![Q::zero(); n]; n];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| Error::Invalid("matrix row".into()))?;
            if row.len() != d {
                return Err(Error::DimensionMismatch);
            }
            for (j, cell) in row.iter().enumerate() {
                let val: Q = cell
                    .as_str()
                    .ok_or_else(|| Error::Invalid("matrix entry".into()))?
                    .parse()
                    .map_err(|_| Error::Invalid("matrix entry".into()))?;
                match (i < m, j < m) {
                    (true, true) => m_block[i][j] = val,
                    (false, false) => n_block[i - m][j - m] = val,
                    _ if !val.is_zero() => {
                        return Err(Error::Invalid("off-block entry must be zero".into()))
                    }
                    _ => {}
                }
            }
        }
        ReducedPoint::block_diag(m_block, n_block)
    }
}

/// Convenience: diag(2,3)-style points for gl(1|1) tests.
pub fn diag11(a: i64, b: i64) -> ReducedPoint {
    ReducedPoint::diag(1, 1, &[qi(a), qi(b)])
}
