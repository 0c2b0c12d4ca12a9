//! Universal enveloping superalgebra `U(g)` with a rewrite-based PBW normal
//! form, its super Hopf structure, the symmetrizer `γ: Λ(g₁) → U(g)` and the
//! `U(g₀) ⊗ Λ(g₁)` splitting it induces.
//!
//! The PBW order is the basis order of `g` with every even element before
//! every odd one, so the `U(g₀)`-leading part of a normal form is a literal
//! prefix of the exponent vector.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use num::{One, Zero};

use crate::liesuper::{LieSuperAlgebra, ReducedPoint};
use crate::parse::Ast;
use crate::superpoly::Parity;
use crate::{q, Error, Result, Q};

/// Exponent vector over the ordered basis of `g`; odd exponents are `0` or
/// `1` by the rewrite rules.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PbwMonomial(pub Vec<u32>);

impl PbwMonomial {
    pub fn one(dim: usize) -> PbwMonomial {
        PbwMonomial(vec![0; dim])
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    fn expand(&self) -> Vec<u16> {
        let mut word = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                word.push(i as u16);
            }
        }
        word
    }
}

/// Strictly increasing subset of the odd basis, as a bitmask over odd
/// positions (`bit i` = `i`-th odd basis element).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WedgeMonomial(pub u32);

impl WedgeMonomial {
    pub fn empty() -> WedgeMonomial {
        WedgeMonomial(0)
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn parity(&self) -> Parity {
        if self.len() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn indices(&self) -> Vec<u32> {
        (0..32).filter(|i| self.0 & (1 << i) != 0).collect()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.0 & (1 << i) != 0
    }

    /// Disjoint union with the unshuffle sign `(−1)^{#{(a,b): a∈self, b∈other, a>b}}`,
    /// or `None` when the supports overlap.
    pub fn union_sign(&self, other: &WedgeMonomial) -> Option<(WedgeMonomial, i64)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        for b in other.indices() {
            inversions += (self.0 >> (b + 1)).count_ones();
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((WedgeMonomial(self.0 | other.0), sign))
    }

    /// Enumerate all `(left, right, sign)` splits with the exterior-coproduct
    /// unshuffle sign, so that `left ∪ right = self`.
    pub fn splits(&self) -> Vec<(WedgeMonomial, WedgeMonomial, i64)> {
        let idx = self.indices();
        let k = idx.len();
        let mut out = Vec::with_capacity(1 << k);
        for pick in 0u32..(1 << k) {
            let mut left = 0u32;
            for (pos, &i) in idx.iter().enumerate() {
                if pick & (1 << pos) != 0 {
                    left |= 1 << i;
                }
            }
            let left = WedgeMonomial(left);
            let right = WedgeMonomial(self.0 & !left.0);
            let (_, sign) = left.union_sign(&right).expect("disjoint by construction");
            out.push((left, right, sign));
        }
        out
    }

    pub fn label(&self, alg: &LieSuperAlgebra) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let even = alg.even_count();
        self.indices()
            .iter()
            .map(|&i| alg.name(even + i as usize).to_string())
            .collect::<Vec<_>>()
            .join("^")
    }

    pub fn from_label(alg: &LieSuperAlgebra, label: &str) -> Result<WedgeMonomial> {
        if label == "1" || label.is_empty() {
            return Ok(WedgeMonomial::empty());
        }
        let even = alg.even_count();
        let mut mask = 0u32;
        let mut last: Option<usize> = None;
        for part in label.split('^') {
            let idx = alg
                .index_of(part)
                .ok_or_else(|| Error::UnknownGenerator(part.to_string()))?;
            if idx < even {
                return Err(Error::Invalid(format!("`{part}` is not odd")));
            }
            let pos = idx - even;
            if let Some(prev) = last {
                if pos <= prev {
                    return Err(Error::Invalid("wedge factors must be strictly increasing".into()));
                }
            }
            last = Some(pos);
            mask |= 1 << pos;
        }
        Ok(WedgeMonomial(mask))
    }
}

/// Element of `U(g)`, stored in PBW normal form only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UElement {
    terms: BTreeMap<PbwMonomial, Q>,
}

impl UElement {
    pub fn zero() -> UElement {
        UElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &UElement) -> UElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &UElement) -> UElement {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> UElement {
        if c.is_zero() {
            return UElement::zero();
        }
        UElement {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c))
                .collect(),
        }
    }
}

/// Graded tensor square `U(g) ⊗ U(g)`, with the Koszul product
/// `(u₁⊗u₂)(v₁⊗v₂) = (−1)^{|u₂||v₁|} u₁v₁ ⊗ u₂v₂`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UTensor {
    terms: BTreeMap<(PbwMonomial, PbwMonomial), Q>,
}

impl UTensor {
    pub fn zero() -> UTensor {
        UTensor::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(PbwMonomial, PbwMonomial), &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: (PbwMonomial, PbwMonomial), c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &UTensor) -> UTensor {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &UTensor) -> UTensor {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

/// Context object carrying the algebra, the PBW conventions and the word
/// normalization cache. All `U(g)` operations live here.
pub struct EnvelopingAlgebra {
    alg: Arc<LieSuperAlgebra>,
    cache: Mutex<HashMap<Vec<u16>, UElement>>,
}

const CACHE_MAX_WORD: usize = 6;

impl EnvelopingAlgebra {
    pub fn new(alg: Arc<LieSuperAlgebra>) -> Result<EnvelopingAlgebra> {
        let even = alg.even_count();
        for i in 0..alg.dim() {
            let should_be = if i < even { Parity::Even } else { Parity::Odd };
            if alg.parity(i) != should_be {
                return Err(Error::Unsupported(
                    "PBW context requires the basis to list even elements first".into(),
                ));
            }
        }
        Ok(EnvelopingAlgebra {
            alg,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &Arc<LieSuperAlgebra> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn one(&self) -> UElement {
        let mut u = UElement::zero();
        u.add_term(PbwMonomial::one(self.dim()), Q::one());
        u
    }

    pub fn constant(&self, c: Q) -> UElement {
        let mut u = UElement::zero();
        u.add_term(PbwMonomial::one(self.dim()), c);
        u
    }

    pub fn basis_element(&self, i: usize) -> UElement {
        let mut m = PbwMonomial::one(self.dim());
        m.0[i] = 1;
        let mut u = UElement::zero();
        u.add_term(m, Q::one());
        u
    }

    pub fn from_vector(&self, x: &[Q]) -> UElement {
        let mut u = UElement::zero();
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                let mut m = PbwMonomial::one(self.dim());
                m.0[i] = 1;
                u.add_term(m, c.clone());
            }
        }
        u
    }

    pub fn mono_parity(&self, m: &PbwMonomial) -> Parity {
        let even = self.alg.even_count();
        let odd: u32 = m.0[even..].iter().sum();
        if odd % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn homogeneous_part(&self, u: &UElement, p: Parity) -> UElement {
        UElement {
            terms: u
                .terms
                .iter()
                .filter(|(m, _)| self.mono_parity(m) == p)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn odd_mask(&self, m: &PbwMonomial) -> WedgeMonomial {
        let even = self.alg.even_count();
        let mut mask = 0u32;
        for (i, &e) in m.0[even..].iter().enumerate() {
            if e != 0 {
                mask |= 1 << i;
            }
        }
        WedgeMonomial(mask)
    }

    fn word_parity(&self, g: u16) -> bool {
        self.alg.parity(g as usize).is_odd()
    }

    /// Rewrite a word of basis elements into PBW normal form using
    /// `b_j b_i = (−1)^{|i||j|} b_i b_j + [b_j, b_i]` for `j > i` and
    /// `b² = ½[b,b]` for odd `b`. The result is independent of the rewrite
    /// order by the PBW theorem; confluence is spot-checked in the suites.
    pub fn normal_order(&self, word: &[u16]) -> UElement {
        if word.len() <= CACHE_MAX_WORD {
            if let Some(hit) = self.cache.lock().unwrap().get(word) {
                return hit.clone();
            }
        }
        let result = self.normal_order_uncached(word);
        if word.len() <= CACHE_MAX_WORD {
            self.cache
                .lock()
                .unwrap()
                .insert(word.to_vec(), result.clone());
        }
        result
    }

    fn normal_order_uncached(&self, word: &[u16]) -> UElement {
        for i in 0..word.len().saturating_sub(1) {
            let (a, b) = (word[i], word[i + 1]);
            if a == b && self.word_parity(a) {
                // odd square: b² = ½[b,b]
                let mut out = UElement::zero();
                for &(k, ref c) in self.alg.bracket_basis(a as usize, a as usize) {
                    let mut shorter = word[..i].to_vec();
                    shorter.push(k as u16);
                    shorter.extend_from_slice(&word[i + 2..]);
                    out = out.add(&self.normal_order(&shorter).scale(&(q(1, 2) * c)));
                }
                return out;
            }
            if a > b {
                let mut swapped = word.to_vec();
                swapped.swap(i, i + 1);
                let sign = if self.word_parity(a) && self.word_parity(b) {
                    -Q::one()
                } else {
                    Q::one()
                };
                let mut out = self.normal_order(&swapped).scale(&sign);
                for &(k, ref c) in self.alg.bracket_basis(a as usize, b as usize) {
                    let mut shorter = word[..i].to_vec();
                    shorter.push(k as u16);
                    shorter.extend_from_slice(&word[i + 2..]);
                    out = out.add(&self.normal_order(&shorter).scale(c));
                }
                return out;
            }
        }
        // already ordered with no odd repeats
        let mut mono = PbwMonomial::one(self.dim());
        for &g in word {
            mono.0[g as usize] += 1;
        }
        let mut u = UElement::zero();
        u.add_term(mono, Q::one());
        u
    }

    pub fn mul(&self, u: &UElement, v: &UElement) -> UElement {
        let mut out = UElement::zero();
        for (mu, cu) in &u.terms {
            let wu = mu.expand();
            for (mv, cv) in &v.terms {
                let mut word = wu.clone();
                word.extend(mv.expand());
                out = out.add(&self.normal_order(&word).scale(&(cu.clone() * cv)));
            }
        }
        out
    }

    pub fn mul_many(&self, factors: &[&UElement]) -> UElement {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// `ε`: the coefficient of the empty monomial.
    pub fn counit(&self, u: &UElement) -> Q {
        u.coeff(&PbwMonomial::one(self.dim()))
    }

    /// Coproduct: primitive on basis vectors, extended as an algebra morphism
    /// into the graded tensor square.
    pub fn coproduct(&self, u: &UElement) -> UTensor {
        let one = PbwMonomial::one(self.dim());
        let mut out = UTensor::zero();
        for (m, c) in &u.terms {
            let mut acc = UTensor::zero();
            acc.add_term((one.clone(), one.clone()), c.clone());
            for g in m.expand() {
                let mut bg = PbwMonomial::one(self.dim());
                bg.0[g as usize] = 1;
                let mut primitive = UTensor::zero();
                primitive.add_term((bg.clone(), one.clone()), Q::one());
                primitive.add_term((one.clone(), bg), Q::one());
                acc = self.tensor_mul(&acc, &primitive);
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn tensor_of(&self, u: &UElement, v: &UElement) -> UTensor {
        let mut out = UTensor::zero();
        for (mu, cu) in &u.terms {
            for (mv, cv) in &v.terms {
                out.add_term((mu.clone(), mv.clone()), cu.clone() * cv);
            }
        }
        out
    }

    pub fn tensor_mul(&self, x: &UTensor, y: &UTensor) -> UTensor {
        let mut out = UTensor::zero();
        for ((a1, a2), ca) in &x.terms {
            for ((b1, b2), cb) in &y.terms {
                let koszul = self.mono_parity(a2).is_odd() && self.mono_parity(b1).is_odd();
                let left = self.mul_monomials(a1, b1);
                let right = self.mul_monomials(a2, b2);
                let mut c = ca.clone() * cb;
                if koszul {
                    c = -c;
                }
                for (m1, c1) in &left.terms {
                    for (m2, c2) in &right.terms {
                        out.add_term((m1.clone(), m2.clone()), c.clone() * c1 * c2);
                    }
                }
            }
        }
        out
    }

    fn mul_monomials(&self, a: &PbwMonomial, b: &PbwMonomial) -> UElement {
        let mut word = a.expand();
        word.extend(b.expand());
        self.normal_order(&word)
    }

    /// Antipode: `S(x) = −x` on `g`, extended as a graded anti-automorphism
    /// `S(uv) = (−1)^{|u||v|} S(v) S(u)`. On a word of length `k` with `r`
    /// odd letters this is `(−1)^{k + r(r−1)/2}` times the reversed word.
    pub fn antipode(&self, u: &UElement) -> UElement {
        let mut out = UElement::zero();
        for (m, c) in &u.terms {
            let mut word = m.expand();
            let r = word
                .iter()
                .filter(|&&g| self.word_parity(g))
                .count() as u32;
            let exponent = word.len() as u32 + r * (r - 1) / 2;
            word.reverse();
            let mut coeff = c.clone();
            if exponent % 2 == 1 {
                coeff = -coeff;
            }
            out = out.add(&self.normal_order(&word).scale(&coeff));
        }
        out
    }

    /// Symmetrizer `γ(X₁∧⋯∧X_p) = (1/p!) Σ_τ (−1)^{|τ|} X_{τ(1)}⋯X_{τ(p)}`.
    pub fn symmetrizer(&self, w: WedgeMonomial) -> UElement {
        let even = self.alg.even_count();
        let positions: Vec<u16> = w.indices().iter().map(|&i| (even + i as usize) as u16).collect();
        let p = positions.len();
        if p == 0 {
            return self.one();
        }
        let mut out = UElement::zero();
        for perm in positions.iter().copied().permutations(p) {
            let mut inversions = 0;
            for i in 0..p {
                for j in i + 1..p {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { Q::one() } else { -Q::one() };
            out = out.add(&self.normal_order(&perm).scale(&sign));
        }
        out.scale(&(Q::one() / crate::fact(p as u64)))
    }

    /// Inverse of `X ⊗ w ↦ X·γ(w)`: splits `u` as a left `U(g₀)`-combination
    /// of symmetrized wedges, by elimination downward in odd degree (the
    /// leading odd monomial of `γ(w)` is `w` itself with coefficient 1).
    pub fn pbw_split(&self, u: &UElement) -> BTreeMap<WedgeMonomial, UElement> {
        let odd_count = self.alg.odd_count() as u32;
        let even = self.alg.even_count();
        let mut remaining = u.clone();
        let mut result: BTreeMap<WedgeMonomial, UElement> = BTreeMap::new();
        for d in (0..=odd_count).rev() {
            let mut level: BTreeMap<WedgeMonomial, UElement> = BTreeMap::new();
            for (m, c) in &remaining.terms {
                let odd_deg: u32 = m.0[even..].iter().sum();
                if odd_deg == d {
                    let mask = self.odd_mask(m);
                    let mut even_mono = m.clone();
                    for e in even_mono.0[even..].iter_mut() {
                        *e = 0;
                    }
                    level
                        .entry(mask)
                        .or_insert_with(UElement::zero)
                        .add_term(even_mono, c.clone());
                }
            }
            for (w, coeff) in level {
                remaining = remaining.sub(&self.mul(&coeff, &self.symmetrizer(w)));
                if !coeff.is_zero() {
                    result.insert(w, coeff);
                }
            }
        }
        assert!(remaining.is_zero(), "PBW split must terminate exactly");
        result
    }

    /// `X ⊗ w ↦ X·γ(w)`, the isomorphism of Thm.-gamma type split form.
    pub fn gamma_hat(&self, split: &BTreeMap<WedgeMonomial, UElement>) -> UElement {
        let mut out = UElement::zero();
        for (w, coeff) in split {
            out = out.add(&self.mul(coeff, &self.symmetrizer(*w)));
        }
        out
    }

    /// Multiplicative extension of `Ad(h)` to `U(g)`; an algebra automorphism.
    pub fn u_adjoint(&self, h: &ReducedPoint, u: &UElement) -> Result<UElement> {
        if h.is_identity() {
            return Ok(u.clone());
        }
        let dim = self.dim();
        let mut rows: Vec<Vec<Q>> = Vec::with_capacity(dim);
        for i in 0..dim {
            rows.push(self.alg.adjoint(h, &self.alg.basis_vector(i))?);
        }
        let mut out = UElement::zero();
        for (m, c) in &u.terms {
            // expand Π_j (Σ_k rows[g_j][k] b_k) into words
            let mut partial: Vec<(Q, Vec<u16>)> = vec![(c.clone(), Vec::new())];
            for g in m.expand() {
                let mut next = Vec::new();
                for (coeff, word) in &partial {
                    for (k, a) in rows[g as usize].iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        let mut w2 = word.clone();
                        w2.push(k as u16);
                        next.push((coeff.clone() * a, w2));
                    }
                }
                partial = next;
            }
            for (coeff, word) in partial {
                out = out.add(&self.normal_order(&word).scale(&coeff));
            }
        }
        Ok(out)
    }

    pub fn format(&self, u: &UElement) -> String {
        if u.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        let mut first = true;
        for (m, c) in u.terms.iter().rev() {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    s.push('-');
                }
                first = false;
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if mono == "1" {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{abs}*{mono}"));
            }
        }
        s
    }

    fn format_monomial(&self, m: &PbwMonomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.alg.name(i).to_string()
                } else {
                    format!("{}^{}", self.alg.name(i), e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn to_json(&self, u: &UElement) -> serde_json::Value {
        let list: Vec<serde_json::Value> = u
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: serde_json::Map<String, serde_json::Value> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|&(_, &e)| e > 0)
                    .map(|(i, &e)| (self.alg.name(i).to_string(), serde_json::json!(e)))
                    .collect();
                serde_json::json!({ "monomial": mono, "coeff": c.to_string() })
            })
            .collect();
        serde_json::Value::Array(list)
    }

    pub fn from_json(&self, v: &serde_json::Value) -> Result<UElement> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Invalid("U(g) JSON must be a list".into()))?;
        let mut out = UElement::zero();
        for item in arr {
            let mono = item
                .get("monomial")
                .and_then(|m| m.as_object())
                .ok_or_else(|| Error::Invalid("missing monomial".into()))?;
            let coeff: Q = item
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or_else(|| Error::Invalid("missing coeff".into()))?
                .parse()
                .map_err(|_| Error::Invalid("bad rational".into()))?;
            let mut m = PbwMonomial::one(self.dim());
            for (name, e) in mono {
                let i = self
                    .alg
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
                let e = e
                    .as_u64()
                    .ok_or_else(|| Error::Invalid("exponent must be a nonnegative integer".into()))?;
                if self.alg.parity(i).is_odd() && e > 1 {
                    return Err(Error::Invalid(format!("odd exponent on `{name}`")));
                }
                m.0[i] = e as u32;
            }
            out.add_term(m, coeff);
        }
        Ok(out)
    }

    /// Build an element from a parsed expression over the basis names.
    pub fn from_ast(&self, ast: &Ast) -> Result<UElement> {
        match ast {
            Ast::Num(c) => Ok(self.constant(c.clone())),
            Ast::Sym(name) => {
                let i = self
                    .alg
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
                Ok(self.basis_element(i))
            }
            Ast::Add(a, b) => Ok(self.from_ast(a)?.add(&self.from_ast(b)?)),
            Ast::Sub(a, b) => Ok(self.from_ast(a)?.sub(&self.from_ast(b)?)),
            Ast::Mul(a, b) => Ok(self.mul(&self.from_ast(a)?, &self.from_ast(b)?)),
            Ast::Neg(a) => Ok(self.from_ast(a)?.scale(&-Q::one())),
            Ast::Pow(a, e) => {
                if *e < 0 {
                    return Err(Error::Invalid("negative power in U(g)".into()));
                }
                let base = self.from_ast(a)?;
                let mut acc = self.one();
                for _ in 0..*e {
                    acc = self.mul(&acc, &base);
                }
                Ok(acc)
            }
        }
    }

    /// All PBW monomials of total degree `≤ bound`, in canonical order.
    pub fn monomials_up_to(&self, bound: u32) -> Vec<PbwMonomial> {
        let even = self.alg.even_count();
        let dim = self.dim();
        let mut out = Vec::new();
        let mut current = PbwMonomial::one(dim);
        fn rec(
            out: &mut Vec<PbwMonomial>,
            current: &mut PbwMonomial,
            pos: usize,
            left: u32,
            even: usize,
            dim: usize,
        ) {
            if pos == dim {
                out.push(current.clone());
                return;
            }
            let max = if pos < even { left } else { left.min(1) };
            for e in 0..=max {
                current.0[pos] = e;
                rec(out, current, pos + 1, left - e, even, dim);
            }
            current.0[pos] = 0;
        }
        rec(&mut out, &mut current, 0, bound, even, dim);
        out.sort();
        out
    }
}
