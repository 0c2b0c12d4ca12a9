//! Supercommutative Laurent polynomial arithmetic over exact rationals.
//!
//! A [`Signature`] fixes an ordered list of generators, each even or odd;
//! even generators may be flagged invertible, which allows negative (Laurent)
//! exponents. Canonical monomials list their factors in signature order and
//! all Koszul signs are produced during normalization to that order. Odd
//! generators square to zero.

pub mod derivation;
pub mod tensor;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};
use once_cell::sync::OnceCell;

use crate::{Error, Result, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Parity of a product of two homogeneous elements.
    pub fn xor(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub parity: Parity,
    pub invertible: bool,
}

#[derive(Debug, PartialEq, Eq)]
struct SigData {
    gens: Vec<GeneratorSpec>,
    /// Start index of each tensor slot after the first; empty for a plain
    /// (single slot) signature.
    splits: Vec<u32>,
}

/// Ordered list of named generators with parities and invertibility flags.
/// Cheap to clone; compared by content.
#[derive(Clone, Debug)]
pub struct Signature(Arc<SigData>);

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Signature {}

impl Signature {
    pub fn new(gens: Vec<(&str, Parity, bool)>) -> Result<Signature> {
        let gens: Vec<GeneratorSpec> = gens
            .into_iter()
            .map(|(name, parity, invertible)| GeneratorSpec {
                name: name.to_string(),
                parity,
                invertible,
            })
            .collect();
        Signature::from_specs(gens, Vec::new())
    }

    pub(crate) fn from_specs(gens: Vec<GeneratorSpec>, splits: Vec<u32>) -> Result<Signature> {
        for (i, g) in gens.iter().enumerate() {
            if g.invertible && g.parity == Parity::Odd {
                return Err(Error::Invalid(format!(
                    "odd generator `{}` cannot be invertible",
                    g.name
                )));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Invalid(format!("duplicate generator `{}`", g.name)));
            }
        }
        Ok(Signature(Arc::new(SigData { gens, splits })))
    }

    /// The empty signature: the scalar field.
    pub fn scalar() -> Signature {
        Signature(Arc::new(SigData {
            gens: Vec::new(),
            splits: Vec::new(),
        }))
    }

    pub fn len(&self) -> u32 {
        self.0.gens.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.0.gens.is_empty()
    }

    pub fn gens(&self) -> &[GeneratorSpec] {
        &self.0.gens
    }

    pub fn spec(&self, idx: u32) -> &GeneratorSpec {
        &self.0.gens[idx as usize]
    }

    pub fn name(&self, idx: u32) -> &str {
        &self.0.gens[idx as usize].name
    }

    pub fn parity(&self, idx: u32) -> Parity {
        self.0.gens[idx as usize].parity
    }

    pub fn invertible(&self, idx: u32) -> bool {
        self.0.gens[idx as usize].invertible
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.0.gens.iter().position(|g| g.name == name).map(|i| i as u32)
    }

    /// Tensor slot boundaries (start indices of slots after the first).
    pub fn splits(&self) -> &[u32] {
        &self.0.splits
    }

    pub fn odd_indices(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len()).filter(|&i| self.parity(i) == Parity::Odd)
    }
}

/// Exponent map in canonical form: entries sorted by generator index, all
/// exponents nonzero, odd exponents in `{0,1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuperMonomial {
    exps: Vec<(u32, i64)>,
}

impl SuperMonomial {
    pub fn one() -> SuperMonomial {
        SuperMonomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub(crate) fn from_sorted(exps: Vec<(u32, i64)>) -> SuperMonomial {
        debug_assert!(exps.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(exps.iter().all(|&(_, e)| e != 0));
        SuperMonomial { exps }
    }

    pub fn exponents(&self) -> &[(u32, i64)] {
        &self.exps
    }

    pub fn exponent(&self, idx: u32) -> i64 {
        self.exps
            .iter()
            .find(|&&(g, _)| g == idx)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn parity(&self, sig: &Signature) -> Parity {
        let odd = self
            .exps
            .iter()
            .filter(|&&(g, e)| sig.parity(g) == Parity::Odd && e % 2 != 0)
            .count();
        if odd % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Sum of absolute exponents; the natural degree bound for pairings.
    pub fn abs_degree(&self) -> i64 {
        self.exps.iter().map(|&(_, e)| e.abs()).sum()
    }

    fn validate(&self, sig: &Signature) -> Result<()> {
        for &(g, e) in &self.exps {
            if g >= sig.len() {
                return Err(Error::UnknownGenerator(format!("#{g}")));
            }
            match sig.parity(g) {
                Parity::Odd if !(0..=1).contains(&e) => {
                    return Err(Error::Invalid(format!(
                        "odd generator `{}` with exponent {e}",
                        sig.name(g)
                    )))
                }
                Parity::Even if e < 0 && !sig.invertible(g) => {
                    return Err(Error::NegativeExponent(sig.name(g).to_string()))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Product of two canonical monomials: the merged monomial and the Koszul
    /// sign from moving the odd factors of `b` into place, or `None` when a
    /// shared odd generator squares to zero.
    pub fn mul(sig: &Signature, a: &SuperMonomial, b: &SuperMonomial) -> Option<(SuperMonomial, i64)> {
        let odd_a: Vec<u32> = a
            .exps
            .iter()
            .filter(|&&(g, _)| sig.parity(g) == Parity::Odd)
            .map(|&(g, _)| g)
            .collect();
        let mut sign = 1i64;
        for &(g, _) in b.exps.iter().filter(|&&(g, _)| sig.parity(g) == Parity::Odd) {
            if odd_a.contains(&g) {
                return None;
            }
            let crossings = odd_a.iter().filter(|&&h| h > g).count();
            if crossings % 2 == 1 {
                sign = -sign;
            }
        }
        let mut exps = Vec::with_capacity(a.exps.len() + b.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < a.exps.len() || j < b.exps.len() {
            match (a.exps.get(i), b.exps.get(j)) {
                (Some(&(ga, ea)), Some(&(gb, eb))) if ga == gb => {
                    if ea + eb != 0 {
                        exps.push((ga, ea + eb));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(ga, ea)), Some(&(gb, _))) if ga < gb => {
                    exps.push((ga, ea));
                    i += 1;
                }
                (Some(_), Some(&(gb, eb))) => {
                    exps.push((gb, eb));
                    j += 1;
                }
                (Some(&(ga, ea)), None) => {
                    exps.push((ga, ea));
                    i += 1;
                }
                (None, Some(&(gb, eb))) => {
                    exps.push((gb, eb));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Some((SuperMonomial { exps }, sign))
    }

    pub fn format(&self, sig: &Signature) -> String {
        if self.exps.is_empty() {
            return "1".to_string();
        }
        self.exps
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    sig.name(g).to_string()
                } else {
                    format!("{}^{}", sig.name(g), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Element of the supercommutative Laurent polynomial algebra on a signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperPolynomial {
    sig: Signature,
    terms: BTreeMap<SuperMonomial, Q>,
}

impl SuperPolynomial {
    pub fn zero(sig: &Signature) -> SuperPolynomial {
        SuperPolynomial {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(sig: &Signature) -> SuperPolynomial {
        SuperPolynomial::constant(sig, Q::one())
    }

    pub fn constant(sig: &Signature, c: Q) -> SuperPolynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(SuperMonomial::one(), c);
        }
        SuperPolynomial {
            sig: sig.clone(),
            terms,
        }
    }

    pub fn gen(sig: &Signature, idx: u32) -> Result<SuperPolynomial> {
        SuperPolynomial::monomial(sig, &[(idx, 1)], Q::one())
    }

    pub fn gen_by_name(sig: &Signature, name: &str) -> Result<SuperPolynomial> {
        let idx = sig
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        SuperPolynomial::gen(sig, idx)
    }

    /// Single canonical monomial with the given exponents.
    pub fn monomial(sig: &Signature, exps: &[(u32, i64)], coeff: Q) -> Result<SuperPolynomial> {
        let mut sorted: Vec<(u32, i64)> = exps.iter().copied().filter(|&(_, e)| e != 0).collect();
        sorted.sort_by_key(|&(g, _)| g);
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Invalid("repeated generator in exponent map".into()));
            }
        }
        let mono = SuperMonomial::from_sorted(sorted);
        mono.validate(sig)?;
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        Ok(SuperPolynomial {
            sig: sig.clone(),
            terms,
        })
    }

    pub(crate) fn from_terms<I>(sig: &Signature, iter: I) -> SuperPolynomial
    where
        I: IntoIterator<Item = (SuperMonomial, Q)>,
    {
        let mut p = SuperPolynomial::zero(sig);
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SuperMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &SuperMonomial) -> Q {
        self.terms.get(mono).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&SuperMonomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn abs_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.abs_degree()).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, mono: SuperMonomial, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_sig(&self, other: &SuperPolynomial) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    pub fn add(&self, other: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.check_sig(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SuperPolynomial {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, c: &Q) -> SuperPolynomial {
        if c.is_zero() {
            return SuperPolynomial::zero(&self.sig);
        }
        self.map_coeffs(|x| x.clone() * c)
    }

    fn map_coeffs<F: Fn(&Q) -> Q>(&self, f: F) -> SuperPolynomial {
        SuperPolynomial {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect(),
        }
    }

    /// Supercommutative product; for homogeneous `u`, `v` satisfies
    /// `u·v = (−1)^{|u||v|} v·u`, and odd squares vanish.
    pub fn mul(&self, other: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.check_sig(other)?;
        let mut out = SuperPolynomial::zero(&self.sig);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, sign)) = SuperMonomial::mul(&self.sig, ma, mb) {
                    let mut c = ca.clone() * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(m, c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<SuperPolynomial> {
        let mut out = SuperPolynomial::one(&self.sig);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `Some(parity)` when every monomial has that parity; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity(&self.sig));
        match it.next() {
            None => Some(Parity::Even),
            Some(p) => {
                if it.all(|q| q == p) {
                    Some(p)
                } else {
                    None
                }
            }
        }
    }

    pub fn homogeneous_part(&self, p: Parity) -> SuperPolynomial {
        SuperPolynomial {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.parity(&self.sig) == p)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Left partial derivative with respect to generator `g`.
    ///
    /// Even generators follow the power rule, including negative exponents;
    /// for an odd generator the derivative of a canonical monomial is zero
    /// unless `g` occurs, in which case `g` is removed and the sign is
    /// `(−1)^(number of odd factors preceding g)`.
    pub fn derive(&self, g: u32) -> Result<SuperPolynomial> {
        if g >= self.sig.len() {
            return Err(Error::UnknownGenerator(format!("#{g}")));
        }
        let mut out = SuperPolynomial::zero(&self.sig);
        for (m, c) in &self.terms {
            match self.sig.parity(g) {
                Parity::Even => {
                    let e = m.exponent(g);
                    if e == 0 {
                        continue;
                    }
                    let exps: Vec<(u32, i64)> = m
                        .exps
                        .iter()
                        .filter_map(|&(h, eh)| {
                            if h == g {
                                if eh == 1 {
                                    None
                                } else {
                                    Some((h, eh - 1))
                                }
                            } else {
                                Some((h, eh))
                            }
                        })
                        .collect();
                    out.add_term(SuperMonomial::from_sorted(exps), c.clone() * crate::qi(e));
                }
                Parity::Odd => {
                    if m.exponent(g) == 0 {
                        continue;
                    }
                    let preceding = m
                        .exps
                        .iter()
                        .filter(|&&(h, _)| h < g && self.sig.parity(h) == Parity::Odd)
                        .count();
                    let exps: Vec<(u32, i64)> =
                        m.exps.iter().copied().filter(|&(h, _)| h != g).collect();
                    let mut coeff = c.clone();
                    if preceding % 2 == 1 {
                        coeff = -coeff;
                    }
                    out.add_term(SuperMonomial::from_sorted(exps), coeff);
                }
            }
        }
        Ok(out)
    }

    /// Reduction modulo the ideal generated by the odd generators: drops every
    /// monomial containing an odd factor.
    pub fn reduce_mod_odd(&self) -> SuperPolynomial {
        SuperPolynomial {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| {
                    m.exps
                        .iter()
                        .all(|&(g, _)| self.sig.parity(g) == Parity::Even)
                })
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Evaluate an odd-free polynomial at a rational point. Invertible
    /// generators must receive nonzero values.
    pub fn evaluate(&self, point: &BTreeMap<u32, Q>) -> Result<Q> {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(g, e) in &m.exps {
                if self.sig.parity(g) == Parity::Odd {
                    return Err(Error::OddPresent);
                }
                let v = point
                    .get(&g)
                    .ok_or_else(|| Error::UnknownGenerator(self.sig.name(g).to_string()))?;
                if v.is_zero() {
                    if self.sig.invertible(g) {
                        return Err(Error::ZeroAtInvertible(self.sig.name(g).to_string()));
                    }
                    term = Q::zero();
                    break;
                }
                let pow = num::pow::Pow::pow(v.clone(), e.unsigned_abs());
                if e >= 0 {
                    term *= pow;
                } else {
                    term /= pow;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Evaluate the generators in `range` at a rational point of the reduced
    /// variety: even generators take the given values, odd generators in the
    /// range are sent to zero, and the remaining generators are renumbered
    /// into `target`.
    pub fn eval_range_at_point(
        &self,
        range: std::ops::Range<u32>,
        values: &BTreeMap<u32, Q>,
        target: &Signature,
    ) -> Result<SuperPolynomial> {
        let mut out = SuperPolynomial::zero(target);
        'term: for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = Vec::new();
            for &(g, e) in &m.exps {
                if range.contains(&g) {
                    if self.sig.parity(g) == Parity::Odd {
                        continue 'term;
                    }
                    let v = values
                        .get(&g)
                        .ok_or_else(|| Error::UnknownGenerator(self.sig.name(g).to_string()))?;
                    if v.is_zero() {
                        if e < 0 || self.sig.invertible(g) {
                            return Err(Error::ZeroAtInvertible(self.sig.name(g).to_string()));
                        }
                        continue 'term;
                    }
                    let pow = num::pow::Pow::pow(v.clone(), e.unsigned_abs());
                    if e >= 0 {
                        coeff *= pow;
                    } else {
                        coeff /= pow;
                    }
                } else {
                    let new = if g < range.start {
                        g
                    } else {
                        g - (range.end - range.start)
                    };
                    exps.push((new, e));
                }
            }
            out.add_term(SuperMonomial::from_sorted(exps), coeff);
        }
        Ok(out)
    }

    /// Invert a unit of the Laurent superalgebra. The even reduction must be
    /// a nonzero multiple of a monomial in invertible generators; the
    /// nilpotent correction is summed as a finite geometric series.
    pub fn try_invert(&self) -> Result<SuperPolynomial> {
        let reduced = self.reduce_mod_odd();
        if reduced.num_terms() != 1 {
            return Err(Error::NotInvertible);
        }
        let (mono, coeff) = reduced.terms.iter().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        if mono
            .exps
            .iter()
            .any(|&(g, _)| !self.sig.invertible(g))
        {
            return Err(Error::NotInvertible);
        }
        let inv_mono: Vec<(u32, i64)> = mono.exps.iter().map(|&(g, e)| (g, -e)).collect();
        let lead_inv = SuperPolynomial::monomial(&self.sig, &inv_mono, Q::one() / coeff)?;
        // self = lead (1 + n) with n in the odd ideal, so nilpotent.
        let n = lead_inv.mul(self)?.sub(&SuperPolynomial::one(&self.sig))?;
        let mut series = SuperPolynomial::one(&self.sig);
        let mut power = SuperPolynomial::one(&self.sig);
        let max = self.sig.odd_indices().count() + 1;
        for _ in 0..max {
            power = power.mul(&n)?.neg();
            if power.is_zero() {
                break;
            }
            series = series.add(&power)?;
        }
        if !power.is_zero() {
            return Err(Error::NotInvertible);
        }
        series.mul(&lead_inv)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let list: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: serde_json::Map<String, serde_json::Value> = m
                    .exps
                    .iter()
                    .map(|&(g, e)| (self.sig.name(g).to_string(), serde_json::json!(e)))
                    .collect();
                serde_json::json!({ "monomial": mono, "coeff": c.to_string() })
            })
            .collect();
        serde_json::Value::Array(list)
    }

    pub fn from_json(sig: &Signature, v: &serde_json::Value) -> Result<SuperPolynomial> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Invalid("polynomial JSON must be a list".into()))?;
        let mut out = SuperPolynomial::zero(sig);
        for item in arr {
            let mono = item
                .get("monomial")
                .and_then(|m| m.as_object())
                .ok_or_else(|| Error::Invalid("missing monomial object".into()))?;
            let coeff = item
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or_else(|| Error::Invalid("missing coeff string".into()))?;
            let coeff: Q = coeff
                .parse()
                .map_err(|_| Error::Invalid(format!("bad rational `{coeff}`")))?;
            let mut exps = Vec::new();
            for (name, e) in mono {
                let idx = sig
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
                let e = e
                    .as_i64()
                    .ok_or_else(|| Error::Invalid("exponent must be an integer".into()))?;
                exps.push((idx, e));
            }
            let term = SuperPolynomial::monomial(sig, &exps, coeff)?;
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.format(&self.sig))?;
            } else {
                write!(f, "{}*{}", abs, m.format(&self.sig))?;
            }
        }
        Ok(())
    }
}

/// Parity-respecting substitution of polynomials for generators; a morphism
/// of superalgebras from one signature into another.
pub struct Substitution {
    source: Signature,
    target: Signature,
    images: Vec<SuperPolynomial>,
    inverses: Vec<OnceCell<SuperPolynomial>>,
}

impl Substitution {
    pub fn new(
        source: &Signature,
        target: &Signature,
        images: Vec<SuperPolynomial>,
    ) -> Result<Substitution> {
        if images.len() != source.len() as usize {
            return Err(Error::DimensionMismatch);
        }
        for (i, img) in images.iter().enumerate() {
            if img.signature() != target {
                return Err(Error::SignatureMismatch);
            }
            match img.parity() {
                Some(p) if p == source.parity(i as u32) || img.is_zero() => {}
                _ => return Err(Error::ParityMismatch(source.name(i as u32).to_string())),
            }
        }
        let inverses = (0..images.len()).map(|_| OnceCell::new()).collect();
        Ok(Substitution {
            source: source.clone(),
            target: target.clone(),
            images,
            inverses,
        })
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn image(&self, idx: u32) -> &SuperPolynomial {
        &self.images[idx as usize]
    }

    fn inverse_image(&self, idx: u32) -> Result<&SuperPolynomial> {
        self.inverses[idx as usize]
            .get_or_try_init(|| self.images[idx as usize].try_invert())
    }

    pub fn apply(&self, p: &SuperPolynomial) -> Result<SuperPolynomial> {
        if p.signature() != &self.source {
            return Err(Error::SignatureMismatch);
        }
        let mut out = SuperPolynomial::zero(&self.target);
        for (m, c) in p.terms() {
            let mut acc = SuperPolynomial::constant(&self.target, c.clone());
            for &(g, e) in m.exponents() {
                let factor = if e >= 0 {
                    self.images[g as usize].pow(e as u32)?
                } else {
                    self.inverse_image(g)?.pow((-e) as u32)?
                };
                acc = acc.mul(&factor)?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qi};
    use proptest::prelude::*;

    // canonical order a11 < a22 < al12 < al21, matching the coordinate ring
    // of the 1|1 general linear supergroup
    fn sig() -> Signature {
        Signature::new(vec![
            ("a11", Parity::Even, true),
            ("a22", Parity::Even, true),
            ("al12", Parity::Odd, false),
            ("al21", Parity::Odd, false),
        ])
        .unwrap()
    }

    fn gen(s: &Signature, name: &str) -> SuperPolynomial {
        SuperPolynomial::gen_by_name(s, name).unwrap()
    }

    #[test]
    fn odd_transposition_sign() {
        let s = sig();
        let a12 = gen(&s, "al12");
        let a21 = gen(&s, "al21");
        let lhs = a21.mul(&a12).unwrap();
        let rhs = a12.mul(&a21).unwrap().neg();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn odd_square_vanishes() {
        let s = sig();
        let a12 = gen(&s, "al12");
        assert!(a12.mul(&a12).unwrap().is_zero());
    }

    #[test]
    fn difference_of_squares_drops_odd_part() {
        let s = sig();
        let a11 = gen(&s, "a11");
        let a12 = gen(&s, "al12");
        let lhs = a11.add(&a12).unwrap().mul(&a11.sub(&a12).unwrap()).unwrap();
        assert_eq!(lhs, a11.pow(2).unwrap());
    }

    #[test]
    fn left_derivative_signs() {
        let s = sig();
        let m = gen(&s, "al12").mul(&gen(&s, "al21")).unwrap();
        // one odd factor precedes al21
        assert_eq!(m.derive(3).unwrap(), gen(&s, "al12").neg());
        // two-step left derivative and its swap
        let step = m.derive(3).unwrap().derive(2).unwrap();
        assert_eq!(step, SuperPolynomial::constant(&s, qi(-1)));
        let swapped = m.derive(2).unwrap().derive(3).unwrap();
        assert_eq!(swapped, SuperPolynomial::constant(&s, qi(1)));
    }

    #[test]
    fn laurent_power_rule() {
        let s = sig();
        let inv = SuperPolynomial::monomial(&s, &[(0, -1)], qi(1)).unwrap();
        let expect = SuperPolynomial::monomial(&s, &[(0, -2)], qi(-1)).unwrap();
        assert_eq!(inv.derive(0).unwrap(), expect);
    }

    #[test]
    fn reduce_mod_odd_examples() {
        let s = sig();
        let a11 = gen(&s, "a11");
        let odd_pair = gen(&s, "al12").mul(&gen(&s, "al21")).unwrap();
        assert_eq!(a11.add(&odd_pair).unwrap().reduce_mod_odd(), a11);
        assert!(gen(&s, "al12").reduce_mod_odd().is_zero());
    }

    #[test]
    fn evaluate_at_rational_point() {
        let s = sig();
        let p = SuperPolynomial::monomial(&s, &[(0, 1), (1, -1)], qi(1)).unwrap();
        let point: std::collections::BTreeMap<u32, crate::Q> =
            [(0, qi(2)), (1, qi(3))].into_iter().collect();
        assert_eq!(p.evaluate(&point).unwrap(), q(2, 3));
        assert_eq!(
            SuperPolynomial::one(&s).evaluate(&std::collections::BTreeMap::new()).unwrap(),
            qi(1)
        );
        let zero_at_inv: std::collections::BTreeMap<u32, crate::Q> =
            [(0, qi(0)), (1, qi(3))].into_iter().collect();
        assert!(p.evaluate(&zero_at_inv).is_err());
    }

    #[test]
    fn substitution_is_multiplicative_on_doubled_signature() {
        let s = sig();
        let d = tensor::doubled(&s);
        // matrix-style image of a11
        let images = vec![
            tensor::tensor_pair(&gen(&s, "a11"), &gen(&s, "a11"), &d)
                .unwrap()
                .add(&tensor::tensor_pair(&gen(&s, "al12"), &gen(&s, "al21"), &d).unwrap())
                .unwrap(),
            tensor::tensor_pair(&gen(&s, "al21"), &gen(&s, "al12"), &d)
                .unwrap()
                .add(&tensor::tensor_pair(&gen(&s, "a22"), &gen(&s, "a22"), &d).unwrap())
                .unwrap(),
            tensor::tensor_pair(&gen(&s, "a11"), &gen(&s, "al12"), &d)
                .unwrap()
                .add(&tensor::tensor_pair(&gen(&s, "al12"), &gen(&s, "a22"), &d).unwrap())
                .unwrap(),
            tensor::tensor_pair(&gen(&s, "al21"), &gen(&s, "a11"), &d)
                .unwrap()
                .add(&tensor::tensor_pair(&gen(&s, "a22"), &gen(&s, "al21"), &d).unwrap())
                .unwrap(),
        ];
        let sub = Substitution::new(&s, &d, images).unwrap();
        let a11 = gen(&s, "a11");
        let sq = a11.pow(2).unwrap();
        assert_eq!(
            sub.apply(&sq).unwrap(),
            sub.apply(&a11).unwrap().mul(&sub.apply(&a11).unwrap()).unwrap()
        );
    }

    #[test]
    fn invert_unit_with_nilpotent_part() {
        let s = sig();
        // a11 - a22^{-1} al12 al21, inverse a11^{-1} + a11^{-2} a22^{-1} al12 al21
        let u = gen(&s, "a11")
            .sub(
                &SuperPolynomial::monomial(&s, &[(1, -1), (2, 1), (3, 1)], qi(1)).unwrap(),
            )
            .unwrap();
        let inv = u.try_invert().unwrap();
        let expect = SuperPolynomial::monomial(&s, &[(0, -1)], qi(1))
            .unwrap()
            .add(&SuperPolynomial::monomial(&s, &[(0, -2), (1, -1), (2, 1), (3, 1)], qi(1)).unwrap())
            .unwrap();
        assert_eq!(inv, expect);
        assert_eq!(u.mul(&inv).unwrap(), SuperPolynomial::one(&s));
        assert!(gen(&s, "al12").try_invert().is_err());
    }

    prop_compose! {
        fn arb_mono()(a in -2i64..=3, b in -2i64..=3, x in 0i64..=1, y in 0i64..=1) -> Vec<(u32, i64)> {
            vec![(0, a), (1, b), (2, x), (3, y)]
        }
    }

    prop_compose! {
        fn arb_poly()(terms in prop::collection::vec((arb_mono(), -4i64..=4), 0..4)) -> SuperPolynomial {
            let s = sig();
            let mut p = SuperPolynomial::zero(&s);
            for (exps, c) in terms {
                p = p.add(&SuperPolynomial::monomial(&s, &exps, qi(c)).unwrap()).unwrap();
            }
            p
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn supercommutativity(p in arb_poly(), r in arb_poly()) {
            for pp in [p.homogeneous_part(Parity::Even), p.homogeneous_part(Parity::Odd)] {
                for rr in [r.homogeneous_part(Parity::Even), r.homogeneous_part(Parity::Odd)] {
                    let lhs = pp.mul(&rr).unwrap();
                    let mut rhs = rr.mul(&pp).unwrap();
                    if pp.parity() == Some(Parity::Odd) && rr.parity() == Some(Parity::Odd)
                        && !pp.is_zero() && !rr.is_zero()
                    {
                        rhs = rhs.neg();
                    }
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }

        #[test]
        fn associativity(p in arb_poly(), r in arb_poly(), t in arb_poly()) {
            let lhs = p.mul(&r).unwrap().mul(&t).unwrap();
            let rhs = p.mul(&r.mul(&t).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reduce_mod_odd_is_a_morphism(p in arb_poly(), r in arb_poly()) {
            let lhs = p.mul(&r).unwrap().reduce_mod_odd();
            let rhs = p.reduce_mod_odd().mul(&r.reduce_mod_odd()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn derive_satisfies_graded_leibniz(p in arb_poly(), r in arb_poly(), g in 0u32..4) {
            let s = sig();
            for pp in [p.homogeneous_part(Parity::Even), p.homogeneous_part(Parity::Odd)] {
                let dp = pp.derive(g).unwrap().mul(&r).unwrap();
                let mut pdr = pp.mul(&r.derive(g).unwrap()).unwrap();
                if s.parity(g).is_odd() && pp.parity() == Some(Parity::Odd) {
                    pdr = pdr.neg();
                }
                let lhs = pp.mul(&r).unwrap().derive(g).unwrap();
                prop_assert_eq!(lhs, dp.add(&pdr).unwrap());
            }
        }
    }
}
