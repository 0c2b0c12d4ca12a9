//! Graded derivations and the differential operators they generate.
//!
//! A [`SuperDerivation`] is a homogeneous first-order operator
//! `Σ p_g ∂_g` acting by the graded Leibniz rule, with left multiplication by
//! the coefficients after differentiation. Compositions are canonicalized in
//! a [`DiffOperator`]: a sum of terms `p·∂^A` where the `∂`-part is a
//! supercommutative monomial in the partial derivative symbols (`∂_ξ² = 0`,
//! odd pairs anticommute).

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use super::{Parity, Signature, SuperMonomial, SuperPolynomial};
use crate::{Error, Result, Q};

/// Homogeneous first-order graded derivation `Σ p_g ∂_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperDerivation {
    sig: Signature,
    parity: Parity,
    terms: Vec<(SuperPolynomial, u32)>,
}

impl SuperDerivation {
    /// Build `Σ p_g ∂_g`; each coefficient must be homogeneous with
    /// `parity(p_g) + parity(g) = parity`.
    pub fn new(
        sig: &Signature,
        parity: Parity,
        terms: Vec<(SuperPolynomial, u32)>,
    ) -> Result<SuperDerivation> {
        let mut by_gen: BTreeMap<u32, SuperPolynomial> = BTreeMap::new();
        for (p, g) in terms {
            if p.signature() != sig {
                return Err(Error::SignatureMismatch);
            }
            if g >= sig.len() {
                return Err(Error::UnknownGenerator(format!("#{g}")));
            }
            if p.is_zero() {
                continue;
            }
            let expected = parity.xor(sig.parity(g));
            if p.parity() != Some(expected) {
                return Err(Error::ParityMismatch(sig.name(g).to_string()));
            }
            match by_gen.remove(&g) {
                Some(prev) => {
                    let sum = prev.add(&p)?;
                    if !sum.is_zero() {
                        by_gen.insert(g, sum);
                    }
                }
                None => {
                    by_gen.insert(g, p);
                }
            }
        }
        Ok(SuperDerivation {
            sig: sig.clone(),
            parity,
            terms: by_gen.into_iter().map(|(g, p)| (p, g)).collect(),
        })
    }

    pub fn zero(sig: &Signature, parity: Parity) -> SuperDerivation {
        SuperDerivation {
            sig: sig.clone(),
            parity,
            terms: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn terms(&self) -> &[(SuperPolynomial, u32)] {
        &self.terms
    }

    pub fn apply(&self, p: &SuperPolynomial) -> Result<SuperPolynomial> {
        if p.signature() != &self.sig {
            return Err(Error::SignatureMismatch);
        }
        let mut out = SuperPolynomial::zero(&self.sig);
        for (coeff, g) in &self.terms {
            out = out.add(&coeff.mul(&p.derive(*g)?)?)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &SuperDerivation) -> Result<SuperDerivation> {
        if self.parity != other.parity {
            return Err(Error::ParityMismatch("derivation sum".into()));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SuperDerivation::new(&self.sig, self.parity, terms)
    }

    pub fn scale(&self, c: &Q) -> SuperDerivation {
        SuperDerivation {
            sig: self.sig.clone(),
            parity: self.parity,
            terms: self
                .terms
                .iter()
                .map(|(p, g)| (p.scale(c), *g))
                .filter(|(p, _)| !p.is_zero())
                .collect(),
        }
    }

    /// `[D,E] = D∘E − (−1)^{|D||E|} E∘D`, again a first-order derivation:
    /// the second-order parts cancel and the commutator is
    /// `Σ D(q_h)∂_h − (−1)^{|D||E|} Σ E(p_g)∂_g`.
    pub fn supercommutator(&self, other: &SuperDerivation) -> Result<SuperDerivation> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        let parity = self.parity.xor(other.parity);
        let sign_flip = !(self.parity.is_odd() && other.parity.is_odd());
        let mut terms = Vec::new();
        for (q, h) in &other.terms {
            terms.push((self.apply(q)?, *h));
        }
        for (p, g) in &self.terms {
            let e_of_p = other.apply(p)?;
            terms.push((if sign_flip { e_of_p.neg() } else { e_of_p }, *g));
        }
        SuperDerivation::new(&self.sig, parity, terms)
    }

    pub fn to_operator(&self) -> DiffOperator {
        let mut op = DiffOperator::zero(&self.sig);
        for (p, g) in &self.terms {
            let dm = SuperMonomial::from_sorted(vec![(*g, 1)]);
            op.add_term(dm, p.clone());
        }
        op
    }
}

impl fmt::Display for SuperDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, g)| format!("({})*d_{}", p, self.sig.name(*g)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Canonical differential operator `Σ p_A ∂^A`.
///
/// The key monomial `∂^A` denotes the composition `∂_{g1}∘…∘∂_{gk}` with the
/// indices ascending (the last factor acts first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    sig: Signature,
    terms: BTreeMap<SuperMonomial, SuperPolynomial>,
}

impl DiffOperator {
    pub fn zero(sig: &Signature) -> DiffOperator {
        DiffOperator {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(sig: &Signature) -> DiffOperator {
        let mut op = DiffOperator::zero(sig);
        op.add_term(SuperMonomial::one(), SuperPolynomial::one(sig));
        op
    }

    pub fn from_derivation(d: &SuperDerivation) -> DiffOperator {
        d.to_operator()
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SuperMonomial, &SuperPolynomial)> {
        self.terms.iter()
    }

    pub(crate) fn add_term(&mut self, dmono: SuperMonomial, coeff: SuperPolynomial) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(dmono) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff).expect("same signature");
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &DiffOperator) -> Result<DiffOperator> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        let mut out = self.clone();
        for (dm, c) in &other.terms {
            out.add_term(dm.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffOperator) -> Result<DiffOperator> {
        self.add(&other.scale(&-Q::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Q) -> DiffOperator {
        if c.is_zero() {
            return DiffOperator::zero(&self.sig);
        }
        DiffOperator {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, p)| (m.clone(), p.scale(c)))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn expand(dmono: &SuperMonomial) -> Vec<u32> {
        let mut word = Vec::new();
        for &(g, e) in dmono.exponents() {
            debug_assert!(e > 0);
            for _ in 0..e {
                word.push(g);
            }
        }
        word
    }

    pub fn apply(&self, p: &SuperPolynomial) -> Result<SuperPolynomial> {
        if p.signature() != &self.sig {
            return Err(Error::SignatureMismatch);
        }
        let mut out = SuperPolynomial::zero(&self.sig);
        for (dm, coeff) in &self.terms {
            let mut cur = p.clone();
            for &g in Self::expand(dm).iter().rev() {
                cur = cur.derive(g)?;
                if cur.is_zero() {
                    break;
                }
            }
            out = out.add(&coeff.mul(&cur)?)?;
        }
        Ok(out)
    }

    /// Canonicalize a composition word of `∂` symbols: sorting ascending,
    /// odd pairs anticommute and an adjacent equal odd pair is zero.
    fn canonicalize_word(sig: &Signature, word: &[u32]) -> Option<(SuperMonomial, i64)> {
        let mut w = word.to_vec();
        let mut sign = 1i64;
        // insertion sort counting odd-odd transpositions
        for i in 1..w.len() {
            let mut j = i;
            while j > 0 && w[j - 1] > w[j] {
                if sig.parity(w[j - 1]) == Parity::Odd && sig.parity(w[j]) == Parity::Odd {
                    sign = -sign;
                }
                w.swap(j - 1, j);
                j -= 1;
            }
        }
        let mut exps: Vec<(u32, i64)> = Vec::new();
        for &g in &w {
            match exps.last_mut() {
                Some((h, e)) if *h == g => {
                    if sig.parity(g) == Parity::Odd {
                        return None;
                    }
                    *e += 1;
                }
                _ => exps.push((g, 1)),
            }
        }
        Some((SuperMonomial::from_sorted(exps), sign))
    }

    /// Push a composition word of `∂` symbols through multiplication by `q`,
    /// using `∂_g ∘ M_q = M_{∂_g q} + (−1)^{|g||q|} M_q ∘ ∂_g`.
    fn push_through(
        sig: &Signature,
        word: &[u32],
        q: &SuperPolynomial,
    ) -> Result<Vec<(SuperPolynomial, Vec<u32>)>> {
        if q.is_zero() {
            return Ok(Vec::new());
        }
        let Some((&g, init)) = word.split_last() else {
            return Ok(vec![(q.clone(), Vec::new())]);
        };
        let mut out = Self::push_through(sig, init, &q.derive(g)?)?;
        for parity in [Parity::Even, Parity::Odd] {
            let part = q.homogeneous_part(parity);
            if part.is_zero() {
                continue;
            }
            let flip = sig.parity(g) == Parity::Odd && parity == Parity::Odd;
            for (q2, mut w2) in Self::push_through(sig, init, &part)? {
                w2.push(g);
                out.push((if flip { q2.neg() } else { q2 }, w2));
            }
        }
        Ok(out)
    }

    /// Operator composition `self ∘ other`, canonicalized.
    pub fn compose(&self, other: &DiffOperator) -> Result<DiffOperator> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        let mut out = DiffOperator::zero(&self.sig);
        for (a_dm, p) in &self.terms {
            let a_word = Self::expand(a_dm);
            for (b_dm, q) in &other.terms {
                for (qi, ui) in Self::push_through(&self.sig, &a_word, q)? {
                    let mut word = ui;
                    word.extend(Self::expand(b_dm));
                    if let Some((dm, sign)) = Self::canonicalize_word(&self.sig, &word) {
                        let mut coeff = p.mul(&qi)?;
                        if sign < 0 {
                            coeff = coeff.neg();
                        }
                        out.add_term(dm, coeff);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[A,B] = A∘B − (−1)^{|A||B|} B∘A` for homogeneous operator parities.
    pub fn supercommutator(
        &self,
        other: &DiffOperator,
        self_parity: Parity,
        other_parity: Parity,
    ) -> Result<DiffOperator> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        if self_parity.is_odd() && other_parity.is_odd() {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }

    /// Drop terms whose coefficient lies in the odd ideal; what is left acts
    /// faithfully on even reductions.
    pub fn even_coefficient_part(&self) -> DiffOperator {
        DiffOperator {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter_map(|(m, p)| {
                    let r = p.reduce_mod_odd();
                    if r.is_zero() {
                        None
                    } else {
                        Some((m.clone(), r))
                    }
                })
                .collect(),
        }
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(dm, p)| {
                let ds: Vec<String> = dm
                    .exponents()
                    .iter()
                    .map(|&(g, e)| {
                        if e == 1 {
                            format!("d_{}", self.sig.name(g))
                        } else {
                            format!("d_{}^{}", self.sig.name(g), e)
                        }
                    })
                    .collect();
                if ds.is_empty() {
                    format!("({p})")
                } else {
                    format!("({})*{}", p, ds.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi;
    use proptest::prelude::*;

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

    // left invariant fields of the 1|1 case: D12 = a11 d_al12 + al21 d_a22,
    // D21 = al12 d_a11 + a22 d_al21
    fn d12(s: &Signature) -> SuperDerivation {
        SuperDerivation::new(
            s,
            Parity::Odd,
            vec![(gen(s, "a11"), 2), (gen(s, "al21"), 1)],
        )
        .unwrap()
    }

    fn d21(s: &Signature) -> SuperDerivation {
        SuperDerivation::new(
            s,
            Parity::Odd,
            vec![(gen(s, "al12"), 0), (gen(s, "a22"), 3)],
        )
        .unwrap()
    }

    #[test]
    fn left_invariant_field_values() {
        let s = sig();
        assert_eq!(d12(&s).apply(&gen(&s, "al12")).unwrap(), gen(&s, "a11"));
        assert_eq!(d21(&s).apply(&gen(&s, "a11")).unwrap(), gen(&s, "al12"));
        assert!(d12(&s)
            .apply(&SuperPolynomial::one(&s))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn anticommutator_of_odd_fields_on_a11() {
        let s = sig();
        let bracket = d12(&s).supercommutator(&d21(&s)).unwrap();
        assert_eq!(bracket.apply(&gen(&s, "a11")).unwrap(), gen(&s, "a11"));
        // the bracket is the sum of the two even invariant fields
        let want = SuperDerivation::new(
            &s,
            Parity::Even,
            vec![
                (gen(&s, "a11"), 0),
                (gen(&s, "al21"), 3),
                (gen(&s, "al12"), 2),
                (gen(&s, "a22"), 1),
            ],
        )
        .unwrap();
        assert_eq!(bracket, want);
    }

    #[test]
    fn symmetrized_composition_even_part() {
        let s = sig();
        // 1/2 (D12 D21 - D21 D12) has even-coefficient part
        // 1/2 (a11 d_a11 - a22 d_a22) + a11 a22 d_al12 d_al21
        let ab = d12(&s).to_operator().compose(&d21(&s).to_operator()).unwrap();
        let ba = d21(&s).to_operator().compose(&d12(&s).to_operator()).unwrap();
        let gamma = ab.sub(&ba).unwrap().scale(&crate::q(1, 2));
        let mut want = DiffOperator::zero(&s);
        want.add_term(
            SuperMonomial::from_sorted(vec![(0, 1)]),
            gen(&s, "a11").scale(&crate::q(1, 2)),
        );
        want.add_term(
            SuperMonomial::from_sorted(vec![(1, 1)]),
            gen(&s, "a22").scale(&crate::q(-1, 2)),
        );
        want.add_term(
            SuperMonomial::from_sorted(vec![(2, 1), (3, 1)]),
            gen(&s, "a11").mul(&gen(&s, "a22")).unwrap(),
        );
        assert_eq!(gamma.even_coefficient_part(), want);
        // and the odd-coefficient remainder is annihilated by even reduction
        let diff = gamma.sub(&want).unwrap();
        for (_, coeff) in diff.terms() {
            assert!(coeff.reduce_mod_odd().is_zero());
        }
    }

    #[test]
    fn self_bracket_of_odd_field_kills_top_monomial() {
        let s = sig();
        let d = d12(&s);
        let self_bracket = d.supercommutator(&d).unwrap();
        let top = gen(&s, "al12").mul(&gen(&s, "al21")).unwrap();
        assert!(self_bracket.apply(&top).unwrap().is_zero());
    }

    #[test]
    fn composition_acts_associatively() {
        let s = sig();
        let a = d12(&s).to_operator();
        let b = d21(&s).to_operator();
        let p = gen(&s, "a11").mul(&gen(&s, "al21")).unwrap();
        let via_compose = a.compose(&b).unwrap().apply(&p).unwrap();
        let via_apply = a.apply(&b.apply(&p).unwrap()).unwrap();
        assert_eq!(via_compose, via_apply);
    }

    prop_compose! {
        fn arb_poly()(terms in prop::collection::vec(((-2i64..=3, -2i64..=3, 0i64..=1, 0i64..=1), -4i64..=4), 0..4)) -> SuperPolynomial {
            let s = sig();
            let mut p = SuperPolynomial::zero(&s);
            for ((a, b, x, y), c) in terms {
                let m = SuperPolynomial::monomial(&s, &[(0, a), (1, b), (2, x), (3, y)], qi(c)).unwrap();
                p = p.add(&m).unwrap();
            }
            p
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn supercommutator_matches_composition(p in arb_poly()) {
            let s = sig();
            let d = d12(&s);
            let e = d21(&s);
            let lhs = d.supercommutator(&e).unwrap().apply(&p).unwrap();
            // both odd: anticommutator
            let rhs = d.apply(&e.apply(&p).unwrap()).unwrap()
                .add(&e.apply(&d.apply(&p).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn operator_apply_matches_derivation_apply(p in arb_poly()) {
            let s = sig();
            let d = d12(&s);
            prop_assert_eq!(d.to_operator().apply(&p).unwrap(), d.apply(&p).unwrap());
        }
    }
}
