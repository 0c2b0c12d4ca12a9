//! Graded tensor powers as polynomials over a concatenated signature.
//!
//! A tensor square is represented by doubling the signature with a marked
//! split point; the Koszul rule `(a⊗b)(c⊗d) = (−1)^{|b||c|} ac⊗bd` is then
//! exactly the supercommutative product of the concatenated signature.

use super::{Signature, SuperMonomial, SuperPolynomial, Substitution};
use crate::{Result, Q};

/// Concatenate signatures into one tensor signature. Generators of slot `k`
/// keep their name with `k` primes appended so names stay unique.
pub fn concat_signatures(parts: &[&Signature]) -> Signature {
    let mut gens = Vec::new();
    let mut splits = Vec::new();
    for (slot, sig) in parts.iter().enumerate() {
        if slot > 0 {
            splits.push(gens.len() as u32);
        }
        for g in sig.gens() {
            let mut spec = g.clone();
            spec.name = format!("{}{}", g.name, "'".repeat(slot));
            gens.push(spec);
        }
    }
    Signature::from_specs(gens, splits).expect("slot names are unique by construction")
}

pub fn doubled(sig: &Signature) -> Signature {
    concat_signatures(&[sig, sig])
}

pub fn tripled(sig: &Signature) -> Signature {
    concat_signatures(&[sig, sig, sig])
}

/// Start offsets of every slot of a tensor signature.
pub fn slot_offsets(sig: &Signature) -> Vec<u32> {
    let mut offs = vec![0];
    offs.extend_from_slice(sig.splits());
    offs
}

/// Reindex a polynomial along a strictly increasing generator map.
pub fn remap_monotone(
    p: &SuperPolynomial,
    target: &Signature,
    map: impl Fn(u32) -> u32,
) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero(target);
    for (m, c) in p.terms() {
        let mut last = None;
        let exps: Vec<(u32, i64)> = m
            .exponents()
            .iter()
            .map(|&(g, e)| {
                let ng = map(g);
                if let Some(prev) = last {
                    assert!(ng > prev, "generator map must be strictly increasing");
                }
                last = Some(ng);
                (ng, e)
            })
            .collect();
        out.add_term(SuperMonomial::from_sorted(exps), c.clone());
    }
    out
}

/// Embed a polynomial into tensor slot `slot` of `target`.
pub fn embed(p: &SuperPolynomial, target: &Signature, slot: usize) -> SuperPolynomial {
    let offs = slot_offsets(target);
    let off = offs[slot];
    remap_monotone(p, target, |g| g + off)
}

/// `a ⊗ b` as an element of the doubled signature.
pub fn tensor_pair(
    a: &SuperPolynomial,
    b: &SuperPolynomial,
    target: &Signature,
) -> Result<SuperPolynomial> {
    embed(a, target, 0).mul(&embed(b, target, 1))
}

/// Split a monomial of a tensor signature into its per-slot local parts.
/// No sign arises: slots are already listed in order.
pub fn split_slots(mono: &SuperMonomial, offsets: &[u32], total: u32) -> Vec<SuperMonomial> {
    let mut parts: Vec<Vec<(u32, i64)>> = vec![Vec::new(); offsets.len()];
    for &(g, e) in mono.exponents() {
        let slot = match offsets.binary_search(&(g + 1)) {
            Ok(i) => i - 1,
            Err(i) => i - 1,
        };
        parts[slot].push((g - offsets[slot], e));
    }
    let _ = total;
    parts.into_iter().map(SuperMonomial::from_sorted).collect()
}

/// The multiplication map `m(x⊗y) = xy`: contract the last slot of a tensor
/// square onto the first. Koszul signs are produced by canonicalization.
pub fn contract_pair(p: &SuperPolynomial, single: &Signature) -> Result<SuperPolynomial> {
    let doubled_sig = p.signature().clone();
    let n = single.len();
    let mut images = Vec::new();
    for slot in 0..2 {
        for g in 0..n {
            let _ = slot;
            images.push(SuperPolynomial::gen(single, g)?);
        }
    }
    let sub = Substitution::new(&doubled_sig, single, images)?;
    sub.apply(p)
}

/// Extract the coefficient polynomial of slot `1` when slot `0` carries a
/// fixed monomial — used to read off tensor components in tests.
pub fn coeff_of_slot0_monomial(
    p: &SuperPolynomial,
    mono: &SuperMonomial,
    slot_sig: &Signature,
) -> SuperPolynomial {
    let offs = slot_offsets(p.signature());
    assert_eq!(offs.len(), 2);
    let mut out = SuperPolynomial::zero(slot_sig);
    for (m, c) in p.terms() {
        let parts = split_slots(m, &offs, p.signature().len());
        if &parts[0] == mono {
            out.add_term(parts[1].clone(), c.clone());
        }
    }
    out
}

/// Scale helper: `c · (a ⊗ b)` accumulated into `acc`.
pub fn add_scaled_tensor(
    acc: &mut SuperPolynomial,
    c: &Q,
    a: &SuperPolynomial,
    b: &SuperPolynomial,
) -> Result<()> {
    let t = tensor_pair(a, b, acc.signature())?.scale(c);
    *acc = acc.add(&t)?;
    Ok(())
}
