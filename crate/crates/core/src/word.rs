//! Words in the shift and its adjoint, evaluated exactly on finitely
//! supported vectors, plus the local quantities ‖Sⁿe_v‖² and ‖S*ⁿe_v‖².

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::rat::Rat;
use crate::tree::{TreeError, ValidatedTree, VertexId};

/// One letter of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Letter {
    Shift,
    Adjoint,
}

impl Letter {
    /// Swaps S ↔ S*; used to run an inequality against the adjoint operator.
    pub fn flipped(self) -> Letter {
        match self {
            Letter::Shift => Letter::Adjoint,
            Letter::Adjoint => Letter::Shift,
        }
    }
}

/// A word is applied right-to-left, matching operator composition: the word
/// `[Adjoint, Shift]` means S*S.
pub type Word = Vec<Letter>;

/// Finitely supported vector with exact rational coefficients. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FinVector {
    support: BTreeMap<VertexId, Rat>,
}

impl Serialize for FinVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.support.iter().map(|(v, c)| (v, c.to_string())))
    }
}

impl FinVector {
    pub fn zero() -> Self {
        FinVector::default()
    }

    pub fn basis(v: VertexId) -> Self {
        let mut f = FinVector::default();
        f.set(v, Rat::from_integer(1.into()));
        f
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (VertexId, Rat)>) -> Self {
        let mut f = FinVector::default();
        for (v, c) in entries {
            f.add(v, c);
        }
        f
    }

    /// Sets a coefficient, dropping the entry when it is zero.
    pub fn set(&mut self, v: VertexId, c: Rat) {
        if c.is_zero() {
            self.support.remove(&v);
        } else {
            self.support.insert(v, c);
        }
    }

    /// Adds to a coefficient, dropping the entry on exact cancellation.
    pub fn add(&mut self, v: VertexId, c: Rat) {
        let entry = self.support.entry(v.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.support.remove(&v);
        }
    }

    pub fn coeff(&self, v: &VertexId) -> Rat {
        self.support.get(v).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, &Rat)> {
        self.support.iter()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.support.keys()
    }

    /// Removes one coordinate, returning its coefficient if present.
    pub fn remove(&mut self, v: &VertexId) -> Option<Rat> {
        self.support.remove(v)
    }

    /// ‖f‖² = Σ coefficients².
    pub fn norm_sq(&self) -> Rat {
        self.support.values().map(|c| c * c).sum()
    }

    /// ⟨f, g⟩ over the reals.
    pub fn inner(&self, other: &FinVector) -> Rat {
        self.support
            .iter()
            .map(|(v, c)| c * other.coeff(v))
            .sum()
    }
}

impl fmt::Display for FinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (v, c) in &self.support {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})e_{v}")?;
        }
        Ok(())
    }
}

/// Applies one letter to `f`.
fn apply_letter(
    tree: &ValidatedTree,
    letter: Letter,
    f: &FinVector,
) -> Result<FinVector, TreeError> {
    let mut out = FinVector::zero();
    match letter {
        Letter::Shift => {
            // S e_u = Σ_{v ∈ chi(u)} λ_v e_v
            for (u, c) in f.iter() {
                for v in tree.children(u)? {
                    let w = tree.weight(&v)?.expect("children are non-root");
                    out.add(v, w * c);
                }
            }
        }
        Letter::Adjoint => {
            // S* e_v = λ_v e_{par(v)}, and 0 at the root.
            for (v, c) in f.iter() {
                if let Some(p) = tree.parent(v)? {
                    let w = tree.weight(v)?.expect("non-root has a weight");
                    out.add(p, w * c);
                }
            }
        }
    }
    Ok(out)
}

/// Evaluates a word on `f`, rightmost letter first.
pub fn apply_word(tree: &ValidatedTree, word: &[Letter], f: &FinVector) -> Result<FinVector, TreeError> {
    let mut cur = f.clone();
    for letter in word.iter().rev() {
        cur = apply_letter(tree, *letter, &cur)?;
    }
    Ok(cur)
}

/// ‖Sⁿe_v‖², by the recursion ‖Sⁿe_u‖² = Σ_{v∈chi(u)} λ_v²‖Sⁿ⁻¹e_v‖².
pub fn local_norm_sq(tree: &ValidatedTree, v: &VertexId, n: u32) -> Result<Rat, TreeError> {
    if n == 0 {
        tree.resolve(v)?;
        return Ok(Rat::from_integer(1.into()));
    }
    let mut acc = Rat::zero();
    for child in tree.children(v)? {
        let w = tree.weight(&child)?.expect("children are non-root");
        let sub = local_norm_sq(tree, &child, n - 1)?;
        acc += &w * &w * sub;
    }
    Ok(acc)
}

/// ‖S*ⁿe_v‖²: the product of squared weights up the unique ancestor chain,
/// or 0 when the chain hits the root before n steps.
pub fn adjoint_local_norm_sq(tree: &ValidatedTree, v: &VertexId, n: u32) -> Result<Rat, TreeError> {
    let mut acc = Rat::from_integer(1.into());
    let mut cur = v.clone();
    tree.resolve(v)?;
    for _ in 0..n {
        match tree.parent(&cur)? {
            None => return Ok(Rat::zero()),
            Some(p) => {
                let w = tree.weight(&cur)?.expect("non-root has a weight");
                acc *= &w * &w;
                cur = p;
            }
        }
    }
    Ok(acc)
}

/// Convenience: the word with `n` copies of one letter.
pub fn repeated(letter: Letter, n: usize) -> Word {
    vec![letter; n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::rat;

    #[test]
    fn shift_on_root_of_two_ray_tree_spreads_onto_branch_heads() {
        let tree = fixtures::fixture_a();
        let out = apply_word(&tree, &[Letter::Shift], &FinVector::basis(tree.root())).unwrap();
        let expect = FinVector::from_entries([
            (VertexId::ray("r1", 1), rat(1, 9)),
            (VertexId::ray("r2", 1), rat(1, 3)),
        ]);
        assert_eq!(out, expect);
    }

    #[test]
    fn adjoint_kills_the_root() {
        let tree = fixtures::fixture_a();
        let out = apply_word(&tree, &[Letter::Adjoint], &FinVector::basis(tree.root())).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn cubed_shift_on_root_collects_both_branch_products() {
        let tree = fixtures::fixture_b();
        let out = apply_word(
            &tree,
            &repeated(Letter::Shift, 3),
            &FinVector::basis(tree.root()),
        )
        .unwrap();
        let expect = FinVector::from_entries([
            (VertexId::ray("r1", 3), rat(4, 1)),
            (VertexId::ray("r2", 3), rat(2, 1)),
        ]);
        assert_eq!(out, expect);
    }

    #[test]
    fn triple_adjoint_vanishes_at_depth_one() {
        let tree = fixtures::fixture_c();
        let out = apply_word(
            &tree,
            &repeated(Letter::Adjoint, 3),
            &FinVector::basis(VertexId::ray("path", 1)),
        )
        .unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn local_norm_sq_reproduces_branch_sums() {
        let a = fixtures::fixture_a();
        let b = fixtures::fixture_b();
        assert_eq!(local_norm_sq(&b, &b.root(), 3).unwrap(), rat(20, 1));
        assert_eq!(local_norm_sq(&a, &a.root(), 2).unwrap(), rat(73, 1296));
        assert_eq!(local_norm_sq(&a, &a.root(), 0).unwrap(), rat(1, 1));
        assert_eq!(local_norm_sq(&a, &VertexId::ray("r2", 4), 0).unwrap(), rat(1, 1));
    }

    #[test]
    fn adjoint_local_norm_sq_is_the_ancestor_chain_product() {
        let a = fixtures::fixture_a();
        assert_eq!(
            adjoint_local_norm_sq(&a, &VertexId::ray("r2", 1), 1).unwrap(),
            rat(1, 9)
        );
        assert_eq!(adjoint_local_norm_sq(&a, &a.root(), 1).unwrap(), rat(0, 1));
        assert_eq!(adjoint_local_norm_sq(&a, &a.root(), 3).unwrap(), rat(0, 1));

        let c = fixtures::fixture_c();
        assert_eq!(
            adjoint_local_norm_sq(&c, &VertexId::ray("path", 1), 2).unwrap(),
            rat(0, 1)
        );
        assert_eq!(
            adjoint_local_norm_sq(&c, &VertexId::ray("path", 1), 1).unwrap(),
            rat(1, 1)
        );
    }

    #[test]
    fn unknown_vertices_are_reported() {
        let a = fixtures::fixture_a();
        let bogus = VertexId::core("nope");
        assert!(apply_word(&a, &[Letter::Shift], &FinVector::basis(bogus.clone())).is_err());
        assert!(local_norm_sq(&a, &bogus, 1).is_err());
        assert!(local_norm_sq(&a, &VertexId::ray("r9", 1), 1).is_err());
    }

    #[test]
    fn exact_cancellation_drops_support() {
        let mut f = FinVector::basis(VertexId::core("u0"));
        f.add(VertexId::core("u0"), rat(-1, 1));
        assert!(f.is_zero());
    }
}
