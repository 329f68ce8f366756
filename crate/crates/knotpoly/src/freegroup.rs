//! Words in a free group and the integral group ring built on them.
//!
//! Generators are indices into a per-presentation name table; a [`Word`] is
//! a freely reduced run-length encoding `(generator, exponent)*`. Free
//! reduction is maintained as an invariant by every constructor, so equal
//! group elements are always structurally equal.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    runs: Vec<(usize, i64)>,
}

impl Word {
    /// The identity element.
    pub fn identity() -> Self {
        Word { runs: Vec::new() }
    }

    pub fn generator(g: usize) -> Self {
        Word { runs: vec![(g, 1)] }
    }

    /// `x_g^e`; `e = 0` gives the identity.
    pub fn power(g: usize, e: i64) -> Self {
        if e == 0 {
            Word::identity()
        } else {
            Word { runs: vec![(g, e)] }
        }
    }

    /// Freely reduce an arbitrary run sequence.
    pub fn from_runs(runs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut w = Word::identity();
        for (g, e) in runs {
            w.push_run(g, e);
        }
        w
    }

    fn push_run(&mut self, g: usize, e: i64) {
        if e == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((lg, le)) if *lg == g => {
                *le += e;
                if *le == 0 {
                    self.runs.pop();
                }
            }
            _ => self.runs.push((g, e)),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn runs(&self) -> &[(usize, i64)] {
        &self.runs
    }

    /// Letter length: the sum of absolute exponents.
    pub fn len(&self) -> usize {
        self.runs
            .iter()
            .map(|(_, e)| e.unsigned_abs() as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.runs {
            w.push_run(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            runs: self.runs.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn conjugate_by(&self, w: &Word) -> Word {
        w.mul(self).mul(&w.inverse())
    }

    /// Exponent sum of generator `g`.
    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.runs
            .iter()
            .filter(|(h, _)| *h == g)
            .map(|(_, e)| e)
            .sum()
    }

    /// Total weight under per-generator degrees, e.g. the abelianization
    /// image `t^weight`.
    pub fn weight(&self, degrees: &[i64]) -> i64 {
        self.runs.iter().map(|&(g, e)| degrees[g] * e).sum()
    }

    /// Largest generator index mentioned, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.runs.iter().map(|&(g, _)| g).max()
    }

    /// Substitute each generator by a word (a free-group homomorphism).
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for &(g, e) in &self.runs {
            out = out.mul(&images[g].pow(e));
        }
        out
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.word.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "{}", self.names[g])?;
            } else {
                write!(f, "{}^{}", self.names[g], e)?;
            }
        }
        Ok(())
    }
}

/// An element of the integral group ring `ZF_n`: a finite formal sum of
/// words with nonzero integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        GroupRingElement::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::identity())
    }

    pub fn from_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, 1);
        GroupRingElement { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (Word, i64)>) -> Self {
        let mut e = GroupRingElement::zero();
        for (w, c) in pairs {
            e.add_term(w, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> GroupRingElement {
        GroupRingElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &GroupRingElement) -> GroupRingElement {
        self.add(&other.neg())
    }

    /// Convolution product.
    pub fn mul(&self, other: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.mul(v), a * b);
            }
        }
        out
    }

    pub fn scale(&self, n: i64) -> GroupRingElement {
        if n == 0 {
            return GroupRingElement::zero();
        }
        GroupRingElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * n)).collect(),
        }
    }

    pub fn mul_word(&self, w: &Word) -> GroupRingElement {
        GroupRingElement {
            terms: self.terms.iter().map(|(u, c)| (u.mul(w), *c)).collect(),
        }
    }

    pub fn word_mul(w: &Word, e: &GroupRingElement) -> GroupRingElement {
        GroupRingElement {
            terms: e.terms.iter().map(|(u, c)| (w.mul(u), *c)).collect(),
        }
    }

    /// Linear extension of a multiplicative map on words into any ring:
    /// fold the terms through `image`, combining with `add` and integer
    /// scaling `scale`. Returns `None` for the zero element (the caller
    /// supplies the target ring's zero).
    pub fn map_ring<T>(
        &self,
        mut image: impl FnMut(&Word) -> T,
        add: impl Fn(T, T) -> T,
        scale: impl Fn(T, i64) -> T,
    ) -> Option<T> {
        let mut acc: Option<T> = None;
        for (w, c) in &self.terms {
            let v = scale(image(w), *c);
            acc = Some(match acc {
                None => v,
                Some(a) => add(a, v),
            });
        }
        acc
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> RingDisplay<'a> {
        RingDisplay { elem: self, names }
    }
}

pub struct RingDisplay<'a> {
    elem: &'a GroupRingElement,
    names: &'a [String],
}

impl fmt::Display for RingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.elem.terms().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            if w.is_identity() && mag == 1 {
                write!(f, "1")?;
            } else {
                write!(f, "{}", w.display(self.names))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Word {
        Word::generator(0)
    }
    fn y() -> Word {
        Word::generator(1)
    }

    #[test]
    fn inverse_cancellation() {
        assert!(x().mul(&x().inverse()).is_identity());
    }

    #[test]
    fn one_step_cancellation() {
        // (xy)(y^-1 x) = x^2
        let left = x().mul(&y());
        let right = y().inverse().mul(&x());
        assert_eq!(left.mul(&right), Word::power(0, 2));
    }

    #[test]
    fn no_cancellation() {
        let xy = x().mul(&y());
        assert_eq!(xy.runs(), &[(0, 1), (1, 1)]);
    }

    #[test]
    fn ring_telescoping() {
        // (1 + x)(1 - x) = 1 - x^2
        let one = GroupRingElement::one();
        let ex = GroupRingElement::from_word(x());
        let lhs = one.add(&ex).mul(&one.sub(&ex));
        let expected =
            GroupRingElement::from_terms([(Word::identity(), 1), (Word::power(0, 2), -1)]);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn ring_zero_annihilates() {
        let a = GroupRingElement::from_terms([(x(), 3), (y(), -2)]);
        assert!(GroupRingElement::zero().mul(&a).is_zero());
    }

    #[test]
    fn ring_square_of_sum() {
        // (x + y)^2 = x^2 + xy + yx + y^2, four distinct reduced words
        let s = GroupRingElement::from_terms([(x(), 1), (y(), 1)]);
        let sq = s.mul(&s);
        assert_eq!(sq.num_terms(), 4);
        let expected = GroupRingElement::from_terms([
            (Word::power(0, 2), 1),
            (x().mul(&y()), 1),
            (y().mul(&x()), 1),
            (Word::power(1, 2), 1),
        ]);
        assert_eq!(sq, expected);
    }

    #[test]
    fn substitution_homomorphism() {
        // x -> xy, y -> y: x y^-1 -> xy y^-1 = x... then times y^-1
        let w = x().mul(&y().inverse());
        let images = vec![x().mul(&y()), y()];
        assert_eq!(w.substitute(&images), x());
    }

    mod ring_axioms {
        use super::*;
        use proptest::prelude::*;

        fn arb_element() -> impl Strategy<Value = GroupRingElement> {
            prop::collection::vec(
                (
                    prop::collection::vec((0usize..3, -2i64..=2), 0..4),
                    -3i64..=3,
                ),
                0..4,
            )
            .prop_map(|terms| {
                GroupRingElement::from_terms(
                    terms
                        .into_iter()
                        .map(|(runs, c)| (Word::from_runs(runs), c)),
                )
            })
        }

        proptest! {
            #[test]
            fn associativity(a in arb_element(), b in arb_element(), c in arb_element()) {
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            }

            #[test]
            fn distributivity(a in arb_element(), b in arb_element(), c in arb_element()) {
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            }

            #[test]
            fn unit_element(a in arb_element()) {
                prop_assert_eq!(GroupRingElement::one().mul(&a), a.clone());
                prop_assert_eq!(a.mul(&GroupRingElement::one()), a);
            }
        }
    }
}
