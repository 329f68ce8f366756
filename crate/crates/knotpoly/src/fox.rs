//! Free differential calculus on words and group-ring elements.
//!
//! The derivative `d/dx_j` is the unique Z-linear map on the free group
//! ring with `d(x_i)/dx_j = delta_ij` and the twisted product rule
//! `d(gh) = dg + g . dh`. A power run `x_j^k` contributes its closed-form
//! geometric sum, so the cost is linear in the number of runs plus the
//! exponents actually expanded.

use crate::freegroup::{GroupRingElement, Word};

/// Derivative of a single run `x_g^k` with respect to `x_j`.
fn run_derivative(g: usize, k: i64, j: usize) -> GroupRingElement {
    if g != j || k == 0 {
        return GroupRingElement::zero();
    }
    if k > 0 {
        // 1 + x + ... + x^(k-1)
        GroupRingElement::from_terms((0..k).map(|m| (Word::power(g, m), 1)))
    } else {
        // -(x^-1 + ... + x^k)
        GroupRingElement::from_terms((k..0).map(|m| (Word::power(g, m), -1)))
    }
}

/// Fox derivative of a word.
pub fn fox_derivative_word(w: &Word, j: usize) -> GroupRingElement {
    let mut result = GroupRingElement::zero();
    let mut prefix = Word::identity();
    for &(g, k) in w.runs() {
        let d = run_derivative(g, k, j);
        if !d.is_zero() {
            result = result.add(&GroupRingElement::word_mul(&prefix, &d));
        }
        prefix = prefix.mul(&Word::power(g, k));
    }
    result
}

/// Fox derivative extended linearly to group-ring elements.
pub fn fox_derivative(e: &GroupRingElement, j: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    for (w, c) in e.terms() {
        out = out.add(&fox_derivative_word(w, j).scale(c));
    }
    out
}

/// Verify the fundamental formula of free differentials on a word:
/// `w - 1 = sum_j (dw/dx_j)(x_j - 1)` holds exactly in the group ring.
/// Always true; exposed as a self-test oracle.
pub fn check_fundamental_formula(w: &Word, num_generators: usize) -> bool {
    let mut rhs = GroupRingElement::zero();
    for j in 0..num_generators {
        let d = fox_derivative_word(w, j);
        if d.is_zero() {
            continue;
        }
        let factor = GroupRingElement::from_word(Word::generator(j)).sub(&GroupRingElement::one());
        rhs = rhs.add(&d.mul(&factor));
    }
    let lhs = GroupRingElement::from_word(w.clone()).sub(&GroupRingElement::one());
    lhs == rhs
}
