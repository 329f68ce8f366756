//! The classical Alexander invariant of a presented knot group: the matrix
//! of abelianized free derivatives, its column-removed minors, the gcd
//! construction for deficiency above one, and the order-ideal route through
//! the module structure of the presentation complex.

use crate::field::CoeffField;
use crate::fox::fox_derivative_word;
use crate::laurent::{
    gcd_laurent, smith_normal_form, LaurentPoly, PolyMatrix, RatMatrix, RationalExpr,
};
use crate::presentation::Presentation;
use crate::{Error, Result};

/// The matrix `( alpha_*(dr_i/dx_j) )` over `Q[t, t^-1]`.
#[derive(Debug, Clone)]
pub struct AlexanderMatrix {
    pub matrix: PolyMatrix,
    /// Abelianization exponents of the source presentation.
    pub exponents: Vec<i64>,
}

/// Image of a group-ring element under the abelianization `x_i -> t^{e_i}`.
pub fn abelianize_ring_element(
    e: &crate::freegroup::GroupRingElement,
    exponents: &[i64],
) -> LaurentPoly {
    let field = CoeffField::Q;
    e.map_ring(
        |w| LaurentPoly::monomial(w.weight(exponents), field.one()),
        |a, b| a.add(&b),
        |p, n| p.scale(&field.from_i64(n)),
    )
    .unwrap_or_else(|| LaurentPoly::zero(field))
}

pub fn alexander_matrix(p: &Presentation) -> AlexanderMatrix {
    let e = p.abelian_exponents().to_vec();
    let n = p.num_generators();
    let mut matrix = PolyMatrix::zero(CoeffField::Q, p.num_relators(), n);
    for (i, r) in p.relators().iter().enumerate() {
        for j in 0..n {
            matrix[(i, j)] = abelianize_ring_element(&fox_derivative_word(r, j), &e);
        }
    }
    AlexanderMatrix {
        matrix,
        exponents: e,
    }
}

impl AlexanderMatrix {
    /// The image of the fundamental formula: every row satisfies
    /// `sum_j entry[i][j] (t^{e_j} - 1) = 0`.
    pub fn row_identity_holds(&self) -> bool {
        let field = CoeffField::Q;
        (0..self.matrix.rows).all(|i| {
            let mut acc = LaurentPoly::zero(field);
            for (j, &e) in self.exponents.iter().enumerate() {
                let factor = LaurentPoly::monomial(e, field.one()).sub(&LaurentPoly::one(field));
                acc = acc.add(&self.matrix[(i, j)].mul(&factor));
            }
            acc.is_zero()
        })
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// `Q_k`: the gcd of all maximal square minors of the Alexander matrix
/// avoiding column `k`. For a deficiency-one presentation this is just
/// `det A_k`.
pub fn minor_gcd(am: &AlexanderMatrix, k: usize) -> Result<LaurentPoly> {
    let m = am.matrix.rows;
    let n = am.matrix.cols;
    if n > 12 {
        return Err(Error::Guard(format!(
            "minor enumeration guard: {n} generators exceeds 12"
        )));
    }
    let s = m.min(n - 1);
    if s == 0 {
        return Ok(LaurentPoly::one(CoeffField::Q));
    }
    if m == n - 1 {
        // Deficiency-one fast path: the single column-removed determinant.
        return Ok(am.matrix.delete_column(k).det());
    }
    let col_pool: Vec<usize> = (0..n).filter(|&j| j != k).collect();
    let mut minors = Vec::new();
    for rows in subsets(m, s) {
        for cols in subsets(col_pool.len(), s) {
            let col_idx: Vec<usize> = cols.iter().map(|&c| col_pool[c]).collect();
            minors.push(am.matrix.submatrix(&rows, &col_idx).det());
        }
    }
    Ok(gcd_laurent(&minors))
}

/// The presentation-independent rational invariant `Q_k / (t^{e_k} - 1)`,
/// with `k` the smallest column whose generator survives abelianization.
pub fn alexander_invariant(p: &Presentation) -> Result<RationalExpr> {
    let am = alexander_matrix(p);
    let field = CoeffField::Q;
    let Some(k) = am.exponents.iter().position(|&e| e != 0) else {
        return Err(Error::Semantic(
            "degenerate abelianization: all generators die".into(),
        ));
    };
    let q_k = minor_gcd(&am, k)?;
    let den = LaurentPoly::monomial(am.exponents[k], field.one()).sub(&LaurentPoly::one(field));
    Ok(RationalExpr::new(q_k, den))
}

/// The Alexander polynomial, display-normalized to a primitive integer
/// polynomial with positive constant term. Errors if the invariant fails
/// to clear to a polynomial (does not happen for knot presentations).
pub fn alexander_polynomial(p: &Presentation) -> Result<LaurentPoly> {
    let field = CoeffField::Q;
    let inv = alexander_invariant(p)?;
    let t_minus_1 = LaurentPoly::from_ints(field, 0, &[-1, 1]);
    let delta = inv.mul(&RationalExpr::from_poly(t_minus_1));
    let Some(poly) = delta.as_poly() else {
        return Err(Error::Semantic(format!(
            "Alexander invariant is not polynomial: {delta}"
        )));
    };
    Ok(poly.int_normalize())
}

/// Does `f(t^-1)` agree with `f(t)` up to a unit?
pub fn check_symmetry(f: &LaurentPoly) -> bool {
    f.mirror().associate(f)
}

/// Orders of the homology of the presentation complex with `Q[t, t^-1]`
/// coefficients through the abelianization.
pub struct OrderIdeals {
    /// Generator of `ord H_1`, associate to the Alexander polynomial.
    pub h1: LaurentPoly,
    /// Generator of `ord H_0`, always associate to `t - 1`.
    pub h0: LaurentPoly,
}

/// Compute `ord H_1` and `ord H_0` of the presentation complex directly
/// from the module structure: a basis of `ker(d_1)` is extracted from a
/// Smith reduction of `d_1`, the image of `d_2` is rewritten in that basis,
/// and the order is the product of the invariant factors. This route is
/// independent of the determinant-based Alexander computation.
pub fn order_ideal_h1(p: &Presentation) -> Result<OrderIdeals> {
    if p.deficiency() != 1 {
        return Err(Error::Semantic(format!(
            "order ideal route needs a deficiency-one presentation, got deficiency {}",
            p.deficiency()
        )));
    }
    let field = CoeffField::Q;
    let n = p.num_generators();
    let am = alexander_matrix(p);

    // d_1 : C_1 -> C_0 is the row (t^{e_j} - 1).
    let d1_entries: Vec<LaurentPoly> = am
        .exponents
        .iter()
        .map(|&e| LaurentPoly::monomial(e, field.one()).sub(&LaurentPoly::one(field)))
        .collect();
    let h0 = gcd_laurent(&d1_entries);

    let d1 = PolyMatrix::from_rows(field, vec![d1_entries]);
    let snf1 = smith_normal_form(&d1);
    debug_assert_eq!(snf1.rank, 1);
    // Columns 1..n of V span ker(d_1) as a free module.
    let mut kernel = PolyMatrix::zero(field, n, n - 1);
    for i in 0..n {
        for j in 1..n {
            kernel[(i, j - 1)] = snf1.v[(i, j)].clone();
        }
    }

    // d_2 : C_2 -> C_1 has the Fox rows as columns.
    let m = p.num_relators();
    let mut d2 = PolyMatrix::zero(field, n, m);
    for i in 0..m {
        for j in 0..n {
            d2[(j, i)] = am.matrix[(i, j)].clone();
        }
    }

    // Coordinates of im(d_2) in the kernel basis; entries must be Laurent.
    let coords = RatMatrix::from_poly_matrix(&kernel)
        .solve(&RatMatrix::from_poly_matrix(&d2))
        .ok_or_else(|| Error::Internal("image of d_2 must lie in ker(d_1)".into()))?;
    let mut rel = PolyMatrix::zero(field, n - 1, m);
    for i in 0..n - 1 {
        for j in 0..m {
            rel[(i, j)] = coords[(i, j)].as_poly().ok_or_else(|| {
                Error::Internal("kernel coordinates must be Laurent polynomials".into())
            })?;
        }
    }

    let snf2 = smith_normal_form(&rel);
    let mut h1 = LaurentPoly::one(field);
    for d in &snf2.diagonal {
        h1 = h1.mul(d);
    }
    Ok(OrderIdeals {
        h1: h1.unit_normal(),
        h0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::Word;
    use crate::presentation::parse_presentation;

    fn trefoil() -> Presentation {
        parse_presentation("name 3_1\ngens x y\nrel x y x = y x y\n").unwrap()
    }

    fn figure_eight() -> Presentation {
        parse_presentation("name 4_1\ngens x y\nrel x^-1 y x y^-1 x = y x^-1 y x y^-1\n").unwrap()
    }

    fn unknot() -> Presentation {
        parse_presentation("name unknot\ngens x\n").unwrap()
    }

    fn q() -> CoeffField {
        CoeffField::Q
    }

    #[test]
    fn trefoil_matrix() {
        let am = alexander_matrix(&trefoil());
        assert_eq!((am.matrix.rows, am.matrix.cols), (1, 2));
        let f = LaurentPoly::from_ints(q(), 0, &[1, -1, 1]);
        assert_eq!(am.matrix[(0, 0)], f);
        assert_eq!(am.matrix[(0, 1)], f.neg());
        assert!(am.row_identity_holds());
    }

    #[test]
    fn extended_trefoil_matrix() {
        let p = parse_presentation("gens x y z\nrel x y x = y x y\nrel x y = z\n").unwrap();
        let am = alexander_matrix(&p);
        assert_eq!((am.matrix.rows, am.matrix.cols), (2, 3));
        // second row is (1, t, -1)
        assert_eq!(am.matrix[(1, 0)], LaurentPoly::one(q()));
        assert_eq!(am.matrix[(1, 1)], LaurentPoly::var(q()));
        assert_eq!(am.matrix[(1, 2)], LaurentPoly::one(q()).neg());
        assert!(am.row_identity_holds());
        assert!(alexander_polynomial(&p)
            .unwrap()
            .associate(&LaurentPoly::from_ints(q(), 0, &[1, -1, 1])));
    }

    #[test]
    fn unknot_matrix_is_empty() {
        let am = alexander_matrix(&unknot());
        assert_eq!((am.matrix.rows, am.matrix.cols), (0, 1));
        assert!(alexander_polynomial(&unknot()).unwrap().is_one());
    }

    #[test]
    fn classical_values() {
        assert_eq!(
            alexander_polynomial(&trefoil()).unwrap(),
            LaurentPoly::from_ints(q(), 0, &[1, -1, 1])
        );
        assert_eq!(
            alexander_polynomial(&figure_eight()).unwrap(),
            LaurentPoly::from_ints(q(), 0, &[1, -3, 1])
        );
    }

    #[test]
    fn torus_presentation_gives_classical_polynomial() {
        let t23 = parse_presentation("gens x y\nrel x^2 y^-3\n").unwrap();
        assert_eq!(
            alexander_polynomial(&t23).unwrap(),
            LaurentPoly::from_ints(q(), 0, &[1, -1, 1])
        );
        let t25 = parse_presentation("gens x y\nrel x^2 y^-5\n").unwrap();
        assert_eq!(
            alexander_polynomial(&t25).unwrap(),
            LaurentPoly::from_ints(q(), 0, &[1, -1, 1, -1, 1])
        );
    }

    #[test]
    fn symmetry_examples() {
        assert!(check_symmetry(&LaurentPoly::from_ints(q(), 0, &[1, -1, 1])));
        assert!(check_symmetry(&LaurentPoly::from_ints(q(), 0, &[1, -3, 1])));
        assert!(!check_symmetry(&LaurentPoly::from_ints(
            q(),
            0,
            &[-1, 1, 1]
        )));
    }

    #[test]
    fn column_independence_identity() {
        // (t^{e_l} - 1) det A_k = +- (t^{e_k} - 1) det A_l
        for p in [trefoil(), figure_eight()] {
            let am = alexander_matrix(&p);
            let f = q();
            for k in 0..2 {
                for l in 0..2 {
                    let det_k = am.matrix.delete_column(k).det();
                    let det_l = am.matrix.delete_column(l).det();
                    let ek =
                        LaurentPoly::monomial(am.exponents[k], f.one()).sub(&LaurentPoly::one(f));
                    let el =
                        LaurentPoly::monomial(am.exponents[l], f.one()).sub(&LaurentPoly::one(f));
                    let lhs = el.mul(&det_k);
                    let rhs = ek.mul(&det_l);
                    assert!(lhs == rhs || lhs == rhs.neg());
                }
            }
        }
    }

    #[test]
    fn order_ideal_matches_alexander() {
        for p in [
            trefoil(),
            figure_eight(),
            unknot(),
            parse_presentation("gens x y\nrel x^2 y^-3\n").unwrap(),
        ] {
            let ords = order_ideal_h1(&p).unwrap();
            let delta = alexander_polynomial(&p).unwrap();
            assert!(
                ords.h1.associate(&delta),
                "{}: {} vs {}",
                p.name,
                ords.h1,
                delta
            );
            assert!(ords.h0.associate(&LaurentPoly::from_ints(q(), 0, &[-1, 1])));
        }
    }

    #[test]
    fn tietze_invariance_of_alexander() {
        let p = trefoil();
        let delta = alexander_polynomial(&p).unwrap();
        // (I): add a conjugated consequence
        let q1 = p
            .tietze_add_consequence(&[(Word::generator(0), 0, 1)])
            .unwrap();
        assert!(alexander_polynomial(&q1).unwrap().associate(&delta));
        // (I) with an inverse relator
        let q2 = p
            .tietze_add_consequence(&[(Word::identity(), 0, -1)])
            .unwrap();
        assert!(alexander_polynomial(&q2).unwrap().associate(&delta));
        // (II)
        let q3 = p
            .tietze_add_generator(&Word::generator(0).mul(&Word::generator(1)))
            .unwrap();
        assert!(alexander_polynomial(&q3).unwrap().associate(&delta));
        // strong moves
        let q4 = p.tietze_invert_relator(0).unwrap();
        assert!(alexander_polynomial(&q4).unwrap().associate(&delta));
        let q5 = q3.tietze_conjugate_relator(0, &Word::generator(2)).unwrap();
        assert!(alexander_polynomial(&q5).unwrap().associate(&delta));
        let q6 = q3.tietze_multiply_relator(0, 1).unwrap();
        assert!(alexander_polynomial(&q6).unwrap().associate(&delta));
    }
}
