//! Reidemeister torsion of based acyclic chain complexes over the rational
//! function field, the two-term complex of a presentation, and the
//! identities tying torsion to the Alexander invariants.

use crate::alexander::alexander_polynomial;
use crate::field::CoeffField;
use crate::fox::fox_derivative_word;
use crate::laurent::{LaurentPoly, PolyMatrix, RatMatrix, RationalExpr};
use crate::presentation::Presentation;
use crate::representation::Representation;
use crate::twisted::{phi_element, twisted_alexander};
use crate::{Error, Result};

/// A based chain complex `0 -> C_m -> ... -> C_1 -> C_0 -> 0` over `F(t)`.
/// The preferred basis of each degree is the coordinate basis;
/// `boundaries[q]` is the matrix of `d_q : C_q -> C_{q-1}` (so
/// `boundaries[0]` is a `0 x dims[0]` matrix).
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<RatMatrix>,
}

impl ChainComplex {
    /// Validate shapes and `d_q . d_{q+1} = 0`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<RatMatrix>) -> Result<Self> {
        if boundaries.len() != dims.len() {
            return Err(Error::Semantic(
                "need one boundary matrix per degree".into(),
            ));
        }
        for q in 0..dims.len() {
            let expected_rows = if q == 0 { 0 } else { dims[q - 1] };
            if boundaries[q].rows != expected_rows || boundaries[q].cols != dims[q] {
                return Err(Error::Semantic(format!(
                    "boundary {q} has shape {}x{}, expected {}x{}",
                    boundaries[q].rows, boundaries[q].cols, expected_rows, dims[q]
                )));
            }
        }
        for q in 1..dims.len() {
            if !boundaries[q - 1].mul(&boundaries[q]).is_zero() {
                return Err(Error::Semantic(format!("d_{} . d_{} != 0", q - 1, q)));
            }
        }
        Ok(ChainComplex { dims, boundaries })
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }
}

/// Acyclicity via exact rank computation: `rank d_q + rank d_{q+1} = dim C_q`
/// in every degree.
pub fn is_acyclic(c: &ChainComplex) -> bool {
    let m = c.top_degree();
    (0..=m).all(|q| {
        let r_q = c.boundaries[q].rank();
        let r_up = if q == m {
            0
        } else {
            c.boundaries[q + 1].rank()
        };
        r_q + r_up == c.dims[q]
    })
}

/// Reidemeister torsion of a based acyclic complex, computed with the image
/// bases `b_q` chosen as pivot columns of `d_{q+1}` and the pivot columns
/// themselves as lifts. Any choice gives the same value; `column_orders`
/// (one permutation per degree, used when selecting pivots of `d_q`) exists
/// so tests can randomize the choice.
pub fn torsion_with_orders(
    c: &ChainComplex,
    column_orders: Option<&[Vec<usize>]>,
) -> Result<RationalExpr> {
    let field = c.boundaries[0].field;
    let m = c.top_degree();

    // pivots[q]: columns of d_q whose images form the basis b_{q-1}
    let mut pivots: Vec<Vec<usize>> = Vec::with_capacity(m + 1);
    for q in 0..=m {
        let default_order: Vec<usize> = (0..c.dims[q]).collect();
        let order = match column_orders {
            Some(orders) => &orders[q],
            None => &default_order,
        };
        pivots.push(c.boundaries[q].pivot_columns(order));
    }

    let mut numerator = RationalExpr::one(field);
    let mut denominator = RationalExpr::one(field);
    for q in 0..=m {
        let dim = c.dims[q];
        let image_cols = if q == m {
            Vec::new()
        } else {
            pivots[q + 1].clone()
        };
        if image_cols.len() + pivots[q].len() != dim {
            return Err(Error::Semantic(
                "complex is not acyclic; torsion undefined".into(),
            ));
        }
        // Transition matrix from the coordinate basis to (b_q, lifted b_{q-1}).
        let mut t_q = RatMatrix::zero(field, dim, dim);
        for (jj, &src) in image_cols.iter().enumerate() {
            for i in 0..dim {
                t_q[(i, jj)] = c.boundaries[q + 1][(i, src)].clone();
            }
        }
        for (jj, &src) in pivots[q].iter().enumerate() {
            t_q[(src, image_cols.len() + jj)] = RationalExpr::one(field);
        }
        let det = t_q.det();
        if det.is_zero() {
            return Err(Error::Internal(
                "transition matrix is singular on an acyclic complex".into(),
            ));
        }
        if q % 2 == 1 {
            numerator = numerator.mul(&det);
        } else {
            denominator = denominator.mul(&det);
        }
    }
    Ok(numerator.div(&denominator))
}

/// Torsion with the deterministic left-to-right pivot choice.
pub fn torsion(c: &ChainComplex) -> Result<RationalExpr> {
    torsion_with_orders(c, None)
}

/// The two-term based complex `0 -> C_2 -> C_1 -> C_0 -> 0` of a
/// presentation, with coefficients given by one invertible polynomial
/// matrix per generator (the images must kill the relators).
pub fn presentation_complex(p: &Presentation, images: &[PolyMatrix]) -> Result<ChainComplex> {
    let n = p.num_generators();
    if images.len() != n {
        return Err(Error::Semantic(format!(
            "need {n} coefficient images, got {}",
            images.len()
        )));
    }
    let l = images[0].rows;
    let field = images[0].field;
    for img in images {
        if img.rows != l || img.cols != l {
            return Err(Error::Semantic(
                "coefficient images must share one square shape".into(),
            ));
        }
        if img.det().is_zero() {
            return Err(Error::Semantic(
                "coefficient image is not invertible".into(),
            ));
        }
    }
    let eval_word = |w: &crate::freegroup::Word| -> Result<PolyMatrix> {
        let mut acc = PolyMatrix::identity(field, l);
        for &(g, e) in w.runs() {
            if e > 0 {
                for _ in 0..e {
                    acc = acc.mul(&images[g]);
                }
            } else {
                let inv = invert_poly_matrix(&images[g]).ok_or_else(|| {
                    Error::Semantic("coefficient image is not invertible over F(t)".into())
                })?;
                for _ in 0..e.unsigned_abs() {
                    acc = acc.mul(&inv);
                }
            }
        }
        Ok(acc)
    };
    for r in p.relators() {
        let img = eval_word(r)?;
        if img != PolyMatrix::identity(field, l) {
            return Err(Error::Semantic(
                "coefficient map does not kill the relators".into(),
            ));
        }
    }

    // The fundamental formula reads sum_j Phi(dr/dx_j) (Phi(x_j) - I) = 0
    // with the derivative on the left, so the cells pair with row vectors;
    // in column convention the boundary matrices carry transposed blocks.
    let m = p.num_relators();
    // d_1 : C_1 -> C_0, block column j = (images[j] - I)^T
    let mut d1 = PolyMatrix::zero(field, l, n * l);
    for j in 0..n {
        let block = images[j].sub(&PolyMatrix::identity(field, l));
        for bi in 0..l {
            for bj in 0..l {
                d1[(bi, j * l + bj)] = block[(bj, bi)].clone();
            }
        }
    }
    // d_2 : C_2 -> C_1, block (j, i) = Phi(dr_i/dx_j)^T
    let mut d2 = PolyMatrix::zero(field, n * l, m * l);
    for (i, rel) in p.relators().iter().enumerate() {
        for j in 0..n {
            let mut block = PolyMatrix::zero(field, l, l);
            for (w, c) in fox_derivative_word(rel, j).terms() {
                let scaled = eval_word(w)?.scale(&LaurentPoly::constant(field.from_i64(c)));
                block = block.add(&scaled);
            }
            for bi in 0..l {
                for bj in 0..l {
                    d2[(j * l + bi, i * l + bj)] = block[(bj, bi)].clone();
                }
            }
        }
    }

    ChainComplex::new(
        vec![l, n * l, m * l],
        vec![
            RatMatrix::zero(field, 0, l),
            RatMatrix::from_poly_matrix(&d1),
            RatMatrix::from_poly_matrix(&d2),
        ],
    )
}

fn invert_poly_matrix(m: &PolyMatrix) -> Option<PolyMatrix> {
    // invert over F(t), then clear the (necessarily unit) denominators
    let n = m.rows;
    let r = RatMatrix::from_poly_matrix(m);
    let mut identity = RatMatrix::zero(m.field, n, n);
    for i in 0..n {
        identity[(i, i)] = RationalExpr::one(m.field);
    }
    let inv = r.solve(&identity)?;
    let mut out = PolyMatrix::zero(m.field, n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = inv[(i, j)].as_poly()?;
        }
    }
    Some(out)
}

/// Coefficient images for the abelianization `x_j -> t^{e_j}` over `Q(t)`.
pub fn alpha_images(p: &Presentation) -> Vec<PolyMatrix> {
    let field = CoeffField::Q;
    p.abelian_exponents()
        .iter()
        .map(|&e| {
            let mut m = PolyMatrix::zero(field, 1, 1);
            m[(0, 0)] = LaurentPoly::monomial(e, field.one());
            m
        })
        .collect()
}

/// Coefficient images for `rho` tensored with the inverse abelianization,
/// `x_j -> t^{-e_j} rho(x_j)`, the convention under which torsion equals
/// the twisted invariant after `t -> t^{-1}`.
pub fn rho_alpha_bar_images(p: &Presentation, r: &Representation) -> Vec<PolyMatrix> {
    (0..p.num_generators())
        .map(|j| {
            phi_element(
                &crate::freegroup::GroupRingElement::from_word(crate::freegroup::Word::generator(
                    j,
                )),
                r,
                p.abelian_exponents(),
                true,
            )
        })
        .collect()
}

/// The Milnor comparison: torsion of the alpha-twisted presentation
/// complex against `Delta_K(t) / (t - 1)`, up to units.
pub fn milnor_check(p: &Presentation) -> Result<bool> {
    let complex = presentation_complex(p, &alpha_images(p))?;
    if !is_acyclic(&complex) {
        return Err(Error::Semantic("alpha complex is not acyclic".into()));
    }
    let tau = torsion(&complex)?;
    let delta = alexander_polynomial(p)?;
    let rhs = RationalExpr::new(delta, LaurentPoly::from_ints(CoeffField::Q, 0, &[-1, 1]));
    Ok(tau.associate(&rhs))
}

/// Outcome of the torsion/twisted-invariant comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionTwistedOutcome {
    /// Torsion agrees with the twisted invariant under `t -> t^{-1}`.
    Agrees,
    Disagrees,
    /// The twisted complex is not acyclic; the comparison is skipped.
    NotAcyclic,
}

/// Compare Reidemeister torsion of the complex twisted by
/// `x -> t^{-e} rho(x)` with the twisted Alexander polynomial. The
/// inverse-abelianization convention mirrors the variable, so the match is
/// `tau(t) = Delta_{K,rho}(t^{-1})` up to units; this convention is pinned
/// by the trefoil test below.
pub fn twisted_torsion_check(
    p: &Presentation,
    r: &Representation,
) -> Result<TorsionTwistedOutcome> {
    let complex = presentation_complex(p, &rho_alpha_bar_images(p, r))?;
    if !is_acyclic(&complex) {
        return Ok(TorsionTwistedOutcome::NotAcyclic);
    }
    let tau = torsion(&complex)?;
    let wada = twisted_alexander(p, r)?;
    if tau.mirror().associate(&wada.reduced) {
        Ok(TorsionTwistedOutcome::Agrees)
    } else {
        Ok(TorsionTwistedOutcome::Disagrees)
    }
}
