//! Laurent polynomials over a coefficient field, with the exact matrix
//! kernels built on them: fraction-free determinants, gcd, polynomial
//! division, and Smith normal form.
//!
//! A [`LaurentPoly`] is stored densely between its lowest and highest
//! nonzero degree. The zero polynomial has an empty coefficient list and
//! lowest degree 0, so equal values are always bit-identical.

use crate::field::{CoeffField, Scalar};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: CoeffField,
    low: i64,
    coeffs: Vec<Scalar>,
}

impl LaurentPoly {
    pub fn zero(field: CoeffField) -> Self {
        LaurentPoly {
            field,
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: CoeffField) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_coeffs(c.field(), 0, vec![c])
    }

    /// `c * t^deg`
    pub fn monomial(deg: i64, c: Scalar) -> Self {
        Self::from_coeffs(c.field(), deg, vec![c])
    }

    /// The variable `t`.
    pub fn var(field: CoeffField) -> Self {
        Self::monomial(1, field.one())
    }

    /// Build from a dense coefficient slice starting at degree `low`,
    /// trimming leading and trailing zeros.
    pub fn from_coeffs(field: CoeffField, low: i64, coeffs: Vec<Scalar>) -> Self {
        let mut p = LaurentPoly { field, low, coeffs };
        p.normalize();
        p
    }

    /// Convenience: integer coefficients `[c_low, ..., c_high]` from degree `low`.
    pub fn from_ints(field: CoeffField, low: i64, ints: &[i64]) -> Self {
        Self::from_coeffs(
            field,
            low,
            ints.iter().map(|&n| field.from_i64(n)).collect(),
        )
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn field(&self) -> CoeffField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Units of `F[t, t^-1]` are the nonzero monomials `c * t^s`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn low_degree(&self) -> i64 {
        self.low
    }

    pub fn high_degree(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// `high - low` for nonzero polynomials; 0 for the zero polynomial.
    pub fn degree_span(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.coeffs.len() as i64 - 1
        }
    }

    pub fn coeff(&self, deg: i64) -> Scalar {
        if self.is_zero() || deg < self.low || deg > self.high_degree() {
            self.field.zero()
        } else {
            self.coeffs[(deg - self.low) as usize].clone()
        }
    }

    /// Coefficient of the highest-degree term (zero for the zero polynomial).
    pub fn leading_coeff(&self) -> Scalar {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Coefficient of the lowest-degree term.
    pub fn trailing_coeff(&self) -> Scalar {
        self.coeffs
            .first()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high_degree().max(other.high_degree());
        let mut coeffs = vec![self.field.zero(); (high - low + 1) as usize];
        for (d, c) in self.iter_terms() {
            coeffs[(d - low) as usize] = c.clone();
        }
        for (d, c) in other.iter_terms() {
            let slot = &mut coeffs[(d - low) as usize];
            *slot = slot.add(c);
        }
        LaurentPoly::from_coeffs(self.field, low, coeffs)
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            field: self.field,
            low: self.low,
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero(self.field);
        }
        let low = self.low + other.low;
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let slot = &mut coeffs[i + j];
                *slot = slot.add(&a.mul(b));
            }
        }
        LaurentPoly::from_coeffs(self.field, low, coeffs)
    }

    pub fn scale(&self, s: &Scalar) -> LaurentPoly {
        if s.is_zero() {
            return LaurentPoly::zero(self.field);
        }
        LaurentPoly {
            field: self.field,
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    /// Multiply by `t^s`.
    pub fn shift(&self, s: i64) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            field: self.field,
            low: self.low + s,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Evaluate at a nonzero scalar (nonzero is required when the
    /// polynomial has negative-degree terms).
    pub fn eval(&self, a: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for (d, c) in self.iter_terms() {
            acc = acc.add(&c.mul(&a.pow(d)));
        }
        acc
    }

    /// Substitute `t -> a*t`: the coefficient of `t^d` picks up a factor `a^d`.
    pub fn subst_scale(&self, a: &Scalar) -> LaurentPoly {
        let coeffs = self.iter_terms().map(|(d, c)| c.mul(&a.pow(d))).collect();
        LaurentPoly::from_coeffs(self.field, self.low, coeffs)
    }

    /// Substitute `t -> t^-1`.
    pub fn mirror(&self) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly::from_coeffs(self.field, -self.high_degree(), coeffs)
    }

    /// Reinterpret coefficients in another field. For `Q -> F_p` the
    /// coefficients must have denominators invertible mod `p`.
    pub fn map_field(&self, target: CoeffField) -> Result<LaurentPoly> {
        if target == self.field {
            return Ok(self.clone());
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let mapped = match (c, target) {
                (Scalar::Q(r), CoeffField::Fp(_)) => {
                    let num = target.from_bigint(r.numer());
                    let den = target.from_bigint(r.denom());
                    if den.is_zero() {
                        return Err(Error::Semantic(format!(
                            "denominator {} not invertible in {target}",
                            r.denom()
                        )));
                    }
                    num.div(&den)
                }
                (Scalar::Fp { v, .. }, CoeffField::Q) => target.from_i64(*v as i64),
                _ => {
                    return Err(Error::Semantic(format!(
                        "cannot map {} into {target}",
                        self.field
                    )))
                }
            };
            coeffs.push(mapped);
        }
        Ok(LaurentPoly::from_coeffs(target, self.low, coeffs))
    }

    /// Quotient and remainder with `deg(r) < deg(d)`, treating both
    /// operands as ordinary polynomials (lowest degree must be >= 0).
    pub fn div_rem(&self, d: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        debug_assert!(self.is_zero() || self.low >= 0, "div_rem needs low >= 0");
        debug_assert!(d.low >= 0, "div_rem needs low >= 0");
        let mut rem = self.clone();
        let mut quo = LaurentPoly::zero(self.field);
        let d_lead = d.leading_coeff();
        let d_deg = d.high_degree();
        while !rem.is_zero() && rem.high_degree() >= d_deg {
            let c = rem.leading_coeff().div(&d_lead);
            let shift = rem.high_degree() - d_deg;
            let term = LaurentPoly::monomial(shift, c);
            quo = quo.add(&term);
            rem = rem.sub(&d.mul(&term));
        }
        (quo, rem)
    }

    /// Exact division in the Laurent ring: `self = q * d` or `None`.
    pub fn exact_div(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(LaurentPoly::zero(self.field));
        }
        let a = self.shift(-self.low);
        let b = d.shift(-d.low);
        let (q, r) = a.div_rem(&b);
        if r.is_zero() {
            Some(q.shift(self.low - d.low))
        } else {
            None
        }
    }

    /// Unit normal form: the unique associate with lowest degree 0 and
    /// leading coefficient 1. Two Laurent polynomials are equal up to
    /// `c * t^s` exactly when their unit normal forms are identical.
    pub fn unit_normal(&self) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lead_inv = self.leading_coeff().inv();
        self.shift(-self.low).scale(&lead_inv)
    }

    /// Are `self` and `other` equal up to a unit `c * t^s`?
    pub fn associate(&self, other: &LaurentPoly) -> bool {
        self.unit_normal() == other.unit_normal()
    }

    /// Display normalization for integer output over `Q`: lowest degree 0,
    /// integer coefficients with content 1, positive trailing coefficient.
    pub fn int_normalize(&self) -> LaurentPoly {
        assert_eq!(self.field, CoeffField::Q, "integer normalization is for Q");
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in &self.coeffs {
            let r = c.as_rational().expect("Q scalar");
            den_lcm = den_lcm.lcm(r.denom());
        }
        let scaled: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c.as_rational().unwrap();
                r.numer() * (&den_lcm / r.denom())
            })
            .collect();
        for n in &scaled {
            num_gcd = num_gcd.gcd(n);
        }
        let sign = if scaled[0].is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let divisor = num_gcd * sign;
        let coeffs = scaled
            .iter()
            .map(|n| CoeffField::Q.from_bigint(&(n / &divisor)))
            .collect();
        LaurentPoly::from_coeffs(CoeffField::Q, 0, coeffs)
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending-degree text form, e.g. `t^-2 - 3*t^-1 + 6 - 3*t + t^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.iter_terms() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = match c {
                Scalar::Q(r) => (r.is_negative(), Scalar::Q(r.abs())),
                other => (false, other.clone()),
            };
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
            let coeff_is_one = mag.is_one();
            match (deg, coeff_is_one) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{deg}")?,
                (_, false) => write!(f, "{mag}*t^{deg}")?,
            }
        }
        Ok(())
    }
}

/// Gcd of a list of Laurent polynomials, in unit normal form.
/// All-zero input returns 0 (the gcd of the zero ideal).
pub fn gcd_laurent(fs: &[LaurentPoly]) -> LaurentPoly {
    let field = fs.first().map_or(CoeffField::Q, LaurentPoly::field);
    let mut acc = LaurentPoly::zero(field);
    for f in fs {
        acc = gcd_pair(&acc, f);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn gcd_pair(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.unit_normal();
    }
    if b.is_zero() {
        return a.unit_normal();
    }
    let mut x = a.shift(-a.low_degree());
    let mut y = b.shift(-b.low_degree());
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y);
        x = y;
        y = r.shift(-r.low_degree());
        if y.is_zero() {
            break;
        }
    }
    x.unit_normal()
}

/// Does `d` divide `f` in the Laurent polynomial ring?
/// Conventions: everything divides 0; 0 divides only 0.
pub fn divides(d: &LaurentPoly, f: &LaurentPoly) -> bool {
    if d.is_zero() {
        return f.is_zero();
    }
    f.exact_div(d).is_some()
}

/// Matrix over Laurent polynomials with a common coefficient field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub field: CoeffField,
    data: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn zero(field: CoeffField, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            field,
            data: vec![LaurentPoly::zero(field); rows * cols],
        }
    }

    pub fn identity(field: CoeffField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = LaurentPoly::one(field);
        }
        m
    }

    pub fn from_rows(field: CoeffField, rows: Vec<Vec<LaurentPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        PolyMatrix {
            rows: r,
            cols: c,
            field,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(LaurentPoly::is_zero)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = PolyMatrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = self[(i, k)].mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&t);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.neg();
        }
        out
    }

    pub fn scale(&self, s: &LaurentPoly) -> PolyMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.mul(s);
        }
        out
    }

    pub fn delete_column(&self, k: usize) -> PolyMatrix {
        assert!(k < self.cols);
        let mut out = PolyMatrix::zero(self.field, self.rows, self.cols - 1);
        for i in 0..self.rows {
            let mut jj = 0;
            for j in 0..self.cols {
                if j == k {
                    continue;
                }
                out[(i, jj)] = self[(i, j)].clone();
                jj += 1;
            }
        }
        out
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.field, row_idx.len(), col_idx.len());
        for (i, &r) in row_idx.iter().enumerate() {
            for (j, &c) in col_idx.iter().enumerate() {
                out[(i, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Exact determinant. Each row is first shifted by a power of `t` so
    /// entries live in the ordinary polynomial ring, then fraction-free
    /// Bareiss elimination runs there; divisions are exact by the Bareiss
    /// identity. The tracked `t`-shift is reapplied at the end.
    pub fn det(&self) -> LaurentPoly {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return LaurentPoly::one(self.field);
        }
        let mut shift = 0i64;
        let mut m: Vec<Vec<LaurentPoly>> = Vec::with_capacity(n);
        for i in 0..n {
            let row_low = (0..n)
                .filter(|&j| !self[(i, j)].is_zero())
                .map(|j| self[(i, j)].low_degree())
                .min();
            let Some(row_low) = row_low else {
                return LaurentPoly::zero(self.field);
            };
            shift += row_low;
            m.push((0..n).map(|j| self[(i, j)].shift(-row_low)).collect());
        }
        let mut sign = false;
        let mut prev = LaurentPoly::one(self.field);
        for k in 0..n - 1 {
            let pivot = (k..n).find(|&i| !m[i][k].is_zero());
            let Some(pr) = pivot else {
                return LaurentPoly::zero(self.field);
            };
            if pr != k {
                m.swap(pr, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = num
                        .exact_div(&prev)
                        .expect("Bareiss division must be exact");
                }
                m[i][k] = LaurentPoly::zero(self.field);
            }
            prev = m[k][k].clone();
        }
        let mut det = m[n - 1][n - 1].shift(shift);
        if sign {
            det = det.neg();
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = LaurentPoly;
    fn index(&self, (i, j): (usize, usize)) -> &LaurentPoly {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut LaurentPoly {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a Smith normal form computation over `F[t]`.
pub struct SmithNormalForm {
    /// Diagonal entries in unit normal form, `d_1 | d_2 | ...`, zeros last.
    pub diagonal: Vec<LaurentPoly>,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
    /// Left transform: `u * a * v` is diagonal.
    pub u: PolyMatrix,
    /// Right transform.
    pub v: PolyMatrix,
}

/// Smith normal form of a Laurent polynomial matrix over the PID `F[t]`
/// (units `t^s` are factored away first, which is legal over `F[t,t^-1]`).
pub fn smith_normal_form(a: &PolyMatrix) -> SmithNormalForm {
    let field = a.field;
    let (rows, cols) = (a.rows, a.cols);
    let mut m = a.clone();
    let mut u = PolyMatrix::identity(field, rows);
    let mut v = PolyMatrix::identity(field, cols);

    // Strip t^s units so every entry is an ordinary polynomial.
    for i in 0..rows {
        let low = (0..cols)
            .filter(|&j| !m[(i, j)].is_zero())
            .map(|j| m[(i, j)].low_degree())
            .min();
        if let Some(low) = low {
            for j in 0..cols {
                m[(i, j)] = m[(i, j)].shift(-low);
            }
            for j in 0..rows {
                u[(i, j)] = u[(i, j)].shift(-low);
            }
        }
    }

    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // Locate a nonzero entry of minimal degree in the remaining block.
            let mut best: Option<(usize, usize, i64)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[(i, j)].is_zero() {
                        continue;
                    }
                    let d = m[(i, j)].degree_span() + m[(i, j)].low_degree();
                    if best.is_none_or(|(_, _, bd)| d < bd) {
                        best = Some((i, j, d));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                let diagonal: Vec<LaurentPoly> = (0..n).map(|i| m[(i, i)].unit_normal()).collect();
                let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
                return SmithNormalForm {
                    diagonal,
                    rank,
                    u,
                    v,
                };
            };
            if pi != t {
                swap_rows(&mut m, pi, t);
                swap_rows(&mut u, pi, t);
            }
            if pj != t {
                swap_cols(&mut m, pj, t);
                swap_cols(&mut v, pj, t);
            }
            let mut disturbed = false;
            // Clear the pivot column.
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let (q, _r) = m[(i, t)].div_rem(&m[(t, t)]);
                row_sub(&mut m, i, t, &q);
                row_sub(&mut u, i, t, &q);
                if !m[(i, t)].is_zero() {
                    disturbed = true;
                }
            }
            // Clear the pivot row.
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let (q, _r) = m[(t, j)].div_rem(&m[(t, t)]);
                col_sub(&mut m, j, t, &q);
                col_sub(&mut v, j, t, &q);
                if !m[(t, j)].is_zero() {
                    disturbed = true;
                }
            }
            if disturbed {
                continue;
            }
            // Pivot must divide the rest of the block for the chain d_i | d_{i+1};
            // if it does not, fold the offending row into the pivot row and redo.
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !m[(i, j)].is_zero() && m[(i, j)].exact_div(&m[(t, t)]).is_none() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = LaurentPoly::one(field);
                    row_add(&mut m, t, i, &one);
                    row_add(&mut u, t, i, &one);
                }
                None => break,
            }
        }
    }

    let diagonal: Vec<LaurentPoly> = (0..n).map(|i| m[(i, i)].unit_normal()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    SmithNormalForm {
        diagonal,
        rank,
        u,
        v,
    }
}

fn swap_rows(m: &mut PolyMatrix, a: usize, b: usize) {
    for j in 0..m.cols {
        let tmp = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = tmp;
    }
}

fn swap_cols(m: &mut PolyMatrix, a: usize, b: usize) {
    for i in 0..m.rows {
        let tmp = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = tmp;
    }
}

/// row_a -= q * row_b
fn row_sub(m: &mut PolyMatrix, a: usize, b: usize, q: &LaurentPoly) {
    for j in 0..m.cols {
        let t = q.mul(&m[(b, j)]);
        m[(a, j)] = m[(a, j)].sub(&t);
    }
}

/// row_a += q * row_b
fn row_add(m: &mut PolyMatrix, a: usize, b: usize, q: &LaurentPoly) {
    for j in 0..m.cols {
        let t = q.mul(&m[(b, j)]);
        m[(a, j)] = m[(a, j)].add(&t);
    }
}

/// col_a -= q * col_b
fn col_sub(m: &mut PolyMatrix, a: usize, b: usize, q: &LaurentPoly) {
    for i in 0..m.rows {
        let t = q.mul(&m[(i, b)]);
        m[(i, a)] = m[(i, a)].sub(&t);
    }
}

/// A quotient of Laurent polynomials in reduced canonical form: the
/// denominator is nonzero with unit normal form applied, and the gcd
/// of numerator and denominator is a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalExpr {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalExpr {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut e = RationalExpr { num, den };
        e.reduce();
        e
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let one = LaurentPoly::one(p.field());
        RationalExpr { num: p, den: one }
    }

    pub fn zero(field: CoeffField) -> Self {
        Self::from_poly(LaurentPoly::zero(field))
    }

    pub fn one(field: CoeffField) -> Self {
        Self::from_poly(LaurentPoly::one(field))
    }

    fn reduce(&mut self) {
        let field = self.num.field();
        if self.num.is_zero() {
            self.den = LaurentPoly::one(field);
            return;
        }
        let g = gcd_pair(&self.num, &self.den);
        if !g.is_one() {
            self.num = self.num.exact_div(&g).expect("gcd divides");
            self.den = self.den.exact_div(&g).expect("gcd divides");
        }
        // Push the denominator's unit into the numerator.
        let den_norm = self.den.unit_normal();
        let unit = self.den.exact_div(&den_norm).expect("unit factor");
        debug_assert!(unit.is_unit());
        let unit_inv = LaurentPoly::monomial(-unit.low_degree(), unit.leading_coeff().inv());
        self.num = self.num.mul(&unit_inv);
        self.den = den_norm;
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn field(&self) -> CoeffField {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as a Laurent polynomial, if the denominator is a unit.
    pub fn as_poly(&self) -> Option<LaurentPoly> {
        self.num.exact_div(&self.den)
    }

    /// Canonical representative of the class up to units `c * t^s`:
    /// unit-normalized numerator over unit-normalized denominator.
    pub fn unit_normal_pair(&self) -> (LaurentPoly, LaurentPoly) {
        (self.num.unit_normal(), self.den.unit_normal())
    }

    /// Equality up to a unit `c * t^s`.
    pub fn associate(&self, other: &RationalExpr) -> bool {
        self.unit_normal_pair() == other.unit_normal_pair()
    }

    pub fn add(&self, other: &RationalExpr) -> RationalExpr {
        RationalExpr::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RationalExpr) -> RationalExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalExpr {
        RationalExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RationalExpr) -> RationalExpr {
        RationalExpr::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RationalExpr) -> RationalExpr {
        assert!(!other.is_zero(), "division by zero");
        RationalExpr::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> RationalExpr {
        assert!(!self.is_zero(), "inverse of zero");
        RationalExpr::new(self.den.clone(), self.num.clone())
    }

    /// Substitute `t -> t^-1` in both numerator and denominator.
    pub fn mirror(&self) -> RationalExpr {
        RationalExpr::new(self.num.mirror(), self.den.mirror())
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Matrix over the rational function field `F(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    pub field: CoeffField,
    data: Vec<RationalExpr>,
}

impl RatMatrix {
    pub fn zero(field: CoeffField, rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            field,
            data: vec![RationalExpr::zero(field); rows * cols],
        }
    }

    pub fn from_poly_matrix(m: &PolyMatrix) -> Self {
        let mut out = Self::zero(m.field, m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                out[(i, j)] = RationalExpr::from_poly(m[(i, j)].clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RationalExpr::is_zero)
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMatrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = self[(i, k)].mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&t);
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<RationalExpr> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        let order: Vec<usize> = (0..self.cols).collect();
        self.pivot_columns(&order).len()
    }

    /// Scan columns in the given order and return the indices of those that
    /// enlarge the column space (a deterministic image basis).
    pub fn pivot_columns(&self, order: &[usize]) -> Vec<usize> {
        let mut reduced: Vec<(usize, Vec<RationalExpr>)> = Vec::new(); // (pivot row, echelon vector)
        let mut pivots = Vec::new();
        for &j in order {
            let mut v = self.column(j);
            for (pr, basis) in &reduced {
                if v[*pr].is_zero() {
                    continue;
                }
                let factor = v[*pr].clone();
                for i in 0..self.rows {
                    let t = factor.mul(&basis[i]);
                    v[i] = v[i].sub(&t);
                }
            }
            if let Some(pr) = (0..self.rows).find(|&i| !v[i].is_zero()) {
                let inv = v[pr].inv();
                for x in v.iter_mut() {
                    *x = x.mul(&inv);
                }
                reduced.push((pr, v));
                pivots.push(j);
            }
        }
        pivots
    }

    /// Exact determinant: clear denominators row by row, run the
    /// fraction-free polynomial determinant, divide the factors back out.
    pub fn det(&self) -> RationalExpr {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return RationalExpr::one(self.field);
        }
        let mut cleared = PolyMatrix::zero(self.field, n, n);
        let mut factor = RationalExpr::one(self.field);
        for i in 0..n {
            let mut row_den = LaurentPoly::one(self.field);
            for j in 0..n {
                row_den = row_den.mul(self[(i, j)].den());
            }
            for j in 0..n {
                let co = row_den.exact_div(self[(i, j)].den()).expect("den divides");
                cleared[(i, j)] = self[(i, j)].num().mul(&co);
            }
            factor = factor.mul(&RationalExpr::from_poly(row_den));
        }
        RationalExpr::from_poly(cleared.det()).div(&factor)
    }

    /// Solve `self * x = b` when `self` has full column rank; `None` when
    /// the system is inconsistent.
    pub fn solve(&self, b: &RatMatrix) -> Option<RatMatrix> {
        assert_eq!(self.rows, b.rows);
        let n = self.rows;
        let m = self.cols;
        let k = b.cols;
        // Augmented Gauss-Jordan.
        let mut a = RatMatrix::zero(self.field, n, m + k);
        for i in 0..n {
            for j in 0..m {
                a[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..k {
                a[(i, m + j)] = b[(i, j)].clone();
            }
        }
        let mut row = 0;
        let mut pivot_rows = vec![usize::MAX; m];
        for col in 0..m {
            let Some(pr) = (row..n).find(|&i| !a[(i, col)].is_zero()) else {
                return None; // not full column rank
            };
            if pr != row {
                for j in 0..m + k {
                    let tmp = a[(pr, j)].clone();
                    a[(pr, j)] = a[(row, j)].clone();
                    a[(row, j)] = tmp;
                }
            }
            let inv = a[(row, col)].inv();
            for j in 0..m + k {
                a[(row, j)] = a[(row, j)].mul(&inv);
            }
            for i in 0..n {
                if i == row || a[(i, col)].is_zero() {
                    continue;
                }
                let factor = a[(i, col)].clone();
                for j in 0..m + k {
                    let t = factor.mul(&a[(row, j)]);
                    a[(i, j)] = a[(i, j)].sub(&t);
                }
            }
            pivot_rows[col] = row;
            row += 1;
        }
        // Remaining rows must be all zero on the b side for consistency.
        for i in row..n {
            for j in 0..k {
                if !a[(i, m + j)].is_zero() {
                    return None;
                }
            }
        }
        let mut x = RatMatrix::zero(self.field, m, k);
        for col in 0..m {
            for j in 0..k {
                x[(col, j)] = a[(pivot_rows[col], m + j)].clone();
            }
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = RationalExpr;
    fn index(&self, (i, j): (usize, usize)) -> &RationalExpr {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RationalExpr {
        &mut self.data[i * self.cols + j]
    }
}
