//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! Every computation in this crate is exact. A [`Scalar`] carries its own
//! field tag so that mixing elements of different fields is caught at run
//! time (it is always a programming error).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::{Error, Result};

/// A coefficient field: `Q` or `F_p` for a prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffField {
    /// The rational numbers.
    Q,
    /// The prime field of order `p`.
    Fp(u32),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    let p = p as u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl CoeffField {
    /// Construct `F_p`, verifying primality by trial division.
    pub fn prime(p: u32) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::Semantic(format!("prime {p} exceeds 2^31 bound")));
        }
        if !is_prime(p) {
            return Err(Error::Semantic(format!("{p} is not prime")));
        }
        Ok(CoeffField::Fp(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            CoeffField::Q => Scalar::Q(BigRational::zero()),
            CoeffField::Fp(p) => Scalar::Fp { p: *p, v: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            CoeffField::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            CoeffField::Fp(p) => {
                let m = *p as i64;
                Scalar::Fp {
                    p: *p,
                    v: n.rem_euclid(m) as u32,
                }
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            CoeffField::Q => Scalar::Q(BigRational::from_integer(n.clone())),
            CoeffField::Fp(p) => {
                let m = BigInt::from(*p);
                let r = ((n % &m) + &m) % &m;
                let digits = r.to_u32_digits().1;
                Scalar::Fp {
                    p: *p,
                    v: digits.first().copied().unwrap_or(0),
                }
            }
        }
    }

    /// `n/d` in this field. Errors if `d` maps to zero.
    pub fn from_ratio(&self, n: i64, d: i64) -> Result<Scalar> {
        let den = self.from_i64(d);
        if den.is_zero() {
            return Err(Error::Semantic(format!(
                "denominator {d} vanishes in {self:?}"
            )));
        }
        Ok(self.from_i64(n).div(&den))
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffField::Q => write!(f, "Q"),
            CoeffField::Fp(p) => write!(f, "F_{p}"),
        }
    }
}

/// An element of a [`CoeffField`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u32, v: u32 },
}

fn fp_mul(p: u32, a: u32, b: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn fp_pow(p: u32, mut a: u32, mut e: u64) -> u32 {
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(p, acc, a);
        }
        a = fp_mul(p, a, a);
        e >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> CoeffField {
        match self {
            Scalar::Q(_) => CoeffField::Q,
            Scalar::Fp { p, .. } => CoeffField::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp {
                    p: *p,
                    v: ((*a as u64 + *b as u64) % *p as u64) as u32,
                }
            }
            _ => panic!("field mismatch: {self:?} vs {other:?}"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp {
                    p: *p,
                    v: fp_mul(*p, *a, *b),
                }
            }
            _ => panic!("field mismatch: {self:?} vs {other:?}"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: fp_pow(*p, *v, *p as u64 - 2),
            },
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = self.field().one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// For `F_p` elements: the canonical representative in `0..p`.
    pub fn fp_value(&self) -> Option<u32> {
        match self {
            Scalar::Fp { v, .. } => Some(*v),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Is the rational scalar an integer with absolute value one?
/// Used by the strict monicness check over `Q`.
pub fn is_plus_minus_one(s: &Scalar) -> bool {
    match s {
        Scalar::Q(r) => r.denom().is_one() && r.numer().abs().is_one(),
        Scalar::Fp { p, v } => *v == 1 || *v == p - 1,
    }
}

/// Dense matrix over a [`CoeffField`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    pub rows: usize,
    pub cols: usize,
    pub field: CoeffField,
    data: Vec<Scalar>,
}

impl FieldMatrix {
    pub fn zero(field: CoeffField, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: CoeffField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: CoeffField, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        FieldMatrix {
            rows: r,
            cols: c,
            field,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = FieldMatrix::zero(self.field, self.rows, other.cols);
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

    pub fn add(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.sub(b);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> FieldMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.mul(s);
        }
        out
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut out = FieldMatrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for k in 0..n {
            let pivot = (k..n).find(|&i| !m[(i, k)].is_zero());
            let Some(pr) = pivot else {
                return self.field.zero();
            };
            if pr != k {
                for j in 0..n {
                    let tmp = m[(pr, j)].clone();
                    m[(pr, j)] = m[(k, j)].clone();
                    m[(k, j)] = tmp;
                }
                det = det.neg();
            }
            det = det.mul(&m[(k, k)]);
            let inv = m[(k, k)].inv();
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let factor = m[(i, k)].mul(&inv);
                for j in k..n {
                    let t = factor.mul(&m[(k, j)]);
                    m[(i, j)] = m[(i, j)].sub(&t);
                }
            }
        }
        det
    }

    /// Inverse via Gauss-Jordan. `None` if singular.
    pub fn inverse(&self) -> Option<FieldMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = FieldMatrix::identity(self.field, n);
        for k in 0..n {
            let pr = (k..n).find(|&i| !m[(i, k)].is_zero())?;
            if pr != k {
                for j in 0..n {
                    let tmp = m[(pr, j)].clone();
                    m[(pr, j)] = m[(k, j)].clone();
                    m[(k, j)] = tmp;
                    let tmp = inv[(pr, j)].clone();
                    inv[(pr, j)] = inv[(k, j)].clone();
                    inv[(k, j)] = tmp;
                }
            }
            let piv_inv = m[(k, k)].inv();
            for j in 0..n {
                m[(k, j)] = m[(k, j)].mul(&piv_inv);
                inv[(k, j)] = inv[(k, j)].mul(&piv_inv);
            }
            for i in 0..n {
                if i == k || m[(i, k)].is_zero() {
                    continue;
                }
                let factor = m[(i, k)].clone();
                for j in 0..n {
                    let t = factor.mul(&m[(k, j)]);
                    m[(i, j)] = m[(i, j)].sub(&t);
                    let t = factor.mul(&inv[(k, j)]);
                    inv[(i, j)] = inv[(i, j)].sub(&t);
                }
            }
        }
        Some(inv)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let pivot = (rank..m.rows).find(|&i| !m[(i, col)].is_zero());
            let Some(pr) = pivot else { continue };
            if pr != rank {
                for j in 0..m.cols {
                    let tmp = m[(pr, j)].clone();
                    m[(pr, j)] = m[(rank, j)].clone();
                    m[(rank, j)] = tmp;
                }
            }
            let inv = m[(rank, col)].inv();
            for i in rank + 1..m.rows {
                if m[(i, col)].is_zero() {
                    continue;
                }
                let factor = m[(i, col)].mul(&inv);
                for j in col..m.cols {
                    let t = factor.mul(&m[(rank, j)]);
                    m[(i, j)] = m[(i, j)].sub(&t);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the right null space `{x : Mx = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; m.cols];
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pr) = (rank..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            if pr != rank {
                for j in 0..m.cols {
                    let tmp = m[(pr, j)].clone();
                    m[(pr, j)] = m[(rank, j)].clone();
                    m[(rank, j)] = tmp;
                }
            }
            let inv = m[(rank, col)].inv();
            for j in 0..m.cols {
                m[(rank, j)] = m[(rank, j)].mul(&inv);
            }
            for i in 0..m.rows {
                if i == rank || m[(i, col)].is_zero() {
                    continue;
                }
                let factor = m[(i, col)].clone();
                for j in 0..m.cols {
                    let t = factor.mul(&m[(rank, j)]);
                    m[(i, j)] = m[(i, j)].sub(&t);
                }
            }
            pivot_of_col[col] = Some(rank);
            rank += 1;
        }
        let mut basis = Vec::new();
        for free in 0..m.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![self.field.zero(); m.cols];
            v[free] = self.field.one();
            for (col, piv) in pivot_of_col.iter().enumerate() {
                if let Some(r) = piv {
                    v[col] = m[(*r, free)].neg();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Append columns and return the rank of the widened matrix.
    pub fn rank_with_columns(&self, extra: &[Vec<Scalar>]) -> usize {
        let mut m = FieldMatrix::zero(self.field, self.rows, self.cols + extra.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for (k, col) in extra.iter().enumerate() {
                m[(i, self.cols + k)] = col[i].clone();
            }
        }
        m.rank()
    }
}

impl std::ops::Index<(usize, usize)> for FieldMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FieldMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}
