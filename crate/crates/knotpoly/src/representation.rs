//! Matrix representations of presented groups over exact fields:
//! verification, exhaustive `SL(2, F_p)` search, regular representations of
//! finite quotients, and the linear-algebra searches behind the
//! deformation obstructions.

use crate::field::{CoeffField, FieldMatrix, Scalar};
use crate::freegroup::Word;
use crate::presentation::{Presentation, TietzeMove};
use crate::{Error, Result};
use serde_json::{json, Map, Value};

/// A representation: one invertible square matrix per generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub field: CoeffField,
    pub dim: usize,
    images: Vec<FieldMatrix>,
    inverses: Vec<FieldMatrix>,
    /// All images have determinant one.
    pub unimodular: bool,
}

impl Representation {
    pub fn new(field: CoeffField, images: Vec<FieldMatrix>) -> Result<Self> {
        let dim = images.first().map_or(0, |m| m.rows);
        if dim == 0 || images.is_empty() {
            return Err(Error::Semantic(
                "representation needs at least one image".into(),
            ));
        }
        let mut inverses = Vec::with_capacity(images.len());
        let mut unimodular = true;
        for m in &images {
            if m.rows != dim || m.cols != dim {
                return Err(Error::Semantic(
                    "image matrices must share one square shape".into(),
                ));
            }
            let Some(inv) = m.inverse() else {
                return Err(Error::Semantic("image matrix is singular".into()));
            };
            inverses.push(inv);
            if !m.det().is_one() {
                unimodular = false;
            }
        }
        Ok(Representation {
            field,
            dim,
            images,
            inverses,
            unimodular,
        })
    }

    pub fn images(&self) -> &[FieldMatrix] {
        &self.images
    }

    pub fn image(&self, g: usize) -> &FieldMatrix {
        &self.images[g]
    }

    /// Evaluate a word through the representation.
    pub fn evaluate(&self, w: &Word) -> FieldMatrix {
        let mut acc = FieldMatrix::identity(self.field, self.dim);
        for &(g, e) in w.runs() {
            let base = if e > 0 {
                &self.images[g]
            } else {
                &self.inverses[g]
            };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(base);
            }
        }
        acc
    }

    /// The constant diagonal representation `x_i -> diag(a^{e_i}, a^{-e_i})`
    /// factoring through the abelianization.
    pub fn abelian_diagonal(p: &Presentation, a: &Scalar) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Semantic(
                "abelian representation needs a != 0".into(),
            ));
        }
        let field = a.field();
        let images = p
            .abelian_exponents()
            .iter()
            .map(|&e| {
                let mut m = FieldMatrix::zero(field, 2, 2);
                m[(0, 0)] = a.pow(e);
                m[(1, 1)] = a.pow(-e);
                m
            })
            .collect();
        Representation::new(field, images)
    }

    /// The `dim`-dimensional trivial representation.
    pub fn trivial(p: &Presentation, field: CoeffField, dim: usize) -> Result<Self> {
        let images = (0..p.num_generators())
            .map(|_| FieldMatrix::identity(field, dim))
            .collect();
        Representation::new(field, images)
    }

    /// Push a representation of `p` through a Tietze move so it represents
    /// the transformed presentation.
    pub fn push_through(&self, _p: &Presentation, mv: &TietzeMove) -> Result<Self> {
        match mv {
            TietzeMove::AddGenerator(w) => {
                let mut images = self.images.clone();
                images.push(self.evaluate(w));
                Representation::new(self.field, images)
            }
            _ => Ok(self.clone()),
        }
    }

    /// Deterministic sort key: image entries flattened, `F_p` only.
    fn sort_key(&self) -> Vec<u32> {
        let mut key = Vec::new();
        for m in &self.images {
            for i in 0..m.rows {
                for j in 0..m.cols {
                    key.push(m[(i, j)].fp_value().unwrap_or(0));
                }
            }
        }
        key
    }
}

/// True iff every relator evaluates to the identity matrix.
pub fn verify_representation(p: &Presentation, r: &Representation) -> Result<bool> {
    if r.images.len() != p.num_generators() {
        return Err(Error::Semantic(format!(
            "representation has {} images for {} generators",
            r.images.len(),
            p.num_generators()
        )));
    }
    Ok(p.relators().iter().all(|rel| r.evaluate(rel).is_identity()))
}

/// True iff all pairs of generator images commute.
pub fn is_abelian_rep(r: &Representation) -> bool {
    for i in 0..r.images.len() {
        for j in i + 1..r.images.len() {
            let ab = r.images[i].mul(&r.images[j]);
            let ba = r.images[j].mul(&r.images[i]);
            if ab != ba {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Irreducibility over F_p via the quadratic extension
// ---------------------------------------------------------------------------

/// Element of `F_{p^2}` as `a + b*w`, where `w^2 = d` for odd `p` (`d` a
/// fixed nonresidue) and `w^2 = w + 1` for `p = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Fp2 {
    a: u32,
    b: u32,
}

struct Fp2Ctx {
    p: u32,
    d: u32, // nonresidue for odd p; unused for p = 2
}

impl Fp2Ctx {
    fn new(p: u32) -> Self {
        let d = if p == 2 {
            0
        } else {
            (2..p)
                .find(|&d| {
                    let mut acc = 1u64;
                    let mut base = d as u64;
                    let mut e = (p - 1) / 2;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = acc * base % p as u64;
                        }
                        base = base * base % p as u64;
                        e >>= 1;
                    }
                    acc == (p - 1) as u64
                })
                .expect("nonresidue exists for odd p")
        };
        Fp2Ctx { p, d }
    }

    fn add(&self, x: Fp2, y: Fp2) -> Fp2 {
        Fp2 {
            a: (x.a + y.a) % self.p,
            b: (x.b + y.b) % self.p,
        }
    }

    fn sub(&self, x: Fp2, y: Fp2) -> Fp2 {
        Fp2 {
            a: (x.a + self.p - y.a) % self.p,
            b: (x.b + self.p - y.b) % self.p,
        }
    }

    fn mul(&self, x: Fp2, y: Fp2) -> Fp2 {
        let p = self.p as u64;
        let (a1, b1, a2, b2) = (x.a as u64, x.b as u64, y.a as u64, y.b as u64);
        if self.p == 2 {
            // w^2 = w + 1
            Fp2 {
                a: ((a1 * a2 + b1 * b2) % p) as u32,
                b: ((a1 * b2 + a2 * b1 + b1 * b2) % p) as u32,
            }
        } else {
            Fp2 {
                a: ((a1 * a2 + b1 * b2 % p * self.d as u64) % p) as u32,
                b: ((a1 * b2 + a2 * b1) % p) as u32,
            }
        }
    }

    fn is_zero(&self, x: Fp2) -> bool {
        x.a == 0 && x.b == 0
    }

    fn lift(&self, s: &Scalar) -> Fp2 {
        Fp2 {
            a: s.fp_value().expect("F_p scalar"),
            b: 0,
        }
    }

    fn all_elements(&self) -> Vec<Fp2> {
        let mut out = Vec::with_capacity((self.p * self.p) as usize);
        for a in 0..self.p {
            for b in 0..self.p {
                out.push(Fp2 { a, b });
            }
        }
        out
    }
}

/// No common eigenvector of all images over `F_p` or its quadratic
/// extension. Decided by scanning the projective line over `F_{p^2}`.
pub fn is_irreducible_over_fp(r: &Representation) -> Result<bool> {
    let CoeffField::Fp(p) = r.field else {
        return Err(Error::Semantic(
            "irreducibility scan needs an F_p representation".into(),
        ));
    };
    if r.dim != 2 {
        return Err(Error::Semantic(
            "irreducibility scan is for 2-dimensional representations".into(),
        ));
    }
    let ctx = Fp2Ctx::new(p);
    let one = Fp2 { a: 1, b: 0 };
    let zero = Fp2 { a: 0, b: 0 };
    let mut points: Vec<(Fp2, Fp2)> = ctx.all_elements().into_iter().map(|y| (one, y)).collect();
    points.push((zero, one));
    'point: for (x, y) in points {
        for m in &r.images {
            let m00 = ctx.lift(&m[(0, 0)]);
            let m01 = ctx.lift(&m[(0, 1)]);
            let m10 = ctx.lift(&m[(1, 0)]);
            let m11 = ctx.lift(&m[(1, 1)]);
            let vx = ctx.add(ctx.mul(m00, x), ctx.mul(m01, y));
            let vy = ctx.add(ctx.mul(m10, x), ctx.mul(m11, y));
            // (x : y) is an eigenline iff x*vy - y*vx = 0
            let cross = ctx.sub(ctx.mul(x, vy), ctx.mul(y, vx));
            if !ctx.is_zero(cross) {
                continue 'point;
            }
        }
        return Ok(false); // common eigenline found
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Exhaustive SL(2, F_p) enumeration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Default)]
pub struct EnumOptions {
    pub irreducible_only: bool,
    /// Restrict a two-generator search to the conjugacy normal form
    /// (upper-triangular first image with marked 1, lower-triangular second
    /// with free parameter) together with the diagonal abelian family.
    pub up_to_conjugacy: bool,
    /// Lift the `p <= 13` search guard.
    pub allow_large_prime: bool,
    pub limit: Option<usize>,
    /// Keep only representations whose first generator image has this
    /// trace (e.g. 2 selects parabolic meridian images).
    pub trace_filter: Option<i64>,
}

type Sl2 = [u64; 4]; // row major [a, b, c, d], det = 1

fn sl2_mul(p: u64, x: Sl2, y: Sl2) -> Sl2 {
    [
        (x[0] * y[0] + x[1] * y[2]) % p,
        (x[0] * y[1] + x[1] * y[3]) % p,
        (x[2] * y[0] + x[3] * y[2]) % p,
        (x[2] * y[1] + x[3] * y[3]) % p,
    ]
}

fn sl2_inv(p: u64, x: Sl2) -> Sl2 {
    // adjugate of a determinant-one matrix
    [x[3], (p - x[1]) % p, (p - x[2]) % p, x[0]]
}

fn sl2_is_identity(x: Sl2) -> bool {
    x[0] == 1 && x[1] == 0 && x[2] == 0 && x[3] == 1
}

fn all_sl2(p: u64) -> Vec<Sl2> {
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d + p * p - b * c) % p == 1 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

fn eval_word_sl2(p: u64, w: &Word, images: &[Sl2]) -> Sl2 {
    let mut acc: Sl2 = [1, 0, 0, 1];
    for &(g, e) in w.runs() {
        let base = if e > 0 {
            images[g]
        } else {
            sl2_inv(p, images[g])
        };
        for _ in 0..e.unsigned_abs() {
            acc = sl2_mul(p, acc, base);
        }
    }
    acc
}

/// Greedy generator elimination: repeatedly solve a relator for a generator
/// that occurs in it exactly once. Returns the free generator indices, a
/// defining word (over original indices) for every generator, and the
/// residual relators, all expressed in the free generators only.
#[allow(clippy::needless_range_loop)] // parallel index math reads better here
fn eliminate_generators(p: &Presentation) -> (Vec<usize>, Vec<Word>, Vec<Word>) {
    let n = p.num_generators();
    let mut exprs: Vec<Option<Word>> = vec![None; n];
    let mut working: Vec<Word> = p.relators().to_vec();

    loop {
        let mut found = None;
        'outer: for (ri, r) in working.iter().enumerate() {
            for g in 0..n {
                if exprs[g].is_some() {
                    continue;
                }
                let occurrences: i64 = r
                    .runs()
                    .iter()
                    .filter(|(h, _)| *h == g)
                    .map(|(_, e)| e.abs())
                    .sum();
                if occurrences == 1 {
                    found = Some((ri, g));
                    break 'outer;
                }
            }
        }
        let Some((ri, g)) = found else { break };
        let r = working.remove(ri);
        let pos = r
            .runs()
            .iter()
            .position(|(h, _)| *h == g)
            .expect("generator present");
        let eps = r.runs()[pos].1;
        let u = Word::from_runs(r.runs()[..pos].iter().copied());
        let v = Word::from_runs(r.runs()[pos + 1..].iter().copied());
        let w = if eps == 1 {
            u.inverse().mul(&v.inverse())
        } else {
            v.mul(&u)
        };
        // keep every stored expression and relator free of g
        let mut subst_images: Vec<Word> = (0..n).map(Word::generator).collect();
        subst_images[g] = w.clone();
        for e in exprs.iter_mut().flatten() {
            *e = e.substitute(&subst_images);
        }
        for rel in working.iter_mut() {
            *rel = rel.substitute(&subst_images);
        }
        exprs[g] = Some(w);
    }

    let free: Vec<usize> = (0..n).filter(|&g| exprs[g].is_none()).collect();
    let final_exprs: Vec<Word> = (0..n)
        .map(|g| exprs[g].clone().unwrap_or_else(|| Word::generator(g)))
        .collect();
    (free, final_exprs, working)
}

/// Exhaustively enumerate representations into `SL(2, F_p)`.
///
/// Generators that a relator pins down as a word in the others are
/// eliminated first, so Wirtinger presentations reduce to a two-generator
/// search. Output is sorted lexicographically by flattened image entries
/// and is independent of search strategy.
pub fn enum_sl2_reps(
    p: &Presentation,
    prime: u32,
    options: EnumOptions,
) -> Result<Vec<Representation>> {
    let field = CoeffField::prime(prime)?;
    if prime > 13 && !options.allow_large_prime {
        return Err(Error::Guard(format!(
            "prime {prime} exceeds the search guard of 13 (pass the override to proceed)"
        )));
    }
    let n = p.num_generators();
    let pp = prime as u64;

    let mut results: Vec<Representation> = Vec::new();
    let mut push_candidate = |images_sl2: &[Sl2]| -> Result<()> {
        let images = images_sl2
            .iter()
            .map(|m| {
                let mut fm = FieldMatrix::zero(field, 2, 2);
                fm[(0, 0)] = field.from_i64(m[0] as i64);
                fm[(0, 1)] = field.from_i64(m[1] as i64);
                fm[(1, 0)] = field.from_i64(m[2] as i64);
                fm[(1, 1)] = field.from_i64(m[3] as i64);
                fm
            })
            .collect();
        let rep = Representation::new(field, images)?;
        debug_assert!(verify_representation(p, &rep)?);
        if let Some(tr) = options.trace_filter {
            let x = rep.image(0);
            if x[(0, 0)].add(&x[(1, 1)]) != field.from_i64(tr) {
                return Ok(());
            }
        }
        if options.irreducible_only && !is_irreducible_over_fp(&rep)? {
            return Ok(());
        }
        results.push(rep);
        Ok(())
    };

    if options.up_to_conjugacy && n == 2 && p.abelian_exponents()[0] == p.abelian_exponents()[1] {
        // Normal form for a conjugate non-commuting pair, plus the diagonal
        // abelian family.
        let inv = |s: u64| -> u64 {
            let mut acc = 1u64;
            let mut base = s;
            let mut e = pp - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % pp;
                }
                base = base * base % pp;
                e >>= 1;
            }
            acc
        };
        for s in 1..pp {
            for u in 0..pp {
                let x: Sl2 = [s, 1, 0, inv(s)];
                let y: Sl2 = [s, 0, u, inv(s)];
                let images = [x, y];
                if p.relators()
                    .iter()
                    .all(|r| sl2_is_identity(eval_word_sl2(pp, r, &images)))
                {
                    push_candidate(&images)?;
                }
            }
        }
        for s in 1..pp {
            for u in 1..pp {
                let x: Sl2 = [s, 0, 0, inv(s)];
                let y: Sl2 = [u, 0, 0, inv(u)];
                let images = [x, y];
                if p.relators()
                    .iter()
                    .all(|r| sl2_is_identity(eval_word_sl2(pp, r, &images)))
                {
                    push_candidate(&images)?;
                }
            }
        }
    } else {
        let (free, exprs, residual) = eliminate_generators(p);
        if free.len() > 2 {
            return Err(Error::Guard(format!(
                "raw enumeration over {} free generators is not supported (limit 2)",
                free.len()
            )));
        }
        let sl2 = all_sl2(pp);
        let mut assignment: Vec<Sl2> = vec![[1, 0, 0, 1]; n];
        let mut stack: Vec<usize> = Vec::new();
        enumerate_free(
            p,
            &free,
            &exprs,
            &residual,
            &sl2,
            pp,
            &mut assignment,
            &mut stack,
            &mut push_candidate,
        )?;
    }

    results.sort_by_key(Representation::sort_key);
    results.dedup_by_key(|r| r.sort_key());
    if let Some(limit) = options.limit {
        results.truncate(limit);
    }
    Ok(results)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_free(
    p: &Presentation,
    free: &[usize],
    exprs: &[Word],
    residual: &[Word],
    sl2: &[Sl2],
    pp: u64,
    assignment: &mut Vec<Sl2>,
    stack: &mut Vec<usize>,
    emit: &mut impl FnMut(&[Sl2]) -> Result<()>,
) -> Result<()> {
    if stack.len() == free.len() {
        if !residual
            .iter()
            .all(|r| sl2_is_identity(eval_word_sl2(pp, r, assignment)))
        {
            return Ok(());
        }
        // materialize eliminated generators and re-check the full relator set
        let full: Vec<Sl2> = exprs
            .iter()
            .map(|w| eval_word_sl2(pp, w, assignment))
            .collect();
        if p.relators()
            .iter()
            .all(|r| sl2_is_identity(eval_word_sl2(pp, r, &full)))
        {
            emit(&full)?;
        }
        return Ok(());
    }
    let g = free[stack.len()];
    for m in sl2 {
        assignment[g] = *m;
        stack.push(g);
        enumerate_free(p, free, exprs, residual, sl2, pp, assignment, stack, emit)?;
        stack.pop();
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Finite quotients and regular representations
// ---------------------------------------------------------------------------

/// An epimorphism onto a finite group, given by its multiplication table
/// and the images of the presentation's generators.
#[derive(Debug, Clone)]
pub struct FiniteQuotient {
    pub order: usize,
    /// `table[g][h] = g * h` as element indices.
    pub table: Vec<Vec<usize>>,
    /// Per-generator element index.
    pub images: Vec<usize>,
}

impl FiniteQuotient {
    /// Validate the table (identity, inverses, associativity) and check
    /// that the generator images generate the whole group.
    pub fn validate(&self) -> Result<usize> {
        let n = self.order;
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(Error::Semantic(
                "multiplication table has wrong shape".into(),
            ));
        }
        if self.table.iter().any(|r| r.iter().any(|&v| v >= n)) {
            return Err(Error::Semantic("table entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| self.table[e][x] == x && self.table[x][e] == x))
            .ok_or_else(|| Error::Semantic("table has no identity element".into()))?;
        for x in 0..n {
            if !(0..n).any(|y| self.table[x][y] == identity && self.table[y][x] == identity) {
                return Err(Error::Semantic(format!("element {x} has no inverse")));
            }
        }
        // Full associativity check: group orders here are small.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]] {
                        return Err(Error::Semantic(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        // Orbit closure: the images must generate everything.
        let mut reached = vec![false; n];
        reached[identity] = true;
        let mut frontier = vec![identity];
        while let Some(x) = frontier.pop() {
            for &img in &self.images {
                if img >= n {
                    return Err(Error::Semantic("generator image out of range".into()));
                }
                let inv = (0..n)
                    .find(|&y| self.table[img][y] == identity)
                    .expect("inverse exists");
                for next in [self.table[x][img], self.table[x][inv]] {
                    if !reached[next] {
                        reached[next] = true;
                        frontier.push(next);
                    }
                }
            }
        }
        if !reached.iter().all(|&r| r) {
            return Err(Error::Semantic(
                "generator images do not generate the quotient group".into(),
            ));
        }
        Ok(identity)
    }

    /// Evaluate a word through the quotient.
    pub fn evaluate(&self, w: &Word, identity: usize) -> usize {
        let mut acc = identity;
        for &(g, e) in w.runs() {
            let img = self.images[g];
            let base = if e > 0 {
                img
            } else {
                (0..self.order)
                    .find(|&y| self.table[img][y] == identity)
                    .expect("inverse exists")
            };
            for _ in 0..e.unsigned_abs() {
                acc = self.table[acc][base];
            }
        }
        acc
    }

    /// The dihedral group of order `2n`: element `k` is the rotation `r^k`
    /// and `n + k` is the reflection `r^k s`; generator images are given as
    /// `(rotation part, is reflection)` pairs.
    pub fn dihedral(n: usize, gen_images: &[(usize, bool)]) -> Self {
        let order = 2 * n;
        let idx = |k: usize, f: bool| if f { n + k % n } else { k % n };
        let mut table = vec![vec![0usize; order]; order];
        for k1 in 0..n {
            for f1 in [false, true] {
                for k2 in 0..n {
                    for f2 in [false, true] {
                        // (r^k1 s^f1)(r^k2 s^f2) = r^(k1 +- k2) s^(f1 xor f2)
                        let k = if f1 {
                            (k1 + n - k2 % n) % n
                        } else {
                            (k1 + k2) % n
                        };
                        table[idx(k1, f1)][idx(k2, f2)] = idx(k, f1 ^ f2);
                    }
                }
            }
        }
        let images = gen_images.iter().map(|&(k, f)| idx(k, f)).collect();
        FiniteQuotient {
            order,
            table,
            images,
        }
    }
}

/// The regular representation of a finite quotient: each generator maps to
/// the permutation matrix of left multiplication by its image, over `Q`.
pub fn regular_rep(q: &FiniteQuotient) -> Result<Representation> {
    q.validate()?;
    let field = CoeffField::Q;
    let images = q
        .images
        .iter()
        .map(|&img| {
            let mut m = FieldMatrix::zero(field, q.order, q.order);
            for h in 0..q.order {
                m[(q.table[img][h], h)] = field.one();
            }
            m
        })
        .collect();
    Representation::new(field, images)
}

// ---------------------------------------------------------------------------
// Deformation obstructions: upper-triangular extension searches
// ---------------------------------------------------------------------------

/// Outcome of an extension search: the solution space of the affine-linear
/// relator constraints, compared against the conjugation family that is
/// always present.
#[derive(Debug)]
pub struct ExtensionSearch {
    pub kernel_dim: usize,
    pub conjugation_dim: usize,
    /// A witness vector `(b_1, ..., b_n)` outside the conjugation family,
    /// gauge-normalized so `b_1 = 0`, when one exists.
    pub witness: Option<Vec<Scalar>>,
}

impl ExtensionSearch {
    /// Does a genuinely non-conjugate extension exist?
    pub fn extends(&self) -> bool {
        self.kernel_dim > self.conjugation_dim
    }
}

/// Common engine: for block matrices `x_i -> [[M_i, b_i], [0, 1]]` with the
/// `M_i` fixed and the `b_i` unknown vectors, each relator imposes linear
/// constraints on the `b_i` (the product's upper-right block must vanish).
/// Solves the stacked system and measures it against the conjugation family
/// `b_i = (I - M_i) c`.
fn extension_kernel(p: &Presentation, base: &[FieldMatrix]) -> Result<ExtensionSearch> {
    let field = base[0].field;
    let l = base[0].rows;
    let n = p.num_generators();
    let mut inverses = Vec::with_capacity(n);
    for m in base {
        inverses.push(
            m.inverse()
                .ok_or_else(|| Error::Semantic("base image is singular".into()))?,
        );
    }

    // The product so far is [[P, L b], [0, 1]] with L an l x (l n) matrix.
    let mut constraint_rows: Vec<Vec<Scalar>> = Vec::new();
    for rel in p.relators() {
        let mut prod = FieldMatrix::identity(field, l);
        let mut lin = FieldMatrix::zero(field, l, l * n);
        for &(g, e) in rel.runs() {
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    // right-multiply by [[M_g, S_g b], [0, 1]]
                    for r in 0..l {
                        for c in 0..l {
                            let t = prod[(r, c)].clone();
                            lin[(r, g * l + c)] = lin[(r, g * l + c)].add(&t);
                        }
                    }
                    prod = prod.mul(&base[g]);
                } else {
                    // right-multiply by [[M_g^-1, -M_g^-1 S_g b], [0, 1]]
                    let step = prod.mul(&inverses[g]);
                    for r in 0..l {
                        for c in 0..l {
                            let t = step[(r, c)].clone();
                            lin[(r, g * l + c)] = lin[(r, g * l + c)].sub(&t);
                        }
                    }
                    prod = step;
                }
            }
        }
        if !prod.is_identity() {
            return Err(Error::Semantic(
                "base images do not satisfy the relators; extension system undefined".into(),
            ));
        }
        for r in 0..l {
            constraint_rows.push((0..l * n).map(|c| lin[(r, c)].clone()).collect());
        }
    }

    let system = if constraint_rows.is_empty() {
        FieldMatrix::zero(field, 0, l * n)
    } else {
        FieldMatrix::from_rows(field, constraint_rows)
    };
    let kernel = system.kernel();

    // Conjugation family columns: c -> ((I - M_1) c, ..., (I - M_n) c).
    let mut conj_cols: Vec<Vec<Scalar>> = Vec::new();
    for c in 0..l {
        let mut col = vec![field.zero(); l * n];
        for (g, m) in base.iter().enumerate() {
            for r in 0..l {
                let delta = if r == c { field.one() } else { field.zero() };
                col[g * l + r] = delta.sub(&m[(r, c)]);
            }
        }
        conj_cols.push(col);
    }
    let conj_matrix = FieldMatrix::from_rows(
        field,
        (0..l * n)
            .map(|r| conj_cols.iter().map(|c| c[r].clone()).collect())
            .collect(),
    );
    let conjugation_dim = conj_matrix.rank();

    // A kernel vector independent of the conjugation family is a witness.
    let mut witness = None;
    for v in &kernel {
        if conj_matrix.rank_with_columns(std::slice::from_ref(v)) > conjugation_dim {
            // Gauge: subtract the conjugation solution matching the first block.
            let m1 = &base[0];
            let mut i_minus_m1 = FieldMatrix::identity(field, l).sub(m1);
            let mut b1 = FieldMatrix::zero(field, l, 1);
            for r in 0..l {
                b1[(r, 0)] = v[r].clone();
            }
            let gauge = match i_minus_m1.inverse() {
                Some(inv) => inv.mul(&b1),
                None => {
                    // (I - M_1) singular: skip gauge fixing, report v as-is.
                    i_minus_m1 = FieldMatrix::zero(field, l, l);
                    i_minus_m1.mul(&b1)
                }
            };
            let mut w = v.clone();
            for (g, m) in base.iter().enumerate() {
                for r in 0..l {
                    let mut corr = field.zero();
                    for c in 0..l {
                        let delta = if r == c { field.one() } else { field.zero() };
                        corr = corr.add(&delta.sub(&m[(r, c)]).mul(&gauge[(c, 0)]));
                    }
                    w[g * l + r] = w[g * l + r].sub(&corr);
                }
            }
            witness = Some(w);
            break;
        }
    }

    Ok(ExtensionSearch {
        kernel_dim: kernel.len(),
        conjugation_dim,
        witness,
    })
}

/// Search for an upper-triangular extension `x_i -> [[a, b_i], [0, 1]]` of
/// the 1-dimensional representation `x_i -> a` that is not conjugate to it.
/// Such an extension exists exactly when the Alexander polynomial vanishes
/// at `a`.
pub fn derham_extension_search(p: &Presentation, a: &Scalar) -> Result<ExtensionSearch> {
    if !p.is_wirtinger() {
        return Err(Error::Semantic(
            "deformation search requires a Wirtinger presentation".into(),
        ));
    }
    if a.is_zero() || a.is_one() {
        return Err(Error::Semantic(
            "deformation parameter must satisfy a != 0, 1".into(),
        ));
    }
    let field = a.field();
    let base: Vec<FieldMatrix> = (0..p.num_generators())
        .map(|_| {
            let mut m = FieldMatrix::zero(field, 1, 1);
            m[(0, 0)] = a.clone();
            m
        })
        .collect();
    extension_kernel(p, &base)
}

/// Search for a 3-dimensional extension `x_i -> [[a X_i, b_i], [0, 1]]` of
/// the twisted-by-`a` representation. The numerator of the twisted
/// Alexander polynomial at `a` is the obstruction.
pub fn wada_extension_check(p: &Presentation, r: &Representation, a: &Scalar) -> Result<bool> {
    if r.dim != 2 {
        return Err(Error::Semantic(
            "extension check expects a 2-dimensional representation".into(),
        ));
    }
    if !verify_representation(p, r)? {
        return Err(Error::Semantic(
            "representation does not satisfy the relators".into(),
        ));
    }
    // guard: a must not be an eigenvalue of the first image
    let x1 = &r.images[0];
    let char_at_a = a
        .mul(a)
        .sub(&a.mul(&x1[(0, 0)].add(&x1[(1, 1)])))
        .add(&x1.det());
    if char_at_a.is_zero() {
        return Err(Error::Semantic(
            "deformation parameter is an eigenvalue of the first image".into(),
        ));
    }
    let base: Vec<FieldMatrix> = r.images.iter().map(|m| m.scale(a)).collect();
    Ok(extension_kernel(p, &base)?.extends())
}

// ---------------------------------------------------------------------------
// JSON interchange
// ---------------------------------------------------------------------------

fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Fp { v, .. } => json!(v),
        Scalar::Q(_) => json!(s.to_string()),
    }
}

fn scalar_from_json(v: &Value, field: CoeffField) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::Semantic(format!("non-integer matrix entry {n}")))?;
            Ok(field.from_i64(i))
        }
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a, b),
                None => (s.as_str(), "1"),
            };
            let num: i64 = num
                .trim()
                .parse()
                .map_err(|_| Error::Semantic(format!("bad numerator in `{s}`")))?;
            let den: i64 = den
                .trim()
                .parse()
                .map_err(|_| Error::Semantic(format!("bad denominator in `{s}`")))?;
            field.from_ratio(num, den)
        }
        other => Err(Error::Semantic(format!("bad matrix entry {other}"))),
    }
}

pub fn field_from_json(v: &Value) -> Result<CoeffField> {
    let ty = v
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Semantic("field object needs a `type`".into()))?;
    match ty {
        "Q" => Ok(CoeffField::Q),
        "Fp" => {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Semantic("Fp field needs `p`".into()))?;
            CoeffField::prime(
                u32::try_from(p).map_err(|_| Error::Semantic(format!("prime {p} out of range")))?,
            )
        }
        other => Err(Error::Semantic(format!("unknown field type `{other}`"))),
    }
}

pub fn field_to_json(f: CoeffField) -> Value {
    match f {
        CoeffField::Q => json!({ "type": "Q" }),
        CoeffField::Fp(p) => json!({ "type": "Fp", "p": p }),
    }
}

impl Representation {
    /// Parse the representation interchange format:
    /// `{"field": {"type": "Fp", "p": 5}, "dim": 2, "images": {"x": [[...]]}}`.
    pub fn from_json(v: &Value, p: &Presentation) -> Result<Self> {
        let field = field_from_json(
            v.get("field")
                .ok_or_else(|| Error::Semantic("representation needs `field`".into()))?,
        )?;
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Semantic("representation needs `dim`".into()))?
            as usize;
        let images_obj = v
            .get("images")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Semantic("representation needs `images`".into()))?;
        let mut images = Vec::with_capacity(p.num_generators());
        for gname in p.generators() {
            let entry = images_obj
                .get(gname)
                .ok_or_else(|| Error::Semantic(format!("generator `{gname}` has no image")))?;
            let rows = entry
                .as_array()
                .ok_or_else(|| Error::Semantic("image must be a matrix".into()))?;
            if rows.len() != dim {
                return Err(Error::Semantic(format!(
                    "image of `{gname}` has {} rows, expected {dim}",
                    rows.len()
                )));
            }
            let mut m = FieldMatrix::zero(field, dim, dim);
            for (i, row) in rows.iter().enumerate() {
                let row = row
                    .as_array()
                    .ok_or_else(|| Error::Semantic("matrix row must be an array".into()))?;
                if row.len() != dim {
                    return Err(Error::Semantic(format!(
                        "image of `{gname}` is not {dim}x{dim}"
                    )));
                }
                for (j, cell) in row.iter().enumerate() {
                    m[(i, j)] = scalar_from_json(cell, field)?;
                }
            }
            images.push(m);
        }
        Representation::new(field, images)
    }

    pub fn to_json(&self, p: &Presentation) -> Value {
        let mut images = Map::new();
        for (g, name) in p.generators().iter().enumerate() {
            let m = &self.images[g];
            let rows: Vec<Value> = (0..m.rows)
                .map(|i| Value::Array((0..m.cols).map(|j| scalar_to_json(&m[(i, j)])).collect()))
                .collect();
            images.insert(name.clone(), Value::Array(rows));
        }
        json!({
            "field": field_to_json(self.field),
            "dim": self.dim,
            "images": Value::Object(images),
        })
    }
}

impl FiniteQuotient {
    /// Parse `{"order": 6, "table": [[...]], "images": {"x": 1}}`.
    pub fn from_json(v: &Value, p: &Presentation) -> Result<Self> {
        let order = v
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Semantic("quotient needs `order`".into()))?
            as usize;
        let table_v = v
            .get("table")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Semantic("quotient needs `table`".into()))?;
        let mut table = Vec::with_capacity(order);
        for row in table_v {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Semantic("table row must be an array".into()))?;
            table.push(
                row.iter()
                    .map(|x| {
                        x.as_u64()
                            .map(|v| v as usize)
                            .ok_or_else(|| Error::Semantic("table entry must be an index".into()))
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let images_obj = v
            .get("images")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Semantic("quotient needs `images`".into()))?;
        let mut images = Vec::with_capacity(p.num_generators());
        for gname in p.generators() {
            let img = images_obj
                .get(gname)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Semantic(format!("generator `{gname}` has no image")))?;
            images.push(img as usize);
        }
        let q = FiniteQuotient {
            order,
            table,
            images,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn to_json(&self, p: &Presentation) -> Value {
        let mut images = Map::new();
        for (g, name) in p.generators().iter().enumerate() {
            images.insert(name.clone(), json!(self.images[g]));
        }
        json!({
            "order": self.order,
            "table": self.table,
            "images": Value::Object(images),
        })
    }
}
