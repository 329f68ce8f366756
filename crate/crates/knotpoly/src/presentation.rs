//! Finite group presentations: the `.pres` text format, the abelianization
//! onto the infinite cyclic group, and Tietze transformations.
//!
//! A presentation accepted from a file must have deficiency at least one
//! and infinite cyclic abelianization (both are checked); presentations
//! produced internally by Tietze moves may have lower deficiency.

use crate::freegroup::Word;
use crate::{Error, Result};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    generators: Vec<String>,
    relators: Vec<Word>,
    /// `alpha(x_i) = t^{e_i}`; unique up to global sign, fixed so the first
    /// nonzero exponent is positive.
    abelian_exponents: Vec<i64>,
    /// Verified property: every generator maps to `t` under `alpha`.
    wirtinger: bool,
}

impl Presentation {
    /// Build and validate a presentation. The relator exponent matrix must
    /// have corank exactly one and torsion-free cokernel, i.e. the
    /// abelianization is infinite cyclic.
    pub fn new(
        name: impl Into<String>,
        generators: Vec<String>,
        relators: Vec<Word>,
    ) -> Result<Self> {
        let n = generators.len();
        if n == 0 {
            return Err(Error::Semantic("presentation has no generators".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(Error::Semantic(format!("duplicate generator name {g}")));
            }
        }
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= n {
                    return Err(Error::Semantic(format!(
                        "relator mentions generator index {g} out of range"
                    )));
                }
            }
        }
        let abelian_exponents = abelianization_exponents(n, &relators)?;
        let wirtinger = abelian_exponents.iter().all(|&e| e == 1);
        Ok(Presentation {
            name: name.into(),
            generators,
            relators,
            abelian_exponents,
            wirtinger,
        })
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    pub fn deficiency(&self) -> i64 {
        self.generators.len() as i64 - self.relators.len() as i64
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Cached abelianization exponents `e_i` with `alpha(x_i) = t^{e_i}`.
    pub fn abelian_exponents(&self) -> &[i64] {
        &self.abelian_exponents
    }

    pub fn is_wirtinger(&self) -> bool {
        self.wirtinger
    }

    /// Tietze (I): append a consequence of the relators, given as a
    /// certificate `prod_k w_k r_{i_k}^{eps_k} w_k^{-1}`.
    pub fn tietze_add_consequence(
        &self,
        certificate: &[(Word, usize, i8)],
    ) -> Result<Presentation> {
        let mut r = Word::identity();
        for (w, idx, sign) in certificate {
            let Some(rel) = self.relators.get(*idx) else {
                return Err(Error::Semantic(format!("relator index {idx} out of range")));
            };
            let factor = rel.pow(*sign as i64).conjugate_by(w);
            r = r.mul(&factor);
        }
        let mut relators = self.relators.clone();
        relators.push(r);
        Presentation::new(self.name.clone(), self.generators.clone(), relators)
    }

    /// Tietze (II): adjoin a fresh generator `g` with defining relator
    /// `g w^-1` for a word `w` in the existing generators.
    pub fn tietze_add_generator(&self, w: &Word) -> Result<Presentation> {
        if let Some(g) = w.max_generator() {
            if g >= self.generators.len() {
                return Err(Error::Semantic(
                    "defining word mentions unknown generator".into(),
                ));
            }
        }
        let mut generators = self.generators.clone();
        let mut i = generators.len() + 1;
        let fresh = loop {
            let candidate = format!("g{i}");
            if !generators.contains(&candidate) {
                break candidate;
            }
            i += 1;
        };
        generators.push(fresh);
        let new_index = generators.len() - 1;
        let mut relators = self.relators.clone();
        relators.push(Word::generator(new_index).mul(&w.inverse()));
        Presentation::new(self.name.clone(), generators, relators)
    }

    /// Strong Tietze (I_a): replace relator `i` by its inverse.
    pub fn tietze_invert_relator(&self, i: usize) -> Result<Presentation> {
        let mut relators = self.relators.clone();
        let Some(r) = relators.get_mut(i) else {
            return Err(Error::Semantic(format!("relator index {i} out of range")));
        };
        *r = r.inverse();
        Presentation::new(self.name.clone(), self.generators.clone(), relators)
    }

    /// Strong Tietze (I_b): replace relator `i` by the conjugate `w r w^-1`.
    pub fn tietze_conjugate_relator(&self, i: usize, w: &Word) -> Result<Presentation> {
        let mut relators = self.relators.clone();
        let Some(r) = relators.get_mut(i) else {
            return Err(Error::Semantic(format!("relator index {i} out of range")));
        };
        *r = r.conjugate_by(w);
        Presentation::new(self.name.clone(), self.generators.clone(), relators)
    }

    /// Strong Tietze (I_c): replace relator `i` by `r_i r_k`, `i != k`.
    pub fn tietze_multiply_relator(&self, i: usize, k: usize) -> Result<Presentation> {
        if i == k {
            return Err(Error::Semantic("relator indices must differ".into()));
        }
        let mut relators = self.relators.clone();
        if i >= relators.len() || k >= relators.len() {
            return Err(Error::Semantic("relator index out of range".into()));
        }
        relators[i] = relators[i].mul(&relators[k]);
        Presentation::new(self.name.clone(), self.generators.clone(), relators)
    }

    /// Apply a [`TietzeMove`].
    pub fn apply_move(&self, mv: &TietzeMove) -> Result<Presentation> {
        match mv {
            TietzeMove::AddConsequence(cert) => self.tietze_add_consequence(cert),
            TietzeMove::AddGenerator(w) => self.tietze_add_generator(w),
            TietzeMove::InvertRelator(i) => self.tietze_invert_relator(*i),
            TietzeMove::ConjugateRelator(i, w) => self.tietze_conjugate_relator(*i, w),
            TietzeMove::MultiplyRelator(i, k) => self.tietze_multiply_relator(*i, *k),
        }
    }

    /// Serialize back to the `.pres` text format.
    pub fn to_pres_text(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            writeln!(out, "name {}", self.name).unwrap();
        }
        writeln!(out, "gens {}", self.generators.join(" ")).unwrap();
        for r in &self.relators {
            writeln!(out, "rel {}", r.display(&self.generators)).unwrap();
        }
        out
    }
}

/// A Tietze transformation. `AddConsequence` is the general move (I), the
/// rest preserve deficiency: (II) and the strong moves (I_a), (I_b), (I_c).
#[derive(Debug, Clone)]
pub enum TietzeMove {
    AddConsequence(Vec<(Word, usize, i8)>),
    AddGenerator(Word),
    InvertRelator(usize),
    ConjugateRelator(usize, Word),
    MultiplyRelator(usize, usize),
}

/// Compute the abelianization exponents via integer Smith reduction of the
/// transposed relator exponent matrix. Errors unless the cokernel is
/// exactly `Z`.
#[allow(clippy::needless_range_loop)] // parallel index math reads better here
fn abelianization_exponents(n: usize, relators: &[Word]) -> Result<Vec<i64>> {
    let m = relators.len();
    // a[i][j] = exponent sum of generator i in relator j  (the transpose)
    let mut a = vec![vec![0i128; m]; n];
    for (j, r) in relators.iter().enumerate() {
        for (i, row) in a.iter_mut().enumerate() {
            row[j] = r.exponent_sum(i) as i128;
        }
    }
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();

    let mut rank = 0;
    let mut diag: Vec<i128> = Vec::new();
    for t in 0..n.min(m) {
        loop {
            let mut best: Option<(usize, usize, i128)> = None;
            for i in t..n {
                for j in t..m {
                    let v = a[i][j].abs();
                    if v != 0 && best.is_none_or(|(_, _, b)| v < b) {
                        best = Some((i, j, v));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                break;
            };
            a.swap(pi, t);
            u.swap(pi, t);
            for row in a.iter_mut() {
                row.swap(pj, t);
            }
            let mut dirty = false;
            for i in t + 1..n {
                if a[i][t] != 0 {
                    let q = div_round(a[i][t], a[t][t]);
                    for j in 0..m {
                        a[i][j] -= q * a[t][j];
                    }
                    for j in 0..n {
                        u[i][j] -= q * u[t][j];
                    }
                    if a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..m {
                if a[t][j] != 0 {
                    let q = div_round(a[t][j], a[t][t]);
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    if a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        if a[t][t] != 0 {
            diag.push(a[t][t]);
            rank += 1;
        }
    }

    let corank = n - rank;
    if corank != 1 {
        return Err(Error::Semantic(format!(
            "abelianization is not infinite cyclic (free rank {corank})"
        )));
    }
    if diag.iter().any(|d| d.abs() != 1) {
        return Err(Error::Semantic(
            "abelianization is not infinite cyclic (torsion present)".into(),
        ));
    }
    // Pivots occupy diagonal positions 0..rank, so the unique free
    // coordinate of the cokernel is row `rank` of U.
    let free_row = rank;
    let mut e: Vec<i64> = u[free_row]
        .iter()
        .map(|&v| i64::try_from(v).expect("exponent fits i64"))
        .collect();
    if let Some(first) = e.iter().find(|&&v| v != 0) {
        if *first < 0 {
            for v in e.iter_mut() {
                *v = -*v;
            }
        }
    } else {
        return Err(Error::Semantic(
            "abelianization is not onto the infinite cyclic group".into(),
        ));
    }
    Ok(e)
}

/// Rounded division, which keeps Euclidean reduction steps small.
fn div_round(a: i128, b: i128) -> i128 {
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

/// Parse the `.pres` line-oriented format.
///
/// ```text
/// # comment
/// name 3_1
/// gens x y
/// rel x y x = y x y
/// ```
///
/// Word grammar: whitespace-separated terms, each `ident` or
/// `ident^<signed-int>`; one optional `=` per `rel` line converts
/// `u = v` into the relator `u v^-1`.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut name = String::new();
    let mut generators: Option<Vec<String>> = None;
    let mut relators: Vec<Word> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let stripped = raw.trim();
        if stripped.is_empty() || stripped.starts_with('#') {
            continue;
        }
        let tokens = tokenize(raw);
        let (keyword, col0) = &tokens[0];
        match keyword.as_str() {
            "name" => {
                if tokens.len() != 2 {
                    return Err(parse_err(line, *col0, "expected `name <ident>`"));
                }
                name = tokens[1].0.clone();
            }
            "gens" => {
                if generators.is_some() {
                    return Err(parse_err(line, *col0, "duplicate `gens` directive"));
                }
                if tokens.len() < 2 {
                    return Err(parse_err(line, *col0, "`gens` needs at least one name"));
                }
                let mut gens = Vec::new();
                for (tok, col) in &tokens[1..] {
                    if !is_ident(tok) {
                        return Err(parse_err(
                            line,
                            *col,
                            &format!("invalid generator name `{tok}`"),
                        ));
                    }
                    if gens.contains(tok) {
                        return Err(parse_err(
                            line,
                            *col,
                            &format!("duplicate generator `{tok}`"),
                        ));
                    }
                    gens.push(tok.clone());
                }
                generators = Some(gens);
            }
            "rel" => {
                let Some(gens) = &generators else {
                    return Err(parse_err(line, *col0, "`rel` before `gens`"));
                };
                if tokens.len() < 2 {
                    return Err(parse_err(line, *col0, "empty relator"));
                }
                let mut lhs: Vec<(usize, i64)> = Vec::new();
                let mut rhs: Vec<(usize, i64)> = Vec::new();
                let mut side = &mut lhs;
                let mut seen_eq = false;
                for (tok, col) in &tokens[1..] {
                    if tok == "=" {
                        if seen_eq {
                            return Err(parse_err(line, *col, "more than one `=` in relator"));
                        }
                        seen_eq = true;
                        side = &mut rhs;
                        continue;
                    }
                    side.push(parse_term(tok, gens, line, *col)?);
                }
                if lhs.is_empty() {
                    return Err(parse_err(line, *col0, "empty relator side"));
                }
                if seen_eq && rhs.is_empty() {
                    return Err(parse_err(line, *col0, "empty right-hand side"));
                }
                let u = Word::from_runs(lhs);
                let v = Word::from_runs(rhs);
                relators.push(u.mul(&v.inverse()));
            }
            other => {
                return Err(parse_err(
                    line,
                    *col0,
                    &format!("unknown directive `{other}`"),
                ));
            }
        }
    }

    let Some(generators) = generators else {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            col: 1,
            msg: "missing `gens` directive".into(),
        });
    };
    let deficiency = generators.len() as i64 - relators.len() as i64;
    if deficiency < 1 {
        return Err(Error::Semantic(format!(
            "deficiency {deficiency} < 1: too many relators for a knot presentation"
        )));
    }
    Presentation::new(name, generators, relators)
}

fn parse_err(line: usize, col: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn tokenize(line: &str) -> Vec<(String, usize)> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut start = 0;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if !current.is_empty() {
                tokens.push((std::mem::take(&mut current), start + 1));
            }
        } else {
            if current.is_empty() {
                start = i;
            }
            current.push(ch);
        }
    }
    if !current.is_empty() {
        tokens.push((current, start + 1));
    }
    tokens
}

fn is_ident(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_term(tok: &str, gens: &[String], line: usize, col: usize) -> Result<(usize, i64)> {
    let (name, exp) = match tok.split_once('^') {
        Some((name, exp_str)) => {
            let exp: i64 = exp_str
                .parse()
                .map_err(|_| parse_err(line, col, &format!("invalid exponent `{exp_str}`")))?;
            (name, exp)
        }
        None => (tok, 1),
    };
    if !is_ident(name) {
        return Err(parse_err(line, col, &format!("invalid term `{tok}`")));
    }
    let Some(idx) = gens.iter().position(|g| g == name) else {
        return Err(parse_err(line, col, &format!("unknown generator `{name}`")));
    };
    Ok((idx, exp))
}

/// Parse a standalone word over a presentation's generators, using the same
/// term grammar as `rel` lines (no `=` allowed). Used by epimorphism map
/// files.
pub fn parse_word(text: &str, p: &Presentation) -> Result<Word> {
    let tokens = tokenize(text);
    let mut runs = Vec::new();
    for (tok, col) in &tokens {
        if tok == "=" {
            return Err(parse_err(1, *col, "`=` not allowed in a bare word"));
        }
        runs.push(parse_term(tok, p.generators(), 1, *col)?);
    }
    Ok(Word::from_runs(runs))
}
