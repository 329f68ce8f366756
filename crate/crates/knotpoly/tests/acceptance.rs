//! Acceptance suite: one test per criterion, each printing a pass line and
//! enforcing its wall-clock budget. All comparisons are exact, up to the
//! declared unit group (`associate` = equal unit normal forms).

use knotpoly::alexander::{alexander_polynomial, check_symmetry, order_ideal_h1};
use knotpoly::field::{CoeffField, FieldMatrix};
use knotpoly::freegroup::Word;
use knotpoly::laurent::{divides, LaurentPoly, RationalExpr};
use knotpoly::presentation::{parse_presentation, parse_word, Presentation, TietzeMove};
use knotpoly::representation::{
    derham_extension_search, enum_sl2_reps, regular_rep, verify_representation, EnumOptions,
    FiniteQuotient, Representation,
};
use knotpoly::torsion::{
    alpha_images, is_acyclic, presentation_complex, torsion, torsion_with_orders,
    twisted_torsion_check, TorsionTwistedOutcome,
};
use knotpoly::twisted::{
    abelian_identity_check, check_monic, compose_representation, degree_and_genus,
    divisibility_check, epimorphism_certificate, twisted_alexander,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::time::{Duration, Instant};

fn corpus(name: &str) -> Presentation {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name);
    parse_presentation(&std::fs::read_to_string(&path).unwrap_or_else(|e| {
        panic!("cannot read {}: {e}", path.display());
    }))
    .unwrap()
}

fn corpus_json(name: &str) -> serde_json::Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// All shipped knot presentations.
fn whole_corpus() -> Vec<Presentation> {
    [
        "unknot.pres",
        "3_1.pres",
        "3_1_ext.pres",
        "3_1_wirtinger.pres",
        "4_1.pres",
        "t_2_3.pres",
        "t_2_5.pres",
        "8_5.pres",
    ]
    .iter()
    .map(|n| corpus(n))
    .collect()
}

fn budget(name: &str, limit: Duration, start: Instant) {
    let elapsed = start.elapsed();
    println!("PASS {name} ({elapsed:.2?})");
    assert!(
        elapsed < limit,
        "{name} exceeded its {limit:?} budget: {elapsed:?}"
    );
}

fn q_poly(ints: &[i64]) -> LaurentPoly {
    LaurentPoly::from_ints(CoeffField::Q, 0, ints)
}

#[test]
fn criterion_01_classical_values() {
    let start = Instant::now();
    let d31 = alexander_polynomial(&corpus("3_1.pres")).unwrap();
    assert!(d31.associate(&q_poly(&[1, -1, 1])));
    budget(
        "criterion 1a: Delta(3_1) = t^2 - t + 1",
        Duration::from_millis(100),
        start,
    );

    let start = Instant::now();
    let d41 = alexander_polynomial(&corpus("4_1.pres")).unwrap();
    assert!(d41.associate(&q_poly(&[1, -3, 1])));
    budget(
        "criterion 1b: Delta(4_1) = t^2 - 3t + 1",
        Duration::from_millis(100),
        start,
    );
}

#[test]
fn criterion_02_fundamental_formula() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    for _ in 0..500 {
        let len = rng.gen_range(0..=20);
        let runs: Vec<(usize, i64)> = (0..len)
            .map(|_| {
                (
                    rng.gen_range(0..3usize),
                    if rng.gen_bool(0.5) { 1 } else { -1 },
                )
            })
            .collect();
        let w = Word::from_runs(runs);
        assert!(knotpoly::fox::check_fundamental_formula(&w, 3));
    }
    budget(
        "criterion 2: fundamental formula on 500 seeded words",
        Duration::from_secs(1),
        start,
    );
}

fn random_word(rng: &mut ChaCha8Rng, num_gens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_runs((0..len).map(|_| {
        (
            rng.gen_range(0..num_gens),
            if rng.gen_bool(0.5) { 1i64 } else { -1 },
        )
    }))
}

fn random_strong_move(rng: &mut ChaCha8Rng, p: &Presentation) -> TietzeMove {
    let n = p.num_generators();
    let m = p.num_relators();
    loop {
        match rng.gen_range(0..4) {
            0 => return TietzeMove::InvertRelator(rng.gen_range(0..m)),
            1 => return TietzeMove::ConjugateRelator(rng.gen_range(0..m), random_word(rng, n, 3)),
            2 if m >= 2 => {
                let i = rng.gen_range(0..m);
                let k = loop {
                    let k = rng.gen_range(0..m);
                    if k != i {
                        break k;
                    }
                };
                return TietzeMove::MultiplyRelator(i, k);
            }
            3 => {
                let w = random_word(rng, n, 3);
                if !w.is_identity() {
                    return TietzeMove::AddGenerator(w);
                }
            }
            _ => {}
        }
    }
}

#[test]
fn criterion_03_tietze_invariance() {
    let start = Instant::now();
    let base = corpus("3_1.pres");
    let delta = alexander_polynomial(&base).unwrap();
    let f5 = CoeffField::prime(5).unwrap();
    let rep = Representation::new(
        f5,
        vec![
            FieldMatrix::from_rows(
                f5,
                vec![
                    vec![f5.from_i64(1), f5.from_i64(1)],
                    vec![f5.from_i64(0), f5.from_i64(1)],
                ],
            ),
            FieldMatrix::from_rows(
                f5,
                vec![
                    vec![f5.from_i64(1), f5.from_i64(0)],
                    vec![f5.from_i64(4), f5.from_i64(1)],
                ],
            ),
        ],
    )
    .unwrap();
    let base_twisted = twisted_alexander(&base, &rep).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);

    // 12 sequences of strong moves (I_a), (I_b), (I_c), (II): Delta and the
    // twisted pair both invariant; the pair changes by exactly t^{2s}.
    for _ in 0..12 {
        let mut p = base.clone();
        let mut r = rep.clone();
        for _ in 0..4 {
            let mv = random_strong_move(&mut rng, &p);
            r = r.push_through(&p, &mv).unwrap();
            p = p.apply_move(&mv).unwrap();
        }
        assert!(alexander_polynomial(&p).unwrap().associate(&delta));
        let moved = twisted_alexander(&p, &r).unwrap();
        assert!(moved.reduced.associate(&base_twisted.reduced));
        // num' * den = num * den' * t^{2s} exactly
        let lhs = moved.numerator.mul(&base_twisted.denominator);
        let rhs = base_twisted.numerator.mul(&moved.denominator);
        let unit = lhs.exact_div(&rhs).expect("pair invariant up to a unit");
        assert_eq!(unit.degree_span(), 0, "unit is a monomial");
        assert!(unit.leading_coeff().is_one(), "unit coefficient is 1");
        assert_eq!(unit.low_degree() % 2, 0, "unit power is even");
    }

    // 8 sequences including the general move (I): Delta only (the twisted
    // invariant needs deficiency one).
    for _ in 0..8 {
        let mut p = base.clone();
        for step in 0..3 {
            if step == 1 {
                let m = p.num_relators();
                let cert: Vec<(Word, usize, i8)> = (0..rng.gen_range(1..=2))
                    .map(|_| {
                        (
                            random_word(&mut rng, p.num_generators(), 2),
                            rng.gen_range(0..m),
                            if rng.gen_bool(0.5) { 1 } else { -1 },
                        )
                    })
                    .collect();
                p = p.tietze_add_consequence(&cert).unwrap();
            } else {
                let w = random_word(&mut rng, p.num_generators(), 3);
                p = p.tietze_add_generator(&w).unwrap();
            }
        }
        assert!(alexander_polynomial(&p).unwrap().associate(&delta));
    }
    budget(
        "criterion 3: Tietze invariance over 20 seeded sequences",
        Duration::from_secs(5),
        start,
    );
}

#[test]
fn criterion_04_twisted_golden_values() {
    let start = Instant::now();
    let trefoil = corpus("3_1.pres");
    for p in [5u32, 7, 11] {
        let field = CoeffField::prime(p).unwrap();
        let expected = LaurentPoly::from_ints(field, 0, &[1, 0, 1]);
        let reps = enum_sl2_reps(
            &trefoil,
            p,
            EnumOptions {
                irreducible_only: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!reps.is_empty());
        for rep in &reps {
            let res = twisted_alexander(&trefoil, rep).unwrap();
            assert!(
                res.polynomial.unwrap().associate(&expected),
                "trefoil over F_{p}"
            );
        }
    }

    let fig8 = corpus("4_1.pres");
    for p in [5u32, 7, 11] {
        let field = CoeffField::prime(p).unwrap();
        let reps = enum_sl2_reps(
            &fig8,
            p,
            EnumOptions {
                up_to_conjugacy: true,
                ..Default::default()
            },
        )
        .unwrap();
        let mut found_point = false;
        for rep in &reps {
            let x = rep.image(0);
            let y = rep.image(1);
            // normal-form points: X = [[s,1],[0,1/s]], Y = [[s,0],[u,1/s]]
            if !(x[(0, 1)].is_one() && x[(1, 0)].is_zero() && y[(0, 1)].is_zero()) {
                continue;
            }
            found_point = true;
            let s = x[(0, 0)].clone();
            let trace = s.add(&s.inv());
            let expected = LaurentPoly::from_coeffs(
                field,
                0,
                vec![field.one(), trace.mul(&field.from_i64(-2)), field.one()],
            );
            let res = twisted_alexander(&fig8, rep).unwrap();
            assert!(
                res.polynomial.unwrap().associate(&expected),
                "figure-eight over F_{p}, s = {s}, u = {}",
                y[(1, 0)]
            );
        }
        assert!(found_point, "no solution points over F_{p}");
    }
    budget(
        "criterion 4: twisted golden values over F_5, F_7, F_11",
        Duration::from_secs(10),
        start,
    );
}

#[test]
fn criterion_05_closed_form_identities() {
    let start = Instant::now();
    let f7 = CoeffField::prime(7).unwrap();
    for p in whole_corpus() {
        // trivial-representation identity: Delta_{K,1} = (Delta/(t-1))^2
        let triv = Representation::trivial(&p, f7, 2).unwrap();
        let lhs = twisted_alexander(&p, &triv).unwrap().reduced;
        let delta = alexander_polynomial(&p).unwrap().map_field(f7).unwrap();
        let half = RationalExpr::new(delta, LaurentPoly::from_ints(f7, 0, &[-1, 1]));
        assert!(
            lhs.associate(&half.mul(&half)),
            "trivial identity on {}",
            p.name
        );

        // abelian identity at 5 seeded values of a in F_7^* \ {1}
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..5 {
            let a = f7.from_i64(rng.gen_range(2..7));
            assert!(
                abelian_identity_check(&p, &a).unwrap(),
                "abelian identity on {} at a = {a}",
                p.name
            );
        }
    }
    budget(
        "criterion 5: closed-form identities on the whole corpus",
        Duration::from_secs(5),
        start,
    );
}

#[test]
fn criterion_06_torsion() {
    let start = Instant::now();
    // Milnor identity on every corpus knot
    for p in whole_corpus() {
        assert!(knotpoly::torsion::milnor_check(&p).unwrap(), "{}", p.name);
    }

    // Kitano identity on trefoil and figure-eight F_5 points
    let trefoil = corpus("3_1.pres");
    let f5 = CoeffField::prime(5).unwrap();
    let mat = |rows: [[i64; 2]; 2]| {
        FieldMatrix::from_rows(
            f5,
            rows.iter()
                .map(|r| r.iter().map(|&v| f5.from_i64(v)).collect())
                .collect(),
        )
    };
    let tref_rep =
        Representation::new(f5, vec![mat([[1, 1], [0, 1]]), mat([[1, 0], [4, 1]])]).unwrap();
    assert_eq!(
        twisted_torsion_check(&trefoil, &tref_rep).unwrap(),
        TorsionTwistedOutcome::Agrees
    );
    let fig8 = corpus("4_1.pres");
    for (s, u) in [(2i64, 0i64), (3, 0)] {
        let s_inv = f5.from_i64(s).inv().fp_value().unwrap() as i64;
        let rep = Representation::new(
            f5,
            vec![mat([[s, 1], [0, s_inv]]), mat([[s, 0], [u, s_inv]])],
        )
        .unwrap();
        assert!(verify_representation(&fig8, &rep).unwrap());
        assert_eq!(
            twisted_torsion_check(&fig8, &rep).unwrap(),
            TorsionTwistedOutcome::Agrees
        );
    }

    // basis independence under 10 randomized pivot orders
    let complex = presentation_complex(&trefoil, &alpha_images(&trefoil)).unwrap();
    assert!(is_acyclic(&complex));
    let base = torsion(&complex).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10 {
        let orders: Vec<Vec<usize>> = complex
            .dims
            .iter()
            .map(|&d| {
                let mut v: Vec<usize> = (0..d).collect();
                v.shuffle(&mut rng);
                v
            })
            .collect();
        assert_eq!(torsion_with_orders(&complex, Some(&orders)).unwrap(), base);
    }
    budget(
        "criterion 6: Milnor and twisted torsion identities",
        Duration::from_secs(10),
        start,
    );
}

#[test]
fn criterion_07_fiberedness() {
    let start = Instant::now();
    // (knot, quotient file, known genus)
    let cases = [
        ("3_1.pres", "3_1_s3.quot.json", 1i64),
        ("4_1.pres", "4_1_d5.quot.json", 1),
        ("t_2_5.pres", "t_2_5_d5.quot.json", 2),
    ];
    for (pres, quot, genus) in cases {
        let p = corpus(pres);
        // strict monicness over Q via the regular representation
        let q = FiniteQuotient::from_json(&corpus_json(quot), &p).unwrap();
        let rep = regular_rep(&q).unwrap();
        let res = twisted_alexander(&p, &rep).unwrap();
        let monic = check_monic(&res);
        assert!(monic.monic && monic.strict, "{pres} regular rep not monic");
        let dg = degree_and_genus(&res);
        assert_eq!(
            dg.genus,
            Some(num_rational::Rational64::new(genus, 1)),
            "{pres} genus via regular rep"
        );

        // genus from the 2-dimensional family over F_5
        let reps = enum_sl2_reps(
            &p,
            5,
            EnumOptions {
                irreducible_only: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!reps.is_empty(), "{pres}: no irreducible F_5 reps");
        for rep in &reps {
            let res = twisted_alexander(&p, rep).unwrap();
            assert!(check_monic(&res).monic, "{pres} F_5 rep not monic");
            let dg = degree_and_genus(&res);
            assert_eq!(
                dg.genus,
                Some(num_rational::Rational64::new(genus, 1)),
                "{pres}"
            );
            if pres == "t_2_5.pres" {
                assert_eq!(dg.degree, 6, "T(2,5) degree must be 4g - 2 = 6");
            }
        }
    }
    budget(
        "criterion 7: fiberedness (monic + genus) for 3_1, 4_1, T(2,5)",
        Duration::from_secs(60),
        start,
    );
}

#[test]
fn criterion_08_epimorphism_pipeline() {
    let start = Instant::now();
    let p85 = corpus("8_5.pres");
    let p31 = corpus("3_1_wirtinger.pres");
    let map: serde_json::Value = corpus_json("8_5_to_3_1.map");
    let phi: Vec<Word> = p85
        .generators()
        .iter()
        .map(|g| parse_word(map[g].as_str().unwrap(), &p31).unwrap())
        .collect();

    let rep_a =
        Representation::from_json(&corpus_json("3_1_wirtinger_rep_f5_a.json"), &p31).unwrap();
    let rep_b =
        Representation::from_json(&corpus_json("3_1_wirtinger_rep_f5_b.json"), &p31).unwrap();
    assert_ne!(rep_a, rep_b);

    // relator certificate: all 7 relator images die under both reps
    epimorphism_certificate(&p85, &p31, &phi, &[&rep_a, &rep_b]).unwrap();
    for rel in p85.relators() {
        let image = rel.substitute(&phi);
        assert!(rep_a.evaluate(&image).is_identity());
    }

    // classical divisibility
    let d31 = alexander_polynomial(&p31).unwrap();
    let d85 = alexander_polynomial(&p85).unwrap();
    assert!(d31.associate(&q_poly(&[1, -1, 1])));
    assert!(divides(&d31, &d85));

    // twisted divisibility for two distinct F_5 representations
    for rep in [&rep_a, &rep_b] {
        let report = divisibility_check(&p85, &p31, &phi, rep).unwrap();
        assert!(report.divisible);
        assert_eq!(report.surjectivity_evidence, Some(true));
        // the composed representation really represents G(8_5)
        let composed = compose_representation(&phi, rep).unwrap();
        assert!(verify_representation(&p85, &composed).unwrap());
    }
    budget(
        "criterion 8: 8_5 -> 3_1 certificate and divisibility",
        Duration::from_secs(10),
        start,
    );
}

#[test]
fn criterion_09_derham_equivalence() {
    let start = Instant::now();
    for pres in ["3_1.pres", "4_1.pres"] {
        let p = corpus(pres);
        let delta_q = alexander_polynomial(&p).unwrap();
        for prime in [2u32, 3, 5, 7, 11, 13] {
            let field = CoeffField::prime(prime).unwrap();
            let delta = delta_q.map_field(field).unwrap();
            for a in 2..prime as i64 {
                let scalar = field.from_i64(a);
                let search = derham_extension_search(&p, &scalar).unwrap();
                let vanishes = delta.eval(&scalar).is_zero();
                assert_eq!(
                    search.extends(),
                    vanishes,
                    "{pres} over F_{prime} at a = {a}"
                );
                if search.extends() {
                    let w = search.witness.unwrap();
                    assert!(w.iter().any(|b| !b.is_zero()));
                }
            }
        }
    }
    budget(
        "criterion 9: deformation witnesses match Alexander roots, p <= 13",
        Duration::from_secs(5),
        start,
    );
}

#[test]
fn criterion_10_torus_local_constancy() {
    let start = Instant::now();
    let p = corpus("t_2_3.pres");
    let f5 = CoeffField::prime(5).unwrap();
    let reps = enum_sl2_reps(
        &p,
        5,
        EnumOptions {
            irreducible_only: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(!reps.is_empty());
    let expected = LaurentPoly::from_ints(f5, 0, &[1, 0, 1]).unit_normal();
    for rep in &reps {
        let res = twisted_alexander(&p, rep).unwrap();
        let value = res.polynomial.unwrap().unit_normal();
        assert_eq!(value, expected, "value varies across the family");
    }
    budget(
        "criterion 10: torus-knot local constancy over F_5",
        Duration::from_secs(30),
        start,
    );
}

// Supporting spot checks that the corpus itself satisfies the module-level
// invariants the criteria rely on.

#[test]
fn corpus_symmetry_and_order_ideals() {
    for p in whole_corpus() {
        let delta = alexander_polynomial(&p).unwrap();
        assert!(check_symmetry(&delta), "{}", p.name);
        if p.deficiency() == 1 {
            let ords = order_ideal_h1(&p).unwrap();
            assert!(ords.h1.associate(&delta), "{}", p.name);
            assert!(ords
                .h0
                .associate(&LaurentPoly::from_ints(CoeffField::Q, 0, &[-1, 1])));
        }
    }
}

#[test]
fn corpus_round_trips() {
    for p in whole_corpus() {
        let q = parse_presentation(&p.to_pres_text()).unwrap();
        assert_eq!(p, q);
    }
}
