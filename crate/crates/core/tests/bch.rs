use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stairdec::bch::{BchCode, BddOutcome, CodeSpec};

/// Remainder of `poly` (index = exponent) modulo `g`, by long division.
fn poly_mod(poly: &[u8], g: &[u8]) -> Vec<u8> {
    let mut r = poly.to_vec();
    let dg = g.len() - 1;
    for i in (dg..r.len()).rev() {
        if r[i] == 1 {
            for (j, &gj) in g.iter().enumerate() {
                r[i - dg + j] ^= gj;
            }
        }
    }
    r.truncate(dg);
    r
}

fn octal_poly(octal: &str) -> Vec<u8> {
    let v = u64::from_str_radix(octal, 8).unwrap();
    let deg = 63 - v.leading_zeros() as usize;
    (0..=deg).map(|i| ((v >> i) & 1) as u8).collect()
}

/// Word as a polynomial over the inner exponents.
fn as_poly(code: &BchCode, word: &[u8]) -> Vec<u8> {
    let s = code.shortened_bits();
    let mut p = vec![0u8; code.n_inner()];
    for (pos, &b) in word[..code.n_inner() - s].iter().enumerate() {
        p[pos + s] = b;
    }
    p
}

fn reference_codes() -> Vec<BchCode> {
    ["256,239,2", "256,231,3", "256,223,4", "254,230,3"]
        .iter()
        .map(|s| CodeSpec::parse(s).unwrap().build().unwrap())
        .collect()
}

#[test]
fn generators_match_tables() {
    // Standard tables for primitive lengths 15 and 255.
    let cases = [("15,7,2", "721"), ("255,239,2", "267543"), ("255,231,3", "156720665"), ("255,223,4", "75626641375")];
    for (spec, octal) in cases {
        let code = CodeSpec::parse(spec).unwrap().build().unwrap();
        assert_eq!(code.generator_polynomial(), octal_poly(octal), "{spec}");
    }
}

#[test]
fn encoder_agrees_with_polynomial_division() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut codes = reference_codes();
    codes.push(CodeSpec::parse("15,7,2").unwrap().build().unwrap());
    for code in &codes {
        let g = code.generator_polynomial();
        for _ in 0..50 {
            let info: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
            let cw = code.encode(&info).unwrap();
            assert_eq!(&cw[..code.k()], &info[..]);
            assert!(poly_mod(&as_poly(code, &cw), &g).iter().all(|&b| b == 0));
            if code.is_extended() {
                assert_eq!(cw.iter().map(|&b| b as u32).sum::<u32>() % 2, 0);
            }
            assert!(code.syndrome(&cw).is_zero());
        }
    }
}

#[test]
fn unit_vector_codewords_are_generator_multiples() {
    let code = CodeSpec::parse("15,7,2").unwrap().build().unwrap();
    let g = code.generator_polynomial();
    for i in 0..7 {
        let mut info = vec![0u8; 7];
        info[i] = 1;
        let cw = code.encode(&info).unwrap();
        assert!(poly_mod(&cw, &g).iter().all(|&b| b == 0));
        assert!(cw.iter().filter(|&&b| b == 1).count() >= 5);
    }
}

/// All codewords of BCH(15,7,2) by brute force over the information.
fn codebook(code: &BchCode) -> Vec<Vec<u8>> {
    (0..1u32 << code.k())
        .map(|m| {
            let info: Vec<u8> = (0..code.k()).map(|i| ((m >> i) & 1) as u8).collect();
            code.encode(&info).unwrap()
        })
        .collect()
}

fn nearest_within_t(book: &[Vec<u8>], word: &[u8], t: usize) -> Option<Vec<u8>> {
    book.iter().find(|c| c.iter().zip(word).filter(|(a, b)| a != b).count() <= t).cloned()
}

fn check(code: &BchCode, book: &[Vec<u8>], word: &[u8]) {
    let oracle = nearest_within_t(book, word, code.t());
    match (code.bdd_decode(word).unwrap(), oracle) {
        (BddOutcome::Success { codeword, error_positions }, Some(c)) => {
            assert_eq!(codeword, c);
            let d = word.iter().zip(&c).filter(|(a, b)| a != b).count();
            assert_eq!(error_positions.len(), d);
        }
        (BddOutcome::Failure, None) => {}
        (got, want) => panic!("word {word:?}: decoder {got:?}, oracle {want:?}"),
    }
}

#[test]
fn bdd_matches_exhaustive_search_on_random_words() {
    let code = CodeSpec::parse("15,7,2").unwrap().build().unwrap();
    let book = codebook(&code);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20_000 {
        let word: Vec<u8> = (0..15).map(|_| rng.random_range(0..2)).collect();
        check(&code, &book, &word);
    }
}

#[test]
fn extended_and_shortened_small_codes_match_exhaustive_search() {
    for spec in ["16,7,2", "13,5,2"] {
        let code = CodeSpec::parse(spec).unwrap().build().unwrap();
        let book = codebook(&code);
        for m in 0..1u32 << code.n() {
            let word: Vec<u8> = (0..code.n()).map(|i| ((m >> i) & 1) as u8).collect();
            check(&code, &book, &word);
        }
    }
}

#[test]
fn reference_codes_correct_up_to_t() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for code in reference_codes() {
        for _ in 0..200 {
            let info: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
            let cw = code.encode(&info).unwrap();
            let weight = rng.random_range(0..=code.t());
            let mut word = cw.clone();
            let mut flipped = Vec::new();
            while flipped.len() < weight {
                let p = rng.random_range(0..code.n());
                if !flipped.contains(&p) {
                    flipped.push(p);
                    word[p] ^= 1;
                }
            }
            match code.bdd_decode(&word).unwrap() {
                BddOutcome::Success { codeword, .. } => assert_eq!(codeword, cw),
                BddOutcome::Failure => panic!("{} errors not corrected", weight),
            }
        }
    }
}

#[test]
fn reference_code_dimensions() {
    let dims: Vec<(usize, usize, usize, usize)> =
        reference_codes().iter().map(|c| (c.n(), c.k(), c.t(), c.d0())).collect();
    assert_eq!(dims, vec![(256, 239, 2, 6), (256, 231, 3, 8), (256, 223, 4, 10), (254, 230, 3, 7)]);
}
