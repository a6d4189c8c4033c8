use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{precondition, Error, Result};

/// A finite word over `{0, ..., N-1}`; `letters[0]` is the first letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn is_zero_word(&self) -> bool {
        self.0.iter().all(|&l| l == 0)
    }
}

const LETTERS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{}", LETTERS[l as usize] as char)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                c.to_digit(36)
                    .ok_or_else(|| Error::Parse(format!("bad letter {c:?} in word {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// A selection map stored as a table over all words of length `1..=depth`;
/// past the table it is zero on words that only append zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionMap {
    n: u32,
    q: u64,
    depth: usize,
    /// `levels[l-1][code]` is `ι(w)` for `|w| = l`, `code` reading `w` in base `N`.
    levels: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// ι vanishes on `0^n`.
    ZeroWords,
    /// ι(i₁…i_k) ≡ i_k (mod N).
    Congruence,
    /// ι takes values in `{-1, ..., q-2}`.
    DigitRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub word: String,
    pub digit: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, condition: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }
}

fn word_code(word: &[u32], n: u32) -> usize {
    word.iter().fold(0usize, |acc, &l| acc * n as usize + l as usize)
}

fn code_word(mut code: usize, len: usize, n: u32) -> Word {
    let mut letters = vec![0; len];
    for slot in letters.iter_mut().rev() {
        *slot = (code % n as usize) as u32;
        code /= n as usize;
    }
    Word(letters)
}

/// Digits `d ∈ {-1, ..., q-2}` with `d ≡ letter (mod N)`.
pub fn admissible_digits(letter: u32, n: u32, q: u64) -> Vec<i64> {
    (-1..=q as i64 - 2)
        .filter(|d| d.rem_euclid(i64::from(n)) == i64::from(letter))
        .collect()
}

impl SelectionMap {
    fn check_params(n: u32, q: u64, depth: usize) -> Result<()> {
        if !(2..=36).contains(&n) {
            return precondition(format!("N must be in 2..=36, got {n}"));
        }
        if q % u64::from(n) != 0 {
            return precondition(format!("N={n} does not divide q={q}"));
        }
        if depth == 0 {
            return precondition("selection map depth must be >= 1");
        }
        let words = (n as usize).checked_pow(depth as u32).filter(|&w| w <= 50_000_000);
        if words.is_none() {
            return precondition(format!("N^depth = {n}^{depth} words is too large"));
        }
        Ok(())
    }

    pub fn from_fn(n: u32, q: u64, depth: usize, mut f: impl FnMut(&Word) -> i64) -> Result<Self> {
        SelectionMap::check_params(n, q, depth)?;
        let levels = (1..=depth)
            .map(|len| {
                (0..(n as usize).pow(len as u32))
                    .map(|code| f(&code_word(code, len, n)))
                    .collect()
            })
            .collect();
        Ok(SelectionMap { n, q, depth, levels })
    }

    /// `ι(i₁…i_k) = i_k`.
    pub fn canonical(n: u32, q: u64, depth: usize) -> Result<Self> {
        SelectionMap::from_fn(n, q, depth, |w| i64::from(w.last().unwrap_or(0)))
    }

    /// Uniform choice from `(i_k + NZ) ∩ {-1, ..., q-2}` per word, visiting
    /// words by length then lexicographically; zero words map to 0.
    pub fn random(n: u32, q: u64, depth: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let choices: Vec<Vec<i64>> = (0..n).map(|l| admissible_digits(l, n, q)).collect();
        SelectionMap::from_fn(n, q, depth, |w| {
            if w.is_zero_word() {
                0
            } else {
                *choices[w.last().expect("nonempty") as usize]
                    .choose(&mut rng)
                    .expect("every residue class meets the digit set")
            }
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `ι(w)`, or `None` for words past the table that do not end in zeros.
    pub fn digit(&self, word: &Word) -> Option<i64> {
        if word.is_empty() {
            return Some(0);
        }
        if word.len() > self.depth {
            return word.0[self.depth..].iter().all(|&l| l == 0).then_some(0);
        }
        Some(self.levels[word.len() - 1][word_code(&word.0, self.n)])
    }

    pub fn set_digit(&mut self, word: &Word, digit: i64) -> Result<()> {
        if word.is_empty() || word.len() > self.depth || word.0.iter().any(|&l| l >= self.n) {
            return precondition(format!("word {word} is outside the table"));
        }
        self.levels[word.len() - 1][word_code(&word.0, self.n)] = digit;
        Ok(())
    }

    /// Every word of the table with its digit, by length then lexicographically.
    pub fn entries(&self) -> impl Iterator<Item = (Word, i64)> + '_ {
        self.levels.iter().enumerate().flat_map(move |(i, level)| {
            level
                .iter()
                .enumerate()
                .map(move |(code, &d)| (code_word(code, i + 1, self.n), d))
        })
    }

    /// Checks the zero-word, congruence and digit-range conditions; eventual
    /// vanishing along extensions holds by the zero extension.
    pub fn validate(&self) -> ValidationReport {
        let top = self.q as i64 - 2;
        let mut violations = Vec::new();
        for (word, digit) in self.entries() {
            let mut flag = |condition| {
                violations.push(Violation { condition, word: word.to_string(), digit })
            };
            if word.is_zero_word() {
                if digit != 0 {
                    flag(Condition::ZeroWords);
                }
                continue;
            }
            let last = i64::from(word.last().expect("nonempty"));
            if (digit - last).rem_euclid(i64::from(self.n)) != 0 {
                flag(Condition::Congruence);
            }
            if !(-1..=top).contains(&digit) {
                flag(Condition::DigitRange);
            }
        }
        ValidationReport { violations }
    }

    /// Words of length `<= maxlen` ending in a nonzero letter, plus the empty
    /// word; ordered by length then lexicographically.
    pub fn domain(&self, maxlen: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for len in 1..=maxlen.min(self.depth) {
            for code in 0..(self.n as usize).pow(len as u32) {
                if code % self.n as usize != 0 {
                    out.push(code_word(code, len, self.n));
                }
            }
        }
        out
    }

    /// `ι*(w) = Σ_{n>=1} ι((w0^∞)|_n) q^{n-1}`, finite by the zero extension.
    pub fn iota_star(&self, word: &Word) -> Result<BigInt> {
        if word.is_empty() {
            return Ok(BigInt::zero());
        }
        if word.last() == Some(0) {
            return precondition(format!("word {word} ends in 0"));
        }
        if word.len() > self.depth {
            return precondition(format!("word {word} is longer than the table depth {}", self.depth));
        }
        if word.0.iter().any(|&l| l >= self.n) {
            return precondition(format!("word {word} uses a letter >= N={}", self.n));
        }
        let mut code = 0usize;
        let mut digits = Vec::with_capacity(self.depth);
        for len in 1..=self.depth {
            let letter = word.0.get(len - 1).copied().unwrap_or(0);
            code = code * self.n as usize + letter as usize;
            digits.push(self.levels[len - 1][code]);
        }
        let q = BigInt::from(self.q);
        Ok(digits.iter().rev().fold(BigInt::zero(), |acc, &d| acc * &q + d))
    }

    /// Plain-text table: header `N q L`, then `word digit` per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.q, self.depth);
        for (word, digit) in self.entries() {
            out.push_str(&format!("{word} {digit}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty selection map".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse_err = |line: usize, what: &str| Error::Parse(format!("line {}: {what}", line + 1));
        if fields.len() != 3 {
            return Err(parse_err(0, "header must be `N q L`"));
        }
        let n: u32 = fields[0].parse().map_err(|_| parse_err(0, "bad N"))?;
        let q: u64 = fields[1].parse().map_err(|_| parse_err(0, "bad q"))?;
        let depth: usize = fields[2].parse().map_err(|_| parse_err(0, "bad L"))?;
        let mut map = SelectionMap::from_fn(n, q, depth, |_| 0)?;
        let mut seen = vec![vec![false; 0]; depth];
        for (len, level) in seen.iter_mut().enumerate() {
            *level = vec![false; (n as usize).pow(len as u32 + 1)];
        }
        for (line, content) in lines {
            let (w, d) = content
                .split_once(char::is_whitespace)
                .ok_or_else(|| parse_err(line, "expected `word digit`"))?;
            let word: Word = w.parse()?;
            let digit: i64 = d.trim().parse().map_err(|_| parse_err(line, "bad digit"))?;
            if word.is_empty() || word.len() > depth || word.0.iter().any(|&l| l >= n) {
                return Err(parse_err(line, "word outside the table"));
            }
            let slot = &mut seen[word.len() - 1][word_code(&word.0, n)];
            if *slot {
                return Err(parse_err(line, "duplicate word"));
            }
            *slot = true;
            map.set_digit(&word, digit)?;
        }
        if let Some(len) = seen.iter().position(|level| level.iter().any(|s| !s)) {
            return Err(Error::Parse(format!("table is missing words of length {}", len + 1)));
        }
        Ok(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_map_is_valid() {
        for (n, q) in [(2, 4), (3, 6), (2, 6), (4, 8)] {
            assert!(SelectionMap::canonical(n, q, 4).unwrap().validate().is_valid());
        }
    }

    #[test]
    fn canonical_map_with_n_equal_q_leaves_digit_range() {
        let report = SelectionMap::canonical(6, 6, 2).unwrap().validate();
        assert!(report.violates(Condition::DigitRange));
        assert!(!report.violates(Condition::Congruence));
        assert!(!report.violates(Condition::ZeroWords));
    }

    #[test]
    fn validation_reports_witnesses() {
        let mut m = SelectionMap::canonical(2, 4, 2).unwrap();
        m.set_digit(&w("1"), 2).unwrap();
        let report = m.validate();
        assert!(report.violates(Condition::Congruence));
        assert_eq!(report.violations[0].word, "1");

        let mut m = SelectionMap::canonical(2, 4, 2).unwrap();
        m.set_digit(&w("0"), 2).unwrap();
        let report = m.validate();
        assert!(report.violates(Condition::ZeroWords));
        assert_eq!(report.violations.len(), 1);

        let mut m = SelectionMap::canonical(2, 4, 2).unwrap();
        m.set_digit(&w("01"), 3).unwrap();
        assert!(m.validate().violates(Condition::DigitRange));
    }

    #[test]
    fn iota_star_examples() {
        let m = SelectionMap::canonical(2, 4, 3).unwrap();
        assert_eq!(m.iota_star(&Word::empty()).unwrap(), BigInt::zero());
        assert_eq!(m.iota_star(&w("1")).unwrap(), BigInt::from(1));
        assert_eq!(m.iota_star(&w("11")).unwrap(), BigInt::from(5));
        assert_eq!(m.iota_star(&w("01")).unwrap(), BigInt::from(4));
        assert!(m.iota_star(&w("10")).is_err());
        assert!(m.iota_star(&w("1111")).is_err());
    }

    #[test]
    fn iota_star_reads_zero_extension_digits() {
        let mut m = SelectionMap::canonical(2, 4, 3).unwrap();
        m.set_digit(&w("10"), 2).unwrap();
        m.set_digit(&w("100"), -0).unwrap();
        // ι(1) + ι(10)·4 + ι(100)·16
        assert_eq!(m.iota_star(&w("1")).unwrap(), BigInt::from(9));
    }

    #[test]
    fn random_maps_are_valid_and_seeded() {
        for (n, q) in [(2, 4), (3, 6), (2, 6), (6, 6)] {
            let a = SelectionMap::random(n, q, 4, 7).unwrap();
            assert!(a.validate().is_valid(), "n={n} q={q}");
            assert_eq!(a, SelectionMap::random(n, q, 4, 7).unwrap());
        }
        assert_ne!(SelectionMap::random(2, 4, 6, 1).unwrap(), SelectionMap::random(2, 4, 6, 2).unwrap());
    }

    #[test]
    fn admissible_digit_classes() {
        assert_eq!(admissible_digits(0, 2, 4), vec![0, 2]);
        assert_eq!(admissible_digits(1, 2, 4), vec![-1, 1]);
        assert_eq!(admissible_digits(5, 6, 6), vec![-1]);
        assert_eq!(admissible_digits(1, 3, 6), vec![1, 4]);
    }

    #[test]
    fn domain_order_and_size() {
        let m = SelectionMap::canonical(2, 4, 3).unwrap();
        let names: Vec<String> = m.domain(3).iter().map(ToString::to_string).collect();
        assert_eq!(names, ["", "1", "01", "11", "001", "011", "101", "111"]);
        assert_eq!(m.domain(0).len(), 1);
        assert_eq!(SelectionMap::canonical(3, 6, 4).unwrap().domain(4).len(), 81);
    }

    #[test]
    fn text_format_layout_and_errors() {
        let m = SelectionMap::canonical(2, 4, 2).unwrap();
        assert_eq!(m.to_text(), "2 4 2\n0 0\n1 1\n00 0\n01 1\n10 0\n11 1\n");
        assert!(SelectionMap::from_text("").is_err());
        assert!(SelectionMap::from_text("2 4 1\n0 0\n").is_err());
        assert!(SelectionMap::from_text("2 4 1\n0 0\n1 1\n1 1\n").is_err());
        assert!(SelectionMap::from_text("2 4 1\n0 0\n2 1\n").is_err());
        assert!(SelectionMap::from_text("2 5 1\n0 0\n1 1\n").is_err());
        let commented = "# canonical\n2 4 1\n0 0\n\n1 -1\n";
        assert_eq!(SelectionMap::from_text(commented).unwrap().digit(&w("1")), Some(-1));
    }

    proptest! {
        #[test]
        fn text_round_trip(n in 2u32..4, r in 1u64..4, depth in 1usize..4, seed in any::<u64>()) {
            let m = SelectionMap::random(n, u64::from(n) * r, depth, seed).unwrap();
            prop_assert_eq!(SelectionMap::from_text(&m.to_text()).unwrap(), m);
        }

        #[test]
        fn iota_star_is_injective(n in 2u32..4, r in 1u64..4, seed in any::<u64>()) {
            let m = SelectionMap::random(n, u64::from(n) * r, 4, seed).unwrap();
            let codes: HashSet<BigInt> =
                m.domain(4).iter().map(|w| m.iota_star(w).unwrap()).collect();
            prop_assert_eq!(codes.len(), m.domain(4).len());
        }
    }
}
