//! Generalized right Rauzy induction for exchanges with flips.
//!
//! Letter `b` is the step in which the rightmost domain interval `pi0(n)`
//! wins; the loser `pi1(n)` is moved inside the range row. Letter `a` is the
//! mirror step: `pi1(n)` wins and the loser `pi0(n)` moves inside the domain
//! row. The loser is reinserted immediately after the winner when the winner
//! is unflipped and immediately before it when the winner is flipped; in the
//! flipped case the loser's flip bit toggles.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::interval::{Fiet, FietCombinatorics, IntervalError, Label, RestrictedPair};
use crate::matrix::TransitionMatrix;
use crate::rational::format_rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RauzyError {
    #[error("rightmost intervals {top} and {bottom} both have length {length}; induction is undefined")]
    KeaneViolation { top: Label, bottom: Label, length: String },
    #[error("label {0} is rightmost in both rows; the step is degenerate")]
    DegenerateStep(Label),
    #[error("invalid path literal {0:?}")]
    ParsePath(String),
    #[error("combinatorics act on different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepLabel {
    A,
    B,
}

impl StepLabel {
    pub fn as_char(self) -> char {
        match self {
            StepLabel::A => 'a',
            StepLabel::B => 'b',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a' => Some(StepLabel::A),
            'b' => Some(StepLabel::B),
            _ => None,
        }
    }
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// `A*` when the domain-rightmost interval wins, `B*` when the
/// range-rightmost one does; `*2` when the winner is flipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    A1,
    A2,
    B1,
    B2,
}

impl CaseTag {
    pub fn letter(self) -> StepLabel {
        match self {
            CaseTag::A1 | CaseTag::A2 => StepLabel::B,
            CaseTag::B1 | CaseTag::B2 => StepLabel::A,
        }
    }

    pub fn winner_flipped(self) -> bool {
        matches!(self, CaseTag::A2 | CaseTag::B2)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::A1 => "a1",
            CaseTag::A2 => "a2",
            CaseTag::B1 => "b1",
            CaseTag::B2 => "b2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub new_comb: FietCombinatorics,
    pub winner: Label,
    pub loser: Label,
    pub case_tag: CaseTag,
    pub matrix: TransitionMatrix,
}

/// Combinatorial part of a step, without building the matrix.
fn step_comb(c: &FietCombinatorics, s: StepLabel) -> Result<(FietCombinatorics, Label, Label, CaseTag), RauzyError> {
    let top = c.pi0().last();
    let bottom = c.pi1().last();
    if top == bottom {
        return Err(RauzyError::DegenerateStep(top));
    }
    let (winner, loser) = match s {
        StepLabel::A => (bottom, top),
        StepLabel::B => (top, bottom),
    };
    let flipped = c.is_flipped(winner);
    let row = match s {
        StepLabel::A => c.pi0(),
        StepLabel::B => c.pi1(),
    };
    let k = row.position_of(winner);
    let moved = row.move_last_to(if flipped { k } else { k + 1 });
    let mut flips = c.flips().clone();
    if flipped && !flips.remove(&loser) {
        flips.insert(loser);
    }
    let (pi0, pi1) = match s {
        StepLabel::A => (moved, c.pi1().clone()),
        StepLabel::B => (c.pi0().clone(), moved),
    };
    let tag = match (s, flipped) {
        (StepLabel::B, false) => CaseTag::A1,
        (StepLabel::B, true) => CaseTag::A2,
        (StepLabel::A, false) => CaseTag::B1,
        (StepLabel::A, true) => CaseTag::B2,
    };
    Ok((FietCombinatorics::from_parts_unchecked(pi0, pi1, flips), winner, loser, tag))
}

/// One step selected by the letter, ignoring lengths.
pub fn symbolic_step(c: &FietCombinatorics, s: StepLabel) -> Result<StepOutcome, RauzyError> {
    let (new_comb, winner, loser, case_tag) = step_comb(c, s)?;
    Ok(StepOutcome { new_comb, winner, loser, case_tag, matrix: TransitionMatrix::elementary(c.n(), winner, loser) })
}

/// One length-driven step: the longer of the two rightmost intervals wins
/// and loses the loser's length.
pub fn rauzy_step(f: &Fiet) -> Result<(Fiet, StepOutcome), RauzyError> {
    let c = f.comb();
    let top = c.pi0().last();
    let bottom = c.pi1().last();
    let lt = f.lengths().get(top);
    let lb = f.lengths().get(bottom);
    let letter = match lt.cmp(lb) {
        std::cmp::Ordering::Greater => StepLabel::B,
        std::cmp::Ordering::Less => StepLabel::A,
        std::cmp::Ordering::Equal => {
            return Err(RauzyError::KeaneViolation { top, bottom, length: format_rational(lt) })
        }
    };
    let outcome = symbolic_step(c, letter)?;
    let mut lengths = f.lengths().as_slice().to_vec();
    lengths[outcome.winner - 1] = f.lengths().get(outcome.winner) - f.lengths().get(outcome.loser);
    let next = Fiet::from_parts(outcome.new_comb.clone(), lengths)?;
    Ok((next, outcome))
}

/// A word over `{a, b}` stored as runs, so exponents may be huge.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RauzyPath {
    runs: Vec<(StepLabel, BigUint)>,
}

impl RauzyPath {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_word(word: &str) -> Result<Self, RauzyError> {
        let mut p = Self::new();
        for ch in word.chars() {
            let s = StepLabel::from_char(ch).ok_or_else(|| RauzyError::ParsePath(word.to_string()))?;
            p.push(s, BigUint::one());
        }
        Ok(p)
    }

    /// Appends `count` copies of `s`, merging with the last run.
    pub fn push(&mut self, s: StepLabel, count: BigUint) {
        if count.is_zero() {
            return;
        }
        match self.runs.last_mut() {
            Some((last, n)) if *last == s => *n += count,
            _ => self.runs.push((s, count)),
        }
    }

    pub fn push_word(&mut self, word: &str) {
        for ch in word.chars() {
            let s = StepLabel::from_char(ch).expect("word over {a, b}");
            self.push(s, BigUint::one());
        }
    }

    pub fn extend(&mut self, other: &RauzyPath) {
        for (s, n) in &other.runs {
            self.push(*s, n.clone());
        }
    }

    pub fn runs(&self) -> &[(StepLabel, BigUint)] {
        &self.runs
    }

    pub fn len(&self) -> BigUint {
        self.runs.iter().map(|(_, n)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// The plain word, or `None` if it is longer than `limit` letters.
    pub fn to_word(&self, limit: usize) -> Option<String> {
        let len = self.len().to_usize()?;
        if len > limit {
            return None;
        }
        let mut out = String::with_capacity(len);
        for (s, n) in &self.runs {
            let n = n.to_usize()?;
            out.extend(std::iter::repeat_n(s.as_char(), n));
        }
        Some(out)
    }

    /// Splits at letter index `at` (0-based, must be `<= len`).
    pub fn split_at(&self, at: &BigUint) -> (RauzyPath, RauzyPath) {
        let mut left = RauzyPath::new();
        let mut right = RauzyPath::new();
        let mut remaining = at.clone();
        for (s, n) in &self.runs {
            if remaining.is_zero() {
                right.push(*s, n.clone());
            } else if &remaining >= n {
                left.push(*s, n.clone());
                remaining -= n;
            } else {
                left.push(*s, remaining.clone());
                right.push(*s, n - &remaining);
                remaining = BigUint::zero();
            }
        }
        (left, right)
    }
}

impl fmt::Display for RauzyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .runs
            .iter()
            .map(|(s, n)| if n.is_one() { s.to_string() } else { format!("{s}^{n}") })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for RauzyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RauzyPath({self})")
    }
}

impl FromStr for RauzyPath {
    type Err = RauzyError;

    /// Accepts words such as `aaab`, `a^12 b` or `ab^7a^5`; an exponent
    /// binds to the letter just before it and whitespace is ignored.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || RauzyError::ParsePath(text.to_string());
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = RauzyPath::new();
        let mut i = 0;
        while i < chars.len() {
            let s = StepLabel::from_char(chars[i]).ok_or_else(bad)?;
            i += 1;
            let mut count = BigUint::one();
            if i < chars.len() && chars[i] == '^' {
                let start = i + 1;
                i = start;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                count = digits.parse().map_err(|_| bad())?;
            }
            p.push(s, count);
        }
        Ok(p)
    }
}

/// Runs `count` steps of letter `s` from `c`, right-multiplying into `m`.
/// Eventually periodic runs are shortcut with a matrix power, so `count`
/// may be astronomically large.
fn apply_run(
    c: &FietCombinatorics,
    s: StepLabel,
    count: &BigUint,
    m: &mut TransitionMatrix,
) -> Result<FietCombinatorics, RauzyError> {
    let mut seen: HashMap<FietCombinatorics, usize> = HashMap::new();
    let mut trail: Vec<(Label, Label)> = Vec::new();
    let mut state = c.clone();
    let mut done = BigUint::zero();
    while &done < count {
        if let Some(&start) = seen.get(&state) {
            let cycle = &trail[start..];
            let remaining = count - &done;
            let period = BigUint::from(cycle.len());
            let reps = &remaining / &period;
            let rest = (&remaining % &period).to_usize().expect("remainder below period");
            if cycle.len() == 1 {
                m.right_mul_elementary_power(cycle[0].0, cycle[0].1, &reps);
            } else {
                let mut block = TransitionMatrix::identity(c.n());
                for &(w, l) in cycle {
                    block.right_mul_elementary_power(w, l, &BigUint::one());
                }
                *m = m.mul(&block.pow(reps));
            }
            for &(w, l) in &cycle[..rest] {
                m.right_mul_elementary_power(w, l, &BigUint::one());
                state = step_comb(&state, s)?.0;
            }
            return Ok(state);
        }
        seen.insert(state.clone(), trail.len());
        let (next, w, l, _) = step_comb(&state, s)?;
        m.right_mul_elementary_power(w, l, &BigUint::one());
        trail.push((w, l));
        state = next;
        done += 1u32;
    }
    Ok(state)
}

/// Threads `c` through the path; the matrix satisfies
/// `old lengths = matrix · new lengths`.
pub fn apply_path(c: &FietCombinatorics, path: &RauzyPath) -> Result<(FietCombinatorics, TransitionMatrix), RauzyError> {
    let mut m = TransitionMatrix::identity(c.n());
    let mut state = c.clone();
    for (s, count) in path.runs() {
        state = apply_run(&state, *s, count, &mut m)?;
    }
    Ok((state, m))
}

/// Combinatorics after the path, without the matrix.
pub fn apply_path_comb(c: &FietCombinatorics, path: &RauzyPath) -> Result<FietCombinatorics, RauzyError> {
    Ok(apply_path(c, path)?.0)
}

/// Matrix of `k` consecutive copies of the path, each copy starting where
/// the previous one ended.
pub fn path_matrix_for_power(
    c: &FietCombinatorics,
    path: &RauzyPath,
    k: usize,
) -> Result<(FietCombinatorics, TransitionMatrix), RauzyError> {
    assert!(k >= 1, "power must be at least 1");
    let mut state = c.clone();
    let mut m = TransitionMatrix::identity(c.n());
    for _ in 0..k {
        let (next, step) = apply_path(&state, path)?;
        m = m.mul(&step);
        state = next;
    }
    Ok((state, m))
}

/// Record of a length-driven run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub start: Fiet,
    pub end: Fiet,
    pub path: RauzyPath,
    pub matrix: TransitionMatrix,
    pub outcomes: Vec<StepOutcome>,
}

/// Performs `steps` length-driven steps.
pub fn rauzy_run(f: &Fiet, steps: usize) -> Result<RunRecord, RauzyError> {
    let mut current = f.clone();
    let mut path = RauzyPath::new();
    let mut matrix = TransitionMatrix::identity(f.n());
    let mut outcomes = Vec::with_capacity(steps);
    for _ in 0..steps {
        let (next, outcome) = rauzy_step(&current)?;
        path.push(outcome.case_tag.letter(), BigUint::one());
        matrix.right_mul_elementary_power(outcome.winner, outcome.loser, &BigUint::one());
        outcomes.push(outcome);
        current = next;
    }
    Ok(RunRecord { start: f.clone(), end: current, path, matrix, outcomes })
}

/// Restriction of `after` to `labels`, after checking both states share the
/// same label set.
pub fn induced_subpermutation(
    before: &FietCombinatorics,
    after: &FietCombinatorics,
    labels: &[Label],
) -> Result<RestrictedPair, RauzyError> {
    if before.n() != after.n() {
        return Err(RauzyError::SizeMismatch(before.n(), after.n()));
    }
    before.restrict(labels)?;
    Ok(after.restrict(labels)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn comb(pi0: &[Label], pi1: &[Label], flips: &[Label]) -> FietCombinatorics {
        FietCombinatorics::from_rows(pi0.to_vec(), pi1.to_vec(), flips.iter().copied()).unwrap()
    }

    #[test]
    fn unflipped_top_winner_inserts_after_in_range_row() {
        let c = comb(&[1, 2, 3], &[3, 2, 1], &[]);
        let out = symbolic_step(&c, StepLabel::B).unwrap();
        assert_eq!((out.winner, out.loser, out.case_tag), (3, 1, CaseTag::A1));
        assert_eq!(out.new_comb, comb(&[1, 2, 3], &[3, 1, 2], &[]));
    }

    #[test]
    fn flipped_winner_inserts_before_and_toggles_loser() {
        let c = comb(&[1, 2, 3], &[3, 2, 1], &[1]);
        let out = symbolic_step(&c, StepLabel::A).unwrap();
        assert_eq!((out.winner, out.loser, out.case_tag), (1, 3, CaseTag::B2));
        assert_eq!(out.new_comb, comb(&[3, 1, 2], &[3, 2, 1], &[1, 3]));
        let back = symbolic_step(&comb(&[1, 2, 3], &[3, 2, 1], &[1, 3]), StepLabel::A).unwrap();
        assert_eq!(back.new_comb.flips().iter().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn length_step_updates_winner_length() {
        let c = comb(&[1, 2, 3], &[3, 2, 1], &[]);
        let f = Fiet::from_parts(c, vec![int(2), int(3), int(5)]).unwrap();
        let (g, out) = rauzy_step(&f).unwrap();
        assert_eq!(out.case_tag, CaseTag::A1);
        assert_eq!(g.lengths().as_slice(), &[int(2), int(3), int(3)]);
        let old = out.matrix.apply_rational(g.lengths().as_slice());
        assert_eq!(old, f.lengths().as_slice());
    }

    #[test]
    fn equal_rightmost_lengths_are_rejected() {
        let c = comb(&[1, 2, 3], &[3, 2, 1], &[]);
        let f = Fiet::from_parts(c, vec![int(2), int(3), int(2)]).unwrap();
        assert!(matches!(rauzy_step(&f), Err(RauzyError::KeaneViolation { top: 3, bottom: 1, .. })));
    }

    #[test]
    fn degenerate_symbolic_step() {
        let c = comb(&[1, 2], &[1, 2], &[]);
        assert_eq!(symbolic_step(&c, StepLabel::A), Err(RauzyError::DegenerateStep(2)));
    }

    #[test]
    fn empty_path_is_identity() {
        let c = comb(&[1, 2, 3], &[3, 2, 1], &[2]);
        let (d, m) = apply_path(&c, &RauzyPath::new()).unwrap();
        assert_eq!(d, c);
        assert_eq!(m, TransitionMatrix::identity(3));
    }

    #[test]
    fn parse_and_display() {
        let p: RauzyPath = "aaab^3 a^2 ba".parse().unwrap();
        assert_eq!(p.to_word(100).unwrap(), "aaabbbaaba");
        assert_eq!(p.to_string(), "a^3 b^3 a^2 b a");
        assert_eq!(p.len(), BigUint::from(10u32));
        assert!("abc".parse::<RauzyPath>().is_err());
        assert!("a^x".parse::<RauzyPath>().is_err());
        assert!("^3".parse::<RauzyPath>().is_err());
    }

    #[test]
    fn long_runs_match_stepwise_runs() {
        let c = comb(&[1, 2, 3, 4], &[4, 3, 2, 1], &[2]);
        let stepwise = |word: &str| -> Result<(FietCombinatorics, TransitionMatrix), RauzyError> {
            let mut m = TransitionMatrix::identity(4);
            let mut s = c.clone();
            for ch in word.chars() {
                let out = symbolic_step(&s, StepLabel::from_char(ch).unwrap())?;
                m = m.mul(&out.matrix);
                s = out.new_comb;
            }
            Ok((s, m))
        };
        let mut checked = 0;
        for word in ["a^9", "b^11", "ab^7a^5", "b^3 a^13 b^2", "a^2 b^6"] {
            let p: RauzyPath = word.parse().unwrap();
            let expected = stepwise(&p.to_word(1000).unwrap());
            if expected.is_ok() {
                checked += 1;
            }
            assert_eq!(apply_path(&c, &p), expected, "{word}");
        }
        assert!(checked >= 2);
    }

    #[test]
    fn split_at_preserves_letters() {
        let p: RauzyPath = "a^5 b^3 a".parse().unwrap();
        let (l, r) = p.split_at(&BigUint::from(6u32));
        assert_eq!(l.to_string(), "a^5 b");
        assert_eq!(r.to_string(), "b^2 a");
    }
}
