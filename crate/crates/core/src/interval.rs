//! Interval exchange transformations with flips: combinatorics, exact
//! evaluation, orbits and a brute-force first-return map.
//!
//! Labels are `1..=n`. Positions inside a permutation row are 0-based.
//! Subintervals are closed on the left and open on the right; the left
//! endpoint of a flipped subinterval has no image in `[0, L)` and is treated
//! as a discontinuity.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{format_rational, is_positive, Rational};

pub type Label = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("permutation must act on at least one label")]
    EmptyPermutation,
    #[error("{0:?} is not a bijection on 1..={1}")]
    NotBijection(Vec<Label>, usize),
    #[error("permutations act on different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("flip label {0} is outside 1..={1}")]
    FlipOutOfRange(Label, usize),
    #[error("expected {expected} lengths, got {got}")]
    LengthCount { expected: usize, got: usize },
    #[error("length {value} of interval {label} is not positive")]
    NonPositiveLength { label: Label, value: String },
    #[error("point {point} is outside [0, {total})")]
    OutOfDomain { point: String, total: String },
    #[error("point {point} is the left endpoint of flipped interval {label}")]
    FlippedEndpoint { point: String, label: Label },
    #[error("orbit terminated at step {step}: {reason}")]
    OrbitTerminated { step: u64, reason: Box<IntervalError> },
    #[error("label {0} is not in 1..={1}")]
    UnknownLabel(Label, usize),
    #[error("first-return oracle not applicable: {0}")]
    OracleInapplicable(String),
}

/// One row of the combinatorial datum: `images[pos]` is the label placed at
/// position `pos`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<Label>,
}

impl Permutation {
    pub fn new(images: Vec<Label>) -> Result<Self, IntervalError> {
        let n = images.len();
        if n == 0 {
            return Err(IntervalError::EmptyPermutation);
        }
        let mut seen = vec![false; n];
        for &label in &images {
            if label == 0 || label > n || seen[label - 1] {
                return Err(IntervalError::NotBijection(images, n));
            }
            seen[label - 1] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (1..=n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.images
    }

    pub fn label_at(&self, pos: usize) -> Label {
        self.images[pos]
    }

    pub fn last(&self) -> Label {
        self.images[self.images.len() - 1]
    }

    pub fn position_of(&self, label: Label) -> usize {
        self.images
            .iter()
            .position(|&l| l == label)
            .expect("label belongs to the permutation")
    }

    /// Drops the label in the last position and reinserts `label` at `pos`.
    pub(crate) fn move_last_to(&self, pos: usize) -> Self {
        let mut images = self.images.clone();
        let label = images.pop().expect("non-empty");
        images.insert(pos, label);
        Self { images }
    }

    /// Applies a renaming `label -> rename[label - 1]` to every entry.
    pub fn relabel(&self, rename: &[Label]) -> Self {
        Self { images: self.images.iter().map(|&l| rename[l - 1]).collect() }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// The permutation pair `(pi0, pi1)` plus the flip set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FietCombinatorics {
    pi0: Permutation,
    pi1: Permutation,
    flips: BTreeSet<Label>,
}

/// Restriction of a permutation pair to a subset of labels, keeping the
/// relative order in each row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictedPair {
    pub top: Vec<Label>,
    pub bottom: Vec<Label>,
}

impl fmt::Display for RestrictedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |v: &[Label]| v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "{{{} / {}}}", row(&self.top), row(&self.bottom))
    }
}

impl FietCombinatorics {
    pub fn new(
        pi0: Permutation,
        pi1: Permutation,
        flips: impl IntoIterator<Item = Label>,
    ) -> Result<Self, IntervalError> {
        if pi0.len() != pi1.len() {
            return Err(IntervalError::SizeMismatch(pi0.len(), pi1.len()));
        }
        let n = pi0.len();
        let flips: BTreeSet<Label> = flips.into_iter().collect();
        if let Some(&bad) = flips.iter().find(|&&l| l == 0 || l > n) {
            return Err(IntervalError::FlipOutOfRange(bad, n));
        }
        Ok(Self { pi0, pi1, flips })
    }

    pub fn from_rows(
        pi0: Vec<Label>,
        pi1: Vec<Label>,
        flips: impl IntoIterator<Item = Label>,
    ) -> Result<Self, IntervalError> {
        Self::new(Permutation::new(pi0)?, Permutation::new(pi1)?, flips)
    }

    pub(crate) fn from_parts_unchecked(pi0: Permutation, pi1: Permutation, flips: BTreeSet<Label>) -> Self {
        Self { pi0, pi1, flips }
    }

    pub fn n(&self) -> usize {
        self.pi0.len()
    }

    pub fn pi0(&self) -> &Permutation {
        &self.pi0
    }

    pub fn pi1(&self) -> &Permutation {
        &self.pi1
    }

    pub fn flips(&self) -> &BTreeSet<Label> {
        &self.flips
    }

    pub fn is_flipped(&self, label: Label) -> bool {
        self.flips.contains(&label)
    }

    /// True iff no proper prefix of the domain row occupies exactly the
    /// same-length prefix of the range row.
    pub fn is_irreducible(&self) -> bool {
        let n = self.n();
        let mut top = vec![false; n];
        let mut bottom = vec![false; n];
        let mut balance = 0i64;
        for k in 0..n.saturating_sub(1) {
            let a = self.pi0.label_at(k) - 1;
            let b = self.pi1.label_at(k) - 1;
            top[a] = true;
            balance += if bottom[a] { -1 } else { 1 };
            bottom[b] = true;
            balance += if top[b] { -1 } else { 1 };
            if balance == 0 {
                return false;
            }
        }
        true
    }

    /// The combinatorics of the inverse map.
    pub fn inverse(&self) -> Self {
        Self { pi0: self.pi1.clone(), pi1: self.pi0.clone(), flips: self.flips.clone() }
    }

    pub fn restrict(&self, labels: &[Label]) -> Result<RestrictedPair, IntervalError> {
        let n = self.n();
        if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l > n) {
            return Err(IntervalError::UnknownLabel(bad, n));
        }
        let keep = |row: &Permutation| -> Vec<Label> {
            row.labels().iter().copied().filter(|l| labels.contains(l)).collect()
        };
        Ok(RestrictedPair { top: keep(&self.pi0), bottom: keep(&self.pi1) })
    }

    /// Renames every label through `rename[label - 1]`.
    pub fn relabel(&self, rename: &[Label]) -> Self {
        Self {
            pi0: self.pi0.relabel(rename),
            pi1: self.pi1.relabel(rename),
            flips: self.flips.iter().map(|&l| rename[l - 1]).collect(),
        }
    }
}

impl fmt::Debug for FietCombinatorics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} / {}}} F={:?}", self.pi0, self.pi1, self.flips)
    }
}

impl fmt::Display for FietCombinatorics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Positive lengths indexed by label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LengthVector(Vec<Rational>);

impl LengthVector {
    pub fn new(lengths: Vec<Rational>) -> Result<Self, IntervalError> {
        for (i, v) in lengths.iter().enumerate() {
            if !is_positive(v) {
                return Err(IntervalError::NonPositiveLength { label: i + 1, value: format_rational(v) });
            }
        }
        Ok(Self(lengths))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, label: Label) -> &Rational {
        &self.0[label - 1]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn total(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, v| acc + v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subinterval {
    pub label: Label,
    pub start: Rational,
    pub end: Rational,
}

/// A point together with the per-label visit counts of the orbit that led
/// to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoint {
    pub position: Rational,
    pub visit_counts: Vec<u64>,
}

/// An interval exchange with flips `T = (lengths, pi, F)`.
#[derive(Clone)]
pub struct Fiet {
    comb: FietCombinatorics,
    lengths: LengthVector,
    total: Rational,
    // left endpoints, in domain position order
    domain_starts: Vec<Rational>,
    // left endpoints by label
    domain_left: Vec<Rational>,
    range_left: Vec<Rational>,
}

impl PartialEq for Fiet {
    fn eq(&self, other: &Self) -> bool {
        self.comb == other.comb && self.lengths == other.lengths
    }
}

impl Eq for Fiet {}

impl fmt::Debug for Fiet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lengths: Vec<String> = self.lengths.as_slice().iter().map(format_rational).collect();
        write!(f, "Fiet({:?}, lengths={:?})", self.comb, lengths)
    }
}

fn left_ends(row: &Permutation, lengths: &LengthVector) -> (Vec<Rational>, Vec<Rational>) {
    let mut by_position = Vec::with_capacity(row.len());
    let mut by_label = vec![Rational::zero(); row.len()];
    let mut acc = Rational::zero();
    for &label in row.labels() {
        by_position.push(acc.clone());
        by_label[label - 1] = acc.clone();
        acc += lengths.get(label);
    }
    (by_position, by_label)
}

impl Fiet {
    pub fn new(comb: FietCombinatorics, lengths: LengthVector) -> Result<Self, IntervalError> {
        if lengths.len() != comb.n() {
            return Err(IntervalError::LengthCount { expected: comb.n(), got: lengths.len() });
        }
        let total = lengths.total();
        let (domain_starts, domain_left) = left_ends(comb.pi0(), &lengths);
        let (_, range_left) = left_ends(comb.pi1(), &lengths);
        Ok(Self { comb, lengths, total, domain_starts, domain_left, range_left })
    }

    pub fn from_parts(comb: FietCombinatorics, lengths: Vec<Rational>) -> Result<Self, IntervalError> {
        Self::new(comb, LengthVector::new(lengths)?)
    }

    pub fn comb(&self) -> &FietCombinatorics {
        &self.comb
    }

    pub fn lengths(&self) -> &LengthVector {
        &self.lengths
    }

    pub fn n(&self) -> usize {
        self.comb.n()
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn domain_left(&self, label: Label) -> &Rational {
        &self.domain_left[label - 1]
    }

    pub fn range_left(&self, label: Label) -> &Rational {
        &self.range_left[label - 1]
    }

    fn partition(&self, row: &Permutation, lefts: &[Rational]) -> Vec<Subinterval> {
        row.labels()
            .iter()
            .map(|&label| {
                let start = lefts[label - 1].clone();
                let end = &start + self.lengths.get(label);
                Subinterval { label, start, end }
            })
            .collect()
    }

    pub fn domain_partition(&self) -> Vec<Subinterval> {
        self.partition(self.comb.pi0(), &self.domain_left)
    }

    pub fn range_partition(&self) -> Vec<Subinterval> {
        self.partition(self.comb.pi1(), &self.range_left)
    }

    /// Label of the domain subinterval containing `x`.
    pub fn locate(&self, x: &Rational) -> Result<Label, IntervalError> {
        if x < &Rational::zero() || x >= &self.total {
            return Err(IntervalError::OutOfDomain { point: format_rational(x), total: format_rational(&self.total) });
        }
        let pos = self.domain_starts.partition_point(|s| s <= x) - 1;
        Ok(self.comb.pi0().label_at(pos))
    }

    pub fn evaluate(&self, x: &Rational) -> Result<Rational, IntervalError> {
        let label = self.locate(x)?;
        let u = &self.domain_left[label - 1];
        let v = &self.range_left[label - 1];
        if self.comb.is_flipped(label) {
            if x == u {
                return Err(IntervalError::FlippedEndpoint { point: format_rational(x), label });
            }
            Ok(v + u + self.lengths.get(label) - x)
        } else {
            Ok(v + (x - u))
        }
    }

    /// Applies the map `steps` times. `visit_counts` counts the starting
    /// point and excludes the final one.
    pub fn iterate(&self, x0: &Rational, steps: u64) -> Result<OrbitPoint, IntervalError> {
        self.locate(x0)?;
        let mut counts = vec![0u64; self.n()];
        let mut x = x0.clone();
        for step in 0..steps {
            let label = self.locate(&x).map_err(|e| IntervalError::OrbitTerminated { step, reason: Box::new(e) })?;
            x = self
                .evaluate(&x)
                .map_err(|e| IntervalError::OrbitTerminated { step, reason: Box::new(e) })?;
            counts[label - 1] += 1;
        }
        Ok(OrbitPoint { position: x, visit_counts: counts })
    }

    /// The map with domain and range rows exchanged.
    pub fn inverse(&self) -> Fiet {
        Fiet::new(self.comb.inverse(), self.lengths.clone()).expect("same lengths remain valid")
    }

    /// Integer-scaled copy whose common denominator also clears every
    /// denominator in `points`.
    pub fn scaled(&self, points: &[Rational]) -> ScaledFiet {
        ScaledFiet::new(self, points)
    }

    /// Brute-force first-return map to `[0, cut)`.
    ///
    /// Every domain piece is pushed forward until it lands back in
    /// `[0, cut)`, splitting whenever its image straddles a discontinuity or
    /// the cut. Each returned piece is labelled by the first interval on its
    /// itinerary; when two pieces claim the same label the one with the
    /// longer itinerary takes its first unclaimed itinerary label instead.
    pub fn first_return(&self, cut: &Rational) -> Result<Fiet, IntervalError> {
        const ROUND_BUDGET: usize = 4096;
        if !is_positive(cut) || cut > &self.total {
            return Err(IntervalError::OracleInapplicable(format!(
                "cut {} outside (0, {}]",
                format_rational(cut),
                format_rational(&self.total)
            )));
        }

        let mut pending: Vec<Piece> = Vec::new();
        for sub in self.domain_partition() {
            if &sub.start >= cut {
                continue;
            }
            let end = if &sub.end > cut { cut.clone() } else { sub.end.clone() };
            pending.push(Piece {
                dom_lo: sub.start.clone(),
                dom_hi: end.clone(),
                img_lo: sub.start,
                img_hi: end,
                reversed: false,
                itinerary: Vec::new(),
            });
        }

        let mut done: Vec<Piece> = Vec::new();
        let mut rounds = 0;
        while !pending.is_empty() {
            rounds += 1;
            if rounds > ROUND_BUDGET {
                return Err(IntervalError::OracleInapplicable("iteration budget exhausted".into()));
            }
            let mut next = Vec::new();
            for piece in pending {
                for moved in self.push_forward(piece) {
                    let (inside, outside) = moved.split_image_at(cut);
                    done.extend(inside);
                    next.extend(outside);
                }
            }
            pending = next;
        }

        if done.len() != self.n() {
            return Err(IntervalError::OracleInapplicable(format!(
                "return map has {} pieces, expected {}",
                done.len(),
                self.n()
            )));
        }
        done.sort_by(|a, b| a.dom_lo.cmp(&b.dom_lo));
        let labels = assign_labels(&done, self.n())?;

        let mut lengths = vec![Rational::zero(); self.n()];
        let mut flips = BTreeSet::new();
        for (piece, &label) in done.iter().zip(&labels) {
            lengths[label - 1] = &piece.dom_hi - &piece.dom_lo;
            if piece.reversed {
                flips.insert(label);
            }
        }
        let pi0 = Permutation::new(labels.clone())?;
        let mut by_image: Vec<(Rational, Label)> =
            done.iter().zip(&labels).map(|(p, &l)| (p.img_lo.clone(), l)).collect();
        by_image.sort();
        let pi1 = Permutation::new(by_image.into_iter().map(|(_, l)| l).collect())?;
        Fiet::from_parts(FietCombinatorics::new(pi0, pi1, flips)?, lengths)
    }

    fn push_forward(&self, piece: Piece) -> Vec<Piece> {
        let mut out = Vec::new();
        for sub in self.domain_partition() {
            let lo = if sub.start > piece.img_lo { sub.start.clone() } else { piece.img_lo.clone() };
            let hi = if sub.end < piece.img_hi { sub.end.clone() } else { piece.img_hi.clone() };
            if lo >= hi {
                continue;
            }
            let (dom_lo, dom_hi) = piece.preimage(&lo, &hi);
            let label = sub.label;
            let u = &self.domain_left[label - 1];
            let v = &self.range_left[label - 1];
            let flipped = self.comb.is_flipped(label);
            let (img_lo, img_hi) = if flipped {
                let s = v + u + self.lengths.get(label);
                (&s - &hi, &s - &lo)
            } else {
                (v + (&lo - u), v + (&hi - u))
            };
            let mut itinerary = piece.itinerary.clone();
            itinerary.push(label);
            out.push(Piece { dom_lo, dom_hi, img_lo, img_hi, reversed: piece.reversed ^ flipped, itinerary });
        }
        out
    }
}

#[derive(Debug, Clone)]
struct Piece {
    dom_lo: Rational,
    dom_hi: Rational,
    img_lo: Rational,
    img_hi: Rational,
    reversed: bool,
    itinerary: Vec<Label>,
}

impl Piece {
    fn preimage(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        if self.reversed {
            (&self.dom_lo + (&self.img_hi - hi), &self.dom_lo + (&self.img_hi - lo))
        } else {
            (&self.dom_lo + (lo - &self.img_lo), &self.dom_lo + (hi - &self.img_lo))
        }
    }

    fn restrict_image(&self, lo: Rational, hi: Rational) -> Piece {
        let (dom_lo, dom_hi) = self.preimage(&lo, &hi);
        Piece { dom_lo, dom_hi, img_lo: lo, img_hi: hi, reversed: self.reversed, itinerary: self.itinerary.clone() }
    }

    /// Splits into the part whose image lies below `cut` and the rest.
    fn split_image_at(self, cut: &Rational) -> (Option<Piece>, Option<Piece>) {
        if &self.img_hi <= cut {
            (Some(self), None)
        } else if &self.img_lo >= cut {
            (None, Some(self))
        } else {
            let inside = self.restrict_image(self.img_lo.clone(), cut.clone());
            let outside = self.restrict_image(cut.clone(), self.img_hi.clone());
            (Some(inside), Some(outside))
        }
    }
}

fn assign_labels(pieces: &[Piece], n: usize) -> Result<Vec<Label>, IntervalError> {
    let mut labels = vec![0; pieces.len()];
    let mut claimed = vec![false; n + 1];
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by_key(|&i| (pieces[i].itinerary.len(), i));
    for i in order {
        let choice = pieces[i].itinerary.iter().copied().find(|&l| !claimed[l]);
        match choice {
            Some(l) => {
                claimed[l] = true;
                labels[i] = l;
            }
            None => {
                return Err(IntervalError::OracleInapplicable(format!(
                    "no free label on itinerary {:?}",
                    pieces[i].itinerary
                )))
            }
        }
    }
    Ok(labels)
}

/// Integer-scaled copy of a [`Fiet`]; a point `x` is stored as the integer
/// `x * scale`. Used for long exact orbit runs.
#[derive(Debug, Clone)]
pub struct ScaledFiet {
    scale: BigInt,
    total: BigInt,
    // left endpoints in domain order, and the label at each position
    starts: Vec<BigInt>,
    position_labels: Vec<Label>,
    // per label: image = offset + x (translation) or offset - x (flip)
    offset: Vec<BigInt>,
    flipped: Vec<bool>,
    left: Vec<BigInt>,
}

impl ScaledFiet {
    fn new(f: &Fiet, points: &[Rational]) -> Self {
        let mut scale = BigInt::one();
        for v in f.lengths.as_slice().iter().chain(points) {
            scale = scale.lcm(v.denom());
        }
        let lift = |r: &Rational| r.numer() * (&scale / r.denom());
        let n = f.n();
        let mut offset = Vec::with_capacity(n);
        let mut flipped = Vec::with_capacity(n);
        let mut left = Vec::with_capacity(n);
        for label in 1..=n {
            let u = lift(f.domain_left(label));
            let v = lift(f.range_left(label));
            let len = lift(f.lengths.get(label));
            let is_flip = f.comb.is_flipped(label);
            offset.push(if is_flip { &v + &u + &len } else { &v - &u });
            flipped.push(is_flip);
            left.push(u);
        }
        Self {
            total: lift(&f.total),
            starts: f.domain_starts.iter().map(lift).collect(),
            position_labels: f.comb.pi0().labels().to_vec(),
            offset,
            flipped,
            left,
            scale,
        }
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn lift(&self, x: &Rational) -> Option<BigInt> {
        let scaled = x * Rational::from_integer(self.scale.clone());
        scaled.is_integer().then(|| scaled.to_integer())
    }

    pub fn unlift(&self, x: &BigInt) -> Rational {
        Rational::new(x.clone(), self.scale.clone())
    }

    pub fn total(&self) -> &BigInt {
        &self.total
    }

    pub fn locate(&self, x: &BigInt) -> Option<Label> {
        if x.sign() == num_bigint::Sign::Minus || x >= &self.total {
            return None;
        }
        let pos = self.starts.partition_point(|s| s <= x) - 1;
        Some(self.position_labels[pos])
    }

    /// Maps `x` in place and returns the label it was in.
    pub fn step(&self, x: &mut BigInt) -> Result<Label, IntervalError> {
        let label = self.locate(x).ok_or_else(|| IntervalError::OutOfDomain {
            point: x.to_string(),
            total: self.total.to_string(),
        })?;
        let i = label - 1;
        if self.flipped[i] {
            if *x == self.left[i] {
                return Err(IntervalError::FlippedEndpoint {
                    point: format_rational(&self.unlift(x)),
                    label,
                });
            }
            let image = &self.offset[i] - &*x;
            *x = image;
        } else {
            *x += &self.offset[i];
        }
        Ok(label)
    }
}
