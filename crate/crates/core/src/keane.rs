//! The explicit eight-interval example: combinatorial datum, the
//! parameterized loop path, its transition matrices, the parameter schedule
//! and the limit length vectors.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{FietCombinatorics, Label};
use crate::matrix::TransitionMatrix;
use crate::rational::{to_f64, Rational};
use crate::rauzy::{apply_path, RauzyError, RauzyPath, StepLabel};

pub const N: usize = 8;

#[derive(Debug, Error)]
pub enum KeaneError {
    #[error("parameter {0} must be positive")]
    NonPositiveParameter(&'static str),
    #[error("index {0} must be at least 1")]
    InvalidIndex(usize),
    #[error("block {block}: combinatorics ended at {found} instead of the starting datum")]
    ConstructionBroken { block: usize, found: String },
    #[error("product at depth {depth} needs {bits} bits, above the budget of {budget}")]
    ResourceLimit { depth: usize, bits: u64, budget: u64, partial: Vec<LimitReport> },
    #[error(transparent)]
    Rauzy(#[from] RauzyError),
}

/// `pi0 = 1..8`, `pi1 = (4,5,6,7,2,1,8,3)`, flips `{2,...,7}`.
pub fn example_datum() -> FietCombinatorics {
    FietCombinatorics::from_rows((1..=8).collect(), vec![4, 5, 6, 7, 2, 1, 8, 3], 2..=7).expect("valid datum")
}

/// State reached after one pass of the loop path.
pub fn shifted_datum() -> FietCombinatorics {
    FietCombinatorics::from_rows(vec![1, 4, 2, 3, 5, 6, 7, 8], vec![3, 5, 6, 7, 4, 1, 8, 2], 2..=7)
        .expect("valid datum")
}

/// Renaming `2 -> 4, 3 -> 2, 4 -> 3` that carries the datum to
/// [`shifted_datum`]; entry `k - 1` is the image of label `k`.
pub fn cycle_relabeling() -> Vec<Label> {
    vec![1, 4, 2, 3, 5, 6, 7, 8]
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParameterTriple {
    pub p1: BigUint,
    pub p2: BigUint,
    pub p3: BigUint,
    pub p4: BigUint,
    pub p5: BigUint,
}

impl ParameterTriple {
    pub fn new(p1: BigUint, p2: BigUint, p3: BigUint, p4: BigUint, p5: BigUint) -> Result<Self, KeaneError> {
        for (name, v) in [("p1", &p1), ("p2", &p2), ("p3", &p3), ("p4", &p4), ("p5", &p5)] {
            if v.is_zero() {
                return Err(KeaneError::NonPositiveParameter(name));
            }
        }
        Ok(Self { p1, p2, p3, p4, p5 })
    }

    pub fn small(p: [u64; 5]) -> Result<Self, KeaneError> {
        let [a, b, c, d, e] = p.map(BigUint::from);
        Self::new(a, b, c, d, e)
    }

    /// `p4 = p2` and `p5 = p1`.
    pub fn from_three(p1: BigUint, p2: BigUint, p3: BigUint) -> Result<Self, KeaneError> {
        Self::new(p1.clone(), p2.clone(), p3, p2, p1)
    }
}

impl fmt::Debug for ParameterTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p=({}, {}, {}; {}, {})", self.p1, self.p2, self.p3, self.p4, self.p5)
    }
}

/// Which word is used for one pass of the loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PathVariant {
    /// The five-loop word with exponents `p1..p5`.
    Listed,
    /// The three-loop word whose matrix is the symbolic product of the six
    /// factor matrices.
    #[default]
    ThreeLoop,
}

/// Fixed segments of the five-loop word, interleaved with `a^p1`, `b^p2`,
/// `a^p3`, `b^p4`, `a^p5`.
pub const LISTED_SEGMENTS: [&str; 6] = ["aaaabbabbab", "ba", "abb", "baaaa", "abbabb", "bba"];

/// Fixed segments of the three-loop word, interleaved with `a^p1`, `a^p2`,
/// `b^p3`.
pub const THREE_LOOP_SEGMENTS: [&str; 3] = ["aaaabbaaaaabbbaaab", "baaabaaaaabbb", "baababa"];

pub fn build_path(t: &ParameterTriple) -> RauzyPath {
    let loops = [
        (StepLabel::A, &t.p1),
        (StepLabel::B, &t.p2),
        (StepLabel::A, &t.p3),
        (StepLabel::B, &t.p4),
        (StepLabel::A, &t.p5),
    ];
    let mut p = RauzyPath::new();
    for (segment, (s, k)) in LISTED_SEGMENTS.iter().zip(loops) {
        p.push_word(segment);
        p.push(s, k.clone());
    }
    p.push_word(LISTED_SEGMENTS[5]);
    p
}

pub fn build_three_loop_path(t: &ParameterTriple) -> RauzyPath {
    let loops = [(StepLabel::A, &t.p1), (StepLabel::A, &t.p2), (StepLabel::B, &t.p3)];
    let mut p = RauzyPath::new();
    for (segment, (s, k)) in THREE_LOOP_SEGMENTS.iter().zip(loops) {
        p.push_word(segment);
        p.push(s, k.clone());
    }
    p
}

pub fn build_variant_path(t: &ParameterTriple, variant: PathVariant) -> RauzyPath {
    match variant {
        PathVariant::Listed => build_path(t),
        PathVariant::ThreeLoop => build_three_loop_path(t),
    }
}

/// Final combinatorics and matrix of one pass started at the datum.
pub fn theta_gamma_p(t: &ParameterTriple, variant: PathVariant) -> Result<(FietCombinatorics, TransitionMatrix), KeaneError> {
    Ok(apply_path(&example_datum(), &build_variant_path(t, variant))?)
}

fn u(v: u64) -> BigUint {
    BigUint::from(v)
}

/// The closed-form matrix of one pass, entered by hand.
pub fn displayed_theta(p1: &BigUint, p2: &BigUint, p3: &BigUint) -> TransitionMatrix {
    let a = |c: u64, x: &BigUint, k: u64| x * c + k;
    let k = |v: u64| u(v);
    let rows = vec![
        vec![k(9), a(8, p3, 7), a(1, p1, 4), k(13), a(1, p1, 5), a(1, p2, 6), a(1, p2, 7), k(8)],
        vec![k(1), a(1, p3, 1), k(0), k(2), k(0), k(0), k(0), k(1)],
        vec![k(9), a(9, p3, 8), a(1, p1, 3), k(14), a(1, p1, 4), a(2, p2, 6), a(2, p2, 8), k(9)],
        vec![k(6), a(6, p3, 5), k(3), k(9), k(3), a(1, p2, 4), a(1, p2, 5), k(6)],
        vec![k(0), k(0), p1.clone(), k(0), a(1, p1, 1), k(0), k(0), k(0)],
        vec![k(4), a(4, p3, 3), k(1), k(6), k(1), k(3), k(3), k(4)],
        vec![k(0), k(0), k(0), k(0), k(0), p2.clone(), a(1, p2, 1), k(0)],
        vec![k(3), a(4, p3, 3), k(1), k(5), k(1), a(1, p2, 2), a(1, p2, 3), k(4)],
    ];
    TransitionMatrix::from_rows(&rows)
}

/// The six factor matrices of one pass: three parameter-free blocks and the
/// three loop blocks `I + p E`, entered by hand.
pub fn displayed_factors(p1: &BigUint, p2: &BigUint, p3: &BigUint) -> [TransitionMatrix; 6] {
    let g1: [[u32; 8]; 8] = [
        [1, 1, 1, 2, 1, 2, 1, 1],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [1, 2, 1, 1, 1, 2, 2, 2],
        [1, 1, 1, 1, 0, 1, 1, 1],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 1, 0, 1, 0, 1, 0, 1],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [1, 1, 0, 0, 0, 0, 1, 1],
    ];
    let g3: [[u32; 8]; 8] = [
        [1, 1, 1, 1, 1, 0, 0, 1],
        [0, 1, 0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 1, 0, 0, 0],
        [0, 0, 1, 1, 1, 0, 0, 1],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [1, 1, 0, 1, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
    ];
    let g5: [[u32; 8]; 8] = [
        [1, 1, 0, 1, 0, 0, 0, 0],
        [0, 1, 0, 1, 0, 0, 0, 1],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [1, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 1, 0],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1, 1, 1],
    ];
    let from = |g: [[u32; 8]; 8]| TransitionMatrix::from_rows(&g.map(|r| r.to_vec()));
    let looped = |w: Label, l: Label, p: &BigUint| {
        let mut m = TransitionMatrix::identity(N);
        m.set(w, l, p.clone());
        m
    };
    [from(g1), looped(5, 3, p1), from(g3), looped(7, 6, p2), from(g5), looped(8, 2, p3)]
}

/// The column sums `|Θ e_j|` of one pass, as linear forms in `p1, p2, p3`.
pub fn expected_column_sums(t: &ParameterTriple) -> Vec<BigUint> {
    vec![
        u(32),
        &t.p3 * 32u32 + 27u32,
        &t.p1 * 3u32 + 12u32,
        u(49),
        &t.p1 * 3u32 + 15u32,
        &t.p2 * 6u32 + 21u32,
        &t.p2 * 6u32 + 27u32,
        u(32),
    ]
}

/// Entries of the five-loop word's matrix that change when only `p4`, `p5`
/// vary, for fixed `p1, p2, p3`. Sorted by `(row, column)`.
pub fn aux_dependent_entries(p1: &BigUint, p2: &BigUint, p3: &BigUint) -> Result<Vec<(Label, Label)>, KeaneError> {
    let samples = [(1u32, 1u32), (2, 1), (1, 2), (3, 5), (7, 4)];
    let mut mats = Vec::with_capacity(samples.len());
    for (p4, p5) in samples {
        let t = ParameterTriple::new(p1.clone(), p2.clone(), p3.clone(), u(p4.into()), u(p5.into()))?;
        mats.push(theta_gamma_p(&t, PathVariant::Listed)?.1);
    }
    let mut out = Vec::new();
    for i in 1..=N {
        for j in 1..=N {
            if mats.iter().any(|m| m.get(i, j) != mats[0].get(i, j)) {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// How the auxiliary exponents `p4`, `p5` are chosen for each triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxRule {
    P1,
    P2,
    P3,
    Fixed(u64),
}

impl AuxRule {
    fn pick(&self, p1: &BigUint, p2: &BigUint, p3: &BigUint) -> BigUint {
        match self {
            AuxRule::P1 => p1.clone(),
            AuxRule::P2 => p2.clone(),
            AuxRule::P3 => p3.clone(),
            AuxRule::Fixed(v) => BigUint::from(*v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleMode {
    Strict,
    Relaxed,
}

impl fmt::Display for ScheduleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScheduleMode::Strict => "strict",
            ScheduleMode::Relaxed => "relaxed",
        })
    }
}

/// One constraint of the schedule, evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub used_by: String,
    pub holds: bool,
}

/// `p1^{k+1} = d p3^k = d^2 p2^k = d^3 p1^k`, starting from `p1^1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterSchedule {
    pub d: BigUint,
    pub p1_1: BigUint,
    pub p4_rule: AuxRule,
    pub p5_rule: AuxRule,
    pub mode: ScheduleMode,
}

/// `d = 125001`, the smallest admissible strict value.
pub fn strict_d() -> BigUint {
    BigUint::from(125_001u32)
}

impl ParameterSchedule {
    pub fn new(d: BigUint, p1_1: BigUint, mode: ScheduleMode) -> Result<Self, KeaneError> {
        if d.is_zero() {
            return Err(KeaneError::NonPositiveParameter("d"));
        }
        if p1_1.is_zero() {
            return Err(KeaneError::NonPositiveParameter("p1_1"));
        }
        Ok(Self { d, p1_1, p4_rule: AuxRule::P2, p5_rule: AuxRule::P1, mode })
    }

    /// `d = 128`, `p1^1 = 2d`.
    pub fn relaxed() -> Self {
        Self::new(u(128), u(256), ScheduleMode::Relaxed).expect("positive")
    }

    /// `d = 125001`, `p1^1 = d + 1`.
    pub fn strict() -> Self {
        Self::new(strict_d(), strict_d() + 1u32, ScheduleMode::Strict).expect("positive")
    }

    /// The `k`-th triple, `k >= 1`; one triple per pass of the loop path.
    pub fn triple(&self, k: usize) -> Result<ParameterTriple, KeaneError> {
        if k == 0 {
            return Err(KeaneError::InvalidIndex(k));
        }
        let scale = num_traits::pow(self.d.clone(), 3 * (k - 1));
        let p1 = &self.p1_1 * scale;
        let p2 = &p1 * &self.d;
        let p3 = &p2 * &self.d;
        let p4 = self.p4_rule.pick(&p1, &p2, &p3);
        let p5 = self.p5_rule.pick(&p1, &p2, &p3);
        ParameterTriple::new(p1, p2, p3, p4, p5)
    }

    /// Constraints on `(d, p^1)`. Later triples only grow, so checking the
    /// first triple suffices for the monotone ones.
    pub fn constraint_checks(&self) -> Vec<ConstraintCheck> {
        let t = self.triple(1).expect("index 1");
        let d = &self.d;
        let check = |name: &str, used_by: &str, holds: bool| ConstraintCheck {
            name: name.to_string(),
            used_by: used_by.to_string(),
            holds,
        };
        let mut out = Vec::new();
        if self.mode == ScheduleMode::Strict {
            out.push(check("d > 125000", "schedule", d > &u(125_000)));
            out.push(check("p1^1 > d", "schedule", &self.p1_1 > d));
        }
        out.push(check("d - 1 > 4", "lemma1 x7>x5", d > &u(5)));
        out.push(check("d > 56", "lemma1 2x7>x4", d > &u(56)));
        out.push(check("d > 72", "lemma1 2x7>x1", d > &u(72)));
        out.push(check("d > 110", "lemma1 x5<1/10", d > &u(110)));
        out.push(check("d > 231", "lemma1 x7>1/7", d > &u(231)));
        out.push(check("p2 - 1 > 30", "lemma1 2x7>x8", t.p2 > u(31)));
        out.push(check("p2 - 3 > 58", "lemma1 2x7>x4", t.p2 > u(61)));
        out.push(check("p1 > 45", "lemma2 x5>1/4", t.p1 > u(45)));
        out.push(check("p3 > 2p1 + 4p2 + 61", "lemma3", t.p3 > &t.p1 * 2u32 + &t.p2 * 4u32 + 61u32));
        out.push(check("(b - 33)(p3 - 49) > 1617 at b = 34", "lemma4", t.p3 > u(49 + 1617)));
        out
    }

    pub fn unsupported(&self) -> Vec<ConstraintCheck> {
        self.constraint_checks().into_iter().filter(|c| !c.holds).collect()
    }
}

/// How the three passes inside one block are multiplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BlockComposition {
    /// Every pass uses the matrix computed from the datum itself, so the
    /// block is `Θ(p^{3i-2}) Θ(p^{3i-1}) Θ(p^{3i})`.
    #[default]
    Uniform,
    /// Every pass starts where the previous one stopped; this is the
    /// transition matrix of the actual three-pass induction.
    Threaded,
}

/// A point of the closed simplex: nonnegative rationals summing to one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplexVector {
    coords: Vec<Rational>,
}

impl SimplexVector {
    /// Normalizes a nonnegative, nonzero vector.
    pub fn normalize(v: Vec<Rational>) -> Self {
        let total: Rational = v.iter().fold(Rational::zero(), |a, x| a + x);
        assert!(total > Rational::zero(), "cannot normalize the zero vector");
        assert!(v.iter().all(|x| x >= &Rational::zero()), "negative coordinate");
        Self { coords: v.into_iter().map(|x| x / &total).collect() }
    }

    pub fn from_ints(v: &[BigUint]) -> Self {
        Self::normalize(v.iter().map(|x| Rational::from_integer(x.clone().into())).collect())
    }

    pub fn basis(n: usize, label: Label) -> Self {
        let mut v = vec![Rational::zero(); n];
        v[label - 1] = Rational::one();
        Self { coords: v }
    }

    pub fn barycenter(n: usize) -> Self {
        Self::normalize(vec![Rational::one(); n])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Coordinate of `label`, 1-based.
    pub fn x(&self, label: Label) -> &Rational {
        &self.coords[label - 1]
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.coords.iter().fold(Rational::zero(), |a, x| a + x)
    }

    pub fn in_open_simplex(&self) -> bool {
        self.coords.iter().all(|x| x > &Rational::zero())
    }

    pub fn l1_distance(&self, other: &Self) -> Rational {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(Rational::zero(), |a, (x, y)| a + if x > y { x - y } else { y - x })
    }

    /// Normalized image under `m`.
    pub fn push_through(&self, m: &TransitionMatrix) -> Self {
        Self::normalize(m.apply_rational(&self.coords))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(to_f64).collect()
    }
}

impl fmt::Debug for SimplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.to_f64().iter().map(|v| format!("{v:.6}")).collect();
        write!(f, "[{}]", shown.join(", "))
    }
}

#[derive(Debug, Clone)]
pub struct LimitReport {
    pub m: usize,
    pub lambda2: SimplexVector,
    pub lambda5: SimplexVector,
    pub lambda7: SimplexVector,
    pub alpha: SimplexVector,
    /// Largest pairwise L1 distance among the normalized images of the
    /// eight basis vectors.
    pub contraction_diameter: Rational,
}

/// The example built from a schedule, a path variant and a block rule.
#[derive(Debug, Clone)]
pub struct Construction {
    pub schedule: ParameterSchedule,
    pub variant: PathVariant,
    pub composition: BlockComposition,
    pub v: SimplexVector,
}

impl Construction {
    pub fn new(schedule: ParameterSchedule) -> Self {
        Self {
            schedule,
            variant: PathVariant::default(),
            composition: BlockComposition::default(),
            v: SimplexVector::barycenter(N),
        }
    }

    pub fn with_variant(mut self, variant: PathVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_composition(mut self, composition: BlockComposition) -> Self {
        self.composition = composition;
        self
    }

    pub fn with_v(mut self, v: SimplexVector) -> Self {
        self.v = v;
        self
    }

    /// Block `i >= 1`, built from triples `3i-2, 3i-1, 3i`. The three passes
    /// are always threaded once to confirm the return to the datum.
    pub fn theta_block(&self, i: usize) -> Result<TransitionMatrix, KeaneError> {
        if i == 0 {
            return Err(KeaneError::InvalidIndex(i));
        }
        let datum = example_datum();
        let mut state = datum.clone();
        let mut product = TransitionMatrix::identity(N);
        for k in 3 * i - 2..=3 * i {
            let path = build_variant_path(&self.schedule.triple(k)?, self.variant);
            let (next, threaded) = apply_path(&state, &path)?;
            let factor = match self.composition {
                BlockComposition::Threaded => threaded,
                BlockComposition::Uniform => apply_path(&datum, &path)?.1,
            };
            product = product.mul(&factor);
            state = next;
        }
        if state != datum {
            return Err(KeaneError::ConstructionBroken { block: i, found: format!("{state:?}") });
        }
        Ok(product)
    }

    pub fn blocks(&self, m: usize) -> Result<Vec<TransitionMatrix>, KeaneError> {
        (1..=m).into_par_iter().map(|i| self.theta_block(i)).collect()
    }

    /// `x_b = normalized Θ_{b+1} ... Θ_m e_label` for `b = 0..m-1`;
    /// entry `b` of the result is `x_b`.
    pub fn tower(&self, blocks: &[TransitionMatrix], label: Label) -> Vec<SimplexVector> {
        let m = blocks.len();
        let mut out = vec![SimplexVector::basis(N, label); m];
        let mut x = SimplexVector::basis(N, label);
        for b in (0..m).rev() {
            x = x.push_through(&blocks[b]);
            out[b] = x.clone();
        }
        out
    }

    pub fn limit_vectors(&self, m: usize) -> Result<LimitReport, KeaneError> {
        let series = self.limit_series(m, None)?;
        Ok(series.into_iter().last().expect("m >= 1"))
    }

    /// Reports for depths `1..=m`, sharing the running product. With a bit
    /// budget, stops with the reports computed so far once the product
    /// outgrows it.
    pub fn limit_series(&self, m: usize, bit_budget: Option<u64>) -> Result<Vec<LimitReport>, KeaneError> {
        if m == 0 {
            return Err(KeaneError::InvalidIndex(0));
        }
        let mut product = TransitionMatrix::identity(N);
        let mut out = Vec::with_capacity(m);
        for depth in 1..=m {
            product = product.mul(&self.theta_block(depth)?);
            if let Some(budget) = bit_budget {
                let bits = product.max_bits();
                if bits > budget {
                    return Err(KeaneError::ResourceLimit { depth, bits, budget, partial: out });
                }
            }
            out.push(report_for(depth, &product, &self.v));
        }
        Ok(out)
    }
}

fn report_for(m: usize, product: &TransitionMatrix, v: &SimplexVector) -> LimitReport {
    let images: Vec<SimplexVector> = (1..=N).map(|j| SimplexVector::from_ints(&product.column(j))).collect();
    let mut diameter = Rational::zero();
    for i in 0..N {
        for j in i + 1..N {
            let d = images[i].l1_distance(&images[j]);
            if d > diameter {
                diameter = d;
            }
        }
    }
    LimitReport {
        m,
        lambda2: images[1].clone(),
        lambda5: images[4].clone(),
        lambda7: images[6].clone(),
        alpha: v.push_through(product),
        contraction_diameter: diameter,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rauzy::apply_path_comb;

    #[test]
    fn datum_shape() {
        let c = example_datum();
        assert_eq!(c.pi1().label_at(0), 4);
        assert_eq!(c.flips().len(), 6);
        assert!(c.is_irreducible());
        assert_eq!(c.relabel(&cycle_relabeling()), shifted_datum());
    }

    #[test]
    fn listed_word_for_unit_parameters() {
        let t = ParameterTriple::small([1; 5]).unwrap();
        let expected = ["aaaabbabbab", "a", "ba", "b", "abb", "a", "baaaa", "b", "abbabb", "a", "bba"].concat();
        assert_eq!(build_path(&t).to_word(1000).unwrap(), expected);
    }

    #[test]
    fn both_words_reach_the_shifted_datum() {
        let t = ParameterTriple::small([2, 3, 4, 5, 6]).unwrap();
        for variant in [PathVariant::Listed, PathVariant::ThreeLoop] {
            let path = build_variant_path(&t, variant);
            assert_eq!(apply_path_comb(&example_datum(), &path).unwrap(), shifted_datum(), "{variant:?}");
        }
    }

    #[test]
    fn zero_parameter_is_rejected() {
        assert!(matches!(ParameterTriple::small([1, 0, 1, 1, 1]), Err(KeaneError::NonPositiveParameter("p2"))));
    }

    #[test]
    fn schedule_relations() {
        let s = ParameterSchedule::relaxed();
        let d = &s.d;
        for k in 1..5 {
            let t = s.triple(k).unwrap();
            let next = s.triple(k + 1).unwrap();
            assert_eq!(&t.p2, &(&t.p1 * d));
            assert_eq!(&t.p3, &(&t.p2 * d));
            assert_eq!(next.p1, &t.p3 * d);
            assert_eq!(t.p4, t.p2);
            assert_eq!(t.p5, t.p1);
        }
        assert!(matches!(s.triple(0), Err(KeaneError::InvalidIndex(0))));
    }

    #[test]
    fn relaxed_schedule_flags_only_the_large_d_constant() {
        let bad: Vec<String> = ParameterSchedule::relaxed().unsupported().into_iter().map(|c| c.name).collect();
        assert_eq!(bad, vec!["d > 231".to_string()]);
        assert!(ParameterSchedule::strict().unsupported().is_empty());
    }

    #[test]
    fn simplex_helpers() {
        let v = SimplexVector::from_ints(&[u(1), u(3)]);
        assert_eq!(v.sum(), Rational::one());
        assert_eq!(v.x(2), &Rational::new(3.into(), 4.into()));
        assert_eq!(v.l1_distance(&SimplexVector::basis(2, 1)), Rational::new(3.into(), 2.into()));
        assert!(!SimplexVector::basis(2, 1).in_open_simplex());
    }
}
