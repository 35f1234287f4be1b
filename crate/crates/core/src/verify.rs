//! Exact checks of the tower estimates and the measure separation, visit
//! frequency simulation, and the randomized induction-versus-return oracle.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::interval::{Fiet, FietCombinatorics, IntervalError, Label};
use crate::keane::{
    theta_gamma_p, Construction, ConstraintCheck, KeaneError, LimitReport, ParameterTriple, PathVariant,
    SimplexVector,
};
use crate::rational::{format_rational, ratio, Rational};
use crate::rauzy::{rauzy_step, RauzyError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("constant c = {0} must exceed 10")]
    SmallC(String),
    #[error("constant b = {0} must exceed 33")]
    SmallB(String),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error(transparent)]
    Keane(#[from] KeaneError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// One checked inequality, stored as `lhs > rhs` (or `lhs >= rhs`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityRecord {
    pub lemma: String,
    pub item: String,
    pub statement: String,
    /// Tower boundary `b` the vector was taken at, if any.
    pub depth: Option<usize>,
    #[serde(with = "crate::rational::serde_str")]
    pub lhs: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub rhs: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub margin: Rational,
    pub strict: bool,
    pub holds: bool,
}

impl InequalityRecord {
    fn new(lemma: &str, item: &str, statement: &str, greater: Rational, lesser: Rational, strict: bool) -> Self {
        let margin = &greater - &lesser;
        let holds = if strict { margin > Rational::zero() } else { margin >= Rational::zero() };
        Self {
            lemma: lemma.to_string(),
            item: item.to_string(),
            statement: statement.to_string(),
            depth: None,
            lhs: greater,
            rhs: lesser,
            margin,
            strict,
            holds,
        }
    }

    fn at_depth(mut self, depth: usize) -> Self {
        self.depth = Some(depth);
        self
    }
}

impl fmt::Display for InequalityRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let depth = self.depth.map(|d| format!(" depth {d}")).unwrap_or_default();
        write!(
            f,
            "{} {}{}: {} [{}] margin {:.6e}",
            self.lemma,
            self.item,
            depth,
            self.statement,
            if self.holds { "holds" } else { "FAILS" },
            crate::rational::to_f64(&self.margin)
        )
    }
}

fn q(v: &BigUint) -> Rational {
    Rational::from_integer(v.clone().into())
}

fn k(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// `|Θ x|` for one pass of the three-loop word with parameters `t`.
fn growth(x: &SimplexVector, t: &ParameterTriple) -> Result<Rational, KeaneError> {
    let (_, theta) = theta_gamma_p(t, PathVariant::ThreeLoop)?;
    let sums = theta.column_sums();
    Ok(sums.iter().zip(x.coords()).fold(Rational::zero(), |acc, (s, c)| acc + q(s) * c))
}

/// Estimates along the `lambda_7` tower, plus the auxiliary comparisons
/// used to derive them.
pub fn check_lemma1(x: &SimplexVector, t: &ParameterTriple, d: &BigUint) -> Result<Vec<InequalityRecord>, KeaneError> {
    let l = "lemma1";
    let r = |item: &str, st: &str, a: Rational, b: Rational| InequalityRecord::new(l, item, st, a, b, true);
    let xv = x;
    let x = |i: Label| xv.x(i).clone();
    let p1 = q(&t.p1);
    Ok(vec![
        r("1", "x7 > 1/7", x(7), ratio(1, 7)),
        r("2", "2x7 > x1", k(2) * x(7), x(1)),
        r("3", "2x7 > x4", k(2) * x(7), x(4)),
        r("4", "2x7 > x8", k(2) * x(7), x(8)),
        r("5", "4x7 > x3", k(4) * x(7), x(3)),
        r("6", "x7 > x5", x(7), x(5)),
        r("7", "x5 < 1/10", ratio(1, 10), x(5)),
        r("aux x6>x2", "x6 > x2", x(6), x(2)),
        r("aux x3>x7", "x3 > x7", x(3), x(7)),
        r("aux x2<1/p1", "x2 < 1/p1", Rational::one() / &p1, x(2)),
        r("aux (d-1)x7>x3", "(d-1) x7 > x3", (q(d) - k(1)) * x(7), x(3)),
        r("growth", "|Θx| > p2/2", growth(xv, t)?, q(&t.p2) / k(2)),
    ])
}

/// Estimates along the `lambda_5` tower.
pub fn check_lemma2(x: &SimplexVector, t: &ParameterTriple) -> Result<Vec<InequalityRecord>, KeaneError> {
    let l = "lemma2";
    let s = |item: &str, st: &str, a: Rational, b: Rational| InequalityRecord::new(l, item, st, a, b, true);
    let xv = x;
    let x = |i: Label| xv.x(i).clone();
    let p1 = q(&t.p1);
    Ok(vec![
        s("1", "x5 > 1/4", x(5), ratio(1, 4)),
        s("2", "2x3 > x1", k(2) * x(3), x(1)),
        s("3", "x3 + x5 > x1", x(3) + x(5), x(1)),
        s("4", "3x6 + x7 > x4", k(3) * x(6) + x(7), x(4)),
        InequalityRecord::new(l, "5", "x6 + x7 >= x8", x(6) + x(7), x(8), false),
        s("6", "x2 < 1/p1", Rational::one() / &p1, x(2)),
        s("7", "x6 < 7/p1", k(7) / &p1, x(6)),
        s("8", "x7 < 1/p1", Rational::one() / &p1, x(7)),
        s("9", "x8 < 22/p1", k(22) / &p1, x(8)),
        s("growth", "|Θx| > p1", growth(xv, t)?, p1.clone()),
    ])
}

/// `c x2 > xi` for every other coordinate, plus the coefficient condition on
/// `p3`.
pub fn check_lemma3(x: &SimplexVector, c: &Rational, t: &ParameterTriple) -> Result<Vec<InequalityRecord>, VerifyError> {
    if c <= &k(10) {
        return Err(VerifyError::SmallC(format_rational(c)));
    }
    let mut out: Vec<InequalityRecord> = [1, 3, 4, 5, 6, 7, 8]
        .iter()
        .map(|&i| {
            InequalityRecord::new(
                "lemma3",
                &format!("x{i}"),
                &format!("c x2 > x{i}"),
                c * x.x(2),
                x.x(i).clone(),
                true,
            )
        })
        .collect();
    out.push(InequalityRecord::new(
        "lemma3",
        "p3",
        "p3 > 2p1 + 4p2 + 61",
        q(&t.p3),
        k(2) * q(&t.p1) + k(4) * q(&t.p2) + k(61),
        true,
    ));
    Ok(out)
}

/// `x2 > 1/b`, plus the sufficient condition `(b-33)(p3-49) > 33*49`.
pub fn check_lemma4(x: &SimplexVector, b: &Rational, t: &ParameterTriple) -> Result<Vec<InequalityRecord>, VerifyError> {
    if b <= &k(33) {
        return Err(VerifyError::SmallB(format_rational(b)));
    }
    Ok(vec![
        InequalityRecord::new("lemma4", "1", "x2 > 1/b", x.x(2).clone(), Rational::one() / b, true),
        InequalityRecord::new(
            "lemma4",
            "condition",
            "(b-33)(p3-49) > 1617",
            (b - k(33)) * (q(&t.p3) - k(49)),
            k(33 * 49),
            true,
        ),
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport {
    pub records: Vec<InequalityRecord>,
    #[serde(with = "crate::rational::serde_vec")]
    pub sums: Vec<Rational>,
    /// `|l2 - l5|`, `|l2 - l7|`, `|l5 - l7|` in L1.
    #[serde(with = "crate::rational::serde_vec")]
    pub distances: Vec<Rational>,
}

impl SeparationReport {
    pub fn all_hold(&self) -> bool {
        self.records.iter().all(|r| r.holds)
    }
}

/// Pairwise separation of the three limit measures.
pub fn check_separation(
    l2: &SimplexVector,
    l5: &SimplexVector,
    l7: &SimplexVector,
    t: &ParameterTriple,
) -> SeparationReport {
    let one = Rational::one();
    let p1 = q(&t.p1);
    let inv_p1 = &one / &p1;
    let sums = vec![
        (&one - l5.x(7)) + l7.x(7),
        (&one - l7.x(5)) + l5.x(5),
        (&one - l7.x(2)) + l2.x(2),
        (&one - l5.x(2)) + l2.x(2),
    ];
    let s = |item: &str, st: &str, a: Rational, b: Rational| InequalityRecord::new("separation", item, st, a, b, true);
    let d25 = l2.l1_distance(l5);
    let d27 = l2.l1_distance(l7);
    let d57 = l5.l1_distance(l7);
    let records = vec![
        s("sum 5|7", "l5(not 7) + l7(7) > 1", sums[0].clone(), one.clone()),
        s("sum 7|5", "l7(not 5) + l5(5) > 1", sums[1].clone(), one.clone()),
        s("sum 7|2", "l7(not 2) + l2(2) > 1", sums[2].clone(), one.clone()),
        s("sum 5|2", "l5(not 2) + l2(2) > 1", sums[3].clone(), one.clone()),
        s("bound l7(7)", "l7(7) > 1/7", l7.x(7).clone(), ratio(1, 7)),
        s("bound l5(5)", "l5(5) > 1/4", l5.x(5).clone(), ratio(1, 4)),
        s("bound l2(2)", "l2(2) > 1/34", l2.x(2).clone(), ratio(1, 34)),
        s("bound l7(5)", "l7(5) < 1/10", ratio(1, 10), l7.x(5).clone()),
        s("bound l7(2)", "l7(2) < 1/p1", inv_p1.clone(), l7.x(2).clone()),
        s("bound l5(2)", "l5(2) < 1/p1", inv_p1.clone(), l5.x(2).clone()),
        s("bound l5(7)", "l5(7) < 1/p1", inv_p1.clone(), l5.x(7).clone()),
        s("chain 5|7", "(1 - 1/p1) + 1/7 > 1", &one - &inv_p1 + ratio(1, 7), one.clone()),
        s("chain 7|5", "(1 - 1/10) + 1/4 > 1", ratio(9, 10) + ratio(1, 4), one.clone()),
        s("chain 7|2", "(1 - 1/p1) + 1/34 > 1", &one - &inv_p1 + ratio(1, 34), one.clone()),
        s("distance 5,7", "|l5 - l7| > 1/7 - 1/p1", d57.clone(), ratio(1, 7) - &inv_p1),
        s("distance 5,7 via 5", "|l5 - l7| > 1/4 - 1/10", d57.clone(), ratio(1, 4) - ratio(1, 10)),
        s("distance 2,7", "|l2 - l7| > 1/34 - 1/p1", d27.clone(), ratio(1, 34) - &inv_p1),
        s("distance 2,5", "|l2 - l5| > 1/34 - 1/p1", d25.clone(), ratio(1, 34) - &inv_p1),
    ];
    SeparationReport { records, sums, distances: vec![d25, d27, d57] }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub depth: usize,
    pub records: Vec<InequalityRecord>,
    /// Schedule constraints that fail; they weaken the proof, not the
    /// computed records, and do not affect `all_hold`.
    pub unsupported: Vec<ConstraintCheck>,
    pub all_hold: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &InequalityRecord> {
        self.records.iter().filter(|r| !r.holds)
    }
}

/// Runs all tower checks at boundaries `b = 0..m-1` and the separation
/// checks on the depth-`m` limit vectors. The tower vector at boundary `b`
/// is paired with triple `3b+1`, the first pass of block `b+1`.
pub fn verify_construction(c: &Construction, m: usize) -> Result<VerificationReport, VerifyError> {
    let blocks = c.blocks(m)?;
    let d = &c.schedule.d;
    let towers: Vec<Vec<SimplexVector>> = [7, 5, 2].par_iter().map(|&label| c.tower(&blocks, label)).collect();
    let (t7, t5, t2) = (&towers[0], &towers[1], &towers[2]);
    let c11 = k(11);
    let b34 = k(34);
    let per_depth: Vec<Result<Vec<InequalityRecord>, VerifyError>> = (0..m)
        .into_par_iter()
        .map(|b| {
            let t = c.schedule.triple(3 * b + 1)?;
            let mut recs = check_lemma1(&t7[b], &t, d)?;
            recs.extend(check_lemma2(&t5[b], &t)?);
            recs.extend(check_lemma3(&t2[b], &c11, &t)?);
            recs.extend(check_lemma4(&t2[b], &b34, &t)?);
            Ok(recs.into_iter().map(|r| r.at_depth(b)).collect())
        })
        .collect();
    let mut records = Vec::new();
    for r in per_depth {
        records.extend(r?);
    }
    let t1 = c.schedule.triple(1)?;
    records.extend(check_separation(&t2[0], &t5[0], &t7[0], &t1).records);
    let all_hold = records.iter().all(|r| r.holds);
    Ok(VerificationReport { depth: m, records, unsupported: c.schedule.unsupported(), all_hold })
}

/// Limit vectors of the construction at depth `m` together with the checks.
pub fn limit_and_verify(c: &Construction, m: usize) -> Result<(LimitReport, VerificationReport), VerifyError> {
    Ok((c.limit_vectors(m)?, verify_construction(c, m)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitStatus {
    Ok,
    Terminated { step: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct FrequencyRow {
    pub start_index: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub start: Rational,
    pub horizon: u64,
    pub counts: Vec<u64>,
    /// Largest gap between consecutive orbit points, as a fraction of the
    /// total length.
    #[serde(with = "crate::rational::serde_str")]
    pub max_gap: Rational,
    pub status: OrbitStatus,
}

impl FrequencyRow {
    pub fn frequencies(&self) -> Vec<Rational> {
        let h = Rational::from_integer((self.horizon).into());
        self.counts.iter().map(|&c| Rational::from_integer(c.into()) / &h).collect()
    }

    pub fn frequencies_f64(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.horizon as f64).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FrequencyReport {
    pub horizons: Vec<u64>,
    pub rows: Vec<FrequencyRow>,
}

impl FrequencyReport {
    /// Largest L1 distance between frequency vectors of completed orbits at
    /// `horizon`.
    pub fn max_l1_spread(&self, horizon: u64) -> Option<(usize, usize, Rational)> {
        let rows: Vec<&FrequencyRow> =
            self.rows.iter().filter(|r| r.horizon == horizon && r.status == OrbitStatus::Ok).collect();
        let mut best: Option<(usize, usize, Rational)> = None;
        for (i, a) in rows.iter().enumerate() {
            let fa = a.frequencies();
            for b in &rows[i + 1..] {
                let d = fa
                    .iter()
                    .zip(b.frequencies())
                    .fold(Rational::zero(), |acc, (x, y)| acc + if x > &y { x - &y } else { y - x });
                if best.as_ref().is_none_or(|(_, _, m)| &d > m) {
                    best = Some((a.start_index, b.start_index, d));
                }
            }
        }
        best
    }
}

/// Midpoints of the domain subintervals, in domain order.
pub fn midpoints(f: &Fiet) -> Vec<Rational> {
    f.domain_partition().into_iter().map(|s| (s.start + s.end) / k(2)).collect()
}

/// Exact visit counts of each start's orbit at every horizon. Orbits that
/// hit an excluded endpoint are reported with their termination step; the
/// other starts are unaffected.
pub fn birkhoff_frequencies(f: &Fiet, starts: &[Rational], horizons: &[u64]) -> Result<FrequencyReport, VerifyError> {
    if horizons.contains(&0) {
        return Err(VerifyError::ZeroHorizon);
    }
    for x in starts {
        f.locate(x)?;
    }
    let mut sorted = horizons.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let scaled = f.scaled(starts);
    let total = Rational::from_integer(scaled.total().clone());
    let rows: Vec<Vec<FrequencyRow>> = starts
        .par_iter()
        .enumerate()
        .map(|(idx, x0)| {
            let mut x = scaled.lift(x0).expect("scale clears start denominators");
            let mut counts = vec![0u64; f.n()];
            let mut visited = Vec::with_capacity(*sorted.last().unwrap_or(&0) as usize);
            let mut rows = Vec::new();
            let mut step = 0u64;
            let mut status = OrbitStatus::Ok;
            for &h in &sorted {
                while step < h && status == OrbitStatus::Ok {
                    visited.push(x.clone());
                    match scaled.step(&mut x) {
                        Ok(label) => {
                            counts[label - 1] += 1;
                            step += 1;
                        }
                        Err(_) => {
                            visited.pop();
                            status = OrbitStatus::Terminated { step };
                        }
                    }
                }
                let mut pts = visited.clone();
                pts.sort_unstable();
                let mut gap = pts.first().cloned().unwrap_or_default();
                for w in pts.windows(2) {
                    let g = &w[1] - &w[0];
                    if g > gap {
                        gap = g;
                    }
                }
                if let Some(last) = pts.last() {
                    let tail = scaled.total() - last;
                    if tail > gap {
                        gap = tail;
                    }
                }
                rows.push(FrequencyRow {
                    start_index: idx,
                    start: x0.clone(),
                    horizon: h,
                    counts: counts.clone(),
                    max_gap: Rational::from_integer(gap) / &total,
                    status: status.clone(),
                });
                if status != OrbitStatus::Ok {
                    // frequencies past termination are not defined
                    break;
                }
            }
            rows
        })
        .collect();
    Ok(FrequencyReport { horizons: sorted, rows: rows.into_iter().flatten().collect() })
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleFailure {
    pub trial: u64,
    pub seed: u64,
    pub description: String,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct OracleSummary {
    pub trials: u64,
    pub passes: u64,
    pub failures: Vec<OracleFailure>,
    pub euclid_checks: u64,
    pub euclid_failures: Vec<OracleFailure>,
}

impl OracleSummary {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && self.euclid_failures.is_empty()
    }
}

/// Seed for trial `i` of a run seeded with `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// A random exchange with `n` in `2..=8`, random flips and pairwise
/// distinct rational lengths, whose two rightmost labels differ.
pub fn random_fiet(rng: &mut ChaCha8Rng) -> Fiet {
    loop {
        let n = rng.gen_range(2..=8);
        let mut pi0: Vec<Label> = (1..=n).collect();
        let mut pi1: Vec<Label> = (1..=n).collect();
        pi0.shuffle(rng);
        pi1.shuffle(rng);
        if pi0[n - 1] == pi1[n - 1] {
            continue;
        }
        let flips: Vec<Label> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
        let mut lengths: Vec<Rational> = Vec::with_capacity(n);
        while lengths.len() < n {
            let v = ratio(rng.gen_range(1..=2000), rng.gen_range(1..=60));
            if !lengths.contains(&v) {
                lengths.push(v);
            }
        }
        let comb = FietCombinatorics::from_rows(pi0, pi1, flips).expect("valid permutations");
        return Fiet::from_parts(comb, lengths).expect("positive lengths");
    }
}

/// Compares one length-driven step with the first-return map to the
/// shortened interval.
pub fn compare_step_with_return(f: &Fiet) -> Result<(), String> {
    let (stepped, _) = rauzy_step(f).map_err(|e| e.to_string())?;
    let top = f.comb().pi0().last();
    let bottom = f.comb().pi1().last();
    let shortest = std::cmp::min(f.lengths().get(top), f.lengths().get(bottom)).clone();
    let cut = f.total() - shortest;
    let returned = f.first_return(&cut).map_err(|e| e.to_string())?;
    if returned == stepped {
        Ok(())
    } else {
        Err(format!("step gave {stepped:?}, first return gave {returned:?}"))
    }
}

/// Subtractive Euclid on `(a, b)`: the sequence of pairs until they meet.
pub fn subtractive_euclid(mut a: BigUint, mut b: BigUint) -> Vec<(BigUint, BigUint)> {
    let mut out = vec![(a.clone(), b.clone())];
    while a != b && !a.is_zero() && !b.is_zero() {
        if a > b {
            a -= &b;
        } else {
            b -= &a;
        }
        out.push((a.clone(), b.clone()));
    }
    out
}

/// Runs length-driven induction on the two-interval rotation with lengths
/// `(a, b)` until the rightmost lengths coincide.
pub fn rotation_induction(a: &BigUint, b: &BigUint) -> Result<Vec<(BigUint, BigUint)>, String> {
    let comb = FietCombinatorics::from_rows(vec![1, 2], vec![2, 1], []).map_err(|e| e.to_string())?;
    let mut f = Fiet::from_parts(comb, vec![q(a), q(b)]).map_err(|e| e.to_string())?;
    let mut out = vec![(a.clone(), b.clone())];
    loop {
        match rauzy_step(&f) {
            Ok((g, _)) => {
                let l = g.lengths().as_slice();
                let to_int = |r: &Rational| BigUint::try_from(r.to_integer()).expect("positive integer length");
                out.push((to_int(&l[0]), to_int(&l[1])));
                f = g;
            }
            Err(RauzyError::KeaneViolation { .. }) => return Ok(out),
            Err(e) => return Err(e.to_string()),
        }
    }
}

/// `trials` random single-step comparisons plus rotation-versus-Euclid
/// checks on Fibonacci pairs and random pairs. Trial `i` is replayable from
/// [`trial_seed`].
pub fn oracle_crosscheck(trials: u64, seed: u64) -> OracleSummary {
    let results: Vec<(u64, Result<(), String>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = trial_seed(seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let f = random_fiet(&mut rng);
            (i, compare_step_with_return(&f).map_err(|e| format!("{e} for {f:?}")))
        })
        .collect();
    let mut summary = OracleSummary { trials, ..Default::default() };
    for (i, r) in results {
        match r {
            Ok(()) => summary.passes += 1,
            Err(description) => summary.failures.push(OracleFailure { trial: i, seed: trial_seed(seed, i), description }),
        }
    }
    if trials == 0 {
        return summary;
    }
    let mut pairs: Vec<(BigUint, BigUint)> = Vec::new();
    let (mut fa, mut fb) = (BigUint::one(), BigUint::from(2u32));
    for _ in 0..40 {
        pairs.push((fa.clone(), fb.clone()));
        let next = &fa + &fb;
        fa = fb;
        fb = next;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials.min(200) {
        pairs.push((BigUint::from(rng.gen_range(1u64..100_000)), BigUint::from(rng.gen_range(1u64..100_000))));
    }
    for (i, (a, b)) in pairs.into_iter().enumerate() {
        summary.euclid_checks += 1;
        let expected = subtractive_euclid(a.clone(), b.clone());
        let got = rotation_induction(&a, &b);
        if got.as_ref() != Ok(&expected) {
            summary.euclid_failures.push(OracleFailure {
                trial: i as u64,
                seed,
                description: format!("lengths ({a}, {b}): induction {got:?}, euclid {expected:?}"),
            });
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn t(p1: u64) -> ParameterTriple {
        ParameterTriple::small([p1, p1 * 128, p1 * 128 * 128, p1, p1]).unwrap()
    }

    fn uniform() -> SimplexVector {
        SimplexVector::barycenter(8)
    }

    fn find<'a>(recs: &'a [InequalityRecord], item: &str) -> &'a InequalityRecord {
        recs.iter().find(|r| r.item == item).unwrap()
    }

    #[test]
    fn lemma1_uniform_vector_fails_item1() {
        let recs = check_lemma1(&uniform(), &t(256), &BigUint::from(128u32)).unwrap();
        let r = find(&recs, "1");
        assert!(!r.holds);
        assert_eq!(r.margin, ratio(1, 8) - ratio(1, 7));
    }

    #[test]
    fn lemma1_basis_vector() {
        let recs = check_lemma1(&SimplexVector::basis(8, 7), &t(256), &BigUint::from(128u32)).unwrap();
        for item in ["1", "2", "3", "4", "5", "6", "7"] {
            assert!(find(&recs, item).holds, "item {item}");
        }
    }

    #[test]
    fn lemma2_basis_vector_and_uniform_item6() {
        let recs = check_lemma2(&SimplexVector::basis(8, 5), &t(256)).unwrap();
        for item in ["1", "3", "5", "6", "7", "8", "9"] {
            assert!(find(&recs, item).holds, "item {item}");
        }
        // both sides vanish at e5, so the strict comparisons fail with zero margin
        for item in ["2", "4"] {
            let r = find(&recs, item);
            assert!(!r.holds && r.margin == Rational::zero(), "item {item}");
        }
        let small = ParameterTriple::small([4, 4, 4, 4, 4]).unwrap();
        assert!(find(&check_lemma2(&uniform(), &small).unwrap(), "6").holds);
        let larger = ParameterTriple::small([16, 4, 4, 4, 4]).unwrap();
        assert!(!find(&check_lemma2(&uniform(), &larger).unwrap(), "6").holds);
    }

    #[test]
    fn lemma2_item5_is_not_strict() {
        let v = SimplexVector::normalize(vec![int(0), int(0), int(0), int(0), int(0), int(1), int(0), int(1)]);
        let recs = check_lemma2(&v, &t(256)).unwrap();
        let r = find(&recs, "5");
        assert!(r.holds && r.margin == Rational::zero() && !r.strict);
    }

    #[test]
    fn lemma3_and_lemma4_constants() {
        let e2 = SimplexVector::basis(8, 2);
        assert!(check_lemma3(&e2, &int(11), &t(256)).unwrap().iter().all(|r| r.holds));
        assert!(matches!(check_lemma3(&e2, &int(10), &t(256)), Err(VerifyError::SmallC(_))));
        assert!(check_lemma4(&e2, &int(34), &t(256)).unwrap().iter().all(|r| r.holds));
        assert!(matches!(check_lemma4(&e2, &int(33), &t(256)), Err(VerifyError::SmallB(_))));
        let p3 = ParameterTriple::small([1, 1, 125_000, 1, 1]).unwrap();
        let cond = check_lemma4(&e2, &int(34), &p3).unwrap();
        assert_eq!(cond[1].lhs, int(125_000 - 49));
        assert!(cond[1].holds);
    }

    #[test]
    fn separation_of_basis_vectors_and_identical_inputs() {
        let (e2, e5, e7) = (SimplexVector::basis(8, 2), SimplexVector::basis(8, 5), SimplexVector::basis(8, 7));
        let rep = check_separation(&e2, &e5, &e7, &t(256));
        assert!(rep.sums.iter().all(|s| s == &int(2)));
        assert!(rep.all_hold());
        let u = uniform();
        let same = check_separation(&u, &u, &u, &t(256));
        assert!(same.records.iter().filter(|r| r.item.starts_with("sum")).all(|r| !r.holds));
    }

    #[test]
    fn euclid_oracle_matches_rotation() {
        for (a, b) in [(5u32, 8u32), (21, 13), (7, 7), (1, 100)] {
            let (a, b) = (BigUint::from(a), BigUint::from(b));
            assert_eq!(rotation_induction(&a, &b).unwrap(), subtractive_euclid(a, b));
        }
    }

    #[test]
    fn zero_trials_give_empty_summary() {
        let s = oracle_crosscheck(0, 7);
        assert_eq!((s.trials, s.passes, s.euclid_checks), (0, 0, 0));
        assert!(s.all_pass());
    }

    #[test]
    fn horizon_one_gives_indicator() {
        let comb = FietCombinatorics::from_rows(vec![1, 2, 3], vec![2, 3, 1], [1, 3]).unwrap();
        let f = Fiet::from_parts(comb, vec![int(1), int(5), int(4)]).unwrap();
        let rep = birkhoff_frequencies(&f, &midpoints(&f), &[1]).unwrap();
        for (i, row) in rep.rows.iter().enumerate() {
            let mut expected = vec![0; 3];
            expected[i] = 1;
            assert_eq!(row.counts, expected);
        }
        assert!(matches!(birkhoff_frequencies(&f, &[], &[0]), Err(VerifyError::ZeroHorizon)));
    }
}
