//! JSON forms of exchanges, schedule configurations and reports. Exact
//! rationals are always written as `"num/den"` strings; decimal renderings
//! sit next to them for reading only.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Fiet, FietCombinatorics, IntervalError, Label};
use crate::keane::{
    AuxRule, BlockComposition, Construction, KeaneError, LimitReport, ParameterSchedule, PathVariant, ScheduleMode,
    SimplexVector,
};
use crate::matrix::TransitionMatrix;
use crate::rational::{format_rational, to_decimal, Rational};
use crate::rauzy::StepOutcome;

#[derive(Debug, Error)]
pub enum WireError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field n = {n} disagrees with a row of length {len}")]
    SizeField { n: usize, len: usize },
    #[error("invalid integer {0:?}")]
    Integer(String),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Keane(#[from] KeaneError),
}

/// `{n, pi0, pi1, flips, lengths}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FietJson {
    pub n: usize,
    pub pi0: Vec<Label>,
    pub pi1: Vec<Label>,
    pub flips: Vec<Label>,
    #[serde(with = "crate::rational::serde_vec")]
    pub lengths: Vec<Rational>,
}

impl FietJson {
    pub fn from_fiet(f: &Fiet) -> Self {
        let c = f.comb();
        Self {
            n: f.n(),
            pi0: c.pi0().labels().to_vec(),
            pi1: c.pi1().labels().to_vec(),
            flips: c.flips().iter().copied().collect(),
            lengths: f.lengths().as_slice().to_vec(),
        }
    }

    pub fn to_fiet(&self) -> Result<Fiet, WireError> {
        for len in [self.pi0.len(), self.pi1.len(), self.lengths.len()] {
            if len != self.n {
                return Err(WireError::SizeField { n: self.n, len });
            }
        }
        let comb = FietCombinatorics::from_rows(self.pi0.clone(), self.pi1.clone(), self.flips.iter().copied())?;
        Ok(Fiet::from_parts(comb, self.lengths.clone())?)
    }

    pub fn parse(text: &str) -> Result<Fiet, WireError> {
        serde_json::from_str::<FietJson>(text)?.to_fiet()
    }
}

/// Combinatorics without lengths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombJson {
    pub pi0: Vec<Label>,
    pub pi1: Vec<Label>,
    pub flips: Vec<Label>,
}

impl From<&FietCombinatorics> for CombJson {
    fn from(c: &FietCombinatorics) -> Self {
        Self {
            pi0: c.pi0().labels().to_vec(),
            pi1: c.pi1().labels().to_vec(),
            flips: c.flips().iter().copied().collect(),
        }
    }
}

pub fn matrix_rows(m: &TransitionMatrix) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct StepJson {
    pub letter: char,
    pub case: String,
    pub winner: Label,
    pub loser: Label,
    pub comb: CombJson,
    pub matrix: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiet: Option<FietJson>,
}

impl StepJson {
    pub fn new(outcome: &StepOutcome, next: Option<&Fiet>) -> Self {
        Self {
            letter: outcome.case_tag.letter().as_char(),
            case: outcome.case_tag.to_string(),
            winner: outcome.winner,
            loser: outcome.loser,
            comb: CombJson::from(&outcome.new_comb),
            matrix: matrix_rows(&outcome.matrix),
            fiet: next.map(FietJson::from_fiet),
        }
    }
}

/// A big integer written either as a JSON number or as a decimal string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum IntLike {
    Num(u64),
    Text(String),
}

impl IntLike {
    fn value(&self) -> Result<BigUint, WireError> {
        match self {
            IntLike::Num(v) => Ok(BigUint::from(*v)),
            IntLike::Text(s) => s.trim().parse().map_err(|_| WireError::Integer(s.clone())),
        }
    }
}

fn default_p4() -> AuxRule {
    AuxRule::P2
}

fn default_p5() -> AuxRule {
    AuxRule::P1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleConfigJson {
    d: IntLike,
    p1_1: IntLike,
    #[serde(default = "default_p4")]
    p4_rule: AuxRule,
    #[serde(default = "default_p5")]
    p5_rule: AuxRule,
    mode: ScheduleMode,
    #[serde(default)]
    variant: Option<PathVariant>,
    #[serde(default)]
    composition: Option<BlockComposition>,
    #[serde(default)]
    depth: Option<usize>,
}

/// Schedule configuration `{d, p1_1, p4_rule, p5_rule, mode}` with optional
/// `variant`, `composition` and `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleConfig {
    pub schedule: ParameterSchedule,
    pub variant: PathVariant,
    pub composition: BlockComposition,
    pub depth: Option<usize>,
}

impl ScheduleConfig {
    pub fn parse(text: &str) -> Result<Self, WireError> {
        let raw: ScheduleConfigJson = serde_json::from_str(text)?;
        let mut schedule = ParameterSchedule::new(raw.d.value()?, raw.p1_1.value()?, raw.mode)?;
        schedule.p4_rule = raw.p4_rule;
        schedule.p5_rule = raw.p5_rule;
        Ok(Self {
            schedule,
            variant: raw.variant.unwrap_or_default(),
            composition: raw.composition.unwrap_or_default(),
            depth: raw.depth,
        })
    }

    pub fn construction(&self) -> Construction {
        Construction::new(self.schedule.clone()).with_variant(self.variant).with_composition(self.composition)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplexJson {
    #[serde(with = "crate::rational::serde_vec")]
    pub exact: Vec<Rational>,
    pub decimal: Vec<String>,
    #[serde(with = "crate::rational::serde_str")]
    pub sum: Rational,
}

impl SimplexJson {
    pub fn new(v: &SimplexVector, digits: usize) -> Self {
        Self {
            exact: v.coords().to_vec(),
            decimal: v.coords().iter().map(|x| to_decimal(x, digits)).collect(),
            sum: v.sum(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiameterJson {
    pub m: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub exact: Rational,
    pub decimal: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReportJson {
    pub mode: String,
    pub d: String,
    pub p1_1: String,
    pub variant: PathVariant,
    pub composition: BlockComposition,
    pub m: usize,
    pub lambda2: SimplexJson,
    pub lambda5: SimplexJson,
    pub lambda7: SimplexJson,
    pub alpha: SimplexJson,
    pub contraction: Vec<DiameterJson>,
    pub complete: bool,
}

impl LimitReportJson {
    /// Built from the reports for depths `1..=m`; `series` must be
    /// non-empty and is allowed to stop early.
    pub fn new(c: &Construction, series: &[LimitReport], digits: usize, complete: bool) -> Self {
        let last = series.last().expect("at least one depth");
        Self {
            mode: c.schedule.mode.to_string(),
            d: c.schedule.d.to_string(),
            p1_1: c.schedule.p1_1.to_string(),
            variant: c.variant,
            composition: c.composition,
            m: last.m,
            lambda2: SimplexJson::new(&last.lambda2, digits),
            lambda5: SimplexJson::new(&last.lambda5, digits),
            lambda7: SimplexJson::new(&last.lambda7, digits),
            alpha: SimplexJson::new(&last.alpha, digits),
            contraction: series
                .iter()
                .map(|r| DiameterJson {
                    m: r.m,
                    exact: r.contraction_diameter.clone(),
                    decimal: to_decimal(&r.contraction_diameter, digits),
                })
                .collect(),
            complete,
        }
    }
}

/// The `"num/den"` text of every coordinate, for reuse as FIET lengths.
pub fn exact_strings(v: &SimplexVector) -> Vec<String> {
    v.coords().iter().map(format_rational).collect()
}
