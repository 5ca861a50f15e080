//! Seeded checks of the quantitative inequalities about sets of small
//! doubling and approximate groups. Every check yields [`LawReport`] rows.

mod checks;
mod instances;
mod runner;

pub use checks::*;
pub use instances::{random_element, random_subset, random_symmetric, FAMILIES};
pub use runner::{run_law, LawParams, LAWS};

use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};


pub type Rational = BigRational;

pub fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: usize, den: usize) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rpow(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

/// Smallest integer `>= r`.
pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    AtMost,
    AtLeast,
}

impl Direction {
    pub fn symbol(self) -> &'static str {
        match self {
            Direction::AtMost => "<=",
            Direction::AtLeast => ">=",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawStatus {
    Satisfied,
    Violated,
    HypothesisFailed,
    BudgetExceeded,
}

impl fmt::Display for LawStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LawStatus::Satisfied => "satisfied",
            LawStatus::Violated => "violated",
            LawStatus::HypothesisFailed => "hypothesis_failed",
            LawStatus::BudgetExceeded => "budget_exceeded",
        })
    }
}

/// One verified inequality on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub law_id: String,
    pub trial: u64,
    pub seed: u64,
    pub instance: String,
    pub constants: Vec<(String, Rational)>,
    pub measured: Vec<(String, Rational)>,
    /// Name of the measured quantity compared against `bound`.
    pub compared: String,
    pub bound: Rational,
    pub direction: Direction,
    pub status: LawStatus,
}

impl LawReport {
    pub fn new(law_id: &str, instance: impl Into<String>) -> Self {
        LawReport {
            law_id: law_id.to_string(),
            trial: 0,
            seed: 0,
            instance: instance.into(),
            constants: Vec::new(),
            measured: Vec::new(),
            compared: String::new(),
            bound: Rational::zero(),
            direction: Direction::AtMost,
            status: LawStatus::Satisfied,
        }
    }

    pub fn constant(mut self, name: &str, value: Rational) -> Self {
        self.constants.push((name.to_string(), value));
        self
    }

    pub fn measure(mut self, name: &str, value: Rational) -> Self {
        self.measured.push((name.to_string(), value));
        self
    }

    pub fn measured_value(&self, name: &str) -> Option<&Rational> {
        self.measured.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn constant_value(&self, name: &str) -> Option<&Rational> {
        self.constants.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// The value named `compared`.
    pub fn value(&self) -> Option<&Rational> {
        self.measured_value(&self.compared)
    }

    /// Records `value` under `name` and judges it against `bound`.
    pub fn compare(mut self, name: &str, value: Rational, bound: Rational, direction: Direction) -> Self {
        let ok = match direction {
            Direction::AtMost => value <= bound,
            Direction::AtLeast => value >= bound,
        };
        self.measured.push((name.to_string(), value));
        self.compared = name.to_string();
        self.bound = bound;
        self.direction = direction;
        self.status = if ok { LawStatus::Satisfied } else { LawStatus::Violated };
        self
    }

    pub fn hypothesis_failed(mut self) -> Self {
        self.status = LawStatus::HypothesisFailed;
        self
    }

    pub fn budget_exceeded(law_id: &str, limit: usize) -> Self {
        let mut r = LawReport::new(law_id, format!("size budget of {limit} elements exceeded"));
        r.status = LawStatus::BudgetExceeded;
        r
    }

    pub fn satisfied(&self) -> bool {
        self.status == LawStatus::Satisfied
    }
}

fn render_map(entries: &[(String, Rational)]) -> String {
    entries
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub const CSV_HEADER: [&str; 8] = [
    "law_id",
    "trial",
    "seed",
    "instance",
    "constants",
    "measured",
    "bound",
    "status",
];

/// Writes reports as CSV with a header row.
pub fn write_csv<W: Write>(out: W, reports: &[LawReport]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        let bound = if r.compared.is_empty() {
            String::new()
        } else {
            format!("{} {} {}", r.compared, r.direction.symbol(), r.bound)
        };
        w.write_record([
            r.law_id.as_str(),
            &r.trial.to_string(),
            &r.seed.to_string(),
            &r.instance,
            &render_map(&r.constants),
            &render_map(&r.measured),
            &bound,
            &r.status.to_string(),
        ])?;
    }
    w.flush()
}

/// Tallies by status: (satisfied, violated, hypothesis_failed, budget_exceeded).
pub fn tally(reports: &[LawReport]) -> [usize; 4] {
    let mut t = [0; 4];
    for r in reports {
        t[match r.status {
            LawStatus::Satisfied => 0,
            LawStatus::Violated => 1,
            LawStatus::HypothesisFailed => 2,
            LawStatus::BudgetExceeded => 3,
        }] += 1;
    }
    t
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

pub(crate) fn summary(set: &crate::setcalc::ElementSet) -> String {
    let ctx = set.ctx();
    if set.len() <= 12 {
        let items: Vec<String> = set
            .iter()
            .map(|e| crate::group::format_element(ctx, e))
            .collect();
        format!("{} {{{}}}", ctx.descriptor(), items.join(" "))
    } else {
        format!("{} |A|={}", ctx.descriptor(), set.len())
    }
}
