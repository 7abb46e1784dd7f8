//! Exact tick arithmetic for bid values.
//!
//! Every amount of money handled by the crate is an integer number of grid
//! steps. Comparisons are therefore exact and the sup/inf of a utility over a
//! finite grid is a plain max/min.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// An amount of money measured in grid ticks. May be negative (utilities).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Money(pub i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub fn ticks(self) -> i64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        Money(iter.map(|m| m.0).sum())
    }
}

impl<'a> Sum<&'a Money> for Money {
    fn sum<I: Iterator<Item = &'a Money>>(iter: I) -> Money {
        iter.copied().sum()
    }
}

/// Ratio of two amounts, e.g. revenue over welfare. Panics on a zero denominator.
pub fn ratio(num: Money, den: Money) -> Rational {
    Rational::new(num.0, den.0)
}

/// Parse a decimal (`0.25`), fraction (`1/3`) or integer string exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::BadNumber(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if frac_part.len() > 15 {
        return Err(bad());
    }
    let scale = 10i64.pow(frac_part.len() as u32);
    let int_val: i64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
    let frac_val: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
    let num = int_val.checked_mul(scale).and_then(|v| v.checked_add(frac_val)).ok_or_else(bad)?;
    Ok(Rational::new(if neg { -num } else { num }, scale))
}

/// Finite discretisation `{0, delta, 2 delta, ..., h}` of the bid interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridDomain {
    h: Rational,
    delta: Rational,
    h_ticks: i64,
}

impl GridDomain {
    pub fn new(h: Rational, delta: Rational) -> Result<Self> {
        if h <= Rational::from_integer(0) {
            return Err(Error::InvalidGrid(format!("upper bound h = {h} must be positive")));
        }
        if delta <= Rational::from_integer(0) {
            return Err(Error::InvalidGrid(format!("step delta = {delta} must be positive")));
        }
        let steps = h / delta;
        if !steps.is_integer() {
            return Err(Error::InvalidGrid(format!("h = {h} is not a multiple of delta = {delta}")));
        }
        Ok(GridDomain { h, delta, h_ticks: steps.to_integer() })
    }

    pub fn parse(h: &str, delta: &str) -> Result<Self> {
        GridDomain::new(parse_rational(h)?, parse_rational(delta)?)
    }

    /// Grid whose step is one unit and whose upper bound is `h_ticks` units.
    pub fn unit(h_ticks: i64) -> Result<Self> {
        GridDomain::new(Rational::from_integer(h_ticks), Rational::from_integer(1))
    }

    pub fn h(&self) -> Money {
        Money(self.h_ticks)
    }

    pub fn h_value(&self) -> Rational {
        self.h
    }

    pub fn delta(&self) -> Rational {
        self.delta
    }

    /// Number of grid points, `h / delta + 1`.
    pub fn n_ticks(&self) -> usize {
        self.h_ticks as usize + 1
    }

    pub fn values(&self) -> impl Iterator<Item = Money> + Clone {
        (0..=self.h_ticks).map(Money)
    }

    pub fn contains(&self, m: Money) -> bool {
        (0..=self.h_ticks).contains(&m.0)
    }

    pub fn value_of(&self, m: Money) -> Rational {
        self.delta * Rational::from_integer(m.0)
    }

    /// Convert an exact value to ticks, rejecting anything off the grid.
    pub fn quantize(&self, value: Rational) -> Result<Money> {
        let steps = value / self.delta;
        if !steps.is_integer() || steps.to_integer() < 0 || steps.to_integer() > self.h_ticks {
            return Err(self.off_grid(value.to_string()));
        }
        Ok(Money(steps.to_integer()))
    }

    pub fn parse_money(&self, s: &str) -> Result<Money> {
        let value = parse_rational(s).map_err(|_| self.off_grid(s.trim().to_string()))?;
        self.quantize(value).map_err(|_| self.off_grid(s.trim().to_string()))
    }

    pub fn render(&self, m: Money) -> String {
        self.value_of(m).to_string()
    }

    fn off_grid(&self, value: String) -> Error {
        Error::OffGrid { value, delta: self.delta.to_string(), h: self.h.to_string() }
    }
}

impl fmt::Display for GridDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[0, {}] step {}", self.h, self.delta)
    }
}
