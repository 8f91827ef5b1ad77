//! Exact money arithmetic in integer euro cents.
//!
//! Sums, integer scaling and rational factors are carried exactly; each
//! operation that cannot stay integral rounds once, half-up, to a cent.
//! Display uses the reporting precision of the bundled tables (€ / k€ /
//! M€ with one fractional digit), which is deliberately separate from the
//! computation grid.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};

use crate::error::{Error, Result};
use crate::units::div_round_half_up;

const CENTS_PER_EUR: i64 = 100;
const CENTS_PER_KEUR: i64 = 100_000;
const CENTS_PER_MEUR: i64 = 100_000_000;

/// An amount of money in euro cents.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_cents(cents: i64) -> Money {
        Money(cents)
    }

    pub const fn from_eur(eur: i64) -> Money {
        Money(eur * CENTS_PER_EUR)
    }

    pub const fn from_keur(keur: i64) -> Money {
        Money(keur * CENTS_PER_KEUR)
    }

    pub const fn from_meur(meur: i64) -> Money {
        Money(meur * CENTS_PER_MEUR)
    }

    pub fn from_eur_f64(eur: f64, field: &str) -> Result<Money> {
        Self::from_scaled_f64(eur, CENTS_PER_EUR, field)
    }

    pub fn from_keur_f64(keur: f64, field: &str) -> Result<Money> {
        Self::from_scaled_f64(keur, CENTS_PER_KEUR, field)
    }

    pub fn from_meur_f64(meur: f64, field: &str) -> Result<Money> {
        Self::from_scaled_f64(meur, CENTS_PER_MEUR, field)
    }

    fn from_scaled_f64(value: f64, cents_per_unit: i64, field: &str) -> Result<Money> {
        let cents = crate::units::decimal_to_scaled(value, cents_per_unit as i128, field)?;
        Ok(Money(cents as i64))
    }

    pub const fn cents(self) -> i64 {
        self.0
    }

    pub const fn is_negative(self) -> bool {
        self.0 < 0
    }

    /// Multiply by an exact integer count.
    pub fn scale(self, count: u32) -> Money {
        let product = self.0 as i128 * count as i128;
        Money(i64::try_from(product).expect("money overflow"))
    }

    /// Multiply by the rational `num / den`, rounding half-up once.
    pub fn mul_rational(self, num: i64, den: i64) -> Money {
        assert!(den > 0, "denominator must be positive");
        let cents = div_round_half_up(self.0 as i128 * num as i128, den as i128);
        Money(i64::try_from(cents).expect("money overflow"))
    }

    /// Divide by a positive integer, rounding half-up to a cent.
    pub fn div_round(self, divisor: i64) -> Money {
        assert!(divisor > 0, "divisor must be positive");
        Money(div_round_half_up(self.0 as i128, divisor as i128) as i64)
    }

    /// Multiply by a floating factor and round half-up to a cent.
    /// Used only by the learning-curve costing, where the factor is an
    /// irrational power.
    pub fn scale_f64_round(self, factor: f64) -> Money {
        let cents = (self.0 as f64 * factor + 0.5).floor();
        assert!(cents.abs() < 9.0e18, "money overflow");
        Money(cents as i64)
    }

    /// Parse a reporting-precision rendering such as "6.3 M€" or "944 €".
    pub fn parse_display(text: &str) -> Result<Money> {
        let text = text.trim();
        let (number, cents_per_unit) = if let Some(prefix) = text.strip_suffix("M€") {
            (prefix, CENTS_PER_MEUR)
        } else if let Some(prefix) = text.strip_suffix("k€") {
            (prefix, CENTS_PER_KEUR)
        } else if let Some(prefix) = text.strip_suffix('€') {
            (prefix, CENTS_PER_EUR)
        } else {
            return Err(Error::validation("money", format!("missing unit in '{text}'")));
        };
        let value: f64 = number
            .trim()
            .parse()
            .map_err(|_| Error::validation("money", format!("unparseable amount '{text}'")))?;
        Self::from_scaled_f64(value, cents_per_unit, "money")
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0.checked_add(rhs.0).expect("money overflow"))
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        *self = *self + rhs;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0.checked_sub(rhs.0).expect("money overflow"))
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
        iter.fold(Money::ZERO, Add::add)
    }
}

impl fmt::Display for Money {
    /// Reporting precision: one fractional digit in the largest unit that
    /// keeps the integer part non-zero (€ below 1 k€, k€ below 1 M€).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let magnitude = self.0.unsigned_abs();
        let sign = if self.0 < 0 { "-" } else { "" };
        let (tenths, unit) = if magnitude >= CENTS_PER_MEUR as u64 {
            (div_round_half_up(magnitude as i128, CENTS_PER_MEUR as i128 / 10), "M€")
        } else if magnitude >= CENTS_PER_KEUR as u64 {
            (div_round_half_up(magnitude as i128, CENTS_PER_KEUR as i128 / 10), "k€")
        } else {
            (div_round_half_up(magnitude as i128, CENTS_PER_EUR as i128 / 10), "€")
        };
        write!(f, "{sign}{}.{} {unit}", tenths / 10, tenths % 10)
    }
}
