//! Minimal proleptic-Gregorian calendar dates with day precision.
//!
//! The pipeline only needs ordering, ISO-8601 parsing, whole-year age
//! arithmetic, and the "earliest date meeting a partial precision" rule
//! used when normalizing party-membership intervals.

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

/// A calendar date with day precision. Ordering is chronological.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Date {
    pub year: i32,
    pub month: u8,
    pub day: u8,
}

/// Precision of a partially specified date, e.g. Wikidata's year-only
/// membership boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatePrecision {
    Day,
    Month,
    Year,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DateParseError {
    pub input: String,
}

impl fmt::Display for DateParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid date: {:?}", self.input)
    }
}

fn is_leap_year(year: i32) -> bool {
    year % 4 == 0 && (year % 100 != 0 || year % 400 == 0)
}

fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 => {
            if is_leap_year(year) {
                29
            } else {
                28
            }
        }
        _ => 0,
    }
}

impl Date {
    pub fn new(year: i32, month: u8, day: u8) -> Option<Date> {
        if (1..=12).contains(&month) && day >= 1 && day <= days_in_month(year, month) {
            Some(Date { year, month, day })
        } else {
            None
        }
    }

    /// Whole years elapsed from `self` to `at`. Negative when `at` precedes
    /// the birthday-anniversary logic (bad data upstream).
    pub fn years_until(&self, at: Date) -> i32 {
        let mut age = at.year - self.year;
        if (at.month, at.day) < (self.month, self.day) {
            age -= 1;
        }
        age
    }
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}-{:02}", self.year, self.month, self.day)
    }
}

impl fmt::Debug for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Date> for String {
    fn from(d: Date) -> String {
        alloc::format!("{d}")
    }
}

impl FromStr for Date {
    type Err = DateParseError;

    fn from_str(s: &str) -> Result<Date, DateParseError> {
        parse_iso(s)
            .and_then(|(d, p)| if p == DatePrecision::Day { Some(d) } else { None })
            .ok_or_else(|| DateParseError { input: s.into() })
    }
}

impl TryFrom<String> for Date {
    type Error = DateParseError;

    fn try_from(s: String) -> Result<Date, DateParseError> {
        s.parse()
    }
}

/// Parses `YYYY`, `YYYY-MM`, or `YYYY-MM-DD`, normalizing partial dates to
/// the earliest date meeting the stated precision (January 1st for a bare
/// year, the 1st for a bare month).
pub fn parse_iso(s: &str) -> Option<(Date, DatePrecision)> {
    let mut parts = s.split('-');
    let year: i32 = parts.next()?.parse().ok()?;
    let (month, day, precision) = match (parts.next(), parts.next(), parts.next()) {
        (None, _, _) => (1, 1, DatePrecision::Year),
        (Some(m), None, _) => (m.parse().ok()?, 1, DatePrecision::Month),
        (Some(m), Some(d), None) => (m.parse().ok()?, d.parse().ok()?, DatePrecision::Day),
        _ => return None,
    };
    Date::new(year, month, day).map(|d| (d, precision))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_dates() {
        let d: Date = "2008-03-02".parse().unwrap();
        assert_eq!(d, Date::new(2008, 3, 2).unwrap());
        assert!("2008-02-30".parse::<Date>().is_err());
        assert!("not-a-date".parse::<Date>().is_err());
    }

    #[test]
    fn partial_dates_normalize_to_earliest() {
        assert_eq!(
            parse_iso("2008"),
            Some((Date::new(2008, 1, 1).unwrap(), DatePrecision::Year))
        );
        assert_eq!(
            parse_iso("2008-03"),
            Some((Date::new(2008, 3, 1).unwrap(), DatePrecision::Month))
        );
    }

    #[test]
    fn ordering_is_chronological() {
        let a: Date = "2008-03-02".parse().unwrap();
        let b: Date = "2009-05-01".parse().unwrap();
        assert!(a < b);
    }

    #[test]
    fn age_respects_birthday_boundary() {
        let birth: Date = "1980-06-01".parse().unwrap();
        assert_eq!(birth.years_until("2010-05-31".parse().unwrap()), 29);
        assert_eq!(birth.years_until("2010-06-01".parse().unwrap()), 30);
    }

    #[test]
    fn leap_years() {
        assert!("2020-02-29".parse::<Date>().is_ok());
        assert!("2100-02-29".parse::<Date>().is_err());
        assert!("2000-02-29".parse::<Date>().is_ok());
    }
}
