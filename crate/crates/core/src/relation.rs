//! Allen's 13 interval relations.
//!
//! For a data interval `s = [x, y]` and a query interval `q = [x', y']`
//! (all intervals proper: `y > x`, `y' > x'`), the relations are defined by
//! the usual endpoint comparisons:
//!
//! | relation           | symbol | definition                     |
//! |--------------------|--------|--------------------------------|
//! | overlaps           | `o`    | `x < x'` and `x' < y < y'`     |
//! | overlapped-by      | `oi`   | `x' < x < y'` and `y' < y`     |
//! | during             | `d`    | `x > x'` and `y < y'`          |
//! | contains           | `di`   | `x < x'` and `y > y'`          |
//! | meets              | `m`    | `y = x'`                       |
//! | met-by             | `mi`   | `x = y'`                       |
//! | starts             | `s`    | `x = x'` and `y < y'`          |
//! | started-by         | `si`   | `x = x'` and `y > y'`          |
//! | finishes           | `f`    | `y = y'` and `x > x'`          |
//! | finished-by        | `fi`   | `y = y'` and `x < x'`          |
//! | before             | `<`    | `y < x'`                       |
//! | after              | `>`    | `x > y'`                       |
//! | equals             | `=`    | `x = x'` and `y = y'`          |
//!
//! The 13 relations are jointly exhaustive and pairwise disjoint over proper
//! intervals, so [`classify`](AllenRelation::classify) is a total function.

use core::fmt;

use crate::interval::{Interval, QueryInterval};

/// One of Allen's 13 interval relations, oriented as "data interval RELATION
/// query interval".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AllenRelation {
    /// `o`: data overlaps the query from the left.
    Overlaps,
    /// `oi`: data is overlapped by the query (overlaps from the right).
    OverlappedBy,
    /// `d`: data lies strictly inside the query.
    During,
    /// `di`: data strictly contains the query.
    Contains,
    /// `m`: data meets the query (`y = x'`).
    Meets,
    /// `mi`: data is met by the query (`x = y'`).
    MetBy,
    /// `s`: data starts the query.
    Starts,
    /// `si`: data is started by the query.
    StartedBy,
    /// `f`: data finishes the query.
    Finishes,
    /// `fi`: data is finished by the query.
    FinishedBy,
    /// `<`: data ends before the query starts.
    Before,
    /// `>`: data starts after the query ends.
    After,
    /// `=`: data and query coincide.
    Equals,
}

/// All 13 relations, in the order used throughout reports and benchmarks.
pub const ALL_RELATIONS: [AllenRelation; 13] = [
    AllenRelation::Overlaps,
    AllenRelation::OverlappedBy,
    AllenRelation::During,
    AllenRelation::Contains,
    AllenRelation::Meets,
    AllenRelation::MetBy,
    AllenRelation::Starts,
    AllenRelation::StartedBy,
    AllenRelation::Finishes,
    AllenRelation::FinishedBy,
    AllenRelation::Before,
    AllenRelation::After,
    AllenRelation::Equals,
];

/// The 11 relations whose intervals share at least one point with the query
/// (everything except `<` and `>`).
///
/// These are exactly the relations an intersection-based index can answer.
pub const INTERSECTION_RELATIONS: [AllenRelation; 11] = [
    AllenRelation::Overlaps,
    AllenRelation::OverlappedBy,
    AllenRelation::During,
    AllenRelation::Contains,
    AllenRelation::Meets,
    AllenRelation::MetBy,
    AllenRelation::Starts,
    AllenRelation::StartedBy,
    AllenRelation::Finishes,
    AllenRelation::FinishedBy,
    AllenRelation::Equals,
];

/// Error returned when parsing an unrecognized relation name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownRelation;

impl fmt::Display for UnknownRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(
            "unknown relation: expected one of \
             o, oi, d, di, m, mi, s, si, f, fi, <, >, = (or lt, gt, eq)",
        )
    }
}

impl core::error::Error for UnknownRelation {}

impl AllenRelation {
    /// Canonical symbol: `o`, `oi`, `d`, `di`, `m`, `mi`, `s`, `si`, `f`,
    /// `fi`, `<`, `>`, `=`.
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Overlaps => "o",
            Self::OverlappedBy => "oi",
            Self::During => "d",
            Self::Contains => "di",
            Self::Meets => "m",
            Self::MetBy => "mi",
            Self::Starts => "s",
            Self::StartedBy => "si",
            Self::Finishes => "f",
            Self::FinishedBy => "fi",
            Self::Before => "<",
            Self::After => ">",
            Self::Equals => "=",
        }
    }

    /// The converse relation: if `s R q`, then `q converse(R) s`.
    pub fn converse(self) -> Self {
        match self {
            Self::Overlaps => Self::OverlappedBy,
            Self::OverlappedBy => Self::Overlaps,
            Self::During => Self::Contains,
            Self::Contains => Self::During,
            Self::Meets => Self::MetBy,
            Self::MetBy => Self::Meets,
            Self::Starts => Self::StartedBy,
            Self::StartedBy => Self::Starts,
            Self::Finishes => Self::FinishedBy,
            Self::FinishedBy => Self::Finishes,
            Self::Before => Self::After,
            Self::After => Self::Before,
            Self::Equals => Self::Equals,
        }
    }

    /// Whether intervals in this relation intersect the query in at least one
    /// point (single-point touching counts: `m` and `mi` intersect).
    pub fn intersects(self) -> bool {
        !matches!(self, Self::Before | Self::After)
    }

    /// Determines the unique relation in which `data` stands to `query`.
    ///
    /// Decision procedure: rule out the four relations with a coordinate on
    /// the far side of the query (`<`, `m`, `>`, `mi`), then dispatch on the
    /// sign pair `(cmp(x, x'), cmp(y, y'))`, which distinguishes the nine
    /// remaining relations.
    pub fn classify(data: Interval, query: QueryInterval) -> Self {
        use core::cmp::Ordering::*;

        let (x, y) = (data.start(), data.end());
        let (xq, yq) = (query.start(), query.end());

        if y < xq {
            return Self::Before;
        }
        if y == xq {
            return Self::Meets;
        }
        if x > yq {
            return Self::After;
        }
        if x == yq {
            return Self::MetBy;
        }
        // Now x < y', y > x': the intervals overlap in more than a point.
        match (x.cmp(&xq), y.cmp(&yq)) {
            (Less, Less) => Self::Overlaps,
            (Less, Equal) => Self::FinishedBy,
            (Less, Greater) => Self::Contains,
            (Equal, Less) => Self::Starts,
            (Equal, Equal) => Self::Equals,
            (Equal, Greater) => Self::StartedBy,
            (Greater, Less) => Self::During,
            (Greater, Equal) => Self::Finishes,
            (Greater, Greater) => Self::OverlappedBy,
        }
    }
}

impl fmt::Display for AllenRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl core::str::FromStr for AllenRelation {
    type Err = UnknownRelation;

    /// Parses a canonical symbol; `lt`, `gt`, and `eq` are accepted as
    /// aliases for `<`, `>`, and `=` (handy where shells make the symbols
    /// awkward).
    fn from_str(text: &str) -> Result<Self, UnknownRelation> {
        Ok(match text {
            "o" => Self::Overlaps,
            "oi" => Self::OverlappedBy,
            "d" => Self::During,
            "di" => Self::Contains,
            "m" => Self::Meets,
            "mi" => Self::MetBy,
            "s" => Self::Starts,
            "si" => Self::StartedBy,
            "f" => Self::Finishes,
            "fi" => Self::FinishedBy,
            "<" | "lt" => Self::Before,
            ">" | "gt" => Self::After,
            "=" | "eq" => Self::Equals,
            _ => return Err(UnknownRelation),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(start: u64, end: u64) -> Interval {
        Interval::new(start, end, 0).unwrap()
    }

    fn q(start: u64, end: u64) -> QueryInterval {
        QueryInterval::new(start, end).unwrap()
    }

    #[test]
    fn classifies_worked_examples() {
        assert_eq!(
            AllenRelation::classify(iv(1, 5), q(3, 8)),
            AllenRelation::Overlaps
        );
        assert_eq!(
            AllenRelation::classify(iv(3, 8), q(3, 8)),
            AllenRelation::Equals
        );
        assert_eq!(
            AllenRelation::classify(iv(2, 4), q(4, 9)),
            AllenRelation::Meets
        );
    }

    #[test]
    fn classifies_one_example_per_relation() {
        use AllenRelation::*;
        // Query fixed at [4, 8]; one hand-checked data interval per relation.
        let query = q(4, 8);
        let cases: [(Interval, AllenRelation); 13] = [
            (iv(2, 6), Overlaps),
            (iv(6, 10), OverlappedBy),
            (iv(5, 7), During),
            (iv(3, 9), Contains),
            (iv(1, 4), Meets),
            (iv(8, 11), MetBy),
            (iv(4, 6), Starts),
            (iv(4, 10), StartedBy),
            (iv(6, 8), Finishes),
            (iv(2, 8), FinishedBy),
            (iv(1, 3), Before),
            (iv(9, 12), After),
            (iv(4, 8), Equals),
        ];
        for (data, expected) in cases {
            assert_eq!(
                AllenRelation::classify(data, query),
                expected,
                "classify({data:?}, {query:?})"
            );
        }
    }

    #[test]
    fn converse_is_an_involution_and_matches_swapped_classify() {
        for rel in ALL_RELATIONS {
            assert_eq!(rel.converse().converse(), rel);
        }
        // classify(a, b) must be the converse of classify(b, a); spot-check
        // over a small grid (the exhaustive version lives in the integration
        // suite).
        for (a0, a1, b0, b1) in [(1u64, 5, 3, 8), (3, 8, 3, 8), (2, 4, 4, 9), (0, 2, 5, 6)] {
            let ab = AllenRelation::classify(iv(a0, a1), q(b0, b1));
            let ba = AllenRelation::classify(iv(b0, b1), q(a0, a1));
            assert_eq!(ab.converse(), ba);
        }
    }

    #[test]
    fn parses_symbols_and_aliases() {
        for rel in ALL_RELATIONS {
            assert_eq!(rel.symbol().parse::<AllenRelation>().unwrap(), rel);
        }
        assert_eq!("lt".parse::<AllenRelation>().unwrap(), AllenRelation::Before);
        assert_eq!("gt".parse::<AllenRelation>().unwrap(), AllenRelation::After);
        assert_eq!("eq".parse::<AllenRelation>().unwrap(), AllenRelation::Equals);
        assert!("overlap".parse::<AllenRelation>().is_err());
        assert!("O".parse::<AllenRelation>().is_err());
        assert!("".parse::<AllenRelation>().is_err());
    }

    #[test]
    fn intersection_relations_exclude_before_and_after() {
        assert_eq!(INTERSECTION_RELATIONS.len(), 11);
        for rel in ALL_RELATIONS {
            assert_eq!(rel.intersects(), INTERSECTION_RELATIONS.contains(&rel));
        }
    }
}
