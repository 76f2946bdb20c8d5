//! Interval primitives.
//!
//! A data interval `[start, end]` over non-negative integer coordinates is
//! identified with the 2-D point `(x, y) = (start, end)`. Every valid interval
//! satisfies `end > start`, i.e. its point lies strictly above the diagonal
//! `y = x`; degenerate (empty or reversed) intervals are rejected at
//! construction so the index structures never have to reason about them.

use core::fmt;

/// Coordinate type for interval endpoints.
///
/// Genomic coordinates fit comfortably in 64 bits; using an unsigned type
/// makes "0 is the smallest possible start" a type-level fact.
pub type Coord = u64;

/// Identifier of a data interval: its position in the [`Dataset`] it was
/// loaded into.
///
/// [`Dataset`]: crate::store::Dataset
pub type PointId = u32;

/// A validated data interval `[start, end]` with `end > start`.
///
/// `id` is the interval's position in its dataset and is what queries report.
/// Ties on `(start, end)` are broken by `id` wherever a total order is needed,
/// so duplicate intervals are fully supported.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    start: Coord,
    end: Coord,
    id: PointId,
}

/// A query interval `[start, end]` with `end > start`.
///
/// Queries carry no identifier; they are compared against data intervals by
/// coordinates alone.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QueryInterval {
    start: Coord,
    end: Coord,
}

/// Error returned when an interval fails the `end > start` validity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvalidInterval {
    /// Offending start coordinate.
    pub start: Coord,
    /// Offending end coordinate.
    pub end: Coord,
}

impl fmt::Display for InvalidInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid interval [{}, {}]: end must be strictly greater than start",
            self.start, self.end
        )
    }
}

impl core::error::Error for InvalidInterval {}

impl Interval {
    /// Creates a data interval, rejecting degenerate ones (`end <= start`).
    pub fn new(start: Coord, end: Coord, id: PointId) -> Result<Self, InvalidInterval> {
        if end > start {
            Ok(Self { start, end, id })
        } else {
            Err(InvalidInterval { start, end })
        }
    }

    /// Start coordinate (the point's x).
    #[inline]
    pub fn start(&self) -> Coord {
        self.start
    }

    /// End coordinate (the point's y).
    #[inline]
    pub fn end(&self) -> Coord {
        self.end
    }

    /// Identifier within the owning dataset.
    #[inline]
    pub fn id(&self) -> PointId {
        self.id
    }
}

impl QueryInterval {
    /// Creates a query interval, rejecting degenerate ones (`end <= start`).
    pub fn new(start: Coord, end: Coord) -> Result<Self, InvalidInterval> {
        if end > start {
            Ok(Self { start, end })
        } else {
            Err(InvalidInterval { start, end })
        }
    }

    /// Start coordinate.
    #[inline]
    pub fn start(&self) -> Coord {
        self.start
    }

    /// End coordinate.
    #[inline]
    pub fn end(&self) -> Coord {
        self.end
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]#{}", self.start, self.end, self.id)
    }
}

impl fmt::Debug for QueryInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_proper_intervals() {
        let iv = Interval::new(3, 8, 0).unwrap();
        assert_eq!(iv.start(), 3);
        assert_eq!(iv.end(), 8);
        assert_eq!(iv.id(), 0);

        let q = QueryInterval::new(0, 1).unwrap();
        assert_eq!((q.start(), q.end()), (0, 1));
    }

    #[test]
    fn rejects_empty_interval() {
        assert_eq!(
            Interval::new(5, 5, 0),
            Err(InvalidInterval { start: 5, end: 5 })
        );
        assert_eq!(
            QueryInterval::new(5, 5),
            Err(InvalidInterval { start: 5, end: 5 })
        );
    }

    #[test]
    fn rejects_reversed_interval() {
        assert_eq!(
            Interval::new(9, 2, 1),
            Err(InvalidInterval { start: 9, end: 2 })
        );
        assert!(QueryInterval::new(9, 2).is_err());
    }
}
