//! Rewriting relation queries as 2-dimensional range queries.
//!
//! With intervals identified with the points `(x, y) = (start, end)`, each of
//! the 13 relations against a query `q = [x', y']` becomes a rectangle
//! constraint — per axis either an exact value or an open range:
//!
//! | relation | x constraint      | y constraint      |
//! |----------|-------------------|-------------------|
//! | `o`      | `x < x'`          | `x' < y < y'`     |
//! | `oi`     | `x' < x < y'`     | `y' < y`          |
//! | `d`      | `x' < x < y'`     | `x' < y < y'`     |
//! | `di`     | `x < x'`          | `y' < y`          |
//! | `m`      | `x < x'`          | `y = x'`          |
//! | `mi`     | `x = y'`          | `y' < y`          |
//! | `s`      | `x = x'`          | `x' < y < y'`     |
//! | `si`     | `x = x'`          | `y' < y`          |
//! | `f`      | `x' < x < y'`     | `y = y'`          |
//! | `fi`     | `x < x'`          | `y = y'`          |
//! | `<`      | `x < x'`          | `y < x'`          |
//! | `>`      | `y' < x`          | `y' < y`          |
//! | `=`      | `x = x'`          | `y = y'`          |
//!
//! Two liberties are taken with the textbook form of this table. Lower bounds
//! written `0 < x` become *unbounded below*: genomic coordinates are 0-based,
//! so position 0 is a legal start and must not be excluded. Upper bounds
//! written `< ∞` become *unbounded above*. Intersected with the validity
//! half-plane `y > x` (every stored point satisfies it), each rewritten
//! region contains exactly the points of intervals in the given relation to
//! `q` — a property the test suite checks exhaustively on small grids.
//!
//! Raw `<` and `>` queries return huge result sets on real data; the usual
//! practical form restricts them to a window near the query, which turns them
//! into `d` queries against a derived interval ([`window_before`],
//! [`window_after`]).

use core::fmt;

use crate::interval::{Coord, QueryInterval};
use crate::relation::AllenRelation;

/// A constraint on one coordinate axis: an exact value or an open range with
/// strict, optionally absent bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundConstraint {
    /// Matches coordinate `c` iff `c == v`.
    Exact(Coord),
    /// Matches coordinate `c` iff `c > lo` (when present) and `c < hi` (when
    /// present). A range whose bounds admit no integer (e.g. `lo = 3`,
    /// `hi = 4`) is legal and simply matches nothing.
    Range {
        /// Strict lower bound, or `None` for unbounded below.
        lo: Option<Coord>,
        /// Strict upper bound, or `None` for unbounded above.
        hi: Option<Coord>,
    },
}

impl BoundConstraint {
    /// `c < hi`, unbounded below.
    #[inline]
    pub const fn below(hi: Coord) -> Self {
        Self::Range {
            lo: None,
            hi: Some(hi),
        }
    }

    /// `c > lo`, unbounded above.
    #[inline]
    pub const fn above(lo: Coord) -> Self {
        Self::Range {
            lo: Some(lo),
            hi: None,
        }
    }

    /// `lo < c < hi`.
    #[inline]
    pub const fn between(lo: Coord, hi: Coord) -> Self {
        Self::Range {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    /// Matches every coordinate.
    #[inline]
    pub const fn unbounded() -> Self {
        Self::Range { lo: None, hi: None }
    }

    /// Whether coordinate `c` satisfies this constraint.
    #[inline]
    pub fn matches(&self, c: Coord) -> bool {
        match *self {
            Self::Exact(v) => c == v,
            Self::Range { lo, hi } => {
                lo.is_none_or(|lo| c > lo) && hi.is_none_or(|hi| c < hi)
            }
        }
    }
}

impl fmt::Display for BoundConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Exact(v) => write!(f, "= {v}"),
            Self::Range { lo: None, hi: None } => f.write_str("unbounded"),
            Self::Range { lo: Some(lo), hi: None } => write!(f, "> {lo}"),
            Self::Range { lo: None, hi: Some(hi) } => write!(f, "< {hi}"),
            Self::Range { lo: Some(lo), hi: Some(hi) } => write!(f, "in ({lo}, {hi})"),
        }
    }
}

/// A 2-dimensional range query: a point `(x, y)` satisfies it iff `x`
/// satisfies the x-constraint and `y` the y-constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RangeQuery2d {
    /// Constraint on interval starts.
    pub x: BoundConstraint,
    /// Constraint on interval ends.
    pub y: BoundConstraint,
}

impl RangeQuery2d {
    /// Whether the point `(x, y)` lies in the query region.
    #[inline]
    pub fn matches(&self, x: Coord, y: Coord) -> bool {
        self.x.matches(x) && self.y.matches(y)
    }
}

impl fmt::Display for RangeQuery2d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x {}, y {}", self.x, self.y)
    }
}

/// Rewrites the relation query `(r, q)` as the 2-D range query whose region,
/// within the half-plane `y > x` of valid intervals, contains exactly the
/// points of intervals `a` with `classify(a, q) == r`.
pub fn rewrite(relation: AllenRelation, query: QueryInterval) -> RangeQuery2d {
    use AllenRelation::*;
    use BoundConstraint as B;

    let (xq, yq) = (query.start(), query.end());
    let (x, y) = match relation {
        Overlaps => (B::below(xq), B::between(xq, yq)),
        OverlappedBy => (B::between(xq, yq), B::above(yq)),
        During => (B::between(xq, yq), B::between(xq, yq)),
        Contains => (B::below(xq), B::above(yq)),
        Meets => (B::below(xq), B::Exact(xq)),
        MetBy => (B::Exact(yq), B::above(yq)),
        Starts => (B::Exact(xq), B::between(xq, yq)),
        StartedBy => (B::Exact(xq), B::above(yq)),
        Finishes => (B::between(xq, yq), B::Exact(yq)),
        FinishedBy => (B::below(xq), B::Exact(yq)),
        Before => (B::below(xq), B::below(xq)),
        After => (B::above(yq), B::above(yq)),
        Equals => (B::Exact(xq), B::Exact(yq)),
    };
    RangeQuery2d { x, y }
}

/// Error from the windowed forms of `<` and `>` queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowError {
    /// The query starts at coordinate 0: no upstream region exists.
    EmptyWindow,
    /// The window length is 0.
    ZeroLength,
    /// `q.end + length` exceeds the representable coordinate range.
    Overflow {
        /// The query's end coordinate.
        end: Coord,
        /// The requested window length.
        length: Coord,
    },
}

impl fmt::Display for WindowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::EmptyWindow => {
                f.write_str("query starts at coordinate 0: no upstream window exists")
            }
            Self::ZeroLength => f.write_str("window length must be positive"),
            Self::Overflow { end, length } => write!(
                f,
                "window [{end}, {end} + {length}] overflows the coordinate range"
            ),
        }
    }
}

impl core::error::Error for WindowError {}

/// The practical form of a `<` query: intervals strictly inside the window of
/// `length` base pairs upstream of `q`, i.e. the `d` query against
/// `[max(0, q.start − length), q.start]`.
///
/// Every returned interval lies strictly before `q` (subsumption under `<` is
/// checked in the test suite); conversely, `<`-intervals outside the window
/// are deliberately not returned.
pub fn window_before(
    q: QueryInterval,
    length: Coord,
) -> Result<(AllenRelation, QueryInterval), WindowError> {
    if length == 0 {
        return Err(WindowError::ZeroLength);
    }
    if q.start() == 0 {
        return Err(WindowError::EmptyWindow);
    }
    let lo = q.start().saturating_sub(length);
    let window = QueryInterval::new(lo, q.start())
        .expect("window lower bound lies strictly below q.start");
    Ok((AllenRelation::During, window))
}

/// The practical form of a `>` query: the `d` query against
/// `[q.end, q.end + length]`.
pub fn window_after(
    q: QueryInterval,
    length: Coord,
) -> Result<(AllenRelation, QueryInterval), WindowError> {
    if length == 0 {
        return Err(WindowError::ZeroLength);
    }
    let hi = q
        .end()
        .checked_add(length)
        .ok_or(WindowError::Overflow {
            end: q.end(),
            length,
        })?;
    let window =
        QueryInterval::new(q.end(), hi).expect("window upper bound lies strictly above q.end");
    Ok((AllenRelation::During, window))
}
