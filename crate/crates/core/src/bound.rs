//! Symbolic search cuts.
//!
//! Constraint endpoints are strict (`x > v`, `x < v`), exact (`x = v`), or
//! unbounded. Rather than translating strict bounds into successor/predecessor
//! values — which overflows at the coordinate extremes and makes empty integer
//! ranges such as `3 < x < 4` a special case — searches work with *cuts*:
//! positions in the key order that never coincide with a key. A search for a
//! cut always descends cleanly to the place the cut falls, and an empty range
//! simply has its two cuts land in the same place.

use crate::interval::Coord;
use crate::rewrite::BoundConstraint;

/// A cut in the total order of tree keys.
///
/// Tree keys are composite — `(x, y, id)` in x-trees, `(y, id)` in end
/// structures — but constraints only ever involve the primary coordinate, so a
/// cut is characterized by where it falls relative to primary values:
/// `Below(v)` precedes every key with primary coordinate `v` (and follows all
/// keys with smaller primary); `Above(v)` follows every key with primary `v`,
/// whatever the tie-break fields. A cut never equals a key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Cut {
    NegInf,
    Below(Coord),
    Above(Coord),
    PosInf,
}

impl Cut {
    /// The `(lower, upper)` cut pair whose open interval contains exactly the
    /// keys whose primary coordinate satisfies `constraint`.
    pub(crate) fn from_constraint(constraint: BoundConstraint) -> (Cut, Cut) {
        match constraint {
            BoundConstraint::Exact(v) => (Cut::Below(v), Cut::Above(v)),
            BoundConstraint::Range { lo, hi } => (
                lo.map_or(Cut::NegInf, Cut::Above),
                hi.map_or(Cut::PosInf, Cut::Below),
            ),
        }
    }

    /// True iff every key with primary coordinate `key` lies strictly above
    /// this cut.
    ///
    /// Doubles as the descent rule: in a leaf-storing tree whose internal
    /// node splits at key κ (the maximum key of its left subtree), the search
    /// path for this cut goes left exactly when `self.is_below(κ.primary)`.
    #[inline]
    pub(crate) fn is_below(self, key: Coord) -> bool {
        match self {
            Cut::NegInf => true,
            Cut::Below(v) => key >= v,
            Cut::Above(v) => key > v,
            Cut::PosInf => false,
        }
    }

    /// True iff every key with primary coordinate `key` lies strictly below
    /// this cut.
    #[inline]
    pub(crate) fn is_above(self, key: Coord) -> bool {
        match self {
            Cut::NegInf => false,
            Cut::Below(v) => key < v,
            Cut::Above(v) => key <= v,
            Cut::PosInf => true,
        }
    }

    /// True iff a key with primary coordinate `key` lies in the open interval
    /// `(lo, hi)`.
    #[inline]
    pub(crate) fn admit(lo: Cut, hi: Cut, key: Coord) -> bool {
        lo.is_below(key) && hi.is_above(key)
    }
}
