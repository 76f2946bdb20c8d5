//! Shared, immutable point storage.
//!
//! A [`Dataset`] is the ordered collection of validated intervals; an
//! interval's id is its position in the dataset. A [`PointStore`] is the same
//! data viewed as a static array of 2-D points. Index structures never copy
//! coordinates: they hold `u32` indices into one store, which is passed by
//! reference to build and query calls. This keeps every interval's coordinates
//! stored once no matter how many tree nodes reference it.

use alloc::vec::Vec;

use crate::interval::{Coord, Interval, InvalidInterval, PointId};

/// An ordered collection of valid intervals; ids are dense positions.
///
/// Duplicate intervals are permitted (real annotation corpora contain
/// identical intervals from different experiments); they are distinguished by
/// id everywhere a total order is needed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dataset {
    intervals: Vec<Interval>,
}

impl Dataset {
    /// Creates an empty dataset.
    pub fn new() -> Self {
        Self::default()
    }

    /// Validates and appends an interval, assigning it the next id.
    pub fn push(&mut self, start: Coord, end: Coord) -> Result<PointId, InvalidInterval> {
        assert!(
            self.intervals.len() < PointId::MAX as usize,
            "dataset exceeds the PointId::MAX interval capacity"
        );
        let id = self.intervals.len() as PointId;
        self.intervals.push(Interval::new(start, end, id)?);
        Ok(id)
    }

    /// Builds a dataset from `(start, end)` pairs, failing on the first
    /// invalid one.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, InvalidInterval>
    where
        I: IntoIterator<Item = (Coord, Coord)>,
    {
        let mut data = Self::new();
        for (start, end) in pairs {
            data.push(start, end)?;
        }
        Ok(data)
    }

    /// Number of intervals.
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    /// Whether the dataset holds no intervals.
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// The interval with the given id, if present.
    pub fn get(&self, id: PointId) -> Option<Interval> {
        self.intervals.get(id as usize).copied()
    }

    /// All intervals in id order.
    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Iterates over intervals in id order.
    pub fn iter(&self) -> impl Iterator<Item = Interval> + '_ {
        self.intervals.iter().copied()
    }
}

/// The static array of points `(x, y) = (start, end)` shared by all index
/// structures; the point with id `i` sits at position `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointStore {
    xs: Vec<Coord>,
    ys: Vec<Coord>,
}

impl PointStore {
    /// Builds the point view of a dataset.
    pub fn from_dataset(data: &Dataset) -> Self {
        Self {
            xs: data.iter().map(|iv| iv.start()).collect(),
            ys: data.iter().map(|iv| iv.end()).collect(),
        }
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    /// Whether the store holds no points.
    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// x (start) coordinate of point `id`.
    #[inline]
    pub fn x(&self, id: PointId) -> Coord {
        self.xs[id as usize]
    }

    /// y (end) coordinate of point `id`.
    #[inline]
    pub fn y(&self, id: PointId) -> Coord {
        self.ys[id as usize]
    }

    /// The point's composite x-key `(x, y, id)` — the total order used by
    /// x-trees, well-defined for duplicate coordinates.
    #[inline]
    pub fn x_key(&self, id: PointId) -> (Coord, Coord, PointId) {
        (self.x(id), self.y(id), id)
    }

    /// The point's composite y-key `(y, id)` — the total order used by end
    /// structures.
    #[inline]
    pub fn y_key(&self, id: PointId) -> (Coord, PointId) {
        (self.y(id), id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_assigns_dense_ids() {
        let mut data = Dataset::new();
        assert_eq!(data.push(1, 5).unwrap(), 0);
        assert_eq!(data.push(3, 8).unwrap(), 1);
        assert_eq!(data.push(1, 5).unwrap(), 2); // duplicate allowed
        assert_eq!(data.len(), 3);
        assert_eq!(data.get(1).unwrap().end(), 8);
        assert_eq!(data.get(2).unwrap().id(), 2);
        assert_eq!(data.get(3), None);
    }

    #[test]
    fn dataset_rejects_invalid_pairs() {
        assert!(Dataset::from_pairs([(1, 5), (7, 7)]).is_err());
        assert!(Dataset::from_pairs([(9, 2)]).is_err());
        let data = Dataset::from_pairs([(1, 5), (3, 8)]).unwrap();
        assert_eq!(data.len(), 2);
    }

    #[test]
    fn store_mirrors_dataset_coordinates() {
        let data = Dataset::from_pairs([(1, 5), (3, 8), (0, 2)]).unwrap();
        let store = PointStore::from_dataset(&data);
        assert_eq!(store.len(), 3);
        assert_eq!((store.x(0), store.y(0)), (1, 5));
        assert_eq!((store.x(2), store.y(2)), (0, 2));
    }

    #[test]
    fn composite_keys_totally_order_duplicates() {
        let data = Dataset::from_pairs([(1, 5), (1, 5)]).unwrap();
        let store = PointStore::from_dataset(&data);
        assert!(store.x_key(0) < store.x_key(1));
        assert!(store.y_key(0) < store.y_key(1));
    }
}
