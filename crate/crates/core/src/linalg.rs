//! Exact linear algebra over rational function fields.

use std::collections::BTreeMap;

use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;

/// Sparse vector with ordered coordinates.
pub type SparseVec<K, C> = BTreeMap<K, RatFunc<C>>;

/// Row-reduced basis built one vector at a time.
///
/// Each stored row has coefficient 1 at its pivot (its smallest key), and no
/// other stored row has a nonzero entry there.
pub struct EchelonBasis<K: Ord + Clone, C: Scalar> {
    rows: BTreeMap<K, SparseVec<K, C>>,
}

impl<K: Ord + Clone, C: Scalar> Default for EchelonBasis<K, C> {
    fn default() -> Self {
        EchelonBasis { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone, C: Scalar> EchelonBasis<K, C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, mut v: SparseVec<K, C>) -> SparseVec<K, C> {
        for (pivot, row) in &self.rows {
            let Some(c) = v.get(pivot).cloned() else { continue };
            for (k, r) in row {
                let updated = v.get(k).map_or_else(|| -(&c * r), |old| old - &(&c * r));
                if updated.is_zero() {
                    v.remove(k);
                } else {
                    v.insert(k.clone(), updated);
                }
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec<K, C>) -> bool {
        let v = self.reduce(v);
        let Some((pivot, lead)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.inv().expect("nonzero pivot");
        let row: SparseVec<K, C> = v.into_iter().map(|(k, c)| (k, (&c * &inv).reduced())).collect();
        for other in self.rows.values_mut() {
            let Some(c) = other.get(&pivot).cloned() else { continue };
            for (k, r) in &row {
                let updated = other.get(k).map_or_else(|| -(&c * r), |old| old - &(&c * r));
                if updated.is_zero() {
                    other.remove(k);
                } else {
                    other.insert(k.clone(), updated);
                }
            }
        }
        self.rows.insert(pivot, row);
        true
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K, C>> {
        self.rows.values()
    }
}
