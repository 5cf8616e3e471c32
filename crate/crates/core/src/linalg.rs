//! Sparse vectors keyed by an ordered basis, and canonical reduced echelon
//! subspaces over an exact field.

use std::collections::BTreeMap;

use crate::scalar::{FieldElem, FieldSpec};

/// Finite linear combination of basis keys; no zero coefficients stored.
pub type SparseVec<K> = BTreeMap<K, FieldElem>;

pub fn add_term<K: Ord>(v: &mut SparseVec<K>, key: K, c: FieldElem) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match v.entry(key) {
        Entry::Vacant(slot) => {
            slot.insert(c);
        }
        Entry::Occupied(mut slot) => {
            let s = &*slot.get() + &c;
            if s.is_zero() {
                slot.remove();
            } else {
                *slot.get_mut() = s;
            }
        }
    }
}

/// `v += c * w`
pub fn add_scaled<K: Ord + Clone>(v: &mut SparseVec<K>, w: &SparseVec<K>, c: &FieldElem) {
    if c.is_zero() {
        return;
    }
    for (k, a) in w {
        add_term(v, k.clone(), a * c);
    }
}

pub fn scaled<K: Ord + Clone>(w: &SparseVec<K>, c: &FieldElem) -> SparseVec<K> {
    if c.is_zero() {
        return SparseVec::new();
    }
    w.iter().map(|(k, a)| (k.clone(), a * c)).collect()
}

pub fn sub<K: Ord + Clone>(a: &SparseVec<K>, b: &SparseVec<K>, field: FieldSpec) -> SparseVec<K> {
    let mut out = a.clone();
    add_scaled(&mut out, b, &field.from_i64(-1));
    out
}

/// A subspace held as a fully reduced echelon basis: every row has pivot
/// coefficient 1 at its least key, and no pivot appears in another row.
/// Equality compares the reduced rows, so equal subspaces compare equal.
///
/// Alongside the rows it keeps the independent input vectors in insertion
/// order; they span the same space and are usually much sparser.
#[derive(Debug, Clone)]
pub struct Subspace<K: Ord> {
    field: FieldSpec,
    rows: BTreeMap<K, SparseVec<K>>,
    spanning: Vec<SparseVec<K>>,
}

impl<K: Ord> PartialEq for Subspace<K> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.rows == other.rows
    }
}

impl<K: Ord> Eq for Subspace<K> {}

impl<K: Ord + Clone> Subspace<K> {
    pub fn zero(field: FieldSpec) -> Self {
        Subspace {
            field,
            rows: BTreeMap::new(),
            spanning: Vec::new(),
        }
    }

    pub fn from_vectors(field: FieldSpec, vs: impl IntoIterator<Item = SparseVec<K>>) -> Self {
        let mut s = Self::zero(field);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduced rows in increasing pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Independent input vectors, in the order they were accepted.
    pub fn spanning(&self) -> &[SparseVec<K>] {
        &self.spanning
    }

    /// Remainder of `v` after eliminating every pivot.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut out = v.clone();
        let hits: Vec<(K, FieldElem)> = v
            .iter()
            .filter(|(k, _)| self.rows.contains_key(*k))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        // rows are fully reduced, so subtracting one never reintroduces
        // another pivot
        for (k, c) in hits {
            add_scaled(&mut out, &self.rows[&k], &-c);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn contains_subspace(&self, other: &Subspace<K>) -> bool {
        other.rows().all(|r| self.contains(r))
    }

    /// Adds `v` to the span. Returns true when the dimension grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let mut r = self.reduce(&v);
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero leading coefficient");
            r = scaled(&r, &inv);
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                add_scaled(row, &r, &-c);
            }
        }
        self.rows.insert(pivot, r);
        self.spanning.push(v);
        true
    }
}
