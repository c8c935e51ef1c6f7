use rustc_hash::FxHashMap;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use super::ReceptiveFieldKey;

#[derive(Clone, Debug, PartialEq)]
pub(super) enum WeightStore {
    Exact(FxHashMap<ReceptiveFieldKey, f64>),
    Hashed(HashedTable),
}

impl WeightStore {
    pub fn exact() -> Self {
        WeightStore::Exact(FxHashMap::default())
    }

    pub fn hashed(capacity: usize) -> Self {
        WeightStore::Hashed(HashedTable::new(capacity))
    }

    pub fn get(&self, key: &ReceptiveFieldKey) -> f64 {
        match self {
            WeightStore::Exact(map) => map.get(key).copied().unwrap_or(0.0),
            WeightStore::Hashed(table) => table.get(key),
        }
    }

    pub fn add(&mut self, key: ReceptiveFieldKey, amount: f64) {
        match self {
            WeightStore::Exact(map) => *map.entry(key).or_insert(0.0) += amount,
            WeightStore::Hashed(table) => {
                if let Some(w) = table.slot_mut(key) {
                    *w += amount;
                }
            }
        }
    }

    pub fn set(&mut self, key: ReceptiveFieldKey, value: f64) {
        match self {
            WeightStore::Exact(map) => {
                map.insert(key, value);
            }
            WeightStore::Hashed(table) => {
                if let Some(w) = table.slot_mut(key) {
                    *w = value;
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            WeightStore::Exact(map) => map.len(),
            WeightStore::Hashed(table) => table.len,
        }
    }

    pub fn capacity(&self) -> Option<usize> {
        match self {
            WeightStore::Exact(_) => None,
            WeightStore::Hashed(table) => Some(table.slots.len()),
        }
    }

    pub fn dropped(&self) -> u64 {
        match self {
            WeightStore::Exact(_) => 0,
            WeightStore::Hashed(table) => table.dropped,
        }
    }

    pub fn entries(&self) -> Vec<(ReceptiveFieldKey, f64)> {
        match self {
            WeightStore::Exact(map) => map.iter().map(|(k, v)| (*k, *v)).collect(),
            WeightStore::Hashed(table) => table.slots.iter().flatten().copied().collect(),
        }
    }
}

/// Linear-probing table that stores the full key in each slot.
#[derive(Clone, Debug, PartialEq)]
pub(super) struct HashedTable {
    slots: Vec<Option<(ReceptiveFieldKey, f64)>>,
    len: usize,
    dropped: u64,
}

impl HashedTable {
    fn new(capacity: usize) -> Self {
        HashedTable {
            slots: vec![None; capacity],
            len: 0,
            dropped: 0,
        }
    }

    fn home(&self, key: &ReceptiveFieldKey) -> usize {
        // DefaultHasher::new() uses fixed keys, so placement is reproducible
        let mut h = DefaultHasher::new();
        key.hash(&mut h);
        (h.finish() % self.slots.len() as u64) as usize
    }

    fn get(&self, key: &ReceptiveFieldKey) -> f64 {
        let n = self.slots.len();
        let start = self.home(key);
        for i in 0..n {
            match &self.slots[(start + i) % n] {
                Some((k, w)) if k == key => return *w,
                Some(_) => continue,
                None => return 0.0,
            }
        }
        0.0
    }

    fn slot_mut(&mut self, key: ReceptiveFieldKey) -> Option<&mut f64> {
        let n = self.slots.len();
        let start = self.home(&key);
        let mut found = None;
        for i in 0..n {
            let idx = (start + i) % n;
            match &self.slots[idx] {
                Some((k, _)) if *k == key => {
                    found = Some(idx);
                    break;
                }
                Some(_) => continue,
                None => {
                    self.slots[idx] = Some((key, 0.0));
                    self.len += 1;
                    found = Some(idx);
                    break;
                }
            }
        }
        match found {
            Some(idx) => self.slots[idx].as_mut().map(|(_, w)| w),
            None => {
                self.dropped += 1;
                None
            }
        }
    }
}
