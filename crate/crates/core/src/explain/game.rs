use std::cell::RefCell;
use std::collections::HashMap;

use crate::coalition::Coalition;
use crate::model::{Instance, TargetModel};

/// Entries kept before the cache stops growing.
const CACHE_LIMIT: usize = 1 << 20;

/// The coalition game of one instance: the value of a set of kept
/// positions is the masked prediction.
///
/// Values are memoized so explainers run on the same instance share work.
/// A `Game` belongs to one explanation job and is not `Sync`.
pub struct Game<'a> {
    model: &'a TargetModel,
    instance: &'a Instance,
    cache: RefCell<HashMap<Coalition, f64>>,
}

impl<'a> Game<'a> {
    pub fn new(model: &'a TargetModel, instance: &'a Instance) -> Self {
        Game {
            model,
            instance,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn model(&self) -> &TargetModel {
        self.model
    }

    pub fn instance(&self) -> &Instance {
        self.instance
    }

    pub fn len(&self) -> usize {
        self.instance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instance.is_empty()
    }

    pub fn value(&self, keep: &Coalition) -> f64 {
        if let Some(&v) = self.cache.borrow().get(keep) {
            return v;
        }
        let v = self.model.predict_masked(self.instance, keep);
        let mut cache = self.cache.borrow_mut();
        if cache.len() < CACHE_LIMIT {
            cache.insert(keep.clone(), v);
        }
        v
    }

    /// `f(x)`, every position kept.
    pub fn full_value(&self) -> f64 {
        self.value(&Coalition::full(self.len()))
    }

    /// `f(∅)`, every position deleted.
    pub fn empty_value(&self) -> f64 {
        self.value(&Coalition::empty(self.len()))
    }

    pub fn cached_entries(&self) -> usize {
        self.cache.borrow().len()
    }
}
