//! Persistent key/value environments shared by every interpreter in the
//! workbench, also used to model the object heap.
//!
//! An environment is a binary tree of bindings. Lookup is right-biased: in
//! `Pair(left, right)`, a binding in `right` shadows one in `left`. Trees are
//! immutable once built; extension composes a new `Pair` node and shares the
//! old tree.

use std::rc::Rc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Env<K, V> {
    Empty,
    Bind(K, V),
    Pair(Rc<Env<K, V>>, Rc<Env<K, V>>),
}

impl<K, V> Env<K, V> {
    pub fn empty() -> Self {
        Env::Empty
    }

    pub fn bind(key: K, value: V) -> Self {
        Env::Bind(key, value)
    }

    pub fn pair(left: Env<K, V>, right: Env<K, V>) -> Self {
        Env::Pair(Rc::new(left), Rc::new(right))
    }

    /// Extends `self` with one binding that shadows everything already there.
    pub fn extended(self, key: K, value: V) -> Self {
        Env::pair(self, Env::bind(key, value))
    }

    /// Number of `Bind` nodes in the tree (bindings, not distinct keys).
    pub fn binding_count(&self) -> usize {
        match self {
            Env::Empty => 0,
            Env::Bind(_, _) => 1,
            Env::Pair(l, r) => l.binding_count() + r.binding_count(),
        }
    }
}

impl<K: PartialEq, V> Env<K, V> {
    /// Sentinel-based lookup: returns the rightmost value bound to `key`, or
    /// `default` when absent. In a `Pair` the right subtree is searched first
    /// and the left is consulted only when the right came back equal to
    /// `default`. A real binding equal to `default` is therefore
    /// indistinguishable from absence; use [`Env::find`] where that matters.
    pub fn lookup(&self, key: &K, default: V) -> V
    where
        V: Clone + PartialEq,
    {
        match self {
            Env::Empty => default,
            Env::Bind(k, v) => {
                if k == key {
                    v.clone()
                } else {
                    default
                }
            }
            Env::Pair(left, right) => {
                let value = right.lookup(key, default.clone());
                if value == default {
                    left.lookup(key, default)
                } else {
                    value
                }
            }
        }
    }

    /// Explicit-absence lookup (rightmost binding wins). Preferred internally
    /// when no safe sentinel value exists, e.g. for heap cells.
    pub fn find(&self, key: &K) -> Option<&V> {
        match self {
            Env::Empty => None,
            Env::Bind(k, v) => (k == key).then_some(v),
            Env::Pair(left, right) => right.find(key).or_else(|| left.find(key)),
        }
    }
}

impl<K: Clone, V> Env<K, V> {
    /// Structure-preserving map over values; keys are untouched.
    pub fn map_values<W>(&self, f: &impl Fn(&V) -> W) -> Env<K, W> {
        match self {
            Env::Empty => Env::Empty,
            Env::Bind(k, v) => Env::Bind(k.clone(), f(v)),
            Env::Pair(l, r) => Env::Pair(Rc::new(l.map_values(f)), Rc::new(r.map_values(f))),
        }
    }
}
