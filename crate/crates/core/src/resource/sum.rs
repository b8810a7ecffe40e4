use std::collections::btree_map;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A finite formal sum with positive natural coefficients. The empty sum is
/// the zero sum; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sum<T: Ord>(BTreeMap<T, BigUint>);

impl<T: Ord> Default for Sum<T> {
    fn default() -> Self {
        Sum(BTreeMap::new())
    }
}

impl<T: Ord + Clone> Sum<T> {
    pub fn zero() -> Self {
        Sum::default()
    }

    pub fn single(t: T) -> Self {
        let mut s = Sum::zero();
        s.0.insert(t, BigUint::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, t: T, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.0.entry(t).or_insert_with(BigUint::zero) += c;
    }

    pub fn add_sum(&mut self, other: &Sum<T>) {
        for (t, c) in &other.0 {
            self.add_term(t.clone(), c.clone());
        }
    }

    /// Removes one copy of `t`. Returns false if `t` is not in the support.
    pub fn remove_one(&mut self, t: &T) -> bool {
        match self.0.get_mut(t) {
            None => false,
            Some(c) => {
                *c -= 1u32;
                if c.is_zero() {
                    self.0.remove(t);
                }
                true
            }
        }
    }

    pub fn scaled(&self, k: &BigUint) -> Sum<T> {
        if k.is_zero() {
            return Sum::zero();
        }
        Sum(self.0.iter().map(|(t, c)| (t.clone(), c * k)).collect())
    }

    pub fn coefficient(&self, t: &T) -> BigUint {
        self.0.get(t).cloned().unwrap_or_default()
    }

    pub fn contains(&self, t: &T) -> bool {
        self.0.contains_key(t)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, T, BigUint> {
        self.0.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.0.keys()
    }

    /// Number of distinct support elements.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> BigUint {
        self.0.values().sum()
    }

    /// Linear extension of `f`.
    pub fn flat_map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> Sum<U>) -> Sum<U> {
        let mut out = Sum::zero();
        for (t, c) in &self.0 {
            for (u, d) in f(t).0 {
                out.add_term(u, c * d);
            }
        }
        out
    }

    pub fn map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> Sum<U> {
        let mut out = Sum::zero();
        for (t, c) in &self.0 {
            out.add_term(f(t), c.clone());
        }
        out
    }

    /// Bilinear extension of `f`.
    pub fn combine<U: Ord + Clone, V: Ord + Clone>(&self, other: &Sum<U>, mut f: impl FnMut(&T, &U) -> V) -> Sum<V> {
        let mut out = Sum::zero();
        for (t, c) in &self.0 {
            for (u, d) in &other.0 {
                out.add_term(f(t, u), c * d);
            }
        }
        out
    }
}

impl<T: Ord + Clone> FromIterator<(T, BigUint)> for Sum<T> {
    fn from_iter<I: IntoIterator<Item = (T, BigUint)>>(iter: I) -> Self {
        let mut s = Sum::zero();
        for (t, c) in iter {
            s.add_term(t, c);
        }
        s
    }
}

impl<T: Ord + Clone> FromIterator<T> for Sum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = Sum::zero();
        for t in iter {
            s.add_term(t, BigUint::one());
        }
        s
    }
}

impl<'a, T: Ord> IntoIterator for &'a Sum<T> {
    type Item = (&'a T, &'a BigUint);
    type IntoIter = btree_map::Iter<'a, T, BigUint>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_drops_zero() {
        let mut s: Sum<u8> = [1, 2, 1].into_iter().collect();
        assert_eq!(s.coefficient(&1), BigUint::from(2u32));
        assert_eq!(s.mass(), BigUint::from(3u32));
        s.add_term(3, BigUint::zero());
        assert_eq!(s.len(), 2);
        assert!(s.remove_one(&2));
        assert!(!s.contains(&2));
        assert!(!s.remove_one(&2));
    }

    #[test]
    fn bilinear_combine() {
        let a: Sum<u8> = [1, 2].into_iter().collect();
        let b: Sum<u8> = [(10, BigUint::from(3u32))].into_iter().collect();
        let c = a.combine(&b, |x, y| x + y);
        assert_eq!(c.coefficient(&11), BigUint::from(3u32));
        assert_eq!(c.mass(), BigUint::from(6u32));
        assert!(a.combine(&Sum::<u8>::zero(), |x, y| x + y).is_zero());
    }
}
