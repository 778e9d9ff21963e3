use crate::finmap::FinSetMap;
use crate::oracle::{Key, TheoryOracle};

/// The terminal functor: every level is a single point.
pub struct Point;

impl TheoryOracle for Point {
    fn name(&self) -> &str {
        "point"
    }

    fn enumerate(&self, _n: usize) -> Vec<Key> {
        vec![Vec::new()]
    }

    fn count(&self, _n: usize) -> Option<usize> {
        Some(1)
    }

    fn act(&self, _f: &FinSetMap, _key: &[u16]) -> Key {
        Vec::new()
    }

    fn label(&self, _n: usize, _key: &[u16]) -> String {
        "*".into()
    }

    fn extensions(&self, _n: usize, _key: &[u16]) -> Vec<Key> {
        vec![Vec::new()]
    }
}
