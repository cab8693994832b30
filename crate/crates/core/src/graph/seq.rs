use std::fmt;

/// Hierarchical program-order key. Children of `K` are `K.1`, `K.2`, …,
/// which sort after `K`'s predecessors and before its successors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seq(Vec<u32>);

impl Seq {
    pub fn root(n: u32) -> Seq {
        Seq(vec![n])
    }

    pub fn child(&self, n: u32) -> Seq {
        let mut parts = self.0.clone();
        parts.push(n);
        Seq(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn parent(&self) -> Option<Seq> {
        (self.0.len() > 1).then(|| Seq(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn is_ancestor_of(&self, other: &Seq) -> bool {
        other.0.len() > self.0.len() && other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn children_sit_between_neighbours() {
        let k = Seq::root(1).child(2);
        let before = Seq::root(1).child(1);
        let after = Seq::root(1).child(3);
        for i in 1..5 {
            let c = k.child(i);
            assert!(before < c && c < after);
            assert_eq!(c.parent(), Some(k.clone()));
            assert!(k.is_ancestor_of(&c));
        }
        assert_eq!(k.to_string(), "1.2");
    }

    proptest! {
        #[test]
        fn descendants_preserve_order(a in prop::collection::vec(1u32..4, 1..5),
                                      b in prop::collection::vec(1u32..4, 1..5),
                                      x in 1u32..4, y in 1u32..4) {
            let (a, b) = (Seq(a), Seq(b));
            prop_assume!(!a.is_ancestor_of(&b) && !b.is_ancestor_of(&a) && a != b);
            prop_assert_eq!(a.cmp(&b), a.child(x).cmp(&b.child(y)));
        }
    }
}
