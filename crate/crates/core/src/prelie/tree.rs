//! Non-planar rooted trees in canonical form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A rooted tree stored as the sorted multiset of its root's subtrees.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTree {
    children: Vec<RootedTree>,
}

impl RootedTree {
    /// The single node `•`.
    pub fn leaf() -> Self {
        RootedTree { children: Vec::new() }
    }

    /// `B+(children)`: a new root carrying the given subtrees.
    pub fn join(mut children: Vec<RootedTree>) -> Self {
        children.sort();
        RootedTree { children }
    }

    /// Path with `n` nodes.
    pub fn ladder(n: usize) -> Self {
        assert!(n >= 1, "trees have at least one node");
        (1..n).fold(Self::leaf(), |t, _| Self::join(vec![t]))
    }

    pub fn children(&self) -> &[RootedTree] {
        &self.children
    }

    pub fn nodes(&self) -> usize {
        1 + self.children.iter().map(RootedTree::nodes).sum::<usize>()
    }

    /// Attach the root of `self` to every node of `target`, one tree per node
    /// (isomorphic results repeat).
    pub fn graft_onto(&self, target: &RootedTree) -> Vec<RootedTree> {
        let mut out = Vec::with_capacity(target.nodes());
        let mut at_root = target.children.clone();
        at_root.push(self.clone());
        out.push(Self::join(at_root));
        for (i, child) in target.children.iter().enumerate() {
            for grafted in self.graft_onto(child) {
                let mut kids = target.children.clone();
                kids[i] = grafted;
                out.push(Self::join(kids));
            }
        }
        out
    }

    /// All trees with exactly `n` nodes, sorted.
    pub fn enumerate(n: usize) -> Vec<RootedTree> {
        let mut table: Vec<Vec<RootedTree>> = vec![Vec::new(), vec![Self::leaf()]];
        for k in 2..=n {
            let mut found = std::collections::BTreeSet::new();
            // Every tree on k nodes is a tree on k - 1 nodes with one leaf added.
            for t in &table[k - 1] {
                for g in Self::leaf().graft_onto(t) {
                    found.insert(g);
                }
            }
            table.push(found.into_iter().collect());
        }
        if n == 0 {
            Vec::new()
        } else {
            table.swap_remove(n)
        }
    }

    /// Number of automorphisms.
    pub fn symmetry(&self) -> u64 {
        let mut total = 1u64;
        let mut i = 0;
        while i < self.children.len() {
            let mut j = i;
            while j < self.children.len() && self.children[j] == self.children[i] {
                j += 1;
            }
            let mult = (j - i) as u64;
            total *= (1..=mult).product::<u64>() * self.children[i].symmetry().pow(mult as u32);
            i = j;
        }
        total
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for c in &self.children {
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RootedTree {
    type Err = Error;

    /// Bracket notation: `[]` is a node, `[[][]]` the cherry.
    fn from_str(s: &str) -> Result<Self> {
        let bytes: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let (tree, used) = parse_at(&bytes, 0)?;
        if used != bytes.len() {
            return Err(Error::Parse(format!("trailing input in tree `{s}`")));
        }
        Ok(tree)
    }
}

fn parse_at(b: &[u8], pos: usize) -> Result<(RootedTree, usize)> {
    if b.get(pos) != Some(&b'[') {
        return Err(Error::Parse(format!("expected `[` at offset {pos}")));
    }
    let mut children = Vec::new();
    let mut p = pos + 1;
    loop {
        match b.get(p) {
            Some(b']') => return Ok((RootedTree::join(children), p + 1)),
            Some(b'[') => {
                let (child, next) = parse_at(b, p)?;
                children.push(child);
                p = next;
            }
            _ => return Err(Error::Parse(format!("unbalanced tree at offset {p}"))),
        }
    }
}
