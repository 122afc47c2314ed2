//! Matroid independence oracles.
//!
//! Algorithms only ever talk to a matroid through [`Matroid::is_independent`];
//! rank and circuit queries are derived from it. Each kind has a native check
//! (a counter, per-block counters, union-find) that agrees with the axioms.

use crate::error::{invalid, Error, Result};
use crate::objective::ElementId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatroidKind {
    /// Every set of at most `k` elements is independent.
    Uniform { k: usize },
    /// Blocks partition `0..n`; a set is independent when it takes at most
    /// `caps[b]` elements from block `b`.
    Partition {
        blocks: Vec<Vec<ElementId>>,
        caps: Vec<usize>,
        block_of: Vec<usize>,
    },
    /// Element `e` is the edge `endpoints[e]`; independent sets are forests.
    Graphic {
        vertices: usize,
        endpoints: Vec<(usize, usize)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    kind: MatroidKind,
    n: usize,
    rank: usize,
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

fn dedup_sorted(set: &[ElementId]) -> Vec<ElementId> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

impl Matroid {
    pub fn uniform(n: usize, k: usize) -> Self {
        Matroid {
            kind: MatroidKind::Uniform { k },
            n,
            rank: k.min(n),
        }
    }

    pub fn partition(n: usize, blocks: Vec<Vec<ElementId>>, caps: Vec<usize>) -> Result<Self> {
        if blocks.len() != caps.len() {
            return invalid(format!(
                "{} blocks but {} capacities",
                blocks.len(),
                caps.len()
            ));
        }
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return invalid(format!("block {b} references element {e} outside 0..{n}"));
                }
                if block_of[e] != usize::MAX {
                    return invalid(format!("element {e} appears in more than one block"));
                }
                block_of[e] = b;
            }
        }
        if let Some(e) = block_of.iter().position(|&b| b == usize::MAX) {
            return invalid(format!("element {e} is not assigned to any block"));
        }
        let rank = blocks
            .iter()
            .zip(&caps)
            .map(|(block, &cap)| cap.min(block.len()))
            .sum();
        Ok(Matroid {
            kind: MatroidKind::Partition {
                blocks,
                caps,
                block_of,
            },
            n,
            rank,
        })
    }

    /// Graphic matroid over the edges `endpoints` of a simple graph.
    pub fn graphic(vertices: usize, endpoints: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (e, &(u, v)) in endpoints.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return invalid(format!("edge {e} = ({u}, {v}) outside 0..{vertices}"));
            }
            if u == v {
                return invalid(format!("edge {e} is a self-loop"));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return invalid(format!("edge {e} = ({u}, {v}) is a parallel edge"));
            }
        }
        let mut ds = DisjointSets::new(vertices);
        let rank = endpoints.iter().filter(|&&(u, v)| ds.union(u, v)).count();
        let n = endpoints.len();
        Ok(Matroid {
            kind: MatroidKind::Graphic {
                vertices,
                endpoints,
            },
            n,
            rank,
        })
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the whole ground set, i.e. the size of every base.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Partition blocks, when the matroid has any.
    pub fn blocks(&self) -> Option<&[Vec<ElementId>]> {
        match &self.kind {
            MatroidKind::Partition { blocks, .. } => Some(blocks),
            _ => None,
        }
    }

    fn check_ids(&self, set: &[ElementId]) -> Result<()> {
        match set.iter().find(|&&e| e >= self.n) {
            Some(&e) => invalid(format!("element id {e} out of range 0..{}", self.n)),
            None => Ok(()),
        }
    }

    pub fn is_independent(&self, set: &[ElementId]) -> Result<bool> {
        self.check_ids(set)?;
        let set = dedup_sorted(set);
        Ok(match &self.kind {
            MatroidKind::Uniform { k } => set.len() <= *k,
            MatroidKind::Partition { caps, block_of, .. } => {
                let mut counts = vec![0usize; caps.len()];
                set.iter().all(|&e| {
                    let b = block_of[e];
                    counts[b] += 1;
                    counts[b] <= caps[b]
                })
            }
            MatroidKind::Graphic {
                vertices,
                endpoints,
            } => {
                let mut ds = DisjointSets::new(*vertices);
                set.iter().all(|&e| {
                    let (u, v) = endpoints[e];
                    ds.union(u, v)
                })
            }
        })
    }

    /// Whether `set + e` is independent.
    pub fn can_add(&self, set: &[ElementId], e: ElementId) -> Result<bool> {
        let mut with = set.to_vec();
        with.push(e);
        self.is_independent(&with)
    }

    /// Size of a largest independent subset, built greedily.
    pub fn rank_of(&self, set: &[ElementId]) -> Result<usize> {
        self.check_ids(set)?;
        let mut basis = Vec::new();
        for e in dedup_sorted(set) {
            if self.can_add(&basis, e)? {
                basis.push(e);
            }
        }
        Ok(basis.len())
    }

    /// The unique circuit of `a + g`, for independent `a` with `a + g` dependent.
    ///
    /// Computed as `{g} ∪ {x ∈ a : a + g − x independent}`; the result is
    /// sorted by id.
    pub fn circuit(&self, a: &[ElementId], g: ElementId) -> Result<Vec<ElementId>> {
        self.check_ids(a)?;
        self.check_ids(&[g])?;
        let a = dedup_sorted(a);
        if a.contains(&g) {
            return Err(Error::Contract(format!("element {g} already belongs to the set")));
        }
        if !self.is_independent(&a)? {
            return Err(Error::Contract("circuit requires an independent base set".into()));
        }
        if self.can_add(&a, g)? {
            return Err(Error::Contract(format!(
                "adding {g} keeps the set independent; there is no circuit"
            )));
        }
        let mut circuit = vec![g];
        for &x in &a {
            let swapped: Vec<_> = a.iter().copied().filter(|&y| y != x).chain([g]).collect();
            if self.is_independent(&swapped)? {
                circuit.push(x);
            }
        }
        circuit.sort_unstable();
        Ok(circuit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Matroid {
        Matroid::graphic(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn uniform_independence_and_rank() {
        let m = Matroid::uniform(5, 2);
        assert_eq!(m.rank(), 2);
        assert!(m.is_independent(&[0, 1]).unwrap());
        assert!(!m.is_independent(&[0, 1, 2]).unwrap());
        assert!(m.is_independent(&[]).unwrap());
        assert_eq!(m.rank_of(&[0, 1, 2]).unwrap(), 2);
        assert_eq!(Matroid::uniform(3, 7).rank(), 3);
    }

    #[test]
    fn partition_independence() {
        let m = Matroid::partition(4, vec![vec![0, 1], vec![2, 3]], vec![1, 1]).unwrap();
        assert!(m.is_independent(&[0, 2]).unwrap());
        assert!(!m.is_independent(&[0, 1]).unwrap());
        let p = Matroid::partition(3, vec![vec![0, 1], vec![2]], vec![1, 1]).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.rank_of(&[0, 1, 2]).unwrap(), 2);
    }

    #[test]
    fn malformed_partitions_rejected() {
        assert!(Matroid::partition(3, vec![vec![0, 1]], vec![1]).is_err());
        assert!(Matroid::partition(3, vec![vec![0, 1], vec![1, 2]], vec![1, 1]).is_err());
        assert!(Matroid::partition(2, vec![vec![0, 1]], vec![1, 1]).is_err());
        assert!(Matroid::partition(2, vec![vec![0, 5]], vec![1]).is_err());
    }

    #[test]
    fn graphic_rank_and_cycles() {
        let m = triangle();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_of(&[0, 1, 2]).unwrap(), 2);
        assert!(!m.is_independent(&[0, 1, 2]).unwrap());
        assert!(m.is_independent(&[0, 2]).unwrap());
        assert!(Matroid::graphic(2, vec![(0, 0)]).is_err());
        assert!(Matroid::graphic(2, vec![(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn circuits() {
        let m = Matroid::uniform(3, 2);
        assert_eq!(m.circuit(&[0, 1], 2).unwrap(), vec![0, 1, 2]);

        let p = Matroid::partition(3, vec![vec![0, 1], vec![2]], vec![1, 1]).unwrap();
        assert_eq!(p.circuit(&[0, 2], 1).unwrap(), vec![0, 1]);

        // square 0-1-2-3 with edges e0=(0,1) e1=(1,2) e2=(2,3) e3=(3,0), diagonal e4=(0,2)
        let g = Matroid::graphic(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        assert_eq!(g.circuit(&[0, 1, 2], 4).unwrap(), vec![0, 1, 4]);
    }

    #[test]
    fn circuit_preconditions() {
        let m = Matroid::uniform(4, 2);
        assert!(matches!(m.circuit(&[0], 1), Err(Error::Contract(_))));
        assert!(matches!(m.circuit(&[0, 1, 2], 3), Err(Error::Contract(_))));
        assert!(matches!(m.circuit(&[0, 1], 1), Err(Error::Contract(_))));
        assert!(m.is_independent(&[9]).is_err());
    }
}
