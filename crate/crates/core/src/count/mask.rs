//! Fixed-width vertex bitsets used by the branching algorithms.

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask(Vec<u64>);

impl Mask {
    pub fn empty(n: usize) -> Mask {
        Mask(vec![0; n.div_ceil(64).max(1)])
    }

    pub fn full(n: usize) -> Mask {
        let mut m = Mask::empty(n);
        for v in 0..n {
            m.insert(v);
        }
        m
    }

    pub fn from_vertices(n: usize, vs: &[usize]) -> Mask {
        let mut m = Mask::empty(n);
        for &v in vs {
            m.insert(v);
        }
        m
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn and_not(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    pub fn or_assign(&mut self, other: &Mask) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    /// Number of vertices shared with `other`.
    pub fn intersection_count(&self, other: &Mask) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Closed and open neighbourhood masks for every vertex.
pub struct MaskGraph {
    pub n: usize,
    pub open: Vec<Mask>,
    pub closed: Vec<Mask>,
}

impl MaskGraph {
    pub fn new(g: &crate::graph::Graph) -> MaskGraph {
        let n = g.n();
        let open: Vec<Mask> = (0..n).map(|v| Mask::from_vertices(n, g.neighbors(v))).collect();
        let closed = open
            .iter()
            .enumerate()
            .map(|(v, m)| {
                let mut c = m.clone();
                c.insert(v);
                c
            })
            .collect();
        MaskGraph { n, open, closed }
    }

    pub fn degree_in(&self, v: usize, mask: &Mask) -> usize {
        self.open[v].intersection_count(mask)
    }

    /// Connected components of the subgraph induced by `mask`.
    pub fn components(&self, mask: &Mask) -> Vec<Mask> {
        let mut rest = mask.clone();
        let mut out = Vec::new();
        while let Some(s) = rest.first() {
            let mut comp = Mask::empty(self.n);
            comp.insert(s);
            let mut frontier = comp.clone();
            rest.remove(s);
            while !frontier.is_empty() {
                let mut next = Mask::empty(self.n);
                for v in frontier.iter() {
                    next.or_assign(&self.open[v].and(&rest));
                }
                rest = rest.and_not(&next);
                comp.or_assign(&next);
                frontier = next;
            }
            out.push(comp);
        }
        out
    }

    pub fn edge_count_in(&self, mask: &Mask) -> usize {
        mask.iter().map(|v| self.degree_in(v, mask)).sum::<usize>() / 2
    }

    /// Highest-degree vertex inside `mask`, lowest id on ties, with its degree.
    pub fn pivot(&self, mask: &Mask) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for v in mask.iter() {
            let d = self.degree_in(v, mask);
            if best.map_or(true, |(_, bd)| d > bd) {
                best = Some((v, d));
            }
        }
        best
    }

    /// Materialises the induced subgraph together with the vertex ids it uses.
    pub fn induced_graph(&self, g: &crate::graph::Graph, mask: &Mask) -> (crate::graph::Graph, Vec<usize>) {
        let vs: Vec<usize> = mask.iter().collect();
        (g.induced(&vs), vs)
    }
}
