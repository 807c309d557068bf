//! Graph automorphisms: a vertex and an edge permutation compatible with
//! incidence.

use num_integer::Integer;

use super::digraph::DirectedGraph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphAutomorphism {
    /// `vperm[v]` is the image of vertex `v`.
    pub vperm: Vec<usize>,
    /// `eperm[e]` is the image of edge `e`.
    pub eperm: Vec<usize>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn cycle_order(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut order = 1usize;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut v = s;
        while !seen[v] {
            seen[v] = true;
            v = p[v];
            len += 1;
        }
        order = order.lcm(&len);
    }
    order
}

impl GraphAutomorphism {
    pub fn identity(g: &DirectedGraph) -> Self {
        GraphAutomorphism {
            vperm: (0..g.vertex_count()).collect(),
            eperm: (0..g.edge_count()).collect(),
        }
    }

    /// From name maps; vertices or edges left out are fixed.
    pub fn from_names(
        g: &DirectedGraph,
        vmap: &[(String, String)],
        emap: &[(String, String)],
    ) -> Result<Self> {
        let mut a = Self::identity(g);
        let vidx = |n: &str| {
            g.vertex_index(n)
                .ok_or_else(|| Error::NotAutomorphism(format!("unknown vertex `{n}`")))
        };
        let eidx = |n: &str| {
            g.edges()
                .iter()
                .position(|e| e.id == n)
                .ok_or_else(|| Error::NotAutomorphism(format!("unknown edge `{n}`")))
        };
        for (s, d) in vmap {
            a.vperm[vidx(s)?] = vidx(d)?;
        }
        for (s, d) in emap {
            a.eperm[eidx(s)?] = eidx(d)?;
        }
        a.validate(g)?;
        Ok(a)
    }

    /// Bijectivity and `T(src e) = src T(e)`, `T(dst e) = dst T(e)`.
    pub fn validate(&self, g: &DirectedGraph) -> Result<()> {
        if self.vperm.len() != g.vertex_count() || self.eperm.len() != g.edge_count() {
            return Err(Error::NotAutomorphism("permutation sizes do not match the graph".into()));
        }
        if !is_permutation(&self.vperm) || !is_permutation(&self.eperm) {
            return Err(Error::NotAutomorphism("not a bijection".into()));
        }
        for (i, e) in g.edges().iter().enumerate() {
            let te = &g.edges()[self.eperm[i]];
            if self.vperm[e.src] != te.src || self.vperm[e.dst] != te.dst {
                return Err(Error::NotAutomorphism(format!("edge {} is not mapped compatibly", e.id)));
            }
        }
        Ok(())
    }

    /// Lengths must be constant on edge orbits.
    pub fn check_lengths(&self, g: &DirectedGraph) -> Result<()> {
        for (i, e) in g.edges().iter().enumerate() {
            if g.edges()[self.eperm[i]].len != e.len {
                return Err(Error::NotInvariant(e.id.clone()));
            }
        }
        Ok(())
    }

    pub fn vertex_order(&self) -> usize {
        cycle_order(&self.vperm)
    }

    /// Vertex orbits as `[w, T(w), T²(w), …]` with `w` the smallest index.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vperm.len()];
        let mut out = Vec::new();
        for s in 0..self.vperm.len() {
            if seen[s] {
                continue;
            }
            let mut orb = Vec::new();
            let mut v = s;
            while !seen[v] {
                seen[v] = true;
                orb.push(v);
                v = self.vperm[v];
            }
            out.push(orb);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn swap_is_an_automorphism() {
        let (g, t) = fixtures::two_cycle_swap();
        assert!(t.validate(&g).is_ok());
        assert_eq!(t.vertex_order(), 2);
        assert_eq!(t.vertex_orbits(), vec![vec![0, 1]]);
    }

    #[test]
    fn rejects_bad_maps() {
        let (g, _) = fixtures::two_cycle_swap();
        let bad = GraphAutomorphism { vperm: vec![1, 0], eperm: vec![0, 1] };
        assert!(matches!(bad.validate(&g), Err(Error::NotAutomorphism(_))));
        let g2 = g.with_lengths(&[1, 2]).unwrap();
        let (_, t) = fixtures::two_cycle_swap();
        assert!(matches!(t.check_lengths(&g2), Err(Error::NotInvariant(_))));
    }
}
