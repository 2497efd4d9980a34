//! Root systems, their Gramm matrices, positive roots and dual weights.
//!
//! Simple roots are indexed `0..n` internally, in Bourbaki order within each
//! irreducible factor, factors concatenated. Elements of the root space `E`
//! are written in simple-root coordinates, so the inner product of `x` and
//! `y` is `x^T G y` with `G` the Gramm matrix.

mod cartan;
mod rootset;
mod weights;

pub use cartan::{
    catalogue_with_products, irreducible_catalogue, CartanType, ComponentSpec, SystemSpec,
};
pub use rootset::{RootSet, MAX_RANK};
pub use weights::{check_2d_identity, parabolic_character, WeightTable};

use std::collections::HashSet;

use num::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot, int, QMatrix, QVector, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    spec: SystemSpec,
    /// Ambient coordinates of the simple roots; `None` after a rescaling
    /// that has no rational realization.
    simple_roots: Option<Vec<QVector>>,
    gramm: QMatrix,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    components: Vec<RootSet>,
}

impl RootSystem {
    /// Orthogonal direct sum of the Bourbaki-normalized factors of `spec`.
    pub fn build(spec: &SystemSpec) -> Result<Self> {
        if spec.rank() > MAX_RANK {
            return Err(Error::DimensionMismatch(format!(
                "total rank {} exceeds {MAX_RANK}",
                spec.rank()
            )));
        }
        let mut ambient_dims = Vec::new();
        let mut factors = Vec::new();
        for c in &spec.0 {
            let c = ComponentSpec::new(c.kind, c.rank)?;
            let roots = c.bourbaki_simple_roots();
            ambient_dims.push(roots[0].len());
            factors.push(roots);
        }
        let total: usize = ambient_dims.iter().sum();
        let mut simple_roots = Vec::new();
        let mut offset = 0;
        for (roots, dim) in factors.iter().zip(&ambient_dims) {
            for r in roots {
                let mut v = crate::exact::zero_vec(total);
                v[offset..offset + dim].clone_from_slice(r);
                simple_roots.push(v);
            }
            offset += dim;
        }
        let n = simple_roots.len();
        let mut g = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, dot(&simple_roots[i], &simple_roots[j]));
            }
        }
        let mut rs = Self::from_gramm_unchecked(spec.clone(), g)?;
        rs.simple_roots = Some(simple_roots);
        Ok(rs)
    }

    pub fn parse(spec: &str) -> Result<Self> {
        Self::build(&spec.parse()?)
    }

    fn from_gramm_unchecked(spec: SystemSpec, gramm: QMatrix) -> Result<Self> {
        let n = gramm.rows();
        if !gramm.is_positive_definite() {
            return Err(Error::PreconditionViolated(
                "Gramm matrix is not symmetric positive definite".into(),
            ));
        }
        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let a = int(2) * gramm.get(i, j) / gramm.get(j, j);
                if !a.is_integer() || (i != j && a.is_positive()) {
                    return Err(Error::PreconditionViolated(format!(
                        "entry ({i},{j}) is not a valid Cartan integer"
                    )));
                }
                cartan[i][j] = a.to_integer().to_i64().expect("small Cartan entry");
            }
        }
        let components = dynkin_components(&gramm);
        let positive_roots = enumerate_positive_roots(&cartan);
        Ok(Self {
            spec,
            simple_roots: None,
            gramm,
            cartan,
            positive_roots,
            components,
        })
    }

    /// Same system with the inner product on factor `k` multiplied by
    /// `scales[k] > 0`.
    pub fn rescaled(&self, scales: &[Rational]) -> Result<Self> {
        if scales.len() != self.spec.0.len() || scales.iter().any(|s| !s.is_positive()) {
            return Err(Error::PreconditionViolated(
                "need one positive scale per irreducible factor".into(),
            ));
        }
        let n = self.rank();
        let mut factor_of = vec![0; n];
        let mut start = 0;
        for (k, c) in self.spec.0.iter().enumerate() {
            factor_of[start..start + c.rank].fill(k);
            start += c.rank;
        }
        let mut g = self.gramm.clone();
        for i in 0..n {
            for j in 0..n {
                if !g.get(i, j).is_zero() {
                    let v = g.get(i, j) * &scales[factor_of[i]];
                    g.set(i, j, v);
                }
            }
        }
        Self::from_gramm_unchecked(self.spec.clone(), g)
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn name(&self) -> String {
        self.spec.to_string()
    }

    pub fn rank(&self) -> usize {
        self.gramm.rows()
    }

    pub fn all(&self) -> RootSet {
        RootSet::full(self.rank())
    }

    pub fn gramm(&self) -> &QMatrix {
        &self.gramm
    }

    pub fn simple_roots(&self) -> Option<&[QVector]> {
        self.simple_roots.as_deref()
    }

    /// Bourbaki's Cartan matrix, `a_ij = 2 (a_i, a_j) / (a_j, a_j)`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Positive roots as nonnegative coefficient vectors over the simple roots,
    /// sorted by height then lexicographically.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn dynkin_components(&self) -> &[RootSet] {
        &self.components
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let gy = self.gramm.mul_vec(y).expect("vector of system rank");
        dot(x, &gy)
    }

    pub fn check_root(&self, alpha: usize) -> Result<()> {
        if alpha >= self.rank() {
            return Err(Error::UnknownRoot(alpha));
        }
        Ok(())
    }

    pub fn check_subset(&self, s: RootSet) -> Result<()> {
        match s.iter().find(|&i| i >= self.rank()) {
            Some(i) => Err(Error::UnknownRoot(i)),
            None => Ok(()),
        }
    }

    /// Connected components of the Dynkin graph induced on `ambient`.
    pub fn components_within(&self, ambient: RootSet) -> Vec<RootSet> {
        let mut seen = RootSet::EMPTY;
        let mut out = Vec::new();
        for start in ambient.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = RootSet::singleton(start);
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in ambient.iter() {
                    if !comp.contains(j) && !self.gramm.get(i, j).is_zero() {
                        comp = comp.with(j);
                        stack.push(j);
                    }
                }
            }
            seen = seen.union(comp);
            out.push(comp);
        }
        out
    }

    /// Whether the Dynkin component of `alpha` (inside the diagram induced on
    /// `ambient`) meets `target`. This is component membership, not adjacency:
    /// `alpha` counts as connected to any root of its own component.
    pub fn connected_within(&self, ambient: RootSet, alpha: usize, target: RootSet) -> Result<bool> {
        self.check_root(alpha)?;
        self.check_subset(ambient)?;
        self.check_subset(target)?;
        if !ambient.contains(alpha) {
            return Err(Error::SubsetViolation(format!(
                "root {} is not in the ambient set {ambient:?}",
                alpha + 1
            )));
        }
        let comp = self
            .components_within(ambient)
            .into_iter()
            .find(|c| c.contains(alpha))
            .expect("alpha lies in some component");
        Ok(!comp.intersection(target).is_empty())
    }

    /// `connected_within` for the full diagram.
    pub fn connected_to(&self, alpha: usize, target: RootSet) -> Result<bool> {
        self.connected_within(self.all(), alpha, target)
    }

    /// Coroot of `beta` as an element of the dual space, in coordinates dual
    /// to the simple roots: its value on `gamma` is `2 (gamma, beta) / (beta, beta)`.
    pub fn coroot(&self, beta: usize) -> QVector {
        (0..self.rank())
            .map(|g| int(self.cartan[g][beta]))
            .collect()
    }
}

fn dynkin_components(gramm: &QMatrix) -> Vec<RootSet> {
    let n = gramm.rows();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = RootSet::singleton(s);
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && !gramm.get(i, j).is_zero() {
                    seen[j] = true;
                    comp = comp.with(j);
                    stack.push(j);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Closure of the simple roots under adding simple roots, using root strings:
/// for a positive root `b != a_i`, `b + a_i` is a root iff `p - <b, a_i^v> > 0`
/// where `p` is the largest `k` with `b - k a_i` a root.
fn enumerate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut known: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut all = Vec::new();
    while !layer.is_empty() {
        for r in &layer {
            known.insert(r.clone());
        }
        let mut next: Vec<Vec<i64>> = Vec::new();
        for root in &layer {
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| root[j] * cartan[j][i]).sum();
                let mut p = 0;
                let mut probe = root.clone();
                loop {
                    probe[i] -= 1;
                    if known.contains(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = root.clone();
                    up[i] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        all.append(&mut layer);
        next.sort();
        layer = next;
    }
    all.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_is_rank_one() {
        let rs = RootSystem::parse("A1").unwrap();
        assert_eq!(rs.gramm(), &QMatrix::from_i64(&[&[2]]));
        assert_eq!(rs.positive_roots().len(), 1);
    }

    #[test]
    fn g2_matches_the_plates() {
        let rs = RootSystem::parse("G2").unwrap();
        assert_eq!(rs.gramm(), &QMatrix::from_i64(&[&[2, -3], &[-3, 6]]));
        assert_eq!(
            rs.positive_roots(),
            &[
                vec![1, 0],
                vec![0, 1],
                vec![1, 1],
                vec![2, 1],
                vec![3, 1],
                vec![3, 2]
            ]
        );
    }

    #[test]
    fn b2_normalization() {
        let rs = RootSystem::parse("B2").unwrap();
        assert_eq!(rs.gramm(), &QMatrix::from_i64(&[&[2, -1], &[-1, 1]]));
        assert_eq!(
            rs.positive_roots(),
            &[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]
        );
    }

    #[test]
    fn products_split_into_components() {
        let rs = RootSystem::parse("A2xA1").unwrap();
        let comps: Vec<Vec<usize>> = rs.dynkin_components().iter().map(|c| c.to_vec()).collect();
        assert_eq!(comps, vec![vec![0, 1], vec![2]]);
        assert!(!rs.is_irreducible());
        assert_eq!(rs.gramm().get(1, 2), &int(0));
    }

    #[test]
    fn positive_root_counts_match_classification() {
        for spec in irreducible_catalogue(8) {
            let rs = RootSystem::build(&spec).unwrap();
            assert_eq!(
                rs.positive_roots().len(),
                spec.0[0].positive_root_count(),
                "{spec}"
            );
            assert!(rs.positive_roots().iter().all(|r| r.iter().all(|&c| c >= 0)));
        }
    }

    #[test]
    fn gramm_invariants_hold_for_catalogue() {
        for spec in catalogue_with_products(6) {
            let rs = RootSystem::build(&spec).unwrap();
            let g = rs.gramm();
            assert!(g.is_symmetric() && g.is_positive_definite(), "{spec}");
            for i in 0..rs.rank() {
                for j in 0..rs.rank() {
                    if i != j {
                        assert!(!g.get(i, j).is_positive());
                    }
                }
            }
            assert_eq!(rs.dynkin_components().len(), spec.0.len(), "{spec}");
        }
    }

    #[test]
    fn d3_is_a3_with_relabeling() {
        let d3 = RootSystem::parse("D3").unwrap();
        assert_eq!(d3.positive_roots().len(), 6);
        assert!(d3.is_irreducible());
    }

    #[test]
    fn connectivity_is_component_membership() {
        let a3 = RootSystem::parse("A3").unwrap();
        // alpha_1, I = {alpha_2}: target {alpha_3} is in the same component
        let target = RootSet::singleton(2);
        assert!(a3.connected_to(0, target).unwrap());

        let p = RootSystem::parse("A2xA1").unwrap();
        let target = p.all().difference(RootSet::singleton(2));
        let own = p
            .dynkin_components()
            .iter()
            .find(|c| c.contains(2))
            .unwrap()
            .difference(RootSet::singleton(2));
        assert!(!p.connected_to(2, target.intersection(own)).unwrap());
        assert!(!p.connected_to(2, RootSet::EMPTY).unwrap());

        assert!(!a3.connected_to(1, RootSet::EMPTY).unwrap());
        assert_eq!(a3.connected_to(7, RootSet::EMPTY), Err(Error::UnknownRoot(7)));
    }

    #[test]
    fn connectivity_inside_a_subdiagram() {
        // In A4 restricted to {1,2,4}, alpha_4 is isolated from alpha_1.
        let a4 = RootSystem::parse("A4").unwrap();
        let ambient: RootSet = [0, 1, 3].into_iter().collect();
        assert!(!a4.connected_within(ambient, 3, RootSet::singleton(0)).unwrap());
        assert!(a4.connected_within(a4.all(), 3, RootSet::singleton(0)).unwrap());
    }

    #[test]
    fn rescaling_needs_positive_factors() {
        let rs = RootSystem::parse("A2xB2").unwrap();
        assert!(rs.rescaled(&[int(1)]).is_err());
        assert!(rs.rescaled(&[int(1), int(-1)]).is_err());
        let s = rs.rescaled(&[int(3), crate::exact::frac(1, 2)]).unwrap();
        assert_eq!(s.gramm().get(0, 0), &int(6));
        assert_eq!(s.gramm().get(3, 3), &crate::exact::frac(1, 2));
        assert_eq!(s.positive_roots(), rs.positive_roots());
    }

    #[test]
    fn coroots_pair_to_cartan_integers() {
        let rs = RootSystem::parse("A2").unwrap();
        assert_eq!(rs.coroot(1), crate::exact::int_vec(&[-1, 2]));
    }

    /// Cartan matrices read off the Dynkin diagrams in Bourbaki's plates,
    /// an independent source from the ambient-coordinate Gramm matrices.
    #[test]
    fn cartan_matches_diagram_tables() {
        let f4 = RootSystem::parse("F4").unwrap();
        assert_eq!(
            f4.cartan(),
            &[
                vec![2, -1, 0, 0],
                vec![-1, 2, -2, 0],
                vec![0, -1, 2, -1],
                vec![0, 0, -1, 2]
            ]
        );
        let c3 = RootSystem::parse("C3").unwrap();
        assert_eq!(c3.cartan(), &[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]]);
        let e6 = RootSystem::parse("E6").unwrap();
        let edges: Vec<(usize, usize)> = (0..6)
            .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
            .filter(|&(i, j)| e6.cartan()[i][j] != 0)
            .collect();
        assert_eq!(edges, vec![(0, 2), (1, 3), (2, 3), (3, 4), (4, 5)]);
    }
}
