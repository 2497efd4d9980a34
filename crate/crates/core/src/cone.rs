//! Extreme rays of rational polyhedral cones by the double description method.
//!
//! A cone is `{x : e(x) = 0 for e in E, h(x) >= 0 for h in H}`. It is first
//! restricted to the common kernel of the equalities, then the inequalities
//! are inserted one at a time while a minimal generating set (lineality basis
//! plus extreme rays) is maintained. Adjacency of rays is decided by the
//! combinatorial test on zero sets. Everything is exact; rays are kept as
//! primitive integer vectors.

use std::collections::BTreeSet;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{axpy, dot, is_zero_vec, primitive, scale, QVector, Rational, Subspace};

/// Minimal generators of a cone: `cone = span(lineality) + cone(rays)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub rays: Vec<QVector>,
    pub lineality: Vec<QVector>,
}

impl Generators {
    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// The generator with the most negative objective value, if any is
    /// negative. Lineality directions count in both orientations.
    pub fn most_negative(&self, objective: &[Rational]) -> Option<(QVector, Rational)> {
        let mut best: Option<(QVector, Rational)> = None;
        let mut consider = |v: QVector| {
            let val = dot(objective, &v);
            if val.is_negative() && best.as_ref().is_none_or(|(_, b)| &val < b) {
                best = Some((v, val));
            }
        };
        for r in &self.rays {
            consider(r.clone());
        }
        for l in &self.lineality {
            consider(l.clone());
            consider(l.iter().map(|x| -x).collect());
        }
        best
    }
}

struct Ray {
    v: QVector,
    zeros: BTreeSet<usize>,
}

fn project_out(v: &mut QVector, h: &[Rational], l: &[Rational], hl: &Rational) {
    let hv = dot(h, v);
    if !hv.is_zero() {
        axpy(v, &-(hv / hl), l);
    }
}

/// Double description in `Q^k` for `{x : h(x) >= 0 for h in constraints}`.
fn dd(k: usize, constraints: &[QVector]) -> (Vec<QVector>, Vec<QVector>) {
    let mut lineality: Vec<QVector> = (0..k).map(|i| crate::exact::unit_vec(k, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (t, h) in constraints.iter().enumerate() {
        if let Some(pos) = lineality.iter().position(|l| !dot(h, l).is_zero()) {
            // The new halfspace cuts the lineality space: one lineality
            // direction becomes a ray, the rest are projected into ker h.
            let mut l = lineality.swap_remove(pos);
            let mut hl = dot(h, &l);
            if hl.is_negative() {
                l = scale(&l, &-Rational::from_integer(1.into()));
                hl = -hl;
            }
            for other in lineality.iter_mut() {
                project_out(other, h, &l, &hl);
            }
            for r in rays.iter_mut() {
                project_out(&mut r.v, h, &l, &hl);
                r.v = primitive(&r.v);
                r.zeros.insert(t);
            }
            rays.push(Ray {
                v: primitive(&l),
                zeros: (0..t).collect(),
            });
            continue;
        }

        let vals: Vec<Rational> = rays.iter().map(|r| dot(h, &r.v)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if minus.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.insert(t);
                }
            }
            continue;
        }
        // dimension of the pointed part, for the algebraic adjacency filter
        let pointed_dim = k - lineality.len();
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &plus {
            for &m in &minus {
                let common: BTreeSet<usize> =
                    rays[p].zeros.intersection(&rays[m].zeros).copied().collect();
                if common.len() + 2 < pointed_dim {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&o| o != p && o != m)
                    .all(|o| !common.is_subset(&rays[o].zeros));
                if !adjacent {
                    continue;
                }
                // vals[p] > 0 > vals[m]: combination vanishing on h
                let mut v = scale(&rays[m].v, &vals[p]);
                axpy(&mut v, &-vals[m].clone(), &rays[p].v);
                let mut zeros = common;
                zeros.insert(t);
                fresh.push(Ray {
                    v: primitive(&v),
                    zeros,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.insert(t);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }
    (rays.into_iter().map(|r| r.v).collect(), lineality)
}

/// Extreme rays and lineality of
/// `{x in Q^n : e(x) = 0 for e in equalities, h(x) >= 0 for h in inequalities}`.
pub fn extreme_rays(
    ambient_dim: usize,
    equalities: &[QVector],
    inequalities: &[QVector],
) -> Result<Generators> {
    if let Some(f) = equalities
        .iter()
        .chain(inequalities)
        .find(|f| f.len() != ambient_dim)
    {
        return Err(Error::DimensionMismatch(format!(
            "functional of length {} in ambient dimension {ambient_dim}",
            f.len()
        )));
    }
    let sub = Subspace::kernel(ambient_dim, equalities)?;
    let basis = sub.basis();
    let k = basis.len();
    let restricted: Vec<QVector> = inequalities
        .iter()
        .map(|h| basis.iter().map(|b| dot(h, b)).collect())
        .collect();
    let (rays, lineality) = dd(k, &restricted);
    let lift = |c: &QVector| -> QVector {
        let mut v = vec![Rational::zero(); ambient_dim];
        for (ci, b) in c.iter().zip(basis) {
            axpy(&mut v, ci, b);
        }
        primitive(&v)
    };
    let mut out_rays: Vec<QVector> = Vec::new();
    for r in &rays {
        let v = lift(r);
        if !is_zero_vec(&v) && !out_rays.contains(&v) {
            out_rays.push(v);
        }
    }
    out_rays.sort();
    let lineality = Subspace::span(ambient_dim, lineality.iter().map(lift))?
        .basis()
        .iter()
        .map(|v| primitive(v))
        .collect();
    Ok(Generators {
        rays: out_rays,
        lineality,
    })
}
