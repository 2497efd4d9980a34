//! Serializable documents for systems, subspaces, certificates and traces.
//!
//! Fractions are written as strings `"p/q"` (or `"p"`), never as floats, so
//! every document round-trips exactly. Simple roots are numbered from 1 in
//! documents, matching the usual Bourbaki labels.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::certify::Certificate;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, QMatrix, QVector, Rational};
use crate::parabolic::ParabolicDatum;
use crate::roots::{RootSet, RootSystem, WeightTable};
use crate::sim::{SelectionModel, SimTrace};

pub const SCHEMA: u32 = 1;

pub fn q(x: &Rational) -> String {
    fmt_rational(x)
}

pub fn qvec(v: &[Rational]) -> Vec<String> {
    v.iter().map(q).collect()
}

pub fn qmat(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| q(m.get(i, j))).collect())
        .collect()
}

pub fn parse_qvec(v: &[String]) -> Result<QVector> {
    v.iter().map(|s| parse_rational(s)).collect()
}

/// 1-based labels of a subset.
pub fn labels(s: RootSet) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

pub fn from_labels(rank: usize, labels: &[usize]) -> Result<RootSet> {
    labels.iter().try_fold(RootSet::default(), |acc, &l| {
        if l == 0 || l > rank {
            Err(Error::UnknownRoot(l))
        } else {
            Ok(acc.with(l - 1))
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDoc {
    pub schema: u32,
    pub system: String,
    pub rank: usize,
    pub components: Vec<Vec<usize>>,
    pub positive_roots: usize,
    pub gramm: Vec<Vec<String>>,
    pub cartan: Vec<Vec<i64>>,
    /// `((w_a, w_b))`, the inverse of the Gramm matrix
    pub dual_gramm: Vec<Vec<String>>,
    pub d: Vec<String>,
    /// `w̄_a` in simple-root coordinates, one row per root
    pub weighted: Vec<Vec<String>>,
}

impl SystemDoc {
    pub fn new(rs: &RootSystem, wt: &WeightTable) -> Self {
        SystemDoc {
            schema: SCHEMA,
            system: rs.name(),
            rank: rs.rank(),
            components: rs.dynkin_components().iter().map(|c| labels(*c)).collect(),
            positive_roots: rs.positive_roots().len(),
            gramm: qmat(rs.gramm()),
            cartan: rs.cartan().to_vec(),
            dual_gramm: qmat(wt.dual_gramm()),
            d: qvec(wt.d()),
            weighted: wt.weighted_all().iter().map(|w| qvec(w)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumDoc {
    pub subset: Vec<usize>,
    pub kernel_dim: usize,
    pub kernel_basis: Vec<Vec<String>>,
    pub coroot_dim: usize,
    pub coroot_basis: Vec<Vec<String>>,
    /// `d^I_b` for the members of the subset
    pub relative_d: Vec<String>,
}

impl DatumDoc {
    pub fn new(datum: &ParabolicDatum) -> Self {
        let basis = |b: &[QVector]| b.iter().map(|v| qvec(v)).collect();
        DatumDoc {
            subset: labels(datum.subset),
            kernel_dim: datum.kernel.dim(),
            kernel_basis: basis(datum.kernel.basis()),
            coroot_dim: datum.coroot_span.dim(),
            coroot_basis: basis(datum.coroot_span.basis()),
            relative_d: datum
                .relative
                .table()
                .map(|t| qvec(t.d()))
                .unwrap_or_default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateDoc {
    ConicCombination {
        /// `(constraint, multiplier)`
        inequality: Vec<(String, String)>,
        equality: Vec<(String, String)>,
    },
    RayConfirmation {
        rays: Vec<Vec<String>>,
        lineality: Vec<Vec<String>>,
        min_objective: Option<String>,
    },
    ViolatingRay {
        ray: Vec<String>,
        objective: String,
    },
}

impl CertificateDoc {
    pub fn new(c: &Certificate) -> Self {
        let pairs = |v: &[(crate::certify::Constraint, Rational)]| {
            v.iter().map(|(c, x)| (c.to_string(), q(x))).collect()
        };
        match c {
            Certificate::ConicCombination {
                inequality,
                equality,
            } => CertificateDoc::ConicCombination {
                inequality: pairs(inequality),
                equality: pairs(equality),
            },
            Certificate::RayConfirmation {
                rays,
                lineality,
                min_objective,
            } => CertificateDoc::RayConfirmation {
                rays: rays.iter().map(|r| qvec(r)).collect(),
                lineality: lineality.iter().map(|r| qvec(r)).collect(),
                min_objective: min_objective.as_ref().map(q),
            },
            Certificate::ViolatingRay { ray, objective } => CertificateDoc::ViolatingRay {
                ray: qvec(ray),
                objective: q(objective),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub level: usize,
    pub root: usize,
    pub subset_after: Vec<usize>,
    pub direction: Vec<String>,
    pub scale: String,
}

/// A trace as exported: enough to rebuild and re-check it exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub schema: u32,
    pub system: String,
    pub selection: Vec<usize>,
    pub horizon: u64,
    pub n0: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Extreme rays of the scale cone, when the trace was sampled from them.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rays: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ray_weights: Option<Vec<u64>>,
    pub levels: Vec<LevelDoc>,
}

impl TraceDoc {
    pub fn new(trace: &SimTrace, model: &SelectionModel) -> Self {
        TraceDoc {
            schema: SCHEMA,
            system: trace.rs.name(),
            selection: trace.selection().iter().map(|a| a + 1).collect(),
            horizon: trace.horizon,
            n0: trace.n0,
            seed: trace.seed,
            rays: trace
                .ray_weights
                .as_ref()
                .map(|_| model.rays().iter().map(|r| qvec(r)).collect()),
            ray_weights: trace.ray_weights.clone(),
            levels: trace
                .steps
                .iter()
                .map(|s| LevelDoc {
                    level: s.level,
                    root: s.root + 1,
                    subset_after: labels(s.subset_after),
                    direction: qvec(&s.direction),
                    scale: q(&s.scale),
                })
                .collect(),
        }
    }

    /// Rebuild the trace, checking that every recorded quantity agrees with
    /// a fresh model and that the trace is admissible.
    pub fn to_trace(&self) -> Result<(SimTrace, SelectionModel)> {
        if self.schema != SCHEMA {
            return Err(Error::Unsupported(format!("trace schema {}", self.schema)));
        }
        let rs = Arc::new(RootSystem::parse(&self.system)?);
        let selection = self
            .selection
            .iter()
            .map(|&l| {
                if l == 0 || l > rs.rank() {
                    Err(Error::UnknownRoot(l))
                } else {
                    Ok(l - 1)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let model = SelectionModel::new(rs.clone(), &selection)?;
        if self.levels.len() != selection.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} levels for a selection of length {}",
                self.levels.len(),
                selection.len()
            )));
        }
        let scales = self
            .levels
            .iter()
            .map(|l| parse_rational(&l.scale))
            .collect::<Result<Vec<_>>>()?;
        let mut trace = model.trace_from_scales(&scales, self.horizon)?;
        for (doc, step) in self.levels.iter().zip(&trace.steps) {
            if doc.level != step.level
                || doc.root != step.root + 1
                || from_labels(rs.rank(), &doc.subset_after)? != step.subset_after
                || parse_qvec(&doc.direction)? != step.direction
            {
                return Err(Error::PreconditionViolated(format!(
                    "level {} does not match the selection",
                    doc.level
                )));
            }
        }
        if trace.n0 != self.n0 {
            return Err(Error::PreconditionViolated(format!(
                "recorded n0 = {} but the constraints give {}",
                self.n0, trace.n0
            )));
        }
        if let Some(weights) = &self.ray_weights {
            let rays = match &self.rays {
                Some(r) => r.iter().map(|v| parse_qvec(v)).collect::<Result<Vec<_>>>()?,
                None => model.rays().to_vec(),
            };
            if rays != model.rays() || weights.len() != rays.len() {
                return Err(Error::PreconditionViolated(
                    "recorded rays differ from the scale cone".into(),
                ));
            }
            let mut t = crate::exact::zero_vec(selection.len());
            for (w, r) in weights.iter().zip(&rays) {
                crate::exact::axpy(&mut t, &Rational::from_integer((*w).into()), r);
            }
            if t != scales {
                return Err(Error::PreconditionViolated(
                    "scales are not the recorded ray combination".into(),
                ));
            }
        }
        trace.seed = self.seed;
        trace.ray_weights = self.ray_weights.clone();
        Ok((trace, model))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{verify_weight_bound_constructive, verify_weight_bound_rays, weight_bound_cone};
    use crate::parabolic::make_datum;

    #[test]
    fn system_document_g2() {
        let rs = RootSystem::parse("G2").unwrap();
        let wt = WeightTable::new(&rs).unwrap();
        let doc = SystemDoc::new(&rs, &wt);
        assert_eq!(doc.d, vec!["3", "5/3"]);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("\"5/3\""));
        assert_eq!(serde_json::from_str::<SystemDoc>(&json).unwrap(), doc);
    }

    #[test]
    fn datum_document() {
        let rs = RootSystem::parse("A3").unwrap();
        let doc = DatumDoc::new(&make_datum(&rs, RootSet::from_bits(0b011)).unwrap());
        assert_eq!(doc.subset, vec![1, 2]);
        assert_eq!((doc.kernel_dim, doc.coroot_dim), (1, 2));
        assert_eq!(doc.relative_d, vec!["1", "1"]);
    }

    #[test]
    fn certificate_documents() {
        let rs = RootSystem::parse("A2").unwrap();
        let wt = WeightTable::new(&rs).unwrap();
        let c = verify_weight_bound_constructive(&rs, &wt, 0, RootSet::default()).unwrap();
        let json = serde_json::to_value(CertificateDoc::new(&c)).unwrap();
        assert_eq!(json["kind"], "conic_combination");
        let cone = weight_bound_cone(&rs, &wt, 0, RootSet::default()).unwrap();
        let c = verify_weight_bound_rays(&cone).unwrap();
        let json = serde_json::to_value(CertificateDoc::new(&c)).unwrap();
        assert_eq!(json["kind"], "ray_confirmation");
    }

    #[test]
    fn trace_round_trip() {
        let rs = Arc::new(RootSystem::parse("B3").unwrap());
        let model = SelectionModel::new(rs, &[2, 0, 1]).unwrap();
        let trace = model.sample(11, 9);
        let doc = TraceDoc::new(&trace, &model);
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let back: TraceDoc = serde_json::from_str(&json).unwrap();
        let (again, _) = back.to_trace().unwrap();
        assert_eq!(again.scales(), trace.scales());
        assert_eq!(TraceDoc::new(&again, &model), doc);
    }

    #[test]
    fn inadmissible_import_is_rejected() {
        let rs = Arc::new(RootSystem::parse("A2").unwrap());
        let model = SelectionModel::new(rs, &[0, 1]).unwrap();
        let trace = model.trace_from_scales(&crate::exact::int_vec(&[2, 1]), 5).unwrap();
        let mut doc = TraceDoc::new(&trace, &model);
        doc.levels[0].scale = "1".into();
        assert!(doc.to_trace().is_err());
        let mut doc = TraceDoc::new(&model.sample(3, 5), &model);
        doc.ray_weights.as_mut().unwrap()[0] += 1;
        assert!(doc.to_trace().is_err());
    }
}
