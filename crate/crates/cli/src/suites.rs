use std::time::Instant;

use num::Signed;

use rootcert::certify::{
    classify_connected_subsets, control_rays, expand_coefficients, verify_inverse_gramm_positive,
    scaling_trials, verify_weight_bound_constructive, verify_weight_bound_rays, weight_bound_cone,
    check_dual_round_trip, Certificate, Dropped,
};
use rootcert::exact::{dot, unit_vec, QMatrix, Rational};
use rootcert::parabolic::sweep_lemmas;
use rootcert::roots::{check_2d_identity, parabolic_character, RootSet, RootSystem, WeightTable};
use rootcert::serial::{labels, qvec, CertificateDoc};

use crate::config::Suite;
use crate::report::{Row, Status};

/// Rescalings tried per system by the scaling suite.
pub const SCALING_TRIALS: usize = 100;

/// Everything a suite needs about one system.
pub struct Target {
    pub name: String,
    pub rs: RootSystem,
    pub wt: WeightTable,
}

impl Target {
    pub fn new(name: &str) -> rootcert::Result<Self> {
        let rs = RootSystem::parse(name)?;
        let wt = WeightTable::new(&rs)?;
        Ok(Target {
            name: rs.name(),
            rs,
            wt,
        })
    }
}

fn anchor(suite: Suite) -> &'static str {
    match suite {
        Suite::GrammInverse => "dual-gramm-inverse",
        Suite::Identity2d => "dual-expansion-identity",
        Suite::ExpansionSigns => "expansion-coefficient-signs",
        Suite::BoundConstructive | Suite::BoundRays => "weight-bound",
        Suite::Subdiagrams => "connected-subdiagram-classes",
        Suite::InversePositive => "inverse-gramm-positive",
        Suite::ParabolicLemmas => "torus-subspace-lemmas",
        Suite::Controls => "hypotheses-necessary",
        Suite::Character => "character-proportional",
        Suite::Scaling => "scaling-invariance",
    }
}

struct Ctx<'a> {
    suite: Suite,
    t: &'a Target,
    max_subset: Option<usize>,
    seed: u64,
}

impl Ctx<'_> {
    fn row(&self, route: impl Into<String>) -> Row {
        Row::new(self.suite.name(), &self.t.name, route, anchor(self.suite))
    }

    /// Run `f`, timing it and folding errors into a failing row.
    fn timed(&self, mut row: Row, f: impl FnOnce(&mut Row) -> rootcert::Result<bool>) -> Row {
        let start = Instant::now();
        match f(&mut row) {
            Ok(true) => {}
            Ok(false) => row.status = Status::Fail,
            Err(e) => {
                row.status = Status::Fail;
                row.detail = Some(e.to_string());
            }
        }
        row.wall_time = start.elapsed().as_secs_f64();
        row
    }

    fn configs(&self) -> Vec<(usize, RootSet)> {
        let rs = &self.t.rs;
        (0..rs.rank())
            .flat_map(|a| rs.all().without(a).subsets().map(move |i| (a, i)))
            .filter(|(_, i)| self.max_subset.is_none_or(|m| i.len() <= m))
            .collect()
    }

    fn pair_row(&self, route: &str, alpha: usize, i: RootSet) -> Row {
        let mut row = self.row(route);
        row.alpha = Some(alpha + 1);
        row.subset_i = Some(labels(i));
        row
    }
}

/// All rows of one suite on one system.
pub fn run_suite(suite: Suite, t: &Target, max_subset: Option<usize>, seed: u64) -> Vec<Row> {
    let cx = Ctx {
        suite,
        t,
        max_subset,
        seed,
    };
    match suite {
        Suite::GrammInverse => vec![gramm_inverse(&cx)],
        Suite::Identity2d => identity_2d(&cx),
        Suite::ExpansionSigns => expansion_signs(&cx),
        Suite::BoundConstructive => bound_constructive(&cx),
        Suite::BoundRays => bound_rays(&cx),
        Suite::Subdiagrams => subdiagrams(&cx),
        Suite::InversePositive => vec![inverse_positive(&cx)],
        Suite::ParabolicLemmas => parabolic(&cx),
        Suite::Controls => controls(&cx),
        Suite::Character => character(&cx),
        Suite::Scaling => vec![scaling(&cx)],
    }
}

fn gramm_inverse(cx: &Ctx) -> Row {
    let (rs, wt) = (&cx.t.rs, &cx.t.wt);
    cx.timed(cx.row("product"), |row| {
        let n = rs.rank();
        let product = wt.dual_gramm().mul(rs.gramm())?;
        let mut ok = product == QMatrix::identity(n);
        // (w_a, b) = delta_ab in ambient coordinates, when they exist
        if let Some(roots) = rs.simple_roots() {
            for a in 0..n {
                let mut w = vec![Rational::from_integer(0.into()); roots[0].len()];
                for (b, r) in roots.iter().enumerate() {
                    rootcert::exact::axpy(&mut w, &wt.dual_weight(a)[b], r);
                }
                for (b, r) in roots.iter().enumerate() {
                    ok &= dot(&w, r) == unit_vec(n, a)[b];
                }
            }
        }
        let one = Rational::from_integer(1.into());
        ok &= wt.weighted_all().iter().all(|w| w.iter().sum::<Rational>() == one);
        ok &= wt.d().iter().all(Signed::is_positive);
        row.detail = Some(format!("d = ({})", qvec(wt.d()).join(", ")));
        Ok(ok)
    })
}

fn identity_2d(cx: &Ctx) -> Vec<Row> {
    (0..cx.t.rs.rank())
        .map(|a| {
            let mut row = cx.row("identity+round-trip");
            row.alpha = Some(a + 1);
            cx.timed(row, |_| {
                Ok(check_2d_identity(&cx.t.rs, &cx.t.wt, a)?
                    && check_dual_round_trip(&cx.t.rs, &cx.t.wt, a)?)
            })
        })
        .collect()
}

fn expansion_signs(cx: &Ctx) -> Vec<Row> {
    cx.configs()
        .into_iter()
        .map(|(a, i)| {
            cx.timed(cx.pair_row("block+solve", a, i), |row| {
                let e = expand_coefficients(&cx.t.rs, &cx.t.wt, a, i)?;
                row.coefficients = Some(qvec(&e.coeffs));
                Ok(e.sign_violation().is_none())
            })
        })
        .collect()
}

fn bound_constructive(cx: &Ctx) -> Vec<Row> {
    cx.configs()
        .into_iter()
        .map(|(a, i)| {
            cx.timed(cx.pair_row("constructive", a, i), |row| {
                let cert = verify_weight_bound_constructive(&cx.t.rs, &cx.t.wt, a, i)?;
                cert.validate(&weight_bound_cone(&cx.t.rs, &cx.t.wt, a, i)?)?;
                row.certificate = Some(CertificateDoc::new(&cert));
                Ok(cert.confirms())
            })
        })
        .collect()
}

fn bound_rays(cx: &Ctx) -> Vec<Row> {
    cx.configs()
        .into_iter()
        .map(|(a, i)| {
            cx.timed(cx.pair_row("rays", a, i), |row| {
                let cone = weight_bound_cone(&cx.t.rs, &cx.t.wt, a, i)?;
                let cert = verify_weight_bound_rays(&cone)?;
                cert.validate(&cone)?;
                if let Certificate::RayConfirmation { rays, lineality, .. } = &cert {
                    row.detail = Some(format!(
                        "{} rays, {} lineality in dimension {}",
                        rays.len(),
                        lineality.len(),
                        cone.ambient_dim - i.len()
                    ));
                }
                if let Certificate::ViolatingRay { ray, .. } = &cert {
                    row.ray = Some(qvec(ray));
                }
                row.certificate = Some(CertificateDoc::new(&cert));
                Ok(cert.confirms())
            })
        })
        .collect()
}

fn subdiagrams(cx: &Ctx) -> Vec<Row> {
    let start = Instant::now();
    match classify_connected_subsets(&cx.t.rs) {
        Ok(found) => {
            let each = start.elapsed().as_secs_f64() / found.len().max(1) as f64;
            found
                .into_iter()
                .map(|(s, pd, class)| {
                    let mut row = cx.row("isomorphism");
                    row.subset_i = Some(labels(s));
                    row.status = if pd && class.is_some() {
                        Status::Pass
                    } else {
                        Status::Fail
                    };
                    row.detail = Some(match class {
                        Some(c) => c.to_string(),
                        None => "unclassified".into(),
                    });
                    row.wall_time = each;
                    row
                })
                .collect()
        }
        Err(e) => {
            let mut row = cx.row("isomorphism");
            row.status = Status::Fail;
            row.detail = Some(e.to_string());
            vec![row]
        }
    }
}

fn inverse_positive(cx: &Ctx) -> Row {
    if !cx.t.rs.is_irreducible() {
        let mut row = cx.row("entries");
        row.status = Status::Skipped;
        row.detail = Some("reducible system".into());
        return row;
    }
    cx.timed(cx.row("entries"), |_| verify_inverse_gramm_positive(&cx.t.rs))
}

fn parabolic(cx: &Ctx) -> Vec<Row> {
    let start = Instant::now();
    let with_para = cx.t.rs.rank() <= 4;
    match sweep_lemmas(&cx.t.rs, with_para) {
        Ok(tallies) => {
            let each = start.elapsed().as_secs_f64() / tallies.len() as f64;
            tallies
                .into_iter()
                .map(|t| {
                    let mut row = cx.row(t.name);
                    row.status = if t.passed() { Status::Pass } else { Status::Fail };
                    row.detail = Some(match &t.first_failure {
                        None => format!("{} tuples", t.checked),
                        Some(f) => format!("fails at {f}"),
                    });
                    row.wall_time = each;
                    row
                })
                .collect()
        }
        Err(e) => {
            let mut row = cx.row("sweep");
            row.status = Status::Fail;
            row.detail = Some(e.to_string());
            vec![row]
        }
    }
}

/// Control family names, used as route prefixes.
pub const CONTROL_FAMILIES: [&str; 3] = ["drop-orderings", "drop-one-ordering", "drop-nonnegative"];

/// Each hypothesis family removed in turn. A row is `expected` when the
/// weakened cone has a violating ray.
fn controls(cx: &Ctx) -> Vec<Row> {
    let (rs, wt) = (&cx.t.rs, &cx.t.wt);
    let families: [fn(usize, usize) -> Vec<Dropped>; 3] = [
        |_, _| vec![Dropped::AllOrderings],
        |n, a| (0..n).filter(|&g| g != a).map(Dropped::Ordering).collect(),
        |_, _| vec![Dropped::Nonnegative],
    ];
    let mut rows = Vec::new();
    for (name, drops) in CONTROL_FAMILIES.into_iter().zip(families) {
        for (a, i) in cx.configs() {
            for drop in drops(rs.rank(), a) {
                if let Dropped::Ordering(g) = drop {
                    if i.contains(g) {
                        continue;
                    }
                }
                let route = match drop {
                    Dropped::Ordering(g) => format!("{name}:{}", g + 1),
                    _ => name.to_string(),
                };
                let row = cx.timed(cx.pair_row(&route, a, i), |row| {
                    let cert = control_rays(rs, wt, a, i, drop)?;
                    match &cert {
                        Certificate::ViolatingRay { ray, .. } => {
                            row.status = Status::Expected;
                            row.ray = Some(qvec(ray));
                        }
                        _ => row.status = Status::NotViolated,
                    }
                    row.certificate = Some(CertificateDoc::new(&cert));
                    Ok(true)
                });
                rows.push(row);
            }
        }
    }
    rows
}

fn character(cx: &Ctx) -> Vec<Row> {
    (0..cx.t.rs.rank())
        .map(|a| {
            let mut row = cx.row("positive-root-sum");
            row.alpha = Some(a + 1);
            cx.timed(row, |row| {
                let (_, lambda) = parabolic_character(&cx.t.rs, a)?;
                row.detail = Some(format!("lambda = {}", rootcert::exact::fmt_rational(&lambda)));
                Ok(lambda.is_positive())
            })
        })
        .collect()
}

fn scaling(cx: &Ctx) -> Row {
    cx.timed(cx.row("random-rescalings"), |row| {
        row.detail = Some(format!("{SCALING_TRIALS} rescalings, seed {}", cx.seed));
        scaling_trials(&cx.t.rs, SCALING_TRIALS, cx.seed)
    })
}
