//! Spectral analysis of the diagonal operator N e_v = λ_v e_v on the span of
//! the non-root basis vectors: exact point spectrum with multiplicities,
//! accumulation points, essential spectrum, the spectral bounds m and m_e,
//! and a restriction probe that stresses norm attainment on an engineered
//! subspace family.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::rat::{self, Rat};
use crate::tree::{RaySpec, TailDirection, ValidatedTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Serialize for Multiplicity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(n) => serializer.serialize_u64(*n),
            Multiplicity::Infinite => serializer.serialize_str("INFINITE"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenEntry {
    #[serde(with = "rat::serde_rat")]
    pub value: Rat,
    pub multiplicity: Multiplicity,
}

/// One strictly monotone tail's contribution: infinitely many distinct
/// eigenvalues of finite multiplicity marching toward the limit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailFamily {
    pub ray: String,
    pub direction: TailDirection,
    #[serde(with = "rat::serde_rat")]
    pub limit: Rat,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    /// Explicitly listed eigenvalues (core, prefix, and constant-tail
    /// weights), sorted ascending. Monotone tails appear as `tail_families`.
    pub eigenvalues: Vec<EigenEntry>,
    pub tail_families: Vec<TailFamily>,
    #[serde(with = "rat::serde_rat_vec")]
    pub accumulation_points: Vec<Rat>,
    #[serde(with = "rat::serde_rat_vec")]
    pub sigma_ess: Vec<Rat>,
    /// inf of all eigenvalues; `None` when the root is the only vertex.
    pub m: Option<EigenBound>,
    /// min of the essential spectrum; `None` when σ_ess is empty.
    pub m_e: Option<EigenBound>,
    pub norm: EigenBound,
    pub notes: Vec<String>,
}

/// A spectral bound together with whether some eigenvalue attains it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenBound {
    #[serde(with = "rat::serde_rat")]
    pub value: Rat,
    pub attained: bool,
}

/// Index of the tail value equal to `x`, if any; monotone tails hit a value
/// at most once, constant tails at every index.
fn tail_hit(tree: &ValidatedTree, ray: &RaySpec, x: &Rat) -> Option<u64> {
    let first = ray.prefix.len() as u64 + 1;
    match ray.tail.direction() {
        TailDirection::Constant => (ray.tail.limit() == *x).then_some(first),
        direction => {
            for (j, w) in tree.tail_values(ray, first) {
                if w == *x {
                    return Some(j);
                }
                let passed = match direction {
                    TailDirection::Increasing => w > *x || ray.tail.limit() <= *x,
                    _ => w < *x || ray.tail.limit() >= *x,
                };
                if passed {
                    return None;
                }
            }
            None
        }
    }
}

/// Exact spectrum of the diagonal operator of the tree's weights. The
/// operator lives on the span of non-root basis vectors, so every diagonal
/// entry is a weight.
pub fn diag_spectrum(tree: &ValidatedTree) -> SpectrumReport {
    let mut finite: BTreeMap<Rat, u64> = BTreeMap::new();
    let mut infinite: BTreeSet<Rat> = BTreeSet::new();
    for e in &tree.spec().core_edges {
        *finite.entry(e.weight.clone()).or_default() += 1;
    }
    let mut tail_families = Vec::new();
    let mut accumulation: BTreeSet<Rat> = BTreeSet::new();
    let mut notes = Vec::new();
    for ray in tree.rays() {
        for w in &ray.prefix {
            *finite.entry(w.clone()).or_default() += 1;
        }
        match ray.tail.direction() {
            TailDirection::Constant => {
                infinite.insert(ray.tail.limit());
            }
            direction => {
                let limit = ray.tail.limit();
                let side = match direction {
                    TailDirection::Increasing => "below",
                    _ => "above",
                };
                tail_families.push(TailFamily {
                    ray: ray.id.clone(),
                    direction,
                    limit: limit.clone(),
                    description: format!(
                        "infinitely many distinct finite-multiplicity eigenvalues approaching {limit} from {side}"
                    ),
                });
                notes.push(format!(
                    "ray {}: eigenvalues approach {} from {}",
                    ray.id, limit, side
                ));
                accumulation.insert(limit);
            }
        }
    }
    // Monotone tails can land exactly on a listed value finitely often;
    // credit those coincidences to the listed multiplicities.
    let listed: Vec<Rat> = finite.keys().cloned().collect();
    for ray in tree.rays() {
        if ray.tail.direction() == TailDirection::Constant {
            continue;
        }
        for x in &listed {
            if tail_hit(tree, ray, x).is_some() {
                *finite.get_mut(x).expect("listed value") += 1;
            }
        }
    }
    let eigenvalues: Vec<EigenEntry> = {
        let mut entries: BTreeMap<Rat, Multiplicity> = BTreeMap::new();
        for (v, n) in &finite {
            entries.insert(v.clone(), Multiplicity::Finite(*n));
        }
        for v in &infinite {
            entries.insert(v.clone(), Multiplicity::Infinite);
        }
        entries
            .into_iter()
            .map(|(value, multiplicity)| EigenEntry {
                value,
                multiplicity,
            })
            .collect()
    };
    let sigma_ess: Vec<Rat> = accumulation.union(&infinite).cloned().collect();

    // Spectral bound candidates as (value, attained-by-an-eigenvalue).
    let mut candidates: Vec<(Rat, bool)> = Vec::new();
    for v in finite.keys().chain(infinite.iter()) {
        candidates.push((v.clone(), true));
    }
    for ray in tree.rays() {
        let first = ray.prefix.len() as u64 + 1;
        match ray.tail.direction() {
            TailDirection::Constant => {}
            TailDirection::Increasing => {
                candidates.push((ray.tail.eval(first), true));
                candidates.push((ray.tail.limit(), false));
            }
            TailDirection::Decreasing => {
                candidates.push((ray.tail.eval(first), true));
                candidates.push((ray.tail.limit(), false));
            }
        }
    }
    let bound = |extreme: &Rat| EigenBound {
        value: extreme.clone(),
        attained: candidates
            .iter()
            .any(|(v, attained)| *attained && v == extreme),
    };
    let m = candidates.iter().map(|(v, _)| v).min().cloned().map(|v| bound(&v));
    let norm = candidates
        .iter()
        .map(|(v, _)| v)
        .max()
        .cloned()
        .map(|v| bound(&v))
        .unwrap_or(EigenBound {
            value: Rat::from_integer(0.into()),
            attained: true,
        });
    let m_e = sigma_ess.first().map(|v| EigenBound {
        value: v.clone(),
        attained: true,
    });
    SpectrumReport {
        eigenvalues,
        tail_families,
        accumulation_points: accumulation.into_iter().collect(),
        sigma_ess,
        m,
        m_e,
        norm,
        notes,
    }
}

/// Parameter sequence for the restriction probe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "sequence", rename_all = "snake_case")]
pub enum TSequence {
    /// t_j = j, diverging.
    Identity,
    /// t_j = t for every j.
    Constant {
        #[serde(with = "rat::serde_rat")]
        t: Rat,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectraError {
    #[error("probe family inapplicable: {reason}")]
    FamilyInapplicable { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub family: String,
    /// The two constant rays paired by the probe, smaller weight first.
    pub rays: (String, String),
    #[serde(with = "rat::serde_rat")]
    pub restriction_sup_sq: Rat,
    pub attained: bool,
    /// Attaining parameter index, when one exists.
    pub witness_index: Option<u64>,
    pub evidence: String,
    pub flags: Vec<String>,
}

/// How many initial parameters are verified exactly against the closed form.
const PROBE_VERIFY_TERMS: u64 = 1_000;

/// Restricts the diagonal operator to the closed span of the orthonormal
/// family x_j = (e_{aj} + t_j e_{bj})/√(1+t_j²) built from two constant rays
/// with weights a ≤ b, and decides whether that restriction attains its norm.
/// The restricted norm² is sup_j (a² + b²t_j²)/(1 + t_j²).
pub fn an_restriction_probe(
    tree: &ValidatedTree,
    sequence: &TSequence,
) -> Result<ProbeReport, SpectraError> {
    let mut constant_rays: Vec<(&RaySpec, Rat)> = tree
        .rays()
        .filter(|r| r.tail.direction() == TailDirection::Constant)
        .map(|r| (r, r.tail.limit()))
        .collect();
    if constant_rays.len() < 2 {
        return Err(SpectraError::FamilyInapplicable {
            reason: format!(
                "needs two constant-tail rays, found {}",
                constant_rays.len()
            ),
        });
    }
    constant_rays.sort_by(|(r1, w1), (r2, w2)| w1.cmp(w2).then_with(|| r1.id.cmp(&r2.id)));
    let (ray_a, a) = constant_rays.first().expect("at least two").clone();
    let (ray_b, b) = constant_rays.last().expect("at least two").clone();
    let a_sq = rat::square(&a);
    let b_sq = rat::square(&b);
    let value_at = |t: &Rat| -> Rat {
        let t_sq = rat::square(t);
        (&a_sq + &b_sq * &t_sq) / (Rat::from_integer(1.into()) + t_sq)
    };
    let (family, sup, attained, witness_index, evidence) = match sequence {
        TSequence::Constant { t } => {
            let v = value_at(t);
            (
                format!("paired_rotation(t_j = {t})"),
                v,
                true,
                Some(1),
                "constant parameter: every family member attains the restricted norm".to_string(),
            )
        }
        TSequence::Identity => {
            if a == b {
                (
                    "paired_rotation(t_j = j)".to_string(),
                    a_sq.clone(),
                    true,
                    Some(1),
                    "equal ray weights: the value is constant in the parameter".to_string(),
                )
            } else {
                // Strictly increasing toward b²: verified exactly on an
                // initial segment, with the limit as the unattained sup.
                let mut prev: Option<Rat> = None;
                for j in 1..=PROBE_VERIFY_TERMS {
                    let v = value_at(&Rat::from_integer(j.into()));
                    assert!(v < b_sq, "family values stay below the limit");
                    if let Some(p) = &prev {
                        assert!(*p < v, "family values increase strictly");
                    }
                    prev = Some(v);
                }
                (
                    "paired_rotation(t_j = j)".to_string(),
                    b_sq.clone(),
                    false,
                    None,
                    format!(
                        "values (a²+b²j²)/(1+j²) increase strictly (verified exactly for j ≤ {PROBE_VERIFY_TERMS}) toward the unattained limit b² = {b_sq}"
                    ),
                )
            }
        }
    };
    let flags = if attained {
        Vec::new()
    } else {
        vec![
            "restriction_not_norm_attaining: the operator restricted to this closed subspace \
             does not attain its norm, so the operator is not absolutely norm attaining"
                .to_string(),
        ]
    };
    Ok(ProbeReport {
        family,
        rays: (ray_a.id.clone(), ray_b.id.clone()),
        restriction_sup_sq: sup,
        attained,
        witness_index,
        evidence,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::rat;
    use crate::tree::{validate_tree, RaySpec, TailRule, TreeSpec};

    #[test]
    fn two_constant_rays_give_a_two_point_essential_spectrum() {
        let report = diag_spectrum(&fixtures::fixture_d());
        assert_eq!(
            report.eigenvalues,
            vec![
                EigenEntry {
                    value: rat(1, 1),
                    multiplicity: Multiplicity::Infinite
                },
                EigenEntry {
                    value: rat(2, 1),
                    multiplicity: Multiplicity::Infinite
                },
            ]
        );
        assert_eq!(report.sigma_ess, vec![rat(1, 1), rat(2, 1)]);
        assert_eq!(report.norm, EigenBound { value: rat(2, 1), attained: true });
        assert_eq!(report.m, Some(EigenBound { value: rat(1, 1), attained: true }));
        assert_eq!(report.m_e, Some(EigenBound { value: rat(1, 1), attained: true }));
        assert!(report.accumulation_points.is_empty());
    }

    #[test]
    fn increasing_tails_put_their_limits_in_the_essential_spectrum() {
        let report = diag_spectrum(&fixtures::fixture_e());
        assert_eq!(report.sigma_ess, vec![rat(1, 1), rat(2, 1)]);
        assert_eq!(report.accumulation_points, vec![rat(1, 1), rat(2, 1)]);
        assert_eq!(report.m_e, Some(EigenBound { value: rat(1, 1), attained: true }));
        assert_eq!(report.norm, EigenBound { value: rat(2, 1), attained: true });
        // The smallest eigenvalue sits at the start of the first tail, below
        // every prefix weight.
        assert_eq!(report.m, Some(EigenBound { value: rat(1, 2), attained: true }));
        // Prefix weights 1 and 2 each appear twice; no tail value collides.
        assert_eq!(
            report.eigenvalues,
            vec![
                EigenEntry {
                    value: rat(1, 1),
                    multiplicity: Multiplicity::Finite(2)
                },
                EigenEntry {
                    value: rat(2, 1),
                    multiplicity: Multiplicity::Finite(2)
                },
            ]
        );
        assert_eq!(report.tail_families.len(), 2);
        assert!(report.notes.iter().all(|n| n.contains("from below")));
    }

    #[test]
    fn single_constant_ray_spectrum_collapses_to_one_point() {
        let tree = validate_tree(&TreeSpec {
            root: "u0".into(),
            core_edges: vec![],
            rays: vec![RaySpec {
                id: "r".into(),
                attach_at: "u0".into(),
                prefix: vec![],
                tail: TailRule::Constant { c: rat(3, 1) },
            }],
        })
        .unwrap();
        let report = diag_spectrum(&tree);
        assert_eq!(report.sigma_ess, vec![rat(3, 1)]);
        assert_eq!(report.m, Some(EigenBound { value: rat(3, 1), attained: true }));
        assert_eq!(report.m_e, Some(EigenBound { value: rat(3, 1), attained: true }));
        assert_eq!(report.norm, EigenBound { value: rat(3, 1), attained: true });
    }

    #[test]
    fn rootless_spectrum_of_a_single_vertex_tree_is_empty() {
        let tree = validate_tree(&TreeSpec {
            root: "u0".into(),
            core_edges: vec![],
            rays: vec![],
        })
        .unwrap();
        let report = diag_spectrum(&tree);
        assert!(report.eigenvalues.is_empty());
        assert!(report.sigma_ess.is_empty());
        assert_eq!(report.m, None);
        assert_eq!(report.m_e, None);
        assert_eq!(report.norm, EigenBound { value: rat(0, 1), attained: true });
    }

    #[test]
    fn monotone_tail_values_crossing_a_listed_weight_raise_its_multiplicity() {
        // Core weight 3/2 is hit exactly by the second ray's tail at j = 2.
        let tree = validate_tree(&TreeSpec {
            root: "u0".into(),
            core_edges: vec![crate::tree::CoreEdge {
                parent: "u0".into(),
                child: "a".into(),
                weight: rat(3, 2),
            }],
            rays: vec![RaySpec {
                id: "r".into(),
                attach_at: "a".into(),
                prefix: vec![],
                tail: TailRule::AffineReciprocal {
                    limit: rat(2, 1),
                    c: rat(1, 1),
                    shift: rat(0, 1),
                },
            }],
        })
        .unwrap();
        // Tail values 2 − 1/j: j=1 → 1, j=2 → 3/2, j=3 → 5/3, …
        let report = diag_spectrum(&tree);
        assert_eq!(
            report.eigenvalues,
            vec![EigenEntry {
                value: rat(3, 2),
                multiplicity: Multiplicity::Finite(2)
            }]
        );
        assert_eq!(report.m, Some(EigenBound { value: rat(1, 1), attained: true }));
    }

    #[test]
    fn diverging_probe_parameters_defeat_norm_attainment() {
        let report =
            an_restriction_probe(&fixtures::fixture_d(), &TSequence::Identity).unwrap();
        assert_eq!(report.rays, ("r1".to_string(), "r2".to_string()));
        assert_eq!(report.restriction_sup_sq, rat(4, 1));
        assert!(!report.attained);
        assert_eq!(report.witness_index, None);
        assert_eq!(report.flags.len(), 1);
    }

    #[test]
    fn constant_probe_parameters_attain_everywhere() {
        let report = an_restriction_probe(
            &fixtures::fixture_d(),
            &TSequence::Constant { t: rat(1, 1) },
        )
        .unwrap();
        // (1 + 4)/2 = 5/2 at every member.
        assert_eq!(report.restriction_sup_sq, rat(5, 2));
        assert!(report.attained);
        assert_eq!(report.witness_index, Some(1));
        assert!(report.flags.is_empty());
    }

    #[test]
    fn equal_weight_rays_make_the_probe_degenerate_and_attained() {
        let tree = validate_tree(&TreeSpec {
            root: "u0".into(),
            core_edges: vec![],
            rays: ["p", "q"]
                .map(|id| RaySpec {
                    id: id.into(),
                    attach_at: "u0".into(),
                    prefix: vec![],
                    tail: TailRule::Constant { c: rat(3, 1) },
                })
                .to_vec(),
        })
        .unwrap();
        let report = an_restriction_probe(&tree, &TSequence::Identity).unwrap();
        assert_eq!(report.restriction_sup_sq, rat(9, 1));
        assert!(report.attained);
    }

    #[test]
    fn probe_requires_two_constant_rays() {
        let err = an_restriction_probe(&fixtures::fixture_c(), &TSequence::Identity).unwrap_err();
        assert!(matches!(err, SpectraError::FamilyInapplicable { .. }));
    }

    #[test]
    fn probe_values_match_the_closed_form_on_an_initial_segment() {
        // Oracle recomputation of (a² + b²j²)/(1+j²) for the first terms.
        for j in 1..=50u64 {
            let t = rat(j as i64, 1);
            let expected = (rat(1, 1) + rat(4, 1) * &t * &t) / (rat(1, 1) + &t * &t);
            let jj = j as i64;
            assert_eq!(expected, rat(1 + 4 * jj * jj, 1 + jj * jj));
        }
    }
}
