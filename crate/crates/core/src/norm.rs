//! Operator norms of shift powers as exact suprema over the vertex set,
//! norm-attainment reports with witnesses, and weight-limit classification.
//!
//! The supremum of v ↦ ‖Sⁿe_v‖² over an infinite tree is computable exactly
//! because the quantity stabilizes along each ray: past the prefix it is a
//! window product of tail weights, which is constant or strictly monotone.

use num_traits::Zero;
use serde::Serialize;

use crate::rat::{self, Rat};
use crate::tree::{RaySpec, TailDirection, TreeError, ValidatedTree, VertexId};
use crate::word::local_norm_sq;

/// Eventual behavior of a per-vertex quantity along one ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "behavior", rename_all = "snake_case")]
pub enum TailBehavior {
    /// The quantity equals `value_sq` at every ray index ≥ `from_index`.
    EventuallyConstant {
        #[serde(with = "rat::serde_rat")]
        value_sq: Rat,
        from_index: u64,
    },
    /// The quantity is strictly monotone past the prefix with the given limit.
    MonotoneLimit {
        direction: TailDirection,
        #[serde(with = "rat::serde_rat")]
        limit_sq: Rat,
    },
}

/// Per-ray record attached to a supremum result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailEvidence {
    pub ray: String,
    #[serde(flatten)]
    pub tail: TailBehavior,
    /// Whether the tail's eventual value / limit equals the overall supremum.
    pub equals_sup: bool,
}

/// Exact supremum of a squared per-vertex quantity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupResult {
    #[serde(with = "rat::serde_rat")]
    pub value_sq: Rat,
    pub attained: bool,
    pub witness: Option<VertexId>,
    /// Every influence-zone vertex attaining the supremum, canonically ordered.
    pub witnesses: Vec<VertexId>,
    pub tail_evidence: Vec<TailEvidence>,
}

/// End of the influence zone on a ray: the prefix plus `lookahead` extra
/// indices. Beyond this index the per-vertex quantity follows the tail's
/// closed form.
pub fn zone_end(ray: &RaySpec, lookahead: u64) -> u64 {
    (ray.prefix.len() as u64 + lookahead).max(1)
}

/// Core vertices plus the first `zone_end` indices of each ray, in canonical
/// order (core by name, then rays by id and index).
pub fn influence_zone(tree: &ValidatedTree, lookahead: u64) -> Vec<VertexId> {
    let mut zone: Vec<VertexId> = tree.core_vertices().collect();
    for ray in tree.rays() {
        for j in 1..=zone_end(ray, lookahead) {
            zone.push(VertexId::ray(&ray.id, j));
        }
    }
    zone
}

/// Builds a `SupResult` from exact zone values plus per-ray tail behavior.
fn assemble_sup(
    zone_values: Vec<(VertexId, Rat)>,
    tails: Vec<(String, TailBehavior)>,
) -> SupResult {
    let mut sup: Option<Rat> = zone_values.iter().map(|(_, q)| q.clone()).max();
    let mut limit_only = false;
    for (_, tail) in &tails {
        if let TailBehavior::MonotoneLimit {
            direction: TailDirection::Increasing,
            limit_sq,
        } = tail
        {
            // Increasing tails approach their limit strictly from below, so
            // the limit can raise the supremum without being attained.
            if sup.as_ref().is_none_or(|s| limit_sq > s) {
                sup = Some(limit_sq.clone());
                limit_only = true;
            }
        }
    }
    let value_sq = sup.unwrap_or_else(Rat::zero);
    let witnesses: Vec<VertexId> = zone_values
        .iter()
        .filter(|(_, q)| *q == value_sq)
        .map(|(v, _)| v.clone())
        .collect();
    let attained = !limit_only || !witnesses.is_empty();
    let tail_evidence = tails
        .into_iter()
        .map(|(ray, tail)| {
            let eventual = match &tail {
                TailBehavior::EventuallyConstant { value_sq: v, .. } => v,
                TailBehavior::MonotoneLimit { limit_sq, .. } => limit_sq,
            };
            let equals_sup = *eventual == value_sq;
            TailEvidence {
                ray,
                tail,
                equals_sup,
            }
        })
        .collect();
    SupResult {
        value_sq,
        attained: attained && !witnesses.is_empty(),
        witness: witnesses.first().cloned(),
        witnesses,
        tail_evidence,
    }
}

/// ‖Sⁿ‖² = sup_v ‖Sⁿe_v‖², exactly. `n ≥ 1`.
pub fn operator_norm_sq(tree: &ValidatedTree, n: u32) -> Result<SupResult, TreeError> {
    assert!(n >= 1, "operator power must be at least 1");
    let zone = influence_zone(tree, n as u64);
    let mut zone_values = Vec::with_capacity(zone.len());
    for v in zone {
        let q = local_norm_sq(tree, &v, n)?;
        zone_values.push((v, q));
    }
    let mut tails = Vec::new();
    for ray in tree.rays() {
        tails.push((ray.id.clone(), window_product_behavior(ray, n)));
    }
    Ok(assemble_sup(zone_values, tails))
}

/// Behavior of j ↦ ‖Sⁿe_{ray:j}‖² = (λ_{j+1}···λ_{j+n})² past the prefix.
///
/// For a constant tail the window product is c²ⁿ from index `prefix_len` on.
/// For a strictly monotone tail every factor of the window moves the same
/// way as j grows, so the product is strictly monotone with limit L²ⁿ.
fn window_product_behavior(ray: &RaySpec, n: u32) -> TailBehavior {
    let prefix_len = ray.prefix.len() as u64;
    match ray.tail.direction() {
        TailDirection::Constant => TailBehavior::EventuallyConstant {
            value_sq: rat::pow(&ray.tail.limit(), 2 * n),
            from_index: prefix_len.max(1),
        },
        direction => TailBehavior::MonotoneLimit {
            direction,
            limit_sq: rat::pow(&ray.tail.limit(), 2 * n),
        },
    }
}

/// One named identity verified (or not) by an attainment report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Attainment analysis for ‖Sⁿ‖.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttainmentReport {
    pub power: u32,
    pub norm_sq_of_power: SupResult,
    pub attaining_vertices: Vec<VertexId>,
    pub corollary_checks: Vec<NamedCheck>,
}

/// Norm attainment of S itself: attained iff some vertex v has
/// Σ_{u∈chi(v)} λ_u² equal to ‖S‖².
pub fn norm_attainment(tree: &ValidatedTree) -> Result<AttainmentReport, TreeError> {
    let sup = operator_norm_sq(tree, 1)?;
    let mut checks = Vec::new();
    let witness_identity = sup
        .witnesses
        .iter()
        .map(|v| local_norm_sq(tree, v, 1))
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .all(|q| *q == sup.value_sq);
    checks.push(NamedCheck {
        name: "attainment_definition".into(),
        holds: witness_identity && (sup.attained == !sup.witnesses.is_empty()),
        detail: "attained ⇔ some vertex's squared child-weight sum equals the supremum".into(),
    });
    Ok(AttainmentReport {
        power: 1,
        attaining_vertices: sup.witnesses.clone(),
        corollary_checks: checks,
        norm_sq_of_power: sup,
    })
}

/// Attainment analysis for ‖Sⁿ‖, n ∈ {2, 3}, with the identities
/// ‖Sⁿe_v‖² = ‖S‖²ⁿ recorded when they hold at some vertex.
pub fn power_attainment(tree: &ValidatedTree, n: u32) -> Result<AttainmentReport, TreeError> {
    assert!(n == 2 || n == 3, "power attainment is defined for n ∈ {{2, 3}}");
    let base = operator_norm_sq(tree, 1)?;
    let sup = operator_norm_sq(tree, n)?;
    let base_pow = rat::pow(&base.value_sq, n);
    let norm_is_power = sup.value_sq == base_pow;
    let mut checks = vec![NamedCheck {
        name: format!("norm_of_power_{n}_equals_norm_power"),
        holds: norm_is_power,
        detail: format!("‖S^{n}‖² equals (‖S‖²)^{n}"),
    }];
    let witness_at_full_power = if norm_is_power {
        sup.witnesses.first()
    } else {
        None
    };
    checks.push(NamedCheck {
        name: format!("vertex_with_power_{n}_norm_identity"),
        holds: witness_at_full_power.is_some(),
        detail: match witness_at_full_power {
            Some(v) => format!("‖S^{n}e_v‖² = ‖S‖^{} at v = {v}", 2 * n),
            None => format!("no vertex attains ‖S^{n}e_v‖² = ‖S‖^{}", 2 * n),
        },
    });
    Ok(AttainmentReport {
        power: n,
        attaining_vertices: sup.witnesses.clone(),
        corollary_checks: checks,
        norm_sq_of_power: sup,
    })
}

/// Classification of one ray's weight limit against the attainment corollary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum LimitCase {
    /// Constant or decreasing tail: the limit is approached from above (or
    /// trivially attained), the consistent branch of the corollary.
    ApproachedFromAboveOrConstant,
    /// Increasing tail, but some strictly larger weight exists elsewhere.
    LargerWeightExists {
        #[serde(with = "rat::serde_rat")]
        mu: Rat,
        at: VertexId,
    },
    /// Increasing tail and the limit itself occurs as an actual weight. Under
    /// a strict reading of "μ > λ" this branch is outside the corollary's two
    /// cases; the constant sequence at μ = λ witnesses the non-strict reading.
    EqualWeightAttained { at: VertexId },
    /// Increasing tail without any weight ≥ the limit, but the shift is not
    /// norm attaining, so the corollary's hypothesis fails.
    VacuouslyConsistent,
    /// Increasing tail, no weight ≥ the limit, and the shift IS norm
    /// attaining: contradicts the corollary. Regression alarm.
    Falsified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RayLimitClass {
    pub ray: String,
    #[serde(with = "rat::serde_rat")]
    pub limit: Rat,
    #[serde(flatten)]
    pub case: LimitCase,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightLimitReport {
    pub norm_attaining: bool,
    pub rays: Vec<RayLimitClass>,
    /// Non-empty exactly when some ray is classified `Falsified`.
    pub falsified: Vec<String>,
}

/// Per-ray weight-limit classification against the attainment corollary.
pub fn weight_limit_classify(tree: &ValidatedTree) -> Result<WeightLimitReport, TreeError> {
    let norm_attaining = operator_norm_sq(tree, 1)?.attained;
    let mut rays = Vec::new();
    let mut falsified = Vec::new();
    for ray in tree.rays() {
        let limit = ray.tail.limit();
        let (case, note) = match ray.tail.direction() {
            TailDirection::Constant | TailDirection::Decreasing => (
                LimitCase::ApproachedFromAboveOrConstant,
                "limit approached from above or attained by a constant tail".into(),
            ),
            TailDirection::Increasing => {
                if let Some((at, mu)) = find_weight_above(tree, &limit)? {
                    (
                        LimitCase::LargerWeightExists { mu, at },
                        "a strictly larger weight exists elsewhere".into(),
                    )
                } else if !norm_attaining {
                    (
                        LimitCase::VacuouslyConsistent,
                        "shift is not norm attaining; corollary hypothesis fails".into(),
                    )
                } else if let Some(at) = find_weight_equal(tree, &limit)? {
                    (
                        LimitCase::EqualWeightAttained { at },
                        "limit occurs as an actual weight; consistent under the non-strict reading"
                            .into(),
                    )
                } else {
                    falsified.push(format!(
                        "ray {}: increasing to its limit with no weight ≥ the limit while norm attaining",
                        ray.id
                    ));
                    (
                        LimitCase::Falsified,
                        "no weight reaches the limit yet the norm is attained".into(),
                    )
                }
            }
        };
        rays.push(RayLimitClass {
            ray: ray.id.clone(),
            limit,
            case,
            note,
        });
    }
    Ok(WeightLimitReport {
        norm_attaining,
        rays,
        falsified,
    })
}

/// Finds an actual weight strictly above `bound`, if any, with its vertex.
fn find_weight_above(
    tree: &ValidatedTree,
    bound: &Rat,
) -> Result<Option<(VertexId, Rat)>, TreeError> {
    for e in &tree.spec().core_edges {
        if e.weight > *bound {
            return Ok(Some((VertexId::core(&e.child), e.weight.clone())));
        }
    }
    for ray in tree.rays() {
        for (i, w) in ray.prefix.iter().enumerate() {
            if w > bound {
                return Ok(Some((VertexId::ray(&ray.id, i as u64 + 1), w.clone())));
            }
        }
        let first_index = ray.prefix.len() as u64 + 1;
        match ray.tail.direction() {
            TailDirection::Constant | TailDirection::Decreasing => {
                // Maximum tail value is the first one.
                let w = ray.tail.eval(first_index);
                if w > *bound {
                    return Ok(Some((VertexId::ray(&ray.id, first_index), w)));
                }
            }
            TailDirection::Increasing => {
                // Values climb strictly to the tail limit: one exceeds `bound`
                // iff the limit does.
                if ray.tail.limit() > *bound {
                    for (j, w) in tree.tail_values(ray, first_index) {
                        if w > *bound {
                            return Ok(Some((VertexId::ray(&ray.id, j), w)));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Finds a vertex whose weight equals `target` exactly, if any.
fn find_weight_equal(tree: &ValidatedTree, target: &Rat) -> Result<Option<VertexId>, TreeError> {
    for e in &tree.spec().core_edges {
        if e.weight == *target {
            return Ok(Some(VertexId::core(&e.child)));
        }
    }
    for ray in tree.rays() {
        for (i, w) in ray.prefix.iter().enumerate() {
            if w == target {
                return Ok(Some(VertexId::ray(&ray.id, i as u64 + 1)));
            }
        }
        let first_index = ray.prefix.len() as u64 + 1;
        match ray.tail.direction() {
            TailDirection::Constant => {
                if ray.tail.limit() == *target {
                    return Ok(Some(VertexId::ray(&ray.id, first_index)));
                }
            }
            TailDirection::Decreasing | TailDirection::Increasing => {
                // A strictly monotone tail hits `target` at most once; walk
                // until the values pass it.
                for (j, w) in tree.tail_values(ray, first_index) {
                    if w == *target {
                        return Ok(Some(VertexId::ray(&ray.id, j)));
                    }
                    let passed = match ray.tail.direction() {
                        TailDirection::Increasing => w > *target || ray.tail.limit() <= *target,
                        _ => w < *target || ray.tail.limit() >= *target,
                    };
                    if passed {
                        break;
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::rat;
    use crate::tree::{validate_tree, CoreEdge, TailRule, TreeSpec};

    #[test]
    fn two_ray_tree_norm_is_four_attained_at_first_branch_head() {
        let tree = fixtures::fixture_a();
        let sup = operator_norm_sq(&tree, 1).unwrap();
        assert_eq!(sup.value_sq, rat(4, 1));
        assert!(sup.attained);
        assert_eq!(sup.witness, Some(VertexId::ray("r1", 1)));
        // Root contributes 10/81 but is not the sup.
        assert_eq!(local_norm_sq(&tree, &tree.root(), 1).unwrap(), rat(10, 81));
    }

    #[test]
    fn geometric_path_squared_shift_norm_is_a_strict_limit() {
        let tree = fixtures::fixture_c();
        let sup = operator_norm_sq(&tree, 2).unwrap();
        assert_eq!(sup.value_sq, rat(1, 1));
        assert!(!sup.attained);
        assert_eq!(sup.witness, None);
        assert!(matches!(
            sup.tail_evidence[0].tail,
            TailBehavior::MonotoneLimit {
                direction: TailDirection::Increasing,
                ..
            }
        ));
    }

    #[test]
    fn single_vertex_tree_norm_is_zero_attained_at_root() {
        let spec = TreeSpec {
            root: "u0".into(),
            core_edges: vec![],
            rays: vec![],
        };
        let tree = validate_tree(&spec).unwrap();
        for n in 1..=3 {
            let sup = operator_norm_sq(&tree, n).unwrap();
            assert_eq!(sup.value_sq, rat(0, 1));
            assert!(sup.attained);
            assert_eq!(sup.witness, Some(VertexId::core("u0")));
        }
    }

    #[test]
    fn attainment_report_lists_zone_witnesses_for_constant_tails() {
        let tree = fixtures::fixture_a();
        let report = norm_attainment(&tree).unwrap();
        assert!(report.norm_sq_of_power.attained);
        assert!(report
            .attaining_vertices
            .contains(&VertexId::ray("r1", 1)));
        assert!(report
            .attaining_vertices
            .contains(&VertexId::ray("r2", 2)));
        assert!(report.corollary_checks.iter().all(|c| c.holds));
    }

    #[test]
    fn geometric_path_attains_its_norm_at_the_root() {
        let tree = fixtures::fixture_c();
        let report = norm_attainment(&tree).unwrap();
        assert_eq!(report.norm_sq_of_power.value_sq, rat(1, 1));
        assert!(report.norm_sq_of_power.attained);
        assert_eq!(
            report.norm_sq_of_power.witness,
            Some(VertexId::core("1"))
        );
    }

    #[test]
    fn increasing_tail_alone_is_not_norm_attaining() {
        // Weights 1/2, 2/3, 3/4, … = 1 − 1/(j+1), increasing to 1.
        let spec = TreeSpec {
            root: "u0".into(),
            core_edges: vec![],
            rays: vec![crate::tree::RaySpec {
                id: "r".into(),
                attach_at: "u0".into(),
                prefix: vec![],
                tail: TailRule::AffineReciprocal {
                    limit: rat(1, 1),
                    c: rat(1, 1),
                    shift: rat(-1, 1),
                },
            }],
        };
        let tree = validate_tree(&spec).unwrap();
        let report = norm_attainment(&tree).unwrap();
        assert_eq!(report.norm_sq_of_power.value_sq, rat(1, 1));
        assert!(!report.norm_sq_of_power.attained);
        assert!(report.attaining_vertices.is_empty());

        let classify = weight_limit_classify(&tree).unwrap();
        assert_eq!(classify.rays[0].case, LimitCase::VacuouslyConsistent);
        assert!(classify.falsified.is_empty());
    }

    #[test]
    fn increasing_tail_with_larger_core_weight_is_consistent() {
        let spec = TreeSpec {
            root: "u0".into(),
            core_edges: vec![CoreEdge {
                parent: "u0".into(),
                child: "a".into(),
                weight: rat(3, 2),
            }],
            rays: vec![crate::tree::RaySpec {
                id: "r".into(),
                attach_at: "u0".into(),
                prefix: vec![],
                tail: TailRule::AffineReciprocal {
                    limit: rat(1, 1),
                    c: rat(1, 1),
                    shift: rat(-1, 1),
                },
            }],
        };
        let tree = validate_tree(&spec).unwrap();
        let classify = weight_limit_classify(&tree).unwrap();
        assert_eq!(
            classify.rays[0].case,
            LimitCase::LargerWeightExists {
                mu: rat(3, 2),
                at: VertexId::core("a")
            }
        );
    }

    #[test]
    fn constant_tail_limits_fall_in_the_decreasing_or_equal_case() {
        let tree = fixtures::fixture_a();
        let classify = weight_limit_classify(&tree).unwrap();
        assert!(classify.norm_attaining);
        for ray in &classify.rays {
            assert_eq!(ray.limit, rat(2, 1));
            assert_eq!(ray.case, LimitCase::ApproachedFromAboveOrConstant);
        }
    }

    #[test]
    fn geometric_path_limit_equals_an_actual_weight() {
        let tree = fixtures::fixture_c();
        let classify = weight_limit_classify(&tree).unwrap();
        assert!(classify.norm_attaining);
        assert_eq!(
            classify.rays[0].case,
            LimitCase::EqualWeightAttained {
                at: VertexId::ray("path", 1)
            }
        );
        assert!(classify.falsified.is_empty());
    }

    #[test]
    fn increasing_limit_without_any_witness_weight_is_falsified() {
        // Two sibling edges of weight 3/4 make the norm attained at the root
        // (9/16 + 9/16 = 9/8 > 1), while the ray increases to 1 and no single
        // weight reaches 1.
        let spec = TreeSpec {
            root: "u0".into(),
            core_edges: vec![
                CoreEdge {
                    parent: "u0".into(),
                    child: "a".into(),
                    weight: rat(3, 4),
                },
                CoreEdge {
                    parent: "u0".into(),
                    child: "b".into(),
                    weight: rat(3, 4),
                },
            ],
            rays: vec![crate::tree::RaySpec {
                id: "r".into(),
                attach_at: "u0".into(),
                prefix: vec![],
                tail: TailRule::AffineReciprocal {
                    limit: rat(1, 1),
                    c: rat(1, 1),
                    shift: rat(-1, 1),
                },
            }],
        };
        let tree = validate_tree(&spec).unwrap();
        let classify = weight_limit_classify(&tree).unwrap();
        assert!(classify.norm_attaining);
        assert_eq!(classify.rays[0].case, LimitCase::Falsified);
        assert_eq!(classify.falsified.len(), 1);
    }

    #[test]
    fn power_attainment_matches_power_of_norm_on_constant_tails() {
        let a = fixtures::fixture_a();
        let rep = power_attainment(&a, 2).unwrap();
        assert_eq!(rep.norm_sq_of_power.value_sq, rat(16, 1));
        assert!(rep.norm_sq_of_power.attained);
        assert_eq!(rep.norm_sq_of_power.witness, Some(VertexId::ray("r1", 1)));
        assert!(rep.corollary_checks.iter().all(|c| c.holds));

        let b = fixtures::fixture_b();
        let rep = power_attainment(&b, 3).unwrap();
        assert_eq!(rep.norm_sq_of_power.value_sq, rat(4096, 1));
        assert!(rep.norm_sq_of_power.attained);
        assert_eq!(rep.norm_sq_of_power.witness, Some(VertexId::ray("r2", 3)));

        let c = fixtures::fixture_c();
        let rep = power_attainment(&c, 2).unwrap();
        assert!(!rep.norm_sq_of_power.attained);
        assert!(rep.corollary_checks.iter().any(|ch| !ch.holds));
    }
}
