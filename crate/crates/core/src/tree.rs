//! Rooted directed trees with finitely many attached infinite rays and exact
//! positive rational edge weights.
//!
//! A tree is described by a finite core (root plus explicitly listed edges)
//! and a list of rays. A ray is an infinite path hanging off a core vertex;
//! its weights are an explicit finite prefix followed by a closed-form tail.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize, Serializer};

use crate::rat::{self, Rat};

/// Identifies a vertex: either a named core vertex or the `index`-th vertex
/// (1-based) of a ray.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexId {
    Core(String),
    Ray { ray: String, index: u64 },
}

impl VertexId {
    pub fn core(name: impl Into<String>) -> Self {
        VertexId::Core(name.into())
    }

    pub fn ray(ray: impl Into<String>, index: u64) -> Self {
        VertexId::Ray {
            ray: ray.into(),
            index,
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Core(name) => write!(f, "{name}"),
            VertexId::Ray { ray, index } => write!(f, "{ray}:{index}"),
        }
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

/// Closed-form rule for ray weights past the prefix. `j` is the 1-based ray index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailRule {
    /// λ_j = c.
    Constant {
        #[serde(with = "rat::serde_rat")]
        c: Rat,
    },
    /// λ_j = limit − c/(j − shift). Requires shift < first tail index.
    AffineReciprocal {
        #[serde(with = "rat::serde_rat")]
        limit: Rat,
        #[serde(with = "rat::serde_rat")]
        c: Rat,
        #[serde(with = "rat::serde_rat")]
        shift: Rat,
    },
    /// λ_j = limit − c·ratio^j with 0 < ratio < 1.
    GeometricApproach {
        #[serde(with = "rat::serde_rat")]
        limit: Rat,
        #[serde(with = "rat::serde_rat")]
        c: Rat,
        #[serde(with = "rat::serde_rat")]
        ratio: Rat,
    },
}

/// Direction of a validated tail, as a sequence in the index `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailDirection {
    Constant,
    /// Strictly increasing, approaching the limit from below.
    Increasing,
    /// Strictly decreasing, approaching the limit from above.
    Decreasing,
}

impl TailRule {
    /// Weight at ray index `j` (only meaningful for `j` past the prefix).
    pub fn eval(&self, j: u64) -> Rat {
        let j_rat = Rat::from_integer(j.into());
        match self {
            TailRule::Constant { c } => c.clone(),
            TailRule::AffineReciprocal { limit, c, shift } => limit - c / (j_rat - shift),
            TailRule::GeometricApproach { limit, c, ratio } => {
                limit - c * rat::pow(ratio, u32::try_from(j).expect("ray index fits in u32"))
            }
        }
    }

    /// Limit of the tail values as j → ∞.
    pub fn limit(&self) -> Rat {
        match self {
            TailRule::Constant { c } => c.clone(),
            TailRule::AffineReciprocal { limit, .. } | TailRule::GeometricApproach { limit, .. } => {
                limit.clone()
            }
        }
    }

    /// Monotonicity of the values in `j`, decided from the sign of `c`.
    pub fn direction(&self) -> TailDirection {
        let c = match self {
            TailRule::Constant { .. } => return TailDirection::Constant,
            TailRule::AffineReciprocal { c, .. } => c,
            TailRule::GeometricApproach { c, .. } => c,
        };
        if c.is_zero() {
            TailDirection::Constant
        } else if c > &Rat::zero() {
            TailDirection::Increasing
        } else {
            TailDirection::Decreasing
        }
    }
}

/// An infinite ray: attaches to a core vertex, carries an explicit weight
/// prefix and then a closed-form tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaySpec {
    pub id: String,
    pub attach_at: String,
    #[serde(with = "rat::serde_rat_vec")]
    pub prefix: Vec<Rat>,
    pub tail: TailRule,
}

/// One weighted edge of the finite core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreEdge {
    pub parent: String,
    pub child: String,
    #[serde(with = "rat::serde_rat")]
    pub weight: Rat,
}

/// Raw description of a tree as read from a file or built in code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub root: String,
    pub core_edges: Vec<CoreEdge>,
    pub rays: Vec<RaySpec>,
}

impl TreeSpec {
    pub fn from_json_str(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("tree spec serializes");
        out.push('\n');
        out
    }
}

/// Structural validation failures. Each names the offending vertex or ray.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("multiple roots: vertex `{vertex}` has no parent and is not the declared root")]
    MultipleRoots { vertex: String },
    #[error("cycle through vertex `{vertex}`")]
    Cycle { vertex: String },
    #[error("orphan vertex: ray `{ray}` attaches at `{attach_at}`, which is not a core vertex")]
    OrphanVertex { ray: String, attach_at: String },
    #[error("non-positive weight at vertex `{vertex}`")]
    NonPositiveWeight { vertex: String },
    #[error("tail pole: ray `{ray}` has shift {shift} ≥ first tail index {first_index}")]
    TailPole {
        ray: String,
        shift: String,
        first_index: u64,
    },
    #[error("non-monotone tail on ray `{ray}`: {reason}")]
    NonMonotoneTail { ray: String, reason: String },
    #[error("unknown vertex `{vertex}`")]
    UnknownVertex { vertex: String },
    #[error("vertex `{vertex}` has more than one parent")]
    DuplicateParent { vertex: String },
    #[error("duplicate ray id `{ray}`")]
    DuplicateRay { ray: String },
}

/// Result of `resolve`: the local neighbourhood of one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolved {
    pub parent: Option<VertexId>,
    /// Incoming edge weight; absent exactly at the root.
    pub weight: Option<Rat>,
    pub children: Vec<VertexId>,
}

/// A structurally validated tree. Immutable; all vertex queries are total on
/// valid ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedTree {
    spec: TreeSpec,
    /// Children of each core vertex, canonically ordered: core children by
    /// name, then first ray vertices by ray id.
    core_children: BTreeMap<String, Vec<VertexId>>,
    /// child name → (parent name, weight) for non-root core vertices.
    core_parent: BTreeMap<String, (String, Rat)>,
    core_depth: BTreeMap<String, u64>,
    rays: BTreeMap<String, RaySpec>,
}

/// Validates a spec and builds the lookup tables.
pub fn validate_tree(spec: &TreeSpec) -> Result<ValidatedTree, TreeError> {
    let root = spec.root.clone();

    // Core vertex set and parent table.
    let mut names: BTreeSet<String> = BTreeSet::new();
    names.insert(root.clone());
    for e in &spec.core_edges {
        names.insert(e.parent.clone());
        names.insert(e.child.clone());
    }

    let mut core_parent: BTreeMap<String, (String, Rat)> = BTreeMap::new();
    for e in &spec.core_edges {
        if e.child == root {
            return Err(TreeError::Cycle { vertex: root });
        }
        if core_parent
            .insert(e.child.clone(), (e.parent.clone(), e.weight.clone()))
            .is_some()
        {
            return Err(TreeError::DuplicateParent {
                vertex: e.child.clone(),
            });
        }
    }

    for name in &names {
        if *name != root && !core_parent.contains_key(name) {
            return Err(TreeError::MultipleRoots {
                vertex: name.clone(),
            });
        }
    }

    // Reachability from the root; anything unreached sits on a cycle.
    let mut children_names: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for e in &spec.core_edges {
        children_names
            .entry(e.parent.clone())
            .or_default()
            .push(e.child.clone());
    }
    let mut reached: BTreeSet<String> = BTreeSet::new();
    let mut stack = vec![root.clone()];
    while let Some(v) = stack.pop() {
        if reached.insert(v.clone()) {
            if let Some(kids) = children_names.get(&v) {
                stack.extend(kids.iter().cloned());
            }
        }
    }
    if let Some(unreached) = names.iter().find(|n| !reached.contains(*n)) {
        return Err(TreeError::Cycle {
            vertex: unreached.clone(),
        });
    }

    for e in &spec.core_edges {
        if !rat::is_positive(&e.weight) {
            return Err(TreeError::NonPositiveWeight {
                vertex: e.child.clone(),
            });
        }
    }

    // Rays: unique ids, valid attach points, positive prefix, sound tail.
    let mut rays: BTreeMap<String, RaySpec> = BTreeMap::new();
    for ray in &spec.rays {
        if rays.contains_key(&ray.id) {
            return Err(TreeError::DuplicateRay {
                ray: ray.id.clone(),
            });
        }
        if !names.contains(&ray.attach_at) {
            return Err(TreeError::OrphanVertex {
                ray: ray.id.clone(),
                attach_at: ray.attach_at.clone(),
            });
        }
        for (i, w) in ray.prefix.iter().enumerate() {
            if !rat::is_positive(w) {
                return Err(TreeError::NonPositiveWeight {
                    vertex: VertexId::ray(&ray.id, i as u64 + 1).to_string(),
                });
            }
        }
        validate_tail(ray)?;
        rays.insert(ray.id.clone(), ray.clone());
    }

    // Canonical spec: edges by (parent, child), rays by id.
    let mut canonical = spec.clone();
    canonical
        .core_edges
        .sort_by(|a, b| (&a.parent, &a.child).cmp(&(&b.parent, &b.child)));
    canonical.rays.sort_by(|a, b| a.id.cmp(&b.id));

    // Child lists: core children by name, then ray heads by ray id.
    let mut core_children: BTreeMap<String, Vec<VertexId>> = BTreeMap::new();
    for name in &names {
        core_children.insert(name.clone(), Vec::new());
    }
    for e in &canonical.core_edges {
        core_children
            .get_mut(&e.parent)
            .expect("parent present")
            .push(VertexId::core(&e.child));
    }
    for kids in core_children.values_mut() {
        kids.sort();
    }
    for ray in canonical.rays.iter() {
        core_children
            .get_mut(&ray.attach_at)
            .expect("attach point present")
            .push(VertexId::ray(&ray.id, 1));
    }

    let mut core_depth: BTreeMap<String, u64> = BTreeMap::new();
    core_depth.insert(root.clone(), 0);
    let mut queue = vec![root.clone()];
    while let Some(v) = queue.pop() {
        let d = core_depth[&v];
        if let Some(kids) = children_names.get(&v) {
            for k in kids {
                core_depth.insert(k.clone(), d + 1);
                queue.push(k.clone());
            }
        }
    }

    Ok(ValidatedTree {
        spec: canonical,
        core_children,
        core_parent,
        core_depth,
        rays,
    })
}

fn validate_tail(ray: &RaySpec) -> Result<(), TreeError> {
    let first_index = ray.prefix.len() as u64 + 1;
    let first_name = |j: u64| VertexId::ray(&ray.id, j).to_string();
    match &ray.tail {
        TailRule::Constant { c } => {
            if !rat::is_positive(c) {
                return Err(TreeError::NonPositiveWeight {
                    vertex: first_name(first_index),
                });
            }
        }
        TailRule::AffineReciprocal { limit, c, shift } => {
            if shift >= &Rat::from_integer(first_index.into()) {
                return Err(TreeError::TailPole {
                    ray: ray.id.clone(),
                    shift: rat::format_rat(shift),
                    first_index,
                });
            }
            check_monotone_positivity(ray, limit, c, first_index)?;
        }
        TailRule::GeometricApproach { limit, c, ratio } => {
            if !rat::is_positive(ratio) || ratio >= &Rat::from_integer(1.into()) {
                return Err(TreeError::NonMonotoneTail {
                    ray: ray.id.clone(),
                    reason: format!("ratio {} outside (0, 1)", rat::format_rat(ratio)),
                });
            }
            check_monotone_positivity(ray, limit, c, first_index)?;
        }
    }
    Ok(())
}

/// Positivity over the whole (infinite) tail, decided from monotonicity:
/// increasing tails need a positive first value, decreasing tails a
/// nonnegative limit, constant-parameter tails a positive limit.
fn check_monotone_positivity(
    ray: &RaySpec,
    limit: &Rat,
    c: &Rat,
    first_index: u64,
) -> Result<(), TreeError> {
    let first_value = ray.tail.eval(first_index);
    let offender = || TreeError::NonPositiveWeight {
        vertex: VertexId::ray(&ray.id, first_index).to_string(),
    };
    if c.is_zero() {
        if !rat::is_positive(limit) {
            return Err(offender());
        }
    } else if rat::is_positive(c) {
        if !rat::is_positive(&first_value) {
            return Err(offender());
        }
    } else if limit < &Rat::zero() {
        // Decreasing towards a negative limit: some deep weight goes ≤ 0.
        return Err(TreeError::NonPositiveWeight {
            vertex: format!("{} (deep tail)", VertexId::ray(&ray.id, first_index)),
        });
    } else if !rat::is_positive(&first_value) {
        return Err(offender());
    }
    Ok(())
}

impl ValidatedTree {
    pub fn spec(&self) -> &TreeSpec {
        &self.spec
    }

    pub fn root(&self) -> VertexId {
        VertexId::core(&self.spec.root)
    }

    pub fn is_root(&self, v: &VertexId) -> bool {
        matches!(v, VertexId::Core(name) if *name == self.spec.root)
    }

    /// All core vertices in canonical (name) order.
    pub fn core_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.core_children.keys().map(VertexId::core)
    }

    pub fn core_vertex_count(&self) -> usize {
        self.core_children.len()
    }

    /// Rays in canonical (id) order.
    pub fn rays(&self) -> impl Iterator<Item = &RaySpec> {
        self.rays.values()
    }

    pub fn ray(&self, id: &str) -> Option<&RaySpec> {
        self.rays.get(id)
    }

    fn check_known(&self, v: &VertexId) -> Result<(), TreeError> {
        match v {
            VertexId::Core(name) => {
                if self.core_children.contains_key(name) {
                    Ok(())
                } else {
                    Err(TreeError::UnknownVertex {
                        vertex: v.to_string(),
                    })
                }
            }
            VertexId::Ray { ray, index } => {
                if *index >= 1 && self.rays.contains_key(ray) {
                    Ok(())
                } else {
                    Err(TreeError::UnknownVertex {
                        vertex: v.to_string(),
                    })
                }
            }
        }
    }

    /// Parent, incoming weight and children of `v`.
    pub fn resolve(&self, v: &VertexId) -> Result<Resolved, TreeError> {
        self.check_known(v)?;
        Ok(Resolved {
            parent: self.parent(v)?,
            weight: self.weight(v)?,
            children: self.children(v)?,
        })
    }

    pub fn parent(&self, v: &VertexId) -> Result<Option<VertexId>, TreeError> {
        self.check_known(v)?;
        Ok(match v {
            VertexId::Core(name) => self
                .core_parent
                .get(name)
                .map(|(p, _)| VertexId::core(p)),
            VertexId::Ray { ray, index } => Some(if *index == 1 {
                VertexId::core(&self.rays[ray].attach_at)
            } else {
                VertexId::ray(ray, index - 1)
            }),
        })
    }

    /// Weight of the edge into `v`; `None` exactly at the root.
    pub fn weight(&self, v: &VertexId) -> Result<Option<Rat>, TreeError> {
        self.check_known(v)?;
        Ok(match v {
            VertexId::Core(name) => self.core_parent.get(name).map(|(_, w)| w.clone()),
            VertexId::Ray { ray, index } => Some(self.ray_weight(&self.rays[ray], *index)),
        })
    }

    /// Weight at 1-based index `j` of a ray: prefix entry or tail value.
    pub fn ray_weight(&self, ray: &RaySpec, j: u64) -> Rat {
        debug_assert!(j >= 1);
        if j <= ray.prefix.len() as u64 {
            ray.prefix[(j - 1) as usize].clone()
        } else {
            ray.tail.eval(j)
        }
    }

    pub fn children(&self, v: &VertexId) -> Result<Vec<VertexId>, TreeError> {
        self.check_known(v)?;
        Ok(match v {
            VertexId::Core(name) => self.core_children[name].clone(),
            VertexId::Ray { ray, index } => vec![VertexId::ray(ray, index + 1)],
        })
    }

    pub fn depth(&self, v: &VertexId) -> Result<u64, TreeError> {
        self.check_known(v)?;
        Ok(match v {
            VertexId::Core(name) => self.core_depth[name],
            VertexId::Ray { ray, index } => self.core_depth[&self.rays[ray].attach_at] + index,
        })
    }

    /// Exact weights along a ray starting at index `from`, computed
    /// incrementally (geometric powers are built by one multiplication per
    /// step rather than re-exponentiating).
    pub fn tail_values<'a>(
        &'a self,
        ray: &'a RaySpec,
        from: u64,
    ) -> impl Iterator<Item = (u64, Rat)> + 'a {
        let mut geom_pow = match &ray.tail {
            TailRule::GeometricApproach { ratio, .. } => {
                Some(rat::pow(ratio, u32::try_from(from).expect("index fits u32")))
            }
            _ => None,
        };
        (from..).map(move |j| {
            let w = if j <= ray.prefix.len() as u64 {
                ray.prefix[(j - 1) as usize].clone()
            } else {
                match &ray.tail {
                    TailRule::Constant { c } => c.clone(),
                    TailRule::AffineReciprocal { limit, c, shift } => {
                        limit - c / (Rat::from_integer(j.into()) - shift)
                    }
                    TailRule::GeometricApproach { limit, c, ratio } => {
                        let p = geom_pow.as_ref().expect("geometric power initialized");
                        let value = limit - c * p;
                        geom_pow = Some(p * ratio);
                        value
                    }
                }
            };
            // Keep the incremental geometric power in lockstep inside the prefix.
            if j <= ray.prefix.len() as u64 {
                if let (Some(p), TailRule::GeometricApproach { ratio, .. }) =
                    (geom_pow.as_mut(), &ray.tail)
                {
                    *p *= ratio;
                }
            }
            (j, w)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{parse_rat, rat};

    fn spec_a() -> TreeSpec {
        TreeSpec {
            root: "u0".into(),
            core_edges: vec![],
            rays: vec![
                RaySpec {
                    id: "r1".into(),
                    attach_at: "u0".into(),
                    prefix: vec![rat(1, 9)],
                    tail: TailRule::Constant { c: rat(2, 1) },
                },
                RaySpec {
                    id: "r2".into(),
                    attach_at: "u0".into(),
                    prefix: vec![rat(1, 3), rat(1, 4)],
                    tail: TailRule::Constant { c: rat(2, 1) },
                },
            ],
        }
    }

    #[test]
    fn single_root_no_edges_is_a_valid_tree() {
        let spec = TreeSpec {
            root: "u0".into(),
            core_edges: vec![],
            rays: vec![],
        };
        let tree = validate_tree(&spec).unwrap();
        assert_eq!(tree.core_vertex_count(), 1);
        let r = tree.resolve(&tree.root()).unwrap();
        assert_eq!(r.parent, None);
        assert_eq!(r.weight, None);
        assert!(r.children.is_empty());
    }

    #[test]
    fn two_ray_example_tree_validates() {
        let tree = validate_tree(&spec_a()).unwrap();
        let root = tree.resolve(&tree.root()).unwrap();
        assert_eq!(
            root.children,
            vec![VertexId::ray("r1", 1), VertexId::ray("r2", 1)]
        );
        assert_eq!(root.weight, None);
    }

    #[test]
    fn ray_vertices_resolve_with_prefix_then_tail_weights() {
        let tree = validate_tree(&spec_a()).unwrap();
        let v = VertexId::ray("r2", 2);
        let r = tree.resolve(&v).unwrap();
        assert_eq!(r.parent, Some(VertexId::ray("r2", 1)));
        assert_eq!(r.weight, Some(rat(1, 4)));
        assert_eq!(r.children, vec![VertexId::ray("r2", 3)]);
        assert_eq!(
            tree.weight(&VertexId::ray("r2", 7)).unwrap(),
            Some(rat(2, 1))
        );
    }

    #[test]
    fn affine_tail_with_pole_at_first_index_is_rejected() {
        let spec = TreeSpec {
            root: "u0".into(),
            core_edges: vec![],
            rays: vec![RaySpec {
                id: "r".into(),
                attach_at: "u0".into(),
                prefix: vec![],
                tail: TailRule::AffineReciprocal {
                    limit: rat(1, 1),
                    c: rat(1, 1),
                    shift: rat(1, 1),
                },
            }],
        };
        assert!(matches!(
            validate_tree(&spec),
            Err(TreeError::TailPole { first_index: 1, .. })
        ));
    }

    #[test]
    fn geometric_ratio_outside_unit_interval_is_rejected() {
        for ratio in [rat(3, 2), rat(-1, 2), rat(1, 1)] {
            let spec = TreeSpec {
                root: "u0".into(),
                core_edges: vec![],
                rays: vec![RaySpec {
                    id: "r".into(),
                    attach_at: "u0".into(),
                    prefix: vec![],
                    tail: TailRule::GeometricApproach {
                        limit: rat(1, 1),
                        c: rat(1, 2),
                        ratio,
                    },
                }],
            };
            assert!(matches!(
                validate_tree(&spec),
                Err(TreeError::NonMonotoneTail { .. })
            ));
        }
    }

    #[test]
    fn increasing_tail_with_nonpositive_first_value_is_rejected() {
        // 1 − 1/j at j = 1 evaluates to 0.
        let spec = TreeSpec {
            root: "u0".into(),
            core_edges: vec![],
            rays: vec![RaySpec {
                id: "r".into(),
                attach_at: "u0".into(),
                prefix: vec![],
                tail: TailRule::AffineReciprocal {
                    limit: rat(1, 1),
                    c: rat(1, 1),
                    shift: rat(0, 1),
                },
            }],
        };
        assert!(matches!(
            validate_tree(&spec),
            Err(TreeError::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn structural_defects_name_the_offender() {
        let orphan = TreeSpec {
            root: "u0".into(),
            core_edges: vec![],
            rays: vec![RaySpec {
                id: "r".into(),
                attach_at: "nowhere".into(),
                prefix: vec![rat(1, 1)],
                tail: TailRule::Constant { c: rat(1, 1) },
            }],
        };
        assert!(matches!(
            validate_tree(&orphan),
            Err(TreeError::OrphanVertex { .. })
        ));

        let second_root = TreeSpec {
            root: "u0".into(),
            core_edges: vec![CoreEdge {
                parent: "other".into(),
                child: "a".into(),
                weight: rat(1, 1),
            }],
            rays: vec![],
        };
        assert_eq!(
            validate_tree(&second_root),
            Err(TreeError::MultipleRoots {
                vertex: "other".into()
            })
        );

        let two_parents = TreeSpec {
            root: "u0".into(),
            core_edges: vec![
                CoreEdge {
                    parent: "u0".into(),
                    child: "a".into(),
                    weight: rat(1, 1),
                },
                CoreEdge {
                    parent: "u0".into(),
                    child: "b".into(),
                    weight: rat(1, 1),
                },
                CoreEdge {
                    parent: "b".into(),
                    child: "a".into(),
                    weight: rat(1, 1),
                },
            ],
            rays: vec![],
        };
        assert_eq!(
            validate_tree(&two_parents),
            Err(TreeError::DuplicateParent { vertex: "a".into() })
        );

        let edge_into_root = TreeSpec {
            root: "u0".into(),
            core_edges: vec![CoreEdge {
                parent: "u0".into(),
                child: "u0".into(),
                weight: rat(1, 1),
            }],
            rays: vec![],
        };
        assert_eq!(
            validate_tree(&edge_into_root),
            Err(TreeError::Cycle {
                vertex: "u0".into()
            })
        );
    }

    #[test]
    fn parent_child_round_trip_holds_on_core_and_rays() {
        let spec = TreeSpec {
            root: "u0".into(),
            core_edges: vec![
                CoreEdge {
                    parent: "u0".into(),
                    child: "a".into(),
                    weight: rat(1, 2),
                },
                CoreEdge {
                    parent: "a".into(),
                    child: "b".into(),
                    weight: rat(3, 1),
                },
            ],
            rays: vec![RaySpec {
                id: "r".into(),
                attach_at: "a".into(),
                prefix: vec![rat(5, 7)],
                tail: TailRule::Constant { c: rat(1, 1) },
            }],
        };
        let tree = validate_tree(&spec).unwrap();
        for v in [
            VertexId::core("a"),
            VertexId::core("b"),
            VertexId::ray("r", 1),
            VertexId::ray("r", 2),
            VertexId::ray("r", 9),
        ] {
            let p = tree.parent(&v).unwrap().unwrap();
            assert!(tree.children(&p).unwrap().contains(&v), "par∘chi at {v}");
        }
        assert_eq!(tree.depth(&VertexId::ray("r", 2)).unwrap(), 3);
    }

    #[test]
    fn tree_spec_json_round_trips_rationals_exactly() {
        let spec = spec_a();
        let json = spec.to_json_string();
        let parsed = TreeSpec::from_json_str(&json).unwrap();
        assert_eq!(parsed, spec);
        assert!(json.contains("\"1/9\""));
        assert!(json.contains("\"kind\": \"constant\""));
    }

    #[test]
    fn wire_format_matches_documented_shape() {
        let json = r#"{"root": "u0",
            "core_edges": [{"parent":"u0","child":"a","weight":"1/9"}],
            "rays": [{"id":"r1","attach_at":"u0","prefix":["1/9"],"tail":{"kind":"constant","c":"2"}}]}"#;
        let spec = TreeSpec::from_json_str(json).unwrap();
        let tree = validate_tree(&spec).unwrap();
        assert_eq!(
            tree.weight(&VertexId::core("a")).unwrap(),
            Some(parse_rat("1/9").unwrap())
        );
        assert_eq!(
            tree.weight(&VertexId::ray("r1", 3)).unwrap(),
            Some(parse_rat("2").unwrap())
        );
    }

    #[test]
    fn tail_values_iterator_agrees_with_pointwise_eval() {
        let ray = RaySpec {
            id: "g".into(),
            attach_at: "u0".into(),
            prefix: vec![rat(1, 1)],
            tail: TailRule::GeometricApproach {
                limit: rat(1, 1),
                c: rat(2, 1),
                ratio: rat(1, 2),
            },
        };
        let spec = TreeSpec {
            root: "u0".into(),
            core_edges: vec![],
            rays: vec![ray.clone()],
        };
        let tree = validate_tree(&spec).unwrap();
        let iter_vals: Vec<_> = tree.tail_values(&ray, 1).take(8).collect();
        for (j, w) in &iter_vals {
            let expect = if *j == 1 { rat(1, 1) } else { ray.tail.eval(*j) };
            assert_eq!(*w, expect, "index {j}");
        }
        // α_j = 1 − 2^{1−j}: spot checks.
        assert_eq!(ray.tail.eval(2), rat(1, 2));
        assert_eq!(ray.tail.eval(4), rat(7, 8));
        assert_eq!(ray.tail.eval(5), rat(15, 16));
    }
}
