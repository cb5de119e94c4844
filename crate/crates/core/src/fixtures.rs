//! Named example trees used across the test suite and the command-line tool.

use crate::rat::rat;
use crate::tree::{validate_tree, RaySpec, TailRule, TreeSpec, ValidatedTree};

/// Two constant-tail rays branching at the root with small fractional
/// prefixes; the squared norm is 4, attained along both rays.
pub fn fixture_a_spec() -> TreeSpec {
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

/// Two constant-tail rays with uneven integer prefixes; the squared norm is
/// 16, first attained three steps down the second ray.
pub fn fixture_b_spec() -> TreeSpec {
    TreeSpec {
        root: "u0".into(),
        core_edges: vec![],
        rays: vec![
            RaySpec {
                id: "r1".into(),
                attach_at: "u0".into(),
                prefix: vec![rat(1, 1)],
                tail: TailRule::Constant { c: rat(2, 1) },
            },
            RaySpec {
                id: "r2".into(),
                attach_at: "u0".into(),
                prefix: vec![rat(1, 1), rat(2, 1), rat(1, 1)],
                tail: TailRule::Constant { c: rat(4, 1) },
            },
        ],
    }
}

/// A single path whose weights 1, 1/2, 3/4, 7/8, … climb geometrically to 1;
/// the norm is attained only through the unit first edge.
pub fn fixture_c_spec() -> TreeSpec {
    TreeSpec {
        root: "1".into(),
        core_edges: vec![],
        rays: vec![RaySpec {
            id: "path".into(),
            attach_at: "1".into(),
            prefix: vec![rat(1, 1)],
            tail: TailRule::GeometricApproach {
                limit: rat(1, 1),
                c: rat(2, 1),
                ratio: rat(1, 2),
            },
        }],
    }
}

/// Two bare constant rays of weights 1 and 2 branching at the root.
pub fn fixture_d_spec() -> TreeSpec {
    TreeSpec {
        root: "u0".into(),
        core_edges: vec![],
        rays: vec![
            RaySpec {
                id: "r1".into(),
                attach_at: "u0".into(),
                prefix: vec![],
                tail: TailRule::Constant { c: rat(1, 1) },
            },
            RaySpec {
                id: "r2".into(),
                attach_at: "u0".into(),
                prefix: vec![],
                tail: TailRule::Constant { c: rat(2, 1) },
            },
        ],
    }
}

/// Two rays increasing to limits 1 and 2 through reciprocal corrections,
/// under constant two-step prefixes.
pub fn fixture_e_spec() -> TreeSpec {
    TreeSpec {
        root: "u0".into(),
        core_edges: vec![],
        rays: vec![
            RaySpec {
                id: "r1".into(),
                attach_at: "u0".into(),
                prefix: vec![rat(1, 1), rat(1, 1)],
                tail: TailRule::AffineReciprocal {
                    limit: rat(1, 1),
                    c: rat(1, 1),
                    shift: rat(1, 1),
                },
            },
            RaySpec {
                id: "r2".into(),
                attach_at: "u0".into(),
                prefix: vec![rat(2, 1), rat(2, 1)],
                tail: TailRule::AffineReciprocal {
                    limit: rat(2, 1),
                    c: rat(1, 1),
                    shift: rat(1, 1),
                },
            },
        ],
    }
}

pub fn fixture_a() -> ValidatedTree {
    validate_tree(&fixture_a_spec()).expect("fixture a is valid")
}

pub fn fixture_b() -> ValidatedTree {
    validate_tree(&fixture_b_spec()).expect("fixture b is valid")
}

pub fn fixture_c() -> ValidatedTree {
    validate_tree(&fixture_c_spec()).expect("fixture c is valid")
}

pub fn fixture_d() -> ValidatedTree {
    validate_tree(&fixture_d_spec()).expect("fixture d is valid")
}

pub fn fixture_e() -> ValidatedTree {
    validate_tree(&fixture_e_spec()).expect("fixture e is valid")
}

pub const FIXTURE_NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

/// Looks up a fixture tree by its one-letter name (case-insensitive).
pub fn by_name(name: &str) -> Option<TreeSpec> {
    match name.to_ascii_lowercase().as_str() {
        "a" => Some(fixture_a_spec()),
        "b" => Some(fixture_b_spec()),
        "c" => Some(fixture_c_spec()),
        "d" => Some(fixture_d_spec()),
        "e" => Some(fixture_e_spec()),
        _ => None,
    }
}
