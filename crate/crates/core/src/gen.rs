//! Seeded random tree specifications for property tests and oracle
//! cross-checks. All sampling is deterministic in the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::rat::{rat, Rat};
use crate::tree::{CoreEdge, RaySpec, TailRule, TreeSpec};

/// A small positive rational from a fixed lattice; denominators are powers
/// of two so the values convert to floating point without rounding.
fn lattice_weight(rng: &mut ChaCha8Rng) -> Rat {
    let numer = rng.random_range(1..=12i64);
    let denom = *[1, 2, 4].get(rng.random_range(0..3usize)).expect("in range");
    rat(numer, denom)
}

fn random_tail(rng: &mut ChaCha8Rng) -> TailRule {
    let limit = lattice_weight(rng);
    match rng.random_range(0..4u8) {
        0 => TailRule::Constant { c: limit },
        1 => {
            // Increasing: first value is limit/(shift-free index), kept
            // positive by scaling c below limit · (1 − shift).
            let c = &limit * rat(1, rng.random_range(2..=4i64));
            TailRule::AffineReciprocal {
                limit,
                c,
                shift: rat(-rng.random_range(0..=2i64), 1),
            }
        }
        2 => TailRule::AffineReciprocal {
            c: -lattice_weight(rng),
            limit,
            shift: rat(-rng.random_range(0..=2i64), 1),
        },
        _ => {
            let sign = if rng.random_bool(0.5) { 1 } else { -1 };
            TailRule::GeometricApproach {
                c: &limit * rat(sign, 2),
                limit,
                ratio: rat(1, rng.random_range(2..=3i64)),
            }
        }
    }
}

/// Random rooted tree with a finite core and up to `max_rays` infinite rays.
/// Every vertex attaches uniformly to an earlier one, so depth varies.
pub fn random_tree(seed: u64, max_core: usize, max_rays: usize) -> TreeSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core_count = rng.random_range(1..=max_core.max(1));
    let mut spec = random_core(&mut rng, core_count);
    let ray_count = rng.random_range(0..=max_rays);
    for r in 1..=ray_count {
        let attach = rng.random_range(0..core_count);
        let prefix_len = rng.random_range(0..=2usize);
        spec.rays.push(RaySpec {
            id: format!("r{r}"),
            attach_at: format!("u{attach}"),
            prefix: (0..prefix_len).map(|_| lattice_weight(&mut rng)).collect(),
            tail: random_tail(&mut rng),
        });
    }
    spec
}

/// Random finite tree (core only, no rays); suitable for dense-matrix
/// oracles because the operator is a finite matrix.
pub fn random_finite_tree(seed: u64, max_vertices: usize) -> TreeSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.random_range(1..=max_vertices.max(1));
    random_core(&mut rng, count)
}

fn random_core(rng: &mut ChaCha8Rng, count: usize) -> TreeSpec {
    let mut spec = TreeSpec {
        root: "u0".to_string(),
        core_edges: Vec::new(),
        rays: Vec::new(),
    };
    for i in 1..count {
        spec.core_edges.push(CoreEdge {
            parent: format!("u{}", rng.random_range(0..i)),
            child: format!("u{i}"),
            weight: lattice_weight(rng),
        });
    }
    spec
}
