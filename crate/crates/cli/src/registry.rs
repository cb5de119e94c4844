//! The built-in fixture corpus: five small trees exercising every analysis
//! path, each with a one-line behavioral description.

use shiftlab_core::fixtures;

pub struct FixtureInfo {
    pub name: &'static str,
    pub summary: &'static str,
}

pub const FIXTURES: [FixtureInfo; 5] = [
    FixtureInfo {
        name: "a",
        summary: "one core vertex, rays with prefixes [1/9] and [1/3, 1/4], both tails constant 2; \
                  the hyponormal basis test fails at r2:1 while the star-paranormal vertex test passes",
    },
    FixtureInfo {
        name: "b",
        summary: "one core vertex, rays with prefixes [1] and [1, 2, 1], tails constant 2 and 4; \
                  the quasi-star vertex test passes everywhere",
    },
    FixtureInfo {
        name: "c",
        summary: "a single ray with prefix [1] and weights increasing to 1; the adjoint shift \
                  violates the quasi inequality at the first ray vertex and S² never attains its norm",
    },
    FixtureInfo {
        name: "d",
        summary: "two prefix-free rays with constant weights 1 and 2; the diagonal operator has \
                  eigenvalues 1 and 2, both of infinite multiplicity",
    },
    FixtureInfo {
        name: "e",
        summary: "two rays with prefixes [1, 1] and [2, 2], tails increasing to 1 and 2; diagonal \
                  eigenvalues accumulate at both limits",
    },
];

/// Human listing of the corpus; ray lines are rendered from the actual
/// fixture definitions so they cannot drift from the data.
pub fn listing() -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    for info in &FIXTURES {
        let spec = fixtures::by_name(info.name).expect("registry names are valid");
        writeln!(s, "{}  {}", info.name, info.summary).unwrap();
        writeln!(s, "   root {}", spec.root).unwrap();
        for ray in &spec.rays {
            writeln!(s, "   {}", crate::human::describe_ray(ray)).unwrap();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use shiftlab_core::tree::TailRule;
    use shiftlab_core::Rat;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn registry_matches_the_fixture_corpus() {
        assert_eq!(FIXTURES.len(), fixtures::FIXTURE_NAMES.len());
        for (info, name) in FIXTURES.iter().zip(fixtures::FIXTURE_NAMES) {
            assert_eq!(info.name, name);
            assert!(fixtures::by_name(name).is_some());
        }
    }

    #[test]
    fn fixture_b_weights_spot_check() {
        let spec = fixtures::by_name("b").unwrap();
        let r2 = spec.rays.iter().find(|r| r.id == "r2").unwrap();
        assert_eq!(r2.prefix, vec![rat(1, 1), rat(2, 1), rat(1, 1)]);
        assert_eq!(r2.tail, TailRule::Constant { c: rat(4, 1) });
    }

    #[test]
    fn fixture_e_tail_spot_check() {
        let spec = fixtures::by_name("e").unwrap();
        for (ray, limit) in spec.rays.iter().zip([rat(1, 1), rat(2, 1)]) {
            assert_eq!(
                ray.tail,
                TailRule::AffineReciprocal {
                    limit,
                    c: rat(1, 1),
                    shift: rat(1, 1),
                }
            );
        }
    }

    #[test]
    fn listing_names_every_fixture_and_ray() {
        let text = listing();
        for info in &FIXTURES {
            assert!(text.contains(&format!("{}  ", info.name)));
        }
        assert!(text.contains("constant 4"));
        assert!(text.contains("increasing to 2"));
    }
}
