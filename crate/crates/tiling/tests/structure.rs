//! Structural oracles for the square-tiling: censuses, genus, stories,
//! trivalent graphs, degenerations, rational points, and emission.

use cylinder::CylCoords;
use exactnum::{rat, rat_int, rat_mod_pos};
use std::collections::BTreeMap;
use tiling::{
    build, tiling_from_json_str, Parity, PillowPoint, Side, TilingError, TwoCylKind,
    ZipDirection,
};

/// Number of squares of X(d): (d − 1)·π(d)/3, where π(2) = 6 and
/// π(d) = d(d² − 1)/2 for odd prime d.
fn expected_squares(d: u64) -> u64 {
    let pi = if d == 2 { 6 } else { d * (d * d - 1) / 2 };
    (d - 1) * pi / 3
}

/// Primitive points of denominator exactly n on the pillowcase:
/// 2n² Π_{p | n} (1 − 1/p²), computed by brute force.
fn pillow_points(n: u64) -> u64 {
    let mut count = 0;
    for a in 0..2 * n {
        for b in 0..2 * n {
            let g = num_integer::gcd(num_integer::gcd(a % n, b % n), n);
            if g == 1 {
                count += 1;
            }
        }
    }
    // The point reflection acts freely on primitive points (n ≥ 2).
    count / 2
}

#[test]
fn censuses_match_hand_counts() {
    let expect = [
        (2, (0, 1, 3, 0), 0),
        (3, (3, 3, 4, 0), 0),
        (5, (27, 19, 12, 24), 0),
        (7, (90, 58, 24, 160), 3),
    ];
    for (d, (zeros, ncp, cusps, regular), genus) in expect {
        let t = build(d).unwrap();
        let c = t.vertex_census();
        assert_eq!(
            (c.zeros, c.non_cusp_poles, c.cusp_poles, c.regular),
            (zeros, ncp, cusps, regular),
            "census of X({d})"
        );
        assert_eq!(t.genus(), genus, "genus of X({d})");
        assert_eq!(t.squares.len() as u64, expected_squares(d));
    }
}

#[test]
fn global_identities_hold_up_to_d13() {
    for d in [2, 3, 5, 7, 11, 13] {
        let t = build(d).unwrap();
        let c = t.vertex_census();
        let g = t.genus() as i64;
        let zeros = c.zeros as i64;
        let poles = (c.non_cusp_poles + c.cusp_poles) as i64;
        // Simple zeroes and poles of the induced quadratic differential.
        assert_eq!(zeros - poles, 4 * g - 4, "zero/pole balance on X({d})");
        // Degree count for the pillowcase covering: branching at the poles
        // is trivial, zeroes triple a preimage, regular vertices double one.
        let deg = (t.squares.len() / 2) as i64;
        assert_eq!(
            2 - 2 * g,
            2 * deg - 2 * zeros - c.regular as i64,
            "covering Euler count on X({d})"
        );
        // Cusps of the modular curve: 3 for X(2), (d² − 1)/2 for odd d.
        let cusps = if d == 2 { 3 } else { (d * d - 1) / 2 };
        assert_eq!(c.cusp_poles as u64, cusps, "cusp count of X({d})");
        assert_eq!(t.squares.len() as u64, expected_squares(d));
    }
}

#[test]
fn x11_is_large_but_fast() {
    let t = build(11).unwrap();
    assert_eq!(t.squares.len(), 2200);
    assert_eq!(t.genus(), 26);
    let stories = t.stories().unwrap();
    assert_eq!(stories.len(), 5);
    t.trivalent_graph().unwrap();
}

#[test]
fn composite_degrees_are_rejected() {
    for d in [0, 1, 4, 6, 8, 9, 10, 12] {
        assert!(matches!(
            build(d),
            Err(TilingError::UnsupportedDegree(x)) if x == d
        ));
    }
}

#[test]
fn story_shapes_match_the_pagoda() {
    let t5 = build(5).unwrap();
    let stories = t5.stories().unwrap();
    assert_eq!(
        stories.iter().map(|s| s.cylinders.len()).collect::<Vec<_>>(),
        [4, 3]
    );
    // Widths decrease strictly from the eave to the lighthouse.
    for story in &stories {
        let widths: Vec<u64> = story.cylinders.iter().map(|&c| t5.width(c)).collect();
        assert!(widths.windows(2).all(|w| w[0] > w[1]), "widths {widths:?}");
    }
    assert_eq!(
        stories[0].cylinders.iter().map(|&c| t5.width(c)).collect::<Vec<_>>(),
        [20, 12, 6, 2]
    );
    assert_eq!(
        stories[1].cylinders.iter().map(|&c| t5.width(c)).collect::<Vec<_>>(),
        [30, 6, 2]
    );

    let t7 = build(7).unwrap();
    let stories = t7.stories().unwrap();
    assert_eq!(
        stories.iter().map(|s| s.cylinders.len()).collect::<Vec<_>>(),
        [6, 4, 4]
    );
    // Stories partition the cylinders.
    let mut seen: Vec<usize> = stories.iter().flat_map(|s| s.cylinders.clone()).collect();
    seen.sort_unstable();
    assert_eq!(seen, (0..t7.cyls.len()).collect::<Vec<_>>());
}

#[test]
fn trivalent_graphs_for_small_degrees() {
    let t3 = build(3).unwrap();
    let g3 = t3.trivalent_graph().unwrap();
    assert_eq!(
        (g3.vertices.len(), g3.edges.len(), g3.legs.len(), g3.complement_disks),
        (1, 0, 3, 1)
    );

    let t5 = build(5).unwrap();
    let g5 = t5.trivalent_graph().unwrap();
    assert_eq!(
        (g5.vertices.len(), g5.edges.len(), g5.legs.len(), g5.complement_disks),
        (10, 10, 10, 2)
    );
    // The ten saddle connections close into a single cycle.
    let mut adjacency = vec![Vec::new(); g5.vertices.len()];
    for &(a, b) in &g5.edges {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    assert!(adjacency.iter().all(|n| n.len() == 2));
    let (mut prev, mut cur, mut steps) = (usize::MAX, 0, 0);
    loop {
        let next = *adjacency[cur]
            .iter()
            .find(|&&v| v != prev)
            .expect("cycle continues");
        prev = cur;
        cur = next;
        steps += 1;
        if cur == 0 {
            break;
        }
    }
    assert_eq!(steps, 10, "the X(5) graph is a single 10-cycle");

    let t7 = build(7).unwrap();
    let g7 = t7.trivalent_graph().unwrap();
    assert_eq!(
        (g7.vertices.len(), g7.edges.len(), g7.legs.len(), g7.complement_disks),
        (35, 42, 21, 3)
    );
    // Degree 3 throughout: 2E + legs = 3V.
    for g in [&g3, &g5, &g7] {
        assert_eq!(2 * g.edges.len() + g.legs.len(), 3 * g.vertices.len());
    }
}

/// Exact coordinates of the horizontal midpoint x = col + 1/2 on a cylinder.
fn midpoint_coords(c: &cylinder::CylSpec, col: u64) -> CylCoords {
    let x = rat(2 * col as i64 + 1, 2);
    CylCoords {
        w1: c.w1,
        s1: c.s1,
        w2: c.w2,
        s2: c.s2,
        t1: rat_mod_pos(&x, &rat_int(c.w1 as i64)),
        t2: rat_mod_pos(&x, &rat_int(c.w2 as i64)),
        t3: rat_mod_pos(&x, &rat_int((c.w1 + c.w2) as i64)),
        h: rat(1, 2),
    }
}

#[test]
fn zipping_the_two_sides_of_a_shared_boundary_agrees() {
    for d in [3, 5, 7] {
        let t = build(d).unwrap();
        let mut checked = 0;
        for (sq_a, side_a, sq_b, side_b, parity) in t.glued_pairs() {
            if parity != Parity::Translation || sq_a.cyl == sq_b.cyl {
                continue;
            }
            // A within-story pair: the bottom of one cylinder meets the top
            // of its predecessor.  Degenerating the two cylinders toward the
            // shared boundary must give the same two-cylinder surface.
            let (bottom, top) = match (side_a, side_b) {
                (Side::Bottom, Side::Top) => (sq_a, sq_b),
                (Side::Top, Side::Bottom) => (sq_b, sq_a),
                other => panic!("cross-cylinder translation on sides {other:?}"),
            };
            let down = tiling::zip(
                &midpoint_coords(&t.cyls[bottom.cyl], bottom.col),
                ZipDirection::Down,
            )
            .unwrap();
            let up = tiling::zip(
                &midpoint_coords(&t.cyls[top.cyl], top.col),
                ZipDirection::Up,
            )
            .unwrap();
            assert_eq!(down, up, "degenerations disagree at {bottom:?} / {top:?}");
            assert_eq!(down.kind, TwoCylKind::Type2);
            checked += 1;
        }
        assert!(checked > 0, "X({d}) has within-story boundaries");
    }
}

#[test]
fn rational_point_counts_scale_with_the_covering_degree() {
    for d in [2, 3, 5] {
        let t = build(d).unwrap();
        let deg = (t.squares.len() / 2) as u64;
        for n in 2..=6 {
            let points = t.rational_points(n);
            assert_eq!(
                points.len() as u64,
                deg * pillow_points(n),
                "rational point count on X({d}) at denominator {n}"
            );
            // Sorted and distinct, with denominators dividing n exactly.
            assert!(points.windows(2).all(|p| p[0] < p[1]));
            assert!(points.iter().all(|p| p.denom() == n));
        }
    }
}

#[test]
fn fibers_of_the_pillowcase_covering_have_full_degree() {
    for d in [2, 3, 5] {
        let t = build(d).unwrap();
        let deg = t.squares.len() / 2;
        for n in [2, 3, 4] {
            let mut fibers: BTreeMap<PillowPoint, usize> = BTreeMap::new();
            for p in t.rational_points(n) {
                let (image, _) = t.delta_image(&p).unwrap();
                *fibers.entry(image).or_insert(0) += 1;
            }
            assert_eq!(fibers.len() as u64, pillow_points(n));
            assert!(
                fibers.values().all(|&size| size == deg),
                "every fiber of X({d}) -> pillowcase has {deg} points"
            );
        }
    }
}

#[test]
fn spin_splits_odd_denominator_points_three_to_one() {
    for d in [2, 3, 5] {
        let t = build(d).unwrap();
        for n in [3, 5] {
            let (mut even, mut odd) = (0u64, 0u64);
            for p in t.rational_points(n) {
                match t.delta_image(&p).unwrap().1 {
                    Some(0) => even += 1,
                    Some(1) => odd += 1,
                    other => panic!("odd denominator must have a spin, got {other:?}"),
                }
            }
            assert_eq!(odd, 3 * even, "spin ratio on X({d}) at denominator {n}");
        }
    }
}

#[test]
fn even_denominators_have_no_spin() {
    let t = build(3).unwrap();
    for p in t.rational_points(4) {
        assert_eq!(t.delta_image(&p).unwrap().1, None);
    }
}

#[test]
fn json_roundtrip_through_a_file() {
    let t = build(7).unwrap();
    let path = std::env::temp_dir().join("xdtile-test-x7.json");
    t.emit(tiling::EmitFormat::Json, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let back = tiling_from_json_str(&text).unwrap();
    assert_eq!(back, t);
    std::fs::remove_file(&path).ok();
}

#[test]
fn svg_marks_match_the_x5_census() {
    let t = build(5).unwrap();
    let svg = t.to_svg_string().unwrap();
    assert_eq!(svg.matches("fill=\"red\"").count(), 12);
    assert_eq!(svg.matches("fill=\"black\"").count(), 27);
    assert_eq!(svg.matches("fill=\"white\" stroke=\"black\"").count(), 19);
}

#[test]
fn vertex_positions_carry_their_own_class() {
    // The representative position of each vertex must classify to the
    // vertex's class and corner count under the boundary rules.
    for d in [2, 3, 5, 7] {
        let t = build(d).unwrap();
        for v in &t.vertices {
            assert_eq!(v.corner_count, v.class.corner_count());
            let (ci, x, y) = v.position;
            assert!(x < t.width(ci) && y <= t.height(ci));
        }
        let census = t.vertex_census();
        assert_eq!(
            census.zeros + census.non_cusp_poles + census.cusp_poles + census.regular,
            t.vertices.len()
        );
    }
}

#[test]
fn boundary_gluings_preserve_midpoint_images() {
    // Crossing any glued boundary edge at its midpoint and applying the
    // development must land both descriptions on the same pillowcase point.
    let t = build(5).unwrap();
    for (sq_a, side_a, sq_b, side_b, parity) in t.glued_pairs() {
        let horizontal = |s: Side| s == Side::Top || s == Side::Bottom;
        if !horizontal(side_a) || !horizontal(side_b) {
            continue;
        }
        let point = |sq: tiling::Square, side: Side| cylinder::SurfPoint {
            cyl: sq.cyl,
            x: rat(2 * sq.col as i64 + 1, 2),
            y: if side == Side::Top {
                rat_int(sq.row as i64)
            } else {
                rat_int(sq.row as i64 + 1)
            },
        };
        let (ia, _) = t.delta_image(&point(sq_a, side_a)).unwrap();
        let (ib, _) = t.delta_image(&point(sq_b, side_b)).unwrap();
        assert_eq!(ia, ib, "development disagrees across {sq_a:?}/{sq_b:?} {parity:?}");
    }
}

#[test]
fn pillow_point_respects_the_deck_group() {
    // Translation by 2 and the point reflection act trivially.
    for (num, den) in [(1i64, 3i64), (5, 4), (7, 6), (2, 5)] {
        let x = rat(num, den);
        let y = rat(num + 1, den);
        let n = den as u64;
        let base = PillowPoint::new(&x, &y, n);
        assert_eq!(PillowPoint::new(&(&x + rat_int(2)), &y, n), base);
        assert_eq!(PillowPoint::new(&-&x, &-&y, n), base);
        assert_eq!(
            PillowPoint::new(&(rat_int(2) - &x), &(rat_int(2) - &y), n),
            base
        );
    }
}
