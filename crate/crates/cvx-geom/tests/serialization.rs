//! Text-format roundtrips and the committed fixture tables.

use cvx_geom::{
    build_direction_sets, decompose_matrix, decompose_vector, DirectionSet, GeomError, SetKind,
};

const FIXTURES: [(&str, usize, &str); 8] = [
    ("transport_odd", 2, include_str!("../fixtures/transport_odd_d2.txt")),
    ("transport_even", 2, include_str!("../fixtures/transport_even_d2.txt")),
    ("euler_odd", 2, include_str!("../fixtures/euler_odd_d2.txt")),
    ("euler_even", 2, include_str!("../fixtures/euler_even_d2.txt")),
    ("transport_odd", 3, include_str!("../fixtures/transport_odd_d3.txt")),
    ("transport_even", 3, include_str!("../fixtures/transport_even_d3.txt")),
    ("euler_odd", 3, include_str!("../fixtures/euler_odd_d3.txt")),
    ("euler_even", 3, include_str!("../fixtures/euler_even_d3.txt")),
];

#[test]
fn roundtrip_preserves_every_rational_entry() {
    for d in [2, 3] {
        for set in &build_direction_sets(d).unwrap() {
            let text = set.to_text();
            let back = DirectionSet::from_text(&text).unwrap();
            assert_eq!(back.kind(), set.kind());
            assert_eq!(back.dim(), set.dim());
            assert_eq!(back.len(), set.len());
            for (a, b) in set.directions().iter().zip(back.directions()) {
                assert_eq!(a.xi(), b.xi());
                assert_eq!(a.n_star(), b.n_star());
                for i in 0..d - 1 {
                    assert_eq!(a.frame(i), b.frame(i));
                }
            }
            assert_eq!(back.to_text(), text);
        }
    }
}

#[test]
fn reloaded_sets_decompose_bitwise_identically() {
    // Charts are rebuilt deterministically on load, so a reloaded set is not
    // just equivalent: its coefficient functions match bit for bit.
    let sets = build_direction_sets(2).unwrap();
    for set in &sets {
        let back = DirectionSet::from_text(&set.to_text()).unwrap();
        if set.kind().is_transport() {
            for r in [[0.75, 0.0], [-0.4, 0.5], [0.6, -0.6], [0.0, 0.99]] {
                let a = decompose_vector(&r, set).unwrap();
                let b = decompose_vector(&r, &back).unwrap();
                assert_eq!(a.coefficients, b.coefficients);
            }
        } else {
            for upper in [[1.0, 0.0, 1.0], [1.2, 0.1, 0.9], [0.8, -0.15, 1.1]] {
                let a = decompose_matrix(&upper, set).unwrap();
                let b = decompose_matrix(&upper, &back).unwrap();
                assert_eq!(a.coefficients, b.coefficients);
            }
        }
    }
}

#[test]
fn committed_fixtures_match_the_built_tables() {
    // Regenerate with `cargo run -p cvx-geom --example dump_tables` after any
    // table change.
    for d in [2, 3] {
        let sets = build_direction_sets(d).unwrap();
        for set in &sets {
            let (_, _, text) = FIXTURES
                .iter()
                .find(|(label, dim, _)| *label == set.kind().label() && *dim == d)
                .unwrap();
            assert_eq!(
                set.to_text(),
                *text,
                "fixture for {} d={} is out of date",
                set.kind(),
                d
            );
        }
    }
}

#[test]
fn fixtures_parse_into_working_sets() {
    for (label, dim, text) in FIXTURES {
        let set = DirectionSet::from_text(text).unwrap();
        assert_eq!(set.kind().label(), label);
        assert_eq!(set.dim(), dim);
        assert!(!set.is_empty());
        assert!(set.chart_count() > 0);
    }
}

#[test]
fn set_kind_labels_roundtrip() {
    for kind in SetKind::ALL {
        assert_eq!(SetKind::parse(kind.label()).unwrap(), kind);
    }
    assert!(matches!(SetKind::parse("sideways"), Err(GeomError::Parse(_))));
}

#[test]
fn malformed_inputs_are_rejected_with_parse_errors() {
    let good = &build_direction_sets(2).unwrap()[0].to_text();

    let cases: Vec<String> = vec![
        // wrong header
        good.replacen("cvx-geom-set v1", "cvx-geom-set v2", 1),
        // unknown kind
        good.replacen("kind transport_odd", "kind transport_upside", 1),
        // unreadable dim
        good.replacen("dim 2", "dim two", 1),
        // count larger than the table
        good.replacen("count 12", "count 13", 1),
        // a zero denominator
        good.replacen("1/1", "1/0", 1),
        // a group missing an entry
        good.replacen("3/5 4/5", "3/5", 1),
        // a direction line missing its frame group
        {
            let mut lines: Vec<&str> = good.lines().collect();
            let cut = lines[4].split('|').next().unwrap();
            lines[4] = cut;
            lines.join("\n")
        },
        // trailing content
        format!("{good}leftover line\n"),
        // empty input
        String::new(),
    ];
    for (i, text) in cases.iter().enumerate() {
        assert!(
            matches!(DirectionSet::from_text(text), Err(GeomError::Parse(_))),
            "case {i} should fail to parse"
        );
    }
}

#[test]
fn corrupted_entries_fail_the_orthonormality_check() {
    let good = &build_direction_sets(2).unwrap()[0].to_text();
    // still parseable rationals, but xi is no longer a unit vector
    let bad = good.replacen("3/5 4/5", "3/6 4/5", 1);
    assert!(matches!(
        DirectionSet::from_text(&bad),
        Err(GeomError::BadTable(_))
    ));
}
