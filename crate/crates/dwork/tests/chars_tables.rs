use dwork::chars::{self, CharClass};

/// (class, deg Q, exponent, D_a label) for the published example tables.
pub fn published(n: u32) -> Vec<(Vec<i64>, u32, u64, &'static str)> {
    match n {
        3 => vec![(vec![0, 0, 0], 2, 1, "Q")],
        4 => vec![
            (vec![0, 0, 0, 0], 3, 1, "Q"),
            (vec![0, 0, 2, 2], 1, 3, "Q"),
            (vec![0, 0, 1, 3], 1, 12, "Q"),
        ],
        5 => vec![
            (vec![0, 0, 0, 0, 0], 4, 1, "Q"),
            (vec![0, 0, 0, 1, 4], 4, 20, "Q(sqrt(5))"),
            (vec![0, 0, 1, 1, 3], 4, 30, "Q(sqrt(5))"),
        ],
        7 => vec![
            (vec![0, 0, 0, 0, 0, 0, 0], 6, 1, "Q"),
            (vec![0, 0, 0, 0, 0, 1, 6], 12, 42, "Q(mu_7)+"),
            (vec![0, 0, 0, 0, 1, 1, 5], 24, 105, "Q(mu_7)"),
            (vec![0, 0, 0, 1, 1, 1, 4], 12, 140, "Q(mu_7)+"),
            (vec![0, 0, 0, 1, 1, 6, 6], 12, 210, "Q(mu_7)+"),
            (vec![0, 0, 0, 0, 1, 2, 4], 6, 210, "Q(sqrt(-7))"),
            (vec![0, 0, 0, 1, 1, 2, 3], 18, 420, "Q(mu_7)"),
            (vec![0, 0, 1, 1, 3, 3, 6], 6, 630, "Q(sqrt(-7))"),
            (vec![0, 0, 0, 1, 2, 5, 6], 6, 840, "Q(mu_7)+"),
            (vec![0, 0, 1, 1, 3, 4, 5], 6, 1260, "Q(mu_7)+"),
            (vec![0, 0, 1, 1, 2, 4, 6], 6, 1260, "Q(mu_7)+"),
        ],
        _ => vec![],
    }
}

#[test]
fn prediction_tables_match_published_rows() {
    for n in [3u32, 4, 5, 7] {
        let report = chars::predict_report(n).unwrap();
        let expected = published(n);
        assert_eq!(report.rows.len(), expected.len(), "row count for n = {n}");
        for (v, deg, exp, label) in expected {
            let key = chars::format_vec(&CharClass::new(n, &v).unwrap().orbit_rep());
            let row = report
                .rows
                .iter()
                .find(|r| r.class == key)
                .unwrap_or_else(|| panic!("missing {key}"));
            assert_eq!(
                (row.deg_q, row.exponent, row.d_a.as_str()),
                (deg, exp, label),
                "n = {n}, class {key}"
            );
        }
        assert_eq!(report.total_dimension, report.expected_dimension);
    }
}

#[test]
fn orbit_sizes_small_n() {
    let n4: Vec<(String, u64)> = chars::full_orbits(4)
        .unwrap()
        .iter()
        .map(|o| (o.rep.to_string(), o.size))
        .collect();
    assert_eq!(
        n4,
        vec![
            ("[0,0,0,0]".into(), 1),
            ("[0,0,1,3]".into(), 12),
            ("[0,0,2,2]".into(), 3)
        ]
    );
    let n5 = chars::full_orbits(5).unwrap();
    let sizes: Vec<(String, u64, bool)> = n5
        .iter()
        .map(|o| (o.rep.to_string(), o.size, o.excluded))
        .collect();
    assert_eq!(
        sizes,
        vec![
            ("[0,0,0,0,0]".into(), 1, false),
            ("[0,0,0,1,4]".into(), 40, false),
            ("[0,0,1,1,3]".into(), 60, false),
            ("[0,1,2,3,4]".into(), 24, true),
        ]
    );
    let n3: Vec<(String, bool)> = chars::full_orbits(3)
        .unwrap()
        .iter()
        .map(|o| (o.rep.to_string(), o.excluded))
        .collect();
    assert_eq!(
        n3,
        vec![("[0,0,0]".into(), false), ("[0,1,2]".into(), true)]
    );
}

#[test]
fn dimensions() {
    let expected = [
        (3, 2u64),
        (4, 21),
        (5, 204),
        (6, 2605),
        (7, 39990),
        (8, 720601),
    ];
    for (n, dim) in expected {
        assert_eq!(chars::primitive_dimension(n), dim);
        assert_eq!(
            chars::predict_report(n).unwrap().total_dimension,
            dim,
            "n = {n}"
        );
    }
}

#[test]
fn invariant_identities_and_exclusion() {
    for n in 3..=8u32 {
        let orbits = chars::full_orbits(n).unwrap();
        assert_eq!(
            orbits.iter().map(|o| o.size).sum::<u64>(),
            (n as u64).pow(n - 2)
        );
        for o in &orbits {
            let i = &o.invariants;
            assert_eq!(n, i.nprime_a * i.d_a);
            assert_eq!(n, i.e_a * i.f_a * i.d_a);
            assert_eq!(n, i.n_a * i.f_a);
            assert_eq!(i.n_a, i.e_a * i.d_a);
            assert_eq!(i.m_a, i.d_a * i.mprime_a);
            assert_eq!(i.exponent * i.d_a as u64, i.gamma_a);
            // Orbit size times m'_a equals deg Q times the exponent.
            assert_eq!(o.size * i.mprime_a as u64, i.deg_q as u64 * i.exponent);
            let rep_sorted = o.rep.rep().to_vec();
            let is_full_range = n % 2 == 1 && rep_sorted == (0..n as u8).collect::<Vec<_>>();
            assert_eq!(o.excluded, is_full_range, "n = {n}, {}", o.rep);
            for k in dwork::arith::units(i.n_a) {
                if i.n_a == 1 || k % i.e_a == 1 % i.e_a {
                    assert!(i.im_k.contains(&k), "n = {n}, {}: {k} missing", o.rep);
                }
            }
        }
    }
}

#[test]
fn markdown_layout() {
    let md = chars::predict_report(4).unwrap().to_markdown();
    let first = md.lines().next().unwrap();
    assert!(first.starts_with("| class"));
    assert!(first.contains("omega-set"));
    assert!(md.contains("{1,-1}"));
    let csv = chars::predict_report(3).unwrap().to_csv();
    assert!(csv.starts_with("class,m_a,deg_Q,exponent,D_a,omega-set"));
}
