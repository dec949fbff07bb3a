//! Extraction, serialization, validation and page turning on the full corpus.

mod support;

use std::collections::BTreeSet;

use adams_chart::chartir;
use adams_chart::extract::AssemblyNote;
use adams_chart::model::{
    materialize_towers, Bidegree, ChartPage, DiffEdge, ExtensionKind, Provenance, StructKind,
    TauOrder, CHART_TAGS, DEFAULT_F_CAP,
};
use adams_chart::pages::{
    check_chain, compare, group_by_bidegree, turn_page, DiscrepancyKind, Window, CHAINS,
};
use adams_chart::tau::TauPoly;
use adams_chart::validate::{
    calibrate_shift, ctau_check, leibniz_audit, validate_structure, Severity, Verdict,
};
use support::corpus::*;

#[test]
fn every_block_is_extracted_in_document_order() {
    let tags: Vec<&str> = corpus().iter().map(|c| c.tag.as_str()).collect();
    let want: Vec<&str> = CHART_TAGS.iter().map(|t| t.0).collect();
    assert_eq!(tags, want);
}

#[test]
fn class_counts_match_the_text_scan() {
    let scan = text_scan();
    assert_eq!(scan.len(), corpus().len());
    for (c, (raw, distinct)) in corpus().iter().zip(scan) {
        assert_eq!(c.chart.classes.len(), distinct, "{}", c.tag);
        let merged = c
            .notes
            .iter()
            .filter(|n| matches!(n, AssemblyNote::MergedDuplicate { .. }))
            .count();
        assert_eq!(merged, raw - distinct, "{}", c.tag);
    }
}

#[test]
fn the_only_other_note_is_one_zero_length_line() {
    let others: Vec<(&str, &AssemblyNote)> = corpus()
        .iter()
        .flat_map(|c| c.notes.iter().map(move |n| (c.tag.as_str(), n)))
        .filter(|(_, n)| !matches!(n, AssemblyNote::MergedDuplicate { .. }))
        .collect();
    assert_eq!(others.len(), 1, "{others:?}");
    assert_eq!(others[0].0, "E3-Ctau");
    assert!(matches!(
        others[0].1,
        AssemblyNote::DroppedDegenerateLine { .. }
    ));
}

#[test]
fn pinned_fixtures_survive_extraction_and_chartir() {
    let mut seen = 0;
    for c in corpus() {
        let back = chartir::parse(&chartir::serialize(&c.chart)).unwrap();
        for ((what, ok), (_, ok_back)) in pinned(&c.tag, &c.chart)
            .into_iter()
            .zip(pinned(&c.tag, &back))
        {
            assert!(ok, "{}: {what}", c.tag);
            assert!(ok_back, "{}: {what} after round trip", c.tag);
            seen += 1;
        }
    }
    assert_eq!(seen, 11);
}

#[test]
fn every_chart_round_trips_through_chartir() {
    for c in corpus() {
        let text = chartir::serialize(&c.chart);
        let back = chartir::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", c.tag));
        assert_eq!(back, c.chart, "{}", c.tag);
        assert_eq!(chartir::serialize(&back), text, "{}", c.tag);
    }
}

#[test]
fn structure_is_clean_and_warnings_carry_flags() {
    for c in corpus() {
        for f in validate_structure(&c.chart) {
            assert_ne!(f.severity, Severity::Error, "{f}");
            assert!(f.message.contains("uncertain"), "unflagged warning {f}");
        }
    }
}

#[test]
fn leibniz_has_no_violations() {
    for c in corpus() {
        let bad: Vec<String> = leibniz_audit(&c.chart)
            .iter()
            .filter(|t| t.verdict == Verdict::Violated)
            .map(|t| t.describe())
            .collect();
        assert!(bad.is_empty(), "{}: {bad:?}", c.tag);
    }
}

#[test]
fn leibniz_confirms_the_classical_d0_family() {
    let audit: Vec<_> = leibniz_audit(chart("Adams-cl"))
        .into_iter()
        .filter(|t| (14..=18).contains(&t.x.stem))
        .collect();
    // d2(e0) = h1² d0 and d2(f0) = h0² e0, each with its h-multiple drawn.
    let confirmed = audit
        .iter()
        .filter(|t| t.verdict == Verdict::Confirmed)
        .count();
    assert_eq!(confirmed, 2);
    for t in &audit {
        assert_ne!(t.verdict, Verdict::Violated, "{}", t.describe());
        if t.verdict == Verdict::Undetermined {
            // Only when h·d(x) is not drawn at all.
            assert!(t.lhs.is_empty(), "{}", t.describe());
        }
    }
}

#[test]
fn cofiber_of_tau_identity_holds_through_stem_59() {
    let (sphere, ctau) = (materialized("E2-mot"), materialized("E2-Ctau"));
    assert_eq!(calibrate_shift(&sphere, &ctau), Ok((1, -1)));
    // The over-lined h1⁴ at (5,3) is the top-cell image of τ-torsion at (4,4).
    let top = at(&ctau, 5, 3);
    assert_eq!(top.len(), 1);
    assert_eq!(top[0].provenance, Provenance::TopCell);
    assert!(at(&sphere, 5, 3).is_empty());
    let torsion: Vec<_> = at(&sphere, 4, 4)
        .into_iter()
        .filter(|n| !n.tau_order.is_free())
        .collect();
    assert_eq!(torsion.len(), 1);
    let out = ctau_check(&sphere, &ctau, Window::new(59, DEFAULT_F_CAP)).unwrap();
    assert_eq!(out.shift, (1, -1));
    assert!(out.findings.is_empty(), "{:?}", out.findings);
}

#[test]
fn grouping_examples() {
    let m = group_by_bidegree(&materialized("E2-mot"), 2, false).unwrap();
    let e = &m.entries[&Bidegree::new(41, 4)];
    let targets = m.generators(Bidegree::new(40, 6));
    assert_eq!((e.outgoing.rows(), e.outgoing.cols()), (targets.len(), 1));
    for (i, t) in targets.iter().enumerate() {
        let want = if *t == id(40, 6, -1) {
            TauPoly::tau_pow(1)
        } else {
            TauPoly::zero()
        };
        assert_eq!(e.outgoing.get(i, 0), &want);
    }

    // Rows are targets, so two d2's out of l at (32,7) fill one column.
    let m = group_by_bidegree(chart("Adams-cl"), 2, false).unwrap();
    let e = &m.entries[&Bidegree::new(32, 7)];
    let col = e
        .generators
        .iter()
        .position(|g| *g == id(32, 7, 0))
        .unwrap();
    let units = (0..e.outgoing.rows())
        .filter(|&i| e.outgoing.get(i, col).is_one())
        .count();
    assert_eq!(units, 2);
}

#[test]
fn turning_examples() {
    // E2 up to stem 41: h0c2 dies and τh1²e1 is left with τ-order 1.
    // P h1 h5 at (40,6) stays free, as in the published E3 chart.
    let small = materialize_towers(&chart("E2-mot").excerpt(41), DEFAULT_F_CAP).unwrap();
    let p = turn_page(&small, 2, Window::new(100, DEFAULT_F_CAP), false).unwrap();
    assert_eq!(
        p.orders(Bidegree::new(40, 6)),
        &[TauOrder::Free, TauOrder::Torsion(1)]
    );
    let mut published: Vec<TauOrder> = at(chart("E3-mot"), 40, 6)
        .iter()
        .map(|n| n.tau_order)
        .collect();
    published.sort();
    assert_eq!(p.orders(Bidegree::new(40, 6)), published.as_slice());
    assert!(p.orders(Bidegree::new(41, 4)).is_empty());
    // On the full chart a stem-41 window cuts off (42,2), so (41,4) is unknown.
    let full = turn_page(
        &materialized("E2-mot"),
        2,
        Window::new(41, DEFAULT_F_CAP),
        false,
    )
    .unwrap();
    assert!(full.indeterminate.contains(&Bidegree::new(41, 4)));

    let e3 = turn_page(
        &materialized("E3-mot"),
        3,
        Window::new(30, DEFAULT_F_CAP),
        false,
    )
    .unwrap();
    assert_eq!(e3.orders(Bidegree::new(29, 9)), &[TauOrder::Torsion(1)]);
}

#[test]
fn low_stems_of_e3_match() {
    let (_, r) = check_chain(chart("E2-mot"), &[2], chart("E3-mot"), 20, false).unwrap();
    assert!(r.is_empty(), "{}", r.to_text());
}

#[test]
fn published_chains_match_inside_their_windows() {
    for chain in CHAINS {
        let (src, dst) = (chart(chain.source), chart(chain.target));
        let stems = adams_chart::pages::default_compare_stems(src, dst);
        let (_, r) = check_chain(src, chain.pages, dst, stems, false).unwrap();
        assert_eq!(
            r.unmitigated(),
            0,
            "{} -> {}\n{}",
            chain.source,
            chain.target,
            r.to_text()
        );
    }
}

fn without_h0c2_differential() -> ChartPage {
    let mut c = chart("E2-mot").clone();
    c.diff_edges.retain(|e: &DiffEdge| e.source != id(41, 4, 0));
    c
}

#[test]
fn dropping_a_differential_shows_up_in_the_report() {
    let (_, r) = check_chain(
        &without_h0c2_differential(),
        &[2],
        chart("E3-mot"),
        65,
        false,
    )
    .unwrap();
    let kinds: Vec<(Bidegree, DiscrepancyKind)> =
        r.entries.iter().map(|e| (e.bidegree, e.kind)).collect();
    assert_eq!(
        kinds,
        vec![
            (Bidegree::new(40, 6), DiscrepancyKind::OrderMismatch),
            (Bidegree::new(41, 4), DiscrepancyKind::Extra)
        ]
    );
    let extra = &r.entries[1];
    assert_eq!(extra.computed, vec![TauOrder::Free]);
}

#[test]
fn shrinking_the_window_adds_no_discrepancies() {
    let src = without_h0c2_differential();
    let (computed, _) = check_chain(&src, &[2], chart("E3-mot"), 65, false).unwrap();
    let published = materialized("E3-mot");
    let at = |w: i32| -> BTreeSet<(Bidegree, DiscrepancyKind)> {
        compare(&computed, &published, Window::new(w, DEFAULT_F_CAP))
            .entries
            .iter()
            .map(|e| (e.bidegree, e.kind))
            .collect()
    };
    let wide = at(65);
    for w in [0, 10, 39, 40, 41, 50, 64] {
        assert!(at(w).is_subset(&wide), "window {w}");
    }
}

#[test]
fn a_chart_compared_with_itself_is_clean() {
    for tag in ["E3-mot", "Einfty-cl"] {
        let mut c = materialized(tag);
        c.diff_edges.clear();
        let p = turn_page(&c, 3, Window::new(70, DEFAULT_F_CAP), false).unwrap();
        assert!(
            compare(&p, &c, Window::new(70, DEFAULT_F_CAP)).is_empty(),
            "{tag}"
        );
    }
}

#[test]
fn extensions_appear_only_on_e_infinity_charts() {
    for c in corpus() {
        let has = !c.chart.extension_edges.is_empty();
        assert_eq!(has, c.tag.starts_with("Einfty"), "{}", c.tag);
    }
    let kinds: BTreeSet<ExtensionKind> = chart("Einfty-mot")
        .extension_edges
        .iter()
        .map(|e| e.kind)
        .collect();
    assert!(kinds.contains(&ExtensionKind::Tau));
}

#[test]
fn deleting_one_leg_is_a_violation() {
    let mut c = chart("Adams-cl").clone();
    let f0 = id(18, 4, 1);
    let y = c
        .struct_edges
        .iter()
        .find(|e| e.source == f0 && e.kind == StructKind::H0)
        .unwrap()
        .target;
    let before = c.diff_edges.len();
    c.diff_edges.retain(|e| e.source != y);
    assert_eq!(c.diff_edges.len(), before - 1);
    let hit: Vec<_> = leibniz_audit(&c)
        .into_iter()
        .filter(|t| t.x == f0 && t.kind == StructKind::H0)
        .collect();
    assert_eq!(hit.len(), 1);
    assert_eq!(hit[0].verdict, Verdict::Violated, "{}", hit[0].describe());
}
