//! The corpus, an independent text scan of it, and the pinned fixtures.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use adams_chart::extract::{extract_document, ExtractedChart};
use adams_chart::model::{
    materialize_towers, Bidegree, ChartPage, ClassId, ClassNode, StructKind, DEFAULT_F_CAP,
};

pub const DOCUMENT: &str = include_str!("../../../../paper.md");

pub fn corpus() -> &'static [ExtractedChart] {
    static CORPUS: OnceLock<Vec<ExtractedChart>> = OnceLock::new();
    CORPUS.get_or_init(|| extract_document(DOCUMENT).expect("corpus extracts"))
}

pub fn chart(tag: &str) -> &'static ChartPage {
    &corpus()
        .iter()
        .find(|c| c.tag == tag)
        .unwrap_or_else(|| panic!("no chart {tag}"))
        .chart
}

pub fn materialized(tag: &str) -> ChartPage {
    materialize_towers(chart(tag), DEFAULT_F_CAP).unwrap()
}

/// Dot and square commands per picture, straight from the text: (all, distinct).
pub fn text_scan() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut block: Option<Vec<&str>> = None;
    for line in DOCUMENT.lines().map(str::trim) {
        if line.starts_with("\\begin{pspicture}") {
            block = Some(Vec::new());
        } else if line.starts_with("\\end{pspicture}") {
            let cmds: Vec<&str> = block
                .take()
                .unwrap()
                .into_iter()
                .filter(|l| l.starts_with("\\pscircle*") || l.starts_with("\\psframe"))
                .collect();
            let distinct: BTreeSet<&str> = cmds.iter().copied().collect();
            out.push((cmds.len(), distinct.len()));
        } else if let Some(b) = block.as_mut() {
            b.push(line);
        }
    }
    out
}

pub fn at(c: &ChartPage, s: i32, f: i32) -> Vec<&ClassNode> {
    c.classes
        .values()
        .filter(|n| n.bidegree() == Bidegree::new(s, f))
        .collect()
}

pub fn id(s: i32, f: i32, n: i8) -> ClassId {
    ClassId::drawn(s, f, n)
}

pub fn has_diff(c: &ChartPage, from: ClassId, to: ClassId, page: u8, tau: u8) -> bool {
    c.diff_edges.iter().any(|e| {
        e.source == from && e.target == to && e.page == page && e.tau_power == tau && !e.uncertain
    })
}

pub fn has_h0(c: &ChartPage, from: ClassId, to: ClassId, tau: u8) -> bool {
    c.struct_edges.iter().any(|e| {
        e.source == from && e.target == to && e.kind == StructKind::H0 && e.tau_power == tau
    })
}

pub fn label(c: &ChartPage, id: ClassId) -> &str {
    c.classes[&id].name().unwrap_or("")
}

/// Each pinned fact, checked on one chart.
pub fn pinned(tag: &str, c: &ChartPage) -> Vec<(&'static str, bool)> {
    match tag {
        "E2-mot" => vec![
            (
                "d2(h0 c2) = τ h1² e1",
                has_diff(c, id(41, 4, 0), id(40, 6, -1), 2, 1),
            ),
            (
                "d2(h0 y) = τ² h0 e0 g",
                has_diff(c, id(38, 7, 0), id(37, 9, 0), 2, 2),
            ),
            ("h0 · h0h2 = τ h1³", has_h0(c, id(3, 2, 0), id(3, 3, 0), 1)),
            (
                "h0 · h0³x = τ² h0 e0 g",
                has_h0(c, id(37, 8, -1), id(37, 9, 0), 2),
            ),
        ],
        "E3-mot" => vec![
            (
                "d3(r) = τ h1 d0²",
                has_diff(c, id(30, 6, 0), id(29, 9, 0), 3, 1),
            ),
            (
                "d3(Q2) = τ² g t",
                has_diff(c, id(57, 7, 0), id(56, 10, -1), 3, 2)
                    && label(c, id(57, 7, 0)) == "$Q_2$",
            ),
            (
                "d3(τ W1) = τ⁴ e0⁴",
                has_diff(c, id(69, 13, 0), id(68, 16, 0), 3, 4)
                    && label(c, id(69, 13, 0)) == "$\\tau W_1$",
            ),
        ],
        "E4-mot" => vec![(
            "d5(τ P h5 e0) = τ d0 z",
            has_diff(c, id(56, 9, 0), id(55, 14, 0), 5, 1),
        )],
        "cohlgy-mot" => vec![
            (
                "τ · P c0 d0 = h0⁵ r",
                c.classes
                    .get(&id(30, 11, 0))
                    .is_some_and(|n| n.hidden_tau_marker),
            ),
            ("h0 · h0h2 = τ h1³", has_h0(c, id(3, 2, 0), id(3, 3, 0), 1)),
            (
                "h0 · h0³x = τ² h0 e0 g",
                has_h0(c, id(37, 8, -1), id(37, 9, 0), 2),
            ),
        ],
        _ => Vec::new(),
    }
}
