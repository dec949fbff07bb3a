//! Per-chart counts for the `stats` report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::{Bidegree, ChartPage};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChartStats {
    pub tag: String,
    pub classes: usize,
    pub by_bidegree: BTreeMap<Bidegree, usize>,
    /// Keyed by the τ-order's text form.
    pub tau_orders: BTreeMap<String, usize>,
    /// Keyed by `species.kind`, e.g. `struct.h1` or `diff.d3`.
    pub edges: BTreeMap<String, usize>,
}

pub fn chart_stats(chart: &ChartPage) -> ChartStats {
    let mut s = ChartStats {
        tag: chart.tag().to_string(),
        classes: chart.classes.len(),
        ..ChartStats::default()
    };
    for node in chart.classes.values() {
        *s.by_bidegree.entry(node.bidegree()).or_default() += 1;
        *s.tau_orders.entry(node.tau_order.to_string()).or_default() += 1;
    }
    let mut bump = |k: String| *s.edges.entry(k).or_default() += 1;
    for e in &chart.struct_edges {
        bump(format!("struct.{}", e.kind.as_str()));
    }
    for e in &chart.diff_edges {
        bump(format!("diff.d{}", e.page));
    }
    for a in &chart.diff_arrows {
        bump(format!("arrow.d{}", a.page));
    }
    for e in &chart.extension_edges {
        bump(format!("ext.{}", e.kind.as_str()));
    }
    for t in &chart.towers {
        bump(format!("tower.{}", t.kind.as_str()));
    }
    s
}

impl ChartStats {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "chart {} classes {}", self.tag, self.classes);
        for (k, n) in &self.tau_orders {
            let _ = writeln!(out, "{} order {k} {n}", self.tag);
        }
        for (k, n) in &self.edges {
            let _ = writeln!(out, "{} edge {k} {n}", self.tag);
        }
        for (bd, n) in &self.by_bidegree {
            let _ = writeln!(
                out,
                "{} bidegree {},{} {n}",
                self.tag, bd.stem, bd.filtration
            );
        }
        out
    }
}
