use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::model::{Bidegree, ChartPage, DiffEdge, Feature, PageKind};
use crate::tau::TauOrder;

use super::{ComputedPage, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiscrepancyKind {
    /// Computed summands where the published page has none.
    Extra,
    /// Published summands where nothing was computed.
    Missing,
    /// Both sides have summands but the τ-orders differ.
    OrderMismatch,
}

impl DiscrepancyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiscrepancyKind::Extra => "extra",
            DiscrepancyKind::Missing => "missing",
            DiscrepancyKind::OrderMismatch => "order_mismatch",
        }
    }
}

/// Reasons a discrepancy may not reflect an error in either chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mitigation {
    /// An uncertain differential touching this bidegree was left out.
    UncertainEdge,
    /// A differential neighbour is indeterminate.
    WindowBoundary,
    /// Tower elements sit here, and towers are cut off at a finite filtration.
    TowerTruncation,
    /// The published page is only a subquotient here.
    SubquotientNote,
}

impl Mitigation {
    pub fn as_str(self) -> &'static str {
        match self {
            Mitigation::UncertainEdge => "uncertain_edge",
            Mitigation::WindowBoundary => "window_boundary",
            Mitigation::TowerTruncation => "tower_truncation",
            Mitigation::SubquotientNote => "subquotient_note",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub bidegree: Bidegree,
    pub kind: DiscrepancyKind,
    pub computed: Vec<TauOrder>,
    pub published: Vec<TauOrder>,
    pub edges: Vec<DiffEdge>,
    pub mitigations: BTreeSet<Mitigation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiscrepancyReport {
    /// Sorted by bidegree.
    pub entries: Vec<Discrepancy>,
    /// Bidegrees compared.
    pub compared: usize,
    /// Bidegrees inside the window left out because they are indeterminate.
    pub indeterminate: usize,
}

impl DiscrepancyReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn unmitigated(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.mitigations.is_empty())
            .count()
    }

    /// One line per entry; a final summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{e}");
        }
        let _ = writeln!(
            out,
            "summary compared={} indeterminate={} discrepancies={} unmitigated={}",
            self.compared,
            self.indeterminate,
            self.entries.len(),
            self.unmitigated()
        );
        out
    }
}

fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    if v.is_empty() {
        "-".to_string()
    } else {
        v.join(",")
    }
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges = list(
            self.edges
                .iter()
                .map(|e| format!("d{}:{}>{}", e.page, e.source, e.target)),
        );
        write!(
            f,
            "{} {} computed={} published={} edges={} mitigations={}",
            self.bidegree,
            self.kind.as_str(),
            list(&self.computed),
            list(&self.published),
            edges,
            list(self.mitigations.iter().map(|m| m.as_str()))
        )
    }
}

/// Compares per-bidegree τ-order multisets of a computed page against a
/// published chart (with towers materialized) inside `window`.
///
/// Bidegrees above the published chart's highest drawn class and bidegrees
/// the computation marks indeterminate are not compared.
pub fn compare(
    computed: &ComputedPage,
    published: &ChartPage,
    window: Window,
) -> DiscrepancyReport {
    let mut pub_orders: BTreeMap<Bidegree, Vec<TauOrder>> = BTreeMap::new();
    let mut pub_towers = BTreeSet::new();
    for (id, node) in &published.classes {
        pub_orders
            .entry(id.bidegree())
            .or_default()
            .push(node.tau_order);
        if id.is_tower_element() {
            pub_towers.insert(id.bidegree());
        }
    }
    for v in pub_orders.values_mut() {
        v.sort();
    }
    let top = published.max_drawn_filtration().unwrap_or(i32::MIN);
    let in_scope = |bd: &Bidegree| window.contains(*bd) && bd.filtration <= top;
    let keys: BTreeSet<Bidegree> = computed
        .summands
        .keys()
        .chain(pub_orders.keys())
        .chain(&computed.indeterminate)
        .filter(|bd| in_scope(bd))
        .copied()
        .collect();
    let class_window = published.window(Feature::Classes);

    let mut report = DiscrepancyReport::default();
    for bd in keys {
        if computed.indeterminate.contains(&bd) {
            report.indeterminate += 1;
            continue;
        }
        report.compared += 1;
        let c = computed.orders(bd);
        let p = pub_orders.get(&bd).map_or(&[][..], Vec::as_slice);
        if c == p {
            continue;
        }
        let kind = match (c.is_empty(), p.is_empty()) {
            (false, true) => DiscrepancyKind::Extra,
            (true, false) => DiscrepancyKind::Missing,
            _ => DiscrepancyKind::OrderMismatch,
        };
        let edges = computed.contributing.get(&bd).cloned().unwrap_or_default();
        let mut mitigations = BTreeSet::new();
        if computed.excluded_uncertain.contains(&bd) || edges.iter().any(|e| e.uncertain) {
            mitigations.insert(Mitigation::UncertainEdge);
        }
        let near_boundary = computed.pages.iter().any(|&r| {
            let r = i32::from(r);
            computed.indeterminate.contains(&bd.offset(1, -r))
                || computed.indeterminate.contains(&bd.offset(-1, r))
        });
        if near_boundary {
            mitigations.insert(Mitigation::WindowBoundary);
        }
        if computed.tower_bidegrees.contains(&bd) || pub_towers.contains(&bd) {
            mitigations.insert(Mitigation::TowerTruncation);
        }
        if published.page == PageKind::Einf && class_window.is_some_and(|w| bd.stem > w) {
            mitigations.insert(Mitigation::SubquotientNote);
        }
        report.entries.push(Discrepancy {
            bidegree: bd,
            kind,
            computed: c.to_vec(),
            published: p.to_vec(),
            edges,
            mitigations,
        });
    }
    report
}
