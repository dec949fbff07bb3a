//! Page turning: the E_{r+1} skeleton computed from an E_r chart, and its
//! comparison with the published next page.

mod chain;
mod compare;
mod turn;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{Bidegree, ChartPage, ClassId, DiffEdge};
use crate::tau::{AlgebraError, PolyMatrix, PresentedModule, TauPoly};

pub use chain::{check_chain, default_compare_stems, Chain, ChainError, CHAINS};
pub use compare::{compare, Discrepancy, DiscrepancyKind, DiscrepancyReport, Mitigation};
pub use turn::{turn_page, turn_pages, ComputedPage};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PageError {
    #[error("differential page {0} is not between 2 and 5")]
    InvalidPage(u8),
    #[error("d{page} edge {source_id} -> {target} refers to a class not in the chart")]
    MissingGenerator {
        page: u8,
        source_id: ClassId,
        target: ClassId,
    },
    #[error("d{page} edge {source_id} -> {target} does not have shift (-1,{page})")]
    BadShift {
        page: u8,
        source_id: ClassId,
        target: ClassId,
    },
    #[error("E{page} at {bidegree}: {source}")]
    Algebra {
        page: u8,
        bidegree: Bidegree,
        source: AlgebraError,
    },
    #[error("E{page}: the image of {source_bd} is not a cycle at {target_bd}")]
    TargetNotCycle {
        page: u8,
        source_bd: Bidegree,
        target_bd: Bidegree,
    },
}

/// Stems and filtrations inside which the input chart is taken to be complete.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window {
    pub max_stem: i32,
    pub max_filtration: i32,
}

impl Window {
    pub fn new(max_stem: i32, max_filtration: i32) -> Self {
        Window {
            max_stem,
            max_filtration,
        }
    }

    pub fn contains(&self, bd: Bidegree) -> bool {
        bd.stem <= self.max_stem && bd.filtration <= self.max_filtration
    }
}

/// Generators of one bidegree with the d_r matrices into and out of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BidegreeEntry {
    /// Ordered by (nudge, id).
    pub generators: Vec<ClassId>,
    pub module: PresentedModule,
    /// Rows are the generators at (s-1, f+r), columns these generators.
    pub outgoing: PolyMatrix,
    /// Rows are these generators, columns the generators at (s+1, f-r).
    pub incoming: PolyMatrix,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BidegreeModuleMap {
    pub page: u8,
    pub entries: BTreeMap<Bidegree, BidegreeEntry>,
}

impl BidegreeModuleMap {
    pub fn generators(&self, bd: Bidegree) -> &[ClassId] {
        self.entries
            .get(&bd)
            .map_or(&[], |e| e.generators.as_slice())
    }
}

/// The d_r edges of `chart` used for page turning.
pub fn differentials(
    chart: &ChartPage,
    r: u8,
    include_uncertain: bool,
) -> impl Iterator<Item = &DiffEdge> {
    chart
        .diff_edges
        .iter()
        .filter(move |e| e.page == r && (include_uncertain || !e.uncertain))
}

/// Regroups a (materialized) chart by bidegree with its d_r matrices. Each
/// d_r edge contributes τ^(tau_power) to its matrix entry.
pub fn group_by_bidegree(
    chart: &ChartPage,
    r: u8,
    include_uncertain: bool,
) -> Result<BidegreeModuleMap, PageError> {
    if !(2..=5).contains(&r) {
        return Err(PageError::InvalidPage(r));
    }
    let groups = chart.by_bidegree();
    let index =
        |bd: Bidegree, id: &ClassId| groups.get(&bd).and_then(|g| g.iter().position(|x| x == id));
    let mut entries: BTreeMap<Bidegree, BidegreeEntry> = groups
        .iter()
        .map(|(bd, gens)| {
            let n = gens.len();
            let n_out = groups.get(&bd.offset(-1, i32::from(r))).map_or(0, Vec::len);
            let n_in = groups.get(&bd.offset(1, -i32::from(r))).map_or(0, Vec::len);
            let module =
                PresentedModule::new(gens.iter().map(|g| chart.classes[g].tau_order).collect());
            let entry = BidegreeEntry {
                generators: gens.clone(),
                module,
                outgoing: PolyMatrix::zeros(n_out, n),
                incoming: PolyMatrix::zeros(n, n_in),
            };
            (*bd, entry)
        })
        .collect();
    for e in differentials(chart, r, include_uncertain) {
        let missing = || PageError::MissingGenerator {
            page: r,
            source_id: e.source,
            target: e.target,
        };
        let (sb, tb) = (e.source.bidegree(), e.target.bidegree());
        if tb != sb.offset(-1, i32::from(r)) {
            return Err(PageError::BadShift {
                page: r,
                source_id: e.source,
                target: e.target,
            });
        }
        let j = index(sb, &e.source).ok_or_else(missing)?;
        let i = index(tb, &e.target).ok_or_else(missing)?;
        let p = TauPoly::tau_pow(u32::from(e.tau_power));
        entries
            .get_mut(&sb)
            .expect("source bidegree is occupied")
            .outgoing
            .add_to(i, j, &p);
        entries
            .get_mut(&tb)
            .expect("target bidegree is occupied")
            .incoming
            .add_to(i, j, &p);
    }
    Ok(BidegreeModuleMap { page: r, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ClassNode, PageKind, Provenance, TauOrder, Variant};

    pub(crate) fn class(chart: &mut ChartPage, s: i32, f: i32, n: i8, order: TauOrder) -> ClassId {
        let id = ClassId::drawn(s, f, n);
        chart.add_class(ClassNode {
            id,
            tau_order: order,
            label: None,
            hidden_tau_marker: false,
            provenance: Provenance::None,
        });
        id
    }

    pub(crate) fn diff(chart: &mut ChartPage, a: ClassId, b: ClassId, page: u8, tau_power: u8) {
        chart.diff_edges.push(DiffEdge {
            source: a,
            target: b,
            page,
            tau_power,
            uncertain: false,
        });
    }

    #[test]
    fn tau_entry_for_a_tau_differential() {
        let mut c = ChartPage::new(Variant::Motivic, PageKind::E2);
        let x = class(&mut c, 41, 4, 0, TauOrder::Free);
        let y = class(&mut c, 40, 6, 0, TauOrder::Free);
        diff(&mut c, x, y, 2, 1);
        let m = group_by_bidegree(&c, 2, false).unwrap();
        let e = &m.entries[&Bidegree::new(41, 4)];
        assert_eq!(
            e.outgoing,
            PolyMatrix::from_rows(vec![vec![TauPoly::tau_pow(1)]])
        );
        assert_eq!(m.entries[&Bidegree::new(40, 6)].incoming, e.outgoing);
    }

    #[test]
    fn no_differentials_means_zero_matrices() {
        let mut c = ChartPage::new(Variant::Classical, PageKind::E2);
        class(&mut c, 1, 1, 0, TauOrder::Torsion(1));
        class(&mut c, 0, 3, 0, TauOrder::Torsion(1));
        let m = group_by_bidegree(&c, 2, false).unwrap();
        assert!(m
            .entries
            .values()
            .all(|e| e.outgoing.is_zero() && e.incoming.is_zero()));
        assert_eq!(m.entries[&Bidegree::new(1, 1)].outgoing.rows(), 1);
    }

    #[test]
    fn rejects_bad_pages_and_shifts() {
        let mut c = ChartPage::new(Variant::Classical, PageKind::E2);
        let a = class(&mut c, 5, 1, 0, TauOrder::Torsion(1));
        let b = class(&mut c, 4, 4, 0, TauOrder::Torsion(1));
        diff(&mut c, a, b, 2, 0);
        assert_eq!(
            group_by_bidegree(&c, 6, false),
            Err(PageError::InvalidPage(6))
        );
        assert!(matches!(
            group_by_bidegree(&c, 2, false),
            Err(PageError::BadShift { .. })
        ));
    }
}
