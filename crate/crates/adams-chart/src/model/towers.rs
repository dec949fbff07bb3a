use std::collections::{BTreeMap, BTreeSet};

use super::{
    Bidegree, ChartPage, ClassId, ClassNode, DiffEdge, EdgeCell, ModelError, Provenance,
    StructEdge, StructKind, TauOrder, TowerKind, TowerStep, Variant,
};

/// Highest drawn filtration on the published grid.
pub const DEFAULT_F_CAP: i32 = 36;
/// Charts end at this stem; towers are not continued past it.
pub const MAX_STEM: i32 = 70;

/// Expands every tower arrow into explicit classes up to filtration `f_cap`.
///
/// Tower elements get their own ids, so they never collide with drawn
/// classes in the same bidegree. Drawn differentials between two tower bases
/// are continued up both towers, and differential arrows are attached to a
/// concrete element of the target tower. The result depends only on the
/// drawn part of `chart`, so materializing twice is harmless.
pub fn materialize_towers(chart: &ChartPage, f_cap: i32) -> Result<ChartPage, ModelError> {
    let mut out = strip_towers(chart);
    if let Some(node) = out
        .classes
        .values()
        .filter(|n| n.id.filtration > f_cap)
        .min_by_key(|n| n.id)
    {
        return Err(ModelError::InvalidCap {
            cap: f_cap,
            class: node.id,
            filtration: node.id.filtration,
        });
    }

    let mut towers = out.towers.clone();
    towers.sort();
    let mut succ: BTreeMap<ClassId, ClassId> = BTreeMap::new();
    let mut elements: BTreeMap<Bidegree, Vec<ClassId>> = BTreeMap::new();
    for tower in &towers {
        let Some(base) = out.classes.get(&tower.base).cloned() else {
            continue;
        };
        let (ds, df) = tower.kind.step();
        let mut prev = base.id;
        let mut depth: u16 = 1;
        loop {
            let d = i32::from(depth);
            let (s, f) = (base.id.stem + ds * d, base.id.filtration + df * d);
            if f > f_cap || s > MAX_STEM {
                break;
            }
            let id = ClassId {
                stem: s,
                filtration: f,
                nudge: base.id.nudge,
                tower: Some(TowerStep {
                    kind: tower.kind,
                    depth,
                }),
            };
            let tau_order = match (chart.variant, tower.kind) {
                (Variant::Motivic, TowerKind::H0) => base.tau_order,
                _ => TauOrder::Torsion(1),
            };
            out.classes.insert(
                id,
                ClassNode {
                    id,
                    tau_order,
                    label: None,
                    hidden_tau_marker: false,
                    provenance: base.provenance,
                },
            );
            out.struct_edges.push(StructEdge {
                source: prev,
                target: id,
                kind: match tower.kind {
                    TowerKind::H0 => StructKind::H0,
                    TowerKind::H1 => StructKind::H1,
                },
                tau_power: 0,
                may_hidden: false,
                uncertain: false,
                cell: match base.provenance {
                    Provenance::None => EdgeCell::Plain,
                    Provenance::BottomCell => EdgeCell::BottomCell,
                    Provenance::TopCell => EdgeCell::TopCell,
                },
            });
            succ.insert(prev, id);
            elements.entry(Bidegree::new(s, f)).or_default().push(id);
            prev = id;
            depth += 1;
        }
    }

    let same_tower = |a: &ClassId, b: &ClassId| match (succ.get(a), succ.get(b)) {
        (Some(x), Some(y)) => x.tower.map(|t| t.kind) == y.tower.map(|t| t.kind),
        _ => false,
    };
    let propagate = |edge: &DiffEdge, diffs: &mut Vec<DiffEdge>| {
        let (mut a, mut b) = (edge.source, edge.target);
        while same_tower(&a, &b) {
            a = succ[&a];
            b = succ[&b];
            diffs.push(DiffEdge {
                source: a,
                target: b,
                ..edge.clone()
            });
        }
    };

    let mut diffs = out.diff_edges.clone();
    diffs.sort();
    for edge in diffs.clone() {
        propagate(&edge, &mut diffs);
    }

    // Arrows hit the nearest tower element that is not already involved in a
    // differential of the same page, falling back to the nearest element.
    let mut arrows = out.diff_arrows.clone();
    arrows.sort();
    for arrow in &arrows {
        let target_bd = arrow.source.bidegree().offset(-1, i32::from(arrow.page));
        let mut candidates: Vec<ClassId> = elements
            .get(&target_bd)
            .map(|v| {
                v.iter()
                    .filter(|id| id.tower.map(|t| t.kind) == Some(TowerKind::H1))
                    .copied()
                    .collect()
            })
            .unwrap_or_default();
        candidates.sort_by_key(|id| (id.tower.map(|t| t.depth), *id));
        let busy: BTreeSet<ClassId> = diffs
            .iter()
            .filter(|e| e.page == arrow.page)
            .flat_map(|e| [e.source, e.target])
            .collect();
        let target = candidates
            .iter()
            .find(|c| !busy.contains(c))
            .or(candidates.first())
            .copied();
        let Some(target) = target else { continue };
        let edge = DiffEdge {
            source: arrow.source,
            target,
            page: arrow.page,
            tau_power: arrow.tau_power,
            uncertain: arrow.uncertain,
        };
        diffs.push(edge.clone());
        propagate(&edge, &mut diffs);
    }
    out.diff_edges = diffs;
    out.normalize();
    Ok(out)
}

/// The chart without any tower elements or edges that touch them.
fn strip_towers(chart: &ChartPage) -> ChartPage {
    let drawn = |id: &ClassId| !id.is_tower_element();
    let mut out = chart.clone();
    out.classes.retain(|id, _| drawn(id));
    out.struct_edges
        .retain(|e| drawn(&e.source) && drawn(&e.target));
    out.diff_edges
        .retain(|e| drawn(&e.source) && drawn(&e.target));
    out.extension_edges
        .retain(|e| drawn(&e.source) && drawn(&e.target));
    out
}

#[cfg(test)]
mod tests {
    use super::super::{PageKind, TowerArrow};
    use super::*;

    fn node(s: i32, f: i32, order: TauOrder) -> ClassNode {
        ClassNode {
            id: ClassId::drawn(s, f, 0),
            tau_order: order,
            label: None,
            hidden_tau_marker: false,
            provenance: Provenance::None,
        }
    }

    fn h1_chart() -> ChartPage {
        let mut c = ChartPage::new(Variant::Motivic, PageKind::E2);
        c.add_class(node(4, 4, TauOrder::Torsion(1)));
        c.towers.push(TowerArrow {
            base: ClassId::drawn(4, 4, 0),
            kind: TowerKind::H1,
            tau_annihilated: true,
        });
        c
    }

    #[test]
    fn h1_tower_grows_along_slope_one() {
        let m = materialize_towers(&h1_chart(), 6).unwrap();
        let bds: Vec<_> = m
            .classes
            .keys()
            .map(|id| (id.stem, id.filtration))
            .collect();
        assert_eq!(bds, vec![(4, 4), (5, 5), (6, 6)]);
        assert!(m
            .classes
            .values()
            .all(|n| n.tau_order == TauOrder::Torsion(1)));
        assert_eq!(m.struct_edges.len(), 2);
    }

    #[test]
    fn cap_at_base_changes_nothing() {
        let c = h1_chart();
        let mut m = materialize_towers(&c, 4).unwrap();
        m.normalize();
        let mut c2 = c.clone();
        c2.normalize();
        assert_eq!(m, c2);
    }

    #[test]
    fn cap_below_drawn_class_is_rejected() {
        assert!(matches!(
            materialize_towers(&h1_chart(), 3),
            Err(ModelError::InvalidCap { cap: 3, .. })
        ));
    }

    #[test]
    fn idempotent_and_monotone() {
        let once = materialize_towers(&h1_chart(), 9).unwrap();
        assert_eq!(materialize_towers(&once, 9).unwrap(), once);
        let bigger = materialize_towers(&h1_chart(), 12).unwrap();
        assert!(once.classes.keys().all(|k| bigger.classes.contains_key(k)));
    }

    #[test]
    fn differentials_follow_parallel_towers() {
        let mut c = ChartPage::new(Variant::Motivic, PageKind::E2);
        c.add_class(node(10, 2, TauOrder::Free));
        c.add_class(node(9, 4, TauOrder::Free));
        for base in [ClassId::drawn(10, 2, 0), ClassId::drawn(9, 4, 0)] {
            c.towers.push(TowerArrow {
                base,
                kind: TowerKind::H1,
                tau_annihilated: true,
            });
        }
        c.diff_edges.push(DiffEdge {
            source: ClassId::drawn(10, 2, 0),
            target: ClassId::drawn(9, 4, 0),
            page: 2,
            tau_power: 0,
            uncertain: false,
        });
        let m = materialize_towers(&c, 6).unwrap();
        // (10,2)→(9,4) continues as (11,3)→(10,5) and (12,4)→(11,6).
        let pairs: Vec<_> = m
            .diff_edges
            .iter()
            .map(|e| (e.source.bidegree(), e.target.bidegree()))
            .collect();
        assert_eq!(
            pairs,
            vec![
                (Bidegree::new(10, 2), Bidegree::new(9, 4)),
                (Bidegree::new(11, 3), Bidegree::new(10, 5)),
                (Bidegree::new(12, 4), Bidegree::new(11, 6)),
            ]
        );
    }
}
