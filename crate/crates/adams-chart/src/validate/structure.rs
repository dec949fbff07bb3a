use std::collections::BTreeMap;

use crate::model::{
    diff_shift, struct_shift, Bidegree, ChartPage, ClassId, EdgeKind, ExtensionKind, PageKind,
    Provenance, TauOrder, TowerKind, Variant,
};
use crate::tau::TauPoly;

use super::{Finding, Severity};

struct Sink<'a> {
    chart: &'a str,
    out: Vec<Finding>,
}

impl Sink<'_> {
    fn push(
        &mut self,
        severity: Severity,
        rule: &'static str,
        at: Option<Bidegree>,
        edge: Option<String>,
        msg: String,
    ) {
        self.out.push(Finding {
            chart: self.chart.to_string(),
            bidegree: at,
            rule,
            severity,
            edge,
            message: msg,
        });
    }

    fn error(&mut self, rule: &'static str, at: Bidegree, edge: Option<String>, msg: String) {
        self.push(Severity::Error, rule, Some(at), edge, msg);
    }
}

/// Target, τ power and uncertainty of one edge.
type Leg = (ClassId, u8, bool);

fn edge(a: &ClassId, b: &ClassId) -> Option<String> {
    Some(format!("{a}>{b}"))
}

/// Pages on which a chart may draw differentials as solid lines.
fn solid_pages(chart: &ChartPage) -> &'static [u8] {
    match (chart.variant, chart.page) {
        (Variant::Classical, PageKind::E2) => &[2, 3, 4, 5],
        (_, PageKind::E2) => &[2],
        (_, PageKind::E3) => &[3],
        (_, PageKind::E4) => &[4, 5],
        (_, PageKind::Cohomology | PageKind::Einf) => &[],
    }
}

fn tau_coherent(power: u8, target: TauOrder) -> bool {
    match target {
        TauOrder::Free => true,
        TauOrder::Torsion(k) => u32::from(power) < k,
    }
}

/// Checks one chart against the bidegree laws and legend vocabulary.
///
/// Violations of laws the legends state outright are errors. A nonzero
/// composite d_r∘d_r is an inference and only a warning.
pub fn validate_structure(chart: &ChartPage) -> Vec<Finding> {
    let mut sink = Sink {
        chart: chart.tag(),
        out: Vec::new(),
    };
    let motivic = chart.variant == Variant::Motivic;

    for (id, node) in &chart.classes {
        let at = id.bidegree();
        let order_ok = match (chart.variant, node.tau_order) {
            (Variant::Motivic, TauOrder::Free) => true,
            (Variant::Motivic, TauOrder::Torsion(k)) => (1..=4).contains(&k),
            (_, o) => o == TauOrder::Torsion(1),
        };
        if !order_ok {
            let msg = format!(
                "class {id} has τ-order {} in a {} chart",
                node.tau_order,
                chart.variant.as_str()
            );
            sink.error("tau-order-variant", at, None, msg);
        }
        if node.hidden_tau_marker && !motivic {
            sink.error(
                "hidden-tau-variant",
                at,
                None,
                format!("hidden τ marker on {id} outside a motivic chart"),
            );
        }
        let cofiber = chart.variant == Variant::CofiberTau;
        if cofiber == (node.provenance == Provenance::None) {
            let msg = format!(
                "class {id} has cell provenance '{}'",
                node.provenance.as_str()
            );
            sink.error("provenance-variant", at, None, msg);
        }
    }

    let class = |id: &ClassId| chart.classes.get(id);
    let endpoints = |sink: &mut Sink, ids: &[&ClassId]| -> bool {
        let mut ok = true;
        for id in ids {
            if class(id).is_none() {
                sink.error(
                    "endpoint",
                    id.bidegree(),
                    Some(id.to_string()),
                    format!("edge endpoint {id} is not a class"),
                );
                ok = false;
            }
        }
        ok
    };

    for e in &chart.struct_edges {
        if !endpoints(&mut sink, &[&e.source, &e.target]) {
            continue;
        }
        let (ds, df) = (
            e.target.stem - e.source.stem,
            e.target.filtration - e.source.filtration,
        );
        if !struct_shift(EdgeKind::from(e.kind)).admits(ds, df) {
            let msg = format!("{} edge has shift ({ds},{df})", e.kind.as_str());
            sink.error(
                "struct-shift",
                e.source.bidegree(),
                edge(&e.source, &e.target),
                msg,
            );
        }
        if e.tau_power > 0 && !motivic {
            let msg = format!(
                "τ^{} coefficient in a {} chart",
                e.tau_power,
                chart.variant.as_str()
            );
            sink.error(
                "tau-power-variant",
                e.source.bidegree(),
                edge(&e.source, &e.target),
                msg,
            );
        }
        let order = chart.classes[&e.target].tau_order;
        if !tau_coherent(e.tau_power, order) {
            let msg = format!("τ^{} times a class of τ-order {order} is zero", e.tau_power);
            sink.error(
                "tau-coherence",
                e.target.bidegree(),
                edge(&e.source, &e.target),
                msg,
            );
        }
    }

    let solid = solid_pages(chart);
    let chart_r = chart.page.number().unwrap_or(u8::MAX);
    let mut outgoing: BTreeMap<(u8, ClassId), Vec<Leg>> = BTreeMap::new();
    for e in &chart.diff_edges {
        if !endpoints(&mut sink, &[&e.source, &e.target]) {
            continue;
        }
        let (ds, df) = (
            e.target.stem - e.source.stem,
            e.target.filtration - e.source.filtration,
        );
        match diff_shift(i64::from(e.page)) {
            Ok(shift) if shift == (ds, df) => {}
            _ => {
                let msg = format!("d{} edge has shift ({ds},{df})", e.page);
                sink.error(
                    "diff-shift",
                    e.source.bidegree(),
                    edge(&e.source, &e.target),
                    msg,
                );
            }
        }
        let page_ok = solid.contains(&e.page)
            || (e.uncertain && (e.page < chart_r || chart.page == PageKind::Einf));
        if !page_ok {
            let msg = format!(
                "{}d{} on the {} chart",
                if e.uncertain { "uncertain " } else { "" },
                e.page,
                chart.page.as_str()
            );
            sink.error(
                "diff-page",
                e.source.bidegree(),
                edge(&e.source, &e.target),
                msg,
            );
        }
        if e.tau_power > 0 && !motivic {
            let msg = format!(
                "τ^{} coefficient in a {} chart",
                e.tau_power,
                chart.variant.as_str()
            );
            sink.error(
                "tau-power-variant",
                e.source.bidegree(),
                edge(&e.source, &e.target),
                msg,
            );
        }
        let order = chart.classes[&e.target].tau_order;
        if !tau_coherent(e.tau_power, order) {
            let msg = format!("τ^{} times a class of τ-order {order} is zero", e.tau_power);
            sink.error(
                "tau-coherence",
                e.target.bidegree(),
                edge(&e.source, &e.target),
                msg,
            );
        }
        outgoing
            .entry((e.page, e.source))
            .or_default()
            .push((e.target, e.tau_power, e.uncertain));
    }
    // A class hit by a d_r may itself support one only if the τ-weighted
    // composite vanishes.
    for (&(page, x), ys) in &outgoing {
        let mut composite: BTreeMap<ClassId, TauPoly> = BTreeMap::new();
        let mut uncertain = false;
        for &(y, p, u1) in ys {
            for &(z, q, u2) in outgoing.get(&(page, y)).map_or(&[][..], Vec::as_slice) {
                uncertain |= u1 || u2;
                let slot = composite.entry(z).or_insert_with(TauPoly::zero);
                *slot = &*slot + &TauPoly::tau_pow(u32::from(p) + u32::from(q));
            }
        }
        composite.retain(|z, c| {
            !chart
                .classes
                .get(z)
                .map_or(c.clone(), |n| n.tau_order.reduce(c))
                .is_zero()
        });
        if !composite.is_empty() {
            let flagged = if uncertain {
                " (uncertain edge involved)"
            } else {
                ""
            };
            let hit: Vec<String> = composite.keys().map(ToString::to_string).collect();
            let msg = format!(
                "d{page}∘d{page}({x}) is nonzero on {}{flagged}",
                hit.join(",")
            );
            sink.push(
                Severity::Warning,
                "dr-overlap",
                Some(x.bidegree()),
                Some(x.to_string()),
                msg,
            );
        }
    }

    for a in &chart.diff_arrows {
        if !endpoints(&mut sink, &[&a.source]) {
            continue;
        }
        if diff_shift(i64::from(a.page)).is_err() {
            sink.error(
                "diff-shift",
                a.source.bidegree(),
                Some(a.source.to_string()),
                format!("d{} arrow", a.page),
            );
        }
        let page_ok = solid.contains(&a.page) || (a.uncertain && a.page < chart_r);
        if !page_ok {
            let msg = format!("d{} arrow on the {} chart", a.page, chart.page.as_str());
            sink.error(
                "diff-page",
                a.source.bidegree(),
                Some(a.source.to_string()),
                msg,
            );
        }
        if a.tau_power > 0 && !motivic {
            let msg = format!(
                "τ^{} coefficient in a {} chart",
                a.tau_power,
                chart.variant.as_str()
            );
            sink.error(
                "tau-power-variant",
                a.source.bidegree(),
                Some(a.source.to_string()),
                msg,
            );
        }
    }

    for e in &chart.extension_edges {
        if !endpoints(&mut sink, &[&e.source, &e.target]) {
            continue;
        }
        let (ds, df) = (
            e.target.stem - e.source.stem,
            e.target.filtration - e.source.filtration,
        );
        if !struct_shift(EdgeKind::from(e.kind)).admits(ds, df) {
            let msg = format!("{} extension has shift ({ds},{df})", e.kind.as_str());
            sink.error(
                "ext-shift",
                e.source.bidegree(),
                edge(&e.source, &e.target),
                msg,
            );
        }
        if chart.page != PageKind::Einf || (e.kind == ExtensionKind::Tau && !motivic) {
            let msg = format!(
                "{} extension on the {} {} chart",
                e.kind.as_str(),
                chart.variant.as_str(),
                chart.page.as_str()
            );
            sink.error(
                "ext-variant",
                e.source.bidegree(),
                edge(&e.source, &e.target),
                msg,
            );
        }
    }

    for t in &chart.towers {
        if !endpoints(&mut sink, &[&t.base]) {
            continue;
        }
        let expected = chart.variant != Variant::Classical && t.kind == TowerKind::H1;
        if t.tau_annihilated != expected {
            let msg = format!(
                "{} on {} has τ-annihilated = {}",
                t.kind.as_str(),
                t.base,
                t.tau_annihilated
            );
            sink.error(
                "tower-tau",
                t.base.bidegree(),
                Some(t.base.to_string()),
                msg,
            );
        }
    }

    sink.out.sort();
    sink.out
}
