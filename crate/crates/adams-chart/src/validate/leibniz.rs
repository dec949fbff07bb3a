use std::collections::BTreeMap;

use crate::model::{ChartPage, ClassId, PageKind, StructKind, Variant};
use crate::tau::TauPoly;

use super::{Finding, Severity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Confirmed,
    Violated,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Confirmed => "confirmed",
            Verdict::Violated => "violated",
            Verdict::Undetermined => "undetermined",
        }
    }
}

type Vector = BTreeMap<ClassId, TauPoly>;

/// d_r(h·x) against h·d_r(x) for one class x and one h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizTriple {
    pub x: ClassId,
    pub kind: StructKind,
    pub page: u8,
    /// h·d_r(x), by target class.
    pub lhs: Vector,
    /// d_r(h·x), by target class.
    pub rhs: Vector,
    pub verdict: Verdict,
}

/// Target, τ power and uncertainty of one edge.
type Leg = (ClassId, u8, bool);

fn format_vector(v: &Vector) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    let terms: Vec<String> = v
        .iter()
        .map(|(id, c)| {
            if c.is_one() {
                id.to_string()
            } else {
                format!("({c})·{id}")
            }
        })
        .collect();
    terms.join(" + ")
}

impl LeibnizTriple {
    pub fn describe(&self) -> String {
        format!(
            "{}·d{}({}) = {} vs d{}({}·{}) = {}",
            self.kind.as_str(),
            self.page,
            self.x,
            format_vector(&self.lhs),
            self.page,
            self.kind.as_str(),
            self.x,
            format_vector(&self.rhs)
        )
    }
}

/// Page whose differentials act on the chart's own classes.
fn own_page(chart: &ChartPage) -> Option<u8> {
    match (chart.variant, chart.page) {
        (_, PageKind::Cohomology | PageKind::Einf) => None,
        (Variant::Classical, PageKind::E2) => Some(2),
        (_, p) => p.number(),
    }
}

/// Checks d_r(h·x) = h·d_r(x) wherever the chart draws both an h-product and a
/// d_r out of the same class x, for the chart's own page r.
///
/// Both sides are compared as vectors with τ-power coefficients, reduced by the
/// target classes' τ-orders. Equal nonzero sides confirm the rule. A nonzero
/// h·d_r(x) against a different d_r(h·x) is a violation: differentials are
/// drawn completely on their page. A zero h·d_r(x) with nonzero d_r(h·x) is
/// undetermined, since products may be left undrawn. Uncertain legs, and legs
/// through materialized tower elements, make the whole triple undetermined.
pub fn leibniz_audit(chart: &ChartPage) -> Vec<LeibnizTriple> {
    let Some(r) = own_page(chart) else {
        return Vec::new();
    };
    let mut diffs: BTreeMap<ClassId, Vec<Leg>> = BTreeMap::new();
    for e in chart.diff_edges.iter().filter(|e| e.page == r) {
        diffs
            .entry(e.source)
            .or_default()
            .push((e.target, e.tau_power, e.uncertain));
    }
    let mut products: BTreeMap<(ClassId, StructKind), Vec<Leg>> = BTreeMap::new();
    for e in &chart.struct_edges {
        products
            .entry((e.source, e.kind))
            .or_default()
            .push((e.target, e.tau_power, e.uncertain));
    }

    let reduce = |v: &mut Vector| {
        for (id, c) in v.iter_mut() {
            if let Some(node) = chart.classes.get(id) {
                *c = node.tau_order.reduce(c);
            }
        }
        v.retain(|_, c| !c.is_zero());
    };
    let add = |v: &mut Vector, id: ClassId, c: TauPoly| {
        let slot = v.entry(id).or_insert_with(TauPoly::zero);
        *slot = &*slot + &c;
    };

    let mut out = Vec::new();
    for (&x, dx) in &diffs {
        for kind in [StructKind::H0, StructKind::H1, StructKind::H2] {
            let Some(hx) = products.get(&(x, kind)) else {
                continue;
            };
            // Tower elements carry no drawn differentials of their own, so legs
            // through them count as undrawn.
            let mut undrawn = hx.iter().any(|p| p.0.is_tower_element())
                || dx.iter().any(|d| d.0.is_tower_element());
            let mut uncertain = dx.iter().any(|d| d.2) || hx.iter().any(|p| p.2);
            let mut lhs = Vector::new();
            for &(z, p, _) in dx {
                for &(w, q, unc) in products.get(&(z, kind)).map_or(&[][..], Vec::as_slice) {
                    uncertain |= unc;
                    undrawn |= w.is_tower_element();
                    add(&mut lhs, w, TauPoly::tau_pow(u32::from(p) + u32::from(q)));
                }
            }
            let mut rhs = Vector::new();
            for &(y, q, _) in hx {
                for &(w, p, unc) in diffs.get(&y).map_or(&[][..], Vec::as_slice) {
                    uncertain |= unc;
                    undrawn |= w.is_tower_element();
                    add(&mut rhs, w, TauPoly::tau_pow(u32::from(p) + u32::from(q)));
                }
            }
            reduce(&mut lhs);
            reduce(&mut rhs);
            let verdict = if uncertain || undrawn || lhs.is_empty() {
                Verdict::Undetermined
            } else if lhs == rhs {
                Verdict::Confirmed
            } else {
                Verdict::Violated
            };
            out.push(LeibnizTriple {
                x,
                kind,
                page: r,
                lhs,
                rhs,
                verdict,
            });
        }
    }
    out
}

/// Violated triples as warnings.
pub fn leibniz_findings(chart: &ChartPage, audit: &[LeibnizTriple]) -> Vec<Finding> {
    audit
        .iter()
        .filter(|t| t.verdict == Verdict::Violated)
        .map(|t| Finding {
            chart: chart.tag().to_string(),
            bidegree: Some(t.x.bidegree()),
            rule: "leibniz",
            severity: Severity::Warning,
            edge: Some(t.x.to_string()),
            message: t.describe(),
        })
        .collect()
}
