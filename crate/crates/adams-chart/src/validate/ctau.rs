use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{Bidegree, ChartPage, Provenance};
use crate::pages::Window;

use super::{Finding, Severity};

/// Stems used to fit the top-cell shift.
const CALIBRATION_STEMS: i32 = 10;
/// Candidate shifts range over this box in each coordinate.
const SHIFT_RANGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalibrationError {
    #[error("no top-cell shift fits the low-stem data")]
    NoFit,
    #[error("several top-cell shifts fit the low-stem data: {0:?}")]
    Ambiguous(Vec<(i32, i32)>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Counts {
    summands: usize,
    torsion: usize,
    bottom: usize,
    top: usize,
}

fn tally(sphere: &ChartPage, ctau: &ChartPage) -> BTreeMap<Bidegree, Counts> {
    let mut m: BTreeMap<Bidegree, Counts> = BTreeMap::new();
    for node in sphere.classes.values() {
        let c = m.entry(node.bidegree()).or_default();
        c.summands += 1;
        if !node.tau_order.is_free() {
            c.torsion += 1;
        }
    }
    for node in ctau.classes.values() {
        let c = m.entry(node.bidegree()).or_default();
        match node.provenance {
            Provenance::TopCell => c.top += 1,
            _ => c.bottom += 1,
        }
    }
    m
}

fn highest(chart: &ChartPage) -> i32 {
    chart
        .classes
        .keys()
        .map(|id| id.filtration)
        .max()
        .unwrap_or(0)
}

/// Outcome of the cofiber-of-τ identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtauCounts {
    /// Calibrated top-cell shift (σ_s, σ_f).
    pub shift: (i32, i32),
    /// Bidegrees checked.
    pub checked: usize,
    pub findings: Vec<Finding>,
}

fn fits(counts: &BTreeMap<Bidegree, Counts>, shift: (i32, i32), max_stem: i32, max_f: i32) -> bool {
    let get = |bd: Bidegree| counts.get(&bd).copied().unwrap_or_default();
    (0..=max_stem).all(|s| {
        (0..=max_f).all(|f| {
            let here = get(Bidegree::new(s, f));
            let src = get(Bidegree::new(s - shift.0, f - shift.1));
            here.bottom + here.top == here.summands + src.torsion
        })
    })
}

/// The constant shift (σ_s, σ_f) for which the Cτ class count at (s,f)
/// equals the sphere's summands at (s,f) plus its τ-torsion summands at
/// (s−σ_s, f−σ_f), fitted on stems 0 to 10. Fails unless exactly one
/// candidate fits.
pub fn calibrate_shift(
    sphere: &ChartPage,
    ctau: &ChartPage,
) -> Result<(i32, i32), CalibrationError> {
    let counts = tally(sphere, ctau);
    let max_f = highest(sphere).min(highest(ctau)) - SHIFT_RANGE;
    let fitting: Vec<(i32, i32)> = (-SHIFT_RANGE..=SHIFT_RANGE)
        .flat_map(|a| (-SHIFT_RANGE..=SHIFT_RANGE).map(move |b| (a, b)))
        .filter(|&shift| fits(&counts, shift, CALIBRATION_STEMS, max_f))
        .collect();
    match fitting.as_slice() {
        [] => Err(CalibrationError::NoFit),
        [one] => Ok(*one),
        _ => Err(CalibrationError::Ambiguous(fitting)),
    }
}

/// Checks the Cτ class counts against the sphere's E2 page inside `window`:
/// the bottom-cell classes must match the sphere's summands in the same
/// bidegree, and the top-cell classes its τ-torsion summands at the
/// calibrated shift. Both charts should have their towers materialized to
/// the same cap; bidegrees whose shifted source lies above the cap are not
/// checked.
pub fn ctau_check(
    sphere: &ChartPage,
    ctau: &ChartPage,
    window: Window,
) -> Result<CtauCounts, CalibrationError> {
    let shift = calibrate_shift(sphere, ctau)?;
    let counts = tally(sphere, ctau);
    let get = |bd: Bidegree| counts.get(&bd).copied().unwrap_or_default();
    let cap = highest(sphere).min(highest(ctau));
    let max_f = window.max_filtration.min(cap + shift.1.min(0));
    let mut findings = Vec::new();
    let mut checked = 0;
    let mut push = |bd: Bidegree, rule: &'static str, message: String| {
        findings.push(Finding {
            chart: ctau.tag().to_string(),
            bidegree: Some(bd),
            rule,
            severity: Severity::Error,
            edge: None,
            message,
        });
    };
    for s in 0..=window.max_stem {
        for f in 0..=max_f {
            let bd = Bidegree::new(s, f);
            let src = bd.offset(-shift.0, -shift.1);
            let (here, there) = (get(bd), get(src));
            checked += 1;
            if here.bottom + here.top != here.summands + there.torsion {
                let msg = format!(
                    "{} Cτ classes, expected {} sphere summands plus {} torsion summands at {src}",
                    here.bottom + here.top,
                    here.summands,
                    there.torsion
                );
                push(bd, "ctau-total", msg);
            }
            if here.bottom != here.summands {
                push(
                    bd,
                    "ctau-bottom",
                    format!(
                        "{} bottom-cell classes, {} sphere summands",
                        here.bottom, here.summands
                    ),
                );
            }
            if here.top != there.torsion {
                let msg = format!(
                    "{} top-cell classes, {} torsion summands at {src}",
                    here.top, there.torsion
                );
                push(bd, "ctau-top", msg);
            }
        }
    }
    Ok(CtauCounts {
        shift,
        checked,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ClassId, ClassNode, PageKind, TauOrder, Variant};

    fn add(c: &mut ChartPage, s: i32, f: i32, order: TauOrder, provenance: Provenance) {
        let id = ClassId::drawn(
            s,
            f,
            c.classes
                .keys()
                .filter(|k| k.bidegree() == Bidegree::new(s, f))
                .count() as i8,
        );
        c.add_class(ClassNode {
            id,
            tau_order: order,
            label: None,
            hidden_tau_marker: false,
            provenance,
        });
    }

    /// A toy sphere with free classes along f = s and torsion classes at
    /// (2k, 2k+1), with the matching Cτ chart for shift (1,-1).
    fn toy() -> (ChartPage, ChartPage) {
        let mut sphere = ChartPage::new(Variant::Motivic, PageKind::E2);
        let mut ctau = ChartPage::new(Variant::CofiberTau, PageKind::E2);
        for s in 0..=12 {
            add(&mut sphere, s, s, TauOrder::Free, Provenance::None);
            add(
                &mut ctau,
                s,
                s,
                TauOrder::Torsion(1),
                Provenance::BottomCell,
            );
            if s % 2 == 0 {
                add(
                    &mut sphere,
                    s,
                    s + 1,
                    TauOrder::Torsion(s as u32 % 3 + 1),
                    Provenance::None,
                );
                add(
                    &mut ctau,
                    s,
                    s + 1,
                    TauOrder::Torsion(1),
                    Provenance::BottomCell,
                );
                add(
                    &mut ctau,
                    s + 1,
                    s,
                    TauOrder::Torsion(1),
                    Provenance::TopCell,
                );
            }
        }
        (sphere, ctau)
    }

    #[test]
    fn calibrates_expected_shift() {
        let (sphere, ctau) = toy();
        assert_eq!(calibrate_shift(&sphere, &ctau), Ok((1, -1)));
        let out = ctau_check(&sphere, &ctau, Window::new(11, 36)).unwrap();
        assert!(out.findings.is_empty(), "{:?}", out.findings);
    }

    #[test]
    fn missing_top_cell_class_is_reported() {
        let (sphere, mut ctau) = toy();
        ctau.classes
            .retain(|id, n| !(id.stem == 11 && n.provenance == Provenance::TopCell));
        let out = ctau_check(&sphere, &ctau, Window::new(11, 36)).unwrap();
        let rules: Vec<_> = out.findings.iter().map(|f| f.rule).collect();
        assert_eq!(rules, vec!["ctau-total", "ctau-top"]);
    }

    #[test]
    fn empty_charts_cannot_be_calibrated() {
        let sphere = ChartPage::new(Variant::Motivic, PageKind::E2);
        let ctau = ChartPage::new(Variant::CofiberTau, PageKind::E2);
        assert!(matches!(
            calibrate_shift(&sphere, &ctau),
            Err(CalibrationError::Ambiguous(_))
        ));
    }
}
