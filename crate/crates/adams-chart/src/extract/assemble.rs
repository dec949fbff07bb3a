use std::collections::BTreeMap;

use crate::model::{
    ChartPage, ClassId, ClassNode, DiffArrow, DiffEdge, ExtensionEdge, Label, Point, StructEdge,
    StructKind, TowerArrow, TowerKind, Variant,
};

use super::legend::{semantics, LegendProfile, Semantic};
use super::lex::{Coord, Primitive, PrimitiveKind};
use super::ExtractError;

/// Largest allowed distance of an isolated class from a grid point, in hundredths.
const MAX_NUDGE: i32 = 35;
/// Classes in one row closer than this (in hundredths) share a bidegree.
const CLUSTER_GAP: i32 = 30;
/// Largest offset of a class inside a crowded bidegree, in hundredths.
const MAX_CLUSTER_NUDGE: i32 = 50;
/// Endpoint matching tolerance, in hundredths.
const ENDPOINT_TOLERANCE: i32 = 5;

/// Something assembly tolerated rather than rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssemblyNote {
    /// The same class drawn twice with the same meaning.
    MergedDuplicate { line: usize, id: ClassId },
    /// A line whose endpoints coincide.
    DroppedDegenerateLine { line: usize },
    /// A label with no class within its offset radius.
    UnattachedLabel { line: usize, text: String },
    /// A second label for an already labelled class.
    ExtraLabel {
        line: usize,
        id: ClassId,
        text: String,
    },
}

#[derive(Clone, Debug)]
pub struct Assembled {
    pub chart: ChartPage,
    pub notes: Vec<AssemblyNote>,
}

fn fmt_coord(h: i32) -> String {
    let sign = if h < 0 { "-" } else { "" };
    let a = h.abs();
    format!("{sign}{}.{:02}", a / 100, a % 100)
}

fn fmt_point(c: Coord) -> String {
    format!("({},{})", fmt_coord(c.x), fmt_coord(c.y))
}

/// Splits a coordinate (in hundredths) into the nearest integer and the
/// remaining offset (in hundredths), which must not exceed 0.35.
pub fn snap(h: i32) -> Result<(i32, i32), String> {
    let value = (h + 50).div_euclid(100);
    let nudge = h - value * 100;
    if nudge.abs() > MAX_NUDGE {
        return Err(fmt_coord(h));
    }
    Ok((value, nudge))
}

fn snap_at(h: i32, line: usize) -> Result<(i32, i32), ExtractError> {
    snap(h).map_err(|value| ExtractError::AmbiguousCoordinate { line, value })
}

/// Builds a chart from one block's primitives under its legend profile.
pub fn assemble(
    primitives: &[Primitive],
    profile: &LegendProfile,
) -> Result<Assembled, ExtractError> {
    let mut chart = ChartPage::new(profile.variant, profile.page);
    chart.windows = profile.windows.clone();
    let mut notes = Vec::new();
    let mut first_line: BTreeMap<ClassId, usize> = BTreeMap::new();

    // Classes first, so that edges may refer to classes drawn after them.
    let mut drawn = Vec::new();
    for p in primitives {
        let center = match p.kind {
            PrimitiveKind::Dot => p.coordinates[0],
            PrimitiveKind::Square => {
                let (a, b) = (p.coordinates[0], p.coordinates[1]);
                if (a.x + b.x) % 2 != 0 || (a.y + b.y) % 2 != 0 {
                    return Err(ExtractError::OffGrid {
                        line: p.line,
                        coordinate: fmt_point(a),
                    });
                }
                Coord {
                    x: (a.x + b.x) / 2,
                    y: (a.y + b.y) / 2,
                }
            }
            _ => continue,
        };
        let Semantic::Class {
            tau_order,
            provenance,
            marker,
        } = semantics(p.kind, &p.color, p.linestyle, profile, p.line)?
        else {
            unreachable!("dots and squares always resolve to classes")
        };
        drawn.push((p.line, center, tau_order, provenance, marker));
    }
    let placement = place_classes(drawn.iter().map(|d| (d.0, d.1)))?;
    let mut positions = Vec::new();
    for (line, center, tau_order, provenance, marker) in drawn {
        let id = placement[&(center.x, center.y)];
        let node = ClassNode {
            id,
            tau_order,
            label: None,
            hidden_tau_marker: marker,
            provenance,
        };
        match chart.classes.get(&id) {
            Some(existing) if *existing == node => {
                notes.push(AssemblyNote::MergedDuplicate { line, id })
            }
            Some(_) => {
                return Err(ExtractError::DuplicateClass {
                    line,
                    id: id.to_string(),
                })
            }
            None => {
                first_line.insert(id, line);
                positions.push((center, id));
                chart.add_class(node);
            }
        }
    }

    let resolve = |c: Coord| -> Option<ClassId> {
        positions
            .iter()
            .filter(|(q, _)| {
                (q.x - c.x).abs() <= ENDPOINT_TOLERANCE && (q.y - c.y).abs() <= ENDPOINT_TOLERANCE
            })
            .min_by_key(|(q, id)| ((q.x - c.x).abs() + (q.y - c.y).abs(), *id))
            .map(|(_, id)| *id)
    };

    for p in primitives {
        match p.kind {
            PrimitiveKind::Line | PrimitiveKind::Curve | PrimitiveKind::ArrowLine => {}
            PrimitiveKind::Label => {
                attach_label(&mut chart, &positions, p, &mut notes);
                continue;
            }
            PrimitiveKind::Grid => {
                check_bounds(&chart, p, &first_line)?;
                continue;
            }
            _ => continue,
        }
        let first = p.coordinates[0];
        let last = *p.coordinates.last().expect("lines have endpoints");
        if first == last {
            notes.push(AssemblyNote::DroppedDegenerateLine { line: p.line });
            continue;
        }
        let sem = semantics(p.kind, &p.color, p.linestyle, profile, p.line)?;
        let dangling = || ExtractError::DanglingEdge {
            line: p.line,
            from: fmt_point(first),
            to: fmt_point(last),
        };
        let a = resolve(first).ok_or_else(dangling)?;

        if p.kind == PrimitiveKind::ArrowLine {
            let (dx, dy) = (last.x - first.x, last.y - first.y);
            let mismatch = || ExtractError::ShapeMismatch {
                line: p.line,
                color: p.color.clone(),
                ds: dx,
                df: dy,
            };
            match sem {
                Semantic::Tower(kind) => {
                    let ok = match kind {
                        TowerKind::H0 => dx == 0 && dy > 0,
                        TowerKind::H1 => dx == dy && dy > 0,
                    };
                    if !ok {
                        return Err(mismatch());
                    }
                    let tau_annihilated =
                        profile.variant != Variant::Classical && kind == TowerKind::H1;
                    chart.towers.push(TowerArrow {
                        base: a,
                        kind,
                        tau_annihilated,
                    });
                }
                Semantic::DiffArrow {
                    tau_power,
                    uncertain,
                } => {
                    if dx >= 0 || dy <= 0 || dy % -dx != 0 || !(2..=5).contains(&(dy / -dx)) {
                        return Err(mismatch());
                    }
                    chart.diff_arrows.push(DiffArrow {
                        source: a,
                        page: (dy / -dx) as u8,
                        tau_power,
                        uncertain,
                    });
                }
                _ => unreachable!("arrow semantics are towers or differentials"),
            }
            continue;
        }

        let b = resolve(last).ok_or_else(dangling)?;
        let (ds, df) = (b.stem - a.stem, b.filtration - a.filtration);
        let mismatch = || ExtractError::ShapeMismatch {
            line: p.line,
            color: p.color.clone(),
            ds,
            df,
        };
        match sem {
            Semantic::Struct {
                tau_power,
                cell,
                target_order,
                kind,
                may_hidden,
                uncertain,
            } => {
                let (src, tgt, ds, df) = if df < 0 {
                    (b, a, -ds, -df)
                } else {
                    (a, b, ds, df)
                };
                let shape = match (ds, df) {
                    (0, 1) => StructKind::H0,
                    (1, 1) => StructKind::H1,
                    (3, 1) => StructKind::H2,
                    _ => return Err(mismatch()),
                };
                if kind.is_some_and(|k| k != shape) {
                    return Err(mismatch());
                }
                if let Some(order) = target_order {
                    let actual = chart.classes[&tgt].tau_order;
                    if actual != order {
                        return Err(ExtractError::ColorLaw {
                            line: p.line,
                            color: p.color.clone(),
                            target: tgt.to_string(),
                            order: actual.to_string(),
                        });
                    }
                }
                chart.struct_edges.push(StructEdge {
                    source: src,
                    target: tgt,
                    kind: shape,
                    tau_power,
                    may_hidden,
                    uncertain,
                    cell,
                });
            }
            Semantic::Diff {
                page,
                tau_power,
                uncertain,
            } => {
                let (src, tgt, ds, df) = if ds > 0 {
                    (b, a, -ds, -df)
                } else {
                    (a, b, ds, df)
                };
                let page = match page {
                    Some(r) => r,
                    None if ds == -1 && (2..=5).contains(&df) => df as u8,
                    None => {
                        return Err(ExtractError::ShapeMismatch {
                            line: p.line,
                            color: p.color.clone(),
                            ds,
                            df,
                        })
                    }
                };
                let tau_power = profile
                    .overrides
                    .iter()
                    .find(|o| {
                        o.color == p.color
                            && o.source == src.bidegree()
                            && o.target == tgt.bidegree()
                    })
                    .map_or(tau_power, |o| o.tau_power);
                chart.diff_edges.push(DiffEdge {
                    source: src,
                    target: tgt,
                    page,
                    tau_power,
                    uncertain,
                });
            }
            Semantic::Extension { kind, uncertain } => {
                let (src, tgt) = if df < 0 { (b, a) } else { (a, b) };
                let via = (p.kind == PrimitiveKind::Curve).then(|| {
                    let c = &p.coordinates;
                    [
                        Point {
                            x: c[1].x,
                            y: c[1].y,
                        },
                        Point {
                            x: c[2].x,
                            y: c[2].y,
                        },
                    ]
                });
                let via = if df < 0 {
                    via.map(|[u, v]| [v, u])
                } else {
                    via
                };
                chart.extension_edges.push(ExtensionEdge {
                    source: src,
                    target: tgt,
                    kind,
                    uncertain,
                    via,
                });
            }
            Semantic::Class { .. } | Semantic::Tower(_) | Semantic::DiffArrow { .. } => {
                unreachable!("line semantics are edges")
            }
        }
    }
    chart.normalize();
    Ok(Assembled { chart, notes })
}

fn attach_label(
    chart: &mut ChartPage,
    positions: &[(Coord, ClassId)],
    p: &Primitive,
    notes: &mut Vec<AssemblyNote>,
) {
    let c = p.coordinates[0];
    let text = p.text.clone().unwrap_or_default();
    let radius = i64::from(p.radius.unwrap_or(0));
    let nearest = positions
        .iter()
        .map(|(q, id)| {
            let (dx, dy) = (i64::from(q.x - c.x), i64::from(q.y - c.y));
            (dx * dx + dy * dy, *id)
        })
        .filter(|(d2, _)| *d2 <= radius * radius)
        .min();
    let Some((_, id)) = nearest else {
        notes.push(AssemblyNote::UnattachedLabel { line: p.line, text });
        return;
    };
    let node = chart
        .classes
        .get_mut(&id)
        .expect("positions index the chart's classes");
    if node.label.is_some() {
        notes.push(AssemblyNote::ExtraLabel {
            line: p.line,
            id,
            text,
        });
    } else {
        node.label = Some(Label {
            text,
            angle: p.angle.unwrap_or(0),
        });
    }
}

/// Assigns each drawn class position a bidegree and nudge.
///
/// Classes sharing a row are grouped into runs separated by gaps of at least
/// 0.3; a run of several classes is centered on its mean, which must be
/// unambiguous. An isolated class snaps to the nearest grid point.
fn place_classes(
    drawn: impl Iterator<Item = (usize, Coord)>,
) -> Result<BTreeMap<(i32, i32), ClassId>, ExtractError> {
    let mut rows: BTreeMap<i32, BTreeMap<i32, usize>> = BTreeMap::new();
    for (line, c) in drawn {
        rows.entry(c.y).or_default().entry(c.x).or_insert(line);
    }
    let mut out = BTreeMap::new();
    for (y, xs) in rows {
        let first = *xs.values().next().expect("rows are non-empty");
        let (filtration, ny) = snap_at(y, first)?;
        if ny != 0 {
            return Err(ExtractError::OffGrid {
                line: first,
                coordinate: fmt_coord(y),
            });
        }
        let xs: Vec<(i32, usize)> = xs.into_iter().collect();
        let mut runs: Vec<&[(i32, usize)]> = Vec::new();
        let mut from = 0;
        for i in 1..=xs.len() {
            if i == xs.len() || xs[i].0 - xs[i - 1].0 >= CLUSTER_GAP {
                runs.push(&xs[from..i]);
                from = i;
            }
        }
        for run in runs {
            let stem = if let [(x, line)] = run {
                snap_at(*x, *line)?.0
            } else {
                let n = run.len() as i32;
                let sum: i32 = run.iter().map(|(x, _)| x).sum();
                // Twice the mean, in hundredths, must not sit on a half-integer.
                let twice = (2 * sum).div_euclid(n);
                if (2 * sum) % n == 0 && twice.rem_euclid(200) == 100 {
                    return Err(ExtractError::AmbiguousCoordinate {
                        line: run[0].1,
                        value: fmt_coord(sum / n),
                    });
                }
                (sum + 50 * n).div_euclid(100 * n)
            };
            for &(x, line) in run {
                let nudge = x - stem * 100;
                if nudge.abs() > MAX_CLUSTER_NUDGE {
                    return Err(ExtractError::AmbiguousCoordinate {
                        line,
                        value: fmt_coord(x),
                    });
                }
                if nudge % 10 != 0 {
                    return Err(ExtractError::OffGrid {
                        line,
                        coordinate: fmt_point(Coord { x, y }),
                    });
                }
                out.insert((x, y), ClassId::drawn(stem, filtration, (nudge / 10) as i8));
            }
        }
    }
    Ok(out)
}

fn check_bounds(
    chart: &ChartPage,
    grid: &Primitive,
    lines: &BTreeMap<ClassId, usize>,
) -> Result<(), ExtractError> {
    let (lo, hi) = (grid.coordinates[0], grid.coordinates[1]);
    for id in chart.classes.keys() {
        let (x, y) = (id.stem * 100, id.filtration * 100);
        if x < lo.x || x > hi.x || y < lo.y || y > hi.y {
            return Err(ExtractError::OutOfBounds {
                line: lines.get(id).copied().unwrap_or(grid.line),
                id: id.to_string(),
            });
        }
    }
    Ok(())
}
