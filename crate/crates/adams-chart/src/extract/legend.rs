use crate::model::{
    chart_key, Bidegree, CompletenessWindow, EdgeCell, ExtensionKind, Feature, PageKind,
    Provenance, StructKind, TauOrder, TowerKind, Variant,
};

use super::lex::{LineStyle, PrimitiveKind};
use super::ExtractError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DotMeaning {
    Order(TauOrder),
    Cell(Provenance),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineMeaning {
    /// Multiplication line; its kind comes from the drawn shape.
    Struct {
        tau_power: u8,
        cell: EdgeCell,
        /// Colors that encode the τ-torsion of the target.
        target_order: Option<TauOrder>,
        /// Colors reserved for one multiplication.
        kind: Option<StructKind>,
    },
    /// Differential; `page: None` means the page is read off the slope.
    Diff {
        page: Option<u8>,
        tau_power: u8,
    },
    Extension(ExtensionKind),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrowMeaning {
    Tower(TowerKind),
    Diff { tau_power: u8 },
}

/// A coefficient the legend names for one specific line, overriding its color's default.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TauOverride {
    pub color: &'static str,
    pub source: Bidegree,
    pub target: Bidegree,
    pub tau_power: u8,
}

/// The color and line-style vocabulary of one chart section.
#[derive(Clone, Debug)]
pub struct LegendProfile {
    pub tag: &'static str,
    pub variant: Variant,
    pub page: PageKind,
    pub windows: Vec<CompletenessWindow>,
    pub dots: Vec<(&'static str, DotMeaning)>,
    pub squares: Vec<(&'static str, TauOrder)>,
    pub lines: Vec<(&'static str, LineMeaning)>,
    pub arrows: Vec<(&'static str, ArrowMeaning)>,
    pub overrides: Vec<TauOverride>,
}

/// Meaning of one primitive under a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantic {
    Class {
        tau_order: TauOrder,
        provenance: Provenance,
        marker: bool,
    },
    Struct {
        tau_power: u8,
        cell: EdgeCell,
        target_order: Option<TauOrder>,
        kind: Option<StructKind>,
        may_hidden: bool,
        uncertain: bool,
    },
    Diff {
        page: Option<u8>,
        tau_power: u8,
        uncertain: bool,
    },
    Extension {
        kind: ExtensionKind,
        uncertain: bool,
    },
    Tower(TowerKind),
    DiffArrow {
        tau_power: u8,
        uncertain: bool,
    },
}

fn lookup<T: Copy>(table: &[(&'static str, T)], color: &str) -> Option<T> {
    table.iter().find(|(c, _)| *c == color).map(|(_, v)| *v)
}

/// Resolves a primitive's color and line style under `profile`.
pub fn semantics(
    kind: PrimitiveKind,
    color: &str,
    style: LineStyle,
    profile: &LegendProfile,
    line: usize,
) -> Result<Semantic, ExtractError> {
    let unmapped = || ExtractError::UnmappedColor {
        line,
        color: color.to_string(),
        tag: profile.tag.to_string(),
    };
    let bad_style = || ExtractError::UnmappedStyle {
        line,
        color: color.to_string(),
        tag: profile.tag.to_string(),
    };
    let dashed = style == LineStyle::Dashed;
    match kind {
        PrimitiveKind::Dot => {
            let (tau_order, provenance) = match lookup(&profile.dots, color).ok_or_else(unmapped)? {
                DotMeaning::Order(o) => (o, Provenance::None),
                DotMeaning::Cell(p) => (TauOrder::Torsion(1), p),
            };
            Ok(Semantic::Class {
                tau_order,
                provenance,
                marker: false,
            })
        }
        PrimitiveKind::Square => {
            let tau_order = lookup(&profile.squares, color).ok_or_else(unmapped)?;
            Ok(Semantic::Class {
                tau_order,
                provenance: Provenance::None,
                marker: true,
            })
        }
        PrimitiveKind::Line | PrimitiveKind::Curve => {
            match lookup(&profile.lines, color).ok_or_else(unmapped)? {
                LineMeaning::Struct {
                    tau_power,
                    cell,
                    target_order,
                    kind,
                } => Ok(Semantic::Struct {
                    tau_power,
                    cell,
                    target_order,
                    kind,
                    may_hidden: style == LineStyle::Dotted,
                    uncertain: dashed,
                }),
                _ if style == LineStyle::Dotted => Err(bad_style()),
                LineMeaning::Diff { page, tau_power } => Ok(Semantic::Diff {
                    page,
                    tau_power,
                    uncertain: dashed,
                }),
                LineMeaning::Extension(kind) => Ok(Semantic::Extension {
                    kind,
                    uncertain: dashed,
                }),
            }
        }
        PrimitiveKind::ArrowLine => match lookup(&profile.arrows, color).ok_or_else(unmapped)? {
            ArrowMeaning::Tower(_) if style != LineStyle::Solid => Err(bad_style()),
            ArrowMeaning::Tower(k) => Ok(Semantic::Tower(k)),
            ArrowMeaning::Diff { .. } if style == LineStyle::Dotted => Err(bad_style()),
            ArrowMeaning::Diff { tau_power } => Ok(Semantic::DiffArrow {
                tau_power,
                uncertain: dashed,
            }),
        },
        PrimitiveKind::Label
        | PrimitiveKind::Grid
        | PrimitiveKind::Title
        | PrimitiveKind::AxisLabel => Err(ExtractError::MalformedCommand {
            line,
            message: "primitive carries no chart semantics".into(),
        }),
    }
}

fn windows(list: &[(Feature, i32)]) -> Vec<CompletenessWindow> {
    list.iter()
        .map(|&(feature, max_stem)| CompletenessWindow { feature, max_stem })
        .collect()
}

fn plain_struct(tau_power: u8, kind: Option<StructKind>) -> LineMeaning {
    LineMeaning::Struct {
        tau_power,
        cell: EdgeCell::Plain,
        target_order: None,
        kind,
    }
}

fn colored_struct(order: TauOrder) -> LineMeaning {
    LineMeaning::Struct {
        tau_power: 0,
        cell: EdgeCell::Plain,
        target_order: Some(order),
        kind: None,
    }
}

fn cell_struct(cell: EdgeCell, kind: Option<StructKind>) -> LineMeaning {
    LineMeaning::Struct {
        tau_power: 0,
        cell,
        target_order: None,
        kind,
    }
}

fn classical(
    tag: &'static str,
    page: PageKind,
    win: &[(Feature, i32)],
    e_inf: bool,
) -> LegendProfile {
    let mut lines = vec![
        ("tauzerocolor", plain_struct(0, None)),
        (
            "dtwocolor",
            LineMeaning::Diff {
                page: Some(2),
                tau_power: 0,
            },
        ),
        (
            "dthreecolor",
            LineMeaning::Diff {
                page: Some(3),
                tau_power: 0,
            },
        ),
        (
            "dfourcolor",
            LineMeaning::Diff {
                page: Some(4),
                tau_power: 0,
            },
        ),
        (
            "dfivecolor",
            LineMeaning::Diff {
                page: Some(5),
                tau_power: 0,
            },
        ),
    ];
    if e_inf {
        lines.push(("twoextn", LineMeaning::Extension(ExtensionKind::Two)));
        lines.push(("etaextn", LineMeaning::Extension(ExtensionKind::Eta)));
        lines.push(("nuextn", LineMeaning::Extension(ExtensionKind::Nu)));
    }
    LegendProfile {
        tag,
        variant: Variant::Classical,
        page,
        windows: windows(win),
        dots: vec![("black", DotMeaning::Order(TauOrder::Torsion(1)))],
        squares: vec![],
        lines,
        arrows: vec![("hzerotowercolor", ArrowMeaning::Tower(TowerKind::H0))],
        overrides: vec![],
    }
}

fn motivic(tag: &'static str, page: PageKind, win: &[(Feature, i32)]) -> LegendProfile {
    let orders = [
        ("black", TauOrder::Free),
        ("tauonecolor", TauOrder::Torsion(1)),
        ("tautwocolor", TauOrder::Torsion(2)),
        ("tauthreecolor", TauOrder::Torsion(3)),
    ];
    let mut dots: Vec<_> = orders
        .iter()
        .map(|&(c, o)| (c, DotMeaning::Order(o)))
        .collect();
    let squares: Vec<_> = orders.to_vec();
    let mut lines = vec![
        ("tauzerocolor", colored_struct(TauOrder::Free)),
        ("tauonecolor", colored_struct(TauOrder::Torsion(1))),
        ("tautwocolor", colored_struct(TauOrder::Torsion(2))),
        ("tauthreecolor", colored_struct(TauOrder::Torsion(3))),
        ("hzerotaucolor", plain_struct(1, Some(StructKind::H0))),
        ("honetaucolor", plain_struct(1, Some(StructKind::H1))),
        ("htwotaucolor", plain_struct(1, Some(StructKind::H2))),
        ("hzeromoretaucolor", plain_struct(2, Some(StructKind::H0))),
        ("honemoretaucolor", plain_struct(2, Some(StructKind::H1))),
        ("htwomoretaucolor", plain_struct(2, Some(StructKind::H2))),
    ];
    let mut arrows = vec![
        ("honetowercolor", ArrowMeaning::Tower(TowerKind::H1)),
        ("hzerotowercolor", ArrowMeaning::Tower(TowerKind::H0)),
    ];
    let mut overrides = vec![];
    if page != PageKind::Cohomology {
        // The page of a motivic differential is read off its slope.
        lines.push((
            "dtwocolor",
            LineMeaning::Diff {
                page: None,
                tau_power: 0,
            },
        ));
        lines.push((
            "dtwotaucolor",
            LineMeaning::Diff {
                page: None,
                tau_power: 1,
            },
        ));
        lines.push((
            "dtwomoretaucolor",
            LineMeaning::Diff {
                page: None,
                tau_power: 2,
            },
        ));
        arrows.push(("dtwocolor", ArrowMeaning::Diff { tau_power: 0 }));
    }
    if page == PageKind::E3 {
        // The orange d3 into e0^4 in the 68-stem hits τ^4, not τ^2.
        overrides.push(TauOverride {
            color: "dtwomoretaucolor",
            source: Bidegree::new(69, 13),
            target: Bidegree::new(68, 16),
            tau_power: 4,
        });
    }
    if matches!(page, PageKind::E4 | PageKind::Einf) {
        dots.push(("taufourcolor", DotMeaning::Order(TauOrder::Torsion(4))));
    }
    if page == PageKind::Einf {
        lines.push(("tauextn", LineMeaning::Extension(ExtensionKind::Tau)));
    }
    LegendProfile {
        tag,
        variant: Variant::Motivic,
        page,
        windows: windows(win),
        dots,
        squares,
        lines,
        arrows,
        overrides,
    }
}

fn cofiber(tag: &'static str, page: PageKind, win: &[(Feature, i32)]) -> LegendProfile {
    let mut lines = vec![
        ("tauzerocolor", cell_struct(EdgeCell::BottomCell, None)),
        ("tauonecolor", cell_struct(EdgeCell::TopCell, None)),
        (
            "Ctauhiddenhzerocolor",
            cell_struct(EdgeCell::Undetected, Some(StructKind::H0)),
        ),
        (
            "Ctauhiddenhonecolor",
            cell_struct(EdgeCell::Undetected, Some(StructKind::H1)),
        ),
        (
            "Ctauhiddenhtwocolor",
            cell_struct(EdgeCell::Undetected, Some(StructKind::H2)),
        ),
        (
            "dtwocolor",
            LineMeaning::Diff {
                page: None,
                tau_power: 0,
            },
        ),
    ];
    if page == PageKind::Einf {
        lines.push(("twoextn", LineMeaning::Extension(ExtensionKind::Two)));
        lines.push(("etaextn", LineMeaning::Extension(ExtensionKind::Eta)));
        lines.push(("nuextn", LineMeaning::Extension(ExtensionKind::Nu)));
    }
    LegendProfile {
        tag,
        variant: Variant::CofiberTau,
        page,
        windows: windows(win),
        dots: vec![
            ("black", DotMeaning::Cell(Provenance::BottomCell)),
            ("tauonecolor", DotMeaning::Cell(Provenance::TopCell)),
        ],
        squares: vec![],
        lines,
        arrows: vec![
            ("tauzerocolor", ArrowMeaning::Tower(TowerKind::H1)),
            ("tauonecolor", ArrowMeaning::Tower(TowerKind::H1)),
            ("hzerotowercolor", ArrowMeaning::Tower(TowerKind::H0)),
            ("dtwocolor", ArrowMeaning::Diff { tau_power: 0 }),
        ],
        overrides: vec![],
    }
}

/// The legend profile of a chart section, by its tag.
pub fn profile(tag: &str) -> Option<LegendProfile> {
    use Feature::*;
    let (variant, page) = chart_key(tag)?;
    let tag = crate::model::chart_tag(variant, page)?;
    Some(match tag {
        "Adams-cl" => classical(
            tag,
            page,
            &[(Classes, 70), (D2, 70), (D3, 65), (D4, 65), (D5, 65)],
            false,
        ),
        "Einfty-cl" => classical(tag, page, &[(Classes, 59)], true),
        "cohlgy-mot" => motivic(tag, page, &[(Classes, 70)]),
        "E2-mot" => motivic(tag, page, &[(Classes, 70), (D2, 70)]),
        "E3-mot" => motivic(tag, page, &[(Classes, 65), (D3, 65)]),
        "E4-mot" => motivic(tag, page, &[(Classes, 65), (D4, 65), (D5, 65)]),
        "Einfty-mot" => motivic(tag, page, &[(Classes, 59)]),
        "E2-Ctau" => cofiber(tag, page, &[(Classes, 70), (D2, 70)]),
        "E3-Ctau" => cofiber(tag, page, &[(Classes, 70), (D3, 64)]),
        "E4-Ctau" => cofiber(tag, page, &[(Classes, 64)]),
        "Einfty-Ctau" => cofiber(tag, page, &[(Classes, 63), (HiddenExtensions, 59)]),
        _ => return None,
    })
}
