//! Typed chart data model and the bidegree laws of each edge species.

mod laws;
mod towers;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use crate::tau::TauOrder;
pub use laws::{diff_shift, struct_shift, EdgeKind, FiltrationShift, Shift};
pub use towers::{materialize_towers, DEFAULT_F_CAP, MAX_STEM};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid differential page {0} (expected 2 to 5)")]
    InvalidPage(i64),
    #[error("unknown edge kind '{0}'")]
    UnknownKind(String),
    #[error("filtration cap {cap} is below drawn class {class} at filtration {filtration}")]
    InvalidCap {
        cap: i32,
        class: ClassId,
        filtration: i32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    Classical,
    Motivic,
    CofiberTau,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Classical => "classical",
            Variant::Motivic => "motivic",
            Variant::CofiberTau => "cofiber_tau",
        }
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "classical" => Ok(Variant::Classical),
            "motivic" => Ok(Variant::Motivic),
            "cofiber_tau" => Ok(Variant::CofiberTau),
            _ => Err(format!("unknown variant '{s}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PageKind {
    Cohomology,
    E2,
    E3,
    E4,
    Einf,
}

impl PageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PageKind::Cohomology => "cohomology",
            PageKind::E2 => "E2",
            PageKind::E3 => "E3",
            PageKind::E4 => "E4",
            PageKind::Einf => "Einf",
        }
    }

    /// r for an E_r page; `None` for E∞ and the cohomology chart.
    pub fn number(self) -> Option<u8> {
        match self {
            PageKind::E2 => Some(2),
            PageKind::E3 => Some(3),
            PageKind::E4 => Some(4),
            PageKind::Cohomology | PageKind::Einf => None,
        }
    }
}

impl FromStr for PageKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cohomology" => Ok(PageKind::Cohomology),
            "E2" => Ok(PageKind::E2),
            "E3" => Ok(PageKind::E3),
            "E4" => Ok(PageKind::E4),
            "Einf" => Ok(PageKind::Einf),
            _ => Err(format!("unknown page '{s}'")),
        }
    }
}

/// (stem, Adams filtration).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bidegree {
    pub stem: i32,
    pub filtration: i32,
}

impl Bidegree {
    pub fn new(stem: i32, filtration: i32) -> Self {
        Bidegree { stem, filtration }
    }

    pub fn offset(self, ds: i32, df: i32) -> Self {
        Bidegree::new(self.stem + ds, self.filtration + df)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.stem, self.filtration)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TowerKind {
    H0,
    H1,
}

impl TowerKind {
    /// Bidegree step between consecutive tower elements.
    pub fn step(self) -> (i32, i32) {
        match self {
            TowerKind::H0 => (0, 1),
            TowerKind::H1 => (1, 1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TowerKind::H0 => "h0_tower",
            TowerKind::H1 => "h1_tower",
        }
    }
}

/// Marks a class produced by expanding a tower arrow: `depth` steps above the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TowerStep {
    pub kind: TowerKind,
    pub depth: u16,
}

/// Class identity inside one chart. Drawn classes are keyed by snapped
/// position and draw offset; tower elements also carry their tower step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId {
    pub stem: i32,
    pub filtration: i32,
    /// Draw offset in tenths of a stem unit.
    pub nudge: i8,
    pub tower: Option<TowerStep>,
}

impl ClassId {
    pub fn drawn(stem: i32, filtration: i32, nudge: i8) -> Self {
        ClassId {
            stem,
            filtration,
            nudge,
            tower: None,
        }
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.stem, self.filtration)
    }

    pub fn is_tower_element(&self) -> bool {
        self.tower.is_some()
    }

    /// The drawn class a tower element hangs from.
    pub fn tower_base(&self) -> Option<ClassId> {
        let t = self.tower?;
        let (ds, df) = t.kind.step();
        let d = i32::from(t.depth);
        Some(ClassId::drawn(
            self.stem - ds * d,
            self.filtration - df * d,
            self.nudge,
        ))
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.stem, self.filtration, self.nudge)?;
        if let Some(t) = self.tower {
            let k = match t.kind {
                TowerKind::H0 => "h0",
                TowerKind::H1 => "h1",
            };
            write!(f, "/{k}.{}", t.depth)?;
        }
        Ok(())
    }
}

impl FromStr for ClassId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("malformed class id '{s}'");
        let (pos, tower) = match s.split_once('/') {
            Some((p, t)) => (p, Some(t)),
            None => (s, None),
        };
        let parts: Vec<&str> = pos.split(',').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let stem = parts[0].parse().map_err(|_| bad())?;
        let filtration = parts[1].parse().map_err(|_| bad())?;
        let nudge = parts[2].parse().map_err(|_| bad())?;
        let tower = match tower {
            None => None,
            Some(t) => {
                let (k, d) = t.split_once('.').ok_or_else(bad)?;
                let kind = match k {
                    "h0" => TowerKind::H0,
                    "h1" => TowerKind::H1,
                    _ => return Err(bad()),
                };
                let depth: u16 = d.parse().map_err(|_| bad())?;
                if depth == 0 {
                    return Err(bad());
                }
                Some(TowerStep { kind, depth })
            }
        };
        Ok(ClassId {
            stem,
            filtration,
            nudge,
            tower,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    None,
    BottomCell,
    TopCell,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::None => "none",
            Provenance::BottomCell => "bottom",
            Provenance::TopCell => "top",
        }
    }
}

/// Label text with the angle (degrees) it is offset from its class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub text: String,
    pub angle: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassNode {
    pub id: ClassId,
    pub tau_order: TauOrder,
    pub label: Option<Label>,
    pub hidden_tau_marker: bool,
    pub provenance: Provenance,
}

impl ClassNode {
    pub fn bidegree(&self) -> Bidegree {
        self.id.bidegree()
    }

    pub fn name(&self) -> Option<&str> {
        self.label.as_ref().map(|l| l.text.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructKind {
    H0,
    H1,
    H2,
}

impl StructKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StructKind::H0 => "h0",
            StructKind::H1 => "h1",
            StructKind::H2 => "h2",
        }
    }
}

/// Which part of the cofiber-of-τ long exact sequence a struct line belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeCell {
    Plain,
    BottomCell,
    TopCell,
    /// Extensions detected by neither cell.
    Undetected,
}

impl EdgeCell {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeCell::Plain => "plain",
            EdgeCell::BottomCell => "bottom",
            EdgeCell::TopCell => "top",
            EdgeCell::Undetected => "undetected",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StructEdge {
    pub source: ClassId,
    pub target: ClassId,
    pub kind: StructKind,
    pub tau_power: u8,
    pub may_hidden: bool,
    pub uncertain: bool,
    pub cell: EdgeCell,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffEdge {
    pub source: ClassId,
    pub target: ClassId,
    pub page: u8,
    pub tau_power: u8,
    pub uncertain: bool,
}

/// A differential drawn as a short arrow into an h1 tower that is not drawn
/// class by class; its target is fixed when the tower is materialized.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffArrow {
    pub source: ClassId,
    pub page: u8,
    pub tau_power: u8,
    pub uncertain: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtensionKind {
    Two,
    Eta,
    Nu,
    Tau,
}

impl ExtensionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExtensionKind::Two => "two",
            ExtensionKind::Eta => "eta",
            ExtensionKind::Nu => "nu",
            ExtensionKind::Tau => "tau",
        }
    }
}

/// Position in hundredths of a chart unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtensionEdge {
    pub source: ClassId,
    pub target: ClassId,
    pub kind: ExtensionKind,
    pub uncertain: bool,
    /// Inner control points when the extension is drawn as a curve.
    pub via: Option<[Point; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TowerArrow {
    pub base: ClassId,
    pub kind: TowerKind,
    pub tau_annihilated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    Classes,
    D2,
    D3,
    D4,
    D5,
    HiddenExtensions,
}

impl Feature {
    pub fn as_str(self) -> &'static str {
        match self {
            Feature::Classes => "classes",
            Feature::D2 => "d2",
            Feature::D3 => "d3",
            Feature::D4 => "d4",
            Feature::D5 => "d5",
            Feature::HiddenExtensions => "hidden_extensions",
        }
    }

    pub fn differential(page: u8) -> Option<Feature> {
        match page {
            2 => Some(Feature::D2),
            3 => Some(Feature::D3),
            4 => Some(Feature::D4),
            5 => Some(Feature::D5),
            _ => None,
        }
    }
}

impl FromStr for Feature {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "classes" => Ok(Feature::Classes),
            "d2" => Ok(Feature::D2),
            "d3" => Ok(Feature::D3),
            "d4" => Ok(Feature::D4),
            "d5" => Ok(Feature::D5),
            "hidden_extensions" => Ok(Feature::HiddenExtensions),
            _ => Err(format!("unknown window feature '{s}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompletenessWindow {
    pub feature: Feature,
    pub max_stem: i32,
}

/// One published chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartPage {
    pub variant: Variant,
    pub page: PageKind,
    pub windows: Vec<CompletenessWindow>,
    pub classes: BTreeMap<ClassId, ClassNode>,
    pub struct_edges: Vec<StructEdge>,
    pub diff_edges: Vec<DiffEdge>,
    pub diff_arrows: Vec<DiffArrow>,
    pub extension_edges: Vec<ExtensionEdge>,
    pub towers: Vec<TowerArrow>,
}

impl ChartPage {
    pub fn new(variant: Variant, page: PageKind) -> Self {
        ChartPage {
            variant,
            page,
            windows: Vec::new(),
            classes: BTreeMap::new(),
            struct_edges: Vec::new(),
            diff_edges: Vec::new(),
            diff_arrows: Vec::new(),
            extension_edges: Vec::new(),
            towers: Vec::new(),
        }
    }

    /// Section tag of the chart, e.g. `E2-mot`.
    pub fn tag(&self) -> &'static str {
        chart_tag(self.variant, self.page).unwrap_or("unknown")
    }

    pub fn window(&self, feature: Feature) -> Option<i32> {
        self.windows
            .iter()
            .find(|w| w.feature == feature)
            .map(|w| w.max_stem)
    }

    pub fn add_class(&mut self, node: ClassNode) {
        self.classes.insert(node.id, node);
    }

    /// Sorts every edge list into canonical order and drops exact repeats.
    pub fn normalize(&mut self) {
        self.windows.sort();
        self.windows.dedup();
        self.struct_edges.sort();
        self.struct_edges.dedup();
        self.diff_edges.sort();
        self.diff_edges.dedup();
        self.diff_arrows.sort();
        self.diff_arrows.dedup();
        self.extension_edges.sort();
        self.extension_edges.dedup();
        self.towers.sort();
        self.towers.dedup();
    }

    /// Classes grouped by bidegree, each group in (nudge, id) order.
    pub fn by_bidegree(&self) -> BTreeMap<Bidegree, Vec<ClassId>> {
        let mut map: BTreeMap<Bidegree, Vec<ClassId>> = BTreeMap::new();
        for id in self.classes.keys() {
            map.entry(id.bidegree()).or_default().push(*id);
        }
        for ids in map.values_mut() {
            ids.sort_by_key(|id| (id.nudge, *id));
        }
        map
    }

    pub fn max_drawn_filtration(&self) -> Option<i32> {
        self.classes
            .keys()
            .filter(|id| !id.is_tower_element())
            .map(|id| id.filtration)
            .max()
    }

    /// The part of the chart in stems `0..=max_stem`; edges leaving it are dropped.
    pub fn excerpt(&self, max_stem: i32) -> ChartPage {
        let keep = |id: &ClassId| id.stem <= max_stem;
        let mut out = ChartPage::new(self.variant, self.page);
        out.windows = self.windows.clone();
        out.classes = self
            .classes
            .iter()
            .filter(|(k, _)| keep(k))
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        out.struct_edges = self
            .struct_edges
            .iter()
            .filter(|e| keep(&e.source) && keep(&e.target))
            .cloned()
            .collect();
        out.diff_edges = self
            .diff_edges
            .iter()
            .filter(|e| keep(&e.source) && keep(&e.target))
            .cloned()
            .collect();
        out.diff_arrows = self
            .diff_arrows
            .iter()
            .filter(|e| keep(&e.source))
            .cloned()
            .collect();
        out.extension_edges = self
            .extension_edges
            .iter()
            .filter(|e| keep(&e.source) && keep(&e.target))
            .cloned()
            .collect();
        out.towers = self
            .towers
            .iter()
            .filter(|t| keep(&t.base))
            .cloned()
            .collect();
        out
    }
}

/// All published charts in document order, with their section tags.
pub const CHART_TAGS: [(&str, Variant, PageKind); 11] = [
    ("Adams-cl", Variant::Classical, PageKind::E2),
    ("Einfty-cl", Variant::Classical, PageKind::Einf),
    ("cohlgy-mot", Variant::Motivic, PageKind::Cohomology),
    ("E2-mot", Variant::Motivic, PageKind::E2),
    ("E3-mot", Variant::Motivic, PageKind::E3),
    ("E4-mot", Variant::Motivic, PageKind::E4),
    ("Einfty-mot", Variant::Motivic, PageKind::Einf),
    ("E2-Ctau", Variant::CofiberTau, PageKind::E2),
    ("E3-Ctau", Variant::CofiberTau, PageKind::E3),
    ("E4-Ctau", Variant::CofiberTau, PageKind::E4),
    ("Einfty-Ctau", Variant::CofiberTau, PageKind::Einf),
];

pub fn chart_tag(variant: Variant, page: PageKind) -> Option<&'static str> {
    CHART_TAGS
        .iter()
        .find(|(_, v, p)| *v == variant && *p == page)
        .map(|(t, _, _)| *t)
}

pub fn chart_key(tag: &str) -> Option<(Variant, PageKind)> {
    CHART_TAGS
        .iter()
        .find(|(t, _, _)| *t == tag)
        .map(|(_, v, p)| (*v, *p))
}
