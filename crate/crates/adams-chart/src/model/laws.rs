use std::str::FromStr;

use super::{ExtensionKind, ModelError, StructKind};

/// Every kind of edge that carries a fixed bidegree law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    H0,
    H1,
    H2,
    Two,
    Eta,
    Nu,
    Tau,
}

impl From<StructKind> for EdgeKind {
    fn from(k: StructKind) -> Self {
        match k {
            StructKind::H0 => EdgeKind::H0,
            StructKind::H1 => EdgeKind::H1,
            StructKind::H2 => EdgeKind::H2,
        }
    }
}

impl From<ExtensionKind> for EdgeKind {
    fn from(k: ExtensionKind) -> Self {
        match k {
            ExtensionKind::Two => EdgeKind::Two,
            ExtensionKind::Eta => EdgeKind::Eta,
            ExtensionKind::Nu => EdgeKind::Nu,
            ExtensionKind::Tau => EdgeKind::Tau,
        }
    }
}

impl FromStr for EdgeKind {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, ModelError> {
        Ok(match s {
            "h0" => EdgeKind::H0,
            "h1" => EdgeKind::H1,
            "h2" => EdgeKind::H2,
            "two" => EdgeKind::Two,
            "eta" => EdgeKind::Eta,
            "nu" => EdgeKind::Nu,
            "tau" => EdgeKind::Tau,
            _ => return Err(ModelError::UnknownKind(s.to_string())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiltrationShift {
    Exact(i32),
    /// Hidden extensions jump by some k ≥ 1.
    AnyPositive,
}

impl FiltrationShift {
    pub fn admits(self, df: i32) -> bool {
        match self {
            FiltrationShift::Exact(k) => df == k,
            FiltrationShift::AnyPositive => df >= 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shift {
    pub stem: i32,
    pub filtration: FiltrationShift,
}

impl Shift {
    pub fn admits(self, ds: i32, df: i32) -> bool {
        ds == self.stem && self.filtration.admits(df)
    }
}

/// Bidegree change of a d_r differential: (−1, +r).
pub fn diff_shift(page: i64) -> Result<(i32, i32), ModelError> {
    if !(2..=5).contains(&page) {
        return Err(ModelError::InvalidPage(page));
    }
    Ok((-1, page as i32))
}

pub fn struct_shift(kind: EdgeKind) -> Shift {
    let (stem, filtration) = match kind {
        EdgeKind::H0 => (0, FiltrationShift::Exact(1)),
        EdgeKind::H1 => (1, FiltrationShift::Exact(1)),
        EdgeKind::H2 => (3, FiltrationShift::Exact(1)),
        EdgeKind::Two | EdgeKind::Tau => (0, FiltrationShift::AnyPositive),
        EdgeKind::Eta => (1, FiltrationShift::AnyPositive),
        EdgeKind::Nu => (3, FiltrationShift::AnyPositive),
    };
    Shift { stem, filtration }
}
