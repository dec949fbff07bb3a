use thiserror::Error;

use crate::model::{materialize_towers, ChartPage, Feature, ModelError, DEFAULT_F_CAP, MAX_STEM};

use super::{compare, turn_pages, ComputedPage, DiscrepancyReport, PageError, Window};

/// A published E_r chart, the differentials to turn on it, and the published
/// chart the result should reproduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chain {
    pub source: &'static str,
    pub pages: &'static [u8],
    pub target: &'static str,
}

/// Page-turning chains whose both ends are published.
pub const CHAINS: [Chain; 4] = [
    Chain {
        source: "E2-mot",
        pages: &[2],
        target: "E3-mot",
    },
    Chain {
        source: "E3-mot",
        pages: &[3],
        target: "E4-mot",
    },
    Chain {
        source: "E4-mot",
        pages: &[4, 5],
        target: "Einfty-mot",
    },
    Chain {
        source: "Adams-cl",
        pages: &[2, 3, 4, 5],
        target: "Einfty-cl",
    },
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Page(#[from] PageError),
}

/// Stems on which both charts claim to show every class.
pub fn default_compare_stems(source: &ChartPage, published: &ChartPage) -> i32 {
    let w = |c: &ChartPage| c.window(Feature::Classes).unwrap_or(MAX_STEM);
    w(source).min(w(published))
}

/// Materializes both charts, turns `pages` on the whole of `source` and
/// compares the result with `published` on stems up to `max_stem`.
///
/// The turn itself runs on the full chart so that the window only limits the
/// comparison; bidegrees near the edge of the drawn grid still come out
/// indeterminate.
pub fn check_chain(
    source: &ChartPage,
    pages: &[u8],
    published: &ChartPage,
    max_stem: i32,
    include_uncertain: bool,
) -> Result<(ComputedPage, DiscrepancyReport), ChainError> {
    let src = materialize_towers(source, DEFAULT_F_CAP)?;
    let dst = materialize_towers(published, DEFAULT_F_CAP)?;
    let computed = turn_pages(
        &src,
        pages,
        Window::new(MAX_STEM, DEFAULT_F_CAP),
        include_uncertain,
    )?;
    let report = compare(&computed, &dst, Window::new(max_stem, DEFAULT_F_CAP));
    Ok((computed, report))
}
