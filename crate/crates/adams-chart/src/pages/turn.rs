use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::model::{Bidegree, ChartPage, DiffEdge, Variant};
use crate::tau::{homology, Homology, PolyMatrix, PresentedModule, TauOrder, TauPoly};

use super::{differentials, group_by_bidegree, BidegreeModuleMap, PageError, Window};

/// Summands of a computed page, per bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputedPage {
    pub variant: Variant,
    /// Differentials applied, in order.
    pub pages: Vec<u8>,
    pub window: Window,
    /// τ-orders of the surviving summands, sorted; empty bidegrees are omitted.
    pub summands: BTreeMap<Bidegree, Vec<TauOrder>>,
    /// Bidegrees whose homology depends on data outside the window.
    pub indeterminate: BTreeSet<Bidegree>,
    /// Differentials used, listed at both of their bidegrees.
    pub contributing: BTreeMap<Bidegree, Vec<DiffEdge>>,
    /// Bidegrees touched by an uncertain differential that was left out.
    pub excluded_uncertain: BTreeSet<Bidegree>,
    /// Bidegrees containing tower elements of the input chart.
    pub tower_bidegrees: BTreeSet<Bidegree>,
}

impl ComputedPage {
    pub fn orders(&self, bd: Bidegree) -> &[TauOrder] {
        self.summands.get(&bd).map_or(&[], Vec::as_slice)
    }

    /// One line per occupied or indeterminate bidegree, in bidegree order.
    pub fn to_text(&self) -> String {
        let pages: Vec<String> = self.pages.iter().map(|r| format!("d{r}")).collect();
        let mut out = format!(
            "computed {} after {} window stems<={} filtration<={}\n",
            self.variant.as_str(),
            pages.join(","),
            self.window.max_stem,
            self.window.max_filtration
        );
        let keys: BTreeSet<Bidegree> = self
            .summands
            .keys()
            .chain(&self.indeterminate)
            .copied()
            .collect();
        for bd in keys {
            if self.indeterminate.contains(&bd) {
                let _ = writeln!(out, "{bd} indeterminate");
            } else {
                let orders: Vec<String> = self.orders(bd).iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "{bd} {}", orders.join(","));
            }
        }
        out
    }
}

/// Per-bidegree state while turning several pages: the current summands,
/// their representatives in the original generators, and the homology steps
/// taken so far (to express original cycles in current coordinates).
struct State {
    orders: Vec<TauOrder>,
    reps: PolyMatrix,
    steps: Vec<Homology>,
}

impl State {
    fn coordinates(&self, v: &[TauPoly]) -> Option<Vec<TauPoly>> {
        let mut v = v.to_vec();
        for s in &self.steps {
            v = s.coordinates(&v)?;
        }
        Some(v)
    }
}

/// E_{r+1} from the d_r edges of `chart`.
pub fn turn_page(
    chart: &ChartPage,
    r: u8,
    window: Window,
    include_uncertain: bool,
) -> Result<ComputedPage, PageError> {
    turn_pages(chart, &[r], window, include_uncertain)
}

/// Applies d_r for each r in `pages` in turn, tracking which original cycles
/// survive so that later differentials act on the right classes.
///
/// A bidegree is indeterminate once a differential into or out of it could
/// come from outside `window`, or once it is joined by a differential to an
/// indeterminate bidegree.
pub fn turn_pages(
    chart: &ChartPage,
    pages: &[u8],
    window: Window,
    include_uncertain: bool,
) -> Result<ComputedPage, PageError> {
    let groups = chart.by_bidegree();
    let mut state: BTreeMap<Bidegree, State> = groups
        .iter()
        .map(|(bd, gens)| {
            let orders: Vec<TauOrder> = gens.iter().map(|g| chart.classes[g].tau_order).collect();
            (
                *bd,
                State {
                    reps: PolyMatrix::identity(orders.len()),
                    orders,
                    steps: Vec::new(),
                },
            )
        })
        .collect();
    let mut indeterminate: BTreeSet<Bidegree> = groups
        .keys()
        .filter(|bd| !window.contains(**bd))
        .copied()
        .collect();
    let mut contributing: BTreeMap<Bidegree, Vec<DiffEdge>> = BTreeMap::new();
    let mut excluded_uncertain = BTreeSet::new();

    for &r in pages {
        let map: BidegreeModuleMap = group_by_bidegree(chart, r, include_uncertain)?;
        let ri = i32::from(r);
        for e in differentials(chart, r, true) {
            if e.uncertain && !include_uncertain {
                excluded_uncertain.insert(e.source.bidegree());
                excluded_uncertain.insert(e.target.bidegree());
            } else {
                contributing
                    .entry(e.source.bidegree())
                    .or_default()
                    .push(e.clone());
                contributing
                    .entry(e.target.bidegree())
                    .or_default()
                    .push(e.clone());
            }
        }

        // d_r on the current page, in current coordinates at both ends.
        let mut current: BTreeMap<Bidegree, PolyMatrix> = BTreeMap::new();
        for (sb, entry) in &map.entries {
            if entry.outgoing.is_zero() {
                continue;
            }
            let tb = sb.offset(-1, ri);
            let image = entry.outgoing.mul(&state[sb].reps);
            let target = &state[&tb];
            let mut cols = Vec::with_capacity(image.cols());
            for j in 0..image.cols() {
                let c = target
                    .coordinates(&image.column(j))
                    .ok_or(PageError::TargetNotCycle {
                        page: r,
                        source_bd: *sb,
                        target_bd: tb,
                    })?;
                cols.push(c);
            }
            current.insert(*sb, PolyMatrix::from_columns(target.orders.len(), &cols));
        }

        let mut touched = BTreeSet::new();
        for sb in current.keys() {
            touched.insert(*sb);
            touched.insert(sb.offset(-1, ri));
        }

        let mut newly = BTreeSet::new();
        for bd in state.keys() {
            let (ib, ob) = (bd.offset(1, -ri), bd.offset(-1, ri));
            let outside = !window.contains(ib) || !window.contains(ob);
            let joined = (current.contains_key(&ib) && indeterminate.contains(&ib))
                || (current.contains_key(bd) && indeterminate.contains(&ob));
            if outside || joined {
                newly.insert(*bd);
            }
        }
        indeterminate.extend(newly);

        let mut updated = Vec::new();
        for bd in &touched {
            let (ib, ob) = (bd.offset(1, -ri), bd.offset(-1, ri));
            let st = &state[bd];
            let in_module = match current.get(&ib) {
                Some(_) => PresentedModule::new(state[&ib].orders.clone()),
                None => PresentedModule::default(),
            };
            let out_module = match current.get(bd) {
                Some(_) => PresentedModule::new(state[&ob].orders.clone()),
                None => PresentedModule::default(),
            };
            let d_in = current
                .get(&ib)
                .cloned()
                .unwrap_or_else(|| PolyMatrix::zeros(st.orders.len(), 0));
            let d_out = current
                .get(bd)
                .cloned()
                .unwrap_or_else(|| PolyMatrix::zeros(0, st.orders.len()));
            let middle = PresentedModule::new(st.orders.clone());
            let h =
                homology(&in_module, &middle, &out_module, &d_in, &d_out).map_err(|source| {
                    PageError::Algebra {
                        page: r,
                        bidegree: *bd,
                        source,
                    }
                })?;
            updated.push((*bd, h));
        }
        for (bd, h) in updated {
            let st = state.get_mut(&bd).expect("touched bidegrees are occupied");
            st.reps = st.reps.mul(&h.representatives);
            st.orders = h.module.orders.clone();
            st.steps.push(h);
        }
    }

    let summands = state
        .into_iter()
        .filter(|(bd, st)| !indeterminate.contains(bd) && !st.orders.is_empty())
        .map(|(bd, st)| {
            let mut o = st.orders;
            o.sort();
            (bd, o)
        })
        .collect();
    for edges in contributing.values_mut() {
        edges.sort();
        edges.dedup();
    }
    let tower_bidegrees = chart
        .classes
        .keys()
        .filter(|id| id.is_tower_element())
        .map(|id| id.bidegree())
        .collect();
    Ok(ComputedPage {
        variant: chart.variant,
        pages: pages.to_vec(),
        window,
        summands,
        indeterminate,
        contributing,
        excluded_uncertain,
        tower_bidegrees,
    })
}
