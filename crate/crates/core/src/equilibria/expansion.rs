//! Expansion sets `f(e, i)` and the level sets `E_0 ⊆ E_1 ⊆ …` built from
//! the most congested edges of a Nash routing.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::bounds::BoundVerdict;
use super::{is_nash_state, EquilibriumReport};
use crate::cost::{Cost, CostModel, RoutingState};
use crate::error::{Error, Result};
use crate::game::{floor_log2, Instance, Routing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerImage {
    pub edge: usize,
    pub player: usize,
    pub image: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundSet {
    pub level: usize,
    pub edges: Vec<usize>,
    pub image_size: usize,
    /// Every edge of the set meets the congestion floor defining `Z`.
    pub within_z: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionDiagnostic {
    pub model: CostModel,
    /// Whether the existence claim for `X` applies (always for sum-bucket;
    /// for max only when `C ≥ D + 2 lg n + 2`).
    pub applicable: bool,
    pub levels: Vec<Vec<usize>>,
    /// First level `E_j` with `|f(E_j)| ≤ 2|E_j|`.
    pub found_x: Option<FoundSet>,
    /// `f(e)` for every edge in the last level.
    pub f_images: BTreeMap<usize, Vec<usize>>,
    pub per_player_f: Vec<PlayerImage>,
    /// `(edge, player)` pairs with `f(e, i)` empty. Sum-bucket scans every
    /// edge of every chosen path; max scans edges with `C_e ≥ D + 2`.
    pub empty_images: Vec<(usize, usize)>,
}

impl ExpansionDiagnostic {
    /// Verdict that `|f(e, i)| ≥ 1` everywhere it was evaluated.
    pub fn nonempty_verdict(&self) -> BoundVerdict {
        BoundVerdict {
            name: "expansion_nonempty_images".into(),
            applicable: self.model == CostModel::SumBucket,
            holds: self.empty_images.is_empty(),
            lhs: 0.into(),
            rhs: (self.empty_images.len() as u64).into(),
            witnesses: self
                .empty_images
                .iter()
                .map(|(e, i)| format!("f({e}, {i}) is empty"))
                .collect(),
        }
    }

    /// Verdict that some `X ⊆ Z` with `|f(X)| ≤ 2|X|` was found.
    pub fn found_x_verdict(&self) -> BoundVerdict {
        let holds = self.found_x.as_ref().is_some_and(|x| x.within_z);
        let (lhs, rhs) = self
            .found_x
            .as_ref()
            .map_or((0, 0), |x| (x.image_size as u64, 2 * x.edges.len() as u64));
        BoundVerdict {
            name: "expansion_small_image".into(),
            applicable: self.applicable,
            holds,
            lhs: lhs.into(),
            rhs: rhs.into(),
            witnesses: self
                .found_x
                .iter()
                .map(|x| format!("level {} with {} edges", x.level, x.edges.len()))
                .collect(),
        }
    }
}

struct Ctx<'a> {
    model: CostModel,
    st: &'a RoutingState<'a>,
    optimum: &'a Routing,
    d_bar_star: Cost,
    on_edge: Vec<Vec<usize>>,
}

impl Ctx<'_> {
    fn edge_value(&self, e: usize) -> Cost {
        match self.model {
            CostModel::SumBucket => self.st.profile().normalized_edge(e),
            _ => self.st.profile().total(e),
        }
    }

    fn image(&self, e: usize, i: usize) -> Vec<usize> {
        let inst = self.st.instance();
        let star = inst.chosen(self.optimum, i);
        let prof = self.st.profile();
        match self.model {
            CostModel::SumBucket => {
                let own = prof.in_bucket(e, floor_log2(self.st.length(i)) as usize);
                let k = floor_log2(star.len() as u64) as usize;
                star.edges()
                    .iter()
                    .copied()
                    .filter(|&e2| prof.in_bucket(e2, k) + self.d_bar_star >= own)
                    .collect()
            }
            _ => {
                let ce = prof.total(e);
                star.edges()
                    .iter()
                    .copied()
                    .filter(|&e2| prof.total(e2) + 1 >= ce)
                    .collect()
            }
        }
    }

    fn image_of_edge(&self, e: usize) -> BTreeSet<usize> {
        self.on_edge[e]
            .iter()
            .flat_map(|&i| self.image(e, i))
            .collect()
    }

    fn image_of_set(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        set.iter().flat_map(|&e| self.image_of_edge(e)).collect()
    }
}

/// Builds the level sets for a Nash routing against the optimum in `report`.
pub fn expansion_diagnostic(
    model: CostModel,
    inst: &Instance,
    nash_routing: &Routing,
    report: &EquilibriumReport,
) -> Result<ExpansionDiagnostic> {
    if model == CostModel::Sum {
        return Err(Error::NoPotential);
    }
    if report.model != model {
        return Err(Error::WrongModel {
            expected: model,
            found: report.model,
        });
    }
    let st = RoutingState::new(inst, nash_routing.clone())?;
    if !is_nash_state(model, &st) {
        return Err(Error::NotNash(model));
    }
    let mut on_edge = vec![Vec::new(); inst.edge_count()];
    for i in 0..inst.player_count() {
        for &e in st.path(i).edges() {
            on_edge[e].push(i);
        }
    }
    let ctx = Ctx {
        model,
        st: &st,
        optimum: &report.optimal_routing,
        d_bar_star: report.optimal_d,
        on_edge,
    };

    let lg = inst.stats().lg_n();
    let (c, d) = st.social_parts(model);
    let (applicable, z_floor) = match model {
        CostModel::SumBucket => (true, c.saturating_sub(2 * report.optimal_d * lg)),
        _ => (c >= d + 2 * lg + 2, c.saturating_sub(2 * lg)),
    };

    let mut levels: Vec<BTreeSet<usize>> =
        vec![(0..inst.edge_count()).filter(|&e| ctx.edge_value(e) == c).collect()];
    for _ in 0..2 * lg {
        let last = levels.last().expect("non-empty");
        let next: BTreeSet<usize> = last.union(&ctx.image_of_set(last)).copied().collect();
        levels.push(next);
    }

    let found_x = levels.iter().enumerate().find_map(|(j, set)| {
        let image = ctx.image_of_set(set);
        (image.len() <= 2 * set.len()).then(|| FoundSet {
            level: j,
            edges: set.iter().copied().collect(),
            image_size: image.len(),
            within_z: set.iter().all(|&e| ctx.edge_value(e) >= z_floor),
        })
    });

    let last = levels.last().expect("non-empty");
    let f_images = last
        .iter()
        .map(|&e| (e, ctx.image_of_edge(e).into_iter().collect()))
        .collect();
    let per_player_f = last
        .iter()
        .flat_map(|&e| {
            ctx.on_edge[e].iter().map(move |&i| (e, i))
        })
        .map(|(edge, player)| PlayerImage {
            edge,
            player,
            image: ctx.image(edge, player),
        })
        .collect();

    let mut empty_images = Vec::new();
    for i in 0..inst.player_count() {
        for &e in st.path(i).edges() {
            let in_scope = match model {
                CostModel::SumBucket => true,
                _ => st.profile().total(e) >= d + 2,
            };
            if in_scope && ctx.image(e, i).is_empty() {
                empty_images.push((e, i));
            }
        }
    }
    empty_images.sort_unstable();

    Ok(ExpansionDiagnostic {
        model,
        applicable,
        levels: levels.into_iter().map(|s| s.into_iter().collect()).collect(),
        found_x,
        f_images,
        per_player_f,
        empty_images,
    })
}
