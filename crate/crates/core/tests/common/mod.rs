//! Brute-force reference computations, written against the raw instance data.

#![allow(dead_code)]

use routegames::{CostModel, Instance, Routing};

fn bucket(len: usize) -> u32 {
    let mut b = 0;
    while (2usize << b) <= len {
        b += 1;
    }
    b
}

fn paths<'a>(inst: &'a Instance, r: &Routing) -> Vec<&'a [usize]> {
    inst.players
        .iter()
        .zip(r.choices())
        .map(|(p, &k)| p.strategies[k].edges())
        .collect()
}

/// Per-player (congestion part, length part) under `model`.
pub fn parts(model: CostModel, inst: &Instance, r: &Routing) -> Vec<(u64, u64)> {
    let ps = paths(inst, r);
    ps.iter()
        .map(|p| match model {
            CostModel::SumBucket => {
                let b = bucket(p.len());
                let c = p
                    .iter()
                    .map(|e| ps.iter().filter(|q| bucket(q.len()) == b && q.contains(e)).count())
                    .max()
                    .unwrap_or(0);
                (c as u64, (1u64 << (b + 1)) - 1)
            }
            _ => {
                let c = p
                    .iter()
                    .map(|e| ps.iter().filter(|q| q.contains(e)).count())
                    .max()
                    .unwrap_or(0);
                (c as u64, p.len() as u64)
            }
        })
        .collect()
}

pub fn player_cost(model: CostModel, inst: &Instance, r: &Routing, i: usize) -> u64 {
    let (c, d) = parts(model, inst, r)[i];
    match model {
        CostModel::Max => c.max(d),
        _ => c + d,
    }
}

pub fn social_cost(model: CostModel, inst: &Instance, r: &Routing) -> u64 {
    let ps = parts(model, inst, r);
    let c = ps.iter().map(|x| x.0).max().unwrap_or(0);
    let d = ps.iter().map(|x| x.1).max().unwrap_or(0);
    match model {
        CostModel::Max => c.max(d),
        _ => c + d,
    }
}

pub fn is_nash(model: CostModel, inst: &Instance, r: &Routing) -> bool {
    (0..inst.player_count()).all(|i| {
        let now = player_cost(model, inst, r, i);
        (0..inst.players[i].strategies.len()).all(|s| player_cost(model, inst, &r.with(i, s), i) >= now)
    })
}

/// All profiles, last player varying fastest.
pub fn all_profiles(inst: &Instance) -> Vec<Routing> {
    let mut out = vec![Vec::new()];
    for p in &inst.players {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..p.strategies.len()).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(Routing::new).collect()
}

pub struct Summary {
    pub optimum: u64,
    pub nash: Vec<Routing>,
    pub best: Option<u64>,
    pub worst: Option<u64>,
}

pub fn summarize(model: CostModel, inst: &Instance) -> Summary {
    let profiles = all_profiles(inst);
    let optimum = profiles.iter().map(|r| social_cost(model, inst, r)).min().unwrap();
    let nash: Vec<Routing> = profiles.into_iter().filter(|r| is_nash(model, inst, r)).collect();
    let costs: Vec<u64> = nash.iter().map(|r| social_cost(model, inst, r)).collect();
    Summary {
        optimum,
        best: costs.iter().copied().min(),
        worst: costs.iter().copied().max(),
        nash,
    }
}
