//! Strong symmetry: transitivity of a finite transformation group on frames.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use super::{permute_mask, pure_states, support_index, OnticPerm};
use crate::error::{Error, Result};
use crate::gpt::GptSystem;
use crate::numeric::{approx_eq_vec, dot, Matrix, Scalar};
use crate::Q;

/// Orbit structure of the ordered frames of one size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryLevel {
    pub size: usize,
    pub ordered_frames: usize,
    pub orbits: usize,
    /// Two ordered frames in different orbits, as extreme-state indices.
    pub disconnected: Option<(Vec<usize>, Vec<usize>)>,
}

impl SymmetryLevel {
    pub fn transitive(&self) -> bool {
        self.orbits <= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongSymmetryReport {
    pub system: String,
    pub group_order: usize,
    pub levels: Vec<SymmetryLevel>,
    pub strongly_symmetric: bool,
}

impl StrongSymmetryReport {
    pub fn level(&self, size: usize) -> Option<&SymmetryLevel> {
        self.levels.iter().find(|l| l.size == size)
    }
}

/// Action of linear maps on the extreme states, as index permutations.
/// Maps that do not permute the extreme states are rejected.
pub fn state_action<S: Scalar>(sys: &GptSystem<S>, maps: &[Matrix<S>]) -> Result<Vec<Vec<usize>>> {
    let states = sys.extreme_states();
    maps.iter()
        .map(|m| {
            states
                .iter()
                .map(|s| {
                    let img = m.mul_vec(s)?;
                    states
                        .iter()
                        .position(|t| approx_eq_vec(t, &img))
                        .ok_or_else(|| Error::Invalid("map does not permute the extreme states".into()))
                })
                .collect()
        })
        .collect()
}

/// Action of ontic permutations on the extreme states of `stm_system(bits)`.
pub fn ontic_state_action(sys: &GptSystem<Q>, bits: usize, perms: &[OnticPerm]) -> Result<Vec<Vec<usize>>> {
    let states = pure_states(bits)?;
    let idx = support_index(&states);
    let extreme: HashMap<Vec<Q>, usize> = sys.extreme_states().into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    let to_extreme: Vec<usize> = states
        .iter()
        .map(|s| extreme.get(&s.vector::<Q>(bits)).copied())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Invalid(format!("{} is not the toy model on {bits} systems", sys.name())))?;
    let mut from_extreme = vec![0; states.len()];
    for (i, &e) in to_extreme.iter().enumerate() {
        from_extreme[e] = i;
    }
    perms
        .iter()
        .map(|p| {
            from_extreme
                .iter()
                .map(|&i| {
                    idx.get(&permute_mask(p, states[i].support))
                        .map(|&j| to_extreme[j])
                        .ok_or_else(|| Error::Invalid("permutation is not valid".into()))
                })
                .collect()
        })
        .collect()
}

/// Group generated by index permutations, by breadth-first closure.
pub fn closure(generators: &[Vec<usize>], cap: usize) -> Result<Vec<Vec<usize>>> {
    let Some(n) = generators.first().map(|g| g.len()) else {
        return Err(Error::Invalid("no designated transformations".into()));
    };
    let id: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    let mut out = Vec::new();
    while let Some(g) = queue.pop_front() {
        for h in generators {
            let gh: Vec<usize> = g.iter().map(|&x| h[x]).collect();
            if seen.insert(gh.clone()) {
                if seen.len() > cap {
                    return Err(Error::Unsupported(format!("group order exceeds {cap}")));
                }
                queue.push_back(gh);
            }
        }
        out.push(g);
    }
    out.sort();
    Ok(out)
}

/// Frames of every size among the extreme states, as sorted index sets.
pub fn all_frames<S: Scalar>(sys: &GptSystem<S>) -> Result<Vec<Vec<usize>>> {
    let states = sys.extreme_states();
    let n = states.len();
    let gens = sys.effects().generators();
    let vals: Vec<Vec<S>> = gens.iter().map(|g| states.iter().map(|w| dot(g, w)).collect()).collect();
    // a generator vanishing on one state and not the other, both ways
    let separated = |i: usize, j: usize| vals.iter().any(|v| v[j].is_negligible() && v[i].is_pos());
    let rows: Vec<Result<Vec<bool>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j <= i || !separated(i, j) || !separated(j, i) {
                        return Ok(false);
                    }
                    Ok(sys.distinguishing_measurement(&[states[i].clone(), states[j].clone()])?.is_some())
                })
                .collect()
        })
        .collect();
    let mut adj = vec![vec![false; n]; n];
    for (i, row) in rows.into_iter().enumerate() {
        for (j, ok) in row?.into_iter().enumerate() {
            if ok {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    let cliques = crate::gpt::all_cliques(&adj);
    let keep: Vec<Result<bool>> = cliques
        .par_iter()
        .map(|c| {
            if c.len() <= 2 {
                return Ok(true);
            }
            let fs: Vec<Vec<S>> = c.iter().map(|&i| states[i].clone()).collect();
            Ok(sys.distinguishing_measurement(&fs)?.is_some())
        })
        .collect();
    let mut out = Vec::new();
    for (c, k) in cliques.into_iter().zip(keep) {
        if k? {
            out.push(c);
        }
    }
    Ok(out)
}

fn ordered(frame: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p = frame.to_vec();
    fn rec(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(p, k + 1, out);
            p.swap(k, i);
        }
    }
    rec(&mut p, 0, &mut out);
    out
}

/// Orbits of `group` (index permutations of the extreme states) on ordered
/// frames of each size. Strong symmetry holds when every size has one orbit.
pub fn check_strong_symmetry<S: Scalar>(
    sys: &GptSystem<S>,
    group: &[Vec<usize>],
) -> Result<StrongSymmetryReport> {
    if group.is_empty() {
        return Err(Error::Invalid(format!("{}: no designated group", sys.name())));
    }
    let frames = all_frames(sys)?;
    let top = frames.iter().map(|f| f.len()).max().unwrap_or(0);
    let mut levels = Vec::new();
    for size in 1..=top {
        let all: Vec<Vec<usize>> = frames.iter().filter(|f| f.len() == size).flat_map(|f| ordered(f)).collect();
        let pos: HashMap<&[usize], usize> = all.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
        let mut label: Vec<Option<usize>> = vec![None; all.len()];
        let mut reps: Vec<&[usize]> = Vec::new();
        for (i, f) in all.iter().enumerate() {
            if label[i].is_some() {
                continue;
            }
            let orbit = reps.len();
            reps.push(f);
            for g in group {
                let img: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                let k = pos
                    .get(img.as_slice())
                    .ok_or_else(|| Error::Invalid("group element maps a frame to a non-frame".into()))?;
                label[*k] = Some(orbit);
            }
            label[i] = Some(orbit);
        }
        let disconnected = (reps.len() > 1).then(|| (reps[0].to_vec(), reps[1].to_vec()));
        levels.push(SymmetryLevel { size, ordered_frames: all.len(), orbits: reps.len(), disconnected });
    }
    let strongly_symmetric = levels.iter().all(|l| l.transitive());
    Ok(StrongSymmetryReport { system: sys.name().to_string(), group_order: group.len(), levels, strongly_symmetric })
}
