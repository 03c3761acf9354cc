//! Constraint search over valid ontic permutations.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use super::{is_valid_permutation, ontic_count, pure_states, z_frame_support, OnticPerm};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const GROUP_CACHE_ENV: &str = "GPTDARWIN_CACHE_DIR";
pub const GROUP_FORMAT_VERSION: &str = "v1";

/// Per-ontic-state image domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraints {
    pub bits: usize,
    pub domains: Vec<u64>,
}

impl Constraints {
    pub fn free(bits: usize) -> Self {
        let n = ontic_count(bits);
        Constraints { bits, domains: vec![full(n); n] }
    }

    /// Ontic states of Z-frame element `f` must land in element `target[f]`.
    pub fn frame_target(bits: usize, target: &[usize]) -> Result<Self> {
        let k = 1usize << bits;
        let mut seen = vec![false; k];
        if target.len() != k || target.iter().any(|&t| t >= k || std::mem::replace(&mut seen[t], true)) {
            return Err(Error::Invalid(format!("target must permute the {k} Z-frame states")));
        }
        let mut c = Constraints::free(bits);
        for (f, &t) in target.iter().enumerate() {
            let (src, dst) = (z_frame_support(bits, f), z_frame_support(bits, t));
            for o in 0..c.domains.len() {
                if src >> o & 1 == 1 {
                    c.domains[o] &= dst;
                }
            }
        }
        Ok(c)
    }
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(OnticPerm),
    ProvedImpossible,
    BudgetExhausted,
}

/// One level of the open search path: the branching variable and how many of
/// its values were tried and remain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrontierEntry {
    pub variable: usize,
    pub tried: usize,
    pub remaining: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub failures: u64,
    pub max_depth: usize,
    pub solutions: u64,
    /// Open path at the moment the budget ran out.
    pub frontier: Vec<FrontierEntry>,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
}

struct Problem {
    n: usize,
    supports: Vec<u64>,
    by_point: Vec<Vec<usize>>,
}

impl Problem {
    fn new(bits: usize) -> Result<Self> {
        let n = ontic_count(bits);
        let supports: Vec<u64> = pure_states(bits)?.iter().map(|s| s.support).collect();
        let by_point =
            (0..n).map(|o| (0..supports.len()).filter(|&i| supports[i] >> o & 1 == 1).collect()).collect();
        Ok(Problem { n, supports, by_point })
    }

    /// Shrink `doms` so every pure support can still map onto a pure support.
    /// Returns `None` on a wipe-out, otherwise whether anything changed.
    fn filter_validity(&self, doms: &mut [u64], stamp: &mut [u32], gen: &mut u32) -> Option<bool> {
        let mut changed = false;
        for &s in &self.supports {
            let pts = bit_iter(s);
            let pivot = pts.clone().min_by_key(|&o| doms[o].count_ones()).unwrap();
            *gen += 1;
            let mut allowed = 0u64;
            let mut any = false;
            for p in bit_iter(doms[pivot]) {
                for &t in &self.by_point[p] {
                    if stamp[t] == *gen {
                        continue;
                    }
                    stamp[t] = *gen;
                    let tm = self.supports[t];
                    let mut cover = 0u64;
                    let mut ok = true;
                    for o in pts.clone() {
                        let d = doms[o] & tm;
                        if d == 0 {
                            ok = false;
                            break;
                        }
                        cover |= d;
                    }
                    if ok && cover == tm {
                        allowed |= tm;
                        any = true;
                    }
                }
            }
            if !any {
                return None;
            }
            for o in pts {
                let d = doms[o] & allowed;
                if d != doms[o] {
                    doms[o] = d;
                    changed = true;
                }
            }
        }
        Some(changed)
    }

    /// Propagate to a fixpoint: all-different, hidden singles, and validity
    /// of the map and of its inverse.
    fn propagate(&self, doms: &mut [u64], stamp: &mut [u32], gen: &mut u32) -> bool {
        loop {
            let mut changed = false;
            if !all_different(doms, self.n, &mut changed) {
                return false;
            }
            match self.filter_validity(doms, stamp, gen) {
                None => return false,
                Some(c) => changed |= c,
            }
            let mut inv = transpose(doms, self.n);
            match self.filter_validity(&mut inv, stamp, gen) {
                None => return false,
                Some(true) => {
                    let back = transpose(&inv, self.n);
                    for (d, b) in doms.iter_mut().zip(back) {
                        if *d != b {
                            *d = b;
                            changed = true;
                        }
                    }
                }
                Some(false) => {}
            }
            if !changed {
                return true;
            }
        }
    }
}

fn bit_iter(mut m: u64) -> impl Iterator<Item = usize> + Clone {
    let mut v = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        v.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    v.into_iter()
}

fn transpose(doms: &[u64], n: usize) -> Vec<u64> {
    let mut t = vec![0u64; n];
    for (o, &d) in doms.iter().enumerate() {
        for p in bit_iter(d) {
            t[p] |= 1 << o;
        }
    }
    t
}

fn all_different(doms: &mut [u64], n: usize, changed: &mut bool) -> bool {
    loop {
        let mut local = false;
        for o in 0..n {
            let d = doms[o];
            if d == 0 {
                return false;
            }
            if d.count_ones() == 1 {
                for (q, e) in doms.iter_mut().enumerate() {
                    if q != o && *e & d != 0 {
                        *e &= !d;
                        local = true;
                    }
                }
            }
        }
        let mut union = 0u64;
        for p in 0..n {
            let holders: Vec<usize> = (0..n).filter(|&o| doms[o] >> p & 1 == 1).collect();
            match holders.as_slice() {
                [] => return false,
                [o] if doms[*o].count_ones() > 1 => {
                    doms[*o] = 1 << p;
                    local = true;
                }
                _ => {}
            }
            union |= 1 << p;
        }
        debug_assert_eq!(union, full(n));
        if !local {
            return true;
        }
        *changed = true;
    }
}

struct Search<'a> {
    problem: &'a Problem,
    budget: u64,
    stats: SearchStats,
    stamp: Vec<u32>,
    gen: u32,
    path: Vec<FrontierEntry>,
    /// Collect every solution instead of stopping at the first.
    enumerate: bool,
    solutions: Vec<OnticPerm>,
}

enum Step {
    Done,
    Exhausted,
    Continue,
}

impl Search<'_> {
    fn run(&mut self, mut doms: Vec<u64>, depth: usize) -> Step {
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if !self.problem.propagate(&mut doms, &mut self.stamp, &mut self.gen) {
            self.stats.failures += 1;
            return Step::Continue;
        }
        let open = (0..self.problem.n).filter(|&o| doms[o].count_ones() > 1).min_by_key(|&o| doms[o].count_ones());
        let Some(var) = open else {
            let perm: OnticPerm = doms.iter().map(|d| d.trailing_zeros() as usize).collect();
            self.stats.solutions += 1;
            self.solutions.push(perm);
            return if self.enumerate { Step::Continue } else { Step::Done };
        };
        let values: Vec<usize> = bit_iter(doms[var]).collect();
        self.path.push(FrontierEntry { variable: var, tried: 0, remaining: values.len() });
        for (i, &p) in values.iter().enumerate() {
            if self.stats.nodes >= self.budget {
                self.stats.frontier = self.path.clone();
                return Step::Exhausted;
            }
            self.stats.nodes += 1;
            if let Some(e) = self.path.last_mut() {
                e.tried = i + 1;
                e.remaining = values.len() - i - 1;
            }
            let mut child = doms.clone();
            child[var] = 1 << p;
            match self.run(child, depth + 1) {
                Step::Continue => {}
                other => return other,
            }
        }
        self.path.pop();
        Step::Continue
    }
}

fn solve(c: &Constraints, budget: u64, enumerate: bool) -> Result<(SearchReport, Vec<OnticPerm>)> {
    let problem = Problem::new(c.bits)?;
    if c.domains.len() != problem.n {
        return Err(Error::Dimension { expected: problem.n, got: c.domains.len() });
    }
    let mut s = Search {
        problem: &problem,
        budget,
        stats: SearchStats::default(),
        stamp: vec![0; problem.supports.len()],
        gen: 0,
        path: Vec::new(),
        enumerate,
        solutions: Vec::new(),
    };
    let step = s.run(c.domains.clone(), 0);
    let outcome = match step {
        Step::Exhausted => SearchOutcome::BudgetExhausted,
        Step::Done => SearchOutcome::Found(s.solutions[0].clone()),
        Step::Continue if enumerate && !s.solutions.is_empty() => SearchOutcome::Found(s.solutions[0].clone()),
        Step::Continue => SearchOutcome::ProvedImpossible,
    };
    Ok((SearchReport { outcome, stats: s.stats }, s.solutions))
}

/// Search for a valid ontic permutation realizing `target` on the Z-product
/// frame (`target[f]` is the image of frame element `f`).
pub fn search_classical_implementation(bits: usize, target: &[usize], budget: u64) -> Result<SearchReport> {
    let c = Constraints::frame_target(bits, target)?;
    let (report, _) = solve(&c, budget, false)?;
    if let SearchOutcome::Found(p) = &report.outcome {
        if !is_valid_permutation(bits, p)? {
            return Err(Error::Certificate("search returned an invalid permutation".into()));
        }
    }
    Ok(report)
}

/// Every valid ontic permutation, sorted. Branches on the image of ontic
/// state 0 run in parallel.
pub fn enumerate_group(bits: usize) -> Result<Vec<OnticPerm>> {
    if bits > 2 {
        return Err(Error::Unsupported(format!("group enumeration for {bits} systems")));
    }
    let n = ontic_count(bits);
    let parts: Vec<Result<Vec<OnticPerm>>> = (0..n)
        .into_par_iter()
        .map(|p| {
            let mut c = Constraints::free(bits);
            c.domains[0] = 1 << p;
            let (report, sols) = solve(&c, u64::MAX, true)?;
            debug_assert!(report.outcome != SearchOutcome::BudgetExhausted);
            Ok(sols)
        })
        .collect();
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    all.sort();
    Ok(all)
}

fn cache_path(bits: usize) -> PathBuf {
    let dir = std::env::var_os(GROUP_CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("gptdarwin"));
    dir.join(format!("stm-group-{bits}.{GROUP_FORMAT_VERSION}.txt"))
}

fn header(bits: usize, count: usize) -> String {
    format!("gptdarwin stm-group {GROUP_FORMAT_VERSION} bits={bits} count={count}")
}

fn read_cache(bits: usize) -> Option<Vec<OnticPerm>> {
    let text = std::fs::read_to_string(cache_path(bits)).ok()?;
    let mut lines = text.lines();
    let head = lines.next()?;
    let perms: Vec<OnticPerm> = lines
        .map(|l| l.split_whitespace().map(|x| x.parse::<usize>().ok()).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    if head != header(bits, perms.len()) {
        return None;
    }
    let n = ontic_count(bits);
    let sound = perms.iter().all(|p| p.len() == n && is_valid_permutation(bits, p).unwrap_or(false));
    sound.then_some(perms)
}

/// The valid permutation group, read from the on-disk cache when present.
/// A cache that fails to parse or re-validate is recomputed and rewritten.
pub fn load_or_enumerate_group(bits: usize) -> Result<Vec<OnticPerm>> {
    if let Some(g) = read_cache(bits) {
        return Ok(g);
    }
    let g = enumerate_group(bits)?;
    let path = cache_path(bits);
    let mut text = header(bits, g.len());
    for p in &g {
        text.push('\n');
        text.push_str(&p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    }
    // a read-only cache directory is not an error
    if let Some(dir) = path.parent() {
        let _ = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, text));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_system_group_is_s4() {
        assert_eq!(enumerate_group(1).unwrap().len(), 24);
    }

    #[test]
    fn single_bit_flip_is_found() {
        let r = search_classical_implementation(1, &[1, 0], 1000).unwrap();
        let SearchOutcome::Found(p) = r.outcome else { panic!("expected a permutation") };
        assert!(p == vec![2, 3, 0, 1] || p == vec![3, 2, 1, 0], "{p:?}");
    }

    #[test]
    fn malformed_target_is_rejected() {
        assert!(search_classical_implementation(2, &[0, 0, 1, 2], 10).is_err());
        assert!(search_classical_implementation(2, &[0, 1, 2], 10).is_err());
    }

    #[test]
    fn tiny_budget_exhausts() {
        let r = search_classical_implementation(2, &[1, 0, 3, 2], 0).unwrap();
        assert_eq!(r.outcome, SearchOutcome::BudgetExhausted);
    }
}
