//! Orderly search for primitive formally dual sets.
//!
//! Candidate sets are built as strictly increasing index lists. A node is
//! kept only if it is the lexicographically smallest member of its orbit
//! under the chosen symmetry (translations, optionally composed with
//! automorphisms). Removing the largest element of an orbit-minimal set
//! leaves an orbit-minimal set, so every orbit minimum is reached through a
//! chain of kept nodes: the search visits exactly one representative per
//! orbit and never loses one.
//!
//! The tree is cut at `frontier_depth` into independent tasks. Running the
//! tasks (in any order, on any number of workers) and merging the results
//! is the caller's business; [`SearchContext::run_serial`] does it on one
//! thread.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::abelian::{AbelianGroup, Automorphism, Automorphisms, ElementSet, GroupSpec, PairingMatrix};
use crate::cyclotomic::{cyclotomic_poly, ClassVector, CyclotomicPoly};
use crate::duality::{Certificate, CertificateKind, DualityChecker, WeightEnumerator};
use crate::primitivity::is_primitive;
use crate::Error;

/// Default cap on enumerated automorphisms.
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 1 << 18;

/// Tolerance of the floating-point spectrum screen.
pub const FLOAT_SCREEN_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `S` dual to itself under some isomorphism `G -> G^`.
    SelfDual,
    /// `S` dual to some `T` of size `N / |S|`.
    Pair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symmetry {
    None,
    Translation,
    Affine,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SearchConfig {
    pub spec: GroupSpec,
    pub target_size: usize,
    pub mode: Mode,
    pub symmetry: Symmetry,
    pub frontier_depth: usize,
    /// Node limit; `None` runs to completion.
    pub budget: Option<u64>,
    /// Restricts the search to sets whose smallest elements are exactly these.
    pub prefix: Vec<usize>,
    pub automorphism_cap: usize,
}

impl SearchConfig {
    /// Affine symmetry, frontier depth `min(2, size - 1)`, no budget.
    pub fn new(spec: GroupSpec, target_size: usize, mode: Mode) -> Self {
        SearchConfig {
            spec,
            target_size,
            mode,
            symmetry: Symmetry::Affine,
            frontier_depth: target_size.saturating_sub(1).clamp(1, 2),
            budget: None,
            prefix: Vec::new(),
            automorphism_cap: DEFAULT_AUTOMORPHISM_CAP,
        }
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn with_frontier_depth(mut self, depth: usize) -> Self {
        self.frontier_depth = depth;
        self
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_prefix(mut self, prefix: Vec<usize>) -> Self {
        self.prefix = prefix;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.spec.order();
        let k = self.target_size;
        if k < 2 {
            return Err(Error::InvalidConfig("target size must be at least 2 (singletons are never primitive)"));
        }
        if k > n || !n.is_multiple_of(k) {
            return Err(Error::InvalidConfig("target size must divide the group order (|S| |T| = |G| for dual pairs)"));
        }
        if self.mode == Mode::SelfDual && k * k != n {
            return Err(Error::InvalidConfig("self-dual search needs |S|^2 = |G|"));
        }
        if self.frontier_depth < 1 || self.frontier_depth >= k {
            return Err(Error::InvalidConfig("frontier depth must satisfy 1 <= depth < target size"));
        }
        if self.automorphism_cap < 1 {
            return Err(Error::CapTooSmall);
        }
        if self.prefix.len() > k {
            return Err(Error::InvalidConfig("prefix longer than the target size"));
        }
        if self.prefix.windows(2).any(|w| w[0] >= w[1]) || self.prefix.iter().any(|&x| x >= n) {
            return Err(Error::InvalidConfig("prefix must be strictly increasing element indices"));
        }
        if self.symmetry >= Symmetry::Translation && self.prefix.first().is_some_and(|&x| x != 0) {
            return Err(Error::InvalidConfig("with translation symmetry the prefix must start at 0"));
        }
        Ok(())
    }
}

/// A partial set: strictly increasing element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SearchNode {
    pub chosen: Vec<usize>,
}

impl SearchNode {
    pub fn depth(&self) -> usize {
        self.chosen.len()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_visited: u64,
    pub leaves_tested: u64,
    pub pruned_by_symmetry: u64,
    pub pruned_by_screen: u64,
    /// Nodes that survived every screen: inner nodes descended into plus leaves given the exact test.
    pub expanded: u64,
    pub hits: u64,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes_visited += other.nodes_visited;
        self.leaves_tested += other.leaves_tested;
        self.pruned_by_symmetry += other.pruned_by_symmetry;
        self.pruned_by_screen += other.pruned_by_screen;
        self.expanded += other.expanded;
        self.hits += other.hits;
    }
}

/// Result of one frontier task.
#[derive(Clone, Debug)]
pub struct TaskOutcome {
    pub task: SearchNode,
    pub stats: SearchStats,
    pub hits: Vec<Certificate>,
    /// `false` if the budget ran out inside the task.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Sorted by `(S, T)` index lists.
    pub hits: Vec<Certificate>,
    pub stats: SearchStats,
    /// `false` when stopped by the budget; an incomplete search proves nothing about absence.
    pub complete: bool,
    pub tasks_total: usize,
    pub tasks_completed: usize,
}

/// Verdict of [`SearchContext::screen_partial`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Screen {
    Keep,
    /// Not strictly increasing.
    PruneOrder,
    /// Not the orbit minimum.
    PruneSymmetry,
    /// Full-depth spectrum not compatible with any dual partner.
    PruneSpectrum,
}

/// Sorts hits into the canonical merge order.
pub fn sort_hits(hits: &mut [Certificate]) {
    hits.sort_by_cached_key(|c| (c.s.to_vec(), c.t.to_vec()));
}

/// Orbit-minimality test for the maps `x -> pi(x - s)`, `pi` from a fixed
/// list and `s` ranging over the set itself.
#[derive(Clone, Debug)]
struct OrbitPruner {
    symmetry: Symmetry,
    n: usize,
    maps: Vec<u8>,
    /// `min_pi pi(d)`.
    orbit_min: Vec<u8>,
    /// Slot of `c` for elements with `orbit_min[c] == c`.
    slot_of: Vec<u32>,
    /// Maps with `pi(d) = c`, bucketed by `slot(c) * n + d` in CSR layout.
    offsets: Vec<u32>,
    entries: Vec<u32>,
}

impl OrbitPruner {
    fn new(group: &AbelianGroup, symmetry: Symmetry, auts: &[Automorphism]) -> Self {
        let n = group.order();
        let identity = [Automorphism::identity(n)];
        let list: &[Automorphism] = match symmetry {
            Symmetry::None | Symmetry::Translation => &identity,
            Symmetry::Affine => auts,
        };
        let mut maps = Vec::with_capacity(list.len() * n);
        for a in list {
            maps.extend_from_slice(a.table());
        }
        let mut orbit_min: Vec<u8> = (0..n).map(|d| d as u8).collect();
        for a in list {
            for (d, &img) in a.table().iter().enumerate() {
                orbit_min[d] = orbit_min[d].min(img);
            }
        }
        let mut slot_of = vec![u32::MAX; n];
        let mut slots = 0u32;
        for c in 0..n {
            if orbit_min[c] as usize == c {
                slot_of[c] = slots;
                slots += 1;
            }
        }
        // bucket key = slot * n + d, holding every listed map with pi(d) = c
        let buckets = slots as usize * n;
        let mut offsets = vec![0u32; buckets + 1];
        for a in list {
            for (d, &c) in a.table().iter().enumerate() {
                let slot = slot_of[c as usize];
                if slot != u32::MAX {
                    offsets[slot as usize * n + d + 1] += 1;
                }
            }
        }
        for key in 0..buckets {
            offsets[key + 1] += offsets[key];
        }
        let mut cursor = offsets.clone();
        let mut entries = vec![0u32; offsets[buckets] as usize];
        for (p, a) in list.iter().enumerate() {
            for (d, &c) in a.table().iter().enumerate() {
                let slot = slot_of[c as usize];
                if slot != u32::MAX {
                    let at = &mut cursor[slot as usize * n + d];
                    entries[*at as usize] = p as u32;
                    *at += 1;
                }
            }
        }
        OrbitPruner { symmetry, n, maps, orbit_min, slot_of, offsets, entries }
    }

    #[inline]
    fn map(&self, p: u32, x: usize) -> usize {
        self.maps[p as usize * self.n + x] as usize
    }

    fn is_canonical(&self, group: &AbelianGroup, s: &[usize]) -> bool {
        if self.symmetry == Symmetry::None || s.is_empty() {
            return true;
        }
        if s[0] != 0 {
            return false;
        }
        if s.len() == 1 {
            return true;
        }
        let c = s[1];
        if self.orbit_min[c] as usize != c {
            return false;
        }
        for &a in s {
            for &b in s {
                if a != b && (self.orbit_min[group.sub(a, b)] as usize) < c {
                    return false;
                }
            }
        }
        let target = ElementSet::from_indices(s.iter().copied());
        let slot = self.slot_of[c] as usize;
        for &base in s {
            for &other in s {
                if other == base {
                    continue;
                }
                let d = group.sub(other, base);
                let key = slot * self.n + d;
                let (lo, hi) = (self.offsets[key] as usize, self.offsets[key + 1] as usize);
                for &p in &self.entries[lo..hi] {
                    let shift = self.map(p, base);
                    let mut image = ElementSet::new();
                    for &x in s {
                        image.insert(group.sub(self.map(p, x), shift));
                    }
                    if image.lex_less(&target) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

enum Leaf {
    Screened,
    Tested(Option<Box<Certificate>>),
}

/// Precomputed state for one search configuration. Immutable once built and
/// safe to share between workers.
#[derive(Clone, Debug)]
pub struct SearchContext {
    config: SearchConfig,
    group: AbelianGroup,
    auts: Automorphisms,
    pruner: OrbitPruner,
    standard: PairingMatrix,
    standard_table: Vec<u8>,
    roots: Vec<Complex64>,
    phi: CyclotomicPoly,
}

impl SearchContext {
    pub fn new(config: SearchConfig) -> Result<Self, Error> {
        config.validate()?;
        let group = AbelianGroup::new(config.spec.clone());
        let need_auts = config.symmetry == Symmetry::Affine || config.mode == Mode::SelfDual;
        let auts = if need_auts {
            group.automorphism_group(config.automorphism_cap)?
        } else {
            Automorphisms { maps: vec![Automorphism::identity(group.order())], complete: false }
        };
        let pruner = OrbitPruner::new(&group, config.symmetry, &auts.maps);
        let standard = config.spec.standard_pairing();
        let standard_table = group.pairing_table(&standard);
        let m = group.exponent() as usize;
        let roots = (0..m).map(|j| ClassVector::monomial(m, j, 1).eval_float()).collect();
        let phi = cyclotomic_poly(m);
        Ok(SearchContext { config, group, auts, pruner, standard, standard_table, roots, phi })
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn automorphisms(&self) -> &Automorphisms {
        &self.auts
    }

    /// Orbit-minimality of a sorted partial set under the configured symmetry.
    pub fn is_canonical(&self, chosen: &[usize]) -> bool {
        self.pruner.is_canonical(&self.group, chosen)
    }

    /// Pruning rules for a node: strictly increasing, orbit-minimal, and at
    /// full depth a floating-point spectrum screen.
    pub fn screen_partial(&self, node: &[usize]) -> Screen {
        if node.windows(2).any(|w| w[0] >= w[1]) {
            return Screen::PruneOrder;
        }
        if !self.is_canonical(node) {
            return Screen::PruneSymmetry;
        }
        if node.len() == self.config.target_size && !self.float_screen(&ElementSet::from_indices(node.iter().copied()))
        {
            return Screen::PruneSpectrum;
        }
        Screen::Keep
    }

    fn child_range(&self, chosen: &[usize]) -> core::ops::Range<usize> {
        let n = self.group.order();
        let remaining = self.config.target_size - chosen.len();
        let start = chosen.last().map_or(0, |&l| l + 1);
        let end = (n + 1).saturating_sub(remaining);
        start..end.max(start)
    }

    /// Frontier nodes at `frontier_depth` that survive pruning, in lexicographic order.
    pub fn enumerate_tasks(&self) -> Vec<SearchNode> {
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.collect_frontier(&mut chosen, &mut out);
        out
    }

    fn collect_frontier(&self, chosen: &mut Vec<usize>, out: &mut Vec<SearchNode>) {
        if chosen.len() == self.config.frontier_depth {
            out.push(SearchNode { chosen: chosen.clone() });
            return;
        }
        let forced = self.config.prefix.get(chosen.len()).copied();
        let start = chosen.last().map_or(0, |&l| l + 1);
        for x in start..self.group.order() {
            if forced.is_some_and(|f| f != x) {
                continue;
            }
            chosen.push(x);
            if self.is_canonical(chosen) {
                self.collect_frontier(chosen, out);
            }
            chosen.pop();
        }
    }

    /// Explores the subtree under `task`. `budget` is charged once per visited
    /// node; when it returns `false` the task stops and is reported incomplete.
    pub fn run_task<B: FnMut() -> bool>(&self, task: &SearchNode, budget: &mut B) -> TaskOutcome {
        let mut stats = SearchStats::default();
        let mut hits = Vec::new();
        let mut chosen = task.chosen.clone();
        let complete = self.descend(&mut chosen, &mut stats, &mut hits, budget);
        sort_hits(&mut hits);
        TaskOutcome { task: task.clone(), stats, hits, complete }
    }

    fn descend<B: FnMut() -> bool>(
        &self,
        chosen: &mut Vec<usize>,
        stats: &mut SearchStats,
        hits: &mut Vec<Certificate>,
        budget: &mut B,
    ) -> bool {
        let forced = self.config.prefix.get(chosen.len()).copied();
        for x in self.child_range(chosen) {
            if forced.is_some_and(|f| f != x) {
                continue;
            }
            if !budget() {
                return false;
            }
            stats.nodes_visited += 1;
            chosen.push(x);
            if !self.is_canonical(chosen) {
                stats.pruned_by_symmetry += 1;
            } else if chosen.len() == self.config.target_size {
                stats.leaves_tested += 1;
                match self.leaf(chosen) {
                    Leaf::Screened => stats.pruned_by_screen += 1,
                    Leaf::Tested(found) => {
                        stats.expanded += 1;
                        if let Some(cert) = found {
                            stats.hits += 1;
                            hits.push(*cert);
                        }
                    }
                }
            } else {
                stats.expanded += 1;
                if !self.descend(chosen, stats, hits, budget) {
                    chosen.pop();
                    return false;
                }
            }
            chosen.pop();
        }
        true
    }

    fn leaf(&self, chosen: &[usize]) -> Leaf {
        let s = ElementSet::from_indices(chosen.iter().copied());
        if !self.float_screen(&s) || !self.primitive(&s) {
            return Leaf::Screened;
        }
        Leaf::Tested(
            match self.config.mode {
                Mode::Pair => self.pair_after_screen(&s),
                Mode::SelfDual => self.self_dual_after_screen(&s),
            }
            .map(Box::new),
        )
    }

    fn primitive(&self, s: &ElementSet) -> bool {
        is_primitive(&self.group, s).map(|r| r.primitive).unwrap_or(false)
    }

    /// Every `|chi_t(S)|^2` under the standard pairing must lie within the
    /// tolerance of a nonnegative multiple of `|S|^2 / |T| = |S|^3 / N`.
    pub fn float_screen(&self, s: &ElementSet) -> bool {
        let n = self.group.order();
        let k = s.len() as f64;
        let quantum = k * k * k / n as f64;
        let members = s.to_vec();
        for t in 0..n {
            let row = &self.standard_table[t * n..(t + 1) * n];
            let z: Complex64 = members.iter().map(|&x| self.roots[row[x] as usize]).sum();
            let v = z.norm_sqr();
            let r = libm::round(v / quantum);
            if r < 0.0 || libm::fabs(v - r * quantum) > FLOAT_SCREEN_TOLERANCE {
                return false;
            }
        }
        true
    }

    fn standard_spectrum(&self, s: &ElementSet) -> Option<Vec<i64>> {
        let n = self.group.order();
        let m = self.group.exponent() as usize;
        (0..n)
            .map(|t| {
                let mut v = ClassVector::zero(m);
                for x in s.iter() {
                    v.add_term(self.standard_table[t * n + x] as usize, 1);
                }
                v.norm_sq().as_integer_with(&self.phi)
            })
            .collect()
    }

    /// Tries `S` against every isomorphism `standard o alpha`, `alpha` in the
    /// enumerated automorphisms; certificate for the first that works.
    pub fn self_dual_leaf_test(&self, s: &ElementSet) -> Option<Certificate> {
        if s.len() * s.len() != self.group.order() || !self.primitive(s) {
            return None;
        }
        self.self_dual_after_screen(s)
    }

    fn self_dual_after_screen(&self, s: &ElementSet) -> Option<Certificate> {
        let spectrum = self.standard_spectrum(s)?;
        let nu = WeightEnumerator::new(&self.group, s).ok()?;
        let k = s.len() as i64;
        let wanted: Vec<i64> = nu.counts().iter().map(|&c| k * c as i64).collect();
        let mut a = spectrum.clone();
        let mut b = wanted.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return None;
        }
        let aut =
            self.auts.maps.iter().find(|aut| wanted.iter().enumerate().all(|(t, &w)| spectrum[aut.apply(t)] == w))?;
        let pairing = self.twisted_pairing(aut);
        let checker = DualityChecker::new(&self.group, pairing).ok()?;
        Certificate::build(&checker, CertificateKind::SelfDual, s, s, !self.auts.complete).ok()
    }

    /// Matrix of `B(t, x) = B_std(alpha(t), x)`.
    pub fn twisted_pairing(&self, aut: &Automorphism) -> PairingMatrix {
        let spec = self.group.spec();
        let m = spec.exponent() as i64;
        let rows: Vec<Vec<i64>> = (0..spec.rank())
            .map(|j| {
                let image = self.group.element(aut.apply(self.group.basis(j)));
                image.coords().iter().zip(spec.orders()).map(|(&c, &n)| c as i64 * (m / n as i64) % m).collect()
            })
            .collect();
        PairingMatrix::new(spec, &rows).expect("twisted standard pairing is well defined")
    }

    /// Derives the weight enumerator any partner `T` must have from the
    /// spectrum of `S`, then searches for a primitive `T` realising it.
    pub fn pair_leaf_test(&self, s: &ElementSet) -> Option<Certificate> {
        let n = self.group.order();
        if s.is_empty() || !n.is_multiple_of(s.len()) || !self.primitive(s) {
            return None;
        }
        self.pair_after_screen(s)
    }

    fn pair_after_screen(&self, s: &ElementSet) -> Option<Certificate> {
        let weights = self.required_weights(s)?;
        let size_t = self.group.order() / s.len();
        let t = self.find_partner(&weights, size_t)?;
        let checker = DualityChecker::new(&self.group, self.standard.clone()).ok()?;
        Certificate::build(&checker, CertificateKind::Pair, s, &t, false).ok()
    }

    /// `w(t) = |T| |chi_t(S)|^2 / |S|^2`, or `None` if that cannot be a weight enumerator.
    pub fn required_weights(&self, s: &ElementSet) -> Option<Vec<i64>> {
        let n = self.group.order();
        let k = s.len() as i64;
        let size_t = n as i64 / k;
        let spectrum = self.standard_spectrum(s)?;
        let mut weights = Vec::with_capacity(n);
        for v in spectrum {
            let num = size_t * v;
            if num < 0 || num % (k * k) != 0 {
                return None;
            }
            weights.push(num / (k * k));
        }
        if weights[0] != size_t || weights.iter().sum::<i64>() != size_t * size_t {
            return None;
        }
        Some(weights)
    }

    /// Backtracking for a primitive `T` containing 0 with `nu_T = weights`.
    fn find_partner(&self, weights: &[i64], size_t: usize) -> Option<ElementSet> {
        let candidates: Vec<usize> = (1..self.group.order()).filter(|&x| weights[x] > 0).collect();
        let mut counts = vec![0i64; self.group.order()];
        let mut chosen = vec![0usize];
        self.extend_partner(weights, size_t, &candidates, 0, &mut chosen, &mut counts)
    }

    fn extend_partner(
        &self,
        weights: &[i64],
        size_t: usize,
        candidates: &[usize],
        from: usize,
        chosen: &mut Vec<usize>,
        counts: &mut [i64],
    ) -> Option<ElementSet> {
        if chosen.len() == size_t {
            let t = ElementSet::from_indices(chosen.iter().copied());
            return self.primitive(&t).then_some(t);
        }
        let g = &self.group;
        for (ci, &y) in candidates.iter().enumerate().skip(from) {
            if candidates.len() - ci < size_t - chosen.len() {
                break;
            }
            let mut ok = true;
            for &t in chosen.iter() {
                let (d1, d2) = (g.sub(y, t), g.sub(t, y));
                counts[d1] += 1;
                counts[d2] += 1;
                ok &= counts[d1] <= weights[d1] && counts[d2] <= weights[d2];
            }
            if ok {
                chosen.push(y);
                let found = self.extend_partner(weights, size_t, candidates, ci + 1, chosen, counts);
                chosen.pop();
                if found.is_some() {
                    for &t in chosen.iter() {
                        counts[g.sub(y, t)] -= 1;
                        counts[g.sub(t, y)] -= 1;
                    }
                    return found;
                }
            }
            for &t in chosen.iter() {
                counts[g.sub(y, t)] -= 1;
                counts[g.sub(t, y)] -= 1;
            }
        }
        None
    }

    /// Runs every task on the current thread with the configured budget.
    pub fn run_serial(&self) -> SearchOutcome {
        let tasks = self.enumerate_tasks();
        let mut remaining = self.config.budget;
        let mut budget = || match remaining.as_mut() {
            None => true,
            Some(0) => false,
            Some(r) => {
                *r -= 1;
                true
            }
        };
        let mut stats = SearchStats::default();
        let mut hits = Vec::new();
        let mut completed = 0;
        for task in &tasks {
            let outcome = self.run_task(task, &mut budget);
            if !outcome.complete {
                break;
            }
            completed += 1;
            stats.merge(&outcome.stats);
            hits.extend(outcome.hits);
        }
        sort_hits(&mut hits);
        SearchOutcome {
            hits,
            stats,
            complete: completed == tasks.len(),
            tasks_total: tasks.len(),
            tasks_completed: completed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ctx(orders: &[u32], size: usize, mode: Mode, symmetry: Symmetry) -> SearchContext {
        let spec = GroupSpec::new(orders.to_vec()).unwrap();
        SearchContext::new(SearchConfig::new(spec, size, mode).with_symmetry(symmetry).with_frontier_depth(1)).unwrap()
    }

    fn set(xs: &[usize]) -> ElementSet {
        ElementSet::from_indices(xs.iter().copied())
    }

    #[test]
    fn config_validation() {
        let spec = GroupSpec::new(vec![8]).unwrap();
        assert!(SearchConfig::new(spec.clone(), 3, Mode::Pair).validate().is_err());
        assert!(SearchConfig::new(spec.clone(), 1, Mode::Pair).validate().is_err());
        assert!(SearchConfig::new(spec.clone(), 4, Mode::SelfDual).validate().is_err());
        assert!(SearchConfig::new(spec.clone(), 4, Mode::Pair).with_frontier_depth(4).validate().is_err());
        assert!(SearchConfig::new(spec.clone(), 4, Mode::Pair).with_prefix(vec![1, 2]).validate().is_err());
        assert!(SearchConfig::new(spec.clone(), 4, Mode::Pair).with_prefix(vec![0, 3, 2]).validate().is_err());
        assert!(SearchConfig::new(spec, 4, Mode::Pair).validate().is_ok());
    }

    #[test]
    fn task_enumeration() {
        let c = ctx(&[4], 2, Mode::Pair, Symmetry::Translation);
        assert_eq!(c.enumerate_tasks(), vec![SearchNode { chosen: vec![0] }]);
        let c = ctx(&[2, 2], 2, Mode::Pair, Symmetry::None);
        assert_eq!(c.enumerate_tasks().len(), 4);
    }

    #[test]
    fn affine_pruning_in_z4() {
        let c = ctx(&[4], 2, Mode::Pair, Symmetry::Affine);
        assert_eq!(c.screen_partial(&[0, 3]), Screen::PruneSymmetry);
        assert_eq!(c.screen_partial(&[0, 1]), Screen::Keep);
        assert_eq!(c.screen_partial(&[0, 2]), Screen::Keep);
        let z8 = ctx(&[8], 2, Mode::Pair, Symmetry::Affine);
        assert_eq!(z8.screen_partial(&[0, 1]), Screen::PruneSpectrum);
        assert_eq!(c.screen_partial(&[1, 0]), Screen::PruneOrder);
        let none = ctx(&[4], 2, Mode::Pair, Symmetry::None);
        assert_eq!(none.screen_partial(&[0]), Screen::Keep);
        assert_eq!(none.screen_partial(&[2]), Screen::Keep);
    }

    #[test]
    fn z4_pair_search() {
        let out = ctx(&[4], 2, Mode::Pair, Symmetry::Affine).run_serial();
        assert!(out.complete);
        assert_eq!(out.hits.len(), 1);
        assert_eq!((out.hits[0].s, out.hits[0].t), (set(&[0, 1]), set(&[0, 1])));
        let s = out.stats;
        assert_eq!(s.pruned_by_symmetry + s.pruned_by_screen + s.expanded, s.nodes_visited);
    }

    #[test]
    fn klein_four_has_no_hits() {
        let out = ctx(&[2, 2], 2, Mode::Pair, Symmetry::Affine).run_serial();
        assert!(out.complete && out.hits.is_empty());
    }

    #[test]
    fn pair_leaf_examples() {
        let c = ctx(&[4], 2, Mode::Pair, Symmetry::Affine);
        assert_eq!(c.required_weights(&set(&[0, 1])), Some(vec![2, 1, 0, 1]));
        let cert = c.pair_leaf_test(&set(&[0, 1])).unwrap();
        assert_eq!(cert.t, set(&[0, 1]));
        assert!(c.pair_leaf_test(&set(&[0, 2])).is_none());
        let z8 = ctx(&[8], 2, Mode::Pair, Symmetry::Affine);
        // |1 + zeta_8|^2 is irrational
        assert_eq!(z8.required_weights(&set(&[0, 1])), None);
    }

    #[test]
    fn self_dual_leaf_examples() {
        let c = ctx(&[4], 2, Mode::SelfDual, Symmetry::Affine);
        let cert = c.self_dual_leaf_test(&set(&[0, 1])).unwrap();
        assert_eq!(cert.kind, CertificateKind::SelfDual);
        assert_eq!(cert.pairing, GroupSpec::new(vec![4]).unwrap().standard_pairing());
        assert!(c.self_dual_leaf_test(&set(&[0, 2])).is_none());
    }

    #[test]
    fn budget_stops_loudly() {
        let spec = GroupSpec::new(vec![2, 8]).unwrap();
        let c = SearchContext::new(SearchConfig::new(spec, 4, Mode::Pair).with_budget(Some(5))).unwrap();
        let out = c.run_serial();
        assert!(!out.complete);
        assert!(out.tasks_completed < out.tasks_total);
    }
}
