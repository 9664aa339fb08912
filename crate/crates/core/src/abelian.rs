//! Finite abelian groups as products of cyclic factors.
//!
//! [`GroupSpec`] is the plain description (`Z_{n_1} x ... x Z_{n_k}`),
//! [`AbelianGroup`] adds Cayley tables indexed by the mixed-radix element
//! index so the hot paths never touch coordinate vectors.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::Error;

/// Largest supported group order. Element indices fit in a `u8`.
pub const MAX_ORDER: usize = 256;

const WORDS: usize = MAX_ORDER / 64;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `Z_{n_1} x ... x Z_{n_k}` with cached order and exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    orders: Vec<u32>,
    order: usize,
    exponent: u32,
}

impl GroupSpec {
    pub fn new(orders: Vec<u32>) -> Result<Self, Error> {
        let mut order: u64 = 1;
        let mut exponent: u64 = 1;
        for (factor, &n) in orders.iter().enumerate() {
            if n == 0 {
                return Err(Error::ZeroOrder { factor });
            }
            order = order.saturating_mul(n as u64);
            if order > MAX_ORDER as u64 {
                return Err(Error::OrderTooLarge { order });
            }
            exponent = lcm(exponent, n as u64);
        }
        Ok(GroupSpec { orders, order: order as usize, exponent: exponent as u32 })
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.rank()] }
    }

    /// Builds an element from coordinates already in `[0, n_i)`.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, Error> {
        if coords.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: coords.len() });
        }
        let mut out = Vec::with_capacity(coords.len());
        for (factor, (&c, &n)) in coords.iter().zip(&self.orders).enumerate() {
            if c < 0 || c >= n as i64 {
                return Err(Error::CoordinateOutOfRange { factor, value: c, modulus: n });
            }
            out.push(c as u32);
        }
        Ok(GroupElement { coords: out })
    }

    /// Builds an element, reducing each coordinate modulo its factor.
    pub fn element_reduced(&self, coords: &[i64]) -> Result<GroupElement, Error> {
        if coords.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: coords.len() });
        }
        let coords = coords.iter().zip(&self.orders).map(|(&c, &n)| c.rem_euclid(n as i64) as u32).collect();
        Ok(GroupElement { coords })
    }

    pub fn elem_add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let coords = a.coords.iter().zip(&b.coords).zip(&self.orders).map(|((&x, &y), &n)| (x + y) % n).collect();
        GroupElement { coords }
    }

    pub fn elem_neg(&self, a: &GroupElement) -> GroupElement {
        let coords = a.coords.iter().zip(&self.orders).map(|(&x, &n)| (n - x) % n).collect();
        GroupElement { coords }
    }

    /// Mixed-radix index, last coordinate fastest.
    pub fn elem_index(&self, a: &GroupElement) -> usize {
        a.coords.iter().zip(&self.orders).fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
    }

    pub fn elem_from_index(&self, index: usize) -> Result<GroupElement, Error> {
        if index >= self.order {
            return Err(Error::IndexOutOfRange { index, order: self.order });
        }
        let mut coords = vec![0u32; self.rank()];
        let mut rest = index;
        for (slot, &n) in coords.iter_mut().zip(&self.orders).rev() {
            *slot = (rest % n as usize) as u32;
            rest /= n as usize;
        }
        Ok(GroupElement { coords })
    }

    /// The diagonal pairing `M_ii = m / n_i`.
    pub fn standard_pairing(&self) -> PairingMatrix {
        let k = self.rank();
        let mut entries = vec![0u32; k * k];
        for (i, &n) in self.orders.iter().enumerate() {
            entries[i * k + i] = (self.exponent / n) % self.exponent;
        }
        PairingMatrix { rank: k, exponent: self.exponent, entries }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return f.write_str("Z_1");
        }
        for (i, n) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "Z_{n}")?;
        }
        Ok(())
    }
}

/// An element as a coordinate vector, each coordinate reduced mod its factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u32>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }
}

/// A subset of a group of order at most [`MAX_ORDER`], as a bitset over element indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElementSet {
    bits: [u64; WORDS],
    len: u16,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// All indices `0..n`.
    pub fn full(n: usize) -> Self {
        Self::from_indices(0..n)
    }

    /// Panics if an index is not below [`MAX_ORDER`].
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut set = Self::new();
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Returns `true` if `i` was not yet present.
    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.bits[w] & b == 0;
        if fresh {
            self.bits[w] |= b;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let present = self.bits[w] & b != 0;
        if present {
            self.bits[w] &= !b;
            self.len -= 1;
        }
        present
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < MAX_ORDER && self.bits[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Smallest member.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> Iter<'_> {
        Iter { bits: &self.bits, word: 0, current: self.bits[0] }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Lexicographic comparison of the index-sorted member lists of two sets
    /// of equal size: the smaller set owns the least element of the symmetric
    /// difference.
    pub fn lex_less(&self, other: &ElementSet) -> bool {
        for (a, b) in self.bits.iter().zip(&other.bits) {
            let x = a ^ b;
            if x != 0 {
                return a & (x & x.wrapping_neg()) != 0;
            }
        }
        false
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_indices(iter)
    }
}

pub struct Iter<'a> {
    bits: &'a [u64; WORDS],
    word: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let tz = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word * 64 + tz);
            }
            self.word += 1;
            if self.word >= WORDS {
                return None;
            }
            self.current = self.bits[self.word];
        }
    }
}

/// Bilinear pairing `B(x, y) = sum_ij x_i M_ij y_j mod m`, read as `<x, y> = zeta_m^B(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairingMatrix {
    rank: usize,
    exponent: u32,
    entries: Vec<u32>,
}

impl PairingMatrix {
    /// Validates shape, entry range and well-definedness against `spec`.
    pub fn new(spec: &GroupSpec, rows: &[Vec<i64>]) -> Result<Self, Error> {
        let k = spec.rank();
        let m = spec.exponent();
        if rows.len() != k {
            return Err(Error::RankMismatch { expected: k, found: rows.len() });
        }
        let mut entries = Vec::with_capacity(k * k);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != k {
                return Err(Error::RankMismatch { expected: k, found: r.len() });
            }
            for (col, &v) in r.iter().enumerate() {
                if v < 0 || v >= m as i64 {
                    return Err(Error::PairingEntryOutOfRange { row, col, value: v, exponent: m });
                }
                entries.push(v as u32);
            }
        }
        let pairing = PairingMatrix { rank: k, exponent: m, entries };
        pairing.check_compatible(spec)?;
        Ok(pairing)
    }

    /// Checks that the matrix is well defined on `spec`.
    pub fn check_compatible(&self, spec: &GroupSpec) -> Result<(), Error> {
        let k = spec.rank();
        if self.rank != k {
            return Err(Error::RankMismatch { expected: k, found: self.rank });
        }
        let m = spec.exponent() as u64;
        if self.exponent as u64 != m {
            return Err(Error::PairingIllDefined { row: 0, col: 0 });
        }
        let orders = spec.orders();
        for i in 0..k {
            for j in 0..k {
                let v = self.entries[i * k + j] as u64;
                if !(orders[i] as u64 * v).is_multiple_of(m) || !(v * orders[j] as u64).is_multiple_of(m) {
                    return Err(Error::PairingIllDefined { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.rank + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.rank.max(1)).take(self.rank).map(|r| r.to_vec()).collect()
    }

    /// `B(t, x) mod m`.
    pub fn pairing_exponent(&self, t: &GroupElement, x: &GroupElement) -> u32 {
        let m = self.exponent as u64;
        let mut acc = 0u64;
        for (i, &ti) in t.coords.iter().enumerate() {
            if ti == 0 {
                continue;
            }
            for (j, &xj) in x.coords.iter().enumerate() {
                acc = (acc + ti as u64 * self.entries[i * self.rank + j] as u64 % m * xj as u64) % m;
            }
        }
        acc as u32
    }
}

/// A group automorphism stored as its image table over element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    table: Vec<u8>,
}

impl Automorphism {
    pub fn identity(order: usize) -> Self {
        Automorphism { table: (0..order).map(|i| i as u8).collect() }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x] as usize
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &v)| i == v as usize)
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Automorphism").field(&self.table).finish()
    }
}

/// Output of [`AbelianGroup::automorphism_group`].
#[derive(Clone, Debug)]
pub struct Automorphisms {
    /// Identity first, then the remaining maps in enumeration order.
    pub maps: Vec<Automorphism>,
    /// `false` when enumeration stopped at the cap.
    pub complete: bool,
}

/// A group with its addition, negation and element-order tables.
#[derive(Clone, Debug)]
pub struct AbelianGroup {
    spec: GroupSpec,
    add: Vec<u8>,
    neg: Vec<u8>,
    element_order: Vec<u32>,
}

impl AbelianGroup {
    pub fn new(spec: GroupSpec) -> Self {
        let n = spec.order();
        let elems: Vec<GroupElement> = (0..n).map(|i| spec.elem_from_index(i).unwrap()).collect();
        let mut add = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = spec.elem_index(&spec.elem_add(&elems[a], &elems[b])) as u8;
            }
        }
        let neg = elems.iter().map(|e| spec.elem_index(&spec.elem_neg(e)) as u8).collect();
        let element_order = elems
            .iter()
            .map(|e| {
                e.coords
                    .iter()
                    .zip(spec.orders())
                    .fold(1u64, |acc, (&c, &n)| lcm(acc, n as u64 / gcd(c as u64, n as u64))) as u32
            })
            .collect();
        AbelianGroup { spec, add, neg, element_order }
    }

    pub fn from_orders(orders: Vec<u32>) -> Result<Self, Error> {
        Ok(Self::new(GroupSpec::new(orders)?))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.spec.order()
    }

    pub fn exponent(&self) -> u32 {
        self.spec.exponent()
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order() + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Additive order of the element.
    pub fn element_order(&self, a: usize) -> u32 {
        self.element_order[a]
    }

    /// `k * a`.
    pub fn scale(&self, k: u32, a: usize) -> usize {
        (0..k % self.element_order[a]).fold(0, |acc, _| self.add(acc, a))
    }

    /// Index of the `i`-th standard generator (the unit vector in factor `i`).
    pub fn basis(&self, i: usize) -> usize {
        let mut coords = vec![0i64; self.spec.rank()];
        if self.spec.orders()[i] > 1 {
            coords[i] = 1;
        }
        self.spec.elem_index(&self.spec.element(&coords).unwrap())
    }

    pub fn element(&self, index: usize) -> GroupElement {
        self.spec.elem_from_index(index).expect("index out of range")
    }

    pub fn translate(&self, set: &ElementSet, v: usize) -> ElementSet {
        set.iter().map(|x| self.add(x, v)).collect()
    }

    pub fn apply(&self, aut: &Automorphism, set: &ElementSet) -> ElementSet {
        set.iter().map(|x| aut.apply(x)).collect()
    }

    /// Smallest subgroup containing `gens`, by closure under addition.
    pub fn subgroup_generated(&self, gens: &ElementSet) -> ElementSet {
        let mut group = ElementSet::new();
        group.insert(0);
        let mut frontier = vec![0usize];
        while let Some(h) = frontier.pop() {
            for g in gens.iter() {
                let x = self.add(h, g);
                if group.insert(x) {
                    frontier.push(x);
                }
            }
        }
        group
    }

    /// `{h : h + S = S}`.
    pub fn stabilizer(&self, set: &ElementSet) -> ElementSet {
        (0..self.order()).filter(|&h| set.iter().all(|x| set.contains(self.add(x, h)))).collect()
    }

    /// Kernel scan: every nonzero `x` must pair nontrivially with some basis element.
    pub fn pairing_is_nondegenerate(&self, pairing: &PairingMatrix) -> Result<bool, Error> {
        let spec = &self.spec;
        pairing.check_compatible(spec)?;
        let basis: Vec<GroupElement> = (0..spec.rank()).map(|i| self.element(self.basis(i))).collect();
        for x in 1..self.order() {
            let xe = self.element(x);
            if basis.iter().all(|y| pairing.pairing_exponent(&xe, y) == 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `N x N` table of `B(t, x)`, row `t`.
    pub fn pairing_table(&self, pairing: &PairingMatrix) -> Vec<u8> {
        let n = self.order();
        let elems: Vec<GroupElement> = (0..n).map(|i| self.element(i)).collect();
        let mut table = vec![0u8; n * n];
        for t in 0..n {
            for x in 0..n {
                table[t * n + x] = pairing.pairing_exponent(&elems[t], &elems[x]) as u8;
            }
        }
        table
    }

    /// Enumerates automorphisms by backtracking over images of the standard
    /// generators: the image of a generator of order `n_i` must have order
    /// exactly `n_i`, and the partial map must stay injective on the subgroup
    /// spanned so far. Stops after `cap` maps and flags the result partial.
    pub fn automorphism_group(&self, cap: usize) -> Result<Automorphisms, Error> {
        if cap < 1 {
            return Err(Error::CapTooSmall);
        }
        let n = self.order();
        let identity = Automorphism::identity(n);
        let mut maps = vec![identity.clone()];
        let rank = self.spec.rank();
        let candidates: Vec<Vec<usize>> = (0..rank)
            .map(|i| {
                let want = self.spec.orders()[i];
                (0..n).filter(|&y| self.element_order(y) == want).collect()
            })
            .collect();
        let mut state = AutSearch {
            group: self,
            candidates: &candidates,
            maps: &mut maps,
            cap,
            identity: &identity,
            stopped: false,
        };
        state.extend(0, vec![0], vec![0]);
        let stopped = state.stopped;
        Ok(Automorphisms { maps, complete: !stopped })
    }

    /// Lexicographically smallest index-sorted set among `pi(S) - v` for
    /// `pi` in `auts` and `v` in `pi(S)`, by full orbit enumeration.
    pub fn affine_canonical_form(&self, set: &ElementSet, auts: &[Automorphism]) -> ElementSet {
        let mut best: Option<ElementSet> = None;
        for aut in auts {
            let image = self.apply(aut, set);
            for v in image.iter() {
                let cand = self.translate(&image, self.neg(v));
                if best.as_ref().is_none_or(|b| cand.lex_less(b)) {
                    best = Some(cand);
                }
            }
        }
        best.unwrap_or(*set)
    }
}

struct AutSearch<'a> {
    group: &'a AbelianGroup,
    candidates: &'a [Vec<usize>],
    maps: &'a mut Vec<Automorphism>,
    cap: usize,
    identity: &'a Automorphism,
    stopped: bool,
}

impl AutSearch<'_> {
    /// `domain[i] -> image[i]` is the map on the subgroup spanned by the first `level` generators.
    fn extend(&mut self, level: usize, domain: Vec<usize>, image: Vec<usize>) {
        if self.stopped {
            return;
        }
        let g = self.group;
        if level == self.candidates.len() {
            let mut table = vec![0u8; g.order()];
            for (&d, &i) in domain.iter().zip(&image) {
                table[d] = i as u8;
            }
            let aut = Automorphism { table };
            if aut != *self.identity {
                if self.maps.len() >= self.cap {
                    self.stopped = true;
                    return;
                }
                self.maps.push(aut);
            }
            return;
        }
        let gen = g.basis(level);
        let n_i = g.spec.orders()[level];
        for &y in &self.candidates[level] {
            let mut seen = ElementSet::from_indices(image.iter().copied());
            let mut dom = domain.clone();
            let mut img = image.clone();
            let (mut step_d, mut step_i) = (0usize, 0usize);
            let mut ok = true;
            'outer: for _ in 1..n_i {
                step_d = g.add(step_d, gen);
                step_i = g.add(step_i, y);
                for (&d, &i) in domain.iter().zip(&image) {
                    let ni = g.add(i, step_i);
                    if !seen.insert(ni) {
                        ok = false;
                        break 'outer;
                    }
                    dom.push(g.add(d, step_d));
                    img.push(ni);
                }
            }
            if ok {
                self.extend(level + 1, dom, img);
            }
            if self.stopped {
                return;
            }
        }
    }
}
