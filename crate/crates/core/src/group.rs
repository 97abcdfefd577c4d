//! Finite groups with dense element indices.
//!
//! Every group in the catalogue numbers its elements `0..order` and the
//! identity is always index 0:
//!
//! | descriptor     | elements                                   | index order                   |
//! |----------------|--------------------------------------------|-------------------------------|
//! | `cyclic:n`     | residues mod n                             | 0, 1, …, n−1                  |
//! | `cube:n`       | bit vectors (s₁,…,sₙ), product is XOR      | lexicographic, s₁ most significant |
//! | `symmetric:n`  | permutations of {1..n}, one-line notation  | lexicographic                 |
//! | `dihedral:4`   | symmetries of the square as 2×2 matrices   | r0 r90 r180 r270 (12) (13) (14) (23) |
//! | `quaternion`   | ±1, ±i, ±j, ±k                             | 1 −1 i −i j −j k −k           |
//! | `heisenberg:n` | triples (a,b,c) mod n                      | lexicographic                 |
//!
//! Permutations compose right to left: `(στ)(p) = σ(τ(p))`. Heisenberg
//! triples stand for upper unitriangular matrices, so
//! `(a,b,c)(a',b',c') = (a+a', b+b'+ac', c+c')`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const TABLE_LIMIT: usize = 4096;
const ORDER_LIMIT: usize = 1 << 22;
const SYMMETRIC_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Cyclic(usize),
    Cube(usize),
    Symmetric(usize),
    Dihedral4,
    Quaternion,
    Heisenberg(usize),
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupKind::Cube(n) => write!(f, "cube:{n}"),
            GroupKind::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupKind::Dihedral4 => write!(f, "dihedral:4"),
            GroupKind::Quaternion => write!(f, "quaternion"),
            GroupKind::Heisenberg(n) => write!(f, "heisenberg:{n}"),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (s, None),
        };
        let size = || -> Result<usize> {
            arg.ok_or_else(|| Error::Parse(s.to_string()))?
                .parse::<usize>()
                .map_err(|_| Error::Parse(s.to_string()))
        };
        match name {
            "cyclic" => Ok(GroupKind::Cyclic(size()?)),
            "cube" => Ok(GroupKind::Cube(size()?)),
            "symmetric" => Ok(GroupKind::Symmetric(size()?)),
            "dihedral" => match size()? {
                4 => Ok(GroupKind::Dihedral4),
                n => Err(Error::Unsupported(format!("dihedral:{n} (only dihedral:4)"))),
            },
            "quaternion" if arg.is_none() => Ok(GroupKind::Quaternion),
            "heisenberg" => Ok(GroupKind::Heisenberg(size()?)),
            _ => Err(Error::Parse(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(usize);

impl GroupElement {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A sorted, duplicate-free set of element indices, typically Σ = supp ν.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportSet {
    elements: Vec<usize>,
}

impl SupportSet {
    pub fn new(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        SupportSet { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyPartition {
    pub classes: Vec<Vec<usize>>,
}

impl ConjugacyPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class index of every element.
    pub fn class_of(&self, order: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; order];
        for (c, class) in self.classes.iter().enumerate() {
            for &g in class {
                out[g] = c;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErgodicityWitness {
    /// ν^{⋆n₀} has full support, equivalently P^{n₀} > 0.
    Power(usize),
    /// Σ lies in the proper subgroup ⟨Σ⟩.
    ProperSubgroup(Vec<usize>),
    /// Σ lies in the coset `subgroup · representative` of a proper normal subgroup.
    Coset {
        subgroup: Vec<usize>,
        representative: usize,
        coset: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErgodicityReport {
    pub ergodic: bool,
    pub witness: ErgodicityWitness,
    /// Period of the Cayley digraph restricted to ⟨Σ⟩.
    pub period: usize,
    /// Outcome of the direct positivity test on the operator, run for |G| ≤ 200.
    pub matrix_test: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Group {
    kind: GroupKind,
    order: usize,
    table: Option<Vec<u32>>,
    inv: Vec<u32>,
    perms: Vec<[u8; SYMMETRIC_LIMIT]>,
}

// Matrices in row-major order (a, b, c, d) for [[a, b], [c, d]].
const DIHEDRAL: [[i8; 4]; 8] = [
    [1, 0, 0, 1],
    [0, -1, 1, 0],
    [-1, 0, 0, -1],
    [0, 1, -1, 0],
    [1, 0, 0, -1],
    [-1, 0, 0, 1],
    [0, 1, 1, 0],
    [0, -1, -1, 0],
];
const DIHEDRAL_LABELS: [&str; 8] = ["r0", "r90", "r180", "r270", "(12)", "(13)", "(14)", "(23)"];
const QUATERNION_LABELS: [&str; 8] = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];

// Product of unit quaternions 1, i, j, k as (unit, negated).
const QUATERNION_UNITS: [[(usize, bool); 4]; 4] = [
    [(0, false), (1, false), (2, false), (3, false)],
    [(1, false), (0, true), (3, false), (2, true)],
    [(2, false), (3, true), (0, true), (1, false)],
    [(3, false), (2, false), (1, true), (0, true)],
];

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn perm_rank(p: &[u8]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        rank += smaller * factorial(n - 1 - i);
    }
    rank
}

fn all_perms(n: usize) -> Vec<[u8; SYMMETRIC_LIMIT]> {
    let mut out = Vec::with_capacity(factorial(n));
    let mut p: Vec<u8> = (0..n as u8).collect();
    loop {
        let mut a = [0u8; SYMMETRIC_LIMIT];
        a[..n].copy_from_slice(&p);
        out.push(a);
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

fn dihedral_index(m: [i8; 4]) -> usize {
    DIHEDRAL.iter().position(|&d| d == m).expect("closed under products")
}

fn dihedral_mul(a: usize, b: usize) -> usize {
    let (x, y) = (DIHEDRAL[a], DIHEDRAL[b]);
    dihedral_index([
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ])
}

fn quaternion_mul(a: usize, b: usize) -> usize {
    let (unit, neg) = QUATERNION_UNITS[a / 2][b / 2];
    let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
    2 * unit + sign as usize
}

impl Group {
    pub fn new(kind: GroupKind) -> Result<Self> {
        let order = match kind {
            GroupKind::Cyclic(n) if n >= 2 => n,
            GroupKind::Cube(n) if (1..=22).contains(&n) => 1 << n,
            GroupKind::Symmetric(n) if (2..=SYMMETRIC_LIMIT).contains(&n) => factorial(n),
            GroupKind::Symmetric(n) if n > SYMMETRIC_LIMIT => {
                return Err(Error::Unsupported(format!(
                    "symmetric:{n} exceeds the limit n ≤ {SYMMETRIC_LIMIT}"
                )))
            }
            GroupKind::Dihedral4 | GroupKind::Quaternion => 8,
            GroupKind::Heisenberg(n) if n >= 2 && n.pow(3) <= ORDER_LIMIT => n.pow(3),
            _ => return Err(Error::Unsupported(kind.to_string())),
        };
        if order > ORDER_LIMIT {
            return Err(Error::Unsupported(format!("{kind}: order {order} is too large")));
        }
        let perms = match kind {
            GroupKind::Symmetric(n) => all_perms(n),
            _ => Vec::new(),
        };
        let mut g = Group {
            kind,
            order,
            table: None,
            inv: Vec::new(),
            perms,
        };
        g.inv = (0..order).map(|a| g.inverse_rule(a) as u32).collect();
        let wants_table = !matches!(kind, GroupKind::Cyclic(_) | GroupKind::Cube(_));
        if wants_table && order <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order {
                for b in 0..order {
                    table.push(g.mul_rule(a, b) as u32);
                }
            }
            g.table = Some(table);
        }
        Ok(g)
    }

    pub fn parse(descriptor: &str) -> Result<Self> {
        Group::new(descriptor.parse()?)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn descriptor(&self) -> String {
        self.kind.to_string()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn is_abelian(&self) -> bool {
        match self.kind {
            GroupKind::Cyclic(_) | GroupKind::Cube(_) => true,
            GroupKind::Symmetric(n) => n <= 2,
            GroupKind::Dihedral4 | GroupKind::Quaternion | GroupKind::Heisenberg(_) => false,
        }
    }

    pub fn element(&self, index: usize) -> Result<GroupElement> {
        if index < self.order {
            Ok(GroupElement(index))
        } else {
            Err(Error::IndexOutOfRange {
                index,
                order: self.order,
            })
        }
    }

    pub fn element_by_label(&self, label: &str) -> Option<GroupElement> {
        (0..self.order)
            .find(|&i| self.label(i) == label)
            .map(GroupElement)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order + b] as usize,
            None => self.mul_rule(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    fn mul_rule(&self, a: usize, b: usize) -> usize {
        match self.kind {
            GroupKind::Cyclic(n) => (a + b) % n,
            GroupKind::Cube(_) => a ^ b,
            GroupKind::Symmetric(n) => {
                let (s, t) = (&self.perms[a], &self.perms[b]);
                let mut p = [0u8; SYMMETRIC_LIMIT];
                for i in 0..n {
                    p[i] = s[t[i] as usize];
                }
                perm_rank(&p[..n])
            }
            GroupKind::Dihedral4 => dihedral_mul(a, b),
            GroupKind::Quaternion => quaternion_mul(a, b),
            GroupKind::Heisenberg(n) => {
                let (x, y) = (self.heisenberg_triple(a), self.heisenberg_triple(b));
                let b2 = (x[1] + y[1] + x[0] * y[2]) % n;
                self.heisenberg_index([(x[0] + y[0]) % n, b2, (x[2] + y[2]) % n])
            }
        }
    }

    fn inverse_rule(&self, a: usize) -> usize {
        match self.kind {
            GroupKind::Cyclic(n) => (n - a) % n,
            GroupKind::Cube(_) => a,
            GroupKind::Symmetric(n) => {
                let s = &self.perms[a];
                let mut p = [0u8; SYMMETRIC_LIMIT];
                for i in 0..n {
                    p[s[i] as usize] = i as u8;
                }
                perm_rank(&p[..n])
            }
            GroupKind::Dihedral4 => (0..8).find(|&b| dihedral_mul(a, b) == 0).unwrap(),
            GroupKind::Quaternion => {
                if a < 2 {
                    a
                } else {
                    a ^ 1
                }
            }
            GroupKind::Heisenberg(n) => {
                let [x, y, z] = self.heisenberg_triple(a);
                self.heisenberg_index([(n - x) % n, (x * z + n - y) % n, (n - z) % n])
            }
        }
    }

    /// One-line image (0-based) of a permutation element.
    pub fn permutation(&self, a: usize) -> Option<&[u8]> {
        match self.kind {
            GroupKind::Symmetric(n) => Some(&self.perms[a][..n]),
            _ => None,
        }
    }

    /// Index of a 0-based one-line permutation.
    pub fn permutation_index(&self, p: &[u8]) -> Option<usize> {
        match self.kind {
            GroupKind::Symmetric(n) if p.len() == n => Some(perm_rank(p)),
            _ => None,
        }
    }

    pub fn heisenberg_triple(&self, a: usize) -> [usize; 3] {
        match self.kind {
            GroupKind::Heisenberg(n) => [a / (n * n), (a / n) % n, a % n],
            _ => panic!("not a Heisenberg group"),
        }
    }

    pub fn heisenberg_index(&self, t: [usize; 3]) -> usize {
        match self.kind {
            GroupKind::Heisenberg(n) => (t[0] * n + t[1]) * n + t[2],
            _ => panic!("not a Heisenberg group"),
        }
    }

    /// The 2×2 integer matrix of a dihedral element, row-major.
    pub fn dihedral_matrix(&self, a: usize) -> Option<[i8; 4]> {
        (self.kind == GroupKind::Dihedral4).then(|| DIHEDRAL[a])
    }

    pub fn label(&self, a: usize) -> String {
        match self.kind {
            GroupKind::Cyclic(_) => a.to_string(),
            GroupKind::Cube(n) => format!("{a:0n$b}"),
            GroupKind::Symmetric(n) => self.perms[a][..n]
                .iter()
                .map(|&x| char::from(b'1' + x))
                .collect(),
            GroupKind::Dihedral4 => DIHEDRAL_LABELS[a].to_string(),
            GroupKind::Quaternion => QUATERNION_LABELS[a].to_string(),
            GroupKind::Heisenberg(_) => {
                let [x, y, z] = self.heisenberg_triple(a);
                format!("{x}:{y}:{z}")
            }
        }
    }

    fn label_set(&self, xs: &[usize]) -> String {
        let labels: Vec<String> = xs.iter().map(|&x| self.label(x)).collect();
        format!("{{{}}}", labels.join(" "))
    }

    /// One-line description of a witness using element labels.
    pub fn describe_witness(&self, w: &ErgodicityWitness) -> String {
        match w {
            ErgodicityWitness::Power(n0) => format!("support of the {n0}-th power is all of G"),
            ErgodicityWitness::ProperSubgroup(h) => {
                format!("support lies in the proper subgroup {}", self.label_set(h))
            }
            ErgodicityWitness::Coset {
                subgroup,
                representative,
                coset,
            } => format!(
                "support lies in the coset {} = H{} of the normal subgroup H = {}",
                self.label_set(coset),
                self.label(*representative),
                self.label_set(subgroup)
            ),
        }
    }

    pub fn conjugacy_classes(&self) -> ConjugacyPartition {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut class = Vec::new();
            for t in 0..self.order {
                let c = self.mul(self.mul(t, g), self.inv(t));
                if !seen[c] {
                    seen[c] = true;
                    class.push(c);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        ConjugacyPartition { classes }
    }

    /// Closure of `s` under multiplication.
    pub fn generated_subgroup(&self, s: &SupportSet) -> SupportSet {
        let mut seen = vec![false; self.order];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &x in s.elements() {
            if !seen[x] {
                seen[x] = true;
                queue.push_back(x);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &t in s.elements() {
                let y = self.mul(x, t);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        SupportSet::new((0..self.order).filter(|&x| seen[x]).collect())
    }

    /// BFS depth of every element from e in the digraph with edges g → s·g, s ∈ Σ.
    pub fn cayley_depths(&self, s: &SupportSet) -> Vec<Option<usize>> {
        let mut depth = vec![None; self.order];
        depth[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let d = depth[u].unwrap();
            for &t in s.elements() {
                let v = self.mul(t, u);
                if depth[v].is_none() {
                    depth[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        depth
    }

    /// Decides ergodicity of the walk driven by any measure with support `s`.
    pub fn is_ergodic(&self, s: &SupportSet) -> ErgodicityReport {
        assert!(!s.is_empty(), "support must be nonempty");
        let matrix_test = (self.order <= 200).then(|| self.positive_power_by_matrix(s).is_some());
        let depth = self.cayley_depths(s);
        if depth.iter().any(Option::is_none) {
            let sub: Vec<usize> = (0..self.order).filter(|&g| depth[g].is_some()).collect();
            return ErgodicityReport {
                ergodic: false,
                witness: ErgodicityWitness::ProperSubgroup(sub),
                period: 0,
                matrix_test,
            };
        }
        let mut period = 0usize;
        for u in 0..self.order {
            let du = depth[u].unwrap();
            for &t in s.elements() {
                let dv = depth[self.mul(t, u)].unwrap();
                period = gcd(period, (du + 1).abs_diff(dv));
            }
        }
        if period > 1 {
            let class = |r: usize| -> Vec<usize> {
                (0..self.order)
                    .filter(|&g| depth[g].unwrap() % period == r)
                    .collect()
            };
            return ErgodicityReport {
                ergodic: false,
                witness: ErgodicityWitness::Coset {
                    subgroup: class(0),
                    representative: s.elements()[0],
                    coset: class(1),
                },
                period,
                matrix_test,
            };
        }
        let n0 = self.full_support_time(s).expect("aperiodic and irreducible");
        ErgodicityReport {
            ergodic: true,
            witness: ErgodicityWitness::Power(n0),
            period,
            matrix_test,
        }
    }

    /// Least m with Σ^m = G, i.e. ν^{⋆m} strictly positive.
    pub fn full_support_time(&self, s: &SupportSet) -> Option<usize> {
        let mut reach = vec![false; self.order];
        reach[0] = true;
        let limit = self.order.saturating_mul(self.order);
        let mut seen_sets: HashSet<Vec<bool>> = HashSet::new();
        for m in 1..=limit {
            let mut next = vec![false; self.order];
            for (u, _) in reach.iter().enumerate().filter(|(_, &r)| r) {
                for &t in s.elements() {
                    next[self.mul(t, u)] = true;
                }
            }
            if next.iter().all(|&b| b) {
                return Some(m);
            }
            if !seen_sets.insert(next.clone()) {
                return None;
            }
            reach = next;
        }
        None
    }

    /// Least m ≤ |G|² with P^m entrywise positive, found by boolean matrix powers
    /// of p(x,y) = [y x⁻¹ ∈ Σ] without using the group structure afterwards.
    pub fn positive_power_by_matrix(&self, s: &SupportSet) -> Option<usize> {
        let n = self.order;
        let words = n.div_ceil(64);
        let mut base = vec![0u64; n * words];
        for x in 0..n {
            for y in 0..n {
                if s.contains(self.mul(y, self.inv(x))) {
                    base[x * words + y / 64] |= 1 << (y % 64);
                }
            }
        }
        let full_row: Vec<u64> = (0..words)
            .map(|w| {
                let bits = (n - 64 * w).min(64);
                if bits == 64 {
                    u64::MAX
                } else {
                    (1u64 << bits) - 1
                }
            })
            .collect();
        let is_full = |m: &[u64]| m.chunks(words).all(|row| row == full_row.as_slice());
        let mut power = base.clone();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for m in 1..=n * n {
            if is_full(&power) {
                return Some(m);
            }
            if !seen.insert(power.clone()) {
                return None;
            }
            let mut next = vec![0u64; n * words];
            for x in 0..n {
                for z in 0..n {
                    if power[x * words + z / 64] >> (z % 64) & 1 == 1 {
                        for w in 0..words {
                            next[x * words + w] |= base[z * words + w];
                        }
                    }
                }
            }
            power = next;
        }
        None
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Group {}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(g: &Group) {
        let n = g.order();
        for a in 0..n {
            assert_eq!(g.mul(0, a), a);
            assert_eq!(g.mul(a, 0), a);
            assert_eq!(g.mul(a, g.inv(a)), 0);
            assert_eq!(g.mul(g.inv(a), a), 0);
        }
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn catalogue_axioms_small() {
        for d in [
            "cyclic:7",
            "cube:4",
            "symmetric:4",
            "dihedral:4",
            "quaternion",
            "heisenberg:3",
        ] {
            check_axioms(&Group::parse(d).unwrap());
        }
    }

    #[test]
    fn cyclic_addition() {
        let g = Group::parse("cyclic:5").unwrap();
        assert_eq!(g.mul(3, 4), 2);
    }

    #[test]
    fn quaternion_ij_is_k() {
        let g = Group::parse("quaternion").unwrap();
        let l = |s: &str| g.element_by_label(s).unwrap().index();
        assert_eq!(g.mul(l("i"), l("j")), l("k"));
        assert_eq!(g.mul(l("j"), l("i")), l("-k"));
        for u in ["i", "j", "k"] {
            assert_eq!(g.mul(l(u), l(u)), l("-1"));
        }
        assert_eq!(g.mul(g.mul(l("i"), l("j")), l("k")), l("-1"));
    }

    #[test]
    fn symmetric_order_is_lexicographic() {
        let g = Group::parse("symmetric:3").unwrap();
        let labels: Vec<String> = (0..6).map(|a| g.label(a)).collect();
        assert_eq!(labels, ["123", "132", "213", "231", "312", "321"]);
        // (12) then (23) acting on positions: σ(τ(p))
        let s = g.element_by_label("213").unwrap().index();
        let t = g.element_by_label("132").unwrap().index();
        assert_eq!(g.label(g.mul(s, t)), "231");
    }

    #[test]
    fn heisenberg_order() {
        assert_eq!(Group::parse("heisenberg:3").unwrap().order(), 27);
    }

    #[test]
    fn symmetric_cap() {
        assert!(matches!(
            Group::parse("symmetric:9"),
            Err(Error::Unsupported(_))
        ));
        assert!(Group::parse("dodecahedral:3").is_err());
    }

    #[test]
    fn descriptors_round_trip() {
        for d in ["cyclic:11", "cube:6", "symmetric:5", "dihedral:4", "quaternion", "heisenberg:5"] {
            assert_eq!(Group::parse(d).unwrap().descriptor(), d);
        }
    }

    #[test]
    fn quaternion_classes() {
        let g = Group::parse("quaternion").unwrap();
        let mut sizes: Vec<usize> = g.conjugacy_classes().classes.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, [1, 1, 2, 2, 2]);
    }

    #[test]
    fn s3_classes() {
        let g = Group::parse("symmetric:3").unwrap();
        let sizes: Vec<usize> = g.conjugacy_classes().classes.iter().map(Vec::len).collect();
        assert_eq!(sizes, [1, 3, 2]);
    }

    #[test]
    fn generated_subgroups() {
        let g = Group::parse("cyclic:6").unwrap();
        assert_eq!(
            g.generated_subgroup(&SupportSet::new(vec![2])).elements(),
            &[0, 2, 4]
        );
        let g = Group::parse("symmetric:4").unwrap();
        let adj: Vec<usize> = ["2134", "1324", "1243"]
            .iter()
            .map(|l| g.element_by_label(l).unwrap().index())
            .collect();
        assert_eq!(g.generated_subgroup(&SupportSet::new(adj)).len(), 24);
    }

    #[test]
    fn circle_ergodicity() {
        let g = Group::parse("cyclic:11").unwrap();
        let r = g.is_ergodic(&SupportSet::new(vec![1, 10]));
        assert!(r.ergodic);
        assert_eq!(r.matrix_test, Some(true));
        let g = Group::parse("cyclic:4").unwrap();
        let r = g.is_ergodic(&SupportSet::new(vec![1, 3]));
        assert!(!r.ergodic);
        assert_eq!(r.matrix_test, Some(false));
        assert_eq!(
            r.witness,
            ErgodicityWitness::Coset {
                subgroup: vec![0, 2],
                representative: 1,
                coset: vec![1, 3]
            }
        );
    }
}
