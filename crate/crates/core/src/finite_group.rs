//! Small finite groups given by multiplication tables. Used as targets for
//! homomorphism counting.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteGroupError {
    #[error("unknown group `{0}` (expected Z2..Z12, S3, S4, S5, D4, A4 or A5)")]
    UnknownName(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
}

/// Names accepted by [`builtin_table`], in a stable order.
pub const BUILTIN_NAMES: &[&str] = &[
    "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "S3", "S4", "S5", "D4",
    "A4", "A5",
];

/// A finite group on elements `0..order`, with `0` the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    name: String,
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    perms: Option<Vec<Vec<usize>>>,
}

impl FiniteGroupTable {
    /// Validates a row-major multiplication table. Identity (element 0) and
    /// inverse laws are checked exhaustively; associativity exhaustively up
    /// to order 24 and on a deterministic sample of triples beyond that.
    pub fn from_table(name: &str, order: usize, mul: Vec<usize>) -> Result<Self, FiniteGroupError> {
        if order == 0 {
            return Err(FiniteGroupError::NotAGroup("empty group".into()));
        }
        if mul.len() != order * order {
            return Err(FiniteGroupError::NotAGroup(format!(
                "table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if let Some(&bad) = mul.iter().find(|&&x| x >= order) {
            return Err(FiniteGroupError::NotAGroup(format!("entry {bad} out of range")));
        }
        for x in 0..order {
            if mul[x] != x || mul[x * order] != x {
                return Err(FiniteGroupError::NotAGroup(format!(
                    "element 0 is not a two-sided identity for {x}"
                )));
            }
        }
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| mul[x * order + y] == 0)
                .ok_or_else(|| FiniteGroupError::NotAGroup(format!("{x} has no right inverse")))?;
            if mul[y * order + x] != 0 {
                return Err(FiniteGroupError::NotAGroup(format!(
                    "right inverse of {x} is not a left inverse"
                )));
            }
            inv[x] = y;
        }
        let table = FiniteGroupTable {
            name: name.to_string(),
            order,
            mul,
            inv,
            perms: None,
        };
        table.check_associativity()?;
        Ok(table)
    }

    fn check_associativity(&self) -> Result<(), FiniteGroupError> {
        let n = self.order;
        let assoc = |x: usize, y: usize, z: usize| {
            self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z))
        };
        let fail = |x, y, z| {
            Err(FiniteGroupError::NotAGroup(format!(
                "associativity fails at ({x}, {y}, {z})"
            )))
        };
        if n <= 24 {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !assoc(x, y, z) {
                            return fail(x, y, z);
                        }
                    }
                }
            }
        } else {
            // xorshift over triples; fixed seed keeps construction deterministic
            let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % n as u64) as usize
            };
            for _ in 0..20_000 {
                let (x, y, z) = (next(), next(), next());
                if !assoc(x, y, z) {
                    return fail(x, y, z);
                }
            }
        }
        Ok(())
    }

    /// The group generated by the closure of `perms` under composition, or the
    /// exact set `perms` when `close` is false. The identity always comes first;
    /// remaining elements keep discovery order.
    pub fn from_permutations(
        name: &str,
        degree: usize,
        perms: Vec<Vec<usize>>,
        close: bool,
    ) -> Result<Self, FiniteGroupError> {
        let identity: Vec<usize> = (0..degree).collect();
        for p in &perms {
            let mut seen = vec![false; degree];
            if p.len() != degree || p.iter().any(|&i| i >= degree || std::mem::replace(&mut seen[i], true)) {
                return Err(FiniteGroupError::NotAGroup(format!("{p:?} is not a permutation of degree {degree}")));
            }
        }
        let mut elements = vec![identity.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::from([(identity, 0)]);
        for p in &perms {
            if !index.contains_key(p) {
                index.insert(p.clone(), elements.len());
                elements.push(p.clone());
            }
        }
        if close {
            let mut queue: VecDeque<usize> = (0..elements.len()).collect();
            while let Some(i) = queue.pop_front() {
                for g in &perms {
                    let prod = compose(&elements[i], g);
                    if !index.contains_key(&prod) {
                        index.insert(prod.clone(), elements.len());
                        queue.push_back(elements.len());
                        elements.push(prod);
                    }
                }
            }
        }
        let order = elements.len();
        let mut mul = Vec::with_capacity(order * order);
        for x in &elements {
            for y in &elements {
                let prod = compose(x, y);
                let k = *index.get(&prod).ok_or_else(|| {
                    FiniteGroupError::NotAGroup("permutation set is not closed".into())
                })?;
                mul.push(k);
            }
        }
        let mut table = FiniteGroupTable::from_table(name, order, mul)?;
        table.perms = Some(elements);
        Ok(table)
    }

    pub fn cyclic(n: usize) -> Result<Self, FiniteGroupError> {
        let mul = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x + y) % n))
            .collect();
        FiniteGroupTable::from_table(&format!("Z{n}"), n, mul)
    }

    pub fn symmetric(degree: usize) -> Result<Self, FiniteGroupError> {
        FiniteGroupTable::from_permutations(&format!("S{degree}"), degree, permutations(degree), false)
    }

    pub fn alternating(degree: usize) -> Result<Self, FiniteGroupError> {
        let even = permutations(degree)
            .into_iter()
            .filter(|p| is_even(p))
            .collect();
        FiniteGroupTable::from_permutations(&format!("A{degree}"), degree, even, false)
    }

    /// Symmetries of a square acting on its vertices 0..4.
    pub fn dihedral_square() -> Result<Self, FiniteGroupError> {
        let rotation = vec![1, 2, 3, 0];
        let reflection = vec![0, 3, 2, 1];
        FiniteGroupTable::from_permutations("D4", 4, vec![rotation, reflection], true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    /// `x^e` by repeated squaring.
    pub fn pow(&self, x: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(x) } else { x };
        let mut k = e.unsigned_abs();
        let mut acc = 0;
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul(sq, sq);
            }
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Underlying permutations, for groups built from them.
    pub fn permutations(&self) -> Option<&[Vec<usize>]> {
        self.perms.as_deref()
    }

    /// Index of the element acting as `images` (0-based, `i -> images[i]`).
    pub fn find_permutation(&self, images: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|p| p == images)
    }
}

/// `(x · y)(i) = x(y(i))`
fn compose(x: &[usize], y: &[usize]) -> Vec<usize> {
    y.iter().map(|&i| x[i]).collect()
}

fn is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// All permutations of `0..degree` in lexicographic order.
fn permutations(degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..degree).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..degree).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..degree).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Looks up one of the built-in target groups by name.
pub fn builtin_table(name: &str) -> Result<FiniteGroupTable, FiniteGroupError> {
    let unknown = || FiniteGroupError::UnknownName(name.to_string());
    match name {
        "S3" => FiniteGroupTable::symmetric(3),
        "S4" => FiniteGroupTable::symmetric(4),
        "S5" => FiniteGroupTable::symmetric(5),
        "A4" => FiniteGroupTable::alternating(4),
        "A5" => FiniteGroupTable::alternating(5),
        "D4" => FiniteGroupTable::dihedral_square(),
        _ => {
            let n: usize = name
                .strip_prefix('Z')
                .and_then(|s| s.parse().ok())
                .ok_or_else(unknown)?;
            if !(2..=12).contains(&n) || name != format!("Z{n}") {
                return Err(unknown());
            }
            FiniteGroupTable::cyclic(n)
        }
    }
}
