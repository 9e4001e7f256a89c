//! Small finite groups as multiplication tables.

use crate::fqg::FqgError;
use std::collections::{BTreeSet, VecDeque};

/// A finite group on `0..order` with identity `0`; `table[a][b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    labels: Vec<String>,
    permutations: Option<Vec<Vec<usize>>>,
}

/// Subsets of a group of order at most 64, as bit masks.
pub type ElementSet = u64;

impl GroupTable {
    /// Validate a multiplication table: closed, identity at 0, associative,
    /// every element invertible.
    pub fn new(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, FqgError> {
        let n = table.len();
        if n == 0 {
            return Err(FqgError::NotAGroup("empty table".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(FqgError::NotAGroup(format!("row {a} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(FqgError::NotAGroup(format!("entry {bad} out of range")));
            }
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(FqgError::NotAGroup("index 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(FqgError::NotAGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        let mut inverses = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inverses[a] = b,
                None => return Err(FqgError::NotAGroup(format!("element {a} has no inverse"))),
            }
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(l) => {
                return Err(FqgError::NotAGroup(format!("{} labels for {n} elements", l.len())));
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(Self { table, inverses, labels, permutations: None })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// For permutation groups, the permutation of `0..degree` behind each
    /// element.
    pub fn permutations(&self) -> Option<&[Vec<usize>]> {
        self.permutations.as_deref()
    }

    /// Index of the element with the given label.
    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The subgroup generated by a set of elements.
    pub fn generated(&self, points: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut elems = vec![0usize];
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        let gens: Vec<usize> = points.iter().flat_map(|&p| [p, self.inverse(p)]).collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    elems.push(y);
                    queue.push_back(y);
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    pub fn mask(elems: &[usize]) -> ElementSet {
        elems.iter().fold(0u64, |m, &e| m | (1u64 << e))
    }

    pub fn unmask(mask: ElementSet) -> Vec<usize> {
        (0..64).filter(|&i| mask & (1u64 << i) != 0).collect()
    }

    /// All subgroups, sorted by order and then by element mask.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        assert!(self.order() <= 64, "subgroup enumeration supports order ≤ 64");
        let mut found: BTreeSet<(usize, ElementSet)> = BTreeSet::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::from([vec![0]]);
        found.insert((1, 1));
        while let Some(h) = queue.pop_front() {
            let hm = Self::mask(&h);
            for g in 0..self.order() {
                if hm & (1u64 << g) != 0 {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.generated(&gens);
                if found.insert((k.len(), Self::mask(&k))) {
                    queue.push_back(k);
                }
            }
        }
        found.into_iter().map(|(_, m)| Self::unmask(m)).collect()
    }

    /// A small generating set, chosen greedily in index order of decreasing
    /// element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut candidates: Vec<usize> = (1..self.order()).collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut current = vec![0usize];
        for a in candidates {
            if current.len() == self.order() {
                break;
            }
            if !current.contains(&a) {
                gens.push(a);
                current = self.generated(&gens);
            }
        }
        gens
    }

    /// The table of a subgroup, with elements relabelled in increasing order
    /// of their index in `self`. Returns the table and the inclusion map.
    pub fn subgroup_table(&self, elems: &[usize]) -> Result<(GroupTable, Vec<usize>), FqgError> {
        let mut sorted = elems.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.first() != Some(&0) {
            return Err(FqgError::NotAGroup("subset does not contain the identity".into()));
        }
        let pos = |x: usize| sorted.iter().position(|&y| y == x);
        let mut table = vec![vec![0; sorted.len()]; sorted.len()];
        for (i, &a) in sorted.iter().enumerate() {
            for (j, &b) in sorted.iter().enumerate() {
                table[i][j] = pos(self.mul(a, b))
                    .ok_or_else(|| FqgError::NotAGroup("subset is not closed".into()))?;
            }
        }
        let labels = sorted.iter().map(|&a| self.labels[a].clone()).collect();
        let mut h = GroupTable::new(table, Some(labels))?;
        h.permutations = self.permutations.as_ref().map(|p| sorted.iter().map(|&i| p[i].clone()).collect());
        Ok((h, sorted))
    }

    /// The cyclic group `ℤ_n`, element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(table, None).expect("cyclic table")
    }

    /// The group generated by permutations of `0..degree`, elements sorted
    /// lexicographically so that the identity comes first. Product is
    /// composition, `(στ)(i) = σ(τ(i))`.
    pub fn from_permutations(gens: &[Vec<usize>], degree: usize) -> Self {
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
        let mut queue: VecDeque<Vec<usize>> = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q: Vec<usize> = (0..degree).map(|i| p[g[i]]).collect();
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let index = |p: &Vec<usize>| elems.binary_search(p).expect("closed");
        let table = elems
            .iter()
            .map(|s| elems.iter().map(|t| index(&(0..degree).map(|i| s[t[i]]).collect())).collect())
            .collect();
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        let mut g = Self::new(table, Some(labels)).expect("permutation group");
        g.permutations = Some(elems);
        g
    }

    /// The symmetric group on `n` points.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            gens.push(swap);
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        Self::from_permutations(&gens, n)
    }

    /// Symmetries of a square acting on its vertices `0..4`.
    pub fn dihedral(n: usize) -> Self {
        let rotation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&[rotation, reflection], n)
    }

    /// The quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // Element 2u + s stands for (-1)^s·q_u with q = (1, i, j, k).
        let unit_mul = |u: usize, v: usize| -> (usize, bool) {
            match (u, v) {
                (0, v) => (v, false),
                (u, 0) => (u, false),
                (u, v) if u == v => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (w, neg) = unit_mul(a / 2, b / 2);
                        let sign = (a % 2) ^ (b % 2) ^ (neg as usize);
                        2 * w + sign
                    })
                    .collect()
            })
            .collect();
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
        Self::new(table, Some(names.iter().map(|s| s.to_string()).collect())).expect("Q8")
    }

    /// Every group homomorphism `self → target`, found by assigning images
    /// to a generating set and propagating.
    pub fn homomorphisms(&self, target: &GroupTable) -> Result<Vec<Vec<usize>>, FqgError> {
        if self.order() > 24 || target.order() > 24 {
            return Err(FqgError::NotAGroup("homomorphism search supports orders ≤ 24".into()));
        }
        let gens = self.generators();
        let mut out = Vec::new();
        let k = target.order();
        let total = k.pow(gens.len() as u32);
        for code in 0..total {
            let mut images = Vec::with_capacity(gens.len());
            let mut c = code;
            for _ in 0..gens.len() {
                images.push(c % k);
                c /= k;
            }
            if let Some(f) = self.extend(&gens, &images, target) {
                out.push(f);
            }
        }
        Ok(out)
    }

    fn extend(&self, gens: &[usize], images: &[usize], target: &GroupTable) -> Option<Vec<usize>> {
        let n = self.order();
        let mut f: Vec<Option<usize>> = vec![None; n];
        f[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let fx = f[x].unwrap();
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = target.mul(fx, img);
                match f[y] {
                    Some(v) if v != fy => return None,
                    Some(_) => {}
                    None => {
                        f[y] = Some(fy);
                        queue.push_back(y);
                    }
                }
            }
        }
        let f: Vec<usize> = f.into_iter().collect::<Option<_>>()?;
        let ok = (0..n).all(|a| (0..n).all(|b| f[self.mul(a, b)] == target.mul(f[a], f[b])));
        ok.then_some(f)
    }
}

/// 1-based cycle notation, `"e"` for the identity.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}
