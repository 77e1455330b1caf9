//! Finite abelian groups as explicit tables, and the matrix lemmas over `Z_m`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GroupError;
use crate::par::{self, Strategy};

/// Largest group order accepted by the enumeration paths.
pub const GROUP_CAP: usize = 64;

/// A finite abelian group on `{0, …, n−1}` given by its operation table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    n: usize,
    table: Vec<usize>,
    identity: usize,
}

impl Group {
    /// Checks closure, identity, inverses, associativity and commutativity.
    pub fn from_table(n: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        if n == 0 || table.len() != n * n || table.iter().any(|&x| x >= n) {
            return Err(GroupError::NotAbelian("table has the wrong shape".into()));
        }
        let op = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| op(e, x) == x && op(x, e) == x))
            .ok_or_else(|| GroupError::NotAbelian("no identity".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| op(a, b) == identity) {
                return Err(GroupError::NotAbelian(format!("{a} has no inverse")));
            }
            for b in 0..n {
                if op(a, b) != op(b, a) {
                    return Err(GroupError::NotAbelian(format!("{a} and {b} do not commute")));
                }
                for c in 0..n {
                    if op(op(a, b), c) != op(a, op(b, c)) {
                        return Err(GroupError::NotAbelian(format!("({a},{b},{c}) is not associative")));
                    }
                }
            }
        }
        Ok(Group { n, table, identity })
    }

    /// `Z_n` with element `i` standing for the residue `i`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Group { n, table, identity: 0 }
    }

    /// Pairs `(x, y)` encoded as `x·|other| + y`.
    pub fn direct_product(&self, other: &Group) -> Group {
        let n = self.n * other.n;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let x = self.op(a / other.n, b / other.n);
                let y = other.op(a % other.n, b % other.n);
                table[a * n + b] = x * other.n + y;
            }
        }
        Group { n, table, identity: self.identity * other.n + other.identity }
    }

    /// The same group with element `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Group {
        let n = self.n;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.op(a, b)];
            }
        }
        Group { n, table, identity: perm[self.identity] }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.n).find(|&b| self.op(a, b) == self.identity).expect("group has inverses")
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = self.identity;
        for _ in 0..k.unsigned_abs() {
            acc = self.op(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.n).map(|a| self.element_order(a)).fold(1, lcm)
    }

    /// Sorted subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.op(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: HashSet<usize> = set.iter().copied().collect();
        s.contains(&self.identity) && s.iter().all(|&a| s.iter().all(|&b| s.contains(&self.op(a, self.inv(b)))))
    }

    /// A nonempty set is a coset iff it is closed under `x y⁻¹ z`.
    pub fn is_coset(&self, set: &[usize]) -> bool {
        self.malcev_violation(set).is_none() && !set.is_empty()
    }

    /// First triple of `set` (in the given order) whose Mal'cev value leaves `set`.
    pub fn malcev_violation(&self, set: &[usize]) -> Option<(usize, usize, usize)> {
        let s: HashSet<usize> = set.iter().copied().collect();
        for &x in set {
            for &y in set {
                for &z in set {
                    if !s.contains(&self.malcev(x, y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn malcev(&self, x: usize, y: usize, z: usize) -> usize {
        self.op(self.op(x, self.inv(y)), z)
    }

    /// Whether `f` (a table on elements) is an endomorphism.
    pub fn is_endomorphism(&self, f: &[usize]) -> bool {
        f.len() == self.n
            && f.iter().all(|&x| x < self.n)
            && (0..self.n).all(|a| (0..self.n).all(|b| f[self.op(a, b)] == self.op(f[a], f[b])))
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `(p, e)` with `n = p^e`, if `n` is a prime power greater than 1.
fn prime_power(n: usize) -> Option<(usize, u32)> {
    let ps = prime_factors(n);
    if ps.len() != 1 {
        return None;
    }
    let p = ps[0];
    let mut e = 0;
    let mut x = n;
    while x > 1 {
        x /= p;
        e += 1;
    }
    Some((p, e))
}

/// A cyclic factor of a primary decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicFactor {
    pub generator: usize,
    pub prime: usize,
    pub order: usize,
}

/// Primary decomposition: primes ascending, orders ascending within a prime.
///
/// The basis is found by search and then checked by rebuilding every element
/// as a unique product of generator powers.
pub fn cyclic_decomposition(g: &Group) -> Result<Vec<CyclicFactor>, GroupError> {
    if g.order() > GROUP_CAP {
        return Err(GroupError::CapExceeded(g.order()));
    }
    let orders: Vec<usize> = (0..g.order()).map(|a| g.element_order(a)).collect();
    let mut out = Vec::new();
    for p in prime_factors(g.order()) {
        let sylow: Vec<usize> =
            (0..g.order()).filter(|&a| prime_power(orders[a]).map_or(orders[a] == 1, |(q, _)| q == p)).collect();
        // Factor type from the number of solutions of x^(p^j) = e.
        let mut counts = vec![1usize];
        let mut j = 1u32;
        loop {
            let c = sylow.iter().filter(|&&a| p.pow(j) % orders[a] == 0).count();
            counts.push(c);
            if c == sylow.len() {
                break;
            }
            j += 1;
        }
        // at_least[j] = number of factors of order ≥ p^j
        let mut factor_orders = Vec::new();
        for j in 1..counts.len() {
            let ratio = counts[j] / counts[j - 1];
            let at_least = prime_power(ratio).map_or(0, |(_, e)| e as usize);
            let next = if j + 1 < counts.len() {
                prime_power(counts[j + 1] / counts[j]).map_or(0, |(_, e)| e as usize)
            } else {
                0
            };
            for _ in 0..(at_least - next) {
                factor_orders.push(p.pow(j as u32));
            }
        }
        factor_orders.sort_unstable_by(|a, b| b.cmp(a));
        let mut chosen = Vec::new();
        let mut span = vec![g.identity()];
        if !pick_basis(g, &sylow, &orders, &factor_orders, &mut chosen, &mut span) {
            return Err(GroupError::ConstructionFailed(format!("no basis for the {p}-part")));
        }
        let mut factors: Vec<CyclicFactor> = chosen
            .iter()
            .zip(&factor_orders)
            .map(|(&generator, &order)| CyclicFactor { generator, prime: p, order })
            .collect();
        factors.sort_by_key(|f| (f.order, f.generator));
        out.extend(factors);
    }
    if coordinates(g, &out).is_none() {
        return Err(GroupError::ConstructionFailed("decomposition does not rebuild the table".into()));
    }
    Ok(out)
}

fn pick_basis(
    g: &Group,
    sylow: &[usize],
    orders: &[usize],
    want: &[usize],
    chosen: &mut Vec<usize>,
    span: &mut Vec<usize>,
) -> bool {
    let k = chosen.len();
    if k == want.len() {
        return span.len() == sylow.len();
    }
    for &x in sylow {
        if orders[x] != want[k] {
            continue;
        }
        let powers: Vec<usize> = (0..want[k]).map(|t| g.pow(x, t as i64)).collect();
        let span_set: HashSet<usize> = span.iter().copied().collect();
        if powers.iter().skip(1).any(|y| span_set.contains(y)) {
            continue;
        }
        let new_span: Vec<usize> =
            span.iter().flat_map(|&s| powers.iter().map(move |&y| (s, y))).map(|(s, y)| g.op(s, y)).collect();
        let distinct: HashSet<usize> = new_span.iter().copied().collect();
        if distinct.len() != new_span.len() {
            continue;
        }
        let saved = std::mem::replace(span, new_span);
        chosen.push(x);
        if pick_basis(g, sylow, orders, want, chosen, span) {
            return true;
        }
        chosen.pop();
        *span = saved;
    }
    false
}

/// Coordinates of every element with respect to a decomposition, or `None` if it is not a basis.
pub fn coordinates(g: &Group, basis: &[CyclicFactor]) -> Option<Vec<Vec<usize>>> {
    let total: usize = basis.iter().map(|f| f.order).product();
    if total != g.order() {
        return None;
    }
    let mut coords: Vec<Option<Vec<usize>>> = vec![None; g.order()];
    let mut digits = vec![0usize; basis.len()];
    for _ in 0..total {
        let x = basis.iter().zip(&digits).fold(g.identity(), |acc, (f, &d)| g.op(acc, g.pow(f.generator, d as i64)));
        if coords[x].is_some() {
            return None;
        }
        coords[x] = Some(digits.clone());
        for (d, f) in digits.iter_mut().zip(basis).rev() {
            *d += 1;
            if *d < f.order {
                break;
            }
            *d = 0;
        }
    }
    coords.into_iter().collect()
}

/// A character `χ: H → Z_m` with, for each `h ≠ e`, an endomorphism fixing `u` that keeps `h` visible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterWitness {
    pub m: usize,
    pub u: usize,
    pub chi: Vec<usize>,
    /// `endos[h]` for `h ≠ e`; `None` at the identity.
    pub endos: Vec<Option<Vec<usize>>>,
}

impl CharacterWitness {
    /// Checks the full property against `h`.
    pub fn check(&self, h: &Group) -> Result<(), String> {
        let n = h.order();
        if self.chi.len() != n || self.endos.len() != n {
            return Err("witness has the wrong size".into());
        }
        for a in 0..n {
            for b in 0..n {
                if self.chi[h.op(a, b)] != (self.chi[a] + self.chi[b]) % self.m {
                    return Err(format!("χ is not a homomorphism at ({a},{b})"));
                }
            }
        }
        for x in 0..n {
            if x == h.identity() {
                continue;
            }
            let Some(phi) = &self.endos[x] else { return Err(format!("no endomorphism for {x}")) };
            if !h.is_endomorphism(phi) {
                return Err(format!("map for {x} is not an endomorphism"));
            }
            if phi[self.u] != self.u {
                return Err(format!("map for {x} moves u"));
            }
            if self.chi[phi[x]] == 0 {
                return Err(format!("χ(φ({x})) = 0"));
            }
        }
        Ok(())
    }
}

fn factor_pp(x: usize, p: usize, n: u32) -> (usize, u32) {
    // x = a·p^k in Z_{p^n} with p ∤ a; zero gets a = 1, k = n.
    if x == 0 {
        return (1, n);
    }
    let mut a = x;
    let mut k = 0;
    while a.is_multiple_of(p) {
        a /= p;
        k += 1;
    }
    (a, k)
}

fn inverse_mod(a: usize, modulus: usize) -> usize {
    (1..modulus).find(|&b| (a * b) % modulus == 1).unwrap_or(0)
}

struct PrimeBlock {
    p: usize,
    /// positions into the full coordinate vector, orders ascending
    idx: Vec<usize>,
    exps: Vec<u32>,
    /// coordinate `j` was folded into the last one
    sigma: Option<usize>,
}

impl PrimeBlock {
    fn modulus(&self, j: usize) -> usize {
        self.p.pow(self.exps[j])
    }

    fn mu(&self, j: usize, x: usize) -> usize {
        let k = self.idx.len() - 1;
        (x * self.p.pow(self.exps[k] - self.exps[j])) % self.modulus(k)
    }

    fn forward(&self, v: &mut [usize]) {
        if let Some(j) = self.sigma {
            let k = self.idx.len() - 1;
            let (xj, xk) = (v[self.idx[j]], v[self.idx[k]]);
            v[self.idx[k]] = (self.mu(j, xj) + xk) % self.modulus(k);
        }
    }

    fn backward(&self, v: &mut [usize]) {
        if let Some(j) = self.sigma {
            let k = self.idx.len() - 1;
            let (xj, xk) = (v[self.idx[j]], v[self.idx[k]]);
            let mk = self.modulus(k);
            v[self.idx[k]] = (xk + mk - self.mu(j, xj)) % mk;
        }
    }
}

/// Builds the character of the abelian-group proposition by following its constructive proof.
///
/// Works per prime on a basis of cyclic factors, folds a coordinate into the last
/// one when the last coordinate of `u` does not have maximal order, projects to the
/// last coordinate, and combines primes through `Z_{p^n} → Z_m, x ↦ (m/p^n)·x`.
/// The result is checked before it is returned.
pub fn huc_character(h: &Group, m: usize, u: usize) -> Result<CharacterWitness, GroupError> {
    if u >= h.order() {
        return Err(GroupError::NotAnElement(u));
    }
    let exponent = h.exponent();
    if m == 0 || !m.is_multiple_of(exponent) {
        return Err(GroupError::ExponentMismatch { exponent, m });
    }
    let basis = cyclic_decomposition(h)?;
    let coords = coordinates(h, &basis).ok_or_else(|| GroupError::ConstructionFailed("bad basis".into()))?;
    let lookup: HashMap<Vec<usize>, usize> = coords.iter().cloned().enumerate().map(|(e, c)| (c, e)).collect();

    let mut blocks: Vec<PrimeBlock> = Vec::new();
    for (i, f) in basis.iter().enumerate() {
        let e = prime_power(f.order).expect("primary factor").1;
        match blocks.last_mut() {
            Some(b) if b.p == f.prime => {
                b.idx.push(i);
                b.exps.push(e);
            }
            _ => blocks.push(PrimeBlock { p: f.prime, idx: vec![i], exps: vec![e], sigma: None }),
        }
    }
    let ucoord = coords[u].clone();
    for b in blocks.iter_mut() {
        let k = b.idx.len() - 1;
        let d: Vec<u32> = (0..=k)
            .map(|j| {
                let (_, kk) = factor_pp(ucoord[b.idx[j]], b.p, b.exps[j]);
                b.exps[j] - kk
            })
            .collect();
        let dmax = *d.iter().max().unwrap();
        if d[k] != dmax {
            b.sigma = (0..k).find(|&j| d[j] == dmax);
        }
    }
    let kappa = |v: &[usize]| {
        let mut w = v.to_vec();
        for b in &blocks {
            b.forward(&mut w);
        }
        w
    };
    let kappa_inv = |v: &[usize]| {
        let mut w = v.to_vec();
        for b in &blocks {
            b.backward(&mut w);
        }
        lookup[&w]
    };
    let u_t = kappa(&ucoord);

    let chi: Vec<usize> = (0..h.order())
        .map(|x| {
            let t = kappa(&coords[x]);
            blocks
                .iter()
                .map(|b| {
                    let k = b.idx.len() - 1;
                    t[b.idx[k]] * (m / b.modulus(k))
                })
                .sum::<usize>()
                % m
        })
        .collect();

    let mut endos = vec![None; h.order()];
    for x in 0..h.order() {
        if x == h.identity() {
            continue;
        }
        let t = kappa(&coords[x]);
        let b = blocks
            .iter()
            .find(|b| b.idx.iter().any(|&i| t[i] != 0))
            .ok_or_else(|| GroupError::ConstructionFailed("nonidentity element with zero coordinates".into()))?;
        let k = b.idx.len() - 1;
        let phi: Vec<usize> = if t[b.idx[k]] != 0 {
            (0..h.order()).collect()
        } else {
            let j = (0..k).find(|&j| t[b.idx[j]] != 0).unwrap();
            let mk = b.modulus(k);
            let (a1, k1) = factor_pp(u_t[b.idx[j]], b.p, b.exps[j]);
            let (a2, k2) = factor_pp(u_t[b.idx[k]], b.p, b.exps[k]);
            let d1 = b.exps[j] - k1;
            let d2 = b.exps[k] - k2;
            if d2 < d1 {
                return Err(GroupError::ConstructionFailed("last coordinate of u lost maximal order".into()));
            }
            let inv = inverse_mod(a2 % mk, mk);
            let c = ((a1 * b.p.pow(d2 - d1)) % mk + mk - a2 % mk) % mk * inv % mk;
            (0..h.order())
                .map(|y| {
                    let mut v = kappa(&coords[y]);
                    let (yj, yk) = (v[b.idx[j]], v[b.idx[k]]);
                    v[b.idx[k]] = (b.mu(j, yj) + mk - (c * yk) % mk) % mk;
                    kappa_inv(&v)
                })
                .collect()
        };
        endos[x] = Some(phi);
    }
    let w = CharacterWitness { m, u, chi, endos };
    w.check(h).map_err(GroupError::ConstructionFailed)?;
    Ok(w)
}

// ---------------------------------------------------------------- matrices over Z_m

/// A `rows × cols` matrix over `Z_m`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixZm {
    pub m: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<usize>,
}

impl MatrixZm {
    pub fn new(m: usize, rows: usize, cols: usize, entries: Vec<usize>) -> Self {
        assert!(m >= 2 && entries.len() == rows * cols);
        let entries = entries.into_iter().map(|x| x % m).collect();
        MatrixZm { m, rows, cols, entries }
    }

    pub fn from_rows(m: usize, rows: &[Vec<usize>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        MatrixZm::new(m, rows.len(), cols, rows.concat())
    }

    pub fn get(&self, r: usize, c: usize) -> usize {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vec<usize> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<usize> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
}

impl fmt::Display for MatrixZm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows).map(|r| format!("{:?}", self.row(r))).collect();
        write!(f, "Z_{} [{}]", self.m, rows.join(" "))
    }
}

fn add_vec(m: usize, x: &[usize], y: &[usize]) -> Vec<usize> {
    x.iter().zip(y).map(|(a, b)| (a + b) % m).collect()
}

fn malcev_vec(m: usize, x: &[usize], y: &[usize], z: &[usize]) -> Vec<usize> {
    x.iter().zip(y).zip(z).map(|((a, b), c)| (a + m - b + c) % m).collect()
}

/// Whether a finite set of vectors is a subgroup of `Z_mᵏ`.
pub fn is_vector_subgroup(m: usize, set: &[Vec<usize>]) -> Option<String> {
    let Some(first) = set.first() else { return Some("empty set".into()) };
    let s: HashSet<&Vec<usize>> = set.iter().collect();
    let zero = vec![0; first.len()];
    if !s.contains(&zero) {
        return Some("zero vector missing".into());
    }
    for x in &s {
        for y in &s {
            let p = add_vec(m, x, y);
            if !s.contains(&p) {
                return Some(format!("{x:?} + {y:?} = {p:?} missing"));
            }
        }
    }
    None
}

/// Whether a finite set of vectors is a coset: closed under `x − y + z`.
pub fn is_vector_coset(m: usize, set: &[Vec<usize>]) -> Option<String> {
    if set.is_empty() {
        return Some("empty set".into());
    }
    let s: HashSet<&Vec<usize>> = set.iter().collect();
    for x in &s {
        for y in &s {
            for z in &s {
                let p = malcev_vec(m, x, y, z);
                if !s.contains(&p) {
                    return Some(format!("{x:?} - {y:?} + {z:?} = {p:?} missing"));
                }
            }
        }
    }
    None
}

fn all_vectors(m: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = m.pow(k as u32);
    (0..total).map(move |mut i| {
        let mut v = vec![0; k];
        for slot in v.iter_mut().rev() {
            *slot = i % m;
            i /= m;
        }
        v
    })
}

fn solves(m: usize, c: &[usize], x: &[usize]) -> bool {
    c.iter().zip(x).map(|(a, b)| a * b).sum::<usize>() % m == 0
}

/// Full annihilator `E = {c : Σ cᵢxᵢ ≡ 0 for all x ∈ H}` of a subgroup of `Z_mᵏ`.
pub fn annihilator(m: usize, k: usize, h: &[Vec<usize>]) -> Vec<Vec<usize>> {
    all_vectors(m, k).filter(|c| h.iter().all(|x| solves(m, c, x))).collect()
}

/// Rows spanning the annihilator of `H`; the solution set of the rows is exactly `H`.
pub fn annihilator_system(m: usize, k: usize, h: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, GroupError> {
    if m < 2 || m.checked_pow(k as u32).is_none_or(|t| t > 1 << 20) {
        return Err(GroupError::CapExceeded(m.saturating_pow(k as u32)));
    }
    if let Some(why) = is_vector_subgroup(m, h) {
        return Err(GroupError::NotSubgroup(why));
    }
    if h.iter().any(|x| x.len() != k || x.iter().any(|&v| v >= m)) {
        return Err(GroupError::NotSubgroup("vector outside Z_m^k".into()));
    }
    let e = annihilator(m, k, h);
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut span: HashSet<Vec<usize>> = HashSet::from([vec![0; k]]);
    for c in e {
        if span.contains(&c) {
            continue;
        }
        rows.push(c);
        // re-close the span under addition by the new row
        let mut frontier: Vec<Vec<usize>> = span.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            let y = add_vec(m, &x, rows.last().unwrap());
            if span.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let solutions: HashSet<Vec<usize>> = all_vectors(m, k).filter(|x| rows.iter().all(|c| solves(m, c, x))).collect();
    let hset: HashSet<Vec<usize>> = h.iter().cloned().collect();
    if solutions != hset {
        return Err(GroupError::ConstructionFailed("annihilator system does not cut out H".into()));
    }
    Ok(rows)
}

/// Checks the three hypotheses of the zero-column proposition.
pub fn zero_column_hypotheses(mat: &MatrixZm) -> Result<(), GroupError> {
    let rows: Vec<Vec<usize>> = (0..mat.rows).map(|r| mat.row(r)).collect();
    if let Some(why) = is_vector_subgroup(mat.m, &rows) {
        return Err(GroupError::HypothesisFailed { which: "row-subgroup".into(), witness: why });
    }
    let cols: Vec<Vec<usize>> = (0..mat.cols).map(|c| mat.column(c)).collect();
    if let Some(why) = is_vector_coset(mat.m, &cols) {
        return Err(GroupError::HypothesisFailed { which: "column-coset".into(), witness: why });
    }
    if let Some(r) = rows.iter().find(|r| !r.contains(&0)) {
        return Err(GroupError::HypothesisFailed { which: "row-zero".into(), witness: format!("row {r:?}") });
    }
    Ok(())
}

/// Least index of a constantly-zero column of a matrix meeting the hypotheses.
pub fn find_zero_column(mat: &MatrixZm) -> Result<usize, GroupError> {
    zero_column_hypotheses(mat)?;
    (0..mat.cols).find(|&c| mat.column(c).iter().all(|&x| x == 0)).ok_or(GroupError::PropositionViolated)
}

/// The proof's route: pick `c ∈ E` with `Σcᵢ ≡ 1` and form `D = Σ cᵢ Cᵢ`.
///
/// Returns the coefficient vector and the index of the column equal to `D`.
pub fn zero_column_by_annihilator(mat: &MatrixZm) -> Result<(Vec<usize>, usize), GroupError> {
    zero_column_hypotheses(mat)?;
    let m = mat.m;
    let rows: Vec<Vec<usize>> = (0..mat.rows).map(|r| mat.row(r)).collect();
    let e = annihilator(m, mat.cols, &rows);
    let c = e.into_iter().find(|c| c.iter().sum::<usize>() % m == 1 % m).ok_or(GroupError::PropositionViolated)?;
    let d: Vec<usize> = (0..mat.rows).map(|r| (0..mat.cols).map(|i| c[i] * mat.get(r, i)).sum::<usize>() % m).collect();
    if d.iter().any(|&x| x != 0) {
        return Err(GroupError::PropositionViolated);
    }
    let idx = (0..mat.cols).find(|&i| mat.column(i) == d).ok_or(GroupError::PropositionViolated)?;
    Ok((c, idx))
}

/// Outcome of an exhaustive sweep over small matrices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroColumnSweep {
    pub matrices: usize,
    pub satisfying: usize,
    pub failures: Vec<String>,
}

/// Every `j × k` matrix over `Z_m` for `j, k ≤ max_dim`: those meeting the hypotheses
/// must have a zero column, found by both the scan and the annihilator route.
pub fn zero_column_sweep(m: usize, max_dim: usize, strategy: Strategy) -> ZeroColumnSweep {
    let mut report = ZeroColumnSweep::default();
    for j in 1..=max_dim {
        for k in 1..=max_dim {
            let total = m.pow((j * k) as u32);
            let results = par::map_range(strategy, total, |mut idx| {
                let mut entries = vec![0; j * k];
                for slot in entries.iter_mut().rev() {
                    *slot = idx % m;
                    idx /= m;
                }
                let mat = MatrixZm::new(m, j, k, entries);
                if zero_column_hypotheses(&mat).is_err() {
                    return (false, None);
                }
                let fail = match (find_zero_column(&mat), zero_column_by_annihilator(&mat)) {
                    (Ok(a), Ok((_, b)))
                        if mat.column(a).iter().all(|&x| x == 0) && mat.column(b).iter().all(|&x| x == 0) =>
                    {
                        None
                    }
                    (a, b) => Some(format!("{mat}: scan {a:?}, annihilator {b:?}")),
                };
                (true, fail)
            });
            report.matrices += total;
            for (ok, fail) in results {
                report.satisfying += ok as usize;
                report.failures.extend(fail);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Group {
        Group::cyclic(n)
    }

    #[test]
    fn table_validation() {
        assert!(Group::from_table(3, z(3).table().to_vec()).is_ok());
        let mut bad = z(3).table().to_vec();
        bad.swap(1, 2);
        assert!(Group::from_table(3, bad).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let d6 = cyclic_decomposition(&z(6)).unwrap();
        assert_eq!(d6.iter().map(|f| f.order).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(d6[0].generator, 3);
        assert_eq!(d6[1].generator, 2);
        assert!(cyclic_decomposition(&z(1)).unwrap().is_empty());
        let z2z4 = z(2).direct_product(&z(4));
        let d = cyclic_decomposition(&z2z4).unwrap();
        assert_eq!(d.iter().map(|f| (f.prime, f.order)).collect::<Vec<_>>(), vec![(2, 2), (2, 4)]);
        let z2cubed = z(2).direct_product(&z(2)).direct_product(&z(2));
        assert_eq!(cyclic_decomposition(&z2cubed).unwrap().len(), 3);
    }

    #[test]
    fn huc_examples() {
        let v4 = z(2).direct_product(&z(2));
        // element (1,0) is encoded as 2
        let w = huc_character(&v4, 2, 2).unwrap();
        assert_ne!(w.chi[2], 0);
        w.check(&v4).unwrap();
        let w = huc_character(&z(1), 1, 0).unwrap();
        assert_eq!(w.chi, vec![0]);
        for u in 0..6 {
            let w = huc_character(&z(6), 6, u).unwrap();
            for h in 1..6 {
                assert_ne!(w.chi[h], 0);
            }
        }
        assert!(matches!(huc_character(&z(4), 6, 1), Err(GroupError::ExponentMismatch { .. })));
    }

    #[test]
    fn huc_on_products_of_cycles() {
        for g in [
            z(2).direct_product(&z(4)),
            z(4).direct_product(&z(8)),
            z(3).direct_product(&z(9)),
            z(2).direct_product(&z(6)),
        ] {
            let e = g.exponent();
            for u in 0..g.order() {
                for m in [e, 2 * e] {
                    huc_character(&g, m, u).unwrap().check(&g).unwrap();
                }
            }
        }
    }

    #[test]
    fn annihilator_examples() {
        let h = vec![vec![0, 0], vec![1, 1]];
        let rows = annihilator_system(2, 2, &h).unwrap();
        assert_eq!(rows, vec![vec![1, 1]]);
        let all: Vec<Vec<usize>> = all_vectors(3, 2).collect();
        assert!(annihilator_system(3, 2, &all).unwrap().is_empty());
        let rows = annihilator_system(3, 2, &[vec![0, 0]]).unwrap();
        let sols: Vec<Vec<usize>> = all_vectors(3, 2).filter(|x| rows.iter().all(|c| solves(3, c, x))).collect();
        assert_eq!(sols, vec![vec![0, 0]]);
        assert!(matches!(annihilator_system(2, 2, &[vec![1, 1]]), Err(GroupError::NotSubgroup(_))));
    }

    #[test]
    fn zero_column_examples() {
        let m = MatrixZm::from_rows(2, &[vec![0, 0], vec![0, 1]]);
        assert_eq!(find_zero_column(&m), Ok(0));
        assert_eq!(zero_column_by_annihilator(&m).unwrap().1, 0);
        assert_eq!(find_zero_column(&MatrixZm::from_rows(2, &[vec![0]])), Ok(0));
        match find_zero_column(&MatrixZm::from_rows(2, &[vec![0, 0], vec![1, 1]])) {
            Err(GroupError::HypothesisFailed { which, witness }) => {
                assert_eq!(which, "row-zero");
                assert!(witness.contains("[1, 1]"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_sweep() {
        let r = zero_column_sweep(2, 2, Strategy::Sequential);
        assert!(r.failures.is_empty());
        assert!(r.satisfying > 0);
        assert_eq!(r, zero_column_sweep(2, 2, Strategy::Parallel));
    }
}
