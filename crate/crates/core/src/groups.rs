//! Finite groups given by multiplication tables, permutations, and degree-one
//! characters with values in roots of unity.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::scalars::CycloScalar;

/// Element of a [`FiniteGroup`], as an index into its table.
pub type Elem = usize;

#[derive(Debug)]
struct GroupData {
    order: usize,
    table: Vec<Elem>,
    identity: Elem,
    inverse: Vec<Elem>,
    names: Vec<String>,
    lookup: HashMap<String, Elem>,
    description: String,
}

/// A finite group as an explicit multiplication table. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    inner: Arc<GroupData>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.table == other.inner.table && self.inner.names == other.inner.names)
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a row-major table; `table[a][b]` is the product `ab`.
    pub fn from_table(table: Vec<Vec<Elem>>, names: Vec<String>, description: &str) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if names.len() != n {
            return Err(Error::InvalidGroup(format!("{} names for order {n}", names.len())));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {} has length {}", a + 1, row.len())));
            }
            let mut seen = vec![false; n];
            for &c in row {
                if c >= n || std::mem::replace(&mut seen[c], true) {
                    return Err(Error::InvalidGroup(format!("row {} is not a permutation", a + 1)));
                }
            }
            flat.extend_from_slice(row);
        }
        for b in 0..n {
            let mut seen = vec![false; n];
            for a in 0..n {
                if std::mem::replace(&mut seen[flat[a * n + b]], true) {
                    return Err(Error::InvalidGroup(format!("column {} is not a permutation", b + 1)));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| flat[e * n + a] == a && flat[a * n + e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    let ab = flat[a * n + b];
                    for c in 0..n {
                        if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                            return Err(Error::InvalidGroup(format!(
                                "not associative at ({}, {}, {})",
                                names[a], names[b], names[c]
                            )));
                        }
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| flat[a * n + b] == identity).expect("latin square"))
            .collect();
        let mut lookup = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if lookup.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidGroup(format!("duplicate element name `{name}`")));
            }
        }
        Ok(Self {
            inner: Arc::new(GroupData {
                order: n,
                table: flat,
                identity,
                inverse,
                names,
                lookup,
                description: description.to_string(),
            }),
        })
    }

    fn with_aliases(mut self, aliases: impl IntoIterator<Item = (String, Elem)>) -> Self {
        let data = Arc::get_mut(&mut self.inner).expect("fresh group");
        for (alias, e) in aliases {
            data.lookup.entry(alias).or_insert(e);
        }
        self
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z_n` with elements named `e, g, g^2, ...` (aliases `0, 1, 2, ...`).
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        Self::from_table(table, names, &format!("Z{n}"))
            .expect("cyclic table")
            .with_aliases((0..n).map(|k| (k.to_string(), k)))
    }

    /// `Z_{n1} x ... x Z_{nk}` with elements named `(a1,...,ak)`.
    ///
    /// Element `(a1,...,ak)` has index `a1*n2*...*nk + ... + ak`.
    pub fn cyclic_product(orders: &[usize]) -> Self {
        assert!(orders.iter().all(|&o| o >= 1));
        if orders.len() == 1 {
            return Self::cyclic(orders[0]);
        }
        if orders.is_empty() {
            return Self::trivial();
        }
        let total: usize = orders.iter().product();
        let digits = |mut x: usize| -> Vec<usize> {
            let mut d = vec![0; orders.len()];
            for (slot, &o) in orders.iter().enumerate().rev() {
                d[slot] = x % o;
                x /= o;
            }
            d
        };
        let index = |d: &[usize]| d.iter().zip(orders).fold(0, |acc, (&x, &o)| acc * o + x);
        let table = (0..total)
            .map(|a| {
                let da = digits(a);
                (0..total)
                    .map(|b| {
                        let db = digits(b);
                        let sum: Vec<usize> =
                            da.iter().zip(&db).zip(orders).map(|((x, y), o)| (x + y) % o).collect();
                        index(&sum)
                    })
                    .collect()
            })
            .collect();
        let names = (0..total)
            .map(|a| {
                let parts: Vec<String> = digits(a).iter().map(ToString::to_string).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let description = orders.iter().map(|o| format!("Z{o}")).collect::<Vec<_>>().join("x");
        Self::from_table(table, names, &description)
            .expect("product table")
            .with_aliases([("e".to_string(), 0)])
    }

    /// Parses `Z2`, `Z2xZ4`, `1` (trivial) or `table:<path>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(path) = spec.strip_prefix("table:") {
            return Self::from_csv(Path::new(path.trim()));
        }
        if spec == "1" || spec.eq_ignore_ascii_case("trivial") {
            return Ok(Self::trivial());
        }
        let orders = spec
            .split(['x', 'X', '×'])
            .map(|part| {
                part.trim()
                    .strip_prefix('Z')
                    .and_then(|o| o.parse::<usize>().ok())
                    .filter(|&o| o >= 1)
                    .ok_or_else(|| Error::Spec(format!("bad group factor `{part}` in `{spec}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if orders.iter().product::<usize>() > 4096 {
            return Err(Error::SizeLimit(format!("group `{spec}` is too large")));
        }
        Ok(Self::cyclic_product(&orders))
    }

    /// Reads a CSV multiplication table whose header row lists element names.
    ///
    /// Rows may optionally start with the row element's name, in which case the
    /// header carries a leading corner cell.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_path(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut rows: Vec<Vec<String>> = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
            if record.iter().all(str::is_empty) {
                continue;
            }
            rows.push(record.iter().map(str::to_string).collect());
        }
        if rows.is_empty() {
            return Err(Error::InvalidGroup("empty table file".into()));
        }
        let header = rows.remove(0);
        let labelled = header.len() == rows.len() + 1;
        let names: Vec<String> = if labelled { header[1..].to_vec() } else { header };
        let index: HashMap<&str, Elem> =
            names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut table = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            let cells = if labelled {
                if row.first().map(String::as_str) != names.get(r).map(String::as_str) {
                    return Err(Error::InvalidGroup(format!("row {} label does not match header", r + 1)));
                }
                &row[1..]
            } else {
                &row[..]
            };
            table.push(
                cells
                    .iter()
                    .map(|c| index.get(c.as_str()).copied().ok_or_else(|| Error::UnknownGroupElement(c.clone())))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Self::from_table(table, names, &format!("table:{}", path.display()))
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn identity(&self) -> Elem {
        self.inner.identity
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.inner.table[a * self.inner.order + b]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.inner.inverse[a]
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(self.identity(), |acc, _| self.mul(acc, base))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.inner.order
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.inner.names[a]
    }

    pub fn description(&self) -> &str {
        &self.inner.description
    }

    pub fn lookup(&self, name: &str) -> Result<Elem> {
        let key = name.trim();
        self.inner
            .lookup
            .get(key)
            .copied()
            .or_else(|| {
                // accept "1,0" for "(1,0)" and "(1, 0)" with spaces
                let compact: String = key.chars().filter(|c| !c.is_whitespace()).collect();
                self.inner
                    .lookup
                    .get(&compact)
                    .or_else(|| self.inner.lookup.get(&format!("({compact})")))
                    .copied()
            })
            .ok_or_else(|| Error::UnknownGroupElement(key.to_string()))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `generators`, sorted.
    pub fn generated_subgroup(&self, generators: &[Elem]) -> Vec<Elem> {
        let mut seen = BTreeSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Quotient by a normal subgroup, with the projection. Cosets are named by
    /// their smallest element.
    pub fn quotient(&self, normal: &[Elem]) -> Result<(FiniteGroup, Vec<Elem>)> {
        let rep_of = |g: Elem| normal.iter().map(|&k| self.mul(g, k)).min().expect("nonempty");
        for g in self.elements() {
            let left: BTreeSet<_> = normal.iter().map(|&k| self.mul(g, k)).collect();
            let right: BTreeSet<_> = normal.iter().map(|&k| self.mul(k, g)).collect();
            if left != right {
                return Err(Error::InvalidGroup("subgroup is not normal".into()));
            }
        }
        let reps: Vec<Elem> = self.elements().map(rep_of).collect::<BTreeSet<_>>().into_iter().collect();
        let pos: HashMap<Elem, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let projection: Vec<Elem> = self.elements().map(|g| pos[&rep_of(g)]).collect();
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| projection[self.mul(a, b)]).collect())
            .collect();
        let names = if normal.len() == 1 {
            reps.iter().map(|&r| self.name(r).to_string()).collect()
        } else {
            reps.iter().map(|&r| format!("[{}]", self.name(r))).collect()
        };
        let q = FiniteGroup::from_table(table, names, &format!("{}/N", self.description()))?;
        Ok((q, projection))
    }

    /// Elements sorted by order (descending) then index; helper for structure search.
    fn max_order_element(&self) -> Elem {
        self.elements()
            .max_by_key(|&a| (self.element_order(a), std::cmp::Reverse(a)))
            .expect("nonempty group")
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.description())
    }
}

/// `G/[G,G]` together with the projection `G -> G/[G,G]`.
pub fn abelianization(g: &FiniteGroup) -> Result<(FiniteGroup, Vec<Elem>)> {
    if g.order() > 64 {
        return Err(Error::SizeLimit(format!("abelianization of a group of order {}", g.order())));
    }
    let mut commutators = BTreeSet::new();
    for a in g.elements() {
        for b in g.elements() {
            commutators.insert(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
        }
    }
    let derived = g.generated_subgroup(&commutators.into_iter().collect::<Vec<_>>());
    g.quotient(&derived)
}

/// Invariant factors of an abelian group, largest first, by repeatedly splitting
/// off the cyclic subgroup of an element of maximal order.
pub fn invariant_factors(g: &FiniteGroup) -> Result<Vec<usize>> {
    if !g.is_abelian() {
        return Err(Error::PreconditionViolated("invariant factors of a nonabelian group".into()));
    }
    let mut factors = Vec::new();
    let mut current = g.clone();
    while current.order() > 1 {
        let x = current.max_order_element();
        factors.push(current.element_order(x));
        let cyclic = current.generated_subgroup(&[x]);
        current = current.quotient(&cyclic)?.0;
    }
    Ok(factors)
}

/// A degree-one character `G -> F^x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub group: FiniteGroup,
    pub values: Vec<CycloScalar>,
    /// Exponents `k` with value `zeta_r^k`, when built from roots of unity.
    pub exponents: Option<(u64, Vec<u64>)>,
}

impl Character {
    pub fn trivial(group: &FiniteGroup) -> Self {
        Self {
            group: group.clone(),
            values: vec![CycloScalar::one(); group.order()],
            exponents: Some((1, vec![0; group.order()])),
        }
    }

    pub fn value(&self, g: Elem) -> &CycloScalar {
        &self.values[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(CycloScalar::is_one)
    }

    /// Multiplicativity and `values(e) = 1`.
    pub fn verify(&self) -> bool {
        let g = &self.group;
        self.values[g.identity()].is_one()
            && g.elements().all(|a| {
                g.elements()
                    .all(|b| self.values[g.mul(a, b)] == &self.values[a] * &self.values[b])
            })
    }
}

/// All homomorphisms `G -> mu_r`, trivial character first.
///
/// Homomorphisms factor through the abelianization; on it, images of a greedy
/// generating set are enumerated among exponents compatible with each
/// generator's order and kept when the induced map is multiplicative.
pub fn homs_to_roots(g: &FiniteGroup, r: u64) -> Result<Vec<Character>> {
    assert!(r >= 1);
    let (ab, proj) = abelianization(g)?;
    let mut gens: Vec<Elem> = Vec::new();
    let mut span = vec![ab.identity()];
    for x in ab.elements() {
        if !span.contains(&x) {
            gens.push(x);
            span = ab.generated_subgroup(&gens);
        }
    }
    // word for each element of ab as exponent vector on gens
    let mut words: Vec<Option<Vec<u64>>> = vec![None; ab.order()];
    words[ab.identity()] = Some(vec![0; gens.len()]);
    let mut queue = VecDeque::from([ab.identity()]);
    while let Some(x) = queue.pop_front() {
        for (i, &gen) in gens.iter().enumerate() {
            let y = ab.mul(x, gen);
            if words[y].is_none() {
                let mut w = words[x].clone().expect("visited");
                w[i] += 1;
                words[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    let words: Vec<Vec<u64>> = words.into_iter().map(|w| w.expect("generated")).collect();
    let choices: Vec<Vec<u64>> = gens
        .iter()
        .map(|&x| {
            let o = ab.element_order(x) as u64;
            (0..r).filter(|k| (k * o).is_multiple_of(r)).collect()
        })
        .collect();

    let mut result = Vec::new();
    let mut assignment = vec![0u64; gens.len()];
    enumerate_assignments(&choices, 0, &mut assignment, &mut |exps| {
        let on_ab: Vec<u64> = words
            .iter()
            .map(|w| w.iter().zip(exps).map(|(a, b)| a * b).sum::<u64>() % r)
            .collect();
        let consistent = ab
            .elements()
            .all(|a| ab.elements().all(|b| (on_ab[a] + on_ab[b]) % r == on_ab[ab.mul(a, b)]));
        if consistent {
            let exps_g: Vec<u64> = g.elements().map(|x| on_ab[proj[x]]).collect();
            let values = exps_g
                .iter()
                .map(|&k| CycloScalar::root_of_unity(r as u32, k as i64))
                .collect();
            result.push(Character {
                group: g.clone(),
                values,
                exponents: Some((r, exps_g)),
            });
        }
    });
    Ok(result)
}

fn enumerate_assignments(
    choices: &[Vec<u64>],
    slot: usize,
    current: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]),
) {
    if slot == choices.len() {
        visit(current);
        return;
    }
    for &k in &choices[slot] {
        current[slot] = k;
        enumerate_assignments(choices, slot + 1, current, visit);
    }
}

/// Expected number of homomorphisms `G -> mu_r`: product of `gcd(d, r)` over
/// the invariant factors `d` of the abelianization.
pub fn count_homs_to_roots(g: &FiniteGroup, r: u64) -> Result<u64> {
    let (ab, _) = abelianization(g)?;
    Ok(invariant_factors(&ab)?.iter().map(|&d| (d as u64).gcd(&r)).product())
}

/// A permutation of `{0, ..., n-1}`; displayed 1-based in cycle notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::PreconditionViolated(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Self { images })
    }

    /// Builds from 1-based cycles, e.g. `[[1, 2, 3]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (k, &i) in cycle.iter().enumerate() {
                let j = cycle[(k + 1) % cycle.len()];
                if i == 0 || i > n || j == 0 || j > n {
                    return Err(Error::PreconditionViolated(format!("point out of range in cycle {cycle:?}")));
                }
                images[i - 1] = j - 1;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Self { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// All permutations of `{0..n-1}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if current.len() == n {
                out.push(Permutation { images: current.clone() });
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    current.push(i);
                    rec(n, current, used, out);
                    current.pop();
                    used[i] = false;
                }
            }
        }
        rec(n, &mut current, &mut used, &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.images.len()];
        let mut wrote = false;
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = self.images[i];
            }
            write!(f, "({})", cycle.join(" "))?;
            wrote = true;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Smallest subgroup of `S_n` containing `generators`, sorted lexicographically.
pub fn subgroup_closure(n: usize, generators: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(n);
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            assert_eq!(g.degree(), n, "generator acts on a different set");
            let y = x.compose(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// A permutation group with its multiplication table.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    pub n: usize,
    pub elements: Vec<Permutation>,
    pub group: FiniteGroup,
}

impl PermutationGroup {
    /// `elements` must be closed under composition.
    pub fn new(n: usize, mut elements: Vec<Permutation>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        let index: BTreeMap<&Permutation, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| {
                        index
                            .get(&a.compose(b))
                            .copied()
                            .ok_or_else(|| Error::InvalidGroup("permutation set is not closed".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let names = elements.iter().map(ToString::to_string).collect();
        let group = FiniteGroup::from_table(table, names, &format!("subgroup of S{n}"))?;
        Ok(Self { n, elements, group })
    }

    pub fn position(&self, p: &Permutation) -> Option<Elem> {
        self.elements.binary_search(p).ok()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Orbits of the natural action on `{0..n-1}`; each orbit sorted, orbits
/// ordered by their minimal element (the representative).
pub fn orbits(h: &[Permutation], n: usize) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let orbit: BTreeSet<usize> = h.iter().map(|p| p.apply(start)).chain([start]).collect();
        for &i in &orbit {
            assigned[i] = true;
        }
        out.push(orbit.into_iter().collect());
    }
    out
}
