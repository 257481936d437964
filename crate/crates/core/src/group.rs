//! Finite groups as explicit composition tables.
//!
//! Every group uses a canonical enumeration with the identity at index 0:
//! cyclic groups use residues, dihedral groups use `x + n*a` for the element
//! `(x, a)` of `Z/n ⋊ Z/2`, and direct products use mixed-radix indices with
//! the first factor most significant.

use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ONE};

/// Orders up to this bound get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub usize);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);

    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for GroupElement {
    fn from(i: usize) -> Self {
        GroupElement(i)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Cyclic(usize),
    Dihedral(usize),
    Product(Vec<FiniteGroup>),
    Generic,
}

impl Family {
    pub fn describe(&self) -> String {
        match self {
            Family::Cyclic(n) => format!("cyclic:{n}"),
            Family::Dihedral(n) => format!("dihedral:{n}"),
            Family::Product(fs) => {
                let parts: Vec<String> = fs
                    .iter()
                    .map(|f| match f.family() {
                        Family::Product(_) => format!("({})", f.family().describe()),
                        other => other.describe(),
                    })
                    .collect();
                format!("product:{}", parts.join(","))
            }
            Family::Generic => "generic".to_string(),
        }
    }
}

/// A finite group given by its full Cayley table.
///
/// Tables are reference counted, so clones are cheap.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Arc<[u32]>,
    inverse: Arc<[u32]>,
    family: Family,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table && self.family == other.family
    }
}

impl FiniteGroup {
    fn from_validated_table(order: usize, table: Vec<u32>, family: Family) -> Result<Self> {
        validate(order, &table)?;
        let inverse = (0..order)
            .map(|i| {
                let row = &table[i * order..(i + 1) * order];
                row.iter().position(|&v| v == 0).expect("latin row contains identity") as u32
            })
            .collect::<Vec<_>>();
        Ok(FiniteGroup {
            order,
            table: table.into(),
            inverse: inverse.into(),
            family,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order).map(GroupElement)
    }

    /// `u ∘ v` by index. Panics on out-of-range indices.
    #[inline]
    pub fn mul(&self, u: usize, v: usize) -> usize {
        self.table[u * self.order + v] as usize
    }

    #[inline]
    pub fn inv(&self, u: usize) -> usize {
        self.inverse[u] as usize
    }

    pub fn check(&self, u: GroupElement) -> Result<GroupElement> {
        if u.0 < self.order {
            Ok(u)
        } else {
            Err(Error::IndexOutOfRange {
                index: u.0,
                order: self.order,
            })
        }
    }

    pub fn compose(&self, u: GroupElement, v: GroupElement) -> Result<GroupElement> {
        self.check(u)?;
        self.check(v)?;
        Ok(GroupElement(self.mul(u.0, v.0)))
    }

    pub fn inverse(&self, u: GroupElement) -> Result<GroupElement> {
        self.check(u)?;
        Ok(GroupElement(self.inv(u.0)))
    }

    pub fn compose_row(&self, u: usize) -> Vec<usize> {
        (0..self.order).map(|v| self.mul(u, v)).collect()
    }

    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|u| self.compose_row(u)).collect()
    }

    pub fn inverse_table(&self) -> Vec<usize> {
        self.inverse.iter().map(|&v| v as usize).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|u| (0..u).all(|v| self.mul(u, v) == self.mul(v, u)))
    }
}

fn validate(order: usize, table: &[u32]) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if table.len() != order * order {
        return Err(Error::Shape {
            expected: order * order,
            found: table.len(),
        });
    }
    if let Some(pos) = table.iter().position(|&v| v as usize >= order) {
        return Err(Error::IndexOutOfRange {
            index: table[pos] as usize,
            order,
        });
    }
    let at = |i: usize, j: usize| table[i * order + j] as usize;

    let mut seen = vec![usize::MAX; order];
    for i in 0..order {
        for j in 0..order {
            let v = at(i, j);
            if seen[v] == i {
                return Err(Error::GroupAxiom {
                    axiom: "latin-square (row)",
                    witness: vec![i, j, v],
                });
            }
            seen[v] = i;
        }
    }
    seen.fill(usize::MAX);
    for j in 0..order {
        for i in 0..order {
            let v = at(i, j);
            if seen[v] == j {
                return Err(Error::GroupAxiom {
                    axiom: "latin-square (column)",
                    witness: vec![i, j, v],
                });
            }
            seen[v] = j;
        }
    }
    for i in 0..order {
        if at(0, i) != i || at(i, 0) != i {
            return Err(Error::GroupAxiom {
                axiom: "identity",
                witness: vec![0, i],
            });
        }
    }
    for i in 0..order {
        let has_inverse = (0..order).any(|j| at(i, j) == 0 && at(j, i) == 0);
        if !has_inverse {
            return Err(Error::GroupAxiom {
                axiom: "inverse",
                witness: vec![i],
            });
        }
    }
    let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
    if order <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if !assoc(a, b, c) {
                        return Err(Error::GroupAxiom {
                            axiom: "associativity",
                            witness: vec![a, b, c],
                        });
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(order as u64);
        for _ in 0..10 * order {
            let (a, b, c) = (
                rng.gen_range(0..order),
                rng.gen_range(0..order),
                rng.gen_range(0..order),
            );
            if !assoc(a, b, c) {
                return Err(Error::GroupAxiom {
                    axiom: "associativity",
                    witness: vec![a, b, c],
                });
            }
        }
    }
    Ok(())
}

fn table_len(order: usize) -> Result<()> {
    if order > u32::MAX as usize || order.checked_mul(order).is_none() {
        return Err(Error::InvalidInput(format!("group order {order} is too large")));
    }
    Ok(())
}

pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    table_len(n)?;
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push(((i + j) % n) as u32);
        }
    }
    FiniteGroup::from_validated_table(n, table, Family::Cyclic(n))
}

/// `D_n` with `(x,a)·(y,b) = (x + (-1)^a y, a + b)` and index `x + n*a`.
pub fn make_dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let order = 2 * n;
    table_len(order)?;
    let mut table = Vec::with_capacity(order * order);
    for u in 0..order {
        let (x, a) = (u % n, u / n);
        for v in 0..order {
            let (y, b) = (v % n, v / n);
            let y_signed = if a == 0 { y } else { (n - y) % n };
            let z = (x + y_signed) % n;
            let c = (a + b) % 2;
            table.push((z + n * c) as u32);
        }
    }
    FiniteGroup::from_validated_table(order, table, Family::Dihedral(n))
}

/// Direct product in mixed-radix order, first factor most significant.
pub fn make_product(factors: &[FiniteGroup]) -> Result<FiniteGroup> {
    if factors.is_empty() {
        return Err(Error::InvalidInput("product needs at least one factor".into()));
    }
    let radices: Vec<usize> = factors.iter().map(|f| f.order()).collect();
    let order = radices
        .iter()
        .try_fold(1usize, |acc, &r| acc.checked_mul(r))
        .ok_or_else(|| Error::InvalidInput("product order overflows".into()))?;
    table_len(order)?;
    let digits: Vec<Vec<usize>> = (0..order).map(|i| mixed_radix_digits(i, &radices)).collect();
    let mut table = Vec::with_capacity(order * order);
    for du in &digits {
        for dv in &digits {
            let mut idx = 0usize;
            for (k, f) in factors.iter().enumerate() {
                idx = idx * radices[k] + f.mul(du[k], dv[k]);
            }
            table.push(idx as u32);
        }
    }
    FiniteGroup::from_validated_table(order, table, Family::Product(factors.to_vec()))
}

pub fn mixed_radix_digits(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for k in (0..radices.len()).rev() {
        digits[k] = index % radices[k];
        index /= radices[k];
    }
    digits
}

/// Validates an arbitrary Cayley table. If the identity is not at index 0,
/// its label is swapped with label 0.
pub fn load_cayley(table: &[Vec<usize>]) -> Result<FiniteGroup> {
    let order = table.len();
    if order == 0 {
        return Err(Error::InvalidOrder(0));
    }
    table_len(order)?;
    for (i, row) in table.iter().enumerate() {
        if row.len() != order {
            return Err(Error::InvalidInput(format!(
                "row {i} has {} entries, expected {order}",
                row.len()
            )));
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= order) {
            return Err(Error::IndexOutOfRange { index: bad, order });
        }
    }
    let identity = (0..order).find(|&e| (0..order).all(|j| table[e][j] == j && table[j][e] == j));
    let Some(e) = identity else {
        // Let the validator name the precise problem (latin square first).
        let flat: Vec<u32> = table.iter().flatten().map(|&v| v as u32).collect();
        validate(order, &flat)?;
        return Err(Error::GroupAxiom {
            axiom: "identity",
            witness: vec![],
        });
    };
    let relabel = |i: usize| {
        if i == e {
            0
        } else if i == 0 {
            e
        } else {
            i
        }
    };
    let mut flat = vec![0u32; order * order];
    for i in 0..order {
        for j in 0..order {
            flat[relabel(i) * order + relabel(j)] = relabel(table[i][j]) as u32;
        }
    }
    FiniteGroup::from_validated_table(order, flat, Family::Generic)
}

pub fn load_cayley_file(path: &Path) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)?;
    let table: Vec<Vec<usize>> = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    load_cayley(&table)
}

/// Parses `cyclic:<n>`, `dihedral:<n>`, `product:<spec>,<spec>,...` and
/// `cayley:<path>`. Nested products are wrapped in parentheses.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    let spec = strip_parens(spec);
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("group spec `{spec}` has no `kind:` prefix")))?;
    let parse_n = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("`{s}` is not a group order")))
    };
    match kind.trim() {
        "cyclic" => make_cyclic(parse_n(rest)?),
        "dihedral" => make_dihedral(parse_n(rest)?),
        "product" => {
            let factors = split_top_level(rest)?
                .into_iter()
                .map(parse_group_spec)
                .collect::<Result<Vec<_>>>()?;
            make_product(&factors)
        }
        "cayley" => load_cayley_file(Path::new(rest.trim())),
        other => Err(Error::Parse(format!("unknown group kind `{other}`"))),
    }
}

fn strip_parens(s: &str) -> &str {
    let mut s = s;
    while s.starts_with('(') && s.ends_with(')') && balanced(&s[1..s.len() - 1]) {
        s = s[1..s.len() - 1].trim();
    }
    s
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
    }
    parts.push(&s[start..]);
    if parts.iter().any(|p| p.trim().is_empty()) {
        return Err(Error::Parse(format!("empty factor in `{s}`")));
    }
    Ok(parts)
}

/// Permutation matrix stored as the image of each column: column `j` has
/// its single 1 in row `mapping[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationMatrix {
    mapping: Vec<usize>,
}

impl PermutationMatrix {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(Error::InvalidInput("mapping is not a bijection".into()));
            }
            seen[m] = true;
        }
        Ok(PermutationMatrix { mapping })
    }

    pub fn identity(n: usize) -> Self {
        PermutationMatrix {
            mapping: (0..n).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &PermutationMatrix) -> PermutationMatrix {
        assert_eq!(self.size(), other.size());
        PermutationMatrix {
            mapping: other.mapping.iter().map(|&j| self.mapping[j]).collect(),
        }
    }

    /// Inverse, which for a permutation matrix is also the transpose.
    pub fn inverse(&self) -> PermutationMatrix {
        let mut inv = vec![0; self.size()];
        for (j, &i) in self.mapping.iter().enumerate() {
            inv[i] = j;
        }
        PermutationMatrix { mapping: inv }
    }

    pub fn apply<T: Copy + Default>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.size());
        let mut y = vec![T::default(); x.len()];
        for (j, &i) in self.mapping.iter().enumerate() {
            y[i] = x[j];
        }
        y
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.size();
        let mut m = CMatrix::zeros(n, n);
        for (j, &i) in self.mapping.iter().enumerate() {
            m[(i, j)] = ONE;
        }
        m
    }

    pub fn to_int_rows(&self) -> Vec<Vec<u8>> {
        let n = self.size();
        let mut rows = vec![vec![0u8; n]; n];
        for (j, &i) in self.mapping.iter().enumerate() {
            rows[i][j] = 1;
        }
        rows
    }
}

/// `L_u e_j = e_{u∘j}`.
pub fn left_regular(group: &FiniteGroup, u: GroupElement) -> Result<PermutationMatrix> {
    group.check(u)?;
    Ok(PermutationMatrix {
        mapping: (0..group.order()).map(|j| group.mul(u.0, j)).collect(),
    })
}

/// `R_u e_j = e_{j∘u}`.
pub fn right_regular(group: &FiniteGroup, u: GroupElement) -> Result<PermutationMatrix> {
    group.check(u)?;
    Ok(PermutationMatrix {
        mapping: (0..group.order()).map(|j| group.mul(j, u.0)).collect(),
    })
}
