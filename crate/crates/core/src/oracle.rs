//! Independent check of the ring presentations: each group is built as a
//! multiplication table and `dim H^d(G, F_p)` is read off a minimal free
//! resolution of the trivial module over `F_p[G]`.

use thiserror::Error;

use crate::catalog::{presentation_of, CatalogError, Family, GroupSpec};
use crate::fplinalg::{kernel_basis, EchelonBuilder, FpMatrix, Subspace};

pub const MAX_ORDER: u64 = 64;
pub const MAX_DEGREE: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("group order {0} exceeds the cap of {MAX_ORDER}")]
    OrderCap(String),
    #[error("degree {0} exceeds the cap of {MAX_DEGREE}")]
    DegreeCap(u32),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// A metacyclic group `{t^i s^j}` with `t^m = 1`, `s t s^-1 = t^r` and
/// `s^k = t^c`.
#[derive(Debug, Clone)]
pub struct GroupTable {
    t_order: u32,
    s_order: u32,
    r: u32,
    c: u32,
    mul: Vec<u8>,
}

impl GroupTable {
    fn metacyclic(t_order: u32, s_order: u32, r: u32, c: u32) -> Self {
        let order = (t_order * s_order) as usize;
        let mut table = GroupTable {
            t_order,
            s_order,
            r: r % t_order,
            c: c % t_order,
            mul: Vec::with_capacity(order * order),
        };
        for a in 0..order {
            for b in 0..order {
                let prod = table.multiply_pairs(table.element(a), table.element(b));
                table.mul.push(table.index(prod) as u8);
            }
        }
        table
    }

    /// `t^a s^b · t^e s^f = t^{a + e r^b} s^{b + f}`, reducing `s^k = t^c`.
    fn multiply_pairs(&self, (a, b): (u32, u32), (e, f): (u32, u32)) -> (u32, u32) {
        let m = self.t_order as u64;
        let twist = (0..b).fold(1u64, |acc, _| acc * self.r as u64 % m);
        let mut i = (a as u64 + e as u64 * twist) % m;
        let mut j = b + f;
        if j >= self.s_order {
            j -= self.s_order;
            i = (i + self.c as u64) % m;
        }
        (i as u32, j)
    }

    pub fn order(&self) -> usize {
        (self.t_order * self.s_order) as usize
    }

    /// `(i, j)` with the element equal to `t^i s^j`.
    pub fn element(&self, idx: usize) -> (u32, u32) {
        (idx as u32 % self.t_order, idx as u32 / self.t_order)
    }

    pub fn index(&self, (i, j): (u32, u32)) -> usize {
        (j * self.t_order + i) as usize
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn t(&self) -> usize {
        self.index((1 % self.t_order, 0))
    }

    pub fn s(&self) -> usize {
        self.index((0, 1 % self.s_order))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        (0..e).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.order()).find(|&b| self.mul(a, b) == self.identity())
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    pub fn has_identity_and_inverses(&self) -> bool {
        let n = self.order();
        let e = self.identity();
        (0..n).all(|a| self.mul(a, e) == a && self.mul(e, a) == a)
            && (0..n).all(|a| self.inverse(a).is_some_and(|b| self.mul(b, a) == e))
    }

    /// Generators used for the augmentation ideal.
    pub fn generators(&self) -> Vec<usize> {
        let mut g = vec![self.t()];
        if self.s_order > 1 {
            g.push(self.s());
        }
        g
    }
}

pub fn group_table(g: GroupSpec) -> Result<GroupTable, OracleError> {
    let order = g.order().filter(|&o| o <= MAX_ORDER).ok_or_else(|| OracleError::OrderCap(g.to_string()))?;
    let p = g.p();
    let n = g.n();
    let pn = p.pow(n);
    let table = match g.family() {
        Family::A => GroupTable::metacyclic(pn, 1, 1, 0),
        Family::B => GroupTable::metacyclic(pn, p, 1, 0),
        Family::C => GroupTable::metacyclic(pn, p, p.pow(n - 1) + 1, 0),
        Family::D => {
            let m = 1 << (n - 1);
            GroupTable::metacyclic(m, 2, m - 1, 0)
        }
        Family::E => {
            let m = 1 << (n - 1);
            GroupTable::metacyclic(m, 2, m - 1, m / 2)
        }
        Family::F => {
            let m = 1 << n;
            GroupTable::metacyclic(m, 2, (1 << (n - 1)) - 1, 0)
        }
    };
    debug_assert_eq!(table.order() as u64, order);
    Ok(table)
}

/// Right multiplication by a group element on a free module of rank
/// `rank`, with basis `e_j · h` at index `j·|G| + h`.
fn act(table: &GroupTable, v: &[u32], g: usize) -> Vec<u32> {
    let n = table.order();
    let mut out = vec![0; v.len()];
    for (idx, &c) in v.iter().enumerate() {
        if c != 0 {
            let (j, h) = (idx / n, idx % n);
            out[j * n + table.mul(h, g)] = c;
        }
    }
    out
}

/// `v · (g - 1)`.
fn act_minus_one(table: &GroupTable, v: &[u32], g: usize, p: u32) -> Vec<u32> {
    let mut out = act(table, v, g);
    for (o, &x) in out.iter_mut().zip(v) {
        *o = (*o + p - x) % p;
    }
    out
}

/// A homomorphism of free right `F_p[G]`-modules, given by the images of
/// the free generators.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source_rank: usize,
    pub target_rank: usize,
    pub images: Vec<Vec<u32>>,
    /// Underlying linear map, `target_rank·|G|` rows by `source_rank·|G|`
    /// columns.
    pub matrix: FpMatrix,
}

impl ModuleMap {
    fn new(table: &GroupTable, p: u32, target_rank: usize, images: Vec<Vec<u32>>) -> Self {
        let n = table.order();
        let source_rank = images.len();
        let mut matrix = FpMatrix::zeros(p, target_rank * n, source_rank * n);
        for (j, img) in images.iter().enumerate() {
            for h in 0..n {
                for (row, c) in act(table, img, h).into_iter().enumerate() {
                    if c != 0 {
                        matrix.set(row, j * n + h, c);
                    }
                }
            }
        }
        ModuleMap {
            source_rank,
            target_rank,
            images,
            matrix,
        }
    }

    /// Whether `f(v·g) = f(v)·g` for every basis vector and group generator.
    pub fn is_equivariant(&self, table: &GroupTable) -> bool {
        let n = table.order();
        let p = self.matrix.p();
        table.generators().into_iter().all(|g| {
            (0..self.source_rank * n).all(|col| {
                let mut e = vec![0; self.source_rank * n];
                e[col] = 1;
                let lhs = self.matrix.apply(&act(table, &e, g));
                let rhs = act(table, &self.matrix.apply(&e), g);
                lhs.iter().zip(&rhs).all(|(a, b)| a % p == b % p)
            })
        })
    }
}

/// The differentials `P_d → P_{d-1}` for `d = 1..` and the ranks `b_d`.
#[derive(Debug, Clone)]
pub struct ResolutionState {
    pub table: GroupTable,
    pub p: u32,
    pub differentials: Vec<ModuleMap>,
    pub betti: Vec<usize>,
}

/// `K · I` for the augmentation ideal `I`, spanned by `v(g - 1)` over a
/// basis of `K` and the group generators.
fn radical_times(table: &GroupTable, k: &Subspace, p: u32) -> EchelonBuilder {
    let mut b = EchelonBuilder::new(p, k.ambient_dim());
    for v in k.basis_vectors() {
        for g in table.generators() {
            b.insert(act_minus_one(table, &v, g, p));
        }
    }
    b
}

pub fn resolve(g: GroupSpec, max_degree: u32) -> Result<ResolutionState, OracleError> {
    if max_degree > MAX_DEGREE {
        return Err(OracleError::DegreeCap(max_degree));
    }
    let table = group_table(g)?;
    let p = g.p();
    let n = table.order();
    // Kernel of the augmentation F_p[G] → F_p.
    let aug = FpMatrix::new(p, 1, n, vec![1; n]).expect("ones are reduced");
    let mut kernel = kernel_basis(&aug);
    let mut rank = 1;
    let mut betti = vec![1];
    let mut differentials = Vec::new();
    for _ in 1..=max_degree {
        let mut builder = radical_times(&table, &kernel, p);
        let mut images = Vec::new();
        for v in kernel.basis_vectors() {
            if builder.insert(v.clone()) {
                images.push(v);
            }
        }
        let d = ModuleMap::new(&table, p, rank, images);
        rank = d.source_rank;
        betti.push(rank);
        kernel = kernel_basis(&d.matrix);
        differentials.push(d);
    }
    Ok(ResolutionState {
        table,
        p,
        differentials,
        betti,
    })
}

pub fn betti_numbers(g: GroupSpec, max_degree: u32) -> Result<Vec<usize>, OracleError> {
    Ok(resolve(g, max_degree)?.betti)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub group: GroupSpec,
    pub max_degree: u32,
    pub betti: Vec<usize>,
    pub hilbert: Vec<usize>,
}

impl OracleReport {
    /// Degrees where the resolution and the presentation disagree.
    pub fn mismatches(&self) -> Vec<u32> {
        (0..=self.max_degree)
            .filter(|&d| self.betti[d as usize] != self.hilbert[d as usize])
            .collect()
    }

    pub fn matches(&self) -> bool {
        self.mismatches().is_empty()
    }
}

pub fn oracle_check(g: GroupSpec, max_degree: u32) -> Result<OracleReport, OracleError> {
    let betti = betti_numbers(g, max_degree)?;
    let hilbert = presentation_of(g)?.hilbert_series(max_degree);
    Ok(OracleReport {
        group: g,
        max_degree,
        betti,
        hilbert,
    })
}
