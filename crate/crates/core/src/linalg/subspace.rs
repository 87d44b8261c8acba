use super::field::Fp;
use super::matrix::{FpMatrix, FpVector};

/// A subspace of F_p^n held as a reduced row echelon basis.
///
/// Every pivot column is zero in all rows except its own, so coordinates
/// of a member vector can be read off at the pivots, and `reduce` returns
/// the canonical coset representative with zeros at every pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Fp,
    ambient: usize,
    rows: Vec<FpVector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Fp, ambient: usize) -> Self {
        Subspace { field, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Fp, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Subspace { field, ambient, rows, pivots: (0..ambient).collect() }
    }

    pub fn spanned_by<'a>(field: Fp, ambient: usize, vectors: impl IntoIterator<Item = &'a FpVector>) -> Self {
        let mut s = Self::zero(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[FpVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of `v` modulo this subspace.
    pub fn reduce(&self, v: &[u32]) -> FpVector {
        debug_assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let mut out = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let a = out[c];
            if a != 0 {
                f.axpy(&mut out, f.neg(a), row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates with respect to `basis()`, or `None` if `v` is not a member.
    pub fn coords(&self, v: &[u32]) -> Option<FpVector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Add `v` to the span. Returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let f = self.field;
        let mut r = self.reduce(v);
        let Some(c) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(r[c]);
        f.scale(&mut r, inv);
        for row in self.rows.iter_mut() {
            let a = row[c];
            if a != 0 {
                f.axpy(row, f.neg(a), &r);
            }
        }
        let at = self.pivots.partition_point(|&pc| pc < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, r);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v);
        }
        s
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// Canonical complement of `self` inside `outer`, returned as the echelon
    /// span of the residues of `outer`'s basis. Requires `self ⊆ outer`.
    pub fn complement_in(&self, outer: &Subspace) -> Subspace {
        let mut c = Subspace::zero(self.field, self.ambient);
        for v in &outer.rows {
            c.insert(&self.reduce(v));
        }
        c
    }

    pub fn to_matrix(&self) -> FpMatrix {
        FpMatrix::from_rows(self.field, self.ambient, &self.rows).expect("rows have ambient length")
    }
}

/// Expresses vectors as combinations of a fixed (possibly dependent) list
/// of generators, and exposes the linear relations among them.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    field: Fp,
    ambient: usize,
    ngens: usize,
    // echelon rows paired with the generator combination producing them
    rows: Vec<(FpVector, FpVector)>,
    pivots: Vec<usize>,
    relations: Vec<FpVector>,
}

impl SpanSolver {
    pub fn new(field: Fp, ambient: usize, generators: &[FpVector]) -> Self {
        let ngens = generators.len();
        let mut solver =
            SpanSolver { field, ambient, ngens, rows: Vec::new(), pivots: Vec::new(), relations: Vec::new() };
        for (i, g) in generators.iter().enumerate() {
            let mut combo = vec![0; ngens];
            combo[i] = 1;
            solver.absorb(g.clone(), combo);
        }
        solver
    }

    fn reduce_with_combo(&self, v: &mut FpVector, combo: &mut FpVector) {
        let f = self.field;
        for ((row, rc), &c) in self.rows.iter().zip(&self.pivots) {
            let a = v[c];
            if a != 0 {
                let na = f.neg(a);
                f.axpy(v, na, row);
                f.axpy(combo, na, rc);
            }
        }
    }

    fn absorb(&mut self, mut v: FpVector, mut combo: FpVector) {
        let f = self.field;
        self.reduce_with_combo(&mut v, &mut combo);
        match v.iter().position(|&x| x != 0) {
            None => self.relations.push(combo),
            Some(c) => {
                let inv = f.inv(v[c]);
                f.scale(&mut v, inv);
                f.scale(&mut combo, inv);
                for (row, rc) in self.rows.iter_mut() {
                    let a = row[c];
                    if a != 0 {
                        let na = f.neg(a);
                        f.axpy(row, na, &v);
                        f.axpy(rc, na, &combo);
                    }
                }
                let at = self.pivots.partition_point(|&pc| pc < c);
                self.pivots.insert(at, c);
                self.rows.insert(at, (v, combo));
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coefficients `c` with `Σ c_i g_i = v`, if `v` lies in the span.
    pub fn express(&self, v: &[u32]) -> Option<FpVector> {
        debug_assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let mut r = v.to_vec();
        let mut combo = vec![0; self.ngens];
        self.reduce_with_combo(&mut r, &mut combo);
        if r.iter().any(|&x| x != 0) {
            return None;
        }
        // r = v - Σ combo_i g_i... reduce_with_combo subtracts, so negate.
        for x in combo.iter_mut() {
            *x = f.neg(*x);
        }
        Some(combo)
    }

    /// A basis of `{c : Σ c_i g_i = 0}`.
    pub fn relations(&self) -> &[FpVector] {
        &self.relations
    }
}
