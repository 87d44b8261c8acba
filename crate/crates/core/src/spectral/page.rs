use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::e2::{BottomRowPolicy, E2Context, SsElement, TermSpec};
use super::fiber::FiberAlgebra;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::linalg::{FpMatrix, FpVector, SpanSolver, Subspace};

/// Last page with a possibly nonzero differential for a 4-dimensional fiber.
pub const LAST_PAGE: u32 = 5;

/// E_r^{k,l} as Z_r / B_r inside E_2^{k,l}, with a canonical basis of the
/// quotient: the echelon span of cycle residues modulo boundaries.
#[derive(Clone, Debug)]
pub struct Cell {
    cycles: Subspace,
    boundaries: Subspace,
    quotient: Subspace,
}

impl Cell {
    fn new(cycles: Subspace, boundaries: Subspace) -> Self {
        let quotient = boundaries.complement_in(&cycles);
        Cell { cycles, boundaries, quotient }
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn cycles(&self) -> &Subspace {
        &self.cycles
    }

    pub fn boundaries(&self) -> &Subspace {
        &self.boundaries
    }

    /// Representatives of a basis of E_r^{k,l}.
    pub fn basis(&self) -> &[FpVector] {
        self.quotient.basis()
    }

    /// Coordinates of the class of a cycle in `basis()`.
    pub fn class_coords(&self, v: &[u32]) -> Option<FpVector> {
        if !self.cycles.contains(v) {
            return None;
        }
        self.quotient.coords(&self.boundaries.reduce(v))
    }
}

/// d_r out of one cell.
#[derive(Clone, Debug)]
pub struct CellMap {
    /// Rows index the target basis, columns the source basis.
    pub matrix: FpMatrix,
    /// Image of each source basis vector in E_2 coordinates, reduced
    /// modulo target boundaries.
    pub images: Vec<FpVector>,
    /// Dimension of the part of E_r^{k,l} on which d_r was set to zero
    /// because no specified value reached it.
    pub defaulted: usize,
}

#[derive(Clone, Debug)]
pub struct Differential {
    pub page: u32,
    pub maps: BTreeMap<(u32, u32), CellMap>,
}

impl Differential {
    pub fn rank(&self, k: u32, l: u32) -> usize {
        self.maps.get(&(k, l)).map_or(0, |m| m.matrix.rank())
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(|m| m.matrix.is_zero())
    }
}

/// Values of d_r on a few classes, in text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub source: Vec<TermSpec>,
    #[serde(default)]
    pub target: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialSpecData {
    pub page: u32,
    pub entries: Vec<EntrySpec>,
}

/// Values of d_r on chosen classes in columns k <= 3. The rest of d_r
/// follows from the Leibniz rule and H*(G)-linearity; classes nothing
/// reaches are sent to zero.
#[derive(Clone, Debug)]
pub struct DifferentialSpec {
    pub page: u32,
    pub entries: Vec<(SsElement, SsElement)>,
}

impl DifferentialSpec {
    pub fn zero(page: u32) -> Self {
        DifferentialSpec { page, entries: Vec::new() }
    }

    pub fn from_data(ctx: &E2Context, data: &DifferentialSpecData) -> Result<Self> {
        let r = data.page;
        if !(2..=LAST_PAGE).contains(&r) {
            return Err(Error::Differential(format!("page {r} is outside 2..={LAST_PAGE}")));
        }
        let mut entries = Vec::new();
        for e in &data.entries {
            let src = ctx.parse(&e.source)?;
            if src.l + 1 < r {
                return Err(Error::Differential(format!("d_{r} on row {} lands below the bottom row", src.l)));
            }
            let tgt = ctx.parse_at(&e.target, src.k + r, src.l + 1 - r)?;
            entries.push((src, tgt));
        }
        Ok(DifferentialSpec { page: r, entries })
    }
}

/// One cell in the page history.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub k: u32,
    pub l: u32,
    pub dim: usize,
    pub rank: usize,
    pub defaulted: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRecord {
    pub page: u32,
    pub cells: Vec<CellRecord>,
}

/// A cell of a page as emitted in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDump {
    pub page: u32,
    pub k: u32,
    pub l: u32,
    pub dim: usize,
    pub basis: Vec<String>,
}

/// The page E_r, exact for total degrees up to `valid_through`.
#[derive(Clone, Debug)]
pub struct SSPage {
    ctx: Arc<E2Context>,
    r: u32,
    cells: Vec<Vec<Cell>>,
    valid_through: u32,
    differential: Option<Differential>,
    history: Vec<PageRecord>,
}

/// E_2 = H*(G) ⊗ H*(M) for a homologically trivial action.
pub fn build_e2(g: &GroupSpec, fiber: FiberAlgebra, cutoff: u32, policy: BottomRowPolicy) -> Result<SSPage> {
    let ctx = E2Context::new(g, fiber, cutoff, policy)?;
    Ok(SSPage::initial(ctx))
}

impl SSPage {
    pub fn initial(ctx: Arc<E2Context>) -> Self {
        let f = ctx.field();
        let cells = (0..=ctx.working_cutoff())
            .map(|k| {
                (0..=4)
                    .map(|l| {
                        let n = ctx.cell_dim(k, l);
                        Cell::new(Subspace::full(f, n), Subspace::zero(f, n))
                    })
                    .collect()
            })
            .collect();
        let valid_through = ctx.working_cutoff();
        SSPage { ctx, r: 2, cells, valid_through, differential: None, history: Vec::new() }
    }

    pub fn context(&self) -> &Arc<E2Context> {
        &self.ctx
    }

    pub fn page(&self) -> u32 {
        self.r
    }

    /// Largest column (and total degree) on which this page is exact.
    pub fn valid_through(&self) -> u32 {
        self.valid_through
    }

    pub fn differential(&self) -> Option<&Differential> {
        self.differential.as_ref()
    }

    /// Records of earlier pages: dimensions and ranks of their differentials.
    pub fn history(&self) -> &[PageRecord] {
        &self.history
    }

    fn check_column(&self, k: u32) -> Result<()> {
        if k > self.valid_through {
            return Err(Error::AboveCutoff { degree: k, cutoff: self.valid_through });
        }
        Ok(())
    }

    pub fn cell(&self, k: u32, l: u32) -> Result<&Cell> {
        self.check_column(k)?;
        self.cells[k as usize]
            .get(l as usize)
            .ok_or_else(|| Error::Dimension(format!("row {l} is above the fiber dimension")))
    }

    pub fn dim(&self, k: u32, l: u32) -> Result<usize> {
        if l > 4 {
            return Ok(0);
        }
        Ok(self.cell(k, l)?.dim())
    }

    /// Σ_{k+l=q} dim E_r^{k,l}.
    pub fn totals(&self, q: u32) -> Result<usize> {
        self.check_column(q)?;
        (0..=q.min(4)).map(|l| self.dim(q - l, l)).sum()
    }

    /// Rank of d_r out of (k, l), zero when no differential is attached.
    pub fn rank(&self, k: u32, l: u32) -> usize {
        self.differential.as_ref().map_or(0, |d| d.rank(k, l))
    }

    /// Do two classes agree in E_r?
    pub fn equal_mod_boundaries(&self, a: &SsElement, b: &SsElement) -> Result<bool> {
        if (a.k, a.l) != (b.k, b.l) {
            return Ok(false);
        }
        let f = self.ctx.field();
        let mut diff = a.coords.clone();
        f.axpy(&mut diff, f.neg(1), &b.coords);
        Ok(self.cell(a.k, a.l)?.boundaries.contains(&diff))
    }

    /// d_r of a cycle, using the attached differential.
    pub fn differential_value(&self, e: &SsElement) -> Result<SsElement> {
        let d = self
            .differential
            .as_ref()
            .ok_or_else(|| Error::Differential("no differential attached to this page".into()))?;
        let r = self.r;
        if e.l + 1 < r {
            return Err(Error::Differential(format!("d_{r} on row {} lands below the bottom row", e.l)));
        }
        let (tk, tl) = (e.k + r, e.l + 1 - r);
        let coords = self
            .cell(e.k, e.l)?
            .class_coords(&e.coords)
            .ok_or_else(|| Error::Differential(format!("{} is not a d_{r}-cycle", self.ctx.render(e))))?;
        let mut out = self.ctx.zero(tk, tl);
        if let Some(m) = d.maps.get(&(e.k, e.l)) {
            let f = self.ctx.field();
            for (c, img) in coords.iter().zip(&m.images) {
                f.axpy(&mut out.coords, *c, img);
            }
        } else if !d.is_zero() && tk > self.valid_through {
            return Err(Error::AboveCutoff { degree: tk, cutoff: self.valid_through });
        }
        Ok(out)
    }

    pub fn dumps(&self) -> Vec<PageDump> {
        let mut out = Vec::new();
        let top = self.valid_through.min(self.ctx.k_max());
        for k in 0..=top {
            for l in 0..=4u32 {
                let cell = &self.cells[k as usize][l as usize];
                if k + l > top || cell.dim() == 0 {
                    continue;
                }
                let basis =
                    cell.basis().iter().map(|v| self.ctx.render(&SsElement { k, l, coords: v.clone() })).collect();
                out.push(PageDump { page: self.r, k, l, dim: cell.dim(), basis });
            }
        }
        out
    }
}

fn validate_spec(page: &SSPage, spec: &DifferentialSpec) -> Result<()> {
    let r = page.r;
    let ctx = &page.ctx;
    for (src, tgt) in &spec.entries {
        let label = ctx.render(src);
        if src.k > 3 {
            return Err(Error::Differential(format!("{label}: sources must sit in columns k <= 3")));
        }
        if src.l + 1 < r || (tgt.k, tgt.l) != (src.k + r, src.l + 1 - r) {
            return Err(Error::Differential(format!("{label}: target has the wrong bidegree for d_{r}")));
        }
        if !page.cell(src.k, src.l)?.cycles.contains(&src.coords) {
            return Err(Error::Differential(format!("{label} does not survive to E_{r}")));
        }
        let tcell = page.cell(tgt.k, tgt.l)?;
        if !tcell.cycles.contains(&tgt.coords) {
            return Err(Error::Differential(format!(
                "target {} of {label} does not survive to E_{r}",
                ctx.render(tgt)
            )));
        }
        if tgt.l == 0 && !ctx.bottom_row_allows(tgt, &tcell.boundaries)? {
            return Err(Error::Differential(format!(
                "d_{r}({label}) = {} is not allowed in the bottom row ({:?})",
                ctx.render(tgt),
                ctx.policy()
            )));
        }
    }
    Ok(())
}

/// Pairs (a, d a) obtained from the specified values by products among
/// the sources, in bidegrees that fit.
fn product_closure(page: &SSPage, spec: &DifferentialSpec) -> Result<Vec<(SsElement, SsElement)>> {
    let ctx = &page.ctx;
    let f = ctx.field();
    let r = page.r;
    let mut all = spec.entries.clone();
    let mut frontier = spec.entries.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (a, da) in &frontier {
            for (s, ds) in &spec.entries {
                if a.l + s.l > 4 || a.k + s.k + r > page.valid_through {
                    continue;
                }
                let prod = ctx.multiply(a, s)?;
                if prod.is_zero() {
                    continue;
                }
                // d(as) = d(a) s + (-1)^{|a|} a d(s)
                let left = ctx.multiply(da, s)?;
                let right = ctx.multiply(a, ds)?;
                let d = ctx.add(&left, &ctx.scale(&right, f.sign((a.k + a.l) % 2 == 1)));
                next.push((prod, d));
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(all)
}

/// Extend specified values of d_r to every cell of the page.
pub fn leibniz_extend(page: &SSPage, spec: &DifferentialSpec) -> Result<SSPage> {
    let r = page.r;
    if spec.page != r {
        return Err(Error::Differential(format!("spec for d_{} applied to E_{r}", spec.page)));
    }
    validate_spec(page, spec)?;
    let ctx = page.ctx.clone();
    let f = ctx.field();
    let mut out = page.clone();

    let nonzero =
        spec.entries.iter().any(|(_, t)| !page.cells[t.k as usize][t.l as usize].boundaries.contains(&t.coords));
    if !nonzero {
        out.differential = Some(Differential { page: r, maps: BTreeMap::new() });
        return Ok(out);
    }

    let pairs = product_closure(page, spec)?;
    let vt = page.valid_through;
    let mut maps = BTreeMap::new();
    for l in (r - 1)..=4 {
        let tl = l + 1 - r;
        for k in 0..=vt.saturating_sub(r) {
            let tk = k + r;
            let cell = &page.cells[k as usize][l as usize];
            let tcell = &page.cells[tk as usize][tl as usize];
            if cell.dim() == 0 {
                continue;
            }
            // base multiples b·a with d(b·a) = (-1)^{|b|} b·d(a)
            let mut reps = Vec::new();
            let mut vals = Vec::new();
            for (a, da) in pairs.iter().filter(|(a, _)| a.l == l && a.k <= k) {
                let j = k - a.k;
                let sign = f.sign(j % 2 == 1);
                for idx in 0..ctx.base_basis(j)?.len() {
                    let mut b = ctx.zero(j, 0);
                    b.coords[idx] = 1;
                    let rep = ctx.multiply(&b, a)?;
                    if rep.is_zero() {
                        continue;
                    }
                    if !cell.cycles.contains(&rep.coords) {
                        return Err(Error::Inconsistent(format!(
                            "{} is a product of d_{r}-cycles but does not survive to E_{r}",
                            ctx.render(&rep)
                        )));
                    }
                    let d = ctx.scale(&ctx.multiply(&b, da)?, sign);
                    reps.push(rep.coords);
                    vals.push(d.coords);
                }
            }
            let nreps = reps.len();
            let mut spanned = Subspace::spanned_by(f, cell.cycles.ambient(), reps.iter());
            for v in cell.boundaries.basis() {
                spanned.insert(v);
            }
            let free = spanned.complement_in(&cell.cycles);
            let mut gens = reps;
            gens.extend(cell.boundaries.basis().iter().cloned());
            gens.extend(free.basis().iter().cloned());
            let solver = SpanSolver::new(f, cell.cycles.ambient(), &gens);

            let combine = |c: &[u32]| -> FpVector {
                let mut img = vec![0; tcell.cycles.ambient()];
                for (ci, v) in c.iter().zip(&vals).take(nreps) {
                    if *ci != 0 {
                        f.axpy(&mut img, *ci, v);
                    }
                }
                img
            };
            for rel in solver.relations() {
                let img = combine(rel);
                if !tcell.boundaries.contains(&img) {
                    return Err(Error::Inconsistent(format!(
                        "d_{r} is not well defined on E_{r}^{{{k},{l}}}: a relation maps to {}",
                        ctx.render(&SsElement { k: tk, l: tl, coords: img })
                    )));
                }
            }
            let mut images = Vec::with_capacity(cell.dim());
            let mut cols = Vec::with_capacity(cell.dim());
            for q in cell.basis() {
                let c = solver.express(q).expect("basis representatives are cycles");
                let img = tcell.boundaries.reduce(&combine(&c));
                let col = tcell.class_coords(&img).ok_or_else(|| {
                    Error::Inconsistent(format!(
                        "d_{r} image {} does not survive to E_{r}",
                        ctx.render(&SsElement { k: tk, l: tl, coords: img.clone() })
                    ))
                })?;
                if tl == 0 {
                    let e = SsElement { k: tk, l: 0, coords: img.clone() };
                    if !ctx.bottom_row_allows(&e, &tcell.boundaries)? {
                        return Err(Error::Inconsistent(format!(
                            "derived value d_{r} = {} is not allowed in the bottom row ({:?})",
                            ctx.render(&e),
                            ctx.policy()
                        )));
                    }
                }
                images.push(img);
                cols.push(col);
            }
            let matrix = FpMatrix::from_columns(f, tcell.dim(), &cols)?;
            maps.insert((k, l), CellMap { matrix, images, defaulted: free.dim() });
        }
    }

    for (&(k, l), m) in &maps {
        if let Some(next) = maps.get(&(k + r, (l + 1).wrapping_sub(r))) {
            if !next.matrix.mul(&m.matrix)?.is_zero() {
                return Err(Error::Inconsistent(format!("d_{r} ∘ d_{r} ≠ 0 starting at ({k}, {l})")));
            }
        }
    }
    out.differential = Some(Differential { page: r, maps });
    out.valid_through = vt - r;
    Ok(out)
}

/// E_{r+1} = ker d_r / im d_r. A page without a differential turns by the
/// zero map.
pub fn turn_page(page: &SSPage) -> Result<SSPage> {
    let ctx = page.ctx.clone();
    let f = ctx.field();
    let r = page.r;
    let empty = Differential { page: r, maps: BTreeMap::new() };
    let d = page.differential.as_ref().unwrap_or(&empty);
    let mut cells = page.cells.clone();
    let mut record = Vec::new();
    for (k, col) in page.cells.iter().enumerate() {
        for (l, cell) in col.iter().enumerate() {
            let (k, l) = (k as u32, l as u32);
            let mut cycles = cell.cycles.clone();
            let mut boundaries = cell.boundaries.clone();
            let mut rank = 0;
            let mut defaulted = 0;
            if let Some(m) = d.maps.get(&(k, l)) {
                rank = m.matrix.rank();
                defaulted = m.defaulted;
                let mut z = cell.boundaries.clone();
                for c in m.matrix.kernel_basis() {
                    let mut v = vec![0; cell.cycles.ambient()];
                    for (ci, q) in c.iter().zip(cell.basis()) {
                        f.axpy(&mut v, *ci, q);
                    }
                    z.insert(&v);
                }
                cycles = z;
            }
            if k >= r && l + r - 1 <= 4 {
                if let Some(m) = d.maps.get(&(k - r, l + r - 1)) {
                    for img in &m.images {
                        boundaries.insert(img);
                    }
                }
            }
            if !cycles.contains_subspace(&boundaries) {
                return Err(Error::Inconsistent(format!("boundaries escape the cycles at ({k}, {l})")));
            }
            if k <= page.valid_through {
                record.push(CellRecord { k, l, dim: cell.dim(), rank, defaulted });
            }
            cells[k as usize][l as usize] = Cell::new(cycles, boundaries);
        }
    }
    let mut history = page.history.clone();
    history.push(PageRecord { page: r, cells: record });
    Ok(SSPage { ctx, r: r + 1, cells, valid_through: page.valid_through, differential: None, history })
}

fn spec_for(specs: &[DifferentialSpec], r: u32) -> Result<Option<&DifferentialSpec>> {
    let mut found = specs.iter().filter(|s| s.page == r);
    let first = found.next();
    if found.next().is_some() {
        return Err(Error::Differential(format!("more than one spec for d_{r}")));
    }
    Ok(first)
}

/// Every page E_2..E_6 of a run, each carrying its own differential
/// (E_6 = E_∞ carries none).
pub fn run_schedule_pages(start: SSPage, specs: &[DifferentialSpec]) -> Result<Vec<SSPage>> {
    if let Some(s) = specs.iter().find(|s| !(2..=LAST_PAGE).contains(&s.page)) {
        return Err(Error::Differential(format!("page {} is outside 2..={LAST_PAGE}", s.page)));
    }
    let mut pages = Vec::new();
    let mut page = start;
    while page.r <= LAST_PAGE {
        let zero = DifferentialSpec::zero(page.r);
        let spec = spec_for(specs, page.r)?.unwrap_or(&zero);
        let with_d = leibniz_extend(&page, spec)?;
        page = turn_page(&with_d)?;
        pages.push(with_d);
    }
    pages.push(page);
    Ok(pages)
}

/// Run d_2..d_5 and return E_6 = E_∞.
pub fn run_schedule(
    g: &GroupSpec,
    fiber: FiberAlgebra,
    specs: &[DifferentialSpec],
    cutoff: u32,
    policy: BottomRowPolicy,
) -> Result<SSPage> {
    let start = build_e2(g, fiber, cutoff, policy)?;
    let mut pages = run_schedule_pages(start, specs)?;
    Ok(pages.pop().expect("at least one page"))
}

/// Whether dim E_3^{2,1} = dim E_3^{2,3}.
pub fn sikora_constraint_check(page: &SSPage) -> Result<bool> {
    if page.r != 3 {
        return Err(Error::Differential(format!("expected E_3, got E_{}", page.r)));
    }
    Ok(page.dim(2, 1)? == page.dim(2, 3)?)
}
