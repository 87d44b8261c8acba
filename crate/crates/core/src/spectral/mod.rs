//! The Borel spectral sequence E_2 = H*(G) ⊗ H*(M) ⇒ H*_G(M; F_p) of a
//! homologically trivial action, driven by specified differentials.

mod e2;
mod fiber;
mod page;

pub use e2::{BottomRowPolicy, E2Context, SsElement, TermSpec, COLUMN_MARGIN};
pub use fiber::{FiberAlgebra, FiberClass, ProductRule};
pub use page::{
    build_e2, leibniz_extend, run_schedule, run_schedule_pages, sikora_constraint_check, turn_page, Cell, CellMap,
    CellRecord, Differential, DifferentialSpec, DifferentialSpecData, EntrySpec, PageDump, PageRecord, SSPage,
    LAST_PAGE,
};
