//! The PAS chain on one product-code array per ASK stream: frame geometry
//! and feasibility, interleaving, bit placement, demapping, and the frame
//! encoder and decoder.

pub mod demap;
pub mod frame;
pub mod interleaver;
pub mod params;
pub mod record;

pub use demap::{Demapper, DemapperMode, DEFAULT_LLR_CLIP};
pub use frame::{DemapperOutput, PasSystem, Placement, RxFrame, TxFrame};
pub use interleaver::InterleaverMap;
pub use params::{enumerate_feasible, PasParams};
pub use record::FrameRecord;
