//! The tower `F_p ⊂ F_q ⊂ F_{q^n}`: generic field arithmetic, Frobenius,
//! traces, multiplicative orders and small-field discrete logs.

mod ctx;
mod ext;
mod field;

pub use ctx::{make_ctx, CtxManifest, DlogTable, FieldCtx, FieldElem, DLOG_CAP};
pub use ext::ExtField;
pub use field::{Field, SmallField, SMALL_FIELD_CAP};
