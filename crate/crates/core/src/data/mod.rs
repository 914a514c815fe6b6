//! Raw dataset tables, the two built-in column layouts, and label
//! extraction.

mod schema;
mod table;

pub use schema::{ColumnRole, DatasetKind, DatasetSchema, LabelError, SchemaError};
pub use table::{class_counts, extract_labels, RawTable, TableError};
