//! Built-in test corpus, experiment driver and file emitters.

pub mod builtins;
pub mod emit;
pub mod experiment;
pub mod expr;

pub use builtins::{builtin_f, builtin_g, target_for, FunctionId};
pub use emit::{emit_rows, emit_svg_curves, rows_to_csv, rows_to_json, Curve, OutputFormat};
pub use experiment::{run_error_table, ErrorReportRow, Experiment, RowStatus};
