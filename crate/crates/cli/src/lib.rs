//! Command-line front end for orbispec: group files, reports and dispatch.

pub mod app;
pub mod files;

pub use app::run;
