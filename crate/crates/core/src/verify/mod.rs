//! Independent verification: a brute-force quadrature oracle, closed-form
//! evaluators for the Beta and normal weights, the randomized inequality
//! battery, and the Beta(1/2, 1/2) reference table with its errata.

pub mod battery;
pub mod closed;
pub mod erratum;
pub mod oracle;
pub mod table1;

pub use battery::{random_function, run_battery, BatteryConfig, BatterySummary, CheckSummary};
pub use closed::{beta_nu_closed, beta_nu_table_convention, normal_nu_closed};
pub use erratum::{erratum_report, ErratumFinding};
pub use table1::{table1, Table1Row};
