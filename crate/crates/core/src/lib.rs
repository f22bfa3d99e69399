//! k-sample mean tests for high-dimensional data with unequal covariances.
//!
//! The crate provides the statistics and their standardized tests
//! ([`stats`]), closed-form asymptotic power and relative efficiency
//! ([`power`]), and the simulation models and Monte Carlo engine used to
//! check them ([`sim`]).
//!
//! ```
//! use hdbf_core::{run_test, GroupedData, Method};
//!
//! let data = GroupedData::from_rows(&[
//!     vec![vec![0.1, 1.0], vec![0.4, -0.2], vec![-0.3, 0.5], vec![1.1, 0.0], vec![0.2, 0.3]],
//!     vec![vec![2.0, 1.5], vec![1.7, 0.9], vec![2.2, 1.1], vec![1.4, 1.8], vec![2.5, 1.0]],
//! ])
//! .unwrap();
//! let result = run_test(&data, Method::T2Hat, 0.05).unwrap();
//! assert!(result.z.is_finite());
//! ```

pub mod data;
pub mod error;
pub mod gram;
pub mod matrix;
pub mod normal;
pub mod power;
pub mod sim;
pub mod stats;

pub use data::{read_csv, read_csv_path, write_csv, GroupedData, SampleMatrix};
pub use error::{Error, Result};
pub use matrix::{trace_product, Matrix};
pub use power::{
    are, are_case_one, are_case_two, are_lower_bound, power_hu, power_proposed, solve_are_roots,
    AreCurve, CovarianceSummary, DesignSpec, PopulationSpec,
};
pub use sim::{
    estimator_bias_study, run_monte_carlo, BiasConfig, BiasStudyResult, Innovation, ModelConfig,
    MonteCarloResult, SimConfig,
};
pub use stats::{
    run_test, run_tests, sigma_hat, sigma_hat_h, statistic_t, statistic_tch, statistic_ts, Method,
    TestResult, VarianceMethod,
};
