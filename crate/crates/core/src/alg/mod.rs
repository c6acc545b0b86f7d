pub mod altform;
pub mod metric;
pub mod tensor;

pub use altform::AltForm;
pub use metric::{Metric, MetricError};
pub use tensor::{einsum, invert, solve_linear, SymTensor2, Tensor, Tensor2, Vector};
