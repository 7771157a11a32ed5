use serde::{Deserialize, Serialize};

use super::formulas::conditional_variance_minimum;
use super::source::SourceParams;

/// Which entanglement criteria a source satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    /// `v_plus_x + v_minus_y < 2`.
    pub nonseparable: bool,
    /// Both conjugate correlation channels below shot noise.
    pub squeezed_state_entangled: bool,
    /// Product of the optimal-gain conditional variances below 1.
    pub epr_paradox: bool,
    pub epr_product: f64,
    pub sum_criterion_value: f64,
}

pub fn entanglement_checks(params: &SourceParams) -> CriteriaReport {
    let sum = params.v_plus_x() + params.v_minus_y();
    // SourceParams guarantees positive variances.
    let cond_x = conditional_variance_minimum(params.v_plus_x(), params.v_minus_x()).expect("validated source");
    let cond_y = conditional_variance_minimum(params.v_minus_y(), params.v_plus_y()).expect("validated source");
    let epr_product = cond_x * cond_y;
    CriteriaReport {
        nonseparable: sum < 2.0,
        squeezed_state_entangled: params.v_plus_x() < 1.0 && params.v_minus_y() < 1.0,
        epr_paradox: epr_product < 1.0,
        epr_product,
        sum_criterion_value: sum,
    }
}
