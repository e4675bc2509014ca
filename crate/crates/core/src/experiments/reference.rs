//! Published benchmark values for the E-mini calibration, used to annotate
//! reports and to flag inconsistencies between quoted and tabulated figures.

/// Simulated values of one benchmark column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceColumn {
    pub e_cost_linear: f64,
    pub e_cost_impact: f64,
    pub e_cost_to_twap: f64,
    pub sd_cost_arrival: f64,
    pub sd_cost_to_twap: f64,
    pub e_impact_total: f64,
    pub sd_impact_total: f64,
    pub e_impact_weighted: f64,
    pub sd_impact_weighted: f64,
    pub sample_size: u64,
}

pub const UNCONDITIONAL: ReferenceColumn = ReferenceColumn {
    e_cost_linear: 50_002.0,
    e_cost_impact: 145_641.0,
    e_cost_to_twap: 60_820.0,
    sd_cost_arrival: 2_919_396.0,
    sd_cost_to_twap: 443_427.0,
    e_impact_total: 1.5,
    sd_impact_total: 49.976,
    e_impact_weighted: 11.085,
    sd_impact_weighted: 47.435,
    sample_size: 10_000_000,
};

pub const CONDITIONAL: ReferenceColumn = ReferenceColumn {
    e_cost_linear: 50_013.0,
    e_cost_impact: 143_876.0,
    e_cost_to_twap: 58_331.0,
    sd_cost_arrival: 2_896_045.0,
    sd_cost_to_twap: 248_747.0,
    e_impact_total: 1.433,
    sd_impact_total: 49.97,
    e_impact_weighted: 11.138,
    sd_impact_weighted: 47.681,
    sample_size: 1_000_000,
};

/// Quoted t-statistics at 1000 orders.
pub const TSTAT_LINEAR_NAIVE: f64 = 0.54;
pub const TSTAT_IMPACT_COST_NAIVE: f64 = 1.58;
pub const TSTAT_LINEAR_ENHANCED_UNCONDITIONAL: f64 = 3.57;
pub const TSTAT_LINEAR_ENHANCED_CONDITIONAL: f64 = 7.42;
pub const TSTAT_IMPACT_NAIVE: f64 = 0.95;
pub const TSTAT_IMPACT_WEIGHTED: f64 = 7.32;

/// Orders per t-statistic.
pub const TSTAT_ORDERS: usize = 1000;
