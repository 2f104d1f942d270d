//! Latency and resource comparison against a microcontroller baseline.
//!
//! Baseline numbers come from a cost model, not an emulator; FPGA numbers
//! come from a measured [`CycleLedger`](crate::hw::CycleLedger).

mod compare;
mod resources;

pub use compare::{
    baseline_estimate, compare_report, payload_bits, ComparisonReport, CostModel, PayloadField, PayloadReport,
    Scenario, ScenarioRow, FPGA_WALSH_CALC_CYCLES, REFERENCE_PAYLOAD_BITS,
};
pub use resources::{resource_estimate, sid_resource_estimate, DeviceCapacity, ResourceModel, ResourceReport};
