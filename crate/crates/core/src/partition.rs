//! Weighted contiguous column partition over compute lanes.
//!
//! Lane 0 is the CPU pool and keeps the `1 - theta` share; device lanes split
//! `theta` in proportion to their capabilities. Column counts are obtained by
//! flooring `weight * total_cols` and handing the leftover columns out by
//! largest remainder, ties to the lowest lane id. Ranges are laid out CPU
//! first, then devices in lane order.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("theta {0} is outside [0, 1]")]
    ThetaOutOfRange(f64),
    #[error("no device capabilities given")]
    EmptyCapabilities,
    #[error("capability {0} must be positive and finite")]
    InvalidCapability(f64),
    #[error("theta {0} > 0 needs at least one device lane")]
    NoDeviceLanes(f64),
    #[error("lane list is malformed: {0}")]
    InvalidLanes(String),
    #[error("{total_cols} columns cannot give every one of {required} lanes a column")]
    TooFewColumns { total_cols: usize, required: usize },
    #[error("bad lane spec `{spec}`: {reason}")]
    LaneSpec { spec: String, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LaneKind {
    /// The shared-memory worker pool (the CPU side).
    CpuPool,
    /// A self-driving lane standing in for one accelerator.
    Device,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaneSpec {
    pub lane_id: usize,
    pub kind: LaneKind,
    /// Relative throughput. Only device capabilities enter the split.
    pub capability: f64,
}

impl LaneSpec {
    pub fn cpu() -> Self {
        LaneSpec {
            lane_id: 0,
            kind: LaneKind::CpuPool,
            capability: 1.0,
        }
    }

    pub fn device(lane_id: usize, capability: f64) -> Self {
        LaneSpec {
            lane_id,
            kind: LaneKind::Device,
            capability,
        }
    }
}

/// A parsed `cpu:<workers>[,dev:<capability>]*` lane description.
#[derive(Clone, Debug, PartialEq)]
pub struct LaneLayout {
    pub cpu_workers: usize,
    pub lanes: Vec<LaneSpec>,
}

impl LaneLayout {
    pub fn cpu_only(workers: usize) -> Self {
        LaneLayout {
            cpu_workers: workers,
            lanes: vec![LaneSpec::cpu()],
        }
    }

    pub fn with_devices(workers: usize, capabilities: &[f64]) -> Self {
        let mut lanes = vec![LaneSpec::cpu()];
        lanes.extend(
            capabilities
                .iter()
                .enumerate()
                .map(|(i, &c)| LaneSpec::device(i + 1, c)),
        );
        LaneLayout {
            cpu_workers: workers,
            lanes,
        }
    }

    pub fn device_capabilities(&self) -> Vec<f64> {
        self.lanes
            .iter()
            .filter(|l| l.kind == LaneKind::Device)
            .map(|l| l.capability)
            .collect()
    }
}

impl fmt::Display for LaneLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cpu:{}", self.cpu_workers)?;
        for cap in self.device_capabilities() {
            write!(f, ",dev:{cap}")?;
        }
        Ok(())
    }
}

impl FromStr for LaneLayout {
    type Err = PartitionError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| PartitionError::LaneSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let mut parts = spec.split(',').map(str::trim);
        let first = parts.next().unwrap_or_default();
        let workers = first
            .strip_prefix("cpu:")
            .ok_or_else(|| fail("must start with cpu:<workers>"))?;
        let cpu_workers: usize = workers.parse().map_err(|_| fail("worker count is not an integer"))?;
        if cpu_workers == 0 {
            return Err(fail("cpu pool needs at least one worker"));
        }
        let mut capabilities = Vec::new();
        for part in parts {
            let cap = part
                .strip_prefix("dev:")
                .ok_or_else(|| fail("lanes after the cpu pool must be dev:<capability>"))?;
            let cap: f64 = cap.parse().map_err(|_| fail("capability is not a number"))?;
            if !(cap.is_finite() && cap > 0.0) {
                return Err(fail("capability must be positive"));
            }
            capabilities.push(cap);
        }
        Ok(LaneLayout::with_devices(cpu_workers, &capabilities))
    }
}

/// `theta_i = theta * capability_i / sum(capability)`.
pub fn split_theta(theta: f64, capabilities: &[f64]) -> Result<Vec<f64>, PartitionError> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(PartitionError::ThetaOutOfRange(theta));
    }
    if capabilities.is_empty() {
        return Err(PartitionError::EmptyCapabilities);
    }
    if let Some(&bad) = capabilities.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
        return Err(PartitionError::InvalidCapability(bad));
    }
    let total: f64 = capabilities.iter().sum();
    Ok(capabilities.iter().map(|c| theta * c / total).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionPlan {
    pub theta: f64,
    pub cpu_weight: f64,
    pub device_weights: Vec<f64>,
    /// Column interval owned by each lane, indexed by lane id.
    pub ranges: Vec<Range<usize>>,
    pub total_cols: usize,
}

impl PartitionPlan {
    /// Weight of every lane in lane order (CPU first).
    pub fn weights(&self) -> Vec<f64> {
        std::iter::once(self.cpu_weight)
            .chain(self.device_weights.iter().copied())
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.ranges.iter().map(|r| r.len()).collect()
    }

    /// Lane owning `col`. Panics if `col >= total_cols`.
    pub fn owner_of(&self, col: usize) -> usize {
        self.ranges
            .iter()
            .position(|r| r.contains(&col))
            .unwrap_or_else(|| panic!("column {col} outside partition of {} columns", self.total_cols))
    }

    pub fn num_lanes(&self) -> usize {
        self.ranges.len()
    }
}

pub fn plan_partition(total_cols: usize, theta: f64, lanes: &[LaneSpec]) -> Result<PartitionPlan, PartitionError> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(PartitionError::ThetaOutOfRange(theta));
    }
    validate_lanes(lanes)?;
    let capabilities: Vec<f64> = lanes[1..].iter().map(|l| l.capability).collect();
    let device_weights = if capabilities.is_empty() {
        if theta > 0.0 {
            return Err(PartitionError::NoDeviceLanes(theta));
        }
        Vec::new()
    } else {
        split_theta(theta, &capabilities)?
    };
    let cpu_weight = 1.0 - theta;
    let weights: Vec<f64> = std::iter::once(cpu_weight)
        .chain(device_weights.iter().copied())
        .collect();

    let n = total_cols as f64;
    let required = weights.iter().filter(|&&w| w * n >= 1.0).count();
    if total_cols < required {
        return Err(PartitionError::TooFewColumns { total_cols, required });
    }

    let exact: Vec<f64> = weights.iter().map(|w| w * n).collect();
    let mut sizes: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let assigned: usize = sizes.iter().sum();
    let mut leftover = total_cols.saturating_sub(assigned);
    // remainders are quantized so that 0.5 and 0.4999999999 tie
    let mut order: Vec<(i64, usize)> = exact
        .iter()
        .enumerate()
        .map(|(lane, e)| (-((e - e.floor()) * 1e9).round() as i64, lane))
        .collect();
    order.sort();
    for &(_, lane) in order.iter().cycle() {
        if leftover == 0 {
            break;
        }
        sizes[lane] += 1;
        leftover -= 1;
    }

    let mut ranges = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for size in sizes {
        ranges.push(start..start + size);
        start += size;
    }
    debug_assert_eq!(start, total_cols);
    Ok(PartitionPlan {
        theta,
        cpu_weight,
        device_weights,
        ranges,
        total_cols,
    })
}

fn validate_lanes(lanes: &[LaneSpec]) -> Result<(), PartitionError> {
    let Some(first) = lanes.first() else {
        return Err(PartitionError::InvalidLanes("no lanes".into()));
    };
    if first.kind != LaneKind::CpuPool {
        return Err(PartitionError::InvalidLanes("lane 0 must be the cpu pool".into()));
    }
    for (i, lane) in lanes.iter().enumerate() {
        if lane.lane_id != i {
            return Err(PartitionError::InvalidLanes(format!(
                "lane ids must be dense from 0, found {} at position {i}",
                lane.lane_id
            )));
        }
        if i > 0 && lane.kind != LaneKind::Device {
            return Err(PartitionError::InvalidLanes("only one cpu pool lane is allowed".into()));
        }
        if !(lane.capability.is_finite() && lane.capability > 0.0) {
            return Err(PartitionError::InvalidCapability(lane.capability));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn devices(caps: &[f64]) -> Vec<LaneSpec> {
        LaneLayout::with_devices(1, caps).lanes
    }

    #[test]
    fn split_matches_two_device_rows() {
        let w = split_theta(0.8, &[0.45, 0.55]).unwrap();
        assert_eq!(format!("{:.3} {:.3}", w[0], w[1]), "0.360 0.440");
        let w = split_theta(1.0, &[0.45, 0.55]).unwrap();
        assert_eq!(format!("{:.3} {:.3}", w[0], w[1]), "0.450 0.550");
        assert_eq!(split_theta(0.0, &[3.0, 1.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn split_rejects_bad_input() {
        assert_eq!(split_theta(1.5, &[1.0]), Err(PartitionError::ThetaOutOfRange(1.5)));
        assert!(matches!(split_theta(f64::NAN, &[1.0]), Err(PartitionError::ThetaOutOfRange(_))));
        assert_eq!(split_theta(0.5, &[]), Err(PartitionError::EmptyCapabilities));
        assert_eq!(split_theta(0.5, &[1.0, 0.0]), Err(PartitionError::InvalidCapability(0.0)));
    }

    #[test]
    fn ten_columns_half_remainders_tie_to_lowest_lane() {
        let plan = plan_partition(10, 1.0, &devices(&[0.45, 0.55])).unwrap();
        assert_eq!(plan.sizes(), vec![0, 5, 5]);
        assert_eq!(plan.ranges, vec![0..0, 0..5, 5..10]);
    }

    #[test]
    fn hundred_columns_divide_exactly() {
        let plan = plan_partition(100, 0.8, &devices(&[0.45, 0.55])).unwrap();
        assert_eq!(plan.sizes(), vec![20, 36, 44]);
    }

    #[test]
    fn seven_columns_one_device() {
        let plan = plan_partition(7, 0.5, &devices(&[1.0])).unwrap();
        assert_eq!(plan.sizes(), vec![4, 3]);
        assert_eq!(plan.owner_of(3), 0);
        assert_eq!(plan.owner_of(4), 1);
    }

    #[test]
    fn theta_zero_keeps_everything_on_cpu() {
        let plan = plan_partition(9, 0.0, &devices(&[1.0, 2.0])).unwrap();
        assert_eq!(plan.sizes(), vec![9, 0, 0]);
        let plan = plan_partition(9, 0.0, &[LaneSpec::cpu()]).unwrap();
        assert_eq!(plan.sizes(), vec![9]);
    }

    #[test]
    fn theta_without_devices_is_rejected() {
        assert_eq!(
            plan_partition(9, 0.3, &[LaneSpec::cpu()]),
            Err(PartitionError::NoDeviceLanes(0.3))
        );
    }

    #[test]
    fn lanes_must_be_dense_with_cpu_first() {
        let lanes = [LaneSpec::device(0, 1.0)];
        assert!(matches!(plan_partition(4, 0.5, &lanes), Err(PartitionError::InvalidLanes(_))));
        let lanes = [LaneSpec::cpu(), LaneSpec::device(2, 1.0)];
        assert!(matches!(plan_partition(4, 0.5, &lanes), Err(PartitionError::InvalidLanes(_))));
    }

    #[test]
    fn lane_spec_grammar() {
        let layout: LaneLayout = "cpu:4,dev:0.45,dev:0.55".parse().unwrap();
        assert_eq!(layout.cpu_workers, 4);
        assert_eq!(layout.device_capabilities(), vec![0.45, 0.55]);
        assert_eq!(layout.lanes[2], LaneSpec::device(2, 0.55));
        assert_eq!(layout.to_string(), "cpu:4,dev:0.45,dev:0.55");
        assert_eq!("cpu:2".parse::<LaneLayout>().unwrap(), LaneLayout::cpu_only(2));
        for bad in ["dev:1", "cpu:0", "cpu:x", "cpu:1,gpu:1", "cpu:1,dev:-1", ""] {
            assert!(bad.parse::<LaneLayout>().is_err(), "{bad}");
        }
    }
}
