//! Communication agent: routing throughput of each road link, packet loss,
//! and the travel-time multiplier that packet loss imposes on the road.
//!
//! Transmission delay is taken as zero and retransmission is not modelled.

/// Routing throughput of a road link, packets/s.
pub fn throughput_from_traffic(vehicles_on_road: f64, packets_per_vehicle: f64) -> f64 {
    packets_per_vehicle * vehicles_on_road
}

/// Packet loss rate in `[0, 1]`: `kappa * sqrt(Q_c - C_c)` above the
/// transmission threshold, zero at or below it.
pub fn packet_loss(throughput: f64, kappa: f64, threshold: f64) -> f64 {
    if throughput <= threshold {
        return 0.0;
    }
    (kappa * libm::sqrt(throughput - threshold)).min(1.0)
}

/// Travel-time multiplier for packet loss rate `gamma`.
pub fn delay_factor(gamma: f64) -> f64 {
    1.0 + gamma
}

/// Per-link communication state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CommState {
    /// Throughput, packets/s.
    pub q_c: f64,
    /// Packet loss rate.
    pub gamma: f64,
    /// Transmission delay, s. Always zero.
    pub del: f64,
}

impl CommState {
    pub fn evaluate(vehicles_on_road: f64, packets_per_vehicle: f64, kappa: f64, threshold: f64) -> Self {
        let q_c = throughput_from_traffic(vehicles_on_road, packets_per_vehicle);
        Self {
            q_c,
            gamma: packet_loss(q_c, kappa, threshold),
            del: 0.0,
        }
    }
}
