//! Straight-line composition of the module operations for a one-block,
//! one-road scenario, checked against the engine record by record.

use gridmesh_core::comms::{delay_factor, packet_loss, throughput_from_traffic};
use gridmesh_core::energy::{
    battery_step, comm_tower_power, ev_charging_power, grid_draw, pv_irradiance, pv_power, solve_power_flow,
    wind_power, BatteryState, FeederNetwork, WeatherPoint,
};
use gridmesh_core::transport::{charging_count, parking_step, road_step, BlockParking, RoadState};
use gridmesh_core::{ScenarioConfig, TraceSet};

fn close(a: f64, b: f64) -> bool {
    let d = (a - b).abs();
    d <= 1e-9 * a.abs().max(b.abs()) || d <= 1e-12
}

/// Replay the first `steps` steps of an E+T+C run of `cfg` (one block with
/// buses building, ev, comm, generation, storage after the slack, one road)
/// and compare with `trace`. Returns how many steps had packet loss.
pub fn replay(cfg: &ScenarioConfig, trace: &TraceSet, steps: usize) -> Result<usize, String> {
    let b = &cfg.blocks[0];
    let r = &cfg.roads[0];
    let link = r.comm.ok_or("road has no comm parameters")?;
    let net = FeederNetwork::from_spec(&b.feeder).map_err(|e| e.to_string())?;
    let v_nom = b.feeder.nominal_voltage_v;
    let dt = cfg.dt;

    let mut battery = BatteryState::idle(b.battery.initial_soc);
    let mut parking = BlockParking::new(b.initial_ev_count);
    let mut road = RoadState::empty(r, cfg.sim_start);
    let mut lossy = 0;
    for k in 0..steps {
        let t = cfg.sim_start + k as f64 * dt;
        let rec = trace.records.get(k).ok_or("trace too short")?;
        let vehicles = road.vehicles;
        let q_c = throughput_from_traffic(vehicles, link.packets_per_vehicle);
        let gamma = packet_loss(q_c, link.kappa, link.threshold_pps);
        if gamma > 0.0 {
            lossy += 1;
        }
        let q_in = r.departures.evaluate(t);
        let next_road = road_step(&road, q_in, delay_factor(gamma), r, t, dt).map_err(|e| e.to_string())?;

        let n_char = charging_count(parking.n_parked, b.charge_probability.evaluate(t));
        let p_ev = ev_charging_power(n_char, b.ev_charge_power_w);
        let g = pv_irradiance(WeatherPoint {
            direct_normal: cfg.weather.direct_normal.evaluate(t),
            sky_diffuse: cfg.weather.sky_diffuse.evaluate(t),
            ground_diffuse: cfg.weather.ground_diffuse.evaluate(t),
            cos_incidence: cfg.weather.cos_incidence.evaluate(t),
        });
        let p_pv = pv_power(g, &b.pv);
        let p_win = wind_power(cfg.weather.wind_speed.evaluate(t), &b.wind);
        let p_com = comm_tower_power(q_c, &b.comm);
        let p_bui = b.building_load.evaluate(t);
        let next_battery = battery_step(battery, p_pv + p_win, p_bui + p_ev + p_com, &b.battery, dt);

        let injections = [0.0, p_bui, p_ev, p_com, -(p_pv + p_win), next_battery.power];
        let sol = solve_power_flow(&net, &injections, v_nom).map_err(|e| e.to_string())?;

        let blk = &rec.blocks[0];
        let rr = &rec.roads[0];
        let mut pairs = vec![
            ("time", rec.time, t),
            ("soc", blk.soc, battery.soc),
            ("battery_power", blk.battery_power, next_battery.power),
            ("p_pv", blk.p_pv, p_pv),
            ("p_win", blk.p_win, p_win),
            ("p_ev", blk.p_ev, p_ev),
            ("p_com", blk.p_com, p_com),
            ("p_bui", blk.p_bui, p_bui),
            ("n_parked", blk.n_parked, parking.n_parked),
            ("n_char", blk.n_char, n_char),
            ("throughput", blk.throughput, q_c),
            ("grid_power", blk.grid_power, grid_draw(&sol)),
            ("community", rec.community_grid_power, grid_draw(&sol)),
            ("q_in", rr.q_in, q_in),
            ("q_out", rr.q_out, next_road.q_out),
            ("velocity", rr.velocity, next_road.u_ave),
            ("flow", rr.flow, next_road.v_ave),
            ("travel_time", rr.travel_time, next_road.t_travel),
            ("vehicles", rr.vehicles, vehicles),
            ("packet_loss", rr.packet_loss, gamma),
        ];
        for (i, v) in sol.bus_voltages.iter().enumerate() {
            pairs.push(("bus_voltage", rec.bus_voltage[i], v.norm() / v_nom));
        }
        for (i, p) in sol.line_active_power.iter().enumerate() {
            pairs.push(("line_power", rec.line_power[i], *p));
        }
        for (name, engine, script) in pairs {
            if !close(engine, script) {
                return Err(format!("step {k} {name}: engine {engine} vs script {script}"));
            }
        }

        parking = parking_step(parking, &[next_road.q_out], &[q_in], dt);
        battery = next_battery;
        road = next_road;
    }
    Ok(lossy)
}
