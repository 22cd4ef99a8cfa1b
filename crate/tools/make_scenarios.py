#!/usr/bin/env python3
"""Generate the bundled synthetic scenarios under scenarios/.

Every series written here is synthetic: weather loosely shaped like a clear
January day in San Francisco, building loads built from per-house and
per-building daily shapes, and commute traffic with morning and evening
peaks. None of it is measured data.

Run from the repository root:  python3 tools/make_scenarios.py
"""

import math
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "scenarios"
SERIES = ROOT / "series"
FEEDERS = ROOT / "feeders"
HEADER = "# synthetic data generated by tools/make_scenarios.py\n"

DAY = 86400.0
DT = 60.0
STEP_5MIN = 300.0

# road: (name, from, to, length m, capacity veh/h, design speed m/s, a1, a2, a3, kappa, C_c, c_pkt)
ROADS = [
    ("road1", "res1", "res2", 3000.0, 350.0, 30.0, 1.0, 1.88, 4.85, 0.03, 80.0, 10.0),
    ("road2", "res2", "res1", 3000.0, 350.0, 30.0, 1.0, 1.88, 4.85, 0.03, 80.0, 10.0),
    ("road3", "res1", "com", 8000.0, 1100.0, 60.0, 1.0, 1.88, 7.0, 0.02, 300.0, 19.0),
    ("road4", "com", "res1", 8000.0, 1100.0, 60.0, 1.0, 1.88, 7.0, 0.02, 300.0, 19.0),
    ("road5", "res2", "com", 10000.0, 800.0, 56.0, 1.4, 1.88, 6.97, 0.035, 350.0, 24.0),
    ("road6", "com", "res2", 10000.0, 800.0, 56.0, 1.4, 1.88, 6.97, 0.035, 350.0, 24.0),
]

MORNING = 8.0 * 3600.0
EVENING = 18.0 * 3600.0
PEAK_WIDTH = 0.4 * 3600.0


def bump(t, centre, width):
    return math.exp(-0.5 * ((t - centre) / width) ** 2)


def departures(name, t):
    """Vehicles/h entering each road. Every outbound trip has a matching
    return trip, so each block ends the day with the vehicles it started with."""
    if name == "road1":
        return 20.0 + 60.0 * bump(t, MORNING, 3600.0) + 45.0 * bump(t, EVENING, 3600.0)
    if name == "road2":
        return 20.0 + 45.0 * bump(t, MORNING, 3600.0) + 60.0 * bump(t, EVENING, 3600.0)
    if name == "road3":
        return 10.0 + 560.0 * bump(t, MORNING, PEAK_WIDTH)
    if name == "road4":
        return 10.0 + 560.0 * bump(t, EVENING, PEAK_WIDTH)
    if name == "road5":
        return 10.0 + 380.0 * bump(t, MORNING, PEAK_WIDTH)
    if name == "road6":
        return 10.0 + 380.0 * bump(t, EVENING, PEAK_WIDTH)
    raise KeyError(name)


def hourly(shape, t):
    """Linear interpolation in a 24-value hourly shape, wrapping at midnight."""
    h = (t / 3600.0) % 24.0
    i = int(h)
    f = h - i
    return shape[i] * (1 - f) + shape[(i + 1) % 24] * f


# kW per house
HOUSE = [0.62, 0.58, 0.56, 0.55, 0.56, 0.62, 0.85, 1.30, 1.20, 1.00, 0.98, 1.00,
         1.02, 1.00, 1.00, 1.05, 1.20, 1.50, 1.75, 1.80, 1.70, 1.45, 1.10, 0.80]
OFFICE = [150, 150, 150, 150, 150, 170, 250, 400, 560, 600, 600, 600,
          600, 600, 600, 600, 580, 480, 320, 220, 180, 160, 150, 150]
MALL = [30, 30, 30, 30, 30, 30, 40, 60, 100, 150, 150, 150,
        150, 150, 150, 150, 150, 150, 150, 150, 140, 100, 50, 30]
RESTAURANT = [20, 20, 20, 20, 20, 20, 30, 50, 60, 70, 90, 100,
              100, 100, 90, 80, 90, 100, 100, 100, 100, 80, 40, 20]

# hourly probability that a parked vehicle charges
P_RES = [0.045, 0.040, 0.030, 0.020, 0.015, 0.012, 0.010, 0.010, 0.010, 0.010, 0.010, 0.010,
         0.010, 0.010, 0.010, 0.010, 0.012, 0.020, 0.030, 0.040, 0.048, 0.055, 0.060, 0.050]
P_COM = [0.005, 0.005, 0.005, 0.005, 0.005, 0.005, 0.008, 0.015, 0.030, 0.040, 0.040, 0.040,
         0.040, 0.040, 0.040, 0.040, 0.035, 0.025, 0.015, 0.010, 0.008, 0.006, 0.005, 0.005]

SUNRISE = 7.4 * 3600.0
DAYLIGHT = 9.7 * 3600.0
WIND = [4.2, 4.0, 3.8, 3.6, 3.5, 3.4, 3.4, 3.5, 3.7, 4.0, 4.3, 4.6,
        4.9, 5.1, 5.3, 5.4, 5.3, 5.1, 4.9, 4.7, 4.6, 4.5, 4.4, 4.3]


def sun(t):
    return math.sin(math.pi * (t - SUNRISE) / DAYLIGHT)


def weather(t):
    s = sun(t)
    up = s > 0.0
    return {
        "direct_normal": 650.0 * math.sqrt(s) if up else 0.0,
        "sky_diffuse": 90.0 * s if up else 0.0,
        "ground_diffuse": 20.0 * s if up else 0.0,
        # below the horizon the incidence cosine goes negative
        "cos_incidence": max(-0.3, 0.95 * s),
        "wind_speed": hourly(WIND, t),
    }


BUILDING = {
    "res1": lambda t: 600 * hourly(HOUSE, t) * 1000.0,
    "res2": lambda t: 700 * hourly(HOUSE, t) * 1000.0,
    "com": lambda t: 5 * (hourly(OFFICE, t) + hourly(MALL, t) + hourly(RESTAURANT, t)) * 1000.0,
}
PROBABILITY = {"res1": P_RES, "res2": P_RES, "com": P_COM}

BLOCKS = [
    # name, pv area, active fraction, battery kWh, max discharge kW, discharge threshold kW, initial EVs
    ("res1", 20000.0, 0.15, 4000.0, 250.0, 1150.0, 800.0),
    ("res2", 30000.0, 0.12, 5000.0, 300.0, 1350.0, 800.0),
    ("com", 50000.0, 0.20, 6000.0, 400.0, 3500.0, 200.0),
]
P_CHAR = 7000.0


def grid(step):
    n = int(round(DAY / step))
    return [k * step for k in range(n + 1)]


def fmt(x):
    return repr(float(x))


def write_series(name, times, fn):
    path = SERIES / name
    with path.open("w", newline="\n") as f:
        f.write(HEADER)
        f.write("time_s,value\n")
        for t in times:
            f.write(f"{fmt(t)},{fmt(fn(t))}\n")
    return f"series/{name}"


def prescribed(block):
    """EV charging power and tower throughput of a block when travel time is
    neglected: vehicles jump from origin to destination parking and roads
    hold only their free-flow content."""
    n = dict((b[0], b[6]) for b in BLOCKS)
    ev = {}
    throughput = {}
    for t in grid(DT):
        ev[t] = P_CHAR * hourly(PROBABILITY[block], t) * n[block]
        q = 0.0
        for r in ROADS:
            if r[1] == block:
                free = r[6] * r[5]
                q += r[11] * departures(r[0], t) * (r[3] / free) / 3600.0
        throughput[t] = q
        for r in ROADS:
            rate = departures(r[0], t) * DT / 3600.0
            n[r[1]] -= rate
            n[r[2]] += rate
    return ev, throughput


FEEDER = """# Synthetic 16-bus radial feeder shaped like the IEEE 16-node test system:
# bus 1 is the grid connection, buses 2 and 3 head two of the three
# feeders, buses 4-16 carry loads. Impedances and ratings are synthetic.
nominal_voltage_v = 12470.0
slack = "1"

buses = [
  { id = "1" },
  { id = "2" },
  { id = "3" },
  { id = "4", kind = "building" },
  { id = "5", kind = "building" },
  { id = "6", kind = "ev" },
  { id = "7", kind = "building" },
  { id = "8", kind = "generation" },
  { id = "9", kind = "building" },
  { id = "10", kind = "ev" },
  { id = "11", kind = "building" },
  { id = "12", kind = "storage" },
  { id = "13", kind = "comm" },
  { id = "14", kind = "building" },
  { id = "15", kind = "ev" },
  { id = "16", kind = "general" },
]

lines = [
  { from = "1", to = "4", r_ohm = 1.87, x_ohm = 2.46, limit_w = 2.0e6 },
  { from = "4", to = "5", r_ohm = 2.72, x_ohm = 3.23, limit_w = 1.2e6 },
  { from = "4", to = "6", r_ohm = 2.04, x_ohm = 2.21, limit_w = 0.6e6 },
  { from = "6", to = "7", r_ohm = 2.98, x_ohm = 2.89, limit_w = 0.9e6 },
  { from = "1", to = "2", r_ohm = 0.68, x_ohm = 0.94, limit_w = 2.5e6 },
  { from = "2", to = "8", r_ohm = 1.87, x_ohm = 2.46, limit_w = 1.5e6 },
  { from = "8", to = "9", r_ohm = 2.29, x_ohm = 2.72, limit_w = 1.2e6 },
  { from = "8", to = "10", r_ohm = 2.63, x_ohm = 2.38, limit_w = 0.6e6 },
  { from = "9", to = "11", r_ohm = 2.80, x_ohm = 2.98, limit_w = 0.9e6 },
  { from = "9", to = "12", r_ohm = 2.12, x_ohm = 2.21, limit_w = 0.6e6 },
  { from = "1", to = "3", r_ohm = 0.68, x_ohm = 0.94, limit_w = 2.5e6 },
  { from = "3", to = "13", r_ohm = 1.87, x_ohm = 2.46, limit_w = 1.5e6 },
  { from = "13", to = "14", r_ohm = 2.72, x_ohm = 2.98, limit_w = 1.2e6 },
  { from = "13", to = "15", r_ohm = 2.46, x_ohm = 2.38, limit_w = 0.6e6 },
  { from = "15", to = "16", r_ohm = 2.21, x_ohm = 2.29, limit_w = 0.3e6 },
]
"""


def scenario(name, files):
    out = []
    w = out.append
    w(f"# {name}: three-block community (two residential blocks and a commercial")
    w("# block) joined by six one-way roads. Synthetic inputs; see tools/make_scenarios.py.")
    w(f'name = "{name}"')
    w("sim_start = 0.0")
    w(f"sim_end = {fmt(DAY)}")
    w(f"dt = {fmt(DT)}")
    w("coupling_tolerance = 1e-8")
    w("coupling_max_iters = 50")
    w("# morning and evening commute peaks, s")
    w("commute_windows = [[23400.0, 34200.0], [59400.0, 70200.0]]")
    w("lmp = 0.0")
    w("")
    w("[weather]")
    for key in ["direct_normal", "sky_diffuse", "ground_diffuse", "cos_incidence", "wind_speed"]:
        w(f'{key} = {{ path = "{files["weather_" + key]}", interpolation = "linear" }}')
    for (block, area, active, cap_kwh, dis_kw, thr_kw, n0) in BLOCKS:
        w("")
        w("[[blocks]]")
        w(f'name = "{block}"')
        w(f"initial_ev_count = {fmt(n0)}")
        w(f"ev_charge_power_w = {fmt(P_CHAR)}")
        w(f'charge_probability = {{ path = "{files["p_" + block]}", interpolation = "linear" }}')
        w(f'building_load = {{ path = "{files["building_" + block]}", interpolation = "linear" }}')
        w(f'prescribed_ev_power = {{ path = "{files["ev_" + block]}", interpolation = "linear" }}')
        w(f'prescribed_throughput = {{ path = "{files["thr_" + block]}", interpolation = "linear" }}')
        w('feeder = { path = "feeders/ieee16_synthetic.toml" }')
        w("")
        w(f"[blocks.pv]")
        w(f"arrays = [{{ area_m2 = {fmt(area)}, active_fraction = {active}, efficiency = 0.18, inverter_efficiency = 0.96 }}]")
        w("")
        w("[blocks.wind]")
        w("count = 1")
        w("# 1 MW turbine: cut-in 3 m/s, rated at 12 m/s, cut-out 25 m/s")
        w("curve = [[3.0, 0.0], [4.0, 40000.0], [5.0, 100000.0], [6.0, 190000.0], [7.0, 310000.0], "
          "[8.0, 460000.0], [9.0, 640000.0], [10.0, 820000.0], [11.0, 950000.0], [12.0, 1000000.0], [25.0, 1000000.0]]")
        w("scale = 1.0")
        w("inverter_efficiency = 0.95")
        w("")
        w("[blocks.battery]")
        w(f"capacity_wh = {fmt(cap_kwh * 1000.0)}")
        w(f"max_charge_w = {fmt(dis_kw * 1000.0)}")
        w(f"max_discharge_w = {fmt(dis_kw * 1000.0)}")
        w("charge_threshold_w = 0.0")
        w(f"discharge_threshold_w = {fmt(thr_kw * 1000.0)}")
        w("initial_soc = 0.6")
        w("")
        w("[blocks.comm]")
        w("towers = 2")
        w("e_elec = 0.05")
        w("eps_elec = 1e-6")
        w("distance_m = 500.0")
        w("path_loss_exponent = 2.0")
    for (name_r, a, b, length, cap, us, a1, a2, a3, kappa, cc, cpkt) in ROADS:
        w("")
        w("[[roads]]")
        w(f'name = "{name_r}"')
        w(f'from = "{a}"')
        w(f'to = "{b}"')
        w(f"length_m = {fmt(length)}")
        w(f"capacity_vph = {fmt(cap)}")
        w(f"design_speed_mps = {fmt(us)}")
        w(f"alpha1 = {fmt(a1)}")
        w(f"alpha2 = {fmt(a2)}")
        w(f"alpha3 = {fmt(a3)}")
        w(f'departures = {{ path = "{files["dep_" + name_r]}", interpolation = "linear" }}')
        w(f"comm = {{ kappa = {fmt(kappa)}, threshold_pps = {fmt(cc)}, packets_per_vehicle = {fmt(cpkt)} }}")
    for (lname, a, b) in [("tie_res2", "res1", "res2"), ("tie_com", "res1", "com")]:
        w("")
        w("[[community_lines]]")
        w(f'name = "{lname}"')
        w(f'from = "{a}"')
        w(f'to = "{b}"')
        w("r_ohm = 0.08")
        w("x_ohm = 0.12")
        w("limit_w = 8.0e6")
    return "\n".join(out) + "\n"


def main():
    SERIES.mkdir(parents=True, exist_ok=True)
    FEEDERS.mkdir(parents=True, exist_ok=True)
    hours = grid(3600.0)
    fine = grid(STEP_5MIN)
    files = {}
    for key in ["direct_normal", "sky_diffuse", "ground_diffuse", "cos_incidence", "wind_speed"]:
        step = fine if key != "wind_speed" else hours
        files["weather_" + key] = write_series(f"weather_{key}.csv", step, lambda t, k=key: weather(t)[k])
    for block, *_ in BLOCKS:
        files["building_" + block] = write_series(f"building_{block}.csv", hours, BUILDING[block])
        files["p_" + block] = write_series(
            f"charge_probability_{block}.csv", hours, lambda t, b=block: hourly(PROBABILITY[b], t)
        )
        ev, thr = prescribed(block)
        files["ev_" + block] = write_series(f"prescribed_ev_{block}.csv", grid(DT), lambda t, e=ev: e[t])
        files["thr_" + block] = write_series(f"prescribed_throughput_{block}.csv", grid(DT), lambda t, q=thr: q[t])
    for r in ROADS:
        files["dep_" + r[0]] = write_series(f"departures_{r[0]}.csv", fine, lambda t, n=r[0]: departures(n, t))
    (FEEDERS / "ieee16_synthetic.toml").write_text(FEEDER)
    for case in ["case1", "case2", "case3"]:
        (ROOT / f"{case}.scn").write_text(scenario(case, files))


if __name__ == "__main__":
    main()
