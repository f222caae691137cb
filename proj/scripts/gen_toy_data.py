#!/usr/bin/env python3
"""Synthesizes the hourly series for data/toy: 12 weeks, 2 zones.

Zone A is the big zone with wind, PV and central H2 production. Zone B is
smaller, PV-only, and bans central plants, so its hydrogen either arrives
over the 317-mile corridor or comes from local electrolysis. Week 6 carries a
heat wave (peak power demand), week 9 is becalmed (minimum VRE availability);
the clustering extremes land on those two weeks.

Writes demand.csv and vre.csv next to this script's target directory.
Deterministic: fixed seed, stdlib only.
"""

import csv
import math
import os
import random

WEEKS = 12
HOURS = WEEKS * 168

rng = random.Random(20240317)


def gauss_bump(x, mu, sigma):
    return math.exp(-((x - mu) ** 2) / (2.0 * sigma * sigma))


def build():
    power_a, power_b, h2_a, h2_b = [], [], [], []
    wind_a, pv_a, pv_b = [], [], []

    # weekly modifiers
    season = [1.0 + 0.08 * math.cos(2.0 * math.pi * w / WEEKS) for w in range(WEEKS)]
    windiness = [0.85, 1.05, 0.95, 1.20, 0.75, 1.10, 0.90, 1.00, 0.80, 0.25, 1.15, 0.95]
    clearness = [0.95, 0.85, 1.00, 0.90, 0.80, 1.00, 0.95, 0.75, 0.90, 0.85, 1.00, 0.90]

    for t in range(HOURS):
        w = t // 168
        how = t % 168
        dow = how // 24
        hod = how % 24
        weekend = dow >= 5

        # --- power demand ---
        daily = 0.74 + 0.22 * max(0.0, math.sin(math.pi * (hod - 6.0) / 16.0)) ** 1.2
        daily += 0.22 * gauss_bump(hod, 19.0, 2.1)
        wk = 0.88 if weekend else 1.0
        heat = 1.0
        if w == 6 and dow in (2, 3, 4):
            heat = 1.0 + 0.28 * gauss_bump(hod, 16.5, 3.0)
        a = 1000.0 * season[w] * daily * wk * heat * (1.0 + rng.uniform(-0.02, 0.02))

        daily_b = 0.76 + 0.20 * max(0.0, math.sin(math.pi * (hod - 7.0) / 16.0)) ** 1.2
        daily_b += 0.20 * gauss_bump(hod, 20.0, 2.2)
        heat_b = 1.0 + (heat - 1.0) * 0.7
        b = 450.0 * season[w] * daily_b * wk * heat_b * (1.0 + rng.uniform(-0.02, 0.02))

        power_a.append(a)
        power_b.append(b)

        # --- hydrogen demand (refueling: morning and evening humps) ---
        shape = 0.82 + 0.28 * gauss_bump(hod, 8.0, 2.5) + 0.34 * gauss_bump(hod, 17.0, 3.0)
        wk_h = 0.90 if weekend else 1.0
        h2_a.append(3.0 * shape * wk_h * (1.0 + rng.uniform(-0.01, 0.01)))
        h2_b.append(1.2 * shape * wk_h * (1.0 + rng.uniform(-0.01, 0.01)))

        # --- VRE capacity factors ---
        nightiness = 0.52 + 0.48 * math.sin(2.0 * math.pi * (hod - 1.0) / 24.0 + math.pi)
        gust = 1.0 + 0.22 * math.sin(2.0 * math.pi * t / 31.0) + rng.uniform(-0.06, 0.06)
        cf_w = 0.06 + 0.62 * nightiness * windiness[w] * max(0.2, gust)
        wind_a.append(min(0.95, max(0.01, cf_w)))

        sun = max(0.0, math.sin(math.pi * (hod - 6.0) / 12.0)) ** 1.4
        cloud_a = clearness[w] * (1.0 + rng.uniform(-0.12, 0.05))
        cloud_b = clearness[w] * (1.0 + rng.uniform(-0.12, 0.05))
        pv_a.append(min(1.0, max(0.0, 0.92 * sun * cloud_a)))
        pv_b.append(min(1.0, max(0.0, 0.97 * sun * cloud_b)))

    return power_a, power_b, h2_a, h2_b, wind_a, pv_a, pv_b


def write(path, header, cols):
    with open(path, "w", newline="") as f:
        out = csv.writer(f)
        out.writerow(header)
        for i in range(len(cols[0])):
            out.writerow([f"{c[i]:.6f}" for c in cols])


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    target = os.path.join(here, "..", "data", "toy")
    os.makedirs(target, exist_ok=True)
    power_a, power_b, h2_a, h2_b, wind_a, pv_a, pv_b = build()
    write(os.path.join(target, "demand.csv"),
          ["power_z1", "power_z2", "h2_z1", "h2_z2"],
          [power_a, power_b, h2_a, h2_b])
    write(os.path.join(target, "vre.csv"),
          ["wind_a", "pv_a", "pv_b"],
          [wind_a, pv_a, pv_b])
    print(f"wrote {HOURS} hours to {os.path.normpath(target)}")
    print(f"  power A mean {sum(power_a)/HOURS:.1f} MW peak {max(power_a):.1f} MW")
    print(f"  power B mean {sum(power_b)/HOURS:.1f} MW peak {max(power_b):.1f} MW")
    print(f"  h2 A+B mean {(sum(h2_a)+sum(h2_b))/HOURS:.2f} t/h")
    print(f"  wind CF {sum(wind_a)/HOURS:.3f}  pv_a CF {sum(pv_a)/HOURS:.3f}  pv_b CF {sum(pv_b)/HOURS:.3f}")
    wkcf = [sum(wind_a[w*168:(w+1)*168]) / 168 for w in range(WEEKS)]
    print(f"  calmest week {min(range(WEEKS), key=lambda w: wkcf[w])} CF {min(wkcf):.3f}")


if __name__ == "__main__":
    main()
