#!/usr/bin/env python3
"""Generate the synthetic JHU-layout fixtures under data/.

The files mimic the layout of the JHU CSSE
time_series_covid19_confirmed_global.csv table (province rows, quoted
country names, M/D/YY date columns). The numbers are NOT the published
JHU counts: each country follows a monotone curve through a handful of
rounded anchor totals, with multiplicative noise and a weekday
reporting rhythm on the daily increments. A few rows carry reporting
artefacts (a downward correction, an interior zero) so the ingestion
warnings get exercised.

Usage: make_synthetic_snapshot.py OUT_DIR
Writes synthetic_confirmed_global_2020-05-04.csv, ..._2020-05-12.csv,
..._2020-05-20.csv (all prefixes of the same generated table).
"""

import csv
import datetime as dt
import sys
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

SEED = 20200504
FIRST = dt.date(2020, 1, 22)
LAST = dt.date(2020, 5, 20)
CUTOFFS = [dt.date(2020, 5, 4), dt.date(2020, 5, 12), dt.date(2020, 5, 20)]


def d(m, day):
    return dt.date(2020, m, day)


# country -> (lat, long, noise sigma, anchors[(date, cumulative)])
COUNTRIES = {
    "Sweden": (63.0, 16.0, 0.22, [
        (d(1, 31), 1), (d(2, 25), 1.4), (d(3, 5), 94), (d(3, 15), 1000),
        (d(4, 1), 4950), (d(4, 15), 11900), (d(5, 4), 22700),
        (d(5, 5), 23216), (d(5, 7), 24623), (d(5, 11), 26670),
        (d(5, 13), 27909), (d(5, 15), 29207), (d(5, 19), 30799),
        (d(5, 20), 31500)]),
    "Denmark": (56.26, 9.50, 0.25, [
        (d(2, 27), 1), (d(3, 10), 260), (d(3, 15), 860), (d(4, 1), 3100),
        (d(4, 15), 6700), (d(5, 4), 9700), (d(5, 12), 10700),
        (d(5, 20), 11200)]),
    "Finland": (64.0, 26.0, 0.25, [
        (d(1, 29), 1), (d(2, 25), 1.5), (d(3, 5), 12), (d(3, 15), 240),
        (d(4, 1), 1450), (d(4, 15), 3200), (d(5, 4), 5330),
        (d(5, 12), 5960), (d(5, 20), 6400)]),
    "Norway": (60.47, 8.47, 0.2, [
        (d(2, 26), 1), (d(3, 10), 400), (d(3, 15), 1250), (d(4, 1), 4660),
        (d(4, 15), 6700), (d(5, 4), 7850), (d(5, 12), 8100),
        (d(5, 20), 8270)]),
    "France": (46.23, 2.21, 0.35, [
        (d(1, 24), 2), (d(2, 12), 11), (d(2, 25), 14), (d(3, 8), 1200),
        (d(3, 15), 5400), (d(4, 1), 57000), (d(4, 15), 134000),
        (d(5, 4), 169000), (d(5, 12), 178000), (d(5, 20), 181000)]),
    "Italy": (41.87, 12.57, 0.12, [
        (d(1, 31), 2), (d(2, 20), 3), (d(2, 23), 155), (d(3, 1), 1700),
        (d(3, 15), 24700), (d(4, 1), 110500), (d(4, 15), 165000),
        (d(5, 4), 211900), (d(5, 12), 221200), (d(5, 20), 227400)]),
    "Spain": (40.46, -3.75, 0.2, [
        (d(2, 1), 1), (d(2, 24), 2), (d(3, 1), 84), (d(3, 8), 670),
        (d(3, 15), 7800), (d(4, 1), 104000), (d(4, 15), 177000),
        (d(5, 4), 218000), (d(5, 12), 228000), (d(5, 20), 232600)]),
    "United Kingdom": (55.38, -3.44, 0.18, [
        (d(1, 31), 2), (d(2, 20), 9), (d(3, 1), 36), (d(3, 15), 1400),
        (d(4, 1), 30000), (d(4, 15), 99000), (d(5, 4), 191000),
        (d(5, 12), 227000), (d(5, 20), 250000)]),
    "China": (30.97, 112.27, 0.3, [
        (d(1, 22), 548), (d(1, 31), 9800), (d(2, 10), 42700),
        (d(2, 13), 60000), (d(2, 20), 75600), (d(3, 1), 80000),
        (d(3, 15), 81000), (d(4, 1), 82300), (d(4, 17), 83760),
        (d(5, 4), 83970), (d(5, 12), 84010), (d(5, 20), 84060)]),
    "India": (20.59, 78.96, 0.2, [
        (d(1, 30), 1), (d(2, 20), 3), (d(3, 1), 3.5), (d(3, 15), 110),
        (d(4, 1), 1998), (d(4, 15), 12000), (d(5, 4), 46400),
        (d(5, 12), 74300), (d(5, 20), 112000)]),
    "Iran": (32.43, 53.69, 0.1, [
        (d(2, 19), 2), (d(3, 1), 980), (d(3, 15), 13900), (d(4, 1), 47600),
        (d(4, 15), 76400), (d(5, 4), 98600), (d(5, 12), 110700),
        (d(5, 20), 126900)]),
    "US": (40.0, -100.0, 0.12, [
        (d(1, 22), 1), (d(2, 1), 8), (d(3, 1), 75), (d(3, 10), 1000),
        (d(3, 20), 19000), (d(4, 1), 214000), (d(4, 15), 636000),
        (d(5, 4), 1180000), (d(5, 12), 1370000), (d(5, 20), 1550000)]),
    # distractors, not part of the default country list
    "Germany": (51.17, 10.45, 0.2, [
        (d(1, 27), 1), (d(2, 25), 17), (d(3, 15), 5800), (d(4, 1), 77900),
        (d(4, 15), 134700), (d(5, 4), 166100), (d(5, 20), 178500)]),
    "Korea, South": (35.91, 127.77, 0.15, [
        (d(1, 22), 1), (d(2, 18), 31), (d(3, 1), 3700), (d(3, 15), 8160),
        (d(4, 1), 9900), (d(5, 4), 10800), (d(5, 20), 11100)]),
    "Canada": (56.13, -106.35, 0.2, [
        (d(1, 26), 1), (d(3, 1), 24), (d(3, 15), 250), (d(4, 1), 9500),
        (d(4, 15), 28000), (d(5, 4), 61000), (d(5, 20), 80000)]),
    "Ecuador": (-1.83, -78.18, 0.4, [
        (d(3, 1), 6), (d(3, 15), 37), (d(4, 1), 2800), (d(4, 15), 7900),
        (d(5, 4), 31800), (d(5, 20), 34500)]),
}

# country -> [(province, lat, long, share of increments, first date)]
# the empty-province row takes the remaining share
PROVINCES = {
    "China": [
        ("Hubei", 30.9756, 112.2707, 0.81, d(1, 22)),
        ("Guangdong", 23.3417, 113.4244, 0.019, d(1, 22)),
        ("Henan", 33.882, 113.614, 0.0152, d(1, 22)),
        ("Zhejiang", 29.1832, 120.0934, 0.0152, d(1, 22)),
        ("Hunan", 27.6104, 111.7088, 0.0122, d(1, 22)),
        ("Beijing", 40.1824, 116.4142, 0.0070, d(1, 22)),
        ("Shanghai", 31.202, 121.4491, 0.0080, d(1, 22)),
        ("Hong Kong", 22.3, 114.2, 0.0124, d(1, 23)),
    ],
    "United Kingdom": [
        ("Bermuda", 32.3078, -64.7505, 0.0006, d(3, 18)),
        ("Cayman Islands", 19.3133, -81.2546, 0.0004, d(3, 13)),
        ("Gibraltar", 36.1408, -5.3536, 0.0007, d(3, 3)),
        ("Isle of Man", 54.2361, -4.5481, 0.0016, d(3, 19)),
    ],
    "France": [
        ("French Guiana", 3.9339, -53.1258, 0.0006, d(3, 1)),
        ("Guadeloupe", 16.25, -61.5833, 0.0009, d(3, 13)),
        ("Martinique", 14.6415, -61.0242, 0.0011, d(3, 6)),
        ("Reunion", -21.1151, 55.5364, 0.0025, d(3, 11)),
        ("Mayotte", -12.8275, 45.166, 0.0040, d(3, 14)),
    ],
    "Denmark": [
        ("Faroe Islands", 61.8926, -6.9118, 0.018, d(3, 4)),
        ("Greenland", 71.7069, -42.6043, 0.0012, d(3, 16)),
    ],
    "Canada": [
        ("Alberta", 53.9333, -116.5765, 0.09, d(3, 5)),
        ("British Columbia", 53.7267, -127.6476, 0.04, d(1, 28)),
        ("Ontario", 51.2538, -85.3232, 0.30, d(1, 26)),
    ],
}

WEEKDAY = np.array([1.10, 1.08, 1.06, 1.10, 1.04, 0.86, 0.76])  # Mon..Sun


def dates():
    n = (LAST - FIRST).days + 1
    return [FIRST + dt.timedelta(days=i) for i in range(n)]


def smooth_curve(anchors, days):
    x = np.array([(a - FIRST).days for a, _ in anchors], dtype=float)
    y = np.log(np.array([v for _, v in anchors], dtype=float))
    f = PchipInterpolator(x, y, extrapolate=False)
    t = np.arange(len(days), dtype=float)
    out = np.zeros(len(days))
    inside = (t >= x[0]) & (t <= x[-1])
    out[inside] = np.exp(f(t[inside]))
    out[t > x[-1]] = np.exp(y[-1])
    return out


def noisy_cumulative(curve, sigma, days, rng):
    inc = np.diff(np.concatenate([[0.0], curve]))
    inc = np.maximum(inc, 0.0)
    wd = np.array([WEEKDAY[day.weekday()] for day in days])
    noise = np.exp(sigma * rng.standard_normal(len(days)) - 0.5 * sigma**2)
    first = int(np.argmax(curve > 0))
    noisy = inc * noise * wd
    # reporting backlog: the deviation from the smooth curve decays, so
    # the cumulative count keeps tracking the anchors
    backlog = np.zeros(len(days))
    for t in range(first + 1, len(days)):
        backlog[t] = 0.6 * backlog[t - 1] + (noisy[t] - inc[t])
    total = np.maximum.accumulate(np.round(curve + backlog))
    return total.astype(np.int64)


def split_rows(country, total, days, rng):
    provs = PROVINCES.get(country)
    if not provs:
        return [("", total)]
    inc = np.diff(np.concatenate([[0], total]))
    rows = []
    remaining = inc.copy()
    taken = 0.0
    for name, _, _, share, start in provs:
        mask = np.array([day >= start for day in days])
        p = min(1.0, share / (1.0 - taken))
        taken += share
        part = rng.binomial(np.maximum(remaining, 0) * mask, p)
        # negative increments (corrections) stay with the main row
        remaining = remaining - part
        rows.append((name, np.cumsum(part)))
    if country != "China":
        rows.append(("", np.cumsum(remaining)))
    else:
        # China has no empty-province row in the JHU layout; fold the rest
        # into Hubei
        name, hubei = rows[0]
        rows[0] = (name, hubei + np.cumsum(remaining))
    return rows


def main():
    out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)
    days = dates()
    table = []
    for country, (lat, lon, sigma, anchors) in COUNTRIES.items():
        curve = smooth_curve(anchors, days)
        total = noisy_cumulative(curve, sigma, days, rng)
        if country == "Ecuador":
            # bulk reclassification: a one-day drop in the cumulative count
            i = (d(4, 28) - FIRST).days
            total[i:] -= 2000
        rows = split_rows(country, total, days, rng)
        meta = {p[0]: (p[1], p[2]) for p in PROVINCES.get(country, [])}
        for prov, counts in rows:
            plat, plon = meta.get(prov, (lat, lon))
            table.append((prov, country, plat, plon, counts))
    # a territory row with an interior zero (reported once, then retracted
    # for a day)
    z = np.zeros(len(days), dtype=np.int64)
    z[(d(3, 20) - FIRST).days:] = 3
    z[(d(3, 27) - FIRST).days] = 0
    table.append(("Saint Pierre and Miquelon", "France", 46.8852, -56.3159, z))
    table.sort(key=lambda r: (r[1], r[0]))

    for cutoff in CUTOFFS:
        n = (cutoff - FIRST).days + 1
        path = out_dir / f"synthetic_confirmed_global_{cutoff.isoformat()}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["Province/State", "Country/Region", "Lat", "Long"]
                       + [f"{x.month}/{x.day}/{x.year % 100}" for x in days[:n]])
            for prov, country, lat, lon, counts in table:
                w.writerow([prov, country, f"{lat:g}", f"{lon:g}"]
                           + [str(int(c)) for c in counts[:n]])
        print(path)


if __name__ == "__main__":
    main()
