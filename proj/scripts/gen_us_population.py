#!/usr/bin/env python3
"""Regenerates data/fig1_population.csv.

Synthetic population density for the contiguous US on a 0.25 degree grid:
a Gaussian splat per metro area from the table below plus a flat rural
background, scaled to 331 million people in total. Deterministic, no RNG.
This is not census data; it only needs realistic mass concentrations.
"""

import math
import os

R_KM = 6371.0
LAT_MIN, LAT_MAX = 24.0, 50.0
LON_MIN, LON_MAX = -125.0, -66.0
STEP = 0.25
TOTAL_POPULATION = 331e6

# name (unused), lat, lon, people in millions
METROS = [
    ("los angeles", 34.05, -118.24, 13.2),
    ("new york", 40.71, -74.01, 19.8),
    ("chicago", 41.88, -87.63, 9.5),
    ("dallas", 32.78, -96.80, 7.6),
    ("houston", 29.76, -95.37, 7.1),
    ("washington", 38.91, -77.04, 6.3),
    ("philadelphia", 39.95, -75.17, 6.2),
    ("miami", 25.76, -80.19, 6.1),
    ("atlanta", 33.75, -84.39, 6.1),
    ("boston", 42.36, -71.06, 4.9),
    ("phoenix", 33.45, -112.07, 4.9),
    ("san francisco", 37.77, -122.42, 4.7),
    ("detroit", 42.33, -83.05, 4.3),
    ("seattle", 47.61, -122.33, 4.0),
    ("minneapolis", 44.98, -93.27, 3.7),
    ("san diego", 32.72, -117.16, 3.3),
    ("tampa", 27.95, -82.46, 3.2),
    ("denver", 39.74, -104.99, 3.0),
    ("st. louis", 38.63, -90.20, 2.8),
    ("baltimore", 39.29, -76.61, 2.8),
    ("charlotte", 35.23, -80.84, 2.7),
    ("orlando", 28.54, -81.38, 2.7),
    ("san antonio", 29.42, -98.49, 2.6),
    ("portland", 45.52, -122.68, 2.5),
    ("sacramento", 38.58, -121.49, 2.4),
    ("pittsburgh", 40.44, -79.99, 2.3),
    ("las vegas", 36.17, -115.14, 2.3),
    ("austin", 30.27, -97.74, 2.3),
    ("cincinnati", 39.10, -84.51, 2.3),
    ("kansas city", 39.10, -94.58, 2.2),
    ("columbus", 39.96, -83.00, 2.1),
    ("indianapolis", 39.77, -86.16, 2.1),
    ("cleveland", 41.50, -81.69, 2.1),
    ("san jose", 37.34, -121.89, 2.0),
    ("nashville", 36.16, -86.78, 2.0),
    ("virginia beach", 36.85, -75.98, 1.8),
    ("providence", 41.82, -71.41, 1.7),
    ("milwaukee", 43.04, -87.91, 1.6),
    ("jacksonville", 30.33, -81.66, 1.6),
    ("oklahoma city", 35.47, -97.52, 1.4),
    ("raleigh", 35.78, -78.64, 1.4),
    ("memphis", 35.15, -90.05, 1.3),
    ("richmond", 37.54, -77.44, 1.3),
    ("new orleans", 29.95, -90.07, 1.3),
    ("louisville", 38.25, -85.76, 1.3),
    ("salt lake city", 40.76, -111.89, 1.3),
    ("hartford", 41.77, -72.67, 1.2),
    ("buffalo", 42.89, -78.88, 1.1),
    ("birmingham", 33.52, -86.80, 1.1),
    ("rochester", 43.16, -77.61, 1.1),
    ("tucson", 32.22, -110.97, 1.0),
    ("fresno", 36.74, -119.78, 1.0),
    ("tulsa", 36.15, -95.99, 1.0),
    ("worcester", 42.26, -71.80, 1.0),
    ("omaha", 41.26, -95.93, 1.0),
    ("greenville", 34.85, -82.40, 0.9),
    ("knoxville", 35.96, -83.92, 0.9),
    ("albuquerque", 35.08, -106.65, 0.9),
    ("bakersfield", 35.37, -119.02, 0.9),
    ("albany", 42.65, -73.75, 0.9),
    ("baton rouge", 30.45, -91.19, 0.9),
    ("el paso", 31.76, -106.49, 0.9),
    ("sarasota", 27.34, -82.53, 0.9),
    ("columbia", 34.00, -81.03, 0.8),
    ("boise", 43.62, -116.21, 0.8),
    ("colorado springs", 38.83, -104.82, 0.8),
    ("stockton", 37.96, -121.29, 0.8),
    ("cape coral", 26.56, -81.95, 0.8),
    ("little rock", 34.75, -92.29, 0.7),
    ("des moines", 41.59, -93.62, 0.7),
    ("syracuse", 43.05, -76.15, 0.7),
    ("springfield", 42.10, -72.59, 0.7),
    ("wichita", 37.69, -97.34, 0.6),
    ("spokane", 47.66, -117.43, 0.6),
    ("chattanooga", 35.05, -85.31, 0.6),
    ("augusta", 33.47, -81.97, 0.6),
    ("harrisburg", 40.27, -76.88, 0.6),
    ("jackson", 32.30, -90.18, 0.6),
    ("portland me", 43.66, -70.26, 0.6),
    ("huntsville", 34.73, -86.59, 0.5),
    ("reno", 39.53, -119.81, 0.5),
    ("montgomery", 32.37, -86.30, 0.4),
    ("mobile", 30.69, -88.04, 0.4),
    ("savannah", 32.08, -81.09, 0.4),
    ("tallahassee", 30.44, -84.28, 0.4),
]


def main():
    rows = round((LAT_MAX - LAT_MIN) / STEP)
    cols = round((LON_MAX - LON_MIN) / STEP)
    rad = math.pi / 180.0

    # pixel centers and areas, row 0 at the southern edge
    lats = [LAT_MIN + (i + 0.5) * STEP for i in range(rows)]
    lons = [LON_MIN + (j + 0.5) * STEP for j in range(cols)]
    band = [
        R_KM * R_KM * (STEP * rad) *
        (math.sin((LAT_MIN + (i + 1) * STEP) * rad) -
         math.sin((LAT_MIN + i * STEP) * rad)) for i in range(rows)
    ]

    mass = [[0.0] * cols for _ in range(rows)]
    for _, mlat, mlon, pop in METROS:
        sigma = min(60.0, 20.0 + 3.0 * pop)  # km; big metros sprawl
        coslat = math.cos(mlat * rad)
        kernel = [[0.0] * cols for _ in range(rows)]
        norm = 0.0
        for i in range(rows):
            dy = (lats[i] - mlat) * 111.0
            if abs(dy) > 4 * sigma:
                continue
            for j in range(cols):
                dx = (lons[j] - mlon) * 111.0 * coslat
                r2 = dx * dx + dy * dy
                if r2 > 16 * sigma * sigma:
                    continue
                w = math.exp(-r2 / (2 * sigma * sigma)) * band[i]
                kernel[i][j] = w
                norm += w
        for i in range(rows):
            for j in range(cols):
                if kernel[i][j]:
                    mass[i][j] += pop * 1e6 * kernel[i][j] / norm

    metro_total = sum(map(sum, mass))
    area_total = sum(band) * cols
    rural = (TOTAL_POPULATION - metro_total) / area_total
    density = [[mass[i][j] / band[i] + rural for j in range(cols)]
               for i in range(rows)]

    out = os.path.join(os.path.dirname(__file__), "..", "data",
                       "fig1_population.csv")
    with open(out, "w", newline="\n") as f:
        f.write("# Synthetic contiguous-US population density, people/km^2.\n")
        f.write("# Gaussian metro splats plus flat rural background, "
                "331e6 people total.\n")
        f.write("# Regenerate with scripts/gen_us_population.py. "
                "Rows run south to north.\n")
        f.write(f"rows={rows} cols={cols} {LAT_MIN} {LAT_MAX} "
                f"{LON_MIN} {LON_MAX}\n")
        for i in range(rows):
            f.write(",".join("%.6g" % density[i][j]
                             for j in range(cols)) + "\n")
    print(f"wrote {out}: {rows}x{cols}, "
          f"metro {metro_total / 1e6:.1f}M + rural {rural:.3f}/km^2")


if __name__ == "__main__":
    main()
