#!/usr/bin/env python3
"""Generate the bundled 20-country synthetic panel used by the test suite.

Output is deterministic: python3 tools/make_fixture.py > tests/data/synthetic_20.csv
"""
import csv
import random
import sys

COUNTRIES = [
    "Arvenia", "Belmora", "Calidor", "Dravosk", "Estany", "Fenmark", "Galvia", "Hollin",
    "Istara", "Jorvik", "Kaldera", "Lunesse", "Merrow", "Norland", "Ostrava", "Pellan",
    "Quorra", "Rivenn", "Sollace", "Tamsin",
]
HIGH_RISK = set(COUNTRIES[:7])
YEARS = range(2011, 2022)


def category(value, cuts):
    names = ["Very Low", "Low", "Medium", "High", "Very High"]
    for name, cut in zip(names, cuts):
        if value < cut:
            return name
    return names[-1]


def main():
    rng = random.Random(20240611)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow([
        "Region", "WRI", "Exposure", "Vulnerability", "Susceptibility",
        "Lack of Coping Capabilities", "Lack of Adaptive Capacities", "Year",
        "Exposure Category", "WRI Category", "Vulnerability Category", "Susceptibility Category",
    ])
    for country in COUNTRIES:
        high = country in HIGH_RISK
        base_exp = rng.uniform(28.0, 40.0) if high else rng.uniform(4.0, 12.0)
        base_sus = rng.uniform(30.0, 45.0) if high else rng.uniform(12.0, 24.0)
        base_cop = rng.uniform(75.0, 88.0) if high else rng.uniform(45.0, 65.0)
        base_ada = rng.uniform(50.0, 62.0) if high else rng.uniform(28.0, 42.0)
        for year in YEARS:
            t = year - 2011
            exp = base_exp + 0.25 * t + rng.gauss(0.0, 0.6)
            sus = base_sus - 0.2 * t + rng.gauss(0.0, 0.5)
            cop = base_cop - 0.1 * t + rng.gauss(0.0, 0.5)
            ada = base_ada + rng.gauss(0.0, 0.5)
            vul = (sus + cop + ada) / 3.0
            wri = (exp * vul) ** 0.5
            writer.writerow([
                country, f"{wri:.2f}", f"{exp:.2f}", f"{vul:.2f}", f"{sus:.2f}",
                f"{cop:.2f}", f"{ada:.2f}", year,
                category(exp, [6, 10, 16, 26]), category(wri, [6, 9, 14, 24]),
                category(vul, [32, 40, 48, 56]), category(sus, [16, 22, 28, 36]),
            ])


if __name__ == "__main__":
    main()
