"""Built-in demonstration dataset: 13 prefecture-level cities of the
Beijing-Tianjin-Hebei region.

Distances are intercity traffic mileage in kilometers; the attribute is
resident population from the 2000 and 2010 censuses (the source tables are
unitless; the magnitudes are consistent with units of 10^4 persons). The
data is embedded here rather than fetched so that everything, including
the acceptance tests, runs offline; export_bth_csv() writes the same data
as the two CSV files the command line documents, which doubles as a format
example.
"""

from __future__ import annotations

import os
from functools import lru_cache

from .io import write_distance_csv, write_values_csv
from .matrices import DistanceMatrix, Kernel
from .variables import AttributeVector
from .verification import Dataset

BTH_LABELS = (
    "Beijing", "Tianjin", "Shijiazhuang", "Tanshan", "Qinhuangdao",
    "Handan", "Xingtai", "Baoding", "Zhangjiakou", "Chengde",
    "Cangzhou", "Langfang", "Hengshui",
)

# Intercity traffic mileage, km; symmetric with zero diagonal.
BTH_DISTANCES = (
    (0.0, 160.8855, 321.7625, 185.4770, 288.9055, 479.9810, 430.2520, 187.1300, 198.1975, 194.5940, 233.4440, 83.2755, 299.7580),
    (160.8855, 0.0, 344.5825, 101.4105, 242.6355, 454.8400, 425.3890, 201.9420, 332.9375, 280.6470, 138.6135, 86.1555, 259.8555),
    (321.7625, 344.5825, 0.0, 423.7510, 568.1560, 167.2815, 114.0840, 138.9090, 430.8215, 506.6400, 221.7565, 283.2495, 142.5935),
    (185.4770, 101.4105, 423.7510, 0.0, 151.3880, 547.4205, 517.8910, 289.5120, 376.8000, 185.3500, 215.0285, 144.6130, 352.4360),
    (288.9055, 242.6355, 568.1560, 151.3880, 0.0, 711.7120, 662.2960, 433.9170, 481.3360, 222.2030, 375.5205, 292.9180, 508.4835),
    (479.9810, 454.8400, 167.2815, 547.4205, 711.7120, 0.0, 53.4600, 296.7465, 606.6940, 664.8585, 335.0465, 440.4685, 214.2995),
    (430.2520, 425.3890, 114.0840, 517.8910, 662.2960, 53.4600, 0.0, 245.8830, 557.3515, 615.1295, 299.4430, 391.1260, 167.0325),
    (187.1300, 201.9420, 138.9090, 289.5120, 433.9170, 296.7465, 245.8830, 0.0, 278.0950, 372.0075, 150.5130, 147.8300, 144.8405),
    (198.1975, 332.9375, 430.8215, 376.8000, 481.3360, 606.6940, 557.3515, 278.0950, 0.0, 372.8730, 411.7425, 257.5700, 455.2955),
    (194.5940, 280.6470, 506.6400, 185.3500, 222.2030, 664.8585, 615.1295, 372.0075, 372.8730, 0.0, 407.1040, 259.8085, 495.3555),
    (233.4440, 138.6135, 221.7565, 215.0285, 375.5205, 335.0465, 299.4430, 150.5130, 411.7425, 407.1040, 0.0, 149.7245, 140.0620),
    (83.2755, 86.1555, 283.2495, 144.6130, 292.9180, 440.4685, 391.1260, 147.8300, 257.5700, 259.8085, 149.7245, 0.0, 237.8790),
    (299.7580, 259.8555, 142.5935, 352.4360, 508.4835, 214.2995, 167.0325, 144.8405, 455.2955, 495.3555, 140.0620, 237.8790, 0.0),
)

BTH_POPULATION = {
    "2000": (949.6688, 531.3702, 193.0579, 140.3887, 70.7267, 107.1068,
             53.6282, 90.2496, 79.6580, 32.5821, 44.3561, 29.5879, 24.5229),
    "2010": (1555.2378, 885.6234, 275.6871, 163.7579, 95.1872, 111.7417,
             63.7797, 98.0177, 90.0218, 49.8293, 48.9701, 46.6539, 38.2976),
}

DEMO_NAMES = ("bth2000", "bth2010")

DISTANCES_FILENAME = "bth_distances.csv"
POPULATION_FILENAME = "bth_population.csv"


@lru_cache(maxsize=1)
def load_bth() -> tuple[DistanceMatrix, AttributeVector, AttributeVector]:
    """The embedded data as (distances, population 2000, population 2010)."""
    d = DistanceMatrix.from_array(BTH_LABELS, BTH_DISTANCES)
    p2000 = AttributeVector.from_values(BTH_LABELS, BTH_POPULATION["2000"])
    p2010 = AttributeVector.from_values(BTH_LABELS, BTH_POPULATION["2010"])
    return d, p2000, p2010


def bth_dataset(name: str, kernel: Kernel = Kernel.inverse()) -> Dataset:
    """Demo dataset by name, ``bth2000`` or ``bth2010``."""
    if name not in DEMO_NAMES:
        raise ValueError(f"unknown demo dataset {name!r}, expected one of {DEMO_NAMES}")
    d, p2000, p2010 = load_bth()
    return Dataset(d, p2000 if name == "bth2000" else p2010, kernel)


def export_bth_csv(directory: str) -> tuple[str, str]:
    """Write the demo data as the documented CSV files; returns their paths."""
    d, p2000, p2010 = load_bth()
    dist_path = os.path.join(directory, DISTANCES_FILENAME)
    pop_path = os.path.join(directory, POPULATION_FILENAME)
    write_distance_csv(dist_path, d)
    write_values_csv(pop_path, BTH_LABELS, [("2000", p2000.x), ("2010", p2010.x)])
    return dist_path, pop_path
