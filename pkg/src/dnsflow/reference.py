"""Published numbers for the 5-bus case study, used for reproduction checks.

Per-bus values are signed: negative = generation not served, positive =
demand not served. Keys are case numbers 1-3.
"""

LOSSLESS_FLOWS_MW = {
    "T1": 74.85, "T2": 25.15, "T3": 40.83, "T4": 15.98, "T5": 61.39, "T6": 22.78, "T7": 13.61,
}
LOSSY_FROM_MW = {
    "T1": 77.94, "T2": 28.83, "T3": 40.19, "T4": 16.81, "T5": 63.17, "T6": 23.70, "T7": 13.40,
}
LOSSY_TO_MW = {
    "T1": 73.56, "T2": 28.68, "T3": 40.03, "T4": 16.62, "T5": 61.73, "T6": 23.38, "T7": 13.27,
}

LOSSLESS_PER_BUS_MW = {
    1: (-24.9, 0.0, 9.0, 15.9, 0.0),
    2: (-25.0, 0.1, 9.0, 15.9, 0.0),
    3: (-25.0, -36.2, 9.0, 15.9, 36.4),
}
LOSSLESS_DNS_PM_MW = {1: 24.9, 2: 25.0, 3: 61.3}
LOSSLESS_DNS_MCMF_MW = {1: 0.0, 2: 25.0, 3: 25.0}
MAX_FLOW_MW = {1: 200.0, 2: 175.0, 3: 175.0}
WHEELING_LOSS_MW = {1: 43.7, 2: 40.8, 3: 77.2}

LOSSY_PER_BUS_MW = {
    1: (-27.9, 0.0, 8.4, 15.0, 0.0),
    2: (-31.8, -3.68, 8.4, 15.0, 0.0),
    3: (-31.8, -34.5, 8.4, 15.0, 36.7),
}
LOSSY_DNS_MW = {1: 23.4, 2: 23.4, 3: 60.3}
LOSSY_GNS_MW = {1: 27.9, 2: 35.5, 3: 66.3}
LOSSY_GAP_MW = {1: 4.5, 2: 12.1, 3: 6.0}

UNDERESTIMATE_FACTOR_CASE3 = 2.45
