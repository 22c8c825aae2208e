"""shared defaults for the power, channel and solver models"""

# PA and base-station consumption of the reference scenario
P_MAX_WATTS = 1.0
ETA_MAX = 0.22
# a 10 dB back-off keeps OFDM PAs in their linear region
BACKOFF_DB = 10.0
P_FIX_WATTS = 15.0
CIRCUIT_WATTS = 0.7
# antennas below this output power count as switched off
ACTIVE_POWER_THRESHOLD_WATTS = 1e-9

# noise and cell geometry
NOISE_DBM = -96.0
U_MIN_M = 35.0
U_MAX_M = 250.0

# path loss beta_dB = PATHLOSS_INTERCEPT_DB - PATHLOSS_SLOPE_DB * log10(u)
PATHLOSS_INTERCEPT_DB = -35.3
PATHLOSS_SLOPE_DB = 37.6
# gamma_dB = SINR_SLOPE_DB * log10(beta / SINR_REFERENCE)
SINR_SLOPE_DB = 5.0
SINR_REFERENCE = 4.86e-14

# frequency-correlated channel (exponential power-delay profile)
CORRELATION_TAPS = 8
CORRELATION_DECAY = 3.0

# fixed point iteration
FP_TOLERANCE = 1e-4
FP_MAX_ITERATIONS = 2000
FP_INITIAL_POWER = 1.0
FP_DEAD_ANTENNA_FLOOR = 1e-12
FP_REGULARIZATION = 0.0
FP_MAX_REGULARIZATION = 1e-10

# Gram solves beyond this condition estimate are treated as singular
GRAM_CONDITION_LIMIT = 1e12
ZF_TOLERANCE = 1e-9

# brute-force oracle
ORACLE_STARTS = 8
ORACLE_MAX_M = 8
ORACLE_MAX_K = 4
ORACLE_MAX_Q = 8
ORACLE_GRADIENT_TOLERANCE = 1e-8
ORACLE_STEPS_PER_DIMENSION = 200
ORACLE_GRID_MAX_M = 4096

# harness
REALIZATIONS = 200
CSV_FLOAT_FORMAT = '%.9g'
