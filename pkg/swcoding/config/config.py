# config.py

# LLR magnitude clamp, natural-log units.
LLR_MAX = 30.0

DECODER_CONFIG = {
    "max_iterations": 100,
    "damping": 0.0,
    "early_stop": True,
}

CONSTRUCTION_CONFIG = {
    # swap attempts allowed while removing parallel edges from a random socket permutation
    "max_swaps": 100000,
}

ORACLE_CONFIG = {
    "max_n": 16,
}

SIMULATION_CONFIG = {
    "trials": 100,
    "jobs": 1,
    "mode": "asymmetric",
}

SERVICE_CONFIG = {
    "host": "0.0.0.0",
    "port": 5945,
    "origins": [
        "http://localhost:8501",
    ],
}

LOGGING_CONFIG = {
    "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
    "default_level": "WARNING",
}
