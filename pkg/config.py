# Global Configuration File

import os

from dotenv import load_dotenv

# Values below can be overridden from the environment or a local .env file,
# e.g. SUBBASIS_DEFAULT_FUEL=200000
load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(f"SUBBASIS_{name}")
    return int(value) if value else default


# Fuel and name prefixes
DEFAULT_FUEL = _env_int("DEFAULT_FUEL", 10**5)  # Step budget for semi-decisions and realizers
DEFAULT_PREFIX = _env_int("DEFAULT_PREFIX", 32)  # Name positions emitted by the CLI
CHECK_FUEL = _env_int("CHECK_FUEL", 2000)  # Per-sample budget inside sampled checks

# Δ-codes (bit-set coding of finite sets)
FINSET_MATERIALIZE_LIMIT = 1 << 16  # Largest member for which the Δ-code natural is ever built
FINSET_DECIMAL_LIMIT = 256  # Δ-codes with a member at or above this are written as "{a,b}"

# Precision (in bits) of approximate tests on computable reals
MEMBER_PRECISION = _env_int("MEMBER_PRECISION", 64)  # Membership tests in registry worlds
ORACLE_PRECISION = _env_int("ORACLE_PRECISION", 256)  # Test oracles comparing registry reals

# Sampling
AXIOM_PAIR_SAMPLE = _env_int("AXIOM_PAIR_SAMPLE", 1000)  # Code pairs drawn by check_axioms
POINT_SAMPLE = _env_int("POINT_SAMPLE", 100)  # Points drawn by sampled checks
ADAPTER_SAMPLE = _env_int("ADAPTER_SAMPLE", 100)  # (point, target) pairs drawn by check_adapter
COVER_DEPTH = _env_int("COVER_DEPTH", 24)  # Cover entries inspected by the Lacombe check
EVENTUAL_DEPTH = _env_int("EVENTUAL_DEPTH", 16)  # Name positions read by the non-uniform adapter check
SAMPLE_SEED = _env_int("SAMPLE_SEED", 20240601)

# Worlds
DEFAULT_WORLD = os.getenv("SUBBASIS_DEFAULT_WORLD", "R-rational")
REGISTRY_DEFAULT_SLOTS = ["pi", "e", "sqrt2"]
KSPACE_DEFAULT_FUEL = _env_int("KSPACE_DEFAULT_FUEL", 1000)  # F in K_F
KSPACE_STEPS_PER_PROGRAM = 50  # Program 2i halts after 100*i steps, odd programs never halt

# Logging
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
